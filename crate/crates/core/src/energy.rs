//! Battery model with role-dependent drain.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyState {
    residual: f64,
    max: f64,
}

impl EnergyState {
    /// Fully charged battery of capacity `max` joules.
    pub fn full(max: f64) -> Self {
        Self { residual: max, max }
    }

    pub fn new(residual: f64, max: f64) -> Result<Self> {
        if !(max > 0.0) || !max.is_finite() {
            return Err(Error::param("e_max", "must be positive and finite"));
        }
        if !(0.0..=max).contains(&residual) {
            return Err(Error::param(
                "e_residual",
                format!("must lie in [0, {max}]"),
            ));
        }
        Ok(Self { residual, max })
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    /// Residual charge as a fraction of capacity.
    pub fn fraction(&self) -> f64 {
        self.residual / self.max
    }

    pub fn is_depleted(&self) -> bool {
        self.residual <= 0.0
    }
}

/// Which drain rate applies to a node during a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DrainRole {
    ClusterHead,
    Member,
    Unassigned,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyModel {
    /// Watts drawn by a node outside any cluster.
    pub drain_idle: f64,
    pub drain_member: f64,
    pub drain_ch: f64,
    /// Joules per transmitted packet.
    pub cost_tx: f64,
    /// Joules per received packet.
    pub cost_rx: f64,
}

impl Default for EnergyModel {
    fn default() -> Self {
        Self {
            drain_idle: 0.01,
            drain_member: 0.02,
            drain_ch: 0.1,
            cost_tx: 0.001,
            cost_rx: 0.001,
        }
    }
}

impl EnergyModel {
    /// A model that never drains anything.
    pub fn lossless() -> Self {
        Self {
            drain_idle: 0.0,
            drain_member: 0.0,
            drain_ch: 0.0,
            cost_tx: 0.0,
            cost_rx: 0.0,
        }
    }

    /// Checks `drain_ch > drain_member >= drain_idle >= 0` and non-negative packet costs.
    /// The all-zero lossless model is accepted as well.
    pub fn validate(&self) -> Result<()> {
        if *self == Self::lossless() {
            return Ok(());
        }
        if !(self.drain_idle >= 0.0) {
            return Err(Error::param("energy.drain_idle", "must be >= 0"));
        }
        if !(self.drain_member >= self.drain_idle) {
            return Err(Error::param("energy.drain_member", "must be >= drain_idle"));
        }
        if !(self.drain_ch > self.drain_member) {
            return Err(Error::param("energy.drain_ch", "must be > drain_member"));
        }
        if !(self.cost_tx >= 0.0) {
            return Err(Error::param("energy.cost_tx", "must be >= 0"));
        }
        if !(self.cost_rx >= 0.0) {
            return Err(Error::param("energy.cost_rx", "must be >= 0"));
        }
        Ok(())
    }

    pub fn drain(&self, role: DrainRole) -> f64 {
        match role {
            DrainRole::ClusterHead => self.drain_ch,
            DrainRole::Member => self.drain_member,
            DrainRole::Unassigned => self.drain_idle,
        }
    }
}

/// Drains one step worth of energy; the result is clamped at zero.
pub fn consume_step(
    s: &EnergyState,
    role: DrainRole,
    model: &EnergyModel,
    dt: f64,
    tx_count: u64,
    rx_count: u64,
) -> EnergyState {
    debug_assert!(dt > 0.0);
    let spent =
        model.drain(role) * dt + model.cost_tx * tx_count as f64 + model.cost_rx * rx_count as f64;
    EnergyState {
        residual: (s.residual - spent).max(0.0),
        max: s.max,
    }
}

/// Energy consumed so far (`P_v`), in joules.
pub fn consumed_power(s: &EnergyState) -> f64 {
    s.max - s.residual
}
