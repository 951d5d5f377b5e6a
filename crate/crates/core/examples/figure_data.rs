//! Plot-ready data for the cluster-count comparison.

use paiwca::config::Algorithm;
use paiwca::report::{default_out_dir, figure_export, Figure, FigureOptions};

fn main() -> paiwca::Result<()> {
    let opts = FigureOptions {
        seeds: (1..=5).collect(),
        algorithms: vec![Algorithm::Paiwca, Algorithm::Wca, Algorithm::Mwis],
        ..FigureOptions::default()
    };
    let path = figure_export(Figure::Clusters, &opts, &default_out_dir())?;
    print!("{}", std::fs::read_to_string(&path).expect("just written"));
    Ok(())
}
