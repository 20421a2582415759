//! Greedy redundant parity-check matrices for the Golay code.
//!
//! `cargo run --release --example greedy_cover [ell] [restarts] [out.alist]`

use stopred::code::golay_extended;
use stopred::greedy::{greedy_extend, GreedyOptions};
use stopred::io::{save_matrix_file, MatrixFormat};
use stopred::stopping::{spectrum_exhaustive, DEFAULT_SUBSET_BUDGET};

fn main() -> stopred::error::Result<()> {
    let mut args = std::env::args().skip(1);
    let ell: usize = args.next().map_or(7, |s| s.parse().expect("ell"));
    let restarts: usize = args.next().map_or(5, |s| s.parse().expect("restarts"));
    let out = args.next();

    let golay = golay_extended();
    let opts = GreedyOptions {
        restarts,
        ..Default::default()
    };
    let res = greedy_extend(&golay, ell, 42, &opts)?;
    println!("{} coverable stopping-set candidates up to size {ell}", res.list_size);
    for run in &res.runs {
        println!("restart {:>2}: {:>4} rows ({} added for rank)", run.restart, run.rows, run.completion_rows);
    }
    println!("best: {} rows", res.rows());

    let left = spectrum_exhaustive(&res.matrix, ell, true, DEFAULT_SUBSET_BUDGET)?;
    println!("coverable stopping sets left: {:?}", left.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    if let Some(path) = out {
        save_matrix_file(&res.matrix, path.as_ref(), MatrixFormat::from_path(path.as_ref()))?;
        println!("wrote {path}");
    }
    Ok(())
}
