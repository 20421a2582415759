//! Monte Carlo upper limits on the Golay coverable spectrum next to the
//! exact counts.
//!
//! `cargo run --release --example confidence_estimates [samples] [seed]`

use stopred::code::golay_extended;
use stopred::estimator::{epsilon_for_confidence, estimate_spectrum};
use stopred::stopping::{spectrum_exhaustive, DEFAULT_SUBSET_BUDGET};

fn main() -> stopred::error::Result<()> {
    let mut args = std::env::args().skip(1);
    let samples: u64 = args.next().map_or(100_000, |s| s.parse().expect("samples"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));
    let golay = golay_extended();
    let ell = 12;

    let eps = epsilon_for_confidence(0.95, ell)?;
    let est = estimate_spectrum(&golay, ell, &vec![samples; ell], &vec![eps; ell], seed)?;
    let exact = spectrum_exhaustive(golay.parity_check(), ell, true, DEFAULT_SUBSET_BUDGET)?;

    println!("joint confidence {:.3}, eps per size {eps:.5}", est.confidence);
    println!("{:>3} {:>9} {:>10} {:>10}", "i", "x_bar", "upper", "exact");
    for s in &est.sizes {
        println!("{:>3} {:>9.6} {:>10} {:>10}", s.i, s.x_bar, s.u_hat, exact.u(s.i));
    }
    Ok(())
}
