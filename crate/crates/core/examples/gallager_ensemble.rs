//! Gallager (J, K) ensemble: one sampled matrix, then ensemble-average
//! estimates up to the maximal rank.

use stopred::bounds::{ensemble_bound, SearchOptions};
use stopred::code::{sample_gallager, EnsembleSpec};
use stopred::estimator::{epsilon_for_confidence, estimate_ensemble_spectrum};

fn main() -> stopred::error::Result<()> {
    let (n, j, k) = (20, 3, 5);
    let code = sample_gallager(n, j, k, 7)?;
    println!("{}", code.parity_check());
    let spec = EnsembleSpec::Gallager { n, j, k };
    println!("rows {}, rank of this sample {}, r_max {}", spec.rows(), code.r(), spec.r_max());

    let ell = spec.r_max();
    let eps = epsilon_for_confidence(0.95, ell)?;
    let est = estimate_ensemble_spectrum(&spec, ell, &vec![50_000; ell], &vec![eps; ell], 7)?;
    for s in &est.sizes {
        println!("{:>3} {:>9.6} {:>8}", s.i, s.x_bar, s.u_hat);
    }
    let b = ensemble_bound(n, &est.u_hat_f64(), spec.rows(), ell, &SearchOptions::default())?;
    println!("average rho_{ell} <= {:.2} (confidence {:.2})", b.value.as_f64(), est.confidence);
    Ok(())
}
