//! Average stopping redundancy over the standard random ensemble: the exact
//! mean spectrum next to a Monte Carlo estimate.

use stopred::bounds::{ensemble_bound, sre_mean_spectrum, SearchOptions};
use stopred::code::EnsembleSpec;
use stopred::estimator::{epsilon_for_confidence, estimate_ensemble_spectrum};

fn main() -> stopred::error::Result<()> {
    let opts = SearchOptions::default();
    println!("{:>3} {:>3} {:>12}", "n", "m", "bound");
    for n in (6..=24).step_by(6) {
        for m in [n - n / 3, n / 2, n / 3] {
            let mean = sre_mean_spectrum(n, m, m)?;
            let b = ensemble_bound(n, &mean.values, m, m, &opts)?;
            println!("{n:>3} {m:>3} {:>12.3}", b.value.as_f64());
        }
    }

    let (n, m) = (12, 6);
    let eps = epsilon_for_confidence(0.95, m)?;
    let est = estimate_ensemble_spectrum(&EnsembleSpec::Sre { n, m }, m, &[200_000; 6], &[eps; 6], 11)?;
    let mean = sre_mean_spectrum(n, m, m)?;
    println!("\nSRE({n},{m}) mean spectrum, exact vs upper limit from sampling:");
    for (s, exact) in est.sizes.iter().zip(&mean.values) {
        println!("{:>3} {:>10.3} {:>10}", s.i, exact, s.u_hat);
    }
    let b = ensemble_bound(n, &est.u_hat_f64(), m, m, &opts)?;
    println!("estimated bound {:.3}", b.value.as_f64());
    Ok(())
}
