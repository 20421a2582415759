//! Hierarchy bounds for the Golay code, seeded with the full matrix and
//! with a single row of optimal weight.

use stopred::bounds::{hierarchy_bound_xi1, u_single_row, w_opt_candidates, xi2_bound, SearchOptions};
use stopred::code::golay_extended;
use stopred::stopping::{spectrum_exhaustive, DEFAULT_SUBSET_BUDGET};

fn main() -> stopred::error::Result<()> {
    let golay = golay_extended();
    let (n, m, r) = (golay.n(), golay.m(), golay.r());
    let opts = SearchOptions::default();
    let u = spectrum_exhaustive(golay.parity_check(), r, true, DEFAULT_SUBSET_BUDGET)?;

    println!("{:>3} {:>8} {:>8} {:>8}", "ell", "u_ell", "full", "relaxed");
    for ell in 1..=r {
        let full = hierarchy_bound_xi1(&u, r, m, r, ell, &opts)?;
        let relaxed = xi2_bound(&u, m, ell, &opts)?;
        println!("{ell:>3} {:>8} {:>8} {:>8}", u.u(ell), full.value, relaxed.value);
    }

    for ell in [7, 12] {
        let w = w_opt_candidates(n, ell)?.best();
        let single = u_single_row(n, w, ell)?;
        let b = hierarchy_bound_xi1(&single, r, 1, 1, ell, &opts)?;
        let seeded = u_single_row(n, 8, ell)?;
        let b8 = hierarchy_bound_xi1(&seeded, r, 1, 1, ell, &opts)?;
        println!("ell = {ell}: one row of weight {w} gives {}, one row of weight 8 gives {}", b.value, b8.value);
    }
    Ok(())
}
