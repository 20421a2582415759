//! Exhaustive stopping-set spectrum of the extended Golay code.
//!
//! `cargo run --release --example golay_spectrum [ell]`

use stopred::code::golay_extended;
use stopred::stopping::{spectrum_exhaustive, DEFAULT_SUBSET_BUDGET};

fn main() -> stopred::error::Result<()> {
    let ell: usize = std::env::args().nth(1).map_or(12, |s| s.parse().expect("ell"));
    let golay = golay_extended();
    let h = golay.parity_check();
    println!("{h}");

    let all = spectrum_exhaustive(h, ell, false, DEFAULT_SUBSET_BUDGET)?;
    let coverable = spectrum_exhaustive(h, ell, true, DEFAULT_SUBSET_BUDGET)?;
    println!("{:>3} {:>10} {:>10}", "i", "stopping", "coverable");
    for i in 1..=ell {
        println!("{i:>3} {:>10} {:>10}", all.u(i), coverable.u(i));
    }
    let distance = (1..=ell).find(|&i| all.u(i) > &0u32.into());
    println!("stopping distance: {distance:?}");
    Ok(())
}
