//! Closed-form upper bounds on the stopping redundancy for a few codes.

use stopred::bounds::{hs_bound, sv_report};

fn main() -> stopred::error::Result<()> {
    let codes = [("Golay [24,12,8]", 24, 12, 8), ("QR [48,24,12]", 48, 24, 12), ("Tanner [155,64,20]", 155, 64, 20)];
    for (name, n, k, d) in codes {
        let r = n - k;
        let sv = sv_report(r, d);
        let hs = hs_bound(n, d, r)?;
        println!("{name:<20} binomial sum {:>22}   probabilistic {:>9}", sv.value, hs.value);
    }
    Ok(())
}
