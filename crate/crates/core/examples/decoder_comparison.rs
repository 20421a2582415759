//! Peeling against ML decoding on the Golay code: one pattern in detail,
//! then per-weight failure counts.

use stopred::code::golay_extended;
use stopred::columns::ColumnSet;
use stopred::decoder::{compare_decoders, ml_decode, peel};

fn main() -> stopred::error::Result<()> {
    let golay = golay_extended();
    let h = golay.parity_check();

    // a size-4 stopping set of the standard matrix
    let erased = ColumnSet::from_indices(24, [0, 13, 14, 18])?;
    let it = peel(h, &erased);
    let ml = ml_decode(h, &erased);
    println!("erased {:?}: peeling {} (residual {:?}), ML {}", erased.to_vec(), it.success, it.residual.to_vec(), ml.success);

    let report = compare_decoders(h, 1..=12, 7, 100_000, 1)?;
    println!("{:>3} {:>9} {:>9} {:>9} {:>13}", "w", "tested", "peel", "ML", "disagreements");
    for row in &report.weights {
        println!(
            "{:>3} {:>9} {:>9} {:>9} {:>13}",
            row.w, row.tested, row.iterative_fail, row.ml_fail, row.disagreements
        );
    }
    Ok(())
}
