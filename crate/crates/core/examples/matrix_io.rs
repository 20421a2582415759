//! Reading and writing parity-check matrices, and recovering erased bits.

use stopred::code::golay_extended;
use stopred::columns::ColumnSet;
use stopred::decoder::ml_decode_values;
use stopred::gf2::{BinaryVector, ReceivedWord};
use stopred::io::{load_matrix, save_matrix, MatrixFormat};

fn main() -> stopred::error::Result<()> {
    let golay = golay_extended();
    let h = golay.parity_check();

    let alist = save_matrix(h, MatrixFormat::Alist);
    println!("{alist}");
    let back = load_matrix(&alist, MatrixFormat::Alist)?;
    assert_eq!(back.parity_check(), h);
    println!("{}", save_matrix(h, MatrixFormat::Dense));

    // erase seven positions of a codeword and fill them back in
    let codeword = h.null_space_basis().into_iter().take(3).fold(BinaryVector::zeros(24), |mut acc, v| {
        acc.xor_assign(&v);
        acc
    });
    let erased = ColumnSet::from_indices(24, [1, 4, 6, 9, 15, 20, 23])?;
    let mut values = codeword.clone();
    for i in erased.iter() {
        values.set(i, false);
    }
    let recovered = ml_decode_values(h, &ReceivedWord { values, erased })?;
    println!("codeword  {codeword}");
    println!("recovered {}", recovered.as_ref().map(|v| v.to_string()).unwrap_or_default());
    assert_eq!(recovered, Some(codeword));
    Ok(())
}
