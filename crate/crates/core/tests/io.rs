mod common;

use proptest::prelude::*;
use stopred::code::golay_extended;
use stopred::error::Error;
use stopred::io::{load_matrix, load_matrix_file, save_matrix, save_matrix_file, MatrixFormat};
use stopred::stopping::{spectrum_exhaustive, DEFAULT_SUBSET_BUDGET};

proptest! {
    #[test]
    fn round_trips(h in common::matrix_strategy(1..=12, 1..=40)) {
        for format in [MatrixFormat::Dense, MatrixFormat::Alist] {
            let text = save_matrix(&h, format);
            let back = load_matrix(&text, format).unwrap();
            prop_assert_eq!(back.parity_check(), &h);
        }
    }
}

#[test]
fn golay_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let h = golay_extended().parity_check().clone();
    for name in ["golay.alist", "golay.txt"] {
        let path = dir.path().join(name);
        let format = MatrixFormat::from_path(&path);
        save_matrix_file(&h, &path, format).unwrap();
        let code = load_matrix_file(&path, format).unwrap();
        assert_eq!(code.parity_check(), &h);
        let u = spectrum_exhaustive(code.parity_check(), 4, false, DEFAULT_SUBSET_BUDGET).unwrap();
        assert_eq!(u.u(4).to_string(), "110");
    }
}

#[test]
fn alist_zero_degree_columns() {
    // the middle column is empty and its list is a blank line
    let text = "3 1\n1 2\n1 0 1\n2\n1\n\n1\n1 3\n";
    let code = load_matrix(text, MatrixFormat::Alist).unwrap();
    assert_eq!(code.parity_check().to_string(), "101\n");
    let padded = "3 1\n1 2\n1 0 1\n2\n1\n0\n1\n1 3\n";
    assert_eq!(load_matrix(padded, MatrixFormat::Alist).unwrap().parity_check(), code.parity_check());
    let trailing = "3 1\n1 2\n1 0 1\n2\n1\n\n1\n1 3\n2\n";
    assert!(load_matrix(trailing, MatrixFormat::Alist).is_err());
}

#[test]
fn malformed_input_reports_lines() {
    match load_matrix("# n=3 m=2\n101\n1x1\n", MatrixFormat::Dense) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("unexpected {other:?}"),
    }
    match load_matrix("101\n10\n", MatrixFormat::Dense) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("unexpected {other:?}"),
    }
}
