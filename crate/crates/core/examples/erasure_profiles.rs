//! Undecodable erasure patterns and frame error rates of the Golay code
//! under peeling on the standard matrix, peeling on a greedy matrix, and ML.

use stopred::code::golay_extended;
use stopred::decoder::Decoder;
use stopred::greedy::{greedy_extend, GreedyOptions};
use stopred::stopping::{fer, undecodable_profile, ProfileMode, DEFAULT_SUBSET_BUDGET};

fn main() -> stopred::error::Result<()> {
    let golay = golay_extended();
    let h = golay.parity_check();
    let greedy = greedy_extend(&golay, 7, 3, &GreedyOptions { restarts: 3, ..Default::default() })?;

    let mode = ProfileMode::exhaustive();
    let profiles = [
        ("H", undecodable_profile(h, Decoder::Iterative, 24, mode, DEFAULT_SUBSET_BUDGET)?),
        ("greedy", undecodable_profile(&greedy.matrix, Decoder::Iterative, 24, mode, DEFAULT_SUBSET_BUDGET)?),
        ("ML", undecodable_profile(h, Decoder::Ml, 24, mode, DEFAULT_SUBSET_BUDGET)?),
    ];
    println!("greedy matrix has {} rows", greedy.rows());
    println!("{:>3} {:>9} {:>9} {:>9}", "w", "H", "greedy", "ML");
    for w in 0..=13 {
        let c = |k: usize| profiles[k].1.exact_count(w).map(|v| v.to_string()).unwrap_or_default();
        println!("{w:>3} {:>9} {:>9} {:>9}", c(0), c(1), c(2));
    }
    println!("\n{:>5} {:>11} {:>11} {:>11}", "p", "FER H", "FER greedy", "FER ML");
    for k in 1..=10 {
        let p = 0.05 * k as f64;
        let f = |i: usize| fer(&profiles[i].1, p);
        println!("{p:>5.2} {:>11.3e} {:>11.3e} {:>11.3e}", f(0)?, f(1)?, f(2)?);
    }
    Ok(())
}
