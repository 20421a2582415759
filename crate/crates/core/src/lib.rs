pub mod bounds;
pub mod cli;
pub mod code;
pub mod columns;
pub mod combin;
pub mod decoder;
pub mod error;
pub mod estimator;
pub mod gf2;
pub mod greedy;
pub mod io;
pub mod rng;
pub mod stopping;
