pub mod arith;
pub mod cli;
pub mod classical;
pub mod error;
pub mod expansion;
pub mod factor;
pub mod hecke;
pub mod index;
pub mod kernel;
pub mod linalg;
pub mod poly;
pub mod rcpoly;
pub mod structure;
pub mod vvforms;
