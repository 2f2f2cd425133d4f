//! SAT benchmark layer over `refine-core`: DIMACS input, CNF construction,
//! experiment orchestration and CSV output.

pub mod cnf;
pub mod dimacs;
pub mod experiment;
