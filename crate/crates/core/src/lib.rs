pub mod catalog;
pub mod characterize;
pub mod coeff;
pub mod engine;
pub mod expr;
pub mod weyl;
