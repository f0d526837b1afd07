pub mod coeff;
pub mod error;
pub mod harness;
pub mod newton;
pub mod residue;
pub mod series;
pub mod symbolic;
pub mod wild;
