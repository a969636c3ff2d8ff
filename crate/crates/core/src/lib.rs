pub mod error;
pub mod fiber;
pub mod field;
pub mod fitting;
pub mod linalg;
pub mod matrix_rep;
mod par;
pub mod poly;
pub mod report;
pub mod sample;
pub mod surface;
