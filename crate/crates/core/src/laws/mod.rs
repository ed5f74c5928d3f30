//! The algebra layer: barycentric and Wasserstein algebras, law checks and
//! randomized batches of them.

pub mod algebra;
pub mod checks;
pub mod report;
pub mod suite;
