//! Finitely supported probability measures over metric spaces, exact
//! Wasserstein-p distances, and executable checks of the barycentric,
//! convex-space, midpoint and Wasserstein algebra laws.
//!
//! Everything numeric is generic over [`Scalar`], which is implemented for
//! `f64` (float mode) and [`Rational`] (exact mode). In exact mode every
//! comparison is made on p-th powers of distances so that no roots are
//! taken.
//!
//! ```
//! use std::sync::Arc;
//! use wassalg::{Measure, Order, RealLine, wasserstein};
//!
//! let line = Arc::new(RealLine);
//! let a = Measure::<f64, _>::dirac(line.clone(), 2.0).unwrap();
//! let b = Measure::dirac(line, 5.0).unwrap();
//! assert_eq!(wasserstein(&a, &b, Order::new(3.0).unwrap()).unwrap(), 3.0);
//! ```

pub mod error;
pub mod experiments;
pub mod io;
pub mod laws;
pub mod measure;
pub mod metric;
pub mod sampling;
pub mod scalar;
pub mod transport;

pub use error::{Error, Result};
pub use laws::algebra::{
    convex_combination, dyadic_combination, free_extension, midpoint, Affine, Barycentric,
    Midpoint, WassersteinAlgebra,
};
pub use laws::report::{LawReport, Outcome};
pub use measure::{Measure, MomentValue};
pub use metric::{
    check_metric_axioms, product_distance, Euclidean, FiniteMetric, MetricSpace, PointOrd,
    Product, RealLine,
};
pub use scalar::{Mode, Order, Rational, Scalar};
pub use transport::{
    brute_force_oracle, coupling_convex_sum, marginals, optimal_coupling, wasserstein,
    wasserstein_1d, Coupling, TransportResult,
};
