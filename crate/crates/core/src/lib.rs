//! Intrinsic dimension of point clouds from Fisher separability.
//!
//! ```
//! use fisher_dim::synthdata::{generate, SyntheticSpec};
//! use fisher_dim::Estimator;
//!
//! // uniform sample of S^5 in R^6
//! let x = generate(&SyntheticSpec::sphere(5, 1000, 1)).unwrap();
//! let est = Estimator::default().estimate(&x).unwrap();
//! assert_eq!(est.k(), 6);
//! assert!((est.n_hat() - 6.0).abs() < 1.5);
//! ```

pub mod baselines;
pub mod battery;
pub mod cli;
pub mod error;
pub mod estimator;
pub mod io;
pub mod matrix;
pub mod preprocess;
pub mod separability;
pub mod specfun;
pub mod synthdata;

pub use error::{FisherError, Result};
pub use estimator::{estimate_dimension, Estimator, FisherEstimate};
pub use matrix::DataMatrix;
