//! Exact ℓ1-regularization paths and estimates for linear regression:
//! the full lasso solution path via least-angle regression with the lasso
//! modification, and the Dantzig selector via a self-contained two-phase
//! revised simplex, plus the diabetes benchmark data and a replicated
//! RMSE simulation harness for comparing the two estimators.
//!
//! ```
//! use l1path::data::{diabetes64, StandardizeMode};
//! use l1path::lars;
//!
//! let design = diabetes64(StandardizeMode::UnitL2Norm);
//! let path = lars::lasso_path(&design.x, &design.y, 500, 1e-10).unwrap();
//! assert!((path.first_lambda() - 949.4353).abs() < 1e-3);
//! ```

pub mod dantzig;
pub mod data;
pub mod lars;
pub mod linalg;
pub mod lp;
pub mod sim;

#[cfg(doctest)]
mod book;
