//! Numeric and exact-arithmetic laboratory for continuous qubit-independent
//! errors acting on the 5-qubit perfect code.
//!
//! Every quantity of interest (variances of the disturbed and corrected
//! states, syndrome probabilities, quantum variance and fidelity) is
//! available through three independent routes:
//!
//! * closed forms in [`analytics`], fed by quadrature moments of an
//!   [`errormodel::ErrorDistribution`];
//! * exact polynomial algebra in [`symbolic`], built from the code tables of
//!   [`code5`] with rational coefficients;
//! * seeded, parallel and reproducible Monte Carlo estimators in
//!   [`montecarlo`].
//!
//! Basis convention shared by every module: qubit 0 is the most significant
//! bit of a computational-basis index.

pub mod analytics;
pub mod code5;
pub mod errormodel;
pub mod montecarlo;
pub mod quadrature;
pub mod statevec;
pub mod symbolic;

mod error;

pub use error::{Error, Result};
