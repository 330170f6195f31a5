//! Exact genus-0 and genus-1 Gromov-Witten calculus on the small phase
//! space: truncated power series, cohomology models, potentials, the
//! Frobenius-manifold operations and the genus-1 Virasoro checks.

pub mod builtin;
pub mod frobenius;
pub mod model;
pub mod potentials;
pub mod scalar;
pub mod series;
pub mod virasoro;

pub use num_rational::BigRational;

pub use crate::frobenius::{Calculus, VectorField, Verdict};
pub use crate::model::{CohomologyModel, ModelError};
pub use crate::potentials::{build_potential, GwPotential, InvariantEntry, PotentialError};
pub use crate::scalar::Scalar;
pub use crate::series::{Bound, Monomial, Series, SeriesError, Window};
pub use crate::virasoro::CheckReport;

pub type Rational = BigRational;
pub type QSeries = Series<Rational>;
pub type QModel = CohomologyModel<Rational>;
pub type QPotential = GwPotential<Rational>;
pub type QField = VectorField<Rational>;
pub type QEntry = InvariantEntry<Rational>;
