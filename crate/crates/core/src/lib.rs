//! Exact computer algebra for pseudo-differential operators.
//!
//! * [`diffpoly`]: differential polynomials over graded fields, total and
//!   variational derivatives.
//! * [`psido`]: Leibniz composition of operators `Σ c_i ∂^i`, residues,
//!   projections and the residue pairing.
//! * [`roots`]: fractional powers `L^{1/n}` of monic Lax operators.
//! * [`hierarchy`]: KdV (`sl2`) and Boussinesq (`sl3`) Lax flows and their
//!   checks.
//! * [`structure`]: randomized suites for closure, duality and grading.
//! * [`report`] and [`fixtures`]: reference tables and their term-level diff.

pub mod diffpoly;
pub mod error;
pub mod fixtures;
pub mod hierarchy;
pub mod psido;
pub mod report;
pub mod roots;
pub mod structure;

pub use diffpoly::{DiffPoly, FieldRegistry, FieldSymbol, Jet, PowerProduct, Rational, Spin};
pub use error::{Error, Result};
pub use hierarchy::{Basis, FlowSystem, Hierarchy};
pub use psido::{DegreeWindow, PsiDO};
pub use report::DiscrepancyReport;
pub use roots::{LaxOperator, RootSeries};
