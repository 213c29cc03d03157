//! Clifford modules, pairs of mutually commuting Clifford algebra actions and
//! the Pati-Salam finite real spectral triple, checked numerically with dense
//! linear algebra.

pub mod clifford;
pub mod commuting;
pub mod error;
pub mod io;
pub mod liealg;
pub mod linalg;
pub mod report;
pub mod spectral;

pub use clifford::{CliffordModule, MetricTensor, SignTriple, Signature};
pub use error::{Error, Result};
pub use linalg::{AntilinearOp, ComplexMatrix, C64, DEFAULT_TOL};
pub use report::{Report, SuiteConfig};
pub use spectral::{RealStructureVariant, SpectralTriple};
