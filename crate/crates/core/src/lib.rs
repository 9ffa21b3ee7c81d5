pub mod commutator;
pub mod engine;
pub mod error;
pub mod exact;
pub mod ext;
pub mod fock;
pub mod hvec;
pub mod par;
pub mod props;
pub mod report;
pub mod zhu;

pub use engine::{Engine, LatticeExp};
pub use error::{Error, Result};
pub use exact::Rational;
pub use fock::{FockVector, GeneratorProfile, Ground, Monomial, Sector};
