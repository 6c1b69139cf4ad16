//! Exact computations in finite-rank Coxeter groups, with most of the
//! machinery specialised to right-angled systems.

pub mod affine;
pub mod ball;
pub mod classify;
pub mod endo;
pub mod error;
pub mod heap;
pub mod linrep;
pub mod matrix;
pub mod probes;
pub mod raag;
pub mod racg;
pub mod suite;
pub mod system;
pub mod tits;
pub mod walls;
pub mod word;

pub use ball::Ball;
pub use classify::{classify, ComponentReport, ComponentType};
pub use endo::{ComplexityMatrix, Endo, EndoClass, EndoKind, F2LinearMap};
pub use error::{CoxError, Result};
pub use racg::{Centralizer, CyclicDecomposition, Order};
pub use system::{CoxeterSystem, Gen, Label};
pub use word::GroupElement;
