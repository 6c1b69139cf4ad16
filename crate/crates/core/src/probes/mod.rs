//! Deciders for the definable sets and constructions, and a bounded
//! first-order evaluator used to cross-check them.

pub mod definable;
pub mod delta;
pub mod domain;
pub mod fc;
pub mod formula;
pub mod rigidity;
pub mod tree;

pub use definable::{PhiEvidence, PhiResult};
pub use delta::DeltaReport;
pub use domain::DomainOutcome;
pub use fc::FcReport;
pub use formula::{fo_eval, BoundedModel, Formula, Term, Var};
pub use rigidity::RigidityReport;
pub use tree::{ClauseCheck, TreeNode, TreeWitness};
