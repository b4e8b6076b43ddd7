//! Data-driven feedback generation for introductory programming exercises.
//!
//! An incorrect MiniImp program is repaired by retrieving syntactically close
//! correct programs from a corpus, aligning their variables and statements
//! with the submission, and searching for the smallest subset of the
//! resulting fixes that makes the test suite pass.

pub mod align;
pub mod embed;
pub mod feedback;
pub mod harness;
pub mod interp;
pub mod lang;
pub mod pipeline;
pub mod repair;
pub mod search;
pub mod synth;

pub use embed::{CharacteristicVector, EmbedError, Norm, Pacv};
pub use feedback::{Feedback, FeedbackLevel};
pub use interp::{RunOutcome, Status, TestCase, TestSuite, Value};
pub use lang::{Ast, CfSignature, Node, NodeId, SyntaxError};
pub use pipeline::{feedback_generation, repair_ast, PipelineError, Repair, RepairConfig};
pub use repair::{Fix, FixKind, MinimalFixSet, RepairError};
pub use search::{CorpusIndex, Mode};
