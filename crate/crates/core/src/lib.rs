//! Conditional knowledge bases under ranking semantics.
//!
//! This crate implements ordinal conditional functions (ranking functions)
//! over finite propositional signatures, the symbolic conditional structure
//! of worlds as elements of free abelian groups, conditional indifference
//! and the principle of conditional preservation, the construction of
//! c-representations and c-revisions by solving the associated inequality
//! system, system-Z and system-Z* for comparison, and the qualitative
//! postulates CR5–CR8.
//!
//! All arithmetic is exact: ranks are integers (with infinity), group
//! exponents are integers, and the linear characterizations are decided over
//! arbitrary-precision rationals. There is no floating point and no
//! tolerance parameter anywhere.

pub mod construct;
pub mod error;
pub mod indifference;
mod linalg;
pub mod logic;
pub mod postulates;
pub mod ranking;
pub mod structures;
pub mod zsystems;

pub use error::{Error, Result};
pub use logic::{
    parse_conditional, parse_formula, parse_kb, parse_kb_with_cap, Conditional, Formula, Indicator,
    KnowledgeBase, Signature, World, WorldSet,
};
pub use ranking::{Rank, RelativeChange, OCF};
