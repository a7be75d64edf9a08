//! Subsequential transducers with outputs in a monoid.
//!
//! * [`monoid`] — the output monoids and their left-gcd, division and
//!   invertibility structure;
//! * [`transducer`] — machines and their partial semantics;
//! * [`format`] — the machine document format and DOT export;
//! * [`minimize`] — the reach / total / prefix / observe pipeline;
//! * [`oracle`] — membership and equivalence oracles, isomorphism checks;
//! * [`learner`] — active learning from membership and equivalence queries.

pub mod error;
pub mod format;
pub mod learner;
pub mod minimize;
pub mod monoid;
pub mod oracle;
pub mod random;
pub mod samples;
pub mod transducer;

pub use error::{Error, Result};
pub use learner::{learn, Defect, LearnStats, Learner, Limits, ObservationTable};
pub use minimize::{check_minimal, minimize, StagedMinimization};
pub use monoid::{Element, Monoid, MonoidKind, MonoidSpec, PartialValue};
pub use oracle::{
    equivalence, equivalence_oracle, iso_check, membership_oracle, EquivalenceOracle,
    EquivalenceVerdict, MembershipOracle,
};
pub use transducer::{Letter, StateId, Transducer, Word};
