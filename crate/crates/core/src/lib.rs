//! School choice mechanisms and the tools to compare them.
//!
//! The crate runs student- and school-proposing deferred acceptance, EADA
//! under any consent structure (and, for full consent, by settling
//! under-demanded schools), and TTC on top of DA. Around them sit the
//! envy-digraph machinery (trading cycles, feedback sets, cycle trades) and
//! exhaustive oracles over small instances: every matching that weakly
//! dominates DA, the maximum number of students that can be improved, the
//! Pareto frontier with its inclusion-minimal blocking sets, and all stable
//! matchings.
//!
//! Students and schools are addressed by [`StudentId`] and [`SchoolId`],
//! which index into a [`SchoolChoiceProblem`] in declaration order. The
//! outside option is `None` wherever a school is optional.

pub mod envy;
mod error;
pub mod format;
pub mod instances;
pub mod mechanisms;
pub mod model;
pub mod oracle;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use mechanisms::{
    da_ttc, deferred_acceptance, eada, eada_full_consent_underdemanded, find_interrupters,
    student_proposing_da, ttc_from_endowment, Mechanism, ProposingSide,
};
pub use model::{
    blocking_pairs, desires, dominates, envies, improved_set, is_nonwasteful, is_stable,
    weakly_dominates, BlockingPair, BlockingSet, ConsentStructure, Matching, Rank,
    SchoolChoiceProblem, SchoolId, StudentId,
};
