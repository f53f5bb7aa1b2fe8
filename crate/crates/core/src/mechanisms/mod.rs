//! Deferred acceptance, EADA and DA+TTC.

mod da;
mod eada;
mod ttc;

use std::fmt;

pub use da::{deferred_acceptance, student_proposing_da, DaRound, DaTrace, ProposingSide, SchoolRound};
pub use eada::{eada, eada_full_consent_underdemanded, eada_with_steps, find_interrupters, Interrupter};
pub use ttc::{da_ttc, ttc_from_endowment};


use crate::model::{ConsentStructure, Matching, SchoolChoiceProblem};

/// A mechanism selectable by name from the command line and reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mechanism {
    Da,
    DaSchool,
    Eada(ConsentStructure),
    DaTtc,
}

impl Mechanism {
    pub fn run(&self, problem: &SchoolChoiceProblem) -> Matching {
        match self {
            Mechanism::Da => student_proposing_da(problem),
            Mechanism::DaSchool => deferred_acceptance(problem, ProposingSide::Schools).0,
            Mechanism::Eada(w) => eada(problem, w),
            Mechanism::DaTtc => da_ttc(problem),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mechanism::Da => "da",
            Mechanism::DaSchool => "da-school",
            Mechanism::Eada(_) => "eada",
            Mechanism::DaTtc => "da-ttc",
        }
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
