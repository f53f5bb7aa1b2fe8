mod matching;
mod problem;
mod stability;

pub use matching::Matching;
pub use problem::{
    ConsentStructure, ProblemBuilder, Rank, SchoolChoiceProblem, SchoolId, StudentId, OUTSIDE_OPTION,
};
pub use stability::{
    blocking_pairs, desires, dominates, envies, improved_over, improved_set, is_nonwasteful,
    is_stable, weakly_dominates, BlockingPair, BlockingSet,
};
pub(crate) use stability::envies_unchecked;
