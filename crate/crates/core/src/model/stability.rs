//! Envy, blocking pairs, stability and Pareto dominance.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::matching::Matching;
use super::problem::{SchoolChoiceProblem, SchoolId, StudentId};
use crate::error::{Error, Result};
use crate::mechanisms::student_proposing_da;

/// `i` strictly prefers `s` to its current assignment.
pub fn desires(problem: &SchoolChoiceProblem, mu: &Matching, i: StudentId, s: SchoolId) -> bool {
    problem.rank_of_school(i, Some(s)) < problem.rank_of_school(i, mu.school_of(i))
}

/// `i` strictly prefers `j`'s assignment to its own.
pub fn envies(problem: &SchoolChoiceProblem, mu: &Matching, i: StudentId, j: StudentId) -> Result<bool> {
    if i == j {
        return Err(Error::Argument(format!(
            "envy of `{}` towards itself is undefined",
            problem.student_name(i)
        )));
    }
    Ok(envies_unchecked(problem, mu, i, j))
}

pub(crate) fn envies_unchecked(problem: &SchoolChoiceProblem, mu: &Matching, i: StudentId, j: StudentId) -> bool {
    problem.rank_of_school(i, mu.school_of(j)) < problem.rank_of_school(i, mu.school_of(i))
}

/// A student–school pair whose priority is violated, with every student
/// holding a seat at the school with lower priority (the blocking triplets).
///
/// Equality and ordering only look at `(student, school)`.
#[derive(Clone, Debug)]
pub struct BlockingPair {
    pub student: StudentId,
    pub school: SchoolId,
    pub violators: Vec<StudentId>,
}

impl BlockingPair {
    pub fn key(&self) -> (StudentId, SchoolId) {
        (self.student, self.school)
    }
}

impl PartialEq for BlockingPair {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for BlockingPair {}

impl PartialOrd for BlockingPair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BlockingPair {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// The set B(μ), sorted by student then school.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct BlockingSet {
    pairs: Vec<BlockingPair>,
}

impl BlockingSet {
    pub fn pairs(&self) -> &[BlockingPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn keys(&self) -> BTreeSet<(StudentId, SchoolId)> {
        self.pairs.iter().map(BlockingPair::key).collect()
    }

    pub fn contains(&self, i: StudentId, s: SchoolId) -> bool {
        self.pairs.binary_search_by(|p| p.key().cmp(&(i, s))).is_ok()
    }

    pub fn is_subset(&self, other: &BlockingSet) -> bool {
        self.pairs.iter().all(|p| other.contains(p.student, p.school))
    }

    pub fn is_strict_subset(&self, other: &BlockingSet) -> bool {
        self.len() < other.len() && self.is_subset(other)
    }

    /// `{(i7,s1), (i2,s1)}` style, sorted.
    pub fn render(&self, problem: &SchoolChoiceProblem) -> String {
        let mut out = String::from("{");
        for (k, p) in self.pairs.iter().enumerate() {
            if k > 0 {
                out.push_str(", ");
            }
            let _ = write!(
                out,
                "({},{})",
                problem.student_name(p.student),
                problem.school_name(p.school)
            );
        }
        out.push('}');
        out
    }

    /// Blocking pairs as `(student, school)` name pairs.
    pub fn names<'a>(&self, problem: &'a SchoolChoiceProblem) -> BTreeSet<(&'a str, &'a str)> {
        self.pairs
            .iter()
            .map(|p| (problem.student_name(p.student), problem.school_name(p.school)))
            .collect()
    }
}

/// All blocking pairs of `mu`: `i` desires `s` and some student at `s` has
/// lower priority than `i` there. The outside option never blocks.
pub fn blocking_pairs(problem: &SchoolChoiceProblem, mu: &Matching) -> BlockingSet {
    let mut holders: Vec<Vec<StudentId>> = vec![Vec::new(); problem.num_schools()];
    for j in problem.students() {
        if let Some(s) = mu.school_of(j) {
            holders[s.index()].push(j);
        }
    }
    let mut pairs = Vec::new();
    for i in problem.students() {
        for s in problem.schools() {
            if !desires(problem, mu, i, s) {
                continue;
            }
            let ri = problem.rank_of_student(s, i);
            let violators: Vec<StudentId> = holders[s.index()]
                .iter()
                .copied()
                .filter(|&j| ri < problem.rank_of_student(s, j))
                .collect();
            if !violators.is_empty() {
                pairs.push(BlockingPair {
                    student: i,
                    school: s,
                    violators,
                });
            }
        }
    }
    BlockingSet { pairs }
}

/// Every desired school is filled to quota.
pub fn is_nonwasteful(problem: &SchoolChoiceProblem, mu: &Matching) -> bool {
    problem.schools().all(|s| {
        mu.load(s) == problem.quota(s) || problem.students().all(|i| !desires(problem, mu, i, s))
    })
}

pub fn is_stable(problem: &SchoolChoiceProblem, mu: &Matching) -> bool {
    is_nonwasteful(problem, mu) && blocking_pairs(problem, mu).is_empty()
}

pub fn weakly_dominates(problem: &SchoolChoiceProblem, mu: &Matching, nu: &Matching) -> bool {
    problem
        .students()
        .all(|i| problem.rank_of_school(i, mu.school_of(i)) <= problem.rank_of_school(i, nu.school_of(i)))
}

pub fn dominates(problem: &SchoolChoiceProblem, mu: &Matching, nu: &Matching) -> bool {
    weakly_dominates(problem, mu, nu)
        && problem
            .students()
            .any(|i| problem.rank_of_school(i, mu.school_of(i)) < problem.rank_of_school(i, nu.school_of(i)))
}

/// Students strictly better off in `mu` than in `baseline`; `mu` must weakly
/// dominate `baseline`.
pub fn improved_over(
    problem: &SchoolChoiceProblem,
    mu: &Matching,
    baseline: &Matching,
) -> Result<BTreeSet<StudentId>> {
    if !weakly_dominates(problem, mu, baseline) {
        let hurt: Vec<&str> = problem
            .students()
            .filter(|&i| {
                problem.rank_of_school(i, mu.school_of(i)) > problem.rank_of_school(i, baseline.school_of(i))
            })
            .map(|i| problem.student_name(i))
            .collect();
        return Err(Error::Domination(format!(
            "matching is worse than the baseline for {}",
            hurt.join(", ")
        )));
    }
    Ok(problem
        .students()
        .filter(|&i| {
            problem.rank_of_school(i, mu.school_of(i)) < problem.rank_of_school(i, baseline.school_of(i))
        })
        .collect())
}

/// I(μ,P): students improved over the student-proposing DA outcome.
pub fn improved_set(problem: &SchoolChoiceProblem, mu: &Matching) -> Result<BTreeSet<StudentId>> {
    let da = student_proposing_da(problem);
    improved_over(problem, mu, &da)
}
