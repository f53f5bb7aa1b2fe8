use std::fmt::Write as _;

use super::problem::{SchoolChoiceProblem, SchoolId, StudentId};
use crate::error::{Error, Result};

/// A total assignment of students to schools. `None` is the outside option,
/// which has unbounded capacity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    assignment: Vec<Option<SchoolId>>,
}

impl Matching {
    /// Validates quotas and identifiers against `problem`.
    pub fn new(problem: &SchoolChoiceProblem, assignment: Vec<Option<SchoolId>>) -> Result<Self> {
        if assignment.len() != problem.num_students() {
            return Err(Error::Argument(format!(
                "assignment covers {} students, problem has {}",
                assignment.len(),
                problem.num_students()
            )));
        }
        let mut load = vec![0usize; problem.num_schools()];
        for s in assignment.iter().flatten() {
            if s.index() >= problem.num_schools() {
                return Err(Error::Argument(format!("school index {} out of range", s.index())));
            }
            load[s.index()] += 1;
        }
        for s in problem.schools() {
            if load[s.index()] > problem.quota(s) {
                return Err(Error::Argument(format!(
                    "school `{}` holds {} students, quota is {}",
                    problem.school_name(s),
                    load[s.index()],
                    problem.quota(s)
                )));
            }
        }
        Ok(Matching { assignment })
    }

    pub(crate) fn from_vec_unchecked(assignment: Vec<Option<SchoolId>>) -> Self {
        Matching { assignment }
    }

    /// Builds a matching from `(student, school)` name pairs; unnamed
    /// students get the outside option.
    pub fn from_names(problem: &SchoolChoiceProblem, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut assignment = vec![None; problem.num_students()];
        for &(student, school) in pairs {
            let i = problem.student_id(student)?;
            assignment[i.index()] = problem.placement_id(school)?;
        }
        Matching::new(problem, assignment)
    }

    pub fn school_of(&self, i: StudentId) -> Option<SchoolId> {
        self.assignment[i.index()]
    }

    pub fn as_slice(&self) -> &[Option<SchoolId>] {
        &self.assignment
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn students_at(&self, s: SchoolId) -> impl Iterator<Item = StudentId> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter(move |(_, a)| **a == Some(s))
            .map(|(i, _)| StudentId::new(i))
    }

    pub fn load(&self, s: SchoolId) -> usize {
        self.assignment.iter().filter(|a| **a == Some(s)).count()
    }

    /// `i1:s2 i2:s1 ...` in declaration order.
    pub fn render(&self, problem: &SchoolChoiceProblem) -> String {
        let mut out = String::new();
        for (k, a) in self.assignment.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            let _ = write!(
                out,
                "{}:{}",
                problem.student_name(StudentId::new(k)),
                problem.placement_name(*a)
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem() -> SchoolChoiceProblem {
        let mut b = SchoolChoiceProblem::builder();
        b.student("a").unwrap().student("b").unwrap();
        b.school("x", 1).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn quota_is_enforced() {
        let p = problem();
        assert!(Matching::from_names(&p, &[("a", "x"), ("b", "x")]).is_err());
        let m = Matching::from_names(&p, &[("a", "x")]).unwrap();
        assert_eq!(m.render(&p), "a:x b:none");
        assert_eq!(m.load(p.school_id("x").unwrap()), 1);
    }

    #[test]
    fn wrong_length_is_rejected() {
        let p = problem();
        assert!(Matching::new(&p, vec![None]).is_err());
    }
}
