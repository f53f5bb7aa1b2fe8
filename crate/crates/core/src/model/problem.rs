use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Name used for the outside option (being unassigned) in text and reports.
/// It may not be declared as a school or appear in any list.
pub const OUTSIDE_OPTION: &str = "none";

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StudentId(usize);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SchoolId(usize);

impl StudentId {
    pub(crate) fn new(index: usize) -> Self {
        StudentId(index)
    }

    /// Position of the student in declaration order.
    pub fn index(self) -> usize {
        self.0
    }
}

impl SchoolId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Position in a strict preference order. `At(1)` is the most preferred
/// entry; `Unacceptable` sorts after every finite rank.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rank {
    At(u32),
    Unacceptable,
}

impl Rank {
    pub fn value(self) -> Option<u32> {
        match self {
            Rank::At(r) => Some(r),
            Rank::Unacceptable => None,
        }
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::At(r) => write!(f, "{r}"),
            Rank::Unacceptable => f.write_str("unacceptable"),
        }
    }
}

/// A school choice problem with strict preferences and strict priorities.
///
/// Preference lists may be truncated: unlisted schools are unacceptable and
/// rank below the outside option. Priority lists may be partial: students a
/// school does not list are appended after the listed ones, in declaration
/// order. The completed orders are materialised at construction, so every
/// rank query is a table lookup.
///
/// Ranks are taken over the declared school list (plus the outside option),
/// so a student's ranks can exceed the number of students when there are
/// more schools than students.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchoolChoiceProblem {
    students: Vec<String>,
    schools: Vec<String>,
    quotas: Vec<usize>,
    preferences: Vec<Vec<SchoolId>>,
    priorities: Vec<Vec<StudentId>>,
    // [student][school], 1-based; None = unacceptable
    preference_rank: Vec<Vec<Option<u32>>>,
    // [school][student], 1-based, completed
    priority_rank: Vec<Vec<u32>>,
    // [school] completed priority order
    completed_priorities: Vec<Vec<StudentId>>,
}

impl SchoolChoiceProblem {
    pub fn builder() -> ProblemBuilder {
        ProblemBuilder::default()
    }

    pub fn num_students(&self) -> usize {
        self.students.len()
    }

    pub fn num_schools(&self) -> usize {
        self.schools.len()
    }

    pub fn students(&self) -> impl ExactSizeIterator<Item = StudentId> + Clone {
        (0..self.students.len()).map(StudentId)
    }

    pub fn schools(&self) -> impl ExactSizeIterator<Item = SchoolId> + Clone {
        (0..self.schools.len()).map(SchoolId)
    }

    pub fn student_name(&self, i: StudentId) -> &str {
        &self.students[i.0]
    }

    pub fn school_name(&self, s: SchoolId) -> &str {
        &self.schools[s.0]
    }

    /// Display name of an assignment, with `None` meaning the outside option.
    pub fn placement_name(&self, s: Option<SchoolId>) -> &str {
        match s {
            Some(s) => self.school_name(s),
            None => OUTSIDE_OPTION,
        }
    }

    pub fn student_id(&self, name: &str) -> Result<StudentId> {
        self.students
            .iter()
            .position(|n| n == name)
            .map(StudentId)
            .ok_or_else(|| Error::invalid(format!("unknown student `{name}`")))
    }

    pub fn school_id(&self, name: &str) -> Result<SchoolId> {
        self.schools
            .iter()
            .position(|n| n == name)
            .map(SchoolId)
            .ok_or_else(|| Error::invalid(format!("unknown school `{name}`")))
    }

    /// Resolves a school name, accepting the outside option's name as `None`.
    pub fn placement_id(&self, name: &str) -> Result<Option<SchoolId>> {
        if name == OUTSIDE_OPTION {
            Ok(None)
        } else {
            self.school_id(name).map(Some)
        }
    }

    pub fn quota(&self, s: SchoolId) -> usize {
        self.quotas[s.0]
    }

    pub fn is_unit_capacity(&self) -> bool {
        self.quotas.iter().all(|&q| q == 1)
    }

    /// The student's acceptable schools, most preferred first.
    pub fn preference_list(&self, i: StudentId) -> &[SchoolId] {
        &self.preferences[i.0]
    }

    /// The priority list as declared, before completion.
    pub fn declared_priorities(&self, s: SchoolId) -> &[StudentId] {
        &self.priorities[s.0]
    }

    /// The total priority order after completion.
    pub fn priority_order(&self, s: SchoolId) -> &[StudentId] {
        &self.completed_priorities[s.0]
    }

    /// Rank of a school (or the outside option, `None`) for student `i`.
    pub fn rank_of_school(&self, i: StudentId, s: Option<SchoolId>) -> Rank {
        match s {
            None => Rank::At(self.preferences[i.0].len() as u32 + 1),
            Some(s) => match self.preference_rank[i.0][s.0] {
                Some(r) => Rank::At(r),
                None => Rank::Unacceptable,
            },
        }
    }

    /// Rank of student `i` in school `s`'s completed priority order.
    pub fn rank_of_student(&self, s: SchoolId, i: StudentId) -> u32 {
        self.priority_rank[s.0][i.0]
    }

    pub fn is_acceptable(&self, i: StudentId, s: SchoolId) -> bool {
        self.preference_rank[i.0][s.0].is_some()
    }

    /// Same problem with student preference lists replaced.
    pub fn with_preferences(&self, preferences: Vec<Vec<SchoolId>>) -> Result<Self> {
        let mut b = ProblemBuilder::default();
        for name in &self.students {
            b.student(name)?;
        }
        for (name, &q) in self.schools.iter().zip(&self.quotas) {
            b.school(name, q)?;
        }
        if preferences.len() != self.students.len() {
            return Err(Error::Argument(format!(
                "expected {} preference lists, got {}",
                self.students.len(),
                preferences.len()
            )));
        }
        for (i, list) in preferences.iter().enumerate() {
            let names: Vec<&str> = list.iter().map(|&s| self.school_name(s)).collect();
            b.preference(&self.students[i], &names)?;
        }
        for (s, list) in self.priorities.iter().enumerate() {
            let names: Vec<&str> = list.iter().map(|&i| self.student_name(i)).collect();
            b.priority(&self.schools[s], &names)?;
        }
        b.build()
    }
}

/// Incremental constructor that validates each entry as it is added, so a
/// parser can attribute failures to the offending line.
#[derive(Clone, Debug, Default)]
pub struct ProblemBuilder {
    students: Vec<String>,
    student_index: HashMap<String, usize>,
    schools: Vec<String>,
    school_index: HashMap<String, usize>,
    quotas: Vec<usize>,
    preferences: Vec<Option<Vec<SchoolId>>>,
    priorities: Vec<Option<Vec<StudentId>>>,
}

fn check_identifier(kind: &str, name: &str) -> Result<()> {
    if name.is_empty() || name.chars().any(char::is_whitespace) {
        return Err(Error::invalid(format!("{kind} name `{name}` is not a single token")));
    }
    if name == OUTSIDE_OPTION {
        return Err(Error::invalid(format!(
            "`{OUTSIDE_OPTION}` is reserved for the outside option"
        )));
    }
    Ok(())
}

impl ProblemBuilder {
    pub fn student(&mut self, name: &str) -> Result<&mut Self> {
        check_identifier("student", name)?;
        if self.student_index.contains_key(name) {
            return Err(Error::invalid(format!("duplicate student `{name}`")));
        }
        self.student_index.insert(name.to_owned(), self.students.len());
        self.students.push(name.to_owned());
        self.preferences.push(None);
        Ok(self)
    }

    pub fn school(&mut self, name: &str, quota: usize) -> Result<&mut Self> {
        check_identifier("school", name)?;
        if self.school_index.contains_key(name) {
            return Err(Error::invalid(format!("duplicate school `{name}`")));
        }
        if quota == 0 {
            return Err(Error::invalid(format!("school `{name}` has quota 0")));
        }
        self.school_index.insert(name.to_owned(), self.schools.len());
        self.schools.push(name.to_owned());
        self.quotas.push(quota);
        self.priorities.push(None);
        Ok(self)
    }

    pub fn preference(&mut self, student: &str, schools: &[&str]) -> Result<&mut Self> {
        let &i = self
            .student_index
            .get(student)
            .ok_or_else(|| Error::invalid(format!("unknown student `{student}`")))?;
        if self.preferences[i].is_some() {
            return Err(Error::invalid(format!(
                "preferences of `{student}` given twice"
            )));
        }
        let mut seen = BTreeSet::new();
        let mut list = Vec::with_capacity(schools.len());
        for &name in schools {
            if name == OUTSIDE_OPTION {
                return Err(Error::invalid(format!(
                    "outside option listed in preferences of `{student}`"
                )));
            }
            let &s = self
                .school_index
                .get(name)
                .ok_or_else(|| Error::invalid(format!("unknown school `{name}`")))?;
            if !seen.insert(s) {
                return Err(Error::invalid(format!(
                    "school `{name}` listed twice by `{student}`"
                )));
            }
            list.push(SchoolId(s));
        }
        self.preferences[i] = Some(list);
        Ok(self)
    }

    pub fn priority(&mut self, school: &str, students: &[&str]) -> Result<&mut Self> {
        if school == OUTSIDE_OPTION {
            return Err(Error::invalid("the outside option has no priorities"));
        }
        let &s = self
            .school_index
            .get(school)
            .ok_or_else(|| Error::invalid(format!("unknown school `{school}`")))?;
        if self.priorities[s].is_some() {
            return Err(Error::invalid(format!("priorities of `{school}` given twice")));
        }
        let mut seen = BTreeSet::new();
        let mut list = Vec::with_capacity(students.len());
        for &name in students {
            let &i = self
                .student_index
                .get(name)
                .ok_or_else(|| Error::invalid(format!("unknown student `{name}`")))?;
            if !seen.insert(i) {
                return Err(Error::invalid(format!(
                    "student `{name}` listed twice by `{school}`"
                )));
            }
            list.push(StudentId(i));
        }
        self.priorities[s] = Some(list);
        Ok(self)
    }

    pub fn build(&self) -> Result<SchoolChoiceProblem> {
        let n = self.students.len();
        let m = self.schools.len();
        let preferences: Vec<Vec<SchoolId>> = self
            .preferences
            .iter()
            .map(|p| p.clone().unwrap_or_default())
            .collect();
        let priorities: Vec<Vec<StudentId>> = self
            .priorities
            .iter()
            .map(|p| p.clone().unwrap_or_default())
            .collect();

        let mut preference_rank = vec![vec![None; m]; n];
        for (i, list) in preferences.iter().enumerate() {
            for (pos, s) in list.iter().enumerate() {
                preference_rank[i][s.0] = Some(pos as u32 + 1);
            }
        }

        let mut completed_priorities = Vec::with_capacity(m);
        let mut priority_rank = vec![vec![0; n]; m];
        for (s, listed) in priorities.iter().enumerate() {
            let mut order = listed.clone();
            let mut present = vec![false; n];
            for i in listed {
                present[i.0] = true;
            }
            order.extend((0..n).filter(|&i| !present[i]).map(StudentId));
            for (pos, i) in order.iter().enumerate() {
                priority_rank[s][i.0] = pos as u32 + 1;
            }
            completed_priorities.push(order);
        }

        Ok(SchoolChoiceProblem {
            students: self.students.clone(),
            schools: self.schools.clone(),
            quotas: self.quotas.clone(),
            preferences,
            priorities,
            preference_rank,
            priority_rank,
            completed_priorities,
        })
    }
}

/// Students who agree to have their priorities waived.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ConsentStructure {
    consenting: BTreeSet<StudentId>,
}

impl ConsentStructure {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn all(problem: &SchoolChoiceProblem) -> Self {
        ConsentStructure {
            consenting: problem.students().collect(),
        }
    }

    pub fn from_students(
        problem: &SchoolChoiceProblem,
        students: impl IntoIterator<Item = StudentId>,
    ) -> Result<Self> {
        let consenting: BTreeSet<StudentId> = students.into_iter().collect();
        if let Some(bad) = consenting.iter().find(|i| i.0 >= problem.num_students()) {
            return Err(Error::Argument(format!(
                "consenting student index {} out of range",
                bad.0
            )));
        }
        Ok(ConsentStructure { consenting })
    }

    pub fn from_names(problem: &SchoolChoiceProblem, names: &[&str]) -> Result<Self> {
        let ids = names
            .iter()
            .map(|n| problem.student_id(n))
            .collect::<Result<Vec<_>>>()?;
        Self::from_students(problem, ids)
    }

    pub fn contains(&self, i: StudentId) -> bool {
        self.consenting.contains(&i)
    }

    pub fn with(&self, i: StudentId) -> Self {
        let mut next = self.clone();
        next.consenting.insert(i);
        next
    }

    pub fn is_all(&self, problem: &SchoolChoiceProblem) -> bool {
        self.consenting.len() == problem.num_students()
    }

    pub fn is_empty(&self) -> bool {
        self.consenting.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = StudentId> + '_ {
        self.consenting.iter().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SchoolChoiceProblem {
        let mut b = SchoolChoiceProblem::builder();
        b.student("a").unwrap().student("b").unwrap().student("c").unwrap();
        b.school("x", 1).unwrap().school("y", 2).unwrap();
        b.preference("a", &["y", "x"]).unwrap();
        b.preference("b", &["x"]).unwrap();
        b.priority("x", &["c"]).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn preference_ranks_and_outside_option() {
        let p = small();
        let a = p.student_id("a").unwrap();
        let b = p.student_id("b").unwrap();
        let c = p.student_id("c").unwrap();
        let x = p.school_id("x").unwrap();
        let y = p.school_id("y").unwrap();
        assert_eq!(p.rank_of_school(a, Some(y)), Rank::At(1));
        assert_eq!(p.rank_of_school(a, Some(x)), Rank::At(2));
        assert_eq!(p.rank_of_school(a, None), Rank::At(3));
        assert_eq!(p.rank_of_school(b, Some(y)), Rank::Unacceptable);
        assert_eq!(p.rank_of_school(b, None), Rank::At(2));
        // empty list: the outside option is first
        assert_eq!(p.rank_of_school(c, None), Rank::At(1));
        assert!(Rank::At(u32::MAX) < Rank::Unacceptable);
    }

    #[test]
    fn priority_completion_appends_in_declaration_order() {
        let p = small();
        let x = p.school_id("x").unwrap();
        let y = p.school_id("y").unwrap();
        let names = |s| {
            p.priority_order(s)
                .iter()
                .map(|&i| p.student_name(i))
                .collect::<Vec<_>>()
        };
        assert_eq!(names(x), ["c", "a", "b"]);
        assert_eq!(names(y), ["a", "b", "c"]);
        assert_eq!(p.rank_of_student(x, p.student_id("c").unwrap()), 1);
        assert_eq!(p.rank_of_student(x, p.student_id("b").unwrap()), 3);
    }

    #[test]
    fn rejects_bad_entries() {
        let mut b = SchoolChoiceProblem::builder();
        b.student("a").unwrap();
        b.school("x", 1).unwrap();
        assert!(b.student("a").is_err());
        assert!(b.school("y", 0).is_err());
        assert!(b.school(OUTSIDE_OPTION, 1).is_err());
        assert!(b.preference("a", &["x", "x"]).is_err());
        assert!(b.preference("a", &["z"]).is_err());
        assert!(b.preference("a", &[OUTSIDE_OPTION]).is_err());
        assert!(b.priority("x", &["a", "a"]).is_err());
        assert!(b.priority("x", &["q"]).is_err());
        b.preference("a", &["x"]).unwrap();
        assert!(b.preference("a", &["x"]).is_err());
    }

    #[test]
    fn unknown_names_are_invalid_instance_errors() {
        let p = small();
        assert!(matches!(
            p.student_id("zz"),
            Err(Error::InvalidInstance { .. })
        ));
        assert!(matches!(p.school_id("zz"), Err(Error::InvalidInstance { .. })));
        assert_eq!(p.placement_id(OUTSIDE_OPTION).unwrap(), None);
    }
}
