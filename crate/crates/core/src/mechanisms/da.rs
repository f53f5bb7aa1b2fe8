//! Round-by-round deferred acceptance with a full trace.
//!
//! In every round all students rejected in the previous round (all students
//! in round 1) apply to their next acceptable school. Each school pools its
//! new applicants with the students it already holds, keeps the best `q_s` by
//! priority and rejects the rest. A student whose list is exhausted takes the
//! outside option; this is logged in a closing round with no applications, so
//! the last round of a trace never contains a rejection.

use crate::model::{Matching, SchoolChoiceProblem, SchoolId, StudentId};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ProposingSide {
    Students,
    Schools,
}

/// What happened at one school in one round.
///
/// For student-proposing runs `applicants` are the students who applied this
/// round. For school-proposing runs they are the students the school
/// proposed to, `held` are the students holding its offer after the round and
/// `rejected` are the students who turned it down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchoolRound {
    pub school: SchoolId,
    pub applicants: Vec<StudentId>,
    pub held: Vec<StudentId>,
    pub rejected: Vec<StudentId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DaRound {
    /// Only schools with activity, in school order.
    pub schools: Vec<SchoolRound>,
    /// Students who ran out of acceptable schools this round.
    pub exhausted: Vec<StudentId>,
}

impl DaRound {
    pub fn has_rejections(&self) -> bool {
        self.schools.iter().any(|s| !s.rejected.is_empty())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DaTrace {
    pub side: Option<ProposingSide>,
    /// `rounds[0]` is round 1.
    pub rounds: Vec<DaRound>,
}

impl DaTrace {
    pub fn num_rounds(&self) -> usize {
        self.rounds.len()
    }

    /// Holds per school after the last round in which the school was active.
    pub fn final_holds(&self, num_schools: usize) -> Vec<Vec<StudentId>> {
        let mut holds = vec![Vec::new(); num_schools];
        for round in &self.rounds {
            for sr in &round.schools {
                holds[sr.school.index()] = sr.held.clone();
            }
        }
        holds
    }

    /// Schools that rejected at least one student anywhere in the run.
    pub fn rejecting_schools(&self) -> Vec<SchoolId> {
        let mut out: Vec<SchoolId> = self
            .rounds
            .iter()
            .flat_map(|r| r.schools.iter())
            .filter(|sr| !sr.rejected.is_empty())
            .map(|sr| sr.school)
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

pub fn deferred_acceptance(problem: &SchoolChoiceProblem, side: ProposingSide) -> (Matching, DaTrace) {
    match side {
        ProposingSide::Students => {
            let all_students = vec![true; problem.num_students()];
            let all_schools = vec![true; problem.num_schools()];
            let prefs: Vec<&[SchoolId]> = problem.students().map(|i| problem.preference_list(i)).collect();
            let (assignment, trace) = run_student_proposing(problem, &prefs, &all_students, &all_schools);
            (Matching::from_vec_unchecked(assignment), trace)
        }
        ProposingSide::Schools => run_school_proposing(problem),
    }
}

/// Student-optimal stable matching.
pub fn student_proposing_da(problem: &SchoolChoiceProblem) -> Matching {
    deferred_acceptance(problem, ProposingSide::Students).0
}

/// Core student-proposing engine over a sub-market.
///
/// `prefs` overrides the problem's preference lists; inactive students do not
/// take part (their entry in the result is `None`) and closed schools are
/// skipped when students walk down their lists.
pub(crate) fn run_student_proposing(
    problem: &SchoolChoiceProblem,
    prefs: &[&[SchoolId]],
    active: &[bool],
    open: &[bool],
) -> (Vec<Option<SchoolId>>, DaTrace) {
    let n = problem.num_students();
    let m = problem.num_schools();
    let mut next = vec![0usize; n];
    let mut held: Vec<Vec<StudentId>> = vec![Vec::new(); m];
    let mut applying: Vec<StudentId> = problem.students().filter(|i| active[i.index()]).collect();
    let mut rounds = Vec::new();

    while !applying.is_empty() {
        let mut new_apps: Vec<Vec<StudentId>> = vec![Vec::new(); m];
        let mut exhausted = Vec::new();
        for &i in &applying {
            let list = prefs[i.index()];
            while next[i.index()] < list.len() && !open[list[next[i.index()]].index()] {
                next[i.index()] += 1;
            }
            match list.get(next[i.index()]) {
                Some(&s) => {
                    next[i.index()] += 1;
                    new_apps[s.index()].push(i);
                }
                None => exhausted.push(i),
            }
        }

        let mut round = DaRound {
            schools: Vec::new(),
            exhausted,
        };
        let mut rejected_now = Vec::new();
        for s in problem.schools() {
            let apps = std::mem::take(&mut new_apps[s.index()]);
            if apps.is_empty() {
                continue;
            }
            let mut pool: Vec<StudentId> = held[s.index()].iter().chain(apps.iter()).copied().collect();
            pool.sort_by_key(|&i| problem.rank_of_student(s, i));
            let rejected = pool.split_off(problem.quota(s).min(pool.len()));
            held[s.index()] = pool.clone();
            rejected_now.extend(rejected.iter().copied());
            round.schools.push(SchoolRound {
                school: s,
                applicants: apps,
                held: pool,
                rejected,
            });
        }
        rounds.push(round);
        rejected_now.sort();
        applying = rejected_now;
    }

    let mut assignment = vec![None; n];
    for s in problem.schools() {
        for &i in &held[s.index()] {
            assignment[i.index()] = Some(s);
        }
    }
    (
        assignment,
        DaTrace {
            side: Some(ProposingSide::Students),
            rounds,
        },
    )
}

fn run_school_proposing(problem: &SchoolChoiceProblem) -> (Matching, DaTrace) {
    let n = problem.num_students();
    let m = problem.num_schools();
    // next position in each school's priority order
    let mut next = vec![0usize; m];
    let mut outstanding = vec![0usize; m];
    let mut holding: Vec<Option<SchoolId>> = vec![None; n];
    let mut rounds = Vec::new();

    loop {
        let mut offers: Vec<Vec<SchoolId>> = vec![Vec::new(); n];
        let mut proposed: Vec<Vec<StudentId>> = vec![Vec::new(); m];
        for s in problem.schools() {
            let order = problem.priority_order(s);
            while outstanding[s.index()] < problem.quota(s) && next[s.index()] < order.len() {
                let i = order[next[s.index()]];
                next[s.index()] += 1;
                outstanding[s.index()] += 1;
                offers[i.index()].push(s);
                proposed[s.index()].push(i);
            }
        }
        if proposed.iter().all(Vec::is_empty) {
            break;
        }

        let mut rejected: Vec<Vec<StudentId>> = vec![Vec::new(); m];
        for i in problem.students() {
            if offers[i.index()].is_empty() {
                continue;
            }
            let mut candidates = offers[i.index()].clone();
            if let Some(cur) = holding[i.index()] {
                candidates.push(cur);
            }
            let best = candidates
                .iter()
                .copied()
                .filter(|&s| problem.is_acceptable(i, s))
                .min_by_key(|&s| problem.rank_of_school(i, Some(s)));
            for &s in &candidates {
                if Some(s) != best {
                    outstanding[s.index()] -= 1;
                    rejected[s.index()].push(i);
                }
            }
            holding[i.index()] = best;
        }

        let mut round = DaRound::default();
        for s in problem.schools() {
            if proposed[s.index()].is_empty() && rejected[s.index()].is_empty() {
                continue;
            }
            let held: Vec<StudentId> = problem
                .students()
                .filter(|i| holding[i.index()] == Some(s))
                .collect();
            let mut rej = std::mem::take(&mut rejected[s.index()]);
            rej.sort();
            round.schools.push(SchoolRound {
                school: s,
                applicants: std::mem::take(&mut proposed[s.index()]),
                held,
                rejected: rej,
            });
        }
        rounds.push(round);
    }

    (
        Matching::from_vec_unchecked(holding),
        DaTrace {
            side: Some(ProposingSide::Schools),
            rounds,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::is_stable;

    #[test]
    fn single_student_single_school_matches_in_one_round() {
        let mut b = SchoolChoiceProblem::builder();
        b.student("a").unwrap();
        b.school("x", 1).unwrap();
        b.preference("a", &["x"]).unwrap();
        let p = b.build().unwrap();
        let (mu, trace) = deferred_acceptance(&p, ProposingSide::Students);
        assert_eq!(mu.render(&p), "a:x");
        assert_eq!(trace.num_rounds(), 1);
        assert!(!trace.rounds[0].has_rejections());
    }

    #[test]
    fn exhausted_students_are_unassigned() {
        let mut b = SchoolChoiceProblem::builder();
        b.student("a").unwrap().student("b").unwrap();
        b.school("x", 1).unwrap();
        b.preference("a", &["x"]).unwrap();
        b.preference("b", &["x"]).unwrap();
        b.priority("x", &["b", "a"]).unwrap();
        let p = b.build().unwrap();
        for side in [ProposingSide::Students, ProposingSide::Schools] {
            let (mu, trace) = deferred_acceptance(&p, side);
            assert_eq!(mu.render(&p), "a:none b:x", "{side:?}");
            assert!(!trace.rounds.last().unwrap().has_rejections());
        }
        let (_, trace) = deferred_acceptance(&p, ProposingSide::Students);
        assert_eq!(trace.num_rounds(), 2);
        assert_eq!(trace.rounds[1].exhausted, vec![p.student_id("a").unwrap()]);
    }

    #[test]
    fn quotas_hold_the_best_applicants() {
        let mut b = SchoolChoiceProblem::builder();
        for s in ["a", "b", "c"] {
            b.student(s).unwrap();
        }
        b.school("x", 2).unwrap().school("y", 1).unwrap();
        for s in ["a", "b", "c"] {
            b.preference(s, &["x", "y"]).unwrap();
        }
        b.priority("x", &["c", "a", "b"]).unwrap();
        let p = b.build().unwrap();
        let (mu, trace) = deferred_acceptance(&p, ProposingSide::Students);
        assert_eq!(mu.render(&p), "a:x b:y c:x");
        assert!(is_stable(&p, &mu));
        let holds = trace.final_holds(p.num_schools());
        assert_eq!(holds[0].len(), 2);
        assert_eq!(trace.rejecting_schools(), vec![p.school_id("x").unwrap()]);
    }

    #[test]
    fn school_proposing_skips_unacceptable_students() {
        let mut b = SchoolChoiceProblem::builder();
        b.student("a").unwrap().student("b").unwrap();
        b.school("x", 1).unwrap().school("y", 1).unwrap();
        b.preference("a", &["y"]).unwrap();
        b.preference("b", &["x", "y"]).unwrap();
        b.priority("x", &["a", "b"]).unwrap();
        b.priority("y", &["b", "a"]).unwrap();
        let p = b.build().unwrap();
        let school = deferred_acceptance(&p, ProposingSide::Schools).0;
        let student = deferred_acceptance(&p, ProposingSide::Students).0;
        assert_eq!(school.render(&p), "a:y b:x");
        assert_eq!(student, school);
    }
}
