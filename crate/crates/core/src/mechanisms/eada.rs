//! Efficiency-adjusted deferred acceptance.

use std::collections::BTreeMap;

use super::da::{run_student_proposing, DaTrace, ProposingSide};
use crate::model::{ConsentStructure, Matching, SchoolChoiceProblem, SchoolId, StudentId};

/// A student–school pair `(i, s)` such that `i` was tentatively accepted at
/// `s` in round `accepted_round`, another student was rejected at `s` in
/// round `caused_rejection_round`, and `i` was itself rejected from `s` in
/// round `own_rejection_round`, with the three rounds non-decreasing.
///
/// `caused_rejection_round` is the earliest qualifying rejection. A student
/// applies to a school at most once per run, so `own_rejection_round` is
/// unique for the pair.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interrupter {
    pub student: StudentId,
    pub school: SchoolId,
    pub accepted_round: usize,
    pub caused_rejection_round: usize,
    pub own_rejection_round: usize,
}

/// Every interrupter in a student-proposing trace, sorted by student then
/// school. Rounds are 1-based.
pub fn find_interrupters(problem: &SchoolChoiceProblem, trace: &DaTrace) -> Vec<Interrupter> {
    debug_assert_ne!(trace.side, Some(ProposingSide::Schools));
    let m = problem.num_schools();
    // per school: (round, rejected student)
    let mut rejections: Vec<Vec<(usize, StudentId)>> = vec![Vec::new(); m];
    let mut accepted: BTreeMap<(StudentId, SchoolId), usize> = BTreeMap::new();
    let mut own_rejection: BTreeMap<(StudentId, SchoolId), usize> = BTreeMap::new();

    for (k, round) in trace.rounds.iter().enumerate() {
        let t = k + 1;
        for sr in &round.schools {
            for &i in &sr.applicants {
                if sr.held.contains(&i) {
                    accepted.insert((i, sr.school), t);
                }
            }
            for &j in &sr.rejected {
                rejections[sr.school.index()].push((t, j));
                own_rejection.insert((j, sr.school), t);
            }
        }
    }

    let mut out = Vec::new();
    for (&(i, s), &t) in &accepted {
        let Some(&t2) = own_rejection.get(&(i, s)) else {
            continue;
        };
        let caused = rejections[s.index()]
            .iter()
            .filter(|&&(tp, j)| j != i && t <= tp && tp <= t2)
            .map(|&(tp, _)| tp)
            .min();
        if let Some(t1) = caused {
            out.push(Interrupter {
                student: i,
                school: s,
                accepted_round: t,
                caused_rejection_round: t1,
                own_rejection_round: t2,
            });
        }
    }
    out
}

/// EADA with consent structure `consent`.
///
/// Runs DA; takes the last round in which a consenting interrupter was
/// rejected from its interrupting school; removes that school from the
/// preferences of every consenting interrupter rejected in that round; reruns
/// DA from scratch; and repeats until no consenting interrupter remains.
pub fn eada(problem: &SchoolChoiceProblem, consent: &ConsentStructure) -> Matching {
    let (matching, _) = eada_with_steps(problem, consent);
    matching
}

/// EADA plus the pairs removed in each iteration.
pub fn eada_with_steps(
    problem: &SchoolChoiceProblem,
    consent: &ConsentStructure,
) -> (Matching, Vec<Vec<Interrupter>>) {
    let mut prefs: Vec<Vec<SchoolId>> = problem.students().map(|i| problem.preference_list(i).to_vec()).collect();
    let active = vec![true; problem.num_students()];
    let open = vec![true; problem.num_schools()];
    let mut steps = Vec::new();
    loop {
        let views: Vec<&[SchoolId]> = prefs.iter().map(Vec::as_slice).collect();
        let (assignment, trace) = run_student_proposing(problem, &views, &active, &open);
        let consenting: Vec<Interrupter> = find_interrupters(problem, &trace)
            .into_iter()
            .filter(|it| consent.contains(it.student))
            .collect();
        let Some(last) = consenting.iter().map(|it| it.own_rejection_round).max() else {
            return (Matching::from_vec_unchecked(assignment), steps);
        };
        let batch: Vec<Interrupter> = consenting
            .into_iter()
            .filter(|it| it.own_rejection_round == last)
            .collect();
        for it in &batch {
            prefs[it.student.index()].retain(|&s| s != it.school);
        }
        steps.push(batch);
    }
}

/// Full-consent EADA by repeatedly settling under-demanded schools.
///
/// Each pass runs DA on the remaining students and schools. Schools that
/// rejected nobody in that run keep their assignees for good, and students
/// left with the outside option are settled too; settled students and
/// schools leave the market before the next pass.
pub fn eada_full_consent_underdemanded(problem: &SchoolChoiceProblem) -> Matching {
    let n = problem.num_students();
    let mut active = vec![true; n];
    let mut open = vec![true; problem.num_schools()];
    let mut result: Vec<Option<SchoolId>> = vec![None; n];
    let prefs: Vec<&[SchoolId]> = problem.students().map(|i| problem.preference_list(i)).collect();

    while active.iter().any(|&a| a) {
        let (assignment, trace) = run_student_proposing(problem, &prefs, &active, &open);
        let rejecting = trace.rejecting_schools();
        let settled_school: Vec<bool> = problem
            .schools()
            .map(|s| open[s.index()] && rejecting.binary_search(&s).is_err())
            .collect();
        let mut progressed = false;
        for i in problem.students() {
            if !active[i.index()] {
                continue;
            }
            let a = assignment[i.index()];
            if a.is_none_or(|s| settled_school[s.index()]) {
                result[i.index()] = a;
                active[i.index()] = false;
                progressed = true;
            }
        }
        assert!(progressed, "DA run without an under-demanded school");
        for s in problem.schools() {
            if settled_school[s.index()] {
                open[s.index()] = false;
            }
        }
    }
    Matching::from_vec_unchecked(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanisms::{deferred_acceptance, student_proposing_da};

    fn no_rejection_instance() -> SchoolChoiceProblem {
        let mut b = SchoolChoiceProblem::builder();
        b.student("a").unwrap().student("b").unwrap();
        b.school("x", 1).unwrap().school("y", 1).unwrap();
        b.preference("a", &["x", "y"]).unwrap();
        b.preference("b", &["y", "x"]).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn no_rejections_means_no_interrupters() {
        let p = no_rejection_instance();
        let (_, trace) = deferred_acceptance(&p, ProposingSide::Students);
        assert_eq!(trace.num_rounds(), 1);
        assert!(find_interrupters(&p, &trace).is_empty());
    }

    #[test]
    fn empty_consent_is_da() {
        let p = no_rejection_instance();
        assert_eq!(eada(&p, &ConsentStructure::none()), student_proposing_da(&p));
    }

    // a and b swap-able: DA gives a:y b:x, both prefer the other's seat.
    fn swap_instance() -> SchoolChoiceProblem {
        let mut b = SchoolChoiceProblem::builder();
        for s in ["a", "b", "c"] {
            b.student(s).unwrap();
        }
        for s in ["x", "y", "z"] {
            b.school(s, 1).unwrap();
        }
        b.preference("a", &["x", "y"]).unwrap();
        b.preference("b", &["y", "x"]).unwrap();
        b.preference("c", &["x", "z"]).unwrap();
        b.priority("x", &["b", "c", "a"]).unwrap();
        b.priority("y", &["a", "b"]).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn consenting_interrupter_unlocks_swap() {
        let p = swap_instance();
        // round 1: a,c -> x (keeps c), b -> y
        // round 2: a -> y (keeps a, rejects b); round 3: b -> x (keeps b, rejects c)
        // round 4: c -> z
        let da = student_proposing_da(&p);
        assert_eq!(da.render(&p), "a:y b:x c:z");
        let (_, trace) = deferred_acceptance(&p, ProposingSide::Students);
        let its = find_interrupters(&p, &trace);
        let c = p.student_id("c").unwrap();
        let x = p.school_id("x").unwrap();
        assert_eq!(
            its,
            vec![Interrupter {
                student: c,
                school: x,
                accepted_round: 1,
                caused_rejection_round: 1,
                own_rejection_round: 3,
            }]
        );
        let full = eada(&p, &ConsentStructure::all(&p));
        assert_eq!(full.render(&p), "a:x b:y c:z");
        assert_eq!(eada_full_consent_underdemanded(&p), full);
        let without_c = ConsentStructure::from_names(&p, &["a", "b"]).unwrap();
        assert_eq!(eada(&p, &without_c), da);
        let (_, steps) = eada_with_steps(&p, &ConsentStructure::all(&p));
        assert_eq!(steps.len(), 1);
    }
}
