use super::da::student_proposing_da;
use crate::model::{Matching, SchoolChoiceProblem, SchoolId, StudentId};

/// Top trading cycles where each student owns the seat it holds in
/// `endowment`.
///
/// Each remaining student points at itself when its own school is its best
/// school among those still owned, and otherwise at the highest-priority
/// remaining owner of its best such school. Students on a cycle of pointers
/// take the seat of the student they point at and leave. Students endowed
/// with the outside option do not trade.
pub fn ttc_from_endowment(problem: &SchoolChoiceProblem, endowment: &Matching) -> Matching {
    let mut result = endowment.clone();
    let mut remaining: Vec<StudentId> = problem
        .students()
        .filter(|&i| endowment.school_of(i).is_some())
        .collect();

    while !remaining.is_empty() {
        let mut owned = vec![false; problem.num_schools()];
        for &i in &remaining {
            if let Some(s) = endowment.school_of(i) {
                owned[s.index()] = true;
            }
        }
        let pointer: Vec<(StudentId, StudentId)> = remaining
            .iter()
            .map(|&i| (i, point(problem, endowment, &remaining, &owned, i)))
            .collect();
        let target = |i: StudentId| pointer.iter().find(|(k, _)| *k == i).map(|&(_, t)| t).unwrap();

        let mut on_cycle = vec![false; problem.num_students()];
        for &start in &remaining {
            // walk until a repeat; the repeated node is on a cycle
            let mut seen: Vec<StudentId> = Vec::new();
            let mut cur = start;
            while !seen.contains(&cur) {
                seen.push(cur);
                cur = target(cur);
            }
            let from = seen.iter().position(|&x| x == cur).unwrap();
            for &x in &seen[from..] {
                on_cycle[x.index()] = true;
            }
        }

        let mut assignment = result.as_slice().to_vec();
        for &(i, t) in &pointer {
            if on_cycle[i.index()] {
                assignment[i.index()] = endowment.school_of(t);
            }
        }
        result = Matching::from_vec_unchecked(assignment);
        remaining.retain(|i| !on_cycle[i.index()]);
    }
    result
}

fn point(
    problem: &SchoolChoiceProblem,
    endowment: &Matching,
    remaining: &[StudentId],
    owned: &[bool],
    i: StudentId,
) -> StudentId {
    let own = endowment.school_of(i);
    let best: Option<SchoolId> = problem
        .preference_list(i)
        .iter()
        .copied()
        .find(|s| owned[s.index()]);
    match best {
        Some(s) if Some(s) != own => remaining
            .iter()
            .copied()
            .filter(|&j| endowment.school_of(j) == Some(s))
            .min_by_key(|&j| problem.rank_of_student(s, j))
            .expect("owned school has a remaining owner"),
        _ => i,
    }
}

/// DA followed by TTC from the DA assignment.
pub fn da_ttc(problem: &SchoolChoiceProblem) -> Matching {
    ttc_from_endowment(problem, &student_proposing_da(problem))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_loops_keep_the_endowment() {
        let mut b = SchoolChoiceProblem::builder();
        b.student("a").unwrap().student("b").unwrap();
        b.school("x", 1).unwrap().school("y", 1).unwrap();
        b.preference("a", &["x", "y"]).unwrap();
        b.preference("b", &["y", "x"]).unwrap();
        let p = b.build().unwrap();
        let mu = Matching::from_names(&p, &[("a", "x"), ("b", "y")]).unwrap();
        assert_eq!(ttc_from_endowment(&p, &mu), mu);
    }

    #[test]
    fn two_cycle_trades() {
        let mut b = SchoolChoiceProblem::builder();
        b.student("a").unwrap().student("b").unwrap().student("c").unwrap();
        b.school("x", 1).unwrap().school("y", 1).unwrap();
        b.preference("a", &["x", "y"]).unwrap();
        b.preference("b", &["y", "x"]).unwrap();
        b.preference("c", &["x"]).unwrap();
        let p = b.build().unwrap();
        let mu = Matching::from_names(&p, &[("a", "y"), ("b", "x")]).unwrap();
        assert_eq!(ttc_from_endowment(&p, &mu).render(&p), "a:x b:y c:none");
    }

    #[test]
    fn quota_owner_with_highest_priority_is_pointed_at() {
        // x has two seats held by b and c; a wants x and points at c
        let mut b = SchoolChoiceProblem::builder();
        for s in ["a", "b", "c"] {
            b.student(s).unwrap();
        }
        b.school("x", 2).unwrap().school("y", 1).unwrap();
        b.preference("a", &["x", "y"]).unwrap();
        b.preference("b", &["x"]).unwrap();
        b.preference("c", &["y", "x"]).unwrap();
        b.priority("x", &["c", "b", "a"]).unwrap();
        let p = b.build().unwrap();
        let mu = Matching::from_names(&p, &[("a", "y"), ("b", "x"), ("c", "x")]).unwrap();
        assert_eq!(ttc_from_endowment(&p, &mu).render(&p), "a:x b:x c:y");
    }
}
