//! Named instance families and a seeded random generator.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::SchoolChoiceProblem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    /// The extremal family; needs `n > 4`.
    Example1 { n: usize },
    Example2,
    Example3,
    Random {
        n: usize,
        m: usize,
        max_quota: usize,
        seed: u64,
    },
}

impl FamilySpec {
    pub fn build(&self) -> Result<SchoolChoiceProblem> {
        match *self {
            FamilySpec::Example1 { n } => example1(n),
            FamilySpec::Example2 => Ok(example2()),
            FamilySpec::Example3 => Ok(example3()),
            FamilySpec::Random {
                n,
                m,
                max_quota,
                seed,
            } => random_problem(n, m, max_quota, seed),
        }
    }
}

fn student(k: usize) -> String {
    format!("i{k}")
}

fn school(k: usize) -> String {
    format!("s{k}")
}

/// The `n`-student, `n`-school unit-capacity instance where DA assigns
/// `i_k -> s_k`, full-consent EADA and DA+TTC swap only `i1` and `i2`, and a
/// different dominating matching improves everyone but `i_n`.
///
/// Priorities: `s_k` ranks `i_k` then `i_{k-1}` for `k >= 2`; `s1` ranks
/// `i1, i_n, i2, i_{n-1}`. Preferences: `i1: s2, s_{n-1}, s1`;
/// `i_k: s1, s_{k+1}, s_k` for `2 <= k <= n-3`; `i_{n-2}: s1, s2, s_{n-2}`;
/// `i_{n-1}: s1, s2, s_{n-1}`; `i_n: s1, s_n`. Everything else follows the
/// usual completion rule.
pub fn example1(n: usize) -> Result<SchoolChoiceProblem> {
    if n <= 4 {
        return Err(Error::Argument(format!("example1 needs n > 4, got {n}")));
    }
    let students: Vec<String> = (1..=n).map(student).collect();
    let schools: Vec<String> = (1..=n).map(school).collect();
    let mut b = SchoolChoiceProblem::builder();
    for s in &students {
        b.student(s)?;
    }
    for s in &schools {
        b.school(s, 1)?;
    }

    let mut pref = |k: usize, list: &[usize]| -> Result<()> {
        let names: Vec<String> = list.iter().map(|&j| school(j)).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        b.preference(&student(k), &refs).map(|_| ())
    };
    pref(1, &[2, n - 1, 1])?;
    for k in 2..=n - 3 {
        pref(k, &[1, k + 1, k])?;
    }
    pref(n - 2, &[1, 2, n - 2])?;
    pref(n - 1, &[1, 2, n - 1])?;
    pref(n, &[1, n])?;

    let mut prio = |k: usize, list: &[usize]| -> Result<()> {
        let names: Vec<String> = list.iter().map(|&j| student(j)).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        b.priority(&school(k), &refs).map(|_| ())
    };
    prio(1, &[1, n, 2, n - 1])?;
    for k in 2..=n {
        prio(k, &[k, k - 1])?;
    }
    b.build()
}

fn from_table(
    n: usize,
    preferences: &[&[usize]],
    priorities: &[&[usize]],
) -> SchoolChoiceProblem {
    let mut b = SchoolChoiceProblem::builder();
    for k in 1..=n {
        b.student(&student(k)).expect("fresh name");
    }
    for k in 1..=n {
        b.school(&school(k), 1).expect("fresh name");
    }
    for (k, list) in preferences.iter().enumerate() {
        let names: Vec<String> = list.iter().map(|&j| school(j)).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        b.preference(&student(k + 1), &refs).expect("valid table");
    }
    for (k, list) in priorities.iter().enumerate() {
        if list.is_empty() {
            continue;
        }
        let names: Vec<String> = list.iter().map(|&j| student(j)).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        b.priority(&school(k + 1), &refs).expect("valid table");
    }
    b.build().expect("valid table")
}

/// Seven students and unit-capacity schools where full-consent EADA improves
/// four students with three blocking pairs, while DA+TTC improves six with
/// two. `s7` declares no priorities.
pub fn example2() -> SchoolChoiceProblem {
    from_table(
        7,
        &[
            &[6, 4, 2, 3, 5, 1],
            &[1, 2],
            &[6, 3],
            &[5, 4],
            &[3, 6, 4, 1, 5],
            &[4, 6],
            &[4, 7],
        ],
        &[
            &[1, 5, 2],
            &[2, 1],
            &[3, 5, 1],
            &[4, 7, 1, 6, 5],
            &[5, 4, 1],
            &[6, 3, 5, 1],
            &[],
        ],
    )
}

/// Five students and unit-capacity schools where DA+TTC swaps `i1` and `i2`
/// with four blocking pairs, while full-consent EADA improves four students
/// with one.
pub fn example3() -> SchoolChoiceProblem {
    from_table(
        5,
        &[&[2, 4, 1], &[1, 3, 2], &[1, 2, 3], &[1, 2, 4], &[1, 5]],
        &[&[1, 5, 4, 2], &[2, 4, 3, 1], &[3, 4, 2], &[4, 5, 1], &[5]],
    )
}

/// Uniform random instance: `n` students `i1..`, `m` schools `s1..` with
/// quotas drawn from `1..=max_quota`, complete preference and priority lists
/// shuffled uniformly. Deterministic in `seed`.
pub fn random_problem(n: usize, m: usize, max_quota: usize, seed: u64) -> Result<SchoolChoiceProblem> {
    if n == 0 || m == 0 || max_quota == 0 {
        return Err(Error::Argument(format!(
            "random instance needs n, m, max_quota >= 1 (got {n}, {m}, {max_quota})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let students: Vec<String> = (1..=n).map(student).collect();
    let schools: Vec<String> = (1..=m).map(school).collect();
    let mut b = SchoolChoiceProblem::builder();
    for s in &students {
        b.student(s)?;
    }
    for s in &schools {
        b.school(s, rng.gen_range(1..=max_quota))?;
    }
    for s in &students {
        let mut order: Vec<&str> = schools.iter().map(String::as_str).collect();
        order.shuffle(&mut rng);
        b.preference(s, &order)?;
    }
    for s in &schools {
        let mut order: Vec<&str> = students.iter().map(String::as_str).collect();
        order.shuffle(&mut rng);
        b.priority(s, &order)?;
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example1_rejects_small_n() {
        assert!(matches!(example1(4), Err(Error::Argument(_))));
        assert!(example1(5).is_ok());
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(random_problem(4, 3, 2, 7).unwrap(), random_problem(4, 3, 2, 7).unwrap());
        assert_ne!(random_problem(4, 3, 2, 7).unwrap(), random_problem(4, 3, 2, 8).unwrap());
        assert!(random_problem(0, 3, 1, 0).is_err());
    }

    #[test]
    fn random_quotas_are_in_range() {
        let p = random_problem(5, 6, 3, 11).unwrap();
        assert!(p.schools().all(|s| (1..=3).contains(&p.quota(s))));
        assert!(p.students().all(|i| p.preference_list(i).len() == 6));
    }
}
