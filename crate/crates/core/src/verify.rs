//! Reproduction checks for the extremal family and the two comparison
//! examples, plus a randomized property sweep.
//!
//! Each group of checks takes the instance it inspects as an argument, so the
//! same code reports a diff when fed a perturbed instance. Reference values
//! are written out literally below; computed values always come from the
//! mechanism, envy and oracle modules.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::envy::{apply_cycles, build_envy_digraph, cycle_blocking_report, decompose_improvement, enumerate_trading_cycles, TradingCycle};
use crate::error::Result;
use crate::instances::{example1, example2, example3, random_problem};
use crate::mechanisms::{da_ttc, deferred_acceptance, eada, eada_full_consent_underdemanded, student_proposing_da, ProposingSide};
use crate::model::{
    blocking_pairs, improved_over, is_stable, weakly_dominates, BlockingSet, ConsentStructure, Matching,
    SchoolChoiceProblem, SchoolId, StudentId,
};
use crate::oracle::{
    doubly_dominates, enumerate_dominating_matchings, enumerate_stable_matchings, enumerate_weakly_dominating,
    improvement_ratio, is_pareto_efficient, max_improvement, pareto_frontier_over_da, DEFAULT_SEARCH_CAP,
};
use crate::report::{render_students, table};

/// Sizes of the extremal family covered by the checks.
pub const FAMILY_SIZES: [usize; 6] = [5, 6, 7, 8, 9, 10];
/// Largest family size for which uniqueness of the stable matching is
/// confirmed by enumerating every feasible matching.
pub const STABLE_UNIQUENESS_MAX_N: usize = 8;
pub const PROPERTY_INSTANCES: usize = 1000;
pub const PROPERTY_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub expected: String,
    pub actual: String,
}

impl Check {
    fn new(criterion: u8, name: impl Into<String>, expected: impl Into<String>, actual: impl Into<String>) -> Self {
        let expected = expected.into();
        let actual = actual.into();
        Check {
            criterion,
            name: name.into(),
            passed: expected == actual,
            expected,
            actual,
        }
    }

    fn flag(criterion: u8, name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            criterion,
            name: name.into(),
            passed: ok,
            expected: "true".into(),
            actual: if ok { "true".into() } else { detail.into() },
        }
    }

    fn failed(criterion: u8, name: impl Into<String>, expected: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Check {
            criterion,
            name: name.into(),
            passed: false,
            expected: expected.into(),
            actual: format!("error: {err}"),
        }
    }
}

/// One `PASS`/`FAIL` line per check; failures also print expected and
/// actual values.
pub fn render_checks(checks: &[Check]) -> String {
    let mut out = String::new();
    for c in checks {
        let _ = writeln!(
            out,
            "{} [{}] {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.criterion,
            c.name
        );
        if !c.passed {
            let _ = writeln!(out, "    expected: {}", c.expected);
            let _ = writeln!(out, "    actual:   {}", c.actual);
        }
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(out, "{} checks, {} passed, {} failed", checks.len(), checks.len() - failed, failed);
    out
}

fn keys_from_names(problem: &SchoolChoiceProblem, pairs: &[(&str, &str)]) -> Result<BTreeSet<(StudentId, SchoolId)>> {
    pairs
        .iter()
        .map(|&(i, s)| Ok((problem.student_id(i)?, problem.school_id(s)?)))
        .collect()
}

fn render_keys(problem: &SchoolChoiceProblem, keys: &BTreeSet<(StudentId, SchoolId)>) -> String {
    let parts: Vec<String> = keys
        .iter()
        .map(|&(i, s)| format!("({},{})", problem.student_name(i), problem.school_name(s)))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

fn students_from_names(problem: &SchoolChoiceProblem, names: &[&str]) -> Result<BTreeSet<StudentId>> {
    names.iter().map(|n| problem.student_id(n)).collect()
}

fn cycles_from_names(problem: &SchoolChoiceProblem, cycles: &[&[&str]]) -> Result<Vec<TradingCycle>> {
    cycles.iter().map(|c| TradingCycle::from_names(problem, c)).collect()
}

fn identity(problem: &SchoolChoiceProblem) -> Matching {
    let assignment = problem.students().zip(problem.schools()).map(|(_, s)| Some(s)).collect();
    Matching::new(problem, assignment).expect("square unit instance")
}

/// `(i1 -> i_{n-1} -> i1)` and `(i2 -> ... -> i_{n-2} -> i2)`.
pub fn example1_max_cycles(n: usize) -> Vec<Vec<String>> {
    vec![
        vec!["i1".to_owned(), format!("i{}", n - 1)],
        (2..=n - 2).map(|k| format!("i{k}")).collect(),
    ]
}

fn example1_instances(sizes: &[usize]) -> Vec<(usize, Result<SchoolChoiceProblem>)> {
    sizes.iter().map(|&n| (n, example1(n))).collect()
}

/// DA is the identity, school-proposing DA agrees, and (for small `n`) the
/// stable matching is unique.
pub fn check_da_identity(sizes: &[usize]) -> Vec<Check> {
    let mut out = Vec::new();
    for (n, p) in example1_instances(sizes) {
        let p = match p {
            Ok(p) => p,
            Err(e) => {
                out.push(Check::failed(1, format!("n={n} instance"), "instance", e));
                continue;
            }
        };
        let id = identity(&p).render(&p);
        out.push(Check::new(1, format!("n={n} student-proposing DA"), &id, student_proposing_da(&p).render(&p)));
        out.push(Check::new(
            1,
            format!("n={n} school-proposing DA"),
            &id,
            deferred_acceptance(&p, ProposingSide::Schools).0.render(&p),
        ));
        if n <= STABLE_UNIQUENESS_MAX_N {
            let name = format!("n={n} stable matchings");
            match enumerate_stable_matchings(&p) {
                Ok(all) => {
                    let rendered: Vec<String> = all.iter().map(|m| m.render(&p)).collect();
                    out.push(Check::new(1, name, format!("[{id}]"), format!("[{}]", rendered.join("; "))));
                }
                Err(e) => out.push(Check::failed(1, name, format!("[{id}]"), e)),
            }
        }
    }
    out
}

/// Full-consent EADA and DA+TTC only swap `i1` and `i2`, leaving `(i_n, s1)`
/// as the single blocking pair.
pub fn check_minimal_improvement(sizes: &[usize]) -> Vec<Check> {
    let mut out = Vec::new();
    for (n, p) in example1_instances(sizes) {
        let p = match p {
            Ok(p) => p,
            Err(e) => {
                out.push(Check::failed(2, format!("n={n} instance"), "instance", e));
                continue;
            }
        };
        let da = student_proposing_da(&p);
        let mut expected = identity(&p);
        let (i1, i2) = (p.student_id("i1").unwrap(), p.student_id("i2").unwrap());
        let mut a = expected.as_slice().to_vec();
        a.swap(i1.index(), i2.index());
        expected = Matching::new(&p, a).expect("swap keeps quotas");
        let blocking = render_keys(&p, &keys_from_names(&p, &[(&format!("i{n}"), "s1")]).unwrap());
        for (label, mu) in [("eada[all]", eada(&p, &ConsentStructure::all(&p))), ("da-ttc", da_ttc(&p))] {
            out.push(Check::new(2, format!("n={n} {label} matching"), expected.render(&p), mu.render(&p)));
            let improved = match improved_over(&p, &mu, &da) {
                Ok(s) => render_students(&p, &s),
                Err(e) => format!("error: {e}"),
            };
            out.push(Check::new(2, format!("n={n} {label} improved"), "{i1, i2}", improved));
            out.push(Check::new(
                2,
                format!("n={n} {label} blocking"),
                &blocking,
                blocking_pairs(&p, &mu).render(&p),
            ));
        }
    }
    out
}

/// `I* = n - 1`, attained by the two disjoint cycles; at `n = 7` that
/// matching's blocking set contains the three listed pairs.
pub fn check_max_improvement(sizes: &[usize]) -> Vec<Check> {
    let mut out = Vec::new();
    for (n, p) in example1_instances(sizes) {
        let p = match p {
            Ok(p) => p,
            Err(e) => {
                out.push(Check::failed(3, format!("n={n} instance"), "instance", e));
                continue;
            }
        };
        let max = match max_improvement(&p) {
            Ok(m) => m,
            Err(e) => {
                out.push(Check::failed(3, format!("n={n} I*"), (n - 1).to_string(), e));
                continue;
            }
        };
        out.push(Check::new(3, format!("n={n} I*"), (n - 1).to_string(), max.value.to_string()));
        let names = example1_max_cycles(n);
        let refs: Vec<Vec<&str>> = names.iter().map(|c| c.iter().map(String::as_str).collect()).collect();
        let slices: Vec<&[&str]> = refs.iter().map(Vec::as_slice).collect();
        let witness = cycles_from_names(&p, &slices).and_then(|cs| apply_cycles(&p, &student_proposing_da(&p), &cs));
        match witness {
            Ok(mu) => {
                out.push(Check::flag(
                    3,
                    format!("n={n} two-cycle matching attains I*"),
                    max.witnesses.contains(&mu),
                    format!("{} is not a witness", mu.render(&p)),
                ));
                if n == 7 {
                    let required = keys_from_names(&p, &[("i1", "s2"), ("i2", "s1"), ("i7", "s1")]).unwrap();
                    let b = blocking_pairs(&p, &mu);
                    out.push(Check::flag(
                        3,
                        "n=7 witness blocking set contains the three listed pairs",
                        required.is_subset(&b.keys()),
                        b.render(&p),
                    ));
                }
            }
            Err(e) => out.push(Check::failed(3, format!("n={n} two-cycle matching"), "a dominating matching", e)),
        }
    }
    out
}

/// The improvement ratio of full-consent EADA and DA+TTC is `(n - 1) / 2`.
pub fn check_ratio(sizes: &[usize]) -> Vec<Check> {
    let mut out = Vec::new();
    for (n, p) in example1_instances(sizes) {
        let p = match p {
            Ok(p) => p,
            Err(e) => {
                out.push(Check::failed(4, format!("n={n} instance"), "instance", e));
                continue;
            }
        };
        let expected = format!("{:?}", (n as f64 - 1.0) / 2.0);
        for (label, mu) in [("eada[all]", eada(&p, &ConsentStructure::all(&p))), ("da-ttc", da_ttc(&p))] {
            let actual = match improvement_ratio(&p, &mu) {
                Ok(r) => r.value().map_or("undefined".to_owned(), |v| format!("{v:?}")),
                Err(e) => format!("error: {e}"),
            };
            out.push(Check::new(4, format!("n={n} {label} ratio"), &expected, actual));
        }
    }
    out
}

/// Label, cycle, and the blocking pairs listed for it.
pub type ReferenceRow = (&'static str, &'static [&'static str], &'static [(&'static str, &'static str)]);

/// The reference cycle table for `example1(7)`: each cycle with the
/// blocking pairs it is listed with.
pub const REFERENCE_CYCLE_TABLE: [ReferenceRow; 7] = [
    ("C1", &["i1", "i2"], &[("i7", "s1")]),
    ("C2", &["i1", "i2", "i3"], &[("i7", "s1"), ("i6", "s1"), ("i2", "s1")]),
    ("C3", &["i1", "i2", "i3", "i4"], &[("i7", "s1"), ("i6", "s1"), ("i2", "s1")]),
    ("C4", &["i1", "i2", "i3", "i4", "i5"], &[("i7", "s1"), ("i6", "s1"), ("i2", "s1")]),
    ("C5", &["i2", "i3", "i4", "i5"], &[("i1", "s2")]),
    ("C6", &["i1", "i6"], &[("i7", "s1"), ("i2", "s1"), ("i5", "s6")]),
    ("C7", &["i1", "i6", "i2"], &[("i7", "s1"), ("i1", "s2"), ("i5", "s6")]),
];

struct CycleRow {
    label: String,
    cycle: String,
    computed: Option<String>,
    reference: Option<String>,
}

fn cycle_rows(problem: &SchoolChoiceProblem) -> Result<Vec<CycleRow>> {
    let da = student_proposing_da(problem);
    let cycles = enumerate_trading_cycles(&build_envy_digraph(problem, &da))?;
    let mut reference: Vec<(String, TradingCycle, String)> = Vec::new();
    for (label, nodes, pairs) in REFERENCE_CYCLE_TABLE {
        let keys = keys_from_names(problem, pairs)?;
        reference.push((label.to_owned(), TradingCycle::from_names(problem, nodes)?, render_keys(problem, &keys)));
    }
    let mut rows = Vec::new();
    for c in &cycles {
        let computed = cycle_blocking_report(problem, std::slice::from_ref(c))?.render(problem);
        let hit = reference.iter().find(|(_, rc, _)| rc == c);
        rows.push(CycleRow {
            label: hit.map_or("-".to_owned(), |(l, _, _)| l.clone()),
            cycle: c.render(problem),
            computed: Some(computed),
            reference: hit.map(|(_, _, r)| r.clone()),
        });
    }
    for (label, rc, r) in &reference {
        if !cycles.contains(rc) {
            rows.push(CycleRow {
                label: label.clone(),
                cycle: rc.render(problem),
                computed: None,
                reference: Some(r.clone()),
            });
        }
    }
    Ok(rows)
}

/// The cycle inventory of the envy digraph at DA next to the reference
/// table, one row per cycle found or listed.
pub fn cycle_table_reproduction(problem: &SchoolChoiceProblem) -> Result<String> {
    let rows = cycle_rows(problem)?;
    let mut cells = vec![vec![
        "ref".to_owned(),
        "cycle".to_owned(),
        "computed blocking pairs".to_owned(),
        "reference blocking pairs".to_owned(),
        "match".to_owned(),
    ]];
    for r in &rows {
        let verdict = match (&r.computed, &r.reference) {
            (Some(c), Some(x)) if c == x => "yes",
            (Some(_), Some(_)) => "no",
            (Some(_), None) => "unlisted",
            (None, _) => "missing",
        };
        cells.push(vec![
            r.label.clone(),
            r.cycle.clone(),
            r.computed.clone().unwrap_or_else(|| "-".into()),
            r.reference.clone().unwrap_or_else(|| "-".into()),
            verdict.to_owned(),
        ]);
    }
    let mut out = table(&cells);
    let found = rows.iter().filter(|r| r.computed.is_some()).count();
    let matching = rows
        .iter()
        .filter(|r| r.computed.is_some() && r.computed == r.reference)
        .count();
    let _ = writeln!(out, "cycles_found = {found}");
    let _ = writeln!(out, "cycles_listed = {}", REFERENCE_CYCLE_TABLE.len());
    let _ = writeln!(out, "rows_matching = {matching}");
    Ok(out)
}

/// Exactly the seven listed cycles, each with exactly its listed blocking
/// pairs.
pub fn check_cycle_table(problem: &SchoolChoiceProblem) -> Vec<Check> {
    let rows = match cycle_rows(problem) {
        Ok(r) => r,
        Err(e) => return vec![Check::failed(5, "cycle inventory", "7 cycles", e)],
    };
    let mut out = vec![Check::new(
        5,
        "number of trading cycles",
        REFERENCE_CYCLE_TABLE.len().to_string(),
        rows.iter().filter(|r| r.computed.is_some()).count().to_string(),
    )];
    for r in &rows {
        let name = format!("{} {}", r.label, r.cycle);
        out.push(Check::new(
            5,
            name,
            r.reference.clone().unwrap_or_else(|| "not listed".into()),
            r.computed.clone().unwrap_or_else(|| "not found".into()),
        ));
    }
    out
}

/// On `example1(7)` the only inclusion-minimal blocking set on the frontier
/// is `{(i7,s1)}`, reached only by two-student improvements, and the
/// maximum-improvement matching's blocking set strictly contains it.
pub fn check_setwise_minimality(problem: &SchoolChoiceProblem) -> Vec<Check> {
    let frontier = match pareto_frontier_over_da(problem) {
        Ok(f) => f,
        Err(e) => return vec![Check::failed(6, "frontier", "{(i7,s1)}", e)],
    };
    let p = problem;
    let minimal: Vec<String> = frontier.minimal_blocking_sets.iter().map(|b| b.render(p)).collect();
    let mut out = vec![Check::new(6, "minimal blocking sets", "[{(i7,s1)}]", format!("[{}]", minimal.join("; ")))];
    let Some(min) = frontier.minimal_blocking_sets.first() else {
        return out;
    };
    let counts: BTreeSet<usize> = frontier.attaining(min).map(|e| e.improved_count()).collect();
    let counts: Vec<String> = counts.iter().map(usize::to_string).collect();
    out.push(Check::new(
        6,
        "improvement count of matchings attaining the minimal set",
        "[2]",
        format!("[{}]", counts.join(", ")),
    ));
    let witness = cycles_from_names(p, &[&["i1", "i6"], &["i2", "i3", "i4", "i5"]])
        .and_then(|cs| apply_cycles(p, &student_proposing_da(p), &cs));
    match witness {
        Ok(mu) => {
            let b = blocking_pairs(p, &mu);
            out.push(Check::flag(
                6,
                "maximum-improvement blocking set strictly contains the minimal one",
                min.is_strict_subset(&b),
                b.render(p),
            ));
        }
        Err(e) => out.push(Check::failed(6, "maximum-improvement matching", "a dominating matching", e)),
    }
    out
}

fn outcome_checks(
    criterion: u8,
    problem: &SchoolChoiceProblem,
    label: &str,
    mu: &Matching,
    improved: &[&str],
    blocking: &[(&str, &str)],
) -> Vec<Check> {
    let da = student_proposing_da(problem);
    let expected_improved = students_from_names(problem, improved)
        .map(|s| render_students(problem, &s))
        .unwrap_or_else(|e| format!("error: {e}"));
    let expected_blocking = keys_from_names(problem, blocking)
        .map(|k| render_keys(problem, &k))
        .unwrap_or_else(|e| format!("error: {e}"));
    let actual_improved = match improved_over(problem, mu, &da) {
        Ok(s) => render_students(problem, &s),
        Err(e) => format!("error: {e}"),
    };
    let b: BlockingSet = blocking_pairs(problem, mu);
    vec![
        Check::new(criterion, format!("{label} improved"), expected_improved, actual_improved),
        Check::new(criterion, format!("{label} blocking"), expected_blocking, b.render(problem)),
    ]
}

/// Full-consent EADA versus the six-student trade on `example2()`.
pub fn check_double_domination(problem: &SchoolChoiceProblem) -> Vec<Check> {
    let p = problem;
    let mut out = Vec::new();
    let e = eada(p, &ConsentStructure::all(p));
    out.extend(outcome_checks(
        7,
        p,
        "eada[all]",
        &e,
        &["i1", "i4", "i5", "i6"],
        &[("i3", "s6"), ("i5", "s6"), ("i7", "s4")],
    ));
    let alt = cycles_from_names(p, &[&["i1", "i2"], &["i3", "i6", "i4", "i5"]])
        .and_then(|cs| apply_cycles(p, &student_proposing_da(p), &cs));
    let alt = match alt {
        Ok(m) => m,
        Err(err) => {
            out.push(Check::failed(7, "two-cycle matching", "a dominating matching", err));
            return out;
        }
    };
    out.extend(outcome_checks(
        7,
        p,
        "two-cycle matching",
        &alt,
        &["i1", "i2", "i3", "i4", "i5", "i6"],
        &[("i1", "s4"), ("i7", "s4")],
    ));
    out.push(match doubly_dominates(p, &alt, &e) {
        Ok(v) => Check::new(7, "two-cycle matching doubly dominates eada[all]", "true", v.to_string()),
        Err(err) => Check::failed(7, "two-cycle matching doubly dominates eada[all]", "true", err),
    });
    out.push(Check::new(7, "da-ttc equals the two-cycle matching", alt.render(p), da_ttc(p).render(p)));
    match enumerate_dominating_matchings(p) {
        Ok(set) => {
            out.push(Check::new(7, "I*", "6", set.max_improvement().to_string()));
            let i7 = p.student_id("i7");
            let improved7 = match i7 {
                Ok(i7) => set.entries.iter().filter(|e| e.improved.contains(&i7)).count().to_string(),
                Err(err) => format!("error: {err}"),
            };
            out.push(Check::new(7, "dominating matchings improving i7", "0", improved7));
        }
        Err(err) => out.push(Check::failed(7, "dominating matchings", "I* = 6", err)),
    }
    out
}

/// DA+TTC versus the four-student trade on `example3()`.
pub fn check_reverse_domination(problem: &SchoolChoiceProblem) -> Vec<Check> {
    let p = problem;
    let mut out = Vec::new();
    let t = da_ttc(p);
    out.extend(outcome_checks(
        8,
        p,
        "da-ttc",
        &t,
        &["i1", "i2"],
        &[("i4", "s1"), ("i5", "s1"), ("i3", "s2"), ("i4", "s2")],
    ));
    let alt = cycles_from_names(p, &[&["i1", "i4"], &["i2", "i3"]])
        .and_then(|cs| apply_cycles(p, &student_proposing_da(p), &cs));
    let alt = match alt {
        Ok(m) => m,
        Err(err) => {
            out.push(Check::failed(8, "two-cycle matching", "a dominating matching", err));
            return out;
        }
    };
    out.extend(outcome_checks(
        8,
        p,
        "two-cycle matching",
        &alt,
        &["i1", "i2", "i3", "i4"],
        &[("i5", "s1")],
    ));
    out.push(Check::new(
        8,
        "eada[all] equals the two-cycle matching",
        alt.render(p),
        eada(p, &ConsentStructure::all(p)).render(p),
    ));
    out.push(match doubly_dominates(p, &alt, &t) {
        Ok(v) => Check::new(8, "two-cycle matching doubly dominates da-ttc", "true", v.to_string()),
        Err(err) => Check::failed(8, "two-cycle matching doubly dominates da-ttc", "true", err),
    });
    out
}

/// Largest `n` for which efficiency and cycle decompositions are checked by
/// the oracle in the property sweep.
pub const PROPERTY_ORACLE_MAX_N: usize = 5;

#[derive(Default)]
struct Tally {
    cases: usize,
    violations: usize,
    first: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn into_check(self, name: &str) -> Check {
        let actual = match self.first {
            None => "0".to_owned(),
            Some(f) => format!("{} (first: {f})", self.violations),
        };
        Check {
            criterion: 9,
            name: format!("{name} ({} cases)", self.cases),
            passed: self.violations == 0 && self.cases > 0,
            expected: "0".into(),
            actual,
        }
    }
}

/// Randomized sweep over `instances` unit-capacity instances with
/// `n = m` cycling through 3..=6. Each property is one check reporting the
/// number of violations.
pub fn check_properties(instances: usize, seed: u64) -> Vec<Check> {
    let mut stable = Tally::default();
    let mut dominates = Tally::default();
    let mut equivalent = Tally::default();
    let mut efficient = Tally::default();
    let mut monotone = Tally::default();
    let mut decomposes = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for k in 0..instances {
        let n = 3 + k % 4;
        let inst_seed = seed.wrapping_add(k as u64);
        let tag = || format!("n={n} seed={inst_seed}");
        let p = random_problem(n, n, 1, inst_seed).expect("valid shape");
        let da = student_proposing_da(&p);
        stable.record(is_stable(&p, &da), tag);

        let members: Vec<StudentId> = p.students().filter(|_| rng.gen_bool(0.5)).collect();
        let w = ConsentStructure::from_students(&p, members).expect("known students");
        let ew = eada(&p, &w);
        dominates.record(weakly_dominates(&p, &ew, &da), tag);

        let full = eada(&p, &ConsentStructure::all(&p));
        equivalent.record(full == eada_full_consent_underdemanded(&p), tag);

        for i in p.students().filter(|&i| !w.contains(i)) {
            let with_i = eada(&p, &w.with(i));
            let ok = p.rank_of_school(i, with_i.school_of(i)) <= p.rank_of_school(i, ew.school_of(i));
            monotone.record(ok, || format!("{} student {}", tag(), p.student_name(i)));
        }

        if n <= PROPERTY_ORACLE_MAX_N {
            for (label, mu) in [("eada[all]", &full), ("da-ttc", &da_ttc(&p))] {
                let ok = is_pareto_efficient(&p, mu).unwrap_or(false);
                efficient.record(ok, || format!("{} {label}", tag()));
            }
            let cycles = enumerate_trading_cycles(&build_envy_digraph(&p, &da)).unwrap_or_default();
            let dominating = enumerate_weakly_dominating(&p, &da, DEFAULT_SEARCH_CAP).unwrap_or_default();
            decomposes.record(!dominating.is_empty(), tag);
            for mu in dominating {
                let ok = match decompose_improvement(&p, &da, &mu) {
                    Ok(parts) => {
                        parts.iter().all(|c| cycles.contains(c))
                            && apply_cycles(&p, &da, &parts).is_ok_and(|back| back == mu)
                    }
                    Err(_) => false,
                };
                decomposes.record(ok, || format!("{} {}", tag(), mu.render(&p)));
            }
        }
    }

    vec![
        stable.into_check("DA is stable"),
        dominates.into_check("eada under random consent weakly dominates DA"),
        equivalent.into_check("eada[all] equals the under-demanded-school procedure"),
        efficient.into_check("eada[all] and da-ttc are Pareto-efficient"),
        monotone.into_check("consenting never hurts the consenting student"),
        decomposes.into_check("dominating matchings split into trading cycles of the DA envy digraph"),
    ]
}

/// Runs every check group with its default instance.
pub fn verify_paper() -> Vec<Check> {
    let mut out = check_da_identity(&FAMILY_SIZES);
    out.extend(check_minimal_improvement(&FAMILY_SIZES));
    out.extend(check_max_improvement(&FAMILY_SIZES));
    out.extend(check_ratio(&FAMILY_SIZES));
    let e7 = example1(7).expect("n > 4");
    out.extend(check_cycle_table(&e7));
    out.extend(check_setwise_minimality(&e7));
    out.extend(check_double_domination(&example2()));
    out.extend(check_reverse_domination(&example3()));
    out.extend(check_properties(PROPERTY_INSTANCES, PROPERTY_SEED));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_compares_strings() {
        assert!(Check::new(1, "x", "a", "a").passed);
        assert!(!Check::new(1, "x", "a", "b").passed);
        let text = render_checks(&[Check::new(2, "y", "1", "2")]);
        assert!(text.starts_with("FAIL [2] y\n    expected: 1\n    actual:   2\n"), "{text}");
    }

    #[test]
    fn max_cycles_shape() {
        assert_eq!(example1_max_cycles(5), vec![vec!["i1", "i4"], vec!["i2", "i3"]]);
    }

    #[test]
    fn small_property_sweep_passes() {
        assert!(check_properties(8, 1).iter().all(|c| c.passed));
    }
}
