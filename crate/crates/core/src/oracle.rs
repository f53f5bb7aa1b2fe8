//! Exhaustive ground truth for small instances.
//!
//! Every search here is depth-first over per-student option lists under the
//! school quotas. Before searching, the product of the option counts is
//! compared with a cap and the search refuses to start when it is exceeded,
//! so a resource error never comes with a partial result.
//!
//! Only individually rational matchings are enumerated: each student gets a
//! school it lists or the outside option. A matching that places a student at
//! an unacceptable school is beaten by sending that student home, so this
//! loses nothing when looking for dominating or efficient matchings.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::mechanisms::student_proposing_da;
use crate::model::{
    blocking_pairs, dominates, improved_over, is_stable, BlockingSet, Matching, SchoolChoiceProblem, SchoolId,
    StudentId,
};

/// Ceiling on the product of per-student option counts.
pub const DEFAULT_SEARCH_CAP: u128 = 10_000_000;

fn options_within(
    problem: &SchoolChoiceProblem,
    ceiling: impl Fn(StudentId) -> Option<crate::model::Rank>,
) -> Vec<Vec<Option<SchoolId>>> {
    problem
        .students()
        .map(|i| {
            let limit = ceiling(i);
            let mut opts: Vec<Option<SchoolId>> = problem
                .preference_list(i)
                .iter()
                .copied()
                .map(Some)
                .filter(|&s| limit.is_none_or(|r| problem.rank_of_school(i, s) <= r))
                .collect();
            if limit.is_none_or(|r| problem.rank_of_school(i, None) <= r) {
                opts.push(None);
            }
            opts
        })
        .collect()
}

fn guard(options: &[Vec<Option<SchoolId>>], what: &'static str, cap: u128) -> Result<()> {
    let required = options
        .iter()
        .fold(1u128, |acc, o| acc.saturating_mul(o.len().max(1) as u128));
    if required > cap {
        return Err(Error::Resource { what, required, cap });
    }
    Ok(())
}

fn search(
    problem: &SchoolChoiceProblem,
    options: &[Vec<Option<SchoolId>>],
    visit: &mut dyn FnMut(&[Option<SchoolId>]) -> ControlFlow<()>,
) {
    let mut load = vec![0usize; problem.num_schools()];
    let mut current = Vec::with_capacity(options.len());
    let _ = descend(problem, options, &mut load, &mut current, visit);
}

fn descend(
    problem: &SchoolChoiceProblem,
    options: &[Vec<Option<SchoolId>>],
    load: &mut [usize],
    current: &mut Vec<Option<SchoolId>>,
    visit: &mut dyn FnMut(&[Option<SchoolId>]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let k = current.len();
    if k == options.len() {
        return visit(current);
    }
    for &o in &options[k] {
        if let Some(s) = o {
            if load[s.index()] >= problem.quota(s) {
                continue;
            }
            load[s.index()] += 1;
        }
        current.push(o);
        let flow = descend(problem, options, load, current, visit);
        current.pop();
        if let Some(s) = o {
            load[s.index()] -= 1;
        }
        flow?;
    }
    ControlFlow::Continue(())
}

/// All individually rational matchings that weakly dominate `baseline`.
pub fn enumerate_weakly_dominating(
    problem: &SchoolChoiceProblem,
    baseline: &Matching,
    cap: u128,
) -> Result<Vec<Matching>> {
    let options = options_within(problem, |i| Some(problem.rank_of_school(i, baseline.school_of(i))));
    guard(&options, "dominating-matching enumeration", cap)?;
    let mut out = Vec::new();
    search(problem, &options, &mut |a| {
        out.push(Matching::from_vec_unchecked(a.to_vec()));
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// All individually rational matchings of the instance.
pub fn enumerate_feasible_matchings(problem: &SchoolChoiceProblem, cap: u128) -> Result<Vec<Matching>> {
    let options = options_within(problem, |_| None);
    guard(&options, "feasible-matching enumeration", cap)?;
    let mut out = Vec::new();
    search(problem, &options, &mut |a| {
        out.push(Matching::from_vec_unchecked(a.to_vec()));
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// No feasible matching Pareto-dominates `mu`. Any dominator weakly
/// dominates `mu`, so the search only walks that part of the feasible
/// space and stops at the first strict improvement.
pub fn is_pareto_efficient(problem: &SchoolChoiceProblem, mu: &Matching) -> Result<bool> {
    let options = options_within(problem, |i| Some(problem.rank_of_school(i, mu.school_of(i))));
    guard(&options, "efficiency check", DEFAULT_SEARCH_CAP)?;
    let mut dominated = false;
    search(problem, &options, &mut |a| {
        let nu = Matching::from_vec_unchecked(a.to_vec());
        if dominates(problem, &nu, mu) {
            dominated = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(!dominated)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominatingEntry {
    pub matching: Matching,
    pub improved: BTreeSet<StudentId>,
    pub blocking: BlockingSet,
    pub is_pareto_efficient: bool,
}

impl DominatingEntry {
    pub fn improved_count(&self) -> usize {
        self.improved.len()
    }
}

/// M^DA(P): every matching weakly dominating the DA outcome, DA included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominatingSet {
    pub baseline: Matching,
    pub entries: Vec<DominatingEntry>,
}

impl DominatingSet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn find(&self, mu: &Matching) -> Option<&DominatingEntry> {
        self.entries.iter().find(|e| &e.matching == mu)
    }

    pub fn max_improvement(&self) -> usize {
        self.entries.iter().map(DominatingEntry::improved_count).max().unwrap_or(0)
    }
}

pub fn enumerate_dominating_matchings(problem: &SchoolChoiceProblem) -> Result<DominatingSet> {
    let baseline = student_proposing_da(problem);
    let matchings = enumerate_weakly_dominating(problem, &baseline, DEFAULT_SEARCH_CAP)?;
    let mut entries = Vec::with_capacity(matchings.len());
    for mu in matchings {
        let improved = improved_over(problem, &mu, &baseline)?;
        // a dominator of a member also dominates DA, so it is a member too
        let is_pareto_efficient = is_pareto_efficient(problem, &mu)?;
        entries.push(DominatingEntry {
            blocking: blocking_pairs(problem, &mu),
            matching: mu,
            improved,
            is_pareto_efficient,
        });
    }
    Ok(DominatingSet { baseline, entries })
}

/// I*(P) together with every matching that attains it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxImprovement {
    pub value: usize,
    pub witnesses: Vec<Matching>,
}

pub fn max_improvement(problem: &SchoolChoiceProblem) -> Result<MaxImprovement> {
    let baseline = student_proposing_da(problem);
    let matchings = enumerate_weakly_dominating(problem, &baseline, DEFAULT_SEARCH_CAP)?;
    let mut value = 0;
    let mut witnesses = Vec::new();
    for mu in matchings {
        let k = improved_over(problem, &mu, &baseline)?.len();
        if k > value {
            value = k;
            witnesses.clear();
        }
        if k == value {
            witnesses.push(mu);
        }
    }
    Ok(MaxImprovement { value, witnesses })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontierReport {
    /// Efficient members of M^DA(P).
    pub efficient: Vec<DominatingEntry>,
    /// Inclusion-minimal blocking sets among the efficient members, sorted
    /// by size then content.
    pub minimal_blocking_sets: Vec<BlockingSet>,
    pub max_improvement: MaxImprovement,
    pub dominating_count: usize,
}

impl FrontierReport {
    /// Efficient members whose blocking set equals `set`.
    pub fn attaining<'a>(&'a self, set: &'a BlockingSet) -> impl Iterator<Item = &'a DominatingEntry> + 'a {
        self.efficient.iter().filter(move |e| &e.blocking == set)
    }

    /// `mu` is efficient and no efficient dominating matching has a
    /// strictly smaller blocking set.
    pub fn is_setwise_minimal(&self, mu: &Matching) -> bool {
        let Some(entry) = self.efficient.iter().find(|e| &e.matching == mu) else {
            return false;
        };
        !self
            .efficient
            .iter()
            .any(|e| e.blocking.is_strict_subset(&entry.blocking))
    }
}

pub fn pareto_frontier_over_da(problem: &SchoolChoiceProblem) -> Result<FrontierReport> {
    let set = enumerate_dominating_matchings(problem)?;
    let max_value = set.max_improvement();
    let max_improvement = MaxImprovement {
        value: max_value,
        witnesses: set
            .entries
            .iter()
            .filter(|e| e.improved_count() == max_value)
            .map(|e| e.matching.clone())
            .collect(),
    };
    let dominating_count = set.len();
    let efficient: Vec<DominatingEntry> = set.entries.into_iter().filter(|e| e.is_pareto_efficient).collect();
    let mut minimal: Vec<BlockingSet> = efficient
        .iter()
        .filter(|e| !efficient.iter().any(|f| f.blocking.is_strict_subset(&e.blocking)))
        .map(|e| e.blocking.clone())
        .collect();
    minimal.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    minimal.dedup();
    Ok(FrontierReport {
        efficient,
        minimal_blocking_sets: minimal,
        max_improvement,
        dominating_count,
    })
}

pub fn enumerate_stable_matchings(problem: &SchoolChoiceProblem) -> Result<Vec<Matching>> {
    Ok(enumerate_feasible_matchings(problem, DEFAULT_SEARCH_CAP)?
        .into_iter()
        .filter(|mu| is_stable(problem, mu))
        .collect())
}

/// `mu` improves strictly more students than `nu` and has strictly fewer
/// blocking pairs. Both must weakly dominate DA.
pub fn doubly_dominates(problem: &SchoolChoiceProblem, mu: &Matching, nu: &Matching) -> Result<bool> {
    let da = student_proposing_da(problem);
    let improved_mu = improved_over(problem, mu, &da)?.len();
    let improved_nu = improved_over(problem, nu, &da)?.len();
    Ok(improved_mu > improved_nu && blocking_pairs(problem, mu).len() < blocking_pairs(problem, nu).len())
}

/// I*(P) / |I(μ,P)| for one instance.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ImprovementRatio {
    pub max_improvement: usize,
    pub improved: usize,
}

impl ImprovementRatio {
    /// Undefined when the mechanism improves nobody.
    pub fn value(&self) -> Option<f64> {
        (self.improved > 0).then(|| self.max_improvement as f64 / self.improved as f64)
    }
}

pub fn improvement_ratio(problem: &SchoolChoiceProblem, mu: &Matching) -> Result<ImprovementRatio> {
    let max = max_improvement(problem)?.value;
    let improved = improved_over(problem, mu, &student_proposing_da(problem))?.len();
    Ok(ImprovementRatio {
        max_improvement: max,
        improved,
    })
}

/// Ratios over a batch of instances. Instances where the mechanism improves
/// nobody have no ratio; they are counted in `skipped`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioSummary {
    pub per_instance: Vec<ImprovementRatio>,
    pub skipped: usize,
    pub max: Option<f64>,
}

pub fn ratio_summary(
    problems: &[SchoolChoiceProblem],
    mechanism: impl Fn(&SchoolChoiceProblem) -> Matching,
) -> Result<RatioSummary> {
    let mut per_instance = Vec::with_capacity(problems.len());
    for p in problems {
        per_instance.push(improvement_ratio(p, &mechanism(p))?);
    }
    let skipped = per_instance.iter().filter(|r| r.value().is_none()).count();
    let max = per_instance
        .iter()
        .filter_map(ImprovementRatio::value)
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
    Ok(RatioSummary {
        per_instance,
        skipped,
        max,
    })
}
