//! Envy digraphs over a baseline matching and the trading cycles in them.
//!
//! A trading cycle is a node-simple directed cycle `i0 -> i1 -> ... -> ik -> i0`
//! where each student envies the next one. Implementing it hands every
//! member the seat of its successor. A feedback set is a collection of
//! node-disjoint cycles whose removal (with all their nodes) leaves the
//! digraph acyclic; equivalently, a packing no further cycle can be added to.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{blocking_pairs, envies_unchecked, weakly_dominates, BlockingSet, Matching, SchoolChoiceProblem, SchoolId, StudentId};
use crate::mechanisms::student_proposing_da;

/// Default ceiling on the number of cycles or feedback sets enumerated.
pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvyDigraph {
    baseline: Matching,
    out: Vec<Vec<StudentId>>,
}

impl EnvyDigraph {
    pub fn baseline(&self) -> &Matching {
        &self.baseline
    }

    pub fn num_nodes(&self) -> usize {
        self.out.len()
    }

    pub fn successors(&self, i: StudentId) -> &[StudentId] {
        &self.out[i.index()]
    }

    pub fn has_edge(&self, i: StudentId, j: StudentId) -> bool {
        self.out[i.index()].binary_search(&j).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (StudentId, StudentId)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(i, js)| js.iter().map(move |&j| (StudentId::new(i), j)))
    }

    pub fn num_edges(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// One `i -> j` line per edge, ordered by tail then head in declaration
    /// order.
    pub fn to_edge_list(&self, problem: &SchoolChoiceProblem) -> String {
        let mut out = String::new();
        for (i, j) in self.edges() {
            let _ = writeln!(out, "{} -> {}", problem.student_name(i), problem.student_name(j));
        }
        out
    }

    /// Whether the digraph restricted to nodes not in `removed` is acyclic
    /// (Kahn's algorithm).
    pub fn is_acyclic_without(&self, removed: &BTreeSet<StudentId>) -> bool {
        let n = self.out.len();
        let keep: Vec<bool> = (0..n).map(|i| !removed.contains(&StudentId::new(i))).collect();
        let mut indegree = vec![0usize; n];
        for (i, j) in self.edges() {
            if keep[i.index()] && keep[j.index()] {
                indegree[j.index()] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&i| keep[i] && indegree[i] == 0).collect();
        let mut visited = 0;
        while let Some(i) = stack.pop() {
            visited += 1;
            for j in &self.out[i] {
                if keep[j.index()] {
                    indegree[j.index()] -= 1;
                    if indegree[j.index()] == 0 {
                        stack.push(j.index());
                    }
                }
            }
        }
        visited == keep.iter().filter(|&&k| k).count()
    }
}

/// Edge `i -> j` iff `i` envies `j` under `mu`.
pub fn build_envy_digraph(problem: &SchoolChoiceProblem, mu: &Matching) -> EnvyDigraph {
    let out = problem
        .students()
        .map(|i| {
            problem
                .students()
                .filter(|&j| j != i && envies_unchecked(problem, mu, i, j))
                .collect()
        })
        .collect();
    EnvyDigraph {
        baseline: mu.clone(),
        out,
    }
}

/// A node-simple cycle stored in canonical rotation: the node that comes
/// first in declaration order leads.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TradingCycle {
    nodes: Vec<StudentId>,
}

impl TradingCycle {
    pub fn new(nodes: Vec<StudentId>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::Argument("a trading cycle needs at least two students".into()));
        }
        let distinct: BTreeSet<StudentId> = nodes.iter().copied().collect();
        if distinct.len() != nodes.len() {
            return Err(Error::Argument("a trading cycle visits each student once".into()));
        }
        let start = nodes
            .iter()
            .enumerate()
            .min_by_key(|(_, i)| **i)
            .map(|(k, _)| k)
            .unwrap();
        let mut nodes = nodes;
        nodes.rotate_left(start);
        Ok(TradingCycle { nodes })
    }

    pub fn from_names(problem: &SchoolChoiceProblem, names: &[&str]) -> Result<Self> {
        let ids = names
            .iter()
            .map(|n| problem.student_id(n))
            .collect::<Result<Vec<_>>>()?;
        TradingCycle::new(ids)
    }

    pub fn nodes(&self) -> &[StudentId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Each member paired with the member it points at.
    pub fn arcs(&self) -> impl Iterator<Item = (StudentId, StudentId)> + '_ {
        let k = self.nodes.len();
        (0..k).map(move |x| (self.nodes[x], self.nodes[(x + 1) % k]))
    }

    /// `(i1 -> i2 -> i1)`.
    pub fn render(&self, problem: &SchoolChoiceProblem) -> String {
        let mut out = String::from("(");
        for i in &self.nodes {
            out.push_str(problem.student_name(*i));
            out.push_str(" -> ");
        }
        out.push_str(problem.student_name(self.nodes[0]));
        out.push(')');
        out
    }
}

impl PartialOrd for TradingCycle {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Shorter cycles first, then lexicographic on the canonical node sequence.
impl Ord for TradingCycle {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.nodes
            .len()
            .cmp(&other.nodes.len())
            .then_with(|| self.nodes.cmp(&other.nodes))
    }
}

/// Node-disjoint trading cycles that leave the envy digraph acyclic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FeedbackSet {
    pub cycles: Vec<TradingCycle>,
}

impl FeedbackSet {
    pub fn covered(&self) -> BTreeSet<StudentId> {
        self.cycles.iter().flat_map(|c| c.nodes.iter().copied()).collect()
    }

    pub fn render(&self, problem: &SchoolChoiceProblem) -> String {
        if self.cycles.is_empty() {
            return "{}".to_owned();
        }
        let parts: Vec<String> = self.cycles.iter().map(|c| c.render(problem)).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

pub fn enumerate_trading_cycles(graph: &EnvyDigraph) -> Result<Vec<TradingCycle>> {
    enumerate_trading_cycles_capped(graph, DEFAULT_CYCLE_CAP)
}

/// Every node-simple cycle, in canonical form and sorted. Each cycle is found
/// once, from its smallest node, by a depth-first search restricted to
/// larger nodes.
pub fn enumerate_trading_cycles_capped(graph: &EnvyDigraph, cap: usize) -> Result<Vec<TradingCycle>> {
    let n = graph.num_nodes();
    let mut found = Vec::new();
    let mut on_path = vec![false; n];
    let mut path = Vec::new();
    for start in 0..n {
        on_path[start] = true;
        path.push(StudentId::new(start));
        extend_cycles(graph, start, &mut path, &mut on_path, &mut found, cap)?;
        path.pop();
        on_path[start] = false;
    }
    let mut cycles: Vec<TradingCycle> = found.into_iter().map(|nodes| TradingCycle { nodes }).collect();
    cycles.sort();
    Ok(cycles)
}

fn extend_cycles(
    graph: &EnvyDigraph,
    start: usize,
    path: &mut Vec<StudentId>,
    on_path: &mut [bool],
    found: &mut Vec<Vec<StudentId>>,
    cap: usize,
) -> Result<()> {
    let last = *path.last().unwrap();
    for &j in graph.successors(last) {
        if j.index() == start {
            if found.len() >= cap {
                return Err(Error::Resource {
                    what: "trading cycle enumeration",
                    required: cap as u128 + 1,
                    cap: cap as u128,
                });
            }
            found.push(path.clone());
        } else if j.index() > start && !on_path[j.index()] {
            on_path[j.index()] = true;
            path.push(j);
            extend_cycles(graph, start, path, on_path, found, cap)?;
            path.pop();
            on_path[j.index()] = false;
        }
    }
    Ok(())
}

fn check_disjoint(cycles: &[TradingCycle]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for c in cycles {
        for &i in c.nodes() {
            if !seen.insert(i) {
                return Err(Error::Argument(format!(
                    "cycles overlap at student index {}",
                    i.index()
                )));
            }
        }
    }
    Ok(())
}

/// μ^F: every member of a cycle takes its successor's assignment.
pub fn apply_cycles(problem: &SchoolChoiceProblem, mu: &Matching, cycles: &[TradingCycle]) -> Result<Matching> {
    check_disjoint(cycles)?;
    let mut assignment = mu.as_slice().to_vec();
    for c in cycles {
        for (i, j) in c.arcs() {
            if i.index() >= problem.num_students() || j.index() >= problem.num_students() {
                return Err(Error::Argument("cycle refers to an unknown student".into()));
            }
            if !envies_unchecked(problem, mu, i, j) {
                return Err(Error::Argument(format!(
                    "`{}` does not envy `{}` in the given matching",
                    problem.student_name(i),
                    problem.student_name(j)
                )));
            }
            assignment[i.index()] = mu.school_of(j);
        }
    }
    Ok(Matching::from_vec_unchecked(assignment))
}

/// Blocking pairs after implementing `cycles` on top of DA.
pub fn cycle_blocking_report(problem: &SchoolChoiceProblem, cycles: &[TradingCycle]) -> Result<BlockingSet> {
    let da = student_proposing_da(problem);
    let mu = apply_cycles(problem, &da, cycles)?;
    Ok(blocking_pairs(problem, &mu))
}

/// All collections of pairwise node-disjoint cycles drawn from `cycles`,
/// including the empty one, as index lists into `cycles`.
pub fn enumerate_cycle_packings(cycles: &[TradingCycle], cap: usize) -> Result<Vec<Vec<usize>>> {
    let masks: Vec<BTreeSet<StudentId>> = cycles.iter().map(|c| c.nodes.iter().copied().collect()).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut used = BTreeSet::new();
    packings_from(&masks, 0, &mut chosen, &mut used, &mut out, cap, &mut |_, _| true)?;
    Ok(out)
}

fn packings_from(
    masks: &[BTreeSet<StudentId>],
    from: usize,
    chosen: &mut Vec<usize>,
    used: &mut BTreeSet<StudentId>,
    out: &mut Vec<Vec<usize>>,
    cap: usize,
    accept: &mut dyn FnMut(&[usize], &BTreeSet<StudentId>) -> bool,
) -> Result<()> {
    if accept(chosen, used) {
        if out.len() >= cap {
            return Err(Error::Resource {
                what: "cycle packing enumeration",
                required: cap as u128 + 1,
                cap: cap as u128,
            });
        }
        out.push(chosen.clone());
    }
    for k in from..masks.len() {
        if masks[k].is_disjoint(used) {
            chosen.push(k);
            used.extend(masks[k].iter().copied());
            packings_from(masks, k + 1, chosen, used, out, cap, accept)?;
            for i in &masks[k] {
                used.remove(i);
            }
            chosen.pop();
        }
    }
    Ok(())
}

pub fn enumerate_feedback_sets(graph: &EnvyDigraph) -> Result<Vec<FeedbackSet>> {
    enumerate_feedback_sets_capped(graph, DEFAULT_CYCLE_CAP)
}

/// Every feedback set: disjoint cycle collections whose covered nodes, once
/// removed, leave the digraph acyclic.
pub fn enumerate_feedback_sets_capped(graph: &EnvyDigraph, cap: usize) -> Result<Vec<FeedbackSet>> {
    let cycles = enumerate_trading_cycles_capped(graph, cap)?;
    let masks: Vec<BTreeSet<StudentId>> = cycles.iter().map(|c| c.nodes.iter().copied().collect()).collect();
    let mut picks = Vec::new();
    let mut chosen = Vec::new();
    let mut used = BTreeSet::new();
    packings_from(
        &masks,
        0,
        &mut chosen,
        &mut used,
        &mut picks,
        cap,
        &mut |_, used| graph.is_acyclic_without(used),
    )?;
    Ok(picks
        .into_iter()
        .map(|ks| FeedbackSet {
            cycles: ks.into_iter().map(|k| cycles[k].clone()).collect(),
        })
        .collect())
}

/// Splits an improvement over `baseline` into node-disjoint trading cycles
/// of the baseline's envy digraph.
///
/// Each improved student is paired with a student who vacated a seat at the
/// school it moved to (seats matched in declaration order when a school has
/// several); the pairing is a permutation of the improved students whose
/// cycles are returned in sorted order. Fails with a domination error when
/// `mu` does not weakly dominate `baseline`, and with an invariant error if a
/// cycle step is not an envy edge.
pub fn decompose_improvement(
    problem: &SchoolChoiceProblem,
    baseline: &Matching,
    mu: &Matching,
) -> Result<Vec<TradingCycle>> {
    if !weakly_dominates(problem, mu, baseline) {
        return Err(Error::Domination(
            "matching does not weakly dominate the baseline".into(),
        ));
    }
    let moved: Vec<StudentId> = problem
        .students()
        .filter(|&i| mu.school_of(i) != baseline.school_of(i))
        .collect();
    let mut vacated: Vec<Vec<StudentId>> = vec![Vec::new(); problem.num_schools()];
    for &j in &moved {
        if let Some(s) = baseline.school_of(j) {
            vacated[s.index()].push(j);
        }
    }
    let mut next_vacated = vec![0usize; problem.num_schools()];
    let mut successor: Vec<Option<StudentId>> = vec![None; problem.num_students()];
    for &i in &moved {
        let s: SchoolId = mu.school_of(i).ok_or_else(|| {
            Error::Invariant("an improved student cannot move to the outside option".into())
        })?;
        let k = next_vacated[s.index()];
        let j = *vacated[s.index()].get(k).ok_or_else(|| {
            Error::Invariant(format!(
                "school `{}` gains students without vacated seats",
                problem.school_name(s)
            ))
        })?;
        next_vacated[s.index()] += 1;
        successor[i.index()] = Some(j);
    }

    let mut visited = vec![false; problem.num_students()];
    let mut cycles = Vec::new();
    for &start in &moved {
        if visited[start.index()] {
            continue;
        }
        let mut nodes = Vec::new();
        let mut cur = start;
        while !visited[cur.index()] {
            visited[cur.index()] = true;
            nodes.push(cur);
            cur = successor[cur.index()]
                .ok_or_else(|| Error::Invariant("improvement is not a permutation".into()))?;
        }
        if cur != start {
            return Err(Error::Invariant("improvement is not a permutation".into()));
        }
        let cycle = TradingCycle::new(nodes)?;
        for (i, j) in cycle.arcs() {
            if !envies_unchecked(problem, baseline, i, j) {
                return Err(Error::Invariant(format!(
                    "`{}` -> `{}` is not an envy edge",
                    problem.student_name(i),
                    problem.student_name(j)
                )));
            }
        }
        cycles.push(cycle);
    }
    cycles.sort();
    Ok(cycles)
}
