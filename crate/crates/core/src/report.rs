//! Side-by-side comparison of DA, EADA and DA+TTC on one instance.
//!
//! Every figure in a [`ComparisonReport`] comes from the model, mechanism and
//! oracle functions; the report only collects and formats them. Rendering is
//! deterministic: mechanisms appear in a fixed order and all sets are sorted.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::Result;
use crate::mechanisms::Mechanism;
use crate::model::{blocking_pairs, improved_over, BlockingSet, ConsentStructure, Matching, SchoolChoiceProblem, StudentId};
use crate::oracle::{doubly_dominates, pareto_frontier_over_da, ImprovementRatio};

/// `{i1, i2}` in declaration order.
pub fn render_students(problem: &SchoolChoiceProblem, set: &BTreeSet<StudentId>) -> String {
    let names: Vec<&str> = set.iter().map(|&i| problem.student_name(i)).collect();
    format!("{{{}}}", names.join(", "))
}

/// `4.0`, or `undefined` when the mechanism improves nobody.
pub fn render_ratio(ratio: &ImprovementRatio) -> String {
    match ratio.value() {
        Some(v) => format!("{v:?}"),
        None => "undefined".to_owned(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MechanismOutcome {
    pub mechanism: Mechanism,
    pub matching: Matching,
    pub improved: BTreeSet<StudentId>,
    pub blocking: BlockingSet,
    pub setwise_minimal: bool,
    pub ratio: ImprovementRatio,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub problem: SchoolChoiceProblem,
    pub consent: ConsentStructure,
    pub outcomes: Vec<MechanismOutcome>,
    pub max_improvement: usize,
    pub dominating_count: usize,
    pub frontier_size: usize,
    pub minimal_blocking_sets: Vec<BlockingSet>,
    /// `double_domination[a][b]`: outcome `a` doubly dominates outcome `b`.
    pub double_domination: Vec<Vec<bool>>,
}

/// Runs DA, EADA under `consent` and DA+TTC, and the oracle over DA.
pub fn compare(problem: &SchoolChoiceProblem, consent: &ConsentStructure) -> Result<ComparisonReport> {
    let frontier = pareto_frontier_over_da(problem)?;
    let mechanisms = [Mechanism::Da, Mechanism::Eada(consent.clone()), Mechanism::DaTtc];
    let da = Mechanism::Da.run(problem);
    let mut outcomes = Vec::with_capacity(mechanisms.len());
    for mechanism in mechanisms {
        let matching = mechanism.run(problem);
        let improved = improved_over(problem, &matching, &da)?;
        outcomes.push(MechanismOutcome {
            blocking: blocking_pairs(problem, &matching),
            setwise_minimal: frontier.is_setwise_minimal(&matching),
            ratio: ImprovementRatio {
                max_improvement: frontier.max_improvement.value,
                improved: improved.len(),
            },
            mechanism,
            matching,
            improved,
        });
    }
    let mut double_domination = Vec::with_capacity(outcomes.len());
    for a in &outcomes {
        let mut row = Vec::with_capacity(outcomes.len());
        for b in &outcomes {
            row.push(doubly_dominates(problem, &a.matching, &b.matching)?);
        }
        double_domination.push(row);
    }
    Ok(ComparisonReport {
        problem: problem.clone(),
        consent: consent.clone(),
        outcomes,
        max_improvement: frontier.max_improvement.value,
        dominating_count: frontier.dominating_count,
        frontier_size: frontier.efficient.len(),
        minimal_blocking_sets: frontier.minimal_blocking_sets,
        double_domination,
    })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Left-aligned columns separated by two spaces, trailing blanks trimmed.
pub(crate) fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut widths = vec![0; cols];
    for row in rows {
        for (k, cell) in row.iter().enumerate() {
            widths[k] = widths[k].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (k, cell) in row.iter().enumerate() {
            let _ = write!(line, "{cell:<w$}  ", w = widths[k]);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

impl ComparisonReport {
    fn label(&self, o: &MechanismOutcome) -> String {
        match &o.mechanism {
            Mechanism::Eada(w) if w.is_all(&self.problem) => "eada[all]".to_owned(),
            Mechanism::Eada(w) => {
                let names: Vec<&str> = w.iter().map(|i| self.problem.student_name(i)).collect();
                format!("eada[{}]", names.join(","))
            }
            m => m.name().to_owned(),
        }
    }

    pub fn render(&self) -> String {
        let p = &self.problem;
        let mut out = String::new();

        let mut rows = vec![vec![
            "mechanism".to_owned(),
            "improved".to_owned(),
            "blocking".to_owned(),
            "setwise-minimal".to_owned(),
            "ratio".to_owned(),
            "matching".to_owned(),
        ]];
        for o in &self.outcomes {
            rows.push(vec![
                self.label(o),
                o.improved.len().to_string(),
                o.blocking.len().to_string(),
                yes_no(o.setwise_minimal).to_owned(),
                render_ratio(&o.ratio),
                o.matching.render(p),
            ]);
        }
        out.push_str(&table(&rows));
        out.push('\n');

        let mut header = vec!["doubly dominates".to_owned()];
        header.extend(self.outcomes.iter().map(|o| self.label(o)));
        let mut rows = vec![header];
        for (a, row) in self.outcomes.iter().zip(&self.double_domination) {
            let mut cells = vec![self.label(a)];
            cells.extend(row.iter().map(|&b| yes_no(b).to_owned()));
            rows.push(cells);
        }
        out.push_str(&table(&rows));
        out.push('\n');

        for o in &self.outcomes {
            let l = self.label(o);
            let _ = writeln!(out, "{l}.matching = {}", o.matching.render(p));
            let _ = writeln!(out, "{l}.improved = {}", render_students(p, &o.improved));
            let _ = writeln!(out, "{l}.improved_count = {}", o.improved.len());
            let _ = writeln!(out, "{l}.blocking = {}", o.blocking.render(p));
            let _ = writeln!(out, "{l}.blocking_count = {}", o.blocking.len());
            let _ = writeln!(out, "{l}.setwise_minimal = {}", o.setwise_minimal);
            let _ = writeln!(out, "{l}.ratio = {}", render_ratio(&o.ratio));
        }
        let _ = writeln!(out, "oracle.max_improvement = {}", self.max_improvement);
        let _ = writeln!(out, "oracle.dominating_count = {}", self.dominating_count);
        let _ = writeln!(out, "oracle.frontier_size = {}", self.frontier_size);
        for (k, set) in self.minimal_blocking_sets.iter().enumerate() {
            let _ = writeln!(out, "oracle.minimal_blocking_set.{} = {}", k + 1, set.render(p));
        }
        for (a, row) in self.outcomes.iter().zip(&self.double_domination) {
            for (b, &v) in self.outcomes.iter().zip(row) {
                let _ = writeln!(out, "doubly_dominates.{}.{} = {v}", self.label(a), self.label(b));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn swap() -> SchoolChoiceProblem {
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
    fn table_pads_columns() {
        let rows = vec![
            vec!["a".to_owned(), "bb".to_owned()],
            vec!["ccc".to_owned(), "d".to_owned()],
        ];
        assert_eq!(table(&rows), "a    bb\nccc  d\n");
    }

    #[test]
    fn report_is_deterministic_and_consistent() {
        let p = swap();
        let r = compare(&p, &ConsentStructure::all(&p)).unwrap();
        assert_eq!(r.render(), compare(&p, &ConsentStructure::all(&p)).unwrap().render());
        assert_eq!(r.outcomes[0].improved.len(), 0);
        assert_eq!(r.outcomes[0].ratio.value(), None);
        assert_eq!(r.outcomes[1].improved.len(), 2);
        assert_eq!(r.max_improvement, 2);
        assert!(r.double_domination.iter().enumerate().all(|(k, row)| !row[k]));
        let text = r.render();
        assert!(text.contains("eada[all].improved = {a, b}\n"), "{text}");
        assert!(text.contains("da.ratio = undefined\n"), "{text}");
        assert!(text.contains("eada[all].ratio = 1.0\n"), "{text}");
    }
}
