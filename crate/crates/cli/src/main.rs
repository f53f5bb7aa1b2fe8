use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use school_choice::envy::{
    apply_cycles, build_envy_digraph, cycle_blocking_report, enumerate_feedback_sets, enumerate_trading_cycles,
};
use school_choice::format::{parse_instance, serialize_instance, Instance};
use school_choice::instances::{example1, example2, example3};
use school_choice::oracle::{improvement_ratio, max_improvement, pareto_frontier_over_da};
use school_choice::report::{compare, render_ratio, render_students};
use school_choice::verify::{cycle_table_reproduction, render_checks, verify_paper};
use school_choice::{
    blocking_pairs, student_proposing_da, ConsentStructure, Error, Matching, Mechanism, SchoolChoiceProblem,
};

/// Exit code when `verify-paper` finishes with failed checks.
const EXIT_CHECKS_FAILED: u8 = 4;

#[derive(Parser)]
#[command(name = "school-choice", version, about = "School choice mechanisms, envy cycles and exhaustive oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MechanismArg {
    Da,
    DaSchool,
    Eada,
    DaTtc,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum RatioMechanism {
    Eada,
    DaTtc,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Example1,
    Example2,
    Example3,
}

#[derive(Subcommand)]
enum Command {
    /// Run one mechanism and report the matching, improvements and blocking pairs.
    Solve {
        #[arg(long, value_enum)]
        mechanism: MechanismArg,
        #[arg(long)]
        input: PathBuf,
        /// `all` or a comma-separated list of students; defaults to the
        /// instance's consent line, then to everyone.
        #[arg(long)]
        consent: Option<String>,
    },
    /// Trading cycles of the envy digraph at DA, with the blocking pairs each leaves.
    Cycles {
        #[arg(long)]
        input: PathBuf,
    },
    /// Disjoint cycle collections that leave the envy digraph acyclic.
    FeedbackSets {
        #[arg(long)]
        input: PathBuf,
    },
    /// Largest number of students any matching dominating DA can improve.
    MaxImprove {
        #[arg(long)]
        input: PathBuf,
    },
    /// Pareto-efficient matchings dominating DA and their minimal blocking sets.
    Frontier {
        #[arg(long)]
        input: PathBuf,
    },
    /// DA, EADA and DA+TTC side by side, with oracle verdicts.
    Compare {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        consent: Option<String>,
    },
    /// Print or write one of the built-in instances.
    Family {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Improvement ratio of a full-consent mechanism on a built-in instance.
    Ratio {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value = "eada")]
        mechanism: RatioMechanism,
    },
    /// Run every reproduction check and print the cycle table.
    VerifyPaper,
}

enum Failure {
    Lib(Error),
    Input(String),
    Checks(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<String, Failure>;

fn load(path: &Path) -> Result<Instance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_instance(&text)?)
}

fn consent_for(instance: &Instance, flag: Option<&str>) -> Result<ConsentStructure, Failure> {
    let p = &instance.problem;
    match flag {
        Some("all") => Ok(ConsentStructure::all(p)),
        Some(list) => {
            let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            Ok(ConsentStructure::from_names(p, &names)?)
        }
        None => Ok(instance.consent.clone().unwrap_or_else(|| ConsentStructure::all(p))),
    }
}

fn family_problem(family: Family, n: Option<usize>) -> Result<SchoolChoiceProblem, Failure> {
    match (family, n) {
        (Family::Example1, Some(n)) => Ok(example1(n)?),
        (Family::Example1, None) => Err(Failure::Input("example1 needs --n".into())),
        (Family::Example2, None) => Ok(example2()),
        (Family::Example3, None) => Ok(example3()),
        (_, Some(_)) => Err(Failure::Input("--n only applies to example1".into())),
    }
}

fn solve(instance: &Instance, mechanism: MechanismArg, consent: Option<&str>) -> Outcome {
    let p = &instance.problem;
    let mechanism = match mechanism {
        MechanismArg::Da => Mechanism::Da,
        MechanismArg::DaSchool => Mechanism::DaSchool,
        MechanismArg::Eada => Mechanism::Eada(consent_for(instance, consent)?),
        MechanismArg::DaTtc => Mechanism::DaTtc,
    };
    let da = student_proposing_da(p);
    let mu = mechanism.run(p);
    let rows: Vec<[String; 4]> = p
        .students()
        .map(|i| {
            [
                p.student_name(i).to_owned(),
                p.placement_name(mu.school_of(i)).to_owned(),
                p.rank_of_school(i, mu.school_of(i)).to_string(),
                p.placement_name(da.school_of(i)).to_owned(),
            ]
        })
        .collect();
    let mut out = columns(
        std::iter::once(["student", "school", "rank", "da"].map(String::from))
            .chain(rows)
            .collect(),
    );
    out.push('\n');
    let _ = writeln!(out, "mechanism = {mechanism}");
    if let Mechanism::Eada(w) = &mechanism {
        let consenting: BTreeSet<_> = w.iter().collect();
        let _ = writeln!(out, "consent = {}", render_students(p, &consenting));
    }
    let _ = writeln!(out, "matching = {}", mu.render(p));
    // school-proposing DA can leave students worse off than student-proposing DA
    match school_choice::model::improved_over(p, &mu, &da) {
        Ok(set) => {
            let _ = writeln!(out, "improved = {}", render_students(p, &set));
            let _ = writeln!(out, "improved_count = {}", set.len());
        }
        Err(_) => {
            let _ = writeln!(out, "improved = n/a (does not dominate DA)");
        }
    }
    let b = blocking_pairs(p, &mu);
    let _ = writeln!(out, "blocking = {}", b.render(p));
    let _ = writeln!(out, "blocking_count = {}", b.len());
    Ok(out)
}

fn columns<const N: usize>(rows: Vec<[String; N]>) -> String {
    let mut widths = [0usize; N];
    for row in &rows {
        for (k, cell) in row.iter().enumerate() {
            widths[k] = widths[k].max(cell.len());
        }
    }
    let mut out = String::new();
    for row in &rows {
        let mut line = String::new();
        for (k, cell) in row.iter().enumerate() {
            let _ = write!(line, "{cell:<w$}  ", w = widths[k]);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn cycles(p: &SchoolChoiceProblem) -> Outcome {
    let da = student_proposing_da(p);
    let graph = build_envy_digraph(p, &da);
    let cycles = enumerate_trading_cycles(&graph)?;
    let mut rows = vec![["cycle".to_owned(), "blocking pairs".to_owned()]];
    for c in &cycles {
        let b = cycle_blocking_report(p, std::slice::from_ref(c))?;
        rows.push([c.render(p), b.render(p)]);
    }
    let mut out = columns(rows);
    let _ = writeln!(out, "\nenvy_edges = {}", graph.num_edges());
    let _ = writeln!(out, "cycles = {}", cycles.len());
    Ok(out)
}

fn feedback_sets(p: &SchoolChoiceProblem) -> Outcome {
    let da = student_proposing_da(p);
    let sets = enumerate_feedback_sets(&build_envy_digraph(p, &da))?;
    let mut rows = vec![["cycles".to_owned(), "improved".to_owned(), "blocking".to_owned()]];
    for f in &sets {
        let mu = apply_cycles(p, &da, &f.cycles)?;
        rows.push([f.render(p), f.covered().len().to_string(), blocking_pairs(p, &mu).len().to_string()]);
    }
    let mut out = columns(rows);
    let _ = writeln!(out, "\nfeedback_sets = {}", sets.len());
    Ok(out)
}

fn max_improve(p: &SchoolChoiceProblem) -> Outcome {
    let m = max_improvement(p)?;
    let mut rows = vec![["witness".to_owned(), "blocking".to_owned()]];
    for w in &m.witnesses {
        rows.push([w.render(p), blocking_pairs(p, w).render(p)]);
    }
    let mut out = columns(rows);
    let _ = writeln!(out, "\nmax_improvement = {}", m.value);
    let _ = writeln!(out, "witnesses = {}", m.witnesses.len());
    Ok(out)
}

fn frontier(p: &SchoolChoiceProblem) -> Outcome {
    let f = pareto_frontier_over_da(p)?;
    let mut rows = vec![[
        "matching".to_owned(),
        "improved".to_owned(),
        "blocking".to_owned(),
        "setwise-minimal".to_owned(),
    ]];
    for e in &f.efficient {
        rows.push([
            e.matching.render(p),
            e.improved_count().to_string(),
            e.blocking.render(p),
            if f.is_setwise_minimal(&e.matching) { "yes" } else { "no" }.to_owned(),
        ]);
    }
    let mut out = columns(rows);
    out.push('\n');
    let _ = writeln!(out, "dominating_count = {}", f.dominating_count);
    let _ = writeln!(out, "frontier_size = {}", f.efficient.len());
    let _ = writeln!(out, "max_improvement = {}", f.max_improvement.value);
    for (k, b) in f.minimal_blocking_sets.iter().enumerate() {
        let _ = writeln!(out, "minimal_blocking_set.{} = {}", k + 1, b.render(p));
    }
    Ok(out)
}

fn ratio(family: Family, n: Option<usize>, mechanism: RatioMechanism) -> Outcome {
    let p = family_problem(family, n)?;
    let mu: Matching = match mechanism {
        RatioMechanism::Eada => school_choice::eada(&p, &ConsentStructure::all(&p)),
        RatioMechanism::DaTtc => school_choice::da_ttc(&p),
    };
    Ok(format!("{}\n", render_ratio(&improvement_ratio(&p, &mu)?)))
}

fn verify() -> Outcome {
    let checks = verify_paper();
    let mut out = render_checks(&checks);
    out.push('\n');
    out.push_str(&cycle_table_reproduction(&example1(7)?)?);
    if checks.iter().all(|c| c.passed) {
        Ok(out)
    } else {
        Err(Failure::Checks(out))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Solve {
            mechanism,
            input,
            consent,
        } => solve(&load(&input)?, mechanism, consent.as_deref()),
        Command::Cycles { input } => cycles(&load(&input)?.problem),
        Command::FeedbackSets { input } => feedback_sets(&load(&input)?.problem),
        Command::MaxImprove { input } => max_improve(&load(&input)?.problem),
        Command::Frontier { input } => frontier(&load(&input)?.problem),
        Command::Compare { input, consent } => {
            let instance = load(&input)?;
            let w = consent_for(&instance, consent.as_deref())?;
            Ok(compare(&instance.problem, &w)?.render())
        }
        Command::Family { family, n, emit } => {
            let text = serialize_instance(&family_problem(family, n)?, None);
            match emit {
                Some(path) => {
                    fs::write(&path, &text)
                        .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Command::Ratio { family, n, mechanism } => ratio(family, n, mechanism),
        Command::VerifyPaper => verify(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Checks(text)) => {
            print!("{text}");
            ExitCode::from(EXIT_CHECKS_FAILED)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::InvalidInstance { .. } | Error::Argument(_) => 1,
                Error::Domination(_) | Error::Invariant(_) => 2,
                Error::Resource { .. } => 3,
            })
        }
    }
}
