//! Line-oriented text format for instances.
//!
//! ```text
//! # comment
//! students: i1 i2 i3
//! schools: s1:1 s2:2
//! pref i1: s2 s1
//! prio s1: i3 i1
//! consent: all
//! ```
//!
//! `students:` and `schools:` come first, once each. `pref` lines list a
//! student's acceptable schools from best to worst, `prio` lines a school's
//! priority order; both may be partial or missing. `consent:` is `all` or a
//! list of students. Identifiers are whitespace-free tokens.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{ConsentStructure, ProblemBuilder, SchoolChoiceProblem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub problem: SchoolChoiceProblem,
    pub consent: Option<ConsentStructure>,
}

fn relabel(line: usize, err: Error) -> Error {
    match err {
        Error::InvalidInstance { message, .. } => Error::at_line(line, message),
        other => Error::at_line(line, other.to_string()),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut builder = ProblemBuilder::default();
    let mut have_students = false;
    let mut have_schools = false;
    let mut consent: Option<(usize, Vec<String>, bool)> = None;

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (head, rest) = content
            .split_once(':')
            .ok_or_else(|| Error::at_line(line, format!("expected `key: values`, got `{content}`")))?;
        let head = head.trim();
        let tokens: Vec<&str> = rest.split_whitespace().collect();
        let mut words = head.split_whitespace();
        let keyword = words.next().unwrap_or("");
        let subject = words.next();
        if words.next().is_some() {
            return Err(Error::at_line(line, format!("unexpected tokens in `{head}`")));
        }

        match (keyword, subject) {
            ("students", None) => {
                if have_students {
                    return Err(Error::at_line(line, "students declared twice"));
                }
                for t in &tokens {
                    builder.student(t).map_err(|e| relabel(line, e))?;
                }
                have_students = true;
            }
            ("schools", None) => {
                if have_schools {
                    return Err(Error::at_line(line, "schools declared twice"));
                }
                for t in &tokens {
                    let (name, quota) = t
                        .split_once(':')
                        .ok_or_else(|| Error::at_line(line, format!("expected `name:quota`, got `{t}`")))?;
                    let quota: usize = quota
                        .parse()
                        .map_err(|_| Error::at_line(line, format!("bad quota in `{t}`")))?;
                    builder.school(name, quota).map_err(|e| relabel(line, e))?;
                }
                have_schools = true;
            }
            ("pref", Some(student)) => {
                if !(have_students && have_schools) {
                    return Err(Error::at_line(line, "pref before students and schools"));
                }
                builder.preference(student, &tokens).map_err(|e| relabel(line, e))?;
            }
            ("prio", Some(school)) => {
                if !(have_students && have_schools) {
                    return Err(Error::at_line(line, "prio before students and schools"));
                }
                builder.priority(school, &tokens).map_err(|e| relabel(line, e))?;
            }
            ("consent", None) => {
                if consent.is_some() {
                    return Err(Error::at_line(line, "consent given twice"));
                }
                let all = tokens.len() == 1 && tokens[0] == "all";
                consent = Some((line, tokens.iter().map(|t| t.to_string()).collect(), all));
            }
            _ => return Err(Error::at_line(line, format!("unknown directive `{head}`"))),
        }
    }

    if !have_students || !have_schools {
        return Err(Error::invalid("missing students or schools declaration"));
    }
    let problem = builder.build()?;
    let consent = match consent {
        None => None,
        Some((_, _, true)) => Some(ConsentStructure::all(&problem)),
        Some((line, names, false)) => {
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let mut seen = std::collections::BTreeSet::new();
            if let Some(d) = refs.iter().find(|n| !seen.insert(**n)) {
                return Err(Error::at_line(line, format!("student `{d}` consents twice")));
            }
            Some(ConsentStructure::from_names(&problem, &refs).map_err(|e| relabel(line, e))?)
        }
    };
    Ok(Instance { problem, consent })
}

/// Writes the declared lists only; completed priorities are not expanded,
/// so parsing the output reproduces the same problem.
pub fn serialize_instance(problem: &SchoolChoiceProblem, consent: Option<&ConsentStructure>) -> String {
    let mut out = String::new();
    let students: Vec<&str> = problem.students().map(|i| problem.student_name(i)).collect();
    let _ = writeln!(out, "students: {}", students.join(" "));
    let schools: Vec<String> = problem
        .schools()
        .map(|s| format!("{}:{}", problem.school_name(s), problem.quota(s)))
        .collect();
    let _ = writeln!(out, "schools: {}", schools.join(" "));
    for i in problem.students() {
        let list: Vec<&str> = problem.preference_list(i).iter().map(|&s| problem.school_name(s)).collect();
        let _ = writeln!(out, "pref {}: {}", problem.student_name(i), list.join(" "));
    }
    for s in problem.schools() {
        let list = problem.declared_priorities(s);
        if list.is_empty() {
            continue;
        }
        let names: Vec<&str> = list.iter().map(|&i| problem.student_name(i)).collect();
        let _ = writeln!(out, "prio {}: {}", problem.school_name(s), names.join(" "));
    }
    if let Some(w) = consent {
        if w.is_all(problem) {
            out.push_str("consent: all\n");
        } else {
            let names: Vec<&str> = w.iter().map(|i| problem.student_name(i)).collect();
            let _ = writeln!(out, "consent: {}", names.join(" "));
        }
    }
    // trailing spaces from empty lists
    out.lines().map(|l| l.trim_end().to_owned() + "\n").collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
# two students
students: a b
schools: x:1 y:2   # quotas
pref a: x y
pref b: y
prio x: b
consent: a
";

    #[test]
    fn parses_and_round_trips() {
        let inst = parse_instance(SMALL).unwrap();
        let p = &inst.problem;
        assert_eq!(p.num_students(), 2);
        assert_eq!(p.quota(p.school_id("y").unwrap()), 2);
        let consent = inst.consent.as_ref().unwrap();
        assert!(consent.contains(p.student_id("a").unwrap()));
        assert!(!consent.contains(p.student_id("b").unwrap()));
        let text = serialize_instance(p, inst.consent.as_ref());
        assert_eq!(parse_instance(&text).unwrap(), inst);
    }

    #[test]
    fn duplicate_school_in_pref_names_the_line() {
        let text = "students: a\nschools: x:1 y:1\n\npref a: x y x\n";
        let err = parse_instance(text).unwrap_err();
        assert!(matches!(err, Error::InvalidInstance { line: Some(4), .. }), "{err}");
    }

    #[test]
    fn malformed_lines() {
        for (text, line) in [
            ("students: a\nschools: x\n", 2),
            ("students: a\nschools: x:0\n", 2),
            ("students: a\nschools: x:1\npref z: x\n", 3),
            ("students: a\nschools: x:1\nprio x: a q\n", 3),
            ("students: a\nschools: x:1\nbogus\n", 3),
            ("students: a\nschools: x:1\nfoo: a\n", 3),
            ("pref a: x\n", 1),
            ("students: a\nstudents: b\n", 2),
            ("students: a\nschools: x:1\nconsent: q\n", 3),
        ] {
            match parse_instance(text) {
                Err(Error::InvalidInstance { line: Some(l), .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!(parse_instance("# nothing\n").is_err());
    }
}
