use school_choice::instances::{example1, example2, example3};
use school_choice::verify::{check_double_domination, check_properties, check_reverse_domination, render_checks, verify_paper, Check};
use school_choice::SchoolChoiceProblem;

fn failing_groups(checks: &[Check]) -> Vec<u8> {
    let mut groups: Vec<u8> = checks.iter().filter(|c| !c.passed).map(|c| c.criterion).collect();
    groups.dedup();
    groups
}

// The reference cycle table lists 7 cycles where the envy digraph has 10,
// and four of its rows disagree with the computed blocking sets; that group
// is expected to fail and everything else to pass.
#[test]
fn only_the_cycle_table_group_fails() {
    let checks = verify_paper();
    let groups: std::collections::BTreeSet<u8> = checks.iter().map(|c| c.criterion).collect();
    assert_eq!(groups.into_iter().collect::<Vec<_>>(), (1..=9).collect::<Vec<_>>());
    assert_eq!(failing_groups(&checks), vec![5], "{}", render_checks(&checks));
    let table_failures: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    assert_eq!(table_failures.len(), 8);
    assert!(table_failures.contains(&"number of trading cycles"));
}

fn with_priority(p: &SchoolChoiceProblem, school: &str, order: &[&str]) -> SchoolChoiceProblem {
    let mut b = SchoolChoiceProblem::builder();
    for i in p.students() {
        b.student(p.student_name(i)).unwrap();
    }
    for s in p.schools() {
        b.school(p.school_name(s), p.quota(s)).unwrap();
    }
    for i in p.students() {
        let list: Vec<&str> = p.preference_list(i).iter().map(|&s| p.school_name(s)).collect();
        b.preference(p.student_name(i), &list).unwrap();
    }
    for s in p.schools() {
        let name = p.school_name(s);
        if name == school {
            b.priority(name, order).unwrap();
        } else {
            let list: Vec<&str> = p.declared_priorities(s).iter().map(|&i| p.student_name(i)).collect();
            b.priority(name, &list).unwrap();
        }
    }
    b.build().unwrap()
}

#[test]
fn unmodified_comparison_examples_pass() {
    assert!(check_double_domination(&example2()).iter().all(|c| c.passed));
    assert!(check_reverse_domination(&example3()).iter().all(|c| c.passed));
}

#[test]
fn perturbed_example2_is_caught_with_a_diff() {
    // i7 now outranks i4 at s4
    let p = with_priority(&example2(), "s4", &["i7", "i4", "i1", "i6", "i5"]);
    let checks = check_double_domination(&p);
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|c| c.expected != c.actual));
    let text = render_checks(&checks);
    assert!(text.contains("FAIL [7]") && text.contains("expected:"), "{text}");
}

#[test]
fn checks_reject_the_wrong_instance() {
    let checks = check_double_domination(&example1(7).unwrap());
    assert!(checks.iter().any(|c| !c.passed));
}

#[test]
fn property_sweep_is_clean_on_other_seeds() {
    assert!(check_properties(200, 77).iter().all(|c| c.passed));
}
