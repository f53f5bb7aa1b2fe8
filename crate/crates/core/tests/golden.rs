//! Frozen text outputs. Each file under `tests/golden/` was produced by a
//! checked run and is compared byte for byte.

use school_choice::format::{parse_instance, serialize_instance};
use school_choice::instances::{example1, example2};
use school_choice::report::compare;
use school_choice::verify::cycle_table_reproduction;
use school_choice::{student_proposing_da, ConsentStructure};

const EXAMPLE2: &str = include_str!("golden/example2.txt");
const EXAMPLE1_7: &str = include_str!("golden/example1_7.txt");
const CYCLE_TABLE: &str = include_str!("golden/cycle_table.txt");
const COMPARE_EXAMPLE2: &str = include_str!("golden/compare_example2.txt");

#[test]
fn example2_file_parses_to_the_constructor() {
    let inst = parse_instance(EXAMPLE2).unwrap();
    assert_eq!(inst.problem, example2());
    assert_eq!(inst.consent, None);
    let da = student_proposing_da(&inst.problem);
    assert_eq!(da.render(&inst.problem), "i1:s1 i2:s2 i3:s3 i4:s4 i5:s5 i6:s6 i7:s7");
}

#[test]
fn serialized_instances_match_their_files() {
    assert_eq!(serialize_instance(&example2(), None), EXAMPLE2);
    let e7 = example1(7).unwrap();
    assert_eq!(serialize_instance(&e7, None), EXAMPLE1_7);
    assert_eq!(parse_instance(EXAMPLE1_7).unwrap().problem, e7);
}

#[test]
fn cycle_table_is_frozen() {
    assert_eq!(cycle_table_reproduction(&example1(7).unwrap()).unwrap(), CYCLE_TABLE);
}

#[test]
fn comparison_report_is_frozen() {
    let p = example2();
    let report = compare(&p, &ConsentStructure::all(&p)).unwrap();
    assert_eq!(report.render(), COMPARE_EXAMPLE2);
}
