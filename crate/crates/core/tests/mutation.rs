//! Damaged step tables must be caught by the verification suite.

use hilbert3d::batch::Execution;
use hilbert3d::verify;
use hilbert3d::{Depth, StepTables, STEP_TABLES};

fn exit_code(tables: &StepTables) -> i32 {
    verify::run(tables, Depth::new(2).unwrap(), Execution::Parallel).exit_code()
}

#[test]
fn canonical_tables_pass() {
    assert_eq!(exit_code(&STEP_TABLES), 0);
}

#[test]
fn every_single_field_corruption_is_detected() {
    for table in 0..2 {
        for o in 0..8 {
            for axis in 0..3 {
                let mut t = STEP_TABLES;
                let rules = if table == 0 {
                    &mut t.encode
                } else {
                    &mut t.decode
                };
                rules[o][axis].bias += 1;
                assert_eq!(
                    exit_code(&t),
                    1,
                    "table {table} octant {o} axis {axis} bias"
                );

                let mut t = STEP_TABLES;
                let rules = if table == 0 {
                    &mut t.encode
                } else {
                    &mut t.decode
                };
                rules[o][axis].negate = !rules[o][axis].negate;
                assert_eq!(
                    exit_code(&t),
                    1,
                    "table {table} octant {o} axis {axis} sign"
                );
            }
        }
    }
}

#[test]
fn swapped_rows_are_detected() {
    let mut t = STEP_TABLES;
    t.encode.swap(3, 4);
    let report = verify::run(&t, Depth::new(3).unwrap(), Execution::Sequential);
    assert_eq!(report.exit_code(), 1);
    assert!(report.to_string().contains("FAIL"));
}
