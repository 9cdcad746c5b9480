//! Exhaustive self-checks over a small curve.
//!
//! Each check runs against a [`StepTables`] value so that a deliberately
//! damaged table can be shown to fail. The L-system walk and the matrix form
//! of the step rules do not depend on the tables and act as the references.

use std::fmt;

use crate::batch::{filter_map_range, Execution};
use crate::curve::{octant_of, Depth, HilbertIndex, Point3, StepTables};
use crate::geometry::{decode_step_via_matrix, encode_step_via_matrix};
use crate::lsystem;
use crate::ordering::delinearize;

/// Largest depth accepted for exhaustive verification.
pub const MAX_VERIFY_DEPTH: u8 = 4;
pub const MAX_COUNTEREXAMPLES: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub checked: u64,
    pub failed: u64,
    /// First few failures, in input order.
    pub counterexamples: Vec<String>,
}

impl CheckResult {
    fn new(name: &'static str, checked: u64, failures: Vec<String>) -> Self {
        let failed = failures.len() as u64;
        let counterexamples = failures.into_iter().take(MAX_COUNTEREXAMPLES).collect();
        CheckResult {
            name,
            checked,
            failed,
            counterexamples,
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub depth: Depth,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verify depth {}", self.depth)?;
        for c in &self.checks {
            let status = if c.passed() { "pass" } else { "FAIL" };
            writeln!(
                f,
                "  {status} {:<20} {} checked, {} failed",
                c.name, c.checked, c.failed
            )?;
            for ex in &c.counterexamples {
                writeln!(f, "       {ex}")?;
            }
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        if failed == 0 {
            write!(f, "all checks passed")
        } else {
            write!(f, "{failed} of {} checks failed", self.checks.len())
        }
    }
}

fn fmt_result<T: fmt::Debug, E: fmt::Display>(r: &Result<T, E>) -> String {
    match r {
        Ok(v) => format!("{v:?}"),
        Err(e) => format!("error: {e}"),
    }
}

fn bijection(tables: &StepTables, depth: Depth, exec: Execution) -> CheckResult {
    let n = depth.cells();
    let images: Vec<Option<u64>> = filter_map_range(0..n, exec, |i| {
        Some(
            tables
                .encode(delinearize(i as usize, depth), depth)
                .ok()
                .map(|h| h.0),
        )
    });
    let mut hits = vec![0u32; n as usize];
    for h in images.iter().flatten() {
        hits[*h as usize] += 1;
    }
    let failures = (0..n)
        .filter_map(|i| {
            let p = delinearize(i as usize, depth);
            match images[i as usize] {
                None => Some(format!("{p} does not encode")),
                Some(h) if hits[h as usize] != 1 => {
                    Some(format!("{p} -> {h}, shared by {} points", hits[h as usize]))
                }
                _ => None,
            }
        })
        .collect();
    CheckResult::new("bijection", n, failures)
}

fn round_trip_points(tables: &StepTables, depth: Depth, exec: Execution) -> CheckResult {
    let n = depth.cells();
    let failures = filter_map_range(0..n, exec, |i| {
        let p = delinearize(i as usize, depth);
        let back = tables
            .encode(p, depth)
            .and_then(|h| tables.decode(h, depth));
        (back != Ok(p)).then(|| format!("{p} -> {}", fmt_result(&back)))
    });
    CheckResult::new("decode(encode(p))", n, failures)
}

fn round_trip_indices(tables: &StepTables, depth: Depth, exec: Execution) -> CheckResult {
    let n = depth.cells();
    let failures = filter_map_range(0..n, exec, |h| {
        let h = HilbertIndex(h);
        let back = tables
            .decode(h, depth)
            .and_then(|p| tables.encode(p, depth));
        (back != Ok(h)).then(|| format!("{h} -> {}", fmt_result(&back)))
    });
    CheckResult::new("encode(decode(h))", n, failures)
}

fn adjacency(tables: &StepTables, depth: Depth, exec: Execution) -> CheckResult {
    let n = depth.cells() - 1;
    let failures = filter_map_range(0..n, exec, |h| {
        let a = tables.decode(HilbertIndex(h), depth);
        let b = tables.decode(HilbertIndex(h + 1), depth);
        match (&a, &b) {
            (Ok(a), Ok(b)) if a.l1_distance(*b) == 1 => None,
            _ => Some(format!(
                "{h} -> {}, {} -> {}",
                fmt_result(&a),
                h + 1,
                fmt_result(&b)
            )),
        }
    });
    CheckResult::new("unit steps", n, failures)
}

fn endpoints(tables: &StepTables, depth: Depth) -> CheckResult {
    let last = HilbertIndex(depth.cells() - 1);
    let expected = [
        (HilbertIndex(0), Point3::ORIGIN),
        (last, Point3::new(0, depth.side() - 1, 0)),
    ];
    let failures = expected
        .iter()
        .filter_map(|&(h, p)| {
            let got = tables.decode(h, depth);
            (got != Ok(p)).then(|| format!("{h} -> {}, expected {p}", fmt_result(&got)))
        })
        .collect();
    CheckResult::new("endpoints", 2, failures)
}

fn oracle(tables: &StepTables, depth: Depth, exec: Execution) -> CheckResult {
    let path = match lsystem::walk(depth.get()) {
        Ok(path) => path,
        Err(e) => return CheckResult::new("l-system oracle", 0, vec![format!("walk failed: {e}")]),
    };
    let n = depth.cells();
    let mut failures = Vec::new();
    if path.len() as u64 != n {
        failures.push(format!("walk produced {} cells, expected {n}", path.len()));
    }
    let path = &path;
    failures.extend(filter_map_range(0..n.min(path.len() as u64), exec, |h| {
        let got = tables.decode(HilbertIndex(h), depth);
        let want = path[h as usize];
        (got != Ok(want)).then(|| format!("{h}: decode {}, walk {want}", fmt_result(&got)))
    }));
    CheckResult::new("l-system oracle", n, failures)
}

fn half_widths(depth: Depth) -> impl Iterator<Item = u32> {
    let top = (1u32 << (depth.get() - 1)).max(4);
    (0..).map(|k| 1u32 << k).take_while(move |&w| w <= top)
}

fn step_matrices(tables: &StepTables, depth: Depth) -> CheckResult {
    let mut checked = 0;
    let mut failures = Vec::new();
    for w in half_widths(depth) {
        for x in 0..2 * w {
            for y in 0..2 * w {
                for z in 0..2 * w {
                    let p = Point3::new(x, y, z);
                    let o = octant_of(p, w).expect("point inside 2w cube");
                    let table = tables.encode_step(o, p, w);
                    let matrix = encode_step_via_matrix(o, p, w);
                    checked += 1;
                    if table != matrix {
                        failures.push(format!(
                            "encode octant {o} w {w} {p}: table {}, matrix {}",
                            fmt_result(&table),
                            fmt_result(&matrix)
                        ));
                    }
                }
            }
        }
        for o in 0..8 {
            for x in 0..w {
                for y in 0..w {
                    for z in 0..w {
                        let p = Point3::new(x, y, z);
                        let table = tables.decode_step(o, p, w);
                        let matrix = decode_step_via_matrix(o, p, w);
                        checked += 1;
                        if table != matrix {
                            failures.push(format!(
                                "decode octant {o} w {w} {p}: table {}, matrix {}",
                                fmt_result(&table),
                                fmt_result(&matrix)
                            ));
                        }
                    }
                }
            }
        }
    }
    CheckResult::new("table vs matrix", checked, failures)
}

fn depth_periodicity(tables: &StepTables, depth: Depth, exec: Execution) -> CheckResult {
    let n = depth.cells();
    let deeper = Depth::new(depth.get() as u64 + 3).expect("verify depths stay small");
    let failures = filter_map_range(0..n, exec, |i| {
        let p = delinearize(i as usize, depth);
        let a = tables.encode(p, depth);
        let b = tables.encode(p, deeper);
        (a != b).then(|| {
            format!(
                "{p}: depth {depth} {}, depth {deeper} {}",
                fmt_result(&a),
                fmt_result(&b)
            )
        })
    });
    CheckResult::new("depth periodicity", n, failures)
}

/// Runs every check at `depth`, which must not exceed [`MAX_VERIFY_DEPTH`].
pub fn run(tables: &StepTables, depth: Depth, exec: Execution) -> Report {
    assert!(
        depth.get() <= MAX_VERIFY_DEPTH,
        "exhaustive verification is limited to depth {MAX_VERIFY_DEPTH}"
    );
    let checks = vec![
        bijection(tables, depth, exec),
        round_trip_points(tables, depth, exec),
        round_trip_indices(tables, depth, exec),
        adjacency(tables, depth, exec),
        endpoints(tables, depth),
        oracle(tables, depth, exec),
        step_matrices(tables, depth),
        depth_periodicity(tables, depth, exec),
    ];
    Report { depth, checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::STEP_TABLES;

    #[test]
    fn canonical_tables_pass() {
        for r in 1..=3 {
            let report = run(&STEP_TABLES, Depth::new(r).unwrap(), Execution::Parallel);
            assert!(report.passed(), "{report}");
            assert_eq!(report.exit_code(), 0);
            assert!(report.to_string().ends_with("all checks passed"));
        }
    }

    #[test]
    fn swapped_encode_row_fails() {
        let mut tables = STEP_TABLES;
        tables.encode.swap(5, 6);
        let report = run(&tables, Depth::new(2).unwrap(), Execution::Sequential);
        assert_eq!(report.exit_code(), 1);
        let failed: Vec<_> = report
            .checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name)
            .collect();
        assert!(failed.contains(&"table vs matrix"));
        assert!(report
            .checks
            .iter()
            .all(|c| c.counterexamples.len() <= MAX_COUNTEREXAMPLES));
    }

    #[test]
    fn widths_cover_small_octants() {
        let d = |r| Depth::new(r).unwrap();
        assert_eq!(half_widths(d(1)).collect::<Vec<_>>(), vec![1, 2, 4]);
        assert_eq!(half_widths(d(4)).collect::<Vec<_>>(), vec![1, 2, 4, 8]);
    }
}
