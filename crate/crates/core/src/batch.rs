//! Bulk encode/decode over slices and index ranges.
//!
//! [`Execution::Parallel`] uses rayon when the `parallel` feature is enabled
//! and otherwise runs the sequential path. Output order never depends on the
//! execution mode.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::curve::{decode, encode, Depth, HilbertIndex, Point3};
use crate::error::{HilbertError, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// True when this mode actually runs on the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Fills `out[i] = f(i)`.
pub fn fill_indexed<T, F>(out: &mut [T], exec: Execution, f: F)
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        out.par_iter_mut()
            .enumerate()
            .for_each(|(i, slot)| *slot = f(i));
        return;
    }
    let _ = exec;
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = f(i);
    }
}

/// `f(i)` for every `i` in `range`, in order; stops at the first error.
pub fn map_range<T, F>(range: Range<u64>, exec: Execution, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return range.into_par_iter().map(f).collect();
    }
    let _ = exec;
    range.map(f).collect()
}

/// `f(i)` for every `i` in `range` that yields `Some`, in index order.
pub fn filter_map_range<T, F>(range: Range<u64>, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return range.into_par_iter().filter_map(f).collect();
    }
    let _ = exec;
    range.filter_map(f).collect()
}

/// Sum of `f(i)` over `0..len`.
pub fn sum_indexed<F>(len: usize, exec: Execution, f: F) -> u64
where
    F: Fn(usize) -> u64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..len).into_par_iter().map(f).sum();
    }
    let _ = exec;
    (0..len).map(f).sum()
}

/// Decodes every index in `range`.
pub fn decode_range(range: Range<u64>, depth: Depth, exec: Execution) -> Result<Vec<Point3>> {
    if range.end > depth.cells() {
        return Err(HilbertError::IndexOutOfRange {
            index: range.end - 1,
            bound: depth.cells(),
        });
    }
    map_range(range, exec, |h| decode(HilbertIndex(h), depth))
}

/// Decodes the whole curve.
pub fn decode_all(depth: Depth, exec: Execution) -> Result<Vec<Point3>> {
    decode_range(0..depth.cells(), depth, exec)
}

pub fn encode_points(
    points: &[Point3],
    depth: Depth,
    exec: Execution,
) -> Result<Vec<HilbertIndex>> {
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return points.par_iter().map(|&p| encode(p, depth)).collect();
    }
    let _ = exec;
    points.iter().map(|&p| encode(p, depth)).collect()
}

pub fn decode_indices(
    indices: &[HilbertIndex],
    depth: Depth,
    exec: Execution,
) -> Result<Vec<Point3>> {
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return indices.par_iter().map(|&h| decode(h, depth)).collect();
    }
    let _ = exec;
    indices.iter().map(|&h| decode(h, depth)).collect()
}
