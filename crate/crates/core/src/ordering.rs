//! Reordering cube data along the curve and splitting the curve into
//! contiguous parts.

use std::collections::HashSet;
use std::fmt;
use std::ops::Range;

use serde::Serialize;

use crate::batch::{self, Execution};
use crate::curve::{decode, encode, Depth, HilbertIndex, Point3};
use crate::error::{HilbertError, Result};

/// Storage order of a [`CubeArray`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Layout {
    /// Linear index `x + M * (y + M * z)`, x fastest.
    RowMajor,
    /// Element `h` belongs to the cell at curve index `h`.
    Hilbert,
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layout::RowMajor => "row-major",
            Layout::Hilbert => "hilbert",
        })
    }
}

/// Row-major linear index of `p` in a cube of the given depth.
#[inline]
pub fn linear_index(p: Point3, depth: Depth) -> usize {
    let m = depth.side() as usize;
    p.x as usize + m * (p.y as usize + m * p.z as usize)
}

/// Inverse of [`linear_index`].
#[inline]
pub fn delinearize(i: usize, depth: Depth) -> Point3 {
    let shift = depth.get() as usize;
    let mask = (1usize << shift) - 1;
    Point3::new(
        (i & mask) as u32,
        ((i >> shift) & mask) as u32,
        (i >> (2 * shift)) as u32,
    )
}

/// One scalar per cell of a `2^r` cube.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeArray {
    depth: Depth,
    layout: Layout,
    data: Vec<u64>,
}

impl CubeArray {
    pub fn new(depth: Depth, layout: Layout, data: Vec<u64>) -> Result<Self> {
        if data.len() as u64 != depth.cells() {
            return Err(HilbertError::DataLength {
                len: data.len(),
                expected: depth.cells(),
            });
        }
        Ok(CubeArray {
            depth,
            layout,
            data,
        })
    }

    pub fn depth(&self) -> Depth {
        self.depth
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u64> {
        self.data
    }

    /// Value stored for cell `p`, whatever the layout.
    pub fn get(&self, p: Point3) -> Result<u64> {
        let i = match self.layout {
            Layout::RowMajor => {
                self.depth.check_point(p)?;
                linear_index(p, self.depth)
            }
            Layout::Hilbert => encode(p, self.depth)?.0 as usize,
        };
        Ok(self.data[i])
    }

    fn expect_layout(&self, expected: Layout) -> Result<()> {
        if self.layout == expected {
            Ok(())
        } else {
            Err(HilbertError::LayoutMismatch {
                expected,
                found: self.layout,
            })
        }
    }
}

/// Permutes a row-major array into curve order.
pub fn to_hilbert_order(a: &CubeArray, exec: Execution) -> Result<CubeArray> {
    a.expect_layout(Layout::RowMajor)?;
    let depth = a.depth;
    let mut out = vec![0u64; a.data.len()];
    batch::fill_indexed(&mut out, exec, |h| {
        let p = decode(HilbertIndex(h as u64), depth).expect("index below 8^r");
        a.data[linear_index(p, depth)]
    });
    CubeArray::new(depth, Layout::Hilbert, out)
}

/// Permutes a curve-ordered array back into row-major order.
pub fn from_hilbert_order(a: &CubeArray, exec: Execution) -> Result<CubeArray> {
    a.expect_layout(Layout::Hilbert)?;
    let depth = a.depth;
    let mut out = vec![0u64; a.data.len()];
    batch::fill_indexed(&mut out, exec, |i| {
        let h = encode(delinearize(i, depth), depth).expect("cell inside cube");
        a.data[h.0 as usize]
    });
    CubeArray::new(depth, Layout::RowMajor, out)
}

/// Balanced split of `[0, 8^r)` into contiguous index ranges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub depth: Depth,
    /// `parts + 1` ascending indices from 0 to `8^r`.
    pub boundaries: Vec<u64>,
}

impl Partition {
    pub fn count(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn part(&self, i: usize) -> Range<u64> {
        self.boundaries[i]..self.boundaries[i + 1]
    }

    pub fn parts(&self) -> impl Iterator<Item = Range<u64>> + '_ {
        self.boundaries.windows(2).map(|w| w[0]..w[1])
    }
}

/// `boundary[i] = floor(i * 8^r / parts)`.
pub fn partition(depth: Depth, parts: u64) -> Result<Partition> {
    let total = depth.cells();
    if parts == 0 || parts > total {
        return Err(HilbertError::PartsOutOfRange { parts, max: total });
    }
    let boundaries = (0..=parts)
        .map(|i| (i as u128 * total as u128 / parts as u128) as u64)
        .collect();
    Ok(Partition { depth, boundaries })
}

/// Locality figures for the cells of one index range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PartStats {
    pub begin: u64,
    pub end: u64,
    pub count: u64,
    pub bbox_min: Point3,
    pub bbox_max: Point3,
    pub bbox_volume: u64,
    /// Unit faces between a member cell and a non-member or exterior cell.
    pub surface: u64,
}

const NEIGHBOUR_OFFSETS: [[i64; 3]; 6] = [
    [1, 0, 0],
    [-1, 0, 0],
    [0, 1, 0],
    [0, -1, 0],
    [0, 0, 1],
    [0, 0, -1],
];

pub fn partition_stats(depth: Depth, part: Range<u64>, exec: Execution) -> Result<PartStats> {
    if part.start >= part.end {
        return Err(HilbertError::EmptyRange {
            start: part.start,
            end: part.end,
        });
    }
    let cells = batch::decode_range(part.clone(), depth, exec)?;
    let mut lo = [u32::MAX; 3];
    let mut hi = [0u32; 3];
    for p in &cells {
        for (k, c) in p.to_array().into_iter().enumerate() {
            lo[k] = lo[k].min(c);
            hi[k] = hi[k].max(c);
        }
    }
    let bbox_volume = (0..3).map(|k| (hi[k] - lo[k]) as u64 + 1).product();

    let members: HashSet<Point3> = cells.iter().copied().collect();
    let side = depth.side() as i64;
    let surface = batch::sum_indexed(cells.len(), exec, |i| {
        let [x, y, z] = cells[i].to_array().map(i64::from);
        NEIGHBOUR_OFFSETS
            .iter()
            .filter(|[dx, dy, dz]| {
                let n = [x + dx, y + dy, z + dz];
                if n.iter().any(|&c| c < 0 || c >= side) {
                    return true;
                }
                !members.contains(&Point3::new(n[0] as u32, n[1] as u32, n[2] as u32))
            })
            .count() as u64
    });

    Ok(PartStats {
        begin: part.start,
        end: part.end,
        count: cells.len() as u64,
        bbox_min: Point3::from(lo),
        bbox_max: Point3::from(hi),
        bbox_volume,
        surface,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(r: u64) -> Depth {
        Depth::new(r).unwrap()
    }

    #[test]
    fn linearization_round_trip() {
        let depth = d(3);
        for i in 0..depth.cells() as usize {
            assert_eq!(linear_index(delinearize(i, depth), depth), i);
        }
        assert_eq!(linear_index(Point3::new(1, 0, 1), d(1)), 5);
    }

    #[test]
    fn depth_one_permutation() {
        let a = CubeArray::new(d(1), Layout::RowMajor, (0..8).collect()).unwrap();
        let h = to_hilbert_order(&a, Execution::Sequential).unwrap();
        assert_eq!(h.data(), &[0, 1, 5, 4, 6, 7, 3, 2]);
        assert_eq!(from_hilbert_order(&h, Execution::Parallel).unwrap(), a);
    }

    #[test]
    fn constant_arrays_stay_constant() {
        for r in 1..=3 {
            let n = d(r).cells() as usize;
            let a = CubeArray::new(d(r), Layout::RowMajor, vec![7; n]).unwrap();
            let h = to_hilbert_order(&a, Execution::Parallel).unwrap();
            assert!(h.data().iter().all(|&v| v == 7));
            let back = from_hilbert_order(&h, Execution::Parallel).unwrap();
            assert!(back.data().iter().all(|&v| v == 7));
        }
    }

    #[test]
    fn get_agrees_across_layouts() {
        let depth = d(2);
        let a = CubeArray::new(depth, Layout::RowMajor, (100..164).collect()).unwrap();
        let h = to_hilbert_order(&a, Execution::Parallel).unwrap();
        for i in 0..64 {
            let p = delinearize(i, depth);
            assert_eq!(a.get(p).unwrap(), h.get(p).unwrap());
        }
    }

    #[test]
    fn wrong_layout_and_length() {
        let a = CubeArray::new(d(1), Layout::Hilbert, vec![0; 8]).unwrap();
        assert_eq!(
            to_hilbert_order(&a, Execution::Parallel),
            Err(HilbertError::LayoutMismatch {
                expected: Layout::RowMajor,
                found: Layout::Hilbert
            })
        );
        let b = CubeArray::new(d(1), Layout::RowMajor, vec![0; 8]).unwrap();
        assert!(from_hilbert_order(&b, Execution::Parallel).is_err());
        assert!(CubeArray::new(d(1), Layout::RowMajor, vec![0; 7]).is_err());
    }

    #[test]
    fn partition_examples() {
        assert_eq!(partition(d(1), 2).unwrap().boundaries, vec![0, 4, 8]);
        assert_eq!(partition(d(2), 3).unwrap().boundaries, vec![0, 21, 42, 64]);
        let singles = partition(d(1), 8).unwrap();
        assert!(singles.parts().all(|r| r.end - r.start == 1));
        assert!(partition(d(1), 0).is_err());
        assert!(partition(d(1), 9).is_err());
        assert_eq!(
            partition(d(20), 7).unwrap().boundaries.last(),
            Some(&(1u64 << 60))
        );
    }

    #[test]
    fn stats_examples() {
        let whole = partition_stats(d(2), 0..64, Execution::Parallel).unwrap();
        assert_eq!(
            (whole.count, whole.bbox_volume, whole.surface),
            (64, 64, 96)
        );
        let single = partition_stats(d(3), 100..101, Execution::Sequential).unwrap();
        assert_eq!(
            (single.count, single.bbox_volume, single.surface),
            (1, 1, 6)
        );
        let first = partition_stats(d(2), 0..8, Execution::Parallel).unwrap();
        assert_eq!((first.count, first.bbox_volume, first.surface), (8, 8, 24));
    }

    #[test]
    fn stats_errors() {
        assert!(matches!(
            partition_stats(d(2), 5..5, Execution::Parallel),
            Err(HilbertError::EmptyRange { .. })
        ));
        assert!(partition_stats(d(1), 0..9, Execution::Parallel).is_err());
    }
}
