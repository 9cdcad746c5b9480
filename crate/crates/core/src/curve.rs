//! Integer-only mapping between lattice points and 3D Hilbert indices.
//!
//! A depth-`r` curve visits every cell of a `2^r`-sided cube. The index is
//! read as `r` octal digits: encoding resolves digits from the most
//! significant end by repeatedly locating the octant that holds the point and
//! mapping it into that octant's local frame, and decoding replays the inverse
//! maps from the least significant digit upward.
//!
//! Leading zero digits all select octant 0, whose encode rule is the coordinate
//! rotation `(x, y, z) -> (z, x, y)`. That rotation has order three, so the
//! `r - r_min` leading zeros collapse into a single rotation by
//! `(r - r_min) mod 3` steps before (encode) or after (decode) the digit loop.
//!
//! Every per-digit update is an integer affine rule, see [`StepTables`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{HilbertError, Result};

pub const MIN_DEPTH: u8 = 1;
/// Largest supported depth: `8^20 - 1` fits in `u64` and `2^20 - 1` in `u32`.
pub const MAX_DEPTH: u8 = 20;

/// Recursion depth `r` of a curve; the cube has side `2^r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Depth(u8);

impl Depth {
    pub fn new(r: u64) -> Result<Self> {
        if (MIN_DEPTH as u64..=MAX_DEPTH as u64).contains(&r) {
            Ok(Depth(r as u8))
        } else {
            Err(HilbertError::DepthOutOfRange {
                depth: r,
                min: MIN_DEPTH,
                max: MAX_DEPTH,
            })
        }
    }

    #[inline]
    pub const fn get(self) -> u8 {
        self.0
    }

    /// Cells per side, `2^r`.
    #[inline]
    pub const fn side(self) -> u32 {
        1 << self.0
    }

    /// Total number of cells, `8^r`.
    #[inline]
    pub const fn cells(self) -> u64 {
        1 << (3 * self.0 as u32)
    }

    pub fn check_point(self, p: Point3) -> Result<()> {
        let bound = self.side();
        for (axis, value) in [('x', p.x), ('y', p.y), ('z', p.z)] {
            if value >= bound {
                return Err(HilbertError::CoordinateOutOfRange {
                    axis,
                    value: value as u64,
                    bound: bound as u64,
                });
            }
        }
        Ok(())
    }

    pub fn check_index(self, h: HilbertIndex) -> Result<()> {
        if h.0 < self.cells() {
            Ok(())
        } else {
            Err(HilbertError::IndexOutOfRange {
                index: h.0,
                bound: self.cells(),
            })
        }
    }

    pub fn contains_point(self, p: Point3) -> bool {
        self.check_point(p).is_ok()
    }
}

impl TryFrom<u8> for Depth {
    type Error = HilbertError;

    fn try_from(r: u8) -> Result<Self> {
        Depth::new(r as u64)
    }
}

impl From<Depth> for u8 {
    fn from(d: Depth) -> u8 {
        d.0
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A lattice cell `(x, y, z)`.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct Point3 {
    pub x: u32,
    pub y: u32,
    pub z: u32,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 { x: 0, y: 0, z: 0 };

    #[inline]
    pub const fn new(x: u32, y: u32, z: u32) -> Self {
        Point3 { x, y, z }
    }

    #[inline]
    pub fn max_coord(self) -> u32 {
        self.x.max(self.y).max(self.z)
    }

    pub fn l1_distance(self, other: Point3) -> u64 {
        self.x.abs_diff(other.x) as u64
            + self.y.abs_diff(other.y) as u64
            + self.z.abs_diff(other.z) as u64
    }

    #[inline]
    pub const fn to_array(self) -> [u32; 3] {
        [self.x, self.y, self.z]
    }

    /// The octant-0 encode rule, `(x, y, z) -> (z, x, y)`.
    #[inline]
    pub const fn rotate_forward(self) -> Self {
        Point3::new(self.z, self.x, self.y)
    }

    /// Inverse of [`Point3::rotate_forward`], `(x, y, z) -> (y, z, x)`.
    #[inline]
    pub const fn rotate_backward(self) -> Self {
        Point3::new(self.y, self.z, self.x)
    }
}

impl From<(u32, u32, u32)> for Point3 {
    fn from((x, y, z): (u32, u32, u32)) -> Self {
        Point3::new(x, y, z)
    }
}

impl From<[u32; 3]> for Point3 {
    fn from([x, y, z]: [u32; 3]) -> Self {
        Point3::new(x, y, z)
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Position along the curve.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct HilbertIndex(pub u64);

impl HilbertIndex {
    #[inline]
    pub const fn value(self) -> u64 {
        self.0
    }

    /// The `r` octal digits of the index, most significant first.
    pub fn octal_digits(self, depth: Depth) -> Vec<u8> {
        (0..depth.get() as u32)
            .rev()
            .map(|k| ((self.0 >> (3 * k)) & 7) as u8)
            .collect()
    }
}

impl From<u64> for HilbertIndex {
    fn from(h: u64) -> Self {
        HilbertIndex(h)
    }
}

impl From<HilbertIndex> for u64 {
    fn from(h: HilbertIndex) -> u64 {
        h.0
    }
}

impl fmt::Display for HilbertIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Octal for HilbertIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Octal::fmt(&self.0, f)
    }
}

/// Corners of the unit cube in depth-1 curve order.
pub const BASE_ORDERING: [Point3; 8] = [
    Point3::new(0, 0, 0),
    Point3::new(1, 0, 0),
    Point3::new(1, 0, 1),
    Point3::new(0, 0, 1),
    Point3::new(0, 1, 1),
    Point3::new(1, 1, 1),
    Point3::new(1, 1, 0),
    Point3::new(0, 1, 0),
];

#[inline]
const fn corner_key(bx: u32, by: u32, bz: u32) -> usize {
    (bx | (by << 1) | (bz << 2)) as usize
}

const fn invert_base_ordering() -> [u8; 8] {
    let mut table = [0u8; 8];
    let mut o = 0;
    while o < 8 {
        let c = BASE_ORDERING[o];
        table[corner_key(c.x, c.y, c.z)] = o as u8;
        o += 1;
    }
    table
}

/// Corner bits `bx | by << 1 | bz << 2` to octant.
const CORNER_TO_OCTANT: [u8; 8] = invert_base_ordering();

fn check_octant(o: u8) -> Result<()> {
    if o < 8 {
        Ok(())
    } else {
        Err(HilbertError::OctantOutOfRange { octant: o })
    }
}

fn check_half_width(w: u32) -> Result<()> {
    if w.is_power_of_two() {
        Ok(())
    } else {
        Err(HilbertError::InvalidHalfWidth { w })
    }
}

/// Unit-cube corner visited at position `o` of the base ordering.
pub fn base_vertex(o: u8) -> Result<Point3> {
    check_octant(o)?;
    Ok(BASE_ORDERING[o as usize])
}

#[inline]
fn octant_unchecked(p: Point3, w: u32) -> u8 {
    CORNER_TO_OCTANT[corner_key(p.x / w, p.y / w, p.z / w)]
}

/// Octant of a `2w`-sided cube that holds `p`.
pub fn octant_of(p: Point3, w: u32) -> Result<u8> {
    check_half_width(w)?;
    let bound = 2 * w as u64;
    for (axis, value) in [('x', p.x), ('y', p.y), ('z', p.z)] {
        if value as u64 >= bound {
            return Err(HilbertError::CoordinateOutOfRange {
                axis,
                value: value as u64,
                bound,
            });
        }
    }
    Ok(octant_unchecked(p, w))
}

/// Bit length of the largest coordinate, at least 1.
pub fn r_min_point(p: Point3) -> u8 {
    (u32::BITS - p.max_coord().leading_zeros()).max(1) as u8
}

/// Number of significant octal digits of `h`, at least 1.
pub fn r_min_index(h: HilbertIndex) -> u8 {
    let bits = u64::BITS - h.0.leading_zeros();
    bits.div_ceil(3).max(1) as u8
}

/// One output coordinate of an affine step rule:
/// `±input[source] + w_mul * w + bias`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AxisRule {
    pub source: u8,
    pub negate: bool,
    pub w_mul: i8,
    pub bias: i8,
}

const X: u8 = 0;
const Y: u8 = 1;
const Z: u8 = 2;

/// `input[source]`
const fn keep(source: u8) -> AxisRule {
    AxisRule {
        source,
        negate: false,
        w_mul: 0,
        bias: 0,
    }
}

/// `input[source] + w_mul * w`
const fn shift(source: u8, w_mul: i8) -> AxisRule {
    AxisRule {
        source,
        negate: false,
        w_mul,
        bias: 0,
    }
}

/// `w_mul * w - input[source] - 1`
const fn flip(source: u8, w_mul: i8) -> AxisRule {
    AxisRule {
        source,
        negate: true,
        w_mul,
        bias: -1,
    }
}

impl AxisRule {
    #[inline]
    fn apply(self, input: [u32; 3], w: u32) -> i64 {
        let v = input[self.source as usize] as i64;
        let v = if self.negate { -v } else { v };
        v + self.w_mul as i64 * w as i64 + self.bias as i64
    }
}

/// Per-octant update `(x, y, z) -> (x_new, y_new, z_new)` at half-width `w`.
pub type StepRule = [AxisRule; 3];

/// Encode and decode update rules for all eight octants.
///
/// [`STEP_TABLES`] holds the rules the crate uses. The type exists so a
/// deliberately corrupted copy can be fed through [`crate::verify`] to show
/// the checks catch it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepTables {
    pub encode: [StepRule; 8],
    pub decode: [StepRule; 8],
}

pub const STEP_TABLES: StepTables = StepTables {
    encode: [
        [keep(Z), keep(X), keep(Y)],
        [keep(Y), keep(Z), shift(X, -1)],
        [keep(Y), shift(Z, -1), shift(X, -1)],
        [flip(X, 1), keep(Y), flip(Z, 2)],
        [flip(X, 1), shift(Y, -1), flip(Z, 2)],
        [flip(Y, 2), flip(Z, 2), shift(X, -1)],
        [flip(Y, 2), flip(Z, 1), shift(X, -1)],
        [keep(Z), flip(X, 1), flip(Y, 2)],
    ],
    decode: [
        [keep(Y), keep(Z), keep(X)],
        [shift(Z, 1), keep(X), keep(Y)],
        [shift(Z, 1), keep(X), shift(Y, 1)],
        [flip(X, 1), keep(Y), flip(Z, 2)],
        [flip(X, 1), shift(Y, 1), flip(Z, 2)],
        [shift(Z, 1), flip(X, 2), flip(Y, 2)],
        [shift(Z, 1), flip(X, 2), flip(Y, 1)],
        [flip(Y, 1), flip(Z, 2), keep(X)],
    ],
};

/// Evaluates a rule without any range checks.
pub fn evaluate_rule(rule: &StepRule, p: Point3, w: u32) -> [i64; 3] {
    let input = p.to_array();
    rule.map(|r| r.apply(input, w))
}

/// Applies a rule and requires every output coordinate to lie in `[0, bound)`.
#[inline]
fn apply_rule(rule: &StepRule, p: Point3, w: u32, bound: u64) -> Result<Point3> {
    let input = p.to_array();
    let mut out = [0u32; 3];
    for (axis, (slot, r)) in ['x', 'y', 'z'].into_iter().zip(out.iter_mut().zip(rule)) {
        let v = r.apply(input, w);
        if v < 0 || v as u64 >= bound {
            return Err(HilbertError::RuleOutputOutOfRange {
                axis,
                value: v,
                bound,
            });
        }
        *slot = v as u32;
    }
    Ok(Point3::from(out))
}

impl StepTables {
    /// Maps a point of octant `o` into the octant's local frame.
    pub fn encode_step(&self, o: u8, p: Point3, w: u32) -> Result<Point3> {
        check_octant(o)?;
        if octant_of(p, w)? != o {
            return Err(HilbertError::PointNotInOctant {
                x: p.x,
                y: p.y,
                z: p.z,
                octant: o,
                w,
            });
        }
        apply_rule(&self.encode[o as usize], p, w, w as u64)
    }

    /// Maps a point of the local frame back into octant `o`.
    pub fn decode_step(&self, o: u8, p: Point3, w: u32) -> Result<Point3> {
        check_octant(o)?;
        check_half_width(w)?;
        for (axis, value) in [('x', p.x), ('y', p.y), ('z', p.z)] {
            if value >= w {
                return Err(HilbertError::CoordinateOutOfRange {
                    axis,
                    value: value as u64,
                    bound: w as u64,
                });
            }
        }
        apply_rule(&self.decode[o as usize], p, w, 2 * w as u64)
    }

    pub fn encode(&self, p: Point3, depth: Depth) -> Result<HilbertIndex> {
        depth.check_point(p)?;
        let r_min = r_min_point(p);
        let mut p = match (depth.get() - r_min) % 3 {
            1 => p.rotate_forward(),
            2 => p.rotate_backward(),
            _ => p,
        };
        let mut h = 0u64;
        let mut w = 1u32 << (r_min - 1);
        for _ in 0..r_min {
            if p.max_coord() as u64 >= 2 * w as u64 {
                // only reachable with a corrupted table
                return Err(HilbertError::RuleOutputOutOfRange {
                    axis: 'x',
                    value: p.max_coord() as i64,
                    bound: 2 * w as u64,
                });
            }
            let o = octant_unchecked(p, w);
            h = 8 * h + o as u64;
            p = apply_rule(&self.encode[o as usize], p, w, w as u64)?;
            w >>= 1;
        }
        Ok(HilbertIndex(h))
    }

    pub fn decode(&self, h: HilbertIndex, depth: Depth) -> Result<Point3> {
        depth.check_index(h)?;
        let mut rest = h.0;
        let mut p = BASE_ORDERING[(rest & 7) as usize];
        let mut w = 2u32;
        rest >>= 3;
        while rest != 0 {
            let o = (rest & 7) as usize;
            p = apply_rule(&self.decode[o], p, w, 2 * w as u64)?;
            rest >>= 3;
            w <<= 1;
        }
        Ok(match (depth.get() - r_min_index(h)) % 3 {
            1 => p.rotate_backward(),
            2 => p.rotate_forward(),
            _ => p,
        })
    }
}

/// Update rule for one encoding digit. `p` must lie in octant `o` of a
/// `2w`-sided cube; the result lies in `[0, w)^3`.
pub fn encode_step(o: u8, p: Point3, w: u32) -> Result<Point3> {
    STEP_TABLES.encode_step(o, p, w)
}

/// Update rule for one decoding digit, the inverse of [`encode_step`].
pub fn decode_step(o: u8, p: Point3, w: u32) -> Result<Point3> {
    STEP_TABLES.decode_step(o, p, w)
}

/// Hilbert index of `p` on the depth-`r` curve.
pub fn encode(p: Point3, depth: Depth) -> Result<HilbertIndex> {
    STEP_TABLES.encode(p, depth)
}

/// Lattice cell at index `h` on the depth-`r` curve.
pub fn decode(h: HilbertIndex, depth: Depth) -> Result<Point3> {
    STEP_TABLES.decode(h, depth)
}
