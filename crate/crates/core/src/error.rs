use thiserror::Error;

use crate::ordering::Layout;

/// Errors raised when an argument violates a domain precondition.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum HilbertError {
    #[error("depth {depth} is out of range [{min}, {max}]")]
    DepthOutOfRange { depth: u64, min: u8, max: u8 },

    #[error("octant {octant} is out of range [0, 7]")]
    OctantOutOfRange { octant: u8 },

    #[error("half-width {w} is not a power of two >= 1")]
    InvalidHalfWidth { w: u32 },

    #[error("{axis} = {value} is out of range [0, {bound})")]
    CoordinateOutOfRange { axis: char, value: u64, bound: u64 },

    #[error("hilbert index {index} is out of range [0, {bound})")]
    IndexOutOfRange { index: u64, bound: u64 },

    #[error("step rule produced {axis} = {value}, outside [0, {bound})")]
    RuleOutputOutOfRange { axis: char, value: i64, bound: u64 },

    #[error("point ({x}, {y}, {z}) is not in octant {octant} at half-width {w}")]
    PointNotInOctant {
        x: u32,
        y: u32,
        z: u32,
        octant: u8,
        w: u32,
    },

    #[error("part count {parts} is out of range [1, {max}]")]
    PartsOutOfRange { parts: u64, max: u64 },

    #[error("index range [{start}, {end}) is empty")]
    EmptyRange { start: u64, end: u64 },

    #[error("array layout is {found}, expected {expected}")]
    LayoutMismatch { expected: Layout, found: Layout },

    #[error("array holds {len} values, expected {expected}")]
    DataLength { len: usize, expected: u64 },
}

pub type Result<T, E = HilbertError> = std::result::Result<T, E>;
