//! Encoding and decoding of 3D Hilbert curve indices.
//!
//! - [`curve`]: integer mapping between lattice points and curve indices.
//! - [`geometry`]: quarter-turn rotation algebra; rebuilds the step rules
//!   from octant rotations for cross-checking.
//! - [`lsystem`]: turtle-graphics generator for the same curve, used as an
//!   independent oracle.
//! - [`ordering`]: curve-order permutation of cube arrays and balanced
//!   contiguous partitioning.
//! - [`cubefile`]: binary file format for cube arrays.
//! - [`verify`]: exhaustive self-checks.
//! - [`batch`]: bulk operations, parallel when the `parallel` feature is on.
//!
//! ```
//! use hilbert3d::{decode, encode, Depth, HilbertIndex, Point3};
//!
//! let depth = Depth::new(2).unwrap();
//! let h = encode(Point3::new(3, 3, 1), depth).unwrap();
//! assert_eq!(h, HilbertIndex(51));
//! assert_eq!(decode(HilbertIndex(37), depth).unwrap(), Point3::new(0, 3, 2));
//! ```

pub mod batch;
pub mod cli;
pub mod cubefile;
pub mod curve;
pub mod error;
pub mod geometry;
pub mod lsystem;
pub mod ordering;
pub mod verify;

pub use batch::Execution;
pub use curve::{
    base_vertex, decode, decode_step, encode, encode_step, octant_of, r_min_index, r_min_point,
    Depth, HilbertIndex, Point3, StepTables, BASE_ORDERING, MAX_DEPTH, MIN_DEPTH, STEP_TABLES,
};
pub use error::{HilbertError, Result};
pub use geometry::{matmul, octant_rotation, RotationMatrix};
pub use ordering::{CubeArray, Layout, PartStats, Partition};
pub use verify::Report;
