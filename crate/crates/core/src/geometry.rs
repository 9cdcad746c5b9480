//! Quarter-turn rotation algebra and the matrix form of the step rules.
//!
//! The per-octant step rules in [`crate::curve`] are closed-form integer
//! affine maps. This module rebuilds the same maps from first principles
//! (shift into the octant, centre, rotate, uncentre) so the two can be
//! compared exhaustively. Centres of even-sided octants sit on half-integers,
//! so the whole sequence runs on doubled coordinates.
//!
//! Vectors are columns and matrices act by left multiplication.

use std::fmt;
use std::ops::Mul;

use crate::curve::{base_vertex, octant_of, Point3};
use crate::error::{HilbertError, Result};

/// A 3x3 integer matrix, normally a signed permutation with determinant +1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RotationMatrix(pub [[i8; 3]; 3]);

impl RotationMatrix {
    pub const IDENTITY: RotationMatrix = RotationMatrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
    /// Counterclockwise quarter turn about the x axis.
    pub const X: RotationMatrix = RotationMatrix([[1, 0, 0], [0, 0, -1], [0, 1, 0]]);
    /// Counterclockwise quarter turn about the y axis.
    pub const Y: RotationMatrix = RotationMatrix([[0, 0, 1], [0, 1, 0], [-1, 0, 0]]);
    /// Counterclockwise quarter turn about the z axis.
    pub const Z: RotationMatrix = RotationMatrix([[0, -1, 0], [1, 0, 0], [0, 0, 1]]);

    pub const fn transpose(self) -> Self {
        let m = self.0;
        RotationMatrix([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn determinant(self) -> i32 {
        let m = self.0.map(|row| row.map(i32::from));
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Exactly one ±1 per row and column, zeros elsewhere.
    pub fn is_signed_permutation(self) -> bool {
        let row_ok = self.0.iter().all(|row| {
            row.iter().filter(|&&v| v != 0).count() == 1 && row.iter().all(|v| v.abs() <= 1)
        });
        let t = self.transpose();
        let col_ok =
            t.0.iter()
                .all(|col| col.iter().filter(|&&v| v != 0).count() == 1);
        row_ok && col_ok
    }

    /// Orthonormal with determinant +1.
    pub fn is_proper_rotation(self) -> bool {
        self.is_signed_permutation()
            && self * self.transpose() == RotationMatrix::IDENTITY
            && self.determinant() == 1
    }

    /// Column `j`, the image of the `j`th basis vector.
    pub fn column(self, j: usize) -> [i8; 3] {
        [self.0[0][j], self.0[1][j], self.0[2][j]]
    }

    pub fn apply(self, v: [i64; 3]) -> [i64; 3] {
        let m = self.0;
        let row = |i: usize| m[i][0] as i64 * v[0] + m[i][1] as i64 * v[1] + m[i][2] as i64 * v[2];
        [row(0), row(1), row(2)]
    }

    /// All 24 signed permutation matrices with determinant +1.
    pub fn proper_rotations() -> Vec<RotationMatrix> {
        const PERMS: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut out = Vec::with_capacity(24);
        for perm in PERMS {
            for signs in 0..8u8 {
                let mut m = [[0i8; 3]; 3];
                for (col, &row) in perm.iter().enumerate() {
                    m[row][col] = if signs >> col & 1 == 1 { -1 } else { 1 };
                }
                let m = RotationMatrix(m);
                if m.determinant() == 1 {
                    out.push(m);
                }
            }
        }
        out
    }
}

/// Integer 3x3 matrix product `a * b`.
pub fn matmul(a: RotationMatrix, b: RotationMatrix) -> RotationMatrix {
    let mut out = [[0i8; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..3).map(|k| a.0[i][k] * b.0[k][j]).sum();
        }
    }
    RotationMatrix(out)
}

impl Mul for RotationMatrix {
    type Output = RotationMatrix;

    fn mul(self, rhs: RotationMatrix) -> RotationMatrix {
        matmul(self, rhs)
    }
}

impl fmt::Display for RotationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "[{a:?}, {b:?}, {c:?}]")
    }
}

/// Rotation carrying the base ordering onto the sub-curve in octant `o`.
pub fn octant_rotation(o: u8) -> Result<RotationMatrix> {
    use RotationMatrix as R;
    let m = match o {
        0 => R::Z.transpose() * R::Y.transpose(),
        1 | 2 => R::Z * R::X,
        3 | 4 => R::Y * R::Y,
        5 | 6 => R::Z.transpose() * R::X.transpose(),
        7 => R::X * R::Z,
        _ => return Err(HilbertError::OctantOutOfRange { octant: o }),
    };
    Ok(m)
}

/// Twice a working coordinate. Half-integer centres become exact integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DoubledPoint {
    pub u: i64,
    pub v: i64,
    pub w2: i64,
}

impl DoubledPoint {
    pub fn from_point(p: Point3) -> Self {
        DoubledPoint {
            u: 2 * p.x as i64,
            v: 2 * p.y as i64,
            w2: 2 * p.z as i64,
        }
    }

    fn to_array(self) -> [i64; 3] {
        [self.u, self.v, self.w2]
    }

    fn from_array([u, v, w2]: [i64; 3]) -> Self {
        DoubledPoint { u, v, w2 }
    }

    /// Adds the same (doubled) offset to every component.
    pub fn offset(self, d: i64) -> Self {
        DoubledPoint::from_array(self.to_array().map(|c| c + d))
    }

    pub fn translate(self, d: [i64; 3]) -> Self {
        let a = self.to_array();
        DoubledPoint::from_array([a[0] + d[0], a[1] + d[1], a[2] + d[2]])
    }

    pub fn rotate(self, m: RotationMatrix) -> Self {
        DoubledPoint::from_array(m.apply(self.to_array()))
    }

    pub fn uniform_parity(self) -> bool {
        let a = self.to_array().map(|c| c.rem_euclid(2));
        a[0] == a[1] && a[1] == a[2]
    }

    /// Halves back to a lattice point; `None` unless every component is even
    /// and non-negative.
    pub fn halve(self) -> Option<Point3> {
        let a = self.to_array();
        if a.iter()
            .any(|&c| c < 0 || c % 2 != 0 || c / 2 > u32::MAX as i64)
        {
            return None;
        }
        Some(Point3::new(
            (a[0] / 2) as u32,
            (a[1] / 2) as u32,
            (a[2] / 2) as u32,
        ))
    }
}

/// Doubled offset of octant `o`'s origin inside a `2w`-sided cube.
fn doubled_octant_origin(o: u8, w: u32) -> Result<[i64; 3]> {
    let b = base_vertex(o)?;
    let s = 2 * w as i64;
    Ok([b.x as i64 * s, b.y as i64 * s, b.z as i64 * s])
}

fn integrality_error(p: DoubledPoint, bound: u64) -> HilbertError {
    let bad = [('x', p.u), ('y', p.v), ('z', p.w2)]
        .into_iter()
        .find(|&(_, c)| c < 0 || c % 2 != 0)
        .unwrap_or(('x', p.u));
    HilbertError::RuleOutputOutOfRange {
        axis: bad.0,
        value: bad.1,
        bound,
    }
}

/// Encode step built from the octant rotation: shift to the octant origin,
/// centre, apply the inverse rotation, uncentre.
pub fn encode_step_via_matrix(o: u8, p: Point3, w: u32) -> Result<Point3> {
    let rotation = octant_rotation(o)?;
    if octant_of(p, w)? != o {
        return Err(HilbertError::PointNotInOctant {
            x: p.x,
            y: p.y,
            z: p.z,
            octant: o,
            w,
        });
    }
    let origin = doubled_octant_origin(o, w)?;
    let centre = w as i64 - 1;
    let d = DoubledPoint::from_point(p)
        .translate(origin.map(|c| -c))
        .offset(-centre)
        .rotate(rotation.transpose())
        .offset(centre);
    debug_assert!(d.uniform_parity());
    d.halve().ok_or_else(|| integrality_error(d, w as u64))
}

/// Decode step built from the octant rotation: centre, rotate, uncentre,
/// shift from the octant origin.
pub fn decode_step_via_matrix(o: u8, p: Point3, w: u32) -> Result<Point3> {
    let rotation = octant_rotation(o)?;
    if !w.is_power_of_two() {
        return Err(HilbertError::InvalidHalfWidth { w });
    }
    for (axis, value) in [('x', p.x), ('y', p.y), ('z', p.z)] {
        if value >= w {
            return Err(HilbertError::CoordinateOutOfRange {
                axis,
                value: value as u64,
                bound: w as u64,
            });
        }
    }
    let origin = doubled_octant_origin(o, w)?;
    let centre = w as i64 - 1;
    let d = DoubledPoint::from_point(p)
        .offset(-centre)
        .rotate(rotation)
        .offset(centre)
        .translate(origin);
    debug_assert!(d.uniform_parity());
    d.halve().ok_or_else(|| integrality_error(d, 2 * w as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{decode_step, encode_step};

    type R = RotationMatrix;

    #[test]
    fn products() {
        assert_eq!(R::Z * R::Z.transpose(), R::IDENTITY);
        assert_eq!(R::X * R::X * R::X * R::X, R::IDENTITY);
        assert_ne!(R::X * R::X, R::IDENTITY);
    }

    #[test]
    fn z_times_x_by_basis_images() {
        // Columns of Z*X are Z applied to the columns of X.
        let zx = R::Z * R::X;
        for j in 0..3 {
            let xj = R::X.column(j).map(i64::from);
            let expected = R::Z.apply(xj);
            assert_eq!(zx.column(j).map(i64::from), expected);
        }
        assert_eq!(zx, RotationMatrix([[0, 0, 1], [1, 0, 0], [0, 1, 0]]));
    }

    #[test]
    fn octant_rotation_labels() {
        assert_eq!(octant_rotation(1).unwrap(), R::Z * R::X);
        assert_eq!(octant_rotation(3).unwrap(), R::Y * R::Y);
        assert_eq!(
            octant_rotation(0).unwrap(),
            R::Z.transpose() * R::Y.transpose()
        );
        assert!(octant_rotation(8).is_err());
    }

    #[test]
    fn octant_rotations_are_proper() {
        for o in 0..8 {
            let m = octant_rotation(o).unwrap();
            assert!(m.is_proper_rotation(), "octant {o}: {m}");
            assert_eq!(m * m.transpose(), R::IDENTITY);
        }
    }

    #[test]
    fn twenty_four_proper_rotations() {
        let all = R::proper_rotations();
        assert_eq!(all.len(), 24);
        assert!(all.iter().all(|m| m.is_proper_rotation()));
        let mut dedup = all.clone();
        dedup.sort_by_key(|m| m.0);
        dedup.dedup();
        assert_eq!(dedup.len(), 24);
    }

    #[test]
    fn not_a_rotation() {
        let reflection = RotationMatrix([[-1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert!(reflection.is_signed_permutation());
        assert!(!reflection.is_proper_rotation());
        let skew = RotationMatrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
        assert!(!skew.is_signed_permutation());
    }

    #[test]
    fn matrix_path_examples() {
        let p = Point3::new;
        assert_eq!(
            encode_step_via_matrix(6, p(3, 3, 1), 2).unwrap(),
            p(0, 0, 1)
        );
        assert_eq!(
            encode_step_via_matrix(0, p(0, 0, 0), 1).unwrap(),
            p(0, 0, 0)
        );
        assert_eq!(
            decode_step_via_matrix(4, p(1, 1, 1), 2).unwrap(),
            p(0, 3, 2)
        );
        assert_eq!(
            decode_step_via_matrix(0, p(0, 0, 0), 2).unwrap(),
            p(0, 0, 0)
        );
        assert!(encode_step_via_matrix(5, p(3, 3, 1), 2).is_err());
        assert!(decode_step_via_matrix(5, p(2, 0, 0), 2).is_err());
    }

    #[test]
    fn matrix_path_matches_tables() {
        for w in [1u32, 2, 4] {
            for x in 0..2 * w {
                for y in 0..2 * w {
                    for z in 0..2 * w {
                        let p = Point3::new(x, y, z);
                        let o = octant_of(p, w).unwrap();
                        assert_eq!(encode_step_via_matrix(o, p, w), encode_step(o, p, w));
                    }
                }
            }
            for o in 0..8 {
                for x in 0..w {
                    for y in 0..w {
                        for z in 0..w {
                            let p = Point3::new(x, y, z);
                            assert_eq!(decode_step_via_matrix(o, p, w), decode_step(o, p, w));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn doubled_parity_stays_uniform() {
        for w in [1u32, 2, 4, 8] {
            let centre = w as i64 - 1;
            for o in 0..8 {
                let m = octant_rotation(o).unwrap();
                for c in 0..w {
                    let d = DoubledPoint::from_point(Point3::new(c, w - 1 - c, c / 2));
                    assert!(d.uniform_parity());
                    let centred = d.offset(-centre);
                    assert!(centred.uniform_parity());
                    let back = centred.rotate(m).offset(centre);
                    assert!(back.uniform_parity());
                    assert!(back.halve().is_some());
                }
            }
        }
    }
}
