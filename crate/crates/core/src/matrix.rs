//! Dense 4×4 real matrices, row-major.
//!
//! [`Matrix4`] carries no group or algebra constraint. It holds raw
//! finite-difference derivatives, commutators and conjugates before they are
//! validated into a [`crate::LorentzMatrix`] or [`crate::Generator`].

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Matrix4(pub [[f64; 4]; 4]);

impl Matrix4 {
    pub const ZERO: Matrix4 = Matrix4([[0.0; 4]; 4]);

    pub const IDENTITY: Matrix4 = Matrix4([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]);

    /// diag(+1, −1, −1, −1).
    pub const METRIC: Matrix4 = Matrix4([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
        [0.0, 0.0, -1.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
    ]);

    pub fn from_rows(rows: [[f64; 4]; 4]) -> Self {
        Matrix4(rows)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Matrix4::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = self.0[j][i];
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|v| *v *= s);
        out
    }

    pub fn mul_vec(&self, v: [f64; 4]) -> [f64; 4] {
        let m = &self.0;
        let mut out = [0.0; 4];
        for (o, row) in out.iter_mut().zip(m.iter()) {
            *o = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
        }
        out
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// Infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        self.0
            .iter()
            .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0_f64, f64::max)
    }

    /// Largest entrywise difference between two matrices.
    pub fn max_abs_diff(&self, other: &Matrix4) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }

    /// Determinant by cofactor expansion along 2×2 minors.
    pub fn determinant(&self) -> f64 {
        let m = &self.0;
        let s0 = m[0][0] * m[1][1] - m[1][0] * m[0][1];
        let s1 = m[0][0] * m[1][2] - m[1][0] * m[0][2];
        let s2 = m[0][0] * m[1][3] - m[1][0] * m[0][3];
        let s3 = m[0][1] * m[1][2] - m[1][1] * m[0][2];
        let s4 = m[0][1] * m[1][3] - m[1][1] * m[0][3];
        let s5 = m[0][2] * m[1][3] - m[1][2] * m[0][3];

        let c5 = m[2][2] * m[3][3] - m[3][2] * m[2][3];
        let c4 = m[2][1] * m[3][3] - m[3][1] * m[2][3];
        let c3 = m[2][1] * m[3][2] - m[3][1] * m[2][2];
        let c2 = m[2][0] * m[3][3] - m[3][0] * m[2][3];
        let c1 = m[2][0] * m[3][2] - m[3][0] * m[2][2];
        let c0 = m[2][0] * m[3][1] - m[3][0] * m[2][1];

        s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0
    }

    /// Matrix commutator `AB − BA`.
    pub fn commutator(&self, other: &Matrix4) -> Matrix4 {
        *self * *other - *other * *self
    }
}

impl Default for Matrix4 {
    fn default() -> Self {
        Matrix4::ZERO
    }
}

impl Index<(usize, usize)> for Matrix4 {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Matrix4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl Mul for Matrix4 {
    type Output = Matrix4;

    fn mul(self, rhs: Matrix4) -> Matrix4 {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j] + a[i][3] * b[3][j];
            }
        }
        Matrix4(out)
    }
}

impl Add for Matrix4 {
    type Output = Matrix4;

    fn add(self, rhs: Matrix4) -> Matrix4 {
        let mut out = self;
        for (o, r) in out.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *o += r;
        }
        out
    }
}

impl Sub for Matrix4 {
    type Output = Matrix4;

    fn sub(self, rhs: Matrix4) -> Matrix4 {
        let mut out = self;
        for (o, r) in out.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *o -= r;
        }
        out
    }
}

impl Neg for Matrix4 {
    type Output = Matrix4;

    fn neg(self) -> Matrix4 {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_neutral() {
        let m = Matrix4([
            [1.0, 2.0, 3.0, 4.0],
            [5.0, 6.0, 7.0, 8.0],
            [9.0, 1.0, 2.0, 3.0],
            [4.0, 5.0, 6.0, 8.0],
        ]);
        assert_eq!(m * Matrix4::IDENTITY, m);
        assert_eq!(Matrix4::IDENTITY * m, m);
    }

    #[test]
    fn metric_squares_to_identity() {
        assert_eq!(Matrix4::METRIC * Matrix4::METRIC, Matrix4::IDENTITY);
        assert_eq!(Matrix4::METRIC.transpose(), Matrix4::METRIC);
    }

    #[test]
    fn determinant_of_known_matrices() {
        assert_eq!(Matrix4::IDENTITY.determinant(), 1.0);
        assert_eq!(Matrix4::METRIC.determinant(), -1.0);
        // upper triangular: product of the diagonal
        let m = Matrix4([
            [2.0, 7.0, 1.0, 3.0],
            [0.0, 3.0, 5.0, 1.0],
            [0.0, 0.0, 4.0, 9.0],
            [0.0, 0.0, 0.0, 0.5],
        ]);
        assert_eq!(m.determinant(), 12.0);
        // swapping two rows flips the sign
        let mut swapped = m;
        swapped.0.swap(0, 1);
        assert_eq!(swapped.determinant(), -12.0);
    }

    #[test]
    fn norms() {
        let m = Matrix4([
            [1.0, -2.0, 0.0, 0.0],
            [0.0, 0.0, -3.0, 0.5],
            [0.0; 4],
            [0.0; 4],
        ]);
        assert_eq!(m.max_abs(), 3.0);
        assert_eq!(m.norm_inf(), 3.5);
    }
}
