//! Group elements of the affine group in its two charts, and the SU(1,1) picture.
//!
//! The affine chart stores `(A, B)` acting by `t -> A t + B`, with `A` nonzero;
//! negative `A` is the second sheet of the full group. The matrix chart stores
//! `(a, b)` for the upper-triangular matrix `[[a, b], [0, 1/a]]`, `a > 0`, and
//! maps to the affine chart by `A = a^2`, `B = a b`.

use crate::error::{CoorbitError, Result};
use num_complex::Complex64;

/// Element `(A, B)` of the affine group `t -> A t + B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineElement {
    pub a: f64,
    pub b: f64,
}

/// Element `[[a, b], [0, 1/a]]` of the connected group, `a > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixElement {
    pub a: f64,
    pub b: f64,
}

/// Element `[[alpha, beta], [conj beta, conj alpha]]` of SU(1,1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su11Element {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl AffineElement {
    pub const IDENTITY: AffineElement = AffineElement { a: 1.0, b: 0.0 };

    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a == 0.0 || !a.is_finite() {
            return Err(CoorbitError::ZeroDilation(a));
        }
        if !b.is_finite() {
            return Err(CoorbitError::NonFinite("translation".into()));
        }
        Ok(AffineElement { a, b })
    }

    #[inline]
    pub fn compose(self, o: AffineElement) -> AffineElement {
        AffineElement { a: self.a * o.a, b: self.a * o.b + self.b }
    }

    #[inline]
    pub fn inverse(self) -> AffineElement {
        AffineElement { a: 1.0 / self.a, b: -self.b / self.a }
    }

    /// `self^{-1} o` without forming the inverse explicitly.
    #[inline]
    pub fn inv_compose(self, o: AffineElement) -> AffineElement {
        AffineElement { a: o.a / self.a, b: (o.b - self.b) / self.a }
    }

    #[inline]
    pub fn sign(self) -> i8 {
        if self.a > 0.0 {
            1
        } else {
            -1
        }
    }

    /// Action on the real line.
    #[inline]
    pub fn act(self, t: f64) -> f64 {
        self.a * t + self.b
    }

    pub fn to_matrix(self) -> Result<MatrixElement> {
        if self.a <= 0.0 {
            return Err(CoorbitError::NonPositiveDilation(self.a));
        }
        let a = self.a.sqrt();
        Ok(MatrixElement { a, b: self.b / a })
    }
}

impl MatrixElement {
    pub const IDENTITY: MatrixElement = MatrixElement { a: 1.0, b: 0.0 };

    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(CoorbitError::NonPositiveDilation(a));
        }
        if !b.is_finite() {
            return Err(CoorbitError::NonFinite("translation".into()));
        }
        Ok(MatrixElement { a, b })
    }

    #[inline]
    pub fn compose(self, o: MatrixElement) -> MatrixElement {
        MatrixElement { a: self.a * o.a, b: self.a * o.b + self.b / o.a }
    }

    #[inline]
    pub fn inverse(self) -> MatrixElement {
        MatrixElement { a: 1.0 / self.a, b: -self.b }
    }

    /// `self^{-1} o`.
    #[inline]
    pub fn inv_compose(self, o: MatrixElement) -> MatrixElement {
        MatrixElement { a: o.a / self.a, b: o.b / self.a - self.b / o.a }
    }

    #[inline]
    pub fn to_affine(self) -> AffineElement {
        AffineElement { a: self.a * self.a, b: self.a * self.b }
    }

    /// Image under the Cayley transform.
    #[inline]
    pub fn to_su11(self) -> Su11Element {
        let inv = 1.0 / self.a;
        Su11Element {
            alpha: Complex64::new(0.5 * (self.a + inv), 0.5 * self.b),
            beta: Complex64::new(0.5 * self.b, 0.5 * (self.a - inv)),
        }
    }

    /// Matrix entries `[[m00, m01], [m10, m11]]`.
    pub fn entries(self) -> [[f64; 2]; 2] {
        [[self.a, self.b], [0.0, 1.0 / self.a]]
    }
}

impl Su11Element {
    pub const IDENTITY: Su11Element =
        Su11Element { alpha: Complex64 { re: 1.0, im: 0.0 }, beta: Complex64 { re: 0.0, im: 0.0 } };

    /// `|alpha|^2 - |beta|^2`, equal to one on the group.
    pub fn determinant(self) -> f64 {
        self.alpha.norm_sqr() - self.beta.norm_sqr()
    }

    pub fn compose(self, o: Su11Element) -> Su11Element {
        Su11Element {
            alpha: self.alpha * o.alpha + self.beta * o.beta.conj(),
            beta: self.alpha * o.beta + self.beta * o.alpha.conj(),
        }
    }

    pub fn inverse(self) -> Su11Element {
        Su11Element { alpha: self.alpha.conj(), beta: -self.beta }
    }

    /// Mobius action `z -> (alpha z + beta) / (conj(beta) z + conj(alpha))` on the disk.
    pub fn act(self, z: Complex64) -> Complex64 {
        (self.alpha * z + self.beta) / (self.beta.conj() * z + self.alpha.conj())
    }

    /// Inverse Cayley transform back to the matrix chart, when the element lies
    /// in the image of the upper-triangular subgroup.
    pub fn to_matrix(self) -> Result<MatrixElement> {
        // a = Re(alpha) + Im(beta), b = Im(alpha) + Re(beta) for the triangular image.
        let a = self.alpha.re + self.beta.im;
        let b = self.alpha.im + self.beta.re;
        let m = MatrixElement::new(a, b)?;
        let back = m.to_su11();
        let err = (back.alpha - self.alpha).norm() + (back.beta - self.beta).norm();
        if err > 1e-9 * (1.0 + self.alpha.norm()) {
            return Err(CoorbitError::InvalidParameter(
                "SU(1,1) element is not in the image of the triangular subgroup".into(),
            ));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_inverse_example() {
        let g = AffineElement::new(2.0, 3.0).unwrap();
        let h = g.inverse();
        assert_eq!(h, AffineElement { a: 0.5, b: -1.5 });
        let e = g.compose(h);
        assert!((e.a - 1.0).abs() < 1e-15 && e.b.abs() < 1e-15);
    }

    #[test]
    fn zero_dilation_rejected() {
        assert_eq!(AffineElement::new(0.0, 1.0), Err(CoorbitError::ZeroDilation(0.0)));
        assert!(MatrixElement::new(-1.0, 0.0).is_err());
    }

    #[test]
    fn cayley_identity_and_determinant() {
        let e = MatrixElement::IDENTITY.to_su11();
        assert!((e.alpha - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(e.beta.norm() < 1e-15);
        let g = MatrixElement::new(0.3, -2.0).unwrap().to_su11();
        assert!((g.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cayley_is_homomorphism() {
        let x = MatrixElement::new(1.7, 0.4).unwrap();
        let y = MatrixElement::new(0.6, -1.3).unwrap();
        let lhs = x.compose(y).to_su11();
        let rhs = x.to_su11().compose(y.to_su11());
        assert!((lhs.alpha - rhs.alpha).norm() < 1e-12);
        assert!((lhs.beta - rhs.beta).norm() < 1e-12);
        let back = lhs.to_matrix().unwrap();
        let xy = x.compose(y);
        assert!((back.a - xy.a).abs() < 1e-12 && (back.b - xy.b).abs() < 1e-12);
    }

    #[test]
    fn charts_agree() {
        let x = MatrixElement::new(1.3, 0.7).unwrap();
        let y = MatrixElement::new(0.4, 2.2).unwrap();
        let via_affine = x.to_affine().compose(y.to_affine());
        let via_matrix = x.compose(y).to_affine();
        assert!((via_affine.a - via_matrix.a).abs() < 1e-12);
        assert!((via_affine.b - via_matrix.b).abs() < 1e-12);
        let m = via_affine.to_matrix().unwrap();
        assert!((m.a - x.compose(y).a).abs() < 1e-12);
    }

    #[test]
    fn matrix_product_matches_entries() {
        let x = MatrixElement::new(1.3, 0.7).unwrap();
        let y = MatrixElement::new(0.4, 2.2).unwrap();
        let (p, q) = (x.entries(), y.entries());
        let mut r = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                r[i][j] = p[i][0] * q[0][j] + p[i][1] * q[1][j];
            }
        }
        let xy = x.compose(y).entries();
        for i in 0..2 {
            for j in 0..2 {
                assert!((r[i][j] - xy[i][j]).abs() < 1e-12);
            }
        }
    }
}
