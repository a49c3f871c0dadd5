//! Exact 2×2 complex matrix arithmetic.
//!
//! [`Mat2`] carries every operator in the crate: density matrices, POVM
//! effects, Kraus operators and unitaries. Only the handful of operations the
//! measurement pipeline needs are provided, plus a closed-form square root for
//! positive semidefinite matrices.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use thiserror::Error;

/// Complex scalar used for all matrix entries.
pub type ComplexScalar = Complex64;

/// Eigenvalues above `-PSD_TOLERANCE` are treated as zero by [`Mat2::psd_sqrt`].
pub const PSD_TOLERANCE: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("matrix is not hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
}

/// A 2×2 complex matrix stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub m: [[Complex64; 2]; 2],
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2 {
        m: [[ZERO, ZERO], [ZERO, ZERO]],
    };
    pub const IDENTITY: Mat2 = Mat2 {
        m: [[ONE, ZERO], [ZERO, ONE]],
    };
    pub const PAULI_X: Mat2 = Mat2 {
        m: [[ZERO, ONE], [ONE, ZERO]],
    };
    pub const PAULI_Y: Mat2 = Mat2 {
        m: [[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]],
    };
    pub const PAULI_Z: Mat2 = Mat2 {
        m: [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]],
    };

    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2 { m: [[a, b], [c, d]] }
    }

    /// Matrix with real entries `[[a, b], [c, d]]`.
    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn diag(a: f64, d: f64) -> Self {
        Mat2::real(a, 0.0, 0.0, d)
    }

    /// `x·σx + y·σy + z·σz`.
    pub fn pauli_combination(v: [f64; 3]) -> Self {
        let [x, y, z] = v;
        Mat2::new(
            z.into(),
            Complex64::new(x, -y),
            Complex64::new(x, y),
            (-z).into(),
        )
    }

    #[inline]
    pub fn mat_mul(&self, b: &Mat2) -> Mat2 {
        let a = &self.m;
        let b = &b.m;
        Mat2 {
            m: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
    }

    /// Conjugate transpose.
    #[inline]
    pub fn adjoint(&self) -> Mat2 {
        let a = &self.m;
        Mat2 {
            m: [
                [a[0][0].conj(), a[1][0].conj()],
                [a[0][1].conj(), a[1][1].conj()],
            ],
        }
    }

    #[inline]
    pub fn trace(&self) -> Complex64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn scale(&self, s: Complex64) -> Mat2 {
        let a = &self.m;
        Mat2 {
            m: [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]],
        }
    }

    pub fn scale_real(&self, s: f64) -> Mat2 {
        self.scale(Complex64::new(s, 0.0))
    }

    /// `A · ρ · A†`, the conjugation used by measurement updates and Kraus maps.
    #[inline]
    pub fn sandwich(&self, rho: &Mat2) -> Mat2 {
        self.mat_mul(rho).mat_mul(&self.adjoint())
    }

    /// `Re tr(A·B)` without forming the product.
    #[inline]
    pub fn trace_product_re(&self, b: &Mat2) -> f64 {
        let a = &self.m;
        let b = &b.m;
        (a[0][0] * b[0][0] + a[0][1] * b[1][0] + a[1][0] * b[0][1] + a[1][1] * b[1][1]).re
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.m[r][c] - other.m[r][c]).norm());
            }
        }
        worst
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.m
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Eigenvalues `(λ_min, λ_max)` of the hermitian part of the matrix.
    pub fn hermitian_eigenvalues(&self) -> (f64, f64) {
        let a = self.m[0][0].re;
        let d = self.m[1][1].re;
        let b = 0.5 * (self.m[0][1] + self.m[1][0].conj());
        let mean = 0.5 * (a + d);
        let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        (mean - radius, mean + radius)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.hermitian_eigenvalues().0
    }

    /// Eigendecomposition of a hermitian matrix: eigenvalues ascending and the
    /// unitary whose columns are the matching eigenvectors.
    pub fn hermitian_eigen(&self) -> ([f64; 2], Mat2) {
        let (lo, hi) = self.hermitian_eigenvalues();
        let a = self.m[0][0].re;
        let d = self.m[1][1].re;
        let b = 0.5 * (self.m[0][1] + self.m[1][0].conj());
        if b.norm() <= f64::EPSILON * (a.abs() + d.abs()).max(1.0) {
            // already diagonal
            return if a <= d {
                ([a, d], Mat2::IDENTITY)
            } else {
                ([d, a], Mat2::PAULI_X)
            };
        }
        // (b, λ - a) solves (A - λ)v = 0 via the first row
        let column = |lambda: f64| {
            let v0 = b;
            let v1 = Complex64::new(lambda - a, 0.0);
            let n = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
            (v0 / n, v1 / n)
        };
        let (u00, u10) = column(lo);
        let (u01, u11) = column(hi);
        ([lo, hi], Mat2::new(u00, u01, u10, u11))
    }

    /// Principal square root of a hermitian positive semidefinite matrix.
    ///
    /// Uses `√A = (A + s·I) / t` with `s = √det A` and `t = √(tr A + 2s)`;
    /// eigenvalues in `[-PSD_TOLERANCE, 0)` are clamped to zero. Falls back to
    /// an eigendecomposition when `t` underflows.
    pub fn psd_sqrt(&self) -> Result<Mat2, AlgebraError> {
        let deviation = self.hermiticity_defect();
        if deviation > 1e-9 {
            return Err(AlgebraError::NotHermitian { deviation });
        }
        let (lo, hi) = self.hermitian_eigenvalues();
        if lo < -PSD_TOLERANCE {
            return Err(AlgebraError::NotPsd { min_eigenvalue: lo });
        }
        let (lo, hi) = (lo.max(0.0), hi.max(0.0));
        let s = (lo * hi).sqrt();
        let t = lo.sqrt() + hi.sqrt();
        if t < 1e-12 {
            let ([l0, l1], v) = self.hermitian_eigen();
            let root = Mat2::diag(l0.max(0.0).sqrt(), l1.max(0.0).sqrt());
            return Ok(v.mat_mul(&root).mat_mul(&v.adjoint()));
        }
        let shifted = *self + Mat2::IDENTITY.scale_real(s);
        Ok(shifted.scale_real(1.0 / t))
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let mut out = self;
        for r in 0..2 {
            for c in 0..2 {
                out.m[r][c] += rhs.m[r][c];
            }
        }
        out
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        let mut out = self;
        for r in 0..2 {
            for c in 0..2 {
                out.m[r][c] -= rhs.m[r][c];
            }
        }
        out
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        self.mat_mul(&rhs)
    }
}
