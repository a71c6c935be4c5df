//! Closed-form 2×2 complex linear algebra.
//!
//! Everything in the Otto cycle lives on a single qubit, so the kernel is a
//! plain `[[Complex64; 2]; 2]` with three validated roles on top of it:
//! [`Hermitian2`] (Hamiltonians), [`Unitary2`] (propagators) and [`Density2`]
//! (states).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// A column vector in C².
pub type Ket = [C64; 2];

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Hermitian-ness tolerance applied at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Max-entry tolerance on `U†U − I`.
pub const UNITARY_TOL: f64 = 1e-10;
/// Trace and eigenvalue-positivity tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-12;

/// Relative eigenvalue gap below which a Hermitian matrix is treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, PartialEq)]
pub struct Matrix2 {
    m: [[C64; 2]; 2],
}

impl fmt::Debug for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

impl Matrix2 {
    pub const fn new(a11: C64, a12: C64, a21: C64, a22: C64) -> Self {
        Matrix2 {
            m: [[a11, a12], [a21, a22]],
        }
    }

    pub fn from_real(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Matrix2::new(a11.into(), a12.into(), a21.into(), a22.into())
    }

    pub const fn identity() -> Self {
        Matrix2::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Matrix2::new(ZERO, ZERO, ZERO, ZERO)
    }

    /// Outer product `|a⟩⟨b|`.
    pub fn outer(a: &Ket, b: &Ket) -> Self {
        Matrix2::new(
            a[0] * b[0].conj(),
            a[0] * b[1].conj(),
            a[1] * b[0].conj(),
            a[1] * b[1].conj(),
        )
    }

    /// Matrix whose columns are the two given kets.
    pub fn from_columns(c0: &Ket, c1: &Ket) -> Self {
        Matrix2::new(c0[0], c1[0], c0[1], c1[1])
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.m[row][col]
    }

    pub fn column(&self, col: usize) -> Ket {
        [self.m[0][col], self.m[1][col]]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Matrix2::new(
            m[0][0].conj(),
            m[1][0].conj(),
            m[0][1].conj(),
            m[1][1].conj(),
        )
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> C64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn scale(&self, s: C64) -> Self {
        let m = &self.m;
        Matrix2::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn apply(&self, v: &Ket) -> Ket {
        let m = &self.m;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// `⟨a|M|b⟩`.
    pub fn sandwich(&self, a: &Ket, b: &Ket) -> C64 {
        inner(a, &self.apply(b))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Matrix2) -> f64 {
        (*self - *other).max_abs()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.m
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest violation of `A = A†`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Largest entry of `A†A − I`.
    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Matrix2::identity())
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, rhs: Matrix2) -> Matrix2 {
        let (a, b) = (&self.m, &rhs.m);
        Matrix2::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, rhs: Matrix2) -> Matrix2 {
        self + (-rhs)
    }
}

impl Neg for Matrix2 {
    type Output = Matrix2;
    fn neg(self) -> Matrix2 {
        let m = &self.m;
        Matrix2::new(-m[0][0], -m[0][1], -m[1][0], -m[1][1])
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: Matrix2) -> Matrix2 {
        let (a, b) = (&self.m, &rhs.m);
        Matrix2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

/// `⟨a|b⟩`, conjugate-linear in the first argument.
pub fn inner(a: &Ket, b: &Ket) -> C64 {
    a[0].conj() * b[0] + a[1].conj() * b[1]
}

pub fn ket_norm(v: &Ket) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

/// Normalizes `v` and rotates its global phase so the first component with
/// modulus above `1e-15` is real and positive.
fn canonical_ket(v: Ket) -> Ket {
    let n = ket_norm(&v);
    let mut out = [v[0] / n, v[1] / n];
    if let Some(lead) = out.iter().copied().find(|z| z.norm() > 1e-15) {
        let phase = lead.conj() / lead.norm();
        out = [out[0] * phase, out[1] * phase];
    }
    out
}

/// A 2×2 Hermitian matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hermitian2(Matrix2);

impl Hermitian2 {
    /// Validates Hermiticity to [`HERMITIAN_TOL`] (relative to the matrix
    /// scale) and then symmetrizes the stored entries exactly.
    pub fn new(m: Matrix2) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let deviation = m.hermiticity_defect();
        if deviation > HERMITIAN_TOL * m.max_abs().max(1.0) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Hermitian2::symmetrized(m))
    }

    fn symmetrized(m: Matrix2) -> Self {
        let off = (m.get(0, 1) + m.get(1, 0).conj()) * 0.5;
        Hermitian2(Matrix2::new(
            m.get(0, 0).re.into(),
            off,
            off.conj(),
            m.get(1, 1).re.into(),
        ))
    }

    /// Builds `[[a, b], [b*, d]]` directly.
    pub fn from_parts(a: f64, b: C64, d: f64) -> Self {
        Hermitian2(Matrix2::new(a.into(), b, b.conj(), d.into()))
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.0
    }

    pub fn scale(&self, s: f64) -> Self {
        Hermitian2(self.0.scale_real(s))
    }

    /// `Σ wᵢ Hᵢ`.
    pub fn combine(terms: &[(f64, &Hermitian2)]) -> Self {
        let m = terms
            .iter()
            .fold(Matrix2::zero(), |acc, (w, h)| acc + h.0.scale_real(*w));
        Hermitian2(m)
    }

    pub fn neg(&self) -> Self {
        Hermitian2(-self.0)
    }

    /// Real expectation value `tr(ρ H)`.
    pub fn expectation(&self, rho: &Density2) -> f64 {
        (self.0 * rho.0).trace().re
    }
}

/// Eigen-decomposition of a Hermitian 2×2 matrix.
#[derive(Clone, Copy, Debug)]
pub struct Eigen2 {
    /// Ascending.
    pub values: [f64; 2],
    /// Columns are the eigenvectors matching `values`.
    pub vectors: Unitary2,
}

impl Eigen2 {
    pub fn vector(&self, k: usize) -> Ket {
        self.vectors.0.column(k)
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of `h`.
///
/// Each eigenvector has its first non-negligible component real and positive.
/// When the gap is below `DEGENERACY_TOL·max(1, ‖H‖)` the standard basis is
/// returned.
pub fn eig_hermitian2(h: &Hermitian2) -> Eigen2 {
    let m = h.matrix();
    let a = m.get(0, 0).re;
    let d = m.get(1, 1).re;
    let b = m.get(0, 1);
    let mean = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let radius = half_diff.hypot(b.norm());
    let values = [mean - radius, mean + radius];

    if 2.0 * radius < DEGENERACY_TOL * m.norm().max(1.0) {
        return Eigen2 {
            values,
            vectors: Unitary2(Matrix2::identity()),
        };
    }

    // (H − λI)v = 0 has the two candidate solutions (b, λ − a) and
    // (λ − d, b*); take whichever has the larger norm.
    let upper = {
        let lambda = values[1];
        let v1: Ket = [b, C64::from(lambda - a)];
        let v2: Ket = [C64::from(lambda - d), b.conj()];
        if ket_norm(&v1) >= ket_norm(&v2) {
            v1
        } else {
            v2
        }
    };
    let upper = canonical_ket(upper);
    // Orthogonal complement of (x, y) is (−y*, x*).
    let lower = canonical_ket([-upper[1].conj(), upper[0].conj()]);

    Eigen2 {
        values,
        vectors: Unitary2(Matrix2::from_columns(&lower, &upper)),
    }
}

/// `exp(−i·s·H)` in closed form.
///
/// With `H = c·I + r·(n̂·σ)` the exponential is
/// `e^{−isc}·(cos(sr)·I − i·sin(sr)·(n̂·σ))`.
pub fn exp_neg_i_h(h: &Hermitian2, phase_scale: f64) -> Unitary2 {
    let m = h.matrix();
    let a = m.get(0, 0).re;
    let d = m.get(1, 1).re;
    let b = m.get(0, 1);
    let mean = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let radius = half_diff.hypot(b.norm());

    let theta = phase_scale * radius;
    let (sin_t, cos_t) = theta.sin_cos();
    // sin(s·r)/r, finite as r → 0.
    let sin_over_r = if radius > 0.0 {
        sin_t / radius
    } else {
        phase_scale
    };
    let minus_i = C64::new(0.0, -1.0);
    let traceless = Matrix2::new(half_diff.into(), b, b.conj(), (-half_diff).into());
    let core = Matrix2::identity().scale_real(cos_t) + traceless.scale(minus_i * sin_over_r);
    let global = C64::from_polar(1.0, -phase_scale * mean);
    Unitary2(core.scale(global))
}

/// A 2×2 unitary matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary2(Matrix2);

impl Unitary2 {
    pub fn new(m: Matrix2) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let deviation = m.unitarity_defect();
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Unitary2(m))
    }

    pub const fn identity() -> Self {
        Unitary2(Matrix2::identity())
    }

    #[cfg(test)]
    pub(crate) fn new_unchecked(m: Matrix2) -> Self {
        Unitary2(m)
    }

    /// Unitary whose columns are the orthonormal kets `c0`, `c1`.
    pub fn from_columns(c0: &Ket, c1: &Ket) -> Result<Self> {
        Unitary2::new(Matrix2::from_columns(c0, c1))
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Unitary2(self.0.adjoint())
    }

    /// Product `self · rhs`, unchecked (products of unitaries stay unitary up to rounding).
    pub fn then_after(&self, rhs: &Unitary2) -> Self {
        Unitary2(self.0 * rhs.0)
    }

    pub fn apply(&self, v: &Ket) -> Ket {
        self.0.apply(v)
    }

    pub fn defect(&self) -> f64 {
        self.0.unitarity_defect()
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, rho: &Density2) -> Density2 {
        let m = self.0 * rho.0 * self.0.adjoint();
        Density2(Hermitian2::symmetrized(m).0)
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;
    fn mul(self, rhs: Unitary2) -> Unitary2 {
        self.then_after(&rhs)
    }
}

/// A 2×2 density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Density2(Matrix2);

impl Density2 {
    pub fn new(m: Matrix2) -> Result<Self> {
        let h = Hermitian2::new(m).map_err(|e| match e {
            Error::NotHermitian { deviation } => Error::NotDensity {
                reason: format!("not Hermitian (deviation {deviation:.3e})"),
            },
            other => other,
        })?;
        let trace = h.0.trace().re;
        if (trace - 1.0).abs() > DENSITY_TOL {
            return Err(Error::NotDensity {
                reason: format!("trace {trace} differs from 1"),
            });
        }
        let eig = eig_hermitian2(&h);
        if eig.values[0] < -DENSITY_TOL {
            return Err(Error::NotDensity {
                reason: format!("negative eigenvalue {}", eig.values[0]),
            });
        }
        Ok(Density2(h.0))
    }

    /// `Σ pᵢ |vᵢ⟩⟨vᵢ|` for orthonormal `vᵢ` and probabilities `pᵢ`.
    pub fn from_spectrum(weights: [f64; 2], vectors: [&Ket; 2]) -> Result<Self> {
        let m = Matrix2::outer(vectors[0], vectors[0]).scale_real(weights[0])
            + Matrix2::outer(vectors[1], vectors[1]).scale_real(weights[1]);
        Density2::new(m)
    }

    pub fn maximally_mixed() -> Self {
        Density2(Matrix2::identity().scale_real(0.5))
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.0
    }

    pub fn as_hermitian(&self) -> Hermitian2 {
        Hermitian2(self.0)
    }

    /// Population `⟨v|ρ|v⟩` of a normalized ket.
    pub fn population(&self, v: &Ket) -> f64 {
        self.0.sandwich(v, v).re
    }
}
