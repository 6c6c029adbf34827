//! 2×2 complex matrices, SL₂(ℂ), the Lie algebra 𝔰𝔩₂ in the basis (H, E, F),
//! the adjoint action, the exponential, the Cartan projection and invariant
//! Hermitian forms.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, Matrix3, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Default tolerance on `|det − 1|` for SL₂ elements.
pub const DET_TOL: f64 = 1e-9;

/// A 2×2 complex matrix `[[a, b], [c, d]]`, serialized row-major as `[[re, im]; 4]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[C64; 4]", into = "[C64; 4]")]
pub struct Mat2C {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl From<[C64; 4]> for Mat2C {
    fn from(e: [C64; 4]) -> Self {
        Mat2C { a: e[0], b: e[1], c: e[2], d: e[3] }
    }
}

impl From<Mat2C> for [C64; 4] {
    fn from(m: Mat2C) -> Self {
        [m.a, m.b, m.c, m.d]
    }
}

impl Mat2C {
    pub const fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Mat2C { a, b, c, d }
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2C::new(a.into(), b.into(), c.into(), d.into())
    }

    pub const fn identity() -> Self {
        Mat2C::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Mat2C::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub fn diag(x: C64, y: C64) -> Self {
        Mat2C::new(x, ZERO, ZERO, y)
    }

    pub fn entries(&self) -> [C64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> C64 {
        self.a + self.d
    }

    pub fn adjugate(&self) -> Self {
        Mat2C::new(self.d, -self.b, -self.c, self.a)
    }

    /// General inverse; `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.norm() == 0.0 || !det.is_finite() {
            return None;
        }
        Some(self.adjugate().scale(det.inv()))
    }

    pub fn adjoint(&self) -> Self {
        Mat2C::new(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())
    }

    pub fn scale(&self, k: C64) -> Self {
        Mat2C::new(self.a * k, self.b * k, self.c * k, self.d * k)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.is_finite())
    }

    pub fn dist(&self, other: &Self) -> f64 {
        (*self - *other).frobenius()
    }
}

impl Add for Mat2C {
    type Output = Mat2C;
    fn add(self, o: Mat2C) -> Mat2C {
        Mat2C::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Mat2C {
    type Output = Mat2C;
    fn sub(self, o: Mat2C) -> Mat2C {
        Mat2C::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for Mat2C {
    type Output = Mat2C;
    fn neg(self) -> Mat2C {
        Mat2C::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl Mul for Mat2C {
    type Output = Mat2C;
    fn mul(self, o: Mat2C) -> Mat2C {
        Mat2C::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// An element of SL₂(ℂ).
///
/// The determinant is checked on construction through [`Sl2Element::new`]; the
/// `*` operator does not re-check, use [`Sl2Element::checked_mul`] where drift
/// matters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Sl2Element(Mat2C);

impl Sl2Element {
    pub fn new(m: Mat2C) -> Result<Self> {
        Self::with_tol(m, DET_TOL)
    }

    pub fn with_tol(m: Mat2C, det_tol: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let drift = (m.det() - ONE).norm();
        if drift > det_tol {
            return Err(Error::Degraded { drift });
        }
        Ok(Sl2Element(m))
    }

    /// Rescales by `det^{-1/2}` so that the determinant is 1 up to rounding.
    pub fn normalized(m: Mat2C) -> Result<Self> {
        let det = m.det();
        if det.norm() == 0.0 || !m.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Sl2Element(m.scale(det.sqrt().inv())))
    }

    pub fn from_unchecked(m: Mat2C) -> Self {
        Sl2Element(m)
    }

    pub const fn identity() -> Self {
        Sl2Element(Mat2C::identity())
    }

    pub fn diag(x: C64) -> Self {
        Sl2Element(Mat2C::diag(x, x.inv()))
    }

    /// `diag(e^{iθ}, e^{-iθ})` with exactly conjugate entries.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Sl2Element(Mat2C::diag(C64::new(c, s), C64::new(c, -s)))
    }

    pub fn matrix(&self) -> &Mat2C {
        &self.0
    }

    pub fn det(&self) -> C64 {
        self.0.det()
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Inverse via the adjugate, exact when det = 1.
    pub fn inv(&self) -> Self {
        Sl2Element(self.0.adjugate())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        Self::with_tol(self.0 * other.0, 10.0 * DET_TOL)
    }

    pub fn checked_inv(&self) -> Result<Self> {
        Self::with_tol(self.0.adjugate(), 10.0 * DET_TOL)
    }

    pub fn conjugate_by(&self, g: &Sl2Element) -> Self {
        *g * *self * g.inv()
    }

    pub fn dist(&self, other: &Self) -> f64 {
        self.0.dist(&other.0)
    }
}

impl Mul for Sl2Element {
    type Output = Sl2Element;
    fn mul(self, o: Sl2Element) -> Sl2Element {
        Sl2Element(self.0 * o.0)
    }
}

impl Neg for Sl2Element {
    type Output = Sl2Element;
    fn neg(self) -> Sl2Element {
        Sl2Element(-self.0)
    }
}

/// Coordinates `(h, e, f)` of `hH + eE + fF` in 𝔰𝔩₂(ℂ), where
/// `H = [[1,0],[0,-1]]`, `E = [[0,1],[0,0]]`, `F = [[0,0],[1,0]]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[C64; 3]", into = "[C64; 3]")]
pub struct Sl2Vector {
    pub h: C64,
    pub e: C64,
    pub f: C64,
}

impl From<[C64; 3]> for Sl2Vector {
    fn from(v: [C64; 3]) -> Self {
        Sl2Vector { h: v[0], e: v[1], f: v[2] }
    }
}

impl From<Sl2Vector> for [C64; 3] {
    fn from(v: Sl2Vector) -> Self {
        [v.h, v.e, v.f]
    }
}

impl Sl2Vector {
    pub const H: Sl2Vector = Sl2Vector { h: ONE, e: ZERO, f: ZERO };
    pub const E: Sl2Vector = Sl2Vector { h: ZERO, e: ONE, f: ZERO };
    pub const F: Sl2Vector = Sl2Vector { h: ZERO, e: ZERO, f: ONE };
    pub const BASIS: [Sl2Vector; 3] = [Self::H, Self::E, Self::F];

    pub const fn new(h: C64, e: C64, f: C64) -> Self {
        Sl2Vector { h, e, f }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn coords(&self) -> [C64; 3] {
        [self.h, self.e, self.f]
    }

    pub fn to_matrix(&self) -> Mat2C {
        Mat2C::new(self.h, self.e, self.f, -self.h)
    }

    /// Traceless part of `m` in coordinates.
    pub fn from_matrix(m: &Mat2C) -> Self {
        Sl2Vector { h: (m.a - m.d) * 0.5, e: m.b, f: m.c }
    }

    pub fn scale(&self, k: C64) -> Self {
        Sl2Vector::new(self.h * k, self.e * k, self.f * k)
    }

    pub fn norm(&self) -> f64 {
        (self.h.norm_sqr() + self.e.norm_sqr() + self.f.norm_sqr()).sqrt()
    }

    pub fn bracket(&self, other: &Self) -> Self {
        let x = self.to_matrix();
        let y = other.to_matrix();
        Sl2Vector::from_matrix(&(x * y - y * x))
    }

    pub fn apply(&self, m: &Matrix3<C64>) -> Self {
        let v = m * nalgebra::Vector3::new(self.h, self.e, self.f);
        Sl2Vector::new(v[0], v[1], v[2])
    }
}

impl Add for Sl2Vector {
    type Output = Sl2Vector;
    fn add(self, o: Sl2Vector) -> Sl2Vector {
        Sl2Vector::new(self.h + o.h, self.e + o.e, self.f + o.f)
    }
}

impl Sub for Sl2Vector {
    type Output = Sl2Vector;
    fn sub(self, o: Sl2Vector) -> Sl2Vector {
        Sl2Vector::new(self.h - o.h, self.e - o.e, self.f - o.f)
    }
}

impl Neg for Sl2Vector {
    type Output = Sl2Vector;
    fn neg(self) -> Sl2Vector {
        Sl2Vector::new(-self.h, -self.e, -self.f)
    }
}

/// Matrix of `X ↦ gXg⁻¹` on 𝔰𝔩₂ in the basis (H, E, F).
pub fn adjoint_matrix(g: &Sl2Element) -> Matrix3<C64> {
    let m = g.matrix();
    let inv = g.inv();
    let mut out = Matrix3::zeros();
    for (j, b) in Sl2Vector::BASIS.iter().enumerate() {
        let image = Sl2Vector::from_matrix(&(*m * b.to_matrix() * *inv.matrix()));
        out[(0, j)] = image.h;
        out[(1, j)] = image.e;
        out[(2, j)] = image.f;
    }
    out
}

/// `exp(X)` for traceless `X`, via `cosh(λ)·I + sinh(λ)/λ·X` with `λ² = −det X`.
pub fn exp_traceless(x: &Sl2Vector) -> Sl2Element {
    let lambda_sq = x.h * x.h + x.e * x.f;
    let (cosh, sinhc) = if lambda_sq.norm() < 1e-3 {
        // even series in λ; truncation error below 1e-18 here
        let z = lambda_sq;
        let cosh = ONE + z * (0.5 + z * (1.0 / 24.0 + z * (1.0 / 720.0 + z * (1.0 / 40320.0))));
        let sinhc = ONE + z * (1.0 / 6.0 + z * (1.0 / 120.0 + z * (1.0 / 5040.0 + z * (1.0 / 362880.0))));
        (cosh, sinhc)
    } else {
        let lambda = lambda_sq.sqrt();
        (lambda.cosh(), lambda.sinh() / lambda)
    };
    Sl2Element(Mat2C::identity().scale(cosh) + x.to_matrix().scale(sinhc))
}

/// Singular values `(σ₁, σ₂)`, `σ₁ ≥ σ₂`, of a 2×2 matrix.
///
/// After rotating the determinant to the positive real axis,
/// `σ₁ ± σ₂ = ‖(a ± d̄, b ∓ c̄)‖`, which is exact on SU(2)-shaped input.
pub fn singular_values(m: &Mat2C) -> (f64, f64) {
    let (plus, minus) = sum_and_difference(m);
    (0.5 * (plus + minus), 0.5 * (plus - minus).max(0.0))
}

fn sum_and_difference(m: &Mat2C) -> (f64, f64) {
    let det = m.det();
    let m = if det.im == 0.0 && det.re >= 0.0 {
        *m
    } else {
        m.scale(C64::from_polar(1.0, -det.arg() / 2.0))
    };
    let plus = ((m.a + m.d.conj()).norm_sqr() + (m.b - m.c.conj()).norm_sqr()).sqrt();
    let minus = ((m.a - m.d.conj()).norm_sqr() + (m.b + m.c.conj()).norm_sqr()).sqrt();
    (plus, minus)
}

/// Cartan projection `μ(g) = log σ₁(g)` for the decomposition SU(2)·A⁺·SU(2).
///
/// Evaluated as `½·log(σ₁/σ₂)`, equal to `log σ₁` when det = 1 and exactly 0 on
/// matrices of the form `[[α, β], [−β̄, ᾱ]]`.
pub fn cartan_mu(g: &Sl2Element) -> f64 {
    let (plus, minus) = sum_and_difference(g.matrix());
    if minus == 0.0 {
        return 0.0;
    }
    let lower = plus - minus;
    if lower <= 0.0 {
        return f64::INFINITY;
    }
    (0.5 * (2.0 * minus / lower).ln_1p()).max(0.0)
}

/// The Killing form of 𝔰𝔩₂, `κ(X, Y) = 4·tr(XY)`.
pub fn killing_pairing(x: &Sl2Vector, y: &Sl2Vector) -> C64 {
    (x.h * y.h * 2.0 + x.e * y.f + x.f * y.e) * 4.0
}

/// Positive-definite Hermitian `H = [[p, q], [q̄, s]]` with `gᴴHg = H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermitianForm {
    pub matrix: Mat2C,
}

impl HermitianForm {
    /// `max_g ‖gᴴHg − H‖_F / ‖H‖_F` over the given matrices.
    pub fn invariance_defect(&self, mats: &[Sl2Element]) -> f64 {
        let h = self.matrix;
        let norm = h.frobenius();
        mats.iter()
            .map(|g| (g.matrix().adjoint() * h * *g.matrix() - h).frobenius() / norm)
            .fold(0.0, f64::max)
    }

    /// Eigenvalues of the form, ascending.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let p = self.matrix.a.re;
        let s = self.matrix.d.re;
        let q = self.matrix.b.norm();
        let mean = 0.5 * (p + s);
        let rad = (0.25 * (p - s) * (p - s) + q * q).sqrt();
        (mean - rad, mean + rad)
    }
}

/// Relative tolerance for accepting an invariant Hermitian form.
pub const HERMITIAN_TOL: f64 = 1e-8;

/// Hermitian basis in real coordinates (p, s, √2·Re q, √2·Im q), orthonormal for
/// the Frobenius inner product.
fn hermitian_from_params(x: &[f64; 4]) -> Mat2C {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let q = C64::new(x[2] * r, x[3] * r);
    Mat2C::new(x[0].into(), q, q.conj(), x[1].into())
}

fn hermitian_params(m: &Mat2C) -> [f64; 4] {
    let r = std::f64::consts::SQRT_2;
    [m.a.re, m.d.re, m.b.re * r, m.b.im * r]
}

/// Searches for a positive-definite Hermitian form preserved by every matrix.
///
/// The invariance equations are a real linear system on the 4-dimensional space
/// of Hermitian forms. On the kernel, `det H` is a Lorentzian quadratic form whose
/// positive cone is the definite forms, so a definite solution exists exactly when
/// the restricted form has a positive eigenvalue; its eigenvector is the certificate.
pub fn invariant_hermitian_form(mats: &[Sl2Element]) -> Option<HermitianForm> {
    if mats.is_empty() {
        return None;
    }
    let rows = 4 * mats.len();
    let mut system = DMatrix::<f64>::zeros(rows, 4);
    for (k, g) in mats.iter().enumerate() {
        let m = g.matrix();
        let scale = m.norm_sqr().max(1.0);
        for j in 0..4 {
            let mut unit = [0.0; 4];
            unit[j] = 1.0;
            let b = hermitian_from_params(&unit);
            let image = hermitian_params(&(m.adjoint() * b * *m - b));
            for i in 0..4 {
                system[(4 * k + i, j)] = image[i] / scale;
            }
        }
    }
    let (kernel, _) = numeric::null_space(&system, 1e-9);
    let dim = kernel.ncols();
    if dim == 0 {
        return None;
    }
    // det H = p·s − (x² + y²)/2 in the scaled coordinates
    let lorentz = nalgebra::Matrix4::new(
        0.0, 0.5, 0.0, 0.0, //
        0.5, 0.0, 0.0, 0.0, //
        0.0, 0.0, -0.5, 0.0, //
        0.0, 0.0, 0.0, -0.5,
    );
    let lorentz = DMatrix::from_fn(4, 4, |i, j| lorentz[(i, j)]);
    let restricted = kernel.transpose() * &lorentz * &kernel;
    let eig = SymmetricEigen::new(restricted);
    let (best, &lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))?;
    if lambda <= HERMITIAN_TOL {
        return None;
    }
    let coeffs = eig.eigenvectors.column(best);
    let x = &kernel * coeffs;
    let mut h = hermitian_from_params(&[x[0], x[1], x[2], x[3]]);
    let det = h.det().re;
    if det <= 0.0 {
        return None;
    }
    if h.a.re < 0.0 {
        h = -h;
    }
    let form = HermitianForm { matrix: h.scale(C64::from(1.0 / det.sqrt())) };
    let (lo, hi) = form.eigenvalues();
    if lo <= HERMITIAN_TOL * hi || form.invariance_defect(mats) >= HERMITIAN_TOL {
        return None;
    }
    Some(form)
}

/// Random element `exp(X)` with the coordinates of `X` uniform in the complex
/// square of half-width `scale`.
pub fn random_sl2<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Sl2Element {
    let mut c = || C64::new(rng.random_range(-scale..=scale), rng.random_range(-scale..=scale));
    exp_traceless(&Sl2Vector::new(c(), c(), c()))
}

/// Random element of SU(2), the exponential of a random element of 𝔰𝔲(2).
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> Sl2Element {
    let alpha: f64 = rng.random_range(-3.0..=3.0);
    let beta = C64::new(rng.random_range(-2.0..=2.0), rng.random_range(-2.0..=2.0));
    // [[iα, β], [−β̄, −iα]]
    exp_traceless(&Sl2Vector::new(C64::new(0.0, alpha), beta, -beta.conj()))
}

/// Random traceless vector with coordinates uniform in the square of half-width `scale`.
pub fn random_sl2_vector<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Sl2Vector {
    let mut c = || C64::new(rng.random_range(-scale..=scale), rng.random_range(-scale..=scale));
    Sl2Vector::new(c(), c(), c())
}
