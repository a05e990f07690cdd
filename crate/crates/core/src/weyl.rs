//! Floating-point Weyl function `M(z) = Γ1 γ(z)` of the boundary triplet.
//!
//! A fundamental system of `(-1)^n y^(2n) = z y` is taken with unit ascending
//! jets at the midpoint of `(a, b)`; its jets at `a` and `b` are the columns of
//! `exp(∓L/2·K(z))`, where `K(z)` is the companion matrix. Applying `Γ0`, `Γ1`
//! to the stacked jets gives `G0(z)`, `G1(z)` and `M(z) = G1(z) G0(z)⁻¹`, which
//! does not depend on the basis. Anchoring at the midpoint keeps `cond(G0)`
//! moderate far out on the negative axis, where an endpoint basis grows like
//! `e^{μL}` in one direction and shrinks in the other.

use nalgebra::{ComplexField, DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::rational;
use crate::triplet::{build_bk, gamma_matrices, TripletSpec};

/// Above this `cond(G0)` the point is treated as a Dirichlet eigenvalue.
pub const MAX_COND_G0: f64 = 1e12;

/// First-order form of `(-1)^n y^(2n) = z y` on ascending jets.
#[derive(Debug, Clone, PartialEq)]
pub struct CompanionSystem {
    pub n: usize,
    pub z: Complex64,
    pub matrix: DMatrix<Complex64>,
}

impl CompanionSystem {
    pub fn new(n: usize, z: Complex64) -> Self {
        Self { n, z, matrix: companion(n, z) }
    }
}

fn companion<T: ComplexField<RealField = f64> + Copy>(n: usize, z: T) -> DMatrix<T> {
    let d = 2 * n;
    let mut m = DMatrix::<T>::zeros(d, d);
    for i in 0..d - 1 {
        m[(i, i + 1)] = T::one();
    }
    m[(d - 1, 0)] = if n.is_multiple_of(2) { z } else { -z };
    m
}

fn transport<T: ComplexField<RealField = f64> + Copy>(spec: &TripletSpec, z: T) -> Result<DMatrix<T>> {
    let len = rational::to_f64(&spec.length());
    expm(&(companion(spec.n(), z) * T::from_real(len)))
}

/// Maps the ascending jet at `a` of any solution to its ascending jet at `b`.
pub fn fundamental_matrix(spec: &TripletSpec, z: Complex64) -> Result<DMatrix<Complex64>> {
    transport(spec, z)
}

/// Real-parameter variant used by the spectral scan.
pub fn fundamental_matrix_real(spec: &TripletSpec, lambda: f64) -> Result<DMatrix<f64>> {
    transport(spec, lambda)
}

/// `(G0, G1)` from a jet transport matrix `W`: `Γ` applied to the columns of `[I; W]`.
pub fn boundary_values<T: ComplexField<RealField = f64> + Copy>(
    spec: &TripletSpec,
    w: &DMatrix<T>,
) -> (DMatrix<T>, DMatrix<T>) {
    let d = spec.dim();
    let gamma = gamma_matrices(spec);
    let g0 = gamma.gamma0.to_f64().map(T::from_real);
    let g1 = gamma.gamma1.to_f64().map(T::from_real);
    let mut stacked = DMatrix::<T>::zeros(2 * d, d);
    stacked.view_mut((0, 0), (d, d)).copy_from(&DMatrix::<T>::identity(d, d));
    stacked.view_mut((d, 0), (d, d)).copy_from(w);
    (g0 * &stacked, g1 * &stacked)
}

/// `(G0, G1)` for the fundamental system with unit jets at the midpoint.
pub fn midpoint_boundary_values<T: ComplexField<RealField = f64> + Copy>(
    spec: &TripletSpec,
    z: T,
) -> Result<(DMatrix<T>, DMatrix<T>)> {
    let d = spec.dim();
    let half = rational::to_f64(&spec.length()) * 0.5;
    let k = companion(spec.n(), z);
    let to_a = expm(&(&k * T::from_real(-half)))?;
    let to_b = expm(&(&k * T::from_real(half)))?;
    let gamma = gamma_matrices(spec);
    let mut stacked = DMatrix::<T>::zeros(2 * d, d);
    stacked.view_mut((0, 0), (d, d)).copy_from(&to_a);
    stacked.view_mut((d, 0), (d, d)).copy_from(&to_b);
    Ok((gamma.gamma0.to_f64().map(T::from_real) * &stacked, gamma.gamma1.to_f64().map(T::from_real) * &stacked))
}

/// 2-norm condition number from singular values.
pub fn condition_number<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeylSample {
    pub z: Complex64,
    /// `G0`, `G1` on the midpoint basis.
    pub g0: DMatrix<Complex64>,
    pub g1: DMatrix<Complex64>,
    pub m: DMatrix<Complex64>,
    pub cond_g0: f64,
}

impl WeylSample {
    /// `Re M`, for real `z`.
    pub fn m_real(&self) -> DMatrix<f64> {
        self.m.map(|v| v.re)
    }
}

pub fn weyl_m(spec: &TripletSpec, z: Complex64) -> Result<WeylSample> {
    let (g0, g1) = midpoint_boundary_values(spec, z)?;
    let cond_g0 = condition_number(&g0);
    if !(cond_g0 <= MAX_COND_G0) {
        return Err(Error::NearSingularG0 { cond: cond_g0, limit: MAX_COND_G0 });
    }
    let g0_inv = g0.clone().try_inverse().ok_or(Error::NearSingularG0 { cond: cond_g0, limit: MAX_COND_G0 })?;
    let m = &g1 * g0_inv;
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("M({z}) has non-finite entries")));
    }
    Ok(WeylSample { z, g0, g1, m, cond_g0 })
}

pub fn weyl_m_real(spec: &TripletSpec, x: f64) -> Result<DMatrix<f64>> {
    Ok(weyl_m(spec, Complex64::new(x, 0.0))?.m_real())
}

/// One row of the `x -> 0⁻` convergence table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub k: i32,
    pub x: f64,
    pub error: f64,
    #[serde(rename = "cond_G0")]
    pub cond_g0: f64,
}

/// Relative Frobenius distance `‖M(-10^-k) - B_K‖ / ‖B_K‖` for each `k`.
pub fn weyl_limit_scan(spec: &TripletSpec, exponents: &[i32]) -> Result<Vec<LimitRow>> {
    let bk = build_bk(spec)?.to_f64();
    let bk_norm = bk.norm();
    exponents
        .iter()
        .map(|&k| {
            let x = -(10f64.powi(-k));
            let sample = weyl_m(spec, Complex64::new(x, 0.0))?;
            let error = (sample.m_real() - &bk).norm() / bk_norm;
            Ok(LimitRow { k, x, error, cond_g0: sample.cond_g0 })
        })
        .collect()
}

pub fn limit_table_csv(rows: &[LimitRow]) -> String {
    let mut out = String::from("x,error,cond_G0\n");
    for r in rows {
        out.push_str(&format!("{:e},{:e},{:e}\n", r.x, r.error, r.cond_g0));
    }
    out
}

/// Smallest eigenvalue of the symmetric part of a real matrix.
pub fn min_symmetric_eigenvalue(m: &DMatrix<f64>) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    SymmetricEigen::new(sym).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergenceRow {
    pub x: f64,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceTable {
    pub rows: Vec<DivergenceRow>,
    /// Set when the sample was cut short by overflow.
    pub truncated: bool,
    pub strictly_decreasing: bool,
}

/// Minimum eigenvalue of `M(x)` along a decreasing sequence of negative `x`.
pub fn friedrichs_divergence_check(spec: &TripletSpec, xs: &[f64]) -> Result<DivergenceTable> {
    if xs.iter().any(|&x| !(x < 0.0)) || xs.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidConfig("sample points must be negative and strictly decreasing".into()));
    }
    let mut rows = Vec::with_capacity(xs.len());
    let mut truncated = false;
    for &x in xs {
        match weyl_m_real(spec, x) {
            Ok(m) => rows.push(DivergenceRow { x, min_eigenvalue: min_symmetric_eigenvalue(&m) }),
            Err(Error::NonFinite(_)) => {
                truncated = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let strictly_decreasing = rows.windows(2).all(|w| w[1].min_eigenvalue < w[0].min_eigenvalue);
    Ok(DivergenceTable { rows, truncated, strictly_decreasing })
}

/// Smallest eigenvalue of `M(x2) - M(x1)` divided by `‖M(x2)‖`; nonnegative up to
/// roundoff for `x1 < x2 < 0`.
pub fn monotonicity_margin(spec: &TripletSpec, x1: f64, x2: f64) -> Result<f64> {
    let m1 = weyl_m_real(spec, x1)?;
    let m2 = weyl_m_real(spec, x2)?;
    Ok(min_symmetric_eigenvalue(&(&m2 - m1)) / m2.norm())
}

#[derive(Serialize)]
struct ComplexMatrixRepr {
    rows: usize,
    cols: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

fn complex_repr(m: &DMatrix<Complex64>) -> ComplexMatrixRepr {
    let (r, c) = m.shape();
    ComplexMatrixRepr {
        rows: r,
        cols: c,
        re: (0..r).map(|i| (0..c).map(|j| m[(i, j)].re).collect()).collect(),
        im: (0..r).map(|i| (0..c).map(|j| m[(i, j)].im).collect()).collect(),
    }
}

impl Serialize for WeylSample {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            z: [f64; 2],
            #[serde(rename = "G0")]
            g0: ComplexMatrixRepr,
            #[serde(rename = "G1")]
            g1: ComplexMatrixRepr,
            #[serde(rename = "M")]
            m: ComplexMatrixRepr,
            #[serde(rename = "cond_G0")]
            cond_g0: f64,
        }
        Repr {
            z: [self.z.re, self.z.im],
            g0: complex_repr(&self.g0),
            g1: complex_repr(&self.g1),
            m: complex_repr(&self.m),
            cond_g0: self.cond_g0,
        }
        .serialize(s)
    }
}
