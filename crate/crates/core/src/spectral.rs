//! Eigenvalue counting for `A_{C,D}` by the characteristic determinant
//! `det(D G1(λ) - C G0(λ))`.
//!
//! `λ` is an eigenvalue exactly when the boundary matrix is singular, and its
//! multiplicity is the nullity. Roots are bracketed by sign changes on a grid
//! and bisected; even-multiplicity roots, which do not change sign, are picked
//! up by refining grid cells around local minima of `log|det|`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::classify::{validate_cd, ExtensionParams};
use crate::error::{Error, Result};
use crate::rational;
use crate::triplet::{exact_basis_boundary_values, TripletSpec};
use crate::weyl::{boundary_values, fundamental_matrix_real, midpoint_boundary_values};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub lambda_min: f64,
    pub grid_points: usize,
    pub bisect_tol: f64,
    pub nullity_tol: f64,
}

impl ScanConfig {
    /// Floor at `-10^4 L^(-2n)`, 2000 grid points.
    pub fn default_for(spec: &TripletSpec) -> Self {
        let len = rational::to_f64(&spec.length());
        Self {
            lambda_min: -1e4 * len.powi(-(2 * spec.n() as i32)),
            grid_points: 2000,
            bisect_tol: 1e-12,
            nullity_tol: 1e-8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let tol_ok = |t: f64| t > 0.0 && t < 1e-2;
        if !(self.lambda_min < 0.0) || !self.lambda_min.is_finite() {
            return Err(Error::InvalidConfig(format!("lambda_min must be negative, got {}", self.lambda_min)));
        }
        if self.grid_points < 16 {
            return Err(Error::InvalidConfig(format!("grid_points must be at least 16, got {}", self.grid_points)));
        }
        if !tol_ok(self.bisect_tol) || !tol_ok(self.nullity_tol) {
            return Err(Error::InvalidConfig("tolerances must lie in (0, 1e-2)".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub lambda: f64,
    pub nullity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub negative_count: usize,
    pub roots: Vec<Root>,
    pub kernel_dim_at_zero: usize,
    pub warnings: Vec<String>,
}

/// `(λ, sign, log|det|)` at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSample {
    pub lambda: f64,
    pub sign: i32,
    pub log_abs_det: f64,
}

pub fn grid_csv(samples: &[GridSample]) -> String {
    let mut out = String::from("lambda,sign,log_abs_det\n");
    for s in samples {
        out.push_str(&format!("{:e},{},{:e}\n", s.lambda, s.sign, s.log_abs_det));
    }
    out
}

fn check_params(params: &ExtensionParams, spec: &TripletSpec) -> Result<()> {
    if params.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("C and D of size {0}x{0}", spec.dim()),
            found: format!("{}x{}", params.c.rows(), params.c.cols()),
        });
    }
    let violations = validate_cd(params)?;
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidExtension(violations))
    }
}

/// Float parameters, converted once per scan.
struct Problem<'a> {
    spec: &'a TripletSpec,
    c: DMatrix<f64>,
    d: DMatrix<f64>,
}

impl<'a> Problem<'a> {
    fn new(params: &ExtensionParams, spec: &'a TripletSpec) -> Result<Self> {
        check_params(params, spec)?;
        Ok(Self { spec, c: params.c.to_f64(), d: params.d.to_f64() })
    }

    fn combine(&self, g0: DMatrix<f64>, g1: DMatrix<f64>, lambda: f64) -> Result<(DMatrix<f64>, Vec<f64>)> {
        let dg1 = &self.d * g1;
        let cg0 = &self.c * g0;
        let scales = (0..dg1.nrows()).map(|i| dg1.row(i).norm() + cg0.row(i).norm()).collect();
        let m = dg1 - cg0;
        if m.iter().all(|v| v.is_finite()) {
            Ok((m, scales))
        } else {
            Err(Error::NonFinite(format!("boundary matrix at λ = {lambda:e}")))
        }
    }

    /// Boundary matrix on the basis of unit jets at `a`.
    fn matrix(&self, lambda: f64) -> Result<DMatrix<f64>> {
        let w = fundamental_matrix_real(self.spec, lambda)?;
        let (g0, g1) = boundary_values(self.spec, &w);
        Ok(self.combine(g0, g1, lambda)?.0)
    }

    /// Boundary matrix on the basis of unit jets at the midpoint, with the
    /// summand row norms. It differs from [`Self::matrix`] by the right factor
    /// `W(-L/2)` of determinant one, and keeps entries near `e^{μL/2}` instead
    /// of `e^{μL}` so the determinant does not cancel.
    fn balanced(&self, lambda: f64) -> Result<(DMatrix<f64>, Vec<f64>)> {
        let (g0, g1) = midpoint_boundary_values(self.spec, lambda)?;
        self.combine(g0, g1, lambda)
    }

    fn det(&self, lambda: f64) -> Result<(i32, f64)> {
        Ok(sign_log_det(self.balanced(lambda)?.0))
    }

    fn nullity(&self, lambda: f64, tol: f64) -> Result<usize> {
        let (m, scales) = self.balanced(lambda)?;
        Ok(scaled_nullity(m, &scales, tol))
    }
}

/// Singular values at most `tol` once each row is divided by the norm of the
/// terms it was formed from, so cancellation to zero counts as a null direction.
fn scaled_nullity(mut m: DMatrix<f64>, scales: &[f64], tol: f64) -> usize {
    for (mut row, &s) in m.row_iter_mut().zip(scales) {
        if s > 0.0 {
            row /= s;
        }
    }
    m.singular_values().iter().filter(|&&s| s <= tol).count()
}

/// `D G1(λ) - C G0(λ)`.
pub fn boundary_matrix(params: &ExtensionParams, spec: &TripletSpec, lambda: f64) -> Result<DMatrix<f64>> {
    Problem::new(params, spec)?.matrix(lambda)
}

/// Sign and `ln|det|` of the boundary matrix, by partial-pivoting elimination.
pub fn char_det(params: &ExtensionParams, spec: &TripletSpec, lambda: f64) -> Result<(i32, f64)> {
    Problem::new(params, spec)?.det(lambda)
}

fn sign_log_det(mut a: DMatrix<f64>) -> (i32, f64) {
    let n = a.nrows();
    let mut sign = 1;
    let mut log = 0.0;
    for col in 0..n {
        let (pivot, max) = (col..n)
            .map(|r| (r, a[(r, col)].abs()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if max == 0.0 {
            return (0, f64::NEG_INFINITY);
        }
        if pivot != col {
            a.swap_rows(pivot, col);
            sign = -sign;
        }
        let p = a[(col, col)];
        if p < 0.0 {
            sign = -sign;
        }
        log += p.abs().ln();
        for r in col + 1..n {
            let f = a[(r, col)] / p;
            if f != 0.0 {
                for j in col..n {
                    a[(r, j)] -= f * a[(col, j)];
                }
            }
        }
    }
    (sign, log)
}

/// Number of singular values at most `tol · σ_max`.
pub fn numerical_nullity(m: &DMatrix<f64>, tol: f64) -> usize {
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return m.nrows();
    }
    sv.iter().filter(|&&s| s <= tol * max).count()
}

/// Nullity of the boundary matrix at `λ`, relative to the size of `D G1` and `C G0`.
pub fn boundary_nullity(params: &ExtensionParams, spec: &TripletSpec, lambda: f64, tol: f64) -> Result<usize> {
    Problem::new(params, spec)?.nullity(lambda, tol)
}

/// Exact nullity of `D G1(0) - C G0(0)`, from the polynomial solutions at `λ = 0`.
pub fn kernel_dimension_at_zero(params: &ExtensionParams, spec: &TripletSpec) -> Result<usize> {
    check_params(params, spec)?;
    let (g0, g1) = exact_basis_boundary_values(spec);
    let m = &(&params.d * &g1) - &(&params.c * &g0);
    Ok(spec.dim() - m.rank())
}

struct Scan<'p, 'a> {
    problem: &'p Problem<'a>,
    config: ScanConfig,
    warnings: Vec<String>,
}

impl Scan<'_, '_> {
    fn sample(&mut self, grid: &[f64]) -> Vec<GridSample> {
        let mut out = Vec::with_capacity(grid.len());
        for &lambda in grid {
            match self.problem.det(lambda) {
                Ok((sign, log_abs_det)) => out.push(GridSample { lambda, sign, log_abs_det }),
                Err(e) => self.warnings.push(format!("grid point λ = {lambda:e} skipped: {e}")),
            }
        }
        out
    }

    fn bisect(&self, mut lo: f64, mut hi: f64, sign_lo: i32) -> Result<f64> {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (hi - lo).abs() <= self.config.bisect_tol * mid.abs().max(f64::MIN_POSITIVE) {
                return Ok(mid);
            }
            let (s, _) = self.problem.det(mid)?;
            if s == 0 {
                return Ok(mid);
            }
            if s == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    fn root_at(&self, lambda: f64) -> Result<Root> {
        let nullity = self.problem.nullity(lambda, self.config.nullity_tol)?.max(1);
        Ok(Root { lambda, nullity })
    }

    /// Roots in the sampled range: sign changes first, then dips.
    fn roots(&mut self, samples: &[GridSample]) -> Result<Vec<Root>> {
        let mut roots = Vec::new();
        for w in samples.windows(2) {
            let (l, r) = (w[0], w[1]);
            if l.sign == 0 {
                roots.push(self.root_at(l.lambda)?);
            } else if r.sign != 0 && l.sign != r.sign {
                let lambda = self.bisect(l.lambda, r.lambda, l.sign)?;
                roots.push(self.root_at(lambda)?);
            }
        }
        if let Some(last) = samples.last() {
            if last.sign == 0 {
                roots.push(self.root_at(last.lambda)?);
            }
        }

        for i in 1..samples.len().saturating_sub(1) {
            let (l, m, r) = (samples[i - 1], samples[i], samples[i + 1]);
            let local_min = m.log_abs_det < l.log_abs_det && m.log_abs_det < r.log_abs_det;
            if !local_min || l.sign != m.sign || m.sign != r.sign || m.sign == 0 {
                continue;
            }
            let reference = l.log_abs_det.min(r.log_abs_det);
            if let Some(found) = self.refine_dip(l.lambda, r.lambda, m.sign, reference)? {
                roots.extend(found);
            }
        }

        roots.sort_by(|x, y| x.lambda.total_cmp(&y.lambda));
        roots.dedup_by(|b, a| (b.lambda - a.lambda).abs() <= 1e3 * self.config.bisect_tol * a.lambda.abs().max(1e-300));
        Ok(roots)
    }

    /// Looks inside `(lo, hi)` for a hidden sign-change pair or a double root.
    fn refine_dip(&mut self, lo: f64, hi: f64, sign: i32, reference: f64) -> Result<Option<Vec<Root>>> {
        const SUBDIVISIONS: usize = 64;
        let fine: Vec<f64> = (0..=SUBDIVISIONS).map(|k| lo + (hi - lo) * k as f64 / SUBDIVISIONS as f64).collect();
        let samples = self.sample(&fine);
        let mut found = Vec::new();
        for w in samples.windows(2) {
            if w[0].sign != 0 && w[1].sign != 0 && w[0].sign != w[1].sign {
                let lambda = self.bisect(w[0].lambda, w[1].lambda, w[0].sign)?;
                found.push(self.root_at(lambda)?);
            }
        }
        if !found.is_empty() {
            return Ok(Some(found));
        }
        debug_assert!(samples.iter().all(|s| s.sign == sign || s.sign == 0));

        // golden-section search for the minimum of log|det|
        let best = samples.iter().min_by(|a, b| a.log_abs_det.total_cmp(&b.log_abs_det)).copied();
        let Some(best) = best else { return Ok(None) };
        let step = (hi - lo) / SUBDIVISIONS as f64;
        let (mut a, mut b) = (best.lambda - step, best.lambda + step);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let f = |x: f64| self.problem.det(x).map(|d| d.1);
        let mut x1 = b - g * (b - a);
        let mut x2 = a + g * (b - a);
        let (mut f1, mut f2) = (f(x1)?, f(x2)?);
        while (b - a).abs() > self.config.bisect_tol * best.lambda.abs().max(1e-300) {
            if f1 < f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - g * (b - a);
                f1 = f(x1)?;
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + g * (b - a);
                f2 = f(x2)?;
            }
        }
        let lambda = 0.5 * (a + b);
        let depth = (reference - f(lambda)?) / std::f64::consts::LN_10;
        if depth > 6.0 {
            let nullity = self.problem.nullity(lambda, self.config.nullity_tol)?;
            if nullity > 0 {
                return Ok(Some(vec![Root { lambda, nullity }]));
            }
        }
        Ok(None)
    }
}

/// Negative grid: log-spaced `|λ|` from `|lambda_min|` down to `|lambda_min|·1e-12`.
fn negative_grid(config: &ScanConfig) -> Vec<f64> {
    let top = config.lambda_min.abs().log10();
    let bottom = top - 12.0;
    let n = config.grid_points;
    (0..n).map(|i| -(10f64.powf(top + (bottom - top) * i as f64 / (n - 1) as f64))).collect()
}

pub fn count_negative_eigenvalues(
    params: &ExtensionParams,
    spec: &TripletSpec,
    config: &ScanConfig,
) -> Result<ScanReport> {
    count_negative_with_grid(params, spec, config).map(|(report, _)| report)
}

/// As [`count_negative_eigenvalues`], also returning the grid samples.
pub fn count_negative_with_grid(
    params: &ExtensionParams,
    spec: &TripletSpec,
    config: &ScanConfig,
) -> Result<(ScanReport, Vec<GridSample>)> {
    config.validate()?;
    let problem = Problem::new(params, spec)?;
    let kernel_dim_at_zero = kernel_dimension_at_zero(params, spec)?;
    let mut scan = Scan { problem: &problem, config: *config, warnings: Vec::new() };

    let samples = scan.sample(&negative_grid(config));
    if samples.len() < 2 {
        return Err(Error::NonFinite("too few finite grid points to scan".into()));
    }
    let roots: Vec<Root> = scan.roots(&samples)?.into_iter().filter(|r| r.lambda < 0.0).collect();

    // Below the floor: look for a sign change on a geometric probe.
    let floor_sign = samples[0].sign;
    for k in 1..=24 {
        let lambda = config.lambda_min * 2f64.powi(k);
        match problem.det(lambda) {
            Ok((s, _)) if s != floor_sign => {
                scan.warnings.push(format!(
                    "characteristic determinant changes sign below the scan floor (at λ ≈ {lambda:e}); \
                     negative_count is a lower bound"
                ));
                break;
            }
            Ok(_) => {}
            Err(_) => break,
        }
    }

    // Between the last grid point and zero.
    if let Some(last) = samples.last() {
        if kernel_dim_at_zero == 0 && problem.nullity(last.lambda, 1e-6)? > 0 {
            scan.warnings.push(format!(
                "boundary matrix is nearly singular at λ = {:e}, close to zero; an eigenvalue in ({:e}, 0) may be missed",
                last.lambda, last.lambda
            ));
        }
    }

    let negative_count = roots.iter().map(|r| r.nullity).sum();
    let warnings = scan.warnings;
    Ok((ScanReport { negative_count, roots, kernel_dim_at_zero, warnings }, samples))
}

/// Roots of the characteristic determinant in `(lambda_lo, lambda_hi)`, `0 < lambda_lo`.
pub fn positive_eigenvalues_in(
    params: &ExtensionParams,
    spec: &TripletSpec,
    lambda_lo: f64,
    lambda_hi: f64,
    config: &ScanConfig,
) -> Result<Vec<Root>> {
    config.validate()?;
    if !(lambda_lo > 0.0 && lambda_lo < lambda_hi) {
        return Err(Error::InvalidConfig(format!("window ({lambda_lo}, {lambda_hi}) must satisfy 0 < lo < hi")));
    }
    let problem = Problem::new(params, spec)?;
    let mut scan = Scan { problem: &problem, config: *config, warnings: Vec::new() };
    let n = config.grid_points;
    let grid: Vec<f64> =
        (0..n).map(|i| lambda_lo + (lambda_hi - lambda_lo) * i as f64 / (n - 1) as f64).collect();
    let samples = scan.sample(&grid);
    Ok(scan.roots(&samples)?.into_iter().filter(|r| r.lambda > lambda_lo && r.lambda < lambda_hi).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{canonical_extensions, from_boundary_operator};
    use crate::matrix::RationalMatrix;
    use std::f64::consts::PI;

    fn unit(n: usize) -> TripletSpec {
        TripletSpec::unit(n).unwrap()
    }

    fn robin() -> ExtensionParams {
        ExtensionParams::new(-&RationalMatrix::identity(2), RationalMatrix::identity(2))
    }

    /// Negative eigenvalue `-μ²` of `-u''` with `u'(0) = -u(0)`, `u'(1) = u(1)`:
    /// root of `e^μ (μ - 1) = μ + 1`, found by bisection on `(1, 3)`.
    fn robin_oracle() -> f64 {
        let g = |m: f64| m.exp() * (m - 1.0) - (m + 1.0);
        let (mut lo, mut hi) = (1.0, 3.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(lo) * g(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        -(0.5 * (lo + hi)).powi(2)
    }

    #[test]
    fn boundary_matrix_examples() {
        let spec = unit(1);
        let canon = canonical_extensions(&spec).unwrap();
        let tol = 1e-8;
        let m = boundary_matrix(&canon.friedrichs, &spec, PI * PI).unwrap();
        assert_eq!(numerical_nullity(&m, tol), 1);
        assert_eq!(boundary_nullity(&canon.friedrichs, &spec, PI * PI, tol).unwrap(), 1);
        let m = boundary_matrix(&canon.friedrichs, &spec, 0.0).unwrap();
        assert_eq!(numerical_nullity(&m, tol), 0);
        assert_eq!(boundary_nullity(&canon.friedrichs, &spec, 0.0, tol).unwrap(), 0);
        for n in 1..=3 {
            let spec = unit(n);
            let canon = canonical_extensions(&spec).unwrap();
            assert_eq!(boundary_nullity(&canon.krein, &spec, 0.0, tol).unwrap(), 2 * n);
            // same determinant on either basis
            let (s_a, l_a) = sign_log_det(boundary_matrix(&canon.krein, &spec, -3.0).unwrap());
            let (s_mid, l_mid) = char_det(&canon.krein, &spec, -3.0).unwrap();
            assert_eq!(s_a, s_mid);
            assert!((l_a - l_mid).abs() < 1e-6, "n={n}: {l_a} vs {l_mid}");
        }
    }

    #[test]
    fn char_det_examples() {
        let spec = unit(1);
        let canon = canonical_extensions(&spec).unwrap();
        let (s9, _) = char_det(&canon.friedrichs, &spec, 9.0).unwrap();
        let (s10, _) = char_det(&canon.friedrichs, &spec, 10.0).unwrap();
        assert_eq!(s9 * s10, -1);
        assert_ne!(char_det(&canon.krein, &spec, -1.0).unwrap().0, 0);
        let (a, _) = char_det(&robin(), &spec, -0.1).unwrap();
        let (b, _) = char_det(&robin(), &spec, -6.0).unwrap();
        assert_eq!(a * b, -1);
    }

    #[test]
    fn counts_first_order() {
        let spec = unit(1);
        let cfg = ScanConfig::default_for(&spec);
        let canon = canonical_extensions(&spec).unwrap();
        let r = count_negative_eigenvalues(&canon.krein, &spec, &cfg).unwrap();
        assert_eq!((r.negative_count, r.kernel_dim_at_zero), (0, 2));
        let r = count_negative_eigenvalues(&robin(), &spec, &cfg).unwrap();
        assert_eq!(r.negative_count, 1);
        assert!((r.roots[0].lambda / robin_oracle() - 1.0).abs() < 1e-9);
        assert!(r.warnings.is_empty(), "{:?}", r.warnings);
        let shifted = from_boundary_operator(&canon.krein.c - &RationalMatrix::identity(2));
        assert_eq!(count_negative_eigenvalues(&shifted, &spec, &cfg).unwrap().negative_count, 2);
    }

    #[test]
    fn shallow_floor_warns() {
        let spec = unit(1);
        let cfg = ScanConfig { lambda_min: -0.01, ..ScanConfig::default_for(&spec) };
        let r = count_negative_eigenvalues(&robin(), &spec, &cfg).unwrap();
        assert_eq!(r.negative_count, 0);
        assert!(r.warnings.iter().any(|w| w.contains("lower bound")));
    }

    #[test]
    fn kernel_dimension_examples() {
        for n in 1..=3 {
            let spec = unit(n);
            let canon = canonical_extensions(&spec).unwrap();
            assert_eq!(kernel_dimension_at_zero(&canon.krein, &spec).unwrap(), 2 * n);
            assert_eq!(kernel_dimension_at_zero(&canon.friedrichs, &spec).unwrap(), 0);
        }
        let spec = unit(1);
        let shifted = from_boundary_operator(&crate::triplet::build_bk(&spec).unwrap() - &RationalMatrix::identity(2));
        assert_eq!(kernel_dimension_at_zero(&shifted, &spec).unwrap(), 0);
    }

    #[test]
    fn dirichlet_window() {
        let spec = unit(1);
        let cfg = ScanConfig::default_for(&spec);
        let canon = canonical_extensions(&spec).unwrap();
        let roots = positive_eigenvalues_in(&canon.friedrichs, &spec, 1.0, 100.0, &cfg).unwrap();
        assert_eq!(roots.len(), 3);
        for (k, r) in roots.iter().enumerate() {
            let exact = ((k + 1) as f64 * PI).powi(2);
            assert!((r.lambda / exact - 1.0).abs() < 1e-6);
            assert_eq!(r.nullity, 1);
        }
        let empty = positive_eigenvalues_in(&canon.friedrichs, &spec, 1.0, PI * PI - 0.01, &cfg).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn config_validation() {
        let spec = unit(1);
        let base = ScanConfig::default_for(&spec);
        assert_eq!(base.lambda_min, -1e4);
        for bad in [
            ScanConfig { lambda_min: 1.0, ..base },
            ScanConfig { grid_points: 8, ..base },
            ScanConfig { bisect_tol: 0.5, ..base },
            ScanConfig { nullity_tol: 0.0, ..base },
        ] {
            assert!(bad.validate().is_err());
        }
    }
}
