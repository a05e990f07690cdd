//! The boundary triplet for `(-1)^n d^{2n}/dx^{2n}` on `(a, b)` and the
//! exact Krein boundary operator `B_K`.
//!
//! Conventions: `Γ0`, `Γ1` and `B_K` act on the concatenation of ascending
//! jets `(f(a), ..., f^(2n-1)(a), f(b), ..., f^(2n-1)(b))`. The transport
//! matrix `T` maps *descending* jets, `(f^(2n-1), ..., f)` at `a` to the same
//! at `b`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::poly::Polynomial;
use crate::rational::{self, Rational};

/// Problem instance: half-order `n` and endpoints `a < b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripletSpec {
    n: usize,
    #[serde(with = "rational::serde_str")]
    a: Rational,
    #[serde(with = "rational::serde_str")]
    b: Rational,
}

impl TripletSpec {
    pub fn new(n: usize, a: Rational, b: Rational) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidOrder(n));
        }
        if a >= b {
            return Err(Error::InvalidInterval { a: rational::format(&a), b: rational::format(&b) });
        }
        Ok(Self { n, a, b })
    }

    /// Spec on `(0, 1)`.
    pub fn unit(n: usize) -> Result<Self> {
        Self::new(n, Rational::zero(), Rational::one())
    }

    pub fn parse(n: usize, a: &str, b: &str) -> Result<Self> {
        Self::new(n, rational::parse(a)?, rational::parse(b)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension `2n` of the boundary space.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn length(&self) -> Rational {
        &self.b - &self.a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    A,
    B,
}

/// Ascending derivative values `(f, f', ..., f^(2n-1))` at one endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryJet {
    pub point: Endpoint,
    pub values: Vec<Rational>,
}

impl BoundaryJet {
    pub fn of_polynomial(spec: &TripletSpec, p: &Polynomial, point: Endpoint) -> Self {
        let x = match point {
            Endpoint::A => spec.a(),
            Endpoint::B => spec.b(),
        };
        Self { point, values: p.jet(x, spec.dim()) }
    }

    pub fn descending(&self) -> Vec<Rational> {
        self.values.iter().rev().cloned().collect()
    }
}

/// Jets at `a` then at `b`, the vector the `Γ` maps act on.
pub fn stacked_jet(spec: &TripletSpec, p: &Polynomial) -> Vec<Rational> {
    let mut v = BoundaryJet::of_polynomial(spec, p, Endpoint::A).values;
    v.extend(BoundaryJet::of_polynomial(spec, p, Endpoint::B).values);
    v
}

/// Toeplitz lower-triangular transport matrix: entry `(i, j) = L^(i-j)/(i-j)!`.
pub fn build_t(spec: &TripletSpec) -> RationalMatrix {
    let len = spec.length();
    let coeffs: Vec<Rational> = (0..spec.dim()).map(|k| rational::taylor_coefficient(&len, k)).collect();
    RationalMatrix::from_fn(spec.dim(), spec.dim(), |i, j| {
        if i >= j {
            coeffs[i - j].clone()
        } else {
            Rational::zero()
        }
    })
}

/// The four `n x n` blocks from which `B_K` is assembled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blocks {
    pub t1: RationalMatrix,
    pub t2: RationalMatrix,
    pub q: RationalMatrix,
    pub s: RationalMatrix,
}

pub fn build_blocks(spec: &TripletSpec) -> Blocks {
    let n = spec.n();
    let len = spec.length();
    let coeffs: Vec<Rational> = (0..spec.dim()).map(|k| rational::taylor_coefficient(&len, k)).collect();
    let t1 = RationalMatrix::from_fn(n, n, |i, j| if i >= j { coeffs[i - j].clone() } else { Rational::zero() });
    let t2 = RationalMatrix::from_fn(n, n, |i, j| coeffs[n + i - j].clone());
    let q_diag: Vec<Rational> =
        (0..n).map(|i| if (n - i).is_multiple_of(2) { Rational::one() } else { -Rational::one() }).collect();
    Blocks { t1, t2, q: RationalMatrix::diag(&q_diag), s: RationalMatrix::reversal(n) }
}

/// `[[Q T2⁻¹ T1 S, -Q T2⁻¹ S], [-Q T1 T2⁻¹ T1 S, Q T1 T2⁻¹ S]]`.
pub fn bk_from_blocks(blocks: &Blocks) -> Result<RationalMatrix> {
    let Blocks { t1, t2, q, s } = blocks;
    let t2_inv = t2
        .invert()
        .map_err(|e| Error::Defect(format!("T2 is provably nonsingular but inversion failed: {e}")))?;
    let q_t2i = q * &t2_inv;
    let t2i_t1 = &t2_inv * t1;
    let t1_t2i = t1 * &t2_inv;
    let top_left = &(&q_t2i * t1) * s;
    let top_right = -&(&q_t2i * s);
    let bottom_left = -&(&(q * &(t1 * &t2i_t1)) * s);
    let bottom_right = &(q * &t1_t2i) * s;
    RationalMatrix::from_blocks(&top_left, &top_right, &bottom_left, &bottom_right)
}

/// Exact Krein boundary operator: `Γ1 f = B_K Γ0 f` on the Krein domain.
pub fn build_bk(spec: &TripletSpec) -> Result<RationalMatrix> {
    bk_from_blocks(&build_blocks(spec))
}

/// Boundary maps as `2n x 4n` matrices acting on [`stacked_jet`] vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaMaps {
    pub gamma0: RationalMatrix,
    pub gamma1: RationalMatrix,
}

impl GammaMaps {
    /// `(Γ0 f, Γ1 f)` for a stacked jet.
    pub fn apply(&self, jet: &[Rational]) -> Result<(Vec<Rational>, Vec<Rational>)> {
        Ok((self.gamma0.mul_vec(jet)?, self.gamma1.mul_vec(jet)?))
    }

    pub fn stacked(&self) -> RationalMatrix {
        self.gamma0.vstack(&self.gamma1).expect("Γ0 and Γ1 share a column count")
    }
}

pub fn gamma_matrices(spec: &TripletSpec) -> GammaMaps {
    let n = spec.n();
    let d = spec.dim();
    let mut gamma0 = RationalMatrix::zeros(d, 2 * d);
    let mut gamma1 = RationalMatrix::zeros(d, 2 * d);
    for j in 0..n {
        gamma0[(j, j)] = Rational::one();
        gamma0[(n + j, d + j)] = Rational::one();
        // row j+1 (1-based): (-1)^(n-j-1) f^(2n-j-1)(a); row n+j+1: (-1)^(n-j) f^(2n-j-1)(b)
        let sign_a = if (n - j - 1).is_multiple_of(2) { Rational::one() } else { -Rational::one() };
        gamma1[(j, d - 1 - j)] = sign_a.clone();
        gamma1[(n + j, 2 * d - 1 - j)] = -sign_a;
    }
    GammaMaps { gamma0, gamma1 }
}

/// `G0(0)`, `G1(0)`: the `Γ` maps applied to the basis `(x-a)^k/k!`, `k < 2n`.
pub fn exact_basis_boundary_values(spec: &TripletSpec) -> (RationalMatrix, RationalMatrix) {
    let d = spec.dim();
    let jets: Vec<Vec<Rational>> =
        (0..d).map(|k| stacked_jet(spec, &Polynomial::shifted_taylor_basis(k, spec.a()))).collect();
    let stacked = RationalMatrix::from_fn(2 * d, d, |i, k| jets[k][i].clone());
    let gamma = gamma_matrices(spec);
    (&gamma.gamma0 * &stacked, &gamma.gamma1 * &stacked)
}

/// `M(0) = G1(0) G0(0)⁻¹`, derived from polynomial solutions of `A* u = 0`
/// independently of the block formula for `B_K`.
pub fn exact_weyl_at_zero(spec: &TripletSpec) -> Result<RationalMatrix> {
    let (g0, g1) = exact_basis_boundary_values(spec);
    let g0_inv = g0
        .invert()
        .map_err(|e| Error::Defect(format!("G0(0) must be invertible (0 is not a Dirichlet eigenvalue): {e}")))?;
    Ok(&g1 * &g0_inv)
}

/// Ascending jet transport at `z = 0`: `W(m, k) = L^(k-m)/(k-m)!` for `k ≥ m`.
pub fn exact_transport(spec: &TripletSpec) -> RationalMatrix {
    let s = RationalMatrix::reversal(spec.dim());
    &(&s * &build_t(spec)) * &s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RkCrossCheck {
    pub rk: RationalMatrix,
    pub sts: RationalMatrix,
    pub equal: bool,
}

/// For `-u''` on `(a, b)`: builds the second-order Krein matrix `R_K` from the
/// solutions `u1 = (x-a)/L`, `u2 = (b-x)/L` and compares it with `S T S`.
pub fn second_order_rk_crosscheck(a: &Rational, b: &Rational) -> Result<RkCrossCheck> {
    let spec = TripletSpec::new(1, a.clone(), b.clone())?;
    let len = spec.length();
    let inv_len = Rational::one() / &len;
    let u1 = Polynomial::new(vec![-a * &inv_len, inv_len.clone()]);
    let u2 = Polynomial::new(vec![b * &inv_len, -inv_len]);
    let (d1, d2) = (u1.derivative(), u2.derivative());
    let (u1a, u1b) = (d1.eval(a), d1.eval(b));
    let (u2a, u2b) = (d2.eval(a), d2.eval(b));
    let scale = Rational::one() / &u1a;
    let rk = RationalMatrix::from_rows(vec![
        vec![-&u2a * &scale, scale.clone()],
        vec![(&u1a * &u2b - &u1b * &u2a) * &scale, &u1b * &scale],
    ])?;
    let s = RationalMatrix::reversal(2);
    let sts = &(&s * &build_t(&spec)) * &s;
    let equal = rk == sts;
    Ok(RkCrossCheck { rk, sts, equal })
}

/// Both sides of the abstract Green identity for polynomial `f`, `g`:
/// `(A*f, g) - (f, A*g)` and `(Γ1 f, Γ0 g) - (Γ0 f, Γ1 g)`.
pub fn green_identity_check(spec: &TripletSpec, f: &Polynomial, g: &Polynomial) -> (Rational, Rational) {
    let order = spec.dim();
    let sign = if spec.n().is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let af = f.nth_derivative(order).scale(&sign);
    let ag = g.nth_derivative(order).scale(&sign);
    let lhs = af.mul(g).integrate(spec.a(), spec.b()) - f.mul(&ag).integrate(spec.a(), spec.b());

    let gamma = gamma_matrices(spec);
    let (f0, f1) = gamma.apply(&stacked_jet(spec, f)).expect("jet length matches Γ");
    let (g0, g1) = gamma.apply(&stacked_jet(spec, g)).expect("jet length matches Γ");
    let dot = |x: &[Rational], y: &[Rational]| -> Rational { x.iter().zip(y).map(|(p, q)| p * q).sum() };
    let rhs = dot(&f1, &g0) - dot(&f0, &g1);
    (lhs, rhs)
}

/// Renders the Krein boundary conditions `jet_desc(b) = T jet_desc(a)` as a LaTeX `cases` block.
pub fn boundary_condition_table(spec: &TripletSpec) -> String {
    let t = build_t(spec);
    let d = spec.dim();
    let a = crate::render::latex_scalar(spec.a());
    let b = crate::render::latex_scalar(spec.b());
    let mut lines = Vec::with_capacity(d);
    for k in 0..d {
        let lhs = format!("{}({b})", derivative_name(d - 1 - k));
        let terms: Vec<String> = (0..=k)
            .map(|m| {
                let coeff = &t[(k, m)];
                let f = format!("{}({a})", derivative_name(d - 1 - m));
                if coeff.is_one() {
                    f
                } else {
                    format!("{}{f}", crate::render::latex_scalar(coeff))
                }
            })
            .collect();
        lines.push(format!("{lhs}={}", terms.join("+")));
    }
    format!("\\begin{{cases}}\n{}\n\\end{{cases}}", lines.join(" \\\\\n"))
}

fn derivative_name(order: usize) -> String {
    match order {
        0 => "f".into(),
        1..=3 => format!("f{}", "'".repeat(order)),
        _ => format!("f^{{({})}}", roman(order)),
    }
}

fn roman(mut v: usize) -> String {
    const TABLE: [(usize, &str); 13] = [
        (1000, "m"),
        (900, "cm"),
        (500, "d"),
        (400, "cd"),
        (100, "c"),
        (90, "xc"),
        (50, "l"),
        (40, "xl"),
        (10, "x"),
        (9, "ix"),
        (5, "v"),
        (4, "iv"),
        (1, "i"),
    ];
    let mut out = String::new();
    for &(value, glyph) in &TABLE {
        while v >= value {
            out.push_str(glyph);
            v -= value;
        }
    }
    out
}
