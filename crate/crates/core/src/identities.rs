//! Exact verification that `B_K` is symmetric, block by block and entry by entry.
//!
//! With `V = S T2` (a Hankel matrix) the three block identities reduce to
//! symmetry statements about `T1⁻ᵀ V Q` and to `V Q T1 = Q T1⁻ᵀ V`. The entry
//! formulas below use "corner" indexing: `(j, k)` with `j` the column and `k`
//! the row, both counted from the bottom-right corner. That convention is
//! confined to this module.

use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::matrix::RationalMatrix;
use crate::rational::{self, Rational};
use crate::triplet::{build_blocks, Blocks, TripletSpec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub passed: bool,
    /// First failing position or entry, when any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub n: usize,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: &str, detail: Option<String>) {
        self.checks.push(IdentityCheck { name: name.to_string(), passed: detail.is_none(), detail });
    }
}

pub fn verify_selfadjoint_identities(spec: &TripletSpec) -> Result<IdentityReport> {
    verify_identities_for_blocks(&build_blocks(spec), &spec.length())
}

/// Runs every check against the given blocks; `length` is `b - a`.
pub fn verify_identities_for_blocks(blocks: &Blocks, length: &Rational) -> Result<IdentityReport> {
    let Blocks { t1, t2, q, s } = blocks;
    let n = t1.rows();
    let mut report = IdentityReport { n, checks: Vec::new() };

    // A singular T2 or T1 is itself a failure, not an error.
    let (t2_inv, t1_inv) = match (t2.invert(), t1.invert()) {
        (Ok(a), Ok(b)) => (a, b),
        (r2, r1) => {
            report.push("invertibility", Some(format!("T2: {:?}, T1: {:?}", r2.err(), r1.err())));
            return Ok(report);
        }
    };
    let t1_inv_t = t1_inv.transpose();

    let block11 = &(&(q * &t2_inv) * t1) * s;
    let block12 = &(q * &t2_inv) * s;
    let block21 = &(&(&(q * t1) * &t2_inv) * t1) * s;
    let block22 = &(&(q * t1) * &t2_inv) * s;

    report.push("upper-left block Q T2^-1 T1 S is symmetric", asymmetry(&block11));
    report.push("lower-right block Q T1 T2^-1 S is symmetric", asymmetry(&block22));
    report.push("off-diagonal blocks: Q T2^-1 S = (Q T1 T2^-1 T1 S)^T", mismatch(&block12, &block21.transpose()));

    let v = s * t2;
    let v_inv = v.invert()?;
    report.push("V = S T2 is symmetric", asymmetry(&v));
    report.push(
        "V entries v(j,k) = L^(j+k-1)/(j+k-1)!",
        first_corner_failure(n, |j, k| corner(&v, j, k) == &rational::taylor_coefficient(length, j + k - 1)),
    );
    report.push("Q T2^-1 T1 S = Q V^-1 T1^T", mismatch(&block11, &(&(q * &v_inv) * &t1.transpose())));

    // phi(j, k): entries of T1^-T V
    let phi_matrix = &t1_inv_t * &v;
    let phi = |j: usize, k: usize| -> Rational {
        let sum: Rational = (0..k)
            .map(|l| sign(l) * inv_fact_pair(l, j + k - l - 1))
            .sum();
        power(length, j + k - 1) * sum
    };
    let phi_as_sum = |j: usize, k: usize| -> Rational {
        let minus_len = -length;
        (0..k)
            .map(|l| rational::taylor_coefficient(&minus_len, l) * rational::taylor_coefficient(length, j + k - l - 1))
            .sum()
    };
    report.push(
        "phi entry formula matches T1^-T V",
        first_corner_failure(n, |j, k| {
            let direct = corner(&phi_matrix, j, k);
            &phi(j, k) == direct && &phi_as_sum(j, k) == direct
        }),
    );
    report.push(
        "phi reindexed transpose entry",
        first_corner_failure(n, |j, k| {
            let swapped: Rational = (0..j).map(|m| sign(m) * inv_fact_pair(m, j + k - m - 1)).sum();
            let reindexed: Rational =
                (k..j + k).map(|l| sign(j + k - l - 1) * inv_fact_pair(l, j + k - l - 1)).sum();
            let scale = power(length, j + k - 1);
            swapped == reindexed && scale * swapped == phi(k, j)
        }),
    );
    report.push(
        "phi antisymmetry: phi(j,k) - (-1)^(j+k) phi(k,j) = 0",
        first_corner_failure(n, |j, k| (phi(j, k) - sign(j + k) * phi(k, j)).is_zero()),
    );
    report.push("T1^-T V Q is symmetric", asymmetry(&(&phi_matrix * q)));
    report.push(
        "alternating binomial sums vanish",
        first_corner_failure(n, |j, k| {
            let m = j + k - 1;
            let sum: num_bigint::BigInt =
                (0..=m).map(|l| if l % 2 == 0 { rational::binomial(m, l) } else { -rational::binomial(m, l) }).sum();
            sum.is_zero()
        }),
    );

    report.push("lower-right via V: Q T1 T2^-1 S = Q T1 V^-1", mismatch(&block22, &(&(q * t1) * &v_inv)));
    report.push(
        "lower-right via V: V T1^-1 Q = Q (T1^-T V Q)^T Q",
        mismatch(&(&(&v * &t1_inv) * q), &(&(q * &(&phi_matrix * q).transpose()) * q)),
    );
    let vq = &v * q;
    report.push("V Q via phi: V Q = (T1^-T V T1^-1 Q)^T", mismatch(&vq, &(&(&phi_matrix * &t1_inv) * q).transpose()));
    report.push("V Q via phi: V Q = Q T1^-T V T1^-1", mismatch(&vq, &(&(q * &phi_matrix) * &t1_inv)));
    let vqt1 = &vq * t1;
    let q_phi = q * &phi_matrix;
    report.push("V Q T1 = Q T1^-T V", mismatch(&vqt1, &q_phi));

    let psi = |j: usize, k: usize| -> Rational {
        let sum: Rational = (0..j).map(|m| sign(j + m) * inv_fact_pair(m, j + k - m - 1)).sum();
        power(length, j + k - 1) * sum
    };
    let psi_alt = |j: usize, k: usize| -> Rational {
        let sum: Rational = (k..j + k).map(|l| sign(l + 1) * inv_fact_pair(l, j + k - l - 1)).sum();
        power(length, j + k - 1) * sign(k) * sum
    };
    let mu = |j: usize, k: usize| -> Rational {
        let sum: Rational = (0..k).map(|l| sign(l) * inv_fact_pair(l, j + k - l - 1)).sum();
        power(length, j + k - 1) * sign(k) * sum
    };
    report.push(
        "psi entry formulas match V Q T1",
        first_corner_failure(n, |j, k| {
            let direct = corner(&vqt1, j, k);
            &psi(j, k) == direct && &psi_alt(j, k) == direct
        }),
    );
    report.push(
        "mu entry formula matches Q T1^-T V",
        first_corner_failure(n, |j, k| &mu(j, k) == corner(&q_phi, j, k)),
    );
    report.push("psi = mu", first_corner_failure(n, |j, k| psi(j, k) == mu(j, k)));

    Ok(report)
}

/// Entry at corner position: column `j`, row `k`, 1-based from the bottom right.
fn corner(m: &RationalMatrix, j: usize, k: usize) -> &Rational {
    let n = m.rows();
    &m[(n - k, n - j)]
}

fn first_corner_failure(n: usize, mut ok: impl FnMut(usize, usize) -> bool) -> Option<String> {
    for j in 1..=n {
        for k in 1..=n {
            if !ok(j, k) {
                return Some(format!("fails at corner (j={j}, k={k})"));
            }
        }
    }
    None
}

fn asymmetry(m: &RationalMatrix) -> Option<String> {
    m.symmetry_defect().map(|(i, j)| format!("entry ({}, {}) differs from its transpose", i + 1, j + 1))
}

fn mismatch(x: &RationalMatrix, y: &RationalMatrix) -> Option<String> {
    (0..x.rows())
        .flat_map(|i| (0..x.cols()).map(move |j| (i, j)))
        .find(|&(i, j)| x[(i, j)] != y[(i, j)])
        .map(|(i, j)| {
            format!(
                "entry ({}, {}): {} vs {}",
                i + 1,
                j + 1,
                rational::format(&x[(i, j)]),
                rational::format(&y[(i, j)])
            )
        })
}

fn sign(k: usize) -> Rational {
    if k.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

fn power(x: &Rational, k: usize) -> Rational {
    Pow::pow(x, k as u32)
}

/// `1 / (p! q!)`
fn inv_fact_pair(p: usize, q: usize) -> Rational {
    Rational::new(One::one(), rational::factorial(p) * rational::factorial(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_identities_hold_small_n() {
        for n in 1..=4 {
            let report = verify_selfadjoint_identities(&TripletSpec::unit(n).unwrap()).unwrap();
            assert!(report.all_passed(), "n={n}: {:?}", report.failures().collect::<Vec<_>>());
        }
        let report = verify_selfadjoint_identities(&TripletSpec::parse(3, "-7/3", "5/2").unwrap()).unwrap();
        assert!(report.all_passed());
    }

    #[test]
    fn corrupted_q_is_detected() {
        let spec = TripletSpec::unit(2).unwrap();
        let mut blocks = build_blocks(&spec);
        blocks.q[(0, 0)] = -blocks.q[(0, 0)].clone();
        let report = verify_identities_for_blocks(&blocks, &spec.length()).unwrap();
        assert!(!report.all_passed());
        assert!(report.failures().any(|c| c.name.starts_with("upper-left block")));
    }

    #[test]
    fn binomial_sum_example() {
        // 1 - 3 + 3 - 1
        let s: i64 = (0..=3).map(|l| if l % 2 == 0 { 1 } else { -1 } * rational::binomial(3, l).to_string().parse::<i64>().unwrap()).sum();
        assert_eq!(s, 0);
    }
}
