//! Sylvester inertia of symmetric rational matrices.
//!
//! The matrix is reduced by symmetric congruence: a nonzero diagonal entry is
//! used as a 1x1 pivot; when the whole remaining diagonal is zero but some
//! off-diagonal entry `c` is not, the block `[[0, c], [c, 0]]` is used as a
//! 2x2 pivot, which contributes one negative and one positive square. All
//! zero tests are exact.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matrix::RationalMatrix;
use crate::rational::{self, Rational};

/// Eigenvalue sign counts of a symmetric matrix, with multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InertiaTriple {
    pub n_neg: usize,
    pub n_zero: usize,
    pub n_pos: usize,
}

impl InertiaTriple {
    pub fn dim(&self) -> usize {
        self.n_neg + self.n_zero + self.n_pos
    }

    pub fn is_positive_definite(&self) -> bool {
        self.n_neg == 0 && self.n_zero == 0
    }

    pub fn is_nonnegative(&self) -> bool {
        self.n_neg == 0
    }
}

/// Inertia of an exactly symmetric matrix.
pub fn inertia(m: &RationalMatrix) -> Result<InertiaTriple> {
    m.require_square()?;
    m.require_symmetric()?;

    let mut a = m.clone();
    let mut active: Vec<usize> = (0..m.rows()).collect();
    let mut out = InertiaTriple { n_neg: 0, n_zero: 0, n_pos: 0 };

    while !active.is_empty() {
        if let Some(pos) = active.iter().position(|&i| !a[(i, i)].is_zero()) {
            let p = active.swap_remove(pos);
            let d = a[(p, p)].clone();
            match rational::signum(&d) {
                1 => out.n_pos += 1,
                _ => out.n_neg += 1,
            }
            let col: Vec<Rational> = active.iter().map(|&i| a[(i, p)].clone()).collect();
            for (x, &i) in active.iter().enumerate() {
                if col[x].is_zero() {
                    continue;
                }
                let f = &col[x] / &d;
                for (y, &j) in active.iter().enumerate() {
                    if !col[y].is_zero() {
                        a[(i, j)] -= &f * &col[y];
                    }
                }
            }
            continue;
        }

        let pair = active.iter().enumerate().find_map(|(x, &i)| {
            active[x + 1..].iter().find(|&&j| !a[(i, j)].is_zero()).map(|&j| (i, j))
        });
        let Some((p, q)) = pair else {
            out.n_zero += active.len();
            break;
        };
        active.retain(|&i| i != p && i != q);
        out.n_neg += 1;
        out.n_pos += 1;
        let c = a[(p, q)].clone();
        let cp: Vec<Rational> = active.iter().map(|&i| a[(i, p)].clone()).collect();
        let cq: Vec<Rational> = active.iter().map(|&i| a[(i, q)].clone()).collect();
        for (x, &i) in active.iter().enumerate() {
            for (y, &j) in active.iter().enumerate() {
                let t = &cp[x] * &cq[y] + &cq[x] * &cp[y];
                if !t.is_zero() {
                    a[(i, j)] -= t / &c;
                }
            }
        }
    }
    Ok(out)
}
