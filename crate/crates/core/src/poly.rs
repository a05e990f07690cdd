//! Polynomials with exact rational coefficients.

use num_traits::{One, Pow, Zero};

use crate::rational::{self, Rational};

/// Coefficients in ascending degree; trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coefficients: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coefficients: Vec<Rational>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        Self { coefficients }
    }

    pub fn zero() -> Self {
        Self { coefficients: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(degree: usize) -> Self {
        let mut c = vec![Rational::zero(); degree + 1];
        c[degree] = Rational::one();
        Self { coefficients: c }
    }

    /// `(x - center)^k / k!`
    pub fn shifted_taylor_basis(k: usize, center: &Rational) -> Self {
        let inv_fact = Rational::new(One::one(), rational::factorial(k));
        let coefficients = (0..=k)
            .map(|i| {
                let binom = Rational::from_integer(rational::binomial(k, i));
                let pow: Rational = Pow::pow(-center, (k - i) as u32);
                binom * pow * &inv_fact
            })
            .collect();
        Self::new(coefficients)
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coefficients.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rational::int(k as i64))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, order: usize) -> Self {
        (0..order).fold(self.clone(), |p, _| p.derivative())
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut c = vec![Rational::zero()];
        c.extend(self.coefficients.iter().enumerate().map(|(k, v)| v / rational::int(k as i64 + 1)));
        Self::new(c)
    }

    /// Exact integral over `[a, b]`.
    pub fn integrate(&self, a: &Rational, b: &Rational) -> Rational {
        let p = self.antiderivative();
        p.eval(b) - p.eval(a)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Rational::zero(); self.coefficients.len() + rhs.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in rhs.coefficients.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coefficients.iter().map(|c| c * s).collect())
    }

    /// `(p(x0), p'(x0), ..., p^(order-1)(x0))`.
    pub fn jet(&self, point: &Rational, order: usize) -> Vec<Rational> {
        let mut out = Vec::with_capacity(order);
        let mut p = self.clone();
        for _ in 0..order {
            out.push(p.eval(point));
            p = p.derivative();
        }
        out
    }
}

/// Exact derivatives of `p` at `point`, ascending.
pub fn polynomial_jet(p: &Polynomial, point: &Rational, order: usize) -> Vec<Rational> {
    p.jet(point, order)
}
