//! Text renderings of exact matrices: LaTeX `pmatrix` and CSV.

use num_traits::Signed;

use crate::matrix::RationalMatrix;
use crate::rational::{self, Rational};

/// `-\frac{p}{q}`, or a plain integer.
pub fn latex_scalar(r: &Rational) -> String {
    if rational::is_integer(r) {
        return r.numer().to_string();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    format!("{sign}\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
}

pub fn latex_pmatrix(m: &RationalMatrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| m.row(i).iter().map(latex_scalar).collect::<Vec<_>>().join(" & "))
        .collect();
    format!("\\begin{{pmatrix}}\n{}\n\\end{{pmatrix}}", rows.join(" \\\\\n"))
}

/// One line per row, entries in canonical `p/q` form.
pub fn csv(m: &RationalMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(rational::format).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
