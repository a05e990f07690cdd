//! The exact self-check suite run by `krein verify`.

use serde::Serialize;

use crate::identities::verify_identities_for_blocks;
use crate::inertia::inertia;
use crate::matrix::RationalMatrix;
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::triplet::{
    bk_from_blocks, build_blocks, build_t, exact_weyl_at_zero, gamma_matrices, green_identity_check,
    second_order_rk_crosscheck, stacked_jet, BoundaryJet, Endpoint, TripletSpec,
};

/// Deliberate corruption for checking that the suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Negates the first diagonal entry of `Q`.
    FlipQSign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteCheck {
    pub n: usize,
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub all_passed: bool,
    pub checks: Vec<SuiteCheck>,
}

/// Runs every exact check for `n = 1..=n_max` on `(a, b)`.
pub fn run_suite(n_max: usize, a: &Rational, b: &Rational, fault: Option<Fault>) -> crate::Result<SuiteReport> {
    let mut checks = Vec::new();
    for n in 1..=n_max {
        let spec = TripletSpec::new(n, a.clone(), b.clone())?;
        checks.extend(checks_for(&spec, fault)?);
    }
    let all_passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport { all_passed, checks })
}

fn checks_for(spec: &TripletSpec, fault: Option<Fault>) -> crate::Result<Vec<SuiteCheck>> {
    let n = spec.n();
    let mut out = Vec::new();
    let mut push = |name: &str, detail: Option<String>| {
        out.push(SuiteCheck { n, name: name.into(), passed: detail.is_none(), detail });
    };

    let mut blocks = build_blocks(spec);
    if fault == Some(Fault::FlipQSign) {
        blocks.q[(0, 0)] = -blocks.q[(0, 0)].clone();
    }

    let identities = verify_identities_for_blocks(&blocks, &spec.length())?;
    let failed: Vec<String> = identities.failures().map(|c| c.name.clone()).collect();
    push("self-adjointness identities", (!failed.is_empty()).then(|| failed.join("; ")));

    let bk = bk_from_blocks(&blocks)?;
    push("B_K symmetric", bk.symmetry_defect().map(|(i, j)| format!("entry ({}, {})", i + 1, j + 1)));

    let m0 = exact_weyl_at_zero(spec)?;
    push("M(0) from polynomial solutions equals B_K", (m0 != bk).then(|| "matrices differ".to_string()));

    let t = build_t(spec);
    let transport_failure = (0..spec.dim()).find(|&m| {
        let p = Polynomial::monomial(m);
        let at_a = BoundaryJet::of_polynomial(spec, &p, Endpoint::A).descending();
        let at_b = BoundaryJet::of_polynomial(spec, &p, Endpoint::B).descending();
        t.mul_vec(&at_a).map_or(true, |v| v != at_b)
    });
    push("Taylor transport by T", transport_failure.map(|m| format!("fails for x^{m}")));

    let green_failure = (0..=spec.dim() + 3)
        .flat_map(|p| (0..=spec.dim() + 3).map(move |q| (p, q)))
        .find(|&(p, q)| {
            let (lhs, rhs) = green_identity_check(spec, &Polynomial::monomial(p), &Polynomial::monomial(q));
            lhs != rhs
        });
    push("Green identity on monomials", green_failure.map(|(p, q)| format!("fails for (x^{p}, x^{q})")));

    push("Krein domain contains ker A*", kernel_membership_failure(spec, &bk).map(|m| format!("fails for x^{m}")));

    let nullity = match inertia(&bk) {
        Ok(i) if i.n_zero == n => None,
        Ok(i) => Some(format!("nullity {} != {n}", i.n_zero)),
        Err(e) => Some(e.to_string()),
    };
    push("nullity of B_K equals n", nullity);

    if n == 1 {
        let rk = second_order_rk_crosscheck(spec.a(), spec.b())?;
        push("R_K equals S T S", (!rk.equal).then(|| "matrices differ".to_string()));
    }
    Ok(out)
}

/// First monomial degree `m < 2n` with `Γ1 x^m ≠ B_K Γ0 x^m`.
pub fn kernel_membership_failure(spec: &TripletSpec, bk: &RationalMatrix) -> Option<usize> {
    let gamma = gamma_matrices(spec);
    (0..spec.dim()).find(|&m| {
        let jet = stacked_jet(spec, &Polynomial::monomial(m));
        match gamma.apply(&jet) {
            Ok((g0, g1)) => bk.mul_vec(&g0).map_or(true, |v| v != g1),
            Err(_) => true,
        }
    })
}

/// Human-readable one-line-per-check summary.
pub fn summary(report: &SuiteReport) -> String {
    let mut out = String::new();
    for c in &report.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        out.push_str(&format!("[{status}] n={} {}", c.n, c.name));
        if let Some(d) = &c.detail {
            out.push_str(&format!(" ({d})"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{self, int};

    #[test]
    fn suite_passes_and_detects_fault() {
        let ok = run_suite(3, &int(0), &int(1), None).unwrap();
        assert!(ok.all_passed, "{}", summary(&ok));
        let bad = run_suite(2, &int(0), &int(1), Some(Fault::FlipQSign)).unwrap();
        assert!(!bad.all_passed);
        assert!(bad.checks.iter().any(|c| !c.passed && c.name.starts_with("M(0)")));
    }

    #[test]
    fn odd_interval() {
        let r = run_suite(2, &rational::frac(-5, 3), &rational::frac(7, 4), None).unwrap();
        assert!(r.all_passed, "{}", summary(&r));
    }
}
