//! Self-adjoint extensions `A_{C,D} = A* | ker(D Γ1 - C Γ0)` and their
//! negative-squares count, read off from the inertia of `C Dᵀ - D B_K Dᵀ`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inertia::{inertia, InertiaTriple};
use crate::matrix::RationalMatrix;
use crate::rational::{self, Rational};
use crate::triplet::{build_bk, TripletSpec};

/// Boundary-condition parameters `(C, D)`, both `2n x 2n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionParams {
    #[serde(rename = "C")]
    pub c: RationalMatrix,
    #[serde(rename = "D")]
    pub d: RationalMatrix,
}

impl ExtensionParams {
    pub fn new(c: RationalMatrix, d: RationalMatrix) -> Self {
        Self { c, d }
    }

    pub fn dim(&self) -> usize {
        self.c.rows()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `C Dᵀ ≠ D Cᵀ`.
    NotSelfAdjoint { row: usize, col: usize },
    /// `[C | D]` has rank below `2n`, i.e. `det(C Cᵀ + D Dᵀ) = 0`.
    RankDeficient { rank: usize, required: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotSelfAdjoint { row, col } => {
                write!(f, "C D* != D C* (first difference at entry ({}, {}))", row + 1, col + 1)
            }
            Violation::RankDeficient { rank, required } => {
                write!(f, "rank [C | D] = {rank} < {required}, so det(CC* + DD*) = 0")
            }
        }
    }
}

/// Checks the dimensions, then both parametrization conditions exactly.
/// `Ok(violations)` is empty when the pair is admissible.
pub fn validate_cd(params: &ExtensionParams) -> Result<Vec<Violation>> {
    let (c, d) = (&params.c, &params.d);
    c.require_square()?;
    d.require_square()?;
    if c.rows() != d.rows() {
        return Err(Error::DimensionMismatch {
            expected: format!("D of size {0}x{0}", c.rows()),
            found: format!("{}x{}", d.rows(), d.cols()),
        });
    }
    let mut violations = Vec::new();
    let lhs = c * &d.transpose();
    let rhs = d * &c.transpose();
    if let Some((row, col)) = first_difference(&lhs, &rhs) {
        violations.push(Violation::NotSelfAdjoint { row, col });
    }
    let rank = c.hstack(d)?.rank();
    if rank < c.rows() {
        violations.push(Violation::RankDeficient { rank, required: c.rows() });
    }
    Ok(violations)
}

fn first_difference(x: &RationalMatrix, y: &RationalMatrix) -> Option<(usize, usize)> {
    (0..x.rows()).flat_map(|i| (0..x.cols()).map(move |j| (i, j))).find(|&(i, j)| x[(i, j)] != y[(i, j)])
}

fn require_valid(params: &ExtensionParams, spec: &TripletSpec) -> Result<()> {
    if params.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("C and D of size {0}x{0} for n = {1}", spec.dim(), spec.n()),
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

/// `C Dᵀ - D B_K Dᵀ`.
pub fn classification_matrix(params: &ExtensionParams, spec: &TripletSpec) -> Result<RationalMatrix> {
    require_valid(params, spec)?;
    classification_matrix_with(params, &build_bk(spec)?)
}

pub(crate) fn classification_matrix_with(params: &ExtensionParams, bk: &RationalMatrix) -> Result<RationalMatrix> {
    let dt = params.d.transpose();
    let out = &(&params.c * &dt) - &(&(&params.d * bk) * &dt);
    out.require_symmetric()
        .map_err(|e| Error::Defect(format!("classification matrix must be symmetric: {e}")))?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PosDefVerdict {
    PositiveDefinite,
    NotPositiveDefinite,
    /// `D` is singular; the matrix test does not decide positive definiteness then.
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub kappa: usize,
    pub classifier_inertia: InertiaTriple,
    pub nonnegative: bool,
    pub posdef_verdict: PosDefVerdict,
}

pub fn negative_squares(params: &ExtensionParams, spec: &TripletSpec) -> Result<ClassificationReport> {
    let matrix = classification_matrix(params, spec)?;
    let classifier_inertia = inertia(&matrix)?;
    let kappa = classifier_inertia.n_neg;
    let posdef_verdict = if params.d.det_sign()? == 0 {
        PosDefVerdict::Indeterminate
    } else if classifier_inertia.is_positive_definite() {
        PosDefVerdict::PositiveDefinite
    } else {
        PosDefVerdict::NotPositiveDefinite
    };
    Ok(ClassificationReport { kappa, classifier_inertia, nonnegative: kappa == 0, posdef_verdict })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalExtensions {
    /// `C = B_K`, `D = I`.
    pub krein: ExtensionParams,
    /// `C = I`, `D = 0`: the Dirichlet realization `ker Γ0`.
    pub friedrichs: ExtensionParams,
}

pub fn canonical_extensions(spec: &TripletSpec) -> Result<CanonicalExtensions> {
    let d = spec.dim();
    Ok(CanonicalExtensions {
        krein: ExtensionParams::new(build_bk(spec)?, RationalMatrix::identity(d)),
        friedrichs: ExtensionParams::new(RationalMatrix::identity(d), RationalMatrix::zeros(d, d)),
    })
}

/// `(B, I)` for a symmetric `B`, i.e. the extension `Γ1 = B Γ0`.
pub fn from_boundary_operator(b: RationalMatrix) -> ExtensionParams {
    let d = b.rows();
    ExtensionParams::new(b, RationalMatrix::identity(d))
}

/// Problem instance plus extension parameters, as stored in input files:
/// `{"n": .., "a": "p/q", "b": "p/q", "C": matrix, "D": matrix}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionInput {
    pub spec: TripletSpec,
    pub params: ExtensionParams,
}

#[derive(Deserialize, Serialize)]
struct InputRepr {
    n: usize,
    a: serde_json::Value,
    b: serde_json::Value,
    #[serde(rename = "C")]
    c: RationalMatrix,
    #[serde(rename = "D")]
    d: RationalMatrix,
}

impl ExtensionInput {
    /// Parses and validates the input file contents.
    pub fn from_json(text: &str) -> Result<Self> {
        let repr: InputRepr = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let a = literal(&repr.a, "a")?;
        let b = literal(&repr.b, "b")?;
        let spec = TripletSpec::new(repr.n, a, b)?;
        let params = ExtensionParams::new(repr.c, repr.d);
        require_valid(&params, &spec)?;
        Ok(Self { spec, params })
    }

    pub fn to_json(&self) -> String {
        let repr = InputRepr {
            n: self.spec.n(),
            a: rational::format(self.spec.a()).into(),
            b: rational::format(self.spec.b()).into(),
            c: self.params.c.clone(),
            d: self.params.d.clone(),
        };
        serde_json::to_string_pretty(&repr).expect("input serializes")
    }
}

fn literal(v: &serde_json::Value, field: &str) -> Result<Rational> {
    match v {
        serde_json::Value::String(s) => rational::parse(s),
        serde_json::Value::Number(num) if num.is_i64() => Ok(rational::int(num.as_i64().unwrap_or_default())),
        other => Err(Error::Parse(format!("field '{field}' must be a rational string or integer, got {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn unit(n: usize) -> TripletSpec {
        TripletSpec::unit(n).unwrap()
    }

    #[test]
    fn validation_examples() {
        let i2 = RationalMatrix::identity(2);
        let z2 = RationalMatrix::zeros(2, 2);
        assert!(validate_cd(&ExtensionParams::new(i2.clone(), z2.clone())).unwrap().is_empty());
        let v = validate_cd(&ExtensionParams::new(z2.clone(), z2.clone())).unwrap();
        assert_eq!(v, vec![Violation::RankDeficient { rank: 0, required: 2 }]);
        let bk = build_bk(&unit(1)).unwrap();
        assert!(validate_cd(&from_boundary_operator(bk)).unwrap().is_empty());
        let asym = RationalMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        let v = validate_cd(&ExtensionParams::new(asym, i2)).unwrap();
        assert_eq!(v, vec![Violation::NotSelfAdjoint { row: 0, col: 1 }]);
    }

    #[test]
    fn validation_dimension_mismatch() {
        let p = ExtensionParams::new(RationalMatrix::identity(2), RationalMatrix::identity(3));
        assert!(matches!(validate_cd(&p), Err(Error::DimensionMismatch { .. })));
        let p = ExtensionParams::new(RationalMatrix::identity(4), RationalMatrix::zeros(4, 4));
        assert!(matches!(negative_squares(&p, &unit(1)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn classification_matrix_examples() {
        let spec = unit(1);
        let canon = canonical_extensions(&spec).unwrap();
        assert!(classification_matrix(&canon.krein, &spec).unwrap().is_zero());
        assert!(classification_matrix(&canon.friedrichs, &spec).unwrap().is_zero());
        let robin = ExtensionParams::new(-&RationalMatrix::identity(2), RationalMatrix::identity(2));
        assert_eq!(classification_matrix(&robin, &spec).unwrap(), RationalMatrix::from_i64(&[&[0, -1], &[-1, 0]]));
    }

    #[test]
    fn negative_squares_examples() {
        let spec = unit(1);
        let canon = canonical_extensions(&spec).unwrap();
        let r = negative_squares(&canon.krein, &spec).unwrap();
        assert_eq!((r.kappa, r.nonnegative), (0, true));
        assert_eq!(r.posdef_verdict, PosDefVerdict::NotPositiveDefinite);
        let r = negative_squares(&canon.friedrichs, &spec).unwrap();
        assert_eq!((r.kappa, r.posdef_verdict), (0, PosDefVerdict::Indeterminate));
        let robin = ExtensionParams::new(-&RationalMatrix::identity(2), RationalMatrix::identity(2));
        assert_eq!(negative_squares(&robin, &spec).unwrap().kappa, 1);
        let shifted = from_boundary_operator(&canon.krein.c - &RationalMatrix::identity(2));
        let r = negative_squares(&shifted, &spec).unwrap();
        assert_eq!((r.kappa, r.nonnegative), (2, false));
    }

    #[test]
    fn positive_definite_verdict() {
        // B = B_K + I gives classification matrix I
        let spec = unit(2);
        let bk = build_bk(&spec).unwrap();
        let r = negative_squares(&from_boundary_operator(&bk + &RationalMatrix::identity(4)), &spec).unwrap();
        assert_eq!(r.posdef_verdict, PosDefVerdict::PositiveDefinite);
    }

    #[test]
    fn invalid_params_are_errors() {
        let spec = unit(1);
        let z = RationalMatrix::zeros(2, 2);
        let err = negative_squares(&ExtensionParams::new(z.clone(), z), &spec).unwrap_err();
        assert!(matches!(err, Error::InvalidExtension(ref v) if v.len() == 1));
    }

    #[test]
    fn input_file_roundtrip() {
        let text = r#"{"n": 1, "a": "0", "b": 1,
            "C": {"rows": 2, "cols": 2, "data": [["-1", "0"], ["0", "-1"]]},
            "D": {"rows": 2, "cols": 2, "data": [[1, 0], [0, 1]]}}"#;
        let input = ExtensionInput::from_json(text).unwrap();
        assert_eq!(input.spec.b(), &int(1));
        assert_eq!(ExtensionInput::from_json(&input.to_json()).unwrap(), input);
        let bad = text.replace("\"b\": 1", "\"b\": 0.5");
        assert!(matches!(ExtensionInput::from_json(&bad), Err(Error::Parse(_))));
        let wrong_size = text.replace("\"n\": 1", "\"n\": 2");
        assert!(matches!(ExtensionInput::from_json(&wrong_size), Err(Error::DimensionMismatch { .. })));
    }
}
