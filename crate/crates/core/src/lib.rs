//! Krein boundary operators for `(-1)^n d^{2n}/dx^{2n}` on a finite interval.
//!
//! The exact side ([`triplet`], [`classify`], [`identities`]) works over
//! arbitrary-precision rationals: it builds the transport matrix `T`, the
//! Krein operator `B_K` with `Γ1 f = B_K Γ0 f`, and counts negative squares of
//! a self-adjoint extension `A_{C,D}` as the number of negative eigenvalues of
//! `C Dᵀ - D B_K Dᵀ`. The floating-point side ([`weyl`], [`spectral`])
//! evaluates the Weyl function and counts eigenvalues by shooting, as an
//! independent check on the exact results.

// `!(x < 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod error;
pub mod expm;
pub mod identities;
pub mod inertia;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod render;
pub mod spectral;
pub mod triplet;
pub mod verify;
pub mod weyl;

pub use classify::{
    canonical_extensions, classification_matrix, negative_squares, validate_cd, ClassificationReport,
    ExtensionInput, ExtensionParams, PosDefVerdict, Violation,
};
pub use error::{Error, Result};
pub use identities::{verify_selfadjoint_identities, IdentityReport};
pub use inertia::{inertia, InertiaTriple};
pub use matrix::RationalMatrix;
pub use poly::{polynomial_jet, Polynomial};
pub use rational::Rational;
pub use spectral::{
    boundary_matrix, char_det, count_negative_eigenvalues, kernel_dimension_at_zero, positive_eigenvalues_in,
    ScanConfig, ScanReport,
};
pub use triplet::{
    build_bk, build_blocks, build_t, exact_weyl_at_zero, gamma_matrices, green_identity_check,
    second_order_rk_crosscheck, GammaMaps, TripletSpec,
};
pub use weyl::{fundamental_matrix, weyl_limit_scan, weyl_m, WeylSample};
