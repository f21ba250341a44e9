//! Desk-scale computational companion to the study of primes in arithmetic
//! progressions in the presence of an exceptional real character.
//!
//! The crate computes every finite object in that argument exactly and checks
//! the identities that tie them together:
//!
//! - [`arith`]: smallest-prime-factor sieve, Λ, μ, φ, τ, τ₃, Dirichlet
//!   convolution and Chebyshev sums over progressions;
//! - [`characters`]: real primitive characters `(d|·)`, Gauss sums and
//!   short character sums over sub-progressions;
//! - [`lfunctions`]: `L(s, χ)` on the real axis, zero scans and sifted Euler
//!   products;
//! - [`sieve_weights`]: upper-bound beta-sieve weights and their fundamental
//!   lemma checks;
//! - [`kloosterman`]: Kloosterman sums, the Weil bound and the exact
//!   exponential-sum decomposition of the short double counts `N(K, L)`;
//! - [`progression_sums`]: sums of `λ = 1∗χ` and `λ′ = χ∗log`, the hyperbola
//!   estimates and the Δ / S₁ / S₂ decomposition of ψ(x; q, a);
//! - [`experiment`]: configuration, suites and CSV output used by the CLI.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod cache;
pub mod calibration;
pub mod characters;
pub mod error;
pub mod experiment;
pub mod kloosterman;
pub mod lfunctions;
pub mod modular;
pub mod progression_sums;
pub mod sieve_weights;
pub mod sum;

pub use arith::{ArithKind, ArithSequence, FactorTable};
pub use characters::RealPrimitiveCharacter;
pub use error::{Error, Result};
