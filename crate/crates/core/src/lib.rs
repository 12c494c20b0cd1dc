//! Generalized binomial coefficients in discrete valuation domains.
//!
//! For a discrete valuation domain V with finite residue field F_q, the
//! node-product polynomials F_n built over a representative sequence (u_n)
//! behave like the classical binomial polynomials: F_n(u_m) specializes to
//! C(m, n) when V is the integers localized at p with representatives
//! 0..p-1. This crate evaluates F_n(u_m) exactly in two concrete models
//! (big rationals with p-coprime denominators; rational functions over F_q),
//! computes residues fast through the digit-by-digit factorization, and
//! verifies the counting identities satisfied by the residue-class
//! distribution: the convolution bijection on index sets and the product
//! formula for generating polynomials in Z[x]/(x^{q-1}-1).
//!
//! The `dvdbinom` binary exposes the same functionality as a CLI with text,
//! JSON, CSV and PGM output.

pub mod basis;
pub mod cli;
pub mod domain;
pub mod error;
pub mod fqpoly;
pub mod genpoly;
pub mod residue_field;
pub mod words;

pub use error::{Error, Result};
