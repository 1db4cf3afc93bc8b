//! Exact computer algebra for two-valued groups.
//!
//! A two-valued multiplication assigns to a pair (x, y) the unordered pair
//! of roots z of a quadratic `A(x,y)·z² + B(x,y)·z + C(x,y) = 0`. This crate
//! constructs the symmetric polynomial families realizing such structures —
//! the three-parameter family
//! `B_{a₁,a₂,a₃} = (σ₁ − a₂σ₃)² − 4(1 + a₃σ₃)(σ₂ + a₁σ₃)` and the
//! discriminant family `D_{a,b,c} = (σ₂ − b)² − 4(σ₃ + c)(σ₁ + a)` of a
//! cubic `t³ + at² + bt + c` — and verifies the group axioms and the
//! identities tying the two families together, entirely in exact arithmetic.
//!
//! Module map:
//! - [`exactnum`]: rationals, odd-prime fields 𝔽_q, cyclotomic fields ℚ(ζ_N);
//! - [`mpoly`]: sparse multivariate polynomials, resultants, discriminants,
//!   substitution, divisibility, gcd, symmetric rewriting;
//! - [`families`]: the polynomial families, coset laws, N-valued power
//!   constructions, and named toy examples;
//! - [`grouplaw`]: identity/inverse/associativity/discriminant-splitting
//!   checks and the ℙ¹-extendability criterion;
//! - [`elliptic`]: elliptic curves, coset multiplication by the involution,
//!   and chord–tangent cross-checks;
//! - [`hecke`]: the finite-field operator realization on ℙ¹(𝔽_q) and its
//!   commutative algebra;
//! - [`starinv`]: the ⋆-involution on symmetric functions, Möbius changes of
//!   coordinates, and the fixed-locus factor checks;
//! - [`cli`]: the `twoval` command-line interface.

pub mod cli;
pub mod elliptic;
pub mod exactnum;
pub mod families;
pub mod grouplaw;
pub mod hecke;
pub mod mpoly;
pub mod starinv;
