//! Exact-arithmetic engine for Chern numbers and Hirzebruch genera of
//! explicitly modeled compact complex manifolds and formal bordism classes.
//!
//! The crate verifies, at desk scale and with rational arithmetic throughout,
//! the classical identities tying complex bordism to Jacobi forms:
//! Weierstrass and discriminant identities for the q-expansions, flop
//! invariance of the complex elliptic genus, the divisibility profile of the
//! power-sum numbers of twisted projective bundles, and the kernel structure
//! of the chi_y genus.

pub mod series;
pub mod jacobi;
pub mod cohomology;
pub mod bordism;
pub mod genera;
pub mod flops;
pub mod expr;
pub mod delta;
pub mod verify;

pub use series::{GSeries, Rational, SeriesError, YLaurent};
