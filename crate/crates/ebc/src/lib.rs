//! Generalized Euler-Briggs constants at arbitrary precision.
//!
//! The library evaluates the constants `gamma(Omega, a, q)` — the constant
//! terms in the asymptotics of harmonic sums restricted to a residue class
//! `a mod q` and sieved by a finite prime set `Omega` — by two independent
//! routes: a closed form in Dirichlet L-values, Euler's constant and prime
//! logarithms, and the defining limit itself accelerated with Euler-Maclaurin
//! tail corrections. On top of that sit identity verifiers and a PSLQ
//! integer-relation engine for desk-scale independence probes.
//!
//! Modules:
//! - [`arith`]: precision contexts, big reals, and the constants pi, gamma, log.
//! - [`characters`]: exact Dirichlet-character arithmetic (roots of unity).
//! - [`lfunctions`]: L(1, chi) by a digamma closed form and by a series oracle.
//! - [`constants`]: the Euler-Briggs family, direct-sum oracle, identity checks.
//! - [`relations`]: PSLQ searches, independence probes, irreducible families.
//! - [`cache`] and [`cli`]: persistent digit cache and the command front end.

pub mod arith;
pub mod cache;
pub mod characters;
pub mod cli;
pub mod constants;
mod error;
pub mod lfunctions;
pub mod relations;
pub(crate) mod summation;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
