//! Exact arithmetic toolkit for local-global invariants of quadratic and
//! hermitian forms, Brauer classes over the rationals, certified number
//! field data, and the family construction/verification engines built on
//! top of them.
//!
//! Everything is computed over exact rationals; no floating point enters
//! any invariant. All public operations are pure functions of their inputs
//! and are safe to call from multiple threads.

pub mod brauer;
pub mod families;
pub mod fieldforge;
pub mod hermform;
pub mod localsym;
pub mod quadform;
pub mod rational;

pub use localsym::{hilbert, legendre, square_class, Place, SquareClass};
pub use quadform::{QFProfile, QuadForm};
pub use rational::Rational;
