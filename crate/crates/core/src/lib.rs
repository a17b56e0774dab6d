//! Symbolic verification engine for h-adically truncated quantized
//! enveloping algebras.
//!
//! The scalar ring is [`hseries::HSeries`]: Laurent series in h with exact
//! rational coefficients, truncated at a tracked order so that precision
//! loss is always visible. On top of it sit a noncommutative rewriting
//! kernel with PBW normal forms, the quantized gl_n and sl_n presentations
//! with their Hopf structure, the iterated-coproduct calculus, membership
//! diagnostics for the quantum duality functors, the finite-dimensional
//! Lie bialgebra side, and the quantum orthogonal coideal inside quantum
//! sl_n together with the verification suites exposed by the CLI.

pub mod error;
pub mod exec;
pub mod hopf;
pub mod hseries;
pub mod linalg;
pub mod ncalg;
pub mod uqgl;

pub use error::{Error, Result};
pub use hseries::{HSeries, Q};
