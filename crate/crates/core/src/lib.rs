//! Exact computer algebra on the noncommutative formal disk.
//!
//! The ground ring is `ℚ`. Series in the free algebra `ℚ⟨⟨x_1..x_n⟩⟩` are
//! truncated at a fixed total degree, and every identity checked here holds
//! exactly modulo that degree.
//!
//! * [`series`], [`word`], [`comm`]: truncated noncommutative and commutative series.
//! * [`lcs`]: lower central series, graded quotients, truncated ideals.
//! * [`aut`], [`der`]: augmented automorphisms and derivations.
//! * [`form`], [`dga`], [`conn`], [`chart`]: base forms, the fiberwise
//!   tensor DGA, twisted connections, GK forms and gauges.
//! * [`atiyah`]: the quadratic part `ω₂` and chart-level coboundaries.
//! * [`oracle`]: dense reference implementations for tests.
//!
//! Kernels that fan out take an [`Execution`]; with the default `parallel`
//! feature they run on rayon.

pub mod atiyah;
pub mod aut;
pub mod chart;
pub mod comm;
pub mod conn;
pub mod der;
pub mod dga;
pub mod error;
pub mod exec;
pub mod form;
pub mod io;
pub mod lcs;
pub mod limits;
pub mod linalg;
pub mod oracle;
pub mod random;
pub mod series;
pub mod text;
pub mod word;

pub use error::{Error, Result};
pub use exec::Execution;
