//! Approximation numbers of composition operators `f ↦ f∘φ` on Dirichlet-type spaces.
//!
//! A symbol φ is parsed from a string ([`SymbolMap`]), its powers are expanded into Taylor
//! coefficients ([`series`]), the operator is truncated to an `N × N` matrix with a certified
//! error radius ([`opmatrix`]) and its singular values are compared with decay laws
//! ([`analysis`]). [`geometry`] holds the planar measures of the image domain (areas near the
//! boundary and inside Carleson windows) and [`cli`] the `compop` binary.
//!
//! The examples directory has one program per piece:
//!
//! | example | shows |
//! |---|---|
//! | `symbols` | parsing, evaluation, sup norm, `[φ]`, the cusp map |
//! | `power_series` | coefficients of `χ^k`, norms of powers |
//! | `diagonal_spectrum` | `φ = rz` against `a_n = r^n` |
//! | `cusp_spectrum` | certified spectrum of the cusp operator |
//! | `cusp_area` | exact and Monte Carlo areas near the cusp |
//! | `zinc_bound` | area-based upper bound on `a_n` |
//! | `blaschke` | window certificates for `|B|² dA` |
//! | `decay_fit` | geometric / root-n / n-over-log-n model selection |
//! | `bound_calculus` | concave majorant and bound chain |
//! | `pipeline` | a configured run writing CSV, JSON and a summary |

pub mod analysis;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod opmatrix;
pub mod quad;
pub mod series;
pub mod symbols;

pub use error::{Error, Result};
pub use symbols::SymbolMap;
