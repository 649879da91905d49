//! Verified Binomial-to-Gaussian approximation machinery.
//!
//! The crate evaluates a refined continuity correction for Binomial tail
//! probabilities, a sharpened quantile-coupling inequality in the bulk, and
//! the supporting local limit expansion — and machine-checks every explicit
//! numeric bound against exact rational or high-precision oracles:
//!
//! * [`binomial`] — exact rational pmf/cdf engine plus an incomplete-beta
//!   real-valued path for large m;
//! * [`gauss`], [`quad`] — normal density/tails, tail moments, and adaptive
//!   Gauss-Kronrod quadrature used as an independent oracle;
//! * [`stirling`], [`bigfloat`] — the factorial expansion residual measured
//!   in 256-bit fixed-point arithmetic;
//! * [`llt`] — the local limit expansion with its explicit envelope;
//! * [`correction`] — the three-tier correction c*, the four tail
//!   approximations, admissibility of m, and the x = 1/2 corollary;
//! * [`coupling`] — the quantile coupling, its residual bound, the cubic
//!   inversion, and the deterministic residual series;
//! * [`constants`] — numeric verification of the explicit sup-norm and
//!   Riemann-sum constants;
//! * [`report`] — flat verification records with CSV/JSON output.

pub mod bigfloat;
pub mod binomial;
pub mod constants;
pub mod correction;
pub mod coupling;
pub mod error;
pub mod gauss;
pub mod llt;
pub mod quad;
pub mod report;
pub mod stirling;

pub use binomial::BinomialModel;
pub use error::{Error, Result};
pub use report::{Provenance, VerificationRecord, VerificationReport};
