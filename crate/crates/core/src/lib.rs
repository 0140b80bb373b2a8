//! Exact Padé approximants for the cubic binomial function `(1 - 1/z)^{1/3}/z`,
//! the length and Mahler-measure bounds they satisfy, and the explicit
//! pipeline that turns them into an upper bound for the number of solutions
//! of the two-variable S-unit equation `λx + μy = 1`.
//!
//! Layout:
//! - [`exact`], [`poly`], [`series`]: exact rational scalars, polynomials and
//!   truncated Laurent series.
//! - [`pade`]: the approximants `P_{n,0}`, `P_{n,1}` and derived `A_n`, `B_n`,
//!   `V_n`, `W_n`, with exact identity checks.
//! - [`bounds`]: lengths, Mahler measure, and sampled archimedean bounds.
//! - [`pipeline`]: extended-precision evaluation of the counting bound.
//! - [`optimizer`]: parameter grid search and the comparison certificates.
//! - [`verify`]: the verification suites driven by the CLI.

pub mod bounds;
pub mod exact;
pub mod optimizer;
pub mod pade;
pub mod par;
pub mod pipeline;
pub mod poly;
pub mod series;
pub mod verify;

pub use exact::ExactRational;
pub use pade::{build, PadePair};
pub use par::Execution;
pub use poly::RationalPolynomial;
pub use series::TruncatedSeries;
