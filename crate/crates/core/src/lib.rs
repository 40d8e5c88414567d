//! Exact construction and verification of a pair `(alpha, beta)` whose
//! uniform Littlewood quantity
//!
//! ```text
//! Q * min_{1 <= x < Q} ||alpha x|| * ||beta x||
//! ```
//!
//! stays near `2/(3+sqrt5)` along the Fibonacci numbers `Q = F_n`.
//!
//! The numbers are pinned down by a nested-interval certificate: at each
//! level a numerator `a` coprime to `F_n` places `a/F_n` and
//! `{F_{n-1} a / F_n}` inside the previous windows. Everything here is
//! exact rational (or `Q(sqrt5)`) arithmetic.
//!
//! Modules:
//! - [`fib`]: Fibonacci numbers, golden continued fraction, Zeckendorf digits.
//! - [`rat`]: rationals, `||.||`, unit subintervals.
//! - [`surd`]: exact comparisons against `phi^-2`.
//! - [`lemma`]: search for the coprime numerator witness.
//! - [`nest`]: the nested construction and its certificate.
//! - [`oracle`]: brute-force checks of every inequality the construction uses.
//! - [`report`]: check outcomes and their JSON/CSV/text rendering.
//! - [`cli`]: the `littlewood` command line.

pub mod cli;
pub mod fib;
pub mod lemma;
pub mod nest;
pub mod oracle;
pub mod rat;
pub mod report;
pub mod surd;

pub use fib::{cf_expand, fib, fib_gcd, fib_index_at_least, golden_convergent, zeckendorf, ZeckendorfRep};
pub use lemma::{find, find_brute, find_two_scale, select_kstar, verify_witness, LemmaWitness, SearchConfig, Strategy};
pub use nest::{approximants, build, verify_certificate, Certificate, DeltaSchedule, Stage};
pub use oracle::{
    check_q1, check_q5, gap_convergents, littlewood_lower_bound, min_product, star_discrepancy, ErrorBudget, MinRecord,
};
pub use rat::{dist_int, frac, Anchor, Rat, UnitInterval};
pub use report::{BoundReport, Check};
pub use surd::Surd;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("invalid interval {0}")]
    InvalidInterval(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("candidate range of {count} exceeds brute cap {cap}")]
    RangeTooLarge { count: String, cap: u64 },
    #[error("no coprime adjustment a0 + j*F_k found for j <= {j_max} (n={n}, a0={a0})")]
    StageTwoExhausted { n: u32, a0: String, j_max: u64 },
    #[error("level {nu} unreachable: no witness up to n={last_n}")]
    DepthUnreachable { nu: usize, last_n: u32 },
    #[error("level {level} out of range (certificate has {stages} stages)")]
    LevelOutOfRange { level: usize, stages: usize },
    #[error("a={a} is not coprime to F_{n}")]
    NotCoprime { n: u32, a: String },
    #[error("F_{n} exceeds scan cap {cap}")]
    ScanCapExceeded { n: u32, cap: u64 },
    #[error("proxy level {proxy} too shallow: error budget {budget} >= 1/2")]
    ProxyTooShallow { proxy: usize, budget: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
