//! Exact arithmetic kernel for p-adic valuations of rational prefix sums.
//!
//! The crate computes, in exact arbitrary-precision arithmetic, the p-adic
//! valuations of the sums
//!
//! ```text
//! s_n = sum_{k=1}^{n} (1/a^k + 1/(p-a)^k) * p^k / k
//! ```
//!
//! for a prime `p` and an integer `a` not divisible by `p`, and verifies the
//! sharp lower bound `nu_p(s_n) >= (n+1) - log_p((n+1)/2)` together with the
//! combinatorial identities, the clearing-polynomial vanishing argument, and
//! the finite-precision p-adic logarithm certificates that sit behind it.
//!
//! Every comparison against the real-valued bound is routed through an
//! integer predicate; no floating point is used anywhere in the crate.

pub mod bound;
mod error;
pub mod exact;
pub mod padic;
pub mod poly;
pub mod sampling;
pub mod series;

pub use bound::{
    check_theorem1, check_theorem2_prefix, dubickas_corollary, dubickas_scan, ell_compare,
    equality_case, predicted_equality_set, tail_min, term_valuation, theorem1_report, BoundReport,
    DubickasRow, SeriesOracle, TailMin, TermOracle, Theorem2Violation,
};
pub use error::Error;
pub use exact::{
    bound_compare, floor_log, is_prime, lcm_upto, val_p, val_p_int, val_p_u64, BigInt, BigRational,
    BigUint, BoundCmp, Valuation,
};
pub use padic::{
    log1m, to_truncated, truncation_index, verify_eq14, verify_functional_eq, Eq14Report,
    LogArgument, TruncatedPadic,
};
pub use poly::IntPolynomial;
pub use series::{
    binomial, clearing_polynomial, identity11_rhs, mansour_sides, prefix_sums, prefix_valuations,
    term_r, verify_lcm_binom, PrefixSum, PrefixSumStream, SeriesParams, SeriesTerm,
};
