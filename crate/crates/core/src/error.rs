use num::{BigInt, BigRational};
use thiserror::Error;

/// Errors surfaced at the library boundary.
///
/// Violated preconditions on internal indices (`k >= 1` and the like) panic
/// instead: they indicate bugs in the caller, not bad data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("p = {0} is not prime")]
    NotPrime(u64),
    #[error("a = {a} is a multiple of p = {p}")]
    MultipleOfP { p: u64, a: BigInt },
    #[error("the identity requires nonzero x, y with x + y != 0")]
    MansourDomain,
    #[error("{x} is not a p-adic integer for p = {p}")]
    NotPadicInteger { p: u64, x: BigRational },
    #[error("log argument needs v_{p}(x) >= 1, got {got} for x = {x}")]
    LogDomain { p: u64, x: BigRational, got: i64 },
    #[error("term oracle guarantee failed at k = {k}: the lower bound exceeds v_p(r_k) = {nu}")]
    OracleContract { k: u64, nu: i64 },
    #[error("vanishing certificate violated at n = {n}: v_p(s_n) = {nu} < {precision}")]
    VanishingCertificate { n: u64, nu: i64, precision: u32 },
}
