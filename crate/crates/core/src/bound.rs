//! The tail-minimum machinery behind the valuation bound: term valuations,
//! the lower-bound sequence ell_k = k - log_p(k/2) compared through integer
//! predicates, the finite escape window for the infinite tail minimum, and
//! the per-n verdicts with their equality classification.

use std::cmp::Ordering;

use num::{BigInt, BigRational, One, Zero};

use crate::exact::{self, bound_compare, val_p, val_p_int, val_p_u64, BoundCmp};
use crate::series::{self, SeriesParams};
use crate::Error;

/// Exact sign of ell_k - c where ell_k = k - log_p(k/2), for k >= 2.
///
/// Decided by the integer predicate `ell_k > c  <=>  2 * p^{k-c} > k`; no
/// real number is ever materialized.
pub fn ell_compare(p: u64, k: u64, c: i64) -> Ordering {
    assert!(k >= 2, "ell is defined from k = 2 on");
    exact::cmp_scaled_pow(2, p, i128::from(k) - i128::from(c), k)
}

/// Access to the term valuations nu_p(r_k) of a series together with a
/// guaranteed lower-bound sequence ell for them.
///
/// Contract: ell must be strictly increasing and unbounded, and must satisfy
/// ell_k <= nu_p(r_k) for every k >= 2. [`tail_min`] relies on both halves:
/// the bound makes the infinite tail minimum computable over a finite window,
/// and strict growth is what the equality criterion of
/// [`check_theorem2_prefix`] needs. Bound violations that surface inside a
/// scanned window are reported as [`Error::OracleContract`].
pub trait TermOracle {
    /// nu_p(r_k), for k >= 1.
    fn term_valuation(&self, k: u64) -> i64;

    /// Exact sign of ell_k - c, for k >= 2.
    fn ell_compare(&self, k: u64, c: i64) -> Ordering;
}

/// The concrete oracle for the series terms r_k = (1/a^k + 1/(p-a)^k) p^k / k:
/// valuations through the decomposition nu_p(a^k + (p-a)^k) + k - nu_p(k) and
/// the lower bound ell_k = k - log_p(k/2).
#[derive(Debug, Clone)]
pub struct SeriesOracle<'a> {
    params: &'a SeriesParams,
}

impl<'a> SeriesOracle<'a> {
    pub fn new(params: &'a SeriesParams) -> Self {
        Self { params }
    }
}

impl TermOracle for SeriesOracle<'_> {
    fn term_valuation(&self, k: u64) -> i64 {
        term_valuation(self.params, k)
    }

    fn ell_compare(&self, k: u64, c: i64) -> Ordering {
        ell_compare(self.params.p(), k, c)
    }
}

/// nu_p(r_k) = nu_p(a^k + (p-a)^k) + k - nu_p(k).
///
/// The middle addend is exact because p is coprime to both a and p - a; the
/// first is computed on the integer a^k + (p-a)^k, which is never zero for
/// valid parameters.
pub fn term_valuation(params: &SeriesParams, k: u64) -> i64 {
    assert!(k >= 1);
    let a_k = series::int_pow(params.a(), k);
    let b_k = series::int_pow(&params.complement(), k);
    let v_sum = val_p_int(&(a_k + b_k), params.p())
        .finite()
        .expect("a^k + (p-a)^k is nonzero when p does not divide a");
    v_sum + k as i64 - val_p_u64(k, params.p())
}

/// Exact minimum of nu_p(r_k) over the infinite tail k >= n+1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TailMin {
    pub min: i64,
    /// Smallest k attaining the minimum.
    pub witness: u64,
    /// Last index the scan had to inspect before the lower bound escaped
    /// above the running minimum.
    pub scanned_to: u64,
}

/// Computes min_{k >= n+1} nu_p(r_k) over a finite window.
///
/// The scan starts at k = n+1 and stops at the first k whose guaranteed
/// lower bound already exceeds the running minimum: every later term is at
/// least ell_k > min, so the window is exhaustive. `n = 0` asks for the
/// minimum over the whole series. A term whose valuation falls below its own
/// lower bound falsifies the windowing argument and is returned as an error.
pub fn tail_min<O: TermOracle + ?Sized>(oracle: &O, n: u64) -> Result<TailMin, Error> {
    let start = n + 1;
    let mut min = oracle.term_valuation(start);
    check_guarantee(oracle, start, min)?;
    let mut witness = start;
    let mut k = start;
    loop {
        k += 1;
        if oracle.ell_compare(k, min) == Ordering::Greater {
            return Ok(TailMin {
                min,
                witness,
                scanned_to: k - 1,
            });
        }
        let v = oracle.term_valuation(k);
        check_guarantee(oracle, k, v)?;
        if v < min {
            min = v;
            witness = k;
        }
    }
}

fn check_guarantee<O: TermOracle + ?Sized>(oracle: &O, k: u64, nu: i64) -> Result<(), Error> {
    if k >= 2 && oracle.ell_compare(k, nu) == Ordering::Greater {
        return Err(Error::OracleContract { k, nu });
    }
    Ok(())
}

/// A violated claim found while scanning prefix valuations against the
/// tail-min sandwich and its equality criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Theorem2Violation {
    /// The oracle's lower bound exceeded a term valuation inside a window.
    OracleContract { k: u64, nu: i64 },
    /// nu_p(s_n) fell below the tail minimum.
    PrefixBelowTailMin { n: u64, nu: i64, tail_min: i64 },
    /// The tail minimum fell below ell_{n+1}.
    TailMinBelowEll { n: u64, tail_min: i64 },
    /// nu_p(s_n) = ell_{n+1} and tail_min = ell_{n+1} disagreed.
    EqualityMismatch {
        n: u64,
        nu: i64,
        tail_min: i64,
        nu_at_ell: bool,
        tail_at_ell: bool,
    },
}

/// Checks, for every (n, nu_p(s_n)) with n <= n_max, the exact sandwich
/// nu_p(s_n) >= tail_min(n) >= ell_{n+1} and the equality criterion
/// nu_p(s_n) = ell_{n+1} <=> tail_min(n) = ell_{n+1}.
///
/// Violations are returned as data; an empty list means every claim held.
pub fn check_theorem2_prefix<O: TermOracle>(
    oracle: &O,
    sums: impl IntoIterator<Item = (u64, i64)>,
    n_max: u64,
) -> Vec<Theorem2Violation> {
    let mut violations = Vec::new();
    for (n, nu) in sums {
        if n > n_max {
            break;
        }
        let tail = match tail_min(oracle, n) {
            Ok(tail) => tail,
            Err(Error::OracleContract { k, nu }) => {
                violations.push(Theorem2Violation::OracleContract { k, nu });
                continue;
            }
            Err(err) => unreachable!("tail_min only fails on contract violations: {err}"),
        };
        if nu < tail.min {
            violations.push(Theorem2Violation::PrefixBelowTailMin {
                n,
                nu,
                tail_min: tail.min,
            });
        }
        if oracle.ell_compare(n + 1, tail.min) == Ordering::Greater {
            violations.push(Theorem2Violation::TailMinBelowEll {
                n,
                tail_min: tail.min,
            });
        }
        let nu_at_ell = oracle.ell_compare(n + 1, nu) == Ordering::Equal;
        let tail_at_ell = oracle.ell_compare(n + 1, tail.min) == Ordering::Equal;
        if nu_at_ell != tail_at_ell {
            violations.push(Theorem2Violation::EqualityMismatch {
                n,
                nu,
                tail_min: tail.min,
                nu_at_ell,
                tail_at_ell,
            });
        }
    }
    violations
}

/// Some(alpha) iff n + 1 = 2 * p^alpha, i.e. n is an index where the bound
/// is attained exactly.
pub fn equality_case(p: u64, n: u64) -> Option<u32> {
    assert!(n >= 1);
    let m = n + 1;
    if !m.is_multiple_of(2) {
        return None;
    }
    let mut h = m / 2;
    let mut alpha = 0u32;
    while h.is_multiple_of(p) {
        h /= p;
        alpha += 1;
    }
    (h == 1).then_some(alpha)
}

/// {2 p^alpha - 1 : alpha >= 0} intersected with [1, n_max], ascending.
pub fn predicted_equality_set(p: u64, n_max: u64) -> Vec<u64> {
    let mut set = Vec::new();
    let mut pw = 1u64;
    loop {
        match pw.checked_mul(2).and_then(|m| m.checked_sub(1)) {
            Some(n) if n <= n_max => set.push(n),
            _ => break,
        }
        pw = match pw.checked_mul(p) {
            Some(next) => next,
            None => break,
        };
    }
    set
}

/// Per-n verdict: the valuation of s_n, its exact comparison against the
/// bound, the tail-min witness, and the predicted equality classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub n: u64,
    /// nu_p(s_n).
    pub nu: i64,
    /// Exact comparison of nu against (n+1) - log_p((n+1)/2).
    pub cmp: BoundCmp,
    /// min_{k >= n+1} nu_p(r_k).
    pub tail_min: i64,
    /// Smallest k attaining the tail minimum.
    pub tail_witness: u64,
    /// Whether n has the form 2 p^alpha - 1.
    pub equality_predicted: bool,
    pub alpha: Option<u32>,
}

impl BoundReport {
    /// True when this row is consistent with every claim it carries: the
    /// comparison never lands below the bound, equality happens exactly at
    /// the predicted indices, and equality coincides with the tail minimum
    /// attaining ell_{n+1}.
    pub fn consistent(&self, p: u64) -> bool {
        let equal = self.cmp == BoundCmp::Equal;
        self.cmp != BoundCmp::Below
            && equal == self.equality_predicted
            && equal == (ell_compare(p, self.n + 1, self.tail_min) == Ordering::Equal)
    }
}

/// Builds the verdict for one index from an already computed nu_p(s_n).
pub fn theorem1_report(params: &SeriesParams, n: u64, nu: i64) -> BoundReport {
    let tail = tail_min(&SeriesOracle::new(params), n)
        .expect("the series oracle satisfies its own lower bound");
    let alpha = equality_case(params.p(), n);
    BoundReport {
        n,
        nu,
        cmp: bound_compare(nu, n, params.p()),
        tail_min: tail.min,
        tail_witness: tail.witness,
        equality_predicted: alpha.is_some(),
        alpha,
    }
}

/// Streams one [`BoundReport`] per n = 1, ..., n_max.
pub fn check_theorem1(params: &SeriesParams, n_max: u64) -> impl Iterator<Item = BoundReport> + '_ {
    series::prefix_valuations(params, n_max).map(move |(n, nu)| theorem1_report(params, n, nu))
}

/// Per-n verdict for the base-2 specialization T_n = sum_{k<=n} 2^k / k.
///
/// `cmp` compares nu_2(T_n) with (n+1) - log_2(n+1) through the predicate
/// `2^{(n+1)-nu} <=> n+1`; equality is predicted exactly at n = 2^alpha - 1.
/// `weaker_bound_holds` tracks nu_2(T_n) >= n - floor(log_2 n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DubickasRow {
    pub n: u64,
    pub nu: i64,
    pub cmp: BoundCmp,
    pub equality_predicted: bool,
    pub weaker_bound_holds: bool,
}

impl DubickasRow {
    pub fn consistent(&self) -> bool {
        self.cmp != BoundCmp::Below
            && (self.cmp == BoundCmp::Equal) == self.equality_predicted
            && self.weaker_bound_holds
    }
}

/// Streams the verdicts for T_n = sum_{k<=n} 2^k / k, n = 1, ..., n_max.
pub fn dubickas_scan(n_max: u64) -> impl Iterator<Item = DubickasRow> {
    let mut sum = BigRational::zero();
    let mut two_pow = BigInt::one();
    let mut n = 0u64;
    std::iter::from_fn(move || {
        if n >= n_max {
            return None;
        }
        n += 1;
        two_pow = &two_pow * BigInt::from(2);
        sum += BigRational::new(two_pow.clone(), BigInt::from(n));
        let nu = val_p(&sum, 2).finite().expect("T_n is nonzero");
        let cmp = match exact::cmp_scaled_pow(1, 2, i128::from(n) + 1 - i128::from(nu), n + 1) {
            Ordering::Less => BoundCmp::Above,
            Ordering::Equal => BoundCmp::Equal,
            Ordering::Greater => BoundCmp::Below,
        };
        Some(DubickasRow {
            n,
            nu,
            cmp,
            equality_predicted: (n + 1).is_power_of_two(),
            weaker_bound_holds: nu >= n as i64 - i64::from(exact::floor_log(2, n)),
        })
    })
}

/// The rows of [`dubickas_scan`] that violate a claim; empty means the bound,
/// its equality set, and the weaker floor-log bound all held up to n_max.
pub fn dubickas_corollary(n_max: u64) -> Vec<DubickasRow> {
    dubickas_scan(n_max)
        .filter(|row| !row.consistent())
        .collect()
}
