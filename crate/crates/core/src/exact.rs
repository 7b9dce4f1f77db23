//! Arbitrary-precision integer and rational primitives: p-adic valuations,
//! lcm prefixes, floor logarithms, and the exact integer comparator against
//! the real-valued bound (n+1) - log_p((n+1)/2).

use std::cmp::Ordering;
use std::fmt;

use num::integer::Integer;
use num::{One, Zero};

pub use num::{BigInt, BigRational, BigUint};

/// p-adic valuation. `Infinite` occurs exactly for the rational zero.
///
/// The derived ordering puts `Infinite` above every finite value, matching
/// the convention nu_p(0) = +infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    /// The finite value, or `None` for the valuation of zero.
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Verdict of comparing a valuation against the real-valued bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundCmp {
    /// The valuation strictly exceeds the bound.
    Above,
    /// The valuation attains the bound exactly.
    Equal,
    /// The valuation is strictly under the bound.
    Below,
}

impl fmt::Display for BoundCmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundCmp::Above => "Above",
            BoundCmp::Equal => "Equal",
            BoundCmp::Below => "Below",
        })
    }
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin primality test, exact on the whole `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &b in &MR_BASES {
        if n == b {
            return true;
        }
        if n.is_multiple_of(b) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &b in &MR_BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (u128::from(a) * u128::from(b) % u128::from(m)) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// nu_p of an integer; `Infinite` for zero.
pub fn val_p_int(x: &BigInt, p: u64) -> Valuation {
    debug_assert!(p >= 2);
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigUint::from(p);
    let mut cur = x.magnitude().clone();
    let mut v = 0i64;
    loop {
        let (q, r) = cur.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        v += 1;
        cur = q;
    }
}

/// nu_p of a positive machine integer.
pub fn val_p_u64(n: u64, p: u64) -> i64 {
    assert!(n >= 1 && p >= 2);
    let mut n = n;
    let mut v = 0i64;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// nu_p of a rational; `Infinite` exactly for zero.
///
/// `p` must be prime (callers validate once at the API boundary).
pub fn val_p(r: &BigRational, p: u64) -> Valuation {
    match val_p_int(r.numer(), p) {
        Valuation::Infinite => Valuation::Infinite,
        Valuation::Finite(vn) => {
            let vd = val_p_int(r.denom(), p)
                .finite()
                .expect("denominator is nonzero");
            Valuation::Finite(vn - vd)
        }
    }
}

/// lcm(1, 2, ..., n).
pub fn lcm_upto(n: u64) -> BigInt {
    assert!(n >= 1, "lcm_upto needs n >= 1");
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc = acc.lcm(&BigInt::from(k));
    }
    acc
}

/// Largest e >= 0 with p^e <= n.
pub fn floor_log(p: u64, n: u64) -> u32 {
    assert!(p >= 2);
    assert!(n >= 1);
    let mut e = 0u32;
    let mut acc = 1u64;
    loop {
        match acc.checked_mul(p) {
            Some(next) if next <= n => {
                e += 1;
                acc = next;
            }
            _ => return e,
        }
    }
}

/// Exact sign of `mult * p^e - m` for `mult, m >= 1` and any sign of `e`.
///
/// The running product is checked against the other side each step, so the
/// loop exits after at most ~128 iterations regardless of `e`.
pub(crate) fn cmp_scaled_pow(mult: u64, p: u64, e: i128, m: u64) -> Ordering {
    debug_assert!(p >= 2 && mult >= 1 && m >= 1);
    if e >= 0 {
        let target = u128::from(m);
        let mut acc = u128::from(mult);
        for _ in 0..e {
            if acc > target {
                return Ordering::Greater;
            }
            acc = acc.saturating_mul(u128::from(p));
        }
        acc.cmp(&target)
    } else {
        // mult * p^e <=> m  is  mult <=> m * p^{-e}
        let target = u128::from(mult);
        let mut acc = u128::from(m);
        for _ in 0..(-e) {
            if acc > target {
                return Ordering::Less;
            }
            acc = acc.saturating_mul(u128::from(p));
        }
        target.cmp(&acc)
    }
}

/// Compares `nu` against (n+1) - log_p((n+1)/2), exactly.
///
/// Routed through the integer predicate
/// `nu >= (n+1) - log_p((n+1)/2)  <=>  2 * p^{(n+1)-nu} <= n+1`,
/// so rounding can never misclassify the equality cases n = 2p^alpha - 1.
/// For nu >= n+2 the power is below 1 and the verdict is always `Above`.
pub fn bound_compare(nu: i64, n: u64, p: u64) -> BoundCmp {
    assert!((1..u64::MAX).contains(&n));
    assert!(p >= 2);
    let e = i128::from(n) + 1 - i128::from(nu);
    match cmp_scaled_pow(2, p, e, n + 1) {
        Ordering::Less => BoundCmp::Above,
        Ordering::Equal => BoundCmp::Equal,
        Ordering::Greater => BoundCmp::Below,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn valuation_of_simple_rationals() {
        assert_eq!(val_p(&rat(9, 2), 3), Valuation::Finite(2));
        assert_eq!(val_p(&rat(1, 1), 5), Valuation::Finite(0));
        assert_eq!(val_p(&rat(40, 3), 2), Valuation::Finite(3));
        assert_eq!(val_p(&rat(1, 8), 2), Valuation::Finite(-3));
        assert_eq!(val_p(&rat(0, 1), 7), Valuation::Infinite);
        assert_eq!(val_p(&rat(-18, 5), 3), Valuation::Finite(2));
    }

    #[test]
    fn valuation_ordering_puts_infinite_on_top() {
        assert!(Valuation::Finite(i64::MAX) < Valuation::Infinite);
        assert!(Valuation::Finite(-3) < Valuation::Finite(0));
    }

    #[test]
    fn lcm_small_values() {
        assert_eq!(lcm_upto(1), BigInt::from(1));
        assert_eq!(lcm_upto(5), BigInt::from(60));
        assert_eq!(lcm_upto(10), BigInt::from(2520));
    }

    // Independent route: product of p^{floor_log(p, n)} over primes p <= n.
    fn lcm_by_prime_powers(n: u64) -> BigInt {
        let mut acc = BigInt::one();
        for p in 2..=n {
            if is_prime(p) {
                let mut pw = BigInt::one();
                for _ in 0..floor_log(p, n) {
                    pw *= BigInt::from(p);
                }
                acc *= pw;
            }
        }
        acc
    }

    #[test]
    fn lcm_matches_prime_power_product() {
        for n in 1..=120 {
            assert_eq!(lcm_upto(n), lcm_by_prime_powers(n), "n = {n}");
        }
    }

    fn is_prime_power(n: u64) -> bool {
        (2..=n).any(|p| {
            if !is_prime(p) {
                return false;
            }
            let mut m = n;
            while m.is_multiple_of(p) {
                m /= p;
            }
            m == 1
        })
    }

    #[test]
    fn lcm_grows_exactly_at_prime_powers() {
        let mut prev = lcm_upto(1);
        for n in 2..=200 {
            let cur = lcm_upto(n);
            assert_eq!(cur > prev, is_prime_power(n), "n = {n}");
            prev = cur;
        }
    }

    #[test]
    fn floor_log_examples() {
        assert_eq!(floor_log(2, 10), 3);
        assert_eq!(floor_log(3, 1), 0);
        assert_eq!(floor_log(5, 125), 3);
        assert_eq!(floor_log(2, u64::MAX), 63);
    }

    #[test]
    fn floor_log_agrees_with_lcm_valuation() {
        for n in 1..=400 {
            for p in [2u64, 3, 5, 7, 11, 13] {
                assert_eq!(
                    val_p_int(&lcm_upto(n), p),
                    Valuation::Finite(i64::from(floor_log(p, n))),
                    "n = {n}, p = {p}"
                );
            }
        }
    }

    #[test]
    fn bound_compare_examples() {
        assert_eq!(bound_compare(3, 3, 2), BoundCmp::Equal);
        assert_eq!(bound_compare(2, 1, 3), BoundCmp::Equal);
        assert_eq!(bound_compare(5, 3, 2), BoundCmp::Above);
        assert_eq!(bound_compare(2, 3, 2), BoundCmp::Below);
        assert_eq!(bound_compare(4, 9, 5), BoundCmp::Below);
    }

    // Independent oracle: recompute 2 * p^e with plain big-integer powers, and
    // cross-check against f64 logarithms away from the boundary. Only nu near
    // the bound is interesting; far away the verdict is immediate.
    #[test]
    fn bound_compare_matches_bigint_and_float_oracles() {
        for p in [2u64, 3, 5, 7, 11] {
            for n in 1..=400u64 {
                let lo = (n as i64 + 1 - 14).max(-3);
                for nu in lo..=(n as i64 + 4) {
                    let got = bound_compare(nu, n, p);
                    let e = n as i64 + 1 - nu;
                    let expected = if e < 0 {
                        BoundCmp::Above
                    } else {
                        let mut pw = BigInt::from(2);
                        for _ in 0..e {
                            pw *= BigInt::from(p);
                        }
                        match pw.cmp(&BigInt::from(n + 1)) {
                            Ordering::Less => BoundCmp::Above,
                            Ordering::Equal => BoundCmp::Equal,
                            Ordering::Greater => BoundCmp::Below,
                        }
                    };
                    assert_eq!(got, expected, "p={p} n={n} nu={nu}");
                    let real = (n as f64 + 1.0) - ((n as f64 + 1.0) / 2.0).ln() / (p as f64).ln();
                    let diff = nu as f64 - real;
                    if diff.abs() > 1e-6 {
                        let sign_cmp = if diff > 0.0 {
                            BoundCmp::Above
                        } else {
                            BoundCmp::Below
                        };
                        assert_eq!(got, sign_cmp, "p={p} n={n} nu={nu}");
                    }
                }
            }
        }
    }

    #[test]
    fn primality_known_values() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(97));
        assert!(is_prime(2_147_483_647));
        assert!(is_prime((1u64 << 61) - 1));
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        assert!(!is_prime(4));
        assert!(!is_prime(561)); // Carmichael
        assert!(!is_prime(1_373_653));
        assert!(!is_prime(u64::MAX));
    }

    proptest! {
        #[test]
        fn valuation_is_additive(
            (an, ad) in (-200i64..=200, 1i64..=200),
            (bn, bd) in (-200i64..=200, 1i64..=200),
            p in prop::sample::select(vec![2u64, 3, 5, 7, 13]),
        ) {
            prop_assume!(an != 0 && bn != 0);
            let x = rat(an, ad);
            let y = rat(bn, bd);
            let vx = val_p(&x, p).finite().unwrap();
            let vy = val_p(&y, p).finite().unwrap();
            prop_assert_eq!(val_p(&(&x * &y), p), Valuation::Finite(vx + vy));
        }

        #[test]
        fn valuation_is_ultrametric(
            (an, ad) in (-200i64..=200, 1i64..=200),
            (bn, bd) in (-200i64..=200, 1i64..=200),
            p in prop::sample::select(vec![2u64, 3, 5, 7, 13]),
        ) {
            prop_assume!(an != 0 && bn != 0);
            let x = rat(an, ad);
            let y = rat(bn, bd);
            let vx = val_p(&x, p);
            let vy = val_p(&y, p);
            let vs = val_p(&(&x + &y), p);
            prop_assert!(vs >= vx.min(vy));
            if vx != vy {
                prop_assert_eq!(vs, vx.min(vy));
            }
        }

        #[test]
        fn rational_reduction_is_idempotent(n in -10_000i64..=10_000, d in 1i64..=10_000) {
            let r = rat(n, d);
            let again = BigRational::new(r.numer().clone(), r.denom().clone());
            prop_assert_eq!(&again, &r);
            prop_assert!(r.denom() > &BigInt::zero());
            prop_assert!(r.numer().gcd(r.denom()).is_one() || r.numer().is_zero());
        }
    }
}
