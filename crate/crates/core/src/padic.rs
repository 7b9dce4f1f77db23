//! Finite-precision p-adic arithmetic: residues mod p^N, the truncated log
//! series with a certified truncation index, the functional equation check,
//! and the vanishing certificate for the prefix sums.

use std::cmp::Ordering;

use num::integer::{ExtendedGcd, Integer};
use num::{BigInt, BigRational, BigUint, One, Zero};

use crate::bound::ell_compare;
use crate::exact::{floor_log, val_p, val_p_int, Valuation};
use crate::series::{PrefixSumStream, SeriesParams};
use crate::Error;

/// A p-adic integer known to precision N: a residue in [0, p^N).
///
/// Two values take part in arithmetic or comparison only at equal (p, N);
/// mixing contexts is a programming error and panics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedPadic {
    p: u64,
    precision: u32,
    residue: BigUint,
}

impl TruncatedPadic {
    pub fn zero(p: u64, precision: u32) -> Self {
        assert!(precision >= 1);
        Self {
            p,
            precision,
            residue: BigUint::zero(),
        }
    }

    /// Builds from any residue, reducing mod p^N.
    pub fn from_residue(p: u64, precision: u32, residue: BigUint) -> Self {
        assert!(precision >= 1);
        let modulus = power(p, precision);
        Self {
            p,
            precision,
            residue: residue % modulus,
        }
    }

    /// Reduces a (possibly negative) integer into [0, p^N).
    pub fn from_int(p: u64, precision: u32, x: &BigInt) -> Self {
        assert!(precision >= 1);
        let modulus = BigInt::from(power(p, precision));
        let residue = x.mod_floor(&modulus);
        Self {
            p,
            precision,
            residue: residue.to_biguint().expect("mod_floor is non-negative"),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn modulus(&self) -> BigUint {
        power(self.p, self.precision)
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    /// Forgets digits beyond precision N' <= N.
    pub fn reduce_precision(&self, precision: u32) -> Self {
        assert!(precision >= 1 && precision <= self.precision);
        Self::from_residue(self.p, precision, self.residue.clone())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.assert_compatible(rhs);
        Self::from_residue(self.p, self.precision, &self.residue + &rhs.residue)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.assert_compatible(rhs);
        let modulus = self.modulus();
        Self::from_residue(
            self.p,
            self.precision,
            &self.residue + &modulus - &rhs.residue,
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.assert_compatible(rhs);
        Self::from_residue(self.p, self.precision, &self.residue * &rhs.residue)
    }

    fn assert_compatible(&self, rhs: &Self) {
        assert_eq!(
            (self.p, self.precision),
            (rhs.p, rhs.precision),
            "mixed truncation contexts"
        );
    }
}

fn power(p: u64, e: u32) -> BigUint {
    let mut acc = BigUint::one();
    for _ in 0..e {
        acc *= BigUint::from(p);
    }
    acc
}

fn mod_inverse(a: &BigInt, modulus: &BigInt) -> Option<BigInt> {
    let ExtendedGcd { gcd, x, .. } = a.extended_gcd(modulus);
    gcd.is_one().then(|| x.mod_floor(modulus))
}

/// Maps a rational with p-free denominator to its residue mod p^N, through a
/// modular inverse of the denominator.
pub fn to_truncated(r: &BigRational, p: u64, precision: u32) -> Result<TruncatedPadic, Error> {
    assert!(precision >= 1);
    if val_p_int(r.denom(), p) != Valuation::Finite(0) {
        return Err(Error::NotPadicInteger { p, x: r.clone() });
    }
    let modulus = BigInt::from(power(p, precision));
    let inv = mod_inverse(&r.denom().mod_floor(&modulus), &modulus)
        .expect("denominator is coprime to p^N");
    let residue = (r.numer().mod_floor(&modulus) * inv).mod_floor(&modulus);
    Ok(TruncatedPadic::from_int(p, precision, &residue))
}

/// A rational x with nu_p(x) >= 1 (zero included), the valid argument range
/// of the series sum_{k>=1} x^k / k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogArgument {
    x: BigRational,
    p: u64,
}

impl LogArgument {
    pub fn new(x: BigRational, p: u64) -> Result<Self, Error> {
        match val_p(&x, p) {
            Valuation::Infinite => Ok(Self { x, p }),
            Valuation::Finite(v) if v >= 1 => Ok(Self { x, p }),
            Valuation::Finite(got) => Err(Error::LogDomain { p, x, got }),
        }
    }

    pub fn x(&self) -> &BigRational {
        &self.x
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

/// Smallest K >= 2 such that every omitted term x^k/k with k > K has
/// nu_p >= N, given v = nu_p(x) >= 1.
///
/// Decided by the integer test k*v - floor(log_p k) >= N. That quantity is
/// non-decreasing in k for v >= 1 (the floor log grows by at most one, and
/// only at powers of p), so checking k = K+1 settles the whole tail.
pub fn truncation_index(p: u64, v: u64, precision: u32) -> u64 {
    assert!(v >= 1, "the series argument must satisfy nu_p(x) >= 1");
    let clears = |k: u64| -> bool {
        i128::from(k) * i128::from(v) - i128::from(floor_log(p, k)) >= i128::from(precision)
    };
    let mut k = 2u64;
    while !clears(k + 1) {
        k += 1;
    }
    k
}

/// The truncated series sum_{k=1}^{K} x^k / k mod p^N, equal to the image of
/// -L_p(1-x) at precision N for the p-adic logarithm L_p.
///
/// The partial sum is accumulated as an exact rational and reduced once at
/// the end; every kept term is checked to be a p-adic integer, which is what
/// makes the final reduction well defined.
pub fn log1m(arg: &LogArgument, precision: u32) -> TruncatedPadic {
    assert!(precision >= 1);
    let p = arg.p;
    if arg.x.is_zero() {
        return TruncatedPadic::zero(p, precision);
    }
    let v = val_p(&arg.x, p)
        .finite()
        .expect("nonzero argument has finite valuation");
    let k_max = truncation_index(p, v as u64, precision);
    let mut sum = BigRational::zero();
    let mut x_pow = BigRational::one();
    for k in 1..=k_max {
        x_pow *= &arg.x;
        let term = &x_pow / BigRational::from_integer(BigInt::from(k));
        assert!(
            val_p(&term, p) >= Valuation::Finite(0),
            "series term x^{k}/{k} must be a p-adic integer"
        );
        sum += term;
    }
    to_truncated(&sum, p, precision).expect("sum of p-adic integers is a p-adic integer")
}

/// Checks L_p(uv) = L_p(u) + L_p(v) at precision N, for rationals u, v that
/// are congruent to 1 mod p. Expressed in series form, both sides become
/// log1m values: log1m(1 - uv) against log1m(1-u) + log1m(1-v).
pub fn verify_functional_eq(
    u: &BigRational,
    v: &BigRational,
    p: u64,
    precision: u32,
) -> Result<bool, Error> {
    let one = BigRational::one();
    let xu = LogArgument::new(&one - u, p)?;
    let xv = LogArgument::new(&one - v, p)?;
    // nu_p(uv - 1) >= min(nu_p(u-1) + nu_p(v), nu_p(v-1)) >= 1 follows
    let xuv =
        LogArgument::new(&one - u * v, p).expect("uv is congruent to 1 mod p when u and v are");
    let lhs = log1m(&xuv, precision);
    let rhs = log1m(&xu, precision).add(&log1m(&xv, precision));
    Ok(lhs == rhs)
}

/// Finite vanishing certificate at precision N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eq14Report {
    /// Smallest index from which every scanned prefix sum satisfied
    /// nu_p(s_n) >= N. An empirical certificate at this precision, not an
    /// effective bound.
    pub n_zero: u64,
    /// Smallest n whose bound already forces nu_p(s_n) >= N, i.e. with
    /// ell_{n+1} >= N; `n_zero` can never exceed it.
    pub threshold: u64,
    /// Indices n_zero..=n_zero+window were all explicitly verified.
    pub window: u64,
    pub scanned_to: u64,
    /// ((a-p)/a) * ((-a)/(p-a)), the exact product whose logarithm the full
    /// series telescopes to; always exactly 1.
    pub telescoped_product: BigRational,
}

/// Scans prefix sums for the smallest n_zero with nu_p(s_n) >= N on the whole
/// window [n_zero, n_zero + window], and cross-checks against the bound: any
/// n past the ell threshold with nu_p(s_n) < N falsifies the certificate and
/// is returned as an error.
pub fn verify_eq14(
    params: &SeriesParams,
    precision: u32,
    window: u64,
) -> Result<Eq14Report, Error> {
    assert!(precision >= 1);
    let p = params.p();

    let a = params.a();
    let b = params.complement();
    let telescoped_product =
        BigRational::new(a - BigInt::from(p), a.clone()) * BigRational::new(-a.clone(), b);
    debug_assert!(telescoped_product.is_one());

    let threshold = {
        let mut n = 1u64;
        while ell_compare(p, n + 1, i64::from(precision)) == Ordering::Less {
            n += 1;
        }
        n
    };
    let scan_to = threshold + window;
    let mut last_bad = 0u64;
    for ps in PrefixSumStream::new(params).take(scan_to as usize) {
        let nu = val_p(&ps.value, p).finite().expect("prefix sum is nonzero");
        if nu < i64::from(precision) {
            if ps.n >= threshold {
                return Err(Error::VanishingCertificate {
                    n: ps.n,
                    nu,
                    precision,
                });
            }
            last_bad = ps.n;
        }
    }
    Ok(Eq14Report {
        n_zero: last_bad + 1,
        threshold,
        window,
        scanned_to: scan_to,
        telescoped_product,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn params(p: u64, a: i64) -> SeriesParams {
        SeriesParams::new(p, BigInt::from(a)).unwrap()
    }

    #[test]
    fn truncation_examples() {
        let t = to_truncated(&rat(1, 2), 3, 2).unwrap();
        assert_eq!(t.residue(), &BigUint::from(5u32));

        let z = to_truncated(&BigRational::zero(), 5, 3).unwrap();
        assert!(z.is_zero());

        let seven = to_truncated(&rat(7, 1), 3, 1).unwrap();
        assert_eq!(seven.residue(), &BigUint::from(1u32));

        let neg = to_truncated(&rat(-1, 1), 3, 2).unwrap();
        assert_eq!(neg.residue(), &BigUint::from(8u32));

        assert!(matches!(
            to_truncated(&rat(1, 3), 3, 2),
            Err(Error::NotPadicInteger { .. })
        ));
    }

    #[test]
    fn truncation_index_examples() {
        assert_eq!(truncation_index(3, 1, 2), 2);
        assert_eq!(truncation_index(2, 1, 1), 2);
        for p in [2u64, 3, 5] {
            for precision in 1..=12u32 {
                for v in u64::from(precision)..=u64::from(precision) + 3 {
                    assert_eq!(truncation_index(p, v, precision), 2, "p={p} v={v}");
                }
            }
        }
    }

    // Enumeration oracle: the smallest K >= 2 with k*v - floor_log(p,k) >= N
    // for every k in (K, K + 400].
    #[test]
    fn truncation_index_matches_enumeration() {
        for p in [2u64, 3, 5] {
            for v in 1..=4u64 {
                for precision in 1..=12u32 {
                    let valid = |kk: u64| -> bool {
                        (kk + 1..=kk + 400).all(|k| {
                            k as i64 * v as i64 - i64::from(floor_log(p, k)) >= i64::from(precision)
                        })
                    };
                    let expect = (2u64..).find(|&kk| valid(kk)).unwrap();
                    assert_eq!(
                        truncation_index(p, v, precision),
                        expect,
                        "p={p} v={v} N={precision}"
                    );
                }
            }
        }
    }

    #[test]
    fn log_of_one_is_zero() {
        let arg = LogArgument::new(BigRational::zero(), 3).unwrap();
        assert!(log1m(&arg, 5).is_zero());
    }

    #[test]
    fn log_series_small_example() {
        // x = 3, p = 3, N = 2: 3 + 9/2 + ... reduces to 3 mod 9
        let arg = LogArgument::new(rat(3, 1), 3).unwrap();
        assert_eq!(log1m(&arg, 2).residue(), &BigUint::from(3u32));
    }

    #[test]
    fn log_argument_domain() {
        assert!(LogArgument::new(rat(1, 1), 3).is_err());
        assert!(LogArgument::new(rat(1, 3), 3).is_err());
        assert!(LogArgument::new(rat(6, 5), 3).is_ok());
        assert!(LogArgument::new(rat(-9, 4), 3).is_ok());
    }

    #[test]
    fn log_precision_coherence() {
        for (p, num, den) in [(3u64, 3i64, 1i64), (2, 2, 3), (5, -10, 7), (3, 18, 5)] {
            let arg = LogArgument::new(rat(num, den), p).unwrap();
            let full = log1m(&arg, 10);
            for lower in 1..=10u32 {
                assert_eq!(
                    full.reduce_precision(lower),
                    log1m(&arg, lower),
                    "p={p} x={num}/{den} N'={lower}"
                );
            }
        }
    }

    // Summing 10 terms past the certified index must not change the residue.
    #[test]
    fn truncation_is_sound() {
        for (p, num, den) in [(2u64, 2i64, 5i64), (3, -3, 2), (5, 5, 6), (7, 14, 3)] {
            for precision in [1u32, 4, 8, 12] {
                let arg = LogArgument::new(rat(num, den), p).unwrap();
                let v = val_p(arg.x(), p).finite().unwrap() as u64;
                let k_max = truncation_index(p, v, precision);
                let mut sum = BigRational::zero();
                let mut x_pow = BigRational::one();
                for k in 1..=k_max + 10 {
                    x_pow *= arg.x();
                    sum += &x_pow / BigRational::from_integer(BigInt::from(k));
                }
                let wide = to_truncated(&sum, p, precision).unwrap();
                assert_eq!(log1m(&arg, precision), wide, "p={p} N={precision}");
            }
        }
    }

    #[test]
    fn functional_equation_trivial_and_shifted() {
        let one = BigRational::one();
        assert!(verify_functional_eq(&one, &one, 3, 6).unwrap());
        for p in [2u64, 3, 5] {
            let u = &one - BigRational::from_integer(BigInt::from(p));
            assert!(verify_functional_eq(&u, &u, p, 8).unwrap(), "p={p}");
        }
    }

    #[test]
    fn functional_equation_rejects_bad_arguments() {
        let u = rat(2, 1); // u - 1 = 1, not divisible by p
        assert!(matches!(
            verify_functional_eq(&u, &BigRational::one(), 3, 4),
            Err(Error::LogDomain { .. })
        ));
    }

    #[test]
    fn vanishing_certificate_examples() {
        let report = verify_eq14(&params(3, 1), 5, 30).unwrap();
        assert!(report.n_zero <= 7, "n_zero = {}", report.n_zero);
        assert!(report.n_zero <= report.threshold);
        assert!(report.telescoped_product.is_one());

        let report = verify_eq14(&params(2, 1), 3, 30).unwrap();
        assert!(report.n_zero <= 4);
        assert_eq!(report.n_zero, 2); // s_1 = 4 has nu = 2 < 3, s_2 = 8 has nu = 3

        for (p, a) in [(2u64, 1i64), (3, 2), (5, -1), (7, 8)] {
            let report = verify_eq14(&params(p, a), 1, 20).unwrap();
            assert_eq!(report.n_zero, 1, "p={p} a={a}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn residue_ops_commute_with_precision_reduction(
            x in -2000i64..=2000,
            y in -2000i64..=2000,
            p in prop::sample::select(vec![2u64, 3, 5, 7]),
            hi in 2u32..=10,
            lo in 1u32..=10,
        ) {
            prop_assume!(lo <= hi);
            let xa = TruncatedPadic::from_int(p, hi, &BigInt::from(x));
            let ya = TruncatedPadic::from_int(p, hi, &BigInt::from(y));
            let xl = TruncatedPadic::from_int(p, lo, &BigInt::from(x));
            let yl = TruncatedPadic::from_int(p, lo, &BigInt::from(y));
            prop_assert_eq!(xa.add(&ya).reduce_precision(lo), xl.add(&yl));
            prop_assert_eq!(xa.sub(&ya).reduce_precision(lo), xl.sub(&yl));
            prop_assert_eq!(xa.mul(&ya).reduce_precision(lo), xl.mul(&yl));
        }

        #[test]
        fn functional_equation_on_random_units(
            (un, ud) in (-40i64..=40, 1i64..=40),
            (vn, vd) in (-40i64..=40, 1i64..=40),
            p in prop::sample::select(vec![2u64, 3, 5]),
            precision in 1u32..=10,
        ) {
            prop_assume!(!(ud as u64).is_multiple_of(p) && !(vd as u64).is_multiple_of(p));
            let pb = BigRational::from_integer(BigInt::from(p));
            let u = BigRational::one() + &pb * rat(un, ud);
            let v = BigRational::one() + &pb * rat(vn, vd);
            prop_assert!(verify_functional_eq(&u, &v, p, precision).unwrap());
        }
    }
}
