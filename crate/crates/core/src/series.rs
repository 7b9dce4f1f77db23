//! The series terms r_k and prefix sums s_n, plus the exact identity checks
//! used by the two elementary unboundedness arguments: the combinatorial and
//! lcm-of-binomials identities, and the clearing-polynomial construction.

use num::integer::Integer;
use num::{BigInt, BigRational, One, Zero};

use crate::exact::{self, lcm_upto};
use crate::poly::IntPolynomial;
use crate::Error;

/// Series parameters: a prime `p` and an integer `a` with `p` not dividing
/// `a`. Both conditions are validated on construction; `a` may be negative
/// or larger than `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesParams {
    p: u64,
    a: BigInt,
}

impl SeriesParams {
    pub fn new(p: u64, a: BigInt) -> Result<Self, Error> {
        if !exact::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if a.is_multiple_of(&BigInt::from(p)) {
            return Err(Error::MultipleOfP { p, a });
        }
        Ok(Self { p, a })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// p - a, the mirror base of the summand.
    pub fn complement(&self) -> BigInt {
        BigInt::from(self.p) - &self.a
    }

    /// The same series with a replaced by p - a.
    pub fn mirrored(&self) -> SeriesParams {
        SeriesParams {
            p: self.p,
            a: self.complement(),
        }
    }
}

/// One term r_k of the series, in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesTerm {
    pub k: u64,
    pub value: BigRational,
}

/// One prefix sum s_n of the series, in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixSum {
    pub n: u64,
    pub value: BigRational,
}

pub(crate) fn int_pow(base: &BigInt, e: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut sq = base.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

fn int_pow_table(base: &BigInt, up_to: u64) -> Vec<BigInt> {
    let mut table = Vec::with_capacity(up_to as usize + 1);
    table.push(BigInt::one());
    for i in 1..=up_to as usize {
        let next = &table[i - 1] * base;
        table.push(next);
    }
    table
}

fn rat_pow_table(base: &BigRational, up_to: u64) -> Vec<BigRational> {
    let mut table = Vec::with_capacity(up_to as usize + 1);
    table.push(BigRational::one());
    for i in 1..=up_to as usize {
        let next = &table[i - 1] * base;
        table.push(next);
    }
    table
}

/// r_k = (a^k + (p-a)^k) * p^k / (k * (a(p-a))^k), in lowest terms.
pub fn term_r(params: &SeriesParams, k: u64) -> SeriesTerm {
    assert!(k >= 1, "term index starts at 1");
    let a_k = int_pow(params.a(), k);
    let b_k = int_pow(&params.complement(), k);
    let p_k = int_pow(&BigInt::from(params.p()), k);
    let num = (&a_k + &b_k) * p_k;
    let den = BigInt::from(k) * a_k * b_k;
    SeriesTerm {
        k,
        value: BigRational::new(num, den),
    }
}

/// Resumable stream of prefix sums s_1, s_2, ...; each step costs one term
/// construction (from cached running powers) and one rational addition.
#[derive(Debug, Clone)]
pub struct PrefixSumStream {
    a: BigInt,
    b: BigInt,
    p: BigInt,
    k: u64,
    a_pow: BigInt,
    b_pow: BigInt,
    p_pow: BigInt,
    sum: BigRational,
}

impl PrefixSumStream {
    pub fn new(params: &SeriesParams) -> Self {
        Self {
            a: params.a().clone(),
            b: params.complement(),
            p: BigInt::from(params.p()),
            k: 0,
            a_pow: BigInt::one(),
            b_pow: BigInt::one(),
            p_pow: BigInt::one(),
            sum: BigRational::zero(),
        }
    }
}

impl Iterator for PrefixSumStream {
    type Item = PrefixSum;

    fn next(&mut self) -> Option<PrefixSum> {
        self.k += 1;
        self.a_pow = &self.a_pow * &self.a;
        self.b_pow = &self.b_pow * &self.b;
        self.p_pow = &self.p_pow * &self.p;
        let num = (&self.a_pow + &self.b_pow) * &self.p_pow;
        let den = BigInt::from(self.k) * &self.a_pow * &self.b_pow;
        self.sum += BigRational::new(num, den);
        Some(PrefixSum {
            n: self.k,
            value: self.sum.clone(),
        })
    }
}

/// s_1, ..., s_{n_max}, streamed.
pub fn prefix_sums(params: &SeriesParams, n_max: u64) -> impl Iterator<Item = PrefixSum> {
    PrefixSumStream::new(params).take(n_max as usize)
}

/// (n, nu_p(s_n)) for n = 1, ..., n_max.
pub fn prefix_valuations(params: &SeriesParams, n_max: u64) -> impl Iterator<Item = (u64, i64)> {
    let p = params.p();
    prefix_sums(params, n_max).map(move |ps| {
        let nu = exact::val_p(&ps.value, p)
            .finite()
            .expect("prefix sum is nonzero");
        (ps.n, nu)
    })
}

/// C(n, k) by the multiplicative running-product recurrence; every division
/// along the way is exact.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// C(n, 0), ..., C(n, n).
fn binomial_row(n: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(c.clone());
    }
    row
}

/// Both sides of the combinatorial identity
///
/// ```text
/// sum_{k=0}^{n} x^k y^{n-k} / C(n,k)
///   = (n+1) / ((x+y) (1/x + 1/y)^{n+1}) * sum_{k=1}^{n+1} (x^k + y^k)(1/x + 1/y)^k / k
/// ```
///
/// for nonzero rationals x, y with x + y != 0. The two sides are evaluated
/// independently, sharing no intermediate values, so the returned pair is a
/// genuine two-route check.
pub fn mansour_sides(
    x: &BigRational,
    y: &BigRational,
    n: u64,
) -> Result<(BigRational, BigRational), Error> {
    if x.is_zero() || y.is_zero() || (x + y).is_zero() {
        return Err(Error::MansourDomain);
    }

    let lhs = {
        let row = binomial_row(n);
        let x_pows = rat_pow_table(x, n);
        let y_pows = rat_pow_table(y, n);
        let mut acc = BigRational::zero();
        for k in 0..=n as usize {
            acc += &x_pows[k] * &y_pows[n as usize - k] / BigRational::from_integer(row[k].clone());
        }
        acc
    };

    let rhs = {
        let s = x.recip() + y.recip();
        let s_pows = rat_pow_table(&s, n + 1);
        let x_pows = rat_pow_table(x, n + 1);
        let y_pows = rat_pow_table(y, n + 1);
        let mut acc = BigRational::zero();
        for k in 1..=n as usize + 1 {
            acc +=
                (&x_pows[k] + &y_pows[k]) * &s_pows[k] / BigRational::from_integer(BigInt::from(k));
        }
        BigRational::from_integer(BigInt::from(n + 1)) / ((x + y) * &s_pows[n as usize + 1]) * acc
    };

    Ok((lhs, rhs))
}

/// Checks lcm{C(n,0), ..., C(n,n)} * (n+1) == lcm(1, ..., n+1).
pub fn verify_lcm_binom(n: u64) -> bool {
    let mut c = BigInt::one();
    let mut l = BigInt::one();
    for k in 0..n {
        c = c * BigInt::from(n - k) / BigInt::from(k + 1);
        l = l.lcm(&c);
    }
    l * BigInt::from(n + 1) == lcm_upto(n + 1)
}

/// Right side of the rearranged identity
///
/// ```text
/// s_n = p^{n+1} / (n (a(p-a))^n) * sum_{k=0}^{n-1} a^k (p-a)^{n-1-k} / C(n-1,k)
/// ```
///
/// The contract is exact equality with the streamed prefix sum at index n.
pub fn identity11_rhs(params: &SeriesParams, n: u64) -> BigRational {
    assert!(n >= 1);
    let a = params.a();
    let b = params.complement();
    let row = binomial_row(n - 1);
    let a_pows = int_pow_table(a, n - 1);
    let b_pows = int_pow_table(&b, n - 1);
    let mut acc = BigRational::zero();
    for k in 0..=(n - 1) as usize {
        acc += BigRational::new(&a_pows[k] * &b_pows[(n - 1) as usize - k], row[k].clone());
    }
    let p_pow = int_pow(&BigInt::from(params.p()), n + 1);
    let scale = BigRational::new(p_pow, BigInt::from(n) * int_pow(&(a * &b), n));
    scale * acc
}

/// The integer-coefficient clearing of R_n(X) = sum_{k=1}^{n} (1/a^k + 1/(X-a)^k) X^k / k
/// against a^n (X-a)^n lcm(1..n):
///
/// ```text
/// P_n(X) = lcm(1..n) * sum_{k=1}^{n} (1/k) [a^{n-k}(X-a)^n + a^n(X-a)^{n-k}] X^k
/// ```
///
/// so that P_n(X) = R_n(X) * a^n (X-a)^n * lcm(1..n) identically. The order
/// of vanishing of P_n at 0 witnesses the multiplicity of 0 in R_n.
pub fn clearing_polynomial(a: &BigInt, n: u64) -> IntPolynomial {
    assert!(!a.is_zero(), "a must be nonzero");
    assert!(n >= 1);
    let l = lcm_upto(n);
    let lin = IntPolynomial::x_minus(a);
    let mut xa_pows = Vec::with_capacity(n as usize + 1);
    xa_pows.push(IntPolynomial::constant(BigInt::one()));
    for j in 1..=n as usize {
        let next = &xa_pows[j - 1] * &lin;
        xa_pows.push(next);
    }
    let a_pows = int_pow_table(a, n);
    let mut acc = IntPolynomial::zero();
    for k in 1..=n {
        let c = &l / BigInt::from(k); // exact: k divides lcm(1..n)
        let t1 = xa_pows[n as usize].scaled(&(&c * &a_pows[(n - k) as usize]));
        let t2 = xa_pows[(n - k) as usize].scaled(&(&c * &a_pows[n as usize]));
        acc = &acc + &(&t1 + &t2).shifted(k as usize);
    }
    acc
}
