//! Seeded sample generators for the randomized checks. Callers own the RNG,
//! so runs are reproducible from the seed they echo.

use num::{BigInt, BigRational, One, Zero};
use rand::Rng;

/// Nonzero rational with |numerator| <= max_num and 1 <= denominator <= max_den
/// before reduction.
pub fn nonzero_rational<R: Rng + ?Sized>(rng: &mut R, max_num: i64, max_den: i64) -> BigRational {
    loop {
        let num = rng.gen_range(-max_num..=max_num);
        if num == 0 {
            continue;
        }
        let den = rng.gen_range(1..=max_den);
        return BigRational::new(BigInt::from(num), BigInt::from(den));
    }
}

/// (x, y, n) with x, y nonzero, x + y != 0, and n <= n_max.
pub fn mansour_sample<R: Rng + ?Sized>(
    rng: &mut R,
    max_num: i64,
    max_den: i64,
    n_max: u64,
) -> (BigRational, BigRational, u64) {
    loop {
        let x = nonzero_rational(rng, max_num, max_den);
        let y = nonzero_rational(rng, max_num, max_den);
        if !(&x + &y).is_zero() {
            return (x, y, rng.gen_range(0..=n_max));
        }
    }
}

/// A rational congruent to 1 mod p: u = 1 + p * num/den with p not dividing den.
pub fn unit_one_mod_p<R: Rng + ?Sized>(
    rng: &mut R,
    p: u64,
    max_num: i64,
    max_den: i64,
) -> BigRational {
    let num = rng.gen_range(-max_num..=max_num);
    let den = loop {
        let d = rng.gen_range(1..=max_den);
        if !(d as u64).is_multiple_of(p) {
            break d;
        }
    };
    BigRational::one() + BigRational::new(BigInt::from(p) * BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{val_p, Valuation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn samples_respect_their_constraints() {
        let mut rng = ChaCha20Rng::seed_from_u64(42);
        for _ in 0..200 {
            let r = nonzero_rational(&mut rng, 50, 50);
            assert!(!r.is_zero());

            let (x, y, n) = mansour_sample(&mut rng, 50, 50, 30);
            assert!(!x.is_zero() && !y.is_zero() && !(&x + &y).is_zero());
            assert!(n <= 30);

            for p in [2u64, 3, 5] {
                let u = unit_one_mod_p(&mut rng, p, 50, 50);
                let v = val_p(&(&u - BigRational::one()), p);
                assert!(v >= Valuation::Finite(1), "u = {u}, p = {p}");
            }
        }
    }

    #[test]
    fn same_seed_same_samples() {
        let mut a = ChaCha20Rng::seed_from_u64(7);
        let mut b = ChaCha20Rng::seed_from_u64(7);
        for _ in 0..50 {
            assert_eq!(
                mansour_sample(&mut a, 50, 50, 30),
                mansour_sample(&mut b, 50, 50, 30)
            );
        }
    }
}
