//! The toll function and exact mean cost of Quicksort.
//!
//! Sorting `n` keys costs `n - 1` comparisons at the root plus the costs of
//! the two subfiles split by a uniform pivot. Centering and scaling by `n`
//! turns that recurrence into a fixed-point equation whose additive term is
//! the toll function
//!
//! ```text
//! g(u) = 2u ln u + 2(1-u) ln(1-u) + 1 ,      u in [0, 1],
//! ```
//!
//! with `g(0) = g(1) = 1`, minimum `g(1/2) = -eta`, `E g(U) = 0` and
//! `E g(U)^2 = sigma2 / 3` for uniform `U`.
//!
//! The exact mean cost is `mu_n = 2(n+1) H_n - 4n` with `H_n` the n-th
//! harmonic number. Harmonic numbers are computed as exact big rationals
//! (binary splitting) up to `n = 10^6` so that `mu_n` carries no summation
//! error; beyond that an asymptotic expansion is used.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest `n` for which harmonic numbers use exact rational arithmetic.
pub const HARMONIC_EXACT_MAX: u64 = 1_000_000;

/// Euler-Mascheroni constant, used by the asymptotic harmonic expansion.
const EULER_GAMMA: f64 = 0.5772156649015329;

/// The toll function `g(u) = 2u ln u + 2(1-u) ln(1-u) + 1`.
///
/// Returns an error outside `[0, 1]`; the endpoint values are the limits
/// (both equal to 1).
pub fn toll(u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::Domain(format!("toll: u = {u} outside [0, 1]")));
    }
    Ok(toll_unchecked(u))
}

/// `toll` without the domain check, for hot loops that guarantee `u in [0,1]`.
#[inline]
pub fn toll_unchecked(u: f64) -> f64 {
    let a = if u > 0.0 { 2.0 * u * u.ln() } else { 0.0 };
    let v = 1.0 - u;
    let b = if v > 0.0 { 2.0 * v * v.ln() } else { 0.0 };
    a + b + 1.0
}

/// Derivative `g'(u) = 2 ln(u / (1-u))`, diverging at both endpoints.
pub fn toll_prime(u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) || u == 0.0 || u == 1.0 {
        return Err(Error::Domain(format!("toll_prime: u = {u} outside (0, 1)")));
    }
    Ok(2.0 * (u / (1.0 - u)).ln())
}

/// Antiderivative of the toll function with `G(0) = 1/2`, so
/// `int_a^b g = G(b) - G(a)`. Used for exact partial means of `g(U)`.
pub fn toll_antiderivative(u: f64) -> f64 {
    let a = if u > 0.0 { u * u * u.ln() } else { 0.0 };
    let v = 1.0 - u;
    let b = if v > 0.0 { -v * v * v.ln() } else { 0.0 };
    a - 0.5 * u * u + b + 0.5 * v * v + u
}

/// Exact harmonic number `H_n` as an unreduced big-integer fraction,
/// computed by binary splitting. `harmonic_rational(0) = 0/1`.
pub fn harmonic_rational(n: u64) -> (BigInt, BigInt) {
    if n == 0 {
        return (BigInt::from(0), BigInt::one());
    }
    split_sum(0, n)
}

// sum_{k=a+1}^{b} 1/k as an unreduced fraction.
fn split_sum(a: u64, b: u64) -> (BigInt, BigInt) {
    if b - a == 1 {
        (BigInt::one(), BigInt::from(b))
    } else {
        let m = a + (b - a) / 2;
        let (p1, q1) = split_sum(a, m);
        let (p2, q2) = split_sum(m, b);
        (&p1 * &q2 + &p2 * &q1, q1 * q2)
    }
}

/// Convert a big-integer fraction to the nearest f64, via a 64-bit-scaled
/// quotient (immune to overflow of numerator or denominator separately).
pub fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let negative = num.is_negative() != den.is_negative();
    let num = num.abs();
    let den = den.abs();
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let scaled = if shift >= 0 {
        num << shift as u64
    } else {
        num >> (-shift) as u64
    };
    let q = (scaled / den).to_f64().expect("64-bit quotient");
    let v = q * 2f64.powi(-shift as i32);
    if negative {
        -v
    } else {
        v
    }
}

/// Harmonic number `H_n` as f64: exact rational arithmetic up to
/// [`HARMONIC_EXACT_MAX`], asymptotic expansion (error `O(n^-6)`) beyond.
pub fn harmonic(n: u64) -> f64 {
    if n <= HARMONIC_EXACT_MAX {
        let (p, q) = harmonic_rational(n);
        ratio_to_f64(&p, &q)
    } else {
        let x = n as f64;
        x.ln() + EULER_GAMMA + 1.0 / (2.0 * x) - 1.0 / (12.0 * x * x)
            + 1.0 / (120.0 * x.powi(4))
    }
}

/// Exact mean comparison count `mu_n = 2(n+1) H_n - 4n` of Quicksort on
/// `n` distinct keys. `mu_0 = mu_1 = 0`, `mu_2 = 1`, `mu_3 = 8/3`.
pub fn quicksort_mean(n: u64) -> f64 {
    if n <= HARMONIC_EXACT_MAX {
        // 2(n+1) p/q - 4n, assembled in exact integer arithmetic
        let (p, q) = harmonic_rational(n);
        let num = BigInt::from(2 * (n + 1)) * p - BigInt::from(4 * n) * &q;
        ratio_to_f64(&num, &q)
    } else {
        2.0 * (n as f64 + 1.0) * harmonic(n) - 4.0 * n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use crate::constants::Constants;

    #[test]
    fn toll_domain_and_endpoints() {
        assert!(toll(-0.1).is_err());
        assert!(toll(1.5).is_err());
        assert_abs_diff_eq!(toll(0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(toll(1.0).unwrap(), 1.0);
        let c = Constants::get();
        assert_abs_diff_eq!(toll(0.5).unwrap(), -c.eta, epsilon = 1e-15);
    }

    #[test]
    fn toll_symmetric_and_bounded() {
        let c = Constants::get();
        for i in 1..200 {
            let u = i as f64 / 200.0;
            let g = toll(u).unwrap();
            assert_abs_diff_eq!(g, toll(1.0 - u).unwrap(), epsilon = 1e-14);
            assert!(g >= -c.eta - 1e-15 && g <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn toll_antiderivative_matches_derivative() {
        // finite-difference check of G' = g away from endpoints
        for &u in &[0.12, 0.37, 0.5, 0.81, 0.97] {
            let h = 1e-6;
            let fd = (toll_antiderivative(u + h) - toll_antiderivative(u - h)) / (2.0 * h);
            assert_abs_diff_eq!(fd, toll(u).unwrap(), epsilon = 1e-8);
        }
        // int_0^1 g = 0
        assert_abs_diff_eq!(
            toll_antiderivative(1.0) - toll_antiderivative(0.0),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn harmonic_small_values_exact() {
        let (p, q) = harmonic_rational(3);
        // H_3 = 11/6 (unreduced fraction must still equal it)
        assert_eq!(p.clone() * 6, BigInt::from(11) * q.clone());
        assert_abs_diff_eq!(harmonic(1), 1.0);
        assert_abs_diff_eq!(harmonic(2), 1.5);
        assert_abs_diff_eq!(harmonic(3), 11.0 / 6.0, epsilon = 1e-16);
    }

    #[test]
    fn harmonic_matches_incremental_sum() {
        let mut acc = 0.0;
        for k in 1..=1000u64 {
            acc += 1.0 / k as f64;
        }
        assert_abs_diff_eq!(harmonic(1000), acc, epsilon = 1e-12);
    }

    #[test]
    fn harmonic_asymptotic_continuous_at_threshold() {
        // compare exact and asymptotic formulas where both are accurate
        let n = 100_000u64;
        let x = n as f64;
        let asym = x.ln() + EULER_GAMMA + 1.0 / (2.0 * x) - 1.0 / (12.0 * x * x);
        assert_abs_diff_eq!(harmonic(n), asym, epsilon = 1e-12);
    }

    #[test]
    fn mean_cost_small_cases() {
        // oracle: exact recurrence mu_n = n - 1 + (2/n) sum_{j<n} mu_j in rationals
        let mut mu = vec![(BigInt::from(0), BigInt::one())]; // mu_0
        let mut sum = (BigInt::from(0), BigInt::one()); // running sum of mu_j
        for n in 1..=30u64 {
            // sum += mu_{n-1}
            let (lp, lq) = mu.last().unwrap().clone();
            sum = (&sum.0 * &lq + lp * &sum.1, &sum.1 * lq);
            // mu_n = (n-1) + 2*sum/n
            let p = BigInt::from(n - 1) * &sum.1 * BigInt::from(n) + BigInt::from(2) * &sum.0;
            let q = &sum.1 * BigInt::from(n);
            mu.push((p, q));
        }
        for n in 0..=30u64 {
            let (p, q) = &mu[n as usize];
            assert_abs_diff_eq!(
                quicksort_mean(n),
                ratio_to_f64(p, q),
                epsilon = 1e-12 * (1.0 + quicksort_mean(n))
            );
        }
        assert_abs_diff_eq!(quicksort_mean(0), 0.0);
        assert_abs_diff_eq!(quicksort_mean(2), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(quicksort_mean(3), 8.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn ratio_to_f64_handles_huge_fractions() {
        // (10^400 + 1) / 10^400 ~ 1.0: both parts overflow f64 alone
        let ten = BigInt::from(10);
        let den = ten.pow(400);
        let num = &den + BigInt::one();
        assert_abs_diff_eq!(ratio_to_f64(&num, &den), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ratio_to_f64(&(-num), &den), -1.0, epsilon = 1e-15);
    }
}
