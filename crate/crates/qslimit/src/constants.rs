//! Distribution-level constants.
//!
//! The limit law `F` of normalized Quicksort cost has
//!
//! * variance `sigma2 = 7 - 2*pi^2/3 ≈ 0.4203`,
//! * toll-function infimum `-eta` with `eta = 2*ln(2) - 1 ≈ 0.3863`,
//! * Wasserstein-2 contraction factor `rho = sqrt(2/3)` per iteration step.
//!
//! Two further constants are roots of transcendental equations and are
//! computed once by bisection:
//!
//! * `l0`: the largest root of `exp(L) = 6 L^2`, the switch point of the
//!   moment-generating-function constant `K_L`,
//! * `p0`: the root of `(2/(p+1))^(1/p) = sqrt(2/3)` in `(5, 8)`, the order
//!   at which the best-known `d_p` contraction rate changes regime.

use std::f64::consts::PI;
use std::sync::LazyLock;

/// Precomputed constants; obtain via [`Constants::get`].
#[derive(Debug, Clone, Copy)]
pub struct Constants {
    /// Variance of the limit law: `7 - 2*pi^2/3`.
    pub sigma2: f64,
    /// `2 ln 2 - 1`; the toll function ranges over `[-eta, 1]`.
    pub eta: f64,
    /// `sqrt(2/3)`, the per-step `d_2` contraction factor.
    pub rho: f64,
    /// Largest root of `exp(L) = 6 L^2` (near 5.018).
    pub l0: f64,
    /// Root of `(2/(p+1))^(1/p) = sqrt(2/3)` in `(5, 8)` (near 6.557).
    pub p0: f64,
}

static CONSTANTS: LazyLock<Constants> = LazyLock::new(|| {
    let l0 = bisect(|l| l.exp() - 6.0 * l * l, 4.0, 7.0, 1e-13);
    let p0 = bisect(
        |p| (2.0 / (p + 1.0)).powf(1.0 / p) - (2f64 / 3.0).sqrt(),
        5.0,
        8.0,
        1e-13,
    );
    Constants {
        sigma2: 7.0 - 2.0 * PI * PI / 3.0,
        eta: 2.0 * std::f64::consts::LN_2 - 1.0,
        rho: (2f64 / 3.0).sqrt(),
        l0,
        p0,
    }
});

impl Constants {
    pub fn get() -> &'static Constants {
        &CONSTANTS
    }

    /// Standard deviation of the limit law.
    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }
}

/// Bisection on a sign-changing continuous function.
///
/// `f(lo)` and `f(hi)` must have opposite signs. Runs until the bracket
/// width drops below `tol` (or 200 iterations, enough for any f64 bracket).
pub fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    let flo = f(lo);
    assert!(
        flo * f(hi) <= 0.0,
        "bisect: no sign change on [{lo}, {hi}]"
    );
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo < tol || mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
