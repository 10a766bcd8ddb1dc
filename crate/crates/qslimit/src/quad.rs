//! Composite Gauss-Legendre quadrature with adaptive panel bisection.
//!
//! Panels are refined worst-first (by an error estimate obtained from
//! comparing a panel against its two halves) until the summed estimate
//! drops below the requested tolerance. Refinement order is deterministic,
//! so results are bit-stable across runs.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::LazyLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Compute nodes as Legendre roots by Newton iteration from the
    /// Chebyshev initial guess; weights via `2 / ((1-x^2) P_n'(x)^2)`.
    pub fn new(order: usize) -> Self {
        assert!(order >= 2);
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_pair(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_pair(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Integrate `f` over `[a, b]` with a single panel.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, f: &mut F) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(c + h * x);
        }
        acc * h
    }

    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(
        &self,
        a: f64,
        b: f64,
        f: &mut F,
    ) -> Complex64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(c + h * x) * *w;
        }
        acc * h
    }
}

// (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

static GL8: LazyLock<GaussLegendre> = LazyLock::new(|| GaussLegendre::new(8));
static GL16: LazyLock<GaussLegendre> = LazyLock::new(|| GaussLegendre::new(16));
static GL32: LazyLock<GaussLegendre> = LazyLock::new(|| GaussLegendre::new(32));
static GL64: LazyLock<GaussLegendre> = LazyLock::new(|| GaussLegendre::new(64));

pub fn gl8() -> &'static GaussLegendre {
    &GL8
}
pub fn gl16() -> &'static GaussLegendre {
    &GL16
}
pub fn gl32() -> &'static GaussLegendre {
    &GL32
}
pub fn gl64() -> &'static GaussLegendre {
    &GL64
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    /// Summed panel error estimate (upper-bound flavored, not certified).
    pub error: f64,
    pub panels: usize,
}

#[derive(Debug)]
struct Seg {
    err: f64,
    a: f64,
    b: f64,
    value: f64,
    value_im: f64,
}

impl PartialEq for Seg {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.a == other.a
    }
}
impl Eq for Seg {}
impl PartialOrd for Seg {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Seg {
    fn cmp(&self, other: &Self) -> Ordering {
        // worst error first; break ties by left endpoint for determinism
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Adaptive Gauss-Legendre integration of a real integrand over `[a, b]`.
///
/// Order-32 panels, bisected worst-first until the summed error estimate is
/// below `max(tol_abs, tol_rel * |integral|)`. `knots` may supply interior
/// split points known in advance (singularities, kinks); endpoints are
/// implied. Errors out if `max_panels` is exhausted first.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol_abs: f64,
    tol_rel: f64,
    max_panels: usize,
    knots: &[f64],
) -> Result<QuadResult> {
    let gl = gl32();
    let mut heap = BinaryHeap::new();
    let mut edges = vec![a];
    edges.extend(knots.iter().copied().filter(|x| *x > a && *x < b));
    edges.push(b);
    edges.sort_by(f64::total_cmp);
    for w in edges.windows(2) {
        let value = gl.integrate(w[0], w[1], &mut f);
        heap.push(Seg {
            err: f64::INFINITY,
            a: w[0],
            b: w[1],
            value,
            value_im: 0.0,
        });
    }
    let mut panels = heap.len();
    loop {
        let total: f64 = heap.iter().map(|s| s.value).sum();
        let err: f64 = heap.iter().map(|s| if s.err.is_finite() { s.err } else { 0.0 }).sum();
        let any_unrefined = heap.iter().any(|s| !s.err.is_finite());
        if !any_unrefined && err <= tol_abs.max(tol_rel * total.abs()) {
            return Ok(QuadResult {
                value: total,
                error: err,
                panels,
            });
        }
        if panels >= max_panels {
            return Err(Error::Resource(format!(
                "quadrature used {panels} panels without reaching tolerance \
                 (estimate {err:.3e})"
            )));
        }
        let seg = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (seg.a + seg.b);
        let left = gl.integrate(seg.a, mid, &mut f);
        let right = gl.integrate(mid, seg.b, &mut f);
        let delta = (left + right - seg.value).abs();
        heap.push(Seg {
            err: 0.5 * delta,
            a: seg.a,
            b: mid,
            value: left,
            value_im: 0.0,
        });
        heap.push(Seg {
            err: 0.5 * delta,
            a: mid,
            b: seg.b,
            value: right,
            value_im: 0.0,
        });
        panels += 1;
    }
}

/// Adaptive integration of a complex integrand (shared panel structure for
/// real and imaginary parts; the error estimate uses the complex modulus).
pub fn integrate_complex<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    tol_abs: f64,
    max_panels: usize,
    knots: &[f64],
) -> Result<(Complex64, f64)> {
    let gl = gl32();
    let mut heap = BinaryHeap::new();
    let mut edges = vec![a];
    edges.extend(knots.iter().copied().filter(|x| *x > a && *x < b));
    edges.push(b);
    edges.sort_by(f64::total_cmp);
    for w in edges.windows(2) {
        let v = gl.integrate_complex(w[0], w[1], &mut f);
        heap.push(Seg {
            err: f64::INFINITY,
            a: w[0],
            b: w[1],
            value: v.re,
            value_im: v.im,
        });
    }
    let mut panels = heap.len();
    loop {
        let total = heap
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, s| {
                acc + Complex64::new(s.value, s.value_im)
            });
        let err: f64 = heap.iter().map(|s| if s.err.is_finite() { s.err } else { 0.0 }).sum();
        let any_unrefined = heap.iter().any(|s| !s.err.is_finite());
        if !any_unrefined && err <= tol_abs {
            return Ok((total, err));
        }
        if panels >= max_panels {
            return Err(Error::Resource(format!(
                "complex quadrature used {panels} panels without reaching tolerance \
                 (estimate {err:.3e})"
            )));
        }
        let seg = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (seg.a + seg.b);
        let left = gl.integrate_complex(seg.a, mid, &mut f);
        let right = gl.integrate_complex(mid, seg.b, &mut f);
        let delta = (left + right - Complex64::new(seg.value, seg.value_im)).norm();
        heap.push(Seg {
            err: 0.5 * delta,
            a: seg.a,
            b: mid,
            value: left.re,
            value_im: left.im,
        });
        heap.push(Seg {
            err: 0.5 * delta,
            a: mid,
            b: seg.b,
            value: right.re,
            value_im: right.im,
        });
        panels += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::Constants;
    use crate::cost::toll_unchecked;
    use approx::assert_abs_diff_eq;

    #[test]
    fn nodes_symmetric_weights_sum_to_two() {
        for order in [8usize, 16, 32, 64] {
            let gl = GaussLegendre::new(order);
            let wsum: f64 = gl.weights.iter().sum();
            assert_abs_diff_eq!(wsum, 2.0, epsilon = 1e-13);
            for i in 0..order {
                assert_abs_diff_eq!(gl.nodes[i], -gl.nodes[order - 1 - i], epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn single_panel_exact_for_high_degree_polynomials() {
        // order-32 GL is exact for degree <= 63
        let gl = gl32();
        let v = gl.integrate(0.0, 1.0, &mut |x: f64| 64.0 * x.powi(63));
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn adaptive_handles_endpoint_singular_derivative() {
        // int_0^1 sqrt(x) dx = 2/3, infinite derivative at zero
        let r = integrate(|x: f64| x.sqrt(), 0.0, 1.0, 1e-12, 0.0, 2000, &[]).unwrap();
        assert_abs_diff_eq!(r.value, 2.0 / 3.0, epsilon = 1e-11);
    }

    #[test]
    fn toll_moments_match_independent_values() {
        // E g(U) = 0 and E g(U)^2 = sigma2/3; the second value is also
        // cross-checked against a blind composite-Simpson evaluation.
        let c = Constants::get();
        let m1 = integrate(toll_unchecked, 0.0, 1.0, 1e-13, 0.0, 4000, &[0.5]).unwrap();
        assert_abs_diff_eq!(m1.value, 0.0, epsilon = 1e-12);
        let m2 = integrate(|u| toll_unchecked(u).powi(2), 0.0, 1.0, 1e-13, 0.0, 4000, &[0.5])
            .unwrap();
        assert_abs_diff_eq!(m2.value, c.sigma2 / 3.0, epsilon = 1e-12);

        // Simpson oracle with 2^20 panels on [eps, 1-eps]. The toll equals 1
        // at both endpoints, so each trimmed sliver still carries mass
        // eps + O(eps^2 ln eps); restore the two slivers to first order.
        let eps = 1e-9;
        let n = 1 << 20;
        let h = (1.0 - 2.0 * eps) / n as f64;
        let mut acc = 2.0 * eps;
        for i in 0..n {
            let a = eps + i as f64 * h;
            let fa = toll_unchecked(a).powi(2);
            let fm = toll_unchecked(a + 0.5 * h).powi(2);
            let fb = toll_unchecked(a + h).powi(2);
            acc += h / 6.0 * (fa + 4.0 * fm + fb);
        }
        assert_abs_diff_eq!(m2.value, acc, epsilon = 1e-10);
    }

    #[test]
    fn complex_oscillatory_integral() {
        // int_0^1 exp(i w x) dx = (exp(iw) - 1) / (iw)
        let w = 200.0;
        let (v, _) = integrate_complex(
            |x| Complex64::new(0.0, w * x).exp(),
            0.0,
            1.0,
            1e-11,
            4000,
            &[],
        )
        .unwrap();
        let exact = (Complex64::new(0.0, w).exp() - 1.0) / Complex64::new(0.0, w);
        assert!((v - exact).norm() < 1e-10);
    }

    #[test]
    fn panel_budget_is_enforced() {
        let r = integrate(|x: f64| (1e6 * x).sin().abs(), 0.0, 1.0, 1e-14, 0.0, 64, &[]);
        assert!(matches!(r, Err(Error::Resource(_))));
    }
}
