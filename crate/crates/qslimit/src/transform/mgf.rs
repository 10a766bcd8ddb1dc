//! Moment-generating-function representation of the recursion step.
//!
//! One application maps `psi` to
//!
//! ```text
//!   psi+(lambda) = int_0^1 psi(u lambda) psi((1-u) lambda) e^{lambda g(u)} du
//! ```
//!
//! per grid point. Both arguments `u lambda` and `(1-u) lambda` lie
//! between 0 and `lambda`, so the map stays inside any grid containing 0.
//! Interpolation happens on the logarithm, which keeps intermediate
//! values positive and tames the near-exponential growth in `lambda`.

use rayon::prelude::*;

use crate::cost::toll_unchecked;
use crate::error::{Error, Result};
use crate::grid::{GridFunction, GridKind};
use crate::quad::integrate;

/// Relative quadrature budget per output point.
const POINT_TOL: f64 = 1e-10;

/// One moment-generating-function step on the input grid.
pub fn apply_s_mgf(psi: &GridFunction) -> Result<GridFunction> {
    if psi.kind != GridKind::Mgf {
        return Err(Error::Domain("apply_s_mgf: expected an mgf grid".into()));
    }
    let n = psi.len();
    let lo = psi.lo;
    let h = psi.spacing();
    let lnv: Vec<f64> = psi.values_real().iter().map(|v| v.ln()).collect();
    let eval = |s: f64| cubic4_log(&lnv, (s - lo) / h);

    let out: Result<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let lambda = lo + j as f64 * h;
            if lambda.abs() < 1e-14 {
                return Ok(1.0);
            }
            let f = |u: f64| eval(u * lambda) * eval((1.0 - u) * lambda)
                * (lambda * toll_unchecked(u)).exp();
            let r = integrate(f, 0.0, 1.0, 0.0, POINT_TOL, 400, &[0.25, 0.5, 0.75])?;
            Ok(r.value)
        })
        .collect();
    let out = out?;

    // budget recurrence: two interpolated factors, each off by the input
    // budget, plus interpolation and quadrature of this step, all scaled
    // by the output magnitude
    let interp_slack = max_fourth_difference(&lnv) * (3.0 / 128.0);
    let sup = out.iter().copied().fold(1.0, f64::max);
    let tol = (2.0 * psi.tol_mass + interp_slack + POINT_TOL) * sup;
    GridFunction::mgf(psi.lo, psi.hi, out, tol)
}

/// 4-point Lagrange interpolation of log-values at fractional index,
/// exponentiated; stencil shifted inward near the ends.
fn cubic4_log(lnv: &[f64], idx: f64) -> f64 {
    let n = lnv.len();
    let p = idx.clamp(0.0, (n - 1) as f64);
    let cell = (p.floor() as usize).min(n - 2);
    let i0 = cell.saturating_sub(1).min(n - 4);
    let s = p - i0 as f64;
    let w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    let w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    let w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    let w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    (lnv[i0] * w0 + lnv[i0 + 1] * w1 + lnv[i0 + 2] * w2 + lnv[i0 + 3] * w3).exp()
}

fn max_fourth_difference(v: &[f64]) -> f64 {
    if v.len() < 5 {
        return 0.0;
    }
    (2..v.len() - 2)
        .map(|j| (v[j - 2] - 4.0 * v[j - 1] + 6.0 * v[j] - 4.0 * v[j + 1] + v[j + 2]).abs())
        .fold(0.0, f64::max)
}
