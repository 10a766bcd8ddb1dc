//! Moments of the limit law and the action of the fixed-point map on
//! moment vectors.
//!
//! For a zero-mean law W with moments `m_j = E W^j`, one step of the map
//! `W -> U W + (1-U) W' + g(U)` has moments
//!
//! ```text
//! E (W+)^m = sum_{j+k+l=m} m!/(j! k! l!) I(j,k,l) m_j m_k,
//! I(j,k,l) = int_0^1 u^j (1-u)^k g(u)^l du.
//! ```
//!
//! Because `I(m,0,0) = I(0,m,0) = 1/(m+1)`, the two terms containing the
//! unknown `m_m` can be moved to the left, which turns the fixed-point
//! condition into a triangular system: each limit moment is an explicit
//! finite sum over lower ones. No truncation is involved; the only error
//! is quadrature on the smooth mixed integrals.

use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};

use serde::{Deserialize, Serialize};

use crate::cost::{harmonic, toll_unchecked};
use crate::error::{Error, Result};
use crate::quad;
use crate::start::StartLaw;

/// Largest supported moment order (factorials stay exact in u128).
pub const MAX_ORDER: usize = 30;

/// Raw moments `values[k] = E W^k`, with `values[0] = 1`, together with
/// where the vector came from: a start-law descriptor and how many times
/// the fixed-point map has been applied to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentVector {
    pub values: Vec<f64>,
    /// start-law descriptor ("point", "normal:2", ..., or "limit")
    pub origin: String,
    /// number of map applications since the origin
    pub iteration: u32,
}

impl MomentVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::with_origin(values, "custom")
    }

    pub fn with_origin(values: Vec<f64>, origin: &str) -> Result<Self> {
        if values.is_empty() || (values[0] - 1.0).abs() > 1e-12 {
            return Err(Error::Domain("moment vector must start with E W^0 = 1".into()));
        }
        if values.len() - 1 > MAX_ORDER {
            return Err(Error::Domain(format!(
                "moment order {} exceeds supported maximum {MAX_ORDER}",
                values.len() - 1
            )));
        }
        Ok(MomentVector {
            values,
            origin: origin.to_string(),
            iteration: 0,
        })
    }

    pub fn from_start(law: &StartLaw, order: usize) -> Result<Self> {
        Self::with_origin(law.moments(order), &law.descriptor())
    }

    /// Highest moment order stored.
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn mean(&self) -> f64 {
        self.values.get(1).copied().unwrap_or(0.0)
    }

    pub fn variance(&self) -> f64 {
        self.values.get(2).copied().unwrap_or(0.0) - self.mean().powi(2)
    }
}

/// Cache of mixed integrals `I(j,k,l)`.
///
/// Exact closed forms are used where available; the rest fall through to
/// adaptive quadrature at near machine tolerance. `I(j,k,l) = I(k,j,l)`
/// by the `u -> 1-u` symmetry of `g`, so keys are stored with `j <= k`.
pub struct MixedIntegralTable {
    cache: Mutex<HashMap<(u32, u32, u32), f64>>,
}

impl Default for MixedIntegralTable {
    fn default() -> Self {
        Self::new()
    }
}

impl MixedIntegralTable {
    pub fn new() -> Self {
        MixedIntegralTable {
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn get(&self, j: u32, k: u32, l: u32) -> Result<f64> {
        let key = (j.min(k), j.max(k), l);
        if let Some(v) = self.cache.lock().unwrap().get(&key) {
            return Ok(*v);
        }
        let v = compute_mixed_integral(key.0, key.1, key.2)?;
        self.cache.lock().unwrap().insert(key, v);
        Ok(v)
    }
}

static TABLE: LazyLock<MixedIntegralTable> = LazyLock::new(MixedIntegralTable::new);

/// `I(j,k,l)` through a process-wide cache shared by every pipeline.
pub fn mixed_integral(j: u32, k: u32, l: u32) -> Result<f64> {
    TABLE.get(j, k, l)
}

/// The process-wide cache itself, for callers that loop over many orders.
pub fn shared_table() -> &'static MixedIntegralTable {
    &TABLE
}

fn compute_mixed_integral(j: u32, k: u32, l: u32) -> Result<f64> {
    if l == 0 {
        // beta integral: j! k! / (j+k+1)!
        let mut v = 1.0;
        for i in 1..=k {
            v *= i as f64 / (j + i) as f64;
        }
        return Ok(v / (j + k + 1) as f64);
    }
    if l == 1 && j == 0 {
        return Ok(toll_weighted_power(k));
    }
    let f = |u: f64| {
        u.powi(j as i32) * (1.0 - u).powi(k as i32) * toll_unchecked(u).powi(l as i32)
    };
    let r = quad::integrate(f, 0.0, 1.0, 1e-15, 1e-13, 4000, &[0.5])?;
    Ok(r.value)
}

/// `int_0^1 (1-u)^j g(u) du = int_0^1 u^j g(u) du`, in closed form:
/// the `u ln u` part integrates to `-2/(j+2)^2`, the mirrored part
/// telescopes into harmonic numbers.
fn toll_weighted_power(j: u32) -> f64 {
    let jf = j as f64;
    let h1 = harmonic((j + 1) as u64);
    let h2 = harmonic((j + 2) as u64);
    -2.0 / ((jf + 2.0) * (jf + 2.0)) + 2.0 * (-h1 / (jf + 1.0) + h2 / (jf + 2.0))
        + 1.0 / (jf + 1.0)
}

/// Exact multinomial coefficient `m! / (j! k! l!)` for `m <= MAX_ORDER`.
fn multinomial(m: u32, j: u32, k: u32, l: u32) -> f64 {
    debug_assert_eq!(j + k + l, m);
    let fact = |n: u32| -> u128 { (1..=n as u128).product::<u128>().max(1) };
    (fact(m) / (fact(j) * fact(k) * fact(l))) as f64
}

/// One step of the fixed-point map on a moment vector.
pub fn apply_s_moments(m: &MomentVector, table: &MixedIntegralTable) -> Result<MomentVector> {
    let p = m.order();
    let mut out = vec![0.0; p + 1];
    out[0] = 1.0;
    for mm in 1..=p as u32 {
        let mut acc = 0.0;
        for j in 0..=mm {
            for k in 0..=(mm - j) {
                let l = mm - j - k;
                acc += multinomial(mm, j, k, l)
                    * table.get(j, k, l)?
                    * m.values[j as usize]
                    * m.values[k as usize];
            }
        }
        out[mm as usize] = acc;
    }
    let mut next = MomentVector::with_origin(out, &m.origin)?;
    next.iteration = m.iteration + 1;
    Ok(next)
}

/// Moments of the limit law, solved exactly from the fixed-point
/// condition. `raw[1] = 0` by centering; for `m >= 2`,
///
/// ```text
/// E Y^m = (m+1)/(m-1) * sum' multinomial * I(j,k,l) * E Y^j * E Y^k
/// ```
///
/// where the primed sum omits `(j,k,l) = (m,0,0)` and `(0,m,0)`.
pub fn limit_moments(order: usize, table: &MixedIntegralTable) -> Result<MomentVector> {
    if order > MAX_ORDER {
        return Err(Error::Domain(format!(
            "moment order {order} exceeds supported maximum {MAX_ORDER}"
        )));
    }
    let mut raw = vec![0.0; order + 1];
    raw[0] = 1.0;
    if order >= 1 {
        raw[1] = 0.0;
    }
    for mm in 2..=order as u32 {
        let mut acc = 0.0;
        for j in 0..=mm {
            for k in 0..=(mm - j) {
                let l = mm - j - k;
                if l == 0 && (j == mm || k == mm) {
                    continue;
                }
                acc += multinomial(mm, j, k, l)
                    * table.get(j, k, l)?
                    * raw[j as usize]
                    * raw[k as usize];
            }
        }
        raw[mm as usize] = acc * (mm + 1) as f64 / (mm - 1) as f64;
    }
    MomentVector::with_origin(raw, "limit")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::Constants;
    use approx::assert_abs_diff_eq;

    fn quadrature_reference(j: u32, k: u32, l: u32) -> f64 {
        let f = move |u: f64| {
            u.powi(j as i32) * (1.0 - u).powi(k as i32) * toll_unchecked(u).powi(l as i32)
        };
        quad::integrate(f, 0.0, 1.0, 1e-15, 1e-13, 4000, &[0.5])
            .unwrap()
            .value
    }

    #[test]
    fn beta_closed_form_matches_quadrature() {
        let t = MixedIntegralTable::new();
        for (j, k) in [(0, 0), (1, 1), (3, 2), (5, 0), (4, 4)] {
            let exact = t.get(j, k, 0).unwrap();
            assert_abs_diff_eq!(exact, quadrature_reference(j, k, 0), epsilon = 1e-13);
        }
        assert_abs_diff_eq!(t.get(1, 1, 0).unwrap(), 1.0 / 6.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.get(3, 0, 0).unwrap(), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn harmonic_closed_form_matches_quadrature() {
        let t = MixedIntegralTable::new();
        for j in 0..=8u32 {
            assert_abs_diff_eq!(
                t.get(0, j, 1).unwrap(),
                quadrature_reference(j, 0, 1),
                epsilon = 1e-12
            );
        }
        // int g = 0 and int u g = 0 by symmetry
        assert_abs_diff_eq!(t.get(0, 0, 1).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.get(1, 0, 1).unwrap(), 0.0, epsilon = 1e-15);
        // int u^2 g = 1/36
        assert_abs_diff_eq!(t.get(2, 0, 1).unwrap(), 1.0 / 36.0, epsilon = 1e-14);
    }

    #[test]
    fn toll_power_integrals() {
        let c = Constants::get();
        let t = MixedIntegralTable::new();
        // E g(U)^2 = sigma2 / 3, and E g(U)^3 computed once by quadrature
        assert_abs_diff_eq!(t.get(0, 0, 2).unwrap(), c.sigma2 / 3.0, epsilon = 1e-13);
        assert_abs_diff_eq!(t.get(0, 0, 3).unwrap(), 0.04641126984223858, epsilon = 1e-13);
    }

    #[test]
    fn variance_recursion_from_point_mass() {
        // var_{n+1} = 2/3 var_n + sigma2/3, so var_n = sigma2 (1 - (2/3)^n)
        let c = Constants::get();
        let t = MixedIntegralTable::new();
        let mut m = MomentVector::from_start(&StartLaw::PointMassZero, 2).unwrap();
        for n in 1..=12 {
            m = apply_s_moments(&m, &t).unwrap();
            let expect = c.sigma2 * (1.0 - (2.0f64 / 3.0).powi(n));
            assert_abs_diff_eq!(m.values[2], expect, epsilon = 1e-12);
            assert_abs_diff_eq!(m.values[1], 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn third_moment_identity() {
        // E Y^3 = 2 E g^3 + 12 I(2,0,1) sigma2
        let c = Constants::get();
        let t = MixedIntegralTable::new();
        let m = limit_moments(3, &t).unwrap();
        let expect = 2.0 * t.get(0, 0, 3).unwrap() + 12.0 * (1.0 / 36.0) * c.sigma2;
        assert_abs_diff_eq!(m.values[3], expect, epsilon = 1e-13);
    }

    #[test]
    fn limit_moment_ladder() {
        // values pinned from an independent high-precision evaluation of
        // the same triangular system
        let t = MixedIntegralTable::new();
        let m = limit_moments(12, &t).unwrap();
        let expect = [
            0.4202637326070944,
            0.232910450553509,
            0.737945489676387,
            1.21898373286591,
            3.29771779470001,
            8.64824025032366,
            26.7718131513141,
            89.0312805444548,
            324.563802664184,
            1273.51554624904,
            5361.34694808497,
        ];
        for (i, e) in expect.iter().enumerate() {
            let got = m.values[i + 2];
            assert!(
                (got / e - 1.0).abs() < 1e-10,
                "E Y^{}: got {got}, want {e}",
                i + 2
            );
        }
    }

    #[test]
    fn limit_is_fixed_point_of_moment_map() {
        let t = MixedIntegralTable::new();
        let m = limit_moments(10, &t).unwrap();
        let next = apply_s_moments(&m, &t).unwrap();
        for k in 0..=10 {
            let scale = m.values[k].abs().max(1.0);
            assert!(
                (next.values[k] - m.values[k]).abs() < 1e-10 * scale,
                "moment {k} moved: {} -> {}",
                m.values[k],
                next.values[k]
            );
        }
    }

    #[test]
    fn normal_start_converges_in_moments() {
        let t = MixedIntegralTable::new();
        let limit = limit_moments(6, &t).unwrap();
        let mut m = MomentVector::from_start(&StartLaw::normal(2.0).unwrap(), 6).unwrap();
        for _ in 0..60 {
            m = apply_s_moments(&m, &t).unwrap();
        }
        for k in 2..=6 {
            let scale = limit.values[k].abs().max(1.0);
            assert!(
                (m.values[k] - limit.values[k]).abs() < 1e-8 * scale,
                "moment {k} after 60 steps: {} vs {}",
                m.values[k],
                limit.values[k]
            );
        }
    }

    #[test]
    fn order_cap_enforced() {
        let t = MixedIntegralTable::new();
        assert!(limit_moments(MAX_ORDER + 1, &t).is_err());
        assert!(MomentVector::new(vec![1.0; MAX_ORDER + 2]).is_err());
    }

    #[test]
    fn integrals_bounded_and_symmetric() {
        // |u^j (1-u)^k g^l| <= 1 on (0,1), so every I(j,k,l) lies in [-1,1];
        // swapping j and k is the substitution u -> 1-u, which fixes g
        for j in 0..=4u32 {
            for k in 0..=4u32 {
                for l in 0..=3u32 {
                    let v = mixed_integral(j, k, l).unwrap();
                    assert!(v.abs() <= 1.0, "I({j},{k},{l}) = {v}");
                    assert_abs_diff_eq!(
                        v,
                        quadrature_reference(k, j, l),
                        epsilon = 1e-12
                    );
                }
            }
        }
    }

    #[test]
    fn even_moments_are_log_convex() {
        // Cauchy-Schwarz: (E Y^m)^2 <= E Y^{m-2} E Y^{m+2} for even m, and
        // the L^p norms (E Y^{2k})^{1/2k} are nondecreasing in k
        let m = limit_moments(12, shared_table()).unwrap();
        for k in [4usize, 6, 8, 10] {
            assert!(m.values[k].powi(2) <= m.values[k - 2] * m.values[k + 2] * (1.0 + 1e-12));
        }
        let mut prev = 0.0;
        for k in (2..=12).step_by(2) {
            let norm = m.values[k].powf(1.0 / k as f64);
            assert!(norm >= prev - 1e-12, "order {k}: {norm} < {prev}");
            prev = norm;
        }
    }

    #[test]
    fn bookkeeping_tracks_origin_and_iteration() {
        let t = shared_table();
        let m0 = MomentVector::from_start(&StartLaw::PointMassZero, 4).unwrap();
        assert_eq!(m0.origin, "point");
        assert_eq!(m0.iteration, 0);
        let m2 = apply_s_moments(&apply_s_moments(&m0, t).unwrap(), t).unwrap();
        assert_eq!(m2.origin, "point");
        assert_eq!(m2.iteration, 2);
        assert_eq!(limit_moments(4, t).unwrap().origin, "limit");
    }

    #[test]
    fn json_roundtrip() {
        let t = shared_table();
        let mut m = MomentVector::from_start(&StartLaw::uniform(-1.0, 1.0).unwrap(), 6).unwrap();
        m = apply_s_moments(&m, t).unwrap();
        let js = serde_json::to_string(&m).unwrap();
        let back: MomentVector = serde_json::from_str(&js).unwrap();
        assert_eq!(m, back);
    }
}
