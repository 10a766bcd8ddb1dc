//! The distributional fixed-point map and its iteration.
//!
//! The recursion acts on the law of a centered cost `V` through
//! `V -> U V + (1 - U) V' + g(U)` with an independent copy `V'`, a
//! uniform split `U` and the toll `g`. Each submodule carries one
//! representation of that map: [`density`] convolves grids, [`cf`]
//! multiplies characteristic functions (and inverts them back), [`mgf`]
//! multiplies moment generating functions. [`iterate`] drives any subset
//! of the three from a common start law and bundles the result in an
//! [`IterationState`] that serializes to a directory.

pub mod cf;
pub mod density;
mod fft;
pub mod mgf;

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridFunction, GridKind};
use crate::start::StartLaw;

pub use cf::{apply_s_cf, invert_cf};
pub use density::{apply_s_density, density_of_toll};
pub use mgf::apply_s_mgf;

/// Which representations [`iterate`] should carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Density,
    Cf,
    Mgf,
}

impl Representation {
    fn key(self) -> &'static str {
        match self {
            Representation::Density => "density",
            Representation::Cf => "cf",
            Representation::Mgf => "mgf",
        }
    }
}

impl FromStr for Representation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "density" => Ok(Representation::Density),
            "cf" => Ok(Representation::Cf),
            "mgf" => Ok(Representation::Mgf),
            other => Err(Error::Parse(format!(
                "unknown representation {other:?}; expected density, cf or mgf"
            ))),
        }
    }
}

impl std::fmt::Display for Representation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.key())
    }
}

/// Grid parameters for the three representations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterateConfig {
    /// density grid `(lo, hi, points)`
    pub density_grid: (f64, f64, usize),
    /// cf grid `(t_max, points)` on `[0, t_max]`
    pub cf_grid: (f64, usize),
    /// mgf grid `(lo, hi, points)`, containing 0 as a sample
    pub mgf_grid: (f64, f64, usize),
}

impl Default for IterateConfig {
    fn default() -> Self {
        IterateConfig {
            density_grid: (-3.0, 12.0, 4096),
            cf_grid: (2000.0, 65536),
            mgf_grid: (-4.0, 4.0, 161),
        }
    }
}

/// The result of `n` applications of the map to a start law.
#[derive(Debug, Clone)]
pub struct IterationState {
    pub n: u32,
    pub start: StartLaw,
    pub density: Option<GridFunction>,
    pub cf: Option<GridFunction>,
    pub mgf: Option<GridFunction>,
}

/// Apply the map `n` times to `start`, carrying `reps`.
///
/// The point mass at zero has no density, so the density pipeline enters
/// at `n = 1` through the exact one-step law [`density_of_toll`];
/// requesting its density at `n = 0` is an error.
pub fn iterate(
    start: &StartLaw,
    n: u32,
    reps: &[Representation],
    cfg: &IterateConfig,
) -> Result<IterationState> {
    if reps.is_empty() {
        return Err(Error::Domain("no representations requested".into()));
    }
    let mut state = IterationState {
        n,
        start: start.clone(),
        density: None,
        cf: None,
        mgf: None,
    };
    if reps.contains(&Representation::Density) {
        let (lo, hi, pts) = cfg.density_grid;
        let (mut d, done) = match start {
            StartLaw::PointMassZero => {
                if n == 0 {
                    return Err(Error::Domain(
                        "the point mass at zero has no density at n = 0; request \
                         n >= 1 or drop the density representation"
                            .into(),
                    ));
                }
                (density_of_toll(lo, hi, pts)?, 1)
            }
            other => (other.density_grid(lo, hi, pts)?, 0),
        };
        for _ in done..n {
            d = apply_s_density(&d)?;
        }
        state.density = Some(d);
    }
    if reps.contains(&Representation::Cf) {
        let (t_max, pts) = cfg.cf_grid;
        let mut c = start.cf_grid(t_max, pts)?;
        for _ in 0..n {
            c = apply_s_cf(&c, t_max)?;
        }
        state.cf = Some(c);
    }
    if reps.contains(&Representation::Mgf) {
        let (lo, hi, pts) = cfg.mgf_grid;
        let mut m = start.mgf_grid(lo, hi, pts)?;
        for _ in 0..n {
            m = apply_s_mgf(&m)?;
        }
        state.mgf = Some(m);
    }
    Ok(state)
}

#[derive(Serialize, Deserialize)]
struct Meta {
    n: u32,
    start: StartLaw,
    representations: BTreeMap<String, GridMeta>,
}

#[derive(Serialize, Deserialize)]
struct GridMeta {
    lo: f64,
    hi: f64,
    points: usize,
    tol_mass: f64,
}

impl IterationState {
    fn entries(&self) -> [(Representation, Option<&GridFunction>); 3] {
        [
            (Representation::Density, self.density.as_ref()),
            (Representation::Cf, self.cf.as_ref()),
            (Representation::Mgf, self.mgf.as_ref()),
        ]
    }

    /// Write the state into `dir`: one CSV per representation plus
    /// `meta.json` with the iteration count, start law, grid shapes and
    /// tolerances. Values round-trip bit-exactly through [`Self::load`].
    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut reps = BTreeMap::new();
        for (rep, grid) in self.entries() {
            let Some(g) = grid else { continue };
            std::fs::write(dir.join(format!("{}.csv", rep.key())), g.to_csv())?;
            reps.insert(
                rep.key().to_string(),
                GridMeta {
                    lo: g.lo,
                    hi: g.hi,
                    points: g.len(),
                    tol_mass: g.tol_mass,
                },
            );
        }
        let meta = Meta {
            n: self.n,
            start: self.start.clone(),
            representations: reps,
        };
        std::fs::write(dir.join("meta.json"), serde_json::to_string_pretty(&meta)?)?;
        Ok(())
    }

    /// Read a state written by [`Self::save`].
    pub fn load(dir: &Path) -> Result<Self> {
        let meta: Meta =
            serde_json::from_str(&std::fs::read_to_string(dir.join("meta.json"))?)?;
        let mut state = IterationState {
            n: meta.n,
            start: meta.start,
            density: None,
            cf: None,
            mgf: None,
        };
        for (key, gm) in &meta.representations {
            let (kind, slot) = match key.as_str() {
                "density" => (GridKind::Density, &mut state.density),
                "cf" => (GridKind::Cf, &mut state.cf),
                "mgf" => (GridKind::Mgf, &mut state.mgf),
                other => {
                    return Err(Error::Parse(format!(
                        "meta.json names unknown representation {other:?}"
                    )))
                }
            };
            let text = std::fs::read_to_string(dir.join(format!("{key}.csv")))?;
            let g = GridFunction::from_csv(&text, kind, gm.tol_mass)?;
            if g.len() != gm.points || g.lo != gm.lo || g.hi != gm.hi {
                return Err(Error::Parse(format!(
                    "{key}.csv does not match its metadata (grid shape)"
                )));
            }
            *slot = Some(g);
        }
        Ok(state)
    }
}
