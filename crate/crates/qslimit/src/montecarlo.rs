//! Sampling oracles for the analytic pipelines.
//!
//! Three sample kinds: exact-in-distribution Quicksort comparison counts
//! `X_n` (size-only recursion, no array materialized), their normalized
//! form `Y_n = (X_n - mu_n)/n`, and fixed-point recursion samples `Z_n`
//! obtained by unrolling `Z_d = U Z_{d-1} + (1-U) Z*_{d-1} + g(U)` down
//! to a start law at depth 0.
//!
//! Batches are reproducible bit-exactly from `(kind, params, seed)`:
//! generation splits the requested count into fixed-size chunks, each
//! driven by its own counter-derived ChaCha8 stream, so the result does
//! not depend on thread count or scheduling. Values are sorted before
//! storage to make the canonical form order-independent too.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::{quicksort_mean, toll_unchecked};
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::start::StartLaw;

/// Hard cap on the recursion depth of [`sample_zn`]: one draw evaluates
/// a binary tree of `2^depth` leaves.
pub const MAX_DEPTH: u32 = 24;

/// Samples per RNG substream; the chunk index is the stream number.
const CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleKind {
    Xn,
    Yn,
    Zn,
}

/// Parameters pinning down the sampled law; which fields apply depends
/// on the kind (`n` for Xn/Yn, `depth` and `start` for Zn).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct SampleParams {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub depth: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub start: Option<String>,
}

/// A canonicalized (sorted) batch of i.i.d. draws.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub kind: SampleKind,
    pub params: SampleParams,
    pub seed: u64,
    pub values: Vec<f64>,
}

/// One draw of the comparison count `X_n` of Quicksort on n distinct
/// keys: `cost(m) = m - 1 + cost(I-1) + cost(m-I)` with I uniform on
/// `{1..m}`, `cost(0) = cost(1) = 0`. Iterative with an explicit stack;
/// expected stack depth is logarithmic.
pub fn quicksort_cost<R: Rng + ?Sized>(n: u64, rng: &mut R) -> u64 {
    let mut cost = 0u64;
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m < 2 {
            continue;
        }
        cost += m - 1;
        let pivot = rng.gen_range(1..=m);
        stack.push(pivot - 1);
        stack.push(m - pivot);
    }
    cost
}

/// One draw of the normalized cost `Y_n = (X_n - mu_n) / n`, n >= 1.
pub fn sample_yn<R: Rng + ?Sized>(n: u64, rng: &mut R) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain("sample_yn: n must be >= 1".into()));
    }
    Ok((quicksort_cost(n, rng) as f64 - quicksort_mean(n)) / n as f64)
}

/// One draw of the depth-d fixed-point recursion sample `Z_d` from the
/// given start law. Costs `2^depth` start draws; depth is capped at
/// [`MAX_DEPTH`] rather than silently truncated.
pub fn sample_zn<R: Rng + ?Sized>(depth: u32, start: &StartLaw, rng: &mut R) -> Result<f64> {
    if depth > MAX_DEPTH {
        return Err(Error::Resource(format!(
            "sample_zn: depth {depth} costs 2^{depth} draws (cap {MAX_DEPTH})"
        )));
    }
    Ok(zn_rec(depth, start, rng))
}

// Draw order (U, then left subtree, then right) is part of the
// reproducibility contract.
fn zn_rec<R: Rng + ?Sized>(depth: u32, start: &StartLaw, rng: &mut R) -> f64 {
    if depth == 0 {
        return start.sample(rng);
    }
    let u: f64 = rng.gen();
    let z = zn_rec(depth - 1, start, rng);
    let zs = zn_rec(depth - 1, start, rng);
    u * z + (1.0 - u) * zs + toll_unchecked(u)
}

/// Chunked, substream-parallel batch generation; sorted output.
fn generate<F>(count: usize, seed: u64, draw: F) -> Result<Vec<f64>>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    if count == 0 {
        return Err(Error::Domain("batch count must be >= 1".into()));
    }
    let draw = &draw;
    let chunks = count.div_ceil(CHUNK);
    let mut values: Vec<f64> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|w| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(w as u64);
            let take = CHUNK.min(count - w * CHUNK);
            (0..take).map(move |_| draw(&mut rng)).collect::<Vec<_>>()
        })
        .collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

impl SampleBatch {
    /// Batch of Quicksort comparison counts `X_n` (stored as reals).
    pub fn xn(n: u64, count: usize, seed: u64) -> Result<Self> {
        let values = generate(count, seed, |rng| quicksort_cost(n, rng) as f64)?;
        Ok(SampleBatch {
            kind: SampleKind::Xn,
            params: SampleParams {
                n: Some(n),
                ..SampleParams::default()
            },
            seed,
            values,
        })
    }

    /// Batch of normalized costs `Y_n`, n >= 1.
    pub fn yn(n: u64, count: usize, seed: u64) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain("yn batch: n must be >= 1".into()));
        }
        let mu = quicksort_mean(n);
        let values = generate(count, seed, |rng| {
            (quicksort_cost(n, rng) as f64 - mu) / n as f64
        })?;
        Ok(SampleBatch {
            kind: SampleKind::Yn,
            params: SampleParams {
                n: Some(n),
                ..SampleParams::default()
            },
            seed,
            values,
        })
    }

    /// Batch of depth-d recursion samples `Z_d` from a start law.
    pub fn zn(depth: u32, start: &StartLaw, count: usize, seed: u64) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(Error::Resource(format!(
                "zn batch: depth {depth} costs 2^{depth} draws per sample (cap {MAX_DEPTH})"
            )));
        }
        let values = generate(count, seed, |rng| zn_rec(depth, start, rng))?;
        Ok(SampleBatch {
            kind: SampleKind::Zn,
            params: SampleParams {
                depth: Some(depth),
                start: Some(start.descriptor()),
                ..SampleParams::default()
            },
            seed,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (self.len() - 1) as f64
    }

    /// k-th raw sample moment.
    pub fn moment(&self, k: u32) -> f64 {
        self.values.iter().map(|v| v.powi(k as i32)).sum::<f64>() / self.len() as f64
    }

    /// Write `<stem>.csv` (one value per row) and `<stem>.meta.json`
    /// (kind, params, seed, count).
    pub fn save(&self, stem: &Path) -> Result<()> {
        let mut csv = String::with_capacity(self.len() * 20);
        for v in &self.values {
            csv.push_str(&format!("{v}\n"));
        }
        std::fs::write(stem.with_extension("csv"), csv)?;
        let sidecar = Sidecar {
            kind: self.kind,
            params: self.params.clone(),
            seed: self.seed,
            count: self.len(),
        };
        std::fs::write(
            stem.with_extension("meta.json"),
            serde_json::to_string_pretty(&sidecar)?,
        )?;
        Ok(())
    }

    /// Inverse of [`SampleBatch::save`]; checks the recorded count.
    pub fn load(stem: &Path) -> Result<Self> {
        let sidecar: Sidecar =
            serde_json::from_str(&std::fs::read_to_string(stem.with_extension("meta.json"))?)?;
        let mut values = Vec::with_capacity(sidecar.count);
        for (i, line) in std::fs::read_to_string(stem.with_extension("csv"))?
            .lines()
            .enumerate()
        {
            values.push(line.trim().parse::<f64>().map_err(|e| {
                Error::Parse(format!("sample csv row {}: {e}", i + 1))
            })?);
        }
        if values.len() != sidecar.count {
            return Err(Error::Parse(format!(
                "sidecar says {} samples, csv has {}",
                sidecar.count,
                values.len()
            )));
        }
        Ok(SampleBatch {
            kind: sidecar.kind,
            params: sidecar.params,
            seed: sidecar.seed,
            values,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct Sidecar {
    kind: SampleKind,
    params: SampleParams,
    seed: u64,
    count: usize,
}

/// Right-continuous empirical CDF of a batch, sampled on a uniform grid:
/// `F(x) = #{v <= x} / N`. The grid's mass budget records how much of
/// the sample falls outside `[lo, hi]`.
pub fn empirical_cdf(batch: &SampleBatch, lo: f64, hi: f64, n: usize) -> Result<GridFunction> {
    if batch.is_empty() {
        return Err(Error::Domain("empirical_cdf: empty batch".into()));
    }
    let mut sorted = batch.values.clone();
    sorted.sort_by(f64::total_cmp);
    let total = sorted.len() as f64;
    let mut vals = Vec::with_capacity(n);
    for i in 0..n {
        let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
        vals.push(sorted.partition_point(|&v| v <= x) as f64 / total);
    }
    let outside = vals[0].max(1.0 - vals[n - 1]);
    GridFunction::cdf(lo, hi, vals, outside)
}
