//! Wilcoxon rank-sum test and sample summaries for comparing GA trials.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankSumResult {
    pub m: usize,
    pub n: usize,
    /// Rank sum of the first sample.
    pub w: f64,
    pub e_w: f64,
    pub sigma_w: f64,
    pub z_w: f64,
    /// One-sided `P(Z > z_w)`: small when the first sample tends larger.
    pub p_one_sided: f64,
}

/// Rank-sum test of `a` against `b` with midranks and the normal
/// approximation. The variance is tie-corrected.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64]) -> Result<RankSumResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let (m, n) = (a.len(), b.len());
    let mut pooled: Vec<(f64, bool)> = a.iter().map(|&x| (x, true)).chain(b.iter().map(|&x| (x, false))).collect();
    pooled.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut w = 0.0;
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i;
        while j + 1 < pooled.len() && pooled[j + 1].0 == pooled[i].0 {
            j += 1;
        }
        // ranks i+1..=j+1 share their mean
        let midrank = (i + j + 2) as f64 / 2.0;
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        w += midrank * pooled[i..=j].iter().filter(|p| p.1).count() as f64;
        i = j + 1;
    }

    let (mf, nf) = (m as f64, n as f64);
    let total = mf + nf;
    let e_w = mf * (total + 1.0) / 2.0;
    let var = mf * nf / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0)).max(1.0));
    let sigma_w = var.max(0.0).sqrt();
    let z_w = if sigma_w > 0.0 { (w - e_w) / sigma_w } else { 0.0 };
    let p_one_sided = 0.5 * erfc(z_w / std::f64::consts::SQRT_2);
    Ok(RankSumResult { m, n, w, e_w, sigma_w, z_w, p_one_sided })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub best: f64,
    pub mean: f64,
    pub sd: f64,
}

impl Summary {
    /// `best / mean ± sd` with two decimals, as in the comparison tables.
    pub fn table_cell(&self) -> String {
        format!("{:.2} / {:.2} ± {:.2}", self.best, self.mean, self.sd)
    }
}

/// Minimum, mean and sample standard deviation (0 for a single value).
pub fn summarize(samples: &[f64]) -> Result<Summary> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = samples.len() as f64;
    let best = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = samples.iter().sum::<f64>() / n;
    let sd = if samples.len() > 1 {
        (samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(Summary { best, mean, sd })
}

/// Exact one-sided sign test that every sample lies strictly below
/// `reference`: `0.5^n` when all do, 1 otherwise.
pub fn all_below_p(samples: &[f64], reference: f64) -> f64 {
    if samples.iter().all(|&x| x < reference) {
        0.5f64.powi(samples.len() as i32)
    } else {
        1.0
    }
}
