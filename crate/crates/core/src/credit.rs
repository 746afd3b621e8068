//! Counterfactual credit assignment.
//!
//! Each iteration estimates the current optimum by averaging the maxima of `K`
//! posterior sample paths, scores every observation by how plausible that
//! optimum is under its posterior marginal, turns the scores into bounded
//! rank-based credits, and spreads the credits to arbitrary points by
//! nearest-neighbor averaging.

use rand::Rng;

use crate::error::{invalid, Result};
use crate::gp::{sample_paths, GpPosterior};

pub const DEFAULT_EPSILON_C: f64 = 1e-8;
pub const DEFAULT_R_MIN: f64 = 0.1;
pub const DEFAULT_R_MAX: f64 = 1.0;

/// Monte-Carlo estimate `Z_t` of the global maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimumProxy {
    pub per_path_maxima: Vec<f64>,
    pub per_path_argmaxima: Vec<Vec<f64>>,
    pub proxy: f64,
}

/// Draws `paths` joint posterior samples on `grid` and averages their maxima.
pub fn optimum_proxy<R: Rng + ?Sized>(
    gp: &GpPosterior,
    grid: &[Vec<f64>],
    paths: usize,
    rng: &mut R,
) -> Result<OptimumProxy> {
    let draws = sample_paths(gp, grid, paths, rng)?;
    let mut per_path_maxima = Vec::with_capacity(paths);
    let mut per_path_argmaxima = Vec::with_capacity(paths);
    for row in draws.row_iter() {
        let (idx, max) = row
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
        per_path_maxima.push(max);
        per_path_argmaxima.push(grid[idx].clone());
    }
    let proxy = per_path_maxima.iter().sum::<f64>() / paths as f64;
    Ok(OptimumProxy {
        per_path_maxima,
        per_path_argmaxima,
        proxy,
    })
}

/// Gaussian density of `z` under each `N(μ_i, σ_i² + ε_c)`.
pub fn likelihood_scores(z: f64, means: &[f64], stds: &[f64], epsilon_c: f64) -> Vec<f64> {
    log_likelihood_scores(z, means, stds, epsilon_c).into_iter().map(f64::exp).collect()
}

/// Log of [`likelihood_scores`]; stays finite where the density underflows.
pub fn log_likelihood_scores(z: f64, means: &[f64], stds: &[f64], epsilon_c: f64) -> Vec<f64> {
    debug_assert_eq!(means.len(), stds.len());
    means
        .iter()
        .zip(stds)
        .map(|(&mu, &sd)| {
            let var = sd * sd + epsilon_c;
            -(z - mu).powi(2) / (2.0 * var) - 0.5 * (2.0 * std::f64::consts::PI * var).ln()
        })
        .collect()
}

/// All intermediate quantities of one credit computation.
#[derive(Debug, Clone, PartialEq)]
pub struct CreditState {
    pub likelihoods: Vec<f64>,
    pub log_likelihoods: Vec<f64>,
    pub baseline: f64,
    pub raw_scores: Vec<f64>,
    pub ranks: Vec<f64>,
    pub credits: Vec<f64>,
    pub epsilon_c: f64,
    pub r_min: f64,
    pub r_max: f64,
}

impl CreditState {
    pub fn from_likelihoods(likelihoods: Vec<f64>, epsilon_c: f64, r_min: f64, r_max: f64) -> Self {
        let logs = likelihoods.iter().map(|l| l.ln()).collect();
        Self::build(likelihoods, logs, epsilon_c, r_min, r_max)
    }

    /// Same as [`from_likelihoods`](Self::from_likelihoods) on `exp(log ℓ)`,
    /// except that scores tied in floating point (typically all underflowed
    /// to zero) are ordered by their log-likelihoods.
    pub fn from_log_likelihoods(log_likelihoods: Vec<f64>, epsilon_c: f64, r_min: f64, r_max: f64) -> Self {
        let likelihoods = log_likelihoods.iter().map(|l| l.exp()).collect();
        Self::build(likelihoods, log_likelihoods, epsilon_c, r_min, r_max)
    }

    fn build(likelihoods: Vec<f64>, log_likelihoods: Vec<f64>, epsilon_c: f64, r_min: f64, r_max: f64) -> Self {
        let t = likelihoods.len();
        let baseline = likelihoods.iter().sum::<f64>() / t.max(1) as f64;
        let raw_scores: Vec<f64> = likelihoods
            .iter()
            .map(|l| l / (baseline + epsilon_c) - 1.0)
            .collect();
        let at_or_below = |j: usize, i: usize| {
            raw_scores[j] < raw_scores[i]
                || (raw_scores[j] == raw_scores[i] && log_likelihoods[j] <= log_likelihoods[i])
        };
        let ranks: Vec<f64> = if t == 1 {
            vec![1.0]
        } else {
            (0..t)
                .map(|i| ((0..t).filter(|&j| at_or_below(j, i)).count() - 1) as f64 / (t - 1) as f64)
                .collect()
        };
        let credits = ranks.iter().map(|r| r_min + (r_max - r_min) * r).collect();
        Self {
            likelihoods,
            log_likelihoods,
            baseline,
            raw_scores,
            ranks,
            credits,
            epsilon_c,
            r_min,
            r_max,
        }
    }
}

/// Credits `c_i ∈ [r_min, r_max]` from likelihood scores.
pub fn credits_from_scores(likelihoods: &[f64], epsilon_c: f64, r_min: f64, r_max: f64) -> Vec<f64> {
    CreditState::from_likelihoods(likelihoods.to_vec(), epsilon_c, r_min, r_max).credits
}

/// Credits spread over the domain by averaging the `H` nearest observations.
#[derive(Debug, Clone, PartialEq)]
pub struct CreditField {
    locations: Vec<Vec<f64>>,
    credits: Vec<f64>,
    neighbors: usize,
    max_credit: f64,
}

impl CreditField {
    pub fn new(locations: Vec<Vec<f64>>, credits: Vec<f64>, neighbors: usize) -> Result<Self> {
        if locations.is_empty() {
            return Err(invalid("credit field", "needs at least one observation"));
        }
        if locations.len() != credits.len() {
            return Err(invalid(
                "credits",
                format!("{} credits for {} locations", credits.len(), locations.len()),
            ));
        }
        if neighbors == 0 {
            return Err(invalid("neighbors", "must be at least 1"));
        }
        if !credits.iter().all(|c| c.is_finite() && *c > 0.0) {
            return Err(invalid("credits", "must be finite and strictly positive"));
        }
        let max_credit = credits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            locations,
            credits,
            neighbors,
            max_credit,
        })
    }

    pub fn neighbors(&self) -> usize {
        self.neighbors
    }

    pub fn max_credit(&self) -> f64 {
        self.max_credit
    }

    pub fn credits(&self) -> &[f64] {
        &self.credits
    }

    /// Mean credit of the `min(H, t)` nearest observations; ties in distance
    /// go to the lower index.
    pub fn raw_credit(&self, x: &[f64]) -> f64 {
        let h = self.neighbors.min(self.locations.len());
        let mut dist: Vec<(f64, usize)> = self
            .locations
            .iter()
            .enumerate()
            .map(|(i, p)| (p.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum(), i))
            .collect();
        if h < dist.len() {
            dist.select_nth_unstable_by(h - 1, |a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        }
        dist[..h].iter().map(|&(_, i)| self.credits[i]).sum::<f64>() / h as f64
    }

    /// Normalized field value `π(x) = c(x) / max_j c_j`.
    pub fn value(&self, x: &[f64]) -> f64 {
        self.raw_credit(x) / self.max_credit
    }
}

/// `π(x)` for a point, see [`CreditField::value`].
pub fn propagate_credit(field: &CreditField, x: &[f64]) -> f64 {
    field.value(x)
}

/// Decayed weight `π^{τ / (1 + t/M)}`.
pub fn credit_weight(pi: f64, t: usize, tau: f64, half_life: f64) -> f64 {
    pi.powf(decay_exponent(t, tau, half_life))
}

pub fn decay_exponent(t: usize, tau: f64, half_life: f64) -> f64 {
    tau / (1.0 + t as f64 / half_life)
}
