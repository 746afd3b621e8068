//! Acquisition functions and candidate-set maximization.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::credit::{credit_weight, decay_exponent, CreditField};
use crate::error::{invalid, Error, Result};
use crate::gp::{sample_paths, GpPosterior};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AcquisitionKind {
    Ucb,
    CreditUcb,
    Ts,
    CreditTs,
    Random,
}

impl AcquisitionKind {
    pub const ALL: [AcquisitionKind; 5] = [
        AcquisitionKind::Ucb,
        AcquisitionKind::CreditUcb,
        AcquisitionKind::Ts,
        AcquisitionKind::CreditTs,
        AcquisitionKind::Random,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AcquisitionKind::Ucb => "ucb",
            AcquisitionKind::CreditUcb => "credit_ucb",
            AcquisitionKind::Ts => "ts",
            AcquisitionKind::CreditTs => "credit_ts",
            AcquisitionKind::Random => "random",
        }
    }

    pub fn uses_credit(self) -> bool {
        matches!(self, AcquisitionKind::CreditUcb | AcquisitionKind::CreditTs)
    }
}

impl fmt::Display for AcquisitionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AcquisitionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AcquisitionKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| invalid("method", format!("unknown acquisition `{s}`")))
    }
}

/// Acquisition choice and its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct AcquisitionSpec {
    pub kind: AcquisitionKind,
    /// Credit influence λ ∈ [0, 1].
    pub lambda: f64,
    /// Credit sensitivity τ.
    pub tau: f64,
    /// Half-life M of the credit exponent.
    pub half_life: f64,
    /// Confidence level δ of the β_t schedule.
    pub delta: f64,
    pub candidate_count: usize,
    /// Subtract the candidate-set minimum before applying the credit factor.
    pub nonneg_shift: bool,
    /// Candidates closer than this to an observation are skipped.
    pub dedupe_radius: f64,
}

impl Default for AcquisitionSpec {
    fn default() -> Self {
        Self {
            kind: AcquisitionKind::CreditUcb,
            lambda: 0.5,
            tau: 1.0,
            half_life: 20.0,
            delta: 0.1,
            candidate_count: 2048,
            nonneg_shift: false,
            dedupe_radius: 1e-6,
        }
    }
}

impl AcquisitionSpec {
    pub fn with_kind(kind: AcquisitionKind) -> Self {
        Self {
            kind,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(invalid("lambda", format!("{} is outside [0, 1]", self.lambda)));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(invalid("tau", "must be positive"));
        }
        if !(self.half_life > 0.0 && self.half_life.is_finite()) {
            return Err(invalid("half_life", "must be positive"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(invalid("delta", format!("{} is outside (0, 1)", self.delta)));
        }
        if self.candidate_count == 0 {
            return Err(invalid("candidate_count", "must be at least 1"));
        }
        if !(self.dedupe_radius >= 0.0) {
            return Err(invalid("dedupe_radius", "must be non-negative"));
        }
        Ok(())
    }

    /// Credit factor `(1−λ) + λ w`.
    pub fn credit_factor(&self, weight: f64) -> f64 {
        (1.0 - self.lambda) + self.lambda * weight
    }
}

/// `√(2 log(t² π² / (6δ)))`.
pub fn beta_t(t: usize, delta: f64) -> f64 {
    let t = t as f64;
    (2.0 * (t * t * std::f64::consts::PI.powi(2) / (6.0 * delta)).ln()).sqrt()
}

pub fn ucb(gp: &GpPosterior, x: &[f64], beta: f64) -> Result<f64> {
    let (mu, sd) = gp.posterior_at(x)?;
    Ok(mu + beta * sd)
}

pub fn ucb_values(gp: &GpPosterior, points: &[Vec<f64>], beta: f64) -> Result<Vec<f64>> {
    let (mu, sd) = gp.predict(points)?;
    Ok(mu.iter().zip(&sd).map(|(m, s)| m + beta * s).collect())
}

/// Per-point weights `w_t(x)` of a credit field.
pub fn credit_weights(field: &CreditField, points: &[Vec<f64>], t: usize, spec: &AcquisitionSpec) -> Vec<f64> {
    let exponent = decay_exponent(t, spec.tau, spec.half_life);
    points.iter().map(|x| field.value(x).powf(exponent)).collect()
}

/// Credit-weighted UCB at a single point. `ucb_floor` is the value subtracted
/// from the UCB term when the non-negative shift is active.
pub fn credit_weighted_ucb(
    gp: &GpPosterior,
    field: &CreditField,
    x: &[f64],
    t: usize,
    spec: &AcquisitionSpec,
    beta: f64,
    ucb_floor: Option<f64>,
) -> Result<f64> {
    let mut u = ucb(gp, x, beta)?;
    if spec.nonneg_shift {
        u -= ucb_floor.unwrap_or(0.0);
    }
    let w = credit_weight(field.value(x), t, spec.tau, spec.half_life);
    Ok(spec.credit_factor(w) * u)
}

/// Credit-weighted UCB over a candidate set. With `nonneg_shift` the UCB term
/// is shifted by its minimum over `points` first.
pub fn credit_weighted_ucb_values(
    gp: &GpPosterior,
    field: &CreditField,
    points: &[Vec<f64>],
    t: usize,
    spec: &AcquisitionSpec,
    beta: f64,
) -> Result<Vec<f64>> {
    let ucbs = ucb_values(gp, points, beta)?;
    let weights = credit_weights(field, points, t, spec);
    Ok(apply_credit(&ucbs, &weights, spec))
}

pub(crate) fn apply_credit(base: &[f64], weights: &[f64], spec: &AcquisitionSpec) -> Vec<f64> {
    let floor = if spec.nonneg_shift {
        base.iter().copied().fold(f64::INFINITY, f64::min)
    } else {
        0.0
    };
    base.iter()
        .zip(weights)
        .map(|(u, w)| spec.credit_factor(*w) * (u - floor))
        .collect()
}

/// Lower and upper credit-factor bounds `(A_t, B_t)` at iteration `t`.
pub fn sandwich_bounds(spec: &AcquisitionSpec, r_min: f64, r_max: f64, t: usize) -> (f64, f64) {
    let e = decay_exponent(t, spec.tau, spec.half_life);
    let a = 1.0 - spec.lambda + spec.lambda * (r_min / r_max).powf(e);
    let b = 1.0 - spec.lambda + spec.lambda;
    (a, b)
}

/// One posterior path drawn jointly over `grid`.
pub fn thompson_draw<R: Rng + ?Sized>(gp: &GpPosterior, grid: &[Vec<f64>], rng: &mut R) -> Result<Vec<f64>> {
    let path = sample_paths(gp, grid, 1, rng)?;
    Ok(path.row(0).iter().copied().collect())
}

/// Thompson sampling: index of the best grid point of one posterior path.
pub fn thompson_acq<R: Rng + ?Sized>(
    gp: &GpPosterior,
    grid: &[Vec<f64>],
    exclusion: &[Vec<f64>],
    dedupe_radius: f64,
    rng: &mut R,
) -> Result<usize> {
    let path = thompson_draw(gp, grid, rng)?;
    Ok(maximize_acquisition(&path, grid, exclusion, dedupe_radius))
}

/// Thompson sampling with the drawn path multiplied by the credit factor.
pub fn credit_thompson_acq<R: Rng + ?Sized>(
    gp: &GpPosterior,
    field: &CreditField,
    grid: &[Vec<f64>],
    t: usize,
    spec: &AcquisitionSpec,
    exclusion: &[Vec<f64>],
    rng: &mut R,
) -> Result<usize> {
    let path = thompson_draw(gp, grid, rng)?;
    let weights = credit_weights(field, grid, t, spec);
    let scores = apply_credit(&path, &weights, spec);
    Ok(maximize_acquisition(&scores, grid, exclusion, spec.dedupe_radius))
}

/// Index of the highest-valued candidate farther than `dedupe_radius` from
/// every point in `exclusion`. Ties go to the lowest index. If every candidate
/// is excluded the unrestricted argmax is returned.
pub fn maximize_acquisition(
    values: &[f64],
    candidates: &[Vec<f64>],
    exclusion: &[Vec<f64>],
    dedupe_radius: f64,
) -> usize {
    assert_eq!(values.len(), candidates.len(), "one value per candidate");
    assert!(!candidates.is_empty(), "candidate set is empty");
    let r2 = dedupe_radius * dedupe_radius;
    let allowed = |x: &[f64]| {
        exclusion
            .iter()
            .all(|o| o.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum::<f64>() > r2)
    };
    let argmax = |filter: &dyn Fn(usize) -> bool| -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, &v) in values.iter().enumerate() {
            if v.is_nan() || !filter(i) {
                continue;
            }
            if best.is_none_or(|(_, bv)| v > bv) {
                best = Some((i, v));
            }
        }
        best.map(|(i, _)| i)
    };
    argmax(&|i| allowed(&candidates[i]))
        .or_else(|| argmax(&|_| true))
        .unwrap_or(0)
}
