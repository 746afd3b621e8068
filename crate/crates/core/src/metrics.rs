//! Regret accounting.
//!
//! Traces cover every query of a run, initial design included. The iteration
//! axis used for AUSR starts at the last initial-design query (the incumbent
//! before the first acquisition) and runs through the final query.

use crate::error::{invalid, Error, Result};
use crate::optimizer::RunResult;

/// Slack allowed when a true value exceeds the optimum reference.
pub const F_STAR_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    /// `f* − max_{s ≤ t} f(x_s)` per query.
    pub simple: Vec<f64>,
    /// `Σ_{s ≤ t} (f* − f(x_s))` per query.
    pub cumulative: Vec<f64>,
    pub n_init: usize,
    /// AUSR over the post-initialization axis; `None` for runs without
    /// acquisitions.
    pub ausr: Option<f64>,
}

impl RegretTrace {
    /// Simple regret from the initial incumbent onward.
    pub fn post_init_simple(&self) -> &[f64] {
        &self.simple[self.n_init.saturating_sub(1)..]
    }

    pub fn final_simple(&self) -> f64 {
        *self.simple.last().expect("regret traces are never empty")
    }
}

/// Regret traces of a finished run against the optimum value `f_star`.
pub fn regret_traces(result: &RunResult, f_star: f64) -> Result<RegretTrace> {
    regret_from_values(&result.true_values, result.n_init, f_star)
}

pub fn regret_from_values(true_values: &[f64], n_init: usize, f_star: f64) -> Result<RegretTrace> {
    if true_values.is_empty() {
        return Err(invalid("trace", "no queries recorded"));
    }
    let mut simple = Vec::with_capacity(true_values.len());
    let mut cumulative = Vec::with_capacity(true_values.len());
    let mut best = f64::NEG_INFINITY;
    let mut total = 0.0;
    for &f in true_values {
        if f > f_star + F_STAR_SLACK {
            return Err(Error::InconsistentOptimum { f_star, observed: f });
        }
        best = best.max(f);
        total += (f_star - f).max(0.0);
        simple.push((f_star - best).max(0.0));
        cumulative.push(total);
    }
    let n_init = n_init.min(true_values.len());
    let tail = &simple[n_init.saturating_sub(1)..];
    let ausr = if tail.len() >= 2 { Some(ausr(tail)?) } else { None };
    Ok(RegretTrace {
        simple,
        cumulative,
        n_init,
        ausr,
    })
}

/// Trapezoidal mean `1/(T−1) Σ_{t=2..T} (r_{t−1} + r_t)/2`.
pub fn ausr(simple: &[f64]) -> Result<f64> {
    if simple.len() < 2 {
        return Err(invalid("simple regret", format!("AUSR needs at least 2 values, got {}", simple.len())));
    }
    // offsets from the first value keep constant traces exact
    let r0 = simple[0];
    let area: f64 = simple.windows(2).map(|w| 0.5 * ((w[0] - r0) + (w[1] - r0))).sum();
    Ok(r0 + area / (simple.len() - 1) as f64)
}

/// Mean and spread of a sample; the spread is the sample standard deviation
/// (zero for a single value).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
    pub stderr: f64,
    pub n: usize,
}

impl Stat {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self { mean: f64::NAN, std: f64::NAN, stderr: f64::NAN, n };
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            std,
            stderr: std / (n as f64).sqrt(),
            n,
        }
    }
}

/// Element-wise statistics over a group of equally long traces.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub runs: usize,
    pub simple_mean: Vec<f64>,
    pub simple_stderr: Vec<f64>,
    pub cumulative_mean: Vec<f64>,
    pub cumulative_stderr: Vec<f64>,
    pub ausr: Stat,
    pub final_simple: Stat,
}

pub fn aggregate(traces: &[RegretTrace]) -> Result<Aggregate> {
    let first = traces.first().ok_or_else(|| invalid("traces", "nothing to aggregate"))?;
    let len = first.simple.len();
    if let Some((i, t)) = traces.iter().enumerate().find(|(_, t)| t.simple.len() != len) {
        return Err(invalid(
            "traces",
            format!("trace {i} has {} entries, expected {len}", t.simple.len()),
        ));
    }
    let column = |pick: &dyn Fn(&RegretTrace) -> &Vec<f64>, j: usize| -> Stat {
        Stat::of(&traces.iter().map(|t| pick(t)[j]).collect::<Vec<_>>())
    };
    let simple: Vec<Stat> = (0..len).map(|j| column(&|t| &t.simple, j)).collect();
    let cumulative: Vec<Stat> = (0..len).map(|j| column(&|t| &t.cumulative, j)).collect();
    let ausrs: Vec<f64> = traces.iter().filter_map(|t| t.ausr).collect();
    let finals: Vec<f64> = traces.iter().map(|t| t.final_simple()).collect();
    Ok(Aggregate {
        runs: traces.len(),
        simple_mean: simple.iter().map(|s| s.mean).collect(),
        simple_stderr: simple.iter().map(|s| s.stderr).collect(),
        cumulative_mean: cumulative.iter().map(|s| s.mean).collect(),
        cumulative_stderr: cumulative.iter().map(|s| s.stderr).collect(),
        ausr: Stat::of(&ausrs),
        final_simple: Stat::of(&finals),
    })
}
