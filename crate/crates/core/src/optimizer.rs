//! The sequential optimization loop.
//!
//! Every source of randomness draws from its own stream derived from the run
//! seed, the stream purpose and an index (iteration or observation number), so
//! enabling one feature never shifts the random numbers seen by another.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::acquisition::{
    beta_t, credit_thompson_acq, credit_weighted_ucb_values, maximize_acquisition, thompson_acq, ucb_values,
    AcquisitionKind, AcquisitionSpec,
};
use crate::benchmarks::{gaussian_noise, Benchmark};
use crate::credit::{
    log_likelihood_scores, optimum_proxy, CreditField, CreditState, DEFAULT_EPSILON_C, DEFAULT_R_MAX, DEFAULT_R_MIN,
};
use crate::design::{latin_hypercube, uniform_points};
use crate::error::{invalid, Result};
use crate::gp::{fit_posterior, GpPosterior, KernelParams, ObservationSet, MAX_PATH_GRID};
use crate::hyper::{fit_hyperparams, MleConfig};

/// Observation count up to which hyperparameters are refit every iteration.
pub const REFIT_EVERY_STEP_UNTIL: usize = 50;
/// Refit interval (in observations) once past [`REFIT_EVERY_STEP_UNTIL`].
pub const REFIT_INTERVAL: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    InitialDesign = 1,
    Noise = 2,
    ProxyPaths = 3,
    Candidates = 4,
    Mle = 5,
    Grid = 6,
    Thompson = 7,
}

/// Independent generator for `(seed, stream, index)`.
pub fn stream_rng(seed: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((stream as u64) << 48) ^ index);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub benchmark: Benchmark,
    pub acquisition: AcquisitionSpec,
    /// Number of acquisitions after the initial design.
    pub budget: usize,
    /// Posterior paths `K` behind the optimum proxy.
    pub proxy_paths: usize,
    /// Neighbor count `H` of the credit field.
    pub neighbors: usize,
    pub noise_variance: f64,
    /// Overrides `max(2d, 10)`.
    pub n_init: Option<usize>,
    pub seed: u64,
    pub high_dim: bool,
    pub ard: bool,
    /// Points of the joint path-sampling grid.
    pub grid_size: usize,
    pub mle_restarts: usize,
    pub mle_max_evals: usize,
    pub epsilon_c: f64,
    pub r_min: f64,
    pub r_max: f64,
    /// Compute credit snapshots even when the acquisition does not use them.
    pub record_credits: bool,
}

impl RunConfig {
    pub fn new(benchmark: Benchmark, kind: AcquisitionKind, seed: u64) -> Self {
        let mle = MleConfig::default();
        Self {
            benchmark,
            acquisition: AcquisitionSpec::with_kind(kind),
            budget: 100,
            proxy_paths: 25,
            neighbors: 5,
            noise_variance: 0.01,
            n_init: None,
            seed,
            high_dim: false,
            ard: false,
            grid_size: MAX_PATH_GRID,
            mle_restarts: mle.restarts,
            mle_max_evals: mle.max_evals,
            epsilon_c: DEFAULT_EPSILON_C,
            r_min: DEFAULT_R_MIN,
            r_max: DEFAULT_R_MAX,
            record_credits: false,
        }
    }

    pub fn kind(&self) -> AcquisitionKind {
        self.acquisition.kind
    }

    pub fn initial_design_size(&self) -> usize {
        self.n_init.unwrap_or_else(|| default_initial_size(self.benchmark.dim()))
    }

    pub fn mle_config(&self) -> MleConfig {
        MleConfig {
            restarts: self.mle_restarts,
            max_evals: self.mle_max_evals,
            ard: self.ard,
            high_dim: self.high_dim,
            ..MleConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.acquisition.validate()?;
        if self.proxy_paths == 0 {
            return Err(invalid("proxy_paths", "must be at least 1"));
        }
        if self.neighbors == 0 {
            return Err(invalid("neighbors", "must be at least 1"));
        }
        if !(self.noise_variance >= 0.0 && self.noise_variance.is_finite()) {
            return Err(invalid("noise_variance", "must be finite and non-negative"));
        }
        if self.n_init == Some(0) {
            return Err(invalid("n_init", "must be at least 1"));
        }
        if self.grid_size == 0 || self.grid_size > MAX_PATH_GRID {
            return Err(invalid("grid_size", format!("must lie in 1..={MAX_PATH_GRID}")));
        }
        if self.mle_restarts == 0 || self.mle_max_evals == 0 {
            return Err(invalid("mle_restarts", "restarts and evaluations must be at least 1"));
        }
        if !(self.epsilon_c > 0.0) {
            return Err(invalid("epsilon_c", "must be positive"));
        }
        if !(self.r_min > 0.0 && self.r_min <= self.r_max) {
            return Err(invalid("r_min", "need 0 < r_min <= r_max"));
        }
        Ok(())
    }
}

/// `max(2d, 10)`.
pub fn default_initial_size(dim: usize) -> usize {
    (2 * dim).max(10)
}

/// Stratified initial design in the unit cube.
pub fn initial_design(dim: usize, n_init: usize, seed: u64) -> Vec<Vec<f64>> {
    latin_hypercube(n_init, dim, &mut stream_rng(seed, Stream::InitialDesign, 0))
}

/// Per-iteration credit diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct CreditSnapshot {
    pub iteration: usize,
    pub proxy: f64,
    pub credits: Vec<f64>,
}

/// Everything a run produced. Per-query vectors all have `n_init + budget`
/// entries.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub benchmark: String,
    pub method: AcquisitionKind,
    pub seed: u64,
    pub n_init: usize,
    /// Unit-cube query locations.
    pub queries: Vec<Vec<f64>>,
    pub noisy_values: Vec<f64>,
    pub true_values: Vec<f64>,
    pub best_observed: Vec<f64>,
    pub best_true: Vec<f64>,
    /// `None` for initial-design queries and for steps without credits.
    pub credit_snapshots: Vec<Option<CreditSnapshot>>,
    pub elapsed: Duration,
}

impl RunResult {
    /// Query with the highest noisy observation.
    pub fn best_point(&self) -> &[f64] {
        let idx = self
            .noisy_values
            .iter()
            .enumerate()
            .fold(0, |bi, (i, &y)| if y > self.noisy_values[bi] { i } else { bi });
        &self.queries[idx]
    }
}

/// Mutable state of a run in progress.
#[derive(Debug, Clone)]
pub struct BoState {
    data: ObservationSet,
    true_values: Vec<f64>,
    n_init: usize,
    iteration: usize,
    params: Option<KernelParams>,
    last_refit_at: usize,
    snapshots: Vec<Option<CreditSnapshot>>,
}

impl BoState {
    /// Evaluates the initial design.
    pub fn initialize(config: &RunConfig) -> Result<Self> {
        config.validate()?;
        let dim = config.benchmark.dim();
        let n_init = config.initial_design_size();
        let mut state = Self {
            data: ObservationSet::new(dim),
            true_values: Vec::new(),
            n_init,
            iteration: 0,
            params: None,
            last_refit_at: 0,
            snapshots: Vec::new(),
        };
        for x in initial_design(dim, n_init, config.seed) {
            state.observe(config, x)?;
            state.snapshots.push(None);
        }
        Ok(state)
    }

    pub fn data(&self) -> &ObservationSet {
        &self.data
    }

    pub fn true_values(&self) -> &[f64] {
        &self.true_values
    }

    /// Acquisitions completed so far.
    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn kernel_params(&self) -> Option<&KernelParams> {
        self.params.as_ref()
    }

    fn observe(&mut self, config: &RunConfig, x: Vec<f64>) -> Result<()> {
        let index = self.data.len() as u64;
        let f = config.benchmark.evaluate_unit(&x)?;
        let noise = gaussian_noise(config.noise_variance, &mut stream_rng(config.seed, Stream::Noise, index))?;
        self.data.push(x, f + noise)?;
        self.true_values.push(f);
        Ok(())
    }

    /// Standardizes the targets, refits hyperparameters when due, and
    /// conditions the GP.
    fn posterior(&mut self, config: &RunConfig) -> Result<GpPosterior> {
        let (z, _, _) = self.data.standardized();
        let t = z.len();
        let due = self.params.is_none() || t <= REFIT_EVERY_STEP_UNTIL || t - self.last_refit_at >= REFIT_INTERVAL;
        if due {
            let mut rng = stream_rng(config.seed, Stream::Mle, self.iteration as u64);
            let params = if t >= 2 {
                fit_hyperparams(&z, &config.mle_config(), self.params.as_ref(), &mut rng)?
            } else {
                let center = config.mle_config().lengthscale_center(z.dim()).exp();
                KernelParams::isotropic(center, 1.0, config.noise_variance.max(1e-6))
            };
            self.params = Some(params);
            self.last_refit_at = t;
        }
        fit_posterior(&z, self.params.as_ref().expect("set above"))
    }

    fn credit_field(
        &self,
        config: &RunConfig,
        gp: &GpPosterior,
        grid: &[Vec<f64>],
    ) -> Result<(CreditField, CreditSnapshot)> {
        let mut rng = stream_rng(config.seed, Stream::ProxyPaths, self.iteration as u64);
        let proxy = optimum_proxy(gp, grid, config.proxy_paths, &mut rng)?;
        let (means, stds) = gp.predict(self.data.locations())?;
        let logs = log_likelihood_scores(proxy.proxy, &means, &stds, config.epsilon_c);
        let state = CreditState::from_log_likelihoods(logs, config.epsilon_c, config.r_min, config.r_max);
        let field = CreditField::new(self.data.locations().to_vec(), state.credits.clone(), config.neighbors)?;
        Ok((
            field,
            CreditSnapshot {
                iteration: self.iteration,
                proxy: proxy.proxy,
                credits: state.credits,
            },
        ))
    }

    /// One acquisition: fit, score, select, observe, append.
    pub fn step(&mut self, config: &RunConfig) -> Result<()> {
        let dim = self.data.dim();
        let spec = &config.acquisition;
        let iter = self.iteration;
        let mut snapshot = None;

        let x_new = if spec.kind == AcquisitionKind::Random {
            let mut rng = stream_rng(config.seed, Stream::Candidates, iter as u64);
            uniform_points(1, dim, &mut rng).remove(0)
        } else {
            let gp = self.posterior(config)?;
            let beta = beta_t(iter + 1, spec.delta);
            let needs_grid = spec.kind.uses_credit() || spec.kind == AcquisitionKind::Ts || config.record_credits;
            let grid = if needs_grid {
                latin_hypercube(config.grid_size, dim, &mut stream_rng(config.seed, Stream::Grid, iter as u64))
            } else {
                Vec::new()
            };
            let field = if spec.kind.uses_credit() || config.record_credits {
                let (field, snap) = self.credit_field(config, &gp, &grid)?;
                snapshot = Some(snap);
                Some(field)
            } else {
                None
            };
            let observed = self.data.locations();
            match spec.kind {
                AcquisitionKind::Ucb | AcquisitionKind::CreditUcb => {
                    let mut rng = stream_rng(config.seed, Stream::Candidates, iter as u64);
                    let candidates = latin_hypercube(spec.candidate_count, dim, &mut rng);
                    let values = match (&field, spec.kind) {
                        (Some(field), AcquisitionKind::CreditUcb) => {
                            credit_weighted_ucb_values(&gp, field, &candidates, iter, spec, beta)?
                        }
                        _ => ucb_values(&gp, &candidates, beta)?,
                    };
                    let idx = maximize_acquisition(&values, &candidates, observed, spec.dedupe_radius);
                    candidates[idx].clone()
                }
                AcquisitionKind::Ts | AcquisitionKind::CreditTs => {
                    let mut rng = stream_rng(config.seed, Stream::Thompson, iter as u64);
                    let idx = match (&field, spec.kind) {
                        (Some(field), AcquisitionKind::CreditTs) => {
                            credit_thompson_acq(&gp, field, &grid, iter, spec, observed, &mut rng)?
                        }
                        _ => thompson_acq(&gp, &grid, observed, spec.dedupe_radius, &mut rng)?,
                    };
                    grid[idx].clone()
                }
                AcquisitionKind::Random => unreachable!("handled above"),
            }
        };

        self.observe(config, x_new)?;
        self.snapshots.push(snapshot);
        self.iteration += 1;
        Ok(())
    }

    fn into_result(self, config: &RunConfig, elapsed: Duration) -> RunResult {
        let running_max = |v: &[f64]| -> Vec<f64> {
            v.iter()
                .scan(f64::NEG_INFINITY, |best, &y| {
                    *best = best.max(y);
                    Some(*best)
                })
                .collect()
        };
        let noisy = self.data.values().to_vec();
        RunResult {
            benchmark: config.benchmark.name().to_string(),
            method: config.kind(),
            seed: config.seed,
            n_init: self.n_init,
            queries: self.data.locations().to_vec(),
            best_observed: running_max(&noisy),
            best_true: running_max(&self.true_values),
            noisy_values: noisy,
            true_values: self.true_values,
            credit_snapshots: self.snapshots,
            elapsed,
        }
    }
}

/// One acquisition on `state`.
pub fn bo_step(state: &mut BoState, config: &RunConfig) -> Result<()> {
    state.step(config)
}

/// Initial design followed by `budget` acquisitions.
pub fn run(config: &RunConfig) -> Result<RunResult> {
    let start = Instant::now();
    let mut state = BoState::initialize(config)?;
    for _ in 0..config.budget {
        state.step(config)?;
    }
    Ok(state.into_result(config, start.elapsed()))
}
