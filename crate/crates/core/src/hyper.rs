//! Maximum-likelihood fitting of kernel hyperparameters.
//!
//! The search runs in log space over `(log ℓ, log σ_f², log σ_n²)` with a
//! seeded multi-start Nelder–Mead. The marginal likelihood is evaluated
//! against a zero prior mean, so callers standardize their targets first.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::gp::{matern52, KernelParams, ObservationSet};
use crate::optim::NelderMead;

#[derive(Debug, Clone, PartialEq)]
pub struct MleConfig {
    pub restarts: usize,
    /// Objective evaluations per restart.
    pub max_evals: usize,
    pub log_lengthscale_bounds: (f64, f64),
    pub log_signal_variance_bounds: (f64, f64),
    pub log_noise_variance_bounds: (f64, f64),
    /// Per-dimension lengthscales.
    pub ard: bool,
    /// Shift the log-lengthscale center and bounds by `½ log D` and pin the
    /// signal variance to 1.
    pub high_dim: bool,
}

impl Default for MleConfig {
    fn default() -> Self {
        Self {
            restarts: 8,
            max_evals: 120,
            log_lengthscale_bounds: (0.01f64.ln(), 10f64.ln()),
            log_signal_variance_bounds: (0.01f64.ln(), 100f64.ln()),
            log_noise_variance_bounds: (1e-6f64.ln(), 0.0),
            ard: false,
            high_dim: false,
        }
    }
}

impl MleConfig {
    /// Log-lengthscale bounds after the high-dimensional shift, if enabled.
    pub fn effective_lengthscale_bounds(&self, dim: usize) -> (f64, f64) {
        let shift = self.lengthscale_shift(dim);
        (
            self.log_lengthscale_bounds.0 + shift,
            self.log_lengthscale_bounds.1 + shift,
        )
    }

    /// Center of the log-lengthscale search box, used as the first restart.
    pub fn lengthscale_center(&self, dim: usize) -> f64 {
        let (lo, hi) = self.effective_lengthscale_bounds(dim);
        0.5 * (lo + hi)
    }

    fn lengthscale_shift(&self, dim: usize) -> f64 {
        if self.high_dim {
            0.5 * (dim as f64).ln()
        } else {
            0.0
        }
    }
}

/// Pairwise geometry cached once per fit.
struct Geometry {
    n: usize,
    /// isotropic: squared distances; ARD: per-dimension squared differences
    sq: Vec<Vec<f64>>,
}

impl Geometry {
    fn new(data: &ObservationSet, ard: bool) -> Self {
        let xs = data.locations();
        let n = xs.len();
        let dims = if ard { data.dim() } else { 1 };
        let mut sq = vec![vec![0.0; n * n]; dims];
        for i in 0..n {
            for j in 0..i {
                if ard {
                    for (d, slot) in sq.iter_mut().enumerate() {
                        let v = (xs[i][d] - xs[j][d]).powi(2);
                        slot[i * n + j] = v;
                        slot[j * n + i] = v;
                    }
                } else {
                    let v: f64 = xs[i].iter().zip(&xs[j]).map(|(a, b)| (a - b).powi(2)).sum();
                    sq[0][i * n + j] = v;
                    sq[0][j * n + i] = v;
                }
            }
        }
        Self { n, sq }
    }

    fn kernel_matrix(&self, p: &KernelParams) -> DMatrix<f64> {
        let n = self.n;
        let inv: Vec<f64> = p.lengthscales.iter().map(|l| 1.0 / (l * l)).collect();
        DMatrix::from_fn(n, n, |i, j| {
            let idx = i * n + j;
            let r2: f64 = self.sq.iter().zip(&inv).map(|(s, w)| s[idx] * w).sum();
            let mut k = matern52(p.signal_variance, r2.sqrt());
            if i == j {
                k += p.noise_variance;
            }
            k
        })
    }
}

fn lml_cached(geom: &Geometry, y: &DVector<f64>, p: &KernelParams) -> f64 {
    let Some(chol) = Cholesky::new(geom.kernel_matrix(p)) else {
        return f64::NEG_INFINITY;
    };
    let alpha = chol.solve(y);
    let log_det: f64 = chol.l_dirty().diagonal().iter().map(|d| d.ln()).sum();
    -0.5 * y.dot(&alpha) - log_det - 0.5 * geom.n as f64 * (2.0 * std::f64::consts::PI).ln()
}

struct Layout {
    n_ls: usize,
    fit_signal: bool,
}

impl Layout {
    fn decode(&self, theta: &[f64]) -> KernelParams {
        let ls = theta[..self.n_ls].iter().map(|v| v.exp()).collect();
        let (sf2, sn2) = if self.fit_signal {
            (theta[self.n_ls].exp(), theta[self.n_ls + 1].exp())
        } else {
            (1.0, theta[self.n_ls].exp())
        };
        KernelParams::ard(ls, sf2, sn2)
    }
}

/// Hyperparameters maximizing the log marginal likelihood of `data` under a
/// zero prior mean. `warm_start`, when given, seeds the first restart.
pub fn fit_hyperparams<R: Rng + ?Sized>(
    data: &ObservationSet,
    config: &MleConfig,
    warm_start: Option<&KernelParams>,
    rng: &mut R,
) -> Result<KernelParams> {
    if data.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            have: data.len(),
        });
    }
    let dim = data.dim();
    let layout = Layout {
        n_ls: if config.ard { dim } else { 1 },
        fit_signal: !config.high_dim,
    };
    let mut bounds = vec![config.effective_lengthscale_bounds(dim); layout.n_ls];
    if layout.fit_signal {
        bounds.push(config.log_signal_variance_bounds);
    }
    bounds.push(config.log_noise_variance_bounds);

    let geom = Geometry::new(data, config.ard);
    let y = DVector::from_column_slice(data.values());
    let objective = |theta: &[f64]| -lml_cached(&geom, &y, &layout.decode(theta));

    let center: Vec<f64> = {
        let mut c = vec![config.lengthscale_center(dim); layout.n_ls];
        if layout.fit_signal {
            c.push(0.0f64.clamp(config.log_signal_variance_bounds.0, config.log_signal_variance_bounds.1));
        }
        c.push(0.5 * (config.log_noise_variance_bounds.0 + config.log_noise_variance_bounds.1));
        c
    };
    let first = match warm_start {
        Some(p) if p.lengthscales.len() == layout.n_ls || p.lengthscales.len() == 1 => {
            let mut t: Vec<f64> = (0..layout.n_ls)
                .map(|i| p.lengthscales[i.min(p.lengthscales.len() - 1)].ln())
                .collect();
            if layout.fit_signal {
                t.push(p.signal_variance.ln());
            }
            t.push(p.noise_variance.ln());
            for (v, &(lo, hi)) in t.iter_mut().zip(&bounds) {
                *v = v.clamp(lo, hi);
            }
            t
        }
        _ => center,
    };

    let step: Vec<f64> = bounds.iter().map(|(lo, hi)| 0.15 * (hi - lo)).collect();
    let nm = NelderMead {
        max_evals: config.max_evals,
        ..Default::default()
    };

    let mut best: Option<(Vec<f64>, f64)> = None;
    for restart in 0..config.restarts.max(1) {
        let start: Vec<f64> = if restart == 0 {
            first.clone()
        } else {
            bounds.iter().map(|&(lo, hi)| rng.random_range(lo..=hi)).collect()
        };
        let (theta, value) = nm.minimize(&objective, &start, &step, &bounds);
        if value.is_finite() && best.as_ref().is_none_or(|(_, b)| value < *b) {
            best = Some((theta, value));
        }
    }
    let (theta, _) = best.ok_or(Error::NoFiniteLikelihood)?;
    let params = layout.decode(&theta);
    if config.ard {
        Ok(params)
    } else {
        Ok(KernelParams::isotropic(
            params.lengthscales[0],
            params.signal_variance,
            params.noise_variance,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gp::log_marginal_likelihood;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn toy_data() -> ObservationSet {
        let xs: Vec<Vec<f64>> = (0..25).map(|i| vec![i as f64 / 24.0]).collect();
        let ys: Vec<f64> = xs.iter().map(|x| (6.0 * x[0]).sin() + 0.3 * (17.0 * x[0]).cos()).collect();
        ObservationSet::from_parts(1, xs, ys).unwrap()
    }

    #[test]
    fn cached_likelihood_matches_direct() {
        let data = toy_data();
        let p = KernelParams::isotropic(0.3, 1.7, 0.02);
        let geom = Geometry::new(&data, false);
        let y = DVector::from_column_slice(data.values());
        let direct = log_marginal_likelihood(&data, &p, 0.0).unwrap();
        assert!((lml_cached(&geom, &y, &p) - direct).abs() < 1e-9);

        let geom_ard = Geometry::new(&data, true);
        let pa = KernelParams::ard(vec![0.3], 1.7, 0.02);
        assert!((lml_cached(&geom_ard, &y, &pa) - direct).abs() < 1e-9);
    }

    #[test]
    fn needs_two_points() {
        let data = ObservationSet::from_parts(1, vec![vec![0.2]], vec![1.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            fit_hyperparams(&data, &MleConfig::default(), None, &mut rng),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn deterministic_given_seed() {
        let data = toy_data();
        let cfg = MleConfig::default();
        let a = fit_hyperparams(&data, &cfg, None, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        let b = fit_hyperparams(&data, &cfg, None, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn high_dim_shift_and_fixed_signal() {
        let cfg = MleConfig {
            high_dim: true,
            ..Default::default()
        };
        let base = MleConfig::default();
        let d = 100;
        let shift = cfg.lengthscale_center(d) - base.lengthscale_center(d);
        assert!((shift - 0.5 * (d as f64).ln()).abs() < 1e-12);

        let xs: Vec<Vec<f64>> = (0..12)
            .map(|i| (0..d).map(|j| ((i * 31 + j * 7) % 97) as f64 / 96.0).collect())
            .collect();
        let ys: Vec<f64> = xs.iter().map(|x| x[0] - x[1]).collect();
        let data = ObservationSet::from_parts(d, xs, ys).unwrap();
        let p = fit_hyperparams(&data, &cfg, None, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(p.signal_variance, 1.0);
        let (lo, hi) = cfg.effective_lengthscale_bounds(d);
        assert!(p.lengthscales[0].ln() >= lo - 1e-12 && p.lengthscales[0].ln() <= hi + 1e-12);
    }

    #[test]
    fn ard_returns_one_lengthscale_per_dim() {
        let xs: Vec<Vec<f64>> = (0..20)
            .map(|i| vec![(i % 5) as f64 / 4.0, (i / 5) as f64 / 3.0])
            .collect();
        let ys: Vec<f64> = xs.iter().map(|x| (4.0 * x[0]).sin()).collect();
        let data = ObservationSet::from_parts(2, xs, ys).unwrap();
        let cfg = MleConfig {
            ard: true,
            ..Default::default()
        };
        let p = fit_hyperparams(&data, &cfg, None, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert_eq!(p.lengthscales.len(), 2);
        // the second input is irrelevant, so its lengthscale should be longer
        assert!(p.lengthscales[1] > p.lengthscales[0]);
    }
}
