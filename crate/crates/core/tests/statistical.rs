//! Seeded Monte-Carlo and optimization checks. Slower than the property suite.

use ccgbo::acquisition::beta_t;
use ccgbo::benchmarks::Benchmark;
use ccgbo::credit::optimum_proxy;
use ccgbo::design::latin_hypercube;
use ccgbo::gp::{fit_posterior, log_marginal_likelihood, sample_paths, KernelParams, ObservationSet};
use ccgbo::hyper::{fit_hyperparams, MleConfig};
use ccgbo::optimizer::{run, RunConfig};
use ccgbo::AcquisitionKind;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Draws a prior GP function on `grid` with a dense Cholesky factor.
fn prior_function(p: &KernelParams, grid: &[Vec<f64>], rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = grid.len();
    let k = DMatrix::from_fn(n, n, |i, j| {
        ccgbo::gp::kernel_eval(p, &grid[i], &grid[j]).unwrap() + if i == j { 1e-10 } else { 0.0 }
    });
    let l = k.cholesky().unwrap().l();
    let z = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
    (l * z).iter().copied().collect()
}

fn noisy_sample(p: &KernelParams, xs: Vec<Vec<f64>>, rng: &mut ChaCha8Rng) -> ObservationSet {
    let f = prior_function(p, &xs, rng);
    let sd = p.noise_variance.sqrt();
    let ys = f.iter().map(|v| v + sd * rng.sample::<f64, _>(StandardNormal)).collect();
    ObservationSet::from_parts(xs[0].len(), xs, ys).unwrap()
}

#[test]
fn path_moments_match_posterior() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let p = KernelParams::isotropic(0.3, 1.5, 0.01);
    let xs = latin_hypercube(6, 1, &mut rng);
    let data = noisy_sample(&p, xs, &mut rng);
    let gp = fit_posterior(&data, &p).unwrap();
    let grid: Vec<Vec<f64>> = (0..5).map(|i| vec![0.1 + 0.2 * i as f64]).collect();
    let k = 10_000;
    let paths = sample_paths(&gp, &grid, k, &mut rng).unwrap();
    let (mu, cov) = gp.joint(&grid).unwrap();
    let tol = 3.0 / (k as f64).sqrt() * p.signal_variance.sqrt();
    for i in 0..5 {
        let mean_i = paths.column(i).mean();
        assert!((mean_i - mu[i]).abs() < tol, "mean {i}");
        for j in 0..5 {
            let mean_j = paths.column(j).mean();
            let c = paths
                .column(i)
                .iter()
                .zip(paths.column(j).iter())
                .map(|(a, b)| (a - mean_i) * (b - mean_j))
                .sum::<f64>()
                / (k - 1) as f64;
            assert!((c - cov[(i, j)]).abs() < tol * p.signal_variance.sqrt(), "cov {i},{j}: {c} vs {}", cov[(i, j)]);
        }
    }
}

#[test]
fn mle_beats_coarse_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let xs = latin_hypercube(20, 2, &mut rng);
    let ys: Vec<f64> = xs.iter().map(|x| (6.0 * x[0]).sin() * (3.0 * x[1]).cos() + 0.05 * rng.sample::<f64, _>(StandardNormal)).collect();
    let data = ObservationSet::from_parts(2, xs, ys).unwrap();
    let cfg = MleConfig::default();
    let fitted = fit_hyperparams(&data, &cfg, None, &mut rng).unwrap();
    let best = log_marginal_likelihood(&data, &fitted, 0.0).unwrap();

    let axis = |(lo, hi): (f64, f64)| (0..5).map(move |i| (lo + (hi - lo) * i as f64 / 4.0).exp());
    let mut grid_best = f64::NEG_INFINITY;
    for l in axis(cfg.log_lengthscale_bounds) {
        for s in axis(cfg.log_signal_variance_bounds) {
            for n in axis(cfg.log_noise_variance_bounds) {
                if let Ok(v) = log_marginal_likelihood(&data, &KernelParams::isotropic(l, s, n), 0.0) {
                    grid_best = grid_best.max(v);
                }
            }
        }
    }
    assert!(best >= grid_best - 1e-6, "{best} < {grid_best}");
}

#[test]
fn mle_recovers_lengthscale() {
    let truth = KernelParams::isotropic(0.2, 1.0, 1e-3);
    let mut hits = 0;
    for trial in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + trial);
        let xs = latin_hypercube(40, 1, &mut rng);
        let data = noisy_sample(&truth, xs, &mut rng);
        let fitted = fit_hyperparams(&data, &MleConfig::default(), None, &mut rng).unwrap();
        let l = fitted.lengthscales[0];
        if (l - 0.2).abs() / 0.2 <= 0.5 {
            hits += 1;
        }
    }
    assert!(hits >= 16, "{hits}/20");
}

#[test]
fn proxy_tracks_true_optimum() {
    let p = KernelParams::isotropic(0.2, 1.0, 1e-4);
    let grid: Vec<Vec<f64>> = (0..200).map(|i| vec![i as f64 / 199.0]).collect();
    let k = 25;
    let mut held = 0;
    for trial in 0..50 {
        let mut rng = ChaCha8Rng::seed_from_u64(trial);
        let f = prior_function(&p, &grid, &mut rng);
        let idx: Vec<usize> = (0..40).map(|i| i * 5 + 2).collect();
        let ys = idx.iter().map(|&i| f[i] + 1e-2 * rng.sample::<f64, _>(StandardNormal)).collect();
        let data = ObservationSet::from_parts(1, idx.iter().map(|&i| grid[i].clone()).collect(), ys).unwrap();
        let gp = fit_posterior(&data, &p).unwrap();
        let z = optimum_proxy(&gp, &grid, k, &mut rng).unwrap().proxy;
        let f_star = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let s_t = gp.predict(&grid).unwrap().1.into_iter().fold(0.0, f64::max);
        let bound = beta_t(40, 0.1) * s_t + 4.0 * s_t * (10f64.ln() / k as f64).sqrt();
        if (z - f_star).abs() <= bound {
            held += 1;
        }
    }
    assert!(held >= 45, "{held}/50");
}

#[test]
fn recorded_optima_dominate_random_samples() {
    for b in Benchmark::suite() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let best = (0..100_000)
            .map(|_| {
                let u: Vec<f64> = (0..b.dim()).map(|_| rng.random()).collect();
                b.evaluate_unit(&u).unwrap()
            })
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(b.f_star() >= best, "{}: {} < {best}", b.name(), b.f_star());
    }
}

fn short(kind: AcquisitionKind, seed: u64) -> RunConfig {
    let mut cfg = RunConfig::new(Benchmark::hartmann6(), kind, seed);
    cfg.budget = 8;
    cfg
}

#[test]
fn zero_lambda_matches_plain_ucb() {
    for seed in 0..3 {
        let plain = run(&short(AcquisitionKind::Ucb, seed)).unwrap();
        let mut cfg = short(AcquisitionKind::CreditUcb, seed);
        cfg.acquisition.lambda = 0.0;
        let credit = run(&cfg).unwrap();
        assert_eq!(plain.queries, credit.queries);
    }
}

#[test]
fn zero_lambda_thompson_matches_plain() {
    let plain = run(&short(AcquisitionKind::Ts, 4)).unwrap();
    let mut cfg = short(AcquisitionKind::CreditTs, 4);
    cfg.acquisition.lambda = 0.0;
    assert_eq!(plain.queries, run(&cfg).unwrap().queries);
}

#[test]
fn credit_engine_has_no_side_channel() {
    let plain = run(&short(AcquisitionKind::Ucb, 7)).unwrap();
    let mut cfg = short(AcquisitionKind::Ucb, 7);
    cfg.record_credits = true;
    let recorded = run(&cfg).unwrap();
    assert_eq!(plain.queries, recorded.queries);
    assert!(recorded.credit_snapshots[recorded.n_init].is_some());
}

#[test]
fn ucb_beats_random_on_hartmann() {
    let (mut ucb, mut rnd) = (0.0, 0.0);
    for seed in 0..5 {
        let mut cfg = RunConfig::new(Benchmark::hartmann6(), AcquisitionKind::Ucb, seed);
        cfg.budget = 30;
        ucb += Benchmark::hartmann6().f_star() - run(&cfg).unwrap().best_true.last().unwrap();
        cfg.acquisition.kind = AcquisitionKind::Random;
        rnd += Benchmark::hartmann6().f_star() - run(&cfg).unwrap().best_true.last().unwrap();
    }
    assert!(ucb < rnd, "{ucb} vs {rnd}");
}
