//! Gaussian process regression with a Matérn-5/2 kernel.
//!
//! Inputs are expected in the unit cube. The posterior is kept in factored form
//! (Cholesky of `K + σ_n² I`) so mean, variance and joint covariance queries all
//! reuse one factorization.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};

/// Largest grid accepted by [`sample_paths`].
pub const MAX_PATH_GRID: usize = 256;

const JITTER_START: f64 = 1e-10;
const JITTER_MAX: f64 = 1e-4;

const SQRT5: f64 = 2.236_067_977_499_79;

/// Matérn-5/2 hyperparameters plus the observation noise variance.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelParams {
    /// One shared value (isotropic) or one per input dimension (ARD).
    pub lengthscales: Vec<f64>,
    pub signal_variance: f64,
    pub noise_variance: f64,
}

impl KernelParams {
    pub fn isotropic(lengthscale: f64, signal_variance: f64, noise_variance: f64) -> Self {
        Self {
            lengthscales: vec![lengthscale],
            signal_variance,
            noise_variance,
        }
    }

    pub fn ard(lengthscales: Vec<f64>, signal_variance: f64, noise_variance: f64) -> Self {
        Self {
            lengthscales,
            signal_variance,
            noise_variance,
        }
    }

    pub fn is_ard(&self) -> bool {
        self.lengthscales.len() > 1
    }

    /// Checks positivity and that the lengthscale vector fits dimension `dim`.
    pub fn validate(&self, dim: usize) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if self.lengthscales.is_empty() || !self.lengthscales.iter().all(|&l| positive(l)) {
            return Err(invalid("lengthscale", "must be finite and strictly positive"));
        }
        if self.lengthscales.len() != 1 && self.lengthscales.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: self.lengthscales.len(),
            });
        }
        if !positive(self.signal_variance) {
            return Err(invalid("signal_variance", "must be finite and strictly positive"));
        }
        if !positive(self.noise_variance) {
            return Err(invalid("noise_variance", "must be finite and strictly positive"));
        }
        Ok(())
    }

    fn scaled_distance(&self, x: &[f64], y: &[f64]) -> f64 {
        let sq: f64 = if self.lengthscales.len() == 1 {
            let l = self.lengthscales[0];
            x.iter().zip(y).map(|(a, b)| ((a - b) / l).powi(2)).sum()
        } else {
            x.iter()
                .zip(y)
                .zip(&self.lengthscales)
                .map(|((a, b), l)| ((a - b) / l).powi(2))
                .sum()
        };
        sq.sqrt()
    }

    #[inline]
    pub(crate) fn cov(&self, x: &[f64], y: &[f64]) -> f64 {
        matern52(self.signal_variance, self.scaled_distance(x, y))
    }
}

/// `σ_f² (1 + √5 r + 5r²/3) exp(−√5 r)`.
#[inline]
pub(crate) fn matern52(signal_variance: f64, r: f64) -> f64 {
    let s = SQRT5 * r;
    signal_variance * (1.0 + s + s * s / 3.0) * (-s).exp()
}

/// Matérn-5/2 covariance between two points.
pub fn kernel_eval(params: &KernelParams, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    if params.is_ard() && params.lengthscales.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: params.lengthscales.len(),
        });
    }
    Ok(params.cov(x, y))
}

/// The dataset `D_t`: unit-cube locations with their noisy values.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationSet {
    dim: usize,
    locations: Vec<Vec<f64>>,
    values: Vec<f64>,
}

impl ObservationSet {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            locations: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn from_parts(dim: usize, locations: Vec<Vec<f64>>, values: Vec<f64>) -> Result<Self> {
        if locations.len() != values.len() {
            return Err(invalid(
                "values",
                format!("{} values for {} locations", values.len(), locations.len()),
            ));
        }
        let mut set = Self::new(dim);
        for (x, y) in locations.into_iter().zip(values) {
            set.push(x, y)?;
        }
        Ok(set)
    }

    pub fn push(&mut self, x: Vec<f64>, y: f64) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        if !x.iter().all(|v| (0.0..=1.0).contains(v)) {
            return Err(Error::OutOfDomain { point: x });
        }
        if !y.is_finite() {
            return Err(invalid("value", format!("observation {y} is not finite")));
        }
        self.locations.push(x);
        self.values.push(y);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn locations(&self) -> &[Vec<f64>] {
        &self.locations
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Same locations, values replaced by `(y - mean) / std`. Returns the
    /// transformed set plus `(mean, std)`; a zero spread maps to std 1.
    pub fn standardized(&self) -> (ObservationSet, f64, f64) {
        let n = self.len().max(1) as f64;
        let mean = self.values.iter().sum::<f64>() / n;
        let var = self.values.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / n;
        let std = if var > 0.0 { var.sqrt() } else { 1.0 };
        let values = self.values.iter().map(|y| (y - mean) / std).collect();
        (
            ObservationSet {
                dim: self.dim,
                locations: self.locations.clone(),
                values,
            },
            mean,
            std,
        )
    }
}

/// Cholesky with jitter escalation relative to `scale`. Returns the factor and
/// the jitter that was added to the diagonal.
pub(crate) fn factor_with_jitter(
    matrix: &DMatrix<f64>,
    scale: f64,
    what: &'static str,
) -> Result<(Cholesky<f64, Dyn>, f64)> {
    if let Some(chol) = Cholesky::new(matrix.clone()) {
        return Ok((chol, 0.0));
    }
    let mut jitter = JITTER_START * scale;
    while jitter <= JITTER_MAX * scale * (1.0 + 1e-9) {
        let mut m = matrix.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += jitter;
        }
        if let Some(chol) = Cholesky::new(m) {
            return Ok((chol, jitter));
        }
        jitter *= 10.0;
    }
    Err(Error::NotPositiveDefinite {
        what,
        jitter: JITTER_MAX * scale,
    })
}

/// Exact GP posterior conditioned on an [`ObservationSet`].
#[derive(Debug, Clone)]
pub struct GpPosterior {
    kernel: KernelParams,
    data: ObservationSet,
    chol: Cholesky<f64, Dyn>,
    alpha: DVector<f64>,
    prior_mean: f64,
    jitter: f64,
}

/// Conditions a zero-mean GP on `data`.
pub fn fit_posterior(data: &ObservationSet, params: &KernelParams) -> Result<GpPosterior> {
    fit_posterior_with_mean(data, params, 0.0)
}

/// Conditions a GP with constant prior mean `prior_mean` on `data`.
pub fn fit_posterior_with_mean(
    data: &ObservationSet,
    params: &KernelParams,
    prior_mean: f64,
) -> Result<GpPosterior> {
    if data.is_empty() {
        return Err(Error::InsufficientData { needed: 1, have: 0 });
    }
    params.validate(data.dim())?;
    let n = data.len();
    let xs = data.locations();
    let mut k = DMatrix::from_fn(n, n, |i, j| params.cov(&xs[i], &xs[j]));
    for i in 0..n {
        k[(i, i)] += params.noise_variance;
    }
    let (chol, jitter) = factor_with_jitter(&k, params.signal_variance, "K + σ_n² I")?;
    let centered = DVector::from_iterator(n, data.values().iter().map(|y| y - prior_mean));
    let alpha = chol.solve(&centered);
    Ok(GpPosterior {
        kernel: params.clone(),
        data: data.clone(),
        chol,
        alpha,
        prior_mean,
        jitter,
    })
}

impl GpPosterior {
    pub fn kernel(&self) -> &KernelParams {
        &self.kernel
    }

    pub fn data(&self) -> &ObservationSet {
        &self.data
    }

    pub fn prior_mean(&self) -> f64 {
        self.prior_mean
    }

    /// Diagonal jitter added on top of the noise variance (usually 0).
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    /// Lower-triangular factor `L` with `L Lᵀ = K + (σ_n² + jitter) I`.
    pub fn cholesky_factor(&self) -> DMatrix<f64> {
        self.chol.l()
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.data.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.data.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    fn cross_cov(&self, points: &[Vec<f64>]) -> DMatrix<f64> {
        let xs = self.data.locations();
        DMatrix::from_fn(xs.len(), points.len(), |i, j| self.kernel.cov(&xs[i], &points[j]))
    }

    /// Posterior `(mean, std)` at a single point.
    pub fn posterior_at(&self, x: &[f64]) -> Result<(f64, f64)> {
        self.check_dim(x)?;
        let xs = self.data.locations();
        let kx = DVector::from_iterator(xs.len(), xs.iter().map(|xi| self.kernel.cov(xi, x)));
        let mean = self.prior_mean + kx.dot(&self.alpha);
        let v = self
            .chol
            .l_dirty()
            .solve_lower_triangular(&kx)
            .expect("cholesky factor has a nonzero diagonal");
        let var = self.kernel.signal_variance - v.norm_squared();
        Ok((mean, var.max(0.0).sqrt()))
    }

    /// Posterior means and standard deviations for a batch of points.
    pub fn predict(&self, points: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<f64>)> {
        for p in points {
            self.check_dim(p)?;
        }
        if points.is_empty() {
            return Ok((Vec::new(), Vec::new()));
        }
        let kxs = self.cross_cov(points);
        let means = kxs.tr_mul(&self.alpha);
        let v = self
            .chol
            .l_dirty()
            .solve_lower_triangular(&kxs)
            .expect("cholesky factor has a nonzero diagonal");
        let mut mu = Vec::with_capacity(points.len());
        let mut sd = Vec::with_capacity(points.len());
        for j in 0..points.len() {
            mu.push(self.prior_mean + means[j]);
            let var = self.kernel.signal_variance - v.column(j).norm_squared();
            sd.push(var.max(0.0).sqrt());
        }
        Ok((mu, sd))
    }

    /// Joint posterior mean vector and covariance matrix over `points`.
    pub fn joint(&self, points: &[Vec<f64>]) -> Result<(DVector<f64>, DMatrix<f64>)> {
        for p in points {
            self.check_dim(p)?;
        }
        let n = points.len();
        let kxs = self.cross_cov(points);
        let mean = kxs.tr_mul(&self.alpha).add_scalar(self.prior_mean);
        let v = self
            .chol
            .l_dirty()
            .solve_lower_triangular(&kxs)
            .expect("cholesky factor has a nonzero diagonal");
        let prior = DMatrix::from_fn(n, n, |i, j| self.kernel.cov(&points[i], &points[j]));
        let mut cov = prior - v.tr_mul(&v);
        // symmetrize away round-off
        for i in 0..n {
            for j in 0..i {
                let s = 0.5 * (cov[(i, j)] + cov[(j, i)]);
                cov[(i, j)] = s;
                cov[(j, i)] = s;
            }
        }
        Ok((mean, cov))
    }
}

/// Draws `count` joint posterior paths over `grid`. Row `j` of the result is
/// path `j` evaluated at every grid point.
pub fn sample_paths<R: Rng + ?Sized>(
    gp: &GpPosterior,
    grid: &[Vec<f64>],
    count: usize,
    rng: &mut R,
) -> Result<DMatrix<f64>> {
    if grid.is_empty() {
        return Err(invalid("grid", "must contain at least one point"));
    }
    if grid.len() > MAX_PATH_GRID {
        return Err(invalid(
            "grid",
            format!("{} points exceeds the cap of {MAX_PATH_GRID}", grid.len()),
        ));
    }
    if count == 0 {
        return Err(invalid("path count", "must be at least 1"));
    }
    let (mean, cov) = gp.joint(grid)?;
    let (chol, _) = factor_with_jitter(&cov, gp.kernel.signal_variance, "posterior grid covariance")?;
    let l = chol.l();
    let n = grid.len();
    let mut paths = DMatrix::zeros(count, n);
    let mut z = DVector::zeros(n);
    for j in 0..count {
        for zi in z.iter_mut() {
            *zi = rng.sample(StandardNormal);
        }
        let draw = &l * &z + &mean;
        paths.row_mut(j).copy_from(&draw.transpose());
    }
    Ok(paths)
}

/// `log N(y | m, K + σ_n² I)` for a constant prior mean.
pub fn log_marginal_likelihood(
    data: &ObservationSet,
    params: &KernelParams,
    prior_mean: f64,
) -> Result<f64> {
    let gp = fit_posterior_with_mean(data, params, prior_mean)?;
    Ok(gp.log_marginal_likelihood())
}

impl GpPosterior {
    pub fn log_marginal_likelihood(&self) -> f64 {
        let n = self.data.len() as f64;
        let centered =
            DVector::from_iterator(self.data.len(), self.data.values().iter().map(|y| y - self.prior_mean));
        let fit = centered.dot(&self.alpha);
        let log_det: f64 = self.chol.l_dirty().diagonal().iter().map(|d| d.ln()).sum();
        -0.5 * fit - log_det - 0.5 * n * (2.0 * std::f64::consts::PI).ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn single(y: f64, noise: f64) -> GpPosterior {
        let data = ObservationSet::from_parts(1, vec![vec![0.5]], vec![y]).unwrap();
        fit_posterior(&data, &KernelParams::isotropic(0.2, 1.0, noise)).unwrap()
    }

    #[test]
    fn kernel_closed_form() {
        let p = KernelParams::isotropic(1.0, 1.0, 0.01);
        assert_eq!(kernel_eval(&p, &[0.3, 0.1], &[0.3, 0.1]).unwrap(), 1.0);
        let k = kernel_eval(&p, &[0.0], &[1.0]).unwrap();
        assert!((k - 0.523_994_108_831_820_3).abs() < 1e-12, "{k}");
        let p2 = KernelParams::isotropic(1.0, 2.0, 0.01);
        assert_eq!(kernel_eval(&p2, &[0.7], &[0.7]).unwrap(), 2.0);
    }

    #[test]
    fn kernel_dimension_mismatch() {
        let p = KernelParams::isotropic(1.0, 1.0, 0.01);
        assert!(matches!(
            kernel_eval(&p, &[0.0, 1.0], &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        let ard = KernelParams::ard(vec![0.1, 0.2], 1.0, 0.01);
        assert!(kernel_eval(&ard, &[0.0; 3], &[0.0; 3]).is_err());
    }

    #[test]
    fn single_observation_posterior() {
        let gp = single(1.0, 0.01);
        let (m, s) = gp.posterior_at(&[0.5]).unwrap();
        assert!((m - 1.0 / 1.01).abs() < 1e-12);
        assert!((s * s - (1.0 - 1.0 / 1.01)).abs() < 1e-12);
        assert!((m - 0.990099).abs() < 1e-6);
        assert!((s * s - 0.009901).abs() < 1e-6);
    }

    #[test]
    fn coincident_observations() {
        let data =
            ObservationSet::from_parts(1, vec![vec![0.5], vec![0.5]], vec![1.0, 1.0]).unwrap();
        let p = KernelParams::isotropic(0.2, 1.0, 0.01);
        let gp = fit_posterior(&data, &p).unwrap();
        // 2x2 solve: [[1.01, 1],[1, 1.01]] a = [1,1] -> a = 1/2.01 each
        let expected = 2.0 / 2.01;
        assert!((gp.posterior_at(&[0.5]).unwrap().0 - expected).abs() < 1e-12);
        assert!((expected - 1.0 / (1.0 + 0.01 / 2.0)).abs() < 1e-15);
    }

    #[test]
    fn noiseless_interpolation_and_prior_recovery() {
        let data = ObservationSet::from_parts(
            1,
            vec![vec![0.1], vec![0.4], vec![0.45]],
            vec![0.3, -1.2, 0.8],
        )
        .unwrap();
        let p = KernelParams::isotropic(0.05, 1.0, 1e-10);
        let gp = fit_posterior(&data, &p).unwrap();
        for (x, y) in data.locations().iter().zip(data.values()) {
            let (m, s) = gp.posterior_at(x).unwrap();
            assert!((m - y).abs() < 1e-4);
            assert!(s < 1e-4);
        }
        let far = fit_posterior(
            &ObservationSet::from_parts(1, vec![vec![0.0]], vec![2.0]).unwrap(),
            &KernelParams::isotropic(0.01, 1.0, 0.01),
        )
        .unwrap();
        let (m, s) = far.posterior_at(&[1.0]).unwrap();
        assert!(m.abs() < 1e-3);
        assert!((s - 1.0).abs() < 1e-3);
    }

    #[test]
    fn empty_data_is_rejected() {
        let data = ObservationSet::new(2);
        assert!(matches!(
            fit_posterior(&data, &KernelParams::isotropic(0.2, 1.0, 0.01)),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn observation_set_rejects_bad_points() {
        let mut set = ObservationSet::new(2);
        assert!(set.push(vec![0.5], 1.0).is_err());
        assert!(set.push(vec![0.5, 1.2], 1.0).is_err());
        assert!(set.push(vec![0.5, 0.5], f64::NAN).is_err());
        set.push(vec![0.5, 0.5], 1.0).unwrap();
        assert_eq!(set.len(), 1);
    }

    #[test]
    fn cholesky_reconstructs_kernel_matrix() {
        let xs: Vec<Vec<f64>> = (0..6).map(|i| vec![i as f64 / 7.0, (i * i) as f64 / 40.0]).collect();
        let ys: Vec<f64> = (0..6).map(|i| (i as f64).sin()).collect();
        let data = ObservationSet::from_parts(2, xs.clone(), ys).unwrap();
        let p = KernelParams::ard(vec![0.3, 0.6], 1.5, 0.02);
        let gp = fit_posterior(&data, &p).unwrap();
        let l = gp.cholesky_factor();
        let rebuilt = &l * l.transpose();
        for i in 0..6 {
            for j in 0..6 {
                let mut k = p.cov(&xs[i], &xs[j]);
                if i == j {
                    k += p.noise_variance + gp.jitter();
                }
                assert!((rebuilt[(i, j)] - k).abs() <= 1e-8 * k.abs().max(1.0));
            }
        }
    }

    #[test]
    fn batch_matches_pointwise() {
        let data = ObservationSet::from_parts(
            2,
            vec![vec![0.1, 0.2], vec![0.8, 0.4], vec![0.5, 0.9]],
            vec![1.0, -0.5, 0.25],
        )
        .unwrap();
        let gp = fit_posterior(&data, &KernelParams::isotropic(0.4, 1.3, 0.05)).unwrap();
        let pts = vec![vec![0.3, 0.3], vec![0.0, 1.0], vec![0.8, 0.4]];
        let (m, s) = gp.predict(&pts).unwrap();
        for (i, p) in pts.iter().enumerate() {
            let (mi, si) = gp.posterior_at(p).unwrap();
            assert!((m[i] - mi).abs() < 1e-12);
            assert!((s[i] - si).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_paths_follow_the_mean() {
        let xs: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64 / 4.0]).collect();
        let ys = vec![0.2, 1.0, -0.3, 0.5, 0.0];
        let data = ObservationSet::from_parts(1, xs.clone(), ys).unwrap();
        let gp = fit_posterior(&data, &KernelParams::isotropic(0.3, 1.0, 1e-10)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let paths = sample_paths(&gp, &xs, 20, &mut rng).unwrap();
        let (mu, _) = gp.predict(&xs).unwrap();
        for j in 0..20 {
            for i in 0..5 {
                assert!((paths[(j, i)] - mu[i]).abs() < 1e-3);
            }
        }
    }

    #[test]
    fn prior_single_point_moments() {
        // far-away datum leaves the grid point at its prior N(0, 1)
        let data = ObservationSet::from_parts(1, vec![vec![0.0]], vec![0.0]).unwrap();
        let gp = fit_posterior(&data, &KernelParams::isotropic(0.001, 1.0, 0.01)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let paths = sample_paths(&gp, &[vec![1.0]], 10_000, &mut rng).unwrap();
        let col = paths.column(0);
        let mean = col.mean();
        let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 9_999.0;
        assert!(mean.abs() < 0.05, "{mean}");
        assert!((var - 1.0).abs() < 0.1, "{var}");
    }

    #[test]
    fn two_point_correlation() {
        // choose the distance where the Matérn-5/2 correlation is 0.9
        let target = 0.9;
        let (mut lo, mut hi) = (0.0, 2.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if matern52(1.0, mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let r = 0.5 * (lo + hi);
        let ell = 0.1 / r;
        let data = ObservationSet::from_parts(1, vec![vec![1.0]], vec![0.0]).unwrap();
        let gp = fit_posterior(&data, &KernelParams::isotropic(ell, 1.0, 1e6)).unwrap();
        let grid = vec![vec![0.0], vec![0.1]];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let paths = sample_paths(&gp, &grid, 10_000, &mut rng).unwrap();
        let (a, b) = (paths.column(0), paths.column(1));
        let (ma, mb) = (a.mean(), b.mean());
        let cov: f64 = a.iter().zip(b.iter()).map(|(x, y)| (x - ma) * (y - mb)).sum();
        let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
        let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
        let corr = cov / (va * vb).sqrt();
        assert!((corr - 0.9).abs() < 0.05, "{corr}");
    }

    #[test]
    fn path_grid_cap_and_count() {
        let gp = single(1.0, 0.01);
        let big: Vec<Vec<f64>> = (0..=MAX_PATH_GRID).map(|i| vec![i as f64 / 300.0]).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(sample_paths(&gp, &big, 1, &mut rng).is_err());
        assert!(sample_paths(&gp, &[], 1, &mut rng).is_err());
        assert!(sample_paths(&gp, &[vec![0.2]], 0, &mut rng).is_err());
    }

    #[test]
    fn paths_are_seed_reproducible() {
        let gp = single(0.3, 0.01);
        let grid: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64 / 9.0]).collect();
        let a = sample_paths(&gp, &grid, 4, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = sample_paths(&gp, &grid, 4, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn standardization() {
        let data =
            ObservationSet::from_parts(1, vec![vec![0.0], vec![1.0]], vec![3.0, 5.0]).unwrap();
        let (z, mean, std) = data.standardized();
        assert_eq!((mean, std), (4.0, 1.0));
        assert_eq!(z.values(), &[-1.0, 1.0]);
        let flat = ObservationSet::from_parts(1, vec![vec![0.0]], vec![2.0]).unwrap();
        let (z, _, std) = flat.standardized();
        assert_eq!(std, 1.0);
        assert_eq!(z.values(), &[0.0]);
    }
}
