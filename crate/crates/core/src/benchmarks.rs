//! Synthetic objectives in maximization form, optionally embedded into a
//! higher-dimensional box where only the leading coordinates matter.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{invalid, Error, Result};

const LANGERMANN_C: [f64; 5] = [1.0, 2.0, 5.0, 2.0, 3.0];
const LANGERMANN_A: [[f64; 2]; 5] = [[3.0, 5.0], [5.0, 2.0], [2.0, 1.0], [1.0, 4.0], [7.0, 9.0]];
/// Maximum of the negated Langermann function on `[0,10]²`, located by a
/// 400×400 grid scan followed by local refinement.
const LANGERMANN_F_STAR: f64 = 4.155_809_291_847_786;
const LANGERMANN_X_STAR: [f64; 2] = [2.793_402_210_633_728_6, 1.597_232_500_841_850_4];

const HARTMANN_ALPHA: [f64; 4] = [1.0, 1.2, 3.0, 3.2];
const HARTMANN_A: [[f64; 6]; 4] = [
    [10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
    [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
    [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
    [17.0, 8.0, 0.05, 10.0, 0.1, 14.0],
];
const HARTMANN_P: [[f64; 6]; 4] = [
    [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886],
    [0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991],
    [0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650],
    [0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381],
];
/// Locally refined optimum; the rounded literature point scores 3.322368011391.
const HARTMANN_F_STAR: f64 = 3.322_368_011_415_515;
const HARTMANN_X_STAR: [f64; 6] = [
    0.201_689_509_093_657_46,
    0.150_010_693_541_113_74,
    0.476_873_972_925_099_8,
    0.275_332_427_522_078_2,
    0.311_651_617_239_568_6,
    0.657_300_534_553_670_2,
];

/// Literature optimizer of Hartmann-6 as usually quoted.
pub const HARTMANN6_LITERATURE_OPTIMUM: [f64; 6] = [0.20169, 0.150011, 0.476874, 0.275332, 0.311652, 0.6573];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestFunction {
    Langermann,
    Hartmann6,
    Griewank,
    Levy,
    Rosenbrock,
}

impl TestFunction {
    fn family(&self) -> &'static str {
        match self {
            TestFunction::Langermann => "langermann",
            TestFunction::Hartmann6 => "hartmann",
            TestFunction::Griewank => "griewank",
            TestFunction::Levy => "levy",
            TestFunction::Rosenbrock => "rosenbrock",
        }
    }

    /// Standard minimization form.
    fn minimization_value(&self, x: &[f64]) -> f64 {
        match self {
            TestFunction::Langermann => LANGERMANN_C
                .iter()
                .zip(&LANGERMANN_A)
                .map(|(c, a)| {
                    let d: f64 = x.iter().zip(a).map(|(xi, ai)| (xi - ai).powi(2)).sum();
                    c * (-d / PI).exp() * (PI * d).cos()
                })
                .sum(),
            TestFunction::Hartmann6 => -HARTMANN_ALPHA
                .iter()
                .zip(HARTMANN_A.iter().zip(&HARTMANN_P))
                .map(|(alpha, (a, p))| {
                    let inner: f64 = (0..6).map(|j| a[j] * (x[j] - p[j]).powi(2)).sum();
                    alpha * (-inner).exp()
                })
                .sum::<f64>(),
            TestFunction::Griewank => {
                let sum: f64 = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
                let prod: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product();
                1.0 + sum - prod
            }
            TestFunction::Levy => {
                let w: Vec<f64> = x.iter().map(|v| 1.0 + (v - 1.0) / 4.0).collect();
                let d = w.len();
                let head = sin_pi(w[0]).powi(2);
                let mid: f64 = w[..d - 1]
                    .iter()
                    .map(|wi| (wi - 1.0).powi(2) * (1.0 + 10.0 * (PI * wi + 1.0).sin().powi(2)))
                    .sum();
                let last = w[d - 1];
                let tail = (last - 1.0).powi(2) * (1.0 + (2.0 * PI * last).sin().powi(2));
                head + mid + tail
            }
            TestFunction::Rosenbrock => x
                .windows(2)
                .map(|p| 100.0 * (p[1] - p[0] * p[0]).powi(2) + (1.0 - p[0]).powi(2))
                .sum(),
        }
    }
}

/// `sin(πx)`, exact at integers.
fn sin_pi(x: f64) -> f64 {
    let n = x.round();
    let s = (PI * (x - n)).sin();
    if n.rem_euclid(2.0) == 0.0 {
        s
    } else {
        -s
    }
}

/// A bounded maximization problem with a known optimum value.
#[derive(Debug, Clone, PartialEq)]
pub struct Benchmark {
    name: String,
    function: TestFunction,
    effective_dim: usize,
    bounds: Vec<(f64, f64)>,
    f_star: f64,
    optimizer: Option<Vec<f64>>,
}

impl Benchmark {
    pub fn langermann2() -> Self {
        Self::native(TestFunction::Langermann, 2, (0.0, 10.0), LANGERMANN_F_STAR, LANGERMANN_X_STAR.to_vec())
    }

    pub fn hartmann6() -> Self {
        Self::native(TestFunction::Hartmann6, 6, (0.0, 1.0), HARTMANN_F_STAR, HARTMANN_X_STAR.to_vec())
    }

    pub fn griewank(dim: usize) -> Self {
        Self::native(TestFunction::Griewank, dim, (-600.0, 600.0), 0.0, vec![0.0; dim])
    }

    pub fn levy(dim: usize) -> Self {
        Self::native(TestFunction::Levy, dim, (-10.0, 10.0), 0.0, vec![1.0; dim])
    }

    pub fn rosenbrock(dim: usize) -> Self {
        Self::native(TestFunction::Rosenbrock, dim, (-5.0, 10.0), 0.0, vec![1.0; dim])
    }

    fn native(function: TestFunction, dim: usize, bound: (f64, f64), f_star: f64, optimizer: Vec<f64>) -> Self {
        Self {
            name: format!("{}{}", function.family(), dim),
            function,
            effective_dim: dim,
            bounds: vec![bound; dim],
            f_star,
            optimizer: Some(optimizer),
        }
    }

    /// The five synthetic problems of the standard suite.
    pub fn suite() -> Vec<Benchmark> {
        vec![
            Self::langermann2(),
            Self::hartmann6(),
            Self::griewank(6),
            Self::levy(8),
            Self::rosenbrock(10),
        ]
    }

    /// Looks up a benchmark by id such as `hartmann6`, `levy8` or `levy4_1000`.
    pub fn from_id(id: &str) -> Result<Self> {
        let unknown = || Error::UnknownBenchmark(id.to_string());
        let (base, embed_dim) = match id.split_once('_') {
            Some((base, d)) => (base, Some(d.parse::<usize>().map_err(|_| unknown())?)),
            None => (id, None),
        };
        let split = base.find(|c: char| c.is_ascii_digit()).ok_or_else(unknown)?;
        let (family, dim) = base.split_at(split);
        let dim: usize = dim.parse().map_err(|_| unknown())?;
        let bench = match (family, dim) {
            ("langermann", 2) => Self::langermann2(),
            ("hartmann", 6) => Self::hartmann6(),
            ("griewank", d) if d >= 1 => Self::griewank(d),
            ("levy", d) if d >= 1 => Self::levy(d),
            ("rosenbrock", d) if d >= 2 => Self::rosenbrock(d),
            _ => return Err(unknown()),
        };
        match embed_dim {
            Some(d) => bench.embed(d),
            None => Ok(bench),
        }
    }

    /// Lifts the problem to `dim` inputs; the extra coordinates live in
    /// `[0,1]` and do not affect the value.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        if dim < self.effective_dim {
            return Err(invalid(
                "embedding dimension",
                format!("{dim} is below the effective dimension {}", self.effective_dim),
            ));
        }
        let mut bounds = self.bounds[..self.effective_dim].to_vec();
        bounds.resize(dim, (0.0, 1.0));
        let optimizer = self.optimizer.as_ref().map(|x| {
            let mut x = x[..self.effective_dim].to_vec();
            x.resize(dim, 0.0);
            x
        });
        let base = format!("{}{}", self.function.family(), self.effective_dim);
        Ok(Self {
            name: if dim == self.effective_dim { base } else { format!("{base}_{dim}") },
            function: self.function,
            effective_dim: self.effective_dim,
            bounds,
            f_star: self.f_star,
            optimizer,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn effective_dim(&self) -> usize {
        self.effective_dim
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    /// Known optimum value `f(x*)`.
    pub fn f_star(&self) -> f64 {
        self.f_star
    }

    pub fn optimizer(&self) -> Option<&[f64]> {
        self.optimizer.as_deref()
    }

    /// Maximization value at a point of the native box.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        if !x.iter().zip(&self.bounds).all(|(v, (lo, hi))| *lo <= *v && *v <= *hi) {
            return Err(Error::OutOfDomain { point: x.to_vec() });
        }
        // subtraction rather than negation so optima report +0.0
        Ok(0.0 - self.function.minimization_value(&x[..self.effective_dim]))
    }

    /// Maps a unit-cube point into the native box.
    pub fn to_native(&self, u: &[f64]) -> Vec<f64> {
        u.iter()
            .zip(&self.bounds)
            .map(|(v, (lo, hi))| (lo + v * (hi - lo)).clamp(*lo, *hi))
            .collect()
    }

    pub fn to_unit(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.bounds)
            .map(|(v, (lo, hi))| ((v - lo) / (hi - lo)).clamp(0.0, 1.0))
            .collect()
    }

    pub fn evaluate_unit(&self, u: &[f64]) -> Result<f64> {
        if !u.iter().all(|v| (0.0..=1.0).contains(v)) {
            return Err(Error::OutOfDomain { point: u.to_vec() });
        }
        self.evaluate(&self.to_native(u))
    }

    /// `evaluate(x)` plus Gaussian noise of variance `noise_variance`.
    pub fn observe<R: Rng + ?Sized>(&self, x: &[f64], noise_variance: f64, rng: &mut R) -> Result<f64> {
        let f = self.evaluate(x)?;
        Ok(f + gaussian_noise(noise_variance, rng)?)
    }
}

pub(crate) fn gaussian_noise<R: Rng + ?Sized>(variance: f64, rng: &mut R) -> Result<f64> {
    if variance == 0.0 {
        return Ok(0.0);
    }
    let normal = Normal::new(0.0, variance.sqrt())
        .map_err(|e| invalid("noise_variance", e.to_string()))?;
    Ok(normal.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn known_optima() {
        assert_eq!(Benchmark::griewank(6).evaluate(&[0.0; 6]).unwrap(), 0.0);
        assert_eq!(Benchmark::levy(8).evaluate(&[1.0; 8]).unwrap(), 0.0);
        assert!((sin_pi(0.5) - 1.0).abs() < 1e-15 && (sin_pi(1.5) + 1.0).abs() < 1e-15);
        assert_eq!(Benchmark::rosenbrock(10).evaluate(&[1.0; 10]).unwrap(), 0.0);
        let h = Benchmark::hartmann6();
        let v = h.evaluate(&HARTMANN6_LITERATURE_OPTIMUM).unwrap();
        assert!((v - 3.32237).abs() < 1e-4);
        assert!(h.evaluate(h.optimizer().unwrap()).unwrap() >= v);
        let l = Benchmark::langermann2();
        assert!((l.evaluate(l.optimizer().unwrap()).unwrap() - l.f_star()).abs() < 1e-12);
    }

    #[test]
    fn domain_checks() {
        let g = Benchmark::griewank(6);
        assert!(matches!(g.evaluate(&[700.0, 0.0, 0.0, 0.0, 0.0, 0.0]), Err(Error::OutOfDomain { .. })));
        assert!(matches!(g.evaluate(&[0.0; 5]), Err(Error::DimensionMismatch { .. })));
        assert_eq!(g.evaluate_unit(&[0.5; 6]).unwrap(), 0.0);
        assert!(g.evaluate_unit(&[1.5; 6]).is_err());
    }

    #[test]
    fn native_boxes() {
        let boxes: Vec<(String, (f64, f64), usize)> = Benchmark::suite()
            .into_iter()
            .map(|b| (b.name().to_string(), b.bounds()[0], b.dim()))
            .collect();
        assert_eq!(
            boxes,
            vec![
                ("langermann2".to_string(), (0.0, 10.0), 2),
                ("hartmann6".to_string(), (0.0, 1.0), 6),
                ("griewank6".to_string(), (-600.0, 600.0), 6),
                ("levy8".to_string(), (-10.0, 10.0), 8),
                ("rosenbrock10".to_string(), (-5.0, 10.0), 10),
            ]
        );
    }

    #[test]
    fn registry() {
        assert_eq!(Benchmark::from_id("hartmann6").unwrap(), Benchmark::hartmann6());
        let e = Benchmark::from_id("levy4_1000").unwrap();
        assert_eq!((e.dim(), e.effective_dim(), e.name()), (1000, 4, "levy4_1000"));
        for bad in ["hartmann5", "sphere3", "levy", "levy4_2", "rosenbrock1", "levy4_x"] {
            assert!(Benchmark::from_id(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn embedding() {
        let levy = Benchmark::levy(4);
        let big = levy.embed(1000).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let head = [0.3, -2.0, 4.5, 9.0];
        let reference = levy.evaluate(&head).unwrap();
        for _ in 0..20 {
            let mut x = head.to_vec();
            x.extend((0..996).map(|_| rng.random::<f64>()));
            assert_eq!(big.evaluate(&x).unwrap(), reference);
        }
        assert_eq!(levy.embed(4).unwrap(), levy);
        assert!(levy.embed(3).is_err());

        let h = Benchmark::hartmann6().embed(25).unwrap();
        let mut x = HARTMANN6_LITERATURE_OPTIMUM.to_vec();
        x.resize(25, 0.0);
        assert!((h.evaluate(&x).unwrap() - 3.32237).abs() < 1e-4);
    }

    #[test]
    fn noise_channel() {
        let h = Benchmark::hartmann6();
        let x = [0.3; 6];
        let f = h.evaluate(&x).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        assert_eq!(h.observe(&x, 0.0, &mut rng).unwrap(), f);
        let n = 10_000;
        let obs: Vec<f64> = (0..n).map(|_| h.observe(&x, 0.01, &mut rng).unwrap()).collect();
        let mean = obs.iter().sum::<f64>() / n as f64;
        let var = obs.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - f).abs() < 3.0 * (0.01f64 / n as f64).sqrt());
        assert!((var - 0.01).abs() < 0.002);
    }

    #[test]
    fn unit_map_round_trip() {
        let r = Benchmark::rosenbrock(3);
        let u = [0.0, 0.25, 1.0];
        assert_eq!(r.to_native(&u), vec![-5.0, -1.25, 10.0]);
        assert_eq!(r.to_unit(&r.to_native(&u)), u.to_vec());
    }
}
