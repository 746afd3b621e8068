//! Box-constrained Nelder–Mead used for marginal-likelihood fitting.

#[derive(Debug, Clone, Copy)]
pub(crate) struct NelderMead {
    pub max_evals: usize,
    pub f_tol: f64,
    pub x_tol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_evals: 200,
            f_tol: 1e-8,
            x_tol: 1e-6,
        }
    }
}

fn project(x: &mut [f64], bounds: &[(f64, f64)]) {
    for (v, &(lo, hi)) in x.iter_mut().zip(bounds) {
        *v = v.clamp(lo, hi);
    }
}

impl NelderMead {
    /// Minimizes `f` from `start`. Points are clamped into `bounds` before every
    /// evaluation. Non-finite objective values are treated as +∞.
    pub fn minimize<F>(&self, mut f: F, start: &[f64], step: &[f64], bounds: &[(f64, f64)]) -> (Vec<f64>, f64)
    where
        F: FnMut(&[f64]) -> f64,
    {
        let n = start.len();
        let mut evals = 0usize;
        let mut eval = |x: &mut Vec<f64>, evals: &mut usize| {
            project(x, bounds);
            *evals += 1;
            let v = f(x);
            if v.is_finite() {
                v
            } else {
                f64::INFINITY
            }
        };

        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        let mut x0 = start.to_vec();
        let f0 = eval(&mut x0, &mut evals);
        simplex.push((x0.clone(), f0));
        for i in 0..n {
            let mut xi = x0.clone();
            xi[i] += step[i];
            if xi[i] > bounds[i].1 {
                xi[i] = x0[i] - step[i];
            }
            let fi = eval(&mut xi, &mut evals);
            simplex.push((xi, fi));
        }

        while evals < self.max_evals {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = simplex[0].1;
            let worst = simplex[n].1;
            let spread = simplex
                .iter()
                .skip(1)
                .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
                .fold(0.0, f64::max);
            if (worst - best).abs() <= self.f_tol * (1.0 + best.abs()) && spread <= self.x_tol {
                break;
            }

            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, v) in centroid.iter_mut().zip(x) {
                    *c += v / n as f64;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[n].0)
                    .map(|(c, w)| c + t * (w - c))
                    .collect()
            };

            let mut xr = along(-1.0);
            let fr = eval(&mut xr, &mut evals);
            if fr < simplex[0].1 {
                let mut xe = along(-2.0);
                let fe = eval(&mut xe, &mut evals);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            let (xc, fc) = if fr < simplex[n].1 {
                let mut xc = along(-0.5);
                let fc = eval(&mut xc, &mut evals);
                (xc, fc)
            } else {
                let mut xc = along(0.5);
                let fc = eval(&mut xc, &mut evals);
                (xc, fc)
            };
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (xc, fc);
                continue;
            }
            // shrink toward the best vertex
            let x_best = simplex[0].0.clone();
            for vertex in simplex.iter_mut().skip(1) {
                let mut x: Vec<f64> = x_best
                    .iter()
                    .zip(&vertex.0)
                    .map(|(b, v)| b + 0.5 * (v - b))
                    .collect();
                let fx = eval(&mut x, &mut evals);
                *vertex = (x, fx);
            }
        }

        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        simplex.swap_remove(0)
    }
}
