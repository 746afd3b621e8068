//! Space-filling point sets on the unit cube.

use rand::seq::SliceRandom;
use rand::Rng;

/// Latin hypercube sample of `n` points in `[0,1]^dim`: each axis is cut into
/// `n` equal strata, every stratum holds exactly one point, and the strata are
/// paired across axes by independent random permutations.
pub fn latin_hypercube<R: Rng + ?Sized>(n: usize, dim: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let mut points = vec![vec![0.0; dim]; n];
    let mut strata: Vec<usize> = (0..n).collect();
    for d in 0..dim {
        strata.shuffle(rng);
        for (point, &s) in points.iter_mut().zip(&strata) {
            point[d] = (s as f64 + rng.random::<f64>()) / n as f64;
        }
    }
    points
}

/// `n` independent uniform points in `[0,1]^dim`.
pub fn uniform_points<R: Rng + ?Sized>(n: usize, dim: usize, rng: &mut R) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn one_point_per_stratum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 17;
        let pts = latin_hypercube(n, 3, &mut rng);
        assert_eq!(pts.len(), n);
        for d in 0..3 {
            let mut seen = vec![false; n];
            for p in &pts {
                assert!((0.0..1.0).contains(&p[d]));
                let s = (p[d] * n as f64).floor() as usize;
                assert!(!seen[s]);
                seen[s] = true;
            }
        }
    }

    #[test]
    fn seeded() {
        let a = latin_hypercube(8, 2, &mut ChaCha8Rng::seed_from_u64(1));
        let b = latin_hypercube(8, 2, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(a, b);
        let u = uniform_points(5, 4, &mut ChaCha8Rng::seed_from_u64(1));
        assert!(u.iter().flatten().all(|v| (0.0..1.0).contains(v)));
    }
}
