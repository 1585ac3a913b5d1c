//! Seeded random point generators shared by the sampling harnesses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent stream for a named sub-check so that adding a check
/// does not shift the samples of the others.
pub fn substream(seed: u64, label: &str) -> SampleRng {
    // FNV-1a over the label, mixed with the seed
    let mut h: u64 = 0xcbf29ce484222325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h.rotate_left(17))
}

pub fn uniform(rng: &mut SampleRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

pub fn uniform_box(rng: &mut SampleRng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| uniform(rng, lo, hi)).collect()
}

/// Uniform point on the unit sphere in `R^dim`.
pub fn unit_sphere(rng: &mut SampleRng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let r = norm(&v);
        if r > 1e-8 {
            return v.into_iter().map(|x| x / r).collect();
        }
    }
}

/// Uniform point in the closed unit ball of `R^dim`.
pub fn unit_ball(rng: &mut SampleRng, dim: usize) -> Vec<f64> {
    let dir = unit_sphere(rng, dim);
    let r = rng.random::<f64>().powf(1.0 / dim as f64);
    dir.into_iter().map(|x| r * x).collect()
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Splits `total` into `parts` shares differing by at most one.
pub fn shares(total: usize, parts: usize) -> Vec<usize> {
    if parts == 0 {
        return vec![];
    }
    (0..parts).map(|k| total / parts + usize::from(k < total % parts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let a: Vec<f64> = (0..5).map(|_| uniform(&mut rng(7), 0.0, 1.0)).collect();
        let mut r = rng(7);
        let b = uniform(&mut r, 0.0, 1.0);
        assert_eq!(a[0], b);
        let mut s1 = substream(3, "x");
        let mut s2 = substream(3, "y");
        assert_ne!(uniform(&mut s1, 0.0, 1.0), uniform(&mut s2, 0.0, 1.0));
    }

    #[test]
    fn shares_sum_to_total() {
        assert_eq!(shares(10, 3), vec![4, 3, 3]);
        assert_eq!(shares(2, 4), vec![1, 1, 0, 0]);
    }

    #[test]
    fn sphere_and_ball_radii() {
        let mut r = rng(1);
        for _ in 0..100 {
            assert!((norm(&unit_sphere(&mut r, 3)) - 1.0).abs() < 1e-12);
            assert!(norm(&unit_ball(&mut r, 2)) <= 1.0 + 1e-12);
        }
    }
}
