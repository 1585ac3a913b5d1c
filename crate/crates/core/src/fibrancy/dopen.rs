//! The retraction `ĥ(x) = μ(x)x` of `ℝⁿ` into a star-shaped neighbourhood of `Λⁿ`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::VerificationReport;
use crate::sampling::{max_abs_diff, substream, uniform, uniform_box};
use crate::smoothcalc::{cutoff_expr, Expr, SmoothMap};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DOpenError {
    #[error("delta must be positive, got {0}")]
    Delta(f64),
    #[error("epsilon {0} outside (0, 1/2)")]
    Epsilon(f64),
    #[error("n must be positive")]
    Dimension,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DOpenRetraction {
    pub n: usize,
    pub delta: f64,
    pub epsilon: f64,
    /// `μ(x) = 1 − φ(Πx_i² / δ²)`.
    pub mu: SmoothMap,
    /// `ĥ(x) = μ(x)x`.
    pub map: SmoothMap,
}

impl DOpenRetraction {
    /// `Πx_i² < δ²`.
    pub fn in_v(&self, x: &[f64]) -> bool {
        x.iter().map(|v| v * v).product::<f64>() < self.delta * self.delta
    }
}

pub fn dopen_retraction(n: usize, delta: f64, epsilon: f64) -> Result<DOpenRetraction, DOpenError> {
    if n == 0 {
        return Err(DOpenError::Dimension);
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(DOpenError::Delta(delta));
    }
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(DOpenError::Epsilon(epsilon));
    }
    let mu = SmoothMap::from_fn(n, |x| {
        let p = Expr::product(x.iter().map(Expr::square));
        vec![1.0 - cutoff_expr(epsilon, p / (delta * delta))]
    });
    let mu_e = mu.outputs[0].clone();
    let map = SmoothMap::from_fn(n, |x| x.iter().map(|v| mu_e.clone() * v.clone()).collect());
    Ok(DOpenRetraction { n, delta, epsilon, mu, map })
}

/// Identity on the hyperplanes (also after applying `ĥ` twice) and
/// `ĥ(x) ∈ V ∪ {0}` everywhere, at `budget` seeded samples.
pub fn verify_dopen(r: &DOpenRetraction, budget: usize, seed: u64) -> VerificationReport {
    let mut rep = VerificationReport::new(format!("fibrancy.dopen_retraction.n{}", r.n), 1e-12);
    let mut rng = substream(seed, "dopen");
    let n = r.n;
    let mut on_planes = 0usize;
    let mut support = 0usize;
    for k in 0..budget {
        let mut x = uniform_box(&mut rng, n, -3.0, 3.0);
        if k % 2 == 0 {
            x[k / 2 % n] = 0.0;
            let h = r.map.eval(&x).expect("total");
            let hh = r.map.eval(&h).expect("total");
            rep.observe(max_abs_diff(&h, &x).max(max_abs_diff(&hh, &x)), &x);
            on_planes += 1;
        } else {
            // Bias towards the band where μ switches off.
            if k % 4 == 1 && n > 1 {
                let rest: f64 = x[1..].iter().map(|v| v * v).product();
                let target = r.delta * r.delta * uniform(&mut rng, 0.2, 1.2);
                x[0] = (target / rest.max(1e-300)).sqrt().copysign(x[0]);
            }
            let h = r.map.eval(&x).expect("total");
            let mu = r.mu.eval(&x).expect("total")[0];
            let ok = h.iter().all(|v| *v == 0.0) || (r.in_v(&h) && (mu == 0.0 || r.in_v(&x)));
            if ok {
                rep.observe(0.0, &x);
            } else {
                rep.fail("image outside V", Some(&x));
            }
            support += 1;
        }
    }
    rep.record("hyperplane_samples", on_planes as f64);
    rep.record("support_samples", support as f64);
    rep.finish()
}
