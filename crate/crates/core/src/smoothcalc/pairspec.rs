//! Domain pairs `(A, B)` used by the smooth homotopy group models.
//!
//! Each pair knows its ambient chart, how far a point is from lying in `A` or in
//! `B` (zero when inside), and how to draw samples from `A` and stratified
//! samples from `B`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sampling::{norm, shares, uniform, uniform_box, unit_ball, unit_sphere, SampleRng};

/// Box used to sample unbounded Euclidean domains.
pub const REAL_SAMPLE_BOX: (f64, f64) = (-1.0, 2.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairCase {
    /// (1) `(R^n, ∂R^n)`, some coordinate equal to 0 or 1.
    RealBoundary,
    /// (2) `(R^n, ∂_ε R^n)`.
    RealThick,
    /// (3) `(I^n, ∂I^n)`.
    Cube,
    /// (4) `(I^n, ∂_ε I^n)`.
    CubeThick,
    /// (5) `(A^n, ∂A^n)`, non-compact simplex with some coordinate 0.
    Affine,
    /// (6) `(A^n, ∂_ε A^n)`.
    AffineThick,
    /// (7) `(D^n, S^{n-1})`.
    Disk,
    /// (8) `(D^n, ∂_ε D^n)`, the open shell `|x| > 1 - ε`.
    DiskThick,
    /// (9) `(S^n, N)`.
    SpherePole,
    /// `(S^n, H)`, closed northern hemisphere.
    SphereHemisphere,
    /// `(S^n \ N, H \ N)`.
    SpherePunctured,
    /// `(R^n, {|y| >= 1})`, the stereographic image of `(S^n \ N, H \ N)`.
    RealOutsideBall,
}

impl PairCase {
    /// Number of the case in the list of nine models; auxiliary pairs of the
    /// sphere chain have none.
    pub fn number(self) -> Option<u8> {
        use PairCase::*;
        Some(match self {
            RealBoundary => 1,
            RealThick => 2,
            Cube => 3,
            CubeThick => 4,
            Affine => 5,
            AffineThick => 6,
            Disk => 7,
            DiskThick => 8,
            SpherePole => 9,
            _ => return None,
        })
    }

    pub fn from_number(k: u8) -> Option<Self> {
        use PairCase::*;
        Some(match k {
            1 => RealBoundary,
            2 => RealThick,
            3 => Cube,
            4 => CubeThick,
            5 => Affine,
            6 => AffineThick,
            7 => Disk,
            8 => DiskThick,
            9 => SpherePole,
            _ => return None,
        })
    }

    pub fn uses_epsilon(self) -> bool {
        matches!(self, PairCase::RealThick | PairCase::CubeThick | PairCase::AffineThick | PairCase::DiskThick)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PairError {
    #[error("ε = {epsilon} outside the legal range (0, {upper}) for {case:?}")]
    EpsilonOutOfRange { case: PairCase, epsilon: f64, upper: f64 },
    #[error("{case:?} requires an ε parameter")]
    MissingEpsilon { case: PairCase },
    #[error("dimension n = {0} must be at least 1")]
    BadDimension(usize),
    #[error("chart mismatch: map is R^{map_in} -> R^{map_out}, pairs need R^{src} -> R^{dst}")]
    ChartMismatch { map_in: usize, map_out: usize, src: usize, dst: usize },
    #[error("unsupported case pair ({0}, {1})")]
    UnsupportedPair(u8, u8),
    #[error("{0}")]
    Construction(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSpec {
    pub case: PairCase,
    pub n: usize,
    pub epsilon: Option<f64>,
}

impl fmt::Display for PairSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n;
        let e = self.epsilon.unwrap_or(f64::NAN);
        match self.case {
            PairCase::RealBoundary => write!(f, "(R^{n}, ∂R^{n})"),
            PairCase::RealThick => write!(f, "(R^{n}, ∂_{e}R^{n})"),
            PairCase::Cube => write!(f, "(I^{n}, ∂I^{n})"),
            PairCase::CubeThick => write!(f, "(I^{n}, ∂_{e}I^{n})"),
            PairCase::Affine => write!(f, "(A^{n}, ∂A^{n})"),
            PairCase::AffineThick => write!(f, "(A^{n}, ∂_{e}A^{n})"),
            PairCase::Disk => write!(f, "(D^{n}, ∂D^{n})"),
            PairCase::DiskThick => write!(f, "(D^{n}, ∂_{e}D^{n})"),
            PairCase::SpherePole => write!(f, "(S^{n}, N)"),
            PairCase::SphereHemisphere => write!(f, "(S^{n}, H)"),
            PairCase::SpherePunctured => write!(f, "(S^{n}\\N, H\\N)"),
            PairCase::RealOutsideBall => write!(f, "(R^{n}, |y|>=1)"),
        }
    }
}

/// Largest `z` sampled on the punctured sphere; keeps stereographic charts finite.
const PUNCTURE_CAP: f64 = 1.0 - 1e-3;

impl PairSpec {
    pub fn new(case: PairCase, n: usize, epsilon: Option<f64>) -> Result<Self, PairError> {
        if n == 0 {
            return Err(PairError::BadDimension(n));
        }
        if case.uses_epsilon() {
            let eps = epsilon.ok_or(PairError::MissingEpsilon { case })?;
            let upper = Self::epsilon_upper(case, n);
            if !(eps > 0.0 && eps < upper) {
                return Err(PairError::EpsilonOutOfRange { case, epsilon: eps, upper });
            }
        }
        Ok(Self { case, n, epsilon: if case.uses_epsilon() { epsilon } else { None } })
    }

    /// Exclusive upper bound on ε: `1/(n+1)` for the thick simplex, `1/2` otherwise.
    pub fn epsilon_upper(case: PairCase, n: usize) -> f64 {
        if case == PairCase::AffineThick {
            1.0 / (n as f64 + 1.0)
        } else {
            0.5
        }
    }

    pub fn eps(&self) -> f64 {
        self.epsilon.expect("pair carries ε")
    }

    pub fn ambient_dim(&self) -> usize {
        match self.case {
            PairCase::Affine
            | PairCase::AffineThick
            | PairCase::SpherePole
            | PairCase::SphereHemisphere
            | PairCase::SpherePunctured => self.n + 1,
            _ => self.n,
        }
    }

    pub fn north_pole(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.n + 1];
        p[self.n] = 1.0;
        p
    }

    /// Distance-like violation of membership in the space `A`; zero inside.
    pub fn space_violation(&self, x: &[f64]) -> f64 {
        match self.case {
            PairCase::RealBoundary | PairCase::RealThick | PairCase::RealOutsideBall => 0.0,
            PairCase::Cube | PairCase::CubeThick => x.iter().map(|v| (-v).max(v - 1.0).max(0.0)).fold(0.0, f64::max),
            PairCase::Affine | PairCase::AffineThick => (x.iter().sum::<f64>() - 1.0).abs(),
            PairCase::Disk | PairCase::DiskThick => (norm(x) - 1.0).max(0.0),
            PairCase::SpherePole | PairCase::SphereHemisphere => (norm(x) - 1.0).abs(),
            PairCase::SpherePunctured => {
                let on_sphere = (norm(x) - 1.0).abs();
                let pole = crate::sampling::max_abs_diff(x, &self.north_pole());
                if pole < 1e-12 {
                    f64::INFINITY
                } else {
                    on_sphere
                }
            }
        }
    }

    /// Distance-like violation of membership in the subset `B`; zero inside.
    pub fn subset_violation(&self, x: &[f64]) -> f64 {
        let eps = self.epsilon.unwrap_or(0.0);
        match self.case {
            PairCase::RealBoundary | PairCase::Cube => {
                x.iter().map(|v| v.abs().min((v - 1.0).abs())).fold(f64::INFINITY, f64::min)
            }
            PairCase::RealThick | PairCase::CubeThick => {
                x.iter().map(|v| (v - eps).min((1.0 - eps) - v).max(0.0)).fold(f64::INFINITY, f64::min)
            }
            PairCase::Affine => x.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min),
            PairCase::AffineThick => x.iter().map(|v| (v - eps).max(0.0)).fold(f64::INFINITY, f64::min),
            PairCase::Disk => (norm(x) - 1.0).abs(),
            PairCase::DiskThick => ((1.0 - eps) - norm(x)).max(0.0),
            PairCase::SpherePole => crate::sampling::max_abs_diff(x, &self.north_pole()),
            PairCase::SphereHemisphere | PairCase::SpherePunctured => (-x[self.n]).max(0.0),
            PairCase::RealOutsideBall => (1.0 - norm(x)).max(0.0),
        }
    }

    pub fn violation(&self, x: &[f64]) -> f64 {
        self.space_violation(x).max(self.subset_violation(x))
    }

    /// `count` points of `A`.
    pub fn sample_space(&self, rng: &mut SampleRng, count: usize) -> Vec<Vec<f64>> {
        let n = self.n;
        let (lo, hi) = REAL_SAMPLE_BOX;
        (0..count)
            .map(|_| match self.case {
                PairCase::RealBoundary | PairCase::RealThick => uniform_box(rng, n, lo, hi),
                PairCase::RealOutsideBall => uniform_box(rng, n, -3.0, 3.0),
                PairCase::Cube | PairCase::CubeThick => uniform_box(rng, n, 0.0, 1.0),
                PairCase::Affine | PairCase::AffineThick => affine_point(rng, n, None),
                PairCase::Disk | PairCase::DiskThick => unit_ball(rng, n),
                PairCase::SpherePole | PairCase::SphereHemisphere => unit_sphere(rng, n + 1),
                PairCase::SpherePunctured => loop {
                    let p = unit_sphere(rng, n + 1);
                    if p[n] < PUNCTURE_CAP {
                        break p;
                    }
                },
            })
            .collect()
    }

    /// `count` points of `B`, split evenly over its strata. The first point of
    /// each stratum sits on the stratum's extreme edge.
    pub fn sample_subset(&self, rng: &mut SampleRng, count: usize) -> Vec<Vec<f64>> {
        let n = self.n;
        let eps = self.epsilon.unwrap_or(0.0);
        let (lo, hi) = REAL_SAMPLE_BOX;
        let mut out = Vec::with_capacity(count);
        match self.case {
            PairCase::RealBoundary | PairCase::Cube => {
                let (a, b) = if self.case == PairCase::Cube { (0.0, 1.0) } else { (lo, hi) };
                for (s, k) in shares(count, 2 * n).into_iter().enumerate() {
                    let (i, v) = (s / 2, (s % 2) as f64);
                    for _ in 0..k {
                        let mut x = uniform_box(rng, n, a, b);
                        x[i] = v;
                        out.push(x);
                    }
                }
            }
            PairCase::RealThick | PairCase::CubeThick => {
                let (a, b) = if self.case == PairCase::CubeThick { (0.0, 1.0) } else { (lo, hi) };
                for (s, k) in shares(count, 2 * n).into_iter().enumerate() {
                    let (i, high) = (s / 2, s % 2 == 1);
                    for j in 0..k {
                        let mut x = uniform_box(rng, n, a, b);
                        x[i] = match (high, j) {
                            (false, 0) => eps,
                            (true, 0) => 1.0 - eps,
                            (false, _) => uniform(rng, a, eps),
                            (true, _) => uniform(rng, 1.0 - eps, b),
                        };
                        out.push(x);
                    }
                }
            }
            PairCase::Affine => {
                for (i, k) in shares(count, n + 1).into_iter().enumerate() {
                    for _ in 0..k {
                        out.push(affine_point(rng, n, Some((i, 0.0))));
                    }
                }
            }
            PairCase::AffineThick => {
                for (i, k) in shares(count, n + 1).into_iter().enumerate() {
                    for j in 0..k {
                        if j == 0 {
                            // x_i = ε with the remaining mass spread evenly
                            let rest = (1.0 - eps) / n as f64;
                            let mut x = vec![rest; n + 1];
                            x[i] = eps;
                            out.push(x);
                        } else {
                            let v = uniform(rng, lo, eps);
                            out.push(affine_point(rng, n, Some((i, v))));
                        }
                    }
                }
            }
            PairCase::Disk => {
                for _ in 0..count {
                    out.push(unit_sphere(rng, n));
                }
            }
            PairCase::DiskThick => {
                for j in 0..count {
                    let dir = unit_sphere(rng, n);
                    let r = if j == 0 { 1.0 - eps + 1e-12 } else { 1.0 - eps * rng_open01(rng) };
                    out.push(dir.into_iter().map(|v| r * v).collect());
                }
            }
            PairCase::SpherePole => {
                out.extend(std::iter::repeat_n(self.north_pole(), count));
            }
            PairCase::SphereHemisphere | PairCase::SpherePunctured => {
                let cap = if self.case == PairCase::SpherePunctured { PUNCTURE_CAP } else { 1.0 };
                while out.len() < count {
                    let mut p = unit_sphere(rng, n + 1);
                    p[n] = p[n].abs();
                    if out.is_empty() {
                        // a point on the equator
                        p[n] = 0.0;
                        let r = norm(&p);
                        p.iter_mut().for_each(|v| *v /= r);
                    }
                    if p[n] <= cap {
                        out.push(p);
                    }
                }
            }
            PairCase::RealOutsideBall => {
                for j in 0..count {
                    let dir = unit_sphere(rng, n);
                    let r = if j == 0 { 1.0 } else { uniform(rng, 1.0, 3.0) };
                    out.push(dir.into_iter().map(|v| r * v).collect());
                }
            }
        }
        out
    }
}

fn rng_open01(rng: &mut SampleRng) -> f64 {
    // (0, 1]
    1.0 - uniform(rng, 0.0, 1.0)
}

/// Random point of the non-compact simplex `A^n`, optionally with coordinate
/// `i` pinned to a value.
fn affine_point(rng: &mut SampleRng, n: usize, pinned: Option<(usize, f64)>) -> Vec<f64> {
    let (lo, hi) = REAL_SAMPLE_BOX;
    let mut x = uniform_box(rng, n + 1, lo, hi);
    let free_last = match pinned {
        Some((i, v)) => {
            x[i] = v;
            if i == n {
                n - 1
            } else {
                n
            }
        }
        None => 0,
    };
    let rest: f64 = x.iter().enumerate().filter(|(j, _)| *j != free_last).map(|(_, v)| v).sum();
    x[free_last] = 1.0 - rest;
    x
}
