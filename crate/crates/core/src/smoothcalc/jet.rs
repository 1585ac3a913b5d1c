//! Second-order forward jets: value, gradient and Hessian in `n` variables.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Jet2 {
    pub value: f64,
    pub gradient: Vec<f64>,
    /// Row-major `n x n`.
    pub hessian: Vec<f64>,
}

impl Jet2 {
    pub fn constant(value: f64, n: usize) -> Self {
        Self { value, gradient: vec![0.0; n], hessian: vec![0.0; n * n] }
    }

    pub fn variable(value: f64, index: usize, n: usize) -> Self {
        let mut j = Self::constant(value, n);
        j.gradient[index] = 1.0;
        j
    }

    pub fn nvars(&self) -> usize {
        self.gradient.len()
    }

    pub fn hess(&self, i: usize, j: usize) -> f64 {
        self.hessian[i * self.nvars() + j]
    }

    /// True when value and all derivatives are exactly zero.
    pub fn is_flat_zero(&self) -> bool {
        self.value == 0.0 && self.gradient.iter().all(|g| *g == 0.0) && self.hessian.iter().all(|h| *h == 0.0)
    }

    pub fn add(&self, o: &Jet2) -> Jet2 {
        Jet2 {
            value: self.value + o.value,
            gradient: self.gradient.iter().zip(&o.gradient).map(|(a, b)| a + b).collect(),
            hessian: self.hessian.iter().zip(&o.hessian).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Jet2) -> Jet2 {
        Jet2 {
            value: self.value - o.value,
            gradient: self.gradient.iter().zip(&o.gradient).map(|(a, b)| a - b).collect(),
            hessian: self.hessian.iter().zip(&o.hessian).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Jet2 {
        Jet2 {
            value: -self.value,
            gradient: self.gradient.iter().map(|a| -a).collect(),
            hessian: self.hessian.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, o: &Jet2) -> Jet2 {
        let n = self.nvars();
        let (a, b) = (self.value, o.value);
        let gradient = (0..n).map(|i| a * o.gradient[i] + b * self.gradient[i]).collect();
        let mut hessian = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let k = i * n + j;
                hessian[k] = a * o.hessian[k]
                    + b * self.hessian[k]
                    + self.gradient[i] * o.gradient[j]
                    + o.gradient[i] * self.gradient[j];
            }
        }
        Jet2 { value: a * b, gradient, hessian }
    }

    /// Chain rule for a scalar function with value `f0`, derivative `f1`, second derivative `f2`
    /// evaluated at `self.value`.
    pub fn lift(&self, f0: f64, f1: f64, f2: f64) -> Jet2 {
        let n = self.nvars();
        let gradient = self.gradient.iter().map(|g| f1 * g).collect();
        let mut hessian = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let k = i * n + j;
                hessian[k] = f1 * self.hessian[k] + f2 * self.gradient[i] * self.gradient[j];
            }
        }
        Jet2 { value: f0, gradient, hessian }
    }
}

/// `exp(-1/t)` for `t > 0`, else `0`, with first and second derivatives.
pub fn flat_bump3(t: f64) -> (f64, f64, f64) {
    if t <= 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let g = (-1.0 / t).exp();
    if g == 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let t2 = t * t;
    (g, g / t2, g * (1.0 - 2.0 * t) / (t2 * t2))
}
