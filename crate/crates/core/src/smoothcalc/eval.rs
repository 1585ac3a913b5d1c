//! Compiled evaluation of expression DAGs.
//!
//! A [`Tape`] numbers each distinct node once. Evaluation is demand driven so
//! that untaken piecewise branches and closed gates are never touched.

use std::collections::HashMap;

use thiserror::Error;

use super::expr::{Expr, Node};
use super::jet::{flat_bump3, Jet2};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("expected {expected} inputs, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("division guard violated: denominator {denominator:e}")]
    DivisionGuard { denominator: f64 },
    #[error("square root of non-positive value {value:e}")]
    SqrtDomain { value: f64 },
    #[error("point outside the declared domain: {0}")]
    OutsideDomain(String),
}

#[derive(Debug, Clone)]
enum Op {
    Const(f64),
    Var(usize),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    Div(usize, usize),
    Neg(usize),
    Exp(usize),
    Sin(usize),
    Cos(usize),
    Sqrt(usize),
    FlatBump(usize),
    Piecewise { selector: usize, pos: usize, neg: usize },
    Gate { gate: usize, body: usize },
}

#[derive(Debug, Clone)]
pub struct Tape {
    arity_in: usize,
    ops: Vec<Op>,
    outputs: Vec<usize>,
}

/// Scalar types the tape can be evaluated over.
trait Value: Clone {
    fn constant(c: f64, n: usize) -> Self;
    fn variable(x: f64, i: usize, n: usize) -> Self;
    fn value(&self) -> f64;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Caller guarantees a nonzero finite denominator.
    fn div(&self, o: &Self) -> Self;
    fn lift(&self, f0: f64, f1: f64, f2: f64) -> Self;
    fn is_flat_zero(&self) -> bool;
}

impl Value for f64 {
    fn constant(c: f64, _: usize) -> Self {
        c
    }
    fn variable(x: f64, _: usize, _: usize) -> Self {
        x
    }
    fn value(&self) -> f64 {
        *self
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn lift(&self, f0: f64, _: f64, _: f64) -> Self {
        f0
    }
    fn is_flat_zero(&self) -> bool {
        // gates are flat factors: zero value implies zero jet
        *self == 0.0
    }
}

impl Value for Jet2 {
    fn constant(c: f64, n: usize) -> Self {
        Jet2::constant(c, n)
    }
    fn variable(x: f64, i: usize, n: usize) -> Self {
        Jet2::variable(x, i, n)
    }
    fn value(&self) -> f64 {
        self.value
    }
    fn add(&self, o: &Self) -> Self {
        Jet2::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Jet2::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Jet2::mul(self, o)
    }
    fn neg(&self) -> Self {
        Jet2::neg(self)
    }
    fn div(&self, o: &Self) -> Self {
        let d = o.value;
        let mut q = self.mul(&o.lift(1.0 / d, -1.0 / (d * d), 2.0 / (d * d * d)));
        q.value = self.value / d;
        q
    }
    fn lift(&self, f0: f64, f1: f64, f2: f64) -> Self {
        Jet2::lift(self, f0, f1, f2)
    }
    fn is_flat_zero(&self) -> bool {
        Jet2::is_flat_zero(self)
    }
}

impl Tape {
    pub fn compile(arity_in: usize, outputs: &[Expr]) -> Self {
        let mut tape = Tape { arity_in, ops: Vec::new(), outputs: Vec::new() };
        let mut index: HashMap<*const Node, usize> = HashMap::new();
        for e in outputs {
            let slot = tape.push(e, &mut index);
            tape.outputs.push(slot);
        }
        tape
    }

    fn push(&mut self, e: &Expr, index: &mut HashMap<*const Node, usize>) -> usize {
        if let Some(&slot) = index.get(&e.ptr()) {
            return slot;
        }
        let op = match e.node() {
            Node::Const { value } => Op::Const(*value),
            Node::Var { index: i } => Op::Var(*i),
            Node::Add { lhs, rhs } => Op::Add(self.push(lhs, index), self.push(rhs, index)),
            Node::Sub { lhs, rhs } => Op::Sub(self.push(lhs, index), self.push(rhs, index)),
            Node::Mul { lhs, rhs } => Op::Mul(self.push(lhs, index), self.push(rhs, index)),
            Node::Div { lhs, rhs } => Op::Div(self.push(lhs, index), self.push(rhs, index)),
            Node::Neg { arg } => Op::Neg(self.push(arg, index)),
            Node::Exp { arg } => Op::Exp(self.push(arg, index)),
            Node::Sin { arg } => Op::Sin(self.push(arg, index)),
            Node::Cos { arg } => Op::Cos(self.push(arg, index)),
            Node::Sqrt { arg } => Op::Sqrt(self.push(arg, index)),
            Node::FlatBump { arg } => Op::FlatBump(self.push(arg, index)),
            Node::Piecewise { selector, pos, neg } => Op::Piecewise {
                selector: self.push(selector, index),
                pos: self.push(pos, index),
                neg: self.push(neg, index),
            },
            Node::Gate { gate, body } => Op::Gate { gate: self.push(gate, index), body: self.push(body, index) },
        };
        self.ops.push(op);
        let slot = self.ops.len() - 1;
        index.insert(e.ptr(), slot);
        slot
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    fn check_arity(&self, x: &[f64]) -> Result<(), EvalError> {
        if x.len() != self.arity_in {
            return Err(EvalError::ArityMismatch { expected: self.arity_in, got: x.len() });
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>, EvalError> {
        self.check_arity(x)?;
        let mut memo: Vec<Option<f64>> = vec![None; self.ops.len()];
        self.outputs.iter().map(|&o| self.eval_slot::<f64>(o, x, &mut memo)).collect()
    }

    pub fn eval_jet2(&self, x: &[f64]) -> Result<Vec<Jet2>, EvalError> {
        self.check_arity(x)?;
        let mut memo: Vec<Option<Jet2>> = vec![None; self.ops.len()];
        self.outputs.iter().map(|&o| self.eval_slot::<Jet2>(o, x, &mut memo)).collect()
    }

    fn eval_slot<V: Value>(&self, slot: usize, x: &[f64], memo: &mut Vec<Option<V>>) -> Result<V, EvalError> {
        if let Some(v) = &memo[slot] {
            return Ok(v.clone());
        }
        let n = x.len();
        let v = match &self.ops[slot] {
            Op::Const(c) => V::constant(*c, n),
            Op::Var(i) => V::variable(x[*i], *i, n),
            Op::Add(a, b) => self.eval_slot::<V>(*a, x, memo)?.add(&self.eval_slot::<V>(*b, x, memo)?),
            Op::Sub(a, b) => self.eval_slot::<V>(*a, x, memo)?.sub(&self.eval_slot::<V>(*b, x, memo)?),
            Op::Mul(a, b) => self.eval_slot::<V>(*a, x, memo)?.mul(&self.eval_slot::<V>(*b, x, memo)?),
            Op::Div(a, b) => {
                let num = self.eval_slot::<V>(*a, x, memo)?;
                let den = self.eval_slot::<V>(*b, x, memo)?;
                let d = den.value();
                if d == 0.0 || !d.is_finite() || !(1.0 / d).is_finite() {
                    return Err(EvalError::DivisionGuard { denominator: d });
                }
                num.div(&den)
            }
            Op::Neg(a) => self.eval_slot::<V>(*a, x, memo)?.neg(),
            Op::Exp(a) => {
                let u = self.eval_slot::<V>(*a, x, memo)?;
                let e = u.value().exp();
                u.lift(e, e, e)
            }
            Op::Sin(a) => {
                let u = self.eval_slot::<V>(*a, x, memo)?;
                let (s, c) = u.value().sin_cos();
                u.lift(s, c, -s)
            }
            Op::Cos(a) => {
                let u = self.eval_slot::<V>(*a, x, memo)?;
                let (s, c) = u.value().sin_cos();
                u.lift(c, -s, -c)
            }
            Op::Sqrt(a) => {
                let u = self.eval_slot::<V>(*a, x, memo)?;
                let w = u.value();
                if w <= 0.0 || !w.is_finite() {
                    return Err(EvalError::SqrtDomain { value: w });
                }
                let r = w.sqrt();
                u.lift(r, 0.5 / r, -0.25 / (r * w))
            }
            Op::FlatBump(a) => {
                let u = self.eval_slot::<V>(*a, x, memo)?;
                let (g0, g1, g2) = flat_bump3(u.value());
                u.lift(g0, g1, g2)
            }
            Op::Piecewise { selector, pos, neg } => {
                let s = self.eval_slot::<V>(*selector, x, memo)?.value();
                if s >= 0.0 {
                    self.eval_slot::<V>(*pos, x, memo)?
                } else {
                    self.eval_slot::<V>(*neg, x, memo)?
                }
            }
            Op::Gate { gate, body } => {
                let g = self.eval_slot::<V>(*gate, x, memo)?;
                if g.is_flat_zero() {
                    V::constant(0.0, n)
                } else {
                    g.mul(&self.eval_slot::<V>(*body, x, memo)?)
                }
            }
        };
        memo[slot] = Some(v.clone());
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::super::expr::{Expr, SmoothMap};
    use super::*;

    #[test]
    fn shared_nodes_are_compiled_once() {
        let x = Expr::var(0);
        let s = x.clone() + x.clone();
        let mut deep = s.clone();
        for _ in 0..40 {
            deep = deep.clone() * deep.clone();
        }
        let f = SmoothMap::new(1, vec![deep]);
        assert!(f.tape().len() < 50);
    }

    #[test]
    fn guarded_division_reports_denominator() {
        let f = SmoothMap::from_fn(1, |x| vec![Expr::constant(1.0) / x[0].clone()]);
        assert_eq!(f.eval(&[0.0]), Err(EvalError::DivisionGuard { denominator: 0.0 }));
        assert_eq!(f.eval(&[4.0]).unwrap(), vec![0.25]);
    }

    #[test]
    fn arity_is_checked() {
        let f = SmoothMap::identity(2);
        assert!(matches!(f.eval(&[1.0]), Err(EvalError::ArityMismatch { expected: 2, got: 1 })));
    }

    #[test]
    fn closed_gate_skips_singular_body() {
        let x = Expr::var(0);
        let gate = x.clone().flat_bump();
        let f = SmoothMap::new(1, vec![Expr::gate(gate, Expr::constant(1.0) / x.clone())]);
        assert_eq!(f.eval(&[0.0]).unwrap(), vec![0.0]);
        let j = f.eval_jet2(&[-1.0]).unwrap();
        assert!(j[0].is_flat_zero());
        let v = f.eval(&[2.0]).unwrap()[0];
        assert!((v - (-0.5f64).exp() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn piecewise_takes_nonnegative_branch_on_locus() {
        let x = Expr::var(0);
        let f = SmoothMap::new(1, vec![Expr::piecewise(&[1.0], 0.0, 1.0 - x.clone(), 1.0 + x.clone())]);
        assert_eq!(f.eval(&[0.0]).unwrap(), vec![1.0]);
        assert_eq!(f.eval_jet2(&[0.0]).unwrap()[0].gradient, vec![-1.0]);
        assert_eq!(f.eval(&[-0.25]).unwrap(), vec![0.75]);
    }
}
