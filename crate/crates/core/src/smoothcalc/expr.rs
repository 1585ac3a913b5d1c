//! Expression DAGs for smooth maps between Euclidean spaces.
//!
//! Nodes are reference counted so that composition shares subterms instead of
//! copying them. The primitive set is deliberately closed under smoothness: there is
//! no bare absolute value, and the only ways to introduce a non-analytic seam are
//! [`Node::Piecewise`] (declared agreement hyperplane) and [`Node::Gate`] (body only
//! evaluated where a flat gate factor is nonzero).

use std::collections::HashMap;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::eval::{EvalError, Tape};
use super::jet::Jet2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Node {
    Const {
        value: f64,
    },
    Var {
        index: usize,
    },
    Add {
        lhs: Expr,
        rhs: Expr,
    },
    Sub {
        lhs: Expr,
        rhs: Expr,
    },
    Mul {
        lhs: Expr,
        rhs: Expr,
    },
    /// Division; evaluation fails when the denominator vanishes.
    Div {
        lhs: Expr,
        rhs: Expr,
    },
    Neg {
        arg: Expr,
    },
    Exp {
        arg: Expr,
    },
    Sin {
        arg: Expr,
    },
    Cos {
        arg: Expr,
    },
    /// Square root; evaluation fails for non-positive arguments.
    Sqrt {
        arg: Expr,
    },
    /// `exp(-1/t)` for `t > 0`, `0` otherwise.
    FlatBump {
        arg: Expr,
    },
    /// `pos` where `selector >= 0`, `neg` elsewhere. The selector is affine in the
    /// inputs when built through [`Expr::piecewise`]; the two branches are declared
    /// to agree (with their jets) on its zero set.
    Piecewise {
        selector: Expr,
        pos: Expr,
        neg: Expr,
    },
    /// `gate * body`, where `body` is skipped wherever the full jet of `gate` vanishes.
    Gate {
        gate: Expr,
        body: Expr,
    },
}

/// Shared handle to an expression node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Expr(pub(crate) Arc<Node>);

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    pub(crate) fn ptr(&self) -> *const Node {
        Arc::as_ptr(&self.0)
    }

    fn wrap(node: Node) -> Self {
        Expr(Arc::new(node))
    }

    pub fn constant(value: f64) -> Self {
        Self::wrap(Node::Const { value })
    }

    pub fn var(index: usize) -> Self {
        Self::wrap(Node::Var { index })
    }

    pub fn exp(&self) -> Self {
        Self::wrap(Node::Exp { arg: self.clone() })
    }

    pub fn sin(&self) -> Self {
        Self::wrap(Node::Sin { arg: self.clone() })
    }

    pub fn cos(&self) -> Self {
        Self::wrap(Node::Cos { arg: self.clone() })
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(Node::Sqrt { arg: self.clone() })
    }

    pub fn flat_bump(&self) -> Self {
        Self::wrap(Node::FlatBump { arg: self.clone() })
    }

    pub fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    /// Branches on the affine halfspace `normal . x + offset >= 0`.
    pub fn piecewise(normal: &[f64], offset: f64, pos: Expr, neg: Expr) -> Self {
        let selector = Expr::sum(
            normal.iter().enumerate().filter(|(_, c)| **c != 0.0).map(|(i, c)| Expr::constant(*c) * Expr::var(i)),
        ) + offset;
        Self::wrap(Node::Piecewise { selector, pos, neg })
    }

    /// Branches on `selector >= 0` for an already built affine selector.
    pub fn branch(selector: Expr, pos: Expr, neg: Expr) -> Self {
        Self::wrap(Node::Piecewise { selector, pos, neg })
    }

    pub fn gate(gate: Expr, body: Expr) -> Self {
        Self::wrap(Node::Gate { gate, body })
    }

    /// Sum of a non-empty iterator of expressions; `0` when empty.
    pub fn sum<I: IntoIterator<Item = Expr>>(items: I) -> Self {
        items.into_iter().reduce(|a, b| a + b).unwrap_or_else(|| Expr::constant(0.0))
    }

    pub fn product<I: IntoIterator<Item = Expr>>(items: I) -> Self {
        items.into_iter().reduce(|a, b| a * b).unwrap_or_else(|| Expr::constant(1.0))
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        let mut seen = HashMap::new();
        max_var_rec(self, &mut seen)
    }

    /// Replaces every `Var(i)` by `args[i]`, preserving sharing.
    pub fn substitute(&self, args: &[Expr]) -> Expr {
        let mut memo = HashMap::new();
        subst_rec(self, args, &mut memo)
    }

    /// Number of distinct nodes reachable from this one.
    pub fn node_count(&self) -> usize {
        let mut seen = HashMap::new();
        count_rec(self, &mut seen);
        seen.len()
    }
}

fn children(node: &Node) -> Vec<&Expr> {
    match node {
        Node::Const { .. } | Node::Var { .. } => vec![],
        Node::Add { lhs, rhs } | Node::Sub { lhs, rhs } | Node::Mul { lhs, rhs } | Node::Div { lhs, rhs } => {
            vec![lhs, rhs]
        }
        Node::Neg { arg }
        | Node::Exp { arg }
        | Node::Sin { arg }
        | Node::Cos { arg }
        | Node::Sqrt { arg }
        | Node::FlatBump { arg } => vec![arg],
        Node::Piecewise { selector, pos, neg } => vec![selector, pos, neg],
        Node::Gate { gate, body } => vec![gate, body],
    }
}

fn count_rec(e: &Expr, seen: &mut HashMap<*const Node, ()>) {
    if seen.insert(e.ptr(), ()).is_some() {
        return;
    }
    for c in children(e.node()) {
        count_rec(c, seen);
    }
}

fn max_var_rec(e: &Expr, seen: &mut HashMap<*const Node, Option<usize>>) -> Option<usize> {
    if let Some(v) = seen.get(&e.ptr()) {
        return *v;
    }
    let own = match e.node() {
        Node::Var { index } => Some(*index),
        _ => None,
    };
    let res = children(e.node()).into_iter().map(|c| max_var_rec(c, seen)).fold(own, |a, b| a.max(b));
    seen.insert(e.ptr(), res);
    res
}

fn subst_rec(e: &Expr, args: &[Expr], memo: &mut HashMap<*const Node, Expr>) -> Expr {
    if let Some(done) = memo.get(&e.ptr()) {
        return done.clone();
    }
    let out = match e.node() {
        Node::Const { .. } => e.clone(),
        Node::Var { index } => args[*index].clone(),
        Node::Add { lhs, rhs } => subst_rec(lhs, args, memo) + subst_rec(rhs, args, memo),
        Node::Sub { lhs, rhs } => subst_rec(lhs, args, memo) - subst_rec(rhs, args, memo),
        Node::Mul { lhs, rhs } => subst_rec(lhs, args, memo) * subst_rec(rhs, args, memo),
        Node::Div { lhs, rhs } => subst_rec(lhs, args, memo) / subst_rec(rhs, args, memo),
        Node::Neg { arg } => -subst_rec(arg, args, memo),
        Node::Exp { arg } => subst_rec(arg, args, memo).exp(),
        Node::Sin { arg } => subst_rec(arg, args, memo).sin(),
        Node::Cos { arg } => subst_rec(arg, args, memo).cos(),
        Node::Sqrt { arg } => subst_rec(arg, args, memo).sqrt(),
        Node::FlatBump { arg } => subst_rec(arg, args, memo).flat_bump(),
        Node::Piecewise { selector, pos, neg } => Expr::wrap(Node::Piecewise {
            selector: subst_rec(selector, args, memo),
            pos: subst_rec(pos, args, memo),
            neg: subst_rec(neg, args, memo),
        }),
        Node::Gate { gate, body } => Expr::gate(subst_rec(gate, args, memo), subst_rec(body, args, memo)),
    };
    memo.insert(e.ptr(), out.clone());
    out
}

macro_rules! binop {
    ($tr:ident, $method:ident, $variant:ident) => {
        impl $tr for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::wrap(Node::$variant { lhs: self, rhs })
            }
        }
        impl $tr<f64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: f64) -> Expr {
                Expr::wrap(Node::$variant { lhs: self, rhs: Expr::constant(rhs) })
            }
        }
        impl $tr<Expr> for f64 {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::wrap(Node::$variant { lhs: Expr::constant(self), rhs })
            }
        }
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                Expr::wrap(Node::$variant { lhs: self.clone(), rhs: rhs.clone() })
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::wrap(Node::Neg { arg: self })
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::wrap(Node::Neg { arg: self.clone() })
    }
}

/// A smooth map `R^n -> R^m` given by one expression per output coordinate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SmoothMap {
    pub arity_in: usize,
    pub outputs: Vec<Expr>,
    #[serde(skip)]
    tape: OnceLock<Tape>,
}

impl SmoothMap {
    pub fn new(arity_in: usize, outputs: Vec<Expr>) -> Self {
        Self { arity_in, outputs, tape: OnceLock::new() }
    }

    /// Builds a map from a closure over the input variables.
    pub fn from_fn(arity_in: usize, build: impl FnOnce(&[Expr]) -> Vec<Expr>) -> Self {
        let vars: Vec<Expr> = (0..arity_in).map(Expr::var).collect();
        Self::new(arity_in, build(&vars))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |x| x.to_vec())
    }

    pub fn constant(arity_in: usize, value: &[f64]) -> Self {
        Self::new(arity_in, value.iter().map(|v| Expr::constant(*v)).collect())
    }

    pub fn arity_out(&self) -> usize {
        self.outputs.len()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &SmoothMap) -> SmoothMap {
        assert_eq!(
            inner.arity_out(),
            self.arity_in,
            "composition arity mismatch: inner has {} outputs, outer takes {} inputs",
            inner.arity_out(),
            self.arity_in
        );
        let mut memo = HashMap::new();
        let outputs = self.outputs.iter().map(|e| subst_rec(e, &inner.outputs, &mut memo)).collect();
        SmoothMap::new(inner.arity_in, outputs)
    }

    /// Concatenates outputs of two maps with the same domain.
    pub fn concat(&self, other: &SmoothMap) -> SmoothMap {
        assert_eq!(self.arity_in, other.arity_in);
        let mut outputs = self.outputs.clone();
        outputs.extend(other.outputs.iter().cloned());
        SmoothMap::new(self.arity_in, outputs)
    }

    /// Views `self` as a map on `R^n x R` that ignores the trailing time coordinate.
    pub fn with_dummy_time(&self) -> SmoothMap {
        SmoothMap::new(self.arity_in + 1, self.outputs.clone())
    }

    /// Affine homotopy `(1 - t) self(x) + t other(x)` on `R^n x R`.
    pub fn affine_homotopy(&self, other: &SmoothMap) -> SmoothMap {
        assert_eq!(self.arity_in, other.arity_in);
        assert_eq!(self.arity_out(), other.arity_out());
        let t = Expr::var(self.arity_in);
        let outputs = self
            .outputs
            .iter()
            .zip(&other.outputs)
            .map(|(a, b)| (1.0 - t.clone()) * a.clone() + t.clone() * b.clone())
            .collect();
        SmoothMap::new(self.arity_in + 1, outputs)
    }

    /// Restricts a homotopy on `R^n x R` to the slice at a fixed time.
    pub fn at_time(&self, t: f64) -> SmoothMap {
        let n = self.arity_in - 1;
        let mut args: Vec<Expr> = (0..n).map(Expr::var).collect();
        args.push(Expr::constant(t));
        let mut memo = HashMap::new();
        let outputs = self.outputs.iter().map(|e| subst_rec(e, &args, &mut memo)).collect();
        SmoothMap::new(n, outputs)
    }

    pub fn tape(&self) -> &Tape {
        self.tape.get_or_init(|| Tape::compile(self.arity_in, &self.outputs))
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>, EvalError> {
        self.tape().eval(x)
    }

    /// Forward jets of every output up to order two.
    pub fn eval_jet2(&self, x: &[f64]) -> Result<Vec<Jet2>, EvalError> {
        self.tape().eval_jet2(x)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("smooth map serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

impl PartialEq for SmoothMap {
    fn eq(&self, other: &Self) -> bool {
        self.arity_in == other.arity_in && self.outputs == other.outputs
    }
}
