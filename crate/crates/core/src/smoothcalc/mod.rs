//! Smooth maps between Euclidean charts, cut-off functions and sampling checks.

pub mod cutoff;
pub mod eval;
pub mod expr;
pub mod jet;
pub mod pairspec;
pub mod verify;

pub use cutoff::{cutoff_expr, cutoff_value, make_cutoff, smooth_step, CutoffError, CutoffFn};
pub use eval::{EvalError, Tape};
pub use expr::{Expr, Node, SmoothMap};
pub use jet::Jet2;
pub use pairspec::{PairCase, PairError, PairSpec};
pub use verify::{
    check_gradient_fd, check_gradient_fd_with, check_hessian_fd, check_piecewise_agreement, verify_homotopy,
    verify_map_of_pairs, JetSource, PairTarget, HOMOTOPY_TIME_STEPS,
};
