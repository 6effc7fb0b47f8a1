//! Symbolic expressions over rationals with canonical forms, differentiation,
//! evaluation and randomized zero testing.

pub mod canon;
pub mod complex;
pub mod diff;
pub mod eval;
pub mod expr;
pub mod mpoly;
pub mod zero;

pub use canon::{
    canonicalize, numer_denom, solve_affine, try_canonicalize, CanonError, SolveError,
};
pub use complex::{cadd, cdiv, cmul, cpow_int, csub, ComplexExpr, ZeroDivisor};
pub use diff::{derivative, differentiate, partial, substitute, substitute_raw, Bindings};
pub use eval::{
    evaluate, evaluate_exact, evaluate_float, EvalError, ExactPoint, FloatPoint, Program, Value,
};
pub use expr::{Exponent, Expr, FuncKind, Jet, Node, Symbol};
pub use zero::{is_identically_zero, Witness, ZeroTestError, ZeroTester, ZeroVerdict};
