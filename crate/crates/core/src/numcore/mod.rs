//! Numerical substrate: expressions, fields, dense linear algebra, Newton and continuation.

pub mod continuation;
pub mod expr;
pub mod field;
pub mod grid;
pub mod matrix;
pub mod newton;
pub mod poly;

pub use continuation::{continue_curve, Curve, Termination};
pub use expr::{parse, parse_family, PolyExpr, VarSet};
pub use field::{eval, fd_grad, grad, hessian, DomainBox, FnField, PolyField, ScalarField, Shifted, Unary, UnaryFn};
pub use grid::{Grid, Linspace, Range};
pub use matrix::{Matrix, Svd, DEFAULT_RANK_EPS};
pub use newton::{newton_polish, newton_solve, newton_solve_with, FieldSystem, FnSystem, NewtonOptions, System};
pub use poly::{rational, Polynomial, Rational};
