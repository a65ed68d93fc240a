//! Processing and deciding of negated verification conditions (NVCs) that
//! mix floating-point and exact real arithmetic.
//!
//! The pipeline parses an NVC from SMT-LIB or a plain text format, simplifies
//! it symbolically, derives interval bounds for its variables, replaces
//! floating-point operations with exact operations plus sound rounding-error
//! cushions, and finally decides the exact nonlinear-real formula with a
//! branch-and-prune prover or serializes it for external provers.

pub mod backends;
pub mod bounds;
pub mod eval;
pub mod expr;
pub mod fp_format;
pub mod fpelim;
pub mod formula;
pub mod frontend;
pub mod interval;
pub mod nvc;
pub mod pipeline;
pub mod prover;
pub mod scalar;
pub mod sexpr;
pub mod simplify;
pub mod textfmt;

pub use eval::{eval_expr_interval, eval_formula_interval, EvalCtx, Ternary, DEFAULT_PREC};
pub use expr::{BinOp, Expr, UnOp};
pub use formula::{Formula, Rel};
pub use fp_format::{FloatFormat, IntRoundMode, RoundMode};
pub use interval::{Endpoint, Interval};

pub use nvc::{ProcessedNvc, Sort, VarSpec};
pub use scalar::Scalar;
