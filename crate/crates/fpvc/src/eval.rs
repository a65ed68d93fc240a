//! Interval evaluation of expressions and three-valued evaluation of
//! formulas over a variable box.
//!
//! The evaluation is total: anything unknown or undefined widens to an
//! infinite interval. Rounding nodes are over-approximated, `RoundFp` by
//! `x·(1 ± eps) ± zeta` and `RoundToInt` by `x ± 1/2`, which is sound for
//! every rounding mode. Counter-example certification switches on
//! `exact_points`, making `RoundToInt` and `mod` exact whenever their
//! arguments are degenerate intervals so that tie modes are honoured.

use crate::expr::{BinOp, Expr, UnOp};
use crate::formula::{Formula, Rel};
use crate::fp_format::{round_integer_ties, FloatFormat};
use crate::interval::{pi_interval, Interval};
use crate::scalar::Scalar;
use std::collections::BTreeMap;

pub const DEFAULT_PREC: u32 = 113;

pub type BoxMap = BTreeMap<String, Interval>;

/// Machine epsilon / subnormal parameters used for rounding
/// over-approximation. Defaults are the half-ulp values of the format; the
/// pipeline configuration may override them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundingParams {
    pub eps_single: Scalar,
    pub zeta_single: Scalar,
    pub eps_double: Scalar,
    pub zeta_double: Scalar,
}

impl Default for RoundingParams {
    fn default() -> Self {
        RoundingParams {
            eps_single: FloatFormat::Single.eps(),
            zeta_single: FloatFormat::Single.zeta(),
            eps_double: FloatFormat::Double.eps(),
            zeta_double: FloatFormat::Double.zeta(),
        }
    }
}

impl RoundingParams {
    pub fn eps(&self, fmt: FloatFormat) -> &Scalar {
        match fmt {
            FloatFormat::Single => &self.eps_single,
            FloatFormat::Double => &self.eps_double,
        }
    }

    pub fn zeta(&self, fmt: FloatFormat) -> &Scalar {
        match fmt {
            FloatFormat::Single => &self.zeta_single,
            FloatFormat::Double => &self.zeta_double,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvalCtx {
    /// Working precision in bits for transcendental enclosures.
    pub prec: u32,
    /// Evaluate integer rounding and modulus exactly on degenerate
    /// intervals, honouring tie modes. Used for point certification.
    pub exact_points: bool,
    pub params: RoundingParams,
}

impl EvalCtx {
    pub fn with_prec(prec: u32) -> EvalCtx {
        EvalCtx { prec, exact_points: false, params: RoundingParams::default() }
    }

    pub fn certification(prec: u32) -> EvalCtx {
        EvalCtx { prec, exact_points: true, params: RoundingParams::default() }
    }
}

impl Default for EvalCtx {
    fn default() -> Self {
        EvalCtx::with_prec(DEFAULT_PREC)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ternary {
    CertainlyTrue,
    CertainlyFalse,
    Unknown,
}

use Ternary::*;

impl Ternary {
    pub fn negate(self) -> Ternary {
        match self {
            CertainlyTrue => CertainlyFalse,
            CertainlyFalse => CertainlyTrue,
            Unknown => Unknown,
        }
    }

    fn and(self, other: Ternary) -> Ternary {
        match (self, other) {
            (CertainlyFalse, _) | (_, CertainlyFalse) => CertainlyFalse,
            (CertainlyTrue, CertainlyTrue) => CertainlyTrue,
            _ => Unknown,
        }
    }

    fn or(self, other: Ternary) -> Ternary {
        match (self, other) {
            (CertainlyTrue, _) | (_, CertainlyTrue) => CertainlyTrue,
            (CertainlyFalse, CertainlyFalse) => CertainlyFalse,
            _ => Unknown,
        }
    }
}

/// Encloses the set `{e(v) : v in box}` under exact real semantics.
/// Free variables missing from the box are treated as unbounded.
pub fn eval_expr(e: &Expr, bx: &BoxMap, ctx: &EvalCtx) -> Interval {
    match e {
        Expr::Var(name) => bx.get(name).cloned().unwrap_or_else(Interval::entire),
        Expr::Lit(q) => Interval::point(q.clone()),
        Expr::Pi => pi_interval(ctx.prec),
        Expr::Unary(op, a) => {
            let ia = eval_expr(a, bx, ctx);
            match op {
                UnOp::Neg => ia.neg(),
                UnOp::Abs => ia.abs(),
                UnOp::Sqrt => ia.sqrt(ctx.prec),
                UnOp::Sin => ia.sin(ctx.prec),
                UnOp::Cos => ia.cos(ctx.prec),
                UnOp::Exp => ia.exp(ctx.prec),
                UnOp::Log => ia.log(ctx.prec),
            }
        }
        Expr::Binary(op, a, b) => {
            let ia = eval_expr(a, bx, ctx);
            let ib = eval_expr(b, bx, ctx);
            match op {
                BinOp::Add => ia.add(&ib),
                BinOp::Sub => ia.sub(&ib),
                BinOp::Mul => ia.mul(&ib),
                BinOp::Div => ia.div(&ib),
                BinOp::Min => ia.min(&ib),
                BinOp::Max => ia.max(&ib),
                BinOp::Mod => ia.mod_euclid(&ib),
            }
        }
        Expr::Pow(a, n) => eval_expr(a, bx, ctx).pow(*n),
        Expr::RoundFp { format, mode, arg } => {
            let ia = eval_expr(arg, bx, ctx);
            if ctx.exact_points {
                // Certification wants the true rounded value at degenerate
                // points; overflow falls back to the over-approximation.
                if let Some(q) = ia.as_point() {
                    if let Some(r) = format.round(q, *mode) {
                        return Interval::point(r);
                    }
                }
            }
            round_fp_overapprox(&ia, *format, &ctx.params)
        }
        Expr::RoundToInt { mode, arg } => {
            let ia = eval_expr(arg, bx, ctx);
            if ctx.exact_points {
                // Rounding to integer is monotone for both tie modes, so
                // rounding each endpoint gives the exact image. This is the
                // certification semantics; the default interval semantics
                // below stays at +/- 1/2 regardless of mode.
                let round_ep = |e: &crate::interval::Endpoint| match e {
                    crate::interval::Endpoint::Finite(q) => crate::interval::Endpoint::Finite(
                        Scalar::from(round_integer_ties(q, *mode)),
                    ),
                    other => other.clone(),
                };
                return Interval::new(round_ep(ia.lo()), round_ep(ia.hi()));
            }
            let half = Interval::finite(Scalar::from((-1, 2)), Scalar::from((1, 2)));
            ia.add(&half)
        }
    }
}

/// `x·(1 ± eps) ± zeta`, the sound enclosure of rounding into a format.
pub fn round_fp_overapprox(x: &Interval, fmt: FloatFormat, params: &RoundingParams) -> Interval {
    let eps = params.eps(fmt);
    let zeta = params.zeta(fmt);
    let one = Scalar::from(1);
    let rel = Interval::finite(one.clone() - eps.clone(), one + eps.clone());
    let abs = Interval::finite(-zeta.clone(), zeta.clone());
    x.mul(&rel).add(&abs)
}

/// Three-valued truth of a formula over the box. CertainlyTrue means the
/// formula holds at every point of the box; CertainlyFalse that it fails at
/// every point.
pub fn eval_formula(f: &Formula, bx: &BoxMap, ctx: &EvalCtx) -> Ternary {
    match f {
        Formula::True => CertainlyTrue,
        Formula::False => CertainlyFalse,
        Formula::Atom(rel, a, b) => {
            let ia = eval_expr(a, bx, ctx);
            let ib = eval_expr(b, bx, ctx);
            eval_atom(*rel, &ia, &ib)
        }
        Formula::Not(g) => eval_formula(g, bx, ctx).negate(),
        Formula::And(a, b) => eval_formula(a, bx, ctx).and(eval_formula(b, bx, ctx)),
        Formula::Or(a, b) => eval_formula(a, bx, ctx).or(eval_formula(b, bx, ctx)),
        Formula::Implies(a, b) => {
            eval_formula(a, bx, ctx).negate().or(eval_formula(b, bx, ctx))
        }
    }
}

fn eval_atom(rel: Rel, a: &Interval, b: &Interval) -> Ternary {
    match rel {
        Rel::Le => {
            if a.hi() <= b.lo() {
                CertainlyTrue
            } else if a.lo() > b.hi() {
                CertainlyFalse
            } else {
                Unknown
            }
        }
        Rel::Lt => {
            if a.hi() < b.lo() {
                CertainlyTrue
            } else if a.lo() >= b.hi() {
                CertainlyFalse
            } else {
                Unknown
            }
        }
        Rel::Ge => eval_atom(Rel::Le, b, a),
        Rel::Gt => eval_atom(Rel::Lt, b, a),
        Rel::Eq => {
            if a.is_point() && b.is_point() && a == b {
                CertainlyTrue
            } else if a.hi() < b.lo() || b.hi() < a.lo() {
                CertainlyFalse
            } else {
                Unknown
            }
        }
    }
}

/// Spec-level entry point: interval evaluation at a given working precision.
pub fn eval_expr_interval(e: &Expr, bx: &BoxMap, prec: u32) -> Interval {
    eval_expr(e, bx, &EvalCtx::with_prec(prec))
}

pub fn eval_formula_interval(f: &Formula, bx: &BoxMap, prec: u32) -> Ternary {
    eval_formula(f, bx, &EvalCtx::with_prec(prec))
}

/// Degenerate box placing every variable at the given point.
pub fn point_box(point: &BTreeMap<String, Scalar>) -> BoxMap {
    point
        .iter()
        .map(|(k, v)| (k.clone(), Interval::point(v.clone())))
        .collect()
}

/// Exact evaluation of a rational-closed expression (no transcendentals, no
/// rounding nodes with inexact semantics) at a point. Returns `None` when
/// the value is undefined or not rational-exact.
pub fn eval_exact(e: &Expr, point: &BTreeMap<String, Scalar>) -> Option<Scalar> {
    match e {
        Expr::Var(n) => point.get(n).cloned(),
        Expr::Lit(q) => Some(q.clone()),
        Expr::Pi => None,
        Expr::Unary(op, a) => {
            let v = eval_exact(a, point)?;
            match op {
                UnOp::Neg => Some(-v),
                UnOp::Abs => Some(v.abs()),
                UnOp::Sqrt | UnOp::Sin | UnOp::Cos | UnOp::Exp | UnOp::Log => None,
            }
        }
        Expr::Binary(op, a, b) => {
            let va = eval_exact(a, point)?;
            let vb = eval_exact(b, point)?;
            match op {
                BinOp::Add => Some(va + vb),
                BinOp::Sub => Some(va - vb),
                BinOp::Mul => Some(va * vb),
                BinOp::Div => (vb != 0).then(|| va / vb),
                BinOp::Min => Some(va.min(vb)),
                BinOp::Max => Some(va.max(vb)),
                BinOp::Mod => (vb != 0).then(|| crate::interval::euclid_mod(&va, &vb)),
            }
        }
        Expr::Pow(a, n) => {
            let v = eval_exact(a, point)?;
            Some(rug::ops::Pow::pow(v, *n))
        }
        // Exact semantics of the rounded result at a point.
        Expr::RoundFp { format, mode, arg } => {
            let v = eval_exact(arg, point)?;
            format.round(&v, *mode)
        }
        Expr::RoundToInt { mode, arg } => {
            let v = eval_exact(arg, point)?;
            Some(Scalar::from(round_integer_ties(&v, *mode)))
        }
    }
}
