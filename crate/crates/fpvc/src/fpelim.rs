//! Bounding of compound rounding errors and elimination of floating-point
//! operations.
//!
//! Each maximal atom side containing a rounding node is a *context*. A
//! context carries a sound absolute bound `delta` on the difference between
//! its floating-point value and the value of the same tree with rounding
//! stripped. Contexts are then replaced by `exact +/- delta`, with the sign
//! chosen per atom polarity so that the rewrite only weakens the NVC: every
//! model of the input satisfies the output.
//!
//! The built-in bound engine is first-order interval error propagation. It
//! is looser than a dedicated Taylor-form analysis, so externally computed
//! bounds can be injected per context instead.

use crate::eval::{BoxMap, EvalCtx};
use crate::expr::{BinOp, Expr, UnOp};
use crate::formula::{Formula, Rel};
use crate::interval::{Endpoint, Interval};
use crate::nvc::{ProcessedNvc, Sort};
use crate::scalar::{fnv1a64, parse_scalar, render_scalar, Scalar};
use rug::float::Round;
use rug::Float;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundSource {
    Internal,
    External(String),
}

/// One maximal floating-point expression with its rounding-error bound.
#[derive(Debug, Clone)]
pub struct FpContext {
    pub expr: Expr,
    pub exact: Expr,
    pub bound: Option<Scalar>,
    pub source: BoundSource,
}

impl FpContext {
    pub fn new(expr: Expr) -> FpContext {
        let exact = expr.strip_round_fp();
        FpContext { expr, exact, bound: None, source: BoundSource::Internal }
    }

    /// Stable identifier derived from the canonical printed form.
    pub fn id(&self) -> String {
        format!("{:016x}", fnv1a64(self.expr.to_string().as_bytes()))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundError {
    #[error("variable '{0}' is not finitely bounded")]
    UnboundedVariable(String),
    #[error("a denominator interval may vanish; the bound cannot be certified")]
    DenominatorMayVanish,
    #[error("operation '{0}' leaves its domain under error inflation")]
    OutsideDomain(&'static str),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ElimError {
    #[error("context {0} has no error bound")]
    UnboundedContext(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ImportError {
    #[error("no absolute error bound found in tool output")]
    UnparsableOutput,
}

/// Collects the maximal atom sides containing rounding nodes, deduplicated
/// in first-seen order.
pub fn collect_fp_contexts(nvc: &ProcessedNvc) -> Vec<FpContext> {
    let mut out: Vec<FpContext> = Vec::new();
    for assertion in &nvc.assertions {
        assertion.visit_atoms_polarity(true, &mut |atom, _| {
            let Formula::Atom(_, lhs, rhs) = atom else { return };
            for side in [lhs, rhs] {
                if side.contains_round_fp() && !out.iter().any(|c| c.expr == *side) {
                    out.push(FpContext::new(side.clone()));
                }
            }
        });
    }
    out
}

/// Value-and-error pair propagated bottom-up: `value` encloses the exact
/// (rounding-stripped) tree over the box, `err` bounds |fp value - exact
/// value| at every point of the box.
struct ValErr {
    value: Interval,
    err: Scalar,
}

fn finite_mag(iv: &Interval, widen: &Scalar) -> Result<Scalar, BoundError> {
    match iv.magnitude() {
        Endpoint::Finite(m) => Ok(m + widen.clone()),
        _ => Err(BoundError::OutsideDomain("unbounded intermediate value")),
    }
}

/// Sound upper bound on sqrt(q) for q >= 0.
fn sqrt_upper(q: &Scalar, prec: u32) -> Scalar {
    let mut f = Float::with_val_round(prec, q, Round::Up).0;
    f.sqrt_round(Round::Up);
    f.to_rational().unwrap()
}

/// Sound lower bound on sqrt(q) for q > 0.
fn sqrt_lower(q: &Scalar, prec: u32) -> Scalar {
    let mut f = Float::with_val_round(prec, q, Round::Down).0;
    f.sqrt_round(Round::Down);
    f.to_rational().unwrap()
}

/// Sound upper bound on exp(q).
fn exp_upper(q: &Scalar, prec: u32) -> Result<Scalar, BoundError> {
    let mut f = Float::with_val_round(prec, q, Round::Up).0;
    f.exp_round(Round::Up);
    f.to_rational()
        .ok_or(BoundError::OutsideDomain("exp overflow in Lipschitz bound"))
}

/// First-order interval propagation of rounding errors.
pub fn compute_error_bound_internal(
    ctx: &FpContext,
    box_map: &BoxMap,
    prec: u32,
) -> Result<Scalar, BoundError> {
    compute_error_bound_ctx(ctx, box_map, &EvalCtx::with_prec(prec))
}

/// [`compute_error_bound_internal`] with a full evaluation context
/// (rounding parameter overrides included).
pub fn compute_error_bound_ctx(
    ctx: &FpContext,
    box_map: &BoxMap,
    ectx: &EvalCtx,
) -> Result<Scalar, BoundError> {
    Ok(propagate(&ctx.expr, box_map, ectx)?.err)
}

fn propagate(e: &Expr, bx: &BoxMap, ctx: &EvalCtx) -> Result<ValErr, BoundError> {
    let zero = Scalar::from(0);
    match e {
        Expr::Var(name) => {
            let iv = bx
                .get(name)
                .cloned()
                .ok_or_else(|| BoundError::UnboundedVariable(name.clone()))?;
            if !iv.is_bounded() {
                return Err(BoundError::UnboundedVariable(name.clone()));
            }
            Ok(ValErr { value: iv, err: zero })
        }
        Expr::Lit(q) => Ok(ValErr { value: Interval::point(q.clone()), err: zero }),
        Expr::Pi => Ok(ValErr { value: crate::interval::pi_interval(ctx.prec), err: zero }),
        Expr::Unary(op, a) => {
            let a = propagate(a, bx, ctx)?;
            let value = match op {
                UnOp::Neg => a.value.neg(),
                UnOp::Abs => a.value.abs(),
                UnOp::Sqrt => a.value.sqrt(ctx.prec),
                UnOp::Sin => a.value.sin(ctx.prec),
                UnOp::Cos => a.value.cos(ctx.prec),
                UnOp::Exp => a.value.exp(ctx.prec),
                UnOp::Log => a.value.log(ctx.prec),
            };
            if a.err == zero {
                return Ok(ValErr { value, err: zero });
            }
            let err = match op {
                UnOp::Neg | UnOp::Abs => a.err,
                // sin and cos are 1-Lipschitz.
                UnOp::Sin | UnOp::Cos => a.err,
                UnOp::Sqrt => {
                    let lo_infl = match a.value.lo() {
                        Endpoint::Finite(lo) => lo.clone() - &a.err,
                        _ => return Err(BoundError::OutsideDomain("sqrt of unbounded value")),
                    };
                    if lo_infl < 0 {
                        return Err(BoundError::OutsideDomain("sqrt of possibly negative value"));
                    }
                    // |sqrt a - sqrt b| <= sqrt|a - b|; with a positive lower
                    // bound the Lipschitz rate 1/(2 sqrt lo) is tighter.
                    let holder = sqrt_upper(&a.err, ctx.prec);
                    if lo_infl > 0 {
                        let lip = a.err.clone() / (Scalar::from(2) * sqrt_lower(&lo_infl, ctx.prec));
                        holder.min(lip)
                    } else {
                        holder
                    }
                }
                UnOp::Exp => {
                    let hi_infl = match a.value.hi() {
                        Endpoint::Finite(hi) => hi.clone() + &a.err,
                        _ => return Err(BoundError::OutsideDomain("exp of unbounded value")),
                    };
                    exp_upper(&hi_infl, ctx.prec)? * &a.err
                }
                UnOp::Log => {
                    let lo_infl = match a.value.lo() {
                        Endpoint::Finite(lo) => lo.clone() - &a.err,
                        _ => return Err(BoundError::OutsideDomain("log of unbounded value")),
                    };
                    if lo_infl <= 0 {
                        return Err(BoundError::OutsideDomain("log of possibly nonpositive value"));
                    }
                    a.err.clone() / lo_infl
                }
            };
            Ok(ValErr { value, err })
        }
        Expr::Binary(op, a, b) => {
            let a = propagate(a, bx, ctx)?;
            let b = propagate(b, bx, ctx)?;
            let value = match op {
                BinOp::Add => a.value.add(&b.value),
                BinOp::Sub => a.value.sub(&b.value),
                BinOp::Mul => a.value.mul(&b.value),
                BinOp::Div => a.value.div(&b.value),
                BinOp::Min => a.value.min(&b.value),
                BinOp::Max => a.value.max(&b.value),
                BinOp::Mod => a.value.mod_euclid(&b.value),
            };
            let err = match op {
                BinOp::Add | BinOp::Sub => Scalar::from(&a.err + b.err.clone()),
                BinOp::Mul => {
                    if a.err == zero && b.err == zero {
                        zero
                    } else {
                        let ma = finite_mag(&a.value, &zero)?;
                        let mb = finite_mag(&b.value, &zero)?;
                        ma * &b.err + mb * &a.err + Scalar::from(&a.err * b.err.clone())
                    }
                }
                BinOp::Div => {
                    if a.err == zero && b.err == zero {
                        zero
                    } else {
                        let denom_infl = b
                            .value
                            .add(&Interval::finite(-b.err.clone(), b.err.clone()));
                        if denom_infl.contains_zero() {
                            return Err(BoundError::DenominatorMayVanish);
                        }
                        let mig = denom_infl.mignitude();
                        let quotient_mag = finite_mag(&a.value.div(&b.value), &zero)?;
                        (a.err.clone() + quotient_mag * &b.err) / mig
                    }
                }
                BinOp::Min | BinOp::Max => a.err.clone().max(b.err.clone()),
                // Both results lie in [0, |divisor|); their difference can
                // jump by a whole period.
                BinOp::Mod => {
                    if a.err == zero && b.err == zero {
                        zero
                    } else {
                        finite_mag(&b.value, &b.err)?
                    }
                }
            };
            Ok(ValErr { value, err })
        }
        Expr::Pow(a, n) => {
            // Expand to repeated multiplication for the error rule.
            let base = propagate(a, bx, ctx)?;
            if *n == 0 {
                return Ok(ValErr { value: Interval::point(Scalar::from(1)), err: zero });
            }
            let mut acc_v = base.value.clone();
            let mut acc_e = base.err.clone();
            for _ in 1..*n {
                let ma = finite_mag(&acc_v, &zero)?;
                let mb = finite_mag(&base.value, &zero)?;
                let next_e = if acc_e == zero && base.err == zero {
                    zero.clone()
                } else {
                    ma * &base.err + mb * &acc_e + Scalar::from(&acc_e * base.err.clone())
                };
                acc_v = acc_v.mul(&base.value);
                acc_e = next_e;
            }
            Ok(ValErr { value: acc_v, err: acc_e })
        }
        Expr::RoundFp { format, arg, .. } => {
            // A literal exactly representable in the format rounds to
            // itself: no error at all.
            if let Expr::Lit(q) = arg.as_ref() {
                if format.is_representable(q) {
                    return Ok(ValErr { value: Interval::point(q.clone()), err: zero });
                }
            }
            let a = propagate(arg, bx, ctx)?;
            let mag = finite_mag(&a.value, &a.err)?;
            let eps = ctx.params.eps(*format);
            let zeta = ctx.params.zeta(*format);
            let err = a.err.clone() + mag * eps + zeta.clone();
            Ok(ValErr { value: a.value, err })
        }
        Expr::RoundToInt { arg, .. } => {
            let a = propagate(arg, bx, ctx)?;
            let half = Interval::finite(Scalar::from((-1, 2)), Scalar::from((1, 2)));
            let err = if a.err == zero { zero } else { a.err.clone() + Scalar::from(1) };
            Ok(ValErr { value: a.value.add(&half), err })
        }
    }
}

/// Parses an absolute error bound out of external tool output.
pub fn import_external_bound(text: &str) -> Result<Scalar, ImportError> {
    for line in text.lines() {
        let lower = line.to_ascii_lowercase();
        if !lower.contains("absolute error") {
            continue;
        }
        // Last numeric token on the line is the bound.
        let mut found = None;
        for tok in line.split(|c: char| c.is_whitespace() || c == ':' || c == ',') {
            let tok = tok.trim_matches(|c: char| !c.is_ascii_alphanumeric() && c != '.' && c != '-' && c != '+' && c != 'e' && c != 'E');
            if tok.is_empty() {
                continue;
            }
            if let Some(q) = parse_scalar(tok) {
                found = Some(q);
            }
        }
        if let Some(q) = found {
            if q >= 0 {
                return Ok(q);
            }
        }
    }
    // A bare numeric answer counts too.
    if let Some(q) = parse_scalar(text.trim()) {
        if q >= 0 {
            return Ok(q);
        }
    }
    Err(ImportError::UnparsableOutput)
}

/// Fills in missing bounds using the internal engine.
pub fn compute_missing_bounds(
    contexts: &mut [FpContext],
    box_map: &BoxMap,
    prec: u32,
) -> Result<(), BoundError> {
    for ctx in contexts.iter_mut() {
        if ctx.bound.is_none() {
            let b = compute_error_bound_internal(ctx, box_map, prec)?;
            ctx.bound = Some(b);
            ctx.source = BoundSource::Internal;
        }
    }
    Ok(())
}

/// Replaces every context occurrence by its exact tree plus or minus the
/// error cushion, polarity-aware so the NVC is only ever weakened. Equalities
/// containing contexts split into two inequalities first. Float-sorted
/// variables are re-typed as reals afterwards: no rounding nodes remain.
pub fn eliminate_fp(nvc: &ProcessedNvc, contexts: &[FpContext]) -> Result<ProcessedNvc, ElimError> {
    let before = nvc.structural_hash();
    let mut out = nvc.clone();
    out.assertions = nvc
        .assertions
        .iter()
        .map(|a| rewrite_formula(a, true, contexts))
        .collect::<Result<_, _>>()?;
    for v in &mut out.vars {
        if matches!(v.sort, Sort::Float(_)) {
            v.sort = Sort::Real;
        }
    }
    out.record("eliminate_fp", before);
    Ok(out)
}

fn rewrite_formula(
    f: &Formula,
    positive: bool,
    contexts: &[FpContext],
) -> Result<Formula, ElimError> {
    match f {
        Formula::True | Formula::False => Ok(f.clone()),
        Formula::Not(g) => Ok(Formula::not(rewrite_formula(g, !positive, contexts)?)),
        Formula::And(a, b) => Ok(Formula::and(
            rewrite_formula(a, positive, contexts)?,
            rewrite_formula(b, positive, contexts)?,
        )),
        Formula::Or(a, b) => Ok(Formula::or(
            rewrite_formula(a, positive, contexts)?,
            rewrite_formula(b, positive, contexts)?,
        )),
        Formula::Implies(a, b) => Ok(Formula::implies(
            rewrite_formula(a, !positive, contexts)?,
            rewrite_formula(b, positive, contexts)?,
        )),
        Formula::Atom(rel, lhs, rhs) => {
            if !lhs.contains_round_fp() && !rhs.contains_round_fp() {
                return Ok(f.clone());
            }
            match rel {
                Rel::Eq => {
                    // e = c splits into e <= c and c <= e, then each side is
                    // rewritten under the atom's polarity.
                    let split = Formula::and(
                        Formula::le(lhs.clone(), rhs.clone()),
                        Formula::le(rhs.clone(), lhs.clone()),
                    );
                    rewrite_formula(&split, positive, contexts)
                }
                Rel::Ge | Rel::Gt => {
                    let rel = if *rel == Rel::Ge { Rel::Le } else { Rel::Lt };
                    rewrite_formula(&Formula::Atom(rel, rhs.clone(), lhs.clone()), positive, contexts)
                }
                Rel::Le | Rel::Lt => {
                    // At positive polarity the atom weakens: the bounded side
                    // shrinks and the bounding side grows. Negative polarity
                    // strengthens, which weakens the enclosing negation.
                    let new_lhs = shift_side(lhs, !positive, contexts)?;
                    let new_rhs = shift_side(rhs, positive, contexts)?;
                    Ok(Formula::Atom(*rel, new_lhs, new_rhs))
                }
            }
        }
    }
}

/// Replaces a context side by `exact + delta` (grow) or `exact - delta`.
fn shift_side(side: &Expr, grow: bool, contexts: &[FpContext]) -> Result<Expr, ElimError> {
    if !side.contains_round_fp() {
        return Ok(side.clone());
    }
    let ctx = contexts
        .iter()
        .find(|c| c.expr == *side)
        .ok_or_else(|| ElimError::UnboundedContext(FpContext::new(side.clone()).id()))?;
    let delta = ctx
        .bound
        .clone()
        .ok_or_else(|| ElimError::UnboundedContext(ctx.id()))?;
    if delta == 0 {
        return Ok(ctx.exact.clone());
    }
    Ok(if grow {
        Expr::add(ctx.exact.clone(), Expr::Lit(delta))
    } else {
        Expr::sub(ctx.exact.clone(), Expr::Lit(delta))
    })
}

/// Renders contexts in the two-section error-analysis input format:
/// a `Variables` section with one range per free variable and an
/// `Expressions` section with one `rnd`-annotated expression per context.
pub fn export_fptaylor(exprs: &[&Expr], box_map: &BoxMap) -> String {
    let mut vars: Vec<String> = Vec::new();
    for e in exprs {
        for v in e.free_vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
    }
    vars.sort();
    let mut out = String::new();
    out.push_str("Variables\n");
    for v in &vars {
        let iv = box_map.get(v).cloned().unwrap_or_else(Interval::entire);
        let (lo, hi) = match (iv.lo(), iv.hi()) {
            (Endpoint::Finite(a), Endpoint::Finite(b)) => (render_scalar(a), render_scalar(b)),
            _ => ("?".to_string(), "?".to_string()),
        };
        let _ = writeln!(out, "  real {v} in [{lo}, {hi}];");
    }
    out.push_str("\nExpressions\n");
    for e in exprs {
        let _ = writeln!(out, "  {};", render_ft(e, true));
    }
    out
}

fn render_ft(e: &Expr, top: bool) -> String {
    match e {
        Expr::Var(n) => n.clone(),
        Expr::Lit(q) => render_scalar(q),
        Expr::Pi => "pi".to_string(),
        Expr::Unary(UnOp::Neg, a) => format!("-{}", render_ft(a, false)),
        Expr::Unary(op, a) => format!("{}({})", op.symbol(), render_ft(a, true)),
        Expr::Binary(op, a, b) => {
            let body = match op {
                BinOp::Min | BinOp::Max | BinOp::Mod => {
                    return format!("{}({}, {})", op.symbol(), render_ft(a, true), render_ft(b, true));
                }
                _ => format!("{} {} {}", render_ft(a, false), op.symbol(), render_ft(b, false)),
            };
            if top {
                body
            } else {
                format!("({body})")
            }
        }
        Expr::Pow(a, n) => format!("({} ^ {n})", render_ft(a, false)),
        Expr::RoundFp { format, arg, .. } => {
            let name = match format {
                crate::fp_format::FloatFormat::Single => "rnd32",
                crate::fp_format::FloatFormat::Double => "rnd64",
            };
            format!("{name}({})", render_ft(arg, false))
        }
        Expr::RoundToInt { arg, .. } => format!("rint({})", render_ft(arg, true)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp_format::{FloatFormat, RoundMode};
    use crate::nvc::VarSpec;
    use crate::scalar::pow2;
    use std::collections::BTreeMap;

    fn rnd32(e: Expr) -> Expr {
        Expr::round_fp(FloatFormat::Single, RoundMode::NearestEven, e)
    }

    /// sin(x) + (-1 * rnd32((x - rnd32((rnd32((rnd32((x*x))*x)) / 6)))))
    fn taylor_sin_context() -> Expr {
        let x = Expr::var("x");
        let xx = rnd32(Expr::mul(x.clone(), x.clone()));
        let xxx = rnd32(Expr::mul(xx, x.clone()));
        let cube_term = rnd32(Expr::div(xxx, Expr::int(6)));
        let poly = rnd32(Expr::sub(x.clone(), cube_term));
        Expr::add(Expr::sin(x), Expr::mul(Expr::int(-1), poly))
    }

    fn half_box() -> BoxMap {
        let mut m = BTreeMap::new();
        m.insert(
            "x".to_string(),
            Interval::finite(Scalar::from((-1, 2)), Scalar::from((1, 2))),
        );
        m
    }

    #[test]
    fn representable_literal_has_zero_error() {
        let ctx = FpContext::new(rnd32(Expr::int(1)));
        let bound = compute_error_bound_internal(&ctx, &BTreeMap::new(), 113).unwrap();
        assert_eq!(bound, Scalar::from(0));
    }

    #[test]
    fn round_of_variable_charges_eps_and_zeta() {
        let ctx = FpContext::new(rnd32(Expr::var("x")));
        let bound = compute_error_bound_internal(&ctx, &half_box(), 113).unwrap();
        assert_eq!(bound, Scalar::from((1, 2)) * pow2(-24) + pow2(-150));
    }

    #[test]
    fn taylor_sin_bound_in_expected_window() {
        let ctx = FpContext::new(taylor_sin_context());
        let bound = compute_error_bound_internal(&ctx, &half_box(), 113).unwrap();
        // Sampled maximum rounding error of the polynomial is ~1.61e-8; the
        // interval engine must stay above it and under 1e-6.
        assert!(bound >= Scalar::from((161i64, 10_000_000_000i64)));
        assert!(bound <= Scalar::from((1, 1_000_000)));
    }

    #[test]
    fn unbounded_variable_rejected() {
        let ctx = FpContext::new(rnd32(Expr::var("x")));
        assert_eq!(
            compute_error_bound_internal(&ctx, &BTreeMap::new(), 113).unwrap_err(),
            BoundError::UnboundedVariable("x".into())
        );
    }

    #[test]
    fn vanishing_denominator_rejected() {
        // rnd32(x) / x over an interval containing 0.
        let e = Expr::div(rnd32(Expr::var("x")), Expr::var("x"));
        let ctx = FpContext::new(e);
        assert_eq!(
            compute_error_bound_internal(&ctx, &half_box(), 113).unwrap_err(),
            BoundError::DenominatorMayVanish
        );
    }

    #[test]
    fn collect_contexts_dedup() {
        let s = taylor_sin_context();
        let b = Expr::lit(Scalar::from((25889, 100000000)));
        let neg_s = Expr::mul(Expr::int(-1), s.clone());
        let goal = Formula::not(Formula::and(
            Formula::implies(
                Formula::le(Expr::int(0), s.clone()),
                Formula::le(s.clone(), b.clone()),
            ),
            Formula::implies(
                Formula::not(Formula::le(Expr::int(0), s.clone())),
                Formula::le(neg_s.clone(), b.clone()),
            ),
        ));
        let first = Formula::eq(rnd32(Expr::int(1)), Expr::int(1));
        let nvc = ProcessedNvc::new(
            vec![VarSpec::unbounded("x", Sort::Float(FloatFormat::Single))],
            vec![first, goal],
        );
        let ctxs = collect_fp_contexts(&nvc);
        let exprs: Vec<&Expr> = ctxs.iter().map(|c| &c.expr).collect();
        assert_eq!(exprs, vec![&rnd32(Expr::int(1)), &s, &neg_s]);
    }

    #[test]
    fn fp_free_nvc_has_no_contexts() {
        let nvc = ProcessedNvc::new(
            vec![VarSpec::unbounded("x", Sort::Real)],
            vec![Formula::le(Expr::sin(Expr::var("x")), Expr::int(1))],
        );
        assert!(collect_fp_contexts(&nvc).is_empty());
    }

    #[test]
    fn export_matches_expected_body() {
        let ctx_expr = taylor_sin_context();
        let text = export_fptaylor(&[&ctx_expr], &half_box());
        let expected = "\
Variables
  real x in [-0.5, 0.5];

Expressions
  sin(x) + (-1 * rnd32((x - rnd32((rnd32((rnd32((x*x))*x)) / 6)))));
";
        let strip = |s: &str| s.chars().filter(|c| !c.is_whitespace()).collect::<String>();
        assert_eq!(strip(&text), strip(expected));
    }

    #[test]
    fn export_header_only_without_expressions() {
        let text = export_fptaylor(&[], &half_box());
        assert!(text.starts_with("Variables\n"));
        assert!(text.contains("Expressions"));
        assert!(!text.contains(';'));
    }

    #[test]
    fn export_double_uses_rnd64() {
        let e = Expr::round_fp(
            FloatFormat::Double,
            RoundMode::NearestEven,
            Expr::mul(Expr::var("x"), Expr::var("x")),
        );
        let text = export_fptaylor(&[&e], &half_box());
        assert!(text.contains("rnd64((x * x))"));
    }

    #[test]
    fn import_bound_variants() {
        let q = import_external_bound("Bounds: ...\nAbsolute error (exact): 1.769513e-8\n").unwrap();
        assert_eq!(q, Scalar::from((1769513u64, 100_000_000_000_000u64)));
        assert_eq!(import_external_bound("0").unwrap(), Scalar::from(0));
        assert_eq!(
            import_external_bound("nothing here").unwrap_err(),
            ImportError::UnparsableOutput
        );
    }

    #[test]
    fn eliminate_polarity_signs() {
        let s = taylor_sin_context();
        let exact = s.strip_round_fp();
        let b = Expr::lit(Scalar::from((25889, 100000000)));
        let neg_s = Expr::mul(Expr::int(-1), s.clone());
        let neg_exact = neg_s.strip_round_fp();
        let goal = Formula::not(Formula::and(
            Formula::implies(
                Formula::le(Expr::int(0), s.clone()),
                Formula::le(s.clone(), b.clone()),
            ),
            Formula::implies(
                Formula::not(Formula::le(Expr::int(0), s.clone())),
                Formula::le(neg_s.clone(), b.clone()),
            ),
        ));
        let nvc = ProcessedNvc::new(
            vec![VarSpec::unbounded("x", Sort::Float(FloatFormat::Single))],
            vec![goal],
        );
        let delta = Scalar::from((1769513u64, 100_000_000_000_000u64));
        let mut contexts = collect_fp_contexts(&nvc);
        for c in &mut contexts {
            c.bound = Some(delta.clone());
            c.source = BoundSource::External("injected".into());
        }
        let out = eliminate_fp(&nvc, &contexts).unwrap();
        assert!(!out.contains_round_fp());

        let plus = |e: &Expr| Expr::add(e.clone(), Expr::Lit(delta.clone()));
        let minus = |e: &Expr| Expr::sub(e.clone(), Expr::Lit(delta.clone()));
        let expected = Formula::not(Formula::and(
            Formula::implies(
                // antecedent at positive polarity: bounding side grows
                Formula::le(Expr::int(0), plus(&exact)),
                // consequent at negative polarity: bounded side grows
                Formula::le(plus(&exact), b.clone()),
            ),
            Formula::implies(
                // doubly negated antecedent: bounding side shrinks
                Formula::not(Formula::le(Expr::int(0), minus(&exact))),
                Formula::le(plus(&neg_exact), b.clone()),
            ),
        ));
        assert_eq!(out.assertions, vec![expected]);
    }

    #[test]
    fn eliminate_zero_delta_strips_rounding() {
        let atom = Formula::eq(rnd32(Expr::int(1)), Expr::int(1));
        let nvc = ProcessedNvc::new(vec![], vec![atom]);
        let mut contexts = collect_fp_contexts(&nvc);
        compute_missing_bounds(&mut contexts, &BTreeMap::new(), 113).unwrap();
        assert_eq!(contexts[0].bound, Some(Scalar::from(0)));
        let out = eliminate_fp(&nvc, &contexts).unwrap();
        // 1 = 1 split into 1 <= 1 and 1 <= 1, rounding gone.
        assert_eq!(
            out.assertions,
            vec![Formula::and(
                Formula::le(Expr::int(1), Expr::int(1)),
                Formula::le(Expr::int(1), Expr::int(1)),
            )]
        );
        let simplified = crate::simplify::simplify_fixpoint(&out);
        assert!(simplified.assertions.is_empty());
    }

    #[test]
    fn missing_bound_aborts() {
        let atom = Formula::le(rnd32(Expr::var("x")), Expr::int(1));
        let nvc = ProcessedNvc::new(
            vec![VarSpec::unbounded("x", Sort::Float(FloatFormat::Single))],
            vec![atom],
        );
        let contexts = collect_fp_contexts(&nvc);
        assert!(matches!(
            eliminate_fp(&nvc, &contexts),
            Err(ElimError::UnboundedContext(_))
        ));
    }

    #[test]
    fn context_id_stable() {
        let a = FpContext::new(rnd32(Expr::var("x")));
        let b = FpContext::new(rnd32(Expr::var("x")));
        assert_eq!(a.id(), b.id());
        assert_eq!(a.id().len(), 16);
        let c = FpContext::new(rnd32(Expr::var("y")));
        assert_ne!(a.id(), c.id());
    }
}
