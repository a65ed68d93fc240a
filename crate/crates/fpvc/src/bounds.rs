//! Variable bound derivation by iterative interval refinement, and pruning
//! of interval-decided subformulas.
//!
//! Bound refinement only reads atoms that appear as positive top-level
//! conjuncts and isolate a single variable on one side (`v <= e`, `e <= v`,
//! `v = e`) or match the absolute-difference pattern `|v - e| <= c`.
//! Multi-variable atoms still participate in pruning. This is a small
//! abstract interpretation over the interval domain: starting from
//! unbounded intervals, each constraint intersects a variable's interval
//! with the interval of the opposite side, until nothing improves.

use crate::eval::{eval_expr, eval_formula, BoxMap, EvalCtx, Ternary};
use crate::expr::{BinOp, Expr, UnOp};
use crate::formula::{Formula, Rel};
use crate::interval::{Endpoint, Interval};
use crate::nvc::{ProcessedNvc, Sort};
use crate::scalar::Scalar;
use crate::simplify::simplify_fixpoint;
use thiserror::Error;

pub const DEFAULT_MAX_ROUNDS: usize = 20;
const REFINE_PASSES: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    /// A variable's bounds became empty: the conjunction has no models at
    /// all, which upstream reports as Proved.
    #[error("bounds of variable '{0}' are empty; the NVC is unsatisfiable")]
    EmptyBox(String),
}

#[derive(Debug, Clone)]
pub struct BoundsResult {
    pub box_map: BoxMap,
    pub rounds: usize,
    pub converged: bool,
}

/// Relative improvement below which an endpoint move does not count as
/// progress.
fn improved(old: &Endpoint, new: &Endpoint) -> bool {
    match (old, new) {
        (Endpoint::Finite(a), Endpoint::Finite(b)) => {
            let delta = Scalar::from(a - b.clone()).abs();
            let scale = a.clone().abs().max(Scalar::from(1));
            delta * Scalar::from(1_000_000) > scale
        }
        (Endpoint::Finite(_), _) | (_, Endpoint::Finite(_)) => true,
        _ => false,
    }
}

struct Refiner<'a> {
    nvc: &'a ProcessedNvc,
    ctx: EvalCtx,
    box_map: BoxMap,
    progressed: bool,
}

impl<'a> Refiner<'a> {
    fn intersect(&mut self, var: &str, with: &Interval) -> Result<(), BoundsError> {
        let Some(current) = self.box_map.get(var) else { return Ok(()) };
        let Some(mut next) = current.intersect(with) else {
            return Err(BoundsError::EmptyBox(var.to_string()));
        };
        if self.nvc.var(var).map(|v| v.sort) == Some(Sort::Int) {
            next = trim_to_integers(&next).ok_or_else(|| BoundsError::EmptyBox(var.to_string()))?;
        }
        if improved(current.lo(), next.lo()) || improved(current.hi(), next.hi()) {
            self.progressed = true;
        }
        self.box_map.insert(var.to_string(), next);
        Ok(())
    }

    fn apply_atom(&mut self, atom: &Formula) -> Result<(), BoundsError> {
        let Formula::Atom(rel, lhs, rhs) = atom else { return Ok(()) };
        match rel {
            Rel::Le | Rel::Lt => {
                self.apply_upper(lhs, rhs)?;
                self.apply_lower(lhs, rhs)?;
                self.apply_abs_pattern(lhs, rhs)?;
            }
            Rel::Ge | Rel::Gt => {
                self.apply_upper(rhs, lhs)?;
                self.apply_lower(rhs, lhs)?;
                self.apply_abs_pattern(rhs, lhs)?;
            }
            Rel::Eq => {
                if let (Expr::Var(v), e) | (e, Expr::Var(v)) = (lhs, rhs) {
                    if !e.mentions_var(v) {
                        let iv = eval_expr(e, &self.box_map, &self.ctx);
                        self.intersect(&v.clone(), &iv)?;
                    }
                }
            }
        }
        Ok(())
    }

    /// `v <= e`: intersect v with (-inf, hi(e)].
    fn apply_upper(&mut self, small: &Expr, big: &Expr) -> Result<(), BoundsError> {
        if let Expr::Var(v) = small {
            if !big.mentions_var(v) {
                let iv = eval_expr(big, &self.box_map, &self.ctx);
                let upper = Interval::new(Endpoint::NegInf, iv.hi().clone());
                self.intersect(&v.clone(), &upper)?;
            }
        }
        Ok(())
    }

    /// `e <= v`: intersect v with [lo(e), inf).
    fn apply_lower(&mut self, small: &Expr, big: &Expr) -> Result<(), BoundsError> {
        if let Expr::Var(v) = big {
            if !small.mentions_var(v) {
                let iv = eval_expr(small, &self.box_map, &self.ctx);
                let lower = Interval::new(iv.lo().clone(), Endpoint::PosInf);
                self.intersect(&v.clone(), &lower)?;
            }
        }
        Ok(())
    }

    /// `|v - e| <= c` decomposes into `e - c <= v <= e + c`.
    fn apply_abs_pattern(&mut self, lhs: &Expr, rhs: &Expr) -> Result<(), BoundsError> {
        let Expr::Unary(UnOp::Abs, inner) = lhs else { return Ok(()) };
        let (v, center) = match inner.as_ref() {
            Expr::Var(v) => (v.clone(), Expr::int(0)),
            Expr::Binary(BinOp::Sub, a, b) => match (a.as_ref(), b.as_ref()) {
                (Expr::Var(v), e) if !e.mentions_var(v) => (v.clone(), e.clone()),
                (e, Expr::Var(v)) if !e.mentions_var(v) => (v.clone(), e.clone()),
                _ => return Ok(()),
            },
            _ => return Ok(()),
        };
        if rhs.mentions_var(&v) {
            return Ok(());
        }
        let radius = eval_expr(rhs, &self.box_map, &self.ctx);
        match radius.hi() {
            Endpoint::Finite(r) if *r < 0 => {
                // |..| <= negative bound: no models at all.
                return Err(BoundsError::EmptyBox(v));
            }
            _ => {}
        }
        let center_iv = eval_expr(&center, &self.box_map, &self.ctx);
        let r_hi = radius.hi().clone();
        let spread = match r_hi {
            Endpoint::Finite(r) => Interval::finite(-r.clone(), r),
            _ => return Ok(()),
        };
        let window = center_iv.add(&spread);
        self.intersect(&v, &window)
    }
}

fn trim_to_integers(iv: &Interval) -> Option<Interval> {
    let lo = match iv.lo() {
        Endpoint::Finite(q) => Endpoint::Finite(Scalar::from(q.clone().ceil().numer().clone())),
        e => e.clone(),
    };
    let hi = match iv.hi() {
        Endpoint::Finite(q) => Endpoint::Finite(Scalar::from(q.clone().floor().numer().clone())),
        e => e.clone(),
    };
    (lo <= hi).then(|| Interval::new(lo, hi))
}

/// Iteratively improves variable bounds from single-variable-isolated atoms.
pub fn derive_bounds(
    nvc: &ProcessedNvc,
    prec: u32,
    max_rounds: usize,
) -> Result<BoundsResult, BoundsError> {
    derive_bounds_ctx(nvc, &EvalCtx::with_prec(prec), max_rounds)
}

/// [`derive_bounds`] with a full evaluation context (rounding parameter
/// overrides included).
pub fn derive_bounds_ctx(
    nvc: &ProcessedNvc,
    ctx: &EvalCtx,
    max_rounds: usize,
) -> Result<BoundsResult, BoundsError> {
    let mut refiner = Refiner {
        nvc,
        ctx: ctx.clone(),
        box_map: nvc.box_map(),
        progressed: false,
    };
    // Declared Int bounds trim immediately.
    for (name, sort) in nvc.vars.iter().map(|v| (v.name.clone(), v.sort)) {
        if sort == Sort::Int {
            let iv = refiner.box_map[&name].clone();
            let trimmed = trim_to_integers(&iv).ok_or(BoundsError::EmptyBox(name.clone()))?;
            refiner.box_map.insert(name, trimmed);
        }
    }
    let mut rounds = 0;
    let mut converged = false;
    while rounds < max_rounds {
        refiner.progressed = false;
        for assertion in &nvc.assertions {
            for conj in assertion.conjuncts() {
                refiner.apply_atom(conj)?;
            }
        }
        rounds += 1;
        if !refiner.progressed {
            converged = true;
            break;
        }
    }
    Ok(BoundsResult { box_map: refiner.box_map, rounds, converged })
}

/// Replaces every atom decided by interval evaluation over the box with its
/// truth value, at any polarity. This alone is an equivalence: the result
/// is satisfied by exactly the same points of the box.
pub fn prune_decided_atoms(nvc: &ProcessedNvc, box_map: &BoxMap, prec: u32) -> ProcessedNvc {
    prune_decided_atoms_ctx(nvc, box_map, &EvalCtx::with_prec(prec))
}

/// [`prune_decided_atoms`] with a full evaluation context.
pub fn prune_decided_atoms_ctx(
    nvc: &ProcessedNvc,
    box_map: &BoxMap,
    ctx: &EvalCtx,
) -> ProcessedNvc {
    let before = nvc.structural_hash();
    let mut out = nvc.clone();
    out.set_bounds(box_map);
    out.assertions = out
        .assertions
        .iter()
        .map(|a| prune_formula(a, box_map, ctx))
        .collect();
    out.record("prune", before);
    out
}

/// Pruning followed by the symbolic simplification fixpoint.
pub fn prune_with_bounds(nvc: &ProcessedNvc, box_map: &BoxMap, prec: u32) -> ProcessedNvc {
    simplify_fixpoint(&prune_decided_atoms(nvc, box_map, prec))
}

/// [`prune_with_bounds`] with a full evaluation context.
pub fn prune_with_bounds_ctx(nvc: &ProcessedNvc, box_map: &BoxMap, ctx: &EvalCtx) -> ProcessedNvc {
    simplify_fixpoint(&prune_decided_atoms_ctx(nvc, box_map, ctx))
}

fn prune_formula(f: &Formula, box_map: &BoxMap, ctx: &EvalCtx) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(..) => match eval_formula(f, box_map, ctx) {
            Ternary::CertainlyTrue => Formula::True,
            Ternary::CertainlyFalse => Formula::False,
            Ternary::Unknown => f.clone(),
        },
        Formula::Not(g) => Formula::not(prune_formula(g, box_map, ctx)),
        Formula::And(a, b) => Formula::and(
            prune_formula(a, box_map, ctx),
            prune_formula(b, box_map, ctx),
        ),
        Formula::Or(a, b) => Formula::or(
            prune_formula(a, box_map, ctx),
            prune_formula(b, box_map, ctx),
        ),
        Formula::Implies(a, b) => Formula::implies(
            prune_formula(a, box_map, ctx),
            prune_formula(b, box_map, ctx),
        ),
    }
}

/// Full refinement loop: simplify, derive bounds, prune, repeat until no
/// further improvement.
pub fn refine(
    nvc: &ProcessedNvc,
    prec: u32,
) -> Result<(ProcessedNvc, BoundsResult), BoundsError> {
    refine_ctx(nvc, &EvalCtx::with_prec(prec))
}

/// [`refine`] with a full evaluation context.
pub fn refine_ctx(
    nvc: &ProcessedNvc,
    ctx: &EvalCtx,
) -> Result<(ProcessedNvc, BoundsResult), BoundsError> {
    let mut current = simplify_fixpoint(nvc);
    let mut result = derive_bounds_ctx(&current, ctx, DEFAULT_MAX_ROUNDS)?;
    for _ in 0..REFINE_PASSES {
        let pruned = prune_with_bounds_ctx(&current, &result.box_map, ctx);
        let next_bounds = derive_bounds_ctx(&pruned, ctx, DEFAULT_MAX_ROUNDS)?;
        let stable = pruned.structural_hash() == current.structural_hash()
            && next_bounds.box_map == result.box_map;
        current = pruned;
        result = next_bounds;
        if stable {
            break;
        }
    }
    current.set_bounds(&result.box_map);
    Ok((current, result))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nvc::VarSpec;

    fn real_var(name: &str) -> VarSpec {
        VarSpec::unbounded(name, Sort::Real)
    }

    #[test]
    fn simple_two_sided_bounds() {
        let nvc = ProcessedNvc::new(
            vec![real_var("x")],
            vec![
                Formula::le(Expr::lit(Scalar::from((-1, 2))), Expr::var("x")),
                Formula::le(Expr::var("x"), Expr::lit(Scalar::from((1, 2)))),
            ],
        );
        let r = derive_bounds(&nvc, 53, 20).unwrap();
        assert_eq!(
            r.box_map["x"],
            Interval::finite(Scalar::from((-1, 2)), Scalar::from((1, 2)))
        );
        assert!(r.converged);
    }

    #[test]
    fn no_constraints_stays_unbounded() {
        let nvc = ProcessedNvc::new(vec![real_var("x")], vec![]);
        let r = derive_bounds(&nvc, 53, 20).unwrap();
        assert_eq!(r.box_map["x"], Interval::entire());
        assert!(r.converged);
    }

    #[test]
    fn transitive_bounds_two_rounds() {
        // {1 <= x, x <= y, y <= 3} gives x,y in [1,3].
        let nvc = ProcessedNvc::new(
            vec![real_var("x"), real_var("y")],
            vec![
                Formula::le(Expr::int(1), Expr::var("x")),
                Formula::le(Expr::var("x"), Expr::var("y")),
                Formula::le(Expr::var("y"), Expr::int(3)),
            ],
        );
        let r = derive_bounds(&nvc, 53, 20).unwrap();
        assert_eq!(r.box_map["x"], Interval::finite(Scalar::from(1), Scalar::from(3)));
        assert_eq!(r.box_map["y"], Interval::finite(Scalar::from(1), Scalar::from(3)));
        assert!(r.rounds <= 3);
    }

    #[test]
    fn integer_trimming() {
        let nvc = ProcessedNvc::new(
            vec![VarSpec::unbounded("n", Sort::Int)],
            vec![
                Formula::le(Expr::lit(Scalar::from((12, 10))), Expr::var("n")),
                Formula::le(Expr::var("n"), Expr::lit(Scalar::from((49, 10)))),
            ],
        );
        let r = derive_bounds(&nvc, 53, 20).unwrap();
        assert_eq!(r.box_map["n"], Interval::finite(Scalar::from(2), Scalar::from(4)));
    }

    #[test]
    fn equality_defines_range() {
        // y = round(x) with x in [0, 511]: y int lands in [0, 511].
        let mut y = VarSpec::unbounded("y", Sort::Int);
        y.bounds = Interval::entire();
        let mut x = real_var("x");
        x.bounds = Interval::finite(Scalar::from(0), Scalar::from(511));
        let nvc = ProcessedNvc::new(
            vec![x, y],
            vec![Formula::eq(
                Expr::var("y"),
                Expr::round_to_int(crate::fp_format::IntRoundMode::NearestAway, Expr::var("x")),
            )],
        );
        let r = derive_bounds(&nvc, 53, 20).unwrap();
        assert_eq!(r.box_map["y"], Interval::finite(Scalar::from(0), Scalar::from(511)));
    }

    #[test]
    fn abs_pattern_bounds() {
        // |y - x| <= 1/4 with x in [1,2] bounds y to [3/4, 9/4].
        let mut x = real_var("x");
        x.bounds = Interval::finite(Scalar::from(1), Scalar::from(2));
        let nvc = ProcessedNvc::new(
            vec![x, real_var("y")],
            vec![Formula::le(
                Expr::abs(Expr::sub(Expr::var("y"), Expr::var("x"))),
                Expr::lit(Scalar::from((1, 4))),
            )],
        );
        let r = derive_bounds(&nvc, 53, 20).unwrap();
        assert_eq!(
            r.box_map["y"],
            Interval::finite(Scalar::from((3, 4)), Scalar::from((9, 4)))
        );
    }

    #[test]
    fn contradictory_bounds_empty_box() {
        let nvc = ProcessedNvc::new(
            vec![real_var("x")],
            vec![
                Formula::le(Expr::int(2), Expr::var("x")),
                Formula::le(Expr::var("x"), Expr::int(1)),
            ],
        );
        assert_eq!(
            derive_bounds(&nvc, 53, 20).unwrap_err(),
            BoundsError::EmptyBox("x".into())
        );
    }

    #[test]
    fn prune_absorbs_decided_bounds() {
        let mut x = real_var("x");
        x.bounds = Interval::finite(Scalar::from((-1, 2)), Scalar::from((1, 2)));
        let nvc = ProcessedNvc::new(
            vec![x.clone()],
            vec![
                Formula::le(Expr::lit(Scalar::from((-1, 2))), Expr::var("x")),
                Formula::not(Formula::le(Expr::sin(Expr::var("x")), Expr::lit(Scalar::from((2, 10))))),
            ],
        );
        let out = prune_with_bounds(&nvc, &nvc.box_map(), 113);
        // The bound conjunct is decided true and absorbed; the goal stays.
        assert_eq!(out.assertions.len(), 1);
        assert!(matches!(out.assertions[0], Formula::Not(_)));
    }

    #[test]
    fn prune_is_noop_on_undecided() {
        let mut x = real_var("x");
        x.bounds = Interval::finite(Scalar::from(0), Scalar::from(1));
        let goal = Formula::le(Expr::sin(Expr::var("x")), Expr::lit(Scalar::from((1, 2))));
        let nvc = ProcessedNvc::new(vec![x], vec![goal.clone()]);
        let out = prune_with_bounds(&nvc, &nvc.box_map(), 113);
        assert_eq!(out.assertions, vec![goal]);
    }

    #[test]
    fn refine_derives_then_absorbs() {
        // Bounds assertions on x vanish once absorbed into the box.
        let nvc = ProcessedNvc::new(
            vec![real_var("x")],
            vec![
                Formula::le(Expr::lit(Scalar::from((-1, 2))), Expr::var("x")),
                Formula::le(Expr::var("x"), Expr::lit(Scalar::from((1, 2)))),
                Formula::not(Formula::le(Expr::sin(Expr::var("x")), Expr::int(1))),
            ],
        );
        let (out, bounds) = refine(&nvc, 113).unwrap();
        assert_eq!(
            bounds.box_map["x"],
            Interval::finite(Scalar::from((-1, 2)), Scalar::from((1, 2)))
        );
        assert_eq!(out.assertions.len(), 1);
        assert_eq!(
            out.var("x").unwrap().bounds,
            Interval::finite(Scalar::from((-1, 2)), Scalar::from((1, 2)))
        );
    }

    #[test]
    fn monotone_shrinkage_per_round() {
        let nvc = ProcessedNvc::new(
            vec![real_var("x"), real_var("y")],
            vec![
                Formula::le(Expr::int(0), Expr::var("x")),
                Formula::le(Expr::var("x"), Expr::int(10)),
                Formula::le(Expr::var("y"), Expr::div(Expr::var("x"), Expr::int(2))),
                Formula::le(Expr::int(0), Expr::var("y")),
            ],
        );
        let r1 = derive_bounds(&nvc, 53, 1).unwrap();
        let r2 = derive_bounds(&nvc, 53, 2).unwrap();
        for v in ["x", "y"] {
            assert!(r1.box_map[v].contains_interval(&r2.box_map[v]));
        }
    }
}
