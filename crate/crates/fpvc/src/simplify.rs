//! Symbolic simplification: boolean reduction, variable-definition
//! substitution and simple arithmetic rewrites, iterated to a fixpoint.
//!
//! Every rewrite is a logical equivalence at the point level, so the
//! simplified NVC is satisfied by exactly the same points as the input.

use crate::expr::{BinOp, Expr, UnOp};
use crate::formula::{Formula, Rel};
use crate::interval::euclid_mod;
use crate::nvc::ProcessedNvc;
use crate::scalar::Scalar;
use rug::ops::Pow as _;

pub const MAX_ROUNDS: usize = 50;

/// Boolean-level reduction of vacuous propositions and obvious tautologies.
/// Also normalizes `>=`/`>` atoms into their `<=`/`<` mirror images.
pub fn simplify_bool(f: &Formula) -> Formula {
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(rel, a, b) => {
            let a = simplify_arith(a);
            let b = simplify_arith(b);
            let (rel, a, b) = match rel {
                Rel::Ge => (Rel::Le, b, a),
                Rel::Gt => (Rel::Lt, b, a),
                r => (*r, a, b),
            };
            // Literal comparisons fold exactly.
            if let (Expr::Lit(p), Expr::Lit(q)) = (&a, &b) {
                let holds = match rel {
                    Rel::Le => p <= q,
                    Rel::Lt => p < q,
                    Rel::Eq => p == q,
                    _ => unreachable!(),
                };
                return if holds { Formula::True } else { Formula::False };
            }
            match rel {
                Rel::Eq | Rel::Le if a == b => Formula::True,
                Rel::Lt if a == b => Formula::False,
                _ => Formula::Atom(rel, a, b),
            }
        }
        Formula::Not(g) => match simplify_bool(g) {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(inner) => *inner,
            other => Formula::not(other),
        },
        Formula::And(a, b) => match (simplify_bool(a), simplify_bool(b)) {
            (Formula::False, _) | (_, Formula::False) => Formula::False,
            (Formula::True, x) | (x, Formula::True) => x,
            (x, y) if x == y => x,
            (x, y) => Formula::and(x, y),
        },
        Formula::Or(a, b) => match (simplify_bool(a), simplify_bool(b)) {
            (Formula::True, _) | (_, Formula::True) => Formula::True,
            (Formula::False, x) | (x, Formula::False) => x,
            (x, y) if x == y => x,
            (x, y) => Formula::or(x, y),
        },
        Formula::Implies(a, b) => match (simplify_bool(a), simplify_bool(b)) {
            (Formula::True, x) => x,
            (Formula::False, _) => Formula::True,
            (_, Formula::True) => Formula::True,
            (x, Formula::False) => simplify_bool(&Formula::not(x)),
            (x, y) => Formula::implies(x, y),
        },
    }
}

/// Value-preserving arithmetic rewrites: unit/zero laws, literal folding,
/// MIN/MAX of equal operands, double negation.
pub fn simplify_arith(e: &Expr) -> Expr {
    match e {
        Expr::Var(_) | Expr::Lit(_) | Expr::Pi => e.clone(),
        Expr::Unary(op, a) => {
            let a = simplify_arith(a);
            match (op, &a) {
                (UnOp::Neg, Expr::Lit(q)) => Expr::Lit(-q.clone()),
                (UnOp::Neg, Expr::Unary(UnOp::Neg, inner)) => (**inner).clone(),
                (UnOp::Abs, Expr::Lit(q)) => Expr::Lit(q.clone().abs()),
                _ => Expr::Unary(*op, Box::new(a)),
            }
        }
        Expr::Binary(op, a, b) => {
            let a = simplify_arith(a);
            let b = simplify_arith(b);
            if let (Expr::Lit(p), Expr::Lit(q)) = (&a, &b) {
                if let Some(v) = fold_literals(*op, p, q) {
                    return Expr::Lit(v);
                }
            }
            let zero = Scalar::from(0);
            let one = Scalar::from(1);
            match op {
                BinOp::Add => {
                    if matches!(&a, Expr::Lit(q) if *q == zero) {
                        return b;
                    }
                    if matches!(&b, Expr::Lit(q) if *q == zero) {
                        return a;
                    }
                }
                BinOp::Sub => {
                    if matches!(&b, Expr::Lit(q) if *q == zero) {
                        return a;
                    }
                }
                BinOp::Mul => {
                    if matches!(&a, Expr::Lit(q) if *q == one) {
                        return b;
                    }
                    if matches!(&b, Expr::Lit(q) if *q == one) {
                        return a;
                    }
                    // x·0 -> 0 only when the other operand is total
                    // everywhere; a partial operation could make the point
                    // undefined rather than zero.
                    if matches!(&a, Expr::Lit(q) if *q == zero) && !b.contains_partial_op() {
                        return Expr::Lit(zero);
                    }
                    if matches!(&b, Expr::Lit(q) if *q == zero) && !a.contains_partial_op() {
                        return Expr::Lit(zero);
                    }
                }
                BinOp::Div => {
                    if matches!(&b, Expr::Lit(q) if *q == one) {
                        return a;
                    }
                }
                BinOp::Min | BinOp::Max => {
                    if a == b {
                        return a;
                    }
                }
                BinOp::Mod => {}
            }
            Expr::Binary(*op, Box::new(a), Box::new(b))
        }
        Expr::Pow(a, n) => {
            let a = simplify_arith(a);
            if *n == 1 {
                return a;
            }
            if let Expr::Lit(q) = &a {
                return Expr::Lit(q.clone().pow(*n));
            }
            Expr::Pow(Box::new(a), *n)
        }
        Expr::RoundFp { format, mode, arg } => Expr::RoundFp {
            format: *format,
            mode: *mode,
            arg: Box::new(simplify_arith(arg)),
        },
        Expr::RoundToInt { mode, arg } => Expr::RoundToInt {
            mode: *mode,
            arg: Box::new(simplify_arith(arg)),
        },
    }
}

fn fold_literals(op: BinOp, p: &Scalar, q: &Scalar) -> Option<Scalar> {
    match op {
        BinOp::Add => Some(Scalar::from(p + q.clone())),
        BinOp::Sub => Some(Scalar::from(p - q.clone())),
        BinOp::Mul => Some(Scalar::from(p * q.clone())),
        BinOp::Div => (*q != 0).then(|| Scalar::from(p / q.clone())),
        BinOp::Min => Some(p.clone().min(q.clone())),
        BinOp::Max => Some(p.clone().max(q.clone())),
        BinOp::Mod => (*q != 0).then(|| euclid_mod(p, q)),
    }
}

/// One candidate defining equation for a variable.
struct Definition {
    var: String,
    rhs: Expr,
    size: usize,
    rendered: String,
}

fn definition_of(f: &Formula) -> Option<(String, Expr)> {
    let Formula::Atom(Rel::Eq, lhs, rhs) = f else { return None };
    match (lhs, rhs) {
        (Expr::Var(v), e) if !e.mentions_var(v) => Some((v.clone(), e.clone())),
        (e, Expr::Var(v)) if !e.mentions_var(v) => Some((v.clone(), e.clone())),
        _ => None,
    }
}

/// Substitutes variable-defining equations found as positive top-level
/// conjuncts. Each variable is processed once per call; with several
/// definitions the one with the fewest IR nodes wins (printed form breaks
/// ties). The defining conjunct itself stays and degenerates under
/// simplification.
pub fn substitute_definitions(nvc: &ProcessedNvc) -> ProcessedNvc {
    let mut out = nvc.clone();
    let mut done: Vec<String> = Vec::new();
    loop {
        // Collect candidate definitions from the current assertion list.
        let mut best: Option<Definition> = None;
        for a in &out.assertions {
            for conj in a.conjuncts() {
                let Some((var, rhs)) = definition_of(conj) else { continue };
                if done.contains(&var) {
                    continue;
                }
                let cand = Definition {
                    size: rhs.node_count(),
                    rendered: rhs.to_string(),
                    var,
                    rhs,
                };
                best = match best {
                    None => Some(cand),
                    Some(prev) => {
                        if cand.var == prev.var
                            && (cand.size, &cand.rendered) < (prev.size, &prev.rendered)
                        {
                            Some(cand)
                        } else {
                            Some(prev)
                        }
                    }
                };
            }
        }
        let Some(def) = best else { break };
        for a in &mut out.assertions {
            *a = a.substitute(&def.var, &def.rhs);
        }
        done.push(def.var);
    }
    out
}

/// Iterates boolean reduction, definition substitution and arithmetic
/// rewrites until the NVC hash stabilizes (or the round cap is reached).
/// Top-level conjunctions split into separate assertions, `true` conjuncts
/// disappear, and a `false` conjunct collapses the whole NVC.
pub fn simplify_fixpoint(nvc: &ProcessedNvc) -> ProcessedNvc {
    let mut current = nvc.clone();
    for _ in 0..MAX_ROUNDS {
        let before = current.structural_hash();
        let mut next = substitute_definitions(&current);

        let mut assertions = Vec::new();
        let mut contradiction = false;
        for a in &next.assertions {
            let s = simplify_bool(a);
            for conj in s.conjuncts() {
                match conj {
                    Formula::True => {}
                    Formula::False => contradiction = true,
                    other => assertions.push(other.clone()),
                }
            }
        }
        if contradiction {
            assertions = vec![Formula::False];
        }
        next.assertions = assertions;

        next.record("simplify", before);
        if next.structural_hash() == before {
            return next;
        }
        current = next;
    }
    current
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nvc::{Sort, VarSpec};

    fn nvc_with(assertions: Vec<Formula>, vars: &[&str]) -> ProcessedNvc {
        ProcessedNvc::new(
            vars.iter().map(|v| VarSpec::unbounded(*v, Sort::Real)).collect(),
            assertions,
        )
    }

    #[test]
    fn vacuous_proposition_reduces() {
        // (not phi or true) and (phi or false) -> phi
        let phi = Formula::le(Expr::int(0), Expr::var("x"));
        let f = Formula::and(
            Formula::or(Formula::not(phi.clone()), Formula::True),
            Formula::or(phi.clone(), Formula::False),
        );
        assert_eq!(simplify_bool(&f), phi);
    }

    #[test]
    fn reflexive_equality() {
        let e = Expr::add(Expr::var("x"), Expr::int(1));
        assert_eq!(simplify_bool(&Formula::eq(e.clone(), e)), Formula::True);
    }

    #[test]
    fn double_negation() {
        let phi = Formula::le(Expr::int(0), Expr::var("x"));
        assert_eq!(simplify_bool(&Formula::not(Formula::not(phi.clone()))), phi);
    }

    #[test]
    fn ge_normalizes_to_le() {
        let f = Formula::ge(Expr::var("x"), Expr::int(0));
        assert_eq!(
            simplify_bool(&f),
            Formula::le(Expr::int(0), Expr::var("x"))
        );
    }

    #[test]
    fn arith_unit_laws() {
        let phi = Expr::var("phi");
        assert_eq!(simplify_arith(&Expr::div(phi.clone(), Expr::int(1))), phi);
        assert_eq!(simplify_arith(&Expr::mul(phi.clone(), Expr::int(1))), phi);
        assert_eq!(simplify_arith(&Expr::add(phi.clone(), Expr::int(0))), phi);
        assert_eq!(
            simplify_arith(&Expr::add(Expr::int(0), Expr::int(1))),
            Expr::int(1)
        );
        assert_eq!(simplify_arith(&Expr::min(phi.clone(), phi.clone())), phi);
        assert_eq!(simplify_arith(&Expr::max(phi.clone(), phi.clone())), phi);
    }

    #[test]
    fn mul_zero_guarded_by_partiality() {
        let total = Expr::sin(Expr::var("x"));
        assert_eq!(
            simplify_arith(&Expr::mul(Expr::int(0), total)),
            Expr::int(0)
        );
        let partial = Expr::div(Expr::int(1), Expr::var("x"));
        let e = Expr::mul(Expr::int(0), partial);
        assert_eq!(simplify_arith(&e), e);
    }

    #[test]
    fn substitution_picks_shortest() {
        // {x = 1, x = 0+1, Q(x)} -> {1 = 1, 1 = 0+1, Q(1)}
        let nvc = nvc_with(
            vec![
                Formula::eq(Expr::var("x"), Expr::int(1)),
                Formula::eq(Expr::var("x"), Expr::add(Expr::int(0), Expr::int(1))),
                Formula::le(Expr::var("x"), Expr::int(5)),
            ],
            &["x"],
        );
        let out = substitute_definitions(&nvc);
        assert_eq!(
            out.assertions,
            vec![
                Formula::eq(Expr::int(1), Expr::int(1)),
                Formula::eq(Expr::int(1), Expr::add(Expr::int(0), Expr::int(1))),
                Formula::le(Expr::int(1), Expr::int(5)),
            ]
        );
    }

    #[test]
    fn chained_definition_replaces_occurrences() {
        // {i = i1+1, P(i)} -> {i1+1 = i1+1, P(i1+1)}
        let def = Formula::eq(Expr::var("i"), Expr::add(Expr::var("i1"), Expr::int(1)));
        let use_site = Formula::le(Expr::var("i"), Expr::int(10));
        let nvc = nvc_with(vec![def, use_site], &["i", "i1"]);
        let out = substitute_definitions(&nvc);
        let i1p1 = Expr::add(Expr::var("i1"), Expr::int(1));
        assert_eq!(
            out.assertions,
            vec![
                Formula::eq(i1p1.clone(), i1p1.clone()),
                Formula::le(i1p1, Expr::int(10)),
            ]
        );
    }

    #[test]
    fn circular_definition_untouched() {
        let f = Formula::eq(Expr::var("x"), Expr::add(Expr::var("x"), Expr::int(1)));
        let nvc = nvc_with(vec![f.clone()], &["x"]);
        let out = substitute_definitions(&nvc);
        assert_eq!(out.assertions, vec![f]);
    }

    #[test]
    fn fixpoint_two_step_chain() {
        // {a = b, b = 1, P(a)} resolves to P(1) within two rounds.
        let nvc = nvc_with(
            vec![
                Formula::eq(Expr::var("a"), Expr::var("b")),
                Formula::eq(Expr::var("b"), Expr::int(1)),
                Formula::le(Expr::var("a"), Expr::int(5)),
            ],
            &["a", "b"],
        );
        let out = simplify_fixpoint(&nvc);
        // P(a) became 1 <= 5, which folds to true and disappears.
        assert!(out.assertions.is_empty());
    }

    #[test]
    fn fixpoint_idempotent_on_minimal() {
        let nvc = nvc_with(
            vec![Formula::not(Formula::le(Expr::sin(Expr::var("x")), Expr::int(0)))],
            &["x"],
        );
        let once = simplify_fixpoint(&nvc);
        assert_eq!(once.assertions, nvc.assertions);
        let twice = simplify_fixpoint(&once);
        assert_eq!(once.assertions, twice.assertions);
    }

    #[test]
    fn contradiction_collapses() {
        let nvc = nvc_with(
            vec![
                Formula::lt(Expr::int(1), Expr::int(0)),
                Formula::le(Expr::var("x"), Expr::int(5)),
            ],
            &["x"],
        );
        let out = simplify_fixpoint(&nvc);
        assert_eq!(out.assertions, vec![Formula::False]);
    }

    #[test]
    fn and_splitting() {
        let nvc = nvc_with(
            vec![Formula::and(
                Formula::le(Expr::lit(Scalar::from((-1, 2))), Expr::var("x")),
                Formula::le(Expr::var("x"), Expr::lit(Scalar::from((1, 2)))),
            )],
            &["x"],
        );
        let out = simplify_fixpoint(&nvc);
        assert_eq!(out.assertions.len(), 2);
    }
}
