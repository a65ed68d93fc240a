//! Propositional IR over term atoms.
//!
//! Atoms compare expressions under exact real semantics; rounding nodes keep
//! their meaning inside atom sides.

use crate::expr::Expr;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Le,
    Lt,
    Ge,
    Gt,
    Eq,
}

impl Rel {
    pub fn symbol(&self) -> &'static str {
        match self {
            Rel::Le => "<=",
            Rel::Lt => "<",
            Rel::Ge => ">=",
            Rel::Gt => ">",
            Rel::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Rel, Expr, Expr),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(rel: Rel, lhs: Expr, rhs: Expr) -> Formula {
        Formula::Atom(rel, lhs, rhs)
    }

    pub fn le(lhs: Expr, rhs: Expr) -> Formula {
        Formula::Atom(Rel::Le, lhs, rhs)
    }

    pub fn lt(lhs: Expr, rhs: Expr) -> Formula {
        Formula::Atom(Rel::Lt, lhs, rhs)
    }

    pub fn ge(lhs: Expr, rhs: Expr) -> Formula {
        Formula::Atom(Rel::Ge, lhs, rhs)
    }

    pub fn gt(lhs: Expr, rhs: Expr) -> Formula {
        Formula::Atom(Rel::Gt, lhs, rhs)
    }

    pub fn eq(lhs: Expr, rhs: Expr) -> Formula {
        Formula::Atom(Rel::Eq, lhs, rhs)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Not(f) => f.collect_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn mentions_var(&self, name: &str) -> bool {
        match self {
            Formula::True | Formula::False => false,
            Formula::Atom(_, a, b) => a.mentions_var(name) || b.mentions_var(name),
            Formula::Not(f) => f.mentions_var(name),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.mentions_var(name) || b.mentions_var(name)
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Formula::True | Formula::False => 1,
            Formula::Atom(_, a, b) => 1 + a.node_count() + b.node_count(),
            Formula::Not(f) => 1 + f.node_count(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.node_count() + b.node_count()
            }
        }
    }

    pub fn contains_round_fp(&self) -> bool {
        match self {
            Formula::True | Formula::False => false,
            Formula::Atom(_, a, b) => a.contains_round_fp() || b.contains_round_fp(),
            Formula::Not(f) => f.contains_round_fp(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.contains_round_fp() || b.contains_round_fp()
            }
        }
    }

    pub fn substitute(&self, name: &str, replacement: &Expr) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(rel, a, b) => Formula::Atom(
                *rel,
                a.substitute(name, replacement),
                b.substitute(name, replacement),
            ),
            Formula::Not(f) => Formula::not(f.substitute(name, replacement)),
            Formula::And(a, b) => {
                Formula::and(a.substitute(name, replacement), b.substitute(name, replacement))
            }
            Formula::Or(a, b) => {
                Formula::or(a.substitute(name, replacement), b.substitute(name, replacement))
            }
            Formula::Implies(a, b) => {
                Formula::implies(a.substitute(name, replacement), b.substitute(name, replacement))
            }
        }
    }

    /// Top-level conjuncts of this formula (descends through `And` only).
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn walk<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            match f {
                Formula::And(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    /// Visits every atom together with its polarity relative to this formula
    /// (true = positive: strengthening the atom strengthens the formula).
    pub fn visit_atoms_polarity(&self, positive: bool, visit: &mut impl FnMut(&Formula, bool)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(..) => visit(self, positive),
            Formula::Not(f) => f.visit_atoms_polarity(!positive, visit),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit_atoms_polarity(positive, visit);
                b.visit_atoms_polarity(positive, visit);
            }
            Formula::Implies(a, b) => {
                a.visit_atoms_polarity(!positive, visit);
                b.visit_atoms_polarity(positive, visit);
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(rel, a, b) => write!(f, "({} {a} {b})", rel.symbol()),
            Formula::Not(x) => write!(f, "(not {x})"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
            Formula::Implies(a, b) => write!(f, "(=> {a} {b})"),
        }
    }
}
