//! Term-level IR: real, integer and floating-point-rounded expressions.
//!
//! A `RoundFp` node marks a rounding point: its argument denotes the exact
//! value and the node denotes the rounded result, so `x (+) y` in FP
//! arithmetic is encoded as `RoundFp(fmt, mode, Add(x, y))`.

use crate::fp_format::{FloatFormat, IntRoundMode, RoundMode};
use crate::scalar::{render_scalar, Scalar};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnOp {
    Neg,
    Abs,
    Sqrt,
    Sin,
    Cos,
    Exp,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Min,
    Max,
    Mod,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(String),
    Lit(Scalar),
    Pi,
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    /// Integer power with a literal non-negative exponent.
    Pow(Box<Expr>, u32),
    RoundFp {
        format: FloatFormat,
        mode: RoundMode,
        arg: Box<Expr>,
    },
    RoundToInt {
        mode: IntRoundMode,
        arg: Box<Expr>,
    },
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn lit(v: impl Into<Scalar>) -> Expr {
        Expr::Lit(v.into())
    }

    pub fn int(v: i64) -> Expr {
        Expr::Lit(Scalar::from(v))
    }

    pub fn neg(e: Expr) -> Expr {
        Expr::Unary(UnOp::Neg, Box::new(e))
    }

    pub fn abs(e: Expr) -> Expr {
        Expr::Unary(UnOp::Abs, Box::new(e))
    }

    pub fn sqrt(e: Expr) -> Expr {
        Expr::Unary(UnOp::Sqrt, Box::new(e))
    }

    pub fn sin(e: Expr) -> Expr {
        Expr::Unary(UnOp::Sin, Box::new(e))
    }

    pub fn cos(e: Expr) -> Expr {
        Expr::Unary(UnOp::Cos, Box::new(e))
    }

    pub fn exp(e: Expr) -> Expr {
        Expr::Unary(UnOp::Exp, Box::new(e))
    }

    pub fn log(e: Expr) -> Expr {
        Expr::Unary(UnOp::Log, Box::new(e))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Binary(BinOp::Add, Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Binary(BinOp::Sub, Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Binary(BinOp::Mul, Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Binary(BinOp::Div, Box::new(a), Box::new(b))
    }

    pub fn min(a: Expr, b: Expr) -> Expr {
        Expr::Binary(BinOp::Min, Box::new(a), Box::new(b))
    }

    pub fn max(a: Expr, b: Expr) -> Expr {
        Expr::Binary(BinOp::Max, Box::new(a), Box::new(b))
    }

    pub fn modulo(a: Expr, b: Expr) -> Expr {
        Expr::Binary(BinOp::Mod, Box::new(a), Box::new(b))
    }

    pub fn pow(e: Expr, n: u32) -> Expr {
        Expr::Pow(Box::new(e), n)
    }

    pub fn round_fp(format: FloatFormat, mode: RoundMode, arg: Expr) -> Expr {
        Expr::RoundFp { format, mode, arg: Box::new(arg) }
    }

    pub fn round_to_int(mode: IntRoundMode, arg: Expr) -> Expr {
        Expr::RoundToInt { mode, arg: Box::new(arg) }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Var(n) => {
                out.insert(n.clone());
            }
            Expr::Lit(_) | Expr::Pi => {}
            Expr::Unary(_, a) | Expr::Pow(a, _) => a.collect_vars(out),
            Expr::Binary(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::RoundFp { arg, .. } | Expr::RoundToInt { arg, .. } => arg.collect_vars(out),
        }
    }

    pub fn mentions_var(&self, name: &str) -> bool {
        match self {
            Expr::Var(n) => n == name,
            Expr::Lit(_) | Expr::Pi => false,
            Expr::Unary(_, a) | Expr::Pow(a, _) => a.mentions_var(name),
            Expr::Binary(_, a, b) => a.mentions_var(name) || b.mentions_var(name),
            Expr::RoundFp { arg, .. } | Expr::RoundToInt { arg, .. } => arg.mentions_var(name),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Var(_) | Expr::Lit(_) | Expr::Pi => 1,
            Expr::Unary(_, a) | Expr::Pow(a, _) => 1 + a.node_count(),
            Expr::Binary(_, a, b) => 1 + a.node_count() + b.node_count(),
            Expr::RoundFp { arg, .. } | Expr::RoundToInt { arg, .. } => 1 + arg.node_count(),
        }
    }

    pub fn contains_round_fp(&self) -> bool {
        match self {
            Expr::Var(_) | Expr::Lit(_) | Expr::Pi => false,
            Expr::Unary(_, a) | Expr::Pow(a, _) => a.contains_round_fp(),
            Expr::Binary(_, a, b) => a.contains_round_fp() || b.contains_round_fp(),
            Expr::RoundFp { .. } => true,
            Expr::RoundToInt { arg, .. } => arg.contains_round_fp(),
        }
    }

    /// Returns true when the expression contains any partial operation whose
    /// definedness depends on its inputs (division, log, sqrt, mod).
    pub fn contains_partial_op(&self) -> bool {
        match self {
            Expr::Var(_) | Expr::Lit(_) | Expr::Pi => false,
            Expr::Unary(op, a) => {
                matches!(op, UnOp::Sqrt | UnOp::Log) || a.contains_partial_op()
            }
            Expr::Binary(op, a, b) => {
                matches!(op, BinOp::Div | BinOp::Mod)
                    || a.contains_partial_op()
                    || b.contains_partial_op()
            }
            Expr::Pow(a, _) => a.contains_partial_op(),
            Expr::RoundFp { arg, .. } | Expr::RoundToInt { arg, .. } => arg.contains_partial_op(),
        }
    }

    /// Same tree with every rounding node stripped to its exact argument.
    pub fn strip_round_fp(&self) -> Expr {
        match self {
            Expr::Var(_) | Expr::Lit(_) | Expr::Pi => self.clone(),
            Expr::Unary(op, a) => Expr::Unary(*op, Box::new(a.strip_round_fp())),
            Expr::Binary(op, a, b) => {
                Expr::Binary(*op, Box::new(a.strip_round_fp()), Box::new(b.strip_round_fp()))
            }
            Expr::Pow(a, n) => Expr::Pow(Box::new(a.strip_round_fp()), *n),
            Expr::RoundFp { arg, .. } => arg.strip_round_fp(),
            Expr::RoundToInt { mode, arg } => {
                Expr::RoundToInt { mode: *mode, arg: Box::new(arg.strip_round_fp()) }
            }
        }
    }

    /// Replaces every occurrence of a variable by a replacement expression.
    pub fn substitute(&self, name: &str, replacement: &Expr) -> Expr {
        match self {
            Expr::Var(n) if n == name => replacement.clone(),
            Expr::Var(_) | Expr::Lit(_) | Expr::Pi => self.clone(),
            Expr::Unary(op, a) => Expr::Unary(*op, Box::new(a.substitute(name, replacement))),
            Expr::Binary(op, a, b) => Expr::Binary(
                *op,
                Box::new(a.substitute(name, replacement)),
                Box::new(b.substitute(name, replacement)),
            ),
            Expr::Pow(a, n) => Expr::Pow(Box::new(a.substitute(name, replacement)), *n),
            Expr::RoundFp { format, mode, arg } => Expr::RoundFp {
                format: *format,
                mode: *mode,
                arg: Box::new(arg.substitute(name, replacement)),
            },
            Expr::RoundToInt { mode, arg } => Expr::RoundToInt {
                mode: *mode,
                arg: Box::new(arg.substitute(name, replacement)),
            },
        }
    }
}

impl BinOp {
    pub fn symbol(&self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Min => "min",
            BinOp::Max => "max",
            BinOp::Mod => "mod",
        }
    }
}

impl UnOp {
    pub fn symbol(&self) -> &'static str {
        match self {
            UnOp::Neg => "-",
            UnOp::Abs => "abs",
            UnOp::Sqrt => "sqrt",
            UnOp::Sin => "sin",
            UnOp::Cos => "cos",
            UnOp::Exp => "exp",
            UnOp::Log => "log",
        }
    }
}

/// Canonical s-expression rendering; round-trips through the frontend.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(n) => write!(f, "{n}"),
            Expr::Lit(q) => {
                if *q < 0 {
                    write!(f, "(- {})", render_scalar(&-q.clone()))
                } else {
                    write!(f, "{}", render_scalar(q))
                }
            }
            Expr::Pi => write!(f, "pi"),
            Expr::Unary(op, a) => write!(f, "({} {a})", op.symbol()),
            Expr::Binary(op, a, b) => write!(f, "({} {a} {b})", op.symbol()),
            Expr::Pow(a, n) => write!(f, "(pow {a} {n})"),
            Expr::RoundFp { format, mode, arg } => {
                // Binary FP operations print in their fp.* form so processed
                // output re-parses to the identical tree.
                if let Expr::Binary(op, a, b) = arg.as_ref() {
                    if matches!(op, BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div) {
                        let name = match op {
                            BinOp::Add => "add",
                            BinOp::Sub => "sub",
                            BinOp::Mul => "mul",
                            BinOp::Div => "div",
                            _ => unreachable!(),
                        };
                        return write!(f, "(fp{}.{name} {} {a} {b})", fp_tag(*format), mode.token());
                    }
                }
                write!(f, "({} {} {arg})", rnd_name(*format), mode.token())
            }
            Expr::RoundToInt { mode, arg } => {
                write!(f, "(round_to_int {} {arg})", mode.token())
            }
        }
    }
}

fn rnd_name(fmt: FloatFormat) -> &'static str {
    match fmt {
        FloatFormat::Single => "rnd32",
        FloatFormat::Double => "rnd64",
    }
}

fn fp_tag(fmt: FloatFormat) -> &'static str {
    match fmt {
        FloatFormat::Single => "32",
        FloatFormat::Double => "64",
    }
}
