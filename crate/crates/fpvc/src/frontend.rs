//! Translation of SMT-LIB-subset files into [`ProcessedNvc`].
//!
//! Only assertions and type declarations matter; definitions of axiomatized
//! arithmetic and transcendental functions are ignored in favour of built-in
//! interpretations. Functions are interpreted by name. Assertions using
//! anything outside the supported set are dropped, which only weakens the
//! conjunction and is therefore safe for proving.

use crate::expr::{BinOp, Expr};
use crate::formula::{Formula, Rel};
use crate::fp_format::{FloatFormat, IntRoundMode, RoundMode};
use crate::nvc::{ProcessedNvc, Sort, VarSpec};
use crate::scalar::{parse_scalar, pow2, Scalar};
use crate::sexpr::{parse_sexprs, SExpr, SExprError};
use rug::Integer;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DropReason {
    UnsupportedFunction,
    MixedPrecision,
    UnknownSort,
}

impl DropReason {
    pub fn describe(&self) -> &'static str {
        match self {
            DropReason::UnsupportedFunction => "unsupported function",
            DropReason::MixedPrecision => "mixed precision",
            DropReason::UnknownSort => "unknown sort",
        }
    }
}

/// Outcome bookkeeping of one parse: kept + |dropped| equals the number of
/// assertions in the input.
#[derive(Debug, Clone, Default)]
pub struct ParseReport {
    pub kept: usize,
    pub dropped: Vec<(usize, DropReason)>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Error)]
pub enum FrontendError {
    #[error(transparent)]
    Syntax(#[from] SExprError),
    #[error("input contains no assertions")]
    NoAssertions,
    #[error("malformed declaration: {0}")]
    BadDeclaration(String),
    #[error("line {0}: malformed bounds declaration: {1}")]
    BadBoundsLine(usize, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TranslateError {
    Unsupported(String),
    MixedPrecision,
    UnknownSort(String),
    NonFiniteLiteral,
}

impl TranslateError {
    fn drop_reason(&self) -> DropReason {
        match self {
            TranslateError::Unsupported(_) | TranslateError::NonFiniteLiteral => {
                DropReason::UnsupportedFunction
            }
            TranslateError::MixedPrecision => DropReason::MixedPrecision,
            TranslateError::UnknownSort(_) => DropReason::UnknownSort,
        }
    }
}

/// Declared symbols of one input file.
#[derive(Debug, Clone, Default)]
pub struct DeclEnv {
    pub vars: BTreeMap<String, Sort>,
    /// Variables declared with a sort we do not model.
    pub unknown_vars: BTreeSet<String>,
    /// Return sorts of declared non-nullary functions (for `of_int` and
    /// friends whose meaning depends on the return type).
    pub fn_returns: BTreeMap<String, Sort>,
}

fn parse_sort(s: &SExpr) -> Option<Sort> {
    match s {
        SExpr::Atom(name) => match name.as_str() {
            "Real" => Some(Sort::Real),
            "Int" => Some(Sort::Int),
            "Float32" => Some(Sort::Float(FloatFormat::Single)),
            "Float64" => Some(Sort::Float(FloatFormat::Double)),
            _ => None,
        },
        SExpr::List(items) => {
            let tags: Vec<&str> = items.iter().filter_map(|i| i.as_atom()).collect();
            match tags.as_slice() {
                ["_", "FloatingPoint", "8", "24"] => Some(Sort::Float(FloatFormat::Single)),
                ["_", "FloatingPoint", "11", "53"] => Some(Sort::Float(FloatFormat::Double)),
                _ => None,
            }
        }
    }
}

/// Extracts declarations and assertions from an SMT-LIB command forest.
pub fn extract_nvc(forest: &[SExpr]) -> Result<(ProcessedNvc, ParseReport), FrontendError> {
    let mut env = DeclEnv::default();
    let mut report = ParseReport::default();
    let mut asserts = Vec::new();

    for cmd in forest {
        let Some(items) = cmd.as_list() else { continue };
        let Some(head) = items.first().and_then(|h| h.as_atom()) else { continue };
        match head {
            "declare-fun" | "declare-const" => {
                let Some(name) = items.get(1).and_then(|n| n.as_atom()) else {
                    return Err(FrontendError::BadDeclaration(cmd.to_string()));
                };
                let (args, ret) = if head == "declare-const" {
                    (None, items.get(2))
                } else {
                    (items.get(2).and_then(|a| a.as_list()), items.get(3))
                };
                let Some(ret) = ret else {
                    return Err(FrontendError::BadDeclaration(cmd.to_string()));
                };
                let nullary = args.map(|a| a.is_empty()).unwrap_or(true);
                match parse_sort(ret) {
                    Some(sort) if nullary => {
                        env.vars.insert(name.to_string(), sort);
                    }
                    Some(sort) => {
                        env.fn_returns.insert(name.to_string(), sort);
                    }
                    None if nullary => {
                        env.unknown_vars.insert(name.to_string());
                    }
                    None => {
                        // Function over an unmodelled sort; calls to it are
                        // interpreted by name or dropped.
                    }
                }
            }
            // Bodies of axiomatized functions are ignored entirely; provers
            // use their built-in interpretations.
            "define-fun" => {}
            "assert" => {
                if let Some(body) = items.get(1) {
                    asserts.push(body.clone());
                }
            }
            _ => {}
        }
    }

    if asserts.is_empty() {
        return Err(FrontendError::NoAssertions);
    }

    let mut formulas = Vec::new();
    for (idx, body) in asserts.iter().enumerate() {
        match translate_assertion(body, &env, &mut report.warnings) {
            Ok(f) => {
                formulas.push(f);
                report.kept += 1;
            }
            Err(e) => report.dropped.push((idx, e.drop_reason())),
        }
    }

    let vars = env
        .vars
        .iter()
        .map(|(name, sort)| VarSpec::unbounded(name.clone(), *sort))
        .collect();
    Ok((ProcessedNvc::new(vars, formulas), report))
}

/// Reads an `.smt2` file's text into an NVC.
pub fn read_smt2(text: &str) -> Result<(ProcessedNvc, ParseReport), FrontendError> {
    let forest = parse_sexprs(text)?;
    extract_nvc(&forest)
}

#[derive(Debug, Clone)]
enum Binding {
    Term(Expr),
    Prop(Formula),
}

struct Translator<'a> {
    env: &'a DeclEnv,
    lets: Vec<(String, Binding)>,
    warnings: &'a mut Vec<String>,
}

/// Translates one assertion body into a formula.
pub fn translate_assertion(
    s: &SExpr,
    env: &DeclEnv,
    warnings: &mut Vec<String>,
) -> Result<Formula, TranslateError> {
    let mut tr = Translator { env, lets: Vec::new(), warnings };
    tr.formula(s)
}

impl<'a> Translator<'a> {
    fn lookup_let(&self, name: &str) -> Option<&Binding> {
        self.lets.iter().rev().find(|(n, _)| n == name).map(|(_, b)| b)
    }

    fn formula(&mut self, s: &SExpr) -> Result<Formula, TranslateError> {
        match s {
            SExpr::Atom(a) => match a.as_str() {
                "true" => Ok(Formula::True),
                "false" => Ok(Formula::False),
                _ => {
                    if let Some(Binding::Prop(f)) = self.lookup_let(a) {
                        return Ok(f.clone());
                    }
                    Err(TranslateError::Unsupported(a.clone()))
                }
            },
            SExpr::List(items) => {
                let Some(head) = items.first().and_then(|h| h.as_atom()) else {
                    return Err(TranslateError::Unsupported(s.to_string()));
                };
                let args = &items[1..];
                match head {
                    "and" => self.fold_connective(args, Formula::and, Formula::True),
                    "or" => self.fold_connective(args, Formula::or, Formula::False),
                    "not" => {
                        let [x] = args else {
                            return Err(TranslateError::Unsupported("not arity".into()));
                        };
                        Ok(Formula::not(self.formula(x)?))
                    }
                    "=>" | "implies" => {
                        if args.len() < 2 {
                            return Err(TranslateError::Unsupported("=> arity".into()));
                        }
                        // Right-associative chain.
                        let mut out = self.formula(args.last().unwrap())?;
                        for a in args[..args.len() - 1].iter().rev() {
                            out = Formula::implies(self.formula(a)?, out);
                        }
                        Ok(out)
                    }
                    "<=" | "<" | ">=" | ">" => {
                        let rel = match head {
                            "<=" => Rel::Le,
                            "<" => Rel::Lt,
                            ">=" => Rel::Ge,
                            _ => Rel::Gt,
                        };
                        if args.len() != 2 {
                            return Err(TranslateError::Unsupported(format!("{head} arity")));
                        }
                        Ok(Formula::atom(rel, self.term(&args[0])?, self.term(&args[1])?))
                    }
                    "=" => {
                        if args.len() != 2 {
                            return Err(TranslateError::Unsupported("= arity".into()));
                        }
                        // Term equality first; boolean equality becomes iff.
                        match (self.term(&args[0]), self.term(&args[1])) {
                            (Ok(a), Ok(b)) => Ok(Formula::eq(a, b)),
                            _ => {
                                let a = self.formula(&args[0])?;
                                let b = self.formula(&args[1])?;
                                Ok(Formula::and(
                                    Formula::implies(a.clone(), b.clone()),
                                    Formula::implies(b, a),
                                ))
                            }
                        }
                    }
                    "ite" => {
                        let [c, t, e] = args else {
                            return Err(TranslateError::Unsupported("ite arity".into()));
                        };
                        // Boolean selection only; term-level ite is not
                        // modelled.
                        let c = self.formula(c)?;
                        let t = self.formula(t)?;
                        let e = self.formula(e)?;
                        Ok(Formula::and(
                            Formula::implies(c.clone(), t),
                            Formula::implies(Formula::not(c), e),
                        ))
                    }
                    "let" => self.with_lets(args, |tr, body| tr.formula(body)),
                    "isFiniteFloat" => {
                        let [arg] = args else {
                            return Err(TranslateError::Unsupported("isFiniteFloat arity".into()));
                        };
                        let fmt = match infer_fp_format(std::slice::from_ref(arg), self.env) {
                            FpInference::Format(f) => f,
                            FpInference::Mixed => return Err(TranslateError::MixedPrecision),
                        };
                        let e = self.term(arg)?;
                        Ok(Formula::and(
                            Formula::le(Expr::Lit(fmt.min_finite()), e.clone()),
                            Formula::le(e, Expr::Lit(fmt.max_finite())),
                        ))
                    }
                    "forall" | "exists" => Err(TranslateError::Unsupported(head.to_string())),
                    _ => Err(TranslateError::Unsupported(head.to_string())),
                }
            }
        }
    }

    fn fold_connective(
        &mut self,
        args: &[SExpr],
        join: fn(Formula, Formula) -> Formula,
        empty: Formula,
    ) -> Result<Formula, TranslateError> {
        let mut parts = args.iter();
        let Some(first) = parts.next() else { return Ok(empty) };
        let mut out = self.formula(first)?;
        for p in parts {
            out = join(out, self.formula(p)?);
        }
        Ok(out)
    }

    fn with_lets<T>(
        &mut self,
        args: &[SExpr],
        body_fn: impl FnOnce(&mut Self, &SExpr) -> Result<T, TranslateError>,
    ) -> Result<T, TranslateError> {
        let [bindings, body] = args else {
            return Err(TranslateError::Unsupported("let arity".into()));
        };
        let Some(bindings) = bindings.as_list() else {
            return Err(TranslateError::Unsupported("let bindings".into()));
        };
        let mut pushed = 0;
        for b in bindings {
            let Some([name, value]) = b.as_list() else {
                return Err(TranslateError::Unsupported("let binding".into()));
            };
            let Some(name) = name.as_atom() else {
                return Err(TranslateError::Unsupported("let binding name".into()));
            };
            let bound = match self.term(value) {
                Ok(e) => Binding::Term(e),
                Err(_) => Binding::Prop(self.formula(value)?),
            };
            self.lets.push((name.to_string(), bound));
            pushed += 1;
        }
        let out = body_fn(self, body);
        self.lets.truncate(self.lets.len() - pushed);
        out
    }

    fn round_mode(&mut self, s: &SExpr) -> RoundMode {
        let tok = s.as_atom().unwrap_or("");
        RoundMode::from_token(tok).unwrap_or_else(|| {
            self.warnings
                .push(format!("unknown rounding mode '{tok}', defaulting to RNE"));
            RoundMode::NearestEven
        })
    }

    fn term(&mut self, s: &SExpr) -> Result<Expr, TranslateError> {
        match s {
            SExpr::Atom(a) => {
                if let Some(binding) = self.lookup_let(a) {
                    return match binding {
                        Binding::Term(e) => Ok(e.clone()),
                        Binding::Prop(_) => Err(TranslateError::Unsupported(a.clone())),
                    };
                }
                if self.env.vars.contains_key(a) {
                    return Ok(Expr::var(a.clone()));
                }
                if self.env.unknown_vars.contains(a) {
                    return Err(TranslateError::UnknownSort(a.clone()));
                }
                if a == "pi" || a == "real_pi" {
                    return Ok(Expr::Pi);
                }
                if let Some(q) = parse_scalar(a) {
                    return Ok(Expr::Lit(q));
                }
                Err(TranslateError::Unsupported(a.clone()))
            }
            SExpr::List(items) => {
                let Some(head) = items.first().and_then(|h| h.as_atom()) else {
                    return Err(TranslateError::Unsupported(s.to_string()));
                };
                let args = &items[1..];
                match head {
                    "+" => self.fold_terms(args, BinOp::Add),
                    "*" => self.fold_terms(args, BinOp::Mul),
                    "-" => match args {
                        [x] => {
                            // Negative literals fold so printed trees
                            // re-parse identically.
                            let inner = self.term(x)?;
                            Ok(match inner {
                                Expr::Lit(q) => Expr::Lit(-q),
                                other => Expr::neg(other),
                            })
                        }
                        _ => self.fold_terms(args, BinOp::Sub),
                    },
                    "/" => {
                        let folded = self.fold_terms(args, BinOp::Div)?;
                        // Exact literal rationals fold immediately.
                        if let Expr::Binary(BinOp::Div, a, b) = &folded {
                            if let (Expr::Lit(p), Expr::Lit(q)) = (a.as_ref(), b.as_ref()) {
                                if *q != 0 {
                                    return Ok(Expr::Lit(Scalar::from(p / q.clone())));
                                }
                            }
                        }
                        Ok(folded)
                    }
                    "abs" => self.unary(args, Expr::abs),
                    "sqrt" => self.unary(args, Expr::sqrt),
                    "sin" => self.unary(args, Expr::sin),
                    "cos" => self.unary(args, Expr::cos),
                    "exp" => self.unary(args, Expr::exp),
                    "log" | "ln" => self.unary(args, Expr::log),
                    "min" => self.binary(args, Expr::min),
                    "max" => self.binary(args, Expr::max),
                    "mod" => self.binary(args, Expr::modulo),
                    "pow" | "^" => {
                        let [base, exp] = args else {
                            return Err(TranslateError::Unsupported("pow arity".into()));
                        };
                        let n = exp
                            .as_atom()
                            .and_then(|t| t.parse::<u32>().ok())
                            .ok_or_else(|| TranslateError::Unsupported("pow exponent".into()))?;
                        Ok(Expr::pow(self.term(base)?, n))
                    }
                    "fp.add" | "fp.sub" | "fp.mul" | "fp.div" => {
                        let op = fp_binop(head);
                        let [mode, a, b] = args else {
                            return Err(TranslateError::Unsupported(format!("{head} arity")));
                        };
                        let fmt = match infer_fp_format(&args[1..], self.env) {
                            FpInference::Format(f) => f,
                            FpInference::Mixed => return Err(TranslateError::MixedPrecision),
                        };
                        let mode = self.round_mode(mode);
                        let body = Expr::Binary(op, Box::new(self.term(a)?), Box::new(self.term(b)?));
                        Ok(Expr::round_fp(fmt, mode, body))
                    }
                    "fp32.add" | "fp32.sub" | "fp32.mul" | "fp32.div" | "fp64.add"
                    | "fp64.sub" | "fp64.mul" | "fp64.div" => {
                        let fmt = if head.starts_with("fp32") {
                            FloatFormat::Single
                        } else {
                            FloatFormat::Double
                        };
                        let op = fp_binop(&head[5..]);
                        let [mode, a, b] = args else {
                            return Err(TranslateError::Unsupported(format!("{head} arity")));
                        };
                        let mode = self.round_mode(mode);
                        let body = Expr::Binary(op, Box::new(self.term(a)?), Box::new(self.term(b)?));
                        Ok(Expr::round_fp(fmt, mode, body))
                    }
                    "fp.neg" => self.unary(args, Expr::neg),
                    "fp.abs" => self.unary(args, Expr::abs),
                    "fp.to_real" | "to_real" => {
                        let [x] = args else {
                            return Err(TranslateError::Unsupported(format!("{head} arity")));
                        };
                        self.term(x)
                    }
                    "rnd32" | "rnd64" => {
                        let fmt = if head == "rnd32" { FloatFormat::Single } else { FloatFormat::Double };
                        match args {
                            [e] => Ok(Expr::round_fp(fmt, RoundMode::NearestEven, self.term(e)?)),
                            [mode, e] => {
                                let mode = self.round_mode(mode);
                                Ok(Expr::round_fp(fmt, mode, self.term(e)?))
                            }
                            _ => Err(TranslateError::Unsupported(format!("{head} arity"))),
                        }
                    }
                    "to_float" | "of_int" => {
                        // Meaning depends on the declared return type; the
                        // single-precision reading is the default when the
                        // file does not declare one.
                        let fmt = match self.env.fn_returns.get(head) {
                            Some(Sort::Float(f)) => *f,
                            Some(_) => return Err(TranslateError::Unsupported(head.to_string())),
                            None => FloatFormat::Single,
                        };
                        match args {
                            [e] => Ok(Expr::round_fp(fmt, RoundMode::NearestEven, self.term(e)?)),
                            [mode, e] => {
                                let mode = self.round_mode(mode);
                                Ok(Expr::round_fp(fmt, mode, self.term(e)?))
                            }
                            _ => Err(TranslateError::Unsupported(format!("{head} arity"))),
                        }
                    }
                    "round_to_int" => {
                        let [mode, e] = args else {
                            return Err(TranslateError::Unsupported("round_to_int arity".into()));
                        };
                        let mode = mode
                            .as_atom()
                            .and_then(IntRoundMode::from_token)
                            .unwrap_or_else(|| {
                                self.warnings.push(
                                    "unknown integer rounding mode, defaulting to RNE".to_string(),
                                );
                                IntRoundMode::NearestEven
                            });
                        Ok(Expr::round_to_int(mode, self.term(e)?))
                    }
                    "real_pi" => Ok(Expr::Pi), // one void input
                    "fp" => decode_fp_literal_sexpr(items).map(Expr::Lit),
                    "_" => {
                        let tags: Vec<&str> = items.iter().filter_map(|i| i.as_atom()).collect();
                        match tags.as_slice() {
                            ["_", "+zero", ..] | ["_", "-zero", ..] => Ok(Expr::int(0)),
                            ["_", "+oo", ..] | ["_", "-oo", ..] | ["_", "NaN", ..] => {
                                Err(TranslateError::NonFiniteLiteral)
                            }
                            _ => Err(TranslateError::Unsupported(s.to_string())),
                        }
                    }
                    "let" => self.with_lets(args, |tr, body| tr.term(body)),
                    _ => Err(TranslateError::Unsupported(head.to_string())),
                }
            }
        }
    }

    fn unary(
        &mut self,
        args: &[SExpr],
        build: fn(Expr) -> Expr,
    ) -> Result<Expr, TranslateError> {
        let [x] = args else {
            return Err(TranslateError::Unsupported("arity".into()));
        };
        Ok(build(self.term(x)?))
    }

    fn binary(
        &mut self,
        args: &[SExpr],
        build: fn(Expr, Expr) -> Expr,
    ) -> Result<Expr, TranslateError> {
        let [a, b] = args else {
            return Err(TranslateError::Unsupported("arity".into()));
        };
        Ok(build(self.term(a)?, self.term(b)?))
    }

    fn fold_terms(&mut self, args: &[SExpr], op: BinOp) -> Result<Expr, TranslateError> {
        if args.len() < 2 {
            return Err(TranslateError::Unsupported(format!("{} arity", op.symbol())));
        }
        let mut out = self.term(&args[0])?;
        for a in &args[1..] {
            out = Expr::Binary(op, Box::new(out), Box::new(self.term(a)?));
        }
        Ok(out)
    }
}

fn fp_binop(name: &str) -> BinOp {
    match name.trim_start_matches("fp.") {
        "add" => BinOp::Add,
        "sub" => BinOp::Sub,
        "mul" => BinOp::Mul,
        _ => BinOp::Div,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FpInference {
    Format(FloatFormat),
    /// Operand types disagree or give no evidence: the operation's type
    /// cannot be determined.
    Mixed,
}

/// Derives the floating-point format of an operation from its operands:
/// bit-pattern literals carry their width, variables their declared sort,
/// and nested FP operations their own inferred format. All evidence must
/// agree.
pub fn infer_fp_format(operands: &[SExpr], env: &DeclEnv) -> FpInference {
    let mut seen: Option<FloatFormat> = None;
    let mut mixed = false;
    for op in operands {
        scan_formats(op, env, &mut seen, &mut mixed);
    }
    match (seen, mixed) {
        (Some(f), false) => FpInference::Format(f),
        _ => FpInference::Mixed,
    }
}

fn scan_formats(s: &SExpr, env: &DeclEnv, seen: &mut Option<FloatFormat>, mixed: &mut bool) {
    let mut note = |f: FloatFormat| match seen {
        None => *seen = Some(f),
        Some(prev) if *prev != f => *mixed = true,
        _ => {}
    };
    match s {
        SExpr::Atom(a) => {
            if let Some(Sort::Float(f)) = env.vars.get(a) {
                note(*f);
            }
        }
        SExpr::List(items) => {
            if let Some(head) = items.first().and_then(|h| h.as_atom()) {
                match head {
                    "fp" => {
                        if let Ok(widths) = fp_literal_widths(items) {
                            match widths {
                                (8, 24) => note(FloatFormat::Single),
                                (11, 53) => note(FloatFormat::Double),
                                _ => *mixed = true,
                            }
                        }
                        return;
                    }
                    "rnd32" => {
                        note(FloatFormat::Single);
                        return;
                    }
                    "rnd64" => {
                        note(FloatFormat::Double);
                        return;
                    }
                    name if name.starts_with("fp32.") => {
                        note(FloatFormat::Single);
                        return;
                    }
                    name if name.starts_with("fp64.") => {
                        note(FloatFormat::Double);
                        return;
                    }
                    "to_float" | "of_int" => {
                        if let Some(Sort::Float(f)) = env.fn_returns.get(head) {
                            note(*f);
                        } else {
                            note(FloatFormat::Single);
                        }
                        return;
                    }
                    _ => {}
                }
            }
            for item in items {
                scan_formats(item, env, seen, mixed);
            }
        }
    }
}

fn bits_of(tok: &str) -> Option<(u32, Integer)> {
    let body = tok.strip_prefix("#b")?;
    if body.is_empty() || !body.bytes().all(|b| b == b'0' || b == b'1') {
        return None;
    }
    let value = Integer::from_str_radix(body, 2).ok()?;
    Some((body.len() as u32, value))
}

fn fp_literal_widths(items: &[SExpr]) -> Result<(u32, u32), TranslateError> {
    if items.len() != 4 {
        return Err(TranslateError::Unsupported("fp literal arity".into()));
    }
    let parts: Vec<(u32, Integer)> = items[1..]
        .iter()
        .map(|i| i.as_atom().and_then(bits_of))
        .collect::<Option<_>>()
        .ok_or_else(|| TranslateError::Unsupported("fp literal bits".into()))?;
    Ok((parts[1].0, parts[2].0 + 1))
}

fn decode_fp_literal_sexpr(items: &[SExpr]) -> Result<Scalar, TranslateError> {
    if items.len() != 4 {
        return Err(TranslateError::Unsupported("fp literal arity".into()));
    }
    let parts: Vec<(u32, Integer)> = items[1..]
        .iter()
        .map(|i| i.as_atom().and_then(bits_of))
        .collect::<Option<_>>()
        .ok_or_else(|| TranslateError::Unsupported("fp literal bits".into()))?;
    let [(sw, sign), (ew, exp), (mw, mant)] = parts.as_slice() else {
        unreachable!()
    };
    decode_fp_literal(*sw, sign.clone(), *ew, exp.clone(), *mw, mant.clone())
}

/// Exact rational value of an IEEE 754 bit pattern. NaN and infinities are
/// rejected.
pub fn decode_fp_literal(
    sign_width: u32,
    sign: Integer,
    exp_width: u32,
    exp: Integer,
    mant_width: u32,
    mant: Integer,
) -> Result<Scalar, TranslateError> {
    match (sign_width, exp_width, mant_width) {
        (1, 8, 23) | (1, 11, 52) => {}
        _ => return Err(TranslateError::Unsupported("fp literal widths".into())),
    }
    let all_ones = (Integer::from(1) << exp_width) - 1u32;
    if exp == all_ones {
        return Err(TranslateError::NonFiniteLiteral);
    }
    let bias = (Integer::from(1) << (exp_width - 1)) - 1u32;
    let frac = Scalar::from(mant) * pow2(-(mant_width as i64));
    let magnitude = if exp == 0 {
        // Subnormal: no hidden bit, fixed exponent 1 - bias.
        let e = 1 - bias.to_i64().unwrap();
        frac * pow2(e)
    } else {
        let e = exp.to_i64().unwrap() - bias.to_i64().unwrap();
        (Scalar::from(1) + frac) * pow2(e)
    };
    Ok(if sign == 1 { -magnitude } else { magnitude })
}
