//! Serialization of exact NVCs for external provers and parsing of their
//! answers.
//!
//! Exports are deterministic byte streams for a fixed NVC and
//! configuration. The SMT2 dialect targets numerical branch-and-prune
//! solvers (QF_NRA); the TPTP export phrases the *negation* of the NVC
//! conjunction as a first-order conjecture for validity-style provers.

use crate::eval::BoxMap;
use crate::expr::{BinOp, Expr, UnOp};
use crate::formula::{Formula, Rel};
use crate::interval::{pi_interval, Endpoint};
use crate::nvc::{ProcessedNvc, Sort};
use crate::scalar::{render_scalar, render_smt2, Scalar};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExportError {
    #[error("{backend} does not support {feature}")]
    UnsupportedForBackend { backend: &'static str, feature: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnswerError {
    #[error("unrecognized prover output")]
    UnparsableOutput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiMode {
    /// Replace pi by a fresh variable with rational bounds enclosing it;
    /// preserves the weakening direction.
    BoundedVar,
    /// Replace pi by a rational enclosure midpoint. Not weakening-safe;
    /// only for provers with no other option.
    Midpoint,
}

#[derive(Debug, Clone)]
pub struct DrealConfig {
    /// delta handed to the solver via (set-option :precision ...).
    pub delta: Scalar,
    /// Integer literals with more decimal digits than this are rejected.
    pub max_int_digits: usize,
    pub pi_mode: PiMode,
    pub prec: u32,
}

impl Default for DrealConfig {
    fn default() -> Self {
        DrealConfig {
            delta: Scalar::from((1, rug::Integer::from(10).pow(100))),
            max_int_digits: 20,
            pi_mode: PiMode::BoundedVar,
            prec: crate::eval::DEFAULT_PREC,
        }
    }
}

use rug::ops::Pow as _;

fn digits(n: &rug::Integer) -> usize {
    n.clone().abs().to_string().len()
}

fn check_dreal_expr(e: &Expr, cfg: &DrealConfig) -> Result<(), ExportError> {
    match e {
        Expr::Var(_) | Expr::Pi => Ok(()),
        Expr::Lit(q) => {
            if digits(q.numer()) > cfg.max_int_digits || digits(q.denom()) > cfg.max_int_digits {
                return Err(ExportError::UnsupportedForBackend {
                    backend: "dReal",
                    feature: format!(
                        "integers beyond {} digits (literal {})",
                        cfg.max_int_digits,
                        render_scalar(q)
                    ),
                });
            }
            Ok(())
        }
        Expr::Unary(_, a) | Expr::Pow(a, _) => check_dreal_expr(a, cfg),
        Expr::Binary(_, a, b) => {
            check_dreal_expr(a, cfg)?;
            check_dreal_expr(b, cfg)
        }
        Expr::RoundFp { .. } => Err(ExportError::UnsupportedForBackend {
            backend: "dReal",
            feature: "floating-point rounding (eliminate it first)".into(),
        }),
        Expr::RoundToInt { .. } => Err(ExportError::UnsupportedForBackend {
            backend: "dReal",
            feature: "integer rounding".into(),
        }),
    }
}

fn check_dreal_formula(f: &Formula, cfg: &DrealConfig) -> Result<(), ExportError> {
    match f {
        Formula::True | Formula::False => Ok(()),
        Formula::Atom(_, a, b) => {
            check_dreal_expr(a, cfg)?;
            check_dreal_expr(b, cfg)
        }
        Formula::Not(g) => check_dreal_formula(g, cfg),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            check_dreal_formula(a, cfg)?;
            check_dreal_formula(b, cfg)
        }
    }
}

fn smt2_expr(e: &Expr, out: &mut String, pi_name: Option<&str>) {
    match e {
        Expr::Var(n) => out.push_str(n),
        Expr::Lit(q) => render_smt2(q, out),
        Expr::Pi => out.push_str(pi_name.unwrap_or("pi_")),
        Expr::Unary(op, a) => {
            let name = match op {
                UnOp::Neg => "-",
                UnOp::Abs => "abs",
                UnOp::Sqrt => "sqrt",
                UnOp::Sin => "sin",
                UnOp::Cos => "cos",
                UnOp::Exp => "exp",
                UnOp::Log => "log",
            };
            *out += "(";
            *out += name;
            out.push(' ');
            smt2_expr(a, out, pi_name);
            *out += ")";
        }
        Expr::Binary(op, a, b) => {
            *out += "(";
            *out += op.symbol();
            out.push(' ');
            smt2_expr(a, out, pi_name);
            out.push(' ');
            smt2_expr(b, out, pi_name);
            *out += ")";
        }
        // Powers expand to products: not every QF_NRA front end has ^.
        Expr::Pow(a, n) => {
            if *n == 0 {
                out.push('1');
                return;
            }
            if *n == 1 {
                smt2_expr(a, out, pi_name);
                return;
            }
            *out += "(*";
            for _ in 0..*n {
                out.push(' ');
                smt2_expr(a, out, pi_name);
            }
            *out += ")";
        }
        Expr::RoundFp { .. } | Expr::RoundToInt { .. } => {
            unreachable!("rejected before rendering")
        }
    }
}

fn smt2_formula(f: &Formula, out: &mut String, pi_name: Option<&str>) {
    match f {
        Formula::True => *out += "true",
        Formula::False => *out += "false",
        Formula::Atom(rel, a, b) => {
            *out += "(";
            *out += rel.symbol();
            out.push(' ');
            smt2_expr(a, out, pi_name);
            out.push(' ');
            smt2_expr(b, out, pi_name);
            *out += ")";
        }
        Formula::Not(g) => {
            *out += "(not ";
            smt2_formula(g, out, pi_name);
            *out += ")";
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            *out += match f {
                Formula::And(..) => "(and ",
                Formula::Or(..) => "(or ",
                _ => "(=> ",
            };
            smt2_formula(a, out, pi_name);
            out.push(' ');
            smt2_formula(b, out, pi_name);
            *out += ")";
        }
    }
}

fn uses_pi(nvc: &ProcessedNvc) -> bool {
    fn expr_has_pi(e: &Expr) -> bool {
        match e {
            Expr::Pi => true,
            Expr::Var(_) | Expr::Lit(_) => false,
            Expr::Unary(_, a) | Expr::Pow(a, _) => expr_has_pi(a),
            Expr::Binary(_, a, b) => expr_has_pi(a) || expr_has_pi(b),
            Expr::RoundFp { arg, .. } | Expr::RoundToInt { arg, .. } => expr_has_pi(arg),
        }
    }
    fn formula_has_pi(f: &Formula) -> bool {
        match f {
            Formula::True | Formula::False => false,
            Formula::Atom(_, a, b) => expr_has_pi(a) || expr_has_pi(b),
            Formula::Not(g) => formula_has_pi(g),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                formula_has_pi(a) || formula_has_pi(b)
            }
        }
    }
    nvc.assertions.iter().any(formula_has_pi)
}

/// QF_NRA script: declarations, box bounds, one assert per formula,
/// check-sat.
pub fn export_dreal_smt2(
    nvc: &ProcessedNvc,
    box_map: &BoxMap,
    cfg: &DrealConfig,
) -> Result<String, ExportError> {
    for a in &nvc.assertions {
        check_dreal_formula(a, cfg)?;
    }
    let mut out = String::new();
    out.push_str("(set-logic QF_NRA)\n");
    // The precision knob is a solver option, not part of the formula, so a
    // double rendering is fine here.
    let _ = writeln!(out, "(set-option :precision {:e})", cfg.delta.to_f64());

    let needs_pi = uses_pi(nvc);
    let pi = pi_interval(cfg.prec);
    let mut pi_subst: Option<Expr> = None;
    if needs_pi && cfg.pi_mode == PiMode::Midpoint {
        pi_subst = Some(Expr::Lit(pi.midpoint().unwrap()));
    }

    for v in &nvc.vars {
        let sort = match v.sort {
            Sort::Int => "Int",
            _ => "Real",
        };
        let _ = writeln!(out, "(declare-fun {} () {})", v.name, sort);
    }
    if needs_pi && pi_subst.is_none() {
        out.push_str("(declare-fun pi_ () Real)\n");
        for (rel, ep) in [(">=", pi.lo()), ("<=", pi.hi())] {
            if let Endpoint::Finite(q) = ep {
                let mut lit = String::new();
                render_smt2(q, &mut lit);
                let _ = writeln!(out, "(assert ({rel} pi_ {lit}))");
            }
        }
    }
    for v in &nvc.vars {
        let iv = box_map
            .get(&v.name)
            .cloned()
            .unwrap_or_else(|| v.bounds.clone());
        if let Endpoint::Finite(lo) = iv.lo() {
            let mut lit = String::new();
            render_smt2(lo, &mut lit);
            let _ = writeln!(out, "(assert (>= {} {lit}))", v.name);
        }
        if let Endpoint::Finite(hi) = iv.hi() {
            let mut lit = String::new();
            render_smt2(hi, &mut lit);
            let _ = writeln!(out, "(assert (<= {} {lit}))", v.name);
        }
    }
    for a in &nvc.assertions {
        let rendered = match &pi_subst {
            Some(lit) => substitute_pi(a, lit),
            None => a.clone(),
        };
        out.push_str("(assert ");
        smt2_formula(&rendered, &mut out, Some("pi_"));
        out.push_str(")\n");
    }
    out.push_str("(check-sat)\n(exit)\n");
    Ok(out)
}

fn substitute_pi(f: &Formula, lit: &Expr) -> Formula {
    fn in_expr(e: &Expr, lit: &Expr) -> Expr {
        match e {
            Expr::Pi => lit.clone(),
            Expr::Var(_) | Expr::Lit(_) => e.clone(),
            Expr::Unary(op, a) => Expr::Unary(*op, Box::new(in_expr(a, lit))),
            Expr::Binary(op, a, b) => {
                Expr::Binary(*op, Box::new(in_expr(a, lit)), Box::new(in_expr(b, lit)))
            }
            Expr::Pow(a, n) => Expr::Pow(Box::new(in_expr(a, lit)), *n),
            Expr::RoundFp { format, mode, arg } => Expr::RoundFp {
                format: *format,
                mode: *mode,
                arg: Box::new(in_expr(arg, lit)),
            },
            Expr::RoundToInt { mode, arg } => {
                Expr::RoundToInt { mode: *mode, arg: Box::new(in_expr(arg, lit)) }
            }
        }
    }
    match f {
        Formula::True | Formula::False => f.clone(),
        Formula::Atom(rel, a, b) => Formula::Atom(*rel, in_expr(a, lit), in_expr(b, lit)),
        Formula::Not(g) => Formula::not(substitute_pi(g, lit)),
        Formula::And(a, b) => Formula::and(substitute_pi(a, lit), substitute_pi(b, lit)),
        Formula::Or(a, b) => Formula::or(substitute_pi(a, lit), substitute_pi(b, lit)),
        Formula::Implies(a, b) => Formula::implies(substitute_pi(a, lit), substitute_pi(b, lit)),
    }
}

fn tptp_var(name: &str) -> String {
    let mut out: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    out.make_ascii_uppercase();
    if !out.chars().next().is_some_and(|c| c.is_ascii_uppercase()) {
        out.insert(0, 'V');
    }
    out
}

fn check_tptp_expr(e: &Expr) -> Result<(), ExportError> {
    match e {
        Expr::Var(_) | Expr::Lit(_) | Expr::Pi => Ok(()),
        Expr::Unary(_, a) | Expr::Pow(a, _) => check_tptp_expr(a),
        Expr::Binary(BinOp::Mod, ..) => Err(ExportError::UnsupportedForBackend {
            backend: "MetiTarski",
            feature: "the modulus operator".into(),
        }),
        Expr::Binary(_, a, b) => {
            check_tptp_expr(a)?;
            check_tptp_expr(b)
        }
        Expr::RoundFp { .. } => Err(ExportError::UnsupportedForBackend {
            backend: "MetiTarski",
            feature: "floating-point rounding (eliminate it first)".into(),
        }),
        Expr::RoundToInt { .. } => Err(ExportError::UnsupportedForBackend {
            backend: "MetiTarski",
            feature: "integer rounding".into(),
        }),
    }
}

fn tptp_expr(e: &Expr, vars: &BTreeMap<String, String>, out: &mut String) {
    match e {
        Expr::Var(n) => *out += &vars[n],
        Expr::Lit(q) => {
            if q.denom() == &1 {
                let _ = write!(out, "{}", q.numer());
            } else {
                let _ = write!(out, "{}/{}", q.numer(), q.denom());
            }
        }
        Expr::Pi => *out += "pi",
        Expr::Unary(op, a) => {
            let name = match op {
                UnOp::Neg => {
                    *out += "-";
                    tptp_atom_arg(a, vars, out);
                    return;
                }
                UnOp::Abs => "abs",
                UnOp::Sqrt => "sqrt",
                UnOp::Sin => "sin",
                UnOp::Cos => "cos",
                UnOp::Exp => "exp",
                UnOp::Log => "ln",
            };
            *out += name;
            *out += "(";
            tptp_expr(a, vars, out);
            *out += ")";
        }
        Expr::Binary(op, a, b) => match op {
            BinOp::Min | BinOp::Max => {
                *out += op.symbol();
                *out += "(";
                tptp_expr(a, vars, out);
                *out += ",";
                tptp_expr(b, vars, out);
                *out += ")";
            }
            BinOp::Mod => unreachable!("rejected before rendering"),
            _ => {
                *out += "(";
                tptp_expr(a, vars, out);
                let _ = write!(out, " {} ", op.symbol());
                tptp_expr(b, vars, out);
                *out += ")";
            }
        },
        Expr::Pow(a, n) => {
            *out += "(";
            tptp_expr(a, vars, out);
            let _ = write!(out, " ^ {n})");
        }
        Expr::RoundFp { .. } | Expr::RoundToInt { .. } => unreachable!("rejected before rendering"),
    }
}

fn tptp_atom_arg(e: &Expr, vars: &BTreeMap<String, String>, out: &mut String) {
    match e {
        Expr::Var(_) | Expr::Lit(_) | Expr::Pi => tptp_expr(e, vars, out),
        _ => {
            *out += "(";
            tptp_expr(e, vars, out);
            *out += ")";
        }
    }
}

fn tptp_formula(f: &Formula, vars: &BTreeMap<String, String>, out: &mut String) {
    match f {
        Formula::True => *out += "$true",
        Formula::False => *out += "$false",
        Formula::Atom(rel, a, b) => {
            *out += "(";
            tptp_expr(a, vars, out);
            let sym = match rel {
                Rel::Le => "<=",
                Rel::Lt => "<",
                Rel::Ge => ">=",
                Rel::Gt => ">",
                Rel::Eq => "=",
            };
            let _ = write!(out, " {sym} ");
            tptp_expr(b, vars, out);
            *out += ")";
        }
        Formula::Not(g) => {
            *out += "~";
            *out += "(";
            tptp_formula(g, vars, out);
            *out += ")";
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let sym = match f {
                Formula::And(..) => "&",
                Formula::Or(..) => "|",
                _ => "=>",
            };
            *out += "(";
            tptp_formula(a, vars, out);
            let _ = write!(out, " {sym} ");
            tptp_formula(b, vars, out);
            *out += ")";
        }
    }
}

/// First-order conjecture: over the box, the NVC conjunction is
/// unsatisfiable. Integer variables are relaxed to reals (sound for
/// proving).
pub fn export_metitarski_tptp(
    nvc: &ProcessedNvc,
    box_map: &BoxMap,
    name: &str,
) -> Result<String, ExportError> {
    for a in &nvc.assertions {
        check_tptp_formula(a)?;
    }
    let mut vars = BTreeMap::new();
    for v in &nvc.vars {
        let mut mapped = tptp_var(&v.name);
        while vars.values().any(|m| m == &mapped) {
            mapped.push('_');
        }
        vars.insert(v.name.clone(), mapped);
    }

    let mut bounds = Vec::new();
    for v in &nvc.vars {
        let iv = box_map
            .get(&v.name)
            .cloned()
            .unwrap_or_else(|| v.bounds.clone());
        if let Endpoint::Finite(lo) = iv.lo() {
            bounds.push(Formula::le(Expr::Lit(lo.clone()), Expr::var(v.name.clone())));
        }
        if let Endpoint::Finite(hi) = iv.hi() {
            bounds.push(Formula::le(Expr::var(v.name.clone()), Expr::Lit(hi.clone())));
        }
    }

    let mut out = String::new();
    let _ = write!(out, "fof({name}, conjecture, ");
    if !vars.is_empty() {
        let list: Vec<&String> = vars.values().collect();
        let _ = write!(out, "! [");
        for (i, v) in list.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(v.as_str());
        }
        let _ = write!(out, "] : ");
    }
    out.push('(');
    if !bounds.is_empty() {
        out.push('(');
        for (i, b) in bounds.iter().enumerate() {
            if i > 0 {
                out.push_str(" & ");
            }
            tptp_formula(b, &vars, &mut out);
        }
        out.push_str(") => ");
    }
    out.push_str("~(");
    if nvc.assertions.is_empty() {
        out.push_str("$true");
    }
    for (i, a) in nvc.assertions.iter().enumerate() {
        if i > 0 {
            out.push_str(" & ");
        }
        tptp_formula(a, &vars, &mut out);
    }
    out.push(')');
    out.push(')');
    out.push_str(").\n");
    Ok(out)
}

fn check_tptp_formula(f: &Formula) -> Result<(), ExportError> {
    match f {
        Formula::True | Formula::False => Ok(()),
        Formula::Atom(_, a, b) => {
            check_tptp_expr(a)?;
            check_tptp_expr(b)
        }
        Formula::Not(g) => check_tptp_formula(g),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            check_tptp_formula(a)?;
            check_tptp_formula(b)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProverTool {
    DReal,
    MetiTarski,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProverAnswer {
    /// unsat / theorem: the NVC has no models, the original VC holds.
    Proved,
    /// sat / delta-sat: a potential counter-example, never certified here.
    Refuted {
        model: Vec<(String, Scalar)>,
        delta: bool,
    },
    Unknown,
}

/// Interprets captured output of an external prover run.
pub fn parse_prover_answer(tool: ProverTool, text: &str) -> Result<ProverAnswer, AnswerError> {
    match tool {
        ProverTool::DReal => {
            for line in text.lines() {
                let t = line.trim();
                if t == "unsat" {
                    return Ok(ProverAnswer::Proved);
                }
                if t.starts_with("delta-sat") {
                    return Ok(ProverAnswer::Refuted { model: parse_dreal_model(text), delta: true });
                }
                if t == "sat" {
                    return Ok(ProverAnswer::Refuted { model: parse_dreal_model(text), delta: false });
                }
                if t == "unknown" {
                    return Ok(ProverAnswer::Unknown);
                }
            }
            Err(AnswerError::UnparsableOutput)
        }
        ProverTool::MetiTarski => {
            if text.contains("SZS status Theorem") || text.contains("Theorem:") {
                return Ok(ProverAnswer::Proved);
            }
            if text.contains("SZS status GaveUp")
                || text.contains("GaveUp")
                || text.contains("gave up")
                || text.contains("SZS status Unknown")
            {
                return Ok(ProverAnswer::Unknown);
            }
            Err(AnswerError::UnparsableOutput)
        }
    }
}

/// Best-effort parse of `name : [lo, hi]` model lines.
fn parse_dreal_model(text: &str) -> Vec<(String, Scalar)> {
    let mut out = Vec::new();
    for line in text.lines() {
        let Some((name, range)) = line.split_once(':') else { continue };
        let name = name.trim();
        if name.is_empty() || name.contains(char::is_whitespace) {
            continue;
        }
        let range = range.trim();
        let Some(inner) = range.strip_prefix('[').and_then(|r| r.strip_suffix(']')) else {
            continue;
        };
        let Some((lo, hi)) = inner.split_once(',') else { continue };
        let (Some(lo), Some(hi)) = (
            crate::scalar::parse_scalar(lo.trim()),
            crate::scalar::parse_scalar(hi.trim()),
        ) else {
            continue;
        };
        out.push((name.to_string(), (lo + hi) / Scalar::from(2)));
    }
    out
}
