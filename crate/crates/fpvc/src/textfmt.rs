//! Plain-text NVC format: a bounds section followed by assertion lines.
//!
//! ```text
//! x (real) ∈ [-0.5, 0.5]
//! r1 (int) ∈ [0, 511]
//!
//! assert (<= (- 0.5) x)
//! assert (not (<= (sin x) 0.4))
//! ```
//!
//! `in` is accepted in place of `∈`; `--` and `;` start comments. Assertions
//! may span lines until their parentheses balance. The writer emits the same
//! format, so processed NVCs round-trip.

use crate::fp_format::FloatFormat;
use crate::frontend::{DeclEnv, FrontendError, ParseReport};
use crate::interval::{Endpoint, Interval};
use crate::nvc::{ProcessedNvc, Sort, VarSpec};
use crate::scalar::parse_scalar;
use crate::sexpr::parse_sexprs;
use std::fmt::Write as _;

fn parse_sort_tag(tag: &str) -> Option<Sort> {
    match tag {
        "real" => Some(Sort::Real),
        "int" => Some(Sort::Int),
        "float32" => Some(Sort::Float(FloatFormat::Single)),
        "float64" => Some(Sort::Float(FloatFormat::Double)),
        _ => None,
    }
}

fn parse_endpoint(tok: &str) -> Option<Endpoint> {
    match tok.trim() {
        "-inf" | "-oo" | "-∞" | "−∞" => Some(Endpoint::NegInf),
        "inf" | "+inf" | "oo" | "+oo" | "∞" | "+∞" => Some(Endpoint::PosInf),
        t => parse_scalar(t).map(Endpoint::Finite),
    }
}

/// Parses one `name (sort) ∈ [lo, hi]` line.
fn parse_bounds_line(line: &str) -> Option<VarSpec> {
    let (head, range) = line.split_once('∈').or_else(|| {
        // ASCII fallback: "name (sort) in [lo, hi]".
        let idx = line.find(" in ")?;
        Some((&line[..idx], &line[idx + 4..]))
    })?;
    let head = head.trim();
    let name = head.split_whitespace().next()?;
    let sort_tag = head
        .split_once('(')?
        .1
        .split_once(')')?
        .0
        .trim()
        .to_ascii_lowercase();
    let sort = parse_sort_tag(&sort_tag)?;
    let range = range.trim();
    let inner = range
        .strip_prefix(['[', '('])?
        .strip_suffix([']', ')'])?;
    let (lo, hi) = inner.split_once(',')?;
    let lo = parse_endpoint(lo)?;
    let hi = parse_endpoint(hi)?;
    Some(VarSpec {
        name: name.to_string(),
        sort,
        bounds: Interval::new(lo, hi),
    })
}

/// Reads the text corpus format into an NVC plus a parse report.
pub fn read_corpus(text: &str) -> Result<(ProcessedNvc, ParseReport), FrontendError> {
    let mut env = DeclEnv::default();
    let mut vars = Vec::new();
    let mut report = ParseReport::default();
    let mut assert_bodies: Vec<String> = Vec::new();

    let mut pending: Option<String> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find("--") {
            Some(idx) => &raw[..idx],
            None => raw,
        };
        let line = match line.find(';') {
            Some(idx) => &line[..idx],
            None => line,
        };
        if let Some(buf) = pending.as_mut() {
            buf.push(' ');
            buf.push_str(line.trim());
            if balanced(buf) {
                assert_bodies.push(pending.take().unwrap());
            }
            continue;
        }
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("assert") {
            let body = rest.trim().to_string();
            if balanced(&body) && !body.is_empty() {
                assert_bodies.push(body);
            } else {
                pending = Some(body);
            }
            continue;
        }
        match parse_bounds_line(trimmed) {
            Some(spec) => {
                env.vars.insert(spec.name.clone(), spec.sort);
                vars.push(spec);
            }
            None => {
                return Err(FrontendError::BadBoundsLine(lineno + 1, trimmed.to_string()));
            }
        }
    }
    if pending.is_some() {
        return Err(FrontendError::BadBoundsLine(0, "unterminated assertion".into()));
    }
    if assert_bodies.is_empty() {
        return Err(FrontendError::NoAssertions);
    }

    let mut formulas = Vec::new();
    for (idx, body) in assert_bodies.iter().enumerate() {
        let forest = parse_sexprs(body)?;
        let mut kept_this = true;
        for sexpr in &forest {
            match crate::frontend::translate_assertion(sexpr, &env, &mut report.warnings) {
                Ok(f) => formulas.push(f),
                Err(e) => {
                    kept_this = false;
                    let reason = match e {
                        crate::frontend::TranslateError::MixedPrecision => {
                            crate::frontend::DropReason::MixedPrecision
                        }
                        crate::frontend::TranslateError::UnknownSort(_) => {
                            crate::frontend::DropReason::UnknownSort
                        }
                        _ => crate::frontend::DropReason::UnsupportedFunction,
                    };
                    report.dropped.push((idx, reason));
                }
            }
        }
        if kept_this {
            report.kept += 1;
        }
    }

    Ok((ProcessedNvc::new(vars, formulas), report))
}

fn balanced(s: &str) -> bool {
    let mut depth: i64 = 0;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return true; // malformed; let the s-expression parser report it
        }
    }
    depth == 0
}

/// Renders an NVC in the corpus text format.
pub fn write_corpus(nvc: &ProcessedNvc) -> String {
    let mut out = String::new();
    let mut vars: Vec<&VarSpec> = nvc.vars.iter().collect();
    vars.sort_by(|a, b| a.name.cmp(&b.name));
    for v in vars {
        let _ = writeln!(out, "{} ({}) ∈ {}", v.name, v.sort.tag(), v.bounds);
    }
    out.push('\n');
    for a in &nvc.assertions {
        let _ = writeln!(out, "assert {a}");
    }
    out
}

/// Dispatches on content: SMT-LIB command scripts start with `(`.
pub fn read_auto(text: &str) -> Result<(ProcessedNvc, ParseReport), FrontendError> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with("--") && !l.starts_with(';'));
    match first {
        Some(l) if l.starts_with('(') => crate::frontend::read_smt2(text),
        _ => read_corpus(text),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::formula::Formula;
    use crate::scalar::Scalar;

    #[test]
    fn parse_bounds_variants() {
        let v = parse_bounds_line("x (real) ∈ [-0.5, 0.5]").unwrap();
        assert_eq!(v.name, "x");
        assert_eq!(v.sort, Sort::Real);
        assert_eq!(
            v.bounds,
            Interval::finite(Scalar::from((-1, 2)), Scalar::from((1, 2)))
        );
        let w = parse_bounds_line("r1 (int) in [0, 511]").unwrap();
        assert_eq!(w.sort, Sort::Int);
        let u = parse_bounds_line("y (float32) ∈ (-inf, inf)").unwrap();
        assert_eq!(u.bounds, Interval::entire());
        let q = parse_bounds_line("x (real) ∈ [-6851933/8388608, 6851933/8388608]").unwrap();
        assert_eq!(
            q.bounds,
            Interval::finite(
                Scalar::from((-6851933, 8388608)),
                Scalar::from((6851933, 8388608))
            )
        );
    }

    #[test]
    fn read_simple_corpus() {
        let text = "\
x (real) ∈ [-0.5, 0.5]

-- the goal
assert (not (<= (sin x) 0.4))
assert (<= 0.0
           (sin x))
";
        let (nvc, report) = read_corpus(text).unwrap();
        assert_eq!(nvc.vars.len(), 1);
        assert_eq!(nvc.assertions.len(), 2);
        assert_eq!(report.kept, 2);
        assert!(report.dropped.is_empty());
    }

    #[test]
    fn roundtrip_through_writer() {
        let text = "\
r1 (int) ∈ [0, 511]
x (real) ∈ [0, 802]

assert (<= (- 0.5) (- (/ x 2) r1))
assert (not (<= (mod r1 4) 3))
";
        let (nvc, _) = read_corpus(text).unwrap();
        let rendered = write_corpus(&nvc);
        let (nvc2, _) = read_corpus(&rendered).unwrap();
        assert_eq!(nvc.vars, nvc2.vars);
        assert_eq!(nvc.assertions, nvc2.assertions);
    }

    #[test]
    fn fp_ops_roundtrip() {
        let text = "\
x (float32) ∈ [-0.5, 0.5]

assert (= (to_float RNA 1) 1.0)
assert (isFiniteFloat (fp.mul RNE x x))
assert (<= (round_to_int RNA x) 1)
";
        let (nvc, _) = read_corpus(text).unwrap();
        let rendered = write_corpus(&nvc);
        let (nvc2, _) = read_corpus(&rendered).unwrap();
        assert_eq!(nvc.assertions, nvc2.assertions);
    }

    #[test]
    fn auto_detects_smt2() {
        let smt = "(declare-fun x () Real) (assert (<= x 1.0)) (check-sat)";
        let (nvc, _) = read_auto(smt).unwrap();
        assert_eq!(nvc.assertions, vec![Formula::le(Expr::var("x"), Expr::int(1))]);
        let corpus = "x (real) ∈ [0, 1]\n\nassert (<= x 1.0)\n";
        let (nvc2, _) = read_auto(corpus).unwrap();
        assert_eq!(nvc2.assertions, nvc.assertions);
    }

    #[test]
    fn bad_bounds_line_reports_position() {
        let err = read_corpus("x (real) [0, 1]\n\nassert (<= x 1)\n").unwrap_err();
        assert!(matches!(err, FrontendError::BadBoundsLine(1, _)));
    }
}
