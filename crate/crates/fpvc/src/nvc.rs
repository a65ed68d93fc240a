//! The negated verification condition: declarations plus an assertion list
//! whose meaning is the conjunction of all assertions restricted to the
//! variable box.

use crate::fp_format::FloatFormat;
use crate::formula::Formula;
use crate::interval::Interval;
use crate::scalar::fnv1a64;
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sort {
    Real,
    Int,
    Float(FloatFormat),
}

impl Sort {
    /// Sort tag as written in the text format. Float variables are valued as
    /// reals; the format tag is kept only for type inference.
    pub fn tag(&self) -> &'static str {
        match self {
            Sort::Real => "real",
            Sort::Int => "int",
            Sort::Float(FloatFormat::Single) => "float32",
            Sort::Float(FloatFormat::Double) => "float64",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSpec {
    pub name: String,
    pub sort: Sort,
    pub bounds: Interval,
}

impl VarSpec {
    pub fn unbounded(name: impl Into<String>, sort: Sort) -> VarSpec {
        VarSpec { name: name.into(), sort, bounds: Interval::entire() }
    }
}

/// Record of one transformation applied to an NVC. Every recorded
/// transformation is a weakening or an equivalence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub name: String,
    pub before: u64,
    pub after: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessedNvc {
    pub vars: Vec<VarSpec>,
    pub assertions: Vec<Formula>,
    pub trace: Vec<TraceRecord>,
}

impl ProcessedNvc {
    pub fn new(vars: Vec<VarSpec>, assertions: Vec<Formula>) -> ProcessedNvc {
        ProcessedNvc { vars, assertions, trace: Vec::new() }
    }

    pub fn var(&self, name: &str) -> Option<&VarSpec> {
        self.vars.iter().find(|v| v.name == name)
    }

    pub fn var_mut(&mut self, name: &str) -> Option<&mut VarSpec> {
        self.vars.iter_mut().find(|v| v.name == name)
    }

    /// Current variable box keyed by name.
    pub fn box_map(&self) -> BTreeMap<String, Interval> {
        self.vars
            .iter()
            .map(|v| (v.name.clone(), v.bounds.clone()))
            .collect()
    }

    pub fn set_bounds(&mut self, box_map: &BTreeMap<String, Interval>) {
        for v in &mut self.vars {
            if let Some(iv) = box_map.get(&v.name) {
                v.bounds = iv.clone();
            }
        }
    }

    /// Structural hash over declarations and assertions, stable across runs.
    pub fn structural_hash(&self) -> u64 {
        let mut text = String::new();
        for v in &self.vars {
            let _ = write!(text, "{} {} {};", v.name, v.sort.tag(), v.bounds);
        }
        for a in &self.assertions {
            let _ = write!(text, "{a};");
        }
        fnv1a64(text.as_bytes())
    }

    pub fn record(&mut self, name: &str, before: u64) {
        let after = self.structural_hash();
        if after != before {
            self.trace.push(TraceRecord { name: name.to_string(), before, after });
        }
    }

    pub fn contains_round_fp(&self) -> bool {
        self.assertions.iter().any(|a| a.contains_round_fp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::scalar::Scalar;

    #[test]
    fn hash_changes_with_content() {
        let mut nvc = ProcessedNvc::new(
            vec![VarSpec::unbounded("x", Sort::Real)],
            vec![Formula::le(Expr::int(0), Expr::var("x"))],
        );
        let h1 = nvc.structural_hash();
        nvc.assertions.push(Formula::le(Expr::var("x"), Expr::int(1)));
        let h2 = nvc.structural_hash();
        assert_ne!(h1, h2);
        nvc.record("test", h1);
        assert_eq!(nvc.trace.len(), 1);
        nvc.record("noop", h2);
        assert_eq!(nvc.trace.len(), 1);
    }

    #[test]
    fn box_map_roundtrip() {
        let mut nvc = ProcessedNvc::new(vec![VarSpec::unbounded("x", Sort::Real)], vec![]);
        let mut bm = nvc.box_map();
        bm.insert(
            "x".into(),
            Interval::finite(Scalar::from(-1), Scalar::from(1)),
        );
        nvc.set_bounds(&bm);
        assert_eq!(nvc.var("x").unwrap().bounds, Interval::finite(Scalar::from(-1), Scalar::from(1)));
    }
}
