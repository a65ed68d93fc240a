//! Branch-and-prune decision procedure over an exact NVC.
//!
//! A worklist of boxes starts at the derived variable box. Interval
//! evaluation of the assertion conjunction discards boxes where some
//! assertion certainly fails; a box where everything certainly holds (or
//! whose midpoint certifies) yields a counter-example. Everything else is
//! bisected along the widest dimension, scaled by each dimension's initial
//! width so mixed-magnitude boxes split fairly. Draining the worklist with
//! no survivors proves the NVC unsatisfiable over the box.
//!
//! Proved is sound absolutely; counter-examples are models of the NVC
//! handed to the prover, which for weakened NVCs makes them potential
//! counter-examples for the original.

use crate::eval::{eval_formula, point_box, BoxMap, EvalCtx, Ternary};
use crate::interval::{Endpoint, Interval};
use crate::nvc::{ProcessedNvc, Sort};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    WidestFirst,
}

#[derive(Debug, Clone)]
pub struct ProveConfig {
    pub max_depth: u32,
    pub timeout: Duration,
    /// Scaled width below which a box is abandoned rather than split.
    pub min_box_width: Scalar,
    pub prec: u32,
    pub strategy: Strategy,
}

impl Default for ProveConfig {
    fn default() -> Self {
        ProveConfig {
            max_depth: 512,
            timeout: Duration::from_secs(60),
            min_box_width: crate::scalar::pow2(-80),
            prec: crate::eval::DEFAULT_PREC,
            strategy: Strategy::WidestFirst,
        }
    }
}

pub type Point = BTreeMap<String, Scalar>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaveUpReason {
    /// Some variable had no finite bounds to search in.
    UnboundedBox,
    Timeout,
    /// Depth or width limits left live boxes behind.
    ResourceLimit,
}

#[derive(Debug, Clone, Default)]
pub struct ProveStats {
    pub boxes_processed: u64,
    pub boxes_refuted: u64,
    pub max_depth_reached: u32,
    pub elapsed: Duration,
    /// Midpoint of the most nearly satisfied abandoned box, reported as an
    /// uncertified potential counter-example.
    pub best_point: Option<Point>,
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Proved,
    PotentialCounterexample { point: Point, certified: bool },
    GaveUp { reason: GaveUpReason, stats: ProveStats },
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved)
    }

    pub fn certified_point(&self) -> Option<&Point> {
        match self {
            Verdict::PotentialCounterexample { point, certified: true } => Some(point),
            _ => None,
        }
    }
}

struct SearchBox {
    dims: Vec<Interval>,
    depth: u32,
}

struct Searcher<'a> {
    nvc: &'a ProcessedNvc,
    cfg: &'a ProveConfig,
    names: Vec<String>,
    sorts: Vec<Sort>,
    initial_widths: Vec<Scalar>,
    /// Midpoints of bounded variables that no assertion mentions.
    extra_point: Point,
    ctx: EvalCtx,
    stats: ProveStats,
    best_score: Option<u32>,
    gave_up_any: bool,
}

/// Decides the NVC conjunction over the box.
pub fn decide(nvc: &ProcessedNvc, box_map: &BoxMap, cfg: &ProveConfig) -> Verdict {
    let started = Instant::now();

    // Only variables free in the assertions matter; declared variables that
    // substitution eliminated stay behind unbounded and are ignored. Every
    // search variable needs finite bounds.
    let mut used = std::collections::BTreeSet::new();
    for a in &nvc.assertions {
        a.collect_vars(&mut used);
    }
    let mut names = Vec::new();
    let mut sorts = Vec::new();
    let mut dims = Vec::new();
    let mut extra_point = Point::new();
    for v in &nvc.vars {
        let iv = box_map.get(&v.name).cloned().unwrap_or_else(Interval::entire);
        if !used.contains(&v.name) {
            // Not searched, but bounded spectators still show up in
            // reported points at their midpoint.
            if let Some(mid) = iv.midpoint() {
                let value = if v.sort == Sort::Int {
                    Scalar::from(mid.floor().numer().clone())
                } else {
                    mid
                };
                extra_point.insert(v.name.clone(), value);
            }
            continue;
        }
        if !iv.is_bounded() {
            return Verdict::GaveUp {
                reason: GaveUpReason::UnboundedBox,
                stats: ProveStats { elapsed: started.elapsed(), ..Default::default() },
            };
        }
        names.push(v.name.clone());
        sorts.push(v.sort);
        dims.push(iv);
    }
    for v in &used {
        if !names.contains(v) {
            // Free variable without a declaration: nothing to search.
            return Verdict::GaveUp {
                reason: GaveUpReason::UnboundedBox,
                stats: ProveStats { elapsed: started.elapsed(), ..Default::default() },
            };
        }
    }

    let initial_widths = dims
        .iter()
        .map(|iv| match iv.width() {
            Endpoint::Finite(w) => w,
            _ => unreachable!("bounded box"),
        })
        .collect();

    let mut searcher = Searcher {
        nvc,
        cfg,
        names,
        sorts,
        initial_widths,
        extra_point,
        ctx: EvalCtx::certification(cfg.prec),
        stats: ProveStats::default(),
        best_score: None,
        gave_up_any: false,
    };
    let verdict = searcher.run(SearchBox { dims, depth: 0 }, started);
    verdict
}

impl<'a> Searcher<'a> {
    fn box_map_of(&self, b: &SearchBox) -> BoxMap {
        self.names
            .iter()
            .cloned()
            .zip(b.dims.iter().cloned())
            .collect()
    }

    fn midpoint_of(&self, b: &SearchBox) -> Point {
        let mut p = self.extra_point.clone();
        for ((name, sort), iv) in self.names.iter().zip(&self.sorts).zip(&b.dims) {
            let mid = iv.midpoint().expect("bounded box");
            let v = if *sort == Sort::Int {
                Scalar::from(mid.floor().numer().clone())
            } else {
                mid
            };
            p.insert(name.clone(), v);
        }
        p
    }

    fn eval_conjunction(&self, bx: &BoxMap) -> Ternary {
        let mut all_true = true;
        for a in &self.nvc.assertions {
            match eval_formula(a, bx, &self.ctx) {
                Ternary::CertainlyFalse => return Ternary::CertainlyFalse,
                Ternary::Unknown => all_true = false,
                Ternary::CertainlyTrue => {}
            }
        }
        if all_true {
            Ternary::CertainlyTrue
        } else {
            Ternary::Unknown
        }
    }

    /// Widest dimension by initial-width scaling; ties break to the lowest
    /// index. Returns `None` when no dimension can be split further.
    fn widest_dim(&self, b: &SearchBox) -> Option<usize> {
        let mut best: Option<(usize, Scalar)> = None;
        for (i, iv) in b.dims.iter().enumerate() {
            let Endpoint::Finite(w) = iv.width() else { continue };
            if w == 0 || self.initial_widths[i] == 0 {
                continue;
            }
            let scaled = w / &self.initial_widths[i];
            match &best {
                Some((_, bw)) if scaled <= *bw => {}
                _ => best = Some((i, scaled)),
            }
        }
        let (idx, scaled) = best?;
        if scaled <= self.cfg.min_box_width {
            return None;
        }
        Some(idx)
    }

    fn split(&self, b: &SearchBox, dim: usize) -> (SearchBox, SearchBox) {
        let iv = &b.dims[dim];
        let (lo, hi) = (iv.lo().clone(), iv.hi().clone());
        let mid = iv.midpoint().expect("bounded box");
        let (left, right) = if self.sorts[dim] == Sort::Int {
            let m = Scalar::from(mid.floor().numer().clone());
            (
                Interval::new(lo, Endpoint::Finite(m.clone())),
                Interval::new(Endpoint::Finite(m + Scalar::from(1)), hi),
            )
        } else {
            (
                Interval::new(lo, Endpoint::Finite(mid.clone())),
                Interval::new(Endpoint::Finite(mid), hi),
            )
        };
        let mut l = SearchBox { dims: b.dims.clone(), depth: b.depth + 1 };
        let mut r = SearchBox { dims: b.dims.clone(), depth: b.depth + 1 };
        l.dims[dim] = left;
        r.dims[dim] = right;
        (l, r)
    }

    /// Violation score of a point: 0 per certainly-true assertion, 1 per
    /// undecided, 4 per certainly-false. Lower is a better counter-example
    /// candidate.
    fn score_point(&self, point: &Point) -> u32 {
        let bx = point_box(point);
        self.nvc
            .assertions
            .iter()
            .map(|a| match eval_formula(a, &bx, &self.ctx) {
                Ternary::CertainlyTrue => 0,
                Ternary::Unknown => 1,
                Ternary::CertainlyFalse => 4,
            })
            .sum()
    }

    fn abandon(&mut self, b: &SearchBox) {
        self.gave_up_any = true;
        let point = self.midpoint_of(b);
        let score = self.score_point(&point);
        if self.best_score.map_or(true, |s| score < s) {
            self.best_score = Some(score);
            self.stats.best_point = Some(point);
        }
    }

    fn run(&mut self, root: SearchBox, started: Instant) -> Verdict {
        let mut worklist = vec![root];
        while let Some(b) = worklist.pop() {
            self.stats.boxes_processed += 1;
            self.stats.max_depth_reached = self.stats.max_depth_reached.max(b.depth);
            if self.stats.boxes_processed % 64 == 0 && started.elapsed() > self.cfg.timeout {
                // Score whatever is still alive before giving up.
                self.abandon(&b);
                for rest in worklist.iter().take(64) {
                    self.abandon(rest);
                }
                self.stats.elapsed = started.elapsed();
                return Verdict::GaveUp {
                    reason: GaveUpReason::Timeout,
                    stats: std::mem::take(&mut self.stats),
                };
            }

            let bx = self.box_map_of(&b);
            match self.eval_conjunction(&bx) {
                Ternary::CertainlyFalse => {
                    self.stats.boxes_refuted += 1;
                    continue;
                }
                Ternary::CertainlyTrue => {
                    let point = self.midpoint_of(&b);
                    let certified = certify_point(self.nvc, &point, self.cfg.prec);
                    self.stats.elapsed = started.elapsed();
                    return Verdict::PotentialCounterexample { point, certified };
                }
                Ternary::Unknown => {}
            }

            let point = self.midpoint_of(&b);
            if certify_point(self.nvc, &point, self.cfg.prec) {
                self.stats.elapsed = started.elapsed();
                return Verdict::PotentialCounterexample { point, certified: true };
            }

            if b.depth >= self.cfg.max_depth {
                self.abandon(&b);
                continue;
            }
            match self.widest_dim(&b) {
                None => self.abandon(&b),
                Some(dim) => {
                    let (l, r) = self.split(&b, dim);
                    worklist.push(r);
                    worklist.push(l);
                }
            }
        }
        self.stats.elapsed = started.elapsed();
        if self.gave_up_any {
            Verdict::GaveUp {
                reason: GaveUpReason::ResourceLimit,
                stats: std::mem::take(&mut self.stats),
            }
        } else {
            Verdict::Proved
        }
    }
}

/// True iff every conjunct evaluates to certainly-true at the degenerate
/// interval point, under exact tie-mode semantics for integer rounding.
/// Precision escalates up to four times the base before giving up.
pub fn certify_point(nvc: &ProcessedNvc, point: &Point, prec: u32) -> bool {
    let bx = point_box(point);
    let mut p = prec;
    loop {
        let ctx = EvalCtx::certification(p);
        let mut unknown = false;
        for a in &nvc.assertions {
            match eval_formula(a, &bx, &ctx) {
                Ternary::CertainlyFalse => return false,
                Ternary::Unknown => unknown = true,
                Ternary::CertainlyTrue => {}
            }
        }
        if !unknown {
            return true;
        }
        if p >= prec * 4 {
            return false;
        }
        p *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::formula::Formula;
    use crate::nvc::VarSpec;

    fn real_box(name: &str, lo: i64, hi: i64) -> (VarSpec, BoxMap) {
        let mut v = VarSpec::unbounded(name, Sort::Real);
        v.bounds = Interval::finite(Scalar::from(lo), Scalar::from(hi));
        let mut m = BoxMap::new();
        m.insert(name.to_string(), v.bounds.clone());
        (v, m)
    }

    fn quick_cfg() -> ProveConfig {
        ProveConfig {
            timeout: Duration::from_secs(30),
            ..Default::default()
        }
    }

    #[test]
    fn square_nonnegativity_proved() {
        let (v, bx) = real_box("x", -1, 1);
        let nvc = ProcessedNvc::new(
            vec![v],
            vec![Formula::not(Formula::le(Expr::int(0), Expr::pow(Expr::var("x"), 2)))],
        );
        assert!(decide(&nvc, &bx, &quick_cfg()).is_proved());
    }

    #[test]
    fn parabola_bound_proved() {
        // x(1-x) never reaches 0.3 on [0,1] (max 1/4 at 1/2).
        let (v, bx) = real_box("x", 0, 1);
        let nvc = ProcessedNvc::new(
            vec![v],
            vec![Formula::le(
                Expr::lit(Scalar::from((3, 10))),
                Expr::mul(Expr::var("x"), Expr::sub(Expr::int(1), Expr::var("x"))),
            )],
        );
        assert!(decide(&nvc, &bx, &quick_cfg()).is_proved());
    }

    #[test]
    fn satisfiable_sine_gives_certified_point() {
        let (v, bx) = real_box("x", 0, 1);
        let nvc = ProcessedNvc::new(
            vec![v],
            vec![Formula::le(
                Expr::lit(Scalar::from((4, 10))),
                Expr::sin(Expr::var("x")),
            )],
        );
        let verdict = decide(&nvc, &bx, &quick_cfg());
        let point = verdict.certified_point().expect("certified counter-example");
        // Independent re-check at very high precision.
        assert!(certify_point(&nvc, point, 512));
        assert!(point["x"] >= Scalar::from((2, 5)));
    }

    #[test]
    fn unbounded_box_gives_up() {
        let v = VarSpec::unbounded("x", Sort::Real);
        let bx = BoxMap::from([("x".to_string(), Interval::entire())]);
        let nvc = ProcessedNvc::new(vec![v], vec![Formula::le(Expr::int(0), Expr::var("x"))]);
        let verdict = decide(&nvc, &bx, &quick_cfg());
        assert!(matches!(
            verdict,
            Verdict::GaveUp { reason: GaveUpReason::UnboundedBox, .. }
        ));
    }

    #[test]
    fn false_assertion_proved_immediately() {
        let (v, bx) = real_box("x", 0, 1);
        let nvc = ProcessedNvc::new(vec![v], vec![Formula::False]);
        assert!(decide(&nvc, &bx, &quick_cfg()).is_proved());
    }

    #[test]
    fn empty_assertions_certified_midpoint() {
        let (v, bx) = real_box("x", 0, 1);
        let nvc = ProcessedNvc::new(vec![v], vec![]);
        let verdict = decide(&nvc, &bx, &quick_cfg());
        let point = verdict.certified_point().expect("trivially satisfiable");
        assert_eq!(point["x"], Scalar::from((1, 2)));
    }

    #[test]
    fn integer_branching_with_mod() {
        // mod r 4 <= 3 holds for every integer r in [0, 511].
        let mut v = VarSpec::unbounded("r", Sort::Int);
        v.bounds = Interval::finite(Scalar::from(0), Scalar::from(511));
        let bx = BoxMap::from([("r".to_string(), v.bounds.clone())]);
        let nvc = ProcessedNvc::new(
            vec![v],
            vec![Formula::not(Formula::le(
                Expr::modulo(Expr::var("r"), Expr::int(4)),
                Expr::int(3),
            ))],
        );
        assert!(decide(&nvc, &bx, &quick_cfg()).is_proved());
    }

    #[test]
    fn integer_point_solution_found() {
        // mod r 7 = 3 and r >= 100: satisfiable at r = 101, 108, ...
        let mut v = VarSpec::unbounded("r", Sort::Int);
        v.bounds = Interval::finite(Scalar::from(100), Scalar::from(120));
        let bx = BoxMap::from([("r".to_string(), v.bounds.clone())]);
        let nvc = ProcessedNvc::new(
            vec![v],
            vec![Formula::eq(
                Expr::modulo(Expr::var("r"), Expr::int(7)),
                Expr::int(3),
            )],
        );
        let verdict = decide(&nvc, &bx, &quick_cfg());
        let point = verdict.certified_point().expect("certified");
        assert_eq!(
            crate::interval::euclid_mod(&point["r"], &Scalar::from(7)),
            Scalar::from(3)
        );
    }

    #[test]
    fn touching_bound_gives_up_with_candidate() {
        // x(1-x) <= 1/4 touches at x = 1/2: interval methods cannot close
        // the complement, so the prover abandons shrunken boxes around it.
        let (v, bx) = real_box("x", 0, 1);
        let nvc = ProcessedNvc::new(
            vec![v],
            vec![Formula::not(Formula::le(
                Expr::mul(Expr::var("x"), Expr::sub(Expr::int(1), Expr::var("x"))),
                Expr::lit(Scalar::from((1, 4))),
            ))],
        );
        let cfg = ProveConfig {
            min_box_width: crate::scalar::pow2(-24),
            timeout: Duration::from_secs(30),
            ..Default::default()
        };
        let verdict = decide(&nvc, &bx, &cfg);
        let Verdict::GaveUp { reason, stats } = verdict else {
            panic!("expected give-up, got {verdict:?}");
        };
        assert_eq!(reason, GaveUpReason::ResourceLimit);
        let best = stats.best_point.expect("candidate point");
        // The near-tight candidate hugs the touching point.
        assert!((best["x"].clone() - Scalar::from((1, 2))).abs() < Scalar::from((1, 100)));
    }

    #[test]
    fn strict_atom_at_boundary_not_certified() {
        let (v, _) = real_box("x", 0, 1);
        let nvc = ProcessedNvc::new(
            vec![v],
            vec![Formula::lt(Expr::var("x"), Expr::int(1))],
        );
        let mut point = Point::new();
        point.insert("x".to_string(), Scalar::from(1));
        assert!(!certify_point(&nvc, &point, 113));
        point.insert("x".to_string(), Scalar::from((1, 2)));
        assert!(certify_point(&nvc, &point, 113));
    }

    #[test]
    fn timeout_reports_gave_up() {
        // Touching problem again, but with a timeout that cannot finish.
        let (v, bx) = real_box("x", 0, 1);
        let nvc = ProcessedNvc::new(
            vec![v],
            vec![Formula::not(Formula::le(
                Expr::mul(Expr::var("x"), Expr::sub(Expr::int(1), Expr::var("x"))),
                Expr::lit(Scalar::from((1, 4))),
            ))],
        );
        let cfg = ProveConfig {
            timeout: Duration::from_millis(50),
            min_box_width: crate::scalar::pow2(-2000),
            max_depth: u32::MAX,
            ..Default::default()
        };
        let verdict = decide(&nvc, &bx, &cfg);
        assert!(matches!(
            verdict,
            Verdict::GaveUp { reason: GaveUpReason::Timeout, .. }
        ));
    }

    #[test]
    fn deterministic_verdicts() {
        let (v, bx) = real_box("x", 0, 1);
        let nvc = ProcessedNvc::new(
            vec![v],
            vec![Formula::le(
                Expr::lit(Scalar::from((4, 10))),
                Expr::sin(Expr::var("x")),
            )],
        );
        let a = decide(&nvc, &bx, &quick_cfg());
        let b = decide(&nvc, &bx, &quick_cfg());
        assert_eq!(a.certified_point(), b.certified_point());
    }
}
