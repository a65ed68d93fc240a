//! End-to-end orchestration: parse, simplify, derive bounds, bound rounding
//! errors, eliminate floating-point operations, simplify again, prove.
//!
//! `process` runs everything up to and including FP elimination and returns
//! the exact NVC plus per-stage timings; `prove` hands the result to the
//! built-in prover. An empty variable box anywhere short-circuits to Proved:
//! the conjunction has no models at all.

use crate::bounds::{derive_bounds, refine_ctx, BoundsError, BoundsResult, DEFAULT_MAX_ROUNDS};
use crate::eval::{EvalCtx, RoundingParams};
use crate::fpelim::{
    collect_fp_contexts, compute_error_bound_ctx, eliminate_fp, BoundError, BoundSource,
    ElimError, FpContext,
};
use crate::frontend::{FrontendError, ParseReport};
use crate::nvc::ProcessedNvc;
use crate::prover::{decide, ProveConfig, Verdict};
use crate::scalar::Scalar;
use crate::textfmt::read_auto;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub prec: u32,
    pub prove: ProveConfig,
    /// Externally computed error bounds, matched by context id prefix
    /// (`*` matches every context).
    pub injected_bounds: Vec<(String, Scalar)>,
    pub rounding: RoundingParams,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            prec: crate::eval::DEFAULT_PREC,
            prove: ProveConfig::default(),
            injected_bounds: Vec::new(),
            rounding: RoundingParams::default(),
        }
    }
}

impl PipelineConfig {
    fn eval_ctx(&self) -> EvalCtx {
        EvalCtx {
            prec: self.prec,
            exact_points: false,
            params: self.rounding.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct StageTiming {
    pub name: &'static str,
    pub millis: u128,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("frontend: {0}")]
    Frontend(#[from] FrontendError),
    #[error("error bound for context {id}: {source}")]
    Bound { id: String, source: BoundError },
    #[error("elimination: {0}")]
    Elim(#[from] ElimError),
}

#[derive(Debug)]
pub struct ProcessOutcome {
    /// Simplified exact NVC, ready for provers.
    pub nvc: ProcessedNvc,
    /// The NVC as it stood when contexts were collected (before
    /// elimination); error-analysis exports refer to this stage.
    pub pre_elimination: ProcessedNvc,
    pub contexts: Vec<FpContext>,
    pub bounds: BoundsResult,
    pub report: ParseReport,
    pub timings: Vec<StageTiming>,
    /// Bounds derivation produced an empty box: unsatisfiable outright.
    pub empty_box: Option<String>,
}

fn timed<T>(timings: &mut Vec<StageTiming>, name: &'static str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    timings.push(StageTiming { name, millis: start.elapsed().as_millis() });
    out
}

/// Runs the processing stages on input text (SMT-LIB or corpus format).
pub fn process(text: &str, cfg: &PipelineConfig) -> Result<ProcessOutcome, PipelineError> {
    let mut timings = Vec::new();

    let (parsed, report) = timed(&mut timings, "parse", || read_auto(text))?;

    let ectx = cfg.eval_ctx();
    let refined = timed(&mut timings, "simplify+bounds", || refine_ctx(&parsed, &ectx));
    let (nvc, bounds) = match refined {
        Ok(pair) => pair,
        Err(BoundsError::EmptyBox(name)) => {
            let empty = ProcessedNvc::new(parsed.vars.clone(), vec![crate::formula::Formula::False]);
            let bounds = BoundsResult {
                box_map: parsed.box_map(),
                rounds: 0,
                converged: true,
            };
            return Ok(ProcessOutcome {
                nvc: empty.clone(),
                pre_elimination: empty,
                contexts: Vec::new(),
                bounds,
                report,
                timings,
                empty_box: Some(name),
            });
        }
    };

    let mut contexts = timed(&mut timings, "collect-contexts", || collect_fp_contexts(&nvc));

    timed(&mut timings, "error-bounds", || -> Result<(), PipelineError> {
        for ctx in contexts.iter_mut() {
            let id = ctx.id();
            if let Some((_, bound)) = cfg
                .injected_bounds
                .iter()
                .find(|(key, _)| key == "*" || (key.len() >= 4 && id.starts_with(key.as_str())))
            {
                ctx.bound = Some(bound.clone());
                ctx.source = BoundSource::External("injected".to_string());
                continue;
            }
            let bound = compute_error_bound_ctx(ctx, &bounds.box_map, &ectx)
                .map_err(|source| PipelineError::Bound { id: id.clone(), source })?;
            ctx.bound = Some(bound);
            ctx.source = BoundSource::Internal;
        }
        Ok(())
    })?;

    let eliminated = timed(&mut timings, "eliminate-fp", || eliminate_fp(&nvc, &contexts))?;

    let refined2 = timed(&mut timings, "resimplify", || refine_ctx(&eliminated, &ectx));
    let (final_nvc, final_bounds, empty_box) = match refined2 {
        Ok((n, b)) => (n, b, None),
        Err(BoundsError::EmptyBox(name)) => {
            let n = ProcessedNvc::new(eliminated.vars.clone(), vec![crate::formula::Formula::False]);
            let b = BoundsResult { box_map: eliminated.box_map(), rounds: 0, converged: true };
            (n, b, Some(name))
        }
    };

    Ok(ProcessOutcome {
        nvc: final_nvc,
        pre_elimination: nvc,
        contexts,
        bounds: final_bounds,
        report,
        timings,
        empty_box,
    })
}

/// Decides the processed NVC with the built-in prover.
pub fn prove(outcome: &ProcessOutcome, cfg: &PipelineConfig) -> Verdict {
    if outcome.empty_box.is_some() {
        return Verdict::Proved;
    }
    if outcome
        .nvc
        .assertions
        .iter()
        .any(|a| matches!(a, crate::formula::Formula::False))
    {
        return Verdict::Proved;
    }
    let mut prove_cfg = cfg.prove.clone();
    prove_cfg.prec = cfg.prec;
    decide(&outcome.nvc, &outcome.bounds.box_map, &prove_cfg)
}

/// Re-derives bounds only, without pruning; used by bounds reporting.
pub fn derive_only(text: &str, prec: u32) -> Result<(ProcessedNvc, Result<BoundsResult, BoundsError>), FrontendError> {
    let (parsed, _) = read_auto(text)?;
    let simplified = crate::simplify::simplify_fixpoint(&parsed);
    let bounds = derive_bounds(&simplified, prec, DEFAULT_MAX_ROUNDS);
    Ok((simplified, bounds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use crate::prover::Verdict;

    const SIMPLE: &str = "\
x (real) ∈ (-inf, inf)

assert (<= -0.5 x)
assert (<= x 0.5)
assert (not (<= 0.4 (sin x)))
";

    #[test]
    fn process_derives_and_absorbs() {
        let cfg = PipelineConfig::default();
        let out = process(SIMPLE, &cfg).unwrap();
        assert_eq!(
            out.bounds.box_map["x"],
            Interval::finite(Scalar::from((-1, 2)), Scalar::from((1, 2)))
        );
        assert_eq!(out.nvc.assertions.len(), 1);
        assert!(out.contexts.is_empty());
        assert!(!out.timings.is_empty());
    }

    #[test]
    fn prove_finds_sine_counterexample() {
        // sin(0.5) ~ 0.479 >= 0.4, so the negated goal has a model.
        let cfg = PipelineConfig::default();
        let out = process(SIMPLE, &cfg).unwrap();
        let verdict = prove(&out, &cfg);
        assert!(verdict.certified_point().is_some());
    }

    #[test]
    fn contradiction_short_circuits() {
        let text = "\
x (real) ∈ (-inf, inf)

assert (<= 2 x)
assert (<= x 1)
";
        let cfg = PipelineConfig::default();
        let out = process(text, &cfg).unwrap();
        assert!(out.empty_box.is_some());
        assert!(prove(&out, &cfg).is_proved());
    }

    #[test]
    fn fp_atom_decided_by_intervals_before_elimination() {
        // The rounding over-approximation of x*x stays under 0.3, so the
        // goal atom is decided during pruning and no context survives.
        let text = "\
x (float32) ∈ (-inf, inf)

assert (<= -0.5 x)
assert (<= x 0.5)
assert (not (<= (fp.mul RNE x x) 0.3))
";
        let cfg = PipelineConfig::default();
        let out = process(text, &cfg).unwrap();
        assert!(out.contexts.is_empty());
        let verdict = prove(&out, &cfg);
        assert!(verdict.is_proved(), "{verdict:?}");
    }

    #[test]
    fn fp_pipeline_end_to_end() {
        // x (-) x cannot be decided at the top box because interval
        // subtraction loses the correlation; elimination plus bisection
        // closes it.
        let text = "\
x (float32) ∈ (-inf, inf)

assert (<= -0.5 x)
assert (<= x 0.5)
assert (not (<= (fp.sub RNE x x) 0.1))
";
        let cfg = PipelineConfig::default();
        let out = process(text, &cfg).unwrap();
        assert_eq!(out.contexts.len(), 1);
        assert!(out.contexts[0].bound.is_some());
        assert!(!out.nvc.contains_round_fp());
        let verdict = prove(&out, &cfg);
        assert!(verdict.is_proved(), "{verdict:?}");
    }

    #[test]
    fn injected_bound_overrides_internal() {
        let text = "\
x (float32) ∈ [-0.5, 0.5]

assert (not (<= (fp.mul RNE x x) 0.2))
";
        let mut cfg = PipelineConfig::default();
        cfg.injected_bounds.push(("*".to_string(), Scalar::from((1, 1000))));
        let out = process(text, &cfg).unwrap();
        assert_eq!(out.contexts.len(), 1);
        assert_eq!(out.contexts[0].bound, Some(Scalar::from((1, 1000))));
        assert_eq!(
            out.contexts[0].source,
            BoundSource::External("injected".to_string())
        );
        // x^2 does exceed 0.2 near the edges: certified counter-example.
        let verdict = prove(&out, &cfg);
        let point = verdict.certified_point().expect("counter-example");
        assert!(point["x"].clone().abs() > Scalar::from((44, 100)));
    }

    #[test]
    fn unbounded_fp_context_is_an_error() {
        let text = "\
x (float32) ∈ (-inf, inf)

assert (not (<= (fp.mul RNE x x) 0.3))
";
        let cfg = PipelineConfig::default();
        let err = process(text, &cfg).unwrap_err();
        assert!(matches!(err, PipelineError::Bound { .. }));
    }

    #[test]
    fn verdict_gave_up_on_unbounded_goal_var() {
        let text = "\
x (real) ∈ (-inf, inf)

assert (not (<= (* x x) 4))
";
        let cfg = PipelineConfig::default();
        let out = process(text, &cfg).unwrap();
        let verdict = prove(&out, &cfg);
        assert!(matches!(
            verdict,
            Verdict::GaveUp { reason: crate::prover::GaveUpReason::UnboundedBox, .. }
        ));
    }
}
