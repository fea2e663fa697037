//! Re-simulation of stored traces and independent capture re-scans.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{run, EngineError, ForfeitReason, Outcome, RunConfig, Side, Trace};
use crate::agents::scripted::{ScriptedCop, ScriptedRobber};
use crate::space::{Space, SpaceError, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divergence {
    pub stage: u64,
    pub what: String,
}

/// Re-plays the recorded moves through the engine and compares every stage
/// record and the outcome. Runtime assertions of the original strategies are
/// not re-derived; legality, captures, distances and ball membership are.
pub fn replay(space: &Space, trace: &Trace) -> Result<Result<(), Divergence>, EngineError> {
    let mut cop = ScriptedCop::from_trace(trace);
    let mut robber = ScriptedRobber::from_trace(trace);
    let config = RunConfig {
        cops: trace.params.n,
        horizon: trace.params.horizon,
        seed: trace.seed,
        fail_fast: false,
    };
    let again = run(space, trace.variant, &mut cop, &mut robber, &config)?;
    let truncated = matches!(trace.outcome, Outcome::AssertionFailed { .. });
    for (i, recorded) in trace.stages.iter().enumerate() {
        match again.stages.get(i) {
            Some(s) if s == recorded => {}
            Some(s) => {
                let what = if s.robber_move != recorded.robber_move || s.cop_moves != recorded.cop_moves {
                    "moves differ (illegal or inconsistent path)"
                } else if s.min_cop_dist != recorded.min_cop_dist {
                    "minCopDist differs"
                } else {
                    "inBall differs"
                };
                return Ok(Err(Divergence { stage: recorded.stage, what: what.into() }));
            }
            None => {
                let what = format!("re-simulation stopped early: {:?}", again.outcome);
                return Ok(Err(Divergence { stage: recorded.stage, what }));
            }
        }
    }
    if truncated {
        return Ok(Ok(()));
    }
    if again.stages.len() > trace.stages.len() {
        let stage = again.stages[trace.stages.len()].stage;
        return Ok(Err(Divergence { stage, what: "recorded trace ends early".into() }));
    }
    let same = match (&trace.outcome, &again.outcome) {
        (
            Outcome::Forfeit { stage: a, side: sa, .. },
            Outcome::Forfeit { stage: b, side: sb, .. },
        ) => a == b && sa == sb,
        (a, b) => a == b,
    };
    if same {
        Ok(Ok(()))
    } else {
        let stage = trace.stages.last().map_or(0, |s| s.stage);
        Ok(Err(Divergence { stage, what: format!("outcome {:?} != recorded {:?}", again.outcome, trace.outcome) }))
    }
}

/// Re-scans every capture checkpoint of a trace with breadth-first distances
/// and the given reach. Returns the first `(stage, cop)` within reach.
pub fn recheck_reach(space: &Space, trace: &Trace, reach: u64) -> Result<Option<(u64, usize)>, SpaceError> {
    let close = |x: &Vertex, c: &Vertex| -> Result<bool, SpaceError> {
        Ok(space.bfs_distance(x, c, reach)?.is_some())
    };
    let mut cops: Vec<Vertex>;
    let mut robber: Option<Vertex> = None;
    for s in &trace.stages {
        if s.stage == 0 {
            cops = s.cop_moves.iter().map(|p| p.end().clone()).collect();
            let r = s.robber_move.end();
            for (i, c) in cops.iter().enumerate() {
                if close(r, c)? {
                    return Ok(Some((0, i)));
                }
            }
            robber = Some(r.clone());
            continue;
        }
        if let Some(r) = &robber {
            for (i, p) in s.cop_moves.iter().enumerate() {
                for x in &p.0[1..] {
                    if close(x, r)? {
                        return Ok(Some((s.stage, i)));
                    }
                }
            }
        }
        cops = s.cop_moves.iter().map(|p| p.end().clone()).collect();
        for x in &s.robber_move.0 {
            for (i, c) in cops.iter().enumerate() {
                if close(x, c)? {
                    return Ok(Some((s.stage, i)));
                }
            }
        }
        robber = Some(s.robber_move.end().clone());
    }
    Ok(None)
}

/// The forfeit a scripted side must reproduce, if the trace ended in one.
pub(crate) fn scripted_failure(trace: &Trace, side: Side) -> Option<(u64, ForfeitReason, String)> {
    match &trace.outcome {
        Outcome::Forfeit { stage, side: s, reason, detail } if *s == side => {
            Some((*stage, *reason, detail.clone()))
        }
        _ => None,
    }
}
