//! Agents that replay recorded moves.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::engine::replay::scripted_failure;
use crate::engine::{
    AgentError, CopAgent, Ctx, ForfeitReason, GameParams, GameState, MovePath, PsiView, RhoView, RobberAgent,
    RobberView, Side, Table, Trace,
};
use crate::space::Vertex;

fn failure_error(reason: ForfeitReason, detail: String) -> AgentError {
    match reason {
        ForfeitReason::Protocol => AgentError::Protocol(detail),
        ForfeitReason::Precondition => AgentError::Precondition(detail),
        ForfeitReason::StrategyUnavailable => AgentError::StrategyUnavailable(detail),
        ForfeitReason::StrategyInvariant => AgentError::StrategyInvariant(detail),
        ForfeitReason::OracleFailure => AgentError::OracleCaught(detail),
    }
}

struct Script {
    failure: Option<(u64, ForfeitReason, String)>,
}

impl Script {
    fn declared(&self, value: u64, what: &str) -> Result<u64, AgentError> {
        if value > 0 {
            return Ok(value);
        }
        Err(self.exhausted(0, what))
    }

    fn exhausted(&self, stage: u64, what: &str) -> AgentError {
        match &self.failure {
            Some((s, reason, detail)) if *s == stage => failure_error(*reason, detail.clone()),
            _ => AgentError::Protocol(format!("script has no {what} for stage {stage}")),
        }
    }
}

/// Replays the cop side of a trace. Once the script runs out the cops either
/// stay put or report a protocol error, depending on `stay_when_exhausted`.
pub struct ScriptedCop {
    sigma: u64,
    rho: u64,
    placements: Vec<Vertex>,
    moves: Vec<Vec<MovePath>>,
    script: Script,
    stay_when_exhausted: bool,
}

impl ScriptedCop {
    pub fn from_trace(trace: &Trace) -> Self {
        let placements = trace
            .placements()
            .map(|s| s.cop_moves.iter().map(|p| p.end().clone()).collect())
            .unwrap_or_default();
        let moves = trace.stages.iter().filter(|s| s.stage > 0).map(|s| s.cop_moves.clone()).collect();
        Self {
            sigma: trace.params.sigma,
            rho: trace.params.rho,
            placements,
            moves,
            script: Script { failure: scripted_failure(trace, Side::Cop) },
            stay_when_exhausted: false,
        }
    }

    pub fn stay_when_exhausted(mut self) -> Self {
        self.stay_when_exhausted = true;
        self
    }
}

impl CopAgent for ScriptedCop {
    fn choose_sigma(&mut self, _: &Table<'_>, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        self.script.declared(self.sigma, "sigma")
    }

    fn choose_rho(&mut self, _: &Table<'_>, _: RhoView, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        self.script.declared(self.rho, "rho")
    }

    fn place(&mut self, _: &Table<'_>, _: &GameParams, _: &mut Ctx<'_>) -> Result<Vec<Vertex>, AgentError> {
        if self.placements.is_empty() {
            return Err(self.script.exhausted(0, "placement"));
        }
        Ok(self.placements.clone())
    }

    fn moves(
        &mut self,
        _: &Table<'_>,
        _: &GameParams,
        state: &GameState,
        _: &mut Ctx<'_>,
    ) -> Result<Vec<MovePath>, AgentError> {
        match self.moves.get(state.stage as usize - 1) {
            Some(m) => Ok(m.clone()),
            None if self.stay_when_exhausted => Ok(state.cops.iter().cloned().map(MovePath::stay).collect()),
            None => Err(self.script.exhausted(state.stage, "cop moves")),
        }
    }
}

/// Replays the robber side of a trace.
pub struct ScriptedRobber {
    psi: u64,
    radius: u64,
    placement: Option<Vertex>,
    moves: Vec<MovePath>,
    script: Script,
}

impl ScriptedRobber {
    pub fn from_trace(trace: &Trace) -> Self {
        let placement = trace.placements().map(|s| s.robber_move.end().clone());
        // A stage that ended with a capture during the cop move holds a stay path
        // the robber never chose; it is never requested either.
        let moves = trace.stages.iter().filter(|s| s.stage > 0).map(|s| s.robber_move.clone()).collect();
        Self {
            psi: trace.params.psi,
            radius: trace.params.radius,
            placement,
            moves,
            script: Script { failure: scripted_failure(trace, Side::Robber) },
        }
    }
}

impl RobberAgent for ScriptedRobber {
    fn choose_psi(&mut self, _: &Table<'_>, _: PsiView, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        self.script.declared(self.psi, "psi")
    }

    fn choose_radius(&mut self, _: &Table<'_>, _: u64, _: u64, _: u64, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        self.script.declared(self.radius, "R")
    }

    fn place(&mut self, _: &Table<'_>, _: &GameParams, _: &[Vertex], _: &mut Ctx<'_>) -> Result<Vertex, AgentError> {
        self.placement.clone().ok_or_else(|| self.script.exhausted(0, "placement"))
    }

    fn moves(
        &mut self,
        _: &Table<'_>,
        _: &GameParams,
        view: &RobberView<'_>,
        _: &mut Ctx<'_>,
    ) -> Result<MovePath, AgentError> {
        match self.moves.get(view.stage as usize - 1) {
            Some(m) => Ok(m.clone()),
            None => Err(self.script.exhausted(view.stage, "robber move")),
        }
    }
}
