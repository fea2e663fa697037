use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;

use super::{AssertionLog, GameParams, GameState, MovePath, Variant};
use crate::space::{SpaceError, Vertex};
use crate::space::Space;

/// What every callback may look at: the board and the fixed game data.
#[derive(Clone, Copy, Debug)]
pub struct Table<'a> {
    pub space: &'a Space,
    pub variant: Variant,
    pub cops: usize,
    pub treasure: &'a Vertex,
}

/// The robber's view when declaring ψ. The weak order reveals ρ, the strong
/// order does not.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsiView {
    Weak { sigma: u64, rho: u64 },
    Strong { sigma: u64 },
}

impl PsiView {
    pub fn sigma(&self) -> u64 {
        match *self {
            PsiView::Weak { sigma, .. } | PsiView::Strong { sigma } => sigma,
        }
    }
}

/// The cops' view when declaring ρ. The strong order reveals ψ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhoView {
    Weak { sigma: u64 },
    Strong { sigma: u64, psi: u64 },
}

/// Per-callback context: the run's seeded generator and the assertion sink.
pub struct Ctx<'a> {
    pub rng: &'a mut ChaCha8Rng,
    pub log: &'a mut AssertionLog,
    pub stage: u64,
}

impl Ctx<'_> {
    pub fn check(&mut self, name: &str, pass: bool, detail: impl FnOnce() -> String) -> bool {
        self.log.record(self.stage, name, pass, if pass { String::new() } else { detail() });
        pass
    }

    /// Records a pass/fail line whose detail is kept for passes too.
    pub fn note(&mut self, name: &str, pass: bool, detail: String) -> bool {
        self.log.record(self.stage, name, pass, detail);
        pass
    }
}

/// What the robber sees when it moves: positions after the cops' move and
/// the paths the cops just walked.
#[derive(Clone, Copy, Debug)]
pub struct RobberView<'a> {
    pub stage: u64,
    pub robber: &'a Vertex,
    pub cops: &'a [Vertex],
    pub cop_moves: &'a [MovePath],
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AgentError {
    #[error("protocol violation: {0}")]
    Protocol(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("strategy unavailable: {0}")]
    StrategyUnavailable(String),
    #[error("strategy invariant violated: {0}")]
    StrategyInvariant(String),
    #[error("oracle caught: {0}")]
    OracleCaught(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

pub trait CopAgent {
    fn choose_sigma(&mut self, table: &Table<'_>, cx: &mut Ctx<'_>) -> Result<u64, AgentError>;
    fn choose_rho(&mut self, table: &Table<'_>, view: RhoView, cx: &mut Ctx<'_>) -> Result<u64, AgentError>;
    fn place(&mut self, table: &Table<'_>, params: &GameParams, cx: &mut Ctx<'_>) -> Result<Vec<Vertex>, AgentError>;
    fn moves(
        &mut self,
        table: &Table<'_>,
        params: &GameParams,
        state: &GameState,
        cx: &mut Ctx<'_>,
    ) -> Result<Vec<MovePath>, AgentError>;
    /// Called once when the game ends, whatever the outcome.
    fn finish(&mut self, _table: &Table<'_>, _state: &GameState, _outcome: &super::Outcome) {}
}

pub trait RobberAgent {
    fn choose_psi(&mut self, table: &Table<'_>, view: PsiView, cx: &mut Ctx<'_>) -> Result<u64, AgentError>;
    fn choose_radius(
        &mut self,
        table: &Table<'_>,
        sigma: u64,
        psi: u64,
        rho: u64,
        cx: &mut Ctx<'_>,
    ) -> Result<u64, AgentError>;
    fn place(
        &mut self,
        table: &Table<'_>,
        params: &GameParams,
        cops: &[Vertex],
        cx: &mut Ctx<'_>,
    ) -> Result<Vertex, AgentError>;
    fn moves(
        &mut self,
        table: &Table<'_>,
        params: &GameParams,
        view: &RobberView<'_>,
        cx: &mut Ctx<'_>,
    ) -> Result<MovePath, AgentError>;
    /// Called once when the game ends; strategies flush pending checks here.
    fn finish(&mut self, _table: &Table<'_>, _params: &GameParams, _cx: &mut Ctx<'_>) {}
}

impl<T: CopAgent + ?Sized> CopAgent for alloc::boxed::Box<T> {
    fn choose_sigma(&mut self, table: &Table<'_>, cx: &mut Ctx<'_>) -> Result<u64, AgentError> {
        (**self).choose_sigma(table, cx)
    }
    fn choose_rho(&mut self, table: &Table<'_>, view: RhoView, cx: &mut Ctx<'_>) -> Result<u64, AgentError> {
        (**self).choose_rho(table, view, cx)
    }
    fn place(&mut self, table: &Table<'_>, params: &GameParams, cx: &mut Ctx<'_>) -> Result<Vec<Vertex>, AgentError> {
        (**self).place(table, params, cx)
    }
    fn moves(
        &mut self,
        table: &Table<'_>,
        params: &GameParams,
        state: &GameState,
        cx: &mut Ctx<'_>,
    ) -> Result<Vec<MovePath>, AgentError> {
        (**self).moves(table, params, state, cx)
    }
    fn finish(&mut self, table: &Table<'_>, state: &GameState, outcome: &super::Outcome) {
        (**self).finish(table, state, outcome)
    }
}

impl<T: RobberAgent + ?Sized> RobberAgent for alloc::boxed::Box<T> {
    fn choose_psi(&mut self, table: &Table<'_>, view: PsiView, cx: &mut Ctx<'_>) -> Result<u64, AgentError> {
        (**self).choose_psi(table, view, cx)
    }
    fn choose_radius(
        &mut self,
        table: &Table<'_>,
        sigma: u64,
        psi: u64,
        rho: u64,
        cx: &mut Ctx<'_>,
    ) -> Result<u64, AgentError> {
        (**self).choose_radius(table, sigma, psi, rho, cx)
    }
    fn place(
        &mut self,
        table: &Table<'_>,
        params: &GameParams,
        cops: &[Vertex],
        cx: &mut Ctx<'_>,
    ) -> Result<Vertex, AgentError> {
        (**self).place(table, params, cops, cx)
    }
    fn moves(
        &mut self,
        table: &Table<'_>,
        params: &GameParams,
        view: &RobberView<'_>,
        cx: &mut Ctx<'_>,
    ) -> Result<MovePath, AgentError> {
        (**self).moves(table, params, view, cx)
    }
    fn finish(&mut self, table: &Table<'_>, params: &GameParams, cx: &mut Ctx<'_>) {
        (**self).finish(table, params, cx)
    }
}
