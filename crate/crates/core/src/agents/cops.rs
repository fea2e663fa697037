//! Adversary cops.

use alloc::vec::Vec;

use rand::Rng;

use crate::engine::{AgentError, CopAgent, Ctx, GameParams, GameState, MovePath, RhoView, Table};
use crate::space::{Space, SpaceKind, Vertex};

/// Every cop walks σ steps along the tie-broken geodesic toward the robber.
#[derive(Clone, Debug)]
pub struct GreedyCop {
    pub sigma: u64,
    pub rho: u64,
}

impl GreedyCop {
    pub fn new(sigma: u64, rho: u64) -> Self {
        Self { sigma, rho }
    }
}

impl CopAgent for GreedyCop {
    fn choose_sigma(&mut self, _: &Table<'_>, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        Ok(self.sigma)
    }

    fn choose_rho(&mut self, _: &Table<'_>, _: RhoView, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        Ok(self.rho)
    }

    fn place(&mut self, t: &Table<'_>, params: &GameParams, _: &mut Ctx<'_>) -> Result<Vec<Vertex>, AgentError> {
        Ok(alloc::vec![t.treasure.clone(); params.n])
    }

    fn moves(
        &mut self,
        t: &Table<'_>,
        params: &GameParams,
        state: &GameState,
        _: &mut Ctx<'_>,
    ) -> Result<Vec<MovePath>, AgentError> {
        state
            .cops
            .iter()
            .map(|c| Ok(MovePath(t.space.geodesic_prefix(c, &state.robber, u64::MAX, params.sigma)?)))
            .collect()
    }
}

/// Random walks: each cop picks a length in `0..=σ` and steps to uniformly
/// random neighbors. Placement is a random walk of up to 8 steps from the treasure.
#[derive(Clone, Debug)]
pub struct RandomCop {
    pub sigma: u64,
    pub rho: u64,
}

impl RandomCop {
    pub fn new(sigma: u64, rho: u64) -> Self {
        Self { sigma, rho }
    }
}

fn random_walk(space: &Space, from: &Vertex, steps: u64, cx: &mut Ctx<'_>) -> Result<Vec<Vertex>, AgentError> {
    let mut path = alloc::vec![from.clone()];
    for _ in 0..steps {
        let mut ns = space.neighbors(path.last().expect("nonempty"))?;
        let pick = cx.rng.gen_range(0..ns.len());
        path.push(ns.swap_remove(pick));
    }
    Ok(path)
}

impl CopAgent for RandomCop {
    fn choose_sigma(&mut self, _: &Table<'_>, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        Ok(self.sigma)
    }

    fn choose_rho(&mut self, _: &Table<'_>, _: RhoView, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        Ok(self.rho)
    }

    fn place(&mut self, t: &Table<'_>, params: &GameParams, cx: &mut Ctx<'_>) -> Result<Vec<Vertex>, AgentError> {
        (0..params.n)
            .map(|_| {
                let steps = cx.rng.gen_range(0..=8);
                Ok(random_walk(t.space, t.treasure, steps, cx)?.pop().expect("nonempty"))
            })
            .collect()
    }

    fn moves(
        &mut self,
        t: &Table<'_>,
        params: &GameParams,
        state: &GameState,
        cx: &mut Ctx<'_>,
    ) -> Result<Vec<MovePath>, AgentError> {
        state
            .cops
            .iter()
            .map(|c| {
                let steps = cx.rng.gen_range(0..=params.sigma);
                Ok(MovePath(random_walk(t.space, c, steps, cx)?))
            })
            .collect()
    }
}

/// On the line: walk toward the robber, at most σ steps and never past it.
#[derive(Clone, Debug)]
pub struct PusherCop {
    pub sigma: u64,
    pub rho: u64,
}

impl PusherCop {
    pub fn new(sigma: u64, rho: u64) -> Self {
        Self { sigma, rho }
    }
}

impl CopAgent for PusherCop {
    fn choose_sigma(&mut self, t: &Table<'_>, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        match t.space.kind() {
            SpaceKind::Line | SpaceKind::Grid { dim: 1 } => Ok(self.sigma),
            _ => Err(AgentError::Precondition("the pusher plays on the line only".into())),
        }
    }

    fn choose_rho(&mut self, _: &Table<'_>, _: RhoView, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        Ok(self.rho)
    }

    fn place(&mut self, t: &Table<'_>, params: &GameParams, _: &mut Ctx<'_>) -> Result<Vec<Vertex>, AgentError> {
        Ok(alloc::vec![t.treasure.clone(); params.n])
    }

    fn moves(
        &mut self,
        _: &Table<'_>,
        params: &GameParams,
        state: &GameState,
        _: &mut Ctx<'_>,
    ) -> Result<Vec<MovePath>, AgentError> {
        let target = coord(&state.robber)?;
        state
            .cops
            .iter()
            .map(|c| {
                let from = coord(c)?;
                let gap = target - from;
                let steps = gap.unsigned_abs().min(params.sigma) as i64;
                let dir = gap.signum();
                Ok(MovePath((0..=steps).map(|i| Vertex::Grid(alloc::vec![from + dir * i])).collect()))
            })
            .collect()
    }
}

fn coord(v: &Vertex) -> Result<i64, AgentError> {
    match v {
        Vertex::Grid(c) if c.len() == 1 => Ok(c[0]),
        _ => Err(AgentError::Precondition("the pusher plays on the line only".into())),
    }
}
