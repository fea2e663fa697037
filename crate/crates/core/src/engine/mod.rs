//! Game semantics: negotiation in weak or strong order, placement, and the
//! stage loop with cop-first movement and capture checkpoints.

pub mod agent;
pub mod replay;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use agent::{AgentError, CopAgent, Ctx, PsiView, RhoView, RobberAgent, RobberView, Table};

use crate::space::{PathError, Space, SpaceError, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Weak,
    Strong,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Weak => "weak",
            Variant::Strong => "strong",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "weak" => Some(Variant::Weak),
            "strong" => Some(Variant::Strong),
            _ => None,
        }
    }
}

/// The six game parameters plus the horizon. Values an agent never got to
/// declare (because negotiation ended in a forfeit) are 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameParams {
    pub n: usize,
    pub treasure: Vertex,
    pub sigma: u64,
    pub psi: u64,
    pub rho: u64,
    pub radius: u64,
    pub horizon: u64,
}

/// One turn's walk. A single vertex means "stay".
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MovePath(pub Vec<Vertex>);

impl MovePath {
    pub fn stay(v: Vertex) -> Self {
        MovePath(alloc::vec![v])
    }

    pub fn start(&self) -> &Vertex {
        &self.0[0]
    }

    pub fn end(&self) -> &Vertex {
        self.0.last().expect("move paths are nonempty")
    }

    pub fn edges(&self) -> u64 {
        self.0.len().saturating_sub(1) as u64
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    CopsToMove,
    RobberToMove,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameState {
    pub cops: Vec<Vertex>,
    pub robber: Vertex,
    pub stage: u64,
    pub phase: Phase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Cop,
    Robber,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Cop => "cop",
            Side::Robber => "robber",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForfeitReason {
    Protocol,
    Precondition,
    StrategyUnavailable,
    StrategyInvariant,
    OracleFailure,
}

impl ForfeitReason {
    pub fn as_str(self) -> &'static str {
        match self {
            ForfeitReason::Protocol => "protocol",
            ForfeitReason::Precondition => "precondition",
            ForfeitReason::StrategyUnavailable => "strategy-unavailable",
            ForfeitReason::StrategyInvariant => "strategy-invariant",
            ForfeitReason::OracleFailure => "oracle-failure",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            ForfeitReason::Protocol,
            ForfeitReason::Precondition,
            ForfeitReason::StrategyUnavailable,
            ForfeitReason::StrategyInvariant,
            ForfeitReason::OracleFailure,
        ]
        .into_iter()
        .find(|r| r.as_str() == s)
    }

    fn of(e: &AgentError) -> Self {
        match e {
            AgentError::Protocol(_) | AgentError::Space(_) => ForfeitReason::Protocol,
            AgentError::Precondition(_) => ForfeitReason::Precondition,
            AgentError::StrategyUnavailable(_) => ForfeitReason::StrategyUnavailable,
            AgentError::StrategyInvariant(_) => ForfeitReason::StrategyInvariant,
            AgentError::OracleCaught(_) => ForfeitReason::OracleFailure,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Captured { stage: u64, cop_index: usize, at: Vertex },
    HorizonReached { stages: u64, ball_visit_stages: Vec<u64>, last_in_ball: bool },
    Forfeit { stage: u64, side: Side, reason: ForfeitReason, detail: String },
    /// Fail-fast mode stopped at the first failed runtime assertion.
    AssertionFailed { stage: u64, name: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssertionRecord {
    pub stage: u64,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AssertionLog {
    pub records: Vec<AssertionRecord>,
}

impl AssertionLog {
    pub fn record(&mut self, stage: u64, name: &str, pass: bool, detail: String) {
        self.records.push(AssertionRecord { stage, name: name.to_string(), pass, detail });
    }

    pub fn failures(&self) -> impl Iterator<Item = &AssertionRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn failure_count(&self) -> usize {
        self.failures().count()
    }
}

/// Stage 0 holds the placements as single-vertex paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    pub stage: u64,
    pub cop_moves: Vec<MovePath>,
    pub robber_move: MovePath,
    /// `None` when the distance exceeds the engine's search cap.
    pub min_cop_dist: Option<u64>,
    pub in_ball: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub space: String,
    pub variant: Variant,
    pub params: GameParams,
    pub seed: u64,
    pub cop_agent: String,
    pub robber_agent: String,
    pub stages: Vec<StageRecord>,
    pub outcome: Outcome,
    pub assertions: Vec<AssertionRecord>,
}

impl Trace {
    pub fn placements(&self) -> Option<&StageRecord> {
        self.stages.first().filter(|s| s.stage == 0)
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub cops: usize,
    pub horizon: u64,
    pub seed: u64,
    pub fail_fast: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("at least one cop is required")]
    NoCops,
    #[error(transparent)]
    Space(#[from] SpaceError),
}

struct Runner<'s> {
    space: &'s Space,
    variant: Variant,
    treasure: Vertex,
    config: RunConfig,
    params: GameParams,
    rng: ChaCha8Rng,
    log: AssertionLog,
    stages: Vec<StageRecord>,
    checked: usize,
}

/// Plays one game to capture, forfeit or the horizon.
pub fn run(
    space: &Space,
    variant: Variant,
    cop: &mut dyn CopAgent,
    robber: &mut dyn RobberAgent,
    config: &RunConfig,
) -> Result<Trace, EngineError> {
    if config.horizon == 0 {
        return Err(EngineError::ZeroHorizon);
    }
    if config.cops == 0 {
        return Err(EngineError::NoCops);
    }
    let treasure = space.base();
    let params = GameParams {
        n: config.cops,
        treasure: treasure.clone(),
        sigma: 0,
        psi: 0,
        rho: 0,
        radius: 0,
        horizon: config.horizon,
    };
    let mut runner = Runner {
        space,
        variant,
        treasure,
        config: config.clone(),
        params,
        rng: ChaCha8Rng::seed_from_u64(config.seed),
        log: AssertionLog::default(),
        stages: Vec::new(),
        checked: 0,
    };
    let (outcome, state) = runner.play(cop, robber)?;
    let table = Table { space, variant, cops: config.cops, treasure: &runner.treasure };
    let mut cx = Ctx { rng: &mut runner.rng, log: &mut runner.log, stage: state.stage };
    robber.finish(&table, &runner.params, &mut cx);
    cop.finish(&table, &state, &outcome);
    Ok(Trace {
        space: space.describe(),
        variant,
        params: runner.params,
        seed: config.seed,
        cop_agent: String::new(),
        robber_agent: String::new(),
        stages: runner.stages,
        outcome,
        assertions: runner.log.records,
    })
}

fn forfeit(stage: u64, side: Side, e: &AgentError) -> Outcome {
    Outcome::Forfeit { stage, side, reason: ForfeitReason::of(e), detail: e.to_string() }
}

fn protocol(stage: u64, side: Side, detail: String) -> Outcome {
    Outcome::Forfeit { stage, side, reason: ForfeitReason::Protocol, detail }
}

macro_rules! attempt {
    ($runner:expr, $stage:expr, $side:expr, $call:expr, $state:expr) => {
        match $call {
            Ok(v) => v,
            Err(e) => return Ok((forfeit($stage, $side, &e), $state)),
        }
    };
}

impl Runner<'_> {
    fn cx_parts(&mut self) -> (&mut ChaCha8Rng, &mut AssertionLog) {
        (&mut self.rng, &mut self.log)
    }

    /// In fail-fast mode, the first failure recorded since the last call.
    fn new_failure(&mut self) -> Option<(u64, String)> {
        let fresh = &self.log.records[self.checked..];
        self.checked = self.log.records.len();
        if !self.config.fail_fast {
            return None;
        }
        fresh.iter().find(|r| !r.pass).map(|r| (r.stage, r.name.clone()))
    }

    fn within(&self, u: &Vertex, w: &Vertex, reach: u64) -> Result<bool, SpaceError> {
        Ok(self.space.distance(u, w, reach)?.is_some())
    }

    fn min_cop_dist(&self, robber: &Vertex, cops: &[Vertex]) -> Result<Option<u64>, SpaceError> {
        let cap = if self.space.has_closed_form() {
            u64::MAX
        } else {
            self.params.rho + self.params.sigma + self.params.psi + 1
        };
        let mut best: Option<u64> = None;
        for c in cops {
            if let Some(d) = self.space.distance(robber, c, cap)? {
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
        Ok(best)
    }

    fn record_stage(
        &mut self,
        stage: u64,
        cop_moves: Vec<MovePath>,
        robber_move: MovePath,
        cops: &[Vertex],
    ) -> Result<bool, SpaceError> {
        let robber = robber_move.end().clone();
        let min_cop_dist = self.min_cop_dist(&robber, cops)?;
        let in_ball = self.within(&self.treasure, &robber, self.params.radius)?;
        self.stages.push(StageRecord { stage, cop_moves, robber_move, min_cop_dist, in_ball });
        Ok(in_ball)
    }

    fn play(
        &mut self,
        cop: &mut dyn CopAgent,
        robber: &mut dyn RobberAgent,
    ) -> Result<(Outcome, GameState), EngineError> {
        let space = self.space;
        let treasure = self.treasure.clone();
        let table = Table { space, variant: self.variant, cops: self.config.cops, treasure: &treasure };
        let mut state = GameState {
            cops: Vec::new(),
            robber: treasure.clone(),
            stage: 0,
            phase: Phase::CopsToMove,
        };
        let bail = |state: &GameState, o: Outcome| Ok((o, state.clone()));

        macro_rules! cx {
            ($stage:expr) => {{
                let (rng, log) = self.cx_parts();
                Ctx { rng, log, stage: $stage }
            }};
        }
        macro_rules! fail_fast {
            () => {
                if let Some((stage, name)) = self.new_failure() {
                    return bail(&state, Outcome::AssertionFailed { stage, name });
                }
            };
        }
        macro_rules! positive {
            ($v:expr, $side:expr, $what:literal) => {
                if $v == 0 {
                    return bail(&state, protocol(0, $side, format!("{} must be positive", $what)));
                }
            };
        }

        let sigma = attempt!(self, 0, Side::Cop, cop.choose_sigma(&table, &mut cx!(0)), state);
        positive!(sigma, Side::Cop, "sigma");
        self.params.sigma = sigma;
        fail_fast!();
        let (psi, rho) = match self.variant {
            Variant::Weak => {
                let rho =
                    attempt!(self, 0, Side::Cop, cop.choose_rho(&table, RhoView::Weak { sigma }, &mut cx!(0)), state);
                positive!(rho, Side::Cop, "rho");
                self.params.rho = rho;
                fail_fast!();
                let psi = attempt!(
                    self,
                    0,
                    Side::Robber,
                    robber.choose_psi(&table, PsiView::Weak { sigma, rho }, &mut cx!(0)),
                    state
                );
                (psi, rho)
            }
            Variant::Strong => {
                let psi = attempt!(
                    self,
                    0,
                    Side::Robber,
                    robber.choose_psi(&table, PsiView::Strong { sigma }, &mut cx!(0)),
                    state
                );
                positive!(psi, Side::Robber, "psi");
                self.params.psi = psi;
                fail_fast!();
                let rho = attempt!(
                    self,
                    0,
                    Side::Cop,
                    cop.choose_rho(&table, RhoView::Strong { sigma, psi }, &mut cx!(0)),
                    state
                );
                (psi, rho)
            }
        };
        positive!(psi, Side::Robber, "psi");
        positive!(rho, Side::Cop, "rho");
        self.params.psi = psi;
        self.params.rho = rho;
        fail_fast!();
        let radius =
            attempt!(self, 0, Side::Robber, robber.choose_radius(&table, sigma, psi, rho, &mut cx!(0)), state);
        positive!(radius, Side::Robber, "R");
        self.params.radius = radius;
        fail_fast!();

        let params = self.params.clone();
        let cops = attempt!(self, 0, Side::Cop, cop.place(&table, &params, &mut cx!(0)), state);
        if cops.len() != params.n {
            return bail(&state, protocol(0, Side::Cop, format!("placed {} cops, expected {}", cops.len(), params.n)));
        }
        for c in &cops {
            if let Err(e) = space.validate(c) {
                return bail(&state, protocol(0, Side::Cop, e.to_string()));
            }
        }
        state.cops = cops.clone();
        fail_fast!();
        let r = attempt!(self, 0, Side::Robber, robber.place(&table, &params, &cops, &mut cx!(0)), state);
        if let Err(e) = space.validate(&r) {
            return bail(&state, protocol(0, Side::Robber, e.to_string()));
        }
        state.robber = r.clone();
        let placements = cops.iter().cloned().map(MovePath::stay).collect();
        let mut ball_visits = Vec::new();
        if self.record_stage(0, placements, MovePath::stay(r.clone()), &cops)? {
            ball_visits.push(0);
        }
        for (i, c) in cops.iter().enumerate() {
            if self.within(&r, c, rho)? {
                return bail(&state, Outcome::Captured { stage: 0, cop_index: i, at: r });
            }
        }
        fail_fast!();

        let mut last_in_ball = ball_visits.first() == Some(&0);
        for stage in 1..=params.horizon {
            state.stage = stage;
            state.phase = Phase::CopsToMove;
            let moves = attempt!(self, stage, Side::Cop, cop.moves(&table, &params, &state, &mut cx!(stage)), state);
            if moves.len() != params.n {
                return bail(
                    &state,
                    protocol(stage, Side::Cop, format!("{} paths for {} cops", moves.len(), params.n)),
                );
            }
            for (i, (path, from)) in moves.iter().zip(&state.cops).enumerate() {
                if let Some(reason) = illegal(space, path, from, sigma) {
                    return bail(&state, protocol(stage, Side::Cop, format!("cop {i}: {reason}")));
                }
            }
            for (i, path) in moves.iter().enumerate() {
                for x in &path.0[1..] {
                    if self.within(x, &state.robber, rho)? {
                        let stay = MovePath::stay(state.robber.clone());
                        let ends: Vec<Vertex> = moves.iter().map(|p| p.end().clone()).collect();
                        self.record_stage(stage, moves.clone(), stay, &ends)?;
                        let at = state.robber.clone();
                        return bail(&state, Outcome::Captured { stage, cop_index: i, at });
                    }
                }
            }
            state.cops = moves.iter().map(|p| p.end().clone()).collect();
            state.phase = Phase::RobberToMove;
            fail_fast!();

            let view = RobberView { stage, robber: &state.robber, cops: &state.cops, cop_moves: &moves };
            let path = attempt!(self, stage, Side::Robber, robber.moves(&table, &params, &view, &mut cx!(stage)), state);
            if let Some(reason) = illegal(space, &path, &state.robber, psi) {
                return bail(&state, protocol(stage, Side::Robber, reason));
            }
            let mut caught = None;
            'scan: for x in &path.0 {
                for (i, c) in state.cops.iter().enumerate() {
                    if self.within(x, c, rho)? {
                        caught = Some((i, x.clone()));
                        break 'scan;
                    }
                }
            }
            state.robber = path.end().clone();
            let cops_now = state.cops.clone();
            last_in_ball = self.record_stage(stage, moves, path, &cops_now)?;
            if let Some((cop_index, at)) = caught {
                return bail(&state, Outcome::Captured { stage, cop_index, at });
            }
            if last_in_ball {
                ball_visits.push(stage);
            }
            fail_fast!();
        }
        let stages = params.horizon;
        Ok((Outcome::HorizonReached { stages, ball_visit_stages: ball_visits, last_in_ball }, state))
    }
}

fn illegal(space: &Space, path: &MovePath, from: &Vertex, speed: u64) -> Option<String> {
    match path.0.first() {
        None => return Some(PathError::Empty.to_string()),
        Some(start) if start != from => {
            return Some(format!("path starts at {start}, agent is at {from}"));
        }
        _ => {}
    }
    space.check_path(&path.0, speed).err().map(|e| e.to_string())
}

#[cfg(test)]
mod tests;
