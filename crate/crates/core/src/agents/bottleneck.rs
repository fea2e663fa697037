//! Weak-game evader against one cop on a space failing the bottleneck
//! property: rest at `y` while the cop is at least `4λ` from `y`, at `x`
//! otherwise, with `λ = σ + ρ`.

use alloc::format;
use alloc::vec::Vec;

use crate::analysis::{bottleneck_witness, BottleneckWitness};
use crate::engine::{AgentError, Ctx, GameParams, MovePath, PsiView, RobberAgent, RobberView, Table, Variant};
use crate::space::{Space, SpaceError, Vertex};

#[derive(Clone, Debug, Default)]
pub struct BottleneckEvader {
    pub witness: Option<BottleneckWitness>,
    pub lambda: u64,
    pub transitions: u64,
}

fn reversed(p: &[Vertex]) -> Vec<Vertex> {
    p.iter().rev().cloned().collect()
}

/// Joins two paths sharing an endpoint.
fn join(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    let mut out = a.to_vec();
    out.extend_from_slice(&b[1..]);
    out
}

impl BottleneckEvader {
    pub fn new() -> Self {
        Self::default()
    }

    fn witness(&self) -> &BottleneckWitness {
        self.witness.as_ref().expect("witness fixed when psi is declared")
    }

    fn path_dist(space: &Space, path: &[Vertex], c: &Vertex) -> Result<u64, SpaceError> {
        let mut best = u64::MAX;
        for v in path {
            best = best.min(space.dist(v, c)?);
        }
        Ok(best)
    }

    /// Some vertex of `path` is closer than `λ` to `c`.
    fn blocked(&self, space: &Space, path: &[Vertex], c: &Vertex) -> Result<bool, SpaceError> {
        Ok(Self::path_dist(space, path, c)? < self.lambda)
    }

    fn far_from_y(&self, space: &Space, c: &Vertex) -> Result<bool, SpaceError> {
        Ok(space.dist(c, &self.witness().y)? >= 4 * self.lambda)
    }

    /// Chooses between the direct half and the detour through `z` and `γ`.
    fn transition(&self, space: &Space, c: &Vertex, to_x: bool, cx: &mut Ctx<'_>) -> Result<Vec<Vertex>, AgentError> {
        let w = self.witness();
        let gamma_clear = Self::path_dist(space, &w.gamma, c)?;
        cx.check("bottleneck-gamma-clear", gamma_clear >= self.lambda, || {
            format!("cop at distance {gamma_clear} from gamma, lambda is {}", self.lambda)
        });
        let minus = self.blocked(space, &w.eta_minus, c)?;
        let plus = self.blocked(space, &w.eta_plus, c)?;
        cx.check("bottleneck-halves-exclusive", !(minus && plus), || format!("cop at {c} blocks both halves"));
        let path = match (to_x, minus) {
            (true, false) => reversed(&w.eta_minus),
            (true, true) => join(&w.eta_plus, &reversed(&w.gamma)),
            (false, false) => w.eta_minus.clone(),
            (false, true) => join(&w.gamma, &reversed(&w.eta_plus)),
        };
        if minus && plus {
            return Err(AgentError::StrategyInvariant("both halves of the geodesic are blocked".into()));
        }
        Ok(path)
    }
}

impl RobberAgent for BottleneckEvader {
    fn choose_psi(&mut self, t: &Table<'_>, view: PsiView, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        let PsiView::Weak { sigma, rho } = view else {
            return Err(AgentError::Precondition("the bottleneck evader plays the weak game".into()));
        };
        if t.cops != 1 || t.variant != Variant::Weak {
            return Err(AgentError::Precondition("the bottleneck evader plays the weak game against one cop".into()));
        }
        self.lambda = sigma + rho;
        let w = bottleneck_witness(t.space, self.lambda).map_err(|e| AgentError::StrategyUnavailable(format!("{e}")))?;
        let edges = |p: &[Vertex]| p.len() as u64 - 1;
        let psi = edges(&w.gamma) + edges(&w.eta_plus).max(edges(&w.eta_minus));
        self.witness = Some(w);
        Ok(psi)
    }

    fn choose_radius(&mut self, t: &Table<'_>, _: u64, _: u64, _: u64, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        let w = self.witness();
        let mut far = 0;
        for v in w.gamma.iter().chain(&w.eta_minus).chain(&w.eta_plus) {
            far = far.max(t.space.dist(t.treasure, v)?);
        }
        Ok(far.max(1))
    }

    fn place(&mut self, t: &Table<'_>, _: &GameParams, cops: &[Vertex], _: &mut Ctx<'_>) -> Result<Vertex, AgentError> {
        let w = self.witness();
        Ok(if self.far_from_y(t.space, &cops[0])? { w.y.clone() } else { w.x.clone() })
    }

    fn moves(&mut self, t: &Table<'_>, _: &GameParams, view: &RobberView<'_>, cx: &mut Ctx<'_>) -> Result<MovePath, AgentError> {
        let c = &view.cops[0];
        let far = self.far_from_y(t.space, c)?;
        let (x, y) = (self.witness().x.clone(), self.witness().y.clone());
        let path = if view.robber == &y && !far {
            self.transition(t.space, c, true, cx)?
        } else if view.robber == &x && far {
            self.transition(t.space, c, false, cx)?
        } else if view.robber == &x || view.robber == &y {
            alloc::vec![view.robber.clone()]
        } else {
            return Err(AgentError::StrategyInvariant(format!("robber at {} is at neither x nor y", view.robber)));
        };
        if path.len() > 1 {
            self.transitions += 1;
        }
        let end = path.last().expect("nonempty");
        let held = (end == &y && far) || (end == &x && !far);
        cx.check("bottleneck-invariant", held, || format!("robber ends at {end} with the cop at {c}"));
        Ok(MovePath(path))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::{GreedyCop, RandomCop, ScriptedCop};
    use crate::engine::{run, Outcome, RunConfig, StageRecord, Trace};

    fn g(x: i64, y: i64) -> Vertex {
        Vertex::Grid(alloc::vec![x, y])
    }

    fn ready(s: &Space) -> BottleneckEvader {
        let mut e = BottleneckEvader::new();
        e.lambda = 2;
        e.witness = Some(bottleneck_witness(s, 2).unwrap());
        e
    }

    #[test]
    fn grid_witness_for_lambda_two() {
        let s = Space::grid(2).unwrap();
        let e = ready(&s);
        let w = e.witness();
        assert_eq!((w.x.clone(), w.y.clone(), w.z.clone()), (g(-13, 0), g(0, 0), g(13, 0)));
        assert_eq!(w.clearance(&s).unwrap(), 13);
    }

    #[test]
    fn approach_sends_robber_to_x() {
        let s = Space::grid(2).unwrap();
        let e = ready(&s);
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0);
        let mut log = crate::engine::AssertionLog::default();
        let mut cx = Ctx { rng: &mut rng, log: &mut log, stage: 1 };
        // A cop on the right half blocks eta+, so the robber takes eta- directly.
        let p = e.transition(&s, &g(7, 0), true, &mut cx).unwrap();
        assert_eq!(p.len(), 14);
        assert_eq!(p.last(), Some(&g(-13, 0)));
        // A cop on the left half forces the detour through z and gamma.
        let p = e.transition(&s, &g(-7, 0), true, &mut cx).unwrap();
        assert_eq!(p.len() as u64 - 1, 13 + 13 + 26 + 13);
        assert_eq!(p.last(), Some(&g(-13, 0)));
        assert!(s.check_path(&p, 65).is_ok());
        assert_eq!(log.failure_count(), 0);
    }

    fn scripted(cop_path: &[Vertex]) -> ScriptedCop {
        let s = Space::grid(2).unwrap();
        let stages: Vec<StageRecord> = cop_path
            .windows(2)
            .enumerate()
            .map(|(i, w)| StageRecord {
                stage: i as u64 + 1,
                cop_moves: alloc::vec![if w[0] == w[1] {
                    MovePath::stay(w[0].clone())
                } else {
                    MovePath(alloc::vec![w[0].clone(), w[1].clone()])
                }],
                robber_move: MovePath::stay(g(0, 0)),
                min_cop_dist: None,
                in_ball: true,
            })
            .collect();
        let placements = StageRecord {
            stage: 0,
            cop_moves: alloc::vec![MovePath::stay(cop_path[0].clone())],
            robber_move: MovePath::stay(g(0, 0)),
            min_cop_dist: None,
            in_ball: true,
        };
        let trace = Trace {
            space: s.describe(),
            variant: Variant::Weak,
            params: GameParams { n: 1, treasure: g(0, 0), sigma: 1, psi: 1, rho: 1, radius: 1, horizon: 1 },
            seed: 0,
            cop_agent: "scripted".into(),
            robber_agent: alloc::string::String::new(),
            stages: core::iter::once(placements).chain(stages).collect(),
            outcome: Outcome::HorizonReached { stages: 0, ball_visit_stages: Vec::new(), last_in_ball: true },
            assertions: Vec::new(),
        };
        ScriptedCop::from_trace(&trace).stay_when_exhausted()
    }

    #[test]
    fn far_cop_never_moves_the_robber() {
        let s = Space::grid(2).unwrap();
        let path: Vec<Vertex> = (0..=20).map(|i| g(30 + i, 30)).collect();
        let mut cop = scripted(&path);
        let mut r = BottleneckEvader::new();
        let cfg = RunConfig { cops: 1, horizon: 20, seed: 0, fail_fast: false };
        let t = run(&s, Variant::Weak, &mut cop, &mut r, &cfg).unwrap();
        assert!(t.stages.iter().all(|st| st.robber_move.0 == alloc::vec![g(0, 0)]));
        assert_eq!(r.transitions, 0);
    }

    #[test]
    fn entering_the_ball_flips_to_x() {
        let s = Space::grid(2).unwrap();
        // From (0,9) down to (0,7): d(c,y) = 7 < 8 = 4λ on the second stage.
        let path = alloc::vec![g(0, 9), g(0, 8), g(0, 7), g(0, 7)];
        let mut cop = scripted(&path);
        let cfg = RunConfig { cops: 1, horizon: 3, seed: 0, fail_fast: false };
        let t = run(&s, Variant::Weak, &mut cop, &mut BottleneckEvader::new(), &cfg).unwrap();
        assert_eq!(t.stages[1].robber_move.end(), &g(0, 0));
        assert_eq!(t.stages[2].robber_move.end(), &g(-13, 0));
        assert_eq!(t.assertions.iter().filter(|a| !a.pass).count(), 0);
    }

    #[test]
    fn survives_greedy_and_random_cops() {
        let s = Space::grid(2).unwrap();
        for seed in 0..2 {
            let cfg = RunConfig { cops: 1, horizon: 150, seed, fail_fast: false };
            let t = run(&s, Variant::Weak, &mut GreedyCop::new(1, 1), &mut BottleneckEvader::new(), &cfg).unwrap();
            assert!(matches!(t.outcome, Outcome::HorizonReached { .. }), "{:?}", t.outcome);
            assert_eq!(t.assertions.iter().filter(|a| !a.pass).count(), 0);
            let t = run(&s, Variant::Weak, &mut RandomCop::new(1, 1), &mut BottleneckEvader::new(), &cfg).unwrap();
            assert!(matches!(t.outcome, Outcome::HorizonReached { .. }), "{:?}", t.outcome);
            assert_eq!(t.assertions.iter().filter(|a| !a.pass).count(), 0);
        }
    }
}
