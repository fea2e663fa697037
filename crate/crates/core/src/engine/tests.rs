use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::agents::{GreedyCop, RandomCop, ScriptedCop};
use crate::space::Space;

fn g(x: i64, y: i64) -> Vertex {
    Vertex::Grid(vec![x, y])
}

/// Robber that stands at `start` and then walks the given paths.
struct Walker {
    psi: u64,
    radius: u64,
    start: Vertex,
    paths: Vec<Vec<Vertex>>,
    seen_psi_view: Option<PsiView>,
}

impl Walker {
    fn new(start: Vertex, paths: Vec<Vec<Vertex>>) -> Self {
        Walker { psi: 2, radius: 5, start, paths, seen_psi_view: None }
    }
}

impl RobberAgent for Walker {
    fn choose_psi(&mut self, _: &Table<'_>, view: PsiView, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        self.seen_psi_view = Some(view);
        Ok(self.psi)
    }
    fn choose_radius(&mut self, _: &Table<'_>, _: u64, _: u64, _: u64, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        Ok(self.radius)
    }
    fn place(&mut self, _: &Table<'_>, _: &GameParams, _: &[Vertex], _: &mut Ctx<'_>) -> Result<Vertex, AgentError> {
        Ok(self.start.clone())
    }
    fn moves(&mut self, _: &Table<'_>, _: &GameParams, v: &RobberView<'_>, _: &mut Ctx<'_>) -> Result<MovePath, AgentError> {
        let i = v.stage as usize - 1;
        Ok(MovePath(self.paths.get(i).cloned().unwrap_or_else(|| vec![v.robber.clone()])))
    }
}

/// Cop that never moves and records what it was shown.
struct Statue {
    at: Vec<Vertex>,
    seen_rho_view: Option<RhoView>,
}

impl CopAgent for Statue {
    fn choose_sigma(&mut self, _: &Table<'_>, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        Ok(1)
    }
    fn choose_rho(&mut self, _: &Table<'_>, view: RhoView, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        self.seen_rho_view = Some(view);
        Ok(1)
    }
    fn place(&mut self, _: &Table<'_>, _: &GameParams, _: &mut Ctx<'_>) -> Result<Vec<Vertex>, AgentError> {
        Ok(self.at.clone())
    }
    fn moves(&mut self, _: &Table<'_>, _: &GameParams, s: &GameState, _: &mut Ctx<'_>) -> Result<Vec<MovePath>, AgentError> {
        Ok(s.cops.iter().cloned().map(MovePath::stay).collect())
    }
}

fn config(cops: usize, horizon: u64) -> RunConfig {
    RunConfig { cops, horizon, seed: 9, fail_fast: false }
}

fn statue(at: Vec<Vertex>) -> Statue {
    Statue { at, seen_rho_view: None }
}

#[test]
fn passing_diagonally_is_safe_but_adjacent_is_not() {
    let s = Space::grid(2).unwrap();
    let mut cop = statue(vec![g(0, 0)]);
    let mut safe = Walker::new(g(2, 0), vec![vec![g(2, 0), g(2, 1), g(1, 1)]]);
    let t = run(&s, Variant::Weak, &mut cop, &mut safe, &config(1, 3)).unwrap();
    assert!(matches!(t.outcome, Outcome::HorizonReached { stages: 3, .. }));
    assert_eq!(t.stages[1].min_cop_dist, Some(2));

    let mut unsafe_ = Walker::new(g(2, 1), vec![vec![g(2, 1), g(1, 1), g(0, 1)]]);
    let t = run(&s, Variant::Weak, &mut cop, &mut unsafe_, &config(1, 3)).unwrap();
    assert_eq!(t.outcome, Outcome::Captured { stage: 1, cop_index: 0, at: g(0, 1) });
}

#[test]
fn cop_path_interior_captures() {
    let s = Space::grid(2).unwrap();
    // The cop sweeps past a robber standing at (1,1); only the middle vertex is in reach.
    struct Sweep;
    impl CopAgent for Sweep {
        fn choose_sigma(&mut self, _: &Table<'_>, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
            Ok(2)
        }
        fn choose_rho(&mut self, _: &Table<'_>, _: RhoView, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
            Ok(1)
        }
        fn place(&mut self, _: &Table<'_>, _: &GameParams, _: &mut Ctx<'_>) -> Result<Vec<Vertex>, AgentError> {
            Ok(vec![g(0, 0)])
        }
        fn moves(&mut self, _: &Table<'_>, _: &GameParams, _: &GameState, _: &mut Ctx<'_>) -> Result<Vec<MovePath>, AgentError> {
            Ok(vec![MovePath(vec![g(0, 0), g(1, 0), g(2, 0)])])
        }
    }
    let mut r = Walker::new(g(1, 1), vec![]);
    let t = run(&s, Variant::Weak, &mut Sweep, &mut r, &config(1, 2)).unwrap();
    assert_eq!(t.outcome, Outcome::Captured { stage: 1, cop_index: 0, at: g(1, 1) });
}

#[test]
fn placement_on_a_cop_is_captured_at_stage_zero() {
    let s = Space::grid(2).unwrap();
    let mut cop = statue(vec![g(3, 3)]);
    let mut r = Walker::new(g(3, 3), vec![]);
    let t = run(&s, Variant::Weak, &mut cop, &mut r, &config(1, 5)).unwrap();
    assert_eq!(t.outcome, Outcome::Captured { stage: 0, cop_index: 0, at: g(3, 3) });
    assert_eq!(t.stages.len(), 1);
}

#[test]
fn rejects_zero_horizon_and_zero_cops() {
    let s = Space::grid(2).unwrap();
    let mut cop = statue(vec![g(0, 0)]);
    let mut r = Walker::new(g(5, 0), vec![]);
    assert_eq!(run(&s, Variant::Weak, &mut cop, &mut r, &config(1, 0)), Err(EngineError::ZeroHorizon));
    assert_eq!(run(&s, Variant::Weak, &mut cop, &mut r, &config(0, 3)), Err(EngineError::NoCops));
}

#[test]
fn illegal_robber_path_forfeits() {
    let s = Space::grid(2).unwrap();
    let mut cop = statue(vec![g(0, 0)]);
    let mut r = Walker::new(g(5, 0), vec![vec![g(5, 0), g(6, 0), g(7, 0), g(8, 0)]]);
    let t = run(&s, Variant::Weak, &mut cop, &mut r, &config(1, 3)).unwrap();
    match t.outcome {
        Outcome::Forfeit { stage: 1, side: Side::Robber, reason: ForfeitReason::Protocol, detail } => {
            assert!(detail.contains("path length 3 > speed 2"), "{detail}");
        }
        o => panic!("{o:?}"),
    }
    let mut r = Walker::new(g(5, 0), vec![vec![g(5, 0), g(7, 0)]]);
    let t = run(&s, Variant::Weak, &mut cop, &mut r, &config(1, 3)).unwrap();
    assert!(matches!(t.outcome, Outcome::Forfeit { side: Side::Robber, .. }));
}

#[test]
fn quantifier_order_is_visible_to_agents() {
    let s = Space::grid(2).unwrap();
    let mut cop = statue(vec![g(0, 0)]);
    let mut r = Walker::new(g(5, 0), vec![]);
    run(&s, Variant::Weak, &mut cop, &mut r, &config(1, 1)).unwrap();
    assert_eq!(r.seen_psi_view, Some(PsiView::Weak { sigma: 1, rho: 1 }));
    assert_eq!(cop.seen_rho_view, Some(RhoView::Weak { sigma: 1 }));
    run(&s, Variant::Strong, &mut cop, &mut r, &config(1, 1)).unwrap();
    assert_eq!(r.seen_psi_view, Some(PsiView::Strong { sigma: 1 }));
    assert_eq!(cop.seen_rho_view, Some(RhoView::Strong { sigma: 1, psi: 2 }));
}

#[test]
fn ball_visits_are_recorded() {
    let s = Space::line();
    let mut cop = statue(vec![Vertex::Grid(vec![-20])]);
    let l = |x: i64| Vertex::Grid(vec![x]);
    let mut r = Walker::new(l(4), vec![vec![l(4), l(5), l(6)], vec![l(6), l(5)]]);
    let t = run(&s, Variant::Weak, &mut cop, &mut r, &config(1, 3)).unwrap();
    assert_eq!(
        t.outcome,
        Outcome::HorizonReached { stages: 3, ball_visit_stages: vec![0, 2, 3], last_in_ball: true }
    );
}

#[test]
fn runs_are_deterministic_and_replayable() {
    let s = Space::grid(2).unwrap();
    let mk = || {
        let mut cop = RandomCop::new(2, 1);
        let mut r = Walker::new(g(9, 9), vec![vec![g(9, 9), g(10, 9)], vec![g(10, 9), g(10, 10)]]);
        run(&s, Variant::Strong, &mut cop, &mut r, &config(2, 6)).unwrap()
    };
    let (a, b) = (mk(), mk());
    assert_eq!(a, b);
    assert_eq!(replay::replay(&s, &a).unwrap(), Ok(()));

    let mut tampered = a.clone();
    tampered.stages[2].robber_move = MovePath(vec![g(10, 9), g(12, 9)]);
    let d = replay::replay(&s, &tampered).unwrap().unwrap_err();
    assert_eq!(d.stage, 2);
}

#[test]
fn greedy_cop_closes_in() {
    let s = Space::grid(2).unwrap();
    let mut cop = GreedyCop::new(2, 1);
    let mut r = Walker::new(g(5, 5), vec![]);
    let t = run(&s, Variant::Weak, &mut cop, &mut r, &config(1, 1)).unwrap();
    assert_eq!(t.stages[1].min_cop_dist, Some(8));
}

#[test]
fn scripted_cop_reproduces_moves() {
    let s = Space::grid(2).unwrap();
    let mut cop = RandomCop::new(3, 1);
    let mut r = Walker::new(g(12, 0), vec![]);
    let t = run(&s, Variant::Weak, &mut cop, &mut r, &config(3, 5)).unwrap();
    let mut again = ScriptedCop::from_trace(&t);
    let mut r = Walker::new(g(12, 0), vec![]);
    let u = run(&s, Variant::Weak, &mut again, &mut r, &config(3, 5)).unwrap();
    assert_eq!(t.stages, u.stages);
}

#[test]
fn reach_recheck_finds_captures() {
    let s = Space::grid(2).unwrap();
    let mut cop = statue(vec![g(0, 0)]);
    let mut r = Walker::new(g(3, 0), vec![]);
    let t = run(&s, Variant::Weak, &mut cop, &mut r, &config(1, 2)).unwrap();
    assert_eq!(replay::recheck_reach(&s, &t, 1).unwrap(), None);
    assert_eq!(replay::recheck_reach(&s, &t, 3).unwrap(), Some((0, 0)));
}
