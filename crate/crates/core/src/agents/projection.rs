//! Plays a `grid(2)` strategy on `grid(n)` through a coordinate projection.
//! Projection is 1-Lipschitz for the ℓ¹ metric, so a projected move that is
//! safe against projected cops is safe in the ambient grid.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use crate::engine::{AgentError, Ctx, GameParams, MovePath, PsiView, RobberAgent, RobberView, Table};
use crate::space::{Space, Vertex};

pub struct ProjectionEvader {
    inner: Box<dyn RobberAgent>,
    pair: (usize, usize),
    plane: Space,
    /// Ambient robber position; its other coordinates never change.
    anchor: Option<Vec<i64>>,
}

fn coords(v: &Vertex) -> Result<&[i64], AgentError> {
    match v {
        Vertex::Grid(c) => Ok(c),
        _ => Err(AgentError::Protocol(format!("{v} is not a grid vertex"))),
    }
}

impl ProjectionEvader {
    pub fn new(inner: Box<dyn RobberAgent>, pair: (usize, usize)) -> Self {
        Self { inner, pair, plane: Space::grid(2).expect("dimension 2 is valid"), anchor: None }
    }

    pub fn project(&self, v: &Vertex) -> Result<Vertex, AgentError> {
        let c = coords(v)?;
        let (i, j) = self.pair;
        match (c.get(i), c.get(j)) {
            (Some(&a), Some(&b)) => Ok(Vertex::Grid(alloc::vec![a, b])),
            _ => Err(AgentError::Protocol(format!("{v} has no coordinates {i} and {j}"))),
        }
    }

    /// Replaces the selected coordinates of `base` by those of the planar `p`.
    pub fn lift(&self, base: &[i64], p: &Vertex) -> Result<Vertex, AgentError> {
        let c = coords(p)?;
        let mut out = base.to_vec();
        out[self.pair.0] = c[0];
        out[self.pair.1] = c[1];
        Ok(Vertex::Grid(out))
    }

    fn project_path(&self, p: &MovePath) -> Result<MovePath, AgentError> {
        let mut out: Vec<Vertex> = Vec::with_capacity(p.0.len());
        for v in &p.0 {
            let q = self.project(v)?;
            if out.last() != Some(&q) {
                out.push(q);
            }
        }
        Ok(MovePath(out))
    }

    fn check_table(&self, t: &Table<'_>) -> Result<(), AgentError> {
        let n = t.space.grid_dim().ok_or_else(|| AgentError::Precondition("projection needs a grid space".into()))?;
        let (i, j) = self.pair;
        if n < 2 || i == j || i >= n || j >= n {
            return Err(AgentError::Precondition(format!("coordinates ({i},{j}) do not select a plane of grid({n})")));
        }
        Ok(())
    }
}

macro_rules! planar {
    ($self:ident, $t:ident, $treasure:ident, $table:ident) => {
        let $treasure = $self.project($t.treasure)?;
        let $table = Table { space: &$self.plane, variant: $t.variant, cops: $t.cops, treasure: &$treasure };
    };
}

impl RobberAgent for ProjectionEvader {
    fn choose_psi(&mut self, t: &Table<'_>, view: PsiView, cx: &mut Ctx<'_>) -> Result<u64, AgentError> {
        self.check_table(t)?;
        planar!(self, t, treasure, table);
        self.inner.choose_psi(&table, view, cx)
    }

    fn choose_radius(&mut self, t: &Table<'_>, sigma: u64, psi: u64, rho: u64, cx: &mut Ctx<'_>) -> Result<u64, AgentError> {
        planar!(self, t, treasure, table);
        self.inner.choose_radius(&table, sigma, psi, rho, cx)
    }

    fn place(&mut self, t: &Table<'_>, params: &GameParams, cops: &[Vertex], cx: &mut Ctx<'_>) -> Result<Vertex, AgentError> {
        planar!(self, t, treasure, table);
        let flat = GameParams { treasure: treasure.clone(), ..params.clone() };
        let seen: Vec<Vertex> = cops.iter().map(|c| self.project(c)).collect::<Result<_, _>>()?;
        let p = self.inner.place(&table, &flat, &seen, cx)?;
        let base = coords(t.treasure)?.to_vec();
        let r = self.lift(&base, &p)?;
        self.anchor = Some(base);
        Ok(r)
    }

    fn moves(&mut self, t: &Table<'_>, params: &GameParams, view: &RobberView<'_>, cx: &mut Ctx<'_>) -> Result<MovePath, AgentError> {
        planar!(self, t, treasure, table);
        let flat = GameParams { treasure: treasure.clone(), ..params.clone() };
        let robber = self.project(view.robber)?;
        let cops: Vec<Vertex> = view.cops.iter().map(|c| self.project(c)).collect::<Result<_, _>>()?;
        let moves: Vec<MovePath> = view.cop_moves.iter().map(|m| self.project_path(m)).collect::<Result<_, _>>()?;
        let inner_view = RobberView { stage: view.stage, robber: &robber, cops: &cops, cop_moves: &moves };
        let m = self.inner.moves(&table, &flat, &inner_view, cx)?;
        let base = coords(view.robber)?.to_vec();
        let lifted = m.0.iter().map(|p| self.lift(&base, p)).collect::<Result<_, _>>()?;
        Ok(MovePath(lifted))
    }

    fn finish(&mut self, t: &Table<'_>, params: &GameParams, cx: &mut Ctx<'_>) {
        if let Ok(treasure) = self.project(t.treasure) {
            let table = Table { space: &self.plane, variant: t.variant, cops: t.cops, treasure: &treasure };
            let flat = GameParams { treasure: treasure.clone(), ..params.clone() };
            self.inner.finish(&table, &flat, cx);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::{GreedyCop, GreedyEvader, RandomCop};
    use crate::engine::{run, Outcome, RunConfig, Variant};
    use proptest::prelude::*;

    fn v(c: &[i64]) -> Vertex {
        Vertex::Grid(c.to_vec())
    }

    fn wrap() -> ProjectionEvader {
        ProjectionEvader::new(Box::new(GreedyEvader::new(2, 3, 10)), (0, 1))
    }

    #[test]
    fn projects_and_lifts() {
        let e = wrap();
        assert_eq!(e.project(&v(&[5, 5, 9])).unwrap(), v(&[5, 5]));
        let lifted: Vec<Vertex> = [v(&[0, 0]), v(&[1, 0])].iter().map(|p| e.lift(&[0, 0, 7], p).unwrap()).collect();
        assert_eq!(lifted, alloc::vec![v(&[0, 0, 7]), v(&[1, 0, 7])]);
    }

    #[test]
    fn rejects_low_dimension() {
        let s = Space::line();
        let cfg = RunConfig { cops: 1, horizon: 5, seed: 0, fail_fast: false };
        let t = run(&s, Variant::Weak, &mut GreedyCop::new(1, 1), &mut wrap(), &cfg).unwrap();
        assert!(matches!(t.outcome, Outcome::Forfeit { .. }), "{:?}", t.outcome);
    }

    #[test]
    fn plays_in_three_dimensions_without_touching_the_third() {
        let s = Space::grid(3).unwrap();
        for seed in 0..3 {
            let cfg = RunConfig { cops: 1, horizon: 40, seed, fail_fast: false };
            let mut e = ProjectionEvader::new(Box::new(GreedyEvader::new(2, 3, 10).with_search_horizon(40)), (0, 1));
            let t = run(&s, Variant::Weak, &mut RandomCop::new(1, 1), &mut e, &cfg).unwrap();
            assert!(matches!(t.outcome, Outcome::HorizonReached { .. }), "{:?}", t.outcome);
            for st in &t.stages {
                assert!(st.robber_move.0.iter().all(|r| coords(r).unwrap()[2] == 0));
            }
        }
    }

    proptest! {
        #[test]
        fn projected_distance_is_at_most_ambient(a in proptest::collection::vec(-20i64..20, 4), b in proptest::collection::vec(-20i64..20, 4), i in 0usize..4, j in 0usize..4) {
            prop_assume!(i != j);
            let s = Space::grid(4).unwrap();
            let p = Space::grid(2).unwrap();
            let e = ProjectionEvader::new(Box::new(GreedyEvader::new(1, 1, 1)), (i, j));
            let (u, w) = (v(&a), v(&b));
            let flat = p.dist(&e.project(&u).unwrap(), &e.project(&w).unwrap()).unwrap();
            prop_assert!(flat <= s.dist(&u, &w).unwrap());
        }
    }
}
