//! Search-based evader: keep every vertex of the move more than `margin` from
//! all cops and end where the nearest cop is farthest.

use alloc::format;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::engine::{AgentError, Ctx, GameParams, MovePath, PsiView, RobberAgent, RobberView, Table};
use crate::space::{Space, SpaceError, Vertex, BALL_LIMIT};

#[derive(Clone, Debug)]
pub struct GreedyEvader {
    pub margin: u64,
    pub psi: u64,
    pub radius: u64,
    /// Distances beyond this count as equal, so a far cop leaves the evader near base.
    pub search_horizon: u64,
    /// Every vertex the evader visits stays within this ball.
    pub confinement: Option<(Vertex, u64)>,
}

impl GreedyEvader {
    pub fn new(margin: u64, psi: u64, radius: u64) -> Self {
        Self { margin, psi, radius, search_horizon: margin + psi, confinement: None }
    }

    pub fn with_search_horizon(mut self, h: u64) -> Self {
        self.search_horizon = h;
        self
    }

    pub fn confined_to(mut self, center: Vertex, radius: u64) -> Self {
        self.confinement = Some((center, radius));
        self
    }

    fn allowed(&self, space: &Space, v: &Vertex, cops: &[Vertex]) -> Result<bool, SpaceError> {
        if let Some((c, r)) = &self.confinement {
            if space.distance(c, v, *r)?.is_none() {
                return Ok(false);
            }
        }
        for c in cops {
            if space.distance(v, c, self.margin)?.is_some() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn score(&self, space: &Space, v: &Vertex, cops: &[Vertex]) -> Result<u64, SpaceError> {
        let mut best = self.search_horizon;
        for c in cops {
            if let Some(d) = space.distance(v, c, best)? {
                best = d;
            }
        }
        Ok(best)
    }

    /// Ranks by capped score (higher first), then distance to `home`, then serialization.
    fn pick<'v>(
        &self,
        space: &Space,
        candidates: impl Iterator<Item = &'v Vertex>,
        cops: &[Vertex],
        home: &Vertex,
    ) -> Result<Option<Vertex>, SpaceError> {
        let mut best: Option<((u64, u64, alloc::string::String), &Vertex)> = None;
        for v in candidates {
            let key = (u64::MAX - self.score(space, v, cops)?, space.dist(home, v)?, v.canonical());
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, v));
            }
        }
        Ok(best.map(|(_, v)| v.clone()))
    }

    fn home(&self, t: &Table<'_>) -> Vertex {
        self.confinement.as_ref().map_or_else(|| t.treasure.clone(), |(c, _)| c.clone())
    }

    /// The chosen move from `from`; errors when `from` itself is unsafe.
    pub fn plan(&self, space: &Space, from: &Vertex, cops: &[Vertex], home: &Vertex) -> Result<Vec<Vertex>, AgentError> {
        if !self.allowed(space, from, cops)? {
            return Err(AgentError::OracleCaught(format!("no safe path from {from}")));
        }
        let mut parent: HashMap<Vertex, Option<Vertex>> = HashMap::new();
        parent.insert(from.clone(), None);
        let mut order = alloc::vec![from.clone()];
        let mut front = alloc::vec![from.clone()];
        for _ in 0..self.psi {
            let mut next = Vec::new();
            for v in &front {
                for n in space.neighbors(v)? {
                    if parent.contains_key(&n) || !self.allowed(space, &n, cops)? {
                        continue;
                    }
                    parent.insert(n.clone(), Some(v.clone()));
                    order.push(n.clone());
                    next.push(n);
                }
            }
            front = next;
        }
        let end = self.pick(space, order.iter(), cops, home)?.expect("start is a candidate");
        let mut path = alloc::vec![end];
        while let Some(Some(p)) = parent.get(path.last().expect("nonempty")) {
            path.push(p.clone());
        }
        path.reverse();
        Ok(path)
    }
}

impl RobberAgent for GreedyEvader {
    fn choose_psi(&mut self, _: &Table<'_>, _: PsiView, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        Ok(self.psi)
    }

    fn choose_radius(&mut self, _: &Table<'_>, _: u64, _: u64, _: u64, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        Ok(self.radius)
    }

    /// Best-scoring safe vertex of the `R`-ball around home.
    fn place(&mut self, t: &Table<'_>, params: &GameParams, cops: &[Vertex], _: &mut Ctx<'_>) -> Result<Vertex, AgentError> {
        let home = self.home(t);
        let reach = self.confinement.as_ref().map_or(params.radius, |(_, r)| *r);
        let mut safe = Vec::new();
        for v in t.space.ball(&home, reach, BALL_LIMIT)? {
            if self.allowed(t.space, &v, cops)? {
                safe.push(v);
            }
        }
        self.pick(t.space, safe.iter(), cops, &home)?
            .ok_or_else(|| AgentError::OracleCaught("no safe starting vertex".into()))
    }

    fn moves(&mut self, t: &Table<'_>, _: &GameParams, view: &RobberView<'_>, cx: &mut Ctx<'_>) -> Result<MovePath, AgentError> {
        let path = self.plan(t.space, view.robber, view.cops, &self.home(t))?;
        let mut clear = true;
        for v in &path {
            for c in view.cops {
                clear &= t.space.distance(v, c, self.margin)?.is_none();
            }
        }
        cx.check("greedy-margin", clear, || format!("a vertex of the chosen path is within {} of a cop", self.margin));
        Ok(MovePath(path))
    }
}
