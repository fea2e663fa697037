//! Cayley graphs the game is played on.
//!
//! Every space is the Cayley graph of a group with a symmetric generating set,
//! so `d(u, w) = |u⁻¹w|`. Breadth-first search is the reference metric; the
//! closed forms below are accelerators that the test suite pins to it.

pub mod bs;
pub mod lamp_group;
pub mod lamplighter;
pub mod vertex;

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};

pub use lamp_group::{FiniteGroup, LampGroup};
pub use vertex::{BsVertex, LampVertex, Vertex, Word};

/// Default hard cap on the number of vertices a ball enumeration may visit.
pub const BALL_LIMIT: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("vertex {vertex} does not belong to {space}")]
    WrongSpace { vertex: String, space: String },
    #[error("distance exceeds cutoff {0}")]
    ExceedsCutoff(u64),
    #[error("ball enumeration exceeded {0} vertices")]
    ResourceLimit(usize),
    #[error("bad space spec {0:?}")]
    BadSpec(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    Grid { dim: usize },
    GridVar { m: i64 },
    Lamplighter { group: LampGroup },
    Bs { m: u32 },
    Line,
    FreeTree { rank: u8 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    kind: SpaceKind,
}

impl Space {
    pub fn grid(dim: usize) -> Result<Self, SpaceError> {
        if dim == 0 {
            return Err(SpaceError::BadSpec("grid:0".into()));
        }
        Ok(Self { kind: SpaceKind::Grid { dim } })
    }

    pub fn line() -> Self {
        Self { kind: SpaceKind::Line }
    }

    pub fn grid_var(m: i64) -> Result<Self, SpaceError> {
        if m < 1 {
            return Err(SpaceError::BadSpec(format!("gridvar:{m}")));
        }
        Ok(Self { kind: SpaceKind::GridVar { m } })
    }

    pub fn lamplighter(base: FiniteGroup, power: u32) -> Result<Self, SpaceError> {
        let group = LampGroup::new(base, power)?;
        Ok(Self { kind: SpaceKind::Lamplighter { group } })
    }

    pub fn cyclic_lamplighter(order: u32, power: u32) -> Result<Self, SpaceError> {
        Self::lamplighter(FiniteGroup::cyclic(order)?, power)
    }

    pub fn bs(m: u32) -> Result<Self, SpaceError> {
        if m < 2 {
            return Err(SpaceError::BadSpec(format!("bs:{m}")));
        }
        Ok(Self { kind: SpaceKind::Bs { m } })
    }

    pub fn free_tree(rank: u8) -> Result<Self, SpaceError> {
        if rank == 0 || rank > 26 {
            return Err(SpaceError::BadSpec(format!("free-tree:{rank}")));
        }
        Ok(Self { kind: SpaceKind::FreeTree { rank } })
    }

    /// Parses `grid:<n>`, `gridvar:<m>`, `lamp:<|L|>[:<j>]`, `bs:<m>`, `line`,
    /// `free-tree:<rank>`. Lamp groups are cyclic.
    pub fn parse(spec: &str) -> Result<Self, SpaceError> {
        let bad = || SpaceError::BadSpec(spec.to_owned());
        let mut parts = spec.split(':');
        let head = parts.next().ok_or_else(bad)?;
        let args: Vec<u64> =
            parts.map(|p| p.parse::<u64>().map_err(|_| bad())).collect::<Result<_, _>>()?;
        let arg = |i: usize| args.get(i).copied().ok_or_else(bad);
        let small = |x: u64| u32::try_from(x).map_err(|_| bad());
        let space = match (head, args.len()) {
            ("line", 0) => Self::line(),
            ("grid", 1) => Self::grid(usize::try_from(arg(0)?).map_err(|_| bad())?)?,
            ("gridvar", 1) => Self::grid_var(i64::try_from(arg(0)?).map_err(|_| bad())?)?,
            ("lamp", 1) => Self::cyclic_lamplighter(small(arg(0)?)?, 1)?,
            ("lamp", 2) => Self::cyclic_lamplighter(small(arg(0)?)?, small(arg(1)?)?)?,
            ("bs", 1) => Self::bs(small(arg(0)?)?)?,
            ("free-tree", 1) => Self::free_tree(u8::try_from(arg(0)?).map_err(|_| bad())?)?,
            _ => return Err(bad()),
        };
        Ok(space)
    }

    /// The string this space parses from. Non-cyclic lamp tables are
    /// described by their order only.
    pub fn describe(&self) -> String {
        match &self.kind {
            SpaceKind::Grid { dim } => format!("grid:{dim}"),
            SpaceKind::GridVar { m } => format!("gridvar:{m}"),
            SpaceKind::Lamplighter { group } if group.power() == 1 => {
                format!("lamp:{}", group.base().order())
            }
            SpaceKind::Lamplighter { group } => {
                format!("lamp:{}:{}", group.base().order(), group.power())
            }
            SpaceKind::Bs { m } => format!("bs:{m}"),
            SpaceKind::Line => "line".into(),
            SpaceKind::FreeTree { rank } => format!("free-tree:{rank}"),
        }
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn lamp_group(&self) -> Option<&LampGroup> {
        match &self.kind {
            SpaceKind::Lamplighter { group } => Some(group),
            _ => None,
        }
    }

    pub fn bs_base(&self) -> Option<u32> {
        match self.kind {
            SpaceKind::Bs { m } => Some(m),
            _ => None,
        }
    }

    /// Dimension of a grid-like space (`line` counts as 1).
    pub fn grid_dim(&self) -> Option<usize> {
        match self.kind {
            SpaceKind::Grid { dim } => Some(dim),
            SpaceKind::Line => Some(1),
            _ => None,
        }
    }

    /// The group identity, which is also the default treasure.
    pub fn base(&self) -> Vertex {
        match &self.kind {
            SpaceKind::Grid { dim } => Vertex::Grid(alloc::vec![0; *dim]),
            SpaceKind::Line => Vertex::Grid(alloc::vec![0]),
            SpaceKind::GridVar { .. } => Vertex::GridVar(0, 0),
            SpaceKind::Lamplighter { .. } => Vertex::Lamp(LampVertex::default()),
            SpaceKind::Bs { .. } => Vertex::Bs(bs::identity()),
            SpaceKind::FreeTree { .. } => Vertex::Tree(Word::default()),
        }
    }

    fn wrong(&self, v: &Vertex) -> SpaceError {
        SpaceError::WrongSpace { vertex: v.canonical(), space: self.describe() }
    }

    pub fn validate(&self, v: &Vertex) -> Result<(), SpaceError> {
        let ok = match (&self.kind, v) {
            (SpaceKind::Grid { dim }, Vertex::Grid(c)) => c.len() == *dim,
            (SpaceKind::Line, Vertex::Grid(c)) => c.len() == 1,
            (SpaceKind::GridVar { m }, Vertex::GridVar(a, b)) => (a + b).rem_euclid(*m) == 0,
            (SpaceKind::Lamplighter { group }, Vertex::Lamp(l)) => {
                l.lamps.values().all(|&s| s != 0 && s < group.size())
            }
            (SpaceKind::Bs { m }, Vertex::Bs(b)) => bs::is_canonical(*m, b),
            (SpaceKind::FreeTree { rank }, Vertex::Tree(w)) => {
                w.is_reduced() && w.0.iter().all(|&g| g != 0 && g.unsigned_abs() <= *rank)
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(self.wrong(v))
        }
    }

    /// All generator images of `v`, in a fixed generator order.
    pub fn neighbors(&self, v: &Vertex) -> Result<Vec<Vertex>, SpaceError> {
        let out = match (&self.kind, v) {
            (SpaceKind::Grid { dim }, Vertex::Grid(c)) if c.len() != *dim => return Err(self.wrong(v)),
            (SpaceKind::Line, Vertex::Grid(c)) if c.len() != 1 => return Err(self.wrong(v)),
            (SpaceKind::Grid { .. } | SpaceKind::Line, Vertex::Grid(c)) => {
                let mut out = Vec::with_capacity(2 * c.len());
                for i in 0..c.len() {
                    for d in [1, -1] {
                        let mut w = c.clone();
                        w[i] += d;
                        out.push(Vertex::Grid(w));
                    }
                }
                out
            }
            (SpaceKind::GridVar { m }, Vertex::GridVar(a, b)) => {
                grid_var_steps(*m).into_iter().map(|(x, y)| Vertex::GridVar(a + x, b + y)).collect()
            }
            (SpaceKind::Lamplighter { group }, Vertex::Lamp(l)) => {
                let s = group.size();
                let mut out = Vec::with_capacity(2 * s as usize);
                for x in 0..s {
                    out.push(Vertex::Lamp(lamplighter::step_right(group, l, x)));
                }
                for x in 0..s {
                    out.push(Vertex::Lamp(lamplighter::step_left(group, l, x)));
                }
                out
            }
            (SpaceKind::Bs { m }, Vertex::Bs(b)) => alloc::vec![
                Vertex::Bs(bs::mul_a(*m, b, 1)),
                Vertex::Bs(bs::mul_a(*m, b, -1)),
                Vertex::Bs(bs::mul_t(b, 1)),
                Vertex::Bs(bs::mul_t(b, -1)),
            ],
            (SpaceKind::FreeTree { rank }, Vertex::Tree(w)) => {
                let mut out = Vec::with_capacity(2 * *rank as usize);
                for g in 1..=*rank as i8 {
                    for letter in [g, -g] {
                        out.push(Vertex::Tree(append_letter(w, letter)));
                    }
                }
                out
            }
            _ => return Err(self.wrong(v)),
        };
        Ok(out)
    }

    pub fn is_adjacent(&self, u: &Vertex, w: &Vertex) -> Result<bool, SpaceError> {
        Ok(self.neighbors(u)?.iter().any(|x| x == w))
    }

    pub fn identity(&self) -> Vertex {
        self.base()
    }

    pub fn multiply(&self, x: &Vertex, y: &Vertex) -> Result<Vertex, SpaceError> {
        let out = match (&self.kind, x, y) {
            (SpaceKind::Grid { .. } | SpaceKind::Line, Vertex::Grid(a), Vertex::Grid(b))
                if a.len() == b.len() =>
            {
                Vertex::Grid(a.iter().zip(b).map(|(p, q)| p + q).collect())
            }
            (SpaceKind::GridVar { .. }, Vertex::GridVar(a, b), Vertex::GridVar(c, d)) => {
                Vertex::GridVar(a + c, b + d)
            }
            (SpaceKind::Lamplighter { group }, Vertex::Lamp(a), Vertex::Lamp(b)) => {
                Vertex::Lamp(lamplighter::compose(group, a, b))
            }
            (SpaceKind::Bs { m }, Vertex::Bs(a), Vertex::Bs(b)) => Vertex::Bs(bs::compose(*m, a, b)),
            (SpaceKind::FreeTree { .. }, Vertex::Tree(a), Vertex::Tree(b)) => {
                let mut w = a.clone();
                for &g in &b.0 {
                    w = append_letter(&w, g);
                }
                Vertex::Tree(w)
            }
            _ => return Err(self.wrong(if self.validate(x).is_err() { x } else { y })),
        };
        Ok(out)
    }

    pub fn inverse(&self, x: &Vertex) -> Result<Vertex, SpaceError> {
        let out = match (&self.kind, x) {
            (SpaceKind::Grid { .. } | SpaceKind::Line, Vertex::Grid(a)) => {
                Vertex::Grid(a.iter().map(|p| -p).collect())
            }
            (SpaceKind::GridVar { .. }, Vertex::GridVar(a, b)) => Vertex::GridVar(-a, -b),
            (SpaceKind::Lamplighter { group }, Vertex::Lamp(a)) => {
                Vertex::Lamp(lamplighter::inverse(group, a))
            }
            (SpaceKind::Bs { m }, Vertex::Bs(a)) => Vertex::Bs(bs::inverse(*m, a)),
            (SpaceKind::FreeTree { .. }, Vertex::Tree(a)) => {
                Vertex::Tree(Word(a.0.iter().rev().map(|g| -g).collect()))
            }
            _ => return Err(self.wrong(x)),
        };
        Ok(out)
    }

    /// Whether `distance` uses a closed form instead of search.
    pub fn has_closed_form(&self) -> bool {
        !matches!(self.kind, SpaceKind::GridVar { .. })
    }

    fn closed_form(&self, u: &Vertex, w: &Vertex) -> Option<Result<u64, SpaceError>> {
        let d = match (&self.kind, u, w) {
            (SpaceKind::Grid { .. } | SpaceKind::Line, Vertex::Grid(a), Vertex::Grid(b)) => {
                if a.len() != b.len() {
                    return Some(Err(self.wrong(w)));
                }
                a.iter().zip(b).map(|(p, q)| p.abs_diff(*q)).sum()
            }
            (SpaceKind::Lamplighter { .. }, Vertex::Lamp(a), Vertex::Lamp(b)) => {
                lamplighter::distance(a, b)
            }
            (SpaceKind::Bs { m }, Vertex::Bs(a), Vertex::Bs(b)) => bs::distance(*m, a, b),
            (SpaceKind::FreeTree { .. }, Vertex::Tree(a), Vertex::Tree(b)) => {
                let common = a.0.iter().zip(&b.0).take_while(|(x, y)| x == y).count();
                (a.0.len() + b.0.len() - 2 * common) as u64
            }
            (SpaceKind::GridVar { .. }, Vertex::GridVar(..), Vertex::GridVar(..)) => return None,
            _ => {
                let bad = if self.validate(u).is_err() { u } else { w };
                return Some(Err(self.wrong(bad)));
            }
        };
        Some(Ok(d))
    }

    /// Exact distance if it is at most `cutoff`, `None` beyond.
    pub fn distance(&self, u: &Vertex, w: &Vertex, cutoff: u64) -> Result<Option<u64>, SpaceError> {
        match self.closed_form(u, w) {
            Some(d) => d.map(|d| (d <= cutoff).then_some(d)),
            None => self.bfs_distance(u, w, cutoff),
        }
    }

    /// Exact distance without a cutoff. Search-only spaces run an unbounded
    /// bidirectional search, which terminates because the graphs are connected.
    pub fn dist(&self, u: &Vertex, w: &Vertex) -> Result<u64, SpaceError> {
        match self.distance(u, w, u64::MAX)? {
            Some(d) => Ok(d),
            None => Err(SpaceError::ExceedsCutoff(u64::MAX)),
        }
    }

    /// Bidirectional breadth-first search; the reference metric.
    pub fn bfs_distance(&self, u: &Vertex, w: &Vertex, cutoff: u64) -> Result<Option<u64>, SpaceError> {
        self.validate(u)?;
        self.validate(w)?;
        if u == w {
            return Ok(Some(0));
        }
        let mut seen = [HashMap::new(), HashMap::new()];
        seen[0].insert(u.clone(), 0u64);
        seen[1].insert(w.clone(), 0u64);
        let mut fronts = [alloc::vec![u.clone()], alloc::vec![w.clone()]];
        let mut radius = [0u64, 0u64];
        while radius[0] + radius[1] < cutoff {
            let side = usize::from(fronts[0].len() > fronts[1].len());
            let other = 1 - side;
            let depth = radius[side] + 1;
            let mut next = Vec::new();
            let mut best: Option<u64> = None;
            for x in core::mem::take(&mut fronts[side]) {
                for y in self.neighbors(&x)? {
                    if seen[side].contains_key(&y) {
                        continue;
                    }
                    if let Some(&dy) = seen[other].get(&y) {
                        let total = depth + dy;
                        best = Some(best.map_or(total, |b| b.min(total)));
                    }
                    seen[side].insert(y.clone(), depth);
                    next.push(y);
                }
            }
            if let Some(b) = best {
                return Ok((b <= cutoff).then_some(b));
            }
            if next.is_empty() {
                return Ok(None);
            }
            fronts[side] = next;
            radius[side] = depth;
        }
        Ok(None)
    }

    /// Visits `{w : d(center, w) ≤ r}` layer by layer with each vertex's distance.
    pub fn for_each_in_ball(
        &self,
        center: &Vertex,
        r: u64,
        limit: usize,
        mut visit: impl FnMut(&Vertex, u64),
    ) -> Result<usize, SpaceError> {
        self.validate(center)?;
        let mut seen: HashSet<Vertex> = HashSet::new();
        seen.insert(center.clone());
        visit(center, 0);
        let mut front = alloc::vec![center.clone()];
        for depth in 1..=r {
            let mut next = Vec::new();
            for x in &front {
                for y in self.neighbors(x)? {
                    if seen.insert(y.clone()) {
                        if seen.len() > limit {
                            return Err(SpaceError::ResourceLimit(limit));
                        }
                        visit(&y, depth);
                        next.push(y);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            front = next;
        }
        Ok(seen.len())
    }

    /// The closed ball in breadth-first order.
    pub fn ball(&self, center: &Vertex, r: u64, limit: usize) -> Result<Vec<Vertex>, SpaceError> {
        let mut out = Vec::new();
        self.for_each_in_ball(center, r, limit, |v, _| out.push(v.clone()))?;
        Ok(out)
    }

    pub fn ball_distances(
        &self,
        center: &Vertex,
        r: u64,
        limit: usize,
    ) -> Result<HashMap<Vertex, u64>, SpaceError> {
        let mut out = HashMap::new();
        self.for_each_in_ball(center, r, limit, |v, d| {
            out.insert(v.clone(), d);
        })?;
        Ok(out)
    }

    /// Shortest `u → w` path; among shortest paths each step takes the
    /// neighbor with the smallest canonical serialization.
    pub fn geodesic(&self, u: &Vertex, w: &Vertex, bound: u64) -> Result<Vec<Vertex>, SpaceError> {
        self.geodesic_prefix(u, w, bound, u64::MAX)
    }

    /// The first `steps` edges of `geodesic(u, w)` (all of it if shorter).
    pub fn geodesic_prefix(
        &self,
        u: &Vertex,
        w: &Vertex,
        bound: u64,
        steps: u64,
    ) -> Result<Vec<Vertex>, SpaceError> {
        let total = self.distance(u, w, bound)?.ok_or(SpaceError::ExceedsCutoff(bound))?;
        let table = if self.has_closed_form() {
            None
        } else {
            Some(self.ball_distances(w, total, BALL_LIMIT)?)
        };
        let mut path = alloc::vec![u.clone()];
        let mut cur = u.clone();
        let mut d = total;
        while d > 0 && (path.len() as u64) <= steps {
            let mut pick: Option<(String, Vertex)> = None;
            for x in self.neighbors(&cur)? {
                let dx = match &table {
                    Some(t) => t.get(&x).copied(),
                    None => self.distance(&x, w, d - 1)?,
                };
                if dx != Some(d - 1) {
                    continue;
                }
                let key = x.canonical();
                if pick.as_ref().is_none_or(|(k, _)| key < *k) {
                    pick = Some((key, x));
                }
            }
            let (_, next) = pick.ok_or_else(|| SpaceError::Malformed("geodesic descent stalled".into()))?;
            path.push(next.clone());
            cur = next;
            d -= 1;
        }
        Ok(path)
    }

    /// Checks adjacency of consecutive vertices and the edge budget.
    pub fn check_path(&self, path: &[Vertex], speed: u64) -> Result<(), PathError> {
        let first = path.first().ok_or(PathError::Empty)?;
        self.validate(first).map_err(PathError::Space)?;
        let edges = (path.len() - 1) as u64;
        if edges > speed {
            return Err(PathError::TooLong { length: edges, speed });
        }
        for (i, pair) in path.windows(2).enumerate() {
            self.validate(&pair[1]).map_err(PathError::Space)?;
            if !self.is_adjacent(&pair[0], &pair[1]).map_err(PathError::Space)? {
                return Err(PathError::NotAdjacent { index: i });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("empty path")]
    Empty,
    #[error("path length {length} > speed {speed}")]
    TooLong { length: u64, speed: u64 },
    #[error("vertices {index} and {} are not adjacent", index + 1)]
    NotAdjacent { index: usize },
    #[error(transparent)]
    Space(SpaceError),
}

/// Generators of the index-`m` sublattice `{a + b ≡ 0 mod m}`: the offsets
/// with `|x|+|y| = m` and `x + y ∈ {-m, 0, m}`, sorted and deduplicated.
pub fn grid_var_steps(m: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for x in -m..=m {
        let rest = m - x.abs();
        for y in [rest, -rest] {
            if [-m, 0, m].contains(&(x + y)) && !out.contains(&(x, y)) {
                out.push((x, y));
            }
        }
    }
    out.sort_unstable();
    out
}

fn append_letter(w: &Word, g: i8) -> Word {
    let mut out = w.clone();
    if out.0.last() == Some(&-g) {
        out.0.pop();
    } else {
        out.0.push(g);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn g(c: &[i64]) -> Vertex {
        Vertex::Grid(c.to_vec())
    }

    #[test]
    fn grid_neighbors() {
        let s = Space::grid(2).unwrap();
        let n = s.neighbors(&g(&[0, 0])).unwrap();
        assert_eq!(n.len(), 4);
        for v in [g(&[1, 0]), g(&[-1, 0]), g(&[0, 1]), g(&[0, -1])] {
            assert!(n.contains(&v));
        }
    }

    #[test]
    fn grid_var_neighbors_of_origin() {
        let s = Space::grid_var(2).unwrap();
        let mut n: Vec<(i64, i64)> = s
            .neighbors(&Vertex::GridVar(0, 0))
            .unwrap()
            .into_iter()
            .map(|v| match v {
                Vertex::GridVar(a, b) => (a, b),
                _ => unreachable!(),
            })
            .collect();
        n.sort_unstable();
        let mut expected = alloc::vec![(2, 0), (-2, 0), (0, 2), (0, -2), (1, 1), (-1, -1), (1, -1), (-1, 1)];
        expected.sort_unstable();
        assert_eq!(n, expected);
        for v in s.neighbors(&Vertex::GridVar(0, 0)).unwrap() {
            s.validate(&v).unwrap();
        }
    }

    #[test]
    fn lamplighter_neighbors_of_identity() {
        let s = Space::cyclic_lamplighter(2, 1).unwrap();
        let n = s.neighbors(&s.base()).unwrap();
        let lv = |lamps: &[(i64, u32)], pos| {
            let mut l = LampVertex { pos, ..Default::default() };
            for &(p, x) in lamps {
                l.set_lamp(p, x);
            }
            Vertex::Lamp(l)
        };
        assert_eq!(n.len(), 4);
        for v in [lv(&[], 1), lv(&[(0, 1)], 1), lv(&[], -1), lv(&[(-1, 1)], -1)] {
            assert!(n.contains(&v), "{v}");
        }
    }

    #[test]
    fn bs_a_step() {
        let s = Space::bs(2).unwrap();
        let v = Vertex::Bs(BsVertex { num: BigInt::from(0), exp: 0, k: 1 });
        let a = s.neighbors(&v).unwrap().remove(0);
        assert_eq!(a, Vertex::Bs(BsVertex { num: BigInt::from(2), exp: 0, k: 1 }));
    }

    #[test]
    fn distance_examples() {
        let s = Space::grid(2).unwrap();
        assert_eq!(s.distance(&g(&[0, 0]), &g(&[3, 4]), 10).unwrap(), Some(7));
        assert_eq!(s.distance(&g(&[0, 0]), &g(&[3, 4]), 6).unwrap(), None);
        let l = Space::cyclic_lamplighter(2, 1).unwrap();
        let mut x = LampVertex::default();
        x.set_lamp(0, 1);
        assert_eq!(l.distance(&l.base(), &Vertex::Lamp(x.clone()), 4).unwrap(), Some(2));
        assert_eq!(l.bfs_distance(&l.base(), &Vertex::Lamp(x), 4).unwrap(), Some(2));
        let b = Space::bs(2).unwrap();
        let t3 = Vertex::Bs(BsVertex { num: BigInt::from(0), exp: 0, k: 3 });
        assert_eq!(b.distance(&b.base(), &t3, 5).unwrap(), Some(3));
        assert_eq!(b.bfs_distance(&b.base(), &t3, 5).unwrap(), Some(3));
        let far = Vertex::Bs(BsVertex { num: BigInt::from(16), exp: 0, k: 1 });
        assert_eq!(b.bfs_distance(&b.base(), &far, 10).unwrap(), b.distance(&b.base(), &far, 10).unwrap());
        for sp in [s, l, b, Space::free_tree(2).unwrap(), Space::grid_var(3).unwrap()] {
            assert_eq!(sp.distance(&sp.base(), &sp.base(), 0).unwrap(), Some(0));
        }
    }

    #[test]
    fn mismatched_vertices_rejected() {
        let s = Space::grid(2).unwrap();
        assert!(matches!(
            s.distance(&g(&[0, 0]), &Vertex::GridVar(0, 0), 3),
            Err(SpaceError::WrongSpace { .. })
        ));
        assert!(s.neighbors(&g(&[0])).is_err());
    }

    #[test]
    fn geodesic_tie_break() {
        let s = Space::grid(2).unwrap();
        assert_eq!(s.geodesic(&g(&[0, 0]), &g(&[2, 0]), 10).unwrap(), [g(&[0, 0]), g(&[1, 0]), g(&[2, 0])]);
        assert_eq!(s.geodesic(&g(&[0, 0]), &g(&[1, 1]), 10).unwrap(), [g(&[0, 0]), g(&[0, 1]), g(&[1, 1])]);
        assert_eq!(s.geodesic(&g(&[4, 4]), &g(&[4, 4]), 0).unwrap(), [g(&[4, 4])]);
        assert_eq!(s.geodesic_prefix(&g(&[0, 0]), &g(&[5, 5]), 20, 2).unwrap().len(), 3);
    }

    #[test]
    fn geodesic_on_search_only_space() {
        let s = Space::grid_var(2).unwrap();
        let p = s.geodesic(&Vertex::GridVar(0, 0), &Vertex::GridVar(5, 3), 20).unwrap();
        assert_eq!(p.len() as u64 - 1, s.dist(&Vertex::GridVar(0, 0), &Vertex::GridVar(5, 3)).unwrap());
        s.check_path(&p, 100).unwrap();
    }

    #[test]
    fn ball_sizes() {
        let s = Space::grid(2).unwrap();
        assert_eq!(s.ball(&s.base(), 1, BALL_LIMIT).unwrap().len(), 5);
        let t = Space::free_tree(2).unwrap();
        assert_eq!(t.ball(&t.base(), 2, BALL_LIMIT).unwrap().len(), 17);
        assert_eq!(s.ball(&s.base(), 10, 50), Err(SpaceError::ResourceLimit(50)));
    }

    #[test]
    fn parse_and_describe_round_trip() {
        for spec in ["grid:2", "grid:3", "gridvar:2", "lamp:2", "lamp:2:3", "bs:2", "line", "free-tree:2"] {
            assert_eq!(Space::parse(spec).unwrap().describe(), spec);
        }
        for bad in ["grid", "grid:x", "lamp:0", "bs:1", "cube:3", "line:2", "free-tree:0"] {
            assert!(Space::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn path_checks() {
        let s = Space::grid(2).unwrap();
        assert_eq!(s.check_path(&[g(&[0, 0]), g(&[1, 0])], 1), Ok(()));
        assert_eq!(
            s.check_path(&[g(&[0, 0]), g(&[1, 0]), g(&[2, 0])], 1),
            Err(PathError::TooLong { length: 2, speed: 1 })
        );
        assert_eq!(s.check_path(&[g(&[0, 0]), g(&[1, 1])], 2), Err(PathError::NotAdjacent { index: 0 }));
        assert_eq!(s.check_path(&[], 2), Err(PathError::Empty));
    }
}
