//! Weak-game evader on `L^j ≀ ℤ`: keep, for every cop `i`, a lamp state
//! different from that cop's at both `a_i` and `b_i`.

use alloc::format;
use alloc::vec::Vec;

use crate::engine::{AgentError, Ctx, GameParams, MovePath, PsiView, RobberAgent, RobberView, Table, Variant};
use crate::space::{LampVertex, SpaceKind, Vertex};

/// The relabeling `l ↦ l̄`: the identity goes to the first non-identity state,
/// everything else to the identity. Never a fixed point.
pub fn flip(l: u32) -> u32 {
    if l == 0 {
        1
    } else {
        0
    }
}

#[derive(Clone, Debug, Default)]
pub struct LamplighterEvader {
    /// Watch points `a_i = i` and `b_i = σ+ρ+i+1`, cop `i` pairs with index `i-1`.
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    psi: u64,
}

fn lamps(v: &Vertex) -> Result<&LampVertex, AgentError> {
    match v {
        Vertex::Lamp(l) => Ok(l),
        _ => Err(AgentError::Protocol(format!("{v} is not a lamplighter vertex"))),
    }
}

impl LamplighterEvader {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets the watch points for `n` cops with speed `sigma` and reach `rho`.
    pub fn configure(&mut self, n: usize, sigma: u64, rho: u64) -> Result<u64, AgentError> {
        let gap = (sigma + rho) as i64;
        if n as i64 >= gap + 2 {
            return Err(AgentError::Precondition(format!(
                "{n} cops need distinct watch points but only {} fit below sigma+rho+2",
                gap + 1
            )));
        }
        self.a = (1..=n as i64).collect();
        self.b = (1..=n as i64).map(|i| gap + i + 1).collect();
        self.psi = match self.b.last() {
            Some(&bn) => 2 * (bn as u64 + 1),
            None => 1,
        };
        Ok(self.psi)
    }

    pub fn loop_length(&self) -> u64 {
        self.psi
    }

    fn owner(&self, q: i64) -> Option<usize> {
        self.a.iter().position(|&x| x == q).or_else(|| self.b.iter().position(|&x| x == q))
    }
}

impl RobberAgent for LamplighterEvader {
    fn choose_psi(&mut self, t: &Table<'_>, view: PsiView, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        let PsiView::Weak { sigma, rho } = view else {
            return Err(AgentError::Precondition("the lamplighter evader plays the weak game".into()));
        };
        if t.variant != Variant::Weak {
            return Err(AgentError::Precondition("the lamplighter evader plays the weak game".into()));
        }
        match t.space.kind() {
            SpaceKind::Lamplighter { group } if group.size() > 1 => {}
            SpaceKind::Lamplighter { .. } => return Err(AgentError::Precondition("the lamp group is trivial".into())),
            _ => return Err(AgentError::Precondition("the lamplighter evader needs a lamplighter space".into())),
        }
        if t.treasure != &t.space.base() {
            return Err(AgentError::Precondition("the watch points are laid out from the identity".into()));
        }
        self.configure(t.cops, sigma, rho)
    }

    fn choose_radius(&mut self, _: &Table<'_>, _: u64, _: u64, _: u64, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        Ok(self.psi)
    }

    fn place(&mut self, _: &Table<'_>, _: &GameParams, cops: &[Vertex], _: &mut Ctx<'_>) -> Result<Vertex, AgentError> {
        let mut r = LampVertex { pos: self.a.first().copied().unwrap_or(0), ..Default::default() };
        for (i, c) in cops.iter().enumerate() {
            let c = lamps(c)?;
            for q in [self.a[i], self.b[i]] {
                r.set_lamp(q, flip(c.lamp(q)));
            }
        }
        Ok(Vertex::Lamp(r))
    }

    fn moves(&mut self, _: &Table<'_>, _: &GameParams, view: &RobberView<'_>, cx: &mut Ctx<'_>) -> Result<MovePath, AgentError> {
        let r = lamps(view.robber)?;
        if self.a.is_empty() {
            return Ok(MovePath::stay(view.robber.clone()));
        }
        let cops: Vec<&LampVertex> = view.cops.iter().map(lamps).collect::<Result<_, _>>()?;
        for (i, c) in cops.iter().enumerate() {
            let (qa, qb) = (self.a[i], self.b[i]);
            let both = r.lamp(qa) == c.lamp(qa) && r.lamp(qb) == c.lamp(qb);
            cx.check("lamp-at-most-one-match", !both, || format!("cop {i} matches the robber at {qa} and {qb}"));
        }
        if r.pos != self.a[0] {
            return Err(AgentError::StrategyInvariant(format!("robber at {} instead of a_1", r.pos)));
        }
        let far = *self.b.last().expect("nonempty") + 1;
        // Lamp q changes only when the edge [q, q+1] is crossed; the rightward
        // sweep crosses all of them.
        let mut cur = r.clone();
        let mut path = alloc::vec![Vertex::Lamp(cur.clone())];
        while cur.pos < far {
            let q = cur.pos;
            if let Some(i) = self.owner(q) {
                let theirs = cops[i].lamp(q);
                if cur.lamp(q) == theirs {
                    cur.set_lamp(q, flip(theirs));
                }
            }
            cur.pos += 1;
            path.push(Vertex::Lamp(cur.clone()));
        }
        while cur.pos > 0 {
            cur.pos -= 1;
            path.push(Vertex::Lamp(cur.clone()));
        }
        cur.pos = self.a[0];
        path.push(Vertex::Lamp(cur.clone()));
        cx.check("lamp-loop-length", path.len() as u64 - 1 == self.psi, || {
            format!("loop has {} edges, psi is {}", path.len() - 1, self.psi)
        });
        for (i, c) in cops.iter().enumerate() {
            let ok = [self.a[i], self.b[i]].iter().all(|&q| cur.lamp(q) != c.lamp(q));
            cx.check("lamp-mismatch", ok, || format!("cop {i} still matches the robber after the loop"));
        }
        Ok(MovePath(path))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::{GreedyCop, RandomCop};
    use crate::engine::{run, AssertionLog, Outcome, RunConfig};
    use crate::space::Space;
    use rand::SeedableRng;

    #[test]
    fn watch_points_for_one_cop() {
        let mut e = LamplighterEvader::new();
        assert_eq!(e.configure(1, 1, 1).unwrap(), 10);
        assert_eq!((e.a.clone(), e.b.clone()), (alloc::vec![1], alloc::vec![4]));
        // The loop bound from the watch-point layout: 2n(n+1+σ+ρ+1).
        for n in 1..4usize {
            for s in 1..4u64 {
                for r in 1..4u64 {
                    let psi = e.configure(n, s, r).unwrap();
                    assert!(psi <= 2 * n as u64 * (n as u64 + 1 + s + r + 1));
                    for i in 0..n {
                        assert!((e.b[i] - e.a[i]) as u64 > s + r);
                    }
                }
            }
        }
        assert!(matches!(e.configure(4, 1, 1), Err(AgentError::Precondition(_))));
    }

    #[test]
    fn flip_has_no_fixed_point() {
        for l in 0..8 {
            assert_ne!(flip(l), l);
        }
    }

    #[test]
    fn no_cops_means_no_motion() {
        let s = Space::cyclic_lamplighter(2, 1).unwrap();
        let mut e = LamplighterEvader::new();
        assert_eq!(e.configure(0, 1, 1).unwrap(), 1);
        let base = s.base();
        let t = Table { space: &s, variant: Variant::Weak, cops: 0, treasure: &base };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let mut log = AssertionLog::default();
        let mut cx = Ctx { rng: &mut rng, log: &mut log, stage: 1 };
        let params = GameParams { n: 0, treasure: base.clone(), sigma: 1, psi: 1, rho: 1, radius: 1, horizon: 1 };
        let r = e.place(&t, &params, &[], &mut cx).unwrap();
        let view = RobberView { stage: 1, robber: &r, cops: &[], cop_moves: &[] };
        assert_eq!(e.moves(&t, &params, &view, &mut cx).unwrap(), MovePath::stay(r.clone()));
    }

    #[test]
    fn survives_greedy_and_random_cops() {
        let s = Space::cyclic_lamplighter(2, 1).unwrap();
        for n in 1..=3 {
            for seed in 0..2 {
                let cfg = RunConfig { cops: n, horizon: 60, seed, fail_fast: false };
                let mut cop = GreedyCop::new(2, 1);
                let t = run(&s, Variant::Weak, &mut cop, &mut LamplighterEvader::new(), &cfg).unwrap();
                assert!(matches!(t.outcome, Outcome::HorizonReached { .. }), "{:?}", t.outcome);
                assert!(t.stages.iter().all(|st| st.in_ball));
                assert_eq!(t.assertions.iter().filter(|a| !a.pass).count(), 0);
                let mut cop = RandomCop::new(3, 2);
                let t = run(&s, Variant::Weak, &mut cop, &mut LamplighterEvader::new(), &cfg).unwrap();
                assert!(matches!(t.outcome, Outcome::HorizonReached { .. }), "{:?}", t.outcome);
                assert_eq!(t.assertions.iter().filter(|a| !a.pass).count(), 0);
            }
        }
    }

    #[test]
    fn loop_is_a_legal_path_on_larger_lamp_groups() {
        let s = Space::cyclic_lamplighter(3, 2).unwrap();
        let cfg = RunConfig { cops: 2, horizon: 20, seed: 4, fail_fast: false };
        let mut cop = RandomCop::new(2, 2);
        let t = run(&s, Variant::Weak, &mut cop, &mut LamplighterEvader::new(), &cfg).unwrap();
        assert!(matches!(t.outcome, Outcome::HorizonReached { .. }), "{:?}", t.outcome);
        assert_eq!(t.params.psi, 2 * (2 + 2 + 2 + 2));
    }
}
