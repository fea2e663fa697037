//! Strong-game evader against one cop on a graph with wide bigons: wait at one
//! anchor of a bigon of exact width `δ > 32ρ` and switch to the other anchor
//! along a detour the cop does not block whenever it comes within `5λ`, `λ = δ/16`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::analysis::{find_bigon_exact_width, AnalysisError, BigonWitness};
use crate::engine::{AgentError, Ctx, GameParams, MovePath, PsiView, RobberAgent, RobberView, Table, Variant};
use crate::space::{Space, SpaceError, Vertex};

/// Widths tried above the first admissible one before giving up.
const DELTA_BUMPS: u64 = 8;

#[derive(Clone, Debug)]
struct Flight {
    path: Vec<Vertex>,
    /// Index into `path` of the robber's position.
    at: usize,
    forward: bool,
    cop_start: Vertex,
}

#[derive(Clone, Debug, Default)]
pub struct BigonEvader {
    pub witness: Option<BigonWitness>,
    /// At `γ'(t)` rather than `γ(t)`.
    pub at_prime: bool,
    flight: Option<Flight>,
    pub traversals: u64,
}

/// `16·d` against multiples of `δ` keeps every comparison with `λ = δ/16` exact.
fn sixteen(d: u64) -> u64 {
    16 * d
}

impl BigonEvader {
    pub fn new() -> Self {
        Self::default()
    }

    fn witness(&self) -> &BigonWitness {
        self.witness.as_ref().expect("witness fixed when R is declared")
    }

    /// Smallest width above `32·max(ρ,σ)` that the space realizes.
    pub fn find_witness(space: &Space, sigma: u64, rho: u64) -> Result<BigonWitness, AgentError> {
        let first = 32 * rho.max(sigma) + 1;
        let mut last_err = String::new();
        for delta in first..=first + DELTA_BUMPS {
            match find_bigon_exact_width(space, delta) {
                Ok(w) => return Ok(w),
                Err(AnalysisError::Parity(_)) => continue,
                Err(e) => {
                    last_err = format!("{e}");
                    break;
                }
            }
        }
        Err(AgentError::StrategyUnavailable(format!("no bigon of width above {}: {last_err}", first - 1)))
    }

    fn anchors(&self) -> (&Vertex, &Vertex) {
        let w = self.witness();
        let (p, q) = (&w.gamma[w.t], &w.gamma_prime[w.t]);
        if self.at_prime {
            (q, p)
        } else {
            (p, q)
        }
    }

    fn home_other(&self) -> (&[Vertex], &[Vertex]) {
        let w = self.witness();
        if self.at_prime {
            (&w.gamma_prime, &w.gamma)
        } else {
            (&w.gamma, &w.gamma_prime)
        }
    }

    /// Some vertex of `home` forward (or backward) of `t` lies within `2λ` of `c`.
    fn blocked(&self, space: &Space, c: &Vertex, forward: bool) -> Result<bool, SpaceError> {
        let w = self.witness();
        let (home, _) = self.home_other();
        let idx: Vec<usize> = if forward { (w.t..home.len()).collect() } else { (0..=w.t).rev().collect() };
        for i in idx {
            if sixteen(space.dist(c, &home[i])?) < 2 * w.delta {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn trigger(&mut self, space: &Space, cop: &Vertex, cx: &mut Ctx<'_>) -> Result<(), AgentError> {
        let delta = self.witness().delta;
        let (p, _) = self.anchors();
        let d = space.dist(p, cop)?;
        cx.check("bigon-trigger-band", sixteen(d) > 4 * delta && sixteen(d) < 5 * delta, || {
            format!("cop at distance {d} from the anchor, outside (4λ, 5λ)")
        });
        let plus = self.blocked(space, cop, true)?;
        let minus = self.blocked(space, cop, false)?;
        cx.check("bigon-blocked-exclusive", !(plus && minus), || "both detours blocked".into());
        if plus && minus {
            return Err(AgentError::StrategyInvariant("both detours are blocked".into()));
        }
        let detours = self.witness().detours(space, self.at_prime)?;
        let (path, forward) = if plus { (detours.minus, false) } else { (detours.plus, true) };
        cx.check("bigon-detour-length", sixteen(path.len() as u64 - 1) <= 48 * delta, || {
            format!("detour of {} edges exceeds 3δ", path.len() - 1)
        });
        self.flight = Some(Flight { path, at: 0, forward, cop_start: cop.clone() });
        self.traversals += 1;
        Ok(())
    }

    /// The case bounds for the robber at `r` while the cop is at `c`.
    fn check_cases(&self, space: &Space, f: &Flight, r: &Vertex, c: &Vertex, cx: &mut Ctx<'_>) -> Result<(), SpaceError> {
        let w = self.witness();
        let (delta, t, ell) = (w.delta, w.t, w.length());
        let lam = |k: u64| k * delta; // k·λ scaled by 16
        let (home, other) = self.home_other();
        let (p, q) = self.anchors();
        let dc = sixteen(space.dist(r, c)?);
        let far = if f.forward { t.checked_add(w.delta as usize).filter(|&i| i <= ell) } else { t.checked_sub(delta as usize) };
        let on_home = if f.forward { home[t..].contains(r) } else { home[..=t].contains(r) };
        let mut case: Option<char> = None;
        if on_home {
            case = Some('a');
        } else if let Some(i) = far {
            if sixteen(space.dist(r, &home[i])?) <= lam(9) {
                case = Some('b');
            } else if sixteen(space.dist(r, &other[i])?) <= lam(7) {
                case = Some('c');
            }
        }
        if case.is_none() && sixteen(space.dist(r, q)?) <= lam(9) {
            case = Some('d');
        }
        if case.is_none() && far.is_none() && other.contains(r) {
            case = Some('e');
        }
        let name = match case {
            Some('a') => "bigon-case-a",
            Some('b') => "bigon-case-b",
            Some('c') => "bigon-case-c",
            Some('d') => "bigon-case-d",
            Some(_) => "bigon-case-e",
            None => "bigon-case-covered",
        };
        cx.check(name, case.is_some() && dc > lam(1), || format!("robber at {r}, cop at {c}: 16d = {dc}, δ = {delta}"));
        let dp = sixteen(space.dist(p, c)?);
        cx.check("bigon-cop-band", dp > lam(3) && dp < lam(6), || format!("cop at 16d = {dp} from the start anchor"));
        Ok(())
    }
}

impl RobberAgent for BigonEvader {
    fn choose_psi(&mut self, t: &Table<'_>, view: PsiView, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        if t.cops != 1 || t.variant != Variant::Strong {
            return Err(AgentError::Precondition("the bigon evader plays the strong game against one cop".into()));
        }
        Ok(96 * view.sigma())
    }

    /// `R` covers the `δ`-neighborhood of the bigon.
    fn choose_radius(&mut self, t: &Table<'_>, sigma: u64, _: u64, rho: u64, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        let w = Self::find_witness(t.space, sigma, rho)?;
        let mut far = 0;
        for v in w.gamma.iter().chain(&w.gamma_prime) {
            far = far.max(t.space.dist(t.treasure, v)?);
        }
        let r = far + w.delta;
        self.witness = Some(w);
        Ok(r)
    }

    fn place(&mut self, t: &Table<'_>, _: &GameParams, cops: &[Vertex], cx: &mut Ctx<'_>) -> Result<Vertex, AgentError> {
        let delta = self.witness().delta;
        let c = &cops[0];
        self.at_prime = false;
        let (p, q) = self.anchors();
        let (dp, dq) = (t.space.dist(p, c)?, t.space.dist(q, c)?);
        self.at_prime = sixteen(dp) <= 5 * delta;
        let ok = sixteen(dp.max(dq)) > 5 * delta;
        cx.check("bigon-start-far", ok, || format!("both anchors within 5λ of the cop ({dp}, {dq})"));
        Ok(self.anchors().0.clone())
    }

    fn moves(&mut self, t: &Table<'_>, params: &GameParams, view: &RobberView<'_>, cx: &mut Ctx<'_>) -> Result<MovePath, AgentError> {
        let cop = &view.cops[0];
        let delta = self.witness().delta;
        if self.flight.is_none() {
            let (p, _) = self.anchors();
            if sixteen(t.space.dist(p, cop)?) >= 5 * delta {
                return Ok(MovePath::stay(view.robber.clone()));
            }
            self.trigger(t.space, cop, cx)?;
        }
        let mut f = self.flight.take().expect("flight in progress");
        let drift = sixteen(t.space.dist(&f.cop_start, cop)?);
        cx.check("bigon-cop-drift", drift < delta, || format!("cop drifted 16d = {drift} during the traversal"));
        let end = (f.at + params.psi as usize).min(f.path.len() - 1);
        let step = f.path[f.at..=end].to_vec();
        for r in &step {
            self.check_cases(t.space, &f, r, cop, cx)?;
        }
        f.at = end;
        if f.at + 1 == f.path.len() {
            self.at_prime = !self.at_prime;
            let far = sixteen(t.space.dist(self.anchors().0, cop)?);
            cx.check("bigon-arrival-far", far > 10 * delta, || format!("cop at 16d = {far} from the new anchor"));
        } else {
            self.flight = Some(f);
        }
        Ok(MovePath(step))
    }
}
