//! Strong-game evader on BS(1,m) against `n ≤ m−1` cops: hide at the top of a
//! sheet, and when a cop climbs into that sheet cross through the axis to the
//! top of a cop-free sheet along a path whose axis crossing no cop can reach.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::engine::{AgentError, Ctx, GameParams, MovePath, PsiView, RobberAgent, RobberView, Table, Variant};
use crate::space::bs::{mul_a, mul_t, power_of};
use crate::space::{BsVertex, Vertex};

#[derive(Clone, Debug, Default)]
pub struct BsSheetEvader {
    n: usize,
    m: u32,
    /// Speed and reach after raising them to `σ ≥ n+1` and `ρ > 3σ`.
    pub sigma: u64,
    pub rho: u64,
    pub sheet: usize,
    pending: VecDeque<Vertex>,
    /// Completed and started flee moves.
    pub meta_steps: u64,
}

fn bs(v: &Vertex) -> Result<&BsVertex, AgentError> {
    match v {
        Vertex::Bs(b) => Ok(b),
        _ => Err(AgentError::Protocol(format!("{v} is not a BS vertex"))),
    }
}

/// `n · 2^{8ρ} + 8ρ + n`, saturating.
pub fn bs_radius(n: usize, rho: u64) -> u64 {
    let wide = BigInt::from(n) * power_of(2, 8 * rho) + BigInt::from(8 * rho + n as u64);
    wide.to_u64().unwrap_or(u64::MAX)
}

impl BsSheetEvader {
    pub fn new() -> Self {
        Self::default()
    }

    fn top(&self) -> i64 {
        8 * self.rho as i64
    }

    /// `a^i t^{8ρ}`.
    pub fn summit(&self, i: usize) -> Vertex {
        Vertex::Bs(BsVertex { num: BigInt::from(i), exp: 0, k: self.top() })
    }

    /// `(q - i) / m^w` when `v = a^i t^w a^N` with integer `N`.
    fn offset_in_sheet(&self, v: &BsVertex, i: usize) -> Option<BigInt> {
        if v.exp != 0 || v.k < 0 || v.k > self.top() {
            return None;
        }
        let (qt, r) = (&v.num - BigInt::from(i)).div_rem(&power_of(self.m, v.k as u64));
        r.is_zero().then_some(qt)
    }

    /// `a^i t^w a^N` with `⌈ρ/2⌉ ≤ w ≤ 8ρ` and `0 ≤ N ≤ n·2^{8ρ−w}`.
    pub fn in_upper_part(&self, v: &BsVertex, i: usize) -> bool {
        let w = v.k;
        if w < self.rho.div_ceil(2) as i64 {
            return false;
        }
        self.offset_in_sheet(v, i).is_some_and(|nn| {
            !nn.is_negative() && nn <= BigInt::from(self.n) * power_of(2, (self.top() - w) as u64)
        })
    }

    /// Membership in `S_0 ∪ … ∪ S_n`, with width `n·m^{8ρ−w}` at height `w`.
    pub fn in_region(&self, v: &BsVertex) -> bool {
        (0..=self.n).any(|i| {
            self.offset_in_sheet(v, i).is_some_and(|nn| {
                !nn.is_negative() && nn <= BigInt::from(self.n) * power_of(self.m, (self.top() - v.k) as u64)
            })
        })
    }

    fn free_sheets(&self, cops: &[&BsVertex]) -> Vec<usize> {
        (0..=self.n).filter(|&i| cops.iter().all(|c| !self.in_upper_part(c, i))).collect()
    }

    /// A cop's shadow `q` lies within `2·2^{3ρ}` of the axis window of path `k`.
    pub fn blocks(&self, cop: &BsVertex, i: usize, j: usize, k: usize) -> bool {
        let shift = BigInt::from(k) * power_of(self.m, 8 * self.rho);
        let pad = BigInt::from(2) * power_of(2, 3 * self.rho);
        let lo = BigInt::from(i.min(j)) + &shift - &pad;
        let hi = BigInt::from(i.max(j)) + &shift + &pad;
        let scale = power_of(self.m, cop.exp as u64);
        lo * &scale <= cop.num && cop.num <= hi * &scale
    }

    /// Vertices of `a^k t^{−8ρ} a^{j−i} t^{8ρ} a^{−k}` from `from`.
    pub fn flee_path(&self, from: &Vertex, i: usize, j: usize, k: usize) -> Result<Vec<Vertex>, AgentError> {
        let mut cur = bs(from)?.clone();
        let mut out = alloc::vec![Vertex::Bs(cur.clone())];
        let dj = j as i64 - i as i64;
        let steps: [(char, i64, u64); 5] = [
            ('a', 1, k as u64),
            ('t', -1, 8 * self.rho),
            ('a', dj.signum(), dj.unsigned_abs()),
            ('t', 1, 8 * self.rho),
            ('a', -1, k as u64),
        ];
        for (g, sign, count) in steps {
            for _ in 0..count {
                cur = if g == 'a' { mul_a(self.m, &cur, sign) } else { mul_t(&cur, sign) };
                out.push(Vertex::Bs(cur.clone()));
            }
        }
        Ok(out)
    }

    fn start_flight(&mut self, robber: &Vertex, cops: &[&BsVertex], cx: &mut Ctx<'_>) -> Result<(), AgentError> {
        let i = self.sheet;
        let Some(j) = self.free_sheets(cops).into_iter().find(|&j| j != i) else {
            cx.check("bs-safe-sheet", false, || format!("every sheet other than {i} has a cop in its upper part"));
            return Err(AgentError::StrategyInvariant("no cop-free destination sheet".into()));
        };
        cx.check("bs-safe-sheet", true, Default::default);
        let Some(k) = (0..=self.n).find(|&k| cops.iter().all(|c| !self.blocks(c, i, j, k))) else {
            cx.check("bs-safe-path", false, || format!("all {} flee paths from {i} to {j} are blocked", self.n + 1));
            return Err(AgentError::StrategyInvariant("every flee path is blocked".into()));
        };
        cx.check("bs-safe-path", true, Default::default);
        let path = self.flee_path(robber, i, j, k)?;
        let len = path.len() as u64 - 1;
        let expected = 2 * k as u64 + 16 * self.rho + i.abs_diff(j) as u64;
        cx.check("bs-flee-length", len == expected && len <= 3 * self.n as u64 + 16 * self.rho, || {
            format!("flee path has {len} edges, expected {expected}")
        });
        let end = path.last().expect("nonempty");
        cx.check("bs-flee-endpoint", *end == self.summit(j), || format!("flee path ends at {end}"));
        self.pending = path.into_iter().skip(1).collect();
        self.sheet = j;
        self.meta_steps += 1;
        Ok(())
    }
}

impl RobberAgent for BsSheetEvader {
    fn choose_psi(&mut self, t: &Table<'_>, view: PsiView, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        if t.variant != Variant::Strong {
            return Err(AgentError::Precondition("the sheet evader plays the strong game".into()));
        }
        let m = t.space.bs_base().ok_or_else(|| AgentError::Precondition("the sheet evader needs BS(1,m)".into()))?;
        if (m as usize) < t.cops + 1 {
            return Err(AgentError::Precondition(format!("{} cops need BS(1,m) with m > {}", t.cops, t.cops)));
        }
        if t.treasure != &t.space.base() {
            return Err(AgentError::Precondition("the sheets hang below the identity".into()));
        }
        self.n = t.cops;
        self.m = m;
        self.sigma = view.sigma().max(t.cops as u64 + 1);
        Ok(17 * self.sigma)
    }

    fn choose_radius(&mut self, _: &Table<'_>, _: u64, _: u64, rho: u64, _: &mut Ctx<'_>) -> Result<u64, AgentError> {
        self.rho = rho.max(3 * self.sigma + 1);
        Ok(bs_radius(self.n, self.rho))
    }

    fn place(&mut self, _: &Table<'_>, _: &GameParams, cops: &[Vertex], cx: &mut Ctx<'_>) -> Result<Vertex, AgentError> {
        let cops: Vec<&BsVertex> = cops.iter().map(bs).collect::<Result<_, _>>()?;
        let free = self.free_sheets(&cops);
        cx.check("bs-safe-sheet", !free.is_empty(), || "every sheet has a cop in its upper part".into());
        let i0 = *free.first().ok_or_else(|| AgentError::StrategyInvariant("no cop-free sheet".into()))?;
        self.sheet = i0;
        Ok(self.summit(i0))
    }

    fn moves(&mut self, t: &Table<'_>, params: &GameParams, view: &RobberView<'_>, cx: &mut Ctx<'_>) -> Result<MovePath, AgentError> {
        if self.pending.is_empty() {
            let cops: Vec<&BsVertex> = view.cops.iter().map(bs).collect::<Result<_, _>>()?;
            let mut trigger = cops.iter().any(|c| self.in_upper_part(c, self.sheet));
            for c in view.cops {
                trigger |= t.space.distance(c, view.robber, 3 * self.rho)?.is_some();
            }
            if !trigger {
                return Ok(MovePath::stay(view.robber.clone()));
            }
            self.start_flight(view.robber, &cops, cx)?;
        }
        let mut path = alloc::vec![view.robber.clone()];
        while (path.len() as u64) <= params.psi {
            match self.pending.pop_front() {
                Some(v) => path.push(v),
                None => break,
            }
        }
        let mut inside = true;
        for v in &path {
            inside &= self.in_region(bs(v)?);
        }
        cx.check("bs-in-sheets", inside, || "flee path leaves the sheet rectangles".into());
        Ok(MovePath(path))
    }
}
