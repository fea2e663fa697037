//! Strong-game robber on `Γ` that consults a weak-game robber on `Δ_j`
//! once every `λ` stages through a quasi-homothety family, and checks the
//! four obligations that make the simulation sound.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::engine::{AgentError, Ctx, GameParams, MovePath, PsiView, RobberAgent, RobberView, Table, Variant};
use crate::homothety::{HomothetyError, QuasiHomothetyFamily, Z2ScalingFamily, Q};
use crate::space::{Space, Vertex};

#[cfg(test)]
mod tests;

/// Weak-game parameters the oracle plays with on `Δ_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleParams {
    pub sigma_bar: u64,
    pub rho_bar: u64,
    pub psi_bar: u64,
    pub radius_bar: u64,
}

fn ceil(x: Q) -> u64 {
    x.ceil().to_integer().to_u64().expect("nonnegative")
}

/// `(⌈4A²+3AB⌉, ⌈4A(2A+3B)⌉)`.
pub fn derived_cop_params(a: Q, b: Q) -> (u64, u64) {
    let four = Q::from_integer(4);
    let (two, three) = (Q::from_integer(2), Q::from_integer(3));
    (ceil(four * a * a + three * a * b), ceil(four * a * (two * a + three * b)))
}

/// One meta-stage as seen by the robber: the oracle's path, its image walk,
/// and every cop and robber position that occurred.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetaStageRecord {
    pub meta_stage: u64,
    pub first_stage: u64,
    pub oracle_path: Vec<Vertex>,
    pub waypoints: Vec<Vertex>,
    pub walk_len: u64,
    pub cops_start: Vec<Vertex>,
    pub cops_end: Vec<Vertex>,
    pub robber_checkpoints: Vec<Vertex>,
    pub cop_checkpoints: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObligationBounds {
    pub j: usize,
    pub lambda: u64,
    pub psi: u64,
    pub sigma: u64,
    pub rho_prime: u64,
    pub sigma_bar: u64,
    pub radius: u64,
    pub treasure: Vertex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObligationCheck {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// The four obligations of one meta-stage, exactly:
/// (a) the image walk fits in `λ` robber moves, (b) the projected cops moved
/// at most `σ̄`, (c) robber and cop positions stay `ρ'+σ` apart (`2ρ'` at the
/// boundaries), (d) the robber stays in `B_R(v)`.
pub fn assert_meta_obligations<F: QuasiHomothetyFamily + ?Sized>(
    rec: &MetaStageRecord,
    fam: &F,
    b: &ObligationBounds,
) -> Result<Vec<ObligationCheck>, HomothetyError> {
    let gamma = fam.gamma();
    let delta = fam.delta(b.j)?;
    let budget = b.lambda * b.psi;
    let mut out = Vec::new();
    let mut push = |name, pass, detail: String| out.push(ObligationCheck { name, pass, detail });

    if let (Some(p1), Some(pk)) = (rec.waypoints.first(), rec.waypoints.last()) {
        let d = gamma.dist(p1, pk)?;
        push("meta-a-reach", d <= budget, format!("d(p1,pk) = {d}, budget {budget}"));
    }
    push("meta-a-walk", rec.walk_len <= budget, format!("walk of {} edges, budget {budget}", rec.walk_len));

    let mut worst_b = 0;
    for (c0, ct) in rec.cops_start.iter().zip(&rec.cops_end) {
        worst_b = worst_b.max(delta.dist(&fam.pi(b.j, c0)?, &fam.pi(b.j, ct)?)?);
    }
    push("meta-b-cop-projection", worst_b <= b.sigma_bar, format!("projected cop moved {worst_b}, bound {}", b.sigma_bar));

    let sep = b.rho_prime + b.sigma;
    let mut worst_c: Option<(u64, String)> = None;
    for r in &rec.robber_checkpoints {
        for c in rec.cop_checkpoints.iter().chain(&rec.cops_start).chain(&rec.cops_end) {
            // Pairs at least `sep` apart need no exact value.
            if let Some(d) = gamma.distance(r, c, sep)? {
                if worst_c.as_ref().is_none_or(|(w, _)| d < *w) {
                    worst_c = Some((d, format!("robber {r} and cop {c} at distance {d}")));
                }
            }
        }
    }
    let pass_c = worst_c.as_ref().is_none_or(|(d, _)| *d >= sep);
    push("meta-c-separation", pass_c, worst_c.map_or_else(|| format!("all pairs beyond {sep}"), |(_, s)| s));

    let boundary = 2 * b.rho_prime;
    let mut worst_edge = u64::MAX;
    let ends = [rec.robber_checkpoints.first(), rec.robber_checkpoints.last()];
    for (r, cops) in ends.into_iter().zip([&rec.cops_start, &rec.cops_end]) {
        let Some(r) = r else { continue };
        for c in cops {
            if let Some(d) = gamma.distance(r, c, boundary)? {
                worst_edge = worst_edge.min(d);
            }
        }
    }
    push("meta-c-boundary", worst_edge >= boundary, format!("closest boundary pair at {worst_edge}, bound {boundary}"));

    let mut worst_d = 0;
    for r in &rec.robber_checkpoints {
        worst_d = worst_d.max(gamma.dist(&b.treasure, r)?);
    }
    push("meta-d-radius", worst_d <= b.radius, format!("robber reached distance {worst_d}, R = {}", b.radius));
    Ok(out)
}

pub type OracleFactory = Box<dyn FnMut() -> Box<dyn RobberAgent>>;

/// How the robber derives its parameters.
enum Preset {
    /// The general reduction: `σ̄, ρ̄` from `(A,B)`, `ψ = σ(Aψ̄+B)`, `R = ρ'(AR̄+2A+3B)`.
    General,
    /// The dedicated constants for `ℤ²`: `σ₀ = 2`, `ρ₀ = 3`, spacing `4ρ'`,
    /// `ψ = 4ψ₀σ`, `R = 4R₀ρ'`, `λ = ρ'/σ`.
    Z2,
}

pub struct MetaRobber {
    preset: Preset,
    family: Box<dyn QuasiHomothetyFamily>,
    factory: OracleFactory,
    oracle: Option<Box<dyn RobberAgent>>,
    pub params: Option<OracleParams>,
    pub j: usize,
    pub rho_prime: u64,
    pub lambda: u64,
    pub psi: u64,
    pub radius: u64,
    sigma: u64,
    delta: Option<Space>,
    robber_bar: Option<Vertex>,
    last_projected: Vec<Vertex>,
    walk: Vec<Vertex>,
    walk_at: usize,
    record: Option<MetaStageRecord>,
    last_cops: Vec<Vertex>,
    pub meta_stages_checked: u64,
}

impl MetaRobber {
    pub fn new(family: Box<dyn QuasiHomothetyFamily>, factory: OracleFactory) -> Self {
        Self::with_preset(Preset::General, family, factory)
    }

    /// The `ℤ²` preset; the oracle must play the weak game on `ℤ²` with `σ₀ = 2`, `ρ₀ = 3`.
    pub fn z2(factory: OracleFactory) -> Self {
        let placeholder = Z2ScalingFamily::new(alloc::vec![1]).expect("valid scale");
        Self::with_preset(Preset::Z2, Box::new(placeholder), factory)
    }

    fn with_preset(preset: Preset, family: Box<dyn QuasiHomothetyFamily>, factory: OracleFactory) -> Self {
        Self {
            preset,
            family,
            factory,
            oracle: None,
            params: None,
            j: 0,
            rho_prime: 0,
            lambda: 0,
            psi: 0,
            radius: 0,
            sigma: 0,
            delta: None,
            robber_bar: None,
            last_projected: Vec::new(),
            walk: Vec::new(),
            walk_at: 0,
            record: None,
            last_cops: Vec::new(),
            meta_stages_checked: 0,
        }
    }

    pub fn family(&self) -> &dyn QuasiHomothetyFamily {
        &*self.family
    }

    fn cop_bar(&self) -> (u64, u64) {
        match self.preset {
            Preset::General => derived_cop_params(self.family.a(), self.family.b()),
            Preset::Z2 => (2, 3),
        }
    }

    fn hom(e: HomothetyError) -> AgentError {
        match e {
            HomothetyError::Space(s) => AgentError::Space(s),
            e => AgentError::StrategyInvariant(format!("{e}")),
        }
    }

    fn project(&self, v: &Vertex) -> Result<Vertex, AgentError> {
        self.family.pi(self.j, v).map_err(Self::hom)
    }

    fn embed(&self, v: &Vertex) -> Result<Vertex, AgentError> {
        self.family.iota(self.j, v).map_err(Self::hom)
    }

    fn oracle_params(&self, t: &Table<'_>, horizon: u64) -> Result<GameParams, AgentError> {
        let p = self.params.expect("oracle params fixed");
        let treasure = self.project(t.treasure)?;
        Ok(GameParams {
            n: t.cops,
            treasure,
            sigma: p.sigma_bar,
            psi: p.psi_bar,
            rho: p.rho_bar,
            radius: p.radius_bar,
            horizon,
        })
    }

    /// Asks a fresh oracle on `Δ_j` for its `(ψ̄, R̄)`.
    fn consult(&mut self, t: &Table<'_>, j: usize, cx: &mut Ctx<'_>) -> Result<(Box<dyn RobberAgent>, u64, u64), AgentError> {
        let (sb, rb) = self.cop_bar();
        let delta = self.family.delta(j).map_err(Self::hom)?;
        let treasure = self.family.pi(j, t.treasure).map_err(Self::hom)?;
        let table = Table { space: &delta, variant: Variant::Weak, cops: t.cops, treasure: &treasure };
        let mut oracle = (self.factory)();
        let psi = oracle.choose_psi(&table, PsiView::Weak { sigma: sb, rho: rb }, cx)?;
        let radius = oracle.choose_radius(&table, sb, psi, rb, cx)?;
        Ok((oracle, psi, radius))
    }

    fn bounds(&self, t: &Table<'_>) -> ObligationBounds {
        ObligationBounds {
            j: self.j,
            lambda: self.lambda,
            psi: self.psi,
            sigma: self.sigma,
            rho_prime: self.rho_prime,
            sigma_bar: self.params.expect("fixed").sigma_bar,
            radius: self.radius,
            treasure: t.treasure.clone(),
        }
    }

    fn close_record(&mut self, t: &Table<'_>, cops_end: &[Vertex], cx: &mut Ctx<'_>) -> Result<(), AgentError> {
        let Some(mut rec) = self.record.take() else { return Ok(()) };
        rec.cops_end = cops_end.to_vec();
        for c in assert_meta_obligations(&rec, &*self.family, &self.bounds(t)).map_err(Self::hom)? {
            cx.check(c.name, c.pass, || c.detail.clone());
        }
        if let Preset::Z2 = self.preset {
            let gamma = self.family.gamma();
            let four = 4 * self.rho_prime;
            let mut worst = 0;
            for c in rec.cop_checkpoints.iter().chain(&rec.cops_start).chain(&rec.cops_end) {
                worst = worst.max(gamma.dist(c, &self.embed(&self.project(c)?)?)?);
            }
            cx.check("meta-z2-offset", worst <= four, || format!("cop {worst} from its pretend location, bound {four}"));
            let mut step = 0;
            for (c0, ct) in rec.cops_start.iter().zip(&rec.cops_end) {
                let (p0, pt) = (self.embed(&self.project(c0)?)?, self.embed(&self.project(ct)?)?);
                step = step.max(gamma.dist(&p0, &pt)?);
            }
            cx.check("meta-z2-pretend-step", step <= 2 * four, || format!("pretend location moved {step}, bound {}", 2 * four));
        }
        self.meta_stages_checked += 1;
        Ok(())
    }

    /// Starts meta-stage `m`: consult the oracle and lay out the image walk.
    fn open_record(&mut self, t: &Table<'_>, params: &GameParams, view: &RobberView<'_>, m: u64, cx: &mut Ctx<'_>) -> Result<(), AgentError> {
        let delta = self.delta.clone().expect("delta fixed");
        let projected: Vec<Vertex> = view.cops.iter().map(|c| self.project(c)).collect::<Result<_, _>>()?;
        let mut moves = Vec::with_capacity(projected.len());
        for (from, to) in self.last_projected.iter().zip(&projected) {
            moves.push(MovePath(delta.geodesic(from, to, u64::MAX)?));
        }
        let robber_bar = self.robber_bar.clone().expect("placed");
        let oracle_params = self.oracle_params(t, params.horizon)?;
        let treasure = oracle_params.treasure.clone();
        let table = Table { space: &delta, variant: Variant::Weak, cops: t.cops, treasure: &treasure };
        let oview = RobberView { stage: m, robber: &robber_bar, cops: &projected, cop_moves: &moves };
        let mut oracle = self.oracle.take().expect("oracle fixed");
        let answer = oracle.moves(&table, &oracle_params, &oview, cx);
        self.oracle = Some(oracle);
        let path = answer?.0;
        if path.first() != Some(&robber_bar) || delta.check_path(&path, oracle_params.psi).is_err() {
            return Err(AgentError::Protocol(format!("oracle path does not start at {robber_bar} or is illegal")));
        }
        let rho_bar = oracle_params.rho;
        for p in &path {
            for c in &projected {
                if delta.distance(p, c, rho_bar)?.is_some() {
                    return Err(AgentError::OracleCaught(format!("oracle path vertex {p} within {rho_bar} of cop {c}")));
                }
            }
        }
        let waypoints: Vec<Vertex> = path.iter().map(|p| self.embed(p)).collect::<Result<_, _>>()?;
        let gamma = self.family.gamma();
        let mut walk = alloc::vec![waypoints[0].clone()];
        for w in waypoints.windows(2) {
            walk.extend(gamma.geodesic(&w[0], &w[1], u64::MAX)?.into_iter().skip(1));
        }
        self.record = Some(MetaStageRecord {
            meta_stage: m,
            first_stage: view.stage,
            oracle_path: path.clone(),
            waypoints,
            walk_len: walk.len() as u64 - 1,
            cops_start: view.cops.to_vec(),
            cops_end: Vec::new(),
            robber_checkpoints: alloc::vec![view.robber.clone()],
            cop_checkpoints: Vec::new(),
        });
        self.walk = walk;
        self.walk_at = 0;
        self.robber_bar = path.last().cloned();
        self.last_projected = projected;
        Ok(())
    }
}

impl RobberAgent for MetaRobber {
    fn choose_psi(&mut self, t: &Table<'_>, view: PsiView, cx: &mut Ctx<'_>) -> Result<u64, AgentError> {
        if t.variant != Variant::Strong {
            return Err(AgentError::Precondition("the meta robber plays the strong game".into()));
        }
        let sigma = view.sigma();
        if let Preset::Z2 = self.preset {
            if t.space.grid_dim() != Some(2) {
                return Err(AgentError::Precondition("the plane preset plays on grid(2)".into()));
            }
        } else if self.family.gamma() != t.space {
            return Err(AgentError::Precondition("the family does not map into this space".into()));
        }
        // ψ̄, R̄ must not depend on j; a probe on the first index fixes them.
        let (_, psi_bar, radius_bar) = self.consult(t, 1, cx)?;
        let (sigma_bar, rho_bar) = self.cop_bar();
        self.params = Some(OracleParams { sigma_bar, rho_bar, psi_bar, radius_bar });
        self.sigma = sigma;
        self.psi = match self.preset {
            Preset::General => ceil(Q::from_integer(sigma as i64) * (self.family.a() * Q::from_integer(psi_bar as i64) + self.family.b())),
            Preset::Z2 => 4 * psi_bar * sigma,
        };
        Ok(self.psi)
    }

    fn choose_radius(&mut self, t: &Table<'_>, sigma: u64, _: u64, rho: u64, cx: &mut Ctx<'_>) -> Result<u64, AgentError> {
        let p = self.params.expect("psi declared first");
        let reach = rho.max(sigma);
        match self.preset {
            Preset::General => {
                self.j = self
                    .family
                    .index_for(reach)
                    .ok_or_else(|| AgentError::StrategyUnavailable(format!("no scale reaches {reach}")))?;
                self.rho_prime = self.family.rho(self.j).expect("index exists");
                let (a, b) = (self.family.a(), self.family.b());
                let (two, three) = (Q::from_integer(2), Q::from_integer(3));
                let rp = Q::from_integer(self.rho_prime as i64);
                self.radius = ceil(rp * (a * Q::from_integer(p.radius_bar as i64) + two * a + three * b));
                self.lambda = self.rho_prime.div_ceil(sigma);
            }
            Preset::Z2 => {
                self.rho_prime = reach.div_ceil(sigma) * sigma;
                self.family = Box::new(Z2ScalingFamily::new(alloc::vec![4 * self.rho_prime]).map_err(Self::hom)?);
                self.j = 1;
                self.radius = 4 * p.radius_bar * self.rho_prime;
                self.lambda = self.rho_prime / sigma;
            }
        }
        let (oracle, psi_j, radius_j) = self.consult(t, self.j, cx)?;
        cx.check("meta-oracle-uniform", psi_j <= p.psi_bar && radius_j <= p.radius_bar, || {
            format!("oracle on index {} asks for ({psi_j}, {radius_j}) beyond ({}, {})", self.j, p.psi_bar, p.radius_bar)
        });
        self.oracle = Some(oracle);
        self.delta = Some(self.family.delta(self.j).map_err(Self::hom)?);
        Ok(self.radius)
    }

    fn place(&mut self, t: &Table<'_>, params: &GameParams, cops: &[Vertex], cx: &mut Ctx<'_>) -> Result<Vertex, AgentError> {
        let projected: Vec<Vertex> = cops.iter().map(|c| self.project(c)).collect::<Result<_, _>>()?;
        let oracle_params = self.oracle_params(t, params.horizon)?;
        let treasure = oracle_params.treasure.clone();
        let delta = self.delta.clone().expect("delta fixed");
        let table = Table { space: &delta, variant: Variant::Weak, cops: t.cops, treasure: &treasure };
        let mut oracle = self.oracle.take().expect("oracle fixed");
        let placed = oracle.place(&table, &oracle_params, &projected, cx);
        self.oracle = Some(oracle);
        let r_bar = placed?;
        for c in &projected {
            if delta.distance(&r_bar, c, oracle_params.rho)?.is_some() {
                return Err(AgentError::OracleCaught(format!("oracle starts at {r_bar} within reach of {c}")));
            }
        }
        let r = self.embed(&r_bar)?;
        let gamma = self.family.gamma();
        let bound = 2 * self.rho_prime;
        let mut closest = u64::MAX;
        for c in cops {
            if let Some(d) = gamma.distance(&r, c, bound)? {
                closest = closest.min(d);
            }
        }
        cx.check("meta-placement", closest >= bound, || format!("start {closest} from a cop, bound {bound}"));
        self.robber_bar = Some(r_bar);
        self.last_projected = projected;
        Ok(r)
    }

    fn moves(&mut self, t: &Table<'_>, params: &GameParams, view: &RobberView<'_>, cx: &mut Ctx<'_>) -> Result<MovePath, AgentError> {
        self.last_cops = view.cops.to_vec();
        let offset = (view.stage - 1) % self.lambda;
        if offset == 0 {
            if self.walk_at + 1 < self.walk.len() {
                cx.check("meta-walk-complete", false, || format!("{} edges of the walk left", self.walk.len() - 1 - self.walk_at));
                return Err(AgentError::StrategyInvariant("meta-stage ended before the walk".into()));
            }
            if let Some(rec) = self.record.as_mut() {
                rec.cop_checkpoints.extend(view.cop_moves.iter().flat_map(|m| m.0.iter().cloned()));
            }
            self.close_record(t, view.cops, cx)?;
            let m = (view.stage - 1) / self.lambda + 1;
            self.open_record(t, params, view, m, cx)?;
        }
        let rec = self.record.as_mut().expect("meta-stage open");
        rec.cop_checkpoints.extend(view.cop_moves.iter().flat_map(|m| m.0.iter().cloned()));
        let end = (self.walk_at + self.psi as usize).min(self.walk.len() - 1);
        let step = self.walk[self.walk_at..=end].to_vec();
        rec.robber_checkpoints.extend(step.iter().skip(1).cloned());
        self.walk_at = end;
        Ok(MovePath(step))
    }

    fn finish(&mut self, t: &Table<'_>, _: &GameParams, cx: &mut Ctx<'_>) {
        // A partial meta-stage is checked against the last cops seen.
        let cops_end = self.last_cops.clone();
        let _ = self.close_record(t, &cops_end, cx);
    }
}

/// `ℤ²` preset with a confined greedy weak-game oracle (margin 3, `ψ₀ = R₀ = 12`).
pub fn z2_meta_robber() -> MetaRobber {
    MetaRobber::z2(Box::new(|| {
        let base = Vertex::Grid(alloc::vec![0, 0]);
        Box::new(crate::agents::GreedyEvader::new(3, 12, 12).confined_to(base, 12))
    }))
}

/// Lamplighter preset: `L≀ℤ` simulated by `L^j≀ℤ` with the lamp-watching oracle.
pub fn lamplighter_meta_robber(order: u32) -> Result<MetaRobber, HomothetyError> {
    let fam = crate::homothety::LamplighterFamily::cyclic(order)?;
    Ok(MetaRobber::new(Box::new(fam), Box::new(|| Box::new(crate::agents::LamplighterEvader::new()))))
}
