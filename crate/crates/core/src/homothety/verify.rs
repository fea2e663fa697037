use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{q, HomothetyError, QuasiHomothetyFamily, Q};
use crate::space::{Space, SpaceError, Vertex};

/// How many violation witnesses each inequality keeps.
const WITNESS_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSpec {
    pub radius: u64,
    /// Largest ball (in vertices) that is checked over all pairs.
    pub exhaustive_limit: usize,
    pub random_radius: u64,
    pub random_pairs: usize,
    pub seed: u64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self { radius: 5, exhaustive_limit: 20_000, random_radius: 8, random_pairs: 10_000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sampling {
    /// Every unordered pair of the ball.
    Exhaustive { radius: u64, vertices: usize },
    /// Endpoints are ends of random walks of length at most `radius` from the base.
    RandomWalk { radius: u64, pairs: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub x: String,
    pub y: String,
    pub lhs: Q,
    pub mid: Q,
    pub rhs: Q,
}

/// One inequality `lhs ≤ mid` or `mid ≤ rhs` over the sample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalityReport {
    pub name: &'static str,
    pub checked: u64,
    /// Smallest margin seen; negative means violated.
    pub worst_slack: Option<Q>,
    pub violations: Vec<Violation>,
    pub violation_count: u64,
}

impl InequalityReport {
    fn new(name: &'static str) -> Self {
        Self { name, checked: 0, worst_slack: None, violations: Vec::new(), violation_count: 0 }
    }

    fn add(&mut self, slack: Q, w: impl FnOnce() -> Violation) {
        self.checked += 1;
        if self.worst_slack.is_none_or(|s| slack < s) {
            self.worst_slack = Some(slack);
        }
        if slack < Q::from_integer(0) {
            self.violation_count += 1;
            if self.violations.len() < WITNESS_CAP {
                self.violations.push(w());
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexReport {
    pub j: usize,
    pub rho: u64,
    pub delta_sampling: Sampling,
    pub gamma_sampling: Sampling,
    pub entries: Vec<InequalityReport>,
}

impl IndexReport {
    pub fn entry(&self, name: &str) -> Option<&InequalityReport> {
        self.entries.iter().find(|e| e.name == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub family: String,
    pub indices: Vec<IndexReport>,
}

impl VerificationReport {
    pub fn violation_count(&self) -> u64 {
        self.indices.iter().flat_map(|i| &i.entries).map(|e| e.violation_count).sum()
    }
}

enum Sample {
    Pairs(Vec<Vertex>),
    Walks(Vec<(Vertex, Vertex)>),
}

fn random_walk(space: &Space, from: &Vertex, max_len: u64, rng: &mut ChaCha8Rng) -> Result<Vertex, SpaceError> {
    let mut v = from.clone();
    for _ in 0..rng.gen_range(0..=max_len) {
        let n = space.neighbors(&v)?;
        v = n[rng.gen_range(0..n.len())].clone();
    }
    Ok(v)
}

fn sample(space: &Space, spec: &SampleSpec, rng: &mut ChaCha8Rng) -> Result<(Sample, Sampling), SpaceError> {
    match space.ball(&space.base(), spec.radius, spec.exhaustive_limit) {
        Ok(mut ball) => {
            ball.sort();
            let n = ball.len();
            Ok((Sample::Pairs(ball), Sampling::Exhaustive { radius: spec.radius, vertices: n }))
        }
        Err(SpaceError::ResourceLimit(_)) => {
            let base = space.base();
            let mut pairs = Vec::with_capacity(spec.random_pairs);
            for _ in 0..spec.random_pairs {
                let x = random_walk(space, &base, spec.random_radius, rng)?;
                let y = random_walk(space, &base, spec.random_radius, rng)?;
                pairs.push((x, y));
            }
            let s = Sampling::RandomWalk { radius: spec.random_radius, pairs: spec.random_pairs, seed: spec.seed };
            Ok((Sample::Walks(pairs), s))
        }
        Err(e) => Err(e),
    }
}

impl Sample {
    fn vertices(&self) -> Vec<&Vertex> {
        match self {
            Sample::Pairs(b) => b.iter().collect(),
            Sample::Walks(p) => p.iter().flat_map(|(x, y)| [x, y]).collect(),
        }
    }

    fn for_each_pair(&self, mut f: impl FnMut(&Vertex, &Vertex) -> Result<(), HomothetyError>) -> Result<(), HomothetyError> {
        match self {
            Sample::Pairs(b) => {
                for i in 0..b.len() {
                    for k in i + 1..b.len() {
                        f(&b[i], &b[k])?;
                    }
                }
            }
            Sample::Walks(p) => {
                for (x, y) in p {
                    f(x, y)?;
                }
            }
        }
        Ok(())
    }
}

/// Checks the two defining inequalities and the three coarse-inverse
/// inequalities for each index in `js`.
pub fn verify_family<F: QuasiHomothetyFamily + ?Sized>(
    fam: &F,
    js: &[usize],
    spec: &SampleSpec,
) -> Result<VerificationReport, HomothetyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (a, b) = (fam.a(), fam.b());
    let gamma = fam.gamma();
    let mut indices = Vec::new();
    for &j in js {
        let rho = fam.rho(j).ok_or(HomothetyError::BadIndex(j))?;
        let delta = fam.delta(j)?;
        let (ds, delta_sampling) = sample(&delta, spec, &mut rng)?;
        let (gs, gamma_sampling) = sample(gamma, spec, &mut rng)?;
        let surj = a * q(rho) + b;
        let coarse = Q::from_integer(2) * a + Q::from_integer(3) * b;
        let zero = Q::from_integer(0);

        let mut def1 = InequalityReport::new("def1_surjective");
        let mut def2_lower = InequalityReport::new("def2_lower");
        let mut def2_upper = InequalityReport::new("def2_upper");
        let mut lemma_lower = InequalityReport::new("lemma_lower");
        let mut lemma_upper = InequalityReport::new("lemma_upper");
        let mut lemma_surj = InequalityReport::new("lemma_surjective");
        let mut near_inverse = InequalityReport::new("near_inverse");

        for x in gs.vertices() {
            let p = fam.pi(j, x)?;
            let back = fam.iota(j, &p)?;
            let d = q(gamma.dist(x, &back)?);
            let w = || Violation { x: x.canonical(), y: p.canonical(), lhs: zero, mid: d, rhs: surj };
            lemma_surj.add(surj - d, w);
            // Existence only: any neighbor of π(x) may serve as the witness.
            let mut best = d;
            if best > surj {
                for n in delta.neighbors(&p)? {
                    best = best.min(q(gamma.dist(x, &fam.iota(j, &n)?)?));
                }
            }
            def1.add(surj - best, || Violation { x: x.canonical(), y: p.canonical(), lhs: zero, mid: best, rhs: surj });
        }
        for x in ds.vertices() {
            let img = fam.iota(j, x)?;
            let p = fam.pi(j, &img)?;
            let d = q(delta.dist(x, &p)?);
            near_inverse.add(a * b - d, || Violation { x: x.canonical(), y: p.canonical(), lhs: zero, mid: d, rhs: a * b });
        }
        ds.for_each_pair(|x, y| {
            let dd = q(delta.dist(x, y)?);
            let dg = Q::new(gamma.dist(&fam.iota(j, x)?, &fam.iota(j, y)?)? as i64, rho as i64);
            let (lo, hi) = (dd / a - b, a * dd + b);
            let w = || Violation { x: x.canonical(), y: y.canonical(), lhs: lo, mid: dg, rhs: hi };
            def2_lower.add(dg - lo, w);
            def2_upper.add(hi - dg, w);
            Ok(())
        })?;
        gs.for_each_pair(|x, y| {
            let dg = Q::new(gamma.dist(x, y)? as i64, rho as i64);
            let dd = q(delta.dist(&fam.pi(j, x)?, &fam.pi(j, y)?)?);
            let (lo, hi) = (dd / a - coarse, a * dd + coarse);
            let w = || Violation { x: x.canonical(), y: y.canonical(), lhs: lo, mid: dg, rhs: hi };
            lemma_lower.add(dg - lo, w);
            lemma_upper.add(hi - dg, w);
            Ok(())
        })?;
        indices.push(IndexReport {
            j,
            rho,
            delta_sampling,
            gamma_sampling,
            entries: alloc::vec![def1, def2_lower, def2_upper, lemma_lower, lemma_upper, lemma_surj, near_inverse],
        });
    }
    Ok(VerificationReport { family: fam.describe(), indices })
}
