//! Geometry probes: bigon widths, exact-width bigon and bottleneck witnesses,
//! and the horizontal reach of balls in BS(1,m).

use alloc::string::String;
use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::space::{BsVertex, Space, SpaceError, SpaceKind, Vertex, BALL_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("no bigon of odd width {0} on the square grid")]
    Parity(u64),
    #[error("no witness found: {0}")]
    NoWitness(String),
    #[error("hd is defined on BS(1,m) only")]
    NotBs,
}

/// Two geodesics with common endpoints whose synchronized width is exactly
/// `delta`, attained at index `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigonWitness {
    pub gamma: Vec<Vertex>,
    pub gamma_prime: Vec<Vertex>,
    pub delta: u64,
    pub t: usize,
}

/// The two ways from `home[t]` to `other[t]`: `plus` runs forward along
/// `home`, `minus` backward; each crosses over `delta` steps away (or at the
/// shared endpoint when that is closer).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Detours {
    pub plus: Vec<Vertex>,
    pub minus: Vec<Vertex>,
}

impl BigonWitness {
    /// Edge count ℓ of each geodesic.
    pub fn length(&self) -> usize {
        self.gamma.len() - 1
    }

    pub fn width(space: &Space, a: &[Vertex], b: &[Vertex]) -> Result<u64, SpaceError> {
        let mut w = 0;
        for (x, y) in a.iter().zip(b) {
            w = w.max(space.dist(x, y)?);
        }
        Ok(w)
    }

    /// Checks both paths are geodesics between the same endpoints and the
    /// width is exactly `delta`, attained at `t`.
    pub fn validate(&self, space: &Space) -> Result<(), AnalysisError> {
        let bad = |m: &str| Err(AnalysisError::NoWitness(m.into()));
        if self.gamma.len() != self.gamma_prime.len() || self.gamma.is_empty() {
            return bad("paths differ in length");
        }
        if self.gamma[0] != self.gamma_prime[0] || self.gamma.last() != self.gamma_prime.last() {
            return bad("paths do not share endpoints");
        }
        let ell = self.length() as u64;
        if space.dist(&self.gamma[0], self.gamma.last().expect("nonempty"))? != ell {
            return bad("paths are not geodesic");
        }
        for p in [&self.gamma, &self.gamma_prime] {
            if space.check_path(p, ell).is_err() {
                return bad("paths are not edge paths");
            }
        }
        if Self::width(space, &self.gamma, &self.gamma_prime)? != self.delta {
            return bad("width differs from delta");
        }
        if space.dist(&self.gamma[self.t], &self.gamma_prime[self.t])? != self.delta {
            return bad("delta not attained at t");
        }
        Ok(())
    }

    /// Detours from `gamma[t]` (or from `gamma_prime[t]` when `from_prime`).
    pub fn detours(&self, space: &Space, from_prime: bool) -> Result<Detours, SpaceError> {
        let (home, other) = if from_prime {
            (&self.gamma_prime, &self.gamma)
        } else {
            (&self.gamma, &self.gamma_prime)
        };
        let (t, d, ell) = (self.t, self.delta as usize, self.length());
        let mut plus: Vec<Vertex> = home[t..=ell.min(t + d)].to_vec();
        if t + d <= ell {
            let cross = space.geodesic(&home[t + d], &other[t + d], self.delta)?;
            plus.extend_from_slice(&cross[1..]);
            plus.extend(other[t..t + d].iter().rev().cloned());
        } else {
            plus.extend(other[t..ell].iter().rev().cloned());
        }
        let lo = t.saturating_sub(d);
        let mut minus: Vec<Vertex> = home[lo..=t].iter().rev().cloned().collect();
        if t >= d {
            let cross = space.geodesic(&home[lo], &other[lo], self.delta)?;
            minus.extend_from_slice(&cross[1..]);
        }
        minus.extend_from_slice(&other[lo + 1..=t]);
        Ok(Detours { plus, minus })
    }
}

/// Distances to a fixed target: closed form when available, else a table.
struct ToTarget<'a> {
    space: &'a Space,
    target: Vertex,
    table: Option<HashMap<Vertex, u64>>,
}

impl<'a> ToTarget<'a> {
    fn new(space: &'a Space, target: &Vertex, radius: u64) -> Result<Self, SpaceError> {
        let table = if space.has_closed_form() { None } else { Some(space.ball_distances(target, radius, BALL_LIMIT)?) };
        Ok(Self { space, target: target.clone(), table })
    }

    fn get(&self, v: &Vertex) -> Result<Option<u64>, SpaceError> {
        match &self.table {
            Some(t) => Ok(t.get(v).copied()),
            None => self.space.dist(v, &self.target).map(Some),
        }
    }
}

/// Layers of the interval between `u` and `w`: layer `s` holds the vertices
/// at distance `s` from `u` on some geodesic to `w`.
fn interval_layers(space: &Space, u: &Vertex, w: &Vertex) -> Result<Vec<Vec<Vertex>>, SpaceError> {
    let total = space.dist(u, w)?;
    let to_w = ToTarget::new(space, w, total)?;
    let mut layers = alloc::vec![alloc::vec![u.clone()]];
    for s in 0..total {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for x in &layers[s as usize] {
            for y in space.neighbors(x)? {
                if !seen.contains(&y) && to_w.get(&y)? == Some(total - s - 1) {
                    seen.insert(y.clone());
                    next.push(y);
                }
            }
        }
        layers.push(next);
    }
    Ok(layers)
}

fn bigon_through(space: &Space, u: &Vertex, w: &Vertex, x: &Vertex, y: &Vertex) -> Result<(Vec<Vertex>, Vec<Vertex>), SpaceError> {
    let via = |m: &Vertex| -> Result<Vec<Vertex>, SpaceError> {
        let mut p = space.geodesic(u, m, u64::MAX)?;
        p.extend_from_slice(&space.geodesic(m, w, u64::MAX)?[1..]);
        Ok(p)
    };
    Ok((via(x)?, via(y)?))
}

/// Widest bigon with both endpoints in the ball of `radius` about the base.
///
/// Any vertex of an interval layer lies on some geodesic, and the two sides of
/// a bigon are independent, so the maximum width over all bigons between `u`
/// and `w` is the largest distance inside a single layer.
pub fn bigon_thinness_scan(space: &Space, radius: u64, limit: usize) -> Result<(u64, Option<BigonWitness>), AnalysisError> {
    let ball = space.ball(&space.base(), radius, limit)?;
    let mut best: Option<(u64, Vertex, Vertex, usize, Vertex, Vertex)> = None;
    for (i, u) in ball.iter().enumerate() {
        for w in &ball[i + 1..] {
            let layers = interval_layers(space, u, w)?;
            for (s, layer) in layers.iter().enumerate() {
                for (a, x) in layer.iter().enumerate() {
                    for y in &layer[a + 1..] {
                        let d = space.dist(x, y)?;
                        if best.as_ref().is_none_or(|b| d > b.0) {
                            best = Some((d, u.clone(), w.clone(), s, x.clone(), y.clone()));
                        }
                    }
                }
            }
        }
    }
    let Some((delta, u, w, t, x, y)) = best else {
        return Ok((0, None));
    };
    let (gamma, gamma_prime) = bigon_through(space, &u, &w, &x, &y)?;
    Ok((delta, Some(BigonWitness { gamma, gamma_prime, delta, t })))
}

/// A bigon whose width is exactly `delta`.
pub fn find_bigon_exact_width(space: &Space, delta: u64) -> Result<BigonWitness, AnalysisError> {
    match space.kind() {
        SpaceKind::Grid { dim: 2 } => {
            if delta % 2 == 1 {
                return Err(AnalysisError::Parity(delta));
            }
            Ok(staircase_bigon((delta / 2) as i64))
        }
        _ => search_exact_bigon(space, delta, 20_000),
    }
}

/// `(0,0) → (L,L)`: right then up against up then right; `d(γ(s), γ'(s)) = 2s`
/// up to `s = L`.
pub fn staircase_bigon(half: i64) -> BigonWitness {
    let p = |x: i64, y: i64| Vertex::Grid(alloc::vec![x, y]);
    let gamma = (0..=half).map(|x| p(x, 0)).chain((1..=half).map(|y| p(half, y))).collect();
    let gamma_prime = (0..=half).map(|y| p(0, y)).chain((1..=half).map(|x| p(x, half))).collect();
    BigonWitness { gamma, gamma_prime, delta: 2 * half as u64, t: half as usize }
}

fn search_exact_bigon(space: &Space, delta: u64, limit: usize) -> Result<BigonWitness, AnalysisError> {
    if delta == 0 {
        let b = space.base();
        return Ok(BigonWitness { gamma: alloc::vec![b.clone()], gamma_prime: alloc::vec![b], delta: 0, t: 0 });
    }
    let base = space.base();
    let mut endpoints: Vec<(Vertex, u64)> = Vec::new();
    let visited = space.for_each_in_ball(&base, u64::MAX, limit, |v, d| {
        if d >= delta {
            endpoints.push((v.clone(), d));
        }
    });
    // Hitting the vertex cap only ends the search region.
    match visited {
        Ok(_) | Err(SpaceError::ResourceLimit(_)) => {}
        Err(e) => return Err(e.into()),
    }
    for (w, _) in endpoints {
        let layers = interval_layers(space, &base, &w)?;
        for layer in &layers {
            for (a, x) in layer.iter().enumerate() {
                for y in &layer[a + 1..] {
                    if space.dist(x, y)? != delta {
                        continue;
                    }
                    let (gamma, gamma_prime) = bigon_through(space, &base, &w, x, y)?;
                    if BigonWitness::width(space, &gamma, &gamma_prime)? == delta {
                        let t = gamma
                            .iter()
                            .zip(&gamma_prime)
                            .position(|(p, q)| space.dist(p, q).ok() == Some(delta))
                            .expect("width attained");
                        return Ok(BigonWitness { gamma, gamma_prime, delta, t });
                    }
                }
            }
        }
    }
    Err(AnalysisError::NoWitness(alloc::format!("no bigon of width {delta} within {limit} vertices")))
}

/// `x, y, z` with `y` a midpoint of `x, z`, and a path `γ` from `x` to `z`
/// staying more than `6·lambda_bound` away from `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BottleneckWitness {
    pub x: Vertex,
    pub y: Vertex,
    pub z: Vertex,
    pub gamma: Vec<Vertex>,
    pub eta_minus: Vec<Vertex>,
    pub eta_plus: Vec<Vertex>,
    pub lambda_bound: u64,
}

impl BottleneckWitness {
    pub fn clearance(&self, space: &Space) -> Result<u64, SpaceError> {
        let mut best = u64::MAX;
        for v in &self.gamma {
            best = best.min(space.dist(&self.y, v)?);
        }
        Ok(best)
    }

    pub fn validate(&self, space: &Space) -> Result<(), AnalysisError> {
        let bad = |m: &str| Err(AnalysisError::NoWitness(m.into()));
        let (xy, yz, xz) = (space.dist(&self.x, &self.y)?, space.dist(&self.y, &self.z)?, space.dist(&self.x, &self.z)?);
        if xy != yz || xy + yz != xz {
            return bad("y is not a midpoint of x and z");
        }
        if self.gamma.first() != Some(&self.x) || self.gamma.last() != Some(&self.z) {
            return bad("gamma does not join x to z");
        }
        if space.check_path(&self.gamma, u64::MAX).is_err() {
            return bad("gamma is not an edge path");
        }
        if self.eta_minus.first() != Some(&self.x) || self.eta_minus.last() != Some(&self.y) {
            return bad("eta- does not join x to y");
        }
        if self.eta_plus.first() != Some(&self.y) || self.eta_plus.last() != Some(&self.z) {
            return bad("eta+ does not join y to z");
        }
        if space.check_path(&self.eta_minus, xy).is_err() || space.check_path(&self.eta_plus, yz).is_err() {
            return bad("eta halves are not geodesic");
        }
        if self.clearance(space)? <= 6 * self.lambda_bound {
            return bad("gamma comes within 6 lambda of y");
        }
        Ok(())
    }
}

/// Bottleneck witness with `lambda_bound ≥ lambda`.
pub fn bottleneck_witness(space: &Space, lambda: u64) -> Result<BottleneckWitness, AnalysisError> {
    let w = match space.kind() {
        SpaceKind::Grid { dim: 2 } => grid_bottleneck(space, lambda)?,
        _ => search_bottleneck(space, lambda, 20_000)?,
    };
    w.validate(space)?;
    Ok(w)
}

fn grid_bottleneck(space: &Space, lambda: u64) -> Result<BottleneckWitness, AnalysisError> {
    let l = 6 * lambda as i64 + 1;
    let p = |x: i64, y: i64| Vertex::Grid(alloc::vec![x, y]);
    let (x, y, z) = (p(-l, 0), p(0, 0), p(l, 0));
    let mut gamma: Vec<Vertex> = (0..=l).map(|h| p(-l, h)).collect();
    gamma.extend((-l + 1..=l).map(|a| p(a, l)));
    gamma.extend((0..l).rev().map(|h| p(l, h)));
    let eta_minus = space.geodesic(&x, &y, u64::MAX)?;
    let eta_plus = space.geodesic(&y, &z, u64::MAX)?;
    let mut w = BottleneckWitness { x, y, z, gamma, eta_minus, eta_plus, lambda_bound: 0 };
    w.lambda_bound = (w.clearance(space)? - 1) / 6;
    Ok(w)
}

fn search_bottleneck(space: &Space, lambda: u64, limit: usize) -> Result<BottleneckWitness, AnalysisError> {
    let y = space.base();
    let keep_out = 6 * lambda;
    let dist_y = space.ball_distances(&y, keep_out + 4, limit).map_err(|e| match e {
        SpaceError::ResourceLimit(_) => AnalysisError::NoWitness("search region too large".into()),
        e => e.into(),
    })?;
    let r = keep_out + 1;
    let mut sphere: Vec<Vertex> = dist_y.iter().filter(|(_, &d)| d == r).map(|(v, _)| v.clone()).collect();
    sphere.sort_by_key(|v| v.canonical());
    let outer = keep_out + 4;
    for (i, x) in sphere.iter().enumerate() {
        for z in &sphere[i + 1..] {
            if space.dist(x, z)? != 2 * r {
                continue;
            }
            if let Some(gamma) = path_avoiding(space, x, z, &dist_y, keep_out, outer)? {
                let eta_minus = space.geodesic(x, &y, u64::MAX)?;
                let eta_plus = space.geodesic(&y, z, u64::MAX)?;
                let mut w = BottleneckWitness {
                    x: x.clone(),
                    y: y.clone(),
                    z: z.clone(),
                    gamma,
                    eta_minus,
                    eta_plus,
                    lambda_bound: 0,
                };
                w.lambda_bound = (w.clearance(space)? - 1) / 6;
                if w.lambda_bound >= lambda {
                    return Ok(w);
                }
            }
        }
    }
    Err(AnalysisError::NoWitness("every path between sphere points passes near the midpoint".into()))
}

/// Breadth-first path from `x` to `z` inside the annulus `keep_out < d(y,·) ≤ outer`.
fn path_avoiding(
    space: &Space,
    x: &Vertex,
    z: &Vertex,
    dist_y: &HashMap<Vertex, u64>,
    keep_out: u64,
    outer: u64,
) -> Result<Option<Vec<Vertex>>, SpaceError> {
    let allowed = |v: &Vertex| dist_y.get(v).is_some_and(|&d| d > keep_out && d <= outer);
    let mut parent: HashMap<Vertex, Vertex> = HashMap::new();
    let mut front = alloc::vec![x.clone()];
    parent.insert(x.clone(), x.clone());
    while !front.is_empty() {
        let mut next = Vec::new();
        for v in &front {
            for n in space.neighbors(v)? {
                if !allowed(&n) || parent.contains_key(&n) {
                    continue;
                }
                parent.insert(n.clone(), v.clone());
                if &n == z {
                    let mut path = alloc::vec![n];
                    while path.last() != Some(x) {
                        let p = parent[path.last().expect("nonempty")].clone();
                        path.push(p);
                    }
                    path.reverse();
                    return Ok(Some(path));
                }
                next.push(n);
            }
        }
        front = next;
    }
    Ok(None)
}

/// Largest axis displacement `|q|` (rounded down) over elements within `reach`
/// of `t^h` for some height `0 ≤ h ≤ height`.
pub fn hd(space: &Space, height: u64, reach: u64) -> Result<u64, AnalysisError> {
    let m = space.bs_base().ok_or(AnalysisError::NotBs)?;
    let mut best = BigInt::from(0);
    for h in 0..=height {
        let center = Vertex::Bs(BsVertex { num: BigInt::from(0), exp: 0, k: h as i64 });
        space.for_each_in_ball(&center, reach, BALL_LIMIT, |v, _| {
            if let Vertex::Bs(b) = v {
                let whole = b.num.abs() / crate::space::bs::power_of(m, b.exp as u64);
                if whole > best {
                    best = whole;
                }
            }
        })?;
    }
    Ok(best.to_u64().unwrap_or(u64::MAX))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn staircase_has_exact_width() {
        let s = Space::grid(2).unwrap();
        let w = find_bigon_exact_width(&s, 34).unwrap();
        assert_eq!(w.length(), 34);
        assert_eq!(w.t, 17);
        assert_eq!(w.gamma[17], Vertex::Grid(alloc::vec![17, 0]));
        assert_eq!(w.gamma_prime[17], Vertex::Grid(alloc::vec![0, 17]));
        w.validate(&s).unwrap();
        assert_eq!(find_bigon_exact_width(&s, 1), Err(AnalysisError::Parity(1)));
    }

    #[test]
    fn staircase_detours() {
        let s = Space::grid(2).unwrap();
        let w = find_bigon_exact_width(&s, 34).unwrap();
        for from_prime in [false, true] {
            let d = w.detours(&s, from_prime).unwrap();
            let (home, other) = if from_prime { (&w.gamma_prime, &w.gamma) } else { (&w.gamma, &w.gamma_prime) };
            for p in [&d.plus, &d.minus] {
                assert_eq!(p.first(), Some(&home[17]));
                assert_eq!(p.last(), Some(&other[17]));
                s.check_path(p, 3 * 34).unwrap();
            }
            // t ± δ leaves [0, ℓ], so both detours go around a shared endpoint.
            assert_eq!(d.plus.len() - 1, 34);
            assert_eq!(d.minus.len() - 1, 34);
        }
    }

    #[test]
    fn detours_cross_when_bigon_is_long() {
        let s = Space::grid(2).unwrap();
        // Widen the staircase bigon into a longer one: (0,0) → (2,2) → (12,2).
        let p = |x: i64, y: i64| Vertex::Grid(alloc::vec![x, y]);
        let mut gamma: Vec<Vertex> = (0..=12).map(|x| p(x, 0)).collect();
        gamma.extend((1..=2).map(|y| p(12, y)));
        let mut gamma_prime: Vec<Vertex> = (0..=2).map(|y| p(0, y)).collect();
        gamma_prime.extend((1..=12).map(|x| p(x, 2)));
        let w = BigonWitness { gamma, gamma_prime, delta: 4, t: 7 };
        w.validate(&s).unwrap();
        let d = w.detours(&s, false).unwrap();
        assert_eq!(d.plus.first(), Some(&w.gamma[7]));
        assert_eq!(d.plus.last(), Some(&w.gamma_prime[7]));
        s.check_path(&d.plus, 12).unwrap();
        s.check_path(&d.minus, 12).unwrap();
    }

    #[test]
    fn tree_has_no_wide_bigons() {
        let t = Space::free_tree(2).unwrap();
        assert_eq!(bigon_thinness_scan(&t, 3, BALL_LIMIT).unwrap().0, 0);
        assert!(matches!(search_exact_bigon(&t, 1, 200), Err(AnalysisError::NoWitness(_))));
        assert!(matches!(bottleneck_witness(&t, 1), Err(AnalysisError::NoWitness(_))));
    }

    #[test]
    fn grid_scan_small() {
        let s = Space::grid(2).unwrap();
        let (w, witness) = bigon_thinness_scan(&s, 2, BALL_LIMIT).unwrap();
        assert_eq!(w, 4);
        witness.unwrap().validate(&s).unwrap();
        assert_eq!(bigon_thinness_scan(&Space::line(), 4, BALL_LIMIT).unwrap().0, 0);
    }

    #[test]
    fn grid_bottleneck_for_lambda_two() {
        let s = Space::grid(2).unwrap();
        let w = bottleneck_witness(&s, 2).unwrap();
        assert_eq!(w.x, Vertex::Grid(alloc::vec![-13, 0]));
        assert_eq!(w.z, Vertex::Grid(alloc::vec![13, 0]));
        assert_eq!(w.clearance(&s).unwrap(), 13);
        assert_eq!(w.lambda_bound, 2);
    }

    #[test]
    fn gridvar_fallbacks() {
        let s = Space::grid_var(2).unwrap();
        let w = find_bigon_exact_width(&s, 2).unwrap();
        w.validate(&s).unwrap();
        let b = bottleneck_witness(&s, 1).unwrap();
        assert!(b.lambda_bound >= 1);
    }

    #[test]
    fn hd_values() {
        let b = Space::bs(2).unwrap();
        assert_eq!(hd(&b, 1, 4).unwrap(), 16);
        assert_eq!(hd(&b, 0, 1).unwrap(), 1);
        assert_eq!(hd(&Space::grid(2).unwrap(), 0, 1), Err(AnalysisError::NotBs));
    }
}
