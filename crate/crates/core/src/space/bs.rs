//! BS(1,m) as affine maps `x ↦ m^k·x + q` with `q ∈ ℤ[1/m]`.
//!
//! Right multiplication by `a` adds `m^k` to `q`; right multiplication by `t`
//! raises `k` by one. So `t·a·t⁻¹ = a^m`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::vertex::BsVertex;

/// `num · m^(-exp)` with `exp` of either sign, before normalization.
struct Scaled {
    num: BigInt,
    exp: i64,
}

fn pow(m: u32, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(m), e as usize)
}

fn normalize(m: u32, s: Scaled, k: i64) -> BsVertex {
    let Scaled { mut num, mut exp } = s;
    if exp < 0 {
        num *= pow(m, exp.unsigned_abs());
        exp = 0;
    }
    if num.is_zero() {
        return BsVertex { num, exp: 0, k };
    }
    let mb = BigInt::from(m);
    while exp > 0 {
        let (qt, r) = num.div_rem(&mb);
        if !r.is_zero() {
            break;
        }
        num = qt;
        exp -= 1;
    }
    BsVertex { num, exp: exp as u32, k }
}

fn add(m: u32, a: Scaled, b: Scaled) -> Scaled {
    let e = a.exp.max(b.exp);
    let num = a.num * pow(m, (e - a.exp) as u64) + b.num * pow(m, (e - b.exp) as u64);
    Scaled { num, exp: e }
}

pub fn is_canonical(m: u32, v: &BsVertex) -> bool {
    if v.num.is_zero() {
        return v.exp == 0;
    }
    v.exp == 0 || !(&v.num % BigInt::from(m)).is_zero()
}

pub fn from_parts(m: u32, num: BigInt, exp: i64, k: i64) -> BsVertex {
    normalize(m, Scaled { num, exp }, k)
}

/// Right multiplication by `a^sign`.
pub fn mul_a(m: u32, v: &BsVertex, sign: i64) -> BsVertex {
    let step = Scaled { num: BigInt::from(sign), exp: -v.k };
    let q = Scaled { num: v.num.clone(), exp: v.exp as i64 };
    normalize(m, add(m, q, step), v.k)
}

/// Right multiplication by `t^sign`.
pub fn mul_t(v: &BsVertex, sign: i64) -> BsVertex {
    BsVertex { num: v.num.clone(), exp: v.exp, k: v.k + sign }
}

pub fn compose(m: u32, g: &BsVertex, h: &BsVertex) -> BsVertex {
    let gh = Scaled { num: h.num.clone(), exp: h.exp as i64 - g.k };
    let q = add(m, Scaled { num: g.num.clone(), exp: g.exp as i64 }, gh);
    normalize(m, q, g.k + h.k)
}

pub fn inverse(m: u32, g: &BsVertex) -> BsVertex {
    normalize(m, Scaled { num: -g.num.clone(), exp: g.exp as i64 + g.k }, -g.k)
}

/// Minimal Σ|c_i| over representations `Q = Σ_{i=0}^{top} c_i m^i` where every
/// coefficient below `top` lies in `(-m, m)` and the top one is unrestricted.
fn digit_cost(m: u32, q: &BigInt, top: i64) -> BigInt {
    let mb = BigInt::from(m);
    // At most two consecutive carry values survive each digit.
    let mut states: Vec<(BigInt, BigInt)> = alloc::vec![(q.clone(), BigInt::zero())];
    for _ in 0..top {
        let mut next: Vec<(BigInt, BigInt)> = Vec::with_capacity(2);
        for (v, c) in &states {
            let r = v.mod_floor(&mb);
            for ci in [r.clone(), &r - &mb] {
                let v2 = (v - &ci).div_floor(&mb);
                let c2 = c + ci.abs();
                match next.iter_mut().find(|(w, _)| *w == v2) {
                    Some(slot) if slot.1 > c2 => slot.1 = c2,
                    Some(_) => {}
                    None => next.push((v2, c2)),
                }
            }
        }
        states = next;
    }
    states.into_iter().map(|(v, c)| c + v.abs()).min().expect("nonempty states")
}

/// Word length of `g` over `{a, t}`. The walk descends to the lowest level the
/// denominator needs, climbs to some level `U`, and ends at `k`; `U` is raised
/// until the vertical cost alone exceeds the best total found.
pub fn word_length(m: u32, g: &BsVertex) -> BigInt {
    let k = g.k;
    let low = 0.min(k).min(-(g.exp as i64));
    let q = &g.num * pow(m, (-(g.exp as i64) - low) as u64);
    let mut best: Option<BigInt> = None;
    let mut up = 0.max(k);
    loop {
        let vert = ((-low) + (up - low) + (up - k)).min(up + (up - low) + (k - low));
        let vert = BigInt::from(vert);
        if let Some(b) = &best {
            if &vert > b {
                break;
            }
        }
        let total = vert + digit_cost(m, &q, up - low);
        if best.as_ref().is_none_or(|b| &total < b) {
            best = Some(total);
        }
        up += 1;
    }
    best.expect("at least one level tried")
}

pub fn distance(m: u32, u: &BsVertex, w: &BsVertex) -> u64 {
    let g = compose(m, &inverse(m, u), w);
    word_length(m, &g).to_u64().unwrap_or(u64::MAX)
}

/// The axis coordinate `q` as an exact fraction `(num, m^exp)`.
pub fn shift(m: u32, v: &BsVertex) -> (BigInt, BigInt) {
    (v.num.clone(), pow(m, v.exp as u64))
}

pub fn identity() -> BsVertex {
    BsVertex { num: BigInt::zero(), exp: 0, k: 0 }
}

pub fn power_of(m: u32, e: u64) -> BigInt {
    if e == 0 {
        return BigInt::one();
    }
    pow(m, e)
}
