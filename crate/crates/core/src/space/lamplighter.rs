//! `L^j ≀ ℤ` with generators "multiply the lamp under the lamplighter by `l`,
//! then step right". The inverse generators step left first and then multiply
//! the lamp now under the lamplighter by `l⁻¹`; so lamp `q` changes exactly when
//! the edge `[q, q+1]` is crossed.

use super::lamp_group::LampGroup;
use super::vertex::LampVertex;

pub fn step_right(g: &LampGroup, v: &LampVertex, l: u32) -> LampVertex {
    let mut out = v.clone();
    out.set_lamp(v.pos, g.mul(v.lamp(v.pos), l));
    out.pos += 1;
    out
}

pub fn step_left(g: &LampGroup, v: &LampVertex, l: u32) -> LampVertex {
    let mut out = v.clone();
    out.pos -= 1;
    out.set_lamp(out.pos, g.mul(v.lamp(out.pos), g.inv(l)));
    out
}

/// `(f,p)·(g,q) = (f · shift_p g, p + q)`.
pub fn compose(g: &LampGroup, x: &LampVertex, y: &LampVertex) -> LampVertex {
    let mut out = x.clone();
    for (&at, &s) in &y.lamps {
        let at = at + x.pos;
        out.set_lamp(at, g.mul(x.lamp(at), s));
    }
    out.pos = x.pos + y.pos;
    out
}

pub fn inverse(g: &LampGroup, x: &LampVertex) -> LampVertex {
    let mut out = LampVertex { pos: -x.pos, ..Default::default() };
    for (&at, &s) in &x.lamps {
        out.set_lamp(at - x.pos, g.inv(s));
    }
    out
}

/// Hull-walk length: every lamp `q` where the two configurations differ forces
/// the walk across edge `[q, q+1]`; the cheapest walk from `p` to `p'` covering
/// the hull `[lo, hi]` sweeps it once in one of two directions.
pub fn distance(x: &LampVertex, y: &LampVertex) -> u64 {
    let (p, p2) = (x.pos, y.pos);
    let mut lo = p.min(p2);
    let mut hi = p.max(p2);
    let mut a = x.lamps.iter().peekable();
    let mut b = y.lamps.iter().peekable();
    let mut mark = |q: i64| {
        lo = lo.min(q);
        hi = hi.max(q + 1);
    };
    loop {
        match (a.peek(), b.peek()) {
            (None, None) => break,
            (Some(&(&qa, _)), None) => {
                mark(qa);
                a.next();
            }
            (None, Some(&(&qb, _))) => {
                mark(qb);
                b.next();
            }
            (Some(&(&qa, &sa)), Some(&(&qb, &sb))) => {
                if qa < qb {
                    mark(qa);
                    a.next();
                } else if qb < qa {
                    mark(qb);
                    b.next();
                } else {
                    if sa != sb {
                        mark(qa);
                    }
                    a.next();
                    b.next();
                }
            }
        }
    }
    let span = hi - lo;
    let left_first = (p - lo) + span + (hi - p2);
    let right_first = (hi - p) + span + (p2 - lo);
    left_first.min(right_first) as u64
}

#[cfg(test)]
mod tests {
    use super::super::lamp_group::FiniteGroup;
    use super::*;

    fn z2() -> LampGroup {
        LampGroup::new(FiniteGroup::cyclic(2).unwrap(), 1).unwrap()
    }

    #[test]
    fn lamp_change_in_place_costs_two() {
        let e = LampVertex::default();
        let mut x = LampVertex::default();
        x.set_lamp(0, 1);
        assert_eq!(distance(&e, &x), 2);
        assert_eq!(distance(&e, &e), 0);
    }

    #[test]
    fn steps_are_mutually_inverse() {
        let g = z2();
        let mut x = LampVertex { pos: 3, ..Default::default() };
        x.set_lamp(2, 1);
        let r = step_right(&g, &x, 1);
        assert_eq!(step_left(&g, &r, 1), x);
        let l = step_left(&g, &x, 1);
        assert_eq!(step_right(&g, &l, 1), x);
        assert_eq!(distance(&x, &r), 1);
        assert_eq!(distance(&x, &l), 1);
    }

    #[test]
    fn group_laws() {
        let g = LampGroup::new(FiniteGroup::cyclic(3).unwrap(), 2).unwrap();
        let mut x = LampVertex { pos: 2, ..Default::default() };
        x.set_lamp(-1, 4);
        x.set_lamp(5, 7);
        let e = LampVertex::default();
        assert_eq!(compose(&g, &x, &inverse(&g, &x)), e);
        assert_eq!(compose(&g, &inverse(&g, &x), &x), e);
        let gen = step_right(&g, &e, 5);
        assert_eq!(compose(&g, &x, &gen), step_right(&g, &x, 5));
    }
}
