use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

/// An element of one of the supported groups, in canonical form.
///
/// `Display` writes the canonical JSON encoding used in traces and the session
/// protocol; tie-breaks compare these strings bytewise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Grid(Vec<i64>),
    GridVar(i64, i64),
    Lamp(LampVertex),
    Bs(BsVertex),
    Tree(Word),
}

/// Lamp configuration with finite support plus the lamplighter position.
/// Identity lamps (index 0) are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LampVertex {
    pub lamps: BTreeMap<i64, u32>,
    pub pos: i64,
}

impl LampVertex {
    pub fn lamp(&self, at: i64) -> u32 {
        self.lamps.get(&at).copied().unwrap_or(0)
    }

    pub fn set_lamp(&mut self, at: i64, state: u32) {
        if state == 0 {
            self.lamps.remove(&at);
        } else {
            self.lamps.insert(at, state);
        }
    }
}

/// The affine map `x ↦ m^k·x + num/m^exp`. Canonical when `exp == 0` or
/// `m ∤ num`, and `num == 0` forces `exp == 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BsVertex {
    pub num: BigInt,
    pub exp: u32,
    pub k: i64,
}

/// A freely reduced word. Letter `+g` is generator `g` (1-based), `-g` its inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<i8>);

impl Word {
    pub fn letter_char(g: i8) -> char {
        let off = g.unsigned_abs() - 1;
        if g > 0 {
            (b'a' + off) as char
        } else {
            (b'A' + off) as char
        }
    }

    pub fn from_letters(s: &str) -> Option<Self> {
        let mut out = Vec::with_capacity(s.len());
        for c in s.chars() {
            let g = match c {
                'a'..='z' => (c as u8 - b'a') as i8 + 1,
                'A'..='Z' => -((c as u8 - b'A') as i8 + 1),
                _ => return None,
            };
            out.push(g);
        }
        Some(Word(out))
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != -w[1])
    }

    pub fn letters(&self) -> String {
        self.0.iter().map(|&g| Self::letter_char(g)).collect()
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Grid(c) => {
                f.write_str("[")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str("]")
            }
            Vertex::GridVar(a, b) => write!(f, "[{a},{b}]"),
            Vertex::Lamp(l) => {
                f.write_str("{\"lamps\":[")?;
                for (i, (p, s)) in l.lamps.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "[{p},{s}]")?;
                }
                write!(f, "],\"pos\":{}}}", l.pos)
            }
            Vertex::Bs(b) => write!(f, "{{\"num\":\"{}\",\"exp\":{},\"k\":{}}}", b.num, b.exp, b.k),
            // Letters never need JSON escaping.
            Vertex::Tree(w) => write!(f, "\"{}\"", w.letters()),
        }
    }
}

impl Vertex {
    pub fn canonical(&self) -> String {
        alloc::format!("{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encodings_are_bit_exact() {
        assert_eq!(Vertex::Grid(alloc::vec![1, -2]).canonical(), "[1,-2]");
        assert_eq!(Vertex::GridVar(3, -3).canonical(), "[3,-3]");
        let mut l = LampVertex { pos: -1, ..Default::default() };
        l.set_lamp(2, 1);
        l.set_lamp(-4, 3);
        assert_eq!(Vertex::Lamp(l).canonical(), "{\"lamps\":[[-4,3],[2,1]],\"pos\":-1}");
        let b = BsVertex { num: BigInt::from(-5), exp: 2, k: 3 };
        assert_eq!(Vertex::Bs(b).canonical(), "{\"num\":\"-5\",\"exp\":2,\"k\":3}");
        let w = Word::from_letters("aBc").unwrap();
        assert_eq!(w.0, [1, -2, 3]);
        assert_eq!(Vertex::Tree(w).canonical(), "\"aBc\"");
    }

    #[test]
    fn identity_lamps_are_dropped() {
        let mut l = LampVertex::default();
        l.set_lamp(0, 1);
        l.set_lamp(0, 0);
        assert!(l.lamps.is_empty());
    }
}
