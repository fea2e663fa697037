use alloc::vec::Vec;

use super::SpaceError;

/// A finite group given by its multiplication table. Element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: u32,
    table: Vec<u32>,
    inverses: Vec<u32>,
}

impl FiniteGroup {
    pub fn cyclic(order: u32) -> Result<Self, SpaceError> {
        if order == 0 {
            return Err(SpaceError::Malformed("cyclic group of order 0".into()));
        }
        let mut table = Vec::with_capacity((order * order) as usize);
        for a in 0..order {
            for b in 0..order {
                table.push((a + b) % order);
            }
        }
        Self::from_table(order, table)
    }

    /// Validates closure, identity at 0, inverses and associativity.
    pub fn from_table(order: u32, table: Vec<u32>) -> Result<Self, SpaceError> {
        let n = order as usize;
        if n == 0 || table.len() != n * n {
            return Err(SpaceError::Malformed("group table is not square".into()));
        }
        if table.iter().any(|&x| x >= order) {
            return Err(SpaceError::Malformed("group table entry out of range".into()));
        }
        for a in 0..n {
            if table[a] != a as u32 || table[a * n] != a as u32 {
                return Err(SpaceError::Malformed("element 0 is not the identity".into()));
            }
        }
        let mut inverses = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| table[a * n + b] == 0 && table[b * n + a] == 0) {
                Some(b) => inverses.push(b as u32),
                None => return Err(SpaceError::Malformed("group table lacks inverses".into())),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b] as usize;
                for c in 0..n {
                    let bc = table[b * n + c] as usize;
                    if table[ab * n + c] != table[a * n + bc] {
                        return Err(SpaceError::Malformed("group table is not associative".into()));
                    }
                }
            }
        }
        Ok(Self { order, table, inverses })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[(a * self.order + b) as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    /// True when the table is that of the cyclic group with the standard labelling.
    pub fn is_standard_cyclic(&self) -> bool {
        let q = self.order;
        (0..q).all(|a| (0..q).all(|b| self.mul(a, b) == (a + b) % q))
    }
}

/// The direct power `L^j` of a finite group, elements encoded in mixed radix:
/// index = Σ comp_i · q^i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LampGroup {
    base: FiniteGroup,
    power: u32,
    size: u32,
}

impl LampGroup {
    pub fn new(base: FiniteGroup, power: u32) -> Result<Self, SpaceError> {
        if power == 0 {
            return Err(SpaceError::Malformed("lamp power must be at least 1".into()));
        }
        let size = (base.order() as u64)
            .checked_pow(power)
            .filter(|&s| s <= 1 << 20)
            .ok_or_else(|| SpaceError::Malformed("lamp group too large".into()))?;
        Ok(Self { base, power, size: size as u32 })
    }

    pub fn base(&self) -> &FiniteGroup {
        &self.base
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn components(&self, mut x: u32) -> Vec<u32> {
        let q = self.base.order();
        let mut out = Vec::with_capacity(self.power as usize);
        for _ in 0..self.power {
            out.push(x % q);
            x /= q;
        }
        out
    }

    pub fn compose(&self, comps: &[u32]) -> u32 {
        let q = self.base.order();
        comps.iter().rev().fold(0, |acc, &c| acc * q + c)
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.power == 1 {
            return self.base.mul(a, b);
        }
        let q = self.base.order();
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.power {
            out += self.base.mul(a % q, b % q) * scale;
            a /= q;
            b /= q;
            scale *= q;
        }
        out
    }

    pub fn inv(&self, a: u32) -> u32 {
        if self.power == 1 {
            return self.base.inv(a);
        }
        let q = self.base.order();
        let mut a = a;
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.power {
            out += self.base.inv(a % q) * scale;
            a /= q;
            scale *= q;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_components_round_trip() {
        let g = LampGroup::new(FiniteGroup::cyclic(3).unwrap(), 3).unwrap();
        assert_eq!(g.size(), 27);
        for x in 0..27 {
            assert_eq!(g.compose(&g.components(x)), x);
            assert_eq!(g.mul(x, g.inv(x)), 0);
        }
        assert_eq!(g.components(1 + 2 * 9), [1, 0, 2]);
    }

    #[test]
    fn rejects_non_group() {
        // 0 is identity but 1*1 = 1 leaves 1 without an inverse.
        assert!(FiniteGroup::from_table(2, alloc::vec![0, 1, 1, 1]).is_err());
        let s3 = symmetric_three();
        assert!(!s3.is_standard_cyclic());
    }

    fn symmetric_three() -> FiniteGroup {
        // Permutations of {0,1,2}, composed as (a*b)(x) = a(b(x)).
        let perms: [[u8; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let idx = |p: [u8; 3]| perms.iter().position(|&q| q == p).unwrap() as u32;
        let mut table = Vec::new();
        for a in perms {
            for b in perms {
                table.push(idx([a[b[0] as usize], a[b[1] as usize], a[b[2] as usize]]));
            }
        }
        FiniteGroup::from_table(6, table).unwrap()
    }

    #[test]
    fn nonabelian_table_accepted() {
        let s3 = symmetric_three();
        assert_eq!(s3.order(), 6);
        assert_ne!(s3.mul(1, 2), s3.mul(2, 1));
    }
}
