use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{HomothetyError, QuasiHomothetyFamily, Q};
use crate::space::{FiniteGroup, LampVertex, Space, Vertex};

/// `Γ = Δ_j = ℤ²` with `ι_j(x) = ρ_j·x`: an exact homothety, `A = 1`, `B = 0`.
#[derive(Clone, Debug)]
pub struct Z2ScalingFamily {
    rhos: Vec<u64>,
    plane: Space,
}

impl Z2ScalingFamily {
    pub fn new(rhos: Vec<u64>) -> Result<Self, HomothetyError> {
        if rhos.is_empty() || rhos[0] == 0 || rhos.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HomothetyError::Precondition("scales must be positive and strictly increasing".into()));
        }
        Ok(Self { rhos, plane: Space::grid(2)? })
    }

    fn scale(&self, j: usize) -> Result<i64, HomothetyError> {
        self.rho(j).map(|r| r as i64).ok_or(HomothetyError::BadIndex(j))
    }

    fn coords<'v>(&self, v: &'v Vertex) -> Result<&'v [i64], HomothetyError> {
        match v {
            Vertex::Grid(c) if c.len() == 2 => Ok(c),
            _ => Err(HomothetyError::Precondition(format!("{v} is not a point of the plane"))),
        }
    }
}

/// Nearest multiple of `s`, halves rounded toward −∞, divided by `s`.
pub(crate) fn round_div(x: i64, s: i64) -> i64 {
    (x + (s - 1) / 2).div_euclid(s)
}

impl QuasiHomothetyFamily for Z2ScalingFamily {
    fn gamma(&self) -> &Space {
        &self.plane
    }
    fn delta(&self, j: usize) -> Result<Space, HomothetyError> {
        self.scale(j)?;
        Ok(self.plane.clone())
    }
    fn rho(&self, j: usize) -> Option<u64> {
        j.checked_sub(1).and_then(|i| self.rhos.get(i)).copied()
    }
    fn a(&self) -> Q {
        Q::from_integer(1)
    }
    fn b(&self) -> Q {
        Q::from_integer(0)
    }
    fn iota(&self, j: usize, x: &Vertex) -> Result<Vertex, HomothetyError> {
        let s = self.scale(j)?;
        Ok(Vertex::Grid(self.coords(x)?.iter().map(|c| c * s).collect()))
    }
    fn pi(&self, j: usize, x: &Vertex) -> Result<Vertex, HomothetyError> {
        let s = self.scale(j)?;
        Ok(Vertex::Grid(self.coords(x)?.iter().map(|&c| round_div(c, s)).collect()))
    }
    fn describe(&self) -> String {
        let list: Vec<String> = self.rhos.iter().map(|r| format!("{r}")).collect();
        format!("z2:{}", list.join(","))
    }
}

/// `Γ = L≀ℤ`, `Δ_j = L^j≀ℤ`, `ρ_j = j`. `ι_j` spreads the `L^j` lamp at `k`
/// over the `j` consecutive `L` lamps starting at `jk`; `A = 1`, `B = 2`.
#[derive(Clone, Debug)]
pub struct LamplighterFamily {
    lamps: FiniteGroup,
    gamma: Space,
}

impl LamplighterFamily {
    pub fn new(lamps: FiniteGroup) -> Result<Self, HomothetyError> {
        if lamps.order() < 2 {
            return Err(HomothetyError::Precondition("the lamp group is trivial".into()));
        }
        Ok(Self { gamma: Space::lamplighter(lamps.clone(), 1)?, lamps })
    }

    pub fn cyclic(order: u32) -> Result<Self, HomothetyError> {
        Self::new(FiniteGroup::cyclic(order)?)
    }

    fn width(j: usize) -> Result<i64, HomothetyError> {
        if j == 0 {
            return Err(HomothetyError::BadIndex(0));
        }
        Ok(j as i64)
    }

    fn lamps_of(v: &Vertex) -> Result<&LampVertex, HomothetyError> {
        match v {
            Vertex::Lamp(l) => Ok(l),
            _ => Err(HomothetyError::Precondition(format!("{v} is not a lamplighter vertex"))),
        }
    }
}

impl QuasiHomothetyFamily for LamplighterFamily {
    fn gamma(&self) -> &Space {
        &self.gamma
    }
    fn delta(&self, j: usize) -> Result<Space, HomothetyError> {
        Self::width(j)?;
        Ok(Space::lamplighter(self.lamps.clone(), j as u32)?)
    }
    fn rho(&self, j: usize) -> Option<u64> {
        (j > 0).then_some(j as u64)
    }
    fn a(&self) -> Q {
        Q::from_integer(1)
    }
    fn b(&self) -> Q {
        Q::from_integer(2)
    }
    fn iota(&self, j: usize, x: &Vertex) -> Result<Vertex, HomothetyError> {
        let w = Self::width(j)?;
        let delta = self.delta(j)?;
        let group = delta.lamp_group().expect("lamplighter space");
        let a = Self::lamps_of(x)?;
        let mut out = LampVertex { pos: a.pos * w, ..Default::default() };
        for (&k, &state) in &a.lamps {
            for (i, c) in group.components(state).into_iter().enumerate() {
                out.set_lamp(k * w + i as i64, c);
            }
        }
        Ok(Vertex::Lamp(out))
    }
    fn pi(&self, j: usize, x: &Vertex) -> Result<Vertex, HomothetyError> {
        let w = Self::width(j)?;
        let delta = self.delta(j)?;
        let group = delta.lamp_group().expect("lamplighter space");
        let b = Self::lamps_of(x)?;
        let mut blocks: alloc::collections::BTreeMap<i64, Vec<u32>> = alloc::collections::BTreeMap::new();
        for (&q, &state) in &b.lamps {
            let block = blocks.entry(q.div_euclid(w)).or_insert_with(|| alloc::vec![0; j]);
            block[q.rem_euclid(w) as usize] = state;
        }
        let mut out = LampVertex { pos: b.pos.div_euclid(w), ..Default::default() };
        for (k, comps) in blocks {
            out.set_lamp(k, group.compose(&comps));
        }
        Ok(Vertex::Lamp(out))
    }
    fn describe(&self) -> String {
        format!("lamplighter:{}", self.lamps.order())
    }
}
