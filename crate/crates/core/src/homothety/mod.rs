//! Quasi-homothety families `ι_j : Δ_j → Γ` with scale `ρ_j`, their coarse
//! inverses `π_j`, and sampling checks of the defining inequalities.

use alloc::string::String;

use num_rational::Ratio;

use crate::space::{Space, SpaceError, Vertex, BALL_LIMIT};

mod families;
mod verify;

pub use families::{LamplighterFamily, Z2ScalingFamily};
pub use verify::{verify_family, InequalityReport, SampleSpec, Sampling, VerificationReport, Violation};

pub type Q = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomothetyError {
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("family has no index {0}")]
    BadIndex(usize),
    #[error("no preimage of {x} within {bound} (best defect {defect})")]
    NoQuasiInverse { x: String, defect: u64, bound: Q },
}

/// A sequence of `(Aρ+B)`-surjective `(A,B)`-quasi-`ρ`-homotheties, indexed
/// from `j = 1`.
pub trait QuasiHomothetyFamily {
    fn gamma(&self) -> &Space;
    fn delta(&self, j: usize) -> Result<Space, HomothetyError>;
    /// `None` past the end of a finite list.
    fn rho(&self, j: usize) -> Option<u64>;
    fn a(&self) -> Q;
    fn b(&self) -> Q;
    fn iota(&self, j: usize, x: &Vertex) -> Result<Vertex, HomothetyError>;
    fn pi(&self, j: usize, x: &Vertex) -> Result<Vertex, HomothetyError>;
    fn describe(&self) -> String;

    /// Smallest index whose scale is at least `reach`.
    fn index_for(&self, reach: u64) -> Option<usize> {
        let mut j = 1;
        while let Some(r) = self.rho(j) {
            if r >= reach {
                return Some(j);
            }
            j += 1;
        }
        None
    }
}

impl<T: QuasiHomothetyFamily + ?Sized> QuasiHomothetyFamily for alloc::boxed::Box<T> {
    fn gamma(&self) -> &Space {
        (**self).gamma()
    }
    fn delta(&self, j: usize) -> Result<Space, HomothetyError> {
        (**self).delta(j)
    }
    fn rho(&self, j: usize) -> Option<u64> {
        (**self).rho(j)
    }
    fn a(&self) -> Q {
        (**self).a()
    }
    fn b(&self) -> Q {
        (**self).b()
    }
    fn iota(&self, j: usize, x: &Vertex) -> Result<Vertex, HomothetyError> {
        (**self).iota(j, x)
    }
    fn pi(&self, j: usize, x: &Vertex) -> Result<Vertex, HomothetyError> {
        (**self).pi(j, x)
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
}

pub fn q(n: u64) -> Q {
    Q::from_integer(n as i64)
}

/// `Aρ_j + B`.
pub fn surjectivity_bound<F: QuasiHomothetyFamily + ?Sized>(fam: &F, j: usize) -> Result<Q, HomothetyError> {
    let rho = fam.rho(j).ok_or(HomothetyError::BadIndex(j))?;
    Ok(fam.a() * q(rho) + fam.b())
}

/// A `Δ_j`-vertex within `radius` of `seed` whose image is closest to `x`.
/// Exact preimages win, then ties go to the smaller serialization.
pub fn generic_quasi_inverse<F: QuasiHomothetyFamily + ?Sized>(
    fam: &F,
    j: usize,
    x: &Vertex,
    seed: &Vertex,
    radius: u64,
) -> Result<Vertex, HomothetyError> {
    let delta = fam.delta(j)?;
    let bound = surjectivity_bound(fam, j)?;
    let mut best: Option<(u64, String, Vertex)> = None;
    for cand in delta.ball(seed, radius, BALL_LIMIT)? {
        let d = fam.gamma().dist(&fam.iota(j, &cand)?, x)?;
        let key = cand.canonical();
        if best.as_ref().is_none_or(|(bd, bk, _)| (d, &key) < (*bd, bk)) {
            best = Some((d, key, cand));
        }
    }
    let (d, _, v) = best.expect("a ball contains its center");
    if q(d) > bound {
        return Err(HomothetyError::NoQuasiInverse { x: x.canonical(), defect: d, bound });
    }
    Ok(v)
}
