//! Bosonic Fock spaces `F_{r,s}` and vertex operators acting on them.
//!
//! A state `a_{-μ1} a_{-μ2} ... |r,s>` is labelled by the partition `μ`;
//! its level is `|μ|`. The oscillators satisfy
//! `[a_n, a_m] = n (1 - q^|n|)/(1 - t^|n|) δ_{n+m,0}`, so on these states
//! `a_n` acts as `κ(n) ∂/∂a_{-n}` with `κ(n) = n (1 - q^n)/(1 - t^n)`.

pub mod operators;
pub mod vertex;

use std::collections::BTreeMap;
use std::fmt;

use qvir_arith::Scalar;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::partition::{index, partition_count, Partition};
use crate::symfunc::{Basis, SymFun};

pub use operators::{
    auxiliary, b_combination, b_minus, b_plus, macdonald_operator, macdonald_operator_matrix,
    psi_spec, screening_rhs, screening_specs, t_operator, t_specs, Auxiliary, DifferenceRhs, Xi,
};
pub use vertex::{FockOperator, VOSpec, VOSpecBuilder, ZCoupling};

/// Label `(r, s)` of the Fock space built on `e^{α_{r,s} Q}|0>`, with
/// `α_{r,s} = (1+r)β/2 - (1+s)/2` and `t = q^β`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Sector {
    pub r: i32,
    pub s: i32,
}

impl Sector {
    pub const fn new(r: i32, s: i32) -> Self {
        Sector { r, s }
    }

    /// `q^{α_{r,s}} = y^{1+r} x^{-(1+s)}`; this is also how `q^{βa_0}` and
    /// `t^{a_0}` act on the sector.
    pub fn q_alpha(&self) -> Scalar {
        Scalar::xy_monomial(-(1 + self.s), 1 + self.r)
    }

    /// `q^{k α_{r,s}}`.
    pub fn q_alpha_pow(&self, k: i32) -> Scalar {
        Scalar::xy_monomial(-(1 + self.s) * k, (1 + self.r) * k)
    }

    /// Highest weight `λ_{r,s} = p^{1/2} q^α + p^{-1/2} q^{-α}`.
    pub fn weight(&self) -> Scalar {
        Scalar::xy_monomial(-self.s, self.r).add(&Scalar::xy_monomial(self.s, -self.r))
    }

    pub fn shifted(&self, dr: i32, ds: i32) -> Sector {
        Sector::new(self.r + dr, self.s + ds)
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.r, self.s)
    }
}

impl std::str::FromStr for Sector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::Invalid(format!("sector must look like r,s; got '{s}'"));
        if parts.len() != 2 {
            return Err(bad());
        }
        let r = parts[0].parse().map_err(|_| bad())?;
        let t = parts[1].parse().map_err(|_| bad())?;
        Ok(Sector::new(r, t))
    }
}

/// `κ(n) = n (1 - q^n)/(1 - t^n)` for `n >= 1`.
pub fn kappa(n: u32) -> Scalar {
    assert!(n >= 1, "κ is defined for positive modes");
    let q = Scalar::q().pow(n);
    let t = Scalar::t().pow(n);
    Scalar::from_int(n as i64)
        .mul(&Scalar::one().sub(&q))
        .div(&Scalar::one().sub(&t))
        .expect("1 - t^n is nonzero")
}

/// Dimension of level `level` (zero for negative levels).
pub fn level_dim(level: i64) -> usize {
    if level < 0 {
        0
    } else {
        partition_count(level as u32)
    }
}

/// Homogeneous Fock state.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FockVector {
    sector: Sector,
    level: u32,
    terms: BTreeMap<Partition, Scalar>,
}

impl FockVector {
    pub fn zero(sector: Sector, level: u32) -> Self {
        FockVector {
            sector,
            level,
            terms: BTreeMap::new(),
        }
    }

    /// Highest weight state `|r,s>`.
    pub fn vacuum(sector: Sector) -> Self {
        FockVector::basis(sector, &Partition::empty())
    }

    /// `a_{-μ}|r,s>`.
    pub fn basis(sector: Sector, mu: &Partition) -> Self {
        let mut v = FockVector::zero(sector, mu.weight());
        v.terms.insert(mu.clone(), Scalar::one());
        v
    }

    pub fn from_terms<I>(sector: Sector, level: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Partition, Scalar)>,
    {
        let mut v = FockVector::zero(sector, level);
        for (p, c) in terms {
            if p.weight() != level {
                return Err(Error::Invalid(format!("state {p} is not at level {level}")));
            }
            if c.is_zero() {
                continue;
            }
            let e = v.terms.entry(p.clone()).or_insert_with(Scalar::zero);
            *e = e.add(&c);
            if e.is_zero() {
                v.terms.remove(&p);
            }
        }
        Ok(v)
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, p: &Partition) -> Scalar {
        self.terms.get(p).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Terms in descending lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn scale(&self, c: &Scalar) -> FockVector {
        let dense: Vec<Scalar> = self.to_dense().iter().map(|a| a.mul(c)).collect();
        FockVector::from_dense(self.sector, self.level, &dense)
    }

    pub fn to_dense(&self) -> Vec<Scalar> {
        let ix = index(self.level);
        let mut v = vec![Scalar::zero(); ix.len()];
        for (p, c) in &self.terms {
            v[ix.position(p).expect("state of the right level")] = c.clone();
        }
        v
    }

    pub fn from_dense(sector: Sector, level: u32, v: &[Scalar]) -> FockVector {
        let ix = index(level);
        let mut out = FockVector::zero(sector, level);
        for (p, c) in ix.list().iter().zip(v) {
            if !c.is_zero() {
                out.terms.insert(p.clone(), c.clone());
            }
        }
        out
    }

    /// Relabels `a_{-n}` as the power sum `p_n`, dropping the sector.
    pub fn to_symmetric_function(&self) -> SymFun {
        SymFun::from_dense(Basis::P, self.level, &self.to_dense())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "basis": "p",
            "degree": self.level,
            "sector": [self.sector.r, self.sector.s],
            "terms": self.terms().map(|(p, c)| json!({
                "partition": p.parts(),
                "coeff": c.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sector_monomials() {
        let s = Sector::new(0, 0);
        assert_eq!(s.q_alpha(), "y/x".parse().unwrap());
        assert_eq!(s.weight(), "2".parse().unwrap());
        assert_eq!(Sector::new(1, 1).weight(), "y/x + x/y".parse().unwrap());
        // α_{r,s} + β = α_{r+2,s} and α_{r,s} - 1 = α_{r,s+2}
        let s = Sector::new(-1, 2);
        assert_eq!(s.q_alpha().mul(&Scalar::t()), s.shifted(2, 0).q_alpha());
        assert_eq!(s.q_alpha().div(&Scalar::q()).unwrap(), s.shifted(0, 2).q_alpha());
    }

    #[test]
    fn symmetric_function_image() {
        let mu: Partition = "2,1".parse().unwrap();
        let v = FockVector::basis(Sector::new(3, -1), &mu);
        let f = v.to_symmetric_function();
        assert_eq!(f, SymFun::basis_element(Basis::P, &mu));
        assert!(FockVector::zero(Sector::new(0, 0), 3).to_symmetric_function().is_zero());
    }
}
