//! Variables and exponent vectors.
//!
//! Every polynomial lives in the same fixed variable universe
//! `x < y < l < w1 < ... < w5`, where `x = q^{1/2}`, `y = t^{1/2}` and `l`
//! is the formal highest weight. Monomials compare in graded lexicographic
//! order, looking at the largest variable first on ties.

use std::cmp::Ordering;
use std::fmt;

/// Number of variables in the global universe.
pub const NVARS: usize = 8;

/// Number of auxiliary `w` variables.
pub const MAX_W: usize = NVARS - 3;

/// A ground variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// `x = q^{1/2}`
    X,
    /// `y = t^{1/2}`
    Y,
    /// formal highest weight
    L,
    /// auxiliary variable `w_i`, `1 <= i <= MAX_W`
    W(u8),
}

impl Var {
    pub fn index(self) -> usize {
        match self {
            Var::X => 0,
            Var::Y => 1,
            Var::L => 2,
            Var::W(i) => {
                assert!(
                    (1..=MAX_W as u8).contains(&i),
                    "w index {i} out of range 1..={MAX_W}"
                );
                2 + i as usize
            }
        }
    }

    pub fn from_index(i: usize) -> Var {
        match i {
            0 => Var::X,
            1 => Var::Y,
            2 => Var::L,
            i if i < NVARS => Var::W((i - 2) as u8),
            _ => panic!("variable index {i} out of range"),
        }
    }

    pub fn name(self) -> String {
        match self {
            Var::X => "x".into(),
            Var::Y => "y".into(),
            Var::L => "l".into(),
            Var::W(i) => format!("w{i}"),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Exponent vector over the global variable universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub(crate) [u16; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u16) -> Self {
        let mut m = [0; NVARS];
        m[v.index()] = e;
        Monomial(m)
    }

    pub fn exponents(&self) -> &[u16; NVARS] {
        &self.0
    }

    pub fn exponent(&self, v: usize) -> u16 {
        self.0[v]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0.iter()) {
            *a = a.checked_add(*b).expect("monomial exponent overflow");
        }
        Monomial(m)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        let mut m = [0; NVARS];
        for i in 0..NVARS {
            m[i] = other.0[i].checked_sub(self.0[i])?;
        }
        Some(Monomial(m))
    }

    /// Componentwise minimum (monomial gcd).
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0.iter()) {
            *a = (*a).min(*b);
        }
        Monomial(m)
    }

    /// Copy with the exponent of `v` set to zero.
    pub fn without(&self, v: usize) -> Monomial {
        let mut m = self.0;
        m[v] = 0;
        Monomial(m)
    }

    pub fn with_exponent(&self, v: usize, e: u16) -> Monomial {
        let mut m = self.0;
        m[v] = e;
        Monomial(m)
    }

    /// Bit set of variables with nonzero exponent.
    pub fn support(&self) -> u16 {
        let mut s = 0u16;
        for (i, &e) in self.0.iter().enumerate() {
            if e != 0 {
                s |= 1 << i;
            }
        }
        s
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "{}", Var::from_index(i))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_orders_by_degree_then_largest_variable() {
        let x = Monomial::var(Var::X);
        let y = Monomial::var(Var::Y);
        let x2 = Monomial::var_pow(Var::X, 2);
        assert!(x < y);
        assert!(y < x2);
        assert!(x.mul(&y) > x2);
        assert!(Monomial::ONE < x);
    }

    #[test]
    fn division_and_gcd() {
        let a = Monomial::var_pow(Var::X, 3).mul(&Monomial::var(Var::Y));
        let b = Monomial::var(Var::X);
        assert!(b.divides(&a));
        assert_eq!(b.quotient_of(&a), Some(Monomial::var_pow(Var::X, 2).mul(&Monomial::var(Var::Y))));
        assert_eq!(a.quotient_of(&b), None);
        assert_eq!(a.gcd(&Monomial::var_pow(Var::Y, 4)), Monomial::var(Var::Y));
    }

    #[test]
    fn display() {
        let m = Monomial::var_pow(Var::X, 2).mul(&Monomial::var(Var::W(3)));
        assert_eq!(m.to_string(), "x^2*w3");
        assert_eq!(Monomial::ONE.to_string(), "1");
    }
}
