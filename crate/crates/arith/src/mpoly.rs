//! Sparse multivariate polynomials with arbitrary-precision integer
//! coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::monomial::{Monomial, Var, NVARS};

/// Polynomial in the global variable universe. Terms are kept strictly
/// descending in monomial order with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MPoly {
    terms: Vec<(Monomial, BigInt)>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MPoly {
                terms: vec![(Monomial::ONE, c)],
            }
        }
    }

    pub fn from_i64(c: i64) -> Self {
        Self::constant(BigInt::from(c))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), BigInt::one())
    }

    pub fn term(m: Monomial, c: BigInt) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            MPoly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero)
    /// terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(it: I) -> Self {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (m, c) in it {
            *acc.entry(m).or_default() += c;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, BigInt>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MPoly { terms }
    }

    /// Trusts the caller: terms must already be strictly descending and nonzero.
    pub(crate) fn from_sorted(terms: Vec<(Monomial, BigInt)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        MPoly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading_term(&self) -> Option<&(Monomial, BigInt)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_default()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|t| t.0.degree()).unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u16 {
        self.terms.iter().map(|t| t.0.exponent(v)).max().unwrap_or(0)
    }

    /// Bit set of variables that occur.
    pub fn support(&self) -> u16 {
        self.terms.iter().fold(0, |s, t| s | t.0.support())
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.merge(other, true)
    }

    fn merge(&self, other: &MPoly, negate: bool) -> MPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0, c));
        }
        MPoly { terms: out }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return MPoly::zero();
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: HashMap<Monomial, BigInt> =
            HashMap::with_capacity((self.terms.len() * other.terms.len() / 2 + 1).min(1 << 16));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let p = ca * cb;
                match acc.get_mut(&m) {
                    Some(c) => *c += p,
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        Self::from_map(acc)
    }

    /// Multiplication by a single term preserves the order of terms.
    pub fn mul_term(&self, m: &Monomial, c: &BigInt) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc * c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> MPoly {
        self.mul_term(&Monomial::ONE, c)
    }

    pub fn pow(&self, mut e: u32) -> MPoly {
        let mut base = self.clone();
        let mut acc = MPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Divides every coefficient by `c`; `None` unless all divisions are exact.
    pub fn div_int_exact(&self, c: &BigInt) -> Option<MPoly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, a) in &self.terms {
            let (q, r) = a.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            terms.push((*m, q));
        }
        Some(MPoly { terms })
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &MPoly) -> Option<MPoly> {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        if divisor.terms.len() == 1 {
            let (dm, dc) = &divisor.terms[0];
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                let qm = dm.quotient_of(m)?;
                let (q, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return None;
                }
                terms.push((qm, q));
            }
            return Some(MPoly { terms });
        }
        for v in 0..NVARS {
            if self.degree_in(v) < divisor.degree_in(v) {
                return None;
            }
        }
        if self.total_degree() < divisor.total_degree() {
            return None;
        }
        let (lm, lc) = divisor.terms[0].clone();
        let mut rem: BTreeMap<Monomial, BigInt> = self.terms.iter().cloned().collect();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let qm = lm.quotient_of(&m)?;
            let (qc, r) = c.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            for (dm, dc) in &divisor.terms[1..] {
                let key = dm.mul(&qm);
                let prod = dc * &qc;
                match rem.get_mut(&key) {
                    Some(v) => {
                        *v -= prod;
                        if v.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -prod);
                    }
                }
            }
            quotient.push((qm, qc));
        }
        Some(MPoly { terms: quotient })
    }

    /// Positive gcd of the integer coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::ONE,
            Some((m0, _)) => it.fold(*m0, |g, (m, _)| g.gcd(m)),
        }
    }

    /// Divides out the integer content and makes the leading coefficient
    /// positive.
    pub fn primitive_part(&self) -> MPoly {
        if self.is_zero() {
            return MPoly::zero();
        }
        let mut c = self.content();
        if self.terms[0].1.is_negative() {
            c = -c;
        }
        if c.is_one() {
            return self.clone();
        }
        self.div_int_exact(&c).expect("content divides")
    }

    /// Largest absolute coefficient.
    pub fn max_norm(&self) -> BigInt {
        self.terms
            .iter()
            .map(|(_, c)| c.abs())
            .max()
            .unwrap_or_default()
    }

    /// Substitutes the integer `value` for variable `v`.
    pub fn eval_var_int(&self, v: usize, value: &BigInt) -> MPoly {
        let maxd = self.degree_in(v) as usize;
        let mut powers = Vec::with_capacity(maxd + 1);
        powers.push(BigInt::one());
        for i in 1..=maxd {
            let next = &powers[i - 1] * value;
            powers.push(next);
        }
        MPoly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (m.without(v), c * &powers[m.exponent(v) as usize])),
        )
    }

    /// Coefficients with respect to variable `v`: entry `i` multiplies `v^i`.
    pub fn coefficients_in(&self, v: usize) -> Vec<MPoly> {
        let d = self.degree_in(v) as usize;
        let mut parts: Vec<Vec<(Monomial, BigInt)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            parts[m.exponent(v) as usize].push((m.without(v), c.clone()));
        }
        parts
            .into_iter()
            .map(|mut t| {
                // Removing one variable can change the relative order.
                t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                MPoly { terms: t }
            })
            .collect()
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in).
    pub fn from_coefficients_in(v: usize, coeffs: &[MPoly]) -> MPoly {
        MPoly::from_terms(coeffs.iter().enumerate().flat_map(|(i, p)| {
            p.terms
                .iter()
                .map(move |(m, c)| (m.with_exponent(v, i as u16), c.clone()))
        }))
    }

    /// Evaluates at integer values for every variable.
    pub fn eval_int(&self, point: &[BigInt; NVARS]) -> BigInt {
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> MPoly {
        MPoly::var(Var::X)
    }
    fn y() -> MPoly {
        MPoly::var(Var::Y)
    }

    #[test]
    fn ring_basics() {
        let a = x().add(&y());
        let b = x().sub(&y());
        let prod = a.mul(&b);
        assert_eq!(prod, x().pow(2).sub(&y().pow(2)));
        assert_eq!(prod.to_string(), "-y^2 + x^2");
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn display_uses_descending_grlex() {
        let p = x().pow(2).mul(&y()).scale(&BigInt::from(3)).sub(&MPoly::one());
        assert_eq!(p.to_string(), "3*x^2*y - 1");
        let q = x().mul(&y()).add(&MPoly::from_i64(2));
        assert_eq!(q.to_string(), "x*y + 2");
    }

    #[test]
    fn exact_division() {
        let a = x().add(&y());
        let b = x().sub(&y()).add(&MPoly::from_i64(3));
        let p = a.mul(&b);
        assert_eq!(p.div_exact(&a), Some(b.clone()));
        assert_eq!(p.div_exact(&b), Some(a.clone()));
        assert_eq!(p.add(&MPoly::one()).div_exact(&a), None);
        assert_eq!(x().div_exact(&x().scale(&BigInt::from(2))), None);
    }

    #[test]
    fn univariate_view_roundtrip() {
        let p = x().pow(3).mul(&y()).add(&y().pow(2)).sub(&x());
        let c = p.coefficients_in(0);
        assert_eq!(c.len(), 4);
        assert_eq!(MPoly::from_coefficients_in(0, &c), p);
    }

    #[test]
    fn content_and_primitive_part() {
        let p = x().scale(&BigInt::from(-6)).add(&MPoly::from_i64(4));
        assert_eq!(p.content(), BigInt::from(2));
        assert_eq!(p.primitive_part(), x().scale(&BigInt::from(3)).sub(&MPoly::from_i64(2)));
    }
}
