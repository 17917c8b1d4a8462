//! Exact rational functions over the integers.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{ArithError, Result};
use crate::gcd::gcd;
use crate::monomial::{Monomial, Var, NVARS};
use crate::mpoly::MPoly;
use crate::ring::Ring;

/// A reduced fraction `num / den` of polynomials.
///
/// Invariants: `den != 0`, `gcd(num, den) = 1` (integer content included),
/// the leading coefficient of `den` is positive, and zero is stored as
/// `0 / 1`. Equality is therefore structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    num: MPoly,
    den: MPoly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_poly(MPoly::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_poly(MPoly::from_i64(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::from_poly(MPoly::constant(n))
    }

    /// `n / d` for integers.
    pub fn ratio(n: i64, d: i64) -> Result<Self> {
        Scalar::new(MPoly::from_i64(n), MPoly::from_i64(d))
    }

    pub fn from_poly(p: MPoly) -> Self {
        Scalar {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn var(v: Var) -> Self {
        Scalar::from_poly(MPoly::var(v))
    }

    /// `x = q^{1/2}`.
    pub fn x() -> Self {
        Scalar::var(Var::X)
    }

    /// `y = t^{1/2}`.
    pub fn y() -> Self {
        Scalar::var(Var::Y)
    }

    /// The formal highest weight.
    pub fn l() -> Self {
        Scalar::var(Var::L)
    }

    pub fn q() -> Self {
        Scalar::xy_monomial(2, 0)
    }

    pub fn t() -> Self {
        Scalar::xy_monomial(0, 2)
    }

    /// `p = q/t`.
    pub fn p() -> Self {
        Scalar::xy_monomial(2, -2)
    }

    /// `x^a y^b` for arbitrary integer exponents.
    pub fn xy_monomial(a: i32, b: i32) -> Self {
        let mut num = [0u16; NVARS];
        let mut den = [0u16; NVARS];
        let put = |slot: usize, e: i32, num: &mut [u16; NVARS], den: &mut [u16; NVARS]| {
            if e >= 0 {
                num[slot] = e as u16;
            } else {
                den[slot] = (-e) as u16;
            }
        };
        put(0, a, &mut num, &mut den);
        put(1, b, &mut num, &mut den);
        Scalar {
            num: MPoly::term(Monomial(num), BigInt::one()),
            den: MPoly::term(Monomial(den), BigInt::one()),
        }
    }

    /// Builds and normalizes `num / den`.
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return Scalar::zero();
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Self::fix_sign(num, den)
    }

    fn fix_sign(num: MPoly, den: MPoly) -> Self {
        if den.leading_coeff().is_negative() {
            Scalar {
                num: num.neg(),
                den: den.neg(),
            }
        } else {
            Scalar { num, den }
        }
    }

    pub fn numerator(&self) -> &MPoly {
        &self.num
    }

    pub fn denominator(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Integer value when the scalar is an integer constant.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_integer().and_then(|n| n.to_i64())
    }

    /// Re-runs normalization; the identity on values built through this API.
    pub fn renormalize(&self) -> Self {
        Self::normalize(self.num.clone(), self.den.clone())
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return Scalar::from_poly(self.num.add(&other.num));
        }
        if self.den == other.den {
            let n = self.num.add(&other.num);
            return Self::normalize(n, self.den.clone());
        }
        let g = gcd(&self.den, &other.den);
        if g.is_one() {
            let n = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            if n.is_zero() {
                return Scalar::zero();
            }
            return Self::fix_sign(n, self.den.mul(&other.den));
        }
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = other.den.div_exact(&g).expect("gcd divides");
        let n = self.num.mul(&d1).add(&other.num.mul(&b1));
        if n.is_zero() {
            return Scalar::zero();
        }
        let g2 = gcd(&n, &g);
        let (n, gq) = if g2.is_one() {
            (n, g)
        } else {
            (
                n.div_exact(&g2).expect("gcd divides"),
                g.div_exact(&g2).expect("gcd divides"),
            )
        };
        Self::fix_sign(n, b1.mul(&d1).mul(&gq))
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Scalar::from_poly(self.num.mul(&other.num));
        }
        let (a, b) = reduce_pair(&self.num, &other.den);
        let (c, d) = reduce_pair(&other.num, &self.den);
        Self::fix_sign(a.mul(&c), d.mul(&b))
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::fix_sign(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
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

    /// Integer power; negative exponents invert.
    pub fn powi(&self, e: i32) -> Result<Scalar> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            self.inv().map(|s| s.pow(e.unsigned_abs()))
        }
    }

    pub fn scale_int(&self, k: i64) -> Scalar {
        self.mul(&Scalar::from_int(k))
    }

    /// Composes with a substitution `v -> value` for each listed variable.
    pub fn substitute(&self, map: &[(Var, Scalar)]) -> Result<Scalar> {
        let num = substitute_poly(&self.num, &self.den, map);
        let (n, d) = num;
        if d.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        Scalar::new(n, d)
    }

    /// Coefficients in variable `v` when the denominator does not involve
    /// `v`: entry `i` multiplies `v^i`.
    pub fn coefficients_in(&self, v: Var) -> Option<Vec<Scalar>> {
        let vi = v.index();
        if self.den.degree_in(vi) != 0 {
            return None;
        }
        Some(
            self.num
                .coefficients_in(vi)
                .into_iter()
                .map(|c| Scalar::normalize(c, self.den.clone()))
                .collect(),
        )
    }

    /// Image under evaluation at `point` modulo `prime` (values indexed by
    /// variable). Fails with [`ArithError::Resample`] at a pole.
    pub fn eval_mod(&self, point: &[u64; NVARS], prime: u64) -> Result<u64> {
        let d = crate::modular::eval_poly_mod(&self.den, point, prime);
        if d == 0 {
            return Err(ArithError::Resample);
        }
        let n = crate::modular::eval_poly_mod(&self.num, point, prime);
        let inv = crate::modular::inv_mod(d, prime).ok_or(ArithError::Resample)?;
        Ok(crate::modular::mul_mod(n, inv, prime))
    }

    /// Exact value at an integer point as a reduced fraction.
    pub fn eval_int(&self, point: &[BigInt; NVARS]) -> Result<(BigInt, BigInt)> {
        let d = self.den.eval_int(point);
        if d.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        let n = self.num.eval_int(point);
        let g = n.gcd(&d);
        let (mut n, mut d) = (n / &g, d / &g);
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        Ok((n, d))
    }

    /// Term count of numerator plus denominator; used for pivot selection.
    pub fn complexity(&self) -> usize {
        self.num.len() + self.den.len()
    }
}

/// Cancels `gcd(a, b)` from both.
fn reduce_pair(a: &MPoly, b: &MPoly) -> (MPoly, MPoly) {
    if b.is_one() || a.is_one() {
        return (a.clone(), b.clone());
    }
    let g = gcd(a, b);
    if g.is_one() {
        (a.clone(), b.clone())
    } else {
        (
            a.div_exact(&g).expect("gcd divides"),
            b.div_exact(&g).expect("gcd divides"),
        )
    }
}

/// Substitutes into `num/den`, clearing the substituted denominators with a
/// common power so that the result stays polynomial.
fn substitute_poly(num: &MPoly, den: &MPoly, map: &[(Var, Scalar)]) -> (MPoly, MPoly) {
    let mut degs = [0u16; NVARS];
    let mut target: [Option<&Scalar>; NVARS] = [None; NVARS];
    for (v, s) in map {
        let i = v.index();
        target[i] = Some(s);
        degs[i] = num.degree_in(i).max(den.degree_in(i));
    }
    let mut cache: Vec<Vec<(MPoly, MPoly)>> = vec![Vec::new(); NVARS];
    for i in 0..NVARS {
        if let Some(s) = target[i] {
            // (n^e, d^e) for e = 0..=deg
            let mut pw = vec![(MPoly::one(), MPoly::one())];
            for e in 1..=degs[i] as usize {
                let (pn, pd) = &pw[e - 1];
                pw.push((pn.mul(s.numerator()), pd.mul(s.denominator())));
            }
            cache[i] = pw;
        }
    }
    let apply = |p: &MPoly| -> MPoly {
        let mut acc: Vec<MPoly> = Vec::new();
        for (m, c) in p.terms() {
            let mut rest = *m;
            let mut t = MPoly::term(Monomial::ONE, c.clone());
            for i in 0..NVARS {
                if target[i].is_some() {
                    let e = m.exponent(i) as usize;
                    rest = rest.without(i);
                    let (pn, _) = &cache[i][e];
                    let (_, pd) = &cache[i][degs[i] as usize - e];
                    t = t.mul(pn).mul(pd);
                }
            }
            acc.push(t.mul_term(&rest, &BigInt::one()));
        }
        acc.iter().fold(MPoly::zero(), |s, t| s.add(t))
    };
    (apply(num), apply(den))
}

impl Ring for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn from_i64(n: i64) -> Self {
        Scalar::from_int(n)
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Scalar::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Scalar::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Scalar::mul(self, other)
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
}

// Operator impls are on references only, so that method-call syntax such as
// `a.mul(&b)` always resolves to the borrowing inherent methods.
macro_rules! binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                Scalar::$m(self, rhs)
            }
        }
        impl $atr<&Scalar> for Scalar {
            fn $am(&mut self, rhs: &Scalar) {
                *self = Scalar::$m(self, rhs);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

/// Canonical text form: `num` alone when the denominator is 1, otherwise
/// `(num)/(den)` with terms in descending monomial order.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl FromStr for Scalar {
    type Err = ArithError;
    fn from_str(s: &str) -> Result<Self> {
        crate::parse::parse_scalar(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(e: &str) -> Scalar {
        e.parse().unwrap()
    }

    #[test]
    fn cancellation() {
        assert_eq!(&s("x - y") + &s("x + y"), s("2*x"));
        assert_eq!(s("x^2 - y^2").div(&s("x - y")).unwrap(), s("x + y"));
        assert_eq!(s("q").mul(&s("t").inv().unwrap()), Scalar::p());
        assert_eq!(Scalar::p().to_string(), "(x^2)/(y^2)");
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(s("x").div(&Scalar::zero()), Err(ArithError::DivisionByZero));
        assert_eq!(Scalar::ratio(1, 0), Err(ArithError::DivisionByZero));
        assert_eq!(s("x - x").inv(), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn canonical_sign_and_content() {
        let a = s("(2*x)/(-4*y)");
        assert_eq!(a.to_string(), "(-x)/(2*y)");
        assert_eq!(s("(3*x^2*y - 1)/(x*y + 2)").to_string(), "(3*x^2*y - 1)/(x*y + 2)");
    }

    #[test]
    fn substitution_inverts_variables() {
        let inv = [(Var::X, s("1/x")), (Var::Y, s("1/y"))];
        assert_eq!(s("x + y").substitute(&inv).unwrap(), s("(x + y)/(x*y)"));
        assert_eq!(Scalar::p().substitute(&inv).unwrap(), s("y^2/x^2"));
        assert_eq!(
            s("1/(x - 1)").substitute(&[(Var::X, Scalar::one())]),
            Err(ArithError::ZeroDenominator)
        );
    }

    #[test]
    fn coefficients_in_l() {
        let a = s("(l^2*x - 3)/(y + 1)");
        let c = a.coefficients_in(Var::L).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c[2], s("x/(y + 1)"));
        assert!(c[1].is_zero());
        assert!(s("1/l").coefficients_in(Var::L).is_none());
    }

    #[test]
    fn eval_mod_matches_field_operations() {
        let p = crate::modular::MERSENNE61;
        let mut pt = [0u64; NVARS];
        pt[0] = 2;
        pt[1] = 3;
        assert_eq!(s("x + y").eval_mod(&pt, p).unwrap(), 5);
        pt[1] = 2;
        assert_eq!(s("1/(x - y)").eval_mod(&pt, p), Err(ArithError::Resample));
    }
}
