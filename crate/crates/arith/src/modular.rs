//! Prime-field images for probabilistic identity testing.
//!
//! Everything works modulo the Mersenne prime `2^61 - 1`. [`Fp`] is the
//! field itself and [`FpPoly`] is the ring of univariate polynomials over it
//! (used with the highest weight `l` kept symbolic while `x`, `y` are
//! evaluated).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::monomial::NVARS;
use crate::mpoly::MPoly;
use crate::ring::Ring;

/// `2^61 - 1`.
pub const MERSENNE61: u64 = (1 << 61) - 1;

pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime; `None` for zero.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

fn reduce_bigint(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits in u64")
}

/// Image of a polynomial at `point` modulo `p`.
pub fn eval_poly_mod(poly: &MPoly, point: &[u64; NVARS], p: u64) -> u64 {
    let mut acc = 0u64;
    let mut powers: Vec<Vec<u64>> = vec![vec![1 % p]; NVARS];
    for (m, c) in poly.terms() {
        let mut t = reduce_bigint(c, p);
        for (v, pw) in powers.iter_mut().enumerate() {
            let e = m.exponent(v) as usize;
            if e == 0 {
                continue;
            }
            while pw.len() <= e {
                let last = *pw.last().expect("nonempty");
                pw.push(mul_mod(last, point[v], p));
            }
            t = mul_mod(t, pw[e], p);
        }
        acc = add_mod(acc, t, p);
    }
    acc
}

/// Element of `Z / (2^61 - 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Fp(pub u64);

impl Fp {
    pub fn new(v: u64) -> Self {
        Fp(v % MERSENNE61)
    }

    pub fn from_bigint(c: &BigInt) -> Self {
        Fp(reduce_bigint(c, MERSENNE61))
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn inv(self) -> Option<Fp> {
        inv_mod(self.0, MERSENNE61).map(Fp)
    }

    pub fn pow(self, e: u64) -> Fp {
        Fp(pow_mod(self.0, e, MERSENNE61))
    }
}

impl Ring for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn from_i64(n: i64) -> Self {
        if n >= 0 {
            Fp::new(n as u64)
        } else {
            Fp(sub_mod(0, n.unsigned_abs() % MERSENNE61, MERSENNE61))
        }
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, o: &Self) -> Self {
        Fp(add_mod(self.0, o.0, MERSENNE61))
    }
    fn sub(&self, o: &Self) -> Self {
        Fp(sub_mod(self.0, o.0, MERSENNE61))
    }
    fn mul(&self, o: &Self) -> Self {
        Fp(mul_mod(self.0, o.0, MERSENNE61))
    }
    fn neg(&self) -> Self {
        Fp(sub_mod(0, self.0, MERSENNE61))
    }
}

/// Univariate polynomial over [`Fp`]; `coeffs[i]` multiplies `l^i`, no
/// trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct FpPoly {
    coeffs: Vec<Fp>,
}

impl FpPoly {
    pub fn from_coeffs(mut coeffs: Vec<Fp>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FpPoly { coeffs }
    }

    pub fn constant(c: Fp) -> Self {
        FpPoly::from_coeffs(vec![c])
    }

    /// The indeterminate.
    pub fn var() -> Self {
        FpPoly::from_coeffs(vec![Fp(0), Fp(1)])
    }

    pub fn coeffs(&self) -> &[Fp] {
        &self.coeffs
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, at: Fp) -> Fp {
        let mut acc = Fp(0);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&at).add(c);
        }
        acc
    }

    pub fn scale(&self, c: Fp) -> Self {
        FpPoly::from_coeffs(self.coeffs.iter().map(|a| a.mul(&c)).collect())
    }

    pub fn leading(&self) -> Option<Fp> {
        self.coeffs.last().copied()
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(lc.inv().expect("leading coefficient is nonzero")),
        }
    }

    /// Newton interpolation through `(xs[i], ys[i])`; the `xs` must be
    /// distinct.
    pub fn interpolate(xs: &[Fp], ys: &[Fp]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        if n == 0 {
            return FpPoly::zero();
        }
        let mut dd: Vec<Fp> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                let den = xs[i].sub(&xs[i - j]).inv().expect("distinct nodes");
                dd[i] = dd[i].sub(&dd[i - 1]).mul(&den);
            }
        }
        let mut acc = FpPoly::constant(dd[n - 1]);
        for i in (0..n - 1).rev() {
            let shift = FpPoly::from_coeffs(vec![xs[i].neg(), Fp(1)]);
            acc = acc.mul(&shift).add(&FpPoly::constant(dd[i]));
        }
        acc
    }
}

impl Ring for FpPoly {
    fn zero() -> Self {
        FpPoly { coeffs: Vec::new() }
    }
    fn one() -> Self {
        FpPoly::constant(Fp(1))
    }
    fn from_i64(n: i64) -> Self {
        FpPoly::constant(Fp::from_i64(n))
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).copied().unwrap_or_default();
            let b = o.coeffs.get(i).copied().unwrap_or_default();
            c.push(a.add(&b));
        }
        FpPoly::from_coeffs(c)
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero();
        }
        let mut c = vec![Fp(0); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        FpPoly::from_coeffs(c)
    }
    fn neg(&self) -> Self {
        FpPoly {
            coeffs: self.coeffs.iter().map(|a| a.neg()).collect(),
        }
    }
}

/// Seeded source of random field elements.
pub struct PointSampler {
    rng: ChaCha8Rng,
}

impl PointSampler {
    pub fn new(seed: u64) -> Self {
        PointSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform element of `[2, p - 1)`, avoiding `0` and `±1`.
    pub fn element(&mut self) -> u64 {
        self.rng.gen_range(2..MERSENNE61 - 1)
    }

    pub fn point(&mut self) -> [u64; NVARS] {
        let mut pt = [0u64; NVARS];
        for v in pt.iter_mut() {
            *v = self.element();
        }
        pt
    }
}

/// Determinant over [`Fp`] by Gaussian elimination.
pub fn fp_det(m: &[Vec<Fp>]) -> Fp {
    let n = m.len();
    let mut a: Vec<Vec<Fp>> = m.to_vec();
    let mut det = Fp(1);
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Fp(0);
        };
        if piv != c {
            a.swap(piv, c);
            det = det.neg();
        }
        let pv = a[c][c];
        det = det.mul(&pv);
        let inv = pv.inv().expect("pivot is nonzero");
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].mul(&inv);
            for k in c..n {
                let d = a[c][k].mul(&f);
                a[r][k] = a[r][k].sub(&d);
            }
        }
    }
    det
}

/// Rank over [`Fp`] of a (possibly rectangular) matrix.
pub fn fp_rank(m: &[Vec<Fp>]) -> usize {
    let mut a: Vec<Vec<Fp>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(piv, rank);
        let inv = a[rank][c].inv().expect("pivot is nonzero");
        for r in rank + 1..rows {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].mul(&inv);
            for k in c..cols {
                let d = a[rank][k].mul(&f);
                a[r][k] = a[r][k].sub(&d);
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_inverse() {
        let a = Fp::new(123456789);
        assert_eq!(a.mul(&a.inv().unwrap()), Fp(1));
        assert_eq!(Fp::from_i64(-1).add(&Fp(1)), Fp(0));
        assert!(Fp(0).inv().is_none());
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = FpPoly::from_coeffs(vec![Fp(3), Fp::from_i64(-2), Fp(0), Fp(7)]);
        let xs: Vec<Fp> = (1..=4).map(Fp).collect();
        let ys: Vec<Fp> = xs.iter().map(|&x| f.eval(x)).collect();
        assert_eq!(FpPoly::interpolate(&xs, &ys), f);
        assert!(FpPoly::interpolate(&[], &[]).is_zero());
    }

    #[test]
    fn det_and_rank() {
        let m = vec![vec![Fp(2), Fp(1)], vec![Fp(4), Fp(2)]];
        assert_eq!(fp_det(&m), Fp(0));
        assert_eq!(fp_rank(&m), 1);
        let m = vec![vec![Fp(0), Fp(1)], vec![Fp(1), Fp(0)]];
        assert_eq!(fp_det(&m), Fp::from_i64(-1));
        assert_eq!(fp_rank(&m), 2);
    }

    #[test]
    fn sampler_is_reproducible() {
        let a = PointSampler::new(7).point();
        let b = PointSampler::new(7).point();
        assert_eq!(a, b);
        assert_ne!(a, PointSampler::new(8).point());
    }
}
