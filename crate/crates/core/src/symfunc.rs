//! Symmetric functions: power-sum and monomial bases, the `(q,t)` scalar
//! product and Macdonald polynomials `P_λ(q,t)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use qvir_arith::Scalar;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::partition::{index, Partition};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Basis {
    /// Power sums `p_λ`.
    P,
    /// Monomial symmetric functions `m_λ`.
    M,
}

impl Basis {
    fn tag(self) -> &'static str {
        match self {
            Basis::P => "p",
            Basis::M => "m",
        }
    }
}

/// Homogeneous symmetric function in one of the two bases.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymFun {
    basis: Basis,
    degree: u32,
    terms: BTreeMap<Partition, Scalar>,
}

impl SymFun {
    pub fn zero(basis: Basis, degree: u32) -> Self {
        SymFun {
            basis,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Single basis element with coefficient 1.
    pub fn basis_element(basis: Basis, lambda: &Partition) -> Self {
        let mut f = SymFun::zero(basis, lambda.weight());
        f.terms.insert(lambda.clone(), Scalar::one());
        f
    }

    /// Builds from `(partition, coefficient)` pairs; zero coefficients are
    /// dropped and every partition must have weight `degree`.
    pub fn from_terms<I>(basis: Basis, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Partition, Scalar)>,
    {
        let mut f = SymFun::zero(basis, degree);
        for (p, c) in terms {
            if p.weight() != degree {
                return Err(Error::Invalid(format!(
                    "partition {p} does not have weight {degree}"
                )));
            }
            f.add_term(p, &c);
        }
        Ok(f)
    }

    fn add_term(&mut self, p: Partition, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(p.clone()).or_insert_with(Scalar::zero);
        *e = e.add(c);
        if e.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, p: &Partition) -> Scalar {
        self.terms.get(p).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Terms in descending lexicographic partition order.
    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn scale(&self, c: &Scalar) -> SymFun {
        let mut f = SymFun::zero(self.basis, self.degree);
        if !c.is_zero() {
            for (p, v) in &self.terms {
                f.terms.insert(p.clone(), v.mul(c));
            }
        }
        f
    }

    pub fn add(&self, other: &SymFun) -> Result<SymFun> {
        if self.basis != other.basis || self.degree != other.degree {
            return Err(Error::Invalid("adding symmetric functions of different shape".into()));
        }
        let mut f = self.clone();
        for (p, c) in &other.terms {
            f.add_term(p.clone(), c);
        }
        Ok(f)
    }

    /// Dense coefficient vector over [`crate::partition::partitions`] order.
    pub fn to_dense(&self) -> Vec<Scalar> {
        let ix = index(self.degree);
        let mut v = vec![Scalar::zero(); ix.len()];
        for (p, c) in &self.terms {
            v[ix.position(p).expect("partition of the right weight")] = c.clone();
        }
        v
    }

    pub fn from_dense(basis: Basis, degree: u32, v: &[Scalar]) -> SymFun {
        let ix = index(degree);
        let mut f = SymFun::zero(basis, degree);
        for (p, c) in ix.list().iter().zip(v) {
            if !c.is_zero() {
                f.terms.insert(p.clone(), c.clone());
            }
        }
        f
    }

    /// `c` with `self = c * other`, if it exists. The zero function is
    /// proportional to anything with `c = 0`.
    pub fn ratio_to(&self, other: &SymFun) -> Option<Scalar> {
        if self.basis != other.basis || self.degree != other.degree {
            return None;
        }
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        let (p, c) = other.terms.iter().next_back()?;
        let ratio = self.coeff(p).div(c).ok()?;
        (self == &other.scale(&ratio)).then_some(ratio)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "basis": self.basis.tag(),
            "degree": self.degree,
            "terms": self.terms().map(|(p, c)| json!({
                "partition": p.parts(),
                "coeff": c.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Number of ways to distribute the parts of `lambda` into bins of sizes
/// `mu`, i.e. the coefficient of `m_μ` in `p_λ`.
fn power_to_monomial_count(lambda: &[u32], mu: &[u32]) -> u64 {
    fn go(parts: &[u32], bins: &mut Vec<u32>, memo: &mut HashMap<(usize, Vec<u32>), u64>) -> u64 {
        if parts.is_empty() {
            return u64::from(bins.iter().all(|&b| b == 0));
        }
        let key = (parts.len(), bins.clone());
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let mut total = 0;
        for i in 0..bins.len() {
            if bins[i] >= parts[0] {
                bins[i] -= parts[0];
                total += go(&parts[1..], bins, memo);
                bins[i] += parts[0];
            }
        }
        memo.insert(key, total);
        total
    }
    go(lambda, &mut mu.to_vec(), &mut HashMap::new())
}

/// Change-of-basis data for one degree: `p_λ = Σ_μ fwd[λ][μ] m_μ` and
/// `m_μ = Σ_λ inv[μ][λ] p_λ`, indexed by partition position.
struct Transition {
    fwd: Vec<Vec<Scalar>>,
    inv: Vec<Vec<Scalar>>,
}

fn transition(n: u32) -> Arc<Transition> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Transition>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("transition cache").get(&n) {
        return t.clone();
    }
    let ix = index(n);
    let parts = ix.list();
    let k = parts.len();
    let fwd: Vec<Vec<Scalar>> = parts
        .iter()
        .map(|l| {
            parts
                .iter()
                .map(|m| Scalar::from_bigint(power_to_monomial_count(l.parts(), m.parts()).into()))
                .collect()
        })
        .collect();
    // fwd is lower triangular in this order; invert by forward substitution.
    let mut inv = vec![vec![Scalar::zero(); k]; k];
    for i in 0..k {
        let d = fwd[i][i].inv().expect("diagonal is nonzero");
        for j in 0..=i {
            let mut s = if i == j { Scalar::one() } else { Scalar::zero() };
            for m in j..i {
                if !fwd[i][m].is_zero() && !inv[m][j].is_zero() {
                    s = s.sub(&fwd[i][m].mul(&inv[m][j]));
                }
            }
            inv[i][j] = s.mul(&d);
        }
    }
    let t = Arc::new(Transition { fwd, inv });
    cache
        .lock()
        .expect("transition cache")
        .entry(n)
        .or_insert(t)
        .clone()
}

/// Rewrites a power-sum expansion in the monomial basis.
pub fn p_to_m(f: &SymFun) -> Result<SymFun> {
    if f.basis != Basis::P {
        return Err(Error::Invalid("p_to_m expects the power-sum basis".into()));
    }
    let tr = transition(f.degree);
    let a = f.to_dense();
    let k = a.len();
    let b: Vec<Scalar> = (0..k)
        .map(|mu| {
            (0..k).fold(Scalar::zero(), |acc, l| {
                if a[l].is_zero() || tr.fwd[l][mu].is_zero() {
                    acc
                } else {
                    acc.add(&a[l].mul(&tr.fwd[l][mu]))
                }
            })
        })
        .collect();
    Ok(SymFun::from_dense(Basis::M, f.degree, &b))
}

/// Rewrites a monomial expansion in the power-sum basis.
pub fn m_to_p(f: &SymFun) -> Result<SymFun> {
    if f.basis != Basis::M {
        return Err(Error::Invalid("m_to_p expects the monomial basis".into()));
    }
    let tr = transition(f.degree);
    let b = f.to_dense();
    let k = b.len();
    let a: Vec<Scalar> = (0..k)
        .map(|l| {
            (0..k).fold(Scalar::zero(), |acc, mu| {
                if b[mu].is_zero() || tr.inv[mu][l].is_zero() {
                    acc
                } else {
                    acc.add(&b[mu].mul(&tr.inv[mu][l]))
                }
            })
        })
        .collect();
    Ok(SymFun::from_dense(Basis::P, f.degree, &a))
}

/// The scalar product `<p_λ, p_μ> = δ_{λμ} z_λ Π (1 - q^{λ_i})/(1 - t^{λ_i})`
/// for given values of `q` and `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct InnerProduct {
    q: Scalar,
    t: Scalar,
}

impl Default for InnerProduct {
    fn default() -> Self {
        InnerProduct {
            q: Scalar::q(),
            t: Scalar::t(),
        }
    }
}

impl InnerProduct {
    pub fn new(q: Scalar, t: Scalar) -> Self {
        InnerProduct { q, t }
    }

    /// Hall–Littlewood specialization `q = 0`.
    pub fn hall_littlewood() -> Self {
        InnerProduct::new(Scalar::zero(), Scalar::t())
    }

    /// `<p_λ, p_λ>`.
    pub fn weight(&self, lambda: &Partition) -> Scalar {
        let mut w = Scalar::from_int(lambda.z_lambda() as i64);
        for &k in lambda.parts() {
            let num = Scalar::one().sub(&self.q.pow(k));
            let den = Scalar::one().sub(&self.t.pow(k));
            w = w.mul(&num.div(&den).expect("1 - t^k is nonzero"));
        }
        w
    }

    fn weights(&self, n: u32) -> Vec<Scalar> {
        index(n).list().iter().map(|l| self.weight(l)).collect()
    }

    pub fn inner(&self, f: &SymFun, g: &SymFun) -> Result<Scalar> {
        if f.degree != g.degree {
            return Err(Error::Invalid(format!(
                "inner product of degrees {} and {}",
                f.degree, g.degree
            )));
        }
        let f = to_p(f)?;
        let g = to_p(g)?;
        let mut acc = Scalar::zero();
        for (p, c) in &f.terms {
            if let Some(d) = g.terms.get(p) {
                acc = acc.add(&c.mul(d).mul(&self.weight(p)));
            }
        }
        Ok(acc)
    }

    /// All `P_λ` of degree `n` in the power-sum basis, dense, indexed like
    /// [`crate::partition::partitions`].
    ///
    /// Gram–Schmidt on the monomial basis along increasing lexicographic
    /// order, which extends dominance order.
    pub fn macdonald_all(&self, n: u32) -> Vec<Vec<Scalar>> {
        let tr = transition(n);
        let w = self.weights(n);
        let k = w.len();
        let dot = |a: &[Scalar], b: &[Scalar]| -> Scalar {
            let mut acc = Scalar::zero();
            for i in 0..k {
                if !a[i].is_zero() && !b[i].is_zero() {
                    acc = acc.add(&a[i].mul(&b[i]).mul(&w[i]));
                }
            }
            acc
        };
        let mut done: Vec<Option<(Vec<Scalar>, Scalar)>> = vec![None; k];
        for i in (0..k).rev() {
            let m: Vec<Scalar> = tr.inv[i].clone();
            let mut v = m.clone();
            for (_, slot) in done.iter().enumerate().skip(i + 1) {
                let (pm, norm) = slot.as_ref().expect("earlier partitions are done");
                let c = dot(&m, pm);
                if c.is_zero() {
                    continue;
                }
                let c = c.div(norm).expect("norm is nonzero");
                for j in 0..k {
                    if !pm[j].is_zero() {
                        v[j] = v[j].sub(&c.mul(&pm[j]));
                    }
                }
            }
            let norm = dot(&v, &v);
            done[i] = Some((v, norm));
        }
        done.into_iter().map(|d| d.expect("all computed").0).collect()
    }
}

fn to_p(f: &SymFun) -> Result<SymFun> {
    match f.basis {
        Basis::P => Ok(f.clone()),
        Basis::M => m_to_p(f),
    }
}

/// `<f, g>` for the generic `(q, t)`.
pub fn qt_inner(f: &SymFun, g: &SymFun) -> Result<Scalar> {
    InnerProduct::default().inner(f, g)
}

fn macdonald_cache(n: u32) -> Arc<Vec<Vec<Scalar>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<Vec<Scalar>>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("macdonald cache").get(&n) {
        return v.clone();
    }
    let all = Arc::new(InnerProduct::default().macdonald_all(n));
    cache
        .lock()
        .expect("macdonald cache")
        .entry(n)
        .or_insert(all)
        .clone()
}

/// Macdonald polynomial `P_λ(q,t)` in the power-sum basis, normalized to
/// coefficient 1 on `m_λ`.
pub fn macdonald_p(lambda: &Partition) -> SymFun {
    let n = lambda.weight();
    let all = macdonald_cache(n);
    let i = index(n).position(lambda).expect("partition is indexed");
    SymFun::from_dense(Basis::P, n, &all[i])
}

/// `Σ_{i=1}^{N} q^{λ_i} t^{N-i}` with `λ_i = 0` past the length.
pub fn macdonald_eigenvalue(lambda: &Partition, n_vars: u32) -> Result<Scalar> {
    if (n_vars as usize) < lambda.len() {
        return Err(Error::Invalid(format!(
            "N = {n_vars} is smaller than the length of {lambda}"
        )));
    }
    let q = Scalar::q();
    let t = Scalar::t();
    let mut acc = Scalar::zero();
    for i in 1..=n_vars {
        let part = lambda.parts().get(i as usize - 1).copied().unwrap_or(0);
        acc = acc.add(&q.pow(part).mul(&t.pow(n_vars - i)));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn sc(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    #[test]
    fn basis_change_small() {
        let p11 = SymFun::basis_element(Basis::P, &p("1,1"));
        let m = p_to_m(&p11).unwrap();
        assert_eq!(m.coeff(&p("2")), Scalar::one());
        assert_eq!(m.coeff(&p("1,1")), Scalar::from_int(2));
        let back = m_to_p(&m).unwrap();
        assert_eq!(back, p11);
    }

    #[test]
    fn inner_product_values() {
        let p1 = SymFun::basis_element(Basis::P, &p("1"));
        assert_eq!(qt_inner(&p1, &p1).unwrap(), sc("(1 - q)/(1 - t)"));
        let p2 = SymFun::basis_element(Basis::P, &p("2"));
        let p11 = SymFun::basis_element(Basis::P, &p("1,1"));
        assert!(qt_inner(&p2, &p11).unwrap().is_zero());
        assert_eq!(qt_inner(&p11, &p11).unwrap(), sc("2*(1 - q)^2/(1 - t)^2"));
        assert!(qt_inner(&p1, &p2).is_err());
    }

    #[test]
    fn low_degree_macdonald() {
        assert_eq!(macdonald_p(&p("1")), SymFun::basis_element(Basis::P, &p("1")));
        let m11 = SymFun::from_terms(
            Basis::P,
            2,
            [(p("1,1"), sc("1/2")), (p("2"), sc("-1/2"))],
        )
        .unwrap();
        assert_eq!(macdonald_p(&p("1,1")), m11);
        let p2m = p_to_m(&macdonald_p(&p("2"))).unwrap();
        assert_eq!(p2m.coeff(&p("2")), Scalar::one());
        assert_eq!(p2m.coeff(&p("1,1")), sc("(1 + q)*(1 - t)/(1 - q*t)"));
    }

    #[test]
    fn eigenvalues() {
        assert_eq!(macdonald_eigenvalue(&Partition::empty(), 2).unwrap(), sc("t + 1"));
        assert_eq!(macdonald_eigenvalue(&p("1"), 1).unwrap(), Scalar::q());
        assert_eq!(macdonald_eigenvalue(&p("2"), 2).unwrap(), sc("q^2*t + 1"));
        assert!(macdonald_eigenvalue(&p("1,1"), 1).is_err());
    }

    #[test]
    fn json_shape() {
        let f = SymFun::basis_element(Basis::P, &p("2,1"));
        assert_eq!(
            f.to_json().to_string(),
            r#"{"basis":"p","degree":3,"terms":[{"partition":[2,1],"coeff":"1"}]}"#
        );
    }
}
