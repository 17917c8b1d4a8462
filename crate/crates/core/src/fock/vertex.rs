//! Declarative vertex operators and their modes.
//!
//! A [`VOSpec`] describes
//!
//! ```text
//! V(z) = c · exp(Σ C(n) a_{-n} (σz)^n / n) · exp(Σ D(n) a_n (σz)^{-n} / n)
//!          · e^{charge} · (q^{βa_0})^k · z^{coupling}
//! ```
//!
//! and its mode `V_m` is the coefficient of `z^{-m}` relative to the overall
//! sector-dependent power produced by the coupling. On a state labelled by
//! `μ` the annihilation exponential acts as the translation
//! `a_{-n} -> a_{-n} + D(n) κ(n)/n · z^{-n}`, so it only removes
//! sub-multisets of `μ`; the creation exponential then contributes a layer
//! of fixed degree. Mode matrices are memoized per sector, mode and input
//! level.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use qvir_arith::Scalar;

use crate::error::{Error, Result};
use crate::fock::{level_dim, FockVector, Sector};
use crate::linalg::DMatrix;
use crate::partition::{index, Partition};

pub type CoeffFn = Arc<dyn Fn(u32) -> Scalar + Send + Sync>;

/// On-demand coefficient sequence `n -> C(n)`, `n >= 1`, with optional
/// overrides of single entries.
#[derive(Clone)]
struct Coefficients {
    f: CoeffFn,
    overrides: BTreeMap<u32, Scalar>,
    cache: Arc<Mutex<Vec<Scalar>>>,
}

impl Coefficients {
    fn new(f: CoeffFn) -> Self {
        Coefficients {
            f,
            overrides: BTreeMap::new(),
            cache: Arc::new(Mutex::new(Vec::new())),
        }
    }

    fn zero() -> Self {
        Coefficients::new(Arc::new(|_| Scalar::zero()))
    }

    fn get(&self, n: u32) -> Scalar {
        assert!(n >= 1);
        if let Some(v) = self.overrides.get(&n) {
            return v.clone();
        }
        let i = n as usize - 1;
        if let Some(v) = self.cache.lock().expect("coefficient cache").get(i) {
            return v.clone();
        }
        let mut c = self.cache.lock().expect("coefficient cache");
        while c.len() <= i {
            let k = c.len() as u32 + 1;
            c.push((self.f)(k));
        }
        c[i].clone()
    }
}

/// Sector-dependent power of `z` carried by an operator.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ZCoupling {
    None,
    /// `z^{2β a_0}`, i.e. `z^{2α}` on `F_{r,s}`.
    TwoBetaA0,
    /// `z^{-2 a_0}`, i.e. `z^{-2α/β}` on `F_{r,s}`.
    MinusTwoA0,
}

/// Declarative description of a normal-ordered vertex operator.
pub struct VOSpec {
    name: String,
    creation: Coefficients,
    annihilation: Coefficients,
    charge: (i32, i32),
    zero_mode_power: i32,
    coupling: ZCoupling,
    prefactor: Scalar,
    scale: Scalar,
    layers: Mutex<Vec<Arc<Vec<Scalar>>>>,
    modes: Mutex<HashMap<(Sector, i32, u32), Arc<DMatrix>>>,
}

impl fmt::Debug for VOSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VOSpec")
            .field("name", &self.name)
            .field("charge", &self.charge)
            .field("zero_mode_power", &self.zero_mode_power)
            .field("coupling", &self.coupling)
            .field("prefactor", &self.prefactor.to_string())
            .field("scale", &self.scale.to_string())
            .finish()
    }
}

/// Builder for [`VOSpec`]; everything defaults to the identity operator.
pub struct VOSpecBuilder {
    name: String,
    creation: Coefficients,
    annihilation: Coefficients,
    charge: (i32, i32),
    zero_mode_power: i32,
    coupling: ZCoupling,
    prefactor: Scalar,
    scale: Scalar,
}

impl VOSpecBuilder {
    pub fn new(name: &str) -> Self {
        VOSpecBuilder {
            name: name.to_string(),
            creation: Coefficients::zero(),
            annihilation: Coefficients::zero(),
            charge: (0, 0),
            zero_mode_power: 0,
            coupling: ZCoupling::None,
            prefactor: Scalar::one(),
            scale: Scalar::one(),
        }
    }

    /// `C(n)`, the coefficient of `a_{-n} z^n / n` in the exponent.
    pub fn creation(mut self, f: impl Fn(u32) -> Scalar + Send + Sync + 'static) -> Self {
        self.creation = Coefficients::new(Arc::new(f));
        self
    }

    /// `D(n)`, the coefficient of `a_n z^{-n} / n` in the exponent.
    pub fn annihilation(mut self, f: impl Fn(u32) -> Scalar + Send + Sync + 'static) -> Self {
        self.annihilation = Coefficients::new(Arc::new(f));
        self
    }

    /// Sector shift: `e^{βQ}` is `(2, 0)`, `e^{-Q}` is `(0, 2)`.
    pub fn charge(mut self, dr: i32, ds: i32) -> Self {
        self.charge = (dr, ds);
        self
    }

    /// Multiplier `(q^{βa_0})^k` evaluated on the input sector.
    pub fn zero_mode_power(mut self, k: i32) -> Self {
        self.zero_mode_power = k;
        self
    }

    pub fn coupling(mut self, c: ZCoupling) -> Self {
        self.coupling = c;
        self
    }

    pub fn prefactor(mut self, c: Scalar) -> Self {
        self.prefactor = c;
        self
    }

    /// Evaluate the operator at `σ z` instead of `z`.
    pub fn scale(mut self, sigma: Scalar) -> Self {
        self.scale = sigma;
        self
    }

    pub fn build(self) -> Arc<VOSpec> {
        Arc::new(VOSpec {
            name: self.name,
            creation: self.creation,
            annihilation: self.annihilation,
            charge: self.charge,
            zero_mode_power: self.zero_mode_power,
            coupling: self.coupling,
            prefactor: self.prefactor,
            scale: self.scale,
            layers: Mutex::new(Vec::new()),
            modes: Mutex::new(HashMap::new()),
        })
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Sub-multisets of `mu`: `(removed, remaining, multiplicity weight)`.
fn sub_multisets(mu: &Partition) -> Vec<(Vec<(u32, u32)>, Partition, i64)> {
    let mult = mu.multiplicities();
    let mut out = Vec::new();
    let mut choice = vec![0u32; mult.len()];
    loop {
        let mut removed = Vec::new();
        let mut rest = Vec::new();
        let mut w = 1i64;
        for (i, &(part, m)) in mult.iter().enumerate() {
            if choice[i] > 0 {
                removed.push((part, choice[i]));
            }
            w *= binomial(m, choice[i]);
            rest.extend(std::iter::repeat_n(part, (m - choice[i]) as usize));
        }
        out.push((removed, Partition::from_parts_unsorted(rest), w));
        let mut i = 0;
        loop {
            if i == mult.len() {
                return out;
            }
            if choice[i] < mult[i].1 {
                choice[i] += 1;
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

impl VOSpec {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn creation_coeff(&self, n: u32) -> Scalar {
        self.creation.get(n)
    }

    pub fn annihilation_coeff(&self, n: u32) -> Scalar {
        self.annihilation.get(n)
    }

    pub fn charge(&self) -> (i32, i32) {
        self.charge
    }

    pub fn zero_mode_power(&self) -> i32 {
        self.zero_mode_power
    }

    pub fn coupling(&self) -> ZCoupling {
        self.coupling
    }

    pub fn prefactor(&self) -> &Scalar {
        &self.prefactor
    }

    pub fn scale(&self) -> &Scalar {
        &self.scale
    }

    pub fn target(&self, sector: Sector) -> Sector {
        sector.shifted(self.charge.0, self.charge.1)
    }

    /// Copy with the same data, fresh caches, and the given coefficients
    /// replaced. Used for mutation tests of the verification harness.
    pub fn perturbed(
        &self,
        creation: &[(u32, Scalar)],
        annihilation: &[(u32, Scalar)],
    ) -> Arc<VOSpec> {
        let mut c = self.creation.clone();
        c.cache = Arc::new(Mutex::new(Vec::new()));
        c.overrides.extend(creation.iter().cloned());
        let mut d = self.annihilation.clone();
        d.cache = Arc::new(Mutex::new(Vec::new()));
        d.overrides.extend(annihilation.iter().cloned());
        Arc::new(VOSpec {
            name: format!("{}*", self.name),
            creation: c,
            annihilation: d,
            charge: self.charge,
            zero_mode_power: self.zero_mode_power,
            coupling: self.coupling,
            prefactor: self.prefactor.clone(),
            scale: self.scale.clone(),
            layers: Mutex::new(Vec::new()),
            modes: Mutex::new(HashMap::new()),
        })
    }

    /// Degree-`j` part of the creation exponential, dense over partitions
    /// of `j`.
    fn creation_layer(&self, j: u32) -> Arc<Vec<Scalar>> {
        if let Some(l) = self.layers.lock().expect("layer cache").get(j as usize) {
            return l.clone();
        }
        let mut built = Vec::new();
        let have = self.layers.lock().expect("layer cache").len() as u32;
        for d in have..=j {
            let layer: Vec<Scalar> = index(d)
                .list()
                .iter()
                .map(|lam| {
                    let mut c = Scalar::one();
                    for (n, m) in lam.multiplicities() {
                        let base = self
                            .creation
                            .get(n)
                            .mul(&Scalar::ratio(1, n as i64).expect("n >= 1"));
                        let fact: i64 = (1..=m as i64).product();
                        c = c
                            .mul(&base.pow(m))
                            .mul(&Scalar::ratio(1, fact).expect("nonzero factorial"));
                    }
                    c
                })
                .collect();
            built.push(Arc::new(layer));
        }
        let mut cache = self.layers.lock().expect("layer cache");
        for (d, l) in (have..=j).zip(built) {
            if cache.len() == d as usize {
                cache.push(l);
            }
        }
        cache[j as usize].clone()
    }

    /// `D(n) κ(n) / n`: the shift of `a_{-n}` under the annihilation part.
    fn contraction(&self, n: u32) -> Scalar {
        let d = self.annihilation.get(n);
        if d.is_zero() {
            return d;
        }
        let q = Scalar::q().pow(n);
        let t = Scalar::t().pow(n);
        d.mul(&Scalar::one().sub(&q))
            .div(&Scalar::one().sub(&t))
            .expect("1 - t^n is nonzero")
    }

    /// Matrix of mode `k` from level `level` of `sector` to level
    /// `level - k` of the target sector (no rows when that is negative).
    pub fn mode_matrix(&self, sector: Sector, k: i32, level: u32) -> Arc<DMatrix> {
        let key = (sector, k, level);
        if let Some(m) = self.modes.lock().expect("mode cache").get(&key) {
            return m.clone();
        }
        let m = Arc::new(self.compute_mode_matrix(sector, k, level));
        self.modes
            .lock()
            .expect("mode cache")
            .entry(key)
            .or_insert(m)
            .clone()
    }

    fn compute_mode_matrix(&self, sector: Sector, k: i32, level: u32) -> DMatrix {
        let out_level = level as i64 - k as i64;
        let cols = level_dim(level as i64);
        let rows = level_dim(out_level);
        let mut out = DMatrix::zeros(rows, cols);
        if rows == 0 {
            return out;
        }
        let out_ix = index(out_level as u32);
        let global = self
            .prefactor
            .mul(&sector.q_alpha_pow(self.zero_mode_power))
            .mul(&self.scale.powi(-k).expect("scale is nonzero"));
        for (col, mu) in index(level).list().iter().enumerate() {
            let mut column = vec![Scalar::zero(); rows];
            for (removed, rest, weight) in sub_multisets(mu) {
                let i: u32 = removed.iter().map(|&(p, m)| p * m).sum();
                let j = i as i64 - k as i64;
                if j < 0 {
                    continue;
                }
                let mut c = Scalar::from_int(weight);
                for &(p, m) in &removed {
                    c = c.mul(&self.contraction(p).pow(m));
                    if c.is_zero() {
                        break;
                    }
                }
                if c.is_zero() {
                    continue;
                }
                let layer = self.creation_layer(j as u32);
                for (lam, e) in index(j as u32).list().iter().zip(layer.iter()) {
                    if e.is_zero() {
                        continue;
                    }
                    let target = rest.union(lam);
                    let r = out_ix.position(&target).expect("output state is indexed");
                    column[r] = column[r].add(&c.mul(e));
                }
            }
            for (r, v) in column.into_iter().enumerate() {
                if !v.is_zero() {
                    out.set(r, col, v.mul(&global));
                }
            }
        }
        out
    }

    /// Applies mode `k`; the result must stay within truncation level `max_level`.
    pub fn apply_mode(&self, k: i32, v: &FockVector, max_level: u32) -> Result<FockVector> {
        apply_matrix(&self.mode_matrix(v.sector(), k, v.level()), self.target(v.sector()), k, v, max_level)
    }
}

fn apply_matrix(
    m: &DMatrix,
    target: Sector,
    k: i32,
    v: &FockVector,
    max_level: u32,
) -> Result<FockVector> {
    let out_level = v.level() as i64 - k as i64;
    if out_level > max_level as i64 {
        return Err(Error::Truncation {
            level: out_level,
            max: max_level as i64,
        });
    }
    if out_level < 0 {
        return Ok(FockVector::zero(target, 0));
    }
    let w = m.mul_vec(&v.to_dense());
    Ok(FockVector::from_dense(target, out_level as u32, &w))
}

/// Weighted sum of vertex operators with a common charge, such as
/// `T = T_+ + T_-`.
#[derive(Debug, Clone)]
pub struct FockOperator {
    name: String,
    terms: Vec<(Scalar, Arc<VOSpec>)>,
    modes: Arc<Mutex<HashMap<(Sector, i32, u32), Arc<DMatrix>>>>,
}

impl FockOperator {
    pub fn new(name: &str, terms: Vec<(Scalar, Arc<VOSpec>)>) -> Self {
        assert!(!terms.is_empty(), "operator needs at least one term");
        let charge = terms[0].1.charge();
        assert!(
            terms.iter().all(|(_, s)| s.charge() == charge),
            "all terms must shift the sector equally"
        );
        FockOperator {
            name: name.to_string(),
            terms,
            modes: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn single(spec: Arc<VOSpec>) -> Self {
        let name = spec.name().to_string();
        FockOperator::new(&name, vec![(Scalar::one(), spec)])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn terms(&self) -> &[(Scalar, Arc<VOSpec>)] {
        &self.terms
    }

    pub fn target(&self, sector: Sector) -> Sector {
        self.terms[0].1.target(sector)
    }

    pub fn mode_matrix(&self, sector: Sector, k: i32, level: u32) -> Arc<DMatrix> {
        let key = (sector, k, level);
        if let Some(m) = self.modes.lock().expect("mode cache").get(&key) {
            return m.clone();
        }
        let mut acc: Option<DMatrix> = None;
        for (w, s) in &self.terms {
            let m = s.mode_matrix(sector, k, level);
            let m = if w.is_one() { (*m).clone() } else { m.scale(w) };
            acc = Some(match acc {
                None => m,
                Some(a) => a.add(&m),
            });
        }
        let m = Arc::new(acc.expect("nonempty"));
        self.modes
            .lock()
            .expect("mode cache")
            .entry(key)
            .or_insert(m)
            .clone()
    }

    /// Matrix of mode `k` from a possibly negative level (empty if so).
    pub fn mode_matrix_at(&self, sector: Sector, k: i32, level: i64) -> Arc<DMatrix> {
        if level < 0 {
            return Arc::new(DMatrix::zeros(level_dim(level - k as i64), 0));
        }
        self.mode_matrix(sector, k, level as u32)
    }

    pub fn apply_mode(&self, k: i32, v: &FockVector, max_level: u32) -> Result<FockVector> {
        let m = self.mode_matrix(v.sector(), k, v.level());
        apply_matrix(&m, self.target(v.sector()), k, v, max_level)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_spec_is_identity_on_mode_zero() {
        let id = VOSpecBuilder::new("id").build();
        let s = Sector::new(1, -2);
        for level in 0..=4 {
            assert_eq!(*id.mode_matrix(s, 0, level), DMatrix::identity(level_dim(level as i64)));
            if level >= 1 {
                assert!(id.mode_matrix(s, 1, level).is_zero());
            }
        }
    }

    #[test]
    fn contraction_reproduces_kappa() {
        // a_n a_{-n}|0> = κ(n)|0>: annihilation-only spec with D(n) = δ_{n,k}
        for k in 1..=6u32 {
            let spec = VOSpecBuilder::new("a")
                .annihilation(move |n| if n == k { Scalar::one() } else { Scalar::zero() })
                .build();
            let v = FockVector::basis(Sector::new(0, 0), &Partition::new(vec![k]).unwrap());
            // the z^{-k} coefficient of exp(a_k z^{-k}/k) is a_k / k
            let out = spec.apply_mode(k as i32, &v, 6).unwrap();
            let expect = crate::fock::kappa(k).mul(&Scalar::ratio(1, k as i64).unwrap());
            assert_eq!(out.coeff(&Partition::empty()), expect);
        }
    }

    #[test]
    fn truncation_errors() {
        let spec = VOSpecBuilder::new("c").creation(|_| Scalar::one()).build();
        let v = FockVector::vacuum(Sector::new(0, 0));
        assert!(matches!(spec.apply_mode(-3, &v, 2), Err(Error::Truncation { .. })));
        assert!(spec.apply_mode(2, &v, 2).unwrap().is_zero());
    }

    #[test]
    fn sub_multisets_enumerate_with_weights() {
        let mu: Partition = "2,1,1".parse().unwrap();
        let subs = sub_multisets(&mu);
        assert_eq!(subs.len(), 6);
        let total: i64 = subs.iter().map(|s| s.2).sum();
        assert_eq!(total, 8);
    }
}
