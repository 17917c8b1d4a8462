//! Operator identities of the free-field realization, verified as exact
//! matrix equalities on truncated Fock sectors.
//!
//! Each identity is checked level by level: both sides are assembled as
//! matrices from mode matrices, and every basis state (column) becomes one
//! report cell whose residual must vanish identically.

use std::sync::Arc;
use std::time::Instant;

use qvir_arith::Scalar;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fock::operators::{b_combination, b_minus, b_plus};
use crate::fock::{
    auxiliary, level_dim, macdonald_operator_matrix, psi_spec, screening_rhs, screening_specs,
    t_operator, t_specs, DifferenceRhs, FockOperator, Sector, VOSpec, VOSpecBuilder,
};
use crate::linalg::DMatrix;
use crate::partition::{index, Partition};
use crate::verma::{central_term, f_coeff};

/// One checked basis state of one identity instance.
#[derive(Clone, Debug)]
pub struct Cell {
    pub modes: Vec<i32>,
    pub level: u32,
    pub state: Partition,
    /// First nonzero coefficient of `lhs - rhs`, zero when the cell passes.
    pub residual: Scalar,
}

impl Cell {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub id: String,
    pub sector: Sector,
    pub max_level: u32,
    pub cells: Vec<Cell>,
    pub elapsed_ms: u128,
}

impl IdentityReport {
    fn new(id: String, sector: Sector, max_level: u32) -> Self {
        IdentityReport {
            id,
            sector,
            max_level,
            cells: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.cells.iter().all(Cell::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| !c.passed())
    }

    /// Appends one cell per column of `lhs - rhs`; input states live at
    /// `level`.
    fn compare(&mut self, modes: Vec<i32>, level: u32, lhs: &DMatrix, rhs: &DMatrix) {
        let diff = lhs.sub(rhs);
        for (j, state) in index(level).list().iter().enumerate() {
            let residual = diff
                .column(j)
                .into_iter()
                .find(|c| !c.is_zero())
                .unwrap_or_else(Scalar::zero);
            self.cells.push(Cell {
                modes: modes.clone(),
                level,
                state: state.clone(),
                residual,
            });
        }
    }

    fn merge(&mut self, other: IdentityReport) {
        self.cells.extend(other.cells);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "sector": [self.sector.r, self.sector.s],
            "L": self.max_level,
            "status": if self.passed() { "pass" } else { "fail" },
            "cells": self.cells.iter().map(|c| json!({
                "modes": c.modes,
                "state": c.state.parts(),
                "status": if c.passed() { "pass" } else { "fail" },
                "residual": c.residual.to_string(),
            })).collect::<Vec<_>>(),
            "elapsed_ms": self.elapsed_ms as u64,
        })
    }
}

/// Operators under test. The standard set comes from the closed forms;
/// negative controls swap in perturbed copies.
#[derive(Clone, Debug)]
pub struct Operators {
    pub t: FockOperator,
    pub psi: Arc<VOSpec>,
    pub s_plus: Arc<VOSpec>,
    pub s_minus: Arc<VOSpec>,
    pub screening_plus: DifferenceRhs,
    pub screening_minus: DifferenceRhs,
    pub b_plus: Arc<VOSpec>,
    pub b_minus: Arc<VOSpec>,
    pub o_plus: DifferenceRhs,
    pub o_minus: DifferenceRhs,
}

impl Operators {
    pub fn standard() -> Self {
        let (s_plus, s_minus) = screening_specs();
        let (screening_plus, screening_minus) = screening_rhs();
        let aux = auxiliary();
        Operators {
            t: t_operator(),
            psi: psi_spec(),
            s_plus,
            s_minus,
            screening_plus,
            screening_minus,
            b_plus: aux.b_plus,
            b_minus: aux.b_minus,
            o_plus: aux.o_plus,
            o_minus: aux.o_minus,
        }
    }

    /// Rebuilds `T` from explicit terms.
    pub fn with_t_terms(mut self, plus: Arc<VOSpec>, minus: Arc<VOSpec>) -> Self {
        self.t = FockOperator::new("T", vec![(Scalar::one(), plus), (Scalar::one(), minus)]);
        self
    }

    /// Replaces `B±` by the ansatz with `q^ε = e`.
    pub fn with_b_parameter(mut self, e: &Scalar) -> Self {
        self.b_plus = b_plus(e);
        self.b_minus = b_minus(e);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            _ => Err(Error::Invalid(format!("sign must be + or -, got '{s}'"))),
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Product `A_{k1} ... A_{kr}` applied right to left, starting from
/// `sector` at `level`; returns the matrix and the final sector.
fn chain(steps: &[(&FockOperator, i32)], sector: Sector, level: i64) -> (DMatrix, Sector) {
    let mut m = DMatrix::identity(level_dim(level));
    let mut sec = sector;
    let mut lvl = level;
    for (op, k) in steps.iter().rev() {
        let step = op.mode_matrix_at(sec, *k, lvl);
        m = step.mul(&m);
        sec = op.target(sec);
        lvl -= *k as i64;
    }
    (m, sec)
}

fn single(spec: &Arc<VOSpec>) -> FockOperator {
    FockOperator::single(spec.clone())
}

fn timed(mut report: IdentityReport, start: Instant) -> IdentityReport {
    report.elapsed_ms = start.elapsed().as_millis();
    report
}

/// `T_0|r,s> = λ_{r,s}|r,s>` and `T_n|r,s> = 0` for `1 <= n <= max_mode`.
pub fn verify_highest_weight(sector: Sector, max_mode: u32) -> IdentityReport {
    let start = Instant::now();
    let t = t_operator();
    let mut report = IdentityReport::new("highest-weight".into(), sector, 0);
    let weight = DMatrix::scalar_identity(1, &sector.weight());
    report.compare(vec![0], 0, &t.mode_matrix(sector, 0, 0), &weight);
    for n in 1..=max_mode as i32 {
        let zero = DMatrix::zeros(0, 1);
        report.compare(vec![n], 0, &t.mode_matrix_at(sector, n, 0), &zero);
    }
    timed(report, start)
}

/// Levels `ℓ <= L` on which `[T_n, T_m]` can be compared without leaving
/// the truncation.
fn defrel_levels(n: i32, m: i32, max_level: u32) -> Vec<u32> {
    let l = max_level as i64;
    (0..=max_level)
        .filter(|&lv| {
            let lv = lv as i64;
            let out = lv - (n + m) as i64;
            lv - n as i64 <= l && lv - m as i64 <= l && (0..=l).contains(&out)
        })
        .collect()
}

/// Defining relation of the algebra for the bosonized `T(z)`:
/// `[T_n, T_m] = -Σ_l f_l (T_{n-l} T_{m+l} - T_{m-l} T_{n+l}) - γ(p^n - p^{-n}) δ_{n+m,0}`.
pub fn verify_defining_relation_with(
    ops: &Operators,
    n: i32,
    m: i32,
    sector: Sector,
    max_level: u32,
) -> IdentityReport {
    let start = Instant::now();
    let t = &ops.t;
    let mut report = IdentityReport::new(format!("defrel[{n},{m}]"), sector, max_level);
    let parts: Vec<IdentityReport> = defrel_levels(n, m, max_level)
        .into_par_iter()
        .map(|lv| {
            let level = lv as i64;
            let lhs = chain(&[(t, n), (t, m)], sector, level)
                .0
                .sub(&chain(&[(t, m), (t, n)], sector, level).0);
            let out = level_dim(level - (n + m) as i64);
            let mut rhs = DMatrix::zeros(out, level_dim(level));
            let top = level - n.min(m) as i64;
            for l in 1..=top.max(0) as i32 {
                let f = f_coeff(l as u32);
                let a = chain(&[(t, n - l), (t, m + l)], sector, level).0;
                let b = chain(&[(t, m - l), (t, n + l)], sector, level).0;
                rhs = rhs.sub(&a.sub(&b).scale(&f));
            }
            if n + m == 0 {
                rhs = rhs.sub(&DMatrix::scalar_identity(out, &central_term(n)));
            }
            let mut part = IdentityReport::new(String::new(), sector, max_level);
            part.compare(vec![n, m], lv, &lhs, &rhs);
            part
        })
        .collect();
    for p in parts {
        report.merge(p);
    }
    timed(report, start)
}

pub fn verify_defining_relation(n: i32, m: i32, sector: Sector, max_level: u32) -> IdentityReport {
    verify_defining_relation_with(&Operators::standard(), n, m, sector, max_level)
}

/// `D̂ = t^N/(t-1) [Σ_{n>=0} ψ_{-n} T_n - p^{-1} q^{-2βa_0}] - 1/(t-1)` on
/// every level `<= L`. The sum stops at the level of the operand.
pub fn verify_split_with(ops: &Operators, n_vars: u32, sector: Sector, max_level: u32) -> IdentityReport {
    let start = Instant::now();
    let psi = single(&ops.psi);
    let t = Scalar::t();
    let tm1 = t.sub(&Scalar::one());
    let outer = t.pow(n_vars).div(&tm1).expect("t - 1 is nonzero");
    let shift = Scalar::one().div(&tm1).expect("t - 1 is nonzero");
    let zero_mode = Scalar::p()
        .inv()
        .expect("p is nonzero")
        .mul(&sector.q_alpha_pow(-2));
    let mut report = IdentityReport::new(format!("split[N={n_vars}]"), sector, max_level);
    let parts: Vec<IdentityReport> = (0..=max_level)
        .into_par_iter()
        .map(|lv| {
            let dim = level_dim(lv as i64);
            let lhs = macdonald_operator_matrix(n_vars, lv);
            let mut inner = DMatrix::scalar_identity(dim, &zero_mode.neg());
            for n in 0..=lv as i32 {
                inner = inner.add(&chain(&[(&psi, -n), (&ops.t, n)], sector, lv as i64).0);
            }
            let rhs = inner
                .scale(&outer)
                .sub(&DMatrix::scalar_identity(dim, &shift));
            let mut part = IdentityReport::new(String::new(), sector, max_level);
            part.compare(vec![n_vars as i32], lv, &lhs, &rhs);
            part
        })
        .collect();
    for p in parts {
        report.merge(p);
    }
    timed(report, start)
}

pub fn verify_split(n_vars: u32, sector: Sector, max_level: u32) -> IdentityReport {
    verify_split_with(&Operators::standard(), n_vars, sector, max_level)
}

/// `[X_n, S_j] = rhs.coefficient(n, j) · V_{n+j}` for every `j` whose
/// terms stay within levels `0..=L`.
fn verify_total_difference(
    id: String,
    x: &FockOperator,
    n: i32,
    screening: &FockOperator,
    rhs: &DifferenceRhs,
    sector: Sector,
    max_level: u32,
) -> IdentityReport {
    let start = Instant::now();
    let v = single(&rhs.spec);
    let l = max_level as i64;
    let mut jobs = Vec::new();
    for lv in 0..=l {
        if lv - n as i64 > l {
            continue;
        }
        for j in (lv - l) as i32..=(lv - n as i64) as i32 {
            jobs.push((lv, j));
        }
    }
    let parts: Vec<IdentityReport> = jobs
        .into_par_iter()
        .map(|(lv, j)| {
            let lhs = chain(&[(x, n), (screening, j)], sector, lv)
                .0
                .sub(&chain(&[(screening, j), (x, n)], sector, lv).0);
            let c = rhs.coefficient(n, j, sector);
            let right = v.mode_matrix_at(sector, n + j, lv).scale(&c);
            let mut part = IdentityReport::new(String::new(), sector, max_level);
            part.compare(vec![n, j], lv as u32, &lhs, &right);
            part
        })
        .collect();
    let mut report = IdentityReport::new(id, sector, max_level);
    for p in parts {
        report.merge(p);
    }
    timed(report, start)
}

/// `[T_n, S_±(w)]` against the `q`- (resp. `t`-) difference of
/// `c (σw)^{n+1} A_±(w)`.
pub fn verify_screening_commutator_with(
    ops: &Operators,
    sign: Sign,
    n: i32,
    sector: Sector,
    max_level: u32,
) -> IdentityReport {
    let (s, rhs) = match sign {
        Sign::Plus => (&ops.s_plus, &ops.screening_plus),
        Sign::Minus => (&ops.s_minus, &ops.screening_minus),
    };
    verify_total_difference(
        format!("screening[{sign},{n}]"),
        &ops.t,
        n,
        &single(s),
        rhs,
        sector,
        max_level,
    )
}

pub fn verify_screening_commutator(sign: Sign, n: i32, sector: Sector, max_level: u32) -> IdentityReport {
    verify_screening_commutator_with(&Operators::standard(), sign, n, sector, max_level)
}

/// Mode of `S_±` that pairs with a vanishing difference coefficient on
/// `sector`, if any: `ξ^{1-j} ξ^E = 1`. For `S_+` on `(-1, s)` this is
/// `j = -s`, for `S_-` on `(r, -1)` it is `j = -r`.
pub fn residue_mode(sign: Sign, sector: Sector) -> Option<i32> {
    match sign {
        Sign::Plus if sector.r == -1 => Some(-sector.s),
        Sign::Minus if sector.s == -1 => Some(-sector.r),
        _ => None,
    }
}

/// Which `(B, S)` pair of the ansatz a delta-function relation concerns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaPair {
    BPlusSPlus,
    BMinusSPlus,
    BPlusSMinus,
    BMinusSMinus,
}

impl DeltaPair {
    pub const ALL: [DeltaPair; 4] = [
        DeltaPair::BPlusSPlus,
        DeltaPair::BMinusSPlus,
        DeltaPair::BPlusSMinus,
        DeltaPair::BMinusSMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DeltaPair::BPlusSPlus => "b+s+",
            DeltaPair::BMinusSPlus => "b-s+",
            DeltaPair::BPlusSMinus => "b+s-",
            DeltaPair::BMinusSMinus => "b-s-",
        }
    }
}

impl std::str::FromStr for DeltaPair {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        DeltaPair::ALL
            .into_iter()
            .find(|p| p.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Invalid(format!("pair must be one of b+s+, b-s+, b+s-, b-s-; got '{s}'")))
    }
}

/// `[B(z), S(w)] = :B(z)S(w): · s · δ(ρw/z)`, so that
/// `[B_k, S_j] = s ρ^k G_{j+k}` with `G(w) = :B(ρw)S(w):`.
fn delta_data(ops: &Operators, pair: DeltaPair) -> (Arc<VOSpec>, Arc<VOSpec>, Scalar, Scalar) {
    let (q, t) = (Scalar::q(), Scalar::t());
    let one = Scalar::one();
    // q^ε of the B operators in use, recovered from B_+'s creation
    // coefficient C(1) = (1 - t^{-1})/(1 + q^ε).
    let e = one
        .sub(&t.inv().expect("t is nonzero"))
        .div(&ops.b_plus.creation_coeff(1))
        .expect("nonzero")
        .sub(&one);
    let e_inv = e.inv().expect("q^ε is nonzero");
    match pair {
        DeltaPair::BPlusSPlus => (ops.b_plus.clone(), ops.s_plus.clone(), t.clone(), t.sub(&one)),
        DeltaPair::BMinusSPlus => (
            ops.b_minus.clone(),
            ops.s_plus.clone(),
            e_inv,
            t.inv().expect("t is nonzero").sub(&one),
        ),
        DeltaPair::BPlusSMinus => (
            ops.b_plus.clone(),
            ops.s_minus.clone(),
            one.clone(),
            q.inv().expect("q is nonzero").sub(&one),
        ),
        DeltaPair::BMinusSMinus => (ops.b_minus.clone(), ops.s_minus.clone(), q.mul(&e_inv), q.sub(&one)),
    }
}

/// Normal-ordered product `:B(ρw) S(w):` as a single vertex operator.
fn normal_product(b: &Arc<VOSpec>, s: &Arc<VOSpec>, rho: &Scalar) -> Arc<VOSpec> {
    let (b1, b2, s1, s2) = (b.clone(), b.clone(), s.clone(), s.clone());
    let (r1, r2) = (rho.clone(), rho.clone());
    VOSpecBuilder::new(&format!(":{}{}:", b.name(), s.name()))
        .creation(move |n| b1.creation_coeff(n).mul(&r1.pow(n)).add(&s1.creation_coeff(n)))
        .annihilation(move |n| {
            b2.annihilation_coeff(n)
                .div(&r2.pow(n))
                .expect("ρ is nonzero")
                .add(&s2.annihilation_coeff(n))
        })
        .zero_mode_power(b.zero_mode_power())
        .charge(s.charge().0, s.charge().1)
        .coupling(s.coupling())
        .build()
}

pub fn verify_appendix_deltas_with(
    ops: &Operators,
    pair: DeltaPair,
    modes: std::ops::RangeInclusive<i32>,
    sector: Sector,
    max_level: u32,
) -> IdentityReport {
    let start = Instant::now();
    let (b, s, rho, scalar) = delta_data(ops, pair);
    let g = single(&normal_product(&b, &s, &rho));
    let (bo, so) = (single(&b), single(&s));
    let l = max_level as i64;
    let mut jobs = Vec::new();
    for k in modes {
        for lv in 0..=l {
            if lv - k as i64 > l {
                continue;
            }
            for j in (lv - l) as i32..=(lv - k as i64) as i32 {
                jobs.push((k, lv, j));
            }
        }
    }
    let parts: Vec<IdentityReport> = jobs
        .into_par_iter()
        .map(|(k, lv, j)| {
            let lhs = chain(&[(&bo, k), (&so, j)], sector, lv)
                .0
                .sub(&chain(&[(&so, j), (&bo, k)], sector, lv).0);
            let c = scalar.mul(&rho.powi(k).expect("ρ is nonzero"));
            let rhs = g.mode_matrix_at(sector, j + k, lv).scale(&c);
            let mut part = IdentityReport::new(String::new(), sector, max_level);
            part.compare(vec![k, j], lv as u32, &lhs, &rhs);
            part
        })
        .collect();
    let mut report = IdentityReport::new(format!("appendix[{}]", pair.name()), sector, max_level);
    for p in parts {
        report.merge(p);
    }
    timed(report, start)
}

pub fn verify_appendix_deltas(
    pair: DeltaPair,
    modes: std::ops::RangeInclusive<i32>,
    sector: Sector,
    max_level: u32,
) -> IdentityReport {
    verify_appendix_deltas_with(&Operators::standard(), pair, modes, sector, max_level)
}

/// `[B_{+,n} + p^{-1} B_{-,n}, S_±(w)]` against the difference of `O_±(w)`,
/// followed by consistency cells tying it to the `T`-relation through
/// `T_n = p^{(n+1)/2} (B_{+,n} + p^{-1} B_{-,n})`.
pub fn verify_o_total_difference_with(
    ops: &Operators,
    sign: Sign,
    n: i32,
    sector: Sector,
    max_level: u32,
) -> IdentityReport {
    let start = Instant::now();
    let x = b_combination(ops.b_plus.clone(), ops.b_minus.clone());
    let (s, o, a) = match sign {
        Sign::Plus => (&ops.s_plus, &ops.o_plus, &ops.screening_plus),
        Sign::Minus => (&ops.s_minus, &ops.o_minus, &ops.screening_minus),
    };
    let mut report = verify_total_difference(
        format!("o-total-difference[{sign},{n}]"),
        &x,
        n,
        &single(s),
        o,
        sector,
        max_level,
    );
    let scale = Scalar::xy_monomial(n + 1, -(n + 1));
    for lv in 0..=max_level {
        if lv as i64 - (n as i64) < 0 {
            continue;
        }
        // T_n = p^{(n+1)/2} X_n
        let t_side = ops.t.mode_matrix(sector, n, lv);
        let x_side = x.mode_matrix(sector, n, lv).scale(&scale);
        report.compare(vec![n, i32::MIN], lv, &t_side, &x_side);
        // the two right sides agree after the same rescaling
        for j in (lv as i64 - max_level as i64) as i32..=lv as i32 - n {
            let v_o = single(&o.spec).mode_matrix_at(sector, n + j, lv as i64);
            let v_a = single(&a.spec).mode_matrix_at(sector, n + j, lv as i64);
            let lhs = v_o.scale(&o.coefficient(n, j, sector).mul(&scale));
            let rhs = v_a.scale(&a.coefficient(n, j, sector));
            report.compare(vec![n, j, i32::MIN], lv, &lhs, &rhs);
        }
    }
    timed(report, start)
}

pub fn verify_o_total_difference(sign: Sign, n: i32, sector: Sector, max_level: u32) -> IdentityReport {
    verify_o_total_difference_with(&Operators::standard(), sign, n, sector, max_level)
}

/// Outcome of one mutation of the operator data.
#[derive(Clone, Debug)]
pub struct ControlOutcome {
    pub description: String,
    /// Whether some check failed, as it must.
    pub detected: bool,
}

fn bump(spec: &Arc<VOSpec>, creation: bool) -> Arc<VOSpec> {
    let (c, d) = if creation {
        (vec![(1, spec.creation_coeff(1).add(&Scalar::one()))], vec![])
    } else {
        (vec![], vec![(1, spec.annihilation_coeff(1).add(&Scalar::one()))])
    };
    spec.perturbed(&c, &d)
}

/// Perturbs single coefficients of every operator by `+1` and records
/// whether the harness notices. Also runs the ansatz with `q^ε = q`
/// instead of `p`.
pub fn negative_controls() -> Vec<ControlOutcome> {
    let base = Operators::standard();
    let sector = Sector::new(0, 0);
    let screen_sector = Sector::new(-1, 1);
    let (tp, tm) = t_specs();
    let mut out = Vec::new();

    let screening_fails = |ops: &Operators| {
        [Sign::Plus, Sign::Minus].into_iter().any(|sign| {
            (-1..=1).any(|n| !verify_screening_commutator_with(ops, sign, n, screen_sector, 2).passed())
        })
    };

    for creation in [true, false] {
        let part = if creation { "creation" } else { "annihilation" };
        for (name, plus) in [("T+", true), ("T-", false)] {
            let ops = if plus {
                base.clone().with_t_terms(bump(&tp, creation), tm.clone())
            } else {
                base.clone().with_t_terms(tp.clone(), bump(&tm, creation))
            };
            let detected = !verify_defining_relation_with(&ops, 1, -1, sector, 2).passed()
                || !verify_defining_relation_with(&ops, 2, -1, sector, 3).passed();
            out.push(ControlOutcome {
                description: format!("{name} {part} coefficient 1 + 1, defining relation"),
                detected,
            });
        }
        let mut ops = base.clone();
        ops.s_plus = bump(&base.s_plus, creation);
        out.push(ControlOutcome {
            description: format!("S+ {part} coefficient 1 + 1, screening"),
            detected: screening_fails(&ops),
        });
        let mut ops = base.clone();
        ops.s_minus = bump(&base.s_minus, creation);
        out.push(ControlOutcome {
            description: format!("S- {part} coefficient 1 + 1, screening"),
            detected: screening_fails(&ops),
        });
        for plus in [true, false] {
            let mut ops = base.clone();
            let target = if plus { &mut ops.screening_plus } else { &mut ops.screening_minus };
            target.spec = bump(&target.spec, creation);
            out.push(ControlOutcome {
                description: format!("A{} {part} coefficient 1 + 1, screening", if plus { "+" } else { "-" }),
                detected: screening_fails(&ops),
            });
        }
        for plus in [true, false] {
            let mut ops = base.clone();
            if plus {
                ops.b_plus = bump(&base.b_plus, creation);
            } else {
                ops.b_minus = bump(&base.b_minus, creation);
            }
            let detected = [Sign::Plus, Sign::Minus].into_iter().any(|sign| {
                (-1..=1).any(|n| !verify_o_total_difference_with(&ops, sign, n, screen_sector, 2).passed())
            });
            out.push(ControlOutcome {
                description: format!("B{} {part} coefficient 1 + 1, O total difference", if plus { "+" } else { "-" }),
                detected,
            });
        }
        for plus in [true, false] {
            let mut ops = base.clone();
            let target = if plus { &mut ops.o_plus } else { &mut ops.o_minus };
            target.spec = bump(&target.spec, creation);
            let detected = [Sign::Plus, Sign::Minus].into_iter().any(|sign| {
                (-1..=1).any(|n| !verify_o_total_difference_with(&ops, sign, n, screen_sector, 2).passed())
            });
            out.push(ControlOutcome {
                description: format!("O{} {part} coefficient 1 + 1, O total difference", if plus { "+" } else { "-" }),
                detected,
            });
        }
    }

    let mut ops = base.clone();
    ops.psi = bump(&base.psi, true);
    out.push(ControlOutcome {
        description: "psi creation coefficient 1 + 1, splitting".into(),
        detected: !verify_split_with(&ops, 2, sector, 2).passed(),
    });

    let ops = base.with_b_parameter(&Scalar::q());
    let detected = DeltaPair::ALL
        .into_iter()
        .any(|pair| !verify_appendix_deltas_with(&ops, pair, -1..=1, sector, 2).passed());
    out.push(ControlOutcome {
        description: "ansatz with q^ε = q instead of p, delta relations".into(),
        detected,
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verma::lambda_rs;

    #[test]
    fn defining_relation_small() {
        let s = Sector::new(0, 0);
        let r = verify_defining_relation(1, -1, s, 2);
        assert!(r.passed(), "{:?}", r.failures().next());
        assert!(verify_defining_relation(0, 0, s, 2).passed());
        assert!(verify_defining_relation(2, -1, s, 3).passed());
    }

    #[test]
    fn level_zero_commutator_is_kac_entry() {
        // <r,s| T_1 T_{-1} |r,s> equals the level-1 Gram entry at λ_{r,s}
        let s = Sector::new(0, 0);
        let t = t_operator();
        let (m, _) = chain(&[(&t, 1), (&t, -1)], s, 0);
        let eq15 = "(1 - q)*(1 - t)/(q + t)*(l^2 - (x/y + y/x)^2)"
            .parse::<Scalar>()
            .unwrap()
            .substitute(&[(qvir_arith::Var::L, lambda_rs(0, 0))])
            .unwrap();
        assert_eq!(m.get(0, 0), &eq15);
    }

    #[test]
    fn split_small() {
        assert!(verify_split(1, Sector::new(0, 0), 2).passed());
        assert!(verify_split(2, Sector::new(1, 1), 2).passed());
    }

    #[test]
    fn screening_small() {
        let r = verify_screening_commutator(Sign::Plus, 0, Sector::new(-1, 0), 2);
        assert!(r.passed(), "{:?}", r.failures().next());
        let r = verify_screening_commutator(Sign::Minus, 1, Sector::new(0, -1), 2);
        assert!(r.passed(), "{:?}", r.failures().next());
    }

    #[test]
    fn residue_mode_commutes() {
        let ops = Operators::standard();
        for s in 0..=2 {
            let sector = Sector::new(-1, s);
            let j = residue_mode(Sign::Plus, sector).unwrap();
            assert!(ops.screening_plus.coefficient(1, j, sector).is_zero());
        }
        for r in 0..=2 {
            let sector = Sector::new(r, -1);
            let j = residue_mode(Sign::Minus, sector).unwrap();
            assert!(ops.screening_minus.coefficient(-1, j, sector).is_zero());
        }
    }

    #[test]
    fn appendix_small() {
        for pair in DeltaPair::ALL {
            let r = verify_appendix_deltas(pair, -1..=1, Sector::new(0, 0), 2);
            assert!(r.passed(), "{pair:?}: {:?}", r.failures().next());
        }
    }

    #[test]
    fn o_total_difference_small() {
        for sign in [Sign::Plus, Sign::Minus] {
            let r = verify_o_total_difference(sign, 0, Sector::new(1, -1), 1);
            assert!(r.passed(), "{sign}: {:?}", r.failures().next());
        }
    }

    #[test]
    fn report_json_shape() {
        let r = verify_defining_relation(0, 0, Sector::new(0, 0), 1);
        let v = r.to_json();
        assert_eq!(v["sector"], json!([0, 0]));
        assert_eq!(v["cells"][0]["status"], json!("pass"));
        assert_eq!(v["cells"][0]["residual"], json!("0"));
    }
}
