//! The concrete vertex operators: the bosonized current `T(z)`, `ψ(z)`,
//! the Macdonald operator, the screening currents `S±` and the auxiliary
//! fields `A±`, `B±`, `O±` of the factorization ansatz.

use std::sync::{Arc, OnceLock};

use qvir_arith::Scalar;

use super::vertex::{FockOperator, VOSpec, VOSpecBuilder, ZCoupling};
use super::{level_dim, FockVector, Sector};
use crate::error::{Error, Result};
use crate::linalg::DMatrix;

/// `x^a y^b`, i.e. `q^{a/2} t^{b/2}`.
fn mono(a: i32, b: i32) -> Scalar {
    Scalar::xy_monomial(a, b)
}

fn q_pow(n: i32) -> Scalar {
    mono(2 * n, 0)
}

fn t_pow(n: i32) -> Scalar {
    mono(0, 2 * n)
}

/// `p^{n/2}`.
fn p_half(n: i32) -> Scalar {
    mono(n, -n)
}

fn one_minus(a: &Scalar) -> Scalar {
    Scalar::one().sub(a)
}

fn one_plus(a: &Scalar) -> Scalar {
    Scalar::one().add(a)
}

fn quot(a: &Scalar, b: &Scalar) -> Scalar {
    a.div(b).expect("denominator is a nonzero rational function")
}

/// The two terms `T_±` of `T(z) = T_+(z) + T_-(z)`.
pub fn t_specs() -> (Arc<VOSpec>, Arc<VOSpec>) {
    static SPECS: OnceLock<(Arc<VOSpec>, Arc<VOSpec>)> = OnceLock::new();
    SPECS
        .get_or_init(|| {
            let plus = VOSpecBuilder::new("T+")
                .prefactor(p_half(1))
                .creation(|n| {
                    let n = n as i32;
                    quot(&one_minus(&t_pow(n)), &one_plus(&p_half(2 * n)))
                        .mul(&t_pow(-n))
                        .mul(&p_half(-n))
                        .neg()
                })
                .annihilation(|n| {
                    let n = n as i32;
                    one_minus(&t_pow(n)).mul(&p_half(n)).neg()
                })
                .zero_mode_power(1)
                .build();
            let minus = VOSpecBuilder::new("T-")
                .prefactor(p_half(-1))
                .creation(|n| {
                    let n = n as i32;
                    quot(&one_minus(&t_pow(n)), &one_plus(&p_half(2 * n)))
                        .mul(&t_pow(-n))
                        .mul(&p_half(n))
                })
                .annihilation(|n| {
                    let n = n as i32;
                    one_minus(&t_pow(n)).mul(&p_half(-n))
                })
                .zero_mode_power(-1)
                .build();
            (plus, minus)
        })
        .clone()
}

/// `T(z)` as an operator on Fock sectors.
pub fn t_operator() -> FockOperator {
    static T: OnceLock<FockOperator> = OnceLock::new();
    T.get_or_init(|| {
        let (plus, minus) = t_specs();
        FockOperator::new("T", vec![(Scalar::one(), plus), (Scalar::one(), minus)])
    })
    .clone()
}

/// `ψ(z) = Σ_{n≥0} ψ_{-n} z^n`. Only modes `ψ_{-n}`, `n >= 0`, are nonzero:
/// the operator has no annihilation part, so positive modes vanish.
pub fn psi_spec() -> Arc<VOSpec> {
    static PSI: OnceLock<Arc<VOSpec>> = OnceLock::new();
    PSI.get_or_init(|| {
        VOSpecBuilder::new("psi")
            .prefactor(p_half(-1))
            .creation(|n| {
                let n = n as i32;
                quot(&one_minus(&t_pow(n)), &one_plus(&p_half(2 * n)))
                    .mul(&p_half(n))
                    .mul(&t_pow(-n))
                    .neg()
            })
            .zero_mode_power(-1)
            .build()
    })
    .clone()
}

fn macdonald_vertex() -> Arc<VOSpec> {
    static V: OnceLock<Arc<VOSpec>> = OnceLock::new();
    V.get_or_init(|| {
        VOSpecBuilder::new("macdonald")
            .creation(|n| one_minus(&t_pow(-(n as i32))))
            .annihilation(|n| one_minus(&t_pow(n as i32)).neg())
            .build()
    })
    .clone()
}

/// Matrix of the bosonized Macdonald operator in `N` variables on one level:
/// `t^N/(t-1) V_0 - 1/(t-1)`.
pub fn macdonald_operator_matrix(n_vars: u32, level: u32) -> DMatrix {
    let t = Scalar::t();
    let tm1 = t.sub(&Scalar::one());
    let v0 = macdonald_vertex().mode_matrix(Sector::new(0, 0), 0, level);
    let a = quot(&t.pow(n_vars), &tm1);
    let b = quot(&Scalar::one(), &tm1);
    v0.scale(&a)
        .sub(&DMatrix::scalar_identity(level_dim(level as i64), &b))
}

/// Applies the bosonized Macdonald operator; it preserves the level and
/// ignores the sector.
pub fn macdonald_operator(n_vars: u32, v: &FockVector, max_level: u32) -> Result<FockVector> {
    if v.level() > max_level {
        return Err(Error::Truncation {
            level: v.level() as i64,
            max: max_level as i64,
        });
    }
    let m = macdonald_operator_matrix(n_vars, v.level());
    Ok(FockVector::from_dense(v.sector(), v.level(), &m.mul_vec(&v.to_dense())))
}

/// The screening currents `(S_+, S_-)`.
pub fn screening_specs() -> (Arc<VOSpec>, Arc<VOSpec>) {
    static S: OnceLock<(Arc<VOSpec>, Arc<VOSpec>)> = OnceLock::new();
    S.get_or_init(|| {
        let plus = VOSpecBuilder::new("S+")
            .creation(|n| {
                let n = n as i32;
                quot(&one_minus(&t_pow(n)), &one_minus(&q_pow(n)))
            })
            .annihilation(|n| {
                let n = n as i32;
                one_plus(&p_half(2 * n))
                    .mul(&quot(&one_minus(&t_pow(n)), &one_minus(&q_pow(n))))
                    .neg()
            })
            .charge(2, 0)
            .coupling(ZCoupling::TwoBetaA0)
            .build();
        let minus = VOSpecBuilder::new("S-")
            .creation(|_| Scalar::from_int(-1))
            .annihilation(|n| {
                let n = n as i32;
                one_plus(&p_half(2 * n)).mul(&p_half(-2 * n))
            })
            .charge(0, 2)
            .coupling(ZCoupling::MinusTwoA0)
            .build();
        (plus, minus)
    })
    .clone()
}

/// Which variable a difference operator shifts by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Xi {
    Q,
    T,
}

impl Xi {
    pub fn value(self) -> Scalar {
        match self {
            Xi::Q => Scalar::q(),
            Xi::T => Scalar::t(),
        }
    }
}

/// Right side of `[X_n, S(w)] = (d_ξ/d_ξ w)(c (σw)^{n+1} V(w))`.
///
/// Taking the `w^{-j}` coefficient (relative to the sector exponent `E` of
/// `S`) gives `[X_n, S_j] = c σ^{n+1} (1 - ξ^{1-j} ξ^E)/(1 - ξ) V_{n+j}`.
#[derive(Clone, Debug)]
pub struct DifferenceRhs {
    pub c: Scalar,
    pub sigma: Scalar,
    pub xi: Xi,
    pub spec: Arc<VOSpec>,
}

impl DifferenceRhs {
    pub fn new(c: Scalar, sigma: Scalar, xi: Xi, spec: Arc<VOSpec>) -> Result<Self> {
        match (xi, spec.coupling()) {
            (Xi::Q, ZCoupling::TwoBetaA0) | (Xi::T, ZCoupling::MinusTwoA0) => {
                Ok(DifferenceRhs { c, sigma, xi, spec })
            }
            (xi, z) => Err(Error::Invalid(format!(
                "a {xi:?}-difference of an operator with coupling {z:?} is not a monomial"
            ))),
        }
    }

    /// `ξ^E` on the input sector: `q^{2α}` or `t^{-2α/β} = q^{-2α}`.
    pub fn xi_sector_power(&self, sector: Sector) -> Scalar {
        match self.xi {
            Xi::Q => sector.q_alpha_pow(2),
            Xi::T => sector.q_alpha_pow(-2),
        }
    }

    /// Scalar in front of `V_{n+j}` in `[X_n, S_j]` on `sector`.
    pub fn coefficient(&self, n: i32, j: i32, sector: Sector) -> Scalar {
        let xi = self.xi.value();
        let shift = xi.powi(1 - j).expect("ξ is nonzero").mul(&self.xi_sector_power(sector));
        self.c
            .mul(&self.sigma.powi(n + 1).expect("σ is nonzero"))
            .mul(&quot(&one_minus(&shift), &one_minus(&xi)))
    }
}

/// Right sides of the screening commutators `[T_n, S_±(w)]`.
pub fn screening_rhs() -> (DifferenceRhs, DifferenceRhs) {
    let aux = auxiliary();
    let plus = DifferenceRhs::new(
        one_minus(&Scalar::q()).mul(&one_minus(&t_pow(-1))).neg(),
        p_half(-1),
        Xi::Q,
        aux.a_plus.clone(),
    )
    .expect("valid pairing");
    let minus = DifferenceRhs::new(
        one_minus(&q_pow(-1)).mul(&one_minus(&Scalar::t())).neg(),
        p_half(1),
        Xi::T,
        aux.a_minus.clone(),
    )
    .expect("valid pairing");
    (plus, minus)
}

/// `B_+` of the factorization ansatz, with `q^ε = e` and `q^δ = t^{-1}`.
pub fn b_plus(e: &Scalar) -> Arc<VOSpec> {
    let e = e.clone();
    VOSpecBuilder::new("B+")
        .creation(move |n| quot(&one_minus(&t_pow(-(n as i32))), &one_plus(&e.pow(n))))
        .annihilation(|n| one_minus(&t_pow(n as i32)).neg())
        .zero_mode_power(1)
        .build()
}

/// `B_-` of the factorization ansatz, with `q^ε = q^{-α} = e` and
/// `q^γ = t^{-1}`.
pub fn b_minus(e: &Scalar) -> Arc<VOSpec> {
    let (ec, ea) = (e.clone(), e.clone());
    VOSpecBuilder::new("B-")
        .creation(move |n| {
            let en = ec.pow(n);
            quot(&one_minus(&t_pow(-(n as i32))).mul(&en), &one_plus(&en)).neg()
        })
        .annihilation(move |n| {
            quot(&one_minus(&t_pow(n as i32)), &ea.pow(n))
        })
        .zero_mode_power(-1)
        .build()
}

/// `A±`, `B±` at `q^ε = p`, and the total-difference data of `O±`.
#[derive(Clone, Debug)]
pub struct Auxiliary {
    pub a_plus: Arc<VOSpec>,
    pub a_minus: Arc<VOSpec>,
    pub b_plus: Arc<VOSpec>,
    pub b_minus: Arc<VOSpec>,
    pub o_plus: DifferenceRhs,
    pub o_minus: DifferenceRhs,
}

pub fn auxiliary() -> Auxiliary {
    static AUX: OnceLock<Auxiliary> = OnceLock::new();
    AUX.get_or_init(build_auxiliary).clone()
}

fn build_auxiliary() -> Auxiliary {
    let a_plus_creation = |n: u32| {
        let n = n as i32;
        quot(&one_plus(&t_pow(n)), &one_plus(&p_half(2 * n)))
            .mul(&quot(&one_minus(&t_pow(n)), &one_minus(&q_pow(n))))
            .mul(&t_pow(-n))
    };
    let a_plus_annihilation = |n: u32| {
        let n = n as i32;
        one_plus(&t_pow(n))
            .mul(&quot(&one_minus(&t_pow(n)), &one_minus(&q_pow(n))))
            .mul(&p_half(2 * n))
            .neg()
    };
    let a_minus_creation = |n: u32| {
        let n = n as i32;
        quot(&one_plus(&q_pow(n)), &one_plus(&p_half(2 * n)))
            .mul(&t_pow(-n))
            .neg()
    };
    let a_minus_annihilation = |n: u32| {
        let n = n as i32;
        one_plus(&q_pow(n)).mul(&p_half(-2 * n))
    };

    let a_plus = VOSpecBuilder::new("A+")
        .creation(a_plus_creation)
        .annihilation(a_plus_annihilation)
        .zero_mode_power(-1)
        .charge(2, 0)
        .coupling(ZCoupling::TwoBetaA0)
        .build();
    let a_minus = VOSpecBuilder::new("A-")
        .creation(a_minus_creation)
        .annihilation(a_minus_annihilation)
        .zero_mode_power(1)
        .charge(0, 2)
        .coupling(ZCoupling::MinusTwoA0)
        .build();

    // O± are written out independently of A± so that the two transcriptions
    // can be compared coefficient by coefficient.
    let o_plus_field = VOSpecBuilder::new("O+")
        .creation(|n| {
            let n = n as i32;
            let tn = t_pow(n);
            one_plus(&tn)
                .mul(&one_minus(&tn))
                .div(&one_plus(&p_half(2 * n)).mul(&one_minus(&q_pow(n))))
                .expect("nonzero")
                .div(&tn)
                .expect("nonzero")
        })
        .annihilation(|n| {
            let n = n as i32;
            let tn = t_pow(n);
            one_plus(&tn)
                .mul(&one_minus(&tn))
                .mul(&q_pow(n))
                .div(&one_minus(&q_pow(n)).mul(&tn))
                .expect("nonzero")
                .neg()
        })
        .zero_mode_power(-1)
        .charge(2, 0)
        .coupling(ZCoupling::TwoBetaA0)
        .build();
    let o_minus_field = VOSpecBuilder::new("O-")
        .creation(|n| {
            let n = n as i32;
            one_plus(&q_pow(n))
                .div(&one_plus(&p_half(2 * n)).mul(&t_pow(n)))
                .expect("nonzero")
                .neg()
        })
        .annihilation(|n| {
            let n = n as i32;
            one_plus(&q_pow(n)).mul(&t_pow(n)).div(&q_pow(n)).expect("nonzero")
        })
        .zero_mode_power(1)
        .charge(0, 2)
        .coupling(ZCoupling::MinusTwoA0)
        .build();

    let p = Scalar::p();
    let o_plus = DifferenceRhs::new(
        one_minus(&Scalar::q()).mul(&one_minus(&t_pow(-1))).neg(),
        p.inv().expect("p is nonzero"),
        Xi::Q,
        o_plus_field,
    )
    .expect("valid pairing");
    let o_minus = DifferenceRhs::new(
        one_minus(&q_pow(-1)).mul(&one_minus(&Scalar::t())).neg(),
        Scalar::one(),
        Xi::T,
        o_minus_field,
    )
    .expect("valid pairing");

    Auxiliary {
        a_plus,
        a_minus,
        b_plus: b_plus(&p),
        b_minus: b_minus(&p),
        o_plus,
        o_minus,
    }
}

/// `X = B_+ + p^{-1} B_-`, whose modes satisfy `T_n = p^{(n+1)/2} X_n`.
pub fn b_combination(b_plus: Arc<VOSpec>, b_minus: Arc<VOSpec>) -> FockOperator {
    FockOperator::new(
        "B+ + B-/p",
        vec![
            (Scalar::one(), b_plus),
            (Scalar::p().inv().expect("p is nonzero"), b_minus),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;
    use crate::symfunc::{macdonald_eigenvalue, macdonald_p};

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    fn part(text: &str) -> Partition {
        text.parse().unwrap()
    }

    #[test]
    fn t_terms_are_rescaled_b_terms() {
        let (tp, tm) = t_specs();
        let aux = auxiliary();
        for n in 1..=8u32 {
            let k = n as i32;
            // T_±(z) = p^{±1/2}-prefactor times B_±(p^{-1/2} z)
            assert_eq!(tp.creation_coeff(n), aux.b_plus.creation_coeff(n).mul(&p_half(-k)));
            assert_eq!(tm.creation_coeff(n), aux.b_minus.creation_coeff(n).mul(&p_half(-k)));
            assert_eq!(tp.annihilation_coeff(n), aux.b_plus.annihilation_coeff(n).mul(&p_half(k)));
            assert_eq!(tm.annihilation_coeff(n), aux.b_minus.annihilation_coeff(n).mul(&p_half(k)));
        }
        assert_eq!(tp.zero_mode_power(), aux.b_plus.zero_mode_power());
        assert_eq!(tm.zero_mode_power(), aux.b_minus.zero_mode_power());

        let x = b_combination(aux.b_plus.clone(), aux.b_minus.clone());
        let t = t_operator();
        let sector = Sector::new(1, -1);
        for level in 0..=3u32 {
            for n in -2..=2i32 {
                if level as i32 - n < 0 {
                    continue;
                }
                let lhs = t.mode_matrix(sector, n, level);
                let rhs = x.mode_matrix(sector, n, level).scale(&p_half(n + 1));
                assert_eq!(*lhs, rhs, "n={n} level={level}");
            }
        }
    }

    #[test]
    fn o_fields_match_a_fields() {
        let aux = auxiliary();
        for (o, a) in [(&aux.o_plus.spec, &aux.a_plus), (&aux.o_minus.spec, &aux.a_minus)] {
            for n in 1..=6 {
                assert_eq!(o.creation_coeff(n), a.creation_coeff(n));
                assert_eq!(o.annihilation_coeff(n), a.annihilation_coeff(n));
            }
            assert_eq!(o.zero_mode_power(), a.zero_mode_power());
            assert_eq!(o.charge(), a.charge());
            assert_eq!(o.coupling(), a.coupling());
        }
        // O+ carries (p^{-1} w)^{n+1}; A+ in the screening relation carries
        // (p^{-1/2} w)^{n+1}. The two agree through T_n = p^{(n+1)/2} X_n.
        let (sp, sm) = screening_rhs();
        for n in -3..=3 {
            let via_o = aux.o_plus.sigma.powi(n + 1).unwrap().mul(&p_half(n + 1));
            assert_eq!(via_o, sp.sigma.powi(n + 1).unwrap());
            let via_o = aux.o_minus.sigma.powi(n + 1).unwrap().mul(&p_half(n + 1));
            assert_eq!(via_o, sm.sigma.powi(n + 1).unwrap());
        }
        assert_eq!(aux.o_plus.c, sp.c);
        assert_eq!(aux.o_minus.c, sm.c);
    }

    #[test]
    fn coefficient_examples() {
        let (sp, sm) = screening_specs();
        assert_eq!(sp.creation_coeff(3), s("(1 - y^6)/(1 - x^6)"));
        assert_eq!(sm.annihilation_coeff(2), s("(1 + x^4/y^4)*y^4/x^4"));
        assert_eq!(sm.creation_coeff(5), s("-1"));
    }

    #[test]
    fn argument_scale_law() {
        let sigma = s("(x + 2*y)/(3 - x*y)");
        let make = |scale: Scalar| {
            VOSpecBuilder::new("probe")
                .creation(|n| s(&format!("{n}*x - y^{n}")))
                .annihilation(|n| s(&format!("1/(1 + x^{n}) + {n}")))
                .zero_mode_power(2)
                .prefactor(s("x/y"))
                .scale(scale)
                .build()
        };
        let plain = make(Scalar::one());
        let scaled = make(sigma.clone());
        let sector = Sector::new(2, -1);
        for level in 0..=3u32 {
            for k in -2..=3i32 {
                let lhs = scaled.mode_matrix(sector, k, level);
                let rhs = plain.mode_matrix(sector, k, level).scale(&sigma.powi(-k).unwrap());
                assert_eq!(*lhs, rhs, "k={k} level={level}");
            }
        }
    }

    #[test]
    fn highest_weight_conditions() {
        let t = t_operator();
        for r in -2..=2 {
            for s_ in -2..=2 {
                let sector = Sector::new(r, s_);
                let v = FockVector::vacuum(sector);
                let t0 = t.apply_mode(0, &v, 0).unwrap();
                assert_eq!(t0, v.scale(&sector.weight()));
                for n in 1..=3 {
                    assert!(t.apply_mode(n, &v, 0).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn t_mode_examples() {
        let t = t_operator();
        let sector = Sector::new(1, 1);
        let out = t.apply_mode(-1, &FockVector::vacuum(sector), 1).unwrap();
        assert_eq!(out.level(), 1);
        assert!(!out.coeff(&part("1")).is_zero());
        let v = FockVector::basis(sector, &part("1"));
        let out = t.apply_mode(2, &v, 2).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn psi_modes() {
        let psi = psi_spec();
        let sector = Sector::new(2, 1);
        let qa_inv = sector.q_alpha_pow(-1);
        let v = FockVector::vacuum(sector);
        assert_eq!(psi.apply_mode(0, &v, 1).unwrap(), v.scale(&p_half(-1).mul(&qa_inv)));
        let expect = s("-(1 - y^2)/(1 + x^2/y^2)*(x/y)/y^2*(y/x)").mul(&qa_inv);
        let out = psi.apply_mode(-1, &v, 1).unwrap();
        assert_eq!(out, FockVector::basis(sector, &part("1")).scale(&expect));
        let w = FockVector::basis(sector, &part("2"));
        assert!(psi.apply_mode(1, &w, 2).unwrap().is_zero());
    }

    #[test]
    fn macdonald_operator_examples() {
        let sector = Sector::new(0, 0);
        for n in 1..=4 {
            let out = macdonald_operator(n, &FockVector::vacuum(sector), 0).unwrap();
            let expect = macdonald_eigenvalue(&Partition::empty(), n).unwrap();
            assert_eq!(out, FockVector::vacuum(sector).scale(&expect));
        }
        let v = FockVector::basis(sector, &part("1"));
        assert_eq!(macdonald_operator(1, &v, 1).unwrap(), v.scale(&Scalar::q()));

        let p2 = macdonald_p(&part("2"));
        let v = FockVector::from_dense(sector, 2, &p2.to_dense());
        let out = macdonald_operator(2, &v, 2).unwrap();
        assert_eq!(out, v.scale(&s("q^2*t + 1")));
    }

    #[test]
    fn grading_and_sectors() {
        let (sp, sm) = screening_specs();
        let sector = Sector::new(-1, 2);
        assert_eq!(sp.target(sector), Sector::new(1, 2));
        assert_eq!(sm.target(sector), Sector::new(-1, 4));
        let v = FockVector::basis(sector, &part("2,1"));
        for k in -2..=3 {
            let out = sp.apply_mode(k, &v, 5).unwrap();
            assert_eq!(out.level() as i32, (3 - k).max(0));
            assert_eq!(out.sector(), Sector::new(1, 2));
        }
    }

    #[test]
    fn difference_rhs_rejects_mismatched_shift() {
        let aux = auxiliary();
        assert!(DifferenceRhs::new(Scalar::one(), Scalar::one(), Xi::T, aux.a_plus.clone()).is_err());
    }
}
