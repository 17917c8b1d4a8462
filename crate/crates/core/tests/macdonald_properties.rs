use proptest::prelude::*;
use qvir_arith::{Scalar, Var};
use qvir_core::fock::{macdonald_operator, FockVector, Sector};
use qvir_core::partition::{index, partitions};
use qvir_core::symfunc::{
    m_to_p, macdonald_eigenvalue, macdonald_p, p_to_m, qt_inner, Basis, InnerProduct, SymFun,
};

#[test]
fn monomial_expansion_is_unitriangular() {
    for n in 1..=5 {
        for lambda in partitions(n) {
            let m = p_to_m(&macdonald_p(&lambda)).unwrap();
            assert_eq!(m.coeff(&lambda), Scalar::one(), "leading term of P_{lambda}");
            for (mu, c) in m.terms() {
                assert!(!c.is_zero());
                assert!(mu.dominated_by(&lambda).unwrap(), "{mu} in P_{lambda}");
            }
        }
    }
}

#[test]
fn distinct_polynomials_are_orthogonal() {
    for n in 1..=5 {
        let ps: Vec<SymFun> = partitions(n).iter().map(macdonald_p).collect();
        for i in 0..ps.len() {
            for j in i + 1..ps.len() {
                assert!(qt_inner(&ps[i], &ps[j]).unwrap().is_zero(), "degree {n}, {i} vs {j}");
            }
            assert!(!qt_inner(&ps[i], &ps[i]).unwrap().is_zero());
        }
    }
}

#[test]
fn q_zero_gives_hall_littlewood() {
    let at_q_zero = [(Var::X, Scalar::zero())];
    for n in 1..=4 {
        let hl = InnerProduct::hall_littlewood().macdonald_all(n);
        for (i, lambda) in index(n).list().iter().enumerate() {
            let p = macdonald_p(lambda);
            let specialized: Vec<Scalar> = p
                .to_dense()
                .iter()
                .map(|c| c.substitute(&at_q_zero).unwrap())
                .collect();
            assert_eq!(specialized, hl[i], "P_{lambda} at q = 0");
        }
    }
}

#[test]
fn polynomials_are_eigenvectors_of_the_bosonized_operator() {
    for n in 1..=4 {
        for lambda in partitions(n) {
            let v = FockVector::from_dense(Sector::new(0, 0), n, &macdonald_p(&lambda).to_dense());
            let image = macdonald_operator(n, &v, n).unwrap();
            let e = macdonald_eigenvalue(&lambda, n).unwrap();
            assert_eq!(image, v.scale(&e), "P_{lambda}");
        }
    }
}

#[test]
fn known_low_degree_polynomials() {
    // P_(1,1) = e_2 = (p_1^2 - p_2)/2
    let p11 = macdonald_p(&"1,1".parse().unwrap());
    let half = Scalar::ratio(1, 2).unwrap();
    let expected = SymFun::from_terms(
        Basis::P,
        2,
        [("1,1".parse().unwrap(), half.clone()), ("2".parse().unwrap(), half.neg())],
    )
    .unwrap();
    assert_eq!(p11, expected);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn power_monomial_round_trip(n in 1u32..=6, seed in prop::collection::vec(-5i64..=5, 11)) {
        let dense: Vec<Scalar> = (0..index(n).len()).map(|i| Scalar::from_int(seed[i])).collect();
        let f = SymFun::from_dense(Basis::P, n, &dense);
        prop_assert_eq!(m_to_p(&p_to_m(&f).unwrap()).unwrap(), f);
    }
}
