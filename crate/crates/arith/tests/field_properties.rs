use num_bigint::BigInt;
use proptest::prelude::*;
use qvir_arith::gcd::{gcd, gcd_subresultant};
use qvir_arith::matrix::{det_cofactor, det_field, det_fraction_free, kernel, mat_vec, rank};
use qvir_arith::{Monomial, MPoly, PointSampler, Scalar, Var, MERSENNE61};

fn poly(max_terms: usize) -> impl Strategy<Value = MPoly> {
    prop::collection::vec((0u16..3, 0u16..3, 0u16..2, -4i64..5), 1..=max_terms).prop_map(|ts| {
        MPoly::from_terms(ts.into_iter().map(|(a, b, c, k)| {
            let m = Monomial::var_pow(Var::X, a)
                .mul(&Monomial::var_pow(Var::Y, b))
                .mul(&Monomial::var_pow(Var::L, c));
            (m, BigInt::from(k))
        }))
    })
}

fn nonzero_poly(max_terms: usize) -> impl Strategy<Value = MPoly> {
    poly(max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (poly(3), nonzero_poly(3)).prop_map(|(n, d)| Scalar::new(n, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert!(a.sub(&a).is_zero());
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.inv().unwrap()), Scalar::one());
        }
    }

    #[test]
    fn normalization_is_canonical(a in scalar(), f in nonzero_poly(2)) {
        prop_assert_eq!(a.renormalize(), a.clone());
        let scaled = Scalar::new(a.numerator().mul(&f), a.denominator().mul(&f)).unwrap();
        prop_assert_eq!(scaled, a.clone());
        prop_assert!(a.denominator().leading_coeff() > BigInt::from(0));
    }

    #[test]
    fn text_round_trip(a in scalar()) {
        let back: Scalar = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn eval_mod_is_a_homomorphism(a in scalar(), b in scalar(), seed in any::<u64>()) {
        let pt = PointSampler::new(seed).point();
        let p = MERSENNE61;
        if let (Ok(ea), Ok(eb)) = (a.eval_mod(&pt, p), b.eval_mod(&pt, p)) {
            let sum = a.add(&b).eval_mod(&pt, p).unwrap();
            let prod = a.mul(&b).eval_mod(&pt, p).unwrap();
            prop_assert_eq!(sum, (ea + eb) % p);
            prop_assert_eq!(prod, ((ea as u128 * eb as u128) % p as u128) as u64);
        }
    }

    #[test]
    fn gcd_strategies_agree(g in nonzero_poly(3), a in nonzero_poly(3), b in nonzero_poly(3)) {
        let (u, v) = (g.mul(&a), g.mul(&b));
        let h = gcd(&u, &v);
        prop_assert_eq!(&h, &gcd_subresultant(&u, &v));
        prop_assert!(u.div_exact(&h).is_some());
        prop_assert!(v.div_exact(&h).is_some());
        prop_assert!(h.div_exact(&g.primitive_part()).is_some() || g.is_constant());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn bareiss_matches_cofactor(n in 0usize..=4, entries in prop::collection::vec(scalar(), 16)) {
        let m: Vec<Vec<Scalar>> = (0..n).map(|i| entries[i * n..i * n + n].to_vec()).collect();
        prop_assert_eq!(det_fraction_free(&m), det_cofactor(&m));
        prop_assert_eq!(det_field(&m), det_cofactor(&m));
    }

    // Rows 2.. repeat combinations of rows 0 and 1, so the rank is at most 2.
    #[test]
    fn kernel_is_annihilated_and_complementary(
        rows in 2usize..=4,
        base in prop::collection::vec(scalar(), 8),
        mix in prop::collection::vec(-2i64..=2, 4),
    ) {
        let cols = 4;
        let mut m: Vec<Vec<Scalar>> = vec![base[..4].to_vec(), base[4..].to_vec()];
        for i in 2..rows {
            let (a, b) = (Scalar::from_int(mix[2 * (i - 2)]), Scalar::from_int(mix[2 * (i - 2) + 1]));
            m.push((0..cols).map(|j| a.mul(&m[0][j]).add(&b.mul(&m[1][j]))).collect());
        }
        let k = kernel(&m, cols);
        prop_assert_eq!(k.len(), cols - rank(&m));
        for v in &k {
            prop_assert!(mat_vec(&m, v).iter().all(Scalar::is_zero));
        }
    }
}

#[test]
fn symbolic_equality_implies_modular_agreement() {
    let a: Scalar = "(x^2 - y^2)/(x - y) + l/(x*y)".parse().unwrap();
    let b: Scalar = "(x^2*y + x*y^2 + l)/(x*y)".parse().unwrap();
    assert_eq!(a, b);
    let mut sampler = PointSampler::new(20);
    for _ in 0..20 {
        let pt = sampler.point();
        assert_eq!(a.eval_mod(&pt, MERSENNE61), b.eval_mod(&pt, MERSENNE61));
    }
}
