use std::sync::Arc;

use proptest::prelude::*;
use qvir_arith::Scalar;
use qvir_core::fock::{level_dim, screening_specs, FockOperator, Sector, VOSpec, VOSpecBuilder};

fn spec(creation: Vec<i64>, annihilation: Vec<i64>, sigma: Option<Scalar>) -> Arc<VOSpec> {
    let mut b = VOSpecBuilder::new("random")
        .creation(move |n| Scalar::from_int(creation[(n as usize - 1) % creation.len()]))
        .annihilation(move |n| Scalar::from_int(annihilation[(n as usize - 1) % annihilation.len()]))
        .zero_mode_power(1);
    if let Some(s) = sigma {
        b = b.scale(s);
    }
    b.build()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn modes_shift_the_level_by_k(
        c in prop::collection::vec(-3i64..=3, 1..4),
        d in prop::collection::vec(-3i64..=3, 1..4),
        level in 0u32..=3,
        k in -2i32..=2,
    ) {
        let op = FockOperator::single(spec(c, d, None));
        let m = op.mode_matrix_at(Sector::new(0, 0), k, level as i64);
        prop_assert_eq!(m.cols(), level_dim(level as i64));
        prop_assert_eq!(m.rows(), level_dim(level as i64 - k as i64));
    }

    #[test]
    fn argument_scale_multiplies_mode_k_by_sigma_to_minus_k(
        c in prop::collection::vec(-3i64..=3, 1..4),
        d in prop::collection::vec(-3i64..=3, 1..4),
        a in -2i32..=2,
        b in -2i32..=2,
        level in 0u32..=3,
        k in -2i32..=2,
    ) {
        let sigma = Scalar::xy_monomial(a, b);
        let plain = FockOperator::single(spec(c.clone(), d.clone(), None));
        let scaled = FockOperator::single(spec(c, d, Some(sigma.clone())));
        let sector = Sector::new(1, -1);
        let lhs = scaled.mode_matrix_at(sector, k, level as i64);
        let rhs = plain
            .mode_matrix_at(sector, k, level as i64)
            .scale(&sigma.powi(-k).unwrap());
        prop_assert_eq!(lhs.as_ref(), &rhs);
    }
}

#[test]
fn screening_currents_shift_sectors() {
    let (plus, minus) = screening_specs();
    for r in -2..=2 {
        for s in -2..=2 {
            let sector = Sector::new(r, s);
            assert_eq!(plus.target(sector), Sector::new(r + 2, s));
            assert_eq!(minus.target(sector), Sector::new(r, s + 2));
        }
    }
}
