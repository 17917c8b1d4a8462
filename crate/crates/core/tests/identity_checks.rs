use qvir_arith::Scalar;
use qvir_core::checks::{
    negative_controls, verify_appendix_deltas, verify_defining_relation,
    verify_o_total_difference, verify_screening_commutator, verify_split, DeltaPair, Sign,
};
use qvir_core::fock::Sector;

#[test]
fn defining_relation_on_three_sectors() {
    for sector in [Sector::new(0, 0), Sector::new(1, 1), Sector::new(-1, 2)] {
        for (n, m) in [(1, -1), (2, -1), (-2, 2), (3, -2), (0, 0)] {
            let r = verify_defining_relation(n, m, sector, 3);
            assert!(r.passed(), "{:?}", r.to_json());
            assert!(!r.cells.is_empty());
        }
    }
}

#[test]
fn split_on_vacuum_gives_t_number() {
    for n in 1..=4 {
        let r = verify_split(n, Sector::new(0, 0), 0);
        assert!(r.passed());
        assert_eq!(r.cells.len(), 1);
    }
    assert!(verify_split(3, Sector::new(0, 0), 3).passed());
    assert!(verify_split(2, Sector::new(1, 1), 2).passed());
}

#[test]
fn screening_examples() {
    assert!(verify_screening_commutator(Sign::Plus, 0, Sector::new(-1, 0), 2).passed());
    assert!(verify_screening_commutator(Sign::Minus, 1, Sector::new(0, -1), 2).passed());
    for n in -2..=2 {
        assert!(verify_screening_commutator(Sign::Plus, n, Sector::new(1, 2), 2).passed());
        assert!(verify_screening_commutator(Sign::Minus, n, Sector::new(-2, 1), 2).passed());
    }
}

#[test]
fn appendix_examples() {
    let r = verify_appendix_deltas(DeltaPair::BPlusSMinus, 0..=0, Sector::new(0, 0), 0);
    assert!(r.passed());
    assert!(verify_appendix_deltas(DeltaPair::BPlusSPlus, -2..=2, Sector::new(1, 0), 2).passed());
    assert!(verify_o_total_difference(Sign::Plus, 0, Sector::new(0, 0), 1).passed());
    assert!(verify_o_total_difference(Sign::Minus, 1, Sector::new(0, 0), 1).passed());
}

#[test]
fn every_negative_control_is_detected() {
    let controls = negative_controls();
    assert!(controls.len() >= 20);
    for c in controls {
        assert!(c.detected, "{}", c.description);
    }
}

#[test]
fn residuals_are_exact() {
    let r = verify_defining_relation(2, -2, Sector::new(0, 0), 2);
    assert!(r.cells.iter().all(|c| c.residual == Scalar::zero()));
}
