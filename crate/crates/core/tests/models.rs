use commuter_core::finset::{atom_strong_check, copower_naturality, copower_sweep, retract_of_one, FinSet, FinSetObj};
use commuter_core::matrix::{check_theorem1_numeric, check_theorem3_numeric, random_alpha};
use commuter_core::Exec;

#[test]
fn copowers_commute_with_left_adjoints() {
    let m = FinSet::default();
    let cases = copower_sweep(&m, 4, Exec::Parallel).unwrap();
    assert_eq!(cases.len(), 64);
    assert!(cases.iter().all(|c| c.bijective));
    assert_eq!(cases, copower_sweep(&m, 4, Exec::Sequential).unwrap());
    assert_eq!(copower_naturality(&m, 200, 4, 42, Exec::Parallel).unwrap(), 200);
}

#[test]
fn only_the_point_is_an_atom_with_strong_adjoint() {
    let m = FinSet::default();
    for d in 0..=3 {
        let r = atom_strong_check(&m, FinSetObj::new(d), 4, Exec::Parallel).unwrap();
        assert_eq!(r.consistent_with_strong_adjoint, d == 1, "d = {d}");
        assert_eq!(r.retract_of_one, d == 1);
        assert_eq!(
            r,
            atom_strong_check(&m, FinSetObj::new(d), 4, Exec::Sequential).unwrap()
        );
        assert_eq!(retract_of_one(FinSetObj::new(d)), d == 1);
    }
}

#[test]
fn numeric_theorems_on_the_seed_grid() {
    for seed in [42, 43, 44] {
        for (da, dx) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            let r = check_theorem1_numeric(&random_alpha(seed, da, dx), da, dx).unwrap();
            assert!(r.max_residual() <= 1e-9, "{r:?}");
        }
    }
    for da in 1..=3 {
        for dx in 1..=3 {
            let r = check_theorem3_numeric(da, dx).unwrap();
            assert_eq!((r.expression_vs_a, r.composite_vs_flip), (0.0, 0.0));
        }
    }
}
