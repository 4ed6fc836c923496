mod common;

use common::*;
use proptest::prelude::*;
use symqudit::linalg::{inverse, CMatrix, C64};
use symqudit::random::{complex_gaussian, random_conditioned, substream};
use symqudit::stabilizer::{
    classify, generic_signature, invariants_distinguish, stabilized_states, stabilizer_residual, stabilizer_space,
    verify_witness, Verdict, WitnessMode,
};
use symqudit::states::{block_lowering, excitation, ghz, multi_block_excitation, unique_representative, BlockLayout};
use symqudit::symspace::{tensor_power_apply, SymState};
use symqudit::Error;

const TOL: f64 = 1e-9;

/// States with a nontrivial stabilizer, picked by `kind`.
fn structured(kind: usize, n: usize, d: usize) -> SymState {
    match kind % 4 {
        0 => ghz(n, d, None).unwrap(),
        1 => excitation(n, d, d - 1).unwrap(),
        2 => unique_representative(n, &BlockLayout::new(vec![d - 1, 1]).unwrap()).unwrap(),
        _ => multi_block_excitation(n, &BlockLayout::new(vec![d - 1, 1]).unwrap(), usize::from(d > 2), &[n - 1, 1]).unwrap(),
    }
}

fn random_element(space: &symqudit::stabilizer::StabilizerSpace, seed: u64) -> CMatrix {
    let mut rng = substream(seed, 7);
    let coeffs: Vec<C64> = (0..space.dimension()).map(|_| complex_gaussian(&mut rng)).collect();
    space.combine(&coeffs)
}

proptest! {
    #![proptest_config(prop_config(32))]

    #[test]
    fn span_elements_stabilize(kind in 0usize..4, n in 3usize..=5, d in 2usize..=4, seed in any::<u64>()) {
        let psi = structured(kind, n, d);
        let space = stabilizer_space(&psi, TOL).unwrap();
        prop_assert!(space.dimension() >= 1);
        for k in 0..20 {
            let b = random_element(&space, seed.wrapping_add(k));
            let full = to_full(&psi);
            let image = apply_at(&full, n, d, &b, 1);
            prop_assert!(asymmetry(&image, &classes(n, d)) < 1e-10);
        }
    }

    #[test]
    fn stabilizers_compose_for_three_or_more(kind in 0usize..4, n in 3usize..=5, d in 2usize..=4, seed in any::<u64>()) {
        let psi = structured(kind, n, d);
        let space = stabilizer_space(&psi, TOL).unwrap();
        let a = random_element(&space, seed);
        let b = random_element(&space, seed ^ 0x5555);
        prop_assert!(stabilizer_residual(&psi, &(&a * &b)).unwrap() < 1e-10);
    }

    #[test]
    fn stabilizers_transform_by_conjugation(kind in 0usize..4, n in 3usize..=4, d in 2usize..=3, seed in any::<u64>()) {
        let psi = structured(kind, n, d).normalized().unwrap();
        let a = random_conditioned(&mut substream(seed, 1), d, 10.0);
        let phi = tensor_power_apply(&psi, &a).unwrap().normalized().unwrap();
        let s_psi = stabilizer_space(&psi, TOL).unwrap();
        let s_phi = stabilizer_space(&phi, TOL).unwrap();
        prop_assert_eq!(s_psi.dimension(), s_phi.dimension());
        // Each A B A^-1 stabilizes A^(x)n psi.
        let a_inv = inverse(&a, 1e-12).unwrap();
        for b in &s_psi.basis {
            let c = &(&a * b) * &a_inv;
            prop_assert!(stabilizer_residual(&phi, &c).unwrap() < 1e-8);
        }
    }

    #[test]
    fn classification_is_deterministic(kind in 0usize..4, seed in any::<u64>()) {
        let psi = structured(kind, 3, 3);
        let a = classify(&psi, 8, seed, TOL, 1e-7).unwrap();
        let b = classify(&psi, 8, seed, TOL, 1e-7).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn stabilizer_dimensions_of_representatives() {
    // GHZ: diagonal matrices. W-type: polynomials in the lowering operator.
    for d in 2..=4 {
        assert_eq!(stabilizer_space(&ghz(3, d, None).unwrap(), TOL).unwrap().dimension(), d);
        assert_eq!(stabilizer_space(&excitation(3, d, d - 1).unwrap(), TOL).unwrap().dimension(), d);
    }
    let k = block_lowering(&BlockLayout::new(vec![3]).unwrap());
    let w = excitation(4, 3, 2).unwrap();
    assert!(stabilizer_residual(&w, &(&CMatrix::identity(3) + &k)).unwrap() < 1e-14);
}

#[test]
fn two_particle_stabilizers_need_not_compose() {
    let psi = excitation(2, 2, 1).unwrap();
    let x = CMatrix::from_real(&[&[1.0, 1.0], &[0.0, 1.0]]);
    let y = CMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
    assert!(stabilizer_residual(&psi, &x).unwrap() < 1e-14);
    assert!(stabilizer_residual(&psi, &y).unwrap() < 1e-14);
    assert!(stabilizer_residual(&psi, &(&x * &y)).unwrap() > 0.1);
    let report = classify(&psi, 8, 0, TOL, 1e-7).unwrap();
    assert!(!report.warnings.is_empty());
}

#[test]
fn block_phases_do_not_mix_blocks() {
    // A stabilizer of the unique state for blocks {2, 1} never couples the blocks.
    let layout = BlockLayout::new(vec![2, 1]).unwrap();
    let psi = unique_representative(3, &layout).unwrap();
    let space = stabilizer_space(&psi, TOL).unwrap();
    for b in &space.basis {
        for (i, j) in [(0, 2), (1, 2), (2, 0), (2, 1)] {
            assert!(b[(i, j)].norm() < 1e-10);
        }
    }
}

#[test]
fn generic_signature_prefers_the_modal_draw() {
    let psi = ghz(3, 3, None).unwrap();
    let space = stabilizer_space(&psi, TOL).unwrap();
    let sample = generic_signature(&space, 12, 0, TOL, 1e-7).unwrap();
    assert_eq!(sample.generic.to_string(), "{ { 1 }, { 1 }, { 1 } }");
    assert_eq!(sample.draws.len(), 12);
    assert_eq!(sample.counts.iter().map(|c| c.1).sum::<usize>(), 12);
}

#[test]
fn truncated_ghz_is_refuted_with_a_valid_witness() {
    let one = C64::new(1.0, 0.0);
    let psi = ghz(3, 3, Some(&[one, one, C64::new(0.0, 0.0)])).unwrap();
    let report = classify(&psi, 16, 0, TOL, 1e-7).unwrap();
    match report.verdict {
        Verdict::Refuted { witness, witness_signature } => {
            assert!(stabilizer_residual(&psi, &witness).unwrap() < 1e-8);
            assert!(witness_signature.block_count() < report.generic_signature.block_count()
                || witness_signature.eigenvalue_count() > report.generic_signature.eigenvalue_count());
        }
        other => panic!("expected a refutation, got {other:?}"),
    }
}

#[test]
fn witnesses_and_distinguishing_invariants() {
    let g = ghz(3, 2, None).unwrap();
    let w = excitation(3, 2, 1).unwrap();
    assert!(invariants_distinguish(&g, &w, 8, 0, TOL, 1e-7).unwrap());
    let a = CMatrix::from_real(&[&[2.0, 1.0], &[0.0, 1.0]]);
    let phi = tensor_power_apply(&g, &a).unwrap();
    let check = verify_witness(&g, &phi, &a, WitnessMode::Slocc, TOL).unwrap();
    assert!(check.holds);
    assert!(matches!(
        verify_witness(&g, &phi, &a, WitnessMode::Lu, TOL),
        Err(Error::NotUnitary { .. })
    ));
    assert!(!invariants_distinguish(&g, &phi, 8, 0, TOL, 1e-7).unwrap());
}

#[test]
fn states_stabilized_by_a_diagonal_matrix() {
    // diag(1, 1, 2) on three qutrits: level 2 is either empty or full.
    let b = CMatrix::from_real(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 2.0]]);
    let states = stabilized_states(3, 3, &b, TOL).unwrap();
    assert_eq!(states.len(), 5);
    for s in &states {
        assert!(stabilizer_residual(s, &b).unwrap() < 1e-10);
    }
}

#[test]
fn degenerate_inputs() {
    let zero = SymState::zeros(3, 2).unwrap();
    assert_eq!(stabilizer_space(&zero, TOL).unwrap_err(), Error::ZeroState);
    let single = ghz(1, 2, None).unwrap();
    assert!(stabilizer_space(&single, TOL).is_err());
}
