//! End-to-end checks across modules: constructions verified against the
//! exact Haar channels.

use udesign_core::chartheory::{close_group, DEFAULT_GROUP_CAP};
use udesign_core::designs::{
    frame_potential, verify_design_moment, verify_design_sectors, VerifyOptions, WeightedUnitarySet,
};
use udesign_core::groups;
use udesign_core::haar::haar_orthogonal_twirl;
use udesign_core::ortho_lift::{estimate_epsilon, lift_design, verify_composition_identity};
use udesign_core::rotation::construct_2design;
use udesign_core::tensorlin::ComplexMatrix;
use udesign_core::YoungDiagram;

fn group_set(name: &str) -> WeightedUnitarySet {
    let g = close_group(&groups::named_generators(name).unwrap(), DEFAULT_GROUP_CAP).unwrap();
    WeightedUnitarySet::group(g.elements().to_vec()).unwrap()
}

fn clifford() -> WeightedUnitarySet {
    let g = close_group(
        &[groups::hadamard(), groups::phase_gate()],
        DEFAULT_GROUP_CAP,
    )
    .unwrap();
    WeightedUnitarySet::group(groups::modulo_phase(g.elements())).unwrap()
}

#[test]
fn rotation_design_is_a_two_design() {
    for d in 2..=6 {
        let (set, _) = construct_2design(d).unwrap();
        let moment = verify_design_moment(&set, 2, VerifyOptions::default()).unwrap();
        let sectors = verify_design_sectors(&set, 2, VerifyOptions::default()).unwrap();
        assert!(moment.pass && sectors.pass, "d={d}");
        // The two paths agree within a factor of ten (both are at rounding level here).
        assert!(moment.max_deviation <= 1e-14 && sectors.max_deviation <= 1e-14);
    }
}

#[test]
fn rotation_design_is_not_a_three_design() {
    for d in 3..=4 {
        let (set, _) = construct_2design(d).unwrap();
        assert!(
            !verify_design_moment(&set, 3, VerifyOptions::default())
                .unwrap()
                .pass
        );
    }
}

#[test]
fn clifford_and_pauli() {
    let c = clifford();
    assert_eq!(c.cardinality(), 24);
    for t in 1..=3 {
        assert!(
            verify_design_moment(&c, t, VerifyOptions::default())
                .unwrap()
                .pass,
            "t={t}"
        );
    }
    assert!(
        !verify_design_moment(&c, 4, VerifyOptions::default())
            .unwrap()
            .pass
    );
    assert!((frame_potential(&c, 2).unwrap() - 2.0).abs() < 1e-9);
    let pauli = group_set("pauli1q");
    assert!(
        !verify_design_moment(&pauli, 2, VerifyOptions::default())
            .unwrap()
            .pass
    );
}

#[test]
fn monomial_failure_localized() {
    let g = WeightedUnitarySet::monomial(3, None).unwrap();
    let r = verify_design_sectors(&g, 2, VerifyOptions::default()).unwrap();
    let sym = YoungDiagram::new(vec![2]).unwrap();
    assert_eq!(r.worst, Some((sym.clone(), sym)));
    assert_eq!(r.failing().count(), 1);
}

#[test]
fn composition_identities() {
    for d in 2..=6 {
        let r = verify_composition_identity(d, 2, 1e-9, None, 0).unwrap();
        assert!(r.pass, "{r:?}");
    }
    for d in 5..=6 {
        let r = verify_composition_identity(d, 3, 1e-8, None, 0).unwrap();
        assert!(r.pass && !r.informational, "{r:?}");
        assert!(r.probes >= 100);
    }
    // Below d = 5 the t = 3 residual is only reported.
    assert!(
        verify_composition_identity(4, 3, 1e-8, None, 0)
            .unwrap()
            .informational
    );
}

fn orthogonal_two_design_deviation(v: &WeightedUnitarySet) -> f64 {
    let d = v.dim();
    let mut dev = 0.0f64;
    for a in 0..d * d {
        for b in 0..d * d {
            let m = ComplexMatrix::unit(d * d, a, b);
            let lhs = udesign_core::designs::twirl_apply(v, 2, &m).unwrap();
            dev = dev.max(lhs.max_abs_diff(&haar_orthogonal_twirl(2, d, &m).unwrap()));
        }
    }
    dev
}

#[test]
fn orthogonal_scan_and_lift() {
    let candidates = [
        "dihedral3",
        "hyperoctahedral2",
        "hyperoctahedral3",
        "icosahedral",
        "tetrahedral",
        "symmetric-standard3",
    ];
    let mut exact = Vec::new();
    for name in candidates {
        let v = group_set(name);
        let is_design = orthogonal_two_design_deviation(&v) <= 1e-9;
        let (lifted, _) = lift_design(&v, 2).unwrap();
        let lifted_pass = verify_design_moment(&lifted, 2, VerifyOptions::default())
            .unwrap()
            .pass;
        if is_design {
            exact.push(name);
            assert!(lifted_pass, "{name}");
        }
    }
    assert_eq!(exact, ["dihedral3", "icosahedral"]);
}

#[test]
fn lift_of_singleton_fails() {
    let one = WeightedUnitarySet::singleton(ComplexMatrix::identity(3)).unwrap();
    let (lifted, _) = lift_design(&one, 2).unwrap();
    assert!(
        !verify_design_moment(&lifted, 2, VerifyOptions::default())
            .unwrap()
            .pass
    );
}

#[test]
fn epsilon_of_exact_designs() {
    let (set, _) = construct_2design(2).unwrap();
    assert!(estimate_epsilon(&set, 2).unwrap() <= 1e-8);
    assert!(estimate_epsilon(&clifford(), 2).unwrap() <= 1e-8);
    let pauli = estimate_epsilon(&group_set("pauli1q"), 2).unwrap();
    assert!(pauli.is_infinite() || pauli >= 1.0);
}
