//! Design data model, verification paths and character-theoretic checks.

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use udesign_core::chartheory::{
    check_condition_one, check_condition_two, check_theorem_conditions, close_group,
    CharacterTable, GroupInput, DEFAULT_GROUP_CAP,
};
use udesign_core::designs::{
    frame_potential, merge_equal, product_design, twirl_apply, verify_design_moment,
    verify_design_sectors, VerifyOptions, WeightedUnitarySet, MATERIALIZATION_CAP,
};
use udesign_core::groups;
use udesign_core::tensorlin::{ComplexMatrix, C64};
use udesign_core::YoungDiagram;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn diagram(rows: &[usize]) -> YoungDiagram {
    YoungDiagram::new(rows.to_vec()).unwrap()
}

fn clifford_group() -> udesign_core::chartheory::MatrixGroup {
    close_group(
        &[groups::hadamard(), groups::phase_gate()],
        DEFAULT_GROUP_CAP,
    )
    .unwrap()
    .with_name("Clifford")
}

fn clifford() -> WeightedUnitarySet {
    WeightedUnitarySet::group(groups::modulo_phase(clifford_group().elements())).unwrap()
}

fn pauli() -> WeightedUnitarySet {
    WeightedUnitarySet::group(groups::pauli_mod_phase()).unwrap()
}

fn probe(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Hash-free pairwise convolution: `w(U) = Σ_{V₁V₂ = U} w₁(V₁) w₂(V₂)`.
fn pairwise_convolution(
    a: &[(ComplexMatrix, f64)],
    b: &[(ComplexMatrix, f64)],
) -> Vec<(ComplexMatrix, f64)> {
    let mut out: Vec<(ComplexMatrix, f64)> = Vec::new();
    for (u, wu) in a {
        for (v, wv) in b {
            let p = u * v;
            match out.iter_mut().find(|(q, _)| q.max_abs_diff(&p) <= 1e-10) {
                Some(e) => e.1 += wu * wv,
                None => out.push((p, wu * wv)),
            }
        }
    }
    out
}

fn assert_same_weights(x: &[(ComplexMatrix, f64)], y: &[(ComplexMatrix, f64)]) {
    assert_eq!(x.len(), y.len());
    for (u, w) in x {
        let (_, v) = y
            .iter()
            .find(|(q, _)| q.max_abs_diff(u) <= 1e-10)
            .expect("element present");
        assert!((w - v).abs() < 1e-14);
    }
}

#[test]
fn pauli_product_convolution() {
    let p = pauli();
    let prod = product_design(vec![p.clone(), p.clone()]).unwrap();
    let merged = prod.materialize(MATERIALIZATION_CAP).unwrap();
    let elems = p.materialize(MATERIALIZATION_CAP).unwrap();
    assert_same_weights(&merged, &pairwise_convolution(&elems, &elems));
    // Phases are kept: 16 pairs land on 10 distinct matrices.
    assert_eq!(merged.len(), 10);
    // Identified up to phase they collapse to the four Paulis, each of weight 1/4.
    let mod_phase = merge_equal(
        merged
            .iter()
            .map(|(u, w)| (groups::phase_normalized(u), *w))
            .collect(),
    );
    assert_eq!(mod_phase.len(), 4);
    for (_, w) in &mod_phase {
        assert!((w - 0.25).abs() < 1e-15);
    }
}

#[test]
fn random_subset_convolution() {
    let all = clifford_group();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pick = |rng: &mut ChaCha8Rng| -> Vec<(ComplexMatrix, f64)> {
        let raw: Vec<f64> = (0..5).map(|_| rng.random_range(0.1..1.0)).collect();
        let total: f64 = raw.iter().sum();
        raw.iter()
            .map(|w| (all.elements()[rng.random_range(0..24)].clone(), w / total))
            .collect()
    };
    for _ in 0..5 {
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        let sa = WeightedUnitarySet::explicit(merge_equal(a.clone())).unwrap();
        let sb = WeightedUnitarySet::explicit(merge_equal(b.clone())).unwrap();
        let merged = product_design(vec![sa, sb])
            .unwrap()
            .materialize(MATERIALIZATION_CAP)
            .unwrap();
        assert_same_weights(&merged, &pairwise_convolution(&a, &b));
    }
}

#[test]
fn twelve_element_lift_weights() {
    // A 12-element real orthogonal set: the tetrahedral rotations, unevenly weighted.
    let g = close_group(&groups::tetrahedral(), 100).unwrap();
    let raw: Vec<f64> = (1..=12).map(|k| k as f64).collect();
    let total: f64 = raw.iter().sum();
    let v: Vec<(ComplexMatrix, f64)> = g
        .elements()
        .iter()
        .cloned()
        .zip(raw.iter().map(|w| w / total))
        .collect();
    let set = WeightedUnitarySet::explicit(v.clone()).unwrap();
    let (lifted, lift) = udesign_core::ortho_lift::lift_design(&set, 2).unwrap();
    let rotated: Vec<(ComplexMatrix, f64)> = v
        .iter()
        .map(|(u, w)| (&(&lift.w * u) * &lift.w.adjoint(), *w))
        .collect();
    assert_same_weights(
        &lifted.materialize(MATERIALIZATION_CAP).unwrap(),
        &pairwise_convolution(&rotated, &v),
    );
}

#[test]
fn group_twirls_are_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = WeightedUnitarySet::monomial(3, None).unwrap();
    let c = clifford();
    for _ in 0..10 {
        let m = probe(9, &mut rng);
        let once = twirl_apply(&g, 2, &m).unwrap();
        assert!(twirl_apply(&g, 2, &once).unwrap().max_abs_diff(&once) < 1e-10);
        let m8 = probe(8, &mut rng);
        let once = twirl_apply(&c, 3, &m8).unwrap();
        assert!(twirl_apply(&c, 3, &once).unwrap().max_abs_diff(&once) < 1e-10);
        assert!((once.trace() - m8.trace()).norm() < 1e-10);
    }
}

#[test]
fn frame_potentials() {
    let c = clifford();
    assert!((frame_potential(&c, 2).unwrap() - 2.0).abs() < 1e-9);
    let (rot, _) = udesign_core::rotation::construct_2design(2).unwrap();
    assert!((frame_potential(&rot, 2).unwrap() - 2.0).abs() < 1e-9);
    // Haar fourth moment at d = 2, estimated from 10⁶ samples.
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 1_000_000;
    let (mut s, mut s2) = (0.0, 0.0);
    for _ in 0..n {
        let u = udesign_core::haar::sample_unitary(2, &mut rng);
        let x = u.trace().norm_sqr().powi(4);
        s += x;
        s2 += x * x;
    }
    let mean = s / n as f64;
    let sigma = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
    let fp4 = frame_potential(&c, 4).unwrap();
    assert!(fp4 > mean + 3.0 * sigma, "{fp4} vs {mean} ± {sigma}");
    for t in 1..=3 {
        assert!((frame_potential(&c, t).unwrap() - [1.0, 2.0, 5.0][t - 1]).abs() < 1e-9);
    }
}

#[test]
fn moment_and_sector_paths_agree() {
    let sets: Vec<(&str, WeightedUnitarySet)> = vec![
        ("clifford", clifford()),
        ("pauli", pauli()),
        ("monomial3", WeightedUnitarySet::monomial(3, None).unwrap()),
        ("monomial2", WeightedUnitarySet::monomial(2, None).unwrap()),
        (
            "icosahedral",
            WeightedUnitarySet::group(
                close_group(&groups::icosahedral(), 100)
                    .unwrap()
                    .elements()
                    .to_vec(),
            )
            .unwrap(),
        ),
    ];
    for (name, set) in &sets {
        for t in 1..=3usize {
            if set.dim().pow(t as u32) > 64 {
                continue;
            }
            let m = verify_design_moment(set, t, VerifyOptions::default()).unwrap();
            let s = verify_design_sectors(set, t, VerifyOptions::default()).unwrap();
            assert_eq!(m.pass, s.pass, "{name} t={t}");
            if !m.pass {
                let ratio = m.max_deviation / s.max_deviation;
                assert!((0.1..=10.0).contains(&ratio), "{name} t={t}: {ratio}");
            }
        }
    }
}

#[test]
fn clifford_character_verdicts_match_moments() {
    let g = clifford_group();
    let data = g.class_data();
    for t in 1..=4usize {
        let numeric = verify_design_moment(&clifford(), t, VerifyOptions::default())
            .unwrap()
            .pass;
        let chars = YoungDiagram::sectors(t, 2)
            .iter()
            .all(|gm| check_condition_one(&data, gm).unwrap());
        assert_eq!(numeric, chars, "t={t}");
        assert_eq!(chars, t <= 3);
    }
    assert!(!check_condition_one(&data, &diagram(&[4])).unwrap());
    let report = check_theorem_conditions(&[GroupInput::Matrix(g)], 3, 2).unwrap();
    assert!(report.pass);
    assert!(report.numerical.unwrap().pass);
}

#[test]
fn condition_one_implies_no_sector_split() {
    for name in [
        "clifford1q",
        "dihedral3",
        "icosahedral",
        "tetrahedral",
        "monomial3",
    ] {
        let g = close_group(&groups::named_generators(name).unwrap(), DEFAULT_GROUP_CAP).unwrap();
        let set = WeightedUnitarySet::group(g.elements().to_vec()).unwrap();
        let data = g.class_data();
        for t in 1..=3usize {
            let report = verify_design_sectors(&set, t, VerifyOptions::default()).unwrap();
            for gamma in YoungDiagram::sectors(t, g.dim()) {
                if check_condition_one(&data, &gamma).unwrap() {
                    let diag = report
                        .sectors
                        .iter()
                        .find(|s| s.gamma == gamma && s.eta == gamma)
                        .unwrap();
                    assert!(
                        diag.max_deviation <= report.tolerance,
                        "{name} t={t} {gamma}"
                    );
                }
            }
        }
    }
}

#[test]
fn tables_match_matrix_groups() {
    for (file, gens) in [
        ("s4.json", groups::symmetric_standard(3)),
        ("a4.json", groups::tetrahedral()),
    ] {
        let table = CharacterTable::from_json_str(&std::fs::read_to_string(fixture(file)).unwrap())
            .unwrap();
        let rep = table.default_rep(3).unwrap();
        let from_table = GroupInput::Table { table, rep };
        let from_matrices = GroupInput::Matrix(close_group(&gens, 100).unwrap());
        for t in 1..=3usize {
            let a = check_theorem_conditions(std::slice::from_ref(&from_table), t, 3).unwrap();
            let b = check_theorem_conditions(std::slice::from_ref(&from_matrices), t, 3).unwrap();
            for (x, y) in a.diagrams.iter().zip(&b.diagrams) {
                assert_eq!(x.norms, y.norms, "{file} t={t}");
            }
            for (x, y) in a.pairs.iter().zip(&b.pairs) {
                assert_eq!(x.overlaps, y.overlaps, "{file} t={t}");
            }
        }
    }
}

#[test]
fn complex_table_values() {
    let table =
        CharacterTable::from_json_str(&std::fs::read_to_string(fixture("c3_cyclic.json")).unwrap())
            .unwrap();
    let rep = table.default_rep(1).unwrap();
    let data = table.class_data(&rep, 2).unwrap();
    assert!(check_condition_one(&data, &diagram(&[2])).unwrap());
    assert!(check_condition_two(&data, &diagram(&[2]), &diagram(&[1, 1])).unwrap());
}

#[test]
fn two_groups_cover_what_neither_covers_alone() {
    // G(3,1,3) misses [2] at t = 2; its rotated copy from the construction covers it.
    let (set, params) = udesign_core::rotation::construct_2design(3).unwrap();
    let q = udesign_core::rotation::rotation_path(3, params.t_star);
    let base = close_group(&udesign_core::monomial::generators(3), DEFAULT_GROUP_CAP)
        .unwrap()
        .with_name("G");
    let rotated_gens: Vec<ComplexMatrix> = udesign_core::monomial::generators(3)
        .iter()
        .map(|g| &(&q * g) * &q.adjoint())
        .collect();
    let rotated = close_group(&rotated_gens, DEFAULT_GROUP_CAP)
        .unwrap()
        .with_name("G^Q");
    let report = check_theorem_conditions(
        &[GroupInput::Matrix(rotated), GroupInput::Matrix(base)],
        2,
        3,
    )
    .unwrap();
    // Both copies are isomorphic, so the character test cannot tell them apart.
    assert!(!report.pass);
    assert!(
        verify_design_moment(&set, 2, VerifyOptions::default())
            .unwrap()
            .pass
    );
}
