//! Generators of small finite matrix groups used as fixtures and examples.

use crate::error::{Error, Result};
use crate::monomial;
use crate::tensorlin::{ComplexMatrix, Permutation, C64};

pub const NAMES: &[&str] = &[
    "clifford1q",
    "pauli1q",
    "monomial3",
    "dihedral3",
    "icosahedral",
    "hyperoctahedral2",
    "hyperoctahedral3",
    "symmetric-standard3",
    "tetrahedral",
];

pub fn hadamard() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, -1.0])
        .expect("2x2")
        .scale_real(std::f64::consts::FRAC_1_SQRT_2)
}

pub fn phase_gate() -> ComplexMatrix {
    ComplexMatrix::diag(&[C64::new(1.0, 0.0), C64::new(0.0, 1.0)])
}

pub fn pauli_mod_phase() -> Vec<ComplexMatrix> {
    let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2");
    let z = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).expect("2x2");
    let y = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => C64::new(0.0, -1.0),
        (1, 0) => C64::new(0.0, 1.0),
        _ => C64::new(0.0, 0.0),
    });
    vec![ComplexMatrix::identity(2), x, y, z]
}

fn rotation_2d(theta: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    ComplexMatrix::from_real(2, 2, &[c, -s, s, c]).expect("2x2")
}

fn signed_permutation(images: &[usize], signs: &[f64]) -> ComplexMatrix {
    let d = images.len();
    let mut m = ComplexMatrix::zeros(d, d);
    for (j, (&i, &s)) in images.iter().zip(signs).enumerate() {
        m[(i, j)] = C64::new(s, 0.0);
    }
    m
}

/// Signed permutation matrices of size `d`: a transposition, a cycle and one sign flip.
pub fn hyperoctahedral(d: usize) -> Vec<ComplexMatrix> {
    let ones = vec![1.0; d];
    let mut flip = ones.clone();
    flip[0] = -1.0;
    let ident: Vec<usize> = (0..d).collect();
    let cycle: Vec<usize> = (0..d).map(|j| (j + 1) % d).collect();
    vec![
        signed_permutation(Permutation::transposition(d, 0, 1).images(), &ones),
        signed_permutation(&cycle, &ones),
        signed_permutation(&ident, &flip),
    ]
}

/// `S_{d+1}` acting on the sum-zero hyperplane of `ℝ^{d+1}`, in an orthonormal basis.
pub fn symmetric_standard(d: usize) -> Vec<ComplexMatrix> {
    let n = d + 1;
    // Helmert basis: v_k ∝ (1,…,1, −k, 0,…) with k ones.
    let basis: Vec<Vec<f64>> = (1..n)
        .map(|k| {
            let norm = ((k * (k + 1)) as f64).sqrt();
            (0..n)
                .map(|i| {
                    if i < k {
                        1.0 / norm
                    } else if i == k {
                        -(k as f64) / norm
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let rep = |images: &[usize]| {
        ComplexMatrix::from_fn(d, d, |a, b| {
            let moved: f64 = (0..n).map(|i| basis[a][images[i]] * basis[b][i]).sum();
            C64::new(moved, 0.0)
        })
    };
    let transposition: Vec<usize> = Permutation::transposition(n, 0, 1).images().to_vec();
    let cycle: Vec<usize> = (0..n).map(|j| (j + 1) % n).collect();
    vec![rep(&transposition), rep(&cycle)]
}

/// Rotation group of the icosahedron (order 60) in `SO(3)`.
pub fn icosahedral() -> Vec<ComplexMatrix> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let inv = 1.0 / phi;
    let three_cycle = signed_permutation(&[1, 2, 0], &[1.0; 3]);
    let five_fold =
        ComplexMatrix::from_real(3, 3, &[1.0, -phi, inv, phi, inv, -1.0, inv, 1.0, phi])
            .expect("3x3")
            .scale_real(0.5);
    vec![three_cycle, five_fold]
}

/// Rotation group of the tetrahedron (order 12) in `SO(3)`.
pub fn tetrahedral() -> Vec<ComplexMatrix> {
    vec![
        signed_permutation(&[1, 2, 0], &[1.0; 3]),
        signed_permutation(&[0, 1, 2], &[-1.0, -1.0, 1.0]),
    ]
}

/// Generators for a catalogued group.
pub fn named_generators(name: &str) -> Result<Vec<ComplexMatrix>> {
    Ok(match name {
        "clifford1q" => vec![hadamard(), phase_gate()],
        "pauli1q" => pauli_mod_phase(),
        "monomial3" => monomial::generators(3),
        "dihedral3" => vec![
            rotation_2d(2.0 * std::f64::consts::PI / 3.0),
            signed_permutation(&[0, 1], &[1.0, -1.0]),
        ],
        "icosahedral" => icosahedral(),
        "hyperoctahedral2" => hyperoctahedral(2),
        "hyperoctahedral3" => hyperoctahedral(3),
        "symmetric-standard3" => symmetric_standard(3),
        "tetrahedral" => tetrahedral(),
        other => {
            return Err(Error::Precondition(format!(
                "unknown group {other:?}; known: {}",
                NAMES.join(", ")
            )))
        }
    })
}

/// Picks one representative per global phase: the first entry of largest
/// modulus is rotated onto the positive real axis.
pub fn phase_normalized(u: &ComplexMatrix) -> ComplexMatrix {
    let mut best = 0;
    for (i, z) in u.data().iter().enumerate() {
        if z.norm() > u.data()[best].norm() + 1e-9 {
            best = i;
        }
    }
    let z = u.data()[best];
    u.scale(z.conj() / z.norm())
}

/// Deduplicates a list of unitaries up to global phase, keeping first occurrences.
pub fn modulo_phase(elements: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    let normalized: Vec<(ComplexMatrix, f64)> = elements
        .iter()
        .map(|u| (phase_normalized(u), 1.0))
        .collect();
    crate::designs::merge_equal(normalized)
        .into_iter()
        .map(|(u, _)| u)
        .collect()
}
