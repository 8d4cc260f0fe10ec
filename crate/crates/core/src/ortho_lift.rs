//! Lifting exact orthogonal designs to unitary designs via a diagonal phase
//! `W`, and relative-error (ε) bookkeeping for approximate designs.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;

use crate::designs::{
    product_design, twirl_apply, ProbeBasis, ProbeSet, Provenance, WeightedUnitarySet,
    MATERIALIZATION_CAP,
};
use crate::error::{Error, Result};
use crate::haar::{haar_orthogonal_twirl, haar_unitary_twirl};
use crate::tensorlin::{check_caps, conjugate_tensor_power, ComplexMatrix, C64};

/// Imaginary parts above this reject a lift input.
pub const REAL_TOL: f64 = 1e-10;
pub const ALPHA_TOL: f64 = 1e-12;
/// Relative eigenvalue cutoff defining the support of a Choi matrix.
pub const SUPPORT_TOL: f64 = 1e-10;

/// `q(α) = |Σ_{j<d} e^{2πiαj/d}|² = sin²(πα)/sin²(πα/d)`.
pub fn q_alpha(d: usize, alpha: f64) -> f64 {
    let df = d as f64;
    let den = (PI * alpha / df).sin();
    if den.abs() < 1e-6 {
        // Near the removable singularity the direct sum is exact enough.
        let (mut re, mut im) = (0.0, 0.0);
        for j in 0..d {
            let (s, c) = (2.0 * PI * alpha * j as f64 / df).sin_cos();
            re += c;
            im += s;
        }
        return re * re + im * im;
    }
    let num = (PI * alpha).sin();
    (num / den).powi(2)
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftParameters {
    pub d: usize,
    pub alpha: f64,
    /// `|q(α) − 2d/(d+1)|`.
    pub residual: f64,
    #[serde(skip)]
    pub w: ComplexMatrix,
}

/// `W = diag(e^{2πi jα/(2d)})`.
pub fn phase_matrix(d: usize, alpha: f64) -> ComplexMatrix {
    let phases: Vec<C64> = (0..d)
        .map(|j| C64::from_polar(1.0, 2.0 * PI * j as f64 * alpha / (2 * d) as f64))
        .collect();
    ComplexMatrix::diag(&phases)
}

/// Bisection for `q(α) = 2d/(d+1)` on `[0, 1]`, where `q` falls from `d²` to `0`.
pub fn solve_alpha(d: usize) -> Result<LiftParameters> {
    if d < 2 {
        return Err(Error::Precondition(format!(
            "the lift needs d ≥ 2, got {d}"
        )));
    }
    let target = 2.0 * d as f64 / (d as f64 + 1.0);
    let f = |a: f64| q_alpha(d, a) - target;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if !(f(lo) > 0.0 && f(hi) < 0.0) {
        return Err(Error::NoRoot(format!(
            "q(α) − target does not change sign on [0,1] at d = {d}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha = if f(lo).abs() <= f(hi).abs() { lo } else { hi };
    let residual = f(alpha).abs();
    if residual > ALPHA_TOL {
        return Err(Error::NoRoot(format!("α residual {residual:e} at d = {d}")));
    }
    Ok(LiftParameters {
        d,
        alpha,
        residual,
        w: phase_matrix(d, alpha),
    })
}

/// `W^{⊗t} T_O(W^{†⊗t} m W^{⊗t}) W^{†⊗t}`.
pub fn conjugated_orthogonal_twirl(
    w: &ComplexMatrix,
    t: usize,
    m: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let inner = conjugate_tensor_power(&w.adjoint(), t, m);
    Ok(conjugate_tensor_power(
        w,
        t,
        &haar_orthogonal_twirl(t, w.rows(), &inner)?,
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct CompositionReport {
    pub dimension: usize,
    pub t: usize,
    pub alpha: f64,
    pub basis: ProbeBasis,
    pub probes: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Set for `t = 3` below `d = 5`, where the identity is measured but not expected.
    pub informational: bool,
}

/// Default probe count for `t = 3`.
pub const T3_PROBES: usize = 100;

/// Checks `T_U = T_{O^W} ∘ T_O` at order `t ∈ {2, 3}`. `t = 2` probes the full
/// matrix-unit basis; `t = 3` uses `probes` (at least 100) Gaussian probes.
pub fn verify_composition_identity(
    d: usize,
    t: usize,
    tol: f64,
    probes: Option<usize>,
    seed: u64,
) -> Result<CompositionReport> {
    if !(2..=3).contains(&t) {
        return Err(Error::UnsupportedOrder {
            t,
            reason: "the composition identity is checked for t ∈ {2, 3}",
        });
    }
    let n = check_caps(d, t)?;
    let lift = solve_alpha(d)?;
    let requested = if t == 3 {
        Some(probes.unwrap_or(T3_PROBES).max(T3_PROBES))
    } else {
        probes
    };
    let probe_set = ProbeSet::new(n, requested, seed);
    let deviations: Vec<f64> = (0..probe_set.count)
        .into_par_iter()
        .map(|k| -> Result<f64> {
            let m = probe_set.probe(k);
            let lhs = haar_unitary_twirl(t, d, &m)?;
            let rhs = conjugated_orthogonal_twirl(&lift.w, t, &haar_orthogonal_twirl(t, d, &m)?)?;
            Ok(lhs.max_abs_diff(&rhs))
        })
        .collect::<Result<_>>()?;
    let max_deviation = deviations.into_iter().fold(0.0, f64::max);
    Ok(CompositionReport {
        dimension: d,
        t,
        alpha: lift.alpha,
        basis: probe_set.basis,
        probes: probe_set.count,
        max_deviation,
        tolerance: tol,
        pass: max_deviation <= tol,
        informational: t == 3 && d < 5,
    })
}

/// `𝒱^W · 𝒱` for a real orthogonal weighted set `𝒱`.
pub fn lift_design(
    v: &WeightedUnitarySet,
    t: usize,
) -> Result<(WeightedUnitarySet, LiftParameters)> {
    if !(1..=3).contains(&t) {
        return Err(Error::UnsupportedOrder {
            t,
            reason: "lifts are defined for t ≤ 3",
        });
    }
    let d = v.dim();
    let elements = v.materialize(MATERIALIZATION_CAP)?;
    let mut real = Vec::with_capacity(elements.len());
    for (i, (u, w)) in elements.into_iter().enumerate() {
        let imag = u.max_imag();
        let projected = u.map(|z| C64::new(z.re, 0.0));
        let deviation = projected.unitarity_deviation();
        if imag > REAL_TOL || deviation > crate::tensorlin::matrix::UNITARY_TOL {
            return Err(Error::NotRealOrthogonal {
                index: i,
                imag,
                deviation,
            });
        }
        real.push((projected, w));
    }
    let lift = solve_alpha(d)?;
    let w_adj = lift.w.adjoint();
    let conjugated: Vec<(ComplexMatrix, f64)> = real
        .iter()
        .map(|(u, wt)| (&(&lift.w * u) * &w_adj, *wt))
        .collect();
    let (base, rotated) = if matches!(v.provenance(), Provenance::Group) {
        let strip = |v: Vec<(ComplexMatrix, f64)>| v.into_iter().map(|(u, _)| u).collect();
        (
            WeightedUnitarySet::group(strip(real))?,
            WeightedUnitarySet::group(strip(conjugated))?,
        )
    } else {
        (
            WeightedUnitarySet::explicit(real)?,
            WeightedUnitarySet::explicit(conjugated)?,
        )
    };
    Ok((product_design(vec![rotated, base])?, lift))
}

/// `2ε + ε²`.
pub fn epsilon_propagate(eps: f64) -> Result<f64> {
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::Precondition(format!(
            "ε must be non-negative, got {eps}"
        )));
    }
    Ok(2.0 * eps + eps * eps)
}

/// `C = Σ_{ab} E_ab ⊗ Φ(E_ab)` for a channel on `n × n` matrices.
pub fn choi_matrix(
    n: usize,
    channel: impl Fn(&ComplexMatrix) -> Result<ComplexMatrix> + Sync,
) -> Result<ComplexMatrix> {
    let blocks: Vec<ComplexMatrix> = (0..n * n)
        .into_par_iter()
        .map(|k| channel(&ComplexMatrix::unit(n, k / n, k % n)))
        .collect::<Result<_>>()?;
    let big = n * n;
    let mut c = ComplexMatrix::zeros(big, big);
    for (k, block) in blocks.iter().enumerate() {
        let (a, b) = (k / n, k % n);
        for i in 0..n {
            for j in 0..n {
                c[(a * n + i, b * n + j)] = block[(i, j)];
            }
        }
    }
    Ok(c)
}

/// Smallest `ε` with `(1−ε) C_F ⪯ C_H ⪯ (1+ε) C_F`, or `∞` when `supp C_H ⊄ supp C_F`.
pub fn estimate_epsilon_from_choi(c_f: &ComplexMatrix, c_h: &ComplexMatrix) -> f64 {
    let f = c_f.hermitian_part().to_nalgebra();
    let h = c_h.hermitian_part().to_nalgebra();
    let eig = SymmetricEigen::new(f);
    let max = eig.eigenvalues.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let keep: Vec<usize> = (0..eig.eigenvalues.len())
        .filter(|&i| eig.eigenvalues[i] > SUPPORT_TOL * max)
        .collect();
    if keep.is_empty() {
        return f64::INFINITY;
    }
    let n = h.nrows();
    let basis = DMatrix::from_fn(n, keep.len(), |r, c| eig.eigenvectors[(r, keep[c])]);
    // Component of C_H outside the support of C_F.
    let projector = &basis * basis.adjoint();
    let outside = DMatrix::<C64>::identity(n, n) - &projector;
    let leak = (&outside * &h * &outside)
        .iter()
        .fold(0.0f64, |m, z| m.max(z.norm()));
    let scale = h.iter().fold(0.0f64, |m, z| m.max(z.norm())).max(1.0);
    if leak > SUPPORT_TOL.sqrt() * scale {
        return f64::INFINITY;
    }
    let inv_sqrt: Vec<f64> = keep
        .iter()
        .map(|&i| 1.0 / eig.eigenvalues[i].sqrt())
        .collect();
    let reduced = basis.adjoint() * &h * &basis;
    let k = keep.len();
    let whitened = DMatrix::from_fn(k, k, |r, c| reduced[(r, c)] * (inv_sqrt[r] * inv_sqrt[c]));
    let whitened = (&whitened + whitened.adjoint()) * C64::new(0.5, 0.0);
    let lambdas = SymmetricEigen::new(whitened).eigenvalues;
    let (lo, hi) = lambdas
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &l| {
            (lo.min(l), hi.max(l))
        });
    (hi - 1.0).max(1.0 - lo).max(0.0)
}

/// ε of the set's `t`-fold twirl relative to the Haar twirl (`t ≤ 2`).
pub fn estimate_epsilon(v: &WeightedUnitarySet, t: usize) -> Result<f64> {
    if t == 0 || t > 2 {
        return Err(Error::UnsupportedOrder {
            t,
            reason: "ε is estimated for t ≤ 2",
        });
    }
    let n = check_caps(v.dim(), t)?;
    let d = v.dim();
    let c_f = choi_matrix(n, |m| twirl_apply(v, t, m))?;
    let c_h = choi_matrix(n, |m| haar_unitary_twirl(t, d, m))?;
    Ok(estimate_epsilon_from_choi(&c_f, &c_h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensorlin::bell_projector;

    #[test]
    fn q_endpoints() {
        for d in 2..=10 {
            assert!((q_alpha(d, 0.0) - (d * d) as f64).abs() < 1e-12);
            assert!(q_alpha(d, 1.0).abs() < 1e-12);
            // Both evaluation branches agree near the switch-over.
            let a = 1e-6 * d as f64 * 1.01 / PI;
            let direct: C64 = (0..d)
                .map(|j| C64::from_polar(1.0, 2.0 * PI * a * j as f64 / d as f64))
                .sum();
            assert!((q_alpha(d, a) - direct.norm_sqr()).abs() < 1e-9);
        }
    }

    #[test]
    fn w_hits_the_overlap() {
        for d in 2..=8 {
            let lift = solve_alpha(d).unwrap();
            assert!(lift.alpha > 0.0 && lift.alpha < 1.0);
            for j in 0..d {
                assert!((lift.w[(j, j)].norm() - 1.0).abs() < 1e-14);
            }
            let pt = bell_projector(d).unwrap();
            let w2 = lift.w.tensor_power(2);
            let rotated = &(&w2 * pt.matrix()) * &w2.adjoint();
            let overlap = rotated.hs_inner(pt.matrix()).re;
            assert!((overlap - 2.0 / (d * (d + 1)) as f64).abs() < 1e-10);
        }
    }

    #[test]
    fn propagate() {
        assert_eq!(epsilon_propagate(0.0).unwrap(), 0.0);
        assert!((epsilon_propagate(0.1).unwrap() - 0.21).abs() < 1e-15);
        assert_eq!(epsilon_propagate(0.5).unwrap(), 1.25);
        assert!(epsilon_propagate(-1.0).is_err());
    }

    #[test]
    fn composition_t2_small() {
        let r = verify_composition_identity(3, 2, 1e-9, None, 0).unwrap();
        assert_eq!(r.basis, ProbeBasis::MatrixUnits);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn non_real_input_rejected() {
        let u = crate::haar::random_unitary(2, 1);
        let v = WeightedUnitarySet::singleton(u).unwrap();
        assert!(matches!(
            lift_design(&v, 2),
            Err(Error::NotRealOrthogonal { .. })
        ));
    }

    #[test]
    fn epsilon_of_identity_channel_pair() {
        let c = choi_matrix(2, |m| Ok(m.clone())).unwrap();
        assert!(estimate_epsilon_from_choi(&c, &c) < 1e-12);
        let half = c.scale_real(0.5);
        assert!((estimate_epsilon_from_choi(&c, &half) - 0.5).abs() < 1e-12);
    }
}
