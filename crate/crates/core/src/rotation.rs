//! An explicit 2-design in every dimension: `G(3,1,d)` composed with a
//! rotated copy `Q G(3,1,d) Q†`, where `Q = exp(i t* B)` is tuned so that the
//! diagonal-pair projector overlaps its rotation by exactly `2d/(d+1)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::designs::{product_design, WeightedUnitarySet};
use crate::error::{Error, Result};
use crate::tensorlin::{ComplexMatrix, C64};

/// Largest dimension accepted by the constructor.
pub const MAX_DIM: usize = 64;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `q(d) = Σ_j sin(4πj²/d)` in closed form.
pub fn gauss_sine_sum(d: usize) -> f64 {
    let df = d as f64;
    match d % 8 {
        1 | 2 | 4 | 5 => 0.0,
        7 => df.sqrt(),
        3 => -df.sqrt(),
        _ => (2.0 * df).sqrt(),
    }
}

/// `Σ_{j,k} cos(8πjk/d) = d·gcd(4, d)`.
pub fn gauss_cosine_double_sum(d: usize) -> f64 {
    (d * gcd(4, d)) as f64
}

/// `F_{jk} = e^{−2πijk/d}/√d`.
pub fn dft(d: usize) -> ComplexMatrix {
    let norm = 1.0 / (d as f64).sqrt();
    ComplexMatrix::from_fn(d, d, |j, k| {
        C64::from_polar(norm, -2.0 * PI * ((j * k) % d) as f64 / d as f64)
    })
}

/// `B = ((1+i)/2) F + ((1−i)/2) F†`, a real symmetric involution.
pub fn involution_from_dft(d: usize) -> ComplexMatrix {
    let f = dft(d);
    let plus = C64::new(0.5, 0.5);
    let minus = C64::new(0.5, -0.5);
    let mut b = &(&f * plus) + &(&f.adjoint() * minus);
    for z in b.data_mut() {
        z.im = 0.0;
    }
    b
}

/// `Q(t) = cos t · 1 + i sin t · B`.
pub fn rotation_path(d: usize, t: f64) -> ComplexMatrix {
    let b = involution_from_dft(d);
    let mut q = &b * C64::new(0.0, t.sin());
    for j in 0..d {
        q[(j, j)] += C64::new(t.cos(), 0.0);
    }
    q
}

/// `Σ_{j,k} |u_{jk}|⁴ = Tr(P₁ u^{⊗2} P₁ u^{†⊗2})`.
pub fn overlap(u: &ComplexMatrix) -> f64 {
    u.data().iter().map(|z| z.norm_sqr().powi(2)).sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct RotationParameters {
    pub d: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub q_d: f64,
    pub delta: f64,
    pub x_star: f64,
    pub t_star: f64,
    /// `|overlap(Q(t*)) − 2d/(d+1)|`.
    pub residual: f64,
}

impl RotationParameters {
    /// `f(x) = a x² + b x + c`.
    pub fn f(&self, x: f64) -> f64 {
        (self.a * x + self.b) * x + self.c
    }

    /// The overlap as a function of `x = sin² t`.
    pub fn overlap_polynomial(&self, x: f64) -> f64 {
        (self.a * x + self.b) * x + self.d as f64
    }
}

/// Verification gate on the solved overlap.
pub const OVERLAP_TOL: f64 = 1e-9;

pub fn solve_parameters(d: usize) -> Result<RotationParameters> {
    if d < 2 {
        return Err(Error::Precondition(format!(
            "the rotation design needs d ≥ 2, got {d}"
        )));
    }
    let df = d as f64;
    let q_d = gauss_sine_sum(d);
    let g = gcd(4, d) as f64;
    let a = (2.0 * df - 1.0) / 2.0 - 2.0 * q_d / df - g / (2.0 * df);
    let b = -2.0 * (df - 1.0) + 2.0 * q_d / df;
    let c = df * (df - 1.0) / (df + 1.0);
    let delta = b * b - 4.0 * a * c;
    let x_star = if a.abs() <= 1e-12 * b.abs().max(c.abs()) {
        -c / b
    } else {
        (-b - delta.max(0.0).sqrt()) / (2.0 * a)
    };
    if !(x_star > 0.0 && x_star < 1.0) {
        return Err(Error::NoRoot(format!(
            "x* = {x_star} outside (0, 1) at d = {d}"
        )));
    }
    let t_star = x_star.sqrt().asin();
    let target = 2.0 * df / (df + 1.0);
    let residual = (overlap(&rotation_path(d, t_star)) - target).abs();
    if residual > OVERLAP_TOL {
        return Err(Error::NoRoot(format!(
            "overlap residual {residual:e} at d = {d}"
        )));
    }
    Ok(RotationParameters {
        d,
        a,
        b,
        c,
        q_d,
        delta,
        x_star,
        t_star,
        residual,
    })
}

/// The lazy product `{Q g Q†} · {g}` over `g ∈ G(3,1,d)`, `Q = Q(t*)`.
pub fn construct_2design(d: usize) -> Result<(WeightedUnitarySet, RotationParameters)> {
    if d > MAX_DIM {
        return Err(Error::CapExceeded {
            what: "rotation design dimension",
            size: d as u128,
            cap: MAX_DIM as u128,
        });
    }
    let params = solve_parameters(d)?;
    let q = rotation_path(d, params.t_star);
    let set = product_design(vec![
        WeightedUnitarySet::monomial(d, Some(q))?,
        WeightedUnitarySet::monomial(d, None)?,
    ])?;
    Ok((set, params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::random_unitary;
    use crate::tensorlin::{diagonal_pair_projector, symmetric_projector};
    use nalgebra::{DMatrix, SymmetricEigen};

    #[test]
    fn closed_forms_match_sums() {
        for d in 2..=64usize {
            let sine: f64 = (0..d)
                .map(|j| (4.0 * PI * (j * j) as f64 / d as f64).sin())
                .sum();
            assert!((sine - gauss_sine_sum(d)).abs() < 1e-9, "d={d}");
            let mut cos = 0.0;
            for j in 0..d {
                for k in 0..d {
                    cos += (8.0 * PI * (j * k) as f64 / d as f64).cos();
                }
            }
            assert!((cos - gauss_cosine_double_sum(d)).abs() < 1e-8, "d={d}");
        }
        assert_eq!(gauss_sine_sum(5), 0.0);
        assert_eq!(gauss_sine_sum(3), -(3f64).sqrt());
        assert_eq!(gauss_cosine_double_sum(4), 16.0);
        assert_eq!(gauss_cosine_double_sum(6), 12.0);
    }

    #[test]
    fn dft_pinned_at_four() {
        let f = dft(4);
        let expect = [[1, 1, 1, 1], [1, -3, -1, 3], [1, -1, 1, -1], [1, 3, -1, -3]];
        // Encoded as powers of i: 1 ↦ 1, −1 ↦ −1, 3 ↦ −i, −3 ↦ i.
        let val = |k: i32| match k {
            1 => C64::new(0.5, 0.0),
            -1 => C64::new(-0.5, 0.0),
            3 => C64::new(0.0, 0.5),
            _ => C64::new(0.0, -0.5),
        };
        for j in 0..4 {
            for k in 0..4 {
                assert!((f[(j, k)] - val(expect[j][k])).norm() < 1e-15, "({j},{k})");
            }
        }
    }

    #[test]
    fn involution_properties() {
        for d in 2..=16 {
            let b = involution_from_dft(d);
            let raw = &(&dft(d) * C64::new(0.5, 0.5)) + &(&dft(d).adjoint() * C64::new(0.5, -0.5));
            assert!(raw.max_imag() < 1e-12);
            assert!(b.max_abs_diff(&b.transpose()) < 1e-12);
            assert!((&b * &b).max_abs_diff(&ComplexMatrix::identity(d)) < 1e-10);
        }
        let b = involution_from_dft(5);
        let eig = SymmetricEigen::new(DMatrix::from_fn(5, 5, |i, j| b[(i, j)].re));
        for v in eig.eigenvalues.iter() {
            assert!((v.abs() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn path_matches_exponential() {
        let d = 4;
        let b = involution_from_dft(d);
        let eig = SymmetricEigen::new(DMatrix::from_fn(d, d, |i, j| b[(i, j)].re));
        for k in 0..10 {
            let t = 0.37 * k as f64 - 1.1;
            let expo = ComplexMatrix::from_fn(d, d, |i, j| {
                (0..d)
                    .map(|e| {
                        C64::from_polar(1.0, t * eig.eigenvalues[e])
                            * eig.eigenvectors[(i, e)]
                            * eig.eigenvectors[(j, e)]
                    })
                    .sum()
            });
            let q = rotation_path(d, t);
            assert!(q.max_abs_diff(&expo) < 1e-10);
            assert!(q.is_unitary(1e-12));
        }
        assert!(rotation_path(d, 0.0).max_abs_diff(&ComplexMatrix::identity(d)) < 1e-15);
        assert!(rotation_path(d, PI / 2.0).max_abs_diff(&(&b * C64::new(0.0, 1.0))) < 1e-15);
    }

    #[test]
    fn overlap_cases() {
        assert!((overlap(&ComplexMatrix::identity(5)) - 5.0).abs() < 1e-15);
        assert!((overlap(&dft(7)) - 1.0).abs() < 1e-12);
        let p1 = diagonal_pair_projector(4).unwrap();
        for s in 0..5 {
            let u = random_unitary(4, s);
            let u2 = u.tensor_power(2);
            let rotated = &(&u2 * p1.matrix()) * &u2.adjoint();
            assert!((overlap(&u) - p1.matrix().hs_inner(&rotated).re).abs() < 1e-10);
        }
    }

    #[test]
    fn overlap_is_quadratic_in_sin_squared() {
        for d in 2..=12 {
            let p = solve_parameters(d).unwrap();
            for k in 0..100 {
                let t = k as f64 * PI / 200.0;
                let x = t.sin().powi(2);
                assert!(
                    (overlap(&rotation_path(d, t)) - p.overlap_polynomial(x)).abs() < 1e-9,
                    "d={d}"
                );
            }
        }
    }

    #[test]
    fn parameters_are_consistent() {
        for d in 2..=32 {
            let p = solve_parameters(d).unwrap();
            assert!(p.c > 0.0 && p.f(0.0) > 0.0);
            assert!(p.f(1.0) < 0.0);
            assert!(p.delta > 0.0);
            assert!(p.f(p.x_star).abs() < 1e-12);
        }
        let p3 = solve_parameters(3).unwrap();
        assert!((overlap(&rotation_path(3, p3.t_star)) - 1.5).abs() < 1e-9);
        assert!(solve_parameters(1).is_err());
    }

    #[test]
    fn overlap_symmetry_at_solution() {
        for d in 2..=5 {
            let p = solve_parameters(d).unwrap();
            let q2 = rotation_path(d, p.t_star).tensor_power(2);
            let p1 = diagonal_pair_projector(d).unwrap();
            let ps = symmetric_projector(d).unwrap();
            let p2 = ps.minus(&p1).unwrap();
            let projs = [p1.matrix(), p2.matrix()];
            for pi in projs {
                let rotated = &(&q2 * pi) * &q2.adjoint();
                for pj in projs {
                    let lhs = rotated.hs_inner(pj).re;
                    let rhs = pi.trace().re * pj.trace().re / ps.matrix().trace().re;
                    assert!((lhs - rhs).abs() < 1e-8, "d={d}");
                }
            }
        }
    }
}
