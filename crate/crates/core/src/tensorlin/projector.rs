//! Orthogonal projectors on `(ℂ^d)^{⊗t}`.

use super::matrix::{ComplexMatrix, C64, ONE, ZERO};
use super::perm::{
    apply_perm_combination_left, symmetric_group_character, tensor_index_map, Permutation,
    YoungDiagram, MAX_ORDER,
};
use crate::error::{Error, Result};

const IDEMPOTENCY_TOL: f64 = 1e-10;
const HERMITICITY_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-8;

/// An orthogonal projector together with the dimension of its range.
#[derive(Clone, Debug)]
pub struct Projector {
    matrix: ComplexMatrix,
    subspace_dim: usize,
}

impl Projector {
    /// Symmetrizes `matrix` and checks the projector invariants with a dense product.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let matrix = matrix.hermitian_part();
        let square = &matrix * &matrix;
        let idem = square.max_abs_diff(&matrix);
        if idem > IDEMPOTENCY_TOL {
            return Err(Error::InvalidProjector(format!("‖P² − P‖ = {idem:.3e}")));
        }
        Self::with_trace_check(matrix)
    }

    fn with_trace_check(matrix: ComplexMatrix) -> Result<Self> {
        let herm = matrix.hermiticity_deviation();
        if herm > HERMITICITY_TOL {
            return Err(Error::InvalidProjector(format!("‖P − P†‖ = {herm:.3e}")));
        }
        let tr = matrix.trace().re;
        let rounded = tr.round();
        if (tr - rounded).abs() > TRACE_TOL || rounded < 0.0 {
            return Err(Error::InvalidProjector(format!("non-integral trace {tr}")));
        }
        Ok(Self {
            matrix,
            subspace_dim: rounded as usize,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn subspace_dim(&self) -> usize {
        self.subspace_dim
    }

    pub fn complement(&self) -> Result<Projector> {
        let n = self.matrix.rows();
        Projector::new(&ComplexMatrix::identity(n) - &self.matrix)
    }

    /// `self − other`, for nested projectors `other ≤ self`.
    pub fn minus(&self, other: &Projector) -> Result<Projector> {
        Projector::new(&self.matrix - &other.matrix)
    }
}

/// The isotypic projector `P_γ = (dim γ / t!) Σ_π χ_γ(π) R(π)` in
/// permutation-combination form, cheap to apply without a dense matrix.
#[derive(Clone, Debug)]
pub struct SectorProjector {
    pub gamma: YoungDiagram,
    pub d: usize,
    pub t: usize,
    /// Dimension of the S_t irrep (the multiplicity space).
    pub multiplicity: usize,
    pub perms: Vec<Permutation>,
    pub maps: Vec<Vec<usize>>,
    pub coeffs: Vec<C64>,
}

impl SectorProjector {
    pub fn new(gamma: &YoungDiagram, d: usize) -> Result<Self> {
        let t = gamma.boxes();
        if t > MAX_ORDER {
            return Err(Error::UnsupportedOrder {
                t,
                reason: "Young projectors are built for t ≤ 4",
            });
        }
        if gamma.num_rows() > d {
            return Err(Error::Precondition(format!(
                "{gamma} has more than d = {d} rows"
            )));
        }
        let perms = Permutation::all(t);
        let multiplicity = gamma.symmetric_group_dim()?;
        let norm = multiplicity as f64 / perms.len() as f64;
        let mut coeffs = Vec::with_capacity(perms.len());
        for p in &perms {
            coeffs.push(C64::new(
                norm * symmetric_group_character(gamma, &p.cycle_type())?,
                0.0,
            ));
        }
        let maps = perms.iter().map(|p| tensor_index_map(p, d)).collect();
        Ok(Self {
            gamma: gamma.clone(),
            d,
            t,
            multiplicity,
            perms,
            maps,
            coeffs,
        })
    }

    pub fn dim(&self) -> usize {
        self.d.pow(self.t as u32)
    }

    /// `P_γ · m`.
    pub fn apply_left(&self, m: &ComplexMatrix) -> ComplexMatrix {
        apply_perm_combination_left(&self.maps, &self.coeffs, m)
    }

    /// `m · P_γ`.
    pub fn apply_right(&self, m: &ComplexMatrix) -> ComplexMatrix {
        // P_γ is Hermitian: m P = (P m†)†.
        self.apply_left(&m.adjoint()).adjoint()
    }

    pub fn dense(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for (map, &c) in self.maps.iter().zip(&self.coeffs) {
            for (x, &y) in map.iter().enumerate() {
                m[(y, x)] += c;
            }
        }
        m
    }

    /// `Tr(P_γ R(τ)) = (dim γ / t!) Σ_ρ χ_γ(ρ) d^{#cycles(ρτ)}`.
    pub fn trace_with_perm(&self, tau: &Permutation) -> f64 {
        self.perms
            .iter()
            .zip(&self.coeffs)
            .map(|(rho, c)| c.re * (self.d as f64).powi(rho.compose(tau).cycle_count() as i32))
            .sum()
    }
}

/// Isotypic projector onto `𝒦_γ ⊗ ℋ_γ ⊂ (ℂ^d)^{⊗t}`.
pub fn young_projector(gamma: &YoungDiagram, d: usize) -> Result<Projector> {
    let sector = SectorProjector::new(gamma, d)?;
    let matrix = sector.dense().hermitian_part();
    let square = sector.apply_left(&matrix);
    let idem = square.max_abs_diff(&matrix);
    if idem > IDEMPOTENCY_TOL {
        return Err(Error::InvalidProjector(format!(
            "‖P² − P‖ = {idem:.3e} for {gamma}"
        )));
    }
    Projector::with_trace_check(matrix)
}

/// `P₁ = Σ_j |jj⟩⟨jj|`.
pub fn diagonal_pair_projector(d: usize) -> Result<Projector> {
    if d < 2 {
        return Err(Error::Precondition("d ≥ 2 required".into()));
    }
    let n = d * d;
    let mut m = ComplexMatrix::zeros(n, n);
    for j in 0..d {
        m[(j * d + j, j * d + j)] = ONE;
    }
    Projector::new(m)
}

/// The maximally entangled vector `(1/√d) Σ_j |jj⟩`.
pub fn bell_vector(d: usize) -> Vec<C64> {
    let mut v = vec![ZERO; d * d];
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    for j in 0..d {
        v[j * d + j] = amp;
    }
    v
}

/// `P_t = |ψ⟩⟨ψ|` for the Bell vector.
pub fn bell_projector(d: usize) -> Result<Projector> {
    if d < 2 {
        return Err(Error::Precondition("d ≥ 2 required".into()));
    }
    let v = bell_vector(d);
    Projector::new(ComplexMatrix::outer(&v, &v))
}

pub fn symmetric_projector(d: usize) -> Result<Projector> {
    young_projector(&YoungDiagram::new(vec![2])?, d)
}

pub fn antisymmetric_projector(d: usize) -> Result<Projector> {
    young_projector(&YoungDiagram::new(vec![1, 1])?, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensorlin::perm::factor_permutation_operator;

    #[test]
    fn symmetric_and_antisymmetric_traces() {
        assert_eq!(
            young_projector(&YoungDiagram::new(vec![2]).unwrap(), 2)
                .unwrap()
                .subspace_dim(),
            3
        );
        assert_eq!(
            young_projector(&YoungDiagram::new(vec![1, 1]).unwrap(), 3)
                .unwrap()
                .subspace_dim(),
            3
        );
    }

    #[test]
    fn completeness_t3_d3() {
        let total: usize = YoungDiagram::sectors(3, 3)
            .iter()
            .map(|g| young_projector(g, 3).unwrap().subspace_dim())
            .sum();
        assert_eq!(total, 27);
    }

    #[test]
    fn projectors_resolve_identity_and_are_orthogonal() {
        for t in 1..=4 {
            for d in 1..=5usize {
                if d.pow(t as u32) > 256 {
                    continue;
                }
                let ps: Vec<_> = YoungDiagram::sectors(t, d)
                    .iter()
                    .map(|g| young_projector(g, d).unwrap().into_matrix())
                    .collect();
                let n = d.pow(t as u32);
                let mut sum = ComplexMatrix::zeros(n, n);
                for p in &ps {
                    sum += p;
                }
                assert!(
                    sum.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-9,
                    "t={t} d={d}"
                );
                for (a, pa) in ps.iter().enumerate() {
                    for (b, pb) in ps.iter().enumerate() {
                        if a != b {
                            assert!((pa * pb).max_abs() < 1e-9);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn two_box_projectors_match_swap_formulas() {
        for d in 2..=4 {
            let swap = factor_permutation_operator(&Permutation::transposition(2, 0, 1), d);
            let id = ComplexMatrix::identity(d * d);
            let sym = (&id + &swap).scale_real(0.5);
            let anti = (&id - &swap).scale_real(0.5);
            assert!(symmetric_projector(d).unwrap().matrix().max_abs_diff(&sym) < 1e-14);
            assert!(
                antisymmetric_projector(d)
                    .unwrap()
                    .matrix()
                    .max_abs_diff(&anti)
                    < 1e-14
            );
        }
    }

    #[test]
    fn diagonal_pair_projector_properties() {
        let p = diagonal_pair_projector(2).unwrap();
        assert_eq!(p.subspace_dim(), 2);
        assert_eq!(p.matrix()[(0, 0)], ONE);
        assert_eq!(p.matrix()[(3, 3)], ONE);
        assert_eq!(p.matrix()[(1, 1)], ZERO);
        for d in 2..=6 {
            assert_eq!(diagonal_pair_projector(d).unwrap().subspace_dim(), d);
        }
        for d in 2..=5 {
            let p1 = diagonal_pair_projector(d).unwrap();
            let ps = symmetric_projector(d).unwrap();
            assert!((ps.matrix() * p1.matrix()).max_abs_diff(p1.matrix()) < 1e-14);
        }
        assert!(diagonal_pair_projector(1).is_err());
    }

    #[test]
    fn bell_projector_inside_diagonal_span() {
        for d in 2..=5 {
            let pt = bell_projector(d).unwrap();
            assert_eq!(pt.subspace_dim(), 1);
            let p1 = diagonal_pair_projector(d).unwrap();
            assert!((pt.matrix() * p1.matrix()).max_abs_diff(pt.matrix()) < 1e-14);
        }
    }

    #[test]
    fn rejects_too_many_rows_or_boxes() {
        assert!(young_projector(&YoungDiagram::new(vec![1, 1, 1]).unwrap(), 2).is_err());
        assert!(young_projector(&YoungDiagram::new(vec![5]).unwrap(), 2).is_err());
    }

    #[test]
    fn trace_with_perm_matches_dense() {
        let g = YoungDiagram::new(vec![2, 1]).unwrap();
        let s = SectorProjector::new(&g, 3).unwrap();
        let dense = s.dense();
        for tau in Permutation::all(3) {
            let r = factor_permutation_operator(&tau, 3);
            let expected = (&dense * &r).trace().re;
            assert!((s.trace_with_perm(&tau) - expected).abs() < 1e-10);
        }
    }
}
