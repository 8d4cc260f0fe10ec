//! Exact Haar twirls over U(d) and O(d) by projection onto the commutant,
//! plus seeded Monte Carlo samplers used as independent references.
//!
//! The commutant of `{U^{⊗t}}` is spanned by the permutation operators
//! `R(π)`; the commutant of `{O^{⊗t}}` by the Brauer operators, one for each
//! pairing of the `2t` legs. Both are handled as pairings: a leg on the
//! output side (points `0..t`) or input side (points `t..2t`) is matched to
//! exactly one other leg, and the operator's matrix element is 1 iff every
//! matched pair of legs carries the same basis label.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::tensorlin::perm::{digits, from_digits, tensor_index_map};
use crate::tensorlin::{
    check_caps, ComplexMatrix, Permutation, SectorProjector, YoungDiagram, C64, ZERO,
};

/// Eigenvalues below this fraction of the largest are dropped from the Gram pseudo-inverse.
pub const GRAM_CUTOFF: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupTag {
    Unitary,
    Orthogonal,
}

/// A spanning set of the `t`-fold commutant together with its Gram data.
#[derive(Debug)]
pub struct SpanningOperatorSet {
    pub tag: GroupTag,
    pub t: usize,
    pub d: usize,
    /// Partner arrays over the `2t` legs.
    pub pairings: Vec<Vec<usize>>,
    /// Nonzero `(row, col)` positions of each operator (all entries are 1).
    support: Vec<Vec<(u32, u32)>>,
    /// `Tr(B_i† B_j) = d^{loops(i, j)}`.
    pub gram: DMatrix<f64>,
    gram_pinv: DMatrix<f64>,
    pub rank: usize,
    pub condition_number: f64,
}

impl SpanningOperatorSet {
    fn build(tag: GroupTag, t: usize, d: usize) -> Result<Self> {
        check_caps(d, t)?;
        let pairings = match tag {
            GroupTag::Unitary => Permutation::all(t)
                .iter()
                .map(permutation_pairing)
                .collect(),
            GroupTag::Orthogonal => {
                if t > 3 {
                    return Err(Error::UnsupportedOrder {
                        t,
                        reason: "orthogonal twirls are built for t ≤ 3",
                    });
                }
                all_pairings(2 * t)
            }
        };
        let support: Vec<_> = pairings.iter().map(|p| pairing_support(p, t, d)).collect();
        let k = pairings.len();
        let gram = DMatrix::from_fn(k, k, |i, j| {
            (d as f64).powi(loop_count(&pairings[i], &pairings[j]) as i32)
        });
        let (gram_pinv, rank, condition_number) = pseudo_inverse(&gram);
        if rank < k {
            log::warn!(
                "{tag:?} commutant at t={t}, d={d}: {k} spanning operators have rank {rank}; using pseudo-inverse"
            );
        }
        log::debug!("{tag:?} t={t} d={d}: Gram condition number {condition_number:.3e}");
        Ok(Self {
            tag,
            t,
            d,
            pairings,
            support,
            gram,
            gram_pinv,
            rank,
            condition_number,
        })
    }

    pub fn len(&self) -> usize {
        self.pairings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairings.is_empty()
    }

    /// Dense matrix of the `i`-th spanning operator.
    pub fn operator(&self, i: usize) -> ComplexMatrix {
        let n = self.d.pow(self.t as u32);
        let mut m = ComplexMatrix::zeros(n, n);
        for &(x, y) in &self.support[i] {
            m[(x as usize, y as usize)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Hilbert–Schmidt projection of `m` onto the span of the operators.
    pub fn project(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let n = self.d.pow(self.t as u32);
        assert_eq!((m.rows(), m.cols()), (n, n), "probe has the wrong size");
        let overlaps: Vec<C64> = self
            .support
            .iter()
            .map(|s| s.iter().map(|&(x, y)| m[(x as usize, y as usize)]).sum())
            .collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for (j, s) in self.support.iter().enumerate() {
            let coeff: C64 = (0..self.len())
                .map(|i| overlaps[i] * self.gram_pinv[(j, i)])
                .sum();
            if coeff == ZERO {
                continue;
            }
            for &(x, y) in s {
                out[(x as usize, y as usize)] += coeff;
            }
        }
        out
    }
}

/// Pairing of legs realizing `R(π)`: output slot `π(j)` is matched to input slot `j`.
pub fn permutation_pairing(pi: &Permutation) -> Vec<usize> {
    let t = pi.len();
    let mut partner = vec![0; 2 * t];
    for j in 0..t {
        let out = pi.apply(j);
        partner[out] = t + j;
        partner[t + j] = out;
    }
    partner
}

/// All perfect matchings of `n` points as partner arrays; `(n − 1)!!` of them.
pub fn all_pairings(n: usize) -> Vec<Vec<usize>> {
    fn rec(partner: &mut Vec<Option<usize>>, out: &mut Vec<Vec<usize>>) {
        let Some(first) = partner.iter().position(Option::is_none) else {
            out.push(partner.iter().map(|p| p.unwrap()).collect());
            return;
        };
        for other in first + 1..partner.len() {
            if partner[other].is_none() {
                partner[first] = Some(other);
                partner[other] = Some(first);
                rec(partner, out);
                partner[first] = None;
                partner[other] = None;
            }
        }
    }
    let mut out = Vec::new();
    if n.is_multiple_of(2) {
        rec(&mut vec![None; n], &mut out);
    }
    out
}

fn pairing_support(partner: &[usize], t: usize, d: usize) -> Vec<(u32, u32)> {
    let leaders: Vec<usize> = (0..2 * t).filter(|&i| i < partner[i]).collect();
    let count = d.pow(t as u32);
    let mut labels = vec![0; t];
    let mut legs = vec![0; 2 * t];
    (0..count)
        .map(|a| {
            digits(a, d, t, &mut labels);
            for (k, &i) in leaders.iter().enumerate() {
                legs[i] = labels[k];
                legs[partner[i]] = labels[k];
            }
            (
                from_digits(&legs[..t], d) as u32,
                from_digits(&legs[t..], d) as u32,
            )
        })
        .collect()
}

/// Number of closed loops after gluing two pairings on the same legs.
pub fn loop_count(a: &[usize], b: &[usize]) -> usize {
    let n = a.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for pairing in [a, b] {
        for (i, &j) in pairing.iter().enumerate() {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                parent[ri] = rj;
            }
        }
    }
    (0..n).filter(|&i| find(&mut parent, i) == i).count()
}

/// Eigenvalue-thresholded pseudo-inverse of a real symmetric matrix.
/// Returns `(G⁺, rank, condition number of the retained spectrum)`.
pub fn pseudo_inverse(g: &DMatrix<f64>) -> (DMatrix<f64>, usize, f64) {
    let eig = SymmetricEigen::new(g.clone());
    let max = eig.eigenvalues.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let cutoff = GRAM_CUTOFF * max;
    let k = g.nrows();
    let mut pinv = DMatrix::zeros(k, k);
    let mut rank = 0;
    let mut min_kept = f64::INFINITY;
    for (idx, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() <= cutoff {
            continue;
        }
        rank += 1;
        min_kept = min_kept.min(lambda.abs());
        let v = eig.eigenvectors.column(idx);
        pinv += (v * v.transpose()) / lambda;
    }
    (
        pinv,
        rank,
        if rank == 0 {
            f64::INFINITY
        } else {
            max / min_kept
        },
    )
}

type CacheKey = (GroupTag, usize, usize);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<SpanningOperatorSet>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<SpanningOperatorSet>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Memoized spanning set for `(tag, t, d)`.
pub fn spanning_set(tag: GroupTag, t: usize, d: usize) -> Result<Arc<SpanningOperatorSet>> {
    let key = (tag, t, d);
    if let Some(set) = cache()
        .read()
        .expect("spanning-set cache poisoned")
        .get(&key)
    {
        return Ok(Arc::clone(set));
    }
    let built = Arc::new(SpanningOperatorSet::build(tag, t, d)?);
    let mut guard = cache().write().expect("spanning-set cache poisoned");
    Ok(Arc::clone(guard.entry(key).or_insert(built)))
}

fn check_probe(t: usize, d: usize, m: &ComplexMatrix) -> Result<()> {
    let n = check_caps(d, t)?;
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.rows(),
        });
    }
    Ok(())
}

/// `∫ U^{⊗t} m U^{†⊗t} dU` over Haar-random `U ∈ U(d)`.
pub fn haar_unitary_twirl(t: usize, d: usize, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_probe(t, d, m)?;
    Ok(spanning_set(GroupTag::Unitary, t, d)?.project(m))
}

/// `∫ O^{⊗t} m O^{†⊗t} dO` over Haar-random `O ∈ O(d)`, `t ≤ 3`.
pub fn haar_orthogonal_twirl(t: usize, d: usize, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if t > 3 {
        return Err(Error::UnsupportedOrder {
            t,
            reason: "orthogonal twirls are built for t ≤ 3",
        });
    }
    check_probe(t, d, m)?;
    Ok(spanning_set(GroupTag::Orthogonal, t, d)?.project(m))
}

/// The Haar twirl restricted to one isotypic sector `𝒲_γ`.
///
/// Inside `𝒲_γ = 𝒦_γ ⊗ ℋ_γ` the commutant is `End(𝒦_γ) ⊗ 1`, spanned by
/// `P_γ R(π)`. Projecting `P_γ m P_γ` onto that span equals
/// `Tr_{ℋ_γ}(P_γ m P_γ) / dim ℋ_γ ⊗ 1_{ℋ_γ}`.
#[derive(Debug)]
pub struct SectorTwirl {
    pub sector: SectorProjector,
    gram_pinv: DMatrix<f64>,
    /// `dim ℋ_γ`, the dimension of the U(d) irrep.
    pub irrep_dim: usize,
}

impl SectorTwirl {
    pub fn new(gamma: &YoungDiagram, d: usize) -> Result<Self> {
        check_caps(d, gamma.boxes())?;
        let sector = SectorProjector::new(gamma, d)?;
        let k = sector.perms.len();
        let gram = DMatrix::from_fn(k, k, |i, j| {
            sector.trace_with_perm(&sector.perms[i].inverse().compose(&sector.perms[j]))
        });
        let (gram_pinv, rank, _) = pseudo_inverse(&gram);
        debug_assert_eq!(rank, sector.multiplicity * sector.multiplicity);
        let trace = sector.trace_with_perm(&Permutation::identity(gamma.boxes()));
        let irrep_dim = (trace / sector.multiplicity as f64).round() as usize;
        Ok(Self {
            sector,
            gram_pinv,
            irrep_dim,
        })
    }

    pub fn apply(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let s = &self.sector;
        let pm = s.apply_left(m);
        let overlaps: Vec<C64> = s
            .maps
            .iter()
            .map(|map| map.iter().enumerate().map(|(x, &y)| pm[(y, x)]).sum())
            .collect();
        let coeffs: Vec<C64> = (0..s.maps.len())
            .map(|j| {
                (0..s.maps.len())
                    .map(|i| overlaps[i] * self.gram_pinv[(j, i)])
                    .sum()
            })
            .collect();
        let n = m.rows();
        let mut combo = ComplexMatrix::zeros(n, n);
        for (map, &c) in s.maps.iter().zip(&coeffs) {
            for (x, &y) in map.iter().enumerate() {
                combo[(y, x)] += c;
            }
        }
        s.apply_left(&combo)
    }
}

/// All sector twirls for `(t, d)`, in `YoungDiagram::sectors` order.
pub fn sector_twirls(t: usize, d: usize) -> Result<Vec<SectorTwirl>> {
    YoungDiagram::sectors(t, d)
        .iter()
        .map(|g| SectorTwirl::new(g, d))
        .collect()
}

/// `⊕_γ Tr_{ℋ_γ}(P_γ m P_γ) / dim ℋ_γ ⊗ 1_{ℋ_γ}`.
pub fn haar_unitary_twirl_sectors(t: usize, d: usize, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_probe(t, d, m)?;
    let mut out = ComplexMatrix::zeros(m.rows(), m.cols());
    for sector in sector_twirls(t, d)? {
        out += &sector.apply(m);
    }
    Ok(out)
}

fn gaussian_matrix(d: usize, complex: bool, rng: &mut impl Rng) -> DMatrix<C64> {
    let scale = if complex {
        std::f64::consts::FRAC_1_SQRT_2
    } else {
        1.0
    };
    DMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = if complex {
            rng.sample(StandardNormal)
        } else {
            0.0
        };
        C64::new(re * scale, im * scale)
    })
}

fn phase_fixed_q(g: DMatrix<C64>) -> ComplexMatrix {
    let qr = g.qr();
    let (q, r) = qr.unpack();
    let d = q.nrows();
    let mut out = ComplexMatrix::from_nalgebra(&q);
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..d {
            out[(i, j)] *= phase;
        }
    }
    out
}

/// Haar-random unitary drawn from `rng`.
pub fn sample_unitary(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    phase_fixed_q(gaussian_matrix(d, true, rng))
}

/// Haar-random real orthogonal matrix drawn from `rng`.
pub fn sample_orthogonal(d: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut o = phase_fixed_q(gaussian_matrix(d, false, rng));
    // Householder QR of a real matrix stays real; clear rounding residue.
    for z in o.data_mut() {
        z.im = 0.0;
    }
    o
}

pub fn random_unitary(d: usize, seed: u64) -> ComplexMatrix {
    sample_unitary(d, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn random_orthogonal(d: usize, seed: u64) -> ComplexMatrix {
    sample_orthogonal(d, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Monte Carlo estimate of a twirled matrix unit together with per-entry variances.
#[derive(Clone, Debug)]
pub struct MonteCarloEstimate {
    pub mean: ComplexMatrix,
    /// Sample variance of each entry (`E|X − EX|²`).
    pub variance: Vec<f64>,
    pub samples: usize,
}

impl MonteCarloEstimate {
    /// Standard error of the Frobenius distance: `sqrt(Σ var / N)`.
    pub fn frobenius_sigma(&self) -> f64 {
        (self.variance.iter().sum::<f64>() / self.samples as f64).sqrt()
    }
}

/// Estimates `E[V^{⊗t} |a⟩⟨b| V^{†⊗t}]` for `V` drawn by `sampler`, where `a`
/// and `b` are multi-indices of length `t`.
pub fn monte_carlo_twirl_unit(
    d: usize,
    a: &[usize],
    b: &[usize],
    samples: usize,
    seed: u64,
    mut sampler: impl FnMut(usize, &mut ChaCha8Rng) -> ComplexMatrix,
) -> MonteCarloEstimate {
    let t = a.len();
    assert_eq!(t, b.len());
    let n = d.pow(t as u32);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = vec![ZERO; n * n];
    let mut sum_sq = vec![0.0; n * n];
    let product_column = |v: &ComplexMatrix, idx: &[usize]| -> Vec<C64> {
        let mut out = vec![C64::new(1.0, 0.0)];
        for &k in idx {
            let col = v.column(k);
            out = out
                .iter()
                .flat_map(|&x| col.iter().map(move |&y| x * y))
                .collect();
        }
        out
    };
    for _ in 0..samples {
        let v = sampler(d, &mut rng);
        let left = product_column(&v, a);
        let right = product_column(&v, b);
        for i in 0..n {
            for j in 0..n {
                let z = left[i] * right[j].conj();
                sum[i * n + j] += z;
                sum_sq[i * n + j] += z.norm_sqr();
            }
        }
    }
    let inv = 1.0 / samples as f64;
    let mean: Vec<C64> = sum.iter().map(|z| z * inv).collect();
    let variance = mean
        .iter()
        .zip(&sum_sq)
        .map(|(m, s)| (s * inv - m.norm_sqr()).max(0.0))
        .collect();
    MonteCarloEstimate {
        mean: ComplexMatrix::new(n, n, mean).expect("shape"),
        variance,
        samples,
    }
}

/// Multi-index of a basis state of `(ℂ^d)^{⊗t}`.
pub fn multi_index(x: usize, d: usize, t: usize) -> Vec<usize> {
    let mut out = vec![0; t];
    digits(x, d, t, &mut out);
    out
}

#[doc(hidden)]
pub fn permutation_index_maps(t: usize, d: usize) -> Vec<Vec<usize>> {
    Permutation::all(t)
        .iter()
        .map(|p| tensor_index_map(p, d))
        .collect()
}
