//! Weighted unitary sets, their twirl channels and design verification.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::haar::{haar_unitary_twirl, sector_twirls};
use crate::monomial::{self, MAX_MATERIALIZE_DIM};
use crate::tensorlin::{
    check_caps, conjugate_tensor_power, ComplexMatrix, YoungDiagram, C64, ZERO,
};

pub const WEIGHT_TOL: f64 = 1e-12;
pub const MERGE_TOL: f64 = 1e-10;
pub const DEFAULT_TOL: f64 = 1e-9;
pub const MATERIALIZATION_CAP: u128 = 1_000_000;
/// Full matrix-unit probing is used while `d^{2t}` stays at or below this.
pub const FULL_BASIS_LIMIT: usize = 4096;
pub const MIN_RANDOM_PROBES: usize = 50;

const CHUNK: usize = 16;

#[derive(Clone, Debug)]
pub enum DesignKind {
    /// Finite list of `(unitary, weight)`; `group` marks a uniformly weighted group.
    Explicit {
        elements: Vec<(ComplexMatrix, f64)>,
        group: bool,
    },
    /// Uniform `G(3,1,d)` in its natural representation, optionally conjugated as `Q g Q†`.
    Monomial { conjugator: Option<ComplexMatrix> },
    /// Products `V₁V₂⋯V_k` with convolution weights.
    Product(Vec<WeightedUnitarySet>),
}

#[derive(Clone, Debug)]
pub struct WeightedUnitarySet {
    dim: usize,
    kind: DesignKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Explicit,
    Group,
    ProductOfGroups,
}

impl WeightedUnitarySet {
    /// Validates unitarity (1e-12) and the weight sum (1e-12).
    pub fn explicit(elements: Vec<(ComplexMatrix, f64)>) -> Result<Self> {
        Self::build_explicit(elements, false)
    }

    /// A finite group with uniform weights.
    pub fn group(elements: Vec<ComplexMatrix>) -> Result<Self> {
        let w = 1.0 / elements.len().max(1) as f64;
        Self::build_explicit(elements.into_iter().map(|u| (u, w)).collect(), true)
    }

    pub fn singleton(u: ComplexMatrix) -> Result<Self> {
        Self::group(vec![u])
    }

    pub fn monomial(d: usize, conjugator: Option<ComplexMatrix>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Empty);
        }
        if let Some(q) = &conjugator {
            if q.rows() != d || !q.is_square() {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: q.rows(),
                });
            }
            let dev = q.unitarity_deviation();
            if dev > crate::tensorlin::matrix::UNITARY_TOL {
                return Err(Error::NotUnitary {
                    index: 0,
                    deviation: dev,
                });
            }
        }
        Ok(Self {
            dim: d,
            kind: DesignKind::Monomial { conjugator },
        })
    }

    fn build_explicit(elements: Vec<(ComplexMatrix, f64)>, group: bool) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::Empty);
        };
        let dim = first.0.rows();
        let mut sum = 0.0;
        for (i, (u, w)) in elements.iter().enumerate() {
            if u.rows() != dim || u.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: u.rows(),
                });
            }
            let dev = u.unitarity_deviation();
            if dev > crate::tensorlin::matrix::UNITARY_TOL {
                return Err(Error::NotUnitary {
                    index: i,
                    deviation: dev,
                });
            }
            if !(*w >= 0.0 && *w <= 1.0 + WEIGHT_TOL) {
                return Err(Error::InvalidWeights { sum: *w });
            }
            sum += w;
        }
        if (sum - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidWeights { sum });
        }
        Ok(Self {
            dim,
            kind: DesignKind::Explicit { elements, group },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &DesignKind {
        &self.kind
    }

    pub fn provenance(&self) -> Provenance {
        match &self.kind {
            DesignKind::Explicit { group: false, .. } => Provenance::Explicit,
            DesignKind::Explicit { group: true, .. } | DesignKind::Monomial { .. } => {
                Provenance::Group
            }
            DesignKind::Product(_) => Provenance::ProductOfGroups,
        }
    }

    /// Number of `(element, weight)` pairs before merging products.
    pub fn cardinality(&self) -> u128 {
        match &self.kind {
            DesignKind::Explicit { elements, .. } => elements.len() as u128,
            DesignKind::Monomial { .. } => monomial::group_order(self.dim),
            DesignKind::Product(fs) => fs
                .iter()
                .map(|f| f.cardinality())
                .fold(1u128, |a, b| a.saturating_mul(b)),
        }
    }

    /// Explicit elements with merged products, refusing sets above `cap`.
    pub fn materialize(&self, cap: u128) -> Result<Vec<(ComplexMatrix, f64)>> {
        let size = self.cardinality();
        if size > cap {
            return Err(Error::CapExceeded {
                what: "design materialization",
                size,
                cap,
            });
        }
        match &self.kind {
            DesignKind::Explicit { elements, .. } => Ok(elements.clone()),
            DesignKind::Monomial { conjugator } => {
                if self.dim > MAX_MATERIALIZE_DIM {
                    return Err(Error::CapExceeded {
                        what: "materialized monomial group dimension",
                        size: self.dim as u128,
                        cap: MAX_MATERIALIZE_DIM as u128,
                    });
                }
                let w = 1.0 / size as f64;
                let elems = monomial::enumerate(self.dim)?.map(|e| {
                    let g = e.natural_rep();
                    let u = match conjugator {
                        Some(q) => &(q * &g) * &q.adjoint(),
                        None => g,
                    };
                    (u, w)
                });
                Ok(elems.collect())
            }
            DesignKind::Product(factors) => {
                let mut acc = vec![(ComplexMatrix::identity(self.dim), 1.0)];
                for f in factors {
                    let fe = f.materialize(cap)?;
                    let mut next = Vec::with_capacity(acc.len() * fe.len());
                    for (a, wa) in &acc {
                        for (b, wb) in &fe {
                            next.push((a * b, wa * wb));
                        }
                    }
                    acc = merge_equal(next);
                }
                Ok(acc)
            }
        }
    }

    /// Collapses to an explicit set (keeping group provenance for groups).
    pub fn to_explicit(&self, cap: u128) -> Result<Self> {
        let group = matches!(self.provenance(), Provenance::Group);
        Self::build_explicit(self.materialize(cap)?, group)
    }
}

/// Sums weights of elements equal within `MERGE_TOL` (max-norm); phases stay distinct.
/// First-seen order is kept.
pub fn merge_equal(elements: Vec<(ComplexMatrix, f64)>) -> Vec<(ComplexMatrix, f64)> {
    // Grid far coarser than MERGE_TOL so equal matrices share a key; the
    // max-norm comparison confirms.
    let key = |u: &ComplexMatrix| -> Vec<i64> {
        u.data()
            .iter()
            .flat_map(|z| [(z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64])
            .collect()
    };
    let mut out: Vec<(ComplexMatrix, f64)> = Vec::new();
    let mut index: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (u, w) in elements {
        let bucket = index.entry(key(&u)).or_default();
        match bucket
            .iter()
            .find(|&&i| out[i].0.max_abs_diff(&u) <= MERGE_TOL)
        {
            Some(&i) => out[i].1 += w,
            None => {
                bucket.push(out.len());
                out.push((u, w));
            }
        }
    }
    out
}

/// Lazy product `𝒱₁·𝒱₂⋯𝒱_k`; nested products are flattened.
pub fn product_design(factors: Vec<WeightedUnitarySet>) -> Result<WeightedUnitarySet> {
    let Some(first) = factors.first() else {
        return Err(Error::Empty);
    };
    let dim = first.dim;
    let mut flat = Vec::new();
    for f in factors {
        if f.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: f.dim,
            });
        }
        match f.kind {
            DesignKind::Product(inner) => flat.extend(inner),
            _ => flat.push(f),
        }
    }
    Ok(WeightedUnitarySet {
        dim,
        kind: DesignKind::Product(flat),
    })
}

/// `Σ_{i,j} w_i w_j |Tr(V_i† V_j)|^{2t}`.
pub fn frame_potential(set: &WeightedUnitarySet, t: usize) -> Result<f64> {
    if t == 0 || t > 4 {
        return Err(Error::UnsupportedOrder {
            t,
            reason: "frame potential is computed for 1 ≤ t ≤ 4",
        });
    }
    let elems = set.materialize(MATERIALIZATION_CAP)?;
    let adj: Vec<ComplexMatrix> = elems.iter().map(|(u, _)| u.adjoint()).collect();
    let rows: Vec<f64> = (0..elems.len())
        .into_par_iter()
        .map(|i| {
            let mut s = 0.0;
            for (v, wj) in &elems {
                // Tr(A B) without forming the product.
                let n = set.dim;
                let mut tr = ZERO;
                for a in 0..n {
                    for b in 0..n {
                        tr += adj[i][(a, b)] * v[(b, a)];
                    }
                }
                s += wj * tr.norm_sqr().powi(t as i32);
            }
            elems[i].1 * s
        })
        .collect();
    Ok(rows.iter().sum())
}

fn check_probe(set: &WeightedUnitarySet, t: usize, m: &ComplexMatrix) -> Result<usize> {
    let n = check_caps(set.dim, t)?;
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.rows(),
        });
    }
    Ok(n)
}

fn explicit_twirl(elements: &[(ComplexMatrix, f64)], t: usize, m: &ComplexMatrix) -> ComplexMatrix {
    let partials: Vec<ComplexMatrix> = elements
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = ComplexMatrix::zeros(m.rows(), m.cols());
            for (u, w) in chunk {
                acc.axpy(C64::new(*w, 0.0), &conjugate_tensor_power(u, t, m));
            }
            acc
        })
        .collect();
    let mut out = ComplexMatrix::zeros(m.rows(), m.cols());
    for p in &partials {
        out += p;
    }
    out
}

/// `Σ_V w(V) V^{⊗t} m V^{†⊗t}`.
pub fn twirl_apply(set: &WeightedUnitarySet, t: usize, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_probe(set, t, m)?;
    match &set.kind {
        DesignKind::Explicit { elements, .. } => Ok(explicit_twirl(elements, t, m)),
        DesignKind::Monomial { conjugator: None } => monomial::monomial_twirl(set.dim, t, m),
        DesignKind::Monomial {
            conjugator: Some(q),
        } => {
            let inner = conjugate_tensor_power(&q.adjoint(), t, m);
            let tw = monomial::monomial_twirl(set.dim, t, &inner)?;
            Ok(conjugate_tensor_power(q, t, &tw))
        }
        DesignKind::Product(factors) => {
            let mut out = m.clone();
            for f in factors.iter().rev() {
                out = twirl_apply(f, t, &out)?;
            }
            Ok(out)
        }
    }
}

/// How a verification enumerated its probes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeBasis {
    MatrixUnits,
    Gaussian,
}

#[derive(Clone, Debug)]
pub struct ProbeSet {
    pub basis: ProbeBasis,
    pub count: usize,
    n: usize,
    seed: u64,
}

impl ProbeSet {
    /// Full matrix-unit basis when `n² ≤ 4096`, otherwise `max(requested, 50)` Gaussian probes.
    pub fn new(n: usize, requested: Option<usize>, seed: u64) -> Self {
        if n * n <= FULL_BASIS_LIMIT && requested.is_none() {
            Self {
                basis: ProbeBasis::MatrixUnits,
                count: n * n,
                n,
                seed,
            }
        } else {
            Self {
                basis: ProbeBasis::Gaussian,
                count: requested.unwrap_or(0).max(MIN_RANDOM_PROBES),
                n,
                seed,
            }
        }
    }

    /// Generated on demand, deterministic in the seed.
    pub fn probe(&self, k: usize) -> ComplexMatrix {
        match self.basis {
            ProbeBasis::MatrixUnits => ComplexMatrix::unit(self.n, k / self.n, k % self.n),
            ProbeBasis::Gaussian => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(k as u64);
                ComplexMatrix::from_fn(self.n, self.n, |_, _| {
                    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                })
            }
        }
    }
}

/// Entrywise tolerance actually applied at order `t`: `tol·d^t` for `t ≥ 3`.
pub fn effective_tolerance(tol: f64, d: usize, t: usize) -> f64 {
    if t >= 3 {
        tol * (d as f64).powi(t as i32)
    } else {
        tol
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentReport {
    pub dimension: usize,
    pub t: usize,
    pub basis: ProbeBasis,
    pub probes: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Options shared by both verification paths.
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub tol: f64,
    /// Forces Gaussian probing with at least this many probes.
    pub probes: Option<usize>,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            probes: None,
            seed: 0,
        }
    }
}

fn max_in_order(values: Vec<f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

/// Compares the set's twirl with the exact Haar twirl probe by probe.
pub fn verify_design_moment(
    set: &WeightedUnitarySet,
    t: usize,
    opts: VerifyOptions,
) -> Result<MomentReport> {
    let n = check_caps(set.dim, t)?;
    let probes = ProbeSet::new(n, opts.probes, opts.seed);
    let deviations: Vec<f64> = (0..probes.count)
        .into_par_iter()
        .map(|k| -> Result<f64> {
            let m = probes.probe(k);
            Ok(twirl_apply(set, t, &m)?.max_abs_diff(&haar_unitary_twirl(t, set.dim, &m)?))
        })
        .collect::<Result<_>>()?;
    let max_deviation = max_in_order(deviations);
    let tolerance = effective_tolerance(opts.tol, set.dim, t);
    Ok(MomentReport {
        dimension: set.dim,
        t,
        basis: probes.basis,
        probes: probes.count,
        max_deviation,
        tolerance,
        pass: max_deviation <= tolerance,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SectorDeviation {
    pub gamma: YoungDiagram,
    pub eta: YoungDiagram,
    pub max_deviation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SectorReport {
    pub dimension: usize,
    pub t: usize,
    pub basis: ProbeBasis,
    pub probes: usize,
    /// Every ordered pair `(γ, η)`; the block `P_γ (T − T_Haar)(M) P_η`.
    pub sectors: Vec<SectorDeviation>,
    pub worst: Option<(YoungDiagram, YoungDiagram)>,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl SectorReport {
    /// Pairs whose deviation exceeds the tolerance.
    pub fn failing(&self) -> impl Iterator<Item = &SectorDeviation> {
        self.sectors
            .iter()
            .filter(|s| s.max_deviation > self.tolerance)
    }
}

/// Sector-wise comparison against `⊕_γ Tr_{ℋ_γ}(P_γ M P_γ)/dim ℋ_γ ⊗ 1`.
pub fn verify_design_sectors(
    set: &WeightedUnitarySet,
    t: usize,
    opts: VerifyOptions,
) -> Result<SectorReport> {
    let n = check_caps(set.dim, t)?;
    let sectors = sector_twirls(t, set.dim)?;
    let probes = ProbeSet::new(n, opts.probes, opts.seed);
    let k = sectors.len();
    let per_probe: Vec<Vec<f64>> = (0..probes.count)
        .into_par_iter()
        .map(|p| -> Result<Vec<f64>> {
            let m = probes.probe(p);
            let mut diff = twirl_apply(set, t, &m)?;
            for s in &sectors {
                diff -= &s.apply(&m);
            }
            let mut devs = Vec::with_capacity(k * k);
            for g in &sectors {
                let left = g.sector.apply_left(&diff);
                for h in &sectors {
                    devs.push(h.sector.apply_right(&left).max_abs());
                }
            }
            Ok(devs)
        })
        .collect::<Result<_>>()?;
    let mut maxima = vec![0.0f64; k * k];
    for devs in &per_probe {
        for (m, &v) in maxima.iter_mut().zip(devs) {
            *m = m.max(v);
        }
    }
    let tolerance = effective_tolerance(opts.tol, set.dim, t);
    let mut out = Vec::with_capacity(k * k);
    for (i, g) in sectors.iter().enumerate() {
        for (j, h) in sectors.iter().enumerate() {
            out.push(SectorDeviation {
                gamma: g.sector.gamma.clone(),
                eta: h.sector.gamma.clone(),
                max_deviation: maxima[i * k + j],
            });
        }
    }
    let worst_idx = (0..out.len()).fold(None, |best: Option<usize>, i| match best {
        Some(b) if out[b].max_deviation >= out[i].max_deviation => Some(b),
        _ => Some(i),
    });
    let max_deviation = worst_idx.map_or(0.0, |i| out[i].max_deviation);
    let worst = worst_idx
        .filter(|_| max_deviation > tolerance)
        .map(|i| (out[i].gamma.clone(), out[i].eta.clone()));
    Ok(SectorReport {
        dimension: set.dim,
        t,
        basis: probes.basis,
        probes: probes.count,
        sectors: out,
        worst,
        max_deviation,
        tolerance,
        pass: max_deviation <= tolerance,
    })
}

// ---- JSON ----

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let rows = |f: fn(&C64) -> f64| {
            (0..m.rows())
                .map(|i| m.row(i).iter().map(f).collect())
                .collect()
        };
        Self {
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let rows = self.re.len();
        let cols = self.re.first().map_or(0, Vec::len);
        if rows == 0 || self.im.len() != rows {
            return Err(Error::BadShape {
                rows,
                cols,
                len: self.im.len(),
            });
        }
        let mut data = Vec::with_capacity(rows * cols);
        for (r, i) in self.re.iter().zip(&self.im) {
            if r.len() != cols || i.len() != cols {
                return Err(Error::BadShape {
                    rows,
                    cols,
                    len: r.len().max(i.len()),
                });
            }
            data.extend(r.iter().zip(i).map(|(&a, &b)| C64::new(a, b)));
        }
        ComplexMatrix::new(rows, cols, data)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ElementJson {
    pub weight: f64,
    #[serde(flatten)]
    pub matrix: MatrixJson,
}

/// On-disk design. Product designs list their factors; the monomial group is
/// stored by name (`"group:G(3,1,d)"`) with an optional conjugator.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DesignJson {
    pub dimension: usize,
    pub provenance: String,
    #[serde(default)]
    pub elements: Vec<ElementJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<DesignJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugator: Option<MatrixJson>,
}

pub const MONOMIAL_TAG: &str = "group:G(3,1,d)";

impl WeightedUnitarySet {
    pub fn to_json(&self) -> DesignJson {
        let provenance = |p: Provenance| {
            serde_json::to_value(p)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default()
        };
        match &self.kind {
            DesignKind::Explicit { elements, .. } => {
                let total: f64 = elements.iter().map(|(_, w)| w).sum();
                DesignJson {
                    dimension: self.dim,
                    provenance: provenance(self.provenance()),
                    elements: elements
                        .iter()
                        .map(|(u, w)| ElementJson {
                            weight: w / total,
                            matrix: MatrixJson::from_matrix(u),
                        })
                        .collect(),
                    factors: Vec::new(),
                    conjugator: None,
                }
            }
            DesignKind::Monomial { conjugator } => DesignJson {
                dimension: self.dim,
                provenance: MONOMIAL_TAG.to_string(),
                elements: Vec::new(),
                factors: Vec::new(),
                conjugator: conjugator.as_ref().map(MatrixJson::from_matrix),
            },
            DesignKind::Product(fs) => DesignJson {
                dimension: self.dim,
                provenance: provenance(Provenance::ProductOfGroups),
                elements: Vec::new(),
                factors: fs.iter().map(|f| f.to_json()).collect(),
                conjugator: None,
            },
        }
    }

    pub fn from_json(j: &DesignJson) -> Result<Self> {
        let set = match j.provenance.as_str() {
            MONOMIAL_TAG => {
                let q = j
                    .conjugator
                    .as_ref()
                    .map(MatrixJson::to_matrix)
                    .transpose()?;
                Self::monomial(j.dimension, q)?
            }
            "product-of-groups" => {
                if j.factors.is_empty() {
                    return Err(Error::Empty);
                }
                product_design(
                    j.factors
                        .iter()
                        .map(Self::from_json)
                        .collect::<Result<_>>()?,
                )?
            }
            "explicit" | "group" => {
                let elements = j
                    .elements
                    .iter()
                    .map(|e| Ok((e.matrix.to_matrix()?, e.weight)))
                    .collect::<Result<Vec<_>>>()?;
                Self::build_explicit(elements, j.provenance == "group")?
            }
            other => return Err(Error::Parse(format!("unknown provenance {other:?}"))),
        };
        if set.dim != j.dimension {
            return Err(Error::DimensionMismatch {
                expected: j.dimension,
                found: set.dim,
            });
        }
        Ok(set)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("design serializes") + "\n"
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::random_unitary;

    fn pauli() -> WeightedUnitarySet {
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let z = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap();
        let y = &(&x * &z) * C64::new(0.0, 1.0);
        WeightedUnitarySet::group(vec![ComplexMatrix::identity(2), x, y, z]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(matches!(
            WeightedUnitarySet::explicit(vec![]),
            Err(Error::Empty)
        ));
        let bad = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            WeightedUnitarySet::group(vec![bad]),
            Err(Error::NotUnitary { .. })
        ));
        let id = ComplexMatrix::identity(2);
        assert!(matches!(
            WeightedUnitarySet::explicit(vec![(id.clone(), 0.5), (id, 0.4)]),
            Err(Error::InvalidWeights { .. })
        ));
    }

    #[test]
    fn identity_factor_keeps_weights() {
        let v = WeightedUnitarySet::explicit(vec![
            (random_unitary(3, 1), 0.25),
            (random_unitary(3, 2), 0.75),
        ])
        .unwrap();
        let one = WeightedUnitarySet::singleton(ComplexMatrix::identity(3)).unwrap();
        let prod = product_design(vec![one, v.clone()]).unwrap();
        let m = prod.materialize(MATERIALIZATION_CAP).unwrap();
        let orig = v.materialize(MATERIALIZATION_CAP).unwrap();
        assert_eq!(m.len(), 2);
        for ((a, wa), (b, wb)) in m.iter().zip(&orig) {
            assert!(a.max_abs_diff(b) < 1e-15);
            assert_eq!(wa, wb);
        }
    }

    #[test]
    fn pauli_square_merges_to_four() {
        let p = pauli();
        let prod = product_design(vec![p.clone(), p]).unwrap();
        let m = prod.materialize(MATERIALIZATION_CAP).unwrap();
        // Products like XZ = −iY carry phases and stay distinct from Y.
        let total: f64 = m.iter().map(|e| e.1).sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert!(m.len() > 4);
    }

    #[test]
    fn twirl_basics() {
        let p = pauli();
        let id = ComplexMatrix::identity(4);
        assert!(twirl_apply(&p, 2, &id).unwrap().max_abs_diff(&id) < 1e-14);
        let one = WeightedUnitarySet::singleton(ComplexMatrix::identity(2)).unwrap();
        let m = random_unitary(4, 9);
        assert!(twirl_apply(&one, 2, &m).unwrap().max_abs_diff(&m) < 1e-15);
        assert!(twirl_apply(&p, 2, &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn frame_potential_singleton() {
        let one = WeightedUnitarySet::singleton(ComplexMatrix::identity(3)).unwrap();
        assert!((frame_potential(&one, 2).unwrap() - 81.0).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip() {
        let q = random_unitary(3, 4);
        let set = product_design(vec![
            WeightedUnitarySet::monomial(3, Some(q)).unwrap(),
            WeightedUnitarySet::monomial(3, None).unwrap(),
        ])
        .unwrap();
        let s = set.to_json_string();
        let back = WeightedUnitarySet::from_json_str(&s).unwrap();
        assert_eq!(back.to_json_string(), s);
        let p = pauli().to_json_string();
        assert_eq!(
            WeightedUnitarySet::from_json_str(&p)
                .unwrap()
                .to_json_string(),
            p
        );
        let empty = r#"{"dimension":2,"provenance":"explicit","elements":[]}"#;
        assert!(matches!(
            WeightedUnitarySet::from_json_str(empty),
            Err(Error::Empty)
        ));
    }

    #[test]
    fn gaussian_probes_are_deterministic() {
        let p = ProbeSet::new(100, None, 3);
        assert_eq!(p.basis, ProbeBasis::Gaussian);
        assert_eq!(p.count, MIN_RANDOM_PROBES);
        assert_eq!(p.probe(7), ProbeSet::new(100, None, 3).probe(7));
        assert_ne!(p.probe(7), p.probe(8));
    }
}
