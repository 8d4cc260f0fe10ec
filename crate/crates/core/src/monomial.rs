//! The monomial reflection group `G(3,1,d) ≅ S_d ⋉ Z₃^d`.
//!
//! An element `(ω, α)` acts as `Γ(ω, α) = Γ_nat(ω) D(α)` where
//! `Γ_nat(ω) e_j = e_{ω(j)}` and `D(α) = diag(ζ^{α_0}, …, ζ^{α_{d−1}})`.
//! Multiplying out gives `(ω₁,α₁)(ω₂,α₂) = (ω₁ω₂, α₂ + α₁∘ω₂)`.

use std::collections::HashMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::tensorlin::perm::{digits, next_lexicographic};
use crate::tensorlin::{check_caps, conjugate_tensor_power, ComplexMatrix, Permutation, C64, ZERO};

/// `ζ = e^{2πi/3}`.
pub const ZETA: C64 = C64::new(-0.5, 0.866_025_403_784_438_6);
/// Cube roots of unity indexed by exponent.
pub const CUBE_ROOTS: [C64; 3] = [
    C64::new(1.0, 0.0),
    ZETA,
    C64::new(-0.5, -0.866_025_403_784_438_6),
];

/// Largest `d` whose elements may be streamed.
pub const MAX_STREAM_DIM: usize = 8;
/// Largest `d` whose elements may be collected into memory.
pub const MAX_MATERIALIZE_DIM: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialElement {
    perm: Permutation,
    exps: Vec<u8>,
}

impl MonomialElement {
    pub fn new(perm: Permutation, exps: Vec<u8>) -> Result<Self> {
        if perm.len() != exps.len() {
            return Err(Error::DimensionMismatch {
                expected: perm.len(),
                found: exps.len(),
            });
        }
        Ok(Self {
            perm,
            exps: exps.into_iter().map(|a| a % 3).collect(),
        })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            perm: Permutation::identity(d),
            exps: vec![0; d],
        }
    }

    pub fn random(d: usize, rng: &mut impl Rng) -> Self {
        let mut images: Vec<usize> = (0..d).collect();
        for i in (1..d).rev() {
            images.swap(i, rng.random_range(0..=i));
        }
        let exps = (0..d).map(|_| rng.random_range(0..3u8)).collect();
        Self {
            perm: Permutation::new(images).expect("shuffle is a permutation"),
            exps,
        }
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn exps(&self) -> &[u8] {
        &self.exps
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let exps = (0..self.dim())
            .map(|j| (other.exps[j] + self.exps[other.perm.apply(j)]) % 3)
            .collect();
        Ok(Self {
            perm: self.perm.compose(&other.perm),
            exps,
        })
    }

    pub fn inverse(&self) -> Self {
        let inv = self.perm.inverse();
        let exps = (0..self.dim())
            .map(|j| (3 - self.exps[inv.apply(j)]) % 3)
            .collect();
        Self { perm: inv, exps }
    }

    /// `Tr Γ(e) = Σ_{j fixed by ω} ζ^{α_j}`.
    pub fn character(&self) -> C64 {
        self.perm
            .fixed_points()
            .map(|j| CUBE_ROOTS[self.exps[j] as usize])
            .sum()
    }

    pub fn natural_rep(&self) -> ComplexMatrix {
        let d = self.dim();
        let mut m = ComplexMatrix::zeros(d, d);
        for j in 0..d {
            m[(self.perm.apply(j), j)] = CUBE_ROOTS[self.exps[j] as usize];
        }
        m
    }
}

pub fn natural_rep(e: &MonomialElement) -> ComplexMatrix {
    e.natural_rep()
}

pub fn monomial_multiply(a: &MonomialElement, b: &MonomialElement) -> Result<MonomialElement> {
    a.multiply(b)
}

/// `d!·3^d`.
pub fn group_order(d: usize) -> u128 {
    (1..=d as u128).product::<u128>() * 3u128.pow(d as u32)
}

/// Streams every element of `G(3,1,d)` once: permutations in lexicographic
/// order, exponent vectors as base-3 counters within each permutation.
pub struct MonomialIter {
    images: Vec<usize>,
    exps: Vec<u8>,
    done: bool,
}

impl Iterator for MonomialIter {
    type Item = MonomialElement;

    fn next(&mut self) -> Option<MonomialElement> {
        if self.done {
            return None;
        }
        let item = MonomialElement {
            perm: Permutation::new(self.images.clone()).expect("valid permutation"),
            exps: self.exps.clone(),
        };
        let mut carry = true;
        for a in self.exps.iter_mut().rev() {
            *a += 1;
            if *a < 3 {
                carry = false;
                break;
            }
            *a = 0;
        }
        if carry && !next_lexicographic(&mut self.images) {
            self.done = true;
        }
        Some(item)
    }
}

pub fn enumerate(d: usize) -> Result<MonomialIter> {
    if d == 0 || d > MAX_STREAM_DIM {
        return Err(Error::CapExceeded {
            what: "monomial group dimension",
            size: d as u128,
            cap: MAX_STREAM_DIM as u128,
        });
    }
    Ok(MonomialIter {
        images: (0..d).collect(),
        exps: vec![0; d],
        done: false,
    })
}

pub fn elements(d: usize) -> Result<Vec<MonomialElement>> {
    if d > MAX_MATERIALIZE_DIM {
        return Err(Error::CapExceeded {
            what: "materialized monomial group dimension",
            size: d as u128,
            cap: MAX_MATERIALIZE_DIM as u128,
        });
    }
    Ok(enumerate(d)?.collect())
}

/// Generators of the natural representation: a transposition, a `d`-cycle and `diag(ζ,1,…,1)`.
pub fn generators(d: usize) -> Vec<ComplexMatrix> {
    let cycle: Vec<usize> = (0..d).map(|j| (j + 1) % d).collect();
    let mut phase = vec![0u8; d];
    phase[0] = 1;
    let mut gens = Vec::new();
    if d >= 2 {
        gens.push(Permutation::transposition(d, 0, 1));
        gens.push(Permutation::new(cycle).expect("cycle"));
    }
    let mut out: Vec<ComplexMatrix> = gens
        .into_iter()
        .map(|p| {
            MonomialElement {
                perm: p,
                exps: vec![0; d],
            }
            .natural_rep()
        })
        .collect();
    out.push(
        MonomialElement {
            perm: Permutation::identity(d),
            exps: phase,
        }
        .natural_rep(),
    );
    out
}

/// Relabels a tuple of basis labels by first occurrence and packs it.
fn pattern_key(labels: &[usize]) -> u64 {
    let mut seen = [usize::MAX; 8];
    let mut next = 0;
    let mut key = 0u64;
    for &l in labels {
        let class = match seen[..next].iter().position(|&s| s == l) {
            Some(c) => c,
            None => {
                seen[next] = l;
                next += 1;
                next - 1
            }
        };
        key = key * 8 + class as u64;
    }
    key
}

/// Per-site net ζ-exponent vanishes: every label occurs equally often mod 3 in `x` and `y`.
fn survives_phase_average(x: &[usize], y: &[usize]) -> bool {
    x.iter().chain(y).all(|&s| {
        let nx = x.iter().filter(|&&v| v == s).count() as i64;
        let ny = y.iter().filter(|&&v| v == s).count() as i64;
        (nx - ny).rem_euclid(3) == 0
    })
}

/// Uniform twirl over `G(3,1,d)`.
///
/// The diagonal phases keep only entries passing the selection rule; the
/// permutations then replace each entry by the mean over its relabelling
/// orbit, which is the set of index tuples with the same equality pattern.
pub fn monomial_twirl(d: usize, t: usize, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = check_caps(d, t)?;
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.rows(),
        });
    }
    let mut labels = vec![0; 2 * t];
    let mut keys = Vec::with_capacity(n * n);
    let mut classes: HashMap<u64, (C64, usize)> = HashMap::new();
    for x in 0..n {
        digits(x, d, t, &mut labels[..t]);
        for y in 0..n {
            digits(y, d, t, &mut labels[t..]);
            let key = if survives_phase_average(&labels[..t], &labels[t..]) {
                Some(pattern_key(&labels))
            } else {
                None
            };
            if let Some(k) = key {
                let e = classes.entry(k).or_insert((ZERO, 0));
                e.0 += m[(x, y)];
                e.1 += 1;
            }
            keys.push(key);
        }
    }
    let data = keys
        .into_iter()
        .map(|k| match k {
            Some(k) => {
                let (sum, count) = classes[&k];
                sum / count as f64
            }
            None => ZERO,
        })
        .collect();
    ComplexMatrix::new(n, n, data)
}

/// Twirl by explicit summation over all group elements (`d ≤ 6`).
pub fn monomial_twirl_enumerated(d: usize, t: usize, m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = check_caps(d, t)?;
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.rows(),
        });
    }
    let elems = elements(d)?;
    let mut out = ComplexMatrix::zeros(n, n);
    for e in &elems {
        out += &conjugate_tensor_power(&e.natural_rep(), t, m);
    }
    Ok(out.scale_real(1.0 / elems.len() as f64))
}

/// `⟨χ_{Γ⊗Γ}, χ_{Γ⊗Γ}⟩ = |G|⁻¹ Σ_g |χ_Γ(g)|⁴`, summed over every element.
pub fn gamma_squared_multiplicity_check(d: usize) -> Result<u64> {
    if !(2..=MAX_MATERIALIZE_DIM).contains(&d) {
        return Err(Error::Precondition(format!(
            "multiplicity check needs 2 ≤ d ≤ 6, got {d}"
        )));
    }
    let mut sum = 0.0;
    let mut count = 0u64;
    for e in enumerate(d)? {
        sum += e.character().norm_sqr().powi(2);
        count += 1;
    }
    let value = sum / count as f64;
    if (value - value.round()).abs() > 1e-6 {
        return Err(Error::NonIntegerMultiplicity { value });
    }
    Ok(value.round() as u64)
}

/// First two moments of the fixed-point count over `S_d`, exactly enumerated.
pub fn fixed_point_moments(d: usize) -> (f64, f64) {
    let perms = Permutation::all(d);
    let (mut s1, mut s2) = (0usize, 0usize);
    for p in &perms {
        let f = p.fixed_points().count();
        s1 += f;
        s2 += f * f;
    }
    let n = perms.len() as f64;
    (s1 as f64 / n, s2 as f64 / n)
}
