//! Permutations of tensor factors and the character tables of S_t for t ≤ 4.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::matrix::{ComplexMatrix, C64, ONE};
use crate::error::{Error, Result};

/// Largest t for which S_t characters are tabulated.
pub const MAX_ORDER: usize = 4;

/// A permutation of `{0, …, n−1}` stored as its image array.
///
/// Composition follows `(a ∘ b)(j) = a(b(j))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Precondition(format!(
                    "{images:?} is not a permutation"
                )));
            }
            seen[i] = true;
        }
        Ok(Self(images))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// The transposition swapping `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(a, b);
        Self(v)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, j: usize) -> usize {
        self.0[j]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self(other.0.iter().map(|&j| self.0[j]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (j, &i) in self.0.iter().enumerate() {
            inv[i] = j;
        }
        Self(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(j, &i)| i == j)
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(j, &i)| *j == i)
            .map(|(j, _)| j)
    }

    /// Cycle lengths sorted in non-increasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.0[j];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    pub fn cycle_count(&self) -> usize {
        self.cycle_type().len()
    }

    /// All permutations of `n` points in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(Self(current.clone()));
            if !next_lexicographic(&mut current) {
                break;
            }
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Advances `v` to the next permutation in lexicographic order.
pub(crate) fn next_lexicographic(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Decomposes a basis index of `(ℂ^d)^{⊗t}` into digits, slot 0 most significant.
#[inline]
pub fn digits(mut index: usize, d: usize, t: usize, out: &mut [usize]) {
    for slot in (0..t).rev() {
        out[slot] = index % d;
        index /= d;
    }
}

#[inline]
pub fn from_digits(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

/// Basis-index map of `R(π)`: `R(π)|x⟩ = |map[x]⟩`, where the digit in slot
/// `j` of `x` moves to slot `π(j)`.
pub fn tensor_index_map(pi: &Permutation, d: usize) -> Vec<usize> {
    let t = pi.len();
    let dim = d.pow(t as u32);
    let mut src = vec![0; t];
    let mut dst = vec![0; t];
    (0..dim)
        .map(|x| {
            digits(x, d, t, &mut src);
            for j in 0..t {
                dst[pi.apply(j)] = src[j];
            }
            from_digits(&dst, d)
        })
        .collect()
}

/// The operator `R(π)` with `R(π)|i₁…iₜ⟩ = |i_{π⁻¹(1)}…i_{π⁻¹(t)}⟩`.
pub fn factor_permutation_operator(pi: &Permutation, d: usize) -> ComplexMatrix {
    let map = tensor_index_map(pi, d);
    let n = map.len();
    let mut m = ComplexMatrix::zeros(n, n);
    for (x, &y) in map.iter().enumerate() {
        m[(y, x)] = ONE;
    }
    m
}

/// Left-multiplies `m` by `Σ_k coeffs[k] · R(perms[k])`, given as index maps.
pub fn apply_perm_combination_left(
    maps: &[Vec<usize>],
    coeffs: &[C64],
    m: &ComplexMatrix,
) -> ComplexMatrix {
    let n = m.rows();
    let cols = m.cols();
    let mut out = ComplexMatrix::zeros(n, cols);
    for (map, &c) in maps.iter().zip(coeffs) {
        if c == C64::new(0.0, 0.0) {
            continue;
        }
        // (R m)[map[x], :] += m[x, :]
        for (x, &y) in map.iter().enumerate() {
            let src = &m.data()[x * cols..(x + 1) * cols];
            let dst = &mut out.data_mut()[y * cols..(y + 1) * cols];
            for (o, s) in dst.iter_mut().zip(src) {
                *o += c * s;
            }
        }
    }
    out
}

/// Right-multiplies `m` by `Σ_k coeffs[k] · R(perms[k])`.
pub fn apply_perm_combination_right(
    m: &ComplexMatrix,
    maps: &[Vec<usize>],
    coeffs: &[C64],
) -> ComplexMatrix {
    let rows = m.rows();
    let n = m.cols();
    let mut out = ComplexMatrix::zeros(rows, n);
    for (map, &c) in maps.iter().zip(coeffs) {
        if c == C64::new(0.0, 0.0) {
            continue;
        }
        // (m R)[:, x] += m[:, map[x]]
        for i in 0..rows {
            let src = &m.data()[i * n..(i + 1) * n];
            let dst = &mut out.data_mut()[i * n..(i + 1) * n];
            for (x, &y) in map.iter().enumerate() {
                dst[x] += c * src[y];
            }
        }
    }
    out
}

/// A partition of `t`, drawn as rows of boxes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct YoungDiagram(Vec<usize>);

impl YoungDiagram {
    pub fn new(rows: Vec<usize>) -> Result<Self> {
        if rows.is_empty() || rows.contains(&0) || rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidDiagram(rows));
        }
        Ok(Self(rows))
    }

    pub fn row_lengths(&self) -> &[usize] {
        &self.0
    }

    pub fn boxes(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn num_rows(&self) -> usize {
        self.0.len()
    }

    /// All partitions of `t` in reverse lexicographic order (`[t]` first).
    pub fn all(t: usize) -> Vec<Self> {
        fn rec(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<YoungDiagram>) {
            if remaining == 0 {
                out.push(YoungDiagram(prefix.clone()));
                return;
            }
            for first in (1..=remaining.min(max)).rev() {
                prefix.push(first);
                rec(remaining - first, first, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if t > 0 {
            rec(t, t, &mut Vec::new(), &mut out);
        }
        out
    }

    /// Diagrams with `t` boxes and at most `d` rows: the sectors of `(ℂ^d)^{⊗t}`.
    pub fn sectors(t: usize, d: usize) -> Vec<Self> {
        Self::all(t)
            .into_iter()
            .filter(|g| g.num_rows() <= d)
            .collect()
    }

    /// Dimension of the corresponding S_t irrep.
    pub fn symmetric_group_dim(&self) -> Result<usize> {
        let t = self.boxes();
        let ct = vec![1; t];
        Ok(symmetric_group_character(self, &ct)?.round() as usize)
    }
}

impl TryFrom<Vec<usize>> for YoungDiagram {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<YoungDiagram> for Vec<usize> {
    fn from(y: YoungDiagram) -> Self {
        y.0
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, r) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

struct CharacterTableSt {
    /// Cycle types labelling the columns.
    classes: Vec<Vec<usize>>,
    /// Class sizes.
    sizes: Vec<usize>,
    /// Rows keyed by partition.
    rows: Vec<(Vec<usize>, Vec<i64>)>,
}

fn tables() -> &'static [CharacterTableSt] {
    static TABLES: OnceLock<Vec<CharacterTableSt>> = OnceLock::new();
    TABLES.get_or_init(|| {
        let tables = vec![
            CharacterTableSt {
                classes: vec![vec![1]],
                sizes: vec![1],
                rows: vec![(vec![1], vec![1])],
            },
            CharacterTableSt {
                classes: vec![vec![1, 1], vec![2]],
                sizes: vec![1, 1],
                rows: vec![(vec![2], vec![1, 1]), (vec![1, 1], vec![1, -1])],
            },
            CharacterTableSt {
                classes: vec![vec![1, 1, 1], vec![2, 1], vec![3]],
                sizes: vec![1, 3, 2],
                rows: vec![
                    (vec![3], vec![1, 1, 1]),
                    (vec![2, 1], vec![2, 0, -1]),
                    (vec![1, 1, 1], vec![1, -1, 1]),
                ],
            },
            CharacterTableSt {
                classes: vec![
                    vec![1, 1, 1, 1],
                    vec![2, 1, 1],
                    vec![2, 2],
                    vec![3, 1],
                    vec![4],
                ],
                sizes: vec![1, 6, 3, 8, 6],
                rows: vec![
                    (vec![4], vec![1, 1, 1, 1, 1]),
                    (vec![3, 1], vec![3, 1, -1, 0, -1]),
                    (vec![2, 2], vec![2, 0, 2, -1, 0]),
                    (vec![2, 1, 1], vec![3, -1, -1, 0, 1]),
                    (vec![1, 1, 1, 1], vec![1, -1, 1, 1, -1]),
                ],
            },
        ];
        for (t, table) in tables.iter().enumerate() {
            if let Err(msg) = check_orthogonality(table) {
                panic!(
                    "built-in S_{} character table is inconsistent: {msg}",
                    t + 1
                );
            }
        }
        tables
    })
}

fn check_orthogonality(table: &CharacterTableSt) -> std::result::Result<(), String> {
    let order: usize = table.sizes.iter().sum();
    // Column orthogonality: Σ_χ χ(a) χ(b) = δ_ab · |G| / |class a|.
    for a in 0..table.classes.len() {
        for b in 0..table.classes.len() {
            let s: i64 = table.rows.iter().map(|(_, r)| r[a] * r[b]).sum();
            let expected = if a == b {
                (order / table.sizes[a]) as i64
            } else {
                0
            };
            if s != expected {
                return Err(format!("columns {a},{b}: {s} != {expected}"));
            }
        }
    }
    Ok(())
}

/// Forces the consistency check of the built-in S_t tables.
pub fn validate_character_tables() {
    let _ = tables();
}

/// Value of the S_t character labelled `gamma` on permutations with the given cycle type.
pub fn symmetric_group_character(gamma: &YoungDiagram, cycle_type: &[usize]) -> Result<f64> {
    let t = gamma.boxes();
    if t == 0 || t > MAX_ORDER {
        return Err(Error::UnsupportedOrder {
            t,
            reason: "S_t characters are tabulated for t ≤ 4",
        });
    }
    let table = &tables()[t - 1];
    let col = table
        .classes
        .iter()
        .position(|c| c.as_slice() == cycle_type)
        .ok_or_else(|| {
            Error::Precondition(format!(
                "cycle type {cycle_type:?} does not belong to S_{t}"
            ))
        })?;
    let row = table
        .rows
        .iter()
        .find(|(p, _)| p.as_slice() == gamma.row_lengths())
        .ok_or_else(|| Error::InvalidDiagram(gamma.row_lengths().to_vec()))?;
    Ok(row.1[col] as f64)
}
