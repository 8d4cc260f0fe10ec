//! Characters of symmetrized tensor powers restricted to finite groups, and
//! the irreducibility / intertwiner conditions that certify a product of
//! groups as a design.
//!
//! A group enters either as an enumerated matrix group (sums run over
//! elements) or as an ingested character table with power maps (sums run
//! over conjugacy classes).

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use rayon::prelude::*;
use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::designs::{
    product_design, verify_design_moment, MomentReport, VerifyOptions, WeightedUnitarySet,
};
use crate::error::{Error, Result};
use crate::tensorlin::perm::{symmetric_group_character, MAX_ORDER};
use crate::tensorlin::{check_caps, ComplexMatrix, Permutation, YoungDiagram, C64, ZERO};

pub const DEFAULT_GROUP_CAP: usize = 100_000;
pub const MULTIPLICITY_TOL: f64 = 1e-6;
pub const ORTHOGONALITY_TOL: f64 = 1e-8;
const GRID: f64 = 1e9;
const CONFIRM_TOL: f64 = 1e-9;

fn grid_key(m: &ComplexMatrix) -> Vec<i64> {
    m.data()
        .iter()
        .flat_map(|z| [(z.re * GRID).round() as i64, (z.im * GRID).round() as i64])
        .collect()
}

/// A finite group of unitaries with its materialized elements.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    pub name: String,
    dim: usize,
    generators: Vec<ComplexMatrix>,
    elements: Vec<ComplexMatrix>,
    index: HashMap<Vec<i64>, Vec<usize>>,
}

impl MatrixGroup {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn find(&self, m: &ComplexMatrix) -> Option<usize> {
        self.index
            .get(&grid_key(m))?
            .iter()
            .copied()
            .find(|&i| self.elements[i].max_abs_diff(m) <= CONFIRM_TOL)
    }

    fn insert(&mut self, m: ComplexMatrix) -> bool {
        if self.find(&m).is_some() {
            return false;
        }
        self.index
            .entry(grid_key(&m))
            .or_default()
            .push(self.elements.len());
        self.elements.push(m);
        true
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Conjugacy classes as lists of element indices, in first-seen order.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.order()];
        let mut classes = Vec::new();
        for x in 0..self.order() {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut members = Vec::new();
            for g in &self.elements {
                let y = &(g * &self.elements[x]) * &g.adjoint();
                let j = self.find(&y).expect("closed group contains conjugates");
                if class_of[j] == usize::MAX {
                    class_of[j] = classes.len();
                    members.push(j);
                }
            }
            classes.push(members);
        }
        classes
    }

    /// Character data with one "class" per element.
    pub fn class_data(&self) -> ClassData {
        let w = 1.0 / self.order() as f64;
        let powers = self.elements.par_iter().map(power_traces).collect();
        ClassData {
            weights: vec![w; self.order()],
            powers,
        }
    }

    /// Character data over the derived conjugacy classes.
    pub fn class_data_by_classes(&self) -> ClassData {
        let classes = self.conjugacy_classes();
        let n = self.order() as f64;
        ClassData {
            weights: classes.iter().map(|c| c.len() as f64 / n).collect(),
            powers: classes
                .iter()
                .map(|c| power_traces(&self.elements[c[0]]))
                .collect(),
        }
    }
}

fn power_traces(g: &ComplexMatrix) -> [C64; MAX_ORDER + 1] {
    let mut out = [ZERO; MAX_ORDER + 1];
    out[0] = C64::new(g.rows() as f64, 0.0);
    let mut p = g.clone();
    for slot in out.iter_mut().skip(1) {
        *slot = p.trace();
        p = &p * g;
    }
    out
}

/// Breadth-first closure under left multiplication by the generators.
pub fn close_group(generators: &[ComplexMatrix], cap: usize) -> Result<MatrixGroup> {
    let Some(first) = generators.first() else {
        return Err(Error::Empty);
    };
    let dim = first.rows();
    for (i, g) in generators.iter().enumerate() {
        if g.rows() != dim || g.cols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: g.rows(),
            });
        }
        let dev = g.unitarity_deviation();
        if dev > 1e-10 {
            return Err(Error::NotUnitary {
                index: i,
                deviation: dev,
            });
        }
    }
    let mut group = MatrixGroup {
        name: String::new(),
        dim,
        generators: generators.to_vec(),
        elements: Vec::new(),
        index: HashMap::new(),
    };
    group.insert(ComplexMatrix::identity(dim));
    let mut frontier = 0;
    while frontier < group.elements.len() {
        let x = group.elements[frontier].clone();
        for g in generators {
            if group.insert(g * &x) && group.elements.len() > cap {
                return Err(Error::GroupTooLarge { cap });
            }
        }
        frontier += 1;
    }
    Ok(group)
}

/// A class function source: weights `|C|/|G|` per class and `χ(g^k)` for `k = 0..=4`
/// (slot 0 holds `χ(1)`).
#[derive(Clone, Debug)]
pub struct ClassData {
    pub weights: Vec<f64>,
    pub powers: Vec<[C64; MAX_ORDER + 1]>,
}

impl ClassData {
    /// Class-weighted `⟨a, b⟩ = Σ_C w_C conj(a_C) b_C`.
    pub fn inner(&self, a: &[C64], b: &[C64]) -> C64 {
        self.weights
            .iter()
            .zip(a.iter().zip(b))
            .map(|(w, (x, y))| x.conj() * y * *w)
            .sum()
    }

    pub fn rep_values(&self) -> Vec<C64> {
        self.powers.iter().map(|p| p[1]).collect()
    }
}

/// `χ_γ(g) = (1/t!) Σ_π χ^γ(π) Π_k χ(g^k)^{a_k(π)}`.
pub fn plethysm_character(data: &ClassData, gamma: &YoungDiagram) -> Result<Vec<C64>> {
    let t = gamma.boxes();
    if t == 0 || t > MAX_ORDER {
        return Err(Error::UnsupportedOrder {
            t,
            reason: "plethysms are computed for t ≤ 4",
        });
    }
    let perms = Permutation::all(t);
    let mut terms: Vec<(f64, Vec<usize>)> = Vec::new();
    for p in &perms {
        let ct = p.cycle_type();
        match terms.iter_mut().find(|(_, c)| *c == ct) {
            Some(entry) => entry.0 += 1.0,
            None => terms.push((1.0, ct)),
        }
    }
    for (coeff, ct) in terms.iter_mut() {
        *coeff *= symmetric_group_character(gamma, ct)? / perms.len() as f64;
    }
    Ok(data
        .powers
        .iter()
        .map(|p| {
            terms
                .iter()
                .map(|(c, ct)| ct.iter().map(|&k| p[k]).product::<C64>() * *c)
                .sum()
        })
        .collect())
}

fn integer_value(z: C64) -> Result<i64> {
    let r = z.re.round();
    if (z.re - r).abs() > MULTIPLICITY_TOL || z.im.abs() > MULTIPLICITY_TOL {
        return Err(Error::NonIntegerMultiplicity { value: z.re });
    }
    Ok(r as i64)
}

/// `⟨χ_γ, χ_γ⟩ = 1`.
pub fn check_condition_one(data: &ClassData, gamma: &YoungDiagram) -> Result<bool> {
    let chi = plethysm_character(data, gamma)?;
    Ok(integer_value(data.inner(&chi, &chi))? == 1)
}

/// `⟨χ_γ, χ_η⟩ = 0`, that is, no common irreducible constituent.
pub fn check_condition_two(
    data: &ClassData,
    gamma: &YoungDiagram,
    eta: &YoungDiagram,
) -> Result<bool> {
    if gamma == eta {
        return Err(Error::Precondition(
            "condition two compares distinct diagrams".into(),
        ));
    }
    let a = plethysm_character(data, gamma)?;
    let b = plethysm_character(data, eta)?;
    Ok(integer_value(data.inner(&a, &b))? == 0)
}

// ---- character tables ----

/// Parses `{re, im}`, a number, or `"a+b*sqrt(n)"` with rational `a`, `b` and integer `n`
/// (negative `n` gives `i·b·√|n|`).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CharValue {
    Complex { re: f64, im: f64 },
    Real(f64),
    Text(String),
}

fn parse_rational(s: &str) -> Result<f64> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let d: f64 = d.parse().map_err(|_| bad())?;
            if d == 0.0 {
                return Err(bad());
            }
            Ok(n.parse::<f64>().map_err(|_| bad())? / d)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

fn quadratic_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r"^(?P<a>[+-]?\d+(?:\.\d+)?(?:/\d+)?)?(?:(?P<sign>[+-])?(?:(?P<b>\d+(?:\.\d+)?(?:/\d+)?)\*)?sqrt\((?P<n>-?\d+)\))?$",
        )
        .expect("valid regex")
    })
}

impl CharValue {
    pub fn value(&self) -> Result<C64> {
        match self {
            CharValue::Complex { re, im } => Ok(C64::new(*re, *im)),
            CharValue::Real(x) => Ok(C64::new(*x, 0.0)),
            CharValue::Text(s) => parse_quadratic(s),
        }
    }
}

pub fn parse_quadratic(s: &str) -> Result<C64> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let caps = quadratic_regex()
        .captures(&compact)
        .ok_or_else(|| Error::Parse(format!("{s:?} is not of the form a+b*sqrt(n)")))?;
    let a = caps
        .name("a")
        .map(|m| parse_rational(m.as_str()))
        .transpose()?;
    let Some(n) = caps.name("n") else {
        return a
            .map(|a| C64::new(a, 0.0))
            .ok_or_else(|| Error::Parse(format!("empty value {s:?}")));
    };
    let sign = caps.name("sign").map(|m| m.as_str());
    if a.is_some() && sign.is_none() {
        return Err(Error::Parse(format!(
            "{s:?} is missing a sign before the radical"
        )));
    }
    let b = caps
        .name("b")
        .map(|m| parse_rational(m.as_str()))
        .transpose()?
        .unwrap_or(1.0);
    let b = if sign == Some("-") { -b } else { b };
    let n: i64 = n
        .as_str()
        .parse()
        .map_err(|_| Error::Parse(format!("bad radicand in {s:?}")))?;
    let root = (n.unsigned_abs() as f64).sqrt();
    let radical = if n < 0 {
        C64::new(0.0, b * root)
    } else {
        C64::new(b * root, 0.0)
    };
    Ok(C64::new(a.unwrap_or(0.0), 0.0) + radical)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassInfo {
    pub size: u64,
    pub element_order: u64,
}

/// Either an index into `irreducibles` or explicit values per class.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RepSpec {
    Index(usize),
    Values(Vec<CharValue>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharacterTableJson {
    pub name: String,
    pub order: u64,
    pub classes: Vec<ClassInfo>,
    #[serde(default)]
    pub power_maps: BTreeMap<String, Vec<usize>>,
    pub irreducibles: Vec<Vec<CharValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rep_character: Option<RepSpec>,
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub name: String,
    pub order: u64,
    pub class_sizes: Vec<u64>,
    pub element_orders: Vec<u64>,
    power_maps: BTreeMap<usize, Vec<usize>>,
    pub irreducibles: Vec<Vec<C64>>,
    rep_character: Option<Vec<C64>>,
}

impl CharacterTable {
    pub fn from_json(j: &CharacterTableJson) -> Result<Self> {
        let n = j.classes.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let total: u64 = j.classes.iter().map(|c| c.size).sum();
        if total != j.order {
            return Err(Error::Parse(format!(
                "class sizes sum to {total}, order is {}",
                j.order
            )));
        }
        let mut power_maps = BTreeMap::new();
        for (k, map) in &j.power_maps {
            let k: usize = k
                .parse()
                .map_err(|_| Error::Parse(format!("power map key {k:?} is not an integer")))?;
            if map.len() != n || map.iter().any(|&c| c >= n) {
                return Err(Error::Parse(format!(
                    "power map {k} must list {n} class indices below {n}"
                )));
            }
            power_maps.insert(k, map.clone());
        }
        if let Some(m1) = power_maps.get(&1) {
            if m1.iter().enumerate().any(|(i, &c)| i != c) {
                return Err(Error::Parse("power map 1 must be the identity".into()));
            }
        }
        if j.irreducibles.len() != n {
            return Err(Error::Parse(format!(
                "{} irreducibles for {n} classes",
                j.irreducibles.len()
            )));
        }
        let parse_row = |row: &Vec<CharValue>| -> Result<Vec<C64>> {
            if row.len() != n {
                return Err(Error::Parse(format!(
                    "character row has {} values for {n} classes",
                    row.len()
                )));
            }
            row.iter().map(CharValue::value).collect()
        };
        let irreducibles = j
            .irreducibles
            .iter()
            .map(parse_row)
            .collect::<Result<Vec<_>>>()?;
        let rep_character = match &j.rep_character {
            None => None,
            Some(RepSpec::Index(i)) => Some(
                irreducibles
                    .get(*i)
                    .cloned()
                    .ok_or_else(|| Error::Parse(format!("rep_character index {i} out of range")))?,
            ),
            Some(RepSpec::Values(v)) => Some(parse_row(v)?),
        };
        let table = Self {
            name: j.name.clone(),
            order: j.order,
            class_sizes: j.classes.iter().map(|c| c.size).collect(),
            element_orders: j.classes.iter().map(|c| c.element_order).collect(),
            power_maps,
            irreducibles,
            rep_character,
        };
        table.check_orthogonality()?;
        Ok(table)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(s)?)
    }

    pub fn class_count(&self) -> usize {
        self.class_sizes.len()
    }

    fn weights(&self) -> Vec<f64> {
        self.class_sizes
            .iter()
            .map(|&s| s as f64 / self.order as f64)
            .collect()
    }

    pub fn inner(&self, a: &[C64], b: &[C64]) -> C64 {
        self.weights()
            .iter()
            .zip(a.iter().zip(b))
            .map(|(w, (x, y))| x.conj() * y * *w)
            .sum()
    }

    fn check_orthogonality(&self) -> Result<()> {
        for (i, a) in self.irreducibles.iter().enumerate() {
            for (j, b) in self.irreducibles.iter().enumerate() {
                let v = self.inner(a, b);
                let expected = if i == j { 1.0 } else { 0.0 };
                if (v - C64::new(expected, 0.0)).norm() > ORTHOGONALITY_TOL {
                    return Err(Error::Parse(format!(
                        "{}: irreducibles {i} and {j} have inner product {v}",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Class map `C ↦ class of g^k`; `k = 4` falls back to squaring twice.
    pub fn power_map(&self, k: usize) -> Result<Vec<usize>> {
        if k == 1 {
            return Ok((0..self.class_count()).collect());
        }
        if let Some(m) = self.power_maps.get(&k) {
            return Ok(m.clone());
        }
        if k == 4 {
            if let Some(m2) = self.power_maps.get(&2) {
                return Ok(m2.iter().map(|&c| m2[c]).collect());
            }
        }
        Err(Error::MissingPowerMap(k))
    }

    /// The character from the file, or the first irreducible of degree `dim`.
    pub fn default_rep(&self, dim: usize) -> Result<Vec<C64>> {
        if let Some(r) = &self.rep_character {
            return Ok(r.clone());
        }
        self.irreducibles
            .iter()
            .find(|row| (row[0].re - dim as f64).abs() < 1e-9 && row[0].im.abs() < 1e-9)
            .cloned()
            .ok_or_else(|| {
                Error::Parse(format!("{} has no irreducible of degree {dim}", self.name))
            })
    }

    /// Class data for the representation with character `rep`, using power maps up to `t`.
    pub fn class_data(&self, rep: &[C64], t: usize) -> Result<ClassData> {
        let n = self.class_count();
        if rep.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rep.len(),
            });
        }
        let maps = (1..=t)
            .map(|k| self.power_map(k))
            .collect::<Result<Vec<_>>>()?;
        let identity = (0..n).find(|&c| self.element_orders[c] == 1).unwrap_or(0);
        let powers = (0..n)
            .map(|c| {
                let mut p = [ZERO; MAX_ORDER + 1];
                p[0] = rep[identity];
                for (k, map) in maps.iter().enumerate() {
                    p[k + 1] = rep[map[c]];
                }
                p
            })
            .collect();
        Ok(ClassData {
            weights: self.weights(),
            powers,
        })
    }
}

/// A group supplied to the theorem check.
#[derive(Clone, Debug)]
pub enum GroupInput {
    Matrix(MatrixGroup),
    Table {
        table: CharacterTable,
        rep: Vec<C64>,
    },
}

impl GroupInput {
    pub fn name(&self) -> &str {
        match self {
            GroupInput::Matrix(g) => &g.name,
            GroupInput::Table { table, .. } => &table.name,
        }
    }

    /// Degree of the representation.
    pub fn dim(&self) -> usize {
        match self {
            GroupInput::Matrix(g) => g.dim(),
            GroupInput::Table { rep, table } => {
                let identity = (0..table.class_count())
                    .find(|&c| table.element_orders[c] == 1)
                    .unwrap_or(0);
                rep[identity].re.round() as usize
            }
        }
    }

    pub fn class_data(&self, t: usize) -> Result<ClassData> {
        match self {
            GroupInput::Matrix(g) => Ok(g.class_data()),
            GroupInput::Table { table, rep } => table.class_data(rep, t),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramCoverage {
    pub gamma: YoungDiagram,
    /// `⟨χ_γ, χ_γ⟩` for each group, in input order.
    pub norms: Vec<i64>,
    /// Names of groups satisfying condition one.
    pub covered_by: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCoverage {
    pub gamma: YoungDiagram,
    pub eta: YoungDiagram,
    pub overlaps: Vec<i64>,
    pub covered_by: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremReport {
    pub t: usize,
    pub dimension: usize,
    pub groups: Vec<String>,
    pub diagrams: Vec<DiagramCoverage>,
    pub pairs: Vec<PairCoverage>,
    pub uncovered_diagrams: Vec<YoungDiagram>,
    pub uncovered_pairs: Vec<(YoungDiagram, YoungDiagram)>,
    pub pass: bool,
    /// Numerical moment check of the product, when every group is a matrix group.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numerical: Option<MomentReport>,
}

/// Upper bound on `Σ|G_j|` for the numerical cross-check.
pub const NUMERICAL_CHECK_CAP: usize = 20_000;

/// Checks both conditions for every diagram in `Γ(t, d)` and every ordered pair of distinct diagrams.
pub fn check_theorem_conditions(
    groups: &[GroupInput],
    t: usize,
    d: usize,
) -> Result<TheoremReport> {
    if groups.is_empty() {
        return Err(Error::Empty);
    }
    if t == 0 || t > MAX_ORDER {
        return Err(Error::UnsupportedOrder {
            t,
            reason: "conditions are checked for t ≤ 4",
        });
    }
    for g in groups {
        if g.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: g.dim(),
            });
        }
    }
    let gammas = YoungDiagram::sectors(t, d);
    let data = groups
        .iter()
        .map(|g| g.class_data(t))
        .collect::<Result<Vec<_>>>()?;
    let chars: Vec<Vec<Vec<C64>>> = data
        .iter()
        .map(|cd| {
            gammas
                .iter()
                .map(|gm| plethysm_character(cd, gm))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let names: Vec<String> = groups.iter().map(|g| g.name().to_string()).collect();

    let mut diagrams = Vec::new();
    for (i, gamma) in gammas.iter().enumerate() {
        let norms = (0..groups.len())
            .map(|g| integer_value(data[g].inner(&chars[g][i], &chars[g][i])))
            .collect::<Result<Vec<_>>>()?;
        let covered_by = (0..groups.len())
            .filter(|&g| norms[g] == 1)
            .map(|g| names[g].clone())
            .collect();
        diagrams.push(DiagramCoverage {
            gamma: gamma.clone(),
            norms,
            covered_by,
        });
    }
    let mut pairs = Vec::new();
    for (i, gamma) in gammas.iter().enumerate() {
        for (j, eta) in gammas.iter().enumerate() {
            if i == j {
                continue;
            }
            let overlaps = (0..groups.len())
                .map(|g| integer_value(data[g].inner(&chars[g][i], &chars[g][j])))
                .collect::<Result<Vec<_>>>()?;
            let covered_by = (0..groups.len())
                .filter(|&g| overlaps[g] == 0)
                .map(|g| names[g].clone())
                .collect();
            pairs.push(PairCoverage {
                gamma: gamma.clone(),
                eta: eta.clone(),
                overlaps,
                covered_by,
            });
        }
    }
    let uncovered_diagrams: Vec<_> = diagrams
        .iter()
        .filter(|c| c.covered_by.is_empty())
        .map(|c| c.gamma.clone())
        .collect();
    let uncovered_pairs: Vec<_> = pairs
        .iter()
        .filter(|c| c.covered_by.is_empty())
        .map(|c| (c.gamma.clone(), c.eta.clone()))
        .collect();
    let pass = uncovered_diagrams.is_empty() && uncovered_pairs.is_empty();

    let matrix_groups: Option<Vec<&MatrixGroup>> = groups
        .iter()
        .map(|g| match g {
            GroupInput::Matrix(m) => Some(m),
            GroupInput::Table { .. } => None,
        })
        .collect();
    let numerical = match matrix_groups {
        Some(ms)
            if check_caps(d, t).is_ok()
                && ms.iter().map(|m| m.order()).sum::<usize>() <= NUMERICAL_CHECK_CAP =>
        {
            let sets = ms
                .iter()
                .map(|m| WeightedUnitarySet::group(m.elements().to_vec()))
                .collect::<Result<Vec<_>>>()?;
            Some(verify_design_moment(
                &product_design(sets)?,
                t,
                VerifyOptions::default(),
            )?)
        }
        _ => None,
    };
    Ok(TheoremReport {
        t,
        dimension: d,
        groups: names,
        diagrams,
        pairs,
        uncovered_diagrams,
        uncovered_pairs,
        pass,
        numerical,
    })
}

/// On-disk generator list for a matrix group.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorsJson {
    pub name: String,
    pub dimension: usize,
    pub generators: Vec<crate::designs::MatrixJson>,
}

impl GeneratorsJson {
    pub fn new(name: &str, generators: &[ComplexMatrix]) -> Self {
        Self {
            name: name.to_string(),
            dimension: generators.first().map_or(0, |g| g.rows()),
            generators: generators
                .iter()
                .map(crate::designs::MatrixJson::from_matrix)
                .collect(),
        }
    }

    pub fn close(&self, cap: usize) -> Result<MatrixGroup> {
        let gens = self
            .generators
            .iter()
            .map(|g| g.to_matrix())
            .collect::<Result<Vec<_>>>()?;
        if gens.iter().any(|g| g.rows() != self.dimension) {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                found: gens[0].rows(),
            });
        }
        Ok(close_group(&gens, cap)?.with_name(self.name.clone()))
    }
}
