//! Finite simplicial sets in Eilenberg-Zilber canonical form.
//!
//! A simplex is a nondegenerate generator together with the set of
//! positions its vertex map collapses. The word `s_{j_1}⋯s_{j_t}` with
//! `j_1 > … > j_t` corresponds to the collapse set `{j_1, …, j_t}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linear::Graded;

/// Largest simplex dimension representable by the collapse bitmask.
pub const MAX_DIM: usize = 31;

/// A nondegenerate simplex of one simplicial set.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub dim: u32,
    pub index: u32,
}

impl Cell {
    pub fn new(dim: usize, index: usize) -> Cell {
        Cell {
            dim: dim as u32,
            index: index as u32,
        }
    }
}

/// `x<dim>.<index>`, compact enough for witnesses.
impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}.{}", self.dim, self.index)
    }
}

impl Graded for Cell {
    fn degree(&self) -> usize {
        self.dim as usize
    }
}

/// A simplex `s_J g` in canonical form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex {
    dim: u32,
    collapse: u32,
    cell: Cell,
}

impl Simplex {
    pub fn nondegenerate(cell: Cell) -> Simplex {
        Simplex {
            dim: cell.dim,
            collapse: 0,
            cell,
        }
    }

    /// Builds `s_{j_1}⋯s_{j_t} g`, normalizing the word with the simplicial identities.
    pub fn from_word(word: &[usize], cell: Cell) -> Result<Simplex> {
        let mut x = Simplex::nondegenerate(cell);
        for &j in word.iter().rev() {
            x = x.degeneracy(j).map_err(|_| Error::InvalidWord {
                word: word.to_vec(),
                dim: cell.dim as usize,
            })?;
        }
        Ok(x)
    }

    /// `s_J g` from a collapse set given as a bitmask.
    pub fn degenerate(cell: Cell, dim: usize, collapse: u32) -> Simplex {
        debug_assert_eq!(collapse.count_ones() as usize + cell.dim as usize, dim);
        debug_assert_eq!(collapse & !low_mask(dim), 0);
        Simplex {
            dim: dim as u32,
            collapse,
            cell,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn cell(&self) -> Cell {
        self.cell
    }

    pub fn collapse(&self) -> u32 {
        self.collapse
    }

    pub fn is_degenerate(&self) -> bool {
        self.collapse != 0
    }

    /// The nondegenerate generator, if this simplex is one.
    pub fn as_cell(&self) -> Option<Cell> {
        (!self.is_degenerate()).then_some(self.cell)
    }

    /// Strictly decreasing degeneracy indices.
    pub fn word(&self) -> Vec<usize> {
        (0..32).rev().filter(|j| self.collapse >> j & 1 == 1).collect()
    }

    /// The vertex map `[dim] → [cell.dim]` of the collapse.
    pub fn vertex_map(&self) -> Vec<usize> {
        (0..=self.dim())
            .map(|k| k - (self.collapse & low_mask(k)).count_ones() as usize)
            .collect()
    }

    /// `s_i` applied to this simplex.
    pub fn degeneracy(&self, i: usize) -> Result<Simplex> {
        if i > self.dim() {
            return Err(Error::IndexOutOfRange {
                index: i,
                dim: self.dim(),
            });
        }
        if self.dim() + 1 > MAX_DIM {
            return Err(Error::DimensionTooLarge {
                dim: self.dim() + 1,
                max: MAX_DIM,
            });
        }
        let low = self.collapse & low_mask(i);
        let high = (self.collapse & !low_mask(i)) << 1;
        Ok(Simplex {
            dim: self.dim + 1,
            collapse: low | (1 << i) | high,
            cell: self.cell,
        })
    }
}

fn low_mask(k: usize) -> u32 {
    if k >= 32 {
        u32::MAX
    } else {
        (1u32 << k) - 1
    }
}

/// Packs the bits of `value` at the positions set in `keep` into the low bits.
pub(crate) fn compress_bits(value: u32, keep: u32) -> u32 {
    let mut out = 0;
    let mut k = 0;
    for i in 0..32 {
        if keep >> i & 1 == 1 {
            if value >> i & 1 == 1 {
                out |= 1 << k;
            }
            k += 1;
        }
    }
    out
}

/// All `k`-element subsets of `items`, lexicographically.
pub(crate) fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for i in start..items.len() {
            if items.len() - i < need {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= items.len() {
        go(items, k, 0, &mut Vec::new(), &mut out);
    }
    out
}

pub(crate) fn mask_of(items: &[usize]) -> u32 {
    items.iter().fold(0, |m, &i| m | (1 << i))
}

/// A dimensionwise finite simplicial set.
#[derive(Clone, PartialEq, Eq)]
pub struct SimplicialSet {
    name: String,
    labels: Vec<Vec<String>>,
    /// `faces[n][g][i]` is `∂_i` of generator `g` of dimension `n ≥ 1`.
    faces: Vec<Vec<Vec<Simplex>>>,
}

impl fmt::Debug for SimplicialSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:?}", self.name, self.counts())
    }
}

impl SimplicialSet {
    /// Validates and assembles a simplicial set.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<Simplex>>>,
    ) -> Result<SimplicialSet> {
        let set = Self::new_unchecked(name, labels, faces)?;
        set.validate()?;
        Ok(set)
    }

    fn new_unchecked(
        name: impl Into<String>,
        mut labels: Vec<Vec<String>>,
        mut faces: Vec<Vec<Vec<Simplex>>>,
    ) -> Result<SimplicialSet> {
        while labels.len() > 1 && labels.last().is_some_and(Vec::is_empty) {
            labels.pop();
        }
        if labels.is_empty() {
            return Err(Error::Malformed("no generators".into()));
        }
        if labels.len() > MAX_DIM + 1 {
            return Err(Error::DimensionTooLarge {
                dim: labels.len() - 1,
                max: MAX_DIM,
            });
        }
        faces.resize(labels.len(), Vec::new());
        faces.truncate(labels.len());
        Ok(SimplicialSet {
            name: name.into(),
            labels,
            faces,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> SimplicialSet {
        self.name = name.into();
        self
    }

    pub fn top_dimension(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn count(&self, dim: usize) -> usize {
        self.labels.get(dim).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn cells(&self, dim: usize) -> impl Iterator<Item = Cell> + '_ {
        (0..self.count(dim)).map(move |i| Cell::new(dim, i))
    }

    pub fn all_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..=self.top_dimension()).flat_map(move |d| self.cells(d))
    }

    pub fn label(&self, cell: Cell) -> &str {
        &self.labels[cell.dim as usize][cell.index as usize]
    }

    pub fn contains(&self, cell: Cell) -> bool {
        (cell.index as usize) < self.count(cell.dim as usize)
    }

    /// Exactly one simplex in each dimension `≤ r`.
    pub fn is_reduced(&self, r: usize) -> bool {
        self.count(0) == 1 && (1..=r).all(|d| self.count(d) == 0)
    }

    pub fn basepoint(&self) -> Option<Cell> {
        (self.count(0) == 1).then(|| Cell::new(0, 0))
    }

    /// The stored faces of a generator.
    pub fn generator_faces(&self, cell: Cell) -> &[Simplex] {
        &self.faces[cell.dim as usize][cell.index as usize]
    }

    /// `K(θ)x` for a monotone `θ : [k] → [dim x]`, given by its values.
    pub fn apply(&self, theta: &[usize], x: &Simplex) -> Simplex {
        let eta = x.vertex_map();
        let composite: Vec<usize> = theta.iter().map(|&t| eta[t]).collect();
        let image = composite.iter().fold(0u32, |m, &v| m | (1 << v));
        let y = self.face_by_injection(x.cell, image);
        let eta_y = y.vertex_map();
        let total: Vec<usize> = composite
            .iter()
            .map(|&v| eta_y[(image & low_mask(v)).count_ones() as usize])
            .collect();
        let collapse = (0..total.len().saturating_sub(1))
            .filter(|&j| total[j] == total[j + 1])
            .fold(0u32, |m, j| m | (1 << j));
        Simplex {
            dim: (theta.len() - 1) as u32,
            collapse,
            cell: y.cell,
        }
    }

    /// The face of a generator spanned by the vertex set `mask`.
    fn face_by_injection(&self, cell: Cell, mask: u32) -> Simplex {
        let d = cell.dim as usize;
        let full = low_mask(d + 1);
        if mask == full {
            return Simplex::nondegenerate(cell);
        }
        let missing = (0..=d).rev().find(|&i| mask >> i & 1 == 0).expect("proper subset");
        let y = self.faces[d][cell.index as usize][missing];
        let shifted = (mask & low_mask(missing)) | ((mask >> (missing + 1)) << missing);
        let theta: Vec<usize> = (0..d).filter(|&v| shifted >> v & 1 == 1).collect();
        self.apply(&theta, &y)
    }

    /// `∂_i x`.
    pub fn face(&self, i: usize, x: &Simplex) -> Result<Simplex> {
        let n = x.dim();
        if n == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, dim: n });
        }
        let theta: Vec<usize> = (0..=n).filter(|&v| v != i).collect();
        Ok(self.apply(&theta, x))
    }

    /// `s_i x`.
    pub fn degeneracy(&self, i: usize, x: &Simplex) -> Result<Simplex> {
        x.degeneracy(i)
    }

    /// The face `x_{v_0 … v_k}` on the listed vertices.
    pub fn sub_simplex(&self, x: &Simplex, vertices: &[usize]) -> Simplex {
        self.apply(vertices, x)
    }

    fn check_simplex(&self, s: &Simplex, expected_dim: usize, context: &str) -> Result<()> {
        let cell = s.cell;
        if !self.contains(cell) {
            return Err(Error::Malformed(format!(
                "{context}: reference to missing generator {}/{}",
                cell.dim, cell.index
            )));
        }
        if s.dim() != expected_dim
            || s.collapse.count_ones() as usize + cell.dim as usize != expected_dim
            || s.collapse & !low_mask(expected_dim) != 0
        {
            return Err(Error::Malformed(format!("{context}: face has wrong dimension")));
        }
        Ok(())
    }

    /// Checks face shapes and the simplicial identities on every generator.
    pub fn validate(&self) -> Result<()> {
        if self.count(0) == 0 {
            return Err(Error::Malformed("no vertices".into()));
        }
        for n in 0..=self.top_dimension() {
            if self.faces[n].len() != self.count(n) {
                return Err(Error::Malformed(format!("dimension {n}: face table size mismatch")));
            }
            for (g, faces) in self.faces[n].iter().enumerate() {
                let expected = if n == 0 { 0 } else { n + 1 };
                if faces.len() != expected {
                    return Err(Error::Malformed(format!(
                        "generator {n}/{g} has {} faces, expected {expected}",
                        faces.len()
                    )));
                }
                for (i, s) in faces.iter().enumerate() {
                    self.check_simplex(s, n - 1, &format!("face {i} of {n}/{g}"))?;
                }
            }
        }
        for n in 2..=self.top_dimension() {
            for g in self.cells(n) {
                let x = Simplex::nondegenerate(g);
                for j in 0..=n {
                    for i in 0..j {
                        let a = self.face(i, &self.face(j, &x)?)?;
                        let b = self.face(j - 1, &self.face(i, &x)?)?;
                        if a != b {
                            return Err(Error::SimplicialIdentity(format!(
                                "∂{i}∂{j} ≠ ∂{}∂{i} on {} ({n}/{})",
                                j - 1,
                                self.label(g),
                                g.index
                            )));
                        }
                    }
                }
            }
        }
        for n in 0..self.top_dimension().min(MAX_DIM - 1) {
            for g in self.cells(n) {
                let x = Simplex::nondegenerate(g);
                for j in 0..=n {
                    let sx = x.degeneracy(j)?;
                    for i in 0..=n + 1 {
                        let got = self.face(i, &sx)?;
                        let want = if i < j {
                            if n == 0 {
                                unreachable!()
                            }
                            self.face(i, &x)?.degeneracy(j - 1)?
                        } else if i == j || i == j + 1 {
                            x
                        } else {
                            self.face(i - 1, &x)?.degeneracy(j)?
                        };
                        if got != want {
                            return Err(Error::SimplicialIdentity(format!(
                                "∂{i}s{j} on {}",
                                self.label(g)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Human-readable form of a simplex, e.g. `s1s0·ι`.
    pub fn display(&self, s: &Simplex) -> String {
        let word = s.word();
        if word.is_empty() {
            self.label(s.cell).to_string()
        } else {
            let w: String = word.iter().map(|j| format!("s{j}")).collect();
            format!("{w}·{}", self.label(s.cell))
        }
    }

    pub fn to_json(&self) -> SimplicialSetJson {
        let mut faces = BTreeMap::new();
        for n in 1..=self.top_dimension() {
            for (g, fs) in self.faces[n].iter().enumerate() {
                faces.insert(
                    format!("{n}/{g}"),
                    fs.iter()
                        .map(|s| SimplexJson {
                            word: s.word(),
                            dim: s.cell.dim as usize,
                            index: s.cell.index as usize,
                        })
                        .collect(),
                );
            }
        }
        SimplicialSetJson {
            name: Some(self.name.clone()),
            generators: self.labels.clone(),
            faces,
        }
    }

    pub fn from_json(doc: &SimplicialSetJson) -> Result<SimplicialSet> {
        let labels = doc.generators.clone();
        let mut faces: Vec<Vec<Vec<Simplex>>> =
            labels.iter().map(|l| vec![Vec::new(); l.len()]).collect();
        for (key, fs) in &doc.faces {
            let (n, g) = key
                .split_once('/')
                .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
                .ok_or_else(|| Error::Malformed(format!("bad face key `{key}`")))?;
            if n == 0 || n >= labels.len() || g >= labels[n].len() {
                return Err(Error::UnknownGenerator { dim: n, index: g });
            }
            let mut out = Vec::with_capacity(fs.len());
            for s in fs {
                if s.dim >= labels.len() || s.index >= labels[s.dim].len() {
                    return Err(Error::UnknownGenerator {
                        dim: s.dim,
                        index: s.index,
                    });
                }
                out.push(Simplex::from_word(&s.word, Cell::new(s.dim, s.index))?);
            }
            faces[n][g] = out;
        }
        SimplicialSet::new(doc.name.clone().unwrap_or_else(|| "json".into()), labels, faces)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexJson {
    pub word: Vec<usize>,
    pub dim: usize,
    pub index: usize,
}

/// The JSON document format for simplicial sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialSetJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub generators: Vec<Vec<String>>,
    #[serde(default)]
    pub faces: BTreeMap<String, Vec<SimplexJson>>,
}

/// The standard simplex `Δ[n]`; generators are the nonempty vertex subsets.
pub fn standard_simplex(n: usize) -> SimplicialSet {
    assert!(n <= MAX_DIM, "dimension {n} too large");
    let vertices: Vec<usize> = (0..=n).collect();
    let by_dim: Vec<Vec<Vec<usize>>> = (0..=n).map(|k| subsets(&vertices, k + 1)).collect();
    let index: HashMap<u32, usize> = by_dim
        .iter()
        .flat_map(|level| level.iter().enumerate().map(|(i, s)| (mask_of(s), i)))
        .collect();
    let labels = by_dim
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|s| {
                    let v: Vec<String> = s.iter().map(usize::to_string).collect();
                    format!("[{}]", v.join(","))
                })
                .collect()
        })
        .collect();
    let faces = by_dim
        .iter()
        .enumerate()
        .map(|(k, level)| {
            level
                .iter()
                .map(|s| {
                    if k == 0 {
                        return Vec::new();
                    }
                    (0..=k)
                        .map(|i| {
                            let mut t = s.clone();
                            t.remove(i);
                            Simplex::nondegenerate(Cell::new(k - 1, index[&mask_of(&t)]))
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    SimplicialSet::new_unchecked(format!("delta:{n}"), labels, faces).expect("well-formed")
}

/// A morphism of simplicial sets, stored on generators.
#[derive(Clone)]
pub struct SimplicialMap {
    source: Arc<SimplicialSet>,
    target: Arc<SimplicialSet>,
    images: Vec<Vec<Simplex>>,
}

impl fmt::Debug for SimplicialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.source.name(), self.target.name())
    }
}

impl SimplicialMap {
    /// Checks that the assignment commutes with faces and degeneracies.
    pub fn new(
        source: Arc<SimplicialSet>,
        target: Arc<SimplicialSet>,
        images: Vec<Vec<Simplex>>,
    ) -> Result<SimplicialMap> {
        let map = SimplicialMap {
            source,
            target,
            images,
        };
        map.validate()?;
        Ok(map)
    }

    pub fn source(&self) -> &Arc<SimplicialSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SimplicialSet> {
        &self.target
    }

    pub fn image(&self, cell: Cell) -> Simplex {
        self.images[cell.dim as usize][cell.index as usize]
    }

    pub fn apply(&self, x: &Simplex) -> Simplex {
        self.target.apply(&x.vertex_map(), &self.image(x.cell))
    }

    pub fn validate(&self) -> Result<()> {
        let src = &self.source;
        for n in 0..=src.top_dimension() {
            if self.images.get(n).map_or(0, Vec::len) != src.count(n) {
                return Err(Error::NotSimplicial(format!("missing images in dimension {n}")));
            }
            for g in src.cells(n) {
                let y = self.image(g);
                if y.dim() != n || !self.target.contains(y.cell) {
                    return Err(Error::NotSimplicial(format!(
                        "image of {} has the wrong dimension",
                        src.label(g)
                    )));
                }
                let x = Simplex::nondegenerate(g);
                if n >= 1 {
                    for i in 0..=n {
                        if self.apply(&src.face(i, &x)?) != self.target.face(i, &y)? {
                            return Err(Error::NotSimplicial(format!(
                                "∂{i} does not commute on {}",
                                src.label(g)
                            )));
                        }
                    }
                }
                if n < MAX_DIM {
                    for j in 0..=n {
                        if self.apply(&x.degeneracy(j)?) != y.degeneracy(j)? {
                            return Err(Error::NotSimplicial(format!(
                                "s{j} does not commute on {}",
                                src.label(g)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn identity(set: Arc<SimplicialSet>) -> SimplicialMap {
        let images = (0..=set.top_dimension())
            .map(|d| set.cells(d).map(Simplex::nondegenerate).collect())
            .collect();
        SimplicialMap {
            source: set.clone(),
            target: set,
            images,
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SimplicialMap) -> Result<SimplicialMap> {
        if self.target != other.source {
            return Err(Error::NotSimplicial("maps are not composable".into()));
        }
        let images = self
            .images
            .iter()
            .map(|level| level.iter().map(|y| other.apply(y)).collect())
            .collect();
        Ok(SimplicialMap {
            source: self.source.clone(),
            target: other.target.clone(),
            images,
        })
    }
}

/// `K/sk_r K` together with the quotient map.
pub fn skeletal_quotient_map(k: &Arc<SimplicialSet>, r: usize) -> Result<SimplicialMap> {
    if r >= k.top_dimension() {
        return Err(Error::Precondition {
            space: k.name().into(),
            requirement: format!("of dimension greater than {r}"),
        });
    }
    let top = k.top_dimension();
    let mut labels = vec![vec!["*".to_string()]];
    labels.resize(r + 1, Vec::new());
    let renumber = |c: Cell| -> Option<Cell> { (c.dim as usize > r).then_some(c) };
    for d in r + 1..=top {
        labels.push(k.cells(d).map(|c| k.label(c).to_string()).collect());
    }
    let basepoint = |dim: usize| Simplex::degenerate(Cell::new(0, 0), dim, low_mask(dim));
    let send = |s: &Simplex| -> Simplex {
        match renumber(s.cell) {
            Some(c) => Simplex::degenerate(c, s.dim(), s.collapse),
            None => basepoint(s.dim()),
        }
    };
    let mut faces = vec![vec![Vec::new()]];
    faces.resize(r + 1, Vec::new());
    for d in r + 1..=top {
        faces.push(
            k.cells(d)
                .map(|c| k.generator_faces(c).iter().map(send).collect())
                .collect(),
        );
    }
    let name = format!("{}/sk{r}", k.name());
    let q = Arc::new(SimplicialSet::new(name, labels, faces)?);
    let images = (0..=top)
        .map(|d| k.cells(d).map(|c| send(&Simplex::nondegenerate(c))).collect())
        .collect();
    SimplicialMap::new(k.clone(), q, images)
}

/// Collapses the `r`-skeleton of `K` to a point.
pub fn skeletal_quotient(k: &Arc<SimplicialSet>, r: usize) -> Result<SimplicialSet> {
    Ok((*skeletal_quotient_map(k, r)?.target).clone())
}

/// The simplicial `n`-sphere `Δ[n]/∂Δ[n]`.
pub fn sphere(n: usize) -> SimplicialSet {
    assert!(n >= 1, "spheres start in dimension 1");
    skeletal_quotient(&Arc::new(standard_simplex(n)), n - 1)
        .expect("valid quotient")
        .with_name(format!("sphere:{n}"))
}

/// `Δ[n]` modulo its 0-skeleton.
pub fn delta_bar(n: usize) -> SimplicialSet {
    assert!(n >= 1);
    skeletal_quotient(&Arc::new(standard_simplex(n)), 0)
        .expect("valid quotient")
        .with_name(format!("delta-bar:{n}"))
}

/// `Δ[n]` modulo its `r`-skeleton.
pub fn simplex_quotient(n: usize, r: usize) -> Result<SimplicialSet> {
    Ok(skeletal_quotient(&Arc::new(standard_simplex(n)), r)?.with_name(format!("quotient:{n},{r}")))
}

pub fn point() -> SimplicialSet {
    standard_simplex(0).with_name("point")
}

/// The product `K × L` with its generators materialized up to a dimension bound.
pub struct Product {
    left: Arc<SimplicialSet>,
    right: Arc<SimplicialSet>,
    set: Arc<SimplicialSet>,
    components: Vec<Vec<(Simplex, Simplex)>>,
    lookup: HashMap<(Simplex, Simplex), Cell>,
}

impl fmt::Debug for Product {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.set)
    }
}

impl Product {
    pub fn new(left: Arc<SimplicialSet>, right: Arc<SimplicialSet>) -> Result<Product> {
        let bound = left.top_dimension() + right.top_dimension();
        Self::with_bound(left, right, bound)
    }

    /// Materializes nondegenerate simplices of dimension `≤ bound`.
    pub fn with_bound(
        left: Arc<SimplicialSet>,
        right: Arc<SimplicialSet>,
        bound: usize,
    ) -> Result<Product> {
        let full = left.top_dimension() + right.top_dimension();
        let bound = bound.min(full);
        if bound > MAX_DIM {
            return Err(Error::DimensionTooLarge {
                dim: bound,
                max: MAX_DIM,
            });
        }
        let mut components: Vec<Vec<(Simplex, Simplex)>> = Vec::new();
        let mut lookup = HashMap::new();
        for n in 0..=bound {
            let mut level = Vec::new();
            let slots: Vec<usize> = (0..n).collect();
            for p in 0..=n.min(left.top_dimension()) {
                for q in 0..=n.min(right.top_dimension()) {
                    if p + q < n {
                        continue;
                    }
                    for a_set in subsets(&slots, n - p) {
                        let rest: Vec<usize> = slots.iter().copied().filter(|s| !a_set.contains(s)).collect();
                        for b_set in subsets(&rest, n - q) {
                            let (am, bm) = (mask_of(&a_set), mask_of(&b_set));
                            for a in left.cells(p) {
                                for b in right.cells(q) {
                                    let pair = (
                                        Simplex::degenerate(a, n, am),
                                        Simplex::degenerate(b, n, bm),
                                    );
                                    lookup.insert(pair, Cell::new(n, level.len()));
                                    level.push(pair);
                                }
                            }
                        }
                    }
                }
            }
            components.push(level);
        }
        let mut product = Product {
            left,
            right,
            set: Arc::new(SimplicialSet {
                name: String::new(),
                labels: vec![vec![]],
                faces: vec![vec![]],
            }),
            components,
            lookup,
        };
        let labels: Vec<Vec<String>> = product
            .components
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|(a, b)| format!("({},{})", product.left.display(a), product.right.display(b)))
                    .collect()
            })
            .collect();
        let faces: Vec<Vec<Vec<Simplex>>> = product
            .components
            .iter()
            .enumerate()
            .map(|(n, level)| {
                level
                    .iter()
                    .map(|(a, b)| {
                        if n == 0 {
                            return Vec::new();
                        }
                        (0..=n)
                            .map(|i| {
                                let fa = product.left.face(i, a).expect("face");
                                let fb = product.right.face(i, b).expect("face");
                                product.pair(&fa, &fb)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let name = format!("product:{},{}", product.left.name(), product.right.name());
        product.set = Arc::new(SimplicialSet::new_unchecked(name, labels, faces)?);
        Ok(product)
    }

    pub fn left(&self) -> &Arc<SimplicialSet> {
        &self.left
    }

    pub fn right(&self) -> &Arc<SimplicialSet> {
        &self.right
    }

    pub fn set(&self) -> &Arc<SimplicialSet> {
        &self.set
    }

    /// The dimension up to which generators were materialized.
    pub fn bound(&self) -> usize {
        self.components.len() - 1
    }

    pub fn components(&self, cell: Cell) -> (Simplex, Simplex) {
        self.components[cell.dim as usize][cell.index as usize]
    }

    /// The product simplex with the given components, in canonical form.
    pub fn pair(&self, a: &Simplex, b: &Simplex) -> Simplex {
        assert_eq!(a.dim(), b.dim(), "components of different dimensions");
        let n = a.dim();
        let common = a.collapse & b.collapse;
        let keep = !common;
        let m = n - common.count_ones() as usize;
        let a0 = Simplex::degenerate(a.cell, m, compress_bits(a.collapse, keep));
        let b0 = Simplex::degenerate(b.cell, m, compress_bits(b.collapse, keep));
        assert!(
            m <= self.bound(),
            "product simplex of dimension {m} beyond the materialized bound {}",
            self.bound()
        );
        let cell = self.lookup[&(a0, b0)];
        Simplex::degenerate(cell, n, common)
    }

    /// The generator `(a, b)` if the pair is nondegenerate.
    pub fn cell_of(&self, a: &Simplex, b: &Simplex) -> Option<Cell> {
        self.pair(a, b).as_cell()
    }

    pub fn left_projection(&self) -> SimplicialMap {
        self.projection(true)
    }

    pub fn right_projection(&self) -> SimplicialMap {
        self.projection(false)
    }

    fn projection(&self, left: bool) -> SimplicialMap {
        let images = self
            .components
            .iter()
            .map(|level| level.iter().map(|(a, b)| if left { *a } else { *b }).collect())
            .collect();
        SimplicialMap {
            source: self.set.clone(),
            target: if left { self.left.clone() } else { self.right.clone() },
            images,
        }
    }
}

/// `x ↦ (x, x)` into a product whose factors are the same set.
pub fn diagonal_map(product: &Product) -> Result<SimplicialMap> {
    if !Arc::ptr_eq(&product.left, &product.right) && product.left != product.right {
        return Err(Error::Precondition {
            space: product.set.name().into(),
            requirement: "a square K × K".into(),
        });
    }
    let k = &product.left;
    let images = (0..=k.top_dimension())
        .map(|d| {
            k.cells(d)
                .map(|c| {
                    let x = Simplex::nondegenerate(c);
                    product.pair(&x, &x)
                })
                .collect()
        })
        .collect();
    SimplicialMap::new(k.clone(), product.set.clone(), images)
}

/// `(x, y) ↦ (y, x)` from `K × L` to `L × K`.
pub fn swap_map(kl: &Product, lk: &Product) -> Result<SimplicialMap> {
    let images = kl
        .components
        .iter()
        .map(|level| level.iter().map(|(a, b)| lk.pair(b, a)).collect())
        .collect();
    SimplicialMap::new(kl.set.clone(), lk.set.clone(), images)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_words() {
        let g = Cell::new(1, 0);
        let s0 = Simplex::nondegenerate(g).degeneracy(0).unwrap();
        assert_eq!(s0.word(), vec![0]);
        assert_eq!(s0.degeneracy(0).unwrap().word(), vec![1, 0]);
        assert_eq!(s0.degeneracy(2).unwrap().word(), vec![2, 0]);
        assert_eq!(Simplex::from_word(&[1, 0], Cell::new(0, 0)).unwrap().word(), vec![1, 0]);
        assert!(Simplex::from_word(&[3], Cell::new(1, 0)).is_err());
    }

    #[test]
    fn compress() {
        assert_eq!(compress_bits(0b1010, !0b0010), 0b100);
    }

    #[test]
    fn faces_of_degeneracies() {
        let d2 = standard_simplex(2);
        let e = Simplex::nondegenerate(Cell::new(1, 0));
        let s0 = e.degeneracy(0).unwrap();
        assert_eq!(d2.face(1, &s0).unwrap(), e);
        assert_eq!(d2.face(0, &s0).unwrap(), e);
        assert!(d2.face(3, &s0).is_err());
    }
}

#[cfg(test)]
mod product_tests {
    use super::*;

    #[test]
    fn counts() {
        let d1 = Arc::new(standard_simplex(1));
        let p = Product::new(d1.clone(), d1).unwrap();
        assert_eq!(p.set().counts(), vec![4, 5, 2]);
        p.set().validate().unwrap();
        let s2 = Arc::new(sphere(2));
        let p = Product::new(s2.clone(), s2).unwrap();
        // (ι,*), (*,ι), (ι,ι); then (s_iι, s_jι) for i ≠ j; then disjoint pairs of 2-subsets of {0..3}.
        assert_eq!(p.set().counts(), vec![1, 0, 3, 6, 6]);
        p.set().validate().unwrap();
        assert_eq!(simplex_quotient(4, 1).unwrap().counts(), vec![1, 0, 10, 5, 1]);
    }
}
