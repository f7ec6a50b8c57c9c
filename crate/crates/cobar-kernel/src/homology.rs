//! Integral homology of finite chain complexes via Smith normal form.

use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::chains::{BasisElement, Coalgebra, SimplicialChains};
use crate::cobar::{canonical_cochain, Cobar, DgAlgebra, TwistedTensor, Word};
use crate::error::{Error, Result};
use crate::linear::{Coeff, Lin};
use crate::simplicial::{Cell, SimplicialSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Coeff>>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![vec![Coeff::zero(); cols]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i][i] = Coeff::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntegerMatrix {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().map(|r| r.into_iter().map(Coeff::from).collect()).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Coeff {
        &self.entries[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Coeff) {
        self.entries[i][j] = v;
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.entries[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.entries[k][j];
                    if !b.is_zero() {
                        out.entries[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Zero::is_zero)
    }

    /// Determinant by fraction-free elimination (Bareiss).
    pub fn determinant(&self) -> Coeff {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Coeff::one();
        }
        let mut a = self.entries.clone();
        let mut sign = Coeff::one();
        let mut prev = Coeff::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Coeff::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.entries.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for row in &mut self.entries {
            row.swap(a, b);
        }
    }

    /// `row_target += k · row_source`.
    fn add_row(&mut self, target: usize, source: usize, k: &Coeff) {
        for j in 0..self.cols {
            let v = &self.entries[source][j] * k;
            self.entries[target][j] += v;
        }
    }

    fn add_col(&mut self, target: usize, source: usize, k: &Coeff) {
        for row in &mut self.entries {
            let v = &row[source] * k;
            row[target] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for v in &mut self.entries[i] {
            *v = -v.clone();
        }
    }
}

/// `U·M·V = D` with `D` diagonal, `d_1 | d_2 | …`, `U` and `V` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<Coeff> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.entries[i][i].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Re-checks `U·M·V = D`.
    pub fn certifies(&self, m: &IntegerMatrix) -> bool {
        self.u.mul(m).mul(&self.v) == self.d
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let mut d = m.clone();
    let mut u = IntegerMatrix::identity(m.rows);
    let mut v = IntegerMatrix::identity(m.cols);
    let mut t = 0;
    while t < d.rows.min(d.cols) {
        // Smallest nonzero entry of the remaining block as pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..d.rows {
            for j in t..d.cols {
                let x = &d.entries[i][j];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d.entries[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut changed = false;
            for i in t + 1..d.rows {
                if d.entries[i][t].is_zero() {
                    continue;
                }
                let q = -d.entries[i][t].div_floor(&d.entries[t][t]);
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !d.entries[i][t].is_zero() {
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                }
                changed = true;
            }
            for j in t + 1..d.cols {
                if d.entries[t][j].is_zero() {
                    continue;
                }
                let q = -d.entries[t][j].div_floor(&d.entries[t][t]);
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !d.entries[t][j].is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                }
                changed = true;
            }
            let clear = (t + 1..d.rows).all(|i| d.entries[i][t].is_zero())
                && (t + 1..d.cols).all(|j| d.entries[t][j].is_zero());
            if clear {
                // Enforce divisibility into the rest of the block.
                let bad = (t + 1..d.rows)
                    .flat_map(|i| (t + 1..d.cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !d.entries[i][j].is_multiple_of(&d.entries[t][t]));
                match bad {
                    Some((i, _)) => {
                        let one = Coeff::one();
                        d.add_row(t, i, &one);
                        u.add_row(t, i, &one);
                    }
                    None => break,
                }
            } else if !changed {
                break;
            }
        }
        if d.entries[t][t].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SmithForm { d, u, v }
}

/// `H_n ≅ ℤ^{betti} ⊕ ⊕ ℤ/t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub degree: usize,
    pub betti: usize,
    pub torsion: Vec<String>,
}

impl HomologyGroup {
    pub fn is_integers(&self) -> bool {
        self.betti == 1 && self.torsion.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    pub fn display(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("ℤ".into()),
            b => parts.push(format!("ℤ^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("ℤ/{t}")));
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ⊕ ")
        }
    }
}

/// A finite complex `C_0 ← C_1 ← … ← C_top` with `d_n` as a `dim C_{n−1} × dim C_n` matrix.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    dims: Vec<usize>,
    differentials: Vec<IntegerMatrix>,
}

impl ChainComplex {
    /// `differentials[n]` is `d_n`; `differentials[0]` must be `dim C_0 × 0`-compatible and is ignored.
    pub fn new(dims: Vec<usize>, differentials: Vec<IntegerMatrix>) -> Result<Self> {
        if differentials.len() != dims.len() {
            return Err(Error::InconsistentComplex("one differential per degree expected".into()));
        }
        for n in 1..dims.len() {
            let m = &differentials[n];
            if m.rows != dims[n - 1] || m.cols != dims[n] {
                return Err(Error::InconsistentComplex(format!(
                    "d_{n} is {}×{}, expected {}×{}",
                    m.rows, m.cols, dims[n - 1], dims[n]
                )));
            }
            if n >= 2 && !differentials[n - 1].mul(m).is_zero() {
                return Err(Error::InconsistentComplex(format!("d_{} d_{n} ≠ 0", n - 1)));
            }
        }
        Ok(ChainComplex { dims, differentials })
    }

    /// Matrices of a differential given on ordered bases, degrees `0..bases.len()`.
    pub fn from_bases<B: BasisElement>(bases: &[Vec<B>], d: impl Fn(&B) -> Lin<B>) -> Result<Self> {
        let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
        let mut differentials = vec![IntegerMatrix::zeros(0, dims.first().copied().unwrap_or(0))];
        for n in 1..bases.len() {
            let index: std::collections::HashMap<&B, usize> =
                bases[n - 1].iter().enumerate().map(|(i, b)| (b, i)).collect();
            let mut m = IntegerMatrix::zeros(dims[n - 1], dims[n]);
            for (j, b) in bases[n].iter().enumerate() {
                for (t, c) in &d(b) {
                    let i = *index.get(t).ok_or_else(|| {
                        Error::InconsistentComplex(format!("d({b:?}) has a term {t:?} outside the basis"))
                    })?;
                    m.entries[i][j] += c;
                }
            }
            differentials.push(m);
        }
        Self::new(dims, differentials)
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    /// `H_n` for `n < top_degree`; the top degree has no incoming boundary data.
    pub fn homology(&self, n: usize) -> Result<HomologyGroup> {
        if n >= self.top_degree() {
            return Err(Error::InconsistentComplex(format!(
                "H_{n} needs C_{} but the complex stops at degree {}",
                n + 1,
                self.top_degree()
            )));
        }
        let rank_out = if n == 0 {
            0
        } else {
            smith_normal_form(&self.differentials[n]).rank()
        };
        let incoming = smith_normal_form(&self.differentials[n + 1]);
        let factors = incoming.invariant_factors();
        let torsion = factors
            .iter()
            .filter(|f| !f.is_one())
            .map(|f| f.to_string())
            .collect();
        Ok(HomologyGroup {
            degree: n,
            betti: self.dims[n] - rank_out - factors.len(),
            torsion,
        })
    }
}

/// `C(K)` in degrees `0..=top`.
pub fn chains_complex(k: &Arc<SimplicialSet>, top: usize) -> Result<ChainComplex> {
    let c = SimplicialChains::new(k.clone());
    let bases: Vec<Vec<Cell>> = (0..=top).map(|n| if n <= k.top_dimension() { c.basis(n) } else { Vec::new() }).collect();
    ChainComplex::from_bases(&bases, |b| c.differential(b))
}

/// `ΩC(K)` in degrees `0..=top`.
pub fn cobar_complex(k: &Arc<SimplicialSet>, top: usize) -> Result<ChainComplex> {
    let om = Cobar::new(SimplicialChains::new(k.clone()))?;
    let bases: Vec<Vec<Word<Cell>>> = (0..=top).map(|n| om.basis(n)).collect();
    ChainComplex::from_bases(&bases, |w| om.differential(w))
}

/// `ΩC(K) ⊗_{t_Ω} C(K)` in degrees `0..=top`.
pub fn twisted_cobar_complex(k: &Arc<SimplicialSet>, top: usize) -> Result<ChainComplex> {
    let c = SimplicialChains::new(k.clone());
    let om = Cobar::new(c.clone())?;
    let tt = TwistedTensor::new(om, c, canonical_cochain());
    let bases: Vec<Vec<(Word<Cell>, Cell)>> = (0..=top).map(|n| tt.basis(n)).collect();
    ChainComplex::from_bases(&bases, |b| tt.differential(b))
}

/// `H_0, …, H_top` of a complex built through degree `top + 1`.
pub fn homology_table(complex: &ChainComplex, top: usize) -> Result<Vec<HomologyGroup>> {
    (0..=top).map(|n| complex.homology(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_snf() {
        let m = IntegerMatrix::from_rows(vec![vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&m);
        assert!(s.certifies(&m));
        assert_eq!(s.invariant_factors(), vec![Coeff::from(2), Coeff::from(4)]);
        assert_eq!(s.u.determinant().abs(), Coeff::one());
        assert_eq!(s.v.determinant().abs(), Coeff::one());
    }

    #[test]
    fn determinant_values() {
        let m = IntegerMatrix::from_rows(vec![vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]);
        assert_eq!(m.determinant(), Coeff::from(-2));
    }
}
