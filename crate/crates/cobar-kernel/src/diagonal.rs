//! The Alexander-Whitney cobar diagonal `ψ_K = q∘Ω̃f∘Ω(Δ)_♯`, Baues's
//! combinatorial coproduct, the cocommutativity homotopy, and their checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::chains::SimplicialChains;
use crate::cobar::{induced_algebra_map, milgram_q, mul, AlgebraMap, Cobar, DgAlgebra, TensorAlgebra, Word};
use crate::dcsh::CobarRetract;
use crate::error::{Error, Result};
use crate::ezaw::{EzData, HomotopyTable};
use crate::linear::{coeff_to_json, sign, Graded, Lin};
use crate::report::Report;
use crate::simplicial::{diagonal_map, subsets, swap_map, Cell, Product, Simplex, SimplicialSet};

/// A basis monomial `u⊗v` of `ΩC(K)⊗ΩC(K)`.
pub type Bimonomial = (Word<Cell>, Word<Cell>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Aw,
    Baues,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Aw => "aw",
            Method::Baues => "baues",
        }
    }
}

/// Images of the generators `s⁻¹x`, `|s⁻¹x| ≤ bound`, under a diagonal.
#[derive(Clone, Debug)]
pub struct DiagonalResult {
    pub method: Method,
    pub space: String,
    pub bound: usize,
    pub images: BTreeMap<Cell, Lin<Bimonomial>>,
}

impl DiagonalResult {
    pub fn image(&self, x: &Cell) -> Lin<Bimonomial> {
        self.images.get(x).cloned().unwrap_or_else(Lin::zero)
    }

    /// The multiplicative extension; generators outside the table map to zero.
    pub fn algebra_map(&self) -> AlgebraMap<Cell, Bimonomial> {
        let images = self.images.clone();
        AlgebraMap::new(format!("ψ[{}]", self.method.name()), move |c: &Cell| {
            images.get(c).cloned().unwrap_or_else(Lin::zero)
        })
    }

    /// Total number of stored terms.
    pub fn term_count(&self) -> usize {
        self.images.values().map(Lin::len).sum()
    }

    /// The same table with the sign of its `index`-th stored term negated,
    /// counting generators in order; returns the touched generator and term.
    pub fn with_flipped_sign(&self, index: usize) -> (DiagonalResult, Cell, Bimonomial) {
        let mut rest = index % self.term_count().max(1);
        for (cell, image) in &self.images {
            if rest < image.len() {
                let term = image.basis_elements().nth(rest).cloned().expect("term in range");
                let mut out = self.clone();
                out.images.get_mut(cell).expect("present").flip_sign(&term);
                return (out, *cell, term);
            }
            rest -= image.len();
        }
        panic!("empty diagonal table");
    }

    /// The asymmetry of Baues's formula: every right factor is a single letter or the unit.
    pub fn right_factors_are_letters(&self) -> bool {
        self.images.values().all(|x| x.basis_elements().all(|(_, v)| v.len() <= 1))
    }

    pub fn to_json(&self, k: &SimplicialSet) -> serde_json::Value {
        let label = |c: &Cell| serde_json::Value::String(k.label(*c).to_string());
        let generators: Vec<serde_json::Value> = self
            .images
            .iter()
            .map(|(c, image)| {
                let terms = bimonomials_to_json(k, image);
                serde_json::json!({
                    "generator": label(c),
                    "degree": c.degree() - 1,
                    "image": terms,
                })
            })
            .collect();
        serde_json::json!({
            "method": self.method.name(),
            "space": self.space,
            "bound": self.bound,
            "generators": generators,
        })
    }
}

fn require_one_reduced(k: &SimplicialSet) -> Result<()> {
    if k.is_reduced(1) {
        Ok(())
    } else {
        Err(Error::Precondition {
            space: k.name().into(),
            requirement: "1-reduced".into(),
        })
    }
}

/// Generator cells of `ΩC(K)` with cobar degree `1..=bound`.
pub fn generators(k: &SimplicialSet, bound: usize) -> Vec<Cell> {
    (2..=(bound + 1).min(k.top_dimension())).flat_map(|d| k.cells(d)).collect()
}

/// `ψ_K` with the data it is built from.
#[derive(Clone)]
pub struct AwDiagonal {
    pub space: Arc<SimplicialSet>,
    pub product: Arc<Product>,
    pub retract: CobarRetract,
    pub cobar: Cobar<SimplicialChains>,
    pub target: TensorAlgebra<Cobar<SimplicialChains>, Cobar<SimplicialChains>>,
    omega_delta: AlgebraMap<Cell, Word<Cell>>,
    psi: AlgebraMap<Cell, Bimonomial>,
}

impl AwDiagonal {
    pub fn new(k: Arc<SimplicialSet>) -> Result<AwDiagonal> {
        Self::build(k, None, 1)
    }

    /// `ψ_K` built from a replacement homotopy table, for mutation tests.
    pub fn with_table(k: Arc<SimplicialSet>, table: HomotopyTable) -> Result<AwDiagonal> {
        Self::build(k, Some(table), 1)
    }

    /// `margin` is how far past `dim K` the product `K×K` is materialized:
    /// `ψ` needs one extra dimension for `φ`, the homotopy `H` two.
    fn build(k: Arc<SimplicialSet>, table: Option<HomotopyTable>, margin: usize) -> Result<AwDiagonal> {
        require_one_reduced(&k)?;
        let top = k.top_dimension();
        let product = Arc::new(Product::with_bound(k.clone(), k.clone(), top + margin)?);
        let ez = match table {
            Some(t) => EzData::with_table(product.clone(), Arc::new(t)),
            None => EzData::new(product.clone()),
        };
        let retract = CobarRetract::new(&ez, (top + 1).min(4))?;
        let delta = diagonal_map(&product)?;
        let omega_delta = induced_algebra_map("Ω(Δ)", move |c: &Cell| match delta.image(*c).as_cell() {
            Some(t) => Lin::basis(t),
            None => Lin::zero(),
        });
        let psi = omega_delta.then(&retract.f_tilde).then(&milgram_q());
        let chains = SimplicialChains::new(k.clone());
        let cobar = Cobar::new(chains)?;
        let target = TensorAlgebra::new(cobar.clone(), cobar.clone());
        Ok(AwDiagonal {
            space: k,
            product,
            retract,
            cobar,
            target,
            omega_delta,
            psi,
        })
    }

    pub fn psi(&self) -> &AlgebraMap<Cell, Bimonomial> {
        &self.psi
    }

    pub fn result(&self, bound: usize) -> DiagonalResult {
        let images = generators(&self.space, bound)
            .into_iter()
            .map(|c| (c, self.psi.on_generator(&c)))
            .collect();
        DiagonalResult {
            method: Method::Aw,
            space: self.space.name().into(),
            bound,
            images,
        }
    }

    /// `H = q∘Ω̃f∘Ω(sw)_♯∘Ω̃φ∘Ω(Δ)_♯`.
    pub fn cocommutativity_homotopy(&self) -> Result<CocommutativityHomotopy> {
        let table = self.retract.ez.table().as_ref().clone();
        let wide = Self::build(self.space.clone(), Some(table), 2)?;
        wide.homotopy_from_wide()
    }

    fn homotopy_from_wide(&self) -> Result<CocommutativityHomotopy> {
        let sw = swap_map(&self.product, &self.product)?;
        let omega_sw = induced_algebra_map("Ω(sw)", move |c: &Cell| match sw.image(*c).as_cell() {
            Some(t) => Lin::basis(t),
            None => Lin::zero(),
        });
        let after = omega_sw.then(&self.retract.f_tilde).then(&milgram_q());
        Ok(CocommutativityHomotopy {
            diagonal: self.clone(),
            after,
        })
    }
}

/// `ψ_K` on every generator of degree `≤ bound`.
pub fn aw_cobar_diagonal(k: Arc<SimplicialSet>, bound: usize) -> Result<DiagonalResult> {
    Ok(AwDiagonal::new(k)?.result(bound))
}

/// `ℓ(a) = Σ_{i=1}^{m+1} (i−1)(a_i − a_{i−1} − 1)` with `a_0 = 0`, `a_{m+1} = n`:
/// each left letter `s⁻¹x_{a_{i−1}…a_i}` contributes its degree times `i−1`.
pub fn baues_sign_exponent(n: usize, a: &[usize]) -> usize {
    let mut cuts = vec![0];
    cuts.extend_from_slice(a);
    cuts.push(n);
    cuts.windows(2).enumerate().map(|(i, w)| i * (w[1] - w[0] - 1)).sum()
}

/// The textbook variant `(a_1 − 1) + Σ_{i≥2} (i−1)(a_i − a_{i−1} − 1) + m(n − a_m − 1)`,
/// which also counts the first letter's degree. With the cobar conventions used
/// here it does not give a chain map (see `literal_baues_diagonal`).
pub fn literal_baues_sign_exponent(n: usize, a: &[usize]) -> usize {
    let m = a.len();
    if m == 0 {
        return 0;
    }
    a[0] - 1 + baues_sign_exponent(n, a)
}

/// `s⁻¹` of a face: unit for edges, zero for degenerate faces, else a letter.
fn face_letter(s: &Simplex) -> Option<Option<Cell>> {
    if s.dim() <= 1 {
        return Some(None);
    }
    s.as_cell().map(Some)
}

/// The surviving monomials of `ψ̃(s⁻¹x)`, each with its cut set `a`.
pub fn baues_terms(k: &SimplicialSet, x: Cell) -> Vec<(Vec<usize>, Bimonomial)> {
    let n = x.dim as usize;
    let top = Simplex::nondegenerate(x);
    let inner: Vec<usize> = (1..n).collect();
    let mut out = Vec::new();
    for m in 0..n {
        'cuts: for a in subsets(&inner, m) {
            let mut verts = vec![0];
            verts.extend(a.iter().copied());
            verts.push(n);
            let Some(right) = face_letter(&k.sub_simplex(&top, &verts)) else {
                continue;
            };
            let mut left = Vec::new();
            for w in verts.windows(2) {
                let span: Vec<usize> = (w[0]..=w[1]).collect();
                match face_letter(&k.sub_simplex(&top, &span)) {
                    Some(Some(c)) => left.push(c),
                    Some(None) => {}
                    None => continue 'cuts,
                }
            }
            out.push((a, (Word(left), Word(right.into_iter().collect()))));
        }
    }
    out
}

/// `ψ̃(s⁻¹x) = Σ (-1)^{ℓ(a)} s⁻¹x_{0…a_1}⋯s⁻¹x_{a_m…n} ⊗ s⁻¹x_{0a_1…a_m n}`.
pub fn baues_generator(k: &SimplicialSet, x: Cell) -> Lin<Bimonomial> {
    signed_baues_generator(k, x, baues_sign_exponent)
}

fn signed_baues_generator(k: &SimplicialSet, x: Cell, exponent: fn(usize, &[usize]) -> usize) -> Lin<Bimonomial> {
    let n = x.dim as usize;
    baues_terms(k, x)
        .into_iter()
        .map(|(a, t)| (t, sign(exponent(n, &a))))
        .collect()
}

fn signed_baues_diagonal(
    k: &SimplicialSet,
    bound: usize,
    exponent: fn(usize, &[usize]) -> usize,
) -> Result<DiagonalResult> {
    require_one_reduced(k)?;
    let images = generators(k, bound)
        .into_iter()
        .map(|c| (c, signed_baues_generator(k, c, exponent)))
        .collect();
    Ok(DiagonalResult {
        method: Method::Baues,
        space: k.name().into(),
        bound,
        images,
    })
}

pub fn baues_diagonal(k: &SimplicialSet, bound: usize) -> Result<DiagonalResult> {
    signed_baues_diagonal(k, bound, baues_sign_exponent)
}

/// Baues's formula signed by `literal_baues_sign_exponent`.
pub fn literal_baues_diagonal(k: &SimplicialSet, bound: usize) -> Result<DiagonalResult> {
    signed_baues_diagonal(k, bound, literal_baues_sign_exponent)
}

fn swap(x: &Lin<Bimonomial>) -> Lin<Bimonomial> {
    x.iter()
        .map(|((u, v), c)| ((v.clone(), u.clone()), c * sign(u.degree() * v.degree())))
        .collect()
}

/// `H` with the pieces needed to evaluate it on words.
#[derive(Clone)]
pub struct CocommutativityHomotopy {
    diagonal: AwDiagonal,
    after: AlgebraMap<Cell, Bimonomial>,
}

impl CocommutativityHomotopy {
    /// The full composite on a word.
    pub fn on_word(&self, w: &Word<Cell>) -> Lin<Bimonomial> {
        let lifted = self.diagonal.omega_delta.apply_word(w);
        self.after.apply(&self.diagonal.retract.phi(&lifted))
    }

    /// `dH + Hd = sw∘ψ − ψ` on all words of degree `≤ bound`, and the
    /// derivation rule `H(uv) = H(u)ψ(v) + (-1)^{|u|} swψ(u) H(v)` on every split.
    pub fn check(&self, bound: usize) -> Vec<Report> {
        let d = &self.diagonal;
        let space = d.space.name().to_string();
        let mut identity = Report::new("dH + Hd = sw∘ψ − ψ", &space, bound);
        let mut leibniz = Report::new("H is a (ψ, sw∘ψ)-derivation", &space, bound);
        for n in 0..=bound {
            for w in d.cobar.basis(n) {
                let h = self.on_word(&w);
                let dw = d.cobar.differential(&w);
                let lhs = d.target.d(&h) + dw.flat_map(|v| self.on_word(v));
                let psi = d.psi.apply_word(&w);
                let rhs = swap(&psi) - psi;
                identity.check(lhs == rhs, || format!("{w:?}: {lhs:?} vs {rhs:?}"));
                for split in 1..w.len() {
                    let (u, v) = (Word(w.0[..split].to_vec()), Word(w.0[split..].to_vec()));
                    let expected = mul(&self.on_word(&u), &d.psi.apply_word(&v))
                        + mul(&swap(&d.psi.apply_word(&u)), &self.on_word(&v)).scale(&sign(u.degree()));
                    leibniz.check(h == expected, || format!("{u:?}·{v:?}: {h:?} vs {expected:?}"));
                }
            }
        }
        vec![identity, leibniz]
    }
}

type Triple = (Word<Cell>, Word<Cell>, Word<Cell>);

fn left_assoc(x: &Lin<(Bimonomial, Word<Cell>)>) -> Lin<Triple> {
    x.map_basis(|((a, b), c)| (a.clone(), b.clone(), c.clone()))
}

fn right_assoc(x: &Lin<(Word<Cell>, Bimonomial)>) -> Lin<Triple> {
    x.map_basis(|(a, (b, c))| (a.clone(), b.clone(), c.clone()))
}

/// `(ψ⊗1)ψ = (1⊗ψ)ψ` on all generators of degree `≤ bound`; both sides are
/// algebra maps, so this covers every word.
pub fn verify_coassociativity(k: &SimplicialSet, psi: &DiagonalResult, bound: usize) -> Result<Report> {
    let cobar = Cobar::new(SimplicialChains::new(Arc::new(k.clone())))?;
    let map = psi.algebra_map();
    let id = crate::cobar::identity_map::<Cell>();
    let mut report = Report::new("(ψ⊗1)ψ = (1⊗ψ)ψ", k.name(), bound);
    for n in 1..=bound {
        for w in cobar.letters(n).into_iter().map(Word::letter) {
            let image = map.apply_word(&w);
            let lhs = left_assoc(&crate::cobar::apply_tensor(&map, &id, &image));
            let rhs = right_assoc(&crate::cobar::apply_tensor(&id, &map, &image));
            report.check(lhs == rhs, || {
                let diff = lhs.clone() - rhs.clone();
                let (t, c) = diff.iter().next().expect("nonzero difference");
                format!("{w:?}: discrepancy {c}·{t:?}")
            });
        }
    }
    Ok(report)
}

/// `d∘ψ = ψ∘d_Ω` on all generators of degree `≤ bound`; both sides are
/// `(ψ, ψ)`-derivations, so this covers every word.
pub fn verify_chain_map(k: &SimplicialSet, psi: &DiagonalResult, bound: usize) -> Result<Report> {
    let cobar = Cobar::new(SimplicialChains::new(Arc::new(k.clone())))?;
    let target = TensorAlgebra::new(cobar.clone(), cobar.clone());
    let map = psi.algebra_map();
    let mut report = Report::new(format!("ψ[{}] chain map", psi.method.name()), k.name(), bound);
    for n in 1..=bound {
        for w in cobar.letters(n).into_iter().map(Word::letter) {
            let lhs = target.d(&map.apply_word(&w));
            let rhs = map.apply(&cobar.differential(&w));
            report.check(lhs == rhs, || format!("{w:?}: dψ − ψd = {:?}", lhs.clone() - rhs.clone()));
        }
    }
    Ok(report)
}

/// Generator-by-generator comparison of two diagonal tables.
pub fn compare(a: &DiagonalResult, b: &DiagonalResult) -> Report {
    let bound = a.bound.min(b.bound);
    let mut report = Report::new(format!("ψ[{}] = ψ[{}]", a.method.name(), b.method.name()), &a.space, bound);
    let cells: std::collections::BTreeSet<Cell> = a.images.keys().chain(b.images.keys()).copied().collect();
    for c in cells {
        if c.degree() - 1 > bound {
            continue;
        }
        let (x, y) = (a.image(&c), b.image(&c));
        report.check(x == y, || {
            let diff = x.clone() - y.clone();
            let (t, k) = diff.iter().next().expect("nonzero difference");
            format!("{c:?}: differs by {k}·{t:?}")
        });
    }
    report
}

/// `ψ_K = ψ̃` on all generators of degree `≤ bound`.
pub fn verify_baues_equality(k: Arc<SimplicialSet>, bound: usize) -> Result<Report> {
    let aw = aw_cobar_diagonal(k.clone(), bound)?;
    let baues = baues_diagonal(&k, bound)?;
    Ok(compare(&aw, &baues))
}

/// The element `Σ c·u⊗v` as `[{left, right, coefficient}]`.
pub fn bimonomials_to_json(k: &SimplicialSet, x: &Lin<Bimonomial>) -> serde_json::Value {
    let label = |c: &Cell| serde_json::Value::String(k.label(*c).to_string());
    serde_json::Value::Array(
        x.iter()
            .map(|((u, v), c)| {
                serde_json::json!({
                    "left": u.0.iter().map(label).collect::<Vec<_>>(),
                    "right": v.0.iter().map(label).collect::<Vec<_>>(),
                    "coefficient": coeff_to_json(c),
                })
            })
            .collect(),
    )
}
