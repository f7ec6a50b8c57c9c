//! The Eilenberg-Zilber retract `C(K) ⊗ C(L) ⇄ C(K × L)` with its homotopy.
//!
//! The homotopy is stored as a table of formal terms: pairs of monotone maps
//! `[n+1] → [n]` acting on the two components of an `n`-simplex. The table is
//! built from the Eilenberg-MacLane recursion
//! `φ_n = (∇f)′s_0 − (φ_{n−1})′`, where `′` shifts an operator by one and
//! fixes the vertex 0. This sign scheme is the one for which
//! `dφ + φd = ∇f − 1` holds.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::chains::{
    boundary, boundary_cell, coproduct, pair_differential, BasisElement, Chain, ChainMap, Coalgebra,
    SimplicialChains,
};
use crate::error::{Error, Result};
use crate::linear::{sign, Coeff, Lin};
use crate::report::Report;
use crate::simplicial::{mask_of, subsets, Cell, Product, Simplex, SimplicialMap, SimplicialSet};

/// A monotone map `[m] → [n]` listed by its values.
pub type Operator = Vec<usize>;

/// The surjection `[n] → [n − |J|]` identifying `j` with `j + 1` for `j ∈ J`.
pub fn surjection(n: usize, collapse: &[usize]) -> Operator {
    let mut out = vec![0];
    for k in 1..=n {
        let last = out[k - 1];
        out.push(if collapse.contains(&(k - 1)) { last } else { last + 1 });
    }
    out
}

fn compose(f: &[usize], g: &[usize]) -> Operator {
    g.iter().map(|&k| f[k]).collect()
}

fn prime(t: &[usize]) -> Operator {
    std::iter::once(0).chain(t.iter().map(|v| v + 1)).collect()
}

fn jointly_degenerate(x: &[usize], y: &[usize]) -> bool {
    (0..x.len().saturating_sub(1)).any(|j| x[j] == x[j + 1] && y[j] == y[j + 1])
}

/// The shuffle sign `(-1)^{Σ_k (μ_k − k)}` for sorted `μ`.
pub fn shuffle_sign(mu: &[usize]) -> Coeff {
    sign(mu.iter().enumerate().map(|(k, &m)| m - k).sum())
}

/// Formal terms `(θ_x, θ_y) ↦ c` of one level.
pub type Level = BTreeMap<(Operator, Operator), i64>;

fn clean(level: Level) -> Level {
    level
        .into_iter()
        .filter(|((x, y), c)| *c != 0 && !jointly_degenerate(x, y))
        .collect()
}

/// `∇f` in degree `n` as formal operator pairs `[n] → [n]`.
pub fn nabla_f_operators(n: usize) -> Level {
    let mut out = Level::new();
    let slots: Vec<usize> = (0..n).collect();
    for l in 0..=n {
        for mu in subsets(&slots, l) {
            let nu: Vec<usize> = slots.iter().copied().filter(|s| !mu.contains(s)).collect();
            let x = surjection(n, &nu);
            let y: Operator = surjection(n, &mu).iter().map(|v| v + l).collect();
            let s = if shuffle_sign(&mu) == Coeff::from(1) { 1 } else { -1 };
            *out.entry((x, y)).or_insert(0) += s;
        }
    }
    clean(out)
}

/// The homotopy `φ` as per-degree formal term tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyTable {
    levels: Vec<Level>,
}

impl HomotopyTable {
    /// The table from the Eilenberg-MacLane recursion, degrees `0..=max`.
    pub fn recursive(max: usize) -> HomotopyTable {
        let mut levels = vec![Level::new()];
        for n in 1..=max {
            let mut level = Level::new();
            let s0 = surjection(n + 1, &[0]);
            for ((x, y), c) in nabla_f_operators(n) {
                *level.entry((compose(&s0, &prime(&x)), compose(&s0, &prime(&y)))).or_insert(0) += c;
            }
            for ((x, y), c) in &levels[n - 1] {
                *level.entry((prime(x), prime(y))).or_insert(0) -= c;
            }
            levels.push(clean(level));
        }
        HomotopyTable { levels }
    }

    /// The table from the closed formula: for `m < r` and `A ⊔ B = [m+1, n]`
    /// with `|B| = r − m`, the term `(s_{A∪{m}} x_{0…r}, s_B y_{0…m r…n})`
    /// with sign `(-1)^{inv(B,A) + m}`, where `inv(B,A)` counts pairs `b > a`.
    pub fn closed(max: usize) -> HomotopyTable {
        let mut levels = vec![Level::new()];
        for n in 1..=max {
            let mut level = Level::new();
            for (m, r, a, b) in closed_index_sets(n) {
                let (x, y) = closed_operators(n, m, r, &a, &b);
                let inversions = b.iter().map(|&bb| a.iter().filter(|&&aa| bb > aa).count()).sum::<usize>();
                let c = if (inversions + m) % 2 == 0 { 1 } else { -1 };
                *level.entry((x, y)).or_insert(0) += c;
            }
            levels.push(clean(level));
        }
        HomotopyTable { levels }
    }

    pub fn max_degree(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &Level {
        &self.levels[n]
    }

    pub fn term_count(&self, n: usize) -> usize {
        self.levels[n].len()
    }

    /// Negates one stored term; used to test that checks detect sign errors.
    pub fn with_flipped_sign(&self, n: usize, term: usize) -> HomotopyTable {
        let mut out = self.clone();
        let key = out.levels[n].keys().nth(term).cloned().expect("term index in range");
        let c = out.levels[n].get_mut(&key).expect("present");
        *c = -*c;
        out
    }

    /// Terms where two tables disagree, as readable strings.
    pub fn differences(&self, other: &HomotopyTable) -> Vec<String> {
        let mut out = Vec::new();
        for n in 0..=self.max_degree().min(other.max_degree()) {
            let (a, b) = (&self.levels[n], &other.levels[n]);
            for key in a.keys().chain(b.keys()) {
                let (ca, cb) = (a.get(key).copied().unwrap_or(0), b.get(key).copied().unwrap_or(0));
                if ca != cb {
                    out.push(format!("degree {n} term x∘{:?}, y∘{:?}: {ca} vs {cb}", key.0, key.1));
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Index data `(m, r, A, B)` of the closed formula in degree `n`.
pub fn closed_index_sets(n: usize) -> Vec<(usize, usize, Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for m in 0..n {
        let range: Vec<usize> = (m + 1..=n).collect();
        for r in m + 1..=n {
            for b in subsets(&range, r - m) {
                let a: Vec<usize> = range.iter().copied().filter(|v| !b.contains(v)).collect();
                out.push((m, r, a, b));
            }
        }
    }
    out
}

fn closed_operators(n: usize, m: usize, r: usize, a: &[usize], b: &[usize]) -> (Operator, Operator) {
    let mut collapse_x = a.to_vec();
    collapse_x.push(m);
    let x = surjection(n + 1, &collapse_x);
    let face: Vec<usize> = (0..=m).chain(r..=n).collect();
    let y = compose(&face, &surjection(n + 1, b));
    (x, y)
}

/// Eilenberg-Zilber data for a product `K × L`.
#[derive(Clone)]
pub struct EzData {
    product: Arc<Product>,
    table: Arc<HomotopyTable>,
}

impl EzData {
    pub fn new(product: Arc<Product>) -> EzData {
        let table = Arc::new(HomotopyTable::recursive(product.bound()));
        EzData { product, table }
    }

    pub fn with_table(product: Arc<Product>, table: Arc<HomotopyTable>) -> EzData {
        EzData { product, table }
    }

    pub fn product(&self) -> &Arc<Product> {
        &self.product
    }

    pub fn table(&self) -> &Arc<HomotopyTable> {
        &self.table
    }

    pub fn left(&self) -> &Arc<SimplicialSet> {
        self.product.left()
    }

    pub fn right(&self) -> &Arc<SimplicialSet> {
        self.product.right()
    }

    pub fn total(&self) -> &Arc<SimplicialSet> {
        self.product.set()
    }

    pub fn left_chains(&self) -> SimplicialChains {
        SimplicialChains::new(self.left().clone())
    }

    pub fn right_chains(&self) -> SimplicialChains {
        SimplicialChains::new(self.right().clone())
    }

    pub fn total_chains(&self) -> SimplicialChains {
        SimplicialChains::new(self.total().clone())
    }

    /// `∇(x⊗y) = Σ sign(μ) (s_ν x, s_μ y)` over `(p,q)`-shuffles.
    pub fn shuffle(&self, x: Cell, y: Cell) -> Chain {
        let (p, q) = (x.dim as usize, y.dim as usize);
        let n = p + q;
        let slots: Vec<usize> = (0..n).collect();
        let mut out = Chain::zero();
        for mu in subsets(&slots, p) {
            let nu: Vec<usize> = slots.iter().copied().filter(|s| !mu.contains(s)).collect();
            let a = Simplex::degenerate(x, n, mask_of(&nu));
            let b = Simplex::degenerate(y, n, mask_of(&mu));
            if let Some(c) = self.product.cell_of(&a, &b) {
                out.add_term(c, shuffle_sign(&mu));
            }
        }
        out
    }

    pub fn nabla(&self, t: &Lin<(Cell, Cell)>) -> Chain {
        t.flat_map(|(x, y)| self.shuffle(*x, *y))
    }

    /// `f(x,y) = Σ_l x_{0…l} ⊗ y_{l…n}`.
    pub fn aw_cell(&self, z: Cell) -> Lin<(Cell, Cell)> {
        let (a, b) = self.product.components(z);
        let n = z.dim as usize;
        let mut out = Lin::zero();
        for l in 0..=n {
            let front: Vec<usize> = (0..=l).collect();
            let back: Vec<usize> = (l..=n).collect();
            let x = self.left().sub_simplex(&a, &front);
            let y = self.right().sub_simplex(&b, &back);
            if let (Some(x), Some(y)) = (x.as_cell(), y.as_cell()) {
                out.add_term((x, y), Coeff::from(1));
            }
        }
        out
    }

    pub fn aw(&self, c: &Chain) -> Lin<(Cell, Cell)> {
        c.flat_map(|z| self.aw_cell(*z))
    }

    fn evaluate(&self, z: Cell, x_op: &[usize], y_op: &[usize]) -> Option<Cell> {
        let (a, b) = self.product.components(z);
        let x = self.left().apply(x_op, &a);
        let y = self.right().apply(y_op, &b);
        self.product.cell_of(&x, &y)
    }

    /// `φ` from the stored table.
    pub fn phi_cell(&self, z: Cell) -> Chain {
        let n = z.dim as usize;
        assert!(
            n <= self.table.max_degree(),
            "homotopy table stops below degree {n}"
        );
        let mut out = Chain::zero();
        for ((x, y), c) in self.table.level(n) {
            if let Some(t) = self.evaluate(z, x, y) {
                out.add_term(t, Coeff::from(*c));
            }
        }
        out
    }

    pub fn phi(&self, c: &Chain) -> Chain {
        c.flat_map(|z| self.phi_cell(*z))
    }

    /// `φ` evaluated directly from the closed formula.
    pub fn phi_closed_cell(&self, z: Cell) -> Chain {
        let n = z.dim as usize;
        let (a, b) = self.product.components(z);
        let mut out = Chain::zero();
        for (m, r, aa, bb) in closed_index_sets(n) {
            let front: Vec<usize> = (0..=r).collect();
            let x_face = self.left().sub_simplex(&a, &front);
            let mut collapse_x = aa.clone();
            collapse_x.push(m);
            let x = self.left().apply(&surjection(n + 1, &collapse_x), &x_face);
            let joined: Vec<usize> = (0..=m).chain(r..=n).collect();
            let y_face = self.right().sub_simplex(&b, &joined);
            let y = self.right().apply(&surjection(n + 1, &bb), &y_face);
            if let Some(t) = self.product.cell_of(&x, &y) {
                let inversions = bb.iter().map(|&v| aa.iter().filter(|&&u| v > u).count()).sum::<usize>();
                out.add_term(t, sign(inversions + m));
            }
        }
        out
    }

    /// Tensor basis `C(K) ⊗ C(L)` in degrees `≤ bound`.
    pub fn tensor_basis(&self, bound: usize) -> Vec<(Cell, Cell)> {
        let mut out = Vec::new();
        for p in 0..=self.left().top_dimension().min(bound) {
            for q in 0..=self.right().top_dimension().min(bound - p) {
                for x in self.left().cells(p) {
                    for y in self.right().cells(q) {
                        out.push((x, y));
                    }
                }
            }
        }
        out
    }

    pub fn product_cells(&self, bound: usize) -> Vec<Cell> {
        (0..=bound.min(self.total().top_dimension()))
            .flat_map(|d| self.total().cells(d).collect::<Vec<_>>())
            .collect()
    }

    fn tensor_d(&self, t: &(Cell, Cell)) -> Lin<(Cell, Cell)> {
        pair_differential(
            &t.0,
            &t.1,
            |x| boundary_cell(self.left(), *x),
            |y| boundary_cell(self.right(), *y),
        )
    }

    /// The five retract identities, each on every basis element of degree `≤ bound`.
    pub fn check_sdr(&self, bound: usize) -> Vec<Report> {
        let space = self.total().name().to_string();
        let mut f_nabla = Report::new("f∇ = 1", &space, bound);
        let mut phi_nabla = Report::new("φ∇ = 0", &space, bound);
        for t in self.tensor_basis(bound) {
            let image = self.nabla(&Lin::basis(t));
            let back = self.aw(&image);
            f_nabla.check(back == Lin::basis(t), || format!("f∇({:?}) = {back:?}", t));
            let p = self.phi(&image);
            phi_nabla.check(p.is_zero(), || format!("φ∇({:?}) = {p:?}", t));
        }
        let mut homotopy = Report::new("dφ + φd = ∇f − 1", &space, bound);
        let mut f_phi = Report::new("fφ = 0", &space, bound);
        let mut phi_phi = Report::new("φφ = 0", &space, bound);
        let total = self.total();
        for z in self.product_cells(bound) {
            let zc = Lin::basis(z);
            let p = self.phi_cell(z);
            let lhs = boundary(total, &p) + self.phi(&boundary_cell(total, z));
            let rhs = self.nabla(&self.aw_cell(z)) - zc;
            homotopy.check(lhs == rhs, || {
                format!("{}: lhs {lhs:?} rhs {rhs:?}", total.label(z))
            });
            let fp = self.aw(&p);
            f_phi.check(fp.is_zero(), || format!("fφ({}) = {fp:?}", total.label(z)));
            let pp = self.phi(&p);
            phi_phi.check(pp.is_zero(), || format!("φφ({}) = {pp:?}", total.label(z)));
        }
        vec![f_nabla, homotopy, phi_nabla, f_phi, phi_phi]
    }

    /// The closed formula against the stored table, formally and on every cell.
    pub fn check_closed_form(&self, bound: usize) -> Report {
        let space = self.total().name().to_string();
        let mut report = Report::new("closed form = recursion", &space, bound);
        let top = bound.min(self.table.max_degree());
        let closed = HomotopyTable::closed(top);
        for w in self.table_prefix(top).differences(&closed) {
            report.fail(w);
        }
        report.checked += 1;
        for z in self.product_cells(bound) {
            let a = self.phi_cell(z);
            let b = self.phi_closed_cell(z);
            report.check(a == b, || format!("{}: {a:?} vs {b:?}", self.total().label(z)));
        }
        report
    }

    fn table_prefix(&self, top: usize) -> HomotopyTable {
        HomotopyTable {
            levels: self.table.levels[..=top].to_vec(),
        }
    }

    /// `Δ∇ = (∇⊗∇)(1⊗T⊗1)(Δ⊗Δ)` on the tensor basis.
    pub fn check_nabla_coalgebra_map(&self, bound: usize) -> Report {
        let mut report = Report::new("∇ coalgebra map", self.total().name(), bound);
        let (ck, cl) = (self.left_chains(), self.right_chains());
        for (x, y) in self.tensor_basis(bound) {
            let lhs = coproduct(self.total(), &self.shuffle(x, y));
            let mut rhs = Lin::zero();
            for ((x1, x2), c) in &ck.coproduct(&x) {
                for ((y1, y2), e) in &cl.coproduct(&y) {
                    let s = sign(x2.dim as usize * y1.dim as usize);
                    let left = self.shuffle(*x1, *y1);
                    let right = self.shuffle(*x2, *y2);
                    for (u, cu) in &left {
                        for (v, cv) in &right {
                            rhs.add_term((*u, *v), c * e * &s * cu * cv);
                        }
                    }
                }
            }
            report.check(lhs == rhs, || format!("({x:?},{y:?})"));
        }
        report
    }

    /// Differential on `C(K) ⊗ C(L)` extended linearly.
    pub fn tensor_differential(&self, t: &Lin<(Cell, Cell)>) -> Lin<(Cell, Cell)> {
        t.flat_map(|b| self.tensor_d(b))
    }
}

/// Naturality of `∇`, `f` and `φ` under `h × k : K × L → K' × L'`.
pub fn check_naturality(
    source: &EzData,
    target: &EzData,
    h: &SimplicialMap,
    k: &SimplicialMap,
    bound: usize,
) -> Report {
    let mut report = Report::new("naturality", source.total().name(), bound);
    let hk = |z: Cell| -> Option<Cell> {
        let (a, b) = source.product().components(z);
        target.product().cell_of(&h.apply(&a), &k.apply(&b))
    };
    let hk_chain = |c: &Chain| c.flat_map(|z| hk(*z).map(Lin::basis).unwrap_or_default());
    let h_cell = |x: Cell| h.apply(&Simplex::nondegenerate(x)).as_cell();
    let k_cell = |y: Cell| k.apply(&Simplex::nondegenerate(y)).as_cell();
    let hk_tensor = |t: &Lin<(Cell, Cell)>| {
        t.flat_map(|(x, y)| match (h_cell(*x), k_cell(*y)) {
            (Some(a), Some(b)) => Lin::basis((a, b)),
            _ => Lin::zero(),
        })
    };
    for z in source.product_cells(bound) {
        let zc = Lin::basis(z);
        let phi_ok = hk_chain(&source.phi(&zc)) == target.phi(&hk_chain(&zc));
        report.check(phi_ok, || format!("φ at {}", source.total().label(z)));
        let f_ok = hk_tensor(&source.aw(&zc)) == target.aw(&hk_chain(&zc));
        report.check(f_ok, || format!("f at {}", source.total().label(z)));
    }
    for t in source.tensor_basis(bound) {
        let tc = Lin::basis(t);
        let ok = hk_chain(&source.nabla(&tc)) == target.nabla(&hk_tensor(&tc));
        report.check(ok, || format!("∇ at {t:?}"));
    }
    report
}

/// A strong deformation retract `X ⇄ Y` stored on finite bases.
#[derive(Clone, Debug)]
pub struct SdrData<X: Ord, Y: Ord> {
    pub nabla: ChainMap<X, Y>,
    pub f: ChainMap<Y, X>,
    pub phi: ChainMap<Y, Y>,
}

/// Checks the four retract conditions plus `f∇ = 1` against differentials on
/// the given bases.
pub fn check_sdr_conditions<X: BasisElement, Y: BasisElement>(
    data: &SdrData<X, Y>,
    dx: &ChainMap<X, X>,
    dy: &ChainMap<Y, Y>,
) -> Vec<String> {
    let mut failures = Vec::new();
    for x in dx.images.keys() {
        let xc = Lin::basis(x.clone());
        let fn_x = data.f.apply(&data.nabla.apply(&xc));
        if fn_x != xc {
            failures.push(format!("f∇ ≠ 1 at {x:?}"));
        }
        if !data.phi.apply(&data.nabla.apply(&xc)).is_zero() {
            failures.push(format!("φ∇ ≠ 0 at {x:?}"));
        }
    }
    for y in dy.images.keys() {
        let yc = Lin::basis(y.clone());
        let p = data.phi.apply(&yc);
        let lhs = dy.apply(&p) + data.phi.apply(&dy.apply(&yc));
        let rhs = data.nabla.apply(&data.f.apply(&yc)) - yc;
        if lhs != rhs {
            failures.push(format!("dφ + φd ≠ ∇f − 1 at {y:?}"));
        }
        if !data.f.apply(&p).is_zero() {
            failures.push(format!("fφ ≠ 0 at {y:?}"));
        }
        if !data.phi.apply(&p).is_zero() {
            failures.push(format!("φφ ≠ 0 at {y:?}"));
        }
    }
    failures
}

fn projector_complement<X: BasisElement, Y: BasisElement>(
    nabla: &ChainMap<X, Y>,
    f: &ChainMap<Y, X>,
    c: &Lin<Y>,
) -> Lin<Y> {
    c.clone() - nabla.apply(&f.apply(c))
}

/// Repairs a homotopy satisfying `dφ′ + φ′d = ∇f − 1` into one that also
/// satisfies the side conditions: with `ρ = 1 − ∇f` and `φ₁ = ρφ′ρ`, returns
/// `−φ₁ d φ₁`.
pub fn sdr_adjust<X: BasisElement, Y: BasisElement>(
    phi_prime: &ChainMap<Y, Y>,
    nabla: &ChainMap<X, Y>,
    f: &ChainMap<Y, X>,
    dy: &ChainMap<Y, Y>,
) -> Result<ChainMap<Y, Y>> {
    for y in dy.images.keys() {
        let yc = Lin::basis(y.clone());
        let lhs = dy.apply(&phi_prime.apply(&yc)) + phi_prime.apply(&dy.apply(&yc));
        let rhs = nabla.apply(&f.apply(&yc)) - yc;
        if lhs != rhs {
            return Err(Error::NotAHomotopy(format!("at {y:?}: {lhs:?} vs {rhs:?}")));
        }
    }
    let phi1 = |c: &Lin<Y>| {
        let inner = phi_prime.apply(&projector_complement(nabla, f, c));
        projector_complement(nabla, f, &inner)
    };
    Ok(ChainMap::from_fn(1, dy.images.keys().cloned().collect::<Vec<_>>(), |y| {
        -phi1(&dy.apply(&phi1(&Lin::basis(y.clone()))))
    }))
}

/// The replacement `(∇f−1)φ′(∇f−1)d(∇f−1)φ′(∇f−1)` taken literally.
pub fn sdr_adjust_literal<X: BasisElement, Y: BasisElement>(
    phi_prime: &ChainMap<Y, Y>,
    nabla: &ChainMap<X, Y>,
    f: &ChainMap<Y, X>,
    dy: &ChainMap<Y, Y>,
) -> ChainMap<Y, Y> {
    let p = |c: &Lin<Y>| nabla.apply(&f.apply(c)) - c.clone();
    ChainMap::from_fn(1, dy.images.keys().cloned().collect::<Vec<_>>(), |y| {
        let yc = Lin::basis(y.clone());
        let right = p(&phi_prime.apply(&p(&yc)));
        p(&phi_prime.apply(&p(&dy.apply(&right))))
    })
}

/// The retract data with the differentials of both sides.
pub type Tabulated = (SdrData<(Cell, Cell), Cell>, ChainMap<(Cell, Cell), (Cell, Cell)>, ChainMap<Cell, Cell>);

/// The retract data of `EzData` tabulated on bases of degree `≤ bound`.
pub fn tabulate(ez: &EzData, bound: usize) -> Tabulated {
    let tb = ez.tensor_basis(bound);
    let cells = ez.product_cells(bound);
    let data = SdrData {
        nabla: ChainMap::from_fn(0, tb.clone(), |t| ez.shuffle(t.0, t.1)),
        f: ChainMap::from_fn(0, cells.clone(), |z| ez.aw_cell(*z)),
        phi: ChainMap::from_fn(1, cells.clone(), |z| ez.phi_cell(*z)),
    };
    let dx = ChainMap::from_fn(-1, tb, |t| ez.tensor_d(t));
    let dy = ChainMap::from_fn(-1, cells, |z| boundary_cell(ez.total(), *z));
    (data, dx, dy)
}
