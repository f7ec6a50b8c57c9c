//! Normalized chains, coalgebra structures and tensor products with Koszul signs.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use serde::Serialize;

use crate::linear::{sign, Coeff, Graded, Lin};
use crate::simplicial::{Cell, Simplex, SimplicialMap, SimplicialSet};

pub type Chain = Lin<Cell>;

/// Basis elements usable in chain-level computations.
pub trait BasisElement: Clone + Ord + Hash + Debug + Send + Sync + Graded + 'static {}

impl<T: Clone + Ord + Hash + Debug + Send + Sync + Graded + 'static> BasisElement for T {}

/// An ordered tensor `a_1 ⊗ … ⊗ a_k` of basis elements of one complex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Tensor<B>(pub Vec<B>);

impl<B: Graded> Graded for Tensor<B> {
    fn degree(&self) -> usize {
        self.0.iter().map(Graded::degree).sum()
    }
}

impl<B> Tensor<B> {
    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

/// The generator of a normalized chain group, or `None` for a degenerate simplex.
pub fn normalize(s: &Simplex) -> Option<Cell> {
    s.as_cell()
}

pub fn boundary_cell(k: &SimplicialSet, cell: Cell) -> Chain {
    let n = cell.dim as usize;
    let mut out = Chain::zero();
    if n == 0 {
        return out;
    }
    for (i, face) in k.generator_faces(cell).iter().enumerate() {
        if let Some(c) = normalize(face) {
            out.add_term(c, sign(i));
        }
    }
    out
}

/// `d = Σ (-1)^i ∂_i` with degenerate faces dropped.
pub fn boundary(k: &SimplicialSet, c: &Chain) -> Chain {
    c.flat_map(|&cell| boundary_cell(k, cell))
}

/// `Σ_i x_{0…i} ⊗ x_{i…n}`, degenerate factors dropped.
pub fn coproduct_cell(k: &SimplicialSet, cell: Cell) -> Lin<(Cell, Cell)> {
    let n = cell.dim as usize;
    let x = Simplex::nondegenerate(cell);
    let mut out = Lin::zero();
    for i in 0..=n {
        let front: Vec<usize> = (0..=i).collect();
        let back: Vec<usize> = (i..=n).collect();
        let a = k.sub_simplex(&x, &front);
        let b = k.sub_simplex(&x, &back);
        if let (Some(a), Some(b)) = (normalize(&a), normalize(&b)) {
            out.add_term((a, b), Coeff::from(1));
        }
    }
    out
}

pub fn coproduct(k: &SimplicialSet, c: &Chain) -> Lin<(Cell, Cell)> {
    c.flat_map(|&cell| coproduct_cell(k, cell))
}

/// A degree-shifting linear map stored on basis elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap<S: Ord, T: Ord> {
    pub degree: isize,
    pub images: BTreeMap<S, Lin<T>>,
}

impl<S: BasisElement, T: BasisElement> ChainMap<S, T> {
    pub fn from_fn(degree: isize, basis: impl IntoIterator<Item = S>, f: impl Fn(&S) -> Lin<T>) -> Self {
        ChainMap {
            degree,
            images: basis.into_iter().map(|b| {
                let img = f(&b);
                (b, img)
            }).collect(),
        }
    }

    pub fn image(&self, b: &S) -> Lin<T> {
        self.images.get(b).cloned().unwrap_or_default()
    }

    pub fn apply(&self, c: &Lin<S>) -> Lin<T> {
        c.flat_map(|b| self.image(b))
    }

    /// `other ∘ self`.
    pub fn then<U: BasisElement>(&self, other: &ChainMap<T, U>) -> ChainMap<S, U> {
        ChainMap {
            degree: self.degree + other.degree,
            images: self.images.iter().map(|(b, img)| (b.clone(), other.apply(img))).collect(),
        }
    }
}

/// `h_♯`: nondegenerate images are kept, degenerate ones vanish.
pub fn induced_chain_map(h: &SimplicialMap) -> ChainMap<Cell, Cell> {
    let src = h.source();
    ChainMap::from_fn(0, src.all_cells().collect::<Vec<_>>(), |&c| {
        match normalize(&h.image(c)) {
            Some(t) => Lin::basis(t),
            None => Lin::zero(),
        }
    })
}

/// A connected or general chain coalgebra given on a basis.
pub trait Coalgebra: Clone + Send + Sync + 'static {
    type Basis: BasisElement;

    fn name(&self) -> String;
    /// Basis of the given degree, in a fixed order.
    fn basis(&self, degree: usize) -> Vec<Self::Basis>;
    fn top_degree(&self) -> usize;
    /// The group-like generator of degree 0, when it is the only one.
    fn unit(&self) -> Option<Self::Basis>;
    fn differential(&self, b: &Self::Basis) -> Lin<Self::Basis>;
    fn coproduct(&self, b: &Self::Basis) -> Lin<(Self::Basis, Self::Basis)>;

    /// `Δ̄ = Δ − 1⊗c − c⊗1` on positive-degree elements of a connected coalgebra.
    fn reduced_coproduct(&self, b: &Self::Basis) -> Lin<(Self::Basis, Self::Basis)> {
        match self.unit() {
            Some(u) => self.coproduct(b).filter(|(x, y)| *x != u && *y != u),
            None => self.coproduct(b),
        }
    }

    fn is_connected(&self) -> bool {
        self.unit().is_some()
    }

    fn is_simply_connected(&self) -> bool {
        self.is_connected() && self.basis(1).is_empty()
    }

    fn counit(&self, b: &Self::Basis) -> Coeff {
        if b.degree() == 0 {
            Coeff::from(1)
        } else {
            Coeff::from(0)
        }
    }
}

/// `C(K)` with the Alexander-Whitney coproduct.
#[derive(Clone)]
pub struct SimplicialChains {
    set: Arc<SimplicialSet>,
}

impl SimplicialChains {
    pub fn new(set: Arc<SimplicialSet>) -> Self {
        SimplicialChains { set }
    }

    pub fn set(&self) -> &Arc<SimplicialSet> {
        &self.set
    }
}

impl Coalgebra for SimplicialChains {
    type Basis = Cell;

    fn name(&self) -> String {
        format!("C({})", self.set.name())
    }

    fn basis(&self, degree: usize) -> Vec<Cell> {
        self.set.cells(degree).collect()
    }

    fn top_degree(&self) -> usize {
        self.set.top_dimension()
    }

    fn unit(&self) -> Option<Cell> {
        self.set.basepoint()
    }

    fn differential(&self, b: &Cell) -> Lin<Cell> {
        boundary_cell(&self.set, *b)
    }

    fn coproduct(&self, b: &Cell) -> Lin<(Cell, Cell)> {
        coproduct_cell(&self.set, *b)
    }
}

/// `d(a⊗b) = da⊗b + (-1)^{|a|} a⊗db`.
pub fn pair_differential<A: BasisElement, B: BasisElement>(
    a: &A,
    b: &B,
    da: impl Fn(&A) -> Lin<A>,
    db: impl Fn(&B) -> Lin<B>,
) -> Lin<(A, B)> {
    let mut out = da(a).map_basis(|x| (x.clone(), b.clone()));
    out.add_scaled(&db(b).map_basis(|y| (a.clone(), y.clone())), &sign(a.degree()));
    out
}

/// Leibniz differential on `a_1 ⊗ … ⊗ a_k`.
pub fn tensor_differential<B: BasisElement>(t: &Tensor<B>, d: impl Fn(&B) -> Lin<B>) -> Lin<Tensor<B>> {
    let mut out = Lin::zero();
    let mut before = 0;
    for (i, a) in t.0.iter().enumerate() {
        let s = sign(before);
        for (da, c) in &d(a) {
            let mut v = t.0.clone();
            v[i] = da.clone();
            out.add_term(Tensor(v), c * &s);
        }
        before += a.degree();
    }
    out
}

/// `(g_1 ⊗ … ⊗ g_k)(a_1 ⊗ … ⊗ a_k)` for maps of the given degrees, with the
/// Koszul sign `(-1)^{Σ_j |g_j| Σ_{l<j} |a_l|}`; outputs are concatenated.
pub fn apply_factorwise<B: BasisElement, T: BasisElement>(
    t: &[B],
    map_degrees: &[usize],
    mut g: impl FnMut(usize, &B) -> Lin<Tensor<T>>,
) -> Lin<Tensor<T>> {
    debug_assert_eq!(t.len(), map_degrees.len());
    let mut acc: Lin<Tensor<T>> = Lin::basis(Tensor(Vec::new()));
    let mut exponent = 0;
    let mut before = 0;
    for (j, a) in t.iter().enumerate() {
        exponent += map_degrees[j] * before;
        before += a.degree();
        let image = g(j, a);
        if image.is_zero() {
            return Lin::zero();
        }
        acc = concat(&acc, &image);
    }
    acc.scale(&sign(exponent))
}

/// Concatenation `u ⊗ v` of tensors, extended bilinearly.
pub fn concat<T: BasisElement>(a: &Lin<Tensor<T>>, b: &Lin<Tensor<T>>) -> Lin<Tensor<T>> {
    let mut out = Lin::zero();
    for (u, cu) in a {
        for (v, cv) in b {
            let mut w = u.0.clone();
            w.extend(v.0.iter().cloned());
            out.add_term(Tensor(w), cu * cv);
        }
    }
    out
}

/// `C ⊗ C'` with `Δ(x⊗y) = Σ (-1)^{|x''||y'|} (x'⊗y') ⊗ (x''⊗y'')`.
#[derive(Clone)]
pub struct TensorCoalgebra<C1, C2> {
    pub left: C1,
    pub right: C2,
}

impl<C1: Coalgebra, C2: Coalgebra> TensorCoalgebra<C1, C2> {
    pub fn new(left: C1, right: C2) -> Self {
        TensorCoalgebra { left, right }
    }
}

impl<C1: Coalgebra, C2: Coalgebra> Coalgebra for TensorCoalgebra<C1, C2> {
    type Basis = (C1::Basis, C2::Basis);

    fn name(&self) -> String {
        format!("{}⊗{}", self.left.name(), self.right.name())
    }

    fn basis(&self, degree: usize) -> Vec<Self::Basis> {
        let mut out = Vec::new();
        for p in 0..=degree {
            let left = self.left.basis(p);
            if left.is_empty() {
                continue;
            }
            let right = self.right.basis(degree - p);
            for a in &left {
                for b in &right {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    }

    fn top_degree(&self) -> usize {
        self.left.top_degree() + self.right.top_degree()
    }

    fn unit(&self) -> Option<Self::Basis> {
        Some((self.left.unit()?, self.right.unit()?))
    }

    fn differential(&self, b: &Self::Basis) -> Lin<Self::Basis> {
        pair_differential(&b.0, &b.1, |x| self.left.differential(x), |y| self.right.differential(y))
    }

    fn coproduct(&self, b: &Self::Basis) -> Lin<(Self::Basis, Self::Basis)> {
        let mut out = Lin::zero();
        let dl = self.left.coproduct(&b.0);
        let dr = self.right.coproduct(&b.1);
        for ((x1, x2), c) in &dl {
            for ((y1, y2), e) in &dr {
                let s = sign(x2.degree() * y1.degree());
                out.add_term(((x1.clone(), y1.clone()), (x2.clone(), y2.clone())), c * e * s);
            }
        }
        out
    }
}

/// Basis of the wedge `C ∨ C'`: positive-degree parts over a shared unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Wedge<A, B> {
    Unit,
    Left(A),
    Right(B),
}

impl<A: Graded, B: Graded> Graded for Wedge<A, B> {
    fn degree(&self) -> usize {
        match self {
            Wedge::Unit => 0,
            Wedge::Left(a) => a.degree(),
            Wedge::Right(b) => b.degree(),
        }
    }
}

/// `C ∨ C'`; every degree-0 generator of either side is identified with the unit
/// through the augmentation.
#[derive(Clone)]
pub struct WedgeCoalgebra<C1, C2> {
    pub left: C1,
    pub right: C2,
}

impl<C1: Coalgebra, C2: Coalgebra> WedgeCoalgebra<C1, C2> {
    pub fn new(left: C1, right: C2) -> Self {
        WedgeCoalgebra { left, right }
    }

    pub fn inject_left(b: &C1::Basis) -> Wedge<C1::Basis, C2::Basis> {
        if b.degree() == 0 {
            Wedge::Unit
        } else {
            Wedge::Left(b.clone())
        }
    }

    pub fn inject_right(b: &C2::Basis) -> Wedge<C1::Basis, C2::Basis> {
        if b.degree() == 0 {
            Wedge::Unit
        } else {
            Wedge::Right(b.clone())
        }
    }

    /// `κ(x⊗v) = x`, `κ(v⊗y) = y` for degree-0 `v`, and `κ(x⊗y) = 0` otherwise.
    pub fn kappa(b: &(C1::Basis, C2::Basis)) -> Lin<Wedge<C1::Basis, C2::Basis>> {
        match (b.0.degree(), b.1.degree()) {
            (0, 0) => Lin::basis(Wedge::Unit),
            (_, 0) => Lin::basis(Wedge::Left(b.0.clone())),
            (0, _) => Lin::basis(Wedge::Right(b.1.clone())),
            _ => Lin::zero(),
        }
    }
}

impl<C1: Coalgebra, C2: Coalgebra> Coalgebra for WedgeCoalgebra<C1, C2> {
    type Basis = Wedge<C1::Basis, C2::Basis>;

    fn name(&self) -> String {
        format!("{}∨{}", self.left.name(), self.right.name())
    }

    fn basis(&self, degree: usize) -> Vec<Self::Basis> {
        if degree == 0 {
            return vec![Wedge::Unit];
        }
        let mut out: Vec<Self::Basis> = self.left.basis(degree).into_iter().map(Wedge::Left).collect();
        out.extend(self.right.basis(degree).into_iter().map(Wedge::Right));
        out
    }

    fn top_degree(&self) -> usize {
        self.left.top_degree().max(self.right.top_degree())
    }

    fn unit(&self) -> Option<Self::Basis> {
        Some(Wedge::Unit)
    }

    fn differential(&self, b: &Self::Basis) -> Lin<Self::Basis> {
        match b {
            Wedge::Unit => Lin::zero(),
            Wedge::Left(x) => self.left.differential(x).map_basis(Self::inject_left),
            Wedge::Right(y) => self.right.differential(y).map_basis(Self::inject_right),
        }
    }

    fn coproduct(&self, b: &Self::Basis) -> Lin<(Self::Basis, Self::Basis)> {
        match b {
            Wedge::Unit => Lin::basis((Wedge::Unit, Wedge::Unit)),
            Wedge::Left(x) => self
                .left
                .coproduct(x)
                .map_basis(|(p, q)| (Self::inject_left(p), Self::inject_left(q))),
            Wedge::Right(y) => self
                .right
                .coproduct(y)
                .map_basis(|(p, q)| (Self::inject_right(p), Self::inject_right(q))),
        }
    }
}

/// Left-normalized iterated coproduct `δ^{(k)} : C → C^{⊗k}`, with `δ^{(1)} = 1`.
pub fn iterated_coproduct<C: Coalgebra>(c: &C, b: &C::Basis, k: usize) -> Lin<Tensor<C::Basis>> {
    assert!(k >= 1);
    let mut acc: Lin<Tensor<C::Basis>> = Lin::basis(Tensor(vec![b.clone()]));
    for _ in 1..k {
        acc = acc.flat_map(|t| {
            let (first, rest) = t.0.split_first().expect("nonempty tensor");
            c.coproduct(first).map_basis(|(x, y)| {
                let mut v = vec![x.clone(), y.clone()];
                v.extend(rest.iter().cloned());
                Tensor(v)
            })
        });
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{sphere, standard_simplex};

    #[test]
    fn boundary_of_triangle() {
        let d2 = standard_simplex(2);
        let top = Cell::new(2, 0);
        let d = boundary_cell(&d2, top);
        assert_eq!(d.len(), 3);
        assert!(boundary(&d2, &d).is_zero());
    }

    #[test]
    fn sphere_cycle() {
        let s2 = sphere(2);
        assert!(boundary_cell(&s2, Cell::new(2, 0)).is_zero());
    }

    #[test]
    fn iterated_coproduct_counts() {
        let c = SimplicialChains::new(Arc::new(sphere(3)));
        let t = iterated_coproduct(&c, &Cell::new(3, 0), 3);
        assert_eq!(t.len(), 3);
    }
}
