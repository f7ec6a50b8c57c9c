//! Strongly homotopy coalgebra morphisms as families `F_k : C → D^{⊗k}`,
//! their induced cobar maps, composition, wedge, the transferred retract of
//! cobar constructions, and the family `F̄_k` with its closed form.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::chains::{
    apply_factorwise, concat, iterated_coproduct, BasisElement, Coalgebra, SimplicialChains, Tensor,
    TensorCoalgebra, Wedge, WedgeCoalgebra,
};
use crate::cobar::{apply_tensor, milgram_q, mul, product, AlgebraMap, Cobar, DgAlgebra, Word};
use crate::error::{Error, Result};
use crate::ezaw::EzData;
use crate::linear::{coeff_to_json, sign, Coeff, Graded, Lin};
use crate::report::Report;
use crate::simplicial::{subsets, Cell, SimplicialMap};

type Rule<S, T> = Arc<dyn Fn(&Family<S, T>, usize, &S) -> Lin<Tensor<T>> + Send + Sync>;

/// A family of maps `S → T^{⊗k}`, computed lazily and memoized per `(k, s)`.
type Cache<S, T> = Arc<RwLock<HashMap<(usize, S), Lin<Tensor<T>>>>>;

#[derive(Clone)]
pub struct Family<S: BasisElement, T: BasisElement> {
    name: String,
    rule: Rule<S, T>,
    cache: Cache<S, T>,
}

impl<S: BasisElement, T: BasisElement> Family<S, T> {
    /// `rule(family, k, s)` may call back into `family` for other components.
    pub fn new(
        name: impl Into<String>,
        rule: impl Fn(&Family<S, T>, usize, &S) -> Lin<Tensor<T>> + Send + Sync + 'static,
    ) -> Self {
        Family {
            name: name.into(),
            rule: Arc::new(rule),
            cache: Arc::new(RwLock::new(HashMap::new())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn component(&self, k: usize, s: &S) -> Lin<Tensor<T>> {
        if k == 0 {
            return Lin::zero();
        }
        let key = (k, s.clone());
        if let Some(hit) = self.cache.read().expect("cache lock").get(&key) {
            return hit.clone();
        }
        let value = (self.rule)(self, k, s);
        self.cache.write().expect("cache lock").entry(key).or_insert(value).clone()
    }

    pub fn apply(&self, k: usize, x: &Lin<S>) -> Lin<Tensor<T>> {
        x.flat_map(|s| self.component(k, s))
    }
}

/// A strongly homotopy coalgebra morphism `C → D`.
#[derive(Clone)]
pub struct DcshMorphism<C: Coalgebra, D: Coalgebra> {
    pub source: C,
    pub target: D,
    pub family: Family<C::Basis, D::Basis>,
}

impl<C: Coalgebra, D: Coalgebra> DcshMorphism<C, D> {
    pub fn new(source: C, target: D, family: Family<C::Basis, D::Basis>) -> Self {
        DcshMorphism { source, target, family }
    }

    /// A coalgebra map `g` viewed as the family `F_1 = g`, `F_k = 0` for `k ≥ 2`.
    pub fn strict(
        name: impl Into<String>,
        source: C,
        target: D,
        g: impl Fn(&C::Basis) -> Lin<D::Basis> + Send + Sync + 'static,
    ) -> Self {
        let family = Family::new(name, move |_, k, c| {
            if k == 1 {
                g(c).map_basis(|t| Tensor(vec![t.clone()]))
            } else {
                Lin::zero()
            }
        });
        DcshMorphism::new(source, target, family)
    }

    pub fn name(&self) -> &str {
        self.family.name()
    }

    pub fn component(&self, k: usize, c: &C::Basis) -> Lin<Tensor<D::Basis>> {
        self.family.component(k, c)
    }

    /// Largest `k` for which `F_k(c)` can contribute to `Ind`.
    pub fn max_arity(&self, degree: usize) -> usize {
        if self.target.is_simply_connected() {
            degree.saturating_sub(1).max(1)
        } else {
            degree + 1
        }
    }

    /// `Ind θ : ΩC → ΩD`, `s⁻¹c ↦ Σ_k (s⁻¹)^{⊗k} F_k(c)`.
    pub fn ind(&self) -> AlgebraMap<C::Basis, Word<D::Basis>> {
        let me = self.clone();
        AlgebraMap::new(format!("Ind({})", self.name()), move |c: &C::Basis| {
            let mut out = Lin::zero();
            for k in 1..=me.max_arity(c.degree()) {
                out += &desuspend_tensors(&me.component(k, c));
            }
            out
        })
    }
}

/// The identity family of `C`.
pub fn identity_family<C: Coalgebra>(c: &C) -> DcshMorphism<C, C> {
    DcshMorphism::strict("1", c.clone(), c.clone(), |b: &C::Basis| Lin::basis(b.clone()))
}

/// The strict family `h_♯` of a simplicial map.
pub fn simplicial_family(name: impl Into<String>, h: &SimplicialMap) -> DcshMorphism<SimplicialChains, SimplicialChains> {
    let map = h.clone();
    DcshMorphism::strict(
        name,
        SimplicialChains::new(h.source().clone()),
        SimplicialChains::new(h.target().clone()),
        move |c: &Cell| match map.image(*c).as_cell() {
            Some(t) => Lin::basis(t),
            None => Lin::zero(),
        },
    )
}

/// `(s⁻¹)^{⊗k}(a_1⊗…⊗a_k) = (-1)^{Σ_l |a_l|(k−l)} s⁻¹a_1⋯s⁻¹a_k`; tensors
/// with a degree-0 factor map to zero.
pub fn desuspend_tensors<T: BasisElement>(x: &Lin<Tensor<T>>) -> Lin<Word<T>> {
    let mut out = Lin::zero();
    for (t, c) in x {
        if t.0.iter().any(|a| a.degree() == 0) {
            continue;
        }
        let k = t.arity();
        let e: usize = t.0.iter().enumerate().map(|(l, a)| a.degree() * (k - 1 - l)).sum();
        out.add_term(Word(t.0.clone()), c * sign(e));
    }
    out
}

/// Compositions of `n` into `k` positive parts.
pub fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(k - 1) {
        for mut rest in compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `(θ'θ)_n = Σ_k Σ_{i_1+…+i_k=n} ε(i) (θ'_{i_1}⊗…⊗θ'_{i_k}) θ_k` with
/// `ε(i) = (-1)^{Σ_j (i_j−1)(i_{j+1}+…+i_k)}`.
pub fn compose<C: Coalgebra, D: Coalgebra, E: Coalgebra>(
    outer: &DcshMorphism<D, E>,
    inner: &DcshMorphism<C, D>,
) -> DcshMorphism<C, E> {
    let (th2, th) = (outer.clone(), inner.clone());
    let name = format!("{}∘{}", outer.name(), inner.name());
    let family = Family::new(name, move |_, n, c: &C::Basis| {
        let mut out = Lin::zero();
        for k in 1..=n {
            let first = th.component(k, c);
            if first.is_zero() {
                continue;
            }
            for parts in compositions(n, k) {
                let degrees: Vec<usize> = parts.iter().map(|i| i - 1).collect();
                let e: usize = (0..k)
                    .map(|j| degrees[j] * parts[j + 1..].iter().sum::<usize>())
                    .sum();
                let s = sign(e);
                for (t, coeff) in &first {
                    let image = apply_factorwise(&t.0, &degrees, |j, a| th2.component(parts[j], a));
                    out.add_scaled(&image, &(coeff * &s));
                }
            }
        }
        out
    });
    DcshMorphism::new(inner.source.clone(), outer.target.clone(), family)
}

/// `(d_1…d_n), (d'_1…d'_n) ↦ (d_1⊗d'_1)⊗…⊗(d_n⊗d'_n)` with its Koszul sign.
fn interleave<A: BasisElement, B: BasisElement>(left: &Tensor<A>, right: &Tensor<B>) -> (Tensor<(A, B)>, Coeff) {
    let n = left.arity();
    let mut e = 0;
    for j in 0..n {
        let after: usize = left.0[j + 1..].iter().map(Graded::degree).sum();
        e += right.0[j].degree() * after;
    }
    let pairs = left.0.iter().cloned().zip(right.0.iter().cloned()).collect();
    (Tensor(pairs), sign(e))
}

/// `θ ∧ θ' : C⊗C' → D⊗D'`: for each `k` and `i_1+…+i_k = n`,
/// `(δ^{(i_1)}⊗…⊗δ^{(i_k)})θ_k ⊗ (θ'_{i_1}⊗…⊗θ'_{i_k})δ^{(k)}`, interleaved.
pub fn wedge<C1: Coalgebra, D1: Coalgebra, C2: Coalgebra, D2: Coalgebra>(
    theta: &DcshMorphism<C1, D1>,
    theta2: &DcshMorphism<C2, D2>,
) -> DcshMorphism<TensorCoalgebra<C1, C2>, TensorCoalgebra<D1, D2>> {
    let (th, th2) = (theta.clone(), theta2.clone());
    let name = format!("{}∧{}", theta.name(), theta2.name());
    let family = Family::new(name, move |_, n, (c, c2): &(C1::Basis, C2::Basis)| {
        let mut out = Lin::zero();
        for k in 1..=n {
            let first = th.component(k, c);
            if first.is_zero() {
                continue;
            }
            let split = iterated_coproduct(&th2.source, c2, k);
            for parts in compositions(n, k) {
                let degrees: Vec<usize> = parts.iter().map(|i| i - 1).collect();
                let mut left: Lin<Tensor<D1::Basis>> = Lin::zero();
                for (t, coeff) in &first {
                    let spread = apply_factorwise(&t.0, &vec![0; k], |j, a| {
                        iterated_coproduct(&th.target, a, parts[j])
                    });
                    left.add_scaled(&spread, coeff);
                }
                if left.is_zero() {
                    continue;
                }
                let mut right: Lin<Tensor<D2::Basis>> = Lin::zero();
                for (t, coeff) in &split {
                    let image = apply_factorwise(&t.0, &degrees, |j, b| th2.component(parts[j], b));
                    right.add_scaled(&image, coeff);
                }
                let s = sign((n - k) * c.degree());
                for (l, cl) in &left {
                    for (r, cr) in &right {
                        let (t, e) = interleave(l, r);
                        out.add_term(t, cl * cr * &s * e);
                    }
                }
            }
        }
        out
    });
    DcshMorphism::new(
        TensorCoalgebra::new(theta.source.clone(), theta2.source.clone()),
        TensorCoalgebra::new(theta.target.clone(), theta2.target.clone()),
        family,
    )
}

pub type TensorChains = TensorCoalgebra<SimplicialChains, SimplicialChains>;
pub type WedgeChains = WedgeCoalgebra<SimplicialChains, SimplicialChains>;

fn coproduct_for_recursion<C: Coalgebra>(c: &C, b: &C::Basis) -> Lin<(C::Basis, C::Basis)> {
    if c.is_connected() {
        c.reduced_coproduct(b)
    } else {
        c.coproduct(b)
    }
}

/// Sign of `(F_i⊗F_j)(u⊗v)` in the recursion. It makes
/// `Σ_k (s⁻¹)^{⊗k} F_k` satisfy `Ω̃f(s⁻¹c) = s⁻¹f(c) + Ω̃f(d_1 s⁻¹φ(c))`,
/// where `d_1` is the quadratic part of the cobar differential.
pub fn split_sign(i: usize, j: usize, u_degree: usize) -> Coeff {
    -sign((j + 1) * u_degree + j * (i - 1))
}

/// `Σ_{i+j=k} ±(F_i⊗F_j)Δφ(y)`, signed by `split_sign`; the coproduct is
/// reduced when `C(K×L)` is connected.
fn split_recursion<T: BasisElement>(
    ez: &EzData,
    f: &Family<Cell, T>,
    k: usize,
    y: &Cell,
) -> Lin<Tensor<T>> {
    let y_chains = ez.total_chains();
    let mut out = Lin::zero();
    for (z, cz) in &ez.phi_cell(*y) {
        for ((u, v), cuv) in &coproduct_for_recursion(&y_chains, z) {
            for i in 1..k {
                let j = k - i;
                let a = f.component(i, u);
                if a.is_zero() {
                    continue;
                }
                let b = f.component(j, v);
                out.add_scaled(&concat(&a, &b), &(cz * cuv * split_sign(i, j, u.degree())));
            }
        }
    }
    out
}

/// The transferred family `F_1 = f`, `F_k = Σ_{i+j=k} ±(F_i⊗F_j)Δφ`.
pub fn gm_family(ez: &EzData, check_bound: usize) -> Result<DcshMorphism<SimplicialChains, TensorChains>> {
    let report = ez.check_nabla_coalgebra_map(check_bound);
    if !report.passed() {
        return Err(Error::Precondition {
            space: ez.total().name().into(),
            requirement: "Eilenberg-Zilber data (∇ is not a coalgebra map)".into(),
        });
    }
    let data = ez.clone();
    let family = Family::new("F", move |f, k, y: &Cell| {
        if k == 1 {
            data.aw_cell(*y).map_basis(|p| Tensor(vec![*p]))
        } else {
            split_recursion(&data, f, k, y)
        }
    });
    Ok(DcshMorphism::new(ez.total_chains(), TensorCoalgebra::new(ez.left_chains(), ez.right_chains()), family))
}

/// The retract `(Ω∇, Ω̃f, Ω̃φ)` between `Ω(C(K)⊗C(L))` and `ΩC(K×L)`.
#[derive(Clone)]
pub struct CobarRetract {
    pub ez: EzData,
    pub family: DcshMorphism<SimplicialChains, TensorChains>,
    pub small: Cobar<TensorChains>,
    pub big: Cobar<SimplicialChains>,
    pub nabla: AlgebraMap<(Cell, Cell), Word<Cell>>,
    pub f_tilde: AlgebraMap<Cell, Word<(Cell, Cell)>>,
    nabla_f: AlgebraMap<Cell, Word<Cell>>,
}

impl CobarRetract {
    pub fn new(ez: &EzData, check_bound: usize) -> Result<CobarRetract> {
        let family = gm_family(ez, check_bound)?;
        let small = Cobar::new(TensorCoalgebra::new(ez.left_chains(), ez.right_chains()))?;
        let big = Cobar::new(ez.total_chains())?;
        let data = ez.clone();
        let nabla = crate::cobar::induced_algebra_map("Ω∇", move |p: &(Cell, Cell)| data.shuffle(p.0, p.1));
        let f_tilde = family.ind();
        let nabla_f = f_tilde.then(&nabla);
        Ok(CobarRetract {
            ez: ez.clone(),
            family,
            small,
            big,
            nabla,
            f_tilde,
            nabla_f,
        })
    }

    /// `T(∇f)` on a letter, without the transfer.
    fn linear_nabla_f(&self, c: &Cell) -> Lin<Word<Cell>> {
        self.big.desuspend(&self.ez.nabla(&self.ez.aw_cell(*c)))
    }

    /// The tensor-trick homotopy `Φ_0(x_1⋯x_n) = Σ_i (-1)^{|x_1⋯x_{i−1}|}
    /// ∇f(x_1)⋯∇f(x_{i−1}) Φ_0(x_i) x_{i+1}⋯x_n` with `Φ_0(s⁻¹c) = −s⁻¹φ(c)`.
    fn phi_0(&self, w: &Word<Cell>) -> Lin<Word<Cell>> {
        let mut out = Lin::zero();
        let mut left = Lin::basis(Word::unit());
        for (i, c) in w.0.iter().enumerate() {
            let before: usize = w.0[..i].iter().map(|x| x.degree() - 1).sum();
            let middle = -self.big.desuspend(&self.ez.phi_cell(*c));
            let right = Lin::basis(Word(w.0[i + 1..].to_vec()));
            out.add_scaled(&product([left.clone(), middle, right]), &sign(before));
            left = mul(&left, &self.linear_nabla_f(c));
            if left.is_zero() {
                break;
            }
        }
        out
    }

    /// The quadratic part `d_1` of the cobar differential on `ΩC(K×L)`.
    fn d_1(&self, x: &Lin<Word<Cell>>) -> Lin<Word<Cell>> {
        x.flat_map(|w| {
            let mut out = Lin::zero();
            let mut before = 0;
            for (i, c) in w.0.iter().enumerate() {
                for (middle, k) in &self.big.letter_differential(c) {
                    if middle.len() == 2 {
                        let mut v = w.0[..i].to_vec();
                        v.extend(middle.0.iter().cloned());
                        v.extend(w.0[i + 1..].iter().cloned());
                        out.add_term(Word(v), k * sign(before));
                    }
                }
                before += c.degree() - 1;
            }
            out
        })
    }

    /// `Ω̃φ = Σ_n Φ_0(d_1Φ_0)^n`. The series stops because `d_1` lengthens words.
    pub fn phi_word(&self, w: &Word<Cell>) -> Lin<Word<Cell>> {
        let mut out = Lin::zero();
        let mut x = Lin::basis(w.clone());
        while !x.is_zero() {
            let h = x.flat_map(|v| self.phi_0(v));
            out += &h;
            x = self.d_1(&h);
        }
        out
    }

    pub fn phi(&self, x: &Lin<Word<Cell>>) -> Lin<Word<Cell>> {
        x.flat_map(|w| self.phi_word(w))
    }

    /// The retract conditions at the cobar level, on all words of degree `≤ bound`.
    pub fn check(&self, bound: usize) -> Vec<Report> {
        let space = self.ez.total().name().to_string();
        let mut retraction = Report::new("Ω̃f∘Ω∇ = 1", &space, bound);
        let mut phi_nabla = Report::new("Ω̃φ∘Ω∇ = 0", &space, bound);
        for n in 0..=bound {
            for w in self.small.basis(n) {
                let wl = Lin::basis(w.clone());
                let image = self.nabla.apply_word(&w);
                let back = self.f_tilde.apply(&image);
                retraction.check(back == wl, || format!("{w:?} ↦ {back:?}"));
                let p = self.phi(&image);
                phi_nabla.check(p.is_zero(), || format!("{w:?} ↦ {p:?}"));
            }
        }
        let mut f_chain = Report::new("Ω̃f chain map", &space, bound);
        let mut f_mult = Report::new("Ω̃f multiplicative", &space, bound);
        let mut nabla_chain = Report::new("Ω∇ chain map", &space, bound);
        let mut homotopy = Report::new("dΩ̃φ + Ω̃φd = Ω∇Ω̃f − 1", &space, bound);
        let mut f_phi = Report::new("Ω̃f∘Ω̃φ = 0", &space, bound);
        let mut phi_phi = Report::new("Ω̃φ∘Ω̃φ = 0", &space, bound);
        for n in 0..=bound {
            for w in self.big.basis(n) {
                let wl = Lin::basis(w.clone());
                let dw = self.big.differential(&w);
                let lhs = self.small.d(&self.f_tilde.apply_word(&w));
                let rhs = self.f_tilde.apply(&dw);
                f_chain.check(lhs == rhs, || format!("{w:?}: {lhs:?} vs {rhs:?}"));
                for split in 1..w.len() {
                    let (a, b) = (Word(w.0[..split].to_vec()), Word(w.0[split..].to_vec()));
                    let whole = self.f_tilde.apply_word(&w);
                    let parts = mul(&self.f_tilde.apply_word(&a), &self.f_tilde.apply_word(&b));
                    f_mult.check(whole == parts, || format!("{a:?}·{b:?}"));
                }
                let p = self.phi_word(&w);
                let lhs = self.big.d(&p) + self.phi(&dw);
                let rhs = self.nabla_f.apply_word(&w) - wl;
                homotopy.check(lhs == rhs, || format!("{w:?}: {lhs:?} vs {rhs:?}"));
                let fp = self.f_tilde.apply(&p);
                f_phi.check(fp.is_zero(), || format!("{w:?} ↦ {fp:?}"));
                let pp = self.phi(&p);
                phi_phi.check(pp.is_zero(), || format!("{w:?} ↦ {pp:?}"));
            }
        }
        for n in 0..=bound {
            for w in self.small.basis(n) {
                let lhs = self.big.d(&self.nabla.apply_word(&w));
                let rhs = self.nabla.apply(&self.small.differential(&w));
                nabla_chain.check(lhs == rhs, || format!("{w:?}"));
            }
        }
        vec![retraction, homotopy, phi_nabla, f_phi, phi_phi, f_chain, f_mult, nabla_chain]
    }
}

pub type WedgeTensor = Tensor<Wedge<Cell, Cell>>;

/// `F̄_1 = κf`, `F̄_k = Σ_{i+j=k} ±(F̄_i⊗F̄_j)Δφ` into `(C(K)∨C(L))^{⊗k}`.
pub fn fbar_family(ez: &EzData) -> DcshMorphism<SimplicialChains, WedgeChains> {
    let data = ez.clone();
    let family = Family::new("F̄", move |f, k, y: &Cell| {
        if k == 1 {
            data.aw_cell(*y)
                .flat_map(WedgeChains::kappa)
                .map_basis(|w| Tensor(vec![*w]))
        } else {
            split_recursion(&data, f, k, y)
        }
    });
    DcshMorphism::new(ez.total_chains(), WedgeCoalgebra::new(ez.left_chains(), ez.right_chains()), family)
}

/// `(F̄_i⊗F̄_j)Δφ(y)`, the summands of the recursion.
pub fn fbar_split(
    ez: &EzData,
    fbar: &DcshMorphism<SimplicialChains, WedgeChains>,
    i: usize,
    j: usize,
    y: Cell,
) -> Lin<Tensor<Wedge<Cell, Cell>>> {
    let mut out = Lin::zero();
    let y_chains = ez.total_chains();
    for (z, cz) in &ez.phi_cell(y) {
        for ((u, v), cuv) in &coproduct_for_recursion(&y_chains, z) {
            let a = fbar.component(i, u);
            if a.is_zero() {
                continue;
            }
            let b = fbar.component(j, v);
            out.add_scaled(&concat(&a, &b), &(cz * cuv * split_sign(i, j, u.degree())));
        }
    }
    out
}

/// `κ^{⊗k}` on `(C(K)⊗C(L))^{⊗k}`.
pub fn kappa_tensor(x: &Lin<Tensor<(Cell, Cell)>>) -> Lin<Tensor<Wedge<Cell, Cell>>> {
    x.flat_map(|t| apply_factorwise(&t.0, &vec![0; t.arity()], |_, p| WedgeChains::kappa(p).map_basis(|w| Tensor(vec![*w]))))
}

/// The surviving index sets of the closed form on `z`: for each
/// `0 < i_1 < … < i_r < n`, the factors `y_{0 i_1 … i_r n}, x_{0…i_1}, …, x_{i_r…n}`
/// with 1-dimensional factors removed as units; index sets meeting a
/// degenerate factor of higher dimension are skipped.
pub fn fbar_closed_terms(ez: &EzData, z: Cell) -> Vec<(Vec<usize>, WedgeTensor)> {
    let n = z.dim as usize;
    let (x, y) = ez.product().components(z);
    let inner: Vec<usize> = (1..n).collect();
    let mut out = Vec::new();
    for r in 0..n {
        for cuts in subsets(&inner, r) {
            let mut verts = vec![0];
            verts.extend(cuts.iter().copied());
            verts.push(n);
            let mut pieces = vec![(ez.right().sub_simplex(&y, &verts), false)];
            for w in verts.windows(2) {
                let span: Vec<usize> = (w[0]..=w[1]).collect();
                pieces.push((ez.left().sub_simplex(&x, &span), true));
            }
            let mut factors = Vec::new();
            let mut alive = true;
            for (s, left) in pieces {
                if s.dim() <= 1 {
                    continue;
                }
                match s.as_cell() {
                    Some(c) if left => factors.push(Wedge::Left(c)),
                    Some(c) => factors.push(Wedge::Right(c)),
                    None => alive = false,
                }
            }
            if alive {
                out.push((cuts, Tensor(factors)));
            }
        }
    }
    out
}

/// Closed form of `F̄_k(z)`: the terms of `fbar_closed_terms` with exactly `k`
/// factors, signed by `closed_sign` and `(-1)^{k(k−1)/2 + k − 1}`.
pub fn fbar_closed(ez: &EzData, z: Cell, k: usize) -> Lin<Tensor<Wedge<Cell, Cell>>> {
    let n = z.dim as usize;
    fbar_closed_terms(ez, z)
        .into_iter()
        .filter(|(_, t)| t.arity() == k)
        .map(|(cuts, t)| (t, closed_sign(n, &cuts) * sign(k * (k - 1) / 2 + k - 1)))
        .collect()
}

/// Sign of the closed-form term indexed by `0 < i_1 < … < i_r < n`.
///
/// Walk the `x`-pieces of dimension `d_j = r_j − m_j ≥ 2` from the last one
/// to the first, with `N_1 = n` and `N_{j+1} = N_j − d_j + 1`; the exponent is
/// `Σ_j 1 + (N_j − r_j) d_j + m_j`. With no cuts the single term `x` has sign `+`.
pub fn closed_sign(n: usize, cuts: &[usize]) -> Coeff {
    if cuts.is_empty() {
        return Coeff::from(1);
    }
    let mut verts = vec![0];
    verts.extend_from_slice(cuts);
    verts.push(n);
    let mut top = n;
    let mut e = 0;
    for w in verts.windows(2).rev() {
        let (m, r) = (w[0], w[1]);
        let d = r - m;
        if d < 2 {
            continue;
        }
        e += 1 + (top - r) * d + m;
        top -= d - 1;
    }
    sign(e)
}

/// `γ : T s⁻¹(C₊∨C'₊) → ΩC ⊗ ΩC'`.
pub fn gamma() -> AlgebraMap<Wedge<Cell, Cell>, (Word<Cell>, Word<Cell>)> {
    AlgebraMap::new("γ", |w: &Wedge<Cell, Cell>| match w {
        Wedge::Unit => Lin::zero(),
        Wedge::Left(x) => Lin::basis((Word::letter(*x), Word::unit())),
        Wedge::Right(y) => Lin::basis((Word::unit(), Word::letter(*y))),
    })
}

/// `T(s⁻¹κs) : Ω(C⊗C') → T s⁻¹(C₊∨C'₊)`.
pub fn kappa_algebra_map() -> AlgebraMap<(Cell, Cell), Word<Wedge<Cell, Cell>>> {
    crate::cobar::induced_algebra_map("T(s⁻¹κs)", |p: &(Cell, Cell)| WedgeChains::kappa(p))
}

/// Families as `{ "k": [ {source, image} ] }`.
pub fn family_to_json<S: BasisElement, T: BasisElement>(
    family: &Family<S, T>,
    sources: &[S],
    max_k: usize,
    label_source: impl Fn(&S) -> serde_json::Value,
    label_target: impl Fn(&T) -> serde_json::Value,
) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    for k in 1..=max_k {
        let mut rows = Vec::new();
        for s in sources {
            let image = family.component(k, s);
            if image.is_zero() {
                continue;
            }
            let terms: Vec<serde_json::Value> = image
                .iter()
                .map(|(t, c)| {
                    serde_json::json!({
                        "tensor": t.0.iter().map(&label_target).collect::<Vec<_>>(),
                        "coefficient": coeff_to_json(c),
                    })
                })
                .collect();
            rows.push(serde_json::json!({"source": label_source(s), "image": terms}));
        }
        map.insert(k.to_string(), serde_json::Value::Array(rows));
    }
    serde_json::Value::Object(map)
}

/// `Ind(θ'∘θ) = Ind(θ')∘Ind(θ)` on all words of degree `≤ bound`.
pub fn check_functoriality<C: Coalgebra, D: Coalgebra, E: Coalgebra>(
    outer: &DcshMorphism<D, E>,
    inner: &DcshMorphism<C, D>,
    bound: usize,
) -> Result<Report> {
    let source = Cobar::new(inner.source.clone())?;
    let composite = compose(outer, inner).ind();
    let (a, b) = (inner.ind(), outer.ind());
    let mut report = Report::new(
        format!("Ind({}∘{}) = Ind({})∘Ind({})", outer.name(), inner.name(), outer.name(), inner.name()),
        source.name(),
        bound,
    );
    for n in 0..=bound {
        for w in source.basis(n) {
            let lhs = composite.apply_word(&w);
            let rhs = b.apply(&a.apply_word(&w));
            report.check(lhs == rhs, || format!("{w:?}: {lhs:?} vs {rhs:?}"));
        }
    }
    Ok(report)
}

/// `q∘Ind(θ∧θ') = (Ind θ ⊗ Ind θ')∘q` on all words of degree `≤ bound`.
pub fn check_wedge_law<C1: Coalgebra, D1: Coalgebra, C2: Coalgebra, D2: Coalgebra>(
    theta: &DcshMorphism<C1, D1>,
    theta2: &DcshMorphism<C2, D2>,
    bound: usize,
) -> Result<Report> {
    let w = wedge(theta, theta2);
    let source = Cobar::new(w.source.clone())?;
    let ind = w.ind();
    let (a, b) = (theta.ind(), theta2.ind());
    let (q_source, q_target) = (milgram_q(), milgram_q());
    let mut report = Report::new(
        format!("q∘Ind({}∧{}) = (Ind⊗Ind)∘q", theta.name(), theta2.name()),
        source.name(),
        bound,
    );
    for n in 0..=bound {
        for word in source.basis(n) {
            let lhs = q_target.apply(&ind.apply_word(&word));
            let rhs = apply_tensor(&a, &b, &q_source.apply_word(&word));
            report.check(lhs == rhs, || format!("{word:?}: {lhs:?} vs {rhs:?}"));
        }
    }
    Ok(report)
}

fn products_cells(ez: &EzData, bound: usize) -> Vec<Cell> {
    (2..=bound.min(ez.total().top_dimension()))
        .flat_map(|d| ez.total().cells(d).collect::<Vec<_>>())
        .collect()
}

/// The closed form of `F̄_k` against the recursion, for every `k`, on every
/// cell of `K×L` of dimension `≤ bound`.
pub fn check_fbar_closed_form(ez: &EzData, bound: usize) -> Report {
    let fbar = fbar_family(ez);
    let mut report = Report::new("F̄ closed form = recursion", ez.total().name(), bound);
    for z in products_cells(ez, bound) {
        for k in 1..=z.degree() {
            let a = fbar.component(k, &z);
            let b = fbar_closed(ez, z, k);
            report.check(a == b, || format!("{} k={k}: {a:?} vs {b:?}", ez.total().label(z)));
        }
    }
    report
}

/// `(F̄_i⊗F̄_j)Δφ = 0` whenever `j ≥ 2`.
pub fn check_fbar_vanishing(ez: &EzData, bound: usize) -> Report {
    let fbar = fbar_family(ez);
    let mut report = Report::new("(F̄_i⊗F̄_j)Δφ = 0 for j ≥ 2", ez.total().name(), bound);
    for z in products_cells(ez, bound) {
        for k in 3..=z.degree() + 1 {
            for j in 2..k {
                let x = fbar_split(ez, &fbar, k - j, j, z);
                report.check(x.is_zero(), || format!("{} i={} j={j}: {x:?}", ez.total().label(z), k - j));
            }
        }
    }
    report
}

/// `F̄_k = κ^{⊗k}F_k`.
pub fn check_fbar_kappa(ez: &EzData, bound: usize) -> Result<Report> {
    let f = gm_family(ez, bound.min(4))?;
    let fbar = fbar_family(ez);
    let mut report = Report::new("F̄_k = κ^{⊗k}F_k", ez.total().name(), bound);
    for z in products_cells(ez, bound) {
        for k in 1..=z.degree() {
            let a = fbar.component(k, &z);
            let b = kappa_tensor(&f.component(k, &z));
            report.check(a == b, || format!("{} k={k}: {a:?} vs {b:?}", ez.total().label(z)));
        }
    }
    Ok(report)
}

/// `q = γ∘T(s⁻¹κs)` on `Ω(C(K)⊗C(L))` and `q∘Ω̃f = γ∘Ind(F̄)` on `ΩC(K×L)`.
pub fn check_gamma_factorization(retract: &CobarRetract, bound: usize) -> Vec<Report> {
    let ez = &retract.ez;
    let q = milgram_q();
    let gk = kappa_algebra_map().then(&gamma());
    let mut first = Report::new("q = γ∘T(s⁻¹κs)", retract.small.name(), bound);
    for n in 0..=bound {
        for w in retract.small.basis(n) {
            let lhs = q.apply_word(&w);
            let rhs = gk.apply_word(&w);
            first.check(lhs == rhs, || format!("{w:?}: {lhs:?} vs {rhs:?}"));
        }
    }
    let via_fbar = fbar_family(ez).ind().then(&gamma());
    let via_f = retract.f_tilde.then(&q);
    let mut second = Report::new("q∘Ω̃f = γ∘Ind(F̄)", retract.big.name(), bound);
    for n in 1..=bound {
        for c in retract.big.letters(n) {
            let lhs = via_f.on_generator(&c);
            let rhs = via_fbar.on_generator(&c);
            second.check(lhs == rhs, || format!("{}: {lhs:?} vs {rhs:?}", ez.total().label(c)));
        }
    }
    vec![first, second]
}
