//! The cobar construction `ΩC = T(s⁻¹C₊)` of a simply-connected chain
//! coalgebra, Milgram's map `q`, twisting cochains and twisted tensor products.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::chains::{pair_differential, BasisElement, Coalgebra};
use crate::error::{Error, Result};
use crate::linear::{coeff_to_json, sign, Coeff, Graded, Lin};
use crate::report::Report;

/// A word `s⁻¹c_1 ⋯ s⁻¹c_n` in the cobar construction, stored by its letters.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Word<B>(pub Vec<B>);

impl<B: Graded> Graded for Word<B> {
    fn degree(&self) -> usize {
        self.0.iter().map(|c| c.degree() - 1).sum()
    }
}

impl<B: fmt::Debug> fmt::Debug for Word<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for c in &self.0 {
            write!(f, "[{c:?}]")?;
        }
        Ok(())
    }
}

impl<B> Word<B> {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn letter(b: B) -> Self {
        Word(vec![b])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Basis monomials of a graded algebra: a unit and a signed product.
pub trait Monomial: BasisElement {
    fn one() -> Self;
    /// The product and the exponent of its sign.
    fn mul(&self, other: &Self) -> (Self, usize);
}

impl<B: BasisElement> Monomial for Word<B> {
    fn one() -> Self {
        Word::unit()
    }

    fn mul(&self, other: &Self) -> (Self, usize) {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        (Word(v), 0)
    }
}

/// `(a⊗b)(c⊗d) = (-1)^{|b||c|} ac⊗bd`.
impl<M1: Monomial, M2: Monomial> Monomial for (M1, M2) {
    fn one() -> Self {
        (M1::one(), M2::one())
    }

    fn mul(&self, other: &Self) -> (Self, usize) {
        let (ac, s1) = self.0.mul(&other.0);
        let (bd, s2) = self.1.mul(&other.1);
        ((ac, bd), s1 + s2 + self.1.degree() * other.0.degree())
    }
}

/// Bilinear extension of the monomial product.
pub fn mul<M: Monomial>(a: &Lin<M>, b: &Lin<M>) -> Lin<M> {
    let mut out = Lin::zero();
    for (x, cx) in a {
        for (y, cy) in b {
            let (z, e) = x.mul(y);
            out.add_term(z, cx * cy * sign(e));
        }
    }
    out
}

/// Product of a sequence; the empty product is the unit.
pub fn product<M: Monomial>(factors: impl IntoIterator<Item = Lin<M>>) -> Lin<M> {
    let mut acc = Lin::basis(M::one());
    for f in factors {
        if acc.is_zero() {
            break;
        }
        acc = mul(&acc, &f);
    }
    acc
}

/// A differential graded algebra presented on a monomial basis.
pub trait DgAlgebra: Clone + Send + Sync + 'static {
    type Mono: Monomial;

    fn name(&self) -> String;
    fn basis(&self, degree: usize) -> Vec<Self::Mono>;
    fn differential(&self, m: &Self::Mono) -> Lin<Self::Mono>;

    fn d(&self, x: &Lin<Self::Mono>) -> Lin<Self::Mono> {
        x.flat_map(|m| self.differential(m))
    }
}

type LetterCache<B> = Arc<Mutex<HashMap<B, Lin<Word<B>>>>>;

/// `ΩC` for a simply-connected coalgebra `C`.
#[derive(Clone)]
pub struct Cobar<C: Coalgebra> {
    coalgebra: C,
    letter_d: LetterCache<C::Basis>,
}

impl<C: Coalgebra> Cobar<C> {
    pub fn new(coalgebra: C) -> Result<Self> {
        if !coalgebra.is_simply_connected() {
            return Err(Error::Precondition {
                space: coalgebra.name(),
                requirement: "simply connected (C_0 = ℤ, C_1 = 0)".into(),
            });
        }
        Ok(Cobar {
            coalgebra,
            letter_d: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    pub fn coalgebra(&self) -> &C {
        &self.coalgebra
    }

    /// `s⁻¹c` extended linearly; degree-0 terms are dropped.
    pub fn desuspend(&self, c: &Lin<C::Basis>) -> Lin<Word<C::Basis>> {
        c.filter(|b| b.degree() > 0).map_basis(|b| Word::letter(b.clone()))
    }

    /// `d s⁻¹c = −s⁻¹dc + Σ (-1)^{|c'|} s⁻¹c' s⁻¹c''` over `Δ̄c`.
    pub fn letter_differential(&self, c: &C::Basis) -> Lin<Word<C::Basis>> {
        if let Some(hit) = self.letter_d.lock().expect("cache lock").get(c) {
            return hit.clone();
        }
        let mut out = -self.desuspend(&self.coalgebra.differential(c));
        for ((x, y), k) in &self.coalgebra.reduced_coproduct(c) {
            out.add_term(Word(vec![x.clone(), y.clone()]), k * sign(x.degree()));
        }
        self.letter_d.lock().expect("cache lock").insert(c.clone(), out.clone());
        out
    }

    /// Letters of word degree `k`, i.e. basis elements of degree `k + 1`.
    pub fn letters(&self, k: usize) -> Vec<C::Basis> {
        if k == 0 || k + 1 > self.coalgebra.top_degree() {
            return Vec::new();
        }
        self.coalgebra.basis(k + 1)
    }
}

impl<C: Coalgebra> DgAlgebra for Cobar<C> {
    type Mono = Word<C::Basis>;

    fn name(&self) -> String {
        format!("Ω{}", self.coalgebra.name())
    }

    fn basis(&self, degree: usize) -> Vec<Self::Mono> {
        if degree == 0 {
            return vec![Word::unit()];
        }
        let mut out = Vec::new();
        for k in 1..=degree {
            let letters = self.letters(k);
            if letters.is_empty() {
                continue;
            }
            let tails = self.basis(degree - k);
            for c in &letters {
                for t in &tails {
                    let mut v = vec![c.clone()];
                    v.extend(t.0.iter().cloned());
                    out.push(Word(v));
                }
            }
        }
        out
    }

    /// Leibniz extension with `|s⁻¹c| = |c| − 1`.
    fn differential(&self, w: &Self::Mono) -> Lin<Self::Mono> {
        let mut out = Lin::zero();
        let mut before = 0;
        for (i, c) in w.0.iter().enumerate() {
            let s = sign(before);
            for (middle, k) in &self.letter_differential(c) {
                let mut v = w.0[..i].to_vec();
                v.extend(middle.0.iter().cloned());
                v.extend(w.0[i + 1..].iter().cloned());
                out.add_term(Word(v), k * &s);
            }
            before += c.degree() - 1;
        }
        out
    }
}

/// `A ⊗ A'` with the Koszul product and `d(a⊗b) = da⊗b + (-1)^{|a|} a⊗db`.
#[derive(Clone)]
pub struct TensorAlgebra<A1, A2> {
    pub left: A1,
    pub right: A2,
}

impl<A1: DgAlgebra, A2: DgAlgebra> TensorAlgebra<A1, A2> {
    pub fn new(left: A1, right: A2) -> Self {
        TensorAlgebra { left, right }
    }
}

impl<A1: DgAlgebra, A2: DgAlgebra> DgAlgebra for TensorAlgebra<A1, A2> {
    type Mono = (A1::Mono, A2::Mono);

    fn name(&self) -> String {
        format!("{}⊗{}", self.left.name(), self.right.name())
    }

    fn basis(&self, degree: usize) -> Vec<Self::Mono> {
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

    fn differential(&self, m: &Self::Mono) -> Lin<Self::Mono> {
        pair_differential(&m.0, &m.1, |a| self.left.differential(a), |b| self.right.differential(b))
    }
}

type GeneratorFn<B, M> = Arc<dyn Fn(&B) -> Lin<M> + Send + Sync>;

/// An algebra map out of a cobar construction, given on generators `s⁻¹c`.
#[derive(Clone)]
pub struct AlgebraMap<B: BasisElement, M: Monomial> {
    name: String,
    generator: GeneratorFn<B, M>,
    cache: Arc<Mutex<HashMap<B, Lin<M>>>>,
}

impl<B: BasisElement, M: Monomial> AlgebraMap<B, M> {
    pub fn new(name: impl Into<String>, generator: impl Fn(&B) -> Lin<M> + Send + Sync + 'static) -> Self {
        AlgebraMap {
            name: name.into(),
            generator: Arc::new(generator),
            cache: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn on_generator(&self, c: &B) -> Lin<M> {
        if let Some(hit) = self.cache.lock().expect("cache lock").get(c) {
            return hit.clone();
        }
        let image = (self.generator)(c);
        self.cache.lock().expect("cache lock").insert(c.clone(), image.clone());
        image
    }

    pub fn apply_word(&self, w: &Word<B>) -> Lin<M> {
        product(w.0.iter().map(|c| self.on_generator(c)))
    }

    pub fn apply(&self, x: &Lin<Word<B>>) -> Lin<M> {
        x.flat_map(|w| self.apply_word(w))
    }

    /// `other ∘ self`.
    pub fn then<M2: Monomial>(&self, other: &AlgebraMap<M::Letter, M2>) -> AlgebraMap<B, M2>
    where
        M: WordLike,
    {
        let first = self.clone();
        let second = other.clone();
        AlgebraMap::new(format!("{}∘{}", other.name, self.name), move |c| {
            first.on_generator(c).flat_map(|m| second.apply_word(&m.as_word()))
        })
    }
}

/// Monomials that are cobar words, so that algebra maps can be composed.
pub trait WordLike: Monomial {
    type Letter: BasisElement;
    fn as_word(&self) -> Word<Self::Letter>;
}

impl<B: BasisElement> WordLike for Word<B> {
    type Letter = B;
    fn as_word(&self) -> Word<B> {
        self.clone()
    }
}

/// `Ωg` for a coalgebra map `g`: `s⁻¹c ↦ s⁻¹g(c)`.
pub fn induced_algebra_map<B: BasisElement, T: BasisElement>(
    name: impl Into<String>,
    g: impl Fn(&B) -> Lin<T> + Send + Sync + 'static,
) -> AlgebraMap<B, Word<T>> {
    AlgebraMap::new(name, move |c| {
        g(c).filter(|t| t.degree() > 0).map_basis(|t| Word::letter(t.clone()))
    })
}

/// The identity of `ΩC`.
pub fn identity_map<B: BasisElement>() -> AlgebraMap<B, Word<B>> {
    AlgebraMap::new("1", |c: &B| Lin::basis(Word::letter(c.clone())))
}

/// Checks `d_A θ = θ d_Ω` on all words of degree `≤ bound`.
pub fn check_chain_algebra_map<C: Coalgebra, A: DgAlgebra>(
    source: &Cobar<C>,
    target: &A,
    map: &AlgebraMap<C::Basis, A::Mono>,
    bound: usize,
) -> Report {
    let mut report = Report::new(format!("{} chain map", map.name()), source.name(), bound);
    for n in 0..=bound {
        for w in source.basis(n) {
            let lhs = target.d(&map.apply_word(&w));
            let rhs = map.apply(&source.differential(&w));
            report.check(lhs == rhs, || format!("{w:?}: {lhs:?} vs {rhs:?}"));
        }
    }
    report
}

/// Milgram's `q : Ω(C⊗C') → ΩC ⊗ ΩC'`.
pub fn milgram_q<B1: BasisElement, B2: BasisElement>() -> AlgebraMap<(B1, B2), (Word<B1>, Word<B2>)> {
    AlgebraMap::new("q", |(x, y): &(B1, B2)| match (x.degree(), y.degree()) {
        (0, 0) => Lin::zero(),
        (_, 0) => Lin::basis((Word::letter(x.clone()), Word::unit())),
        (0, _) => Lin::basis((Word::unit(), Word::letter(y.clone()))),
        _ => Lin::zero(),
    })
}

/// A degree `−1` map `t : C → A` with `t = 0` in degree 0.
#[derive(Clone)]
pub struct TwistingCochain<B: BasisElement, M: Monomial> {
    name: String,
    table: GeneratorFn<B, M>,
}

impl<B: BasisElement, M: Monomial> TwistingCochain<B, M> {
    pub fn new(name: impl Into<String>, table: impl Fn(&B) -> Lin<M> + Send + Sync + 'static) -> Self {
        TwistingCochain {
            name: name.into(),
            table: Arc::new(table),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply_basis(&self, c: &B) -> Lin<M> {
        if c.degree() == 0 {
            Lin::zero()
        } else {
            (self.table)(c)
        }
    }

    pub fn apply(&self, c: &Lin<B>) -> Lin<M> {
        c.flat_map(|b| self.apply_basis(b))
    }

    /// The same cochain with the image of `c` negated.
    pub fn with_flipped_generator(&self, target: B) -> Self {
        let table = self.table.clone();
        TwistingCochain::new(format!("{} (flipped)", self.name), move |c: &B| {
            let image = table(c);
            if *c == target {
                -image
            } else {
                image
            }
        })
    }
}

/// `t_Ω : C → ΩC`, `c ↦ s⁻¹c`.
pub fn canonical_cochain<B: BasisElement>() -> TwistingCochain<B, Word<B>> {
    TwistingCochain::new("t_Ω", |c: &B| Lin::basis(Word::letter(c.clone())))
}

/// `dt + td = μ(t⊗t)Δ` on every basis element of degree `1..=bound`.
pub fn check_twisting_cochain<C: Coalgebra, A: DgAlgebra>(
    coalgebra: &C,
    algebra: &A,
    t: &TwistingCochain<C::Basis, A::Mono>,
    bound: usize,
) -> Report {
    let mut report = Report::new(format!("{} twisting", t.name()), coalgebra.name(), bound);
    for n in 1..=bound.min(coalgebra.top_degree()) {
        for c in coalgebra.basis(n) {
            let lhs = algebra.d(&t.apply_basis(&c)) + t.apply(&coalgebra.differential(&c));
            let mut rhs = Lin::zero();
            for ((x, y), k) in &coalgebra.coproduct(&c) {
                let term = mul(&t.apply_basis(x), &t.apply_basis(y));
                rhs.add_scaled(&term, &(k * sign(x.degree())));
            }
            report.check(lhs == rhs, || format!("{c:?}: dt+td = {lhs:?}, μ(t⊗t)Δ = {rhs:?}"));
        }
    }
    report
}

/// `t∗t' = t⊗ηε' + ηε⊗t'` on `C⊗C'`.
pub fn cartesian_product<B1: BasisElement, B2: BasisElement, M1: Monomial, M2: Monomial>(
    t: &TwistingCochain<B1, M1>,
    t2: &TwistingCochain<B2, M2>,
) -> TwistingCochain<(B1, B2), (M1, M2)> {
    let (a, b) = (t.clone(), t2.clone());
    TwistingCochain::new(format!("{}∗{}", t.name(), t2.name()), move |(x, y): &(B1, B2)| {
        let mut out = Lin::zero();
        if y.degree() == 0 {
            out += &a.apply_basis(x).map_basis(|m| (m.clone(), M2::one()));
        }
        if x.degree() == 0 {
            out += &b.apply_basis(y).map_basis(|m| (M1::one(), m.clone()));
        }
        out
    })
}

/// The algebra map `ΩC → A` with `s⁻¹c ↦ t(c)`, after checking `t` through `bound`.
pub fn cochain_to_algebra_map<C: Coalgebra, A: DgAlgebra>(
    coalgebra: &C,
    algebra: &A,
    t: &TwistingCochain<C::Basis, A::Mono>,
    bound: usize,
) -> Result<AlgebraMap<C::Basis, A::Mono>> {
    let report = check_twisting_cochain(coalgebra, algebra, t, bound);
    if !report.passed() {
        return Err(Error::NotTwisting(report.witnesses.first().cloned().unwrap_or_default()));
    }
    let t = t.clone();
    Ok(AlgebraMap::new(format!("θ({})", t.name()), move |c| t.apply_basis(c)))
}

/// `A ⊗_t C` with `D_t(a⊗c) = da⊗c + (-1)^{|a|} a⊗dc + (-1)^{|a|} Σ a·t(c')⊗c''`.
#[derive(Clone)]
pub struct TwistedTensor<A: DgAlgebra, C: Coalgebra> {
    pub algebra: A,
    pub coalgebra: C,
    pub cochain: TwistingCochain<C::Basis, A::Mono>,
}

impl<A: DgAlgebra, C: Coalgebra> TwistedTensor<A, C> {
    pub fn new(algebra: A, coalgebra: C, cochain: TwistingCochain<C::Basis, A::Mono>) -> Self {
        TwistedTensor {
            algebra,
            coalgebra,
            cochain,
        }
    }

    pub fn name(&self) -> String {
        format!("{}⊗_t{}", self.algebra.name(), self.coalgebra.name())
    }

    pub fn basis(&self, degree: usize) -> Vec<(A::Mono, C::Basis)> {
        let mut out = Vec::new();
        for q in 0..=degree.min(self.coalgebra.top_degree()) {
            let cells = self.coalgebra.basis(q);
            if cells.is_empty() {
                continue;
            }
            for a in self.algebra.basis(degree - q) {
                for c in &cells {
                    out.push((a.clone(), c.clone()));
                }
            }
        }
        out
    }

    pub fn differential(&self, (a, c): &(A::Mono, C::Basis)) -> Lin<(A::Mono, C::Basis)> {
        let mut out = pair_differential(a, c, |x| self.algebra.differential(x), |y| self.coalgebra.differential(y));
        let s = sign(a.degree());
        let am = Lin::basis(a.clone());
        for ((x, y), k) in &self.coalgebra.coproduct(c) {
            let at = mul(&am, &self.cochain.apply_basis(x));
            out.add_scaled(&at.map_basis(|m| (m.clone(), y.clone())), &(k * &s));
        }
        out
    }

    pub fn d(&self, x: &Lin<(A::Mono, C::Basis)>) -> Lin<(A::Mono, C::Basis)> {
        x.flat_map(|b| self.differential(b))
    }

    pub fn check_square_zero(&self, bound: usize) -> Report {
        let mut report = Report::new("D_t² = 0", self.name(), bound);
        for n in 0..=bound {
            for b in self.basis(n) {
                let dd = self.d(&self.differential(&b));
                report.check(dd.is_zero(), || format!("D_t²({b:?}) = {dd:?}"));
            }
        }
        report
    }
}

/// `d_Ω² = 0` on all words of degree `≤ bound`.
pub fn check_square_zero<A: DgAlgebra>(algebra: &A, bound: usize) -> Report {
    let mut report = Report::new("d² = 0", algebra.name(), bound);
    for n in 0..=bound {
        for w in algebra.basis(n) {
            let dd = algebra.d(&algebra.differential(&w));
            report.check(dd.is_zero(), || format!("d²({w:?}) = {dd:?}"));
        }
    }
    report
}

/// Cobar elements as `[{word: [labels], coefficient}]`.
pub fn element_to_json<B: Ord + Clone>(x: &Lin<Word<B>>, label: impl Fn(&B) -> serde_json::Value) -> serde_json::Value {
    serde_json::Value::Array(
        x.iter()
            .map(|(w, c)| {
                serde_json::json!({
                    "word": w.0.iter().map(&label).collect::<Vec<_>>(),
                    "coefficient": coeff_to_json(c),
                })
            })
            .collect(),
    )
}

/// Coefficient of the unit word, as the augmentation `ΩC → ℤ`.
pub fn augmentation<B: BasisElement>(x: &Lin<Word<B>>) -> Coeff {
    x.coeff(&Word::unit())
}

/// `f ⊗ g` on `ΩC ⊗ ΩC'` for degree-0 maps.
pub fn apply_tensor<B1: BasisElement, B2: BasisElement, M1: Monomial, M2: Monomial>(
    f: &AlgebraMap<B1, M1>,
    g: &AlgebraMap<B2, M2>,
    x: &Lin<(Word<B1>, Word<B2>)>,
) -> Lin<(M1, M2)> {
    let mut out = Lin::zero();
    for ((u, v), c) in x {
        let (fu, gv) = (f.apply_word(u), g.apply_word(v));
        for (a, ca) in &fu {
            for (b, cb) in &gv {
                out.add_term((a.clone(), b.clone()), c * ca * cb);
            }
        }
    }
    out
}
