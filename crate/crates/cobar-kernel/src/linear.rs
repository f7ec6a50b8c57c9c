//! Finite integer linear combinations over an ordered basis.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

pub type Coeff = BigInt;

/// Anything carrying a homological degree.
pub trait Graded {
    fn degree(&self) -> usize;
}

impl<A: Graded, B: Graded> Graded for (A, B) {
    fn degree(&self) -> usize {
        self.0.degree() + self.1.degree()
    }
}

impl<A: Graded, B: Graded, C: Graded> Graded for (A, B, C) {
    fn degree(&self) -> usize {
        self.0.degree() + self.1.degree() + self.2.degree()
    }
}

/// `(-1)^e` as a coefficient.
pub fn sign(e: usize) -> Coeff {
    if e.is_multiple_of(2) {
        Coeff::one()
    } else {
        -Coeff::one()
    }
}

/// A linear combination with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lin<B: Ord> {
    terms: BTreeMap<B, Coeff>,
}

impl<B: Ord> Default for Lin<B> {
    fn default() -> Self {
        Lin { terms: BTreeMap::new() }
    }
}

impl<B: Ord + Clone> Lin<B> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: B) -> Self {
        Self::term(b, Coeff::one())
    }

    pub fn term(b: B, c: Coeff) -> Self {
        let mut out = Self::zero();
        out.add_term(b, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, B, Coeff> {
        self.terms.iter()
    }

    pub fn basis_elements(&self) -> impl Iterator<Item = &B> {
        self.terms.keys()
    }

    pub fn coeff(&self, b: &B) -> Coeff {
        self.terms.get(b).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn add_term(&mut self, b: B, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Lin<B>, c: &Coeff) {
        if c.is_zero() {
            return;
        }
        for (b, v) in &other.terms {
            self.add_term(b.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Coeff) -> Lin<B> {
        let mut out = Lin::zero();
        out.add_scaled(self, c);
        out
    }

    /// Extends `f` linearly.
    pub fn flat_map<B2: Ord + Clone>(&self, mut f: impl FnMut(&B) -> Lin<B2>) -> Lin<B2> {
        let mut out = Lin::zero();
        for (b, c) in &self.terms {
            out.add_scaled(&f(b), c);
        }
        out
    }

    /// Relabels basis elements; colliding labels are summed.
    pub fn map_basis<B2: Ord + Clone>(&self, mut f: impl FnMut(&B) -> B2) -> Lin<B2> {
        let mut out = Lin::zero();
        for (b, c) in &self.terms {
            out.add_term(f(b), c.clone());
        }
        out
    }

    pub fn filter(&self, mut keep: impl FnMut(&B) -> bool) -> Lin<B> {
        Lin {
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| keep(b))
                .map(|(b, c)| (b.clone(), c.clone()))
                .collect(),
        }
    }

    /// Negates the coefficient of `b`; returns false if `b` is absent.
    pub fn flip_sign(&mut self, b: &B) -> bool {
        match self.terms.get_mut(b) {
            Some(c) => {
                *c = -c.clone();
                true
            }
            None => false,
        }
    }

    /// Largest absolute coefficient, for diagnostics.
    pub fn max_abs_coeff(&self) -> Coeff {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Coeff::zero)
    }
}

impl<B: Ord + Clone + Graded> Lin<B> {
    /// Keeps the terms of the given degree.
    pub fn in_degree(&self, n: usize) -> Lin<B> {
        self.filter(|b| b.degree() == n)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Graded::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }
}

impl<B: Ord + Clone> FromIterator<(B, Coeff)> for Lin<B> {
    fn from_iter<I: IntoIterator<Item = (B, Coeff)>>(iter: I) -> Self {
        let mut out = Lin::zero();
        for (b, c) in iter {
            out.add_term(b, c);
        }
        out
    }
}

impl<B: Ord + Clone> IntoIterator for Lin<B> {
    type Item = (B, Coeff);
    type IntoIter = btree_map::IntoIter<B, Coeff>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

impl<'a, B: Ord + Clone> IntoIterator for &'a Lin<B> {
    type Item = (&'a B, &'a Coeff);
    type IntoIter = btree_map::Iter<'a, B, Coeff>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl<B: Ord + Clone> AddAssign<&Lin<B>> for Lin<B> {
    fn add_assign(&mut self, rhs: &Lin<B>) {
        for (b, c) in &rhs.terms {
            self.add_term(b.clone(), c.clone());
        }
    }
}

impl<B: Ord + Clone> SubAssign<&Lin<B>> for Lin<B> {
    fn sub_assign(&mut self, rhs: &Lin<B>) {
        for (b, c) in &rhs.terms {
            self.add_term(b.clone(), -c.clone());
        }
    }
}

impl<B: Ord + Clone> Add for Lin<B> {
    type Output = Lin<B>;
    fn add(mut self, rhs: Lin<B>) -> Lin<B> {
        self += &rhs;
        self
    }
}

impl<B: Ord + Clone> Sub for Lin<B> {
    type Output = Lin<B>;
    fn sub(mut self, rhs: Lin<B>) -> Lin<B> {
        self -= &rhs;
        self
    }
}

impl<B: Ord + Clone> Neg for Lin<B> {
    type Output = Lin<B>;
    fn neg(self) -> Lin<B> {
        Lin {
            terms: self.terms.into_iter().map(|(b, c)| (b, -c)).collect(),
        }
    }
}

impl<B: Ord + fmt::Debug> fmt::Debug for Lin<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            write!(f, "{b:?}")?;
        }
        Ok(())
    }
}

/// JSON coefficient: a number when it fits in `i64`, a decimal string otherwise.
pub fn coeff_to_json(c: &Coeff) -> serde_json::Value {
    match c.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(c.to_string()),
    }
}

struct JsonCoeff<'a>(&'a Coeff);

impl Serialize for JsonCoeff<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct JsonTerm<'a, B> {
    basis: &'a B,
    coefficient: &'a Coeff,
}

impl<B: Serialize> Serialize for JsonTerm<'_, B> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Term", 2)?;
        st.serialize_field("basis", self.basis)?;
        st.serialize_field("coefficient", &JsonCoeff(self.coefficient))?;
        st.end()
    }
}

/// Serializes as an array of `{basis, coefficient}` records.
impl<B: Ord + Serialize> Serialize for Lin<B> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (basis, coefficient) in &self.terms {
            seq.serialize_element(&JsonTerm { basis, coefficient })?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_terms() {
        let mut a = Lin::term(1u32, Coeff::from(3));
        a.add_term(1, Coeff::from(-3));
        assert!(a.is_zero());
    }

    #[test]
    fn flat_map_is_linear() {
        let a: Lin<u32> = [(1, Coeff::from(2)), (2, Coeff::from(-1))].into_iter().collect();
        let b = a.flat_map(|x| Lin::term(x % 2, Coeff::from(*x)));
        assert_eq!(b.coeff(&1), Coeff::from(2));
        assert_eq!(b.coeff(&0), Coeff::from(-2));
    }

    #[test]
    fn json_shape() {
        let a = Lin::term("x".to_string(), Coeff::from(-2));
        let v = serde_json::to_value(&a).unwrap();
        assert_eq!(v, serde_json::json!([{"basis": "x", "coefficient": -2}]));
    }
}
