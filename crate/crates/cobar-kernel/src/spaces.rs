//! Space specifications: `delta:n`, `delta-bar:n`, `sphere:n`, `quotient:n,r`,
//! `point`, `product:A,B` (nested) and paths to simplicial-set JSON files.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::homology::{chains_complex, cobar_complex, twisted_cobar_complex, ChainComplex};
use crate::simplicial::{
    delta_bar, point, simplex_quotient, sphere, standard_simplex, Product, SimplicialSet, SimplicialSetJson, MAX_DIM,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceSpec {
    Delta(usize),
    DeltaBar(usize),
    Sphere(usize),
    Quotient(usize, usize),
    Point,
    Product(Box<SpaceSpec>, Box<SpaceSpec>),
    File(PathBuf),
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Delta(n) => write!(f, "delta:{n}"),
            SpaceSpec::DeltaBar(n) => write!(f, "delta-bar:{n}"),
            SpaceSpec::Sphere(n) => write!(f, "sphere:{n}"),
            SpaceSpec::Quotient(n, r) => write!(f, "quotient:{n},{r}"),
            SpaceSpec::Point => write!(f, "point"),
            SpaceSpec::Product(a, b) => write!(f, "product:{a},{b}"),
            SpaceSpec::File(p) => write!(f, "{}", p.display()),
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    whole: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self) -> Error {
        Error::UnknownSpace(self.whole.to_string())
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<usize> {
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.err());
        }
        let n: usize = self.rest()[..digits].parse().map_err(|_| self.err())?;
        self.pos += digits;
        if n > MAX_DIM {
            return Err(Error::DimensionTooLarge { dim: n, max: MAX_DIM });
        }
        Ok(n)
    }

    fn comma(&mut self) -> Result<()> {
        if self.eat(",") {
            Ok(())
        } else {
            Err(self.err())
        }
    }

    fn spec(&mut self) -> Result<SpaceSpec> {
        if self.eat("product:") {
            let a = self.spec()?;
            self.comma()?;
            let b = self.spec()?;
            return Ok(SpaceSpec::Product(Box::new(a), Box::new(b)));
        }
        if self.eat("delta-bar:") {
            let n = self.number()?;
            return if n >= 1 { Ok(SpaceSpec::DeltaBar(n)) } else { Err(self.err()) };
        }
        if self.eat("delta:") {
            return Ok(SpaceSpec::Delta(self.number()?));
        }
        if self.eat("sphere:") {
            let n = self.number()?;
            return if n >= 1 { Ok(SpaceSpec::Sphere(n)) } else { Err(self.err()) };
        }
        if self.eat("quotient:") {
            let n = self.number()?;
            self.comma()?;
            let r = self.number()?;
            return if r < n { Ok(SpaceSpec::Quotient(n, r)) } else { Err(self.err()) };
        }
        if self.eat("point") {
            return Ok(SpaceSpec::Point);
        }
        let len = self.rest().find(',').unwrap_or(self.rest().len());
        let path = &self.rest()[..len];
        if path.is_empty() || !(path.ends_with(".json") || std::path::Path::new(path).is_file()) {
            return Err(self.err());
        }
        self.pos += len;
        Ok(SpaceSpec::File(PathBuf::from(path)))
    }
}

impl FromStr for SpaceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<SpaceSpec> {
        let text = s.trim();
        let mut p = Parser { text, pos: 0, whole: s };
        let spec = p.spec()?;
        if p.pos != text.len() {
            return Err(p.err());
        }
        Ok(spec)
    }
}

pub fn load_json(path: &std::path::Path) -> Result<SimplicialSet> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let doc: SimplicialSetJson = serde_json::from_str(&text)?;
    let mut set = SimplicialSet::from_json(&doc)?;
    if doc.name.is_none() {
        set = set.with_name(path.display().to_string());
    }
    Ok(set)
}

impl SpaceSpec {
    /// The two factors of a product, or `(K, K)` for any other space.
    pub fn factors(&self) -> (SpaceSpec, SpaceSpec) {
        match self {
            SpaceSpec::Product(a, b) => ((**a).clone(), (**b).clone()),
            other => (other.clone(), other.clone()),
        }
    }

    pub fn is_product(&self) -> bool {
        matches!(self, SpaceSpec::Product(..))
    }

    /// Builds the simplicial set; products are materialized in full.
    pub fn build(&self) -> Result<Arc<SimplicialSet>> {
        self.build_bounded(None)
    }

    /// Builds the simplicial set; an outer product is cut at `bound` when given.
    pub fn build_bounded(&self, bound: Option<usize>) -> Result<Arc<SimplicialSet>> {
        let set = match self {
            SpaceSpec::Delta(n) => standard_simplex(*n),
            SpaceSpec::DeltaBar(n) => delta_bar(*n),
            SpaceSpec::Sphere(n) => sphere(*n),
            SpaceSpec::Quotient(n, r) => simplex_quotient(*n, *r)?,
            SpaceSpec::Point => point(),
            SpaceSpec::Product(..) => return Ok(self.product(bound)?.set().clone()),
            SpaceSpec::File(p) => load_json(p)?,
        };
        Ok(Arc::new(set))
    }

    /// `A×B` for a product spec, `K×K` otherwise.
    pub fn product(&self, bound: Option<usize>) -> Result<Product> {
        let (a, b) = self.factors();
        let (a, b) = (a.build()?, b.build()?);
        match bound {
            Some(n) => Product::with_bound(a, b, n),
            None => Product::new(a, b),
        }
    }

    /// The chain complex named by a homology spec, built through degree
    /// `top + 1` so that `H_0, …, H_top` are defined: a plain space gives
    /// `C(K)`, `cobar:<space>` gives `ΩC(K)`, `twisted-cobar:<space>` gives
    /// `ΩC(K) ⊗_t C(K)`.
    pub fn complex(spec: &str, top: usize) -> Result<ChainComplex> {
        let n = top + 1;
        if let Some(rest) = spec.strip_prefix("twisted-cobar:") {
            twisted_cobar_complex(&rest.parse::<SpaceSpec>()?.build_bounded(Some(n + 1))?, n)
        } else if let Some(rest) = spec.strip_prefix("cobar:") {
            cobar_complex(&rest.parse::<SpaceSpec>()?.build_bounded(Some(n + 1))?, n)
        } else {
            chains_complex(&spec.parse::<SpaceSpec>()?.build_bounded(Some(n))?, n)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["delta:3", "delta-bar:4", "sphere:2", "quotient:4,1", "point", "product:sphere:2,sphere:2",
            "product:quotient:3,1,product:delta:1,delta:2"]
        {
            assert_eq!(s.parse::<SpaceSpec>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "sphere:", "sphere:0", "quotient:2,2", "product:sphere:2", "sphere:2,", "torus", "delta:99"] {
            assert!(s.parse::<SpaceSpec>().is_err(), "{s}");
        }
    }

    #[test]
    fn builds_names() {
        let k = "product:sphere:2,sphere:2".parse::<SpaceSpec>().unwrap().build().unwrap();
        assert_eq!(k.name(), "product:sphere:2,sphere:2");
        assert_eq!(k.counts(), vec![1, 0, 3, 6, 6]);
    }
}
