//! The property registry behind `verify`, and the sign-mutation harness.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chains::{boundary, boundary_cell, SimplicialChains, TensorCoalgebra};
use crate::cobar::{
    canonical_cochain, cartesian_product, check_chain_algebra_map, check_square_zero, check_twisting_cochain,
    cochain_to_algebra_map, milgram_q, Cobar, DgAlgebra, TensorAlgebra, TwistedTensor,
};
use crate::dcsh::{check_fbar_closed_form, check_fbar_kappa, check_fbar_vanishing, CobarRetract};
use crate::diagonal::{
    baues_diagonal, compare, verify_baues_equality, verify_chain_map, verify_coassociativity, AwDiagonal,
    DiagonalResult, Method,
};
use crate::error::{Error, Result};
use crate::ezaw::{EzData, HomotopyTable};
use crate::homology::{homology_table, twisted_cobar_complex};
use crate::report::Report;
use crate::simplicial::{simplex_quotient, sphere, standard_simplex, Product, SimplicialSet};
use crate::spaces::SpaceSpec;

pub const PROPERTIES: [&str; 11] = [
    "d2",
    "sdr",
    "gm-sdr",
    "coassoc",
    "cocomm-homotopy",
    "baues-eq",
    "fbar-vanishing",
    "fbar-closed-form",
    "milgram",
    "twisting",
    "acyclic-cobar",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodChoice {
    Aw,
    Baues,
    Both,
}

impl MethodChoice {
    pub fn methods(self) -> Vec<Method> {
        match self {
            MethodChoice::Aw => vec![Method::Aw],
            MethodChoice::Baues => vec![Method::Baues],
            MethodChoice::Both => vec![Method::Aw, Method::Baues],
        }
    }
}

/// Parses `all` or a comma-separated list, rejecting unknown names.
pub fn parse_properties(list: &str) -> Result<Vec<&'static str>> {
    if list.trim() == "all" {
        return Ok(PROPERTIES.to_vec());
    }
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|p| PROPERTIES.iter().copied().find(|q| *q == p).ok_or_else(|| Error::UnknownProperty(p.into())))
        .collect::<Result<Vec<_>>>()
        .and_then(|v| if v.is_empty() { Err(Error::UnknownProperty(list.into())) } else { Ok(v) })
}

fn relabel(mut reports: Vec<Report>, property: &str, space: &str) -> Vec<Report> {
    for r in &mut reports {
        r.property = format!("{property}: {}", r.property);
        r.space = space.to_string();
    }
    reports
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub bound: usize,
    pub method: MethodChoice,
    /// Test mode: negate one seeded term of `ψ` before `coassoc` and `baues-eq`.
    pub mutate: Option<u64>,
}

impl Options {
    pub fn new(bound: usize) -> Options {
        Options {
            bound,
            method: MethodChoice::Aw,
            mutate: None,
        }
    }
}

/// Runs one registered property on `spec`.
pub fn verify(spec: &SpaceSpec, property: &str, options: &Options) -> Result<Vec<Report>> {
    let (bound, method) = (options.bound, options.method);
    let name = spec.to_string();
    let reports = match property {
        "d2" => d2(spec, bound)?,
        "sdr" => {
            let ez = EzData::new(Arc::new(spec.product(Some(bound + 1))?));
            let mut out = ez.check_sdr(bound);
            out.push(ez.check_closed_form(bound));
            out
        }
        "gm-sdr" => {
            let ez = EzData::new(Arc::new(spec.product(Some(bound + 2))?));
            CobarRetract::new(&ez, (bound + 1).min(4))?.check(bound)
        }
        "coassoc" => {
            let k = spec.build()?;
            let mut out = Vec::new();
            for m in method.methods() {
                let psi = mutated(diagonal(&k, m, bound)?, options.mutate);
                out.push(verify_chain_map(&k, &psi, bound)?);
                out.push(verify_coassociativity(&k, &psi, bound)?);
            }
            out
        }
        "cocomm-homotopy" => AwDiagonal::new(spec.build()?)?.cocommutativity_homotopy()?.check(bound),
        "baues-eq" => match options.mutate {
            None => vec![verify_baues_equality(spec.build()?, bound)?],
            Some(_) => {
                let k = spec.build()?;
                let aw = mutated(diagonal(&k, Method::Aw, bound)?, options.mutate);
                vec![compare(&aw, &baues_diagonal(&k, bound)?)]
            }
        },
        "fbar-vanishing" => vec![check_fbar_vanishing(&EzData::new(Arc::new(spec.product(Some(bound + 1))?)), bound)],
        "fbar-closed-form" => {
            let ez = EzData::new(Arc::new(spec.product(Some(bound + 1))?));
            vec![check_fbar_closed_form(&ez, bound), check_fbar_kappa(&ez, bound)?]
        }
        "milgram" => milgram(spec, bound)?,
        "twisting" => {
            let k = spec.build_bounded(Some(bound + 1))?;
            let c = SimplicialChains::new(k.clone());
            let om = Cobar::new(c.clone())?;
            let t = canonical_cochain();
            let twisting = check_twisting_cochain(&c, &om, &t, bound + 1);
            let tt = TwistedTensor::new(om, c, t);
            vec![twisting, tt.check_square_zero(bound)]
        }
        "acyclic-cobar" => {
            let k = spec.build_bounded(Some(bound + 2))?;
            let h = homology_table(&twisted_cobar_complex(&k, bound + 1)?, bound)?;
            let mut r = Report::new("H(ΩC ⊗_t C) = ℤ in degree 0", k.name(), bound);
            for g in &h {
                let ok = if g.degree == 0 { g.is_integers() } else { g.is_zero() };
                r.check(ok, || format!("H_{} = {}", g.degree, g.display()));
            }
            vec![r]
        }
        other => return Err(Error::UnknownProperty(other.into())),
    };
    Ok(relabel(reports, property, &name))
}

fn diagonal(k: &Arc<SimplicialSet>, method: Method, bound: usize) -> Result<DiagonalResult> {
    match method {
        Method::Aw => Ok(AwDiagonal::new(k.clone())?.result(bound)),
        Method::Baues => baues_diagonal(k, bound),
    }
}

fn mutated(psi: DiagonalResult, seed: Option<u64>) -> DiagonalResult {
    match seed {
        Some(seed) if psi.term_count() > 0 => {
            let index = ChaCha8Rng::seed_from_u64(seed).gen_range(0..psi.term_count());
            psi.with_flipped_sign(index).0
        }
        _ => psi,
    }
}

fn d2(spec: &SpaceSpec, bound: usize) -> Result<Vec<Report>> {
    let k = spec.build_bounded(Some(bound + 1))?;
    let mut chains = Report::new("d² = 0 on C", k.name(), bound);
    for n in 0..=bound.min(k.top_dimension()) {
        for z in k.cells(n) {
            let dd = boundary(&k, &boundary_cell(&k, z));
            chains.check(dd.is_zero(), || format!("d²({}) = {dd:?}", k.label(z)));
        }
    }
    let mut out = vec![chains];
    if k.is_reduced(1) {
        out.push(check_square_zero(&Cobar::new(SimplicialChains::new(k))?, bound));
    }
    Ok(out)
}

fn milgram(spec: &SpaceSpec, bound: usize) -> Result<Vec<Report>> {
    let (a, b) = spec.factors();
    let (a, b) = (
        SimplicialChains::new(a.build_bounded(Some(bound + 1))?),
        SimplicialChains::new(b.build_bounded(Some(bound + 1))?),
    );
    let c = TensorCoalgebra::new(a.clone(), b.clone());
    let source = Cobar::new(c.clone())?;
    let target = TensorAlgebra::new(Cobar::new(a)?, Cobar::new(b)?);
    let q = milgram_q();
    let chain = check_chain_algebra_map(&source, &target, &q, bound);
    let t = cartesian_product(&canonical_cochain(), &canonical_cochain());
    let theta = cochain_to_algebra_map(&c, &target, &t, bound + 1)?;
    let mut equal = Report::new("q = algebra map of t∗t", source.name(), bound);
    for n in 1..=bound + 1 {
        for g in crate::chains::Coalgebra::basis(&c, n) {
            let (x, y) = (theta.on_generator(&g), q.on_generator(&g));
            equal.check(x == y, || format!("{g:?}: {x:?} vs {y:?}"));
        }
    }
    Ok(vec![chain, equal])
}

/// One seeded sign flip and the checks that caught it.
#[derive(Clone, Debug, Serialize)]
pub struct Mutation {
    pub target: String,
    pub space: String,
    pub location: String,
    pub detected_by: Option<String>,
    pub witness: Option<String>,
}

impl Mutation {
    pub fn detected(&self) -> bool {
        self.detected_by.is_some()
    }
}

/// Records every failing check; the witness is the first one's.
fn record_failures(mutation: &mut Mutation, reports: impl IntoIterator<Item = Report>) {
    let failed: Vec<Report> = reports.into_iter().filter(|r| !r.passed()).collect();
    if let Some(first) = failed.first() {
        mutation.detected_by = Some(failed.iter().map(|r| r.property.as_str()).collect::<Vec<_>>().join(", "));
        mutation.witness = first.witnesses.first().cloned();
    }
}

struct PsiTarget {
    space: Arc<SimplicialSet>,
    aw: DiagonalResult,
    baues: DiagonalResult,
}

const PSI_BOUND: usize = 6;
const PHI_DEGREE: usize = 6;

/// `count` seeded single-sign flips, each in a stored term of `ψ_K` (on `S²`,
/// `S³`, `Δ[4]/sk1`) or of the homotopy table `φ` (on `Δ1×Δ1`, `Δ1×Δ2`,
/// `S²×S²`). A `ψ` flip is run through the chain-map, coassociativity and
/// `ψ_K = ψ̃` checks; a `φ` flip through the retract identities and the
/// closed form.
pub fn mutation_harness(seed: u64, count: usize) -> Result<Vec<Mutation>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut psi_targets = Vec::new();
    for k in [sphere(2), sphere(3), simplex_quotient(4, 1)?] {
        let k = Arc::new(k);
        psi_targets.push(PsiTarget {
            aw: AwDiagonal::new(k.clone())?.result(PSI_BOUND),
            baues: baues_diagonal(&k, PSI_BOUND)?,
            space: k,
        });
    }
    let phi_products: Vec<Arc<Product>> = [
        (standard_simplex(1), standard_simplex(1)),
        (standard_simplex(1), standard_simplex(2)),
        (sphere(2), sphere(2)),
    ]
    .into_iter()
    .map(|(a, b)| Product::with_bound(Arc::new(a), Arc::new(b), PHI_DEGREE + 1).map(Arc::new))
    .collect::<Result<_>>()?;
    let table = HomotopyTable::recursive(PHI_DEGREE);
    let mut out = Vec::new();
    for _ in 0..count {
        if rng.gen_bool(0.5) {
            let t = &psi_targets[rng.gen_range(0..psi_targets.len())];
            let index = rng.gen_range(0..t.aw.term_count());
            let (flipped, cell, term) = t.aw.with_flipped_sign(index);
            let mut m = Mutation {
                target: "ψ".into(),
                space: t.space.name().into(),
                location: format!("generator {} term {term:?}", t.space.label(cell)),
                detected_by: None,
                witness: None,
            };
            record_failures(
                &mut m,
                [
                    verify_chain_map(&t.space, &flipped, PSI_BOUND)?,
                    verify_coassociativity(&t.space, &flipped, PSI_BOUND)?,
                    compare(&flipped, &t.baues),
                ],
            );
            out.push(m);
        } else {
            let p = &phi_products[rng.gen_range(0..phi_products.len())];
            let n = rng.gen_range(1..=PHI_DEGREE);
            let term = rng.gen_range(0..table.term_count(n));
            let ez = EzData::with_table(p.clone(), Arc::new(table.with_flipped_sign(n, term)));
            let mut m = Mutation {
                target: "φ".into(),
                space: p.set().name().into(),
                location: format!("degree {n} term {term}"),
                detected_by: None,
                witness: None,
            };
            let mut reports = ez.check_sdr(PHI_DEGREE);
            reports.push(ez.check_closed_form(PHI_DEGREE));
            record_failures(&mut m, reports);
            out.push(m);
        }
    }
    Ok(out)
}

/// One report per mutation; a mutation passes when some check caught it,
/// and the catching check's witness is kept either way.
pub fn mutation_reports(seed: u64, count: usize) -> Result<Vec<Report>> {
    Ok(mutation_harness(seed, count)?
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            let bound = if m.target == "ψ" { PSI_BOUND } else { PHI_DEGREE };
            let mut r = Report::new(format!("mutation {i}: {} flip at {}", m.target, m.location), &m.space, bound);
            r.checked = 1;
            match (&m.detected_by, &m.witness) {
                (Some(by), w) => r.witnesses.push(format!("caught by {by}: {}", w.as_deref().unwrap_or("-"))),
                (None, _) => r.fail("survived every check".into()),
            }
            r
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn property_lists() {
        assert_eq!(parse_properties("all").unwrap().len(), PROPERTIES.len());
        assert_eq!(parse_properties("d2, sdr").unwrap(), vec!["d2", "sdr"]);
        assert!(matches!(parse_properties("d2,bogus"), Err(Error::UnknownProperty(p)) if p == "bogus"));
        assert!(parse_properties("").is_err());
    }
}
