use std::sync::Arc;

use cobar_kernel::chains::{SimplicialChains, Tensor, Wedge};
use cobar_kernel::cobar::Word;
use cobar_kernel::dcsh::*;
use cobar_kernel::ezaw::EzData;
use cobar_kernel::report::Report;
use cobar_kernel::simplicial::{diagonal_map, simplex_quotient, sphere, standard_simplex, Product, SimplicialSet};
use cobar_kernel::Lin;

fn ez(k: SimplicialSet, l: SimplicialSet, bound: usize) -> EzData {
    let p = Product::with_bound(Arc::new(k), Arc::new(l), bound).unwrap();
    EzData::new(Arc::new(p))
}

fn assert_all(reports: impl IntoIterator<Item = Report>) {
    for r in reports {
        assert!(r.passed(), "{}", r.summary_line());
        assert!(r.checked > 0, "{}", r.summary_line());
    }
}

/// The family `F∘Δ` of `K`, whose `Ind` followed by `q` is `ψ_K`.
fn diagonal_family(k: &Arc<SimplicialSet>) -> (DcshMorphism<SimplicialChains, TensorChains>, EzData) {
    let p = Arc::new(Product::with_bound(k.clone(), k.clone(), k.top_dimension() + 1).unwrap());
    let data = EzData::new(p.clone());
    let f = gm_family(&data, 3).unwrap();
    let delta = simplicial_family("Δ", &diagonal_map(&p).unwrap());
    (compose(&f, &delta), data)
}

#[test]
fn first_components() {
    let data = ez(sphere(2), sphere(2), 5);
    let f = gm_family(&data, 3).unwrap();
    let fbar = fbar_family(&data);
    for z in data.product_cells(4) {
        let aw = data.aw_cell(z).map_basis(|p| Tensor(vec![*p]));
        assert_eq!(f.component(1, &z), aw);
        let (x, y) = data.product().components(z);
        if let (Some(x), Some(y), true) = (x.as_cell(), y.as_cell(), z.dim > 0) {
            // F̄_1(x,y) = x + y, with the basepoint acting as the unit.
            let mut expected = Lin::zero();
            if y.dim == 0 {
                expected.add_term(Tensor(vec![Wedge::Left(x)]), 1.into());
            }
            if x.dim == 0 {
                expected.add_term(Tensor(vec![Wedge::Right(y)]), 1.into());
            }
            if x.dim > 0 && y.dim > 0 {
                continue;
            }
            assert_eq!(fbar.component(1, &z), expected, "{z:?}");
        }
    }
}

#[test]
fn second_component_is_the_signed_split() {
    let data = ez(sphere(2), sphere(2), 5);
    let f = gm_family(&data, 3).unwrap();
    let chains = data.total_chains();
    for z in data.product_cells(4) {
        let mut expected = Lin::zero();
        for (w, cw) in &data.phi_cell(z) {
            for ((u, v), c) in &cobar_kernel::chains::Coalgebra::reduced_coproduct(&chains, w) {
                let a = f.component(1, u);
                let b = f.component(1, v);
                expected.add_scaled(&cobar_kernel::chains::concat(&a, &b), &(cw * c * split_sign(1, 1, u.dim as usize)));
            }
        }
        assert_eq!(f.component(2, &z), expected);
    }
    assert_eq!(split_sign(1, 1, 0), (-1).into());
}

#[test]
fn retract_on_two_spheres() {
    let data = ez(sphere(2), sphere(2), 5);
    let r = CobarRetract::new(&data, 4).unwrap();
    assert_all(r.check(5));
}

#[test]
fn retract_on_collapsed_simplices() {
    let k = simplex_quotient(3, 1).unwrap();
    let data = ez(k.clone(), k, 6);
    let r = CobarRetract::new(&data, 4).unwrap();
    assert_all(r.check(3));
}

#[test]
fn fbar_closed_form_on_spheres() {
    assert_all([check_fbar_closed_form(&ez(sphere(2), sphere(2), 5), 4)]);
    assert_all([check_fbar_closed_form(&ez(sphere(3), sphere(3), 7), 6)]);
}

#[test]
fn fbar_closed_form_on_collapsed_simplices() {
    let k = simplex_quotient(3, 1).unwrap();
    assert_all([check_fbar_closed_form(&ez(k.clone(), k, 6), 6)]);
}

#[test]
fn fbar_vanishing() {
    assert_all([check_fbar_vanishing(&ez(sphere(2), sphere(2), 5), 4)]);
    assert_all([check_fbar_vanishing(&ez(sphere(3), sphere(3), 7), 6)]);
}

#[test]
fn fbar_is_kappa_of_f() {
    assert_all([check_fbar_kappa(&ez(sphere(2), sphere(2), 5), 4).unwrap()]);
    assert_all([check_fbar_kappa(&ez(standard_simplex(2), standard_simplex(2), 5), 4).unwrap()]);
}

#[test]
fn closed_form_beyond_the_factor_count_is_zero() {
    let data = ez(sphere(3), sphere(3), 7);
    for z in data.product_cells(6) {
        assert!(fbar_closed(&data, z, z.dim as usize + 1).is_zero());
    }
}

#[test]
fn gamma_factorizations() {
    let data = ez(sphere(2), sphere(2), 5);
    let r = CobarRetract::new(&data, 4).unwrap();
    assert_all(check_gamma_factorization(&r, 5));
}

#[test]
fn gamma_is_multiplicative_on_mixed_words() {
    let g = gamma();
    let (x, y) = (cobar_kernel::simplicial::Cell::new(2, 0), cobar_kernel::simplicial::Cell::new(3, 0));
    let w = Word(vec![Wedge::Left(x), Wedge::Right(y)]);
    assert_eq!(g.apply_word(&w), Lin::basis((Word::letter(x), Word::letter(y))));
}

#[test]
fn functoriality_on_two_sphere_families() {
    let k = Arc::new(sphere(2));
    let (psi, _) = diagonal_family(&k);
    let id = identity_family(&SimplicialChains::new(k.clone()));
    assert_all([check_functoriality(&wedge(&psi, &id), &psi, 5).unwrap()]);
    assert_all([check_functoriality(&wedge(&id, &psi), &psi, 5).unwrap()]);
    assert_all([check_functoriality(&psi, &id, 5).unwrap()]);
}

#[test]
fn functoriality_on_three_sphere_families() {
    let k = Arc::new(sphere(3));
    let (psi, _) = diagonal_family(&k);
    let id = identity_family(&SimplicialChains::new(k.clone()));
    assert_all([check_functoriality(&wedge(&psi, &id), &psi, 5).unwrap()]);
    assert_all([check_functoriality(&wedge(&psi, &psi), &psi, 5).unwrap()]);
}

#[test]
fn functoriality_with_higher_components() {
    // On Δ[4]/sk1 the diagonal family has nonzero F_2 and F_3, so the
    // composition signs are exercised.
    let k = Arc::new(simplex_quotient(4, 1).unwrap());
    let (psi, _) = diagonal_family(&k);
    let id = identity_family(&SimplicialChains::new(k.clone()));
    assert!(!psi.component(3, &k.cells(4).next().unwrap()).is_zero());
    assert_all([check_functoriality(&wedge(&psi, &id), &psi, 3).unwrap()]);
    assert_all([check_functoriality(&wedge(&id, &psi), &psi, 3).unwrap()]);
}

#[test]
fn wedge_law_on_two_sphere_families() {
    let k = Arc::new(sphere(2));
    let (psi, _) = diagonal_family(&k);
    let id = identity_family(&SimplicialChains::new(k.clone()));
    assert_all([check_wedge_law(&psi, &psi, 5).unwrap()]);
    assert_all([check_wedge_law(&psi, &id, 5).unwrap()]);
    assert_all([check_wedge_law(&id, &id, 5).unwrap()]);
}

#[test]
fn wedge_with_identity_is_factorwise() {
    let k = Arc::new(sphere(2));
    let c = SimplicialChains::new(k.clone());
    let id = identity_family(&c);
    let w = wedge(&id, &id);
    let top = cobar_kernel::simplicial::Cell::new(2, 0);
    let base = cobar_kernel::simplicial::Cell::new(0, 0);
    assert_eq!(w.component(1, &(top, base)), Lin::basis(Tensor(vec![(top, base)])));
    assert!(w.component(2, &(top, top)).is_zero());
}

#[test]
fn identity_composition_is_neutral() {
    let k = Arc::new(sphere(3));
    let (psi, _) = diagonal_family(&k);
    let id = identity_family(&SimplicialChains::new(k.clone()));
    let psi_id = compose(&psi, &id);
    for d in 2..=3 {
        for c in k.cells(d) {
            for n in 1..=3 {
                assert_eq!(psi_id.component(n, &c), psi.component(n, &c));
            }
        }
    }
}

#[test]
fn families_serialize_by_arity() {
    let data = ez(sphere(2), sphere(2), 5);
    let f = gm_family(&data, 3).unwrap();
    let cells = data.product_cells(4);
    let json = family_to_json(&f.family, &cells, 2, |c| format!("{c:?}").into(), |p| format!("{p:?}").into());
    let obj = json.as_object().unwrap();
    assert!(obj.contains_key("1") && obj.contains_key("2"));
    assert!(obj["1"].as_array().unwrap().iter().all(|row| row.get("source").is_some() && row.get("image").is_some()));
}
