use std::sync::Arc;

use cobar_kernel::ezaw::{check_naturality, EzData, HomotopyTable};
use cobar_kernel::simplicial::{sphere, standard_simplex, Product, SimplicialMap, skeletal_quotient_map};

fn ez(k: cobar_kernel::simplicial::SimplicialSet, l: cobar_kernel::simplicial::SimplicialSet, bound: usize) -> EzData {
    let p = Product::with_bound(Arc::new(k), Arc::new(l), bound + 1).unwrap();
    EzData::new(Arc::new(p))
}

fn assert_sdr(data: &EzData, bound: usize) {
    for r in data.check_sdr(bound) {
        assert!(r.passed(), "{}", r.summary_line());
        assert!(r.checked > 0);
    }
    let c = data.check_closed_form(bound);
    assert!(c.passed(), "{}", c.summary_line());
}

#[test]
fn sdr_on_interval_squared() {
    assert_sdr(&ez(standard_simplex(1), standard_simplex(1), 6), 6);
}

#[test]
fn sdr_on_interval_times_triangle() {
    assert_sdr(&ez(standard_simplex(1), standard_simplex(2), 6), 6);
}

#[test]
fn sdr_on_two_spheres() {
    assert_sdr(&ez(sphere(2), sphere(2), 6), 6);
}

#[test]
fn shuffle_is_a_coalgebra_map() {
    let data = ez(standard_simplex(2), standard_simplex(1), 3);
    let r = data.check_nabla_coalgebra_map(3);
    assert!(r.passed(), "{}", r.summary_line());
}

#[test]
fn natural_under_collapse() {
    let d2 = Arc::new(standard_simplex(2));
    let q = skeletal_quotient_map(&d2, 1).unwrap();
    let id = SimplicialMap::identity(Arc::new(standard_simplex(1)));
    let source = ez(standard_simplex(2), standard_simplex(1), 4);
    let target = EzData::new(Arc::new(
        Product::with_bound(q.target().clone(), id.target().clone(), 5).unwrap(),
    ));
    let r = check_naturality(&source, &target, &q, &id, 4);
    assert!(r.passed(), "{}", r.summary_line());
}

#[test]
fn flipped_term_is_detected() {
    let base = ez(sphere(2), sphere(2), 4);
    let t = HomotopyTable::recursive(5).with_flipped_sign(3, 2);
    let data = EzData::with_table(base.product().clone(), Arc::new(t));
    assert!(!data.check_closed_form(4).passed());
}

mod adjust {
    use super::*;
    use cobar_kernel::chains::ChainMap;
    use cobar_kernel::ezaw::{check_sdr_conditions, sdr_adjust, sdr_adjust_literal, tabulate};
    use cobar_kernel::Lin;

    fn perturbed() -> cobar_kernel::ezaw::Tabulated {
        let data = ez(standard_simplex(1), standard_simplex(1), 2);
        let (mut sdr, dx, dy) = tabulate(&data, 2);
        // φ' = φ + dλ − λd with λ sending every vertex to one square; this keeps
        // the homotopy equation and breaks the side conditions.
        let square = dy.images.keys().find(|c| c.dim == 2).copied().unwrap();
        let lambda = ChainMap::from_fn(2, dy.images.keys().copied().collect::<Vec<_>>(), |c| {
            if c.dim == 0 { Lin::basis(square) } else { Lin::zero() }
        });
        let extra_a = lambda.then(&dy);
        let extra_b = dy.then(&lambda);
        sdr.phi = ChainMap::from_fn(1, dy.images.keys().copied().collect::<Vec<_>>(), |c| {
            let b = Lin::basis(*c);
            sdr.phi.apply(&b) + extra_a.apply(&b) - extra_b.apply(&b)
        });
        (sdr, dx, dy)
    }

    #[test]
    fn perturbation_breaks_side_conditions() {
        let (sdr, dx, dy) = perturbed();
        let failures = check_sdr_conditions(&sdr, &dx, &dy);
        assert!(!failures.is_empty());
        assert!(failures.iter().all(|f| !f.contains("dφ + φd")), "{failures:?}");
    }

    #[test]
    fn adjusted_homotopy_is_a_retract() {
        let (mut sdr, dx, dy) = perturbed();
        sdr.phi = sdr_adjust(&sdr.phi, &sdr.nabla, &sdr.f, &dy).unwrap();
        let failures = check_sdr_conditions(&sdr, &dx, &dy);
        assert!(failures.is_empty(), "{failures:?}");
    }

    #[test]
    fn literal_formula_has_the_wrong_sign() {
        let (mut sdr, dx, dy) = perturbed();
        sdr.phi = sdr_adjust_literal(&sdr.phi, &sdr.nabla, &sdr.f, &dy);
        let failures = check_sdr_conditions(&sdr, &dx, &dy);
        assert!(failures.iter().any(|f| f.contains("dφ + φd")), "{failures:?}");
        let negated = ChainMap::from_fn(1, dy.images.keys().copied().collect::<Vec<_>>(), |c| {
            -sdr.phi.apply(&Lin::basis(*c))
        });
        sdr.phi = negated;
        assert!(check_sdr_conditions(&sdr, &dx, &dy).is_empty());
    }

    #[test]
    fn rejects_non_homotopies() {
        let (mut sdr, _dx, dy) = perturbed();
        sdr.phi = ChainMap::from_fn(1, dy.images.keys().copied().collect::<Vec<_>>(), |_| Lin::zero());
        assert!(sdr_adjust(&sdr.phi, &sdr.nabla, &sdr.f, &dy).is_err());
    }
}
