use std::sync::Arc;

use cobar_kernel::cobar::{mul, Word};
use cobar_kernel::diagonal::*;
use cobar_kernel::report::Report;
use cobar_kernel::simplicial::{simplex_quotient, sphere, standard_simplex, Cell, Product, SimplicialSet};
use cobar_kernel::Lin;
use proptest::prelude::*;

fn assert_pass(r: Report) {
    assert!(r.passed(), "{}", r.summary_line());
    assert!(r.checked > 0, "{}", r.summary_line());
}

fn letter(c: Cell) -> Word<Cell> {
    Word::letter(c)
}

fn primitive(x: Cell) -> Lin<Bimonomial> {
    let mut out = Lin::zero();
    out.add_term((letter(x), Word::unit()), 1.into());
    out.add_term((Word::unit(), letter(x)), 1.into());
    out
}

#[test]
fn two_sphere_generator_is_primitive() {
    let k = Arc::new(sphere(2));
    let x = Cell::new(2, 0);
    assert_eq!(aw_cobar_diagonal(k.clone(), 6).unwrap().image(&x), primitive(x));
    assert_eq!(baues_generator(&k, x), primitive(x));
}

#[test]
fn three_sphere_generator_is_primitive() {
    let k = Arc::new(sphere(3));
    let x = Cell::new(3, 0);
    assert_eq!(aw_cobar_diagonal(k.clone(), 4).unwrap().image(&x), primitive(x));
    assert_eq!(baues_diagonal(&k, 4).unwrap().image(&x), primitive(x));
}

#[test]
fn degree_three_expansion_on_collapsed_simplex() {
    let k = simplex_quotient(3, 1).unwrap();
    let x = k.cells(3).next().unwrap();
    let top = cobar_kernel::simplicial::Simplex::nondegenerate(x);
    let face = |v: &[usize]| k.sub_simplex(&top, v).as_cell().unwrap();
    let mut expected = primitive(x);
    expected.add_term((letter(face(&[1, 2, 3])), letter(face(&[0, 1, 3]))), (-1).into());
    expected.add_term((letter(face(&[0, 1, 2])), letter(face(&[0, 2, 3]))), 1.into());
    assert_eq!(baues_generator(&k, x), expected);
    assert_eq!(aw_cobar_diagonal(Arc::new(k), 4).unwrap().image(&x), expected);
}

#[test]
fn sign_exponent_values() {
    assert_eq!(baues_sign_exponent(3, &[]), 0);
    assert_eq!(baues_sign_exponent(3, &[1, 2]), 0);
    assert_eq!(baues_sign_exponent(3, &[1]) % 2, 1);
    assert_eq!(baues_sign_exponent(3, &[2]) % 2, 0);
    assert_eq!(literal_baues_sign_exponent(3, &[1, 2]), 0);
    assert_eq!(literal_baues_sign_exponent(3, &[2]) % 2, 1);
}

#[test]
fn baues_right_factors_are_letters() {
    for k in [sphere(2), simplex_quotient(4, 1).unwrap(), simplex_quotient(5, 1).unwrap()] {
        assert!(baues_diagonal(&k, 6).unwrap().right_factors_are_letters());
    }
}

#[test]
fn aw_equals_baues_on_spheres() {
    assert_pass(verify_baues_equality(Arc::new(sphere(2)), 6).unwrap());
    assert_pass(verify_baues_equality(Arc::new(sphere(3)), 6).unwrap());
}

#[test]
fn aw_equals_baues_on_collapsed_simplices() {
    for n in 3..=5 {
        assert_pass(verify_baues_equality(Arc::new(simplex_quotient(n, 1).unwrap()), 6).unwrap());
    }
}

#[test]
fn aw_equals_baues_on_product_of_spheres() {
    let s2 = Arc::new(sphere(2));
    let p = Product::new(s2.clone(), s2).unwrap();
    assert_pass(verify_baues_equality(p.set().clone(), 5).unwrap());
}

#[test]
fn literal_sign_fails_from_dimension_four() {
    // The two exponents agree on spheres and give a valid diagonal on Δ[3]/sk1;
    // from Δ[4]/sk1 on, the literal one is neither a chain map nor coassociative.
    for k in [sphere(2), sphere(3)] {
        assert_pass(compare(&literal_baues_diagonal(&k, 6).unwrap(), &baues_diagonal(&k, 6).unwrap()));
    }
    let k = simplex_quotient(4, 1).unwrap();
    let literal = literal_baues_diagonal(&k, 4).unwrap();
    let chain = verify_chain_map(&k, &literal, 4).unwrap();
    let coassoc = verify_coassociativity(&k, &literal, 4).unwrap();
    assert!(!chain.passed() && !chain.witnesses.is_empty());
    assert!(!coassoc.passed() && !coassoc.witnesses.is_empty());
    let fixed = baues_diagonal(&k, 4).unwrap();
    assert_pass(verify_chain_map(&k, &fixed, 4).unwrap());
    assert_pass(verify_coassociativity(&k, &fixed, 4).unwrap());
}

#[test]
fn chain_map_and_coassociative() {
    let cases: Vec<(SimplicialSet, usize)> = vec![
        (sphere(2), 6),
        (sphere(3), 6),
        (simplex_quotient(3, 1).unwrap(), 6),
        (simplex_quotient(4, 1).unwrap(), 6),
        (simplex_quotient(5, 1).unwrap(), 4),
    ];
    for (k, bound) in cases {
        let psi = aw_cobar_diagonal(Arc::new(k.clone()), bound).unwrap();
        assert_pass(verify_chain_map(&k, &psi, bound).unwrap());
        assert_pass(verify_coassociativity(&k, &psi, bound).unwrap());
    }
}

#[test]
fn coassociative_on_product_of_spheres() {
    let s2 = Arc::new(sphere(2));
    let p = Product::new(s2.clone(), s2).unwrap();
    let k = p.set().as_ref().clone();
    let psi = aw_cobar_diagonal(p.set().clone(), 5).unwrap();
    assert_pass(verify_chain_map(&k, &psi, 5).unwrap());
    assert_pass(verify_coassociativity(&k, &psi, 5).unwrap());
}

#[test]
fn flipped_sign_breaks_coassociativity() {
    let k = simplex_quotient(4, 1).unwrap();
    let psi = aw_cobar_diagonal(Arc::new(k.clone()), 3).unwrap();
    for index in 0..psi.term_count() {
        let (bad, cell, _) = psi.with_flipped_sign(index);
        let chain = verify_chain_map(&k, &bad, 3).unwrap();
        let coassoc = verify_coassociativity(&k, &bad, 3).unwrap();
        assert!(!chain.passed() || !coassoc.passed(), "flip in {cell:?} undetected");
    }
}

#[test]
fn cocommutative_up_to_homotopy() {
    for (k, bound) in [(sphere(2), 6), (sphere(3), 6), (simplex_quotient(3, 1).unwrap(), 4)] {
        let d = AwDiagonal::new(Arc::new(k)).unwrap();
        for r in d.cocommutativity_homotopy().unwrap().check(bound) {
            assert!(r.passed(), "{}", r.summary_line());
        }
    }
}

#[test]
fn rejects_spaces_with_edges() {
    assert!(aw_cobar_diagonal(Arc::new(standard_simplex(2)), 4).is_err());
    assert!(baues_diagonal(&standard_simplex(2), 4).is_err());
}

#[test]
fn json_images() {
    let k = simplex_quotient(3, 1).unwrap();
    let psi = baues_diagonal(&k, 4).unwrap();
    let json = psi.to_json(&k);
    let text = serde_json::to_string(&json).unwrap();
    assert!(text.contains("coefficient"));
}

fn collapsed_four() -> (SimplicialSet, Vec<Cell>) {
    let k = simplex_quotient(4, 1).unwrap();
    let letters: Vec<Cell> = (2..=4).flat_map(|d| k.cells(d).collect::<Vec<_>>()).collect();
    (k, letters)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn aw_is_multiplicative(picks in proptest::collection::vec(0usize..16, 2..4)) {
        let (k, letters) = collapsed_four();
        let psi = aw_cobar_diagonal(Arc::new(k), 3).unwrap().algebra_map();
        let w: Vec<Cell> = picks.iter().map(|i| letters[i % letters.len()]).collect();
        let whole = psi.apply_word(&Word(w.clone()));
        let split = mul(&psi.apply_word(&Word(w[..1].to_vec())), &psi.apply_word(&Word(w[1..].to_vec())));
        prop_assert_eq!(whole, split);
    }
}
