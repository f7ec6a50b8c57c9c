use std::sync::Arc;

use cobar_kernel::chains::SimplicialChains;
use cobar_kernel::cobar::{Cobar, DgAlgebra};
use cobar_kernel::homology::*;
use cobar_kernel::simplicial::{simplex_quotient, sphere, standard_simplex};
use cobar_kernel::Coeff;
use num_integer::Integer;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn det(m: &[Vec<i64>]) -> i64 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det(&minor)
        })
        .sum()
}

fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = choose(n - 1, k);
    for mut c in choose(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// `d_1⋯d_i` as the gcd of all `i×i` minors.
fn determinantal_divisors(m: &[Vec<i64>]) -> Vec<i64> {
    let (r, c) = (m.len(), m.first().map_or(0, Vec::len));
    let mut out = Vec::new();
    for i in 1..=r.min(c) {
        let mut g = 0i64;
        for rows in choose(r, i) {
            for cols in choose(c, i) {
                let sub: Vec<Vec<i64>> = rows.iter().map(|&a| cols.iter().map(|&b| m[a][b]).collect()).collect();
                g = g.gcd(&det(&sub));
            }
        }
        out.push(g);
    }
    out
}

fn to_i64(m: &IntegerMatrix) -> Vec<Vec<i64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| i64::try_from(m.get(i, j)).unwrap()).collect())
        .collect()
}

#[test]
fn snf_example_against_determinantal_divisors() {
    let rows = vec![vec![2, 4], vec![6, 8]];
    let s = smith_normal_form(&IntegerMatrix::from_rows(rows.clone()));
    assert_eq!(s.invariant_factors(), vec![Coeff::from(2), Coeff::from(4)]);
    assert_eq!(determinantal_divisors(&rows), vec![2, 8]);
}

#[test]
fn snf_trivial_cases() {
    let z = IntegerMatrix::zeros(3, 2);
    let s = smith_normal_form(&z);
    assert!(s.d.is_zero() && s.certifies(&z));
    let id = IntegerMatrix::identity(4);
    let s = smith_normal_form(&id);
    assert_eq!(s.d, id);
}

proptest! {
    #[test]
    fn snf_is_certified(rows in 1usize..4, cols in 1usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let entries: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rand::Rng::gen_range(&mut rng, -6..=6)).collect())
            .collect();
        let m = IntegerMatrix::from_rows(entries.clone());
        let s = smith_normal_form(&m);
        prop_assert!(s.certifies(&m));
        prop_assert_eq!(det(&to_i64(&s.u)).abs(), 1);
        prop_assert_eq!(det(&to_i64(&s.v)).abs(), 1);
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert!(s.d.get(i, j) == &Coeff::from(0));
                }
            }
        }
        let factors = s.invariant_factors();
        for w in factors.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        let divisors = determinantal_divisors(&entries);
        let mut product = Coeff::from(1);
        for (i, d) in divisors.iter().enumerate() {
            if *d == 0 {
                prop_assert!(factors.len() <= i);
                break;
            }
            product *= &factors[i];
            prop_assert_eq!(product.clone(), Coeff::from(*d));
        }
    }
}

fn show(groups: &[HomologyGroup]) -> Vec<String> {
    groups.iter().map(HomologyGroup::display).collect()
}

#[test]
fn spheres_and_simplices() {
    let s2 = chains_complex(&Arc::new(sphere(2)), 3).unwrap();
    assert_eq!(show(&homology_table(&s2, 2).unwrap()), ["ℤ", "0", "ℤ"]);
    let s3 = chains_complex(&Arc::new(sphere(3)), 4).unwrap();
    assert_eq!(show(&homology_table(&s3, 3).unwrap()), ["ℤ", "0", "0", "ℤ"]);
    let d3 = chains_complex(&Arc::new(standard_simplex(3)), 4).unwrap();
    assert_eq!(show(&homology_table(&d3, 3).unwrap()), ["ℤ", "0", "0", "0"]);
}

#[test]
fn torsion_is_reported() {
    let m = IntegerMatrix::from_rows(vec![vec![2]]);
    let c = ChainComplex::new(vec![1, 1], vec![IntegerMatrix::zeros(0, 1), m]).unwrap();
    let h = c.homology(0).unwrap();
    assert_eq!((h.betti, h.torsion.clone()), (0, vec!["2".to_string()]));
    assert_eq!(h.display(), "ℤ/2");
}

#[test]
fn inconsistent_complexes_are_rejected() {
    let d1 = IntegerMatrix::from_rows(vec![vec![1]]);
    let d2 = IntegerMatrix::from_rows(vec![vec![1]]);
    assert!(ChainComplex::new(vec![1, 1, 1], vec![IntegerMatrix::zeros(0, 1), d1, d2]).is_err());
    let wrong_shape = IntegerMatrix::zeros(2, 1);
    assert!(ChainComplex::new(vec![1, 1], vec![IntegerMatrix::zeros(0, 1), wrong_shape]).is_err());
}

#[test]
fn loop_space_of_the_two_sphere() {
    let c = cobar_complex(&Arc::new(sphere(2)), 5).unwrap();
    let h = homology_table(&c, 4).unwrap();
    assert!(h.iter().all(HomologyGroup::is_integers), "{:?}", show(&h));
}

#[test]
fn loop_space_of_the_three_sphere() {
    let c = cobar_complex(&Arc::new(sphere(3)), 7).unwrap();
    assert_eq!(show(&homology_table(&c, 6).unwrap()), ["ℤ", "0", "ℤ", "0", "ℤ", "0", "ℤ"]);
}

#[test]
fn acyclic_twisted_cobar() {
    for k in [sphere(2), sphere(3), simplex_quotient(3, 1).unwrap()] {
        let c = twisted_cobar_complex(&Arc::new(k), 5).unwrap();
        let h = homology_table(&c, 4).unwrap();
        assert!(h[0].is_integers(), "{:?}", show(&h));
        assert!(h[1..].iter().all(HomologyGroup::is_zero), "{:?}", show(&h));
    }
}

#[test]
fn homology_ignores_basis_order() {
    let k = Arc::new(simplex_quotient(3, 1).unwrap());
    let om = Cobar::new(SimplicialChains::new(k.clone())).unwrap();
    let mut bases: Vec<_> = (0..=4).map(|n| om.basis(n)).collect();
    let plain = ChainComplex::from_bases(&bases, |w| om.differential(w)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for b in &mut bases {
        b.shuffle(&mut rng);
    }
    let shuffled = ChainComplex::from_bases(&bases, |w| om.differential(w)).unwrap();
    for n in 0..4 {
        assert_eq!(plain.homology(n).unwrap(), shuffled.homology(n).unwrap());
    }
}
