mod common;

use common::*;
use cotwist_core::AbGroup;

#[test]
fn dense_dims_of_known_algebras() {
    let free = cotwist_core::Presentation::with_degree_one(1, &["x", "y"], &[]).unwrap();
    assert_eq!(dense_quotient_dims(&free, 4), [1, 2, 4, 8, 16]);
    let comm =
        cotwist_core::Presentation::with_degree_one(1, &["x", "y", "z"], &["x*y - y*x", "x*z - z*x", "y*z - z*y"])
            .unwrap();
    assert_eq!(dense_quotient_dims(&comm, 4), [1, 3, 6, 10, 15]);
}

#[test]
fn schur_brute_on_small_groups() {
    assert_eq!(schur_order_brute(&AbGroup::new(vec![2, 2]).unwrap()), 2);
    assert_eq!(schur_order_brute(&AbGroup::new(vec![4]).unwrap()), 1);
    assert_eq!(schur_order_brute(&AbGroup::new(vec![3, 3]).unwrap()), 3);
    assert_eq!(schur_order_brute(&AbGroup::new(vec![2, 4]).unwrap()), 2);
    assert_eq!(abelian_groups_up_to(9).len(), 13);
}

#[test]
fn rho_search_finds_klein_obstruction() {
    let g = AbGroup::klein();
    let mt = mult_table(&g);
    // (-1)^(ps) as exponents of i
    let klein: Vec<u32> = g
        .elements()
        .iter()
        .flat_map(|a| {
            g.elements()
                .into_iter()
                .map(move |b| if a.0[0] * b.0[1] % 2 == 1 { 2 } else { 0 })
        })
        .collect();
    assert!(rho_search(&mt, &klein, 4).is_none());
    assert!(rho_search(&mt, &[0; 16], 4).is_some());
}
