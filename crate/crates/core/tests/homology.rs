use num_bigint::BigInt;

use assemblers::fixtures::{self, FiniteGroup};
use assemblers::nerve::{diagonal_level_space, homology, truncated_nerve, SparseMatrix};
use assemblers::wcat::{build_w, pi0_wcat};
use assemblers::{AbelianGroup, Budget};

#[test]
fn sparse_invariant_factors() {
    let b = Budget::default();
    // diag(2, 6) with a zero row.
    let mut m = SparseMatrix::new(3, 2);
    m.add(0, 0, 2);
    m.add(1, 1, 6);
    let (rank, torsion) = m.invariant_factors(&b).unwrap();
    assert_eq!(rank, 2);
    assert_eq!(torsion, vec![BigInt::from(2), BigInt::from(6)]);

    let mut u = SparseMatrix::new(2, 2);
    u.add(0, 0, 1);
    u.add(0, 1, 1);
    u.add(1, 0, 1);
    u.add(1, 1, -1);
    let (rank, torsion) = u.invariant_factors(&b).unwrap();
    assert_eq!((rank, torsion), (2, vec![BigInt::from(2)]));
}

#[test]
fn nerve_counts_and_components() {
    let b = Budget::default();
    let s1 = fixtures::sphere_group(&FiniteGroup::trivial()).unwrap();
    let w = build_w(&s1, 2, &b).unwrap();
    let n = truncated_nerve(&w, 2, &b).unwrap();
    assert_eq!(n.counts(), vec![3, 4, 6]);
    assert!(n.identity_failures().is_empty());
    assert!(n.chain_complex().is_complex());
    assert_eq!(homology(&n, 0, &b).unwrap(), AbelianGroup::free(pi0_wcat(&w, &b).unwrap().count()));
    assert!(homology(&n, 2, &b).is_err());
}

#[test]
fn level_one_h1_matches_k0_on_small_spheres() {
    let b = Budget::default();
    for g in [FiniteGroup::trivial(), FiniteGroup::cyclic(2)] {
        let asm = fixtures::sphere_group(&g).unwrap();
        let x = diagonal_level_space(&asm, 1, 2, 2, &b).unwrap();
        assert!(x.identity_failures().is_empty());
        let cc = x.chain_complex();
        assert_eq!(cc.homology(0, &b).unwrap(), AbelianGroup::free(1));
        assert_eq!(cc.homology(1, &b).unwrap(), AbelianGroup::free(1));
    }
    let t = diagonal_level_space(&fixtures::trivial(), 1, 2, 2, &b).unwrap();
    assert!(t.chain_complex().homology(1, &b).unwrap().is_trivial());
    assert!(diagonal_level_space(&fixtures::trivial(), 2, 2, 2, &b).is_err());
}

#[test]
fn budget_stops_large_spaces() {
    let asm = fixtures::sphere_group(&FiniteGroup::symmetric3()).unwrap();
    let tight = Budget::new(1_000);
    assert!(matches!(
        diagonal_level_space(&asm, 1, 3, 3, &tight),
        Err(assemblers::Error::BudgetExhausted { .. })
    ));
}
