mod common;

use assemblers::fixtures::{self, IntervalVariant, Piece};
use assemblers::kzero::{k0, k0_full, localization_check, scissors_congruent};
use assemblers::ops::{is_sieve, quotient};
use assemblers::{Budget, Error};

#[test]
fn reduced_relations_match_all_families() {
    let b = common::budget();
    for (name, asm) in common::small_fixtures() {
        let (r, f) = (k0(&asm, &b).unwrap(), k0_full(&asm, &b).unwrap());
        assert_eq!(r.invariants(), f.invariants(), "{name}");
        for o in asm.noninitial_objects() {
            assert_eq!(r.class_of(o).unwrap(), f.class_of(o).unwrap(), "{name}: {}", asm.object_name(o));
        }
    }
}

#[test]
fn unit_intervals_are_scissors_congruent() {
    let b = Budget::default();
    let fx = fixtures::intervals(2, 3, IntervalVariant::Classical, false).unwrap();
    let closed = |lo, hi| fx.object(Piece { lo, hi, lo_closed: true, hi_closed: true }).unwrap();
    // [0,1] and [2,3] are translates; [0,2] is not a translate of [0,1].
    let w = scissors_congruent(&fx.asm, closed(0, 2), closed(4, 6), 2, &b).unwrap().expect("translates");
    assert!(w.verify(&fx.asm, &b).unwrap());
    let k = k0(&fx.asm, &b).unwrap();
    assert_ne!(k.class_of(closed(0, 2)).unwrap(), k.class_of(closed(0, 4)).unwrap());
}

#[test]
fn localization_needs_a_sieve() {
    let b = Budget::default();
    let (pre, _) = fixtures::preorder5().unwrap();
    let not_sieve = vec![pre.initial(), pre.object_id("B").unwrap()];
    assert!(!is_sieve(&pre, &not_sieve).is_valid());
    assert!(matches!(localization_check(&pre, &not_sieve, &b), Err(Error::Hypothesis(_))));
}

#[test]
fn quotient_drops_the_sieve() {
    let b = Budget::default();
    let (pre, sieve) = fixtures::preorder5().unwrap();
    let q = quotient(&pre, &sieve).unwrap();
    let names: Vec<&str> = q.asm.noninitial_objects().into_iter().map(|o| q.asm.object_name(o)).collect();
    assert_eq!(names, vec!["B", "C", "D"]);
    assert!(q.projection.check(&b).is_valid());
    assert_eq!(*k0(&q.asm, &b).unwrap().invariants(), assemblers::AbelianGroup::free(2));
}
