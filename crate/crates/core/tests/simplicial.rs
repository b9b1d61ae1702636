use std::collections::BTreeMap;
use std::sync::Arc;

use assemblers::fixtures::{self, FiniteGroup};
use assemblers::kzero::k0;
use assemblers::ops::full_subassembler;
use assemblers::simplicial::{
    circle_degeneracy, circle_face, circle_smash, cofiber, constant_morphism, constant_simplicial, k0_simplicial,
    simplicial_identities_check,
};
use assemblers::{Assembler, AssemblerMorphism, Budget};

fn swap(asm: &Arc<Assembler>) -> AssemblerMorphism {
    let objects: BTreeMap<String, String> =
        [("{1}", "{2}"), ("{2}", "{1}")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    let morphisms: BTreeMap<String, String> = [
        ("{1}->{1,2}[1]", "{2}->{1,2}[2]"),
        ("{2}->{1,2}[2]", "{1}->{1,2}[1]"),
        ("{1}->{1,2}[2]", "{2}->{1,2}[1]"),
        ("{2}->{1,2}[1]", "{1}->{1,2}[2]"),
        ("{1}->{2}[2]", "{2}->{1}[1]"),
        ("{2}->{1}[1]", "{1}->{2}[2]"),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    AssemblerMorphism::from_name_maps(asm.clone(), asm.clone(), &objects, &morphisms).unwrap()
}

#[test]
fn circle_faces_satisfy_identities() {
    for n in 2..6 {
        for j in 1..=n {
            for i in 0..n {
                for k in i + 1..=n {
                    // dᵢ dₖ = dₖ₋₁ dᵢ on cells, basepoint absorbing.
                    let left = circle_face(n, k, j).and_then(|x| circle_face(n - 1, i, x));
                    let right = circle_face(n, i, j).and_then(|x| circle_face(n - 1, k - 1, x));
                    assert_eq!(left, right, "n={n} i={i} k={k} j={j}");
                }
            }
            for i in 0..n {
                let s = circle_degeneracy(i, j);
                assert_eq!(circle_face(n + 1, i, s), Some(j));
                assert_eq!(circle_face(n + 1, i + 1, s), Some(j));
            }
        }
    }
}

#[test]
fn constant_spaces_pass_and_corrupted_faces_fail() {
    let fs = fixtures::finite_sets(2).unwrap();
    let x = constant_simplicial(&fs, 2);
    assert!(simplicial_identities_check(&x).holds());
    assert!(x.structure_map_failures(&Budget::default()).is_empty());

    let s = swap(&fs);
    assert!(s.check(&Budget::default()).is_valid());
    let mut bad = x.clone();
    bad.faces[1][0] = s;
    let report = simplicial_identities_check(&bad);
    assert!(!report.holds());
    assert!(report.checked > 0);
}

#[test]
fn circle_smash_levels() {
    let s1 = fixtures::sphere_group(&FiniteGroup::trivial()).unwrap();
    let d = constant_simplicial(&s1, 3);
    let smash = circle_smash(&d, 3).unwrap();
    assert!(simplicial_identities_check(&smash.space).holds());
    let sizes: Vec<usize> = smash.space.levels.iter().map(|l| l.noninitial_objects().len()).collect();
    assert_eq!(sizes, vec![0, 1, 2, 3]);
    let k = k0_simplicial(&smash.space, &Budget::default()).unwrap();
    assert!(k.group.invariants().is_trivial());
}

#[test]
fn cofiber_of_preorder_inclusion() {
    let b = Budget::default();
    let (pre, sieve) = fixtures::preorder5().unwrap();
    let sub = full_subassembler(&pre, &sieve).unwrap();
    let (ds, cs) = (constant_simplicial(&sub.asm, 3), constant_simplicial(&pre, 3));
    let g = constant_morphism(&sub.inclusion, &ds, &cs).unwrap();
    let cof = cofiber(&g, &ds, &cs, 3).unwrap();
    let sizes: Vec<usize> = cof.space.levels.iter().map(|l| l.category().object_count()).collect();
    assert_eq!(sizes, vec![5, 6, 7, 8]);
    assert!(cof.space.structure_map_failures(&b).is_empty());
    assert!(cof.inclusion.naturality(&cs, &cof.space).holds());
    assert!(cof.projection.naturality(&cof.space, &cof.smash.space).holds());
    assert!(cof.composite_collapses().unwrap());

    let kx = k0_simplicial(&cof.space, &b).unwrap();
    let kc = k0(&pre, &b).unwrap();
    let iota = cof.k0_inclusion(&kc, &kx).unwrap();
    assert!(iota.is_well_defined() && iota.is_surjective());
}
