//! Shared fixtures, brute-force oracles and property checks for the
//! integration tests.

#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;

use assemblers::document::{structurally_equal, AssemblerDocument};
use assemblers::fixtures::{self, FiniteGroup, FiniteSpace, IntervalVariant};
use assemblers::kzero::{k0, scissors_congruent};
use assemblers::{Assembler, Budget, CoverFamily, MorId, ObjId};

pub fn budget() -> Budget {
    Budget::new(200_000_000)
}

/// Every fixture small enough for exhaustive checks.
pub fn small_fixtures() -> Vec<(String, Arc<Assembler>)> {
    let mut out = vec![("trivial".to_string(), fixtures::trivial())];
    for (name, g) in [("S_1", FiniteGroup::trivial()), ("S_Z2", FiniteGroup::cyclic(2)), ("S_Σ3", FiniteGroup::symmetric3())] {
        out.push((name.into(), fixtures::sphere_group(&g).unwrap()));
    }
    for n in 1..=3 {
        out.push((format!("finite_sets({n})"), fixtures::finite_sets(n).unwrap()));
    }
    out.push(("open_sets(sierpinski)".into(), fixtures::open_sets(&FiniteSpace::sierpinski()).unwrap()));
    out.push(("open_sets(discrete 2)".into(), fixtures::open_sets(&FiniteSpace::discrete(2).unwrap()).unwrap()));
    out.push(("preorder5".into(), fixtures::preorder5().unwrap().0));
    out.push(("poset_sink".into(), fixtures::poset_sink().unwrap()));
    out.push(("intervals(1,2,classical)".into(), fixtures::intervals(1, 2, IntervalVariant::Classical, false).unwrap().asm));
    out.push(("intervals(1,2,total)".into(), fixtures::intervals(1, 2, IntervalVariant::Total, false).unwrap().asm));
    out
}

/// A random poset on at most six objects with a few declared covers.
#[derive(Clone, Debug)]
pub struct RandomPoset {
    pub n: usize,
    /// `below[i][j]` for `i < j` means `Pi ≤ Pj`.
    pub below: Vec<Vec<bool>>,
    pub covers: Vec<(usize, Vec<bool>)>,
}

pub fn random_poset() -> impl Strategy<Value = RandomPoset> {
    (1usize..=6).prop_flat_map(|n| {
        (
            proptest::collection::vec(proptest::collection::vec(proptest::bool::weighted(0.4), n), n),
            proptest::collection::vec((0..n, proptest::collection::vec(any::<bool>(), n)), 0..3),
        )
            .prop_map(move |(below, covers)| RandomPoset { n, below, covers })
    })
}

impl RandomPoset {
    pub fn names(&self) -> Vec<String> {
        (0..self.n).map(|i| format!("P{i}")).collect()
    }

    /// Reflexive-transitive closure of the generating relation.
    pub fn leq(&self) -> Vec<Vec<bool>> {
        let n = self.n;
        let mut leq = vec![vec![false; n]; n];
        for i in 0..n {
            leq[i][i] = true;
            for j in i + 1..n {
                leq[i][j] = self.below[i][j];
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i][k] && leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
        leq
    }

    pub fn build(&self) -> Arc<Assembler> {
        let names = self.names();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut order = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.below[i][j] {
                    order.push((refs[i], refs[j]));
                }
            }
        }
        let leq = self.leq();
        let covers: Vec<(&str, Vec<&str>)> = self
            .covers
            .iter()
            .map(|(t, pick)| {
                let members = (0..self.n).filter(|&s| s != *t && pick[s] && leq[s][*t]).map(|s| refs[s]).collect();
                (refs[*t], members)
            })
            .collect();
        fixtures::poset(&refs, &order, &covers).expect("random posets are valid assemblers")
    }
}

fn noninitial(asm: &Assembler) -> Vec<ObjId> {
    asm.noninitial_objects()
}

/// Morphisms into `t` from noninitial objects.
fn arrows_into(asm: &Assembler, t: ObjId) -> Vec<MorId> {
    let cat = asm.category();
    cat.hom_into(t).iter().copied().filter(|&f| cat.src(f) != asm.initial()).collect()
}

/// In a thin category, `a → t` and `b → t` are disjoint iff no noninitial
/// object lies below both.
pub fn thin_disjoint(asm: &Assembler, f: MorId, g: MorId) -> bool {
    let cat = asm.category();
    let (a, b) = (cat.src(f), cat.src(g));
    !noninitial(asm).into_iter().any(|x| !cat.hom(x, a).is_empty() && !cat.hom(x, b).is_empty())
}

pub fn check_axioms_hold(asm: &Assembler) -> Result<(), String> {
    let r = asm.check_axioms(50_000_000);
    if r.all_hold() {
        Ok(())
    } else {
        Err(r.render(asm))
    }
}

/// Axiom checker against independent facts about posets: thin categories
/// are monic, and (R) is decided here by searching common refinements.
pub fn check_poset_axioms(asm: &Assembler, budget: &Budget) -> Result<(), String> {
    let r = asm.check_axioms(50_000_000);
    if !r.initial_ok || !r.holds_m {
        return Err(format!("initial/monic checker wrong on a poset:\n{}", r.render(asm)));
    }
    let cat = asm.category();
    let mut refinements_exist = true;
    for t in noninitial(asm) {
        let fams = asm.enumerate_disjoint_covering_families(t, budget).map_err(|e| e.to_string())?;
        let below = |h: MorId, f: MorId| !cat.hom(cat.src(h), cat.src(f)).is_empty();
        for f in &fams {
            for g in &fams {
                let ok = fams.iter().any(|h| {
                    h.members
                        .iter()
                        .all(|&m| f.members.iter().any(|&x| below(m, x)) && g.members.iter().any(|&y| below(m, y)))
                });
                refinements_exist &= ok;
            }
        }
    }
    if refinements_exist != r.holds_r {
        return Err(format!("axiom R checker says {} but the refinement search says {refinements_exist}", r.holds_r));
    }
    Ok(())
}

/// Adding a morphism to a covering family keeps it covering; checked on
/// every subset of small hom sets and on declared covers otherwise.
pub fn check_cover_monotonicity(asm: &Assembler, budget: &Budget) -> Result<(), String> {
    let cat = asm.category();
    for t in noninitial(asm) {
        let into = arrows_into(asm, t);
        let families: Vec<Vec<MorId>> = if into.len() <= 8 {
            (0u32..1 << into.len()).map(|m| (0..into.len()).filter(|&i| m & (1 << i) != 0).map(|i| into[i]).collect()).collect()
        } else {
            asm.declared_covers().iter().filter(|c| c.target == t).map(|c| c.members.clone()).collect()
        };
        for members in families {
            let fam = CoverFamily::new(cat, t, members.clone()).map_err(|e| e.to_string())?;
            if !asm.is_covering_family(&fam, budget).map_err(|e| e.to_string())? {
                continue;
            }
            for &g in &into {
                if members.contains(&g) {
                    continue;
                }
                let mut bigger = members.clone();
                bigger.push(g);
                let sup = CoverFamily::new(cat, t, bigger).map_err(|e| e.to_string())?;
                if !asm.is_covering_family(&sup, budget).map_err(|e| e.to_string())? {
                    return Err(format!("{} covers but adding {} does not", fam.describe(cat), cat.morphism_name(g)));
                }
            }
        }
    }
    Ok(())
}

/// `are_disjoint` is symmetric; on thin categories it also matches the
/// common-lower-bound oracle.
pub fn check_disjointness(asm: &Assembler, thin: bool) -> Result<(), String> {
    let cat = asm.category();
    for t in noninitial(asm) {
        let into = arrows_into(asm, t);
        for &f in &into {
            for &g in &into {
                let (x, y) = (asm.are_disjoint(f, g).map_err(|e| e.to_string())?, asm.are_disjoint(g, f).map_err(|e| e.to_string())?);
                if x != y {
                    return Err(format!("disjointness of {} and {} is not symmetric", cat.morphism_name(f), cat.morphism_name(g)));
                }
                if thin && x != thin_disjoint(asm, f, g) {
                    return Err(format!("disjointness of {} and {} disagrees with the oracle", cat.morphism_name(f), cat.morphism_name(g)));
                }
            }
        }
    }
    Ok(())
}

/// Every scissors-congruence witness verifies and equates K₀ classes.
pub fn check_witness_soundness(asm: &Arc<Assembler>, budget: &Budget) -> Result<usize, String> {
    let k = k0(asm, budget).map_err(|e| e.to_string())?;
    let objs = noninitial(asm);
    let mut found = 0;
    for &a in &objs {
        for &b in &objs {
            if let Some(w) = scissors_congruent(asm, a, b, 3, budget).map_err(|e| e.to_string())? {
                found += 1;
                if !w.verify(asm, budget).map_err(|e| e.to_string())? {
                    return Err(format!("witness for {} ~ {} does not verify", asm.object_name(a), asm.object_name(b)));
                }
                if k.class_of(a).unwrap() != k.class_of(b).unwrap() {
                    return Err(format!("{} ~ {} but their K₀ classes differ", asm.object_name(a), asm.object_name(b)));
                }
            }
        }
    }
    Ok(found)
}

pub fn check_round_trip(asm: &Arc<Assembler>, budget: &Budget) -> Result<(), String> {
    let doc = AssemblerDocument::from_assembler(asm, budget).map_err(|e| e.to_string())?;
    let text = doc.to_json();
    let back_doc = AssemblerDocument::from_json(&text).map_err(|e| e.to_string())?;
    if back_doc != doc {
        return Err("document changed through JSON".into());
    }
    let back = back_doc.to_assembler().map_err(|e| e.to_string())?;
    if !structurally_equal(asm, &back, budget).map_err(|e| e.to_string())? {
        return Err("reloaded assembler differs".into());
    }
    let k = (k0(asm, budget).map_err(|e| e.to_string())?, k0(&back, budget).map_err(|e| e.to_string())?);
    if k.0.invariants() != k.1.invariants() {
        return Err("K₀ changed through JSON".into());
    }
    Ok(())
}

/// All properties on one random poset.
pub fn random_poset_properties(p: &RandomPoset) -> Result<(), String> {
    let budget = budget();
    let asm = p.build();
    check_poset_axioms(&asm, &budget)?;
    check_cover_monotonicity(&asm, &budget)?;
    check_disjointness(&asm, true)?;
    check_witness_soundness(&asm, &budget)?;
    check_round_trip(&asm, &budget)
}

/// All properties on every small fixture.
pub fn fixture_properties() -> Result<(), String> {
    let budget = budget();
    for (name, asm) in small_fixtures() {
        let tag = |e: String| format!("{name}: {e}");
        check_axioms_hold(&asm).map_err(tag)?;
        check_cover_monotonicity(&asm, &budget).map_err(tag)?;
        check_disjointness(&asm, false).map_err(tag)?;
        check_witness_soundness(&asm, &budget).map_err(tag)?;
        check_round_trip(&asm, &budget).map_err(tag)?;
    }
    Ok(())
}
