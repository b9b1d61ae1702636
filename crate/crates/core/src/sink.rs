//! The group of spans of an assembler with a sink.
//!
//! When every object maps to a sink `S`, every morphism with noninitial
//! domain is epic and singletons cover, and no two morphisms with noninitial
//! domains are disjoint, the spans `S ← A → S` modulo common restriction form
//! a group `G`, and every choice of morphisms to the sink gives a morphism of
//! assemblers to the group sphere `S_G`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use crate::assembler::{Assembler, CoverFamily};
use crate::budget::Budget;
use crate::category::{MorId, ObjId};
use crate::error::{Error, Result};
use crate::fixtures::{element_morphism, sphere_group, FiniteGroup};
use crate::ops::{full_subassembler, AssemblerMorphism, Subassembler};

/// Finds the least sink and verifies the three conditions, naming the first failure.
pub fn sink_conditions(asm: &Assembler, budget: &Budget) -> Result<ObjId> {
    let cat = asm.category();
    let nonempty = asm.noninitial_objects();
    let sink = nonempty
        .iter()
        .copied()
        .find(|&s| nonempty.iter().all(|&a| !cat.hom(a, s).is_empty()))
        .ok_or_else(|| Error::Hypothesis("condition (S) fails: no object receives a morphism from every object".into()))?;
    check_conditions_at(asm, sink, budget)?;
    Ok(sink)
}

fn check_conditions_at(asm: &Assembler, sink: ObjId, budget: &Budget) -> Result<()> {
    let cat = asm.category();
    if let Some(&a) = asm.noninitial_objects().iter().find(|&&a| cat.hom(a, sink).is_empty()) {
        return Err(Error::Hypothesis(format!(
            "condition (S) fails: {} has no morphism to {}",
            cat.object_name(a),
            cat.object_name(sink)
        )));
    }
    for f in cat.morphisms().filter(|&f| cat.src(f) != asm.initial()) {
        if !cat.is_epimorphism(f)? {
            return Err(Error::Hypothesis(format!("condition (Ep) fails: {} is not epic", cat.morphism_name(f))));
        }
        let single = CoverFamily { target: cat.tgt(f), members: vec![f] };
        if !asm.is_covering_family(&single, budget)? {
            return Err(Error::Hypothesis(format!("condition (Ep) fails: {{{}}} does not cover", cat.morphism_name(f))));
        }
    }
    for c in cat.objects() {
        let into: Vec<MorId> = cat.hom_into(c).iter().copied().filter(|&f| cat.src(f) != asm.initial()).collect();
        for (i, &f) in into.iter().enumerate() {
            for &g in &into[i..] {
                if asm.disjoint_unchecked(f, g) {
                    return Err(Error::Hypothesis(format!(
                        "condition (D) fails: {} and {} are disjoint",
                        cat.morphism_name(f),
                        cat.morphism_name(g)
                    )));
                }
            }
        }
    }
    Ok(())
}

/// The span group of an assembler with sink, with the group sphere it maps to.
#[derive(Clone, Debug)]
pub struct SinkGroup {
    asm: Arc<Assembler>,
    pub sink: ObjId,
    /// The least span `(A, f, g)` of each element.
    pub representatives: Vec<(ObjId, MorId, MorId)>,
    class: HashMap<(MorId, MorId), usize>,
    /// `table[a][b]` is the class of `a · b` (compose down the left and right).
    pub group: FiniteGroup,
    sphere: Arc<Assembler>,
}

impl fmt::Display for SinkGroup {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "span group of order {} at sink {}", self.group.order(), self.asm.object_name(self.sink))
    }
}

/// The span group at the least sink.
pub fn sink_group(asm: &Arc<Assembler>, budget: &Budget) -> Result<SinkGroup> {
    let sink = sink_conditions(asm, budget)?;
    sink_group_at(asm, sink, budget)
}

/// The span group at a given sink.
pub fn sink_group_at(asm: &Arc<Assembler>, sink: ObjId, budget: &Budget) -> Result<SinkGroup> {
    check_conditions_at(asm, sink, budget)?;
    let cat = asm.category();
    let mut spans: Vec<(ObjId, MorId, MorId)> = Vec::new();
    let mut index: HashMap<(MorId, MorId), usize> = HashMap::new();
    for a in asm.noninitial_objects() {
        let legs = cat.hom(a, sink);
        for &f in &legs {
            for &g in &legs {
                index.insert((f, g), spans.len());
                spans.push((a, f, g));
            }
        }
    }
    // Equivalent spans share a common restriction, so restrictions generate the relation.
    let mut classes = UnionFind::<usize>::new(spans.len());
    for (k, &(a, f, g)) in spans.iter().enumerate() {
        for &c in cat.hom_into(a) {
            if cat.src(c) == asm.initial() {
                continue;
            }
            budget.tick("span classes")?;
            let r = (cat.compose(c, f).expect("composable"), cat.compose(c, g).expect("composable"));
            classes.union(k, index[&r]);
        }
    }
    let mut element_of_root: HashMap<usize, usize> = HashMap::new();
    let mut representatives = Vec::new();
    let mut class = HashMap::new();
    for (k, &(a, f, g)) in spans.iter().enumerate() {
        let root = classes.find(k);
        let e = *element_of_root.entry(root).or_insert_with(|| {
            representatives.push((a, f, g));
            representatives.len() - 1
        });
        class.insert((f, g), e);
    }
    let n = representatives.len();
    let mut table = vec![vec![0; n]; n];
    for x in 0..n {
        let (_, f1, f2) = representatives[x];
        for y in 0..n {
            let (_, g1, g2) = representatives[y];
            budget.tick("span multiplication")?;
            let cone = cat
                .cones(f2, g1)?
                .into_iter()
                .find(|c| c.apex != asm.initial())
                .ok_or_else(|| Error::Hypothesis("no noninitial square completes a pair of spans".into()))?;
            let left = cat.compose(cone.left, f1).expect("composable");
            let right = cat.compose(cone.right, g2).expect("composable");
            table[x][y] = class[&(left, right)];
        }
    }
    let labels = representatives
        .iter()
        .map(|&(a, f, g)| format!("[{},{},{}]", cat.object_name(a), cat.morphism_name(f), cat.morphism_name(g)))
        .collect();
    let group = FiniteGroup::new(labels, table)
        .map_err(|e| Error::Hypothesis(format!("span multiplication is not a group: {e}")))?;
    let id = cat.id(sink);
    if group.identity() != class[&(id, id)] {
        return Err(Error::Hypothesis("the identity span is not the unit".into()));
    }
    for &(f, g) in class.keys() {
        if group.inverse(class[&(f, g)]) != class[&(g, f)] {
            return Err(Error::Hypothesis("swapping legs does not invert".into()));
        }
    }
    // π(h ∘ g) = π(g)·π(h), while the sphere composes `a` then `b` as `b·a`.
    let sphere = sphere_group(&group.opposite())?;
    Ok(SinkGroup { asm: asm.clone(), sink, representatives, class, group, sphere })
}

impl SinkGroup {
    pub fn assembler(&self) -> &Arc<Assembler> {
        &self.asm
    }

    /// The group sphere that the projections land in.
    pub fn sphere(&self) -> &Arc<Assembler> {
        &self.sphere
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// The element represented by the span `(src f, f, g)`.
    pub fn class_of(&self, f: MorId, g: MorId) -> Option<usize> {
        self.class.get(&(f, g)).copied()
    }

    /// The least morphism to the sink from every object; the identity on the sink.
    pub fn default_family(&self) -> Vec<MorId> {
        let cat = self.asm.category();
        cat.objects()
            .map(|a| if a == self.sink { cat.id(a) } else { cat.hom(a, self.sink)[0] })
            .collect()
    }

    fn check_family(&self, family: &[MorId]) -> Result<()> {
        let cat = self.asm.category();
        if family.len() != cat.object_count() {
            return Err(Error::Parameter("a family needs one morphism per object".into()));
        }
        if family[self.sink.index()] != cat.id(self.sink) {
            return Err(Error::Parameter("the family must choose the identity of the sink".into()));
        }
        for a in cat.objects() {
            let f = family[a.index()];
            if f.index() >= cat.morphism_count() || cat.src(f) != a || cat.tgt(f) != self.sink {
                return Err(Error::Parameter(format!("no valid choice for {}", cat.object_name(a))));
            }
        }
        Ok(())
    }

    /// `π_F(g: A → B)`, the element `[A, f_A, f_B ∘ g]`.
    pub fn project(&self, family: &[MorId], g: MorId) -> usize {
        let cat = self.asm.category();
        let fb = family[cat.tgt(g).index()];
        self.class[&(family[cat.src(g).index()], cat.compose(g, fb).expect("composable"))]
    }

    /// The morphism of assemblers `π_F` into [`Self::sphere`].
    pub fn projection(&self, family: &[MorId]) -> Result<AssemblerMorphism> {
        self.check_family(family)?;
        let cat = self.asm.category();
        let sphere = &self.sphere;
        let star = sphere.object_id(crate::fixtures::POINT)?;
        let opposite = self.group.opposite();
        let objects = cat.objects().map(|o| if o == self.asm.initial() { sphere.initial() } else { star }).collect();
        let morphisms = cat
            .morphisms()
            .map(|g| {
                if cat.tgt(g) == self.asm.initial() {
                    Ok(sphere.category().id(sphere.initial()))
                } else if cat.src(g) == self.asm.initial() {
                    Ok(sphere.category().hom(sphere.initial(), star)[0])
                } else {
                    element_morphism(sphere, &opposite, self.project(family, g))
                }
            })
            .collect::<Result<_>>()?;
        AssemblerMorphism::new(self.asm.clone(), sphere.clone(), objects, morphisms)
    }
}

/// Outcome of comparing two projections related by an automorphism.
#[derive(Clone, Debug, Default)]
pub struct ConjugationReport {
    /// Failures of the hypotheses, each naming the offending object.
    pub hypothesis_failures: Vec<String>,
    /// Morphisms on which `π_F'` and conjugation of `π_F` differ.
    pub mismatches: Vec<MorId>,
}

impl ConjugationReport {
    pub fn holds(&self) -> bool {
        self.hypothesis_failures.is_empty() && self.mismatches.is_empty()
    }
}

/// Checks that `π_F' = Φ ∘ π_F` where `Φ` is conjugation by `[S, 1, φ_S]`,
/// after verifying that `ψ` fixes the sink and the squares for `φ` commute.
pub fn verify_sink_family_conjugation(
    sg: &SinkGroup,
    family: &[MorId],
    other: &[MorId],
    psi: &AssemblerMorphism,
    phi: &[MorId],
) -> Result<ConjugationReport> {
    sg.check_family(family)?;
    sg.check_family(other)?;
    let asm = &sg.asm;
    let cat = asm.category();
    if !Arc::ptr_eq(&psi.source, asm) || !Arc::ptr_eq(&psi.target, asm) {
        return Err(Error::Parameter("ψ must be an endomorphism of the assembler".into()));
    }
    if phi.len() != cat.object_count() {
        return Err(Error::Parameter("φ needs one morphism per object".into()));
    }
    let mut report = ConjugationReport::default();
    let s = sg.sink;
    if psi.object(s) != s {
        report.hypothesis_failures.push("ψ does not fix the sink".into());
    }
    let psi_ok = psi.check(&Budget::default()).is_valid()
        && {
            let mut o = psi.objects.clone();
            o.sort();
            o.dedup();
            o.len() == cat.object_count()
        };
    if !psi_ok {
        report.hypothesis_failures.push("ψ is not an automorphism".into());
    }
    for a in asm.noninitial_objects() {
        let name = cat.object_name(a);
        let p = phi[a.index()];
        if p.index() >= cat.morphism_count() || cat.src(p) != a || cat.tgt(p) != psi.object(a) || !asm.is_iso(p) {
            report.hypothesis_failures.push(format!("φ at {name} is not an isomorphism onto ψ({name})"));
            continue;
        }
        if a == s {
            continue;
        }
        let through = cat.compose(p, family[psi.object(a).index()]).expect("composable");
        if through != other[a.index()] {
            report.hypothesis_failures.push(format!("f_ψ({name}) ∘ φ at {name} differs from f' at {name}"));
        }
        let phi_s = phi[s.index()];
        if cat.src(phi_s) == s && cat.tgt(phi_s) == s && cat.compose(family[a.index()], phi_s) != Some(through) {
            report.hypothesis_failures.push(format!("the square through φ at the sink fails at {name}"));
        }
    }
    if !report.hypothesis_failures.is_empty() {
        return Ok(report);
    }
    let id = cat.id(s);
    let phi_s = phi[s.index()];
    let left = sg.class[&(phi_s, id)];
    let right = sg.class[&(id, phi_s)];
    let g = &sg.group;
    for m in cat.morphisms().filter(|&m| cat.src(m) != asm.initial()) {
        let conj = g.mul(g.mul(left, sg.project(family, m)), right);
        if sg.project(other, m) != conj {
            report.mismatches.push(m);
        }
    }
    Ok(report)
}

/// The comparison between the span groups of an assembler and of the full
/// subassembler of objects mapping to `U`.
#[derive(Clone, Debug)]
pub struct RestrictionReport {
    pub sub: Subassembler,
    /// `φ[U ← A → U] = [S ← A → S]` on representatives, as element indices.
    pub phi: Vec<usize>,
    pub sub_group: SinkGroup,
    pub homomorphism: bool,
    pub bijective: bool,
    /// `π_F ∘ inclusion = φ ∘ π_F'` on every morphism.
    pub square_commutes: bool,
}

impl RestrictionReport {
    pub fn holds(&self) -> bool {
        self.homomorphism && self.bijective && self.square_commutes
    }
}

/// Restricts to the objects with a morphism to `u`, choosing `f'_A` least
/// with `f'_U = 1` and `f_A = f_U ∘ f'_A` on the restriction.
pub fn restrict_to_object(sg: &SinkGroup, u: ObjId, budget: &Budget) -> Result<RestrictionReport> {
    let asm = &sg.asm;
    let cat = asm.category();
    if u == asm.initial() || u.index() >= cat.object_count() {
        return Err(Error::Parameter("restriction needs a noninitial object".into()));
    }
    let s = sg.sink;
    let mut family = sg.default_family();
    let f_u = family[u.index()];
    let above: Vec<ObjId> = cat.objects().filter(|&a| !cat.hom(a, u).is_empty()).collect();
    let mut prime: HashMap<ObjId, MorId> = HashMap::new();
    for &a in &above {
        let choice = if a == u {
            cat.id(u)
        } else if a == s {
            *cat.hom(s, u).iter().find(|&&m| cat.compose(m, f_u) == Some(cat.id(s))).ok_or_else(|| {
                Error::Hypothesis("the sink maps to U but not by a section of f_U".into())
            })?
        } else {
            cat.hom(a, u)[0]
        };
        prime.insert(a, choice);
        if a != asm.initial() {
            family[a.index()] = cat.compose(choice, f_u).expect("composable");
        }
    }
    let sub = full_subassembler(asm, &above)?;
    let sc = sub.asm.category();
    let sub_u = (0..sc.object_count())
        .map(|i| ObjId(i as u32))
        .find(|&o| sub.inclusion.object(o) == u)
        .expect("U is in its restriction");
    let sub_group = sink_group_at(&sub.asm, sub_u, budget)?;
    let sub_family: Vec<MorId> = sc
        .objects()
        .map(|o| {
            let m = prime[&sub.inclusion.object(o)];
            sc.morphisms().find(|&x| sub.inclusion.morphism(x) == m).expect("full subcategory")
        })
        .collect();
    let phi: Vec<usize> = sub_group
        .representatives
        .iter()
        .map(|&(_, f, g)| {
            let (f, g) = (sub.inclusion.morphism(f), sub.inclusion.morphism(g));
            sg.class[&(cat.compose(f, f_u).unwrap(), cat.compose(g, f_u).unwrap())]
        })
        .collect();
    let (h, big) = (&sub_group.group, &sg.group);
    let n = h.order();
    let homomorphism = (0..n).all(|a| (0..n).all(|b| phi[h.mul(a, b)] == big.mul(phi[a], phi[b])));
    let mut image = phi.clone();
    image.sort();
    image.dedup();
    let bijective = image.len() == n && n == big.order();
    let square_commutes = sc
        .morphisms()
        .filter(|&m| sc.src(m) != sub.asm.initial())
        .all(|m| sg.project(&family, sub.inclusion.morphism(m)) == phi[sub_group.project(&sub_family, m)]);
    Ok(RestrictionReport { sub, phi, sub_group, homomorphism, bijective, square_commutes })
}
