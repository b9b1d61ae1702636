//! K₀ of an assembler: the free abelian group on noninitial objects modulo
//! `[A] = Σ [Aᵢ]` for every finite disjoint covering family `{Aᵢ → A}`.
//!
//! Relations are collected up to isomorphism: `[A] = [A']` for isomorphic
//! objects, and one relation per disjoint covering family of a canonical
//! object whose members are reduced (see [`Assembler::is_reduced`]). Every
//! other family differs from one of these by isomorphisms, so the relation
//! lattice is the same; [`k0_full`] builds it from every family instead.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::assembler::{Assembler, CoverFamily};
use crate::budget::Budget;
use crate::category::{MorId, ObjId};
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupHom, PresentedGroup};
use crate::ops::{has_complements, is_sieve, quotient, AssemblerMorphism, ComplementsReport, Subassembler};
use crate::snf::IntMatrix;

/// A sparse relation `Σ cᵢ·[gᵢ] = 0`, sorted by generator.
pub type Relation = Vec<(usize, i64)>;

/// K₀ as a presented abelian group on the noninitial objects.
#[derive(Clone, Debug)]
pub struct K0Group {
    asm: Arc<Assembler>,
    generators: Vec<ObjId>,
    slot: Vec<Option<usize>>,
    relations: Vec<Relation>,
    group: PresentedGroup,
}

/// Canonical coordinates of a class; torsion coordinates are reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct K0Class {
    pub coordinates: Vec<BigInt>,
}

impl K0Class {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(|c| c.is_zero())
    }
}

impl fmt::Display for K0Class {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coordinates.iter().map(|c| c.to_string()).collect();
        write!(out, "({})", parts.join(", "))
    }
}

struct Relations {
    slot: Vec<Option<usize>>,
    generators: Vec<ObjId>,
    seen: HashSet<Relation>,
    list: Vec<Relation>,
}

impl Relations {
    fn new(asm: &Assembler) -> Self {
        let generators = asm.noninitial_objects();
        let mut slot = vec![None; asm.category().object_count()];
        for (i, &o) in generators.iter().enumerate() {
            slot[o.index()] = Some(i);
        }
        Relations { slot, generators, seen: HashSet::new(), list: Vec::new() }
    }

    // Adds `[target] − Σ [src m]`, dropping zero and repeated relations.
    fn add(&mut self, asm: &Assembler, target: ObjId, members: &[MorId]) {
        let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
        if let Some(t) = self.slot[target.index()] {
            *acc.entry(t).or_default() += 1;
        }
        for &m in members {
            if let Some(s) = self.slot[asm.category().src(m).index()] {
                *acc.entry(s).or_default() -= 1;
            }
        }
        let mut rel: Relation = acc.into_iter().filter(|&(_, c)| c != 0).collect();
        if rel.is_empty() {
            return;
        }
        if rel[0].1 < 0 {
            rel.iter_mut().for_each(|e| e.1 = -e.1);
        }
        if self.seen.insert(rel.clone()) {
            self.list.push(rel);
        }
    }

    fn add_isomorphisms(&mut self, asm: &Assembler) {
        for o in asm.noninitial_objects() {
            let c = asm.canonical(o);
            if c != o {
                self.add(asm, o, &[asm.canonical_iso(o)]);
            }
        }
    }

    fn finish(self, asm: &Arc<Assembler>) -> K0Group {
        let n = self.generators.len();
        let dense = self.list.iter().map(|r| {
            let mut v = vec![BigInt::zero(); n];
            for &(i, c) in r {
                v[i] = BigInt::from(c);
            }
            v
        });
        let group = PresentedGroup::new(n, dense);
        K0Group { asm: asm.clone(), generators: self.generators, slot: self.slot, relations: self.list, group }
    }
}

/// K₀ from isomorphisms and reduced families of canonical objects.
pub fn k0(asm: &Arc<Assembler>, budget: &Budget) -> Result<K0Group> {
    let mut rels = Relations::new(asm);
    rels.add_isomorphisms(asm);
    for o in asm.noninitial_objects() {
        if asm.canonical(o) == o {
            for fam in asm.reduced_disjoint_covering_families(o, budget)? {
                rels.add(asm, o, &fam.members);
            }
        }
    }
    Ok(rels.finish(asm))
}

/// K₀ with one relation per finite disjoint covering family of every object.
pub fn k0_full(asm: &Arc<Assembler>, budget: &Budget) -> Result<K0Group> {
    let mut rels = Relations::new(asm);
    for o in asm.noninitial_objects() {
        for fam in asm.enumerate_disjoint_covering_families(o, budget)? {
            rels.add(asm, o, &fam.members);
        }
    }
    Ok(rels.finish(asm))
}

/// K₀ from the declared covers that are disjoint, plus one relation per
/// isomorphism. Agrees with [`k0`] when the declared covers generate.
pub fn k0_from_declared(asm: &Arc<Assembler>) -> K0Group {
    let mut rels = Relations::new(asm);
    rels.add_isomorphisms(asm);
    for fam in asm.declared_covers() {
        if asm.is_disjoint_family(fam) {
            rels.add(asm, fam.target, &fam.members);
        }
    }
    rels.finish(asm)
}

impl K0Group {
    pub fn assembler(&self) -> &Arc<Assembler> {
        &self.asm
    }

    pub fn generators(&self) -> &[ObjId] {
        &self.generators
    }

    /// Deduplicated relations, each normalized to a positive leading coefficient.
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn group(&self) -> &PresentedGroup {
        &self.group
    }

    pub fn invariants(&self) -> &AbelianGroup {
        self.group.invariants()
    }

    pub fn rank(&self) -> usize {
        self.invariants().free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.invariants().torsion
    }

    /// The vector of `[o]` in ℤ^generators; zero for the initial object.
    pub fn vector_of(&self, o: ObjId) -> Result<Vec<BigInt>> {
        if o.index() >= self.slot.len() {
            return Err(Error::UnknownObject(format!("#{}", o.0)));
        }
        let mut v = vec![BigInt::zero(); self.generators.len()];
        if let Some(i) = self.slot[o.index()] {
            v[i] = BigInt::one();
        }
        Ok(v)
    }

    pub fn class_of(&self, o: ObjId) -> Result<K0Class> {
        Ok(self.class_of_vector(&self.vector_of(o)?))
    }

    pub fn class_of_vector(&self, v: &[BigInt]) -> K0Class {
        K0Class { coordinates: self.group.coordinates(v) }
    }

    /// `target = Σ sources` in object names, or a general linear combination.
    pub fn describe_relation(&self, rel: &Relation) -> String {
        let name = |i: usize| self.asm.object_name(self.generators[i]).to_string();
        let (pos, neg): (Vec<_>, Vec<_>) = rel.iter().partition(|e| e.1 > 0);
        let side = |terms: &[&(usize, i64)]| -> String {
            if terms.is_empty() {
                return "0".into();
            }
            terms
                .iter()
                .map(|&&(i, c)| if c.abs() == 1 { name(i) } else { format!("{}·{}", c.abs(), name(i)) })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        format!("{} = {}", side(&pos), side(&neg))
    }

    /// The homomorphism induced by `m`, checked for well-definedness.
    pub fn map_to(&self, target: &K0Group, m: &AssemblerMorphism) -> Result<GroupHom> {
        if !Arc::ptr_eq(&m.source, &self.asm) || !Arc::ptr_eq(&m.target, &target.asm) {
            return Err(Error::InvalidMorphism("K₀ groups do not belong to the morphism's ends".into()));
        }
        let rows: Vec<Vec<BigInt>> =
            self.generators.iter().map(|&o| target.vector_of(m.object(o))).collect::<Result<_>>()?;
        let matrix = IntMatrix::from_rows(&rows, target.generators.len());
        let hom = GroupHom::new(self.group.clone(), target.group.clone(), matrix);
        if let Some(bad) = hom.ill_defined_relations().first() {
            return Err(Error::InvalidMorphism(format!(
                "induced map on K₀ is ill-defined: relation {:?} does not map to zero",
                bad.iter().map(|x| x.to_string()).collect::<Vec<_>>()
            )));
        }
        Ok(hom)
    }
}

/// The map on K₀ induced by a morphism of assemblers.
pub fn k0_map(m: &AssemblerMorphism, budget: &Budget) -> Result<GroupHom> {
    let source = k0(&m.source, budget)?;
    let target = k0(&m.target, budget)?;
    source.map_to(&target, m)
}

/// Two equal-size disjoint covering families with isomorphic pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SCWitness {
    pub left: CoverFamily,
    pub right: CoverFamily,
    /// `(member of left, member of right, isomorphism between their domains)`.
    pub pieces: Vec<(MorId, MorId, MorId)>,
}

impl SCWitness {
    /// Checks the families and every piece isomorphism.
    pub fn verify(&self, asm: &Assembler, budget: &Budget) -> Result<bool> {
        let cat = asm.category();
        let fams_ok = [&self.left, &self.right].iter().all(|f| asm.is_disjoint_family(f));
        let covers = asm.is_covering_family(&self.left, budget)? && asm.is_covering_family(&self.right, budget)?;
        let mut used_l: Vec<MorId> = self.pieces.iter().map(|p| p.0).collect();
        let mut used_r: Vec<MorId> = self.pieces.iter().map(|p| p.1).collect();
        used_l.sort();
        used_r.sort();
        let bijective = used_l == self.left.members && used_r == self.right.members;
        let isos = self
            .pieces
            .iter()
            .all(|&(a, b, i)| cat.src(i) == cat.src(a) && cat.tgt(i) == cat.src(b) && asm.is_iso(i));
        Ok(fams_ok && covers && bijective && isos)
    }
}

/// Searches for a scissors congruence between `a` and `b` using families of
/// at most `depth` members, smallest first. `None` means none was found
/// within the depth, not that the objects are incongruent.
pub fn scissors_congruent(
    asm: &Assembler,
    a: ObjId,
    b: ObjId,
    depth: usize,
    budget: &Budget,
) -> Result<Option<SCWitness>> {
    let families = |o: ObjId| -> Result<Vec<CoverFamily>> {
        let mut fams: Vec<CoverFamily> = if o == asm.initial() {
            vec![CoverFamily { target: o, members: Vec::new() }]
        } else {
            asm.reduced_disjoint_covering_families(o, budget)?
        };
        fams.retain(|f| f.len() <= depth);
        fams.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
        Ok(fams)
    };
    let (left, right) = (families(a)?, families(b)?);
    let cat = asm.category();
    let classes = |f: &CoverFamily| -> Vec<(ObjId, MorId)> {
        let mut v: Vec<(ObjId, MorId)> = f.members.iter().map(|&m| (asm.canonical(cat.src(m)), m)).collect();
        v.sort();
        v
    };
    for l in &left {
        let lc = classes(l);
        for r in right.iter().filter(|r| r.len() == l.len()) {
            budget.tick("scissors congruence search")?;
            let rc = classes(r);
            if lc.iter().zip(&rc).any(|(x, y)| x.0 != y.0) {
                continue;
            }
            let pieces = lc
                .iter()
                .zip(&rc)
                .map(|(&(_, p), &(_, q))| {
                    let (s, t) = (cat.src(p), cat.src(q));
                    let back = asm.inverse(asm.canonical_iso(s)).expect("canonical isomorphism");
                    let iso = cat.compose(back, asm.canonical_iso(t)).expect("composable");
                    (p, q, iso)
                })
                .collect();
            return Ok(Some(SCWitness { left: l.clone(), right: r.clone(), pieces }));
        }
    }
    Ok(None)
}

/// Hypothesis and π₀ conclusion of dévissage for a subassembler.
#[derive(Clone, Debug)]
pub struct DevissageReport {
    /// For each noninitial object, a disjoint covering family with domains in the subassembler.
    pub witnesses: Vec<(ObjId, CoverFamily)>,
    pub failures: Vec<ObjId>,
    pub sub: AbelianGroup,
    pub ambient: AbelianGroup,
    pub kernel: AbelianGroup,
    pub cokernel: AbelianGroup,
}

impl DevissageReport {
    pub fn hypothesis_holds(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn conclusion_holds(&self) -> bool {
        self.kernel.is_trivial() && self.cokernel.is_trivial()
    }
}

pub fn devissage_check(sub: &Subassembler, budget: &Budget) -> Result<DevissageReport> {
    let ambient = &sub.inclusion.target;
    let mut inside = vec![false; ambient.category().object_count()];
    for &o in &sub.inclusion.objects {
        inside[o.index()] = true;
    }
    let mut witnesses = Vec::new();
    let mut failures = Vec::new();
    for o in ambient.noninitial_objects() {
        match ambient.covering_families_from(o, |s| inside[s.index()], Some(1), budget)?.into_iter().next() {
            Some(fam) => witnesses.push((o, fam)),
            None => failures.push(o),
        }
    }
    let ks = k0(&sub.asm, budget)?;
    let kc = k0(ambient, budget)?;
    let hom = ks.map_to(&kc, &sub.inclusion)?;
    Ok(DevissageReport {
        witnesses,
        failures,
        sub: ks.invariants().clone(),
        ambient: kc.invariants().clone(),
        kernel: hom.kernel().invariants().clone(),
        cokernel: hom.cokernel().invariants().clone(),
    })
}

/// Hypotheses and π₀ conclusion of localization along a sieve.
#[derive(Clone, Debug)]
pub struct LocalizationReport {
    pub complements: Vec<(ObjId, ComplementsReport)>,
    pub k0_sieve: AbelianGroup,
    pub k0_ambient: AbelianGroup,
    pub k0_quotient: AbelianGroup,
    /// `coker(K₀(D) → K₀(C))`.
    pub cokernel: AbelianGroup,
    /// The induced map from the cokernel to `K₀(C∖D)` is an isomorphism.
    pub exact: bool,
}

impl LocalizationReport {
    pub fn complements_hold(&self) -> bool {
        self.complements.iter().all(|(_, r)| r.holds())
    }

    /// The first morphism out of the sieve lying in no disjoint covering family.
    pub fn complement_failure(&self) -> Option<MorId> {
        self.complements.iter().find_map(|(_, r)| r.failures.first().copied())
    }
}

pub fn localization_check(asm: &Arc<Assembler>, sieve: &[ObjId], budget: &Budget) -> Result<LocalizationReport> {
    let witness = is_sieve(asm, sieve);
    if !witness.is_valid() {
        return Err(Error::Hypothesis("the given objects do not form a sieve".into()));
    }
    let mut complements = Vec::new();
    for &o in &witness.objects {
        if o != asm.initial() {
            complements.push((o, has_complements(asm, o, budget)?));
        }
    }
    let sub = crate::ops::full_subassembler(asm, &witness.objects)?;
    let q = quotient(asm, &witness.objects)?;
    let kd = k0(&sub.asm, budget)?;
    let kc = k0(asm, budget)?;
    let kq = k0(&q.asm, budget)?;
    let into = kd.map_to(&kc, &sub.inclusion)?;
    let onto = kc.map_to(&kq, &q.projection)?;
    let coker = into.cokernel();
    let induced = GroupHom::new(coker.clone(), kq.group().clone(), onto.matrix.clone());
    Ok(LocalizationReport {
        complements,
        k0_sieve: kd.invariants().clone(),
        k0_ambient: kc.invariants().clone(),
        k0_quotient: kq.invariants().clone(),
        cokernel: coker.invariants().clone(),
        exact: induced.is_isomorphism(),
    })
}
