//! Wedges, products, full subassemblers, sieves and quotients.

use std::fmt;
use std::sync::Arc;

use super::build::{Draft, Slot};
use super::{AssemblerMorphism, MorphismReport};
use crate::assembler::{Assembler, AxiomReport, CoverFamily, Embedding, Topology};
use crate::budget::Budget;
use crate::category::{MorId, ObjId};
use crate::error::{Error, Result};

/// Local indices of an assembler's objects and morphisms inside a draft.
struct Imported {
    objects: Vec<Option<usize>>,
    morphisms: Vec<Option<Slot>>,
}

// Copies the full subcategory on the noninitial objects accepted by `keep`.
fn import(
    draft: &mut Draft,
    asm: &Assembler,
    keep: impl Fn(ObjId) -> bool,
    object_name: impl Fn(&str) -> String,
    morphism_name: impl Fn(&str) -> String,
) -> Imported {
    let cat = asm.category();
    let objects: Vec<Option<usize>> = cat
        .objects()
        .map(|o| (o != asm.initial() && keep(o)).then(|| draft.object(object_name(cat.object_name(o)))))
        .collect();
    let mut morphisms = Vec::with_capacity(cat.morphism_count());
    for f in cat.morphisms() {
        let (s, t) = (cat.src(f), cat.tgt(f));
        let slot = if s == asm.initial() {
            if t == asm.initial() {
                Some(Slot::Empty)
            } else {
                objects[t.index()].map(Slot::Init)
            }
        } else {
            match (objects[s.index()], objects[t.index()]) {
                (Some(a), Some(_)) if cat.is_identity(f) => Some(Slot::Id(a)),
                (Some(a), Some(b)) => Some(Slot::Mor(draft.morphism(morphism_name(cat.morphism_name(f)), a, b))),
                _ => None,
            }
        };
        morphisms.push(slot);
    }
    for f in cat.morphisms() {
        let Some(Slot::Mor(a)) = morphisms[f.index()] else { continue };
        for &g in cat.hom_from(cat.tgt(f)) {
            let Some(Slot::Mor(b)) = morphisms[g.index()] else { continue };
            let r = cat.compose(f, g).expect("complete table");
            draft.compositions.push((a, b, morphisms[r.index()].expect("kept composite")));
        }
    }
    Imported { objects, morphisms }
}

fn import_covers(draft: &mut Draft, asm: &Assembler, imported: &Imported) {
    for fam in asm.declared_covers() {
        let Some(t) = imported.objects[fam.target.index()] else { continue };
        let members: Option<Vec<Slot>> = fam.members.iter().map(|m| imported.morphisms[m.index()]).collect();
        if let Some(members) = members {
            draft.covers.push((t, members));
        }
    }
}

/// Name of the copy of `name` in the `k`-th wedge summand (1-based).
pub fn wedge_name(k: usize, name: &str) -> String {
    format!("{k}:{name}")
}

/// A wedge of assemblers with its injections.
#[derive(Clone, Debug)]
pub struct Wedge {
    pub asm: Arc<Assembler>,
    pub injections: Vec<AssemblerMorphism>,
    /// Summand index and local object of every object; `None` for the initial one.
    pub origin: Vec<Option<(usize, ObjId)>>,
}

/// `⋁ Cₖ`: a shared initial object and the noninitial parts side by side.
/// Objects and morphisms of summand `k` are prefixed with `k:` (1-based).
pub fn coproduct(summands: &[Arc<Assembler>]) -> Result<Wedge> {
    let mut draft = Draft::default();
    let all_declared = summands.iter().all(|s| matches!(s.topology(), Topology::Coverage(_)));
    let mut imported = Vec::with_capacity(summands.len());
    for (k, s) in summands.iter().enumerate() {
        let im = import(&mut draft, s, |_| true, |n| wedge_name(k + 1, n), |n| wedge_name(k + 1, n));
        if all_declared {
            import_covers(&mut draft, s, &im);
        }
        imported.push(im);
    }
    let built = draft.build()?;
    let cat = &built.cat;
    let mut origin = vec![None; cat.object_count()];
    let mut local_mor = vec![None; cat.morphism_count()];
    let mut maps = Vec::with_capacity(summands.len());
    for (k, (s, im)) in summands.iter().zip(&imported).enumerate() {
        let sc = s.category();
        let objects: Vec<ObjId> = sc
            .objects()
            .map(|o| im.objects[o.index()].map_or(built.initial, |l| built.objects[l]))
            .collect();
        for o in sc.objects() {
            if o != s.initial() {
                origin[objects[o.index()].index()] = Some((k, o));
            }
        }
        let morphisms: Vec<MorId> = sc
            .morphisms()
            .map(|f| built.slot(im.morphisms[f.index()].expect("every morphism is kept")))
            .collect();
        for f in sc.morphisms() {
            if sc.tgt(f) != s.initial() {
                local_mor[morphisms[f.index()].index()] = Some(f);
            }
        }
        maps.push((objects, morphisms));
    }
    let topology = if all_declared {
        Topology::Coverage(built.covers.clone())
    } else {
        Topology::Wedge { summands: summands.to_vec(), objects: origin.clone(), morphisms: local_mor }
    };
    let asm = Arc::new(Assembler::new(built.cat, built.initial, topology)?);
    let injections = summands
        .iter()
        .zip(maps)
        .map(|(s, (objects, morphisms))| AssemblerMorphism::new(s.clone(), asm.clone(), objects, morphisms))
        .collect::<Result<_>>()?;
    Ok(Wedge { asm, injections, origin })
}

/// `X ∧ C` for a pointed set with `points` non-basepoint elements: a wedge
/// of that many copies of `C`.
pub fn smash(points: usize, asm: &Arc<Assembler>) -> Result<Wedge> {
    coproduct(&vec![asm.clone(); points])
}

/// A product of two assemblers with its projections.
#[derive(Clone, Debug)]
pub struct Product {
    pub asm: Arc<Assembler>,
    pub left: AssemblerMorphism,
    pub right: AssemblerMorphism,
}

/// The product category with the product topology; objects are named `(x,y)`.
pub fn product(left: &Arc<Assembler>, right: &Arc<Assembler>, budget: &Budget) -> Result<Product> {
    let (lc, rc) = (left.category(), right.category());
    budget.spend((lc.morphism_count() * rc.morphism_count()) as u64, "product construction")?;
    let mut draft = Draft::default();
    let mut obj_local = vec![vec![None; rc.object_count()]; lc.object_count()];
    let mut obj_pairs = Vec::new();
    for x in lc.objects() {
        for y in rc.objects() {
            if x == left.initial() && y == right.initial() {
                continue;
            }
            obj_local[x.index()][y.index()] =
                Some(draft.object(format!("({},{})", lc.object_name(x), rc.object_name(y))));
            obj_pairs.push((x, y));
        }
    }
    let slot_of = |draft: &mut Draft, f: MorId, g: MorId| -> Slot {
        let (sx, sy) = (lc.src(f), rc.src(g));
        let t = obj_local[lc.tgt(f).index()][rc.tgt(g).index()];
        match obj_local[sx.index()][sy.index()] {
            None => t.map_or(Slot::Empty, Slot::Init),
            Some(a) if lc.is_identity(f) && rc.is_identity(g) => Slot::Id(a),
            Some(a) => Slot::Mor(draft.morphism(
                format!("({},{})", lc.morphism_name(f), rc.morphism_name(g)),
                a,
                t.expect("noninitial target"),
            )),
        }
    };
    let mut pair_slot = vec![vec![Slot::Empty; rc.morphism_count()]; lc.morphism_count()];
    let mut mor_pairs = Vec::new();
    for f in lc.morphisms() {
        for g in rc.morphisms() {
            let s = slot_of(&mut draft, f, g);
            if let Slot::Mor(_) = s {
                mor_pairs.push((f, g));
            }
            pair_slot[f.index()][g.index()] = s;
        }
    }
    for &(f, g) in &mor_pairs {
        let Slot::Mor(a) = pair_slot[f.index()][g.index()] else { unreachable!() };
        for &f2 in lc.hom_from(lc.tgt(f)) {
            budget.spend(rc.hom_from(rc.tgt(g)).len() as u64, "product construction")?;
            for &g2 in rc.hom_from(rc.tgt(g)) {
                let Slot::Mor(b) = pair_slot[f2.index()][g2.index()] else { continue };
                let r = pair_slot[lc.compose(f, f2).unwrap().index()][rc.compose(g, g2).unwrap().index()];
                draft.compositions.push((a, b, r));
            }
        }
    }
    let built = draft.build()?;
    let cat = &built.cat;
    let mut objects = vec![(left.initial(), right.initial()); cat.object_count()];
    for (l, &(x, y)) in obj_pairs.iter().enumerate() {
        objects[built.objects[l].index()] = (x, y);
    }
    let mut morphisms = vec![(lc.id(left.initial()), rc.id(right.initial())); cat.morphism_count()];
    for f in lc.morphisms() {
        for g in rc.morphisms() {
            let m = built.slot(pair_slot[f.index()][g.index()]);
            // Identities and initial morphisms are reached by several pairs; keep the matching one.
            let (s, t) = (cat.src(m), cat.tgt(m));
            if objects[s.index()] == (lc.src(f), rc.src(g)) && objects[t.index()] == (lc.tgt(f), rc.tgt(g)) {
                morphisms[m.index()] = (f, g);
            }
        }
    }
    let topology =
        Topology::Product { left: left.clone(), right: right.clone(), objects: objects.clone(), morphisms: morphisms.clone() };
    let asm = Arc::new(Assembler::new(built.cat, built.initial, topology)?);
    let left_map = AssemblerMorphism::new(
        asm.clone(),
        left.clone(),
        objects.iter().map(|p| p.0).collect(),
        morphisms.iter().map(|p| p.0).collect(),
    )?;
    let right_map = AssemblerMorphism::new(
        asm.clone(),
        right.clone(),
        objects.iter().map(|p| p.1).collect(),
        morphisms.iter().map(|p| p.1).collect(),
    )?;
    Ok(Product { asm, left: left_map, right: right_map })
}

/// Whether a set of objects is closed under precomposition.
#[derive(Clone, Debug)]
pub struct SieveWitness {
    pub objects: Vec<ObjId>,
    pub contains_initial: bool,
    /// Morphisms from an object outside the set into one inside it.
    pub violations: Vec<MorId>,
}

impl SieveWitness {
    pub fn is_valid(&self) -> bool {
        self.contains_initial && self.violations.is_empty()
    }
}

pub fn is_sieve(asm: &Assembler, objects: &[ObjId]) -> SieveWitness {
    let cat = asm.category();
    let mut inside = vec![false; cat.object_count()];
    for &o in objects {
        inside[o.index()] = true;
    }
    let violations =
        cat.morphisms().filter(|&f| inside[cat.tgt(f).index()] && !inside[cat.src(f).index()]).collect();
    let mut objects = objects.to_vec();
    objects.sort();
    objects.dedup();
    SieveWitness { objects, contains_initial: inside[asm.initial().index()], violations }
}

/// A full subassembler with its inclusion.
#[derive(Clone, Debug)]
pub struct Subassembler {
    pub asm: Arc<Assembler>,
    pub inclusion: AssemblerMorphism,
}

fn embedded(parent: &Arc<Assembler>, keep: &[bool]) -> Result<(crate::ops::build::Built, Embedding)> {
    let mut draft = Draft::default();
    let im = import(&mut draft, parent, |o| keep[o.index()], str::to_string, str::to_string);
    let built = draft.build()?;
    let pc = parent.category();
    let mut objects = vec![parent.initial(); built.cat.object_count()];
    for o in pc.objects() {
        if let Some(l) = im.objects[o.index()] {
            objects[built.objects[l].index()] = o;
        }
    }
    let mut morphisms = vec![pc.id(parent.initial()); built.cat.morphism_count()];
    for f in pc.morphisms() {
        if let Some(s) = im.morphisms[f.index()] {
            let m = built.slot(s);
            if pc.src(f) == parent.initial() || keep[pc.src(f).index()] {
                morphisms[m.index()] = f;
            }
        }
    }
    let embedding = Embedding { parent: parent.clone(), objects, morphisms };
    Ok((built, embedding))
}

/// The full subcategory on `objects` (plus the initial object), covered by
/// the families whose images cover in `parent`.
pub fn full_subassembler(parent: &Arc<Assembler>, objects: &[ObjId]) -> Result<Subassembler> {
    let mut keep = vec![false; parent.category().object_count()];
    for &o in objects {
        if o.index() >= keep.len() {
            return Err(Error::UnknownObject(format!("#{}", o.0)));
        }
        keep[o.index()] = true;
    }
    let (built, e) = embedded(parent, &keep)?;
    let (objs, mors) = (e.objects.clone(), e.morphisms.clone());
    let asm = Arc::new(Assembler::new(built.cat, built.initial, Topology::Induced(e))?);
    let inclusion = AssemblerMorphism::new(asm.clone(), parent.clone(), objs, mors)?;
    Ok(Subassembler { asm, inclusion })
}

/// A quotient `C∖D` and the canonical morphism `C → C∖D`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub asm: Arc<Assembler>,
    pub projection: AssemblerMorphism,
    /// `C∖D` as a full subcategory of `C`.
    pub embedding: Embedding,
}

/// `C∖D` for a sieve `D`: the objects outside `D` and the initial object; a
/// family covers when it can be completed to a covering family of `C` by
/// morphisms with domains in `D`.
pub fn quotient(parent: &Arc<Assembler>, sieve: &[ObjId]) -> Result<Quotient> {
    let witness = is_sieve(parent, sieve);
    if !witness.is_valid() {
        let pc = parent.category();
        let why = match witness.violations.first() {
            Some(&f) => format!("{} enters the set from outside", pc.morphism_name(f)),
            None => "the set does not contain the initial object".to_string(),
        };
        return Err(Error::Hypothesis(format!("not a sieve: {why}")));
    }
    let pc = parent.category();
    let mut in_sieve = vec![false; pc.object_count()];
    for &o in sieve {
        in_sieve[o.index()] = true;
    }
    let keep: Vec<bool> = in_sieve.iter().map(|b| !b).collect();
    let (built, e) = embedded(parent, &keep)?;
    let qc = &built.cat;
    let mut obj_back = vec![None; pc.object_count()];
    for o in qc.objects() {
        obj_back[e.objects[o.index()].index()] = Some(o);
    }
    let mut mor_back = vec![None; pc.morphism_count()];
    for m in qc.morphisms() {
        if qc.src(m) != built.initial || qc.tgt(m) == built.initial {
            mor_back[e.morphisms[m.index()].index()] = Some(m);
        }
    }
    let objects: Vec<ObjId> =
        pc.objects().map(|o| if in_sieve[o.index()] { built.initial } else { obj_back[o.index()].unwrap() }).collect();
    let morphisms: Vec<MorId> = pc
        .morphisms()
        .map(|f| match mor_back[f.index()] {
            Some(m) if !in_sieve[pc.src(f).index()] => m,
            _ => qc.hom(built.initial, objects[pc.tgt(f).index()])[0],
        })
        .collect();
    let topology = Topology::Quotient { embedding: e.clone(), in_sieve };
    let asm = Arc::new(Assembler::new(built.cat, built.initial, topology)?);
    let projection = AssemblerMorphism::new(parent.clone(), asm.clone(), objects, morphisms)?;
    Ok(Quotient { asm, projection, embedding: e })
}

/// Axioms of a candidate subassembler together with the check of its inclusion.
#[derive(Clone, Debug)]
pub struct SubassemblerReport {
    pub axioms: AxiomReport,
    pub inclusion: MorphismReport,
    /// The inclusion is injective on objects and morphisms.
    pub injective: bool,
}

impl SubassemblerReport {
    pub fn holds(&self) -> bool {
        self.axioms.all_hold() && self.inclusion.is_valid() && self.injective
    }
}

impl fmt::Display for SubassemblerReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(out, "axioms: {}", self.axioms)?;
        writeln!(out, "inclusion injective: {}", self.injective)?;
        write!(out, "inclusion: {}", self.inclusion)
    }
}

pub fn is_subassembler(inclusion: &AssemblerMorphism, budget: &Budget) -> SubassemblerReport {
    let mut objs = inclusion.objects.clone();
    objs.sort();
    let mut mors = inclusion.morphisms.clone();
    mors.sort();
    let injective = objs.windows(2).all(|w| w[0] != w[1]) && mors.windows(2).all(|w| w[0] != w[1]);
    SubassemblerReport {
        axioms: inclusion.source.check_axioms(budget.limit()),
        inclusion: inclusion.check(budget),
        injective,
    }
}

/// For each morphism out of an object, a disjoint covering family containing it.
#[derive(Clone, Debug, Default)]
pub struct ComplementsReport {
    pub witnesses: Vec<(MorId, CoverFamily)>,
    /// Morphisms contained in no finite disjoint covering family.
    pub failures: Vec<MorId>,
}

impl ComplementsReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Whether every morphism out of `object` lies in a finite disjoint covering
/// family of its target.
pub fn has_complements(asm: &Assembler, object: ObjId, budget: &Budget) -> Result<ComplementsReport> {
    if object == asm.initial() {
        return Err(Error::Parameter("complements are asked of noninitial objects".into()));
    }
    let mut report = ComplementsReport::default();
    for &f in asm.category().hom_from(object) {
        match asm.complement_of(f, budget)? {
            Some(fam) => report.witnesses.push((f, fam)),
            None => report.failures.push(f),
        }
    }
    Ok(report)
}
