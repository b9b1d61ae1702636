//! Assemblers: finite categories with an initial object and a topology.
//!
//! Covering is decided on sieves. A sieve on `A` is a bitset over
//! `hom_into(A)`; a family covers when the sieve it generates is covering.
//! For declared coverages the covering sieves are the least collection that
//! contains every maximal sieve, is closed under isomorphism, and contains a
//! sieve whenever some declared family of its target has every pulled-back
//! sieve covering. Derived topologies (full subassemblers, quotients, wedges,
//! products) delegate to the assemblers they were built from.

mod axioms;
mod families;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use fixedbitset::FixedBitSet;
use petgraph::unionfind::UnionFind;

use crate::budget::Budget;
use crate::category::{CategoryBuilder, FiniteCategory, MorId, ObjId};
use crate::error::{Error, Result};

pub use axioms::AxiomReport;
pub use families::Refinement;
pub(crate) use families::FamilySearch;

/// Name of the initial object in built assemblers.
pub const INITIAL: &str = "∅";

/// Reserved name of the identity of `object`.
pub fn identity_name(object: &str) -> String {
    format!("id:{object}")
}

/// Reserved name of the morphism from the initial object to `object`.
pub fn initial_name(object: &str) -> String {
    format!("init:{object}")
}

/// A finite set of morphisms into a common target.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverFamily {
    pub target: ObjId,
    pub members: Vec<MorId>,
}

impl CoverFamily {
    /// Sorts and deduplicates `members`, checking that they all land in `target`.
    pub fn new(cat: &FiniteCategory, target: ObjId, mut members: Vec<MorId>) -> Result<Self> {
        for &m in &members {
            cat.check_morphism(m)?;
            if cat.tgt(m) != target {
                return Err(Error::InvalidFamily(format!(
                    "{} does not have target {}",
                    cat.morphism_name(m),
                    cat.object_name(target)
                )));
            }
        }
        members.sort();
        members.dedup();
        Ok(CoverFamily { target, members })
    }

    pub fn from_names(cat: &FiniteCategory, target: &str, members: &[&str]) -> Result<Self> {
        let target = cat.object_id(target)?;
        let members = members.iter().map(|m| cat.morphism_id(m)).collect::<Result<Vec<_>>>()?;
        CoverFamily::new(cat, target, members)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn describe(&self, cat: &FiniteCategory) -> String {
        let names: Vec<&str> = self.members.iter().map(|&m| cat.morphism_name(m)).collect();
        format!("{{{}}} -> {}", names.join(", "), cat.object_name(self.target))
    }
}

/// Maps objects and morphisms of a derived assembler into the one it came from.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub parent: Arc<Assembler>,
    pub objects: Vec<ObjId>,
    pub morphisms: Vec<MorId>,
}

/// How covering is decided.
#[derive(Debug, Clone)]
pub enum Topology {
    /// Generated by declared covering families.
    Coverage(Vec<CoverFamily>),
    /// A full subassembler: a sieve covers iff its image generates a covering sieve above.
    Induced(Embedding),
    /// `C∖D`: a sieve covers iff its image together with every morphism out of
    /// the sieve `in_sieve` covers in `C`.
    Quotient { embedding: Embedding, in_sieve: Vec<bool> },
    /// A wedge of assemblers sharing the initial object.
    Wedge { summands: Vec<Arc<Assembler>>, objects: Vec<Option<(usize, ObjId)>>, morphisms: Vec<Option<MorId>> },
    /// Covers iff both projections cover.
    Product {
        left: Arc<Assembler>,
        right: Arc<Assembler>,
        objects: Vec<(ObjId, ObjId)>,
        morphisms: Vec<(MorId, MorId)>,
    },
}

#[derive(Debug)]
struct IsoData {
    inverse: Vec<Option<MorId>>,
    canonical: Vec<ObjId>,
    canonical_iso: Vec<MorId>,
    orbit_min: Vec<bool>,
}

#[derive(Debug, Default)]
struct Caches {
    down: OnceLock<Vec<FixedBitSet>>,
    trivial: OnceLock<Vec<FixedBitSet>>,
    iso: OnceLock<IsoData>,
    transported: OnceLock<Vec<Vec<Vec<MorId>>>>,
    memo: Mutex<HashMap<(u32, FixedBitSet), bool>>,
}

/// A finite category with an initial object and a topology.
#[derive(Debug)]
pub struct Assembler {
    cat: FiniteCategory,
    initial: ObjId,
    topology: Topology,
    caches: Caches,
}

struct CovCtx<'b> {
    budget: &'b Budget,
    in_progress: HashSet<(u32, FixedBitSet)>,
}

impl Assembler {
    /// Wraps a category whose table is complete and satisfies the identity laws.
    pub fn new(cat: FiniteCategory, initial: ObjId, topology: Topology) -> Result<Self> {
        let problems = cat.structural_violations();
        if !problems.is_empty() {
            let shown: Vec<String> = problems.iter().take(5).map(|v| v.to_string()).collect();
            return Err(Error::InvalidCategory(shown.join("; ")));
        }
        if initial.index() >= cat.object_count() {
            return Err(Error::UnknownObject(format!("#{}", initial.0)));
        }
        if let Topology::Coverage(covers) = &topology {
            for c in covers {
                for &m in &c.members {
                    cat.check_morphism(m)?;
                    if cat.tgt(m) != c.target {
                        return Err(Error::InvalidFamily(c.describe(&cat)));
                    }
                }
            }
        }
        Ok(Assembler { cat, initial, topology, caches: Caches::default() })
    }

    pub fn category(&self) -> &FiniteCategory {
        &self.cat
    }

    pub fn initial(&self) -> ObjId {
        self.initial
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn is_initial(&self, o: ObjId) -> bool {
        o == self.initial
    }

    pub fn object_name(&self, o: ObjId) -> &str {
        self.cat.object_name(o)
    }

    pub fn morphism_name(&self, f: MorId) -> &str {
        self.cat.morphism_name(f)
    }

    pub fn object_id(&self, name: &str) -> Result<ObjId> {
        self.cat.object_id(name)
    }

    pub fn morphism_id(&self, name: &str) -> Result<MorId> {
        self.cat.morphism_id(name)
    }

    pub fn noninitial_objects(&self) -> Vec<ObjId> {
        self.cat.objects().filter(|&o| o != self.initial).collect()
    }

    /// Declared generating families (empty for derived topologies).
    pub fn declared_covers(&self) -> &[CoverFamily] {
        match &self.topology {
            Topology::Coverage(c) => c,
            _ => &[],
        }
    }

    pub fn family(&self, target: &str, members: &[&str]) -> Result<CoverFamily> {
        CoverFamily::from_names(&self.cat, target, members)
    }

    /// The sieve generated by `f`: positions of all `f ∘ h` in `hom_into(tgt f)`.
    pub fn down(&self, f: MorId) -> &FixedBitSet {
        &self.downs()[f.index()]
    }

    fn downs(&self) -> &Vec<FixedBitSet> {
        self.caches.down.get_or_init(|| {
            self.cat
                .morphisms()
                .map(|f| {
                    let n = self.cat.hom_into(self.cat.tgt(f)).len();
                    let mut bits = FixedBitSet::with_capacity(n);
                    for &p in self.cat.composite_positions(f) {
                        bits.insert(p as usize);
                    }
                    bits
                })
                .collect()
        })
    }

    /// Positions in `hom_into(o)` of the morphisms out of the initial object.
    pub(crate) fn trivial_bits(&self, o: ObjId) -> &FixedBitSet {
        &self.caches.trivial.get_or_init(|| {
            self.cat
                .objects()
                .map(|o| {
                    let into = self.cat.hom_into(o);
                    let mut bits = FixedBitSet::with_capacity(into.len());
                    for (p, &f) in into.iter().enumerate() {
                        if self.cat.src(f) == self.initial {
                            bits.insert(p);
                        }
                    }
                    bits
                })
                .collect()
        })[o.index()]
    }

    /// The sieve generated by a set of morphisms into `target`.
    pub fn sieve_of(&self, target: ObjId, members: &[MorId]) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.cat.hom_into(target).len());
        for &m in members {
            bits.union_with(self.down(m));
        }
        bits
    }

    /// `{h : t ∘ h ∈ sieve}` as a sieve on `src t`.
    pub fn pull_back_sieve(&self, t: MorId, sieve: &FixedBitSet) -> FixedBitSet {
        let slots = self.cat.composite_positions(t);
        let mut out = FixedBitSet::with_capacity(slots.len());
        for (p, &s) in slots.iter().enumerate() {
            if sieve.contains(s as usize) {
                out.insert(p);
            }
        }
        out
    }

    fn iso_data(&self) -> &IsoData {
        self.caches.iso.get_or_init(|| {
            let cat = &self.cat;
            let mut inverse = vec![None; cat.morphism_count()];
            for f in cat.morphisms() {
                let (a, b) = (cat.src(f), cat.tgt(f));
                for g in cat.hom(b, a) {
                    if cat.compose(f, g) == Some(cat.id(a)) && cat.compose(g, f) == Some(cat.id(b)) {
                        inverse[f.index()] = Some(g);
                        break;
                    }
                }
            }
            let mut classes = UnionFind::<usize>::new(cat.object_count());
            for f in cat.morphisms() {
                if inverse[f.index()].is_some() {
                    classes.union(cat.src(f).index(), cat.tgt(f).index());
                }
            }
            let mut least: HashMap<usize, ObjId> = HashMap::new();
            for o in cat.objects() {
                least.entry(classes.find(o.index())).or_insert(o);
            }
            let canonical: Vec<ObjId> = cat.objects().map(|o| least[&classes.find(o.index())]).collect();
            let canonical_iso = cat
                .objects()
                .map(|o| {
                    let c = canonical[o.index()];
                    if c == o {
                        cat.id(o)
                    } else {
                        cat.hom(c, o).into_iter().find(|g| inverse[g.index()].is_some()).expect("iso class")
                    }
                })
                .collect();
            let orbit_min = cat
                .morphisms()
                .map(|f| {
                    let c = cat.src(f);
                    canonical[c.index()] == c
                        && cat
                            .hom(c, c)
                            .into_iter()
                            .filter(|s| inverse[s.index()].is_some())
                            .all(|s| cat.compose(s, f).map_or(true, |g| f <= g))
                })
                .collect();
            IsoData { inverse, canonical, canonical_iso, orbit_min }
        })
    }

    pub fn inverse(&self, f: MorId) -> Option<MorId> {
        self.iso_data().inverse[f.index()]
    }

    pub fn is_iso(&self, f: MorId) -> bool {
        self.inverse(f).is_some()
    }

    /// Least object isomorphic to `o`.
    pub fn canonical(&self, o: ObjId) -> ObjId {
        self.iso_data().canonical[o.index()]
    }

    /// A fixed isomorphism `canonical(o) → o`.
    pub fn canonical_iso(&self, o: ObjId) -> MorId {
        self.iso_data().canonical_iso[o.index()]
    }

    pub fn isomorphic(&self, a: ObjId, b: ObjId) -> bool {
        self.canonical(a) == self.canonical(b)
    }

    /// Whether `f` is the chosen representative of its subobject: its domain is
    /// canonical and `f` is least among `f ∘ σ` for automorphisms `σ`.
    pub fn is_reduced(&self, f: MorId) -> bool {
        self.iso_data().orbit_min[f.index()]
    }

    /// True iff no cone over `(f, g)` has a noninitial apex.
    pub fn are_disjoint(&self, f: MorId, g: MorId) -> Result<bool> {
        self.cat.check_morphism(f)?;
        self.cat.check_morphism(g)?;
        if self.cat.tgt(f) != self.cat.tgt(g) {
            return Err(Error::NotCospan(self.morphism_name(f).into(), self.morphism_name(g).into()));
        }
        Ok(self.disjoint_unchecked(f, g))
    }

    pub(crate) fn disjoint_unchecked(&self, f: MorId, g: MorId) -> bool {
        bits_disjoint_outside(self.down(f), self.down(g), self.trivial_bits(self.cat.tgt(f)))
    }

    pub fn is_disjoint_family(&self, fam: &CoverFamily) -> bool {
        let m = &fam.members;
        (0..m.len()).all(|i| (i + 1..m.len()).all(|j| self.disjoint_unchecked(m[i], m[j])))
    }

    pub fn is_covering_family(&self, fam: &CoverFamily, budget: &Budget) -> Result<bool> {
        let sieve = self.sieve_of(fam.target, &fam.members);
        self.covers_sieve(fam.target, &sieve, budget)
    }

    /// Whether `sieve` (a bitset over `hom_into(target)`) is a covering sieve.
    pub fn covers_sieve(&self, target: ObjId, sieve: &FixedBitSet, budget: &Budget) -> Result<bool> {
        let mut ctx = CovCtx { budget, in_progress: HashSet::new() };
        Ok(self.cov(target, sieve.clone(), &mut ctx)?.0)
    }

    // Returns (covers, depends_on_an_unfinished_query).
    fn cov(&self, a: ObjId, sieve: FixedBitSet, ctx: &mut CovCtx<'_>) -> Result<(bool, bool)> {
        if a == self.initial {
            return Ok((true, false));
        }
        let (c, sieve) = match &self.topology {
            Topology::Coverage(_) => {
                let c = self.canonical(a);
                if c == a {
                    (a, sieve)
                } else {
                    (c, self.pull_back_sieve(self.canonical_iso(a), &sieve))
                }
            }
            _ => (a, sieve),
        };
        if sieve.contains(self.cat.position(self.cat.id(c))) {
            return Ok((true, false));
        }
        let key = (c.0, sieve);
        if let Some(&v) = self.caches.memo.lock().unwrap().get(&key) {
            return Ok((v, false));
        }
        if ctx.in_progress.contains(&key) {
            return Ok((false, true));
        }
        ctx.budget.tick("covering decision")?;
        let (value, tainted) = match &self.topology {
            Topology::Coverage(_) => {
                ctx.in_progress.insert(key.clone());
                let result = self.cov_declared(c, &key.1, ctx);
                ctx.in_progress.remove(&key);
                result?
            }
            _ => (self.cov_derived(c, &key.1, ctx.budget)?, false),
        };
        if value || !tainted {
            self.caches.memo.lock().unwrap().insert(key, value);
        }
        Ok((value, tainted && !value))
    }

    fn cov_declared(&self, c: ObjId, sieve: &FixedBitSet, ctx: &mut CovCtx<'_>) -> Result<(bool, bool)> {
        let mut tainted = false;
        'families: for fam in &self.transported()[c.index()] {
            for &t in fam {
                let pulled = self.pull_back_sieve(t, sieve);
                let (v, tt) = self.cov(self.cat.src(t), pulled, ctx)?;
                tainted |= tt;
                if !v {
                    continue 'families;
                }
            }
            return Ok((true, false));
        }
        Ok((false, tainted))
    }

    fn cov_derived(&self, a: ObjId, sieve: &FixedBitSet, budget: &Budget) -> Result<bool> {
        let into = self.cat.hom_into(a);
        let members = sieve.ones().map(|p| into[p]);
        match &self.topology {
            Topology::Coverage(_) => unreachable!(),
            Topology::Induced(e) => {
                let target = e.objects[a.index()];
                let images: Vec<MorId> = members.map(|m| e.morphisms[m.index()]).collect();
                let bits = e.parent.sieve_of(target, &images);
                e.parent.covers_sieve(target, &bits, budget)
            }
            Topology::Quotient { embedding: e, in_sieve } => {
                let target = e.objects[a.index()];
                let mut images: Vec<MorId> = members.map(|m| e.morphisms[m.index()]).collect();
                let pc = e.parent.category();
                images.extend(pc.hom_into(target).iter().copied().filter(|&f| in_sieve[pc.src(f).index()]));
                let bits = e.parent.sieve_of(target, &images);
                e.parent.covers_sieve(target, &bits, budget)
            }
            Topology::Wedge { summands, objects, morphisms } => {
                let (k, local) = objects[a.index()].expect("noninitial wedge object");
                let images: Vec<MorId> = members.map(|m| morphisms[m.index()].expect("local morphism")).collect();
                let bits = summands[k].sieve_of(local, &images);
                summands[k].covers_sieve(local, &bits, budget)
            }
            Topology::Product { left, right, objects, morphisms } => {
                let (la, ra) = objects[a.index()];
                let ms: Vec<MorId> = members.collect();
                let lbits = left.sieve_of(la, &ms.iter().map(|m| morphisms[m.index()].0).collect::<Vec<_>>());
                let rbits = right.sieve_of(ra, &ms.iter().map(|m| morphisms[m.index()].1).collect::<Vec<_>>());
                Ok(left.covers_sieve(la, &lbits, budget)? && right.covers_sieve(ra, &rbits, budget)?)
            }
        }
    }

    // Declared families moved along isomorphisms onto each canonical object.
    fn transported(&self) -> &Vec<Vec<Vec<MorId>>> {
        self.caches.transported.get_or_init(|| {
            let cat = &self.cat;
            let mut out = vec![Vec::new(); cat.object_count()];
            let mut seen: Vec<HashSet<Vec<MorId>>> = vec![HashSet::new(); cat.object_count()];
            for fam in self.declared_covers() {
                let a = fam.target;
                let c = self.canonical(a);
                for w in cat.hom(a, c) {
                    if !self.is_iso(w) {
                        continue;
                    }
                    let mut moved: Vec<MorId> =
                        fam.members.iter().map(|&g| cat.compose(g, w).expect("composable")).collect();
                    moved.sort();
                    moved.dedup();
                    if seen[c.index()].insert(moved.clone()) {
                        out[c.index()].push(moved);
                    }
                }
            }
            out
        })
    }
}

/// True iff `a ∩ b ⊆ allowed`.
pub(crate) fn bits_disjoint_outside(a: &FixedBitSet, b: &FixedBitSet, allowed: &FixedBitSet) -> bool {
    let (a, b, t) = (a.as_slice(), b.as_slice(), allowed.as_slice());
    a.iter().zip(b).enumerate().all(|(i, (x, y))| x & y & !t.get(i).copied().unwrap_or(0) == 0)
}

impl fmt::Display for Assembler {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "assembler with {} objects and {} morphisms",
            self.cat.object_count(),
            self.cat.morphism_count()
        )
    }
}

/// Builds an assembler, adding identities, initial morphisms and their
/// compositions automatically.
#[derive(Debug, Clone)]
pub struct SiteBuilder {
    cat: CategoryBuilder,
    initial: usize,
    identities: Vec<usize>,
    inits: Vec<usize>,
    covers: Vec<(usize, Vec<usize>)>,
}

impl Default for SiteBuilder {
    fn default() -> Self {
        SiteBuilder::new()
    }
}

impl SiteBuilder {
    /// A builder holding only the initial object [`INITIAL`].
    pub fn new() -> Self {
        let mut cat = CategoryBuilder::new();
        let initial = cat.object(INITIAL).unwrap();
        let id = cat.morphism(identity_name(INITIAL), initial, initial).unwrap();
        cat.identity(initial, id);
        SiteBuilder { cat, initial, identities: vec![id], inits: vec![id], covers: Vec::new() }
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// Adds a noninitial object together with its identity and initial morphism.
    pub fn object(&mut self, name: impl Into<String>) -> Result<usize> {
        let name = name.into();
        let o = self.cat.object(name.clone())?;
        let id = self.cat.morphism(identity_name(&name), o, o)?;
        let init = self.cat.morphism(initial_name(&name), self.initial, o)?;
        self.cat.identity(o, id);
        self.identities.push(id);
        self.inits.push(init);
        Ok(o)
    }

    pub fn morphism(&mut self, name: impl Into<String>, src: usize, tgt: usize) -> Result<usize> {
        self.cat.morphism(name, src, tgt)
    }

    /// Record `second ∘ first = result`.
    pub fn compose(&mut self, first: usize, second: usize, result: usize) {
        self.cat.compose(first, second, result);
    }

    pub fn identity_of(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn init_of(&self, o: usize) -> usize {
        self.inits[o]
    }

    pub fn find_object(&self, name: &str) -> Option<usize> {
        self.cat.find_object(name)
    }

    pub fn find_morphism(&self, name: &str) -> Option<usize> {
        self.cat.find_morphism(name)
    }

    pub fn object_count(&self) -> usize {
        self.cat.object_count()
    }

    pub fn cover(&mut self, target: usize, members: Vec<usize>) {
        self.covers.push((target, members));
    }

    /// The category with the automatic entries, plus declared covers.
    pub fn into_parts(mut self) -> (FiniteCategory, Vec<CoverFamily>) {
        for m in 0..self.cat.morphism_count() {
            let (s, t) = self.cat.morphism_endpoints(m);
            self.cat.compose(self.identities[s], m, m);
            self.cat.compose(m, self.identities[t], m);
            if s != self.initial {
                self.cat.compose(self.inits[s], m, self.inits[t]);
            }
        }
        let (cat, objs, mors) = self.cat.build_with_maps();
        let covers = self
            .covers
            .into_iter()
            .map(|(t, ms)| {
                let mut members: Vec<MorId> = ms.into_iter().map(|m| mors[m]).collect();
                members.sort();
                members.dedup();
                CoverFamily { target: objs[t], members }
            })
            .collect();
        (cat, covers)
    }

    pub fn build(self) -> Result<Assembler> {
        let (cat, covers) = self.into_parts();
        let initial = cat.object_id(INITIAL)?;
        Assembler::new(cat, initial, Topology::Coverage(covers))
    }
}
