//! Size-truncated models of `W(C)` and `W(C, D)`.
//!
//! Objects are tuples of noninitial objects of length at most `max_tuple`.
//! A morphism `(Aᵢ) → (Bⱼ)` is an index map `i ↦ j` with components
//! `Aᵢ → B_{j}` such that every fiber is a finite disjoint covering family.
//! Hom-sets are enumerated on demand and cached.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use petgraph::unionfind::UnionFind;

use crate::assembler::{Assembler, FamilySearch};
use crate::budget::Budget;
use crate::category::{MorId, ObjId};
use crate::error::{Error, Result};
use crate::ops::{quotient, Wedge};

/// A finite tuple of noninitial objects.
pub type WObject = Vec<ObjId>;

/// An index map with one component per source entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WMorphism {
    pub map: Vec<usize>,
    pub components: Vec<MorId>,
}

// For W(C, D): fibers must extend to disjoint covers of C by morphisms out of D.
#[derive(Debug)]
struct Relative {
    parent: Arc<Assembler>,
    morphisms: Vec<MorId>,
    objects: Vec<ObjId>,
    in_sieve: Vec<bool>,
}

/// A truncation of `W(C)`, or of `W(C, D)` when built relative to a sieve.
#[derive(Debug)]
pub struct WCategory {
    asm: Arc<Assembler>,
    max_tuple: usize,
    objects: Vec<WObject>,
    index: HashMap<WObject, usize>,
    relative: Option<Relative>,
    homs: Mutex<HashMap<(usize, usize), Arc<Vec<WMorphism>>>>,
    fibers: Mutex<HashMap<(Vec<ObjId>, ObjId), Arc<Vec<Vec<MorId>>>>>,
}

fn tuples(base: &[ObjId], max_tuple: usize, budget: &Budget) -> Result<Vec<WObject>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_tuple {
        let mut next = Vec::new();
        for t in &layer {
            for &o in base {
                budget.tick("tuple enumeration")?;
                let mut u: WObject = t.clone();
                u.push(o);
                next.push(u);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    Ok(out)
}

// Steps a mixed-radix counter; false once it wraps around.
fn advance(counter: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for k in (0..counter.len()).rev() {
        counter[k] += 1;
        if counter[k] < radix(k) {
            return true;
        }
        counter[k] = 0;
    }
    false
}

/// `W(C)` on tuples of length at most `max_tuple`.
pub fn build_w(asm: &Arc<Assembler>, max_tuple: usize, budget: &Budget) -> Result<WCategory> {
    WCategory::new(asm.clone(), max_tuple, None, budget)
}

/// `W(C, D)`: the subcategory of `W(C∖D)` whose fibers complete to finite
/// disjoint covering families of `C` by morphisms with domains in `D`.
pub fn build_w_rel(asm: &Arc<Assembler>, sieve: &[ObjId], max_tuple: usize, budget: &Budget) -> Result<WCategory> {
    let q = quotient(asm, sieve)?;
    let mut in_sieve = vec![false; asm.category().object_count()];
    for &o in sieve {
        in_sieve[o.index()] = true;
    }
    let relative = Relative {
        parent: asm.clone(),
        morphisms: q.embedding.morphisms.clone(),
        objects: q.embedding.objects.clone(),
        in_sieve,
    };
    WCategory::new(q.asm, max_tuple, Some(relative), budget)
}

impl WCategory {
    fn new(asm: Arc<Assembler>, max_tuple: usize, relative: Option<Relative>, budget: &Budget) -> Result<Self> {
        let objects = tuples(&asm.noninitial_objects(), max_tuple, budget)?;
        let index = objects.iter().enumerate().map(|(i, o)| (o.clone(), i)).collect();
        Ok(WCategory {
            asm,
            max_tuple,
            objects,
            index,
            relative,
            homs: Mutex::new(HashMap::new()),
            fibers: Mutex::new(HashMap::new()),
        })
    }

    /// The assembler whose tuples are the objects (`C∖D` for a relative category).
    pub fn assembler(&self) -> &Arc<Assembler> {
        &self.asm
    }

    pub fn max_tuple(&self) -> usize {
        self.max_tuple
    }

    pub fn is_relative(&self) -> bool {
        self.relative.is_some()
    }

    pub fn objects(&self) -> &[WObject] {
        &self.objects
    }

    pub fn object_index(&self, o: &[ObjId]) -> Option<usize> {
        self.index.get(o).copied()
    }

    pub fn describe_object(&self, o: &[ObjId]) -> String {
        let names: Vec<&str> = o.iter().map(|&x| self.asm.object_name(x)).collect();
        format!("({})", names.join(", "))
    }

    /// `W(C∖D)` on the same objects, containing this relative category.
    pub fn unrestricted(&self, budget: &Budget) -> Result<WCategory> {
        WCategory::new(self.asm.clone(), self.max_tuple, None, budget)
    }

    pub fn identity(&self, a: usize) -> WMorphism {
        let o = &self.objects[a];
        let cat = self.asm.category();
        WMorphism { map: (0..o.len()).collect(), components: o.iter().map(|&x| cat.id(x)).collect() }
    }

    pub fn is_identity(&self, f: &WMorphism) -> bool {
        let cat = self.asm.category();
        f.map.iter().enumerate().all(|(i, &j)| i == j) && f.components.iter().all(|&c| cat.is_identity(c))
    }

    /// `g ∘ f`.
    pub fn compose(&self, f: &WMorphism, g: &WMorphism) -> WMorphism {
        let cat = self.asm.category();
        WMorphism {
            map: f.map.iter().map(|&j| g.map[j]).collect(),
            components: f
                .components
                .iter()
                .zip(&f.map)
                .map(|(&c, &j)| cat.compose(c, g.components[j]).expect("composable components"))
                .collect(),
        }
    }

    pub fn describe(&self, f: &WMorphism) -> String {
        let parts: Vec<String> = f
            .map
            .iter()
            .zip(&f.components)
            .map(|(j, &c)| format!("{}↦{}", self.asm.morphism_name(c), j))
            .collect();
        format!("[{}]", parts.join(", "))
    }

    /// All morphisms from object `a` to object `b`, in canonical order.
    pub fn hom(&self, a: usize, b: usize, budget: &Budget) -> Result<Arc<Vec<WMorphism>>> {
        if let Some(h) = self.homs.lock().unwrap().get(&(a, b)) {
            return Ok(h.clone());
        }
        let (src, tgt) = (&self.objects[a], &self.objects[b]);
        let mut out = Vec::new();
        if !(tgt.is_empty() && !src.is_empty()) {
            let mut map = vec![0usize; src.len()];
            loop {
                budget.tick("W hom enumeration")?;
                self.extend_with_map(src, tgt, &map, &mut out, budget)?;
                if !advance(&mut map, |_| tgt.len()) {
                    break;
                }
            }
        }
        out.sort();
        let out = Arc::new(out);
        self.homs.lock().unwrap().insert((a, b), out.clone());
        Ok(out)
    }

    fn extend_with_map(
        &self,
        src: &[ObjId],
        tgt: &[ObjId],
        map: &[usize],
        out: &mut Vec<WMorphism>,
        budget: &Budget,
    ) -> Result<()> {
        let mut per_fiber = Vec::with_capacity(tgt.len());
        for (j, &t) in tgt.iter().enumerate() {
            let members: Vec<usize> = (0..src.len()).filter(|&i| map[i] == j).collect();
            let sources: Vec<ObjId> = members.iter().map(|&i| src[i]).collect();
            let valid = self.fibers(&sources, t, budget)?;
            if valid.is_empty() {
                return Ok(());
            }
            per_fiber.push((members, valid));
        }
        let mut choice = vec![0usize; per_fiber.len()];
        loop {
            let mut components = vec![MorId(0); src.len()];
            for (k, (members, valid)) in per_fiber.iter().enumerate() {
                for (p, &i) in members.iter().enumerate() {
                    components[i] = valid[choice[k]][p];
                }
            }
            out.push(WMorphism { map: map.to_vec(), components });
            if !advance(&mut choice, |k| per_fiber[k].1.len()) {
                return Ok(());
            }
        }
    }

    // Component tuples `sᵢ → t` forming a disjoint covering family (that
    // completes in the parent, for relative categories).
    fn fibers(&self, sources: &[ObjId], t: ObjId, budget: &Budget) -> Result<Arc<Vec<Vec<MorId>>>> {
        let key = (sources.to_vec(), t);
        if let Some(v) = self.fibers.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let cat = self.asm.category();
        let homs: Vec<Vec<MorId>> = sources.iter().map(|&s| cat.hom(s, t)).collect();
        let mut out = Vec::new();
        let mut pick = vec![0usize; sources.len()];
        if homs.iter().all(|h| !h.is_empty()) {
            loop {
                budget.tick("W fiber enumeration")?;
                let members: Vec<MorId> = pick.iter().zip(&homs).map(|(&p, h)| h[p]).collect();
                if self.valid_fiber(t, &members, budget)? {
                    out.push(members);
                }
                if !advance(&mut pick, |k| homs[k].len()) {
                    break;
                }
            }
        }
        let out = Arc::new(out);
        self.fibers.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    fn valid_fiber(&self, t: ObjId, members: &[MorId], budget: &Budget) -> Result<bool> {
        let mut sorted = members.to_vec();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Ok(false);
        }
        let fam = crate::assembler::CoverFamily { target: t, members: sorted };
        if !self.asm.is_disjoint_family(&fam) || !self.asm.is_covering_family(&fam, budget)? {
            return Ok(false);
        }
        let Some(rel) = &self.relative else { return Ok(true) };
        let pc = rel.parent.category();
        let target = rel.objects[t.index()];
        let forced: Vec<MorId> = members.iter().map(|m| rel.morphisms[m.index()]).collect();
        let candidates: Vec<MorId> =
            pc.hom_into(target).iter().copied().filter(|&f| rel.in_sieve[pc.src(f).index()]).collect();
        let mut search = FamilySearch::new(&rel.parent, target, candidates);
        search.forced = forced;
        search.limit = Some(1);
        Ok(!search.run(budget)?.is_empty())
    }

    /// Every morphism between objects of the truncation, with its ends.
    pub fn all_morphisms(&self, budget: &Budget) -> Result<Vec<(usize, usize, WMorphism)>> {
        let mut out = Vec::new();
        for a in 0..self.objects.len() {
            for b in 0..self.objects.len() {
                for f in self.hom(a, b, budget)?.iter() {
                    out.push((a, b, f.clone()));
                }
            }
        }
        Ok(out)
    }

    /// Whether `f: a → b` has an inverse: a bijective index map with
    /// invertible components.
    pub fn is_isomorphism(&self, a: usize, b: usize, f: &WMorphism) -> bool {
        let (n, m) = (self.objects[a].len(), self.objects[b].len());
        let mut hit = vec![false; m];
        for &j in &f.map {
            if std::mem::replace(&mut hit[j], true) {
                return false;
            }
        }
        n == m && f.components.iter().all(|&c| self.asm.is_iso(c))
    }

    /// Automorphisms of object `a`.
    pub fn automorphisms(&self, a: usize, budget: &Budget) -> Result<Vec<WMorphism>> {
        Ok(self.hom(a, a, budget)?.iter().filter(|f| self.is_isomorphism(a, a, f)).cloned().collect())
    }

    /// One morphism per orbit of `Hom(a, b)` under precomposition with
    /// automorphisms of `a`.
    pub fn orbit_representatives(&self, a: usize, b: usize, budget: &Budget) -> Result<Vec<WMorphism>> {
        let auts = self.automorphisms(a, budget)?;
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for f in self.hom(a, b, budget)?.iter() {
            if seen.contains(f) {
                continue;
            }
            for alpha in &auts {
                budget.tick("automorphism orbits")?;
                seen.insert(self.compose(alpha, f));
            }
            out.push(f.clone());
        }
        Ok(out)
    }
}

/// Connected components of the truncation.
#[derive(Clone, Debug)]
pub struct Components {
    pub component_of: Vec<usize>,
    /// The least object of each component.
    pub representatives: Vec<usize>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }
}

/// Components of `W` under zigzags of morphisms within the truncation.
pub fn pi0_wcat(w: &WCategory, budget: &Budget) -> Result<Components> {
    let n = w.objects.len();
    let mut uf = UnionFind::<usize>::new(n);
    for a in 0..n {
        for b in 0..n {
            if uf.equiv(a, b) {
                continue;
            }
            if !w.hom(a, b, budget)?.is_empty() {
                uf.union(a, b);
            }
        }
    }
    let mut rep_of_root = HashMap::new();
    let mut representatives = Vec::new();
    let component_of = (0..n)
        .map(|a| {
            *rep_of_root.entry(uf.find(a)).or_insert_with(|| {
                representatives.push(a);
                representatives.len() - 1
            })
        })
        .collect();
    Ok(Components { component_of, representatives })
}

/// Monomorphy and square completion within the truncation.
#[derive(Clone, Debug, Default)]
pub struct WPropertiesReport {
    pub morphisms: usize,
    /// `(f, g, h)` with `f ∘ g = f ∘ h` and `g ≠ h`, as descriptions.
    pub non_monic: Vec<String>,
    pub cospans: usize,
    /// Cospans `(a, c, b)` with no completion among truncated objects.
    pub uncompleted: Vec<(usize, usize, usize)>,
}

impl WPropertiesReport {
    pub fn all_monic(&self) -> bool {
        self.non_monic.is_empty()
    }

    /// All cospans were completed; otherwise the bound may be to blame.
    pub fn squares_complete(&self) -> bool {
        self.uncompleted.is_empty()
    }
}

impl fmt::Display for WPropertiesReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(out, "(1) monomorphisms: {} ({} morphisms)", if self.all_monic() { "OK" } else { "FAIL" }, self.morphisms)?;
        let sq = if self.squares_complete() { "OK".to_string() } else { format!("inconclusive at bound ({} open)", self.uncompleted.len()) };
        write!(out, "(2) square completion: {sq} ({} cospans)", self.cospans)
    }
}

/// Checks that every morphism is monic and every cospan completes to a
/// commutative square, exhaustively within the truncation.
pub fn check_w_properties(w: &WCategory, budget: &Budget) -> Result<WPropertiesReport> {
    let n = w.objects.len();
    let mut report = WPropertiesReport::default();
    for a in 0..n {
        for b in 0..n {
            report.morphisms += w.hom(a, b, budget)?.len();
            // f ∘ α is monic exactly when f is
            let fs = w.orbit_representatives(a, b, budget)?;
            if fs.is_empty() {
                continue;
            }
            for c in 0..n {
                let gs = w.hom(c, a, budget)?;
                for f in fs.iter() {
                    let mut seen: HashMap<WMorphism, &WMorphism> = HashMap::new();
                    for g in gs.iter() {
                        budget.tick("monomorphism check")?;
                        if let Some(h) = seen.insert(w.compose(g, f), g) {
                            report.non_monic.push(format!("{} identifies {} and {}", w.describe(f), w.describe(g), w.describe(h)));
                        }
                    }
                }
            }
        }
    }
    for c in 0..n {
        for a in 0..n {
            // completing (f, g) also completes (f ∘ α, g ∘ β)
            let fs = w.orbit_representatives(a, c, budget)?;
            for b in a..n {
                let gs = w.orbit_representatives(b, c, budget)?;
                for f in fs.iter() {
                    for g in gs.iter() {
                        report.cospans += 1;
                        if !completes(w, a, f, b, g, budget)? {
                            report.uncompleted.push((a, c, b));
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

fn completes(w: &WCategory, a: usize, f: &WMorphism, b: usize, g: &WMorphism, budget: &Budget) -> Result<bool> {
    for d in 0..w.objects.len() {
        let ps = w.hom(d, a, budget)?;
        if ps.is_empty() {
            continue;
        }
        let qs = w.hom(d, b, budget)?;
        let reach: std::collections::HashSet<WMorphism> = qs.iter().map(|q| w.compose(q, g)).collect();
        for p in ps.iter() {
            budget.tick("square completion")?;
            if reach.contains(&w.compose(p, f)) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Hom-set sizes of `W(⋁ Cₓ)` against the products over the summands.
#[derive(Clone, Debug, Default)]
pub struct DecompositionReport {
    pub pairs: usize,
    /// `(a, b, |Hom(a, b)|, Π |Hom(aₓ, bₓ)|)` where the two differ.
    pub mismatches: Vec<(usize, usize, usize, usize)>,
}

impl DecompositionReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Splits every tuple of the wedge by summand and compares hom-set sizes.
/// `parts[x]` must be `W` of the `x`-th summand with the same bound.
pub fn check_wedge_decomposition(
    wedge: &Wedge,
    whole: &WCategory,
    parts: &[WCategory],
    budget: &Budget,
) -> Result<DecompositionReport> {
    if !Arc::ptr_eq(whole.assembler(), &wedge.asm) || parts.len() != wedge.injections.len() {
        return Err(Error::Parameter("W categories do not match the wedge".into()));
    }
    let split = |o: &WObject| -> Vec<WObject> {
        let mut out = vec![Vec::new(); parts.len()];
        for &x in o {
            let (k, local) = wedge.origin[x.index()].expect("noninitial");
            out[k].push(local);
        }
        out
    };
    let mut report = DecompositionReport::default();
    let n = whole.objects.len();
    for a in 0..n {
        let sa = split(&whole.objects[a]);
        for b in 0..n {
            let sb = split(&whole.objects[b]);
            let mut expected = 1usize;
            for (k, w) in parts.iter().enumerate() {
                let (Some(x), Some(y)) = (w.object_index(&sa[k]), w.object_index(&sb[k])) else {
                    return Err(Error::Parameter("summand W truncated below the wedge".into()));
                };
                expected *= w.hom(x, y, budget)?.len();
            }
            let actual = whole.hom(a, b, budget)?.len();
            report.pairs += 1;
            if actual != expected {
                report.mismatches.push((a, b, actual, expected));
            }
        }
    }
    Ok(report)
}

/// A finite preorder given by its relation matrix.
#[derive(Clone, Debug)]
pub struct Preorder {
    pub leq: Vec<Vec<bool>>,
}

impl Preorder {
    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    /// A pair without a common lower bound, if any.
    pub fn uncovered_pair(&self) -> Option<(usize, usize)> {
        let n = self.len();
        for i in 0..n {
            for j in i + 1..n {
                if !(0..n).any(|k| self.leq[k][i] && self.leq[k][j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Nonempty, and every pair has a common lower bound.
    pub fn is_cofiltered(&self) -> bool {
        !self.is_empty() && self.uncovered_pair().is_none()
    }
}

/// The comma category `W/y` restricted to the truncation.
#[derive(Clone, Debug)]
pub struct Comma {
    /// `(source object, morphism to y)` for every element.
    pub elements: Vec<(usize, WMorphism)>,
    pub preorder: Preorder,
    /// The comma category is thin (it is a preorder).
    pub thin: bool,
}

/// Whether a truncated comma category is cofiltered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cofilteredness {
    Cofiltered,
    /// A pair had no common lower bound among truncated objects.
    InconclusiveAtBound(usize, usize),
    Empty,
}

impl Comma {
    pub fn cofilteredness(&self) -> Cofilteredness {
        if self.preorder.is_empty() {
            return Cofilteredness::Empty;
        }
        match self.preorder.uncovered_pair() {
            None => Cofilteredness::Cofiltered,
            Some((i, j)) => Cofilteredness::InconclusiveAtBound(i, j),
        }
    }
}

pub fn comma_over(w: &WCategory, y: usize, budget: &Budget) -> Result<Comma> {
    let mut elements = Vec::new();
    for x in 0..w.objects.len() {
        for f in w.hom(x, y, budget)?.iter() {
            elements.push((x, f.clone()));
        }
    }
    let n = elements.len();
    let mut leq = vec![vec![false; n]; n];
    let mut thin = true;
    for i in 0..n {
        for j in 0..n {
            let (xi, fi) = &elements[i];
            let (xj, fj) = &elements[j];
            budget.tick("comma category")?;
            let count = w.hom(*xi, *xj, budget)?.iter().filter(|h| &w.compose(h, fj) == fi).count();
            leq[i][j] = count > 0;
            thin &= count <= 1;
        }
    }
    Ok(Comma { elements, preorder: Preorder { leq }, thin })
}
