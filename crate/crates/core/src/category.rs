//! Finite categories stored as explicit composition tables.
//!
//! Objects and morphisms are identified by strings and numbered in
//! lexicographic order of their names, so the numeric order of [`ObjId`] and
//! [`MorId`] is the canonical order used in every report.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// Index of an object in a [`FiniteCategory`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjId(pub u32);

/// Index of a morphism in a [`FiniteCategory`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorId(pub u32);

impl ObjId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl MorId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub(crate) const NONE: u32 = u32::MAX;

/// Incremental construction of a [`FiniteCategory`] with builder-local indices.
#[derive(Debug, Default, Clone)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    object_names: HashMap<String, usize>,
    morphisms: Vec<(String, usize, usize)>,
    morphism_names: HashMap<String, usize>,
    identities: Vec<(usize, usize)>,
    compositions: Vec<(usize, usize, usize)>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(&mut self, name: impl Into<String>) -> Result<usize> {
        let name = name.into();
        if self.object_names.contains_key(&name) {
            return Err(Error::Duplicate(name));
        }
        self.object_names.insert(name.clone(), self.objects.len());
        self.objects.push(name);
        Ok(self.objects.len() - 1)
    }

    pub fn morphism(&mut self, name: impl Into<String>, src: usize, tgt: usize) -> Result<usize> {
        let name = name.into();
        if self.morphism_names.contains_key(&name) {
            return Err(Error::Duplicate(name));
        }
        if src >= self.objects.len() || tgt >= self.objects.len() {
            return Err(Error::UnknownObject(format!("endpoint of `{name}`")));
        }
        self.morphism_names.insert(name.clone(), self.morphisms.len());
        self.morphisms.push((name, src, tgt));
        Ok(self.morphisms.len() - 1)
    }

    pub fn identity(&mut self, object: usize, morphism: usize) {
        self.identities.push((object, morphism));
    }

    /// Record `second ∘ first = result`.
    pub fn compose(&mut self, first: usize, second: usize, result: usize) {
        self.compositions.push((first, second, result));
    }

    pub fn find_object(&self, name: &str) -> Option<usize> {
        self.object_names.get(name).copied()
    }

    pub fn find_morphism(&self, name: &str) -> Option<usize> {
        self.morphism_names.get(name).copied()
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn morphism_endpoints(&self, m: usize) -> (usize, usize) {
        (self.morphisms[m].1, self.morphisms[m].2)
    }

    pub fn build(self) -> FiniteCategory {
        self.build_with_maps().0
    }

    /// Builds the category and returns where each builder index ended up.
    pub fn build_with_maps(self) -> (FiniteCategory, Vec<ObjId>, Vec<MorId>) {
        let mut obj_order: Vec<usize> = (0..self.objects.len()).collect();
        obj_order.sort_by(|&a, &b| self.objects[a].cmp(&self.objects[b]));
        let mut obj_new = vec![0u32; self.objects.len()];
        for (new, &old) in obj_order.iter().enumerate() {
            obj_new[old] = new as u32;
        }
        let mut mor_order: Vec<usize> = (0..self.morphisms.len()).collect();
        mor_order.sort_by(|&a, &b| self.morphisms[a].0.cmp(&self.morphisms[b].0));
        let mut mor_new = vec![0u32; self.morphisms.len()];
        for (new, &old) in mor_order.iter().enumerate() {
            mor_new[old] = new as u32;
        }

        let objects: Vec<String> = obj_order.iter().map(|&o| self.objects[o].clone()).collect();
        let object_index = objects
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), ObjId(i as u32)))
            .collect();
        let mut mor_names = Vec::with_capacity(mor_order.len());
        let mut src = Vec::with_capacity(mor_order.len());
        let mut tgt = Vec::with_capacity(mor_order.len());
        for &old in &mor_order {
            let (name, s, t) = &self.morphisms[old];
            mor_names.push(name.clone());
            src.push(ObjId(obj_new[*s]));
            tgt.push(ObjId(obj_new[*t]));
        }
        let mor_index = mor_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), MorId(i as u32)))
            .collect();

        let n = objects.len();
        let mut hom_into = vec![Vec::new(); n];
        let mut hom_from = vec![Vec::new(); n];
        let mut position = vec![0u32; mor_names.len()];
        for f in 0..mor_names.len() {
            position[f] = hom_into[tgt[f].index()].len() as u32;
            hom_into[tgt[f].index()].push(MorId(f as u32));
            hom_from[src[f].index()].push(MorId(f as u32));
        }

        let mut stray = Vec::new();
        let mut identity = vec![None; n];
        for &(o, m) in &self.identities {
            let o = ObjId(obj_new[o]);
            let m = MorId(mor_new[m]);
            if src[m.index()] != o || tgt[m.index()] != o {
                stray.push(Violation::IdentityNotEndo {
                    object: objects[o.index()].clone(),
                    morphism: mor_names[m.index()].clone(),
                });
            } else if identity[o.index()].is_some() && identity[o.index()] != Some(m) {
                stray.push(Violation::DuplicateIdentity { object: objects[o.index()].clone() });
            } else {
                identity[o.index()] = Some(m);
            }
        }

        let mut compose_into: Vec<Vec<u32>> = (0..mor_names.len())
            .map(|f| vec![NONE; hom_into[src[f].index()].len()])
            .collect();
        for &(a, b, r) in &self.compositions {
            let (a, b, r) = (mor_new[a] as usize, mor_new[b] as usize, mor_new[r] as usize);
            let names = || (mor_names[a].clone(), mor_names[b].clone(), mor_names[r].clone());
            if tgt[a] != src[b] {
                let (first, second, result) = names();
                stray.push(Violation::NonComposableEntry { first, second, result });
            } else if src[r] != src[a] || tgt[r] != tgt[b] {
                let (first, second, result) = names();
                stray.push(Violation::CompositeEndpoints { first, second, result });
            } else {
                let slot = &mut compose_into[b][position[a] as usize];
                if *slot == NONE {
                    *slot = position[r];
                } else if *slot != position[r] {
                    let (first, second, result) = names();
                    stray.push(Violation::ConflictingComposite { first, second, result });
                }
            }
        }

        let cat = FiniteCategory {
            objects,
            object_index,
            mor_names,
            mor_index,
            src,
            tgt,
            identity,
            hom_into,
            hom_from,
            position,
            compose_into,
            stray,
        };
        let obj_map = obj_new.into_iter().map(ObjId).collect();
        let mor_map = mor_new.into_iter().map(MorId).collect();
        (cat, obj_map, mor_map)
    }
}

/// A violated category law, with the offending names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingIdentity { object: String },
    DuplicateIdentity { object: String },
    IdentityNotEndo { object: String, morphism: String },
    IncompleteComposition { first: String, second: String },
    NonComposableEntry { first: String, second: String, result: String },
    CompositeEndpoints { first: String, second: String, result: String },
    ConflictingComposite { first: String, second: String, result: String },
    IdentityLaw { identity: String, morphism: String },
    Associativity { f: String, g: String, h: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingIdentity { object } => write!(out, "missing identity on {object}"),
            Violation::DuplicateIdentity { object } => write!(out, "two identities declared on {object}"),
            Violation::IdentityNotEndo { object, morphism } => {
                write!(out, "identity {morphism} of {object} is not an endomorphism of it")
            }
            Violation::IncompleteComposition { first, second } => {
                write!(out, "incomplete composition ({first},{second})")
            }
            Violation::NonComposableEntry { first, second, result } => {
                write!(out, "composition entry ({first},{second}) -> {result} for a non-composable pair")
            }
            Violation::CompositeEndpoints { first, second, result } => {
                write!(out, "composite ({first},{second}) -> {result} has wrong endpoints")
            }
            Violation::ConflictingComposite { first, second, result } => {
                write!(out, "conflicting composite ({first},{second}) -> {result}")
            }
            Violation::IdentityLaw { identity, morphism } => {
                write!(out, "identity law fails for {identity} and {morphism}")
            }
            Violation::Associativity { f, g, h } => {
                write!(out, "associativity fails for ({f},{g},{h})")
            }
        }
    }
}

/// Result of [`FiniteCategory::validate`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A cone `f ∘ left = g ∘ right` over a cospan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub apex: ObjId,
    pub left: MorId,
    pub right: MorId,
}

/// A terminal cone over a cospan, with the factorization of every other cone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackCone {
    pub apex: ObjId,
    pub leg_left: MorId,
    pub leg_right: MorId,
    pub mediating: Vec<(Cone, MorId)>,
}

/// A finite category with a (possibly partial, before validation) composition table.
#[derive(Debug, Clone)]
pub struct FiniteCategory {
    objects: Vec<String>,
    object_index: HashMap<String, ObjId>,
    mor_names: Vec<String>,
    mor_index: HashMap<String, MorId>,
    src: Vec<ObjId>,
    tgt: Vec<ObjId>,
    identity: Vec<Option<MorId>>,
    hom_into: Vec<Vec<MorId>>,
    hom_from: Vec<Vec<MorId>>,
    position: Vec<u32>,
    // compose_into[f][p] is the position of f ∘ hom_into[src f][p] in hom_into[tgt f].
    compose_into: Vec<Vec<u32>>,
    stray: Vec<Violation>,
}

impl FiniteCategory {
    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.mor_names.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> + '_ {
        (0..self.objects.len() as u32).map(ObjId)
    }

    pub fn morphisms(&self) -> impl Iterator<Item = MorId> + '_ {
        (0..self.mor_names.len() as u32).map(MorId)
    }

    pub fn object_name(&self, o: ObjId) -> &str {
        &self.objects[o.index()]
    }

    pub fn morphism_name(&self, f: MorId) -> &str {
        &self.mor_names[f.index()]
    }

    pub fn object_id(&self, name: &str) -> Result<ObjId> {
        self.object_index.get(name).copied().ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn morphism_id(&self, name: &str) -> Result<MorId> {
        self.mor_index.get(name).copied().ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }

    pub fn src(&self, f: MorId) -> ObjId {
        self.src[f.index()]
    }

    pub fn tgt(&self, f: MorId) -> ObjId {
        self.tgt[f.index()]
    }

    pub fn identity(&self, o: ObjId) -> Option<MorId> {
        self.identity[o.index()]
    }

    /// The identity of `o`; the category must have passed structural validation.
    pub fn id(&self, o: ObjId) -> MorId {
        self.identity[o.index()].expect("identity present after validation")
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identity[self.src(f).index()] == Some(f)
    }

    /// Morphisms with target `o`, in increasing [`MorId`] order.
    pub fn hom_into(&self, o: ObjId) -> &[MorId] {
        &self.hom_into[o.index()]
    }

    pub fn hom_from(&self, o: ObjId) -> &[MorId] {
        &self.hom_from[o.index()]
    }

    /// Position of `f` inside `hom_into(tgt f)`.
    pub fn position(&self, f: MorId) -> usize {
        self.position[f.index()] as usize
    }

    pub(crate) fn composite_positions(&self, f: MorId) -> &[u32] {
        &self.compose_into[f.index()]
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> Vec<MorId> {
        self.hom_into(b).iter().copied().filter(|&f| self.src(f) == a).collect()
    }

    /// `second ∘ first`, if the pair is composable and the table defines it.
    pub fn compose(&self, first: MorId, second: MorId) -> Option<MorId> {
        if self.tgt(first) != self.src(second) {
            return None;
        }
        let p = self.compose_into[second.index()][self.position(first)];
        (p != NONE).then(|| self.hom_into[self.tgt(second).index()][p as usize])
    }

    /// Some `h` with `f ∘ h = m`.
    pub fn factor_through(&self, f: MorId, m: MorId) -> Option<MorId> {
        if self.tgt(f) != self.tgt(m) {
            return None;
        }
        let target = self.position(m) as u32;
        let slots = &self.compose_into[f.index()];
        self.hom_into(self.src(f))
            .iter()
            .enumerate()
            .find(|&(p, &h)| slots[p] == target && self.src(h) == self.src(m))
            .map(|(_, &h)| h)
    }

    pub fn check_morphism(&self, f: MorId) -> Result<()> {
        if f.index() < self.mor_names.len() {
            Ok(())
        } else {
            Err(Error::UnknownMorphism(format!("#{}", f.0)))
        }
    }

    /// True iff `f ∘ g = f ∘ h` forces `g = h`.
    pub fn is_monomorphism(&self, f: MorId) -> Result<bool> {
        self.check_morphism(f)?;
        Ok(self.monomorphism_witness(f).is_none())
    }

    /// A pair `g ≠ h` with `f ∘ g = f ∘ h`, if one exists.
    pub fn monomorphism_witness(&self, f: MorId) -> Option<(MorId, MorId)> {
        let mut seen: HashMap<u32, MorId> = HashMap::new();
        for (p, &h) in self.hom_into(self.src(f)).iter().enumerate() {
            let slot = self.compose_into[f.index()][p];
            if slot == NONE {
                continue;
            }
            if let Some(&g) = seen.get(&slot) {
                return Some((g, h));
            }
            seen.insert(slot, h);
        }
        None
    }

    /// True iff `g ∘ f = h ∘ f` forces `g = h`.
    pub fn is_epimorphism(&self, f: MorId) -> Result<bool> {
        self.check_morphism(f)?;
        let mut seen = HashSet::new();
        for &h in self.hom_from(self.tgt(f)) {
            if let Some(c) = self.compose(f, h) {
                if !seen.insert(c) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// All cones `(X, p, q)` with `f ∘ p = g ∘ q`.
    pub fn cones(&self, f: MorId, g: MorId) -> Result<Vec<Cone>> {
        self.check_morphism(f)?;
        self.check_morphism(g)?;
        if self.tgt(f) != self.tgt(g) {
            return Err(Error::NotCospan(
                self.morphism_name(f).to_string(),
                self.morphism_name(g).to_string(),
            ));
        }
        let mut out = Vec::new();
        for x in self.objects() {
            let left = self.hom(x, self.src(f));
            let right = self.hom(x, self.src(g));
            for &p in &left {
                for &q in &right {
                    if let (Some(a), Some(b)) = (self.compose(p, f), self.compose(q, g)) {
                        if a == b {
                            out.push(Cone { apex: x, left: p, right: q });
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// The terminal cone over `(f, g)`, if one exists.
    ///
    /// Among several terminal cones (all isomorphic) the one with an identity
    /// left leg is preferred, then the first in canonical order.
    pub fn pullback(&self, f: MorId, g: MorId) -> Result<Option<PullbackCone>> {
        let cones = self.cones(f, g)?;
        let mut best: Option<PullbackCone> = None;
        for cand in &cones {
            let mut mediating = Vec::with_capacity(cones.len());
            let mut terminal = true;
            for other in &cones {
                let mut found = None;
                let mut count = 0;
                for m in self.hom(other.apex, cand.apex) {
                    if self.compose(m, cand.left) == Some(other.left)
                        && self.compose(m, cand.right) == Some(other.right)
                    {
                        count += 1;
                        found = Some(m);
                    }
                }
                if count != 1 {
                    terminal = false;
                    break;
                }
                mediating.push((other.clone(), found.unwrap()));
            }
            if !terminal {
                continue;
            }
            let cone = PullbackCone { apex: cand.apex, leg_left: cand.left, leg_right: cand.right, mediating };
            let better = match &best {
                None => true,
                Some(b) => !self.is_identity(b.leg_left) && self.is_identity(cone.leg_left),
            };
            if better {
                best = Some(cone);
            }
        }
        Ok(best)
    }

    /// Missing identities, malformed or conflicting table entries, gaps in the
    /// table, and identity-law failures. Associativity is left to [`Self::validate`].
    pub fn structural_violations(&self) -> Vec<Violation> {
        let mut out = self.stray.clone();
        for o in self.objects() {
            if self.identity(o).is_none() {
                out.push(Violation::MissingIdentity { object: self.object_name(o).to_string() });
            }
        }
        for f in self.morphisms() {
            for (p, &h) in self.hom_into(self.src(f)).iter().enumerate() {
                if self.compose_into[f.index()][p] == NONE {
                    out.push(Violation::IncompleteComposition {
                        first: self.morphism_name(h).to_string(),
                        second: self.morphism_name(f).to_string(),
                    });
                }
            }
        }
        for o in self.objects() {
            let Some(e) = self.identity(o) else { continue };
            for &f in self.hom_into(o) {
                if matches!(self.compose(f, e), Some(c) if c != f) {
                    out.push(Violation::IdentityLaw {
                        identity: self.morphism_name(e).to_string(),
                        morphism: self.morphism_name(f).to_string(),
                    });
                }
            }
            for &f in self.hom_from(o) {
                if matches!(self.compose(e, f), Some(c) if c != f) {
                    out.push(Violation::IdentityLaw {
                        identity: self.morphism_name(e).to_string(),
                        morphism: self.morphism_name(f).to_string(),
                    });
                }
            }
        }
        out
    }

    /// Every violated category law.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = self.structural_violations();
        // (h ∘ g) ∘ f = h ∘ (g ∘ f) for f: A → B, g: B → C, h: C → D.
        for g in self.morphisms() {
            for &f in self.hom_into(self.src(g)) {
                let Some(gf) = self.compose(f, g) else { continue };
                for &h in self.hom_from(self.tgt(g)) {
                    let (Some(hg), Some(left)) = (self.compose(g, h), self.compose(gf, h)) else {
                        continue;
                    };
                    if self.compose(f, hg) != Some(left) {
                        violations.push(Violation::Associativity {
                            f: self.morphism_name(f).to_string(),
                            g: self.morphism_name(g).to_string(),
                            h: self.morphism_name(h).to_string(),
                        });
                    }
                }
            }
        }
        ValidationReport { violations }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_object() -> FiniteCategory {
        let mut b = CategoryBuilder::new();
        let x = b.object("x").unwrap();
        let e = b.morphism("id:x", x, x).unwrap();
        b.identity(x, e);
        b.compose(e, e, e);
        b.build()
    }

    #[test]
    fn single_identity_is_valid() {
        assert!(one_object().validate().is_valid());
    }

    #[test]
    fn missing_composite_is_reported() {
        let mut b = CategoryBuilder::new();
        let x = b.object("x").unwrap();
        let y = b.object("y").unwrap();
        let ex = b.morphism("id:x", x, x).unwrap();
        let ey = b.morphism("id:y", y, y).unwrap();
        let f = b.morphism("f", x, y).unwrap();
        b.identity(x, ex);
        b.identity(y, ey);
        b.compose(ex, ex, ex);
        b.compose(ey, ey, ey);
        b.compose(ex, f, f);
        let report = b.build().validate();
        let text: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        assert_eq!(text, vec!["incomplete composition (f,id:y)".to_string()]);
    }

    // Two parallel arrows a, b: x → y and q: y → z with q∘a = q∘b.
    fn coequalizing() -> FiniteCategory {
        let mut c = CategoryBuilder::new();
        let x = c.object("x").unwrap();
        let y = c.object("y").unwrap();
        let z = c.object("z").unwrap();
        let ids: Vec<usize> =
            [x, y, z].iter().map(|&o| c.morphism(format!("id:{o}"), o, o).unwrap()).collect();
        for (o, &e) in [x, y, z].iter().zip(&ids) {
            c.identity(*o, e);
            c.compose(e, e, e);
        }
        let a = c.morphism("a", x, y).unwrap();
        let b = c.morphism("b", x, y).unwrap();
        let q = c.morphism("q", y, z).unwrap();
        let r = c.morphism("r", x, z).unwrap();
        for m in [a, b, q, r] {
            let (s, t) = c.morphism_endpoints(m);
            c.compose(ids[s], m, m);
            c.compose(m, ids[t], m);
        }
        c.compose(a, q, r);
        c.compose(b, q, r);
        c.build()
    }

    #[test]
    fn coequalizing_arrow_is_not_monic() {
        let cat = coequalizing();
        assert!(cat.validate().is_valid());
        let q = cat.morphism_id("q").unwrap();
        assert!(!cat.is_monomorphism(q).unwrap());
        assert!(cat.is_monomorphism(cat.morphism_id("a").unwrap()).unwrap());
        assert!(cat.is_monomorphism(cat.id(cat.object_id("y").unwrap())).unwrap());
    }

    #[test]
    fn pullback_of_monic_along_itself_has_identity_legs() {
        let cat = coequalizing();
        let a = cat.morphism_id("a").unwrap();
        let pb = cat.pullback(a, a).unwrap().unwrap();
        assert_eq!(pb.apex, cat.src(a));
        assert!(cat.is_identity(pb.leg_left) && cat.is_identity(pb.leg_right));
    }

    #[test]
    fn non_cospan_is_rejected() {
        let cat = coequalizing();
        let a = cat.morphism_id("a").unwrap();
        let q = cat.morphism_id("q").unwrap();
        assert!(matches!(cat.pullback(a, q), Err(Error::NotCospan(..))));
    }
}
