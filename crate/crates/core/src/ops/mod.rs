//! Morphisms of assemblers and the constructions built from them: wedges,
//! smash products with pointed sets, products, full subassemblers, sieves
//! and quotients by sieves.

mod build;
mod constructions;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::assembler::{Assembler, CoverFamily};
use crate::budget::Budget;
use crate::category::{MorId, ObjId};
use crate::error::{Error, Result};

pub use constructions::{
    coproduct, full_subassembler, has_complements, is_sieve, is_subassembler, product, quotient, smash,
    wedge_name, ComplementsReport, Product, Quotient, SieveWitness, SubassemblerReport, Subassembler, Wedge,
};

/// A functor between assemblers, given on objects and morphisms.
#[derive(Clone, Debug)]
pub struct AssemblerMorphism {
    pub source: Arc<Assembler>,
    pub target: Arc<Assembler>,
    pub objects: Vec<ObjId>,
    pub morphisms: Vec<MorId>,
}

/// One way in which a functor fails to be a morphism of assemblers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismViolation {
    Endpoints(String),
    Identity(String),
    Composition { first: String, second: String },
    Initial,
    Continuity(String),
    Disjointness(String, String),
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismViolation::Endpoints(f) => write!(out, "endpoints of {f} not preserved"),
            MorphismViolation::Identity(o) => write!(out, "identity of {o} not preserved"),
            MorphismViolation::Composition { first, second } => {
                write!(out, "composition not preserved at ({first},{second})")
            }
            MorphismViolation::Initial => write!(out, "initial object not preserved"),
            MorphismViolation::Continuity(fam) => write!(out, "not continuous: image of {fam} does not cover"),
            MorphismViolation::Disjointness(f, g) => {
                write!(out, "disjointness violated: {f} and {g} have non-disjoint images")
            }
        }
    }
}

/// Outcome of [`AssemblerMorphism::check`].
#[derive(Clone, Debug, Default)]
pub struct MorphismReport {
    pub violations: Vec<MorphismViolation>,
    /// Covering families whose images were checked.
    pub families_checked: usize,
    /// The continuity check ran out of budget.
    pub inconclusive: bool,
}

impl MorphismReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty() && !self.inconclusive
    }

    pub fn preserves_disjointness(&self) -> bool {
        !self.violations.iter().any(|v| matches!(v, MorphismViolation::Disjointness(..)))
    }
}

impl fmt::Display for MorphismReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(out, "morphism of assemblers ({} covering families checked)", self.families_checked);
        }
        if self.inconclusive {
            writeln!(out, "continuity inconclusive: budget exhausted")?;
        }
        for v in self.violations.iter().take(10) {
            writeln!(out, "{v}")?;
        }
        if self.violations.len() > 10 {
            writeln!(out, "... and {} more", self.violations.len() - 10)?;
        }
        Ok(())
    }
}

impl AssemblerMorphism {
    pub fn new(
        source: Arc<Assembler>,
        target: Arc<Assembler>,
        objects: Vec<ObjId>,
        morphisms: Vec<MorId>,
    ) -> Result<Self> {
        let (sc, tc) = (source.category(), target.category());
        if objects.len() != sc.object_count() || morphisms.len() != sc.morphism_count() {
            return Err(Error::InvalidMorphism("maps must be total on the source".into()));
        }
        if objects.iter().any(|o| o.index() >= tc.object_count())
            || morphisms.iter().any(|m| m.index() >= tc.morphism_count())
        {
            return Err(Error::InvalidMorphism("image outside the target".into()));
        }
        Ok(AssemblerMorphism { source, target, objects, morphisms })
    }

    pub fn identity(asm: &Arc<Assembler>) -> Self {
        let cat = asm.category();
        AssemblerMorphism {
            source: asm.clone(),
            target: asm.clone(),
            objects: cat.objects().collect(),
            morphisms: cat.morphisms().collect(),
        }
    }

    /// Sends everything to the equally named object or morphism of `target`.
    pub fn by_names(source: Arc<Assembler>, target: Arc<Assembler>) -> Result<Self> {
        AssemblerMorphism::from_name_maps(source, target, &BTreeMap::new(), &BTreeMap::new())
    }

    /// Builds a morphism from partial name maps; unlisted names map to equal
    /// names. Identities go to identities, the initial object to the initial
    /// object and morphisms out of it to the unique ones in the target.
    pub fn from_name_maps(
        source: Arc<Assembler>,
        target: Arc<Assembler>,
        objects: &BTreeMap<String, String>,
        morphisms: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let (sc, tc) = (source.category(), target.category());
        let mut omap = Vec::with_capacity(sc.object_count());
        for o in sc.objects() {
            if o == source.initial() {
                omap.push(target.initial());
                continue;
            }
            let name = sc.object_name(o);
            omap.push(tc.object_id(objects.get(name).map_or(name, String::as_str))?);
        }
        let mut mmap = Vec::with_capacity(sc.morphism_count());
        for f in sc.morphisms() {
            let image = if sc.is_identity(f) {
                tc.id(omap[sc.src(f).index()])
            } else if sc.src(f) == source.initial() {
                let t = omap[sc.tgt(f).index()];
                *tc.hom(target.initial(), t).first().ok_or_else(|| {
                    Error::InvalidMorphism(format!("no morphism from the initial object to {}", tc.object_name(t)))
                })?
            } else {
                let name = sc.morphism_name(f);
                tc.morphism_id(morphisms.get(name).map_or(name, String::as_str))?
            };
            mmap.push(image);
        }
        AssemblerMorphism::new(source, target, omap, mmap)
    }

    pub fn object(&self, o: ObjId) -> ObjId {
        self.objects[o.index()]
    }

    pub fn morphism(&self, f: MorId) -> MorId {
        self.morphisms[f.index()]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &AssemblerMorphism) -> Result<AssemblerMorphism> {
        if !Arc::ptr_eq(&self.target, &other.source) {
            return Err(Error::InvalidMorphism("morphisms are not composable".into()));
        }
        Ok(AssemblerMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            objects: self.objects.iter().map(|&o| other.object(o)).collect(),
            morphisms: self.morphisms.iter().map(|&f| other.morphism(f)).collect(),
        })
    }

    /// Whether two morphisms agree on every object and morphism.
    pub fn same_as(&self, other: &AssemblerMorphism) -> bool {
        Arc::ptr_eq(&self.source, &other.source)
            && Arc::ptr_eq(&self.target, &other.target)
            && self.objects == other.objects
            && self.morphisms == other.morphisms
    }

    /// Checks functoriality, the initial object, continuity on every declared
    /// cover and every disjoint covering family of the source (up to
    /// isomorphism), and preservation of disjointness.
    pub fn check(&self, budget: &Budget) -> MorphismReport {
        let mut report = MorphismReport::default();
        self.check_functor(&mut report);
        if !report.violations.is_empty() {
            return report;
        }
        if self.check_continuity(&mut report, budget).is_err() {
            report.inconclusive = true;
        }
        self.check_disjointness(&mut report);
        report
    }

    fn check_functor(&self, report: &mut MorphismReport) {
        let (sc, tc) = (self.source.category(), self.target.category());
        if self.object(self.source.initial()) != self.target.initial() {
            report.violations.push(MorphismViolation::Initial);
        }
        for f in sc.morphisms() {
            let g = self.morphism(f);
            if tc.src(g) != self.object(sc.src(f)) || tc.tgt(g) != self.object(sc.tgt(f)) {
                report.violations.push(MorphismViolation::Endpoints(sc.morphism_name(f).into()));
            }
        }
        if !report.violations.is_empty() {
            return;
        }
        for o in sc.objects() {
            if self.morphism(sc.id(o)) != tc.id(self.object(o)) {
                report.violations.push(MorphismViolation::Identity(sc.object_name(o).into()));
            }
        }
        for f in sc.morphisms() {
            for &g in sc.hom_from(sc.tgt(f)) {
                let gf = sc.compose(f, g).expect("complete table");
                if tc.compose(self.morphism(f), self.morphism(g)) != Some(self.morphism(gf)) {
                    report.violations.push(MorphismViolation::Composition {
                        first: sc.morphism_name(f).into(),
                        second: sc.morphism_name(g).into(),
                    });
                }
            }
        }
    }

    fn check_continuity(&self, report: &mut MorphismReport, budget: &Budget) -> Result<()> {
        let src = &self.source;
        let mut families: Vec<CoverFamily> = src.declared_covers().to_vec();
        for o in src.category().objects() {
            if src.canonical(o) == o {
                families.extend(src.reduced_disjoint_covering_families(o, budget)?);
            }
        }
        families.sort();
        families.dedup();
        for fam in &families {
            let image = CoverFamily {
                target: self.object(fam.target),
                members: {
                    let mut m: Vec<MorId> = fam.members.iter().map(|&f| self.morphism(f)).collect();
                    m.sort();
                    m.dedup();
                    m
                },
            };
            report.families_checked += 1;
            if !self.target.is_covering_family(&image, budget)? {
                report.violations.push(MorphismViolation::Continuity(fam.describe(src.category())));
            }
        }
        Ok(())
    }

    // Disjointness is invariant under isomorphisms on either side, so pairs of
    // reduced morphisms into canonical objects suffice.
    fn check_disjointness(&self, report: &mut MorphismReport) {
        let (src, tgt) = (&self.source, &self.target);
        let sc = src.category();
        for c in sc.objects() {
            if src.canonical(c) != c || c == src.initial() {
                continue;
            }
            let reduced: Vec<MorId> = sc
                .hom_into(c)
                .iter()
                .copied()
                .filter(|&f| sc.src(f) != src.initial() && src.is_reduced(f))
                .collect();
            for (i, &f) in reduced.iter().enumerate() {
                for &g in &reduced[i + 1..] {
                    if src.disjoint_unchecked(f, g) && !tgt.disjoint_unchecked(self.morphism(f), self.morphism(g)) {
                        report
                            .violations
                            .push(MorphismViolation::Disjointness(sc.morphism_name(f).into(), sc.morphism_name(g).into()));
                    }
                }
            }
        }
    }
}
