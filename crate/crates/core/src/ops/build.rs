//! Shared plumbing for assemblers assembled out of pieces of other ones.

use crate::assembler::{CoverFamily, SiteBuilder, INITIAL};
use crate::category::{FiniteCategory, MorId, ObjId};
use crate::error::Result;

/// A morphism of a draft, by local index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Slot {
    Id(usize),
    Init(usize),
    Mor(usize),
    /// The identity of the initial object.
    Empty,
}

/// Noninitial objects and non-identity morphisms with noninitial domains;
/// identities, initial morphisms and their compositions are added on build.
#[derive(Default)]
pub(crate) struct Draft {
    pub objects: Vec<String>,
    pub morphisms: Vec<(String, usize, usize)>,
    pub compositions: Vec<(usize, usize, Slot)>,
    pub covers: Vec<(usize, Vec<Slot>)>,
}

/// A built draft with the final ids of every local index.
pub(crate) struct Built {
    pub cat: FiniteCategory,
    pub initial: ObjId,
    pub objects: Vec<ObjId>,
    pub morphisms: Vec<MorId>,
    pub covers: Vec<CoverFamily>,
}

impl Built {
    pub fn slot(&self, s: Slot) -> MorId {
        match s {
            Slot::Id(o) => self.cat.id(self.objects[o]),
            Slot::Init(o) => self.cat.hom(self.initial, self.objects[o])[0],
            Slot::Mor(m) => self.morphisms[m],
            Slot::Empty => self.cat.id(self.initial),
        }
    }
}

impl Draft {
    pub fn object(&mut self, name: String) -> usize {
        self.objects.push(name);
        self.objects.len() - 1
    }

    pub fn morphism(&mut self, name: String, src: usize, tgt: usize) -> usize {
        self.morphisms.push((name, src, tgt));
        self.morphisms.len() - 1
    }

    pub fn build(self) -> Result<Built> {
        let mut b = SiteBuilder::new();
        let objs: Vec<usize> = self.objects.iter().map(|n| b.object(n.clone())).collect::<Result<_>>()?;
        let mors: Vec<usize> = self
            .morphisms
            .iter()
            .map(|(n, s, t)| b.morphism(n.clone(), objs[*s], objs[*t]))
            .collect::<Result<_>>()?;
        let resolve = |b: &SiteBuilder, s: Slot| match s {
            Slot::Id(o) => b.identity_of(objs[o]),
            Slot::Init(o) => b.init_of(objs[o]),
            Slot::Mor(m) => mors[m],
            Slot::Empty => b.identity_of(b.initial()),
        };
        for &(f, g, r) in &self.compositions {
            let r = resolve(&b, r);
            b.compose(mors[f], mors[g], r);
        }
        let covers: Vec<(usize, Vec<usize>)> = self
            .covers
            .iter()
            .map(|(t, ms)| (objs[*t], ms.iter().map(|&s| resolve(&b, s)).collect()))
            .collect();
        for (t, ms) in covers {
            b.cover(t, ms);
        }
        let (cat, covers) = b.into_parts();
        let initial = cat.object_id(INITIAL)?;
        let objects = self.objects.iter().map(|n| cat.object_id(n)).collect::<Result<_>>()?;
        let morphisms = self.morphisms.iter().map(|(n, _, _)| cat.morphism_id(n)).collect::<Result<_>>()?;
        Ok(Built { cat, initial, objects, morphisms, covers })
    }
}
