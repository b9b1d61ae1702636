//! The JSON document format for assemblers.
//!
//! Identities and morphisms out of the initial object are implicit, with the
//! reserved ids `id:<obj>` and `init:<obj>`. User ids may not use those
//! prefixes. Every composable pair of user morphisms needs a composition entry.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::assembler::{identity_name, initial_name, Assembler, SiteBuilder, Topology, INITIAL};
use crate::budget::Budget;
use crate::category::{MorId, ObjId};
use crate::error::{Error, Result};
use crate::ops::AssemblerMorphism;

const RESERVED: [&str; 2] = ["id:", "init:"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismEntry {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

/// `second ∘ first = result`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionEntry {
    pub first: String,
    pub second: String,
    pub result: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverEntry {
    pub target: String,
    pub family: Vec<String>,
}

/// A functor given by name maps; unlisted names map to equal names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismMap {
    /// Path of the target document, relative to this one; the document itself if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default)]
    pub objects: BTreeMap<String, String>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, String>,
}

/// A serialized assembler.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssemblerDocument {
    pub objects: Vec<String>,
    pub initial: String,
    pub morphisms: Vec<MorphismEntry>,
    pub composition: Vec<CompositionEntry>,
    pub covers: Vec<CoverEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sieves: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morphism_maps: BTreeMap<String, MorphismMap>,
}

fn reserved(id: &str) -> bool {
    RESERVED.iter().any(|p| id.starts_with(p))
}

impl AssemblerDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
        AssemblerDocument::from_json(&text)
    }

    /// Pretty JSON with a stable field order.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n").map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }

    /// Builds and validates the assembler. The initial object is renamed to `∅`.
    pub fn to_assembler(&self) -> Result<Arc<Assembler>> {
        let mut b = SiteBuilder::new();
        let rename = |name: &str| if name == self.initial { INITIAL.to_string() } else { name.to_string() };
        if self.initial.is_empty() {
            return Err(Error::Format("missing initial object".into()));
        }
        for o in &self.objects {
            if *o == self.initial {
                continue;
            }
            if o == INITIAL {
                return Err(Error::Format(format!("object name {INITIAL} is reserved for the initial object")));
            }
            b.object(o.clone())?;
        }
        let object = |b: &SiteBuilder, name: &str| {
            b.find_object(&rename(name)).ok_or_else(|| Error::UnknownObject(name.to_string()))
        };
        for m in &self.morphisms {
            if reserved(&m.id) {
                return Err(Error::Format(format!("morphism id {} uses a reserved prefix", m.id)));
            }
            let (s, t) = (object(&b, &m.src)?, object(&b, &m.tgt)?);
            if s == b.initial() {
                return Err(Error::Format(format!("{}: morphisms out of the initial object are implicit", m.id)));
            }
            b.morphism(m.id.clone(), s, t)?;
        }
        let morphism = |b: &SiteBuilder, id: &str| {
            let id = match id.split_once(':') {
                Some((p, o)) if reserved(id) && o == self.initial => format!("{p}:{INITIAL}"),
                _ => id.to_string(),
            };
            b.find_morphism(&id).ok_or(Error::UnknownMorphism(id))
        };
        for c in &self.composition {
            let (f, g, h) = (morphism(&b, &c.first)?, morphism(&b, &c.second)?, morphism(&b, &c.result)?);
            b.compose(f, g, h);
        }
        for c in &self.covers {
            let t = object(&b, &c.target)?;
            let members = c.family.iter().map(|m| morphism(&b, m)).collect::<Result<Vec<_>>>()?;
            b.cover(t, members);
        }
        for (name, objs) in &self.sieves {
            for o in objs {
                object(&b, o).map_err(|_| Error::Format(format!("sieve {name} names unknown object {o}")))?;
            }
        }
        let (cat, covers) = b.into_parts();
        for fam in &covers {
            for &m in &fam.members {
                if cat.tgt(m) != fam.target {
                    return Err(Error::InvalidFamily(format!(
                        "{} does not have target {}",
                        cat.morphism_name(m),
                        cat.object_name(fam.target)
                    )));
                }
            }
        }
        let initial = cat.object_id(INITIAL)?;
        Ok(Arc::new(Assembler::new(cat, initial, Topology::Coverage(covers))?))
    }

    /// Objects of a named sieve, resolved in `asm`.
    pub fn sieve(&self, asm: &Assembler, name: &str) -> Result<Vec<ObjId>> {
        let objs = self.sieves.get(name).ok_or_else(|| Error::Format(format!("no sieve named {name}")))?;
        let mut out: Vec<ObjId> = objs
            .iter()
            .map(|o| asm.object_id(if *o == self.initial { INITIAL } else { o }))
            .collect::<Result<_>>()?;
        let init = asm.initial();
        if !out.contains(&init) {
            out.push(init);
        }
        out.sort();
        Ok(out)
    }

    /// A morphism described by `morphism_maps[name]` from `source` to `target`.
    pub fn morphism_map(&self, name: &str, source: &Arc<Assembler>, target: &Arc<Assembler>) -> Result<AssemblerMorphism> {
        let m = self.morphism_maps.get(name).ok_or_else(|| Error::Format(format!("no morphism map named {name}")))?;
        AssemblerMorphism::from_name_maps(source.clone(), target.clone(), &m.objects, &m.morphisms)
    }

    /// The document of an assembler. Declared coverages are written as is;
    /// derived topologies are written through their disjoint covering families.
    pub fn from_assembler(asm: &Assembler, budget: &Budget) -> Result<Self> {
        let cat = asm.category();
        let init = asm.initial();
        let implicit = |f: MorId| cat.is_identity(f) || cat.src(f) == init;
        let name = |f: MorId| {
            if cat.is_identity(f) {
                identity_name(asm.object_name(cat.src(f)))
            } else if cat.src(f) == init {
                initial_name(asm.object_name(cat.tgt(f)))
            } else {
                asm.morphism_name(f).to_string()
            }
        };
        let objects: Vec<String> = cat.objects().map(|o| asm.object_name(o).to_string()).collect();
        let mut morphisms = Vec::new();
        let mut composition = Vec::new();
        for g in cat.morphisms().filter(|&g| !implicit(g)) {
            morphisms.push(MorphismEntry {
                id: name(g),
                src: asm.object_name(cat.src(g)).to_string(),
                tgt: asm.object_name(cat.tgt(g)).to_string(),
            });
            for &f in cat.hom_into(cat.src(g)) {
                if implicit(f) {
                    continue;
                }
                let h = cat.compose(f, g).expect("complete composition table");
                composition.push(CompositionEntry { first: name(f), second: name(g), result: name(h) });
            }
        }
        let families: Vec<(ObjId, Vec<MorId>)> = match asm.topology() {
            Topology::Coverage(covers) => covers.iter().map(|c| (c.target, c.members.clone())).collect(),
            _ => {
                let mut out = Vec::new();
                for o in asm.noninitial_objects() {
                    for fam in asm.enumerate_disjoint_covering_families(o, budget)? {
                        out.push((o, fam.members));
                    }
                }
                out
            }
        };
        let mut covers: Vec<CoverEntry> = families
            .into_iter()
            .map(|(t, ms)| CoverEntry { target: asm.object_name(t).to_string(), family: ms.into_iter().map(name).collect() })
            .collect();
        morphisms.sort_by(|a, b| a.id.cmp(&b.id));
        composition.sort_by(|a, b| (&a.first, &a.second).cmp(&(&b.first, &b.second)));
        for c in &mut covers {
            c.family.sort();
        }
        covers.sort_by(|a, b| (&a.target, &a.family).cmp(&(&b.target, &b.family)));
        covers.dedup();
        Ok(AssemblerDocument {
            objects,
            initial: asm.object_name(init).to_string(),
            morphisms,
            composition,
            covers,
            sieves: BTreeMap::new(),
            morphism_maps: BTreeMap::new(),
        })
    }

    /// Adds a named sieve.
    pub fn with_sieve(mut self, name: &str, asm: &Assembler, objs: &[ObjId]) -> Self {
        let set: BTreeSet<String> = objs.iter().map(|&o| asm.object_name(o).to_string()).collect();
        self.sieves.insert(name.to_string(), set.into_iter().collect());
        self
    }
}

/// Same objects, morphisms with endpoints, composition table and declared
/// covers, compared by name.
pub fn structurally_equal(a: &Assembler, b: &Assembler, budget: &Budget) -> Result<bool> {
    let (mut x, mut y) = (AssemblerDocument::from_assembler(a, budget)?, AssemblerDocument::from_assembler(b, budget)?);
    x.objects.sort();
    y.objects.sort();
    Ok(x == y)
}
