//! Simplicial assemblers truncated at a finite depth: constant ones, smashing
//! with the simplicial circle, and the cofiber `(C/g)•` of a morphism.
//!
//! π₀ of K of a simplicial assembler is computed as the coequalizer of the
//! two face maps `K₀(X₁) ⇉ K₀(X₀)`.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::assembler::Assembler;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::{GroupHom, PresentedGroup};
use crate::kzero::{k0, K0Group};
use crate::ops::{coproduct, AssemblerMorphism, Wedge};
use crate::snf::IntMatrix;

/// Levels `0..=depth` with faces `faces[n][i]: Xₙ → Xₙ₋₁` and degeneracies
/// `degeneracies[n][i]: Xₙ → Xₙ₊₁`.
#[derive(Clone, Debug)]
pub struct SimplicialAssembler {
    pub levels: Vec<Arc<Assembler>>,
    pub faces: Vec<Vec<AssemblerMorphism>>,
    pub degeneracies: Vec<Vec<AssemblerMorphism>>,
}

/// A levelwise morphism of simplicial assemblers.
#[derive(Clone, Debug)]
pub struct SimplicialMorphism {
    pub components: Vec<AssemblerMorphism>,
}

/// Outcome of [`simplicial_identities_check`].
#[derive(Clone, Debug, Default)]
pub struct IdentityReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Face `dᵢ` of the pointed circle `Δ¹/∂Δ¹` on the cell `j ∈ {1..n}` of
/// level `n`, before collapsing: the result is `0` or `n` for the basepoint.
fn circle_face_raw(i: usize, j: usize) -> usize {
    if i < j {
        j - 1
    } else {
        j
    }
}

/// Face `dᵢ` of the pointed circle; `None` for the basepoint.
pub fn circle_face(n: usize, i: usize, j: usize) -> Option<usize> {
    let r = circle_face_raw(i, j);
    (r != 0 && r != n).then_some(r)
}

/// Degeneracy `sᵢ` of the pointed circle on the cell `j` of level `n`.
pub fn circle_degeneracy(i: usize, j: usize) -> usize {
    if i < j {
        j + 1
    } else {
        j
    }
}

// Where one summand of a wedge goes under a wedge map.
enum Part {
    Collapse,
    Into(usize, AssemblerMorphism),
}

// A morphism between wedges, given summand by summand.
fn wedge_map(source: &Wedge, target: &Wedge, parts: &[Part]) -> Result<AssemblerMorphism> {
    let (sc, tc) = (source.asm.category(), target.asm.category());
    let t_init = target.asm.initial();
    let t_id = tc.id(t_init);
    let mut objects = vec![None; sc.object_count()];
    let mut morphisms = vec![None; sc.morphism_count()];
    objects[source.asm.initial().index()] = Some(t_init);
    morphisms[sc.id(source.asm.initial()).index()] = Some(t_id);
    for (inj, part) in source.injections.iter().zip(parts) {
        let local = inj.source.category();
        for o in local.objects() {
            let image = match part {
                Part::Collapse => t_init,
                Part::Into(k, phi) => target.injections[*k].object(phi.object(o)),
            };
            objects[inj.object(o).index()] = Some(image);
        }
        for f in local.morphisms() {
            let image = match part {
                Part::Collapse => {
                    if local.src(f) == inj.source.initial() {
                        // out of the initial object: the unique morphism to the image
                        tc.hom(t_init, t_init)[0]
                    } else {
                        t_id
                    }
                }
                Part::Into(k, phi) => target.injections[*k].morphism(phi.morphism(f)),
            };
            morphisms[inj.morphism(f).index()] = Some(image);
        }
    }
    let objects = objects.into_iter().collect::<Option<Vec<_>>>();
    let morphisms = morphisms.into_iter().collect::<Option<Vec<_>>>();
    match (objects, morphisms) {
        (Some(o), Some(m)) => AssemblerMorphism::new(source.asm.clone(), target.asm.clone(), o, m),
        _ => Err(Error::InvalidMorphism("wedge map is not total".into())),
    }
}

impl SimplicialAssembler {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    /// Runs the morphism check on every face and degeneracy.
    pub fn structure_map_failures(&self, budget: &Budget) -> Vec<String> {
        let mut out = Vec::new();
        let maps = self.faces.iter().enumerate().flat_map(|(n, fs)| fs.iter().enumerate().map(move |(i, f)| (format!("d_{i} at level {n}"), f)));
        let degs =
            self.degeneracies.iter().enumerate().flat_map(|(n, ss)| ss.iter().enumerate().map(move |(i, s)| (format!("s_{i} at level {n}"), s)));
        for (name, m) in maps.chain(degs) {
            let report = m.check(budget);
            if !report.is_valid() {
                out.push(format!("{name}: {}", report.violations.first().map_or("inconclusive".into(), |v| v.to_string())));
            }
        }
        out
    }

    /// The truncation to levels `0..=depth`.
    pub fn truncate(&self, depth: usize) -> Result<SimplicialAssembler> {
        if depth > self.depth() {
            return Err(Error::Parameter(format!("depth {} exceeds {}", depth, self.depth())));
        }
        let mut degeneracies: Vec<_> = self.degeneracies[..=depth].to_vec();
        degeneracies[depth].clear();
        Ok(SimplicialAssembler {
            levels: self.levels[..=depth].to_vec(),
            faces: self.faces[..=depth].to_vec(),
            degeneracies,
        })
    }
}

/// The constant simplicial assembler: every level is `asm`, every map the identity.
pub fn constant_simplicial(asm: &Arc<Assembler>, depth: usize) -> SimplicialAssembler {
    let id = AssemblerMorphism::identity(asm);
    SimplicialAssembler {
        levels: vec![asm.clone(); depth + 1],
        faces: (0..=depth).map(|n| if n == 0 { Vec::new() } else { vec![id.clone(); n + 1] }).collect(),
        degeneracies: (0..=depth).map(|n| if n == depth { Vec::new() } else { vec![id.clone(); n + 1] }).collect(),
    }
}

/// The identity of a simplicial assembler, or the constant inclusion of a
/// subassembler given levelwise.
pub fn constant_morphism(m: &AssemblerMorphism, source: &SimplicialAssembler, target: &SimplicialAssembler) -> Result<SimplicialMorphism> {
    if source.depth() != target.depth()
        || !source.levels.iter().all(|l| Arc::ptr_eq(l, &m.source))
        || !target.levels.iter().all(|l| Arc::ptr_eq(l, &m.target))
    {
        return Err(Error::InvalidMorphism("not constant simplicial assemblers over the morphism's ends".into()));
    }
    Ok(SimplicialMorphism { components: vec![m.clone(); source.depth() + 1] })
}

fn check(report: &mut IdentityReport, ok: Result<bool>, what: impl FnOnce() -> String) {
    report.checked += 1;
    if !matches!(ok, Ok(true)) {
        report.failures.push(what());
    }
}

fn agree(a: Result<AssemblerMorphism>, b: Result<AssemblerMorphism>) -> Result<bool> {
    Ok(a?.same_as(&b?))
}

/// Exhaustively checks the simplicial identities up to the depth.
pub fn simplicial_identities_check(x: &SimplicialAssembler) -> IdentityReport {
    let mut report = IdentityReport::default();
    let d = |n: usize, i: usize| &x.faces[n][i];
    let s = |n: usize, i: usize| &x.degeneracies[n][i];
    let depth = x.depth();
    for n in 2..=depth {
        for j in 1..=n {
            for i in 0..j {
                // dᵢ dⱼ = dⱼ₋₁ dᵢ
                check(&mut report, agree(d(n, j).then(d(n - 1, i)), d(n, i).then(d(n - 1, j - 1))), || {
                    format!("d_{i} d_{j} ≠ d_{} d_{i} on level {n}", j - 1)
                });
            }
        }
    }
    for n in 0..depth {
        for j in 0..=n {
            for i in 0..=n + 1 {
                let lhs = s(n, j).then(d(n + 1, i));
                let (rhs, text) = if i < j {
                    (d(n, i).then(s(n - 1, j - 1)), format!("s_{} d_{i}", j - 1))
                } else if i == j || i == j + 1 {
                    (Ok(AssemblerMorphism::identity(&x.levels[n])), "id".to_string())
                } else {
                    (d(n, i - 1).then(s(n - 1, j)), format!("s_{j} d_{}", i - 1))
                };
                check(&mut report, agree(lhs, rhs), || format!("d_{i} s_{j} ≠ {text} on level {n}"));
            }
        }
    }
    for n in 0..depth.saturating_sub(1) {
        for j in 0..=n {
            for i in 0..=j {
                // sᵢ sⱼ = sⱼ₊₁ sᵢ
                check(&mut report, agree(s(n, j).then(s(n + 1, i)), s(n, i).then(s(n + 1, j + 1))), || {
                    format!("s_{i} s_{j} ≠ s_{} s_{i} on level {n}", j + 1)
                });
            }
        }
    }
    report
}

impl SimplicialMorphism {
    /// Commutation with every face and degeneracy.
    pub fn naturality(&self, source: &SimplicialAssembler, target: &SimplicialAssembler) -> IdentityReport {
        let mut report = IdentityReport::default();
        let g = &self.components;
        for n in 0..=source.depth() {
            if n > 0 {
                for i in 0..=n {
                    check(&mut report, agree(g[n].then(&target.faces[n][i]), source.faces[n][i].then(&g[n - 1])), || {
                        format!("not natural at d_{i} on level {n}")
                    });
                }
            }
            if n < source.depth() {
                for i in 0..=n {
                    check(
                        &mut report,
                        agree(g[n].then(&target.degeneracies[n][i]), source.degeneracies[n][i].then(&g[n + 1])),
                        || format!("not natural at s_{i} on level {n}"),
                    );
                }
            }
        }
        report
    }
}

/// A simplicial assembler whose levels are wedges, with the wedge data kept.
#[derive(Clone, Debug)]
pub struct WedgeLevels {
    pub space: SimplicialAssembler,
    pub wedges: Vec<Wedge>,
}

/// `S¹ ∧ D•` truncated at `depth`: level `n` is a wedge of `n` copies of `Dₙ`.
pub fn circle_smash(d: &SimplicialAssembler, depth: usize) -> Result<WedgeLevels> {
    if d.depth() < depth {
        return Err(Error::Parameter(format!("depth {} exceeds {}", depth, d.depth())));
    }
    let wedges: Vec<Wedge> = (0..=depth).map(|n| coproduct(&vec![d.levels[n].clone(); n])).collect::<Result<_>>()?;
    let mut faces = vec![Vec::new()];
    for n in 1..=depth {
        let mut level = Vec::new();
        for i in 0..=n {
            let parts: Vec<Part> = (1..=n)
                .map(|j| match circle_face(n, i, j) {
                    Some(r) => Part::Into(r - 1, d.faces[n][i].clone()),
                    None => Part::Collapse,
                })
                .collect();
            level.push(wedge_map(&wedges[n], &wedges[n - 1], &parts)?);
        }
        faces.push(level);
    }
    let degeneracies = degeneracies_of(&wedges, depth, |n, i, j| Part::Into(circle_degeneracy(i, j) - 1, d.degeneracies[n][i].clone()), 0)?;
    let levels = wedges.iter().map(|w| w.asm.clone()).collect();
    Ok(WedgeLevels { space: SimplicialAssembler { levels, faces, degeneracies }, wedges })
}

// Degeneracies of wedge levels; `part(n, i, j)` places the circle cell `j`,
// and the first `offset` summands are sent along `Dₙ`'s own degeneracies.
fn degeneracies_of(
    wedges: &[Wedge],
    depth: usize,
    part: impl Fn(usize, usize, usize) -> Part,
    offset: usize,
) -> Result<Vec<Vec<AssemblerMorphism>>> {
    let mut out = Vec::new();
    for n in 0..=depth {
        let mut level = Vec::new();
        if n < depth {
            for i in 0..=n {
                let parts: Vec<Part> = (0..offset).map(|_| part(n, i, 0)).chain((1..=n).map(|j| part(n, i, j))).collect();
                level.push(wedge_map(&wedges[n], &wedges[n + 1], &parts)?);
            }
        }
        out.push(level);
    }
    Ok(out)
}

/// The cofiber `(C/g)•` with its inclusion and projection.
#[derive(Clone, Debug)]
pub struct Cofiber {
    pub space: SimplicialAssembler,
    /// Level `n` is `Cₙ` (summand 0) wedged with `n` copies of `Dₙ`.
    pub wedges: Vec<Wedge>,
    pub smash: WedgeLevels,
    /// `ι: C• → (C/g)•`.
    pub inclusion: SimplicialMorphism,
    /// `π_D: (C/g)• → S¹ ∧ D•`.
    pub projection: SimplicialMorphism,
}

/// `(C/g)ₙ = Cₙ ∨ ((S¹)ₙ ∧ Dₙ)`. All structure maps are componentwise except
/// `d₀`, which sends the first circle cell through `g ∘ d₀` into `C`.
pub fn cofiber(
    g: &SimplicialMorphism,
    d: &SimplicialAssembler,
    c: &SimplicialAssembler,
    depth: usize,
) -> Result<Cofiber> {
    if d.depth() < depth || c.depth() < depth || g.components.len() <= depth {
        return Err(Error::Parameter(format!("depth {depth} exceeds the inputs")));
    }
    for n in 0..=depth {
        let gn = &g.components[n];
        if !Arc::ptr_eq(&gn.source, &d.levels[n]) || !Arc::ptr_eq(&gn.target, &c.levels[n]) {
            return Err(Error::InvalidMorphism(format!("g is not a morphism D• → C• at level {n}")));
        }
    }
    let wedges: Vec<Wedge> = (0..=depth)
        .map(|n| {
            let mut summands = vec![c.levels[n].clone()];
            summands.extend(std::iter::repeat(d.levels[n].clone()).take(n));
            coproduct(&summands)
        })
        .collect::<Result<_>>()?;
    let mut faces = vec![Vec::new()];
    for n in 1..=depth {
        let mut level = Vec::new();
        for i in 0..=n {
            let mut parts = vec![Part::Into(0, c.faces[n][i].clone())];
            for j in 1..=n {
                let raw = circle_face_raw(i, j);
                parts.push(if raw == 0 {
                    Part::Into(0, d.faces[n][i].then(&g.components[n - 1])?)
                } else if raw == n {
                    Part::Collapse
                } else {
                    Part::Into(raw, d.faces[n][i].clone())
                });
            }
            level.push(wedge_map(&wedges[n], &wedges[n - 1], &parts)?);
        }
        faces.push(level);
    }
    let degeneracies = degeneracies_of(
        &wedges,
        depth,
        |n, i, j| {
            if j == 0 {
                Part::Into(0, c.degeneracies[n][i].clone())
            } else {
                Part::Into(circle_degeneracy(i, j), d.degeneracies[n][i].clone())
            }
        },
        1,
    )?;
    let levels = wedges.iter().map(|w| w.asm.clone()).collect();
    let space = SimplicialAssembler { levels, faces, degeneracies };
    let smash = circle_smash(d, depth)?;
    let inclusion = SimplicialMorphism { components: wedges.iter().map(|w| w.injections[0].clone()).collect() };
    let projection = SimplicialMorphism {
        components: (0..=depth)
            .map(|n| {
                let parts: Vec<Part> = std::iter::once(Part::Collapse)
                    .chain((1..=n).map(|j| Part::Into(j - 1, AssemblerMorphism::identity(&d.levels[n]))))
                    .collect();
                wedge_map(&wedges[n], &smash.wedges[n], &parts)
            })
            .collect::<Result<_>>()?,
    };
    let out = Cofiber { space, wedges, smash, inclusion, projection };
    let report = simplicial_identities_check(&out.space);
    if let Some(f) = report.failures.first() {
        return Err(Error::Construction(format!("cofiber violates a simplicial identity: {f}")));
    }
    Ok(out)
}

impl Cofiber {
    /// Whether `π_D ∘ ι` sends every object to the initial object.
    pub fn composite_collapses(&self) -> Result<bool> {
        for (i, p) in self.inclusion.components.iter().zip(&self.projection.components) {
            let both = i.then(p)?;
            let init = both.target.initial();
            if both.objects.iter().any(|&o| o != init) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The map `K₀(C₀) → π₀ K((C/g)•)` induced by `ι₀`.
    pub fn k0_inclusion(&self, level0: &K0Group, k: &SimplicialK0) -> Result<GroupHom> {
        let iota = &self.inclusion.components[0];
        if !Arc::ptr_eq(&iota.source, level0.assembler()) {
            return Err(Error::InvalidMorphism("K₀ group does not belong to C₀".into()));
        }
        let rows: Vec<Vec<BigInt>> =
            level0.generators().iter().map(|&o| k.level0.vector_of(iota.object(o))).collect::<Result<_>>()?;
        let matrix = IntMatrix::from_rows(&rows, k.level0.generators().len());
        Ok(GroupHom::new(level0.group().clone(), k.group.clone(), matrix))
    }
}

/// π₀ of K of a simplicial assembler, presented on the generators of `K₀(X₀)`.
#[derive(Clone, Debug)]
pub struct SimplicialK0 {
    pub level0: K0Group,
    pub group: PresentedGroup,
}

/// The coequalizer of `d₀*, d₁*: K₀(X₁) ⇉ K₀(X₀)`.
pub fn k0_simplicial(x: &SimplicialAssembler, budget: &Budget) -> Result<SimplicialK0> {
    if x.depth() < 1 {
        return Err(Error::Parameter("π₀ needs levels 0 and 1".into()));
    }
    let level0 = k0(&x.levels[0], budget)?;
    let level1 = k0(&x.levels[1], budget)?;
    let d0 = level1.map_to(&level0, &x.faces[1][0])?;
    let d1 = level1.map_to(&level0, &x.faces[1][1])?;
    let mut rows: Vec<Vec<BigInt>> = level0.group().relation_basis().to_vec();
    for (a, b) in d0.matrix.to_rows().into_iter().zip(d1.matrix.to_rows()) {
        rows.push(a.into_iter().zip(b).map(|(p, q)| p - q).collect());
    }
    let group = PresentedGroup::new(level0.generators().len(), rows);
    Ok(SimplicialK0 { level0, group })
}
