//! Search for finite disjoint covering families.

use fixedbitset::FixedBitSet;

use super::{bits_disjoint_outside, Assembler, CoverFamily};
use crate::budget::Budget;
use crate::category::{MorId, ObjId};
use crate::error::{Error, Result};

/// Backtracking search for disjoint covering families of one target drawn
/// from a candidate list, optionally containing some forced members.
pub(crate) struct FamilySearch<'a> {
    pub asm: &'a Assembler,
    pub target: ObjId,
    pub candidates: Vec<MorId>,
    pub forced: Vec<MorId>,
    pub limit: Option<usize>,
}

struct Frame<'s> {
    downs: Vec<&'s FixedBitSet>,
    compat: Vec<FixedBitSet>,
    chosen: Vec<usize>,
    out: Vec<Vec<usize>>,
    budget: &'s Budget,
}

impl<'a> FamilySearch<'a> {
    pub fn new(asm: &'a Assembler, target: ObjId, candidates: Vec<MorId>) -> Self {
        FamilySearch { asm, target, candidates, forced: Vec::new(), limit: None }
    }

    pub fn run(&self, budget: &Budget) -> Result<Vec<CoverFamily>> {
        let asm = self.asm;
        let cat = asm.category();
        let trivial = asm.trivial_bits(self.target);
        for (i, &f) in self.forced.iter().enumerate() {
            for &g in &self.forced[i + 1..] {
                if !asm.disjoint_unchecked(f, g) {
                    return Ok(Vec::new());
                }
            }
        }
        let base = asm.sieve_of(self.target, &self.forced);
        let candidates: Vec<MorId> = self
            .candidates
            .iter()
            .copied()
            .filter(|&c| cat.src(c) != asm.initial() && !self.forced.contains(&c))
            .filter(|&c| self.forced.iter().all(|&f| asm.disjoint_unchecked(c, f)))
            .collect();
        let downs: Vec<&FixedBitSet> = candidates.iter().map(|&c| asm.down(c)).collect();
        let n = candidates.len();
        let mut compat = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = FixedBitSet::with_capacity(n);
            for j in 0..n {
                if i != j && bits_disjoint_outside(downs[i], downs[j], trivial) {
                    row.insert(j);
                }
            }
            compat.push(row);
        }
        let mut allowed = FixedBitSet::with_capacity(n);
        allowed.insert_range(..);
        let mut frame = Frame { downs, compat, chosen: Vec::new(), out: Vec::new(), budget };
        self.go(&mut frame, 0, &base, &allowed)?;
        let mut families: Vec<CoverFamily> = frame
            .out
            .into_iter()
            .map(|picked| {
                let mut members: Vec<MorId> = self.forced.clone();
                members.extend(picked.into_iter().map(|k| candidates[k]));
                members.sort();
                CoverFamily { target: self.target, members }
            })
            .collect();
        families.sort();
        families.dedup();
        Ok(families)
    }

    // Returns true once the result limit is reached.
    fn go(&self, frame: &mut Frame<'_>, start: usize, sieve: &FixedBitSet, allowed: &FixedBitSet) -> Result<bool> {
        frame.budget.tick("family enumeration")?;
        let mut upper = sieve.clone();
        let mut next = None;
        for k in allowed.ones().filter(|&k| k >= start) {
            next.get_or_insert(k);
            upper.union_with(frame.downs[k]);
        }
        if !self.asm.covers_sieve(self.target, &upper, frame.budget)? {
            return Ok(false);
        }
        let Some(k) = next else {
            frame.out.push(frame.chosen.clone());
            return Ok(self.limit.is_some_and(|l| frame.out.len() >= l));
        };
        frame.chosen.push(k);
        let mut with = sieve.clone();
        with.union_with(frame.downs[k]);
        let mut narrowed = allowed.clone();
        narrowed.intersect_with(&frame.compat[k]);
        if self.go(frame, k + 1, &with, &narrowed)? {
            return Ok(true);
        }
        frame.chosen.pop();
        let mut without = allowed.clone();
        without.set(k, false);
        self.go(frame, k + 1, sieve, &without)
    }
}

/// A common refinement together with factorizations through both inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    pub family: CoverFamily,
    /// For each member `h`: a member `f` of the first family and `k` with `f ∘ k = h`.
    pub via_first: Vec<(MorId, MorId)>,
    pub via_second: Vec<(MorId, MorId)>,
}

impl Assembler {
    fn candidate_morphisms(&self, target: ObjId, reduced: bool) -> Vec<MorId> {
        self.category()
            .hom_into(target)
            .iter()
            .copied()
            .filter(|&f| self.category().src(f) != self.initial())
            .filter(|&f| !reduced || self.is_reduced(f))
            .collect()
    }

    /// Every finite disjoint covering family of `target`, in canonical order.
    pub fn enumerate_disjoint_covering_families(&self, target: ObjId, budget: &Budget) -> Result<Vec<CoverFamily>> {
        FamilySearch::new(self, target, self.candidate_morphisms(target, false)).run(budget)
    }

    /// One representative of every finite disjoint covering family of `target`
    /// up to replacing members by isomorphic subobjects: each member has a
    /// canonical domain and is least in its automorphism orbit.
    pub fn reduced_disjoint_covering_families(&self, target: ObjId, budget: &Budget) -> Result<Vec<CoverFamily>> {
        FamilySearch::new(self, target, self.candidate_morphisms(target, true)).run(budget)
    }

    /// Disjoint covering families of `target` whose members all have domains
    /// accepted by `keep`; at most `limit` of them.
    pub fn covering_families_from(
        &self,
        target: ObjId,
        keep: impl Fn(ObjId) -> bool,
        limit: Option<usize>,
        budget: &Budget,
    ) -> Result<Vec<CoverFamily>> {
        let candidates =
            self.candidate_morphisms(target, false).into_iter().filter(|&f| keep(self.category().src(f))).collect();
        let mut search = FamilySearch::new(self, target, candidates);
        search.limit = limit;
        search.run(budget)
    }

    /// A disjoint covering family of `tgt f` containing `f`, if one exists.
    pub fn complement_of(&self, f: MorId, budget: &Budget) -> Result<Option<CoverFamily>> {
        let target = self.category().tgt(f);
        let mut search = FamilySearch::new(self, target, self.candidate_morphisms(target, true));
        search.forced = vec![f];
        search.limit = Some(1);
        Ok(search.run(budget)?.into_iter().next())
    }

    fn factorizations(&self, fine: &CoverFamily, coarse: &CoverFamily) -> Option<Vec<(MorId, MorId)>> {
        fine.members
            .iter()
            .map(|&h| coarse.members.iter().find_map(|&f| self.category().factor_through(f, h).map(|k| (f, k))))
            .collect()
    }

    fn check_disjoint_covering(&self, fam: &CoverFamily, budget: &Budget) -> Result<()> {
        if !self.is_disjoint_family(fam) || !self.is_covering_family(fam, budget)? {
            return Err(Error::InvalidFamily(format!(
                "{} is not a disjoint covering family",
                fam.describe(self.category())
            )));
        }
        Ok(())
    }

    /// A disjoint covering family refining both inputs, with witnesses.
    pub fn common_refinement(
        &self,
        first: &CoverFamily,
        second: &CoverFamily,
        budget: &Budget,
    ) -> Result<Option<Refinement>> {
        if first.target != second.target {
            return Err(Error::InvalidFamily("families have different targets".into()));
        }
        self.check_disjoint_covering(first, budget)?;
        self.check_disjoint_covering(second, budget)?;
        Ok(self.refine_unchecked(first, second, budget)?)
    }

    pub(crate) fn refine_unchecked(
        &self,
        first: &CoverFamily,
        second: &CoverFamily,
        budget: &Budget,
    ) -> Result<Option<Refinement>> {
        for fam in [first, second] {
            if let (Some(a), Some(b)) = (self.factorizations(fam, first), self.factorizations(fam, second)) {
                return Ok(Some(Refinement { family: fam.clone(), via_first: a, via_second: b }));
            }
        }
        let target = first.target;
        let mut both = self.sieve_of(target, &first.members);
        both.intersect_with(&self.sieve_of(target, &second.members));
        let into = self.category().hom_into(target);
        let candidates: Vec<MorId> = self
            .candidate_morphisms(target, true)
            .into_iter()
            .filter(|&f| both.contains(self.category().position(f)))
            .collect();
        debug_assert!(into.len() == both.len());
        let mut search = FamilySearch::new(self, target, candidates);
        search.limit = Some(1);
        let Some(family) = search.run(budget)?.into_iter().next() else {
            return Ok(None);
        };
        let via_first = self.factorizations(&family, first).expect("members lie in both sieves");
        let via_second = self.factorizations(&family, second).expect("members lie in both sieves");
        Ok(Some(Refinement { family, via_first, via_second }))
    }
}
