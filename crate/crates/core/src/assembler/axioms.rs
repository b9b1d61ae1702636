//! Exhaustive checks of the assembler axioms.

use std::fmt;

use super::{Assembler, CoverFamily};
use crate::budget::Budget;
use crate::category::MorId;

/// Outcome of [`Assembler::check_axioms`].
#[derive(Debug, Clone, Default)]
pub struct AxiomReport {
    /// Exactly one morphism from the initial object to every object.
    pub initial_ok: bool,
    pub holds_i: bool,
    pub holds_m: bool,
    /// Triples `(f, g, h)` with `g ≠ h` and `f ∘ g = f ∘ h`.
    pub m_witnesses: Vec<(MorId, MorId, MorId)>,
    pub holds_r: bool,
    pub r_failures: Vec<(CoverFamily, CoverFamily)>,
    /// The refinement search ran out of budget before finishing.
    pub r_inconclusive: bool,
    /// Noninitial objects with a morphism into the initial object.
    pub maps_into_initial: Vec<MorId>,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.initial_ok && self.holds_i && self.holds_m && self.holds_r
    }

    pub fn render(&self, asm: &Assembler) -> String {
        let cat = asm.category();
        let flag = |b: bool| if b { "OK" } else { "FAIL" };
        let mut out = String::new();
        out += &format!("initial object: {}\n", flag(self.initial_ok));
        out += &format!("axiom I: {}\n", flag(self.holds_i));
        out += &format!("axiom M: {}\n", flag(self.holds_m));
        for &(f, g, h) in &self.m_witnesses {
            out += &format!(
                "  {} identifies {} and {}\n",
                cat.morphism_name(f),
                cat.morphism_name(g),
                cat.morphism_name(h)
            );
        }
        for &f in &self.maps_into_initial {
            out += &format!("  {} maps a noninitial object into the initial one\n", cat.morphism_name(f));
        }
        let r = if self.r_inconclusive { "INCONCLUSIVE (budget)" } else { flag(self.holds_r) };
        out += &format!("axiom R: {r}\n");
        for (a, b) in &self.r_failures {
            out += &format!("  no common refinement of {} and {}\n", a.describe(cat), b.describe(cat));
        }
        out
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "I: {}, M: {}, R: {}, initial: {}",
            self.holds_i, self.holds_m, self.holds_r, self.initial_ok
        )
    }
}

impl Assembler {
    /// Checks (I), (M) and (R); each axiom gets its own budget of `limit` steps.
    ///
    /// (R) is checked on families of canonical objects with members taken up
    /// to isomorphism, which loses nothing because refinement is invariant
    /// under both replacements.
    pub fn check_axioms(&self, limit: u64) -> AxiomReport {
        let cat = self.category();
        let mut report = AxiomReport::default();

        report.initial_ok = cat.objects().all(|o| cat.hom(self.initial(), o).len() == 1);
        let empty = CoverFamily { target: self.initial(), members: Vec::new() };
        let covers_initial = self.is_covering_family(&empty, &Budget::new(limit)).unwrap_or(false);
        report.holds_i = report.initial_ok && covers_initial;

        for f in cat.morphisms() {
            if let Some((g, h)) = cat.monomorphism_witness(f) {
                report.m_witnesses.push((f, g, h));
            }
        }
        report.maps_into_initial =
            cat.hom_into(self.initial()).iter().copied().filter(|&f| cat.src(f) != self.initial()).collect();
        report.holds_m = report.m_witnesses.is_empty() && report.maps_into_initial.is_empty();

        let budget = Budget::new(limit);
        let outcome: crate::Result<()> = (|| {
            for o in cat.objects() {
                if self.canonical(o) != o {
                    continue;
                }
                let families = self.reduced_disjoint_covering_families(o, &budget)?;
                for i in 0..families.len() {
                    for j in i + 1..families.len() {
                        if self.refine_unchecked(&families[i], &families[j], &budget)?.is_none() {
                            report.r_failures.push((families[i].clone(), families[j].clone()));
                        }
                    }
                }
            }
            Ok(())
        })();
        report.r_inconclusive = outcome.is_err();
        report.holds_r = report.r_failures.is_empty() && !report.r_inconclusive;
        report
    }
}
