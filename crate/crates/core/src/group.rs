//! Finitely presented abelian groups and homomorphisms between them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::snf::{smith, IntMatrix, Lattice, Smith};

/// Isomorphism type of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub free_rank: usize,
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn free(rank: usize) -> Self {
        AbelianGroup { free_rank: rank, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free_of_rank(&self, rank: usize) -> bool {
        self.free_rank == rank && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("ℤ".to_string()),
            r => parts.push(format!("ℤ^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("ℤ/{t}"));
        }
        if parts.is_empty() {
            write!(out, "0")
        } else {
            write!(out, "{}", parts.join(" ⊕ "))
        }
    }
}

/// `ℤⁿ / Λ` for a relation lattice `Λ`, with Smith data for canonical coordinates.
#[derive(Clone, Debug)]
pub struct PresentedGroup {
    ngens: usize,
    relations: Vec<Vec<BigInt>>,
    smith: Smith,
    invariants: AbelianGroup,
}

impl PresentedGroup {
    pub fn new(ngens: usize, relations: impl IntoIterator<Item = Vec<BigInt>>) -> Self {
        let mut lattice = Lattice::new(ngens);
        for r in relations {
            lattice.add(r);
        }
        PresentedGroup::from_lattice(lattice)
    }

    pub fn from_lattice(lattice: Lattice) -> Self {
        let ngens = lattice.dim();
        let relations = lattice.basis();
        let smith = smith(&IntMatrix::from_rows(&relations, ngens), false);
        let torsion = smith.diag.iter().filter(|d| !d.is_one()).cloned().collect();
        let invariants = AbelianGroup { free_rank: ngens - smith.rank(), torsion };
        PresentedGroup { ngens, relations, smith, invariants }
    }

    pub fn generator_count(&self) -> usize {
        self.ngens
    }

    /// A basis of the relation lattice, in echelon form.
    pub fn relation_basis(&self) -> &[Vec<BigInt>] {
        &self.relations
    }

    pub fn smith(&self) -> &Smith {
        &self.smith
    }

    pub fn invariants(&self) -> &AbelianGroup {
        &self.invariants
    }

    /// Number of canonical coordinates: torsion coordinates first, then free ones.
    pub fn coordinate_count(&self) -> usize {
        self.invariants.torsion.len() + self.invariants.free_rank
    }

    // Index into the Smith basis for each canonical coordinate.
    fn coordinate_slots(&self) -> Vec<usize> {
        let mut slots: Vec<usize> = (0..self.smith.rank()).filter(|&i| !self.smith.diag[i].is_one()).collect();
        slots.extend(self.smith.rank()..self.ngens);
        slots
    }

    /// Canonical coordinates of the class of `x ∈ ℤⁿ`; torsion entries reduced
    /// into `[0, d)`.
    pub fn coordinates(&self, x: &[BigInt]) -> Vec<BigInt> {
        let y = self.smith.right.apply(x);
        self.coordinate_slots()
            .into_iter()
            .map(|i| if i < self.smith.rank() { y[i].mod_floor(&self.smith.diag[i]) } else { y[i].clone() })
            .collect()
    }

    pub fn is_zero(&self, x: &[BigInt]) -> bool {
        self.coordinates(x).iter().all(|c| c.is_zero())
    }

    /// A vector of ℤⁿ whose class is the `k`-th canonical generator.
    pub fn generator_vector(&self, k: usize) -> Vec<BigInt> {
        let slot = self.coordinate_slots()[k];
        self.smith.right_inv.row(slot).to_vec()
    }

    pub fn unit(&self, i: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.ngens];
        v[i] = BigInt::one();
        v
    }
}

/// A homomorphism `ℤⁿ/Λ → ℤᵖ/Λ'` given by an integer matrix acting on row vectors.
#[derive(Clone, Debug)]
pub struct GroupHom {
    pub source: PresentedGroup,
    pub target: PresentedGroup,
    pub matrix: IntMatrix,
}

impl GroupHom {
    pub fn new(source: PresentedGroup, target: PresentedGroup, matrix: IntMatrix) -> Self {
        assert_eq!(matrix.rows(), source.generator_count());
        assert_eq!(matrix.cols(), target.generator_count());
        GroupHom { source, target, matrix }
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix.apply(x)
    }

    /// Every source relation maps to zero.
    pub fn is_well_defined(&self) -> bool {
        self.source.relation_basis().iter().all(|r| self.target.is_zero(&self.apply(r)))
    }

    /// Source relations whose images are nonzero.
    pub fn ill_defined_relations(&self) -> Vec<Vec<BigInt>> {
        self.source
            .relation_basis()
            .iter()
            .filter(|r| !self.target.is_zero(&self.apply(r)))
            .cloned()
            .collect()
    }

    pub fn cokernel(&self) -> PresentedGroup {
        let rows = self.target.relation_basis().iter().cloned().chain(self.matrix.to_rows());
        PresentedGroup::new(self.target.generator_count(), rows)
    }

    /// The kernel, presented on a basis of its preimage lattice.
    pub fn kernel(&self) -> PresentedGroup {
        let n = self.source.generator_count();
        let mut rows = self.matrix.to_rows();
        rows.extend(self.target.relation_basis().iter().cloned());
        let stacked = IntMatrix::from_rows(&rows, self.target.generator_count());
        let s = smith(&stacked, true);
        let left = s.left.as_ref().expect("left transform requested");
        let mut preimage = Lattice::new(n);
        for i in s.rank()..left.rows() {
            preimage.add(left.row(i)[..n].to_vec());
        }
        for r in self.source.relation_basis() {
            preimage.add(r.clone());
        }
        let coords: Vec<Vec<BigInt>> = self
            .source
            .relation_basis()
            .iter()
            .map(|r| preimage.coordinates(r).expect("relations lie in the preimage lattice"))
            .collect();
        PresentedGroup::new(preimage.rank(), coords)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().invariants().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().invariants().is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_well_defined() && self.is_injective() && self.is_surjective()
    }

    /// Images of the source's canonical generators in the target's canonical coordinates.
    pub fn canonical_matrix(&self) -> Vec<Vec<BigInt>> {
        (0..self.source.coordinate_count())
            .map(|k| self.target.coordinates(&self.apply(&self.source.generator_vector(k))))
            .collect()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        GroupHom::new(self.source.clone(), other.target.clone(), self.matrix.mul(&other.matrix))
    }

    /// Whether two homomorphisms with the same source and target agree.
    pub fn agrees_with(&self, other: &GroupHom) -> bool {
        (0..self.source.generator_count()).all(|i| {
            let e = self.source.unit(i);
            let diff: Vec<BigInt> = self.apply(&e).iter().zip(other.apply(&e)).map(|(a, b)| a - b).collect();
            self.target.is_zero(&diff)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn invariants_of_small_presentations() {
        assert_eq!(PresentedGroup::new(0, vec![]).invariants().to_string(), "0");
        assert_eq!(PresentedGroup::new(2, vec![ints(&[1, -1])]).invariants().to_string(), "ℤ");
        let g = PresentedGroup::new(2, vec![ints(&[2, 0]), ints(&[0, 3])]);
        assert_eq!(g.invariants().to_string(), "ℤ/6");
    }

    #[test]
    fn torsion_coordinates_are_reduced() {
        let g = PresentedGroup::new(1, vec![ints(&[4])]);
        assert_eq!(g.coordinates(&ints(&[5])), g.coordinates(&ints(&[1])));
        assert!(g.is_zero(&ints(&[-8])));
    }

    #[test]
    fn multiplication_by_two_on_z() {
        let z = PresentedGroup::new(1, vec![]);
        let h = GroupHom::new(z.clone(), z, IntMatrix::from_i64(&[vec![2]]));
        assert!(h.is_injective());
        assert!(!h.is_surjective());
        assert_eq!(h.cokernel().invariants().to_string(), "ℤ/2");
    }

    #[test]
    fn kernel_of_projection() {
        // ℤ² → ℤ, (a, b) ↦ a + b, kernel ℤ.
        let src = PresentedGroup::new(2, vec![]);
        let tgt = PresentedGroup::new(1, vec![]);
        let h = GroupHom::new(src, tgt, IntMatrix::from_i64(&[vec![1], vec![1]]));
        assert_eq!(h.kernel().invariants().to_string(), "ℤ");
        // ℤ/4 → ℤ/2 reduction has kernel ℤ/2.
        let src = PresentedGroup::new(1, vec![ints(&[4])]);
        let tgt = PresentedGroup::new(1, vec![ints(&[2])]);
        let h = GroupHom::new(src, tgt, IntMatrix::from_i64(&[vec![1]]));
        assert!(h.is_well_defined());
        assert_eq!(h.kernel().invariants().to_string(), "ℤ/2");
    }
}
