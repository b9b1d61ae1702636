//! Truncated simplicial sets: nerves of truncated `W`-categories, the
//! diagonal model of the level-1 space, normalized chains and integer homology.
//!
//! The level-1 space at degree `n` is the nerve of `W((S¹)ₙ ∧ C)`, modelled as
//! `W(C)ⁿ` with one factor per circle cell. Its faces merge neighbouring
//! factors by concatenating tuples and drop the factor sent to the basepoint.
//! The tuple bound applies to the total length across factors, which is
//! preserved by every face and degeneracy.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::assembler::Assembler;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::simplicial::{circle_degeneracy, circle_face};
use crate::snf::{smith, IntMatrix};
use crate::wcat::{build_w, WCategory, WMorphism};

/// Simplices up to a degree bound with faces and degeneracies as index tables.
#[derive(Clone, Debug)]
pub struct TruncatedSimplicialSet {
    /// `faces[n][x][i]` is `dᵢ x` in degree `n − 1`.
    pub faces: Vec<Vec<Vec<usize>>>,
    /// `degeneracies[n][x][i]` is `sᵢ x` in degree `n + 1`, for `n` below the bound.
    pub degeneracies: Vec<Vec<Vec<usize>>>,
    pub degenerate: Vec<Vec<bool>>,
}

impl TruncatedSimplicialSet {
    pub fn degree_bound(&self) -> usize {
        self.faces.len() - 1
    }

    pub fn count(&self, n: usize) -> usize {
        self.degenerate[n].len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.degenerate.iter().map(Vec::len).collect()
    }

    pub fn nondegenerate_count(&self, n: usize) -> usize {
        self.degenerate[n].iter().filter(|&&d| !d).count()
    }

    /// Builds the index tables from simplices given by value. Fails if a face
    /// or degeneracy leaves the listed simplices.
    fn from_simplices<K: Clone + Eq + Hash>(
        levels: Vec<Vec<K>>,
        face: impl Fn(&K, usize, usize) -> K,
        degeneracy: impl Fn(&K, usize, usize) -> K,
    ) -> Result<Self> {
        let index: Vec<HashMap<&K, usize>> =
            levels.iter().map(|l| l.iter().enumerate().map(|(i, k)| (k, i)).collect()).collect();
        let look = |n: usize, k: &K| {
            index[n].get(k).copied().ok_or_else(|| Error::Construction(format!("a structure map leaves degree {n}")))
        };
        let d = levels.len() - 1;
        let mut faces = vec![Vec::new()];
        for n in 1..=d {
            faces.push(
                levels[n]
                    .iter()
                    .map(|k| (0..=n).map(|i| look(n - 1, &face(k, n, i))).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let mut degeneracies = Vec::new();
        for n in 0..=d {
            degeneracies.push(if n == d {
                vec![Vec::new(); levels[n].len()]
            } else {
                levels[n]
                    .iter()
                    .map(|k| (0..=n).map(|i| look(n + 1, &degeneracy(k, n, i))).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?
            });
        }
        // x is degenerate iff x = sᵢ dᵢ x for some i
        let degenerate = (0..=d)
            .map(|n| {
                (0..levels[n].len())
                    .map(|x| n > 0 && (0..n).any(|i| degeneracies[n - 1][faces[n][x][i]][i] == x))
                    .collect()
            })
            .collect();
        Ok(TruncatedSimplicialSet { faces, degeneracies, degenerate })
    }

    /// Violations of the simplicial identities, by description.
    pub fn identity_failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        let d = self.degree_bound();
        for n in 2..=d {
            for x in 0..self.count(n) {
                for j in 1..=n {
                    for i in 0..j {
                        let a = self.faces[n - 1][self.faces[n][x][j]][i];
                        let b = self.faces[n - 1][self.faces[n][x][i]][j - 1];
                        if a != b {
                            out.push(format!("d_{i} d_{j} ≠ d_{} d_{i} at simplex {x} of degree {n}", j - 1));
                        }
                    }
                }
            }
        }
        for n in 0..d {
            for x in 0..self.count(n) {
                for j in 0..=n {
                    let y = self.degeneracies[n][x][j];
                    for i in 0..=n + 1 {
                        let lhs = self.faces[n + 1][y][i];
                        let rhs = if i < j {
                            self.degeneracies[n - 1][self.faces[n][x][i]][j - 1]
                        } else if i == j || i == j + 1 {
                            x
                        } else {
                            self.degeneracies[n - 1][self.faces[n][x][i - 1]][j]
                        };
                        if lhs != rhs {
                            out.push(format!("d_{i} s_{j} fails at simplex {x} of degree {n}"));
                        }
                    }
                }
            }
        }
        out
    }

    /// The normalized chain complex on nondegenerate simplices.
    pub fn chain_complex(&self) -> ChainComplex {
        let d = self.degree_bound();
        let basis: Vec<Vec<usize>> =
            (0..=d).map(|n| (0..self.count(n)).filter(|&x| !self.degenerate[n][x]).collect()).collect();
        let slot: Vec<HashMap<usize, usize>> =
            basis.iter().map(|b| b.iter().enumerate().map(|(i, &x)| (x, i)).collect()).collect();
        let mut boundaries = vec![SparseMatrix::new(basis[0].len(), 0)];
        for n in 1..=d {
            let mut m = SparseMatrix::new(basis[n].len(), basis[n - 1].len());
            for (r, &x) in basis[n].iter().enumerate() {
                for (i, &y) in self.faces[n][x].iter().enumerate() {
                    if let Some(&c) = slot[n - 1].get(&y) {
                        m.add(r, c, if i % 2 == 0 { 1 } else { -1 });
                    }
                }
            }
            boundaries.push(m);
        }
        ChainComplex { boundaries }
    }
}

/// A sparse integer matrix acting on row vectors.
#[derive(Clone, Debug)]
pub struct SparseMatrix {
    pub rows: Vec<BTreeMap<usize, i64>>,
    pub cols: usize,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows: vec![BTreeMap::new(); rows], cols }
    }

    pub fn add(&mut self, r: usize, c: usize, v: i64) {
        let e = self.rows[r].entry(c).or_insert(0);
        *e += v;
        if *e == 0 {
            self.rows[r].remove(&c);
        }
    }

    /// Whether `self · other` vanishes.
    pub fn product_is_zero(&self, other: &SparseMatrix) -> bool {
        self.rows.iter().all(|row| {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for (&k, &a) in row {
                for (&c, &b) in &other.rows[k] {
                    *acc.entry(c).or_insert(0) += a * b;
                }
            }
            acc.values().all(|&v| v == 0)
        })
    }

    fn dense(&self) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = self
            .rows
            .iter()
            .map(|r| {
                let mut v = vec![BigInt::zero(); self.cols];
                for (&c, &x) in r {
                    v[c] = BigInt::from(x);
                }
                v
            })
            .collect();
        IntMatrix::from_rows(&rows, self.cols)
    }

    /// Rank and the invariant factors other than 1. Unit pivots are
    /// eliminated sparsely; the remainder goes through Smith normal form.
    pub fn invariant_factors(&self, budget: &Budget) -> Result<(usize, Vec<BigInt>)> {
        let mut rows: Vec<BTreeMap<usize, i64>> = self.rows.iter().filter(|r| !r.is_empty()).cloned().collect();
        let mut col_rows: HashMap<usize, HashSet<usize>> = HashMap::new();
        for (i, r) in rows.iter().enumerate() {
            for &c in r.keys() {
                col_rows.entry(c).or_default().insert(i);
            }
        }
        let mut alive = vec![true; rows.len()];
        let mut rank = 0;
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&i| rows[i].len());
        let mut overflow = false;
        'pivots: for &p in &order {
            if !alive[p] {
                continue;
            }
            let Some((&c, &v)) = rows[p].iter().find(|(_, v)| v.abs() == 1) else { continue };
            let pivot = std::mem::take(&mut rows[p]);
            alive[p] = false;
            rank += 1;
            let touched: Vec<usize> = col_rows.get(&c).map(|s| s.iter().copied().collect()).unwrap_or_default();
            for q in touched {
                if !alive[q] {
                    continue;
                }
                let Some(&w) = rows[q].get(&c) else { continue };
                budget.tick("sparse elimination")?;
                let factor = w * v; // v = ±1, so w / v = w * v
                for (&k, &a) in &pivot {
                    let Some(delta) = factor.checked_mul(a) else {
                        overflow = true;
                        break 'pivots;
                    };
                    let e = rows[q].entry(k).or_insert(0);
                    let Some(x) = e.checked_sub(delta) else {
                        overflow = true;
                        break 'pivots;
                    };
                    *e = x;
                    if x == 0 {
                        rows[q].remove(&k);
                    } else if k != c {
                        col_rows.entry(k).or_default().insert(q);
                    }
                }
            }
        }
        if overflow {
            return dense_factors(&self.dense());
        }
        let rest: Vec<&BTreeMap<usize, i64>> = rows.iter().zip(&alive).filter(|(r, &a)| a && !r.is_empty()).map(|(r, _)| r).collect();
        if rest.is_empty() {
            return Ok((rank, Vec::new()));
        }
        let mut cols: Vec<usize> = rest.iter().flat_map(|r| r.keys().copied()).collect();
        cols.sort_unstable();
        cols.dedup();
        let pos: HashMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let dense: Vec<Vec<BigInt>> = rest
            .iter()
            .map(|r| {
                let mut v = vec![BigInt::zero(); cols.len()];
                for (&c, &x) in *r {
                    v[pos[&c]] = BigInt::from(x);
                }
                v
            })
            .collect();
        let (r, torsion) = dense_factors(&IntMatrix::from_rows(&dense, cols.len()))?;
        Ok((rank + r, torsion))
    }
}

fn dense_factors(m: &IntMatrix) -> Result<(usize, Vec<BigInt>)> {
    let s = smith(m, false);
    let torsion = s.diag.iter().filter(|d| !d.is_one()).map(|d| d.abs()).collect();
    Ok((s.rank(), torsion))
}

/// Boundary matrices `∂ₙ: Cₙ → Cₙ₋₁` acting on row vectors.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn degree_bound(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn rank(&self, n: usize) -> usize {
        self.boundaries[n].rows.len()
    }

    /// `∂ₙ₊₁ ∂ₙ = 0` for every composable pair.
    pub fn is_complex(&self) -> bool {
        (2..=self.degree_bound()).all(|n| self.boundaries[n].product_is_zero(&self.boundaries[n - 1]))
    }

    /// `Hᵢ`, defined only when degree `i + 1` is present.
    pub fn homology(&self, i: usize, budget: &Budget) -> Result<AbelianGroup> {
        if i + 1 > self.degree_bound() {
            return Err(Error::Parameter(format!(
                "H_{i} needs simplices up to degree {}, have {}",
                i + 1,
                self.degree_bound()
            )));
        }
        let out_rank = if i == 0 { 0 } else { self.boundaries[i].invariant_factors(budget)?.0 };
        let (in_rank, torsion) = self.boundaries[i + 1].invariant_factors(budget)?;
        Ok(AbelianGroup { free_rank: self.rank(i) - out_rank - in_rank, torsion })
    }
}

/// `Hᵢ(X)` of the normalized complex.
pub fn homology(x: &TruncatedSimplicialSet, i: usize, budget: &Budget) -> Result<AbelianGroup> {
    x.chain_complex().homology(i, budget)
}

// Every morphism of a truncated W-category with a global index.
struct Indexed<'a> {
    w: &'a WCategory,
    ends: Vec<(usize, usize)>,
    arrows: Vec<WMorphism>,
    index: HashMap<(usize, usize, WMorphism), usize>,
    identity: Vec<usize>,
}

impl<'a> Indexed<'a> {
    fn new(w: &'a WCategory, budget: &Budget) -> Result<Self> {
        let mut ends = Vec::new();
        let mut arrows = Vec::new();
        let mut index = HashMap::new();
        for (a, b, f) in w.all_morphisms(budget)? {
            index.insert((a, b, f.clone()), arrows.len());
            ends.push((a, b));
            arrows.push(f);
        }
        let identity = (0..w.objects().len()).map(|a| index[&(a, a, w.identity(a))]).collect();
        Ok(Indexed { w, ends, arrows, index, identity })
    }

    fn compose(&self, f: usize, g: usize) -> usize {
        let h = self.w.compose(&self.arrows[f], &self.arrows[g]);
        self.index[&(self.ends[f].0, self.ends[g].1, h)]
    }

    fn len(&self, a: usize) -> usize {
        self.w.objects()[a].len()
    }

    fn concat_objects(&self, a: usize, b: usize) -> usize {
        let mut t = self.w.objects()[a].clone();
        t.extend(&self.w.objects()[b]);
        self.w.object_index(&t).expect("length bound respected")
    }

    // Block sum `f ⊕ g`.
    fn concat(&self, f: usize, g: usize) -> usize {
        let ((a, b), (c, d)) = (self.ends[f], self.ends[g]);
        let shift = self.len(b);
        let (x, y) = (&self.arrows[f], &self.arrows[g]);
        let m = WMorphism {
            map: x.map.iter().copied().chain(y.map.iter().map(|j| j + shift)).collect(),
            components: x.components.iter().chain(&y.components).copied().collect(),
        };
        self.index[&(self.concat_objects(a, c), self.concat_objects(b, d), m)]
    }

    /// All chains of `n` composable morphisms, as (first object, arrows).
    fn chains(&self, n: usize, budget: &Budget) -> Result<Vec<Chain>> {
        let mut from: Vec<Vec<usize>> = vec![Vec::new(); self.w.objects().len()];
        for (f, &(a, _)) in self.ends.iter().enumerate() {
            from[a].push(f);
        }
        let mut layer: Vec<Chain> = (0..self.w.objects().len()).map(|a| Chain { start: a, arrows: Vec::new() }).collect();
        for _ in 0..n {
            let mut next = Vec::new();
            for c in &layer {
                for &f in &from[c.end(self)] {
                    budget.tick("nerve enumeration")?;
                    let mut arrows = c.arrows.clone();
                    arrows.push(f);
                    next.push(Chain { start: c.start, arrows });
                }
            }
            layer = next;
        }
        Ok(layer)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Chain {
    start: usize,
    arrows: Vec<usize>,
}

impl Chain {
    fn end(&self, ix: &Indexed) -> usize {
        self.arrows.last().map_or(self.start, |&f| ix.ends[f].1)
    }

    fn vertex(&self, ix: &Indexed, k: usize) -> usize {
        if k == 0 {
            self.start
        } else {
            ix.ends[self.arrows[k - 1]].1
        }
    }

    fn face(&self, ix: &Indexed, i: usize) -> Chain {
        let n = self.arrows.len();
        let mut arrows = self.arrows.clone();
        if i == 0 {
            let start = self.vertex(ix, 1);
            arrows.remove(0);
            Chain { start, arrows }
        } else if i == n {
            arrows.pop();
            Chain { start: self.start, arrows }
        } else {
            let g = ix.compose(arrows[i - 1], arrows[i]);
            arrows.splice(i - 1..=i, [g]);
            Chain { start: self.start, arrows }
        }
    }

    fn degeneracy(&self, ix: &Indexed, i: usize) -> Chain {
        let mut arrows = self.arrows.clone();
        arrows.insert(i, ix.identity[self.vertex(ix, i)]);
        Chain { start: self.start, arrows }
    }

    fn concat(&self, other: &Chain, ix: &Indexed) -> Chain {
        Chain {
            start: ix.concat_objects(self.start, other.start),
            arrows: self.arrows.iter().zip(&other.arrows).map(|(&f, &g)| ix.concat(f, g)).collect(),
        }
    }
}

/// The nerve of a truncated `W`-category up to degree `d`.
pub fn truncated_nerve(w: &WCategory, d: usize, budget: &Budget) -> Result<TruncatedSimplicialSet> {
    let ix = Indexed::new(w, budget)?;
    let levels = (0..=d).map(|n| ix.chains(n, budget)).collect::<Result<Vec<_>>>()?;
    TruncatedSimplicialSet::from_simplices(levels, |c, _, i| c.face(&ix, i), |c, _, i| c.degeneracy(&ix, i))
}

/// The diagonal model of the level-`k` space for `k ∈ {0, 1}`, up to degree
/// `d`, with tuples of total length at most `max_tuple`.
pub fn diagonal_level_space(
    asm: &Arc<Assembler>,
    k: usize,
    d: usize,
    max_tuple: usize,
    budget: &Budget,
) -> Result<TruncatedSimplicialSet> {
    let w = build_w(asm, max_tuple, budget)?;
    match k {
        0 => truncated_nerve(&w, d, budget),
        1 => level_one(&w, d, max_tuple, budget),
        _ => Err(Error::Parameter(format!("level {k} is not modelled; only 0 and 1"))),
    }
}

fn level_one(w: &WCategory, d: usize, max_tuple: usize, budget: &Budget) -> Result<TruncatedSimplicialSet> {
    let ix = Indexed::new(w, budget)?;
    let empty = w.object_index(&[]).expect("the empty tuple");
    let mut levels: Vec<Vec<Vec<Chain>>> = Vec::new();
    for n in 0..=d {
        let chains = ix.chains(n, budget)?;
        let mut groups: BTreeMap<Vec<usize>, Vec<Chain>> = BTreeMap::new();
        for c in chains {
            groups.entry((0..=n).map(|v| ix.len(c.vertex(&ix, v))).collect()).or_default().push(c);
        }
        let groups: Vec<(Vec<usize>, Vec<Chain>)> = groups.into_iter().collect();
        let mut out = Vec::new();
        fill(&groups, n, &mut vec![0; n + 1], max_tuple, &mut Vec::new(), &mut out, budget)?;
        levels.push(out);
    }
    let constant = |n: usize| Chain { start: empty, arrows: vec![ix.identity[empty]; n] };
    let face = |x: &Vec<Chain>, n: usize, i: usize| {
        let faced: Vec<Chain> = x.iter().map(|c| c.face(&ix, i)).collect();
        let mut out: Vec<Chain> = vec![constant(n - 1); n - 1];
        let mut filled = vec![false; n - 1];
        for (j, c) in faced.into_iter().enumerate() {
            if let Some(r) = circle_face(n, i, j + 1) {
                out[r - 1] = if filled[r - 1] { out[r - 1].concat(&c, &ix) } else { c };
                filled[r - 1] = true;
            }
        }
        out
    };
    let degeneracy = |x: &Vec<Chain>, n: usize, i: usize| {
        let mut out: Vec<Chain> = vec![constant(n + 1); n + 1];
        for (j, c) in x.iter().enumerate() {
            out[circle_degeneracy(i, j + 1) - 1] = c.degeneracy(&ix, i);
        }
        out
    };
    TruncatedSimplicialSet::from_simplices(levels, face, degeneracy)
}

// n-tuples of n-chains whose vertexwise total tuple length stays within
// bound; chains are grouped by their vertex lengths.
fn fill(
    groups: &[(Vec<usize>, Vec<Chain>)],
    n: usize,
    used: &mut Vec<usize>,
    max_tuple: usize,
    current: &mut Vec<Chain>,
    out: &mut Vec<Vec<Chain>>,
    budget: &Budget,
) -> Result<()> {
    if current.len() == n {
        out.push(current.clone());
        return Ok(());
    }
    for (len, chains) in groups {
        if used.iter().zip(len).any(|(u, l)| u + l > max_tuple) {
            continue;
        }
        for (u, l) in used.iter_mut().zip(len) {
            *u += l;
        }
        for c in chains {
            budget.tick("diagonal enumeration")?;
            current.push(c.clone());
            fill(groups, n, used, max_tuple, current, out, budget)?;
            current.pop();
        }
        for (u, l) in used.iter_mut().zip(len) {
            *u -= l;
        }
    }
    Ok(())
}
