//! Exact integer matrices, Smith normal form, and integer lattices in echelon form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A dense matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row length");
            m.data[i * cols..(i + 1) * cols].clone_from_slice(r);
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        IntMatrix::from_rows(&rows, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// The row vector `v · self`.
    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows, "dimension mismatch");
        let mut out = vec![BigInt::zero(); self.cols];
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = self.get(k, j);
                if !b.is_zero() {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    // row[target] += q · row[source]
    fn add_row(&mut self, target: usize, source: usize, q: &BigInt) {
        for j in 0..self.cols {
            let s = self.data[source * self.cols + j].clone();
            if !s.is_zero() {
                self.data[target * self.cols + j] += q * s;
            }
        }
    }

    // col[target] += q · col[source]
    fn add_col(&mut self, target: usize, source: usize, q: &BigInt) {
        for i in 0..self.rows {
            let s = self.data[i * self.cols + source].clone();
            if !s.is_zero() {
                self.data[i * self.cols + target] += q * s;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = -v;
        }
    }
}

/// `diag = left · m · right` restricted to its nonzero diagonal.
#[derive(Clone, Debug)]
pub struct Smith {
    /// Positive invariant factors, each dividing the next.
    pub diag: Vec<BigInt>,
    pub left: Option<IntMatrix>,
    pub right: IntMatrix,
    pub right_inv: IntMatrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }
}

/// Smith normal form with the column transform, its inverse, and optionally the row transform.
pub fn smith(m: &IntMatrix, want_left: bool) -> Smith {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut left = want_left.then(|| IntMatrix::identity(rows));
    let mut right = IntMatrix::identity(cols);
    let mut right_inv = IntMatrix::identity(cols);
    let mut t = 0;
    while t < rows && t < cols {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = a.get(i, j);
                if !v.is_zero() && best.map_or(true, |(bi, bj)| v.abs() < a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        if let Some(l) = left.as_mut() {
            l.swap_rows(t, pi);
        }
        a.swap_cols(t, pj);
        right.swap_cols(t, pj);
        right_inv.swap_rows(t, pj);
        'settle: loop {
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -(a.get(i, t) / a.get(t, t));
                a.add_row(i, t, &q);
                if let Some(l) = left.as_mut() {
                    l.add_row(i, t, &q);
                }
                if !a.get(i, t).is_zero() {
                    a.swap_rows(t, i);
                    if let Some(l) = left.as_mut() {
                        l.swap_rows(t, i);
                    }
                    continue 'settle;
                }
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -(a.get(t, j) / a.get(t, t));
                a.add_col(j, t, &q);
                right.add_col(j, t, &q);
                right_inv.add_row(t, j, &-q);
                if !a.get(t, j).is_zero() {
                    a.swap_cols(t, j);
                    right.swap_cols(t, j);
                    right_inv.swap_rows(t, j);
                    continue 'settle;
                }
            }
            let pivot = a.get(t, t).clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match bad {
                Some(i) => {
                    a.add_row(t, i, &BigInt::one());
                    if let Some(l) = left.as_mut() {
                        l.add_row(t, i, &BigInt::one());
                    }
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            if let Some(l) = left.as_mut() {
                l.negate_row(t);
            }
        }
        t += 1;
    }
    let diag = (0..t).map(|i| a.get(i, i).clone()).collect();
    Smith { diag, left, right, right_inv }
}

/// A sublattice of ℤⁿ kept as rows in echelon form, one per pivot column.
#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    pivots: Vec<Option<Vec<BigInt>>>,
}

impl Lattice {
    pub fn new(dim: usize) -> Self {
        Lattice { dim, pivots: vec![None; dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.pivots.iter().filter(|p| p.is_some()).count()
    }

    /// Adds `v` to the generating set.
    pub fn add(&mut self, mut v: Vec<BigInt>) {
        assert_eq!(v.len(), self.dim, "vector length");
        for c in 0..self.dim {
            if v[c].is_zero() {
                continue;
            }
            match &mut self.pivots[c] {
                None => {
                    if v[c].is_negative() {
                        v.iter_mut().for_each(|x| *x = -std::mem::take(x));
                    }
                    self.pivots[c] = Some(v);
                    return;
                }
                Some(p) => {
                    let (a, b) = (p[c].clone(), v[c].clone());
                    if b.is_multiple_of(&a) {
                        let q = &b / &a;
                        sub_multiple(&mut v, p, &q, c);
                    } else {
                        let e = a.extended_gcd(&b);
                        let (ag, bg) = (&a / &e.gcd, &b / &e.gcd);
                        let mut new_p = vec![BigInt::zero(); self.dim];
                        let mut new_v = vec![BigInt::zero(); self.dim];
                        for k in c..self.dim {
                            new_p[k] = &e.x * &p[k] + &e.y * &v[k];
                            new_v[k] = &bg * &p[k] - &ag * &v[k];
                        }
                        *p = new_p;
                        v = new_v;
                    }
                }
            }
        }
    }

    /// Basis rows ordered by pivot column.
    pub fn basis(&self) -> Vec<Vec<BigInt>> {
        self.pivots.iter().flatten().cloned().collect()
    }

    /// Integer coordinates of `v` with respect to [`Self::basis`], if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut v = v.to_vec();
        let mut coords = Vec::new();
        for c in 0..self.dim {
            let p = &self.pivots[c];
            if v[c].is_zero() {
                if p.is_some() {
                    coords.push(BigInt::zero());
                }
                continue;
            }
            let p = p.as_ref()?;
            if !v[c].is_multiple_of(&p[c]) {
                return None;
            }
            let q = &v[c] / &p[c];
            sub_multiple(&mut v, p, &q, c);
            coords.push(q);
        }
        Some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }
}

fn sub_multiple(v: &mut [BigInt], p: &[BigInt], q: &BigInt, from: usize) {
    for k in from..v.len() {
        if !p[k].is_zero() {
            v[k] -= q * &p[k];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> Smith {
        let s = smith(m, true);
        let d = s.left.as_ref().unwrap().mul(m).mul(&s.right);
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let expected = if i == j && i < s.diag.len() { s.diag[i].clone() } else { BigInt::zero() };
                assert_eq!(d.get(i, j), &expected);
            }
        }
        assert_eq!(s.right.mul(&s.right_inv), IntMatrix::identity(m.cols()));
        for w in s.diag.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn textbook_example() {
        let m = IntMatrix::from_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = check(&m);
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn rank_deficient_and_empty() {
        let m = IntMatrix::from_i64(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(check(&m).diag, vec![BigInt::one()]);
        let e = IntMatrix::zeros(0, 3);
        assert_eq!(check(&e).diag.len(), 0);
    }

    #[test]
    fn lattice_membership() {
        let mut l = Lattice::new(2);
        l.add(vec![BigInt::from(4), BigInt::from(0)]);
        l.add(vec![BigInt::from(6), BigInt::from(0)]);
        assert_eq!(l.rank(), 1);
        assert!(l.contains(&[BigInt::from(2), BigInt::from(0)]));
        assert!(!l.contains(&[BigInt::from(1), BigInt::from(0)]));
        assert!(!l.contains(&[BigInt::from(0), BigInt::from(1)]));
    }
}
