//! Built-in assemblers: group spheres, finite sets, open sets of finite
//! spaces, finite posets, and lattice intervals on the line.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::assembler::{Assembler, SiteBuilder, INITIAL};
use crate::category::ObjId;
use crate::error::{Error, Result};

/// Name of the single noninitial object of a group sphere.
pub const POINT: &str = "∗";

/// The assembler with only the initial object.
pub fn trivial() -> Arc<Assembler> {
    Arc::new(SiteBuilder::new().build().expect("trivial assembler"))
}

/// A finite group given by its multiplication table `table[a][b] = a·b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    pub labels: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Checks closure, associativity, identity and inverses.
    pub fn new(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 || table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::Parameter("multiplication table must be square over the labels".into()));
        }
        let g = FiniteGroup { labels, table };
        let e = g.find_identity().ok_or_else(|| Error::Parameter("no identity element".into()))?;
        for a in 0..n {
            if !(0..n).any(|b| g.mul(a, b) == e) {
                return Err(Error::Parameter(format!("{} has no inverse", g.labels[a])));
            }
            for b in 0..n {
                for c in 0..n {
                    if g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)) {
                        return Err(Error::Parameter("multiplication is not associative".into()));
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn trivial() -> Self {
        FiniteGroup::cyclic(1)
    }

    pub fn cyclic(n: usize) -> Self {
        let labels = (0..n).map(|k| k.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup { labels, table }
    }

    /// Permutations of three letters, labelled by their one-line notation.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> =
            vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let index: HashMap<[usize; 3], usize> = perms.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let labels = perms.iter().map(|p| p.iter().map(|x| (x + 1).to_string()).collect()).collect();
        // (a·b)(x) = a(b(x))
        let table = perms
            .iter()
            .map(|a| perms.iter().map(|b| index[&[a[b[0]], a[b[1]], a[b[2]]]]).collect())
            .collect();
        FiniteGroup { labels, table }
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn identity(&self) -> usize {
        self.find_identity().expect("validated group")
    }

    fn find_identity(&self) -> Option<usize> {
        let n = self.order();
        (0..n).find(|&e| (0..n).all(|a| self.table[e][a] == a && self.table[a][e] == a))
    }

    pub fn inverse(&self, a: usize) -> usize {
        let e = self.identity();
        (0..self.order()).find(|&b| self.mul(a, b) == e).expect("validated group")
    }

    /// The group with multiplication `a ∗ b = b·a`.
    pub fn opposite(&self) -> Self {
        let n = self.order();
        let table = (0..n).map(|a| (0..n).map(|b| self.table[b][a]).collect()).collect();
        FiniteGroup { labels: self.labels.clone(), table }
    }

    /// A bijection `φ` with `φ(a·b) = φ(a)·φ(b)`, found by backtracking.
    pub fn isomorphism_to(&self, other: &FiniteGroup) -> Option<Vec<usize>> {
        let n = self.order();
        if n != other.order() {
            return None;
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        map[self.identity()] = other.identity();
        used[other.identity()] = true;
        fn extend(g: &FiniteGroup, h: &FiniteGroup, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            let n = g.order();
            let Some(a) = (0..n).find(|&a| map[a] == usize::MAX) else {
                return (0..n).all(|a| (0..n).all(|b| map[g.mul(a, b)] == h.mul(map[a], map[b])));
            };
            for t in 0..n {
                if used[t] {
                    continue;
                }
                map[a] = t;
                used[t] = true;
                let consistent = (0..n).all(|x| {
                    (0..n).all(|y| {
                        let (mx, my, mxy) = (map[x], map[y], map[g.mul(x, y)]);
                        mx == usize::MAX || my == usize::MAX || mxy == usize::MAX || mxy == h.mul(mx, my)
                    })
                });
                if consistent && extend(g, h, map, used) {
                    return true;
                }
                map[a] = usize::MAX;
                used[t] = false;
            }
            false
        }
        extend(self, other, &mut map, &mut used).then_some(map)
    }
}

/// Name of the automorphism of `∗` for the element labelled `label`.
pub fn element_name(label: &str) -> String {
    format!("g:{label}")
}

/// The assembler with objects `∅` and `∗` and `Aut(∗) = G`; the composite
/// of `a` followed by `b` is `b·a`.
pub fn sphere_group(group: &FiniteGroup) -> Result<Arc<Assembler>> {
    let mut b = SiteBuilder::new();
    let star = b.object(POINT)?;
    let e = group.identity();
    let mut ids = Vec::with_capacity(group.order());
    for (k, label) in group.labels.iter().enumerate() {
        if k == e {
            ids.push(b.identity_of(star));
        } else {
            ids.push(b.morphism(element_name(label), star, star)?);
        }
    }
    for x in 0..group.order() {
        for y in 0..group.order() {
            b.compose(ids[x], ids[y], ids[group.mul(y, x)]);
        }
    }
    Ok(Arc::new(b.build()?))
}

/// The morphism of a group sphere that corresponds to element `k`.
pub fn element_morphism(asm: &Assembler, group: &FiniteGroup, k: usize) -> Result<crate::category::MorId> {
    if k == group.identity() {
        Ok(asm.category().id(asm.object_id(POINT)?))
    } else {
        asm.morphism_id(&element_name(&group.labels[k]))
    }
}

fn set_name(elements: &[usize]) -> String {
    if elements.is_empty() {
        return INITIAL.to_string();
    }
    let parts: Vec<String> = elements.iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// Name of the injection `a → b` sending the `i`-th element of `a` to `images[i]`.
pub fn injection_name(a: &[usize], b: &[usize], images: &[usize]) -> String {
    let parts: Vec<String> = images.iter().map(|e| e.to_string()).collect();
    format!("{}->{}[{}]", set_name(a), set_name(b), parts.join(","))
}

/// Subsets of `{1..n}` with all injections; covered by singleton inclusions.
pub fn finite_sets(n: usize) -> Result<Arc<Assembler>> {
    if n > 3 {
        return Err(Error::Parameter(format!("finite_sets supports n ≤ 3, got {n}")));
    }
    let subsets: Vec<Vec<usize>> = (0u32..1 << n)
        .map(|mask| (1..=n).filter(|&i| mask & (1 << (i - 1)) != 0).collect())
        .collect();
    let mut b = SiteBuilder::new();
    let mut obj = vec![b.initial()];
    for s in subsets.iter().skip(1) {
        obj.push(b.object(set_name(s))?);
    }
    // key: (source subset, target subset, images) -> builder morphism
    let mut maps: HashMap<(usize, usize, Vec<usize>), usize> = HashMap::new();
    for (i, a) in subsets.iter().enumerate().skip(1) {
        for (j, t) in subsets.iter().enumerate().skip(1) {
            for images in injections(a.len(), t) {
                let m = if i == j && images == *a {
                    b.identity_of(obj[i])
                } else {
                    b.morphism(injection_name(a, t, &images), obj[i], obj[j])?
                };
                maps.insert((i, j, images), m);
            }
        }
    }
    for ((i, j, f), &m1) in &maps {
        for ((j2, k, g), &m2) in &maps {
            if j != j2 {
                continue;
            }
            let b_set = &subsets[*j];
            let composite: Vec<usize> = f
                .iter()
                .map(|x| g[b_set.iter().position(|y| y == x).expect("image in target")])
                .collect();
            b.compose(m1, m2, maps[&(*i, *k, composite)]);
        }
    }
    for (j, t) in subsets.iter().enumerate() {
        if t.len() < 2 {
            continue;
        }
        let members = t
            .iter()
            .map(|&x| {
                let i = subsets.iter().position(|s| s == &vec![x]).unwrap();
                maps[&(i, j, vec![x])]
            })
            .collect();
        b.cover(obj[j], members);
    }
    Ok(Arc::new(b.build()?))
}

fn injections(k: usize, target: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(k: usize, target: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for &t in target {
            if !cur.contains(&t) {
                cur.push(t);
                go(k, target, cur, out);
                cur.pop();
            }
        }
    }
    go(k, target, &mut cur, &mut out);
    out
}

/// Objects of `finite_sets(n)` with at most one element: the point subassembler.
pub fn singleton_objects(asm: &Assembler) -> Vec<ObjId> {
    asm.category()
        .objects()
        .filter(|&o| asm.is_initial(o) || !asm.object_name(o).contains(','))
        .collect()
}

/// A finite topological space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSpace {
    pub points: Vec<String>,
    /// Open sets as sorted point indices; must include `∅` and the whole space.
    pub opens: Vec<Vec<usize>>,
}

impl FiniteSpace {
    pub fn new(points: Vec<String>, opens: Vec<Vec<usize>>) -> Result<Self> {
        if points.len() > 4 {
            return Err(Error::Parameter("open_sets supports at most 4 points".into()));
        }
        let set: BTreeSet<Vec<usize>> = opens
            .iter()
            .map(|o| {
                let mut o = o.clone();
                o.sort();
                o.dedup();
                o
            })
            .collect();
        let all: Vec<usize> = (0..points.len()).collect();
        if !set.contains(&Vec::new()) || !set.contains(&all) {
            return Err(Error::Parameter("opens must contain the empty set and the whole space".into()));
        }
        for a in &set {
            for b in &set {
                let union: BTreeSet<usize> = a.iter().chain(b).copied().collect();
                let inter: Vec<usize> = a.iter().filter(|x| b.contains(x)).copied().collect();
                if !set.contains(&union.into_iter().collect::<Vec<_>>()) || !set.contains(&inter) {
                    return Err(Error::Parameter("opens are not closed under unions and intersections".into()));
                }
            }
        }
        Ok(FiniteSpace { points, opens: set.into_iter().collect() })
    }

    /// Points `a, b` with opens `∅, {a}, {a,b}`.
    pub fn sierpinski() -> Self {
        FiniteSpace::new(vec!["a".into(), "b".into()], vec![vec![], vec![0], vec![0, 1]]).unwrap()
    }

    pub fn discrete(n: usize) -> Result<Self> {
        let points = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        let opens = (0u32..1 << n).map(|m| (0..n).filter(|&i| m & (1 << i) != 0).collect()).collect();
        FiniteSpace::new(points, opens)
    }

    /// Nonempty opens that are not a disjoint union of two nonempty opens.
    pub fn connected_opens(&self) -> Vec<Vec<usize>> {
        self.opens
            .iter()
            .filter(|u| !u.is_empty())
            .filter(|u| {
                !self.opens.iter().any(|v| {
                    !v.is_empty()
                        && v.len() < u.len()
                        && v.iter().all(|x| u.contains(x))
                        && self.opens.iter().any(|w| {
                            !w.is_empty()
                                && w.len() + v.len() == u.len()
                                && w.iter().all(|x| u.contains(x) && !v.contains(x))
                        })
                })
            })
            .cloned()
            .collect()
    }

    pub fn open_name(&self, open: &[usize]) -> String {
        if open.is_empty() {
            return INITIAL.to_string();
        }
        let names: Vec<&str> = open.iter().map(|&i| self.points[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// Opens of a finite space ordered by inclusion, covered by open covers.
pub fn open_sets(space: &FiniteSpace) -> Result<Arc<Assembler>> {
    let opens = &space.opens;
    let mut b = SiteBuilder::new();
    let obj: Vec<usize> = opens
        .iter()
        .map(|u| if u.is_empty() { Ok(b.initial()) } else { b.object(space.open_name(u)) })
        .collect::<Result<_>>()?;
    let subset = |a: &Vec<usize>, c: &Vec<usize>| a.iter().all(|x| c.contains(x));
    let mut incl: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, u) in opens.iter().enumerate() {
        for (j, v) in opens.iter().enumerate() {
            if !subset(u, v) {
                continue;
            }
            let m = if i == j {
                b.identity_of(obj[i])
            } else if u.is_empty() {
                b.init_of(obj[j])
            } else {
                b.morphism(format!("{}->{}", space.open_name(u), space.open_name(v)), obj[i], obj[j])?
            };
            incl.insert((i, j), m);
        }
    }
    for (&(i, j), &m1) in &incl {
        for (&(j2, k), &m2) in &incl {
            if j == j2 {
                b.compose(m1, m2, incl[&(i, k)]);
            }
        }
    }
    for (j, v) in opens.iter().enumerate() {
        if v.is_empty() {
            continue;
        }
        let mut members: Vec<usize> = v
            .iter()
            .map(|&x| {
                (0..opens.len())
                    .filter(|&i| opens[i].contains(&x))
                    .min_by_key(|&i| opens[i].len())
                    .expect("whole space is open")
            })
            .collect();
        members.sort();
        members.dedup();
        if members.contains(&j) {
            continue;
        }
        b.cover(obj[j], members.into_iter().map(|i| incl[&(i, j)]).collect());
    }
    Ok(Arc::new(b.build()?))
}

/// The assembler of a finite poset with least element `∅`, with morphisms
/// named `X->Y`. `order` lists generating relations `x ≤ y`; declared covers
/// are given as `(target, [sources])`.
pub fn poset(objects: &[&str], order: &[(&str, &str)], covers: &[(&str, Vec<&str>)]) -> Result<Arc<Assembler>> {
    let n = objects.len();
    let index: HashMap<&str, usize> = objects.iter().enumerate().map(|(i, o)| (*o, i)).collect();
    let lookup = |name: &str| index.get(name).copied().ok_or_else(|| Error::UnknownObject(name.to_string()));
    let mut leq = vec![vec![false; n]; n];
    for i in 0..n {
        leq[i][i] = true;
    }
    for (a, c) in order {
        leq[lookup(a)?][lookup(c)?] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if leq[i][k] && leq[k][j] {
                    leq[i][j] = true;
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && leq[i][j] && leq[j][i] {
                return Err(Error::Parameter(format!("{} and {} form a cycle", objects[i], objects[j])));
            }
        }
    }
    let mut b = SiteBuilder::new();
    let obj: Vec<usize> = objects.iter().map(|o| b.object(*o)).collect::<Result<_>>()?;
    let mut mors: HashMap<(usize, usize), usize> = HashMap::new();
    for i in 0..n {
        mors.insert((i, i), b.identity_of(obj[i]));
        for j in 0..n {
            if i != j && leq[i][j] {
                mors.insert((i, j), b.morphism(format!("{}->{}", objects[i], objects[j]), obj[i], obj[j])?);
            }
        }
    }
    for (&(i, j), &m1) in &mors {
        for (&(j2, k), &m2) in &mors {
            if j == j2 {
                b.compose(m1, m2, mors[&(i, k)]);
            }
        }
    }
    for (t, sources) in covers {
        let t = lookup(t)?;
        let mut members = Vec::new();
        for s in sources {
            let s = lookup(s)?;
            members.push(*mors.get(&(s, t)).ok_or_else(|| {
                Error::InvalidFamily(format!("{} is not below {}", objects[s], objects[t]))
            })?);
        }
        b.cover(obj[t], members);
    }
    Ok(Arc::new(b.build()?))
}

/// The preorder `∅ → A → {B, C} → D` with declared cover `{B→D, C→D}`, and
/// the sieve `{∅, A}`.
pub fn preorder5() -> Result<(Arc<Assembler>, Vec<ObjId>)> {
    let asm = poset(
        &["A", "B", "C", "D"],
        &[("A", "B"), ("A", "C"), ("B", "D"), ("C", "D")],
        &[("D", vec!["B", "C"])],
    )?;
    let sieve = vec![asm.initial(), asm.object_id("A")?];
    Ok((asm, sieve))
}

/// `∅ < C < {A, B} < S` with every singleton family covering.
pub fn poset_sink() -> Result<Arc<Assembler>> {
    poset(
        &["A", "B", "C", "S"],
        &[("C", "A"), ("C", "B"), ("A", "S"), ("B", "S")],
        &[("A", vec!["C"]), ("B", vec!["C"]), ("S", vec!["A"]), ("S", vec!["B"]), ("S", vec!["C"])],
    )
}

/// Which pieces of the line an interval fixture contains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalVariant {
    /// Closed intervals of positive length.
    Classical,
    /// Points and intervals with any combination of open and closed ends.
    Total,
}

impl std::str::FromStr for IntervalVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(IntervalVariant::Classical),
            "total" => Ok(IntervalVariant::Total),
            other => Err(Error::Parameter(format!("unknown interval variant `{other}`"))),
        }
    }
}

/// A piece of the line with endpoints in units of `1/N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub lo: i64,
    pub hi: i64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Piece {
    pub fn point(p: i64) -> Self {
        Piece { lo: p, hi: p, lo_closed: true, hi_closed: true }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Image under `x ↦ s·x + t`.
    fn moved(&self, s: i64, t: i64) -> Piece {
        if s == 1 {
            Piece { lo: self.lo + t, hi: self.hi + t, ..*self }
        } else {
            Piece { lo: t - self.hi, hi: t - self.lo, lo_closed: self.hi_closed, hi_closed: self.lo_closed }
        }
    }

    fn within(&self, other: &Piece) -> bool {
        let lower = self.lo > other.lo || (self.lo == other.lo && (other.lo_closed || !self.lo_closed));
        let upper = self.hi < other.hi || (self.hi == other.hi && (other.hi_closed || !self.hi_closed));
        lower && upper
    }

    pub fn name(&self, n: i64) -> String {
        if self.is_point() {
            return format!("{{{}}}", fraction(self.lo, n));
        }
        format!(
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            fraction(self.lo, n),
            fraction(self.hi, n),
            if self.hi_closed { ']' } else { ')' }
        )
    }

    /// Length in units of `1/N`.
    pub fn length(&self) -> i64 {
        self.hi - self.lo
    }

    /// Euler characteristic with compact support: points 1, open cells −1.
    pub fn euler(&self) -> i64 {
        if self.is_point() {
            1
        } else {
            self.lo_closed as i64 + self.hi_closed as i64 - 1
        }
    }
}

fn fraction(k: i64, n: i64) -> String {
    let g = num_integer::gcd(k, n).max(1);
    let (p, q) = (k / g, n / g);
    if q == 1 {
        p.to_string()
    } else {
        format!("{p}/{q}")
    }
}

fn affine_name(s: i64, t: i64, n: i64) -> String {
    let x = if s == 1 { "x" } else { "-x" };
    match t.signum() {
        0 => x.to_string(),
        1 => format!("{x}+{}", fraction(t, n)),
        _ => format!("{x}-{}", fraction(-t, n)),
    }
}

/// An interval fixture with its pieces and, for the total variant, the sieve of points.
#[derive(Clone, Debug)]
pub struct IntervalFixture {
    pub asm: Arc<Assembler>,
    pub n: i64,
    pub pieces: HashMap<ObjId, Piece>,
    pub points: Option<Vec<ObjId>>,
}

/// Pieces of `[0, M]` with endpoints in `(1/N)ℤ`, morphisms the lattice
/// translations (and reflections when `reflections` is set) carrying one
/// piece into another.
pub fn intervals(n: i64, m: i64, variant: IntervalVariant, reflections: bool) -> Result<IntervalFixture> {
    if n < 1 || m < 1 || n * m > 6 {
        return Err(Error::Parameter(format!("intervals needs N, M ≥ 1 and N·M ≤ 6, got N={n}, M={m}")));
    }
    let k = n * m;
    let mut pieces = Vec::new();
    for lo in 0..=k {
        if variant == IntervalVariant::Total {
            pieces.push(Piece::point(lo));
        }
        for hi in lo + 1..=k {
            let ends: &[(bool, bool)] = match variant {
                IntervalVariant::Classical => &[(true, true)],
                IntervalVariant::Total => &[(true, true), (true, false), (false, true), (false, false)],
            };
            for &(lo_closed, hi_closed) in ends {
                pieces.push(Piece { lo, hi, lo_closed, hi_closed });
            }
        }
    }
    let mut b = SiteBuilder::new();
    let obj: Vec<usize> = pieces.iter().map(|p| b.object(p.name(n))).collect::<Result<_>>()?;
    let piece_index: HashMap<Piece, usize> = pieces.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let signs: &[i64] = if reflections { &[1, -1] } else { &[1] };
    // key: (source piece, target piece, sign, shift)
    let mut mors: HashMap<(usize, usize, i64, i64), usize> = HashMap::new();
    let mut out_of: Vec<Vec<(usize, i64, i64, usize)>> = vec![Vec::new(); pieces.len()];
    for (i, p) in pieces.iter().enumerate() {
        for (j, q) in pieces.iter().enumerate() {
            for &s in signs {
                for t in -2 * k..=2 * k {
                    if !p.moved(s, t).within(q) {
                        continue;
                    }
                    let morphism = if i == j && s == 1 && t == 0 {
                        b.identity_of(obj[i])
                    } else {
                        b.morphism(
                            format!("{}->{}|{}", p.name(n), q.name(n), affine_name(s, t, n)),
                            obj[i],
                            obj[j],
                        )?
                    };
                    mors.insert((i, j, s, t), morphism);
                    out_of[i].push((j, s, t, morphism));
                }
            }
        }
    }
    for (&(i, j, s1, t1), &m1) in &mors {
        for &(l, s2, t2, m2) in &out_of[j] {
            b.compose(m1, m2, mors[&(i, l, s2 * s1, s2 * t1 + t2)]);
        }
    }
    let inclusion = |a: &Piece, c: &Piece| mors[&(piece_index[a], piece_index[c], 1, 0)];
    for (j, p) in pieces.iter().enumerate() {
        if p.is_point() {
            continue;
        }
        for c in p.lo + 1..p.hi {
            let splits: Vec<(Piece, Piece)> = match variant {
                IntervalVariant::Classical => vec![(
                    Piece { hi: c, ..*p },
                    Piece { lo: c, ..*p },
                )],
                IntervalVariant::Total => vec![
                    (Piece { hi: c, hi_closed: true, ..*p }, Piece { lo: c, lo_closed: false, ..*p }),
                    (Piece { hi: c, hi_closed: false, ..*p }, Piece { lo: c, lo_closed: true, ..*p }),
                ],
            };
            for (left, right) in splits {
                b.cover(obj[j], vec![inclusion(&left, p), inclusion(&right, p)]);
            }
        }
        if variant == IntervalVariant::Total {
            if p.lo_closed {
                let rest = Piece { lo_closed: false, ..*p };
                b.cover(obj[j], vec![inclusion(&Piece::point(p.lo), p), inclusion(&rest, p)]);
            }
            if p.hi_closed {
                let rest = Piece { hi_closed: false, ..*p };
                b.cover(obj[j], vec![inclusion(&Piece::point(p.hi), p), inclusion(&rest, p)]);
            }
        }
    }
    let asm = Arc::new(b.build()?);
    let mut by_id = HashMap::new();
    for p in &pieces {
        by_id.insert(asm.object_id(&p.name(n))?, *p);
    }
    let points = (variant == IntervalVariant::Total).then(|| {
        let mut pts: Vec<ObjId> =
            by_id.iter().filter(|(_, p)| p.is_point()).map(|(&o, _)| o).collect();
        pts.push(asm.initial());
        pts.sort();
        pts
    });
    Ok(IntervalFixture { asm, n, pieces: by_id, points })
}

impl IntervalFixture {
    pub fn piece(&self, o: ObjId) -> Option<&Piece> {
        self.pieces.get(&o)
    }

    pub fn object(&self, piece: Piece) -> Result<ObjId> {
        self.asm.object_id(&piece.name(self.n))
    }
}
