//! Finitely generated Abelian groups in the presentation `Z^r × ∏ Z/n_i`.
//!
//! Elements are integer coordinate vectors: the first `rank` coordinates are
//! free, the remaining ones are reduced into `[0, n_i)`. Nothing is
//! canonicalized to invariant factors; the presentation the caller gives is
//! the one coordinates refer to.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("cannot parse group literal {0:?}: {1}")]
    ParseGroup(String, String),
    #[error("cannot parse element literal {0:?}")]
    ParseElement(String),
    #[error("torsion orders must be at least 2, got {0}")]
    BadTorsion(u64),
    #[error("element {element} does not belong to {group}")]
    Mismatch { element: String, group: String },
    #[error("invalid domain: {0}")]
    BadDomain(String),
    #[error("coset modulus must be 2 or 4, got {0}")]
    BadModulus(u32),
}

/// `Z^rank × Z/torsion[0] × …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    rank: usize,
    torsion: Vec<u64>,
}

impl GroupSpec {
    pub fn new(rank: usize, torsion: Vec<u64>) -> Result<Self, GroupError> {
        if let Some(&n) = torsion.iter().find(|&&n| n < 2) {
            return Err(GroupError::BadTorsion(n));
        }
        Ok(GroupSpec { rank, torsion })
    }

    pub fn free(rank: usize) -> Self {
        GroupSpec {
            rank,
            torsion: Vec::new(),
        }
    }

    pub fn finite(torsion: &[u64]) -> Result<Self, GroupError> {
        Self::new(0, torsion.to_vec())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    /// Number of coordinates, `rank + |torsion|`.
    pub fn ncoords(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Modulus of coordinate `i`, `None` for free coordinates.
    pub fn modulus(&self, i: usize) -> Option<u64> {
        (i >= self.rank).then(|| self.torsion[i - self.rank])
    }

    /// `X^(2) = X`, i.e. doubling is onto: no free part and only odd orders.
    pub fn doubling_is_onto(&self) -> bool {
        self.rank == 0 && self.torsion.iter().all(|n| n % 2 == 1)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.ncoords()])
    }

    /// Generator `e_i` of coordinate `i`.
    pub fn basis(&self, i: usize) -> GroupElement {
        let mut c = vec![0; self.ncoords()];
        c[i] = 1;
        GroupElement(c)
    }

    pub fn reduce_in_place(&self, coords: &mut [i64]) {
        for (c, &n) in coords[self.rank..].iter_mut().zip(&self.torsion) {
            *c = c.rem_euclid(n as i64);
        }
    }

    /// Builds an element, reducing torsion coordinates.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement, GroupError> {
        if coords.len() != self.ncoords() {
            return Err(GroupError::Mismatch {
                element: fmt_coords(coords),
                group: self.to_string(),
            });
        }
        let mut c = coords.to_vec();
        self.reduce_in_place(&mut c);
        Ok(GroupElement(c))
    }

    /// Whether `x` is a reduced element of this group.
    pub fn contains(&self, x: &GroupElement) -> bool {
        x.0.len() == self.ncoords()
            && x.0[self.rank..]
                .iter()
                .zip(&self.torsion)
                .all(|(&c, &n)| (0..n as i64).contains(&c))
    }

    fn check(&self, x: &GroupElement) -> Result<(), GroupError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(GroupError::Mismatch {
                element: x.to_string(),
                group: self.to_string(),
            })
        }
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_unchecked(x, y))
    }

    pub fn sub(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_unchecked(x, &self.neg(y)))
    }

    pub(crate) fn add_unchecked(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let mut c: Vec<i64> = x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect();
        self.reduce_in_place(&mut c);
        GroupElement(c)
    }

    pub fn neg(&self, x: &GroupElement) -> GroupElement {
        self.scale(-1, x)
    }

    /// `n·x`.
    pub fn scale(&self, n: i64, x: &GroupElement) -> GroupElement {
        let mut c: Vec<i64> = x.0.iter().map(|a| a * n).collect();
        self.reduce_in_place(&mut c);
        GroupElement(c)
    }

    /// Index of the coset `x + X^(m)` in `X / X^(m)`, `m ∈ {2, 4}`.
    pub fn coset_index(&self, x: &GroupElement, modulus: u32) -> Result<CosetIndex, GroupError> {
        if modulus != 2 && modulus != 4 {
            return Err(GroupError::BadModulus(modulus));
        }
        Ok(self.coset_index_of(&x.0, modulus))
    }

    pub(crate) fn coset_index_of(&self, coords: &[i64], modulus: u32) -> CosetIndex {
        let m = modulus as i64;
        let residues = coords
            .iter()
            .enumerate()
            .map(|(i, &c)| c.rem_euclid(self.coset_radix(i, modulus) as i64))
            .collect();
        debug_assert!(m == 2 || m == 4);
        CosetIndex { modulus, residues }
    }

    /// Size of coordinate `i` in `X / X^(m)`: `m` on free coordinates,
    /// `gcd(m, n_i)` on torsion ones.
    pub(crate) fn coset_radix(&self, i: usize, modulus: u32) -> u64 {
        match self.modulus(i) {
            None => modulus as u64,
            Some(n) => n.gcd(&(modulus as u64)),
        }
    }

    /// `|X / X^(m)| = m^rank · ∏ gcd(m, n_i)`.
    pub fn coset_count(&self, modulus: u32) -> u64 {
        (0..self.ncoords())
            .map(|i| self.coset_radix(i, modulus))
            .product()
    }

    /// All coset indices for `X / X^(m)` in lexicographic order.
    pub fn coset_indices(&self, modulus: u32) -> Vec<CosetIndex> {
        let radix: Vec<u64> = (0..self.ncoords())
            .map(|i| self.coset_radix(i, modulus))
            .collect();
        mixed_radix(&radix)
            .map(|residues| CosetIndex { modulus, residues })
            .collect()
    }

    /// The canonical representative: the residues themselves as coordinates.
    pub fn coset_representative(&self, idx: &CosetIndex) -> GroupElement {
        GroupElement(idx.residues.clone())
    }

    /// Coset of `a + b`.
    pub fn coset_add(&self, a: &CosetIndex, b: &CosetIndex) -> CosetIndex {
        let residues = a
            .residues
            .iter()
            .zip(&b.residues)
            .enumerate()
            .map(|(i, (x, y))| (x + y).rem_euclid(self.coset_radix(i, a.modulus) as i64))
            .collect();
        CosetIndex {
            modulus: a.modulus,
            residues,
        }
    }

    /// Every element of a finite group in lexicographic order.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        self.is_finite()
            .then(|| mixed_radix(&self.torsion).map(GroupElement).collect())
    }
}

pub(crate) fn mixed_radix(radix: &[u64]) -> impl Iterator<Item = Vec<i64>> + '_ {
    let total: u64 = radix.iter().product();
    (0..total).map(move |mut k| {
        let mut c = vec![0i64; radix.len()];
        for (slot, &r) in c.iter_mut().zip(radix).rev() {
            *slot = (k % r) as i64;
            k /= r;
        }
        c
    })
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|n| format!("Z/{n}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" x "))
        }
    }
}

/// Parses `"Z^2 x Z/4 x Z/3"` (case-insensitive, whitespace-tolerant). Free
/// factors may appear anywhere but always take the leading coordinates. The
/// trivial group is written `0`, `1` or `trivial`.
impl FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |why: &str| GroupError::ParseGroup(s.to_string(), why.to_string());
        let compact: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .to_lowercase();
        if compact.is_empty() {
            return Err(err("empty literal"));
        }
        if matches!(compact.as_str(), "0" | "1" | "trivial" | "{0}") {
            return Ok(GroupSpec::free(0));
        }
        let mut rank = 0usize;
        let mut torsion = Vec::new();
        for factor in compact.split(['x', '×', '*']) {
            if factor.is_empty() {
                return Err(err("empty factor"));
            }
            let rest = factor
                .strip_prefix('z')
                .ok_or_else(|| err("factors must start with Z"))?;
            if rest.is_empty() {
                rank += 1;
            } else if let Some(exp) = rest.strip_prefix('^') {
                rank += exp.parse::<usize>().map_err(|_| err("bad exponent"))?;
            } else if let Some(n) = rest.strip_prefix('/') {
                let n = n
                    .trim_start_matches('(')
                    .trim_end_matches(')')
                    .parse::<u64>()
                    .map_err(|_| err("bad cyclic order"))?;
                if n < 2 {
                    return Err(GroupError::BadTorsion(n));
                }
                torsion.push(n);
            } else if let Some(n) = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
                let n = n.parse::<u64>().map_err(|_| err("bad cyclic order"))?;
                if n < 2 {
                    return Err(GroupError::BadTorsion(n));
                }
                torsion.push(n);
            } else {
                return Err(err("unrecognized factor"));
            }
        }
        Ok(GroupSpec { rank, torsion })
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A reduced coordinate vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub Vec<i64>);

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

pub(crate) fn fmt_coords(c: &[i64]) -> String {
    let inner: Vec<String> = c.iter().map(|x| x.to_string()).collect();
    format!("({})", inner.join(","))
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_coords(&self.0))
    }
}

/// Parses `"(a,b,...)"`; parentheses optional, `"()"` is the empty tuple.
/// Torsion reduction happens in [`GroupSpec::element`].
impl FromStr for GroupElement {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let t = t.strip_prefix('(').unwrap_or(t);
        let t = t.strip_suffix(')').unwrap_or(t).trim();
        if t.is_empty() {
            return Ok(GroupElement(Vec::new()));
        }
        t.split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map(GroupElement)
            .map_err(|_| GroupError::ParseElement(s.to_string()))
    }
}

/// Index of a coset of `X^(2)` or `X^(4)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CosetIndex {
    pub modulus: u32,
    pub residues: Vec<i64>,
}

impl CosetIndex {
    pub fn is_trivial(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }
}

impl fmt::Display for CosetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+X^({})", fmt_coords(&self.residues), self.modulus)
    }
}

/// Evaluation window: the whole (finite) group, or a box `|x_j| <= radius_j`
/// on the free coordinates with the full range on torsion coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Domain {
    Full,
    Box { radius: Vec<u32> },
}

impl Domain {
    pub fn uniform_box(group: &GroupSpec, radius: u32) -> Domain {
        if group.is_finite() {
            Domain::Full
        } else {
            Domain::Box {
                radius: vec![radius; group.rank()],
            }
        }
    }

    pub fn min_radius(&self) -> Option<u32> {
        match self {
            Domain::Full => None,
            Domain::Box { radius } => radius.iter().copied().min(),
        }
    }
}

/// A group together with a domain, with dense indexing of its points in
/// lexicographic order (first coordinate most significant).
#[derive(Clone, Debug)]
pub struct Window {
    group: GroupSpec,
    domain: Domain,
    lo: Vec<i64>,
    extent: Vec<i64>,
    stride: Vec<usize>,
    len: usize,
    coords: Vec<i64>,
}

impl PartialEq for Window {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.lo == other.lo && self.extent == other.extent
    }
}

impl Window {
    pub fn new(group: GroupSpec, domain: Domain) -> Result<Self, GroupError> {
        let k = group.ncoords();
        let mut lo = vec![0i64; k];
        let mut extent = vec![0i64; k];
        match &domain {
            Domain::Full => {
                if !group.is_finite() {
                    return Err(GroupError::BadDomain(format!(
                        "the full domain requires a finite group, {group} has rank {}",
                        group.rank()
                    )));
                }
            }
            Domain::Box { radius } => {
                if radius.len() != group.rank() {
                    return Err(GroupError::BadDomain(format!(
                        "{} radii given for rank {}",
                        radius.len(),
                        group.rank()
                    )));
                }
                if radius.contains(&0) {
                    return Err(GroupError::BadDomain("box radii must be positive".into()));
                }
                for (j, &r) in radius.iter().enumerate() {
                    lo[j] = -(r as i64);
                    extent[j] = 2 * r as i64 + 1;
                }
            }
        }
        for (i, &n) in group.torsion().iter().enumerate() {
            extent[group.rank() + i] = n as i64;
        }
        let mut stride = vec![1usize; k];
        for i in (0..k.saturating_sub(1)).rev() {
            stride[i] = stride[i + 1] * extent[i + 1] as usize;
        }
        let len = extent.iter().map(|&e| e as usize).product::<usize>();
        let mut coords = vec![0i64; len * k];
        for idx in 0..len {
            let mut rem = idx;
            for j in 0..k {
                let q = rem / stride[j];
                rem %= stride[j];
                coords[idx * k + j] = lo[j] + q as i64;
            }
        }
        Ok(Window {
            group,
            domain,
            lo,
            extent,
            stride,
            len,
            coords,
        })
    }

    /// Full group for finite groups, a uniform box otherwise.
    pub fn standard(group: GroupSpec, radius: u32) -> Result<Self, GroupError> {
        let domain = Domain::uniform_box(&group, radius);
        Self::new(group, domain)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn coords(&self, idx: usize) -> &[i64] {
        let k = self.group.ncoords();
        &self.coords[idx * k..(idx + 1) * k]
    }

    pub fn point(&self, idx: usize) -> GroupElement {
        GroupElement(self.coords(idx).to_vec())
    }

    pub fn points(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.len).map(|i| self.point(i))
    }

    /// Index of a reduced coordinate vector, `None` if outside the box.
    pub fn index_of(&self, c: &[i64]) -> Option<usize> {
        if c.len() != self.group.ncoords() {
            return None;
        }
        let mut idx = 0usize;
        for j in 0..c.len() {
            let off = c[j] - self.lo[j];
            if off < 0 || off >= self.extent[j] {
                return None;
            }
            idx += off as usize * self.stride[j];
        }
        Some(idx)
    }

    /// Index of `s·x + t·y` for points given by index.
    #[inline]
    pub fn combine(&self, x: usize, s: i64, y: usize, t: i64) -> Option<usize> {
        let k = self.group.ncoords();
        let (cx, cy) = (self.coords(x), self.coords(y));
        let rank = self.group.rank();
        let mut idx = 0usize;
        for j in 0..k {
            let mut v = s * cx[j] + t * cy[j];
            if j >= rank {
                v = v.rem_euclid(self.extent[j]);
            }
            let off = v - self.lo[j];
            if off < 0 || off >= self.extent[j] {
                return None;
            }
            idx += off as usize * self.stride[j];
        }
        Some(idx)
    }

    /// Calls `visit(y, x+y, x-y, -y)` (as indices) for every `y`, in window
    /// order, such that `x+y` and `x-y` both lie in the window.
    pub fn for_each_balanced_pair(&self, x: usize, mut visit: impl FnMut(usize, usize, usize, usize)) {
        let k = self.group.ncoords();
        let rank = self.group.rank();
        let cx = self.coords(x);
        // Offsets of y, x+y, x-y, -y contributed by each coordinate value of y.
        let contrib: Vec<Vec<[usize; 4]>> = (0..k)
            .map(|j| {
                let (st, lo, a) = (self.stride[j], self.lo[j], cx[j]);
                let off = |c: i64| (c - lo) as usize * st;
                if j < rank {
                    let m = -lo - a.abs();
                    (-m..=m).map(|b| [off(b), off(a + b), off(a - b), off(-b)]).collect()
                } else {
                    let e = self.extent[j];
                    (0..e)
                        .map(|b| [off(b), off((a + b) % e), off((a - b).rem_euclid(e)), off((e - b) % e)])
                        .collect()
                }
            })
            .collect();
        if contrib.iter().any(Vec::is_empty) {
            return;
        }
        let Some((inner, outer)) = contrib.split_last() else {
            visit(0, 0, 0, 0);
            return;
        };
        let add = |p: [usize; 4], q: [usize; 4]| [p[0] + q[0], p[1] + q[1], p[2] + q[2], p[3] + q[3]];
        // sums[j] is the offset sum over coordinates before j.
        let mut pos = vec![0usize; outer.len()];
        let mut sums = vec![[0usize; 4]; outer.len() + 1];
        for j in 0..outer.len() {
            sums[j + 1] = add(sums[j], outer[j][0]);
        }
        loop {
            let base = sums[outer.len()];
            for c in inner {
                let o = add(base, *c);
                visit(o[0], o[1], o[2], o[3]);
            }
            let mut j = outer.len();
            loop {
                if j == 0 {
                    return;
                }
                j -= 1;
                if pos[j] + 1 < outer[j].len() {
                    pos[j] += 1;
                    break;
                }
                pos[j] = 0;
            }
            for i in j..outer.len() {
                sums[i + 1] = add(sums[i], outer[i][pos[i]]);
            }
        }
    }

    /// Index of `x + y`.
    #[inline]
    pub fn add(&self, x: usize, y: usize) -> Option<usize> {
        self.combine(x, 1, y, 1)
    }

    /// Index of `x - y`.
    #[inline]
    pub fn sub(&self, x: usize, y: usize) -> Option<usize> {
        self.combine(x, 1, y, -1)
    }

    /// Index of `-x` (boxes are symmetric, so always present).
    #[inline]
    pub fn neg(&self, x: usize) -> usize {
        self.combine(x, -1, x, 0).expect("windows are closed under negation")
    }

    pub fn zero_index(&self) -> usize {
        self.index_of(&vec![0; self.group.ncoords()])
            .expect("windows contain the identity")
    }

    pub fn coset_of(&self, idx: usize, modulus: u32) -> CosetIndex {
        self.group.coset_index_of(self.coords(idx), modulus)
    }
}

/// Subgroup given by generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupSpec {
    pub generators: Vec<GroupElement>,
}

impl SubgroupSpec {
    pub fn new(generators: Vec<GroupElement>) -> Self {
        SubgroupSpec { generators }
    }

    pub fn trivial() -> Self {
        SubgroupSpec {
            generators: Vec::new(),
        }
    }

    /// Lifted generators plus the torsion relations `n_i e_{r+i}`.
    fn relation_rows(&self, group: &GroupSpec) -> Vec<lattice::Row> {
        let k = group.ncoords();
        let mut rows: Vec<lattice::Row> = self
            .generators
            .iter()
            .map(|g| g.0.iter().map(|&c| c as i128).collect())
            .collect();
        for (i, &n) in group.torsion().iter().enumerate() {
            let mut r = vec![0i128; k];
            r[group.rank() + i] = n as i128;
            rows.push(r);
        }
        rows
    }

    /// Exact membership by integer row reduction.
    pub fn contains(&self, group: &GroupSpec, x: &GroupElement) -> bool {
        let k = group.ncoords();
        if x.0.len() != k {
            return false;
        }
        let basis = lattice::echelon(self.relation_rows(group), k);
        let v: Vec<i128> = x.0.iter().map(|&c| c as i128).collect();
        lattice::in_row_span(&basis, &v)
    }

    /// Invariant factors of `X / S` (`0` = free summand).
    pub fn quotient_invariants(&self, group: &GroupSpec) -> Vec<i128> {
        let mut f = lattice::invariant_factors(self.relation_rows(group), group.ncoords());
        f.retain(|&d| d != 1);
        f
    }

    /// Whether some `x ∉ S` has `2x ∈ S`.
    pub fn quotient_has_order2(&self, group: &GroupSpec) -> bool {
        self.quotient_invariants(group)
            .iter()
            .any(|&d| d != 0 && d % 2 == 0)
    }

    /// Closure enumeration, finite groups only.
    pub fn elements(&self, group: &GroupSpec) -> Option<BTreeSet<GroupElement>> {
        if !group.is_finite() {
            return None;
        }
        let gens: Vec<GroupElement> = self
            .generators
            .iter()
            .map(|g| group.element(&g.0))
            .collect::<Result<_, _>>()
            .ok()?;
        let mut seen: HashSet<GroupElement> = HashSet::new();
        let mut frontier = vec![group.zero()];
        seen.insert(group.zero());
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = group.add_unchecked(&x, g);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        Some(seen.into_iter().collect())
    }

    /// Enumeration cross-check of [`Self::quotient_has_order2`], finite groups only.
    pub fn quotient_has_order2_by_enumeration(&self, group: &GroupSpec) -> Option<bool> {
        let members = self.elements(group)?;
        let all = group.elements()?;
        Some(
            all.iter()
                .any(|x| !members.contains(x) && members.contains(&group.scale(2, x))),
        )
    }

    /// `S^(2) = S`: every generator lies in the subgroup spanned by the doubled generators.
    pub fn doubling_is_onto(&self, group: &GroupSpec) -> bool {
        let doubled = SubgroupSpec::new(self.generators.iter().map(|g| group.scale(2, g)).collect());
        self.generators.iter().all(|g| doubled.contains(group, g))
    }
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "<{}>", gens.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    fn el(group: &GroupSpec, c: &[i64]) -> GroupElement {
        group.element(c).unwrap()
    }

    #[test]
    fn parses_and_prints_group_literals() {
        let x = g("  z^2 X z/4 x Z/3 ");
        assert_eq!(x.rank(), 2);
        assert_eq!(x.torsion(), &[4, 3]);
        assert_eq!(x.to_string(), "Z^2 x Z/4 x Z/3");
        assert_eq!(g("Z/4 x Z").to_string(), "Z x Z/4");
        assert_eq!(g("0"), GroupSpec::free(0));
        assert!("Z/1".parse::<GroupSpec>().is_err());
        assert!("Q".parse::<GroupSpec>().is_err());
        assert!("Z x".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn parses_element_tuples() {
        assert_eq!("(1, -2,3)".parse::<GroupElement>().unwrap().0, vec![1, -2, 3]);
        assert_eq!("()".parse::<GroupElement>().unwrap().0, Vec::<i64>::new());
        assert!("(1,a)".parse::<GroupElement>().is_err());
    }

    #[test]
    fn addition_examples() {
        let z4 = g("Z/4");
        assert_eq!(z4.add(&el(&z4, &[3]), &el(&z4, &[2])).unwrap().0, vec![1]);
        let z2 = g("Z^2");
        assert_eq!(z2.add(&el(&z2, &[1, 2]), &el(&z2, &[-1, 3])).unwrap().0, vec![0, 5]);
        let z44 = g("Z/4 x Z/4");
        assert!(z44.add(&el(&z44, &[1, 3]), &el(&z44, &[3, 1])).unwrap().is_zero());
    }

    #[test]
    fn addition_rejects_foreign_elements() {
        let z4 = g("Z/4");
        let bad = GroupElement(vec![1, 1]);
        assert!(matches!(z4.add(&bad, &z4.zero()), Err(GroupError::Mismatch { .. })));
        let unreduced = GroupElement(vec![5]);
        assert!(z4.add(&unreduced, &z4.zero()).is_err());
    }

    #[test]
    fn negation_and_scaling() {
        let z44 = g("Z/4 x Z/4");
        assert_eq!(z44.neg(&el(&z44, &[1, 0])).0, vec![3, 0]);
        assert_eq!(z44.scale(2, &el(&z44, &[1, 1])).0, vec![2, 2]);
        for x in z44.elements().unwrap() {
            assert!(z44.scale(4, &x).is_zero());
        }
    }

    #[test]
    fn coset_index_examples() {
        let z44 = g("Z/4 x Z/4");
        let idx = z44.coset_index(&el(&z44, &[1, 2]), 2).unwrap();
        assert_eq!(idx.residues, vec![1, 0]);
        // (1,2) - (1,0) = (0,2) is in X^(2) = {(0,0),(0,2),(2,0),(2,2)}.
        let doubles: BTreeSet<_> = z44.elements().unwrap().iter().map(|x| z44.scale(2, x)).collect();
        assert_eq!(doubles.len(), 4);
        assert!(doubles.contains(&el(&z44, &[0, 2])));

        let z9 = g("Z/9");
        assert!(z9.coset_index(&el(&z9, &[3]), 2).unwrap().is_trivial());
        assert_eq!(z9.coset_count(2), 1);

        let big = g("Z^2 x Z/4 x Z/3");
        assert!(big.coset_index(&big.zero(), 4).unwrap().is_trivial());
        assert_eq!(big.coset_count(2), 8);
        assert_eq!(big.coset_count(4), 64);
        assert!(big.coset_index(&big.zero(), 3).is_err());
    }

    #[test]
    fn subgroup_membership_examples() {
        let z9 = g("Z/9");
        let s = SubgroupSpec::new(vec![el(&z9, &[3])]);
        assert!(s.contains(&z9, &el(&z9, &[6])));
        assert!(!s.contains(&z9, &el(&z9, &[1])));

        let z2 = g("Z^2");
        let s = SubgroupSpec::new(vec![el(&z2, &[2, 0]), el(&z2, &[0, 2])]);
        assert!(!s.contains(&z2, &el(&z2, &[1, 1])));
        assert!(s.contains(&z2, &el(&z2, &[-4, 2])));
    }

    #[test]
    fn quotient_order_two_examples() {
        let z9 = g("Z/9");
        let s = SubgroupSpec::new(vec![el(&z9, &[3])]);
        assert!(!s.quotient_has_order2(&z9));
        assert_eq!(s.quotient_has_order2_by_enumeration(&z9), Some(false));

        let z4 = g("Z/4");
        assert!(SubgroupSpec::trivial().quotient_has_order2(&z4));

        let z2 = g("Z^2");
        let s = SubgroupSpec::new(vec![el(&z2, &[2, 0]), el(&z2, &[0, 1])]);
        assert!(s.quotient_has_order2(&z2));
        // Z^2 / <(1,0)> = Z has no torsion at all.
        assert!(!SubgroupSpec::new(vec![el(&z2, &[1, 0])]).quotient_has_order2(&z2));
    }

    #[test]
    fn windows_index_lexicographically() {
        let w = Window::standard(g("Z x Z/3"), 2).unwrap();
        assert_eq!(w.len(), 15);
        assert_eq!(w.coords(0), &[-2, 0]);
        assert_eq!(w.coords(1), &[-2, 1]);
        assert_eq!(w.index_of(&[0, 0]), Some(w.zero_index()));
        let x = w.index_of(&[2, 2]).unwrap();
        assert_eq!(w.add(x, x), None);
        assert_eq!(w.coords(w.neg(x)), &[-2, 1]);
        let y = w.index_of(&[-1, 2]).unwrap();
        assert_eq!(w.coords(w.add(x, y).unwrap()), &[1, 1]);
    }

    #[test]
    fn domain_validation() {
        assert!(Window::new(g("Z"), Domain::Full).is_err());
        assert!(Window::new(g("Z^2"), Domain::Box { radius: vec![1] }).is_err());
        assert!(Window::new(g("Z"), Domain::Box { radius: vec![0] }).is_err());
        assert_eq!(Window::new(g("Z/2 x Z/3"), Domain::Full).unwrap().len(), 6);
    }
}
