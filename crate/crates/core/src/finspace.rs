//! Finite Alexandrov spaces.
//!
//! A finite topological space is the same thing as a preorder on its points:
//! `x <= y` means `x` lies in the closure of `{y}`. Open sets are up-sets,
//! closed sets are down-sets, and continuous maps are exactly the monotone
//! maps. Points carry opaque string names; all internal work is done on
//! indices `0..len`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A set of point indices of some ambient space.
pub type PointSet = BTreeSet<usize>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinSpace {
    names: Vec<String>,
    // row-major, leq[a * n + b] iff a <= b
    leq: Vec<bool>,
}

impl fmt::Debug for FinSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<(&str, &str)> = self
            .strict_pairs()
            .into_iter()
            .map(|(a, b)| (self.name(a), self.name(b)))
            .collect();
        f.debug_struct("FinSpace")
            .field("points", &self.names)
            .field("leq", &pairs)
            .finish()
    }
}

fn check_names(names: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::DuplicatePoint(n.clone()));
        }
    }
    Ok(())
}

impl FinSpace {
    /// Space generated by `pairs`: the order is the reflexive-transitive
    /// closure of the given relation.
    pub fn new(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        check_names(&names)?;
        let n = names.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in pairs {
            for idx in [a, b] {
                if idx >= n {
                    return Err(Error::PointOutOfRange { index: idx, len: n });
                }
            }
            leq[a * n + b] = true;
        }
        transitive_close(&mut leq, n);
        Ok(Self { names, leq })
    }

    /// Space from an explicit order matrix, which must already be a preorder.
    pub fn from_leq(names: Vec<String>, leq: Vec<bool>) -> Result<Self> {
        check_names(&names)?;
        let n = names.len();
        if leq.len() != n * n {
            return Err(Error::NotPreorder(format!(
                "matrix has {} entries, expected {}",
                leq.len(),
                n * n
            )));
        }
        let space = Self { names, leq };
        if let Some(msg) = space.preorder_defect() {
            return Err(Error::NotPreorder(msg));
        }
        Ok(space)
    }

    /// Builds a space from an order predicate that is known to be a preorder
    /// (products, subspaces and other derived constructions).
    pub(crate) fn from_fn_unchecked(names: Vec<String>, le: impl Fn(usize, usize) -> bool) -> Self {
        let n = names.len();
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = le(a, b);
            }
        }
        debug_assert!(check_names(&names).is_ok());
        Self { names, leq }
    }

    pub fn from_names<S: AsRef<str>>(names: &[S], pairs: &[(&str, &str)]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let lookup = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| Error::UnknownPoint(s.to_string()))
        };
        let idx: Vec<(usize, usize)> = pairs
            .iter()
            .map(|&(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<_>>()?;
        Self::new(names, &idx)
    }

    pub fn discrete<S: AsRef<str>>(names: &[S]) -> Self {
        Self::from_names(names, &[]).expect("discrete space with duplicate names")
    }

    pub fn point(name: &str) -> Self {
        Self::discrete(&[name])
    }

    pub fn empty() -> Self {
        Self {
            names: Vec::new(),
            leq: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn all(&self) -> PointSet {
        (0..self.len()).collect()
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.names.len() + b]
    }

    pub fn leq_matrix(&self) -> &[bool] {
        &self.leq
    }

    /// Non-reflexive pairs `(a, b)` with `a <= b`.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.leq(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn preorder_defect(&self) -> Option<String> {
        let n = self.len();
        for a in 0..n {
            if !self.leq(a, a) {
                return Some(format!("`{}` is not related to itself", self.name(a)));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !self.leq(a, b) {
                    continue;
                }
                for c in 0..n {
                    if self.leq(b, c) && !self.leq(a, c) {
                        return Some(format!(
                            "`{}` <= `{}` <= `{}` but not `{}` <= `{}`",
                            self.name(a),
                            self.name(b),
                            self.name(c),
                            self.name(a),
                            self.name(c)
                        ));
                    }
                }
            }
        }
        None
    }

    /// Minimal open neighbourhood of `a`.
    pub fn up(&self, a: usize) -> PointSet {
        (0..self.len()).filter(|&b| self.leq(a, b)).collect()
    }

    pub fn down(&self, a: usize) -> PointSet {
        (0..self.len()).filter(|&b| self.leq(b, a)).collect()
    }

    /// Topological closure: the down-set generated by `set`.
    pub fn closure(&self, set: &PointSet) -> PointSet {
        (0..self.len())
            .filter(|&y| set.iter().any(|&a| self.leq(y, a)))
            .collect()
    }

    /// Smallest open set containing `set`: the generated up-set.
    pub fn open_hull(&self, set: &PointSet) -> PointSet {
        (0..self.len())
            .filter(|&y| set.iter().any(|&a| self.leq(a, y)))
            .collect()
    }

    pub fn is_closed(&self, set: &PointSet) -> bool {
        set.iter()
            .all(|&a| (0..self.len()).all(|y| !self.leq(y, a) || set.contains(&y)))
    }

    pub fn is_open(&self, set: &PointSet) -> bool {
        set.iter()
            .all(|&a| (0..self.len()).all(|y| !self.leq(a, y) || set.contains(&y)))
    }

    pub fn is_dense(&self, set: &PointSet) -> bool {
        self.closure(set).len() == self.len()
    }

    /// Closure of `set` inside the subspace `within` (intersected with `within`).
    pub fn closure_in(&self, set: &PointSet, within: &PointSet) -> PointSet {
        within
            .iter()
            .copied()
            .filter(|&y| set.iter().any(|&a| self.leq(y, a)))
            .collect()
    }

    /// Whether `set ∩ within` is dense in the subspace `within`.
    pub fn is_dense_in(&self, set: &PointSet, within: &PointSet) -> bool {
        let inner: PointSet = set.intersection(within).copied().collect();
        within
            .iter()
            .all(|&w| inner.iter().any(|&a| self.leq(w, a)))
    }

    /// Points of `within` that are not below any point of `set`.
    pub fn density_defects(&self, set: &PointSet, within: &PointSet) -> PointSet {
        within
            .iter()
            .copied()
            .filter(|&w| !set.iter().any(|&a| self.leq(w, a)))
            .collect()
    }

    /// Subspace with the induced order, together with the inclusion map
    /// (position in the subspace ↦ index in `self`). Points keep their names.
    pub fn subspace(&self, set: &PointSet) -> (FinSpace, Vec<usize>) {
        let incl: Vec<usize> = set.iter().copied().collect();
        let names = incl.iter().map(|&i| self.names[i].clone()).collect();
        let sub = Self::from_fn_unchecked(names, |a, b| self.leq(incl[a], incl[b]));
        (sub, incl)
    }

    /// Product space with the componentwise order; point `(a, b)` has index
    /// `a * other.len() + b`.
    pub fn product(&self, other: &FinSpace) -> FinSpace {
        let m = other.len();
        let mut names = Vec::with_capacity(self.len() * m);
        for a in &self.names {
            for b in &other.names {
                names.push(format!("({a},{b})"));
            }
        }
        Self::from_fn_unchecked(names, |x, y| {
            self.leq(x / m, y / m) && other.leq(x % m, y % m)
        })
    }

    /// Quotient by `rel`, which must already be an equivalence relation given
    /// as the full list of related pairs.
    pub fn quotient(&self, rel: &[(usize, usize)]) -> Result<(FinSpace, Vec<usize>)> {
        let n = self.len();
        let mut m = vec![false; n * n];
        for &(a, b) in rel {
            for idx in [a, b] {
                if idx >= n {
                    return Err(Error::PointOutOfRange { index: idx, len: n });
                }
            }
            m[a * n + b] = true;
        }
        for a in 0..n {
            if !m[a * n + a] {
                return Err(Error::RelationNotEquivalence(format!(
                    "not reflexive at `{}`",
                    self.name(a)
                )));
            }
            for b in 0..n {
                if m[a * n + b] && !m[b * n + a] {
                    return Err(Error::RelationNotEquivalence(format!(
                        "not symmetric on (`{}`, `{}`)",
                        self.name(a),
                        self.name(b)
                    )));
                }
                if !m[a * n + b] {
                    continue;
                }
                for c in 0..n {
                    if m[b * n + c] && !m[a * n + c] {
                        return Err(Error::RelationNotEquivalence(format!(
                            "not transitive on (`{}`, `{}`, `{}`)",
                            self.name(a),
                            self.name(b),
                            self.name(c)
                        )));
                    }
                }
            }
        }
        let mut labels = vec![usize::MAX; n];
        let mut next = 0;
        for a in 0..n {
            if labels[a] == usize::MAX {
                for b in 0..n {
                    if m[a * n + b] {
                        labels[b] = next;
                    }
                }
                next += 1;
            }
        }
        Ok(self.quotient_by_labels(&labels))
    }

    /// Quotient by the partition whose blocks are the level sets of
    /// `labels`. Labels need not be contiguous. The quotient order is the
    /// transitive closure of `[x] <= [y] iff x' <= y'` for some members.
    /// Each class is named `[r]` with `r` its lexicographically smallest
    /// member name; the returned vector is the projection.
    pub fn quotient_by_labels(&self, labels: &[usize]) -> (FinSpace, Vec<usize>) {
        assert_eq!(labels.len(), self.len());
        let mut dense = std::collections::HashMap::new();
        let mut proj = Vec::with_capacity(labels.len());
        for &l in labels {
            let next = dense.len();
            proj.push(*dense.entry(l).or_insert(next));
        }
        let k = dense.len();
        let mut rep: Vec<Option<&str>> = vec![None; k];
        for (i, &c) in proj.iter().enumerate() {
            let nm = self.names[i].as_str();
            if rep[c].is_none_or(|r| nm < r) {
                rep[c] = Some(nm);
            }
        }
        let names: Vec<String> = rep
            .into_iter()
            .map(|r| format!("[{}]", r.unwrap()))
            .collect();
        let n = self.len();
        let mut leq = vec![false; k * k];
        for a in 0..n {
            for b in 0..n {
                if self.leq(a, b) {
                    leq[proj[a] * k + proj[b]] = true;
                }
            }
        }
        transitive_close(&mut leq, k);
        (Self { names, leq }, proj)
    }

    /// Whether the relation induced on the quotient by `proj` was already
    /// transitive, i.e. no closure step was needed.
    pub fn induced_relation_is_transitive(&self, quotient: &FinSpace, proj: &[usize]) -> bool {
        let k = quotient.len();
        let mut direct = vec![false; k * k];
        for a in 0..self.len() {
            for b in 0..self.len() {
                if self.leq(a, b) {
                    direct[proj[a] * k + proj[b]] = true;
                }
            }
        }
        direct == quotient.leq
    }

    /// Renames every point (used by constructions that want readable names).
    pub fn with_names(&self, names: Vec<String>) -> Result<FinSpace> {
        check_names(&names)?;
        assert_eq!(names.len(), self.len());
        Ok(Self {
            names,
            leq: self.leq.clone(),
        })
    }

    pub fn is_t0(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (0..n).all(|b| a == b || !(self.leq(a, b) && self.leq(b, a))))
    }
}

fn transitive_close(leq: &mut [bool], n: usize) {
    for k in 0..n {
        for i in 0..n {
            if !leq[i * n + k] {
                continue;
            }
            for j in 0..n {
                if leq[k * n + j] {
                    leq[i * n + j] = true;
                }
            }
        }
    }
}

pub fn is_monotone(dom: &FinSpace, cod: &FinSpace, map: &[usize]) -> bool {
    map.len() == dom.len()
        && map.iter().all(|&y| y < cod.len())
        && (0..dom.len()).all(|a| (0..dom.len()).all(|b| !dom.leq(a, b) || cod.leq(map[a], map[b])))
}

/// The first pair witnessing a failure of monotonicity.
pub fn monotonicity_defect(
    dom: &FinSpace,
    cod: &FinSpace,
    map: &[usize],
) -> Option<(usize, usize)> {
    for a in 0..dom.len() {
        for b in 0..dom.len() {
            if dom.leq(a, b) && !cod.leq(map[a], map[b]) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Surjective and `f(↑x) = ↑f(x)` for every `x`: each specialization of an
/// image point lifts above any chosen preimage. This is the finite stand-in
/// for a surjective submersion.
pub fn is_lifting_surjection(dom: &FinSpace, cod: &FinSpace, map: &[usize]) -> bool {
    lifting_defect(dom, cod, map).is_none()
}

/// `Some((x, y))` when `y >= f(x)` has no lift above `x`; `Some((usize::MAX, y))`
/// when `y` is not in the image.
pub fn lifting_defect(dom: &FinSpace, cod: &FinSpace, map: &[usize]) -> Option<(usize, usize)> {
    let mut hit = vec![false; cod.len()];
    for &y in map {
        hit[y] = true;
    }
    if let Some(y) = hit.iter().position(|h| !h) {
        return Some((usize::MAX, y));
    }
    for x in 0..dom.len() {
        for y in 0..cod.len() {
            if cod.leq(map[x], y) && !(0..dom.len()).any(|x2| map[x2] == y && dom.leq(x, x2)) {
                return Some((x, y));
            }
        }
    }
    None
}

/// Injective and order-reflecting, i.e. a homeomorphism onto its image with
/// the subspace order.
pub fn is_embedding(dom: &FinSpace, cod: &FinSpace, map: &[usize]) -> bool {
    if !is_monotone(dom, cod, map) {
        return false;
    }
    let image: BTreeSet<usize> = map.iter().copied().collect();
    image.len() == map.len()
        && (0..dom.len()).all(|a| (0..dom.len()).all(|b| !cod.leq(map[a], map[b]) || dom.leq(a, b)))
}

/// Points `(x, y)` of `X ×_M Y` with `f(x) = g(y)`, ordered componentwise.
/// Returns the space and the list of index pairs (the two projections).
pub fn fibered_product(
    left: &FinSpace,
    f: &[usize],
    right: &FinSpace,
    g: &[usize],
) -> (FinSpace, Vec<(usize, usize)>) {
    let mut pairs = Vec::new();
    for x in 0..left.len() {
        for y in 0..right.len() {
            if f[x] == g[y] {
                pairs.push((x, y));
            }
        }
    }
    let names = pairs
        .iter()
        .map(|&(x, y)| format!("({},{})", left.name(x), right.name(y)))
        .collect();
    let space = FinSpace::from_fn_unchecked(names, |a, b| {
        left.leq(pairs[a].0, pairs[b].0) && right.leq(pairs[a].1, pairs[b].1)
    });
    (space, pairs)
}

/// A continuous map between finite spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMap {
    pub dom: Arc<FinSpace>,
    pub cod: Arc<FinSpace>,
    pub map: Vec<usize>,
}

impl CMap {
    pub fn new(dom: Arc<FinSpace>, cod: Arc<FinSpace>, map: Vec<usize>) -> Result<Self> {
        if map.len() != dom.len() {
            return Err(Error::NotContinuous(format!(
                "map has {} entries for a domain of {} points",
                map.len(),
                dom.len()
            )));
        }
        if let Some(&y) = map.iter().find(|&&y| y >= cod.len()) {
            return Err(Error::PointOutOfRange {
                index: y,
                len: cod.len(),
            });
        }
        if let Some((a, b)) = monotonicity_defect(&dom, &cod, &map) {
            return Err(Error::NotContinuous(format!(
                "`{}` <= `{}` but images `{}`, `{}` are not ordered",
                dom.name(a),
                dom.name(b),
                cod.name(map[a]),
                cod.name(map[b])
            )));
        }
        Ok(Self { dom, cod, map })
    }

    pub fn identity(space: Arc<FinSpace>) -> Self {
        let map = (0..space.len()).collect();
        Self {
            dom: space.clone(),
            cod: space,
            map,
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn image(&self, set: &PointSet) -> PointSet {
        set.iter().map(|&x| self.map[x]).collect()
    }

    pub fn preimage(&self, set: &PointSet) -> PointSet {
        (0..self.dom.len())
            .filter(|x| set.contains(&self.map[*x]))
            .collect()
    }

    pub fn is_continuous(&self) -> bool {
        is_monotone(&self.dom, &self.cod, &self.map)
    }

    pub fn is_lifting_surjection(&self) -> bool {
        is_lifting_surjection(&self.dom, &self.cod, &self.map)
    }

    pub fn is_embedding(&self) -> bool {
        is_embedding(&self.dom, &self.cod, &self.map)
    }

    /// In the finite setting an embedding is exactly a homeomorphism onto
    /// its image with the induced order.
    pub fn is_homeo_onto_image(&self) -> bool {
        self.is_embedding()
    }

    pub fn compose(&self, after: &CMap) -> Result<CMap> {
        if *self.cod != *after.dom {
            return Err(Error::NotContinuous(
                "composing maps with mismatched spaces".into(),
            ));
        }
        Ok(CMap {
            dom: self.dom.clone(),
            cod: after.cod.clone(),
            map: self.map.iter().map(|&x| after.map[x]).collect(),
        })
    }

    /// `f ×_M g` with its two projections.
    pub fn fibered_product(&self, other: &CMap) -> Result<(Arc<FinSpace>, CMap, CMap)> {
        if *self.cod != *other.cod {
            return Err(Error::NotContinuous(
                "fibered product over different codomains".into(),
            ));
        }
        let (space, pairs) = fibered_product(&self.dom, &self.map, &other.dom, &other.map);
        let space = Arc::new(space);
        let p1 = CMap {
            dom: space.clone(),
            cod: self.dom.clone(),
            map: pairs.iter().map(|p| p.0).collect(),
        };
        let p2 = CMap {
            dom: space.clone(),
            cod: other.dom.clone(),
            map: pairs.iter().map(|p| p.1).collect(),
        };
        Ok((space, p1, p2))
    }
}

/// Whether two spaces are order-isomorphic (brute force over bijections
/// compatible with up/down degrees). Intended for small spaces.
pub fn are_homeomorphic(a: &FinSpace, b: &FinSpace) -> bool {
    find_homeomorphism(a, b).is_some()
}

pub fn find_homeomorphism(a: &FinSpace, b: &FinSpace) -> Option<Vec<usize>> {
    if a.len() != b.len() {
        return None;
    }
    let n = a.len();
    let sig = |s: &FinSpace, x: usize| (s.up(x).len(), s.down(x).len());
    let mut assign = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        i: usize,
        a: &FinSpace,
        b: &FinSpace,
        assign: &mut [usize],
        used: &mut [bool],
        sig: &dyn Fn(&FinSpace, usize) -> (usize, usize),
    ) -> bool {
        let n = a.len();
        if i == n {
            return true;
        }
        for c in 0..n {
            if used[c] || sig(a, i) != sig(b, c) {
                continue;
            }
            let ok = (0..i)
                .all(|j| a.leq(i, j) == b.leq(c, assign[j]) && a.leq(j, i) == b.leq(assign[j], c))
                && a.leq(i, i) == b.leq(c, c);
            if !ok {
                continue;
            }
            assign[i] = c;
            used[c] = true;
            if go(i + 1, a, b, assign, used, sig) {
                return true;
            }
            used[c] = false;
        }
        false
    }
    if go(0, a, b, &mut assign, &mut used, &sig) {
        Some(assign)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{disc2, node, sierp};

    fn set(xs: &[usize]) -> PointSet {
        xs.iter().copied().collect()
    }

    fn by_name(s: &FinSpace, names: &[&str]) -> PointSet {
        names.iter().map(|n| s.index_of(n).unwrap()).collect()
    }

    #[test]
    fn closure_examples() {
        let s = sierp();
        assert_eq!(s.closure(&by_name(&s, &["g"])), s.all());
        let d = disc2();
        assert_eq!(d.closure(&by_name(&d, &["a"])), by_name(&d, &["a"]));
        let n = node();
        assert_eq!(
            n.closure(&by_name(&n, &["g"])),
            by_name(&n, &["g", "x", "y"])
        );
    }

    #[test]
    fn density_examples() {
        let s = sierp();
        assert!(s.is_dense(&by_name(&s, &["g"])));
        let d = disc2();
        assert!(!d.is_dense(&by_name(&d, &["a"])));
        assert!(node().is_dense(&node().all()));
    }

    #[test]
    fn lifting_examples() {
        let s = sierp();
        assert!(is_lifting_surjection(&s, &s, &[0, 1]));
        let pt = FinSpace::point("pt");
        assert!(is_lifting_surjection(&s, &pt, &[0, 0]));
        // a ↦ s, b ↦ g: g >= f(a) has no lift above a
        let d = disc2();
        let (a, b) = (d.index_of("a").unwrap(), d.index_of("b").unwrap());
        let mut f = vec![0; 2];
        f[a] = s.index_of("s").unwrap();
        f[b] = s.index_of("g").unwrap();
        assert!(!is_lifting_surjection(&d, &s, &f));
        assert!(!is_embedding(&d, &s, &f));
    }

    #[test]
    fn fibered_product_examples() {
        let s = sierp();
        let id = [0, 1];
        let (fp, pairs) = fibered_product(&s, &id, &s, &id);
        assert_eq!(pairs, vec![(0, 0), (1, 1)]);
        assert!(are_homeomorphic(&fp, &s));

        let d = disc2();
        let (fp, _) = fibered_product(&d, &[0, 0], &d, &[0, 0]);
        assert_eq!(fp.len(), 4);
        assert!(fp.strict_pairs().is_empty());

        let pt = FinSpace::point("p");
        let g = s.index_of("g").unwrap();
        let (fp, pairs) = fibered_product(&s, &id, &pt, &[g]);
        assert_eq!(fp.len(), 1);
        assert_eq!(pairs, vec![(g, 0)]);
    }

    #[test]
    fn quotient_examples() {
        let n = node();
        let trivial: Vec<_> = (0..3).map(|i| (i, i)).collect();
        let (q, _) = n.quotient(&trivial).unwrap();
        assert!(are_homeomorphic(&q, &n));

        let d = disc2();
        let all = [(0, 0), (0, 1), (1, 0), (1, 1)];
        assert_eq!(d.quotient(&all).unwrap().0.len(), 1);

        let four = FinSpace::discrete(&["a", "b", "c", "d"]);
        let rel = [
            (0, 0),
            (1, 1),
            (2, 2),
            (3, 3),
            (0, 1),
            (1, 0),
            (2, 3),
            (3, 2),
        ];
        let (q, proj) = four.quotient(&rel).unwrap();
        assert_eq!(q.len(), 2);
        assert!(q.strict_pairs().is_empty());
        assert_eq!(proj[0], proj[1]);
        assert_ne!(proj[1], proj[2]);

        assert!(matches!(
            d.quotient(&[(0, 0), (1, 1), (0, 1)]),
            Err(Error::RelationNotEquivalence(_))
        ));
        assert!(matches!(
            d.quotient(&[(0, 0)]),
            Err(Error::RelationNotEquivalence(_))
        ));
    }

    #[test]
    fn quotient_order_is_transitively_closed() {
        // a <= b, c <= d with b ~ c: needs the closure step to get [a] <= [d]
        let s = FinSpace::from_names(&["a", "b", "c", "d"], &[("a", "b"), ("c", "d")]).unwrap();
        let (q, proj) = s.quotient_by_labels(&[0, 1, 1, 2]);
        assert!(q.leq(proj[0], proj[3]));
        assert!(!s.induced_relation_is_transitive(&q, &proj));
    }

    #[test]
    fn subspace_and_embedding_examples() {
        let s = sierp();
        let g = s.index_of("g").unwrap();
        let (sub, incl) = s.subspace(&set(&[g]));
        assert_eq!(sub.len(), 1);
        assert!(is_embedding(&sub, &s, &incl));
    }

    #[test]
    fn from_leq_rejects_non_preorders() {
        let names = vec!["a".to_string(), "b".to_string(), "c".to_string()];
        // a <= b <= c without a <= c
        let mut leq = vec![false; 9];
        for i in 0..3 {
            leq[i * 3 + i] = true;
        }
        leq[1] = true;
        leq[5] = true;
        assert!(matches!(
            FinSpace::from_leq(names.clone(), leq),
            Err(Error::NotPreorder(_))
        ));
        assert!(matches!(
            FinSpace::new(vec!["a".into(), "a".into()], &[]),
            Err(Error::DuplicatePoint(_))
        ));
    }

    #[test]
    fn cmap_rejects_non_monotone() {
        let s = Arc::new(sierp());
        let g = s.index_of("g").unwrap();
        let sp = s.index_of("s").unwrap();
        let mut swap = vec![0; 2];
        swap[g] = sp;
        swap[sp] = g;
        assert!(CMap::new(s.clone(), s.clone(), swap).is_err());
        assert!(CMap::identity(s).is_homeo_onto_image());
    }
}
