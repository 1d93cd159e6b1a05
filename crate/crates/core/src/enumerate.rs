//! Exhaustive and seeded-random generation of small spaces, groupoids,
//! subgroupoids, resolutions and Morita equivalences.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::finspace::{is_monotone, FinSpace, PointSet};
use crate::groupoid::{Group, Groupoid, Subgroupoid};
use crate::modaction::RightModule;
use crate::morita::MoritaEquivalence;
use crate::resolution::Resolution;

/// Size limits for the generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_objects: usize,
    pub max_arrows: usize,
    pub max_module_points: usize,
    pub seed: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            max_objects: 3,
            max_arrows: 9,
            max_module_points: 4,
            seed: 0,
        }
    }
}

impl Bounds {
    pub fn check(&self) -> Result<()> {
        if self.max_objects == 0 || self.max_arrows == 0 || self.max_module_points == 0 {
            return Err(Error::BoundExceeded("all bounds must be at least 1".into()));
        }
        if self.max_objects > 4 || self.max_arrows > 16 || self.max_module_points > 5 {
            return Err(Error::BoundExceeded(format!(
                "bounds {self:?} exceed the supported range (4 objects, 16 arrows, 5 module points)"
            )));
        }
        Ok(())
    }
}

pub const MAX_SPACE_POINTS: usize = 5;

fn point_names(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// Order matrix as a bitmask, bit `a * n + b` set iff `a <= b`.
fn close_preorder(bits: u32, n: usize) -> u32 {
    let mut b = bits;
    for i in 0..n {
        b |= 1 << (i * n + i);
    }
    for k in 0..n {
        for i in 0..n {
            if b >> (i * n + k) & 1 == 0 {
                continue;
            }
            for j in 0..n {
                if b >> (k * n + j) & 1 == 1 {
                    b |= 1 << (i * n + j);
                }
            }
        }
    }
    b
}

fn space_from_bits(bits: u32, n: usize) -> FinSpace {
    FinSpace::from_fn_unchecked(point_names(n), |a, b| bits >> (a * n + b) & 1 == 1)
}

fn space_bits(space: &FinSpace) -> u32 {
    let n = space.len();
    let mut bits = 0;
    for a in 0..n {
        for b in 0..n {
            if space.leq(a, b) {
                bits |= 1 << (a * n + b);
            }
        }
    }
    bits
}

/// Every preorder on `n` labelled points, generated by closing the
/// identity under one new pair at a time. Sorted by bitmask.
fn labeled_preorder_bits(n: usize) -> Vec<u32> {
    let start = close_preorder(0, n);
    let mut seen: HashSet<u32> = HashSet::from([start]);
    let mut frontier = vec![start];
    while let Some(b) = frontier.pop() {
        for i in 0..n {
            for j in 0..n {
                if b >> (i * n + j) & 1 == 0 {
                    let c = close_preorder(b | 1 << (i * n + j), n);
                    if seen.insert(c) {
                        frontier.push(c);
                    }
                }
            }
        }
    }
    let mut out: Vec<u32> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// All preorders on `n` labelled points `"0", "1", …`.
pub fn labeled_preorders(n: usize) -> Result<Vec<FinSpace>> {
    if n > MAX_SPACE_POINTS {
        return Err(Error::BoundExceeded(format!(
            "spaces are enumerated up to {MAX_SPACE_POINTS} points"
        )));
    }
    Ok(labeled_preorder_bits(n)
        .into_iter()
        .map(|b| space_from_bits(b, n))
        .collect())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    fn heap(k: usize, perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(perm.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, perm, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            perm.swap(j, k - 1);
        }
    }
    heap(n, &mut perm, &mut out);
    out
}

/// Canonical code of a preorder: the smallest bitmask over relabellings
/// that keep the points sorted by their (up-set, down-set) sizes. Points are
/// first refined into cells of equal signature; only permutations inside
/// cells are tried.
pub fn canonical_code(space: &FinSpace) -> u32 {
    let n = space.len();
    let sig: Vec<(usize, usize)> = (0..n)
        .map(|x| (space.up(x).len(), space.down(x).len()))
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| sig[x]);
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for &x in &order {
        match cells.last_mut() {
            Some(c) if sig[c[0]] == sig[x] => c.push(x),
            _ => cells.push(vec![x]),
        }
    }
    let cell_perms: Vec<Vec<Vec<usize>>> = cells.iter().map(|c| permutations(c.len())).collect();
    let mut best = u32::MAX;
    let mut choice = vec![0usize; cells.len()];
    loop {
        // position of each point in the relabelled space
        let mut pos = vec![0; n];
        let mut next = 0;
        for (ci, cell) in cells.iter().enumerate() {
            for &k in &cell_perms[ci][choice[ci]] {
                pos[cell[k]] = next;
                next += 1;
            }
        }
        let mut code = 0u32;
        for a in 0..n {
            for b in 0..n {
                if space.leq(a, b) {
                    code |= 1 << (pos[a] * n + pos[b]);
                }
            }
        }
        best = best.min(code);
        let mut i = 0;
        loop {
            if i == cells.len() {
                return best;
            }
            choice[i] += 1;
            if choice[i] < cell_perms[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Preorders on `n` points up to isomorphism, ordered by canonical code.
pub fn enum_finspaces(n: usize) -> Result<Vec<FinSpace>> {
    if n > MAX_SPACE_POINTS {
        return Err(Error::BoundExceeded(format!(
            "spaces are enumerated up to {MAX_SPACE_POINTS} points"
        )));
    }
    let mut codes: BTreeSet<u32> = BTreeSet::new();
    for b in labeled_preorder_bits(n) {
        codes.insert(canonical_code(&space_from_bits(b, n)));
    }
    Ok(codes.into_iter().map(|c| space_from_bits(c, n)).collect())
}

/// The groups of order at most 9, one per isomorphism class.
pub fn small_groups() -> Vec<(&'static str, Group)> {
    let c = Group::cyclic;
    let s3 = Group::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]);
    let d4 = Group::from_permutations(&[vec![1, 2, 3, 0], vec![0, 3, 2, 1]]);
    vec![
        ("Z1", c(1)),
        ("Z2", c(2)),
        ("Z3", c(3)),
        ("Z4", c(4)),
        ("Z2xZ2", c(2).product(&c(2))),
        ("Z5", c(5)),
        ("Z6", c(6)),
        ("S3", s3),
        ("Z7", c(7)),
        ("Z8", c(8)),
        ("Z2xZ4", c(2).product(&c(4))),
        ("Z2xZ2xZ2", c(2).product(&c(2)).product(&c(2))),
        ("D4", d4),
        ("Q8", quaternions()),
        ("Z9", c(9)),
        ("Z3xZ3", c(3).product(&c(3))),
    ]
}

fn quaternions() -> Group {
    // element 2u + sign: u ∈ {1, i, j, k}, sign 0 for +, 1 for -
    let unit_mul = |u: usize, v: usize| -> (usize, usize) {
        // (unit, sign) of u·v for u, v ∈ {1, i, j, k}
        match (u, v) {
            (0, v) => (v, 0),
            (u, 0) => (u, 0),
            (u, v) if u == v => (0, 1),
            (1, 2) => (3, 0),
            (2, 3) => (1, 0),
            (3, 1) => (2, 0),
            (2, 1) => (3, 1),
            (3, 2) => (1, 1),
            (1, 3) => (2, 1),
            _ => unreachable!(),
        }
    };
    let mut table = vec![0; 64];
    for a in 0..8 {
        for b in 0..8 {
            let (u, s) = unit_mul(a / 2, b / 2);
            table[a * 8 + b] = 2 * u + ((s + a % 2 + b % 2) % 2);
        }
    }
    Group {
        names: ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        table,
        identity: 0,
    }
}

/// The algebraic data of a finite groupoid: a disjoint union of transitive
/// components, each `k` objects with isotropy group `H`.
#[derive(Clone, Debug)]
struct Algebraic {
    m: usize,
    n: usize,
    src: Vec<usize>,
    tgt: Vec<usize>,
    unit: Vec<usize>,
    inv: Vec<usize>,
    mul: Vec<usize>,
    arrow_names: Vec<String>,
    composable: Vec<(usize, usize)>,
}

const NO: usize = usize::MAX;

impl Algebraic {
    fn build(components: &[(usize, &Group)]) -> Self {
        let mut a = Algebraic {
            m: 0,
            n: 0,
            src: vec![],
            tgt: vec![],
            unit: vec![],
            inv: vec![],
            mul: vec![],
            arrow_names: vec![],
            composable: vec![],
        };
        let mut triples = Vec::new();
        for (ci, &(k, h)) in components.iter().enumerate() {
            let base_obj = a.m;
            let base_arr = a.n;
            let hn = h.order();
            let idx = |i: usize, g: usize, j: usize| base_arr + i * hn * k + g * k + j;
            for i in 0..k {
                for g in 0..hn {
                    for j in 0..k {
                        a.src.push(base_obj + i);
                        a.tgt.push(base_obj + j);
                        a.inv.push(idx(j, h.inv(g), i));
                        a.arrow_names.push(format!(
                            "({},{},{})",
                            base_obj + i,
                            h.names[g],
                            base_obj + j
                        ));
                        triples.push((i, g, j, k, hn, base_arr, ci));
                    }
                }
            }
            for i in 0..k {
                a.unit.push(idx(i, h.identity, i));
            }
            a.m += k;
            a.n += k * k * hn;
        }
        let n = a.n;
        a.mul = vec![NO; n * n];
        for x in 0..n {
            for y in 0..n {
                let (i, g, j, k, hn, base, ci) = triples[x];
                let (j2, g2, l, _, _, _, ci2) = triples[y];
                if ci != ci2 || j != j2 {
                    continue;
                }
                let h = components[ci].1;
                a.mul[x * n + y] = base + i * hn * k + h.mul(g, g2) * k + l;
                a.composable.push((x, y));
            }
        }
        a
    }

    fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.n + y]
    }

    /// Automorphisms as (arrow permutation, object permutation).
    fn automorphisms(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let n = self.n;
        let mut out = Vec::new();
        let mut f = vec![NO; n];
        let mut used = vec![false; n];
        let is_unit = |x: usize| self.unit[self.src[x]] == x;
        fn go(
            i: usize,
            a: &Algebraic,
            f: &mut Vec<usize>,
            used: &mut Vec<bool>,
            out: &mut Vec<(Vec<usize>, Vec<usize>)>,
            is_unit: &dyn Fn(usize) -> bool,
        ) {
            let n = a.n;
            if i == n {
                let obj: Vec<usize> = (0..a.m).map(|m| a.src[f[a.unit[m]]]).collect();
                out.push((f.clone(), obj));
                return;
            }
            for c in 0..n {
                if used[c] || is_unit(i) != is_unit(c) {
                    continue;
                }
                let ok = (0..i).all(|j| {
                    let d = f[j];
                    (a.src[i] == a.src[j]) == (a.src[c] == a.src[d])
                        && (a.src[i] == a.tgt[j]) == (a.src[c] == a.tgt[d])
                        && (a.tgt[i] == a.src[j]) == (a.tgt[c] == a.src[d])
                        && (a.tgt[i] == a.tgt[j]) == (a.tgt[c] == a.tgt[d])
                        && check_mul(a, f, i, j, c, d)
                        && check_mul(a, f, j, i, d, c)
                }) && check_mul(a, f, i, i, c, c);
                if !ok {
                    continue;
                }
                f[i] = c;
                used[c] = true;
                go(i + 1, a, f, used, out, is_unit);
                used[c] = false;
                f[i] = NO;
            }
        }
        fn check_mul(a: &Algebraic, f: &[usize], x: usize, y: usize, fx: usize, fy: usize) -> bool {
            let p = a.mul(x, y);
            if p == NO {
                return true;
            }
            let q = a.mul(fx, fy);
            q != NO && (f[p] == NO || f[p] == q)
        }
        let fx = &mut f;
        go(0, self, fx, &mut used, &mut out, &is_unit);
        out
    }

    /// Closes a relation on arrows (bit `a * n + b`) under reflexivity,
    /// transitivity, units, inverses and products, given the object order.
    /// `None` when source or target would stop being monotone.
    fn close(&self, rel: u128, mleq: u32) -> Option<u128> {
        let (n, m) = (self.n, self.m);
        let bit = |a: usize, b: usize| 1u128 << (a * n + b);
        let mle = |x: usize, y: usize| mleq >> (x * m + y) & 1 == 1;
        let mut r = rel;
        for a in 0..n {
            r |= bit(a, a);
        }
        for x in 0..m {
            for y in 0..m {
                if mle(x, y) {
                    r |= bit(self.unit[x], self.unit[y]);
                }
            }
        }
        loop {
            let before = r;
            for a in 0..n {
                for b in 0..n {
                    if r & bit(a, b) != 0 {
                        if !mle(self.src[a], self.src[b]) || !mle(self.tgt[a], self.tgt[b]) {
                            return None;
                        }
                        r |= bit(self.inv[a], self.inv[b]);
                    }
                }
            }
            for &(a, b) in &self.composable {
                for &(a2, b2) in &self.composable {
                    if r & bit(a, a2) != 0 && r & bit(b, b2) != 0 {
                        r |= bit(self.mul(a, b), self.mul(a2, b2));
                    }
                }
            }
            for k in 0..n {
                for i in 0..n {
                    if r & bit(i, k) == 0 {
                        continue;
                    }
                    for j in 0..n {
                        if r & bit(k, j) != 0 {
                            r |= bit(i, j);
                        }
                    }
                }
            }
            if r == before {
                return Some(r);
            }
        }
    }

    fn lifting(&self, rel: u128, mleq: u32, map: &[usize]) -> bool {
        let (n, m) = (self.n, self.m);
        (0..n).all(|a| {
            (0..m).all(|y| {
                mleq >> (map[a] * m + y) & 1 == 0
                    || (0..n).any(|b| map[b] == y && rel >> (a * n + b) & 1 == 1)
            })
        })
    }

    fn groupoid(&self, rel: u128, mleq: u32) -> Groupoid {
        let n = self.n;
        let arrows = FinSpace::from_fn_unchecked(self.arrow_names.clone(), |a, b| {
            rel >> (a * n + b) & 1 == 1
        });
        let objects = space_from_bits(mleq, self.m);
        Groupoid::from_fn(
            Arc::new(arrows),
            Arc::new(objects),
            self.src.clone(),
            self.tgt.clone(),
            self.unit.clone(),
            self.inv.clone(),
            |a, b| self.mul(a, b),
        )
    }
}

/// Multisets of transitive components within the bounds.
fn component_lists(bounds: &Bounds, groups: &[(&'static str, Group)]) -> Vec<Vec<(usize, usize)>> {
    let mut kinds: Vec<(usize, usize, usize)> = Vec::new(); // (k, group index, arrows)
    for k in 1..=bounds.max_objects {
        for (gi, (_, g)) in groups.iter().enumerate() {
            let size = k * k * g.order();
            if size <= bounds.max_arrows {
                kinds.push((k, gi, size));
            }
        }
    }
    let mut out = Vec::new();
    fn go(
        start: usize,
        objs: usize,
        arrows: usize,
        cur: &mut Vec<(usize, usize)>,
        kinds: &[(usize, usize, usize)],
        b: &Bounds,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for (i, &(k, gi, size)) in kinds.iter().enumerate().skip(start) {
            if objs + k <= b.max_objects && arrows + size <= b.max_arrows {
                cur.push((k, gi));
                go(i, objs + k, arrows + size, cur, kinds, b, out);
                cur.pop();
            }
        }
    }
    go(0, 0, 0, &mut Vec::new(), &kinds, bounds, &mut out);
    out
}

/// Every valid groupoid within the bounds, up to isomorphism of
/// topological groupoids. Deterministic order.
pub fn enum_groupoids(bounds: &Bounds) -> Result<Vec<Groupoid>> {
    bounds.check()?;
    if bounds.max_arrows > 11 {
        return Err(Error::BoundExceeded(
            "groupoids are enumerated up to 11 arrows".into(),
        ));
    }
    let groups = small_groups();
    let mut out = Vec::new();
    for comps in component_lists(bounds, &groups) {
        let with_groups: Vec<(usize, &Group)> =
            comps.iter().map(|&(k, gi)| (k, &groups[gi].1)).collect();
        let alg = Algebraic::build(&with_groups);
        out.extend(
            topologies(&alg)
                .into_iter()
                .map(|(rel, mleq)| alg.groupoid(rel, mleq)),
        );
    }
    Ok(out)
}

/// All compatible (arrow order, object order) pairs up to automorphism,
/// sorted by canonical code.
fn topologies(alg: &Algebraic) -> Vec<(u128, u32)> {
    let (n, m) = (alg.n, alg.m);
    let autos = alg.automorphisms();
    let mut found: BTreeSet<(u32, u128)> = BTreeSet::new();
    for mleq in labeled_preorder_bits(m) {
        let Some(start) = alg.close(0, mleq) else {
            continue;
        };
        let mut seen: HashSet<u128> = HashSet::from([start]);
        let mut frontier = vec![start];
        while let Some(r) = frontier.pop() {
            for a in 0..n {
                for b in 0..n {
                    if r >> (a * n + b) & 1 == 0 {
                        if let Some(c) = alg.close(r | 1 << (a * n + b), mleq) {
                            if seen.insert(c) {
                                frontier.push(c);
                            }
                        }
                    }
                }
            }
        }
        for r in seen {
            if !alg.lifting(r, mleq, &alg.src) || !alg.lifting(r, mleq, &alg.tgt) {
                continue;
            }
            let mut best: Option<(u32, u128)> = None;
            for (f, g) in &autos {
                let mut mc = 0u32;
                for x in 0..m {
                    for y in 0..m {
                        if mleq >> (x * m + y) & 1 == 1 {
                            mc |= 1 << (g[x] * m + g[y]);
                        }
                    }
                }
                let mut ac = 0u128;
                for a in 0..n {
                    for b in 0..n {
                        if r >> (a * n + b) & 1 == 1 {
                            ac |= 1 << (f[a] * n + f[b]);
                        }
                    }
                }
                if best.is_none_or(|b| (mc, ac) < b) {
                    best = Some((mc, ac));
                }
            }
            found.insert(best.unwrap());
        }
    }
    found.into_iter().map(|(mc, ac)| (ac, mc)).collect()
}

/// Unions of orbits, ordered by size then lexicographically.
pub fn enum_stable_subsets(g: &Groupoid) -> Vec<PointSet> {
    let orbits = g.orbits();
    let mut out: Vec<PointSet> = (0..1u64 << orbits.len())
        .map(|mask| {
            orbits
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .flat_map(|(_, o)| o.iter().copied())
                .collect()
        })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Closure of a set of arrows under products and inverses.
fn close_arrows(g: &Groupoid, start: &PointSet) -> PointSet {
    let mut r = start.clone();
    loop {
        let mut next = r.clone();
        for &a in &r {
            next.insert(g.inv(a));
            for &b in &r {
                if let Some(c) = g.mul(a, b) {
                    next.insert(c);
                }
            }
        }
        if next == r {
            return r;
        }
        r = next;
    }
}

/// Subgroupoids over `L` containing `base`, found by adding one arrow of
/// `Γ_L^L` at a time and closing.
fn subgroupoids_over(g: &Arc<Groupoid>, l: &PointSet, base: &PointSet) -> Vec<Subgroupoid> {
    let within = g.restrict(Some(l), Some(l));
    let mut start = base.clone();
    start.extend(l.iter().map(|&m| g.e(m)));
    let start = close_arrows(g, &start);
    let mut seen: BTreeSet<PointSet> = BTreeSet::from([start.clone()]);
    let mut frontier = vec![start];
    while let Some(r) = frontier.pop() {
        for &a in within.difference(&r) {
            let mut s = r.clone();
            s.insert(a);
            let c = close_arrows(g, &s);
            if seen.insert(c.clone()) {
                frontier.push(c);
            }
        }
    }
    seen.into_iter()
        .map(|r| Subgroupoid::new_unchecked(g.clone(), r, l.clone()))
        .filter(|s| s.is_valid())
        .collect()
}

fn subsets(set: &PointSet) -> Vec<PointSet> {
    let items: Vec<usize> = set.iter().copied().collect();
    (0..1u64 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &x)| x)
                .collect()
        })
        .collect()
}

/// Every valid subgroupoid, ordered by `L` then `R`.
pub fn enum_subgroupoids(g: &Arc<Groupoid>) -> Vec<Subgroupoid> {
    let mut out = Vec::new();
    for l in subsets(&g.objects().all()) {
        out.extend(subgroupoids_over(g, &l, &PointSet::new()));
    }
    out
}

/// Subgroupoids that are closed, in `S` and full in `S`.
pub fn enum_full_closed_in_s(g: &Arc<Groupoid>, stable: &PointSet) -> Vec<Subgroupoid> {
    let mut out = Vec::new();
    for l in subsets(&g.objects().all()) {
        let ls: PointSet = l.intersection(stable).copied().collect();
        let base = g.restrict(Some(&ls), Some(&ls));
        out.extend(
            subgroupoids_over(g, &l, &base)
                .into_iter()
                .filter(|s| s.is_closed() && s.is_in_s(stable) && s.is_full_in_s(stable)),
        );
    }
    out
}

/// Equivariant resolutions of `S̄` with at most `max_points` points, up to
/// module isomorphism. `S` must be stable and non-empty.
pub fn enum_resolutions(
    g: &Arc<Groupoid>,
    stable: &PointSet,
    max_points: usize,
) -> Result<Vec<Resolution>> {
    if max_points > MAX_SPACE_POINTS {
        return Err(Error::BoundExceeded(format!(
            "modules are enumerated up to {MAX_SPACE_POINTS} points"
        )));
    }
    if !g.is_stable(stable) {
        return Err(Error::NotStable(g.describe_objects(stable)));
    }
    let objects = g.objects();
    let closure = objects.closure(stable);
    let rest: Vec<usize> = closure.difference(stable).copied().collect();
    let s_list: Vec<usize> = stable.iter().copied().collect();
    let k = s_list.len();
    let mut out: Vec<Resolution> = Vec::new();
    for n in k..=max_points {
        let r = n - k;
        if r > 0 && rest.is_empty() {
            break;
        }
        for bits in labeled_preorder_bits(n) {
            let z = space_from_bits(bits, n);
            // φ on the first k points is the bijection onto S
            if !(0..k).all(|a| (0..k).all(|b| z.leq(a, b) == objects.leq(s_list[a], s_list[b]))) {
                continue;
            }
            if !(k..n).all(|x| (0..k).any(|a| z.leq(x, a))) {
                continue;
            }
            let mut phi = s_list.clone();
            phi.resize(n, 0);
            for_each_tail(&rest, r, &mut |tail| {
                phi[k..].copy_from_slice(tail);
                if !is_monotone(&z, objects, &phi) {
                    return;
                }
                let separated = (0..n).all(|a| {
                    (a + 1..n)
                        .all(|b| phi[a] != phi[b] || !(0..n).any(|c| z.leq(a, c) && z.leq(b, c)))
                });
                if !separated {
                    return;
                }
                let zs = Arc::new(z.clone());
                for module in actions(g, &zs, &phi) {
                    let res = Resolution {
                        module,
                        stable: stable.clone(),
                    };
                    if res.is_valid() && !out.iter().any(|o| o.find_isomorphism(&res).is_some()) {
                        out.push(res);
                    }
                }
            });
        }
    }
    Ok(out)
}

fn for_each_tail(choices: &[usize], len: usize, f: &mut dyn FnMut(&[usize])) {
    let mut cur = vec![0; len];
    fn go(i: usize, choices: &[usize], cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if i == cur.len() {
            f(cur);
            return;
        }
        for &c in choices {
            cur[i] = c;
            go(i + 1, choices, cur, f);
        }
    }
    go(0, choices, &mut cur, f);
}

/// Right actions on `(Z, φ)` satisfying the algebraic module axioms.
fn actions(g: &Arc<Groupoid>, z: &Arc<FinSpace>, phi: &[usize]) -> Vec<RightModule> {
    let (n, k) = (z.len(), g.num_arrows());
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| {
            (0..k)
                .filter(move |&a| g.s(a) == phi[x])
                .map(move |a| (x, a))
        })
        .collect();
    let mut table = vec![NO; n * k];
    for x in 0..n {
        table[x * k + g.e(phi[x])] = x;
    }
    let mut out = Vec::new();
    fn consistent(g: &Groupoid, table: &[usize], n: usize, k: usize) -> bool {
        for x in 0..n {
            for a in 0..k {
                let w = table[x * k + a];
                if w == NO {
                    continue;
                }
                let back = table[w * k + g.inv(a)];
                if back != NO && back != x {
                    return false;
                }
                for b in 0..k {
                    let (Some(ab), v) = (g.mul(a, b), table[w * k + b]) else {
                        continue;
                    };
                    let direct = table[x * k + ab];
                    if v != NO && direct != NO && v != direct {
                        return false;
                    }
                }
            }
        }
        true
    }
    fn go(
        i: usize,
        cells: &[(usize, usize)],
        g: &Groupoid,
        phi: &[usize],
        table: &mut Vec<usize>,
        n: usize,
        k: usize,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        if i == cells.len() {
            emit(table);
            return;
        }
        let (x, a) = cells[i];
        if table[x * k + a] != NO {
            go(i + 1, cells, g, phi, table, n, k, emit);
            return;
        }
        for w in 0..n {
            if phi[w] != g.t(a) {
                continue;
            }
            table[x * k + a] = w;
            if consistent(g, table, n, k) {
                go(i + 1, cells, g, phi, table, n, k, emit);
            }
            table[x * k + a] = NO;
        }
    }
    go(0, &cells, g, phi, &mut table, n, k, &mut |t| {
        let t = t.to_vec();
        if let Ok(m) = RightModule::from_fn(g.clone(), z.clone(), phi.to_vec(), |x, a| {
            let w = t[x * k + a];
            (w != NO).then_some(w)
        }) {
            if m.is_valid() {
                out.push(m);
            }
        }
    });
    out
}

/// The identity equivalence and every valid pullback along `f: N → M` with
/// `|N| <= max_objects` and at most `max_arrows` arrows upstairs.
pub fn enum_pullback_moritas(g: &Arc<Groupoid>, bounds: &Bounds) -> Vec<MoritaEquivalence> {
    let mut out = vec![MoritaEquivalence::identity(g.clone())];
    let m = g.num_objects();
    for n in 1..=bounds.max_objects {
        for bits in labeled_preorder_bits(n) {
            let space = space_from_bits(bits, n);
            let mut f = vec![0; n];
            loop {
                if let Some(x) = pullback_within(g, &space, &f, bounds) {
                    out.push(x);
                }
                let mut i = 0;
                while i < n {
                    f[i] += 1;
                    if f[i] < m {
                        break;
                    }
                    f[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
        }
    }
    out
}

fn pullback_within(
    g: &Arc<Groupoid>,
    n: &FinSpace,
    f: &[usize],
    bounds: &Bounds,
) -> Option<MoritaEquivalence> {
    if !is_monotone(n, g.objects(), f) {
        return None;
    }
    let arrows: usize = (0..n.len())
        .map(|a| (0..n.len()).map(|b| g.hom(f[a], f[b]).len()).sum::<usize>())
        .sum();
    if arrows > bounds.max_arrows {
        return None;
    }
    MoritaEquivalence::pullback(g.clone(), n, f).ok()
}

/// What [`random_instance`] should produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Space,
    Groupoid,
    Morita,
}

/// A randomly generated value, valid for its kind.
#[derive(Clone, Debug)]
pub enum Instance {
    Space(FinSpace),
    Groupoid(Groupoid),
    Morita(MoritaEquivalence),
}

fn random_space(rng: &mut ChaCha8Rng, n: usize) -> FinSpace {
    let mut bits = 0;
    let pairs = rng.gen_range(0..=n);
    for _ in 0..pairs {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        bits |= 1 << (a * n + b);
    }
    space_from_bits(close_preorder(bits, n), n)
}

fn random_groupoid(rng: &mut ChaCha8Rng, bounds: &Bounds) -> Groupoid {
    let groups = small_groups();
    let lists = component_lists(bounds, &groups);
    let comps = lists.choose(rng).expect("bounds admit no groupoid");
    let with_groups: Vec<(usize, &Group)> =
        comps.iter().map(|&(k, gi)| (k, &groups[gi].1)).collect();
    let alg = Algebraic::build(&with_groups);
    for _ in 0..32 {
        let mleq = close_preorder(random_space(rng, alg.m).leq_bits(), alg.m);
        let mut rel = 0u128;
        for _ in 0..rng.gen_range(0..=2) {
            let (a, b) = (rng.gen_range(0..alg.n), rng.gen_range(0..alg.n));
            rel |= 1 << (a * alg.n + b);
        }
        if let Some(r) = alg.close(rel, mleq) {
            if alg.lifting(r, mleq, &alg.src) && alg.lifting(r, mleq, &alg.tgt) {
                return alg.groupoid(r, mleq);
            }
        }
    }
    alg.groupoid(
        alg.close(0, close_preorder(0, alg.m)).unwrap(),
        close_preorder(0, alg.m),
    )
}

/// A seeded random instance; identical bounds give identical output.
pub fn random_instance(kind: Kind, bounds: &Bounds) -> Result<Instance> {
    bounds.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
    Ok(match kind {
        Kind::Space => {
            let n = rng.gen_range(1..=bounds.max_module_points.min(MAX_SPACE_POINTS));
            Instance::Space(random_space(&mut rng, n))
        }
        Kind::Groupoid => Instance::Groupoid(random_groupoid(&mut rng, bounds)),
        Kind::Morita => {
            let g = Arc::new(random_groupoid(&mut rng, bounds));
            loop {
                let n = rng.gen_range(1..=bounds.max_objects);
                let space = random_space(&mut rng, n);
                let f: Vec<usize> = (0..n).map(|_| rng.gen_range(0..g.num_objects())).collect();
                let big = Bounds {
                    max_arrows: usize::MAX,
                    ..*bounds
                };
                if let Some(x) = pullback_within(&g, &space, &f, &big) {
                    break Instance::Morita(x);
                }
            }
        }
    })
}

/// Up to `count` valid pullback equivalences out of `g`, sampled with the
/// given seed, each with at most `max_arrows` arrows upstairs.
pub fn sample_moritas(g: &Arc<Groupoid>, bounds: &Bounds, count: usize) -> Vec<MoritaEquivalence> {
    let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
    let mut out = Vec::new();
    for _ in 0..count {
        let n = rng.gen_range(1..=bounds.max_objects);
        let space = random_space(&mut rng, n);
        let f: Vec<usize> = (0..n).map(|_| rng.gen_range(0..g.num_objects())).collect();
        if let Some(x) = pullback_within(g, &space, &f, bounds) {
            out.push(x);
        }
    }
    out
}

/// Groups the emitted groupoids by number of objects and arrows; used in
/// reports.
pub fn census(groupoids: &[Groupoid]) -> HashMap<(usize, usize), usize> {
    let mut out = HashMap::new();
    for g in groupoids {
        *out.entry((g.num_objects(), g.num_arrows())).or_insert(0) += 1;
    }
    out
}

trait LeqBits {
    fn leq_bits(&self) -> u32;
}

impl LeqBits for FinSpace {
    fn leq_bits(&self) -> u32 {
        space_bits(self)
    }
}
