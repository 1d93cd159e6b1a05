//! Groupoids over finite spaces, orbits, stable subsets and subgroupoids.
//!
//! Composition is written left to right: `a·b` is defined when
//! `t(a) = s(b)`, and then `s(a·b) = s(a)`, `t(a·b) = t(b)`.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finspace::{is_monotone, lifting_defect, monotonicity_defect, FinSpace, PointSet};
use crate::report::Report;

const NONE: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Groupoid {
    arrows: Arc<FinSpace>,
    objects: Arc<FinSpace>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    unit: Vec<usize>,
    inv: Vec<usize>,
    // mul[a * n + b], NONE where undefined
    mul: Vec<usize>,
}

impl Groupoid {
    /// Assembles a groupoid from raw tables without checking any axiom
    /// beyond index ranges. Use [`Groupoid::validate`] afterwards, or
    /// [`Groupoid::new`] to do both.
    pub fn from_parts(
        arrows: Arc<FinSpace>,
        objects: Arc<FinSpace>,
        src: Vec<usize>,
        tgt: Vec<usize>,
        unit: Vec<usize>,
        inv: Vec<usize>,
        mul: &[(usize, usize, usize)],
    ) -> Result<Self> {
        let n = arrows.len();
        let m = objects.len();
        let range = |v: &[usize], len: usize, bound: usize| -> Result<()> {
            if v.len() != len {
                return Err(Error::PointOutOfRange {
                    index: v.len(),
                    len,
                });
            }
            match v.iter().find(|&&x| x >= bound) {
                Some(&x) => Err(Error::PointOutOfRange {
                    index: x,
                    len: bound,
                }),
                None => Ok(()),
            }
        };
        range(&src, n, m)?;
        range(&tgt, n, m)?;
        range(&unit, m, n)?;
        range(&inv, n, n)?;
        let mut table = vec![NONE; n * n];
        for &(a, b, c) in mul {
            for x in [a, b, c] {
                if x >= n {
                    return Err(Error::PointOutOfRange { index: x, len: n });
                }
            }
            table[a * n + b] = c;
        }
        Ok(Self {
            arrows,
            objects,
            src,
            tgt,
            unit,
            inv,
            mul: table,
        })
    }

    /// Like [`Groupoid::from_parts`] with the product given as a function on
    /// composable pairs.
    pub fn from_fn(
        arrows: Arc<FinSpace>,
        objects: Arc<FinSpace>,
        src: Vec<usize>,
        tgt: Vec<usize>,
        unit: Vec<usize>,
        inv: Vec<usize>,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let n = arrows.len();
        let mut table = vec![NONE; n * n];
        for a in 0..n {
            for b in 0..n {
                if tgt[a] == src[b] {
                    table[a * n + b] = mul(a, b);
                }
            }
        }
        Self {
            arrows,
            objects,
            src,
            tgt,
            unit,
            inv,
            mul: table,
        }
    }

    pub fn new(
        arrows: Arc<FinSpace>,
        objects: Arc<FinSpace>,
        src: Vec<usize>,
        tgt: Vec<usize>,
        unit: Vec<usize>,
        inv: Vec<usize>,
        mul: &[(usize, usize, usize)],
    ) -> Result<Self> {
        let g = Self::from_parts(arrows, objects, src, tgt, unit, inv, mul)?;
        g.validate().into_result("groupoid")?;
        Ok(g)
    }

    pub fn arrows(&self) -> &Arc<FinSpace> {
        &self.arrows
    }

    pub fn objects(&self) -> &Arc<FinSpace> {
        &self.objects
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    #[inline]
    pub fn s(&self, a: usize) -> usize {
        self.src[a]
    }

    #[inline]
    pub fn t(&self, a: usize) -> usize {
        self.tgt[a]
    }

    #[inline]
    pub fn e(&self, m: usize) -> usize {
        self.unit[m]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> Option<usize> {
        let c = self.mul[a * self.arrows.len() + b];
        (c != NONE).then_some(c)
    }

    pub fn src_map(&self) -> &[usize] {
        &self.src
    }

    pub fn tgt_map(&self) -> &[usize] {
        &self.tgt
    }

    pub fn unit_map(&self) -> &[usize] {
        &self.unit
    }

    pub fn inv_map(&self) -> &[usize] {
        &self.inv
    }

    /// All defined products as `(a, b, a·b)`, in lexicographic order.
    pub fn mul_triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.arrows.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if let Some(c) = self.mul(a, b) {
                    out.push((a, b, c));
                }
            }
        }
        out
    }

    pub fn is_unit(&self, a: usize) -> bool {
        self.unit[self.src[a]] == a
    }

    /// Arrows from `x` to `y`.
    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.num_arrows())
            .filter(|&a| self.src[a] == x && self.tgt[a] == y)
            .collect()
    }

    /// Checks every groupoid axiom and reports one witness per violated
    /// clause.
    pub fn validate(&self) -> Report {
        let mut r = Report::new();
        let n = self.num_arrows();
        let (ar, ob) = (&*self.arrows, &*self.objects);
        let an = |a: usize| ar.name(a).to_string();

        for (clause, dom, cod, map) in [
            ("src.continuous", ar, ob, &self.src),
            ("tgt.continuous", ar, ob, &self.tgt),
            ("unit.continuous", ob, ar, &self.unit),
            ("inv.continuous", ar, ar, &self.inv),
        ] {
            if let Some((a, b)) = monotonicity_defect(dom, cod, map) {
                r.violate(
                    clause,
                    format!(
                        "`{}` <= `{}` but the images are not ordered",
                        dom.name(a),
                        dom.name(b)
                    ),
                );
            }
        }
        for m in 0..ob.len() {
            let u = self.unit[m];
            if self.src[u] != m || self.tgt[u] != m {
                r.violate(
                    "unit.section",
                    format!("unit `{}` of `{}` is not a loop at it", an(u), ob.name(m)),
                );
                break;
            }
        }
        'dom: for a in 0..n {
            for b in 0..n {
                if (self.tgt[a] == self.src[b]) != self.mul(a, b).is_some() {
                    r.violate(
                        "mul.domain",
                        format!(
                            "product of `{}` and `{}` must be defined exactly when composable",
                            an(a),
                            an(b)
                        ),
                    );
                    break 'dom;
                }
            }
        }
        if r.has("mul.domain") || r.has("unit.section") {
            return r;
        }
        'ends: for a in 0..n {
            for b in 0..n {
                if let Some(c) = self.mul(a, b) {
                    if self.src[c] != self.src[a] || self.tgt[c] != self.tgt[b] {
                        r.violate(
                            "mul.endpoints",
                            format!(
                                "`{}`·`{}` = `{}` has the wrong endpoints",
                                an(a),
                                an(b),
                                an(c)
                            ),
                        );
                        break 'ends;
                    }
                }
            }
        }
        for a in 0..n {
            let (l, rt) = (self.unit[self.src[a]], self.unit[self.tgt[a]]);
            if self.mul(l, a) != Some(a) || self.mul(a, rt) != Some(a) {
                r.violate("unit.identity", format!("units do not fix `{}`", an(a)));
                break;
            }
        }
        'assoc: for a in 0..n {
            for b in 0..n {
                let Some(ab) = self.mul(a, b) else { continue };
                for c in 0..n {
                    let Some(bc) = self.mul(b, c) else { continue };
                    if self.mul(ab, c) != self.mul(a, bc) {
                        r.violate(
                            "mul.associative",
                            format!(
                                "(`{}`·`{}`)·`{}` differs from `{}`·(`{}`·`{}`)",
                                an(a),
                                an(b),
                                an(c),
                                an(a),
                                an(b),
                                an(c)
                            ),
                        );
                        break 'assoc;
                    }
                }
            }
        }
        for a in 0..n {
            let i = self.inv[a];
            let ok = self.inv[i] == a
                && self.src[i] == self.tgt[a]
                && self.mul(a, i) == Some(self.unit[self.src[a]])
                && self.mul(i, a) == Some(self.unit[self.tgt[a]]);
            if !ok {
                r.violate(
                    "inverse",
                    format!("`{}` is not an inverse of `{}`", an(i), an(a)),
                );
                break;
            }
        }
        for (clause, map) in [("src.lifting", &self.src), ("tgt.lifting", &self.tgt)] {
            if let Some((x, y)) = lifting_defect(ar, ob, map) {
                let detail = if x == usize::MAX {
                    format!("object `{}` is not hit", ob.name(y))
                } else {
                    format!(
                        "`{}` >= image of `{}` has no lift above it",
                        ob.name(y),
                        an(x)
                    )
                };
                r.violate(clause, detail);
            }
        }
        let pairs: Vec<(usize, usize, usize)> = self.mul_triples();
        'cont: for &(a, b, c) in &pairs {
            for &(a2, b2, c2) in &pairs {
                if ar.leq(a, a2) && ar.leq(b, b2) && !ar.leq(c, c2) {
                    r.violate(
                        "mul.continuous",
                        format!(
                            "(`{}`,`{}`) <= (`{}`,`{}`) but products are not ordered",
                            an(a),
                            an(b),
                            an(a2),
                            an(b2)
                        ),
                    );
                    break 'cont;
                }
            }
        }
        r
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// Orbit label of every object; labels are `0..k` in order of first
    /// occurrence.
    pub fn orbit_labels(&self) -> Vec<usize> {
        let m = self.num_objects();
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for a in 0..self.num_arrows() {
            let (x, y) = (
                find(&mut parent, self.src[a]),
                find(&mut parent, self.tgt[a]),
            );
            if x != y {
                parent[x.max(y)] = x.min(y);
            }
        }
        let mut labels = vec![usize::MAX; m];
        let mut next = 0;
        for x in 0..m {
            let root = find(&mut parent, x);
            if labels[root] == usize::MAX {
                labels[root] = next;
                next += 1;
            }
            labels[x] = labels[root];
        }
        labels
    }

    /// The orbit partition, ordered by smallest member.
    pub fn orbits(&self) -> Vec<PointSet> {
        let labels = self.orbit_labels();
        let k = labels.iter().copied().max().map_or(0, |l| l + 1);
        let mut out = vec![PointSet::new(); k];
        for (x, &l) in labels.iter().enumerate() {
            out[l].insert(x);
        }
        out
    }

    pub fn orbit_of(&self, x: usize) -> PointSet {
        let labels = self.orbit_labels();
        (0..self.num_objects())
            .filter(|&y| labels[y] == labels[x])
            .collect()
    }

    /// `Γ_I^J`: arrows with source in `I` and target in `J`; `None` means no
    /// constraint on that side.
    pub fn restrict(&self, from: Option<&PointSet>, to: Option<&PointSet>) -> PointSet {
        (0..self.num_arrows())
            .filter(|&a| from.is_none_or(|i| i.contains(&self.src[a])))
            .filter(|&a| to.is_none_or(|j| j.contains(&self.tgt[a])))
            .collect()
    }

    pub fn is_stable(&self, set: &PointSet) -> bool {
        (0..self.num_arrows()).all(|a| set.contains(&self.src[a]) == set.contains(&self.tgt[a]))
    }

    /// Smallest stable set containing `set` (its saturation).
    pub fn saturation(&self, set: &PointSet) -> PointSet {
        let labels = self.orbit_labels();
        let hit: BTreeSet<usize> = set.iter().map(|&x| labels[x]).collect();
        (0..self.num_objects())
            .filter(|x| hit.contains(&labels[*x]))
            .collect()
    }

    /// Closure of a stable set, checked to be stable again.
    pub fn stable_closure(&self, set: &PointSet) -> Result<PointSet> {
        if !self.is_stable(set) {
            return Err(Error::NotStable(self.describe_objects(set)));
        }
        let closure = self.objects.closure(set);
        if !self.is_stable(&closure) {
            return Err(Error::InternalLemmaFailure(self.describe_objects(&closure)));
        }
        Ok(closure)
    }

    /// Orbits contained in `set`.
    pub fn orbits_within(&self, set: &PointSet) -> Vec<PointSet> {
        self.orbits()
            .into_iter()
            .filter(|o| o.is_subset(set))
            .collect()
    }

    pub fn describe_objects(&self, set: &PointSet) -> String {
        describe(&self.objects, set)
    }

    pub fn describe_arrows(&self, set: &PointSet) -> String {
        describe(&self.arrows, set)
    }

    /// Finite transversality of `L` to the orbits inside a stable `S`:
    /// every specialization of `m ∈ L ∩ S` inside `S` is reached as the
    /// target of an arrow of `Γ_L` lying above the unit at `m`.
    pub fn is_transversal(&self, stable: &PointSet, l: &PointSet) -> bool {
        self.transversality_defect(stable, l).is_none()
    }

    /// A pair `(m, y)` witnessing the failure of transversality.
    pub fn transversality_defect(&self, stable: &PointSet, l: &PointSet) -> Option<(usize, usize)> {
        let gamma_l = self.restrict(Some(l), None);
        for &m in l.intersection(stable) {
            let u = self.unit[m];
            let reach: PointSet = gamma_l
                .iter()
                .filter(|&&a| self.arrows.leq(u, a))
                .map(|&a| self.tgt[a])
                .collect();
            for y in self.objects.up(m) {
                if stable.contains(&y) && !reach.contains(&y) {
                    return Some((m, y));
                }
            }
        }
        None
    }
}

fn describe(space: &FinSpace, set: &PointSet) -> String {
    let names: Vec<&str> = set.iter().map(|&x| space.name(x)).collect();
    format!("{{{}}}", names.join(","))
}

/// A subgroupoid `R ⇉ L` of a parent groupoid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroupoid {
    pub parent: Arc<Groupoid>,
    pub r: PointSet,
    pub l: PointSet,
}

impl Subgroupoid {
    pub fn new(parent: Arc<Groupoid>, r: PointSet, l: PointSet) -> Result<Self> {
        let sub = Self { parent, r, l };
        let report = sub.validate();
        if !report.is_valid() {
            return Err(Error::InvalidSubgroupoid(report));
        }
        Ok(sub)
    }

    pub fn new_unchecked(parent: Arc<Groupoid>, r: PointSet, l: PointSet) -> Self {
        Self { parent, r, l }
    }

    /// The whole groupoid as a subgroupoid of itself.
    pub fn whole(parent: Arc<Groupoid>) -> Self {
        let r = parent.arrows().all();
        let l = parent.objects().all();
        Self { parent, r, l }
    }

    /// Unit arrows over `l`.
    pub fn units_over(parent: Arc<Groupoid>, l: PointSet) -> Self {
        let r = l.iter().map(|&m| parent.e(m)).collect();
        Self { parent, r, l }
    }

    /// Structural closure conditions, plus the requirement that source and
    /// target restrict to lifting surjections `R → L` (the finite shadow of
    /// `R ⇉ L` being a Lie groupoid in its own right).
    pub fn validate(&self) -> Report {
        let g = &*self.parent;
        let mut rep = Report::new();
        if let Some(&a) = self.r.iter().find(|&&a| a >= g.num_arrows()) {
            rep.violate("range", format!("arrow index {a} out of range"));
            return rep;
        }
        if let Some(&m) = self.l.iter().find(|&&m| m >= g.num_objects()) {
            rep.violate("range", format!("object index {m} out of range"));
            return rep;
        }
        let an = |a: usize| g.arrows().name(a).to_string();
        if let Some(&m) = self.l.iter().find(|&&m| !self.r.contains(&g.e(m))) {
            rep.violate(
                "unit",
                format!("unit at `{}` is missing", g.objects().name(m)),
            );
        }
        if let Some(&a) = self.r.iter().find(|&&a| !self.l.contains(&g.s(a))) {
            rep.violate("src", format!("source of `{}` is outside L", an(a)));
        }
        if let Some(&a) = self.r.iter().find(|&&a| !self.l.contains(&g.t(a))) {
            rep.violate("tgt", format!("target of `{}` is outside L", an(a)));
        }
        if let Some(&a) = self.r.iter().find(|&&a| !self.r.contains(&g.inv(a))) {
            rep.violate("inv", format!("inverse of `{}` is missing", an(a)));
        }
        'mul: for &a in &self.r {
            for &b in &self.r {
                if let Some(c) = g.mul(a, b) {
                    if !self.r.contains(&c) {
                        rep.violate("mul", format!("`{}`·`{}` is missing", an(a), an(b)));
                        break 'mul;
                    }
                }
            }
        }
        if !rep.is_valid() {
            return rep;
        }
        let (sub, _, _) = self.as_groupoid_parts();
        let (ar, ob) = (sub.arrows(), sub.objects());
        for (clause, map) in [
            ("src.lifting", sub.src_map()),
            ("tgt.lifting", sub.tgt_map()),
        ] {
            if let Some((x, y)) = lifting_defect(ar, ob, map) {
                let detail = if x == usize::MAX {
                    format!("`{}` is not hit", ob.name(y))
                } else {
                    format!(
                        "`{}` has no lift above `{}` inside R",
                        ob.name(y),
                        ar.name(x)
                    )
                };
                rep.violate(clause, detail);
            }
        }
        rep
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// `R ⇉ L` as a groupoid on the subspaces, with the inclusions of arrows
    /// and objects into the parent.
    pub fn as_groupoid_parts(&self) -> (Groupoid, Vec<usize>, Vec<usize>) {
        let g = &*self.parent;
        let (arrows, ai) = g.arrows().subspace(&self.r);
        let (objects, oi) = g.objects().subspace(&self.l);
        let mut opos = vec![usize::MAX; g.num_objects()];
        for (i, &m) in oi.iter().enumerate() {
            opos[m] = i;
        }
        let mut apos = vec![usize::MAX; g.num_arrows()];
        for (i, &a) in ai.iter().enumerate() {
            apos[a] = i;
        }
        let src = ai.iter().map(|&a| opos[g.s(a)]).collect();
        let tgt = ai.iter().map(|&a| opos[g.t(a)]).collect();
        let unit = oi.iter().map(|&m| apos[g.e(m)]).collect();
        let inv = ai.iter().map(|&a| apos[g.inv(a)]).collect();
        let sub = Groupoid::from_fn(
            Arc::new(arrows),
            Arc::new(objects),
            src,
            tgt,
            unit,
            inv,
            |a, b| apos[g.mul(ai[a], ai[b]).unwrap()],
        );
        (sub, ai, oi)
    }

    /// Whether `R` is closed in the subspace `Γ_L^L`.
    pub fn is_closed(&self) -> bool {
        let g = &*self.parent;
        let within = g.restrict(Some(&self.l), Some(&self.l));
        g.arrows().closure_in(&self.r, &within) == self.r
    }

    /// Conditions for `R ⇉ L` to lie in the stable set `S`: `L ∩ S` dense
    /// in `L`, transversality, and `L` meeting every orbit inside `S`.
    pub fn in_s_report(&self, stable: &PointSet) -> Report {
        let g = &*self.parent;
        let mut rep = Report::new();
        let ls: PointSet = self.l.intersection(stable).copied().collect();
        let defects = g.objects().density_defects(&ls, &self.l);
        rep.check(defects.is_empty(), "dense", || {
            format!(
                "L ∩ S is not dense in L; {} lie outside its closure",
                g.describe_objects(&defects)
            )
        });
        if let Some((m, y)) = g.transversality_defect(stable, &self.l) {
            rep.violate(
                "transversal",
                format!(
                    "specialization `{}` of `{}` is not reached from Γ_L above the unit",
                    g.objects().name(y),
                    g.objects().name(m)
                ),
            );
        }
        for o in g.orbits_within(stable) {
            if o.is_disjoint(&self.l) {
                rep.violate(
                    "orbits",
                    format!("L misses the orbit {}", g.describe_objects(&o)),
                );
                break;
            }
        }
        rep
    }

    pub fn is_in_s(&self, stable: &PointSet) -> bool {
        self.in_s_report(stable).is_valid()
    }

    /// `R` contains every arrow of `Γ` between points of `L ∩ S`.
    pub fn is_full_in_s(&self, stable: &PointSet) -> bool {
        let ls: PointSet = self.l.intersection(stable).copied().collect();
        self.parent
            .restrict(Some(&ls), Some(&ls))
            .is_subset(&self.r)
    }

    /// `L` meets every orbit contained in the closure of `S`.
    pub fn is_surjective_in_closure(&self, stable: &PointSet) -> bool {
        let g = &*self.parent;
        let closure = g.objects().closure(stable);
        g.orbits_within(&closure)
            .iter()
            .all(|o| !o.is_disjoint(&self.l))
    }

    /// Properness of `R\Γ_L^K → K` for compact `K ⊆ S̄`. Every finite space is
    /// compact and every map out of one is proper, so this always holds.
    pub fn is_proper(&self, _stable: &PointSet) -> bool {
        true
    }
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    pub names: Vec<String>,
    // table[a * n + b] = a·b
    pub table: Vec<usize>,
    pub identity: usize,
}

impl Group {
    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        (0..self.order())
            .find(|&b| self.mul(a, b) == self.identity)
            .expect("group element without inverse")
    }

    pub fn cyclic(n: usize) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        Self {
            names,
            table,
            identity: 0,
        }
    }

    /// Direct product; element `(a, b)` has index `a * other.order() + b`.
    pub fn product(&self, other: &Group) -> Self {
        let (n, m) = (self.order(), other.order());
        let mut names = Vec::with_capacity(n * m);
        for a in &self.names {
            for b in &other.names {
                names.push(format!("{a}{b}"));
            }
        }
        let mut table = vec![0; n * m * n * m];
        for x in 0..n * m {
            for y in 0..n * m {
                table[x * n * m + y] = self.mul(x / m, y / m) * m + other.mul(x % m, y % m);
            }
        }
        Self {
            names,
            table,
            identity: self.identity * m + other.identity,
        }
    }

    /// Group generated by permutations of `0..k`, elements listed in BFS
    /// order from the identity. Composition `a·b` applies `a` first.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Self {
        let k = gens[0].len();
        let id: Vec<usize> = (0..k).collect();
        let mut elems = vec![id.clone()];
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let next: Vec<usize> = elems[i].iter().map(|&x| g[x]).collect();
                if !elems.contains(&next) {
                    elems.push(next);
                }
            }
            i += 1;
        }
        let n = elems.len();
        let mut table = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let c: Vec<usize> = elems[a].iter().map(|&x| elems[b][x]).collect();
                table[a * n + b] = elems.iter().position(|e| *e == c).unwrap();
            }
        }
        Self {
            names: (0..n).map(|i| format!("g{i}")).collect(),
            table,
            identity: 0,
        }
    }

    pub fn with_names(mut self, names: &[&str]) -> Self {
        assert_eq!(names.len(), self.order());
        self.names = names.iter().map(|s| s.to_string()).collect();
        self
    }
}

/// Groupoid with only unit arrows; arrows are named after their objects.
pub fn unit_groupoid(space: &FinSpace) -> Groupoid {
    let n = space.len();
    let ids: Vec<usize> = (0..n).collect();
    Groupoid::from_fn(
        Arc::new(space.clone()),
        Arc::new(space.clone()),
        ids.clone(),
        ids.clone(),
        ids.clone(),
        ids,
        |a, _| a,
    )
}

/// `Z × Z ⇉ Z`, with arrow `(z1, z2)` going from `z1` to `z2`.
pub fn pair_groupoid(space: &FinSpace) -> Groupoid {
    let n = space.len();
    let arrows = space.product(space);
    Groupoid::from_fn(
        Arc::new(arrows),
        Arc::new(space.clone()),
        (0..n * n).map(|a| a / n).collect(),
        (0..n * n).map(|a| a % n).collect(),
        (0..n).map(|z| z * n + z).collect(),
        (0..n * n).map(|a| (a % n) * n + a / n).collect(),
        |a, b| (a / n) * n + b % n,
    )
}

/// Product groupoid; arrow `(a, b)` has index `a * h.num_arrows() + b`,
/// object `(x, y)` has index `x * h.num_objects() + y`.
pub fn product_groupoid(g: &Groupoid, h: &Groupoid) -> Groupoid {
    let (na, ma) = (h.num_arrows(), h.num_objects());
    let arrows = g.arrows().product(h.arrows());
    let objects = g.objects().product(h.objects());
    let n = g.num_arrows() * na;
    Groupoid::from_fn(
        Arc::new(arrows),
        Arc::new(objects),
        (0..n).map(|a| g.s(a / na) * ma + h.s(a % na)).collect(),
        (0..n).map(|a| g.t(a / na) * ma + h.t(a % na)).collect(),
        (0..g.num_objects() * ma)
            .map(|x| g.e(x / ma) * na + h.e(x % ma))
            .collect(),
        (0..n).map(|a| g.inv(a / na) * na + h.inv(a % na)).collect(),
        |a, b| g.mul(a / na, b / na).unwrap() * na + h.mul(a % na, b % na).unwrap(),
    )
}

/// `(Γ ⇉ M) × (Z × Z ⇉ Z)`: arrow `(γ, z1, z2)` has index
/// `γ·|Z|² + z1·|Z| + z2`, source `(s γ, z1)` and target `(t γ, z2)`.
pub fn direct_product_groupoid(g: &Groupoid, z: &FinSpace) -> Groupoid {
    product_groupoid(g, &pair_groupoid(z))
}

/// Action groupoid of a right action of a group on a space by order
/// automorphisms, `act(x, g) = x·g`: arrow `(g, x)` goes from `x` to `x·g`. Arrow
/// `(g, x)` has index `g * |X| + x`; the arrow space is the product of
/// `group_order` (an order on the group elements) with the space.
pub fn action_groupoid(
    group: &Group,
    group_order: &FinSpace,
    space: &FinSpace,
    act: impl Fn(usize, usize) -> usize,
) -> Groupoid {
    let (k, n) = (group.order(), space.len());
    let arrows = group_order.product(space);
    let at = |a: usize| act(a % n, a / n);
    Groupoid::from_fn(
        Arc::new(arrows),
        Arc::new(space.clone()),
        (0..k * n).map(|a| a % n).collect(),
        (0..k * n).map(at).collect(),
        (0..n).map(|x| group.identity * n + x).collect(),
        (0..k * n).map(|a| group.inv(a / n) * n + at(a)).collect(),
        |a, b| group.mul(a / n, b / n) * n + a % n,
    )
}

/// A group as a groupoid over a single object named `object`.
pub fn group_groupoid(group: &Group, group_order: &FinSpace, object: &str) -> Groupoid {
    let k = group.order();
    Groupoid::from_fn(
        Arc::new(group_order.clone()),
        Arc::new(FinSpace::point(object)),
        vec![0; k],
        vec![0; k],
        vec![group.identity],
        (0..k).map(|a| group.inv(a)).collect(),
        |a, b| group.mul(a, b),
    )
}

/// Whether `f` is monotone and the groupoid operations are equivariant,
/// i.e. `f` is a functor on arrows given by `arrow_map`, `object_map`.
pub fn is_functor(g: &Groupoid, h: &Groupoid, arrow_map: &[usize], object_map: &[usize]) -> bool {
    is_monotone(g.arrows(), h.arrows(), arrow_map)
        && is_monotone(g.objects(), h.objects(), object_map)
        && (0..g.num_arrows()).all(|a| {
            h.s(arrow_map[a]) == object_map[g.s(a)] && h.t(arrow_map[a]) == object_map[g.t(a)]
        })
        && g.mul_triples()
            .iter()
            .all(|&(a, b, c)| h.mul(arrow_map[a], arrow_map[b]) == Some(arrow_map[c]))
}
