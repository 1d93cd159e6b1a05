//! Bimodules, Morita equivalences, their composition and inverses, and the
//! transport of modules and stable subsets along an equivalence.
//!
//! A `Γ`-`Γ'` bimodule is a space `X` with maps `p: X → M`, `p': X → M'`, a
//! left `Γ`-action along `p` and a right `Γ'`-action along `p'`.

use std::collections::HashMap;
use std::ops::Deref;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finspace::{fibered_product, lifting_defect, FinSpace, PointSet};
use crate::groupoid::Groupoid;
use crate::iso::{find_iso, find_isos, Structure};
use crate::modaction::{LeftModule, RightModule};
use crate::report::Report;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bimodule {
    pub left: LeftModule,
    pub right: RightModule,
}

impl Bimodule {
    /// Assembles a bimodule from action functions (consulted only on
    /// composable pairs). No axiom is checked.
    #[allow(clippy::too_many_arguments)]
    pub fn from_fn(
        left_groupoid: Arc<Groupoid>,
        right_groupoid: Arc<Groupoid>,
        space: Arc<FinSpace>,
        p: Vec<usize>,
        p_prime: Vec<usize>,
        left_act: impl Fn(usize, usize) -> Option<usize>,
        right_act: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<Self> {
        let left = LeftModule::from_fn(left_groupoid, space.clone(), p, |x, g| left_act(g, x))?;
        let right = RightModule::from_fn(right_groupoid, space, p_prime, right_act)?;
        Ok(Self { left, right })
    }

    pub fn space(&self) -> &Arc<FinSpace> {
        self.left.space()
    }

    pub fn left_groupoid(&self) -> &Arc<Groupoid> {
        self.left.groupoid()
    }

    pub fn right_groupoid(&self) -> &Arc<Groupoid> {
        self.right.groupoid()
    }

    pub fn p(&self) -> &[usize] {
        self.left.moment()
    }

    pub fn p_prime(&self) -> &[usize] {
        self.right.moment()
    }

    pub fn len(&self) -> usize {
        self.space().len()
    }

    pub fn is_empty(&self) -> bool {
        self.space().is_empty()
    }

    /// `γ·x`.
    pub fn lact(&self, g: usize, x: usize) -> Option<usize> {
        self.left.act(g, x)
    }

    /// `x·γ'`.
    pub fn ract(&self, x: usize, g: usize) -> Option<usize> {
        self.right.act(x, g)
    }

    /// Bimodule axioms: both maps lifting surjections, both modules valid,
    /// each action preserving the fibers of the other map, and the actions
    /// commuting.
    pub fn validate(&self) -> Report {
        let mut r = Report::new();
        if self.left.space() != self.right.space() {
            r.violate("carrier", "the two actions live on different spaces");
            return r;
        }
        let x = &**self.space();
        let (g, h) = (&**self.left_groupoid(), &**self.right_groupoid());
        r.merge("left.", self.left.validate());
        r.merge("right.", self.right.validate());
        if !r.is_valid() {
            return r;
        }
        for (clause, cod, map) in [
            ("p.lifting", g.objects(), self.p()),
            ("p'.lifting", h.objects(), self.p_prime()),
        ] {
            if let Some((a, y)) = lifting_defect(x, cod, map) {
                let detail = if a == usize::MAX {
                    format!("`{}` is not hit", cod.name(y))
                } else {
                    format!("`{}` has no lift above `{}`", cod.name(y), x.name(a))
                };
                r.violate(clause, detail);
            }
        }
        'rf: for a in 0..x.len() {
            for b in 0..h.num_arrows() {
                if let Some(w) = self.ract(a, b) {
                    if self.p()[w] != self.p()[a] {
                        r.violate(
                            "right.fibers",
                            format!(
                                "acting on `{}` by `{}` leaves its p-fiber",
                                x.name(a),
                                h.arrows().name(b)
                            ),
                        );
                        break 'rf;
                    }
                }
            }
        }
        'lf: for a in 0..x.len() {
            for b in 0..g.num_arrows() {
                if let Some(w) = self.lact(b, a) {
                    if self.p_prime()[w] != self.p_prime()[a] {
                        r.violate(
                            "left.fibers",
                            format!(
                                "acting on `{}` by `{}` leaves its p'-fiber",
                                x.name(a),
                                g.arrows().name(b)
                            ),
                        );
                        break 'lf;
                    }
                }
            }
        }
        if r.has("left.fibers") || r.has("right.fibers") {
            return r;
        }
        'comm: for a in 0..x.len() {
            for b in 0..g.num_arrows() {
                let Some(ba) = self.lact(b, a) else { continue };
                for c in 0..h.num_arrows() {
                    let Some(ac) = self.ract(a, c) else { continue };
                    if self.ract(ba, c) != self.lact(b, ac) {
                        r.violate(
                            "commute",
                            format!(
                                "(`{}`·`{}`)·`{}` differs from `{}`·(`{}`·`{}`)",
                                g.arrows().name(b),
                                x.name(a),
                                h.arrows().name(c),
                                g.arrows().name(b),
                                x.name(a),
                                h.arrows().name(c)
                            ),
                        );
                        break 'comm;
                    }
                }
            }
        }
        r
    }

    /// Bimodule axioms plus freeness and fiberwise transitivity of both
    /// actions. Properness is automatic for finite spaces.
    pub fn validate_morita(&self) -> Report {
        let mut r = self.validate();
        if !r.is_valid() {
            return r;
        }
        let x = &**self.space();
        let (g, h) = (&**self.left_groupoid(), &**self.right_groupoid());
        // right action on p-fibers: exactly one γ' with a·γ' = b
        'right: for a in 0..x.len() {
            for b in 0..x.len() {
                if self.p()[a] != self.p()[b] {
                    continue;
                }
                let hits = (0..h.num_arrows())
                    .filter(|&c| self.ract(a, c) == Some(b))
                    .count();
                if hits != 1 {
                    let clause = if hits == 0 {
                        "right.transitive"
                    } else {
                        "right.free"
                    };
                    r.violate(
                        clause,
                        format!(
                            "{hits} arrows of the right groupoid carry `{}` to `{}`",
                            x.name(a),
                            x.name(b)
                        ),
                    );
                    break 'right;
                }
            }
        }
        'left: for a in 0..x.len() {
            for b in 0..x.len() {
                if self.p_prime()[a] != self.p_prime()[b] {
                    continue;
                }
                let hits = (0..g.num_arrows())
                    .filter(|&c| self.lact(c, a) == Some(b))
                    .count();
                if hits != 1 {
                    let clause = if hits == 0 {
                        "left.transitive"
                    } else {
                        "left.free"
                    };
                    r.violate(
                        clause,
                        format!(
                            "{hits} arrows of the left groupoid carry `{}` to `{}`",
                            x.name(a),
                            x.name(b)
                        ),
                    );
                    break 'left;
                }
            }
        }
        r
    }

    fn structure(&self, marks: Option<&PointSet>) -> Structure<'_> {
        let l = self.left.structure();
        let r = self.right.structure();
        let labels = (0..self.len())
            .map(|x| {
                let flag = marks.is_some_and(|m| m.contains(&x)) as u64;
                self.p()[x] as u64 | (self.p_prime()[x] as u64) << 24 | flag << 48
            })
            .collect();
        let mut ops = l.ops;
        ops.extend(r.ops);
        Structure {
            space: self.space(),
            labels,
            ops,
        }
    }

    /// A homeomorphism onto `other` commuting with `p`, `p'` and both
    /// actions, if one exists.
    pub fn find_isomorphism(&self, other: &Bimodule) -> Option<Vec<usize>> {
        self.find_isomorphism_preserving(other, None)
    }

    /// As [`Bimodule::find_isomorphism`], additionally carrying the first
    /// subset exactly onto the second.
    pub fn find_isomorphism_preserving(
        &self,
        other: &Bimodule,
        marks: Option<(&PointSet, &PointSet)>,
    ) -> Option<Vec<usize>> {
        if self.left_groupoid() != other.left_groupoid()
            || self.right_groupoid() != other.right_groupoid()
        {
            return None;
        }
        let (ma, mb) = marks.map_or((None, None), |(a, b)| (Some(a), Some(b)));
        find_iso(&self.structure(ma), &other.structure(mb))
    }

    pub fn count_isomorphisms(&self, other: &Bimodule, limit: usize) -> usize {
        if self.left_groupoid() != other.left_groupoid()
            || self.right_groupoid() != other.right_groupoid()
        {
            return 0;
        }
        find_isos(&self.structure(None), &other.structure(None), limit).len()
    }
}

/// A transported module with the class `[z, x]` of every pair.
pub struct Transported {
    pub module: RightModule,
    pub class: HashMap<(usize, usize), usize>,
}

/// A bimodule that has been checked to be a Morita equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MoritaEquivalence(Bimodule);

impl Deref for MoritaEquivalence {
    type Target = Bimodule;

    fn deref(&self) -> &Bimodule {
        &self.0
    }
}

impl MoritaEquivalence {
    pub fn new(bimodule: Bimodule) -> Result<Self> {
        bimodule
            .validate_morita()
            .into_result("Morita equivalence")?;
        Ok(Self(bimodule))
    }

    pub fn bimodule(&self) -> &Bimodule {
        &self.0
    }

    pub fn into_bimodule(self) -> Bimodule {
        self.0
    }

    /// `Γ` acting on itself: `X = Γ`, `p = s`, `p' = t`, both actions by
    /// multiplication.
    pub fn identity(g: Arc<Groupoid>) -> Self {
        let space = g.arrows().clone();
        let (g1, g2) = (g.clone(), g.clone());
        let b = Bimodule::from_fn(
            g.clone(),
            g.clone(),
            space,
            g.src_map().to_vec(),
            g.tgt_map().to_vec(),
            move |a, x| g1.mul(a, x),
            move |x, a| g2.mul(x, a),
        )
        .expect("identity bimodule");
        Self(b)
    }

    /// Same carrier with the sides swapped: `γ'·x = x·γ'⁻¹`, `x·γ = γ⁻¹·x`.
    pub fn inverse(&self) -> Self {
        let b = &self.0;
        let (g, h) = (b.left_groupoid().clone(), b.right_groupoid().clone());
        let inv = Bimodule::from_fn(
            h.clone(),
            g.clone(),
            b.space().clone(),
            b.p_prime().to_vec(),
            b.p().to_vec(),
            |a, x| b.ract(x, h.inv(a)),
            |x, a| b.lact(g.inv(a), x),
        )
        .expect("inverse bimodule");
        Self(inv)
    }

    /// `X ×_{M₂} X'` modulo `(x, x') ∼ (x·γ, γ⁻¹·x')`.
    pub fn compose(&self, next: &MoritaEquivalence) -> Result<Self> {
        self.compose_parts(next).map(|c| c.0)
    }

    /// [`MoritaEquivalence::compose`] with the class of every pair `(x, x')`.
    pub fn compose_parts(
        &self,
        next: &MoritaEquivalence,
    ) -> Result<(Self, HashMap<(usize, usize), usize>)> {
        let (x, y) = (&self.0, &next.0);
        if x.right_groupoid() != y.left_groupoid() {
            return Err(Error::MiddleMismatch);
        }
        let mid = &**x.right_groupoid();
        let (fp, pairs) = fibered_product(x.space(), x.p_prime(), y.space(), y.p());
        let index: HashMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(i, &pr)| (pr, i)).collect();
        let labels = orbit_labels(pairs.len(), |i, emit| {
            let (a, b) = pairs[i];
            for g in 0..mid.num_arrows() {
                if let (Some(ag), Some(gb)) = (x.ract(a, g), y.lact(mid.inv(g), b)) {
                    emit(index[&(ag, gb)]);
                }
            }
        });
        check_free(pairs.len(), mid, |i, g| {
            let (a, b) = pairs[i];
            Some(index[&(x.ract(a, g)?, y.lact(mid.inv(g), b)?)])
        })?;
        let (q, proj) = fp.quotient_by_labels(&labels);
        let k = q.len();
        let mut rep = vec![usize::MAX; k];
        for (i, &c) in proj.iter().enumerate() {
            if rep[c] == usize::MAX {
                rep[c] = i;
            }
        }
        let p = rep.iter().map(|&i| x.p()[pairs[i].0]).collect();
        let p_prime = rep.iter().map(|&i| y.p_prime()[pairs[i].1]).collect();
        let b = Bimodule::from_fn(
            x.left_groupoid().clone(),
            y.right_groupoid().clone(),
            Arc::new(q),
            p,
            p_prime,
            |g, c| {
                let (a, b) = pairs[rep[c]];
                Some(proj[index[&(x.lact(g, a)?, b)]])
            },
            |c, g| {
                let (a, b) = pairs[rep[c]];
                Some(proj[index[&(a, y.ract(b, g)?)]])
            },
        )?;
        let class = pairs.iter().copied().zip(proj.iter().copied()).collect();
        Ok((Self::new(b)?, class))
    }

    /// Stable subsets of `M` to stable subsets of `M'`: `S ↦ p'(p⁻¹(S))`.
    pub fn transport_subset(&self, set: &PointSet) -> PointSet {
        (0..self.len())
            .filter(|&x| set.contains(&self.p()[x]))
            .map(|x| self.p_prime()[x])
            .collect()
    }

    /// Whether transporting the closure of `S` gives the closure of the
    /// transported set.
    pub fn check_closure_commutes(&self, stable: &PointSet) -> bool {
        let (m, m2) = (
            self.left_groupoid().objects(),
            self.right_groupoid().objects(),
        );
        self.transport_subset(&m.closure(stable)) == m2.closure(&self.transport_subset(stable))
    }

    /// Right `Γ`-modules to right `Γ'`-modules: `(Z ×_M X)/Γ` with moment
    /// `[z, x] ↦ p'(x)` and action `[z, x]·γ' = [z, x·γ']`.
    pub fn transport_module(&self, module: &RightModule) -> Result<RightModule> {
        self.transport_module_parts(module).map(|t| t.module)
    }

    /// [`MoritaEquivalence::transport_module`] together with the class of
    /// every pair `(z, x)`.
    pub fn transport_module_parts(&self, module: &RightModule) -> Result<Transported> {
        let b = &self.0;
        if module.groupoid() != b.left_groupoid() {
            return Err(Error::GroupoidMismatch(
                "module is not over the left groupoid of the equivalence".into(),
            ));
        }
        let g = &**b.left_groupoid();
        let (fp, pairs) = fibered_product(module.space(), module.moment(), b.space(), b.p());
        let index: HashMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(i, &pr)| (pr, i)).collect();
        // (z, x) ∼ (z·γ⁻¹, γ·x) for t(γ) = p(x)
        let step = |i: usize, a: usize| -> Option<usize> {
            let (z, x) = pairs[i];
            Some(index[&(module.act(z, g.inv(a))?, b.lact(a, x)?)])
        };
        let labels = orbit_labels(pairs.len(), |i, emit| {
            for a in 0..g.num_arrows() {
                if let Some(j) = step(i, a) {
                    emit(j);
                }
            }
        });
        check_free(pairs.len(), g, step)?;
        let (q, proj) = fp.quotient_by_labels(&labels);
        let mut rep = vec![usize::MAX; q.len()];
        for (i, &c) in proj.iter().enumerate() {
            if rep[c] == usize::MAX {
                rep[c] = i;
            }
        }
        let moment = rep.iter().map(|&i| b.p_prime()[pairs[i].1]).collect();
        let module =
            RightModule::from_fn(b.right_groupoid().clone(), Arc::new(q), moment, |c, a| {
                let (z, x) = pairs[rep[c]];
                Some(proj[index[&(z, b.ract(x, a)?)]])
            })?;
        let class = pairs.iter().copied().zip(proj).collect();
        Ok(Transported { module, class })
    }

    /// The Morita equivalence between `Γ` and its pullback `Γ[f]` along
    /// `f: N → M`. Carrier `{(γ, n) : t(γ) = f(n)}` with `p = s(γ)`, `p' = n`,
    /// `γ'·(γ, n) = (γ'γ, n)` and `(γ, n)·(n, δ, n') = (γδ, n')`.
    pub fn pullback(g: Arc<Groupoid>, n: &FinSpace, f: &[usize]) -> Result<Self> {
        let pg = Arc::new(pullback_groupoid(&g, n, f)?);
        let (space, pairs) = fibered_product(g.arrows(), g.tgt_map(), n, f);
        let index: HashMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(i, &pr)| (pr, i)).collect();
        let parrows = pullback_arrow_triples(&g, n, f);
        let b = Bimodule::from_fn(
            g.clone(),
            pg,
            Arc::new(space),
            pairs.iter().map(|&(a, _)| g.s(a)).collect(),
            pairs.iter().map(|&(_, m)| m).collect(),
            |a, i| {
                let (c, m) = pairs[i];
                Some(index[&(g.mul(a, c)?, m)])
            },
            |i, d| {
                let (c, _) = pairs[i];
                let (_, delta, m2) = parrows[d];
                Some(index[&(g.mul(c, delta)?, m2)])
            },
        )?;
        Self::new(b)
    }
}

fn pullback_arrow_triples(g: &Groupoid, n: &FinSpace, f: &[usize]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for a in 0..n.len() {
        for c in 0..g.num_arrows() {
            for b in 0..n.len() {
                if f[a] == g.s(c) && f[b] == g.t(c) {
                    out.push((a, c, b));
                }
            }
        }
    }
    out
}

/// `Γ[f] ⇉ N` with arrows `(n, γ, n')`, `f(n) = s(γ)`, `f(n') = t(γ)`,
/// ordered componentwise. Fails unless the result is a valid groupoid.
pub fn pullback_groupoid(g: &Groupoid, n: &FinSpace, f: &[usize]) -> Result<Groupoid> {
    if !crate::finspace::is_monotone(n, g.objects(), f) {
        return Err(Error::NotContinuous("pullback map is not monotone".into()));
    }
    let triples = pullback_arrow_triples(g, n, f);
    let index: HashMap<(usize, usize, usize), usize> =
        triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let names = triples
        .iter()
        .map(|&(a, c, b)| format!("({},{},{})", n.name(a), g.arrows().name(c), n.name(b)))
        .collect();
    let arrows = FinSpace::from_fn_unchecked(names, |i, j| {
        let (a, c, b) = triples[i];
        let (a2, c2, b2) = triples[j];
        n.leq(a, a2) && g.arrows().leq(c, c2) && n.leq(b, b2)
    });
    let pg = Groupoid::from_fn(
        Arc::new(arrows),
        Arc::new(n.clone()),
        triples.iter().map(|t| t.0).collect(),
        triples.iter().map(|t| t.2).collect(),
        (0..n.len()).map(|a| index[&(a, g.e(f[a]), a)]).collect(),
        triples
            .iter()
            .map(|&(a, c, b)| index[&(b, g.inv(c), a)])
            .collect(),
        |i, j| {
            let (a, c, _) = triples[i];
            let (_, d, b) = triples[j];
            index[&(a, g.mul(c, d).unwrap(), b)]
        },
    );
    pg.validate().into_result("pullback groupoid")?;
    Ok(pg)
}

/// Connected components of the graph on `0..n` whose edges come from
/// `neighbours`, labelled `0..k` by first occurrence.
fn orbit_labels(n: usize, neighbours: impl Fn(usize, &mut dyn FnMut(usize))) -> Vec<usize> {
    let mut labels = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        labels[start] = next;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let mut found = Vec::new();
            neighbours(i, &mut |j| found.push(j));
            for j in found {
                if labels[j] == usize::MAX {
                    labels[j] = next;
                    stack.push(j);
                }
            }
        }
        next += 1;
    }
    labels
}

/// The middle action used to form a quotient must be free.
fn check_free(n: usize, g: &Groupoid, step: impl Fn(usize, usize) -> Option<usize>) -> Result<()> {
    for i in 0..n {
        for a in 0..g.num_arrows() {
            if !g.is_unit(a) && step(i, a) == Some(i) {
                return Err(Error::HypothesisFailure(format!(
                    "the middle action fixes a point by the non-unit arrow `{}`",
                    g.arrows().name(a)
                )));
            }
        }
    }
    Ok(())
}
