//! Right and left modules over a groupoid, isomorphism search and orbit
//! quotients.
//!
//! A right module `(Z, φ)` has `z·γ` defined when `φ(z) = s(γ)`, landing over
//! `t(γ)`. A left module has `γ·z` defined when `t(γ) = φ(z)`, landing over
//! `s(γ)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finspace::{monotonicity_defect, FinSpace, PointSet};
use crate::groupoid::Groupoid;
use crate::iso::{find_iso, find_isos, Structure, NONE};
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

/// Shared storage for both sides: `act[z * |Γ| + γ]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Action {
    groupoid: Arc<Groupoid>,
    space: Arc<FinSpace>,
    moment: Vec<usize>,
    act: Vec<usize>,
}

impl Action {
    fn build(
        groupoid: Arc<Groupoid>,
        space: Arc<FinSpace>,
        moment: Vec<usize>,
        side: Side,
        f: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<Self> {
        let (n, k) = (space.len(), groupoid.num_arrows());
        if moment.len() != n {
            return Err(Error::PointOutOfRange {
                index: moment.len(),
                len: n,
            });
        }
        if let Some(&m) = moment.iter().find(|&&m| m >= groupoid.num_objects()) {
            return Err(Error::PointOutOfRange {
                index: m,
                len: groupoid.num_objects(),
            });
        }
        let mut act = vec![NONE; n * k];
        for z in 0..n {
            for g in 0..k {
                let end = match side {
                    Side::Right => groupoid.s(g),
                    Side::Left => groupoid.t(g),
                };
                if end != moment[z] {
                    continue;
                }
                if let Some(w) = f(z, g) {
                    if w >= n {
                        return Err(Error::PointOutOfRange { index: w, len: n });
                    }
                    act[z * k + g] = w;
                }
            }
        }
        Ok(Self {
            groupoid,
            space,
            moment,
            act,
        })
    }

    #[inline]
    fn get(&self, z: usize, g: usize) -> Option<usize> {
        let w = self.act[z * self.groupoid.num_arrows() + g];
        (w != NONE).then_some(w)
    }

    fn validate(&self, side: Side) -> Report {
        let g = &*self.groupoid;
        let (z, k) = (&*self.space, g.num_arrows());
        let mut r = Report::new();
        if let Some((a, b)) = monotonicity_defect(z, g.objects(), &self.moment) {
            r.violate(
                "moment.continuous",
                format!(
                    "`{}` <= `{}` but their moments are not ordered",
                    z.name(a),
                    z.name(b)
                ),
            );
        }
        let (fiber_end, land_end): (fn(&Groupoid, usize) -> usize, fn(&Groupoid, usize) -> usize) =
            match side {
                Side::Right => (Groupoid::s, Groupoid::t),
                Side::Left => (Groupoid::t, Groupoid::s),
            };
        let describe = |x: usize, a: usize| match side {
            Side::Right => format!("`{}`·`{}`", z.name(x), g.arrows().name(a)),
            Side::Left => format!("`{}`·`{}`", g.arrows().name(a), z.name(x)),
        };
        'dom: for x in 0..z.len() {
            for a in 0..k {
                let composable = fiber_end(g, a) == self.moment[x];
                if composable != self.get(x, a).is_some() {
                    r.violate(
                        "act.domain",
                        format!("{} must be defined exactly when composable", describe(x, a)),
                    );
                    break 'dom;
                }
            }
        }
        if !r.is_valid() {
            return r;
        }
        'moment: for x in 0..z.len() {
            for a in 0..k {
                if let Some(w) = self.get(x, a) {
                    if self.moment[w] != land_end(g, a) {
                        r.violate(
                            "act.moment",
                            format!("{} lands over the wrong object", describe(x, a)),
                        );
                        break 'moment;
                    }
                }
            }
        }
        for x in 0..z.len() {
            if self.get(x, g.e(self.moment[x])) != Some(x) {
                r.violate("act.unit", format!("the unit does not fix `{}`", z.name(x)));
                break;
            }
        }
        if r.has("act.moment") {
            return r;
        }
        'assoc: for x in 0..z.len() {
            for a in 0..k {
                let Some(xa) = self.get(x, a) else { continue };
                for b in 0..k {
                    let Some(xab) = self.get(xa, b) else { continue };
                    // right: (x·a)·b = x·(a·b); left: b·(a·x) = (b·a)·x
                    let prod = match side {
                        Side::Right => g.mul(a, b),
                        Side::Left => g.mul(b, a),
                    };
                    let direct = prod.and_then(|c| self.get(x, c));
                    if direct != Some(xab) {
                        r.violate(
                            "act.associative",
                            format!("acting by `{}` then `{}` on `{}` disagrees with acting by the product", g.arrows().name(a), g.arrows().name(b), z.name(x)),
                        );
                        break 'assoc;
                    }
                }
            }
        }
        let pairs: Vec<(usize, usize, usize)> = (0..z.len())
            .flat_map(|x| (0..k).filter_map(move |a| Some((x, a, self.get(x, a)?))))
            .collect();
        'cont: for &(x, a, w) in &pairs {
            for &(x2, a2, w2) in &pairs {
                if z.leq(x, x2) && g.arrows().leq(a, a2) && !z.leq(w, w2) {
                    r.violate(
                        "act.continuous",
                        format!(
                            "{} and {} are not ordered although their arguments are",
                            describe(x, a),
                            describe(x2, a2)
                        ),
                    );
                    break 'cont;
                }
            }
        }
        r
    }

    /// Orbit label of every point, `0..k` by first occurrence.
    fn orbit_labels(&self) -> Vec<usize> {
        let n = self.space.len();
        let mut labels = vec![NONE; n];
        let mut next = 0;
        for x in 0..n {
            if labels[x] != NONE {
                continue;
            }
            let mut stack = vec![x];
            labels[x] = next;
            while let Some(y) = stack.pop() {
                for a in 0..self.groupoid.num_arrows() {
                    if let Some(w) = self.get(y, a) {
                        if labels[w] == NONE {
                            labels[w] = next;
                            stack.push(w);
                        }
                    }
                }
            }
            next += 1;
        }
        labels
    }

    fn structure(&self, extra: Option<&[u64]>) -> Structure<'_> {
        let k = self.groupoid.num_arrows();
        let n = self.space.len();
        let ops = (0..k)
            .map(|a| (0..n).map(|z| self.act[z * k + a]).collect())
            .collect();
        let labels = (0..n)
            .map(|z| {
                let base = self.moment[z] as u64;
                extra.map_or(base, |e| base | (e[z] << 32))
            })
            .collect();
        Structure {
            space: &self.space,
            labels,
            ops,
        }
    }
}

/// A right module over a groupoid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RightModule(Action);

/// A left module over a groupoid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeftModule(Action);

macro_rules! module_common {
    ($ty:ident, $side:expr) => {
        impl $ty {
            /// Builds the action table from `f`, which is only consulted on
            /// composable pairs. No axiom is checked.
            pub fn from_fn(
                groupoid: Arc<Groupoid>,
                space: Arc<FinSpace>,
                moment: Vec<usize>,
                f: impl Fn(usize, usize) -> Option<usize>,
            ) -> Result<Self> {
                Action::build(groupoid, space, moment, $side, f).map(Self)
            }

            /// Like `from_fn`, then validated.
            pub fn new(
                groupoid: Arc<Groupoid>,
                space: Arc<FinSpace>,
                moment: Vec<usize>,
                f: impl Fn(usize, usize) -> Option<usize>,
            ) -> Result<Self> {
                let m = Self::from_fn(groupoid, space, moment, f)?;
                m.validate().into_result("module")?;
                Ok(m)
            }

            pub fn groupoid(&self) -> &Arc<Groupoid> {
                &self.0.groupoid
            }

            pub fn space(&self) -> &Arc<FinSpace> {
                &self.0.space
            }

            pub fn moment(&self) -> &[usize] {
                &self.0.moment
            }

            pub fn len(&self) -> usize {
                self.0.space.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.space.is_empty()
            }

            pub fn validate(&self) -> Report {
                self.0.validate($side)
            }

            pub fn is_valid(&self) -> bool {
                self.validate().is_valid()
            }

            pub fn orbit_labels(&self) -> Vec<usize> {
                self.0.orbit_labels()
            }

            pub fn orbits(&self) -> Vec<PointSet> {
                let labels = self.orbit_labels();
                let k = labels.iter().copied().max().map_or(0, |l| l + 1);
                let mut out = vec![PointSet::new(); k];
                for (z, &l) in labels.iter().enumerate() {
                    out[l].insert(z);
                }
                out
            }

            /// Quotient of the carrier by the orbits of the action.
            pub fn orbit_space(&self) -> (FinSpace, Vec<usize>) {
                self.0.space.quotient_by_labels(&self.orbit_labels())
            }

            /// Points in the fiber of the moment map over `m`.
            pub fn fiber(&self, m: usize) -> PointSet {
                (0..self.len()).filter(|&z| self.0.moment[z] == m).collect()
            }

            /// Some isomorphism onto `other` compatible with the moment maps
            /// and the actions.
            pub fn find_isomorphism(&self, other: &Self) -> Option<Vec<usize>> {
                if self.0.groupoid != other.0.groupoid {
                    return None;
                }
                find_iso(&self.0.structure(None), &other.0.structure(None))
            }

            /// Number of isomorphisms onto `other`, counted up to `limit`.
            pub fn count_isomorphisms(&self, other: &Self, limit: usize) -> usize {
                if self.0.groupoid != other.0.groupoid {
                    return 0;
                }
                find_isos(&self.0.structure(None), &other.0.structure(None), limit).len()
            }

            /// Whether `f` is an equivariant map over the base onto `other`,
            /// continuous as a map of spaces.
            pub fn is_morphism(&self, other: &Self, f: &[usize]) -> bool {
                f.len() == self.len()
                    && f.iter().all(|&w| w < other.len())
                    && crate::finspace::is_monotone(self.space(), other.space(), f)
                    && (0..self.len()).all(|z| other.0.moment[f[z]] == self.0.moment[z])
                    && (0..self.len()).all(|z| {
                        (0..self.0.groupoid.num_arrows())
                            .all(|a| self.0.get(z, a).map(|w| f[w]) == other.0.get(f[z], a))
                    })
            }
        }
    };
}

module_common!(RightModule, Side::Right);
module_common!(LeftModule, Side::Left);

impl RightModule {
    /// `z·γ`, defined when `φ(z) = s(γ)`.
    #[inline]
    pub fn act(&self, z: usize, g: usize) -> Option<usize> {
        self.0.get(z, g)
    }

    /// `(M, id)` with `m·γ = t(γ)`.
    pub fn base(groupoid: Arc<Groupoid>) -> Self {
        let space = groupoid.objects().clone();
        let moment = (0..space.len()).collect();
        let g2 = groupoid.clone();
        Self::from_fn(groupoid, space, moment, move |_, a| Some(g2.t(a))).unwrap()
    }

    /// `(S, i_S)` for a stable subset `S`, acting through targets.
    pub fn trivial(groupoid: Arc<Groupoid>, stable: &PointSet) -> Result<Self> {
        if !groupoid.is_stable(stable) {
            return Err(Error::NotStable(groupoid.describe_objects(stable)));
        }
        let (space, incl) = groupoid.objects().subspace(stable);
        let mut pos = vec![NONE; groupoid.num_objects()];
        for (i, &m) in incl.iter().enumerate() {
            pos[m] = i;
        }
        let g2 = groupoid.clone();
        Self::from_fn(groupoid, Arc::new(space), incl, move |_, a| {
            Some(pos[g2.t(a)])
        })
    }

    /// Isomorphism search that additionally maps the points flagged in
    /// `mark_a` exactly onto those flagged in `mark_b`.
    pub fn find_isomorphism_preserving(
        &self,
        other: &Self,
        mark_a: &PointSet,
        mark_b: &PointSet,
    ) -> Option<Vec<usize>> {
        if self.0.groupoid != other.0.groupoid {
            return None;
        }
        let flag = |m: &PointSet, n: usize| -> Vec<u64> {
            (0..n).map(|z| m.contains(&z) as u64).collect()
        };
        let (fa, fb) = (flag(mark_a, self.len()), flag(mark_b, other.len()));
        find_iso(&self.0.structure(Some(&fa)), &other.0.structure(Some(&fb)))
    }

    pub(crate) fn structure(&self) -> Structure<'_> {
        self.0.structure(None)
    }
}

impl LeftModule {
    /// `γ·z`, defined when `t(γ) = φ(z)`.
    #[inline]
    pub fn act(&self, g: usize, z: usize) -> Option<usize> {
        self.0.get(z, g)
    }

    /// `Γ` acting on itself by left multiplication, with moment `s`.
    pub fn regular(groupoid: Arc<Groupoid>) -> Self {
        let space = groupoid.arrows().clone();
        let moment = groupoid.src_map().to_vec();
        let g2 = groupoid.clone();
        Self::from_fn(groupoid, space, moment, move |x, a| g2.mul(a, x)).unwrap()
    }

    pub(crate) fn structure(&self) -> Structure<'_> {
        self.0.structure(None)
    }
}

/// `Γ\X` with its projection.
pub fn quotient_by_left_action(x: &LeftModule) -> (FinSpace, Vec<usize>) {
    x.orbit_space()
}
