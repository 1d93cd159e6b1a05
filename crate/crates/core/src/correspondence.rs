//! Morita equivalences of subgroupoids, the `Y` construction, and checks
//! relating subgroupoids on both sides of an equivalence to resolutions.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finspace::PointSet;
use crate::groupoid::Subgroupoid;
use crate::morita::{Bimodule, MoritaEquivalence};
use crate::report::Report;
use crate::resolution::{
    build_z_of_r, check_hypotheses, hat_construction, transport_resolution, Resolution,
};

/// An equivalence `X` between `Γ` and `Γ'` together with subgroupoids
/// `R ⇉ L`, `R' ⇉ L'` and a subset `Y ⊆ X` on which `X` restricts to an
/// equivalence between `R` and `R'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupoidMorita {
    pub morita: MoritaEquivalence,
    pub sub_left: Subgroupoid,
    pub sub_right: Subgroupoid,
    pub y: PointSet,
}

impl SubgroupoidMorita {
    /// The restriction of `X` to `Y`, as a bimodule between `R` and `R'`.
    /// `None` if `Y` is not carried into itself by `R` and `R'` or does not
    /// lie over `L` and `L'`.
    pub fn restricted_bimodule(&self) -> Option<Bimodule> {
        let x = &*self.morita;
        if !self.y.iter().all(|&a| {
            self.sub_left.l.contains(&x.p()[a]) && self.sub_right.l.contains(&x.p_prime()[a])
        }) {
            return None;
        }
        let (rg, ra, ro) = self.sub_left.as_groupoid_parts();
        let (rg2, ra2, ro2) = self.sub_right.as_groupoid_parts();
        let (ysp, yi) = x.space().subspace(&self.y);
        let pos = positions(&yi, x.len());
        let opos = positions(&ro, x.left_groupoid().num_objects());
        let opos2 = positions(&ro2, x.right_groupoid().num_objects());
        let mut stable = true;
        let b = Bimodule::from_fn(
            Arc::new(rg),
            Arc::new(rg2),
            Arc::new(ysp),
            yi.iter().map(|&a| opos[x.p()[a]]).collect(),
            yi.iter().map(|&a| opos2[x.p_prime()[a]]).collect(),
            |r, i| {
                let w = x.lact(ra[r], yi[i])?;
                Some(pos[w]).filter(|&j| j != usize::MAX)
            },
            |i, r| {
                let w = x.ract(yi[i], ra2[r])?;
                Some(pos[w]).filter(|&j| j != usize::MAX)
            },
        )
        .ok()?;
        for &y in &yi {
            for &r in &self.sub_left.r {
                if let Some(w) = x.lact(r, y) {
                    stable &= self.y.contains(&w);
                }
            }
            for &r in &self.sub_right.r {
                if let Some(w) = x.ract(y, r) {
                    stable &= self.y.contains(&w);
                }
            }
        }
        stable.then_some(b)
    }

    /// Every clause: both subgroupoids valid over the groupoids of `X`, `Y`
    /// lying over `L` and `L'` and carried into itself by `R` and `R'`, and
    /// the restriction being a Morita equivalence. The inclusion of `Y` is
    /// an embedding by construction (it carries the subspace order).
    pub fn validate(&self) -> Report {
        let x = &*self.morita;
        let mut r = Report::new();
        r.check(
            &self.sub_left.parent == x.left_groupoid(),
            "left.parent",
            || "left subgroupoid is not in the left groupoid".into(),
        );
        r.check(
            &self.sub_right.parent == x.right_groupoid(),
            "right.parent",
            || "right subgroupoid is not in the right groupoid".into(),
        );
        if !r.is_valid() {
            return r;
        }
        r.merge("left.", self.sub_left.validate());
        r.merge("right.", self.sub_right.validate());
        if !r.is_valid() {
            return r;
        }
        let space = x.space();
        if let Some(&a) = self
            .y
            .iter()
            .find(|&&a| !self.sub_left.l.contains(&x.p()[a]))
        {
            r.violate(
                "y.over_l",
                format!("`{}` does not lie over L", space.name(a)),
            );
        }
        if let Some(&a) = self
            .y
            .iter()
            .find(|&&a| !self.sub_right.l.contains(&x.p_prime()[a]))
        {
            r.violate(
                "y.over_l'",
                format!("`{}` does not lie over L'", space.name(a)),
            );
        }
        if !r.is_valid() {
            return r;
        }
        match self.restricted_bimodule() {
            None => r.violate(
                "y.stable",
                "Y is not carried into itself by the actions of R and R'",
            ),
            Some(b) => r.merge("y.", b.validate_morita()),
        }
        r
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// `R` as a subgroupoid Morita equivalent to itself through the identity
    /// equivalence, with `Y = R`.
    pub fn identity(sub: &Subgroupoid) -> Self {
        Self {
            morita: MoritaEquivalence::identity(sub.parent.clone()),
            sub_left: sub.clone(),
            sub_right: sub.clone(),
            y: sub.r.clone(),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            morita: self.morita.inverse(),
            sub_left: self.sub_right.clone(),
            sub_right: self.sub_left.clone(),
            y: self.y.clone(),
        }
    }

    /// Composition: outer equivalences composed, `Y''` the classes of
    /// `Y ×_{L₂} Y'`. Fails unless the induced map from `(Y ×_{L₂} Y')/R₂`
    /// to the composite is an embedding and the result validates.
    pub fn compose(&self, next: &SubgroupoidMorita) -> Result<Self> {
        if self.sub_right != next.sub_left {
            return Err(Error::MiddleMismatch);
        }
        let (morita, class) = self.morita.compose_parts(&next.morita)?;
        let (x, x2) = (&*self.morita, &*next.morita);
        let pairs: Vec<(usize, usize)> = self
            .y
            .iter()
            .flat_map(|&a| next.y.iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| x.p_prime()[a] == x2.p()[b])
            .collect();
        // classes of the middle R₂-action on Y ×_{L₂} Y'
        let index: HashMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mid = x.right_groupoid();
        let mut labels: Vec<usize> = (0..pairs.len()).collect();
        for (i, &(a, b)) in pairs.iter().enumerate() {
            for &r in &self.sub_right.r {
                if let (Some(ar), Some(rb)) = (x.ract(a, r), x2.lact(mid.inv(r), b)) {
                    if let Some(&j) = index.get(&(ar, rb)) {
                        let (li, lj) = (labels[i], labels[j]);
                        labels
                            .iter_mut()
                            .filter(|l| **l == lj)
                            .for_each(|l| *l = li);
                    }
                }
            }
        }
        let fp = crate::finspace::FinSpace::from_fn_unchecked(
            pairs
                .iter()
                .map(|&(a, b)| format!("({},{})", x.space().name(a), x2.space().name(b)))
                .collect(),
            |i, j| x.space().leq(pairs[i].0, pairs[j].0) && x2.space().leq(pairs[i].1, pairs[j].1),
        );
        let (q, proj) = fp.quotient_by_labels(&labels);
        let mut image = vec![usize::MAX; q.len()];
        for (i, p) in pairs.iter().enumerate() {
            image[proj[i]] = class[p];
        }
        if !crate::finspace::is_embedding(&q, morita.space(), &image) {
            return Err(Error::HypothesisFailure(
                "(Y ×_L Y')/R does not embed in the composite".into(),
            ));
        }
        let sm = Self {
            morita,
            sub_left: self.sub_left.clone(),
            sub_right: next.sub_right.clone(),
            y: image.into_iter().collect(),
        };
        sm.validate()
            .into_result("composite subgroupoid equivalence")?;
        Ok(sm)
    }

    /// An isomorphism of the outer bimodules carrying `Y` onto `Y`.
    pub fn find_isomorphism(&self, other: &SubgroupoidMorita) -> Option<Vec<usize>> {
        if self.sub_left != other.sub_left || self.sub_right != other.sub_right {
            return None;
        }
        self.morita
            .find_isomorphism_preserving(&other.morita, Some((&self.y, &other.y)))
    }
}

fn positions(incl: &[usize], n: usize) -> Vec<usize> {
    let mut pos = vec![usize::MAX; n];
    for (i, &a) in incl.iter().enumerate() {
        pos[a] = i;
    }
    pos
}

fn names(space: &crate::finspace::FinSpace, set: &PointSet) -> Vec<String> {
    set.iter().map(|&x| space.name(x).to_string()).collect()
}

/// The candidate `Y` and what became of it.
#[derive(Clone, Debug)]
pub struct BuildY {
    /// The closure of `X_{L∩S}^{L'∩S'}` inside `X_L^{L'}`.
    pub y: PointSet,
    pub report: Report,
    pub equivalence: Option<SubgroupoidMorita>,
}

/// `X_A^B = p⁻¹(A) ∩ p'⁻¹(B)`.
pub fn restrict_carrier(x: &MoritaEquivalence, a: &PointSet, b: &PointSet) -> PointSet {
    (0..x.len())
        .filter(|&i| a.contains(&x.p()[i]) && b.contains(&x.p_prime()[i]))
        .collect()
}

/// The `Y` construction for subgroupoids of both sides, each closed, in its
/// stable set and full in it; the right stable set is the transport of `S`.
pub fn build_y(
    x: &MoritaEquivalence,
    stable: &PointSet,
    sub_left: &Subgroupoid,
    sub_right: &Subgroupoid,
) -> Result<BuildY> {
    let stable2 = x.transport_subset(stable);
    check_hypotheses(sub_left, stable)
        .map_err(|e| Error::HypothesisFailure(format!("left: {e}")))?;
    check_hypotheses(sub_right, &stable2)
        .map_err(|e| Error::HypothesisFailure(format!("right: {e}")))?;
    let (l, l2) = (&sub_left.l, &sub_right.l);
    let ls: PointSet = l.intersection(stable).copied().collect();
    let ls2: PointSet = l2.intersection(&stable2).copied().collect();
    let within = restrict_carrier(x, l, l2);
    let core = restrict_carrier(x, &ls, &ls2);
    let y = x.space().closure_in(&core, &within);
    let sm = SubgroupoidMorita {
        morita: x.clone(),
        sub_left: sub_left.clone(),
        sub_right: sub_right.clone(),
        y: y.clone(),
    };
    let report = sm.validate();
    let equivalence = report.is_valid().then_some(sm);
    Ok(BuildY {
        y,
        report,
        equivalence,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FundPropEvidence {
    /// The transported `Z(R)` is isomorphic to `Z(R')`.
    pub resolutions_isomorphic: bool,
    /// Point names of `Z(R')` matched by the isomorphism, keyed by point
    /// names of the transported resolution.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isomorphism: Option<BTreeMap<String, String>>,
    pub isomorphism_count: usize,
    /// The candidate `Y`, by point name.
    pub y: Vec<String>,
    pub y_is_equivalence: bool,
    /// Failed clauses when the candidate `Y` is not an equivalence.
    pub y_report: Report,
}

#[derive(Clone, Debug, Serialize)]
pub struct FundProp {
    pub verdict_i: bool,
    pub verdict_ii: bool,
    pub agree: bool,
    pub evidence: FundPropEvidence,
}

/// Evaluates independently (i) whether `X` carries `Z(R)` to a resolution
/// isomorphic to `Z(R')`, and (ii) whether the `Y` construction produces a
/// subgroupoid equivalence; reports whether the two verdicts agree.
pub fn fund_prop_check(
    x: &MoritaEquivalence,
    stable: &PointSet,
    sub_left: &Subgroupoid,
    sub_right: &Subgroupoid,
) -> Result<FundProp> {
    let stable2 = x.transport_subset(stable);
    let zl = build_z_of_r(sub_left, stable)?;
    let zr = build_z_of_r(sub_right, &stable2)?;
    let moved = transport_resolution(x, &zl)?;
    let iso = moved.find_isomorphism(&zr);
    let isomorphism_count = if iso.is_some() {
        moved.module.count_isomorphisms(&zr.module, 64)
    } else {
        0
    };
    let isomorphism = iso.as_ref().map(|f| {
        f.iter()
            .enumerate()
            .map(|(a, &b)| {
                (
                    moved.space().name(a).to_string(),
                    zr.space().name(b).to_string(),
                )
            })
            .collect()
    });
    let by = build_y(x, stable, sub_left, sub_right)?;
    let verdict_i = iso.is_some();
    let verdict_ii = by.equivalence.is_some();
    Ok(FundProp {
        verdict_i,
        verdict_ii,
        agree: verdict_i == verdict_ii,
        evidence: FundPropEvidence {
            resolutions_isomorphic: verdict_i,
            isomorphism,
            isomorphism_count,
            y: names(x.space(), &by.y),
            y_is_equivalence: verdict_ii,
            y_report: by.report,
        },
    })
}

/// Compares, on both sides of a subgroupoid equivalence, the predicates
/// in-`S`, surjective in `S̄`, full in `S` and proper; `S'` is the
/// transport of `S`. Every disagreement is a violation.
pub fn invariance_check(sm: &SubgroupoidMorita, stable: &PointSet) -> Report {
    let stable2 = sm.morita.transport_subset(stable);
    let (a, b) = (&sm.sub_left, &sm.sub_right);
    let mut r = Report::new();
    let preds: [(&str, bool, bool); 4] = [
        ("in_s", a.is_in_s(stable), b.is_in_s(&stable2)),
        (
            "surjective",
            a.is_surjective_in_closure(stable),
            b.is_surjective_in_closure(&stable2),
        ),
        ("full", a.is_full_in_s(stable), b.is_full_in_s(&stable2)),
        ("proper", a.is_proper(stable), b.is_proper(&stable2)),
    ];
    for (name, left, right) in preds {
        r.check(left == right, name, || {
            format!("left side {left}, right side {right}")
        });
    }
    r
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundtripEvidence {
    pub hat_arrows: usize,
    pub hat_objects: usize,
    /// Arrows of the recovered subgroupoid of the product groupoid.
    pub recovered: Vec<String>,
    pub resolution_recovered: bool,
    pub y: Vec<String>,
    pub y_is_equivalence: bool,
    pub y_report: Report,
}

#[derive(Clone, Debug, Serialize)]
pub struct Roundtrip {
    pub ok: bool,
    pub evidence: RoundtripEvidence,
}

/// Builds `Z(R)`, passes to the direct-product groupoid, recovers `R̂` there,
/// and checks that transporting `Z(R̂)` back reproduces `Z(R)` and that
/// `R` and `R̂` are related by the `Y` construction.
pub fn roundtrip_theorem_check(sub: &Subgroupoid, stable: &PointSet) -> Result<Roundtrip> {
    let res = build_z_of_r(sub, stable)?;
    let hat = hat_construction(&res)?;
    let rhat = hat.compatibility.recover_subgroupoid();
    let back = build_z_of_r(&rhat, &hat.compatibility.resolution.stable)?;
    let round = transport_resolution(&hat.morita.inverse(), &back)?;
    let resolution_recovered = round.find_isomorphism(&res).is_some();
    let by = build_y(&hat.morita, stable, sub, &rhat)?;
    let y_is_equivalence = by.equivalence.is_some();
    Ok(Roundtrip {
        ok: resolution_recovered && y_is_equivalence,
        evidence: RoundtripEvidence {
            hat_arrows: hat.groupoid.num_arrows(),
            hat_objects: hat.groupoid.num_objects(),
            recovered: names(hat.groupoid.arrows(), &rhat.r),
            resolution_recovered,
            y: names(hat.morita.space(), &by.y),
            y_is_equivalence,
            y_report: by.report,
        },
    })
}

/// Whether two resolutions of the same stable set are isomorphic.
pub fn resolutions_isomorphic(a: &Resolution, b: &Resolution) -> bool {
    a.find_isomorphism(b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::groupoid::{unit_groupoid, Groupoid};

    fn objs(g: &Groupoid, names: &[&str]) -> PointSet {
        names
            .iter()
            .map(|n| g.objects().index_of(n).unwrap())
            .collect()
    }

    fn node_setup() -> (Arc<Groupoid>, PointSet, Subgroupoid, Subgroupoid) {
        let u = Arc::new(unit_groupoid(&node()));
        let s = objs(&u, &["g"]);
        let r1 = Subgroupoid::units_over(u.clone(), objs(&u, &["g", "x"]));
        let r2 = Subgroupoid::units_over(u.clone(), objs(&u, &["g", "y"]));
        (u, s, r1, r2)
    }

    #[test]
    fn identity_subgroupoid_equivalence() {
        let (u, s, r1, _) = node_setup();
        let sm = SubgroupoidMorita::identity(&r1);
        assert!(sm.is_valid(), "{}", sm.validate());
        let id = MoritaEquivalence::identity(u);
        let by = build_y(&id, &s, &r1, &r1).unwrap();
        let found = by.equivalence.unwrap();
        assert_eq!(found.y, r1.r);
    }

    #[test]
    fn broken_y_is_rejected() {
        let (_, _, r1, _) = node_setup();
        let mut sm = SubgroupoidMorita::identity(&r1);
        sm.y.pop_first();
        assert!(!sm.is_valid());
        sm.y.clear();
        assert!(!sm.is_valid());

        let f = Arc::new(flip());
        let mut sm = SubgroupoidMorita::identity(&Subgroupoid::whole(f));
        assert!(sm.is_valid());
        sm.y.pop_first();
        assert!(sm.validate().has("y.stable"), "{}", sm.validate());
    }

    #[test]
    fn node_branches_are_separated() {
        let (u, s, r1, r2) = node_setup();
        let id = MoritaEquivalence::identity(u);
        let by = build_y(&id, &s, &r1, &r2).unwrap();
        assert!(by.equivalence.is_none());
        let fp = fund_prop_check(&id, &s, &r1, &r2).unwrap();
        assert!(!fp.verdict_i && !fp.verdict_ii && fp.agree);
        let same = fund_prop_check(&id, &s, &r1, &r1).unwrap();
        assert!(same.verdict_i && same.verdict_ii);
    }

    #[test]
    fn flip_and_point() {
        let m = flip_to_point();
        let f = m.left_groupoid().clone();
        let all = f.objects().all();
        let a = objs(&f, &["a"]);
        let ea: PointSet = [f.arrows().index_of("(e,a)").unwrap()].into();
        let sub = Subgroupoid::new(f.clone(), ea, a).unwrap();
        let p = m.right_groupoid().clone();
        let whole = Subgroupoid::whole(p);
        let fp = fund_prop_check(&m, &all, &sub, &whole).unwrap();
        assert!(fp.verdict_i && fp.verdict_ii, "{:?}", fp);
        let sm = build_y(&m, &all, &sub, &whole)
            .unwrap()
            .equivalence
            .unwrap();
        assert!(invariance_check(&sm, &all).is_valid());
        let fp = fund_prop_check(&m, &all, &Subgroupoid::whole(f), &whole).unwrap();
        assert!(fp.verdict_i && fp.verdict_ii);
    }

    #[test]
    fn composition_of_subgroupoid_equivalences() {
        let (_, _, r1, _) = node_setup();
        let sm = SubgroupoidMorita::identity(&r1);
        let c = sm.compose(&sm).unwrap();
        assert!(c.find_isomorphism(&sm).is_some());
        let c = sm.compose(&sm.inverse()).unwrap();
        assert!(c.find_isomorphism(&sm).is_some());

        let m = flip_to_point();
        let f = m.left_groupoid().clone();
        let all = f.objects().all();
        let sm = build_y(
            &m,
            &all,
            &Subgroupoid::whole(f.clone()),
            &Subgroupoid::whole(m.right_groupoid().clone()),
        )
        .unwrap()
        .equivalence
        .unwrap();
        let back = sm.compose(&sm.inverse()).unwrap();
        assert!(back
            .find_isomorphism(&SubgroupoidMorita::identity(&Subgroupoid::whole(f)))
            .is_some());
    }

    #[test]
    fn roundtrip_examples() {
        let (_, s, r1, _) = node_setup();
        assert!(roundtrip_theorem_check(&r1, &s).unwrap().ok);

        let f = Arc::new(flip());
        let a = objs(&f, &["a"]);
        let ea: PointSet = [f.arrows().index_of("(e,a)").unwrap()].into();
        let sub = Subgroupoid::new(f.clone(), ea, a).unwrap();
        assert!(
            roundtrip_theorem_check(&sub, &f.objects().all())
                .unwrap()
                .ok
        );

        let z = Arc::new(z2pt());
        let rt =
            roundtrip_theorem_check(&Subgroupoid::whole(z.clone()), &z.objects().all()).unwrap();
        assert!(rt.ok, "{:?}", rt);
    }
}
