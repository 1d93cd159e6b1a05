//! Equivariant resolutions, the `Z(R)` construction, `L`-compatibility,
//! recovery of subgroupoids and the direct-product construction.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finspace::{FinSpace, PointSet};
use crate::groupoid::{direct_product_groupoid, Groupoid, Subgroupoid};
use crate::modaction::RightModule;
use crate::morita::{Bimodule, MoritaEquivalence};
use crate::report::Report;

const TRANSVERSALITY_NOTE: &str =
    "transversality is checked through its finite analog: specializations are reached by the action";

/// A right module `(Z, φ)` resolving the closure of a stable subset `S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Resolution {
    pub module: RightModule,
    pub stable: PointSet,
}

impl Resolution {
    pub fn new(module: RightModule, stable: PointSet) -> Result<Self> {
        let res = Self { module, stable };
        let report = res.validate();
        if !report.is_valid() {
            return Err(Error::NotAResolution(report));
        }
        Ok(res)
    }

    pub fn groupoid(&self) -> &Arc<Groupoid> {
        self.module.groupoid()
    }

    pub fn space(&self) -> &Arc<FinSpace> {
        self.module.space()
    }

    pub fn phi(&self) -> &[usize] {
        self.module.moment()
    }

    /// `φ⁻¹(S)`.
    pub fn regular_part(&self) -> PointSet {
        (0..self.module.len())
            .filter(|&z| self.stable.contains(&self.phi()[z]))
            .collect()
    }

    /// Module axioms, `S` stable, `φ⁻¹(S)` dense, `φ` a homeomorphism from
    /// `φ⁻¹(S)` onto `S`, `φ(Z) ⊆ S̄`, and separation of the fibers: two
    /// points over the same object with a common specialization coincide.
    pub fn validate(&self) -> Report {
        let g = &**self.groupoid();
        let z = &**self.space();
        let phi = self.phi();
        let mut r = Report::new();
        r.merge("module.", self.module.validate());
        if !r.is_valid() {
            return r;
        }
        r.check(g.is_stable(&self.stable), "stable", || {
            format!(
                "{} is not a union of orbits",
                g.describe_objects(&self.stable)
            )
        });
        let regular = self.regular_part();
        let defects = z.density_defects(&regular, &z.all());
        r.check(defects.is_empty(), "dense", || {
            format!(
                "φ⁻¹(S) is not dense; {} lie outside its closure",
                describe(z, &defects)
            )
        });
        let image: PointSet = regular.iter().map(|&x| phi[x]).collect();
        let injective = image.len() == regular.len();
        let reflects = regular.iter().all(|&a| {
            regular
                .iter()
                .all(|&b| z.leq(a, b) == g.objects().leq(phi[a], phi[b]))
        });
        r.check(
            injective && image == self.stable && reflects,
            "homeo",
            || {
                if !injective {
                    "φ is not injective on φ⁻¹(S)".to_string()
                } else if image != self.stable {
                    format!("φ(φ⁻¹(S)) = {} is not S", g.describe_objects(&image))
                } else {
                    "φ does not reflect the order on φ⁻¹(S)".to_string()
                }
            },
        );
        let closure = g.objects().closure(&self.stable);
        if let Some(x) = (0..z.len()).find(|&x| !closure.contains(&phi[x])) {
            r.violate(
                "image",
                format!("`{}` maps outside the closure of S", z.name(x)),
            );
        }
        'sep: for a in 0..z.len() {
            for b in a + 1..z.len() {
                if phi[a] == phi[b] && (0..z.len()).any(|c| z.leq(a, c) && z.leq(b, c)) {
                    r.violate(
                        "separated",
                        format!(
                            "`{}` and `{}` lie over the same point and share a specialization",
                            z.name(a),
                            z.name(b)
                        ),
                    );
                    break 'sep;
                }
            }
        }
        r
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// `φ(Z) = S̄`.
    pub fn is_surjective(&self) -> bool {
        let closure = self.groupoid().objects().closure(&self.stable);
        let image: PointSet = self.phi().iter().copied().collect();
        image == closure
    }

    /// Preimages of compact sets are compact; automatic for finite spaces.
    pub fn is_proper(&self) -> bool {
        true
    }

    /// Module isomorphism between two resolutions of the same stable set.
    pub fn find_isomorphism(&self, other: &Resolution) -> Option<Vec<usize>> {
        if self.stable != other.stable {
            return None;
        }
        self.module.find_isomorphism(&other.module)
    }

    /// The orbits of `Z` under the action.
    pub fn orbits(&self) -> Vec<PointSet> {
        self.module.orbits()
    }

    /// `L`-compatibility with the given `L̃`, if it holds.
    pub fn compatibility(&self, l: PointSet, ltilde: PointSet) -> Option<LCompatibility> {
        let comp = LCompatibility {
            resolution: self.clone(),
            l,
            ltilde,
        };
        comp.validate().is_valid().then_some(comp)
    }

    /// Searches the sections of `φ` over `L` for one satisfying the
    /// compatibility conditions. Returns `None` unless `L ∩ S` is dense in
    /// `L`.
    pub fn is_l_compatible(&self, l: &PointSet) -> Option<LCompatibility> {
        self.l_compatible_candidates(l, 1).pop()
    }

    /// Every admissible `L̃` over `L`, up to `limit` of them.
    pub fn l_compatible_candidates(&self, l: &PointSet, limit: usize) -> Vec<LCompatibility> {
        let m = self.groupoid().objects();
        let ls: PointSet = l.intersection(&self.stable).copied().collect();
        if !m.is_dense_in(&ls, l) {
            return Vec::new();
        }
        let z = &**self.space();
        let phi = self.phi();
        let base: Vec<usize> = l.iter().copied().collect();
        let fibers: Vec<Vec<usize>> = base
            .iter()
            .map(|&b| (0..z.len()).filter(|&x| phi[x] == b).collect())
            .collect();
        let mut out = Vec::new();
        let mut chosen: Vec<usize> = Vec::new();
        fn go(
            i: usize,
            res: &Resolution,
            base: &[usize],
            fibers: &[Vec<usize>],
            chosen: &mut Vec<usize>,
            l: &PointSet,
            out: &mut Vec<LCompatibility>,
            limit: usize,
        ) {
            if out.len() >= limit {
                return;
            }
            if i == base.len() {
                let ltilde = chosen.iter().copied().collect();
                if let Some(c) = res.compatibility(l.clone(), ltilde) {
                    out.push(c);
                }
                return;
            }
            let (z, m) = (res.space(), res.groupoid().objects());
            for &x in &fibers[i] {
                let ok = (0..i).all(|j| {
                    z.leq(x, chosen[j]) == m.leq(base[i], base[j])
                        && z.leq(chosen[j], x) == m.leq(base[j], base[i])
                });
                if ok {
                    chosen.push(x);
                    go(i + 1, res, base, fibers, chosen, l, out, limit);
                    chosen.pop();
                }
            }
        }
        go(0, self, &base, &fibers, &mut chosen, l, &mut out, limit);
        out
    }
}

fn describe(space: &FinSpace, set: &PointSet) -> String {
    let names: Vec<&str> = set.iter().map(|&x| space.name(x)).collect();
    format!("{{{}}}", names.join(","))
}

/// A resolution together with `L ⊆ M` and a lift `L̃ ⊆ Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LCompatibility {
    pub resolution: Resolution,
    pub l: PointSet,
    pub ltilde: PointSet,
}

impl LCompatibility {
    /// `φ: L̃ → L` a homeomorphism; every specialization of a point of `L̃`
    /// is reached as `z̃'·γ` with `z̃' ≥ z̃` in `L̃` and `γ` above the unit at
    /// `φ(z̃)`; `L̃` meets every orbit inside `φ⁻¹(S)`.
    pub fn validate(&self) -> Report {
        let res = &self.resolution;
        let (g, z, phi) = (&**res.groupoid(), &**res.space(), res.phi());
        let m = g.objects();
        let mut r = Report::new();
        r.note(TRANSVERSALITY_NOTE);
        let image: PointSet = self.ltilde.iter().map(|&x| phi[x]).collect();
        let bijective = image.len() == self.ltilde.len() && image == self.l;
        let reflects = self.ltilde.iter().all(|&a| {
            self.ltilde
                .iter()
                .all(|&b| z.leq(a, b) == m.leq(phi[a], phi[b]))
        });
        r.check(bijective && reflects, "homeo", || {
            format!(
                "φ does not map {} homeomorphically onto {}",
                describe(z, &self.ltilde),
                g.describe_objects(&self.l)
            )
        });
        'tr: for &lt in &self.ltilde {
            let u = g.e(phi[lt]);
            for w in z.up(lt) {
                let reached = self.ltilde.iter().any(|&l2| {
                    z.leq(lt, l2)
                        && (0..g.num_arrows())
                            .any(|a| g.arrows().leq(u, a) && res.module.act(l2, a) == Some(w))
                });
                if !reached {
                    r.violate(
                        "transverse",
                        format!(
                            "specialization `{}` of `{}` is not reached by the action",
                            z.name(w),
                            z.name(lt)
                        ),
                    );
                    break 'tr;
                }
            }
        }
        let regular = res.regular_part();
        for o in res.orbits() {
            if o.is_subset(&regular) && o.is_disjoint(&self.ltilde) {
                r.violate("orbits", format!("L̃ misses the orbit {}", describe(z, &o)));
                break;
            }
        }
        r
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// `ψ = (φ|L̃)⁻¹`, indexed by object.
    fn psi(&self) -> Vec<usize> {
        let phi = self.resolution.phi();
        let mut psi = vec![usize::MAX; self.resolution.groupoid().num_objects()];
        for &x in &self.ltilde {
            psi[phi[x]] = x;
        }
        psi
    }

    /// `R = {r ∈ Γ_L : ψ(s(r))·r ∈ L̃}` over `L`.
    pub fn recover_subgroupoid(&self) -> Subgroupoid {
        let g = self.resolution.groupoid();
        let psi = self.psi();
        let r = g
            .restrict(Some(&self.l), None)
            .into_iter()
            .filter(|&a| {
                self.resolution
                    .module
                    .act(psi[g.s(a)], a)
                    .is_some_and(|w| self.ltilde.contains(&w))
            })
            .collect();
        Subgroupoid::new_unchecked(g.clone(), r, self.l.clone())
    }

    /// The saturation of `L̃` under the action.
    pub fn orbit_of_ltilde(&self) -> PointSet {
        let labels = self.resolution.module.orbit_labels();
        let hit: PointSet = self.ltilde.iter().map(|&x| labels[x]).collect();
        (0..labels.len())
            .filter(|x| hit.contains(&labels[*x]))
            .collect()
    }

    /// Openness of the orbit of `L̃` and, when `L̃` meets every orbit,
    /// whether `Z` agrees with `Z(R)` for the recovered `R`.
    pub fn resolutions_coincide_check(&self) -> Coincidence {
        let orbit = self.orbit_of_ltilde();
        let z = self.resolution.space();
        let orbit_is_open = z.is_open(&orbit);
        let meets_all_orbits = orbit.len() == z.len();
        let coincide = meets_all_orbits.then(|| {
            let sub = self.recover_subgroupoid();
            build_z_of_r(&sub, &self.resolution.stable)
                .ok()
                .and_then(|zr| zr.find_isomorphism(&self.resolution))
                .is_some()
        });
        Coincidence {
            orbit: orbit.into_iter().collect(),
            orbit_is_open,
            meets_all_orbits,
            coincide,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coincidence {
    pub orbit: Vec<usize>,
    pub orbit_is_open: bool,
    pub meets_all_orbits: bool,
    pub coincide: Option<bool>,
}

/// Checks the hypotheses of the `Z(R)` construction: a valid closed
/// subgroupoid, in `S` and full in `S`.
pub fn check_hypotheses(sub: &Subgroupoid, stable: &PointSet) -> Result<()> {
    let g = &*sub.parent;
    if !g.is_stable(stable) {
        return Err(Error::NotStable(g.describe_objects(stable)));
    }
    let report = sub.validate();
    if !report.is_valid() {
        return Err(Error::InvalidSubgroupoid(report));
    }
    if !sub.is_closed() {
        return Err(Error::NotClosed);
    }
    let in_s = sub.in_s_report(stable);
    if let Some(v) = in_s.violations.first() {
        return Err(Error::NotInS(format!("{}: {}", v.clause, v.detail)));
    }
    if !sub.is_full_in_s(stable) {
        return Err(Error::NotFull);
    }
    Ok(())
}

/// `Z(R)` with the class of every arrow of `Γ_L` (`usize::MAX` elsewhere).
pub struct ZofR {
    pub resolution: Resolution,
    pub class: Vec<usize>,
}

impl ZofR {
    /// The canonical compatibility: `L̃` is the image of the units over `L`.
    pub fn canonical_compatibility(&self, sub: &Subgroupoid) -> LCompatibility {
        let g = &*sub.parent;
        let ltilde = sub.l.iter().map(|&m| self.class[g.e(m)]).collect();
        LCompatibility {
            resolution: self.resolution.clone(),
            l: sub.l.clone(),
            ltilde,
        }
    }
}

/// `Z(R) = R\Γ_L` with `φ[γ] = t(γ)` and `[γ]·γ' = [γγ']`.
pub fn build_z_of_r(sub: &Subgroupoid, stable: &PointSet) -> Result<Resolution> {
    build_z_of_r_parts(sub, stable).map(|z| z.resolution)
}

pub fn build_z_of_r_parts(sub: &Subgroupoid, stable: &PointSet) -> Result<ZofR> {
    check_hypotheses(sub, stable)?;
    let g = &sub.parent;
    let gamma_l = g.restrict(Some(&sub.l), None);
    let (space, incl) = g.arrows().subspace(&gamma_l);
    let mut pos = vec![usize::MAX; g.num_arrows()];
    for (i, &a) in incl.iter().enumerate() {
        pos[a] = i;
    }
    // orbits of the left R-action r·γ
    let mut labels: Vec<usize> = (0..incl.len()).collect();
    for (i, &a) in incl.iter().enumerate() {
        for &r in &sub.r {
            if let Some(ra) = g.mul(r, a) {
                let j = pos[ra];
                let (li, lj) = (labels[i], labels[j]);
                if li != lj {
                    for l in labels.iter_mut() {
                        if *l == lj {
                            *l = li;
                        }
                    }
                }
            }
        }
    }
    let (q, proj) = space.quotient_by_labels(&labels);
    let mut class = vec![usize::MAX; g.num_arrows()];
    for (i, &a) in incl.iter().enumerate() {
        class[a] = proj[i];
    }
    let mut moment = vec![usize::MAX; q.len()];
    for &a in &incl {
        let c = class[a];
        if moment[c] != usize::MAX && moment[c] != g.t(a) {
            return Err(Error::HypothesisFailure(
                "φ is not constant on R-orbits".into(),
            ));
        }
        moment[c] = g.t(a);
    }
    // [γ]·γ' = [γγ'] must not depend on the representative
    let k = g.num_arrows();
    let mut act = vec![usize::MAX; q.len() * k];
    for &a in &incl {
        for b in 0..k {
            if let Some(ab) = g.mul(a, b) {
                let slot = &mut act[class[a] * k + b];
                if *slot != usize::MAX && *slot != class[ab] {
                    return Err(Error::HypothesisFailure(
                        "the action on R\\Γ_L is not well defined".into(),
                    ));
                }
                *slot = class[ab];
            }
        }
    }
    let module = RightModule::from_fn(g.clone(), Arc::new(q), moment, |c, b| {
        let w = act[c * k + b];
        (w != usize::MAX).then_some(w)
    })?;
    let resolution = Resolution::new(module, stable.clone())?;
    Ok(ZofR { resolution, class })
}

/// Transport of a resolution of `S̄` to one of `S̄'`, `S' = p'(p⁻¹(S))`.
pub fn transport_resolution(x: &MoritaEquivalence, res: &Resolution) -> Result<Resolution> {
    let module = x.transport_module(&res.module)?;
    let stable = x.transport_subset(&res.stable);
    Resolution::new(module, stable)
}

/// The output of the direct-product construction.
pub struct Hat {
    /// `(Γ ⇉ M) × (Z × Z ⇉ Z)`.
    pub groupoid: Arc<Groupoid>,
    /// Carrier `Γ × Z`, `p(γ, z) = s(γ)`, `p'(γ, z) = (t(γ), z)`.
    pub morita: MoritaEquivalence,
    /// `{(φ(z), z)}`.
    pub l: PointSet,
    /// The transported resolution `(Ẑ, φ̂)` with `L̃` the diagonal.
    pub compatibility: LCompatibility,
}

/// Builds the direct-product groupoid, the canonical Morita equivalence
/// `Γ ~ Γ̂`, and the `L`-compatible transported resolution.
pub fn hat_construction(res: &Resolution) -> Result<Hat> {
    let g = res.groupoid().clone();
    let z = res.space().clone();
    let nz = z.len();
    let hat = Arc::new(direct_product_groupoid(&g, &z));
    let carrier = g.arrows().product(&z);
    let g1 = g.clone();
    let g2 = g.clone();
    let bimodule = Bimodule::from_fn(
        g.clone(),
        hat.clone(),
        Arc::new(carrier),
        (0..g.num_arrows() * nz).map(|x| g.s(x / nz)).collect(),
        (0..g.num_arrows() * nz)
            .map(|x| g.t(x / nz) * nz + x % nz)
            .collect(),
        move |a, x| Some(g1.mul(a, x / nz)? * nz + x % nz),
        move |x, a| {
            let delta = a / (nz * nz);
            let z2 = a % nz;
            Some(g2.mul(x / nz, delta)? * nz + z2)
        },
    )?;
    let morita = MoritaEquivalence::new(bimodule)?;
    let transported = morita.transport_module_parts(&res.module)?;
    let stable = morita.transport_subset(&res.stable);
    let resolution = Resolution::new(transported.module, stable)?;
    let phi = res.phi();
    let l = (0..nz).map(|x| phi[x] * nz + x).collect();
    let ltilde = (0..nz)
        .map(|x| transported.class[&(x, g.e(phi[x]) * nz + x)])
        .collect();
    let compatibility = LCompatibility {
        resolution,
        l,
        ltilde,
    };
    compatibility.validate().into_result("L-compatibility")?;
    Ok(Hat {
        groupoid: hat,
        morita,
        l: compatibility.l.clone(),
        compatibility,
    })
}
