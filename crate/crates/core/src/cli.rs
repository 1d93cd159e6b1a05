//! Command-line driver. Exit status 0 means success or a true verdict, 1 a
//! false verdict (evidence is printed), 2 bad input.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::correspondence::{fund_prop_check, roundtrip_theorem_check};
use crate::enumerate::{enum_finspaces, enum_groupoids, random_instance, Bounds, Instance, Kind};
use crate::error::{Error, Result};
use crate::finspace::{FinSpace, PointSet};
use crate::groupoid::Groupoid;
use crate::instance::{emit_instance, load, parse_instance, space_doc, InstanceFile, Loaded, Mode};
use crate::morita::MoritaEquivalence;
use crate::report::Report;
use crate::resolution::{build_z_of_r, Resolution};

#[derive(Parser, Debug)]
#[command(
    name = "stackres",
    version,
    about = "Finite groupoids, Morita equivalences and equivariant resolutions"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Global {
    /// Instance file; repeat to merge several.
    #[arg(long, global = true)]
    pub instance: Vec<PathBuf>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Reject unknown fields and invalid objects (the default).
    #[arg(long, global = true, conflicts_with = "lint")]
    pub strict: bool,
    /// Drop unknown fields and skip invalid objects, reporting both.
    #[arg(long, global = true)]
    pub lint: bool,
    /// Enumeration bounds, e.g. `n=3,arrows=9,points=4`.
    #[arg(long, global = true, value_parser = parse_bounds)]
    pub bounds: Option<Bounds>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate every object of the instance files.
    Validate,
    /// Orbits of a groupoid, and optionally whether a subset is stable.
    Orbits {
        #[arg(long)]
        groupoid: String,
        #[arg(long)]
        stable: Option<String>,
    },
    /// Transport a stable subset or a right module along a Morita equivalence.
    Transport {
        #[arg(long)]
        bimodule: String,
        #[arg(long, required_unless_present = "module", conflicts_with = "module")]
        stable: Option<String>,
        #[arg(long)]
        module: Option<String>,
    },
    /// Build the resolution `R\Γ_L` of a subgroupoid.
    Resolve {
        #[arg(long)]
        groupoid: String,
        #[arg(long)]
        stable: String,
        #[arg(long)]
        sub: String,
    },
    /// Recover a subgroupoid from an L-compatible resolution.
    Recover {
        #[arg(long)]
        module: String,
        #[arg(long)]
        stable: String,
        /// The subset `L` of objects.
        #[arg(long)]
        base: String,
        /// The subset `L̃` of the module; searched for when absent.
        #[arg(long)]
        ltilde: Option<String>,
    },
    /// Compose Morita equivalences left to right.
    Compose {
        #[arg(long = "bimodule", required = true, num_args = 1)]
        bimodules: Vec<String>,
        /// Name of the composite in the emitted document.
        #[arg(long, default_value = "composite")]
        name: String,
    },
    /// Decide whether two subgroupoids give isomorphic resolutions, and
    /// whether they are related by a subgroupoid equivalence.
    Fundprop {
        /// Equivalence between the two groupoids; the identity of
        /// `--groupoid` when absent.
        #[arg(long, required_unless_present = "groupoid")]
        bimodule: Option<String>,
        #[arg(long)]
        groupoid: Option<String>,
        #[arg(long)]
        stable: String,
        #[arg(long)]
        sub_left: String,
        #[arg(long)]
        sub_right: String,
    },
    /// Run a subgroupoid through the direct-product construction and back.
    Roundtrip {
        #[arg(long)]
        groupoid: String,
        #[arg(long)]
        stable: String,
        #[arg(long)]
        sub: String,
    },
    /// Enumerate small spaces or groupoids, or draw a random instance.
    Enumerate {
        #[arg(value_enum)]
        what: What,
        /// Number of points, for `spaces`.
        #[arg(long, default_value_t = 3)]
        points: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum What {
    Spaces,
    Groupoids,
    RandomSpace,
    RandomGroupoid,
    RandomMorita,
}

/// Parses `n=<k>,arrows=<k>,points=<k>`; omitted keys keep their defaults.
pub fn parse_bounds(text: &str) -> std::result::Result<Bounds, String> {
    let mut b = Bounds::default();
    for part in text.split(',').filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got `{part}`"))?;
        let v: usize = v
            .trim()
            .parse()
            .map_err(|_| format!("`{v}` is not a count"))?;
        match k.trim() {
            "n" | "objects" => b.max_objects = v,
            "arrows" => b.max_arrows = v,
            "points" => b.max_module_points = v,
            other => return Err(format!("unknown bound `{other}`")),
        }
    }
    b.check().map_err(|e| e.to_string())?;
    Ok(b)
}

/// Result of a command: exit status plus the human and JSON renderings.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub json: serde_json::Value,
}

fn ok(text: String, json: serde_json::Value) -> Result<Outcome> {
    Ok(Outcome {
        code: 0,
        text,
        json,
    })
}

fn verdict(v: bool, text: String, json: serde_json::Value) -> Result<Outcome> {
    Ok(Outcome {
        code: if v { 0 } else { 1 },
        text,
        json,
    })
}

fn names(space: &FinSpace, set: &PointSet) -> Vec<String> {
    set.iter().map(|&x| space.name(x).to_string()).collect()
}

fn braces(v: &[String]) -> String {
    format!("{{{}}}", v.join(", "))
}

fn mode(g: &Global) -> Mode {
    if g.lint {
        Mode::Lint
    } else {
        Mode::Strict
    }
}

fn read_files(g: &Global) -> Result<(InstanceFile, Vec<crate::instance::Diagnostic>)> {
    let mut all = InstanceFile::default();
    let mut diags = Vec::new();
    for path in &g.instance {
        let text = std::fs::read_to_string(path)?;
        let (file, d) = parse_instance(&text, mode(g)).map_err(|e| match e {
            Error::Parse {
                line,
                column,
                message,
            } => Error::Parse {
                line,
                column,
                message: format!("{}: {message}", path.display()),
            },
            other => other,
        })?;
        all.merge(file)?;
        diags.extend(d);
    }
    Ok((all, diags))
}

/// A loaded instance document, against which commands run by name.
pub struct Session {
    file: InstanceFile,
    loaded: Loaded,
    warnings: Vec<crate::instance::Diagnostic>,
}

type Ctx = Session;

impl Session {
    fn new(g: &Global) -> Result<Self> {
        let (file, warnings) = read_files(g)?;
        Self::from_file(file, warnings, mode(g))
    }

    /// Parses and loads one instance document.
    pub fn parse(text: &str, mode: Mode) -> Result<Self> {
        let (file, warnings) = parse_instance(text, mode)?;
        Self::from_file(file, warnings, mode)
    }

    fn from_file(
        file: InstanceFile,
        warnings: Vec<crate::instance::Diagnostic>,
        mode: Mode,
    ) -> Result<Self> {
        let loaded = load(&file, mode)?;
        Ok(Self {
            file,
            loaded,
            warnings,
        })
    }

    pub fn file(&self) -> &InstanceFile {
        &self.file
    }

    pub fn loaded(&self) -> &Loaded {
        &self.loaded
    }

    /// Unknown fields dropped while parsing in lint mode.
    pub fn warnings(&self) -> &[crate::instance::Diagnostic] {
        &self.warnings
    }

    /// [`validate`] on the session's document.
    pub fn validate(&self) -> Result<Outcome> {
        validate(&self.file, &self.warnings)
    }

    fn groupoid(&self, name: &str) -> Result<Arc<Groupoid>> {
        self.loaded
            .groupoids
            .get(name)
            .cloned()
            .ok_or_else(|| Error::DanglingReference(format!("no groupoid `{name}`")))
    }

    fn stable(&self, name: &str, groupoid: &str) -> Result<PointSet> {
        let set = self.loaded.object_subset(name, groupoid)?;
        let g = self.groupoid(groupoid)?;
        if !g.is_stable(&set) {
            return Err(Error::NotStable(format!(
                "`{name}` = {}",
                g.describe_objects(&set)
            )));
        }
        Ok(set)
    }

    fn sub(&self, name: &str) -> Result<&crate::groupoid::Subgroupoid> {
        self.loaded
            .subgroupoids
            .get(name)
            .ok_or_else(|| Error::DanglingReference(format!("no subgroupoid `{name}`")))
    }

    fn sub_groupoid_name(&self, name: &str) -> Result<&str> {
        Ok(&self
            .file
            .subgroupoids
            .get(name)
            .ok_or_else(|| Error::DanglingReference(format!("no subgroupoid `{name}`")))?
            .groupoid)
    }

    fn morita(&self, name: &str) -> Result<(MoritaEquivalence, &str, &str)> {
        let b = self
            .loaded
            .bimodules
            .get(name)
            .ok_or_else(|| Error::DanglingReference(format!("no bimodule `{name}`")))?;
        let doc = &self.file.bimodules[name];
        let x = MoritaEquivalence::new(b.clone()).map_err(|e| match e {
            Error::Invalid { report, .. } => Error::Invalid {
                what: format!("Morita equivalence `{name}`"),
                report,
            },
            other => other,
        })?;
        Ok((x, &doc.left, &doc.right))
    }
}

fn report_json(r: &Report) -> serde_json::Value {
    serde_json::to_value(r).expect("reports serialize")
}

fn cmd_validate(g: &Global) -> Result<Outcome> {
    let (file, warnings) = read_files(g)?;
    validate(&file, &warnings)
}

/// Loads every object of `file` it can and reports the rest; `warnings`
/// are parse diagnostics to pass through.
pub fn validate(file: &InstanceFile, warnings: &[crate::instance::Diagnostic]) -> Result<Outcome> {
    let loaded = load(file, Mode::Lint)?;
    let diags = &loaded.diagnostics;
    let mut text = String::new();
    for w in warnings {
        writeln!(text, "warning: `{}`: {}", w.object, w.detail).unwrap();
    }
    let mut moritas = serde_json::Map::new();
    for (name, b) in &loaded.bimodules {
        let r = b.validate_morita();
        moritas.insert(name.clone(), json!(r.is_valid()));
        if !r.is_valid() {
            writeln!(text, "note: bimodule `{name}` is not a Morita equivalence:").unwrap();
            for v in &r.violations {
                writeln!(text, "  {}: {}", v.clause, v.detail).unwrap();
            }
        }
    }
    let counts = json!({
        "spaces": loaded.spaces.len(),
        "maps": loaded.maps.len(),
        "groupoids": loaded.groupoids.len(),
        "subsets": loaded.subsets.len(),
        "subgroupoids": loaded.subgroupoids.len(),
        "modules": loaded.modules.len(),
        "bimodules": loaded.bimodules.len(),
    });
    let json = json!({
        "valid": diags.is_empty(),
        "objects": counts,
        "diagnostics": diags,
        "warnings": warnings,
        "morita": moritas,
    });
    if diags.is_empty() {
        let n: u64 = counts
            .as_object()
            .unwrap()
            .values()
            .filter_map(|v| v.as_u64())
            .sum();
        writeln!(text, "valid: {n} objects").unwrap();
        return ok(text, json);
    }
    for d in diags {
        writeln!(text, "`{}`: {}: {}", d.object, d.clause, d.detail).unwrap();
    }
    Ok(Outcome {
        code: 2,
        text,
        json,
    })
}

fn cmd_orbits(g: &Global, groupoid: &str, stable: Option<&str>) -> Result<Outcome> {
    let ctx = Ctx::new(g)?;
    let gr = ctx.groupoid(groupoid)?;
    let orbits: Vec<Vec<String>> = gr.orbits().iter().map(|o| names(gr.objects(), o)).collect();
    let mut text = String::new();
    for o in &orbits {
        writeln!(text, "orbit {}", braces(o)).unwrap();
    }
    let mut json = json!({ "orbits": orbits });
    let mut good = true;
    if let Some(s) = stable {
        let set = ctx.loaded.object_subset(s, groupoid)?;
        let is_stable = gr.is_stable(&set);
        let closure = gr.objects().closure(&set);
        let closure_stable = gr.is_stable(&closure);
        writeln!(text, "`{s}` stable: {is_stable}").unwrap();
        writeln!(
            text,
            "closure {} stable: {closure_stable}",
            braces(&names(gr.objects(), &closure))
        )
        .unwrap();
        json["stable"] = json!(is_stable);
        json["closure"] = json!(names(gr.objects(), &closure));
        json["closure_stable"] = json!(closure_stable);
        good = is_stable;
    }
    verdict(good, text, json)
}

fn cmd_transport(
    g: &Global,
    bimodule: &str,
    stable: Option<&str>,
    module: Option<&str>,
) -> Result<Outcome> {
    let ctx = Ctx::new(g)?;
    let (x, left, right) = ctx.morita(bimodule)?;
    if let Some(s) = stable {
        let set = ctx.stable(s, left)?;
        let image = x.transport_subset(&set);
        let h = x.right_groupoid();
        let commutes = x.check_closure_commutes(&set);
        let img = names(h.objects(), &image);
        let text = format!("{}\nclosure commutes: {commutes}\n", braces(&img));
        return verdict(
            commutes,
            text,
            json!({ "image": img, "closure_commutes": commutes }),
        );
    }
    let name = module.expect("clap requires one of --stable, --module");
    let m = ctx
        .loaded
        .modules
        .get(name)
        .ok_or_else(|| Error::DanglingReference(format!("no module `{name}`")))?;
    if ctx.file.modules[name].groupoid != left {
        return Err(Error::GroupoidMismatch(format!(
            "module `{name}` is not over `{left}`"
        )));
    }
    let moved = x.transport_module(m)?;
    let mut doc = InstanceFile::default();
    doc.add_module(&format!("{name}@{bimodule}"), right, &moved)?;
    let text = emit_instance(&doc);
    ok(
        text.clone(),
        serde_json::from_str(&text).expect("emitted documents are JSON"),
    )
}

fn resolution_json(res: &Resolution) -> serde_json::Value {
    let z = res.space();
    json!({
        "points": z.names(),
        "surjective": res.is_surjective(),
        "orbits": res.orbits().iter().map(|o| names(z, o)).collect::<Vec<_>>(),
    })
}

fn cmd_resolve(g: &Global, groupoid: &str, stable: &str, sub: &str) -> Result<Outcome> {
    let ctx = Ctx::new(g)?;
    let s = ctx.stable(stable, groupoid)?;
    let r = ctx.sub(sub)?;
    if ctx.sub_groupoid_name(sub)? != groupoid {
        return Err(Error::GroupoidMismatch(format!(
            "`{sub}` is not a subgroupoid of `{groupoid}`"
        )));
    }
    let res = build_z_of_r(r, &s)?;
    let mut doc = InstanceFile::default();
    doc.add_module(&format!("Z({sub})"), groupoid, &res.module)?;
    let mut text = emit_instance(&doc);
    writeln!(text, "surjective: {}", res.is_surjective()).unwrap();
    let mut json = resolution_json(&res);
    json["module"] =
        serde_json::from_str(&emit_instance(&doc)).expect("emitted documents are JSON");
    ok(text, json)
}

fn cmd_recover(
    g: &Global,
    module: &str,
    stable: &str,
    base: &str,
    ltilde: Option<&str>,
) -> Result<Outcome> {
    let ctx = Ctx::new(g)?;
    let m = ctx
        .loaded
        .modules
        .get(module)
        .ok_or_else(|| Error::DanglingReference(format!("no module `{module}`")))?;
    let mdoc = &ctx.file.modules[module];
    let s = ctx.stable(stable, &mdoc.groupoid)?;
    let l = ctx.loaded.object_subset(base, &mdoc.groupoid)?;
    let res = Resolution::new(m.clone(), s)?;
    let comp = match ltilde {
        Some(t) => {
            let lt = ctx.loaded.subset_of(t, &mdoc.space)?;
            match res.compatibility(l.clone(), lt.clone()) {
                Some(c) => c,
                None => {
                    let c = crate::resolution::LCompatibility {
                        resolution: res.clone(),
                        l,
                        ltilde: lt,
                    };
                    let r = c.validate();
                    let text = format!("not L-compatible:\n{r}\n");
                    return verdict(
                        false,
                        text,
                        json!({ "compatible": false, "report": report_json(&r) }),
                    );
                }
            }
        }
        None => match res.is_l_compatible(&l) {
            Some(c) => c,
            None => {
                let text = format!("no L̃ makes `{module}` compatible with `{base}`\n");
                return verdict(false, text, json!({ "compatible": false }));
            }
        },
    };
    let sub = comp.recover_subgroupoid();
    let g2 = &sub.parent;
    let lt = names(res.space(), &comp.ltilde);
    let arrows = names(g2.arrows(), &sub.r);
    let objects = names(g2.objects(), &sub.l);
    let text = format!(
        "L̃ = {}\nR = {}\nL = {}\n",
        braces(&lt),
        braces(&arrows),
        braces(&objects)
    );
    ok(
        text,
        json!({ "compatible": true, "ltilde": lt, "arrows": arrows, "objects": objects }),
    )
}

fn cmd_compose(g: &Global, bimodules: &[String], name: &str) -> Result<Outcome> {
    let ctx = Ctx::new(g)?;
    if bimodules.len() < 2 {
        return Err(Error::HypothesisFailure(
            "compose needs at least two --bimodule".into(),
        ));
    }
    let (mut acc, left, mut right) = ctx.morita(&bimodules[0])?;
    let left = left.to_string();
    for b in &bimodules[1..] {
        let (next, l2, r2) = ctx.morita(b)?;
        if l2 != right {
            return Err(Error::MiddleMismatch);
        }
        acc = acc.compose(&next)?;
        right = r2;
    }
    let mut doc = InstanceFile::default();
    doc.add_bimodule(name, &left, right, &acc)?;
    let text = emit_instance(&doc);
    ok(
        text.clone(),
        serde_json::from_str(&text).expect("emitted documents are JSON"),
    )
}

/// A short name for the first clause that kept `Y` from being an
/// equivalence.
fn y_failure(r: &Report) -> String {
    let Some(v) = r.violations.first() else {
        return "unknown".into();
    };
    let what = if v.clause.ends_with("transitive") {
        "fiber-transitivity"
    } else if v.clause.ends_with("free") {
        "freeness"
    } else if v.clause.contains("lifting") {
        "lifting"
    } else if v.clause.contains("stable") {
        "stability"
    } else {
        v.clause.as_str()
    };
    format!("{what} fails ({}: {})", v.clause, v.detail)
}

fn cmd_fundprop(
    g: &Global,
    bimodule: Option<&str>,
    groupoid: Option<&str>,
    stable: &str,
    sub_left: &str,
    sub_right: &str,
) -> Result<Outcome> {
    Ctx::new(g)?.fundprop(bimodule, groupoid, stable, sub_left, sub_right)
}

fn cmd_roundtrip(g: &Global, groupoid: &str, stable: &str, sub: &str) -> Result<Outcome> {
    Ctx::new(g)?.roundtrip(groupoid, stable, sub)
}

impl Session {
    /// Both verdicts for `sub_left` and `sub_right` across the equivalence
    /// `bimodule`, or the identity of `groupoid`.
    pub fn fundprop(
        &self,
        bimodule: Option<&str>,
        groupoid: Option<&str>,
        stable: &str,
        sub_left: &str,
        sub_right: &str,
    ) -> Result<Outcome> {
        let ctx = self;
        let (x, left, right) = match bimodule {
            Some(b) => {
                let (x, l, r) = ctx.morita(b)?;
                (x, l.to_string(), r.to_string())
            }
            None => {
                let name = groupoid.ok_or_else(|| {
                    Error::DanglingReference("neither a bimodule nor a groupoid given".into())
                })?;
                (
                    MoritaEquivalence::identity(ctx.groupoid(name)?),
                    name.to_string(),
                    name.to_string(),
                )
            }
        };
        let s = ctx.stable(stable, &left)?;
        for (sub, want) in [(sub_left, &left), (sub_right, &right)] {
            if ctx.sub_groupoid_name(sub)? != want {
                return Err(Error::GroupoidMismatch(format!(
                    "`{sub}` is not a subgroupoid of `{want}`"
                )));
            }
        }
        let fp = fund_prop_check(&x, &s, ctx.sub(sub_left)?, ctx.sub(sub_right)?)?;
        let e = &fp.evidence;
        let mut text = String::new();
        writeln!(text, "(i) resolutions isomorphic: {}", fp.verdict_i).unwrap();
        if let Some(iso) = &e.isomorphism {
            let pairs: Vec<String> = iso.iter().map(|(a, b)| format!("{a} -> {b}")).collect();
            writeln!(
                text,
                "    isomorphism {} ({} in total)",
                braces(&pairs),
                e.isomorphism_count
            )
            .unwrap();
        }
        writeln!(text, "(ii) subgroupoid equivalence: {}", fp.verdict_ii).unwrap();
        if fp.verdict_ii {
            writeln!(text, "    Y = {}", braces(&e.y)).unwrap();
        } else {
            writeln!(text, "    no Y: {}", y_failure(&e.y_report)).unwrap();
        }
        if !fp.agree {
            writeln!(text, "verdicts disagree").unwrap();
        }
        let json = serde_json::to_value(&fp).expect("evidence serializes");
        verdict(fp.agree && fp.verdict_i, text, json)
    }

    /// Runs `sub` through the product construction and back.
    pub fn roundtrip(&self, groupoid: &str, stable: &str, sub: &str) -> Result<Outcome> {
        let ctx = self;
        let s = ctx.stable(stable, groupoid)?;
        if ctx.sub_groupoid_name(sub)? != groupoid {
            return Err(Error::GroupoidMismatch(format!(
                "`{sub}` is not a subgroupoid of `{groupoid}`"
            )));
        }
        let rt = roundtrip_theorem_check(ctx.sub(sub)?, &s)?;
        let e = &rt.evidence;
        let mut text = String::new();
        writeln!(
            text,
            "product groupoid: {} arrows over {} objects",
            e.hat_arrows, e.hat_objects
        )
        .unwrap();
        writeln!(text, "recovered subgroupoid: {}", braces(&e.recovered)).unwrap();
        writeln!(text, "resolution recovered: {}", e.resolution_recovered).unwrap();
        if e.y_is_equivalence {
            writeln!(text, "Y = {}", braces(&e.y)).unwrap();
        } else {
            writeln!(text, "no Y: {}", y_failure(&e.y_report)).unwrap();
        }
        writeln!(text, "roundtrip: {}", rt.ok).unwrap();
        verdict(
            rt.ok,
            text,
            serde_json::to_value(&rt).expect("evidence serializes"),
        )
    }
}

#[derive(Serialize)]
struct Census {
    objects: usize,
    arrows: usize,
    count: usize,
}

fn cmd_enumerate(g: &Global, what: What, points: usize) -> Result<Outcome> {
    let mut bounds = g.bounds.unwrap_or_default();
    if let Some(seed) = g.seed {
        bounds.seed = seed;
    }
    match what {
        What::Spaces => {
            let spaces = enum_finspaces(points)?;
            let mut doc = InstanceFile::default();
            for (i, s) in spaces.iter().enumerate() {
                doc.spaces.insert(format!("P{points}.{i}"), space_doc(s));
            }
            let text = format!(
                "{} spaces on {points} points up to isomorphism\n",
                spaces.len()
            );
            let json = json!({ "count": spaces.len(), "spaces": serde_json::to_value(&doc).unwrap()["spaces"] });
            ok(text, json)
        }
        What::Groupoids => {
            let gs = enum_groupoids(&bounds)?;
            let valid = gs.par_iter().filter(|g| g.is_valid()).count();
            let mut census: Vec<Census> = crate::enumerate::census(&gs)
                .into_iter()
                .map(|((objects, arrows), count)| Census {
                    objects,
                    arrows,
                    count,
                })
                .collect();
            census.sort_by_key(|c| (c.objects, c.arrows));
            let mut text = format!(
                "{} groupoids with at most {} objects and {} arrows, {valid} valid\n",
                gs.len(),
                bounds.max_objects,
                bounds.max_arrows
            );
            for c in &census {
                writeln!(
                    text,
                    "  {} objects, {} arrows: {}",
                    c.objects, c.arrows, c.count
                )
                .unwrap();
            }
            let json = json!({ "count": gs.len(), "valid": valid, "census": census });
            verdict(valid == gs.len(), text, json)
        }
        What::RandomSpace | What::RandomGroupoid | What::RandomMorita => {
            let kind = match what {
                What::RandomSpace => Kind::Space,
                What::RandomGroupoid => Kind::Groupoid,
                _ => Kind::Morita,
            };
            let mut doc = InstanceFile::default();
            match random_instance(kind, &bounds)? {
                Instance::Space(s) => doc.add_space("P", &s)?,
                Instance::Groupoid(gr) => doc.add_groupoid("G", &gr)?,
                Instance::Morita(x) => {
                    doc.add_groupoid("G", x.left_groupoid())?;
                    doc.add_groupoid("H", x.right_groupoid())?;
                    doc.add_bimodule("X", "G", "H", &x)?;
                }
            }
            let text = emit_instance(&doc);
            ok(
                text.clone(),
                serde_json::from_str(&text).expect("emitted documents are JSON"),
            )
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Validate => cmd_validate(g),
        Command::Orbits { groupoid, stable } => cmd_orbits(g, groupoid, stable.as_deref()),
        Command::Transport {
            bimodule,
            stable,
            module,
        } => cmd_transport(g, bimodule, stable.as_deref(), module.as_deref()),
        Command::Resolve {
            groupoid,
            stable,
            sub,
        } => cmd_resolve(g, groupoid, stable, sub),
        Command::Recover {
            module,
            stable,
            base,
            ltilde,
        } => cmd_recover(g, module, stable, base, ltilde.as_deref()),
        Command::Compose { bimodules, name } => cmd_compose(g, bimodules, name),
        Command::Fundprop {
            bimodule,
            groupoid,
            stable,
            sub_left,
            sub_right,
        } => cmd_fundprop(
            g,
            bimodule.as_deref(),
            groupoid.as_deref(),
            stable,
            sub_left,
            sub_right,
        ),
        Command::Roundtrip {
            groupoid,
            stable,
            sub,
        } => cmd_roundtrip(g, groupoid, stable, sub),
        Command::Enumerate { what, points } => cmd_enumerate(g, *what, *points),
    }
}

/// Runs the command line `args` (program name first), writing the report
/// to `out` and errors to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            let _ = if cli.global.json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&o.json).expect("reports serialize")
                )
            } else {
                write!(out, "{}", o.text)
            };
            o.code
        }
        Err(e) => {
            if cli.global.json {
                let _ = writeln!(out, "{}", json!({ "error": e.to_string() }));
            }
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}
