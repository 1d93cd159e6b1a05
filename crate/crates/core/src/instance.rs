//! Instance files: a JSON document of named spaces, maps, groupoids,
//! subsets, subgroupoids, modules and bimodules referring to each other by
//! name, with a canonical byte-stable emission.
//!
//! ```json
//! {
//!   "spaces": {
//!     "SIERP": {
//!       "leq": [
//!         ["s", "g"]
//!       ],
//!       "points": ["g", "s"]
//!     }
//!   }
//! }
//! ```

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::finspace::{CMap, FinSpace, PointSet};
use crate::groupoid::{Groupoid, Subgroupoid};
use crate::modaction::{LeftModule, RightModule};
use crate::morita::Bimodule;
use crate::report::Report;

type Pair = (String, String);
type Triple = (String, String, String);

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub points: Vec<String>,
    /// Pairs `a <= b`; the order is their reflexive-transitive closure.
    #[serde(default)]
    pub leq: Vec<Pair>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub from: String,
    pub to: String,
    pub pairs: Vec<Pair>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidDoc {
    /// Name of the arrow space.
    pub arrows: String,
    /// Name of the object space.
    pub objects: String,
    pub src: Vec<Pair>,
    pub tgt: Vec<Pair>,
    /// `(object, unit arrow)`.
    pub unit: Vec<Pair>,
    pub inv: Vec<Pair>,
    /// `(a, b, a·b)` for every composable pair, `t(a) = s(b)`.
    pub mul: Vec<Triple>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubsetDoc {
    pub space: String,
    pub points: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupoidDoc {
    pub groupoid: String,
    pub arrows: Vec<String>,
    pub objects: Vec<String>,
}

/// A right module.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub groupoid: String,
    pub space: String,
    pub moment: Vec<Pair>,
    /// `(z, γ, z·γ)`.
    pub action: Vec<Triple>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleDoc {
    pub left: String,
    pub right: String,
    pub space: String,
    pub p: Vec<Pair>,
    pub p_prime: Vec<Pair>,
    /// `(γ, x, γ·x)`.
    pub left_action: Vec<Triple>,
    /// `(x, γ', x·γ')`.
    pub right_action: Vec<Triple>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub spaces: BTreeMap<String, SpaceDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, MapDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub groupoids: BTreeMap<String, GroupoidDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub subsets: BTreeMap<String, SubsetDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub subgroupoids: BTreeMap<String, SubgroupoidDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, ModuleDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bimodules: BTreeMap<String, BimoduleDoc>,
}

/// How strictly a document is read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    /// Unknown fields and invalid objects are errors.
    #[default]
    Strict,
    /// Unknown fields are dropped and invalid objects skipped; both are
    /// reported as diagnostics.
    Lint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub object: String,
    pub clause: String,
    pub detail: String,
}

const SECTIONS: [(&str, &[&str]); 7] = [
    ("spaces", &["points", "leq"]),
    ("maps", &["from", "to", "pairs"]),
    (
        "groupoids",
        &["arrows", "objects", "src", "tgt", "unit", "inv", "mul"],
    ),
    ("subsets", &["space", "points"]),
    ("subgroupoids", &["groupoid", "arrows", "objects"]),
    ("modules", &["groupoid", "space", "moment", "action"]),
    (
        "bimodules",
        &[
            "left",
            "right",
            "space",
            "p",
            "p_prime",
            "left_action",
            "right_action",
        ],
    ),
];

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Parses a document. Whitespace-only text is the empty instance. In lint
/// mode unknown fields are removed and returned as diagnostics.
pub fn parse_instance(text: &str, mode: Mode) -> Result<(InstanceFile, Vec<Diagnostic>)> {
    if text.trim().is_empty() {
        return Ok((InstanceFile::default(), Vec::new()));
    }
    match mode {
        Mode::Strict => Ok((serde_json::from_str(text).map_err(parse_error)?, Vec::new())),
        Mode::Lint => {
            let mut value: Value = serde_json::from_str(text).map_err(parse_error)?;
            let mut diags = Vec::new();
            if let Value::Object(top) = &mut value {
                top.retain(|k, _| {
                    let known = SECTIONS.iter().any(|(s, _)| s == k);
                    if !known {
                        diags.push(Diagnostic {
                            object: k.clone(),
                            clause: "unknown_field".into(),
                            detail: format!("unknown section `{k}` ignored"),
                        });
                    }
                    known
                });
                for (section, fields) in SECTIONS {
                    let Some(Value::Object(entries)) = top.get_mut(section) else {
                        continue;
                    };
                    for (name, entry) in entries.iter_mut() {
                        let Value::Object(entry) = entry else {
                            continue;
                        };
                        entry.retain(|k, _| {
                            let known = fields.contains(&k.as_str());
                            if !known {
                                diags.push(Diagnostic {
                                    object: name.clone(),
                                    clause: "unknown_field".into(),
                                    detail: format!("unknown field `{k}` ignored"),
                                });
                            }
                            known
                        });
                    }
                }
            }
            let file = serde_json::from_value(value).map_err(|e| Error::Parse {
                line: 0,
                column: 0,
                message: e.to_string(),
            })?;
            Ok((file, diags))
        }
    }
}

/// Canonical text: keys and every list sorted, one pair or triple per
/// line, two-space indentation, trailing newline.
pub fn emit_instance(file: &InstanceFile) -> String {
    let mut canon = file.clone();
    canon.canonicalize();
    let value = serde_json::to_value(&canon).expect("instance documents always serialize");
    let mut out = String::new();
    write_value(&value, 0, &mut out);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| " ".repeat(n);
    match v {
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            for (i, k) in keys.iter().enumerate() {
                out.push_str(&pad(indent + 2));
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(&map[*k], indent + 2, out);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 2));
                write_value(item, indent + 2, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

fn sort_dedup<T: Ord>(v: &mut Vec<T>) {
    v.sort();
    v.dedup();
}

impl InstanceFile {
    /// Sorts every list and drops repeated pairs and triples. Point lists
    /// are sorted but not deduplicated, so a repeated point is still caught
    /// on load.
    pub fn canonicalize(&mut self) {
        for s in self.spaces.values_mut() {
            s.points.sort();
            sort_dedup(&mut s.leq);
        }
        for m in self.maps.values_mut() {
            sort_dedup(&mut m.pairs);
        }
        for g in self.groupoids.values_mut() {
            for v in [&mut g.src, &mut g.tgt, &mut g.unit, &mut g.inv] {
                sort_dedup(v);
            }
            sort_dedup(&mut g.mul);
        }
        for s in self.subsets.values_mut() {
            s.points.sort();
        }
        for s in self.subgroupoids.values_mut() {
            s.arrows.sort();
            s.objects.sort();
        }
        for m in self.modules.values_mut() {
            sort_dedup(&mut m.moment);
            sort_dedup(&mut m.action);
        }
        for b in self.bimodules.values_mut() {
            sort_dedup(&mut b.p);
            sort_dedup(&mut b.p_prime);
            sort_dedup(&mut b.left_action);
            sort_dedup(&mut b.right_action);
        }
    }

    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }

    /// Adds every object of `other`; a name already used in the same
    /// section is an error unless both entries are identical.
    pub fn merge(&mut self, other: InstanceFile) -> Result<()> {
        fn join<T: PartialEq>(
            into: &mut BTreeMap<String, T>,
            from: BTreeMap<String, T>,
            section: &str,
        ) -> Result<()> {
            for (k, v) in from {
                match into.get(&k) {
                    Some(old) if *old != v => {
                        return Err(Error::Validation {
                            object: k,
                            clause: format!("duplicate name in {section}"),
                        })
                    }
                    _ => {
                        into.insert(k, v);
                    }
                }
            }
            Ok(())
        }
        join(&mut self.spaces, other.spaces, "spaces")?;
        join(&mut self.maps, other.maps, "maps")?;
        join(&mut self.groupoids, other.groupoids, "groupoids")?;
        join(&mut self.subsets, other.subsets, "subsets")?;
        join(&mut self.subgroupoids, other.subgroupoids, "subgroupoids")?;
        join(&mut self.modules, other.modules, "modules")?;
        join(&mut self.bimodules, other.bimodules, "bimodules")?;
        Ok(())
    }

    pub fn add_space(&mut self, name: &str, space: &FinSpace) -> Result<()> {
        let mut one = InstanceFile::default();
        one.spaces.insert(name.into(), space_doc(space));
        self.merge(one)
    }

    /// Adds the groupoid with its spaces named `NAME.arrows` and
    /// `NAME.objects`.
    pub fn add_groupoid(&mut self, name: &str, g: &Groupoid) -> Result<()> {
        let (a, o) = (format!("{name}.arrows"), format!("{name}.objects"));
        self.add_space(&a, g.arrows())?;
        self.add_space(&o, g.objects())?;
        let mut one = InstanceFile::default();
        one.groupoids.insert(name.into(), groupoid_doc(g, &a, &o));
        self.merge(one)
    }

    pub fn add_subset(
        &mut self,
        name: &str,
        space_name: &str,
        space: &FinSpace,
        set: &PointSet,
    ) -> Result<()> {
        let mut one = InstanceFile::default();
        one.subsets.insert(
            name.into(),
            SubsetDoc {
                space: space_name.into(),
                points: names(space, set),
            },
        );
        self.merge(one)
    }

    /// Adds a subset of the object space of the groupoid `groupoid`.
    pub fn add_object_subset(
        &mut self,
        name: &str,
        groupoid: &str,
        g: &Groupoid,
        set: &PointSet,
    ) -> Result<()> {
        self.add_subset(name, &format!("{groupoid}.objects"), g.objects(), set)
    }

    pub fn add_subgroupoid(&mut self, name: &str, groupoid: &str, sub: &Subgroupoid) -> Result<()> {
        let mut one = InstanceFile::default();
        one.subgroupoids.insert(
            name.into(),
            SubgroupoidDoc {
                groupoid: groupoid.into(),
                arrows: names(sub.parent.arrows(), &sub.r),
                objects: names(sub.parent.objects(), &sub.l),
            },
        );
        self.merge(one)
    }

    /// Adds the module with its carrier space named `NAME`.
    pub fn add_module(&mut self, name: &str, groupoid: &str, module: &RightModule) -> Result<()> {
        self.add_space(name, module.space())?;
        let mut one = InstanceFile::default();
        one.modules
            .insert(name.into(), module_doc(module, groupoid, name));
        self.merge(one)
    }

    /// Adds the bimodule with its carrier space named `NAME`.
    pub fn add_bimodule(
        &mut self,
        name: &str,
        left: &str,
        right: &str,
        b: &Bimodule,
    ) -> Result<()> {
        self.add_space(name, b.space())?;
        let mut one = InstanceFile::default();
        one.bimodules
            .insert(name.into(), bimodule_doc(b, left, right, name));
        self.merge(one)
    }
}

fn names(space: &FinSpace, set: &PointSet) -> Vec<String> {
    let mut v: Vec<String> = set.iter().map(|&x| space.name(x).to_string()).collect();
    v.sort();
    v
}

fn pairs_of(dom: &FinSpace, cod: &FinSpace, map: &[usize]) -> Vec<Pair> {
    let mut v: Vec<Pair> = map
        .iter()
        .enumerate()
        .map(|(a, &b)| (dom.name(a).to_string(), cod.name(b).to_string()))
        .collect();
    v.sort();
    v
}

pub fn space_doc(space: &FinSpace) -> SpaceDoc {
    let mut doc = SpaceDoc {
        points: space.names().to_vec(),
        leq: space
            .strict_pairs()
            .into_iter()
            .map(|(a, b)| (space.name(a).to_string(), space.name(b).to_string()))
            .collect(),
    };
    doc.points.sort();
    doc.leq.sort();
    doc
}

pub fn groupoid_doc(g: &Groupoid, arrows: &str, objects: &str) -> GroupoidDoc {
    let (a, o) = (&**g.arrows(), &**g.objects());
    let mut mul: Vec<Triple> = g
        .mul_triples()
        .into_iter()
        .map(|(x, y, z)| (a.name(x).into(), a.name(y).into(), a.name(z).into()))
        .collect();
    mul.sort();
    GroupoidDoc {
        arrows: arrows.into(),
        objects: objects.into(),
        src: pairs_of(a, o, g.src_map()),
        tgt: pairs_of(a, o, g.tgt_map()),
        unit: pairs_of(o, a, g.unit_map()),
        inv: pairs_of(a, a, g.inv_map()),
        mul,
    }
}

pub fn module_doc(m: &RightModule, groupoid: &str, space: &str) -> ModuleDoc {
    let (z, g) = (&**m.space(), m.groupoid());
    let mut action = Vec::new();
    for x in 0..z.len() {
        for a in 0..g.num_arrows() {
            if let Some(w) = m.act(x, a) {
                action.push((
                    z.name(x).into(),
                    g.arrows().name(a).into(),
                    z.name(w).into(),
                ));
            }
        }
    }
    action.sort();
    ModuleDoc {
        groupoid: groupoid.into(),
        space: space.into(),
        moment: pairs_of(z, g.objects(), m.moment()),
        action,
    }
}

pub fn bimodule_doc(b: &Bimodule, left: &str, right: &str, space: &str) -> BimoduleDoc {
    let x = &**b.space();
    let (g, h) = (b.left_groupoid(), b.right_groupoid());
    let mut left_action = Vec::new();
    let mut right_action = Vec::new();
    for i in 0..x.len() {
        for a in 0..g.num_arrows() {
            if let Some(w) = b.lact(a, i) {
                left_action.push((
                    g.arrows().name(a).into(),
                    x.name(i).into(),
                    x.name(w).into(),
                ));
            }
        }
        for a in 0..h.num_arrows() {
            if let Some(w) = b.ract(i, a) {
                right_action.push((
                    x.name(i).into(),
                    h.arrows().name(a).into(),
                    x.name(w).into(),
                ));
            }
        }
    }
    left_action.sort();
    right_action.sort();
    BimoduleDoc {
        left: left.into(),
        right: right.into(),
        space: space.into(),
        p: pairs_of(x, g.objects(), b.p()),
        p_prime: pairs_of(x, h.objects(), b.p_prime()),
        left_action,
        right_action,
    }
}

/// The objects of a document, resolved and (in strict mode) validated.
#[derive(Clone, Debug, Default)]
pub struct Loaded {
    pub spaces: BTreeMap<String, Arc<FinSpace>>,
    pub maps: BTreeMap<String, CMap>,
    pub groupoids: BTreeMap<String, Arc<Groupoid>>,
    /// Subsets with the name of their space.
    pub subsets: BTreeMap<String, (String, PointSet)>,
    pub subgroupoids: BTreeMap<String, Subgroupoid>,
    pub modules: BTreeMap<String, RightModule>,
    pub bimodules: BTreeMap<String, Bimodule>,
    /// Name of the object space of each groupoid.
    pub object_spaces: BTreeMap<String, String>,
    /// Everything that was skipped or dropped, in lint mode.
    pub diagnostics: Vec<Diagnostic>,
}

fn lookup<'a, T>(
    map: &'a BTreeMap<String, T>,
    kind: &str,
    name: &str,
    user: &str,
) -> Result<&'a T> {
    map.get(name).ok_or_else(|| {
        Error::DanglingReference(format!("`{user}` refers to undeclared {kind} `{name}`"))
    })
}

fn point(space: &FinSpace, space_name: &str, name: &str, user: &str) -> Result<usize> {
    space.index_of(name).ok_or_else(|| {
        Error::DanglingReference(format!(
            "`{user}` names `{name}`, which is not a point of `{space_name}`"
        ))
    })
}

/// A total function given as pairs; every point of the domain exactly once.
fn function(
    pairs: &[Pair],
    dom: (&FinSpace, &str),
    cod: (&FinSpace, &str),
    user: &str,
    field: &str,
) -> Result<Vec<usize>> {
    let mut out = vec![usize::MAX; dom.0.len()];
    for (a, b) in pairs {
        let i = point(dom.0, dom.1, a, user)?;
        let j = point(cod.0, cod.1, b, user)?;
        if out[i] != usize::MAX && out[i] != j {
            return Err(Error::Validation {
                object: user.into(),
                clause: format!("{field}: `{a}` has two values"),
            });
        }
        out[i] = j;
    }
    if let Some(i) = out.iter().position(|&j| j == usize::MAX) {
        return Err(Error::Validation {
            object: user.into(),
            clause: format!("{field}: no value for `{}`", dom.0.name(i)),
        });
    }
    Ok(out)
}

fn first_violation(object: &str, report: &Report) -> Error {
    let v = &report.violations[0];
    Error::Validation {
        object: object.into(),
        clause: format!("{}: {}", v.clause, v.detail),
    }
}

type ActionTable = BTreeMap<(usize, usize), usize>;

fn action_table(
    triples: &[Triple],
    first: (&FinSpace, &str),
    second: (&FinSpace, &str),
    result: (&FinSpace, &str),
    user: &str,
    field: &str,
) -> Result<ActionTable> {
    let mut t = BTreeMap::new();
    for (a, b, c) in triples {
        let key = (
            point(first.0, first.1, a, user)?,
            point(second.0, second.1, b, user)?,
        );
        let v = point(result.0, result.1, c, user)?;
        if t.insert(key, v).is_some_and(|old| old != v) {
            return Err(Error::Validation {
                object: user.into(),
                clause: format!("{field}: `{a}`, `{b}` has two values"),
            });
        }
    }
    Ok(t)
}

impl Loaded {
    fn space(&self, name: &str, user: &str) -> Result<Arc<FinSpace>> {
        lookup(&self.spaces, "space", name, user).cloned()
    }

    fn groupoid(&self, name: &str, user: &str) -> Result<Arc<Groupoid>> {
        lookup(&self.groupoids, "groupoid", name, user).cloned()
    }

    /// A subset by name, checked to live in the given space.
    pub fn subset_of(&self, name: &str, space_name: &str) -> Result<PointSet> {
        let (sp, set) = lookup(&self.subsets, "subset", name, name)?;
        if sp != space_name {
            return Err(Error::GroupoidMismatch(format!(
                "subset `{name}` lives in `{sp}`, expected a subset of `{space_name}`"
            )));
        }
        Ok(set.clone())
    }

    /// A subset of the objects of the named groupoid.
    pub fn object_subset(&self, name: &str, groupoid: &str) -> Result<PointSet> {
        let doc_space = self
            .object_spaces
            .get(groupoid)
            .ok_or_else(|| Error::DanglingReference(format!("undeclared groupoid `{groupoid}`")))?;
        self.subset_of(name, doc_space)
    }
}

/// Resolves and validates every object. Strict mode stops at the first
/// problem; lint mode records it and skips the object.
pub fn load(file: &InstanceFile, mode: Mode) -> Result<Loaded> {
    let mut out = Loaded::default();
    let step = |out: &mut Loaded, object: &str, r: Result<()>| -> Result<()> {
        match (r, mode) {
            (Ok(()), _) => Ok(()),
            (Err(Error::Invalid { report, .. }), Mode::Strict) => {
                Err(first_violation(object, &report))
            }
            (Err(e), Mode::Strict) => Err(e),
            (Err(e), Mode::Lint) => {
                let found: Vec<(String, String)> = match e {
                    Error::Invalid { report, .. } => report
                        .violations
                        .into_iter()
                        .map(|v| (v.clause, v.detail))
                        .collect(),
                    Error::Validation { clause, .. } => vec![("validation".into(), clause)],
                    Error::DanglingReference(d) => vec![("dangling_reference".into(), d)],
                    other => vec![("error".into(), other.to_string())],
                };
                for (clause, detail) in found {
                    out.diagnostics.push(Diagnostic {
                        object: object.into(),
                        clause,
                        detail,
                    });
                }
                Ok(())
            }
        }
    };

    for (name, doc) in &file.spaces {
        let r = (|| {
            let space = FinSpace::from_names(&doc.points, &[]).map_err(|e| Error::Validation {
                object: name.clone(),
                clause: e.to_string(),
            })?;
            let pairs: Vec<(usize, usize)> = doc
                .leq
                .iter()
                .map(|(a, b)| Ok((point(&space, name, a, name)?, point(&space, name, b, name)?)))
                .collect::<Result<_>>()?;
            let space = FinSpace::new(doc.points.clone(), &pairs)?;
            out.spaces.insert(name.clone(), Arc::new(space));
            Ok(())
        })();
        step(&mut out, name, r)?;
    }

    for (name, doc) in &file.maps {
        let r = (|| {
            let (dom, cod) = (out.space(&doc.from, name)?, out.space(&doc.to, name)?);
            let f = function(
                &doc.pairs,
                (&dom, &doc.from),
                (&cod, &doc.to),
                name,
                "pairs",
            )?;
            let map = CMap::new(dom, cod, f).map_err(|e| Error::Validation {
                object: name.clone(),
                clause: e.to_string(),
            })?;
            out.maps.insert(name.clone(), map);
            Ok(())
        })();
        step(&mut out, name, r)?;
    }

    for (name, doc) in &file.groupoids {
        let r = (|| {
            let arrows = out.space(&doc.arrows, name)?;
            let objects = out.space(&doc.objects, name)?;
            let a = (&*arrows, doc.arrows.as_str());
            let o = (&*objects, doc.objects.as_str());
            let src = function(&doc.src, a, o, name, "src")?;
            let tgt = function(&doc.tgt, a, o, name, "tgt")?;
            let unit = function(&doc.unit, o, a, name, "unit")?;
            let inv = function(&doc.inv, a, a, name, "inv")?;
            let mul: Vec<(usize, usize, usize)> = action_table(&doc.mul, a, a, a, name, "mul")?
                .into_iter()
                .map(|((x, y), z)| (x, y, z))
                .collect();
            let g =
                Groupoid::from_parts(arrows.clone(), objects.clone(), src, tgt, unit, inv, &mul)?;
            let report = g.validate();
            report.into_result(name)?;
            out.object_spaces.insert(name.clone(), doc.objects.clone());
            out.groupoids.insert(name.clone(), Arc::new(g));
            Ok(())
        })();
        step(&mut out, name, r)?;
    }

    for (name, doc) in &file.subsets {
        let r = (|| {
            let space = out.space(&doc.space, name)?;
            let set: PointSet = doc
                .points
                .iter()
                .map(|p| point(&space, &doc.space, p, name))
                .collect::<Result<_>>()?;
            out.subsets.insert(name.clone(), (doc.space.clone(), set));
            Ok(())
        })();
        step(&mut out, name, r)?;
    }

    for (name, doc) in &file.subgroupoids {
        let r = (|| {
            let g = out.groupoid(&doc.groupoid, name)?;
            let gd = &file.groupoids[&doc.groupoid];
            let r: PointSet = doc
                .arrows
                .iter()
                .map(|p| point(g.arrows(), &gd.arrows, p, name))
                .collect::<Result<_>>()?;
            let l: PointSet = doc
                .objects
                .iter()
                .map(|p| point(g.objects(), &gd.objects, p, name))
                .collect::<Result<_>>()?;
            let sub = Subgroupoid::new_unchecked(g, r, l);
            let report = sub.validate();
            report.into_result(name)?;
            out.subgroupoids.insert(name.clone(), sub);
            Ok(())
        })();
        step(&mut out, name, r)?;
    }

    for (name, doc) in &file.modules {
        let r = (|| {
            let g = out.groupoid(&doc.groupoid, name)?;
            let gd = &file.groupoids[&doc.groupoid];
            let z = out.space(&doc.space, name)?;
            let moment = function(
                &doc.moment,
                (&z, &doc.space),
                (g.objects(), &gd.objects),
                name,
                "moment",
            )?;
            let t = action_table(
                &doc.action,
                (&z, &doc.space),
                (g.arrows(), &gd.arrows),
                (&z, &doc.space),
                name,
                "action",
            )?;
            let m = RightModule::from_fn(g, z, moment, |x, a| t.get(&(x, a)).copied())?;
            let report = m.validate();
            report.into_result(name)?;
            out.modules.insert(name.clone(), m);
            Ok(())
        })();
        step(&mut out, name, r)?;
    }

    for (name, doc) in &file.bimodules {
        let r = (|| {
            let g = out.groupoid(&doc.left, name)?;
            let h = out.groupoid(&doc.right, name)?;
            let (gd, hd) = (&file.groupoids[&doc.left], &file.groupoids[&doc.right]);
            let x = out.space(&doc.space, name)?;
            let xs = (&*x, doc.space.as_str());
            let p = function(&doc.p, xs, (g.objects(), &gd.objects), name, "p")?;
            let p2 = function(
                &doc.p_prime,
                xs,
                (h.objects(), &hd.objects),
                name,
                "p_prime",
            )?;
            let lt = action_table(
                &doc.left_action,
                (g.arrows(), &gd.arrows),
                xs,
                xs,
                name,
                "left_action",
            )?;
            let rt = action_table(
                &doc.right_action,
                xs,
                (h.arrows(), &hd.arrows),
                xs,
                name,
                "right_action",
            )?;
            let left = LeftModule::from_fn(g, x.clone(), p, |i, a| lt.get(&(a, i)).copied())?;
            let right = RightModule::from_fn(h, x, p2, |i, a| rt.get(&(i, a)).copied())?;
            let b = Bimodule { left, right };
            let report = b.validate();
            report.into_result(name)?;
            out.bimodules.insert(name.clone(), b);
            Ok(())
        })();
        step(&mut out, name, r)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::groupoid::unit_groupoid;

    #[test]
    fn empty_document() {
        let (f, d) = parse_instance("  \n", Mode::Strict).unwrap();
        assert!(f.is_empty() && d.is_empty());
        assert_eq!(emit_instance(&f), "{}\n");
        assert!(parse_instance("{}", Mode::Strict).unwrap().0.is_empty());
    }

    #[test]
    fn sierp_round_trip() {
        let mut f = InstanceFile::default();
        f.add_space("SIERP", &sierp()).unwrap();
        let text = emit_instance(&f);
        assert_eq!(
            text,
            "{\n  \"spaces\": {\n    \"SIERP\": {\n      \"leq\": [\n        [\"s\", \"g\"]\n      ],\n      \"points\": [\"g\", \"s\"]\n    }\n  }\n}\n"
        );
        let (back, _) = parse_instance(&text, Mode::Strict).unwrap();
        assert_eq!(back, f);
        let loaded = load(&back, Mode::Strict).unwrap();
        let s = &loaded.spaces["SIERP"];
        assert!(s.leq(s.index_of("s").unwrap(), s.index_of("g").unwrap()));
        assert!(!s.leq(s.index_of("g").unwrap(), s.index_of("s").unwrap()));
    }

    #[test]
    fn groupoid_and_bimodule_round_trip() {
        let x = flip_to_point();
        let mut f = InstanceFile::default();
        f.add_groupoid("FLIP", x.left_groupoid()).unwrap();
        f.add_groupoid("PT", x.right_groupoid()).unwrap();
        f.add_bimodule("X", "FLIP", "PT", &x).unwrap();
        let text = emit_instance(&f);
        let (back, _) = parse_instance(&text, Mode::Strict).unwrap();
        assert_eq!(back, f);
        assert_eq!(emit_instance(&back), text);
        let loaded = load(&back, Mode::Strict).unwrap();
        let b = &loaded.bimodules["X"];
        assert!(b.validate_morita().is_valid());
        assert_eq!(bimodule_doc(b, "FLIP", "PT", "X"), f.bimodules["X"]);
        assert_eq!(
            groupoid_doc(&loaded.groupoids["FLIP"], "FLIP.arrows", "FLIP.objects"),
            f.groupoids["FLIP"]
        );
    }

    #[test]
    fn dangling_source() {
        let text = r#"{
  "spaces": {"A": {"points": ["e"]}, "O": {"points": ["m"]}},
  "groupoids": {"G": {"arrows": "A", "objects": "O", "src": [["e", "nowhere"]],
    "tgt": [["e", "m"]], "unit": [["m", "e"]], "inv": [["e", "e"]], "mul": [["e", "e", "e"]]}}
}"#;
        let (f, _) = parse_instance(text, Mode::Strict).unwrap();
        assert!(matches!(
            load(&f, Mode::Strict),
            Err(Error::DanglingReference(_))
        ));
        let lint = load(&f, Mode::Lint).unwrap();
        assert!(lint.groupoids.is_empty());
        assert_eq!(lint.diagnostics[0].clause, "dangling_reference");
    }

    #[test]
    fn unknown_fields() {
        let text = "{\"spaces\": {\"P\": {\"points\": [\"x\"], \"colour\": 1}}}";
        match parse_instance(text, Mode::Strict) {
            Err(Error::Parse {
                line,
                column,
                message,
            }) => {
                assert_eq!(line, 1);
                assert!(column > 0);
                assert!(message.contains("colour"));
            }
            other => panic!("{other:?}"),
        }
        let (f, d) = parse_instance(text, Mode::Lint).unwrap();
        assert_eq!(f.spaces["P"].points, vec!["x"]);
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn syntax_error_position() {
        match parse_instance("{\n  \"spaces\": [,]\n}", Mode::Strict) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn broken_groupoid_names_clause() {
        let mut f = InstanceFile::default();
        f.add_groupoid("P", &pair2()).unwrap();
        // drop one product: (a,b)·(b,a)
        f.groupoids
            .get_mut("P")
            .unwrap()
            .mul
            .retain(|(a, b, _)| !(a == "(a,b)" && b == "(b,a)"));
        match load(&f, Mode::Strict) {
            Err(Error::Validation { object, clause }) => {
                assert_eq!(object, "P");
                assert!(clause.starts_with("mul.domain"), "{clause}");
            }
            other => panic!("{other:?}"),
        }
        let lint = load(&f, Mode::Lint).unwrap();
        assert_eq!(lint.diagnostics.len(), 1);
    }

    #[test]
    fn merge_rejects_conflicts() {
        let mut a = InstanceFile::default();
        a.add_space("S", &sierp()).unwrap();
        a.add_space("S", &sierp()).unwrap();
        assert!(a.add_space("S", &node()).is_err());
    }

    #[test]
    fn object_subsets() {
        let u = unit_groupoid(&node());
        let mut f = InstanceFile::default();
        f.add_groupoid("G", &u).unwrap();
        let g = u.objects().index_of("g").unwrap();
        f.add_object_subset("S", "G", &u, &[g].into()).unwrap();
        let loaded = load(&f, Mode::Strict).unwrap();
        assert_eq!(loaded.object_subset("S", "G").unwrap().len(), 1);
        assert!(loaded.subset_of("S", "G.arrows").is_err());
    }
}
