//! Fixture documents shared by the golden-file, CLI and acceptance tests.

#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use stackres::fixtures::*;
use stackres::groupoid::unit_groupoid;
use stackres::instance::InstanceFile;
use stackres::{Groupoid, PointSet, Subgroupoid};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
}

fn objs(g: &Groupoid, names: &[&str]) -> PointSet {
    names
        .iter()
        .map(|n| g.objects().index_of(n).unwrap())
        .collect()
}

fn units(g: &Arc<Groupoid>, names: &[&str]) -> Subgroupoid {
    Subgroupoid::units_over(g.clone(), objs(g, names))
}

fn sierp_doc() -> InstanceFile {
    let g = Arc::new(unit_groupoid(&sierp()));
    let mut f = InstanceFile::default();
    f.add_space("SIERP", &sierp()).unwrap();
    f.add_groupoid("G", &g).unwrap();
    f.add_object_subset("S", "G", &g, &objs(&g, &["g"]))
        .unwrap();
    f.add_subgroupoid("R", "G", &units(&g, &["g", "s"]))
        .unwrap();
    f
}

fn node_doc() -> InstanceFile {
    let g = Arc::new(unit_groupoid(&node()));
    let mut f = InstanceFile::default();
    f.add_groupoid("G", &g).unwrap();
    f.add_object_subset("S", "G", &g, &objs(&g, &["g"]))
        .unwrap();
    f.add_object_subset("L1", "G", &g, &objs(&g, &["g", "x"]))
        .unwrap();
    f.add_subgroupoid("R0", "G", &units(&g, &["g"])).unwrap();
    f.add_subgroupoid("R1", "G", &units(&g, &["g", "x"]))
        .unwrap();
    f.add_subgroupoid("R2", "G", &units(&g, &["g", "y"]))
        .unwrap();
    f.add_module(
        "Z",
        "G",
        &stackres::resolution::build_z_of_r(&units(&g, &["g", "x"]), &objs(&g, &["g"]))
            .unwrap()
            .module,
    )
    .unwrap();
    f
}

fn flip_doc() -> InstanceFile {
    let g = Arc::new(flip());
    let mut f = InstanceFile::default();
    f.add_groupoid("G", &g).unwrap();
    f.add_object_subset("S", "G", &g, &g.objects().all())
        .unwrap();
    let a = objs(&g, &["a"]);
    let ea: PointSet = [g.e(g.objects().index_of("a").unwrap())].into();
    f.add_subgroupoid("Ra", "G", &Subgroupoid::new(g.clone(), ea, a).unwrap())
        .unwrap();
    f.add_subgroupoid("R", "G", &Subgroupoid::whole(g.clone()))
        .unwrap();
    f
}

fn z2pt_doc() -> InstanceFile {
    let g = Arc::new(z2pt());
    let mut f = InstanceFile::default();
    f.add_groupoid("G", &g).unwrap();
    f.add_object_subset("S", "G", &g, &g.objects().all())
        .unwrap();
    f.add_subgroupoid("R", "G", &Subgroupoid::whole(g.clone()))
        .unwrap();
    f.add_subgroupoid("R1", "G", &units(&g, &["pt"])).unwrap();
    f
}

fn pair2_doc() -> InstanceFile {
    let g = Arc::new(pair2());
    let mut f = InstanceFile::default();
    f.add_groupoid("G", &g).unwrap();
    f.add_object_subset("S", "G", &g, &g.objects().all())
        .unwrap();
    f.add_subgroupoid("R", "G", &Subgroupoid::whole(g.clone()))
        .unwrap();
    f
}

fn flip_to_point_doc() -> InstanceFile {
    let x = flip_to_point();
    let (g, h) = (x.left_groupoid().clone(), x.right_groupoid().clone());
    let mut f = InstanceFile::default();
    f.add_groupoid("FLIP", &g).unwrap();
    f.add_groupoid("PT", &h).unwrap();
    f.add_bimodule("X", "FLIP", "PT", &x).unwrap();
    f.add_bimodule("Xinv", "PT", "FLIP", &x.inverse()).unwrap();
    f.add_object_subset("S", "FLIP", &g, &g.objects().all())
        .unwrap();
    let ea: PointSet = [g.e(g.objects().index_of("a").unwrap())].into();
    f.add_subgroupoid(
        "Ra",
        "FLIP",
        &Subgroupoid::new(g.clone(), ea, objs(&g, &["a"])).unwrap(),
    )
    .unwrap();
    f.add_subgroupoid("Rpt", "PT", &Subgroupoid::whole(h.clone()))
        .unwrap();
    f.add_module("Z", "FLIP", &stackres::RightModule::base(g.clone()))
        .unwrap();
    f
}

/// A pair groupoid with the product `(a,b)·(b,a)` missing.
fn broken_doc() -> InstanceFile {
    let mut f = pair2_doc();
    f.subsets.clear();
    f.subgroupoids.clear();
    f.groupoids
        .get_mut("G")
        .unwrap()
        .mul
        .retain(|(a, b, _)| !(a == "(a,b)" && b == "(b,a)"));
    f
}

/// `(file name, document)` for every fixture.
pub fn fixtures() -> Vec<(&'static str, InstanceFile)> {
    vec![
        ("sierp.json", sierp_doc()),
        ("node.json", node_doc()),
        ("flip.json", flip_doc()),
        ("z2pt.json", z2pt_doc()),
        ("pair2.json", pair2_doc()),
        ("flip_to_point.json", flip_to_point_doc()),
        ("broken.json", broken_doc()),
    ]
}
