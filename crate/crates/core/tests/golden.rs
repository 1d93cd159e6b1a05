//! Fixture documents against their golden files. Run with
//! `STACKRES_BLESS=1` to rewrite the files after an intended format change.

mod common;

use stackres::instance::{emit_instance, load, parse_instance, InstanceFile, Mode};

#[test]
fn fixtures_match_golden_files() {
    let bless = std::env::var_os("STACKRES_BLESS").is_some();
    for (name, doc) in common::fixtures() {
        let path = common::fixture_dir().join(name);
        let text = emit_instance(&doc);
        if bless {
            std::fs::write(&path, &text).unwrap();
        }
        let golden = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, golden, "{name} differs from its golden file");
    }
}

#[test]
fn golden_files_round_trip() {
    for (name, _) in common::fixtures() {
        let golden = std::fs::read_to_string(common::fixture_dir().join(name)).unwrap();
        let (parsed, diags) = parse_instance(&golden, Mode::Strict).unwrap();
        assert!(diags.is_empty());
        assert_eq!(
            emit_instance(&parsed),
            golden,
            "{name}: emission is not byte-stable"
        );
        let (again, _) = parse_instance(&emit_instance(&parsed), Mode::Strict).unwrap();
        assert_eq!(again, parsed, "{name}: parse(emit(x)) != x");
    }
}

#[test]
fn golden_files_load() {
    for (name, _) in common::fixtures() {
        let golden = std::fs::read_to_string(common::fixture_dir().join(name)).unwrap();
        let (parsed, _) = parse_instance(&golden, Mode::Strict).unwrap();
        let strict = load(&parsed, Mode::Strict);
        if name == "broken.json" {
            assert!(strict.is_err());
        } else {
            let loaded = strict.unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(loaded.diagnostics.is_empty());
        }
    }
}

#[test]
fn noncanonical_input_is_normalised() {
    let text = r#"{"spaces": {"P": {"points": ["y", "x"], "leq": [["y", "x"], ["y", "x"]]}}}"#;
    let (f, _) = parse_instance(text, Mode::Strict).unwrap();
    let canon = emit_instance(&f);
    let mut g: InstanceFile = f.clone();
    g.canonicalize();
    assert_eq!(parse_instance(&canon, Mode::Strict).unwrap().0, g);
    assert_eq!(emit_instance(&g), canon);
}
