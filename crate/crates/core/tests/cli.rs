use std::fs;
use std::path::Path;

use arr2kirby::cli::main_with;
use arr2kirby::diagram::Diagram;
use arr2kirby::divide::DivideWithCusps;
use arr2kirby::lift::PLLink;

fn run(args: &[&str]) -> i32 {
    main_with(std::iter::once("arr2kirby").chain(args.iter().copied()))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn file_pipeline_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let at = |name: &str| dir.path().join(name);
    fs::write(at("a.json"), r#"{"name": "cross", "lines": [["1", "0", "0"], ["0", "1", "0"]]}"#).unwrap();

    assert_eq!(run(&["normalize", s(&at("a.json")), "-o", s(&at("n.json"))]), 0);
    assert!(fs::read_to_string(at("n.json")).unwrap().contains("\"R0\""));
    assert_eq!(run(&["chambers", s(&at("a.json"))]), 0);

    assert_eq!(run(&["kirby", s(&at("a.json")), "--reduced", "-o", s(&at("k.json"))]), 0);
    let d = DivideWithCusps::from_json(&fs::read_to_string(at("k.json")).unwrap()).unwrap();
    assert_eq!(d.attaching().count(), 1);

    assert_eq!(run(&["lift", s(&at("k.json")), "-o", s(&at("l.json"))]), 0);
    let link = PLLink::from_json(&fs::read_to_string(at("l.json")).unwrap()).unwrap();
    assert!(link.labels().contains(&"attaching:1'"));

    assert_eq!(run(&["diagram", s(&at("l.json")), "-o", s(&at("d.json"))]), 0);
    assert_eq!(run(&["diagram", s(&at("l.json")), "--pd", "-o", s(&at("d.pd"))]), 0);
    assert!(fs::read_to_string(at("d.pd")).unwrap().contains("X["));
    let dg = Diagram::from_json(&fs::read_to_string(at("d.json")).unwrap()).unwrap();
    assert_eq!(dg.component_count(), 4);

    assert_eq!(run(&["invariants", s(&at("d.json")), "-p", "3,5"]), 0);
    for input in ["k.json", "l.json", "d.json"] {
        let out = at(&format!("{input}.svg"));
        assert_eq!(run(&["render", s(&at(input)), "-o", s(&out)]), 0);
        assert!(fs::read_to_string(out).unwrap().starts_with("<svg"));
    }
}

#[test]
fn fsdemo_takes_negative_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fs.json");
    assert_eq!(run(&["fsdemo", "--a1", "-1,1/2", "--a2", "2,1/2", "-o", s(&out)]), 0);
    assert_eq!(PLLink::from_json(&fs::read_to_string(out).unwrap()).unwrap().loops.len(), 1);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["fsdemo", "--a1", "1", "--a2", "2,1/2"]), 2);
    assert_eq!(run(&["fsdemo", "--a1", "0,1/2", "--a2", "1,1/4"]), 2);
    assert_eq!(run(&["no-such-command"]), 2);
}

#[test]
fn bad_input_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    fs::write(&p, r#"{"lines": [["0", "0", "1"]]}"#).unwrap();
    assert_eq!(run(&["chambers", s(&p)]), 1);
    assert_eq!(run(&["chambers", s(&dir.path().join("missing.json"))]), 1);
}
