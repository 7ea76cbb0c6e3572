use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sga_core::fixtures;
use sga_core::io::{Document, Instance, InstanceFile, FORMAT_VERSION};
use tempfile::TempDir;

fn sga(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sga")).args(args).output().unwrap()
}

fn sga_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sga")).args(args).env(key, val).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn write_instance(dir: &Path, name: &str, inst: Instance) -> String {
    write(dir, name, &inst.to_file().to_json()).to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

struct Files {
    _dir: TempDir,
    a: String,
    b: String,
    c: String,
    u1: String,
    u2: String,
    g: String,
}

fn files() -> Files {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    Files {
        a: write_instance(d, "a.json", Instance::Action(fixtures::fix_a())),
        b: write_instance(d, "b.json", Instance::Action(fixtures::fix_b())),
        c: write_instance(d, "c.json", Instance::Action(fixtures::fix_c())),
        u1: write_instance(d, "u1.json", Instance::Ultragraph(fixtures::fix_u1())),
        u2: write_instance(d, "u2.json", Instance::Ultragraph(fixtures::fix_u2())),
        g: write_instance(d, "g.json", Instance::Groupoid(fixtures::fix_d().groupoid().clone())),
        _dir: dir,
    }
}

#[test]
fn validate_exit_codes() {
    let f = files();
    let ok = sga(&["validate", &f.c]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["kind"], "action");

    let mut raw = fixtures::fix_b().to_raw();
    raw.map.get_mut("g").unwrap().insert("x1".into(), "x1".into());
    let bad = InstanceFile { version: FORMAT_VERSION, document: Document::Action(raw) };
    let path = write(f._dir.path(), "bad.json", &bad.to_json());
    let out = sga(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("θ_g"), "{err}");

    assert_eq!(sga(&["validate", "/definitely/not/here.json"]).status.code(), Some(2));
    let garbage = write(f._dir.path(), "garbage.json", "{\"kind\": \"action\", \"points\": 3}");
    assert_eq!(sga(&["validate", garbage.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(sga(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn report_dossiers() {
    let f = files();
    let b = json(&sga(&["report", &f.b, "--field", "2"]));
    assert_eq!((b["minimal"].as_bool(), b["simple"].as_bool(), b["ideal_count"].as_u64()), (Some(true), Some(true), Some(2)));
    let a = json(&sga(&["report", &f.a]));
    assert_eq!((a["intersection_property"].as_bool(), a["ideal_count"].as_u64()), (Some(false), Some(3)));
    let u = json(&sga(&["report", &f.u1]));
    assert_eq!(u["condition_K"], false);
    let g = json(&sga(&["report", &f.g]));
    assert_eq!(g["morphisms"], 4);
    assert_eq!(sga(&["report", &f.b, "--field", "4"]).status.code(), Some(1));
}

#[test]
fn cap_from_environment() {
    let f = files();
    let out = sga_env(&["report", &f.c], "SGA_MAX_DIM", "3");
    assert_eq!(json(&out)["ideal_count"], "skipped");
    let flag = sga_env(&["report", &f.c, "--max-dim", "14"], "SGA_MAX_DIM", "3");
    assert_eq!(json(&flag)["ideal_count"], 4);
    assert_eq!(sga(&["ideals", &f.c, "--max-dim", "3"]).status.code(), Some(1));
}

#[test]
fn ideals_listing() {
    let f = files();
    let out = json(&sga(&["ideals", &f.a]));
    assert_eq!(out["count"], 3);
    let non_graded = out["ideals"].as_array().unwrap().iter().filter(|i| i["graded"] == false).count();
    assert_eq!(non_graded, 1);
    assert_eq!(sga(&["ideals", &f.u1]).status.code(), Some(1));
}

#[test]
fn theorems_and_ultragraph() {
    let f = files();
    for p in [&f.a, &f.b, &f.c] {
        let out = sga(&["theorems", p, "--suite", "all", "--field", "2"]);
        assert_eq!(out.status.code(), Some(0));
        let rep = json(&out);
        assert!(rep["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
    }
    let capped = json(&sga(&["theorems", &f.c, "--suite", "ideal", "--max-dim", "2"]));
    assert!(capped["checks"].as_array().unwrap().iter().any(|c| c["status"] == "skipped"));
    let k1 = json(&sga(&["ultragraph", &f.u1, "--check", "k"]));
    let k2 = json(&sga(&["ultragraph", &f.u2, "--check", "k"]));
    assert_eq!((k1["condition_K"].as_bool(), k2["condition_K"].as_bool()), (Some(false), Some(true)));
    let r = sga(&["ultragraph", &f.u2, "--check", "recurrent", "--max-loop-len", "6"]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(json(&r)["consistent"], true);
    assert_eq!(sga(&["ultragraph", &f.a, "--check", "k"]).status.code(), Some(1));
    let timed = json(&sga(&["theorems", &f.b, "--suite", "stone", "--timings"]));
    assert!(timed["checks"][0]["elapsed_ms"].is_number());
}

#[test]
fn gen_round_trips() {
    let dir = TempDir::new().unwrap();
    for args in [
        vec!["gen", "--kind", "action", "--seed", "7", "--points", "3", "--morphisms", "4"],
        vec!["gen", "--kind", "ultragraph", "--seed", "1", "--vertices", "4", "--edges", "6"],
        vec!["gen", "--kind", "groupoid", "--seed", "3", "--morphisms", "6"],
    ] {
        let out = sga(&args);
        assert_eq!(out.status.code(), Some(0));
        let path = write(dir.path(), "gen.json", &String::from_utf8(out.stdout).unwrap());
        assert_eq!(sga(&["validate", path.to_str().unwrap()]).status.code(), Some(0));
    }
    let infeasible = sga(&["gen", "--kind", "ultragraph", "--vertices", "0", "--edges", "2"]);
    assert_eq!(infeasible.status.code(), Some(1));
}

#[test]
fn every_command_is_deterministic() {
    let f = files();
    let runs: Vec<Vec<&str>> = vec![
        vec!["validate", &f.c],
        vec!["report", &f.c],
        vec!["report", &f.c, "--format", "text"],
        vec!["report", &f.u2],
        vec!["ideals", &f.c, "--field", "3"],
        vec!["theorems", &f.c, "--suite", "all"],
        vec!["theorems", &f.u2, "--suite", "ultragraph"],
        vec!["ultragraph", &f.u1, "--check", "recurrent"],
        vec!["ultragraph", &f.u2, "--check", "k"],
        vec!["gen", "--kind", "action", "--seed", "7", "--points", "3", "--morphisms", "4"],
        vec!["gen", "--kind", "ultragraph", "--seed", "1", "--vertices", "4", "--edges", "6"],
    ];
    for args in runs {
        let (x, y) = (sga(&args), sga(&args));
        assert_eq!(x.stdout, y.stdout, "{args:?}");
        assert_eq!(x.status.code(), y.status.code());
    }
}
