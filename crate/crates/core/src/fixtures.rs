//! Small named instances used in tests, docs and the CLI examples.

use std::collections::BTreeMap;

use crate::action::{PartialAction, RawAction, RawPoint};
use crate::groupoid::{Groupoid, RawGroupoid, RawMorphism};
use crate::ultragraph::{RawEdge, RawUltragraph, Ultragraph};

fn s(x: &str) -> String {
    x.to_string()
}

fn z2_action(points: &[&str], dom_g: &[&str], map_g: &[(&str, &str)]) -> PartialAction {
    let g = Groupoid::cyclic(2).unwrap();
    let mut raw = RawAction { groupoid: g.to_raw(), ..Default::default() };
    for p in points {
        raw.points.push(RawPoint { id: s(p), unit: s("e") });
    }
    raw.domain.insert(s("e"), points.iter().map(|p| s(p)).collect());
    raw.map.insert(s("e"), points.iter().map(|p| (s(p), s(p))).collect());
    raw.domain.insert(s("g"), dom_g.iter().map(|p| s(p)).collect());
    raw.map.insert(s("g"), map_g.iter().map(|(a, b)| (s(a), s(b))).collect());
    PartialAction::validate(&raw).expect("fixture is valid")
}

/// `Z₂` acting trivially on one point.
pub fn fix_a() -> PartialAction {
    z2_action(&["x1"], &["x1"], &[("x1", "x1")])
}

/// `Z₂` swapping two points.
pub fn fix_b() -> PartialAction {
    z2_action(&["x1", "x2"], &["x1", "x2"], &[("x1", "x2"), ("x2", "x1")])
}

/// `Z₂` swapping `x1, x2` inside `{x1, x2, x3}`, with `X_g = {x1, x2}`.
pub fn fix_c() -> PartialAction {
    z2_action(&["x1", "x2", "x3"], &["x1", "x2"], &[("x1", "x2"), ("x2", "x1")])
}

/// Pair groupoid on `e1, e2` moving `a` (over `e1`) to `b` (over `e2`).
pub fn fix_d() -> PartialAction {
    let m = |id: &str, src: &str, dst: &str| RawMorphism { id: s(id), src: s(src), dst: s(dst) };
    let groupoid = RawGroupoid {
        objects: vec![s("e1"), s("e2")],
        morphisms: vec![m("id1", "e1", "e1"), m("id2", "e2", "e2"), m("h", "e1", "e2"), m("hinv", "e2", "e1")],
        identity: BTreeMap::from([(s("e1"), s("id1")), (s("e2"), s("id2"))]),
        inverse: BTreeMap::from([
            (s("id1"), s("id1")),
            (s("id2"), s("id2")),
            (s("h"), s("hinv")),
            (s("hinv"), s("h")),
        ]),
        compose: [
            ["id1", "id1", "id1"],
            ["id1", "hinv", "hinv"],
            ["id2", "id2", "id2"],
            ["id2", "h", "h"],
            ["h", "id1", "h"],
            ["h", "hinv", "id2"],
            ["hinv", "id2", "hinv"],
            ["hinv", "h", "id1"],
        ]
        .iter()
        .map(|t| t.map(s))
        .collect(),
    };
    let raw = RawAction {
        groupoid,
        points: vec![RawPoint { id: s("a"), unit: s("e1") }, RawPoint { id: s("b"), unit: s("e2") }],
        domain: BTreeMap::from([
            (s("id1"), vec![s("a")]),
            (s("id2"), vec![s("b")]),
            (s("h"), vec![s("b")]),
            (s("hinv"), vec![s("a")]),
        ]),
        map: BTreeMap::from([
            (s("id1"), BTreeMap::from([(s("a"), s("a"))])),
            (s("id2"), BTreeMap::from([(s("b"), s("b"))])),
            (s("h"), BTreeMap::from([(s("a"), s("b"))])),
            (s("hinv"), BTreeMap::from([(s("b"), s("a"))])),
        ]),
    };
    PartialAction::validate(&raw).expect("fixture is valid")
}

fn ultragraph(vertices: &[&str], edges: &[(&str, &str, &[&str])]) -> Ultragraph {
    let raw = RawUltragraph {
        vertices: vertices.iter().map(|v| s(v)).collect(),
        edges: edges
            .iter()
            .map(|(id, src, r)| RawEdge { id: s(id), source: s(src), range: r.iter().map(|v| s(v)).collect() })
            .collect(),
    };
    Ultragraph::validate(&raw).expect("fixture is valid")
}

/// One vertex with a single loop.
pub fn fix_u1() -> Ultragraph {
    ultragraph(&["v"], &[("e", "v", &["v"])])
}

/// One vertex with two loops.
pub fn fix_u2() -> Ultragraph {
    ultragraph(&["v"], &[("e", "v", &["v"]), ("f", "v", &["v"])])
}

/// `e: v → {v, w}`, `f: w → {v}`.
pub fn fix_u3() -> Ultragraph {
    ultragraph(&["v", "w"], &[("e", "v", &["v", "w"]), ("f", "w", &["v"])])
}
