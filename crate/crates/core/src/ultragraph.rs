//! Finite ultragraphs: generalized vertices, simple loops, exits, Condition (K)
//! and loop recurrence.
//!
//! Simple loops here only forbid revisiting the base vertex as a source. Inner
//! sources may repeat, so a vertex can carry infinitely many simple loops;
//! they are classified through walks in an auxiliary edge graph rather than by
//! enumeration.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::bitset::{BitSet, MAX_UNIVERSE};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawEdge {
    pub id: String,
    pub source: String,
    pub range: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RawUltragraph {
    pub vertices: Vec<String>,
    pub edges: Vec<RawEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ultragraph {
    vertices: Vec<String>,
    edges: Vec<String>,
    source: Vec<usize>,
    range: Vec<BitSet>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LoopCount {
    Zero,
    One,
    Many,
}

/// A family of vertex sets together with the closure it was computed under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSetFamily {
    pub sets: Vec<BitSet>,
    pub relative_complements: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Exit {
    /// An edge leaving `r(γ_position)` other than the next edge of the loop.
    Edge { position: usize, edge: String },
    /// A sink inside `r(γ_position)`.
    Sink { position: usize, vertex: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexKr {
    pub vertex: String,
    pub simple_loops: LoopCount,
    /// A shortest loop based at the vertex, if one exists within the bound.
    pub shortest_loop: Option<Vec<String>>,
    /// A loop witnessing recurrence of `shortest_loop`, if one exists within the bound.
    pub witness: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KrReport {
    pub condition_k: bool,
    pub all_loops_recurrent: bool,
    pub consistent: bool,
    pub max_len: usize,
    pub vertices: Vec<VertexKr>,
}

/// Maximum number of vertices for which the generalized-vertex families are materialized.
pub const MAX_FAMILY_VERTICES: usize = 16;

impl Ultragraph {
    pub fn validate(raw: &RawUltragraph) -> Result<Ultragraph> {
        let mut vertices = raw.vertices.clone();
        vertices.sort();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Ultragraph(format!("duplicate vertex `{}`", w[0])));
        }
        if vertices.len() > MAX_UNIVERSE {
            return Err(Error::TooLarge(format!("{} vertices, the limit is {MAX_UNIVERSE}", vertices.len())));
        }
        let vertex = |name: &str| {
            vertices
                .binary_search_by(|v| v.as_str().cmp(name))
                .map_err(|_| Error::UnknownVertex(name.to_string()))
        };
        let mut edges: Vec<&RawEdge> = raw.edges.iter().collect();
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = edges.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::Ultragraph(format!("duplicate edge `{}`", w[0].id)));
        }
        let mut source = Vec::new();
        let mut range = Vec::new();
        for e in &edges {
            source.push(vertex(&e.source)?);
            let r = e.range.iter().map(|v| vertex(v)).collect::<Result<BitSet>>()?;
            if r.is_empty() {
                return Err(Error::Ultragraph(format!("edge `{}` has empty range", e.id)));
            }
            range.push(r);
        }
        Ok(Ultragraph {
            vertices,
            edges: edges.iter().map(|e| e.id.clone()).collect(),
            source,
            range,
        })
    }

    pub fn to_raw(&self) -> RawUltragraph {
        RawUltragraph {
            vertices: self.vertices.clone(),
            edges: (0..self.edges.len())
                .map(|e| RawEdge {
                    id: self.edges[e].clone(),
                    source: self.vertices[self.source[e]].clone(),
                    range: self.vertex_names(self.range[e]),
                })
                .collect(),
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[String] {
        &self.edges
    }

    pub fn source(&self, e: usize) -> usize {
        self.source[e]
    }

    pub fn range(&self, e: usize) -> BitSet {
        self.range[e]
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices
            .binary_search_by(|v| v.as_str().cmp(name))
            .map_err(|_| Error::UnknownVertex(name.to_string()))
    }

    pub fn vertex_set<S: AsRef<str>>(&self, names: &[S]) -> Result<BitSet> {
        names.iter().map(|n| self.vertex_index(n.as_ref())).collect()
    }

    pub fn vertex_names(&self, s: BitSet) -> Vec<String> {
        s.iter().map(|v| self.vertices[v].clone()).collect()
    }

    pub fn edge_names(&self, path: &[usize]) -> Vec<String> {
        path.iter().map(|&e| self.edges[e].clone()).collect()
    }

    /// Resolves edge identifiers into a path, checking `s(α_{i+1}) ∈ r(α_i)`.
    pub fn path<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        let p = names
            .iter()
            .map(|n| {
                self.edges
                    .binary_search_by(|e| e.as_str().cmp(n.as_ref()))
                    .map_err(|_| Error::InvalidPath(format!("unknown edge `{}`", n.as_ref())))
            })
            .collect::<Result<Vec<_>>>()?;
        self.check_path(&p)?;
        Ok(p)
    }

    pub fn check_path(&self, p: &[usize]) -> Result<()> {
        if let Some(e) = p.iter().find(|&&e| e >= self.edges.len()) {
            return Err(Error::InvalidPath(format!("edge index {e} out of range")));
        }
        for w in p.windows(2) {
            if !self.range[w[0]].contains(self.source[w[1]]) {
                return Err(Error::InvalidPath(format!(
                    "s({}) ∉ r({})",
                    self.edges[w[1]], self.edges[w[0]]
                )));
            }
        }
        Ok(())
    }

    pub fn is_loop(&self, p: &[usize]) -> bool {
        self.check_path(p).is_ok() && !p.is_empty() && self.range[*p.last().unwrap()].contains(self.source[p[0]])
    }

    fn check_loop(&self, p: &[usize]) -> Result<()> {
        self.check_path(p).map_err(|e| Error::InvalidLoop(e.to_string()))?;
        if !self.is_loop(p) {
            return Err(Error::InvalidLoop(format!("{:?} does not return to its source", self.edge_names(p))));
        }
        Ok(())
    }

    /// Sources of no edge.
    pub fn sinks(&self) -> BitSet {
        let sources: BitSet = self.source.iter().copied().collect();
        BitSet::full(self.vertices.len()).difference(sources)
    }

    fn closure(&self, complements: bool) -> Result<VertexSetFamily> {
        if self.vertices.len() > MAX_FAMILY_VERTICES {
            return Err(Error::TooLarge(format!(
                "vertex-set families are only materialized up to {MAX_FAMILY_VERTICES} vertices"
            )));
        }
        let mut fam: BTreeSet<BitSet> = BTreeSet::new();
        fam.insert(BitSet::EMPTY);
        fam.extend((0..self.vertices.len()).map(BitSet::singleton));
        fam.extend(self.range.iter().copied());
        loop {
            let cur: Vec<BitSet> = fam.iter().copied().collect();
            let before = fam.len();
            for &a in &cur {
                for &b in &cur {
                    fam.insert(a.union(b));
                    fam.insert(a.intersection(b));
                    if complements {
                        fam.insert(a.difference(b));
                    }
                }
            }
            if fam.len() == before {
                break;
            }
        }
        Ok(VertexSetFamily { sets: fam.into_iter().collect(), relative_complements: complements })
    }

    /// Smallest family containing `∅`, singletons and ranges, closed under `∪` and `∩`.
    pub fn generalized_vertices(&self) -> Result<VertexSetFamily> {
        self.closure(false)
    }

    /// The generalized vertices, further closed under relative complements.
    pub fn accommodating_family(&self) -> Result<VertexSetFamily> {
        self.closure(true)
    }

    /// `r(A, α)`, iterating `r(A, e) = r(e)` if `s(e) ∈ A` and `∅` otherwise.
    pub fn relative_range(&self, a: BitSet, path: &[usize]) -> Result<BitSet> {
        if !a.is_subset(BitSet::full(self.vertices.len())) {
            return Err(Error::NotASubset);
        }
        self.check_path(path)?;
        Ok(path
            .iter()
            .fold(a, |acc, &e| if acc.contains(self.source[e]) { self.range[e] } else { BitSet::EMPTY }))
    }

    /// Classifies simple loops at `v` as none, exactly one, or at least two.
    pub fn simple_loop_count_at(&self, v: usize) -> LoopCount {
        let m = self.edges.len();
        let succ = |e: usize| (0..m).filter(move |&f| self.source[f] != v && self.range[e].contains(self.source[f]));
        let initial: Vec<usize> = (0..m).filter(|&e| self.source[e] == v).collect();
        let accepting = |e: usize| self.range[e].contains(v);

        let mut reach = vec![false; m];
        let mut queue: VecDeque<usize> = initial.iter().copied().collect();
        for &e in &initial {
            reach[e] = true;
        }
        while let Some(e) = queue.pop_front() {
            for f in succ(e) {
                if !reach[f] {
                    reach[f] = true;
                    queue.push_back(f);
                }
            }
        }
        let mut coreach: Vec<bool> = (0..m).map(accepting).collect();
        loop {
            let mut changed = false;
            for e in 0..m {
                if !coreach[e] && succ(e).any(|f| coreach[f]) {
                    coreach[e] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let useful: Vec<bool> = (0..m).map(|e| reach[e] && coreach[e]).collect();

        // A cycle through useful edges yields infinitely many accepted walks.
        let mut state = vec![0u8; m];
        fn has_cycle(e: usize, useful: &[bool], state: &mut [u8], succ: &dyn Fn(usize) -> Vec<usize>) -> bool {
            state[e] = 1;
            for f in succ(e) {
                if !useful[f] {
                    continue;
                }
                if state[f] == 1 || (state[f] == 0 && has_cycle(f, useful, state, succ)) {
                    return true;
                }
            }
            state[e] = 2;
            false
        }
        let succ_vec = |e: usize| succ(e).collect::<Vec<_>>();
        for e in 0..m {
            if useful[e] && state[e] == 0 && has_cycle(e, &useful, &mut state, &succ_vec) {
                return LoopCount::Many;
            }
        }

        // Acyclic: count accepted walks, saturating at 2.
        let mut memo: Vec<Option<u8>> = vec![None; m];
        fn walks(e: usize, useful: &[bool], acc: &dyn Fn(usize) -> bool, succ: &dyn Fn(usize) -> Vec<usize>, memo: &mut [Option<u8>]) -> u8 {
            if let Some(c) = memo[e] {
                return c;
            }
            let mut c = u8::from(acc(e));
            for f in succ(e) {
                if useful[f] {
                    c = (c + walks(f, useful, acc, succ, memo)).min(2);
                }
            }
            memo[e] = Some(c);
            c
        }
        let total = initial
            .iter()
            .filter(|&&e| useful[e])
            .fold(0u8, |c, &e| (c + walks(e, &useful, &accepting, &succ_vec, &mut memo)).min(2));
        match total {
            0 => LoopCount::Zero,
            1 => LoopCount::One,
            _ => LoopCount::Many,
        }
    }

    pub fn condition_k_report(&self) -> Vec<(String, LoopCount)> {
        (0..self.vertices.len())
            .map(|v| (self.vertices[v].clone(), self.simple_loop_count_at(v)))
            .collect()
    }

    /// No vertex carries exactly one simple loop.
    pub fn condition_k(&self) -> bool {
        (0..self.vertices.len()).all(|v| self.simple_loop_count_at(v) != LoopCount::One)
    }

    /// Exits of a loop, with 1-based positions.
    pub fn exits_of_loop(&self, gamma: &[usize]) -> Result<Vec<Exit>> {
        self.check_loop(gamma)?;
        let n = gamma.len();
        let sinks = self.sinks();
        let mut out = Vec::new();
        for i in 0..n {
            let next = gamma[(i + 1) % n];
            let r = self.range[gamma[i]];
            for e in 0..self.edges.len() {
                if e != next && r.contains(self.source[e]) {
                    out.push(Exit::Edge { position: i + 1, edge: self.edges[e].clone() });
                }
            }
            for w in r.intersection(sinks).iter() {
                out.push(Exit::Sink { position: i + 1, vertex: self.vertices[w].clone() });
            }
        }
        Ok(out)
    }

    /// Whether `γργ^∞ ≠ γ^∞`.
    ///
    /// Past position `|γρ|` both words are `|γ|`-periodic, so agreement on one
    /// further full period forces agreement everywhere: comparing a prefix of
    /// length `|γ| + |ρ| + |γ|` decides the question.
    pub fn is_recurrent(&self, gamma: &[usize], rho: &[usize]) -> Result<bool> {
        self.check_loop(gamma)?;
        self.check_loop(rho)?;
        if self.source[gamma[0]] != self.source[rho[0]] {
            return Err(Error::SourceMismatch(format!(
                "s(γ) = {}, s(ρ) = {}",
                self.vertices[self.source[gamma[0]]],
                self.vertices[self.source[rho[0]]]
            )));
        }
        Ok(words_differ(gamma, rho))
    }

    /// Searches loops `ρ` at `s(γ)` with `|ρ| ≤ max_len` for a recurrence witness,
    /// returning a shortest one.
    ///
    /// `γργ^∞ = γ^∞` exactly when `ρ` is a power of the primitive root of `γ`,
    /// so the search tracks whether the walk still follows that root.
    pub fn recurrence_witness(&self, gamma: &[usize], max_len: usize) -> Result<Option<Vec<usize>>> {
        self.check_loop(gamma)?;
        let v = self.source[gamma[0]];
        let root = &gamma[..primitive_period(gamma)];
        let m = self.edges.len();
        // state: (edge, deviated); on-track states sit at a position determined by the length.
        let idx = |e: usize, dev: bool| e * 2 + usize::from(dev);
        let mut parents: Vec<Vec<Option<usize>>> = Vec::new();
        let mut frontier: Vec<bool> = vec![false; 2 * m];
        let mut level_parent = vec![None; 2 * m];
        for e in (0..m).filter(|&e| self.source[e] == v) {
            let dev = e != root[0];
            frontier[idx(e, dev)] = true;
            level_parent[idx(e, dev)] = Some(usize::MAX);
        }
        parents.push(level_parent);
        for len in 1..=max_len {
            for s in (0..2 * m).filter(|&s| frontier[s]) {
                let (e, dev) = (s / 2, s % 2 == 1);
                if self.range[e].contains(v) && (dev || len % root.len() != 0) {
                    let mut path = vec![e];
                    let mut cur = s;
                    for l in (1..len).rev() {
                        cur = parents[l][cur].unwrap();
                        path.push(cur / 2);
                    }
                    path.reverse();
                    debug_assert!(self.is_recurrent(gamma, &path).unwrap());
                    return Ok(Some(path));
                }
            }
            if len == max_len {
                break;
            }
            let mut next = vec![false; 2 * m];
            let mut level_parent = vec![None; 2 * m];
            for s in (0..2 * m).filter(|&s| frontier[s]) {
                let (e, dev) = (s / 2, s % 2 == 1);
                for f in (0..m).filter(|&f| self.range[e].contains(self.source[f])) {
                    let ndev = dev || f != root[len % root.len()];
                    let t = idx(f, ndev);
                    if !next[t] {
                        next[t] = true;
                        level_parent[t] = Some(s);
                    }
                }
            }
            parents.push(level_parent);
            frontier = next;
        }
        Ok(None)
    }

    pub fn is_recurrent_any(&self, gamma: &[usize], max_len: usize) -> Result<bool> {
        Ok(self.recurrence_witness(gamma, max_len)?.is_some())
    }

    /// A shortest loop based at `v`, if any.
    pub fn shortest_loop_at(&self, v: usize) -> Option<Vec<usize>> {
        let m = self.edges.len();
        let mut parent = vec![None; m];
        let mut queue = VecDeque::new();
        for e in (0..m).filter(|&e| self.source[e] == v) {
            parent[e] = Some(usize::MAX);
            queue.push_back(e);
        }
        while let Some(e) = queue.pop_front() {
            if self.range[e].contains(v) {
                let mut path = vec![e];
                let mut cur = e;
                while let Some(p) = parent[cur].filter(|&p| p != usize::MAX) {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for f in (0..m).filter(|&f| self.range[e].contains(self.source[f])) {
                if parent[f].is_none() {
                    parent[f] = Some(e);
                    queue.push_back(f);
                }
            }
        }
        None
    }

    /// Compares Condition (K) with bounded recurrence of every loop of length at most `max_len`.
    ///
    /// Some loop at `v` of length `≤ L` lacks a witness of length `≤ L` exactly
    /// when every loop at `v` of length `≤ L` is a power of one primitive loop,
    /// and then a shortest loop at `v` is such a loop. So one shortest loop per
    /// vertex settles the bounded statement.
    pub fn check_kr(&self, max_len: usize) -> KrReport {
        let mut vertices = Vec::new();
        let mut all_recurrent = true;
        for v in 0..self.vertices.len() {
            let shortest = self.shortest_loop_at(v).filter(|l| l.len() <= max_len);
            let witness = shortest
                .as_ref()
                .and_then(|l| self.recurrence_witness(l, max_len).unwrap());
            if shortest.is_some() && witness.is_none() {
                all_recurrent = false;
            }
            vertices.push(VertexKr {
                vertex: self.vertices[v].clone(),
                simple_loops: self.simple_loop_count_at(v),
                shortest_loop: shortest.map(|l| self.edge_names(&l)),
                witness: witness.map(|l| self.edge_names(&l)),
            });
        }
        let condition_k = vertices.iter().all(|r| r.simple_loops != LoopCount::One);
        KrReport {
            condition_k,
            all_loops_recurrent: all_recurrent,
            consistent: condition_k == all_recurrent,
            max_len,
            vertices,
        }
    }
}

/// Length of the primitive root of a word.
pub fn primitive_period(w: &[usize]) -> usize {
    (1..=w.len())
        .find(|&p| w.len() % p == 0 && (p..w.len()).all(|i| w[i] == w[i - p]))
        .unwrap_or(w.len())
}

/// Compares `γργ^∞` with `γ^∞` on a prefix of length `2|γ| + |ρ|`.
fn words_differ(gamma: &[usize], rho: &[usize]) -> bool {
    let n = 2 * gamma.len() + rho.len();
    let left = gamma.iter().chain(rho).chain(gamma.iter().cycle());
    let right = gamma.iter().cycle();
    left.zip(right).take(n).any(|(a, b)| a != b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fix_u1, fix_u2, fix_u3};

    #[test]
    fn empty_range_rejected() {
        let raw = RawUltragraph {
            vertices: vec!["v".into()],
            edges: vec![RawEdge { id: "e".into(), source: "v".into(), range: vec![] }],
        };
        assert!(matches!(Ultragraph::validate(&raw), Err(Error::Ultragraph(_))));
        let raw = RawUltragraph {
            vertices: vec!["v".into()],
            edges: vec![RawEdge { id: "e".into(), source: "u".into(), range: vec!["v".into()] }],
        };
        assert!(matches!(Ultragraph::validate(&raw), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn families() {
        let u1 = fix_u1();
        let g = u1.generalized_vertices().unwrap();
        assert_eq!(g.sets, vec![BitSet::EMPTY, BitSet::singleton(0)]);
        assert_eq!(u1.accommodating_family().unwrap().sets, g.sets);
        assert_eq!(fix_u3().accommodating_family().unwrap().sets.len(), 4);
    }

    #[test]
    fn relative_ranges() {
        let u = fix_u3();
        let e = u.path(&["e"]).unwrap();
        let v = u.vertex_set(&["v"]).unwrap();
        let w = u.vertex_set(&["w"]).unwrap();
        assert_eq!(u.relative_range(v, &e).unwrap(), u.vertex_set(&["v", "w"]).unwrap());
        assert_eq!(u.relative_range(w, &e).unwrap(), BitSet::EMPTY);
        assert_eq!(u.relative_range(w, &[]).unwrap(), w);
        assert!(u.path(&["f", "f"]).is_err());
    }

    #[test]
    fn simple_loop_counts() {
        assert_eq!(fix_u1().simple_loop_count_at(0), LoopCount::One);
        assert_eq!(fix_u2().simple_loop_count_at(0), LoopCount::Many);
        let u3 = fix_u3();
        assert_eq!(u3.simple_loop_count_at(u3.vertex_index("w").unwrap()), LoopCount::Many);
        assert!(!fix_u1().condition_k());
        assert!(fix_u2().condition_k());
        assert!(fix_u3().condition_k());
    }

    #[test]
    fn loop_free_satisfies_k() {
        let raw = RawUltragraph {
            vertices: vec!["a".into(), "b".into()],
            edges: vec![RawEdge { id: "e".into(), source: "a".into(), range: vec!["b".into()] }],
        };
        let u = Ultragraph::validate(&raw).unwrap();
        assert!(u.condition_k());
        assert_eq!(u.simple_loop_count_at(0), LoopCount::Zero);
    }

    #[test]
    fn exits() {
        let u1 = fix_u1();
        assert!(u1.exits_of_loop(&u1.path(&["e"]).unwrap()).unwrap().is_empty());
        let u2 = fix_u2();
        assert_eq!(
            u2.exits_of_loop(&u2.path(&["e"]).unwrap()).unwrap(),
            vec![Exit::Edge { position: 1, edge: "f".into() }]
        );
        let u3 = fix_u3();
        assert_eq!(
            u3.exits_of_loop(&u3.path(&["e"]).unwrap()).unwrap(),
            vec![Exit::Edge { position: 1, edge: "f".into() }]
        );
        assert!(matches!(u3.exits_of_loop(&u3.path(&["f"]).unwrap()), Err(Error::InvalidLoop(_))));
    }

    #[test]
    fn recurrence() {
        let u1 = fix_u1();
        let e = u1.path(&["e"]).unwrap();
        assert!(!u1.is_recurrent(&e, &e).unwrap());
        assert!(!u1.is_recurrent_any(&e, 12).unwrap());
        let u2 = fix_u2();
        let (e, f) = (u2.path(&["e"]).unwrap(), u2.path(&["f"]).unwrap());
        assert!(u2.is_recurrent(&e, &f).unwrap());
        assert_eq!(u2.recurrence_witness(&e, 12).unwrap(), Some(f));
    }

    #[test]
    fn powers_are_never_witnesses() {
        let u3 = fix_u3();
        let g = u3.path(&["e", "f"]).unwrap();
        for k in 1..5 {
            let rho: Vec<usize> = g.iter().copied().cycle().take(k * g.len()).collect();
            assert!(!u3.is_recurrent(&g, &rho).unwrap());
        }
    }

    #[test]
    fn primitive_periods() {
        assert_eq!(primitive_period(&[1, 2, 1, 2]), 2);
        assert_eq!(primitive_period(&[1, 2, 1]), 3);
        assert_eq!(primitive_period(&[4]), 1);
    }

    #[test]
    fn kr_on_fixtures() {
        let r = fix_u1().check_kr(12);
        assert!(!r.condition_k && !r.all_loops_recurrent && r.consistent);
        let r = fix_u2().check_kr(12);
        assert!(r.condition_k && r.all_loops_recurrent && r.consistent);
        assert!(fix_u3().check_kr(12).consistent);
    }
}
