//! Instance generators: seeded random actions and ultragraphs, and the
//! exhaustive corpus of small partial actions.
//!
//! Random actions are restrictions of global actions to random subsets. Every
//! partial action of a groupoid is such a restriction of its globalization, so
//! the sampler reaches all isomorphism types given enough points. A global
//! action of a connected groupoid is built from a set with an action of the
//! isotropy group at a base object, here a union of coset spaces.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::{PartialAction, RawAction, RawPoint};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::groupoid::Groupoid;
use crate::ultragraph::{RawEdge, RawUltragraph, Ultragraph};

const RETRIES: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActionBounds {
    pub max_points: usize,
    pub max_morphisms: usize,
    /// Upper bound on `Σ_g |X_g|`, the dimension of the skew groupoid ring.
    pub max_dim: Option<usize>,
}

/// A connected groupoid used as a building block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Block {
    /// Pair groupoid on `n` objects times `Z_m`.
    PairCyclic(usize, usize),
    Klein,
    Symmetric3,
}

impl Block {
    pub fn size(self) -> usize {
        match self {
            Block::PairCyclic(n, m) => n * n * m,
            Block::Klein => 4,
            Block::Symmetric3 => 6,
        }
    }

    /// All blocks with at most `max` morphisms, one per isomorphism type.
    pub fn up_to(max: usize) -> Vec<Block> {
        let mut out = Vec::new();
        for n in 1..=max {
            for m in 1..=max {
                if n * n * m <= max {
                    out.push(Block::PairCyclic(n, m));
                }
            }
        }
        if max >= 4 {
            out.push(Block::Klein);
        }
        if max >= 6 {
            out.push(Block::Symmetric3);
        }
        out.sort_by_key(|b| (b.size(), *b));
        out
    }

    pub fn build(self, prefix: &str) -> Result<Groupoid> {
        let group = |names: &[&str], table: &[Vec<usize>]| -> Result<Groupoid> {
            let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
            Ok(Groupoid::from_group(&names, table)?.with_prefix(prefix))
        };
        match self {
            Block::PairCyclic(1, m) => Ok(Groupoid::cyclic(m)?.with_prefix(prefix)),
            Block::PairCyclic(n, m) => Groupoid::pair_times_cyclic(n, m, prefix),
            Block::Klein => group(
                &["e", "a", "b", "c"],
                &[vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]],
            ),
            Block::Symmetric3 => {
                // Elements as permutations of {0,1,2}; the table is computed by composition.
                let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [1, 0, 2], [0, 2, 1], [2, 1, 0]];
                let table: Vec<Vec<usize>> = perms
                    .iter()
                    .map(|p| {
                        perms
                            .iter()
                            .map(|q| {
                                let pq = [p[q[0]], p[q[1]], p[q[2]]];
                                perms.iter().position(|r| *r == pq).unwrap()
                            })
                            .collect()
                    })
                    .collect();
                group(&["e", "r", "r2", "s", "sr", "sr2"], &table)
            }
        }
    }
}

/// Disjoint union of blocks; identifiers get a component prefix when there is more than one.
pub fn groupoid_from_blocks(blocks: &[Block]) -> Result<Groupoid> {
    if blocks.len() == 1 {
        return blocks[0].build("");
    }
    let parts = blocks
        .iter()
        .enumerate()
        .map(|(i, b)| b.build(&format!("{}.", (b'a' + i as u8) as char)))
        .collect::<Result<Vec<_>>>()?;
    Groupoid::disjoint_union(&parts)
}

/// Subgroups of the isotropy group at `b`, each as a set of morphism indices.
fn subgroups(gd: &Groupoid, b: usize) -> Vec<BitSet> {
    let h = gd.isotropy(b);
    let all: BitSet = h.iter().copied().collect();
    let mut out: Vec<BitSet> = all
        .subsets()
        .filter(|k| {
            k.contains(gd.identity(b))
                && k.iter().all(|x| k.contains(gd.inverse(x)) && k.iter().all(|y| k.contains(gd.compose(x, y).unwrap())))
        })
        .collect();
    out.sort();
    out
}

/// A global action: on each component, the fibre over every object is a copy of
/// the union of the coset spaces `H/K` for the chosen subgroups `K`.
pub fn global_coset_action(gd: &Groupoid, fibres: &[Vec<BitSet>]) -> Result<PartialAction> {
    let orbits = gd.object_orbits();
    if fibres.len() != orbits.len() {
        return Err(Error::InfeasibleBounds("one fibre description per component is required".into()));
    }
    // point id -> (object, coset key)
    let mut points: Vec<(usize, usize, BitSet)> = Vec::new();
    let mut transversal = vec![usize::MAX; gd.num_objects()];
    let mut base_of = vec![usize::MAX; gd.num_objects()];
    for (orbit, subs) in orbits.iter().zip(fibres) {
        let b = orbit.first().unwrap();
        for i in orbit.iter() {
            base_of[i] = b;
            transversal[i] = (0..gd.num_morphisms()).find(|&t| gd.source(t) == b && gd.range(t) == i).unwrap();
        }
        let h = gd.isotropy(b);
        let mut cosets: Vec<(usize, BitSet)> = Vec::new();
        for (j, &k) in subs.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for &a in &h {
                let c: BitSet = k.iter().map(|x| gd.compose(a, x).unwrap()).collect();
                if seen.insert(c) {
                    cosets.push((j, c));
                }
            }
        }
        for i in orbit.iter() {
            for &(j, c) in &cosets {
                points.push((i, j, c));
            }
        }
    }
    let name = |p: usize| format!("x{}", p + 1);
    let index: BTreeMap<(usize, usize, BitSet), usize> = points.iter().enumerate().map(|(p, &k)| (k, p)).collect();
    let mut raw = RawAction { groupoid: gd.to_raw(), ..Default::default() };
    for (p, &(i, _, _)) in points.iter().enumerate() {
        raw.points.push(RawPoint { id: name(p), unit: gd.objects()[i].clone() });
    }
    for g in 0..gd.num_morphisms() {
        let (j, i) = (gd.source(g), gd.range(g));
        let b = base_of[i];
        // h = t_i⁻¹ g t_j lies in the isotropy group at b.
        let h = gd.compose(gd.inverse(transversal[i]), gd.compose(g, transversal[j]).unwrap()).unwrap();
        let mut dom = Vec::new();
        let mut map = BTreeMap::new();
        for (p, &(obj, sub, c)) in points.iter().enumerate() {
            if obj == i {
                dom.push(name(p));
            }
            if obj == j {
                let hc: BitSet = c.iter().map(|x| gd.compose(h, x).unwrap()).collect();
                map.insert(name(p), name(index[&(i, sub, hc)]));
            }
        }
        debug_assert!(gd.isotropy(b).contains(&h));
        raw.domain.insert(gd.morphisms()[g].clone(), dom);
        raw.map.insert(gd.morphisms()[g].clone(), map);
    }
    PartialAction::validate(&raw)
}

/// Restriction of a global action to an arbitrary subset `y`, with points renamed `x1, x2, …`.
pub fn restrict_global(a: &PartialAction, y: BitSet) -> Result<PartialAction> {
    if !a.is_global() {
        return Err(Error::NotGlobal { morphism: String::new(), unit: String::new() });
    }
    let gd = a.groupoid();
    let keep: Vec<usize> = y.iter().collect();
    let name = |x: usize| format!("x{}", keep.iter().position(|&k| k == x).unwrap() + 1);
    let mut raw = RawAction { groupoid: gd.to_raw(), ..Default::default() };
    for &x in &keep {
        raw.points.push(RawPoint { id: name(x), unit: gd.objects()[a.unit_of(x)].clone() });
    }
    for g in 0..gd.num_morphisms() {
        let gi = gd.inverse(g);
        let dom: Vec<usize> = a.domain(g).intersection(y).iter().filter(|&x| y.contains(a.theta(gi, x).unwrap())).collect();
        raw.domain.insert(gd.morphisms()[g].clone(), dom.iter().map(|&x| name(x)).collect());
        let map = dom.iter().map(|&x| (name(a.theta(gi, x).unwrap()), name(x))).collect();
        raw.map.insert(gd.morphisms()[g].clone(), map);
    }
    PartialAction::validate(&raw)
}

fn skew_dim(a: &PartialAction) -> usize {
    (0..a.groupoid().num_morphisms()).map(|g| a.domain(g).len()).sum()
}

fn random_blocks(rng: &mut ChaCha8Rng, max_morphisms: usize) -> Vec<Block> {
    let mut remaining = rng.gen_range(1..=max_morphisms);
    let mut blocks = Vec::new();
    while remaining > 0 {
        let choices = Block::up_to(remaining);
        let b = *choices.choose(rng).unwrap();
        remaining -= b.size();
        blocks.push(b);
        if rng.gen_bool(0.3) {
            break;
        }
    }
    blocks.sort();
    blocks
}

/// A deterministic random partial action within `bounds`.
pub fn random_instance(seed: u64, bounds: ActionBounds) -> Result<PartialAction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if bounds.max_morphisms == 0 {
        let empty = Groupoid::disjoint_union(&[])?;
        return PartialAction::validate(&RawAction { groupoid: empty.to_raw(), ..Default::default() });
    }
    for _ in 0..RETRIES {
        let gd = groupoid_from_blocks(&random_blocks(&mut rng, bounds.max_morphisms))?;
        let fibres: Vec<Vec<BitSet>> = gd
            .object_orbits()
            .iter()
            .map(|o| {
                let subs = subgroups(&gd, o.first().unwrap());
                (0..rng.gen_range(1..=2)).map(|_| *subs.choose(&mut rng).unwrap()).collect()
            })
            .collect();
        let global = global_coset_action(&gd, &fibres)?;
        let n = global.num_points();
        let hi = bounds.max_points.min(n);
        let target = rng.gen_range(hi.min(1)..=hi);
        let mut pts: Vec<usize> = (0..n).collect();
        pts.shuffle(&mut rng);
        let y: BitSet = pts[..target].iter().copied().collect();
        let a = restrict_global(&global, y)?;
        if bounds.max_dim.map_or(true, |d| skew_dim(&a) <= d) {
            return Ok(a);
        }
    }
    Err(Error::InfeasibleBounds(format!(
        "no action with at most {} points, {} morphisms and dimension {:?} after {RETRIES} attempts",
        bounds.max_points, bounds.max_morphisms, bounds.max_dim
    )))
}

/// Multisets of blocks with total size between 1 and `max_morphisms`.
pub fn small_groupoids(max_morphisms: usize) -> Result<Vec<Groupoid>> {
    fn go(blocks: &[Block], start: usize, left: usize, cur: &mut Vec<Block>, out: &mut Vec<Vec<Block>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for i in start..blocks.len() {
            if blocks[i].size() <= left {
                cur.push(blocks[i]);
                go(blocks, i, left - blocks[i].size(), cur, out);
                cur.pop();
            }
        }
    }
    let blocks = Block::up_to(max_morphisms);
    let mut shapes = Vec::new();
    go(&blocks, 0, max_morphisms, &mut Vec::new(), &mut shapes);
    shapes.iter().map(|s| groupoid_from_blocks(s)).collect()
}

/// All partial injections `dom → cod` as maps on point indices.
fn partial_injections(dom: &[usize], cod: &[usize]) -> Vec<Vec<(usize, usize)>> {
    fn go(dom: &[usize], cod: &[usize], used: &mut Vec<bool>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        let Some((&x, rest)) = dom.split_first() else {
            out.push(cur.clone());
            return;
        };
        go(rest, cod, used, cur, out);
        for (k, &y) in cod.iter().enumerate() {
            if !used[k] {
                used[k] = true;
                cur.push((x, y));
                go(rest, cod, used, cur, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(dom, cod, &mut vec![false; cod.len()], &mut Vec::new(), &mut out);
    out
}

/// Encoding of an action under a relabelling of points and morphisms.
fn encode(a: &PartialAction, point_perm: &[usize], mor_perm: &[usize]) -> Vec<u8> {
    let gd = a.groupoid();
    let n = a.num_points();
    let m = gd.num_morphisms();
    let obj_perm = |e: usize| gd.range(mor_perm[gd.identity(e)]);
    let mut units = vec![0u8; n];
    for x in 0..n {
        units[point_perm[x]] = obj_perm(a.unit_of(x)) as u8;
    }
    let mut theta = vec![u8::MAX; m * n];
    for g in 0..m {
        for x in 0..n {
            if let Some(y) = a.theta(g, x) {
                theta[mor_perm[g] * n + point_perm[x]] = point_perm[y] as u8;
            }
        }
    }
    units.extend(theta);
    units
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Smallest encoding over point permutations and groupoid automorphisms.
pub fn canonical_form(a: &PartialAction, automorphisms: &[Vec<usize>]) -> Vec<u8> {
    let perms = permutations(a.num_points());
    automorphisms
        .iter()
        .flat_map(|s| perms.iter().map(move |p| encode(a, p, s)))
        .min()
        .unwrap()
}

/// Every partial action with at most `max_points` points of every groupoid with at
/// most `max_morphisms` morphisms, one per isomorphism class.
pub fn exhaustive_corpus(max_points: usize, max_morphisms: usize) -> Result<Vec<PartialAction>> {
    if max_points > 4 || max_morphisms > 6 {
        return Err(Error::TooLarge(format!("exhaustive corpus with {max_points} points and {max_morphisms} morphisms")));
    }
    let mut out = Vec::new();
    for gd in small_groupoids(max_morphisms)? {
        let autos = gd.automorphisms();
        let mut seen = BTreeSet::new();
        let names = |x: usize| format!("x{}", x + 1);
        for k in 0..=max_points {
            // Units as a non-decreasing sequence; point permutations cover the rest.
            let mut assignments: Vec<Vec<usize>> = vec![vec![]];
            for _ in 0..k {
                assignments = assignments
                    .into_iter()
                    .flat_map(|u| {
                        let lo = u.last().copied().unwrap_or(0);
                        (lo..gd.num_objects()).map(move |e| {
                            let mut v = u.clone();
                            v.push(e);
                            v
                        })
                    })
                    .collect();
            }
            // One representative of each {g, g⁻¹} among non-units.
            let reps: Vec<usize> = (0..gd.num_morphisms()).filter(|&g| !gd.is_unit(g) && g <= gd.inverse(g)).collect();
            for units in assignments {
                let fibre = |e: usize| -> Vec<usize> { (0..k).filter(|&x| units[x] == e).collect() };
                let options: Vec<Vec<Vec<(usize, usize)>>> = reps
                    .iter()
                    .map(|&g| {
                        let all = partial_injections(&fibre(gd.source(g)), &fibre(gd.range(g)));
                        if g == gd.inverse(g) {
                            all.into_iter()
                                .filter(|f| f.iter().all(|&(x, y)| f.iter().any(|&(u, v)| u == y && v == x)))
                                .collect()
                        } else {
                            all
                        }
                    })
                    .collect();
                let mut choice = vec![0usize; reps.len()];
                loop {
                    let mut raw = RawAction { groupoid: gd.to_raw(), ..Default::default() };
                    for x in 0..k {
                        raw.points.push(RawPoint { id: names(x), unit: gd.objects()[units[x]].clone() });
                    }
                    for e in 0..gd.num_objects() {
                        let g = gd.morphisms()[gd.identity(e)].clone();
                        let f = fibre(e);
                        raw.domain.insert(g.clone(), f.iter().map(|&x| names(x)).collect());
                        raw.map.insert(g, f.iter().map(|&x| (names(x), names(x))).collect());
                    }
                    for (r, &g) in reps.iter().enumerate() {
                        let f = &options[r][choice[r]];
                        let gi = gd.inverse(g);
                        // θ_g sends x to y; the domain of g is the image.
                        raw.domain.insert(gd.morphisms()[g].clone(), f.iter().map(|&(_, y)| names(y)).collect());
                        raw.map.insert(gd.morphisms()[g].clone(), f.iter().map(|&(x, y)| (names(x), names(y))).collect());
                        raw.domain.insert(gd.morphisms()[gi].clone(), f.iter().map(|&(x, _)| names(x)).collect());
                        raw.map.insert(gd.morphisms()[gi].clone(), f.iter().map(|&(x, y)| (names(y), names(x))).collect());
                    }
                    if let Ok(a) = PartialAction::validate(&raw) {
                        if seen.insert(canonical_form(&a, &autos)) {
                            out.push(a);
                        }
                    }
                    // Advance the mixed-radix counter.
                    let mut i = 0;
                    while i < choice.len() {
                        choice[i] += 1;
                        if choice[i] < options[i].len() {
                            break;
                        }
                        choice[i] = 0;
                        i += 1;
                    }
                    if i == choice.len() {
                        break;
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UltragraphBounds {
    pub vertices: usize,
    pub edges: usize,
}

/// A deterministic random ultragraph with exactly the given numbers of vertices and edges.
/// Ranges are nonempty and mostly small.
pub fn random_ultragraph(seed: u64, bounds: UltragraphBounds) -> Result<Ultragraph> {
    let UltragraphBounds { vertices: n, edges: m } = bounds;
    if n == 0 && m > 0 {
        return Err(Error::InfeasibleBounds("edges need at least one vertex".into()));
    }
    if n > 64 {
        return Err(Error::TooLarge(format!("{n} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vname = |i: usize| format!("v{}", i + 1);
    let mut raw = RawUltragraph { vertices: (0..n).map(vname).collect(), edges: Vec::new() };
    for k in 0..m {
        let size = rng.gen_range(1..=n.min(3));
        let mut vs: Vec<usize> = (0..n).collect();
        vs.shuffle(&mut rng);
        let mut range: Vec<usize> = vs[..size].to_vec();
        range.sort();
        raw.edges.push(RawEdge {
            id: format!("e{}", k + 1),
            source: vname(rng.gen_range(0..n)),
            range: range.into_iter().map(vname).collect(),
        });
    }
    Ultragraph::validate(&raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_counts() {
        assert_eq!(small_groupoids(4).unwrap().len(), 13);
        assert_eq!(Block::up_to(6).len(), 9);
        for b in Block::up_to(6) {
            assert_eq!(b.build("").unwrap().num_morphisms(), b.size());
        }
    }

    #[test]
    fn symmetric_group_subgroups() {
        let s3 = Block::Symmetric3.build("").unwrap();
        assert_eq!(subgroups(&s3, 0).len(), 6);
        let z4 = Block::PairCyclic(1, 4).build("").unwrap();
        assert_eq!(subgroups(&z4, 0).len(), 3);
    }

    #[test]
    fn coset_actions_are_global() {
        let s3 = Block::Symmetric3.build("").unwrap();
        for k in subgroups(&s3, 0) {
            let a = global_coset_action(&s3, &[vec![k]]).unwrap();
            assert!(a.is_global());
            assert_eq!(a.num_points() * k.len(), 6);
            assert_eq!(a.orbits().len(), 1);
        }
        let p2 = Block::PairCyclic(2, 2).build("").unwrap();
        let full = subgroups(&p2, 0).pop().unwrap();
        let a = global_coset_action(&p2, &[vec![full, BitSet::singleton(p2.identity(0))]]).unwrap();
        assert_eq!(a.num_points(), 2 * (1 + 2));
    }

    #[test]
    fn random_is_deterministic_and_bounded() {
        let b = ActionBounds { max_points: 4, max_morphisms: 6, max_dim: Some(12) };
        for seed in 0..40 {
            let a = random_instance(seed, b).unwrap();
            assert_eq!(a, random_instance(seed, b).unwrap());
            assert!(a.num_points() <= 4 && a.groupoid().num_morphisms() <= 6 && skew_dim(&a) <= 12);
        }
        let empty = random_instance(1, ActionBounds { max_points: 0, max_morphisms: 3, max_dim: None }).unwrap();
        assert_eq!(empty.num_points(), 0);
    }

    #[test]
    fn partial_restriction() {
        let z2 = Block::PairCyclic(1, 2).build("").unwrap();
        let swap = global_coset_action(&z2, &[vec![BitSet::singleton(z2.identity(0))]]).unwrap();
        let a = restrict_global(&swap, BitSet::singleton(0)).unwrap();
        let g = a.groupoid().morphism_index("g").unwrap();
        assert!(a.domain(g).is_empty());
    }

    #[test]
    fn injection_counts() {
        assert_eq!(partial_injections(&[0, 1, 2], &[0, 1, 2]).len(), 34);
        assert_eq!(partial_injections(&[], &[0]).len(), 1);
    }

    #[test]
    fn corpus_contains_fixtures_once() {
        let corpus = exhaustive_corpus(2, 2).unwrap();
        let z2 = Block::PairCyclic(1, 2).build("").unwrap();
        let autos = z2.automorphisms();
        let count = |target: &PartialAction| {
            let key = canonical_form(target, &autos);
            corpus.iter().filter(|a| a.groupoid() == &z2 && canonical_form(a, &autos) == key).count()
        };
        // Z_2 on two points: X_g empty, one fixed point, both fixed, or swapped.
        let on_two: Vec<_> = corpus.iter().filter(|a| a.groupoid() == &z2 && a.num_points() == 2).collect();
        assert_eq!(on_two.len(), 4);
        let swap = global_coset_action(&z2, &[vec![BitSet::singleton(z2.identity(0))]]).unwrap();
        assert_eq!(count(&swap), 1);
    }

    #[test]
    fn random_ultragraphs_validate() {
        let b = UltragraphBounds { vertices: 4, edges: 6 };
        let u = random_ultragraph(1, b).unwrap();
        assert_eq!((u.vertices().len(), u.edges().len()), (4, 6));
        assert_eq!(u, random_ultragraph(1, b).unwrap());
        assert!(random_ultragraph(1, UltragraphBounds { vertices: 0, edges: 1 }).is_err());
    }
}
