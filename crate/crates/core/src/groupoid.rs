//! Finite groupoids given by explicit composition tables.
//!
//! Objects and morphisms are identified by strings and stored in lexicographic
//! order, so every index-based enumeration below is canonical. The whole
//! composition table is materialized at validation time.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Largest number of morphisms accepted by [`Groupoid::validate`].
pub const MAX_MORPHISMS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// Unvalidated groupoid description, mirroring the JSON exchange format.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RawGroupoid {
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    pub identity: BTreeMap<String, String>,
    pub inverse: BTreeMap<String, String>,
    pub compose: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Groupoid {
    objects: Vec<String>,
    morphisms: Vec<String>,
    src: Vec<usize>,
    dst: Vec<usize>,
    identity: Vec<usize>,
    inverse: Vec<usize>,
    /// `compose[g * n + h]` is `Some(gh)` exactly when `s(g) = r(h)`.
    compose: Vec<Option<usize>>,
}

fn index_of(names: &[String], name: &str) -> Option<usize> {
    names.binary_search_by(|n| n.as_str().cmp(name)).ok()
}

/// Extends a partial injective map with `from ↦ to`, reporting whether that stays consistent.
fn bind(map: &mut [usize], from: usize, to: usize) -> bool {
    if map[from] != usize::MAX {
        return map[from] == to;
    }
    if map.contains(&to) {
        return false;
    }
    map[from] = to;
    true
}

fn sorted_unique(names: impl IntoIterator<Item = String>, what: &str) -> Result<Vec<String>> {
    let mut v: Vec<String> = names.into_iter().collect();
    v.sort();
    for w in v.windows(2) {
        if w[0] == w[1] {
            return Err(Error::groupoid("unique identifiers", format!("duplicate {what} `{}`", w[0])));
        }
    }
    Ok(v)
}

impl Groupoid {
    /// Checks every groupoid axiom exhaustively and returns the validated table.
    pub fn validate(raw: &RawGroupoid) -> Result<Groupoid> {
        let objects = sorted_unique(raw.objects.iter().cloned(), "object")?;
        let morphisms = sorted_unique(raw.morphisms.iter().map(|m| m.id.clone()), "morphism")?;
        let n = morphisms.len();
        if n > MAX_MORPHISMS {
            return Err(Error::TooLarge(format!(
                "groupoid has {n} morphisms, the limit is {MAX_MORPHISMS}"
            )));
        }
        let obj = |name: &str| index_of(&objects, name).ok_or_else(|| Error::UnknownObject(name.to_string()));
        let mor = |name: &str| index_of(&morphisms, name).ok_or_else(|| Error::UnknownMorphism(name.to_string()));

        let mut src = vec![0; n];
        let mut dst = vec![0; n];
        for m in &raw.morphisms {
            let i = mor(&m.id)?;
            src[i] = obj(&m.src)?;
            dst[i] = obj(&m.dst)?;
        }

        let mut identity = vec![usize::MAX; objects.len()];
        for (o, m) in &raw.identity {
            identity[obj(o)?] = mor(m)?;
        }
        if let Some(e) = identity.iter().position(|&m| m == usize::MAX) {
            return Err(Error::groupoid("identity", format!("object `{}` has no identity morphism", objects[e])));
        }
        for (e, &u) in identity.iter().enumerate() {
            if src[u] != e || dst[u] != e {
                return Err(Error::groupoid(
                    "identity",
                    format!("identity `{}` of `{}` is not a loop at that object", morphisms[u], objects[e]),
                ));
            }
        }

        let mut inverse = vec![usize::MAX; n];
        for (g, gi) in &raw.inverse {
            inverse[mor(g)?] = mor(gi)?;
        }
        if let Some(g) = inverse.iter().position(|&m| m == usize::MAX) {
            return Err(Error::groupoid("inverse", format!("morphism `{}` has no inverse", morphisms[g])));
        }

        let mut compose = vec![None; n * n];
        for [g, h, gh] in &raw.compose {
            let (g, h, gh) = (mor(g)?, mor(h)?, mor(gh)?);
            if src[g] != dst[h] {
                return Err(Error::groupoid(
                    "non-composable product",
                    format!("`{}`·`{}` is defined but s({}) ≠ r({})", morphisms[g], morphisms[h], morphisms[g], morphisms[h]),
                ));
            }
            if compose[g * n + h].replace(gh).is_some() {
                return Err(Error::groupoid(
                    "composition table",
                    format!("product `{}`·`{}` listed twice", morphisms[g], morphisms[h]),
                ));
            }
            if src[gh] != src[h] || dst[gh] != dst[g] {
                return Err(Error::groupoid(
                    "composition endpoints",
                    format!("`{}`·`{}` = `{}` has the wrong source or range", morphisms[g], morphisms[h], morphisms[gh]),
                ));
            }
        }
        for g in 0..n {
            for h in 0..n {
                if src[g] == dst[h] && compose[g * n + h].is_none() {
                    return Err(Error::groupoid(
                        "missing product",
                        format!("composable pair (`{}`, `{}`) has no product", morphisms[g], morphisms[h]),
                    ));
                }
            }
        }

        let gd = Groupoid {
            objects,
            morphisms,
            src,
            dst,
            identity,
            inverse,
            compose,
        };
        gd.check_axioms()?;
        Ok(gd)
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.morphisms.len();
        let name = |g: usize| self.morphisms[g].as_str();
        for g in 0..n {
            let left = self.identity[self.dst[g]];
            let right = self.identity[self.src[g]];
            if self.compose(left, g) != Some(g) || self.compose(g, right) != Some(g) {
                return Err(Error::groupoid("bad identity", format!("identity does not act as a unit on `{}`", name(g))));
            }
            let gi = self.inverse[g];
            if self.compose(gi, g) != Some(right) || self.compose(g, gi) != Some(left) {
                return Err(Error::groupoid(
                    "bad inverse",
                    format!("`{}` is not a two-sided inverse of `{}`", name(gi), name(g)),
                ));
            }
        }
        for f in 0..n {
            for g in 0..n {
                let Some(fg) = self.compose(f, g) else { continue };
                for h in 0..n {
                    let Some(gh) = self.compose(g, h) else { continue };
                    if self.compose(fg, h) != self.compose(f, gh) {
                        return Err(Error::groupoid(
                            "associativity failure",
                            format!("(`{}`·`{}`)·`{}` ≠ `{}`·(`{}`·`{}`)", name(f), name(g), name(h), name(f), name(g), name(h)),
                        ));
                    }
                }
            }
        }
        let units: BTreeSet<usize> = (0..n).map(|g| self.compose(g, self.inverse[g]).unwrap()).collect();
        let ids: BTreeSet<usize> = self.identity.iter().copied().collect();
        if units != ids || ids.len() != self.objects.len() {
            return Err(Error::groupoid("bad identity", "identity morphisms differ from {g·g⁻¹}"));
        }
        Ok(())
    }

    /// One-object groupoid of a finite group. `table[a][b]` is the index of `a·b`.
    pub fn from_group(elements: &[String], table: &[Vec<usize>]) -> Result<Groupoid> {
        let n = elements.len();
        if n == 0 || table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&c| c >= n)) {
            return Err(Error::groupoid("group table", "table must be a square array over the elements"));
        }
        let unit = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::groupoid("group identity", "no two-sided identity element"))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::groupoid(
                            "associativity failure",
                            format!("({}·{})·{} ≠ {}·({}·{})", elements[a], elements[b], elements[c], elements[a], elements[b], elements[c]),
                        ));
                    }
                }
            }
        }
        let mut inverse = BTreeMap::new();
        for a in 0..n {
            let b = (0..n)
                .find(|&b| table[a][b] == unit && table[b][a] == unit)
                .ok_or_else(|| Error::groupoid("bad inverse", format!("`{}` has no inverse", elements[a])))?;
            inverse.insert(elements[a].clone(), elements[b].clone());
        }
        let obj = elements[unit].clone();
        let raw = RawGroupoid {
            objects: vec![obj.clone()],
            morphisms: elements
                .iter()
                .map(|e| RawMorphism { id: e.clone(), src: obj.clone(), dst: obj.clone() })
                .collect(),
            identity: BTreeMap::from([(obj.clone(), obj)]),
            inverse,
            compose: (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .map(|(a, b)| [elements[a].clone(), elements[b].clone(), elements[table[a][b]].clone()])
                .collect(),
        };
        Groupoid::validate(&raw)
    }

    /// Cyclic group `Z_n` with elements `e, g, g2, …`.
    pub fn cyclic(n: usize) -> Result<Groupoid> {
        if n == 0 {
            return Err(Error::groupoid("group table", "cyclic group of order 0"));
        }
        let names: Vec<String> = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                k => format!("g{k}"),
            })
            .collect();
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Groupoid::from_group(&names, &table)
    }

    /// Pair groupoid on `n` objects `1..=n`; the morphism `(i,j)` goes from `j` to `i`.
    pub fn pair_groupoid(n: usize) -> Result<Groupoid> {
        Groupoid::pair_times_cyclic(n, 1, "")
    }

    /// Product of the pair groupoid on `n` objects with `Z_m`, identifiers prefixed by `prefix`.
    ///
    /// Every finite connected groupoid with cyclic isotropy is of this form.
    pub fn pair_times_cyclic(n: usize, m: usize, prefix: &str) -> Result<Groupoid> {
        if n == 0 || m == 0 {
            return Err(Error::InfeasibleBounds("pair groupoid needs at least one object".into()));
        }
        let obj = |i: usize| format!("{prefix}{i}");
        let mor = |i: usize, j: usize, k: usize| {
            if m == 1 {
                format!("{prefix}({i},{j})")
            } else {
                format!("{prefix}({i},{j};{k})")
            }
        };
        let mut raw = RawGroupoid::default();
        for i in 1..=n {
            raw.objects.push(obj(i));
            raw.identity.insert(obj(i), mor(i, i, 0));
            for j in 1..=n {
                for k in 0..m {
                    raw.morphisms.push(RawMorphism { id: mor(i, j, k), src: obj(j), dst: obj(i) });
                    raw.inverse.insert(mor(i, j, k), mor(j, i, (m - k) % m));
                    for l in 1..=n {
                        for k2 in 0..m {
                            raw.compose.push([mor(i, j, k), mor(j, l, k2), mor(i, l, (k + k2) % m)]);
                        }
                    }
                }
            }
        }
        Groupoid::validate(&raw)
    }

    /// Disjoint union; identifiers of the parts must not collide.
    pub fn disjoint_union(parts: &[Groupoid]) -> Result<Groupoid> {
        let mut raw = RawGroupoid::default();
        for p in parts {
            let r = p.to_raw();
            raw.objects.extend(r.objects);
            raw.morphisms.extend(r.morphisms);
            raw.identity.extend(r.identity);
            raw.inverse.extend(r.inverse);
            raw.compose.extend(r.compose);
        }
        Groupoid::validate(&raw)
    }

    /// Copy with every identifier prefixed.
    pub fn with_prefix(&self, prefix: &str) -> Groupoid {
        let p = |s: &String| format!("{prefix}{s}");
        let r = self.to_raw();
        let raw = RawGroupoid {
            objects: r.objects.iter().map(p).collect(),
            morphisms: r
                .morphisms
                .iter()
                .map(|m| RawMorphism { id: p(&m.id), src: p(&m.src), dst: p(&m.dst) })
                .collect(),
            identity: r.identity.iter().map(|(a, b)| (p(a), p(b))).collect(),
            inverse: r.inverse.iter().map(|(a, b)| (p(a), p(b))).collect(),
            compose: r.compose.iter().map(|[a, b, c]| [p(a), p(b), p(c)]).collect(),
        };
        Groupoid::validate(&raw).expect("relabelling preserves the axioms")
    }

    pub fn to_raw(&self) -> RawGroupoid {
        RawGroupoid {
            objects: self.objects.clone(),
            morphisms: (0..self.num_morphisms())
                .map(|g| RawMorphism {
                    id: self.morphisms[g].clone(),
                    src: self.objects[self.src[g]].clone(),
                    dst: self.objects[self.dst[g]].clone(),
                })
                .collect(),
            identity: (0..self.num_objects())
                .map(|e| (self.objects[e].clone(), self.morphisms[self.identity[e]].clone()))
                .collect(),
            inverse: (0..self.num_morphisms())
                .map(|g| (self.morphisms[g].clone(), self.morphisms[self.inverse[g]].clone()))
                .collect(),
            compose: self
                .composable_pairs()
                .into_iter()
                .map(|(g, h)| {
                    [
                        self.morphisms[g].clone(),
                        self.morphisms[h].clone(),
                        self.morphisms[self.compose(g, h).unwrap()].clone(),
                    ]
                })
                .collect(),
        }
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[String] {
        &self.morphisms
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        index_of(&self.objects, name).ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn morphism_index(&self, name: &str) -> Result<usize> {
        index_of(&self.morphisms, name).ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    }

    /// Source `s(g)`.
    #[inline]
    pub fn source(&self, g: usize) -> usize {
        self.src[g]
    }

    /// Range `r(g)`.
    #[inline]
    pub fn range(&self, g: usize) -> usize {
        self.dst[g]
    }

    #[inline]
    pub fn identity(&self, e: usize) -> usize {
        self.identity[e]
    }

    #[inline]
    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    #[inline]
    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        self.compose[g * self.morphisms.len() + h]
    }

    #[inline]
    pub fn is_unit(&self, g: usize) -> bool {
        self.identity[self.dst[g]] == g
    }

    pub fn units(&self) -> impl Iterator<Item = usize> + '_ {
        self.identity.iter().copied()
    }

    /// `G_e^e`, as morphism indices.
    pub fn isotropy(&self, e: usize) -> Vec<usize> {
        (0..self.num_morphisms())
            .filter(|&g| self.src[g] == e && self.dst[g] == e)
            .collect()
    }

    pub fn isotropy_group(&self, object: &str) -> Result<Vec<String>> {
        let e = self.object_index(object)?;
        Ok(self.isotropy(e).into_iter().map(|g| self.morphisms[g].clone()).collect())
    }

    /// `G² = {(g,h) : s(g) = r(h)}` in lexicographic order.
    pub fn composable_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.num_morphisms();
        (0..n)
            .flat_map(|g| (0..n).map(move |h| (g, h)))
            .filter(|&(g, h)| self.src[g] == self.dst[h])
            .collect()
    }

    /// Connected components of the object set (orbits of `G` acting on `G₀`).
    pub fn object_orbits(&self) -> Vec<BitSet> {
        let mut seen = BitSet::EMPTY;
        let mut out = Vec::new();
        for o in 0..self.num_objects() {
            if seen.contains(o) {
                continue;
            }
            let orbit: BitSet = (0..self.num_morphisms())
                .filter(|&g| self.src[g] == o)
                .map(|g| self.dst[g])
                .collect();
            seen = seen.union(orbit);
            out.push(orbit);
        }
        out
    }

    /// Morphism-index permutations that preserve source, range and composition.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let n = self.num_morphisms();
        let m = self.num_objects();
        let mut out = Vec::new();
        let mut perm = vec![usize::MAX; n];
        let mut obj_map = vec![usize::MAX; m];
        let mut used = vec![false; n];
        self.automorphism_search(0, &mut perm, &mut obj_map, &mut used, &mut out);
        out
    }

    fn automorphism_search(
        &self,
        g: usize,
        perm: &mut Vec<usize>,
        obj_map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = self.num_morphisms();
        if g == n {
            let ok = self.composable_pairs().into_iter().all(|(a, b)| {
                let ab = self.compose(a, b).unwrap();
                self.compose(perm[a], perm[b]) == Some(perm[ab])
            });
            if ok {
                out.push(perm.clone());
            }
            return;
        }
        for img in 0..n {
            if used[img] {
                continue;
            }
            let saved = obj_map.clone();
            if bind(obj_map, self.src[g], self.src[img]) && bind(obj_map, self.dst[g], self.dst[img]) {
                used[img] = true;
                perm[g] = img;
                self.automorphism_search(g + 1, perm, obj_map, used, out);
                used[img] = false;
                perm[g] = usize::MAX;
            }
            *obj_map = saved;
        }
    }

    /// Name lookup table for quick id → index resolution by callers.
    pub fn morphism_lookup(&self) -> HashMap<&str, usize> {
        self.morphisms.iter().enumerate().map(|(i, m)| (m.as_str(), i)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> Groupoid {
        Groupoid::cyclic(2).unwrap()
    }

    #[test]
    fn cyclic_two_is_valid() {
        let g = z2();
        assert_eq!(g.num_objects(), 1);
        assert_eq!(g.morphisms(), &["e".to_string(), "g".to_string()]);
        let gi = g.morphism_index("g").unwrap();
        assert_eq!(g.compose(gi, gi), Some(g.morphism_index("e").unwrap()));
    }

    #[test]
    fn pair_groupoid_two() {
        let g = Groupoid::pair_groupoid(2).unwrap();
        assert_eq!(g.num_morphisms(), 4);
        assert_eq!(g.units().count(), 2);
        assert_eq!(g.composable_pairs().len(), 8);
    }

    #[test]
    fn pair_groupoid_rejects_zero() {
        assert!(Groupoid::pair_groupoid(0).is_err());
        assert_eq!(Groupoid::pair_groupoid(1).unwrap().num_morphisms(), 1);
    }

    #[test]
    fn pair_groupoid_three_has_trivial_isotropy() {
        let g = Groupoid::pair_groupoid(3).unwrap();
        assert_eq!(g.num_morphisms(), 9);
        for o in g.objects() {
            assert_eq!(g.isotropy_group(o).unwrap().len(), 1);
        }
    }

    #[test]
    fn non_composable_product_rejected() {
        let mut raw = Groupoid::pair_groupoid(2).unwrap().to_raw();
        raw.compose.push(["(1,1)".into(), "(2,2)".into(), "(1,2)".into()]);
        match Groupoid::validate(&raw) {
            Err(Error::GroupoidAxiom { axiom, .. }) => assert_eq!(axiom, "non-composable product"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_product_rejected() {
        let mut raw = z2().to_raw();
        raw.compose.pop();
        assert!(matches!(
            Groupoid::validate(&raw),
            Err(Error::GroupoidAxiom { axiom: "missing product", .. })
        ));
    }

    #[test]
    fn non_associative_magma_rejected() {
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        // a is the identity, but (b·b)·c = c while b·(b·c) = b.
        let table = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]];
        assert!(Groupoid::from_group(&names, &table).is_err());
    }

    #[test]
    fn z3_from_table() {
        let g = Groupoid::cyclic(3).unwrap();
        assert_eq!(g.num_morphisms(), 3);
        assert_eq!(g.num_objects(), 1);
    }

    #[test]
    fn disjoint_union_isotropy_and_pairs() {
        let u = Groupoid::disjoint_union(&[z2().with_prefix("a"), Groupoid::pair_groupoid(2).unwrap()]).unwrap();
        assert_eq!(u.isotropy_group("ae").unwrap(), vec!["ae".to_string(), "ag".to_string()]);
        let two = Groupoid::disjoint_union(&[z2().with_prefix("a"), z2().with_prefix("b")]).unwrap();
        assert_eq!(two.composable_pairs().len(), 8);
        assert_eq!(two.object_orbits().len(), 2);
    }

    #[test]
    fn unknown_object_in_isotropy() {
        assert!(matches!(z2().isotropy_group("nope"), Err(Error::UnknownObject(_))));
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(Groupoid::cyclic(3).unwrap().automorphisms().len(), 2);
        assert_eq!(Groupoid::cyclic(4).unwrap().automorphisms().len(), 2);
        assert_eq!(Groupoid::pair_groupoid(2).unwrap().automorphisms().len(), 2);
        let v4 = {
            let names: Vec<String> = ["e", "a", "b", "c"].iter().map(|s| s.to_string()).collect();
            let t = (0..4).map(|x| (0..4).map(|y| x ^ y).collect()).collect::<Vec<Vec<usize>>>();
            Groupoid::from_group(&names, &t).unwrap()
        };
        assert_eq!(v4.automorphisms().len(), 6);
    }
}
