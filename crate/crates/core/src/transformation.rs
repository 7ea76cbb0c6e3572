//! The transformation groupoid `G ⋉_θ X` and its Steinberg algebra.
//!
//! Arrows are pairs `(g, x)` with `x ∈ X_{g⁻¹}`. Units `(e, x)` are identified
//! with the points `x` through `ρ`, so the objects of the underlying groupoid
//! carry the point identifiers.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::action::PartialAction;
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::groupoid::{Groupoid, RawGroupoid, RawMorphism};
use crate::field::PrimeField;
use crate::skew::SkewRing;

#[derive(Debug, Clone)]
pub struct TransGroupoid {
    groupoid: Groupoid,
    /// `(g, x)` for each morphism index of `groupoid`.
    arrows: Vec<(usize, usize)>,
    /// Morphism index of `(g, x)`.
    index: BTreeMap<(usize, usize), usize>,
    /// `factorizations[h]` lists every `(h1, h2)` with `h1 · h2 = h`.
    factorizations: Vec<Vec<(usize, usize)>>,
}

fn arrow_name(a: &PartialAction, g: usize, x: usize) -> String {
    format!("({},{})", a.groupoid().morphisms()[g], a.points()[x])
}

impl TransGroupoid {
    pub fn build(a: &PartialAction) -> Result<TransGroupoid> {
        let gd = a.groupoid();
        let mut pairs = Vec::new();
        for g in 0..gd.num_morphisms() {
            for x in a.domain(gd.inverse(g)).iter() {
                pairs.push((g, x));
            }
        }
        let name = |&(g, x): &(usize, usize)| arrow_name(a, g, x);
        let mut raw = RawGroupoid { objects: a.points().to_vec(), ..Default::default() };
        for &(g, x) in &pairs {
            let y = a.theta(g, x).unwrap();
            raw.morphisms.push(RawMorphism { id: name(&(g, x)), src: a.points()[x].clone(), dst: a.points()[y].clone() });
            raw.inverse.insert(name(&(g, x)), name(&(gd.inverse(g), y)));
            if gd.is_unit(g) {
                raw.identity.insert(a.points()[x].clone(), name(&(g, x)));
            }
        }
        // (v, y)(t, x) = (vt, x) when (v, t) is composable and θ_t(x) = y.
        for &(v, y) in &pairs {
            for &(t, x) in &pairs {
                if a.theta(t, x) != Some(y) {
                    continue;
                }
                if let Some(vt) = gd.compose(v, t) {
                    raw.compose.push([name(&(v, y)), name(&(t, x)), name(&(vt, x))]);
                }
            }
        }
        let groupoid = Groupoid::validate(&raw)?;
        let mut arrows = vec![(0, 0); pairs.len()];
        let mut index = BTreeMap::new();
        for &(g, x) in &pairs {
            let i = groupoid.morphism_index(&name(&(g, x)))?;
            arrows[i] = (g, x);
            index.insert((g, x), i);
        }
        let n = groupoid.num_morphisms();
        let mut factorizations = vec![Vec::new(); n];
        for (h1, h2) in groupoid.composable_pairs() {
            factorizations[groupoid.compose(h1, h2).unwrap()].push((h1, h2));
        }
        Ok(TransGroupoid { groupoid, arrows, index, factorizations })
    }

    pub fn groupoid(&self) -> &Groupoid {
        &self.groupoid
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    /// `(g, x)` for a morphism index.
    pub fn arrow(&self, i: usize) -> (usize, usize) {
        self.arrows[i]
    }

    pub fn arrow_index(&self, g: usize, x: usize) -> Option<usize> {
        self.index.get(&(g, x)).copied()
    }

    /// `ρ(x) = (e, x)` with `e` the unit over `x`, as a morphism index.
    pub fn rho(&self, x: usize) -> usize {
        self.groupoid.identity(x)
    }

    pub fn num_units(&self) -> usize {
        self.groupoid.num_objects()
    }

    /// Unit sets `D` (as object sets) with `s(γ) ∈ D ⇒ r(γ) ∈ D`, via orbits of the groupoid.
    pub fn invariant_unit_sets(&self) -> Vec<BitSet> {
        let orbits = self.groupoid.object_orbits();
        let mut out: Vec<BitSet> = (0u64..1 << orbits.len())
            .map(|sel| BitSet(sel).iter().fold(BitSet::EMPTY, |acc, i| acc.union(orbits[i])))
            .collect();
        out.sort();
        out
    }

    fn is_invariant_unit_set(&self, d: BitSet) -> bool {
        (0..self.groupoid.num_morphisms())
            .all(|h| !d.contains(self.groupoid.source(h)) || d.contains(self.groupoid.range(h)))
    }

    /// The restriction `𝒢_D` is effective: each isotropy arrow inside `D` is a unit.
    pub fn is_effective_on(&self, d: BitSet) -> bool {
        let gd = &self.groupoid;
        (0..gd.num_morphisms())
            .filter(|&h| gd.source(h) == gd.range(h) && d.contains(gd.source(h)))
            .all(|h| gd.is_unit(h))
    }

    pub fn is_effective(&self) -> bool {
        self.is_effective_on(BitSet::full(self.num_units()))
    }

    pub fn is_strongly_effective(&self) -> bool {
        self.invariant_unit_sets()
            .into_iter()
            .filter(|d| !d.is_empty())
            .all(|d| self.is_effective_on(d))
    }

    pub fn is_minimal_groupoid(&self) -> bool {
        let all = BitSet::full(self.num_units());
        self.invariant_unit_sets().into_iter().all(|d| d.is_empty() || d == all)
    }

    /// `s⁻¹(U) ∩ r⁻¹(V) ≠ ∅` for all nonempty `U, V`; singletons suffice on a discrete unit space.
    pub fn is_topologically_transitive_groupoid(&self) -> bool {
        let gd = &self.groupoid;
        let n = self.num_units();
        (0..n).all(|u| (0..n).all(|v| (0..gd.num_morphisms()).any(|h| gd.source(h) == u && gd.range(h) == v)))
    }

    /// Indicator of the unit space.
    pub fn unit_indicator(&self) -> Vec<u8> {
        let mut f = vec![0u8; self.num_arrows()];
        for u in self.groupoid.units() {
            f[u] = 1;
        }
        f
    }

    /// `(f1 * f2)(h) = Σ_{h = h1 h2} f1(h1) f2(h2)`.
    pub fn convolve(&self, field: PrimeField, f1: &[u8], f2: &[u8]) -> Result<Vec<u8>> {
        let n = self.num_arrows();
        if f1.len() != n || f2.len() != n {
            return Err(Error::DimensionMismatch { left: f1.len().max(f2.len()), right: n });
        }
        Ok(self
            .factorizations
            .iter()
            .map(|fs| fs.iter().fold(0, |acc, &(a, b)| field.add(acc, field.mul(f1[a], f2[b]))))
            .collect())
    }
}

/// The basis map `1_x δ_g ↦` point mass at `(g, θ_{g⁻¹}(x))`.
#[derive(Debug, Clone)]
pub struct SteinbergIso {
    /// Arrow index for each monomial index.
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub bijective: bool,
    pub multiplicative: bool,
    pub unit_preserving: bool,
    /// First failing basis pair, as monomial labels.
    pub witness: Option<String>,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.multiplicative && self.unit_preserving
    }
}

impl SteinbergIso {
    pub fn new(ring: &SkewRing, t: &TransGroupoid) -> Result<SteinbergIso> {
        if ring.dim() != t.num_arrows() {
            return Err(Error::DimensionMismatch { left: ring.dim(), right: t.num_arrows() });
        }
        let a = ring.action();
        let gd = a.groupoid();
        let map = ring
            .basis()
            .iter()
            .map(|&(g, x)| {
                let x0 = a.theta(gd.inverse(g), x).unwrap();
                t.arrow_index(g, x0).ok_or(Error::ContextMismatch)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SteinbergIso { map })
    }

    pub fn apply(&self, v: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; self.map.len()];
        for (i, &c) in v.iter().enumerate() {
            out[self.map[i]] = c;
        }
        out
    }

    pub fn check(&self, ring: &SkewRing, t: &TransGroupoid) -> IsoReport {
        let d = ring.dim();
        let k = ring.field();
        let mut seen = vec![false; d];
        for &a in &self.map {
            seen[a] = true;
        }
        let bijective = seen.iter().all(|&s| s);
        let unit = |i: usize| {
            let mut v = vec![0u8; d];
            v[i] = 1;
            v
        };
        let mut witness = None;
        'outer: for i in 0..d {
            for j in 0..d {
                let lhs = self.apply(&ring.mul_vec(&unit(i), &unit(j)));
                let rhs = t.convolve(k, &self.apply(&unit(i)), &self.apply(&unit(j))).unwrap();
                if lhs != rhs {
                    witness = Some(format!("{} · {}", ring.basis_label(i), ring.basis_label(j)));
                    break 'outer;
                }
            }
        }
        let unit_preserving = self.apply(&ring.to_vector(&ring.identity_element())) == t.unit_indicator();
        IsoReport { bijective, multiplicative: witness.is_none(), unit_preserving, witness }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CtsCheck {
    pub name: String,
    pub action_side: bool,
    pub groupoid_side: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CtsReport {
    pub checks: Vec<CtsCheck>,
}

impl CtsReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.action_side == c.groupoid_side)
    }

    pub fn failures(&self) -> Vec<&CtsCheck> {
        self.checks.iter().filter(|c| c.action_side != c.groupoid_side).collect()
    }
}

/// Compares dynamical properties of an action with those of its transformation groupoid.
pub fn check_cts(a: &PartialAction) -> Result<CtsReport> {
    let t = TransGroupoid::build(a)?;
    let mut checks = Vec::new();
    let mut push = |name: String, x: bool, y: bool| checks.push(CtsCheck { name, action_side: x, groupoid_side: y });
    push("minimal".into(), a.is_minimal(), t.is_minimal_groupoid());
    push("topologically transitive".into(), a.is_topologically_transitive(), t.is_topologically_transitive_groupoid());
    // Objects of the transformation groupoid are the points, so ρ is the identity on indices.
    let rho_image = |s: BitSet| -> BitSet { s.iter().map(|x| t.groupoid().source(t.rho(x))).collect() };
    let inv_x: Vec<BitSet> = a.invariant_subsets();
    let mut inv_x_image: Vec<BitSet> = inv_x.iter().map(|&s| rho_image(s)).collect();
    inv_x_image.sort();
    let inv_units = t.invariant_unit_sets();
    push("invariant sets correspond under rho".into(), true, inv_x_image == inv_units);
    for s in a.all_points().subsets() {
        let x_side = a.is_invariant(s);
        let u_side = t.is_invariant_unit_set(rho_image(s));
        if x_side != u_side {
            push(format!("invariance of {:?}", a.subset_names(s)), x_side, u_side);
        }
    }
    for &f in &inv_x {
        push(
            format!("free on {:?} vs effective restriction", a.subset_names(f)),
            a.is_topologically_free_on(f)?,
            t.is_effective_on(rho_image(f)),
        );
    }
    push("topologically free vs effective".into(), a.is_topologically_free(), t.is_effective());
    push(
        "residually topologically free vs strongly effective".into(),
        a.is_residually_topologically_free(),
        t.is_strongly_effective(),
    );
    Ok(CtsReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn sizes() {
        let b = TransGroupoid::build(&fixtures::fix_b()).unwrap();
        assert_eq!((b.num_arrows(), b.num_units()), (4, 2));
        let c = TransGroupoid::build(&fixtures::fix_c()).unwrap();
        assert_eq!(c.num_arrows(), 5);
        let one = fixtures::fix_a().restrict(BitSet::singleton(0)).unwrap();
        assert_eq!(TransGroupoid::build(&one).unwrap().num_units(), 1);
    }

    #[test]
    fn flags() {
        let (a, b, c) = (
            TransGroupoid::build(&fixtures::fix_a()).unwrap(),
            TransGroupoid::build(&fixtures::fix_b()).unwrap(),
            TransGroupoid::build(&fixtures::fix_c()).unwrap(),
        );
        assert!(b.is_effective() && !a.is_effective());
        assert!(c.is_strongly_effective());
        assert!(b.is_minimal_groupoid() && b.is_topologically_transitive_groupoid());
        assert!(!c.is_minimal_groupoid() && !c.is_topologically_transitive_groupoid());
    }

    #[test]
    fn convolution_unit_and_swap() {
        let k = PrimeField::f2();
        let a = fixtures::fix_b();
        let t = TransGroupoid::build(&a).unwrap();
        let one = t.unit_indicator();
        for i in 0..t.num_arrows() {
            let mut f = vec![0u8; t.num_arrows()];
            f[i] = 1;
            assert_eq!(t.convolve(k, &one, &f).unwrap(), f);
            assert_eq!(t.convolve(k, &f, &one).unwrap(), f);
        }
        let g = a.groupoid().morphism_index("g").unwrap();
        let (x1, x2) = (t.arrow_index(g, 0).unwrap(), t.arrow_index(g, 1).unwrap());
        let mut f1 = vec![0u8; 4];
        f1[x1] = 1;
        let mut f2 = vec![0u8; 4];
        f2[x2] = 1;
        // (g, x1)(g, x2) is defined since θ_g(x2) = x1, giving (e, x2).
        let prod = t.convolve(k, &f1, &f2).unwrap();
        let mut expect = vec![0u8; 4];
        expect[t.arrow_index(0, 1).unwrap()] = 1;
        assert_eq!(prod, expect);
    }

    #[test]
    fn iso_on_fixtures() {
        for a in [fixtures::fix_a(), fixtures::fix_b(), fixtures::fix_c(), fixtures::fix_d()] {
            let s = SkewRing::new(a.clone(), PrimeField::f2());
            let t = TransGroupoid::build(&a).unwrap();
            let iso = SteinbergIso::new(&s, &t).unwrap();
            assert!(iso.check(&s, &t).passed());
        }
    }

    #[test]
    fn cts_on_fixtures() {
        for a in [fixtures::fix_a(), fixtures::fix_b(), fixtures::fix_c(), fixtures::fix_d()] {
            let r = check_cts(&a).unwrap();
            assert!(r.all_pass(), "{:?}", r.failures());
        }
        let r = check_cts(&fixtures::fix_a()).unwrap();
        let eff = r.checks.iter().find(|c| c.name == "topologically free vs effective").unwrap();
        assert!(!eff.action_side && !eff.groupoid_side);
    }
}
