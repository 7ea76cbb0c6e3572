//! Partial actions of a finite groupoid on a finite discrete point set.
//!
//! Every subset of a finite discrete space is clopen, so "closed invariant"
//! collapses to "invariant", interiors are the sets themselves, and the
//! clopen-domain hypotheses of the topological theory hold automatically.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bitset::{BitSet, MAX_UNIVERSE};
use crate::error::{Error, Result};
use crate::groupoid::{Groupoid, RawGroupoid};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPoint {
    pub id: String,
    pub unit: String,
}

/// Unvalidated action description, mirroring the JSON exchange format.
///
/// `map[g]` lists `θ_g` on `X_{g⁻¹}`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RawAction {
    pub groupoid: RawGroupoid,
    pub points: Vec<RawPoint>,
    pub domain: BTreeMap<String, Vec<String>>,
    pub map: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialAction {
    groupoid: Groupoid,
    points: Vec<String>,
    /// Object index of the unit block each point lies in.
    unit: Vec<usize>,
    /// `X_g` for every morphism.
    domain: Vec<BitSet>,
    /// `theta[g][x]` is `θ_g(x)` for `x ∈ X_{g⁻¹}`.
    theta: Vec<Vec<Option<usize>>>,
}

/// A global action in fibred form: an anchor `X → G₀` and a total action on
/// the pairs `(g, x)` with `anchor(x) = s(g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibredAction {
    pub groupoid: Groupoid,
    pub points: Vec<String>,
    pub anchor: Vec<usize>,
    /// `act[g][x] = g·x`, defined exactly when `anchor[x] = s(g)`.
    pub act: Vec<Vec<Option<usize>>>,
}

impl PartialAction {
    pub fn validate(raw: &RawAction) -> Result<PartialAction> {
        let groupoid = Groupoid::validate(&raw.groupoid)?;
        let mut pts: Vec<(&str, &str)> = raw.points.iter().map(|p| (p.id.as_str(), p.unit.as_str())).collect();
        pts.sort();
        for w in pts.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::action("unique identifiers", format!("duplicate point `{}`", w[0].0)));
            }
        }
        if pts.len() > MAX_UNIVERSE {
            return Err(Error::TooLarge(format!("{} points, the limit is {MAX_UNIVERSE}", pts.len())));
        }
        let points: Vec<String> = pts.iter().map(|p| p.0.to_string()).collect();
        let unit = pts.iter().map(|p| groupoid.object_index(p.1)).collect::<Result<Vec<_>>>()?;
        let point = |name: &str| {
            points
                .binary_search_by(|p| p.as_str().cmp(name))
                .map_err(|_| Error::UnknownPoint(name.to_string()))
        };

        let n = groupoid.num_morphisms();
        let mut domain = vec![BitSet::EMPTY; n];
        for (g, xs) in &raw.domain {
            let g = groupoid.morphism_index(g)?;
            for x in xs {
                domain[g] = domain[g].with(point(x)?);
            }
        }
        let mut theta = vec![vec![None; points.len()]; n];
        for (g, m) in &raw.map {
            let g = groupoid.morphism_index(g)?;
            for (x, y) in m {
                theta[g][point(x)?] = Some(point(y)?);
            }
        }
        let a = PartialAction { groupoid, points, unit, domain, theta };
        a.check_axioms()?;
        Ok(a)
    }

    fn check_axioms(&self) -> Result<()> {
        let g_ = &self.groupoid;
        let mname = |g: usize| g_.morphisms()[g].as_str();
        let pname = |x: usize| self.points[x].as_str();

        for e in 0..g_.num_objects() {
            let block: BitSet = (0..self.points.len()).filter(|&x| self.unit[x] == e).collect();
            let u = g_.identity(e);
            if self.domain[u] != block {
                return Err(Error::action(
                    "unit blocks",
                    format!("X_{} must be the set of points labelled with unit `{}`", mname(u), g_.objects()[e]),
                ));
            }
        }
        for g in 0..g_.num_morphisms() {
            let r = g_.identity(g_.range(g));
            if !self.domain[g].is_subset(self.domain[r]) {
                let x = self.domain[g].difference(self.domain[r]).first().unwrap();
                return Err(Error::action(
                    "domain containment",
                    format!("point `{}` lies in X_{} but not in X_{}", pname(x), mname(g), mname(r)),
                ));
            }
        }
        for g in 0..g_.num_morphisms() {
            let dom = self.domain[g_.inverse(g)];
            let mut image = BitSet::EMPTY;
            for x in 0..self.points.len() {
                match (dom.contains(x), self.theta[g][x]) {
                    (true, Some(y)) => {
                        if image.contains(y) || !self.domain[g].contains(y) {
                            return Err(Error::action(
                                "not a bijection",
                                format!("θ_{} is not a bijection X_{} → X_{} (at point `{}`)", mname(g), mname(g_.inverse(g)), mname(g), pname(x)),
                            ));
                        }
                        image = image.with(y);
                    }
                    (false, None) => {}
                    _ => {
                        return Err(Error::action(
                            "not a bijection",
                            format!("θ_{} must be defined exactly on X_{} (point `{}`)", mname(g), mname(g_.inverse(g)), pname(x)),
                        ))
                    }
                }
            }
            if image != self.domain[g] {
                return Err(Error::action(
                    "not a bijection",
                    format!("θ_{} does not map onto X_{}", mname(g), mname(g)),
                ));
            }
        }
        for g in 0..g_.num_morphisms() {
            let gi = g_.inverse(g);
            for x in self.domain[gi].iter() {
                let y = self.theta[g][x].unwrap();
                if self.theta[gi][y] != Some(x) {
                    return Err(Error::action(
                        "inverse",
                        format!("θ_{} is not inverse to θ_{} at point `{}`", mname(gi), mname(g), pname(x)),
                    ));
                }
            }
            if g_.is_unit(g) && self.domain[g].iter().any(|x| self.theta[g][x] != Some(x)) {
                return Err(Error::action("unit acts trivially", format!("θ_{} is not the identity", mname(g))));
            }
        }
        for (g, h) in g_.composable_pairs() {
            let gh = g_.compose(g, h).unwrap();
            let ghi = g_.inverse(gh);
            for x in self.domain[g_.inverse(h)].iter() {
                let y = self.theta[h][x].unwrap();
                if !self.domain[g_.inverse(g)].contains(y) {
                    continue;
                }
                if !self.domain[ghi].contains(x) {
                    return Err(Error::action(
                        "composition domain",
                        format!("θ_{}⁻¹(X_{}⁻¹ ∩ X_{}) ⊄ X_({}{})⁻¹, witness `{}`", mname(h), mname(g), mname(h), mname(g), mname(h), pname(x)),
                    ));
                }
                if self.theta[g][y] != self.theta[gh][x] {
                    return Err(Error::action(
                        "composition",
                        format!("θ_{}θ_{} ≠ θ_{} at point `{}`", mname(g), mname(h), mname(gh), pname(x)),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn to_raw(&self) -> RawAction {
        let g_ = &self.groupoid;
        RawAction {
            groupoid: g_.to_raw(),
            points: (0..self.points.len())
                .map(|x| RawPoint { id: self.points[x].clone(), unit: g_.objects()[self.unit[x]].clone() })
                .collect(),
            domain: (0..g_.num_morphisms())
                .map(|g| (g_.morphisms()[g].clone(), self.domain[g].iter().map(|x| self.points[x].clone()).collect()))
                .collect(),
            map: (0..g_.num_morphisms())
                .map(|g| {
                    let m = self.domain[g_.inverse(g)]
                        .iter()
                        .map(|x| (self.points[x].clone(), self.points[self.theta[g][x].unwrap()].clone()))
                        .collect();
                    (g_.morphisms()[g].clone(), m)
                })
                .collect(),
        }
    }

    pub fn groupoid(&self) -> &Groupoid {
        &self.groupoid
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn all_points(&self) -> BitSet {
        BitSet::full(self.points.len())
    }

    pub fn point_index(&self, name: &str) -> Result<usize> {
        self.points
            .binary_search_by(|p| p.as_str().cmp(name))
            .map_err(|_| Error::UnknownPoint(name.to_string()))
    }

    pub fn subset_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<BitSet> {
        names.iter().map(|n| self.point_index(n.as_ref())).collect()
    }

    pub fn subset_names(&self, s: BitSet) -> Vec<String> {
        s.iter().map(|x| self.points[x].clone()).collect()
    }

    /// Object index of the unit block containing `x`.
    pub fn unit_of(&self, x: usize) -> usize {
        self.unit[x]
    }

    /// `X_g`.
    pub fn domain(&self, g: usize) -> BitSet {
        self.domain[g]
    }

    /// `θ_g(x)`, defined for `x ∈ X_{g⁻¹}`.
    #[inline]
    pub fn theta(&self, g: usize, x: usize) -> Option<usize> {
        self.theta[g][x]
    }

    /// `θ_g(S ∩ X_{g⁻¹})`.
    pub fn image(&self, g: usize, s: BitSet) -> BitSet {
        s.intersection(self.domain[self.groupoid.inverse(g)])
            .iter()
            .map(|x| self.theta[g][x].unwrap())
            .collect()
    }

    pub fn is_global(&self) -> bool {
        let g_ = &self.groupoid;
        (0..g_.num_morphisms()).all(|g| self.domain[g] == self.domain[g_.identity(g_.range(g))])
    }

    pub fn to_fibred(&self) -> Result<FibredAction> {
        let g_ = &self.groupoid;
        if let Some(g) = (0..g_.num_morphisms()).find(|&g| self.domain[g] != self.domain[g_.identity(g_.range(g))]) {
            return Err(Error::NotGlobal {
                morphism: g_.morphisms()[g].clone(),
                unit: g_.morphisms()[g_.identity(g_.range(g))].clone(),
            });
        }
        Ok(FibredAction {
            groupoid: g_.clone(),
            points: self.points.clone(),
            anchor: self.unit.clone(),
            act: self.theta.clone(),
        })
    }

    pub fn from_fibred(f: &FibredAction) -> Result<PartialAction> {
        let g_ = &f.groupoid;
        let np = f.points.len();
        if f.anchor.len() != np || f.act.len() != g_.num_morphisms() || f.act.iter().any(|r| r.len() != np) {
            return Err(Error::Format("fibred action tables have the wrong shape".into()));
        }
        if f.points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Format("fibred action points must be sorted and unique".into()));
        }
        for g in 0..g_.num_morphisms() {
            for x in 0..np {
                let defined = f.anchor[x] == g_.source(g);
                match f.act[g][x] {
                    Some(y) if defined => {
                        if f.anchor[y] != g_.range(g) {
                            return Err(Error::action("anchor", format!("anchor of {}·{} is not r({})", g_.morphisms()[g], f.points[x], g_.morphisms()[g])));
                        }
                    }
                    None if !defined => {}
                    _ => return Err(Error::action("fibred domain", format!("{}·{} defined off the fibre", g_.morphisms()[g], f.points[x]))),
                }
            }
        }
        let domain = (0..g_.num_morphisms())
            .map(|g| (0..np).filter(|&x| f.anchor[x] == g_.range(g)).collect())
            .collect();
        let a = PartialAction {
            groupoid: g_.clone(),
            points: f.points.clone(),
            unit: f.anchor.clone(),
            domain,
            theta: f.act.clone(),
        };
        a.check_axioms()?;
        Ok(a)
    }

    /// `{θ_g(x) : x ∈ X_{g⁻¹}}`.
    pub fn orbit(&self, x: usize) -> BitSet {
        let g_ = &self.groupoid;
        (0..g_.num_morphisms()).filter_map(|g| self.theta[g][x]).collect()
    }

    pub fn orbit_of(&self, name: &str) -> Result<BitSet> {
        Ok(self.orbit(self.point_index(name)?))
    }

    /// The orbit partition, ordered by least point.
    pub fn orbits(&self) -> Vec<BitSet> {
        let mut seen = BitSet::EMPTY;
        let mut out = Vec::new();
        for x in 0..self.num_points() {
            if !seen.contains(x) {
                let o = self.orbit(x);
                seen = seen.union(o);
                out.push(o);
            }
        }
        out
    }

    /// `θ_g(X_{g⁻¹} ∩ M) ⊆ M` for all `g`.
    pub fn is_invariant(&self, m: BitSet) -> bool {
        (0..self.groupoid.num_morphisms()).all(|g| self.image(g, m).is_subset(m))
    }

    /// All invariant subsets, as unions of orbits, in increasing mask order.
    pub fn invariant_subsets(&self) -> Vec<BitSet> {
        let orbits = self.orbits();
        let mut out: Vec<BitSet> = (0u64..1 << orbits.len())
            .map(|sel| {
                BitSet(sel)
                    .iter()
                    .fold(BitSet::EMPTY, |acc, i| acc.union(orbits[i]))
            })
            .collect();
        out.sort();
        out
    }

    /// No invariant subsets besides `∅` and `X`.
    pub fn is_minimal(&self) -> bool {
        let all = self.all_points();
        self.invariant_subsets().iter().all(|&m| m.is_empty() || m == all)
    }

    /// Singleton criterion: every `y` is reachable from every `x`.
    ///
    /// On a discrete space this is equivalent to the open-set definition: if
    /// nonempty `U`, `V` are given, pick `x ∈ U`, `y ∈ V`; conversely take
    /// `U = {x}`, `V = {y}`.
    pub fn is_topologically_transitive(&self) -> bool {
        let all = self.all_points();
        (0..self.num_points()).all(|x| self.orbit(x) == all)
    }

    /// `{x ∈ X_{t⁻¹} : θ_t(x) = x}`.
    pub fn fixed_points(&self, t: usize) -> BitSet {
        self.domain[self.groupoid.inverse(t)]
            .iter()
            .filter(|&x| self.theta[t][x] == Some(x))
            .collect()
    }

    /// Non-unit isotropy has no fixed points inside `F`.
    pub fn is_topologically_free_on(&self, f: BitSet) -> Result<bool> {
        if !f.is_subset(self.all_points()) {
            return Err(Error::NotASubset);
        }
        let g_ = &self.groupoid;
        Ok((0..g_.num_objects()).all(|u| {
            g_.isotropy(u)
                .into_iter()
                .filter(|&t| !g_.is_unit(t))
                .all(|t| self.fixed_points(t).intersection(f).is_empty())
        }))
    }

    pub fn is_topologically_free(&self) -> bool {
        self.is_topologically_free_on(self.all_points()).unwrap()
    }

    pub fn is_residually_topologically_free(&self) -> bool {
        self.invariant_subsets()
            .into_iter()
            .all(|f| self.is_topologically_free_on(f).unwrap())
    }

    /// Restriction to an invariant subset `M`, keeping point names.
    pub fn restrict(&self, m: BitSet) -> Result<PartialAction> {
        if !m.is_subset(self.all_points()) {
            return Err(Error::NotASubset);
        }
        if !self.is_invariant(m) {
            return Err(Error::NotInvariant(format!("{:?}", self.subset_names(m))));
        }
        let keep: Vec<usize> = m.iter().collect();
        let mut new_index = vec![usize::MAX; self.num_points()];
        for (i, &x) in keep.iter().enumerate() {
            new_index[x] = i;
        }
        let remap = |s: BitSet| -> BitSet { s.intersection(m).iter().map(|x| new_index[x]).collect() };
        Ok(PartialAction {
            groupoid: self.groupoid.clone(),
            points: keep.iter().map(|&x| self.points[x].clone()).collect(),
            unit: keep.iter().map(|&x| self.unit[x]).collect(),
            domain: self.domain.iter().map(|&d| remap(d)).collect(),
            theta: self
                .theta
                .iter()
                .map(|row| keep.iter().map(|&x| row[x].map(|y| new_index[y])).collect())
                .collect(),
        })
    }

    /// Whether some bijection of points (keeping the groupoid fixed) carries
    /// `self` onto `other`.
    pub fn is_isomorphic_by_points(&self, other: &PartialAction) -> bool {
        if self.groupoid != other.groupoid || self.num_points() != other.num_points() {
            return false;
        }
        let mut perm = vec![usize::MAX; self.num_points()];
        let mut used = vec![false; self.num_points()];
        self.match_points(other, 0, &mut perm, &mut used)
    }

    fn match_points(&self, other: &PartialAction, x: usize, perm: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let n = self.num_points();
        if x == n {
            return (0..self.groupoid.num_morphisms()).all(|g| {
                (0..n).all(|y| self.theta[g][y].map(|z| perm[z]) == other.theta[g][perm[y]])
            });
        }
        for y in 0..n {
            if used[y] || self.unit[x] != other.unit[y] {
                continue;
            }
            used[y] = true;
            perm[x] = y;
            if self.match_points(other, x + 1, perm, used) {
                return true;
            }
            used[y] = false;
        }
        false
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::fixtures;

    fn bs(a: &PartialAction, names: &[&str]) -> BitSet {
        a.subset_from_names(names).unwrap()
    }

    #[test]
    fn fixture_validation() {
        fixtures::fix_a();
        assert!(fixtures::fix_b().is_global());
        assert!(!fixtures::fix_c().is_global());
        fixtures::fix_d();
    }

    #[test]
    fn non_bijective_map_rejected() {
        let mut raw = fixtures::fix_c().to_raw();
        raw.domain.insert("g".into(), vec!["x1".into()]);
        raw.map.insert("g".into(), BTreeMap::from([("x1".into(), "x1".into()), ("x2".into(), "x2".into())]));
        match PartialAction::validate(&raw) {
            Err(Error::ActionAxiom { axiom, .. }) => assert_eq!(axiom, "not a bijection"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn composition_failure_rejected() {
        // Z3 acting with θ_g a 3-cycle but θ_g2 the same 3-cycle.
        let g = Groupoid::cyclic(3).unwrap();
        let mut raw = RawAction { groupoid: g.to_raw(), ..Default::default() };
        for x in ["x1", "x2", "x3"] {
            raw.points.push(RawPoint { id: x.into(), unit: "e".into() });
        }
        let all: Vec<String> = ["x1", "x2", "x3"].iter().map(|s| s.to_string()).collect();
        let cyc = BTreeMap::from([("x1".into(), "x2".into()), ("x2".into(), "x3".into()), ("x3".into(), "x1".into())]);
        let inv = BTreeMap::from([("x2".into(), "x1".into()), ("x3".into(), "x2".into()), ("x1".into(), "x3".into())]);
        for m in ["e", "g", "g2"] {
            raw.domain.insert(m.into(), all.clone());
        }
        raw.map.insert("e".into(), all.iter().map(|x| (x.clone(), x.clone())).collect());
        raw.map.insert("g".into(), cyc.clone());
        raw.map.insert("g2".into(), inv.clone());
        PartialAction::validate(&raw).unwrap();
        raw.map.insert("g2".into(), cyc);
        assert!(PartialAction::validate(&raw).is_err());
    }

    #[test]
    fn orbits_and_invariants() {
        let c = fixtures::fix_c();
        assert_eq!(c.orbit_of("x1").unwrap(), bs(&c, &["x1", "x2"]));
        assert_eq!(c.orbit_of("x3").unwrap(), bs(&c, &["x3"]));
        assert_eq!(
            c.invariant_subsets(),
            vec![BitSet::EMPTY, bs(&c, &["x1", "x2"]), bs(&c, &["x3"]), c.all_points()]
        );
        let d = fixtures::fix_d();
        assert_eq!(d.orbit_of("a").unwrap(), bs(&d, &["a", "b"]));
        assert_eq!(fixtures::fix_b().invariant_subsets().len(), 2);
    }

    #[test]
    fn dynamics_flags() {
        let (a, b, c, d) = (fixtures::fix_a(), fixtures::fix_b(), fixtures::fix_c(), fixtures::fix_d());
        assert!(b.is_minimal() && b.is_topologically_transitive());
        assert!(!c.is_minimal() && !c.is_topologically_transitive());
        let g = b.groupoid().morphism_index("g").unwrap();
        assert!(b.fixed_points(g).is_empty());
        assert_eq!(a.fixed_points(g), a.all_points());
        assert!(b.is_topologically_free_on(b.all_points()).unwrap());
        assert!(!a.is_topologically_free_on(a.all_points()).unwrap());
        assert!(a.is_topologically_free_on(BitSet::EMPTY).unwrap());
        assert!(c.is_residually_topologically_free());
        assert!(!a.is_residually_topologically_free());
        assert!(d.is_residually_topologically_free());
        assert!(a.is_topologically_free_on(BitSet::singleton(5)).is_err());
    }

    #[test]
    fn empty_action_is_minimal() {
        let e = fixtures::fix_b().restrict(BitSet::EMPTY).unwrap();
        assert!(e.is_minimal());
        assert!(e.is_topologically_transitive());
    }

    #[test]
    fn restriction() {
        let c = fixtures::fix_c();
        let r = c.restrict(bs(&c, &["x3"])).unwrap();
        assert_eq!(r.num_points(), 1);
        let g = r.groupoid().morphism_index("g").unwrap();
        assert!(r.domain(g).is_empty());
        assert_eq!(r.orbits(), vec![BitSet::singleton(0)]);
        let r2 = c.restrict(bs(&c, &["x1", "x2"])).unwrap();
        assert!(r2.is_isomorphic_by_points(&fixtures::fix_b()));
        assert_eq!(c.restrict(c.all_points()).unwrap(), c);
        assert!(matches!(c.restrict(bs(&c, &["x1"])), Err(Error::NotInvariant(_))));
    }

    #[test]
    fn fibred_round_trip() {
        let b = fixtures::fix_b();
        let f = b.to_fibred().unwrap();
        assert!(f.anchor.iter().all(|&e| e == 0));
        assert_eq!(PartialAction::from_fibred(&f).unwrap(), b);
        assert!(matches!(fixtures::fix_c().to_fibred(), Err(Error::NotGlobal { .. })));
    }

    #[test]
    fn raw_round_trip() {
        for a in [fixtures::fix_a(), fixtures::fix_b(), fixtures::fix_c(), fixtures::fix_d()] {
            assert_eq!(PartialAction::validate(&a.to_raw()).unwrap(), a);
        }
    }
}
