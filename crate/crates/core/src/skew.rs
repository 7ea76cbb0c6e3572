//! The partial skew groupoid ring `R ⋊_α G` over `F_p`.
//!
//! Elements are sparse over morphisms and dense over points. The ring also
//! carries a monomial basis `{1_x δ_g : x ∈ X_g}`; a product of two basis
//! monomials is again a basis monomial or zero, so fast arithmetic on
//! coordinate vectors goes through a precomputed table built from the literal
//! multiplication rule.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::action::PartialAction;
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::field::{FnElement, PrimeField};
use crate::fn_algebra::InducedAction;
use crate::linalg::Subspace;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SkewElement {
    field: PrimeField,
    n_points: usize,
    /// Nonzero components `a_g`, keyed by morphism index.
    comps: BTreeMap<usize, FnElement>,
}

impl SkewElement {
    pub fn zero(field: PrimeField, n_points: usize) -> SkewElement {
        SkewElement { field, n_points, comps: BTreeMap::new() }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// `Supp(s) = {g : a_g ≠ 0}`.
    pub fn support(&self) -> Vec<usize> {
        self.comps.keys().copied().collect()
    }

    pub fn components(&self) -> impl Iterator<Item = (usize, &FnElement)> {
        self.comps.iter().map(|(&g, f)| (g, f))
    }

    /// `a_g`.
    pub fn component(&self, g: usize) -> FnElement {
        self.comps.get(&g).cloned().unwrap_or_else(|| FnElement::zero(self.field, self.n_points))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.comps.len() <= 1
    }

    /// Adds `f δ_g`.
    pub fn add_term(&mut self, g: usize, f: &FnElement) -> Result<()> {
        if f.field() != self.field || f.len() != self.n_points {
            return Err(Error::ContextMismatch);
        }
        let sum = self.component(g).add(f)?;
        if sum.is_zero() {
            self.comps.remove(&g);
        } else {
            self.comps.insert(g, sum);
        }
        Ok(())
    }

    pub fn add(&self, other: &SkewElement) -> Result<SkewElement> {
        let mut out = self.clone();
        for (g, f) in other.components() {
            out.add_term(g, f)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SkewElement) -> Result<SkewElement> {
        self.add(&other.scale(self.field.neg(1)))
    }

    pub fn scale(&self, c: u8) -> SkewElement {
        let mut out = SkewElement::zero(self.field, self.n_points);
        for (g, f) in self.components() {
            let _ = out.add_term(g, &f.scale(c));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct SkewRing {
    ind: InducedAction,
    basis: Vec<(usize, usize)>,
    index: Vec<Vec<Option<usize>>>,
    table: Vec<Option<usize>>,
    units: Vec<bool>,
}

impl PartialEq for SkewRing {
    fn eq(&self, other: &Self) -> bool {
        self.ind == other.ind
    }
}

impl SkewRing {
    pub fn new(action: PartialAction, field: PrimeField) -> SkewRing {
        SkewRing::from_induced(InducedAction::new(action, field))
    }

    pub fn from_induced(ind: InducedAction) -> SkewRing {
        let a = ind.action();
        let gd = a.groupoid();
        let mut basis = Vec::new();
        let mut index = vec![vec![None; a.num_points()]; gd.num_morphisms()];
        for g in 0..gd.num_morphisms() {
            for x in a.domain(g).iter() {
                index[g][x] = Some(basis.len());
                basis.push((g, x));
            }
        }
        let units = basis.iter().map(|&(g, _)| gd.is_unit(g)).collect();
        let mut ring = SkewRing { ind, basis, index, table: Vec::new(), units };
        let d = ring.dim();
        let mut table = vec![None; d * d];
        for i in 0..d {
            for j in 0..d {
                let prod = ring
                    .multiply(&ring.basis_element(i), &ring.basis_element(j))
                    .expect("basis elements belong to the ring");
                table[i * d + j] = ring.monomial_of(&prod);
            }
        }
        ring.table = table;
        ring
    }

    /// Index of a product of two monomials, which is a monomial with coefficient 1 or zero.
    fn monomial_of(&self, s: &SkewElement) -> Option<usize> {
        let v = self.to_vector(s);
        let nz: Vec<usize> = (0..v.len()).filter(|&i| v[i] != 0).collect();
        match nz.as_slice() {
            [] => None,
            [i] if v[*i] == 1 => Some(*i),
            _ => panic!("product of monomials is not a monomial"),
        }
    }

    pub fn induced(&self) -> &InducedAction {
        &self.ind
    }

    pub fn action(&self) -> &PartialAction {
        self.ind.action()
    }

    pub fn field(&self) -> PrimeField {
        self.ind.field()
    }

    /// `Σ_g |X_g|`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The monomial basis as `(g, x)` pairs, meaning `1_x δ_g`.
    pub fn basis(&self) -> &[(usize, usize)] {
        &self.basis
    }

    pub fn basis_index(&self, g: usize, x: usize) -> Option<usize> {
        self.index[g][x]
    }

    pub fn is_unit_monomial(&self, i: usize) -> bool {
        self.units[i]
    }

    pub fn basis_label(&self, i: usize) -> String {
        let (g, x) = self.basis[i];
        format!("1_{}δ_{}", self.action().points()[x], self.action().groupoid().morphisms()[g])
    }

    pub fn zero(&self) -> SkewElement {
        SkewElement::zero(self.field(), self.action().num_points())
    }

    pub fn basis_element(&self, i: usize) -> SkewElement {
        let (g, x) = self.basis[i];
        self.monomial(g, self.ind.indicator(BitSet::singleton(x))).unwrap()
    }

    /// `f δ_g`, checking `f ∈ D_g`.
    pub fn monomial(&self, g: usize, f: FnElement) -> Result<SkewElement> {
        let mut s = self.zero();
        s.add_term(g, &f)?;
        self.check(&s)?;
        Ok(s)
    }

    /// Support condition and context of an element.
    pub fn check(&self, s: &SkewElement) -> Result<()> {
        if s.field != self.field() || s.n_points != self.action().num_points() {
            return Err(Error::ContextMismatch);
        }
        for (g, f) in s.components() {
            if g >= self.action().groupoid().num_morphisms() || !f.support().is_subset(self.ind.d(g)) {
                return Err(Error::ContextMismatch);
            }
        }
        Ok(())
    }

    /// `a_g δ_g · b_h δ_h = α_g(α_{g⁻¹}(a_g) b_h) δ_{gh}` for composable `(g, h)`, else `0`.
    pub fn multiply(&self, a: &SkewElement, b: &SkewElement) -> Result<SkewElement> {
        self.check(a)?;
        self.check(b)?;
        let gd = self.action().groupoid();
        let mut out = self.zero();
        for (g, ag) in a.components() {
            let back = self.ind.alpha(gd.inverse(g), ag)?;
            for (h, bh) in b.components() {
                let Some(gh) = gd.compose(g, h) else { continue };
                let inner = back.mul(bh)?;
                out.add_term(gh, &self.ind.alpha(g, &inner)?)?;
            }
        }
        Ok(out)
    }

    pub fn to_vector(&self, s: &SkewElement) -> Vec<u8> {
        let mut v = vec![0u8; self.dim()];
        for (g, f) in s.components() {
            for x in f.support().iter() {
                v[self.index[g][x].expect("element satisfies the support condition")] = f.get(x);
            }
        }
        v
    }

    pub fn from_vector(&self, v: &[u8]) -> SkewElement {
        let mut s = self.zero();
        let n = self.action().num_points();
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                let (g, x) = self.basis[i];
                let mut f = FnElement::zero(self.field(), n);
                f.set(x, c);
                s.add_term(g, &f).unwrap();
            }
        }
        s
    }

    /// Product of monomials `i·j` as a basis index.
    #[inline]
    pub fn monomial_product(&self, i: usize, j: usize) -> Option<usize> {
        self.table[i * self.dim() + j]
    }

    /// Product of coordinate vectors through the monomial table.
    pub fn mul_vec(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let k = self.field();
        let mut out = vec![0u8; self.dim()];
        for (i, &ca) in a.iter().enumerate().filter(|(_, &c)| c != 0) {
            for (j, &cb) in b.iter().enumerate().filter(|(_, &c)| c != 0) {
                if let Some(t) = self.monomial_product(i, j) {
                    out[t] = k.add(out[t], k.mul(ca, cb));
                }
            }
        }
        out
    }

    /// `m_i · v`.
    pub fn left_monomial(&self, i: usize, v: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; self.dim()];
        for (j, &c) in v.iter().enumerate() {
            if c != 0 {
                if let Some(t) = self.monomial_product(i, j) {
                    out[t] = self.field().add(out[t], c);
                }
            }
        }
        out
    }

    /// `v · m_j`.
    pub fn right_monomial(&self, v: &[u8], j: usize) -> Vec<u8> {
        let mut out = vec![0u8; self.dim()];
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                if let Some(t) = self.monomial_product(i, j) {
                    out[t] = self.field().add(out[t], c);
                }
            }
        }
        out
    }

    /// `Σ_{e ∈ G₀} 1_{X_e} δ_e`.
    pub fn identity_element(&self) -> SkewElement {
        let gd = self.action().groupoid();
        let mut s = self.zero();
        for e in gd.units() {
            s.add_term(e, &self.ind.unit_of_d(e)).unwrap();
        }
        s
    }

    /// `A = ⊕_{e ∈ G₀} D_e δ_e` as a subspace of coordinates.
    pub fn a_subspace(&self) -> Subspace {
        let d = self.dim();
        Subspace::span(
            self.field(),
            d,
            (0..d).filter(|&i| self.units[i]).map(|i| {
                let mut v = vec![0u8; d];
                v[i] = 1;
                v
            }),
        )
    }

    /// `D_g δ_g` as a subspace of coordinates.
    pub fn homogeneous_subspace(&self, g: usize) -> Subspace {
        let d = self.dim();
        Subspace::span(
            self.field(),
            d,
            self.ind.d(g).iter().map(|x| {
                let mut v = vec![0u8; d];
                v[self.index[g][x].unwrap()] = 1;
                v
            }),
        )
    }

    /// `P₀(Σ a_g δ_g) = Σ_{e ∈ G₀} a_e`.
    pub fn p0(&self, s: &SkewElement) -> FnElement {
        let gd = self.action().groupoid();
        s.components()
            .filter(|&(g, _)| gd.is_unit(g))
            .fold(FnElement::zero(self.field(), s.n_points), |acc, (_, f)| acc.add(f).unwrap())
    }

    /// `ψ(f) = Σ_e (f·1_{X_e}) δ_e`.
    pub fn psi(&self, f: &FnElement) -> Result<SkewElement> {
        let gd = self.action().groupoid();
        let mut s = self.zero();
        for e in gd.units() {
            s.add_term(e, &f.mul(&self.ind.unit_of_d(e))?)?;
        }
        Ok(s)
    }

    /// `E = ψ ∘ P₀`.
    pub fn e_map(&self, s: &SkewElement) -> SkewElement {
        self.psi(&self.p0(s)).unwrap()
    }

    /// `τ(Σ a_g δ_g) = Σ a_g`.
    pub fn tau(&self, s: &SkewElement) -> FnElement {
        s.components()
            .fold(FnElement::zero(self.field(), s.n_points), |acc, (_, f)| acc.add(f).unwrap())
    }

    /// An idempotent `u ∈ A` with `u s = s = s u` for every `s` in `elems`.
    pub fn s_unit(&self, elems: &[SkewElement]) -> Result<SkewElement> {
        let gd = self.action().groupoid();
        let mut pts = BitSet::EMPTY;
        for s in elems {
            self.check(s)?;
            for (g, f) in s.components() {
                for x in f.support().iter() {
                    pts = pts.with(x).with(self.action().theta(gd.inverse(g), x).unwrap());
                }
            }
        }
        self.psi(&self.ind.indicator(pts))
    }

    /// JSON form `{"modulus": p, "components": {"g": {"x": c}}}`.
    pub fn element_to_json(&self, s: &SkewElement) -> Value {
        let a = self.action();
        let mut comps = Map::new();
        for (g, f) in s.components() {
            let m: Map<String, Value> = f
                .support()
                .iter()
                .map(|x| (a.points()[x].clone(), json!(f.get(x))))
                .collect();
            comps.insert(a.groupoid().morphisms()[g].clone(), Value::Object(m));
        }
        json!({"modulus": self.field().p(), "components": comps})
    }

    pub fn element_from_json(&self, v: &Value) -> Result<SkewElement> {
        let bad = || Error::Format("skew element must be {\"modulus\": p, \"components\": {g: {x: c}}}".into());
        if v.get("modulus").and_then(Value::as_u64) != Some(self.field().p() as u64) {
            return Err(Error::ContextMismatch);
        }
        let comps = v.get("components").and_then(Value::as_object).ok_or_else(bad)?;
        let a = self.action();
        let mut s = self.zero();
        for (g, m) in comps {
            let g = a.groupoid().morphism_index(g)?;
            let mut f = FnElement::zero(self.field(), a.num_points());
            for (x, c) in m.as_object().ok_or_else(bad)? {
                let c = c.as_i64().ok_or_else(bad)?;
                f.set(a.point_index(x)?, self.field().reduce(c));
            }
            s.add_term(g, &f)?;
        }
        self.check(&s)?;
        Ok(s)
    }

    /// The short exact sequence `0 → J⋊G → R⋊G → (R/J)⋊G → 0` for `J = ℐ(U)`.
    pub fn quotient_skew_ring(&self, u: BitSet) -> Result<QuotientSequence> {
        let a = self.action();
        if !u.is_subset(a.all_points()) {
            return Err(Error::NotASubset);
        }
        if !a.is_invariant(u) {
            return Err(Error::NotInvariant(format!("{:?}", a.subset_names(u))));
        }
        let rest = a.all_points().difference(u);
        let quotient = SkewRing::new(a.restrict(rest)?, self.field());
        let kernel = SkewRing::new(a.restrict(u)?, self.field());
        let position = |s: BitSet, x: usize| s.iter().position(|y| y == x).unwrap();
        let projection = self
            .basis
            .iter()
            .map(|&(g, x)| (!u.contains(x)).then(|| quotient.index[g][position(rest, x)].unwrap()))
            .collect();
        let embedding = kernel
            .basis
            .iter()
            .map(|&(g, x)| self.index[g][u.iter().nth(x).unwrap()].unwrap())
            .collect();
        Ok(QuotientSequence { quotient, kernel, projection, embedding })
    }
}

/// Projection `π` onto the quotient skew ring and embedding `ι` of the kernel.
#[derive(Debug, Clone)]
pub struct QuotientSequence {
    pub quotient: SkewRing,
    pub kernel: SkewRing,
    projection: Vec<Option<usize>>,
    embedding: Vec<usize>,
}

impl QuotientSequence {
    pub fn project(&self, v: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; self.quotient.dim()];
        for (i, &c) in v.iter().enumerate() {
            if let Some(t) = self.projection[i] {
                out[t] = c;
            }
        }
        out
    }

    pub fn embed(&self, v: &[u8], ambient_dim: usize) -> Vec<u8> {
        let mut out = vec![0u8; ambient_dim];
        for (i, &c) in v.iter().enumerate() {
            out[self.embedding[i]] = c;
        }
        out
    }

    /// `ker π = im ι`, `π` onto, both maps multiplicative, and the dimensions add up.
    pub fn check_exactness(&self, ring: &SkewRing) -> bool {
        let d = ring.dim();
        let k = ring.field();
        let unit = |n: usize, i: usize| {
            let mut v = vec![0u8; n];
            v[i] = 1;
            v
        };
        if self.kernel.dim() + self.quotient.dim() != d {
            return false;
        }
        let image_iota = Subspace::span(k, d, (0..self.kernel.dim()).map(|i| self.embed(&unit(self.kernel.dim(), i), d)));
        // π is coordinate restriction, so its kernel is spanned by the killed basis vectors.
        let ker_pi = Subspace::solutions(
            k,
            d,
            (0..d).filter(|&i| self.projection[i].is_some()).map(|i| unit(d, i)),
        );
        if image_iota != ker_pi || image_iota.dim() != self.kernel.dim() {
            return false;
        }
        let image_pi = Subspace::span(k, self.quotient.dim(), (0..d).map(|i| self.project(&unit(d, i))));
        if image_pi.dim() != self.quotient.dim() {
            return false;
        }
        let kd = self.kernel.dim();
        if (0..kd).any(|i| self.project(&self.embed(&unit(kd, i), d)).iter().any(|&c| c != 0)) {
            return false;
        }
        for i in 0..d {
            for j in 0..d {
                let lhs = self.project(&ring.mul_vec(&unit(d, i), &unit(d, j)));
                let rhs = self.quotient.mul_vec(&self.project(&unit(d, i)), &self.project(&unit(d, j)));
                if lhs != rhs {
                    return false;
                }
            }
        }
        for i in 0..kd {
            for j in 0..kd {
                let lhs = self.embed(&self.kernel.mul_vec(&unit(kd, i), &unit(kd, j)), d);
                let rhs = ring.mul_vec(&self.embed(&unit(kd, i), d), &self.embed(&unit(kd, j), d));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ring(a: PartialAction) -> SkewRing {
        SkewRing::new(a, PrimeField::f2())
    }

    #[test]
    fn dimensions() {
        assert_eq!(ring(fixtures::fix_a()).dim(), 2);
        assert_eq!(ring(fixtures::fix_b()).dim(), 4);
        assert_eq!(ring(fixtures::fix_c()).dim(), 5);
        assert_eq!(ring(fixtures::fix_d()).dim(), 4);
    }

    #[test]
    fn swap_square_vanishes() {
        let s = ring(fixtures::fix_b());
        let g = s.action().groupoid().morphism_index("g").unwrap();
        let m = s.basis_element(s.basis_index(g, 0).unwrap());
        assert!(s.multiply(&m, &m).unwrap().is_zero());
    }

    #[test]
    fn identity_is_two_sided_unit() {
        for a in [fixtures::fix_a(), fixtures::fix_b(), fixtures::fix_c(), fixtures::fix_d()] {
            let s = ring(a);
            let one = s.identity_element();
            for i in 0..s.dim() {
                let m = s.basis_element(i);
                assert_eq!(s.multiply(&one, &m).unwrap(), m);
                assert_eq!(s.multiply(&m, &one).unwrap(), m);
            }
            assert_eq!(s.e_map(&one), one);
        }
        let d = ring(fixtures::fix_d());
        assert_eq!(d.identity_element().support().len(), 2);
    }

    #[test]
    fn table_matches_literal_rule() {
        let s = ring(fixtures::fix_c());
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                let lit = s.multiply(&s.basis_element(i), &s.basis_element(j)).unwrap();
                let mut ei = vec![0u8; s.dim()];
                ei[i] = 1;
                let mut ej = vec![0u8; s.dim()];
                ej[j] = 1;
                assert_eq!(s.to_vector(&lit), s.mul_vec(&ei, &ej));
            }
        }
    }

    #[test]
    fn structural_maps() {
        let s = ring(fixtures::fix_c());
        let gd = s.action().groupoid();
        let (e, g) = (gd.morphism_index("e").unwrap(), gd.morphism_index("g").unwrap());
        let m = |h: usize, x: usize| s.basis_element(s.basis_index(h, x).unwrap());
        let x = m(e, 0).add(&m(g, 0)).unwrap();
        assert_eq!(s.p0(&x), s.induced().indicator(BitSet::singleton(0)));
        assert!(s.e_map(&m(g, 0)).is_zero());
        let t = m(e, 0).add(&m(g, 1)).unwrap();
        assert_eq!(s.tau(&t), s.induced().indicator(BitSet::from_indices([0, 1])));
        assert_eq!(s.identity_element().component(e), s.induced().indicator(s.action().all_points()));
        assert!(m(g, 0).component(e).is_zero());
        assert!(!x.is_homogeneous() && m(g, 0).is_homogeneous());
        let f = FnElement::from_values(PrimeField::f2(), &[1, 0, 1]);
        assert_eq!(s.p0(&s.psi(&f).unwrap()), f);
    }

    #[test]
    fn s_units() {
        let s = ring(fixtures::fix_c());
        let g = s.action().groupoid().morphism_index("g").unwrap();
        let x = s.basis_element(s.basis_index(g, 0).unwrap());
        let u = s.s_unit(std::slice::from_ref(&x)).unwrap();
        assert_eq!(s.multiply(&u, &x).unwrap(), x);
        assert_eq!(s.multiply(&x, &u).unwrap(), x);
        assert_eq!(s.multiply(&u, &u).unwrap(), u);
    }

    #[test]
    fn context_mismatch() {
        let s = ring(fixtures::fix_c());
        let other = ring(fixtures::fix_b());
        assert!(matches!(s.multiply(&other.identity_element(), &s.identity_element()), Err(Error::ContextMismatch)));
    }

    #[test]
    fn json_round_trip() {
        let s = SkewRing::new(fixtures::fix_c(), PrimeField::new(3).unwrap());
        let one = s.identity_element().scale(2);
        let v = s.element_to_json(&one);
        assert_eq!(s.element_from_json(&v).unwrap(), one);
    }

    #[test]
    fn quotient_sequence() {
        let s = ring(fixtures::fix_c());
        let q = s.quotient_skew_ring(BitSet::singleton(2)).unwrap();
        assert_eq!(q.quotient.dim(), 4);
        assert_eq!(q.kernel.dim() + q.quotient.dim(), s.dim());
        assert!(q.check_exactness(&s));
        let q0 = s.quotient_skew_ring(BitSet::EMPTY).unwrap();
        assert_eq!(q0.quotient.dim(), s.dim());
        assert!(q0.check_exactness(&s));
        assert!(s.quotient_skew_ring(BitSet::singleton(0)).is_err());
    }
}
