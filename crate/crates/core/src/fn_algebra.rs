//! The algebra `R = F_p^X` with the partial action induced by a set-level one.
//!
//! Over a field every ideal of `F_p^X` is `{f : Supp f ⊆ U}` for some `U`
//! (multiply by the indicators `1_x`), so ideals of `R` are handled through
//! their supports. The subspace form is still available for cross-checks.

use crate::action::PartialAction;
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::field::{FnElement, PrimeField};
use crate::linalg::Subspace;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedAction {
    action: PartialAction,
    field: PrimeField,
}

impl InducedAction {
    pub fn new(action: PartialAction, field: PrimeField) -> InducedAction {
        InducedAction { action, field }
    }

    pub fn action(&self) -> &PartialAction {
        &self.action
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn num_points(&self) -> usize {
        self.action.num_points()
    }

    /// Support of the ideal `D_g`, namely `X_g`.
    pub fn d(&self, g: usize) -> BitSet {
        self.action.domain(g)
    }

    /// `1_{X_g}`, the identity of `D_g`.
    pub fn unit_of_d(&self, g: usize) -> FnElement {
        FnElement::indicator(self.field, self.num_points(), self.d(g))
    }

    pub fn indicator(&self, s: BitSet) -> FnElement {
        FnElement::indicator(self.field, self.num_points(), s)
    }

    /// `α_g(f) = f ∘ θ_{g⁻¹}` on `X_g`, zero elsewhere; `f` must lie in `D_{g⁻¹}`.
    pub fn alpha(&self, g: usize, f: &FnElement) -> Result<FnElement> {
        let gi = self.action.groupoid().inverse(g);
        if f.field() != self.field || f.len() != self.num_points() {
            return Err(Error::ContextMismatch);
        }
        if !f.support().is_subset(self.d(gi)) {
            return Err(Error::NotAnIdeal(format!(
                "α_{} is only defined on D_{}",
                self.action.groupoid().morphisms()[g],
                self.action.groupoid().morphisms()[gi]
            )));
        }
        let mut out = FnElement::zero(self.field, self.num_points());
        for y in self.d(g).iter() {
            out.set(y, f.get(self.action.theta(gi, y).unwrap()));
        }
        Ok(out)
    }

    /// Re-checks the ring-level partial action axioms on indicator functions.
    pub fn verify(&self) -> Result<()> {
        let gd = self.action.groupoid();
        let n = self.num_points();
        let name = |g: usize| gd.morphisms()[g].clone();
        let one = |x: usize| self.indicator(BitSet::singleton(x));
        for g in 0..gd.num_morphisms() {
            let r = gd.identity(gd.range(g));
            // D_g is an ideal of D_{r(g)}: D_{r(g)}·D_g ⊆ D_g.
            for x in self.d(r).iter() {
                for y in self.d(g).iter() {
                    if !one(x).mul(&one(y))?.support().is_subset(self.d(g)) {
                        return Err(Error::algebraic("ideal", format!("D_{} is not an ideal of D_{}", name(g), name(r))));
                    }
                }
            }
            let gi = gd.inverse(g);
            // α_g is a ring isomorphism D_{g⁻¹} → D_g, and α_e is the identity.
            let mut image = Subspace::zero(self.field, n);
            for x in self.d(gi).iter() {
                let ax = self.alpha(g, &one(x))?;
                image.insert(ax.values());
                for y in self.d(gi).iter() {
                    let lhs = self.alpha(g, &one(x).mul(&one(y))?)?;
                    let rhs = ax.mul(&self.alpha(g, &one(y))?)?;
                    if lhs != rhs {
                        return Err(Error::algebraic("multiplicative", format!("α_{} fails on 1_x·1_y", name(g))));
                    }
                }
                if gd.is_unit(g) && ax != one(x) {
                    return Err(Error::algebraic("unit acts trivially", format!("α_{} is not the identity", name(g))));
                }
                if self.alpha(gi, &ax)? != one(x) {
                    return Err(Error::algebraic("inverse", format!("α_{} ∘ α_{} ≠ id", name(gi), name(g))));
                }
            }
            if image != Subspace::span(self.field, n, self.d(g).iter().map(|y| one(y).values().to_vec())) {
                return Err(Error::algebraic("bijective", format!("α_{} is not onto D_{}", name(g), name(g))));
            }
        }
        for (g, h) in gd.composable_pairs() {
            let gh = gd.compose(g, h).unwrap();
            let (gi, hi) = (gd.inverse(g), gd.inverse(h));
            // α_h⁻¹(D_{g⁻¹} ∩ D_h) ⊆ D_{(gh)⁻¹}, and α_g α_h = α_{gh} there.
            for x in self.d(hi).iter() {
                let ah = self.alpha(h, &one(x))?;
                if !ah.support().is_subset(self.d(gi)) {
                    continue;
                }
                if !self.d(gd.inverse(gh)).contains(x) || self.alpha(g, &ah)? != self.alpha(gh, &one(x))? {
                    return Err(Error::algebraic("composition", format!("α_{}α_{} ≠ α_{}", name(g), name(h), name(gh))));
                }
            }
        }
        Ok(())
    }

    /// `ℐ(U) = {f : Supp f ⊆ U}`.
    pub fn ideal_from_open(&self, u: BitSet) -> Result<Subspace> {
        if !u.is_subset(self.action.all_points()) {
            return Err(Error::NotASubset);
        }
        Ok(Subspace::span(
            self.field,
            self.num_points(),
            u.iter().map(|x| self.indicator(BitSet::singleton(x)).values().to_vec()),
        ))
    }

    /// `𝒮(J) = ⋃_{f ∈ J} Supp f`, after checking that `J` is an ideal.
    pub fn support_of_ideal(&self, j: &Subspace) -> Result<BitSet> {
        if j.field() != self.field || j.ambient_dim() != self.num_points() {
            return Err(Error::ContextMismatch);
        }
        let mut support = BitSet::EMPTY;
        for row in j.rows() {
            let f = FnElement::from_values(self.field, &row.iter().map(|&c| c as i64).collect::<Vec<_>>());
            for x in 0..self.num_points() {
                if !j.contains(f.mul(&self.indicator(BitSet::singleton(x)))?.values()) {
                    return Err(Error::NotAnIdeal("not closed under multiplication by R".into()));
                }
            }
            support = support.union(f.support());
        }
        Ok(support)
    }

    /// Invariant ideals are exactly the `ℐ(U)` with `U` invariant.
    pub fn invariant_ideals(&self) -> Vec<BitSet> {
        self.action.invariant_subsets()
    }

    /// Only `0` and `R` are invariant ideals.
    pub fn is_g_simple(&self) -> bool {
        let all = self.action.all_points();
        self.invariant_ideals().into_iter().all(|u| u.is_empty() || u == all)
    }

    /// No two nonzero invariant ideals multiply to zero. Products in `F_p^X`
    /// are pointwise, so `ℐ(U)ℐ(V) = ℐ(U ∩ V)`.
    pub fn is_g_prime(&self) -> bool {
        let inv: Vec<BitSet> = self.invariant_ideals().into_iter().filter(|u| !u.is_empty()).collect();
        inv.iter().all(|&u| inv.iter().all(|&v| !u.intersection(v).is_empty()))
    }

    /// The quotient partial action on `R/ℐ(U)`, realized on `X ∖ U`.
    pub fn quotient_action(&self, u: BitSet) -> Result<InducedAction> {
        if !self.action.is_invariant(u) {
            return Err(Error::NotInvariant(format!("{:?}", self.action.subset_names(u))));
        }
        let rest = self.action.all_points().difference(u);
        Ok(InducedAction::new(self.action.restrict(rest)?, self.field))
    }

    /// Checks `(D_g + J)/J ≅ F_p^{X_g ∖ U}` for `J = ℐ(U)` by dimensions and by
    /// the kernel of restriction to `X ∖ U`.
    pub fn check_quotient_iso(&self, u: BitSet) -> Result<bool> {
        let j = self.ideal_from_open(u)?;
        let n = self.num_points();
        for g in 0..self.action.groupoid().num_morphisms() {
            let dg = self.ideal_from_open(self.d(g))?;
            let sum = dg.sum(&j);
            if sum.dim() - j.dim() != self.d(g).difference(u).len() {
                return Ok(false);
            }
            // An element of D_g + J lies in J exactly when it vanishes off U.
            for v in sum.rows() {
                let vanishes = (0..n).filter(|&x| !u.contains(x)).all(|x| v[x] == 0);
                if vanishes != j.contains(v) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ind(a: PartialAction) -> InducedAction {
        InducedAction::new(a, PrimeField::f2())
    }

    #[test]
    fn swap_is_coordinate_swap() {
        let b = ind(fixtures::fix_b());
        b.verify().unwrap();
        let g = b.action().groupoid().morphism_index("g").unwrap();
        let f = FnElement::from_values(PrimeField::f2(), &[1, 0]);
        assert_eq!(b.alpha(g, &f).unwrap().values(), &[0, 1]);
        assert_eq!(b.d(0).len(), 2);
    }

    #[test]
    fn partial_domain_dimension() {
        let c = ind(fixtures::fix_c());
        c.verify().unwrap();
        let g = c.action().groupoid().morphism_index("g").unwrap();
        assert_eq!(c.ideal_from_open(c.d(g)).unwrap().dim(), 2);
        let f = c.indicator(BitSet::singleton(2));
        assert!(c.alpha(g, &f).is_err());
    }

    #[test]
    fn ideal_support_round_trip() {
        let c = ind(fixtures::fix_c());
        for u in c.action().all_points().subsets() {
            let j = c.ideal_from_open(u).unwrap();
            assert_eq!(j.dim(), u.len());
            assert_eq!(c.support_of_ideal(&j).unwrap(), u);
        }
        let not_ideal = Subspace::span(PrimeField::f2(), 3, [[1u8, 1, 0]]);
        assert!(matches!(c.support_of_ideal(&not_ideal), Err(Error::NotAnIdeal(_))));
    }

    #[test]
    fn simplicity_and_primeness() {
        let (a, b, c) = (ind(fixtures::fix_a()), ind(fixtures::fix_b()), ind(fixtures::fix_c()));
        assert!(b.is_g_simple() && b.is_g_prime());
        assert!(!c.is_g_simple() && !c.is_g_prime());
        assert!(a.is_g_simple());
    }

    #[test]
    fn quotients() {
        let c = ind(fixtures::fix_c());
        let q = c.quotient_action(BitSet::singleton(2)).unwrap();
        assert!(q.action().is_isomorphic_by_points(&fixtures::fix_b()));
        assert_eq!(c.quotient_action(BitSet::EMPTY).unwrap(), c);
        assert_eq!(c.quotient_action(c.action().all_points()).unwrap().num_points(), 0);
        assert!(c.quotient_action(BitSet::singleton(0)).is_err());
        for u in c.invariant_ideals() {
            assert!(c.check_quotient_iso(u).unwrap());
        }
    }
}
