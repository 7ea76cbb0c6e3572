//! Finite Stone duality for `R = F_p^Y`.
//!
//! Idempotents of `F_p^Y` are the 0/1 vectors, so `E(R)` is the powerset of
//! `Y`, and ultrafilters are the principal filters at atoms. Filters are kept
//! as their generating (least) element and expanded into explicit up-sets when
//! a computation needs the elements.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::action::{PartialAction, RawAction, RawPoint};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::field::{FnElement, PrimeField};
use crate::fn_algebra::InducedAction;
use crate::groupoid::Groupoid;

/// The Boolean algebra `E(F_p^Y)`, elements being subsets of `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiniteBooleanAlgebra {
    field: PrimeField,
    n: usize,
}

impl FiniteBooleanAlgebra {
    /// Collects the 0/1 vectors of `F_p^n`; they are exactly its idempotents.
    pub fn idempotents(field: PrimeField, n: usize) -> Result<FiniteBooleanAlgebra> {
        if n > 16 {
            return Err(Error::TooLarge(format!("Boolean algebra on {n} atoms")));
        }
        Ok(FiniteBooleanAlgebra { field, n })
    }

    pub fn num_atoms(&self) -> usize {
        self.n
    }

    pub fn top(&self) -> BitSet {
        BitSet::full(self.n)
    }

    pub fn elements(&self) -> impl Iterator<Item = BitSet> {
        self.top().subsets()
    }

    pub fn atoms(&self) -> Vec<BitSet> {
        (0..self.n).map(BitSet::singleton).collect()
    }

    pub fn as_vector(&self, e: BitSet) -> FnElement {
        FnElement::indicator(self.field, self.n, e)
    }

    /// Reads an idempotent vector back as a subset; `None` if the vector is not idempotent.
    pub fn from_vector(&self, v: &FnElement) -> Option<BitSet> {
        (v.mul(v).ok()? == *v && v.values().iter().all(|&c| c <= 1)).then(|| v.support())
    }

    /// `e ∨ f = e + f − ef`.
    pub fn join(&self, e: BitSet, f: BitSet) -> BitSet {
        let (a, b) = (self.as_vector(e), self.as_vector(f));
        self.from_vector(&a.add(&b).unwrap().sub(&a.mul(&b).unwrap()).unwrap()).unwrap()
    }

    /// `e ∧ f = ef`.
    pub fn meet(&self, e: BitSet, f: BitSet) -> BitSet {
        self.from_vector(&self.as_vector(e).mul(&self.as_vector(f)).unwrap()).unwrap()
    }

    /// `¬e = 1 − e`.
    pub fn complement(&self, e: BitSet) -> BitSet {
        let one = self.as_vector(self.top());
        self.from_vector(&one.sub(&self.as_vector(e)).unwrap()).unwrap()
    }

    pub fn le(&self, e: BitSet, f: BitSet) -> bool {
        self.meet(e, f) == e
    }

    /// `↑P = {y : z ∧ y = z for some z ∈ P}`.
    pub fn up_set(&self, p: &[BitSet]) -> BTreeSet<BitSet> {
        self.elements().filter(|&y| p.iter().any(|&z| self.le(z, y))).collect()
    }

    pub fn ultrafilters(&self) -> StoneDual {
        StoneDual { algebra: *self, generators: self.atoms() }
    }
}

/// Ultrafilters of a finite Boolean algebra, each recorded by its generating atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoneDual {
    algebra: FiniteBooleanAlgebra,
    generators: Vec<BitSet>,
}

impl StoneDual {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// The elements of ultrafilter `i`.
    pub fn filter(&self, i: usize) -> BTreeSet<BitSet> {
        self.algebra.up_set(&[self.generators[i]])
    }

    /// `Z_e = {ℱ : e ∈ ℱ}`, as a set of ultrafilter indices.
    pub fn z(&self, e: BitSet) -> BitSet {
        (0..self.len()).filter(|&i| self.filter(i).contains(&e)).collect()
    }
}

/// An algebraic partial action on `F_p^Y` with unital ideals `D_g = u_g R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentPartialAction {
    pub groupoid: Groupoid,
    pub field: PrimeField,
    /// Names of the atoms of `Y`, in canonical order.
    pub atoms: Vec<String>,
    /// `u_g`.
    pub units: Vec<FnElement>,
    /// `τ_g` as a matrix: `(τ_g f)[y] = Σ_x tau[g][y][x] f[x]`.
    pub tau: Vec<Vec<Vec<u8>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivarianceReport {
    pub squares_checked: usize,
    pub failures: Vec<String>,
}

impl EquivarianceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl IdempotentPartialAction {
    /// The algebraic presentation of an induced action: `u_g = 1_{X_g}`, `τ_g = α_g`.
    pub fn from_induced(ind: &InducedAction) -> IdempotentPartialAction {
        let a = ind.action();
        let gd = a.groupoid();
        let n = a.num_points();
        let units = (0..gd.num_morphisms()).map(|g| ind.unit_of_d(g)).collect();
        let tau = (0..gd.num_morphisms())
            .map(|g| {
                let mut m = vec![vec![0u8; n]; n];
                for x in a.domain(gd.inverse(g)).iter() {
                    let col = ind.alpha(g, &ind.indicator(BitSet::singleton(x))).unwrap();
                    for y in 0..n {
                        m[y][x] = col.get(y);
                    }
                }
                m
            })
            .collect();
        IdempotentPartialAction { groupoid: gd.clone(), field: ind.field(), atoms: a.points().to_vec(), units, tau }
    }

    fn n(&self) -> usize {
        self.atoms.len()
    }

    fn algebra(&self) -> FiniteBooleanAlgebra {
        FiniteBooleanAlgebra { field: self.field, n: self.n() }
    }

    pub fn apply(&self, g: usize, f: &FnElement) -> FnElement {
        let k = self.field;
        let vals: Vec<i64> = (0..self.n())
            .map(|y| (0..self.n()).fold(0u8, |acc, x| k.add(acc, k.mul(self.tau[g][y][x], f.get(x)))) as i64)
            .collect();
        FnElement::from_values(k, &vals)
    }

    /// `u_g` as an element of `E(R)`.
    fn u(&self, g: usize) -> Result<BitSet> {
        self.algebra()
            .from_vector(&self.units[g])
            .ok_or_else(|| Error::algebraic("unital ideal", format!("u_{} is not idempotent", self.groupoid.morphisms()[g])))
    }

    /// Checks the partial action axioms on basis idempotents.
    pub fn validate(&self) -> Result<()> {
        let gd = &self.groupoid;
        let n = self.n();
        let nm = gd.num_morphisms();
        let name = |g: usize| gd.morphisms()[g].clone();
        if self.units.len() != nm || self.tau.len() != nm || self.tau.iter().any(|m| m.len() != n || m.iter().any(|r| r.len() != n)) {
            return Err(Error::Format("idempotent action tables have the wrong shape".into()));
        }
        let b = self.algebra();
        let u: Vec<BitSet> = (0..nm).map(|g| self.u(g)).collect::<Result<_>>()?;
        let mut cover = BitSet::EMPTY;
        for e in gd.units() {
            if !cover.intersection(u[e]).is_empty() {
                return Err(Error::algebraic("direct sum", "unit ideals D_e overlap"));
            }
            cover = cover.union(u[e]);
        }
        if cover != b.top() {
            return Err(Error::algebraic("direct sum", "R is not the sum of the D_e"));
        }
        for g in 0..nm {
            let gi = gd.inverse(g);
            if !b.le(u[g], u[gd.identity(gd.range(g))]) {
                return Err(Error::algebraic("ideal", format!("D_{} ⊄ D_r({})", name(g), name(g))));
            }
            let one = |x: usize| FnElement::indicator(self.field, n, BitSet::singleton(x));
            let mut image = BitSet::EMPTY;
            for x in u[gi].iter() {
                let t = self.apply(g, &one(x));
                let Some(tx) = b.from_vector(&t) else {
                    return Err(Error::algebraic("multiplicative", format!("τ_{} sends an idempotent to a non-idempotent", name(g))));
                };
                if !b.le(tx, u[g]) || tx.is_empty() {
                    return Err(Error::algebraic("bijective", format!("τ_{} does not map D_{} into D_{}", name(g), name(gi), name(g))));
                }
                if !image.intersection(tx).is_empty() {
                    return Err(Error::algebraic("multiplicative", format!("τ_{} does not preserve orthogonality", name(g))));
                }
                image = image.union(tx);
                if gd.is_unit(g) && tx != BitSet::singleton(x) {
                    return Err(Error::algebraic("unit acts trivially", format!("τ_{} is not the identity", name(g))));
                }
                if self.apply(gi, &t) != one(x) {
                    return Err(Error::algebraic("inverse", format!("τ_{} τ_{} ≠ id", name(gi), name(g))));
                }
            }
            if image != u[g] {
                return Err(Error::algebraic("bijective", format!("τ_{} is not onto D_{}", name(g), name(g))));
            }
            // Columns outside D_{g⁻¹} are never used; require them to vanish so the matrix is canonical.
            for x in b.top().difference(u[gi]).iter() {
                if (0..n).any(|y| self.tau[g][y][x] != 0) {
                    return Err(Error::algebraic("domain", format!("τ_{} acts outside D_{}", name(g), name(gi))));
                }
            }
        }
        for (g, h) in gd.composable_pairs() {
            let gh = gd.compose(g, h).unwrap();
            let (gi, hi) = (gd.inverse(g), gd.inverse(h));
            let meet = b.meet(u[gi], u[h]);
            let pre = b.from_vector(&self.apply(hi, &b.as_vector(meet))).unwrap();
            if !b.le(pre, u[gd.inverse(gh)]) {
                return Err(Error::algebraic("composition", format!("τ_{}⁻¹(D_{}⁻¹ ∩ D_{}) ⊄ D_({}{})⁻¹", name(h), name(g), name(h), name(g), name(h))));
            }
            for x in pre.iter() {
                let f = FnElement::indicator(self.field, n, BitSet::singleton(x));
                if self.apply(g, &self.apply(h, &f)) != self.apply(gh, &f) {
                    return Err(Error::algebraic("composition", format!("τ_{}τ_{} ≠ τ_{}", name(g), name(h), name(gh))));
                }
            }
        }
        Ok(())
    }

    /// `θ_g(ℱ) = ↑ τ̂_{g⁻¹}({u_{g⁻¹} x : x ∈ ℱ})` with `τ̂_{g⁻¹}(H) = τ_{g⁻¹}⁻¹(H)`.
    ///
    /// Returns the index of the atom generating `θ_g(ℱ)`, where `ℱ = ↑{x}`.
    fn theta_on_atom(&self, g: usize, x: usize) -> Result<usize> {
        let b = self.algebra();
        let gd = &self.groupoid;
        let gi = gd.inverse(g);
        let (ug, ugi) = (self.u(g)?, self.u(gi)?);
        let filter: BTreeSet<BitSet> = b.up_set(&[BitSet::singleton(x)]);
        let h: BTreeSet<BitSet> = filter.iter().map(|&y| b.meet(ugi, y)).collect();
        let preimage: Vec<BitSet> = ug
            .subsets()
            .filter(|&e| {
                let t = self.apply(gi, &b.as_vector(e));
                b.from_vector(&t).is_some_and(|te| h.contains(&te))
            })
            .collect();
        let generator = preimage.iter().fold(ug, |acc, &e| b.meet(acc, e));
        let up = b.up_set(&preimage);
        if generator.len() != 1 || up != b.up_set(&[generator]) {
            return Err(Error::algebraic(
                "ultrafilter",
                format!("θ_{} of the ultrafilter at `{}` is not an ultrafilter", gd.morphisms()[g], self.atoms[x]),
            ));
        }
        Ok(generator.first().unwrap())
    }

    /// The induced partial action on the Stone dual, named by the atoms of `Y`.
    pub fn induced_theta(&self) -> Result<PartialAction> {
        self.validate()?;
        let gd = &self.groupoid;
        let mut raw = RawAction { groupoid: gd.to_raw(), ..Default::default() };
        for x in 0..self.n() {
            let e = (0..gd.num_objects())
                .find(|&e| self.u(gd.identity(e)).map(|u| u.contains(x)).unwrap_or(false))
                .ok_or_else(|| Error::algebraic("direct sum", "atom outside every D_e"))?;
            raw.points.push(RawPoint { id: self.atoms[x].clone(), unit: gd.objects()[e].clone() });
        }
        for g in 0..gd.num_morphisms() {
            let ug = self.u(g)?;
            raw.domain.insert(gd.morphisms()[g].clone(), ug.iter().map(|x| self.atoms[x].clone()).collect());
            let mut m = BTreeMap::new();
            for x in self.u(gd.inverse(g))?.iter() {
                m.insert(self.atoms[x].clone(), self.atoms[self.theta_on_atom(g, x)?].clone());
            }
            raw.map.insert(gd.morphisms()[g].clone(), m);
        }
        PartialAction::validate(&raw)
    }

    /// `ζ_g : X(D_g) → Z_{u_g}` and its inverse compose to identities on every ultrafilter.
    pub fn check_zeta(&self) -> Result<bool> {
        let b = self.algebra();
        for g in 0..self.groupoid.num_morphisms() {
            let ug = self.u(g)?;
            for x in ug.iter() {
                // An ultrafilter of E(D_g), as explicit elements below u_g.
                let local: BTreeSet<BitSet> = ug.subsets().filter(|y| y.contains(x)).collect();
                let up = b.up_set(&local.iter().copied().collect::<Vec<_>>());
                if up != b.up_set(&[BitSet::singleton(x)]) || !up.contains(&ug) {
                    return Ok(false);
                }
                let back: BTreeSet<BitSet> = up.iter().map(|&y| b.meet(ug, y)).collect();
                if back != local {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `φ_g ∘ ρ_g = τ_g ∘ φ_{g⁻¹}` on every idempotent of `D_{g⁻¹}`.
    pub fn check_equivariance(&self, theta: &PartialAction) -> Result<EquivarianceReport> {
        let b = self.algebra();
        let gd = &self.groupoid;
        let n = self.n();
        let k = self.field;
        let mut failures = Vec::new();
        let mut count = 0;
        for g in 0..gd.num_morphisms() {
            let gi = gd.inverse(g);
            let (ug, ugi) = (self.u(g)?, self.u(gi)?);
            for e in ugi.subsets() {
                count += 1;
                // ρ_g(1_{Z_e}) = 1_{Z_e} ∘ θ_{g⁻¹}, a function on U_g.
                let rho: Vec<u8> = (0..n)
                    .map(|f| match theta.theta(gi, f) {
                        Some(t) if ug.contains(f) => u8::from(e.contains(t)),
                        _ => 0,
                    })
                    .collect();
                // φ_g sends 1_{Z_{atom}} to atom·u_g.
                let mut lhs = FnElement::zero(k, n);
                for f in (0..n).filter(|&f| rho[f] != 0) {
                    let atom = b.as_vector(b.meet(BitSet::singleton(f), ug));
                    lhs = lhs.add(&atom.scale(rho[f])).unwrap();
                }
                let rhs = self.apply(g, &b.as_vector(b.meet(e, ugi)));
                if lhs != rhs {
                    failures.push(format!(
                        "g = {}, idempotent {:?}",
                        gd.morphisms()[g],
                        e.iter().map(|x| self.atoms[x].as_str()).collect::<Vec<_>>()
                    ));
                }
            }
        }
        Ok(EquivarianceReport { squares_checked: count, failures })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn idempotent_counts() {
        let b = FiniteBooleanAlgebra::idempotents(PrimeField::f2(), 2).unwrap();
        assert_eq!(b.elements().count(), 4);
        let b5 = FiniteBooleanAlgebra::idempotents(PrimeField::new(5).unwrap(), 1).unwrap();
        assert_eq!(b5.elements().count(), 2);
    }

    #[test]
    fn de_morgan() {
        let b = FiniteBooleanAlgebra::idempotents(PrimeField::new(3).unwrap(), 3).unwrap();
        for e in b.elements() {
            for f in b.elements() {
                assert_eq!(b.complement(b.join(e, f)), b.meet(b.complement(e), b.complement(f)));
                assert_eq!(b.join(e, f), e.union(f));
            }
        }
    }

    #[test]
    fn stone_dual_basics() {
        let b = FiniteBooleanAlgebra::idempotents(PrimeField::f2(), 3).unwrap();
        let x = b.ultrafilters();
        assert_eq!(x.len(), 3);
        assert_eq!(x.z(b.top()), BitSet::full(3));
        for e in b.elements() {
            for f in b.elements() {
                assert_eq!(x.z(b.meet(e, f)), x.z(e).intersection(x.z(f)));
            }
        }
    }

    #[test]
    fn round_trips() {
        for p in [2, 3] {
            for a in [fixtures::fix_a(), fixtures::fix_b(), fixtures::fix_c(), fixtures::fix_d()] {
                let ind = InducedAction::new(a.clone(), PrimeField::new(p).unwrap());
                let tau = IdempotentPartialAction::from_induced(&ind);
                let theta = tau.induced_theta().unwrap();
                assert_eq!(theta, a);
                assert!(tau.check_zeta().unwrap());
                assert!(tau.check_equivariance(&theta).unwrap().passed());
            }
        }
    }

    #[test]
    fn broken_tau_rejected() {
        let ind = InducedAction::new(fixtures::fix_b(), PrimeField::f2());
        let mut tau = IdempotentPartialAction::from_induced(&ind);
        tau.tau[1] = vec![vec![1, 1], vec![0, 0]];
        assert!(tau.validate().is_err());
    }
}
