//! Two-sided ideals of `R ⋊_α G` and the checkers built on them.
//!
//! `all_ideals` uses the orthogonal idempotents `ε_x = 1_x δ_{e(x)}`, which sum
//! to the identity. For any ideal `I` we get `I = Σ_{x,y} ε_x I ε_y` with each
//! `ε_x I ε_y ⊆ I`, so `I` is the sum of the principal ideals generated by its
//! elements lying in corners `ε_x S ε_y`. Enumerating principal ideals of
//! corner vectors, then closing under sums, therefore yields the whole lattice
//! while visiting far fewer than `p^dim` vectors.

use std::collections::{BTreeSet, VecDeque};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::field::FnElement;
use crate::linalg::Subspace;
use crate::skew::SkewRing;

/// Environment variable overriding the enumeration cap.
pub const MAX_DIM_ENV: &str = "SGA_MAX_DIM";

/// A two-sided ideal, stored as a subspace of monomial coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoSidedIdeal {
    space: Subspace,
}

impl TwoSidedIdeal {
    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.space.is_zero()
    }

    pub fn sum(&self, other: &TwoSidedIdeal) -> TwoSidedIdeal {
        TwoSidedIdeal { space: self.space.sum(&other.space) }
    }

    pub fn intersection(&self, other: &TwoSidedIdeal) -> TwoSidedIdeal {
        TwoSidedIdeal { space: self.space.intersection(&other.space) }
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.space.contains(v)
    }

    pub fn is_subset_of(&self, other: &TwoSidedIdeal) -> bool {
        self.space.is_subspace_of(&other.space)
    }
}

/// Default enumeration cap on the ring dimension for a field of order `p`.
pub fn default_cap(p: u8) -> usize {
    match p {
        2 => 14,
        3 => 9,
        _ => 6,
    }
}

/// The cap, honouring [`MAX_DIM_ENV`] when it holds a number.
pub fn cap_for(p: u8) -> usize {
    std::env::var(MAX_DIM_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or_else(|| default_cap(p))
}

fn unit_vec(d: usize, i: usize) -> Vec<u8> {
    let mut v = vec![0u8; d];
    v[i] = 1;
    v
}

/// Whether a subspace is closed under multiplication by monomials on both sides.
pub fn is_two_sided_ideal(ring: &SkewRing, s: &Subspace) -> bool {
    s.rows().iter().all(|r| {
        (0..ring.dim()).all(|i| s.contains(&ring.left_monomial(i, r)) && s.contains(&ring.right_monomial(r, i)))
    })
}

/// Checks closure and wraps a subspace as an ideal.
pub fn as_ideal(ring: &SkewRing, s: Subspace) -> Result<TwoSidedIdeal> {
    if s.ambient_dim() != ring.dim() || s.field() != ring.field() {
        return Err(Error::ContextMismatch);
    }
    if !is_two_sided_ideal(ring, &s) {
        return Err(Error::NotAnIdeal("subspace is not closed under multiplication".into()));
    }
    Ok(TwoSidedIdeal { space: s })
}

/// Smallest two-sided ideal containing `gens`.
///
/// Each new basis vector is multiplied once by every monomial on each side;
/// since those products span closure under both one-sided multiplications,
/// the dimension stabilizes at the generated ideal.
pub fn ideal_generated_by<V: AsRef<[u8]>>(ring: &SkewRing, gens: &[V]) -> TwoSidedIdeal {
    let d = ring.dim();
    let mut space = Subspace::zero(ring.field(), d);
    let mut queue: VecDeque<Vec<u8>> = VecDeque::new();
    for g in gens {
        if space.insert(g.as_ref()) {
            queue.push_back(g.as_ref().to_vec());
        }
    }
    while let Some(v) = queue.pop_front() {
        for i in 0..d {
            for w in [ring.left_monomial(i, &v), ring.right_monomial(&v, i)] {
                if space.insert(&w) {
                    queue.push_back(w);
                }
            }
        }
    }
    TwoSidedIdeal { space }
}

/// `IJ`, the ideal generated by products of basis vectors.
pub fn ideal_product(ring: &SkewRing, i: &TwoSidedIdeal, j: &TwoSidedIdeal) -> TwoSidedIdeal {
    let prods: Vec<Vec<u8>> = i
        .space
        .rows()
        .iter()
        .flat_map(|a| j.space.rows().iter().map(move |b| ring.mul_vec(a, b)))
        .collect();
    ideal_generated_by(ring, &prods)
}

fn product_is_zero(ring: &SkewRing, i: &TwoSidedIdeal, j: &TwoSidedIdeal) -> bool {
    i.space
        .rows()
        .iter()
        .all(|a| j.space.rows().iter().all(|b| ring.mul_vec(a, b).iter().all(|&c| c == 0)))
}

pub fn zero_ideal(ring: &SkewRing) -> TwoSidedIdeal {
    TwoSidedIdeal { space: Subspace::zero(ring.field(), ring.dim()) }
}

pub fn whole_ring(ring: &SkewRing) -> TwoSidedIdeal {
    TwoSidedIdeal { space: Subspace::full(ring.field(), ring.dim()) }
}

/// Basis indices spanning the corner `ε_x S ε_y`, namely the `1_x δ_g` with `θ_{g⁻¹}(x) = y`.
fn corners(ring: &SkewRing) -> Vec<Vec<usize>> {
    let a = ring.action();
    let gd = a.groupoid();
    let n = a.num_points();
    let mut out = vec![Vec::new(); n * n];
    for (i, &(g, x)) in ring.basis().iter().enumerate() {
        let y = a.theta(gd.inverse(g), x).unwrap();
        out[x * n + y].push(i);
    }
    out.retain(|c| !c.is_empty());
    out
}

/// Principal ideals generated by nonzero corner vectors whose leading coefficient is 1.
fn corner_principal_ideals(ring: &SkewRing) -> Vec<TwoSidedIdeal> {
    let k = ring.field();
    let p = k.p() as usize;
    let d = ring.dim();
    let mut set = BTreeSet::new();
    for corner in corners(ring) {
        let m = corner.len();
        for code in 1..p.pow(m as u32) {
            let mut coeffs = vec![0u8; m];
            let mut c = code;
            for slot in coeffs.iter_mut() {
                *slot = (c % p) as u8;
                c /= p;
            }
            if coeffs.iter().find(|&&c| c != 0) != Some(&1) {
                continue;
            }
            let mut v = vec![0u8; d];
            for (&i, &c) in corner.iter().zip(&coeffs) {
                v[i] = c;
            }
            set.insert(ideal_generated_by(ring, &[v]));
        }
    }
    set.into_iter().collect()
}

/// Closes `{0} ∪ gens` under sums.
fn join_closure(ring: &SkewRing, gens: &[TwoSidedIdeal]) -> Vec<TwoSidedIdeal> {
    let mut seen: BTreeSet<TwoSidedIdeal> = BTreeSet::new();
    let zero = zero_ideal(ring);
    seen.insert(zero.clone());
    let mut queue = VecDeque::from([zero]);
    while let Some(i) = queue.pop_front() {
        for p in gens {
            if p.is_subset_of(&i) {
                continue;
            }
            let s = i.sum(p);
            if seen.insert(s.clone()) {
                queue.push_back(s);
            }
        }
    }
    seen.into_iter().collect()
}

/// Every two-sided ideal, sorted by dimension and then RREF.
pub fn all_ideals(ring: &SkewRing, cap: usize) -> Result<Vec<TwoSidedIdeal>> {
    if ring.dim() > cap {
        return Err(Error::DimensionCap { dim: ring.dim(), cap });
    }
    Ok(join_closure(ring, &corner_principal_ideals(ring)))
}

/// `I = ⊕_g (I ∩ D_g δ_g)`: every homogeneous component of every basis vector lies in `I`.
pub fn is_graded_ideal(ring: &SkewRing, i: &TwoSidedIdeal) -> bool {
    let d = ring.dim();
    i.space.rows().iter().all(|r| {
        let mut comps: Vec<Vec<u8>> = Vec::new();
        let mut last = None;
        for idx in 0..d {
            let g = ring.basis()[idx].0;
            if last != Some(g) {
                comps.push(vec![0u8; d]);
                last = Some(g);
            }
            comps.last_mut().unwrap()[idx] = r[idx];
        }
        comps.iter().all(|c| i.contains(c))
    })
}

/// `I ∩ A` with `A = ⊕ D_e δ_e`.
pub fn intersect_a(ring: &SkewRing, i: &TwoSidedIdeal) -> Subspace {
    i.space.intersection(&ring.a_subspace())
}

/// `P₀` on coordinates, as a function on points.
pub fn p0_vec(ring: &SkewRing, v: &[u8]) -> FnElement {
    ring.p0(&ring.from_vector(v))
}

/// `Φ(I) = P₀(I ∩ A)`, returned as the support of that ideal of `R`.
pub fn phi(ring: &SkewRing, i: &TwoSidedIdeal) -> Result<BitSet> {
    let n = ring.action().num_points();
    let image = Subspace::span(
        ring.field(),
        n,
        intersect_a(ring, i).rows().iter().map(|r| p0_vec(ring, r).values().to_vec()),
    );
    ring.induced().support_of_ideal(&image)
}

/// `Ψ(ℐ(U)) = ⊕ (ℐ(U) ∩ D_g) δ_g` for invariant `U`.
pub fn psi(ring: &SkewRing, u: BitSet) -> Result<TwoSidedIdeal> {
    let a = ring.action();
    if !u.is_subset(a.all_points()) {
        return Err(Error::NotASubset);
    }
    if !a.is_invariant(u) {
        return Err(Error::NotInvariant(format!("{:?}", a.subset_names(u))));
    }
    let d = ring.dim();
    let space = Subspace::span(
        ring.field(),
        d,
        (0..d).filter(|&i| u.contains(ring.basis()[i].1)).map(|i| unit_vec(d, i)),
    );
    Ok(TwoSidedIdeal { space })
}

/// Graded ideals as `Ψ`-images of invariant subsets; available above the cap.
pub fn graded_ideals_via_psi(ring: &SkewRing) -> Vec<TwoSidedIdeal> {
    let mut v: Vec<TwoSidedIdeal> = ring
        .action()
        .invariant_subsets()
        .into_iter()
        .map(|u| psi(ring, u).unwrap())
        .collect();
    v.sort();
    v.dedup();
    v
}

/// Every nonzero ideal meets `A` nontrivially.
pub fn has_intersection_property(ring: &SkewRing, ideals: &[TwoSidedIdeal]) -> bool {
    ideals.iter().all(|i| i.is_zero() || !intersect_a(ring, i).is_zero())
}

/// Every quotient `(R/ℐ(U)) ⋊ G` with `U` invariant has the intersection property.
pub fn has_residual_intersection_property(ring: &SkewRing, cap: usize) -> Result<bool> {
    for u in ring.action().invariant_subsets() {
        let q = ring.quotient_skew_ring(u)?.quotient;
        if !has_intersection_property(&q, &all_ideals(&q, cap)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Only `0` and the whole ring. The zero ring counts as simple.
pub fn is_simple(ring: &SkewRing, ideals: &[TwoSidedIdeal]) -> bool {
    ideals.iter().all(|i| i.is_zero() || i.dim() == ring.dim())
}

/// Minimal nonzero members of a list of ideals.
pub fn minimal_nonzero(ideals: &[TwoSidedIdeal]) -> Vec<&TwoSidedIdeal> {
    let nz: Vec<&TwoSidedIdeal> = ideals.iter().filter(|i| !i.is_zero()).collect();
    nz.iter()
        .copied()
        .filter(|i| !nz.iter().any(|j| j.dim() < i.dim() && j.is_subset_of(i)))
        .collect()
}

/// No nonzero `I, J` (possibly equal) from `ideals` with `IJ = 0`.
///
/// If `IJ = 0` then also `I'J' = 0` for minimal nonzero `I' ⊆ I`, `J' ⊆ J`,
/// so only minimal members are compared; `ideals` must contain every nonzero
/// ideal's minimal sub-ideals from the same family.
pub fn is_prime_among(ring: &SkewRing, ideals: &[TwoSidedIdeal]) -> bool {
    let mins = minimal_nonzero(ideals);
    mins.iter().all(|i| mins.iter().all(|j| !product_is_zero(ring, i, j)))
}

pub fn is_prime(ring: &SkewRing, ideals: &[TwoSidedIdeal]) -> bool {
    is_prime_among(ring, ideals)
}

/// Primeness checked on every pair, without the minimality reduction.
pub fn is_prime_all_pairs(ring: &SkewRing, ideals: &[TwoSidedIdeal]) -> bool {
    let nz: Vec<&TwoSidedIdeal> = ideals.iter().filter(|i| !i.is_zero()).collect();
    nz.iter().all(|i| nz.iter().all(|j| !ideal_product(ring, i, j).is_zero()))
}

/// Graded simplicity over a list of graded ideals.
pub fn is_graded_simple(ring: &SkewRing, graded: &[TwoSidedIdeal]) -> bool {
    is_simple(ring, graded)
}

/// Graded primeness over a list of graded ideals. Minimal nonzero graded
/// ideals sit below every nonzero graded ideal, so the reduction still applies.
pub fn is_graded_prime(ring: &SkewRing, graded: &[TwoSidedIdeal]) -> bool {
    is_prime_among(ring, graded)
}

/// `{v : v b = b v for all b ∈ A}`.
pub fn centralizer_of_a(ring: &SkewRing) -> Subspace {
    let d = ring.dim();
    let k = ring.field();
    let mut equations: Vec<Vec<u8>> = Vec::new();
    for b in (0..d).filter(|&i| ring.is_unit_monomial(i)) {
        // Column j of the map v ↦ v b − b v is its value on the basis vector j.
        let cols: Vec<Vec<u8>> = (0..d)
            .map(|j| {
                let ej = unit_vec(d, j);
                let vb = ring.right_monomial(&ej, b);
                let bv = ring.left_monomial(b, &ej);
                vb.iter().zip(&bv).map(|(&x, &y)| k.sub(x, y)).collect()
            })
            .collect();
        for r in 0..d {
            equations.push((0..d).map(|j| cols[j][r]).collect());
        }
    }
    Subspace::solutions(k, d, equations)
}

pub fn is_a_maximal_commutative(ring: &SkewRing) -> bool {
    centralizer_of_a(ring) == ring.a_subspace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::fixtures;

    fn ring(a: crate::PartialAction) -> SkewRing {
        SkewRing::new(a, PrimeField::f2())
    }

    #[test]
    fn generated_ideals() {
        let a = ring(fixtures::fix_a());
        let one = a.to_vector(&a.identity_element());
        assert_eq!(ideal_generated_by(&a, &[one]).dim(), 2);
        assert_eq!(ideal_generated_by(&a, &[vec![1u8, 1]]).dim(), 1);
        assert!(ideal_generated_by::<Vec<u8>>(&a, &[]).is_zero());
    }

    #[test]
    fn fixture_lattices() {
        let cases = [(fixtures::fix_a(), 3, 1), (fixtures::fix_b(), 2, 0), (fixtures::fix_c(), 4, 0), (fixtures::fix_d(), 2, 0)];
        for (a, count, non_graded) in cases {
            let s = ring(a);
            let ideals = all_ideals(&s, 14).unwrap();
            assert_eq!(ideals.len(), count);
            assert_eq!(ideals.iter().filter(|i| !is_graded_ideal(&s, i)).count(), non_graded);
            for i in &ideals {
                assert!(is_two_sided_ideal(&s, i.space()));
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let s = ring(fixtures::fix_c());
        assert!(matches!(all_ideals(&s, 4), Err(Error::DimensionCap { dim: 5, cap: 4 })));
    }

    #[test]
    fn phi_and_psi() {
        let a = ring(fixtures::fix_a());
        let mid = ideal_generated_by(&a, &[vec![1u8, 1]]);
        assert_eq!(phi(&a, &mid).unwrap(), BitSet::EMPTY);
        let c = ring(fixtures::fix_c());
        let p = psi(&c, BitSet::singleton(2)).unwrap();
        assert_eq!(p.dim(), 1);
        assert!(is_graded_ideal(&c, &p));
        for i in all_ideals(&c, 14).unwrap() {
            let u = phi(&c, &i).unwrap();
            assert_eq!(psi(&c, u).unwrap(), i);
        }
    }

    #[test]
    fn intersection_properties() {
        let (a, b, c) = (ring(fixtures::fix_a()), ring(fixtures::fix_b()), ring(fixtures::fix_c()));
        assert!(!has_intersection_property(&a, &all_ideals(&a, 14).unwrap()));
        assert!(has_intersection_property(&b, &all_ideals(&b, 14).unwrap()));
        assert!(has_intersection_property(&c, &all_ideals(&c, 14).unwrap()));
        assert!(has_residual_intersection_property(&c, 14).unwrap());
        assert!(!has_residual_intersection_property(&a, 14).unwrap());
    }

    #[test]
    fn simple_and_prime() {
        let (a, b, c) = (ring(fixtures::fix_a()), ring(fixtures::fix_b()), ring(fixtures::fix_c()));
        let (ia, ib, ic) = (all_ideals(&a, 14).unwrap(), all_ideals(&b, 14).unwrap(), all_ideals(&c, 14).unwrap());
        assert!(is_simple(&b, &ib) && is_prime(&b, &ib));
        assert!(!is_simple(&a, &ia));
        assert!(is_graded_simple(&a, &graded_ideals_via_psi(&a)));
        // (δ_e + δ_g)² = 2(δ_e + δ_g) = 0 over F₂.
        assert!(!is_prime(&a, &ia));
        assert!(!is_prime(&c, &ic));
        for (s, i) in [(&a, &ia), (&b, &ib), (&c, &ic)] {
            assert_eq!(is_prime(s, i), is_prime_all_pairs(s, i));
        }
    }

    #[test]
    fn maximal_commutativity() {
        let a = ring(fixtures::fix_a());
        assert_eq!(centralizer_of_a(&a).dim(), 2);
        assert!(!is_a_maximal_commutative(&a));
        assert!(is_a_maximal_commutative(&ring(fixtures::fix_b())));
        assert!(is_a_maximal_commutative(&ring(fixtures::fix_c())));
    }
}
