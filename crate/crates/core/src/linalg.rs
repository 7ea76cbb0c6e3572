//! Exact linear algebra over `F_p`: subspaces kept in reduced row echelon form.

use std::cmp::Ordering;

use crate::field::PrimeField;

/// A subspace of `F_p^n`, stored as its RREF basis.
///
/// RREF is canonical, so two subspaces are equal exactly when their row
/// matrices are.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: PrimeField,
    n: usize,
    rows: Vec<Vec<u8>>,
}

impl Ord for Subspace {
    /// Dimension first, then the row matrices lexicographically.
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim()
            .cmp(&other.dim())
            .then_with(|| self.rows.cmp(&other.rows))
            .then_with(|| self.n.cmp(&other.n))
            .then_with(|| self.field.cmp(&other.field))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn pivot(row: &[u8]) -> usize {
    row.iter().position(|&c| c != 0).expect("RREF rows are nonzero")
}

impl Subspace {
    pub fn zero(field: PrimeField, n: usize) -> Subspace {
        Subspace { field, n, rows: Vec::new() }
    }

    pub fn full(field: PrimeField, n: usize) -> Subspace {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| u8::from(i == j)).collect())
            .collect();
        Subspace { field, n, rows }
    }

    pub fn span<I, V>(field: PrimeField, n: usize, vectors: I) -> Subspace
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[u8]>,
    {
        let mut s = Subspace::zero(field, n);
        for v in vectors {
            s.insert(v.as_ref());
        }
        s
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| pivot(r)).collect()
    }

    /// Remainder of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        assert_eq!(v.len(), self.n, "vector length differs from the ambient dimension");
        let k = self.field;
        let mut v = v.to_vec();
        for row in &self.rows {
            let c = v[pivot(row)];
            if c != 0 {
                for (a, &b) in v.iter_mut().zip(row) {
                    *a = k.sub(*a, k.mul(c, b));
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        self.reduce(v).iter().all(|&c| c == 0)
    }

    /// Adds `v` to the spanning set; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[u8]) -> bool {
        let k = self.field;
        let mut r = self.reduce(v);
        let Some(pc) = r.iter().position(|&c| c != 0) else {
            return false;
        };
        let inv = k.inv(r[pc]);
        for a in r.iter_mut() {
            *a = k.mul(*a, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                for (a, &b) in row.iter_mut().zip(&r) {
                    *a = k.sub(*a, k.mul(c, b));
                }
            }
        }
        let pos = self.rows.partition_point(|row| pivot(row) < pc);
        self.rows.insert(pos, r);
        true
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r);
        }
        s
    }

    /// `{w : w·v = 0 for all v}` under the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        let k = self.field;
        let piv = self.pivots();
        let mut out = Subspace::zero(k, self.n);
        for f in (0..self.n).filter(|c| !piv.contains(c)) {
            let mut w = vec![0u8; self.n];
            w[f] = 1;
            for (row, &pc) in self.rows.iter().zip(&piv) {
                w[pc] = k.neg(row[f]);
            }
            out.insert(&w);
        }
        out
    }

    /// `U ∩ W = (U^⊥ + W^⊥)^⊥`; the standard form is nondegenerate over any field.
    pub fn intersection(&self, other: &Subspace) -> Subspace {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    /// Solutions of the homogeneous system whose rows are `equations`.
    pub fn solutions<I, V>(field: PrimeField, n: usize, equations: I) -> Subspace
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[u8]>,
    {
        Subspace::span(field, n, equations).annihilator()
    }

    /// Every vector of the subspace, in lexicographic order of coefficients.
    pub fn elements(&self) -> Vec<Vec<u8>> {
        let k = self.field;
        let d = self.dim();
        let p = k.p() as usize;
        let total = p.pow(d as u32);
        let mut out = Vec::with_capacity(total);
        for mut idx in 0..total {
            let mut v = vec![0u8; self.n];
            for row in self.rows.iter().rev() {
                let c = (idx % p) as u8;
                idx /= p;
                for (a, &b) in v.iter_mut().zip(row) {
                    *a = k.add(*a, k.mul(c, b));
                }
            }
            out.push(v);
        }
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rref_is_canonical() {
        let a = Subspace::span(f(3), 3, [[1u8, 1, 0], [0, 1, 1]]);
        let b = Subspace::span(f(3), 3, [[1u8, 2, 1], [1, 0, 2]]);
        assert_eq!(a.dim(), 2);
        assert_eq!(a, b);
        assert_eq!(a.rows()[0], vec![1, 0, 2]);
    }

    #[test]
    fn intersection_and_sum() {
        let k = f(2);
        let u = Subspace::span(k, 3, [[1u8, 0, 0], [0, 1, 0]]);
        let w = Subspace::span(k, 3, [[0u8, 1, 0], [0, 0, 1]]);
        assert_eq!(u.intersection(&w), Subspace::span(k, 3, [[0u8, 1, 0]]));
        assert_eq!(u.sum(&w), Subspace::full(k, 3));
        assert_eq!(u.intersection(&Subspace::zero(k, 3)).dim(), 0);
    }

    #[test]
    fn annihilator_dimension() {
        let k = f(5);
        let u = Subspace::span(k, 4, [[1u8, 2, 3, 4]]);
        let a = u.annihilator();
        assert_eq!(a.dim(), 3);
        for r in a.rows() {
            let dot = r.iter().zip([1u8, 2, 3, 4]).fold(0, |s, (&x, y)| k.add(s, k.mul(x, y)));
            assert_eq!(dot, 0);
        }
        assert_eq!(a.annihilator(), u);
    }

    #[test]
    fn elements_enumerates_span() {
        let u = Subspace::span(f(3), 2, [[1u8, 1]]);
        assert_eq!(u.elements(), vec![vec![0, 0], vec![1, 1], vec![2, 2]]);
    }
}
