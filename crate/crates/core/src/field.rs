//! Prime fields `F_p` for small `p`, and functions `X → F_p`.

use crate::bitset::BitSet;
use crate::error::{Error, Result};

pub const SUPPORTED_PRIMES: [u32; 4] = [2, 3, 5, 7];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u8,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<PrimeField> {
        if SUPPORTED_PRIMES.contains(&p) {
            Ok(PrimeField { p: p as u8 })
        } else {
            Err(Error::UnsupportedField(p))
        }
    }

    pub fn f2() -> PrimeField {
        PrimeField { p: 2 }
    }

    pub fn p(self) -> u8 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        (self.p - a) % self.p
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        a * b % self.p
    }

    pub fn inv(self, a: u8) -> u8 {
        assert!(a % self.p != 0, "zero has no inverse");
        (1..self.p).find(|&b| self.mul(a, b) == 1).unwrap()
    }

    pub fn reduce(self, a: i64) -> u8 {
        a.rem_euclid(self.p as i64) as u8
    }

    pub fn elements(self) -> std::ops::Range<u8> {
        0..self.p
    }
}

/// A function `X → F_p`, stored densely in canonical point order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FnElement {
    field: PrimeField,
    values: Vec<u8>,
}

impl FnElement {
    pub fn zero(field: PrimeField, n: usize) -> FnElement {
        FnElement { field, values: vec![0; n] }
    }

    /// `1_S`.
    pub fn indicator(field: PrimeField, n: usize, s: BitSet) -> FnElement {
        FnElement { field, values: (0..n).map(|x| u8::from(s.contains(x))).collect() }
    }

    pub fn from_values(field: PrimeField, values: &[i64]) -> FnElement {
        FnElement { field, values: values.iter().map(|&v| field.reduce(v)).collect() }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, x: usize) -> u8 {
        self.values[x]
    }

    pub fn set(&mut self, x: usize, c: u8) {
        self.values[x] = c % self.field.p();
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn support(&self) -> BitSet {
        (0..self.values.len()).filter(|&x| self.values[x] != 0).collect()
    }

    fn zip(&self, other: &FnElement, f: impl Fn(u8, u8) -> u8) -> Result<FnElement> {
        if self.field != other.field || self.len() != other.len() {
            return Err(Error::ContextMismatch);
        }
        Ok(FnElement {
            field: self.field,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &FnElement) -> Result<FnElement> {
        let k = self.field;
        self.zip(other, |a, b| k.add(a, b))
    }

    pub fn sub(&self, other: &FnElement) -> Result<FnElement> {
        let k = self.field;
        self.zip(other, |a, b| k.sub(a, b))
    }

    /// Pointwise product.
    pub fn mul(&self, other: &FnElement) -> Result<FnElement> {
        let k = self.field;
        self.zip(other, |a, b| k.mul(a, b))
    }

    pub fn scale(&self, c: u8) -> FnElement {
        let k = self.field;
        FnElement { field: k, values: self.values.iter().map(|&a| k.mul(a, c)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        for p in SUPPORTED_PRIMES {
            let k = PrimeField::new(p).unwrap();
            for a in k.elements() {
                assert_eq!(k.add(a, k.neg(a)), 0);
                if a != 0 {
                    assert_eq!(k.mul(a, k.inv(a)), 1);
                }
            }
        }
        assert!(matches!(PrimeField::new(4), Err(Error::UnsupportedField(4))));
        assert_eq!(PrimeField::new(5).unwrap().reduce(-1), 4);
    }

    #[test]
    fn pointwise_ops() {
        let k = PrimeField::new(3).unwrap();
        let f = FnElement::from_values(k, &[1, 2, 0]);
        let g = FnElement::from_values(k, &[2, 2, 1]);
        assert_eq!(f.add(&g).unwrap().values(), &[0, 1, 1]);
        assert_eq!(f.mul(&g).unwrap().values(), &[2, 1, 0]);
        assert_eq!(f.support(), BitSet::from_indices([0, 1]));
        assert!(f.add(&FnElement::zero(k, 2)).is_err());
    }
}
