//! Cyclotomy classes of index `k`.
//!
//! The character of order `k` is fixed by the field generator `g`: `g` lies in class 1,
//! so the class of a nonzero `x` is `dlog(x) mod k`. Classes are only ever handled through
//! these integer labels.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};

/// Class lookups for one index `k | q-1`.
#[derive(Clone, Copy, Debug)]
pub struct ClassIndexer<'f> {
    field: &'f FieldCtx,
    k: u32,
}

impl<'f> ClassIndexer<'f> {
    pub fn new(field: &'f FieldCtx, k: u32) -> Result<Self> {
        let order = field.order() - 1;
        if k == 0 || !order.is_multiple_of(k) {
            return Err(Error::IndexNotDivisor {
                k: u64::from(k),
                order: u64::from(order),
            });
        }
        Ok(ClassIndexer { field, k })
    }

    pub fn field(&self) -> &'f FieldCtx {
        self.field
    }

    pub fn index(&self) -> u32 {
        self.k
    }

    pub fn class_of(&self, x: Elem) -> Result<u32> {
        Ok(self.field.dlog(x)? % self.k)
    }

    /// `x` must be nonzero.
    #[inline]
    pub(crate) fn class_unchecked(&self, x: Elem) -> u32 {
        self.field.log_unchecked(x) % self.k
    }

    /// Elements of class `i`, ascending by encoding.
    pub fn class_members(&self, i: u32) -> Result<Vec<Elem>> {
        if i >= self.k {
            return Err(Error::ClassOutOfRange {
                class: u64::from(i),
                k: u64::from(self.k),
            });
        }
        let order = u64::from(self.field.order() - 1);
        let mut out: Vec<Elem> = (u64::from(i)..order)
            .step_by(self.k as usize)
            .map(|e| self.field.exp(e))
            .collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Whether `C_i -> lambda_i C_i` permutes the classes, i.e. whether
    /// `i -> i + class(lambda_i)` is a bijection of `Z_k`.
    pub fn is_class_permutation(&self, lambdas: &[Elem]) -> Result<bool> {
        if lambdas.len() != self.k as usize {
            return Err(Error::InvalidParameter(format!(
                "expected {} multipliers, got {}",
                self.k,
                lambdas.len()
            )));
        }
        let mut seen = vec![false; self.k as usize];
        for (i, &l) in lambdas.iter().enumerate() {
            let t = ((i as u32 + self.class_of(l)?) % self.k) as usize;
            if std::mem::replace(&mut seen[t], true) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Class of every encoding; `u32::MAX` marks zero.
    pub fn class_table(&self) -> Vec<u32> {
        self.field
            .elements()
            .map(|x| {
                if x.is_zero() {
                    u32::MAX
                } else {
                    self.class_unchecked(x)
                }
            })
            .collect()
    }

    /// `M(u, v) = #{a not in {0,1} : class(a) = u, class(a-1) = v}`.
    pub fn multiplier_class_table(&self) -> MultiplierClassTable {
        let k = self.k as usize;
        let mut cells = vec![0u64; k * k];
        for a in self.field.elements().skip(2) {
            let u = self.class_unchecked(a) as usize;
            let v = self.class_unchecked(self.field.sub(a, Elem::ONE)) as usize;
            cells[u * k + v] += 1;
        }
        MultiplierClassTable { k: self.k, cells }
    }
}

impl FieldCtx {
    pub fn classes(&self, k: u32) -> Result<ClassIndexer<'_>> {
        ClassIndexer::new(self, k)
    }

    pub fn class_of(&self, x: Elem, k: u32) -> Result<u32> {
        ClassIndexer::new(self, k)?.class_of(x)
    }
}

/// Cyclotomic-number analogue counting multiplier candidates per class pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplierClassTable {
    k: u32,
    cells: Vec<u64>,
}

impl MultiplierClassTable {
    pub fn index(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn get(&self, u: u32, v: u32) -> u64 {
        self.cells[(u * self.k + v) as usize]
    }

    pub fn total(&self) -> u64 {
        self.cells.iter().sum()
    }

    /// Rows of the table as nested vectors, for diagnostics.
    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.cells
            .chunks(self.k as usize)
            .map(|r| r.to_vec())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory;

    #[test]
    fn generator_is_in_class_one() {
        let f = FieldCtx::new(31).unwrap();
        for k in numtheory::divisors(30) {
            let k = k as u32;
            let c = f.classes(k).unwrap();
            assert_eq!(c.class_of(f.generator()).unwrap(), 1 % k);
        }
        let c1 = f.classes(1).unwrap();
        assert!(f.nonzero().all(|x| c1.class_of(x).unwrap() == 0));
    }

    #[test]
    fn quadratic_classes_of_f5() {
        let f = FieldCtx::new(5).unwrap();
        let c = f.classes(2).unwrap();
        assert_eq!(c.class_members(0).unwrap(), vec![Elem(1), Elem(4)]);
        assert_eq!(c.class_members(1).unwrap(), vec![Elem(2), Elem(3)]);
        assert!(c.class_members(2).is_err());
    }

    #[test]
    fn class_member_shapes() {
        let f = FieldCtx::new(7).unwrap();
        let c3 = f.classes(3).unwrap();
        assert_eq!(c3.class_members(0).unwrap(), vec![Elem(1), Elem(6)]);
        for i in 0..3 {
            assert_eq!(c3.class_members(i).unwrap().len(), 2);
        }
        for q in [11u64, 13, 25, 27] {
            let f = FieldCtx::new(q).unwrap();
            let k = (f.order() - 1) / 2;
            let c = f.classes(k).unwrap();
            for i in 0..k {
                let m = c.class_members(i).unwrap();
                assert_eq!(m.len(), 2);
                assert_eq!(m[1], f.neg(m[0]));
            }
            let full = f.classes(f.order() - 1).unwrap();
            for i in 0..f.order() - 1 {
                assert_eq!(full.class_members(i).unwrap(), vec![f.exp(u64::from(i))]);
            }
        }
    }

    #[test]
    fn non_divisor_index_rejected() {
        let f = FieldCtx::new(13).unwrap();
        assert!(matches!(f.classes(5), Err(Error::IndexNotDivisor { .. })));
        assert!(matches!(f.classes(0), Err(Error::IndexNotDivisor { .. })));
        assert_eq!(f.class_of(Elem::ZERO, 3), Err(Error::ZeroArgument));
    }

    #[test]
    fn class_permutation_examples() {
        let f = FieldCtx::new(5).unwrap();
        let c = f.classes(2).unwrap();
        // 2 and 3 are both non-residues: 0 -> 1, 1 -> 0
        assert!(c.is_class_permutation(&[Elem(2), Elem(3)]).unwrap());
        // lambda_0 = 2 (class 1), lambda_1 = 1 (class 0): 0 -> 1, 1 -> 1
        assert!(!c.is_class_permutation(&[Elem(2), Elem(1)]).unwrap());
        assert_eq!(
            c.is_class_permutation(&[Elem(0), Elem(1)]),
            Err(Error::ZeroArgument)
        );
        let c1 = f.classes(1).unwrap();
        for x in f.nonzero() {
            assert!(c1.is_class_permutation(&[x]).unwrap());
        }
    }

    #[test]
    fn multiplier_table_of_f5() {
        let f = FieldCtx::new(5).unwrap();
        let m = f.classes(2).unwrap().multiplier_class_table();
        assert_eq!(m.rows(), vec![vec![0, 1], vec![1, 1]]);
        for q in [7u64, 8, 9, 13, 16, 31] {
            let f = FieldCtx::new(q).unwrap();
            assert_eq!(
                f.classes(1).unwrap().multiplier_class_table().get(0, 0),
                q - 2
            );
            for k in numtheory::divisors(q - 1) {
                let t = f.classes(k as u32).unwrap().multiplier_class_table();
                assert_eq!(t.total(), q - 2);
            }
        }
    }
}
