//! Cyclotomic maps `[a_0, .., a_{k-1}]`, full value tables, and the predicates on them.
//!
//! A cyclotomic map of index `k` sends `0` to `0` and `x` in class `i` to `a_i x`. The
//! class-level predicates here decide orthomorphism, strength and orthogonality by testing
//! whether the multiplier lists permute the cyclotomy classes; the table-level predicates
//! on [`PermutationMap`] test bijectivity directly and serve as the independent check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::numtheory;

/// A cyclotomic map, given by its multiplier list; the index is the list length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclotomicMap {
    multipliers: Vec<Elem>,
}

impl CyclotomicMap {
    pub fn new(multipliers: Vec<Elem>) -> Self {
        assert!(!multipliers.is_empty(), "a cyclotomic map has index >= 1");
        CyclotomicMap { multipliers }
    }

    pub fn from_encodings(encs: &[u32]) -> Self {
        Self::new(encs.iter().map(|&e| Elem(e)).collect())
    }

    pub fn linear(c: Elem) -> Self {
        Self::new(vec![c])
    }

    /// `[a0, a1, a1, .., a1]` of index `k`.
    pub fn near_linear(a0: Elem, a1: Elem, k: usize) -> Self {
        let mut m = vec![a1; k];
        m[0] = a0;
        Self::new(m)
    }

    #[inline]
    pub fn index(&self) -> usize {
        self.multipliers.len()
    }

    pub fn multipliers(&self) -> &[Elem] {
        &self.multipliers
    }

    pub fn encodings(&self) -> Vec<u32> {
        self.multipliers.iter().map(|m| m.enc()).collect()
    }

    /// Checks that the index divides `q-1` and that every multiplier is a field element.
    pub fn check_field(&self, field: &FieldCtx) -> Result<()> {
        let order = field.order() - 1;
        if !(order as usize).is_multiple_of(self.index()) {
            return Err(Error::IndexNotDivisor {
                k: self.index() as u64,
                order: u64::from(order),
            });
        }
        for m in &self.multipliers {
            field.elem(u64::from(m.enc()))?;
        }
        Ok(())
    }

    /// Multiplier applied on the class containing `x != 0`.
    #[inline]
    fn multiplier_at(&self, field: &FieldCtx, x: Elem) -> Elem {
        let k = self.index() as u32;
        self.multipliers[(field.log_unchecked(x) % k) as usize]
    }

    pub fn evaluate(&self, field: &FieldCtx, x: Elem) -> Elem {
        if x.is_zero() {
            Elem::ZERO
        } else {
            field.mul(self.multiplier_at(field, x), x)
        }
    }

    pub fn to_table(&self, field: &FieldCtx) -> PermutationMap {
        PermutationMap::new(field.elements().map(|x| self.evaluate(field, x)).collect())
    }

    /// `i -> i + class(f(a_i))` is a bijection of `Z_k`, with every `f(a_i)` nonzero.
    fn shifts_permute(&self, field: &FieldCtx, f: impl Fn(Elem) -> Elem) -> bool {
        let k = self.index();
        if !(field.order() as usize - 1).is_multiple_of(k) {
            return false;
        }
        let mut seen = vec![false; k];
        for (i, &a) in self.multipliers.iter().enumerate() {
            let l = f(a);
            if l.is_zero() || l.enc() >= field.order() {
                return false;
            }
            let t = (i + field.log_unchecked(l) as usize) % k;
            if std::mem::replace(&mut seen[t], true) {
                return false;
            }
        }
        true
    }

    /// Both `a_i` and `a_i - 1` permute the cyclotomy classes.
    pub fn is_orthomorphism(&self, field: &FieldCtx) -> bool {
        self.multipliers.iter().all(|a| a.enc() < field.order())
            && self.shifts_permute(field, |a| a)
            && self.shifts_permute(field, |a| field.sub(a, Elem::ONE))
    }

    /// An orthomorphism for which `x -> theta(x) + x` is also a permutation.
    pub fn is_strong(&self, field: &FieldCtx) -> bool {
        self.is_orthomorphism(field) && self.shifts_permute(field, |a| field.add(a, Elem::ONE))
    }

    /// Periodic repetition of the multiplier list up to index `k2`.
    pub fn lift_index(&self, field: &FieldCtx, k2: usize) -> Result<CyclotomicMap> {
        let k = self.index();
        if k2 == 0 || !k2.is_multiple_of(k) || !(field.order() as usize - 1).is_multiple_of(k2) {
            return Err(Error::IndexNotDivisor {
                k: k2 as u64,
                order: u64::from(field.order() - 1),
            });
        }
        Ok(CyclotomicMap::new(
            (0..k2).map(|i| self.multipliers[i % k]).collect(),
        ))
    }

    /// Smallest period of the multiplier list that divides the index.
    pub fn least_index(&self) -> usize {
        let k = self.index();
        numtheory::divisors(k as u64)
            .into_iter()
            .map(|d| d as usize)
            .find(|&d| (d..k).all(|i| self.multipliers[i] == self.multipliers[i - d]))
            .unwrap_or(k)
    }

    /// Orthogonality through the class structure: `a_i - a'_i` permutes the classes after
    /// lifting both maps to the lcm of their indices.
    pub fn is_orthogonal_to(&self, other: &CyclotomicMap, field: &FieldCtx) -> Result<bool> {
        let l = numtheory::lcm(self.index() as u64, other.index() as u64) as usize;
        let a = self.lift_index(field, l)?;
        let b = other.lift_index(field, l)?;
        let diff = CyclotomicMap::new(
            a.multipliers
                .iter()
                .zip(&b.multipliers)
                .map(|(&x, &y)| field.sub(x, y))
                .collect(),
        );
        Ok(diff.shifts_permute(field, |d| d))
    }

    /// Coefficients `c_j` with `theta(x) = sum_j c_j x^{j(q-1)/k + 1}`, obtained as the
    /// inverse discrete Fourier transform of the multipliers at `zeta = g^{(q-1)/k}`.
    pub fn to_polynomial(&self, field: &FieldCtx) -> Result<Vec<Elem>> {
        self.check_field(field)?;
        let k = self.index() as u64;
        let step = u64::from(field.order() - 1) / k;
        let k_inv = field.inv(field.from_int(k as i64))?;
        Ok((0..k)
            .map(|j| {
                let s = (0..k).fold(Elem::ZERO, |acc, i| {
                    // zeta^{-ij}
                    let e = (k - (i * j) % k) % k * step;
                    field.add(acc, field.mul(self.multipliers[i as usize], field.exp(e)))
                });
                field.mul(s, k_inv)
            })
            .collect())
    }
}

/// Evaluates `sum_j c_j x^{j(q-1)/k + 1}` directly.
pub fn evaluate_polynomial(field: &FieldCtx, coeffs: &[Elem], x: Elem) -> Elem {
    let k = coeffs.len() as u64;
    let step = u64::from(field.order() - 1) / k;
    coeffs.iter().enumerate().fold(Elem::ZERO, |acc, (j, &c)| {
        field.add(acc, field.mul(c, field.pow(x, j as u64 * step + 1)))
    })
}

/// A map given by its full value table, `table[enc(x)] = theta(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PermutationMap {
    table: Vec<Elem>,
}

impl PermutationMap {
    pub fn new(table: Vec<Elem>) -> Self {
        PermutationMap { table }
    }

    pub fn from_fn(field: &FieldCtx, f: impl Fn(Elem) -> Elem) -> Self {
        Self::new(field.elements().map(f).collect())
    }

    pub fn identity(field: &FieldCtx) -> Self {
        Self::from_fn(field, |x| x)
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    #[inline]
    pub fn get(&self, x: Elem) -> Elem {
        self.table[x.idx()]
    }

    pub fn encodings(&self) -> Vec<u32> {
        self.table.iter().map(|m| m.enc()).collect()
    }

    fn check_len(&self, field: &FieldCtx) -> Result<()> {
        if self.table.len() != field.order() as usize {
            return Err(Error::LengthMismatch {
                got: self.table.len(),
                q: field.order(),
            });
        }
        if let Some(bad) = self.table.iter().find(|e| e.enc() >= field.order()) {
            return Err(Error::ElementOutOfRange {
                enc: u64::from(bad.enc()),
                q: field.order(),
            });
        }
        Ok(())
    }

    fn is_bijection(field: &FieldCtx, f: impl Fn(Elem) -> Elem) -> bool {
        let mut seen = vec![false; field.order() as usize];
        field
            .elements()
            .all(|x| !std::mem::replace(&mut seen[f(x).idx()], true))
    }

    pub fn is_permutation(&self, field: &FieldCtx) -> Result<bool> {
        self.check_len(field)?;
        Ok(Self::is_bijection(field, |x| self.get(x)))
    }

    /// Brute bijectivity of `theta` and `theta - id`.
    pub fn is_orthomorphism(&self, field: &FieldCtx) -> Result<bool> {
        self.check_len(field)?;
        Ok(Self::is_bijection(field, |x| self.get(x))
            && Self::is_bijection(field, |x| field.sub(self.get(x), x)))
    }

    /// Brute bijectivity of `theta`, `theta - id` and `theta + id`.
    pub fn is_strong(&self, field: &FieldCtx) -> Result<bool> {
        Ok(self.is_orthomorphism(field)?
            && Self::is_bijection(field, |x| field.add(self.get(x), x)))
    }

    /// Brute bijectivity of `theta - theta'`.
    pub fn is_orthogonal_to(&self, other: &PermutationMap, field: &FieldCtx) -> Result<bool> {
        self.check_len(field)?;
        other.check_len(field)?;
        Ok(Self::is_bijection(field, |x| {
            field.sub(self.get(x), other.get(x))
        }))
    }

    /// `T_g[theta](x) = theta(x + g) - theta(g)`.
    pub fn translate(&self, field: &FieldCtx, g: Elem) -> PermutationMap {
        let shift = self.get(g);
        Self::from_fn(field, |x| field.sub(self.get(field.add(x, g)), shift))
    }

    /// Least `k | q-1` for which `theta(x)/x` is constant on the classes of index `k`;
    /// `None` when `theta(0) != 0`, so the map is not cyclotomic at all.
    pub fn least_index(&self, field: &FieldCtx) -> Result<Option<usize>> {
        self.check_len(field)?;
        if !self.table[0].is_zero() {
            return Ok(None);
        }
        let order = field.order() as usize - 1;
        // ratio[j] = theta(g^j) / g^j
        let ratio: Vec<Elem> = (0..order)
            .map(|j| {
                let x = field.exp(j as u64);
                field.div(self.get(x), x).expect("x is nonzero")
            })
            .collect();
        Ok(numtheory::divisors(order as u64)
            .into_iter()
            .map(|d| d as usize)
            .find(|&d| (d..order).all(|j| ratio[j] == ratio[j - d])))
    }

    /// The cyclotomic form of this table at its least index, if it has one.
    pub fn as_cyclotomic(&self, field: &FieldCtx) -> Result<Option<CyclotomicMap>> {
        Ok(self.least_index(field)?.map(|k| {
            CyclotomicMap::new(
                (0..k)
                    .map(|i| {
                        let x = field.exp(i as u64);
                        field.div(self.get(x), x).expect("x is nonzero")
                    })
                    .collect(),
            )
        }))
    }

    /// Every translate is non-cyclotomic, i.e. has least index exactly `q-1`.
    pub fn is_irregular(&self, field: &FieldCtx) -> Result<bool> {
        if !self.is_orthomorphism(field)? {
            return Err(Error::NotOrthomorphism);
        }
        let order = field.order() as usize - 1;
        for g in field.elements() {
            if self.translate(field, g).least_index(field)? != Some(order) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Number of positions where two tables differ.
    pub fn hamming_distance(&self, other: &PermutationMap) -> usize {
        self.table
            .iter()
            .zip(&other.table)
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// Serialized form of a map: either multipliers with an index, or a full table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapRecord {
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multipliers: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<u32>>,
}

/// A decoded record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyMap {
    Cyclotomic(CyclotomicMap),
    Table(PermutationMap),
}

impl AnyMap {
    pub fn to_table(&self, field: &FieldCtx) -> PermutationMap {
        match self {
            AnyMap::Cyclotomic(m) => m.to_table(field),
            AnyMap::Table(t) => t.clone(),
        }
    }
}

impl MapRecord {
    pub fn cyclotomic(field: &FieldCtx, m: &CyclotomicMap) -> Self {
        MapRecord {
            field: field.descriptor(),
            index: Some(m.index()),
            multipliers: Some(m.encodings()),
            table: None,
        }
    }

    pub fn table(field: &FieldCtx, t: &PermutationMap) -> Self {
        MapRecord {
            field: field.descriptor(),
            index: None,
            multipliers: None,
            table: Some(t.encodings()),
        }
    }

    /// Decodes against an already-built field with the same descriptor.
    pub fn decode(&self, field: &FieldCtx) -> Result<AnyMap> {
        if self.field != field.descriptor() {
            return Err(Error::FieldMismatch);
        }
        let check = |v: &[u32]| -> Result<Vec<Elem>> {
            v.iter().map(|&e| field.elem(u64::from(e))).collect()
        };
        match (&self.multipliers, &self.table) {
            (Some(m), None) => {
                if m.is_empty() || self.index.is_some_and(|k| k != m.len()) {
                    return Err(Error::MalformedRecord(
                        "index does not match the multiplier count".into(),
                    ));
                }
                let map = CyclotomicMap::new(check(m)?);
                map.check_field(field)?;
                Ok(AnyMap::Cyclotomic(map))
            }
            (None, Some(t)) => {
                let map = PermutationMap::new(check(t)?);
                map.check_len(field)?;
                Ok(AnyMap::Table(map))
            }
            _ => Err(Error::MalformedRecord(
                "record needs exactly one of multipliers or table".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: &[u32]) -> CyclotomicMap {
        CyclotomicMap::from_encodings(v)
    }

    #[test]
    fn evaluate_examples() {
        let f = FieldCtx::new(5).unwrap();
        let t = m(&[2, 3]);
        assert_eq!(t.evaluate(&f, Elem(2)), Elem(1));
        assert_eq!(t.evaluate(&f, Elem::ZERO), Elem::ZERO);
        let lin = m(&[3]);
        for x in f.elements() {
            assert_eq!(lin.evaluate(&f, x), f.mul(Elem(3), x));
        }
    }

    #[test]
    fn linear_orthomorphisms() {
        let f = FieldCtx::new(7).unwrap();
        assert!(!m(&[1]).is_orthomorphism(&f));
        assert!(!m(&[0]).is_orthomorphism(&f));
        for c in 2..7 {
            assert!(m(&[c]).is_orthomorphism(&f));
        }
        // 3x, 2x and 4x are all bijections
        assert!(m(&[3]).is_strong(&f));
        assert!(!m(&[6]).is_strong(&f));
        let f8 = FieldCtx::new(8).unwrap();
        for c in 2..8 {
            assert_eq!(m(&[c]).is_strong(&f8), m(&[c]).is_orthomorphism(&f8));
        }
    }

    #[test]
    fn f31_with_three_in_class_one() {
        let f = FieldCtx::new(31).unwrap();
        assert_eq!(f.generator(), Elem(3));
        assert!(m(&[3, 9, 2]).is_orthomorphism(&f));
        assert_eq!(m(&[3, 9, 2]).least_index(), 3);
    }

    #[test]
    fn lifting_and_least_index() {
        let f = FieldCtx::new(61).unwrap();
        let t = m(&[8, 31]);
        let l = t.lift_index(&f, 6).unwrap();
        assert_eq!(l, m(&[8, 31, 8, 31, 8, 31]));
        assert_eq!(l.least_index(), 2);
        assert_eq!(m(&[14, 44, 44]).least_index(), 3);
        assert_eq!(m(&[5, 5, 5, 5]).least_index(), 1);
        assert_eq!(m(&[4]).lift_index(&f, 3).unwrap(), m(&[4, 4, 4]));
        assert!(t.lift_index(&f, 3).is_err());
        assert!(t.lift_index(&f, 8).is_err());
        for x in f.elements() {
            assert_eq!(t.evaluate(&f, x), l.evaluate(&f, x));
        }
    }

    #[test]
    fn orthogonality_examples() {
        let f = FieldCtx::new(5).unwrap();
        let a = m(&[2]);
        assert!(!a.is_orthogonal_to(&a, &f).unwrap());
        assert!(a.is_orthogonal_to(&m(&[3]), &f).unwrap());
        let f7 = FieldCtx::new(7).unwrap();
        assert!(m(&[2, 3]).is_orthogonal_to(&m(&[2, 2, 2]), &f7).is_ok());
    }

    #[test]
    fn translation_basics() {
        let f = FieldCtx::new(9).unwrap();
        let t = m(&[5]).to_table(&f);
        assert_eq!(t.translate(&f, Elem::ZERO), t);
        for g in f.elements() {
            assert_eq!(t.translate(&f, g), t);
        }
        assert_eq!(t.least_index(&f).unwrap(), Some(1));
    }

    #[test]
    fn least_index_of_non_fixing_table() {
        let f = FieldCtx::new(7).unwrap();
        let t = PermutationMap::from_fn(&f, |x| f.add(x, Elem::ONE));
        assert_eq!(t.least_index(&f).unwrap(), None);
        let short = PermutationMap::new(vec![Elem::ZERO; 3]);
        assert!(matches!(
            short.least_index(&f),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn table_predicates() {
        let f3 = FieldCtx::new(3).unwrap();
        assert!(!PermutationMap::identity(&f3).is_orthomorphism(&f3).unwrap());
        let dbl = PermutationMap::from_fn(&f3, |x| f3.add(x, x));
        assert!(dbl.is_orthomorphism(&f3).unwrap());
        assert!(PermutationMap::identity(&f3).is_irregular(&f3).is_err());
    }

    #[test]
    fn polynomial_form_of_linear_and_quadratic() {
        let f = FieldCtx::new(13).unwrap();
        assert_eq!(m(&[7]).to_polynomial(&f).unwrap(), vec![Elem(7)]);
        let t = m(&[5, 6]);
        let c = t.to_polynomial(&f).unwrap();
        assert!(!c[1].is_zero());
        for x in f.elements() {
            assert_eq!(evaluate_polynomial(&f, &c, x), t.evaluate(&f, x));
        }
    }

    #[test]
    fn record_round_trip() {
        let f = FieldCtx::new(61).unwrap();
        let t = m(&[8, 31]);
        let r = MapRecord::cyclotomic(&f, &t);
        let json = serde_json::to_string(&r).unwrap();
        let back: MapRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.decode(&f).unwrap(), AnyMap::Cyclotomic(t));
        let other = FieldCtx::new(31).unwrap();
        assert_eq!(back.decode(&other), Err(Error::FieldMismatch));
    }
}
