//! Closed-form counts, character-sum bounds, the `q0` threshold, and exact `|C_k|`, `|D_k|`.

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::numtheory;

/// Largest index accepted by [`count_ck`] unless overridden; cost grows like `(k!)^2 k`.
pub const DEFAULT_COUNT_CAP: usize = 6;

fn check_divides(q: u64, k: u64) -> Result<()> {
    if k == 0 || q < 2 || !(q - 1).is_multiple_of(k) {
        return Err(Error::IndexNotDivisor {
            k,
            order: q.saturating_sub(1),
        });
    }
    Ok(())
}

/// Number of near-linear orthomorphisms of index `k`: `(q-1-k)(q-1-2k)/k^2`, clamped at 0.
pub fn near_linear_count(q: u64, k: u64) -> Result<u64> {
    check_divides(q, k)?;
    if k < 2 {
        return Err(Error::InvalidParameter(
            "near-linear maps need index k >= 2".into(),
        ));
    }
    if q - 1 <= 2 * k {
        return Ok(0);
    }
    Ok((q - 1 - k) * (q - 1 - 2 * k) / (k * k))
}

/// Linear orthomorphisms orthogonal to any near-linear map of index `d`: `(q-3d-1)/d`.
pub fn linear_partner_count(q: u64, d: u64) -> Result<u64> {
    check_divides(q, d)?;
    if d < 2 {
        return Err(Error::InvalidParameter("index d must be at least 2".into()));
    }
    if q < 3 * d + 1 {
        return Err(Error::VacuousRange {
            q: q as u32,
            d: d as u32,
        });
    }
    Ok((q - 3 * d - 1) / d)
}

/// Which lower bound on the solution count is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// `q k^-t - t sqrt(q)`
    Babai,
    /// `q k^-t - (t - 1 - t/k + k^-t) sqrt(q) - t/k`
    Babai2,
}

impl Bound {
    pub fn name(self) -> &'static str {
        match self {
            Bound::Babai => "babai",
            Bound::Babai2 => "babai2",
        }
    }
}

impl std::str::FromStr for Bound {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "babai" => Ok(Bound::Babai),
            "babai2" => Ok(Bound::Babai2),
            _ => Err(Error::InvalidParameter(format!("unknown bound {s:?}"))),
        }
    }
}

/// Parameters of a class-membership system `eta_k(x + a_i) = 1`, `i = 1..t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundParams {
    pub q: u64,
    pub k: u64,
    pub t: u64,
}

/// Integer data of a bound after multiplying through by `k^t`:
/// `k^t * bound = q + offset + sign * sqrt_coeff * sqrt(q)`.
struct Scaled {
    kt: i128,
    offset: i128,
    sqrt_coeff: i128,
}

/// `b * sqrt(q) >= r` for `b >= 0`, exactly.
fn sqrt_ge(b: i128, q: i128, r: i128) -> bool {
    r <= 0 || b * b * q >= r * r
}

/// `b * sqrt(q) < r` for `b >= 0`, exactly.
fn sqrt_lt(b: i128, q: i128, r: i128) -> bool {
    r > 0 && b * b * q < r * r
}

impl BoundParams {
    pub fn new(q: u64, k: u64, t: u64) -> Result<Self> {
        if k < 2 || t < 2 {
            return Err(Error::InvalidParameter(
                "bounds need k >= 2 and t >= 2".into(),
            ));
        }
        check_divides(q, k)?;
        Ok(BoundParams { q, k, t })
    }

    fn scaled(k: u64, t: u64, bound: Bound) -> Result<Scaled> {
        let kt = i128::from(k).checked_pow(t as u32).ok_or(Error::Overflow)?;
        let kt1 = kt / i128::from(k);
        let t = i128::from(t);
        Ok(match bound {
            Bound::Babai => Scaled {
                kt,
                offset: 0,
                sqrt_coeff: t * kt,
            },
            Bound::Babai2 => Scaled {
                kt,
                offset: -t * kt1,
                sqrt_coeff: (t - 1) * kt - t * kt1 + 1,
            },
        })
    }

    /// `(q k^-t - t sqrt q, q k^-t + t sqrt q)`.
    pub fn babai_bounds(&self) -> (f64, f64) {
        let (q, k, t) = (self.q as f64, self.k as f64, self.t as f64);
        let main = q * k.powf(-t);
        (main - t * q.sqrt(), main + t * q.sqrt())
    }

    /// `q k^-t - (t - 1 - t/k + k^-t) sqrt q - t/k`.
    pub fn babai2_lower(&self) -> f64 {
        let (q, k, t) = (self.q as f64, self.k as f64, self.t as f64);
        q * k.powf(-t) - (t - 1.0 - t / k + k.powf(-t)) * q.sqrt() - t / k
    }

    /// Exact test of `lower <= n` for the chosen lower bound.
    pub fn lower_holds(&self, n: u64, bound: Bound) -> Result<bool> {
        let s = Self::scaled(self.k, self.t, bound)?;
        let q = i128::from(self.q);
        // n k^t >= q + offset - c sqrt q  <=>  c sqrt q >= q + offset - n k^t
        Ok(sqrt_ge(
            s.sqrt_coeff,
            q,
            q + s.offset - i128::from(n) * s.kt,
        ))
    }

    /// Exact test of `n <= q k^-t + t sqrt q`.
    pub fn upper_holds(&self, n: u64) -> Result<bool> {
        let s = Self::scaled(self.k, self.t, Bound::Babai)?;
        let q = i128::from(self.q);
        Ok(sqrt_ge(s.sqrt_coeff, q, i128::from(n) * s.kt - q))
    }
}

/// Smallest positive integer `q0` at which the chosen lower bound exceeds 1.
///
/// Multiplying by `k^t` turns the inequality into `q + offset - k^t > c sqrt(q)` with
/// integer `offset` and `c`, which is decided exactly. The float root of the quadratic in
/// `sqrt(q)` only seeds the scan.
pub fn q0_threshold(k: u64, t: u64, bound: Bound) -> Result<u64> {
    if k < 2 || t < 2 {
        return Err(Error::InvalidParameter("q0 needs k >= 2 and t >= 2".into()));
    }
    let s = BoundParams::scaled(k, t, bound)?;
    let holds = |q: i128| sqrt_lt(s.sqrt_coeff, q, q + s.offset - s.kt);
    // q = x^2: x^2 - c x - (kt - offset) = 0
    let c = s.sqrt_coeff as f64;
    let c0 = (s.kt - s.offset) as f64;
    let root = (c + (c * c + 4.0 * c0).sqrt()) / 2.0;
    let mut q = ((root * root).floor() as i128 - 3).max(1);
    while q > 1 && holds(q) {
        q -= 1;
    }
    while !holds(q) {
        q += 1;
    }
    Ok(q as u64)
}

/// Exact number of `x` with `eta_k(x + a) = 1` for every `a` in `shifts`.
pub fn solution_count(field: &FieldCtx, k: u32, shifts: &[Elem]) -> Result<u64> {
    let classes = field.classes(k)?;
    let mut sorted = shifts.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateElement(w[0].enc()));
    }
    for a in shifts {
        field.elem(u64::from(a.enc()))?;
    }
    Ok(field
        .elements()
        .filter(|&x| {
            shifts.iter().all(|&a| {
                let y = field.add(x, a);
                !y.is_zero() && classes.class_unchecked(y) == 0
            })
        })
        .count() as u64)
}

/// All permutations of `0..k` in lexicographic order.
pub(crate) fn permutations(k: usize) -> Vec<Vec<u8>> {
    fn rec(cur: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Vec<u8>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v as u8);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(k), &mut vec![false; k], &mut out);
    out
}

/// Sum over permutations `tau` of `prod_i rows[i][(tau(i) - i) mod k]`, pruning on zero
/// partial products.
fn tau_sum(rows: &[Vec<u64>], i: usize, used: &mut [bool], acc: u128) -> Option<u128> {
    let k = rows.len();
    if i == k {
        return Some(acc);
    }
    let mut total = 0u128;
    for t in 0..k {
        if used[t] {
            continue;
        }
        let cell = rows[i][(t + k - i) % k];
        if cell == 0 {
            continue;
        }
        used[t] = true;
        let sub = tau_sum(rows, i + 1, used, acc.checked_mul(u128::from(cell))?);
        used[t] = false;
        total = total.checked_add(sub?)?;
    }
    Some(total)
}

/// Exact `|C_k(q)|`: the sum over permutation pairs `(sigma, tau)` of `S_k` of
/// `prod_i M(sigma(i) - i, tau(i) - i)`.
pub fn count_ck(field: &FieldCtx, k: u32, cap: usize) -> Result<u128> {
    if k as usize > cap {
        return Err(Error::CapExceeded {
            what: "index",
            value: u64::from(k),
            cap: cap as u64,
        });
    }
    let table = field.classes(k)?.multiplier_class_table();
    let ku = k as usize;
    let sums: Option<Vec<u128>> = permutations(ku)
        .par_iter()
        .map(|sigma| {
            let rows: Vec<Vec<u64>> = (0..ku)
                .map(|i| {
                    let u = ((sigma[i] as usize + ku - i) % ku) as u32;
                    (0..k).map(|v| table.get(u, v)).collect()
                })
                .collect();
            tau_sum(&rows, 0, &mut vec![false; ku], 1)
        })
        .collect();
    sums.ok_or(Error::Overflow)?
        .into_iter()
        .try_fold(0u128, |a, b| a.checked_add(b))
        .ok_or(Error::Overflow)
}

/// Exact `|D_k(q)|` by Möbius inversion over the divisors of `k`.
pub fn count_dk(field: &FieldCtx, k: u32, cap: usize) -> Result<u128> {
    let mut total: i128 = 0;
    for d in numtheory::divisors(u64::from(k)) {
        let mu = numtheory::mobius(u64::from(k) / d);
        if mu == 0 {
            continue;
        }
        let c = i128::try_from(count_ck(field, d as u32, cap)?).map_err(|_| Error::Overflow)?;
        total += i128::from(mu) * c;
    }
    u128::try_from(total).map_err(|_| Error::Overflow)
}

/// `2^{(q-1)/k}`, a lower bound on the number of orthomorphisms when `k > 2`.
pub fn exp_lower_bound(q: u64, k: u64) -> Result<BigUint> {
    check_divides(q, k)?;
    if k <= 2 {
        return Err(Error::InvalidParameter(
            "the exponential bound needs k > 2".into(),
        ));
    }
    Ok(BigUint::from(1u8) << ((q - 1) / k) as usize)
}

/// Fixed-point decimal rendering for bound values in JSON output.
pub fn decimal_string(v: f64) -> String {
    format!("{v:.6}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn near_linear_count_examples() {
        assert_eq!(near_linear_count(11, 2).unwrap(), 12);
        assert_eq!(near_linear_count(31, 3).unwrap(), 72);
        assert_eq!(near_linear_count(7, 3).unwrap(), 0);
        for q in [5u64, 7, 9, 11, 13, 25, 27] {
            assert_eq!(near_linear_count(q, (q - 1) / 2).unwrap(), 0);
            assert_eq!(near_linear_count(q, q - 1).unwrap(), 0);
        }
        assert!(near_linear_count(11, 3).is_err());
    }

    #[test]
    fn linear_partner_examples() {
        assert_eq!(linear_partner_count(31, 3).unwrap(), 7);
        assert_eq!(linear_partner_count(13, 4).unwrap(), 0);
        for q in [7u64, 9, 11, 13, 101] {
            assert_eq!(linear_partner_count(q, 2).unwrap(), (q - 7) / 2);
        }
        assert_eq!(
            linear_partner_count(7, 3).unwrap_err(),
            Error::VacuousRange { q: 7, d: 3 }
        );
    }

    #[test]
    fn q0_values() {
        assert_eq!(q0_threshold(6, 4, Bound::Babai2).unwrap(), 9154945);
        assert_eq!(q0_threshold(6, 4, Bound::Babai).unwrap(), 26876448);
        assert_eq!(q0_threshold(2, 2, Bound::Babai2).unwrap(), 12);
    }

    #[test]
    fn q0_small_case_by_direct_evaluation() {
        // k = t = 2: q/4 - (1 - 1 + 1/4) sqrt(q) - 1 > 1
        let f = |q: f64| q / 4.0 - 0.25 * q.sqrt() - 1.0;
        assert!(f(11.0) < 1.0);
        assert!(f(12.0) > 1.0);
    }

    #[test]
    fn q0_ordering() {
        for k in 2..=6 {
            for t in 2..=6 {
                let a = q0_threshold(k, t, Bound::Babai2).unwrap();
                let b = q0_threshold(k, t, Bound::Babai).unwrap();
                assert!(a <= b, "k={k} t={t}");
                // the floating evaluation agrees away from the boundary
                let p = BoundParams { q: a, k, t };
                assert!(p.babai2_lower() > 1.0 - 1e-6);
            }
        }
    }

    #[test]
    fn solution_count_trivial_cases() {
        let f = FieldCtx::new(13).unwrap();
        assert_eq!(solution_count(&f, 3, &[]).unwrap(), 13);
        assert_eq!(
            solution_count(&f, 1, &[Elem(2), Elem(5), Elem(7)]).unwrap(),
            10
        );
        assert_eq!(
            solution_count(&f, 2, &[Elem(2), Elem(2)]),
            Err(Error::DuplicateElement(2))
        );
    }

    #[test]
    fn counts_of_small_fields() {
        let f5 = FieldCtx::new(5).unwrap();
        assert_eq!(count_ck(&f5, 1, 6).unwrap(), 3);
        assert_eq!(count_ck(&f5, 2, 6).unwrap(), 3);
        assert_eq!(count_dk(&f5, 2, 6).unwrap(), 0);
        assert_eq!(count_dk(&f5, 4, 6).unwrap(), 0);
        let f7 = FieldCtx::new(7).unwrap();
        assert_eq!(count_dk(&f7, 3, 6).unwrap(), 0);
        let f11 = FieldCtx::new(11).unwrap();
        assert!(count_dk(&f11, 2, 6).unwrap() >= 12);
        assert!(matches!(
            count_ck(&f11, 10, 6),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn exponential_bound() {
        assert_eq!(exp_lower_bound(7, 3).unwrap(), BigUint::from(4u8));
        assert_eq!(exp_lower_bound(13, 3).unwrap(), BigUint::from(16u8));
        assert!(exp_lower_bound(13, 2).is_err());
    }

    #[test]
    fn permutation_listing() {
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(1), vec![vec![0]]);
        assert_eq!(permutations(4)[0], vec![0, 1, 2, 3]);
    }
}
