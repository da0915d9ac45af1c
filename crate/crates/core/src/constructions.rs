//! Constructive procedures for cyclotomic orthomorphisms.
//!
//! Every public constructor re-checks its output with the table-level predicates of
//! [`PermutationMap`] before returning it. Candidate scans ascend by encoding and the first
//! valid witness wins, so outputs are reproducible.

use serde::Serialize;

use crate::error::{Error, EvansCondition, Result};
use crate::field::{Elem, FieldCtx};
use crate::numtheory;
use crate::orthomorphism::{AnyMap, CyclotomicMap, PermutationMap};

/// Default number of candidate pairs the greedy orthogonal-set builder tries.
pub const DEFAULT_GREEDY_RETRIES: usize = 64;

/// Default work budget of the near-linear backtracking fallback in [`orthogonal_set`].
pub const DEFAULT_SET_BUDGET: u64 = 20_000_000;

/// `(q, d)` pairs with no member of `D_d` orthogonal to a linear orthomorphism.
pub const DD_LINEAR_EXCEPTIONS: [(u32, u32); 10] = [
    (2, 1),
    (3, 1),
    (3, 2),
    (4, 3),
    (5, 2),
    (5, 4),
    (7, 2),
    (7, 3),
    (7, 6),
    (13, 4),
];

fn require_index(field: &FieldCtx, k: u32) -> Result<()> {
    field.classes(k).map(|_| ())
}

/// `(class(a), class(a - 1))` for `a` not in `{0, 1}`.
fn cell_of(field: &FieldCtx, k: u32, a: Elem) -> (u32, u32) {
    let c = |x: Elem| field.log_unchecked(x) % k;
    (c(a), c(field.sub(a, Elem::ONE)))
}

/// Every near-linear orthomorphism `[a0, a1, .., a1]` of index `k`, ordered by `(a0, a1)`.
pub fn near_linear_all(field: &FieldCtx, k: u32) -> Result<Vec<CyclotomicMap>> {
    require_index(field, k)?;
    if k < 2 {
        return Err(Error::InvalidParameter(
            "near-linear maps need index k >= 2".into(),
        ));
    }
    let ku = k as usize;
    let mut cells: Vec<Vec<Elem>> = vec![Vec::new(); ku * ku];
    for a in field.elements().skip(2) {
        let (u, v) = cell_of(field, k, a);
        cells[u as usize * ku + v as usize].push(a);
    }
    let mut out = Vec::new();
    for a0 in field.elements().skip(2) {
        let (u, v) = cell_of(field, k, a0);
        for &a1 in &cells[u as usize * ku + v as usize] {
            if a1 != a0 {
                out.push(CyclotomicMap::near_linear(a0, a1, ku));
            }
        }
    }
    Ok(out)
}

/// The first near-linear orthomorphism of index `k` in `(a0, a1)` order, without
/// materializing the whole list.
pub fn near_linear_first(field: &FieldCtx, k: u32) -> Result<Option<CyclotomicMap>> {
    require_index(field, k)?;
    if k < 2 {
        return Err(Error::InvalidParameter(
            "near-linear maps need index k >= 2".into(),
        ));
    }
    let ku = k as usize;
    let mut first: Vec<Option<Elem>> = vec![None; ku * ku];
    let mut second: Vec<Option<Elem>> = vec![None; ku * ku];
    for a in field.elements().skip(2) {
        let (u, v) = cell_of(field, k, a);
        let i = u as usize * ku + v as usize;
        if first[i].is_none() {
            first[i] = Some(a);
        } else if second[i].is_none() {
            second[i] = Some(a);
        }
    }
    // the smallest a0 with a nonempty partner set, paired with its smallest partner
    for a0 in field.elements().skip(2) {
        let (u, v) = cell_of(field, k, a0);
        let i = u as usize * ku + v as usize;
        let partner = if first[i] == Some(a0) {
            second[i]
        } else {
            first[i]
        };
        if let Some(a1) = partner {
            return Ok(Some(CyclotomicMap::near_linear(a0, a1, ku)));
        }
    }
    Ok(None)
}

/// All `x` with `class_K(x + a) = 0` for every `a` in `shifts` together with `0` and `-1`,
/// ascending by encoding.
pub fn constrained_solutions(field: &FieldCtx, shifts: &[Elem], big_k: u32) -> Result<Vec<Elem>> {
    let classes = field.classes(big_k)?;
    let mut all = vec![Elem::ZERO, field.neg(Elem::ONE)];
    all.extend_from_slice(shifts);
    Ok(field
        .elements()
        .filter(|&x| {
            all.iter().all(|&a| {
                let y = field.add(x, a);
                !y.is_zero() && classes.class_unchecked(y) == 0
            })
        })
        .collect())
}

/// Two smallest solutions of the class system, giving the near-linear map
/// `[x1, x2, .., x2]` of index `c`.
pub fn near_linear_constrained(
    field: &FieldCtx,
    c: u32,
    shifts: &[Elem],
    big_k: u32,
) -> Result<Option<(Elem, Elem)>> {
    if c == 0 || !big_k.is_multiple_of(c) {
        return Err(Error::InvalidParameter(format!(
            "index {c} does not divide the ambient index {big_k}"
        )));
    }
    let sols = constrained_solutions(field, shifts, big_k)?;
    Ok(match sols.as_slice() {
        [x1, x2, ..] => Some((*x1, *x2)),
        _ => None,
    })
}

/// Data `(h, rho, tau, sigma, r, m, v)` of the half-index builder. Permutations are
/// zero-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvansSystem {
    pub rho: Vec<usize>,
    pub tau: Vec<usize>,
    pub sigma: Vec<i8>,
    pub r: Elem,
    pub m: Vec<Elem>,
    pub v: Vec<Elem>,
}

impl EvansSystem {
    pub fn h(&self) -> usize {
        self.v.len()
    }

    /// Checks the multiplier, difference and nonzero conditions, reporting the first failure.
    pub fn validate(&self, field: &FieldCtx) -> Result<()> {
        if field.characteristic() == 2 {
            return Err(Error::EvenCharacteristic);
        }
        let h = self.h();
        let is_perm = |p: &[usize]| {
            let mut s = p.to_vec();
            s.sort_unstable();
            s == (0..h).collect::<Vec<_>>()
        };
        if h == 0
            || self.m.len() != h
            || self.sigma.len() != h
            || !is_perm(&self.rho)
            || !is_perm(&self.tau)
            || self.sigma.iter().any(|s| s.abs() != 1)
        {
            return Err(Error::InvalidParameter("malformed Evans system".into()));
        }
        let nonzero_violation = |position| Error::EvansViolation {
            condition: EvansCondition::Nonzero,
            position,
        };
        if self.r.is_zero() {
            return Err(nonzero_violation(0));
        }
        if let Some(i) = (0..h).find(|&i| self.m[i].is_zero() || self.v[i].is_zero()) {
            return Err(nonzero_violation(i + 1));
        }
        let f = field;
        for i in 0..h {
            let mut lhs = f.mul(self.m[i], self.v[i]);
            if self.sigma[i] < 0 {
                lhs = f.neg(lhs);
            }
            if lhs != f.mul(self.r, self.v[self.rho[i]]) {
                return Err(Error::EvansViolation {
                    condition: EvansCondition::Multiplier,
                    position: i + 1,
                });
            }
            let lhs = f.mul(f.sub(self.m[i], Elem::ONE), self.v[i]);
            if lhs != f.mul(f.sub(self.r, Elem::ONE), self.v[self.tau[i]]) {
                return Err(Error::EvansViolation {
                    condition: EvansCondition::Difference,
                    position: i + 1,
                });
            }
        }
        if self.m[0] == self.r {
            return Err(nonzero_violation(1));
        }
        if let Some(i) = (1..h).find(|&i| self.m[0] == self.m[i]) {
            return Err(nonzero_violation(i + 1));
        }
        let sq: Vec<Elem> = self.v.iter().map(|&x| f.mul(x, x)).collect();
        for i in 0..h {
            for j in i + 1..h {
                if sq[i] == sq[j] {
                    return Err(nonzero_violation(j + 1));
                }
            }
        }
        Ok(())
    }
}

/// The map `x -> m_i x` on `{+-v_i}` and `x -> r x` elsewhere, verified to be an
/// orthomorphism of least index `(q-1)/2`.
pub fn evans_build(field: &FieldCtx, sys: &EvansSystem) -> Result<PermutationMap> {
    sys.validate(field)?;
    let mut table: Vec<Elem> = field.elements().map(|x| field.mul(sys.r, x)).collect();
    for (&m, &v) in sys.m.iter().zip(&sys.v) {
        let nv = field.neg(v);
        table[v.idx()] = field.mul(m, v);
        table[nv.idx()] = field.mul(m, nv);
    }
    let map = PermutationMap::new(table);
    let half = (field.order() as usize - 1) / 2;
    if !map.is_orthomorphism(field)? || map.least_index(field)? != Some(half) {
        return Err(Error::NotOrthomorphism);
    }
    Ok(map)
}

/// Parameter families for index-`(q-1)/2` systems, named by the square root `xi` they need.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `xi^2 = -3`, `h = 3`, free parameter `v3`
    MinusThree,
    /// `xi^2 = -1`, `h = 4`, free parameter `v3`
    MinusOne,
    /// `xi^2 = -2`, `h = 4`
    MinusTwo,
    /// `xi^2 = 2`, `h = 6`
    Two,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::MinusThree,
        Family::MinusOne,
        Family::MinusTwo,
        Family::Two,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::MinusThree => "minus-three",
            Family::MinusOne => "minus-one",
            Family::MinusTwo => "minus-two",
            Family::Two => "two",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Which parameter family and which roots produced an Evans system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilySystem {
    pub family: Family,
    pub xi: Elem,
    pub v3: Option<Elem>,
    pub system: EvansSystem,
}

/// Small expression helper over one field.
struct Ops<'f>(&'f FieldCtx);

impl Ops<'_> {
    fn i(&self, v: i64) -> Elem {
        self.0.from_int(v)
    }
    fn add(&self, x: Elem, y: Elem) -> Elem {
        self.0.add(x, y)
    }
    fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.0.sub(x, y)
    }
    fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.0.mul(x, y)
    }
    fn div(&self, x: Elem, y: Elem) -> Option<Elem> {
        self.0.div(x, y).ok()
    }
    fn sum(&self, xs: &[Elem]) -> Elem {
        xs.iter().fold(Elem::ZERO, |acc, &x| self.add(acc, x))
    }
    fn prod(&self, xs: &[Elem]) -> Elem {
        xs.iter().fold(Elem::ONE, |acc, &x| self.mul(acc, x))
    }
}

fn perm(one_based: &[usize]) -> Vec<usize> {
    one_based.iter().map(|&i| i - 1).collect()
}

/// Roots of `x^2 = d` to try, smaller encoding first.
fn roots(field: &FieldCtx, d: Elem) -> Vec<Elem> {
    match field.sqrt(d) {
        Some(r) if r == field.neg(r) => vec![r],
        Some(r) => vec![r, field.neg(r)],
        None => Vec::new(),
    }
}

/// Family `-3` parameters (`xi^2 = -3`, `h = 3`) for a given `v3`.
fn minus_three_system(field: &FieldCtx, xi: Elem, v3: Elem) -> Option<EvansSystem> {
    let o = Ops(field);
    let (one, two) = (o.i(1), o.i(2));
    let one_xi = o.add(one, xi);
    // v3 - v3 xi + 1 + xi
    let w = o.sum(&[v3, o.mul(o.i(-1), o.mul(v3, xi)), one_xi]);
    Some(EvansSystem {
        rho: perm(&[2, 3, 1]),
        tau: perm(&[3, 1, 2]),
        sigma: vec![1, 1, 1],
        r: o.div(one_xi, two)?,
        m: vec![
            o.div(one_xi, w)?,
            o.div(o.mul(one_xi, v3), two)?,
            o.div(o.sum(&[o.mul(two, v3), o.i(-1), xi]), o.mul(two, v3))?,
        ],
        v: vec![o.div(w, two)?, one, v3],
    })
}

fn minus_three_excluded(field: &FieldCtx, xi: Elem, x: Elem) -> bool {
    let o = Ops(field);
    let xx = o.mul(xi, x);
    let factors = [
        x,
        o.sub(o.mul(x, x), o.i(1)),
        o.sum(&[o.mul(o.i(2), x), xi, o.i(1)]),
        o.sum(&[o.mul(o.i(2), x), xi, o.i(-1)]),
        o.sum(&[xx, x, o.i(-2)]),
        o.sum(&[xx, o.mul(o.i(-1), x), o.i(-2)]),
        o.sum(&[xx, o.mul(o.i(-1), x), o.i(-1), o.mul(o.i(-1), xi)]),
        o.sum(&[xx, o.mul(o.i(-1), x), o.i(-3), o.mul(o.i(-1), xi)]),
        o.sum(&[xx, o.mul(o.i(-3), x), o.i(-1), o.mul(o.i(-1), xi)]),
    ];
    o.prod(&factors).is_zero()
}

/// Family `-1` parameters (`xi^2 = -1`, `h = 4`) for a given `v3`.
fn minus_one_system(field: &FieldCtx, xi: Elem, v3: Elem) -> Option<EvansSystem> {
    let o = Ops(field);
    let (one, two) = (o.i(1), o.i(2));
    let a = o.sum(&[v3, o.i(-1), xi]); // v3 - 1 + xi
    let b = o.sum(&[v3, o.mul(v3, xi), o.i(-1)]); // v3 + v3 xi - 1
    Some(EvansSystem {
        rho: perm(&[2, 3, 4, 1]),
        tau: perm(&[4, 1, 2, 3]),
        sigma: vec![1, 1, 1, 1],
        r: o.div(o.add(xi, one), two)?,
        m: vec![
            o.div(o.sub(xi, one), o.mul(two, a))?,
            o.div(o.mul(o.add(one, xi), v3), two)?,
            o.div(o.sum(&[o.mul(two, v3), o.i(-1), xi]), o.mul(two, v3))?,
            o.div(o.sub(b, one), o.mul(two, b))?,
        ],
        v: vec![o.div(a, xi)?, one, v3, o.div(b, xi)?],
    })
}

fn minus_one_excluded(field: &FieldCtx, xi: Elem, x: Elem) -> bool {
    let o = Ops(field);
    let xx = o.mul(xi, x);
    let factors = [
        x,
        o.sub(o.mul(x, x), o.i(1)),
        o.add(x, xi),
        o.sum(&[x, xi, o.i(-1)]),
        o.sum(&[o.mul(o.i(2), x), xi, o.i(-1)]),
        o.sum(&[x, o.mul(o.i(2), xi), o.i(-1)]),
        o.sum(&[x, xx, o.i(-2)]),
        o.sum(&[x, xx, o.i(-1)]),
        o.sum(&[x, xx, o.i(-1), xi]),
        o.sum(&[o.mul(o.i(2), x), xi, xx, o.i(-2)]),
        o.sum(&[o.mul(o.i(2), xx), x, o.i(-1)]),
    ];
    o.prod(&factors).is_zero()
}

/// Family `-2` parameters (`xi^2 = -2`, `h = 4`).
fn minus_two_system(field: &FieldCtx, xi: Elem) -> Option<EvansSystem> {
    let o = Ops(field);
    let two = o.i(2);
    Some(EvansSystem {
        rho: perm(&[4, 3, 2, 1]),
        tau: perm(&[3, 1, 4, 2]),
        sigma: vec![-1, -1, -1, 1],
        r: o.sub(o.i(1), xi),
        m: vec![
            o.add(o.div(xi, two)?, o.i(1)),
            o.div(o.add(xi, two), o.sub(xi, two))?,
            o.i(3),
            o.add(xi, two),
        ],
        v: vec![o.i(-2), o.sub(o.i(-1), xi), o.i(1), xi],
    })
}

/// Family `2` parameters (`xi^2 = 2`, `h = 6`).
fn two_system(field: &FieldCtx, xi: Elem) -> Option<EvansSystem> {
    let o = Ops(field);
    let two = o.i(2);
    let three_xi = o.mul(o.i(3), xi);
    Some(EvansSystem {
        rho: perm(&[5, 4, 2, 1, 6, 3]),
        tau: perm(&[2, 3, 1, 6, 4, 5]),
        sigma: vec![1, -1, -1, 1, 1, -1],
        r: xi,
        m: vec![
            two,
            o.sub(o.i(6), o.mul(o.i(4), xi)),
            o.div(xi, o.sub(o.i(3), xi))?,
            o.div(o.sub(xi, two), o.sub(three_xi, o.i(4)))?,
            o.add(two, o.mul(two, xi)),
            o.add(o.i(-1), o.div(three_xi, two)?),
        ],
        v: vec![
            o.add(o.i(-1), xi),
            o.i(1),
            o.add(o.i(-3), xi),
            o.sub(o.i(4), three_xi),
            o.sub(two, o.div(two, xi)?),
            two,
        ],
    })
}

/// First valid `-3` or `-1` family system over the given roots, scanning `v3` upward past the
/// roots of the exclusion polynomial.
fn scan_v3(
    field: &FieldCtx,
    family: Family,
    xis: &[Elem],
    v3_override: Option<Elem>,
) -> Result<FamilySystem> {
    for &xi in xis {
        let candidates: Vec<Elem> = match v3_override {
            Some(v) => vec![v],
            None => field.elements().collect(),
        };
        for v3 in candidates {
            let excluded = match family {
                Family::MinusThree => minus_three_excluded(field, xi, v3),
                _ => minus_one_excluded(field, xi, v3),
            };
            if excluded && v3_override.is_none() {
                continue;
            }
            let sys = match family {
                Family::MinusThree => minus_three_system(field, xi, v3),
                _ => minus_one_system(field, xi, v3),
            };
            if let Some(system) = sys {
                if system.validate(field).is_ok() {
                    return Ok(FamilySystem {
                        family,
                        xi,
                        v3: Some(v3),
                        system,
                    });
                }
            }
        }
    }
    Err(Error::ConstraintNotSatisfied(format!(
        "no valid v3 for the {family} family over F_{}",
        field.order()
    )))
}

/// The first root whose system validates, or else the first root's system as is.
fn fixed_xi(field: &FieldCtx, family: Family, xis: &[Elem]) -> Result<FamilySystem> {
    let build = |xi: Elem| match family {
        Family::MinusTwo => minus_two_system(field, xi),
        _ => two_system(field, xi),
    };
    let mut fallback = None;
    for &xi in xis {
        if let Some(system) = build(xi) {
            let ex = FamilySystem {
                family,
                xi,
                v3: None,
                system,
            };
            if ex.system.validate(field).is_ok() {
                return Ok(ex);
            }
            fallback.get_or_insert(ex);
        }
    }
    fallback.ok_or_else(|| {
        Error::ConstraintNotSatisfied(format!(
            "the {family} family divides by zero over F_{}",
            field.order()
        ))
    })
}

/// The Evans system of a parameter family, under that family's field constraints.
///
/// The `-3` and `-1` families scan `v3` and always return a validated system. The other two
/// have no free parameter; they return the system for the first root that validates, or the
/// preferred root's system unvalidated, so callers must run [`EvansSystem::validate`].
pub fn family_system(field: &FieldCtx, family: Family) -> Result<FamilySystem> {
    let (q, p) = (field.order(), field.characteristic());
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let unmet = |what: &str| {
        Err(Error::ConstraintNotSatisfied(format!(
            "{family} family: {what}"
        )))
    };
    match family {
        Family::MinusThree => {
            if q <= 10 {
                return unmet("needs q > 10");
            }
            let xis = roots(field, field.from_int(-3));
            if xis.is_empty() {
                return unmet("-3 is not a square");
            }
            scan_v3(field, Family::MinusThree, &xis, None)
        }
        Family::MinusOne => {
            if q <= 12 {
                return unmet("needs q > 12");
            }
            let xis = roots(field, field.from_int(-1));
            if xis.is_empty() {
                return unmet("-1 is not a square");
            }
            scan_v3(field, Family::MinusOne, &xis, None)
        }
        Family::MinusTwo => {
            if p <= 3 {
                return unmet("needs characteristic > 3");
            }
            let xis = if p == 11 {
                // xi = -3 makes v_1 = -v_2
                vec![field.from_int(3)]
            } else {
                roots(field, field.from_int(-2))
            };
            if xis.is_empty() {
                return unmet("-2 is not a square");
            }
            fixed_xi(field, Family::MinusTwo, &xis)
        }
        Family::Two => {
            if [3, 7, 17].contains(&p) {
                return unmet("characteristic must avoid 3, 7 and 17");
            }
            let xis = if p == 23 {
                // xi = 5 makes v_3 = v_6
                vec![field.from_int(-5)]
            } else {
                roots(field, field.from_int(2))
            };
            if xis.is_empty() {
                return unmet("2 is not a square");
            }
            fixed_xi(field, Family::Two, &xis)
        }
    }
}

/// Largest `h` tried by [`search_evans_system`].
pub const DEFAULT_EVANS_MAX_H: usize = 6;

/// Nonzero kernel vector of a singular `h x h` matrix with one-dimensional kernel.
fn kernel_vector(field: &FieldCtx, mut rows: Vec<Vec<Elem>>) -> Option<Vec<Elem>> {
    let h = rows.len();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..h {
        let Some(pr) = (rank..h).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, pr);
        let iv = field.inv(rows[rank][c]).ok()?;
        for x in rows[rank].iter_mut() {
            *x = field.mul(*x, iv);
        }
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            let f = row[c];
            if i != rank && !f.is_zero() {
                for (x, &p) in row.iter_mut().zip(&pivot) {
                    *x = field.sub(*x, field.mul(f, p));
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    if rank + 1 != h {
        return None;
    }
    let free = (0..h).find(|c| !pivots.contains(c))?;
    let mut v = vec![Elem::ZERO; h];
    v[free] = Elem::ONE;
    for (i, &c) in pivots.iter().enumerate() {
        v[c] = field.neg(rows[i][free]);
    }
    Some(v)
}

/// One permutation per cycle type of `S_h`, built from consecutive cycles.
fn cycle_type_representatives(h: usize) -> Vec<Vec<usize>> {
    fn partitions(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            cur.push(part);
            partitions(n - part, part, cur, out);
            cur.pop();
        }
    }
    let mut parts = Vec::new();
    partitions(h, h, &mut Vec::new(), &mut parts);
    parts
        .into_iter()
        .map(|p| {
            let mut perm = vec![0; h];
            let mut start = 0;
            for len in p {
                for i in 0..len {
                    perm[start + i] = start + (i + 1) % len;
                }
                start += len;
            }
            perm
        })
        .collect()
}

/// Moves position `i` to the front, conjugating `rho` and `tau` by the swap.
fn swap_to_front(sys: &EvansSystem, i: usize) -> EvansSystem {
    let sw = |x: usize| match x {
        0 => i,
        x if x == i => 0,
        x => x,
    };
    let h = sys.h();
    let mut out = sys.clone();
    for j in 0..h {
        let src = sw(j);
        out.rho[j] = sw(sys.rho[src]);
        out.tau[j] = sw(sys.tau[src]);
        out.sigma[j] = sys.sigma[src];
        out.m[j] = sys.m[src];
        out.v[j] = sys.v[src];
    }
    out
}

/// Searches for any valid Evans system with `2 <= h <= max_h`.
///
/// For fixed `(rho, tau, sigma, r)` the two conditions are linear in `v` once the
/// multipliers are eliminated through `m_i = sigma_i r v_rho(i) / v_i`, so each candidate
/// reduces to a kernel computation. Relabelling positions conjugates `rho` and `tau`, so
/// `rho` runs over one representative per cycle type; the position whose multiplier is
/// distinguished is then moved to the front. Candidates are scanned by `h`, `rho`, `tau`,
/// `sigma`, then `r` ascending.
pub fn search_evans_system(field: &FieldCtx, max_h: usize) -> Option<EvansSystem> {
    if field.characteristic() == 2 {
        return None;
    }
    for h in 2..=max_h {
        let taus = crate::counting::permutations(h);
        for rho in cycle_type_representatives(h) {
            for tau in &taus {
                for signs in 0u32..1 << h {
                    let sigma: Vec<i8> = (0..h)
                        .map(|i| if signs >> i & 1 == 1 { -1 } else { 1 })
                        .collect();
                    if let Some(sys) = evans_for_shape(field, &rho, tau, &sigma) {
                        return Some(sys);
                    }
                }
            }
        }
    }
    None
}

fn evans_for_shape(
    field: &FieldCtx,
    rho: &[usize],
    tau: &[u8],
    sigma: &[i8],
) -> Option<EvansSystem> {
    let h = rho.len();
    for r in field.elements().skip(2) {
        let rm1 = field.sub(r, Elem::ONE);
        let signed_r = |i: usize| if sigma[i] < 0 { field.neg(r) } else { r };
        let mut rows = vec![vec![Elem::ZERO; h]; h];
        for i in 0..h {
            let (pi, ti) = (rho[i], tau[i] as usize);
            rows[i][pi] = field.add(rows[i][pi], signed_r(i));
            rows[i][i] = field.sub(rows[i][i], Elem::ONE);
            rows[i][ti] = field.sub(rows[i][ti], rm1);
        }
        let Some(v) = kernel_vector(field, rows) else {
            continue;
        };
        if v.iter().any(|x| x.is_zero()) {
            continue;
        }
        let m: Vec<Elem> = (0..h)
            .map(|i| field.div(field.mul(signed_r(i), v[rho[i]]), v[i]).unwrap())
            .collect();
        let sys = EvansSystem {
            rho: rho.to_vec(),
            tau: tau.iter().map(|&x| x as usize).collect(),
            sigma: sigma.to_vec(),
            r,
            m,
            v,
        };
        for i in 0..h {
            let cand = if i == 0 {
                sys.clone()
            } else {
                swap_to_front(&sys, i)
            };
            if cand.validate(field).is_ok() {
                return Some(cand);
            }
        }
    }
    None
}

/// How an element of `D_{(q-1)/2}` was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "route")]
pub enum HalfIndexRoute {
    Doubling,
    Evans(FamilySystem),
    /// The dispatched family failed validation; the `-3` family (when `-3` is a square)
    /// or else a searched system was used.
    EvansSearch {
        attempted: FamilySystem,
        violation: String,
        system: EvansSystem,
    },
}

impl HalfIndexRoute {
    /// The parameter family the dispatcher selected, if any.
    pub fn family(&self) -> Option<Family> {
        match self {
            HalfIndexRoute::Doubling => None,
            HalfIndexRoute::Evans(ex) => Some(ex.family),
            HalfIndexRoute::EvansSearch { attempted, .. } => Some(attempted.family),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfIndex {
    pub map: PermutationMap,
    pub route: HalfIndexRoute,
}

/// The parameter family the dispatcher uses for odd `q >= 9`.
pub fn dispatch_family(field: &FieldCtx) -> Result<FamilySystem> {
    let (q, p) = (field.order(), field.characteristic());
    if q == 9 {
        let i = field
            .sqrt(field.from_int(-1))
            .expect("-1 is a square in F_9");
        scan_v3(
            field,
            Family::MinusThree,
            &[Elem::ZERO],
            Some(field.add(Elem::ONE, i)),
        )
    } else if p == 3 || p == 7 {
        family_system(field, Family::MinusThree)
    } else if q % 4 == 1 {
        family_system(field, Family::MinusOne)
    } else if field.is_square(field.from_int(-2)) {
        family_system(field, Family::MinusTwo)
    } else {
        family_system(field, Family::Two)
    }
}

/// An orthomorphism of least index `(q-1)/2` for odd `q` outside `{5, 7}`.
///
/// When the dispatched table violates one of its conditions over this field, a system
/// from [`search_evans_system`] is built instead and the violation is kept in the route.
pub fn construct_half_index(field: &FieldCtx) -> Result<HalfIndex> {
    let (q, p) = (field.order(), field.characteristic());
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if q == 5 || q == 7 {
        return Err(Error::HalfIndexEmpty(q));
    }
    if q == 3 {
        let map = PermutationMap::from_fn(field, |x| field.add(x, x));
        return Ok(HalfIndex {
            map,
            route: HalfIndexRoute::Doubling,
        });
    }
    let ex = dispatch_family(field)?;
    match ex.system.validate(field) {
        Ok(()) => {
            let map = evans_build(field, &ex.system)?;
            Ok(HalfIndex {
                map,
                route: HalfIndexRoute::Evans(ex),
            })
        }
        Err(violation) => {
            let minus_three = (ex.family != Family::MinusThree)
                .then(|| family_system(field, Family::MinusThree).ok())
                .flatten()
                .map(|e| e.system);
            let system = minus_three
                .or_else(|| search_evans_system(field, DEFAULT_EVANS_MAX_H))
                .ok_or(violation.clone())?;
            let map = evans_build(field, &system)?;
            Ok(HalfIndex {
                map,
                route: HalfIndexRoute::EvansSearch {
                    attempted: ex,
                    violation: violation.to_string(),
                    system,
                },
            })
        }
    }
}

/// Smallest valid `(a, c)` for [`char2_noncyclotomic`]: `a = alpha`, `c` the least
/// element outside `H = {0, 1, a, a+1}`.
pub fn char2_default_params(field: &FieldCtx) -> Result<(Elem, Elem)> {
    if field.characteristic() != 2 || field.order() < 8 {
        return Err(Error::ConstraintNotSatisfied(
            "needs characteristic 2 and q >= 8".into(),
        ));
    }
    let a = Elem(2);
    let h = [Elem::ZERO, Elem::ONE, a, field.add(a, Elem::ONE)];
    let c = field
        .elements()
        .find(|x| !h.contains(x))
        .expect("q >= 8 leaves room outside H");
    Ok((a, c))
}

/// `x -> a x + a(a+1)` on the coset `H + c` of `H = {0, 1, a, a+1}` and `x -> a x`
/// elsewhere; an orthomorphism of least index `q-1` in characteristic 2.
pub fn char2_noncyclotomic(field: &FieldCtx, a: Elem, c: Elem) -> Result<PermutationMap> {
    if field.characteristic() != 2 || field.order() < 8 {
        return Err(Error::ConstraintNotSatisfied(
            "needs characteristic 2 and q >= 8".into(),
        ));
    }
    field.elem(u64::from(a.enc()))?;
    field.elem(u64::from(c.enc()))?;
    if a == Elem::ZERO || a == Elem::ONE {
        return Err(Error::ConstraintNotSatisfied("a must avoid {0, 1}".into()));
    }
    let h = [Elem::ZERO, Elem::ONE, a, field.add(a, Elem::ONE)];
    if h.contains(&c) {
        return Err(Error::ConstraintNotSatisfied("c must lie outside H".into()));
    }
    let coset: Vec<Elem> = h.iter().map(|&x| field.add(x, c)).collect();
    let shift = field.mul(a, field.add(a, Elem::ONE));
    let map = PermutationMap::from_fn(field, |x| {
        let ax = field.mul(a, x);
        if coset.contains(&x) {
            field.add(ax, shift)
        } else {
            ax
        }
    });
    if !map.is_orthomorphism(field)? || map.least_index(field)? != Some(field.order() as usize - 1)
    {
        return Err(Error::NotOrthomorphism);
    }
    Ok(map)
}

/// The coset map of [`char2_noncyclotomic`] over `q = 2^(2k+1)`, checked to be irregular.
pub fn construct_irregular(field: &FieldCtx) -> Result<PermutationMap> {
    let n = field.degree();
    if field.characteristic() != 2 || n < 3 || n.is_multiple_of(2) {
        return Err(Error::ConstraintNotSatisfied(
            "needs q = 2^(2k+1) with k >= 1".into(),
        ));
    }
    let (a, c) = char2_default_params(field)?;
    let t = char2_noncyclotomic(field, a, c)?;
    if !t.is_irregular(field)? {
        return Err(Error::NoWitness(format!(
            "coset map over F_{} has a cyclotomic translate",
            field.order()
        )));
    }
    Ok(t)
}

/// `T_1` of the first near-linear index-2 orthomorphism, checked to have least index `q-1`.
pub fn oddchar_noncyclotomic(field: &FieldCtx) -> Result<PermutationMap> {
    if field.characteristic() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if field.order() <= 5 {
        return Err(Error::NoWitness(format!(
            "no index-2 witness over F_{}",
            field.order()
        )));
    }
    let full = Some(field.order() as usize - 1);
    for theta in near_linear_all(field, 2)? {
        let t = theta.to_table(field).translate(field, Elem::ONE);
        if t.is_orthomorphism(field)? && t.least_index(field)? == full {
            return Ok(t);
        }
    }
    Err(Error::NoWitness(format!(
        "no index-2 translate is non-cyclotomic over F_{}",
        field.order()
    )))
}

/// A non-cyclotomic orthomorphism for any `q > 5`, by characteristic.
pub fn noncyclotomic(field: &FieldCtx) -> Result<PermutationMap> {
    if field.characteristic() == 2 {
        let (a, c) = char2_default_params(field)?;
        char2_noncyclotomic(field, a, c)
    } else {
        oddchar_noncyclotomic(field)
    }
}

/// An orthomorphism of least index exactly `k`, or `None` when `D_k` is empty.
pub fn dk_witness(field: &FieldCtx, k: u32) -> Result<Option<AnyMap>> {
    require_index(field, k)?;
    let q = field.order();
    if k == 1 {
        return Ok((q >= 3).then(|| AnyMap::Cyclotomic(CyclotomicMap::linear(Elem(2)))));
    }
    if k == q - 1 {
        return match noncyclotomic(field) {
            Ok(t) => Ok(Some(AnyMap::Table(t))),
            Err(_) if q <= 5 => Ok(None),
            Err(e) => Err(e),
        };
    }
    if 2 * k == q - 1 {
        return match construct_half_index(field) {
            Ok(h) => Ok(Some(AnyMap::Table(h.map))),
            Err(Error::HalfIndexEmpty(_)) => Ok(None),
            Err(e) => Err(e),
        };
    }
    Ok(near_linear_first(field, k)?.map(AnyMap::Cyclotomic))
}

/// A set of pairwise orthogonal near-linear orthomorphisms and how it was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalSet {
    pub maps: Vec<CyclotomicMap>,
    /// `true` when the class-0 greedy system produced the set, `false` when the
    /// near-linear backtracking fallback was needed.
    pub greedy: bool,
}

fn verify_set(field: &FieldCtx, indices: &[u32], maps: &[CyclotomicMap], strong: bool) -> bool {
    let ok_each = maps.iter().zip(indices).all(|(m, &b)| {
        let t = m.to_table(field);
        m.least_index() == b as usize
            && t.is_orthomorphism(field).unwrap_or(false)
            && t.least_index(field).ok().flatten() == Some(b as usize)
            && (!strong || t.is_strong(field).unwrap_or(false))
    });
    ok_each
        && (0..maps.len()).all(|i| {
            (i + 1..maps.len()).all(|j| {
                maps[i]
                    .to_table(field)
                    .is_orthogonal_to(&maps[j].to_table(field), field)
                    .unwrap_or(false)
            })
        })
}

struct Greedy<'a> {
    field: &'a FieldCtx,
    indices: &'a [u32],
    big_k: u32,
    strong: bool,
    tries_left: usize,
}

impl Greedy<'_> {
    fn run(&mut self, shifts: &mut Vec<Elem>, chosen: &mut Vec<CyclotomicMap>) -> Option<()> {
        let i = chosen.len();
        if i == self.indices.len() {
            return verify_set(self.field, self.indices, chosen, self.strong).then_some(());
        }
        let mut extra = shifts.clone();
        if self.strong {
            extra.push(Elem::ONE);
        }
        let sols = constrained_solutions(self.field, &extra, self.big_k).ok()?;
        for a in 0..sols.len() {
            for b in a + 1..sols.len() {
                if self.tries_left == 0 {
                    return None;
                }
                self.tries_left -= 1;
                let (x1, x2) = (sols[a], sols[b]);
                chosen.push(CyclotomicMap::near_linear(x1, x2, self.indices[i] as usize));
                shifts.push(self.field.neg(x1));
                shifts.push(self.field.neg(x2));
                if self.run(shifts, chosen).is_some() {
                    return Some(());
                }
                shifts.truncate(shifts.len() - 2);
                chosen.pop();
            }
        }
        None
    }
}

/// Depth-first over the pools, smallest first, filtering every later pool down to the
/// candidates orthogonal to each choice. `budget` counts orthogonality checks.
fn backtrack_set(
    field: &FieldCtx,
    pools: Vec<(usize, Vec<CyclotomicMap>)>,
    chosen: &mut Vec<(usize, CyclotomicMap)>,
    budget: &mut u64,
) -> Option<()> {
    let Some(pos) = (0..pools.len()).min_by_key(|&i| pools[i].1.len()) else {
        return Some(());
    };
    let mut rest = pools;
    let (slot, pool) = rest.swap_remove(pos);
    for cand in pool {
        let mut next = Vec::with_capacity(rest.len());
        for (s, p) in &rest {
            let cost = p.len() as u64;
            if *budget < cost {
                *budget = 0;
                return None;
            }
            *budget -= cost;
            let kept: Vec<CyclotomicMap> = p
                .iter()
                .filter(|m| cand.is_orthogonal_to(m, field).unwrap_or(false))
                .cloned()
                .collect();
            if kept.is_empty() {
                break;
            }
            next.push((*s, kept));
        }
        if next.len() < rest.len() {
            continue;
        }
        chosen.push((slot, cand));
        if backtrack_set(field, next, chosen, budget).is_some() {
            return Some(());
        }
        chosen.pop();
        if *budget == 0 {
            return None;
        }
    }
    None
}

/// Pairwise orthogonal near-linear orthomorphisms of least indices `indices`.
///
/// First runs the greedy class-0 system with `K = lcm(indices)`, accumulating the negated
/// multipliers of earlier maps as shifts (plus `1` for strong maps), retrying up to
/// `retries` candidate pairs. If that fails, as it can for fields below the threshold,
/// backtracks over all near-linear maps of each index within `budget` orthogonality checks.
pub fn orthogonal_set(
    field: &FieldCtx,
    indices: &[u32],
    strong: bool,
    retries: usize,
    budget: u64,
) -> Result<Option<OrthogonalSet>> {
    if indices.iter().any(|&b| b < 2) {
        return Err(Error::InvalidParameter("indices must be at least 2".into()));
    }
    let big_k = numtheory::lcm_all(indices.iter().map(|&b| u64::from(b))) as u32;
    require_index(field, big_k)?;
    if indices.is_empty() {
        return Ok(Some(OrthogonalSet {
            maps: Vec::new(),
            greedy: true,
        }));
    }

    let mut greedy = Greedy {
        field,
        indices,
        big_k,
        strong,
        tries_left: retries,
    };
    let mut chosen = Vec::new();
    if greedy.run(&mut Vec::new(), &mut chosen).is_some() {
        return Ok(Some(OrthogonalSet {
            maps: chosen,
            greedy: true,
        }));
    }

    let pools: Vec<Vec<CyclotomicMap>> = indices
        .iter()
        .map(|&b| {
            near_linear_all(field, b).map(|v| {
                v.into_iter()
                    .filter(|m| !strong || m.is_strong(field))
                    .collect()
            })
        })
        .collect::<Result<_>>()?;
    let mut chosen = Vec::new();
    let mut budget = budget;
    if backtrack_set(
        field,
        pools.into_iter().enumerate().collect(),
        &mut chosen,
        &mut budget,
    )
    .is_some()
    {
        chosen.sort_by_key(|(slot, _)| *slot);
        let maps: Vec<CyclotomicMap> = chosen.into_iter().map(|(_, m)| m).collect();
        if verify_set(field, indices, &maps, strong) {
            return Ok(Some(OrthogonalSet {
                maps,
                greedy: false,
            }));
        }
    }
    Ok(None)
}

/// Outcome of the structured search for a member of `D_d` with a linear partner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DdLinear {
    Pair {
        map: AnyMap,
        partner: Elem,
        route: &'static str,
    },
    /// A listed exception: no such pair exists.
    Exception,
    /// Not covered by any structured route; needs exhaustive search.
    Unresolved,
}

/// Smallest `c` not in `{0, 1}` with `[c]` orthogonal to the table.
pub fn first_linear_partner(field: &FieldCtx, t: &PermutationMap) -> Option<Elem> {
    field.elements().skip(2).find(|&c| {
        t.is_orthogonal_to(&CyclotomicMap::linear(c).to_table(field), field)
            .unwrap_or(false)
    })
}

fn verified_pair(
    field: &FieldCtx,
    d: u32,
    map: AnyMap,
    partner: Elem,
    route: &'static str,
) -> Result<DdLinear> {
    let t = map.to_table(field);
    let lin = CyclotomicMap::linear(partner);
    let ok = partner.enc() >= 2
        && t.is_orthomorphism(field)?
        && t.least_index(field)? == Some(d as usize)
        && t.is_orthogonal_to(&lin.to_table(field), field)?;
    if ok {
        Ok(DdLinear::Pair {
            map,
            partner,
            route,
        })
    } else {
        Ok(DdLinear::Unresolved)
    }
}

/// A member of `D_d` orthogonal to a linear orthomorphism, by the structured routes:
/// near-linear maps when `(q-1)/d >= 4`, a translated index-2 map (odd `q`) or the
/// characteristic-2 coset map when `d = q-1`, and the `-1` family system paired with
/// `[1/2]` when `q = 2d+1 = 1 mod 4`.
pub fn construct_dd_orthogonal_linear(field: &FieldCtx, d: u32) -> Result<DdLinear> {
    require_index(field, d)?;
    let q = field.order();
    if DD_LINEAR_EXCEPTIONS.contains(&(q, d)) {
        return Ok(DdLinear::Exception);
    }
    let e = (q - 1) / d;
    if d == 1 {
        if q < 4 {
            return Ok(DdLinear::Unresolved);
        }
        let m = AnyMap::Cyclotomic(CyclotomicMap::linear(Elem(2)));
        return verified_pair(field, d, m, Elem(3), "linear");
    }
    if e >= 4 {
        if let Some(theta) = near_linear_first(field, d)? {
            let t = theta.to_table(field);
            if let Some(c) = first_linear_partner(field, &t) {
                return verified_pair(field, d, AnyMap::Cyclotomic(theta), c, "near-linear");
            }
        }
        return Ok(DdLinear::Unresolved);
    }
    if e == 1 && field.characteristic() == 2 && q >= 8 {
        let (a, c) = char2_default_params(field)?;
        let t = char2_noncyclotomic(field, a, c)?;
        return verified_pair(field, d, AnyMap::Table(t), field.mul(a, a), "char2-coset");
    }
    if e == 1 && q >= 11 {
        for theta in near_linear_all(field, 2)? {
            let t = theta.to_table(field);
            let Some(c) = first_linear_partner(field, &t) else {
                continue;
            };
            for g in field.nonzero() {
                let tg = t.translate(field, g);
                if tg.least_index(field)? == Some(d as usize) {
                    return verified_pair(field, d, AnyMap::Table(tg), c, "translation");
                }
            }
        }
        return Ok(DdLinear::Unresolved);
    }
    if e == 2 && q % 4 == 1 && q >= 13 {
        let ex = family_system(field, Family::MinusOne)?;
        let t = evans_build(field, &ex.system)?;
        let half = field.inv(field.from_int(2))?;
        return verified_pair(field, d, AnyMap::Table(t), half, "minus-one-half");
    }
    Ok(DdLinear::Unresolved)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn near_linear_examples() {
        let f11 = FieldCtx::new(11).unwrap();
        let all = near_linear_all(&f11, 2).unwrap();
        assert_eq!(all.len(), 12);
        assert!(all.iter().all(|m| m.is_orthomorphism(&f11)));
        assert_eq!(near_linear_first(&f11, 2).unwrap().as_ref(), all.first());
        let f7 = FieldCtx::new(7).unwrap();
        assert!(near_linear_all(&f7, 3).unwrap().is_empty());
        assert_eq!(near_linear_first(&f7, 3).unwrap(), None);
        for q in [13u64, 25, 27] {
            let f = FieldCtx::new(q).unwrap();
            assert!(near_linear_all(&f, (f.order() - 1) / 2).unwrap().is_empty());
        }
    }

    #[test]
    fn constrained_pair_for_f11() {
        let f = FieldCtx::new(11).unwrap();
        let (x1, x2) = near_linear_constrained(&f, 2, &[], 2).unwrap().unwrap();
        // brute scan of x with x and x-1 both quadratic residues
        let qr: Vec<u32> = (1..11u32).map(|x| x * x % 11).collect();
        let ok = |x: u32| qr.contains(&x) && qr.contains(&((x + 10) % 11));
        let sols: Vec<u32> = (0..11).filter(|&x| ok(x)).collect();
        assert_eq!((x1.enc(), x2.enc()), (sols[0], sols[1]));
        assert!(CyclotomicMap::near_linear(x1, x2, 2).is_orthomorphism(&f));
    }

    #[test]
    fn evans_rejects_degenerate_systems() {
        let f = FieldCtx::new(13).unwrap();
        let mut ex = family_system(&f, Family::MinusOne).unwrap().system;
        ex.m[0] = ex.r;
        assert!(matches!(ex.validate(&f), Err(Error::EvansViolation { .. })));
        let f9 = FieldCtx::new(9).unwrap();
        let f8 = FieldCtx::new(8).unwrap();
        let sys = construct_half_index(&f9).unwrap();
        if let HalfIndexRoute::Evans(ex) = sys.route {
            assert_eq!(evans_build(&f8, &ex.system), Err(Error::EvenCharacteristic));
        } else {
            panic!("q = 9 uses an Evans system");
        }
    }

    #[test]
    fn minus_three_family_over_f13() {
        let f = FieldCtx::new(13).unwrap();
        let ex = family_system(&f, Family::MinusThree).unwrap();
        assert_eq!(f.mul(ex.xi, ex.xi), f.from_int(-3));
        let t = evans_build(&f, &ex.system).unwrap();
        assert_eq!(t.least_index(&f).unwrap(), Some(6));
    }

    #[test]
    fn half_index_small_cases() {
        let f3 = FieldCtx::new(3).unwrap();
        let h = construct_half_index(&f3).unwrap();
        assert_eq!(h.route, HalfIndexRoute::Doubling);
        assert_eq!(h.map.encodings(), vec![0, 2, 1]);
        let f9 = FieldCtx::new(9).unwrap();
        let h = construct_half_index(&f9).unwrap();
        match &h.route {
            HalfIndexRoute::Evans(ex) => {
                assert_eq!(ex.family, Family::MinusThree);
                assert_eq!(ex.xi, Elem::ZERO);
            }
            other => panic!("unexpected route {other:?}"),
        }
        assert_eq!(h.map.least_index(&f9).unwrap(), Some(4));
        for q in [5u64, 7] {
            let f = FieldCtx::new(q).unwrap();
            assert_eq!(
                construct_half_index(&f).unwrap_err(),
                Error::HalfIndexEmpty(q as u32)
            );
        }
    }

    #[test]
    fn characteristic_overrides() {
        let f11 = FieldCtx::new(11).unwrap();
        let ex3 = family_system(&f11, Family::MinusTwo).unwrap();
        assert_eq!(ex3.xi, Elem(3));
        assert!(ex3.system.validate(&f11).is_ok());
        let f23 = FieldCtx::new(23).unwrap();
        let ex4 = family_system(&f23, Family::Two).unwrap();
        assert_eq!(ex4.xi, Elem(18));
    }

    #[test]
    fn table4_difference_condition_fails_at_position_5() {
        for q in [23u64, 41, 47, 71, 73] {
            let f = FieldCtx::new(q).unwrap();
            let ex = family_system(&f, Family::Two).unwrap();
            assert_eq!(
                ex.system.validate(&f),
                Err(Error::EvansViolation {
                    condition: EvansCondition::Difference,
                    position: 5
                })
            );
        }
    }

    #[test]
    fn searched_systems_cover_table4_fields() {
        for q in [23u64, 47, 71] {
            let f = FieldCtx::new(q).unwrap();
            let h = construct_half_index(&f).unwrap();
            assert!(matches!(h.route, HalfIndexRoute::EvansSearch { .. }));
            assert_eq!(h.route.family(), Some(Family::Two));
            assert_eq!(h.map.least_index(&f).unwrap(), Some((q as usize - 1) / 2));
        }
    }

    #[test]
    fn char2_construction() {
        let f4 = FieldCtx::new(4).unwrap();
        assert!(char2_default_params(&f4).is_err());
        let f8 = FieldCtx::new(8).unwrap();
        let (a, c) = char2_default_params(&f8).unwrap();
        let t = char2_noncyclotomic(&f8, a, c).unwrap();
        assert_eq!(t.least_index(&f8).unwrap(), Some(7));
        assert!(char2_noncyclotomic(&f8, a, Elem::ONE).is_err());
        assert!(char2_noncyclotomic(&f8, Elem::ONE, c).is_err());
    }

    #[test]
    fn irregular_family() {
        for q in [8u64, 32] {
            let f = FieldCtx::new(q).unwrap();
            assert!(construct_irregular(&f).unwrap().is_irregular(&f).unwrap());
        }
        for q in [4u64, 16, 9] {
            assert!(construct_irregular(&FieldCtx::new(q).unwrap()).is_err());
        }
        // translates by g in H + c agree with a x at exactly 3 nonzero points
        let f8 = FieldCtx::new(8).unwrap();
        let (a, c) = char2_default_params(&f8).unwrap();
        let t = char2_noncyclotomic(&f8, a, c).unwrap();
        let tg = t.translate(&f8, c);
        let hits = f8.nonzero().filter(|&x| tg.get(x) == f8.mul(a, x)).count();
        assert_eq!(hits, 3);
    }

    #[test]
    fn odd_noncyclotomic() {
        for q in [7u64, 9] {
            let f = FieldCtx::new(q).unwrap();
            let t = oddchar_noncyclotomic(&f).unwrap();
            assert_eq!(t.least_index(&f).unwrap(), Some(q as usize - 1));
        }
        let f5 = FieldCtx::new(5).unwrap();
        assert!(oddchar_noncyclotomic(&f5).is_err());
    }

    #[test]
    fn orthogonal_set_small() {
        let f7 = FieldCtx::new(7).unwrap();
        let s = orthogonal_set(&f7, &[2], false, 64, 1000).unwrap().unwrap();
        assert_eq!(s.maps.len(), 1);
        let f5 = FieldCtx::new(5).unwrap();
        assert_eq!(orthogonal_set(&f5, &[2], false, 64, 1000).unwrap(), None);
        assert!(orthogonal_set(&f7, &[1], false, 64, 1000).is_err());
    }

    #[test]
    fn dd_linear_routes() {
        let f13 = FieldCtx::new(13).unwrap();
        assert_eq!(
            construct_dd_orthogonal_linear(&f13, 4).unwrap(),
            DdLinear::Exception
        );
        match construct_dd_orthogonal_linear(&f13, 2).unwrap() {
            DdLinear::Pair { route, .. } => assert_eq!(route, "near-linear"),
            other => panic!("{other:?}"),
        }
        match construct_dd_orthogonal_linear(&f13, 6).unwrap() {
            DdLinear::Pair { route, partner, .. } => {
                assert_eq!(route, "minus-one-half");
                assert_eq!(partner, Elem(7));
            }
            other => panic!("{other:?}"),
        }
    }
}
