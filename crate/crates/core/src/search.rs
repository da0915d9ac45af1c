//! Exhaustive enumeration and existence searches.
//!
//! Verdicts are `witness` (a verified example), `proven-empty` (the whole space was
//! enumerated within budget), `exhausted` (budget or cap reached first) or `skipped`.

use serde::Serialize;

use crate::constructions::{self, DdLinear};
use crate::counting;
use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::numtheory;
use crate::orthomorphism::{AnyMap, CyclotomicMap, MapRecord, PermutationMap};

/// Largest order for which exhaustive searches may return `proven-empty`.
pub const DEFAULT_EXHAUSTIVE_CAP: u32 = 64;

/// Default number of search nodes before a search gives up.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub cap: u32,
    pub budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            cap: DEFAULT_EXHAUSTIVE_CAP,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Witness,
    ProvenEmpty,
    Exhausted,
    Skipped,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Witness => "witness",
            Verdict::ProvenEmpty => "proven-empty",
            Verdict::Exhausted => "exhausted",
            Verdict::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub claim: String,
    pub q: u32,
    pub indices: Vec<u32>,
    pub verdict: Verdict,
    pub witness: Vec<MapRecord>,
    /// Encoding of the generator fixing the class labels.
    pub generator: u32,
    pub work: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SearchReport {
    fn new(claim: String, field: &FieldCtx, indices: Vec<u32>, verdict: Verdict) -> Self {
        SearchReport {
            claim,
            q: field.order(),
            indices,
            verdict,
            witness: Vec::new(),
            generator: field.generator().enc(),
            work: 0,
            note: None,
        }
    }
}

fn record(field: &FieldCtx, m: &AnyMap) -> MapRecord {
    match m {
        AnyMap::Cyclotomic(c) => MapRecord::cyclotomic(field, c),
        AnyMap::Table(t) => MapRecord::table(field, t),
    }
}

/// Streams the members of `D_k` by running over permutation pairs `(s, t)` of `Z_k` and the
/// Cartesian product of the multiplier cells `M(s(i) - i, t(i) - i)`.
pub struct DkStream {
    k: usize,
    perms: Vec<Vec<u8>>,
    cells: Vec<Vec<Elem>>,
    si: usize,
    ti: usize,
    lists: Vec<usize>,
    odometer: Vec<usize>,
    fresh: bool,
}

/// Members of `D_k` in a deterministic order.
pub fn enumerate_dk(field: &FieldCtx, k: u32, budget: u64) -> Result<DkStream> {
    let classes = field.classes(k)?;
    let ku = k as usize;
    let fact: u64 = (1..=k as u64).product();
    if fact.saturating_mul(fact) > budget {
        return Err(Error::BudgetExceeded(budget));
    }
    let mut cells = vec![Vec::new(); ku * ku];
    for a in field.elements().skip(2) {
        let u = classes.class_unchecked(a) as usize;
        let v = classes.class_unchecked(field.sub(a, Elem::ONE)) as usize;
        cells[u * ku + v].push(a);
    }
    Ok(DkStream {
        k: ku,
        perms: counting::permutations(ku),
        cells,
        si: 0,
        ti: 0,
        lists: Vec::new(),
        odometer: Vec::new(),
        fresh: true,
    })
}

impl DkStream {
    /// Loads the cells of the current pair, returning false when one is empty.
    fn load(&mut self) -> bool {
        let k = self.k;
        let (s, t) = (&self.perms[self.si], &self.perms[self.ti]);
        self.lists = (0..k)
            .map(|i| {
                let u = (s[i] as usize + k - i) % k;
                let v = (t[i] as usize + k - i) % k;
                u * k + v
            })
            .collect();
        self.odometer = vec![0; k];
        self.lists.iter().all(|&c| !self.cells[c].is_empty())
    }

    fn advance_pair(&mut self) -> bool {
        self.ti += 1;
        if self.ti == self.perms.len() {
            self.ti = 0;
            self.si += 1;
        }
        self.si < self.perms.len()
    }

    fn step_odometer(&mut self) -> bool {
        for i in (0..self.k).rev() {
            self.odometer[i] += 1;
            if self.odometer[i] < self.cells[self.lists[i]].len() {
                return true;
            }
            self.odometer[i] = 0;
        }
        false
    }
}

impl Iterator for DkStream {
    type Item = CyclotomicMap;

    fn next(&mut self) -> Option<CyclotomicMap> {
        loop {
            if self.si >= self.perms.len() {
                return None;
            }
            if self.fresh {
                self.fresh = false;
                if !self.load() {
                    self.fresh = true;
                    if !self.advance_pair() {
                        self.si = self.perms.len();
                    }
                    continue;
                }
            } else if !self.step_odometer() {
                self.fresh = true;
                if !self.advance_pair() {
                    self.si = self.perms.len();
                }
                continue;
            }
            let m = CyclotomicMap::new(
                (0..self.k)
                    .map(|i| self.cells[self.lists[i]][self.odometer[i]])
                    .collect(),
            );
            if m.least_index() == self.k {
                return Some(m);
            }
        }
    }
}

struct Frame {
    var: usize,
    cands: Vec<Elem>,
    next: usize,
    current: Option<Elem>,
}

/// Depth-first search for multiplier lists `[a_0, .., a_{b-1}]` such that `theta - psi`
/// permutes the classes of index `l` for every constraint map `psi`.
///
/// The unknown of index `b` is lifted to the ambient index `l`; position `i` of the lift
/// uses variable `i mod b`. Each step assigns the variable with the fewest remaining
/// candidates (ties to the lowest position), trying candidates in ascending encoding.
/// Iterating yields every solution; `exhausted()` reports whether the budget cut it short.
pub struct ExtensionSearch<'f> {
    field: &'f FieldCtx,
    b: usize,
    l: usize,
    cls: Vec<u32>,
    constraints: Vec<Vec<Elem>>,
    used: Vec<Vec<bool>>,
    assign: Vec<Option<Elem>>,
    assigned: usize,
    exact_index: bool,
    distinct: Option<(usize, usize)>,
    stack: Vec<Frame>,
    started: bool,
    done: bool,
    exhausted: bool,
    work: u64,
    budget: u64,
}

impl<'f> ExtensionSearch<'f> {
    /// `constraints` are cyclotomic maps whose indices divide `l`; pass the zero map and
    /// `[1]` to require an orthomorphism.
    pub fn new(
        field: &'f FieldCtx,
        b: usize,
        l: usize,
        constraints: &[CyclotomicMap],
        budget: u64,
    ) -> Result<Self> {
        let classes = field.classes(l as u32)?;
        if b == 0 || !l.is_multiple_of(b) {
            return Err(Error::InvalidParameter(format!(
                "index {b} does not divide the ambient index {l}"
            )));
        }
        let lifted = constraints
            .iter()
            .map(|c| {
                c.check_field(field)?;
                Ok(c.lift_index(field, l)?.multipliers().to_vec())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExtensionSearch {
            field,
            b,
            l,
            cls: classes.class_table(),
            used: vec![vec![false; l]; lifted.len()],
            constraints: lifted,
            assign: vec![None; b],
            assigned: 0,
            exact_index: false,
            distinct: None,
            stack: Vec::new(),
            started: false,
            done: false,
            exhausted: false,
            work: 0,
            budget,
        })
    }

    /// The standard constraints of an orthomorphism: `theta` and `theta - id` permute.
    pub fn orthomorphism_constraints() -> Vec<CyclotomicMap> {
        vec![
            CyclotomicMap::linear(Elem::ZERO),
            CyclotomicMap::linear(Elem::ONE),
        ]
    }

    /// Only yield lists of least index exactly `b`.
    pub fn exact_index(mut self) -> Self {
        self.exact_index = true;
        self
    }

    /// Requires `a_0 != a_{b/p}` for the smallest prime `p | b`. Valid as a symmetry
    /// reduction only when every constraint is linear, since rotating the multiplier list
    /// preserves orthogonality to linear maps.
    pub fn break_rotation(mut self) -> Self {
        if let Some(&p) = numtheory::prime_divisors(self.b as u64).first() {
            self.distinct = Some((0, self.b / p as usize));
        }
        self
    }

    pub fn work(&self) -> u64 {
        self.work
    }

    pub fn exhausted(&self) -> bool {
        self.exhausted
    }

    /// Targets of variable `j` taking value `a`, per constraint; `None` on a clash.
    fn fits(&self, j: usize, a: Elem) -> bool {
        if let Some((x, y)) = self.distinct {
            let other = if j == x {
                Some(y)
            } else if j == y {
                Some(x)
            } else {
                None
            };
            if let Some(o) = other {
                if self.assign[o] == Some(a) {
                    return false;
                }
            }
        }
        let reps = self.l / self.b;
        for (c, psi) in self.constraints.iter().enumerate() {
            let used = &self.used[c];
            let mut local = [usize::MAX; 8];
            let mut spill = Vec::new();
            for t in 0..reps {
                let i = j + t * self.b;
                let d = self.field.sub(a, psi[i]);
                if d.is_zero() {
                    return false;
                }
                let target = (i + self.cls[d.idx()] as usize) % self.l;
                if used[target] {
                    return false;
                }
                if reps > 1 {
                    let seen = if t < 8 {
                        local[..t].contains(&target)
                    } else {
                        local.contains(&target) || spill.contains(&target)
                    };
                    if seen {
                        return false;
                    }
                    if t < 8 {
                        local[t] = target;
                    } else {
                        spill.push(target);
                    }
                }
            }
        }
        true
    }

    fn set(&mut self, j: usize, a: Elem, on: bool) {
        let reps = self.l / self.b;
        for c in 0..self.constraints.len() {
            for t in 0..reps {
                let i = j + t * self.b;
                let d = self.field.sub(a, self.constraints[c][i]);
                let target = (i + self.cls[d.idx()] as usize) % self.l;
                self.used[c][target] = on;
            }
        }
        self.assign[j] = if on { Some(a) } else { None };
        if on {
            self.assigned += 1;
        } else {
            self.assigned -= 1;
        }
    }

    /// Unassigned variable with the fewest candidates, or `None` if some variable has none.
    fn choose(&self) -> Option<(usize, Vec<Elem>)> {
        let mut best: Option<(usize, Vec<Elem>)> = None;
        for j in 0..self.b {
            if self.assign[j].is_some() {
                continue;
            }
            let limit = best.as_ref().map_or(usize::MAX, |(_, c)| c.len());
            let mut cands = Vec::new();
            for a in self.field.nonzero() {
                if self.fits(j, a) {
                    cands.push(a);
                    if cands.len() >= limit {
                        break;
                    }
                }
            }
            if cands.is_empty() {
                return None;
            }
            if cands.len() < limit {
                let single = cands.len() == 1;
                best = Some((j, cands));
                if single {
                    break;
                }
            }
        }
        best
    }

    fn solution(&self) -> CyclotomicMap {
        CyclotomicMap::new(self.assign.iter().map(|a| a.expect("complete")).collect())
    }
}

impl Iterator for ExtensionSearch<'_> {
    type Item = CyclotomicMap;

    fn next(&mut self) -> Option<CyclotomicMap> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            match self.choose() {
                Some((var, cands)) => self.stack.push(Frame {
                    var,
                    cands,
                    next: 0,
                    current: None,
                }),
                None => {
                    self.done = true;
                    return None;
                }
            }
        }
        loop {
            let Some(frame) = self.stack.last_mut() else {
                self.done = true;
                return None;
            };
            let var = frame.var;
            let prev = frame.current.take();
            let next = if frame.next < frame.cands.len() {
                frame.next += 1;
                Some(frame.cands[frame.next - 1])
            } else {
                None
            };
            if let Some(p) = prev {
                self.set(var, p, false);
            }
            let Some(a) = next else {
                self.stack.pop();
                continue;
            };
            // candidates were filtered against an older state; recheck
            if !self.fits(var, a) {
                continue;
            }
            self.work += 1;
            if self.work > self.budget {
                self.exhausted = true;
                self.done = true;
                return None;
            }
            self.set(var, a, true);
            self.stack.last_mut().expect("frame").current = Some(a);
            if self.assigned == self.b {
                let m = self.solution();
                if !self.exact_index || m.least_index() == self.b {
                    return Some(m);
                }
                continue;
            }
            if let Some((var, cands)) = self.choose() {
                self.stack.push(Frame {
                    var,
                    cands,
                    next: 0,
                    current: None,
                });
            }
        }
    }
}

/// Number of linear orthomorphisms `[c]` orthogonal to `m`.
pub fn count_linear_partners(field: &FieldCtx, m: &CyclotomicMap) -> Result<usize> {
    Ok(linear_partners(field, m)?.len())
}

/// Every `c` not in `{0, 1}` with `[c]` orthogonal to `m`, ascending.
pub fn linear_partners(field: &FieldCtx, m: &CyclotomicMap) -> Result<Vec<Elem>> {
    m.check_field(field)?;
    if !m.is_orthomorphism(field) {
        return Err(Error::NotOrthomorphism);
    }
    let mut out = Vec::new();
    for c in field.elements().skip(2) {
        if m.is_orthogonal_to(&CyclotomicMap::linear(c), field)? {
            out.push(c);
        }
    }
    Ok(out)
}

fn verified_pair(field: &FieldCtx, x: &CyclotomicMap, y: &CyclotomicMap, a: u32, b: u32) -> bool {
    let (tx, ty) = (x.to_table(field), y.to_table(field));
    tx.is_orthomorphism(field).unwrap_or(false)
        && ty.is_orthomorphism(field).unwrap_or(false)
        && tx.least_index(field).ok().flatten() == Some(a as usize)
        && ty.least_index(field).ok().flatten() == Some(b as usize)
        && tx.is_orthogonal_to(&ty, field).unwrap_or(false)
}

/// Orthogonal `theta` in `D_a` and `theta'` in `D_b`: near-linear pairs first, then an
/// exhaustive scan of `D_a` with a constrained search for the partner. A completed scan
/// without witness is `proven-empty` only when `q <= cap`.
pub fn exists_orthogonal_pair(
    field: &FieldCtx,
    a: u32,
    b: u32,
    cfg: &SearchConfig,
) -> Result<SearchReport> {
    if a < 2 || a > b {
        return Err(Error::InvalidParameter(format!(
            "need 1 < a <= b, got a={a}, b={b}"
        )));
    }
    let l = numtheory::lcm(u64::from(a), u64::from(b)) as u32;
    field.classes(l)?;
    let q = field.order();
    let claim = format!("orth-pair-q{q}-a{a}-b{b}");
    let mut report = SearchReport::new(claim, field, vec![a, b], Verdict::Exhausted);

    let pool = |k: u32| constructions::near_linear_all(field, k);
    if !pool(a)?.is_empty() && !pool(b)?.is_empty() {
        let set = constructions::orthogonal_set(
            field,
            &[a, b],
            false,
            constructions::DEFAULT_GREEDY_RETRIES,
            cfg.budget.min(constructions::DEFAULT_SET_BUDGET),
        )?;
        if let Some(set) = set {
            report.verdict = Verdict::Witness;
            report.note = Some("near-linear".into());
            report.witness = set
                .maps
                .iter()
                .map(|m| MapRecord::cyclotomic(field, m))
                .collect();
            return Ok(report);
        }
    }
    let mut remaining = cfg.budget;
    for theta in enumerate_dk(field, a, cfg.budget)? {
        let mut cons = ExtensionSearch::orthomorphism_constraints();
        cons.push(theta.clone());
        let mut s =
            ExtensionSearch::new(field, b as usize, l as usize, &cons, remaining)?.exact_index();
        let found = s.next();
        report.work += s.work();
        remaining = remaining.saturating_sub(s.work());
        if let Some(other) = found {
            if verified_pair(field, &theta, &other, a, b) {
                report.verdict = Verdict::Witness;
                report.note = Some("exhaustive".into());
                report.witness = vec![
                    MapRecord::cyclotomic(field, &theta),
                    MapRecord::cyclotomic(field, &other),
                ];
                return Ok(report);
            }
            return Err(Error::NotOrthogonal);
        }
        if s.exhausted() {
            report.note = Some("budget exhausted".into());
            return Ok(report);
        }
    }
    settle_empty(&mut report, cfg);
    Ok(report)
}

/// A completed search without witness proves emptiness only at or below the cap.
fn settle_empty(report: &mut SearchReport, cfg: &SearchConfig) {
    if report.q <= cfg.cap {
        report.verdict = Verdict::ProvenEmpty;
    } else {
        report.verdict = Verdict::Exhausted;
        report.note = Some(format!(
            "q={} above the exhaustive cap {}",
            report.q, cfg.cap
        ));
    }
}

/// A member of `D_d` with a linear orthogonal partner: structured routes first, then an
/// exhaustive search over every `c`, with the same cap rule as [`exists_orthogonal_pair`].
pub fn exists_dd_orthogonal_linear(
    field: &FieldCtx,
    d: u32,
    cfg: &SearchConfig,
) -> Result<SearchReport> {
    field.classes(d)?;
    let q = field.order();
    let claim = format!("dd-linear-q{q}-d{d}");
    let mut report = SearchReport::new(claim, field, vec![d], Verdict::Exhausted);
    let structured = constructions::construct_dd_orthogonal_linear(field, d)?;
    if let DdLinear::Pair {
        map,
        partner,
        route,
    } = &structured
    {
        report.verdict = Verdict::Witness;
        report.note = Some(route.to_string());
        report.witness = vec![
            record(field, map),
            MapRecord::cyclotomic(field, &CyclotomicMap::linear(*partner)),
        ];
        return Ok(report);
    }
    let mut remaining = cfg.budget;
    for c in field.elements().skip(2) {
        let mut cons = ExtensionSearch::orthomorphism_constraints();
        cons.push(CyclotomicMap::linear(c));
        let mut s = ExtensionSearch::new(field, d as usize, d as usize, &cons, remaining)?
            .exact_index()
            .break_rotation();
        let found = s.next();
        report.work += s.work();
        remaining = remaining.saturating_sub(s.work());
        if let Some(theta) = found {
            let lin = CyclotomicMap::linear(c);
            let t = theta.to_table(field);
            if t.is_orthomorphism(field)?
                && t.least_index(field)? == Some(d as usize)
                && t.is_orthogonal_to(&lin.to_table(field), field)?
            {
                report.verdict = Verdict::Witness;
                report.note = Some("exhaustive".into());
                report.witness = vec![
                    MapRecord::cyclotomic(field, &theta),
                    MapRecord::cyclotomic(field, &lin),
                ];
                return Ok(report);
            }
            return Err(Error::NotOrthogonal);
        }
        if s.exhausted() {
            report.note = Some("budget exhausted".into());
            return Ok(report);
        }
    }
    settle_empty(&mut report, cfg);
    if report.verdict == Verdict::ProvenEmpty && structured == DdLinear::Exception {
        report.note = Some("listed exception".into());
    }
    Ok(report)
}

/// One published multiplier list and the claims made about it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublishedMap {
    pub multipliers: Vec<u32>,
    pub least_index: usize,
    /// Claimed number of orthogonal linear orthomorphisms.
    pub partners: Option<usize>,
    /// Claimed partner multipliers `c` of `[c]`.
    pub partner_list: Option<Vec<u32>>,
}

/// `element` lies in class `class` of index `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassConstraint {
    pub element: u32,
    pub k: u32,
    pub class: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublishedClaim {
    pub q: u32,
    pub maps: Vec<PublishedMap>,
    pub pairwise_orthogonal: bool,
    pub constraints: Vec<ClassConstraint>,
}

fn claim_holds(field: &FieldCtx, claim: &PublishedClaim) -> Result<bool> {
    for c in &claim.constraints {
        let x = field.elem(u64::from(c.element))?;
        if field.class_of(x, c.k)? != c.class {
            return Ok(false);
        }
    }
    let maps: Vec<CyclotomicMap> = claim
        .maps
        .iter()
        .map(|p| CyclotomicMap::from_encodings(&p.multipliers))
        .collect();
    for (m, p) in maps.iter().zip(&claim.maps) {
        let t = m.to_table(field);
        if !t.is_orthomorphism(field)? || t.least_index(field)? != Some(p.least_index) {
            return Ok(false);
        }
        if p.partners.is_some() || p.partner_list.is_some() {
            let partners: Vec<u32> = linear_partners(field, m)?.iter().map(|e| e.enc()).collect();
            if p.partners.is_some_and(|n| n != partners.len()) {
                return Ok(false);
            }
            if p.partner_list.as_ref().is_some_and(|l| *l != partners) {
                return Ok(false);
            }
        }
    }
    if claim.pairwise_orthogonal {
        let tables: Vec<PermutationMap> = maps.iter().map(|m| m.to_table(field)).collect();
        for i in 0..tables.len() {
            for j in i + 1..tables.len() {
                if !tables[i].is_orthogonal_to(&tables[j], field)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Generators `g^j`, one per class labelling of index `l`: `j` runs over the units mod `l`,
/// each represented by its least lift coprime to `q-1`.
pub fn labelling_generators(field: &FieldCtx, l: u32) -> Result<Vec<Elem>> {
    let order = u64::from(field.order() - 1);
    if l == 0 || order % u64::from(l) != 0 {
        return Err(Error::IndexNotDivisor {
            k: u64::from(l),
            order,
        });
    }
    let mut out = Vec::new();
    for u in 0..u64::from(l).max(1) {
        if numtheory::gcd(u, u64::from(l)) != 1 && l != 1 {
            continue;
        }
        let j = (u..=order)
            .step_by(l as usize)
            .find(|&j| j > 0 && numtheory::gcd(j, order) == 1)
            .expect("every unit mod l lifts to a unit mod q-1");
        out.push(field.exp(j));
    }
    Ok(out)
}

/// Looks for a class labelling under which every claim about the published lists holds,
/// trying the default generator first.
pub fn validate_published(claim_id: &str, claim: &PublishedClaim) -> Result<SearchReport> {
    let base = FieldCtx::new(u64::from(claim.q))?;
    let l = numtheory::lcm_all(
        claim
            .maps
            .iter()
            .map(|m| m.multipliers.len() as u64)
            .chain(claim.constraints.iter().map(|c| u64::from(c.k))),
    ) as u32;
    let indices = claim.maps.iter().map(|m| m.least_index as u32).collect();
    let mut work = 0;
    for g in labelling_generators(&base, l)? {
        work += 1;
        let field = base.relabelled(g)?;
        if claim_holds(&field, claim)? {
            let mut report =
                SearchReport::new(claim_id.to_string(), &field, indices, Verdict::Witness);
            report.witness = claim
                .maps
                .iter()
                .map(|p| {
                    MapRecord::cyclotomic(&field, &CyclotomicMap::from_encodings(&p.multipliers))
                })
                .collect();
            report.work = work;
            return Ok(report);
        }
    }
    Err(Error::NoLabellingFound(claim_id.to_string()))
}

/// `(q, k)` pairs where `D_k` is empty although `k | q-1`, so `C_k = C_{k'}` for the
/// largest proper divisor chain.
pub const EQUAL_C_CASES: [(u32, u32); 5] = [(3, 2), (4, 3), (5, 2), (5, 4), (7, 3)];

/// Confirms that `D_k` is empty by exact counting for every listed equal-`C` case, and that
/// `D_b` has a constructed witness for every other divisor `b` of `q-1`, `q <= max_q`.
pub fn verify_equal_c_cases(max_q: u32) -> Result<Vec<SearchReport>> {
    let mut out = Vec::new();
    for q in numtheory::prime_powers(2, u64::from(max_q)) {
        let field = FieldCtx::new(q)?;
        for b in numtheory::divisors(q - 1) {
            let b = b as u32;
            let listed = EQUAL_C_CASES.contains(&(q as u32, b));
            let claim = format!("dk-q{q}-k{b}");
            let mut report = SearchReport::new(claim, &field, vec![b], Verdict::Exhausted);
            if listed {
                let n = counting::count_dk(&field, b, counting::DEFAULT_COUNT_CAP)?;
                report.verdict = if n == 0 {
                    Verdict::ProvenEmpty
                } else {
                    Verdict::Witness
                };
                report.note = Some(format!("count {n}"));
            } else if let Some(m) = constructions::dk_witness(&field, b)? {
                let t = m.to_table(&field);
                if t.is_orthomorphism(&field)? && t.least_index(&field)? == Some(b as usize) {
                    report.verdict = Verdict::Witness;
                    report.witness = vec![record(&field, &m)];
                }
            }
            out.push(report);
        }
    }
    Ok(out)
}

/// Number of orthomorphisms of `F_q`, by backtracking over the maps fixing `0` and
/// multiplying by `q`. Returns `None` when the node budget runs out.
pub fn count_orthomorphisms(field: &FieldCtx, budget: u64) -> Option<u128> {
    let q = field.order() as usize;
    let mut used_val = vec![false; q];
    let mut used_diff = vec![false; q];
    used_val[0] = true;
    used_diff[0] = true;
    let mut work = 0u64;

    fn go(
        field: &FieldCtx,
        x: usize,
        used_val: &mut [bool],
        used_diff: &mut [bool],
        work: &mut u64,
        budget: u64,
    ) -> Option<u128> {
        let q = used_val.len();
        if x == q {
            return Some(1);
        }
        let xe = Elem(x as u32);
        let mut total = 0u128;
        for y in 1..q {
            if used_val[y] {
                continue;
            }
            let d = field.sub(Elem(y as u32), xe).idx();
            if used_diff[d] {
                continue;
            }
            *work += 1;
            if *work > budget {
                return None;
            }
            used_val[y] = true;
            used_diff[d] = true;
            let sub = go(field, x + 1, used_val, used_diff, work, budget);
            used_val[y] = false;
            used_diff[d] = false;
            total += sub?;
        }
        Some(total)
    }

    let normalized = go(field, 1, &mut used_val, &mut used_diff, &mut work, budget)?;
    Some(normalized * q as u128)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dk_stream_small_cases() {
        let f5 = FieldCtx::new(5).unwrap();
        assert_eq!(enumerate_dk(&f5, 2, 1000).unwrap().count(), 0);
        let f7 = FieldCtx::new(7).unwrap();
        assert_eq!(enumerate_dk(&f7, 3, 1000).unwrap().count(), 0);
        let f13 = FieldCtx::new(13).unwrap();
        let n = enumerate_dk(&f13, 3, 1000).unwrap().count() as u128;
        assert_eq!(n, counting::count_dk(&f13, 3, 6).unwrap());
        assert!(n > 0);
        assert!(matches!(
            enumerate_dk(&f13, 6, 100),
            Err(Error::BudgetExceeded(100))
        ));
    }

    #[test]
    fn extension_search_matches_counts() {
        for q in [7u64, 11, 13, 16] {
            let f = FieldCtx::new(q).unwrap();
            for k in numtheory::divisors(q - 1).into_iter().filter(|&k| k <= 4) {
                let cons = ExtensionSearch::orthomorphism_constraints();
                let s = ExtensionSearch::new(&f, k as usize, k as usize, &cons, u64::MAX).unwrap();
                let n = s.count() as u128;
                assert_eq!(
                    n,
                    counting::count_ck(&f, k as u32, 6).unwrap(),
                    "q={q} k={k}"
                );
            }
        }
    }

    #[test]
    fn budget_is_reported() {
        let f = FieldCtx::new(31).unwrap();
        let cons = ExtensionSearch::orthomorphism_constraints();
        let mut s = ExtensionSearch::new(&f, 6, 6, &cons, 10).unwrap();
        while s.next().is_some() {}
        assert!(s.exhausted());
    }

    #[test]
    fn orthomorphism_totals_for_tiny_fields() {
        // F_3: x -> 2x + c only
        let f3 = FieldCtx::new(3).unwrap();
        assert_eq!(count_orthomorphisms(&f3, 1000), Some(3));
        let f4 = FieldCtx::new(4).unwrap();
        assert!(count_orthomorphisms(&f4, 1000).unwrap() > 0);
        assert_eq!(
            count_orthomorphisms(&FieldCtx::new(2).unwrap(), 10),
            Some(0)
        );
    }

    #[test]
    fn pair_exceptions() {
        let cfg = SearchConfig::default();
        let f9 = FieldCtx::new(9).unwrap();
        assert_eq!(
            exists_orthogonal_pair(&f9, 2, 4, &cfg).unwrap().verdict,
            Verdict::ProvenEmpty
        );
        let f11 = FieldCtx::new(11).unwrap();
        assert_eq!(
            exists_orthogonal_pair(&f11, 2, 2, &cfg).unwrap().verdict,
            Verdict::Witness
        );
        assert!(exists_orthogonal_pair(&f11, 1, 2, &cfg).is_err());
    }

    fn published(q: u32, lists: &[&[u32]]) -> PublishedClaim {
        PublishedClaim {
            q,
            maps: lists
                .iter()
                .map(|l| PublishedMap {
                    multipliers: l.to_vec(),
                    least_index: l.len(),
                    partners: None,
                    partner_list: None,
                })
                .collect(),
            pairwise_orthogonal: true,
            constraints: Vec::new(),
        }
    }

    #[test]
    fn published_examples_validate() {
        let r = validate_published(
            "f61",
            &published(61, &[&[8, 31], &[14, 44, 44], &[47, 11, 11, 11, 11]]),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Witness);
        let r = validate_published(
            "f421",
            &published(
                421,
                &[
                    &[165, 121],
                    &[111, 326, 326],
                    &[90, 132, 132, 132, 132],
                    &[47, 175, 175, 175, 175, 175, 175],
                ],
            ),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Witness);
        let f31 = PublishedClaim {
            q: 31,
            maps: vec![
                PublishedMap {
                    multipliers: vec![3, 9, 2],
                    least_index: 3,
                    partners: Some(1),
                    partner_list: Some(vec![8]),
                },
                PublishedMap {
                    multipliers: vec![3, 9, 16],
                    least_index: 3,
                    partners: Some(5),
                    partner_list: None,
                },
            ],
            pairwise_orthogonal: false,
            constraints: vec![ClassConstraint {
                element: 3,
                k: 3,
                class: 1,
            }],
        };
        assert_eq!(
            validate_published("f31", &f31).unwrap().verdict,
            Verdict::Witness
        );
        let bogus = published(61, &[&[8, 31], &[8, 31, 31]]);
        assert!(matches!(
            validate_published("bogus", &bogus),
            Err(Error::NoLabellingFound(_))
        ));
    }

    #[test]
    fn labelling_generators_cover_units() {
        let f = FieldCtx::new(61).unwrap();
        let gens = labelling_generators(&f, 30).unwrap();
        assert_eq!(gens.len(), 8);
        assert!(gens.iter().all(|&g| f.is_primitive(g)));
        assert_eq!(gens[0], f.generator());
    }
}
