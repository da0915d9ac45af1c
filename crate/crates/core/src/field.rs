//! Explicit finite fields `F_q`, `q = p^n`, with deterministic structure.
//!
//! An element is stored as its encoding `enc = sum c_i p^i` where `x = sum c_i alpha^i`
//! and `alpha` is a root of the field modulus. For prime fields the encoding is the
//! canonical residue. The modulus is the monic irreducible polynomial of degree `n` with
//! the smallest coefficient encoding, and the generator is the primitive element with the
//! smallest encoding. Both can be overridden through [`FieldOptions`].
//!
//! Discrete logarithms are tabulated eagerly, so multiplication, inversion and every
//! cyclotomy query is a table lookup.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory;

/// Largest order accepted by default.
pub const DEFAULT_MAX_ORDER: u32 = 1 << 22;

const NO_LOG: u32 = u32::MAX;

/// A field element, identified by its integer encoding in `[0, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn enc(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Overrides for field construction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FieldOptions {
    /// Monic modulus `[c_0, .., c_n]`; must be irreducible. Ignored for prime fields
    /// unless non-empty, in which case it is rejected.
    pub modulus: Option<Vec<u32>>,
    /// Encoding of the generator; must be primitive.
    pub generator: Option<u32>,
    /// Upper bound on `q`; defaults to [`DEFAULT_MAX_ORDER`].
    pub max_order: Option<u32>,
}

/// A fully materialized finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldCtx {
    q: u32,
    p: u32,
    n: u32,
    modulus: Vec<u32>,
    generator: Elem,
    exp: Vec<Elem>,
    log: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("descriptor", &self.descriptor())
            .finish()
    }
}

impl FieldCtx {
    /// Builds the canonical field of order `q`.
    pub fn new(q: u64) -> Result<FieldCtx> {
        Self::with_options(q, &FieldOptions::default())
    }

    pub fn with_options(q: u64, opts: &FieldOptions) -> Result<FieldCtx> {
        let (p, n) = numtheory::prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let limit = u64::from(opts.max_order.unwrap_or(DEFAULT_MAX_ORDER));
        if q > limit {
            return Err(Error::OrderTooLarge { q, limit });
        }
        let (q, p) = (q as u32, p as u32);

        let modulus = match &opts.modulus {
            Some(m) if n == 1 && m.is_empty() => Vec::new(),
            Some(m) => {
                let ok = n > 1
                    && m.len() == n as usize + 1
                    && m[n as usize] == 1
                    && m.iter().all(|&c| c < p)
                    && is_irreducible(m, p);
                if !ok {
                    return Err(Error::InvalidModulus(m.clone()));
                }
                m.clone()
            }
            None if n == 1 => Vec::new(),
            None => smallest_irreducible(p, n),
        };

        let arith = Digits {
            p,
            n,
            modulus: &modulus,
        };
        let generator = match opts.generator {
            Some(g) => {
                if g >= q || !arith.is_primitive(g, q) {
                    return Err(Error::NotPrimitive(g));
                }
                g
            }
            None => (1..q)
                .find(|&g| arith.is_primitive(g, q))
                .expect("the multiplicative group of a finite field is cyclic"),
        };

        let order = (q - 1) as usize;
        let mut exp = Vec::with_capacity(order);
        let mut log = vec![NO_LOG; q as usize];
        let mut cur = 1u32;
        for i in 0..order {
            debug_assert_eq!(log[cur as usize], NO_LOG);
            exp.push(Elem(cur));
            log[cur as usize] = i as u32;
            cur = arith.mul(cur, generator);
        }
        debug_assert_eq!(cur, 1);

        Ok(FieldCtx {
            q,
            p,
            n,
            modulus,
            generator: Elem(generator),
            exp,
            log,
        })
    }

    /// Rebuilds a field from a descriptor `q=p^n;modulus=[..];g=enc`.
    pub fn from_descriptor(desc: &str) -> Result<FieldCtx> {
        let bad = || Error::MalformedRecord(format!("bad field descriptor {desc:?}"));
        let mut q = None;
        let mut modulus = None;
        let mut generator = None;
        for part in desc.split(';') {
            let (key, value) = part.split_once('=').ok_or_else(bad)?;
            match key.trim() {
                "q" => {
                    let (p, n) = value.split_once('^').ok_or_else(bad)?;
                    let p: u64 = p.trim().parse().map_err(|_| bad())?;
                    let n: u32 = n.trim().parse().map_err(|_| bad())?;
                    q = Some(p.checked_pow(n).ok_or_else(bad)?);
                }
                "modulus" => {
                    let inner = value
                        .trim()
                        .strip_prefix('[')
                        .and_then(|s| s.strip_suffix(']'))
                        .ok_or_else(bad)?;
                    let coeffs = inner
                        .split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(|s| s.trim().parse::<u32>().map_err(|_| bad()))
                        .collect::<Result<Vec<_>>>()?;
                    modulus = Some(coeffs);
                }
                "g" => generator = Some(value.trim().parse::<u32>().map_err(|_| bad())?),
                _ => return Err(bad()),
            }
        }
        let opts = FieldOptions {
            modulus,
            generator,
            max_order: None,
        };
        FieldCtx::with_options(q.ok_or_else(bad)?, &opts)
    }

    /// Textual descriptor emitted alongside every serialized result.
    pub fn descriptor(&self) -> String {
        let m: Vec<String> = self.modulus.iter().map(|c| c.to_string()).collect();
        format!(
            "q={}^{};modulus=[{}];g={}",
            self.p,
            self.n,
            m.join(","),
            self.generator
        )
    }

    /// Same field with a different primitive element labelling the cyclotomy classes.
    pub fn relabelled(&self, generator: Elem) -> Result<FieldCtx> {
        if !self.is_primitive(generator) {
            return Err(Error::NotPrimitive(generator.0));
        }
        let order = self.q as u64 - 1;
        let shift = self.log[generator.idx()] as u64;
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![NO_LOG; self.q as usize];
        for i in 0..order {
            let e = self.exp[((i * shift) % order) as usize];
            exp.push(e);
            log[e.idx()] = i as u32;
        }
        Ok(FieldCtx {
            generator,
            exp,
            log,
            ..self.clone()
        })
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn is_prime_field(&self) -> bool {
        self.n == 1
    }

    /// Validated conversion from an encoding.
    pub fn elem(&self, enc: u64) -> Result<Elem> {
        if enc < u64::from(self.q) {
            Ok(Elem(enc as u32))
        } else {
            Err(Error::ElementOutOfRange { enc, q: self.q })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        (1..self.q).map(Elem)
    }

    /// The image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(i64::from(self.p)) as u32)
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        if self.n == 1 {
            let s = x.0 + y.0;
            Elem(if s >= self.p { s - self.p } else { s })
        } else if self.p == 2 {
            Elem(x.0 ^ y.0)
        } else {
            let (mut a, mut b, mut place, mut out) = (x.0, y.0, 1u32, 0u32);
            while a > 0 || b > 0 {
                out += ((a % self.p + b % self.p) % self.p) * place;
                a /= self.p;
                b /= self.p;
                place *= self.p;
            }
            Elem(out)
        }
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        if self.n == 1 {
            Elem(if x.0 == 0 { 0 } else { self.p - x.0 })
        } else if self.p == 2 {
            x
        } else {
            let (mut a, mut place, mut out) = (x.0, 1u32, 0u32);
            while a > 0 {
                out += ((self.p - a % self.p) % self.p) * place;
                a /= self.p;
                place *= self.p;
            }
            Elem(out)
        }
    }

    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        if x.0 == 0 || y.0 == 0 {
            return Elem::ZERO;
        }
        if self.n == 1 {
            return Elem((u64::from(x.0) * u64::from(y.0) % u64::from(self.p)) as u32);
        }
        let order = self.q - 1;
        let s = self.log[x.idx()] + self.log[y.idx()];
        self.exp[(if s >= order { s - order } else { s }) as usize]
    }

    pub fn inv(&self, x: Elem) -> Result<Elem> {
        if x.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let order = self.q - 1;
        let l = self.log[x.idx()];
        Ok(self.exp[((order - l) % order) as usize])
    }

    pub fn div(&self, x: Elem, y: Elem) -> Result<Elem> {
        Ok(self.mul(x, self.inv(y)?))
    }

    pub fn pow(&self, x: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if x.0 == 0 {
            return Elem::ZERO;
        }
        let order = u64::from(self.q - 1);
        let l = u64::from(self.log[x.idx()]);
        self.exp[((u128::from(l) * u128::from(e)) % u128::from(order)) as usize]
    }

    /// `g^i` for the field generator `g`.
    #[inline]
    pub fn exp(&self, i: u64) -> Elem {
        self.exp[(i % u64::from(self.q - 1)) as usize]
    }

    /// Discrete logarithm base the generator, in `[0, q-2]`.
    #[inline]
    pub fn dlog(&self, x: Elem) -> Result<u32> {
        match self.log.get(x.idx()) {
            Some(&l) if l != NO_LOG => Ok(l),
            Some(_) => Err(Error::ZeroArgument),
            None => Err(Error::ElementOutOfRange {
                enc: u64::from(x.0),
                q: self.q,
            }),
        }
    }

    /// Unchecked logarithm for hot loops; `x` must be nonzero.
    #[inline]
    pub(crate) fn log_unchecked(&self, x: Elem) -> u32 {
        self.log[x.idx()]
    }

    /// A square root of `d` (the one with the smaller encoding), if any.
    pub fn sqrt(&self, d: Elem) -> Option<Elem> {
        if d.0 == 0 {
            return Some(Elem::ZERO);
        }
        if self.p == 2 {
            return Some(self.pow(d, u64::from(self.q / 2)));
        }
        let l = self.log[d.idx()];
        if !l.is_multiple_of(2) {
            return None;
        }
        let r = self.exp[(l / 2) as usize];
        Some(r.min(self.neg(r)))
    }

    pub fn is_square(&self, d: Elem) -> bool {
        self.sqrt(d).is_some()
    }

    pub fn is_primitive(&self, x: Elem) -> bool {
        if x.0 == 0 || x.0 >= self.q {
            return false;
        }
        numtheory::gcd(u64::from(self.log[x.idx()]), u64::from(self.q - 1)) == 1
    }

    /// Multiplication through the polynomial representation, bypassing the log tables.
    pub fn mul_by_polynomial(&self, x: Elem, y: Elem) -> Elem {
        if self.n == 1 {
            return Elem((u64::from(x.0) * u64::from(y.0) % u64::from(self.p)) as u32);
        }
        let arith = Digits {
            p: self.p,
            n: self.n,
            modulus: &self.modulus,
        };
        Elem(arith.mul(x.0, y.0))
    }

    /// Base-`p` digits of an element (coefficients in the polynomial basis).
    pub fn digits(&self, x: Elem) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.n as usize);
        let mut a = x.0;
        for _ in 0..self.n {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    /// Embeds `self` into a larger field of the same characteristic; the result maps
    /// each encoding of `self` to its image in `big`.
    pub fn embedding_into(&self, big: &FieldCtx) -> Result<Vec<Elem>> {
        if self.p != big.p || !big.n.is_multiple_of(self.n) {
            return Err(Error::InvalidParameter(format!(
                "no embedding of F_{} into F_{}",
                self.q, big.q
            )));
        }
        let root = if self.n == 1 {
            Elem::ONE
        } else {
            let eval = |z: Elem| {
                self.modulus.iter().rev().fold(Elem::ZERO, |acc, &c| {
                    big.add(big.mul(acc, z), big.from_int(i64::from(c)))
                })
            };
            big.elements()
                .find(|&z| eval(z).is_zero())
                .expect("a subfield modulus splits in the extension")
        };
        Ok(self
            .elements()
            .map(|x| {
                self.digits(x).iter().rev().fold(Elem::ZERO, |acc, &c| {
                    big.add(big.mul(acc, root), big.from_int(i64::from(c)))
                })
            })
            .collect())
    }
}

/// Polynomial-basis arithmetic on encodings, used before the tables exist.
struct Digits<'a> {
    p: u32,
    n: u32,
    modulus: &'a [u32],
}

impl Digits<'_> {
    fn split(&self, mut x: u32) -> Vec<u32> {
        let mut out = vec![0; self.n as usize];
        for d in out.iter_mut() {
            *d = x % self.p;
            x /= self.p;
        }
        out
    }

    fn join(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn mul(&self, x: u32, y: u32) -> u32 {
        if self.n == 1 {
            return (u64::from(x) * u64::from(y) % u64::from(self.p)) as u32;
        }
        let (p, n) = (u64::from(self.p), self.n as usize);
        let a = self.split(x);
        let b = self.split(y);
        let mut prod = vec![0u64; 2 * n - 1];
        for (j, &bj) in b.iter().enumerate() {
            if bj == 0 {
                continue;
            }
            for (i, &ai) in a.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u64::from(ai) * u64::from(bj)) % p;
            }
        }
        for top in (n..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            // x^n = -(c_0 + .. + c_{n-1} x^{n-1})
            for (i, &m) in self.modulus[..n].iter().enumerate() {
                let idx = top - n + i;
                prod[idx] = (prod[idx] + (p - u64::from(m)) % p * c) % p;
            }
        }
        let low: Vec<u32> = prod[..n].iter().map(|&c| c as u32).collect();
        self.join(&low)
    }

    fn pow(&self, x: u32, mut e: u64) -> u32 {
        let mut base = x;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn is_primitive(&self, g: u32, q: u32) -> bool {
        if g == 0 {
            return false;
        }
        let order = u64::from(q - 1);
        if self.pow(g, order) != 1 {
            return false;
        }
        numtheory::prime_divisors(order)
            .into_iter()
            .all(|r| self.pow(g, order / r) != 1)
    }
}

/// Remainder of `a` modulo the monic polynomial `m` over `F_p` (coefficients ascending).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let dm = m.len() - 1;
    let mut r: Vec<u64> = a.iter().map(|&c| u64::from(c)).collect();
    let p64 = u64::from(p);
    if r.len() <= dm {
        return a.to_vec();
    }
    for top in (dm..r.len()).rev() {
        let c = r[top] % p64;
        if c == 0 {
            continue;
        }
        for (i, &mi) in m.iter().enumerate() {
            let idx = top - dm + i;
            r[idx] = (r[idx] + (p64 - c) * u64::from(mi)) % p64;
        }
    }
    r.truncate(dm);
    r.into_iter().map(|c| c as u32).collect()
}

/// Irreducibility of a monic polynomial by trial division with every monic polynomial
/// of degree at most half its degree.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len().saturating_sub(1);
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    for d in 1..=n / 2 {
        let count = u64::from(p).pow(d as u32);
        let mut divisor = vec![0u32; d + 1];
        divisor[d] = 1;
        for low in 0..count {
            let mut v = low;
            for c in divisor.iter_mut().take(d) {
                *c = (v % u64::from(p)) as u32;
                v /= u64::from(p);
            }
            if poly_rem(f, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible polynomial of degree `n` with the smallest coefficient encoding.
pub fn smallest_irreducible(p: u32, n: u32) -> Vec<u32> {
    let count = u64::from(p).pow(n);
    for low in 0..count {
        let mut f = Vec::with_capacity(n as usize + 1);
        let mut v = low;
        for _ in 0..n {
            f.push((v % u64::from(p)) as u32);
            v /= u64::from(p);
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
