//! Exact arithmetic in one fixed working field `F_{q^L}`, `q = p^m`.
//!
//! Every subfield `F_{q^k}` with `k | L` lives inside the same ambient field,
//! so points and lines over different extensions never need embedding maps.
//!
//! Elements are stored by discrete logarithm with respect to a primitive
//! element (`0` is reserved for zero). Multiplication is an index addition and
//! addition goes through a Zech logarithm table. The canonical polynomial-basis
//! coefficients are still available through [`FieldCtx::coeffs`] and are what
//! every serialized artifact uses.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on `p^{mL}`; everything here enumerates whole subfields.
pub const MAX_FIELD_ORDER: u64 = 1 << 26;

/// Default working degree, `lcm(1, 2, 3, 4)`.
pub const DEFAULT_WORKING_DEGREE: u32 = 12;

/// Working degree used when none is requested: the largest multiple of
/// [`DEFAULT_WORKING_DEGREE`] whose field fits under [`MAX_FIELD_ORDER`],
/// capped at twice the default. Over `F_2` this gives `F_{2^24}`, whose extra
/// subfields hold branch lines of projections from points over `F_16`.
pub fn default_working_degree(q: u64) -> u32 {
    let doubled = 2 * DEFAULT_WORKING_DEGREE;
    if (q as u128).pow(doubled) <= MAX_FIELD_ORDER as u128 {
        doubled
    } else {
        DEFAULT_WORKING_DEGREE
    }
}

const NO_LOG: u32 = u32::MAX;

/// An element of the working field.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Fel(u32);

impl Fel {
    pub const ZERO: Fel = Fel(0);
    pub const ONE: Fel = Fel(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Discrete logarithm with respect to the context generator.
    #[inline]
    pub fn log(self) -> Option<u32> {
        self.0.checked_sub(1)
    }
}

/// Context header written next to every serialized element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub p: u32,
    pub m: u32,
    #[serde(rename = "L")]
    pub working_degree: u32,
    /// Modulus coefficients over `F_p`, constant term first, monic.
    pub modulus: Vec<u32>,
}

pub struct FieldCtx {
    p: u32,
    m: u32,
    l: u32,
    n: u32,
    q: u64,
    order: u32,
    units: u32,
    modulus: Vec<u32>,
    generator_packed: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    neg_one: Fel,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("L", &self.l)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^m`.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut rest, mut m) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    if rest != 1 || p > u32::MAX as u64 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p as u32, m))
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

// Dense F_p[t] helpers used only while setting up a context.

fn digits(mut v: u32, p: u32, n: usize) -> Vec<u32> {
    let mut out = vec![0; n];
    for c in out.iter_mut() {
        *c = v % p;
        v /= p;
    }
    out
}

fn pack(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Remainder of `a` modulo a monic `b`, in place on a copy.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &bc) in b.iter().enumerate() {
                let idx = shift + i;
                r[idx] = (r[idx] + p - (lead as u64 * bc as u64 % p as u64) as u32) % p;
            }
        }
        r.pop();
    }
    r
}

fn mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    let mut r = poly_rem(&prod, modulus, p);
    r.resize(modulus.len() - 1, 0);
    r
}

fn powmod(base: &[u32], mut e: u64, modulus: &[u32], p: u32) -> Vec<u32> {
    let n = modulus.len() - 1;
    let mut result = vec![0; n];
    result[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(&result, &b, modulus, p);
        }
        b = mulmod(&b, &b, modulus, p);
        e >>= 1;
    }
    result
}

/// Trial division by every monic polynomial of degree `1..=n/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    if n <= 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d as u32);
        for v in 0..count {
            let mut divisor = digits(v as u32, p, d);
            divisor.push(1);
            if poly_rem(f, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Successive powers of `g` in packed form, characteristic 2 (bit vectors).
fn powers_binary(g: u32, modulus: u64, n: u32) -> Vec<u32> {
    let units = (1u64 << n) - 1;
    let g_bits: Vec<u32> = (0..32).filter(|b| g >> b & 1 == 1).collect();
    let top = 32 - g.leading_zeros();
    let mut out = Vec::with_capacity(units as usize);
    let mut cur: u64 = 1;
    for _ in 0..units {
        out.push(cur as u32);
        let mut prod = g_bits.iter().fold(0u64, |acc, &b| acc ^ (cur << b));
        for bit in (n..n + top).rev() {
            if prod >> bit & 1 == 1 {
                prod ^= modulus << (bit - n);
            }
        }
        cur = prod;
    }
    out
}

/// Successive powers of `g` in packed form over `F_p`.
fn powers_generic(g: u32, modulus: &[u32], p: u32, units: u32) -> Vec<u32> {
    let nu = modulus.len() - 1;
    let gen_terms: Vec<(usize, u32)> = digits(g, p, nu)
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c != 0)
        .collect();
    let mut out = Vec::with_capacity(units as usize);
    let mut cur = vec![0u32; nu];
    cur[0] = 1;
    let mut scratch = vec![0u32; 2 * nu];
    for _ in 0..units {
        out.push(pack(&cur, p));
        scratch.iter_mut().for_each(|c| *c = 0);
        for &(j, gc) in &gen_terms {
            for (k, &c) in cur.iter().enumerate() {
                if c != 0 {
                    scratch[j + k] = (scratch[j + k] + gc * c) % p;
                }
            }
        }
        for top in (nu..2 * nu).rev() {
            let lead = scratch[top];
            if lead == 0 {
                continue;
            }
            scratch[top] = 0;
            for (k, &mc) in modulus[..nu].iter().enumerate() {
                let idx = top - nu + k;
                scratch[idx] = (scratch[idx] + (p - lead) * mc) % p;
            }
        }
        cur.copy_from_slice(&scratch[..nu]);
    }
    out
}

impl FieldCtx {
    /// Builds `F_{p^{mL}}` with the smallest irreducible modulus (coefficients
    /// read as a base-`p` integer, leading digit `c_{n-1}`) and the first
    /// primitive element in packed-coefficient order.
    pub fn new(p: u32, m: u32, l: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if m == 0 || l == 0 {
            return Err(Error::Config("m and L must be positive".into()));
        }
        let n = m.checked_mul(l).ok_or(Error::FieldTooLarge {
            p: p as u64,
            n: u64::MAX,
        })?;
        let too_large = Error::FieldTooLarge {
            p: p as u64,
            n: n as u64,
        };
        let order = (p as u64).checked_pow(n).ok_or(too_large.clone())?;
        if order > MAX_FIELD_ORDER {
            return Err(too_large);
        }
        let order = order as u32;
        let units = order - 1;
        let nu = n as usize;

        let modulus = (0..(p as u64).pow(n))
            .map(|v| {
                let mut c = digits(v as u32, p, nu);
                c.push(1);
                c
            })
            .find(|c| is_irreducible(c, p))
            .expect("an irreducible polynomial of every degree exists");

        let factors = distinct_prime_factors(units as u64);
        let generator_packed = (1..order)
            .find(|&v| {
                let g = digits(v, p, nu);
                factors.iter().all(|&r| {
                    let h = powmod(&g, units as u64 / r, &modulus, p);
                    !(h[0] == 1 && h[1..].iter().all(|&c| c == 0))
                })
            })
            .expect("the multiplicative group is cyclic");

        let mut log = vec![NO_LOG; order as usize];
        let exp = if p == 2 {
            powers_binary(generator_packed, pack(&modulus, 2) as u64, n)
        } else {
            powers_generic(generator_packed, &modulus, p, units)
        };
        for (i, &packed) in exp.iter().enumerate() {
            debug_assert_eq!(log[packed as usize], NO_LOG, "generator order check failed");
            log[packed as usize] = i as u32;
        }

        let zech = exp
            .iter()
            .map(|&packed| {
                let plus_one = if packed % p == p - 1 {
                    packed - (p - 1)
                } else {
                    packed + 1
                };
                if plus_one == 0 {
                    NO_LOG
                } else {
                    log[plus_one as usize]
                }
            })
            .collect();

        let neg_one = if p == 2 { Fel::ONE } else { Fel(units / 2 + 1) };
        Ok(FieldCtx {
            p,
            m,
            l,
            n,
            q: (p as u64).pow(m),
            order,
            units,
            modulus,
            generator_packed,
            exp,
            log,
            zech,
            neg_one,
        })
    }

    /// Context for `F_{q^L}` where `q` must be a prime power.
    pub fn for_q(q: u64, working_degree: u32) -> Result<Self> {
        let (p, m) = prime_power(q)?;
        Self::new(p, m, working_degree)
    }

    /// Process-wide cached context; building the large tables is the
    /// expensive part of `F_{4^12}`.
    pub fn shared(q: u64, working_degree: u32) -> Result<Arc<Self>> {
        type Cache = Mutex<HashMap<(u64, u32), Arc<FieldCtx>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(ctx) = guard.get(&(q, working_degree)) {
            return Ok(ctx.clone());
        }
        let ctx = Arc::new(Self::for_q(q, working_degree)?);
        guard.insert((q, working_degree), ctx.clone());
        Ok(ctx)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree of `F_q` over `F_p`.
    pub fn base_degree(&self) -> u32 {
        self.m
    }

    /// `L`, the degree of the working field over `F_q`.
    pub fn working_degree(&self) -> u32 {
        self.l
    }

    /// Degree of the working field over `F_p`.
    pub fn prime_degree(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn order(&self) -> u64 {
        self.order as u64
    }

    pub fn unit_count(&self) -> u64 {
        self.units as u64
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Fel {
        Fel(self.log[self.generator_packed as usize] + 1)
    }

    pub fn header(&self) -> FieldHeader {
        FieldHeader {
            p: self.p,
            m: self.m,
            working_degree: self.l,
            modulus: self.modulus.clone(),
        }
    }

    #[inline]
    pub fn add(&self, a: Fel, b: Fel) -> Fel {
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        let (i, j) = (a.0 - 1, b.0 - 1);
        let d = if j >= i { j - i } else { j + self.units - i };
        let z = self.zech[d as usize];
        if z == NO_LOG {
            return Fel::ZERO;
        }
        let mut r = i + z;
        if r >= self.units {
            r -= self.units;
        }
        Fel(r + 1)
    }

    #[inline]
    pub fn neg(&self, a: Fel) -> Fel {
        if self.p == 2 {
            a
        } else {
            self.mul(a, self.neg_one)
        }
    }

    #[inline]
    pub fn sub(&self, a: Fel, b: Fel) -> Fel {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fel, b: Fel) -> Fel {
        if a.0 == 0 || b.0 == 0 {
            return Fel::ZERO;
        }
        let mut r = (a.0 - 1) + (b.0 - 1);
        if r >= self.units {
            r -= self.units;
        }
        Fel(r + 1)
    }

    pub fn inv(&self, a: Fel) -> Result<Fel> {
        match a.log() {
            None => Err(Error::DivisionByZero),
            Some(i) => Ok(Fel((self.units - i) % self.units + 1)),
        }
    }

    pub fn div(&self, a: Fel, b: Fel) -> Result<Fel> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fel, e: u64) -> Fel {
        match a.log() {
            None if e == 0 => Fel::ONE,
            None => Fel::ZERO,
            Some(i) => {
                let units = self.units as u64;
                Fel(((i as u64 * (e % units)) % units) as u32 + 1)
            }
        }
    }

    /// `a^(q^k)`; `k` is taken modulo `L` so negative powers invert Frobenius.
    pub fn frobenius(&self, a: Fel, k: i64) -> Fel {
        let k = k.rem_euclid(self.l as i64) as u32;
        self.pow(a, self.q_power_mod_units(k))
    }

    /// The unique `p`-th root, `a^(p^(mL-1))`.
    pub fn pth_root(&self, a: Fel) -> Fel {
        let units = self.units as u64;
        let mut e = 1u64;
        for _ in 1..self.n {
            e = e * self.p as u64 % units.max(1);
        }
        self.pow(a, e)
    }

    fn q_power_mod_units(&self, k: u32) -> u64 {
        let units = (self.units as u64).max(1);
        (0..k).fold(1u64, |acc, _| acc * (self.q % units) % units)
    }

    fn check_subfield(&self, k: u32) -> Result<()> {
        if k == 0 || !self.l.is_multiple_of(k) {
            return Err(Error::NotASubfield { k, l: self.l });
        }
        Ok(())
    }

    /// Order of `F_{q^k}`.
    pub fn subfield_order(&self, k: u32) -> Result<u64> {
        self.check_subfield(k)?;
        Ok(self.q.pow(k))
    }

    fn subfield_step(&self, k: u32) -> u32 {
        self.units / (self.q.pow(k) - 1) as u32
    }

    pub fn in_subfield(&self, a: Fel, k: u32) -> Result<bool> {
        self.check_subfield(k)?;
        Ok(match a.log() {
            None => true,
            Some(i) => i % self.subfield_step(k) == 0,
        })
    }

    /// Smallest `k | L` with `a` in `F_{q^k}`.
    pub fn def_degree(&self, a: Fel) -> u32 {
        divisors(self.l)
            .into_iter()
            .find(|&k| self.in_subfield(a, k).unwrap_or(false))
            .unwrap_or(self.l)
    }

    /// Primitive element of `F_{q^k}`: the generator raised to `(q^L-1)/(q^k-1)`.
    pub fn subfield_generator(&self, k: u32) -> Result<Fel> {
        self.check_subfield(k)?;
        Ok(Fel(self.subfield_step(k) % self.units.max(1) + 1))
    }

    /// The `q^k` elements of `F_{q^k}`: zero, then successive powers of the
    /// subfield generator.
    pub fn enumerate_subfield(&self, k: u32) -> Result<Vec<Fel>> {
        self.check_subfield(k)?;
        let step = self.subfield_step(k);
        let count = self.q.pow(k) - 1;
        let mut out = Vec::with_capacity(count as usize + 1);
        out.push(Fel::ZERO);
        out.extend((0..count as u32).map(|i| Fel(i * step + 1)));
        Ok(out)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fel {
        Fel(rng.random_range(0..self.order))
    }

    pub fn random_in_subfield<R: Rng + ?Sized>(&self, k: u32, rng: &mut R) -> Result<Fel> {
        self.check_subfield(k)?;
        let size = self.q.pow(k);
        let r = rng.random_range(0..size) as u32;
        Ok(if r == 0 {
            Fel::ZERO
        } else {
            Fel((r - 1) * self.subfield_step(k) + 1)
        })
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, v: i64) -> Fel {
        let r = v.rem_euclid(self.p as i64) as u32;
        if r == 0 {
            Fel::ZERO
        } else {
            Fel(self.log[r as usize] + 1)
        }
    }

    /// Element with the given polynomial-basis coefficients over `F_p`,
    /// constant term first. Shorter vectors are zero-padded.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Fel> {
        if coeffs.len() > self.n as usize {
            return Err(Error::InvalidElement(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.n
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::InvalidElement(format!(
                "coefficient {c} not reduced mod {}",
                self.p
            )));
        }
        Ok(self.unpack(pack(coeffs, self.p)))
    }

    fn unpack(&self, packed: u32) -> Fel {
        if packed == 0 {
            Fel::ZERO
        } else {
            Fel(self.log[packed as usize] + 1)
        }
    }

    /// Canonical coefficients over `F_p`, constant term first, length `mL`.
    pub fn coeffs(&self, a: Fel) -> Vec<u32> {
        digits(self.packed(a), self.p, self.n as usize)
    }

    /// Coefficients read as a base-`p` integer; the enumeration order of
    /// coefficient vectors.
    pub fn packed(&self, a: Fel) -> u32 {
        match a.log() {
            None => 0,
            Some(i) => self.exp[i as usize],
        }
    }

    /// Validates a deserialized element.
    pub fn check(&self, a: Fel) -> Result<Fel> {
        if a.0 > self.units {
            return Err(Error::InvalidElement(format!("raw value {}", a.0)));
        }
        Ok(a)
    }

    pub fn sum<I: IntoIterator<Item = Fel>>(&self, it: I) -> Fel {
        it.into_iter().fold(Fel::ZERO, |acc, x| self.add(acc, x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f4() -> FieldCtx {
        FieldCtx::new(2, 1, 2).unwrap()
    }

    #[test]
    fn default_degrees() {
        assert_eq!(default_working_degree(2), 24);
        assert_eq!(default_working_degree(3), 12);
        assert_eq!(default_working_degree(4), 12);
    }

    #[test]
    fn f4_modulus_is_t2_t_1() {
        // enumerate the four monic quadratics and keep the irreducible ones
        let irreducible: Vec<Vec<u32>> = (0..4u32)
            .map(|v| vec![v & 1, v >> 1, 1])
            .filter(|c| {
                // no root in F_2
                (0..2u32).all(|x| (c[0] + c[1] * x + c[2] * x * x) % 2 != 0)
            })
            .collect();
        assert_eq!(irreducible, vec![vec![1, 1, 1]]);
        assert_eq!(f4().modulus(), &[1, 1, 1]);
    }

    #[test]
    fn f2_modulus_is_t() {
        let ctx = FieldCtx::new(2, 1, 1).unwrap();
        assert_eq!(ctx.modulus(), &[0, 1]);
        assert_eq!(ctx.add(Fel::ONE, Fel::ONE), Fel::ZERO);
        assert_eq!(ctx.generator(), Fel::ONE);
    }

    #[test]
    fn f3_12_unit_group() {
        let ctx = FieldCtx::new(3, 1, 12).unwrap();
        assert_eq!(ctx.unit_count(), 531_440);
        assert_eq!(ctx.pow(ctx.generator(), 531_440), Fel::ONE);
        assert_ne!(ctx.pow(ctx.generator(), 531_440 / 2), Fel::ONE);
    }

    #[test]
    fn f4_relations() {
        let ctx = f4();
        let w = ctx.from_coeffs(&[0, 1]).unwrap();
        let w1 = ctx.add(w, Fel::ONE);
        assert_eq!(ctx.mul(w, w1), Fel::ONE);
        assert_eq!(ctx.frobenius(w, 1), w1);
        assert_eq!(ctx.frobenius(w, 0), w);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FieldCtx::new(6, 1, 1).unwrap_err(), Error::NotPrime(6));
        assert!(matches!(
            FieldCtx::new(2, 1, 27),
            Err(Error::FieldTooLarge { .. })
        ));
        assert_eq!(prime_power(6).unwrap_err(), Error::NotPrimePower(6));
        assert_eq!(prime_power(9).unwrap(), (3, 2));
    }

    #[test]
    fn inverses_in_f9() {
        let ctx = FieldCtx::new(3, 2, 1).unwrap();
        for a in ctx.enumerate_subfield(1).unwrap().into_iter().skip(1) {
            assert_eq!(ctx.mul(ctx.inv(a).unwrap(), a), Fel::ONE);
        }
        assert_eq!(ctx.inv(Fel::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn coefficient_arithmetic_matches_schoolbook() {
        // multiply through the packed representation by hand
        let ctx = FieldCtx::new(3, 1, 3).unwrap();
        let md = ctx.modulus().to_vec();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let (a, b) = (ctx.random(&mut rng), ctx.random(&mut rng));
            let (ca, cb) = (ctx.coeffs(a), ctx.coeffs(b));
            let sum: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % 3).collect();
            assert_eq!(ctx.coeffs(ctx.add(a, b)), sum);
            assert_eq!(ctx.coeffs(ctx.mul(a, b)), mulmod(&ca, &cb, &md, 3));
        }
    }

    #[test]
    fn subfields_of_f2_12() {
        let ctx = FieldCtx::new(2, 1, 12).unwrap();
        assert_eq!(
            ctx.enumerate_subfield(1).unwrap(),
            vec![Fel::ZERO, Fel::ONE]
        );
        let f4 = ctx.enumerate_subfield(2).unwrap();
        assert_eq!(f4.len(), 4);
        assert!(f4.iter().all(|&a| ctx.pow(a, 4) == a));
        assert!(!ctx.in_subfield(ctx.generator(), 6).unwrap());
        assert!(ctx.in_subfield(Fel::ONE, 3).unwrap());
        assert_eq!(
            ctx.in_subfield(Fel::ONE, 5),
            Err(Error::NotASubfield { k: 5, l: 12 })
        );
        for k in divisors(12) {
            let count = (0..ctx.order() as u32)
                .filter(|&r| ctx.in_subfield(Fel(r), k).unwrap())
                .count();
            assert_eq!(count as u64, 1 << k);
        }
    }

    #[test]
    fn f9_inside_f3_12_is_closed() {
        let ctx = FieldCtx::new(3, 1, 12).unwrap();
        let sub = ctx.enumerate_subfield(2).unwrap();
        assert_eq!(sub.len(), 9);
        let set: std::collections::HashSet<_> = sub.iter().copied().collect();
        for &a in &sub {
            for &b in &sub {
                assert!(set.contains(&ctx.add(a, b)));
                assert!(set.contains(&ctx.mul(a, b)));
            }
            if !a.is_zero() {
                assert!(set.contains(&ctx.inv(a).unwrap()));
            }
        }
    }

    #[test]
    fn frobenius_and_pth_root() {
        let ctx = FieldCtx::new(2, 2, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let (a, b) = (ctx.random(&mut rng), ctx.random(&mut rng));
            assert_eq!(
                ctx.frobenius(ctx.add(a, b), 1),
                ctx.add(ctx.frobenius(a, 1), ctx.frobenius(b, 1))
            );
            let iterated = (0..3).fold(a, |x, _| ctx.frobenius(x, 1));
            assert_eq!(iterated, a);
            assert_eq!(ctx.frobenius(ctx.frobenius(a, -1), 1), a);
            assert_eq!(ctx.pow(ctx.pth_root(a), 2), a);
        }
    }

    #[test]
    fn coefficient_roundtrip() {
        let ctx = FieldCtx::new(3, 1, 4).unwrap();
        for r in 0..ctx.order() as u32 {
            let a = Fel(r);
            assert_eq!(ctx.from_coeffs(&ctx.coeffs(a)).unwrap(), a);
        }
        assert!(ctx.from_coeffs(&[3]).is_err());
        assert_eq!(ctx.from_int(-1), ctx.neg(Fel::ONE));
    }
}
