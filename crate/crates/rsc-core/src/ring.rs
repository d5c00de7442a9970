//! Finite commutative rings with dense element indexing.
//!
//! Three kinds are supported: Z/n, finite fields presented by the
//! lexicographically least monic irreducible polynomial, and finite products
//! of those two. Elements are indices 0..|A|-1; multiplication is table-backed
//! for small rings and formula-backed beyond. Unit enumeration, mu_2, the set
//! W of a with a(1-a) invertible, the abelian structure of the unit group and
//! the coinvariants of the square action on (A, +) all live here.

use crate::abgrp::{DenseMat, FpAbelianGroup, Int};
use crate::{CoreError, Result};
use std::collections::HashMap;
use std::fmt;

pub type Elem = u32;

/// Hard cap on ring size.
pub const MAX_RING_SIZE: usize = 1 << 20;
/// Full multiplication tables are materialized up to this many elements.
const MUL_TABLE_CAP: usize = 4096;
/// Extension fields (and per-element caches) are limited to this size.
const EXT_FIELD_CAP: usize = 65536;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    ZMod(u64),
    Gf(u64),
    Prod(Vec<RingSpec>),
}

pub fn parse_ring_spec(text: &str) -> Result<RingSpec> {
    text.parse()
}

impl std::str::FromStr for RingSpec {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<RingSpec> {
        if let Some(rest) = s.strip_prefix("prod:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() < 2 {
                return Err(CoreError::Parse(format!(
                    "prod needs at least 2 factors, got {:?}",
                    rest
                )));
            }
            let factors = parts
                .iter()
                .map(|p| parse_atom(p))
                .collect::<Result<Vec<_>>>()?;
            Ok(RingSpec::Prod(factors))
        } else {
            parse_atom(s)
        }
    }
}

fn parse_atom(s: &str) -> Result<RingSpec> {
    if s.starts_with("prod:") {
        return Err(CoreError::Parse("nested prod is not allowed".into()));
    }
    if let Some(n) = s.strip_prefix("zmod:") {
        let n: u64 = n
            .parse()
            .map_err(|_| CoreError::Parse(format!("bad zmod modulus {:?}", n)))?;
        if n < 2 {
            return Err(CoreError::Parse("zmod modulus must be >= 2".into()));
        }
        Ok(RingSpec::ZMod(n))
    } else if let Some(q) = s.strip_prefix("gf:") {
        let q: u64 = q
            .parse()
            .map_err(|_| CoreError::Parse(format!("bad gf parameter {:?}", q)))?;
        if q < 2 || factorize(q).len() != 1 {
            return Err(CoreError::Parse(format!("{} is not a prime power", q)));
        }
        Ok(RingSpec::Gf(q))
    } else {
        Err(CoreError::Parse(format!(
            "unrecognized ring spec {:?} (expected zmod:<n>, gf:<q> or prod:...)",
            s
        )))
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::ZMod(n) => write!(f, "zmod:{}", n),
            RingSpec::Gf(q) => write!(f, "gf:{}", q),
            RingSpec::Prod(fs) => {
                write!(f, "prod:")?;
                for (i, s) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", s)?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone)]
enum Repr {
    /// Z/n; also used for prime fields gf:p.
    ZMod { n: u64 },
    /// F_{p^d}, d >= 2: elements are base-p digit strings (index = value in
    /// base p), multiplication through exp/log tables of a generator.
    ExtField {
        p: u64,
        d: usize,
        /// monic modulus, ascending coefficients, length d+1
        modulus: Vec<u64>,
        exp: Vec<u32>,
        log: Vec<u32>,
    },
    /// Product, first factor least significant in the mixed-radix index.
    Prod {
        comps: Vec<FiniteRing>,
        strides: Vec<u64>,
    },
}

#[derive(Clone)]
pub struct FiniteRing {
    spec: RingSpec,
    size: u32,
    repr: Repr,
    mul_table: Option<Vec<u16>>,
    unit_flag: Vec<bool>,
    units: Vec<Elem>,
    /// inverse per element, u32::MAX for non-units
    inv: Vec<u32>,
    one: Elem,
    neg_one: Elem,
}

impl FiniteRing {
    pub fn new(spec: RingSpec) -> Result<Self> {
        let repr = build_repr(&spec)?;
        let size = repr_size(&repr);
        if size < 2 || size as usize > MAX_RING_SIZE {
            return Err(CoreError::CapExceeded {
                what: format!("ring {}", spec),
                cap: MAX_RING_SIZE,
                actual: size as usize,
            });
        }
        let one = repr_one(&repr);
        let mut ring = FiniteRing {
            spec,
            size,
            repr,
            mul_table: None,
            unit_flag: Vec::new(),
            units: Vec::new(),
            inv: Vec::new(),
            one,
            neg_one: 0,
        };
        ring.neg_one = ring.raw_neg(one);
        if (size as usize) <= MUL_TABLE_CAP {
            let n = size as usize;
            let mut t = vec![0u16; n * n];
            for a in 0..size {
                for b in a..size {
                    let v = ring.raw_mul(a, b) as u16;
                    t[(a as usize) * n + b as usize] = v;
                    t[(b as usize) * n + a as usize] = v;
                }
            }
            ring.mul_table = Some(t);
        }
        ring.compute_units();
        Ok(ring)
    }

    pub fn parse(text: &str) -> Result<Self> {
        FiniteRing::new(parse_ring_spec(text)?)
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.size
    }

    pub fn zero(&self) -> Elem {
        0
    }

    pub fn one(&self) -> Elem {
        self.one
    }

    pub fn neg_one(&self) -> Elem {
        self.neg_one
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.repr {
            Repr::ZMod { n } => ((a as u64 + b as u64) % n) as Elem,
            Repr::ExtField { p, d, .. } => {
                let mut out = 0u64;
                let mut pw = 1u64;
                let (mut x, mut y) = (a as u64, b as u64);
                for _ in 0..*d {
                    out += ((x + y) % p) * pw;
                    pw *= p;
                    x /= p;
                    y /= p;
                }
                out as Elem
            }
            Repr::Prod { comps, strides } => {
                let mut out = 0u64;
                for (c, s) in comps.iter().zip(strides) {
                    let xa = ((a as u64 / s) % c.size as u64) as Elem;
                    let xb = ((b as u64 / s) % c.size as u64) as Elem;
                    out += c.add(xa, xb) as u64 * s;
                }
                out as Elem
            }
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        self.raw_neg(a)
    }

    fn raw_neg(&self, a: Elem) -> Elem {
        match &self.repr {
            Repr::ZMod { n } => ((n - a as u64) % n) as Elem,
            Repr::ExtField { p, d, .. } => {
                let mut out = 0u64;
                let mut pw = 1u64;
                let mut x = a as u64;
                for _ in 0..*d {
                    out += ((p - x % p) % p) * pw;
                    pw *= p;
                    x /= p;
                }
                out as Elem
            }
            Repr::Prod { comps, strides } => {
                let mut out = 0u64;
                for (c, s) in comps.iter().zip(strides) {
                    let xa = ((a as u64 / s) % c.size as u64) as Elem;
                    out += c.neg(xa) as u64 * s;
                }
                out as Elem
            }
        }
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if let Some(t) = &self.mul_table {
            return t[(a as usize) * self.size as usize + b as usize] as Elem;
        }
        self.raw_mul(a, b)
    }

    fn raw_mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.repr {
            Repr::ZMod { n } => ((a as u64 * b as u64) % n) as Elem,
            Repr::ExtField { p, exp, log, .. } => {
                if a == 0 || b == 0 {
                    return 0;
                }
                let m = exp.len() as u64;
                let _ = p;
                exp[((log[a as usize] as u64 + log[b as usize] as u64) % m) as usize]
            }
            Repr::Prod { comps, strides } => {
                let mut out = 0u64;
                for (c, s) in comps.iter().zip(strides) {
                    let xa = ((a as u64 / s) % c.size as u64) as Elem;
                    let xb = ((b as u64 / s) % c.size as u64) as Elem;
                    out += c.mul(xa, xb) as u64 * s;
                }
                out as Elem
            }
        }
    }

    pub fn sq(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        let mut base = a;
        let mut e = e;
        let mut acc = self.one;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Image of an integer under Z -> A.
    pub fn from_i64(&self, v: i64) -> Elem {
        match &self.repr {
            Repr::ZMod { n } => v.rem_euclid(*n as i64) as Elem,
            Repr::ExtField { p, .. } => v.rem_euclid(*p as i64) as Elem,
            Repr::Prod { comps, strides } => {
                let mut out = 0u64;
                for (c, s) in comps.iter().zip(strides) {
                    out += c.from_i64(v) as u64 * s;
                }
                out as Elem
            }
        }
    }

    pub fn is_unit(&self, a: Elem) -> bool {
        self.unit_flag[a as usize]
    }

    pub fn inv(&self, a: Elem) -> Option<Elem> {
        let v = self.inv[a as usize];
        (v != u32::MAX).then_some(v)
    }

    pub fn units(&self) -> &[Elem] {
        &self.units
    }

    fn compute_units(&mut self) {
        match &self.repr {
            Repr::Prod { comps, strides } => {
                // factor-wise: a is a unit iff every component is
                let mut units: Vec<Elem> = vec![0];
                for (c, s) in comps.iter().zip(strides) {
                    let mut next = Vec::with_capacity(units.len() * c.units.len());
                    for u in &c.units {
                        for base in &units {
                            next.push(base + (*u as u64 * s) as Elem);
                        }
                    }
                    units = next;
                }
                units.sort_unstable();
                let mut flag = vec![false; self.size as usize];
                let mut inv = vec![u32::MAX; self.size as usize];
                for &u in &units {
                    flag[u as usize] = true;
                    let mut iv = 0u64;
                    for (c, s) in comps.iter().zip(strides) {
                        let xu = ((u as u64 / s) % c.size as u64) as Elem;
                        iv += c.inv(xu).expect("component unit") as u64 * s;
                    }
                    inv[u as usize] = iv as u32;
                }
                self.units = units;
                self.unit_flag = flag;
                self.inv = inv;
            }
            Repr::ZMod { n } => {
                let n = *n;
                let mut flag = vec![false; self.size as usize];
                let mut inv = vec![u32::MAX; self.size as usize];
                let mut units = Vec::new();
                for a in 0..self.size {
                    if let Some(v) = inv_mod(a as u64, n) {
                        flag[a as usize] = true;
                        inv[a as usize] = v as u32;
                        units.push(a);
                    }
                }
                self.units = units;
                self.unit_flag = flag;
                self.inv = inv;
            }
            Repr::ExtField { exp, log, .. } => {
                let m = exp.len() as u64;
                let mut flag = vec![false; self.size as usize];
                let mut inv = vec![u32::MAX; self.size as usize];
                let mut units = Vec::new();
                for a in 1..self.size {
                    flag[a as usize] = true;
                    inv[a as usize] = exp[((m - log[a as usize] as u64) % m) as usize];
                    units.push(a);
                }
                self.units = units;
                self.unit_flag = flag;
                self.inv = inv;
            }
        }
    }

    /// mu_2 = units squaring to 1. Factor-wise on products.
    pub fn mu2(&self) -> Vec<Elem> {
        match &self.repr {
            Repr::Prod { comps, strides } => {
                let mut out: Vec<Elem> = vec![0];
                for (c, s) in comps.iter().zip(strides) {
                    let cm = c.mu2();
                    let mut next = Vec::with_capacity(out.len() * cm.len());
                    for u in &cm {
                        for base in &out {
                            next.push(base + (*u as u64 * s) as Elem);
                        }
                    }
                    out = next;
                }
                out.sort_unstable();
                out
            }
            _ => self
                .units
                .iter()
                .copied()
                .filter(|&u| self.sq(u) == self.one)
                .collect(),
        }
    }

    /// W = {a : a and 1-a both invertible}. Factor-wise on products.
    pub fn w_set(&self) -> Vec<Elem> {
        match &self.repr {
            Repr::Prod { comps, strides } => {
                let mut out: Vec<Elem> = vec![0];
                for (c, s) in comps.iter().zip(strides) {
                    let cw = c.w_set();
                    let mut next = Vec::with_capacity(out.len() * cw.len());
                    for w in &cw {
                        for base in &out {
                            next.push(base + (*w as u64 * s) as Elem);
                        }
                    }
                    out = next;
                }
                out.sort_unstable();
                out
            }
            _ => (0..self.size)
                .filter(|&a| self.is_unit(a) && self.is_unit(self.sub(self.one, a)))
                .collect(),
        }
    }

    /// A finite commutative ring is local exactly when its non-units are
    /// closed under addition (they then form the unique maximal ideal).
    pub fn is_local(&self) -> bool {
        match &self.repr {
            Repr::Prod { comps, .. } => comps.len() == 1 && comps[0].is_local(),
            _ => {
                let nonunits: Vec<Elem> =
                    (0..self.size).filter(|&a| !self.is_unit(a)).collect();
                nonunits
                    .iter()
                    .all(|&a| nonunits.iter().all(|&b| !self.is_unit(self.add(a, b))))
            }
        }
    }

    /// Z-basis of the additive group, with the additive order of each member.
    pub fn additive_gens(&self) -> (Vec<Elem>, Vec<u64>) {
        match &self.repr {
            Repr::ZMod { n } => (vec![1], vec![*n]),
            Repr::ExtField { p, d, .. } => {
                let mut gens = Vec::with_capacity(*d);
                let mut pw = 1u64;
                for _ in 0..*d {
                    gens.push(pw as Elem);
                    pw *= p;
                }
                (gens, vec![*p; *d])
            }
            Repr::Prod { comps, strides } => {
                let mut gens = Vec::new();
                let mut orders = Vec::new();
                for (c, s) in comps.iter().zip(strides) {
                    let (cg, co) = c.additive_gens();
                    for (g, o) in cg.iter().zip(co) {
                        gens.push((*g as u64 * s) as Elem);
                        orders.push(o);
                    }
                }
                (gens, orders)
            }
        }
    }

    /// Coordinates of an element over `additive_gens`, each in 0..order.
    pub fn additive_coords(&self, a: Elem) -> Vec<i64> {
        match &self.repr {
            Repr::ZMod { .. } => vec![a as i64],
            Repr::ExtField { p, d, .. } => {
                let mut out = Vec::with_capacity(*d);
                let mut x = a as u64;
                for _ in 0..*d {
                    out.push((x % p) as i64);
                    x /= p;
                }
                out
            }
            Repr::Prod { comps, strides } => {
                let mut out = Vec::new();
                for (c, s) in comps.iter().zip(strides) {
                    let xa = ((a as u64 / s) % c.size as u64) as Elem;
                    out.extend(c.additive_coords(xa));
                }
                out
            }
        }
    }

    pub fn additive_group(&self) -> FpAbelianGroup {
        let (gens, orders) = self.additive_gens();
        let k = gens.len();
        let rels = DenseMat::from_fn(k, k, |i, j| {
            if i == j {
                Int::from(orders[i])
            } else {
                Int::from(0)
            }
        });
        FpAbelianGroup::new(k, rels)
    }

    /// Human-readable rendering: integer, polynomial in x, or tuple.
    pub fn label(&self, a: Elem) -> String {
        match &self.repr {
            Repr::ZMod { .. } => a.to_string(),
            Repr::ExtField { p, d, .. } => {
                let mut terms = Vec::new();
                let mut x = a as u64;
                let mut digits = Vec::with_capacity(*d);
                for _ in 0..*d {
                    digits.push(x % p);
                    x /= p;
                }
                for i in (0..*d).rev() {
                    let c = digits[i];
                    if c == 0 {
                        continue;
                    }
                    let t = match (i, c) {
                        (0, c) => c.to_string(),
                        (1, 1) => "x".to_string(),
                        (1, c) => format!("{}x", c),
                        (i, 1) => format!("x^{}", i),
                        (i, c) => format!("{}x^{}", c, i),
                    };
                    terms.push(t);
                }
                if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join("+")
                }
            }
            Repr::Prod { comps, strides } => {
                let parts: Vec<String> = comps
                    .iter()
                    .zip(strides)
                    .map(|(c, s)| c.label(((a as u64 / s) % c.size as u64) as Elem))
                    .collect();
                format!("({})", parts.join(","))
            }
        }
    }

    /// The monic modulus polynomial of an extension field, if any.
    pub fn field_modulus(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::ExtField { modulus, .. } => Some(modulus),
            _ => None,
        }
    }
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({}, {} elements)", self.spec, self.size)
    }
}

fn build_repr(spec: &RingSpec) -> Result<Repr> {
    match spec {
        RingSpec::ZMod(n) => Ok(Repr::ZMod { n: *n }),
        RingSpec::Gf(q) => {
            let f = factorize(*q);
            let (p, d) = (f[0].0, f[0].1 as usize);
            if d == 1 {
                return Ok(Repr::ZMod { n: p });
            }
            if *q as usize > EXT_FIELD_CAP {
                return Err(CoreError::CapExceeded {
                    what: format!("extension field gf:{}", q),
                    cap: EXT_FIELD_CAP,
                    actual: *q as usize,
                });
            }
            let modulus = least_irreducible(p, d);
            let (exp, log) = exp_log_tables(p, d, &modulus, *q);
            Ok(Repr::ExtField {
                p,
                d,
                modulus,
                exp,
                log,
            })
        }
        RingSpec::Prod(fs) => {
            let comps = fs
                .iter()
                .map(|s| FiniteRing::new(s.clone()))
                .collect::<Result<Vec<_>>>()?;
            let mut strides = Vec::with_capacity(comps.len());
            let mut acc = 1u64;
            for c in &comps {
                strides.push(acc);
                acc = acc.checked_mul(c.size as u64).ok_or_else(|| {
                    CoreError::CapExceeded {
                        what: "product ring".into(),
                        cap: MAX_RING_SIZE,
                        actual: usize::MAX,
                    }
                })?;
                if acc as usize > MAX_RING_SIZE {
                    return Err(CoreError::CapExceeded {
                        what: "product ring".into(),
                        cap: MAX_RING_SIZE,
                        actual: acc as usize,
                    });
                }
            }
            Ok(Repr::Prod { comps, strides })
        }
    }
}

fn repr_size(r: &Repr) -> u32 {
    match r {
        Repr::ZMod { n } => *n as u32,
        Repr::ExtField { p, d, .. } => p.pow(*d as u32) as u32,
        Repr::Prod { comps, strides } => {
            (strides.last().unwrap() * comps.last().unwrap().size as u64) as u32
        }
    }
}

fn repr_one(r: &Repr) -> Elem {
    match r {
        Repr::ZMod { .. } | Repr::ExtField { .. } => 1,
        Repr::Prod { comps, strides } => {
            let mut out = 0u64;
            for (c, s) in comps.iter().zip(strides) {
                out += c.one as u64 * s;
            }
            out as Elem
        }
    }
}

// ---- polynomial arithmetic over F_p for extension field construction ----

/// Product of two digit vectors of length d, reduced by the monic modulus.
fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let d = a.len();
    let mut t = vec![0u64; 2 * d - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            t[i + j] = (t[i + j] + x * y) % p;
        }
    }
    for i in (d..t.len()).rev() {
        let c = t[i];
        if c == 0 {
            continue;
        }
        t[i] = 0;
        for j in 0..d {
            t[i - d + j] = (t[i - d + j] + (p - c) * modulus[j] % p) % p;
        }
    }
    t.truncate(d);
    t
}

fn digits_of(mut v: u64, p: u64, d: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(d);
    for _ in 0..d {
        out.push(v % p);
        v /= p;
    }
    out
}

fn undigits(digits: &[u64], p: u64) -> u64 {
    let mut out = 0u64;
    for &c in digits.iter().rev() {
        out = out * p + c;
    }
    out
}

/// Remainder of a monic division: does `div` (monic, ascending, degree e)
/// divide `poly` (ascending, degree exactly deg)?
fn poly_divides(div: &[u64], poly: &[u64], p: u64) -> bool {
    let e = div.len() - 1;
    let mut r = poly.to_vec();
    for i in (e..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        r[i] = 0;
        for j in 0..e {
            r[i - e + j] = (r[i - e + j] + (p - c) * div[j] % p) % p;
        }
    }
    r.iter().all(|&c| c == 0)
}

/// The lexicographically least monic irreducible polynomial of degree d >= 2
/// over F_p, coefficients compared most-significant first.
fn least_irreducible(p: u64, d: usize) -> Vec<u64> {
    'cand: for m in 0..p.pow(d as u32) {
        let mut poly = digits_of(m, p, d);
        poly.push(1);
        // trial division by every monic polynomial of degree 1..=d/2
        for e in 1..=(d / 2) {
            for lo in 0..p.pow(e as u32) {
                let mut div = digits_of(lo, p, e);
                div.push(1);
                if poly_divides(&div, &poly, p) {
                    continue 'cand;
                }
            }
        }
        return poly;
    }
    unreachable!("irreducible polynomials exist in every degree");
}

/// exp/log tables of a multiplicative generator of F_q*.
fn exp_log_tables(p: u64, d: usize, modulus: &[u64], q: u64) -> (Vec<u32>, Vec<u32>) {
    let n = q - 1;
    let primes: Vec<u64> = factorize(n).into_iter().map(|(p, _)| p).collect();
    let pow = |base: u64, mut e: u64| -> u64 {
        let mut b = digits_of(base, p, d);
        let mut acc = digits_of(1, p, d);
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_mul_mod(&acc, &b, modulus, p);
            }
            b = poly_mul_mod(&b, &b, modulus, p);
            e >>= 1;
        }
        undigits(&acc, p)
    };
    let mut gen = 0u64;
    for c in 2..q {
        if primes.iter().all(|&pr| pow(c, n / pr) != 1) {
            gen = c;
            break;
        }
    }
    assert!(gen != 0, "multiplicative group of a finite field is cyclic");
    let g = digits_of(gen, p, d);
    let mut exp = vec![0u32; n as usize];
    let mut log = vec![0u32; q as usize];
    let mut cur = digits_of(1, p, d);
    for i in 0..n as usize {
        let v = undigits(&cur, p);
        exp[i] = v as u32;
        log[v as usize] = i as u32;
        cur = poly_mul_mod(&cur, &g, modulus, p);
    }
    assert_eq!(undigits(&cur, p), 1, "generator order divides q-1");
    (exp, log)
}

// ---- integer helpers ----

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn inv_mod(a: u64, n: u64) -> Option<u64> {
    let (mut r0, mut r1) = (n as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(n as i128) as u64)
}

// ---- unit group structure ----

/// Abelian structure of A*: independent generators with orders forming the
/// invariant-factor chain, plus a discrete-log table over them.
pub struct UnitGroup {
    gens: Vec<Elem>,
    orders: Vec<u64>,
    group: FpAbelianGroup,
    dlog: HashMap<Elem, Vec<u64>>,
}

impl UnitGroup {
    pub fn new(ring: &FiniteRing) -> Self {
        let n = ring.units().len() as u64;
        let n_factors = factorize(n);
        let ord_of = |u: Elem| -> u64 {
            let mut ord = n;
            for &(p, _) in &n_factors {
                while ord % p == 0 && ring.pow(u, ord / p) == ring.one() {
                    ord /= p;
                }
            }
            ord
        };
        // greedy generating set; max order first for small presentations
        let mut cands: Vec<(u64, Elem)> = ring.units().iter().map(|&u| (ord_of(u), u)).collect();
        cands.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut raw_gens: Vec<Elem> = Vec::new();
        let mut span: HashMap<Elem, Vec<i64>> = HashMap::new();
        span.insert(ring.one(), Vec::new());
        let mut rel_cols: Vec<Vec<i64>> = Vec::new();
        for (_, u) in cands {
            if span.contains_key(&u) {
                continue;
            }
            // least j >= 1 with u^j already spanned; its coordinates close the
            // triangular relation column, so the presentation below is exact
            let mut pw = u;
            let mut j = 1i64;
            while !span.contains_key(&pw) {
                pw = ring.mul(pw, u);
                j += 1;
            }
            let landing = span[&pw].clone();
            for r in &mut rel_cols {
                r.push(0);
            }
            let mut rel: Vec<i64> = landing.iter().map(|c| -c).collect();
            rel.push(j);
            rel_cols.push(rel);
            raw_gens.push(u);
            let k = raw_gens.len();
            let mut next: HashMap<Elem, Vec<i64>> = HashMap::with_capacity(span.len() * j as usize);
            for (s, cs) in &span {
                let mut acc = *s;
                for e in 0..j {
                    let mut coords = cs.clone();
                    coords.resize(k - 1, 0);
                    coords.push(e);
                    next.insert(acc, coords);
                    if e + 1 < j {
                        acc = ring.mul(acc, u);
                    }
                }
            }
            span = next;
        }
        assert_eq!(span.len() as u64, n, "span covers all units");
        let k = raw_gens.len();
        let rels = DenseMat::from_cols(
            k,
            &rel_cols
                .iter()
                .map(|c| {
                    let mut v = c.clone();
                    v.resize(k, 0);
                    v.iter().map(|&x| Int::from(x)).collect()
                })
                .collect::<Vec<_>>(),
        );
        let (group, to_red, from_red) = FpAbelianGroup::new(k, rels).reduced();
        assert_eq!(group.free_rank(), 0, "unit group is finite");
        let orders: Vec<u64> = group
            .torsion()
            .iter()
            .map(|d| u64::try_from(d.clone()).expect("small order"))
            .collect();
        // independent generators realize the invariant factors
        let raw_orders: Vec<u64> = raw_gens.iter().map(|&g| ord_of(g)).collect();
        let mut gens = Vec::with_capacity(group.gens());
        for j in 0..group.gens() {
            let col = from_red.col(j);
            let mut g = ring.one();
            for (i, v) in col.iter().enumerate() {
                let m = raw_orders[i] as i64;
                let e = (i64::try_from(v % Int::from(m)).unwrap() + m) % m;
                g = ring.mul(g, ring.pow(raw_gens[i], e as u64));
            }
            gens.push(g);
        }
        let mut dlog = HashMap::with_capacity(span.len());
        for (u, cs) in &span {
            let mut full = cs.clone();
            full.resize(k, 0);
            let big: Vec<Int> = full.iter().map(|&x| Int::from(x)).collect();
            let coords = group.canonical(&to_red.mul_vec(&big));
            dlog.insert(
                *u,
                coords
                    .iter()
                    .map(|c| u64::try_from(c.clone()).expect("canonical coordinate"))
                    .collect(),
            );
        }
        let ug = UnitGroup {
            gens,
            orders,
            group,
            dlog,
        };
        debug_assert!(ug.verify(ring));
        ug
    }

    /// Full consistency: order product and discrete-log round-trips.
    pub fn verify(&self, ring: &FiniteRing) -> bool {
        let prod: u64 = self.orders.iter().product();
        if prod != ring.units().len() as u64 {
            return false;
        }
        self.dlog
            .iter()
            .all(|(&u, coords)| self.compose(ring, coords) == u)
    }

    pub fn gens(&self) -> &[Elem] {
        &self.gens
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn group(&self) -> &FpAbelianGroup {
        &self.group
    }

    pub fn invariant_factors(&self) -> Vec<u64> {
        self.orders.clone()
    }

    pub fn order(&self) -> usize {
        self.dlog.len()
    }

    pub fn dlog(&self, u: Elem) -> Option<&[u64]> {
        self.dlog.get(&u).map(|v| v.as_slice())
    }

    /// Product of generator powers.
    pub fn compose(&self, ring: &FiniteRing, coords: &[u64]) -> Elem {
        let mut out = ring.one();
        for (g, &e) in self.gens.iter().zip(coords) {
            out = ring.mul(out, ring.pow(*g, e));
        }
        out
    }
}

/// Coinvariants of the square action of A* on the additive group:
/// A / <(a^2 - 1) b>. Unit generators suffice because
/// ((ab)^2 - 1)x = a^2 ((b^2 - 1)x) + (a^2 - 1)x and the subgroup is closed
/// under multiplication by unit squares.
pub fn h0_units_on_a(ring: &FiniteRing, units: &UnitGroup) -> FpAbelianGroup {
    let (gens, orders) = ring.additive_gens();
    let k = gens.len();
    let mut rel_cols: Vec<Vec<Int>> = Vec::new();
    for i in 0..k {
        let mut v = vec![Int::from(0); k];
        v[i] = Int::from(orders[i]);
        rel_cols.push(v);
    }
    for &a in units.gens() {
        let m = ring.sub(ring.sq(a), ring.one());
        for &e in &gens {
            let coords = ring.additive_coords(ring.mul(m, e));
            rel_cols.push(coords.iter().map(|&c| Int::from(c)).collect());
        }
    }
    FpAbelianGroup::new(k, DenseMat::from_cols(k, &rel_cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgrp::int;

    fn ring(s: &str) -> FiniteRing {
        FiniteRing::parse(s).unwrap()
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(parse_ring_spec("zmod:8").unwrap(), RingSpec::ZMod(8));
        let p = parse_ring_spec("prod:gf:5,gf:4,gf:4").unwrap();
        assert_eq!(
            p,
            RingSpec::Prod(vec![RingSpec::Gf(5), RingSpec::Gf(4), RingSpec::Gf(4)])
        );
        assert_eq!(p.to_string(), "prod:gf:5,gf:4,gf:4");
        assert!(parse_ring_spec("gf:6").is_err());
        assert!(parse_ring_spec("zmod:1").is_err());
        assert!(parse_ring_spec("prod:zmod:4").is_err());
        assert!(parse_ring_spec("prod:prod:zmod:4,zmod:4,zmod:9").is_err());
        assert!(parse_ring_spec("field:7").is_err());
    }

    #[test]
    fn ring_axioms_exhaustive_small() {
        for s in ["zmod:8", "gf:4", "gf:9", "gf:8", "zmod:12", "prod:zmod:4,gf:4"] {
            let r = ring(s);
            assert!(r.size() <= 64);
            let n = r.size() as Elem;
            for a in 0..n {
                assert_eq!(r.add(0, a), a);
                assert_eq!(r.mul(r.one(), a), a);
                assert_eq!(r.add(a, r.neg(a)), 0);
                for b in 0..n {
                    assert_eq!(r.add(a, b), r.add(b, a));
                    assert_eq!(r.mul(a, b), r.mul(b, a));
                    for c in 0..n {
                        assert_eq!(r.add(r.add(a, b), c), r.add(a, r.add(b, c)));
                        assert_eq!(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c)));
                        assert_eq!(
                            r.mul(a, r.add(b, c)),
                            r.add(r.mul(a, b), r.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn ext_field_matches_schoolbook_polynomials() {
        // reference multiplication straight from the modulus, no exp/log
        for q in [4u64, 8, 9, 16, 25, 27] {
            let r = ring(&format!("gf:{}", q));
            let f = factorize(q);
            let (p, d) = (f[0].0, f[0].1 as usize);
            let modulus = r.field_modulus().unwrap().to_vec();
            for a in 0..r.size() as u64 {
                for b in 0..r.size() as u64 {
                    let pr = poly_mul_mod(&digits_of(a, p, d), &digits_of(b, p, d), &modulus, p);
                    assert_eq!(r.mul(a as Elem, b as Elem), undigits(&pr, p) as Elem);
                }
            }
        }
    }

    #[test]
    fn least_irreducible_polynomials() {
        // x^2+x+1, x^2+1, x^3+x+1: ascending coefficient order
        assert_eq!(least_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(least_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(least_irreducible(2, 3), vec![1, 1, 0, 1]);
    }

    #[test]
    fn unit_group_structures() {
        let z8 = ring("zmod:8");
        let u8 = UnitGroup::new(&z8);
        assert_eq!(z8.units(), &[1, 3, 5, 7]);
        assert_eq!(u8.invariant_factors(), vec![2, 2]);
        assert!(u8.verify(&z8));

        let f5 = ring("gf:5");
        let u5 = UnitGroup::new(&f5);
        assert_eq!(u5.invariant_factors(), vec![4]);

        let f4 = ring("gf:4");
        let u4 = UnitGroup::new(&f4);
        assert_eq!(u4.invariant_factors(), vec![3]);

        let f9 = ring("gf:9");
        assert_eq!(UnitGroup::new(&f9).invariant_factors(), vec![8]);

        let big = ring("prod:gf:5,gf:4,gf:4");
        let ub = UnitGroup::new(&big);
        assert_eq!(big.units().len(), 36);
        assert_eq!(ub.order(), 36);
        assert!(ub.verify(&big));
    }

    #[test]
    fn dlog_roundtrips() {
        for s in ["zmod:8", "zmod:15", "gf:9", "prod:zmod:4,gf:5"] {
            let r = ring(s);
            let ug = UnitGroup::new(&r);
            for &u in r.units() {
                let c = ug.dlog(u).unwrap();
                assert_eq!(ug.compose(&r, c), u);
                for (e, o) in c.iter().zip(ug.orders()) {
                    assert!(e < o);
                }
            }
        }
    }

    #[test]
    fn mu2_values() {
        assert_eq!(ring("gf:5").mu2(), vec![1, 4]);
        assert_eq!(ring("zmod:8").mu2(), vec![1, 3, 5, 7]);
        assert_eq!(ring("gf:4").mu2(), vec![1]);
    }

    #[test]
    fn mu2_is_subgroup_of_two_torsion() {
        for s in ["zmod:8", "zmod:12", "gf:9", "gf:25", "prod:gf:5,gf:4,gf:4"] {
            let r = ring(s);
            let m = r.mu2();
            assert!(m.contains(&r.one()));
            assert!(m.contains(&r.neg_one()));
            for &a in &m {
                for &b in &m {
                    assert!(m.contains(&r.mul(a, b)));
                }
            }
        }
        // odd-characteristic fields: exactly {1, -1}
        for s in ["gf:3", "gf:5", "gf:7", "gf:9", "gf:25", "gf:27"] {
            let r = ring(s);
            let mut expect = vec![r.one(), r.neg_one()];
            expect.sort_unstable();
            assert_eq!(r.mu2(), expect);
        }
    }

    #[test]
    fn w_set_values() {
        assert_eq!(ring("gf:3").w_set(), vec![2]);
        assert_eq!(ring("gf:4").w_set(), vec![2, 3]);
        assert_eq!(ring("zmod:4").w_set(), Vec::<Elem>::new());
        // zmod:9: exactly the a with a, 1-a both prime to 3
        assert_eq!(ring("zmod:9").w_set(), vec![2, 5, 8]);
    }

    #[test]
    fn w_set_two_ways() {
        for s in ["zmod:8", "zmod:9", "gf:9", "prod:gf:5,gf:4,gf:4"] {
            let r = ring(s);
            let direct = r.w_set();
            let complement: Vec<Elem> = r
                .elements()
                .filter(|&a| r.is_unit(r.mul(a, r.sub(r.one(), a))))
                .collect();
            assert_eq!(direct, complement);
        }
    }

    #[test]
    fn product_units_multiply() {
        let r = ring("prod:zmod:8,gf:9");
        assert_eq!(r.units().len(), 4 * 8);
        let scan: Vec<Elem> = r.elements().filter(|&a| r.is_unit(a)).collect();
        assert_eq!(r.units(), scan.as_slice());
        for &u in r.units() {
            let i = r.inv(u).unwrap();
            assert_eq!(r.mul(u, i), r.one());
        }
    }

    #[test]
    fn h0_square_action_values() {
        for (s, free, torsion) in [
            ("gf:7", 0usize, vec![]),
            ("gf:3", 0, vec![int(3)]),
            ("zmod:8", 0, vec![int(8)]),
        ] {
            let r = ring(s);
            let ug = UnitGroup::new(&r);
            let h = h0_units_on_a(&r, &ug);
            assert_eq!(h.free_rank(), free, "{}", s);
            assert_eq!(h.torsion(), torsion.as_slice(), "{}", s);
        }
    }

    #[test]
    fn additive_structure_roundtrip() {
        for s in ["zmod:8", "gf:9", "prod:zmod:4,gf:4"] {
            let r = ring(s);
            let (gens, orders) = r.additive_gens();
            let prod: u64 = orders.iter().product();
            assert_eq!(prod, r.size() as u64);
            for a in r.elements() {
                let coords = r.additive_coords(a);
                let mut acc = r.zero();
                for ((&g, &c), &o) in gens.iter().zip(&coords).zip(&orders) {
                    assert!(0 <= c && (c as u64) < o);
                    for _ in 0..c {
                        acc = r.add(acc, g);
                    }
                }
                assert_eq!(acc, a);
            }
        }
    }

    #[test]
    fn from_i64_and_labels() {
        let f4 = ring("gf:4");
        assert_eq!(f4.label(0), "0");
        assert_eq!(f4.label(1), "1");
        assert_eq!(f4.label(2), "x");
        assert_eq!(f4.label(3), "x+1");
        let f9 = ring("gf:9");
        assert_eq!(f9.from_i64(-1), f9.neg_one());
        assert_eq!(f9.label(f9.neg_one()), "2");
        let p = ring("prod:zmod:4,gf:4");
        assert_eq!(p.label(p.one()), "(1,1)");
        assert_eq!(p.from_i64(6), p.from_i64(6 - 12));
        let z = ring("zmod:12");
        assert_eq!(z.from_i64(-5), 7);
    }

    #[test]
    fn large_zmod_without_tables() {
        let r = ring("zmod:10007");
        assert_eq!(r.units().len(), 10006);
        assert_eq!(r.mul(10006, 10006), 1);
        assert_eq!(r.inv(2).unwrap(), 5004);
    }
}
