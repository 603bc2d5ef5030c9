//! Exact ideal arithmetic over the imaginary-quadratic class-number-one
//! catalog (Q(i), Q(omega), Q(sqrt -2)): prime enumeration, character
//! values, quadratic twists, and multiplicative coefficient streams.
//!
//! Every ideal in the catalog is principal, so a character is pinned by
//! a unit-compatible rule on generators; streams are built by expanding
//! local Euler factors and are exact throughout (checked i128).

use crate::chartypes::InfinityType;
use crate::numfield::embeddings::EmbeddingSet;
use crate::numfield::parse::{parse_element, tower_from_json};
use crate::numfield::NumberFieldTower;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QiError {
    #[error("unit compatibility fails: twist(u) * u^k != 1 for unit {0:?}")]
    UnitIncompatible(QuadInt),
    #[error("quadratic character has no ±1 value at even primes")]
    EvenPrimeUnsupported,
    #[error("coefficient overflow at norm {0}; reduce X or k")]
    Overflow(u64),
    #[error("twist table is not a character of the unit group: {0}")]
    BadTwistTable(String),
    #[error("unknown catalog field `{0}`")]
    UnknownField(String),
    #[error("element is not integral: `{0}`")]
    NotIntegral(String),
    #[error("{0}")]
    Internal(String),
}

/// Imaginary quadratic fields of class number one used by the catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CatalogField {
    /// Q(i), ring Z[i]
    GaussianI,
    /// Q(omega), omega = e^{2 pi i/3}, ring Z[omega]
    EisensteinOmega,
    /// Q(sqrt(-2)), ring Z[sqrt(-2)]
    SqrtMinusTwo,
}

impl CatalogField {
    pub fn from_name(name: &str) -> Result<Self, QiError> {
        match name {
            "Q(i)" | "q(i)" | "gaussian" => Ok(CatalogField::GaussianI),
            "Q(omega)" | "q(omega)" | "eisenstein" | "Q(w)" => Ok(CatalogField::EisensteinOmega),
            "Q(sqrt-2)" | "q(sqrt-2)" | "Q(sqrt(-2))" => Ok(CatalogField::SqrtMinusTwo),
            other => Err(QiError::UnknownField(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CatalogField::GaussianI => "Q(i)",
            CatalogField::EisensteinOmega => "Q(omega)",
            CatalogField::SqrtMinusTwo => "Q(sqrt-2)",
        }
    }

    pub fn gen_name(&self) -> &'static str {
        match self {
            CatalogField::GaussianI => "i",
            CatalogField::EisensteinOmega => "w",
            CatalogField::SqrtMinusTwo => "r",
        }
    }

    /// The field as a one-layer tower (for embeddings and parsing).
    pub fn tower(&self) -> NumberFieldTower {
        let json = match self {
            CatalogField::GaussianI => r#"{ "layers": [ { "var": "i", "minpoly": "x^2+1" } ] }"#,
            CatalogField::EisensteinOmega => {
                r#"{ "layers": [ { "var": "w", "minpoly": "x^2+x+1" } ] }"#
            }
            CatalogField::SqrtMinusTwo => {
                r#"{ "layers": [ { "var": "r", "minpoly": "x^2+2" } ] }"#
            }
        };
        tower_from_json(json).expect("catalog tower")
    }

    /// Units of the ring of integers.
    pub fn units(&self) -> Vec<QuadInt> {
        match self {
            CatalogField::GaussianI => vec![
                QuadInt::new(1, 0),
                QuadInt::new(-1, 0),
                QuadInt::new(0, 1),
                QuadInt::new(0, -1),
            ],
            CatalogField::EisensteinOmega => vec![
                QuadInt::new(1, 0),
                QuadInt::new(-1, 0),
                QuadInt::new(0, 1),
                QuadInt::new(0, -1),
                QuadInt::new(-1, -1),
                QuadInt::new(1, 1),
            ],
            CatalogField::SqrtMinusTwo => vec![QuadInt::new(1, 0), QuadInt::new(-1, 0)],
        }
    }

    /// Coefficients (c0, c1) of g^2 = c0 + c1 g.
    fn gen_square(&self) -> (i128, i128) {
        match self {
            CatalogField::GaussianI => (-1, 0),
            CatalogField::EisensteinOmega => (-1, -1),
            CatalogField::SqrtMinusTwo => (-2, 0),
        }
    }

    pub fn mul(&self, x: &QuadInt, y: &QuadInt) -> QuadInt {
        let (c0, c1) = self.gen_square();
        // (a + bg)(c + dg) = ac + (ad + bc) g + bd g^2
        let bd = x.b * y.b;
        QuadInt {
            a: x.a * y.a + bd * c0,
            b: x.a * y.b + x.b * y.a + bd * c1,
        }
    }

    pub fn checked_mul(&self, x: &QuadInt, y: &QuadInt) -> Option<QuadInt> {
        let (c0, c1) = self.gen_square();
        let bd = x.b.checked_mul(y.b)?;
        let a = x
            .a
            .checked_mul(y.a)?
            .checked_add(bd.checked_mul(c0)?)?;
        let b = x
            .a
            .checked_mul(y.b)?
            .checked_add(x.b.checked_mul(y.a)?)?
            .checked_add(bd.checked_mul(c1)?)?;
        Some(QuadInt { a, b })
    }

    pub fn conj(&self, x: &QuadInt) -> QuadInt {
        match self {
            // i -> -i, sqrt(-2) -> -sqrt(-2)
            CatalogField::GaussianI | CatalogField::SqrtMinusTwo => QuadInt::new(x.a, -x.b),
            // omega -> omega^2 = -1-omega
            CatalogField::EisensteinOmega => QuadInt::new(x.a - x.b, -x.b),
        }
    }

    pub fn norm(&self, x: &QuadInt) -> i128 {
        match self {
            CatalogField::GaussianI => x.a * x.a + x.b * x.b,
            CatalogField::EisensteinOmega => x.a * x.a - x.a * x.b + x.b * x.b,
            CatalogField::SqrtMinusTwo => x.a * x.a + 2 * x.b * x.b,
        }
    }

    pub fn pow(&self, x: &QuadInt, k: u32) -> Result<QuadInt, QiError> {
        let mut acc = QuadInt::new(1, 0);
        for _ in 0..k {
            acc = self
                .checked_mul(&acc, x)
                .ok_or_else(|| QiError::Overflow(self.norm(x).unsigned_abs() as u64))?;
        }
        Ok(acc)
    }

    /// Minimal polynomial of the generator modulo p: x^2 + m1 x + m0,
    /// returned as (m1, m0).
    fn gen_minpoly_mod(&self) -> (u64, u64) {
        match self {
            CatalogField::GaussianI => (0, 1),
            CatalogField::EisensteinOmega => (1, 1),
            CatalogField::SqrtMinusTwo => (0, 2),
        }
    }

    /// Splitting kind of the odd rational prime p.
    fn splits(&self, p: u64) -> bool {
        match self {
            CatalogField::GaussianI => p % 4 == 1,
            CatalogField::EisensteinOmega => p % 3 == 1,
            CatalogField::SqrtMinusTwo => p % 8 == 1 || p % 8 == 3,
        }
    }

    fn ramified_prime(&self) -> (u64, QuadInt) {
        match self {
            CatalogField::GaussianI => (2, QuadInt::new(1, 1)),
            CatalogField::EisensteinOmega => (3, QuadInt::new(1, -1)),
            CatalogField::SqrtMinusTwo => (2, QuadInt::new(0, 1)),
        }
    }

    /// A generator of norm p for a split prime, by bounded search.
    fn split_generator(&self, p: u64) -> QuadInt {
        let pi = p as i128;
        match self {
            CatalogField::GaussianI => {
                let mut a = 1i128;
                loop {
                    let b2 = pi - a * a;
                    if b2 <= 0 {
                        break;
                    }
                    let b = isqrt(b2);
                    if b * b == b2 && a >= b {
                        return QuadInt { a, b };
                    }
                    a += 1;
                }
                unreachable!("split prime must be a sum of two squares")
            }
            CatalogField::EisensteinOmega => {
                // a^2 - a b + b^2 = p with a > b > 0
                for a in 1..=(2 * isqrt(pi) + 2) {
                    for b in 1..a {
                        if a * a - a * b + b * b == pi {
                            return QuadInt { a, b };
                        }
                    }
                }
                unreachable!("split Eisenstein prime not found")
            }
            CatalogField::SqrtMinusTwo => {
                let mut a = 1i128;
                loop {
                    let r = pi - a * a;
                    if r <= 0 {
                        break;
                    }
                    if r % 2 == 0 {
                        let b2 = r / 2;
                        let b = isqrt(b2);
                        if b * b == b2 {
                            return QuadInt { a, b };
                        }
                    }
                    a += 1;
                }
                unreachable!("split prime must be a^2 + 2 b^2")
            }
        }
    }
}

fn isqrt(n: i128) -> i128 {
    if n < 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Element a + b g of the ring of integers of a catalog field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadInt {
    pub a: i128,
    pub b: i128,
}

impl QuadInt {
    pub fn new(a: i128, b: i128) -> Self {
        QuadInt { a, b }
    }

    pub fn zero() -> Self {
        QuadInt { a: 0, b: 0 }
    }

    pub fn one() -> Self {
        QuadInt { a: 1, b: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn checked_add(&self, o: &QuadInt) -> Option<QuadInt> {
        Some(QuadInt {
            a: self.a.checked_add(o.a)?,
            b: self.b.checked_add(o.b)?,
        })
    }

    pub fn scale(&self, s: i128) -> QuadInt {
        QuadInt {
            a: self.a * s,
            b: self.b * s,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitKind {
    Split,
    Inert,
    Ramified,
}

/// A prime ideal of the catalog ring, by a fixed canonical generator.
#[derive(Clone, Debug)]
pub struct PrimeIdeal {
    pub generator: QuadInt,
    pub norm: u64,
    pub kind: SplitKind,
    pub rational_prime: u64,
}

/// All prime ideals of norm <= x, ordered by (norm, generator).
pub fn primes_up_to(field: CatalogField, x: u64) -> Vec<PrimeIdeal> {
    let mut out = Vec::new();
    if x < 2 {
        return out;
    }
    let (rp, rgen) = field.ramified_prime();
    let mut sieve = vec![true; (x + 1) as usize];
    for p in 2..=x {
        if !sieve[p as usize] {
            continue;
        }
        let mut q = p * p;
        while q <= x {
            sieve[q as usize] = false;
            q += p;
        }
        if p == rp {
            out.push(PrimeIdeal {
                generator: rgen,
                norm: p,
                kind: SplitKind::Ramified,
                rational_prime: p,
            });
        } else if field.splits(p) {
            let g = field.split_generator(p);
            let gc = field.conj(&g);
            out.push(PrimeIdeal {
                generator: g,
                norm: p,
                kind: SplitKind::Split,
                rational_prime: p,
            });
            out.push(PrimeIdeal {
                generator: gc,
                norm: p,
                kind: SplitKind::Split,
                rational_prime: p,
            });
        } else if p.checked_mul(p).map_or(false, |pp| pp <= x) {
            out.push(PrimeIdeal {
                generator: QuadInt::new(p as i128, 0),
                norm: p * p,
                kind: SplitKind::Inert,
                rational_prime: p,
            });
        }
    }
    out.sort_by_key(|pr| (pr.norm, pr.generator.a, pr.generator.b));
    out
}

// ---- finite twists ----

/// A character of (O/m)^x given by an explicit value table.
#[derive(Clone, Debug)]
pub struct FiniteTwist {
    pub modulus: QuadInt,
    /// reduced residue -> value (a root of unity in the field).
    table: HashMap<QuadInt, QuadInt>,
    field: CatalogField,
}

impl FiniteTwist {
    /// Canonical reduction of z modulo m: z - m * round(z conj(m)/N(m)).
    pub fn reduce(field: CatalogField, m: &QuadInt, z: &QuadInt) -> QuadInt {
        let n = field.norm(m);
        let zc = field.mul(z, &field.conj(m));
        let qa = rounded_div(zc.a, n);
        let qb = rounded_div(zc.b, n);
        let q = QuadInt::new(qa, qb);
        let sub = field.mul(m, &q);
        QuadInt::new(z.a - sub.a, z.b - sub.b)
    }

    /// Builds and validates a table over the full unit group of O/m.
    pub fn new(
        field: CatalogField,
        modulus: QuadInt,
        assignments: &[(QuadInt, QuadInt)],
    ) -> Result<Self, QiError> {
        let n = field.norm(&modulus);
        if n <= 1 {
            return Err(QiError::BadTwistTable("modulus must be nontrivial".into()));
        }
        // enumerate residues and the unit group
        let bound = n.unsigned_abs() as i128;
        let mut units: Vec<QuadInt> = Vec::new();
        let mut seen: HashMap<QuadInt, ()> = HashMap::new();
        for a in -bound..=bound {
            for b in -bound..=bound {
                let z = FiniteTwist::reduce(field, &modulus, &QuadInt::new(a, b));
                if seen.contains_key(&z) {
                    continue;
                }
                seen.insert(z, ());
                // unit iff gcd-norm condition: N(z) coprime to N(m)
                let g = gcd_i128(field.norm(&z), n);
                if g == 1 {
                    units.push(z);
                }
            }
        }
        // close the assignment multiplicatively
        let mut table: HashMap<QuadInt, QuadInt> = HashMap::new();
        table.insert(
            FiniteTwist::reduce(field, &modulus, &QuadInt::one()),
            QuadInt::one(),
        );
        for (r, v) in assignments {
            table.insert(FiniteTwist::reduce(field, &modulus, r), *v);
        }
        let mut changed = true;
        while changed {
            changed = false;
            let keys: Vec<QuadInt> = table.keys().cloned().collect();
            for x in &keys {
                for y in &keys {
                    let xy = FiniteTwist::reduce(field, &modulus, &field.mul(x, y));
                    let val = field.mul(&table[x], &table[y]);
                    match table.get(&xy) {
                        None => {
                            table.insert(xy, val);
                            changed = true;
                        }
                        Some(existing) if *existing != val => {
                            return Err(QiError::BadTwistTable(format!(
                                "inconsistent at {x:?} * {y:?}"
                            )));
                        }
                        _ => {}
                    }
                }
            }
        }
        for u in &units {
            if !table.contains_key(u) {
                return Err(QiError::BadTwistTable(format!(
                    "value not determined on residue {u:?}"
                )));
            }
        }
        Ok(FiniteTwist {
            modulus,
            table,
            field,
        })
    }

    pub fn value(&self, z: &QuadInt) -> Option<QuadInt> {
        let r = FiniteTwist::reduce(self.field, &self.modulus, z);
        self.table.get(&r).copied()
    }
}

fn rounded_div(a: i128, n: i128) -> i128 {
    // nearest integer to a/n, ties toward +inf; n > 0
    let (q, r) = (a.div_euclid(n), a.rem_euclid(n));
    if 2 * r >= n {
        q + 1
    } else {
        q
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

// ---- Hecke character specifications ----

/// An algebraic Hecke character over a catalog field: value on a prime
/// with generator alpha is alpha^k * twist(alpha) * quad_sign, with the
/// Tate twist applied at evaluation time as an s-shift.
#[derive(Clone, Debug)]
pub struct HeckeCharacterSpec {
    pub field: CatalogField,
    pub k: u32,
    pub twist: Option<FiniteTwist>,
    pub quad_d: Option<QuadInt>,
    pub tate: i64,
}

/// JSON form of a character specification.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CharSpecJson {
    pub field: String,
    pub k: u32,
    #[serde(default)]
    pub twist_modulus: Option<String>,
    #[serde(default)]
    pub twist_table: Option<Vec<[String; 2]>>,
    #[serde(default)]
    pub quad_d: Option<String>,
    #[serde(default)]
    pub tate: i64,
}

impl HeckeCharacterSpec {
    /// Validates unit compatibility at construction.
    pub fn new(
        field: CatalogField,
        k: u32,
        twist: Option<FiniteTwist>,
        quad_d: Option<QuadInt>,
        tate: i64,
    ) -> Result<Self, QiError> {
        for u in field.units() {
            let uk = field.pow(&u, k)?;
            let tv = match &twist {
                None => QuadInt::one(),
                Some(t) => t
                    .value(&u)
                    .ok_or_else(|| QiError::BadTwistTable("unit outside table".into()))?,
            };
            if field.mul(&uk, &tv) != QuadInt::one() {
                return Err(QiError::UnitIncompatible(u));
            }
        }
        Ok(HeckeCharacterSpec {
            field,
            k,
            twist,
            quad_d,
            tate,
        })
    }

    pub fn from_json(json: &str) -> Result<Self, QiError> {
        let spec: CharSpecJson = serde_json::from_str(json)
            .map_err(|e| QiError::Internal(format!("bad character JSON: {e}")))?;
        HeckeCharacterSpec::from_spec(&spec)
    }

    pub fn from_spec(spec: &CharSpecJson) -> Result<Self, QiError> {
        let field = CatalogField::from_name(&spec.field)?;
        let tower = field.tower();
        let parse_qi = |s: &str| -> Result<QuadInt, QiError> {
            let e = parse_element(&tower, s)
                .map_err(|e| QiError::Internal(format!("bad element `{s}`: {e}")))?;
            let a = &e.coords[0];
            let b = &e.coords[1];
            if !a.is_integer() || !b.is_integer() {
                return Err(QiError::NotIntegral(s.to_string()));
            }
            Ok(QuadInt::new(
                a.numer().to_i128().ok_or(QiError::Overflow(0))?,
                b.numer().to_i128().ok_or(QiError::Overflow(0))?,
            ))
        };
        let quad_d = spec.quad_d.as_deref().map(&parse_qi).transpose()?;
        let twist = match (&spec.twist_modulus, &spec.twist_table) {
            (None, None) => None,
            (Some(m), Some(rows)) => {
                let modulus = parse_qi(m)?;
                let mut assignments = Vec::new();
                for row in rows {
                    assignments.push((parse_qi(&row[0])?, parse_qi(&row[1])?));
                }
                Some(FiniteTwist::new(field, modulus, &assignments)?)
            }
            _ => {
                return Err(QiError::BadTwistTable(
                    "twist_modulus and twist_table must come together".into(),
                ))
            }
        };
        HeckeCharacterSpec::new(field, spec.k, twist, quad_d, spec.tate)
    }

    /// The character twisted by the quadratic character of F1(sqrt(d)).
    pub fn with_quad_twist(&self, d: QuadInt) -> Self {
        let mut s = self.clone();
        s.quad_d = Some(d);
        s
    }

    pub fn without_quad_twist(&self) -> Self {
        let mut s = self.clone();
        s.quad_d = None;
        s
    }

    /// Purity weight of the coefficient stream (|a_n| <= d(n) n^{w/2}).
    pub fn coeff_weight(&self) -> i64 {
        self.k as i64
    }

    /// E-valued algebraic infinity type over the canonical embedding
    /// order: k at the embedding sending the generator to the upper half
    /// plane, 0 at its conjugate.
    pub fn algebraic_infinity_type(&self, emb: &EmbeddingSet) -> InfinityType {
        let mut exps = vec![0i64; emb.count()];
        let j = (0..emb.count())
            .find(|&j| emb.gen_values[j][0].im.is_sign_positive())
            .expect("imaginary quadratic field");
        exps[j] = self.k as i64;
        exps[emb.conj[j]] = 0;
        InfinityType::new(exps)
    }

    /// Exact character value at a prime ideal; zero at primes dividing
    /// the twist modulus or the quadratic-twist discriminant datum.
    pub fn value_at(&self, p: &PrimeIdeal) -> Result<QuadInt, QiError> {
        if let Some(tw) = &self.twist {
            // zero at primes dividing the modulus
            let g = gcd_i128(
                self.field.norm(&tw.modulus),
                self.field.norm(&p.generator),
            );
            if g != 1 {
                return Ok(QuadInt::zero());
            }
        }
        let quad_sign = match &self.quad_d {
            None => 1i128,
            Some(d) => quad_char(self.field, d, p) as i128,
        };
        if quad_sign == 0 {
            return Ok(QuadInt::zero());
        }
        let mut v = self.field.pow(&p.generator, self.k)?;
        if let Some(tw) = &self.twist {
            let t = tw
                .value(&p.generator)
                .ok_or_else(|| QiError::BadTwistTable("missing residue value".into()))?;
            v = self.field.mul(&v, &t);
        }
        Ok(v.scale(quad_sign))
    }
}

// ---- quadratic character by the Euler criterion ----

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

/// ±1 by d^((N p - 1)/2) in the residue field; 0 at even primes and at
/// primes dividing d.
pub fn quad_char(field: CatalogField, d: &QuadInt, p: &PrimeIdeal) -> i32 {
    if p.norm % 2 == 0 {
        return 0;
    }
    match p.kind {
        SplitKind::Split | SplitKind::Ramified => {
            let q = p.norm;
            let (u, v) = (p.generator.a, p.generator.b);
            // g = -u/v in O/p ~ F_q (v invertible: otherwise p is rational)
            let vm = (v.rem_euclid(q as i128)) as u64;
            let um = (u.rem_euclid(q as i128)) as u64;
            let vinv = pow_mod(vm, q - 2, q);
            let t = ((q as u128 - (um as u128 * vinv as u128) % q as u128) % q as u128) as u64;
            let da = d.a.rem_euclid(q as i128) as u64;
            let db = d.b.rem_euclid(q as i128) as u64;
            let dv = ((da as u128 + db as u128 * t as u128) % q as u128) as u64;
            if dv == 0 {
                return 0;
            }
            let e = pow_mod(dv, (q - 1) / 2, q);
            if e == 1 {
                1
            } else {
                -1
            }
        }
        SplitKind::Inert => {
            let pp = p.rational_prime;
            let (m1, m0) = field.gen_minpoly_mod(); // x^2 + m1 x + m0
            let da = d.a.rem_euclid(pp as i128) as u64;
            let db = d.b.rem_euclid(pp as i128) as u64;
            if da == 0 && db == 0 {
                return 0;
            }
            // modpow in F_p[g]/(g^2 + m1 g + m0)
            let mul2 = |x: (u64, u64), y: (u64, u64)| -> (u64, u64) {
                let p128 = pp as u128;
                let bd = (x.1 as u128 * y.1 as u128) % p128;
                let mut a =
                    (x.0 as u128 * y.0 as u128 + bd * ((pp - m0 % pp) % pp) as u128) % p128;
                let mut b = (x.0 as u128 * y.1 as u128 + x.1 as u128 * y.0 as u128
                    + bd * ((pp - m1 % pp) % pp) as u128)
                    % p128;
                a %= p128;
                b %= p128;
                (a as u64, b as u64)
            };
            let mut e = (pp as u128 * pp as u128 - 1) / 2;
            let mut base = (da, db);
            let mut acc = (1u64, 0u64);
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul2(acc, base);
                }
                base = mul2(base, base);
                e >>= 1;
            }
            debug_assert_eq!(acc.1, 0);
            if acc.0 == 1 {
                1
            } else {
                -1
            }
        }
    }
}

/// Strict variant demanded by the ±1 branch: errors at even primes.
pub fn quad_char_strict(
    field: CatalogField,
    d: &QuadInt,
    p: &PrimeIdeal,
) -> Result<i32, QiError> {
    if p.norm % 2 == 0 {
        return Err(QiError::EvenPrimeUnsupported);
    }
    Ok(quad_char(field, d, p))
}

// ---- coefficient streams ----

/// Exact Dirichlet coefficients a_n (elements of the catalog field) for
/// n up to the norm bound; a_1 = 1 and the stream is multiplicative by
/// construction.
#[derive(Clone, Debug)]
pub struct CoefficientStream {
    pub field: CatalogField,
    /// values[n] = a_n; index 0 unused.
    pub values: Vec<QuadInt>,
    pub x: u64,
    /// coefficient growth exponent: |a_n| <= d(n) n^{w/2}.
    pub weight: i64,
}

impl CoefficientStream {
    pub fn coeff(&self, n: u64) -> QuadInt {
        self.values[n as usize]
    }
}

/// Expands local Euler factors over all primes of norm <= x.
pub fn coefficients(spec: &HeckeCharacterSpec, x: u64) -> Result<CoefficientStream, QiError> {
    let field = spec.field;
    let mut values = vec![QuadInt::zero(); (x + 1) as usize];
    if x >= 1 {
        values[1] = QuadInt::one();
    }
    for p in primes_up_to(field, x) {
        let c = spec.value_at(&p)?;
        if c.is_zero() {
            continue;
        }
        let q = p.norm;
        // in-place descending Dirichlet multiplication by sum_j c^j at q^j
        let mut n = x - x % q;
        while n >= q {
            let mut acc = values[n as usize];
            let mut m = n;
            let mut cj = QuadInt::one();
            while m % q == 0 {
                m /= q;
                cj = field
                    .checked_mul(&cj, &c)
                    .ok_or(QiError::Overflow(n))?;
                let t = field
                    .checked_mul(&cj, &values[m as usize])
                    .ok_or(QiError::Overflow(n))?;
                acc = acc.checked_add(&t).ok_or(QiError::Overflow(n))?;
            }
            values[n as usize] = acc;
            if n < q {
                break;
            }
            n -= q;
        }
    }
    Ok(CoefficientStream {
        field,
        values,
        x,
        weight: spec.coeff_weight(),
    })
}

/// Dirichlet convolution of the psi- and (psi w)-streams: the stream of
/// the base change of psi to F1(sqrt(d)).
pub fn base_change_coeffs(
    psi: &HeckeCharacterSpec,
    d: QuadInt,
    x: u64,
) -> Result<CoefficientStream, QiError> {
    let a = coefficients(&psi.without_quad_twist(), x)?;
    let b = coefficients(&psi.with_quad_twist(d), x)?;
    convolve(&a, &b)
}

/// Truncated Dirichlet convolution of two streams.
pub fn convolve(
    a: &CoefficientStream,
    b: &CoefficientStream,
) -> Result<CoefficientStream, QiError> {
    assert_eq!(a.field, b.field);
    assert_eq!(a.x, b.x);
    let x = a.x;
    let field = a.field;
    let mut values = vec![QuadInt::zero(); (x + 1) as usize];
    for i in 1..=x {
        let ai = a.values[i as usize];
        if ai.is_zero() {
            continue;
        }
        for j in 1..=(x / i) {
            let bj = b.values[j as usize];
            if bj.is_zero() {
                continue;
            }
            let t = field.checked_mul(&ai, &bj).ok_or(QiError::Overflow(i * j))?;
            let idx = (i * j) as usize;
            values[idx] = values[idx].checked_add(&t).ok_or(QiError::Overflow(i * j))?;
        }
    }
    Ok(CoefficientStream {
        field,
        values,
        x,
        weight: a.weight.max(b.weight),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_list_q_i_up_to_ten() {
        let ps = primes_up_to(CatalogField::GaussianI, 10);
        let summary: Vec<(u64, SplitKind)> = ps.iter().map(|p| (p.norm, p.kind)).collect();
        assert_eq!(
            summary,
            vec![
                (2, SplitKind::Ramified),
                (5, SplitKind::Split),
                (5, SplitKind::Split),
                (9, SplitKind::Inert)
            ]
        );
        assert_eq!(ps[0].generator, QuadInt::new(1, 1));
        assert_eq!(ps[1].generator, QuadInt::new(2, -1));
        assert_eq!(ps[2].generator, QuadInt::new(2, 1));
        assert_eq!(ps[3].generator, QuadInt::new(3, 0));
    }

    #[test]
    fn inert_primes_have_no_two_square_decomposition() {
        // brute force: x^2 + y^2 = p has no solution for p = 3, 7, 11
        for p in [3i128, 7, 11] {
            let mut found = false;
            for x in 0..=p {
                for y in 0..=p {
                    if x * x + y * y == p {
                        found = true;
                    }
                }
            }
            assert!(!found, "p = {p}");
        }
    }

    #[test]
    fn empty_below_two() {
        assert!(primes_up_to(CatalogField::GaussianI, 1).is_empty());
    }

    #[test]
    fn unit_compatibility() {
        // k = 8, trivial twist over Q(i): fine
        assert!(HeckeCharacterSpec::new(CatalogField::GaussianI, 8, None, None, 0).is_ok());
        // k = 6: i^6 = -1, rejected
        assert!(matches!(
            HeckeCharacterSpec::new(CatalogField::GaussianI, 6, None, None, 0),
            Err(QiError::UnitIncompatible(_))
        ));
        // Q(omega): k must be divisible by 6
        assert!(HeckeCharacterSpec::new(CatalogField::EisensteinOmega, 12, None, None, 0).is_ok());
        assert!(
            HeckeCharacterSpec::new(CatalogField::EisensteinOmega, 4, None, None, 0).is_err()
        );
    }

    #[test]
    fn char_values_match_exact_powers() {
        let spec = HeckeCharacterSpec::new(CatalogField::GaussianI, 8, None, None, 0).unwrap();
        let ps = primes_up_to(CatalogField::GaussianI, 10);
        // (1+i)^8 = 16
        assert_eq!(spec.value_at(&ps[0]).unwrap(), QuadInt::new(16, 0));
        // (2+i)^8 = -527 - 336 i
        let v = spec.value_at(&ps[2]).unwrap();
        assert_eq!(v, QuadInt::new(-527, -336));
    }

    #[test]
    fn char_value_generator_independent() {
        let spec = HeckeCharacterSpec::new(CatalogField::GaussianI, 8, None, None, 0).unwrap();
        let ps = primes_up_to(CatalogField::GaussianI, 30);
        for p in &ps {
            let v = spec.value_at(p).unwrap();
            for u in CatalogField::GaussianI.units() {
                let mut q = p.clone();
                q.generator = CatalogField::GaussianI.mul(&p.generator, &u);
                assert_eq!(spec.value_at(&q).unwrap(), v, "unit {u:?}");
            }
        }
    }

    #[test]
    fn quad_char_examples() {
        let f = CatalogField::GaussianI;
        let d = QuadInt::new(4, 1);
        let ps = primes_up_to(f, 10);
        // (3): inert, (4+i)^4 = -1 mod 3
        let p3 = ps.iter().find(|p| p.norm == 9).unwrap();
        assert_eq!(quad_char(f, &d, p3), -1);
        // (2+i): (4+i)^2 = -1 in F_5
        let p5 = ps
            .iter()
            .find(|p| p.generator == QuadInt::new(2, 1))
            .unwrap();
        assert_eq!(quad_char(f, &d, p5), -1);
        // conjugate prime gets +1: the stream is genuinely asymmetric
        let p5c = ps
            .iter()
            .find(|p| p.generator == QuadInt::new(2, -1))
            .unwrap();
        assert_eq!(quad_char(f, &d, p5c), 1);
        // even prime: 0 by convention, strict branch errors
        let p2 = &ps[0];
        assert_eq!(quad_char(f, &d, p2), 0);
        assert!(matches!(
            quad_char_strict(f, &d, p2),
            Err(QiError::EvenPrimeUnsupported)
        ));
        // squares are +1 at odd unramified primes
        let d_sq = QuadInt::new(-3, 4); // (1+2i)^2
        assert_eq!(quad_char(f, &d_sq, p3), 1);
    }

    #[test]
    fn quad_char_against_brute_force_squares() {
        // oracle: enumerate squares in O/p for small split/inert primes
        let f = CatalogField::GaussianI;
        let d = QuadInt::new(4, 1);
        for p in primes_up_to(f, 60) {
            if p.norm % 2 == 0 {
                continue;
            }
            let q = p.norm as i128;
            // squares of all residues a + b i with 0 <= a, b < p
            let pp = p.rational_prime as i128;
            let mut squares = std::collections::HashSet::new();
            let reduce = |z: &QuadInt| {
                let mut r = FiniteTwist::reduce(f, &p.generator, z);
                r.a = r.a.rem_euclid(q);
                r.b = r.b.rem_euclid(q);
                FiniteTwist::reduce(f, &p.generator, &r)
            };
            for a in 0..pp {
                for b in 0..pp {
                    let z = QuadInt::new(a, b);
                    squares.insert(reduce(&f.mul(&z, &z)));
                }
            }
            let dr = reduce(&d);
            let expected = if dr.is_zero() || f.norm(&dr) % q == 0 && dr.is_zero() {
                0
            } else if squares.contains(&dr) {
                1
            } else {
                -1
            };
            if expected != 0 {
                assert_eq!(quad_char(f, &d, &p), expected, "prime {:?}", p.generator);
            }
        }
    }

    #[test]
    fn coefficients_k8_and_trivial() {
        let spec = HeckeCharacterSpec::new(CatalogField::GaussianI, 8, None, None, 0).unwrap();
        let st = coefficients(&spec, 30).unwrap();
        assert_eq!(st.coeff(1), QuadInt::one());
        assert_eq!(st.coeff(2), QuadInt::new(16, 0));
        assert_eq!(st.coeff(3), QuadInt::zero());
        // a_5 = (2+i)^8 + (2-i)^8 = -1054
        assert_eq!(st.coeff(5), QuadInt::new(-1054, 0));
        // a_25 = sum over norm-25 ideals
        // (2+i)^16 + (2-i)^16 + 25^4... via multiplicativity it is built in;
        // spot check against the direct lattice oracle below instead.

        let triv = HeckeCharacterSpec::new(CatalogField::GaussianI, 0, None, None, 0).unwrap();
        let ts = coefficients(&triv, 30).unwrap();
        // a_n = number of ideals of norm n; a_5 = 2
        assert_eq!(ts.coeff(5), QuadInt::new(2, 0));
        assert_eq!(ts.coeff(1), QuadInt::one());
        assert_eq!(ts.coeff(25), QuadInt::new(3, 0));
    }

    /// Oracle: a_n by direct summation over one Gaussian generator per
    /// associate class (lattice scan).
    fn gaussian_ideal_reps(x: u64) -> Vec<(u64, QuadInt)> {
        let f = CatalogField::GaussianI;
        let mut out = Vec::new();
        let bound = (x as f64).sqrt() as i128 + 1;
        for a in -bound..=bound {
            for b in -bound..=bound {
                let z = QuadInt::new(a, b);
                if z.is_zero() {
                    continue;
                }
                let n = f.norm(&z) as u64;
                if n > x {
                    continue;
                }
                // canonical associate: first quadrant, a > 0, b >= 0
                let mut w = z;
                for _ in 0..3 {
                    if w.a > 0 && w.b >= 0 {
                        break;
                    }
                    w = f.mul(&w, &QuadInt::new(0, 1));
                }
                if !(w.a > 0 && w.b >= 0) {
                    continue; // count each class once via its canonical rep
                }
                if w == z {
                    out.push((n, z));
                }
            }
        }
        out
    }

    #[test]
    fn coefficients_match_lattice_oracle() {
        let spec = HeckeCharacterSpec::new(CatalogField::GaussianI, 8, None, None, 0).unwrap();
        let x = 50u64;
        let st = coefficients(&spec, x).unwrap();
        let f = CatalogField::GaussianI;
        let mut direct = vec![QuadInt::zero(); (x + 1) as usize];
        for (n, z) in gaussian_ideal_reps(x) {
            let v = f.pow(&z, 8).unwrap();
            direct[n as usize] = direct[n as usize].checked_add(&v).unwrap();
        }
        for n in 1..=x {
            assert_eq!(st.coeff(n), direct[n as usize], "n = {n}");
        }
    }

    #[test]
    fn multiplicativity_on_coprime_indices() {
        let spec = HeckeCharacterSpec::new(CatalogField::GaussianI, 4, None, None, 0).unwrap();
        let st = coefficients(&spec, 100).unwrap();
        let f = CatalogField::GaussianI;
        for m in 2..=10u64 {
            for n in 2..=10u64 {
                if gcd_i128(m as i128, n as i128) == 1 && m * n <= 100 {
                    assert_eq!(
                        st.coeff(m * n),
                        f.mul(&st.coeff(m), &st.coeff(n)),
                        "({m},{n})"
                    );
                }
            }
        }
    }

    #[test]
    fn base_change_counts_ideals_of_quartic() {
        // trivial psi: the convolved stream counts ideals of F = F1(sqrt d)
        // spot-checked by splitting analysis at p <= 50:
        // p splits in F1 and omega = +1 -> 2+2 primes of norm p over p... etc.
        let psi = HeckeCharacterSpec::new(CatalogField::GaussianI, 0, None, None, 0).unwrap();
        let d = QuadInt::new(4, 1);
        let x = 50u64;
        let st = base_change_coeffs(&psi, d, x).unwrap();
        let f = CatalogField::GaussianI;
        for p in primes_up_to(f, x) {
            if p.norm % 2 == 0 || p.norm > x {
                continue;
            }
            let w = quad_char(f, &QuadInt::new(4, 1), &p);
            // number of primes of F over this prime of F1 with norm = p.norm:
            // split in F (w=1): 2; inert (w=-1): 0 of that norm; ramified: 1
            let _ = w;
        }
        // a_p for split p: (1 + w(p1)) + (1 + w(p2)) over the two primes
        // above p; check p = 5: w(2+i) = -1, w(2-i) = +1 -> a_5 = 2
        assert_eq!(st.coeff(5), QuadInt::new(2, 0));
        // p = 9 (inert prime of norm 9): a_9 = psi((3))^2-ish by hand:
        // contributions: ideal (3) with w = quad_char(d,(3)) = -1 ->
        // a_9 = 1 + w((3)) + [norm-9 products of norm-3 ideals: none]
        //     = 1 + (-1) + ... plus a_9 from psi-side alone = 1... convolution:
        // c_9 = a_9(psi)*b_1 + a_3 b_3 + a_1 b_9(psi w) = 1 + 0 + w((3)) = 0
        assert_eq!(st.coeff(9), QuadInt::zero());
        // d a square: stream = square of psi-stream under convolution
        let d_sq = QuadInt::new(-3, 4);
        let st2 = base_change_coeffs(&psi, d_sq, x).unwrap();
        let plain = coefficients(&psi, x).unwrap();
        let conv = convolve(&plain, &plain).unwrap();
        for n in 1..=x {
            if n % 2 == 0 || n % 5 == 0 {
                continue; // primes dividing d_sq get the 0-convention
            }
            assert_eq!(st2.coeff(n), conv.coeff(n), "n = {n}");
        }
    }

    #[test]
    fn conjugation_stable_streams_are_real() {
        let spec = HeckeCharacterSpec::new(CatalogField::GaussianI, 8, None, None, 0).unwrap();
        let st = coefficients(&spec, 200).unwrap();
        for n in 1..=200u64 {
            assert_eq!(st.coeff(n).b, 0, "a_{n} should be real");
        }
    }

    #[test]
    fn coefficient_growth_bound() {
        // |a_n| <= d(n) n^{w/2} with w = k
        let spec = HeckeCharacterSpec::new(CatalogField::GaussianI, 4, None, None, 0).unwrap();
        let x = 300u64;
        let st = coefficients(&spec, x).unwrap();
        let f = CatalogField::GaussianI;
        for n in 1..=x {
            let divisors = (1..=n).filter(|d| n % d == 0).count() as f64;
            let bound = divisors * (n as f64).powf(2.0);
            let norm = f.norm(&st.coeff(n)) as f64;
            assert!(
                norm.sqrt() <= bound * (1.0 + 1e-9),
                "n = {n}: |a_n| = {} > {}",
                norm.sqrt(),
                bound
            );
        }
    }

    #[test]
    fn eisenstein_and_sqrt2_catalogs() {
        let po = primes_up_to(CatalogField::EisensteinOmega, 20);
        // 3 ramified; 7, 13 split; 4, 25... p=2 inert norm 4
        let norms: Vec<u64> = po.iter().map(|p| p.norm).collect();
        assert_eq!(norms, vec![3, 4, 7, 7, 13, 13, 19, 19]);
        for p in &po {
            assert_eq!(
                CatalogField::EisensteinOmega.norm(&p.generator),
                p.norm as i128
            );
        }
        let ps2 = primes_up_to(CatalogField::SqrtMinusTwo, 20);
        // 2 ramified; 3, 11, 17, 19 split; 25 (p=5 inert) > 20 excluded
        let norms2: Vec<u64> = ps2.iter().map(|p| p.norm).collect();
        assert_eq!(norms2, vec![2, 3, 3, 11, 11, 17, 17, 19, 19]);
    }
}
