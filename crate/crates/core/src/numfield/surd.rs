//! Exact values of the form i^e · q · sqrt(r) with q a positive rational
//! and r a squarefree positive integer. These form a multiplicative
//! group; they carry the discriminant surds of the catalog fields.

use rug::{Integer, Rational};
use std::fmt;

/// i^e * q * sqrt(r), e mod 4, q > 0 rational, r squarefree positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdValue {
    pub i_exp: u8,
    pub rational: Rational,
    pub radicand: Integer,
}

/// Splits n > 0 as s^2 * r with r squarefree (trial division; the
/// catalog discriminants are tiny).
pub fn squarefree_decompose(n: &Integer) -> (Integer, Integer) {
    assert!(*n > 0, "squarefree_decompose needs a positive integer");
    let mut rem = n.clone();
    let mut square = Integer::from(1);
    let mut radical = Integer::from(1);
    let mut p = Integer::from(2);
    while Integer::from(&p * &p) <= rem {
        let mut count = 0u32;
        while rem.is_divisible(&p) {
            rem /= &p;
            count += 1;
        }
        if count > 0 {
            for _ in 0..(count / 2) {
                square *= &p;
            }
            if count % 2 == 1 {
                radical *= &p;
            }
        }
        p.next_prime_mut();
    }
    radical *= &rem;
    (square, radical)
}

impl SurdValue {
    pub fn one() -> Self {
        SurdValue {
            i_exp: 0,
            rational: Rational::from(1),
            radicand: Integer::from(1),
        }
    }

    /// Canonical form of i^e * q * sqrt(r) for arbitrary nonzero rational
    /// q and positive integer r.
    pub fn new(i_exp: i64, rational: Rational, radicand: Integer) -> Self {
        assert!(rational != 0, "surd values are nonzero");
        assert!(radicand > 0, "radicand must be positive");
        let mut e = i_exp.rem_euclid(4) as u8;
        let mut q = rational;
        if q < 0 {
            q = -q;
            e = (e + 2) % 4;
        }
        let (s, r) = squarefree_decompose(&radicand);
        q *= Rational::from(s);
        SurdValue {
            i_exp: e,
            rational: q,
            radicand: r,
        }
    }

    /// sqrt of a nonzero rational: sqrt(q) = i^(q<0) * sqrt(|num*den|)/den.
    pub fn sqrt_of_rational(q: &Rational) -> Self {
        assert!(*q != 0);
        let e = if *q < 0 { 1 } else { 0 };
        let numer = Integer::from(q.numer().clone().abs());
        let denom = q.denom().clone();
        let inner = Integer::from(&numer * &denom);
        SurdValue::new(e, Rational::from((Integer::from(1), denom)), inner)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let e = self.i_exp as i64 + o.i_exp as i64;
        let q = Rational::from(&self.rational * &o.rational);
        let r = Integer::from(&self.radicand * &o.radicand);
        SurdValue::new(e, q, r)
    }

    pub fn inv(&self) -> Self {
        // (i^e q sqrt(r))^-1 = i^(-e) * 1/(q r) * sqrt(r)
        let q = Rational::from(&self.rational * &self.radicand);
        SurdValue::new(-(self.i_exp as i64), q.recip(), self.radicand.clone())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = SurdValue::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    /// True when the value lies in Q^x, i.e. equals ±(rational).
    pub fn is_rational(&self) -> bool {
        self.radicand == 1 && self.i_exp % 2 == 0
    }

    /// Equality as elements of C^x / Q^x.
    pub fn eq_mod_rationals(&self, o: &Self) -> bool {
        self.div(o).is_rational()
    }

    /// Numerical value (principal branch of i).
    pub fn to_f64(&self) -> (f64, f64) {
        let mag = self.rational.to_f64() * self.radicand.to_f64().sqrt();
        match self.i_exp {
            0 => (mag, 0.0),
            1 => (0.0, mag),
            2 => (-mag, 0.0),
            _ => (0.0, -mag),
        }
    }
}

impl fmt::Display for SurdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.i_exp {
            0 => "",
            1 => "i*",
            2 => "-",
            _ => "-i*",
        };
        if self.radicand == 1 {
            write!(f, "{}{}", sign, self.rational)
        } else {
            write!(f, "{}{}*sqrt({})", sign, self.rational, self.radicand)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surd(e: i64, num: i64, den: u32, rad: i64) -> SurdValue {
        SurdValue::new(e, Rational::from((num, den)), Integer::from(rad))
    }

    #[test]
    fn squares_have_radicand_one() {
        let v = surd(1, 3, 2, 10);
        let sq = v.mul(&v);
        assert_eq!(sq.radicand, 1);
        assert_eq!(sq.i_exp, 2);
        assert_eq!(sq.rational, Rational::from((90, 4)));
    }

    #[test]
    fn radicands_combine_by_squarefree_reduction() {
        let a = surd(0, 1, 1, 6);
        let b = surd(0, 1, 1, 10);
        let ab = a.mul(&b); // sqrt(60) = 2 sqrt(15)
        assert_eq!(ab.radicand, 15);
        assert_eq!(ab.rational, Rational::from(2));
    }

    #[test]
    fn inverse_is_group_inverse() {
        let v = surd(3, 7, 5, 21);
        let p = v.mul(&v.inv());
        assert_eq!(p, SurdValue::one());
    }

    #[test]
    fn sqrt_of_negative_rational() {
        // sqrt(-4) = 2i
        let v = SurdValue::sqrt_of_rational(&Rational::from(-4));
        assert_eq!(v, surd(1, 2, 1, 1));
        // sqrt(-1) = i
        let w = SurdValue::sqrt_of_rational(&Rational::from(-1));
        assert_eq!(w, surd(1, 1, 1, 1));
    }

    #[test]
    fn mod_rational_comparison() {
        // sqrt(125) = 5 sqrt(5) equals -sqrt(5) mod Q^x
        let a = SurdValue::sqrt_of_rational(&Rational::from(125));
        let b = surd(2, 1, 1, 5);
        assert!(a.eq_mod_rationals(&b));
        assert!(!a.eq_mod_rationals(&surd(1, 1, 1, 5)));
    }
}
