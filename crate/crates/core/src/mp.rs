//! Multiprecision real and complex scalars used by the numerical layers.
//!
//! Reals are MPFR floats (`rug::Float`); complex numbers are a plain
//! re/im pair on top of them. All operations round at the larger of the
//! two operand precisions, and every code path that feeds an acceptance
//! number fixes the summation order, so results are reproducible
//! bit-for-bit.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

/// Default working precision in bits.
pub const DEFAULT_BITS: u32 = 192;

pub fn fzero(prec: u32) -> Float {
    Float::with_val(prec, 0)
}

pub fn ffrom_i64(prec: u32, v: i64) -> Float {
    Float::with_val(prec, v)
}

pub fn ffrom_f64(prec: u32, v: f64) -> Float {
    Float::with_val(prec, v)
}

pub fn ffrom_q(prec: u32, q: &Rational) -> Float {
    Float::with_val(prec, q)
}

pub fn ffrom_z(prec: u32, z: &Integer) -> Float {
    Float::with_val(prec, z)
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// n^s for positive integer n and real s, at the precision of `s`.
pub fn pow_real(n: u64, s: &Float) -> Float {
    let prec = s.prec();
    Float::with_val(prec, n).pow(s)
}

/// A complex number as an (re, im) pair of MPFR floats.
#[derive(Clone, Debug)]
pub struct Cx {
    pub re: Float,
    pub im: Float,
}

impl Cx {
    pub fn new(re: Float, im: Float) -> Self {
        Cx { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Cx::new(fzero(prec), fzero(prec))
    }

    pub fn one(prec: u32) -> Self {
        Cx::new(ffrom_i64(prec, 1), fzero(prec))
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Cx::new(ffrom_f64(prec, re), ffrom_f64(prec, im))
    }

    pub fn from_real(re: Float) -> Self {
        let prec = re.prec();
        Cx::new(re, fzero(prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn conj(&self) -> Self {
        Cx::new(self.re.clone(), -self.im.clone())
    }

    pub fn neg(&self) -> Self {
        Cx::new(-self.re.clone(), -self.im.clone())
    }

    pub fn add(&self, o: &Cx) -> Self {
        let p = self.prec().max(o.prec());
        Cx::new(
            Float::with_val(p, &self.re + &o.re),
            Float::with_val(p, &self.im + &o.im),
        )
    }

    pub fn sub(&self, o: &Cx) -> Self {
        let p = self.prec().max(o.prec());
        Cx::new(
            Float::with_val(p, &self.re - &o.re),
            Float::with_val(p, &self.im - &o.im),
        )
    }

    pub fn mul(&self, o: &Cx) -> Self {
        let p = self.prec().max(o.prec());
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        Cx::new(re, im)
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec().max(s.prec());
        Cx::new(
            Float::with_val(p, &self.re * s),
            Float::with_val(p, &self.im * s),
        )
    }

    pub fn norm2(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, &self.re * &self.re) + Float::with_val(p, &self.im * &self.im)
    }

    pub fn abs(&self) -> Float {
        self.norm2().sqrt()
    }

    pub fn recip(&self) -> Self {
        let n = self.norm2();
        let p = self.prec();
        Cx::new(
            Float::with_val(p, &self.re / &n),
            -Float::with_val(p, &self.im / &n),
        )
    }

    pub fn div(&self, o: &Cx) -> Self {
        self.mul(&o.recip())
    }

    /// Distance |self - o|.
    pub fn dist(&self, o: &Cx) -> Float {
        self.sub(o).abs()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Horner evaluation of a polynomial with complex coefficients
/// (constant term first).
pub fn horner(coeffs: &[Cx], z: &Cx) -> Cx {
    let prec = z.prec();
    let mut acc = Cx::zero(prec);
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(c);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_field_ops() {
        let p = 128;
        let a = Cx::from_f64(p, 3.0, 4.0);
        let b = Cx::from_f64(p, 1.0, -2.0);
        let ab = a.mul(&b);
        assert_eq!(ab.re.to_f64(), 11.0);
        assert_eq!(ab.im.to_f64(), -2.0);
        let q = ab.div(&b);
        assert!((q.re.to_f64() - 3.0).abs() < 1e-30);
        assert!((q.im.to_f64() - 4.0).abs() < 1e-30);
        assert_eq!(a.abs().to_f64(), 5.0);
    }

    #[test]
    fn horner_eval() {
        let p = 96;
        // x^2 + 1 at x = i  ->  0
        let coeffs = vec![Cx::one(p), Cx::zero(p), Cx::one(p)];
        let v = horner(&coeffs, &Cx::from_f64(p, 0.0, 1.0));
        assert!(v.abs().to_f64() < 1e-25);
    }
}
