//! Dense univariate polynomials over an exact coefficient ring.
//!
//! The coefficient trait deliberately mints zeros and ones from an
//! existing value (`zero_like`) rather than from thin air, so that
//! context-carrying coefficients (number-field elements) fit without a
//! global registry.

use rug::Rational;

pub trait Coeff: Clone + PartialEq + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse; `None` for zero or a non-unit.
    fn inv_ref(&self) -> Option<Self>;
}

impl Coeff for Rational {
    fn zero_like(&self) -> Self {
        Rational::new()
    }
    fn one_like(&self) -> Self {
        Rational::from(1)
    }
    fn add_ref(&self, o: &Self) -> Self {
        Rational::from(self + o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        Rational::from(self - o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        Rational::from(self * o)
    }
    fn neg_ref(&self) -> Self {
        Rational::from(-self.clone())
    }
    fn is_zero(&self) -> bool {
        *self.numer() == 0
    }
    fn inv_ref(&self) -> Option<Self> {
        if Coeff::is_zero(self) {
            None
        } else {
            Some(Rational::from(self.clone().recip()))
        }
    }
}

/// Polynomial with coefficients in ascending degree order; the zero
/// polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T: Coeff> {
    c: Vec<T>,
}

impl<T: Coeff> Poly<T> {
    pub fn new(mut c: Vec<T>) -> Self {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn constant(v: T) -> Self {
        Poly::new(vec![v])
    }

    /// The monomial x, with coefficients minted from `sample`.
    pub fn x(sample: &T) -> Self {
        Poly::new(vec![sample.zero_like(), sample.one_like()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports degree 0 together with `is_zero`.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Option<&T> {
        self.c.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&T> {
        self.c.get(i)
    }

    /// Coefficient at index i, minting zero from `sample` when absent.
    pub fn coeff_or_zero(&self, i: usize, sample: &T) -> T {
        self.c.get(i).cloned().unwrap_or_else(|| sample.zero_like())
    }

    pub fn is_monic(&self) -> bool {
        self.lead().map_or(false, |l| l == &l.one_like())
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let n = self.c.len().max(o.c.len());
        let sample = &self.c[0];
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeff_or_zero(i, sample);
            let b = o.coeff_or_zero(i, sample);
            out.push(a.add_ref(&b));
        }
        Poly::new(out)
    }

    pub fn neg(&self) -> Self {
        Poly {
            c: self.c.iter().map(|x| x.neg_ref()).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let sample = &self.c[0];
        let mut out = vec![sample.zero_like(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Poly::new(out)
    }

    pub fn mul_scalar(&self, s: &T) -> Self {
        Poly::new(self.c.iter().map(|x| x.mul_ref(s)).collect())
    }

    /// Quotient and remainder; requires an invertible leading coefficient.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() || self.degree() < d.degree() {
            return (Poly::zero(), self.clone());
        }
        let sample = &d.c[0];
        let lead_inv = d
            .lead()
            .unwrap()
            .inv_ref()
            .expect("leading coefficient must be invertible");
        let mut rem = self.c.clone();
        let dd = d.degree();
        let mut quot = vec![sample.zero_like(); self.degree() - dd + 1];
        for k in (dd..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = rem[k].mul_ref(&lead_inv);
            for (i, dc) in d.c.iter().enumerate() {
                let idx = k - dd + i;
                rem[idx] = rem[idx].sub_ref(&q.mul_ref(dc));
            }
            quot[k - dd] = q;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => Poly::zero(),
            Some(l) => self.mul_scalar(&l.inv_ref().expect("non-invertible lead")),
        }
    }

    /// Monic gcd over a field.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Extended gcd: returns (g, s, t) with g = s*self + t*o, g monic.
    pub fn extended_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let sample = match self.c.first().or_else(|| o.c.first()) {
            Some(s) => s.clone(),
            None => return (Poly::zero(), Poly::zero(), Poly::zero()),
        };
        let mut r0 = self.clone();
        let mut r1 = o.clone();
        let mut s0 = Poly::constant(sample.one_like());
        let mut s1 = Poly::zero();
        let mut t0 = Poly::zero();
        let mut t1 = Poly::constant(sample.one_like());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let ns = s0.sub(&q.mul(&s1));
            let nt = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = ns;
            t0 = t1;
            t1 = nt;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let li = r0.lead().unwrap().inv_ref().expect("gcd lead not invertible");
        (
            r0.mul_scalar(&li),
            s0.mul_scalar(&li),
            t0.mul_scalar(&li),
        )
    }

    pub fn derivative(&self) -> Self {
        if self.c.len() <= 1 {
            return Poly::zero();
        }
        let sample = &self.c[0];
        let mut out = Vec::with_capacity(self.c.len() - 1);
        for (i, a) in self.c.iter().enumerate().skip(1) {
            let mut k = sample.zero_like();
            let one = sample.one_like();
            for _ in 0..i {
                k = k.add_ref(&one);
            }
            out.push(a.mul_ref(&k));
        }
        Poly::new(out)
    }

    /// Squarefree part self / gcd(self, self').
    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.monic();
        }
        self.divrem(&g).0.monic()
    }

    pub fn eval(&self, x: &T) -> T {
        let mut acc = x.zero_like();
        for c in self.c.iter().rev() {
            acc = acc.mul_ref(x).add_ref(c);
        }
        acc
    }

    /// Evaluate at a polynomial argument, reducing modulo `m` throughout.
    pub fn compose_mod(&self, arg: &Self, m: &Self) -> Self {
        let mut acc = Poly::zero();
        for c in self.c.iter().rev() {
            acc = acc.mul(arg).add(&Poly::constant(c.clone())).rem(m);
        }
        acc
    }

    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let sample = match m.c.first() {
            Some(s) => s,
            None => panic!("zero modulus"),
        };
        let mut base = self.rem(m);
        let mut acc = Poly::constant(sample.one_like());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Substitute x -> a + b*x.
    pub fn compose_affine(&self, a: &T, b: &T) -> Self {
        let arg = Poly::new(vec![a.clone(), b.clone()]);
        let mut acc = Poly::zero();
        for c in self.c.iter().rev() {
            acc = acc.mul(&arg).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Resultant of two polynomials over a field.
    pub fn resultant(&self, o: &Self) -> T {
        let sample = match self.c.first().or_else(|| o.c.first()) {
            Some(s) => s.clone(),
            None => panic!("resultant of zero polynomials"),
        };
        let one = sample.one_like();
        fn go<T: Coeff>(a: &Poly<T>, b: &Poly<T>, one: &T) -> T {
            if b.is_zero() {
                return if a.degree() == 0 && !a.is_zero() {
                    one.clone()
                } else {
                    one.zero_like()
                };
            }
            if b.degree() == 0 {
                // res(a, c) = c^deg(a)
                let c = b.lead().unwrap();
                let mut acc = one.clone();
                for _ in 0..a.degree() {
                    acc = acc.mul_ref(c);
                }
                return acc;
            }
            if a.degree() < b.degree() {
                let s = if (a.degree() * b.degree()) % 2 == 1 {
                    one.neg_ref()
                } else {
                    one.clone()
                };
                return s.mul_ref(&go(b, a, one));
            }
            let r = a.rem(b);
            if r.is_zero() {
                return one.zero_like();
            }
            // res(a,b) = (-1)^(da*db) * lc(b)^(da-dr) * res(b,r)
            let mut acc = one.clone();
            let lb = b.lead().unwrap();
            for _ in 0..(a.degree() - r.degree()) {
                acc = acc.mul_ref(lb);
            }
            if (a.degree() * b.degree()) % 2 == 1 {
                acc = acc.neg_ref();
            }
            acc.mul_ref(&go(b, &r, one))
        }
        if self.is_zero() || o.is_zero() {
            return sample.zero_like();
        }
        go(self, o, &one)
    }

    /// Lagrange interpolation through (x_i, y_i) over a field.
    pub fn interpolate(points: &[(T, T)]) -> Self {
        assert!(!points.is_empty());
        let sample = &points[0].0;
        let mut acc = Poly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut num = Poly::constant(sample.one_like());
            let mut den = sample.one_like();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                num = num.mul(&Poly::new(vec![xj.neg_ref(), sample.one_like()]));
                den = den.mul_ref(&xi.sub_ref(xj));
            }
            let scale = yi.mul_ref(&den.inv_ref().expect("duplicate interpolation node"));
            acc = acc.add(&num.mul_scalar(&scale));
        }
        acc
    }
}

/// Convenience: rational polynomial from integer coefficients
/// (ascending).
pub fn qpoly(coeffs: &[i64]) -> Poly<Rational> {
    Poly::new(coeffs.iter().map(|&v| Rational::from(v)).collect())
}
