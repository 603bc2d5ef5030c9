//! Exact arithmetic in towers of number fields, numerical embeddings,
//! Galois closures as permutation groups, subfield detection, and the
//! basis-dependent relative discriminants used by the catalog checks.

pub mod closure;
pub mod embeddings;
pub mod extend;
pub mod parse;
pub mod roots;
pub mod surd;

use crate::poly::Poly;
use rug::{Integer, Rational};
use thiserror::Error;

pub use closure::{GaloisContext, SqrtInClosure, Subfields};
pub use embeddings::{EmbeddingSet, Place, PlaceKind};
pub use surd::SurdValue;

/// Hard cap on the absolute degree of a user-built tower.
pub const MAX_TOWER_DEGREE: usize = 24;
/// Hard cap on the degree of a Galois closure.
pub const MAX_CLOSURE_DEGREE: usize = 48;

#[derive(Debug, Error)]
pub enum NumFieldError {
    #[error("layer `{0}` is reducible over the field below")]
    ReducibleLayer(String),
    #[error("absolute degree {0} exceeds the limit of {MAX_TOWER_DEGREE}")]
    DegreeOverLimit(usize),
    #[error("embedding separation not achieved after {0} precision doublings")]
    PrecisionExhausted(u32),
    #[error("galois closure degree exceeds the limit of {MAX_CLOSURE_DEGREE}")]
    ClosureTooLarge,
    #[error("the provided elements are not a basis")]
    NotABasis,
    #[error("datum is not totally negative")]
    NotTotallyNegative,
    #[error("sqrt({0}) does not lie in the closure")]
    SqrtNotInClosure(Integer),
    #[error("internal: {0}")]
    Internal(String),
}

/// Element of a tower, as exact rational coordinates over the product
/// basis (earlier generators vary fastest). Arithmetic lives on the
/// tower so that elements stay plain data.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldElement {
    pub coords: Vec<Rational>,
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c.numer() == 0)
    }
}

/// One layer of a tower: a monic polynomial whose coefficients live in
/// the prefix tower (ascending, last coefficient = 1).
#[derive(Clone, Debug)]
pub struct Layer {
    pub var: String,
    pub minpoly: Vec<FieldElement>,
}

impl Layer {
    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }
}

/// A number field presented as a tower of monogenic extensions,
/// together with exact primitive-element data derived at build time.
#[derive(Clone, Debug)]
pub struct NumberFieldTower {
    layers: Vec<Layer>,
    degree: usize,
    /// Minimal polynomial over Q of the primitive element theta.
    abs_minpoly: Poly<Rational>,
    /// Each generator written as a polynomial in theta.
    gens_in_theta: Vec<Poly<Rational>>,
    /// theta = sum_i weights[i] * gen_i.
    theta_weights: Vec<Rational>,
    /// Product-basis monomial -> polynomial in theta.
    monomial_to_theta: Vec<Poly<Rational>>,
    /// theta^j as tower coordinates, j < degree.
    theta_pow_coords: Vec<FieldElement>,
}

impl NumberFieldTower {
    /// The rational field as a trivial tower.
    pub fn rationals() -> Self {
        NumberFieldTower {
            layers: Vec::new(),
            degree: 1,
            abs_minpoly: Poly::new(vec![Rational::new(), Rational::from(1)]),
            gens_in_theta: Vec::new(),
            theta_weights: Vec::new(),
            monomial_to_theta: vec![Poly::constant(Rational::from(1))],
            theta_pow_coords: vec![FieldElement {
                coords: vec![Rational::from(1)],
            }],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn abs_minpoly(&self) -> &Poly<Rational> {
        &self.abs_minpoly
    }

    pub fn gens_in_theta(&self) -> &[Poly<Rational>] {
        &self.gens_in_theta
    }

    pub fn theta_weights(&self) -> &[Rational] {
        &self.theta_weights
    }

    /// Degree of the prefix tower made of the first `level` layers.
    pub fn degree_at(&self, level: usize) -> usize {
        self.layers[..level].iter().map(Layer::degree).product()
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    // ---- element constructors ----

    pub fn zero(&self) -> FieldElement {
        self.zero_at(self.layers.len())
    }

    pub fn zero_at(&self, level: usize) -> FieldElement {
        FieldElement {
            coords: vec![Rational::new(); self.degree_at(level)],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_rational(Rational::from(1))
    }

    pub fn from_rational(&self, q: Rational) -> FieldElement {
        self.from_rational_at(self.layers.len(), q)
    }

    pub fn from_rational_at(&self, level: usize, q: Rational) -> FieldElement {
        let mut coords = vec![Rational::new(); self.degree_at(level)];
        coords[0] = q;
        FieldElement { coords }
    }

    /// The i-th tower generator (0-based) as an element of the full tower.
    pub fn gen(&self, i: usize) -> FieldElement {
        let mut coords = vec![Rational::new(); self.degree];
        let idx = self.degree_at(i); // exponent vector e_i = 1, rest 0
        coords[idx] = Rational::from(1);
        FieldElement { coords }
    }

    // ---- arithmetic (level-recursive; `level` = number of layers in play) ----

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        assert_eq!(a.coords.len(), b.coords.len());
        FieldElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| Rational::from(x + y))
                .collect(),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        assert_eq!(a.coords.len(), b.coords.len());
        FieldElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(x, y)| Rational::from(x - y))
                .collect(),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement {
            coords: a.coords.iter().map(|x| Rational::from(-x.clone())).collect(),
        }
    }

    pub fn scale(&self, a: &FieldElement, s: &Rational) -> FieldElement {
        FieldElement {
            coords: a.coords.iter().map(|x| Rational::from(x * s)).collect(),
        }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let level = self.level_of(a);
        assert_eq!(a.coords.len(), b.coords.len());
        FieldElement {
            coords: self.mul_level(level, &a.coords, &b.coords),
        }
    }

    fn level_of(&self, a: &FieldElement) -> usize {
        for level in 0..=self.layers.len() {
            if self.degree_at(level) == a.coords.len() {
                // Ambiguity from degree-1 layers resolves to the smallest
                // level, which is arithmetic-equivalent.
                return level;
            }
        }
        panic!("element has no level in this tower");
    }

    fn mul_level(&self, level: usize, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        if level == 0 {
            return vec![Rational::from(&a[0] * &b[0])];
        }
        let m = self.degree_at(level - 1);
        let layer = &self.layers[level - 1];
        let d = layer.degree();
        // chunk convolution
        let mut chunks: Vec<Vec<Rational>> = vec![vec![Rational::new(); m]; 2 * d - 1];
        for i in 0..d {
            let ai = &a[i * m..(i + 1) * m];
            if ai.iter().all(|c| *c.numer() == 0) {
                continue;
            }
            for j in 0..d {
                let bj = &b[j * m..(j + 1) * m];
                if bj.iter().all(|c| *c.numer() == 0) {
                    continue;
                }
                let prod = self.mul_level(level - 1, ai, bj);
                for (t, v) in prod.into_iter().enumerate() {
                    chunks[i + j][t] += v;
                }
            }
        }
        // reduce modulo the (monic) layer polynomial
        for j in (d..2 * d - 1).rev() {
            if chunks[j].iter().all(|c| *c.numer() == 0) {
                continue;
            }
            let top = std::mem::replace(&mut chunks[j], vec![Rational::new(); m]);
            for i in 0..d {
                let pc = &layer.minpoly[i].coords;
                if pc.iter().all(|c| *c.numer() == 0) {
                    continue;
                }
                let sub = self.mul_level(level - 1, &top, pc);
                for (t, v) in sub.into_iter().enumerate() {
                    chunks[j - d + i][t] -= v;
                }
            }
        }
        let mut out = Vec::with_capacity(d * m);
        for chunk in chunks.into_iter().take(d) {
            out.extend(chunk);
        }
        out
    }

    pub fn pow(&self, a: &FieldElement, k: u32) -> FieldElement {
        let mut acc = self.from_rational_at(self.level_of(a), Rational::from(1));
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Multiplication matrix of `a` over Q at the element's level
    /// (columns = a * basis_j).
    pub fn mult_matrix(&self, a: &FieldElement) -> Vec<Vec<Rational>> {
        let level = self.level_of(a);
        let n = a.coords.len();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut unit = vec![Rational::new(); n];
            unit[j] = Rational::from(1);
            cols.push(self.mul_level(level, &a.coords, &unit));
        }
        cols
    }

    /// Absolute norm: determinant of the multiplication matrix.
    pub fn norm(&self, a: &FieldElement) -> Rational {
        let cols = self.mult_matrix(a);
        let n = cols.len();
        let mut m: Vec<Vec<Rational>> = (0..n)
            .map(|r| (0..n).map(|c| cols[c][r].clone()).collect())
            .collect();
        det_rational(&mut m)
    }

    /// Absolute trace.
    pub fn trace(&self, a: &FieldElement) -> Rational {
        let cols = self.mult_matrix(a);
        let mut t = Rational::new();
        for (j, col) in cols.iter().enumerate() {
            t += &col[j];
        }
        t
    }

    /// Multiplicative inverse via a linear solve.
    pub fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return None;
        }
        let cols = self.mult_matrix(a);
        let n = cols.len();
        // solve M x = e_0 where M[r][c] = cols[c][r]
        let mut aug: Vec<Vec<Rational>> = (0..n)
            .map(|r| {
                let mut row: Vec<Rational> = (0..n).map(|c| cols[c][r].clone()).collect();
                row.push(if r == 0 {
                    Rational::from(1)
                } else {
                    Rational::new()
                });
                row
            })
            .collect();
        solve_gauss(&mut aug).map(|coords| FieldElement { coords })
    }

    // ---- relative structure over a prefix subtower ----

    /// Relative coordinates of `a` over the prefix of `k` layers:
    /// chunks of length degree_at(k), one per upper monomial.
    pub fn rel_coords(&self, k: usize, a: &FieldElement) -> Vec<FieldElement> {
        let dk = self.degree_at(k);
        assert_eq!(a.coords.len(), self.degree);
        a.coords
            .chunks(dk)
            .map(|c| FieldElement {
                coords: c.to_vec(),
            })
            .collect()
    }

    /// Relative trace Tr_{F/K} for K = prefix of `k` layers.
    pub fn rel_trace(&self, k: usize, a: &FieldElement) -> FieldElement {
        let dk = self.degree_at(k);
        let r = self.degree / dk;
        let mut acc = self.zero_at(k);
        for j in 0..r {
            let mut unit = vec![Rational::new(); self.degree];
            unit[j * dk] = Rational::from(1);
            let prod = self.mul(a, &FieldElement { coords: unit });
            let chunk = FieldElement {
                coords: prod.coords[j * dk..(j + 1) * dk].to_vec(),
            };
            acc = self.add(&acc, &chunk);
        }
        acc
    }

    // ---- conversions with the theta presentation ----

    /// Element -> polynomial in theta (mod abs_minpoly).
    pub fn to_theta_poly(&self, a: &FieldElement) -> Poly<Rational> {
        assert_eq!(a.coords.len(), self.degree);
        let mut acc = Poly::zero();
        for (idx, c) in a.coords.iter().enumerate() {
            if *c.numer() == 0 {
                continue;
            }
            acc = acc.add(&self.monomial_to_theta[idx].mul_scalar(c));
        }
        acc.rem(&self.abs_minpoly)
    }

    /// Polynomial in theta -> element.
    pub fn from_theta_poly(&self, p: &Poly<Rational>) -> FieldElement {
        let p = p.rem(&self.abs_minpoly);
        let mut acc = self.zero();
        for (j, c) in p.coeffs().iter().enumerate() {
            if *c.numer() == 0 {
                continue;
            }
            acc = self.add(&acc, &self.scale(&self.theta_pow_coords[j], c));
        }
        acc
    }

    /// Internal constructor for an already-validated single-layer field
    /// (used for Galois closures, which may exceed the user degree cap).
    pub(crate) fn single_layer_unchecked(var: &str, minpoly: Poly<Rational>) -> Self {
        let rationals = NumberFieldTower::rationals();
        let deg = minpoly.degree();
        let layer = Layer {
            var: var.to_string(),
            minpoly: minpoly
                .coeffs()
                .iter()
                .map(|c| rationals.from_rational(c.clone()))
                .collect(),
        };
        let mut monomial_to_theta = Vec::with_capacity(deg);
        let x = Poly::new(vec![Rational::new(), Rational::from(1)]);
        let mut cur = Poly::constant(Rational::from(1));
        for _ in 0..deg {
            monomial_to_theta.push(cur.clone());
            cur = cur.mul(&x).rem(&minpoly);
        }
        let theta_pow_coords = (0..deg)
            .map(|j| {
                let mut coords = vec![Rational::new(); deg];
                coords[j] = Rational::from(1);
                FieldElement { coords }
            })
            .collect();
        NumberFieldTower {
            layers: vec![layer],
            degree: deg,
            abs_minpoly: minpoly,
            gens_in_theta: vec![x],
            theta_weights: vec![Rational::from(1)],
            monomial_to_theta,
            theta_pow_coords,
        }
    }

    pub(crate) fn assemble(
        layers: Vec<Layer>,
        degree: usize,
        abs_minpoly: Poly<Rational>,
        gens_in_theta: Vec<Poly<Rational>>,
        theta_weights: Vec<Rational>,
    ) -> Self {
        let mut tower = NumberFieldTower {
            layers,
            degree,
            abs_minpoly,
            gens_in_theta,
            theta_weights,
            monomial_to_theta: Vec::new(),
            theta_pow_coords: Vec::new(),
        };
        // monomial_to_theta: product over generators of gens_in_theta^e
        let dims: Vec<usize> = tower.layers.iter().map(Layer::degree).collect();
        let mut table = Vec::with_capacity(degree);
        for idx in 0..degree {
            let mut rem = idx;
            let mut acc = Poly::constant(Rational::from(1));
            for (i, d) in dims.iter().enumerate() {
                let e = rem % d;
                rem /= d;
                for _ in 0..e {
                    acc = acc.mul(&tower.gens_in_theta[i]).rem(&tower.abs_minpoly);
                }
            }
            table.push(acc);
        }
        tower.monomial_to_theta = table;
        // theta powers in coordinates: theta = sum w_i g_i
        let mut theta = tower.zero();
        for (i, w) in tower.theta_weights.clone().iter().enumerate() {
            theta = tower.add(&theta, &tower.scale(&tower.gen(i), w));
        }
        let mut pows = Vec::with_capacity(degree);
        let mut cur = tower.one();
        for _ in 0..degree {
            pows.push(cur.clone());
            cur = tower.mul(&cur, &theta);
        }
        tower.theta_pow_coords = pows;
        tower
    }
}

/// Determinant by fraction-aware Gaussian elimination (destroys input).
pub fn det_rational(m: &mut [Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut det = Rational::from(1);
    for col in 0..n {
        let piv = (col..n).find(|&r| *m[r][col].numer() != 0);
        let piv = match piv {
            Some(p) => p,
            None => return Rational::new(),
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det *= &pv;
        for r in (col + 1)..n {
            if *m[r][col].numer() == 0 {
                continue;
            }
            let f = Rational::from(&m[r][col] / &pv);
            for c in col..n {
                let sub = Rational::from(&m[col][c] * &f);
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// Solves an augmented n x (n+1) rational system; `None` if singular.
pub fn solve_gauss(aug: &mut [Vec<Rational>]) -> Option<Vec<Rational>> {
    let n = aug.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| *aug[r][col].numer() != 0)?;
        aug.swap(piv, col);
        let pv = aug[col][col].clone();
        for c in col..=n {
            let v = Rational::from(&aug[col][c] / &pv);
            aug[col][c] = v;
        }
        for r in 0..n {
            if r != col && *aug[r][col].numer() != 0 {
                let f = aug[r][col].clone();
                for c in col..=n {
                    let sub = Rational::from(&aug[col][c] * &f);
                    aug[r][c] -= sub;
                }
            }
        }
    }
    Some(aug.iter().map(|row| row[n].clone()).collect())
}

/// Gram-matrix relative discriminant det[Tr_{F/K}(w_i w_j)] for K the
/// prefix of `k` layers; equals det[sigma_i(w_j)]^2 for the same basis.
pub fn rel_discriminant(
    tower: &NumberFieldTower,
    k: usize,
    basis: &[FieldElement],
) -> Result<FieldElement, NumFieldError> {
    let dk = tower.degree_at(k);
    let r = tower.degree() / dk;
    if basis.len() != r {
        return Err(NumFieldError::NotABasis);
    }
    // rank check of the relative coordinate matrix over K
    let mut coord_rows: Vec<Vec<FieldElement>> =
        basis.iter().map(|b| tower.rel_coords(k, b)).collect();
    if det_in_subfield(tower, k, &mut coord_rows).is_zero() {
        return Err(NumFieldError::NotABasis);
    }
    let mut gram: Vec<Vec<FieldElement>> = Vec::with_capacity(r);
    for i in 0..r {
        let mut row = Vec::with_capacity(r);
        for j in 0..r {
            let prod = tower.mul(&basis[i], &basis[j]);
            row.push(tower.rel_trace(k, &prod));
        }
        gram.push(row);
    }
    Ok(det_in_subfield(tower, k, &mut gram))
}

/// Determinant of a matrix with entries in the prefix subtower.
fn det_in_subfield(
    tower: &NumberFieldTower,
    _k: usize,
    m: &mut [Vec<FieldElement>],
) -> FieldElement {
    let n = m.len();
    if n == 0 {
        return tower.from_rational_at(_k, Rational::from(1));
    }
    let mut det = tower.from_rational_at(_k, Rational::from(1));
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => return tower.zero_at(_k),
        };
        if piv != col {
            m.swap(piv, col);
            det = tower.neg(&det);
        }
        let pv = m[col][col].clone();
        det = tower.mul(&det, &pv);
        let pv_inv = tower.inv(&pv).expect("pivot invertible");
        for r in (col + 1)..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = tower.mul(&m[r][col], &pv_inv);
            for c in col..n {
                let sub = tower.mul(&m[col][c], &f);
                m[r][c] = tower.sub(&m[r][c], &sub);
            }
        }
    }
    det
}

/// Tower formula: delta_{F/Q} = delta_{K/Q}^{[F:K]} * N_{K/Q}(delta_{F/K}),
/// with K the prefix of `k` layers and explicit bases for both steps.
pub fn abs_discriminant_tower(
    tower: &NumberFieldTower,
    k: usize,
    basis_upper: &[FieldElement],
    basis_lower: &[FieldElement],
) -> Result<Rational, NumFieldError> {
    let rel = rel_discriminant(tower, k, basis_upper)?;
    let rel_norm = norm_of_prefix_element(tower, k, &rel);
    let lower_disc = if k == 0 {
        Rational::from(1)
    } else {
        // discriminant of the prefix field K/Q with the provided basis
        let sub = prefix_tower(tower, k);
        let lb: Vec<FieldElement> = basis_lower.to_vec();
        let d = rel_discriminant(&sub, 0, &lb)?;
        d.coords[0].clone()
    };
    let e = (tower.degree() / tower.degree_at(k)) as u32;
    let mut acc = Rational::from(1);
    for _ in 0..e {
        acc *= &lower_disc;
    }
    Ok(acc * rel_norm)
}

/// Norm from the prefix subtower down to Q of a prefix element.
pub fn norm_of_prefix_element(
    tower: &NumberFieldTower,
    k: usize,
    a: &FieldElement,
) -> Rational {
    if k == 0 {
        return a.coords[0].clone();
    }
    let sub = prefix_tower(tower, k);
    sub.norm(a)
}

/// The prefix tower of the first `k` layers as its own field.
pub fn prefix_tower(tower: &NumberFieldTower, k: usize) -> NumberFieldTower {
    if k == tower.num_layers() {
        return tower.clone();
    }
    extend::build_tower(tower.layers[..k].to_vec(), crate::mp::DEFAULT_BITS)
        .expect("prefix of a valid tower is valid")
}
