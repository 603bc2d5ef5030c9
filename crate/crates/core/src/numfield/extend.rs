//! Primitive-element machinery: extending an absolutely-presented field
//! by a root of a polynomial, with the new minimal polynomial obtained
//! as a certified factor of an exact resultant.
//!
//! Candidate factors are proposed numerically (conjugation-closed root
//! subsets in ascending size) and accepted only after exact polynomial
//! division, so a returned minimal polynomial is provably irreducible.

use crate::mp::{ffrom_q, fzero, Cx};
use crate::numfield::roots::{complex_roots, min_separation, nearest_root};
use crate::numfield::{FieldElement, Layer, NumFieldError, NumberFieldTower, MAX_TOWER_DEGREE};
use crate::poly::Poly;
use rug::{Float, Integer, Rational};

/// A field Q[x]/(a) with its complex embeddings; index 0 is the
/// distinguished embedding.
#[derive(Clone, Debug)]
pub struct Pres {
    pub a: Poly<Rational>,
    pub roots: Vec<Cx>,
    pub bits: u32,
}

impl Pres {
    pub fn rationals(bits: u32) -> Self {
        Pres {
            a: Poly::new(vec![Rational::new(), Rational::from(1)]),
            roots: vec![Cx::zero(bits + 64)],
            bits,
        }
    }

    pub fn degree(&self) -> usize {
        self.a.degree()
    }
}

/// sum_j y_coeffs[j](x) * y^j, monic in y.
#[derive(Clone, Debug)]
pub struct BiPoly {
    pub y_coeffs: Vec<Poly<Rational>>,
}

impl BiPoly {
    pub fn from_rational_poly(p: &Poly<Rational>) -> Self {
        BiPoly {
            y_coeffs: p
                .coeffs()
                .iter()
                .map(|c| Poly::constant(c.clone()))
                .collect(),
        }
    }

    pub fn y_degree(&self) -> usize {
        self.y_coeffs.len() - 1
    }

    pub fn x_degree(&self) -> usize {
        self.y_coeffs.iter().map(|p| p.degree()).max().unwrap_or(0)
    }

    fn is_monic_in_y(&self) -> bool {
        let lead = self.y_coeffs.last().unwrap();
        lead.degree() == 0 && lead.coeff(0) == Some(&Rational::from(1))
    }
}

pub struct Extension {
    pub pres: Pres,
    /// The adjoined root in terms of the new primitive element.
    pub y_expr: Poly<Rational>,
    /// The old primitive element in terms of the new one.
    pub x_expr: Poly<Rational>,
    pub c: i64,
    pub full_degree: bool,
}

pub fn eval_qpoly_cx(p: &Poly<Rational>, z: &Cx) -> Cx {
    let prec = z.prec();
    let mut acc = Cx::zero(prec);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(z).add(&Cx::new(ffrom_q(prec, c), fzero(prec)));
    }
    acc
}

/// Best rational p/q with |x - p/q| <= tol and q <= 2^qmax_bits, by
/// continued fractions.
pub fn approx_rational(x: &Float, qmax_bits: u32, tol: &Float) -> Option<Rational> {
    let prec = x.prec();
    let qmax = Integer::from(1) << qmax_bits;
    let mut p0 = Integer::from(0);
    let mut q0 = Integer::from(1);
    let mut p1 = Integer::from(1);
    let mut q1 = Integer::from(0);
    let mut cur = x.clone();
    for _ in 0..(prec as usize) {
        let fl = cur.clone().floor();
        let ai = fl.to_integer()?;
        let p2 = Integer::from(&ai * &p1) + &p0;
        let q2 = Integer::from(&ai * &q1) + &q0;
        if q2 > qmax {
            return None;
        }
        let cand = Rational::from((p2.clone(), q2.clone()));
        let diff = Float::with_val(prec, x - ffrom_q(prec, &cand)).abs();
        if diff <= *tol {
            return Some(cand);
        }
        let frac = Float::with_val(prec, &cur - &fl);
        if frac.is_zero() {
            return None;
        }
        cur = frac.recip();
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    None
}

/// C(T) = Res_x(A(x), B(x, T - c x)), exact, by evaluation-interpolation.
fn resultant_in_t(a: &Poly<Rational>, b: &BiPoly, c: i64) -> Poly<Rational> {
    let deg = a.degree() * b.y_degree();
    let mut points = Vec::with_capacity(deg + 1);
    let mut t_val: i64 = 0;
    while points.len() < deg + 1 {
        let t = Rational::from(t_val);
        // B(x, t - c x) as a polynomial in x
        let affine = Poly::new(vec![t.clone(), Rational::from(-c)]);
        let mut bsub = Poly::zero();
        let mut pw = Poly::constant(Rational::from(1));
        for (j, cj) in b.y_coeffs.iter().enumerate() {
            if j > 0 {
                pw = pw.mul(&affine);
            }
            if !cj.is_zero() {
                bsub = bsub.add(&cj.mul(&pw));
            }
        }
        let val = if bsub.is_zero() {
            Rational::new()
        } else {
            a.resultant(&bsub)
        };
        points.push((t, val));
        t_val = if t_val > 0 { -t_val } else { -t_val + 1 };
    }
    Poly::interpolate(&points)
}

struct ConjUnits {
    units: Vec<Vec<usize>>,
    mandatory: usize,
}

/// Group root indices into conjugate pairs / real singletons; `None`
/// when the pairing is numerically ambiguous.
fn conj_units(roots: &[Cx], idx0: usize, sep: &Float) -> Option<ConjUnits> {
    let prec = sep.prec();
    let margin = Float::with_val(prec, sep / 4u32);
    let mut partner = vec![usize::MAX; roots.len()];
    for (i, r) in roots.iter().enumerate() {
        let j = nearest_root(roots, &r.conj(), &margin)?;
        partner[i] = j;
    }
    // involution check
    for (i, &j) in partner.iter().enumerate() {
        if partner[j] != i {
            return None;
        }
    }
    let mut units = Vec::new();
    let mut mandatory = usize::MAX;
    let mut seen = vec![false; roots.len()];
    for i in 0..roots.len() {
        if seen[i] {
            continue;
        }
        let j = partner[i];
        seen[i] = true;
        let unit = if j == i {
            vec![i]
        } else {
            seen[j] = true;
            vec![i, j]
        };
        if unit.contains(&idx0) {
            mandatory = units.len();
        }
        units.push(unit);
    }
    Some(ConjUnits { units, mandatory })
}

const SUBSET_BUDGET: usize = 2_000_000;

/// Smallest-degree monic rational divisor of `c_poly` whose root set
/// contains roots[idx0]; returns the factor and its root indices.
fn minimal_factor(
    c_poly: &Poly<Rational>,
    roots: &[Cx],
    idx0: usize,
    bits: u32,
) -> Result<(Poly<Rational>, Vec<usize>), NumFieldError> {
    let prec = roots[0].prec();
    let sep = min_separation(roots);
    let units = conj_units(roots, idx0, &sep)
        .ok_or_else(|| NumFieldError::Internal("conjugation pairing ambiguous".into()))?;
    let tol = Float::with_val(prec, Float::i_exp(1, -((bits as i32) / 2)));

    let mandatory = &units.units[units.mandatory];
    let optional: Vec<&Vec<usize>> = units
        .units
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != units.mandatory)
        .map(|(_, u)| u)
        .collect();

    // partial product polynomial: coefficients in Cx, constant-first
    fn mul_linear(poly: &mut Vec<Cx>, gamma: &Cx) {
        // poly *= (T - gamma)
        let prec = gamma.prec();
        poly.push(Cx::zero(prec));
        for i in (0..poly.len()).rev() {
            let lower = if i > 0 { poly[i - 1].clone() } else { Cx::zero(prec) };
            poly[i] = lower.sub(&poly[i].mul(gamma));
        }
    }

    let mut base = vec![Cx::one(prec)];
    for &i in mandatory {
        mul_linear(&mut base, &roots[i]);
    }

    let full_deg = c_poly.degree();
    let mut budget = 0usize;

    for target in mandatory.len()..=full_deg {
        // choose optional units totalling target - mandatory.len()
        let want = target - mandatory.len();
        let mut found: Option<(Poly<Rational>, Vec<usize>)> = None;
        // depth-first over optional units
        fn rec(
            optional: &[&Vec<usize>],
            pos: usize,
            want: usize,
            poly: &Vec<Cx>,
            chosen: &mut Vec<usize>,
            roots: &[Cx],
            c_poly: &Poly<Rational>,
            tol: &Float,
            bits: u32,
            budget: &mut usize,
            found: &mut Option<(Poly<Rational>, Vec<usize>)>,
        ) -> Result<(), NumFieldError> {
            if found.is_some() {
                return Ok(());
            }
            *budget += 1;
            if *budget > SUBSET_BUDGET {
                return Err(NumFieldError::Internal(
                    "factor search budget exceeded".into(),
                ));
            }
            if want == 0 {
                // candidate complete: recognize and verify
                let mut cand_coeffs = Vec::with_capacity(poly.len());
                for cx in poly.iter() {
                    let im = cx.im.clone().abs();
                    if im > *tol {
                        return Ok(());
                    }
                    match approx_rational(&cx.re, bits / 3, tol) {
                        Some(q) => cand_coeffs.push(q),
                        None => return Ok(()),
                    }
                }
                let cand = Poly::new(cand_coeffs);
                if cand.is_zero() || !cand.is_monic() {
                    return Ok(());
                }
                let (_, rem) = c_poly.divrem(&cand);
                if rem.is_zero() {
                    *found = Some((cand, chosen.clone()));
                }
                return Ok(());
            }
            if pos >= optional.len() {
                return Ok(());
            }
            // remaining capacity prune
            let remaining: usize = optional[pos..].iter().map(|u| u.len()).sum();
            if remaining < want {
                return Ok(());
            }
            // include optional[pos] if it fits
            if optional[pos].len() <= want {
                let mut np = poly.clone();
                for &i in optional[pos] {
                    mul_linear(&mut np, &roots[i]);
                }
                chosen.extend(optional[pos].iter().copied());
                rec(
                    optional,
                    pos + 1,
                    want - optional[pos].len(),
                    &np,
                    chosen,
                    roots,
                    c_poly,
                    tol,
                    bits,
                    budget,
                    found,
                )?;
                for _ in optional[pos] {
                    chosen.pop();
                }
            }
            // skip optional[pos]
            rec(
                optional, pos + 1, want, poly, chosen, roots, c_poly, tol, bits, budget, found,
            )
        }
        let mut chosen: Vec<usize> = mandatory.clone();
        rec(
            &optional,
            0,
            want,
            &base,
            &mut chosen,
            roots,
            c_poly,
            &tol,
            bits,
            &mut budget,
            &mut found,
        )?;
        if let Some((cand, subset)) = found {
            return Ok((cand, subset));
        }
    }
    Err(NumFieldError::Internal(
        "no rational factor found (insufficient precision?)".into(),
    ))
}

// ---- arithmetic in K' = Q[T]/(m) and in K'[y] ----

fn modmul(a: &Poly<Rational>, b: &Poly<Rational>, m: &Poly<Rational>) -> Poly<Rational> {
    a.mul(b).rem(m)
}

fn modinv(a: &Poly<Rational>, m: &Poly<Rational>) -> Option<Poly<Rational>> {
    if a.is_zero() {
        return None;
    }
    let (g, s, _) = a.extended_gcd(m);
    if g.degree() != 0 {
        return None;
    }
    Some(s.rem(m))
}

type YPoly = Vec<Poly<Rational>>;

fn ynorm(p: &mut YPoly) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn ymul(a: &YPoly, b: &YPoly, m: &Poly<Rational>) -> YPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out: YPoly = vec![Poly::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if cb.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&modmul(ca, cb, m));
        }
    }
    ynorm(&mut out);
    out
}

fn yrem(a: &YPoly, b: &YPoly, m: &Poly<Rational>) -> Option<YPoly> {
    let mut r = a.clone();
    ynorm(&mut r);
    let db = b.len() - 1;
    let lead_inv = modinv(b.last().unwrap(), m)?;
    while r.len() > db {
        let k = r.len() - 1;
        let q = modmul(&r[k], &lead_inv, m);
        if !q.is_zero() {
            for i in 0..=db {
                let sub = modmul(&q, &b[i], m);
                r[k - db + i] = r[k - db + i].sub(&sub);
            }
        }
        r.pop();
        ynorm(&mut r);
        if r.is_empty() {
            break;
        }
    }
    Some(r)
}

fn ygcd(a: &YPoly, b: &YPoly, m: &Poly<Rational>) -> Option<YPoly> {
    let mut x = a.clone();
    let mut y = b.clone();
    ynorm(&mut x);
    ynorm(&mut y);
    while !y.is_empty() {
        let r = yrem(&x, &y, m)?;
        x = y;
        y = r;
    }
    Some(x)
}

/// Powers of (Tbar - y) in K'[y], up to `maxpow`.
fn tbar_minus_y_powers(m: &Poly<Rational>, maxpow: usize) -> Vec<YPoly> {
    let tbar = Poly::new(vec![Rational::new(), Rational::from(1)]).rem(m);
    let lin: YPoly = vec![tbar, Poly::constant(Rational::from(-1))];
    let mut pows = Vec::with_capacity(maxpow + 1);
    pows.push(vec![Poly::constant(Rational::from(1))]);
    for i in 1..=maxpow {
        let next = ymul(&pows[i - 1], &lin, m);
        pows.push(next);
    }
    pows
}

fn c_pow(c: i64, e: usize) -> Rational {
    let mut acc = Rational::from(1);
    for _ in 0..e {
        acc *= Rational::from(c);
    }
    acc
}

/// In K' = Q[T]/(factor), express the adjoined root y and the old
/// primitive element x as polynomials in the new primitive element.
fn gcd_trick(
    factor: &Poly<Rational>,
    a: &Poly<Rational>,
    b: &BiPoly,
    c: i64,
) -> Option<(Poly<Rational>, Poly<Rational>)> {
    let da = a.degree();
    let dbx = b.x_degree();
    let pows = tbar_minus_y_powers(factor, da.max(dbx));

    // A~(y) = sum_m a_m c^(da-m) (Tbar - y)^m
    let mut a_tilde: YPoly = Vec::new();
    for (m_deg, am) in a.coeffs().iter().enumerate() {
        if *am.numer() == 0 {
            continue;
        }
        let scale = Rational::from(am * c_pow(c, da - m_deg));
        for (j, coeff) in pows[m_deg].iter().enumerate() {
            if a_tilde.len() <= j {
                a_tilde.resize(j + 1, Poly::zero());
            }
            a_tilde[j] = a_tilde[j].add(&coeff.mul_scalar(&scale));
        }
    }
    ynorm(&mut a_tilde);

    // B~(y) = sum_j y^j * [ sum_t b_{j,t} c^(dbx - t) (Tbar - y)^t ]
    let mut b_tilde: YPoly = Vec::new();
    for (j, bj) in b.y_coeffs.iter().enumerate() {
        if bj.is_zero() {
            continue;
        }
        for (t, bt) in bj.coeffs().iter().enumerate() {
            if *bt.numer() == 0 {
                continue;
            }
            let scale = Rational::from(bt * c_pow(c, dbx - t));
            for (u, coeff) in pows[t].iter().enumerate() {
                let idx = j + u;
                if b_tilde.len() <= idx {
                    b_tilde.resize(idx + 1, Poly::zero());
                }
                b_tilde[idx] = b_tilde[idx].add(&coeff.mul_scalar(&scale));
            }
        }
    }
    ynorm(&mut b_tilde);

    let g = ygcd(&a_tilde, &b_tilde, factor)?;
    if g.len() != 2 {
        return None;
    }
    let lead_inv = modinv(&g[1], factor)?;
    let y_expr = modmul(&g[0], &lead_inv, factor).neg().rem(factor);
    // x = (Tbar - y)/c
    let tbar = Poly::new(vec![Rational::new(), Rational::from(1)]).rem(factor);
    let x_expr = tbar
        .sub(&y_expr)
        .mul_scalar(&Rational::from((Integer::from(1), Integer::from(c))))
        .rem(factor);
    Some((y_expr, x_expr))
}

const C_CANDIDATES: [i64; 16] = [1, -1, 2, -2, 3, -3, 4, -4, 5, -5, 6, -6, 7, -7, 8, -8];

/// Extend `pres` by the root of `b` numerically closest to `y_target`
/// over the distinguished embedding.
pub fn extend(pres: &Pres, b: &BiPoly, y_target: &Cx) -> Result<Extension, NumFieldError> {
    assert!(b.is_monic_in_y(), "layer polynomial must be monic");
    let bits = pres.bits;
    let prec = bits + 64;
    let dy = b.y_degree();

    // y-roots over every embedding of the base field
    let x_independent = b.x_degree() == 0;
    let mut yroots: Vec<Vec<Cx>> = Vec::with_capacity(pres.roots.len());
    let mut shared: Option<Vec<Cx>> = None;
    for rho in &pres.roots {
        if x_independent {
            if shared.is_none() {
                let coeffs: Vec<Cx> = b
                    .y_coeffs
                    .iter()
                    .map(|p| {
                        let q = p.coeff(0).cloned().unwrap_or_default();
                        Cx::new(ffrom_q(prec, &q), fzero(prec))
                    })
                    .collect();
                shared = Some(complex_roots(&coeffs, bits));
            }
            yroots.push(shared.clone().unwrap());
        } else {
            let coeffs: Vec<Cx> = b.y_coeffs.iter().map(|p| eval_qpoly_cx(p, rho)).collect();
            yroots.push(complex_roots(&coeffs, bits));
        }
    }

    // separability of the adjoined polynomial over each embedding
    let sep_floor = Float::with_val(prec, Float::i_exp(1, -((bits as i32) / 2)));
    for yr in &yroots {
        if yr.len() > 1 && min_separation(yr) < sep_floor {
            return Err(NumFieldError::Internal(
                "adjoined polynomial has numerically repeated roots".into(),
            ));
        }
    }

    let margin = Float::with_val(prec, &sep_floor * 4u32);
    let target_j = nearest_root(&yroots[0], y_target, &margin)
        .or_else(|| nearest_root(&yroots[0], y_target, &Float::with_val(prec, 0.25)))
        .ok_or_else(|| NumFieldError::Internal("target root not found".into()))?;

    for &c in &C_CANDIDATES {
        // candidate gamma values
        let cf = Cx::new(ffrom_q(prec, &Rational::from(c)), fzero(prec));
        let mut gammas = Vec::with_capacity(pres.roots.len() * dy);
        let mut idx0 = usize::MAX;
        for (u, rho) in pres.roots.iter().enumerate() {
            for (j, y) in yroots[u].iter().enumerate() {
                if u == 0 && j == target_j {
                    idx0 = gammas.len();
                }
                gammas.push(y.add(&rho.mul(&cf)));
            }
        }
        if gammas.len() > 1 && min_separation(&gammas) < sep_floor {
            continue;
        }

        let c_poly = resultant_in_t(&pres.a, b, c);
        if c_poly.degree() != pres.degree() * dy || !c_poly.is_monic() {
            return Err(NumFieldError::Internal("resultant degree mismatch".into()));
        }
        let (factor, subset) = match minimal_factor(&c_poly, &gammas, idx0, bits) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let (y_expr, x_expr) = match gcd_trick(&factor, &pres.a, b, c) {
            Some(v) => v,
            None => continue,
        };
        // numeric confirmation on the distinguished root
        let gamma0 = gammas[idx0].clone();
        let y_chk = eval_qpoly_cx(&y_expr, &gamma0);
        let x_chk = eval_qpoly_cx(&x_expr, &gamma0);
        let ok_margin = Float::with_val(prec, &sep_floor * 2u32);
        if y_chk.dist(&yroots[0][target_j]) > ok_margin || x_chk.dist(&pres.roots[0]) > ok_margin
        {
            continue;
        }
        // new roots: subset values with gamma0 first
        let mut new_roots = vec![gamma0];
        for &i in &subset {
            if i != idx0 {
                new_roots.push(gammas[i].clone());
            }
        }
        let full = factor.degree() == pres.degree() * dy;
        return Ok(Extension {
            pres: Pres {
                a: factor,
                roots: new_roots,
                bits,
            },
            y_expr,
            x_expr,
            c,
            full_degree: full,
        });
    }
    Err(NumFieldError::Internal(
        "no suitable primitive-element shift found".into(),
    ))
}

/// Build a validated tower from layers (each monic over the prefix).
pub fn build_tower(layers: Vec<Layer>, bits: u32) -> Result<NumberFieldTower, NumFieldError> {
    let expected: usize = layers.iter().map(Layer::degree).product();
    if expected > MAX_TOWER_DEGREE {
        return Err(NumFieldError::DegreeOverLimit(expected));
    }
    let mut attempt_bits = bits;
    for _ in 0..=8 {
        match try_build_tower(&layers, attempt_bits) {
            Ok(t) => return Ok(t),
            Err(NumFieldError::Internal(_)) => {
                attempt_bits *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(NumFieldError::PrecisionExhausted(8))
}

fn try_build_tower(layers: &[Layer], bits: u32) -> Result<NumberFieldTower, NumFieldError> {
    let mut pres = Pres::rationals(bits);
    let mut gens: Vec<Poly<Rational>> = Vec::new();
    let mut weights: Vec<Rational> = Vec::new();
    let mut dims: Vec<usize> = Vec::new();

    for layer in layers {
        let d = layer.degree();
        if d == 0 {
            return Err(NumFieldError::Internal("degree-0 layer".into()));
        }
        // prefix monomial -> theta-poly table, to convert coefficients
        let prefix_deg: usize = dims.iter().product();
        let mono_theta = {
            let mut table = Vec::with_capacity(prefix_deg);
            for idx in 0..prefix_deg {
                let mut rem = idx;
                let mut acc = Poly::constant(Rational::from(1));
                for (i, dd) in dims.iter().enumerate() {
                    let e = rem % dd;
                    rem /= dd;
                    for _ in 0..e {
                        acc = acc.mul(&gens[i]).rem(&pres.a);
                    }
                }
                table.push(acc);
            }
            table
        };
        let coeff_to_theta = |fe: &FieldElement| -> Poly<Rational> {
            let mut acc = Poly::zero();
            for (idx, c) in fe.coords.iter().enumerate() {
                if *c.numer() == 0 {
                    continue;
                }
                acc = acc.add(&mono_theta[idx].mul_scalar(c));
            }
            acc.rem(&pres.a)
        };

        // monic check
        let lead = layer.minpoly.last().unwrap();
        let lead_theta = coeff_to_theta(lead);
        if lead_theta != Poly::constant(Rational::from(1)) {
            return Err(NumFieldError::Internal(format!(
                "layer `{}` is not monic",
                layer.var
            )));
        }

        if d == 1 {
            // generator is -c0, already in the field
            let g = coeff_to_theta(&layer.minpoly[0]).neg().rem(&pres.a);
            gens.push(g);
            weights.push(Rational::new());
            dims.push(1);
            continue;
        }

        let bi = BiPoly {
            y_coeffs: layer.minpoly.iter().map(|fe| coeff_to_theta(fe)).collect(),
        };
        // adjoin the y-root with greatest (Im, Re) for determinism
        let probe: Vec<Cx> = bi
            .y_coeffs
            .iter()
            .map(|p| eval_qpoly_cx(p, &pres.roots[0]))
            .collect();
        let yr = complex_roots(&probe, bits);
        let target = yr
            .iter()
            .max_by(|a, b| {
                let (ai, bi_) = (a.im.to_f64(), b.im.to_f64());
                ai.partial_cmp(&bi_)
                    .unwrap()
                    .then(a.re.to_f64().partial_cmp(&b.re.to_f64()).unwrap())
            })
            .unwrap()
            .clone();

        let ext = match extend(&pres, &bi, &target) {
            Ok(e) => e,
            Err(NumFieldError::Internal(msg))
                if msg.contains("repeated roots") =>
            {
                return Err(NumFieldError::ReducibleLayer(layer.var.clone()))
            }
            Err(e) => return Err(e),
        };
        if !ext.full_degree {
            return Err(NumFieldError::ReducibleLayer(layer.var.clone()));
        }
        // recompose earlier generators through the new primitive element
        for g in gens.iter_mut() {
            *g = g.compose_mod(&ext.x_expr, &ext.pres.a);
        }
        for w in weights.iter_mut() {
            *w *= Rational::from(ext.c);
        }
        gens.push(ext.y_expr.clone());
        weights.push(Rational::from(1));
        dims.push(d);
        pres = ext.pres;
    }

    let degree: usize = dims.iter().product();
    if pres.degree() != degree {
        return Err(NumFieldError::Internal("degree bookkeeping mismatch".into()));
    }
    Ok(NumberFieldTower::assemble(
        layers.to_vec(),
        degree,
        pres.a,
        gens,
        weights,
    ))
}

/// Public entry: build and validate a tower at default precision.
pub fn build_field(layers: Vec<Layer>) -> Result<NumberFieldTower, NumFieldError> {
    build_tower(layers, crate::mp::DEFAULT_BITS)
}
