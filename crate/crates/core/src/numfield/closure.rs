//! Galois closures as explicit permutation groups, the subfield lattice
//! through the Galois correspondence, and the action of the group on
//! square roots of integers inside the closure.

use crate::mp::Cx;
use crate::numfield::embeddings::{embeddings, EmbeddingSet};
use crate::numfield::extend::{eval_qpoly_cx, extend, BiPoly, Pres};
use crate::numfield::roots::{min_separation, nearest_root};
use crate::numfield::surd::{squarefree_decompose, SurdValue};
use crate::numfield::{FieldElement, NumFieldError, NumberFieldTower, MAX_CLOSURE_DEGREE};
use crate::poly::Poly;
use rug::{Float, Integer, Rational};
use std::collections::HashMap;

/// The Galois closure L of F with its automorphism group realized as
/// root permutations. Index 0 is the distinguished embedding; group
/// element v is the automorphism with iota_1 . sigma_v = iota_v.
#[derive(Clone, Debug)]
pub struct GaloisContext {
    pub tower: NumberFieldTower,
    /// Embeddings of theta_L; index 0 distinguished.
    pub roots: Vec<Cx>,
    pub bits: u32,
    pub order: usize,
    /// F's theta-roots, in F's canonical embedding order.
    pub m_roots: Vec<Cx>,
    /// Expression of each root of F's minimal polynomial inside L.
    pub root_exprs: Vec<Poly<Rational>>,
    /// sigma_v(theta_L) as a polynomial in theta_L.
    pub theta_exprs: Vec<Poly<Rational>>,
    /// Action of sigma_v on Sigma_F: tau_j -> tau_{perms[v][j]}.
    pub perms: Vec<Vec<usize>>,
    /// Composition: sigma_{mult[v][u]} = sigma_v . sigma_u.
    pub mult: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
    /// Index of complex conjugation (restricted to L).
    pub conj_elt: usize,
}

impl GaloisContext {
    /// gamma . iota_u as an embedding index (left action).
    pub fn act_on_embedding(&self, g: usize, u: usize) -> usize {
        self.mult[g][u]
    }

    /// The Sigma_F index of iota_u restricted to F.
    pub fn restrict_to_f(&self, u: usize) -> usize {
        self.perms[u][0]
    }

    /// Applies sigma_v to an element of L given as a theta-polynomial.
    pub fn apply(&self, v: usize, elt: &Poly<Rational>) -> Poly<Rational> {
        elt.compose_mod(&self.theta_exprs[v], self.tower.abs_minpoly())
    }
}

/// Constructs the splitting field of F's absolute minimal polynomial by
/// adjoining its roots one at a time, then reads off the automorphisms
/// from the located root expressions.
pub fn galois_closure(
    tower: &NumberFieldTower,
    emb: &EmbeddingSet,
) -> Result<GaloisContext, NumFieldError> {
    let bits = emb.bits;
    let m = tower.abs_minpoly().clone();
    let d = tower.degree();
    let m_roots: Vec<Cx> = emb.theta_values.clone();

    if d == 1 {
        let t = NumberFieldTower::single_layer_unchecked(
            "t",
            Poly::new(vec![Rational::new(), Rational::from(1)]),
        );
        return Ok(GaloisContext {
            tower: t,
            roots: vec![Cx::zero(bits + 64)],
            bits,
            order: 1,
            m_roots,
            root_exprs: vec![Poly::zero()],
            theta_exprs: vec![Poly::zero()],
            perms: vec![vec![0]],
            mult: vec![vec![0]],
            inverse: vec![0],
            conj_elt: 0,
        });
    }

    let mut pres = Pres {
        a: m.clone(),
        roots: m_roots.clone(),
        bits,
    };
    let mut exprs: Vec<Option<Poly<Rational>>> = vec![None; d];
    exprs[0] = Some(Poly::new(vec![Rational::new(), Rational::from(1)]));
    // theta_L = sum weights[j] * (root j); starts as root 0 itself
    let mut weights: HashMap<usize, Rational> = HashMap::new();
    weights.insert(0, Rational::from(1));

    let bi = BiPoly::from_rational_poly(&m);
    let prec = bits + 64;
    let sep = min_separation(&m_roots);
    let margin = Float::with_val(prec, &sep / 4u32);

    for j in 1..d {
        if exprs[j].is_some() {
            continue;
        }
        // cheap candidate: the negation of an already-located root
        let mut located = false;
        for k in 0..d {
            if let Some(e) = exprs[k].clone() {
                let cand = e.neg();
                let val = eval_qpoly_cx(&cand, &pres.roots[0]);
                if val.dist(&m_roots[j]) < margin && m.compose_mod(&cand, &pres.a).is_zero() {
                    exprs[j] = Some(cand);
                    located = true;
                    break;
                }
            }
        }
        if located {
            continue;
        }
        if pres.degree() * d > MAX_CLOSURE_DEGREE * d {
            return Err(NumFieldError::ClosureTooLarge);
        }
        let ext = extend(&pres, &bi, &m_roots[j])?;
        if ext.pres.degree() > MAX_CLOSURE_DEGREE {
            return Err(NumFieldError::ClosureTooLarge);
        }
        for e in exprs.iter_mut().flatten() {
            *e = e.compose_mod(&ext.x_expr, &ext.pres.a);
        }
        exprs[j] = Some(ext.y_expr.clone());
        for w in weights.values_mut() {
            *w *= Rational::from(ext.c);
        }
        *weights.entry(j).or_insert_with(Rational::new) += Rational::from(1);
        pres = ext.pres;
    }

    let n = pres.degree();
    let a_l = pres.a.clone();
    let root_exprs: Vec<Poly<Rational>> = exprs.into_iter().map(Option::unwrap).collect();

    // numeric sanity for the located roots under the distinguished embedding
    for (j, e) in root_exprs.iter().enumerate() {
        let v = eval_qpoly_cx(e, &pres.roots[0]);
        if v.dist(&m_roots[j]) > margin {
            return Err(NumFieldError::Internal("root expression drifted".into()));
        }
    }

    // permutation of Sigma_F per embedding of L
    let mut perms: Vec<Vec<usize>> = Vec::with_capacity(n);
    for rho in &pres.roots {
        let mut perm = vec![usize::MAX; d];
        let mut hit = vec![false; d];
        for (j, e) in root_exprs.iter().enumerate() {
            let val = eval_qpoly_cx(e, rho);
            let t = nearest_root(&m_roots, &val, &margin)
                .ok_or_else(|| NumFieldError::Internal("root match ambiguous".into()))?;
            if hit[t] {
                return Err(NumFieldError::Internal("non-injective root action".into()));
            }
            hit[t] = true;
            perm[j] = t;
        }
        perms.push(perm);
    }
    if perms[0].iter().enumerate().any(|(i, &p)| i != p) {
        return Err(NumFieldError::Internal(
            "distinguished embedding is not the identity".into(),
        ));
    }

    // sigma_v(theta_L) = sum w_j * expr(root perms[v][j])
    let mut theta_exprs = Vec::with_capacity(n);
    for perm in &perms {
        let mut acc = Poly::zero();
        for (&j, w) in weights.iter() {
            acc = acc.add(&root_exprs[perm[j]].mul_scalar(w));
        }
        theta_exprs.push(acc.rem(&a_l));
    }
    // each theta_expr must evaluate (at the distinguished root) to its own
    // embedding value; this pins the v-labeling
    let lsep = min_separation(&pres.roots);
    let lmargin = Float::with_val(prec, &lsep / 4u32);
    for (v, te) in theta_exprs.iter().enumerate() {
        let val = eval_qpoly_cx(te, &pres.roots[0]);
        let idx = nearest_root(&pres.roots, &val, &lmargin)
            .ok_or_else(|| NumFieldError::Internal("theta image ambiguous".into()))?;
        if idx != v {
            return Err(NumFieldError::Internal("theta image mislabeled".into()));
        }
    }

    // composition table via the faithful action on Sigma_F
    let index_of: HashMap<Vec<usize>, usize> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    if index_of.len() != n {
        return Err(NumFieldError::Internal(
            "group action on roots is not faithful".into(),
        ));
    }
    let mut mult = vec![vec![0usize; n]; n];
    for v in 0..n {
        for u in 0..n {
            let comp: Vec<usize> = (0..d).map(|j| perms[v][perms[u][j]]).collect();
            mult[v][u] = *index_of
                .get(&comp)
                .ok_or_else(|| NumFieldError::Internal("group not closed".into()))?;
        }
    }
    let mut inverse = vec![0usize; n];
    for v in 0..n {
        inverse[v] = (0..n)
            .find(|&u| mult[v][u] == 0)
            .ok_or_else(|| NumFieldError::Internal("missing inverse".into()))?;
    }

    // complex conjugation: the embedding matching conj(rho_0)
    let conj_target = pres.roots[0].conj();
    let conj_elt = nearest_root(&pres.roots, &conj_target, &lmargin)
        .ok_or_else(|| NumFieldError::Internal("conjugation not located".into()))?;
    // its action on Sigma_F must agree with the embedding-set pairing
    for j in 0..d {
        if perms[conj_elt][j] != emb.conj[j] {
            return Err(NumFieldError::Internal(
                "conjugation action mismatch".into(),
            ));
        }
    }

    let ltower = NumberFieldTower::single_layer_unchecked("t", a_l);
    Ok(GaloisContext {
        tower: ltower,
        roots: pres.roots,
        bits,
        order: n,
        m_roots,
        root_exprs,
        theta_exprs,
        perms,
        mult,
        inverse,
        conj_elt,
    })
}

// ---- subgroups and subfields ----

fn subgroup_closure(ctx: &GaloisContext, seed: &[usize]) -> Vec<usize> {
    let mut in_set = vec![false; ctx.order];
    let mut stack: Vec<usize> = Vec::new();
    for &s in seed {
        if !in_set[s] {
            in_set[s] = true;
            stack.push(s);
        }
    }
    if !in_set[0] {
        in_set[0] = true;
        stack.push(0);
    }
    let mut members: Vec<usize> = stack.clone();
    while let Some(g) = stack.pop() {
        let snapshot = members.clone();
        for &h in &snapshot {
            for &p in &[ctx.mult[g][h], ctx.mult[h][g], ctx.inverse[g]] {
                if !in_set[p] {
                    in_set[p] = true;
                    members.push(p);
                    stack.push(p);
                }
            }
        }
    }
    members.sort_unstable();
    members
}

/// All subgroups H with Stab(tau_0) <= H <= G.
fn subgroups_above_stabilizer(ctx: &GaloisContext) -> Vec<Vec<usize>> {
    let stab: Vec<usize> = (0..ctx.order).filter(|&v| ctx.perms[v][0] == 0).collect();
    let mut groups: Vec<Vec<usize>> = vec![subgroup_closure(ctx, &stab)];
    let mut frontier = groups.clone();
    while let Some(h) = frontier.pop() {
        for g in 0..ctx.order {
            if h.binary_search(&g).is_ok() {
                continue;
            }
            let mut seed = h.clone();
            seed.push(g);
            let nh = subgroup_closure(ctx, &seed);
            if !groups.contains(&nh) {
                groups.push(nh.clone());
                frontier.push(nh);
            }
        }
    }
    groups
}

/// Fixed-field data for one subgroup.
struct FixedField {
    subgroup: Vec<usize>,
    degree: usize,
    tower: NumberFieldTower,
    gen_in_l: Poly<Rational>,
    /// coset id per embedding index of L
    coset_of: Vec<usize>,
    totally_real: bool,
    totally_imaginary: bool,
}

fn left_cosets(ctx: &GaloisContext, h: &[usize]) -> (Vec<usize>, usize) {
    let mut coset_of = vec![usize::MAX; ctx.order];
    let mut next = 0usize;
    for u in 0..ctx.order {
        if coset_of[u] != usize::MAX {
            continue;
        }
        for &g in h {
            coset_of[ctx.mult[u][g]] = next;
        }
        next += 1;
    }
    (coset_of, next)
}

fn fixed_field(ctx: &GaloisContext, h: &[usize]) -> Result<FixedField, NumFieldError> {
    let (coset_of, n_cosets) = left_cosets(ctx, h);
    let a_l = ctx.tower.abs_minpoly();

    // totally real <=> conjugation fixes every coset
    let mut real_count = 0usize;
    for u in 0..ctx.order {
        if coset_of[ctx.mult[ctx.conj_elt][u]] == coset_of[u] {
            real_count += 1;
        }
    }
    let totally_real = real_count == ctx.order;
    let totally_imaginary = real_count == 0;

    if h.len() == ctx.order {
        // fixed field is Q
        return Ok(FixedField {
            subgroup: h.to_vec(),
            degree: 1,
            tower: NumberFieldTower::rationals(),
            gen_in_l: Poly::zero(),
            coset_of,
            totally_real: true,
            totally_imaginary: false,
        });
    }

    for c in 1..=10u32 {
        // orbit power-sum e = sum_{v in H} sigma_v(theta)^c
        let mut coset_vals: Vec<Poly<Rational>> = vec![Poly::zero(); n_cosets];
        for u in 0..ctx.order {
            let p = ctx.theta_exprs[u].pow_mod(c as u64, a_l);
            coset_vals[coset_of[u]] = coset_vals[coset_of[u]].add(&p);
        }
        // all coset values distinct?
        let mut distinct = true;
        'outer: for i in 0..n_cosets {
            for j in (i + 1)..n_cosets {
                if coset_vals[i] == coset_vals[j] {
                    distinct = false;
                    break 'outer;
                }
            }
        }
        if !distinct {
            continue;
        }
        // minpoly = prod over cosets of (x - mu); coefficients must be rational
        let mut poly: Vec<Poly<Rational>> = vec![Poly::constant(Rational::from(1))];
        for mu in &coset_vals {
            poly.push(Poly::zero());
            for i in (0..poly.len()).rev() {
                let lower = if i > 0 { poly[i - 1].clone() } else { Poly::zero() };
                poly[i] = lower.sub(&poly[i].mul(mu).rem(a_l));
            }
        }
        let mut rat_coeffs = Vec::with_capacity(poly.len());
        let mut rational_ok = true;
        for c_l in &poly {
            if c_l.is_zero() {
                rat_coeffs.push(Rational::new());
            } else if c_l.degree() == 0 {
                rat_coeffs.push(c_l.coeff(0).unwrap().clone());
            } else {
                rational_ok = false;
                break;
            }
        }
        if !rational_ok {
            return Err(NumFieldError::Internal(
                "orbit-sum minimal polynomial not rational".into(),
            ));
        }
        let minpoly = Poly::new(rat_coeffs);
        let tower = NumberFieldTower::single_layer_unchecked("s", minpoly);
        // e itself = coset value of the identity coset
        let gen_in_l = coset_vals[coset_of[0]].clone();
        return Ok(FixedField {
            subgroup: h.to_vec(),
            degree: n_cosets,
            tower,
            gen_in_l,
            coset_of,
            totally_real,
            totally_imaginary,
        });
    }
    Err(NumFieldError::Internal(
        "no nondegenerate orbit power sum found".into(),
    ))
}

/// Result of the F0/F1 subfield analysis.
pub struct Subfields {
    pub f0: NumberFieldTower,
    pub f1: NumberFieldTower,
    pub f0_gen_in_l: Poly<Rational>,
    pub f1_gen_in_l: Poly<Rational>,
    /// true when F1 is a CM field (F1 != F0).
    pub f1_is_cm: bool,
    /// Sigma_F index -> Sigma_F1 index (canonical orders on both sides).
    pub restriction: Vec<usize>,
    /// Totally negative D in F0 with F1 = F0(sqrt(D)); None when F1 = F0.
    pub d_datum: Option<FieldElement>,
}

/// Express an element of L (as a theta_L-polynomial) in the Q-span of
/// the powers of `gen`; `None` if it does not lie in that span.
fn express_in_gen_powers(
    a_l: &Poly<Rational>,
    gen: &Poly<Rational>,
    span_dim: usize,
    target: &Poly<Rational>,
) -> Option<Poly<Rational>> {
    let n = a_l.degree();
    // columns: gen^k coefficients; rows: theta-coordinates
    let mut powers = Vec::with_capacity(span_dim);
    let mut cur = Poly::constant(Rational::from(1));
    for _ in 0..span_dim {
        powers.push(cur.clone());
        cur = cur.mul(gen).rem(a_l);
    }
    // solve least-structured: pick span_dim independent rows, then verify all
    let mut aug: Vec<Vec<Rational>> = Vec::new();
    for row in 0..n {
        let mut r: Vec<Rational> = powers
            .iter()
            .map(|p| p.coeff(row).cloned().unwrap_or_default())
            .collect();
        r.push(target.coeff(row).cloned().unwrap_or_default());
        aug.push(r);
    }
    // Gaussian elimination on the rectangular system
    let mut pivot_row = 0usize;
    let cols = span_dim;
    let mut pivots = Vec::new();
    for col in 0..cols {
        let piv = (pivot_row..n).find(|&r| *aug[r][col].numer() != 0);
        let piv = match piv {
            Some(p) => p,
            None => continue,
        };
        aug.swap(pivot_row, piv);
        let pv = aug[pivot_row][col].clone();
        for cc in col..=cols {
            let v = Rational::from(&aug[pivot_row][cc] / &pv);
            aug[pivot_row][cc] = v;
        }
        for r in 0..n {
            if r != pivot_row && *aug[r][col].numer() != 0 {
                let f = aug[r][col].clone();
                for cc in col..=cols {
                    let sub = Rational::from(&aug[pivot_row][cc] * &f);
                    aug[r][cc] -= sub;
                }
            }
        }
        pivots.push((pivot_row, col));
        pivot_row += 1;
        if pivot_row == n {
            break;
        }
    }
    // inconsistent rows?
    for r in pivot_row..n {
        if *aug[r][cols].numer() != 0 {
            return None;
        }
    }
    let mut sol = vec![Rational::new(); cols];
    for (r, c) in pivots {
        sol[c] = aug[r][cols].clone();
    }
    // verify exactly
    let mut acc = Poly::zero();
    for (k, s) in sol.iter().enumerate() {
        acc = acc.add(&powers[k].mul_scalar(s));
    }
    if acc.rem(a_l) != target.rem(a_l) {
        return None;
    }
    Some(Poly::new(sol))
}

/// Largest totally real subfield F0 and its CM quadratic extension F1
/// inside F (F1 = F0 when absent), with the restriction map on
/// embeddings and the quadratic datum D.
pub fn maximal_subfields(
    tower: &NumberFieldTower,
    emb: &EmbeddingSet,
    ctx: &GaloisContext,
) -> Result<Subfields, NumFieldError> {
    if !emb.is_totally_imaginary() && !emb.is_totally_real() {
        return Err(NumFieldError::Internal(
            "subfield analysis requires a totally real or totally imaginary field".into(),
        ));
    }
    let _ = tower;
    let groups = subgroups_above_stabilizer(ctx);
    let mut fields = Vec::with_capacity(groups.len());
    for h in &groups {
        fields.push(fixed_field(ctx, h)?);
    }

    // F0: maximal totally real
    let f0_deg = fields
        .iter()
        .filter(|f| f.totally_real)
        .map(|f| f.degree)
        .max()
        .ok_or_else(|| NumFieldError::Internal("no totally real subfield".into()))?;
    let f0_candidates: Vec<&FixedField> = fields
        .iter()
        .filter(|f| f.totally_real && f.degree == f0_deg)
        .collect();
    if f0_candidates.len() != 1 {
        return Err(NumFieldError::Internal(
            "maximal totally real subfield not unique".into(),
        ));
    }
    let f0 = f0_candidates[0];

    // F1: totally imaginary quadratic extension of F0 inside F
    let f1_candidates: Vec<&FixedField> = fields
        .iter()
        .filter(|f| {
            f.totally_imaginary
                && f.degree == 2 * f0.degree
                && f.subgroup.iter().all(|g| f0.subgroup.binary_search(g).is_ok())
        })
        .collect();
    if f1_candidates.len() > 1 {
        return Err(NumFieldError::Internal("CM subfield not unique".into()));
    }
    let (f1, f1_is_cm) = match f1_candidates.first() {
        Some(f) => (*f, true),
        None => (f0, false),
    };

    // restriction Sigma_F -> Sigma_F1
    let a_l = ctx.tower.abs_minpoly();
    let f1_emb = embeddings(&f1.tower, emb.bits)?;
    let prec = emb.bits + 64;
    let restriction: Vec<usize> = if f1.degree == 1 {
        vec![0; tower_degree(emb)]
    } else {
        let sep = min_separation(&f1_emb.theta_values);
        let margin = Float::with_val(prec, &sep / 4u32);
        let mut rest = vec![usize::MAX; tower_degree(emb)];
        for u in 0..ctx.order {
            let j = ctx.perms[u][0];
            let val = eval_qpoly_cx(&f1.gen_in_l, &ctx.roots[u]);
            let t = nearest_root(&f1_emb.theta_values, &val, &margin)
                .ok_or_else(|| NumFieldError::Internal("restriction match failed".into()))?;
            if rest[j] != usize::MAX && rest[j] != t {
                return Err(NumFieldError::Internal(
                    "restriction not well defined".into(),
                ));
            }
            rest[j] = t;
        }
        if rest.iter().any(|&r| r == usize::MAX) {
            return Err(NumFieldError::Internal("restriction incomplete".into()));
        }
        rest
    };

    // quadratic datum D with F1 = F0(sqrt(D))
    let d_datum = if f1_is_cm {
        let h = f0
            .subgroup
            .iter()
            .copied()
            .find(|g| f1.subgroup.binary_search(g).is_err())
            .ok_or_else(|| NumFieldError::Internal("H0 = H1?".into()))?;
        let e1 = &f1.gen_in_l;
        let e1c = ctx.apply(h, e1);
        let b = e1.add(&e1c); // e1 + conj_F0(e1) = -b of x^2+bx+c... sign handled below
        let cc = e1.mul(&e1c).rem(a_l);
        // D = b^2 - 4c for x^2 - (e+e')x + e e'
        let disc = b.mul(&b).rem(a_l).sub(&cc.mul_scalar(&Rational::from(4))).rem(a_l);
        let in_f0 = express_in_gen_powers(a_l, &f0.gen_in_l, f0.degree, &disc)
            .ok_or_else(|| NumFieldError::Internal("D not in F0".into()))?;
        // strip rational square content
        let reduced = strip_square_content(&in_f0);
        Some(f0.tower.from_theta_poly(&reduced))
    } else {
        None
    };

    Ok(Subfields {
        f0: f0.tower.clone(),
        f1: f1.tower.clone(),
        f0_gen_in_l: f0.gen_in_l.clone(),
        f1_gen_in_l: f1.gen_in_l.clone(),
        f1_is_cm,
        restriction,
        d_datum,
    })
}

fn tower_degree(emb: &EmbeddingSet) -> usize {
    emb.theta_values.len()
}

/// Divides a polynomial (the F0-coordinates of D) by the square part of
/// its rational content, keeping the sign.
fn strip_square_content(p: &Poly<Rational>) -> Poly<Rational> {
    if p.is_zero() {
        return p.clone();
    }
    let mut num_gcd = Integer::from(0);
    let mut den_lcm = Integer::from(1);
    for c in p.coeffs() {
        if *c.numer() == 0 {
            continue;
        }
        num_gcd = num_gcd.gcd(&Integer::from(c.numer().clone().abs()));
        den_lcm = den_lcm.lcm(c.denom());
    }
    if num_gcd == 0 {
        return p.clone();
    }
    // content = num_gcd / den_lcm; divide by (square part of content)^..
    let (snum, _) = squarefree_decompose(&num_gcd);
    let (sden, _) = squarefree_decompose(&den_lcm);
    let scale = Rational::from((Integer::from(&sden * &sden), Integer::from(&snum * &snum)));
    p.mul_scalar(&scale)
}

/// CM discriminant surd: Delta_{F1} = sqrt(N_{F0/Q}(D)), Delta_F =
/// Delta_{F1}^{[F:F1]}; the unit surd when F has no CM subfield.
pub fn delta_f(
    f0: &NumberFieldTower,
    d_datum: Option<&FieldElement>,
    rel_degree: u32,
    bits: u32,
) -> Result<SurdValue, NumFieldError> {
    let d = match d_datum {
        None => return Ok(SurdValue::one()),
        Some(d) => d,
    };
    // totally negative check: all embeddings of D are negative reals
    let f0_emb = embeddings(f0, bits)?;
    if !f0_emb.is_totally_real() {
        return Err(NumFieldError::NotTotallyNegative);
    }
    let dpoly = f0.to_theta_poly(d);
    for theta in &f0_emb.theta_values {
        let v = eval_qpoly_cx(&dpoly, theta);
        if !v.re.is_sign_negative() {
            return Err(NumFieldError::NotTotallyNegative);
        }
    }
    let n = f0.norm(d);
    // sign check: N(D) has sign (-1)^[F0:Q]
    let expect_neg = f0.degree() % 2 == 1;
    if (n < 0) != expect_neg {
        return Err(NumFieldError::Internal("norm sign inconsistent".into()));
    }
    let delta_f1 = SurdValue::sqrt_of_rational(&n);
    Ok(delta_f1.pow(rel_degree))
}

/// A square root of an integer located inside the closure, with its
/// exact expression; feeds the group-action sign.
#[derive(Clone, Debug)]
pub struct SqrtInClosure {
    pub radicand: Integer,
    /// None when the radicand is a perfect square (action trivially +1).
    pub expr: Option<Poly<Rational>>,
}

impl GaloisContext {
    /// Locates sqrt(r) inside L, certified by an exact square identity.
    pub fn sqrt_in_closure(&self, r: &Integer) -> Result<SqrtInClosure, NumFieldError> {
        assert!(*r > 0, "radicand must be positive");
        let (_, rad) = squarefree_decompose(r);
        if rad == 1 {
            return Ok(SqrtInClosure {
                radicand: r.clone(),
                expr: None,
            });
        }
        let a_l = self.tower.abs_minpoly();
        let prec = self.bits + 64;
        let pres = Pres {
            a: a_l.clone(),
            roots: self.roots.clone(),
            bits: self.bits,
        };
        let bi = BiPoly::from_rational_poly(&Poly::new(vec![
            Rational::from(-r.clone()),
            Rational::new(),
            Rational::from(1),
        ]));
        let target = Cx::new(
            Float::with_val(prec, r).sqrt(),
            crate::mp::fzero(prec),
        );
        let ext = extend(&pres, &bi, &target)?;
        if ext.full_degree {
            return Err(NumFieldError::SqrtNotInClosure(r.clone()));
        }
        // invert the x_expr map: express new theta in terms of the old one
        let g = express_in_gen_powers(
            &ext.pres.a,
            &ext.x_expr,
            a_l.degree(),
            &Poly::new(vec![Rational::new(), Rational::from(1)]),
        )
        .ok_or_else(|| NumFieldError::Internal("presentation inversion failed".into()))?;
        let mut e = ext.y_expr.compose_mod(&g, a_l);
        // certify: e^2 = r in L
        let sq = e.mul(&e).rem(a_l);
        if sq != Poly::constant(Rational::from(r.clone())) {
            return Err(NumFieldError::Internal("sqrt certification failed".into()));
        }
        // normalize to the principal branch under the distinguished embedding
        let v = eval_qpoly_cx(&e, &self.roots[0]);
        if v.re.is_sign_negative() {
            e = e.neg();
        }
        Ok(SqrtInClosure {
            radicand: r.clone(),
            expr: Some(e),
        })
    }

    /// +1 if sigma_v fixes the located sqrt, -1 if it negates it.
    pub fn sqrt_action(&self, v: usize, s: &SqrtInClosure) -> Result<i32, NumFieldError> {
        let e = match &s.expr {
            None => return Ok(1),
            Some(e) => e,
        };
        let img = self.apply(v, e);
        if img == *e {
            Ok(1)
        } else if img == e.neg() {
            Ok(-1)
        } else {
            Err(NumFieldError::Internal(
                "sqrt image is neither root".into(),
            ))
        }
    }
}
