//! Field-tower construction, embeddings, Galois closures, subfields,
//! and discriminants on the catalog fields.

use hecke_core::numfield::closure::{delta_f, galois_closure, maximal_subfields};
use hecke_core::numfield::embeddings::embeddings;
use hecke_core::numfield::parse::{parse_element, tower_from_json};
use hecke_core::numfield::{
    abs_discriminant_tower, rel_discriminant, NumFieldError, NumberFieldTower, SurdValue,
};
use rug::{Integer, Rational};

const BITS: u32 = 192;

fn q_i() -> NumberFieldTower {
    tower_from_json(r#"{ "layers": [ { "var": "i", "minpoly": "x^2+1" } ] }"#).unwrap()
}

fn quartic() -> NumberFieldTower {
    tower_from_json(
        r#"{ "layers": [ { "var": "i", "minpoly": "x^2+1" },
                         { "var": "t", "minpoly": "x^2-(4+i)" } ] }"#,
    )
    .unwrap()
}

fn s3_field() -> NumberFieldTower {
    tower_from_json(
        r#"{ "layers": [ { "var": "c", "minpoly": "x^3-2" },
                         { "var": "w", "minpoly": "x^2+x+1" } ] }"#,
    )
    .unwrap()
}

fn zeta5() -> NumberFieldTower {
    tower_from_json(r#"{ "layers": [ { "var": "z", "minpoly": "x^4+x^3+x^2+x+1" } ] }"#).unwrap()
}

#[test]
fn build_gaussian_field() {
    let f = q_i();
    assert_eq!(f.degree(), 2);
    let e = embeddings(&f, BITS).unwrap();
    assert_eq!(e.r1(), 0);
    assert_eq!(e.r2(), 1);
    // i^2 = -1 exactly
    let i = f.gen(0);
    let sq = f.mul(&i, &i);
    assert_eq!(sq, f.from_rational(Rational::from(-1)));
}

#[test]
fn build_s3_sextic() {
    let f = s3_field();
    assert_eq!(f.degree(), 6);
    let e = embeddings(&f, BITS).unwrap();
    assert!(e.is_totally_imaginary());
    let ctx = galois_closure(&f, &e).unwrap();
    assert_eq!(ctx.order, 6);
    // non-abelian: some pair fails to commute
    let mut nonabelian = false;
    for v in 0..6 {
        for u in 0..6 {
            if ctx.mult[v][u] != ctx.mult[u][v] {
                nonabelian = true;
            }
        }
    }
    assert!(nonabelian, "S3 closure should be non-abelian");
}

#[test]
fn build_quartic_signature() {
    let f = quartic();
    assert_eq!(f.degree(), 4);
    let e = embeddings(&f, BITS).unwrap();
    assert_eq!((e.r1(), e.r2()), (0, 2));
    assert_eq!(e.count(), 4);
    // conjugation is an involution with no fixed points here
    for j in 0..4 {
        assert_ne!(e.conj[j], j);
        assert_eq!(e.conj[e.conj[j]], j);
    }
}

#[test]
fn reducible_layers_rejected() {
    let r = tower_from_json(r#"{ "layers": [ { "var": "a", "minpoly": "x^2-1" } ] }"#);
    assert!(matches!(r, Err(NumFieldError::ReducibleLayer(_))), "{r:?}");
    let r2 = tower_from_json(
        r#"{ "layers": [ { "var": "i", "minpoly": "x^2+1" },
                          { "var": "j", "minpoly": "x^2+1" } ] }"#,
    );
    assert!(matches!(r2, Err(NumFieldError::ReducibleLayer(_))), "{r2:?}");
}

#[test]
fn degree_cap_enforced() {
    // 2^5 = 32 > 24
    let r = tower_from_json(
        r#"{ "layers": [ { "var": "a", "minpoly": "x^2-2" },
                          { "var": "b", "minpoly": "x^2-3" },
                          { "var": "c", "minpoly": "x^2-5" },
                          { "var": "d", "minpoly": "x^2-7" },
                          { "var": "e", "minpoly": "x^2-11" } ] }"#,
    );
    assert!(matches!(r, Err(NumFieldError::DegreeOverLimit(32))), "{r:?}");
}

#[test]
fn real_quadratic_embeddings() {
    let f = tower_from_json(r#"{ "layers": [ { "var": "s", "minpoly": "x^2-2" } ] }"#).unwrap();
    let e = embeddings(&f, BITS).unwrap();
    assert_eq!((e.r1(), e.r2()), (2, 0));
    for j in 0..2 {
        assert_eq!(e.conj[j], j);
    }
}

#[test]
fn gaussian_closure_is_itself() {
    let f = q_i();
    let e = embeddings(&f, BITS).unwrap();
    let ctx = galois_closure(&f, &e).unwrap();
    assert_eq!(ctx.order, 2);
    assert_eq!(ctx.tower.degree(), 2);
}

#[test]
fn quartic_closure_order_eight() {
    let f = quartic();
    let e = embeddings(&f, BITS).unwrap();
    let ctx = galois_closure(&f, &e).unwrap();
    assert_eq!(ctx.tower.degree(), 8);
    assert_eq!(ctx.order, 8);
    // restriction action on Sigma_F is transitive
    let mut reached = vec![false; 4];
    for v in 0..8 {
        reached[ctx.perms[v][0]] = true;
    }
    assert!(reached.iter().all(|&b| b));
    // sqrt(17) lies in the closure
    let s17 = ctx.sqrt_in_closure(&Integer::from(17)).unwrap();
    assert!(s17.expr.is_some());
    // group axioms: every element has an inverse and the table closes
    for v in 0..8 {
        assert_eq!(ctx.mult[v][ctx.inverse[v]], 0);
    }
}

#[test]
fn sqrt_action_signs_on_quartic() {
    let f = quartic();
    let e = embeddings(&f, BITS).unwrap();
    let ctx = galois_closure(&f, &e).unwrap();
    let s17 = ctx.sqrt_in_closure(&Integer::from(17)).unwrap();

    // Independent oracle: P := t * conj(t) has P^2 = (4+i)(4-i) = 17, so
    // P = ±sqrt(17). sigma_v(P) = sigma_v(t) * sigma_{v·conj}(t), and the
    // images of the generator t under embeddings are tracked numerically;
    // the sign of sigma_v(P)/P is read off the permuted product.
    let gv = |j: usize| e.gen_values[j][1].clone(); // image of t = sqrt(4+i)
    let p0 = gv(ctx.restrict_to_f(0)).mul(&gv(ctx.restrict_to_f(ctx.conj_elt)));
    assert!((p0.re.to_f64().abs() - 17f64.sqrt()).abs() < 1e-30);
    let mut agree = 0;
    let mut minus = 0;
    for v in 0..ctx.order {
        let pv = gv(ctx.restrict_to_f(v)).mul(&gv(ctx.restrict_to_f(ctx.mult[v][ctx.conj_elt])));
        let ratio = pv.re.to_f64() / p0.re.to_f64();
        assert!(pv.im.to_f64().abs() < 1e-30);
        assert!((ratio.abs() - 1.0).abs() < 1e-12);
        let expected = if ratio > 0.0 { 1 } else { -1 };
        let got = ctx.sqrt_action(v, &s17).unwrap();
        assert_eq!(got, expected, "element {v}");
        if got == 1 {
            agree += 1;
        } else {
            minus += 1;
        }
    }
    // sqrt(17) is moved by exactly half of the closure group
    assert_eq!(agree, 4);
    assert_eq!(minus, 4);
    // identity fixes everything; perfect squares are always fixed
    let s4 = ctx.sqrt_in_closure(&Integer::from(4)).unwrap();
    for v in 0..ctx.order {
        assert_eq!(ctx.sqrt_action(v, &s4).unwrap(), 1);
    }
}

#[test]
fn quartic_subfields() {
    let f = quartic();
    let e = embeddings(&f, BITS).unwrap();
    let ctx = galois_closure(&f, &e).unwrap();
    let sub = maximal_subfields(&f, &e, &ctx).unwrap();
    assert_eq!(sub.f0.degree(), 1, "F0 = Q");
    assert_eq!(sub.f1.degree(), 2, "F1 = Q(i)");
    assert!(sub.f1_is_cm);
    // D reduces to -1 for an F1 isomorphic to Q(i)
    let d = sub.d_datum.as_ref().unwrap();
    assert_eq!(d.coords[0], Rational::from(-1));
    // restriction: fibers have size 2 and are constant on conjugate pairs
    let mut fiber = [0usize; 2];
    for j in 0..4 {
        fiber[sub.restriction[j]] += 1;
    }
    assert_eq!(fiber, [2, 2]);
}

#[test]
fn s3_subfields() {
    let f = s3_field();
    let e = embeddings(&f, BITS).unwrap();
    let ctx = galois_closure(&f, &e).unwrap();
    let sub = maximal_subfields(&f, &e, &ctx).unwrap();
    assert_eq!(sub.f0.degree(), 1);
    assert_eq!(sub.f1.degree(), 2, "F1 = Q(omega)");
    assert!(sub.f1_is_cm);
    let d = sub.d_datum.as_ref().unwrap();
    assert_eq!(d.coords[0], Rational::from(-3));
}

#[test]
fn zeta5_subfields() {
    let f = zeta5();
    let e = embeddings(&f, BITS).unwrap();
    let ctx = galois_closure(&f, &e).unwrap();
    assert_eq!(ctx.order, 4, "Q(zeta5) is abelian of degree 4");
    let sub = maximal_subfields(&f, &e, &ctx).unwrap();
    assert_eq!(sub.f0.degree(), 2, "F0 = Q(sqrt 5)");
    assert_eq!(sub.f1.degree(), 4, "F1 = F: the field is CM");
    assert!(sub.f1_is_cm);
    // F0's minimal polynomial has squarefree discriminant part 5
    let mp = sub.f0.abs_minpoly();
    let b = mp.coeff(1).cloned().unwrap_or_default();
    let c = mp.coeff(0).cloned().unwrap_or_default();
    let disc = Rational::from(&b * &b) - Rational::from(4) * c;
    let v = SurdValue::sqrt_of_rational(&disc);
    assert_eq!(v.radicand, 5);
    assert_eq!(v.i_exp, 0);
}

#[test]
fn cm_commutation_on_zeta5() {
    // For a CM field: sigma . conj = conj . sigma on Sigma_F.
    let f = zeta5();
    let e = embeddings(&f, BITS).unwrap();
    let ctx = galois_closure(&f, &e).unwrap();
    for v in 0..ctx.order {
        for j in 0..f.degree() {
            assert_eq!(ctx.perms[v][e.conj[j]], e.conj[ctx.perms[v][j]]);
        }
    }
}

#[test]
fn relative_discriminants_match_paper() {
    // delta_{Q(i)/Q} with basis {1, i} = -4
    let f = q_i();
    let basis = vec![f.one(), f.gen(0)];
    let d = rel_discriminant(&f, 0, &basis).unwrap();
    assert_eq!(d.coords[0], Rational::from(-4));

    // delta_{F/Q(i)} with basis {1, sqrt(4+i)} = 4(4+i) = 16 + 4i
    let f4 = quartic();
    let basis4 = vec![f4.one(), f4.gen(1)];
    let d4 = rel_discriminant(&f4, 1, &basis4).unwrap();
    assert_eq!(d4.coords, vec![Rational::from(16), Rational::from(4)]);

    // trivial case F = K: basis {1} gives 1
    let triv = rel_discriminant(&f, 1, &[f.one()]).unwrap();
    assert_eq!(triv.coords[0], Rational::from(1));
}

#[test]
fn tower_discriminant_formula() {
    // delta_{F/Q} = (-4)^2 * 16 * 17 = 2^8 * 17 = 4352
    let f4 = quartic();
    let qi = q_i();
    let basis_upper = vec![f4.one(), f4.gen(1)];
    let basis_lower = vec![qi.one(), qi.gen(0)];
    let d = abs_discriminant_tower(&f4, 1, &basis_upper, &basis_lower).unwrap();
    assert_eq!(d, Rational::from(4352));

    // Q(i) over Q: -4
    let d2 = abs_discriminant_tower(&qi, 0, &basis_lower, &[]).unwrap();
    assert_eq!(d2, Rational::from(-4));

    // Q over Q: 1
    let q = NumberFieldTower::rationals();
    let d1 = abs_discriminant_tower(&q, 0, &[q.one()], &[]).unwrap();
    assert_eq!(d1, Rational::from(1));
}

#[test]
fn non_basis_rejected() {
    let f = q_i();
    let r = rel_discriminant(&f, 0, &[f.one(), f.from_rational(Rational::from(2))]);
    assert!(matches!(r, Err(NumFieldError::NotABasis)));
}

#[test]
fn delta_f_values() {
    // F1 = F0 (totally real): unit surd
    assert_eq!(delta_f(&NumberFieldTower::rationals(), None, 1, BITS).unwrap(), SurdValue::one());

    // F = F1 = Q(i), D = -1: Delta_F = i
    let q = NumberFieldTower::rationals();
    let d = q.from_rational(Rational::from(-1));
    let v = delta_f(&q, Some(&d), 1, BITS).unwrap();
    assert_eq!((v.i_exp, v.radicand.to_i32().unwrap()), (1, 1));
    assert_eq!(v.rational, Rational::from(1));

    // quartic: Delta_F = i^2 = -1
    let v2 = delta_f(&q, Some(&d), 2, BITS).unwrap();
    assert_eq!((v2.i_exp, v2.radicand.to_i32().unwrap()), (2, 1));

    // not totally negative rejected
    let dpos = q.from_rational(Rational::from(3));
    assert!(matches!(
        delta_f(&q, Some(&dpos), 1, BITS),
        Err(NumFieldError::NotTotallyNegative)
    ));
}

#[test]
fn discriminant_consistency_numeric() {
    // det[Tr(w_i w_j)] equals det[sigma_i(w_j)]^2 numerically (quartic/abs basis)
    let f = quartic();
    let e = embeddings(&f, BITS).unwrap();
    // absolute basis: products of generators: 1, i, t, it
    let basis = vec![
        f.one(),
        f.gen(0),
        f.gen(1),
        f.mul(&f.gen(0), &f.gen(1)),
    ];
    let gram = rel_discriminant(&f, 0, &basis).unwrap();
    let exact = gram.coords[0].to_f64();
    // numerical det[sigma_i(w_j)]
    let n = 4;
    let mut m: Vec<Vec<(f64, f64)>> = vec![vec![(0.0, 0.0); n]; n];
    for (i, _) in e.theta_values.iter().enumerate() {
        for (j, w) in basis.iter().enumerate() {
            let p = f.to_theta_poly(w);
            let mut re = 0.0;
            let mut im = 0.0;
            // Horner at theta value
            for c in p.coeffs().iter().rev() {
                let (tr, ti) = (e.theta_values[i].re.to_f64(), e.theta_values[i].im.to_f64());
                let nre = re * tr - im * ti + c.to_f64();
                im = re * ti + im * tr;
                re = nre;
            }
            m[i][j] = (re, im);
        }
    }
    // complex determinant by elimination
    let det = {
        let mut mm = m.clone();
        let mut det = (1.0f64, 0.0f64);
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&a, &b| {
                    let na = mm[a][col].0.hypot(mm[a][col].1);
                    let nb = mm[b][col].0.hypot(mm[b][col].1);
                    na.partial_cmp(&nb).unwrap()
                })
                .unwrap();
            if piv != col {
                mm.swap(piv, col);
                det = (-det.0, -det.1);
            }
            let (pr, pi) = mm[col][col];
            det = (det.0 * pr - det.1 * pi, det.0 * pi + det.1 * pr);
            let pn = pr * pr + pi * pi;
            for r in (col + 1)..n {
                let (ar, ai) = mm[r][col];
                let fr = (ar * pr + ai * pi) / pn;
                let fi = (ai * pr - ar * pi) / pn;
                for c in col..n {
                    let (br, bi) = mm[col][c];
                    mm[r][c].0 -= fr * br - fi * bi;
                    mm[r][c].1 -= fr * bi + fi * br;
                }
            }
        }
        det
    };
    let det_sq = (det.0 * det.0 - det.1 * det.1, 2.0 * det.0 * det.1);
    assert!(det_sq.1.abs() < 1e-6);
    assert!(
        (det_sq.0 - exact).abs() < 1e-6 * exact.abs().max(1.0),
        "numeric {} vs exact {}",
        det_sq.0,
        exact
    );
}

#[test]
fn parse_element_roundtrip() {
    let f = q_i();
    let e = parse_element(&f, "4+i").unwrap();
    assert_eq!(e.coords, vec![Rational::from(4), Rational::from(1)]);
    let e2 = parse_element(&f, "(1-i)^2 * 3/2").unwrap();
    // (1-i)^2 = -2i; * 3/2 = -3i
    assert_eq!(e2.coords, vec![Rational::from(0), Rational::from(-3)]);
}
