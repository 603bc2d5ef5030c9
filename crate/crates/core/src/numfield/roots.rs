//! Complex root isolation for exact polynomials at arbitrary precision.
//!
//! Durand–Kerner iteration with deterministic seeds; callers check the
//! achieved pairwise separation and re-run at doubled precision when it
//! is insufficient.

use crate::mp::{ffrom_f64, ffrom_q, fzero, horner, pi, Cx};
use crate::poly::Poly;
use rug::Float;
use rug::Rational;

/// All complex roots of a polynomial with complex coefficients
/// (constant term first, leading coefficient nonzero). Deterministic.
pub fn complex_roots(coeffs: &[Cx], bits: u32) -> Vec<Cx> {
    let n = coeffs.len() - 1;
    assert!(n >= 1, "constant polynomial has no roots");
    let prec = bits + 64;

    // Monic normalization.
    let lead = coeffs[n].clone();
    let monic: Vec<Cx> = coeffs.iter().map(|c| c.div(&lead)).collect();

    if n == 1 {
        return vec![monic[0].neg()];
    }

    // Cauchy-style initial radius.
    let mut radius = ffrom_f64(prec, 1.0);
    for c in monic.iter().take(n) {
        let a = c.abs();
        if a > radius {
            radius = a;
        }
    }
    radius = Float::with_val(prec, &radius + 1u32);

    // Seeds on a slightly eccentric spiral to break symmetries.
    let two_pi = Float::with_val(prec, pi(prec) * 2u32);
    let mut z: Vec<Cx> = (0..n)
        .map(|j| {
            let frac = (j as f64 + 0.28) / n as f64 + 0.001 * j as f64;
            let ang = Float::with_val(prec, &two_pi * ffrom_f64(prec, frac));
            let scale = ffrom_f64(prec, 0.65 + 0.1 * ((j % 5) as f64) / 5.0);
            let r = Float::with_val(prec, &radius * &scale);
            Cx::new(
                Float::with_val(prec, ang.clone().cos() * &r),
                Float::with_val(prec, ang.sin() * &r),
            )
        })
        .collect();

    let tol = Float::with_val(prec, Float::i_exp(1, -((bits + 16) as i32)));
    let max_iter = 64 + 16 * bits as usize;
    for _ in 0..max_iter {
        let mut max_step = fzero(prec);
        for j in 0..n {
            let pj = horner(&monic, &z[j]);
            let mut denom = Cx::one(prec);
            for k in 0..n {
                if k != j {
                    denom = denom.mul(&z[j].sub(&z[k]));
                }
            }
            let step = pj.div(&denom);
            let st = step.abs();
            if st > max_step {
                max_step = st;
            }
            z[j] = z[j].sub(&step);
        }
        let scaled_tol = Float::with_val(prec, &tol * &radius);
        if max_step < scaled_tol {
            break;
        }
    }
    z
}

/// Roots of a rational polynomial at the given precision.
pub fn rational_poly_roots(p: &Poly<Rational>, bits: u32) -> Vec<Cx> {
    let prec = bits + 64;
    let coeffs: Vec<Cx> = p
        .coeffs()
        .iter()
        .map(|q| Cx::new(ffrom_q(prec, q), fzero(prec)))
        .collect();
    complex_roots(&coeffs, bits)
}

/// Minimum pairwise distance among the points.
pub fn min_separation(roots: &[Cx]) -> Float {
    let prec = roots.first().map(|r| r.prec()).unwrap_or(64);
    let mut sep = Float::with_val(prec, f64::INFINITY);
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            let d = roots[i].dist(&roots[j]);
            if d < sep {
                sep = d;
            }
        }
    }
    sep
}

/// Index of the root nearest to `target`; `None` when the nearest is not
/// clearly separated (within `margin`) from the runner-up.
pub fn nearest_root(roots: &[Cx], target: &Cx, margin: &Float) -> Option<usize> {
    let mut best = 0usize;
    let mut best_d: Option<Float> = None;
    let mut second: Option<Float> = None;
    for (i, r) in roots.iter().enumerate() {
        let d = r.dist(target);
        match &best_d {
            None => best_d = Some(d),
            Some(b) => {
                if d < *b {
                    second = best_d.take();
                    best_d = Some(d);
                    best = i;
                } else if second.as_ref().map_or(true, |s| d < *s) {
                    second = Some(d);
                }
            }
        }
    }
    let bd = best_d?;
    if bd > *margin {
        return None;
    }
    if let Some(s) = second {
        if s < Float::with_val(margin.prec(), margin * 2u32) {
            return None;
        }
    }
    Some(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::qpoly;

    #[test]
    fn quartic_roots() {
        // x^4 - 8x^2 + 17, roots ±sqrt(4±i)
        let p = qpoly(&[17, 0, -8, 0, 1]);
        let roots = rational_poly_roots(&p, 192);
        assert_eq!(roots.len(), 4);
        for r in &roots {
            let v = horner(
                &p.coeffs()
                    .iter()
                    .map(|q| Cx::new(ffrom_q(256, q), fzero(256)))
                    .collect::<Vec<_>>(),
                r,
            );
            assert!(v.abs().to_f64() < 1e-40, "residual {:e}", v.abs().to_f64());
        }
        let sep = min_separation(&roots);
        assert!(sep.to_f64() > 0.4);
    }

    #[test]
    fn high_multiplicity_cluster_converges() {
        // (x^2+1)(x^2+4)(x-3)
        let p = qpoly(&[1, 0, 1]).mul(&qpoly(&[4, 0, 1])).mul(&qpoly(&[-3, 1]));
        let roots = rational_poly_roots(&p, 128);
        assert_eq!(roots.len(), 5);
        let mut reals: Vec<f64> = roots
            .iter()
            .filter(|r| r.im.to_f64().abs() < 1e-20)
            .map(|r| r.re.to_f64())
            .collect();
        reals.sort_by(f64::total_cmp);
        assert_eq!(reals.len(), 1);
        assert!((reals[0] - 3.0).abs() < 1e-25);
    }
}
