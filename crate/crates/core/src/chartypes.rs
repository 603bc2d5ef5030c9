//! Infinity-type calculus: purity, width, base-change detection,
//! critical sets, the combinatorial window, CM types, and the Galois
//! signature corrections.
//!
//! Exponent vectors are indexed by the canonical embedding order of the
//! field's `EmbeddingSet`. A coefficient-field embedding tag is realized
//! as a Galois relabeling through the closure group (all statements in
//! scope factor through that quotient).

use crate::numfield::closure::{GaloisContext, Subfields};
use crate::numfield::embeddings::{EmbeddingSet, PlaceKind};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CharTypeError {
    #[error("infinity type is not pure")]
    NotPure,
    #[error("exponents are not constant on a restriction fiber")]
    FiberMismatch,
    #[error("combinatorial window violated")]
    WindowViolated,
    #[error("Galois image of the CM type is not a CM type")]
    NotACMTypeAfterAction,
    #[error("exponent count {0} does not match the embedding count {1}")]
    LengthMismatch(usize, usize),
}

/// Integer exponent vector indexed by Sigma_F.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfinityType {
    pub exps: Vec<i64>,
}

impl InfinityType {
    pub fn new(exps: Vec<i64>) -> Self {
        InfinityType { exps }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }
}

/// Reference embedding of the coefficient field, or a change of it by a
/// closure-group element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbeddingTag {
    Reference,
    Galois(usize),
}

impl EmbeddingTag {
    pub fn element(&self) -> usize {
        match self {
            EmbeddingTag::Reference => 0,
            EmbeddingTag::Galois(g) => *g,
        }
    }
}

/// Relabels the exponents through iota: (^g n)_eta = n_{g^-1 eta}.
pub fn relabel(n: &InfinityType, iota: &EmbeddingTag, ctx: &GaloisContext) -> InfinityType {
    match iota {
        EmbeddingTag::Reference => n.clone(),
        EmbeddingTag::Galois(g) => {
            let ginv = ctx.inverse[*g];
            let perm = &ctx.perms[ginv];
            InfinityType::new((0..n.len()).map(|j| n.exps[perm[j]]).collect())
        }
    }
}

#[derive(Clone, Debug)]
pub struct PurityResult {
    pub pure: bool,
    /// Purity weight; present iff pure.
    pub weight: Option<i64>,
    /// (group element, embedding index) violating purity; present iff impure.
    pub witness: Option<(usize, usize)>,
}

/// Checks the purity condition over every closure-group element: with a
/// real place, all exponents equal; totally imaginary, n_{g tau} +
/// n_{g conj(tau)} constant.
pub fn purity_check(
    n: &InfinityType,
    emb: &EmbeddingSet,
    ctx: &GaloisContext,
) -> Result<PurityResult, CharTypeError> {
    if n.len() != emb.count() {
        return Err(CharTypeError::LengthMismatch(n.len(), emb.count()));
    }
    if emb.r1() > 0 {
        let w = n.exps[0];
        for (j, &e) in n.exps.iter().enumerate() {
            if e != w {
                return Ok(PurityResult {
                    pure: false,
                    weight: None,
                    witness: Some((0, j)),
                });
            }
        }
        return Ok(PurityResult {
            pure: true,
            weight: Some(w),
            witness: None,
        });
    }
    let w = n.exps[0] + n.exps[emb.conj[0]];
    for v in 0..ctx.order {
        let perm = &ctx.perms[v];
        for j in 0..n.len() {
            if n.exps[perm[j]] + n.exps[perm[emb.conj[j]]] != w {
                return Ok(PurityResult {
                    pure: false,
                    weight: None,
                    witness: Some((v, j)),
                });
            }
        }
    }
    Ok(PurityResult {
        pure: true,
        weight: Some(w),
        witness: None,
    })
}

/// Weak purity: conjugate-pair sums are constant under the fixed
/// labeling. Necessary for purity; all the width/critical-set formulas
/// need exactly this.
fn pair_weight(n: &InfinityType, emb: &EmbeddingSet) -> Result<i64, CharTypeError> {
    if n.len() != emb.count() {
        return Err(CharTypeError::LengthMismatch(n.len(), emb.count()));
    }
    let w = n.exps[0] + n.exps[emb.conj[0]];
    for j in 0..n.len() {
        if n.exps[j] + n.exps[emb.conj[j]] != w {
            return Err(CharTypeError::NotPure);
        }
    }
    Ok(w)
}

/// Width: min over conjugate pairs of |n_eta - n_{conj eta}|
/// (totally imaginary fields).
pub fn width(n: &InfinityType, emb: &EmbeddingSet) -> Result<u64, CharTypeError> {
    if !emb.is_totally_imaginary() {
        return Err(CharTypeError::NotPure);
    }
    pair_weight(n, emb)?;
    Ok(emb
        .places
        .iter()
        .map(|p| {
            let j = p.members[0];
            n.exps[j].abs_diff(n.exps[emb.conj[j]])
        })
        .min()
        .expect("at least one place"))
}

/// If the exponents are constant on restriction fibers, the descended
/// type over F1; `FiberMismatch` otherwise (impossible for pure types).
pub fn is_base_change(
    n: &InfinityType,
    sub: &Subfields,
    f1_count: usize,
) -> Result<InfinityType, CharTypeError> {
    let mut m: Vec<Option<i64>> = vec![None; f1_count];
    for (j, &e) in n.exps.iter().enumerate() {
        let t = sub.restriction[j];
        match m[t] {
            None => m[t] = Some(e),
            Some(prev) if prev == e => {}
            Some(_) => return Err(CharTypeError::FiberMismatch),
        }
    }
    Ok(InfinityType::new(
        m.into_iter().map(|v| v.expect("fiber covered")).collect(),
    ))
}

/// Pulls a type over F1 back to F through the restriction map.
pub fn base_change(m: &InfinityType, sub: &Subfields, f_count: usize) -> InfinityType {
    InfinityType::new(
        (0..f_count)
            .map(|j| m.exps[sub.restriction[j]])
            .collect(),
    )
}

/// Infinity type of a complex-valued Hecke character together with the
/// per-real-place parity bits needed by the archimedean factors.
#[derive(Clone, Debug)]
pub struct AnalyticType {
    pub exps: InfinityType,
    /// One bit per real place, in place order.
    pub eps: Vec<u8>,
}

/// The analytic type of the iota-realization of a character with
/// algebraic exponents `n` and Tate twist `tate`: -(relabeled n) + tate.
pub fn analytic_type_of(
    n: &InfinityType,
    tate: i64,
    iota: &EmbeddingTag,
    ctx: &GaloisContext,
) -> InfinityType {
    let rel = relabel(n, iota, ctx);
    InfinityType::new(rel.exps.iter().map(|&e| -e + tate).collect())
}

/// Critical integers of the completed L-function for an analytic type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CriticalSet {
    Empty,
    /// Totally imaginary: the integers in [lo, hi]; cardinality = width.
    Interval { lo: i64, hi: i64 },
    /// Totally real, all eps = 0: {m <= -w-1, m odd-offset} u {m >= -w+2, even-offset}.
    EvenRays { w: i64 },
    /// Totally real, all eps = 1: {m <= -w, even-offset} u {m >= -w+1, odd-offset}.
    OddRays { w: i64 },
}

impl CriticalSet {
    pub fn contains(&self, m: i64) -> bool {
        match self {
            CriticalSet::Empty => false,
            CriticalSet::Interval { lo, hi } => *lo <= m && m <= *hi,
            CriticalSet::EvenRays { w } => {
                (m <= -w - 1 && (m + w + 1) % 2 == 0) || (m >= -w + 2 && (m + w) % 2 == 0)
            }
            CriticalSet::OddRays { w } => {
                (m <= -*w && (m + w) % 2 == 0) || (m >= -w + 1 && (m + w + 1) % 2 == 0)
            }
        }
    }

    pub fn cardinality(&self) -> Option<u64> {
        match self {
            CriticalSet::Empty => Some(0),
            CriticalSet::Interval { lo, hi } => Some((hi - lo + 1).max(0) as u64),
            _ => None,
        }
    }

    /// Center of symmetry, as twice its value (an integer).
    pub fn center_doubled(&self) -> Option<i64> {
        match self {
            CriticalSet::Empty => None,
            CriticalSet::Interval { lo, hi } => Some(lo + hi),
            CriticalSet::EvenRays { w } | CriticalSet::OddRays { w } => Some(1 - 2 * w),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, CriticalSet::Empty)
            || matches!(self, CriticalSet::Interval { lo, hi } if lo > hi)
    }
}

/// Critical set per the three archimedean cases.
pub fn critical_set(at: &AnalyticType, emb: &EmbeddingSet) -> Result<CriticalSet, CharTypeError> {
    let n = &at.exps;
    if n.len() != emb.count() {
        return Err(CharTypeError::LengthMismatch(n.len(), emb.count()));
    }
    let (r1, r2) = (emb.r1(), emb.r2());
    if r1 > 0 && r2 > 0 {
        return Ok(CriticalSet::Empty);
    }
    if r2 == 0 {
        // totally real: all exponents equal
        let w = n.exps[0];
        if n.exps.iter().any(|&e| e != w) {
            return Err(CharTypeError::NotPure);
        }
        if at.eps.len() != r1 {
            return Err(CharTypeError::LengthMismatch(at.eps.len(), r1));
        }
        let all0 = at.eps.iter().all(|&e| e == 0);
        let all1 = at.eps.iter().all(|&e| e == 1);
        return Ok(if all0 {
            CriticalSet::EvenRays { w }
        } else if all1 {
            CriticalSet::OddRays { w }
        } else {
            CriticalSet::Empty
        });
    }
    // totally imaginary
    let w = pair_weight(n, emb)?;
    let l = width(n, emb)? as i64;
    // [1 - w/2 - l/2, -w/2 + l/2]; w = l mod 2 makes these integers
    let lo = (2 - w - l) / 2;
    let hi = (l - w) / 2;
    if l == 0 {
        return Ok(CriticalSet::Empty);
    }
    Ok(CriticalSet::Interval { lo, hi })
}

/// The combinatorial window -l <= w <= l - 4.
pub fn combinatorial_window(n: &InfinityType, emb: &EmbeddingSet) -> Result<bool, CharTypeError> {
    let w = pair_weight(n, emb)?;
    let l = width(n, emb)? as i64;
    Ok(-l <= w && w <= l - 4)
}

/// CM type attached to a pure type in the window: one embedding per
/// conjugate pair, the one with exponent <= -2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMTypeData {
    /// phi[p] = the member of place p lying in the CM type (n <= -2).
    pub phi: Vec<usize>,
    /// The complementary CM type (n >= 0), per place.
    pub phi_tilde: Vec<usize>,
}

pub fn cm_type(n: &InfinityType, emb: &EmbeddingSet) -> Result<CMTypeData, CharTypeError> {
    if !combinatorial_window(n, emb)? {
        return Err(CharTypeError::WindowViolated);
    }
    let mut phi = Vec::with_capacity(emb.places.len());
    let mut phi_tilde = Vec::with_capacity(emb.places.len());
    for p in &emb.places {
        debug_assert_eq!(p.kind, PlaceKind::Complex);
        let j = p.members[0];
        let jc = emb.conj[j];
        let (lo, hi) = if n.exps[j] <= -2 { (j, jc) } else { (jc, j) };
        if !(n.exps[lo] <= -2 && n.exps[hi] >= 0) {
            return Err(CharTypeError::WindowViolated);
        }
        phi.push(lo);
        phi_tilde.push(hi);
    }
    Ok(CMTypeData { phi, phi_tilde })
}

fn perm_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

fn signature_side(
    n: &InfinityType,
    iota: &EmbeddingTag,
    v: usize,
    emb: &EmbeddingSet,
    ctx: &GaloisContext,
    tilde: bool,
) -> Result<i32, CharTypeError> {
    let n_i = relabel(n, iota, ctx);
    let cm_i = cm_type(&n_i, emb)?;
    let next_tag = EmbeddingTag::Galois(ctx.mult[v][iota.element()]);
    let n_vi = relabel(n, &next_tag, ctx);
    let cm_vi = cm_type(&n_vi, emb)?;
    let (src, dst) = if tilde {
        (&cm_i.phi_tilde, &cm_vi.phi_tilde)
    } else {
        (&cm_i.phi, &cm_vi.phi)
    };
    let perm_v = &ctx.perms[v];
    let mut pi = vec![usize::MAX; emb.places.len()];
    for (p, &eta) in src.iter().enumerate() {
        let eta2 = perm_v[eta];
        let p2 = emb.place_of[eta2];
        if dst[p2] != eta2 {
            return Err(CharTypeError::NotACMTypeAfterAction);
        }
        pi[p] = p2;
    }
    Ok(perm_sign(&pi))
}

/// epsilon_{n,iota}(sigma_v): the sign of the S_infty permutation induced
/// by the Galois action on the CM type.
pub fn signature(
    n: &InfinityType,
    iota: &EmbeddingTag,
    v: usize,
    emb: &EmbeddingSet,
    ctx: &GaloisContext,
) -> Result<i32, CharTypeError> {
    signature_side(n, iota, v, emb, ctx, false)
}

/// epsilon for the complementary CM type.
pub fn signature_tilde(
    n: &InfinityType,
    iota: &EmbeddingTag,
    v: usize,
    emb: &EmbeddingSet,
    ctx: &GaloisContext,
) -> Result<i32, CharTypeError> {
    signature_side(n, iota, v, emb, ctx, true)
}

/// The correction sign of the main reciprocity law:
/// epsilon_{n,iota}(v) * epsilon_{ntilde,iota}(v).
pub fn signature_product(
    n: &InfinityType,
    iota: &EmbeddingTag,
    v: usize,
    emb: &EmbeddingSet,
    ctx: &GaloisContext,
) -> Result<i32, CharTypeError> {
    Ok(signature(n, iota, v, emb, ctx)? * signature_tilde(n, iota, v, emb, ctx)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perm_sign_basics() {
        assert_eq!(perm_sign(&[0, 1, 2]), 1);
        assert_eq!(perm_sign(&[1, 0, 2]), -1);
        assert_eq!(perm_sign(&[1, 2, 0]), 1);
        assert_eq!(perm_sign(&[1, 0, 3, 2]), 1);
    }

    #[test]
    fn critical_rays_match_zeta_and_odd_dirichlet() {
        // w = 0, eps = 0: the Riemann zeta critical set
        let even = CriticalSet::EvenRays { w: 0 };
        for m in [-1i64, -3, -5, 2, 4, 6] {
            assert!(even.contains(m), "{m}");
        }
        for m in [0i64, 1, 3, -2, -4] {
            assert!(!even.contains(m), "{m}");
        }
        // w = 0, eps = 1: odd Dirichlet character
        let odd = CriticalSet::OddRays { w: 0 };
        for m in [0i64, -2, -4, 1, 3, 5] {
            assert!(odd.contains(m), "{m}");
        }
        for m in [-1i64, -3, 2, 4] {
            assert!(!odd.contains(m), "{m}");
        }
        assert_eq!(even.center_doubled(), Some(1));
    }
}
