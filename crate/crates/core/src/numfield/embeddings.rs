//! Numerical embeddings of a tower into C, with conjugation pairing and
//! a canonical ordering of the archimedean places.
//!
//! Ordering convention: places are sorted by (Re, Im) of the primitive
//! element's image under the representative embedding with non-negative
//! imaginary part. Within a complex place the representative comes
//! first, its conjugate second; signature computations downstream do not
//! depend on this choice, but fixing it makes every report reproducible.

use crate::mp::Cx;
use crate::numfield::extend::eval_qpoly_cx;
use crate::numfield::roots::{min_separation, rational_poly_roots};
use crate::numfield::{NumFieldError, NumberFieldTower};
use rug::Float;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaceKind {
    Real,
    Complex,
}

#[derive(Clone, Debug)]
pub struct Place {
    pub kind: PlaceKind,
    /// Embedding index of the representative (Im >= 0).
    pub rep: usize,
    /// Member embedding indices (1 for real, 2 for complex).
    pub members: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct EmbeddingSet {
    pub bits: u32,
    /// theta image per embedding, in canonical order.
    pub theta_values: Vec<Cx>,
    /// generator images per embedding.
    pub gen_values: Vec<Vec<Cx>>,
    /// conjugation involution on embedding indices.
    pub conj: Vec<usize>,
    /// canonical place list.
    pub places: Vec<Place>,
    /// embedding index -> place index.
    pub place_of: Vec<usize>,
    /// certified minimum pairwise separation of theta images.
    pub separation: Float,
}

impl EmbeddingSet {
    pub fn count(&self) -> usize {
        self.theta_values.len()
    }

    pub fn r1(&self) -> usize {
        self.places
            .iter()
            .filter(|p| p.kind == PlaceKind::Real)
            .count()
    }

    pub fn r2(&self) -> usize {
        self.places
            .iter()
            .filter(|p| p.kind == PlaceKind::Complex)
            .count()
    }

    pub fn is_totally_real(&self) -> bool {
        self.r2() == 0
    }

    pub fn is_totally_imaginary(&self) -> bool {
        self.r1() == 0
    }
}

/// Computes all embeddings of the tower at `bits` precision, doubling up
/// to 8 times if the root separation is insufficient.
pub fn embeddings(
    tower: &NumberFieldTower,
    bits: u32,
) -> Result<EmbeddingSet, NumFieldError> {
    assert!(bits >= 64, "precision must be at least 64 bits");
    let mut attempt = bits;
    for _ in 0..=8 {
        if let Some(set) = try_embeddings(tower, attempt) {
            return Ok(set);
        }
        attempt *= 2;
    }
    Err(NumFieldError::PrecisionExhausted(8))
}

fn try_embeddings(tower: &NumberFieldTower, bits: u32) -> Option<EmbeddingSet> {
    let prec = bits + 64;
    let d = tower.degree();
    let raw_roots = if d == 1 {
        vec![Cx::zero(prec)]
    } else {
        rational_poly_roots(tower.abs_minpoly(), bits)
    };
    if raw_roots.len() != d {
        return None;
    }
    let sep = if d > 1 {
        min_separation(&raw_roots)
    } else {
        Float::with_val(prec, 1)
    };
    let floor = Float::with_val(prec, Float::i_exp(1, -((bits as i32) / 2)));
    if sep < floor {
        return None;
    }
    let half_sep = Float::with_val(prec, &sep / 2u32);

    // conjugation pairing on raw indices
    let mut conj_raw = vec![usize::MAX; d];
    for (i, r) in raw_roots.iter().enumerate() {
        let rc = r.conj();
        let mut found = usize::MAX;
        for (j, s) in raw_roots.iter().enumerate() {
            if rc.dist(s) < half_sep {
                found = j;
                break;
            }
        }
        if found == usize::MAX {
            return None;
        }
        conj_raw[i] = found;
    }
    for (i, &j) in conj_raw.iter().enumerate() {
        if conj_raw[j] != i {
            return None;
        }
    }

    // group into places; representative has Im >= 0
    let mut place_groups: Vec<(PlaceKind, usize, Vec<usize>)> = Vec::new();
    let mut seen = vec![false; d];
    for i in 0..d {
        if seen[i] {
            continue;
        }
        let j = conj_raw[i];
        seen[i] = true;
        if j == i {
            place_groups.push((PlaceKind::Real, i, vec![i]));
        } else {
            seen[j] = true;
            let rep = if raw_roots[i].im.is_sign_positive() { i } else { j };
            let other = conj_raw[rep];
            place_groups.push((PlaceKind::Complex, rep, vec![rep, other]));
        }
    }
    // canonical order by (Re, Im) of theta at representative
    place_groups.sort_by(|a, b| {
        let ra = &raw_roots[a.1];
        let rb = &raw_roots[b.1];
        ra.re
            .partial_cmp(&rb.re)
            .unwrap()
            .then(ra.im.partial_cmp(&rb.im).unwrap())
    });

    // final embedding order: for each place, rep then conjugate
    let mut order: Vec<usize> = Vec::with_capacity(d);
    let mut places = Vec::with_capacity(place_groups.len());
    for (kind, _, members) in &place_groups {
        let base = order.len();
        for &m in members {
            order.push(m);
        }
        places.push(Place {
            kind: *kind,
            rep: base,
            members: (base..base + members.len()).collect(),
        });
    }
    let theta_values: Vec<Cx> = order.iter().map(|&i| raw_roots[i].clone()).collect();
    let inv_order: Vec<usize> = {
        let mut inv = vec![0usize; d];
        for (new, &old) in order.iter().enumerate() {
            inv[old] = new;
        }
        inv
    };
    let conj: Vec<usize> = order.iter().map(|&old| inv_order[conj_raw[old]]).collect();
    let mut place_of = vec![0usize; d];
    for (pi, p) in places.iter().enumerate() {
        for &m in &p.members {
            place_of[m] = pi;
        }
    }

    let gen_values: Vec<Vec<Cx>> = theta_values
        .iter()
        .map(|theta| {
            tower
                .gens_in_theta()
                .iter()
                .map(|g| eval_qpoly_cx(g, theta))
                .collect()
        })
        .collect();

    // sanity: r1 + 2 r2 = d
    let r1 = places.iter().filter(|p| p.kind == PlaceKind::Real).count();
    let r2 = places.len() - r1;
    if r1 + 2 * r2 != d {
        return None;
    }

    Some(EmbeddingSet {
        bits,
        theta_values,
        gen_values,
        conj,
        places,
        place_of,
        separation: sep,
    })
}
