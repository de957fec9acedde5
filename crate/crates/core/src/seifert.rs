//! Seifert matrices of braid closures from the disks-and-bands surface.
//!
//! The surface has one disk per strand and one band per letter. A basis of its
//! first homology is given by the loops through consecutive bands of the same
//! generator, so each generator used `t` times contributes `t − 1` basis cycles.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::braid::{closure_info, BraidWord, Letter};
use crate::invariants::inertia::exact_inertia_and_det;
use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertData {
    pub matrix: IntMatrix,
    pub strands: usize,
    pub crossings: usize,
    pub components: usize,
    /// Connected pieces of the band surface; idle strands count as disks.
    pub surface_parts: usize,
    pub euler_characteristic: i64,
    /// Genus of the band surface (sum over its pieces).
    pub genus: Ratio<i64>,
}

/// Splits a word into the sub-words living on maximal runs of used generators.
///
/// Returns `(first_strand, strand_count, letters)` with indices shifted so each
/// part starts at generator 1. Strands with no adjacent generator become
/// one-strand parts with no letters.
pub fn split_parts(b: &BraidWord) -> Vec<(usize, usize, Vec<Letter>)> {
    let k = b.strands();
    let mut used = vec![false; k];
    for l in b.letters() {
        used[l.index] = true;
    }
    // Strand s (1-based) joins s+1 when generator s is used.
    let mut parts = Vec::new();
    let mut start = 1;
    for s in 1..=k {
        if s == k || !used[s] {
            parts.push((start, s - start + 1));
            start = s + 1;
        }
    }
    parts
        .into_iter()
        .map(|(first, count)| {
            let last = first + count - 1;
            let letters = b
                .letters()
                .iter()
                .filter(|l| l.index >= first && l.index < last)
                .map(|l| Letter { index: l.index - first + 1, sign: l.sign })
                .collect();
            (first, count, letters)
        })
        .collect()
}

/// Seifert matrix of the closure of a word whose used generators form one run.
fn connected_matrix(x: &[Letter]) -> IntMatrix {
    if x.len() < 2 {
        return IntMatrix::zeros(0);
    }
    let hl = x.len() - 1;
    // next[j]: position of the next letter with the same generator, 0 when none.
    let next: Vec<usize> = (0..hl)
        .map(|j| (j + 1..x.len()).find(|&i| x[i].index == x[j].index).unwrap_or(0))
        .collect();
    let basis: Vec<usize> = (0..hl).filter(|&i| next[i] != 0).collect();
    let mut slot = vec![usize::MAX; hl];
    for (p, &i) in basis.iter().enumerate() {
        slot[i] = p;
    }
    let mut v = IntMatrix::zeros(basis.len());
    let s = |l: Letter| l.signed();
    for &i in &basis {
        let hi = next[i];
        let (pi, gi) = (slot[i], x[i].index as i64);
        v.set(pi, pi, -(s(x[i]) + s(x[hi])).signum());
        for j in i + 1..hl {
            if hi < j {
                break;
            }
            if slot[j] == usize::MAX || hi > next[j] {
                continue;
            }
            let (pj, gj) = (slot[j], x[j].index as i64);
            if hi == j {
                if x[j].sign.value() > 0 {
                    v.set(pi, pj, 1);
                } else {
                    v.set(pj, pi, -1);
                }
            } else if gi - gj == 1 {
                v.set(pj, pi, -1);
            } else if gj - gi == 1 {
                v.set(pi, pj, 1);
            }
        }
    }
    v
}

pub fn seifert_matrix(b: &BraidWord) -> SeifertData {
    let info = closure_info(b);
    let parts = split_parts(b);
    let blocks: Vec<IntMatrix> = parts.iter().map(|(_, _, letters)| connected_matrix(letters)).collect();
    let euler = b.strands() as i64 - b.len() as i64;
    let twice_genus = 2 * parts.len() as i64 - info.components as i64 - euler;
    SeifertData {
        matrix: IntMatrix::block_diagonal(&blocks),
        strands: b.strands(),
        crossings: b.len(),
        components: info.components,
        surface_parts: parts.len(),
        euler_characteristic: euler,
        genus: Ratio::new(twice_genus, 2),
    }
}

/// Slice genus information attached to a braid word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SliceGenus {
    /// Positive braid with connected band surface: the surface genus is optimal.
    Exact(Ratio<i64>),
    /// Only the band-surface bound is known.
    UpperBound(Ratio<i64>),
}

impl SliceGenus {
    pub fn value(self) -> Ratio<i64> {
        match self {
            SliceGenus::Exact(g) | SliceGenus::UpperBound(g) => g,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, SliceGenus::Exact(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusData {
    pub euler_characteristic: i64,
    pub genus: Ratio<i64>,
    pub slice_genus: SliceGenus,
}

pub fn genus_data(b: &BraidWord) -> GenusData {
    let info = closure_info(b);
    let parts = split_parts(b).len();
    let euler = b.strands() as i64 - b.len() as i64;
    let genus = Ratio::new(2 * parts as i64 - info.components as i64 - euler, 2);
    let slice_genus = if b.is_positive() && parts == 1 {
        SliceGenus::Exact(genus)
    } else {
        SliceGenus::UpperBound(genus)
    };
    GenusData { euler_characteristic: euler, genus, slice_genus }
}

/// `|det(V + Vᵀ)|`, the link determinant.
pub fn alexander_det(v: &IntMatrix) -> BigInt {
    let (_, det) = exact_inertia_and_det(&v.plus_transpose(1)).expect("V + Vᵀ is symmetric");
    det.abs()
}
