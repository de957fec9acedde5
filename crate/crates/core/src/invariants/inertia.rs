//! Inertia of symmetric and Hermitian matrices.
//!
//! The exact path is a sparse, fraction-free symmetric elimination: entries are
//! kept as Bareiss numerators with the step at which they were last touched, and
//! rescaled lazily by the ratio of leading minors when read. Pivots are chosen by
//! minimum degree; when every remaining diagonal entry is zero a 2×2 block pivot
//! is taken, which contributes one positive and one negative eigenvalue.

use std::collections::{BTreeSet, HashMap};

use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::InvariantError;
use crate::matrix::IntMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inertia {
    pub positives: usize,
    pub negatives: usize,
    pub zeros: usize,
    pub ambiguous: usize,
    pub tolerance: f64,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.positives as i64 - self.negatives as i64
    }

    pub fn dim(&self) -> usize {
        self.positives + self.negatives + self.zeros + self.ambiguous
    }
}

pub fn inertia_symmetric_exact(m: &IntMatrix) -> Result<Inertia, InvariantError> {
    exact_inertia_and_det(m).map(|(i, _)| i)
}

struct Entry {
    num: BigInt,
    stamp: usize,
}

struct Elimination {
    entries: HashMap<(usize, usize), Entry>,
    adj: Vec<BTreeSet<usize>>,
    active: BTreeSet<usize>,
    minors: Vec<BigInt>,
}

fn key(i: usize, j: usize) -> (usize, usize) {
    if i <= j {
        (i, j)
    } else {
        (j, i)
    }
}

impl Elimination {
    fn step(&self) -> usize {
        self.minors.len() - 1
    }

    /// Current value of entry (i, j), or zero.
    fn value(&self, i: usize, j: usize) -> BigInt {
        match self.entries.get(&key(i, j)) {
            None => BigInt::zero(),
            Some(e) => {
                let k = self.step();
                if e.stamp == k {
                    e.num.clone()
                } else {
                    &e.num * &self.minors[k] / &self.minors[e.stamp]
                }
            }
        }
    }

    fn store(&mut self, i: usize, j: usize, v: BigInt, stamp: usize) {
        if v.is_zero() {
            self.entries.remove(&key(i, j));
            if i != j {
                self.adj[i].remove(&j);
                self.adj[j].remove(&i);
            }
        } else {
            self.entries.insert(key(i, j), Entry { num: v, stamp });
            if i != j {
                self.adj[i].insert(j);
                self.adj[j].insert(i);
            }
        }
    }

    fn retire(&mut self, p: usize) {
        let nbrs: Vec<usize> = self.adj[p].iter().copied().collect();
        for i in nbrs {
            self.entries.remove(&key(p, i));
            self.adj[i].remove(&p);
        }
        self.adj[p].clear();
        self.entries.remove(&(p, p));
        self.active.remove(&p);
    }

    fn pivot1(&mut self, p: usize) -> BigInt {
        let k = self.step();
        let piv = self.value(p, p);
        let nbrs: Vec<usize> = self.adj[p].iter().copied().collect();
        let col: Vec<BigInt> = nbrs.iter().map(|&i| self.value(p, i)).collect();
        let dk = self.minors[k].clone();
        let mut updates = Vec::new();
        for a in 0..nbrs.len() {
            for b in a..nbrs.len() {
                let (i, j) = (nbrs[a], nbrs[b]);
                let old = self.value(i, j);
                let new = (&piv * &old - &col[a] * &col[b]) / &dk;
                updates.push((i, j, new));
            }
        }
        self.retire(p);
        for (i, j, v) in updates {
            self.store(i, j, v, k + 1);
        }
        self.minors.push(piv.clone());
        piv
    }

    fn pivot2(&mut self, p: usize, q: usize) {
        let k = self.step();
        let (a, b, d) = (self.value(p, p), self.value(p, q), self.value(q, q));
        let mut nbrs: BTreeSet<usize> = self.adj[p].union(&self.adj[q]).copied().collect();
        nbrs.remove(&p);
        nbrs.remove(&q);
        let nbrs: Vec<usize> = nbrs.into_iter().collect();
        let cp: Vec<BigInt> = nbrs.iter().map(|&i| self.value(p, i)).collect();
        let cq: Vec<BigInt> = nbrs.iter().map(|&i| self.value(q, i)).collect();
        let dk = self.minors[k].clone();
        let dk2 = &dk * &dk;
        let mut updates = Vec::new();
        for s in 0..nbrs.len() {
            for t in s..nbrs.len() {
                let (i, j) = (nbrs[s], nbrs[t]);
                let e = self.value(i, j);
                // det [[a, b, cp_j], [b, d, cq_j], [cp_i, cq_i, e]]
                let det3 = &a * (&d * &e - &cq[t] * &cq[s]) - &b * (&b * &e - &cq[t] * &cp[s])
                    + &cp[t] * (&b * &cq[s] - &d * &cp[s]);
                updates.push((i, j, det3 / &dk2));
            }
        }
        self.retire(p);
        self.retire(q);
        for (i, j, v) in updates {
            self.store(i, j, v, k + 1);
        }
        self.minors.push((&a * &d - &b * &b) / &dk);
    }
}

/// Exact inertia together with `det(M)`.
pub fn exact_inertia_and_det(m: &IntMatrix) -> Result<(Inertia, BigInt), InvariantError> {
    if !m.is_symmetric() {
        return Err(InvariantError::NotSymmetric);
    }
    let n = m.dim();
    let mut el = Elimination {
        entries: HashMap::new(),
        adj: vec![BTreeSet::new(); n],
        active: (0..n).collect(),
        minors: vec![BigInt::one()],
    };
    for i in 0..n {
        for j in i..n {
            let v = m.get(i, j);
            if v != 0 {
                el.store(i, j, BigInt::from(v), 0);
            }
        }
    }
    let (mut pos, mut neg, mut zero) = (0usize, 0usize, 0usize);
    while !el.active.is_empty() {
        // Minimum-degree nonzero diagonal pivot; isolated zero rows are null directions.
        let mut best: Option<(usize, usize)> = None;
        let mut isolated = Vec::new();
        for &i in &el.active {
            let deg = el.adj[i].len();
            let has_diag = el.entries.contains_key(&(i, i));
            if !has_diag && deg == 0 {
                isolated.push(i);
            } else if has_diag && best.is_none_or(|(_, d)| deg < d) {
                best = Some((i, deg));
            }
        }
        if !isolated.is_empty() {
            for i in isolated {
                el.active.remove(&i);
                zero += 1;
            }
            continue;
        }
        let dk_positive = el.minors[el.step()].is_positive();
        match best {
            Some((p, _)) => {
                let piv = el.pivot1(p);
                if piv.is_positive() == dk_positive {
                    pos += 1;
                } else {
                    neg += 1;
                }
            }
            None => {
                // Every diagonal entry is zero: take the sparsest off-diagonal pair.
                let p = *el.active.iter().min_by_key(|&&i| el.adj[i].len()).expect("nonempty");
                let q = *el.adj[p].iter().min_by_key(|&&j| el.adj[j].len()).expect("p has a neighbour");
                el.pivot2(p, q);
                pos += 1;
                neg += 1;
            }
        }
    }
    let det = if zero > 0 { BigInt::zero() } else { el.minors.last().cloned().unwrap_or_else(BigInt::one) };
    Ok((Inertia { positives: pos, negatives: neg, zeros: zero, ambiguous: 0, tolerance: 0.0 }, det))
}

/// Inertia of a Hermitian matrix from its eigenvalues.
///
/// `|λ| ≤ tol` counts as zero and `tol < |λ| ≤ 2·tol` as ambiguous.
pub fn inertia_hermitian(m: &DMatrix<Complex<f64>>, tol: f64) -> Result<Inertia, InvariantError> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(InvariantError::NotSquare);
    }
    if !(tol > 0.0) {
        return Err(InvariantError::BadTolerance(tol));
    }
    for i in 0..n {
        for j in 0..=i {
            if (m[(i, j)] - m[(j, i)].conj()).norm() > tol {
                return Err(InvariantError::NotHermitian);
            }
        }
    }
    let mut inertia = Inertia { positives: 0, negatives: 0, zeros: 0, ambiguous: 0, tolerance: tol };
    if n == 0 {
        return Ok(inertia);
    }
    let eig = m.clone().symmetric_eigenvalues();
    for &l in eig.iter() {
        if l.abs() <= tol {
            inertia.zeros += 1;
        } else if l.abs() <= 2.0 * tol {
            inertia.ambiguous += 1;
        } else if l > 0.0 {
            inertia.positives += 1;
        } else {
            inertia.negatives += 1;
        }
    }
    Ok(inertia)
}

/// Default tolerance: `1e-8 · dim · ‖M‖∞`, floored so zero matrices classify cleanly.
pub fn default_tolerance(m: &DMatrix<Complex<f64>>) -> f64 {
    let norm = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    (1e-8 * m.nrows() as f64 * norm).max(f64::MIN_POSITIVE)
}
