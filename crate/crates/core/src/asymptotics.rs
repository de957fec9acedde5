//! Limit estimates on the K(n,m) grid, quasi-morphism defects and the
//! rescaling schedule K(n,m) → K(a,b).

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::{knm_braid, BraidWord};
use crate::invariants::{signature, InvariantDescriptor, InvariantError};
use crate::seifert::genus_data;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error("invariant {0} is not additive")]
    NotAdditive(String),
    #[error("grid must be at least 1×1")]
    EmptyGrid,
    #[error("need 1 <= a <= min(n, m), got n={n} m={m} a={a}")]
    BadRescale { n: usize, m: usize, a: usize },
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub n: usize,
    pub m: usize,
    /// F(n, m) = τ(K(n, m)).
    pub value: f64,
    /// f(n, m) = F / (n·m).
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trend {
    /// f(k, k) along the diagonal.
    pub diagonal: Vec<(usize, f64)>,
    /// Whether |f(k,k)| moves monotonically over the last three diagonal points.
    pub monotone_tail: bool,
    /// Supplementary 1/n extrapolation 2f(s,s) − f(s/2,s/2); never used for acceptance.
    pub extrapolated: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate {
    pub invariant: String,
    pub tau_bar: f64,
    pub grid: Vec<GridCell>,
    pub error_bound: f64,
    pub trend: Trend,
    /// All grid inequalities |f| ≤ C and |f(pn,m) − f(n,m)| ≤ C/n for p ∈ {2,3} held.
    pub bounds_satisfied: bool,
}

/// Evaluates one grid cell; cells are independent and can be computed in parallel.
pub fn scan_cell(inv: &InvariantDescriptor, n: usize, m: usize) -> Result<GridCell, AsymptoticsError> {
    let b = knm_braid(n, m).map_err(|e| InvariantError::Evaluation(e.to_string()))?;
    let value = inv.evaluate(&b)?;
    Ok(GridCell { n, m, value, normalized: value / (n * m) as f64 })
}

pub fn family_scan(inv: &InvariantDescriptor, nmax: usize, mmax: usize) -> Result<LimitEstimate, AsymptoticsError> {
    check_scan(inv, nmax, mmax)?;
    let mut cells = Vec::with_capacity(nmax * mmax);
    for n in 1..=nmax {
        for m in 1..=mmax {
            cells.push(scan_cell(inv, n, m)?);
        }
    }
    Ok(summarize(inv, nmax, mmax, cells))
}

pub fn check_scan(inv: &InvariantDescriptor, nmax: usize, mmax: usize) -> Result<(), AsymptoticsError> {
    if !inv.additive {
        return Err(AsymptoticsError::NotAdditive(inv.name.clone()));
    }
    if nmax == 0 || mmax == 0 {
        return Err(AsymptoticsError::EmptyGrid);
    }
    Ok(())
}

/// Builds the estimate from cells covering `1..=nmax × 1..=mmax` in any order.
pub fn summarize(inv: &InvariantDescriptor, nmax: usize, mmax: usize, mut cells: Vec<GridCell>) -> LimitEstimate {
    cells.sort_by_key(|c| (c.n, c.m));
    let f = |n: usize, m: usize| cells[(n - 1) * mmax + (m - 1)].normalized;
    let c = inv.saddle_constant;
    let s = nmax.min(mmax);
    let tau_bar = f(s, s);
    let lo = s.saturating_sub(1).max(1);
    let spread = (lo..=s).flat_map(|a| (lo..=s).map(move |b| (a, b))).map(|(a, b)| (f(a, b) - tau_bar).abs()).fold(0.0, f64::max);
    let scale = if cells.iter().all(|x| x.value == 0.0) { 0.0 } else { 1.0 };
    let error_bound = scale * c * (1.0 / nmax as f64 + 1.0 / mmax as f64) + spread;
    let diagonal: Vec<(usize, f64)> = (1..=s).map(|k| (k, f(k, k))).collect();
    let tail: Vec<f64> = diagonal.iter().rev().take(3).map(|&(_, v)| v.abs()).collect();
    let monotone_tail = tail.len() < 3 || tail.windows(2).all(|w| w[0] >= w[1]) || tail.windows(2).all(|w| w[0] <= w[1]);
    let extrapolated = (s >= 2).then(|| 2.0 * f(s, s) - f(s / 2, s / 2));
    let eps = 1e-12;
    let mut ok = cells.iter().all(|x| x.normalized.abs() <= c + eps);
    for p in [2, 3] {
        for n in 1..=nmax / p {
            for m in 1..=mmax {
                ok &= (f(p * n, m) - f(n, m)).abs() <= c / n as f64 + eps;
            }
        }
    }
    LimitEstimate {
        invariant: inv.name.clone(),
        tau_bar,
        grid: cells,
        error_bound,
        trend: Trend { diagonal, monotone_tail, extrapolated },
        bounds_satisfied: ok,
    }
}

/// |F(n1+n2, m) − F(n1, m) − F(n2, m)|.
pub fn quasimorphism_defect(inv: &InvariantDescriptor, n1: usize, n2: usize, m: usize) -> Result<f64, AsymptoticsError> {
    if !inv.additive {
        return Err(AsymptoticsError::NotAdditive(inv.name.clone()));
    }
    let f = |n| scan_cell(inv, n, m).map(|c| c.value);
    Ok((f(n1 + n2)? - f(n1)? - f(n2)?).abs())
}

/// Counting data for the saddle sequence K(n,m) → K(a, km) with n = ak + r.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2Schedule {
    pub n: usize,
    pub m: usize,
    pub a: usize,
    pub k: usize,
    pub r: usize,
    pub b: usize,
    pub moves_used: usize,
    pub declared_bound: Ratio<i64>,
}

impl Lemma2Schedule {
    pub fn within_bound(&self) -> bool {
        Ratio::from_integer(self.moves_used as i64) <= self.declared_bound
    }
}

pub fn lemma2_schedule(n: usize, m: usize, a: usize) -> Result<Lemma2Schedule, AsymptoticsError> {
    if a == 0 || a > n.min(m) {
        return Err(AsymptoticsError::BadRescale { n, m, a });
    }
    let (k, r) = n.div_rem(&a);
    // m moves split off K(r, m); each of the k−1 remaining merges of the a-strand
    // blocks costs m + a; the K(r, m) part is then removed with r·m moves.
    let moves_used = m + (k - 1) * (m + a) + r * m;
    let (n_, m_, a_) = (n as i64, m as i64, a as i64);
    let declared_bound = Ratio::from_integer(m_ + n_ + a_ * m_) + Ratio::new(m_ * n_, a_);
    Ok(Lemma2Schedule { n, m, a, k, r, b: k * m, moves_used, declared_bound })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenusSandwich {
    /// |σ|/2, a lower bound for the slice genus.
    pub lower: f64,
    /// Genus of the band surface, an upper bound.
    pub upper: f64,
}

pub fn genus_sandwich(b: &BraidWord) -> GenusSandwich {
    let g = genus_data(b).genus;
    GenusSandwich { lower: signature(b).abs() as f64 / 2.0, upper: *g.numer() as f64 / *g.denom() as f64 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::torus_braid;

    #[test]
    fn rescale_schedule_examples() {
        let s = lemma2_schedule(7, 5, 3).unwrap();
        assert_eq!((s.k, s.r, s.b, s.moves_used), (2, 1, 10, 18));
        assert_eq!(s.declared_bound, Ratio::new(116, 3));
        assert!(s.within_bound());
        let s = lemma2_schedule(4, 9, 4).unwrap();
        assert_eq!((s.k, s.r, s.b, s.moves_used), (1, 0, 9, 9));
        assert!(lemma2_schedule(3, 5, 4).is_err());
        assert!(lemma2_schedule(3, 5, 0).is_err());
    }

    #[test]
    fn defects() {
        let sig = InvariantDescriptor::signature();
        assert_eq!(quasimorphism_defect(&sig, 1, 1, 2).unwrap(), 1.0);
        assert_eq!(quasimorphism_defect(&sig, 2, 2, 2).unwrap(), 1.0);
        assert!(quasimorphism_defect(&InvariantDescriptor::slice_genus(), 1, 1, 1).is_err());
    }

    #[test]
    fn zero_invariant_scan() {
        let est = family_scan(&InvariantDescriptor::zero(), 4, 3).unwrap();
        assert_eq!((est.tau_bar, est.error_bound), (0.0, 0.0));
        assert_eq!(est.grid.len(), 12);
        assert!(est.bounds_satisfied);
        assert!(family_scan(&InvariantDescriptor::slice_genus(), 3, 3).is_err());
    }

    #[test]
    fn sandwich_examples() {
        assert_eq!(genus_sandwich(&torus_braid(2, 3).unwrap()), GenusSandwich { lower: 1.0, upper: 1.0 });
        assert_eq!(genus_sandwich(&BraidWord::new(1, vec![]).unwrap()), GenusSandwich { lower: 0.0, upper: 0.0 });
    }
}
