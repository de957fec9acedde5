//! Oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use knotflow::braid::{BraidWord, Letter, Sign};
use knotflow::diagram::{over_in, over_out, vogel, Diagram};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Link determinant from Fox colorings: |any first minor| of the
/// crossing-by-arc matrix with rows `2·over − under_in − under_out`.
/// Independent of Seifert matrices; works on any diagram.
pub fn fox_determinant(d: &Diagram) -> u128 {
    if d.crossing_count() == 0 {
        return if d.free_loops() == 1 { 1 } else { 0 };
    }
    if d.free_loops() > 0 {
        return 0;
    }
    // Arcs: edges glued through the over strand.
    let ids: Vec<usize> = d.edges().keys().copied().collect();
    let index: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut parent: Vec<usize> = (0..ids.len()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for c in d.crossings().values() {
        let a = index[&c.edges[over_in(c.sign) as usize]];
        let b = index[&c.edges[over_out(c.sign) as usize]];
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let mut arc_of = HashMap::new();
    for i in 0..ids.len() {
        let r = find(&mut parent, i);
        let next = arc_of.len();
        arc_of.entry(r).or_insert(next);
    }
    let arcs = arc_of.len();
    let rows: Vec<Vec<i128>> = d
        .crossings()
        .values()
        .map(|c| {
            let mut row = vec![0i128; arcs];
            let arc = |slot: u8, p: &mut Vec<usize>| arc_of[&find(p, index[&c.edges[slot as usize]])];
            row[arc(over_in(c.sign), &mut parent)] += 2;
            row[arc(0, &mut parent)] -= 1;
            row[arc(2, &mut parent)] -= 1;
            row
        })
        .collect();
    if arcs != rows.len() {
        // Some component never passes under, so it lifts off: a split link.
        return 0;
    }
    let minor: Vec<Vec<i128>> = rows[1..].iter().map(|r| r[1..].to_vec()).collect();
    bareiss_det(minor).unsigned_abs()
}

/// Fraction-free Gaussian elimination.
pub fn bareiss_det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

pub fn random_braid(rng: &mut ChaCha8Rng, strands: usize, len: usize, positive: bool) -> BraidWord {
    let letters = (0..len)
        .map(|_| {
            let index = rng.random_range(1..strands);
            let sign = if positive || rng.random_bool(0.5) { Sign::Positive } else { Sign::Negative };
            Letter { index, sign }
        })
        .collect();
    BraidWord::new(strands, letters).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Signature of an arbitrary diagram: braid each connected piece and add.
pub fn diagram_signature(d: &Diagram) -> i64 {
    d.pieces().iter().map(|p| knotflow::invariants::signature(&vogel(&d.restrict(p)).unwrap().braid)).sum()
}

pub fn diagram_omega(d: &Diagram, theta: knotflow::invariants::Theta) -> i64 {
    d.pieces().iter().map(|p| knotflow::invariants::omega_signature(&vogel(&d.restrict(p)).unwrap().braid, theta).value).sum()
}
