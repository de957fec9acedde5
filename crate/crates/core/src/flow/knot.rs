//! Closing orbit segments into knots and checking that they are embedded.

use std::collections::HashMap;

use serde::Serialize;

use super::field::{dot, norm, sub, Point};
use crate::braid::BraidWord;
use crate::diagram::Diagram;

/// A closed polyline: the orbit samples followed by the chord back to the start.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitKnot {
    pub base_point: Point,
    pub horizon: f64,
    /// First and last points coincide.
    pub polyline: Vec<Point>,
    /// Length of the closing chord before it was added.
    pub chord_length: f64,
    /// Separation threshold used by the embeddedness check.
    pub delta: f64,
    pub embedded: bool,
    #[serde(skip)]
    pub diagram: Option<Diagram>,
    pub braid: Option<BraidWord>,
}

/// Relative separation threshold: non-adjacent segments must stay this far
/// apart, in units of the bounding-box diagonal.
pub const SEPARATION: f64 = 1e-5;

/// Appends the chord from the last point to the first and checks embeddedness.
///
/// An endpoint closer than the separation threshold to the start is merged into
/// it instead, so that a closed orbit gets no degenerate chord. Panics on an
/// empty polyline.
pub fn close_and_validate(polyline: &[Point]) -> OrbitKnot {
    assert!(!polyline.is_empty(), "polyline must be nonempty");
    let start = polyline[0];
    let end = *polyline.last().expect("nonempty");
    let delta = SEPARATION * bounding_diagonal(polyline);
    let chord_length = norm(sub(end, start));
    let mut closed = polyline.to_vec();
    if polyline.len() > 1 && chord_length < delta {
        closed.pop();
    }
    closed.push(start);
    let embedded = closed.len() >= 4 && separated(&closed, delta);
    OrbitKnot { base_point: start, horizon: 0.0, polyline: closed, chord_length, delta, embedded, diagram: None, braid: None }
}

fn bounding_diagonal(points: &[Point]) -> f64 {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in points {
        for i in 0..3 {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    norm(sub(hi, lo))
}

/// No two non-adjacent segments of the closed polyline come within `delta`.
fn separated(closed: &[Point], delta: f64) -> bool {
    let n = closed.len() - 1;
    let segs: Vec<(Point, Point)> = (0..n).map(|i| (closed[i], closed[i + 1])).collect();
    if segs.iter().any(|(a, b)| norm(sub(*b, *a)) < delta) {
        return false;
    }
    let mean = segs.iter().map(|(a, b)| norm(sub(*b, *a))).sum::<f64>() / n as f64;
    let cell = mean.max(2.0 * delta);
    candidate_pairs(&segs, cell).into_iter().all(|(i, j)| {
        let adjacent = j == i + 1 || (i == 0 && j == n - 1);
        adjacent || segment_distance(segs[i], segs[j]) >= delta
    })
}

/// Distance between two 3D segments.
pub fn segment_distance((p1, q1): (Point, Point), (p2, q2): (Point, Point)) -> f64 {
    let (d1, d2, r) = (sub(q1, p1), sub(q2, p2), sub(p1, p2));
    let (a, e, f) = (dot(d1, d1), dot(d2, d2), dot(d2, r));
    let clamp = |v: f64| v.clamp(0.0, 1.0);
    let tiny = f64::EPSILON * (a + e).max(f64::MIN_POSITIVE);
    let (s, t) = if a <= tiny && e <= tiny {
        (0.0, 0.0)
    } else if a <= tiny {
        (0.0, clamp(f / e))
    } else {
        let c = dot(d1, r);
        if e <= tiny {
            (clamp(-c / a), 0.0)
        } else {
            let b = dot(d1, d2);
            let denom = a * e - b * b;
            let mut s = if denom > tiny * tiny { clamp((b * f - c * e) / denom) } else { 0.0 };
            let mut t = (b * s + f) / e;
            if t < 0.0 {
                t = 0.0;
                s = clamp(-c / a);
            } else if t > 1.0 {
                t = 1.0;
                s = clamp((b - c) / a);
            }
            (s, t)
        }
    };
    let x = [p1[0] + d1[0] * s, p1[1] + d1[1] * s, p1[2] + d1[2] * s];
    let y = [p2[0] + d2[0] * t, p2[1] + d2[1] * t, p2[2] + d2[2] * t];
    norm(sub(x, y))
}

/// Pairs `(i, j)`, `i < j`, of segments that may come within `cell / 2` of each
/// other. Segments are sampled every `cell / 2` and hashed into a grid of that
/// cell size; pairs are taken from neighbouring cells.
pub(crate) fn candidate_pairs<const D: usize>(segs: &[([f64; D], [f64; D])], cell: f64) -> Vec<(usize, usize)> {
    let key = |p: [f64; D]| p.map(|c| (c / cell).floor() as i64);
    let mut grid: HashMap<[i64; D], Vec<usize>> = HashMap::new();
    let mut keys_of: Vec<Vec<[i64; D]>> = Vec::with_capacity(segs.len());
    for (i, (a, b)) in segs.iter().enumerate() {
        let len = (0..D).map(|k| (b[k] - a[k]).powi(2)).sum::<f64>().sqrt();
        let samples = (2.0 * len / cell).ceil().max(1.0) as usize;
        let mut keys = Vec::new();
        for s in 0..=samples {
            let f = s as f64 / samples as f64;
            let p: [f64; D] = std::array::from_fn(|k| a[k] + f * (b[k] - a[k]));
            let k = key(p);
            if !keys.contains(&k) {
                keys.push(k);
                grid.entry(k).or_default().push(i);
            }
        }
        keys_of.push(keys);
    }
    let offsets: Vec<[i64; D]> = (0..3usize.pow(D as u32))
        .map(|mut c| {
            std::array::from_fn(|_| {
                let o = (c % 3) as i64 - 1;
                c /= 3;
                o
            })
        })
        .collect();
    let mut mark = vec![usize::MAX; segs.len()];
    let mut out = Vec::new();
    for (i, keys) in keys_of.iter().enumerate() {
        for k in keys {
            for o in &offsets {
                let nk: [i64; D] = std::array::from_fn(|d| k[d] + o[d]);
                if let Some(list) = grid.get(&nk) {
                    for &j in list {
                        if j > i && mark[j] != i {
                            mark[j] = i;
                            out.push((i, j));
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn circle(n: usize) -> Vec<Point> {
        (0..n).map(|i| {
            let a = TAU * i as f64 / n as f64;
            [a.cos(), a.sin(), 0.0]
        })
        .collect()
    }

    #[test]
    fn circle_is_embedded() {
        let k = close_and_validate(&circle(100));
        assert!(k.embedded);
        assert_eq!(k.polyline.first(), k.polyline.last());
        assert_eq!(k.polyline.len(), 101);
    }

    #[test]
    fn closed_orbit_merges_endpoint() {
        let mut pts = circle(100);
        pts.push([1.0, 1e-9, 0.0]);
        let k = close_and_validate(&pts);
        assert!(k.embedded && k.chord_length < 1e-8);
        assert_eq!(k.polyline.len(), 101);
    }

    #[test]
    fn self_intersecting_figure_eight() {
        // A planar figure eight: the two lobes cross at the origin.
        let pts: Vec<Point> = (0..200)
            .map(|i| {
                let t = TAU * i as f64 / 200.0;
                [t.sin(), t.sin() * t.cos(), 0.0]
            })
            .collect();
        assert!(!close_and_validate(&pts).embedded);
    }

    #[test]
    fn tiny_polylines_are_not_embedded() {
        assert!(!close_and_validate(&[[0.0; 3]]).embedded);
        assert!(!close_and_validate(&[[0.0; 3], [1.0, 0.0, 0.0]]).embedded);
    }

    #[test]
    fn distances() {
        let d = segment_distance(([0.0, 0.0, 0.0], [1.0, 0.0, 0.0]), ([0.5, -1.0, 1.0], [0.5, 1.0, 1.0]));
        assert!((d - 1.0).abs() < 1e-15);
        let d = segment_distance(([0.0, 0.0, 0.0], [1.0, 0.0, 0.0]), ([2.0, 0.0, 0.0], [3.0, 0.0, 0.0]));
        assert!((d - 1.0).abs() < 1e-15);
        let d = segment_distance(([0.0, 0.0, 0.0], [1.0, 0.0, 0.0]), ([0.0, 1.0, 0.0], [1.0, 1.0, 0.0]));
        assert!((d - 1.0).abs() < 1e-15);
    }
}
