//! Orthogonal projection of a closed polyline to a link diagram.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::field::{cross, dot, norm, scale, sub, unit, Point};
use super::knot::{candidate_pairs, OrbitKnot};
use super::FlowError;
use crate::braid::Sign;
use crate::diagram::Diagram;

/// Counts of rejected projections by cause.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct DegeneracyCensus {
    /// Projected segments crossing at a tiny angle or overlapping.
    pub tangencies: usize,
    /// A crossing at or next to a polyline vertex.
    pub vertex_hits: usize,
    /// Two crossings at nearly the same point of the plane.
    pub triple_points: usize,
    /// Strands at nearly the same depth at a crossing.
    pub depth_ties: usize,
}

impl DegeneracyCensus {
    pub fn total(&self) -> usize {
        self.tangencies + self.vertex_hits + self.triple_points + self.depth_ties
    }

    fn add(&mut self, o: &DegeneracyCensus) {
        self.tangencies += o.tangencies;
        self.vertex_hits += o.vertex_hits;
        self.triple_points += o.triple_points;
        self.depth_ties += o.depth_ties;
    }
}

#[derive(Debug, Clone)]
pub struct Projection {
    pub diagram: Diagram,
    /// The direction that was finally used.
    pub direction: Point,
    pub attempts: usize,
    pub census: DegeneracyCensus,
}

/// Default view: the z-axis, tilted slightly off any symmetry of the built-in domains.
pub const DEFAULT_DIRECTION: Point = [0.0123, 0.0217, 1.0];

/// Relative tolerances for degeneracy detection.
const PARAM_TOL: f64 = 1e-9;
const ANGLE_TOL: f64 = 1e-7;
const LENGTH_TOL: f64 = 1e-9;

/// Projects along `direction`; the viewer sits at `+direction`, so larger depth
/// is over. Degenerate projections are retried up to `retries` times with
/// directions drawn from a generator seeded by `seed`.
pub fn project_to_diagram(k: &OrbitKnot, direction: Point, retries: usize, seed: u64) -> Result<Projection, FlowError> {
    if !k.embedded {
        return Err(FlowError::NotEmbedded);
    }
    if !(norm(direction) > 0.0) {
        return Err(FlowError::BadParameter("projection direction must be nonzero".into()));
    }
    let base = unit(direction);
    let mut census = DegeneracyCensus::default();
    let mut d = base;
    for attempt in 0..=retries {
        if attempt > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(attempt as u64);
            let jitter: Point = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            d = unit([base[0] + 0.05 * jitter[0], base[1] + 0.05 * jitter[1], base[2] + 0.05 * jitter[2]]);
        }
        match project_once(&k.polyline, d) {
            Ok(diagram) => return Ok(Projection { diagram, direction: d, attempts: attempt + 1, census }),
            Err(c) => {
                log::debug!("degenerate projection along {d:?}: {c:?}");
                census.add(&c);
            }
        }
    }
    Err(FlowError::Degenerate { attempts: retries + 1, census })
}

struct Hit {
    /// Position along the curve: segment index plus fraction.
    over_at: f64,
    under_at: f64,
    sign: Sign,
}

fn project_once(closed: &[Point], d: Point) -> Result<Diagram, DegeneracyCensus> {
    let a = if d[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let e1 = unit(sub(a, scale(d, dot(a, d))));
    let e2 = cross(d, e1);
    let n = closed.len() - 1;
    let flat: Vec<[f64; 2]> = closed.iter().map(|&p| [dot(p, e1), dot(p, e2)]).collect();
    let depth: Vec<f64> = closed.iter().map(|&p| dot(p, d)).collect();
    let segs: Vec<([f64; 2], [f64; 2])> = (0..n).map(|i| (flat[i], flat[i + 1])).collect();
    let len2 = |s: &([f64; 2], [f64; 2])| (s.1[0] - s.0[0]).hypot(s.1[1] - s.0[1]);
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &flat {
        for i in 0..2 {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    let diag = (hi[0] - lo[0]).hypot(hi[1] - lo[1]).max(f64::MIN_POSITIVE);
    let tol = LENGTH_TOL * diag;
    let mean = segs.iter().map(len2).sum::<f64>() / n as f64;
    let cell = mean.max(4.0 * tol).max(f64::MIN_POSITIVE);
    let mut census = DegeneracyCensus::default();
    let mut hits = Vec::new();
    let cross2 = |u: [f64; 2], v: [f64; 2]| u[0] * v[1] - u[1] * v[0];
    for (i, j) in candidate_pairs(&segs, cell) {
        if j == i + 1 || (i == 0 && j == n - 1) {
            continue;
        }
        let (p, q) = segs[i];
        let (r0, r1) = segs[j];
        let r = [q[0] - p[0], q[1] - p[1]];
        let s = [r1[0] - r0[0], r1[1] - r0[1]];
        let w = [r0[0] - p[0], r0[1] - p[1]];
        let (lr, ls) = (len2(&segs[i]), len2(&segs[j]));
        let denom = cross2(r, s);
        if denom.abs() <= ANGLE_TOL * lr * ls {
            // Nearly parallel: harmless unless the segments nearly touch.
            if segment_distance_2d(segs[i], segs[j]) <= tol {
                census.tangencies += 1;
            }
            continue;
        }
        let t = cross2(w, s) / denom;
        let u = cross2(w, r) / denom;
        let (et, eu) = (PARAM_TOL.max(tol / lr), PARAM_TOL.max(tol / ls));
        if t < -et || t > 1.0 + et || u < -eu || u > 1.0 + eu {
            continue;
        }
        if t < et || t > 1.0 - et || u < eu || u > 1.0 - eu {
            census.vertex_hits += 1;
            continue;
        }
        let zi = depth[i] + t * (depth[i + 1] - depth[i]);
        let zj = depth[j] + u * (depth[j + 1] - depth[j]);
        if (zi - zj).abs() <= tol {
            census.depth_ties += 1;
            continue;
        }
        let (over_at, under_at, o, un) = if zi > zj { (i as f64 + t, j as f64 + u, r, s) } else { (j as f64 + u, i as f64 + t, s, r) };
        let sign = if cross2(o, un) > 0.0 { Sign::Positive } else { Sign::Negative };
        hits.push(Hit { over_at, under_at, sign });
    }
    // Two crossings at one spot of the same segment signal a triple point.
    let mut along: Vec<(f64, usize)> = hits.iter().enumerate().flat_map(|(c, h)| [(h.over_at, c), (h.under_at, c)]).collect();
    along.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in along.windows(2) {
        let seg = w[0].0.floor() as usize;
        if w[1].0.floor() as usize == seg && (w[1].0 - w[0].0) * len2(&segs[seg]) <= tol {
            census.triple_points += 1;
        }
    }
    if census.total() > 0 {
        return Err(census);
    }
    if hits.is_empty() {
        return Ok(Diagram::unlink(1));
    }
    let signs: Vec<Sign> = hits.iter().map(|h| h.sign).collect();
    let code: Vec<(usize, bool)> = along.iter().map(|&(at, c)| (c, at == hits[c].over_at)).collect();
    Diagram::from_gauss(&signs, &[code]).map_err(|e| {
        log::warn!("projection produced an inconsistent Gauss code: {e}");
        DegeneracyCensus { tangencies: 1, ..DegeneracyCensus::default() }
    })
}

fn segment_distance_2d(a: ([f64; 2], [f64; 2]), b: ([f64; 2], [f64; 2])) -> f64 {
    let lift = |p: [f64; 2]| [p[0], p[1], 0.0];
    super::knot::segment_distance((lift(a.0), lift(a.1)), (lift(b.0), lift(b.1)))
}
