//! Fixed-step classical Runge–Kutta integration.

use serde::Serialize;

use super::field::{norm, FieldSpec, Point};
use super::FlowError;

/// Speeds below this count as a singularity.
pub const SINGULAR_SPEED: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Orbit {
    /// Samples at times `0, dt, 2dt, …, T`.
    pub points: Vec<Point>,
    /// Actual step `T / ceil(T/h)`, never larger than the requested one.
    pub dt: f64,
    /// Number of times a step left the domain and was pulled back.
    pub guard_events: usize,
}

pub fn integrate_orbit(f: &FieldSpec, x0: Point, t: f64, h: f64) -> Result<Orbit, FlowError> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(FlowError::BadParameter(format!("horizon {t} must be finite and non-negative")));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(FlowError::BadParameter(format!("step {h} must be positive")));
    }
    if !f.domain.contains(x0) {
        return Err(FlowError::OutsideDomain { point: x0 });
    }
    let steps = (t / h).ceil() as usize;
    let dt = if steps == 0 { 0.0 } else { t / steps as f64 };
    let mut points = Vec::with_capacity(steps + 1);
    points.push(x0);
    let mut p = x0;
    let mut guard_events = 0;
    let field = |q: Point, time: f64| -> Result<Point, FlowError> {
        let v = f.eval(q);
        if !v.iter().all(|c| c.is_finite()) {
            return Err(FlowError::NonFinite { point: q });
        }
        if norm(v) < SINGULAR_SPEED {
            return Err(FlowError::Singularity { time, point: q });
        }
        Ok(v)
    };
    let add = |a: Point, b: Point, s: f64| [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]];
    for i in 0..steps {
        let time = i as f64 * dt;
        let k1 = field(p, time)?;
        let k2 = field(add(p, k1, dt / 2.0), time)?;
        let k3 = field(add(p, k2, dt / 2.0), time)?;
        let k4 = field(add(p, k3, dt), time)?;
        let mut next = [0.0; 3];
        for j in 0..3 {
            next[j] = p[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        if !f.domain.contains(next) {
            guard_events += 1;
            log::debug!("step {i} left the domain at {next:?}; pulled back");
            next = f.domain.pull_inside(next);
        }
        p = next;
        points.push(p);
    }
    if guard_events > 0 {
        log::info!("{guard_events} project-back events over horizon {t}");
    }
    Ok(Orbit { points, dt, guard_events })
}
