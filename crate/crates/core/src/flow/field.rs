//! Vector fields on a ball or a solid torus, with sampled divergence and
//! boundary-tangency checks.

use std::fmt;

use serde::Serialize;

use super::expr::Expr;
use super::FlowError;

pub type Point = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    Ball { radius: f64 },
    /// Points within `minor` of the circle of radius `major` in the xy-plane.
    SolidTorus { major: f64, minor: f64 },
}

impl Domain {
    pub fn check(&self) -> Result<(), FlowError> {
        match *self {
            Domain::Ball { radius } if radius > 0.0 && radius.is_finite() => Ok(()),
            Domain::SolidTorus { major, minor } if minor > 0.0 && major > minor && major.is_finite() => Ok(()),
            _ => Err(FlowError::BadParameter(format!("invalid domain {self:?}"))),
        }
    }

    /// 0 on the core, 1 on the boundary.
    pub fn level(&self, p: Point) -> f64 {
        match *self {
            Domain::Ball { radius } => dot(p, p) / (radius * radius),
            Domain::SolidTorus { major, minor } => {
                let rho = p[0].hypot(p[1]);
                ((rho - major).powi(2) + p[2] * p[2]) / (minor * minor)
            }
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        self.level(p) < 1.0
    }

    /// Outward unit normal of the level surface through `p`.
    pub fn normal(&self, p: Point) -> Point {
        match *self {
            Domain::Ball { .. } => unit(p),
            Domain::SolidTorus { major, .. } => {
                let rho = p[0].hypot(p[1]);
                let dr = rho - major;
                unit([dr * p[0] / rho, dr * p[1] / rho, p[2]])
            }
        }
    }

    /// Moves a point that left the domain back just inside, along the normal direction.
    pub fn pull_inside(&self, p: Point) -> Point {
        let target = 1.0 - 1e-9;
        match *self {
            Domain::Ball { .. } => scale(p, (target / self.level(p)).sqrt()),
            Domain::SolidTorus { major, .. } => {
                let rho = p[0].hypot(p[1]);
                let f = (target / self.level(p)).sqrt();
                let new_rho = major + (rho - major) * f;
                [p[0] * new_rho / rho, p[1] * new_rho / rho, p[2] * f]
            }
        }
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        match *self {
            Domain::Ball { radius: r } => ([-r; 3], [r; 3]),
            Domain::SolidTorus { major, minor } => {
                let o = major + minor;
                ([-o, -o, -minor], [o, o, minor])
            }
        }
    }

    /// Quasi-random interior points (Halton sequence, rejection from the bounding box).
    pub fn interior_samples(&self, count: usize) -> Vec<Point> {
        let (lo, hi) = self.bounding_box();
        let mut out = Vec::with_capacity(count);
        let mut i = 1;
        while out.len() < count {
            let q = [halton(i, 2), halton(i, 3), halton(i, 5)];
            let p = [lo[0] + q[0] * (hi[0] - lo[0]), lo[1] + q[1] * (hi[1] - lo[1]), lo[2] + q[2] * (hi[2] - lo[2])];
            if self.level(p) < 0.98 {
                out.push(p);
            }
            i += 1;
        }
        out
    }

    /// Quasi-random boundary points.
    pub fn boundary_samples(&self, count: usize) -> Vec<Point> {
        let tau = std::f64::consts::TAU;
        (1..=count)
            .map(|i| match *self {
                Domain::Ball { radius } => {
                    let z = 2.0 * halton(i, 2) - 1.0;
                    let a = tau * halton(i, 3);
                    let w = (1.0 - z * z).sqrt();
                    scale([w * a.cos(), w * a.sin(), z], radius)
                }
                Domain::SolidTorus { major, minor } => {
                    let (phi, psi) = (tau * halton(i, 2), tau * halton(i, 3));
                    let rho = major + minor * psi.cos();
                    [rho * phi.cos(), rho * phi.sin(), minor * psi.sin()]
                }
            })
            .collect()
    }

    pub fn diameter(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        norm(sub(hi, lo))
    }
}

fn halton(mut i: usize, base: usize) -> f64 {
    let (mut f, mut r) = (1.0, 0.0);
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// A profile `a + b·s` in the normalized squared distance `s` from the core.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Profile {
    pub constant: f64,
    pub slope: f64,
}

impl Profile {
    pub fn constant(v: f64) -> Profile {
        Profile { constant: v, slope: 0.0 }
    }

    pub fn at(&self, s: f64) -> f64 {
        self.constant + self.slope * s
    }

    /// `"a"` or `"a,b"`.
    pub fn parse(text: &str) -> Result<Profile, FlowError> {
        let bad = || FlowError::BadParameter(format!("bad profile {text:?}"));
        let mut parts = text.split(',').map(|t| Expr::constant(t.trim()).map_err(|_| bad()));
        let constant = parts.next().ok_or_else(bad)??;
        let slope = parts.next().transpose()?.unwrap_or(0.0);
        if parts.next().is_some() || !constant.is_finite() || !slope.is_finite() {
            return Err(bad());
        }
        Ok(Profile { constant, slope })
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slope == 0.0 {
            write!(f, "{}", self.constant)
        } else {
            write!(f, "{},{}", self.constant, self.slope)
        }
    }
}

/// Twist map on a solid torus, optionally perturbed.
///
/// With constant profiles `(p, q)` every orbit closes after time 2π, having
/// gone `p` times along the core and `q` times around it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Twist {
    pub longitudinal: Profile,
    pub meridional: Profile,
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FieldKind {
    Expressions {
        sources: [String; 3],
        #[serde(skip)]
        exprs: [Expr; 3],
    },
    Twist(Twist),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldSpec {
    pub domain: Domain,
    pub kind: FieldKind,
    pub declared_divergence_free: bool,
}

/// Parses three component expressions. The domain defaults to the ball of radius 2.
pub fn parse_field(ex: &str, ey: &str, ez: &str) -> Result<FieldSpec, FlowError> {
    let exprs = [Expr::parse(ex)?, Expr::parse(ey)?, Expr::parse(ez)?];
    Ok(FieldSpec {
        domain: Domain::Ball { radius: 2.0 },
        kind: FieldKind::Expressions { sources: [ex.into(), ey.into(), ez.into()], exprs },
        declared_divergence_free: false,
    })
}

/// `twist` or `perturbed_twist`.
///
/// Parameters: `longitudinal` and `meridional` profiles (defaults `2` and `3`),
/// `eps` for the perturbed field (default 0.3), and the torus radii `major`
/// and `minor` (defaults 2 and 1).
pub fn builtin_field(name: &str, params: &[(String, String)]) -> Result<FieldSpec, FlowError> {
    let perturbed = match name {
        "twist" => false,
        "perturbed_twist" | "perturbed-twist" => true,
        _ => return Err(FlowError::UnknownField(name.into())),
    };
    let mut twist = Twist { longitudinal: Profile::constant(2.0), meridional: Profile::constant(3.0), eps: if perturbed { 0.3 } else { 0.0 } };
    let (mut major, mut minor) = (2.0, 1.0);
    for (k, v) in params {
        let num = || Expr::constant(v).map_err(|_| FlowError::BadParameter(format!("{k} = {v:?}")));
        match k.as_str() {
            "longitudinal" => twist.longitudinal = Profile::parse(v)?,
            "meridional" => twist.meridional = Profile::parse(v)?,
            "eps" if perturbed => twist.eps = num()?,
            "major" => major = num()?,
            "minor" => minor = num()?,
            _ => return Err(FlowError::BadParameter(format!("unknown parameter {k} for {name}"))),
        }
    }
    if !twist.eps.is_finite() || twist.eps < 0.0 {
        return Err(FlowError::BadParameter(format!("eps = {} must be a finite non-negative number", twist.eps)));
    }
    let domain = Domain::SolidTorus { major, minor };
    domain.check()?;
    Ok(FieldSpec { domain, kind: FieldKind::Twist(twist), declared_divergence_free: true })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub scale: f64,
    pub max_divergence: f64,
    pub worst_divergence_point: Point,
    pub max_normal_component: f64,
    pub worst_normal_point: Point,
    pub interior_samples: usize,
    pub boundary_samples: usize,
}

pub const PROBES: usize = 1000;
pub const DIVERGENCE_STEP: f64 = 1e-4;
pub const VALIDATION_TOLERANCE: f64 = 1e-6;

impl FieldSpec {
    pub fn eval(&self, p: Point) -> Point {
        match &self.kind {
            FieldKind::Expressions { exprs, .. } => [exprs[0].eval(p), exprs[1].eval(p), exprs[2].eval(p)],
            FieldKind::Twist(t) => {
                let Domain::SolidTorus { major, minor } = self.domain else { unreachable!("twist lives on a solid torus") };
                twist_eval(t, major, minor, p)
            }
        }
    }

    pub fn divergence(&self, p: Point) -> f64 {
        let h = DIVERGENCE_STEP;
        (0..3)
            .map(|i| {
                let (mut a, mut b) = (p, p);
                a[i] += h;
                b[i] -= h;
                (self.eval(a)[i] - self.eval(b)[i]) / (2.0 * h)
            })
            .sum()
    }

    /// Samples divergence and boundary tangency; fails on the first violation.
    pub fn validate(&self) -> Result<ValidationReport, FlowError> {
        self.domain.check()?;
        let interior = self.domain.interior_samples(PROBES);
        let boundary = self.domain.boundary_samples(PROBES);
        let mut scale: f64 = 0.0;
        for &p in interior.iter().chain(&boundary) {
            let v = self.eval(p);
            if !v.iter().all(|c| c.is_finite()) {
                return Err(FlowError::NonFinite { point: p });
            }
            scale = scale.max(norm(v));
        }
        let limit = VALIDATION_TOLERANCE * scale.max(f64::MIN_POSITIVE);
        let mut report = ValidationReport {
            scale,
            max_divergence: 0.0,
            worst_divergence_point: interior[0],
            max_normal_component: 0.0,
            worst_normal_point: boundary[0],
            interior_samples: interior.len(),
            boundary_samples: boundary.len(),
        };
        for &p in &interior {
            let d = self.divergence(p);
            if !d.is_finite() {
                return Err(FlowError::NonFinite { point: p });
            }
            if d.abs() > report.max_divergence {
                report.max_divergence = d.abs();
                report.worst_divergence_point = p;
            }
        }
        if report.max_divergence > limit {
            return Err(FlowError::Divergence { point: report.worst_divergence_point, value: report.max_divergence, limit });
        }
        for &p in &boundary {
            let c = dot(self.eval(p), self.domain.normal(p)).abs();
            if c > report.max_normal_component {
                report.max_normal_component = c;
                report.worst_normal_point = p;
            }
        }
        if report.max_normal_component > limit {
            return Err(FlowError::Tangency { point: report.worst_normal_point, value: report.max_normal_component, limit });
        }
        Ok(report)
    }
}

/// Longitudinal speed `k = R·p(s)` along the core direction and a rotation about
/// the core with angular speed `c/ρ`, `c = R·q(s)`; both are divergence-free
/// and tangent to every torus `s = const`. The rotation about the core runs
/// clockwise in the `(ρ, z)` half-plane so that positive profiles trace
/// positive torus knots (signature −2 for `(2, 3)`). The perturbation is the sum of the
/// curls of `u·x/R · e_z` and `u·z/R · e_y` with `u = r² − dist²`, which vanish
/// in the normal direction on the boundary.
fn twist_eval(t: &Twist, big_r: f64, r0: f64, p: Point) -> Point {
    let [x, y, z] = p;
    let rho = x.hypot(y);
    let dr = rho - big_r;
    let s = (dr * dr + z * z) / (r0 * r0);
    let k = big_r * t.longitudinal.at(s);
    let c = -big_r * t.meridional.at(s);
    let (ex, ey) = (x / rho, y / rho);
    let v_rho = -c * z / rho;
    let v_z = c * dr / rho;
    let mut v = [-k * ey + v_rho * ex, k * ex + v_rho * ey, v_z];
    if t.eps != 0.0 {
        let u = r0 * r0 - dr * dr - z * z;
        let (ux, uy, uz) = (-2.0 * dr * ex, -2.0 * dr * ey, -2.0 * z);
        let f1 = [(u + x * ux) / big_r, x * uy / big_r, x * uz / big_r];
        let f2 = [z * ux / big_r, z * uy / big_r, (u + z * uz) / big_r];
        let pert = [f1[1] - f2[2], -f1[0], f2[0]];
        let w = t.eps * big_r;
        for i in 0..3 {
            v[i] += w * pert[i];
        }
    }
    v
}

pub fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn cross(a: Point, b: Point) -> Point {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn norm(a: Point) -> f64 {
    dot(a, a).sqrt()
}

pub fn scale(a: Point, f: f64) -> Point {
    [a[0] * f, a[1] * f, a[2] * f]
}

pub fn unit(a: Point) -> Point {
    scale(a, 1.0 / norm(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rigid_rotation_passes() {
        let f = parse_field("-y", "x", "0").unwrap();
        let r = f.validate().unwrap();
        assert!(r.max_divergence < 1e-9 && r.max_normal_component < 1e-9);
    }

    #[test]
    fn expanding_field_fails_divergence() {
        let f = parse_field("x", "y", "z").unwrap();
        match f.validate() {
            Err(FlowError::Divergence { value, .. }) => assert!((value - 3.0).abs() < 1e-6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn abc_style_field() {
        let f = parse_field("sin(z)", "cos(z)", "0.3").unwrap();
        assert!(f.interior_divergence_ok());
        assert!(matches!(f.validate(), Err(FlowError::Tangency { .. })));
    }

    impl FieldSpec {
        fn interior_divergence_ok(&self) -> bool {
            self.domain.interior_samples(200).iter().all(|&p| self.divergence(p).abs() < 1e-8)
        }
    }

    #[test]
    fn builtins_validate() {
        let params = |v: &[(&str, &str)]| v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect::<Vec<_>>();
        for f in [
            builtin_field("twist", &[]).unwrap(),
            builtin_field("twist", &params(&[("longitudinal", "1,0.5"), ("meridional", "2,-1")])).unwrap(),
            builtin_field("perturbed_twist", &params(&[("eps", "0.3")])).unwrap(),
            builtin_field("perturbed-twist", &params(&[("eps", "1"), ("major", "3"), ("minor", "0.5")])).unwrap(),
        ] {
            f.validate().unwrap();
        }
        assert!(matches!(builtin_field("vortex", &[]), Err(FlowError::UnknownField(_))));
        assert!(builtin_field("twist", &params(&[("eps", "0.1")])).is_err());
        assert!(builtin_field("twist", &params(&[("major", "1"), ("minor", "1")])).is_err());
        assert!(builtin_field("perturbed_twist", &params(&[("eps", "-1")])).is_err());
    }

    #[test]
    fn perturbation_zero_is_twist() {
        let params = |e: &str| vec![("eps".to_string(), e.to_string())];
        let a = builtin_field("twist", &[]).unwrap();
        let b = builtin_field("perturbed_twist", &params("0")).unwrap();
        for p in a.domain.interior_samples(50) {
            assert_eq!(a.eval(p), b.eval(p));
        }
    }

    #[test]
    fn profiles() {
        assert_eq!(Profile::parse("2").unwrap(), Profile::constant(2.0));
        assert_eq!(Profile::parse("1, -0.5").unwrap(), Profile { constant: 1.0, slope: -0.5 });
        assert!(Profile::parse("1,2,3").is_err());
        assert!(Profile::parse("x").is_err());
    }
}
