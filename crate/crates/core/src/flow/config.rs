//! Key-value run configuration.
//!
//! ```text
//! # comments start with '#'
//! field = perturbed_twist eps=0.3 longitudinal=2,0.5
//! x0 = 2.4, 0, 0.1
//! tgrid = 2*pi, 4*pi, 6*pi
//! h = 0.01
//! theta = 1/3, 1/4
//! seed = 7
//! retries = 8
//! ```
//!
//! A field can instead be given as three expressions `field.x`, `field.y`,
//! `field.z`, on the domain `domain = ball radius=R` or
//! `domain = solid_torus major=R minor=r`.

use serde::Serialize;

use super::expr::Expr;
use super::field::{builtin_field, parse_field, Domain, FieldSpec, Point};
use super::project::DEFAULT_DIRECTION;
use super::FlowError;
use crate::invariants::Theta;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub field: FieldSpec,
    pub x0: Point,
    pub tgrid: Vec<f64>,
    pub h: f64,
    pub thetas: Vec<Theta>,
    pub seed: u64,
    pub retries: usize,
    pub direction: Point,
}

fn err(line: usize, message: impl Into<String>) -> FlowError {
    FlowError::Config { line, message: message.into() }
}

fn numbers(line: usize, v: &str) -> Result<Vec<f64>, FlowError> {
    v.split(',').map(|t| Expr::constant(t.trim()).map_err(|e| err(line, e.to_string()))).collect()
}

fn point(line: usize, v: &str) -> Result<Point, FlowError> {
    let xs = numbers(line, v)?;
    <[f64; 3]>::try_from(xs).map_err(|_| err(line, "expected three comma-separated coordinates"))
}

fn key_values(line: usize, words: &[&str]) -> Result<Vec<(String, String)>, FlowError> {
    words
        .iter()
        .map(|w| w.split_once('=').map(|(k, v)| (k.to_string(), v.to_string())).ok_or_else(|| err(line, format!("expected key=value, got {w:?}"))))
        .collect()
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, FlowError> {
        let mut builtin: Option<(usize, String, Vec<(String, String)>)> = None;
        let mut exprs: [Option<(usize, String)>; 3] = Default::default();
        let mut domain: Option<(usize, String, Vec<(String, String)>)> = None;
        let (mut x0, mut tgrid, mut h, mut thetas, mut seed, mut retries, mut direction) = (None, None, 0.01, None, 0, 8, DEFAULT_DIRECTION);
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| err(line, "expected key = value"))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(err(line, format!("duplicate key {key}")));
            }
            match key {
                "field" => {
                    let words: Vec<&str> = value.split_whitespace().collect();
                    let (name, rest) = words.split_first().ok_or_else(|| err(line, "missing field name"))?;
                    builtin = Some((line, name.to_string(), key_values(line, rest)?));
                }
                "field.x" | "field.y" | "field.z" => {
                    let slot = (key.as_bytes()[6] - b'x') as usize;
                    Expr::parse(value).map_err(|e| err(line, e.to_string()))?;
                    exprs[slot] = Some((line, value.to_string()));
                }
                "domain" => {
                    let words: Vec<&str> = value.split_whitespace().collect();
                    let (name, rest) = words.split_first().ok_or_else(|| err(line, "missing domain kind"))?;
                    domain = Some((line, name.to_string(), key_values(line, rest)?));
                }
                "x0" => x0 = Some(point(line, value)?),
                "direction" => direction = point(line, value)?,
                "tgrid" => {
                    let ts = numbers(line, value)?;
                    if ts.is_empty() || ts.iter().any(|t| !(*t > 0.0 && t.is_finite())) || ts.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(err(line, "tgrid must be positive and strictly increasing"));
                    }
                    tgrid = Some(ts);
                }
                "h" => {
                    h = Expr::constant(value).map_err(|e| err(line, e.to_string()))?;
                    if !(h > 0.0 && h.is_finite()) {
                        return Err(err(line, "h must be positive"));
                    }
                }
                "theta" => {
                    let parsed: Result<Vec<Theta>, _> = value.split(',').map(|t| t.trim().parse::<Theta>()).collect();
                    thetas = Some(parsed.map_err(|e| err(line, e.to_string()))?);
                }
                "seed" => seed = value.parse().map_err(|_| err(line, format!("bad seed {value:?}")))?,
                "retries" => retries = value.parse().map_err(|_| err(line, format!("bad retries {value:?}")))?,
                _ => return Err(err(line, format!("unknown key {key}"))),
            }
        }
        let field = match (builtin, exprs) {
            (Some((line, name, mut params)), [None, None, None]) => {
                if let Some((dline, kind, dparams)) = domain {
                    if kind != "solid_torus" {
                        return Err(err(dline, format!("{name} needs a solid_torus domain")));
                    }
                    params.extend(dparams);
                }
                builtin_field(&name, &params).map_err(|e| err(line, e.to_string()))?
            }
            (None, [Some((lx, x)), Some((_, y)), Some((_, z))]) => {
                let mut f = parse_field(&x, &y, &z).map_err(|e| err(lx, e.to_string()))?;
                if let Some((dline, kind, params)) = domain {
                    f.domain = parse_domain(dline, &kind, &params)?;
                }
                f
            }
            (None, [None, None, None]) => return Err(err(0, "no field given")),
            (Some((line, ..)), _) => return Err(err(line, "give either a named field or field.x/y/z, not both")),
            (None, e) => {
                let line = e.iter().flatten().map(|(l, _)| *l).min().unwrap_or(0);
                return Err(err(line, "field.x, field.y and field.z must all be given"));
            }
        };
        let x0 = x0.ok_or_else(|| err(0, "missing x0"))?;
        let tgrid = tgrid.ok_or_else(|| err(0, "missing tgrid"))?;
        let thetas = thetas.unwrap_or_else(|| vec![Theta::new(1, 3).expect("valid θ")]);
        Ok(RunConfig { field, x0, tgrid, h, thetas, seed, retries, direction })
    }
}

fn parse_domain(line: usize, kind: &str, params: &[(String, String)]) -> Result<Domain, FlowError> {
    let get = |k: &str| -> Result<f64, FlowError> {
        let (_, v) = params.iter().find(|(key, _)| key == k).ok_or_else(|| err(line, format!("{kind} needs {k}=")))?;
        Expr::constant(v).map_err(|e| err(line, e.to_string()))
    };
    let allowed: &[&str] = match kind {
        "ball" => &["radius"],
        "solid_torus" => &["major", "minor"],
        _ => return Err(err(line, format!("unknown domain {kind}"))),
    };
    if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        return Err(err(line, format!("unknown parameter {k} for {kind}")));
    }
    let d = match kind {
        "ball" => Domain::Ball { radius: get("radius")? },
        _ => Domain::SolidTorus { major: get("major")?, minor: get("minor")? },
    };
    d.check().map_err(|e| err(line, e.to_string()))?;
    Ok(d)
}
