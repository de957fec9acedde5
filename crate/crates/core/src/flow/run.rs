//! The per-horizon pipeline: integrate, close, project, braid, evaluate.

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::RunConfig;
use super::field::ValidationReport;
use super::integrate::integrate_orbit;
use super::knot::close_and_validate;
use super::project::project_to_diagram;
use super::FlowError;
use crate::diagram::vogel;
use crate::invariants::inertia::exact_inertia_and_det;
use crate::invariants::{omega_signature_of_matrix, Theta};
use crate::seifert::seifert_matrix;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaRecord {
    pub theta: Theta,
    pub value: i64,
    pub ambiguous: bool,
    /// σ_ω / σ, null when σ = 0.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KnotRecord {
    pub samples: usize,
    pub guard_events: usize,
    pub chord_length: f64,
    pub projection_attempts: usize,
    pub crossings: usize,
    pub strands: usize,
    pub vogel_moves: usize,
    pub sigma: i64,
    /// Decimal string; it can exceed 64 bits.
    pub determinant: String,
    pub omega: Vec<OmegaRecord>,
    /// |σ|/2.
    pub genus_lower: f64,
    /// Genus of the band surface of the braid.
    pub genus_upper: f64,
    pub sigma_over_t2: f64,
    pub lower_over_t2: f64,
    pub upper_over_t2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Ok(KnotRecord),
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowRecord {
    pub horizon: f64,
    pub outcome: Outcome,
}

impl FlowRecord {
    pub fn knot(&self) -> Option<&KnotRecord> {
        match &self.outcome {
            Outcome::Ok(k) => Some(k),
            Outcome::Skipped { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowRun {
    pub config: RunConfig,
    pub validation: ValidationReport,
    pub records: Vec<FlowRecord>,
    /// SHA-256 of the configuration and records.
    pub hash: String,
}

/// Seed for horizon `index`, derived from the run seed by a SplitMix64 step.
pub fn horizon_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Validates the field, then runs every horizon in order.
pub fn asymptotic_run(cfg: &RunConfig) -> Result<FlowRun, FlowError> {
    let validation = cfg.field.validate()?;
    let records = (0..cfg.tgrid.len()).map(|i| flow_record(cfg, i)).collect();
    Ok(FlowRun::assemble(cfg.clone(), validation, records))
}

/// One horizon of the pipeline. Failures become skipped records.
pub fn flow_record(cfg: &RunConfig, index: usize) -> FlowRecord {
    let horizon = cfg.tgrid[index];
    let outcome = match knot_record(cfg, index) {
        Ok(k) => Outcome::Ok(k),
        Err(e) => {
            log::info!("T = {horizon}: skipped: {e}");
            Outcome::Skipped { reason: e.to_string() }
        }
    };
    FlowRecord { horizon, outcome }
}

fn knot_record(cfg: &RunConfig, index: usize) -> Result<KnotRecord, FlowError> {
    let t = cfg.tgrid[index];
    let orbit = integrate_orbit(&cfg.field, cfg.x0, t, cfg.h)?;
    let mut knot = close_and_validate(&orbit.points);
    knot.horizon = t;
    if !knot.embedded {
        return Err(FlowError::NotEmbedded);
    }
    let projection = project_to_diagram(&knot, cfg.direction, cfg.retries, horizon_seed(cfg.seed, index))?;
    let braided = vogel(&projection.diagram)?;
    let seifert = seifert_matrix(&braided.braid);
    let (inertia, det) = exact_inertia_and_det(&seifert.matrix.plus_transpose(1))?;
    let sigma = inertia.signature();
    let omega = cfg
        .thetas
        .iter()
        .map(|&theta| {
            let s = omega_signature_of_matrix(&seifert.matrix, theta);
            OmegaRecord { theta, value: s.value, ambiguous: s.warning(), ratio: (sigma != 0).then(|| s.value as f64 / sigma as f64) }
        })
        .collect();
    let genus_lower = sigma.abs() as f64 / 2.0;
    let genus_upper = *seifert.genus.numer() as f64 / *seifert.genus.denom() as f64;
    let t2 = t * t;
    Ok(KnotRecord {
        samples: orbit.points.len(),
        guard_events: orbit.guard_events,
        chord_length: knot.chord_length,
        projection_attempts: projection.attempts,
        crossings: projection.diagram.crossing_count(),
        strands: braided.braid.strands(),
        vogel_moves: braided.moves,
        sigma,
        determinant: num_traits::Signed::abs(&det).to_string(),
        omega,
        genus_lower,
        genus_upper,
        sigma_over_t2: sigma as f64 / t2,
        lower_over_t2: genus_lower / t2,
        upper_over_t2: genus_upper / t2,
    })
}

impl FlowRun {
    /// Sorts records by horizon and computes the hash.
    pub fn assemble(config: RunConfig, validation: ValidationReport, mut records: Vec<FlowRecord>) -> FlowRun {
        records.sort_by(|a, b| a.horizon.total_cmp(&b.horizon));
        let body = serde_json::to_string(&(&config, &records)).expect("records serialize");
        let hash = hex::encode(Sha256::digest(body.as_bytes()));
        FlowRun { config, validation, records, hash }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run serializes")
    }

    /// One row per horizon.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["T".to_string(), "status".into(), "crossings".into(), "strands".into(), "sigma".into(), "determinant".into()];
        for th in &self.config.thetas {
            header.push(format!("omega({th})"));
            header.push(format!("omega_ratio({th})"));
        }
        header.extend(["genus_lower", "genus_upper", "sigma_over_T2", "lower_over_T2", "upper_over_T2", "reason"].map(String::from));
        w.write_record(&header).expect("in-memory write");
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.records {
            let mut row = vec![r.horizon.to_string()];
            match &r.outcome {
                Outcome::Ok(k) => {
                    row.extend(["ok".to_string(), k.crossings.to_string(), k.strands.to_string(), k.sigma.to_string(), k.determinant.clone()]);
                    for o in &k.omega {
                        row.push(o.value.to_string());
                        row.push(opt(o.ratio));
                    }
                    row.extend([k.genus_lower, k.genus_upper, k.sigma_over_t2, k.lower_over_t2, k.upper_over_t2].map(|x| x.to_string()));
                    row.push(String::new());
                }
                Outcome::Skipped { reason } => {
                    row.push("skipped".into());
                    row.extend(std::iter::repeat_n(String::new(), header.len() - 3));
                    row.push(reason.clone());
                }
            }
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    /// Records with a knot.
    pub fn knots(&self) -> impl Iterator<Item = (f64, &KnotRecord)> {
        self.records.iter().filter_map(|r| r.knot().map(|k| (r.horizon, k)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_differ_per_horizon() {
        assert_ne!(horizon_seed(1, 0), horizon_seed(1, 1));
        assert_ne!(horizon_seed(1, 0), horizon_seed(2, 0));
        assert_eq!(horizon_seed(5, 3), horizon_seed(5, 3));
    }
}
