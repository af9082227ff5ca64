//! Regenerates AMC activation thresholds from simulated coded BER curves.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::ber::{crossing_snr, run_coded_ber, CodedBerConfig};
use super::{Engine, SimReport};
use crate::amc::{parse_scheme, scheme_id, AmcScheme, AmcTable, FULL_TABLE};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationConfig {
    pub target_ber: f64,
    pub ber: CodedBerConfig,
}

impl CalibrationConfig {
    /// Every scheme of the full table over `snr_grid_db`.
    pub fn new(snr_grid_db: Vec<f64>, target_ber: f64) -> Self {
        let schemes = FULL_TABLE.iter().map(|r| (r.0, r.1)).collect();
        CalibrationConfig {
            target_ber,
            ber: CodedBerConfig::new(schemes, snr_grid_db),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationRow {
    pub scheme: String,
    pub target_ber: f64,
    /// Interpolated SNR reaching the target; empty when the grid never does.
    pub threshold_db: Option<f64>,
    /// Threshold of the built-in table, when the scheme has one.
    pub table_threshold_db: Option<f64>,
}

pub fn recalibrate_thresholds(cfg: &CalibrationConfig, seed: u64, engine: &Engine) -> Result<SimReport<CalibrationRow>> {
    let started = Instant::now();
    let curves = run_coded_ber(&cfg.ber, seed, engine)?;
    let rows = cfg
        .ber
        .schemes
        .iter()
        .map(|&(kind, rate)| {
            let label = format!("{kind}:{rate}");
            let mut curve: Vec<(f64, f64, u64)> = curves
                .rows
                .iter()
                .filter(|r| r.scheme == label)
                .map(|r| (r.snr_db, r.ber, r.digits_sent))
                .collect();
            curve.sort_by(|a, b| a.0.total_cmp(&b.0));
            CalibrationRow {
                threshold_db: crossing_snr(&curve, cfg.target_ber),
                table_threshold_db: FULL_TABLE.iter().find(|r| r.0 == kind && r.1 == rate).map(|r| r.2),
                scheme: label,
                target_ber: cfg.target_ber,
            }
        })
        .collect();
    SimReport::new("recalibrate-thresholds", seed, engine, cfg, started, rows)
}

/// AMC table from calibrated rows; schemes that never reached the target
/// are left out.
pub fn calibrated_table(name: &str, rows: &[CalibrationRow]) -> Result<AmcTable> {
    let mut schemes = Vec::new();
    for r in rows {
        if let Some(thr) = r.threshold_db {
            let (k, rate) = parse_scheme(&r.scheme)?;
            schemes.push(AmcScheme::new(scheme_id(k, rate), k, rate, thr)?);
        }
    }
    AmcTable::new(name, schemes)
}
