//! Modulation-and-coding tables, SNR estimation error and scheme selection.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::constellation::Kind;
use crate::error::{Error, Result};
use crate::fec::PuncturePattern;

/// Bits carried per 7-trit word of the block codec.
const BITS_PER_TRIT: f64 = 11.0 / 7.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CodeRate {
    Half,
    ThreeQuarters,
}

impl CodeRate {
    pub fn value(self) -> f64 {
        match self {
            CodeRate::Half => 0.5,
            CodeRate::ThreeQuarters => 0.75,
        }
    }

    pub fn puncture(self) -> Option<PuncturePattern> {
        match self {
            CodeRate::Half => None,
            CodeRate::ThreeQuarters => Some(PuncturePattern::rate_3_4()),
        }
    }
}

impl fmt::Display for CodeRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeRate::Half => "1/2",
            CodeRate::ThreeQuarters => "3/4",
        })
    }
}

impl FromStr for CodeRate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1/2" | "0.5" => Ok(CodeRate::Half),
            "3/4" | "0.75" => Ok(CodeRate::ThreeQuarters),
            other => Err(Error::MalformedInput(format!("unsupported code rate '{other}'"))),
        }
    }
}

/// Payload bits per symbol: `rate * (bits + trits * 11/7)`.
pub fn nominal_throughput(kind: Kind, rate: CodeRate) -> f64 {
    let (b, t) = kind.digits_per_symbol();
    rate.value() * (b as f64 + t as f64 * BITS_PER_TRIT)
}

/// One modulation-and-coding scheme. `id` is the value signalled in the
/// (5-bit) rate field of simulated packet headers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmcScheme {
    pub id: u8,
    pub modulation: Kind,
    pub code_rate: CodeRate,
    pub throughput: f64,
    pub min_snr_db: f64,
}

impl AmcScheme {
    pub fn new(id: u8, modulation: Kind, code_rate: CodeRate, min_snr_db: f64) -> Result<Self> {
        if id >= 32 {
            return Err(Error::Config(format!("scheme id {id} does not fit in 5 bits")));
        }
        Ok(AmcScheme {
            id,
            modulation,
            code_rate,
            throughput: nominal_throughput(modulation, code_rate),
            min_snr_db,
        })
    }

    pub fn label(&self) -> String {
        format!("{}:{}", self.modulation, self.code_rate)
    }
}

/// Schemes sorted by ascending activation threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmcTable {
    pub name: String,
    schemes: Vec<AmcScheme>,
}

impl AmcTable {
    pub fn new(name: impl Into<String>, mut schemes: Vec<AmcScheme>) -> Result<Self> {
        if schemes.is_empty() {
            return Err(Error::Config("AMC table must not be empty".into()));
        }
        schemes.sort_by(|a, b| a.min_snr_db.partial_cmp(&b.min_snr_db).unwrap());
        Ok(AmcTable {
            name: name.into(),
            schemes,
        })
    }

    pub fn schemes(&self) -> &[AmcScheme] {
        &self.schemes
    }

    pub fn find(&self, kind: Kind, rate: CodeRate) -> Option<&AmcScheme> {
        self.schemes.iter().find(|s| s.modulation == kind && s.code_rate == rate)
    }

    /// Highest-threshold scheme whose threshold does not exceed `effective_snr_db`.
    pub fn select(&self, effective_snr_db: f64) -> Option<&AmcScheme> {
        self.schemes.iter().rev().find(|s| s.min_snr_db <= effective_snr_db)
    }

    /// Serialised as `kind:rate@threshold` entries separated by commas.
    pub fn to_config_value(&self) -> String {
        self.schemes
            .iter()
            .map(|s| format!("{}:{}@{}", s.modulation, s.code_rate, s.min_snr_db))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Inverse of [`Self::to_config_value`]; ids are looked up in the full
    /// scheme list so they stay stable across tables.
    pub fn from_config_value(name: &str, value: &str) -> Result<Self> {
        let mut schemes = Vec::new();
        for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (scheme, thr) = item
                .split_once('@')
                .ok_or_else(|| Error::Config(format!("AMC entry '{item}' lacks '@threshold'")))?;
            let (kind, rate) = parse_scheme(scheme)?;
            let min_snr_db: f64 = thr
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad threshold in '{item}'")))?;
            let id = scheme_id(kind, rate);
            schemes.push(AmcScheme::new(id, kind, rate, min_snr_db)?);
        }
        AmcTable::new(name, schemes)
    }
}

/// Parses `kind:rate`, e.g. `tpsk:3/4`.
pub fn parse_scheme(s: &str) -> Result<(Kind, CodeRate)> {
    let (k, r) = s
        .split_once(':')
        .ok_or_else(|| Error::MalformedInput(format!("scheme '{s}' must be <kind>:<rate>")))?;
    Ok((k.trim().parse()?, r.parse()?))
}

/// Every modulation/rate pair with its coded-BER threshold (dB), in table order.
pub const FULL_TABLE: [(Kind, CodeRate, f64, bool); 14] = [
    (Kind::Bpsk, CodeRate::Half, 7.12, true),
    (Kind::Bpsk, CodeRate::ThreeQuarters, 7.97, true),
    (Kind::Tpsk, CodeRate::Half, 8.89, false),
    (Kind::Tpsk, CodeRate::ThreeQuarters, 9.3, true),
    (Kind::Qpsk, CodeRate::Half, 10.2, false),
    (Kind::Qpsk, CodeRate::ThreeQuarters, 11.04, true),
    (Kind::H6, CodeRate::Half, 12.81, false),
    (Kind::H6, CodeRate::ThreeQuarters, 13.27, true),
    (Kind::H8, CodeRate::Half, 13.78, false),
    (Kind::H8, CodeRate::ThreeQuarters, 14.58, true),
    (Kind::H12, CodeRate::Half, 15.73, false),
    (Kind::H12, CodeRate::ThreeQuarters, 16.18, true),
    (Kind::Qam16, CodeRate::Half, 16.53, false),
    (Kind::Qam16, CodeRate::ThreeQuarters, 17.35, true),
];

/// Stable header id of a scheme: its row in [`FULL_TABLE`], or 14.. for pairs outside it.
pub fn scheme_id(kind: Kind, rate: CodeRate) -> u8 {
    if let Some(i) = FULL_TABLE.iter().position(|r| r.0 == kind && r.1 == rate) {
        return i as u8;
    }
    let k = Kind::ALL.iter().position(|&x| x == kind).unwrap() as u8;
    let extra = 14 + k * 2 + (rate == CodeRate::ThreeQuarters) as u8;
    extra.min(31)
}

pub fn full_table() -> AmcTable {
    let schemes = FULL_TABLE
        .iter()
        .enumerate()
        .map(|(i, &(k, r, thr, _))| AmcScheme::new(i as u8, k, r, thr).unwrap())
        .collect();
    AmcTable::new("full", schemes).unwrap()
}

/// (conventional, augmented): BPSK/QPSK/16-QAM at both rates, and the
/// eight starred schemes mixing rectangular and hexagonal constellations.
pub fn default_tables() -> (AmcTable, AmcTable) {
    let all = full_table();
    let conventional = all
        .schemes()
        .iter()
        .filter(|s| matches!(s.modulation, Kind::Bpsk | Kind::Qpsk | Kind::Qam16))
        .copied()
        .collect();
    let augmented = FULL_TABLE
        .iter()
        .zip(all.schemes())
        .filter(|(row, _)| row.3)
        .map(|(_, s)| *s)
        .collect();
    (
        AmcTable::new("conventional", conventional).unwrap(),
        AmcTable::new("augmented", augmented).unwrap(),
    )
}

/// Additive Gaussian SNR estimation error on the dB axis plus a selection back-off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrEstimator {
    pub error_std_db: f64,
    pub margin_db: f64,
}

impl SnrEstimator {
    /// Back-off equal to the error standard deviation.
    pub fn new(error_std_db: f64) -> Self {
        SnrEstimator {
            error_std_db,
            margin_db: error_std_db,
        }
    }

    pub fn perfect() -> Self {
        Self::new(0.0)
    }

    pub fn with_margin(error_std_db: f64, margin_db: f64) -> Result<Self> {
        if margin_db < 0.0 || error_std_db < 0.0 {
            return Err(Error::Domain("estimator std and margin must be >= 0".into()));
        }
        Ok(SnrEstimator {
            error_std_db,
            margin_db,
        })
    }
}

impl Default for SnrEstimator {
    fn default() -> Self {
        Self::new(1.0)
    }
}

pub fn estimate_snr<R: Rng + ?Sized>(true_snr_db: f64, estimator: &SnrEstimator, rng: &mut R) -> f64 {
    if estimator.error_std_db == 0.0 {
        return true_snr_db;
    }
    let z: f64 = StandardNormal.sample(rng);
    true_snr_db + estimator.error_std_db * z
}

/// Scheme chosen for `estimated_snr_db - margin`; `None` defers the packet.
pub fn select_scheme<'a>(estimated_snr_db: f64, estimator: &SnrEstimator, table: &'a AmcTable) -> Option<&'a AmcScheme> {
    table.select(estimated_snr_db - estimator.margin_db)
}
