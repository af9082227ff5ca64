//! Flat `key = value` configuration file.
//!
//! Blank lines and lines starting with `#` are ignored. Recognised keys:
//!
//! | key | example |
//! |---|---|
//! | `seed` | `2024` |
//! | `workers` | `0` (available parallelism) |
//! | `packet_bytes` | `1024` |
//! | `interleaver.cols` | `16` |
//! | `decoder.metric` | `hard` or `soft` |
//! | `decoder.traceback` | `0` (whole block) or a depth |
//! | `code.binary.generators` | `1011011,1111001` |
//! | `code.ternary.generators` | `10212,11222` |
//! | `puncture.3/4` | `111001` |
//! | `codec.bits`, `codec.trits` | `11`, `7` |
//! | `amc.conventional`, `amc.augmented` | `bpsk:1/2@7.12,qpsk:1/2@10.2,...` |
//! | `amc.csi_error_std_db`, `amc.margin_db` | `1.0` |
//! | `channel.rician_k_db` | `6` |
//! | `network.alpha`, `network.boundary_snr_db` | `3`, `7` |
//!
//! Generators list one tap string per output, current input first.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::amc::{default_tables, AmcTable, CodeRate, SnrEstimator};
use crate::channel::PathLossModel;
use crate::constellation::Kind;
use crate::error::{Error, Result};
use crate::fec::{ConvCodeSpec, PuncturePattern};
use crate::sim::{DecoderMetric, PipelineConfig};
use crate::symbols::{BlockConversionCodec, Radix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub seed: u64,
    pub workers: usize,
    /// Modulation and rate fields are placeholders; campaigns override them.
    pub pipeline: PipelineConfig,
    pub conventional: AmcTable,
    pub augmented: AmcTable,
    pub estimator: SnrEstimator,
    pub rician_k_db: f64,
    pub path_loss: PathLossModel,
}

impl Default for Settings {
    fn default() -> Self {
        let (conventional, augmented) = default_tables();
        Settings {
            seed: 1,
            workers: 0,
            pipeline: PipelineConfig::new(Kind::Bpsk, CodeRate::Half),
            conventional,
            augmented,
            estimator: SnrEstimator::default(),
            rician_k_db: 6.0,
            path_loss: PathLossModel::default(),
        }
    }
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("bad value '{v}' for {key}")))
}

fn parse_generators(radix: Radix, v: &str) -> Result<ConvCodeSpec> {
    let gens = v
        .split([',', ' '])
        .filter(|g| !g.is_empty())
        .map(|g| {
            g.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::Config(format!("bad generator '{g}'")))
                })
                .collect::<Result<Vec<u8>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    ConvCodeSpec::new(radix, gens)
}

fn format_generators(code: &ConvCodeSpec) -> String {
    code.generators
        .iter()
        .map(|g| g.iter().map(|d| char::from(b'0' + d)).collect::<String>())
        .collect::<Vec<_>>()
        .join(",")
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Settings::default();
        let mut codec = (s.pipeline.codec.bits_per_block(), s.pipeline.codec.trits_per_block());
        let mut margin = None;
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", no + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "codec.bits" => codec.0 = num(k, v)?,
                "codec.trits" => codec.1 = num(k, v)?,
                "amc.margin_db" => margin = Some(num(k, v)?),
                _ => s.set(k, v)?,
            }
        }
        s.pipeline.codec = BlockConversionCodec::new(codec.0, codec.1)?;
        let m = margin.unwrap_or(s.estimator.error_std_db);
        s.estimator = SnrEstimator::with_margin(s.estimator.error_std_db, m)?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Sets one key. Codec and margin keys are only honoured by [`Self::parse`].
    pub fn set(&mut self, k: &str, v: &str) -> Result<()> {
        let p = &mut self.pipeline;
        match k {
            "seed" => self.seed = num(k, v)?,
            "workers" => self.workers = num(k, v)?,
            "packet_bytes" => p.packet_bytes = num(k, v)?,
            "interleaver.cols" => {
                p.interleaver_cols = num(k, v)?;
                if p.interleaver_cols == 0 {
                    return Err(Error::Config("interleaver.cols must be positive".into()));
                }
            }
            "decoder.metric" => p.metric = v.parse()?,
            "decoder.traceback" => {
                let d: usize = num(k, v)?;
                let t = (d > 0).then_some(d);
                p.binary_code.traceback = t;
                p.ternary_code.traceback = t;
            }
            "code.binary.generators" => {
                let tb = p.binary_code.traceback;
                p.binary_code = parse_generators(Radix::Binary, v)?.with_traceback(tb);
            }
            "code.ternary.generators" => {
                let tb = p.ternary_code.traceback;
                p.ternary_code = parse_generators(Radix::Ternary, v)?.with_traceback(tb);
            }
            "puncture.3/4" => p.puncture = PuncturePattern::parse(v)?,
            "amc.conventional" => self.conventional = AmcTable::from_config_value("conventional", v)?,
            "amc.augmented" => self.augmented = AmcTable::from_config_value("augmented", v)?,
            "amc.csi_error_std_db" => self.estimator.error_std_db = num(k, v)?,
            "channel.rician_k_db" => self.rician_k_db = num(k, v)?,
            "network.alpha" => self.path_loss.alpha = num(k, v)?,
            "network.boundary_snr_db" => self.path_loss.boundary_snr_db = num(k, v)?,
            _ => return Err(Error::Config(format!("unknown config key '{k}'"))),
        }
        Ok(())
    }

    pub fn tables(&self) -> Vec<AmcTable> {
        vec![self.conventional.clone(), self.augmented.clone()]
    }

    /// Renders every key; `parse` of the result gives back `self`.
    pub fn to_config_string(&self) -> String {
        let p = &self.pipeline;
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("seed", self.seed.to_string());
        kv("workers", self.workers.to_string());
        kv("packet_bytes", p.packet_bytes.to_string());
        kv("interleaver.cols", p.interleaver_cols.to_string());
        kv("decoder.metric", match p.metric {
            DecoderMetric::Hard => "hard".into(),
            DecoderMetric::Soft => "soft".into(),
        });
        kv("decoder.traceback", p.binary_code.traceback.unwrap_or(0).to_string());
        kv("code.binary.generators", format_generators(&p.binary_code));
        kv("code.ternary.generators", format_generators(&p.ternary_code));
        kv("puncture.3/4", p.puncture.keep().iter().map(|&b| if b { '1' } else { '0' }).collect());
        kv("codec.bits", p.codec.bits_per_block().to_string());
        kv("codec.trits", p.codec.trits_per_block().to_string());
        kv("amc.conventional", self.conventional.to_config_value());
        kv("amc.augmented", self.augmented.to_config_value());
        kv("amc.csi_error_std_db", self.estimator.error_std_db.to_string());
        kv("amc.margin_db", self.estimator.margin_db.to_string());
        kv("channel.rician_k_db", self.rician_k_db.to_string());
        kv("network.alpha", self.path_loss.alpha.to_string());
        kv("network.boundary_snr_db", self.path_loss.boundary_snr_db.to_string());
        out
    }
}
