//! Single-link AMC throughput under Rician block fading.
//!
//! Each packet slot draws one fading gain and one SNR estimate; every AMC
//! table sees the same draws, and two tables choosing the same scheme see
//! the same payload and noise. A packet counts its payload if it decodes
//! without a single bit error, otherwise nothing; a slot in which no scheme
//! qualifies is deferred and contributes zero throughput.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::pipeline::{PacketOutcome, Pipeline, PipelineConfig};
use super::{unit_rng, Engine, SimReport};
use crate::amc::{default_tables, estimate_snr, select_scheme, AmcTable, CodeRate, SnrEstimator};
use crate::channel::{linear_to_db, n0_from_snr_db, RicianBlockModel};
use crate::constellation::Kind;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkConfig {
    /// The first table is the reference for the reported gains.
    pub tables: Vec<AmcTable>,
    pub mean_snr_db: Vec<f64>,
    pub n_packets: usize,
    pub estimator: SnrEstimator,
    pub rician_k_db: f64,
    pub base: PipelineConfig,
}

impl Default for LinkConfig {
    fn default() -> Self {
        let (conv, aug) = default_tables();
        LinkConfig {
            tables: vec![conv, aug],
            mean_snr_db: vec![8.0, 11.0, 14.0, 17.0],
            n_packets: 1000,
            estimator: SnrEstimator::perfect(),
            rician_k_db: 6.0,
            base: PipelineConfig::new(Kind::Bpsk, CodeRate::Half),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThroughputRow {
    pub table: String,
    pub csi_error_std_db: f64,
    pub mean_snr_db: f64,
    pub packets: u64,
    pub deferred: u64,
    pub delivered: u64,
    pub symbols: u64,
    pub delivered_bits: u64,
    /// Mean over packet slots of delivered bits per channel symbol.
    pub throughput: f64,
    /// Throughput gain over the first table at the same SNR, in percent.
    pub gain_pct: f64,
}

/// Per-slot outcomes of one packet under every table; `None` is deferred.
pub(crate) type SlotOutcome = Vec<Option<PacketOutcome>>;

/// One prepared pipeline per scheme id used by any table.
pub(crate) struct SchemeBank {
    pipes: BTreeMap<u8, Pipeline>,
}

impl SchemeBank {
    pub(crate) fn new(tables: &[AmcTable], base: &PipelineConfig) -> Result<Self> {
        if tables.is_empty() {
            return Err(Error::Config("at least one AMC table is required".into()));
        }
        let mut pipes = BTreeMap::new();
        for s in tables.iter().flat_map(|t| t.schemes()) {
            if !pipes.contains_key(&s.id) {
                let mut pc = base.clone();
                pc.modulation = s.modulation;
                pc.code_rate = s.code_rate;
                pipes.insert(s.id, Pipeline::new(pc)?);
            }
        }
        Ok(SchemeBank { pipes })
    }

    /// Runs one slot at the given mean SNR. `path` locates the slot's
    /// random streams under `seed`.
    pub(crate) fn slot(
        &self,
        tables: &[AmcTable],
        mean_snr_db: f64,
        estimator: &SnrEstimator,
        fading: &RicianBlockModel,
        seed: u64,
        path: &[u64],
    ) -> Result<SlotOutcome> {
        let mut p = path.to_vec();
        p.push(0);
        let mut ch = unit_rng(seed, &p);
        let h = fading.gain(&mut ch);
        let snr = mean_snr_db + linear_to_db(h.norm_sqr());
        let est = estimate_snr(snr, estimator, &mut ch);
        // Coherent equalisation turns y = h x + n into x + n / h.
        let n0 = n0_from_snr_db(snr);

        let mut cache: BTreeMap<u8, PacketOutcome> = BTreeMap::new();
        let mut out = Vec::with_capacity(tables.len());
        for t in tables {
            let Some(s) = select_scheme(est, estimator, t) else {
                out.push(None);
                continue;
            };
            if let Some(o) = cache.get(&s.id) {
                out.push(Some(*o));
                continue;
            }
            p.truncate(path.len());
            p.extend([1, s.id as u64]);
            let o = self.pipes[&s.id].run_packet(n0, &mut unit_rng(seed, &p))?;
            cache.insert(s.id, o);
            out.push(Some(o));
        }
        Ok(out)
    }
}

/// Running totals of one table.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Tally {
    pub packets: u64,
    pub deferred: u64,
    pub delivered: u64,
    pub symbols: u64,
    pub delivered_bits: u64,
    pub throughput_sum: f64,
}

impl Tally {
    pub(crate) fn add(&mut self, o: &Option<PacketOutcome>) {
        self.packets += 1;
        match o {
            None => self.deferred += 1,
            Some(o) => {
                self.symbols += o.symbols as u64;
                if o.delivered() {
                    self.delivered += 1;
                    self.delivered_bits += o.payload_bits as u64;
                }
                self.throughput_sum += o.throughput();
            }
        }
    }

    pub(crate) fn throughput(&self) -> f64 {
        if self.packets == 0 {
            0.0
        } else {
            self.throughput_sum / self.packets as f64
        }
    }
}

pub(crate) fn gain_pct(reference: f64, x: f64) -> f64 {
    if reference > 0.0 {
        100.0 * (x / reference - 1.0)
    } else {
        0.0
    }
}

pub fn run_link_throughput(cfg: &LinkConfig, seed: u64, engine: &Engine) -> Result<SimReport<ThroughputRow>> {
    if cfg.n_packets == 0 {
        return Err(Error::Config("n_packets must be at least 1".into()));
    }
    let started = Instant::now();
    let bank = SchemeBank::new(&cfg.tables, &cfg.base)?;
    let fading = RicianBlockModel::new(cfg.rician_k_db);
    let mut rows = Vec::new();
    for (si, &snr) in cfg.mean_snr_db.iter().enumerate() {
        let slots = engine.map(cfg.n_packets, |k| {
            bank.slot(&cfg.tables, snr, &cfg.estimator, &fading, seed, &[2, si as u64, k as u64])
        });
        let mut tallies = vec![Tally::default(); cfg.tables.len()];
        for s in slots {
            for (t, o) in tallies.iter_mut().zip(s?.iter()) {
                t.add(o);
            }
        }
        let reference = tallies[0].throughput();
        for (table, t) in cfg.tables.iter().zip(&tallies) {
            rows.push(ThroughputRow {
                table: table.name.clone(),
                csi_error_std_db: cfg.estimator.error_std_db,
                mean_snr_db: snr,
                packets: t.packets,
                deferred: t.deferred,
                delivered: t.delivered,
                symbols: t.symbols,
                delivered_bits: t.delivered_bits,
                throughput: t.throughput(),
                gain_pct: gain_pct(reference, t.throughput()),
            });
        }
    }
    SimReport::new("link-throughput", seed, engine, cfg, started, rows)
}
