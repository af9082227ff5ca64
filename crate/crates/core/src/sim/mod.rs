//! Seeded Monte Carlo campaigns.
//!
//! Every unit of work (a chunk of symbols, a packet, a topology) draws its
//! randomness from its own generator, seeded from the master seed and the
//! unit's coordinates. Units may run on any number of threads; results are
//! always reduced in index order, so reports do not depend on the worker
//! count.

pub mod ber;
pub mod calibrate;
pub mod link;
pub mod network;
pub mod pipeline;

use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub use ber::{
    crossing_snr, run_coded_ber, run_uncoded_ber, CodedBerConfig, CodedBerRow, UncodedBerConfig, UncodedBerRow,
};
pub use calibrate::{calibrated_table, recalibrate_thresholds, CalibrationConfig, CalibrationRow};
pub use link::{run_link_throughput, LinkConfig, ThroughputRow};
pub use network::{run_network_sim, NetworkConfig, NetworkRow, NetworkTopology};
pub use pipeline::{DecoderMetric, LanePlan, PacketOutcome, Pipeline, PipelineConfig};

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the unit at `path` under `master`.
pub fn unit_seed(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(splitmix(master), |acc, &p| splitmix(acc ^ splitmix(p)))
}

pub fn unit_rng(master: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(unit_seed(master, path))
}

/// Units evaluated per round of a stopping-rule run.
const ROUND: usize = 64;

/// Worker pool. Results never depend on the number of workers.
pub struct Engine {
    pool: rayon::ThreadPool,
    workers: usize,
}

impl Engine {
    /// `workers = 0` uses the available parallelism.
    pub fn new(workers: usize) -> Result<Self> {
        let workers = if workers == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            workers
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
        Ok(Engine { pool, workers })
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    /// Evaluates `f` on every index, returning results in index order.
    pub fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        self.pool.install(|| (0..n).into_par_iter().map(&f).collect())
    }

    /// Feeds unit results `f(0), f(1), ...` to `accept` in index order until
    /// it returns `true` or `max_units` have been consumed. Returns the
    /// number of units consumed. Units computed past the stopping point are
    /// discarded, so the outcome is the same for any worker count.
    pub fn run_until<T, F, A>(&self, max_units: usize, f: F, mut accept: A) -> usize
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
        A: FnMut(T) -> bool,
    {
        let mut start = 0;
        while start < max_units {
            let end = (start + ROUND.max(self.workers)).min(max_units);
            let results: Vec<T> = self.pool.install(|| (start..end).into_par_iter().map(&f).collect());
            for (i, r) in results.into_iter().enumerate() {
                if accept(r) {
                    return start + i + 1;
                }
            }
            start = end;
        }
        max_units
    }
}

/// 95% normal-approximation half-width of a binomial proportion.
pub fn ci95_halfwidth(errors: u64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    let p = errors as f64 / trials as f64;
    1.96 * (p * (1.0 - p) / trials as f64).sqrt()
}

/// Result of one campaign run.
#[derive(Debug, Clone, Serialize)]
pub struct SimReport<R> {
    pub campaign: String,
    pub seed: u64,
    pub workers: usize,
    pub config: serde_json::Value,
    pub rows: Vec<R>,
    pub wall_time_s: f64,
}

impl<R: Serialize> SimReport<R> {
    pub(crate) fn new<C: Serialize>(campaign: &str, seed: u64, engine: &Engine, config: &C, started: Instant, rows: Vec<R>) -> Result<Self> {
        Ok(SimReport {
            campaign: campaign.to_string(),
            seed,
            workers: engine.workers(),
            config: serde_json::to_value(config).map_err(|e| Error::Config(e.to_string()))?,
            rows,
            wall_time_s: started.elapsed().as_secs_f64(),
        })
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        for r in &self.rows {
            wr.serialize(r).map_err(csv_err)?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    /// Run manifest: everything needed to reproduce the CSV.
    pub fn manifest(&self) -> serde_json::Value {
        serde_json::json!({
            "campaign": self.campaign,
            "seed": self.seed,
            "workers": self.workers,
            "config": self.config,
            "rows": self.rows.len(),
            "wall_time_s": self.wall_time_s,
            "version": env!("CARGO_PKG_VERSION"),
        })
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}
