//! Downlink network throughput: an access point at the centre of the unit
//! disc serving uniformly placed users round-robin.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::link::{gain_pct, SchemeBank, Tally};
use super::pipeline::PipelineConfig;
use super::{unit_rng, Engine, SimReport};
use crate::amc::{default_tables, AmcTable, CodeRate, SnrEstimator};
use crate::channel::{PathLossModel, RicianBlockModel};
use crate::constellation::Kind;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkTopology {
    pub positions: Vec<(f64, f64)>,
}

impl NetworkTopology {
    /// Users uniform over the unit disc (radius `sqrt(U)`), never at the AP.
    pub fn random<R: Rng + ?Sized>(n_users: usize, rng: &mut R) -> Self {
        let positions = (0..n_users)
            .map(|_| {
                let r = (1.0 - rng.random::<f64>()).sqrt();
                let a = rng.random::<f64>() * std::f64::consts::TAU;
                (r * a.cos(), r * a.sin())
            })
            .collect();
        NetworkTopology { positions }
    }

    pub fn n_users(&self) -> usize {
        self.positions.len()
    }

    pub fn distances(&self) -> Vec<f64> {
        self.positions.iter().map(|&(x, y)| x.hypot(y)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    pub n_users: Vec<usize>,
    pub n_topologies: usize,
    /// Round-robin rounds per topology; each user receives this many packets.
    pub packets_per_user: usize,
    pub path_loss: PathLossModel,
    /// The first table is the reference for the reported gains.
    pub tables: Vec<AmcTable>,
    pub estimator: SnrEstimator,
    pub rician_k_db: f64,
    pub base: PipelineConfig,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        let (conv, aug) = default_tables();
        NetworkConfig {
            n_users: vec![5, 30],
            n_topologies: 1000,
            packets_per_user: 10,
            path_loss: PathLossModel::default(),
            tables: vec![conv, aug],
            estimator: SnrEstimator::new(1.0),
            rician_k_db: 6.0,
            base: PipelineConfig::new(Kind::Bpsk, CodeRate::Half),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkRow {
    pub n_users: usize,
    pub table: String,
    pub csi_error_std_db: f64,
    pub topologies: u64,
    pub packets: u64,
    pub deferred: u64,
    pub delivered: u64,
    pub symbols: u64,
    pub delivered_bits: u64,
    /// Mean over packet slots of delivered bits per symbol.
    pub throughput: f64,
    /// Transmitted symbol energy per delivered bit (unit symbol energy).
    pub energy_per_bit: f64,
    pub throughput_gain_pct: f64,
    pub energy_reduction_pct: f64,
}

pub fn run_network_sim(cfg: &NetworkConfig, seed: u64, engine: &Engine) -> Result<SimReport<NetworkRow>> {
    if cfg.n_users.contains(&0) {
        return Err(Error::Config("every network needs at least one user".into()));
    }
    if cfg.n_topologies == 0 || cfg.packets_per_user == 0 {
        return Err(Error::Config("n_topologies and packets_per_user must be positive".into()));
    }
    let started = Instant::now();
    let bank = SchemeBank::new(&cfg.tables, &cfg.base)?;
    let fading = RicianBlockModel::new(cfg.rician_k_db);
    let mut rows = Vec::new();
    for (ui, &n) in cfg.n_users.iter().enumerate() {
        let per_topology = engine.map(cfg.n_topologies, |ti| -> Result<Vec<Tally>> {
            let topo = NetworkTopology::random(n, &mut unit_rng(seed, &[3, ui as u64, ti as u64]));
            let snrs = topo
                .distances()
                .iter()
                .map(|&d| cfg.path_loss.snr_at_distance(d))
                .collect::<Result<Vec<f64>>>()?;
            let mut tallies = vec![Tally::default(); cfg.tables.len()];
            for k in 0..n * cfg.packets_per_user {
                let path = [4, ui as u64, ti as u64, k as u64];
                let slot = bank.slot(&cfg.tables, snrs[k % n], &cfg.estimator, &fading, seed, &path)?;
                for (t, o) in tallies.iter_mut().zip(&slot) {
                    t.add(o);
                }
            }
            Ok(tallies)
        });
        let mut totals = vec![Tally::default(); cfg.tables.len()];
        for topo in per_topology {
            for (acc, t) in totals.iter_mut().zip(topo?) {
                acc.packets += t.packets;
                acc.deferred += t.deferred;
                acc.delivered += t.delivered;
                acc.symbols += t.symbols;
                acc.delivered_bits += t.delivered_bits;
                acc.throughput_sum += t.throughput_sum;
            }
        }
        let energy = |t: &Tally| {
            if t.delivered_bits == 0 {
                f64::INFINITY
            } else {
                t.symbols as f64 / t.delivered_bits as f64
            }
        };
        let (ref_tp, ref_e) = (totals[0].throughput(), energy(&totals[0]));
        for (table, t) in cfg.tables.iter().zip(&totals) {
            let e = energy(t);
            rows.push(NetworkRow {
                n_users: n,
                table: table.name.clone(),
                csi_error_std_db: cfg.estimator.error_std_db,
                topologies: cfg.n_topologies as u64,
                packets: t.packets,
                deferred: t.deferred,
                delivered: t.delivered,
                symbols: t.symbols,
                delivered_bits: t.delivered_bits,
                throughput: t.throughput(),
                energy_per_bit: e,
                throughput_gain_pct: gain_pct(ref_tp, t.throughput()),
                energy_reduction_pct: if ref_e.is_finite() && e.is_finite() {
                    100.0 * (1.0 - e / ref_e)
                } else {
                    0.0
                },
            });
        }
    }
    SimReport::new("network-sim", seed, engine, cfg, started, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn users_inside_unit_disc() {
        let t = NetworkTopology::random(10_000, &mut ChaCha8Rng::seed_from_u64(2));
        let d = t.distances();
        assert!(d.iter().all(|&x| x > 0.0 && x <= 1.0));
        // uniform over area: P(d <= 1/2) = 1/4
        let inner = d.iter().filter(|&&x| x <= 0.5).count() as f64 / d.len() as f64;
        assert!((inner - 0.25).abs() < 0.02);
    }

    #[test]
    fn boundary_user_without_fading_is_deferred_by_augmented_table() {
        let (_, aug) = default_tables();
        let mut cfg = NetworkConfig {
            n_users: vec![1],
            n_topologies: 1,
            packets_per_user: 3,
            path_loss: PathLossModel {
                alpha: 0.0,
                boundary_snr_db: 7.0,
            },
            tables: vec![aug],
            estimator: SnrEstimator::perfect(),
            rician_k_db: f64::INFINITY,
            ..NetworkConfig::default()
        };
        cfg.base.packet_bytes = 16;
        let r = run_network_sim(&cfg, 3, &Engine::new(1).unwrap()).unwrap();
        assert_eq!(r.rows[0].deferred, 3);
        assert_eq!(r.rows[0].throughput, 0.0);
        assert_eq!(r.rows[0].energy_per_bit, f64::INFINITY);
    }
}
