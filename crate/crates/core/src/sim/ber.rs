//! Uncoded and coded BER campaigns.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::pipeline::{Pipeline, PipelineConfig};
use super::{ci95_halfwidth, unit_rng, Engine, SimReport};
use crate::amc::CodeRate;
use crate::channel::{apply_awgn, n0_from_snr_db};
use crate::constellation::{Constellation, Kind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncodedBerConfig {
    pub kinds: Vec<Kind>,
    pub snr_grid_db: Vec<f64>,
    pub min_errors: u64,
    pub max_symbols: u64,
    pub symbols_per_unit: usize,
}

impl UncodedBerConfig {
    pub fn new(kinds: Vec<Kind>, snr_grid_db: Vec<f64>) -> Self {
        UncodedBerConfig {
            kinds,
            snr_grid_db,
            min_errors: 100,
            max_symbols: 100_000_000,
            symbols_per_unit: 4096,
        }
    }
}

/// One (kind, SNR) point. Bit and trit errors are pooled as digit errors
/// and also reported per radix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncodedBerRow {
    pub kind: String,
    pub snr_db: f64,
    pub symbols: u64,
    pub digits_sent: u64,
    pub digit_errors: u64,
    pub ber: f64,
    pub ci95_halfwidth: f64,
    pub bits_sent: u64,
    pub bit_errors: u64,
    pub bit_ber: f64,
    pub trits_sent: u64,
    pub trit_errors: u64,
    pub trit_ber: f64,
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid.iter().any(|s| s.is_nan() || *s == f64::NEG_INFINITY) {
        return Err(Error::Config("SNR grid must be a non-empty list of dB values".into()));
    }
    Ok(())
}

#[derive(Default, Clone, Copy)]
struct Counts {
    symbols: u64,
    bits: u64,
    bit_errors: u64,
    trits: u64,
    trit_errors: u64,
}

fn uncoded_unit(c: &Constellation, n0: f64, symbols: usize, seed: u64, path: &[u64]) -> Counts {
    let mut rng = unit_rng(seed, path);
    let (b, t) = (c.bits_per_symbol(), c.trits_per_symbol());
    let bits: Vec<u8> = (0..symbols * b).map(|_| rng.random_range(0..2)).collect();
    let trits: Vec<u8> = (0..symbols * t).map(|_| rng.random_range(0..3)).collect();
    let tx = c.modulate_lanes(&bits, &trits).expect("whole symbols");
    let rx = apply_awgn(&tx, n0, &mut rng);
    let (hb, ht) = c.demodulate_lanes(&rx);
    let diff = |a: &[u8], b: &[u8]| a.iter().zip(b).filter(|(x, y)| x != y).count() as u64;
    Counts {
        symbols: symbols as u64,
        bits: bits.len() as u64,
        bit_errors: diff(&bits, &hb),
        trits: trits.len() as u64,
        trit_errors: diff(&trits, &ht),
    }
}

/// Random digits, AWGN, hard decisions; each point stops at `min_errors`
/// digit errors or `max_symbols` symbols.
pub fn run_uncoded_ber(cfg: &UncodedBerConfig, seed: u64, engine: &Engine) -> Result<SimReport<UncodedBerRow>> {
    check_grid(&cfg.snr_grid_db)?;
    if cfg.symbols_per_unit == 0 {
        return Err(Error::Config("symbols_per_unit must be positive".into()));
    }
    let started = Instant::now();
    let mut rows = Vec::new();
    for (ki, &kind) in cfg.kinds.iter().enumerate() {
        let c = Constellation::build(kind);
        for (si, &snr) in cfg.snr_grid_db.iter().enumerate() {
            let n0 = n0_from_snr_db(snr);
            let per = cfg.symbols_per_unit;
            let max_units = cfg.max_symbols.div_ceil(per as u64) as usize;
            let mut acc = Counts::default();
            engine.run_until(
                max_units,
                |u| uncoded_unit(&c, n0, per, seed, &[0, ki as u64, si as u64, u as u64]),
                |x| {
                    acc.symbols += x.symbols;
                    acc.bits += x.bits;
                    acc.bit_errors += x.bit_errors;
                    acc.trits += x.trits;
                    acc.trit_errors += x.trit_errors;
                    acc.bit_errors + acc.trit_errors >= cfg.min_errors
                },
            );
            let sent = acc.bits + acc.trits;
            let errs = acc.bit_errors + acc.trit_errors;
            rows.push(UncodedBerRow {
                kind: kind.to_string(),
                snr_db: snr,
                symbols: acc.symbols,
                digits_sent: sent,
                digit_errors: errs,
                ber: ratio(errs, sent),
                ci95_halfwidth: ci95_halfwidth(errs, sent),
                bits_sent: acc.bits,
                bit_errors: acc.bit_errors,
                bit_ber: ratio(acc.bit_errors, acc.bits),
                trits_sent: acc.trits,
                trit_errors: acc.trit_errors,
                trit_ber: ratio(acc.trit_errors, acc.trits),
            });
        }
    }
    SimReport::new("uncoded-ber", seed, engine, cfg, started, rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodedBerConfig {
    pub schemes: Vec<(Kind, CodeRate)>,
    pub snr_grid_db: Vec<f64>,
    /// Payload bit errors to collect per point.
    pub min_errors: u64,
    /// Errored packets to collect per point; errors arrive in bursts, so a
    /// handful of bad packets alone gives a poor estimate.
    pub min_packet_errors: u64,
    /// Payload bits after which a point stops regardless.
    pub max_digits: u64,
    /// Template for every scheme; modulation and rate are overridden.
    pub base: PipelineConfig,
}

impl CodedBerConfig {
    pub fn new(schemes: Vec<(Kind, CodeRate)>, snr_grid_db: Vec<f64>) -> Self {
        CodedBerConfig {
            schemes,
            snr_grid_db,
            min_errors: 100,
            min_packet_errors: 10,
            max_digits: 100_000_000,
            base: PipelineConfig::new(Kind::Bpsk, CodeRate::Half),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodedBerRow {
    pub scheme: String,
    pub snr_db: f64,
    pub packets: u64,
    pub digits_sent: u64,
    pub digit_errors: u64,
    pub ber: f64,
    pub ci95_halfwidth: f64,
    pub packet_errors: u64,
    pub per: f64,
}

/// Full packet pipeline over AWGN; BER on recovered payload bits.
pub fn run_coded_ber(cfg: &CodedBerConfig, seed: u64, engine: &Engine) -> Result<SimReport<CodedBerRow>> {
    check_grid(&cfg.snr_grid_db)?;
    let started = Instant::now();
    let mut rows = Vec::new();
    for (pi, &(kind, rate)) in cfg.schemes.iter().enumerate() {
        let mut pc = cfg.base.clone();
        pc.modulation = kind;
        pc.code_rate = rate;
        let pipe = Pipeline::new(pc)?;
        let bits_per_packet = pipe.payload_bits() as u64;
        let max_units = cfg.max_digits.div_ceil(bits_per_packet).max(1) as usize;
        for (si, &snr) in cfg.snr_grid_db.iter().enumerate() {
            let n0 = n0_from_snr_db(snr);
            let (mut packets, mut errs, mut bad) = (0u64, 0u64, 0u64);
            let mut failure = None;
            engine.run_until(
                max_units,
                |u| pipe.run_packet(n0, &mut unit_rng(seed, &[1, pi as u64, si as u64, u as u64])),
                |o| match o {
                    Ok(o) => {
                        packets += 1;
                        errs += o.bit_errors as u64;
                        bad += u64::from(!o.delivered());
                        errs >= cfg.min_errors && bad >= cfg.min_packet_errors
                    }
                    Err(e) => {
                        failure = Some(e);
                        true
                    }
                },
            );
            if let Some(e) = failure {
                return Err(e);
            }
            let sent = packets * bits_per_packet;
            rows.push(CodedBerRow {
                scheme: format!("{kind}:{rate}"),
                snr_db: snr,
                packets,
                digits_sent: sent,
                digit_errors: errs,
                ber: ratio(errs, sent),
                ci95_halfwidth: ci95_halfwidth(errs, sent),
                packet_errors: bad,
                per: ratio(bad, packets),
            });
        }
    }
    SimReport::new("coded-ber", seed, engine, cfg, started, rows)
}

/// SNR at which a BER curve first falls to `target`, interpolating
/// log10(BER) linearly between the bracketing grid points. A point with no
/// observed errors is placed at half an error over its sample size.
/// Points must be sorted by SNR.
pub fn crossing_snr(curve: &[(f64, f64, u64)], target: f64) -> Option<f64> {
    let lb = |&(_, ber, sent): &(f64, f64, u64)| {
        if ber > 0.0 {
            ber.log10()
        } else {
            (0.5 / sent.max(1) as f64).log10()
        }
    };
    let t = target.log10();
    for w in curve.windows(2) {
        let (a, b) = (lb(&w[0]), lb(&w[1]));
        if a >= t && b < t {
            let f = (a - t) / (a - b);
            return Some(w[0].0 + f * (w[1].0 - w[0].0));
        }
    }
    None
}
