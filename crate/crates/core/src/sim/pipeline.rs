//! Packet transmit/receive chain.
//!
//! The payload is split into a bit queue and a trit queue. The trit queue is
//! converted 11 bits to 7 trits. Each lane is convolutionally encoded in its
//! own radix, punctured and interleaved separately; the lanes are then
//! multiplexed symbol by symbol (bits first, then trits, per label). The
//! receiver reverses every stage and compares the recovered payload.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::amc::{AmcScheme, CodeRate};
use crate::channel::apply_awgn;
use crate::constellation::{Constellation, Kind};
use crate::error::{Error, Result};
use crate::fec::viterbi::{hard_cost, DigitCost};
use crate::fec::{BlockInterleaver, ConvCodeSpec, PuncturePattern, ViterbiDecoder};
use crate::symbols::{BlockConversionCodec, Radix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum DecoderMetric {
    #[default]
    Hard,
    Soft,
}

impl std::str::FromStr for DecoderMetric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hard" => Ok(DecoderMetric::Hard),
            "soft" => Ok(DecoderMetric::Soft),
            _ => Err(Error::MalformedInput(format!("unknown decoder metric '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub modulation: Kind,
    pub code_rate: CodeRate,
    pub packet_bytes: usize,
    pub interleaver_cols: usize,
    pub metric: DecoderMetric,
    pub codec: BlockConversionCodec,
    pub binary_code: ConvCodeSpec,
    pub ternary_code: ConvCodeSpec,
    /// Applied to both lanes of rate-3/4 schemes.
    pub puncture: PuncturePattern,
}

impl PipelineConfig {
    pub fn new(modulation: Kind, code_rate: CodeRate) -> Self {
        PipelineConfig {
            modulation,
            code_rate,
            packet_bytes: 1024,
            interleaver_cols: 16,
            metric: DecoderMetric::Hard,
            codec: BlockConversionCodec::default(),
            binary_code: ConvCodeSpec::binary_default(),
            ternary_code: ConvCodeSpec::ternary_default(),
            puncture: PuncturePattern::rate_3_4(),
        }
    }

    pub fn for_scheme(scheme: &AmcScheme) -> Self {
        Self::new(scheme.modulation, scheme.code_rate)
    }
}

/// Sizes of one lane inside a packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LanePlan {
    /// Payload bits carried by this lane.
    pub payload_bits: usize,
    /// Encoder input digits (payload bits, or trits after conversion).
    pub message_digits: usize,
    /// Coded digits after puncturing.
    pub coded_digits: usize,
}

#[derive(Debug, Clone)]
struct Lane {
    plan: LanePlan,
    code: ConvCodeSpec,
    decoder: ViterbiDecoder,
    interleaver: BlockInterleaver,
}

/// Outcome of one packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PacketOutcome {
    pub payload_bits: usize,
    pub bit_errors: usize,
    pub symbols: usize,
}

impl PacketOutcome {
    pub fn delivered(&self) -> bool {
        self.bit_errors == 0
    }

    pub fn delivered_bits(&self) -> usize {
        if self.delivered() {
            self.payload_bits
        } else {
            0
        }
    }

    /// Payload bits per channel symbol if delivered, otherwise 0.
    pub fn throughput(&self) -> f64 {
        self.delivered_bits() as f64 / self.symbols as f64
    }
}

/// A configured transmit/receive chain for one scheme.
#[derive(Debug, Clone)]
pub struct Pipeline {
    config: PipelineConfig,
    constellation: Constellation,
    bit_lane: Option<Lane>,
    trit_lane: Option<Lane>,
    symbols: usize,
}

fn lane_code(base: &ConvCodeSpec, rate: CodeRate, pattern: &PuncturePattern) -> Result<ConvCodeSpec> {
    let p = match rate {
        CodeRate::Half => None,
        CodeRate::ThreeQuarters => Some(pattern.clone()),
    };
    let code = base.clone().with_puncture(p);
    code.validate()?;
    Ok(code)
}

impl Pipeline {
    pub fn new(config: PipelineConfig) -> Result<Self> {
        let constellation = Constellation::build(config.modulation);
        let (b, t) = config.modulation.digits_per_symbol();
        let payload = config.packet_bytes * 8;
        if payload == 0 {
            return Err(Error::Config("packet must carry at least one byte".into()));
        }
        if config.binary_code.radix != Radix::Binary || config.ternary_code.radix != Radix::Ternary {
            return Err(Error::Config("binary/ternary lane codes have the wrong radix".into()));
        }
        let bcode = lane_code(&config.binary_code, config.code_rate, &config.puncture)?;
        let tcode = lane_code(&config.ternary_code, config.code_rate, &config.puncture)?;
        let codec = config.codec;

        let symbols_for = |trit_payload: usize| -> usize {
            let bit_payload = payload - trit_payload;
            let nb = if b > 0 && bit_payload > 0 {
                bcode.coded_len(bit_payload).div_ceil(b)
            } else {
                0
            };
            let nt = if t > 0 && trit_payload > 0 {
                tcode.coded_len(codec.trit_len(trit_payload)).div_ceil(t)
            } else {
                0
            };
            nb.max(nt)
        };

        // Split that minimises the symbol count; smallest trit share on ties.
        let trit_payload = match (b, t) {
            (_, 0) => 0,
            (0, _) => payload,
            _ => (0..=payload)
                .min_by_key(|&tp| (symbols_for(tp), tp))
                .unwrap(),
        };
        let bit_payload = payload - trit_payload;
        let symbols = symbols_for(trit_payload);

        let make_lane = |code: ConvCodeSpec, payload_bits: usize, message_digits: usize| {
            let coded = code.coded_len(message_digits);
            Lane {
                plan: LanePlan {
                    payload_bits,
                    message_digits,
                    coded_digits: coded,
                },
                decoder: ViterbiDecoder::new(&code),
                interleaver: BlockInterleaver::for_len(coded, config.interleaver_cols),
                code,
            }
        };
        let bit_lane = (bit_payload > 0).then(|| make_lane(bcode.clone(), bit_payload, bit_payload));
        let trit_lane = (trit_payload > 0).then(|| make_lane(tcode.clone(), trit_payload, codec.trit_len(trit_payload)));

        Ok(Pipeline {
            config,
            constellation,
            bit_lane,
            trit_lane,
            symbols,
        })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    pub fn payload_bits(&self) -> usize {
        self.config.packet_bytes * 8
    }

    /// Channel symbols per packet.
    pub fn symbols_per_packet(&self) -> usize {
        self.symbols
    }

    pub fn bit_lane(&self) -> Option<LanePlan> {
        self.bit_lane.as_ref().map(|l| l.plan)
    }

    pub fn trit_lane(&self) -> Option<LanePlan> {
        self.trit_lane.as_ref().map(|l| l.plan)
    }

    /// Payload bits per symbol of an error-free packet.
    pub fn effective_throughput(&self) -> f64 {
        self.payload_bits() as f64 / self.symbols as f64
    }

    /// Payload to channel symbols.
    pub fn transmit(&self, payload: &[u8]) -> Result<Vec<Complex64>> {
        if payload.len() != self.payload_bits() {
            return Err(Error::Framing(format!(
                "payload of {} bits, expected {}",
                payload.len(),
                self.payload_bits()
            )));
        }
        let (b, t) = self.config.modulation.digits_per_symbol();
        let mut split = 0;
        let mut bit_stream = Vec::new();
        if let Some(l) = &self.bit_lane {
            let msg = &payload[..l.plan.payload_bits];
            split = l.plan.payload_bits;
            bit_stream = l.interleaver.interleave(&l.code.encode_raw(msg));
        }
        let mut trit_stream = Vec::new();
        if let Some(l) = &self.trit_lane {
            let trits = self.config.codec.bits_to_trits_raw(&payload[split..])?;
            trit_stream = l.interleaver.interleave(&l.code.encode_raw(&trits));
        }
        bit_stream.resize(self.symbols * b, 0);
        trit_stream.resize(self.symbols * t, 0);
        self.constellation.modulate_lanes(&bit_stream, &trit_stream)
    }

    /// Equalised channel symbols back to payload bits.
    pub fn receive(&self, received: &[Complex64]) -> Result<Vec<u8>> {
        if received.len() != self.symbols {
            return Err(Error::Framing(format!(
                "{} symbols, expected {}",
                received.len(),
                self.symbols
            )));
        }
        let c = &self.constellation;
        let (b, t) = (c.bits_per_symbol(), c.trits_per_symbol());
        let mut bit_obs: Vec<DigitCost> = Vec::with_capacity(self.symbols * b);
        let mut trit_obs: Vec<DigitCost> = Vec::with_capacity(self.symbols * t);
        match self.config.metric {
            DecoderMetric::Hard => {
                for &y in received {
                    let d = c.label_digits(c.nearest(y));
                    bit_obs.extend(d[..b].iter().map(|&x| hard_cost(x)));
                    trit_obs.extend(d[b..].iter().map(|&x| hard_cost(x)));
                }
            }
            DecoderMetric::Soft => {
                for &y in received {
                    let costs = c.digit_costs(y);
                    for (pos, cost) in costs.into_iter().enumerate() {
                        if pos < b {
                            bit_obs.push(cost);
                        } else {
                            trit_obs.push(cost);
                        }
                    }
                }
            }
        }

        let mut out = Vec::with_capacity(self.payload_bits());
        if let Some(l) = &self.bit_lane {
            let obs = l.interleaver.deinterleave(&bit_obs[..l.plan.coded_digits]);
            out.extend(l.decoder.decode(&obs, l.plan.message_digits)?);
        }
        if let Some(l) = &self.trit_lane {
            let obs = l.interleaver.deinterleave(&trit_obs[..l.plan.coded_digits]);
            let trits = l.decoder.decode(&obs, l.plan.message_digits)?;
            out.extend(self.trits_to_bits_lenient(&trits, l.plan.payload_bits));
        }
        Ok(out)
    }

    /// Like the codec inverse, but an out-of-range trit word (a decoding
    /// error) yields its low 11 bits instead of aborting the packet.
    fn trits_to_bits_lenient(&self, trits: &[u8], bit_len: usize) -> Vec<u8> {
        let codec = &self.config.codec;
        let (tb, bb) = (codec.trits_per_block(), codec.bits_per_block());
        let mut out = Vec::with_capacity(trits.len() / tb * bb);
        for chunk in trits.chunks(tb) {
            match codec.trits_to_bits_raw(chunk, bb) {
                Ok(bits) => out.extend(bits),
                Err(Error::InvalidCodeword { value, limit }) => {
                    let v = value % limit;
                    out.extend((0..bb).rev().map(|i| ((v >> i) & 1) as u8));
                }
                Err(e) => unreachable!("decoder emits whole in-range trit words: {e}"),
            }
        }
        out.truncate(bit_len);
        out
    }

    /// Sends a random payload over AWGN with noise density `n0` (after
    /// coherent equalisation) and counts payload bit errors.
    pub fn run_packet<R: Rng + ?Sized>(&self, n0: f64, rng: &mut R) -> Result<PacketOutcome> {
        let payload: Vec<u8> = (0..self.payload_bits()).map(|_| rng.random_range(0..2u8)).collect();
        let tx = self.transmit(&payload)?;
        let rx = apply_awgn(&tx, n0, rng);
        let decoded = self.receive(&rx)?;
        let bit_errors = decoded.iter().zip(&payload).filter(|(a, b)| a != b).count();
        Ok(PacketOutcome {
            payload_bits: payload.len(),
            bit_errors,
            symbols: self.symbols,
        })
    }
}
