//! Rate 1/n feed-forward convolutional codes over GF(2) and GF(3).

use serde::{Deserialize, Serialize};

use super::puncture::PuncturePattern;
use crate::error::{Error, Result};
use crate::symbols::{DigitBlock, Radix};

/// Generator taps of the 802.11 K=7 code, octal 133 and 171, current input first.
pub const BINARY_DEFAULT_GENERATORS: [[u8; 7]; 2] = [[1, 0, 1, 1, 0, 1, 1], [1, 1, 1, 1, 0, 0, 1]];

/// Ternary rate-1/2 memory-4 code chosen by `code-search`: free distance 9
/// (12 events), rate-3/4 punctured free distance 5, non-catastrophic both
/// punctured and unpunctured. Current input first.
pub const TERNARY_DEFAULT_GENERATORS: [[u8; 5]; 2] = [[1, 0, 2, 1, 2], [1, 1, 2, 2, 2]];

/// Convolutional code description: one input digit per step, `n` outputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvCodeSpec {
    pub radix: Radix,
    pub memory: usize,
    /// `n` tap vectors of length `memory + 1`; index 0 multiplies the current input.
    pub generators: Vec<Vec<u8>>,
    pub puncture: Option<PuncturePattern>,
    /// Decision depth of the sliding-window traceback; `None` decodes the
    /// whole terminated block at once.
    pub traceback: Option<usize>,
}

impl ConvCodeSpec {
    pub fn new(radix: Radix, generators: Vec<Vec<u8>>) -> Result<Self> {
        let memory = generators
            .first()
            .map(|g| g.len().saturating_sub(1))
            .ok_or_else(|| Error::Config("no generators".into()))?;
        let spec = ConvCodeSpec {
            radix,
            memory,
            generators,
            puncture: None,
            traceback: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn binary_default() -> Self {
        Self::new(
            Radix::Binary,
            BINARY_DEFAULT_GENERATORS.iter().map(|g| g.to_vec()).collect(),
        )
        .unwrap()
    }

    pub fn ternary_default() -> Self {
        Self::new(
            Radix::Ternary,
            TERNARY_DEFAULT_GENERATORS.iter().map(|g| g.to_vec()).collect(),
        )
        .unwrap()
    }

    pub fn default_for(radix: Radix) -> Self {
        match radix {
            Radix::Binary => Self::binary_default(),
            Radix::Ternary => Self::ternary_default(),
        }
    }

    pub fn with_puncture(mut self, p: Option<PuncturePattern>) -> Self {
        self.puncture = p;
        self
    }

    pub fn with_traceback(mut self, depth: Option<usize>) -> Self {
        self.traceback = depth;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let q = self.radix.value();
        if self.memory == 0 || self.memory > 12 {
            return Err(Error::Config(format!("unsupported memory {}", self.memory)));
        }
        if self.generators.len() < 2 {
            return Err(Error::Config("need at least two generators".into()));
        }
        for g in &self.generators {
            if g.len() != self.memory + 1 {
                return Err(Error::Config("generators must share length memory+1".into()));
            }
            if g.iter().any(|&c| c >= q) {
                return Err(Error::Config(format!("generator coefficient out of range for radix {q}")));
            }
        }
        if self.generators.iter().all(|g| g[0] == 0) {
            return Err(Error::Config("code is not delay-free".into()));
        }
        if let Some(p) = &self.puncture {
            if p.period() % self.n() != 0 {
                return Err(Error::Config("puncture period must be a multiple of n".into()));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.generators.len()
    }

    pub fn q(&self) -> usize {
        self.radix.value() as usize
    }

    pub fn num_states(&self) -> usize {
        self.q().pow(self.memory as u32)
    }

    /// Digits per block before puncturing, tail included.
    pub fn mother_len(&self, msg_len: usize) -> usize {
        (msg_len + self.memory) * self.n()
    }

    /// Digits per block on the channel.
    pub fn coded_len(&self, msg_len: usize) -> usize {
        let full = self.mother_len(msg_len);
        match &self.puncture {
            Some(p) => p.punctured_len(full),
            None => full,
        }
    }

    pub fn rate(&self) -> f64 {
        let base = 1.0 / self.n() as f64;
        match &self.puncture {
            Some(p) => base * p.period() as f64 / p.kept_per_period() as f64,
            None => base,
        }
    }

    pub fn encode(&self, msg: &DigitBlock) -> Result<DigitBlock> {
        if msg.radix() != self.radix {
            return Err(Error::RadixMismatch {
                expected: self.radix.value(),
                got: msg.radix().value(),
            });
        }
        let out = self.encode_raw(msg.digits());
        DigitBlock::new(self.radix, out)
    }

    /// Encodes, appends the zero tail and punctures. Digits must be in range.
    pub fn encode_raw(&self, msg: &[u8]) -> Vec<u8> {
        let full = self.encode_mother(msg);
        match &self.puncture {
            Some(p) => p.puncture(&full),
            None => full,
        }
    }

    /// Unpunctured codeword including the `memory` zero tail digits.
    pub fn encode_mother(&self, msg: &[u8]) -> Vec<u8> {
        let q = self.radix.value() as u32;
        let m = self.memory;
        // reg[0] = current input, reg[i] = input i steps ago
        let mut reg = vec![0u8; m + 1];
        let mut out = Vec::with_capacity(self.mother_len(msg.len()));
        for &u in msg.iter().chain(std::iter::repeat_n(&0u8, m)) {
            reg.copy_within(0..m, 1);
            reg[0] = u;
            for g in &self.generators {
                let v: u32 = g.iter().zip(&reg).map(|(&a, &b)| a as u32 * b as u32).sum();
                out.push((v % q) as u8);
            }
        }
        out
    }

    pub fn trellis(&self) -> Trellis {
        Trellis::new(self)
    }
}

/// Next-state and output tables of a code.
///
/// A state packs the last `memory` inputs, most recent in the most
/// significant position: `s = s_1 q^(m-1) + ... + s_m`.
#[derive(Debug, Clone)]
pub struct Trellis {
    pub q: usize,
    pub n: usize,
    pub memory: usize,
    pub num_states: usize,
    /// `next[s * q + u]`
    pub next: Vec<usize>,
    /// `outputs[(s * q + u) * n + j]`
    pub outputs: Vec<u8>,
}

impl Trellis {
    pub fn new(code: &ConvCodeSpec) -> Trellis {
        let q = code.q();
        let m = code.memory;
        let n = code.n();
        let num_states = q.pow(m as u32);
        let top = num_states / q;
        let mut next = vec![0; num_states * q];
        let mut outputs = vec![0u8; num_states * q * n];
        for s in 0..num_states {
            let mut reg = vec![0usize; m + 1];
            let mut rest = s;
            for i in (1..=m).rev() {
                reg[i] = rest % q;
                rest /= q;
            }
            for u in 0..q {
                reg[0] = u;
                next[s * q + u] = u * top + s / q;
                for (j, g) in code.generators.iter().enumerate() {
                    let v: usize = g.iter().zip(&reg).map(|(&a, &b)| a as usize * b).sum();
                    outputs[(s * q + u) * n + j] = (v % q) as u8;
                }
            }
        }
        Trellis {
            q,
            n,
            memory: m,
            num_states,
            next,
            outputs,
        }
    }

    pub fn output(&self, state: usize, input: usize) -> &[u8] {
        let base = (state * self.q + input) * self.n;
        &self.outputs[base..base + self.n]
    }
}
