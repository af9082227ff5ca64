//! Viterbi decoding of terminated radix-2/radix-3 convolutional codes.
//!
//! Observations are per-digit cost vectors: entry `v` is the cost of the
//! transmitted digit having been `v`. Hard decisions use Hamming costs, soft
//! decisions use squared Euclidean distances, and punctured positions carry
//! the all-zero (erased) vector. The decoder minimises the summed cost.

use super::conv::{ConvCodeSpec, Trellis};
use crate::error::{Error, Result};

pub type DigitCost = [f64; 3];

pub const ERASED: DigitCost = [0.0; 3];

/// Hamming cost vector of a hard digit decision.
pub fn hard_cost(d: u8) -> DigitCost {
    let mut c = [1.0; 3];
    c[d as usize] = 0.0;
    c
}

pub fn hard_costs(digits: &[u8]) -> Vec<DigitCost> {
    digits.iter().map(|&d| hard_cost(d)).collect()
}

/// Summed cost of a channel digit sequence against observations.
pub fn path_metric(digits: &[u8], obs: &[DigitCost]) -> f64 {
    digits.iter().zip(obs).map(|(&d, c)| c[d as usize]).sum()
}

/// Reusable decoder for one code.
#[derive(Debug, Clone)]
pub struct ViterbiDecoder {
    code: ConvCodeSpec,
    trellis: Trellis,
}

impl ViterbiDecoder {
    pub fn new(code: &ConvCodeSpec) -> Self {
        ViterbiDecoder {
            code: code.clone(),
            trellis: code.trellis(),
        }
    }

    pub fn code(&self) -> &ConvCodeSpec {
        &self.code
    }

    /// Trellis nodes per stage.
    pub fn states_per_stage(&self) -> usize {
        self.trellis.num_states
    }

    pub fn decode_hard(&self, received: &[u8], msg_len: usize) -> Result<Vec<u8>> {
        self.decode(&hard_costs(received), msg_len)
    }

    /// Decodes `msg_len` message digits from channel observations (punctured
    /// positions already removed).
    pub fn decode(&self, received: &[DigitCost], msg_len: usize) -> Result<Vec<u8>> {
        let full_len = self.code.mother_len(msg_len);
        let obs = match &self.code.puncture {
            Some(p) => p.depuncture(received, full_len, ERASED)?,
            None => {
                if received.len() != full_len {
                    return Err(Error::Framing(format!(
                        "{} observations, expected {full_len}",
                        received.len()
                    )));
                }
                received.to_vec()
            }
        };
        Ok(self.decode_mother(&obs, msg_len))
    }

    fn decode_mother(&self, obs: &[DigitCost], msg_len: usize) -> Vec<u8> {
        let t = &self.trellis;
        let (q, n, ns) = (t.q, t.n, t.num_states);
        let top = ns / q;
        let steps = msg_len + t.memory;
        let combos = q.pow(n as u32);

        let mut metric = vec![f64::INFINITY; ns];
        metric[0] = 0.0;
        let mut next_metric = vec![f64::INFINITY; ns];
        // survivor[step * ns + state] = dropped oldest digit of the predecessor
        let mut survivor = vec![0u8; steps * ns];
        // branch cost of every output tuple, tuple coded base q, first output most significant
        let mut tuple_cost = vec![0.0f64; combos];
        // output tuple code per (state, input)
        let out_code: Vec<usize> = (0..ns * q)
            .map(|i| {
                t.outputs[i * n..(i + 1) * n]
                    .iter()
                    .fold(0usize, |acc, &d| acc * q + d as usize)
            })
            .collect();

        let window = self.code.traceback.filter(|&d| d > 0 && d < steps);
        let mut decided = vec![0u8; msg_len];

        for step in 0..steps {
            let o = &obs[step * n..(step + 1) * n];
            for (code, cost) in tuple_cost.iter_mut().enumerate() {
                let mut c = 0.0;
                let mut rest = code;
                for j in (0..n).rev() {
                    c += o[j][rest % q];
                    rest /= q;
                }
                *cost = c;
            }
            let inputs = if step < msg_len { q } else { 1 };
            next_metric.iter_mut().for_each(|m| *m = f64::INFINITY);
            let surv = &mut survivor[step * ns..(step + 1) * ns];
            for u in 0..inputs {
                for low in 0..top {
                    let nsx = u * top + low;
                    let mut best = f64::INFINITY;
                    let mut arg = 0u8;
                    for x in 0..q {
                        let ps = low * q + x;
                        let pm = metric[ps];
                        if pm == f64::INFINITY {
                            continue;
                        }
                        let m = pm + tuple_cost[out_code[ps * q + u]];
                        if m < best {
                            best = m;
                            arg = x as u8;
                        }
                    }
                    next_metric[nsx] = best;
                    surv[nsx] = arg;
                }
            }
            std::mem::swap(&mut metric, &mut next_metric);

            if let Some(depth) = window {
                if step + 1 >= depth && step + 1 - depth < msg_len && step + 1 < steps {
                    // Commit the digit `depth` steps back along the current best path.
                    let mut s = (0..ns)
                        .min_by(|&a, &b| metric[a].partial_cmp(&metric[b]).unwrap().then(a.cmp(&b)))
                        .unwrap();
                    let target = step + 1 - depth;
                    let mut k = step;
                    loop {
                        let u = s / top;
                        if k == target {
                            decided[target] = u as u8;
                            break;
                        }
                        s = (s % top) * q + survivor[k * ns + s] as usize;
                        k -= 1;
                    }
                }
            }
        }

        // Terminated trellis: trace back from state 0.
        let mut s = 0usize;
        let first_open = match window {
            Some(depth) => (steps - depth).min(msg_len),
            None => 0,
        };
        for step in (0..steps).rev() {
            let u = s / top;
            if step < msg_len && step >= first_open {
                decided[step] = u as u8;
            }
            if step < first_open {
                break;
            }
            s = (s % top) * q + survivor[step * ns + s] as usize;
        }
        decided
    }
}
