//! Reference implementations used as test oracles. Written from first
//! principles and deliberately independent of the library code paths.

#![allow(dead_code)]

/// Gaussian tail probability by composite Simpson integration of the pdf.
pub fn q_oracle(x: f64) -> f64 {
    let (a, b) = (x, x + 14.0);
    let n = 20_000;
    let h = (b - a) / n as f64;
    let pdf = |t: f64| (-t * t / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut s = pdf(a) + pdf(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * pdf(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Direct convolution encoder: output j at time t is
/// sum_i g_j[i] * u[t - i] mod q, message followed by `m` zeros.
pub fn encode_oracle(q: u8, gens: &[Vec<u8>], msg: &[u8]) -> Vec<u8> {
    let m = gens[0].len() - 1;
    let mut u = msg.to_vec();
    u.extend(std::iter::repeat_n(0, m));
    let mut out = Vec::new();
    for t in 0..u.len() {
        for g in gens {
            let mut acc = 0u32;
            for (i, &c) in g.iter().enumerate() {
                if t >= i {
                    acc += c as u32 * u[t - i] as u32;
                }
            }
            out.push((acc % q as u32) as u8);
        }
    }
    out
}

pub fn puncture_oracle(keep: &[bool], v: &[u8]) -> Vec<u8> {
    v.iter()
        .enumerate()
        .filter(|(i, _)| keep[i % keep.len()])
        .map(|(_, &d)| d)
        .collect()
}

pub fn all_messages(q: u8, len: usize) -> Vec<Vec<u8>> {
    let total = (q as usize).pow(len as u32);
    (0..total)
        .map(|mut x| {
            let mut m = vec![0u8; len];
            for d in m.iter_mut().rev() {
                *d = (x % q as usize) as u8;
                x /= q as usize;
            }
            m
        })
        .collect()
}

/// Exhaustive maximum-likelihood search. Returns the smallest summed cost
/// and every message attaining it.
pub fn brute_force_ml(
    q: u8,
    gens: &[Vec<u8>],
    keep: Option<&[bool]>,
    obs: &[[f64; 3]],
    len: usize,
) -> (f64, Vec<Vec<u8>>) {
    let mut best = f64::INFINITY;
    let mut winners = Vec::new();
    for msg in all_messages(q, len) {
        let mut c = encode_oracle(q, gens, &msg);
        if let Some(k) = keep {
            c = puncture_oracle(k, &c);
        }
        assert_eq!(c.len(), obs.len());
        let metric: f64 = c.iter().zip(obs).map(|(&d, o)| o[d as usize]).sum();
        if metric < best - 1e-9 {
            best = metric;
            winners = vec![msg];
        } else if (metric - best).abs() <= 1e-9 {
            winners.push(msg);
        }
    }
    (best, winners)
}

/// Summed cost of a message under the oracle encoder.
pub fn oracle_metric(q: u8, gens: &[Vec<u8>], keep: Option<&[bool]>, obs: &[[f64; 3]], msg: &[u8]) -> f64 {
    let mut c = encode_oracle(q, gens, msg);
    if let Some(k) = keep {
        c = puncture_oracle(k, &c);
    }
    c.iter().zip(obs).map(|(&d, o)| o[d as usize]).sum()
}

/// SNR where a sampled curve (sorted by SNR) crosses `target`, by linear
/// interpolation of log10(BER). Points without errors are skipped.
pub fn log_crossing(curve: &[(f64, f64)], target: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = curve.iter().filter(|p| p.1 > 0.0).map(|&(s, b)| (s, b.log10())).collect();
    let t = target.log10();
    pts.windows(2).find(|w| w[0].1 >= t && w[1].1 < t).map(|w| {
        let f = (w[0].1 - t) / (w[0].1 - w[1].1);
        w[0].0 + f * (w[1].0 - w[0].0)
    })
}

/// Binomial standard deviation of an error-rate estimate.
pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}
