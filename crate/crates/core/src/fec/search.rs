//! Distance properties of convolutional codes and the exhaustive generator search.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::Serialize;

use super::conv::{ConvCodeSpec, Trellis};
use super::puncture::PuncturePattern;
use crate::symbols::Radix;

/// True when some non-zero input sequence of unbounded length produces a
/// finite-weight output, i.e. a zero-weight cycle exists away from the
/// all-zero path. With a puncturing pattern the cycle is searched for in the
/// punctured trellis, where deleted positions weigh nothing.
pub fn is_catastrophic(t: &Trellis, pattern: Option<&PuncturePattern>) -> bool {
    let keep = pattern.map(|p| p.keep());
    let period = pattern.map_or(1, |p| p.period() / t.n);
    let nodes = t.num_states * period;
    let zero_edges: Vec<Vec<usize>> = (0..nodes)
        .map(|idx| {
            let (s, ph) = (idx / period, idx % period);
            (0..t.q)
                .filter(|&u| !(s == 0 && u == 0))
                .filter(|&u| branch_weight(t, s, u, ph, keep) == 0)
                .map(|u| t.next[s * t.q + u] * period + (ph + 1) % period)
                .collect()
        })
        .collect();
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut mark = vec![0u8; nodes];
    fn dfs(s: usize, g: &[Vec<usize>], mark: &mut [u8]) -> bool {
        mark[s] = 1;
        for &x in &g[s] {
            if mark[x] == 1 || (mark[x] == 0 && dfs(x, g, mark)) {
                return true;
            }
        }
        mark[s] = 2;
        false
    }
    (0..nodes).any(|s| mark[s] == 0 && dfs(s, &zero_edges, &mut mark))
}

/// Weight of a branch: non-zero output digits at the kept positions of the
/// given puncturing phase.
fn branch_weight(t: &Trellis, s: usize, u: usize, phase: usize, keep: Option<&[bool]>) -> u32 {
    t.output(s, u)
        .iter()
        .enumerate()
        .filter(|&(j, &d)| d != 0 && keep.is_none_or(|k| k[(phase * t.n + j) % k.len()]))
        .count() as u32
}

/// Free distance, minimised over every puncturing phase at which an error
/// event may start. Unpunctured when `pattern` is `None`.
pub fn free_distance(t: &Trellis, pattern: Option<&PuncturePattern>) -> u32 {
    let keep = pattern.map(|p| p.keep());
    let period = pattern.map_or(1, |p| p.period() / t.n);
    let ns = t.num_states;
    let mut best = u32::MAX;
    for start in 0..period {
        // Dijkstra over (state, phase); the zero state is only a sink.
        let mut dist = vec![u32::MAX; ns * period];
        let mut heap = BinaryHeap::new();
        let next_phase = (start + 1) % period;
        for u in 1..t.q {
            let w = branch_weight(t, 0, u, start, keep);
            let ns2 = t.next[u];
            let idx = ns2 * period + next_phase;
            if w < dist[idx] {
                dist[idx] = w;
                heap.push(Reverse((w, idx)));
            }
        }
        while let Some(Reverse((d, idx))) = heap.pop() {
            if d > dist[idx] || d >= best {
                continue;
            }
            let (s, ph) = (idx / period, idx % period);
            if s == 0 {
                best = best.min(d);
                continue;
            }
            for u in 0..t.q {
                let w = d + branch_weight(t, s, u, ph, keep);
                let ni = t.next[s * t.q + u] * period + (ph + 1) % period;
                if w < dist[ni] {
                    dist[ni] = w;
                    heap.push(Reverse((w, ni)));
                }
            }
        }
    }
    best
}

/// Number of error events of weight exactly `weight` leaving the zero state
/// at phase 0 of an unpunctured trellis, summed with every other start phase
/// when punctured.
pub fn event_multiplicity(t: &Trellis, pattern: Option<&PuncturePattern>, weight: u32) -> u64 {
    let keep = pattern.map(|p| p.keep());
    let period = pattern.map_or(1, |p| p.period() / t.n);
    let ns = t.num_states;
    let w_cap = weight as usize + 1;
    let mut total = 0u64;
    for start in 0..period {
        // counts[(state * period + phase) * w_cap + w]
        let mut cur = vec![0u64; ns * period * w_cap];
        for u in 1..t.q {
            let w = branch_weight(t, 0, u, start, keep) as usize;
            if w <= weight as usize {
                cur[(t.next[u] * period + (start + 1) % period) * w_cap + w] += 1;
            }
        }
        for _ in 0..64 * (t.memory + 1) {
            let mut nxt = vec![0u64; cur.len()];
            let mut any = false;
            for s in 0..ns {
                for ph in 0..period {
                    for w in 0..w_cap {
                        let c = cur[(s * period + ph) * w_cap + w];
                        if c == 0 {
                            continue;
                        }
                        if s == 0 {
                            if w == weight as usize {
                                total += c;
                            }
                            continue;
                        }
                        for u in 0..t.q {
                            let w2 = w + branch_weight(t, s, u, ph, keep) as usize;
                            if w2 < w_cap {
                                nxt[(t.next[s * t.q + u] * period + (ph + 1) % period) * w_cap + w2] += c;
                                any = true;
                            }
                        }
                    }
                }
            }
            cur = nxt;
            if !any {
                break;
            }
        }
        // events ending exactly at the final iteration
        for ph in 0..period {
            total += cur[ph * w_cap + weight as usize];
        }
    }
    total
}

#[derive(Debug, Clone, Serialize)]
pub struct CodeScore {
    pub generators: Vec<Vec<u8>>,
    pub free_distance: u32,
    pub multiplicity: u64,
    pub punctured_free_distance: u32,
    pub punctured_multiplicity: u64,
}

impl CodeScore {
    /// Larger is better.
    fn key(&self) -> (u32, u32, Reverse<u64>, Reverse<u64>) {
        (
            self.free_distance,
            self.punctured_free_distance,
            Reverse(self.multiplicity),
            Reverse(self.punctured_multiplicity),
        )
    }
}

pub fn score_code(code: &ConvCodeSpec, pattern: &PuncturePattern) -> Option<CodeScore> {
    let t = code.trellis();
    if is_catastrophic(&t, None) || is_catastrophic(&t, Some(pattern)) {
        return None;
    }
    let df = free_distance(&t, None);
    let dp = free_distance(&t, Some(pattern));
    if df == u32::MAX || dp == 0 || dp == u32::MAX {
        return None;
    }
    Some(CodeScore {
        generators: code.generators.clone(),
        free_distance: df,
        multiplicity: event_multiplicity(&t, None, df),
        punctured_free_distance: dp,
        punctured_multiplicity: event_multiplicity(&t, Some(pattern), dp),
    })
}

fn all_vectors(q: u8, len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..q).map(move |d| {
                    let mut v2 = v.clone();
                    v2.push(d);
                    v2
                })
            })
            .collect();
    }
    out
}

/// Exhaustive search over rate-1/2 generator pairs of the given radix and
/// memory. Scaling a generator by a non-zero constant leaves every Hamming
/// weight unchanged, so only generators whose first non-zero tap is 1 are
/// tried. Codes must be delay-free, use their full memory and be
/// non-catastrophic. Ranking: free distance, then punctured free distance,
/// then fewest minimum-weight events (unpunctured, then punctured), then
/// lexicographically smallest taps.
pub fn search_rate_half(radix: Radix, memory: usize, pattern: &PuncturePattern) -> Vec<CodeScore> {
    let q = radix.value();
    let gens: Vec<Vec<u8>> = all_vectors(q, memory + 1)
        .into_iter()
        .filter(|g| g.iter().find(|&&c| c != 0) == Some(&1))
        .collect();
    let pairs: Vec<(usize, usize)> = (0..gens.len())
        .flat_map(|i| (0..gens.len()).map(move |j| (i, j)))
        .collect();
    let mut scores: Vec<CodeScore> = pairs
        .par_iter()
        .filter_map(|&(i, j)| {
            let (g1, g2) = (&gens[i], &gens[j]);
            if g1 == g2 || (g1[0] == 0 && g2[0] == 0) || (g1[memory] == 0 && g2[memory] == 0) {
                return None;
            }
            let code = ConvCodeSpec::new(radix, vec![g1.clone(), g2.clone()]).ok()?;
            score_code(&code, pattern)
        })
        .collect();
    scores.sort_by(|a, b| b.key().cmp(&a.key()).then_with(|| a.generators.cmp(&b.generators)));
    scores
}
