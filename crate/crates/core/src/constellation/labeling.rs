//! Digit labeling of constellation points.
//!
//! Rectangular and PSK baselines use their textbook Gray maps. Hexagonal and
//! mixed bit/trit constellations use a cluster heuristic:
//!
//! 1. Split the points into `q` connected clusters of equal size (`q = 3` when
//!    the symbol carries a trit, otherwise `q = 2`) with the fewest
//!    nearest-neighbour pairs crossing clusters. The leading digit of every
//!    point is its cluster index, clusters ordered by the angle of their centroid.
//! 2. The first cluster receives the remaining bits in reflected Gray order along
//!    a nearest-neighbour path.
//! 3. Each later cluster receives the bijection that maximises the number of
//!    nearest-neighbour pairs into already-labeled clusters sharing the same
//!    remaining bits, then the number of in-cluster neighbours at Hamming
//!    distance one.

use num_complex::Complex64;

use super::lattice::lex_cmp;
use super::Label;

const NEIGHBOUR_TOL: f64 = 1e-6;

/// Reflected binary Gray code of `i`.
pub fn gray(i: u16) -> u16 {
    i ^ (i >> 1)
}

/// Pairs of points at the minimum distance of the set.
pub fn neighbour_pairs(points: &[Complex64]) -> Vec<(usize, usize)> {
    let mut dmin = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            dmin = dmin.min((points[i] - points[j]).norm());
        }
    }
    let mut out = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if (points[i] - points[j]).norm() <= dmin * (1.0 + NEIGHBOUR_TOL) {
                out.push((i, j));
            }
        }
    }
    out
}

fn adjacency(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut adj = vec![vec![false; n]; n];
    for &(i, j) in pairs {
        adj[i][j] = true;
        adj[j][i] = true;
    }
    adj
}

fn connected(members: &[usize], adj: &[Vec<bool>]) -> bool {
    if members.len() <= 1 {
        return true;
    }
    let mut seen = vec![false; members.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(k) = stack.pop() {
        for (l, s) in seen.iter_mut().enumerate() {
            if !*s && adj[members[k]][members[l]] {
                *s = true;
                stack.push(l);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn combinations(pool: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(pool: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            if pool.len() - i < k - cur.len() {
                break;
            }
            cur.push(pool[i]);
            rec(pool, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(pool, k, 0, &mut Vec::new(), &mut out);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Equal-size connected partitions with the fewest crossing neighbour pairs.
/// Enumeration is canonical (each cluster starts at its smallest free index),
/// so the first optimum found is the lexicographically smallest.
fn best_partition(n: usize, q: usize, adj: &[Vec<bool>], pairs: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let size = n / q;
    let mut best: Option<(usize, Vec<Vec<usize>>)> = None;

    fn rec(
        free: Vec<usize>,
        size: usize,
        adj: &[Vec<bool>],
        pairs: &[(usize, usize)],
        cur: &mut Vec<Vec<usize>>,
        best: &mut Option<(usize, Vec<Vec<usize>>)>,
    ) {
        if free.is_empty() {
            let mut cluster_of = vec![0usize; adj.len()];
            for (c, members) in cur.iter().enumerate() {
                for &m in members {
                    cluster_of[m] = c;
                }
            }
            let crossing = pairs
                .iter()
                .filter(|&&(i, j)| cluster_of[i] != cluster_of[j])
                .count();
            if best.as_ref().is_none_or(|(b, _)| crossing < *b) {
                *best = Some((crossing, cur.clone()));
            }
            return;
        }
        let head = free[0];
        for rest in combinations(&free[1..], size - 1) {
            let mut members = vec![head];
            members.extend(&rest);
            if !connected(&members, adj) {
                continue;
            }
            let remaining: Vec<usize> = free.iter().copied().filter(|x| !members.contains(x)).collect();
            cur.push(members);
            rec(remaining, size, adj, pairs, cur, best);
            cur.pop();
        }
    }

    rec((0..n).collect(), size, adj, pairs, &mut Vec::new(), &mut best);
    best.expect("constellation admits a connected partition").1
}

fn angle(p: Complex64) -> f64 {
    let a = p.arg();
    if a < -1e-12 {
        a + std::f64::consts::TAU
    } else {
        a.max(0.0)
    }
}

/// Cluster-heuristic labels for a constellation whose symbols carry
/// `bits` bits and `trits` trits (`trits <= 1`).
pub fn cluster_labels(points: &[Complex64], bits: usize, trits: usize) -> Vec<Label> {
    assert!(trits <= 1, "cluster labeling supports at most one trit per symbol");
    let n = points.len();
    let q = if trits == 1 { 3 } else { 2 };
    let rest_bits = if trits == 1 { bits } else { bits - 1 };
    let size = 1usize << rest_bits;
    assert_eq!(n, q * size);

    let pairs = neighbour_pairs(points);
    let adj = adjacency(n, &pairs);
    let mut clusters = best_partition(n, q, &adj, &pairs);

    clusters.sort_by(|a, b| {
        let ca: Complex64 = a.iter().map(|&i| points[i]).sum::<Complex64>() / a.len() as f64;
        let cb: Complex64 = b.iter().map(|&i| points[i]).sum::<Complex64>() / b.len() as f64;
        let (aa, ab) = (angle(ca), angle(cb));
        if (aa - ab).abs() > 1e-9 {
            aa.partial_cmp(&ab).unwrap()
        } else {
            a[0].cmp(&b[0])
        }
    });

    let mut suffix: Vec<Option<u16>> = vec![None; n];
    let perms = permutations(size);
    let hamming1 = |a: u16, b: u16| (a ^ b).count_ones() == 1;

    for (ci, members) in clusters.iter().enumerate() {
        let mut best: Option<((usize, usize, usize), Vec<u16>)> = None;
        for perm in &perms {
            // members[k] receives suffix value assign[k]
            let assign: Vec<u16> = if ci == 0 {
                // Gray sequence laid along the permuted visiting order.
                let mut a = vec![0u16; size];
                for (step, &k) in perm.iter().enumerate() {
                    a[k] = gray(step as u16);
                }
                a
            } else {
                perm.iter().map(|&v| v as u16).collect()
            };
            let mut path = 0;
            if ci == 0 {
                for w in perm.windows(2) {
                    if adj[members[w[0]]][members[w[1]]] {
                        path += 1;
                    }
                }
            }
            let mut cross = 0;
            let mut inner = 0;
            for (k, &p) in members.iter().enumerate() {
                for (l, &p2) in members.iter().enumerate().skip(k + 1) {
                    if adj[p][p2] && hamming1(assign[k], assign[l]) {
                        inner += 1;
                    }
                }
                for (o, s) in suffix.iter().enumerate() {
                    if let Some(s) = s {
                        if adj[p][o] && *s == assign[k] {
                            cross += 1;
                        }
                    }
                }
            }
            let score = (path, cross, inner);
            if best.as_ref().is_none_or(|(b, _)| score > *b) {
                best = Some((score, assign));
            }
        }
        let (_, assign) = best.unwrap();
        for (k, &p) in members.iter().enumerate() {
            suffix[p] = Some(assign[k]);
        }
    }

    let mut labels = vec![Label::default(); n];
    for (ci, members) in clusters.iter().enumerate() {
        for &p in members {
            let s = suffix[p].unwrap();
            labels[p] = if trits == 1 {
                Label { bits: s, trits: ci as u16 }
            } else {
                Label {
                    bits: ((ci as u16) << rest_bits) | s,
                    trits: 0,
                }
            };
        }
    }
    labels
}

/// Sort helper shared with the constellation builders.
pub fn sort_points(points: &mut [Complex64]) {
    points.sort_by(lex_cmp);
}
