//! Constellations, labeling, modulation and hard/soft demodulation.

pub mod labeling;
pub mod lattice;

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Supported constellations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    Bpsk,
    Qpsk,
    Rect8Qam,
    Psk8,
    Qam16,
    Tpsk,
    H6,
    H8,
    H12,
    Psk6,
}

impl Kind {
    pub const ALL: [Kind; 10] = [
        Kind::Bpsk,
        Kind::Qpsk,
        Kind::Rect8Qam,
        Kind::Psk8,
        Kind::Qam16,
        Kind::Tpsk,
        Kind::H6,
        Kind::H8,
        Kind::H12,
        Kind::Psk6,
    ];

    /// (bits, trits) carried per symbol.
    pub fn digits_per_symbol(self) -> (usize, usize) {
        match self {
            Kind::Bpsk => (1, 0),
            Kind::Qpsk => (2, 0),
            Kind::Rect8Qam | Kind::Psk8 | Kind::H8 => (3, 0),
            Kind::Qam16 => (4, 0),
            Kind::Tpsk => (0, 1),
            Kind::H6 | Kind::Psk6 => (1, 1),
            Kind::H12 => (2, 1),
        }
    }

    pub fn size(self) -> usize {
        let (b, t) = self.digits_per_symbol();
        (1 << b) * 3usize.pow(t as u32)
    }

    pub fn is_hexagonal(self) -> bool {
        matches!(self, Kind::Tpsk | Kind::H6 | Kind::H8 | Kind::H12)
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::Bpsk => "bpsk",
            Kind::Qpsk => "qpsk",
            Kind::Rect8Qam => "rect8qam",
            Kind::Psk8 => "8psk",
            Kind::Qam16 => "16qam",
            Kind::Tpsk => "tpsk",
            Kind::H6 => "h6",
            Kind::H8 => "h8",
            Kind::H12 => "h12",
            Kind::Psk6 => "6psk",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Kind> {
        let k = match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "bpsk" => Kind::Bpsk,
            "qpsk" | "4qam" => Kind::Qpsk,
            "rect8qam" | "8qam" => Kind::Rect8Qam,
            "8psk" | "psk8" => Kind::Psk8,
            "16qam" | "qam16" => Kind::Qam16,
            "tpsk" => Kind::Tpsk,
            "h6" | "h6qam" => Kind::H6,
            "h8" | "h8qam" => Kind::H8,
            "h12" | "h12qam" => Kind::H12,
            "6psk" | "psk6" => Kind::Psk6,
            other => return Err(Error::MalformedInput(format!("unknown constellation '{other}'"))),
        };
        Ok(k)
    }
}

/// Digit label of one point: `bits` holds the bit digits as an integer (first
/// digit most significant), `trits` likewise for the trit digits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Label {
    pub bits: u16,
    pub trits: u16,
}

/// A built constellation with unit average energy.
#[derive(Debug, Clone)]
pub struct Constellation {
    kind: Kind,
    points: Vec<Complex64>,
    labels: Vec<Label>,
    bits_per_symbol: usize,
    trits_per_symbol: usize,
    r: f64,
    avg_energy: f64,
    peak_energy: f64,
    // label code (bits * 3^t + trits) -> point index
    point_of_code: Vec<usize>,
    // flattened per-point digit tuples, stride bits+trits
    digit_table: Vec<u8>,
}

fn gray2(v: u16) -> u16 {
    labeling::gray(v)
}

/// Gray-coded PAM levels -3, -1, 1, 3 for 2 bits.
fn pam4_level(bits: u16) -> f64 {
    // Gray order 00, 01, 11, 10 from left to right.
    match bits {
        0b00 => -3.0,
        0b01 => -1.0,
        0b11 => 1.0,
        0b10 => 3.0,
        _ => unreachable!(),
    }
}

fn baseline(kind: Kind) -> (Vec<Complex64>, Vec<Label>) {
    let lab = |bits: u16| Label { bits, trits: 0 };
    match kind {
        Kind::Bpsk => (
            vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
            vec![lab(0), lab(1)],
        ),
        Kind::Qpsk => {
            let mut pts = Vec::new();
            let mut labels = Vec::new();
            for b in 0..4u16 {
                let i = if b & 0b10 == 0 { 1.0 } else { -1.0 };
                let q = if b & 0b01 == 0 { 1.0 } else { -1.0 };
                pts.push(Complex64::new(i, q));
                labels.push(lab(b));
            }
            (pts, labels)
        }
        Kind::Rect8Qam => {
            let mut pts = Vec::new();
            let mut labels = Vec::new();
            for b in 0..8u16 {
                let i = pam4_level(b >> 1);
                let q = if b & 1 == 0 { 1.0 } else { -1.0 };
                pts.push(Complex64::new(i, q));
                labels.push(lab(b));
            }
            (pts, labels)
        }
        Kind::Qam16 => {
            let mut pts = Vec::new();
            let mut labels = Vec::new();
            for b in 0..16u16 {
                pts.push(Complex64::new(pam4_level(b >> 2), pam4_level(b & 0b11)));
                labels.push(lab(b));
            }
            (pts, labels)
        }
        Kind::Psk8 => {
            let mut pts = Vec::new();
            let mut labels = Vec::new();
            for k in 0..8u16 {
                pts.push(Complex64::from_polar(1.0, PI / 4.0 * k as f64));
                labels.push(lab(gray2(k)));
            }
            (pts, labels)
        }
        Kind::Psk6 => {
            let pts: Vec<Complex64> = (0..6)
                .map(|k| Complex64::from_polar(1.0, PI / 3.0 * k as f64))
                .collect();
            let labels = labeling::cluster_labels(&pts, 1, 1);
            (pts, labels)
        }
        _ => unreachable!("hexagonal kinds are built by lattice search"),
    }
}

impl Constellation {
    /// Builds `kind` with unit average energy and its digit labeling.
    pub fn build(kind: Kind) -> Constellation {
        let (b, t) = kind.digits_per_symbol();
        let (mut points, mut labels) = if kind.is_hexagonal() {
            let set = lattice::search(kind.size()).expect("lattice search covers all hexagonal sizes");
            let pts = set.points;
            let labels = labeling::cluster_labels(&pts, b, t);
            (pts, labels)
        } else {
            baseline(kind)
        };

        let centroid = points.iter().sum::<Complex64>() / points.len() as f64;
        for p in points.iter_mut() {
            *p -= centroid;
        }
        let es = points.iter().map(|p| p.norm_sqr()).sum::<f64>() / points.len() as f64;
        let scale = 1.0 / es.sqrt();
        for p in points.iter_mut() {
            *p *= scale;
            if p.re.abs() < 1e-15 {
                p.re = 0.0;
            }
            if p.im.abs() < 1e-15 {
                p.im = 0.0;
            }
        }

        // Canonical point order: lexicographic on (re, im).
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&i, &j| lattice::lex_cmp(&points[i], &points[j]));
        points = order.iter().map(|&i| points[i]).collect();
        labels = order.iter().map(|&i| labels[i]).collect();

        Self::from_parts(kind, points, labels, b, t)
    }

    fn from_parts(kind: Kind, points: Vec<Complex64>, labels: Vec<Label>, b: usize, t: usize) -> Constellation {
        let n = points.len();
        let mut dmin = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                dmin = dmin.min((points[i] - points[j]).norm());
            }
        }
        let avg_energy = points.iter().map(|p| p.norm_sqr()).sum::<f64>() / n as f64;
        let peak_energy = points.iter().map(|p| p.norm_sqr()).fold(0.0, f64::max);
        let t_count = 3usize.pow(t as u32);
        let mut point_of_code = vec![usize::MAX; n];
        for (i, l) in labels.iter().enumerate() {
            let code = l.bits as usize * t_count + l.trits as usize;
            assert!(code < n && point_of_code[code] == usize::MAX, "labels must be a bijection");
            point_of_code[code] = i;
        }
        let per = b + t;
        let mut digit_table = Vec::with_capacity(n * per);
        for l in &labels {
            for k in (0..b).rev() {
                digit_table.push(((l.bits >> k) & 1) as u8);
            }
            let mut tv = vec![0u8; t];
            let mut v = l.trits;
            for slot in tv.iter_mut().rev() {
                *slot = (v % 3) as u8;
                v /= 3;
            }
            digit_table.extend(tv);
        }
        Constellation {
            kind,
            digit_table,
            points,
            labels,
            bits_per_symbol: b,
            trits_per_symbol: t,
            r: if n > 1 { dmin / 2.0 } else { 0.0 },
            avg_energy,
            peak_energy,
            point_of_code,
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.bits_per_symbol
    }

    pub fn trits_per_symbol(&self) -> usize {
        self.trits_per_symbol
    }

    pub fn digits_per_symbol(&self) -> usize {
        self.bits_per_symbol + self.trits_per_symbol
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }

    /// Minimum distance from a point to its decision boundary.
    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn avg_energy(&self) -> f64 {
        self.avg_energy
    }

    pub fn peak_energy(&self) -> f64 {
        self.peak_energy
    }

    pub fn r2_over_es(&self) -> f64 {
        self.r * self.r / self.avg_energy
    }

    /// Digit tuple of point `i`: bits then trits, most significant first.
    pub fn label_digits(&self, i: usize) -> &[u8] {
        let per = self.digits_per_symbol();
        &self.digit_table[i * per..(i + 1) * per]
    }

    pub fn bit_label_string(&self, i: usize) -> String {
        self.label_digits(i)[..self.bits_per_symbol]
            .iter()
            .map(|d| char::from(b'0' + d))
            .collect()
    }

    pub fn trit_label_string(&self, i: usize) -> String {
        self.label_digits(i)[self.bits_per_symbol..]
            .iter()
            .map(|d| char::from(b'0' + d))
            .collect()
    }

    /// Point index carrying the given digit tuple (bits then trits).
    pub fn point_for_digits(&self, digits: &[u8]) -> Result<usize> {
        if digits.len() != self.digits_per_symbol() {
            return Err(Error::Framing(format!(
                "{} digits for a {}-digit symbol",
                digits.len(),
                self.digits_per_symbol()
            )));
        }
        let mut bits = 0usize;
        for &d in &digits[..self.bits_per_symbol] {
            if d > 1 {
                return Err(Error::MalformedInput(format!("bit value {d}")));
            }
            bits = bits << 1 | d as usize;
        }
        let mut trits = 0usize;
        for &d in &digits[self.bits_per_symbol..] {
            if d > 2 {
                return Err(Error::MalformedInput(format!("trit value {d}")));
            }
            trits = trits * 3 + d as usize;
        }
        Ok(self.point_of_code[bits * 3usize.pow(self.trits_per_symbol as u32) + trits])
    }

    /// Maps a mixed digit stream (per symbol: bits, then trits) to symbols.
    pub fn modulate(&self, digits: &[u8]) -> Result<Vec<Complex64>> {
        let per = self.digits_per_symbol();
        if digits.len() % per != 0 {
            return Err(Error::Framing(format!(
                "stream of {} digits is not a multiple of {per}",
                digits.len()
            )));
        }
        digits
            .chunks(per)
            .map(|c| self.point_for_digits(c).map(|i| self.points[i]))
            .collect()
    }

    /// Multiplexes a bit lane and a trit lane symbol by symbol.
    pub fn modulate_lanes(&self, bits: &[u8], trits: &[u8]) -> Result<Vec<Complex64>> {
        let (b, t) = (self.bits_per_symbol, self.trits_per_symbol);
        let n = if b > 0 { bits.len() / b } else { trits.len() / t };
        if bits.len() != n * b || trits.len() != n * t {
            return Err(Error::Framing(format!(
                "lanes of {} bits and {} trits do not fill whole {b}+{t} symbols",
                bits.len(),
                trits.len()
            )));
        }
        let mut tuple = vec![0u8; b + t];
        let mut out = Vec::with_capacity(n);
        for s in 0..n {
            tuple[..b].copy_from_slice(&bits[s * b..(s + 1) * b]);
            tuple[b..].copy_from_slice(&trits[s * t..(s + 1) * t]);
            out.push(self.points[self.point_for_digits(&tuple)?]);
        }
        Ok(out)
    }

    /// Index of the nearest point; ties go to the lowest index.
    pub fn nearest(&self, y: Complex64) -> usize {
        let mut best = 0;
        let mut bd = f64::INFINITY;
        for (i, p) in self.points.iter().enumerate() {
            let d = (y - p).norm_sqr();
            if d < bd {
                bd = d;
                best = i;
            }
        }
        best
    }

    pub fn demodulate_hard(&self, received: &[Complex64]) -> Vec<u8> {
        let mut out = Vec::with_capacity(received.len() * self.digits_per_symbol());
        for &y in received {
            out.extend_from_slice(self.label_digits(self.nearest(y)));
        }
        out
    }

    /// Hard decisions split back into a bit lane and a trit lane.
    pub fn demodulate_lanes(&self, received: &[Complex64]) -> (Vec<u8>, Vec<u8>) {
        let b = self.bits_per_symbol;
        let mut bits = Vec::with_capacity(received.len() * b);
        let mut trits = Vec::with_capacity(received.len() * self.trits_per_symbol);
        for &y in received {
            let d = self.label_digits(self.nearest(y));
            bits.extend_from_slice(&d[..b]);
            trits.extend_from_slice(&d[b..]);
        }
        (bits, trits)
    }

    /// Squared Euclidean distances from `y` to every point.
    pub fn distances(&self, y: Complex64) -> Vec<f64> {
        self.points.iter().map(|p| (y - p).norm_sqr()).collect()
    }

    /// Per-digit soft costs for one received sample: for each digit position
    /// (bits then trits) and each digit value, the smallest squared distance to
    /// a point carrying that value. Bit positions fill only the first two slots.
    pub fn digit_costs(&self, y: Complex64) -> Vec<[f64; 3]> {
        let per = self.digits_per_symbol();
        let mut out = vec![[f64::INFINITY; 3]; per];
        for (i, p) in self.points.iter().enumerate() {
            let d = (y - p).norm_sqr();
            for (pos, &v) in self.label_digits(i).iter().enumerate() {
                let slot = &mut out[pos][v as usize];
                if d < *slot {
                    *slot = d;
                }
            }
        }
        out
    }

    /// CSV dump: `index,re,im,bit_label,trit_label`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "index,re,im,bit_label,trit_label")?;
        for (i, p) in self.points.iter().enumerate() {
            writeln!(
                w,
                "{},{:.12},{:.12},{},{}",
                i,
                p.re,
                p.im,
                self.bit_label_string(i),
                self.trit_label_string(i)
            )?;
        }
        Ok(())
    }
}

/// Gaussian tail probability.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// Nearest-neighbour symbol error approximation `2 Q(sqrt(2 r^2 / N0))`, clamped to [0, 1].
pub fn ser_approx(r: f64, n0: f64) -> Result<f64> {
    if n0.is_nan() || n0 <= 0.0 {
        return Err(Error::Domain(format!("N0 must be positive, got {n0}")));
    }
    if r < 0.0 {
        return Err(Error::Domain(format!("r must be non-negative, got {r}")));
    }
    Ok((2.0 * q_function((2.0 * r * r / n0).sqrt())).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rotate(p: Complex64, deg: f64) -> Complex64 {
        p * Complex64::from_polar(1.0, deg.to_radians())
    }

    #[test]
    fn r2_over_es_ratios() {
        let cases = [
            (Kind::Tpsk, 3.0 / 4.0),
            (Kind::H6, 3.0 / 10.0),
            (Kind::H8, 2.0 / 9.0),
            (Kind::H12, 3.0 / 19.0),
            (Kind::Psk6, 1.0 / 4.0),
            (Kind::Rect8Qam, 1.0 / 6.0),
            (Kind::Bpsk, 1.0),
            (Kind::Qpsk, 0.5),
            (Kind::Qam16, 0.1),
        ];
        for (k, v) in cases {
            let c = Constellation::build(k);
            assert!((c.r2_over_es() - v).abs() < 1e-9, "{k}: {}", c.r2_over_es());
        }
    }

    #[test]
    fn structural_invariants() {
        for k in Kind::ALL {
            let c = Constellation::build(k);
            let (b, t) = k.digits_per_symbol();
            assert_eq!(c.size(), (1 << b) * 3usize.pow(t as u32));
            assert!((c.avg_energy() - 1.0).abs() < 1e-12);
            let centroid: Complex64 = c.points().iter().sum::<Complex64>() / c.size() as f64;
            assert!(centroid.norm() < 1e-9, "{k}");
                let mut labels: Vec<Vec<u8>> = (0..c.size()).map(|i| c.label_digits(i).to_vec()).collect();
            labels.sort();
            labels.dedup();
            assert_eq!(labels.len(), c.size());
            assert!(c.peak_energy() >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn rotational_symmetry() {
        for k in [Kind::Tpsk, Kind::H6, Kind::H12] {
            let c = Constellation::build(k);
            for p in c.points() {
                let q = rotate(*p, 120.0);
                assert!(c.points().iter().any(|x| (x - q).norm() < 1e-9), "{k}");
            }
        }
    }

    #[test]
    fn bpsk_convention() {
        let c = Constellation::build(Kind::Bpsk);
        assert_eq!(c.modulate(&[0, 1]).unwrap(), vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);
    }

    #[test]
    fn tpsk_labels_in_angular_order() {
        let c = Constellation::build(Kind::Tpsk);
        let mut by_trit = [Complex64::default(); 3];
        for i in 0..3 {
            by_trit[c.labels()[i].trits as usize] = c.points()[i];
        }
        let ang: Vec<f64> = by_trit.iter().map(|p| p.arg().rem_euclid(std::f64::consts::TAU)).collect();
        assert!(ang[0] < ang[1] && ang[1] < ang[2]);
    }

    #[test]
    fn h6_carries_one_bit_one_trit() {
        let c = Constellation::build(Kind::H6);
        let mut pts = Vec::new();
        for b in 0..2u8 {
            for t in 0..3u8 {
                pts.push(c.modulate(&[b, t]).unwrap()[0]);
            }
        }
        for i in 0..6 {
            for j in i + 1..6 {
                assert!((pts[i] - pts[j]).norm() > 0.1);
            }
        }
    }

    fn find(c: &Constellation, trit: u16, bits: u16) -> usize {
        c.labels().iter().position(|l| l.trits == trit && l.bits == bits).unwrap()
    }

    #[test]
    fn h12_first_cluster_gray_path() {
        let c = Constellation::build(Kind::H12);
        let pairs = labeling::neighbour_pairs(c.points());
        let adj = |a: usize, b: usize| pairs.contains(&(a.min(b), a.max(b)));
        let seq: Vec<usize> = [0b00, 0b01, 0b11, 0b10].iter().map(|&b| find(&c, 0, b)).collect();
        for w in seq.windows(2) {
            assert!(adj(w[0], w[1]), "Gray path broken");
        }
    }

    #[test]
    fn h12_cross_cluster_matching() {
        let c = Constellation::build(Kind::H12);
        let pairs = labeling::neighbour_pairs(c.points());
        let adj = |a: usize, b: usize| pairs.contains(&(a.min(b), a.max(b)));
        // '000'/'001' neighbour '100'/'101'
        assert!(adj(find(&c, 0, 0b00), find(&c, 1, 0b00)));
        assert!(adj(find(&c, 0, 0b01), find(&c, 1, 0b01)));
    }

    #[test]
    fn modulate_framing_error() {
        let c = Constellation::build(Kind::H12);
        assert!(matches!(c.modulate(&[0, 1]), Err(Error::Framing(_))));
        assert!(matches!(c.modulate(&[0, 1, 3]), Err(Error::MalformedInput(_))));
        assert!(matches!(c.modulate(&[2, 1, 0]), Err(Error::MalformedInput(_))));
    }

    #[test]
    fn perturbation_below_r_keeps_label() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in Kind::ALL {
            let c = Constellation::build(k);
            for i in 0..c.size() {
                for _ in 0..50 {
                    let mag = rng.random::<f64>() * c.r() * 0.999;
                    let ang = rng.random::<f64>() * std::f64::consts::TAU;
                    let y = c.points()[i] + Complex64::from_polar(mag, ang);
                    assert_eq!(c.nearest(y), i);
                }
                assert_eq!(c.demodulate_hard(&[c.points()[i]]), c.label_digits(i));
            }
        }
    }

    #[test]
    fn lossless_zero_noise_many_symbols() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in Kind::ALL {
            let c = Constellation::build(k);
            let (b, t) = k.digits_per_symbol();
            let n = 100_000;
            let mut digits = Vec::with_capacity(n * (b + t));
            for _ in 0..n {
                for _ in 0..b {
                    digits.push(rng.random_range(0..2u8));
                }
                for _ in 0..t {
                    digits.push(rng.random_range(0..3u8));
                }
            }
            let sym = c.modulate(&digits).unwrap();
            assert_eq!(c.demodulate_hard(&sym), digits, "{k}");
            let es = sym.iter().map(|s| s.norm_sqr()).sum::<f64>() / n as f64;
            assert!((es - 1.0).abs() < 0.02, "{k}: {es}");
        }
    }

    #[test]
    fn demodulation_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for k in Kind::ALL {
            let c = Constellation::build(k);
            let ys: Vec<Complex64> = (0..2000)
                .map(|_| Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)))
                .collect();
            let d = c.demodulate_hard(&ys);
            let again = c.demodulate_hard(&c.modulate(&d).unwrap());
            assert_eq!(d, again);
        }
    }

    /// Monte Carlo cell areas: uniform samples over a large disc land in each
    /// decision region in proportion to its area. For the 16-QAM grid the four
    /// inner cells are squares of side 2/sqrt(10).
    #[test]
    fn voronoi_area_histogram() {
        let c = Constellation::build(Kind::Qam16);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let radius: f64 = 3.0;
        let n = 400_000;
        let mut counts = vec![0usize; 16];
        for _ in 0..n {
            let rr = radius * rng.random::<f64>().sqrt();
            let th = rng.random::<f64>() * std::f64::consts::TAU;
            counts[c.nearest(Complex64::from_polar(rr, th))] += 1;
        }
        let cell = (2.0 / 10f64.sqrt()).powi(2);
        let disc = PI * radius * radius;
        let expected = n as f64 * cell / disc;
        for (i, p) in c.points().iter().enumerate() {
            if p.re.abs() < 0.5 && p.im.abs() < 0.5 {
                let rel = (counts[i] as f64 - expected).abs() / expected;
                assert!(rel < 0.05, "inner cell {i}: {} vs {expected}", counts[i]);
            }
        }
        // By symmetry the three H12 shells' cells share areas within each shell.
        let h = Constellation::build(Kind::H12);
        let mut counts = vec![0usize; 12];
        for _ in 0..n {
            let rr = 0.9 * rng.random::<f64>().sqrt();
            let th = rng.random::<f64>() * std::f64::consts::TAU;
            counts[h.nearest(Complex64::from_polar(rr, th))] += 1;
        }
        let inner: Vec<usize> = (0..12).filter(|&i| h.points()[i].norm() < 0.5).collect();
        assert_eq!(inner.len(), 3);
        let mean = inner.iter().map(|&i| counts[i] as f64).sum::<f64>() / 3.0;
        for &i in &inner {
            assert!((counts[i] as f64 - mean).abs() / mean < 0.03);
        }
    }

    #[test]
    fn ser_values() {
        assert_eq!(ser_approx(0.0, 1.0).unwrap(), 1.0);
        // 2 r^2 / N0 = 9
        let v = ser_approx(1.5, 0.5).unwrap();
        assert!((v - 2.6998e-3).abs() < 1e-7, "{v}");
        assert_eq!(ser_approx(1.0, 1e300).unwrap(), 1.0);
        assert!(ser_approx(1.0, 0.0).is_err());
        assert!(ser_approx(1.0, -1.0).is_err());
    }

    #[test]
    fn soft_costs_agree_with_hard_decision() {
        let c = Constellation::build(Kind::H12);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let y = Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
            let costs = c.digit_costs(y);
            let hard = c.label_digits(c.nearest(y));
            for (pos, &d) in hard.iter().enumerate() {
                let radix = if pos < c.bits_per_symbol() { 2 } else { 3 };
                let best = (0..radix).min_by(|&a, &b| costs[pos][a].partial_cmp(&costs[pos][b]).unwrap()).unwrap();
                assert_eq!(best, d as usize);
            }
            let dist = c.distances(y);
            assert_eq!(dist.len(), 12);
        }
    }

    #[test]
    fn csv_dump_has_header_and_rows() {
        let c = Constellation::build(Kind::H12);
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.lines().count(), 13);
        assert!(s.starts_with("index,re,im,bit_label,trit_label"));
    }

    #[test]
    fn kind_names_round_trip() {
        for k in Kind::ALL {
            assert_eq!(k.name().parse::<Kind>().unwrap(), k);
        }
        assert!("h7".parse::<Kind>().is_err());
    }
}
