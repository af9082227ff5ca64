//! AWGN, Rician block fading, distance path loss and SNR bookkeeping.
//!
//! Symbol energy is normalised to one, so `N0 = 10^(-Es/N0[dB] / 10)`.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Noise spectral density for unit symbol energy at the given Es/N0 in dB.
pub fn n0_from_snr_db(snr_db: f64) -> f64 {
    db_to_linear(-snr_db)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AwgnModel {
    n0: f64,
}

impl AwgnModel {
    pub fn new(n0: f64) -> Result<Self> {
        if n0.is_nan() || n0 < 0.0 {
            return Err(Error::Domain(format!("N0 must be non-negative, got {n0}")));
        }
        Ok(AwgnModel { n0 })
    }

    pub fn from_snr_db(snr_db: f64) -> Self {
        AwgnModel {
            n0: n0_from_snr_db(snr_db),
        }
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }

    pub fn snr_db(&self) -> f64 {
        -linear_to_db(self.n0)
    }

    pub fn apply<R: Rng + ?Sized>(&self, symbols: &[Complex64], rng: &mut R) -> Vec<Complex64> {
        apply_awgn(symbols, self.n0, rng)
    }
}

/// Adds circular complex Gaussian noise with variance `n0 / 2` per real dimension.
pub fn apply_awgn<R: Rng + ?Sized>(symbols: &[Complex64], n0: f64, rng: &mut R) -> Vec<Complex64> {
    if n0 == 0.0 {
        return symbols.to_vec();
    }
    let sigma = (n0 / 2.0).sqrt();
    symbols
        .iter()
        .map(|&s| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            s + Complex64::new(re, im) * sigma
        })
        .collect()
}

/// Rician block fading with unit mean power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RicianBlockModel {
    /// Rician factor in dB; `f64::INFINITY` is a pure line-of-sight channel.
    pub k_db: f64,
    /// Symbols per fading block; `None` means one block per packet.
    pub block_len: Option<usize>,
}

impl Default for RicianBlockModel {
    fn default() -> Self {
        RicianBlockModel {
            k_db: 6.0,
            block_len: None,
        }
    }
}

impl RicianBlockModel {
    pub fn new(k_db: f64) -> Self {
        RicianBlockModel { k_db, block_len: None }
    }

    pub fn k_linear(&self) -> f64 {
        db_to_linear(self.k_db)
    }

    /// Share of the mean power carried by the line-of-sight component.
    pub fn los_fraction(&self) -> f64 {
        if self.k_db == f64::INFINITY {
            return 1.0;
        }
        let k = self.k_linear();
        k / (k + 1.0)
    }

    pub fn gain<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        let los = self.los_fraction();
        let diffuse = 1.0 - los;
        if diffuse == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        // CN(0, 1) has variance 1/2 per dimension.
        Complex64::new(los.sqrt(), 0.0) + Complex64::new(re, im) * (diffuse / 2.0).sqrt()
    }

    pub fn gains<R: Rng + ?Sized>(&self, n_blocks: usize, rng: &mut R) -> Vec<Complex64> {
        (0..n_blocks).map(|_| self.gain(rng)).collect()
    }
}

/// Convenience wrapper around [`RicianBlockModel::gains`].
pub fn rician_block_gains<R: Rng + ?Sized>(n_blocks: usize, k_db: f64, rng: &mut R) -> Result<Vec<Complex64>> {
    if k_db.is_nan() || (k_db.is_infinite() && k_db < 0.0) {
        return Err(Error::Domain(format!("Rician factor must be >= 0 linear, got {k_db} dB")));
    }
    Ok(RicianBlockModel::new(k_db).gains(n_blocks, rng))
}

/// Multiplies consecutive blocks of `block_len` symbols by their gain.
pub fn apply_block_fading(symbols: &[Complex64], gains: &[Complex64], block_len: usize) -> Vec<Complex64> {
    symbols
        .iter()
        .enumerate()
        .map(|(i, &s)| s * gains[(i / block_len.max(1)).min(gains.len() - 1)])
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossModel {
    pub alpha: f64,
    /// Mean SNR at unit (network boundary) distance.
    pub boundary_snr_db: f64,
}

impl Default for PathLossModel {
    fn default() -> Self {
        PathLossModel {
            alpha: 3.0,
            boundary_snr_db: 7.0,
        }
    }
}

impl PathLossModel {
    pub fn snr_at_distance(&self, d: f64) -> Result<f64> {
        if d.is_nan() || d <= 0.0 {
            return Err(Error::Domain(format!("distance must be positive, got {d}")));
        }
        Ok(self.boundary_snr_db + 10.0 * self.alpha * (1.0 / d).log10())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::q_function;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_noise_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = vec![Complex64::new(1.0, -1.0); 10];
        assert_eq!(apply_awgn(&s, 0.0, &mut rng), s);
        assert!(AwgnModel::new(-1.0).is_err());
    }

    #[test]
    fn noise_variance_and_whiteness() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 1_000_000;
        let n0 = 0.3;
        let zeros = vec![Complex64::new(0.0, 0.0); n];
        let y = apply_awgn(&zeros, n0, &mut rng);
        let var = y.iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64;
        assert!((var - n0).abs() / n0 < 0.01);
        for lag in 1..4 {
            let c: Complex64 = (lag..n).map(|i| y[i] * y[i - lag].conj()).sum::<Complex64>() / (n - lag) as f64;
            // std of the estimate is n0 / sqrt(n)
            assert!(c.norm() < 5.0 * n0 / (n as f64).sqrt(), "lag {lag}: {c}");
        }
    }

    #[test]
    fn bpsk_ber_matches_q_function() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n0 = 0.25; // Es/N0 = 4
        let n = 2_000_000;
        let tx = vec![Complex64::new(1.0, 0.0); n];
        let rx = apply_awgn(&tx, n0, &mut rng);
        let errors = rx.iter().filter(|z| z.re < 0.0).count() as f64;
        let p = q_function(8f64.sqrt());
        assert!((p - 2.34e-3).abs() < 1e-5);
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        assert!((errors / n as f64 - p).abs() < 3.0 * sigma);
    }

    #[test]
    fn rician_power_and_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = rician_block_gains(1_000_000, 6.0, &mut rng).unwrap();
        let p = g.iter().map(|h| h.norm_sqr()).sum::<f64>() / g.len() as f64;
        assert!((p - 1.0).abs() < 0.01);
        let los = RicianBlockModel::new(6.0).los_fraction();
        assert!((los - 0.799).abs() < 5e-4);
        let mean: Complex64 = g.iter().sum::<Complex64>() / g.len() as f64;
        assert!((mean.re - los.sqrt()).abs() < 0.01);
        let pure = rician_block_gains(10, f64::INFINITY, &mut rng).unwrap();
        assert!(pure.iter().all(|h| *h == Complex64::new(1.0, 0.0)));
        assert!(rician_block_gains(1, f64::NAN, &mut rng).is_err());
    }

    #[test]
    fn fading_keeps_symbol_count() {
        let s = vec![Complex64::new(1.0, 0.0); 10];
        let g = vec![Complex64::new(0.5, 0.0), Complex64::new(2.0, 0.0)];
        let y = apply_block_fading(&s, &g, 5);
        assert_eq!(y.len(), 10);
        assert_eq!(y[4], Complex64::new(0.5, 0.0));
        assert_eq!(y[5], Complex64::new(2.0, 0.0));
    }

    #[test]
    fn path_loss() {
        let m = PathLossModel::default();
        assert_eq!(m.snr_at_distance(1.0).unwrap(), 7.0);
        assert!((m.snr_at_distance(0.5).unwrap() - (7.0 + 30.0 * 2f64.log10())).abs() < 1e-12);
        assert!((m.snr_at_distance(0.5).unwrap() - 16.03).abs() < 0.01);
        let flat = PathLossModel { alpha: 0.0, boundary_snr_db: 7.0 };
        assert_eq!(flat.snr_at_distance(0.01).unwrap(), 7.0);
        assert!(m.snr_at_distance(0.0).is_err());
        assert!(m.snr_at_distance(-1.0).is_err());
        let mut last = f64::INFINITY;
        for i in 1..=100 {
            let s = m.snr_at_distance(i as f64 / 100.0).unwrap();
            assert!(s <= last);
            last = s;
        }
    }

    #[test]
    fn snr_bookkeeping() {
        let a = AwgnModel::from_snr_db(6.02);
        assert!((a.n0() - 0.25).abs() < 1e-3);
        assert!((a.snr_db() - 6.02).abs() < 1e-12);
    }

    #[test]
    fn seeded_determinism() {
        let s = vec![Complex64::new(0.0, 0.0); 100];
        let a = apply_awgn(&s, 1.0, &mut ChaCha8Rng::seed_from_u64(9));
        let b = apply_awgn(&s, 1.0, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }
}
