//! Periodic puncturing of coded digit streams.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Keep/drop mask applied cyclically to a coded stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PuncturePattern {
    keep: Vec<bool>,
}

impl PuncturePattern {
    pub fn new(keep: Vec<bool>) -> Result<Self> {
        if keep.is_empty() || !keep.iter().any(|&k| k) {
            return Err(Error::Config("puncture pattern must keep at least one position".into()));
        }
        Ok(PuncturePattern { keep })
    }

    /// `[1 1 1 0 0 1]`: rate 1/2 mother code to rate 3/4.
    pub fn rate_3_4() -> Self {
        PuncturePattern {
            keep: vec![true, true, true, false, false, true],
        }
    }

    /// Parses a 0/1 string such as `"111001"` (separators ignored).
    pub fn parse(s: &str) -> Result<Self> {
        let keep = s
            .chars()
            .filter(|c| !matches!(c, ' ' | ',' | '[' | ']'))
            .map(|c| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                _ => Err(Error::Config(format!("bad puncture pattern '{s}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(keep)
    }

    pub fn keep(&self) -> &[bool] {
        &self.keep
    }

    pub fn period(&self) -> usize {
        self.keep.len()
    }

    pub fn kept_per_period(&self) -> usize {
        self.keep.iter().filter(|&&k| k).count()
    }

    pub fn is_kept(&self, pos: usize) -> bool {
        self.keep[pos % self.keep.len()]
    }

    /// Length of a stream of `full_len` digits after puncturing.
    pub fn punctured_len(&self, full_len: usize) -> usize {
        let p = self.period();
        full_len / p * self.kept_per_period() + self.keep[..full_len % p].iter().filter(|&&k| k).count()
    }

    pub fn puncture<T: Copy>(&self, coded: &[T]) -> Vec<T> {
        coded
            .iter()
            .enumerate()
            .filter(|(i, _)| self.is_kept(*i))
            .map(|(_, &x)| x)
            .collect()
    }

    /// Re-inserts `fill` at dropped positions so the output has `full_len` entries.
    pub fn depuncture<T: Copy>(&self, received: &[T], full_len: usize, fill: T) -> Result<Vec<T>> {
        let expected = self.punctured_len(full_len);
        if received.len() != expected {
            return Err(Error::Framing(format!(
                "{} punctured digits, expected {expected} for {full_len} positions",
                received.len()
            )));
        }
        let mut it = received.iter();
        Ok((0..full_len)
            .map(|i| if self.is_kept(i) { *it.next().unwrap() } else { fill })
            .collect())
    }
}

impl std::fmt::Display for PuncturePattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &k in &self.keep {
            f.write_str(if k { "1" } else { "0" })?;
        }
        Ok(())
    }
}
