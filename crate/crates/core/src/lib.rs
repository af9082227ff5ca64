//! Hexagonal QAM software modem and link-level simulation toolkit.
//!
//! The crate is organised bottom-up:
//!
//! * [`symbols`]: radix-2/radix-3 digit blocks and the 11-bit to 7-trit block codec.
//! * [`constellation`]: hexagonal and baseline constellations, labeling, (de)modulation.
//! * [`fec`]: binary/ternary convolutional codes, puncturing, interleaving, Viterbi.
//! * [`channel`]: AWGN, Rician block fading and path loss.
//! * [`amc`]: modulation-and-coding tables, SNR estimation error and scheme selection.
//! * [`sim`]: the full transmit/receive pipeline and the Monte Carlo campaigns.
//! * [`cli`]: the `hexqam` command line front end.

pub mod amc;
pub mod channel;
pub mod cli;
pub mod config;
pub mod constellation;
pub mod error;
pub mod fec;
pub mod sim;
pub mod symbols;

pub use error::{Error, Result};
