//! Forward error correction: convolutional codes over GF(2)/GF(3), puncturing,
//! block interleaving and Viterbi decoding.

pub mod conv;
pub mod interleave;
pub mod puncture;
pub mod search;
pub mod viterbi;

pub use conv::{ConvCodeSpec, Trellis};
pub use interleave::BlockInterleaver;
pub use puncture::PuncturePattern;
pub use viterbi::{DigitCost, ViterbiDecoder, ERASED};
