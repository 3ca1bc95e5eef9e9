//! Stabilizer codes on the XYZ² honeycomb and its square-lattice relatives,
//! with Pauli noise models, maximum-likelihood decoders and threshold
//! experiments.

pub mod code;
pub mod config;
pub mod decode;
pub mod error;
pub mod gf2;
pub mod harness;
pub mod noise;
pub mod pauli;
pub mod rng;

pub use code::{Family, StabilizerCode};
pub use decode::{DecodeResult, LogicalClass, Syndrome};
pub use error::{Error, Result};
pub use noise::{Bias, NoiseParams};
pub use pauli::{Letter, PauliOperator};
