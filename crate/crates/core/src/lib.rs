//! Finite-volume diffraction laboratory on the integers.
//!
//! Weighted Dirac combs ([`comb`]) are averaged along interval families
//! ([`vanhove`]) to give Eberlein convolutions and autocorrelations
//! ([`eberlein`]), Fourier–Bohr coefficients ([`fourier_bohr`]) and Bragg
//! intensity estimates ([`diffraction`]). [`orthogonality`] runs the
//! pure-point versus continuous orthogonality checks over the
//! [`generators`] catalog, and [`suite`] bundles the full verification run.

pub mod comb;
pub mod correlate;
pub mod diffraction;
pub mod eberlein;
pub mod error;
pub mod fourier_bohr;
pub mod frequency;
pub mod generators;
pub mod interval;
pub mod oracle;
pub mod orthogonality;
pub mod suite;
pub mod vanhove;

pub use comb::{FiniteWindow, SpectralType, WeightedComb};
pub use correlate::ConvolutionPath;
pub use error::{Error, Result};
pub use frequency::{Frequency, GOLDEN};
pub use interval::Interval;
pub use vanhove::VanHoveFamily;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
