//! Numerics for continuous-variable quantum protocols between uniformly
//! accelerated observers.
//!
//! The pipeline: localized wavepacket modes in the inertial and Rindler
//! charts ([`modes`]) are overlapped into Bogoliubov coefficients, which
//! define a noisy Gaussian attenuation channel ([`channel`]) acting on
//! two-mode Gaussian states ([`gaussian`]). Teleportation fidelity,
//! dense-coding mutual information, and the asymmetry-compensating LOCC
//! step live in [`protocols`], with Monte-Carlo validators for the closed
//! forms. [`special`] provides the scaled complex log-gamma / imaginary-order
//! Bessel machinery underneath the Rindler profiles.

pub mod channel;
pub mod error;
pub mod gaussian;
pub mod modes;
pub mod protocols;
pub mod special;

pub use error::{Error, Result};
