//! Entanglement-assisted cavity electro-optic quantum transducer.
//!
//! The bare electro-optic (EO) converter is a passive linear network: its
//! converted microwave output mixes the optical signal with the reflected
//! microwave probe and the two intrinsic-loss baths. Sandwiching it between a
//! two-mode squeezer `S(G)` (probe/ancilla) and an anti-squeezer `S†(G′)`
//! turns it into a single-mode Gaussian channel whose effective gain is
//! `τ = G′η`. This crate
//!
//! * computes the steady-state transfer amplitudes of the EO system ([`physics`]),
//! * composes them with the squeezers and classifies the resulting channel
//!   ([`channel`]),
//! * evaluates quantum-capacity lower bounds ([`capacity`]),
//! * re-derives all of the above by brute-force linear algebra and
//!   Bogoliubov coefficient tracking ([`oracle`]),
//! * runs the parameter sweeps behind the `eotx` CLI ([`sweep`]).
//!
//! The math is generic over [`Real`] (`f32` or `f64`); the sweep engine works
//! in `f64`. Concrete aliases for both precisions are exported below.

pub mod capacity;
pub mod channel;
mod error;
pub mod oracle;
pub mod physics;
pub mod pipeline;
mod scalar;
pub mod sweep;

pub use capacity::{CapacityBranch, CapacityResult};
pub use channel::{
    ChannelDescriptor, ChannelKind, NoiseCoefficients, PortOccupations, SpecialChannel,
    SqueezerPair,
};
pub use error::{Error, Result};
pub use physics::{DerivedEoQuantities, EoParams, PhysicalConstants, TransferCoefficients};
pub use scalar::Real;

/// Complex amplitude type used for transfer coefficients.
pub type Complex<T> = num_complex::Complex<T>;

pub type EoParams64 = EoParams<f64>;
pub type EoParams32 = EoParams<f32>;
pub type TransferCoefficients64 = TransferCoefficients<f64>;
pub type TransferCoefficients32 = TransferCoefficients<f32>;
pub type SqueezerPair64 = SqueezerPair<f64>;
pub type SqueezerPair32 = SqueezerPair<f32>;
pub type NoiseCoefficients64 = NoiseCoefficients<f64>;
pub type NoiseCoefficients32 = NoiseCoefficients<f32>;
pub type PortOccupations64 = PortOccupations<f64>;
pub type PortOccupations32 = PortOccupations<f32>;
pub type ChannelDescriptor64 = ChannelDescriptor<f64>;
pub type ChannelDescriptor32 = ChannelDescriptor<f32>;
pub type CapacityResult64 = CapacityResult<f64>;
pub type CapacityResult32 = CapacityResult<f32>;
