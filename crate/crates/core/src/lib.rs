//! Achievable generalized degrees of freedom (gDoF) and finite-SNR rates for
//! the two-user noncoherent block-fading interference channel.
//!
//! Neither transmitters nor receivers know the fading realizations; links are
//! Rayleigh with symmetric statistics `E|g11|² = E|g22|² = SNR` and
//! `E|g12|² = E|g21|² = INR`, constant over blocks of `T` symbols.
//!
//! The crate is organized by capability:
//!
//! | Module | Provides |
//! |--------|----------|
//! | [`channel`] | [`ChannelConfig`], regimes, MMSE training model, seeded link sampling |
//! | [`polytope`] | Fourier-Motzkin elimination, 2D regions, vertices, symmetric gDoF |
//! | [`schemes`] | gDoF regions of six schemes, mutual-information term bounds, prelogs |
//! | [`finite_snr`] | expected-log evaluation, the exponential integral, rate pipelines |
//! | [`cli`] | tabular CSV/JSON records and the commands behind the `ncic` binary |
//! | [`validate`] | the self-check suite run by `ncic validate` |
//!
//! ```
//! use noncoherent_ic::{schemes, SchemeId};
//!
//! // Rate splitting at α = 1 behaves like TDM with two training symbols.
//! let d = schemes::sym_gdof(SchemeId::RsNoFb, 1.0, 5).unwrap();
//! assert!((d - 0.3).abs() < 1e-12);
//! ```

pub mod channel;
pub mod cli;
mod error;
pub mod finite_snr;
pub mod polytope;
pub mod schemes;
pub mod special;
pub mod validate;

pub use channel::{ChannelConfig, ChunkPolicy, LinkDraw, MmseModel, Regime};
pub use error::{Error, Result};
pub use finite_snr::{ExpectedLogSpec, McEstimate};
pub use polytope::{IneqSystem, Region2D, SymmetricMax};
pub use schemes::{SchemeId, TermBounds, TermId};
