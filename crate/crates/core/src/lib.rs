//! Achievable secrecy rates and secure degrees of freedom of structured codes
//! for the Gaussian wiretap channel with a cooperative jammer.
//!
//! The crate is split by concern:
//!
//! * [`channel`]: the channel model, canonical scaling and rational
//!   decomposition of the cross gain.
//! * [`infotheory`]: exact entropies over finite alphabets, the integer-code
//!   leakage `f(Q)` and the asymmetric-digit optimizer.
//! * [`lattice`]: small-dimension lattices, nested codebooks, the
//!   representation of sums modulo a lattice and exact layer leakage.
//! * [`schemes`]: closed-form rate, power and secure-degree-of-freedom
//!   calculators for every coding scheme.
//! * [`curves`]: scheme comparisons across gains and powers.
//! * [`simulate`]: seeded Monte Carlo of the integer expansion codes.
//! * [`verify`]: exhaustive checks of the algebraic claims.

// NaN-rejecting guards are written as `!(x > 0.0)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod curves;
mod error;
pub mod fmt;
pub mod infotheory;
pub mod lattice;
pub mod schemes;
pub mod simulate;
pub mod verify;

pub use channel::{CanonicalChannel, ChannelGains, EavSign, RationalDecomposition};
pub use error::{Error, Result};
pub use infotheory::DiscretePmf;

/// Chapters of the guide in `book/`, compiled as doctests so the snippets
/// stay in sync with the library.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/channel.md")]
    pub struct Channel;
    #[doc = include_str!("../../../book/src/leakage.md")]
    pub struct Leakage;
    #[doc = include_str!("../../../book/src/representation.md")]
    pub struct Representation;
    #[doc = include_str!("../../../book/src/nested.md")]
    pub struct Nested;
    #[doc = include_str!("../../../book/src/integer.md")]
    pub struct Integer;
    #[doc = include_str!("../../../book/src/finite_power.md")]
    pub struct FinitePower;
    #[doc = include_str!("../../../book/src/simulation.md")]
    pub struct Simulation;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
