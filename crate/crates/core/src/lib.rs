//! Families of mutually unbiased maximally entangled bases in `C^d ⊗ C^d`
//! built from finite commutative rings with a generic additive character,
//! with exact and numeric certification.

pub mod cli;
pub mod error;
pub mod format;
pub mod phase;
pub mod ring;
pub mod search;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
pub use phase::Phase;
pub use ring::{ComponentKind, ComponentSpec, Ring, RingElement, RingSpec};
pub use verify::{Mode, Report};
pub use weyl::{Family, MEBasis, RingChoice, SparseState};
