//! Structural analysis, stability certification and simulation of chemical
//! reaction networks.
//!
//! The crate is `no_std` and needs only `alloc`. Structural results
//! (stoichiometric subspace, deficiency, siphons, face verdicts) use exact
//! rational arithmetic; floating point appears only in [`dynamics`].

#![no_std]
// `!(a > b)` is used on purpose so that NaN fails validation; the dense
// kernels read more clearly with explicit indices.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod certify;
pub mod dynamics;
pub mod linalg;
pub mod network;
pub mod parse;
pub mod siphon;
pub mod simplex;
pub mod structure;

pub use certify::{certify, Certificate, FaceStatus, FaceVerdict, Overall};
pub use linalg::RationalBasis;
pub use network::{Complex, Reaction, ReactionNetwork, Species};
pub use parse::{parse_network, ParseError};
pub use siphon::{SiphonCatalog, SpeciesSet};
pub use structure::{structure_report, StructureReport};
