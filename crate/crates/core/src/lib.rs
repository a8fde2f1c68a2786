//! Packing sets over finite fields and the codes they define.
//!
//! A set `B` of nonzero field elements is a `(t, A, q)`-packing set when
//! every restricted error (values in `A`, at most `t` nonzero positions)
//! has a distinct syndrome `sum_b a_b b`. Such a set is the parity-check
//! row of a length-`B`, dimension-`B-1` code that corrects those errors by
//! table lookup.

pub mod bounds;
pub mod codec;
pub mod constructions;
pub mod error;
pub mod field;
pub mod ntheory;
pub mod packing;
pub mod rng;

pub use error::{Error, Result};
pub use field::{Elem, ElemRepr, FieldCtx};
pub use ntheory::FactoredInteger;
pub use packing::{
    CandidateOrder, ErrorAlphabet, ErrorVector, PackingConfig, PackingSet, Status, Syndrome,
    Verdict, Witness,
};

/// Environment variable that overrides [`packing::DEFAULT_ENUM_CAP`] in the CLI.
pub const ENUM_CAP_ENV: &str = "PACKSET_ENUM_CAP";

/// Enumeration cap from `PACKSET_ENUM_CAP`, falling back to the default.
pub fn enum_cap_from_env() -> u64 {
    std::env::var(ENUM_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(packing::DEFAULT_ENUM_CAP)
}
