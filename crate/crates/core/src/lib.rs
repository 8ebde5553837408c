//! Non-overlapping (cross-bifix-free) codes.
//!
//! A q-ary code of length n is non-overlapping when no non-empty proper
//! prefix of a codeword equals a non-empty proper suffix of any codeword
//! (the same word included). This crate builds such codes, counts and
//! verifies them, bounds the largest possible code size `C(n, q)`, computes
//! `C(n, q)` exactly on small instances, and simulates their use as frame
//! synchronisation markers.
//!
//! Modules:
//!
//! * [`words`] - words, codes, overlap predicates and the code file format.
//! * [`sfree`] - pattern sets and exact counting of words avoiding them.
//! * [`constructions`] - the prefix-anchored code families and parameter selection.
//! * [`bounds`] - closed-form upper/lower bounds and exact small-length values.
//! * [`oracle`] - exact `C(n, q)` by maximum-clique search.
//! * [`sync_sim`] - marker embedding and detection in random symbol streams.

mod aho;
pub mod bounds;
pub mod constructions;
mod error;
pub mod oracle;
pub mod sfree;
pub mod sync_sim;
pub mod words;

pub use error::{Error, Result};
pub use words::{Code, Symbol, Verification, Word};

/// Largest supported alphabet size.
pub const MAX_ALPHABET: u32 = 1 << 16;
