//! Re-export of the shared corpus and invariant helpers.

#[allow(unused_imports)]
pub use diffreg::testkit::*;
