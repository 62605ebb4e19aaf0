//! Gorenstein classification of graphic matroid polytopes.
//!
//! For a graph `G` this crate decides whether the base polytope `B(M(G))`
//! and the independence polytope `P(M(G))` of its graphic matroid are
//! Gorenstein, and at which index `δ`. Positive answers come with replayable
//! construction certificates, negative ones with an explicit violated
//! equality. Every verdict can be cross-checked against [`oracle`], which
//! builds the polytopes and tests the lattice definition directly.

pub mod base;
pub mod construct;
mod error;
pub mod flats;
pub mod graph;
pub mod indep;
pub mod oracle;
pub mod report;
pub mod sweep;

pub use error::{Error, Result};
pub use graph::{EdgeId, Multigraph};
