//! Algorithmic core for layered random host graphs and monochromatic
//! embeddings of bounded-degree patterns.
//!
//! The crate is `no_std` with `alloc`. Everything that touches files, the
//! command line or wall-clock time lives in the `sizeramsey` companion crate.
//!
//! Module map:
//! - [`graph`]: graphs, colourings, induced cycles, powers, blow-ups,
//!   monochromatic clique/biclique search, extremal bounds, rooted trees.
//! - [`design`]: Steiner triple systems, affine planes, validation.
//! - [`random`]: probability chains, block models, conditional subsampling,
//!   layer construction and coupling.
//! - [`matchings`]: partition of present blocks into near-perfect matchings.
//! - [`host`]: assembly and audit of the layered host.
//! - [`regularity`]: sparse regularity checks, cleanup and red-set finders.
//! - [`decomposition`]: induced-cycle decomposition, tree decompositions and
//!   tree blow-up containers.
//! - [`embedding`]: expansion checks, tree and cycle embedding, and the
//!   end-to-end orchestration.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bitset;
pub mod decomposition;
pub mod design;
pub mod embedding;
pub mod error;
pub mod graph;
pub mod host;
pub mod matchings;
pub mod params;
pub mod random;
pub mod regularity;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{Colour, Graph, TwoColouring};
