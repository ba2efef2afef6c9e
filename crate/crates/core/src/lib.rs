//! Exact combinatorial laboratory for Dirac-type perfect matching problems in
//! k-uniform hypergraphs.
//!
//! The crate is organised bottom-up:
//!
//! - [`hypercore`]: the k-graph carrier, degrees, links, Berge girth, k-density
//!   and the contraction `G(F, P)`.
//! - [`matchpower`]: perfect/maximum matching search, the Aharoni–Haxell
//!   criterion, systems of disjoint representatives and the block-partition
//!   almost-perfect matching procedure.
//! - [`thresholds`]: exact `m_d(k, n)` by exhaustive enumeration, the
//!   conjectured density and the space/parity barrier constructions.
//! - [`absorbing`]: absorbers, r-absorbers, contractible/contracted absorbers,
//!   K-sparsity and pattern-based sparse absorber construction.
//! - [`templates`]: Montgomery-type bipartite templates, their k-partite lift,
//!   independent-set-free overlays, resilient templates and absorbing structures.
//! - [`pipeline`]: the end-to-end absorbing-method perfect matching constructor.
//! - [`lab`]: random models, adversarial degradation, statistical experiments
//!   and the on-disk formats used by the command-line front end.
//!
//! With the default `parallel` feature the data-parallel loops (enumeration
//! sweeps, removal sweeps, trial batches) run on rayon; without it the same
//! code paths run sequentially and produce identical results.

pub mod absorbing;
pub mod combin;
mod error;
pub mod hypercore;
pub mod lab;
pub mod matchpower;
pub mod par;
pub mod pipeline;
pub mod seed;
pub mod templates;
pub mod thresholds;

pub use error::{Error, NotFoundReason, Result};
pub use hypercore::{Hypergraph, Vertex, VertexSet};
pub use matchpower::{MatchResult, MatchStatus, Matching};
