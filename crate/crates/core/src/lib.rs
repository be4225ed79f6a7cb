//! Cohomology of small Hopf superalgebras over finite fields.
//!
//! The crate builds the group algebras of the semidirect products
//! `(G_a^- × G_a^-) ⋊ (G_{a(r)} × (Z/p)^s)` and their relatives as presented
//! superalgebras, resolves the trivial module minimally, and computes the
//! bigraded Ext ring with cup products and inflation maps. Alongside it
//! provides the symmetric powers of the natural two-dimensional module as
//! explicit modules, invariant rings, and rank varieties of shifted
//! subgroups.

pub mod algebra;
pub mod extring;
pub mod gf;
pub mod invariants;
pub mod linalg;
pub mod module;
pub mod resolution;
pub mod sympow;

/// Version tag recorded in reports and cache keys.
pub const CODE_VERSION: &str = concat!("superext-", env!("CARGO_PKG_VERSION"));

#[cfg(feature = "parallel")]
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}
