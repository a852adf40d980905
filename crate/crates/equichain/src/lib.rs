//! Equivariant chain-complex toolkit: reductions and strong equivalences of
//! complexes of free modules over group rings, bar constructions with
//! perturbed differentials, operadic module transfers, and Borel-type
//! (co)homology of the quotient by the group action, computed exactly over
//! the integers via Smith normal form.

pub mod bar;
pub mod complex;
pub mod dga;
pub mod docs;
pub mod element;
pub mod error;
pub mod group;
pub mod hom;
pub mod reduction;
pub mod homology;
pub mod pipeline;
pub mod rinfty;
pub mod rmap;
pub mod selftest;
pub mod transfer;

/// Default seed for randomized identity checks; the `EQUICHAIN_SEED`
/// environment variable overrides it.
pub fn default_seed() -> u64 {
    std::env::var("EQUICHAIN_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(17)
}
