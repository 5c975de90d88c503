//! Reachability homology of directed graphs.
//!
//! The crate builds the reachability chain complex of a digraph (tuples of
//! successively reachable vertices), computes its homology over ℤ, ℚ or 𝔽ₚ,
//! and ships checkers for homotopy invariance, the Künneth formula, excision
//! and Mayer–Vietoris along long cofibrations, and the length spectral
//! sequence whose first page is magnitude homology.

pub mod cofib;
pub mod demo;
pub mod digraph;
pub mod error;
pub mod homalg;
pub mod kunneth;
pub mod mpss;
pub mod preorder;
pub mod random;
pub mod rcomplex;

pub use digraph::{DiGraph, DiGraphMap, SimplicialComplex};
pub use error::{Error, Result};
pub use homalg::{ChainMap, CoeffRing, FreeChainComplex, GroupSummary, HomologySummary};
pub use preorder::{CondensationPoset, MonotoneMap, Preorder};
pub use rcomplex::{Method, ReachabilityComplex};
