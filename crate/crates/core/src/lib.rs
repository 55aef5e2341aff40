//! Exact search and structural tools for the clique number of tournaments.
//!
//! The clique number of a tournament is the least clique number of any of its
//! backedge graphs. This crate provides exact solvers for it and for the
//! dichromatic number, the `A_n`, `D_n` and `U_n` families, induced
//! subtournament search, heavy-arc/mountain certificates, bag-chain and zone
//! audits, and an arbitrary-precision evaluation of the constant recurrences
//! behind the bound `ω⃗(T) < f(ω_A(T) + ω_D(T))`.

pub mod atlas;
pub mod bitset;
pub mod bounds;
pub mod canon;
pub mod chains;
pub mod cli;
pub mod constructions;
pub mod containment;
pub mod error;
pub mod graph;
pub mod mountains;
pub mod solvers;
pub mod suite;
pub mod tournament;
pub mod trn;

pub use bitset::VertexSet;
pub use error::{Error, Result};
pub use graph::Graph;
pub use tournament::{OrderedBackedgeGraph, Tournament};
