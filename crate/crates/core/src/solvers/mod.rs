//! Exact and heuristic solvers: maximum clique, tournament clique number and
//! dichromatic number.

pub mod chi;
pub mod clique;
pub mod omega;

use serde::{Deserialize, Serialize};

pub use chi::{chi_dir, DicolouringCertificate};
pub use clique::{clique_number, max_clique};
pub use omega::{omega_dir, omega_dir_bounds, omega_of, OmegaBounds, OmegaCertificate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Proven optimal.
    Exact,
    /// Search budget ran out; `value` is an upper bound, `lower` a lower bound.
    Exceeded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Maximum number of search nodes; `None` for no limit.
    pub budget: Option<u64>,
    /// Largest tournament accepted by the exact clique-number solver.
    pub omega_limit: usize,
    /// Largest tournament accepted by the exact dichromatic solver.
    pub chi_limit: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            budget: None,
            omega_limit: 14,
            chi_limit: 20,
        }
    }
}
