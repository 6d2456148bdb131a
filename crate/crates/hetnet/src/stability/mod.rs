//! Stability indices of type-A cycles.

pub mod engine;
pub mod extreal;
pub mod network;
pub mod oracles;
pub mod roles;

pub use engine::{
    cycle_indices, eas_check, h_eval, ratios, rho, thm41_indices, thm41_with_case, RatioData,
    StabilityIndex, TheoremCase, GENERIC_TOL,
};
pub use extreal::{ExtReal, IndexClass};
pub use network::{branch_losers, network_indices, CycleIndices, NetworkIndices};
pub use oracles::{
    lemma_ainfinity_check, oracle_a2a2, oracle_a3a3, oracle_a3a3a4, oracle_a3a4, LemmaConstraint,
    OracleCycle,
};
pub use roles::{cycle_eigen_data, role_axes, EigenData, RoleAxes, Spectra};

use crate::error::Result;
use crate::geometry::NetworkId;

/// The closed-form predictions for a type-A network.
pub fn oracle_for(id: NetworkId, spectra: &Spectra) -> Result<Vec<OracleCycle>> {
    match id {
        NetworkId::A2A2 => oracle_a2a2(spectra),
        NetworkId::A3A3 => oracle_a3a3(spectra),
        NetworkId::A3A4 => oracle_a3a4(spectra),
        NetworkId::A3A3A4 => oracle_a3a3a4(spectra),
        other => Err(crate::Error::UnsupportedNetwork(format!(
            "no closed-form indices for {other}"
        ))),
    }
}
