//! Symmetry groups, fixed-point subspaces and the network catalogue.

pub mod catalogue;
pub mod export;
pub mod group;
pub mod network;
pub mod validate;

pub use catalogue::{catalogue, network};
pub use export::{from_json, to_json, NetworkDoc};
pub use group::{GroupElement, Subspace, SubspaceKind, SymmetryGroup, DIM};
pub use network::{
    classify_cycle, Connection, CycleKind, CycleSpec, CycleType, NetworkId, NetworkSpec, Node, Plane,
};
pub use validate::{validate_simple_network, Check, ValidationReport};

/// κ_ij as a free function, 1-based indices.
pub fn make_kappa(i: usize, j: usize) -> crate::Result<GroupElement> {
    GroupElement::kappa(i, j)
}

pub fn generate_group(generators: &[GroupElement]) -> SymmetryGroup {
    SymmetryGroup::generate(generators)
}

pub fn fixed_point_subspace(
    group: &SymmetryGroup,
    subgroup_generators: &[GroupElement],
) -> crate::Result<Subspace> {
    group.fixed_point_subspace(subgroup_generators)
}
