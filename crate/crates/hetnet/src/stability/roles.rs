//! Radial, contracting, expanding and transverse eigenvalues of a node
//! relative to one cycle.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CycleSpec, DIM};

/// Diagonal linearization at each node: eigenvalue by coordinate direction
/// (index 0 is x1), keyed by node label.
pub type Spectra = BTreeMap<String, [f64; DIM]>;

/// Coordinate directions (1-based) of the four roles at a node of a cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleAxes {
    pub radial: usize,
    pub contracting: usize,
    pub expanding: usize,
    pub transverse: usize,
}

/// Node `k` of the cycle: radial along its axis, contracting toward the
/// incoming plane, expanding into the outgoing plane, transverse otherwise.
pub fn role_axes(cycle: &CycleSpec, k: usize) -> Result<RoleAxes> {
    let node = cycle
        .nodes
        .get(k)
        .ok_or_else(|| Error::InvalidArgument(format!("{} has no node {k}", cycle.label)))?;
    let axis = node.axis;
    let incoming = cycle.incoming(k).plane;
    let outgoing = cycle.outgoing(k).plane;
    let contracting = incoming.other(axis).ok_or_else(|| {
        Error::InvalidArgument(format!("{incoming} does not contain the axis of {}", node.label))
    })?;
    let expanding = outgoing.other(axis).ok_or_else(|| {
        Error::InvalidArgument(format!("{outgoing} does not contain the axis of {}", node.label))
    })?;
    if contracting == expanding {
        return Err(Error::InvalidArgument(format!(
            "{}: incoming and outgoing planes coincide at {}",
            cycle.label, node.label
        )));
    }
    let transverse = (1..=DIM)
        .find(|&d| d != axis && d != contracting && d != expanding)
        .expect("four directions");
    Ok(RoleAxes {
        radial: axis,
        contracting,
        expanding,
        transverse,
    })
}

/// Eigenvalues of one node with their roles for one cycle. Eigenvalues are
/// −r, −c, e and t; `r`, `c`, `e` are stored as positive magnitudes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenData {
    pub node: String,
    pub eigenvalues: [f64; DIM],
    pub axes: RoleAxes,
    pub r: f64,
    pub c: f64,
    pub e: f64,
    pub t: f64,
}

impl EigenData {
    pub fn from_eigenvalues(node: &str, eigenvalues: [f64; DIM], axes: RoleAxes) -> Result<EigenData> {
        if eigenvalues.iter().any(|v| !v.is_finite()) {
            return Err(Error::IncompleteEigenData(format!(
                "{node}: non-finite eigenvalue in {eigenvalues:?}"
            )));
        }
        let at = |d: usize| eigenvalues[d - 1];
        let (r, c, e, t) = (
            -at(axes.radial),
            -at(axes.contracting),
            at(axes.expanding),
            at(axes.transverse),
        );
        for (name, v, d) in [
            ("radial", r, axes.radial),
            ("contracting", c, axes.contracting),
            ("expanding", e, axes.expanding),
        ] {
            if v <= 0.0 {
                return Err(Error::InvalidCycleRealization(format!(
                    "{node}: {name} eigenvalue in direction x{d} has the wrong sign ({})",
                    at(d)
                )));
            }
        }
        Ok(EigenData {
            node: node.to_string(),
            eigenvalues,
            axes,
            r,
            c,
            e,
            t,
        })
    }
}

/// Role-assigned eigen data for every node of a cycle, in cycle order.
pub fn cycle_eigen_data(spectra: &Spectra, cycle: &CycleSpec) -> Result<Vec<EigenData>> {
    (0..cycle.len())
        .map(|k| {
            let label = &cycle.nodes[k].label;
            let ev = spectra.get(label).ok_or_else(|| {
                Error::IncompleteEigenData(format!("no eigenvalues for node {label}"))
            })?;
            EigenData::from_eigenvalues(label, *ev, role_axes(cycle, k)?)
        })
        .collect()
}
