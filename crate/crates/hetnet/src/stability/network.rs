//! Indices for every cycle of a type-A network, with the branch-node check.

use serde::Serialize;

use super::engine::{eas_check, ratios, thm41_with_case, RatioData, StabilityIndex, TheoremCase, GENERIC_TOL};
use super::extreal::ExtReal;
use super::roles::Spectra;
use crate::error::{Error, Result};
use crate::geometry::{NetworkId, NetworkSpec};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleIndices {
    pub cycle: String,
    #[serde(rename = "type")]
    pub type_label: String,
    pub ratios: RatioData,
    pub rho: f64,
    pub case: TheoremCase,
    /// Aligned with the cycle's connections.
    pub indices: Vec<StabilityIndex>,
    pub eas: bool,
}

impl CycleIndices {
    pub fn all_minus_infinity(&self) -> bool {
        self.indices.iter().all(|i| i.value.is_neg_inf())
    }

    pub fn index(&self, from: &str, to: &str) -> Option<&StabilityIndex> {
        self.indices.iter().find(|i| i.from == from && i.to == to)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NetworkIndices {
    pub network: NetworkId,
    pub cycles: Vec<CycleIndices>,
    /// Cycles that must be all −∞ because they leave a branch node along the
    /// weaker expanding direction.
    pub forced_unstable: Vec<String>,
    /// Empty unless an engine result contradicts the branch-node rule.
    pub violations: Vec<String>,
}

impl NetworkIndices {
    pub fn cycle(&self, label: &str) -> Option<&CycleIndices> {
        self.cycles.iter().find(|c| c.cycle == label)
    }

    pub fn eas_cycles(&self) -> Vec<&str> {
        self.cycles
            .iter()
            .filter(|c| c.eas)
            .map(|c| c.cycle.as_str())
            .collect()
    }
}

/// Cycles that leave some branch node along its smaller expanding
/// eigenvalue.
pub fn branch_losers(network: &NetworkSpec, spectra: &Spectra) -> Result<Vec<String>> {
    let mut losers = Vec::new();
    for node in network.branch_nodes() {
        let ev = spectra
            .get(&node.label)
            .ok_or_else(|| Error::IncompleteEigenData(format!("no eigenvalues for node {}", node.label)))?;
        let outgoing: Vec<_> = network
            .connections
            .iter()
            .filter(|c| c.from == node.label)
            .collect();
        let rates: Vec<f64> = outgoing
            .iter()
            .map(|c| ev[c.plane.other(node.axis).expect("plane contains node axis") - 1])
            .collect();
        let best = rates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for (k, c) in outgoing.iter().enumerate() {
            for (l, r) in rates.iter().enumerate() {
                if l != k && (rates[k] - r).abs() <= GENERIC_TOL {
                    return Err(Error::NonGeneric(format!(
                        "expanding eigenvalues at {} tie ({} vs {r})",
                        node.label, rates[k]
                    )));
                }
            }
            if rates[k] < best {
                for cyc in network.cycles.iter().filter(|cy| cy.contains_connection(c)) {
                    if !losers.contains(&cyc.label) {
                        losers.push(cyc.label.clone());
                    }
                }
            }
        }
    }
    Ok(losers)
}

pub fn network_indices(network: &NetworkSpec, spectra: &Spectra) -> Result<NetworkIndices> {
    if !network.is_type_a() {
        return Err(Error::UnsupportedNetwork(format!(
            "{} has non-type-A cycles; indices are only computed for type A",
            network.id
        )));
    }
    let mut cycles = Vec::new();
    for cycle in &network.cycles {
        let r = ratios(spectra, cycle)?;
        let (into, case) = thm41_with_case(&r)?;
        let m = cycle.len();
        let indices: Vec<StabilityIndex> = cycle
            .connections
            .iter()
            .enumerate()
            .map(|(k, c)| StabilityIndex::new(&c.from, &c.to, into[(k + 1) % m]))
            .collect();
        let values: Vec<ExtReal> = indices.iter().map(|i| i.value).collect();
        cycles.push(CycleIndices {
            cycle: cycle.label.clone(),
            type_label: cycle.type_label.to_string(),
            rho: r.rho(),
            ratios: r,
            case,
            eas: eas_check(&values),
            indices,
        });
    }
    let forced = branch_losers(network, spectra)?;
    let mut violations = Vec::new();
    for label in &forced {
        let c = cycles.iter().find(|c| &c.cycle == label).expect("loser is a cycle");
        if !c.all_minus_infinity() {
            violations.push(format!(
                "{label} leaves a branch node along the weaker expanding direction but is not all -inf"
            ));
        }
    }
    for c in &cycles {
        let neg = c.indices.iter().filter(|i| i.value.is_neg_inf()).count();
        if neg != 0 && neg != c.indices.len() {
            violations.push(format!("{}: some but not all indices are -inf", c.cycle));
        }
        if let Some(i) = c.indices.iter().find(|i| i.value.finite().is_some_and(|v| v < 0.0)) {
            violations.push(format!("{}: negative finite index {}", c.cycle, i.value));
        }
    }
    Ok(NetworkIndices {
        network: network.id,
        cycles,
        forced_unstable: forced,
        violations,
    })
}
