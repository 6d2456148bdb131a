//! JSON document form of a network.

use serde::{Deserialize, Serialize};

use super::group::{GroupElement, SymmetryGroup};
use super::network::{classify_cycle, Connection, CycleSpec, CycleType, NetworkId, NetworkSpec, Node};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub generators: Vec<[i8; 4]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleDoc {
    pub label: String,
    #[serde(rename = "type")]
    pub type_label: CycleType,
    pub nodes: Vec<String>,
    /// Indices into the network's connection list. Two-node cycles can share
    /// their node sequence, so the node list alone does not pin the planes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connections: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkDoc {
    pub id: NetworkId,
    pub group: GroupDoc,
    pub nodes: Vec<Node>,
    pub connections: Vec<Connection>,
    pub cycles: Vec<CycleDoc>,
}

impl From<&NetworkSpec> for NetworkDoc {
    fn from(spec: &NetworkSpec) -> Self {
        let cycles = spec
            .cycles
            .iter()
            .map(|c| CycleDoc {
                label: c.label.clone(),
                type_label: c.type_label,
                nodes: c.nodes.iter().map(|n| n.label.clone()).collect(),
                connections: Some(
                    c.connections
                        .iter()
                        .map(|cc| {
                            spec.connections
                                .iter()
                                .position(|x| x == cc)
                                .unwrap_or(usize::MAX)
                        })
                        .collect(),
                ),
            })
            .collect();
        NetworkDoc {
            id: spec.id,
            group: GroupDoc {
                generators: spec.group.generators().iter().map(|g| g.signs()).collect(),
            },
            nodes: spec.nodes.clone(),
            connections: spec.connections.clone(),
            cycles,
        }
    }
}

impl NetworkDoc {
    /// Rebuild the network. The stored type labels must agree with a fresh
    /// classification.
    pub fn into_spec(self) -> Result<NetworkSpec> {
        let gens = self
            .group
            .generators
            .iter()
            .map(|s| GroupElement::from_signs(*s))
            .collect::<Result<Vec<_>>>()?;
        let group = SymmetryGroup::generate(&gens);
        let mut cycles = Vec::new();
        for doc in &self.cycles {
            let nodes = doc
                .nodes
                .iter()
                .map(|l| {
                    self.nodes
                        .iter()
                        .find(|n| &n.label == l)
                        .cloned()
                        .ok_or_else(|| Error::Parse(format!("cycle {} names unknown node {l}", doc.label)))
                })
                .collect::<Result<Vec<_>>>()?;
            let connections = match &doc.connections {
                Some(idx) => idx
                    .iter()
                    .map(|&i| {
                        self.connections.get(i).cloned().ok_or_else(|| {
                            Error::Parse(format!("cycle {}: connection index {i} out of range", doc.label))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?,
                None => {
                    let n = nodes.len();
                    (0..n)
                        .map(|k| {
                            let (a, b) = (&nodes[k].label, &nodes[(k + 1) % n].label);
                            let hits: Vec<&Connection> = self
                                .connections
                                .iter()
                                .filter(|c| &c.from == a && &c.to == b)
                                .collect();
                            match hits.as_slice() {
                                [c] => Ok((*c).clone()),
                                _ => Err(Error::Parse(format!(
                                    "cycle {}: cannot resolve connection {a}->{b}",
                                    doc.label
                                ))),
                            }
                        })
                        .collect::<Result<Vec<_>>>()?
                }
            };
            let mut cyc = CycleSpec {
                label: doc.label.clone(),
                nodes,
                connections,
                type_label: doc.type_label,
            };
            let fresh = classify_cycle(&cyc, &group)?;
            if fresh != doc.type_label {
                return Err(Error::Parse(format!(
                    "cycle {} declared {} but classifies as {fresh}",
                    doc.label, doc.type_label
                )));
            }
            cyc.type_label = fresh;
            cycles.push(cyc);
        }
        Ok(NetworkSpec {
            id: self.id,
            nodes: self.nodes,
            connections: self.connections,
            cycles,
            group,
        })
    }
}

pub fn to_json(spec: &NetworkSpec) -> String {
    serde_json::to_string_pretty(&NetworkDoc::from(spec)).expect("network documents serialize")
}

pub fn from_json(text: &str) -> Result<NetworkSpec> {
    let doc: NetworkDoc = serde_json::from_str(text)?;
    doc.into_spec()
}
