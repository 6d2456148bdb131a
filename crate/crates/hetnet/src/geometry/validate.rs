//! Report-style structural checks for simple networks in R^4.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::network::NetworkSpec;

pub const MAX_NODES: usize = 4;
pub const MAX_CONNECTIONS: usize = 6;
pub const MAX_CONNECTIONS_PER_NODE: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub network: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.check(name).is_some_and(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn check(name: &'static str, problems: Vec<String>, ok_detail: String) -> Check {
    if problems.is_empty() {
        Check {
            name,
            passed: true,
            detail: ok_detail,
        }
    } else {
        Check {
            name,
            passed: false,
            detail: problems.join("; "),
        }
    }
}

pub fn validate_simple_network(spec: &NetworkSpec) -> ValidationReport {
    let mut checks = Vec::new();

    let n = spec.nodes.len();
    checks.push(check(
        "max_nodes",
        if n > MAX_NODES {
            vec![format!("{n} nodes exceed the bound {MAX_NODES}")]
        } else {
            vec![]
        },
        format!("{n} nodes"),
    ));

    let nc = spec.connections.len();
    checks.push(check(
        "max_connections",
        if nc > MAX_CONNECTIONS {
            vec![format!("{nc} connections exceed the bound {MAX_CONNECTIONS}")]
        } else {
            vec![]
        },
        format!("{nc} connections"),
    ));

    let per_node: Vec<String> = spec
        .nodes
        .iter()
        .filter(|node| spec.degree(&node.label) > MAX_CONNECTIONS_PER_NODE)
        .map(|node| format!("{} has {} connections", node.label, spec.degree(&node.label)))
        .collect();
    checks.push(check(
        "max_connections_per_node",
        per_node,
        format!("at most {MAX_CONNECTIONS_PER_NODE} per node"),
    ));

    let mut occupancy: BTreeMap<(usize, i8), Vec<&str>> = BTreeMap::new();
    for node in &spec.nodes {
        occupancy
            .entry((node.axis, node.sign))
            .or_default()
            .push(&node.label);
    }
    let crowded: Vec<String> = occupancy
        .iter()
        .filter(|(_, labels)| labels.len() > 1)
        .map(|((axis, sign), labels)| {
            format!(
                "half-axis {}x{axis} holds {}",
                if *sign > 0 { '+' } else { '-' },
                labels.join(", ")
            )
        })
        .collect();
    checks.push(check(
        "one_node_per_half_axis",
        crowded,
        "every half-axis holds at most one node".into(),
    ));

    let mut malformed = Vec::new();
    for c in &spec.cycles {
        if let Err(e) = c.check_well_formed() {
            malformed.push(e);
        }
        for conn in &c.connections {
            if !spec.connections.contains(conn) {
                malformed.push(format!("{}: {conn} is not a network connection", c.label));
            }
        }
        for node in &c.nodes {
            if spec.node(&node.label) != Some(node) {
                malformed.push(format!("{}: node {} not in network", c.label, node.label));
            }
        }
    }
    checks.push(check(
        "cycles_well_formed",
        malformed,
        format!("{} cycles closed and planar", spec.cycles.len()),
    ));

    let two_node: Vec<String> = spec
        .cycles
        .iter()
        .filter(|c| c.nodes.len() == 2 && c.nodes[0].axis != c.nodes[1].axis)
        .map(|c| format!("{}: two-node cycle with nodes on different axes", c.label))
        .collect();
    checks.push(check(
        "two_node_cycle_single_axis",
        two_node,
        "two-node cycles lie on one axis".into(),
    ));

    let mut no_node = Vec::new();
    let mut no_conn = Vec::new();
    for (i, a) in spec.cycles.iter().enumerate() {
        for b in &spec.cycles[i + 1..] {
            let na: BTreeSet<&str> = a.nodes.iter().map(|n| n.label.as_str()).collect();
            if !b.nodes.iter().any(|n| na.contains(n.label.as_str())) {
                no_node.push(format!("{} and {} share no node", a.label, b.label));
            }
            if !a.connections.iter().any(|c| b.contains_connection(c)) {
                no_conn.push(format!("{} and {} share no connection", a.label, b.label));
            }
        }
    }
    checks.push(check(
        "cycle_pairs_share_node",
        no_node,
        "every pair of cycles shares a node".into(),
    ));
    checks.push(check(
        "cycle_pairs_share_connection",
        no_conn,
        "every pair of cycles shares a connection".into(),
    ));

    ValidationReport {
        network: spec.id.to_string(),
        checks,
    }
}
