//! The eight simple heteroclinic networks in R^4.

use super::group::{GroupElement, SymmetryGroup};
use super::network::{classify_cycle, Connection, CycleSpec, NetworkId, NetworkSpec, Node, Plane};
use crate::error::{Error, Result};

fn kappa(i: usize, j: usize) -> GroupElement {
    GroupElement::kappa(i, j).expect("static indices")
}

fn refl(k: usize) -> GroupElement {
    GroupElement::reflection(k).expect("static index")
}

fn plane(i: usize, j: usize) -> Plane {
    Plane::new(i, j).expect("static indices")
}

fn axis_nodes() -> Vec<Node> {
    (1..=4).map(|k| Node::new(&format!("xi{k}"), k, 1)).collect()
}

/// Build a network from nodes, a group and cycles given as node sequences
/// with the plane of each leaving connection.
pub(crate) fn assemble(
    id: NetworkId,
    nodes: Vec<Node>,
    group: SymmetryGroup,
    cycles: &[(&str, &[&str], &[Plane])],
) -> Result<NetworkSpec> {
    let mut connections: Vec<Connection> = Vec::new();
    let mut specs = Vec::new();
    for (label, seq, planes) in cycles {
        if seq.len() != planes.len() {
            return Err(Error::InvalidArgument(format!(
                "cycle {label}: {} nodes but {} planes",
                seq.len(),
                planes.len()
            )));
        }
        let mut cyc_nodes = Vec::new();
        let mut cyc_conns = Vec::new();
        for (k, name) in seq.iter().enumerate() {
            let node = nodes
                .iter()
                .find(|n| n.label == *name)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown node {name}")))?;
            cyc_nodes.push(node.clone());
            let next = seq[(k + 1) % seq.len()];
            let c = Connection::new(name, next, planes[k]);
            if !connections.contains(&c) {
                connections.push(c.clone());
            }
            cyc_conns.push(c);
        }
        let mut spec = CycleSpec {
            label: label.to_string(),
            nodes: cyc_nodes,
            connections: cyc_conns,
            type_label: super::network::CycleType {
                kind: super::network::CycleKind::A,
                m: seq.len(),
                minus: false,
            },
        };
        spec.type_label = classify_cycle(&spec, &group)?;
        specs.push(spec);
    }
    Ok(NetworkSpec {
        id,
        nodes,
        connections,
        cycles: specs,
        group,
    })
}

/// Build one catalogue entry.
pub fn network(id: NetworkId) -> NetworkSpec {
    let a2_group = || SymmetryGroup::generate(&[kappa(1, 2), kappa(1, 3)]);
    let a34_group = || SymmetryGroup::generate(&[kappa(1, 2), kappa(1, 3), kappa(3, 4)]);
    let b2_group = || SymmetryGroup::generate(&[refl(2), refl(3), refl(4)]);
    let z2_4 = || SymmetryGroup::generate(&[refl(1), refl(2), refl(3), refl(4)]);
    let two_node = || vec![Node::new("xi1", 1, 1), Node::new("xi2", 1, -1)];

    let (p12, p13, p14, p23, p24, p34) = (
        plane(1, 2),
        plane(1, 3),
        plane(1, 4),
        plane(2, 3),
        plane(2, 4),
        plane(3, 4),
    );
    let x3: (&str, &[&str], &[Plane]) = ("X3", &["xi1", "xi2"], &[p12, p13]);
    let x4: (&str, &[&str], &[Plane]) = ("X4", &["xi1", "xi2"], &[p12, p14]);
    let c3: (&str, &[&str], &[Plane]) = ("xi3-cycle", &["xi1", "xi2", "xi3"], &[p12, p23, p13]);
    let c4: (&str, &[&str], &[Plane]) = ("xi4-cycle", &["xi1", "xi2", "xi4"], &[p12, p24, p14]);
    let c1234: (&str, &[&str], &[Plane]) =
        ("4-cycle", &["xi1", "xi2", "xi3", "xi4"], &[p12, p23, p34, p14]);

    let built = match id {
        NetworkId::A2A2 => assemble(id, two_node(), a2_group(), &[x3, x4]),
        NetworkId::A3A3 => assemble(id, axis_nodes(), a34_group(), &[c3, c4]),
        NetworkId::A3A4 => assemble(id, axis_nodes(), a34_group(), &[c3, c1234]),
        NetworkId::A3A3A4 => assemble(id, axis_nodes(), a34_group(), &[c3, c4, c1234]),
        NetworkId::B2B2 => assemble(id, two_node(), b2_group(), &[x3, x4]),
        NetworkId::B3B3 => assemble(id, axis_nodes(), z2_4(), &[c3, c4]),
        NetworkId::B3C4 => assemble(id, axis_nodes(), z2_4(), &[c3, c1234]),
        NetworkId::B3B3C4 => assemble(id, axis_nodes(), z2_4(), &[c3, c4, c1234]),
    };
    built.expect("catalogue entries are consistent by construction")
}

/// All eight networks, type A first.
pub fn catalogue() -> Vec<NetworkSpec> {
    NetworkId::ALL.iter().map(|&id| network(id)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::network::CycleKind;

    fn types(id: NetworkId) -> Vec<String> {
        network(id)
            .cycles
            .iter()
            .map(|c| c.type_label.to_string())
            .collect()
    }

    #[test]
    fn eight_entries() {
        let cat = catalogue();
        assert_eq!(cat.len(), 8);
        let ids: Vec<_> = cat.iter().map(|n| n.id).collect();
        assert_eq!(ids, NetworkId::ALL.to_vec());
    }

    #[test]
    fn cycle_types_match_names() {
        assert_eq!(types(NetworkId::A2A2), ["A2+", "A2+"]);
        assert_eq!(types(NetworkId::A3A3), ["A3-", "A3-"]);
        assert_eq!(types(NetworkId::A3A4), ["A3-", "A4-"]);
        assert_eq!(types(NetworkId::A3A3A4), ["A3-", "A3-", "A4-"]);
        assert_eq!(types(NetworkId::B2B2), ["B2+", "B2+"]);
        assert_eq!(types(NetworkId::B3B3), ["B3-", "B3-"]);
        assert_eq!(types(NetworkId::B3C4), ["B3-", "C4-"]);
        assert_eq!(types(NetworkId::B3B3C4), ["B3-", "B3-", "C4-"]);
    }

    #[test]
    fn counts() {
        let expect = [
            (NetworkId::A2A2, 2, 3),
            (NetworkId::A3A3, 4, 5),
            (NetworkId::A3A4, 4, 5),
            (NetworkId::A3A3A4, 4, 6),
            (NetworkId::B2B2, 2, 3),
            (NetworkId::B3B3, 4, 5),
            (NetworkId::B3C4, 4, 5),
            (NetworkId::B3B3C4, 4, 6),
        ];
        for (id, nodes, conns) in expect {
            let n = network(id);
            assert_eq!(n.nodes.len(), nodes, "{id}");
            assert_eq!(n.connections.len(), conns, "{id}");
        }
    }

    #[test]
    fn shared_connection_in_three_cycle_network() {
        let n = network(NetworkId::A3A3A4);
        let shared = Connection::new("xi1", "xi2", plane(1, 2));
        assert!(n.cycles.iter().all(|c| c.contains_connection(&shared)));
        for node in &n.nodes {
            assert_eq!(n.degree(&node.label), 3);
        }
    }

    #[test]
    fn a2_nodes_on_opposite_half_axes() {
        let n = network(NetworkId::A2A2);
        assert_eq!(n.nodes[0].axis, 1);
        assert_eq!(n.nodes[1].axis, 1);
        assert_eq!(n.nodes[0].sign, -n.nodes[1].sign);
        assert!(!n.group.contains_minus_identity());
    }

    #[test]
    fn reflections_separate_a_from_bc() {
        for n in catalogue() {
            let a = n.cycles.iter().all(|c| c.type_label.kind == CycleKind::A);
            assert_eq!(a, n.id.is_type_a());
            assert_eq!(n.group.has_reflection(), !a, "{}", n.id);
        }
    }

    #[test]
    fn branch_nodes() {
        let labels = |id| {
            network(id)
                .branch_nodes()
                .iter()
                .map(|n| n.label.clone())
                .collect::<Vec<_>>()
        };
        assert_eq!(labels(NetworkId::A2A2), ["xi2"]);
        assert_eq!(labels(NetworkId::A3A3), ["xi2"]);
        assert_eq!(labels(NetworkId::A3A4), ["xi3"]);
        assert_eq!(labels(NetworkId::A3A3A4), ["xi2", "xi3"]);
    }
}
