//! Nodes, connections, cycles and networks, plus cycle classification.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::group::{SymmetryGroup, Subspace, DIM};
use crate::error::{Error, Result};

/// Identifier of one of the eight networks in the catalogue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NetworkId {
    A2A2,
    A3A3,
    A3A4,
    A3A3A4,
    B2B2,
    B3B3,
    B3C4,
    B3B3C4,
}

impl NetworkId {
    pub const ALL: [NetworkId; 8] = [
        NetworkId::A2A2,
        NetworkId::A3A3,
        NetworkId::A3A4,
        NetworkId::A3A3A4,
        NetworkId::B2B2,
        NetworkId::B3B3,
        NetworkId::B3C4,
        NetworkId::B3B3C4,
    ];

    pub const TYPE_A: [NetworkId; 4] = [
        NetworkId::A2A2,
        NetworkId::A3A3,
        NetworkId::A3A4,
        NetworkId::A3A3A4,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            NetworkId::A2A2 => "A2A2",
            NetworkId::A3A3 => "A3A3",
            NetworkId::A3A4 => "A3A4",
            NetworkId::A3A3A4 => "A3A3A4",
            NetworkId::B2B2 => "B2B2",
            NetworkId::B3B3 => "B3B3",
            NetworkId::B3C4 => "B3C4",
            NetworkId::B3B3C4 => "B3B3C4",
        }
    }

    /// Display name with superscripts, e.g. `(A3-,A3-,A4-)`.
    pub fn long_name(&self) -> &'static str {
        match self {
            NetworkId::A2A2 => "(A2+,A2+)",
            NetworkId::A3A3 => "(A3-,A3-)",
            NetworkId::A3A4 => "(A3-,A4-)",
            NetworkId::A3A3A4 => "(A3-,A3-,A4-)",
            NetworkId::B2B2 => "(B2+,B2+)",
            NetworkId::B3B3 => "(B3-,B3-)",
            NetworkId::B3C4 => "(B3-,C4-)",
            NetworkId::B3B3C4 => "(B3-,B3-,C4-)",
        }
    }

    pub fn is_type_a(&self) -> bool {
        Self::TYPE_A.contains(self)
    }
}

impl fmt::Display for NetworkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NetworkId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        NetworkId::ALL
            .into_iter()
            .find(|id| {
                id.as_str().eq_ignore_ascii_case(t)
                    || id.long_name() == t
                    || id.long_name().replace(['+', '-'], "").eq_ignore_ascii_case(t)
            })
            .ok_or_else(|| Error::InvalidArgument(format!("unknown network id '{s}'")))
    }
}

impl Serialize for NetworkId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for NetworkId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An equilibrium on a coordinate half-axis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Node {
    pub label: String,
    /// Coordinate axis, 1-based.
    pub axis: usize,
    /// +1 or -1: which half of the axis.
    pub sign: i8,
}

impl Node {
    pub fn new(label: &str, axis: usize, sign: i8) -> Node {
        Node {
            label: label.to_string(),
            axis,
            sign,
        }
    }
}

/// A coordinate plane P_ij, stored with i < j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Plane(usize, usize);

impl Plane {
    pub fn new(i: usize, j: usize) -> Result<Plane> {
        if i == j || !(1..=DIM).contains(&i) || !(1..=DIM).contains(&j) {
            return Err(Error::InvalidArgument(format!("P{i}{j} is not a coordinate plane")));
        }
        Ok(Plane(i.min(j), i.max(j)))
    }

    pub fn coords(&self) -> (usize, usize) {
        (self.0, self.1)
    }

    pub fn contains_axis(&self, k: usize) -> bool {
        self.0 == k || self.1 == k
    }

    /// The coordinate of the plane other than `k`, if `k` lies in it.
    pub fn other(&self, k: usize) -> Option<usize> {
        if self.0 == k {
            Some(self.1)
        } else if self.1 == k {
            Some(self.0)
        } else {
            None
        }
    }

    pub fn subspace(&self) -> Subspace {
        Subspace::plane(self.0, self.1).expect("plane indices validated on construction")
    }
}

impl fmt::Display for Plane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}{}", self.0, self.1)
    }
}

impl FromStr for Plane {
    type Err = Error;
    fn from_str(s: &str) -> Result<Plane> {
        let digits: Vec<usize> = s
            .trim()
            .trim_start_matches(['P', 'p'])
            .chars()
            .filter_map(|c| c.to_digit(10).map(|d| d as usize))
            .collect();
        match digits.as_slice() {
            [i, j] => Plane::new(*i, *j),
            _ => Err(Error::InvalidArgument(format!("cannot parse plane '{s}'"))),
        }
    }
}

impl Serialize for Plane {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Plane {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A heteroclinic connection [from → to] lying in a coordinate plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Connection {
    pub from: String,
    pub to: String,
    pub plane: Plane,
}

impl Connection {
    pub fn new(from: &str, to: &str, plane: Plane) -> Connection {
        Connection {
            from: from.to_string(),
            to: to.to_string(),
            plane,
        }
    }
}

impl fmt::Display for Connection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}->{}]@{}", self.from, self.to, self.plane)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CycleKind {
    A,
    B,
    C,
}

/// Type label such as A3- or B2+.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CycleType {
    pub kind: CycleKind,
    pub m: usize,
    pub minus: bool,
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            CycleKind::A => 'A',
            CycleKind::B => 'B',
            CycleKind::C => 'C',
        };
        write!(f, "{k}{}{}", self.m, if self.minus { '-' } else { '+' })
    }
}

impl FromStr for CycleType {
    type Err = Error;
    fn from_str(s: &str) -> Result<CycleType> {
        let t = s.trim();
        let bad = || Error::InvalidArgument(format!("cannot parse cycle type '{s}'"));
        let mut chars = t.chars();
        let kind = match chars.next().ok_or_else(bad)? {
            'A' => CycleKind::A,
            'B' => CycleKind::B,
            'C' => CycleKind::C,
            _ => return Err(bad()),
        };
        let rest: String = chars.collect();
        let minus = match rest.chars().last() {
            Some('-') | Some('−') => true,
            Some('+') => false,
            _ => return Err(bad()),
        };
        let digits: String = rest.chars().filter(|c| c.is_ascii_digit()).collect();
        let m = digits.parse().map_err(|_| bad())?;
        Ok(CycleType { kind, m, minus })
    }
}

impl Serialize for CycleType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CycleType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One heteroclinic cycle: nodes in visiting order and the connection
/// leaving each node.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleSpec {
    pub label: String,
    pub nodes: Vec<Node>,
    /// `connections[k]` leaves `nodes[k]` and enters `nodes[(k+1) % len]`.
    pub connections: Vec<Connection>,
    pub type_label: CycleType,
}

impl CycleSpec {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.label == label)
    }

    pub fn contains_connection(&self, c: &Connection) -> bool {
        self.connections.contains(c)
    }

    /// Connection entering `nodes[k]`.
    pub fn incoming(&self, k: usize) -> &Connection {
        let n = self.connections.len();
        &self.connections[(k + n - 1) % n]
    }

    /// Connection leaving `nodes[k]`.
    pub fn outgoing(&self, k: usize) -> &Connection {
        &self.connections[k]
    }

    /// Structural well-formedness; returns the first problem found.
    pub fn check_well_formed(&self) -> std::result::Result<(), String> {
        let n = self.nodes.len();
        if n < 2 {
            return Err(format!("{}: a cycle needs at least two nodes", self.label));
        }
        if self.connections.len() != n {
            return Err(format!(
                "{}: {} nodes but {} connections",
                self.label,
                n,
                self.connections.len()
            ));
        }
        for k in 0..n {
            let c = &self.connections[k];
            let src = &self.nodes[k];
            let dst = &self.nodes[(k + 1) % n];
            if c.from != src.label || c.to != dst.label {
                return Err(format!(
                    "{}: connection {c} does not join {} to {}",
                    self.label, src.label, dst.label
                ));
            }
            if !c.plane.contains_axis(src.axis) || !c.plane.contains_axis(dst.axis) {
                return Err(format!(
                    "{}: plane of {c} does not contain both endpoint axes",
                    self.label
                ));
            }
        }
        Ok(())
    }
}

/// Classify a cycle under a group: A/B/C, node-orbit count, and the sign
/// superscript.
pub fn classify_cycle(cycle: &CycleSpec, group: &SymmetryGroup) -> Result<CycleType> {
    cycle
        .check_well_formed()
        .map_err(Error::InvalidArgument)?;
    let mut all_z2 = true;
    for c in &cycle.connections {
        let space = c.plane.subspace();
        if !group.is_fixed_point_space(space) {
            return Err(Error::InvalidArgument(format!(
                "{} is not a fixed-point subspace of the group",
                c.plane
            )));
        }
        if group.isotropy(space).len() != 2 {
            all_z2 = false;
        }
    }
    let kind = if all_z2 {
        CycleKind::A
    } else {
        let mut span = BTreeSet::new();
        for c in &cycle.connections {
            let (i, j) = c.plane.coords();
            span.insert(i);
            span.insert(j);
        }
        let in_q = (1..=DIM).any(|missing| {
            if span.contains(&missing) {
                return false;
            }
            let coords: Vec<usize> = (1..=DIM).filter(|&k| k != missing).collect();
            let q = Subspace::from_coords(&coords).expect("valid coordinates");
            group.is_fixed_point_space(q)
        });
        if in_q {
            CycleKind::B
        } else {
            CycleKind::C
        }
    };
    let orbits: BTreeSet<BTreeSet<(usize, i8)>> = cycle
        .nodes
        .iter()
        .map(|n| group.half_axis_orbit(n.axis, n.sign))
        .collect();
    Ok(CycleType {
        kind,
        m: orbits.len(),
        minus: group.contains_minus_identity(),
    })
}

/// A heteroclinic network: its nodes, connections, cycles and symmetry group.
#[derive(Clone, Debug, PartialEq)]
pub struct NetworkSpec {
    pub id: NetworkId,
    pub nodes: Vec<Node>,
    pub connections: Vec<Connection>,
    pub cycles: Vec<CycleSpec>,
    pub group: SymmetryGroup,
}

impl NetworkSpec {
    pub fn node(&self, label: &str) -> Option<&Node> {
        self.nodes.iter().find(|n| n.label == label)
    }

    pub fn node_index(&self, label: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.label == label)
    }

    pub fn cycle(&self, label: &str) -> Option<&CycleSpec> {
        self.cycles.iter().find(|c| c.label == label)
    }

    pub fn is_type_a(&self) -> bool {
        self.cycles.iter().all(|c| c.type_label.kind == CycleKind::A)
    }

    /// Look up a connection by endpoint labels, optionally pinning the plane.
    pub fn find_connection(&self, from: &str, to: &str, plane: Option<Plane>) -> Result<&Connection> {
        let hits: Vec<&Connection> = self
            .connections
            .iter()
            .filter(|c| c.from == from && c.to == to && plane.is_none_or(|p| p == c.plane))
            .collect();
        match hits.as_slice() {
            [c] => Ok(c),
            [] => Err(Error::MissingConnection(format!(
                "no connection [{from}->{to}] in {}",
                self.id
            ))),
            _ => Err(Error::InvalidArgument(format!(
                "[{from}->{to}] is ambiguous in {}; specify the plane",
                self.id
            ))),
        }
    }

    /// Connections touching a node, in either direction.
    pub fn degree(&self, label: &str) -> usize {
        self.connections
            .iter()
            .filter(|c| c.from == label || c.to == label)
            .count()
    }

    /// Nodes with more than one outgoing connection.
    pub fn branch_nodes(&self) -> Vec<&Node> {
        self.nodes
            .iter()
            .filter(|n| self.connections.iter().filter(|c| c.from == n.label).count() > 1)
            .collect()
    }
}
