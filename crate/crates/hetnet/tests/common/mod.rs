#![allow(dead_code)]

use hetnet::geometry::{network, NetworkId, NetworkSpec};
use hetnet::stability::{ExtReal, Spectra};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TYPE_A: [NetworkId; 4] = [NetworkId::A2A2, NetworkId::A3A3, NetworkId::A3A4, NetworkId::A3A3A4];

/// Directions in which a node has an outgoing connection.
pub fn expanding_axes(net: &NetworkSpec, label: &str) -> Vec<usize> {
    let node = net.node(label).expect("node");
    net.connections
        .iter()
        .filter(|c| c.from == label)
        .map(|c| c.plane.other(node.axis).expect("plane through node"))
        .collect()
}

/// Node spectra from 16 numbers in [0, 1): radial and contracting or
/// transverse directions negative, outgoing directions positive.
pub fn spectra_from_unit(net: &NetworkSpec, u: &[f64]) -> Spectra {
    let mut out = Spectra::new();
    for (n, node) in net.nodes.iter().enumerate() {
        let out_axes = expanding_axes(net, &node.label);
        let mut ev = [0.0; 4];
        for k in 1..=4 {
            let w = u[4 * n + k - 1];
            ev[k - 1] = if k == node.axis {
                -(0.5 + 2.5 * w)
            } else if out_axes.contains(&k) {
                0.1 + 2.9 * w
            } else {
                -(0.1 + 2.9 * w)
            };
        }
        out.insert(node.label.clone(), ev);
    }
    out
}

pub struct Draws {
    rng: ChaCha8Rng,
}

impl Draws {
    pub fn new(seed: u64) -> Draws {
        Draws {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn unit(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    pub fn spectra(&mut self, id: NetworkId) -> Spectra {
        let u: Vec<f64> = (0..16).map(|_| self.unit()).collect();
        spectra_from_unit(&network(id), &u)
    }

    pub fn ratios(&mut self, m: usize) -> (Vec<f64>, Vec<f64>) {
        let a = (0..m).map(|_| 0.05 + 4.0 * self.unit()).collect();
        let b = (0..m).map(|_| -0.99 + 4.0 * self.unit()).collect();
        (a, b)
    }
}

pub fn scaled(s: &Spectra, factor: f64) -> Spectra {
    s.iter()
        .map(|(k, v)| (k.clone(), v.map(|x| x * factor)))
        .collect()
}

/// Same class and, for finite values, agreement within `tol` relative to
/// max(1, |value|).
pub fn same_value(x: ExtReal, y: ExtReal, tol: f64) -> bool {
    match (x.finite(), y.finite()) {
        (Some(a), Some(b)) => (a - b).abs() <= tol * a.abs().max(1.0),
        _ => x == y,
    }
}

/// Cycles that leave a branch node along its smaller expanding eigenvalue.
pub fn weaker_cycles(net: &NetworkSpec, s: &Spectra) -> Vec<String> {
    let mut out = Vec::new();
    for node in &net.nodes {
        let outgoing: Vec<_> = net.connections.iter().filter(|c| c.from == node.label).collect();
        if outgoing.len() < 2 {
            continue;
        }
        let ev = s[&node.label];
        let rate = |c: &hetnet::geometry::Connection| ev[c.plane.other(node.axis).unwrap() - 1];
        let best = outgoing.iter().map(|c| rate(c)).fold(f64::MIN, f64::max);
        for c in outgoing.iter().filter(|c| rate(c) < best) {
            for cy in net.cycles.iter().filter(|cy| cy.contains_connection(c)) {
                if !out.contains(&cy.label) {
                    out.push(cy.label.clone());
                }
            }
        }
    }
    out
}
