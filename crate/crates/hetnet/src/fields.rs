//! Equivariant polynomial vector fields supporting the type-A networks,
//! their axis equilibria and linearizations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CycleSpec, NetworkId, NetworkSpec, SymmetryGroup, DIM};
use crate::stability::{role_axes, EigenData, Spectra};

pub type Vec4 = [f64; DIM];
pub type Mat4 = [[f64; DIM]; DIM];

/// Residual below which a point counts as an equilibrium.
pub const EQUILIBRIUM_TOL: f64 = 1e-12;
/// Largest off-diagonal Jacobian entry accepted at an axis equilibrium.
pub const DIAGONAL_TOL: f64 = 1e-10;
/// Minimal separation of eigenvalues at one node.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    /// Two nodes on the x1 axis; x1 equation quadratic in the other
    /// coordinates plus a cubic self term.
    A2,
    /// Every equation odd in its own coordinate, with a quartic mixed term.
    A34,
}

impl FieldKind {
    pub fn for_network(id: NetworkId) -> Result<FieldKind> {
        match id {
            NetworkId::A2A2 => Ok(FieldKind::A2),
            NetworkId::A3A3 | NetworkId::A3A4 | NetworkId::A3A3A4 => Ok(FieldKind::A34),
            other => Err(Error::UnsupportedNetwork(format!(
                "no vector field is constructed for {other}"
            ))),
        }
    }
}

/// Coefficient set as stored on disk. `b[j][i]` couples x_i^2 into the
/// equation for x_j.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldParams {
    pub network: NetworkId,
    pub a: Vec4,
    pub b: Mat4,
    pub c: Vec4,
}

impl FieldParams {
    pub fn from_json(text: &str) -> Result<FieldParams> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VectorField {
    pub kind: FieldKind,
    pub network: NetworkId,
    pub a: Vec4,
    pub b: Mat4,
    pub c: Vec4,
}

fn violation(what: &str, value: f64) -> Error {
    Error::ConstraintViolation(format!("{what} (got {value})"))
}

/// Check the sign constraints for `id` and wrap the coefficients.
pub fn build_field(id: NetworkId, params: &FieldParams) -> Result<VectorField> {
    let kind = FieldKind::for_network(id)?;
    if params.network != id {
        return Err(Error::InvalidArgument(format!(
            "parameters are for {} but {} was requested",
            params.network, id
        )));
    }
    let all = params
        .a
        .iter()
        .chain(params.b.iter().flatten())
        .chain(params.c.iter());
    if all.clone().any(|v| !v.is_finite()) {
        return Err(Error::ConstraintViolation("coefficients must be finite".into()));
    }
    match kind {
        FieldKind::A2 => {
            let (a1, b11, c1) = (params.a[0], params.b[0][0], params.c[0]);
            let disc = b11 * b11 - 4.0 * a1 * c1;
            if disc <= 0.0 {
                return Err(violation("b_11^2 - 4 a_1 c_1 > 0", disc));
            }
            if a1 <= 0.0 {
                return Err(violation("a_1 > 0", a1));
            }
            if b11 >= 0.0 {
                return Err(violation("b_11 < 0", b11));
            }
            if c1 >= 0.0 {
                return Err(violation("c_1 < 0", c1));
            }
        }
        FieldKind::A34 => {
            for j in 0..DIM {
                if params.a[j] <= 0.0 {
                    return Err(violation(&format!("a_{} > 0", j + 1), params.a[j]));
                }
                if params.b[j][j] >= 0.0 {
                    return Err(violation(&format!("b_{0}{0} < 0", j + 1), params.b[j][j]));
                }
            }
        }
    }
    Ok(VectorField {
        kind,
        network: id,
        a: params.a,
        b: params.b,
        c: params.c,
    })
}

impl VectorField {
    pub fn params(&self) -> FieldParams {
        FieldParams {
            network: self.network,
            a: self.a,
            b: self.b,
            c: self.c,
        }
    }

    /// Product of the coordinates entering the mixed term.
    fn mixed(&self, x: &Vec4) -> f64 {
        match self.kind {
            FieldKind::A2 => x[1] * x[2] * x[3],
            FieldKind::A34 => x[0] * x[1] * x[2] * x[3],
        }
    }

    pub fn evaluate(&self, x: &Vec4) -> Vec4 {
        let sq = [x[0] * x[0], x[1] * x[1], x[2] * x[2], x[3] * x[3]];
        let p = self.mixed(x);
        let mut out = [0.0; DIM];
        for j in 0..DIM {
            let quad: f64 = (0..DIM).map(|i| self.b[j][i] * sq[i]).sum();
            out[j] = if self.kind == FieldKind::A2 && j == 0 {
                self.a[0] * x[0] + quad + self.c[0] * sq[0] * x[0]
            } else {
                x[j] * (self.a[j] + quad + self.c[j] * p)
            };
        }
        out
    }

    /// Analytic Jacobian, row j holding the derivatives of the x_j equation.
    pub fn jacobian(&self, x: &Vec4) -> Mat4 {
        let sq = [x[0] * x[0], x[1] * x[1], x[2] * x[2], x[3] * x[3]];
        let p = self.mixed(x);
        // derivative of the mixed product in each direction
        let mut dp = [0.0; DIM];
        let first = if self.kind == FieldKind::A2 { 1 } else { 0 };
        for (k, slot) in dp.iter_mut().enumerate().skip(first) {
            *slot = (first..DIM).filter(|&i| i != k).map(|i| x[i]).product();
        }
        let mut jac = [[0.0; DIM]; DIM];
        for j in 0..DIM {
            if self.kind == FieldKind::A2 && j == 0 {
                for k in 0..DIM {
                    jac[0][k] = 2.0 * self.b[0][k] * x[k];
                }
                jac[0][0] += self.a[0] + 3.0 * self.c[0] * sq[0];
                continue;
            }
            let quad: f64 = (0..DIM).map(|i| self.b[j][i] * sq[i]).sum();
            for k in 0..DIM {
                jac[j][k] = x[j] * (2.0 * self.b[j][k] * x[k] + self.c[j] * dp[k]);
            }
            jac[j][j] += self.a[j] + quad + self.c[j] * p;
        }
        jac
    }
}

pub fn evaluate(field: &VectorField, x: &Vec4) -> Vec4 {
    field.evaluate(x)
}

pub fn linearize(field: &VectorField, point: &Vec4) -> Mat4 {
    field.jacobian(point)
}

pub fn norm(x: &Vec4) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Max of |f(gx) - g f(x)| over random points in [-1, 1]^4 and all group
/// elements.
pub fn equivariance_residual_of<F>(f: F, group: &SymmetryGroup, sample_count: usize, seed: u64) -> f64
where
    F: Fn(&Vec4) -> Vec4,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..sample_count {
        let x: Vec4 = std::array::from_fn(|_| rng.gen_range(-1.0..=1.0));
        let fx = f(&x);
        for g in group.elements() {
            let lhs = f(&g.apply(&x));
            let rhs = g.apply(&fx);
            let diff: Vec4 = std::array::from_fn(|k| lhs[k] - rhs[k]);
            worst = worst.max(norm(&diff));
        }
    }
    worst
}

pub fn equivariance_residual(field: &VectorField, group: &SymmetryGroup, sample_count: usize, seed: u64) -> f64 {
    equivariance_residual_of(|x| field.evaluate(x), group, sample_count, seed)
}

/// Central-difference Jacobian, used to check the analytic one.
pub fn numeric_jacobian(field: &VectorField, x: &Vec4, step: f64) -> Mat4 {
    let mut jac = [[0.0; DIM]; DIM];
    for k in 0..DIM {
        let mut hi = *x;
        let mut lo = *x;
        hi[k] += step;
        lo[k] -= step;
        let (fh, fl) = (field.evaluate(&hi), field.evaluate(&lo));
        for j in 0..DIM {
            jac[j][k] = (fh[j] - fl[j]) / (2.0 * step);
        }
    }
    jac
}

/// An equilibrium on a coordinate axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub label: String,
    pub position: Vec4,
    /// 1-based.
    pub axis: usize,
    pub sign: i8,
}

impl Equilibrium {
    fn on_axis(axis: usize, value: f64) -> Equilibrium {
        let sign: i8 = if value > 0.0 { 1 } else { -1 };
        let mut position = [0.0; DIM];
        position[axis - 1] = value;
        Equilibrium {
            label: format!("x{axis}{}", if sign > 0 { '+' } else { '-' }),
            position,
            axis,
            sign,
        }
    }
}

/// Nonzero real roots of the restriction of the field to each axis. Roots
/// come from closed forms and are polished by Newton's method; a root only
/// counts if the whole field vanishes there.
pub fn find_axis_equilibria(field: &VectorField) -> Vec<Equilibrium> {
    let mut out = Vec::new();
    for axis in 1..=DIM {
        let k = axis - 1;
        // restricted equation: x (a + b x + c x^2) for the A2 x1 axis,
        // x (a + b x^2) otherwise
        let candidates: Vec<f64> = if field.kind == FieldKind::A2 && k == 0 {
            let (a, b, c) = (field.a[0], field.b[0][0], field.c[0]);
            let disc = b * b - 4.0 * a * c;
            if c == 0.0 || disc < 0.0 {
                Vec::new()
            } else {
                let s = disc.sqrt();
                // numerically stable pair
                let qv = -0.5 * (b + b.signum() * s);
                let mut r = vec![qv / c];
                if qv != 0.0 {
                    r.push(a / qv);
                }
                r
            }
        } else {
            let ratio = -field.a[k] / field.b[k][k];
            if field.b[k][k] == 0.0 || ratio <= 0.0 {
                Vec::new()
            } else {
                vec![ratio.sqrt(), -ratio.sqrt()]
            }
        };
        let mut roots: Vec<f64> = candidates
            .into_iter()
            .filter(|v| v.is_finite() && *v != 0.0)
            .map(|v| polish(field, axis, v))
            .collect();
        roots.sort_by(|a, b| b.total_cmp(a));
        roots.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        for r in roots {
            let eq = Equilibrium::on_axis(axis, r);
            if norm(&field.evaluate(&eq.position)) < EQUILIBRIUM_TOL {
                out.push(eq);
            }
        }
    }
    out
}

fn polish(field: &VectorField, axis: usize, mut v: f64) -> f64 {
    let k = axis - 1;
    let mut p = [0.0; DIM];
    for _ in 0..50 {
        p[k] = v;
        let g = field.evaluate(&p)[k];
        let dg = field.jacobian(&p)[k][k];
        if g == 0.0 || dg == 0.0 {
            break;
        }
        let step = g / dg;
        v -= step;
        if step.abs() <= 1e-16 * v.abs() {
            break;
        }
    }
    v
}

pub fn max_off_diagonal(jac: &Mat4) -> f64 {
    let mut worst: f64 = 0.0;
    for (j, row) in jac.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            if j != k {
                worst = worst.max(v.abs());
            }
        }
    }
    worst
}

fn diagonal(jac: &Mat4, what: &str) -> Result<Vec4> {
    let off = max_off_diagonal(jac);
    if off > DIAGONAL_TOL {
        return Err(Error::NotAxisEquilibrium(format!(
            "{what}: off-diagonal Jacobian entry {off:e}"
        )));
    }
    Ok(std::array::from_fn(|k| jac[k][k]))
}

/// Role-assigned eigenvalues of `node` for `cycle` from a Jacobian at that
/// node.
pub fn eigen_roles(jacobian: &Mat4, node: &Equilibrium, cycle: &CycleSpec) -> Result<EigenData> {
    let diag = diagonal(jacobian, &node.label)?;
    let on_axis: Vec<usize> = (0..cycle.len())
        .filter(|&k| cycle.nodes[k].axis == node.axis)
        .collect();
    let k = match on_axis.as_slice() {
        [] => None,
        [only] => Some(*only),
        several => several.iter().copied().find(|&k| cycle.nodes[k].sign == node.sign),
    }
    .ok_or_else(|| {
        Error::InvalidArgument(format!("{} is not a node of {}", node.label, cycle.label))
    })?;
    let label = &cycle.nodes[k].label;
    EigenData::from_eigenvalues(label, diag, role_axes(cycle, k)?)
}

/// Equilibria of the field that represent the network's nodes, tagged with
/// node labels. Group copies of a node carry the node's label.
pub fn network_equilibria(field: &VectorField, network: &NetworkSpec) -> Result<Vec<Equilibrium>> {
    let eqs = find_axis_equilibria(field);
    let mut out = Vec::new();
    for node in &network.nodes {
        let orbit = network.group.half_axis_orbit(node.axis, node.sign);
        let found: Vec<Equilibrium> = eqs
            .iter()
            .filter(|e| orbit.contains(&(e.axis, e.sign)))
            .map(|e| Equilibrium {
                label: node.label.clone(),
                ..e.clone()
            })
            .collect();
        if !found.iter().any(|e| e.sign == node.sign) {
            return Err(Error::ConstraintViolation(format!(
                "no equilibrium on the half-axis of {}",
                node.label
            )));
        }
        out.extend(found);
    }
    Ok(out)
}

/// The equilibrium standing for a node (on the node's own half-axis).
pub fn node_equilibrium(field: &VectorField, network: &NetworkSpec, label: &str) -> Result<Equilibrium> {
    let node = network
        .node(label)
        .ok_or_else(|| Error::InvalidArgument(format!("{} has no node {label}", network.id)))?;
    network_equilibria(field, network)?
        .into_iter()
        .find(|e| e.label == label && e.sign == node.sign)
        .ok_or_else(|| Error::ConstraintViolation(format!("no equilibrium for {label}")))
}

/// Diagonal eigenvalues at every node of the network.
pub fn node_spectra(field: &VectorField, network: &NetworkSpec) -> Result<Spectra> {
    let mut spectra = Spectra::new();
    for node in &network.nodes {
        let eq = node_equilibrium(field, network, &node.label)?;
        let diag = diagonal(&field.jacobian(&eq.position), &node.label)?;
        for i in 0..DIM {
            for j in i + 1..DIM {
                if (diag[i] - diag[j]).abs() <= DEGENERACY_TOL {
                    return Err(Error::NonGeneric(format!(
                        "{}: eigenvalues in directions x{} and x{} coincide ({})",
                        node.label,
                        i + 1,
                        j + 1,
                        diag[i]
                    )));
                }
            }
        }
        spectra.insert(node.label.clone(), diag);
    }
    Ok(spectra)
}

const DEFAULT_A2A2: &str = include_str!("../params/A2A2.json");
const DEFAULT_A3A3: &str = include_str!("../params/A3A3.json");
const DEFAULT_A3A4: &str = include_str!("../params/A3A4.json");
const DEFAULT_A3A3A4: &str = include_str!("../params/A3A3A4.json");

/// Shipped parameter set for a type-A network.
pub fn default_params(id: NetworkId) -> Result<FieldParams> {
    let text = match id {
        NetworkId::A2A2 => DEFAULT_A2A2,
        NetworkId::A3A3 => DEFAULT_A3A3,
        NetworkId::A3A4 => DEFAULT_A3A4,
        NetworkId::A3A3A4 => DEFAULT_A3A3A4,
        other => {
            return Err(Error::UnsupportedNetwork(format!(
                "no default parameters for {other}"
            )))
        }
    };
    FieldParams::from_json(text)
}

pub fn default_field(id: NetworkId) -> Result<VectorField> {
    build_field(id, &default_params(id)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{network, GroupElement};

    fn a34(a: Vec4, b: Mat4, c: Vec4) -> VectorField {
        build_field(NetworkId::A3A3, &FieldParams { network: NetworkId::A3A3, a, b, c }).unwrap()
    }

    fn minus_identity() -> Mat4 {
        let mut b = [[0.0; 4]; 4];
        for (k, row) in b.iter_mut().enumerate() {
            row[k] = -1.0;
        }
        b
    }

    #[test]
    fn a2_discriminant_checked() {
        let mut b = [[0.5; 4]; 4];
        b[0][0] = -3.0;
        let ok = FieldParams { network: NetworkId::A2A2, a: [2.0, 1.0, 1.0, 1.0], b, c: [-1.0, 0.0, 0.0, 0.0] };
        let f = build_field(NetworkId::A2A2, &ok).unwrap();
        let roots: Vec<f64> = find_axis_equilibria(&f)
            .iter()
            .filter(|e| e.axis == 1)
            .map(|e| e.position[0])
            .collect();
        let s = 17f64.sqrt();
        assert!((roots[0] - (-3.0 + s) / 2.0).abs() < 1e-10);
        assert!((roots[1] - (-3.0 - s) / 2.0).abs() < 1e-10);

        // a_1 c_1 > 0 makes the discriminant negative: 1 - 8 < 0
        let mut bad = ok.clone();
        bad.b[0][0] = -1.0;
        bad.c[0] = 1.0;
        let err = build_field(NetworkId::A2A2, &bad).unwrap_err();
        assert!(err.to_string().contains("b_11^2"), "{err}");
        let mut pos = ok.clone();
        pos.c[0] = 0.5;
        pos.b[0][0] = -3.0;
        let err = build_field(NetworkId::A2A2, &pos).unwrap_err();
        assert!(err.to_string().contains("c_1 < 0"), "{err}");
    }

    #[test]
    fn a34_values_at_simple_points() {
        let f = a34([1.0; 4], minus_identity(), [0.0; 4]);
        assert_eq!(f.evaluate(&[0.0; 4]), [0.0; 4]);
        assert_eq!(f.evaluate(&[1.0, 0.0, 0.0, 0.0]), [0.0; 4]);
        let eqs = find_axis_equilibria(&f);
        assert_eq!(eqs.len(), 8);
        assert_eq!(eqs[0].position, [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(eqs[1].position, [-1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn a34_jacobian_at_node() {
        let mut b = minus_identity();
        b[1] = [0.3, -1.0, 0.2, -0.4];
        let f = a34([1.0, 0.5, 2.0, 1.5], b, [0.0; 4]);
        let j = f.jacobian(&[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(j[0][0], -2.0);
        assert_eq!(j[1][1], 0.5 + 0.3);
        assert_eq!(j[2][2], 2.0);
        assert_eq!(max_off_diagonal(&j), 0.0);
        assert_eq!(f.jacobian(&[0.0; 4])[2][2], 2.0);
    }

    #[test]
    fn no_root_when_radicand_negative() {
        let mut f = a34([1.0; 4], minus_identity(), [0.0; 4]);
        f.b[2][2] = 1.0;
        assert!(find_axis_equilibria(&f).iter().all(|e| e.axis != 3));
    }

    #[test]
    fn broken_symmetry_detected() {
        let f = default_field(NetworkId::A3A3).unwrap();
        let g = network(NetworkId::A3A3).group;
        assert!(equivariance_residual(&f, &g, 200, 1) < 1e-12);
        let skewed = |x: &Vec4| {
            let mut v = f.evaluate(x);
            v[0] += 0.1 * x[1];
            v
        };
        assert!(equivariance_residual_of(skewed, &g, 200, 1) > 1e-3);
        let trivial = SymmetryGroup::generate(&[GroupElement::IDENTITY]);
        assert_eq!(equivariance_residual_of(skewed, &trivial, 50, 2), 0.0);
    }

    #[test]
    fn roles_for_a2_cycles() {
        let f = default_field(NetworkId::A2A2).unwrap();
        let n = network(NetworkId::A2A2);
        let xa = node_equilibrium(&f, &n, "xi1").unwrap();
        let jac = f.jacobian(&xa.position);
        let x3 = eigen_roles(&jac, &xa, n.cycle("X3").unwrap()).unwrap();
        let x4 = eigen_roles(&jac, &xa, n.cycle("X4").unwrap()).unwrap();
        assert_eq!(x3.t, jac[3][3]);
        assert_eq!(x4.t, jac[2][2]);
        assert_eq!(x3.c, -jac[2][2]);
    }

    #[test]
    fn positive_radial_rejected() {
        let n = network(NetworkId::A3A3);
        let eq = Equilibrium::on_axis(1, 1.0);
        let mut jac = [[0.0; 4]; 4];
        jac[0][0] = 1.0;
        jac[1][1] = 1.0;
        jac[2][2] = -1.0;
        jac[3][3] = -2.0;
        assert!(matches!(
            eigen_roles(&jac, &eq, &n.cycles[0]),
            Err(Error::InvalidCycleRealization(_))
        ));
        jac[0][1] = 0.1;
        assert!(matches!(eigen_roles(&jac, &eq, &n.cycles[0]), Err(Error::NotAxisEquilibrium(_))));
    }

    #[test]
    fn defaults_load_for_type_a_only() {
        for id in NetworkId::TYPE_A {
            let f = default_field(id).unwrap();
            assert_eq!(f.network, id);
        }
        assert!(matches!(default_params(NetworkId::B3B3), Err(Error::UnsupportedNetwork(_))));
    }
}
