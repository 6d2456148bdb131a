//! Adaptive integration of the vector fields, connection tracing and node
//! itineraries.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{find_axis_equilibria, network_equilibria, norm, node_equilibrium, Equilibrium, VectorField, Vec4};
use crate::geometry::{Connection, NetworkSpec, DIM};

/// Balls around equilibria of this radius stop the integration when the
/// field is also below `CONVERGED_SPEED` there.
pub const CONVERGED_RADIUS: f64 = 1e-8;
pub const CONVERGED_SPEED: f64 = 1e-10;
pub const MIN_STEP: f64 = 1e-14;
/// Initial offset from the source node when tracing a connection.
pub const SHOOT_OFFSET: f64 = 1e-6;
/// Arrival distance that certifies a connection.
pub const ARRIVAL_TOL: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegrateOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub t_max: f64,
    pub escape_radius: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            t_max: 100.0,
            escape_radius: 10.0,
        }
    }
}

impl IntegrateOptions {
    fn check(&self) -> Result<()> {
        let tol_ok = |v: f64| v > 0.0 && v < 1.0;
        if !tol_ok(self.rel_tol) || !tol_ok(self.abs_tol) {
            return Err(Error::InvalidArgument("tolerances must lie in (0, 1)".into()));
        }
        if !(self.t_max > 0.0) {
            return Err(Error::InvalidArgument("t_max must be positive".into()));
        }
        if !(self.escape_radius > 0.0) {
            return Err(Error::InvalidArgument("escape radius must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Termination {
    TimeLimit,
    EscapedBall,
    ConvergedToNode,
    /// Stopped by an observer before any of the above.
    Stopped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec4>,
    /// Field values at the stored states, used for Hermite interpolation.
    #[serde(skip)]
    pub derivatives: Vec<Vec4>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> &Vec4 {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn end_time(&self) -> f64 {
        *self.times.last().expect("trajectory holds the initial time")
    }

    /// Cubic Hermite interpolation on step `k` (between samples k and k+1).
    pub fn hermite(&self, k: usize, t: f64) -> Vec4 {
        let (t0, t1) = (self.times[k], self.times[k + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s),
            s * (1.0 - s) * (1.0 - s),
            s * s * (3.0 - 2.0 * s),
            s * s * (s - 1.0),
        );
        let (y0, y1, d0, d1) = (&self.states[k], &self.states[k + 1], &self.derivatives[k], &self.derivatives[k + 1]);
        std::array::from_fn(|i| h00 * y0[i] + h10 * h * d0[i] + h01 * y1[i] + h11 * h * d1[i])
    }

    /// Dense output at any time in the covered range.
    pub fn at(&self, t: f64) -> Vec4 {
        let k = match self.times.binary_search_by(|v| v.total_cmp(&t)) {
            Ok(k) => return self.states[k],
            Err(0) => return self.states[0],
            Err(k) if k >= self.times.len() => return *self.last_state(),
            Err(k) => k - 1,
        };
        self.hermite(k, t)
    }
}

// Dormand-Prince 5(4) tableau. The field is autonomous so the nodes are
// not needed.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights are the last row of A; the error weights are the
// difference to the embedded fourth-order solution
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// What an observer wants after seeing an accepted step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

/// Integrator bound to one field, with the field's equilibria cached for
/// the convergence test.
#[derive(Clone, Debug)]
pub struct Integrator<'a> {
    pub field: &'a VectorField,
    pub options: IntegrateOptions,
    equilibria: Vec<Vec4>,
    sinks: Vec<Vec4>,
    saddles_stop: bool,
}

impl<'a> Integrator<'a> {
    pub fn new(field: &'a VectorField, options: IntegrateOptions) -> Result<Integrator<'a>> {
        options.check()?;
        let equilibria: Vec<Vec4> = find_axis_equilibria(field).into_iter().map(|e| e.position).collect();
        let sinks = equilibria
            .iter()
            .filter(|e| {
                let j = field.jacobian(e);
                (0..DIM).all(|k| j[k][k] < 0.0)
            })
            .copied()
            .collect();
        Ok(Integrator {
            field,
            options,
            equilibria,
            sinks,
            saddles_stop: true,
        })
    }

    /// Only stop at equilibria that are sinks. Orbits close to a strongly
    /// attracting heteroclinic cycle pass within the convergence ball of
    /// its saddles long before they settle anywhere.
    pub fn sinks_only(mut self) -> Self {
        self.saddles_stop = false;
        self
    }

    /// Within the convergence ball of an equilibrium with a slow field.
    pub fn is_converged(&self, x: &Vec4, fx: &Vec4) -> bool {
        norm(fx) < CONVERGED_SPEED
            && self.equilibria.iter().any(|e| dist(e, x) < CONVERGED_RADIUS)
    }

    fn converged(&self, x: &Vec4, fx: &Vec4) -> bool {
        if self.saddles_stop {
            self.is_converged(x, fx)
        } else {
            norm(fx) < CONVERGED_SPEED && self.sinks.iter().any(|e| dist(e, x) < CONVERGED_RADIUS)
        }
    }

    pub fn run(&self, x0: &Vec4) -> Result<Trajectory> {
        self.run_observed(x0, |_, _| Control::Continue)
    }

    /// Integrate from `x0`, calling `observe(t, x)` after every accepted
    /// step.
    pub fn run_observed<F>(&self, x0: &Vec4, mut observe: F) -> Result<Trajectory>
    where
        F: FnMut(f64, &Vec4) -> Control,
    {
        let opts = &self.options;
        let f = |x: &Vec4| self.field.evaluate(x);
        let mut t = 0.0;
        let mut x = *x0;
        let mut fx = f(&x);
        let mut traj = Trajectory {
            times: vec![t],
            states: vec![x],
            derivatives: vec![fx],
            termination: Termination::TimeLimit,
        };
        if norm(&x) > opts.escape_radius {
            traj.termination = Termination::EscapedBall;
            return Ok(traj);
        }
        if self.converged(&x, &fx) {
            traj.termination = Termination::ConvergedToNode;
            return Ok(traj);
        }
        if observe(t, &x) == Control::Stop {
            traj.termination = Termination::Stopped;
            return Ok(traj);
        }

        let mut h = initial_step(&f, &x, &fx, opts);
        // PI controller constants
        let beta = 0.04;
        let expo = 0.2 - 0.75 * beta;
        let mut err_old: f64 = 1e-4;
        let mut rejected = false;
        let mut k = [[0.0; DIM]; 7];
        loop {
            if t >= opts.t_max {
                return Ok(traj);
            }
            if h < MIN_STEP {
                return Err(Error::StiffnessFailure { t, h });
            }
            let last = t + h >= opts.t_max;
            if last {
                h = opts.t_max - t;
            }
            k[0] = fx;
            for s in 1..7 {
                let mut y = x;
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s][j];
                    if a != 0.0 {
                        for i in 0..DIM {
                            y[i] += h * a * kj[i];
                        }
                    }
                }
                k[s] = f(&y);
            }
            let mut x_new = x;
            for (j, kj) in k.iter().enumerate().take(6) {
                for i in 0..DIM {
                    x_new[i] += h * A[6][j] * kj[i];
                }
            }
            let mut err_sq = 0.0;
            for i in 0..DIM {
                let e: f64 = (0..7).map(|j| E[j] * k[j][i]).sum::<f64>() * h;
                let scale = opts.abs_tol + opts.rel_tol * x[i].abs().max(x_new[i].abs());
                err_sq += (e / scale).powi(2);
            }
            let err = (err_sq / DIM as f64).sqrt();
            if !err.is_finite() {
                h *= 0.1;
                rejected = true;
                continue;
            }
            if err <= 1.0 {
                let err = err.max(1e-10);
                let mut fac = err.powf(expo) / err_old.powf(beta) / 0.9;
                fac = fac.clamp(0.1, 5.0);
                if rejected {
                    fac = fac.max(1.0);
                }
                err_old = err;
                rejected = false;
                t = if last { opts.t_max } else { t + h };
                x = x_new;
                // first-same-as-last: stage 7 is the field at the new state
                fx = k[6];
                traj.times.push(t);
                traj.states.push(x);
                traj.derivatives.push(fx);
                if norm(&x) > opts.escape_radius {
                    traj.termination = Termination::EscapedBall;
                    return Ok(traj);
                }
                if self.converged(&x, &fx) {
                    traj.termination = Termination::ConvergedToNode;
                    return Ok(traj);
                }
                if observe(t, &x) == Control::Stop {
                    traj.termination = Termination::Stopped;
                    return Ok(traj);
                }
                h /= fac;
            } else {
                let fac = (err.powf(expo) / 0.9).min(10.0);
                h /= fac;
                rejected = true;
            }
        }
    }
}

fn initial_step<F: Fn(&Vec4) -> Vec4>(f: &F, x: &Vec4, fx: &Vec4, opts: &IntegrateOptions) -> f64 {
    let scale: Vec4 = std::array::from_fn(|i| opts.abs_tol + opts.rel_tol * x[i].abs());
    let d0 = (0..DIM).map(|i| (x[i] / scale[i]).powi(2)).sum::<f64>().sqrt() / 2.0;
    let d1 = (0..DIM).map(|i| (fx[i] / scale[i]).powi(2)).sum::<f64>().sqrt() / 2.0;
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let x1: Vec4 = std::array::from_fn(|i| x[i] + h0 * fx[i]);
    let f1 = f(&x1);
    let d2 = (0..DIM)
        .map(|i| ((f1[i] - fx[i]) / scale[i]).powi(2))
        .sum::<f64>()
        .sqrt()
        / 2.0
        / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(opts.t_max)
}

pub fn dist(a: &Vec4, b: &Vec4) -> f64 {
    let d: Vec4 = std::array::from_fn(|i| a[i] - b[i]);
    norm(&d)
}

pub fn integrate(field: &VectorField, x0: &Vec4, options: IntegrateOptions) -> Result<Trajectory> {
    Integrator::new(field, options)?.run(x0)
}

/// A node visit: the time interval spent within the capture radius.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Visit {
    pub node: String,
    pub t_in: f64,
    pub t_out: f64,
}

/// Time intervals spent within `radius` of each equilibrium, in order.
/// Boundary crossings are located on the dense output to 1e-9 in time and
/// intervals at the same node less than 1e-3 apart are merged.
pub fn itinerary(traj: &Trajectory, equilibria: &[Equilibrium], radius: f64) -> Result<Vec<Visit>> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument("capture radius must be positive".into()));
    }
    let inside = |x: &Vec4| equilibria.iter().position(|e| dist(&e.position, x) < radius);
    let mut visits: Vec<(usize, f64, f64)> = Vec::new();
    let mut current = inside(&traj.states[0]).map(|e| (e, traj.times[0]));
    for k in 0..traj.len().saturating_sub(1) {
        let next = inside(&traj.states[k + 1]);
        let here = current.map(|(e, _)| e);
        if next == here {
            continue;
        }
        if let Some((e, t_in)) = current.take() {
            let pos = equilibria[e].position;
            let t_out = crossing(traj, k, |x| dist(&pos, x) < radius);
            visits.push((e, t_in, t_out));
        }
        if let Some(e) = next {
            let pos = equilibria[e].position;
            let t_in = crossing(traj, k, |x| dist(&pos, x) >= radius);
            current = Some((e, t_in));
        }
    }
    if let Some((e, t_in)) = current {
        visits.push((e, t_in, traj.end_time()));
    }
    let mut merged: Vec<(usize, f64, f64)> = Vec::new();
    for v in visits {
        match merged.last_mut() {
            Some(last) if equilibria[last.0].label == equilibria[v.0].label && v.1 - last.2 < 1e-3 => last.2 = v.2,
            _ => merged.push(v),
        }
    }
    Ok(merged
        .into_iter()
        .map(|(e, t_in, t_out)| Visit {
            node: equilibria[e].label.clone(),
            t_in,
            t_out,
        })
        .collect())
}

/// Bisection on step k for the time where `before` stops holding.
fn crossing<P: Fn(&Vec4) -> bool>(traj: &Trajectory, k: usize, before: P) -> f64 {
    let (mut lo, mut hi) = (traj.times[k], traj.times[k + 1]);
    if !before(&traj.states[k]) {
        return lo;
    }
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if before(&traj.hermite(k, mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// A traced connection: the orbit from a point next to the source node up
/// to arrival at the target.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConnectionTrace {
    pub connection: Connection,
    pub source: Vec4,
    pub target: Vec4,
    pub trajectory: Trajectory,
    /// Distance to the target at the end of the trace.
    pub arrival_distance: f64,
}

impl ConnectionTrace {
    pub fn arrived(&self) -> bool {
        self.arrival_distance < ARRIVAL_TOL
    }
}

/// Shoot from the source node along its unstable direction inside the
/// connection plane and follow the orbit until it is within the arrival
/// tolerance of the target, leaves the escape ball or runs out of time.
pub fn trace_connection(field: &VectorField, network: &NetworkSpec, connection: &Connection, t_max: f64) -> Result<ConnectionTrace> {
    if !network.connections.contains(connection) {
        return Err(Error::MissingConnection(format!(
            "{} has no connection {} -> {} in {}",
            network.id, connection.from, connection.to, connection.plane
        )));
    }
    let from = node_equilibrium(field, network, &connection.from)?;
    let to = node_equilibrium(field, network, &connection.to)?;
    let dir = connection.plane.other(from.axis).ok_or_else(|| {
        Error::InvalidArgument(format!("{} does not contain the axis of {}", connection.plane, from.label))
    })?;
    let mut x0 = from.position;
    x0[dir - 1] = if to.axis == dir { to.sign as f64 } else { 1.0 } * SHOOT_OFFSET;
    let opts = IntegrateOptions {
        rel_tol: 1e-11,
        abs_tol: 1e-14,
        t_max,
        escape_radius: 10.0,
    };
    let target = to.position;
    let traj = Integrator::new(field, opts)?.run_observed(&x0, |_, x| {
        if dist(x, &target) < ARRIVAL_TOL {
            Control::Stop
        } else {
            Control::Continue
        }
    })?;
    let arrival_distance = dist(traj.last_state(), &target);
    Ok(ConnectionTrace {
        connection: connection.clone(),
        source: from.position,
        target,
        trajectory: traj,
        arrival_distance,
    })
}

/// Default time budget for tracing one connection.
pub const TRACE_TIME: f64 = 5000.0;

/// Trace a connection and fail unless it arrives.
pub fn certify_connection(field: &VectorField, network: &NetworkSpec, connection: &Connection) -> Result<ConnectionTrace> {
    let trace = trace_connection(field, network, connection, TRACE_TIME)?;
    if !trace.arrived() {
        return Err(Error::MissingConnection(format!(
            "{} -> {} in {} not realized: ended {:.3e} from the target ({:?})",
            connection.from, connection.to, connection.plane, trace.arrival_distance, trace.trajectory.termination
        )));
    }
    Ok(trace)
}

/// Base point on a connection with an orthonormal frame of the directions
/// transverse to the flow there.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectionPoint {
    pub connection: Connection,
    pub base: Vec4,
    pub frame: [Vec4; 3],
}

/// The point of the connection farthest from both of its endpoints, with a
/// transversal frame.
pub fn connection_point(field: &VectorField, network: &NetworkSpec, connection: &Connection) -> Result<SectionPoint> {
    let trace = certify_connection(field, network, connection)?;
    let traj = &trace.trajectory;
    let score = |x: &Vec4| dist(x, &trace.source).min(dist(x, &trace.target));
    let best = (0..traj.len())
        .max_by(|&i, &j| score(&traj.states[i]).total_cmp(&score(&traj.states[j])))
        .expect("nonempty trajectory");
    // refine on the neighbouring steps with the dense output
    let (lo, hi) = (best.saturating_sub(1), (best + 1).min(traj.len() - 1));
    let (mut a, mut b) = (traj.times[lo], traj.times[hi]);
    for _ in 0..100 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if score(&traj.at(m1)) < score(&traj.at(m2)) {
            a = m1;
        } else {
            b = m2;
        }
    }
    let base = traj.at(0.5 * (a + b));
    let frame = transversal_frame(&field.evaluate(&base))?;
    Ok(SectionPoint {
        connection: connection.clone(),
        base,
        frame,
    })
}

/// Three orthonormal vectors orthogonal to `flow`.
pub fn transversal_frame(flow: &Vec4) -> Result<[Vec4; 3]> {
    let n = norm(flow);
    if !(n > 0.0) {
        return Err(Error::InvalidArgument("flow vanishes at the base point".into()));
    }
    let mut basis: Vec<Vec4> = vec![std::array::from_fn(|i| flow[i] / n)];
    // Gram-Schmidt on coordinate vectors, most transverse first
    let mut order: Vec<usize> = (0..DIM).collect();
    order.sort_by(|&i, &j| flow[i].abs().total_cmp(&flow[j].abs()));
    for i in order {
        if basis.len() == DIM {
            break;
        }
        let mut v = [0.0; DIM];
        v[i] = 1.0;
        for _ in 0..2 {
            for u in &basis {
                let d: f64 = (0..DIM).map(|k| u[k] * v[k]).sum();
                for k in 0..DIM {
                    v[k] -= d * u[k];
                }
            }
        }
        let len = norm(&v);
        if len > 1e-6 {
            basis.push(std::array::from_fn(|k| v[k] / len));
        }
    }
    Ok([basis[1], basis[2], basis[3]])
}

/// Equilibria labelled by node, for itineraries.
pub fn labelled_equilibria(field: &VectorField, network: &NetworkSpec) -> Result<Vec<Equilibrium>> {
    network_equilibria(field, network)
}

/// Smallest distance between two distinct labelled equilibria.
pub fn min_separation(equilibria: &[Equilibrium]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in equilibria.iter().enumerate() {
        for b in &equilibria[i + 1..] {
            best = best.min(dist(&a.position, &b.position));
        }
    }
    best
}

/// Rows (t, x1, x2, x3, x4) for tabular export.
pub fn trajectory_rows(traj: &Trajectory) -> Vec<[f64; 5]> {
    traj.times
        .iter()
        .zip(&traj.states)
        .map(|(t, x)| [*t, x[0], x[1], x[2], x[3]])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{build_field, default_field, FieldParams};
    use crate::geometry::{network, NetworkId, Plane};

    fn axis_field(a: f64, b: f64) -> VectorField {
        let mut bm = [[0.0; 4]; 4];
        for (k, row) in bm.iter_mut().enumerate() {
            row[k] = b;
        }
        build_field(
            NetworkId::A3A3,
            &FieldParams {
                network: NetworkId::A3A3,
                a: [a; 4],
                b: bm,
                c: [0.0; 4],
            },
        )
        .unwrap()
    }

    /// Solution of x' = a x + b x^3 from x0.
    fn exact(a: f64, b: f64, x0: f64, t: f64) -> f64 {
        let e = (2.0 * a * t).exp();
        x0 * (a * e / (a + b * x0 * x0 * (1.0 - e))).sqrt()
    }

    #[test]
    fn matches_closed_form_and_converges_with_order() {
        let f = axis_field(1.0, -1.0);
        let mut errs = Vec::new();
        for tol in [1e-6, 1e-7, 1e-8, 1e-9] {
            let opts = IntegrateOptions { rel_tol: tol, abs_tol: tol * 1e-3, t_max: 3.0, escape_radius: 10.0 };
            let tr = integrate(&f, &[0.1, 0.0, 0.0, 0.0], opts).unwrap();
            errs.push((tr.last_state()[0] - exact(1.0, -1.0, 0.1, 3.0)).abs());
        }
        assert!(errs[3] < 1e-8, "{errs:?}");
        assert!(errs[3] < errs[0]);
    }

    #[test]
    fn starting_at_equilibrium_converges_immediately() {
        let f = axis_field(1.0, -1.0);
        let tr = integrate(&f, &[1.0, 0.0, 0.0, 0.0], IntegrateOptions::default()).unwrap();
        assert_eq!(tr.termination, Termination::ConvergedToNode);
        assert_eq!(tr.len(), 1);
    }

    #[test]
    fn escape_detected() {
        let f = axis_field(1.0, -1.0);
        let tr = integrate(&f, &[20.0, 0.0, 0.0, 0.0], IntegrateOptions::default()).unwrap();
        assert_eq!(tr.termination, Termination::EscapedBall);
    }

    #[test]
    fn bad_options_rejected() {
        let f = axis_field(1.0, -1.0);
        let opts = IntegrateOptions { rel_tol: 2.0, ..Default::default() };
        assert!(integrate(&f, &[0.1; 4], opts).is_err());
    }

    #[test]
    fn plane_stays_invariant() {
        let f = default_field(NetworkId::A3A3).unwrap();
        let tr = integrate(&f, &[0.3, 0.4, 0.0, 0.0], IntegrateOptions::default()).unwrap();
        assert!(tr.states.iter().all(|x| x[2] == 0.0 && x[3] == 0.0));
    }

    #[test]
    fn connection_arrives_and_section_is_transverse() {
        let f = default_field(NetworkId::A3A3).unwrap();
        let n = network(NetworkId::A3A3);
        let c = n.find_connection("xi1", "xi2", None).unwrap().clone();
        let sp = connection_point(&f, &n, &c).unwrap();
        assert!(sp.base[0] > 0.1 && sp.base[1] > 0.1);
        let flow = f.evaluate(&sp.base);
        for v in &sp.frame {
            let d: f64 = (0..4).map(|k| v[k] * flow[k]).sum();
            assert!(d.abs() < 1e-10);
            assert!((norm(v) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn absent_connection_is_missing() {
        let f = default_field(NetworkId::A3A3).unwrap();
        let n = network(NetworkId::A3A3);
        let c = Connection::new("xi2", "xi4", Plane::new(2, 3).unwrap());
        assert!(matches!(connection_point(&f, &n, &c), Err(Error::MissingConnection(_))));
    }

    #[test]
    fn itinerary_of_converging_orbit() {
        let f = default_field(NetworkId::A3A3).unwrap();
        let n = network(NetworkId::A3A3);
        let eqs = labelled_equilibria(&f, &n).unwrap();
        let opts = IntegrateOptions { t_max: 200.0, ..Default::default() };
        let tr = integrate(&f, &[1.0, 1e-6, 0.0, 0.0], opts).unwrap();
        let it = itinerary(&tr, &eqs, 0.05).unwrap();
        assert_eq!(it.first().unwrap().node, "xi1");
        assert_eq!(it.last().unwrap().node, "xi2");
        assert_eq!(it.last().unwrap().t_out, tr.end_time());
    }
}
