//! Monte Carlo estimates of how much of a small transverse ball around a
//! connection is attracted to a cycle.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::dynamics::{
    certify_connection, connection_point, dist, labelled_equilibria, min_separation, Control, IntegrateOptions,
    Integrator, SectionPoint, Termination,
};
use crate::error::{Error, Result};
use crate::fields::{Equilibrium, VectorField, Vec4};
use crate::geometry::{Connection, CycleSpec, NetworkId, NetworkSpec, Plane};
use crate::stability::{ExtReal, StabilityIndex};

/// Fraction of undecided samples above which a rung is unreliable.
pub const UNDECIDED_LIMIT: f64 = 0.2;

/// Points uniform in the ball of radius `eps` of the section's transversal
/// frame. Sample i is drawn from its own generator seeded with seed ^ i.
pub fn sample_section(section: &SectionPoint, eps: f64, n: usize, seed: u64) -> Result<Vec<Vec4>> {
    if !(eps > 0.0) || n == 0 {
        return Err(Error::InvalidArgument("need eps > 0 and at least one sample".into()));
    }
    Ok((0..n as u64).map(|i| sample_one(section, eps, seed ^ i)).collect())
}

fn sample_one(section: &SectionPoint, eps: f64, seed: u64) -> Vec4 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = loop {
        let u: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        if u.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
            break u;
        }
    };
    let mut x = section.base;
    for (w, v) in u.iter().zip(&section.frame) {
        for k in 0..4 {
            x[k] += eps * w * v[k];
        }
    }
    x
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fate {
    Cycle(String),
    Escaped,
    Undecided,
}

impl fmt::Display for Fate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fate::Cycle(c) => write!(f, "{c}"),
            Fate::Escaped => write!(f, "escaped"),
            Fate::Undecided => write!(f, "undecided"),
        }
    }
}

/// Simplified polyline of a traced connection and all its group images.
#[derive(Clone, Debug)]
struct Tube {
    images: Vec<Vec<Vec4>>,
}

impl Tube {
    fn distance(&self, x: &Vec4) -> f64 {
        let mut best = f64::INFINITY;
        for line in &self.images {
            for w in line.windows(2) {
                best = best.min(segment_distance(x, &w[0], &w[1]));
            }
        }
        best
    }
}

fn segment_distance(x: &Vec4, a: &Vec4, b: &Vec4) -> f64 {
    let ab: Vec4 = std::array::from_fn(|k| b[k] - a[k]);
    let ax: Vec4 = std::array::from_fn(|k| x[k] - a[k]);
    let len2: f64 = ab.iter().map(|v| v * v).sum();
    let s = if len2 > 0.0 {
        (ab.iter().zip(&ax).map(|(p, q)| p * q).sum::<f64>() / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let p: Vec4 = std::array::from_fn(|k| a[k] + s * ab[k]);
    dist(x, &p)
}

/// Douglas-Peucker simplification.
fn simplify(points: &[Vec4], tol: f64) -> Vec<Vec4> {
    if points.len() < 3 {
        return points.to_vec();
    }
    let mut keep = vec![false; points.len()];
    keep[0] = true;
    keep[points.len() - 1] = true;
    let mut stack = vec![(0, points.len() - 1)];
    while let Some((lo, hi)) = stack.pop() {
        let (mut worst, mut at) = (0.0, lo);
        for i in lo + 1..hi {
            let d = segment_distance(&points[i], &points[lo], &points[hi]);
            if d > worst {
                worst = d;
                at = i;
            }
        }
        if worst > tol {
            keep[at] = true;
            stack.push((lo, at));
            stack.push((at, hi));
        }
    }
    points.iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| *p).collect()
}

#[derive(Clone, Debug)]
struct CycleTrack {
    label: String,
    nodes: Vec<String>,
    /// Tube of the connection leaving node k.
    legs: Vec<Tube>,
}

impl CycleTrack {
    fn successor(&self, node: &str) -> Option<usize> {
        self.nodes
            .iter()
            .position(|n| n == node)
            .map(|k| (k + 1) % self.nodes.len())
    }
}

/// Everything needed to classify sample fates for one field and network:
/// labelled equilibria, the capture radius and tubes around every cycle.
#[derive(Clone, Debug)]
pub struct FateClassifier<'a> {
    field: &'a VectorField,
    equilibria: Vec<Equilibrium>,
    cycles: Vec<CycleTrack>,
    pub delta: f64,
    pub options: IntegrateOptions,
}

/// Default capture radius: 5% of the smallest distance between equilibria.
pub fn default_delta(field: &VectorField, network: &NetworkSpec) -> Result<f64> {
    Ok(0.05 * min_separation(&labelled_equilibria(field, network)?))
}

impl<'a> FateClassifier<'a> {
    pub fn new(field: &'a VectorField, network: &NetworkSpec, delta: f64, t_max: f64) -> Result<FateClassifier<'a>> {
        if !(delta > 0.0) || !(t_max > 0.0) {
            return Err(Error::InvalidArgument("delta and t_max must be positive".into()));
        }
        let equilibria = labelled_equilibria(field, network)?;
        if 2.0 * delta >= min_separation(&equilibria) {
            return Err(Error::InvalidArgument(format!(
                "delta = {delta} is not below half the smallest distance between equilibria"
            )));
        }
        let mut traced: BTreeMap<(String, String, Plane), Tube> = BTreeMap::new();
        for c in &network.connections {
            let trace = certify_connection(field, network, c)?;
            let line = simplify(&trace.trajectory.states, delta / 20.0);
            let mut images: Vec<Vec<Vec4>> = Vec::new();
            for g in network.group.elements() {
                let img: Vec<Vec4> = line.iter().map(|x| g.apply(x)).collect();
                if !images.contains(&img) {
                    images.push(img);
                }
            }
            traced.insert((c.from.clone(), c.to.clone(), c.plane), Tube { images });
        }
        let cycles = network
            .cycles
            .iter()
            .map(|cy: &CycleSpec| CycleTrack {
                label: cy.label.clone(),
                nodes: cy.nodes.iter().map(|n| n.label.clone()).collect(),
                legs: cy
                    .connections
                    .iter()
                    .map(|c| traced[&(c.from.clone(), c.to.clone(), c.plane)].clone())
                    .collect(),
            })
            .collect();
        Ok(FateClassifier {
            field,
            equilibria,
            cycles,
            delta,
            options: IntegrateOptions {
                rel_tol: 1e-9,
                abs_tol: 1e-12,
                t_max,
                escape_radius: 10.0,
            },
        })
    }

    fn ball(&self, x: &Vec4) -> Option<usize> {
        self.equilibria
            .iter()
            .position(|e| dist(&e.position, x) < self.delta)
    }

    /// Follow the orbit of `x0`. The fate is a cycle once 3m consecutive
    /// node visits follow its node order with every leg in between staying
    /// within the capture radius of that cycle's connections.
    pub fn classify(&self, x0: &Vec4) -> Result<Fate> {
        let integrator = Integrator::new(self.field, self.options)?.sinks_only();
        let n = self.cycles.len();
        let mut count = vec![0usize; n];
        let mut leg_ok = vec![true; n];
        let mut current: Option<usize> = None;
        let mut last_node: Option<String> = None;
        let mut fate: Option<usize> = None;
        // before the first visit: whether the orbit stays near some
        // connection of each cycle
        let mut prelude_ok = vec![true; n];
        let mut visits = 0usize;
        let traj = integrator.run_observed(x0, |_, x| {
            let ball = self.ball(x);
            if visits == 0 && ball.is_none() {
                for (ci, cy) in self.cycles.iter().enumerate() {
                    if prelude_ok[ci] && cy.legs.iter().all(|l| l.distance(x) > self.delta) {
                        prelude_ok[ci] = false;
                    }
                }
            }
            if ball != current {
                if let Some(e) = ball {
                    visits += 1;
                    let label = &self.equilibria[e].label;
                    for (ci, cy) in self.cycles.iter().enumerate() {
                        let follows = last_node
                            .as_deref()
                            .and_then(|p| cy.successor(p))
                            .is_some_and(|s| &cy.nodes[s] == label);
                        count[ci] = if follows && leg_ok[ci] {
                            count[ci] + 1
                        } else if cy.nodes.contains(label) {
                            1
                        } else {
                            0
                        };
                        leg_ok[ci] = true;
                    }
                    last_node = Some(label.clone());
                    let done = (0..n)
                        .filter(|&ci| count[ci] >= 3 * self.cycles[ci].nodes.len())
                        .max_by_key(|&ci| count[ci]);
                    if let Some(ci) = done {
                        fate = Some(ci);
                        return Control::Stop;
                    }
                }
                current = ball;
            }
            if ball.is_none() {
                if let Some(p) = last_node.as_deref() {
                    for (ci, cy) in self.cycles.iter().enumerate() {
                        if !leg_ok[ci] {
                            continue;
                        }
                        if let Some(k) = cy.nodes.iter().position(|v| v == p) {
                            if cy.legs[k].distance(x) > self.delta {
                                leg_ok[ci] = false;
                            }
                        }
                    }
                }
            }
            Control::Continue
        })?;
        // An orbit that settles on a node after following one cycle all the
        // way has its limit set inside that cycle.
        let settled = || {
            (0..n).find(|&ci| visits > 0 && prelude_ok[ci] && count[ci] == visits)
        };
        Ok(match (fate, traj.termination) {
            (Some(ci), _) => Fate::Cycle(self.cycles[ci].label.clone()),
            (None, Termination::EscapedBall) => Fate::Escaped,
            (None, Termination::ConvergedToNode) => match settled() {
                Some(ci) => Fate::Cycle(self.cycles[ci].label.clone()),
                None => Fate::Undecided,
            },
            // parked on a saddle, e.g. an orbit inside an invariant plane
            (None, Termination::TimeLimit)
                if integrator.is_converged(traj.last_state(), traj.derivatives.last().expect("nonempty")) =>
            {
                match settled() {
                    Some(ci) => Fate::Cycle(self.cycles[ci].label.clone()),
                    None => Fate::Undecided,
                }
            }
            _ => Fate::Undecided,
        })
    }
}

pub fn classify_fate(x0: &Vec4, network: &NetworkSpec, field: &VectorField, delta: f64, t_max: f64) -> Result<Fate> {
    FateClassifier::new(field, network, delta, t_max)?.classify(x0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    AttractingTrend,
    RepellingTrend,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rung {
    pub epsilon: f64,
    pub samples: usize,
    /// Samples per attracting cycle.
    pub cycles: BTreeMap<String, usize>,
    pub escaped: usize,
    pub undecided: usize,
    /// Share of decided samples attracted to the target cycle.
    pub fraction: f64,
    pub unreliable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasinEstimate {
    pub connection: Connection,
    pub target_cycle: String,
    pub ladder: Vec<f64>,
    pub rungs: Vec<Rung>,
    pub classification: Trend,
    /// Least-squares slope of ln(1 - fraction) (attracting) or ln(fraction)
    /// against ln(eps).
    pub slope: f64,
    /// 95% confidence half-width of the slope.
    pub slope_half_width: f64,
    pub delta: f64,
    pub t_max: f64,
}

/// Trend rule on per-rung fractions (ladder order, eps decreasing).
pub fn classify_trend(fractions: &[f64]) -> Trend {
    let Some(&last) = fractions.last() else {
        return Trend::Inconclusive;
    };
    let up = fractions.windows(2).all(|w| w[1] >= w[0]);
    let down = fractions.windows(2).all(|w| w[1] <= w[0]);
    if up && last >= 0.9 {
        Trend::AttractingTrend
    } else if down && last <= 0.1 {
        Trend::RepellingTrend
    } else {
        Trend::Inconclusive
    }
}

/// Slope and 95% half-width of a least-squares line through (x, y).
pub fn fit_slope(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return (f64::NAN, f64::NAN);
    }
    let slope = sxy / sxx;
    if x.len() < 3 {
        return (slope, f64::NAN);
    }
    let intercept = my - slope * mx;
    let sse: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let se = (sse / (n - 2.0) / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, n - 2.0)
        .map(|d| d.inverse_cdf(0.975))
        .unwrap_or(f64::NAN);
    (slope, t * se)
}

/// Run the fate classifier on `n` samples per rung around `section`.
pub fn estimate(
    classifier: &FateClassifier,
    section: &SectionPoint,
    target_cycle: &str,
    ladder: &[f64],
    n: usize,
    seed: u64,
) -> Result<BasinEstimate> {
    if ladder.len() < 3 {
        return Err(Error::InvalidArgument("the epsilon ladder needs at least three rungs".into()));
    }
    if ladder.windows(2).any(|w| w[1] >= w[0]) || ladder.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::InvalidArgument("the epsilon ladder must be positive and strictly decreasing".into()));
    }
    if !classifier.cycles.iter().any(|c| c.label == target_cycle) {
        return Err(Error::InvalidArgument(format!("unknown target cycle {target_cycle}")));
    }
    let mut rungs = Vec::new();
    for (r, &eps) in ladder.iter().enumerate() {
        let rung_seed = seed ^ ((r as u64) << 32);
        let points = sample_section(section, eps, n, rung_seed)?;
        let fates: Vec<Fate> = points
            .par_iter()
            .map(|x| classifier.classify(x))
            .collect::<Result<Vec<_>>>()?;
        let mut cycles: BTreeMap<String, usize> = classifier.cycles.iter().map(|c| (c.label.clone(), 0)).collect();
        let (mut escaped, mut undecided) = (0, 0);
        for f in &fates {
            match f {
                Fate::Cycle(c) => *cycles.get_mut(c).expect("known cycle") += 1,
                Fate::Escaped => escaped += 1,
                Fate::Undecided => undecided += 1,
            }
        }
        let decided = n - undecided;
        let fraction = if decided == 0 {
            0.0
        } else {
            cycles[target_cycle] as f64 / decided as f64
        };
        rungs.push(Rung {
            epsilon: eps,
            samples: n,
            cycles,
            escaped,
            undecided,
            fraction,
            unreliable: undecided as f64 > UNDECIDED_LIMIT * n as f64,
        });
    }
    let fractions: Vec<f64> = rungs.iter().map(|r| r.fraction).collect();
    let classification = if rungs.iter().any(|r| r.unreliable) {
        Trend::Inconclusive
    } else {
        classify_trend(&fractions)
    };
    let floor = 0.5 / n as f64;
    let xs: Vec<f64> = ladder.iter().map(|e| e.ln()).collect();
    let attracting = *fractions.last().expect("three rungs") >= 0.5;
    let ys: Vec<f64> = fractions
        .iter()
        .map(|f| {
            let v = if attracting { 1.0 - f } else { *f };
            v.clamp(floor, 1.0 - floor).ln()
        })
        .collect();
    let (slope, slope_half_width) = fit_slope(&xs, &ys);
    Ok(BasinEstimate {
        connection: section.connection.clone(),
        target_cycle: target_cycle.to_string(),
        ladder: ladder.to_vec(),
        rungs,
        classification,
        slope,
        slope_half_width,
        delta: classifier.delta,
        t_max: classifier.options.t_max,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// Sign agreement between an estimate and the analytic index of the same
/// connection.
pub fn compare(estimate: &BasinEstimate, analytic: &StabilityIndex) -> Result<Verdict> {
    if estimate.connection.from != analytic.from || estimate.connection.to != analytic.to {
        return Err(Error::InvalidArgument(format!(
            "estimate is for [{}->{}] but the index is for [{}->{}]",
            estimate.connection.from, estimate.connection.to, analytic.from, analytic.to
        )));
    }
    let attracting = match estimate.classification {
        Trend::Inconclusive => return Ok(Verdict::Inconclusive),
        Trend::AttractingTrend => true,
        Trend::RepellingTrend => false,
    };
    let positive = analytic.value > ExtReal::Finite(0.0);
    let minus_inf = analytic.value.is_neg_inf();
    Ok(if positive == attracting && minus_inf == !attracting {
        Verdict::Pass
    } else {
        Verdict::Fail
    })
}

/// A connection named as "from->to", optionally followed by ":Pij" when
/// two connections join the same nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionRef {
    pub from: String,
    pub to: String,
    pub plane: Option<Plane>,
}

impl ConnectionRef {
    pub fn resolve<'n>(&self, network: &'n NetworkSpec) -> Result<&'n Connection> {
        network.find_connection(&self.from, &self.to, self.plane)
    }
}

impl FromStr for ConnectionRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (path, plane) = match s.split_once(':') {
            Some((p, pl)) => (p, Some(pl.trim().parse::<Plane>()?)),
            None => (s, None),
        };
        let (from, to) = path
            .split_once("->")
            .ok_or_else(|| Error::Parse(format!("connection `{s}` is not of the form from->to")))?;
        Ok(ConnectionRef {
            from: from.trim().to_string(),
            to: to.trim().to_string(),
            plane,
        })
    }
}

impl fmt::Display for ConnectionRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.from, self.to)?;
        if let Some(p) = self.plane {
            write!(f, ":{p}")?;
        }
        Ok(())
    }
}

impl Serialize for ConnectionRef {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ConnectionRef {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A basin experiment as read from disk. `params_ref` names either a
/// shipped parameter set ("default") or a parameter file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub network: NetworkId,
    pub params_ref: String,
    pub connection: ConnectionRef,
    pub target_cycle: String,
    pub ladder: Vec<f64>,
    pub samples_per_rung: usize,
    /// Capture radius; the default is derived from the equilibria.
    #[serde(default)]
    pub delta: Option<f64>,
    pub t_max: f64,
    pub seed: u64,
}

/// Estimate for the configured connection with a prepared classifier.
pub fn run_experiment(
    config: &ExperimentConfig,
    field: &VectorField,
    network: &NetworkSpec,
) -> Result<BasinEstimate> {
    let connection = config.connection.resolve(network)?.clone();
    let delta = match config.delta {
        Some(d) => d,
        None => default_delta(field, network)?,
    };
    let classifier = FateClassifier::new(field, network, delta, config.t_max)?;
    let section = connection_point(field, network, &connection)?;
    estimate(
        &classifier,
        &section,
        &config.target_cycle,
        &config.ladder,
        config.samples_per_rung,
        config.seed,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::default_field;
    use crate::geometry::network;

    fn setup(id: NetworkId) -> (VectorField, NetworkSpec) {
        (default_field(id).unwrap(), network(id))
    }

    #[test]
    fn samples_lie_in_the_ball_and_repeat() {
        let (f, n) = setup(NetworkId::A3A3);
        let c = n.find_connection("xi1", "xi2", None).unwrap().clone();
        let sp = connection_point(&f, &n, &c).unwrap();
        let a = sample_section(&sp, 0.01, 500, 9).unwrap();
        assert!(a.iter().all(|x| dist(x, &sp.base) <= 0.01 + 1e-15));
        assert_eq!(a, sample_section(&sp, 0.01, 500, 9).unwrap());
        let mean: Vec4 = std::array::from_fn(|k| a.iter().map(|x| x[k]).sum::<f64>() / 500.0);
        assert!(dist(&mean, &sp.base) < 3.0 * 0.01 / 500f64.sqrt());
    }

    #[test]
    fn trivial_fates() {
        let (f, n) = setup(NetworkId::A3A3);
        let delta = default_delta(&f, &n).unwrap();
        let cl = FateClassifier::new(&f, &n, delta, 500.0).unwrap();
        assert_eq!(cl.classify(&[20.0, 0.0, 0.0, 0.0]).unwrap(), Fate::Escaped);
        assert_eq!(cl.classify(&[0.0; 4]).unwrap(), Fate::Undecided);
        let c = n.find_connection("xi1", "xi2", None).unwrap().clone();
        let sp = connection_point(&f, &n, &c).unwrap();
        assert_eq!(cl.classify(&sp.base).unwrap(), Fate::Cycle("xi3-cycle".into()));
    }

    #[test]
    fn trend_rules() {
        assert_eq!(classify_trend(&[0.6, 0.8, 0.95]), Trend::AttractingTrend);
        assert_eq!(classify_trend(&[0.3, 0.1, 0.02]), Trend::RepellingTrend);
        assert_eq!(classify_trend(&[0.3, 0.9, 0.5]), Trend::Inconclusive);
        assert_eq!(classify_trend(&[0.95, 0.92, 0.93]), Trend::Inconclusive);
    }

    #[test]
    fn slope_of_exact_power_law() {
        let xs: Vec<f64> = [1e-1f64, 1e-2, 1e-3].iter().map(|v| v.ln()).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        let (s, hw) = fit_slope(&xs, &ys);
        assert!((s - 2.0).abs() < 1e-12);
        assert!(hw.abs() < 1e-9);
    }

    fn fake(trend: Trend) -> BasinEstimate {
        BasinEstimate {
            connection: Connection::new("xi1", "xi2", Plane::new(1, 2).unwrap()),
            target_cycle: "xi3-cycle".into(),
            ladder: vec![],
            rungs: vec![],
            classification: trend,
            slope: 0.0,
            slope_half_width: 0.0,
            delta: 0.1,
            t_max: 1.0,
        }
    }

    #[test]
    fn verdicts() {
        let plus = StabilityIndex::new("xi1", "xi2", ExtReal::PosInf);
        let minus = StabilityIndex::new("xi1", "xi2", ExtReal::NegInf);
        let fin = StabilityIndex::new("xi1", "xi2", ExtReal::Finite(1.5));
        assert_eq!(compare(&fake(Trend::AttractingTrend), &plus).unwrap(), Verdict::Pass);
        assert_eq!(compare(&fake(Trend::AttractingTrend), &minus).unwrap(), Verdict::Fail);
        assert_eq!(compare(&fake(Trend::Inconclusive), &fin).unwrap(), Verdict::Inconclusive);
        assert_eq!(compare(&fake(Trend::RepellingTrend), &minus).unwrap(), Verdict::Pass);
        let other = StabilityIndex::new("xi2", "xi3", ExtReal::PosInf);
        assert!(matches!(compare(&fake(Trend::AttractingTrend), &other), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn connection_refs_parse() {
        let r: ConnectionRef = "xi2->xi1:P14".parse().unwrap();
        assert_eq!(r.plane, Some(Plane::new(1, 4).unwrap()));
        assert_eq!(r.to_string(), "xi2->xi1:P14");
        let n = network(NetworkId::A2A2);
        assert!("xi2->xi1".parse::<ConnectionRef>().unwrap().resolve(&n).is_err());
        assert!(r.resolve(&n).is_ok());
        assert!("xi1 xi2".parse::<ConnectionRef>().is_err());
    }
}
