//! Closed-form index predictions for the four type-A networks, written out
//! per network from the node eigenvalues. These share no code with the
//! general recursion in `engine` and serve as a cross-check for it.

use serde::Serialize;

use super::engine::{StabilityIndex, GENERIC_TOL};
use super::extreal::ExtReal;
use super::roles::{EigenData, Spectra};
use crate::error::{Error, Result};

/// Predicted indices of one cycle, keyed by connection endpoints.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleCycle {
    pub cycle: String,
    pub indices: Vec<StabilityIndex>,
}

impl OracleCycle {
    pub fn index(&self, from: &str, to: &str) -> Option<&StabilityIndex> {
        self.indices.iter().find(|i| i.from == from && i.to == to)
    }
}

/// Eigenvalue of node xi_i in direction x_k.
fn lam(s: &Spectra, i: usize, k: usize) -> Result<f64> {
    let key = format!("xi{i}");
    s.get(&key)
        .map(|v| v[k - 1])
        .ok_or_else(|| Error::IncompleteEigenData(format!("no eigenvalues for node {key}")))
}

/// Positive magnitude of a contracting eigenvalue.
fn c(s: &Spectra, i: usize, k: usize) -> Result<f64> {
    let v = -lam(s, i, k)?;
    if v <= 0.0 {
        return Err(Error::InvalidCycleRealization(format!("c_{i}{k} = {v} must be positive")));
    }
    Ok(v)
}

/// An expanding eigenvalue.
fn e(s: &Spectra, i: usize, k: usize) -> Result<f64> {
    let v = lam(s, i, k)?;
    if v <= 0.0 {
        return Err(Error::InvalidCycleRealization(format!("e_{i}{k} = {v} must be positive")));
    }
    Ok(v)
}

fn tie(x: f64, y: f64, what: &str) -> Result<()> {
    if (x - y).abs() <= GENERIC_TOL {
        return Err(Error::NonGeneric(format!("{what}: {x} vs {y}")));
    }
    Ok(())
}

/// One level of the recursion for a finite argument. Returns IEEE +inf on
/// the a < b branch.
fn step(a: f64, b: f64, x: f64) -> Result<f64> {
    let d = a - b;
    if d.abs() <= GENERIC_TOL || (d - 1.0).abs() <= GENERIC_TOL {
        return Err(Error::NonGeneric(format!("a - b = {d} on a branch boundary")));
    }
    Ok(if d < 0.0 {
        f64::INFINITY
    } else if d < 1.0 {
        (a * x - a + 1.0) / d
    } else {
        a * x - b
    })
}

/// Apply the levels listed (outermost first) to y.
fn chain(levels: &[usize], ab: &[(f64, f64)], y: f64) -> Result<f64> {
    let mut v = y;
    for &l in levels.iter().rev() {
        if v.is_infinite() {
            break;
        }
        let (a, b) = ab[l - 1];
        v = step(a, b, v)?;
    }
    // A +inf level anywhere makes the whole chain infinite.
    for &l in levels {
        let (a, b) = ab[l - 1];
        if a - b < 0.0 {
            return Ok(f64::INFINITY);
        }
    }
    Ok(v)
}

fn rho(ab: &[(f64, f64)]) -> f64 {
    ab.iter().map(|&(a, b)| a.min(1.0 + b)).product()
}

fn to_ext(v: f64) -> ExtReal {
    ExtReal::from_f64(v)
}

/// Level chains for node j (rows) and negative position s (columns), read as
/// h_{j~,s} = step_{l1}(step_{l2}(... y_s)). Written out by hand.
const CHAINS_2: [[&[usize]; 2]; 2] = [[&[], &[1]], [&[2], &[]]];
const CHAINS_3: [[&[usize]; 3]; 3] = [
    [&[], &[1], &[1, 2]],
    [&[2, 3], &[], &[2]],
    [&[3], &[3, 1], &[]],
];
const CHAINS_4: [[&[usize]; 4]; 4] = [
    [&[], &[1], &[1, 2], &[1, 2, 3]],
    [&[2, 3, 4], &[], &[2], &[2, 3]],
    [&[3, 4], &[3, 4, 1], &[], &[3]],
    [&[4], &[4, 1], &[4, 1, 2], &[]],
];

fn chain_table(m: usize, j: usize, s: usize) -> &'static [usize] {
    match m {
        2 => CHAINS_2[j - 1][s - 1],
        3 => CHAINS_3[j - 1][s - 1],
        4 => CHAINS_4[j - 1][s - 1],
        _ => unreachable!("cycles have 2 to 4 nodes"),
    }
}

/// σ into each node (1-based position j at entry j-1) for a cycle already
/// known to be in the recursion case.
fn recursion_values(ab: &[(f64, f64)]) -> Result<Vec<f64>> {
    let m = ab.len();
    let negative: Vec<usize> = (1..=m).filter(|&s| ab[s - 1].1 < 0.0).collect();
    (1..=m)
        .map(|j| {
            let mut best = f64::INFINITY;
            for &s in &negative {
                let y = -1.0 / ab[s - 1].1;
                best = best.min(chain(chain_table(m, j, s), ab, y)?);
            }
            Ok(best - 1.0)
        })
        .collect()
}

/// Full prediction for a cycle from its ratio table: all −∞ when unstable,
/// otherwise the recursion values.
fn predict(ab: &[(f64, f64)]) -> Result<Vec<ExtReal>> {
    let m = ab.len();
    for &(_, b) in ab {
        tie(b, -1.0, "b_j at -1")?;
    }
    if ab.iter().any(|&(_, b)| b < -1.0) {
        return Ok(vec![ExtReal::NegInf; m]);
    }
    let r = rho(ab);
    tie(r, 1.0, "rho at 1")?;
    if r < 1.0 {
        return Ok(vec![ExtReal::NegInf; m]);
    }
    for &(_, b) in ab {
        tie(b, 0.0, "b_j at 0")?;
    }
    if ab.iter().all(|&(_, b)| b > 0.0) {
        return Ok(vec![ExtReal::PosInf; m]);
    }
    Ok(recursion_values(ab)?.into_iter().map(to_ext).collect())
}

fn cycle_out(label: &str, nodes: &[&str], into: &[ExtReal]) -> OracleCycle {
    let m = nodes.len();
    let indices = (0..m)
        .map(|k| StabilityIndex::new(nodes[k], nodes[(k + 1) % m], into[(k + 1) % m]))
        .collect();
    OracleCycle {
        cycle: label.to_string(),
        indices,
    }
}

fn all_minus(label: &str, nodes: &[&str]) -> OracleCycle {
    cycle_out(label, nodes, &vec![ExtReal::NegInf; nodes.len()])
}

/// Override a class predicted from the ratio table with the explicit
/// condition; a mismatch means the oracle itself is inconsistent.
fn with_condition(v: ExtReal, plus_inf: bool, what: &str) -> Result<ExtReal> {
    if v.is_neg_inf() {
        return Ok(v);
    }
    if v.is_pos_inf() != plus_inf {
        return Err(Error::InvalidArgument(format!(
            "closed form for {what} disagrees with its +inf condition"
        )));
    }
    Ok(v)
}

/// (A2+,A2+): xi1 plays xi_a (expanding along x2), xi2 plays xi_b.
pub fn oracle_a2a2(s: &Spectra) -> Result<Vec<OracleCycle>> {
    let e_a2 = e(s, 1, 2)?;
    let (c_a3, c_a4) = (c(s, 1, 3)?, c(s, 1, 4)?);
    let c_b2 = c(s, 2, 2)?;
    let (e_b3, e_b4) = (e(s, 2, 3)?, e(s, 2, 4)?);
    tie(e_b3, e_b4, "e_b3 vs e_b4")?;
    let nodes = ["xi1", "xi2"];
    // winner k leaves xi_b along x_k; l is the other direction
    let (k, l, ck, cl, ek, el) = if e_b3 > e_b4 {
        (3, 4, c_a3, c_a4, e_b3, e_b4)
    } else {
        (4, 3, c_a4, c_a3, e_b4, e_b3)
    };
    let ab = [(ck / e_a2, cl / e_a2), (c_b2 / ek, -el / ek)];
    let mut into = predict(&ab)?;
    if !into[0].is_neg_inf() {
        tie(ck, cl, "c_a3 vs c_a4")?;
        into[0] = with_condition(into[0], ck < cl, "sigma_ba")?;
        if let Some(v) = into[1].finite() {
            debug_assert!((v - (ek / el - 1.0)).abs() < 1e-9);
        }
    }
    let win = cycle_out(&format!("X{k}"), &nodes, &into);
    let lose = all_minus(&format!("X{l}"), &nodes);
    Ok(if k == 3 { vec![win, lose] } else { vec![lose, win] })
}

/// Ratios of the 3-cycle xi1 -> xi2 -> xi_k -> xi1 (k = 3 or 4) where node
/// xi_k has transverse direction x_l.
fn three_cycle_ratios(s: &Spectra, k: usize, l: usize) -> Result<[(f64, f64); 3]> {
    let e12 = e(s, 1, 2)?;
    let e2k = e(s, 2, k)?;
    let ek1 = e(s, k, 1)?;
    Ok([
        (c(s, 1, k)? / e12, c(s, 1, l)? / e12),
        (c(s, 2, 1)? / e2k, -lam(s, 2, l)? / e2k),
        (c(s, k, 2)? / ek1, -lam(s, k, l)? / ek1),
    ])
}

/// (A3-,A3-): the cycle through the stronger of e23, e24 is the candidate,
/// the other is all −∞.
pub fn oracle_a3a3(s: &Spectra) -> Result<Vec<OracleCycle>> {
    let (e23, e24) = (e(s, 2, 3)?, e(s, 2, 4)?);
    tie(e23, e24, "e23 vs e24")?;
    let (k, l) = if e23 > e24 { (3, 4) } else { (4, 3) };
    let nodes_k = ["xi1", "xi2", if k == 3 { "xi3" } else { "xi4" }];
    let nodes_l = ["xi1", "xi2", if l == 3 { "xi3" } else { "xi4" }];
    let ab = three_cycle_ratios(s, k, l)?;
    let mut into = predict(&ab)?;
    if !into[0].is_neg_inf() {
        let (c1k, c1l) = (c(s, 1, k)?, c(s, 1, l)?);
        let ck2 = c(s, k, 2)?;
        // c_kl: minus the transverse eigenvalue at xi_k
        let ckl = -lam(s, k, l)?;
        tie(c1k, c1l, "c1k vs c1l")?;
        into[0] = with_condition(into[0], c1l > c1k, "sigma_k1")?;
        if ckl > 0.0 {
            tie(ck2, ckl, "ck2 vs ckl")?;
        }
        into[2] = with_condition(into[2], (c1l > c1k || ck2 < ckl) && ckl > 0.0, "sigma_2k")?;
        into[1] = with_condition(into[1], false, "sigma_12")?;
    }
    let win = cycle_out(&format!("xi{k}-cycle"), &nodes_k, &into);
    let lose = all_minus(&format!("xi{l}-cycle"), &nodes_l);
    Ok(if k == 3 { vec![win, lose] } else { vec![lose, win] })
}

/// Ratio table of the 4-cycle xi1 -> xi2 -> xi3 -> xi4 -> xi1, with the
/// transverse eigenvalues x4 at xi2 and x2 at xi4 taken as given.
fn four_cycle_ratios(s: &Spectra) -> Result<[(f64, f64); 4]> {
    let (e12, e23, e34, e41) = (e(s, 1, 2)?, e(s, 2, 3)?, e(s, 3, 4)?, e(s, 4, 1)?);
    Ok([
        (c(s, 1, 4)? / e12, c(s, 1, 3)? / e12),
        (c(s, 2, 1)? / e23, -lam(s, 2, 4)? / e23),
        (c(s, 3, 2)? / e34, -lam(s, 3, 1)? / e34),
        (c(s, 4, 3)? / e41, -lam(s, 4, 2)? / e41),
    ])
}

/// (A3-,A3-,A4-): one prediction per cycle, in catalogue order
/// (xi3-cycle, xi4-cycle, 4-cycle).
pub fn oracle_a3a3a4(s: &Spectra) -> Result<Vec<OracleCycle>> {
    let (e23, e24) = (e(s, 2, 3)?, e(s, 2, 4)?);
    let (e31, e34) = (e(s, 3, 1)?, e(s, 3, 4)?);
    tie(e23, e24, "e23 vs e24")?;
    tie(e31, e34, "e31 vs e34")?;
    let (c13, c14) = (c(s, 1, 3)?, c(s, 1, 4)?);
    let (c42, c43) = (c(s, 4, 2)?, c(s, 4, 3)?);

    // xi3-cycle: e.a.s. iff rho > 1, e24 < e23, e34 < e31
    let ab3 = three_cycle_ratios(s, 3, 4)?;
    let n3 = ["xi1", "xi2", "xi3"];
    let x3 = if e24 < e23 && e34 < e31 && rho(&ab3) > 1.0 {
        tie(rho(&ab3), 1.0, "rho of xi3-cycle")?;
        let mut v = predict(&ab3)?;
        tie(c13, c14, "c13 vs c14")?;
        v[0] = with_condition(v[0], c14 > c13, "xi3-cycle sigma_31")?;
        v[1] = with_condition(v[1], false, "xi3-cycle sigma_12")?;
        v[2] = with_condition(v[2], false, "xi3-cycle sigma_23")?;
        cycle_out("xi3-cycle", &n3, &v)
    } else {
        all_minus("xi3-cycle", &n3)
    };

    // xi4-cycle: e.a.s. iff rho > 1, e24 > e23
    let ab4 = three_cycle_ratios(s, 4, 3)?;
    let n4 = ["xi1", "xi2", "xi4"];
    let x4 = if e24 > e23 && rho(&ab4) > 1.0 {
        tie(rho(&ab4), 1.0, "rho of xi4-cycle")?;
        let mut v = predict(&ab4)?;
        tie(c13, c14, "c13 vs c14")?;
        tie(c42, c43, "c42 vs c43")?;
        v[0] = with_condition(v[0], c13 > c14, "xi4-cycle sigma_41")?;
        v[1] = with_condition(v[1], false, "xi4-cycle sigma_12")?;
        v[2] = with_condition(v[2], c13 > c14 || c42 < c43, "xi4-cycle sigma_24")?;
        cycle_out("xi4-cycle", &n4, &v)
    } else {
        all_minus("xi4-cycle", &n4)
    };

    // 4-cycle: e.a.s. iff rho > 1, e24 < e23, e34 > e31
    let ab = four_cycle_ratios(s)?;
    let n = ["xi1", "xi2", "xi3", "xi4"];
    let x = if e24 < e23 && e34 > e31 && rho(&ab) > 1.0 {
        tie(rho(&ab), 1.0, "rho of 4-cycle")?;
        let mut v = predict(&ab)?;
        tie(c13, c14, "c13 vs c14")?;
        tie(c42, c43, "c42 vs c43")?;
        v[0] = with_condition(v[0], c13 > c14, "4-cycle sigma_41")?;
        v[1] = with_condition(v[1], false, "4-cycle sigma_12")?;
        v[2] = with_condition(v[2], false, "4-cycle sigma_23")?;
        v[3] = with_condition(v[3], c13 > c14 || c42 > c43, "4-cycle sigma_34")?;
        cycle_out("4-cycle", &n, &v)
    } else {
        all_minus("4-cycle", &n)
    };
    Ok(vec![x3, x4, x])
}

/// (A3-,A4-): the xi3-cycle and the 4-cycle. The transverse eigenvalue at
/// xi2 (direction x4) and at xi4 (direction x2) may take either sign.
pub fn oracle_a3a4(s: &Spectra) -> Result<Vec<OracleCycle>> {
    let (e31, e34) = (e(s, 3, 1)?, e(s, 3, 4)?);
    tie(e31, e34, "e31 vs e34")?;
    let t2 = lam(s, 2, 4)?;
    let c21 = c(s, 2, 1)?;

    let ab3 = three_cycle_ratios(s, 3, 4)?;
    let n3 = ["xi1", "xi2", "xi3"];
    let x3 = if e34 < e31 {
        let mut v = predict(&ab3)?;
        if !v[0].is_neg_inf() {
            let (c13, c14) = (c(s, 1, 3)?, c(s, 1, 4)?);
            tie(c13, c14, "c13 vs c14")?;
            if t2 < 0.0 {
                tie(c21, -t2, "c21 vs -t2")?;
            }
            // sigma_12 is +inf exactly when t2 < 0 and c21 < -t2; the
            // recursion for sigma_31 passes through xi2 and inherits that
            let at_xi2 = t2 < 0.0 && c21 < -t2;
            v[0] = with_condition(v[0], c14 > c13 || at_xi2, "xi3-cycle sigma_31")?;
            v[1] = with_condition(v[1], at_xi2, "xi3-cycle sigma_12")?;
        }
        cycle_out("xi3-cycle", &n3, &v)
    } else {
        all_minus("xi3-cycle", &n3)
    };

    let ab = four_cycle_ratios(s)?;
    let n = ["xi1", "xi2", "xi3", "xi4"];
    let x = if e34 > e31 {
        let mut v = predict(&ab)?;
        if !v[0].is_neg_inf() {
            if t2 < 0.0 {
                tie(c21, -t2, "c21 vs -t2")?;
            }
            // the same condition as for the xi3-cycle: both cycles see the
            // same contracting and transverse eigenvalues at xi2
            v[1] = with_condition(v[1], t2 < 0.0 && c21 < -t2, "4-cycle sigma_12")?;
        }
        cycle_out("4-cycle", &n, &v)
    } else {
        all_minus("4-cycle", &n)
    };
    Ok(vec![x3, x])
}

/// Constraint on the index of the connection entering a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaConstraint {
    /// Positive transverse eigenvalue at the node: the index is not +∞.
    NotPlusInfinity,
    /// All other transverse eigenvalues in (0, e): +∞ exactly when t < −c.
    PlusInfinityIff(bool),
    Unconstrained,
}

impl LemmaConstraint {
    /// −∞ satisfies every constraint: the lemma speaks about cycles that are
    /// not completely unstable.
    pub fn satisfied_by(&self, v: ExtReal) -> bool {
        match self {
            LemmaConstraint::NotPlusInfinity => !v.is_pos_inf(),
            LemmaConstraint::PlusInfinityIff(expect) => v.is_neg_inf() || v.is_pos_inf() == *expect,
            LemmaConstraint::Unconstrained => true,
        }
    }
}

/// Constraints per connection of a cycle, aligned with the cycle's
/// connections (entry k concerns the connection entering node k+1).
pub fn lemma_ainfinity_check(eigen: &[EigenData]) -> Vec<LemmaConstraint> {
    let m = eigen.len();
    let into: Vec<LemmaConstraint> = (0..m)
        .map(|j| {
            let d = &eigen[j];
            if d.t > 0.0 {
                LemmaConstraint::NotPlusInfinity
            } else if (0..m)
                .filter(|&k| k != j)
                .all(|k| eigen[k].t > 0.0 && eigen[k].t < eigen[k].e)
            {
                LemmaConstraint::PlusInfinityIff(d.t < -d.c)
            } else {
                LemmaConstraint::Unconstrained
            }
        })
        .collect();
    (0..m).map(|k| into[(k + 1) % m]).collect()
}
