//! Ratios, ρ, the h recursion and the case analysis for the indices of a
//! single type-A cycle.

use serde::{Deserialize, Serialize};

use super::extreal::{ExtReal, IndexClass};
use super::roles::{cycle_eigen_data, EigenData, Spectra};
use crate::error::{Error, Result};
use crate::geometry::CycleSpec;

/// Tolerance for every genericity guard.
pub const GENERIC_TOL: f64 = 1e-9;

/// Per-node ratios a_j = c/e and b_j = −t/e of one cycle, in cycle order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioData {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl RatioData {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<RatioData> {
        if a.len() != b.len() || a.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "ratio vectors must have equal length >= 2 (got {} and {})",
                a.len(),
                b.len()
            )));
        }
        if let Some(v) = a.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidArgument(format!("a_j must be positive, got {v}")));
        }
        if let Some(v) = b.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("b_j must be finite, got {v}")));
        }
        Ok(RatioData { a, b })
    }

    pub fn from_eigen(eigen: &[EigenData]) -> Result<RatioData> {
        let a = eigen.iter().map(|d| d.c / d.e).collect();
        let b = eigen.iter().map(|d| -d.t / d.e).collect();
        RatioData::new(a, b)
    }

    pub fn m(&self) -> usize {
        self.a.len()
    }

    pub fn rho_j(&self, j: usize) -> f64 {
        self.a[j].min(1.0 + self.b[j])
    }

    pub fn rho(&self) -> f64 {
        (0..self.m()).map(|j| self.rho_j(j)).product()
    }

    /// The same cycle started at node `shift`.
    pub fn rotated(&self, shift: usize) -> RatioData {
        let m = self.m();
        let idx = |k: usize| (k + shift) % m;
        RatioData {
            a: (0..m).map(|k| self.a[idx(k)]).collect(),
            b: (0..m).map(|k| self.b[idx(k)]).collect(),
        }
    }
}

/// Ratios of one cycle from a table of node spectra.
pub fn ratios(spectra: &Spectra, cycle: &CycleSpec) -> Result<RatioData> {
    RatioData::from_eigen(&cycle_eigen_data(spectra, cycle)?)
}

pub fn rho(r: &RatioData) -> f64 {
    r.rho()
}

/// h_{l,j}(y) with 1-based node numbers taken modulo m. Requires l ≤ j.
/// Levels are evaluated from the outside in, so a +∞ branch stops the
/// recursion before deeper levels are inspected.
pub fn h_eval(l: i64, j: i64, y: ExtReal, r: &RatioData) -> Result<ExtReal> {
    if l > j {
        return Err(Error::InvalidArgument(format!("h_{{{l},{j}}} needs l <= j")));
    }
    if y.is_neg_inf() {
        return Err(Error::InvalidArgument("h argument must not be -inf".into()));
    }
    let m = r.m() as i64;
    // Collect the affine maps from outermost to innermost, then apply them
    // innermost first.
    let mut maps: Vec<(f64, f64)> = Vec::new();
    for level in l..j {
        let idx = (level - 1).rem_euclid(m) as usize;
        let (a, b) = (r.a[idx], r.b[idx]);
        let d = a - b;
        if d.abs() <= GENERIC_TOL || (d - 1.0).abs() <= GENERIC_TOL {
            return Err(Error::NonGeneric(format!(
                "a_{} - b_{} = {d} is on a branch boundary of h",
                idx + 1,
                idx + 1
            )));
        }
        if d < 0.0 {
            return Ok(ExtReal::PosInf);
        }
        if d < 1.0 {
            maps.push((a / d, (1.0 - a) / d));
        } else {
            maps.push((a, -b));
        }
    }
    Ok(maps
        .iter()
        .rev()
        .fold(y, |acc, &(slope, offset)| acc.affine(slope, offset)))
}

/// Which case of the index theorem applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremCase {
    AllPlusInfinity,
    Recursion,
    AllMinusInfinity,
}

/// σ_j for the connection entering node j, as a vector indexed by node
/// position (entry 0 is the connection into the first node), plus the case.
pub fn thm41_with_case(r: &RatioData) -> Result<(Vec<ExtReal>, TheoremCase)> {
    let m = r.m();
    for (k, &b) in r.b.iter().enumerate() {
        if (b + 1.0).abs() <= GENERIC_TOL {
            return Err(Error::NonGeneric(format!("b_{} = {b} is within tolerance of -1", k + 1)));
        }
    }
    if r.b.iter().any(|&b| b < -1.0) {
        return Ok((vec![ExtReal::NegInf; m], TheoremCase::AllMinusInfinity));
    }
    let rho = r.rho();
    if (rho - 1.0).abs() <= GENERIC_TOL {
        return Err(Error::NonGeneric(format!("rho = {rho} is within tolerance of 1")));
    }
    if rho < 1.0 {
        return Ok((vec![ExtReal::NegInf; m], TheoremCase::AllMinusInfinity));
    }
    for (k, &b) in r.b.iter().enumerate() {
        if b.abs() <= GENERIC_TOL {
            return Err(Error::NonGeneric(format!("b_{} = {b} is within tolerance of 0", k + 1)));
        }
    }
    let negative: Vec<usize> = (1..=m).filter(|&s| r.b[s - 1] < 0.0).collect();
    if negative.is_empty() {
        return Ok((vec![ExtReal::PosInf; m], TheoremCase::AllPlusInfinity));
    }
    let mut out = Vec::with_capacity(m);
    for j in 1..=m {
        let mut best = ExtReal::PosInf;
        for &s in &negative {
            let jt = if j <= s { j as i64 } else { j as i64 - m as i64 };
            let y = ExtReal::Finite(-1.0 / r.b[s - 1]);
            best = best.min(h_eval(jt, s as i64, y, r)?);
        }
        out.push(best.add(-1.0));
    }
    Ok((out, TheoremCase::Recursion))
}

pub fn thm41_indices(r: &RatioData) -> Result<Vec<ExtReal>> {
    thm41_with_case(r).map(|(v, _)| v)
}

/// A stability index attached to a connection [from → to].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityIndex {
    pub from: String,
    pub to: String,
    pub value: ExtReal,
    pub class: IndexClass,
}

impl StabilityIndex {
    pub fn new(from: &str, to: &str, value: ExtReal) -> StabilityIndex {
        StabilityIndex {
            from: from.to_string(),
            to: to.to_string(),
            value,
            class: value.class(),
        }
    }
}

/// Indices of a cycle aligned with `cycle.connections`.
pub fn cycle_indices(spectra: &Spectra, cycle: &CycleSpec) -> Result<(RatioData, Vec<StabilityIndex>)> {
    let r = ratios(spectra, cycle)?;
    let into = thm41_indices(&r)?;
    let m = cycle.len();
    let idx = cycle
        .connections
        .iter()
        .enumerate()
        .map(|(k, c)| StabilityIndex::new(&c.from, &c.to, into[(k + 1) % m]))
        .collect();
    Ok((r, idx))
}

/// Essential asymptotic stability: every index strictly positive.
pub fn eas_check(indices: &[ExtReal]) -> bool {
    !indices.is_empty() && indices.iter().all(|v| v.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rd(a: &[f64], b: &[f64]) -> RatioData {
        RatioData::new(a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn rho_examples() {
        assert!((rd(&[2.0; 3], &[0.5; 3]).rho() - 3.375).abs() < 1e-12);
        assert_eq!(rd(&[2.0, 2.0], &[-1.0, 0.5]).rho(), 0.0);
        let r = rd(&[0.5, 3.0], &[2.0, 2.0]);
        assert_eq!(r.rho_j(0), 0.5);
        assert_eq!(r.rho_j(1), 3.0);
    }

    #[test]
    fn h_examples() {
        let r = rd(&[0.5, 2.0], &[0.8, 0.5]);
        assert_eq!(h_eval(2, 2, ExtReal::Finite(0.7), &r).unwrap(), ExtReal::Finite(0.7));
        assert_eq!(h_eval(1, 2, ExtReal::Finite(0.7), &r).unwrap(), ExtReal::PosInf);
        // a - b = 1.5 > 1, inner value 2
        let r = rd(&[2.0, 1.0], &[0.5, 0.5]);
        assert_eq!(h_eval(1, 2, ExtReal::Finite(2.0), &r).unwrap(), ExtReal::Finite(3.5));
        // a - b = 0.7, inner value 2
        let r = rd(&[1.2, 1.0], &[0.5, 0.5]);
        let v = h_eval(1, 2, ExtReal::Finite(2.0), &r).unwrap().finite().unwrap();
        assert!((v - 2.2 / 0.7).abs() < 1e-12);
    }

    #[test]
    fn h_wraps_modulo_m() {
        // h_{0,2} = F_3(F_1(y)) for m = 3
        let r = rd(&[2.0, 1.5, 3.0], &[0.5, -0.2, 0.25]);
        let y = 4.0;
        let f1 = 2.0 * y - 0.5;
        let f3 = 3.0 * f1 - 0.25;
        assert_eq!(h_eval(0, 2, ExtReal::Finite(y), &r).unwrap(), ExtReal::Finite(f3));
        assert_eq!(h_eval(-2, 1, ExtReal::Finite(y), &r), h_eval(1, 4, ExtReal::Finite(y), &r));
    }

    #[test]
    fn h_guards() {
        let r = rd(&[1.0, 1.0], &[1.0 - 5e-10, 0.5]);
        assert!(matches!(h_eval(1, 2, ExtReal::Finite(1.0), &r), Err(Error::NonGeneric(_))));
        let r = rd(&[2.0, 1.0], &[1.0 + 5e-10, 0.5]);
        assert!(matches!(h_eval(1, 2, ExtReal::Finite(1.0), &r), Err(Error::NonGeneric(_))));
        assert!(h_eval(3, 2, ExtReal::Finite(1.0), &r).is_err());
    }

    #[test]
    fn theorem_cases() {
        let all_pos = thm41_indices(&rd(&[2.0; 3], &[0.5; 3])).unwrap();
        assert!(all_pos.iter().all(|v| v.is_pos_inf()));
        let neg = thm41_indices(&rd(&[2.0; 3], &[0.5, -1.5, 0.5])).unwrap();
        assert!(neg.iter().all(|v| v.is_neg_inf()));
        let low_rho = thm41_indices(&rd(&[0.5, 1.5, 1.2], &[0.5; 3])).unwrap();
        assert!(low_rho.iter().all(|v| v.is_neg_inf()));
    }

    #[test]
    fn single_negative_b_gives_ratio_of_expanding_eigenvalues() {
        // b_2 = -e24/e23 with e23 = 2, e24 = 1; sigma into node 2 is e23/e24 - 1.
        let r = rd(&[3.0, 4.0, 3.0], &[1.5, -0.5, 1.5]);
        let s = thm41_indices(&r).unwrap();
        assert_eq!(s[1], ExtReal::Finite(1.0));
        // sigma into node 1 is h_{1,2}(2) - 1 with a_1 - b_1 = 1.5
        assert_eq!(s[0], ExtReal::Finite(3.0 * 2.0 - 1.5 - 1.0));
        // sigma into node 3 is h_{0,2}(2) - 1 = F_3(F_1(2)) - 1
        assert_eq!(s[2], ExtReal::Finite(3.0 * 4.5 - 1.5 - 1.0));
    }

    #[test]
    fn guards_in_theorem() {
        assert!(matches!(
            thm41_indices(&rd(&[2.0; 3], &[0.5, -1.0 + 1e-10, 0.5])),
            Err(Error::NonGeneric(_))
        ));
        assert!(matches!(
            thm41_indices(&rd(&[2.0; 3], &[0.5, 1e-10, 0.5])),
            Err(Error::NonGeneric(_))
        ));
        // rho = 1 exactly
        assert!(matches!(
            thm41_indices(&rd(&[1.0, 1.0], &[0.5, 0.5])),
            Err(Error::NonGeneric(_))
        ));
    }

    #[test]
    fn eas() {
        assert!(eas_check(&[ExtReal::PosInf, ExtReal::PosInf]));
        assert!(eas_check(&[ExtReal::Finite(0.3), ExtReal::PosInf]));
        assert!(!eas_check(&[ExtReal::NegInf, ExtReal::NegInf]));
        assert!(!eas_check(&[]));
    }
}
