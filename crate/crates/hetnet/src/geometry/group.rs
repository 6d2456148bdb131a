//! Diagonal sign groups acting on R^4.
//!
//! Every symmetry in scope is a diagonal matrix with entries ±1, so an
//! element is stored as its sign vector and composition is entrywise
//! multiplication. Coordinates are numbered 1..=4 in the public API.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DIM: usize = 4;

/// A diagonal involution x ↦ (s1 x1, …, s4 x4).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[i8; 4]", into = "[i8; 4]")]
pub struct GroupElement {
    signs: [i8; DIM],
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement { signs: [1; DIM] };
    pub const MINUS_IDENTITY: GroupElement = GroupElement { signs: [-1; DIM] };

    pub fn from_signs(signs: [i8; DIM]) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument(format!(
                "sign vector {signs:?} has entries outside {{-1, +1}}"
            )));
        }
        Ok(GroupElement { signs })
    }

    /// The rotation by π that fixes the coordinate plane P_ij pointwise.
    pub fn kappa(i: usize, j: usize) -> Result<Self> {
        if !(1..=DIM).contains(&i) || !(1..=DIM).contains(&j) {
            return Err(Error::InvalidArgument(format!(
                "kappa({i},{j}): indices must lie in 1..=4"
            )));
        }
        if i == j {
            return Err(Error::InvalidArgument(format!(
                "kappa({i},{j}): indices must differ"
            )));
        }
        let mut signs = [-1; DIM];
        signs[i - 1] = 1;
        signs[j - 1] = 1;
        Ok(GroupElement { signs })
    }

    /// The reflection in the hyperplane x_k = 0.
    pub fn reflection(k: usize) -> Result<Self> {
        if !(1..=DIM).contains(&k) {
            return Err(Error::InvalidArgument(format!(
                "reflection({k}): index must lie in 1..=4"
            )));
        }
        let mut signs = [1; DIM];
        signs[k - 1] = -1;
        Ok(GroupElement { signs })
    }

    pub fn signs(&self) -> [i8; DIM] {
        self.signs
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let mut signs = [1; DIM];
        for (k, s) in signs.iter_mut().enumerate() {
            *s = self.signs[k] * other.signs[k];
        }
        GroupElement { signs }
    }

    pub fn apply(&self, x: &[f64; DIM]) -> [f64; DIM] {
        let mut y = *x;
        for (k, v) in y.iter_mut().enumerate() {
            *v *= f64::from(self.signs[k]);
        }
        y
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn negation_count(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }

    /// Reflection in a hyperplane: exactly one coordinate negated.
    pub fn is_reflection(&self) -> bool {
        self.negation_count() == 1
    }

    /// Whether coordinate `k` (1-based) is left unchanged.
    pub fn fixes(&self, k: usize) -> bool {
        self.signs[k - 1] > 0
    }
}

impl TryFrom<[i8; DIM]> for GroupElement {
    type Error = Error;
    fn try_from(signs: [i8; DIM]) -> Result<Self> {
        GroupElement::from_signs(signs)
    }
}

impl From<GroupElement> for [i8; DIM] {
    fn from(g: GroupElement) -> Self {
        g.signs
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, s) in self.signs.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", if *s > 0 { '+' } else { '-' })?;
        }
        write!(f, ")")
    }
}

/// A finite subgroup of the diagonal ±1 group, with the generators it was
/// built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryGroup {
    elements: BTreeSet<GroupElement>,
    generators: Vec<GroupElement>,
}

impl SymmetryGroup {
    /// Closure of `generators` under composition. The identity is always
    /// included, so an empty list yields the trivial group.
    pub fn generate(generators: &[GroupElement]) -> SymmetryGroup {
        let mut elements = BTreeSet::from([GroupElement::IDENTITY]);
        let mut frontier = vec![GroupElement::IDENTITY];
        while let Some(g) = frontier.pop() {
            for h in generators {
                let gh = g.compose(h);
                if elements.insert(gh) {
                    frontier.push(gh);
                }
            }
        }
        SymmetryGroup {
            elements,
            generators: generators.to_vec(),
        }
    }

    pub fn trivial() -> SymmetryGroup {
        Self::generate(&[])
    }

    pub fn elements(&self) -> impl Iterator<Item = &GroupElement> {
        self.elements.iter()
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.contains(g)
    }

    pub fn contains_minus_identity(&self) -> bool {
        self.contains(&GroupElement::MINUS_IDENTITY)
    }

    pub fn has_reflection(&self) -> bool {
        self.elements.iter().any(GroupElement::is_reflection)
    }

    /// Fix(⟨subgroup_generators⟩) as a coordinate subspace.
    pub fn fixed_point_subspace(&self, subgroup_generators: &[GroupElement]) -> Result<Subspace> {
        for g in subgroup_generators {
            if !self.contains(g) {
                return Err(Error::InvalidArgument(format!(
                    "element {g} does not belong to the group"
                )));
            }
        }
        let mut mask = Subspace::FULL_MASK;
        for g in subgroup_generators {
            for k in 1..=DIM {
                if !g.fixes(k) {
                    mask &= !(1 << (k - 1));
                }
            }
        }
        Ok(Subspace { mask })
    }

    /// Isotropy subgroup of a coordinate subspace: all elements fixing it
    /// pointwise.
    pub fn isotropy(&self, space: Subspace) -> Vec<GroupElement> {
        self.elements
            .iter()
            .filter(|g| space.coords().all(|k| g.fixes(k)))
            .copied()
            .collect()
    }

    /// Whether `space` is the fixed-point subspace of its own isotropy
    /// subgroup, i.e. a genuine fixed-point space of this group.
    pub fn is_fixed_point_space(&self, space: Subspace) -> bool {
        let iso = self.isotropy(space);
        self.fixed_point_subspace(&iso)
            .map(|fix| fix == space)
            .unwrap_or(false)
    }

    /// Group orbit of a point on a half-axis, as (axis, sign) pairs.
    pub fn half_axis_orbit(&self, axis: usize, sign: i8) -> BTreeSet<(usize, i8)> {
        self.elements
            .iter()
            .map(|g| (axis, sign * g.signs()[axis - 1]))
            .collect()
    }
}

/// A coordinate subspace of R^4, identified by its set of active coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    mask: u8,
}

/// Shape of a coordinate subspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubspaceKind {
    Origin,
    Axis(usize),
    Plane(usize, usize),
    Hyperplane { missing: usize },
    Whole,
}

impl Subspace {
    const FULL_MASK: u8 = 0b1111;

    pub fn from_coords(coords: &[usize]) -> Result<Subspace> {
        let mut mask = 0u8;
        for &k in coords {
            if !(1..=DIM).contains(&k) {
                return Err(Error::InvalidArgument(format!(
                    "coordinate {k} outside 1..=4"
                )));
            }
            mask |= 1 << (k - 1);
        }
        Ok(Subspace { mask })
    }

    pub fn axis(i: usize) -> Result<Subspace> {
        Self::from_coords(&[i])
    }

    pub fn plane(i: usize, j: usize) -> Result<Subspace> {
        if i == j {
            return Err(Error::InvalidArgument(format!("P{i}{j} is not a plane")));
        }
        Self::from_coords(&[i, j])
    }

    pub fn whole() -> Subspace {
        Subspace {
            mask: Self::FULL_MASK,
        }
    }

    pub fn dim(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn contains_coord(&self, k: usize) -> bool {
        (1..=DIM).contains(&k) && self.mask & (1 << (k - 1)) != 0
    }

    pub fn coords(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=DIM).filter(move |&k| self.contains_coord(k))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        Subspace {
            mask: self.mask & other.mask,
        }
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.mask & !other.mask == 0
    }

    pub fn kind(&self) -> SubspaceKind {
        let c: Vec<usize> = self.coords().collect();
        match c.len() {
            0 => SubspaceKind::Origin,
            1 => SubspaceKind::Axis(c[0]),
            2 => SubspaceKind::Plane(c[0], c[1]),
            3 => SubspaceKind::Hyperplane {
                missing: (1..=DIM).find(|k| !c.contains(k)).unwrap_or(0),
            },
            _ => SubspaceKind::Whole,
        }
    }

    /// Norm of the components of `x` outside this subspace.
    pub fn off_norm(&self, x: &[f64; DIM]) -> f64 {
        (1..=DIM)
            .filter(|&k| !self.contains_coord(k))
            .map(|k| x[k - 1] * x[k - 1])
            .sum::<f64>()
            .sqrt()
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            SubspaceKind::Origin => write!(f, "{{0}}"),
            SubspaceKind::Axis(i) => write!(f, "L{i}"),
            SubspaceKind::Plane(i, j) => write!(f, "P{i}{j}"),
            SubspaceKind::Hyperplane { missing } => write!(f, "Q{missing}"),
            SubspaceKind::Whole => write!(f, "R4"),
        }
    }
}
