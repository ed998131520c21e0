//! Maximally entangled bases generated by Weyl–Heisenberg shifts of
//! `|ψ_U⟩ = d^{-1/2} Σ_r |e_r⟩ ⊗ U|e_r⟩` with `U = U^(b): e_r ↦ e_{br}`.
//!
//! The state labelled `(ξ, η)` is `d^{-1/2} Σ_r λ(rξ) |e_r⟩ ⊗ |e_{b(r+η)}⟩`,
//! stored sparsely as `d` pairs of flat index `index(r)·d + index(b(r+η))`
//! and exact phase `λ(rξ)`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::Phase;
use crate::ring::{ComponentKind, Ring, RingElement, RingSpec};

/// The permutation matrix `U^(b)` for a unit `b`, stored as the index map
/// `index(r) ↦ index(b·r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermUnitary {
    b: RingElement,
    images: Vec<usize>,
}

impl PermUnitary {
    pub fn new(ring: &Ring, b: &RingElement) -> Result<Self> {
        if !ring.is_unit(b) {
            return Err(Error::NotAUnit(b.to_string()));
        }
        let bi = ring.index_of(b);
        let images = (0..ring.d()).map(|r| ring.mul_index(bi, r)).collect();
        Ok(Self {
            b: b.clone(),
            images,
        })
    }

    pub fn b(&self) -> &RingElement {
        &self.b
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Index map of the product `self · other`.
    pub fn compose(&self, other: &PermUnitary) -> Vec<usize> {
        other.images.iter().map(|&i| self.images[i]).collect()
    }
}

/// A maximally entangled state with `d` nonzero amplitudes of modulus `1/√d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseState {
    d: usize,
    xi: RingElement,
    eta: RingElement,
    entries: Vec<(usize, Phase)>,
}

impl SparseState {
    /// Entries must number exactly `d` and be strictly increasing in flat
    /// index below `d²`.
    pub fn new(
        d: usize,
        xi: RingElement,
        eta: RingElement,
        entries: Vec<(usize, Phase)>,
    ) -> Result<Self> {
        if entries.len() != d {
            return Err(Error::InvalidState(format!(
                "expected {d} entries, found {}",
                entries.len()
            )));
        }
        if let Some(&(i, _)) = entries.iter().find(|(i, _)| *i >= d * d) {
            return Err(Error::InvalidState(format!(
                "flat index {i} out of range for d = {d}"
            )));
        }
        if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidState(
                "flat indices must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            d,
            xi,
            eta,
            entries,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn xi(&self) -> &RingElement {
        &self.xi
    }

    pub fn eta(&self) -> &RingElement {
        &self.eta
    }

    pub fn entries(&self) -> &[(usize, Phase)] {
        &self.entries
    }

    #[cfg(test)]
    pub(crate) fn entries_mut(&mut self) -> &mut [(usize, Phase)] {
        &mut self.entries
    }

    /// True when first-factor rows and second-factor columns are each hit
    /// exactly once.
    pub fn has_permutation_support(&self) -> bool {
        let mut rows = vec![false; self.d];
        let mut cols = vec![false; self.d];
        self.entries.iter().all(|&(flat, _)| {
            let (r, s) = (flat / self.d, flat % self.d);
            !std::mem::replace(&mut rows[r], true) && !std::mem::replace(&mut cols[s], true)
        })
    }

    pub fn label(&self) -> String {
        format!("xi={} eta={}", self.xi, self.eta)
    }
}

/// `Φ_U` for `U = U^(b)`: `d²` states ordered by `(ξ, η)` with `ξ` major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MEBasis {
    b: RingElement,
    states: Vec<SparseState>,
}

impl MEBasis {
    /// Requires exactly `d²` states of one common dimension.
    pub fn new(b: RingElement, states: Vec<SparseState>) -> Result<Self> {
        let d = states.first().map(SparseState::d).unwrap_or(0);
        if d == 0 || states.len() != d * d || states.iter().any(|s| s.d() != d) {
            return Err(Error::InvalidState(format!(
                "a basis needs d² states of one dimension, found {}",
                states.len()
            )));
        }
        Ok(Self { b, states })
    }

    pub fn b(&self) -> &RingElement {
        &self.b
    }

    pub fn d(&self) -> usize {
        self.states[0].d()
    }

    pub fn states(&self) -> &[SparseState] {
        &self.states
    }

    #[cfg(test)]
    pub(crate) fn states_mut(&mut self) -> &mut [SparseState] {
        &mut self.states
    }
}

/// Bases `Φ_{U^(b)}` for every `b` in a set satisfying the unit-difference
/// condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    ring: Ring,
    set: Vec<RingElement>,
    bases: Vec<MEBasis>,
}

impl Family {
    /// Assembles a family without checking the set condition; used for
    /// externally supplied data and negative controls.
    pub fn from_parts(ring: Ring, set: Vec<RingElement>, bases: Vec<MEBasis>) -> Result<Self> {
        if set.len() != bases.len() {
            return Err(Error::InvalidSet(format!(
                "{} set elements but {} bases",
                set.len(),
                bases.len()
            )));
        }
        if let Some(basis) = bases.iter().find(|b| b.d() != ring.d()) {
            return Err(Error::DimensionMismatch {
                left: ring.d(),
                right: basis.d(),
            });
        }
        Ok(Self { ring, set, bases })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn set(&self) -> &[RingElement] {
        &self.set
    }

    pub fn bases(&self) -> &[MEBasis] {
        &self.bases
    }

    pub fn d(&self) -> usize {
        self.ring.d()
    }
}

pub fn perm_unitary(ring: &Ring, b: &RingElement) -> Result<PermUnitary> {
    PermUnitary::new(ring, b)
}

fn state_at(ring: &Ring, bi: usize, xi: usize, eta: usize) -> SparseState {
    let d = ring.d();
    let entries = (0..d)
        .map(|r| {
            let col = ring.mul_index(bi, ring.add_index(r, eta));
            (r * d + col, ring.character_at(ring.mul_index(r, xi)))
        })
        .collect();
    SparseState {
        d,
        xi: ring.element(xi),
        eta: ring.element(eta),
        entries,
    }
}

/// `H_{ξ,η}|ψ_{U^(b)}⟩`.
pub fn build_state(
    ring: &Ring,
    b: &RingElement,
    xi: &RingElement,
    eta: &RingElement,
) -> Result<SparseState> {
    if !ring.is_unit(b) {
        return Err(Error::NotAUnit(b.to_string()));
    }
    if !ring.contains(xi) || !ring.contains(eta) {
        return Err(Error::ShapeMismatch);
    }
    Ok(state_at(
        ring,
        ring.index_of(b),
        ring.index_of(xi),
        ring.index_of(eta),
    ))
}

pub fn build_basis(ring: &Ring, b: &RingElement) -> Result<MEBasis> {
    if !ring.is_unit(b) {
        return Err(Error::NotAUnit(b.to_string()));
    }
    if !ring.check_generic() {
        return Err(Error::NonGenericCharacter);
    }
    Ok(basis_unchecked(ring, b))
}

fn basis_unchecked(ring: &Ring, b: &RingElement) -> MEBasis {
    let d = ring.d();
    let bi = ring.index_of(b);
    let states = (0..d * d)
        .map(|k| state_at(ring, bi, k / d, k % d))
        .collect();
    MEBasis {
        b: b.clone(),
        states,
    }
}

/// Why a set fails the unit-difference condition. Positions index the set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetViolation {
    Empty,
    NotInRing(usize),
    NotAUnit(usize),
    Duplicate(usize, usize),
    NonUnitDifference(usize, usize),
}

impl fmt::Display for SetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetViolation::Empty => write!(f, "the set is empty"),
            SetViolation::NotInRing(i) => write!(f, "element #{i} does not belong to the ring"),
            SetViolation::NotAUnit(i) => write!(f, "element #{i} is not a unit"),
            SetViolation::Duplicate(i, j) => write!(f, "elements #{i} and #{j} are equal"),
            SetViolation::NonUnitDifference(i, j) => {
                write!(f, "difference of elements #{i} and #{j} is not a unit")
            }
        }
    }
}

/// Every element a unit and every pairwise difference a unit. Reports the
/// first violation in scan order.
pub fn validate_set_condition(ring: &Ring, set: &[RingElement]) -> Result<(), SetViolation> {
    if set.is_empty() {
        return Err(SetViolation::Empty);
    }
    for (i, x) in set.iter().enumerate() {
        if !ring.contains(x) {
            return Err(SetViolation::NotInRing(i));
        }
        if !ring.is_unit(x) {
            return Err(SetViolation::NotAUnit(i));
        }
    }
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            if set[i] == set[j] {
                return Err(SetViolation::Duplicate(i, j));
            }
            if !ring.is_unit(&ring.sub(&set[i], &set[j])) {
                return Err(SetViolation::NonUnitDifference(i, j));
            }
        }
    }
    Ok(())
}

/// For `F_{q_1} ⊕ ... ⊕ F_{q_s}` with `q_1 = min q_i ≥ 3`: the `q_1 − 1`
/// elements whose `l`-th member takes the `l`-th nonzero element of every
/// component. Distinct members differ in every component, so all
/// differences are units.
pub fn direct_sum_unit_set(ring: &Ring) -> Result<Vec<RingElement>> {
    if ring
        .components()
        .iter()
        .any(|c| c.spec().kind == ComponentKind::ModRing)
    {
        return Err(Error::NotApplicable(
            "the direct-sum set needs every component to be a field".into(),
        ));
    }
    let q1 = ring
        .components()
        .iter()
        .map(|c| c.size())
        .min()
        .unwrap_or(0);
    if q1 < 3 {
        return Err(Error::NotApplicable(format!(
            "smallest component has {q1} elements; at least 3 are needed"
        )));
    }
    Ok((1..q1).map(|l| nth_nonzero_everywhere(ring, l)).collect())
}

// Field elements are enumerated by code, so the l-th unit has code l.
fn nth_nonzero_everywhere(ring: &Ring, l: u64) -> RingElement {
    let spec_index = ring
        .components()
        .iter()
        .fold(0u64, |acc, c| acc * c.size() + l);
    ring.element(spec_index as usize)
}

/// `{1, ..., p_1 − 1}` embedded in the ring, `p_1` the smallest prime
/// dividing `d`: pairwise differences are below `p_1` in absolute value and
/// hence units of `Z_d`.
pub fn integer_baseline_set(ring: &Ring) -> Vec<RingElement> {
    let p1 = ring
        .spec()
        .components
        .iter()
        .map(|c| c.p)
        .min()
        .unwrap_or(2);
    (1..p1).map(|n| ring.from_integer(n)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RingChoice {
    /// `F_{q_1} ⊕ ... ⊕ F_{q_s}`.
    Fields,
    /// `Z_d`.
    Zd,
}

impl RingChoice {
    pub fn spec(self, d: u64) -> RingSpec {
        match self {
            RingChoice::Fields => RingSpec::fields(d),
            RingChoice::Zd => RingSpec::integers_mod(d),
        }
    }
}

pub fn build_family(d: u64, choice: RingChoice) -> Result<Family> {
    build_family_with(d, choice, false)
}

/// Like [`build_family`]; with `allow_single` a fields ring whose smallest
/// component is `F_2` yields the one-basis family `{1}` instead of an error.
pub fn build_family_with(d: u64, choice: RingChoice, allow_single: bool) -> Result<Family> {
    if d < 2 {
        return Err(Error::TooSmall(format!("d = {d}; need d ≥ 2")));
    }
    let ring = Ring::new(choice.spec(d))?;
    let set = match choice {
        RingChoice::Fields => match direct_sum_unit_set(&ring) {
            Ok(set) => set,
            Err(Error::NotApplicable(_)) if allow_single => vec![ring.one()],
            Err(e) => return Err(e),
        },
        RingChoice::Zd => integer_baseline_set(&ring),
    };
    if set.is_empty() {
        return Err(Error::TooSmall("no set elements".into()));
    }
    family_for_set(&ring, set)
}

/// Builds one basis per element of `set` after checking the set condition.
pub fn family_for_set(ring: &Ring, set: Vec<RingElement>) -> Result<Family> {
    validate_set_condition(ring, &set).map_err(|v| Error::InvalidSet(v.to_string()))?;
    family_unchecked(ring, set)
}

/// Builds bases for any set of units, skipping the pairwise difference
/// check. The result need not be mutually unbiased.
pub fn family_unchecked(ring: &Ring, set: Vec<RingElement>) -> Result<Family> {
    if let Some(b) = set.iter().find(|b| !ring.is_unit(b)) {
        return Err(Error::NotAUnit(b.to_string()));
    }
    if !ring.check_generic() {
        return Err(Error::NonGenericCharacter);
    }
    // Fill the shared tables before fanning out.
    let _ = ring.elements();
    let bases = set.par_iter().map(|b| basis_unchecked(ring, b)).collect();
    Ok(Family {
        ring: ring.clone(),
        set,
        bases,
    })
}
