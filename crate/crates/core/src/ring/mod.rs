//! Finite commutative rings built as direct sums of `F_{p^a}` and `Z_{p^a}`,
//! together with the trace-based additive character.
//!
//! Elements are enumerated mixed-radix with the first component most
//! significant; inside a component, field elements are ordered by
//! `Σ c_j p^j` and residues by value. Index 0 is always the zero element.

mod component;
mod poly;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

pub use component::{Component, ComponentKind, ComponentSpec, FieldComponent};
pub use poly::{factorize, find_irreducible, is_irreducible, is_prime};

use crate::error::{Error, Result};
use crate::phase::Phase;

/// Ordered list of direct summands. The ring has `d = Π p^a` elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingSpec {
    pub components: Vec<ComponentSpec>,
}

impl RingSpec {
    pub fn new(components: Vec<ComponentSpec>) -> Self {
        Self { components }
    }

    /// `F_{q_1} ⊕ ... ⊕ F_{q_s}` for the prime-power factorization of `d`.
    pub fn fields(d: u64) -> Self {
        Self::from_factorization(d, ComponentKind::Field)
    }

    /// `Z_d`, written as `Z_{q_1} ⊕ ... ⊕ Z_{q_s}`.
    pub fn integers_mod(d: u64) -> Self {
        Self::from_factorization(d, ComponentKind::ModRing)
    }

    fn from_factorization(d: u64, kind: ComponentKind) -> Self {
        let mut components: Vec<_> = factorize(d)
            .into_iter()
            .map(|(p, a)| ComponentSpec { p, a, kind })
            .collect();
        components.sort_by_key(ComponentSpec::order_key);
        Self { components }
    }

    pub fn d(&self) -> u64 {
        self.components.iter().map(ComponentSpec::size).product()
    }

    /// Checks primality and canonical order.
    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(Error::BadSpec("a ring needs at least one component".into()));
        }
        for c in &self.components {
            if !is_prime(c.p) {
                return Err(Error::NonPrime(c.p));
            }
            if c.a == 0 {
                return Err(Error::BadSpec(format!(
                    "component over {} has exponent 0",
                    c.p
                )));
            }
        }
        if let Some(w) = self
            .components
            .windows(2)
            .find(|w| w[0].order_key() > w[1].order_key())
        {
            return Err(Error::BadSpec(format!(
                "components out of canonical order: {}^{} before {}^{}",
                w[0].p, w[0].a, w[1].p, w[1].a
            )));
        }
        Ok(())
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| {
                let letter = match c.kind {
                    ComponentKind::Field => "F",
                    ComponentKind::ModRing => "Z",
                };
                format!("{letter}_{}", c.size())
            })
            .collect();
        f.write_str(&parts.join("⊕"))
    }
}

/// An element: one coefficient vector per component. Field parts have
/// length `a`, residue parts have length 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RingElement {
    pub parts: Vec<Vec<u64>>,
}

impl RingElement {
    pub fn new(parts: Vec<Vec<u64>>) -> Self {
        Self { parts }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| format_part(p)).collect();
        if parts.len() == 1 {
            f.write_str(&parts[0])
        } else {
            write!(f, "({})", parts.join(","))
        }
    }
}

fn format_part(coeffs: &[u64]) -> String {
    if coeffs.len() == 1 {
        return coeffs[0].to_string();
    }
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(j, &c)| match (j, c) {
            (0, c) => c.to_string(),
            (1, 1) => "t".into(),
            (1, c) => format!("{c}t"),
            (j, 1) => format!("t^{j}"),
            (j, c) => format!("{c}t^{j}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
}

#[derive(Debug)]
struct Tables {
    elements: Vec<RingElement>,
    add: Vec<u32>,
    mul: Vec<u32>,
    character: Vec<Phase>,
}

/// A constructed ring. Immutable; cheap to clone.
#[derive(Debug, Clone)]
pub struct Ring {
    spec: RingSpec,
    components: Vec<Component>,
    d: usize,
    tables: Arc<OnceLock<Tables>>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.components == other.components
    }
}

impl Eq for Ring {}

impl Ring {
    /// Builds the ring, choosing the minimal irreducible modulus for each
    /// field component.
    pub fn new(spec: RingSpec) -> Result<Self> {
        spec.validate()?;
        let components = spec.components.iter().map(Component::from_spec).collect();
        Ok(Self::assemble(spec, components))
    }

    /// Builds the ring with explicit field moduli (lower coefficients),
    /// one entry per component; residue components take `None`.
    pub fn with_moduli(spec: RingSpec, moduli: Vec<Option<Vec<u64>>>) -> Result<Self> {
        spec.validate()?;
        if moduli.len() != spec.components.len() {
            return Err(Error::BadSpec(
                "one modulus entry per component is required".into(),
            ));
        }
        let components = spec
            .components
            .iter()
            .zip(moduli)
            .map(|(c, m)| match (c.kind, m) {
                (ComponentKind::Field, Some(m)) => {
                    FieldComponent::with_modulus(c.p, c.a, m).map(Component::Field)
                }
                (ComponentKind::Field, None) => Ok(Component::from_spec(c)),
                (ComponentKind::ModRing, None) => Ok(Component::from_spec(c)),
                (ComponentKind::ModRing, Some(m)) if m.is_empty() => Ok(Component::from_spec(c)),
                (ComponentKind::ModRing, Some(_)) => {
                    Err(Error::BadSpec("residue components take no modulus".into()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::assemble(spec, components))
    }

    fn assemble(spec: RingSpec, components: Vec<Component>) -> Self {
        let d = spec.d() as usize;
        Self {
            spec,
            components,
            d,
            tables: Arc::new(OnceLock::new()),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Common denominator of every character value.
    pub fn character_modulus(&self) -> u64 {
        self.components
            .iter()
            .fold(1, |acc, c| acc.lcm(&c.character_modulus()))
    }

    pub fn contains(&self, x: &RingElement) -> bool {
        x.parts.len() == self.components.len()
            && self
                .components
                .iter()
                .zip(&x.parts)
                .all(|(c, p)| c.is_valid(p))
    }

    fn check(&self, x: &RingElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch)
        }
    }

    pub fn zero(&self) -> RingElement {
        RingElement::new(self.components.iter().map(Component::zero).collect())
    }

    pub fn one(&self) -> RingElement {
        self.from_integer(1)
    }

    /// The image of `n` under `Z -> R`.
    pub fn from_integer(&self, n: u64) -> RingElement {
        RingElement::new(self.components.iter().map(|c| c.integer_image(n)).collect())
    }

    fn zip_with(
        &self,
        x: &RingElement,
        y: &RingElement,
        f: impl Fn(&Component, &[u64], &[u64]) -> Vec<u64>,
    ) -> RingElement {
        debug_assert!(self.contains(x) && self.contains(y));
        RingElement::new(
            self.components
                .iter()
                .zip(x.parts.iter().zip(&y.parts))
                .map(|(c, (a, b))| f(c, a, b))
                .collect(),
        )
    }

    pub fn add(&self, x: &RingElement, y: &RingElement) -> RingElement {
        self.zip_with(x, y, Component::add)
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> RingElement {
        self.zip_with(x, y, Component::mul)
    }

    pub fn neg(&self, x: &RingElement) -> RingElement {
        debug_assert!(self.contains(x));
        RingElement::new(
            self.components
                .iter()
                .zip(&x.parts)
                .map(|(c, a)| c.neg(a))
                .collect(),
        )
    }

    pub fn sub(&self, x: &RingElement, y: &RingElement) -> RingElement {
        self.add(x, &self.neg(y))
    }

    /// Checked arithmetic; `y` is ignored for [`ArithOp::Neg`].
    pub fn arith(
        &self,
        op: ArithOp,
        x: &RingElement,
        y: Option<&RingElement>,
    ) -> Result<RingElement> {
        self.check(x)?;
        let rhs = || -> Result<&RingElement> {
            let y = y.ok_or(Error::ShapeMismatch)?;
            self.check(y)?;
            Ok(y)
        };
        Ok(match op {
            ArithOp::Add => self.add(x, rhs()?),
            ArithOp::Sub => self.sub(x, rhs()?),
            ArithOp::Mul => self.mul(x, rhs()?),
            ArithOp::Neg => self.neg(x),
        })
    }

    pub fn invert(&self, x: &RingElement) -> Result<RingElement> {
        self.check(x)?;
        self.components
            .iter()
            .zip(&x.parts)
            .map(|(c, a)| c.inverse(a))
            .collect::<Option<Vec<_>>>()
            .map(RingElement::new)
            .ok_or_else(|| Error::NotAUnit(x.to_string()))
    }

    pub fn is_unit(&self, x: &RingElement) -> bool {
        self.contains(x)
            && self
                .components
                .iter()
                .zip(&x.parts)
                .all(|(c, a)| c.is_unit(a))
    }

    /// `λ(x) = Σ_i λ_i(x_i)`, with field parts contributing `T_i(x_i)/p_i`
    /// and residue parts `x_i/p_i^{a_i}`.
    pub fn character(&self, x: &RingElement) -> Phase {
        debug_assert!(self.contains(x));
        self.components
            .iter()
            .zip(&x.parts)
            .map(|(c, a)| c.character(a))
            .sum()
    }

    /// Enumeration index of `x`.
    pub fn index_of(&self, x: &RingElement) -> usize {
        debug_assert!(self.contains(x));
        self.components
            .iter()
            .zip(&x.parts)
            .fold(0u64, |acc, (c, a)| acc * c.size() + c.encode(a)) as usize
    }

    /// The element at enumeration index `i < d`.
    pub fn element(&self, i: usize) -> RingElement {
        assert!(
            i < self.d,
            "index {i} out of range for a ring of size {}",
            self.d
        );
        let mut rest = i as u64;
        let mut parts: Vec<Vec<u64>> = self
            .components
            .iter()
            .rev()
            .map(|c| {
                let code = rest % c.size();
                rest /= c.size();
                c.decode(code)
            })
            .collect();
        parts.reverse();
        RingElement::new(parts)
    }

    fn tables(&self) -> &Tables {
        self.tables.get_or_init(|| {
            let elements: Vec<RingElement> = (0..self.d).map(|i| self.element(i)).collect();
            let mut add = Vec::with_capacity(self.d * self.d);
            let mut mul = Vec::with_capacity(self.d * self.d);
            for x in &elements {
                for y in &elements {
                    add.push(self.index_of(&self.add(x, y)) as u32);
                    mul.push(self.index_of(&self.mul(x, y)) as u32);
                }
            }
            let character = elements.iter().map(|x| self.character(x)).collect();
            Tables {
                elements,
                add,
                mul,
                character,
            }
        })
    }

    /// All elements in enumeration order.
    pub fn elements(&self) -> &[RingElement] {
        &self.tables().elements
    }

    /// Index of `x + y` given indices.
    pub fn add_index(&self, i: usize, j: usize) -> usize {
        self.tables().add[i * self.d + j] as usize
    }

    /// Index of `x · y` given indices.
    pub fn mul_index(&self, i: usize, j: usize) -> usize {
        self.tables().mul[i * self.d + j] as usize
    }

    pub fn character_at(&self, i: usize) -> Phase {
        self.tables().character[i]
    }

    /// Units in enumeration order.
    pub fn list_units(&self) -> Vec<RingElement> {
        self.elements()
            .iter()
            .filter(|x| self.is_unit(x))
            .cloned()
            .collect()
    }

    pub fn unit_count(&self) -> u64 {
        self.spec
            .components
            .iter()
            .map(|c| match c.kind {
                ComponentKind::Field => c.size() - 1,
                ComponentKind::ModRing => c.size() - c.size() / c.p,
            })
            .product()
    }

    /// Exact check that `Σ_r λ(a·r) = 0` for every nonzero `a`.
    ///
    /// The sum factors over components, and a component with `a_i = 0`
    /// contributes its size. So for each `a ≠ 0` it suffices to find one
    /// component with `a_i ≠ 0` whose scaled sum is certified zero by
    /// [`Component::scaled_sum_vanishes`]. No floating point is used.
    pub fn check_generic(&self) -> bool {
        let certified: Vec<Vec<bool>> = self
            .components
            .iter()
            .map(|c| {
                (0..c.size())
                    .map(|code| code != 0 && c.scaled_sum_vanishes(&c.decode(code)))
                    .collect()
            })
            .collect();
        (1..self.d).all(|i| {
            let a = self.element(i);
            self.components
                .iter()
                .zip(&a.parts)
                .zip(&certified)
                .any(|((c, part), cert)| cert[c.encode(part) as usize])
        })
    }
}
