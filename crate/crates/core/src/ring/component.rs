use serde::{Deserialize, Serialize};

use super::poly::{digits, find_irreducible, is_irreducible, mod_inverse};
use crate::error::{Error, Result};
use crate::phase::Phase;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    /// The field `F_{p^a}`.
    Field,
    /// The integers modulo `p^a`.
    ModRing,
}

/// One direct summand `F_{p^a}` or `Z_{p^a}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub p: u64,
    pub a: u32,
    pub kind: ComponentKind,
}

impl ComponentSpec {
    pub fn field(p: u64, a: u32) -> Self {
        Self {
            p,
            a,
            kind: ComponentKind::Field,
        }
    }

    pub fn mod_ring(p: u64, a: u32) -> Self {
        Self {
            p,
            a,
            kind: ComponentKind::ModRing,
        }
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.a)
    }

    /// Key for the canonical component order.
    pub(crate) fn order_key(&self) -> (u64, u64, ComponentKind) {
        (self.size(), self.p, self.kind)
    }
}

/// `F_{p^a}` as `Z_p[t]/(f)` for a monic irreducible `f` of degree `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldComponent {
    p: u64,
    a: u32,
    modulus: Vec<u64>,
}

impl FieldComponent {
    pub fn new(p: u64, a: u32) -> Self {
        Self {
            p,
            a,
            modulus: find_irreducible(p, a),
        }
    }

    /// Uses the given lower coefficients `c_0..c_{a-1}` of the modulus.
    pub fn with_modulus(p: u64, a: u32, modulus: Vec<u64>) -> Result<Self> {
        if modulus.len() != if a == 1 { 0 } else { a as usize } || modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadSpec(format!(
                "modulus {modulus:?} has the wrong shape for F_{p}^{a}"
            )));
        }
        if a > 1 {
            let mut full = modulus.clone();
            full.push(1);
            if !is_irreducible(&full, p) {
                return Err(Error::BadSpec(format!(
                    "modulus {modulus:?} is reducible over Z_{p}"
                )));
            }
        }
        Ok(Self { p, a, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.a
    }

    /// Lower coefficients of the modulus; empty for a prime field.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).map(|(a, b)| (a + b) % self.p).collect()
    }

    fn neg(&self, x: &[u64]) -> Vec<u64> {
        x.iter().map(|&a| (self.p - a) % self.p).collect()
    }

    fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let p = self.p;
        let n = self.a as usize;
        if n == 1 {
            return vec![x[0] * y[0] % p];
        }
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        // t^n = -(c_0 + ... + c_{n-1} t^{n-1})
        for k in (n..prod.len()).rev() {
            let top = prod[k];
            if top == 0 {
                continue;
            }
            prod[k] = 0;
            for (j, &c) in self.modulus.iter().enumerate() {
                let idx = k - n + j;
                prod[idx] = (prod[idx] + p - top * c % p) % p;
            }
        }
        prod.truncate(n);
        prod
    }

    fn pow(&self, x: &[u64], mut e: u64) -> Vec<u64> {
        let mut result = self.one();
        let mut base = x.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.a as usize];
        v[0] = 1;
        v
    }

    /// Absolute trace `x + x^p + ... + x^{p^{a-1}}`, an element of `Z_p`.
    pub fn trace(&self, x: &[u64]) -> u64 {
        let mut acc = x.to_vec();
        let mut frob = x.to_vec();
        for _ in 1..self.a {
            frob = self.pow(&frob, self.p);
            acc = self.add(&acc, &frob);
        }
        debug_assert!(
            acc[1..].iter().all(|&c| c == 0),
            "trace must land in the prime field"
        );
        acc[0]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Component {
    Field(FieldComponent),
    ModRing { p: u64, a: u32 },
}

impl Component {
    pub fn from_spec(spec: &ComponentSpec) -> Self {
        match spec.kind {
            ComponentKind::Field => Component::Field(FieldComponent::new(spec.p, spec.a)),
            ComponentKind::ModRing => Component::ModRing {
                p: spec.p,
                a: spec.a,
            },
        }
    }

    pub fn spec(&self) -> ComponentSpec {
        match self {
            Component::Field(f) => ComponentSpec::field(f.p, f.a),
            Component::ModRing { p, a } => ComponentSpec::mod_ring(*p, *a),
        }
    }

    pub fn size(&self) -> u64 {
        self.spec().size()
    }

    /// Number of coefficients in a part.
    pub fn width(&self) -> usize {
        match self {
            Component::Field(f) => f.a as usize,
            Component::ModRing { .. } => 1,
        }
    }

    /// Denominator of the component character.
    pub fn character_modulus(&self) -> u64 {
        match self {
            Component::Field(f) => f.p,
            Component::ModRing { p, a } => p.pow(*a),
        }
    }

    pub(crate) fn is_valid(&self, part: &[u64]) -> bool {
        match self {
            Component::Field(f) => part.len() == f.a as usize && part.iter().all(|&c| c < f.p),
            Component::ModRing { p, a } => part.len() == 1 && part[0] < p.pow(*a),
        }
    }

    pub(crate) fn zero(&self) -> Vec<u64> {
        vec![0; self.width()]
    }

    pub(crate) fn integer_image(&self, n: u64) -> Vec<u64> {
        match self {
            Component::Field(f) => {
                let mut v = vec![0; f.a as usize];
                v[0] = n % f.p;
                v
            }
            Component::ModRing { p, a } => vec![n % p.pow(*a)],
        }
    }

    pub(crate) fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        match self {
            Component::Field(f) => f.add(x, y),
            Component::ModRing { p, a } => vec![(x[0] + y[0]) % p.pow(*a)],
        }
    }

    pub(crate) fn neg(&self, x: &[u64]) -> Vec<u64> {
        match self {
            Component::Field(f) => f.neg(x),
            Component::ModRing { p, a } => {
                let q = p.pow(*a);
                vec![(q - x[0]) % q]
            }
        }
    }

    pub(crate) fn mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        match self {
            Component::Field(f) => f.mul(x, y),
            Component::ModRing { p, a } => vec![x[0] * y[0] % p.pow(*a)],
        }
    }

    pub(crate) fn inverse(&self, x: &[u64]) -> Option<Vec<u64>> {
        match self {
            Component::Field(f) => {
                if x.iter().all(|&c| c == 0) {
                    None
                } else {
                    Some(f.pow(x, f.p.pow(f.a) - 2))
                }
            }
            Component::ModRing { p, a } => mod_inverse(x[0], p.pow(*a)).map(|y| vec![y]),
        }
    }

    pub(crate) fn is_unit(&self, x: &[u64]) -> bool {
        match self {
            Component::Field(_) => x.iter().any(|&c| c != 0),
            Component::ModRing { p, .. } => !x[0].is_multiple_of(*p),
        }
    }

    /// Numerator of the component character over [`Self::character_modulus`].
    pub(crate) fn character_numerator(&self, x: &[u64]) -> u64 {
        match self {
            Component::Field(f) => f.trace(x),
            Component::ModRing { .. } => x[0],
        }
    }

    pub(crate) fn character(&self, x: &[u64]) -> Phase {
        Phase::new(self.character_numerator(x), self.character_modulus())
    }

    /// Position in the component enumeration: `Σ c_j p^j` or the residue.
    pub(crate) fn encode(&self, x: &[u64]) -> u64 {
        match self {
            Component::Field(f) => x.iter().rev().fold(0, |acc, &c| acc * f.p + c),
            Component::ModRing { .. } => x[0],
        }
    }

    pub(crate) fn decode(&self, code: u64) -> Vec<u64> {
        match self {
            Component::Field(f) => digits(code, f.p, f.a as usize),
            Component::ModRing { .. } => vec![code],
        }
    }

    /// Exact test that `Σ_x λ(c·x)` over this component is zero.
    ///
    /// Character values are `N`-th roots of unity with `N = p^e`. An integer
    /// combination `Σ n_k ζ_N^k` vanishes iff `n_k = n_{k + N/p}` for all `k`,
    /// because the minimal polynomial of `ζ_N` is `Φ_p(x^{N/p})`.
    pub(crate) fn scaled_sum_vanishes(&self, c: &[u64]) -> bool {
        let n = self.character_modulus();
        let mut histogram = vec![0u64; n as usize];
        for code in 0..self.size() {
            let x = self.decode(code);
            histogram[self.character_numerator(&self.mul(c, &x)) as usize] += 1;
        }
        let p = self.spec().p;
        let stride = (n / p) as usize;
        (0..stride).all(|j| {
            let first = histogram[j];
            (1..p as usize).all(|k| histogram[j + k * stride] == first)
        })
    }
}
