//! JSON file format for families. Phases travel as integer pairs so the
//! exact verification path survives a round trip through disk.
//!
//! ```json
//! {"format_version":1,"d":3,
//!  "ring":{"components":[{"kind":"field","p":3,"a":1,"modulus":[]}]},
//!  "set":[[[1]],[[2]]],
//!  "bases":[{"b":[[1]],"states":[{"xi":[[0]],"eta":[[0]],"entries":[[0,0,1],[4,0,1],[8,0,1]]}, ...]}]}
//! ```
//!
//! Elements are nested coefficient lists in component order; entries are
//! `[flat_index, phase_num, phase_den]` sorted by flat index.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::phase::Phase;
use crate::ring::{Component, ComponentKind, ComponentSpec, Ring, RingElement, RingSpec};
use crate::verify::to_dense;
use crate::weyl::{Family, MEBasis, SparseState};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("unsupported format_version {0}")]
    Version(u32),

    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub format_version: u32,
    pub d: usize,
    pub ring: RingFile,
    pub set: Vec<RingElement>,
    pub bases: Vec<BasisFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingFile {
    pub components: Vec<ComponentFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentFile {
    pub kind: ComponentKind,
    pub p: u64,
    pub a: u32,
    /// Lower coefficients of the field modulus; empty for prime fields and
    /// residue rings.
    pub modulus: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisFile {
    pub b: RingElement,
    pub states: Vec<StateFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub xi: RingElement,
    pub eta: RingElement,
    pub entries: Vec<[u64; 3]>,
}

impl FamilyFile {
    pub fn from_family(family: &Family) -> Self {
        let ring = family.ring();
        let components = ring
            .components()
            .iter()
            .map(|c| {
                let spec = c.spec();
                ComponentFile {
                    kind: spec.kind,
                    p: spec.p,
                    a: spec.a,
                    modulus: match c {
                        Component::Field(f) => f.modulus().to_vec(),
                        Component::ModRing { .. } => Vec::new(),
                    },
                }
            })
            .collect();
        let bases = family
            .bases()
            .iter()
            .map(|basis| BasisFile {
                b: basis.b().clone(),
                states: basis
                    .states()
                    .iter()
                    .map(|s| StateFile {
                        xi: s.xi().clone(),
                        eta: s.eta().clone(),
                        entries: s
                            .entries()
                            .iter()
                            .map(|&(i, ph)| [i as u64, ph.num(), ph.den()])
                            .collect(),
                    })
                    .collect(),
            })
            .collect();
        Self {
            format_version: FORMAT_VERSION,
            d: family.d(),
            ring: RingFile { components },
            set: family.set().to_vec(),
            bases,
        }
    }

    pub fn to_family(&self) -> Result<Family, FormatError> {
        if self.format_version != FORMAT_VERSION {
            return Err(FormatError::Version(self.format_version));
        }
        let invalid = |msg: String| FormatError::Invalid(msg);
        let spec = RingSpec::new(
            self.ring
                .components
                .iter()
                .map(|c| ComponentSpec {
                    p: c.p,
                    a: c.a,
                    kind: c.kind,
                })
                .collect(),
        );
        let moduli = self
            .ring
            .components
            .iter()
            .map(|c| match c.kind {
                ComponentKind::Field => Some(c.modulus.clone()),
                ComponentKind::ModRing => (!c.modulus.is_empty()).then(|| c.modulus.clone()),
            })
            .collect();
        let ring = Ring::with_moduli(spec, moduli).map_err(|e| invalid(format!("ring: {e}")))?;
        if ring.d() != self.d {
            return Err(invalid(format!(
                "d = {} but the ring has {} elements",
                self.d,
                ring.d()
            )));
        }
        let element = |x: &RingElement, what: &str| {
            if ring.contains(x) {
                Ok(x.clone())
            } else {
                Err(invalid(format!(
                    "{what} {x:?} is not an element of the ring"
                )))
            }
        };
        let set = self
            .set
            .iter()
            .map(|x| element(x, "set element"))
            .collect::<Result<Vec<_>, _>>()?;
        let bases = self
            .bases
            .iter()
            .enumerate()
            .map(|(k, basis)| {
                let states = basis
                    .states
                    .iter()
                    .map(|s| {
                        let entries = s
                            .entries
                            .iter()
                            .map(|&[i, num, den]| {
                                if den == 0 {
                                    Err(invalid(format!("basis #{k}: zero phase denominator")))
                                } else {
                                    Ok((i as usize, Phase::new(num, den)))
                                }
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        SparseState::new(
                            self.d,
                            element(&s.xi, "xi")?,
                            element(&s.eta, "eta")?,
                            entries,
                        )
                        .map_err(|e| invalid(format!("basis #{k}: {e}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                MEBasis::new(element(&basis.b, "b")?, states)
                    .map_err(|e| invalid(format!("basis #{k}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Family::from_parts(ring, set, bases).map_err(|e| invalid(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("family files always serialize");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn serialize_family(family: &Family) -> String {
    FamilyFile::from_family(family).to_json()
}

pub fn parse_family(text: &str) -> Result<Family, FormatError> {
    FamilyFile::parse(text)?.to_family()
}

/// Dense amplitudes as `[re, im]` pairs with 17 significant digits, one
/// array of `d²` pairs per state.
pub fn write_dense<W: Write>(family: &Family, out: &mut W) -> io::Result<()> {
    let d = family.d();
    write!(out, "{{\"d\":{d},\"bases\":[")?;
    for (k, basis) in family.bases().iter().enumerate() {
        if k > 0 {
            out.write_all(b",")?;
        }
        write!(
            out,
            "{{\"b\":{},\"states\":[",
            serde_json::to_string(basis.b())?
        )?;
        for (n, state) in basis.states().iter().enumerate() {
            if n > 0 {
                out.write_all(b",")?;
            }
            write!(
                out,
                "{{\"xi\":{},\"eta\":{},\"amplitudes\":[",
                serde_json::to_string(state.xi())?,
                serde_json::to_string(state.eta())?
            )?;
            for (i, z) in to_dense(state).amplitudes.iter().enumerate() {
                if i > 0 {
                    out.write_all(b",")?;
                }
                write!(out, "[{:.16e},{:.16e}]", z.re, z.im)?;
            }
            out.write_all(b"]}")?;
        }
        out.write_all(b"]}")?;
    }
    out.write_all(b"]}\n")
}
