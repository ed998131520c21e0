//! Exhaustive invariant sweeps returning the first counterexample.

use mumeb::format::{parse_family, serialize_family};
use mumeb::ring::{Component, FieldComponent, Ring, RingSpec};
use mumeb::weyl::{build_family_with, perm_unitary, RingChoice};

use super::constructible_rings;

pub type Outcome = Result<usize, String>;

/// `λ(x + y) = λ(x) + λ(y)` for every pair in every ring up to `max_d`.
/// Returns the number of rings checked.
pub fn character_homomorphism(max_d: u64) -> Outcome {
    let rings = constructible_rings(max_d);
    for ring in &rings {
        for x in ring.elements() {
            for y in ring.elements() {
                if ring.character(&ring.add(x, y)) != ring.character(x) + ring.character(y) {
                    return Err(format!("{}: x={x} y={y}", ring.spec()));
                }
            }
        }
    }
    Ok(rings.len())
}

/// Trace additivity over F_9, F_27 and F_25.
pub fn trace_additivity() -> Outcome {
    let fields = [(3, 2), (3, 3), (5, 2)];
    for (p, a) in fields {
        let field = FieldComponent::new(p, a);
        let ring = Ring::new(RingSpec::new(vec![Component::Field(field.clone()).spec()])).unwrap();
        for x in ring.elements() {
            for y in ring.elements() {
                let lhs = field.trace(&ring.add(x, y).parts[0]);
                let rhs = (field.trace(&x.parts[0]) + field.trace(&y.parts[0])) % p;
                if lhs != rhs {
                    return Err(format!("F_{}: x={x} y={y}", p.pow(a)));
                }
            }
        }
    }
    Ok(fields.len())
}

/// `U^(a)U^(b) = U^(ab)` for all unit pairs in every ring up to `max_d`.
pub fn permutation_group_law(max_d: u64) -> Outcome {
    let rings = constructible_rings(max_d);
    for ring in &rings {
        let units = ring.list_units();
        let perms: Vec<_> = units
            .iter()
            .map(|u| perm_unitary(ring, u).unwrap())
            .collect();
        for (a, pa) in units.iter().zip(&perms) {
            for (b, pb) in units.iter().zip(&perms) {
                let pab = perm_unitary(ring, &ring.mul(a, b)).unwrap();
                if pa.compose(pb) != pab.images() {
                    return Err(format!("{}: a={a} b={b}", ring.spec()));
                }
            }
        }
    }
    Ok(rings.len())
}

/// Serialize, parse, serialize is byte-identical for both modes up to `max_d`.
pub fn serialization_round_trip(max_d: u64) -> Outcome {
    let mut count = 0;
    for d in 2..=max_d {
        for choice in [RingChoice::Fields, RingChoice::Zd] {
            let family = build_family_with(d, choice, true).map_err(|e| format!("d={d}: {e}"))?;
            let text = serialize_family(&family);
            let back = parse_family(&text).map_err(|e| format!("d={d}: {e}"))?;
            if back != family || serialize_family(&back) != text {
                return Err(format!("d={d} {choice:?}: round trip differs"));
            }
            count += 1;
        }
    }
    Ok(count)
}
