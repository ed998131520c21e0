//! Test-only oracles, kept independent of the library's algorithms.

#![allow(dead_code)]

pub mod invariants;

use mumeb::ring::{is_prime, ComponentKind, ComponentSpec, Ring, RingSpec};
use num_complex::Complex64;

/// Every ring `make_ring` accepts with `2 <= d <= max_d`: all multisets of
/// prime-power summands, each either a field or a residue ring, listed in
/// canonical order.
pub fn constructible_rings(max_d: u64) -> Vec<Ring> {
    let mut summands = Vec::new();
    for p in (2..=max_d).filter(|&p| is_prime(p)) {
        let mut a = 1;
        while p.pow(a) <= max_d {
            summands.push(ComponentSpec::field(p, a));
            summands.push(ComponentSpec::mod_ring(p, a));
            a += 1;
        }
    }
    summands.sort_by_key(|c| (c.size(), c.p, c.kind));
    let mut out = Vec::new();
    extend(&summands, 0, &mut Vec::new(), 1, max_d, &mut out);
    out.sort_by_key(|r| r.d());
    out
}

fn extend(
    summands: &[ComponentSpec],
    from: usize,
    current: &mut Vec<ComponentSpec>,
    product: u64,
    max_d: u64,
    out: &mut Vec<Ring>,
) {
    if !current.is_empty() {
        out.push(Ring::new(RingSpec::new(current.clone())).expect("canonical by construction"));
    }
    for (k, c) in summands.iter().enumerate().skip(from) {
        if product * c.size() > max_d {
            continue;
        }
        current.push(*c);
        extend(summands, k, current, product * c.size(), max_d, out);
        current.pop();
    }
}

/// Fields-mode and Zd-mode rings for every `2 <= d <= max_d`.
pub fn mode_rings(max_d: u64) -> Vec<(u64, &'static str, Ring)> {
    (2..=max_d)
        .flat_map(|d| {
            [
                (d, "fields", Ring::new(RingSpec::fields(d)).unwrap()),
                (d, "zd", Ring::new(RingSpec::integers_mod(d)).unwrap()),
            ]
        })
        .collect()
}

pub fn has_field_of_size_two(ring: &Ring) -> bool {
    ring.spec()
        .components
        .iter()
        .any(|c| c.size() == 2 && c.kind == ComponentKind::Field)
}

/// `|Σ_r exp(2πi λ(a r))|` in floating point.
pub fn float_character_sum(ring: &Ring, a: usize) -> f64 {
    let a = ring.element(a);
    let sum: Complex64 = ring
        .elements()
        .iter()
        .map(|r| {
            let ph = ring.character(&ring.mul(&a, r));
            Complex64::from_polar(
                1.0,
                std::f64::consts::TAU * ph.num() as f64 / ph.den() as f64,
            )
        })
        .sum();
    sum.norm()
}

/// Largest subset of units with pairwise unit differences, by enumerating
/// every subset. Returns the size and the lexicographically smallest
/// maximum subset as unit positions.
pub fn brute_force_max_set(ring: &Ring) -> (usize, Vec<usize>) {
    let units = ring.list_units();
    let n = units.len();
    assert!(n <= 20, "brute force limited to 20 units");
    let mut adj = vec![0u32; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && ring.is_unit(&ring.sub(&units[i], &units[j])) {
                adj[i] |= 1 << j;
            }
        }
    }
    let mut best: Option<Vec<usize>> = None;
    for mask in 1u32..(1u32 << n) {
        let members: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let ok = members.iter().all(|&i| (mask & !(1 << i)) & !adj[i] == 0);
        if !ok {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => members.len() > b.len() || (members.len() == b.len() && members < *b),
        };
        if better {
            best = Some(members);
        }
    }
    let best = best.unwrap_or_default();
    (best.len(), best)
}

pub fn smallest_prime_factor(d: u64) -> u64 {
    (2..=d).find(|p| d.is_multiple_of(*p)).unwrap()
}

pub fn smallest_component(ring: &Ring) -> u64 {
    ring.spec()
        .components
        .iter()
        .map(|c| c.size())
        .min()
        .unwrap()
}
