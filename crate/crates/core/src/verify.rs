//! Certification of bases and families.
//!
//! Two independent routes: a numeric brute force over every pair of states
//! (dense amplitudes, tolerance based), and an exact route that never leaves
//! ring arithmetic. For `U^(a)` and `U^(b)` the cross overlap reduces to
//! counting solutions of `c·r = r + η` with `c = a⁻¹b`, so the pair is
//! unbiased exactly when `c − 1` is a unit.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Ring, RingElement};
use crate::weyl::{Family, MEBasis, SparseState};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    pub amplitudes: Vec<Complex64>,
}

impl DenseState {
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }
}

fn sparse_amplitudes(state: &SparseState) -> Vec<(usize, Complex64)> {
    let scale = 1.0 / (state.d() as f64).sqrt();
    state
        .entries()
        .iter()
        .map(|&(i, phase)| (i, phase.to_complex() * scale))
        .collect()
}

pub fn to_dense(state: &SparseState) -> DenseState {
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); state.d() * state.d()];
    for (i, z) in sparse_amplitudes(state) {
        amplitudes[i] = z;
    }
    DenseState { amplitudes }
}

/// `⟨u|v⟩`, conjugate-linear in `u`.
pub fn inner_product(u: &DenseState, v: &DenseState) -> Result<Complex64> {
    if u.amplitudes.len() != v.amplitudes.len() {
        return Err(Error::DimensionMismatch {
            left: u.amplitudes.len(),
            right: v.amplitudes.len(),
        });
    }
    Ok(u.amplitudes
        .iter()
        .zip(&v.amplitudes)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Largest numeric deviation seen; absent for exact checks.
    pub worst_deviation: Option<f64>,
    /// Number of violating items (state pairs, states, basis pairs).
    pub failures: u64,
    /// Labels locating the worst or first failing item.
    pub witness: Option<Vec<String>>,
}

impl Check {
    fn exact(name: impl Into<String>, failures: u64, witness: Option<Vec<String>>) -> Self {
        Self {
            name: name.into(),
            passed: failures == 0,
            worst_deviation: None,
            failures,
            witness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub overall: bool,
    pub tolerance: f64,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(tolerance: f64) -> Self {
        Self {
            overall: true,
            tolerance,
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.overall &= check.passed;
        self.checks.push(check);
    }

    pub fn merge(&mut self, other: Report) {
        for check in other.checks {
            self.push(check);
        }
        self.notes.extend(other.notes);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone, Copy)]
struct Worst {
    deviation: f64,
    pair: (usize, usize),
    failures: u64,
}

impl Worst {
    const NONE: Worst = Worst {
        deviation: f64::NEG_INFINITY,
        pair: (usize::MAX, usize::MAX),
        failures: 0,
    };

    // Larger deviation wins; ties go to the smaller index pair so the
    // result is schedule independent.
    fn merge(self, other: Worst) -> Worst {
        let pick_other = other.deviation > self.deviation
            || (other.deviation == self.deviation && other.pair < self.pair);
        let mut best = if pick_other { other } else { self };
        best.failures = self.failures + other.failures;
        best
    }
}

/// Evaluates `deviation(i, j, ⟨a_i|b_j⟩)` over all state pairs.
fn sweep<F>(a: &MEBasis, b: &MEBasis, tol: f64, deviation: F) -> Worst
where
    F: Fn(usize, usize, Complex64) -> f64 + Sync,
{
    let dim = a.d() * a.d();
    let rhs: Vec<Vec<(usize, Complex64)>> = b.states().par_iter().map(sparse_amplitudes).collect();
    a.states()
        .par_iter()
        .enumerate()
        .map_init(
            || vec![Complex64::new(0.0, 0.0); dim],
            |buf, (i, u)| {
                let lhs = sparse_amplitudes(u);
                for &(k, z) in &lhs {
                    buf[k] = z.conj();
                }
                let mut worst = Worst::NONE;
                for (j, v) in rhs.iter().enumerate() {
                    let z: Complex64 = v.iter().map(|&(k, w)| buf[k] * w).sum();
                    let dev = deviation(i, j, z);
                    worst = worst.merge(Worst {
                        deviation: dev,
                        pair: (i, j),
                        failures: (dev.is_nan() || dev >= tol) as u64,
                    });
                }
                for &(k, _) in &lhs {
                    buf[k] = Complex64::new(0.0, 0.0);
                }
                worst
            },
        )
        .reduce(|| Worst::NONE, Worst::merge)
}

fn pair_witness(a: &MEBasis, b: &MEBasis, (i, j): (usize, usize)) -> Vec<String> {
    vec![
        format!("b={} {}", a.b(), a.states()[i].label()),
        format!("b={} {}", b.b(), b.states()[j].label()),
    ]
}

fn sweep_check(name: String, a: &MEBasis, b: &MEBasis, worst: Worst) -> Check {
    Check {
        name,
        passed: worst.failures == 0,
        worst_deviation: Some(worst.deviation.max(0.0)),
        failures: worst.failures,
        witness: Some(pair_witness(a, b, worst.pair)),
    }
}

/// All `d⁴` inner products against `δ`. The worst pair is always reported.
pub fn check_orthonormal(basis: &MEBasis, tol: f64) -> Report {
    let worst = sweep(basis, basis, tol, |i, j, z| {
        let target = if i == j { 1.0 } else { 0.0 };
        (z - Complex64::new(target, 0.0)).norm()
    });
    let mut report = Report::new(tol);
    report.push(sweep_check(
        format!("orthonormal[b={}]", basis.b()),
        basis,
        basis,
        worst,
    ));
    report
}

/// All `d²×d²` cross moduli against `1/d`.
pub fn check_pair_unbiased(a: &MEBasis, b: &MEBasis, tol: f64) -> Result<Report> {
    if a.d() != b.d() {
        return Err(Error::DimensionMismatch {
            left: a.d(),
            right: b.d(),
        });
    }
    let target = 1.0 / a.d() as f64;
    let worst = sweep(a, b, tol, |_, _, z| (z.norm() - target).abs());
    let mut report = Report::new(tol);
    report.push(sweep_check(
        format!("unbiased[b={},b={}]", a.b(), b.b()),
        a,
        b,
        worst,
    ));
    Ok(report)
}

/// Worst cross deviation `||⟨a_i|b_j⟩| − 1/d|` and its location.
pub fn worst_cross_deviation(a: &MEBasis, b: &MEBasis) -> (f64, (usize, usize)) {
    let target = 1.0 / a.d() as f64;
    let w = sweep(a, b, f64::INFINITY, |_, _, z| (z.norm() - target).abs());
    (w.deviation, w.pair)
}

/// Max-entry deviations of `M·M†` and `M†·M` from `I/d`, where `M` is the
/// `d×d` coefficient matrix with rows indexed by the first factor.
pub fn entanglement_deviations(state: &SparseState) -> (f64, f64) {
    let d = state.d();
    let amps = sparse_amplitudes(state);
    let gram = |key: fn(usize, usize) -> (usize, usize)| {
        // Group entries by the summed-over index, then accumulate products.
        let mut groups: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); d];
        for &(flat, z) in &amps {
            let (outer, inner) = key(flat / d, flat % d);
            groups[inner].push((outer, z));
        }
        let mut g = vec![Complex64::new(0.0, 0.0); d * d];
        for group in &groups {
            for &(i, x) in group {
                for &(j, y) in group {
                    g[i * d + j] += x * y.conj();
                }
            }
        }
        let target = 1.0 / d as f64;
        g.iter()
            .enumerate()
            .map(|(k, z)| {
                let t = if k / d == k % d { target } else { 0.0 };
                (z - Complex64::new(t, 0.0)).norm()
            })
            .fold(0.0, f64::max)
    };
    (gram(|r, s| (r, s)), gram(|r, s| (s, r)))
}

pub fn check_max_entangled(state: &SparseState, tol: f64) -> Report {
    let (dev, _) = entanglement_deviations(state);
    let failed = dev.is_nan() || dev >= tol;
    let mut report = Report::new(tol);
    report.push(Check {
        name: format!("max_entangled[{}]", state.label()),
        passed: !failed,
        worst_deviation: Some(dev),
        failures: failed as u64,
        witness: Some(vec![state.label()]),
    });
    report
}

fn check_basis_entangled(basis: &MEBasis, tol: f64) -> Check {
    let (dev, idx, failures) = basis
        .states()
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let dev = entanglement_deviations(s).0;
            (dev, i, (dev.is_nan() || dev >= tol) as u64)
        })
        .reduce(
            || (f64::NEG_INFINITY, usize::MAX, 0),
            |x, y| {
                let best = if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
                    y
                } else {
                    x
                };
                (best.0, best.1, x.2 + y.2)
            },
        );
    Check {
        name: format!("max_entangled[b={}]", basis.b()),
        passed: failures == 0,
        worst_deviation: Some(dev.max(0.0)),
        failures,
        witness: Some(vec![format!(
            "b={} {}",
            basis.b(),
            basis.states()[idx].label()
        )]),
    }
}

/// Exact verdict for the pair `Φ_{U^(a)}`, `Φ_{U^(b)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCriterion {
    pub unbiased: bool,
    /// `c = a⁻¹·b`.
    pub c: RingElement,
    /// `(c − 1)⁻¹` when it exists: the overlap with label `(ξ, η)` is the
    /// single phase `λ(ξ·η·(c − 1)⁻¹)`.
    pub witness: Option<RingElement>,
}

pub fn exact_pair_criterion(
    ring: &Ring,
    a: &RingElement,
    b: &RingElement,
) -> Result<PairCriterion> {
    let a_inv = ring.invert(a)?;
    if !ring.is_unit(b) {
        return Err(Error::NotAUnit(b.to_string()));
    }
    let c = ring.mul(&a_inv, b);
    let c_minus_one = ring.sub(&c, &ring.one());
    let witness = ring.invert(&c_minus_one).ok();
    Ok(PairCriterion {
        unbiased: witness.is_some(),
        c,
        witness,
    })
}

/// Experimental: the general overlap criterion for arbitrary unitaries.
///
/// `u` and `v` are dense `d×d` row-major matrices with `U|e_r⟩ = Σ_s u_{rs}|e_s⟩`
/// over the ring's enumeration. Returns the worst deviation of
/// `|Σ_r λ(ξr)·ω_{r,r+η}|` from 1 over all `(ξ, η)`, with `W = U†V`.
pub fn unitary_pair_deviation(ring: &Ring, u: &[Complex64], v: &[Complex64]) -> Result<f64> {
    let d = ring.d();
    if u.len() != d * d || v.len() != d * d {
        return Err(Error::DimensionMismatch {
            left: d * d,
            right: u.len().min(v.len()),
        });
    }
    let mut w = vec![Complex64::new(0.0, 0.0); d * d];
    for r in 0..d {
        for s in 0..d {
            w[r * d + s] = (0..d).map(|l| u[l * d + r].conj() * v[l * d + s]).sum();
        }
    }
    let worst = (0..d * d)
        .into_par_iter()
        .map(|k| {
            let (xi, eta) = (k / d, k % d);
            let sum: Complex64 = (0..d)
                .map(|r| {
                    let phase = ring.character_at(ring.mul_index(xi, r)).to_complex();
                    phase * w[r * d + ring.add_index(r, eta)]
                })
                .sum();
            (sum.norm() - 1.0).abs()
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Numeric,
    Both,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub tolerance: f64,
    pub mode: Mode,
    /// Cap on numerically swept basis pairs; pairs are then sampled at
    /// evenly spaced positions of the lexicographic pair list.
    pub max_pairs: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            mode: Mode::Both,
            max_pairs: None,
        }
    }
}

pub fn verify_family(family: &Family, tol: f64, mode: Mode) -> Report {
    verify_family_with(
        family,
        &VerifyOptions {
            tolerance: tol,
            mode,
            max_pairs: None,
        },
    )
}

pub fn verify_family_with(family: &Family, opts: &VerifyOptions) -> Report {
    let mut report = Report::new(opts.tolerance);
    match opts.mode {
        Mode::Exact => report.merge(exact_report(family, opts.tolerance)),
        Mode::Numeric => report.merge(numeric_report(family, opts)),
        Mode::Both => {
            let exact = exact_report(family, opts.tolerance);
            let numeric = numeric_report(family, opts);
            let agree = exact.overall == numeric.overall;
            let verdicts = vec![
                format!("exact={}", verdict(exact.overall)),
                format!("numeric={}", verdict(numeric.overall)),
            ];
            report.merge(exact);
            report.merge(numeric);
            report.push(Check::exact("modes_agree", (!agree) as u64, Some(verdicts)));
        }
    }
    report
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn basis_pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect()
}

fn exact_report(family: &Family, tol: f64) -> Report {
    let ring = family.ring();
    let mut report = Report::new(tol);
    let generic = ring.check_generic();
    report.push(Check::exact("generic_character", (!generic) as u64, None));

    // Stored states must be exactly the construction for their b.
    let mut mismatches = 0u64;
    let mut first = None;
    for (k, (b, basis)) in family.set().iter().zip(family.bases()).enumerate() {
        if basis.b() != b {
            mismatches += 1;
            first.get_or_insert_with(|| {
                vec![format!(
                    "basis #{k} is labelled b={} but set has {b}",
                    basis.b()
                )]
            });
            continue;
        }
        let expected = match crate::weyl::build_basis(ring, b) {
            Ok(basis) => basis,
            Err(e) => {
                mismatches += 1;
                first.get_or_insert_with(|| vec![format!("basis #{k}: {e}")]);
                continue;
            }
        };
        for (got, want) in basis.states().iter().zip(expected.states()) {
            if got != want {
                mismatches += 1;
                first.get_or_insert_with(|| {
                    let flat = got
                        .entries()
                        .iter()
                        .zip(want.entries())
                        .find(|(x, y)| x != y)
                        .map(|(x, _)| x.0.to_string())
                        .unwrap_or_else(|| "label".into());
                    vec![format!("b={b} {}", got.label()), format!("flat={flat}")]
                });
            }
        }
    }
    report.push(Check::exact("states_match_construction", mismatches, first));

    let mut failures = 0u64;
    let mut first = None;
    for (i, j) in basis_pairs(family.set().len()) {
        let (a, b) = (&family.set()[i], &family.set()[j]);
        let note = match exact_pair_criterion(ring, a, b) {
            Ok(PairCriterion { unbiased: true, .. }) => continue,
            Ok(crit) => format!("c−1 = {} is not a unit", ring.sub(&crit.c, &ring.one())),
            Err(e) => e.to_string(),
        };
        failures += 1;
        first.get_or_insert_with(|| vec![format!("b={a}"), format!("b={b}"), note]);
    }
    report.push(Check::exact("exact_pair_criterion", failures, first));
    report
}

fn numeric_report(family: &Family, opts: &VerifyOptions) -> Report {
    let tol = opts.tolerance;
    let mut report = Report::new(tol);
    for basis in family.bases() {
        report.merge(check_orthonormal(basis, tol));
        report.push(check_basis_entangled(basis, tol));
    }
    let all = basis_pairs(family.bases().len());
    let pairs = match opts.max_pairs {
        Some(k) if k < all.len() => {
            report.notes.push(format!(
                "cross-pair sweep restricted to {k} of {} basis pairs sampled at evenly spaced positions",
                all.len()
            ));
            (0..k).map(|t| all[t * all.len() / k]).collect()
        }
        _ => all,
    };
    let bases = family.bases();
    let checks: Vec<Check> = pairs
        .par_iter()
        .map(|&(i, j)| {
            check_pair_unbiased(&bases[i], &bases[j], tol)
                .map(|r| r.checks.into_iter().next().expect("one check"))
                .unwrap_or_else(|e| {
                    Check::exact(format!("unbiased[#{i},#{j}]"), 1, Some(vec![e.to_string()]))
                })
        })
        .collect();
    for c in checks {
        report.push(c);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::Phase;
    use crate::ring::{ComponentSpec, RingSpec};
    use crate::weyl::{build_basis, build_family, build_state, family_unchecked, RingChoice};

    fn scalar(x: u64) -> RingElement {
        RingElement::new(vec![vec![x]])
    }

    fn f3() -> Ring {
        Ring::new(RingSpec::new(vec![ComponentSpec::field(3, 1)])).unwrap()
    }

    #[test]
    fn dense_evaluation() {
        let r = f3();
        let canonical = to_dense(&build_state(&r, &scalar(1), &scalar(0), &scalar(0)).unwrap());
        let s = 1.0 / 3f64.sqrt();
        for (i, z) in canonical.amplitudes.iter().enumerate() {
            let want = if [0, 4, 8].contains(&i) { s } else { 0.0 };
            assert!((z - Complex64::new(want, 0.0)).norm() < 1e-15);
        }
        let shifted = to_dense(&build_state(&r, &scalar(2), &scalar(1), &scalar(1)).unwrap());
        let zeta = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        assert!((shifted.amplitudes[2] - s).norm() < 1e-15);
        assert!((shifted.amplitudes[4] - zeta * s).norm() < 1e-15);
        assert!((shifted.amplitudes[6] - zeta * zeta * s).norm() < 1e-15);
        assert!((shifted.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inner_products() {
        let r = f3();
        let a = build_basis(&r, &scalar(1)).unwrap();
        let b = build_basis(&r, &scalar(2)).unwrap();
        let u = to_dense(&a.states()[4]);
        let v = to_dense(&a.states()[7]);
        assert!((inner_product(&u, &u).unwrap() - 1.0).norm() < 1e-12);
        assert!(inner_product(&u, &v).unwrap().norm() < 1e-9);
        for x in a.states() {
            for y in b.states() {
                let z = inner_product(&to_dense(x), &to_dense(y)).unwrap();
                assert!((z.norm() - 1.0 / 3.0).abs() < 1e-9);
            }
        }
        let short = DenseState {
            amplitudes: vec![Complex64::new(1.0, 0.0)],
        };
        assert!(matches!(
            inner_product(&u, &short),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn orthonormality_checks() {
        let r = f3();
        let report = check_orthonormal(&build_basis(&r, &scalar(1)).unwrap(), DEFAULT_TOLERANCE);
        assert!(report.overall);
        assert!(report.checks[0].worst_deviation.unwrap() < 1e-12);

        let f9 = Ring::new(RingSpec::fields(9)).unwrap();
        let t = RingElement::new(vec![vec![0, 1]]);
        assert!(check_orthonormal(&build_basis(&f9, &t).unwrap(), DEFAULT_TOLERANCE).overall);
    }

    #[test]
    fn corrupted_phase_breaks_orthonormality() {
        let r = f3();
        let mut basis = build_basis(&r, &scalar(1)).unwrap();
        let entry = &mut basis.states_mut()[4].entries_mut()[1];
        entry.1 += Phase::new(1, 3);
        let report = check_orthonormal(&basis, DEFAULT_TOLERANCE);
        assert!(!report.overall);
        let check = &report.checks[0];
        // One rotated term among three roots of unity: |ζ − 1|/3.
        let expected = 2.0 * (std::f64::consts::PI / 3.0).sin() / 3.0;
        assert!((check.worst_deviation.unwrap() - expected).abs() < 1e-12);
        assert!(check.witness.as_ref().unwrap()[0].contains("xi=1 eta=1"));
    }

    #[test]
    fn entanglement_checks() {
        let r = f3();
        let canonical = build_state(&r, &scalar(1), &scalar(0), &scalar(0)).unwrap();
        assert!(entanglement_deviations(&canonical).0 < 1e-15);
        assert!(check_max_entangled(&canonical, DEFAULT_TOLERANCE).overall);

        // |e0⟩ ⊗ (|e0⟩+|e1⟩+|e2⟩)/√3: a product state, so M has rank one.
        let zero = scalar(0);
        let rank_one = SparseState::new(
            3,
            zero.clone(),
            zero,
            vec![(0, Phase::ZERO), (1, Phase::ZERO), (2, Phase::ZERO)],
        )
        .unwrap();
        let report = check_max_entangled(&rank_one, DEFAULT_TOLERANCE);
        assert!(!report.overall);
        assert!((report.checks[0].worst_deviation.unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn unbiasedness_checks() {
        let r = f3();
        let a = build_basis(&r, &scalar(1)).unwrap();
        let b = build_basis(&r, &scalar(2)).unwrap();
        assert!(
            check_pair_unbiased(&a, &b, DEFAULT_TOLERANCE)
                .unwrap()
                .overall
        );
        assert!(
            !check_pair_unbiased(&a, &a, DEFAULT_TOLERANCE)
                .unwrap()
                .overall
        );

        let f9 = Ring::new(RingSpec::fields(9)).unwrap();
        let t = RingElement::new(vec![vec![0, 1]]);
        let a9 = build_basis(&f9, &f9.one()).unwrap();
        let b9 = build_basis(&f9, &t).unwrap();
        assert!(
            check_pair_unbiased(&a9, &b9, DEFAULT_TOLERANCE)
                .unwrap()
                .overall
        );
        assert!(matches!(
            check_pair_unbiased(&a, &a9, DEFAULT_TOLERANCE),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn exact_criterion_examples() {
        let crit = exact_pair_criterion(&f3(), &scalar(1), &scalar(2)).unwrap();
        assert!(crit.unbiased);
        assert_eq!(crit.witness, Some(scalar(1)));

        let z9 = Ring::new(RingSpec::integers_mod(9)).unwrap();
        let crit = exact_pair_criterion(&z9, &scalar(1), &scalar(4)).unwrap();
        assert!(!crit.unbiased && crit.witness.is_none());
        assert!(matches!(
            exact_pair_criterion(&z9, &scalar(3), &scalar(1)),
            Err(Error::NotAUnit(_))
        ));
        assert!(matches!(
            exact_pair_criterion(&z9, &scalar(1), &scalar(3)),
            Err(Error::NotAUnit(_))
        ));

        let f9 = Ring::new(RingSpec::fields(9)).unwrap();
        let units = f9.list_units();
        for a in &units {
            for b in units.iter().filter(|b| *b != a) {
                assert!(exact_pair_criterion(&f9, a, b).unwrap().unbiased);
            }
        }
    }

    #[test]
    fn family_verification() {
        let family = build_family(9, RingChoice::Fields).unwrap();
        let report = verify_family(&family, DEFAULT_TOLERANCE, Mode::Both);
        assert!(report.overall, "{report:#?}");
        assert_eq!(report.checks.len(), 3 + 8 * 2 + 28 + 1);

        let z9 = Ring::new(RingSpec::integers_mod(9)).unwrap();
        let bad = family_unchecked(&z9, vec![scalar(1), scalar(4)]).unwrap();
        let exact = verify_family(&bad, DEFAULT_TOLERANCE, Mode::Exact);
        assert!(!exact.overall);
        let witness = exact
            .check("exact_pair_criterion")
            .unwrap()
            .witness
            .clone()
            .unwrap();
        assert!(witness[2].contains("c−1 = 3"));
        let numeric = verify_family(&bad, DEFAULT_TOLERANCE, Mode::Numeric);
        assert!(!numeric.overall);
        let both = verify_family(&bad, DEFAULT_TOLERANCE, Mode::Both);
        assert!(!both.overall && both.check("modes_agree").unwrap().passed);
    }

    #[test]
    fn sampled_pairs_are_noted() {
        let family = build_family(9, RingChoice::Fields).unwrap();
        let opts = VerifyOptions {
            max_pairs: Some(5),
            mode: Mode::Numeric,
            ..Default::default()
        };
        let report = verify_family_with(&family, &opts);
        assert!(report.overall);
        assert_eq!(
            report
                .checks
                .iter()
                .filter(|c| c.name.starts_with("unbiased"))
                .count(),
            5
        );
        assert_eq!(report.notes.len(), 1);
    }

    #[test]
    fn general_criterion_matches_permutations() {
        let z9 = Ring::new(RingSpec::integers_mod(9)).unwrap();
        let dense = |b: u64| {
            let d = 9;
            let mut m = vec![Complex64::new(0.0, 0.0); d * d];
            for r in 0..d {
                m[r * d + (b as usize * r) % d] = Complex64::new(1.0, 0.0);
            }
            m
        };
        assert!(unitary_pair_deviation(&z9, &dense(1), &dense(2)).unwrap() < 1e-9);
        assert!(unitary_pair_deviation(&z9, &dense(1), &dense(4)).unwrap() > 0.5);
    }
}
