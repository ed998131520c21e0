//! Exact phases: rationals modulo one standing for `exp(2πi·t)`.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// A unit complex number `e^{2πi·num/den}` held exactly.
///
/// Always normalized: `0 <= num < den`, `gcd(num, den) = 1`, and zero is `0/1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[u64; 2]", try_from = "[u64; 2]")]
pub struct Phase {
    num: u64,
    den: u64,
}

impl Phase {
    pub const ZERO: Phase = Phase { num: 0, den: 1 };

    /// Builds `num/den mod 1`. Panics if `den == 0`.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "phase denominator must be positive");
        let num = num % den;
        if num == 0 {
            return Self::ZERO;
        }
        let g = num.gcd(&den);
        Phase {
            num: num / g,
            den: den / g,
        }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// The numerator when the phase is written over `modulus`, or `None` if
    /// `den` does not divide `modulus`.
    pub fn numerator_over(self, modulus: u64) -> Option<u64> {
        modulus
            .is_multiple_of(self.den)
            .then(|| self.num * (modulus / self.den))
    }

    pub fn to_complex(self) -> Complex64 {
        let theta = std::f64::consts::TAU * self.num as f64 / self.den as f64;
        Complex64::new(theta.cos(), theta.sin())
    }
}

impl Default for Phase {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Add for Phase {
    type Output = Phase;

    fn add(self, rhs: Phase) -> Phase {
        let den = self.den.lcm(&rhs.den);
        let num = self.num * (den / self.den) + rhs.num * (den / rhs.den);
        Phase::new(num, den)
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, rhs: Phase) {
        *self = *self + rhs;
    }
}

impl Neg for Phase {
    type Output = Phase;

    fn neg(self) -> Phase {
        Phase::new(self.den - self.num, self.den)
    }
}

impl Sub for Phase {
    type Output = Phase;

    fn sub(self, rhs: Phase) -> Phase {
        self + (-rhs)
    }
}

impl std::iter::Sum for Phase {
    fn sum<I: Iterator<Item = Phase>>(iter: I) -> Phase {
        iter.fold(Phase::ZERO, Add::add)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl From<Phase> for [u64; 2] {
    fn from(p: Phase) -> Self {
        [p.num, p.den]
    }
}

impl TryFrom<[u64; 2]> for Phase {
    type Error = String;

    fn try_from([num, den]: [u64; 2]) -> Result<Self, Self::Error> {
        if den == 0 {
            return Err("phase denominator must be positive".into());
        }
        Ok(Phase::new(num, den))
    }
}
