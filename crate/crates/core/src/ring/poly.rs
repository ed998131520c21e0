//! Dense polynomials over `Z_p`, coefficients stored lowest degree first.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut k = 2;
    while k * k <= n {
        if n.is_multiple_of(k) {
            let mut e = 0;
            while n.is_multiple_of(k) {
                n /= k;
                e += 1;
            }
            out.push((k, e));
        }
        k += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn mod_inverse(x: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (x % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(m as i128) as u64)
}

fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn sub(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let n = f.len().max(g.len());
    let out = (0..n)
        .map(|i| {
            let a = f.get(i).copied().unwrap_or(0);
            let b = g.get(i).copied().unwrap_or(0);
            (a + p - b) % p
        })
        .collect();
    trim(out)
}

fn mul(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + a * b) % p;
        }
    }
    trim(out)
}

/// Remainder of `f` modulo a nonzero `g`.
fn rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let g = trim(g.to_vec());
    assert!(!g.is_empty(), "division by the zero polynomial");
    let lead_inv = mod_inverse(*g.last().unwrap(), p).expect("p is prime");
    let mut r = trim(f.to_vec());
    while r.len() >= g.len() {
        let shift = r.len() - g.len();
        let coef = r.last().unwrap() * lead_inv % p;
        for (j, &gj) in g.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - coef * gj % p) % p;
        }
        r = trim(r);
    }
    r
}

fn gcd(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(f.to_vec()), trim(g.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn pow_mod(base: &[u64], mut exp: u64, modulus: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1];
    let mut b = rem(base, modulus, p);
    while exp > 0 {
        if exp & 1 == 1 {
            result = rem(&mul(&result, &b, p), modulus, p);
        }
        b = rem(&mul(&b, &b, p), modulus, p);
        exp >>= 1;
    }
    result
}

fn has_root(f: &[u64], p: u64) -> bool {
    (0..p).any(|x| f.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) == 0)
}

/// Irreducibility of a monic polynomial given by all coefficients
/// (including the leading 1). Degrees up to 3 use the root test; higher
/// degrees check `gcd(f, x^(p^k) - x) = 1` for `k <= deg/2`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    let deg = match f.len() {
        0 | 1 => return false,
        n => n - 1,
    };
    if deg == 1 {
        return true;
    }
    if deg <= 3 {
        return !has_root(&f, p);
    }
    let x = vec![0, 1];
    let mut frob = x.clone();
    for _ in 0..deg / 2 {
        frob = pow_mod(&frob, p, &f, p);
        let g = gcd(&f, &sub(&frob, &x, p), p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// The monic irreducible of degree `a` over `Z_p` whose lower coefficients
/// `c_0..c_{a-1}`, read as `Σ c_j p^j`, are smallest. Empty for `a == 1`.
pub fn find_irreducible(p: u64, a: u32) -> Vec<u64> {
    assert!(is_prime(p) && a >= 1);
    if a == 1 {
        return Vec::new();
    }
    let total = p.pow(a);
    (0..total)
        .map(|code| {
            let mut c = digits(code, p, a as usize);
            c.push(1);
            c
        })
        .find(|f| is_irreducible(f, p))
        .map(|mut f| {
            f.pop();
            f
        })
        .expect("irreducible polynomials exist in every degree")
}

/// Base-`p` digits of `code`, least significant first, padded to `len`.
pub(crate) fn digits(mut code: u64, p: u64, len: usize) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let c = code % p;
            code /= p;
            c
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reducible iff some monic factor of degree 1..=deg/2 divides it.
    fn irreducible_by_trial_division(f: &[u64], p: u64) -> bool {
        let deg = f.len() - 1;
        for k in 1..=deg / 2 {
            for code in 0..p.pow(k as u32) {
                let mut g = digits(code, p, k);
                g.push(1);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn small_examples() {
        assert_eq!(find_irreducible(3, 2), vec![1, 0]);
        assert_eq!(find_irreducible(2, 2), vec![1, 1]);
        assert!(find_irreducible(5, 1).is_empty());
        assert_eq!(find_irreducible(2, 3), vec![1, 1, 0]);
    }

    #[test]
    fn agrees_with_trial_division() {
        for (p, a) in [
            (2u64, 2u32),
            (2, 3),
            (2, 4),
            (2, 5),
            (2, 6),
            (3, 2),
            (3, 3),
            (3, 4),
            (5, 2),
            (5, 3),
            (7, 2),
        ] {
            let mut irreducible = 0;
            for code in 0..p.pow(a) {
                let mut f = digits(code, p, a as usize);
                f.push(1);
                let expected = irreducible_by_trial_division(&f, p);
                assert_eq!(is_irreducible(&f, p), expected, "p={p} f={f:?}");
                irreducible += expected as u64;
            }
            // Necklace count of monic irreducibles of prime-power-free small degrees.
            if a == 2 {
                assert_eq!(irreducible, (p * p - p) / 2);
            }
        }
    }

    #[test]
    fn minimal_choice_is_first_irreducible() {
        for (p, a) in [(2u64, 4u32), (3, 3), (5, 2), (2, 6)] {
            let found = find_irreducible(p, a);
            let code: u64 = found.iter().rev().fold(0, |acc, &c| acc * p + c);
            for smaller in 0..code {
                let mut f = digits(smaller, p, a as usize);
                f.push(1);
                assert!(!irreducible_by_trial_division(&f, p));
            }
        }
    }

    #[test]
    fn factorization_and_primality() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(27), vec![(3, 3)]);
        assert!(factorize(1).is_empty());
        assert!(is_prime(2) && is_prime(97) && !is_prime(1) && !is_prime(91));
    }

    #[test]
    fn inverses_mod_m() {
        assert_eq!(mod_inverse(4, 9), Some(7));
        assert_eq!(mod_inverse(3, 9), None);
        assert_eq!(mod_inverse(1, 2), Some(1));
    }
}
