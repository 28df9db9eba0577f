//! Exact modular arithmetic, primitive roots and Dirichlet characters mod an
//! odd prime — the substrate for every character sum in the crate.
//!
//! Characters are parameterized by an index against a fixed primitive root:
//! the context stores a discrete-log table, so `chi(x)` is a table lookup and
//! one complex exponential. The smallest primitive root is chosen so that
//! reports are reproducible.

use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::{Error, Result};

/// Deterministic primality test for u64 (Miller-Rabin with fixed witnesses).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // This witness set is deterministic for all u64.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes in the inclusive range `[lo, hi]`.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&n| is_prime(n)).collect()
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed integer to `[0, m)`.
#[inline]
pub fn reduce_signed(a: i64, m: u64) -> u64 {
    let m_i = m as i128;
    (((a as i128 % m_i) + m_i) % m_i) as u64
}

/// Euler's totient by trial-division factorization.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Moebius function; 0 when n has a squared prime factor.
pub fn moebius(mut n: u64) -> i64 {
    if n == 0 {
        return 0;
    }
    let mut factors = 0u32;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            factors += 1;
        }
        p += 1;
    }
    if n > 1 {
        factors += 1;
    }
    if factors % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Divisors of n in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Number of divisors of n.
pub fn divisor_count(mut n: u64) -> u64 {
    let mut count = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0u64;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            count *= e + 1;
        }
        p += 1;
    }
    if n > 1 {
        count *= 2;
    }
    count
}

/// A residue in `[0, modulus)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Residue {
    pub value: u64,
    pub modulus: u64,
}

impl Residue {
    pub fn new(value: i64, modulus: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        Residue {
            value: reduce_signed(value, modulus),
            modulus,
        }
    }
}

/// Inverse of `a` modulo its own modulus, via the extended Euclid algorithm.
pub fn mod_inverse(a: Residue) -> Result<Residue> {
    let m = a.modulus;
    let (mut old_r, mut r) = (a.value as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(Error::NonInvertible {
            value: a.value,
            modulus: m,
        });
    }
    let inv = ((old_s % m as i128 + m as i128) % m as i128) as u64;
    Ok(Residue {
        value: inv,
        modulus: m,
    })
}

/// Convenience wrapper returning the inverse of `a` mod `m` as a bare integer.
pub fn inv_mod(a: i64, m: u64) -> Result<u64> {
    Ok(mod_inverse(Residue::new(a, m))?.value)
}

/// Smallest generator of the unit group mod an odd prime p.
///
/// Checks candidates in increasing order against the prime factors of p-1,
/// so the choice is deterministic.
pub fn find_primitive_root(p: u64) -> Result<u64> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let order = p - 1;
    let mut rest = order;
    let mut prime_factors = Vec::new();
    let mut f = 2u64;
    while f * f <= rest {
        if rest % f == 0 {
            prime_factors.push(f);
            while rest % f == 0 {
                rest /= f;
            }
        }
        f += 1;
    }
    if rest > 1 {
        prime_factors.push(rest);
    }
    'cand: for g in 2..p {
        for &f in &prime_factors {
            if mod_pow(g, order / f, p) == 1 {
                continue 'cand;
            }
        }
        return Ok(g);
    }
    unreachable!("every odd prime has a primitive root below p")
}

/// An odd prime together with its smallest primitive root and a discrete-log
/// table. Immutable after construction; all lookups are pure.
#[derive(Clone, Debug)]
pub struct PrimeContext {
    p: u64,
    g0: u64,
    /// dlog[x] = j where g0^j = x (mod p); dlog[0] is a sentinel.
    dlog: Vec<u32>,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self> {
        let g0 = find_primitive_root(p)?;
        let mut dlog = vec![u32::MAX; p as usize];
        let mut acc = 1u64;
        for j in 0..(p - 1) {
            dlog[acc as usize] = j as u32;
            acc = mul_mod(acc, g0, p);
        }
        Ok(PrimeContext { p, g0, dlog })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn primitive_root(&self) -> u64 {
        self.g0
    }

    /// Discrete log of a unit residue; None when p divides x.
    #[inline]
    pub fn dlog(&self, x: i64) -> Option<u32> {
        let r = reduce_signed(x, self.p);
        if r == 0 {
            None
        } else {
            Some(self.dlog[r as usize])
        }
    }

    /// The character of index k; k is reduced mod p-1.
    pub fn character(&self, index: u64) -> DirichletCharacter<'_> {
        DirichletCharacter {
            ctx: self,
            index: index % (self.p - 1),
        }
    }

    /// All characters mod p in index order (principal first).
    pub fn characters(&self) -> impl Iterator<Item = DirichletCharacter<'_>> {
        (0..self.p - 1).map(move |k| self.character(k))
    }

    /// e(a/p) for an integer a.
    #[inline]
    pub fn additive(&self, a: i64) -> Complex64 {
        let r = reduce_signed(a, self.p) as f64;
        Complex64::from_polar(1.0, TAU * r / self.p as f64)
    }
}

/// Dirichlet character mod p given by chi(g0^j) = e(k j / (p-1)).
///
/// The index k = 0 is the principal character; for prime modulus every
/// non-principal character is primitive.
#[derive(Clone, Copy)]
pub struct DirichletCharacter<'a> {
    ctx: &'a PrimeContext,
    index: u64,
}

impl<'a> DirichletCharacter<'a> {
    #[inline]
    pub fn modulus(&self) -> u64 {
        self.ctx.p
    }

    #[inline]
    pub fn index(&self) -> u64 {
        self.index
    }

    #[inline]
    pub fn is_principal(&self) -> bool {
        self.index == 0
    }

    /// chi(x): unit modulus on units, exactly zero when p | x.
    pub fn eval(&self, x: i64) -> Complex64 {
        match self.ctx.dlog(x) {
            None => Complex64::new(0.0, 0.0),
            Some(j) => {
                let order = self.ctx.p - 1;
                let e = mul_mod(self.index, j as u64, order);
                Complex64::from_polar(1.0, TAU * e as f64 / order as f64)
            }
        }
    }

    /// chi(-1), always +1 or -1.
    pub fn parity(&self) -> i32 {
        // -1 = g0^((p-1)/2), so chi(-1) = e(k/2).
        if (self.index * ((self.ctx.p - 1) / 2)) % (self.ctx.p - 1) == 0 {
            1
        } else {
            -1
        }
    }

    pub fn conjugate_index(&self) -> u64 {
        (self.ctx.p - 1 - self.index) % (self.ctx.p - 1)
    }
}

/// Spec-level operation name for character evaluation.
pub fn char_eval(chi: &DirichletCharacter<'_>, x: i64) -> Complex64 {
    chi.eval(x)
}
