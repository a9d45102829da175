//! Exact linear algebra over Z/mZ.
//!
//! Composite moduli carry zero divisors, so plain Gaussian elimination does
//! not apply. The workhorse is a Howell-style echelon form with transform
//! tracking: it supports span membership with explicit coefficients, left
//! kernels, and (via Smith reduction of a relation matrix) invariant factors
//! of quotients of row spans. Cohomology computations run these routines
//! once per prime power dividing the modulus and reassemble results by CRT.

mod howell;
mod snf;

pub use howell::{solve_homogeneous, Echelon};
pub use snf::{smith_mod, SmithMod};

/// Prime-power factorization of `m`, ascending by prime.
pub fn prime_powers(m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut rest = m;
    let mut p = 2u64;
    while p * p <= rest {
        if rest % p == 0 {
            let mut pe = 1;
            while rest % p == 0 {
                rest /= p;
                pe *= p;
            }
            out.push(pe);
        }
        p += 1;
    }
    if rest > 1 {
        out.push(rest);
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended gcd on signed integers: returns (g, s, t) with s*a + t*b = g.
pub fn extgcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, s, t) = extgcd(b, a % b);
        (g, t, s - (a / b) * t)
    }
}

/// Inverse of `a` modulo `m`; `a` must be a unit.
pub fn modinv(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (g, s, _) = extgcd(a as i128, m as i128);
    assert_eq!(g, 1, "modinv of non-unit {a} mod {m}");
    (s.rem_euclid(m as i128)) as u64
}

/// A unit u mod m with u*a == gcd(a, m) (mod m).
pub fn unit_multiplier(a: u64, m: u64) -> u64 {
    let a = a % m;
    let g = gcd(a, m);
    if g == 0 {
        return 1;
    }
    let b = a / g;
    let mq = m / g;
    let mut u = if mq == 1 { 1 } else { modinv(b % mq, mq) };
    while gcd(u, m) != 1 {
        u += mq;
    }
    u % m
}

/// CRT idempotents for the prime powers of `m`: e_i = 1 mod pe_i,
/// 0 mod the other prime powers. Returned in the same order as
/// `prime_powers(m)`.
pub fn crt_idempotents(m: u64) -> Vec<u64> {
    prime_powers(m)
        .iter()
        .map(|&pe| {
            let rest = m / pe;
            // rest * inv(rest mod pe) is 1 mod pe and 0 mod m/pe
            (rest % m) * modinv(rest % pe, pe) % m
        })
        .collect()
}
