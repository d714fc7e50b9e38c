//! Exact integer arithmetic: Kronecker symbols, deterministic factorization
//! and modular square roots.
//!
//! Integers and rationals are backed by `num-bigint` / `num-rational`; both
//! are exact, and `Rational` is always reduced with a positive denominator.

use num_bigint::BigInt;
use num_integer::Integer as NumInteger;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Integer = BigInt;
pub type Rational = BigRational;

/// Trial-division bound used before switching to the rho method.
const TRIAL_BOUND: u64 = 100_000;

/// Iteration cap for one Pollard-Brent run; past this the factorization
/// guard trips instead of running unbounded.
const RHO_ITERATION_CAP: u64 = 40_000_000;

/// Deterministic Miller-Rabin is valid below this bound with the fixed base
/// set used in [`is_prime`] (Sorenson-Webster).
const MR_CERTIFIED_BOUND_DIGITS: &str = "3317044064679887385961981";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("kronecker symbol (0|0) is undefined")]
    KroneckerUndefined,
    #[error("cannot factor zero")]
    FactorZero,
    #[error("factorization guard: no factor of {composite} found within the configured bounds")]
    FactorGuard { composite: Integer },
    #[error("primality is only certified below 3.3e24; got {0}")]
    PrimalityOutOfRange(Integer),
    #[error("{a} is not a quadratic residue mod {q}")]
    NonResidue { a: Integer, q: Integer },
    #[error("sqrt_mod expects an odd prime modulus, got {0}")]
    BadModulus(Integer),
}

/// Kronecker symbol (a|b), extending the Jacobi symbol to all lower
/// arguments with the classical conventions at 2 and at b <= 0.
///
/// Errors only on (0, 0).
pub fn kronecker(a: &Integer, b: &Integer) -> Result<i8, ArithError> {
    if a.is_zero() && b.is_zero() {
        return Err(ArithError::KroneckerUndefined);
    }
    if b.is_zero() {
        // (a|0) = 1 iff a = +-1
        return Ok(if a.abs().is_one() { 1 } else { 0 });
    }
    let mut acc: i8 = 1;
    let mut b = b.clone();
    if b.is_negative() {
        b = -b;
        if a.is_negative() {
            acc = -acc;
        }
    }
    // (a|2) factor for each power of two in b
    let twos = b.trailing_zeros().unwrap_or(0);
    if twos > 0 {
        if a.is_even() {
            return Ok(0);
        }
        if twos % 2 == 1 {
            let r = (a % 8u8 + 8u8) % 8u8;
            let r = r.to_u8().unwrap();
            if r == 3 || r == 5 {
                acc = -acc;
            }
        }
        b >>= twos;
    }
    // b is now odd and positive: Jacobi loop with quadratic reciprocity.
    let mut a = a.mod_floor(&b);
    while !a.is_zero() {
        let twos = a.trailing_zeros().unwrap_or(0);
        if twos > 0 {
            a >>= twos;
            if twos % 2 == 1 {
                let r = (&b % 8u8).to_u8().unwrap();
                if r == 3 || r == 5 {
                    acc = -acc;
                }
            }
        }
        // a, b both odd: flip by reciprocity
        if (&a % 4u8).to_u8().unwrap() == 3 && (&b % 4u8).to_u8().unwrap() == 3 {
            acc = -acc;
        }
        std::mem::swap(&mut a, &mut b);
        a = a.mod_floor(&b);
    }
    Ok(if b.is_one() { acc } else { 0 })
}

/// Complete factorization of a nonzero integer: distinct certified primes
/// with positive exponents, plus a unit sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(Integer, u32)>,
    sign: i8,
}

impl Factorization {
    pub fn factors(&self) -> &[(Integer, u32)] {
        &self.factors
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Exponent of a given prime (0 if absent).
    pub fn exponent_of(&self, p: &Integer) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    /// Multiply the prime powers and the sign back together.
    pub fn recompose(&self) -> Integer {
        let mut n = Integer::from(self.sign);
        for (p, e) in &self.factors {
            n *= p.pow(*e);
        }
        n
    }
}

/// Deterministic primality test, certified for |n| below ~3.3e24 via
/// Miller-Rabin with the first 13 prime bases.  Larger inputs error out
/// rather than returning an uncertified answer.
pub fn is_prime(n: &Integer) -> Result<bool, ArithError> {
    let bound = Integer::parse_bytes(MR_CERTIFIED_BOUND_DIGITS.as_bytes(), 10).unwrap();
    if n.abs() >= bound {
        return Err(ArithError::PrimalityOutOfRange(n.clone()));
    }
    let n = n.abs();
    if n < Integer::from(2) {
        return Ok(false);
    }
    for small in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let s = Integer::from(small);
        if n == s {
            return Ok(true);
        }
        if (&n % &s).is_zero() {
            return Ok(false);
        }
    }
    // n - 1 = d * 2^r with d odd
    let n_minus_1 = &n - 1u8;
    let r = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> r;
    'witness: for base in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = Integer::from(base).modpow(&d, &n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = x.modpow(&Integer::from(2u8), &n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// Pollard-Brent rho with a deterministic parameter schedule and an
/// iteration cap.  Returns a nontrivial factor of the odd composite `n`.
fn pollard_brent(n: &Integer) -> Result<Integer, ArithError> {
    for c in 1u64..64 {
        let cbig = Integer::from(c);
        let mut y = Integer::from(2u8);
        let mut iterations = 0u64;
        let m = 128u64;
        let mut g = Integer::one();
        let mut r = 1u64;
        let mut q = Integer::one();
        let mut x = Integer::zero();
        let mut ys = Integer::zero();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = (&y * &y + &cbig) % n;
            }
            let mut k = 0u64;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = (&y * &y + &cbig) % n;
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = &q * &diff % n;
                }
                g = q.gcd(n);
                k += m;
                iterations += m;
                if iterations > RHO_ITERATION_CAP {
                    return Err(ArithError::FactorGuard { composite: n.clone() });
                }
            }
            r *= 2;
        }
        if g == *n {
            // Backtrack one step at a time.
            loop {
                ys = (&ys * &ys + &cbig) % n;
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return Ok(g);
        }
        // This c found only trivial divisors; retry with the next one.
    }
    Err(ArithError::FactorGuard { composite: n.clone() })
}

/// Complete prime factorization of a nonzero integer.  Trial division up to
/// 10^5 followed by Pollard-Brent rho; every reported prime is certified by
/// the deterministic test.  Composites that survive all bounds trip the
/// guard error instead of looping.
pub fn factorize(n: &Integer) -> Result<Factorization, ArithError> {
    if n.is_zero() {
        return Err(ArithError::FactorZero);
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut rest = n.abs();
    let mut factors: Vec<(Integer, u32)> = Vec::new();
    fn push(p: Integer, e: u32, factors: &mut Vec<(Integer, u32)>) {
        if let Some(entry) = factors.iter_mut().find(|(q, _)| *q == p) {
            entry.1 += e;
        } else {
            factors.push((p, e));
        }
    }

    let mut d = 2u64;
    while d <= TRIAL_BOUND && rest > Integer::one() {
        let dbig = Integer::from(d);
        if (&dbig * &dbig) > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &dbig).is_zero() {
            rest /= &dbig;
            e += 1;
        }
        if e > 0 {
            push(dbig, e, &mut factors);
        }
        d = if d == 2 { 3 } else { d + 2 };
    }

    let mut stack = Vec::new();
    if rest > Integer::one() {
        stack.push(rest);
    }
    while let Some(m) = stack.pop() {
        // Cofactors above the certification bound must be split further;
        // if rho cannot split them either, the guard reports failure.
        if let Ok(true) = is_prime(&m) {
            push(m, 1, &mut factors);
            continue;
        }
        // Perfect powers would stall rho on p^2; peel off exact roots first.
        if let Some(root) = exact_square_root(&m) {
            stack.push(root.clone());
            stack.push(root);
            continue;
        }
        let f = pollard_brent(&m)?;
        stack.push(&m / &f);
        stack.push(f);
    }
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(Factorization { factors, sign })
}

/// Exact integer square root when `n` is a perfect square.
pub fn exact_square_root(n: &Integer) -> Option<Integer> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Square root of `a` modulo an odd prime `q` via Tonelli-Shanks; returns
/// the smaller of the two roots.  Requires (a|q) = 1 or a = 0 mod q.
pub fn sqrt_mod(a: &Integer, q: &Integer) -> Result<Integer, ArithError> {
    if q < &Integer::from(3) || !is_prime(q)? || q.is_even() {
        return Err(ArithError::BadModulus(q.clone()));
    }
    let a = a.mod_floor(q);
    if a.is_zero() {
        return Ok(Integer::zero());
    }
    if kronecker(&a, q)? != 1 {
        return Err(ArithError::NonResidue { a, q: q.clone() });
    }
    let r = if (q % 4u8).to_u8().unwrap() == 3 {
        let e = (q + 1u8) >> 2;
        a.modpow(&e, q)
    } else {
        tonelli_shanks(&a, q)
    };
    let other = q - &r;
    Ok(r.min(other))
}

fn tonelli_shanks(a: &Integer, q: &Integer) -> Integer {
    // q = s * 2^e + 1 with s odd
    let q_minus_1 = q - 1u8;
    let e = q_minus_1.trailing_zeros().unwrap();
    let s = &q_minus_1 >> e;
    // Find a quadratic non-residue.
    let mut z = Integer::from(2u8);
    while kronecker(&z, q).unwrap() != -1 {
        z += 1u8;
    }
    let mut m = e;
    let mut c = z.modpow(&s, q);
    let mut t = a.modpow(&s, q);
    let mut r = a.modpow(&(&(&s + 1u8) >> 1), q);
    while !t.is_one() {
        // Least i with t^(2^i) = 1.
        let mut i = 0u64;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = t2.modpow(&Integer::from(2u8), q);
            i += 1;
        }
        let b = c.modpow(&(Integer::one() << (m - i - 1)), q);
        m = i;
        c = b.modpow(&Integer::from(2u8), q);
        t = t * &c % q;
        r = r * &b % q;
    }
    r
}
