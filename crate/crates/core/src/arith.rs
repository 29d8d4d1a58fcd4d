//! Exact scalar arithmetic: rationals, Bernoulli numbers, and the small
//! number-theoretic functions the series code needs.
//!
//! All congruences in this crate are decided through [`padic_valuation`];
//! nothing reduces a denominator modulo a prime except [`reduce_mod_p`],
//! which refuses non-integral input.

use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision fraction, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A rational prime, checked on construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::InvalidModulus(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// Rejects 2 as well as composites.
    pub fn odd(p: u64) -> Result<Self> {
        match Prime::new(p) {
            Ok(q) if p != 2 => Ok(q),
            _ => Err(Error::InvalidModulus(p)),
        }
    }

    pub fn pow(self, e: u32) -> BigInt {
        num_traits::pow(BigInt::from(self.0), e as usize)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `(2m-1)!! = 1 * 3 * ... * (2m-1)`; `odd` is the last factor and must be odd
/// (or -1 for the empty product).
pub fn double_factorial(odd: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut i = odd;
    while i > 1 {
        acc *= i;
        i -= 2;
    }
    acc
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn bernoulli_cache() -> &'static Mutex<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// Extends the table with `sum_{j=0}^{m} C(m+1, j) B_j = 0`.
/// Index 1 holds -1/2; it is never handed out.
fn extend_bernoulli(table: &mut Vec<Rational>, upto: usize) {
    while table.len() <= upto {
        let m = table.len() as u32;
        if m > 1 && m % 2 == 1 {
            table.push(Rational::zero());
            continue;
        }
        let mut acc = Rational::zero();
        for (j, b) in table.iter().enumerate() {
            if !b.is_zero() {
                acc += Rational::from_integer(binomial(m + 1, j as u32)) * b;
            }
        }
        table.push(-acc / rat(i64::from(m) + 1));
    }
}

/// `B_k` for even `k`, normalized so that `B_2 = 1/6`.
pub fn bernoulli(k: u32) -> Result<Rational> {
    if k % 2 == 1 {
        return Err(Error::OutOfContract(format!(
            "bernoulli is only defined here for even k, got {k}"
        )));
    }
    let mut table = bernoulli_cache().lock().unwrap_or_else(|e| e.into_inner());
    extend_bernoulli(&mut table, k as usize);
    Ok(table[k as usize].clone())
}

/// `(1 - p^{k-1}) B_k`.
pub fn regularized_bernoulli(k: u32, p: u64) -> Result<Rational> {
    let p = Prime::new(p)?;
    if k < 2 {
        return Err(Error::OutOfContract(format!(
            "regularized Bernoulli numbers need even k >= 2, got {k}"
        )));
    }
    let b = bernoulli(k)?;
    Ok(b * Rational::from_integer(BigInt::one() - p.pow(k - 1)))
}

pub fn totient(n: u64) -> u64 {
    assert!(n >= 1, "totient is defined for n >= 1");
    let mut result = n;
    let mut m = n;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            while m % d == 0 {
                m /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Legendre symbol `(a/p)` by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    Prime::odd(p)?;
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return Ok(0);
    }
    Ok(if mod_pow(r, (p - 1) / 2, p) == 1 { 1 } else { -1 })
}

/// A p-adic valuation; `Infinite` is the valuation of zero and compares
/// above every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn at_least(self, r: i64) -> bool {
        self >= Valuation::Finite(r)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => v.fmt(f),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

pub fn integer_valuation(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn padic_valuation(x: &Rational, p: u64) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let num = integer_valuation(x.numer(), p) as i64;
    let den = integer_valuation(x.denom(), p) as i64;
    Valuation::Finite(num - den)
}

/// Image of a p-integral rational in `Z/pZ`; `None` when `p` divides the
/// denominator.
pub fn reduce_mod_p(x: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = x.denom().mod_floor(&pb);
    if den.is_zero() {
        return None;
    }
    let num = x.numer().mod_floor(&pb).to_u64()?;
    let den = den.to_u64()?;
    let inv = mod_pow(den, p - 2, p);
    Some(((num as u128 * inv as u128) % p as u128) as u64)
}

pub fn to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

pub fn sign_of(x: &BigInt) -> i8 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
