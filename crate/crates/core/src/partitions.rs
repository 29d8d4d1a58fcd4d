//! Integer partitions, their Frobenius coordinates, and the shifted
//! symmetric functions `P_k`, `Q_k` together with their p-regularized
//! versions.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{bernoulli, factorial, rat, Prime, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Sorts the parts into non-increasing order and drops zeros.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&x| u64::from(x)).sum()
    }

    pub fn conjugate(&self) -> Self {
        let width = self.parts.first().copied().unwrap_or(0);
        Partition {
            parts: (0..width).map(|j| self.parts.iter().filter(|&&x| x > j).count() as u32).collect(),
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// Partitions of `n` in reverse lexicographic order, starting from `(n)`.
pub struct Partitions {
    current: Option<Vec<u32>>,
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let parts = self.current.take()?;
        let out = Partition { parts: parts.clone() };
        self.current = successor(parts);
        Some(out)
    }
}

fn successor(mut a: Vec<u32>) -> Option<Vec<u32>> {
    let k = a.iter().rposition(|&x| x > 1)?;
    let mut rem = (a.len() - k - 1) as u32 + 1;
    a[k] -= 1;
    let x = a[k];
    a.truncate(k + 1);
    while rem > x {
        a.push(x);
        rem -= x;
    }
    if rem > 0 {
        a.push(rem);
    }
    Some(a)
}

pub fn enumerate_partitions(n: u32) -> Partitions {
    Partitions { current: Some(if n == 0 { Vec::new() } else { vec![n] }) }
}

/// `(r; a_1..a_r; b_1..b_r)`: Durfee square side with diagonal arm and leg
/// lengths, both strictly decreasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusCoords {
    pub rank: usize,
    pub arms: Vec<u32>,
    pub legs: Vec<u32>,
}

impl FrobeniusCoords {
    pub fn size(&self) -> u64 {
        self.rank as u64
            + self.arms.iter().map(|&x| u64::from(x)).sum::<u64>()
            + self.legs.iter().map(|&x| u64::from(x)).sum::<u64>()
    }
}

pub fn frobenius(lambda: &Partition) -> FrobeniusCoords {
    let parts = lambda.parts();
    let rank = parts.iter().enumerate().take_while(|(i, &x)| x as usize > *i).count();
    let conj = lambda.conjugate();
    FrobeniusCoords {
        rank,
        arms: (0..rank).map(|i| parts[i] - i as u32 - 1).collect(),
        legs: (0..rank).map(|i| conj.parts()[i] - i as u32 - 1).collect(),
    }
}

/// The set `C_lambda = {-b_i - 1/2} ∪ {a_i + 1/2}`, stored as the odd
/// integers `2c` in increasing order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfIntegerMultiset {
    doubled: Vec<i64>,
}

impl HalfIntegerMultiset {
    pub fn doubled(&self) -> &[i64] {
        &self.doubled
    }

    pub fn is_empty(&self) -> bool {
        self.doubled.is_empty()
    }

    /// `sum sgn(c) (2c)^k` over elements, skipping `2c` divisible by `p`
    /// when a prime is given.
    pub fn doubled_power_sum(&self, k: u32, p: Option<Prime>) -> BigInt {
        let mut acc = BigInt::zero();
        for &d in &self.doubled {
            if p.map_or(false, |p| d % p.get() as i64 == 0) {
                continue;
            }
            let term = num_traits::pow(BigInt::from(d), k as usize);
            if d > 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    /// `P_k` (or `P_k^(p)`): `sum sgn(c) c^k`.
    pub fn signed_power_sum(&self, k: u32, p: Option<Prime>) -> Rational {
        Rational::new(self.doubled_power_sum(k, p), num_traits::pow(BigInt::from(2), k as usize))
    }
}

pub fn c_multiset(lambda: &Partition) -> HalfIntegerMultiset {
    let f = frobenius(lambda);
    let mut doubled: Vec<i64> = f
        .legs
        .iter()
        .map(|&b| -(2 * i64::from(b) + 1))
        .chain(f.arms.iter().map(|&a| 2 * i64::from(a) + 1))
        .collect();
    doubled.sort_unstable();
    HalfIntegerMultiset { doubled }
}

/// `P_k(lambda)`, or `P_k^(p)(lambda)` when `p` is given.
pub fn signed_power_sum(lambda: &Partition, k: u32, p: Option<Prime>) -> Rational {
    c_multiset(lambda).signed_power_sum(k, p)
}

/// Taylor coefficients of `(z/2)/sinh(z/2)`, via
/// `beta_k = -B_k (2^{k-1} - 1) / (2^{k-1} k!)`, times `(1 - p^{k-1})` when
/// regularized.
pub fn beta(k: u32, p: Option<Prime>) -> Rational {
    let regularizer = |k: u32| -> Rational {
        match p {
            None => rat(1),
            Some(p) if k == 0 => rat(1) - Rational::new(BigInt::from(1), BigInt::from(p.get())),
            Some(p) => Rational::from_integer(BigInt::from(1) - p.pow(k - 1)),
        }
    };
    if k == 0 {
        return regularizer(0);
    }
    if k % 2 == 1 {
        // beta_1 carries the factor 2^0 - 1 = 0; odd k >= 3 have B_k = 0.
        return Rational::zero();
    }
    let two_pow = num_traits::pow(BigInt::from(2), (k - 1) as usize);
    let b = bernoulli(k).expect("k is even");
    let value = -b * Rational::from_integer(&two_pow - 1)
        / Rational::from_integer(two_pow * factorial(k));
    value * regularizer(k)
}

/// `Q_k(lambda)`, or `Q_k^(p)(lambda)` when `p` is given.
pub fn q_value(lambda: &Partition, k: u32, p: Option<Prime>) -> Rational {
    q_value_from_multiset(&c_multiset(lambda), k, p)
}

pub fn q_value_from_multiset(c: &HalfIntegerMultiset, k: u32, p: Option<Prime>) -> Rational {
    if k == 0 {
        return beta(0, p);
    }
    c.signed_power_sum(k - 1, p) / Rational::from_integer(factorial(k - 1)) + beta(k, p)
}
