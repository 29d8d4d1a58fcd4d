//! Truncated power series in `q^(1/24)`.
//!
//! Every exponent is an integer number of 1/24-units, so `q^n` is stored at
//! `24 n`, `eta`'s leading `q^(1/24)` at 1, and `theta_1`'s `q^(1/8)` at 3.
//! A series knows its coefficients below an exclusive bound, its
//! truncation; operations combine truncations by taking the minimum.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{padic_valuation, Rational, Valuation};
use crate::error::{Error, Result};

/// Number of grid units in one integral power of `q`.
pub const UNITS_PER_Q: i64 = 24;

/// Truncation, in units, of a series known through `q^n` inclusive.
pub fn units_through(n: u64) -> i64 {
    UNITS_PER_Q * (n as i64 + 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    terms: BTreeMap<i64, Rational>,
    truncation: i64,
}

impl QExpansion {
    pub fn zero(truncation: i64) -> Self {
        QExpansion { terms: BTreeMap::new(), truncation: truncation.max(0) }
    }

    pub fn one(truncation: i64) -> Self {
        Self::constant(Rational::one(), truncation)
    }

    pub fn constant(c: Rational, truncation: i64) -> Self {
        Self::monomial(c, 0, truncation)
    }

    pub fn monomial(c: Rational, exponent: i64, truncation: i64) -> Self {
        let mut s = Self::zero(truncation);
        s.set(exponent, c);
        s
    }

    /// Builds an integral-grid series from the coefficients of `q^0, q^1, ...`;
    /// the truncation is one past the last supplied power.
    pub fn from_q_coefficients<I>(coefficients: I) -> Self
    where
        I: IntoIterator<Item = Rational>,
    {
        let mut s = Self::zero(0);
        let mut n = 0;
        for c in coefficients {
            s.truncation = UNITS_PER_Q * (n + 1);
            s.set(UNITS_PER_Q * n, c);
            n += 1;
        }
        s
    }

    pub fn from_terms<I>(terms: I, truncation: i64) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let mut s = Self::zero(truncation);
        for (e, c) in terms {
            s.add_at(e, c);
        }
        s
    }

    /// Stores `c` at `exponent`, dropping zeros and anything at or beyond
    /// the truncation.
    pub fn set(&mut self, exponent: i64, c: Rational) {
        assert!(exponent >= 0, "negative q-exponents do not occur");
        if exponent >= self.truncation || c.is_zero() {
            self.terms.remove(&exponent);
        } else {
            self.terms.insert(exponent, c);
        }
    }

    pub fn add_at(&mut self, exponent: i64, c: Rational) {
        assert!(exponent >= 0, "negative q-exponents do not occur");
        if exponent >= self.truncation || c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponent).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    pub fn coefficient(&self, exponent: i64) -> Rational {
        self.terms.get(&exponent).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of the integral power `q^n`.
    pub fn q_coefficient(&self, n: u64) -> Rational {
        self.coefficient(UNITS_PER_Q * n as i64)
    }

    /// Coefficients of `q^0, ..., q^{m-1}` for every integral power below the
    /// truncation.
    pub fn q_coefficients(&self) -> Vec<Rational> {
        let count = self.known_q_powers();
        (0..count).map(|n| self.q_coefficient(n)).collect()
    }

    /// Number of integral powers `q^n` with `24 n < truncation`.
    pub fn known_q_powers(&self) -> u64 {
        if self.truncation <= 0 {
            0
        } else {
            ((self.truncation - 1) / UNITS_PER_Q + 1) as u64
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Every stored exponent is a multiple of 24.
    pub fn is_integral(&self) -> bool {
        self.terms.keys().all(|e| e % UNITS_PER_Q == 0)
    }

    /// Lowest stored exponent.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn truncate(&self, truncation: i64) -> Self {
        let t = truncation.min(self.truncation);
        QExpansion {
            terms: self.terms.range(..t).map(|(e, c)| (*e, c.clone())).collect(),
            truncation: t,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.truncation);
        }
        QExpansion {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
            truncation: self.truncation,
        }
    }

    /// Multiplies by `q^(units/24)`; the truncation moves with it.
    pub fn shift(&self, units: i64) -> Self {
        let mut out = Self::zero(self.truncation + units);
        for (e, c) in &self.terms {
            out.set(e + units, c.clone());
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let t = self.truncation.min(other.truncation);
        let rhs: Vec<(i64, &Rational)> = other.terms.iter().map(|(e, c)| (*e, c)).collect();
        let mut acc: BTreeMap<i64, Rational> = BTreeMap::new();
        for (ea, ca) in self.terms.range(..t) {
            for &(eb, cb) in &rhs {
                let e = ea + eb;
                if e >= t {
                    break;
                }
                *acc.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        QExpansion { terms: acc, truncation: t }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.truncation);
        for _ in 0..n {
            acc = acc.multiply(self);
        }
        acc
    }

    /// Multiplicative inverse up to the truncation. The series must start
    /// with a nonzero constant.
    pub fn invert(&self) -> Result<Self> {
        let a0 = match self.terms.iter().next() {
            Some((0, c)) => c.clone(),
            Some((e, _)) => {
                return Err(Error::NonInvertible(format!("lowest term sits at exponent {e}")))
            }
            None => return Err(Error::NonInvertible("zero series".into())),
        };
        let t = self.truncation;
        let inv0 = a0.recip();
        let step = self.terms.keys().fold(0i64, |g, e| g.gcd(e));
        let mut out = Self::constant(inv0.clone(), t);
        if step == 0 {
            return Ok(out);
        }
        let tail: Vec<(i64, &Rational)> =
            self.terms.iter().skip(1).map(|(e, c)| (*e, c)).collect();
        let mut e = step;
        while e < t {
            let mut s = Rational::zero();
            for &(ea, ca) in &tail {
                if ea > e {
                    break;
                }
                if let Some(b) = out.terms.get(&(e - ea)) {
                    s += ca * b;
                }
            }
            out.set(e, -s * &inv0);
            e += step;
        }
        Ok(out)
    }

    /// `q -> q^m`: exponent `e` becomes `m e`, and the truncation scales too.
    pub fn substitute_power(&self, m: u64) -> Self {
        assert!(m >= 1, "substitution power must be positive");
        let m = m as i64;
        QExpansion {
            terms: self.terms.iter().map(|(e, c)| (e * m, c.clone())).collect(),
            truncation: self.truncation * m,
        }
    }

    /// First exponent below `bound` where the two series differ, with both
    /// coefficients.
    pub fn first_difference(&self, other: &Self, bound: i64) -> Option<(i64, Rational, Rational)> {
        let mut exponents: Vec<i64> = self
            .terms
            .range(..bound)
            .map(|(e, _)| *e)
            .chain(other.terms.range(..bound).map(|(e, _)| *e))
            .collect();
        exponents.sort_unstable();
        exponents.dedup();
        exponents.into_iter().find_map(|e| {
            let (a, b) = (self.coefficient(e), other.coefficient(e));
            (a != b).then_some((e, a, b))
        })
    }
}

impl fmt::Display for QExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if e % UNITS_PER_Q == 0 {
                write!(f, "({c})*q^{}", e / UNITS_PER_Q)?;
            } else {
                write!(f, "({c})*q^({e}/24)")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^({}/24))", self.truncation)
    }
}

impl Add for &QExpansion {
    type Output = QExpansion;

    fn add(self, rhs: &QExpansion) -> QExpansion {
        let t = self.truncation.min(rhs.truncation);
        let mut out = self.truncate(t);
        for (e, c) in rhs.terms.range(..t) {
            out.add_at(*e, c.clone());
        }
        out
    }
}

impl Sub for &QExpansion {
    type Output = QExpansion;

    fn sub(self, rhs: &QExpansion) -> QExpansion {
        self + &(-rhs)
    }
}

impl Neg for &QExpansion {
    type Output = QExpansion;

    fn neg(self) -> QExpansion {
        QExpansion {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            truncation: self.truncation,
        }
    }
}

impl Mul for &QExpansion {
    type Output = QExpansion;

    fn mul(self, rhs: &QExpansion) -> QExpansion {
        self.multiply(rhs)
    }
}

/// `prod_{n >= 1} (1 - q^n)` by the pentagonal number theorem.
pub fn euler_function(truncation: i64) -> QExpansion {
    let mut s = QExpansion::zero(truncation);
    let mut j: i64 = 0;
    loop {
        let mut any = false;
        for m in if j == 0 { vec![0] } else { vec![j, -j] } {
            let e = UNITS_PER_Q * m * (3 * m - 1) / 2;
            if e < truncation {
                any = true;
                let sign = if m % 2 == 0 { 1 } else { -1 };
                s.set(e, crate::arith::rat(sign));
            }
        }
        if !any {
            break;
        }
        j += 1;
    }
    s
}

/// Outcome of a coefficientwise congruence test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Congruence {
    pub holds: bool,
    /// Least exponent where `v_p(a_e - b_e) < r`.
    pub first_failure: Option<i64>,
    /// Minimum of `v_p(a_e - b_e)` over all tested exponents.
    pub min_valuation: Valuation,
    pub bound: i64,
}

/// Tests `a ≡ b (mod p^r)` on every exponent below `bound`.
pub fn congruent_mod(a: &QExpansion, b: &QExpansion, p: u64, r: u32, bound: i64) -> Result<Congruence> {
    crate::arith::Prime::new(p)?;
    if bound > a.truncation || bound > b.truncation {
        return Err(Error::InsufficientTruncation(format!(
            "congruence bound {bound} exceeds truncations {} and {}",
            a.truncation, b.truncation
        )));
    }
    let mut exponents: Vec<i64> =
        a.terms.range(..bound).chain(b.terms.range(..bound)).map(|(e, _)| *e).collect();
    exponents.sort_unstable();
    exponents.dedup();
    let mut min_valuation = Valuation::Infinite;
    let mut first_failure = None;
    for e in exponents {
        let (x, y) = (a.coefficient(e), b.coefficient(e));
        for c in [&x, &y] {
            if !padic_valuation(c, p).at_least(0) {
                return Err(Error::NotIntegral { exponent: e, p });
            }
        }
        let v = padic_valuation(&(x - y), p);
        min_valuation = min_valuation.min(v);
        if first_failure.is_none() && !v.at_least(r as i64) {
            first_failure = Some(e);
        }
    }
    Ok(Congruence { holds: first_failure.is_none(), first_failure, min_valuation, bound })
}
