//! q-brackets: the partition average `<f>_q`, the normalized series
//! `calQ_k` and `calQ_k^(p)` by enumeration and by the closed double sum,
//! the correction series `f_k^(p)`, and brackets of polynomials in the `Q_i`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::{bernoulli, factorial, regularized_bernoulli, Prime, Rational};
use crate::error::{Error, Result};
use crate::partitions::{c_multiset, enumerate_partitions, q_value_from_multiset, beta, Partition};
use crate::series::{euler_function, units_through, QExpansion, UNITS_PER_Q};

/// Largest `N` for which series are computed by summing over partitions.
pub const ENUMERATION_LIMIT: u32 = 40;

/// `<f>_q` through `q^n`: `(sum_{|lambda| <= n} f(lambda) q^{|lambda|}) * prod (1 - q^m)`.
pub fn qbracket<F>(f: F, n: u32) -> QExpansion
where
    F: Fn(&Partition) -> Rational + Sync,
{
    let sums: Vec<Rational> = (0..=n)
        .into_par_iter()
        .map(|m| enumerate_partitions(m).fold(Rational::zero(), |acc, l| acc + f(&l)))
        .collect();
    let t = units_through(u64::from(n));
    let generating = QExpansion::from_terms(
        sums.into_iter().enumerate().map(|(m, s)| (UNITS_PER_Q * m as i64, s)),
        t,
    );
    generating.multiply(&euler_function(t))
}

/// Monomial in the generators: index `i` of `Q_i` mapped to its exponent.
pub type Monomial = BTreeMap<u32, u32>;

/// Element of `Q[Q_1, Q_2, ...]`, evaluated on partitions through the `Q_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShiftedSymmetricPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl ShiftedSymmetricPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::new(), c);
        p
    }

    /// `Q_index`; index 0 is not a generator.
    pub fn generator(index: u32) -> Result<Self> {
        if index == 0 {
            return Err(Error::OutOfContract("Q_0 is the constant 1, not a generator".into()));
        }
        let mut p = Self::zero();
        p.add_term(Monomial::from([(index, 1)]), Rational::one());
        Ok(p)
    }

    pub fn add_term(&mut self, monomial: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let monomial: Monomial = monomial.into_iter().filter(|(_, e)| *e > 0).collect();
        let entry = self.terms.entry(monomial.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&monomial);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = ma.clone();
                for (i, e) in mb {
                    *m.entry(*i).or_insert(0) += e;
                }
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(Rational::one()), |acc, _| acc.multiply(self))
    }

    fn monomial_grading(m: &Monomial) -> u32 {
        m.iter().map(|(i, e)| i * e).sum()
    }

    /// Largest monomial grading, with `Q_i` of weight `i`.
    pub fn grading(&self) -> u32 {
        self.terms.keys().map(Self::monomial_grading).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let g = self.grading();
        self.terms.keys().all(|m| Self::monomial_grading(m) == g)
    }

    pub fn evaluate(&self, lambda: &Partition) -> Rational {
        let c = c_multiset(lambda);
        let mut cache: BTreeMap<u32, Rational> = BTreeMap::new();
        let mut total = Rational::zero();
        for (m, coeff) in &self.terms {
            let mut value = coeff.clone();
            for (i, e) in m {
                let q = cache.entry(*i).or_insert_with(|| q_value_from_multiset(&c, *i, None));
                value *= num_traits::pow(q.clone(), *e as usize);
            }
            total += value;
        }
        total
    }
}

impl fmt::Display for ShiftedSymmetricPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            if idx == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            let a = c.abs();
            let vars: Vec<String> = m
                .iter()
                .map(|(i, e)| if *e == 1 { format!("Q{i}") } else { format!("Q{i}^{e}") })
                .collect();
            match (vars.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => f.write_str(&vars.join("*"))?,
                (false, false) => write!(f, "{a}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

pub fn bracket_of_polynomial(f: &ShiftedSymmetricPoly, n: u32) -> QExpansion {
    qbracket(|l| f.evaluate(l), n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Enumerate,
    Fast,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "enum" | "enumerate" => Ok(Method::Enumerate),
            "fast" => Ok(Method::Fast),
            other => Err(Error::OutOfContract(format!("unknown method '{other}'"))),
        }
    }
}

/// `2^{k-2} (k-1)!`.
fn normalization(k: u32) -> Rational {
    Rational::from_integer(num_traits::pow(BigInt::from(2), (k - 2) as usize) * factorial(k - 1))
}

/// Constant term `-B_k^{(p)} (2^{k-1} - 1) / (2k)` of `calQ_k^{(p)}`, for even `k >= 2`.
pub fn calq_constant(k: u32, p: Option<Prime>) -> Rational {
    let b = match p {
        None => bernoulli(k).expect("even weight"),
        Some(p) => regularized_bernoulli(k, p.get()).expect("even weight and prime"),
    };
    let two_pow = num_traits::pow(BigInt::from(2), (k - 1) as usize);
    -b * Rational::from_integer(two_pow - 1) / Rational::from_integer(BigInt::from(2 * k))
}

/// `calQ_k = 2^{k-2} (k-1)! <Q_k>_q` (or the regularized version), through `q^n`.
pub fn calq(k: u32, n: u32, p: Option<Prime>, method: Method) -> Result<QExpansion> {
    if k == 0 {
        return Err(Error::OutOfContract("calQ_0 has no normalization; use qbracket".into()));
    }
    let t = units_through(u64::from(n));
    if k % 2 == 1 {
        return Ok(QExpansion::zero(t));
    }
    match method {
        Method::Enumerate => calq_enumerate(k, n, p),
        Method::Fast => Ok(calq_fast(k, n, p)),
    }
}

fn calq_enumerate(k: u32, n: u32, p: Option<Prime>) -> Result<QExpansion> {
    if n > ENUMERATION_LIMIT {
        return Err(Error::OutOfContract(format!(
            "enumeration is limited to N <= {ENUMERATION_LIMIT}, got {n}"
        )));
    }
    let beta_k = beta(k, p);
    let fact = Rational::from_integer(factorial(k - 1));
    let bracket = qbracket(|l| c_multiset(l).signed_power_sum(k - 1, p) / &fact + &beta_k, n);
    Ok(bracket.scale(&normalization(k)))
}

/// The Taylor image of the crank-type double sum:
/// `const - sum_{n >= 1} sum_{m >= 0} (-1)^n (2m+1)^{k-1} q^{n(n+1)/2 + mn}`,
/// skipping `p | 2m+1` when regularized.
fn calq_fast(k: u32, n: u32, p: Option<Prime>) -> QExpansion {
    let bound = u64::from(n);
    let mut coeffs = vec![BigInt::zero(); n as usize + 1];
    let mut j: u64 = 1;
    while j * (j + 1) / 2 <= bound {
        let base = j * (j + 1) / 2;
        let mut m: u64 = 0;
        while base + m * j <= bound {
            let odd = 2 * m + 1;
            if p.map_or(true, |p| odd % p.get() != 0) {
                let term = num_traits::pow(BigInt::from(odd), (k - 1) as usize);
                let e = (base + m * j) as usize;
                if j % 2 == 1 {
                    coeffs[e] += term;
                } else {
                    coeffs[e] -= term;
                }
            }
            m += 1;
        }
        j += 1;
    }
    let mut s = QExpansion::from_terms(
        coeffs.into_iter().enumerate().map(|(e, c)| (UNITS_PER_Q * e as i64, Rational::from_integer(c))),
        units_through(bound),
    );
    s.add_at(0, calq_constant(k, p));
    s
}

/// `f_k^(p) = -sum_{n >= 1, (n,p) = 1} sum_{M >= 0} (-1)^n (2M+1)^{k-1} q^{(n^2 + n p (2M+1))/2}`
/// through `q^n`.
pub fn f_correction(k: u32, p: Prime, n: u32) -> Result<QExpansion> {
    if p.get() == 2 {
        return Err(Error::InvalidModulus(2));
    }
    if k < 2 || k % 2 == 1 {
        return Err(Error::OutOfContract(format!("f_correction needs even k >= 2, got {k}")));
    }
    let (p, bound) = (p.get(), u64::from(n));
    let mut coeffs = vec![BigInt::zero(); n as usize + 1];
    let mut j: u64 = 1;
    while (j * j + j * p) / 2 <= bound {
        if j % p != 0 {
            let mut big_m: u64 = 0;
            loop {
                let odd = 2 * big_m + 1;
                let e = (j * j + j * p * odd) / 2;
                if e > bound {
                    break;
                }
                let term = num_traits::pow(BigInt::from(odd), (k - 1) as usize);
                if j % 2 == 1 {
                    coeffs[e as usize] += term;
                } else {
                    coeffs[e as usize] -= term;
                }
                big_m += 1;
            }
        }
        j += 1;
    }
    Ok(QExpansion::from_terms(
        coeffs.into_iter().enumerate().map(|(e, c)| (UNITS_PER_Q * e as i64, Rational::from_integer(c))),
        units_through(bound),
    ))
}
