//! Truncated q-series whose coefficients are Laurent polynomials in
//! `zeta = e^{2 pi i z}`, with poles of the form `c / (zeta^m - zeta^{-m})`
//! carried symbolically beside the regular part.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{rat, Prime, Rational};
use crate::error::{Error, Result};
use crate::series::QExpansion;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZetaLaurent {
    terms: BTreeMap<i64, Rational>,
}

impl ZetaLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exponent: i64, c: Rational) -> Self {
        let mut l = Self::zero();
        l.add_at(exponent, c);
        l
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(terms: I) -> Self {
        let mut l = Self::zero();
        for (e, c) in terms {
            l.add_at(e, c);
        }
        l
    }

    /// `zeta^m - zeta^{-m}`.
    pub fn difference(m: i64) -> Self {
        Self::from_terms([(m, rat(1)), (-m, rat(-1))])
    }

    pub fn add_at(&mut self, exponent: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exponent).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    pub fn coefficient(&self, exponent: i64) -> Rational {
        self.terms.get(&exponent).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest `|exponent|` present.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|e| e.abs()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ZetaLaurent { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_at(ea + eb, ca * cb);
            }
        }
        out
    }

    /// Coefficient of `zeta^j` is minus that of `zeta^{-j}` for every `j`.
    pub fn is_antisymmetric(&self) -> bool {
        self.terms.iter().all(|(e, c)| {
            *e != 0 && self.terms.get(&-e).map_or(false, |d| (c + d).is_zero())
        })
    }

    /// Exact quotient by `zeta - zeta^{-1}`, via
    /// `zeta^m - zeta^{-m} = (zeta - zeta^{-1})(zeta^{m-1} + zeta^{m-3} + ... + zeta^{1-m})`.
    pub fn divide_by_zeta_difference(&self) -> Option<Self> {
        if !self.is_antisymmetric() {
            return None;
        }
        let mut out = Self::zero();
        for (m, c) in self.terms.range(1..) {
            let mut j = m - 1;
            while j >= -(m - 1) {
                out.add_at(j, c.clone());
                j -= 2;
            }
        }
        Some(out)
    }

    pub fn filter(&self, p: u64, keep: ZetaFilter) -> Self {
        let p = p as i64;
        ZetaLaurent {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep.keeps(**e % p == 0))
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn substitute(&self, power: i64) -> Self {
        ZetaLaurent { terms: self.terms.iter().map(|(e, c)| (e * power, c.clone())).collect() }
    }

    /// `sum_m c_m m^{k-1}`: the image of `(1/(2 pi i) d/dz)^{k-1}` at `z = 0`.
    pub fn moment(&self, k: u32) -> Rational {
        assert!(k >= 1, "moments start at k = 1");
        let mut acc = BigInt::zero();
        let mut acc_rat = Rational::zero();
        for (m, c) in &self.terms {
            let w = num_traits::pow(BigInt::from(*m), (k - 1) as usize);
            if c.is_integer() {
                acc += c.numer() * w;
            } else {
                acc_rat += c * Rational::from_integer(w);
            }
        }
        acc_rat + Rational::from_integer(acc)
    }
}

impl fmt::Display for ZetaLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let sep = if i == 0 {
                if c.is_negative() { "-" } else { "" }
            } else if c.is_negative() {
                " - "
            } else {
                " + "
            };
            let a = c.abs();
            f.write_str(sep)?;
            match (*e, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (e, true) => write!(f, "z^{e}")?,
                (e, false) => write!(f, "{a}*z^{e}")?,
            }
        }
        Ok(())
    }
}

/// Which zeta-exponents a filter retains, relative to a prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZetaFilter {
    Divisible,
    Coprime,
}

impl ZetaFilter {
    fn keeps(self, divisible: bool) -> bool {
        match self {
            ZetaFilter::Divisible => divisible,
            ZetaFilter::Coprime => !divisible,
        }
    }
}

/// The summand `coefficient / (zeta^order - zeta^{-order})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleTerm {
    pub order: u64,
    pub coefficient: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaQExpansion {
    regular: BTreeMap<i64, ZetaLaurent>,
    truncation: i64,
    pole: Vec<PoleTerm>,
}

impl ZetaQExpansion {
    pub fn zero(truncation: i64) -> Self {
        ZetaQExpansion { regular: BTreeMap::new(), truncation, pole: Vec::new() }
    }

    /// A zeta-free series.
    pub fn from_qexpansion(s: &QExpansion) -> Self {
        let mut out = Self::zero(s.truncation());
        for (e, c) in s.iter() {
            out.add_term(e, 0, c.clone());
        }
        out
    }

    pub fn add_term(&mut self, q_exponent: i64, zeta_exponent: i64, c: Rational) {
        if q_exponent >= self.truncation || c.is_zero() {
            return;
        }
        let entry = self.regular.entry(q_exponent).or_default();
        entry.add_at(zeta_exponent, c);
        if entry.is_zero() {
            self.regular.remove(&q_exponent);
        }
    }

    pub fn set_coefficient(&mut self, q_exponent: i64, value: ZetaLaurent) {
        if value.is_zero() || q_exponent >= self.truncation {
            self.regular.remove(&q_exponent);
        } else {
            self.regular.insert(q_exponent, value);
        }
    }

    /// Replaces the pole list, summing duplicate orders and dropping zeros.
    pub fn with_poles<I: IntoIterator<Item = PoleTerm>>(mut self, poles: I) -> Self {
        self.pole = normalize_poles(poles);
        self
    }

    pub fn poles(&self) -> &[PoleTerm] {
        &self.pole
    }

    /// The honest part, with the pole list dropped.
    pub fn regular_part(&self) -> Self {
        ZetaQExpansion { regular: self.regular.clone(), truncation: self.truncation, pole: Vec::new() }
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    pub fn coefficient(&self, q_exponent: i64) -> ZetaLaurent {
        self.regular.get(&q_exponent).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &ZetaLaurent)> + '_ {
        self.regular.iter().map(|(e, l)| (*e, l))
    }

    pub fn truncate(&self, truncation: i64) -> Self {
        let t = truncation.min(self.truncation);
        ZetaQExpansion {
            regular: self.regular.range(..t).map(|(e, l)| (*e, l.clone())).collect(),
            truncation: t,
            pole: self.pole.clone(),
        }
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.regular.values().all(ZetaLaurent::is_antisymmetric)
    }

    fn require_pole_free(&self) -> Result<()> {
        if self.pole.is_empty() {
            Ok(())
        } else {
            Err(Error::PoleNotCleared)
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.truncation);
        for (e, l) in &self.regular {
            out.set_coefficient(*e, l.scale(c));
        }
        out.pole = normalize_poles(
            self.pole.iter().map(|t| PoleTerm { order: t.order, coefficient: &t.coefficient * c }),
        );
        out
    }

    pub fn zq_multiply(&self, other: &Self) -> Result<Self> {
        self.require_pole_free()?;
        other.require_pole_free()?;
        let t = self.truncation.min(other.truncation);
        let mut out = Self::zero(t);
        for (ea, la) in self.regular.range(..t) {
            for (eb, lb) in &other.regular {
                let e = ea + eb;
                if e >= t {
                    break;
                }
                let prod = la.multiply(lb);
                let entry = out.regular.entry(e).or_default();
                for (z, c) in prod.iter() {
                    entry.add_at(z, c.clone());
                }
            }
        }
        out.regular.retain(|_, l| !l.is_zero());
        Ok(out)
    }

    /// Multiplies the regular part by a Laurent polynomial in zeta alone.
    pub fn multiply_laurent(&self, l: &ZetaLaurent) -> Result<Self> {
        self.require_pole_free()?;
        let mut out = Self::zero(self.truncation);
        for (e, c) in &self.regular {
            out.set_coefficient(*e, c.multiply(l));
        }
        Ok(out)
    }

    pub fn zeta_filter(&self, p: Prime, keep: ZetaFilter) -> Result<Self> {
        self.require_pole_free()?;
        let mut out = Self::zero(self.truncation);
        for (e, l) in &self.regular {
            out.set_coefficient(*e, l.filter(p.get(), keep));
        }
        Ok(out)
    }

    /// `zeta -> zeta^a`, `q -> q^b`; a pole `(m, c)` becomes `(a m, c)`.
    pub fn zeta_substitute(&self, zeta_power: u64, q_power: u64) -> Self {
        assert!(zeta_power >= 1 && q_power >= 1, "substitution powers must be positive");
        let (a, b) = (zeta_power as i64, q_power as i64);
        let mut out = Self::zero(self.truncation * b);
        for (e, l) in &self.regular {
            out.set_coefficient(e * b, l.substitute(a));
        }
        out.pole = self
            .pole
            .iter()
            .map(|t| PoleTerm { order: t.order * zeta_power, coefficient: t.coefficient.clone() })
            .collect();
        out
    }

    /// Exact division of the regular part by `zeta - zeta^{-1}`.
    pub fn divide_antisymmetric(&self) -> Result<Self> {
        self.require_pole_free()?;
        let mut out = Self::zero(self.truncation);
        for (e, l) in &self.regular {
            let quotient = l.divide_by_zeta_difference().ok_or(Error::NotDivisible(*e))?;
            out.set_coefficient(*e, quotient);
        }
        Ok(out)
    }

    /// `sum_e (sum_m c_{e,m} m^{k-1}) q^e`.
    pub fn taylor_extract(&self, k: u32) -> Result<QExpansion> {
        self.require_pole_free()?;
        if k == 0 {
            return Err(Error::OutOfContract("taylor_extract needs k >= 1".into()));
        }
        Ok(QExpansion::from_terms(
            self.regular.iter().map(|(e, l)| (*e, l.moment(k))),
            self.truncation,
        ))
    }

    /// Multiplies through by `prod (zeta^m - zeta^{-m})` over the pole
    /// orders, turning every pole summand into a Laurent polynomial.
    pub fn clear_poles(&self) -> Self {
        let factors: Vec<ZetaLaurent> =
            self.pole.iter().map(|t| ZetaLaurent::difference(t.order as i64)).collect();
        let all = factors.iter().fold(ZetaLaurent::constant(rat(1)), |acc, f| acc.multiply(f));
        let mut out = self.regular_part().multiply_laurent(&all).expect("regular part is pole-free");
        for (i, term) in self.pole.iter().enumerate() {
            let others = factors
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(ZetaLaurent::constant(rat(1)), |acc, (_, f)| acc.multiply(f));
            for (z, c) in others.iter() {
                out.add_term(0, z, c * &term.coefficient);
            }
        }
        out
    }

    /// First q-exponent below `bound` where the regular parts differ.
    pub fn first_difference(&self, other: &Self, bound: i64) -> Option<(i64, ZetaLaurent, ZetaLaurent)> {
        let mut exponents: Vec<i64> = self
            .regular
            .range(..bound)
            .chain(other.regular.range(..bound))
            .map(|(e, _)| *e)
            .collect();
        exponents.sort_unstable();
        exponents.dedup();
        exponents.into_iter().find_map(|e| {
            let (a, b) = (self.coefficient(e), other.coefficient(e));
            (a != b).then_some((e, a, b))
        })
    }

    /// Largest zeta-degree over all stored q-exponents.
    pub fn zeta_degree(&self) -> i64 {
        self.regular.values().map(ZetaLaurent::degree).max().unwrap_or(0)
    }
}

impl Add for &ZetaQExpansion {
    type Output = ZetaQExpansion;

    fn add(self, rhs: &ZetaQExpansion) -> ZetaQExpansion {
        let t = self.truncation.min(rhs.truncation);
        let mut out = self.truncate(t);
        for (e, l) in rhs.regular.range(..t) {
            for (z, c) in l.iter() {
                out.add_term(*e, z, c.clone());
            }
        }
        out.pole = normalize_poles(self.pole.iter().chain(rhs.pole.iter()).cloned());
        out
    }
}

impl Neg for &ZetaQExpansion {
    type Output = ZetaQExpansion;

    fn neg(self) -> ZetaQExpansion {
        self.scale(&rat(-1))
    }
}

impl Sub for &ZetaQExpansion {
    type Output = ZetaQExpansion;

    fn sub(self, rhs: &ZetaQExpansion) -> ZetaQExpansion {
        self + &(-rhs)
    }
}

fn normalize_poles<I: IntoIterator<Item = PoleTerm>>(poles: I) -> Vec<PoleTerm> {
    let mut merged: BTreeMap<u64, Rational> = BTreeMap::new();
    for t in poles {
        assert!(t.order >= 1, "pole order must be positive");
        *merged.entry(t.order).or_insert_with(Rational::zero) += t.coefficient;
    }
    merged
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(order, coefficient)| PoleTerm { order, coefficient })
        .collect()
}

/// Expansion of `c / (zeta^m - zeta^{-m})` in `|zeta| < 1`, i.e.
/// `-c sum_{i >= 0} zeta^{m(2i+1)}`, through zeta-degree `cap`.
pub fn one_sided_pole_expansion(order: u64, c: &Rational, cap: i64) -> ZetaLaurent {
    let m = order as i64;
    let mut l = ZetaLaurent::zero();
    let mut e = m;
    while e <= cap {
        l.add_at(e, -c.clone());
        e += 2 * m;
    }
    l
}

/// The exponent filter applied to the one-sided expansion of
/// `1/(zeta - zeta^{-1})` equals the one-sided expansion of
/// `1/(zeta^p - zeta^{-p})`, up to `cap`.
pub fn pole_filter_consistent(p: Prime, cap: i64) -> bool {
    let one = rat(1);
    one_sided_pole_expansion(1, &one, cap).filter(p.get(), ZetaFilter::Divisible)
        == one_sided_pole_expansion(p.get(), &one, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::frac;
    use proptest::prelude::*;

    fn z(terms: &[(i64, i64)]) -> ZetaLaurent {
        ZetaLaurent::from_terms(terms.iter().map(|&(e, c)| (e, rat(c))))
    }

    fn single(q: i64, l: ZetaLaurent, t: i64) -> ZetaQExpansion {
        let mut s = ZetaQExpansion::zero(t);
        s.set_coefficient(q, l);
        s
    }

    #[test]
    fn laurent_product() {
        let a = single(0, z(&[(1, 1), (-1, -1)]), 10);
        let b = single(0, z(&[(1, 1), (-1, 1)]), 10);
        assert_eq!(a.zq_multiply(&b).unwrap(), single(0, z(&[(2, 1), (-2, -1)]), 10));
    }

    #[test]
    fn multiply_requires_cleared_poles() {
        let a = ZetaQExpansion::zero(10).with_poles([PoleTerm { order: 1, coefficient: frac(1, 2) }]);
        assert_eq!(a.zq_multiply(&ZetaQExpansion::zero(10)), Err(Error::PoleNotCleared));
        assert_eq!(a.zeta_filter(Prime::new(5).unwrap(), ZetaFilter::Coprime), Err(Error::PoleNotCleared));
        assert_eq!(a.taylor_extract(2), Err(Error::PoleNotCleared));
    }

    #[test]
    fn filter_examples() {
        let mut s = ZetaQExpansion::zero(48);
        s.add_term(0, 3, rat(1));
        s.add_term(24, 5, rat(1));
        let p = Prime::new(5).unwrap();
        let div = s.zeta_filter(p, ZetaFilter::Divisible).unwrap();
        assert_eq!(div, single(24, z(&[(5, 1)]), 48));
        let cop = s.zeta_filter(p, ZetaFilter::Coprime).unwrap();
        assert_eq!(&div + &cop, s);
    }

    #[test]
    fn substitute_examples() {
        let s = single(24, z(&[(1, 1)]), 48);
        assert_eq!(s.zeta_substitute(5, 25), single(600, z(&[(5, 1)]), 1200));
        assert_eq!(s.zeta_substitute(1, 1), s);
        let poled = s.clone().with_poles([PoleTerm { order: 1, coefficient: frac(1, 2) }]);
        assert_eq!(poled.zeta_substitute(7, 49).poles(), &[PoleTerm { order: 7, coefficient: frac(1, 2) }]);
    }

    #[test]
    fn divide_examples() {
        let s = single(0, z(&[(3, 1), (-3, -1)]), 24);
        assert_eq!(s.divide_antisymmetric().unwrap(), single(0, z(&[(2, 1), (0, 1), (-2, 1)]), 24));
        let s = single(0, z(&[(1, 1), (-1, -1)]), 24);
        assert_eq!(s.divide_antisymmetric().unwrap(), single(0, z(&[(0, 1)]), 24));
        let bad = single(24, z(&[(1, 1), (-1, 1)]), 48);
        assert_eq!(bad.divide_antisymmetric(), Err(Error::NotDivisible(24)));
        let with_constant = single(0, z(&[(0, 2)]), 24);
        assert_eq!(with_constant.divide_antisymmetric(), Err(Error::NotDivisible(0)));
    }

    #[test]
    fn taylor_examples() {
        let s = single(0, z(&[(1, 1), (-1, -1)]), 24);
        assert_eq!(s.taylor_extract(2).unwrap(), QExpansion::constant(rat(2), 24));
        let anti = single(24, z(&[(3, 2), (-3, -2), (5, -7), (-5, 7)]), 48);
        for k in [1, 3, 5, 7] {
            assert!(anti.taylor_extract(k).unwrap().is_zero(), "k = {k}");
        }
    }

    #[test]
    fn clearing_simple_pole() {
        let f = single(24, z(&[(1, 1), (-1, -1)]), 48).with_poles([PoleTerm { order: 1, coefficient: frac(1, 2) }]);
        let cleared = f.clear_poles();
        let mut expected = single(24, z(&[(2, 1), (0, -2), (-2, 1)]), 48);
        expected.add_term(0, 0, frac(1, 2));
        assert_eq!(cleared, expected);
    }

    #[test]
    fn pole_merging() {
        let a = ZetaQExpansion::zero(24).with_poles([PoleTerm { order: 1, coefficient: frac(1, 2) }]);
        let b = ZetaQExpansion::zero(24)
            .with_poles([PoleTerm { order: 5, coefficient: frac(-1, 2) }, PoleTerm { order: 1, coefficient: frac(1, 2) }]);
        assert_eq!((&a - &b).poles(), &[PoleTerm { order: 5, coefficient: frac(1, 2) }]);
    }

    #[test]
    fn pole_filter_consistency() {
        for p in [3u64, 5, 7, 11] {
            for cap in [0, 1, 10, 35, 101] {
                assert!(pole_filter_consistent(Prime::new(p).unwrap(), cap), "p = {p}, cap = {cap}");
            }
        }
    }

    #[test]
    fn filter_commutes_only_with_p_supported_factor() {
        let p = Prime::new(3).unwrap();
        let a = single(0, z(&[(1, 1), (2, 1)]), 48);
        let supported = single(24, z(&[(3, 1), (-6, 2)]), 48);
        let lhs = a.zq_multiply(&supported).unwrap().zeta_filter(p, ZetaFilter::Divisible).unwrap();
        let rhs = a.zeta_filter(p, ZetaFilter::Divisible).unwrap().zq_multiply(&supported).unwrap();
        assert_eq!(lhs, rhs);

        let unsupported = single(24, z(&[(1, 1)]), 48);
        let lhs = a.zq_multiply(&unsupported).unwrap().zeta_filter(p, ZetaFilter::Divisible).unwrap();
        let rhs = a.zeta_filter(p, ZetaFilter::Divisible).unwrap().zq_multiply(&unsupported).unwrap();
        assert_ne!(lhs, rhs);
    }

    fn antisymmetric_series() -> impl Strategy<Value = ZetaQExpansion> {
        prop::collection::vec((0i64..6, 1i64..8, -5i64..=5), 0..10).prop_map(|terms| {
            let mut s = ZetaQExpansion::zero(24 * 6);
            for (q, m, c) in terms {
                s.add_term(24 * q, m, rat(c));
                s.add_term(24 * q, -m, rat(-c));
            }
            s
        })
    }

    fn zeta_free() -> impl Strategy<Value = QExpansion> {
        prop::collection::vec((0i64..6, -4i64..=4), 0..6)
            .prop_map(|t| QExpansion::from_terms(t.into_iter().map(|(e, c)| (24 * e, rat(c))), 24 * 6))
    }

    proptest! {
        #[test]
        fn division_is_exact(a in antisymmetric_series()) {
            let quotient = a.divide_antisymmetric().unwrap();
            let back = quotient.multiply_laurent(&ZetaLaurent::difference(1)).unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn taylor_is_linear_and_scalar_multiplicative(
            a in antisymmetric_series(), b in antisymmetric_series(), s in zeta_free(), k in 1u32..7
        ) {
            let sum = (&a + &b).taylor_extract(k).unwrap();
            prop_assert_eq!(sum, &a.taylor_extract(k).unwrap() + &b.taylor_extract(k).unwrap());
            let prod = a.zq_multiply(&ZetaQExpansion::from_qexpansion(&s)).unwrap().taylor_extract(k).unwrap();
            prop_assert_eq!(prod, a.taylor_extract(k).unwrap().multiply(&s));
        }
    }
}
