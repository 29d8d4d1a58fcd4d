//! Two-variable expansions: the doubled theta function, the regular parts of
//! the meromorphic Jacobi forms `F` and `F^(p)`, and exact checks of the
//! identities tying them to the brackets.

use std::str::FromStr;

use rayon::prelude::*;

use crate::arith::{frac, rat, Prime, Rational};
use crate::brackets::{calq, calq_constant, Method, ENUMERATION_LIMIT};
use crate::error::{Error, Result};
use crate::partitions::{c_multiset, enumerate_partitions};
use crate::report::{Claim, VerificationReport, Witness};
use crate::series::{euler_function, units_through, QExpansion, UNITS_PER_Q};
use crate::zetaseries::{pole_filter_consistent, PoleTerm, ZetaFilter, ZetaLaurent, ZetaQExpansion};

/// Lowest q-exponent of `theta_1(2z)`, in `q^(1/24)` units.
pub const THETA_LEADING_UNITS: i64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FMethod {
    Enumerate,
    DoubleSum,
}

impl FMethod {
    /// Enumeration within budget, the double sum beyond it.
    pub fn for_terms(n: u32) -> Self {
        if n <= ENUMERATION_LIMIT {
            FMethod::Enumerate
        } else {
            FMethod::DoubleSum
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            FMethod::Enumerate => "enumerate",
            FMethod::DoubleSum => "double_sum",
        }
    }
}

impl FromStr for FMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "enum" | "enumerate" => Ok(FMethod::Enumerate),
            "double_sum" | "double-sum" => Ok(FMethod::DoubleSum),
            other => Err(Error::OutOfContract(format!("unknown method '{other}'"))),
        }
    }
}

/// `theta_1(2z) = sum_n (-1)^n q^{(2n+1)^2/8} zeta^{2n+1}` below `t_units`.
pub fn theta1_doubled(t_units: i64) -> ZetaQExpansion {
    let mut out = ZetaQExpansion::zero(t_units);
    let mut odd: i64 = 1;
    while 3 * odd * odd < t_units {
        // n = (odd-1)/2 and its partner -n-1 carry opposite signs.
        let n = (odd - 1) / 2;
        let sign = if n % 2 == 0 { 1 } else { -1 };
        out.add_term(3 * odd * odd, odd, rat(sign));
        out.add_term(3 * odd * odd, -odd, rat(-sign));
        odd += 2;
    }
    out
}

/// Pole list of `F` (`p = None`) or `F^(p)`.
pub fn f_poles(p: Option<Prime>) -> Vec<PoleTerm> {
    let mut poles = vec![PoleTerm { order: 1, coefficient: frac(1, 2) }];
    if let Some(p) = p {
        poles.push(PoleTerm { order: p.get(), coefficient: frac(-1, 2) });
    }
    poles
}

/// Regular part of `F` or `F^(p)` through `q^n`, with the pole list attached.
pub fn f_regular(n: u32, p: Option<Prime>, method: FMethod) -> Result<ZetaQExpansion> {
    let t = units_through(u64::from(n));
    let regular = match method {
        FMethod::Enumerate => {
            if n > ENUMERATION_LIMIT {
                return Err(Error::OutOfContract(format!(
                    "enumeration is limited to N <= {ENUMERATION_LIMIT}, got {n}"
                )));
            }
            f_regular_enumerate(n, p)
        }
        FMethod::DoubleSum => f_regular_double_sum(n, p),
    };
    debug_assert!(regular.is_antisymmetric());
    debug_assert_eq!(regular.truncation(), t);
    Ok(regular.with_poles(f_poles(p)))
}

/// `(1/2) prod(1 - q^m) sum_lambda q^{|lambda|} sum_{c in C_lambda} sgn(c) zeta^{2c}`.
fn f_regular_enumerate(n: u32, p: Option<Prime>) -> ZetaQExpansion {
    let sums: Vec<ZetaLaurent> = (0..=n)
        .into_par_iter()
        .map(|m| {
            let mut acc = ZetaLaurent::zero();
            for lambda in enumerate_partitions(m) {
                for &d in c_multiset(&lambda).doubled() {
                    if p.map_or(false, |p| d % p.get() as i64 == 0) {
                        continue;
                    }
                    acc.add_at(d, rat(d.signum()));
                }
            }
            acc
        })
        .collect();
    let t = units_through(u64::from(n));
    let mut generating = ZetaQExpansion::zero(t);
    for (m, l) in sums.into_iter().enumerate() {
        generating.set_coefficient(UNITS_PER_Q * m as i64, l);
    }
    let euler = ZetaQExpansion::from_qexpansion(&euler_function(t));
    generating.zq_multiply(&euler).expect("pole-free").scale(&frac(1, 2))
}

/// `-(1/2) sum_{j >= 1} sum_{m >= 0} (-1)^j (zeta^{2m+1} - zeta^{-2m-1}) q^{j(j+1)/2 + mj}`.
fn f_regular_double_sum(n: u32, p: Option<Prime>) -> ZetaQExpansion {
    let bound = i64::from(n);
    let mut out = ZetaQExpansion::zero(units_through(u64::from(n)));
    let mut j: i64 = 1;
    while j * (j + 1) / 2 <= bound {
        let half = if j % 2 == 0 { frac(-1, 2) } else { frac(1, 2) };
        let mut m: i64 = 0;
        while j * (j + 1) / 2 + m * j <= bound {
            let odd = 2 * m + 1;
            if p.map_or(true, |p| odd % p.get() as i64 != 0) {
                let e = UNITS_PER_Q * (j * (j + 1) / 2 + m * j);
                out.add_term(e, odd, half.clone());
                out.add_term(e, -odd, -half.clone());
            }
            m += 1;
        }
        j += 1;
    }
    out
}

fn first_zeta_difference(a: &ZetaQExpansion, b: &ZetaQExpansion, bound: i64) -> Option<Witness> {
    a.first_difference(b, bound).map(|(e, x, y)| Witness::at(e, x, y))
}

/// Smallest `F_regular` truncation (in `q`) covering `t_units`.
fn terms_covering(t_units: i64) -> u32 {
    ((t_units + UNITS_PER_Q - 1) / UNITS_PER_Q) as u32
}

/// `2 [(zeta - zeta^{-1}) F] [theta_1(2z) / (zeta - zeta^{-1})] = eta^3` below
/// `t_units`, with `eta^3 = q^{1/8} prod(1 - q^m)^3`.
pub fn verify_eq65(t_units: i64) -> Result<VerificationReport> {
    if t_units < 27 {
        return Err(Error::InsufficientTruncation(format!(
            "eq65 needs at least 27 units to test a coefficient, got {t_units}"
        )));
    }
    let n = terms_covering(t_units);
    let f = f_regular(n, None, FMethod::for_terms(n))?;
    eq65_report(&f, t_units)
}

/// The eq65 comparison for a given `F` (regular part plus pole list).
pub fn eq65_report(f: &ZetaQExpansion, t_units: i64) -> Result<VerificationReport> {
    let report = VerificationReport::new(Claim::Eq65, UNITS_PER_Q as u32).param("units", t_units);
    if f.truncation() < t_units {
        return Err(Error::InsufficientTruncation(format!(
            "F known below {} units, need {t_units}",
            f.truncation()
        )));
    }
    let cleared = f.truncate(t_units).clear_poles();
    let theta = theta1_doubled(t_units).divide_antisymmetric()?;
    let lhs = cleared.zq_multiply(&theta)?.scale(&rat(2));
    let eta3 = euler_function(t_units).pow(3).shift(THETA_LEADING_UNITS).truncate(t_units);
    let rhs = ZetaQExpansion::from_qexpansion(&eta3);
    let mut report = report.conclude(t_units, first_zeta_difference(&lhs, &rhs, t_units));
    report.note("product_zeta_degree", lhs.zeta_degree());
    Ok(report)
}

/// The coprime filter of `F` equals `F^(p)`, and the filtered one-sided pole
/// expansion agrees with that of `(1/2)/(zeta^p - zeta^{-p})`.
pub fn verify_prop21(p: Prime, n: u32) -> Result<VerificationReport> {
    let full = f_regular(n, None, FMethod::for_terms(n))?;
    let regularized = f_regular(n, Some(p), FMethod::DoubleSum)?;
    let mut report = prop21_report(&full, &regularized, p, n)?;
    report.note("method_full", FMethod::for_terms(n).as_str());
    report.note("method_regularized", FMethod::DoubleSum.as_str());
    Ok(report)
}

pub fn prop21_report(
    full: &ZetaQExpansion,
    regularized: &ZetaQExpansion,
    p: Prime,
    n: u32,
) -> Result<VerificationReport> {
    let t = units_through(u64::from(n));
    let report = VerificationReport::new(Claim::Prop21, UNITS_PER_Q as u32)
        .param("p", p.get() as i64)
        .param("terms", n);
    let filtered = full.regular_part().zeta_filter(p, ZetaFilter::Coprime)?;
    let mut witness = first_zeta_difference(&filtered, &regularized.regular_part(), t);
    let cap = 2 * i64::from(n) + 1 + 4 * p.get() as i64;
    if witness.is_none() && !pole_filter_consistent(p, cap) {
        witness = Some(Witness::scalar("filtered one-sided pole expansion", "order-p pole expansion"));
    }
    if witness.is_none() && regularized.poles() != f_poles(Some(p)).as_slice() {
        witness = Some(Witness::scalar(format!("{:?}", regularized.poles()), format!("{:?}", f_poles(Some(p)))));
    }
    let mut report = report.conclude(t, witness);
    report.note("pole_cap", cap);
    Ok(report)
}

/// The double sum over `p ∤ n` left after separating `p | 2m+1`:
/// `-(1/2) sum sum (-1)^n (zeta^{p(2M+1)} - zeta^{-p(2M+1)}) q^{(n^2 + n p (2M+1))/2}`.
pub fn diffexp_tail(p: Prime, n: u32) -> ZetaQExpansion {
    let (pv, bound) = (p.get() as i64, i64::from(n));
    let mut out = ZetaQExpansion::zero(units_through(u64::from(n)));
    let mut j: i64 = 1;
    while (j * j + j * pv) / 2 <= bound {
        if j % pv != 0 {
            let half = if j % 2 == 0 { frac(-1, 2) } else { frac(1, 2) };
            let mut big_m: i64 = 0;
            loop {
                let odd = 2 * big_m + 1;
                let e = (j * j + j * pv * odd) / 2;
                if e > bound {
                    break;
                }
                out.add_term(UNITS_PER_Q * e, pv * odd, half.clone());
                out.add_term(UNITS_PER_Q * e, -pv * odd, -half.clone());
                big_m += 1;
            }
        }
        j += 1;
    }
    out
}

/// `F - F^(p) = F(pz; p^2 tau) + tail`, compared on regular parts with the
/// pole parts matched structurally.
pub fn verify_diffexp(p: Prime, n: u32) -> Result<VerificationReport> {
    let full = f_regular(n, None, FMethod::DoubleSum)?;
    let small_terms = (n + 1).div_ceil((p.get() * p.get()) as u32);
    let small = f_regular(small_terms, None, FMethod::for_terms(small_terms))?;
    let regularized = f_regular(n, Some(p), FMethod::DoubleSum)?;
    diffexp_report(&full, &small, &regularized, p, n)
}

pub fn diffexp_report(
    full: &ZetaQExpansion,
    small: &ZetaQExpansion,
    regularized: &ZetaQExpansion,
    p: Prime,
    n: u32,
) -> Result<VerificationReport> {
    let t = units_through(u64::from(n));
    let report = VerificationReport::new(Claim::Diffexp, UNITS_PER_Q as u32)
        .param("p", p.get() as i64)
        .param("terms", n);
    let sq = p.get() * p.get();
    if small.truncation() * (sq as i64) < t {
        return Err(Error::InsufficientTruncation(format!(
            "F(p z, p^2 tau) covers {} units, need {t}",
            small.truncation() * sq as i64
        )));
    }
    let substituted = small.zeta_substitute(p.get(), sq).truncate(t);
    let lhs = full.regular_part().zeta_filter(p, ZetaFilter::Divisible)?;
    let rhs = &substituted.regular_part() + &diffexp_tail(p, n);
    let mut witness = first_zeta_difference(&lhs, &rhs, t);
    let difference_poles = (full - regularized).poles().to_vec();
    if witness.is_none() && difference_poles != substituted.poles() {
        witness = Some(Witness::scalar(format!("{difference_poles:?}"), format!("{:?}", substituted.poles())));
    }
    Ok(report.conclude(t, witness))
}

/// `calQ_k = const + taylor_extract(F_regular, k)`, plain and regularized at
/// 5 and 7.
pub fn verify_taylor_chain(k: u32, n: u32) -> Result<VerificationReport> {
    let mut cases = Vec::new();
    for p in [None, Some(Prime::new(5)?), Some(Prime::new(7)?)] {
        let series = calq(k, n, p, Method::Fast)?;
        let f = f_regular(n, p, FMethod::DoubleSum)?;
        cases.push((p, series, f));
    }
    taylor_chain_report(k, n, &cases)
}

/// Checks each `(p, calQ, F)` triple in turn; the first failure is reported.
pub fn taylor_chain_report(
    k: u32,
    n: u32,
    cases: &[(Option<Prime>, QExpansion, ZetaQExpansion)],
) -> Result<VerificationReport> {
    if k == 0 {
        return Err(Error::OutOfContract("taylor chain needs k >= 1".into()));
    }
    let t = units_through(u64::from(n));
    let mut report = VerificationReport::new(Claim::TaylorChain, 1).param("k", k).param("terms", n);
    let mut witness = None;
    for (p, series, f) in cases {
        let constant = if k % 2 == 0 { calq_constant(k, *p) } else { Rational::from_integer(0.into()) };
        let extracted = f.regular_part().taylor_extract(k)?;
        let mut rhs = extracted;
        rhs.add_at(0, constant.clone());
        let tag = p.map_or("plain".to_string(), |p| format!("p{p}"));
        report.note(&format!("constant_{tag}"), &constant);
        if let Some((e, a, b)) = series.first_difference(&rhs, t) {
            witness = Some(Witness::at(e / UNITS_PER_Q, a, b));
            report.note("failing_case", &tag);
            break;
        }
    }
    Ok(report.conclude(n as i64 + 1, witness))
}
