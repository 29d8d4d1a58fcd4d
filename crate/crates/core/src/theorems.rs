//! Verification of the congruence, limit, filtration and correction-term
//! claims about `calQ_k` and `calQ_k^(p)`, producing structured reports.

use rayon::prelude::*;

use crate::arith::{legendre, padic_valuation, totient, Prime, Rational, Valuation};
use crate::brackets::{calq, f_correction, Method, ENUMERATION_LIMIT};
use crate::error::{Error, Result};
use crate::jacobi::{verify_diffexp, verify_eq65, verify_prop21, verify_taylor_chain};
use crate::modforms::{dim_quasimodular, filtration, quasi_decompose};
use crate::series::{congruent_mod, units_through, QExpansion, UNITS_PER_Q};

pub use crate::report::{Claim, VerificationReport, Verdict, Witness};

fn valuation_text(v: Valuation) -> String {
    match v {
        Valuation::Finite(v) => v.to_string(),
        Valuation::Infinite => "inf".to_string(),
    }
}

fn prime_at_least_5(p: u64) -> Result<Option<Prime>> {
    let p = Prime::new(p)?;
    Ok((p.get() >= 5).then_some(p))
}

fn fast(k: u32, n: u32, p: Option<Prime>) -> Result<QExpansion> {
    calq(k, n, p, Method::Fast)
}

/// `a ≡ b (mod p^r)` below `q^{n+1}`, as a report. `label` prefixes the
/// notes so several comparisons can share one report.
pub fn compare_mod(
    report: &mut VerificationReport,
    label: &str,
    a: &QExpansion,
    b: &QExpansion,
    p: Prime,
    r: u32,
    n: u32,
) -> Result<Option<Witness>> {
    let c = congruent_mod(a, b, p.get(), r, units_through(u64::from(n)))?;
    report.note(&format!("{label}_min_valuation"), valuation_text(c.min_valuation));
    Ok(c.first_failure.map(|e| Witness::at(e / UNITS_PER_Q, a.coefficient(e), b.coefficient(e))))
}

/// `calQ_{k1}^(p) ≡ calQ_{k2}^(p) (mod p^r)` when `k1 ≡ k2 (mod phi(p^r))`,
/// plus the unregularized link `calQ_k ≡ calQ_k^(p) (mod p^r)` at the larger
/// weight whenever `k - 1 >= r`.
pub fn check_thm_a(p: u64, r: u32, k1: u32, k2: u32, n: u32) -> Result<VerificationReport> {
    let report = VerificationReport::new(Claim::ThmA, 1)
        .param("p", p as i64)
        .param("r", r)
        .param("k1", k1)
        .param("k2", k2)
        .param("terms", n);
    let Some(prime) = prime_at_least_5(p)? else {
        return Ok(report.not_applicable("p < 5"));
    };
    if r == 0 {
        return Ok(report.not_applicable("r = 0"));
    }
    let m = p - 1;
    for k in [k1, k2] {
        if k == 0 || k % 2 == 1 {
            return Ok(report.not_applicable("weights must be positive and even"));
        }
        if u64::from(k) % m == 0 {
            return Ok(report.not_applicable("k ≡ 0 mod (p - 1)"));
        }
    }
    let phi = totient(p.pow(r));
    if u64::from(k1.abs_diff(k2)) % phi != 0 {
        return Ok(report.not_applicable("k1 ≢ k2 mod phi(p^r)"));
    }
    let mut report = report;
    let a = fast(k1, n, Some(prime))?;
    let b = fast(k2, n, Some(prime))?;
    let mut witness = compare_mod(&mut report, "regularized", &a, &b, prime, r, n)?;
    let top = k1.max(k2);
    if witness.is_none() && top > r {
        let plain = fast(top, n, None)?;
        let regularized = if top == k1 { &a } else { &b };
        witness = compare_mod(&mut report, "unregularized", &plain, regularized, prime, r, n)?;
    }
    Ok(report.conclude(n as i64 + 1, witness))
}

/// `calQ_{k + phi(p^i)} ≡ calQ_k^(p) (mod p^i)` for `i = 1..=i_max`.
pub fn check_thm_b(p: u64, k: u32, i_max: u32, n: u32) -> Result<VerificationReport> {
    let report = VerificationReport::new(Claim::ThmB, 1)
        .param("p", p as i64)
        .param("k", k)
        .param("i_max", i_max)
        .param("terms", n);
    let Some(prime) = prime_at_least_5(p)? else {
        return Ok(report.not_applicable("p < 5"));
    };
    if i_max == 0 {
        return Ok(report.not_applicable("i_max = 0 makes the check vacuous"));
    }
    if k == 0 || k % 2 == 1 || u64::from(k) % (p - 1) == 0 {
        return Ok(report.not_applicable("k must be even with k ≢ 0 mod (p - 1)"));
    }
    let mut report = report;
    let target = fast(k, n, Some(prime))?;
    let mut witness = None;
    for i in 1..=i_max {
        let weight = u64::from(k) + totient(p.pow(i));
        let weight = u32::try_from(weight).map_err(|_| Error::OutOfContract("weight overflow".into()))?;
        let g = fast(weight, n, None)?;
        witness = compare_mod(&mut report, &format!("i{i}"), &g, &target, prime, i, n)?;
        if witness.is_some() {
            report.note("failing_i", i);
            break;
        }
    }
    Ok(report.conclude(n as i64 + 1, witness))
}

/// Number of terms used to decompose `calQ_k` for the filtration check.
pub fn decomposition_terms(k: u32) -> u32 {
    (2 * dim_quasimodular(k) as u32 + 8).max(20)
}

/// The mod-p filtration of `calQ_k` is `k(p+1)/2`, after confirming
/// `calQ_k ≡ calQ_k^(p) (mod p)`.
pub fn check_thm_c(p: u64, k: u32) -> Result<VerificationReport> {
    check_filtration_against(p, k, None)
}

/// [`check_thm_c`] with an overridden expected weight, for negative controls.
pub fn check_filtration_against(p: u64, k: u32, expected: Option<u32>) -> Result<VerificationReport> {
    let report = VerificationReport::new(Claim::ThmC, 1).param("p", p as i64).param("k", k);
    let Some(prime) = prime_at_least_5(p)? else {
        return Ok(report.not_applicable("p < 5"));
    };
    if k == 0 || k % 2 == 1 || u64::from(k) >= p {
        return Ok(report.not_applicable("k must be even with k < p"));
    }
    if u64::from(k) % (p - 1) == 0 {
        return Ok(report.not_applicable("k ≡ 0 mod (p - 1): constant term not p-integral"));
    }
    let n = decomposition_terms(k);
    let mut report = report.param("terms", n);
    let plain = fast(k, n, None)?;
    let regularized = fast(k, n, Some(prime))?;
    if let Some(w) = compare_mod(&mut report, "plain_vs_regularized", &plain, &regularized, prime, 1, n)? {
        return Ok(report.conclude(n as i64 + 1, Some(w)));
    }
    let d = quasi_decompose(&plain, k, dim_quasimodular(k))?;
    let f = filtration(&d, prime)?;
    let expected = expected.unwrap_or(k * (p as u32 + 1) / 2);
    report.note("filtration", f.weight);
    report.note("expected", expected);
    report.note("decomposition", &d);
    let witness = (f.zero || f.weight != expected).then(|| Witness::scalar(f.weight, expected));
    Ok(report.conclude(n as i64 + 1, witness))
}

/// `calQ_k^(p) = calQ_k - p^{k-1} calQ_k(p^2 tau) - p^{k-1} f_k^(p)`, exactly.
pub fn check_thm_e(p: u64, k: u32, n: u32) -> Result<VerificationReport> {
    check_thm_e_with_power(p, k, n, None)
}

/// [`check_thm_e`] with the scaling power `p^e` overridden.
pub fn check_thm_e_with_power(p: u64, k: u32, n: u32, power: Option<u32>) -> Result<VerificationReport> {
    let report = VerificationReport::new(Claim::ThmE, 1).param("p", p as i64).param("k", k).param("terms", n);
    let Some(prime) = prime_at_least_5(p)? else {
        return Ok(report.not_applicable("p < 5"));
    };
    if k == 0 || k % 2 == 1 {
        return Ok(report.not_applicable("k must be positive and even"));
    }
    let mut report = report;
    let t = units_through(u64::from(n));
    let plain = fast(k, n, None)?;
    let regularized = fast(k, n, Some(prime))?;
    let sq = p * p;
    let inner = fast(k, n / sq as u32, None)?.substitute_power(sq).truncate(t);
    let scale = Rational::from_integer(prime.pow(power.unwrap_or(k - 1)));
    let correction = f_correction(k, prime, n)?;
    let rhs = &(&plain - &inner.scale(&scale)) - &correction.scale(&scale);
    let witness = regularized
        .first_difference(&rhs, t)
        .map(|(e, a, b)| Witness::at(e / UNITS_PER_Q, a, b));
    let disagreements: Vec<String> = (1..=u64::from(n))
        .filter(|&m| plain.q_coefficient(m) != regularized.q_coefficient(m))
        .take(8)
        .map(|m| format!("{m}:{}->{}", plain.q_coefficient(m), regularized.q_coefficient(m)))
        .collect();
    report.note("first_disagreements", disagreements.join(","));
    Ok(report.conclude(n as i64 + 1, witness))
}

/// Every exponent `N` in the support of `f_k^(p)` has `(N/p) = (2/p)`.
pub fn check_support_e(p: u64, k: u32, n: u32) -> Result<VerificationReport> {
    check_support_against(p, k, n, None)
}

/// [`check_support_e`] against an overridden target symbol.
pub fn check_support_against(p: u64, k: u32, n: u32, target: Option<i8>) -> Result<VerificationReport> {
    let report =
        VerificationReport::new(Claim::SupportE, 1).param("p", p as i64).param("k", k).param("terms", n);
    let Some(prime) = prime_at_least_5(p)? else {
        return Ok(report.not_applicable("p < 5"));
    };
    if k == 0 || k % 2 == 1 {
        return Ok(report.not_applicable("k must be positive and even"));
    }
    let mut report = report;
    let target = match target {
        Some(t) => t,
        None => legendre(2, p)?,
    };
    let f = f_correction(k, prime, n)?;
    let mut witness = None;
    let mut support = 0usize;
    for (e, _) in f.iter() {
        let m = e / UNITS_PER_Q;
        support += 1;
        let symbol = legendre(m, p)?;
        if symbol != target {
            witness = Some(Witness::at(m, symbol, target));
            break;
        }
    }
    report.note("support_size", support);
    report.note("target_symbol", target);
    Ok(report.conclude(n as i64 + 1, witness))
}

/// `v_p(calQ_k^(p) - calQ_k) >= k - 1` coefficientwise. When `(p-1) | k` the
/// constant term is not p-integral and is excluded; its valuation is noted.
pub fn check_eq_remark(p: u64, k: u32, n: u32) -> Result<VerificationReport> {
    check_eq_remark_at(p, k, n, None)
}

/// [`check_eq_remark`] with the exponent `r` overridden.
pub fn check_eq_remark_at(p: u64, k: u32, n: u32, r: Option<u32>) -> Result<VerificationReport> {
    let report =
        VerificationReport::new(Claim::EqRemark, 1).param("p", p as i64).param("k", k).param("terms", n);
    let Some(prime) = prime_at_least_5(p)? else {
        return Ok(report.not_applicable("p < 5"));
    };
    if k < 2 || k % 2 == 1 {
        return Ok(report.not_applicable("k must be even and at least 2"));
    }
    let mut report = report;
    let mut plain = fast(k, n, None)?;
    let mut regularized = fast(k, n, Some(prime))?;
    if u64::from(k) % (p - 1) == 0 {
        let diff = regularized.coefficient(0) - plain.coefficient(0);
        report.note("constant_excluded", "true");
        report.note("constant_valuation", valuation_text(padic_valuation(&diff, p)));
        plain.set(0, Rational::from_integer(0.into()));
        regularized.set(0, Rational::from_integer(0.into()));
    }
    let witness = compare_mod(&mut report, "difference", &regularized, &plain, prime, r.unwrap_or(k - 1), n)?;
    Ok(report.conclude(n as i64 + 1, witness))
}

/// Fast and enumerated `calQ_k` agree exactly.
pub fn check_oracle(k: u32, n: u32, p: Option<u64>) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(Claim::Oracle, 1).param("k", k).param("terms", n);
    if let Some(p) = p {
        report = report.param("p", p as i64);
    }
    if n > ENUMERATION_LIMIT {
        return Err(Error::OutOfContract(format!("oracle needs N <= {ENUMERATION_LIMIT}")));
    }
    let prime = p.map(Prime::new).transpose()?;
    let a = calq(k, n, prime, Method::Fast)?;
    let b = calq(k, n, prime, Method::Enumerate)?;
    let witness = a
        .first_difference(&b, units_through(u64::from(n)))
        .map(|(e, x, y)| Witness::at(e / UNITS_PER_Q, x, y));
    Ok(report.conclude(n as i64 + 1, witness))
}

type Job = Box<dyn Fn() -> Result<VerificationReport> + Send + Sync>;

fn suite_jobs() -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for k in (2..=12).step_by(2) {
        for p in [None, Some(5), Some(7)] {
            jobs.push(Box::new(move || check_oracle(k, 30, p)));
        }
    }
    for (p, r, k1, k2) in [(5, 2, 2, 22), (7, 1, 2, 8), (7, 2, 4, 88), (11, 1, 2, 12)] {
        jobs.push(Box::new(move || check_thm_a(p, r, k1, k2, 60)));
    }
    jobs.push(Box::new(|| check_thm_b(5, 2, 3, 50)));
    jobs.push(Box::new(|| check_thm_b(7, 4, 2, 50)));
    for (p, k) in [(5, 4), (5, 6), (7, 4), (7, 6)] {
        jobs.push(Box::new(move || check_eq_remark(p, k, 100)));
    }
    for (p, k) in [(5, 2), (5, 4), (7, 2), (7, 6)] {
        jobs.push(Box::new(move || check_thm_e(p, k, 150)));
    }
    for (p, k) in [(5, 2), (7, 4), (11, 2), (13, 6)] {
        jobs.push(Box::new(move || check_support_e(p, k, 2000)));
    }
    for (k, p) in [(2, 5), (2, 7), (4, 7), (6, 11), (10, 13)] {
        jobs.push(Box::new(move || check_thm_c(p, k)));
    }
    jobs.push(Box::new(|| verify_eq65(720)));
    for p in [3, 5, 7] {
        jobs.push(Box::new(move || verify_prop21(Prime::new(p)?, 30)));
    }
    for p in [5, 7] {
        jobs.push(Box::new(move || verify_diffexp(Prime::new(p)?, 60)));
    }
    for k in [2, 4, 6, 8, 22] {
        jobs.push(Box::new(move || verify_taylor_chain(k, 40)));
    }
    jobs
}

/// Runs the default grid concurrently; reports come back sorted by claim,
/// then parameters.
pub fn run_suite() -> Result<Vec<VerificationReport>> {
    let mut reports = suite_jobs().par_iter().map(|job| job()).collect::<Result<Vec<_>>>()?;
    reports.sort_by_key(VerificationReport::sort_key);
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thm_a_examples() {
        assert!(check_thm_a(5, 2, 2, 22, 60).unwrap().passed());
        assert!(check_thm_a(7, 1, 2, 8, 60).unwrap().passed());
        assert_eq!(check_thm_a(5, 1, 4, 8, 30).unwrap().verdict, Verdict::NotApplicable);
        assert_eq!(check_thm_a(5, 2, 2, 6, 30).unwrap().verdict, Verdict::NotApplicable);
        assert_eq!(check_thm_a(3, 1, 2, 4, 30).unwrap().verdict, Verdict::NotApplicable);
        assert!(check_thm_a(9, 1, 2, 4, 30).is_err());
    }

    #[test]
    fn thm_a_negative_control() {
        let p = Prime::new(5).unwrap();
        let a = fast(2, 60, Some(p)).unwrap();
        let b = fast(22, 60, Some(p)).unwrap();
        let mut r = VerificationReport::new(Claim::ThmA, 1);
        let w = compare_mod(&mut r, "twin", &a, &b, p, 3, 60).unwrap();
        assert!(w.is_some());
        assert_eq!(r.notes["twin_min_valuation"], "2");
    }

    #[test]
    fn thm_b_examples() {
        assert!(check_thm_b(7, 4, 2, 50).unwrap().passed());
        assert_eq!(check_thm_b(5, 2, 0, 50).unwrap().verdict, Verdict::NotApplicable);
    }

    #[test]
    fn thm_c_examples() {
        let r = check_thm_c(5, 2).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.notes["filtration"], "6");
        assert!(check_thm_c(7, 4).unwrap().passed());
        assert_eq!(check_thm_c(5, 4).unwrap().verdict, Verdict::NotApplicable);
        assert_eq!(check_thm_c(5, 6).unwrap().verdict, Verdict::NotApplicable);
        let twin = check_filtration_against(7, 4, Some(10)).unwrap();
        assert_eq!(twin.verdict, Verdict::Fail);
        assert!(twin.is_consistent());
    }

    #[test]
    fn thm_e_examples() {
        let r = check_thm_e(5, 2, 150).unwrap();
        assert!(r.passed());
        assert!(r.notes["first_disagreements"].starts_with("3:4->-1,7:8->13,8:15->0"));
        let twin = check_thm_e_with_power(5, 2, 60, Some(2)).unwrap();
        assert_eq!(twin.verdict, Verdict::Fail);
    }

    #[test]
    fn support_examples() {
        let r = check_support_e(5, 2, 10000).unwrap();
        assert!(r.passed());
        assert_eq!(r.notes["target_symbol"], "-1");
        let twin = check_support_against(5, 2, 100, Some(1)).unwrap();
        assert_eq!(twin.witness.unwrap().exponent, Some(3));
    }

    #[test]
    fn eq_remark_examples() {
        let r = check_eq_remark(5, 4, 100).unwrap();
        assert!(r.passed());
        assert_eq!(r.notes["difference_min_valuation"], "3");
        assert_eq!(r.notes["constant_valuation"], "2");
        let r6 = check_eq_remark(5, 6, 100).unwrap();
        assert!(r6.passed());
        assert!(!r6.notes.contains_key("constant_excluded"));
        assert_eq!(check_eq_remark_at(5, 4, 100, Some(4)).unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn verdicts_are_stable_under_doubling_truncation() {
        for (a, b) in [
            (check_thm_a(7, 1, 2, 8, 30), check_thm_a(7, 1, 2, 8, 60)),
            (check_thm_e(7, 2, 40), check_thm_e(7, 2, 80)),
            (check_eq_remark(7, 4, 40), check_eq_remark(7, 4, 80)),
            (check_support_e(11, 2, 300), check_support_e(11, 2, 600)),
            (check_eq_remark_at(5, 4, 40, Some(4)), check_eq_remark_at(5, 4, 80, Some(4))),
        ] {
            assert_eq!(a.unwrap().verdict, b.unwrap().verdict);
        }
    }

    #[test]
    fn oracle_reports() {
        assert!(check_oracle(6, 20, Some(7)).unwrap().passed());
        assert!(check_oracle(4, 41, None).is_err());
    }
}
