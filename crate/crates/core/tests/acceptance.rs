//! The twelve acceptance criteria, each at exact tolerance. Prints one line
//! per criterion and exits non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use qbrackets::arith::{frac, rat, Prime};
use qbrackets::brackets::{bracket_of_polynomial, calq, f_correction, Method};
use qbrackets::cli::{parse_q_polynomial, run, Document};
use qbrackets::jacobi::{
    diffexp_report, eq65_report, f_regular, prop21_report, taylor_chain_report, verify_diffexp, verify_eq65,
    verify_prop21, verify_taylor_chain, FMethod,
};
use qbrackets::modforms::{
    delta, dim_modular, dim_quasimodular, filtration, leading_g2_coefficient, normalized_eisenstein,
    quasi_decompose, sturm_bound, Filtration, QuasimodularPoly,
};
use qbrackets::series::{congruent_mod, euler_function, units_through, QExpansion, UNITS_PER_Q};
use qbrackets::theorems::{
    check_eq_remark, check_oracle, check_support_e, check_thm_a, check_thm_b, check_thm_c, check_thm_e,
    run_suite, Verdict, VerificationReport,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, message: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message.into())
    }
}

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let elapsed = start.elapsed();
    ensure(elapsed < limit, format!("took {elapsed:?}, limit {limit:?}"))
}

fn expect_pass(r: &VerificationReport) -> Result<(), String> {
    ensure(r.passed() && r.is_consistent(), format!("{} {:?}: {:?} {:?}", r.claim, r.parameters, r.verdict, r.witness))
}

fn cli_coefficients(args: &[&str]) -> Result<Vec<String>, String> {
    let mut argv = vec!["qbrackets"];
    argv.extend_from_slice(args);
    let out = run(argv);
    ensure(out.code == 0, format!("{args:?} exited {}: {}", out.code, out.stderr))?;
    match Document::from_json(&out.stdout).map_err(|e| e.to_string())? {
        Document::QExpansion(s) => Ok(s.coefficients.into_iter().map(|(_, c)| c).collect()),
        other => Err(format!("unexpected document {other:?}")),
    }
}

fn strings(values: &[&str]) -> Vec<String> {
    values.iter().map(|s| s.to_string()).collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let q2 = strings(&["-1/24", "1", "3", "4", "7", "6", "12", "8", "15", "13"]);
    let q2p = strings(&["1/6", "1", "3", "-1", "7", "6", "12", "13", "0", "13"]);
    let q22 = strings(&[
        "-162912981133/552",
        "1",
        "10460353203",
        "476837158203124",
        "558545864083284007",
        "109418989121052006006",
        "7400249944258160101212",
        "247064528596613234501288",
        "4987885095119476318359375",
        "69091933354462879257896413",
    ]);
    let q22p = strings(&[
        "19420740739464719098414873/138",
        "1",
        "10460353203",
        "-1",
        "558545864083284007",
        "109418989121052006006",
        "7400249944258160101212",
        "247064529073450392704413",
        "0",
        "69091933354462879257896413",
    ]);
    ensure(cli_coefficients(&["compute", "bracket", "--k", "2", "--terms", "9"])? == q2, "calQ_2")?;
    ensure(cli_coefficients(&["compute", "bracket", "--k", "2", "--terms", "9", "--p", "5"])? == q2p, "calQ_2^(5)")?;
    let fast22 = ["compute", "bracket", "--k", "22", "--terms", "9", "--method", "fast"];
    ensure(cli_coefficients(&fast22)? == q22, "calQ_22")?;
    let mut fast22p = fast22.to_vec();
    fast22p.extend_from_slice(&["--p", "5"]);
    ensure(cli_coefficients(&fast22p)? == q22p, "calQ_22^(5)")?;
    within(start, Duration::from_secs(10))?;
    Ok("40 printed coefficients reproduced exactly".into())
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for k in (2..=12).step_by(2) {
        for p in [None, Some(5), Some(7)] {
            let r = check_oracle(k, 30, p).map_err(|e| e.to_string())?;
            expect_pass(&r)?;
            count += 1;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{count} (k, p) pairs agree through q^30"))
}

fn criterion_3() -> Outcome {
    for (p, r, k1, k2) in [(5, 2, 2, 22), (7, 1, 2, 8), (7, 2, 4, 88), (11, 1, 2, 12)] {
        expect_pass(&check_thm_a(p, r, k1, k2, 60).map_err(|e| e.to_string())?)?;
    }
    let p5 = prime(5);
    let q22 = calq(22, 60, None, Method::Fast).unwrap();
    let q22p = calq(22, 60, Some(p5), Method::Fast).unwrap();
    let q2p = calq(2, 60, Some(p5), Method::Fast).unwrap();
    let bound = units_through(60);
    for (a, b, label) in [(&q22, &q22p, "calQ_22 ≡ calQ_22^(5)"), (&q22p, &q2p, "calQ_22^(5) ≡ calQ_2^(5)")] {
        let c = congruent_mod(a, b, 5, 2, bound).map_err(|e| e.to_string())?;
        ensure(c.holds, format!("{label} mod 25 fails at {:?}", c.first_failure))?;
    }
    Ok("4 congruences plus calQ_22 ≡ calQ_22^(5) ≡ calQ_2^(5) mod 25".into())
}

fn criterion_4() -> Outcome {
    expect_pass(&check_thm_b(5, 2, 3, 50).map_err(|e| e.to_string())?)?;
    expect_pass(&check_thm_b(7, 4, 2, 50).map_err(|e| e.to_string())?)?;
    Ok("weights 6, 22, 102 at p = 5; 10, 46 at p = 7".into())
}

fn criterion_5() -> Outcome {
    let mut mins = Vec::new();
    for (p, k) in [(5, 4), (5, 6), (7, 4), (7, 6)] {
        let r = check_eq_remark(p, k, 100).map_err(|e| e.to_string())?;
        expect_pass(&r)?;
        mins.push(format!("({p},{k}): min v_p {}", r.notes["difference_min_valuation"]));
    }
    Ok(mins.join(", "))
}

fn criterion_6() -> Outcome {
    for (p, k) in [(5, 2), (5, 4), (7, 2), (7, 6)] {
        expect_pass(&check_thm_e(p, k, 150).map_err(|e| e.to_string())?)?;
    }
    let p5 = prime(5);
    let plain = calq(2, 9, None, Method::Fast).unwrap();
    let reg = calq(2, 9, Some(p5), Method::Fast).unwrap();
    let f = f_correction(2, p5, 9).unwrap();
    for (n, before, after, fc) in [(3u64, 4, -1, 1), (7, 8, 13, -1), (8, 15, 0, 3)] {
        ensure(plain.q_coefficient(n) == rat(before), format!("calQ_2 at q^{n}"))?;
        ensure(reg.q_coefficient(n) == rat(after), format!("calQ_2^(5) at q^{n}"))?;
        ensure(f.q_coefficient(n) == rat(fc), format!("f_2^(5) at q^{n}"))?;
        ensure(rat(before) - rat(5) * rat(fc) == rat(after), format!("identity at q^{n}"))?;
    }
    Ok("identity exact to q^150; witnesses 4→-1, 8→13, 15→0".into())
}

fn criterion_7() -> Outcome {
    let mut sizes = Vec::new();
    for (p, k) in [(5, 2), (7, 4), (11, 2), (13, 6)] {
        let r = check_support_e(p, k, 2000).map_err(|e| e.to_string())?;
        expect_pass(&r)?;
        sizes.push(format!("p={p}: {} exponents", r.notes["support_size"]));
    }
    Ok(sizes.join(", "))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    for (k, p) in [(2, 5), (2, 7), (4, 7), (6, 11), (10, 13)] {
        expect_pass(&check_thm_c(p, k).map_err(|e| e.to_string())?)?;
    }
    let e4 = QuasimodularPoly::from_terms(4, [((0, 1, 0), rat(1))]);
    ensure(filtration(&e4, prime(5)).unwrap() == Filtration { weight: 0, zero: false }, "filtration(E4, 5)")?;
    let disc = QuasimodularPoly::from_terms(12, [((0, 3, 0), frac(1, 1728)), ((0, 0, 2), frac(-1, 1728))]);
    ensure(disc.to_series(10) == delta(10).unwrap(), "Delta decomposition")?;
    for p in [5, 7] {
        ensure(filtration(&disc, prime(p)).unwrap().weight == 12, format!("filtration(Delta, {p})"))?;
    }
    within(start, Duration::from_secs(60))?;
    Ok("filtrations 6, 8, 16, 36, 70; controls E4 → 0, Delta → 12".into())
}

fn criterion_9() -> Outcome {
    for k in (2..=14).step_by(2) {
        let dim = dim_quasimodular(k);
        let n = (2 * dim + 4) as u32;
        let s = calq(k, n, None, Method::Fast).unwrap();
        let d = quasi_decompose(&s, k, dim).map_err(|e| format!("k = {k}: {e}"))?;
        ensure(d.to_series(n) == s, format!("k = {k}: reconstructed series differs"))?;
        let (got, want) = leading_g2_coefficient(&d);
        ensure(got == want, format!("k = {k}: leading E2 coefficient {got} vs {want}"))?;
    }
    let poly = parse_q_polynomial("Q3^2").unwrap();
    let s = bracket_of_polynomial(&poly, 20);
    let d = quasi_decompose(&s, 6, dim_quasimodular(6)).map_err(|e| e.to_string())?;
    ensure(d.to_series(20) == s, "Q3^2 reconstruction")?;
    Ok(format!("calQ_k for k ≤ 14 and <Q3^2> = {d}"))
}

fn criterion_10() -> Outcome {
    expect_pass(&verify_eq65(720).map_err(|e| e.to_string())?)?;
    for p in [3, 5, 7] {
        expect_pass(&verify_prop21(prime(p), 30).map_err(|e| e.to_string())?)?;
    }
    for p in [5, 7] {
        expect_pass(&verify_diffexp(prime(p), 60).map_err(|e| e.to_string())?)?;
    }
    for k in [2, 4, 6, 8, 22] {
        expect_pass(&verify_taylor_chain(k, 40).map_err(|e| e.to_string())?)?;
    }

    // Mutation controls: one perturbed coefficient must flip each verdict.
    let perturb = |f: &qbrackets::zetaseries::ZetaQExpansion, q: i64, z: i64| {
        let mut g = f.clone();
        g.add_term(UNITS_PER_Q * q, z, rat(1));
        g.add_term(UNITS_PER_Q * q, -z, rat(-1));
        g
    };
    let fails = |r: VerificationReport| r.verdict == Verdict::Fail && r.is_consistent();
    let f30 = f_regular(30, None, FMethod::Enumerate).unwrap();
    ensure(fails(eq65_report(&perturb(&f30, 17, 5), 720).unwrap()), "eq65 mutation")?;
    for p in [3, 5, 7] {
        let reg = f_regular(30, Some(prime(p)), FMethod::DoubleSum).unwrap();
        ensure(fails(prop21_report(&f30, &perturb(&reg, 11, 1), prime(p), 30).unwrap()), "prop21 mutation")?;
    }
    for p in [5u64, 7] {
        let full = f_regular(60, None, FMethod::DoubleSum).unwrap();
        let small = f_regular(60 / (p * p) as u32 + 1, None, FMethod::Enumerate).unwrap();
        let reg = f_regular(60, Some(prime(p)), FMethod::DoubleSum).unwrap();
        let bad = perturb(&full, 40, p as i64);
        ensure(fails(diffexp_report(&bad, &small, &reg, prime(p), 60).unwrap()), "diffexp mutation")?;
    }
    for k in [2u32, 4, 6, 8, 22] {
        let mut s = calq(k, 40, None, Method::Fast).unwrap();
        s.add_at(UNITS_PER_Q * 13, rat(1));
        let f = f_regular(40, None, FMethod::DoubleSum).unwrap();
        ensure(fails(taylor_chain_report(k, 40, &[(None, s, f)]).unwrap()), "taylor-chain mutation")?;
    }
    Ok("11 identity checks pass; 11 mutation controls fail as required".into())
}

fn criterion_11() -> Outcome {
    for p in [5u32, 7, 11, 13] {
        let len = sturm_bound(p + 1) as u32;
        let bound = units_through(u64::from(len) - 1);
        let one = QExpansion::one(bound);
        let e_minus = normalized_eisenstein(p - 1, len);
        let c = congruent_mod(&e_minus, &one, u64::from(p), 1, bound).map_err(|e| e.to_string())?;
        ensure(c.holds, format!("E_{} ≢ 1 mod {p}", p - 1))?;
        let e2 = normalized_eisenstein(2, len);
        let e_plus = normalized_eisenstein(p + 1, len);
        let c = congruent_mod(&e2, &e_plus, u64::from(p), 1, bound).map_err(|e| e.to_string())?;
        ensure(c.holds, format!("E_2 ≢ E_{} mod {p}", p + 1))?;
        ensure(dim_modular(p + 1) < len as usize, "Sturm bound covers the dimension")?;
    }
    let t = 1200;
    let mut product = QExpansion::one(t);
    for n in 1..=(t / UNITS_PER_Q) {
        let factor = QExpansion::from_terms([(0, rat(1)), (UNITS_PER_Q * n, rat(-1))], t);
        product = product.multiply(&factor);
    }
    ensure(product == euler_function(t), "pentagonal expansion differs from the product")?;
    Ok("E_{p-1} ≡ 1, E_2 ≡ E_{p+1} for p ∈ {5,7,11,13}; euler function to 1200 units".into())
}

fn criterion_12() -> Outcome {
    let first = Document::Suite { reports: run_suite().map_err(|e| e.to_string())? }.to_json();
    let second = Document::Suite { reports: run_suite().map_err(|e| e.to_string())? }.to_json();
    ensure(first == second, "suite reports differ between runs")?;
    let cli_a = run(["qbrackets", "verify", "thm-e", "--p", "5", "--k", "2", "--terms", "60"]);
    let cli_b = run(["qbrackets", "verify", "thm-e", "--p", "5", "--k", "2", "--terms", "60"]);
    ensure(cli_a.stdout == cli_b.stdout && cli_a.code == 0, "CLI output differs between runs")?;
    let reparsed = Document::from_json(&first).map_err(|e| e.to_string())?.to_json();
    ensure(reparsed == first, "suite document does not round-trip")?;
    Ok(format!("{} bytes identical across two runs", first.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("paper-table reproduction", criterion_1),
        ("oracle gate", criterion_2),
        ("theorem (a)", criterion_3),
        ("theorem (b) proxy", criterion_4),
        ("remark congruence", criterion_5),
        ("theorem (e)", criterion_6),
        ("support claim", criterion_7),
        ("theorem (c) filtration", criterion_8),
        ("quasimodularity certificates", criterion_9),
        ("jacobi suite", criterion_10),
        ("prerequisite properties", criterion_11),
        ("determinism", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS  {:>2}. {name} ({ms} ms): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL  {:>2}. {name} ({ms} ms): {why}", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
