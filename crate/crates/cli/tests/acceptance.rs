//! End-to-end acceptance run. Every criterion prints one PASS/FAIL line;
//! the test fails if any criterion does.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use qeta::{run_with, Env};
use qeta_core::elliptic::{division_poly, newton_polygon, WeierstrassCurve};
use qeta_core::etaforms::{
    count_type_ia_groups, eta_expand, eta_recognize, product_form_to_series, series_to_product_form, EtaQuotient,
    Recognition,
};
use qeta_core::exactnum::{FieldElement, Polynomial, Rational};
use qeta_core::puiseux::{qm_terms, solve_branches, verify_solution, BivariatePoly, PartitionCache, SolveOptions};
use qeta_core::qseries::RationalSeries;
use qeta_core::ubdcert::{certify_eta_root_ubd, denominator_profile, reconfirm_certificate, verify_inverse_growth_law, EtaRootOutcome};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use serde_json::Value;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn cli_json(args: &[&str]) -> (i32, Value) {
    let mut input: &[u8] = b"";
    let argv = std::iter::once("qeta").chain(args.iter().copied()).chain(std::iter::once("--json"));
    let out = run_with(argv, Env { default_t: None, stdin: &mut input });
    let v = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    (out.code, v)
}

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

fn fixture() -> WeierstrassCurve {
    WeierstrassCurve::from_general([q(0), q(-1), q(1), q(-10), q(-20)]).unwrap().curve
}

fn random_quotient(rng: &mut StdRng) -> EtaQuotient {
    let k = rng.random_range(1..5);
    let factors: Vec<(u64, i64)> = (0..k).map(|_| (rng.random_range(1..9u64), rng.random_range(-6..7i64))).collect();
    EtaQuotient::from_factors(&factors).unwrap()
}

fn delta_golden() -> Check {
    let start = Instant::now();
    let (code, v) = cli_json(&["eta", "expand", "--eta", "eta(1)^24", "--T", "200"]);
    let elapsed = start.elapsed();
    ensure!(code == 0, "exit code {code}");
    let s = &v["result"]["series"];
    let c = s["coeffs"].as_array().ok_or("no coefficients")?;
    ensure!(c.len() == 200 && s["v"] == 1, "unexpected shape v={} len={}", s["v"], c.len());
    let head: Vec<&str> = c[..3].iter().map(|x| x.as_str().unwrap_or("?")).collect();
    ensure!(head == ["1", "-24", "252"], "leading coefficients {head:?}");
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("1, -24, 252 at T=200 in {elapsed:.2?}"))
}

fn delta_inverse_integral() -> Check {
    let (code, v) = cli_json(&["series", "invert", "--eta", "eta(1)^24", "--T", "200"]);
    ensure!(code == 0, "exit code {code}");
    let d = &v["result"]["denominator"];
    ensure!(d["A"] == "1" && d["T"] == 200, "denominator report {d}");
    let c = v["result"]["series"]["coeffs"].as_array().ok_or("no coefficients")?;
    let integral = c.iter().all(|x| x.as_str().is_some_and(|s| !s.contains('/')));
    ensure!(integral && c.len() == 200, "non-integral coefficient");
    Ok(format!("200 coefficients of 1/Delta, common denominator {}", d["A"]))
}

fn product_round_trip() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut cases = vec![EtaQuotient::new(vec![(1, 24)]).unwrap(), EtaQuotient::new(vec![(1, 1), (2, 1)]).unwrap()];
    cases.extend((0..20).map(|_| random_quotient(&mut rng)));
    for e in &cases {
        let s = eta_expand(e, 100).map_err(|x| x.to_string())?;
        let form = series_to_product_form(&s).map_err(|x| x.to_string())?;
        let back = product_form_to_series(&form).map_err(|x| x.to_string())?;
        ensure!(back == s, "round trip differs for {e}");
        ensure!(form.t() == 99, "product form of {e} has T = {}", form.t());
    }
    Ok(format!("{} quotients, series -> product -> series exact at T=100", cases.len()))
}

fn divisor_sum_law() -> Check {
    let mut rng = StdRng::seed_from_u64(0xd1u64);
    let mut n = 0;
    for _ in 0..25 {
        let e = random_quotient(&mut rng);
        if e.is_unit() {
            continue;
        }
        n += 1;
        let form = series_to_product_form(&eta_expand(&e, 100).map_err(|x| x.to_string())?).map_err(|x| x.to_string())?;
        let weighted: i64 = e.terms().iter().map(|&(a, x)| a as i64 * x).sum();
        ensure!(form.r == Rational::from_frac(weighted, 24), "r for {e}");
        for m in 1..=form.t() {
            let expected: i64 = e.terms().iter().filter(|&&(a, _)| (m as u64).is_multiple_of(a)).map(|t| t.1).sum();
            ensure!(form.exponent(m) == Some(&q(expected)), "c({m}) for {e}");
        }
        ensure!(eta_recognize(&form) == Recognition::Eta { quotient: e.clone(), t: 99 }, "recognition of {e}");
    }
    Ok(format!("{n} random quotients, c(m) and r exact through T=100"))
}

fn all_small_quotients() -> Vec<EtaQuotient> {
    let exps: Vec<i64> = (-6..=6).filter(|&e| e != 0).collect();
    let mut out = Vec::new();
    for mask in 1u32..16 {
        let args: Vec<u64> = (1..=4).filter(|a| mask & (1 << (a - 1)) != 0).collect();
        if args.len() > 3 {
            continue;
        }
        let mut idx = vec![0usize; args.len()];
        loop {
            let terms = args.iter().zip(&idx).map(|(&a, &i)| (a, exps[i])).collect();
            out.push(EtaQuotient::new(terms).unwrap());
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < exps.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    out
}

fn ubd_dichotomy() -> Check {
    let start = Instant::now();
    let quotients = all_small_quotients();
    let mut certs = 0;
    let mut roots = 0;
    for (p, e) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1), (3, 2)] {
        let pe = p.pow(e);
        for x in &quotients {
            let divides = x.exponent_gcd() % pe == 0;
            match certify_eta_root_ubd(x, p, e).map_err(|err| err.to_string())? {
                EtaRootOutcome::EtaRootIsEtaQuotient(r) => {
                    ensure!(divides, "{x} at {pe}: quotient without divisibility");
                    ensure!(x.root(pe) == Some(r), "{x} at {pe}: wrong root");
                    roots += 1;
                }
                EtaRootOutcome::Certified(cert) => {
                    ensure!(!divides, "{x} at {pe}: certificate despite divisibility");
                    ensure!(reconfirm_certificate(x, &cert).map_err(|err| err.to_string())?, "{x} at {pe}: not reconfirmed");
                    certs += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!("{} quotients x 5 prime powers: {certs} certificates reconfirmed, {roots} eta roots, {elapsed:.1?}", quotients.len()))
}

fn growth_profile() -> Check {
    let f = RationalSeries::from_i64s(0, &[1, 1], 100);
    let root = f.nth_root(2, None).map_err(|x| x.to_string())?;
    let prof = denominator_profile(&root, 2).map_err(|x| x.to_string())?;
    ensure!(prof.running_max.windows(2).all(|w| w[0] <= w[1]), "running max decreases");
    let at64 = prof.max_through(64).ok_or("no samples")?;
    ensure!(at64 > 50, "running max {at64} at m = 64");
    Ok(format!("running max of -ord_2 is nondecreasing and reaches {at64} by m = 64"))
}

fn q4_display() -> Check {
    let expected = [
        "a_4*h'_0(a_0)",
        "a_3*a_1*h''_0(a_0)",
        "a_3*h'_1(a_0)",
        "1/2*a_2^2*h''_0(a_0)",
        "1/2*a_2*a_1^2*h'''_0(a_0)",
        "a_2*a_1*h''_1(a_0)",
        "a_2*h'_2(a_0)",
        "1/24*a_1^4*h''''_0(a_0)",
        "1/6*a_1^3*h'''_1(a_0)",
        "1/2*a_1^2*h''_2(a_0)",
        "a_1*h'_3(a_0)",
        "h_4(a_0)",
    ];
    let got: Vec<String> = qm_terms(4, None, &mut PartitionCache::new()).iter().map(|t| t.to_string()).collect();
    ensure!(got == expected, "Q_4 = {}", got.join(" + "));
    Ok("12 terms in order".into())
}

fn puiseux_examples() -> Check {
    let start = Instant::now();
    let opts = SolveOptions { terms: 50, ..SolveOptions::default() };
    let solve = |g: &BivariatePoly| -> Result<_, String> {
        let rep = solve_branches(g, &opts).map_err(|x| x.to_string())?;
        ensure!(rep.pending.is_empty(), "pending branches for {g}");
        for b in &rep.branches {
            let v = verify_solution(g, b).map_err(|x| x.to_string())?;
            ensure!(v.ok && v.residual.is_zero(), "residual of {b} does not vanish");
        }
        Ok(rep)
    };
    let r = Rational::zero;
    // (a) x^2 - (1 + q)
    let ga = BivariatePoly::new([(2, r(), q(1)), (0, r(), q(-1)), (0, q(1), q(-1))]);
    let a = solve(&ga)?;
    ensure!(a.branches.len() == 2, "(a) has {} branches", a.branches.len());
    for b in &a.branches {
        let sq = b.series().square();
        let lead = sq.leading().ok_or("zero square")?;
        ensure!(lead.as_rational() == Some(q(1)), "(a) square starts with {lead}");
        let c1 = sq.coeff(1).and_then(|c| c.as_rational());
        ensure!(c1 == Some(q(1)) && sq.coeffs()[2..].iter().all(|c| c.is_zero()), "(a) square is not 1 + q");
        ensure!(sq.t() >= 51, "(a) square known only to q^{}", sq.t());
    }
    // (b) x^2 - q(1 + q)
    let gb = BivariatePoly::new([(2, r(), q(1)), (0, q(1), q(-1)), (0, q(2), q(-1))]);
    let b = solve(&gb)?;
    ensure!(b.branches.len() == 2 && b.branches.iter().all(|x| x.w == 2), "(b) branches {:?}", b.branches.len());
    for br in &b.branches {
        let v = verify_solution(&gb, br).map_err(|x| x.to_string())?;
        ensure!(v.required >= Rational::from_frac(51, 2), "(b) residual only O(q^{})", v.required);
    }
    // (c) (x - 1)^2 - q^4
    let gc = BivariatePoly::new([(2, r(), q(1)), (1, r(), q(-2)), (0, r(), q(1)), (0, q(4), q(-1))]);
    let c = solve(&gc)?;
    ensure!(c.branches.len() == 2 && c.branches.iter().all(|x| x.has_case2() && x.exact), "(c) trace");
    let mut shown: Vec<String> = c.branches.iter().map(|x| x.to_string()).collect();
    shown.sort();
    ensure!(shown == ["1 + q^2", "1 - q^2"], "(c) branches {shown:?}");
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!("(a) 2 branches, (b) w = 2 with residual beyond q^(51/2), (c) 1 +- q^2 via case 2; {elapsed:.2?}"))
}

fn division_polynomials() -> Check {
    // Coefficients of psi_3 have degree <= 2 in A and in B, so agreement on
    // a 5 x 5 grid is a symbolic identity.
    for a in -2..=2 {
        for b in -2..=2 {
            let Ok(curve) = WeierstrassCurve::new(q(a), q(b)) else { continue };
            let psi = division_poly(&curve, 3).map_err(|x| x.to_string())?.poly;
            let expect = Polynomial::from_i64s(&[-a * a, 12 * b, 6 * a, 0, 3]);
            ensure!(psi == expect, "psi_3 for A={a}, B={b}: {psi}");
        }
    }
    let curve = fixture();
    for p in [3u64, 5, 7, 11, 13] {
        let psi = division_poly(&curve, p).map_err(|x| x.to_string())?.poly;
        ensure!(psi.degree() == Some(((p * p - 1) / 2) as usize), "deg psi_{p}");
        ensure!(psi.leading() == Some(&q(p as i64)), "leading coefficient of psi_{p}");
    }
    Ok(format!("psi_3 identity; fixture y^2 = x^3 + ({})x + ({}) has the expected shape for p <= 13", curve.a, curve.b))
}

fn screening_slice() -> Check {
    let start = Instant::now();
    let (code, v) = cli_json(&["ec", "screen", "--general", "0,-1,1,-10,-20", "--pmax", "13", "--aux-primes", "2..200"]);
    let elapsed = start.elapsed();
    ensure!(code == 0 || code == 2, "exit code {code}");
    let primes = v["result"]["primes"].as_array().ok_or("no primes")?;
    let curve = fixture();
    let mut summary = Vec::new();
    for r in primes {
        let p = r["p"].as_u64().ok_or("bad p")?;
        let cert = &r["certificate"];
        let verdict = cert["verdict"].as_str().unwrap_or("?");
        summary.push(format!("{p}:{verdict}"));
        if p == 5 {
            ensure!(verdict == "Reducible", "p = 5 is {verdict}");
            let root: Rational = cert["root"].as_str().ok_or("no root")?.parse().map_err(|_| "bad root")?;
            let psi = division_poly(&curve, 5).map_err(|x| x.to_string())?.poly;
            ensure!(psi.eval(&root).is_zero(), "claimed root {root} of psi_5 is not a root");
            continue;
        }
        ensure!(verdict != "Reducible", "p = {p} reported reducible");
        if p == 3 || p == 7 {
            ensure!(verdict == "Irreducible", "p = {p} not certified irreducible");
        }
        if verdict == "Inconclusive" {
            let allowed: Vec<u64> = cert["allowedFactorDegrees"].as_array().ok_or("no degrees")?.iter().filter_map(Value::as_u64).collect();
            ensure!(allowed.iter().all(|&d| d > 2), "p = {p}: factor degrees {allowed:?} not excluded");
        }
    }
    let listed: Vec<u64> = primes.iter().filter_map(|r| r["p"].as_u64()).collect();
    ensure!(listed == [3, 5, 7, 11, 13], "primes {listed:?}");
    ensure!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    Ok(format!("{} in {elapsed:.2?}", summary.join(" ")))
}

fn inverse_growth() -> Check {
    let x = RationalSeries::from_i64s(-2, &[1], 110);
    let rep = verify_inverse_growth_law(&x, &Rational::from_frac(1, 9), 3, 2).map_err(|e| e.to_string())?;
    for n in 0..=50usize {
        let got = rep.valuations.get(n).ok_or(format!("n = {n} beyond truncation"))?;
        ensure!(*got == (n, Some(-2 * n as i64)), "ord_3 c(2n) at n = {n}: {got:?}");
        let exponent = rep.inverse.v() + 2 * n as i64;
        ensure!(exponent == 2 * n as i64 + 2, "coefficient sits at q^{exponent}");
    }
    Ok("ord_3 of the q^(2n+2) coefficient is -2n for n <= 50".into())
}

fn counting_formula() -> Check {
    let mut cells = 0;
    for t in 2..=6u32 {
        for p in [2u64, 3, 5] {
            for e in 1..=3u32 {
                let n = count_type_ia_groups(t, p, e).map_err(|x| x.to_string())?;
                let pe = num_bigint::BigUint::from(p).pow(e);
                let lhs = &n * (&pe - 1u32);
                let rhs = pe.pow(t - 1) - 1u32;
                ensure!(lhs == rhs, "t={t} p={p} e={e}: {n}");
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} grid points"))
}

/// Valuations of the 3-adic roots of `3x^2 + x + 3` found by brute force:
/// with `x = y/3` the roots solve `y^2 + y + 9 = 0`, which has two simple
/// roots modulo 3 and so exactly two roots modulo `3^k`.
fn brute_force_root_valuations() -> Vec<i64> {
    let m = 3i64.pow(8);
    let mut vals: Vec<i64> = (0..m)
        .filter(|y| (y * y + y + 9) % m == 0)
        .map(|mut y| {
            let mut v = 0;
            while y % 3 == 0 && v < 8 {
                y /= 3;
                v += 1;
            }
            v - 1
        })
        .collect();
    vals.sort();
    vals
}

fn newton_witness() -> Check {
    let f = Polynomial::from_i64s(&[3, 1, 3]);
    let np = newton_polygon(&f, 3).map_err(|x| x.to_string())?;
    let w = np.nonintegral_root_witness().ok_or("no witness for 3x^2 + x + 3")?;
    ensure!(w.root_valuation() == q(-1), "witness valuation {}", w.root_valuation());
    let mut from_polygon: Vec<i64> = np.root_valuations().iter().flat_map(|(v, k)| vec![v.to_i64().unwrap(); *k]).collect();
    from_polygon.sort();
    let brute = brute_force_root_valuations();
    ensure!(from_polygon == brute, "polygon {from_polygon:?} vs roots {brute:?}");
    let curve = fixture();
    let mut with_unit = Vec::new();
    for p in [3u64, 5, 7, 11, 13] {
        let psi = division_poly(&curve, p).map_err(|x| x.to_string())?.poly;
        let has_unit = psi.coeffs().iter().any(|c| c.valuation(p).finite() == Some(0));
        if has_unit {
            let np = newton_polygon(&psi, p).map_err(|x| x.to_string())?;
            ensure!(np.nonintegral_root_witness().is_some(), "psi_{p} has a unit coefficient but no witness");
            with_unit.push(p);
        }
    }
    Ok(format!("root valuations {brute:?}; psi_p witnesses for p in {with_unit:?}"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check); 13] = [
        ("Delta golden vector", delta_golden),
        ("1/Delta integrality", delta_inverse_integral),
        ("product-form round trip", product_round_trip),
        ("divisor-sum law", divisor_sum_law),
        ("certificate soundness and dichotomy", ubd_dichotomy),
        ("denominator growth", growth_profile),
        ("Q_4 symbolic identity", q4_display),
        ("Puiseux solver examples", puiseux_examples),
        ("division polynomials", division_polynomials),
        ("screening slice", screening_slice),
        ("inverse growth law", inverse_growth),
        ("counting formula", counting_formula),
        ("Newton polygon witness", newton_witness),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
