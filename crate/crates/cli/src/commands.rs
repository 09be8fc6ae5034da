use std::fmt::Write as _;

use qeta_core::elliptic::{
    division_poly, division_poly_any, newton_polygon, screen_primes, IrreducibilityCertificate, ScreenOptions,
    WeierstrassCurve,
};
use qeta_core::etaforms::{
    count_type_ia_groups, eta_expand, eta_recognize, product_form_to_series, series_to_product_form, EtaQuotient,
    Recognition,
};
use qeta_core::exactnum::numberfield::AlgebraicNumberJson;
use qeta_core::exactnum::{is_prime, primes_between, Polynomial, Rational};
use qeta_core::puiseux::{solve_branches, verify_solution, SolveOptions};
use qeta_core::qseries::{PuiseuxSeries, RationalSeries};
use qeta_core::ubdcert::{
    certify_eta_root_ubd, clear_denominators, growth_witness, reconfirm_certificate, EtaRootOutcome, UbdCertificate,
};
use serde_json::{json, Value};

use crate::parse::{self, ParseError};
use crate::{
    CliError, CountCmd, CurveArgs, EcCmd, Env, EtaCmd, Group, PuiseuxCmd, Report, SeriesCmd, SeriesSource, UbdCmd,
    DEFAULT_T, DEFAULT_T_VAR, MAX_T,
};

type CResult<T> = Result<T, CliError>;

fn parse_err(what: &str) -> impl FnOnce(ParseError) -> CliError + '_ {
    move |err| CliError::Parse { what: what.to_string(), err }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

/// Explicit `--T`, else the environment default, else 100.
fn truncation(flag: Option<usize>, env: &Env<'_>) -> CResult<usize> {
    let t = match (flag, &env.default_t) {
        (Some(t), _) => t,
        (None, Some(s)) => s
            .trim()
            .parse()
            .map_err(|_| usage(format!("{DEFAULT_T_VAR} must be a positive integer, got {s:?}")))?,
        (None, None) => DEFAULT_T,
    };
    if t == 0 || t > MAX_T {
        return Err(usage(format!("--T must be between 1 and {MAX_T}, got {t}")));
    }
    Ok(t)
}

fn read_arg(value: &str, env: &mut Env<'_>) -> CResult<String> {
    if value != "-" {
        return Ok(value.to_string());
    }
    let mut s = String::new();
    env.stdin.read_to_string(&mut s).map_err(|e| usage(format!("cannot read stdin: {e}")))?;
    Ok(s)
}

fn check_prime(p: u64) -> CResult<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(CliError::Core(qeta_core::Error::NotPrime(p)))
    }
}

/// Plain form for unit series, `q^v*(...)` otherwise.
fn show_series<C: qeta_core::exactnum::FieldElement>(s: &PuiseuxSeries<C>) -> String {
    if s.v() == 0 {
        s.to_string()
    } else {
        s.factored()
    }
}

fn parse_eta(text: &str, warnings: &mut Vec<String>) -> CResult<EtaQuotient> {
    let (e, w) = parse::parse_eta_expr(text).map_err(parse_err("eta quotient"))?;
    warnings.extend(w);
    Ok(e)
}

struct Source {
    series: RationalSeries,
    inputs: Value,
}

fn load_series(src: &SeriesSource, env: &mut Env<'_>, warnings: &mut Vec<String>) -> CResult<Source> {
    let t = truncation(src.t, env)?;
    if let Some(text) = &src.eta {
        let e = parse_eta(text, warnings)?;
        let series = eta_expand(&e, t)?;
        return Ok(Source { series, inputs: json!({"eta": e.to_string(), "T": t}) });
    }
    let raw = src.input.as_deref().ok_or_else(|| usage("one of --input or --eta is required"))?;
    let text = read_arg(raw, env)?;
    let series = parse::parse_series(&text, t).map_err(parse_err("series"))?;
    Ok(Source { series, inputs: json!({"input": text.trim(), "T": t}) })
}

fn load_curve(args: &CurveArgs) -> CResult<(WeierstrassCurve, Value)> {
    match (&args.a, &args.b, &args.general) {
        (Some(a), Some(b), None) => {
            let a = parse::parse_rational(a).map_err(parse_err("--A"))?;
            let b = parse::parse_rational(b).map_err(parse_err("--B"))?;
            let inputs = json!({"A": a, "B": b});
            Ok((WeierstrassCurve::new(a, b)?, inputs))
        }
        (None, None, Some(g)) => {
            let c = parse::parse_rational_list(g).map_err(parse_err("--general"))?;
            let coeffs: [Rational; 5] =
                c.try_into().map_err(|c: Vec<Rational>| usage(format!("--general needs 5 coefficients, got {}", c.len())))?;
            let model = WeierstrassCurve::from_general(coeffs.clone())?;
            let inputs = json!({"general": coeffs, "xShift": model.x_shift, "A": model.curve.a, "B": model.curve.b});
            Ok((model.curve, inputs))
        }
        _ => Err(usage("give either --A and --B, or --general a1,a2,a3,a4,a6")),
    }
}

fn parse_aux_primes(text: Option<&str>) -> CResult<Vec<u64>> {
    let Some(text) = text else { return Ok(primes_between(2, 200)) };
    let bad = || usage(format!("--aux-primes must be LO..HI or a comma list of primes, got {text:?}"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
        if hi > 100_000 {
            return Err(usage("--aux-primes range is limited to primes below 100000"));
        }
        return Ok(primes_between(lo, hi));
    }
    let mut out = Vec::new();
    for part in text.split(',') {
        let q: u64 = part.trim().parse().map_err(|_| bad())?;
        check_prime(q)?;
        out.push(q);
    }
    Ok(out)
}

pub(crate) fn dispatch(group: Group, mut env: Env<'_>) -> CResult<Report> {
    let env = &mut env;
    match group {
        Group::Eta(EtaCmd::Expand { eta, t }) => eta_expand_cmd(&eta, t, env),
        Group::Eta(EtaCmd::Recognize(src)) => eta_recognize_cmd(&src, env),
        Group::Series(SeriesCmd::Root { src, n }) => series_root(&src, n, env),
        Group::Series(SeriesCmd::ProductForm(src)) => series_product_form(&src, env),
        Group::Series(SeriesCmd::Invert(src)) => series_invert(&src, env),
        Group::Ubd(UbdCmd::Certify { eta, p, e }) => ubd_certify(&eta, p, e),
        Group::Ubd(UbdCmd::Profile { src, p, n }) => ubd_profile(&src, p, n, env),
        Group::Puiseux(PuiseuxCmd::Solve { g, t, hint, max_depth }) => puiseux_solve(&g, t, &hint, max_depth, env),
        Group::Ec(EcCmd::Divpoly { curve, p }) => ec_divpoly(&curve, p),
        Group::Ec(EcCmd::Newton { p, poly, curve, n }) => ec_newton(p, poly.as_deref(), &curve, n, env),
        Group::Ec(EcCmd::Screen { curve, pmax, aux_primes, jobs }) => ec_screen(&curve, pmax, aux_primes.as_deref(), jobs),
        Group::Count(CountCmd::Groups { cusps, p, e }) => count_groups(cusps, p, e),
    }
}

fn eta_expand_cmd(eta: &str, t: Option<usize>, env: &mut Env<'_>) -> CResult<Report> {
    let mut warnings = Vec::new();
    let e = parse_eta(eta, &mut warnings)?;
    let t = truncation(t, env)?;
    let series = eta_expand(&e, t)?;
    let text = format!("{e}\n{}", show_series(&series));
    Ok(Report {
        command: "eta expand",
        inputs: json!({"eta": eta, "T": t}),
        result: json!({
            "quotient": e,
            "weight": e.weight(),
            "leadingExponent": e.leading_exponent(),
            "series": series,
        }),
        method: "product of (1 - q^(a n))^e expanded term by term",
        text,
        found: true,
        warnings,
    })
}

fn eta_recognize_cmd(src: &SeriesSource, env: &mut Env<'_>) -> CResult<Report> {
    let mut warnings = Vec::new();
    let Source { series, inputs } = load_series(src, env, &mut warnings)?;
    let form = series_to_product_form(&series)?;
    let (recognition, text, found) = match eta_recognize(&form) {
        Recognition::Eta { quotient, t } => {
            let text = format!("{quotient}\nagrees through (1 - q^{t})");
            (json!({"kind": "eta", "quotient": quotient, "T": t}), text, true)
        }
        Recognition::NotEta { index, reason } => {
            let text = format!("not an eta quotient: {reason}");
            (json!({"kind": "not-eta", "index": index, "reason": reason}), text, false)
        }
    };
    Ok(Report {
        command: "eta recognize",
        inputs,
        result: json!({"productForm": form, "recognition": recognition}),
        method: "product-form exponents inverted over divisors",
        text,
        found,
        warnings,
    })
}

fn series_root(src: &SeriesSource, n: u32, env: &mut Env<'_>) -> CResult<Report> {
    if n == 0 || n > 1000 {
        return Err(usage(format!("--n must be between 1 and 1000, got {n}")));
    }
    let mut warnings = Vec::new();
    let Source { series, mut inputs } = load_series(src, env, &mut warnings)?;
    inputs["n"] = json!(n);
    let root = series.nth_root(n, None)?;
    Ok(Report {
        command: "series root",
        inputs,
        result: json!({"series": root}),
        method: "J.C.P. Miller recurrence for (1 + x)^(1/n)",
        text: show_series(&root),
        found: true,
        warnings,
    })
}

fn series_product_form(src: &SeriesSource, env: &mut Env<'_>) -> CResult<Report> {
    let mut warnings = Vec::new();
    let Source { series, inputs } = load_series(src, env, &mut warnings)?;
    let form = series_to_product_form(&series)?;
    let back = product_form_to_series(&form)?;
    let round_trip = back.sub(&series).is_zero();
    let mut text = format!("q^({}) * prod (1 - q^n)^c(n)\nr = {}\n", form.r, form.r);
    let cs: Vec<String> = form.c.iter().map(|c| c.to_string()).collect();
    let _ = writeln!(text, "c(1..{}) = {}", form.t(), cs.join(", "));
    let _ = write!(text, "round trip: {}", if round_trip { "exact" } else { "MISMATCH" });
    Ok(Report {
        command: "series product-form",
        inputs,
        result: json!({"productForm": form, "roundTrip": round_trip}),
        method: "logarithmic derivative and Moebius-style divisor inversion",
        text,
        found: round_trip,
        warnings,
    })
}

fn series_invert(src: &SeriesSource, env: &mut Env<'_>) -> CResult<Report> {
    let mut warnings = Vec::new();
    let Source { series, inputs } = load_series(src, env, &mut warnings)?;
    let inv = series.inverse()?;
    let den = clear_denominators(&inv);
    let text = format!("{}\ncommon denominator through T = {}: {}", show_series(&inv), den.t, den.a);
    Ok(Report {
        command: "series invert",
        inputs,
        result: json!({"series": inv, "denominator": den}),
        method: "power-series reciprocal by the triangular recurrence",
        text,
        found: true,
        warnings,
    })
}

/// Reconfirmation recomputes the root series; skip it when the root order
/// makes that impractical.
const RECONFIRM_LIMIT: u64 = 10_000;

fn ubd_certify(eta: &str, p: u64, e: u32) -> CResult<Report> {
    let mut warnings = Vec::new();
    let q = parse_eta(eta, &mut warnings)?;
    let inputs = json!({"eta": eta, "p": p, "e": e});
    let outcome = certify_eta_root_ubd(&q, p, e)?;
    let (result, text, found) = match outcome {
        EtaRootOutcome::Certified(cert) => {
            let UbdCertificate::ProductFormNonIntegral { position, ref value, .. } = cert else {
                unreachable!("eta roots are certified structurally")
            };
            let small = p.checked_pow(e).is_some_and(|pe| pe <= RECONFIRM_LIMIT);
            let reconfirmed = if small { Some(reconfirm_certificate(&q, &cert)?) } else { None };
            let ord = value.valuation(p);
            let mut text = format!(
                "CERTIFIED unbounded denominators for ({q})^(1/{p}^{e})\n\
                 product exponent c({position}) = {value}, ord_{p} = {ord}"
            );
            match reconfirmed {
                Some(true) => text.push_str("\nreconfirmed from the recomputed product form"),
                Some(false) => text.push_str("\nRECONFIRMATION FAILED"),
                None => text.push_str("\nreconfirmation skipped: root order too large"),
            }
            let ok = reconfirmed != Some(false);
            (json!({"outcome": "certified", "certificate": cert, "reconfirmed": reconfirmed}), text, ok)
        }
        EtaRootOutcome::EtaRootIsEtaQuotient(root) => {
            let text = format!("no certificate: ({q})^(1/{p}^{e}) = {root} is an eta quotient");
            (json!({"outcome": "eta-quotient", "root": root}), text, false)
        }
    };
    Ok(Report {
        command: "ubd certify",
        inputs,
        result,
        method: "non-integral product-form exponent of the root",
        text,
        found,
        warnings,
    })
}

fn ubd_profile(src: &SeriesSource, p: u64, n: Option<u32>, env: &mut Env<'_>) -> CResult<Report> {
    check_prime(p)?;
    let mut warnings = Vec::new();
    let Source { series, mut inputs } = load_series(src, env, &mut warnings)?;
    inputs["p"] = json!(p);
    let target = match n {
        Some(n) if n == 0 || n > 1000 => return Err(usage(format!("--n must be between 1 and 1000, got {n}"))),
        Some(n) => {
            inputs["n"] = json!(n);
            series.nth_root(n, None)?
        }
        None => series,
    };
    let witness = growth_witness(&target, p)?;
    let profile = qeta_core::ubdcert::denominator_profile(&target, p)?;
    let mut text = String::new();
    match &witness {
        Some(_) => {
            let _ = writeln!(text, "OBSERVED denominator growth at p = {p} (empirical, not a proof)");
        }
        None => {
            let _ = writeln!(text, "no coefficient with a {p} in the denominator through T = {}", profile.t);
        }
    }
    let _ = writeln!(text, "max -ord_{p} = {}", profile.max().map_or("none".into(), |m| m.to_string()));
    let _ = write!(text, "m\t-ord_{p}\trunning max");
    for ((m, o), r) in profile.samples.iter().zip(&profile.running_max) {
        let _ = write!(text, "\n{m}\t{o}\t{r}");
    }
    let found = witness.is_some();
    Ok(Report {
        command: "ubd profile",
        inputs,
        result: json!({"profile": profile, "witness": witness}),
        method: "p-adic valuation of each coefficient with running maximum",
        text,
        found,
        warnings,
    })
}

fn puiseux_solve(g: &str, t: usize, hints: &[String], max_depth: usize, env: &mut Env<'_>) -> CResult<Report> {
    if t > 500 {
        return Err(usage(format!("--T for puiseux solve is limited to 500, got {t}")));
    }
    if max_depth > 64 {
        return Err(usage("--max-depth is limited to 64"));
    }
    let text_g = read_arg(g, env)?;
    let poly = parse::parse_bivariate(&text_g).map_err(parse_err("g"))?;
    let mut opts = SolveOptions { terms: t, max_depth, ..SolveOptions::default() };
    for (i, h) in hints.iter().enumerate() {
        let parsed: AlgebraicNumberJson =
            serde_json::from_str(h).map_err(|e| usage(format!("--hint {}: {e}", i + 1)))?;
        opts.hints.push(parsed.into_number(&format!("h{}", i + 1))?);
    }
    let report = solve_branches(&poly, &opts)?;
    let mut verifications = Vec::new();
    let mut text = format!("g = {poly}\n{} branch(es)", report.branches.len());
    let mut all_ok = true;
    for (k, b) in report.branches.iter().enumerate() {
        let v = verify_solution(&poly, b)?;
        all_ok &= v.ok;
        let minpoly = b.field.minpoly().to_string();
        let _ = write!(text, "\n[{k}] w = {}, Q = {}: y = {b}", b.w, b.q);
        if b.field.minpoly().degree() > Some(1) {
            let _ = write!(text, "\n    over Q({}) with {} = 0", b.field.name(), b.field.minpoly().display_with(b.field.name()));
        }
        let trace: Vec<String> = b.trace.iter().map(|e| e.to_string()).collect();
        let _ = write!(text, "\n    trace: {}", trace.join("; "));
        let _ = write!(
            text,
            "\n    residual {} through q^({})",
            if v.ok { "vanishes" } else { "DOES NOT vanish" },
            v.required
        );
        verifications.push(json!({"ok": v.ok, "required": v.required, "residual": v.residual.to_string(), "minpoly": minpoly}));
    }
    for p in &report.pending {
        let _ = write!(text, "\npending: {} ({})", p.factor, p.reason);
    }
    for d in &report.diagnostics {
        let _ = write!(text, "\nnote: {d}");
    }
    let found = all_ok && report.pending.is_empty();
    Ok(Report {
        command: "puiseux solve",
        inputs: json!({"g": text_g.trim(), "T": t, "hints": hints, "maxDepth": max_depth}),
        result: json!({"report": report, "verification": verifications}),
        method: "Newton polygon with coefficient recursion; coincident roots refined by Taylor shift",
        text,
        found,
        warnings: Vec::new(),
    })
}

const MAX_DIVPOLY_P: u64 = 97;

fn ec_divpoly(curve: &CurveArgs, p: u64) -> CResult<Report> {
    if p > MAX_DIVPOLY_P {
        return Err(usage(format!("--p is limited to {MAX_DIVPOLY_P}")));
    }
    let (c, mut inputs) = load_curve(curve)?;
    inputs["p"] = json!(p);
    let d = division_poly(&c, p)?;
    let degree = d.poly.degree().expect("nonzero");
    let lead = d.poly.leading().expect("nonzero").clone();
    let text = format!("psi_{p} = {}\ndegree {degree}, leading coefficient {lead}", d.poly);
    Ok(Report {
        command: "ec divpoly",
        inputs,
        result: json!({"curve": c, "p": p, "degree": degree, "leadingCoefficient": lead, "poly": d.poly}),
        method: "division-polynomial recurrence with the y factor removed",
        text,
        found: true,
        warnings: Vec::new(),
    })
}

fn ec_newton(p: u64, poly: Option<&str>, curve: &CurveArgs, n: Option<u64>, env: &mut Env<'_>) -> CResult<Report> {
    check_prime(p)?;
    let has_curve = curve.a.is_some() || curve.general.is_some();
    let (f, inputs): (Polynomial<Rational>, Value) = match (poly, has_curve) {
        (Some(text), false) => {
            if n.is_some() {
                return Err(usage("--n applies only with a curve"));
            }
            let text = read_arg(text, env)?;
            let f = parse::parse_polynomial(&text).map_err(parse_err("--poly"))?;
            (f, json!({"poly": text.trim(), "p": p}))
        }
        (None, true) => {
            let n = n.unwrap_or(p);
            if n > MAX_DIVPOLY_P {
                return Err(usage(format!("--n is limited to {MAX_DIVPOLY_P}")));
            }
            let (c, mut inputs) = load_curve(curve)?;
            inputs["p"] = json!(p);
            inputs["n"] = json!(n);
            (division_poly_any(&c, n), inputs)
        }
        _ => return Err(usage("give either --poly or a curve (--A/--B or --general)")),
    };
    let np = newton_polygon(&f, p)?;
    let witness = np.nonintegral_root_witness().cloned();
    let unit = f.coeffs().iter().position(|c| c.valuation(p).finite() == Some(0));
    let vals: Vec<Value> = np.root_valuations().iter().map(|(v, m)| json!({"valuation": v, "count": m})).collect();
    let mut text = format!("Newton polygon of {f} at p = {p}");
    for s in &np.lower_hull {
        let _ = write!(
            text,
            "\nedge ({}, {}) -> ({}, {}): slope {}, {} root(s) of valuation {}",
            s.from.0,
            s.from.1,
            s.to.0,
            s.to.1,
            s.slope,
            s.length(),
            s.root_valuation()
        );
    }
    match &witness {
        Some(s) => {
            let _ = write!(text, "\nwitness: roots of valuation {} are not {p}-integral", s.root_valuation());
        }
        None => text.push_str("\nno positive-slope edge: all roots are p-integral"),
    }
    Ok(Report {
        command: "ec newton",
        inputs,
        result: json!({"polygon": np, "rootValuations": vals, "witness": witness, "unitCoefficient": unit}),
        method: "lower convex hull of (i, ord_p c_i)",
        text,
        found: true,
        warnings: Vec::new(),
    })
}

fn ec_screen(curve: &CurveArgs, pmax: u64, aux: Option<&str>, jobs: Option<usize>) -> CResult<Report> {
    if pmax > MAX_DIVPOLY_P {
        return Err(usage(format!("--pmax is limited to {MAX_DIVPOLY_P}")));
    }
    if jobs == Some(0) || jobs.is_some_and(|j| j > 256) {
        return Err(usage("--jobs must be between 1 and 256"));
    }
    let (c, mut inputs) = load_curve(curve)?;
    let aux_primes = parse_aux_primes(aux)?;
    inputs["pMax"] = json!(pmax);
    inputs["auxPrimes"] = json!(aux.unwrap_or("2..200"));
    inputs["jobs"] = json!(jobs);
    let report = screen_primes(&c, pmax, &ScreenOptions { aux_primes, jobs })?;
    let mut text = format!("y^2 = x^3 + ({})x + ({}), odd p <= {pmax}", c.a, c.b);
    let mut inconclusive = false;
    for r in &report.primes {
        let _ = write!(
            text,
            "\np = {}: degree {}, leading {}, shape {}, {}",
            r.p,
            r.degree,
            r.leading_coefficient,
            if r.shape_ok { "ok" } else { "BAD" },
            r.certificate.label()
        );
        match &r.certificate {
            IrreducibilityCertificate::Reducible { root } => {
                let _ = write!(text, " (rational root x = {root})");
            }
            IrreducibilityCertificate::Irreducible { evidence } => {
                let _ = write!(text, " ({})", serde_json::to_string(evidence).expect("serializes"));
            }
            IrreducibilityCertificate::Inconclusive { allowed_factor_degrees, .. } => {
                inconclusive = true;
                let d: Vec<String> = allowed_factor_degrees.iter().map(|d| d.to_string()).collect();
                let _ = write!(text, " (factor degrees not excluded: {})", d.join(", "));
            }
        }
        if let Some(s) = &r.nonintegral_witness {
            let _ = write!(text, "; non-integral torsion x, valuation {}", s.root_valuation());
        }
    }
    let exc: Vec<String> = report.exceptional.iter().map(|p| p.to_string()).collect();
    let _ = write!(text, "\nexceptional: [{}]", exc.join(", "));
    Ok(Report {
        command: "ec screen",
        inputs,
        result: to_json(&report),
        method: "division polynomial shape, Newton polygon at p, factor-degree patterns modulo auxiliary primes",
        text,
        found: !inconclusive,
        warnings: Vec::new(),
    })
}

fn count_groups(cusps: u32, p: u64, e: u32) -> CResult<Report> {
    if cusps > 1000 || e > 1000 {
        return Err(usage("--cusps and --e are limited to 1000"));
    }
    let bits = 64 - p.leading_zeros() as u64;
    if bits * e as u64 * cusps.saturating_sub(1) as u64 > 1 << 20 {
        return Err(usage("result too large to print"));
    }
    let count = count_type_ia_groups(cusps, p, e)?;
    let s = count.to_string();
    Ok(Report {
        command: "count groups",
        inputs: json!({"cusps": cusps, "p": p, "e": e}),
        result: json!({"count": s}),
        method: "geometric sum (p^(e(t-1)) - 1)/(p^e - 1)",
        text: s,
        found: true,
        warnings: Vec::new(),
    })
}
