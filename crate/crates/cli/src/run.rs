//! One function per subcommand, each producing an [`Outcome`].

use anyhow::{anyhow, Context};
use formsums::arith::{fmt_rational, is_prime, primes_up_to, rational_sig, Rational};
use formsums::fpd::{
    fixed_prime_divisors, pqr_decompose, reduce_full, remove_all_fpd, verify_certificate, MultiPrimeCertificate,
};
use formsums::poly::{delta_f, disc_form, disc_uni, shape_decompose, ShapeDecomposition};
use formsums::report::Table;
use formsums::roots::{check_dan_bound, rho_of, rho_star_brute, rho_star_prime};
use formsums::sums::{
    corollary2_harness, euler_factors, inequality_31, nair_exp_rhs, nair_harness, s_sum, s_sum_symmetric,
    t_sum, theorem1_harness, EulerProductSpec,
};
use serde_json::{json, Value};

use crate::config::{BoundMode, CommandKind, ExperimentConfig};
use crate::output::{Assertion, ErrorRecord, Outcome};

/// Why a run produced no outcome.
#[derive(Debug)]
pub enum RunError {
    /// A mathematical precondition failed; reported as a structured record.
    Math(ErrorRecord),
    /// Bad configuration or I/O.
    Usage(anyhow::Error),
}

impl From<anyhow::Error> for RunError {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<formsums::Error>() {
            Some(core) => RunError::Math(ErrorRecord::from_core(core)),
            None => RunError::Usage(e),
        }
    }
}

impl From<formsums::Error> for RunError {
    fn from(e: formsums::Error) -> Self {
        RunError::Math(ErrorRecord::from_core(&e))
    }
}

type Run = Result<Outcome, RunError>;

/// Validates and runs a config on a pool of `jobs` threads (rayon's
/// default when unset).
pub fn run(config: &ExperimentConfig) -> Run {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = config.jobs {
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| RunError::Usage(anyhow!("thread pool: {e}")))?;
    pool.install(|| dispatch(config))
}

fn dispatch(c: &ExperimentConfig) -> Run {
    match c.command {
        CommandKind::Disc => disc(c),
        CommandKind::Shape => shape(c),
        CommandKind::Rho => rho(c),
        CommandKind::Rhostar => rhostar(c),
        CommandKind::DanCheck => dan_check(c),
        CommandKind::Fpd => fpd(c),
        CommandKind::Reduce => reduce(c),
        CommandKind::VerifyCert => verify_cert(c),
        CommandKind::Sum => sum(c),
        CommandKind::NairCheck => nair_check(c),
        CommandKind::EulerProduct => euler_product(c),
        CommandKind::BoundCheck => bound_check(c),
    }
}

fn disc(c: &ExperimentConfig) -> Run {
    let (input, degree, d) = if c.form.is_some() {
        let f = c.form()?;
        (f.to_literal(), f.degree(), disc_form(&f)?)
    } else {
        let f = c.poly()?;
        let deg = f.degree().expect("validated nonzero");
        (f.to_literal(), deg, disc_uni(&f, deg)?)
    };
    let mut t = Table::new(["input", "degree", "disc"]);
    t.push(vec![input.clone(), degree.to_string(), d.to_string()]);
    Ok(Outcome::new(t, json!({ "input": input, "degree": degree, "disc": d.to_string() })))
}

fn shape(c: &ExperimentConfig) -> Run {
    let f = c.form()?;
    let s: ShapeDecomposition = shape_decompose(&f)?;
    let delta = delta_f(&f)?;
    let mut t = Table::new(["d1", "d2", "G", "d_prime", "d_doubleprime", "Delta_F"]);
    t.push(vec![
        s.d1.to_string(),
        s.d2.to_string(),
        s.g.to_literal(),
        s.d_prime().to_string(),
        s.d_doubleprime().to_string(),
        fmt_rational(&delta),
    ]);
    let records = json!({ "shape": s, "d_prime": s.d_prime(), "d_doubleprime": s.d_doubleprime(), "delta_f": fmt_rational(&delta) });
    Ok(Outcome::new(t, records))
}

fn rho(c: &ExperimentConfig) -> Run {
    let f = c.poly()?;
    let mut t = Table::new(["modulus", "count", "method"]);
    let mut recs = Vec::new();
    for &m in &c.moduli {
        let r = rho_of(&f, m)?;
        t.push(vec![m.to_string(), r.count.to_string(), json!(r.method).as_str().unwrap_or("").to_string()]);
        recs.push(r);
    }
    Ok(Outcome::new(t, json!(recs)))
}

fn rhostar(c: &ExperimentConfig) -> Run {
    let f = c.form()?;
    let mut t = Table::new(["modulus", "pair_count", "rho_star", "prime_formula"]);
    let mut recs = Vec::new();
    let mut agree = true;
    for &m in &c.moduli {
        let r = rho_star_brute(&f, m)?;
        let formula = if is_prime(m) && f.coeff(0).bits() != 0 { Some(rho_star_prime(&f, m)?) } else { None };
        if let Some(v) = formula {
            agree &= r.value == Rational::from_integer(v.into());
        }
        t.push(vec![
            m.to_string(),
            r.pair_count.to_string(),
            fmt_rational(&r.value),
            formula.map(|v| v.to_string()).unwrap_or_default(),
        ]);
        recs.push(json!({ "modulus": m, "pair_count": r.pair_count, "rho_star": fmt_rational(&r.value), "prime_formula": formula }));
    }
    let mut o = Outcome::new(t, json!(recs));
    o.assertions.push(Assertion::new("prime formula agrees with enumeration", agree, ""));
    Ok(o)
}

fn dan_check(c: &ExperimentConfig) -> Run {
    let f = c.poly()?;
    let max_p = c.max_p.expect("validated");
    let max_m = c.max_modulus.expect("validated");
    let mut t = Table::new(["p", "l", "rho", "linear_bound", "linear_ok", "power_ok"]);
    let mut recs = Vec::new();
    let mut failures = 0;
    for p in primes_up_to(max_p) {
        let (mut q, mut l) = (p, 1u32);
        while q <= max_m {
            let r = check_dan_bound(&f, p, l)?;
            if !r.passed {
                failures += 1;
            }
            t.push(vec![
                p.to_string(),
                l.to_string(),
                r.rho.to_string(),
                r.linear_bound.clone(),
                r.linear_ok.to_string(),
                r.power_ok.to_string(),
            ]);
            recs.push(r);
            match q.checked_mul(p) {
                Some(n) => q = n,
                None => break,
            }
            l += 1;
        }
    }
    let mut o = Outcome::new(t, json!(recs));
    o.assertions.push(Assertion::new(
        "prime-power root bound",
        failures == 0,
        format!("{} prime powers, {failures} violations", recs_len(&o.records)),
    ));
    Ok(o)
}

fn recs_len(v: &Value) -> usize {
    v.as_array().map_or(0, Vec::len)
}

fn fpd(c: &ExperimentConfig) -> Run {
    let f = c.poly()?;
    let primes = fixed_prime_divisors(&f)?;
    let mut t = Table::new(["p", "q", "r", "e"]);
    let mut recs = Vec::new();
    for &p in &primes {
        let d = pqr_decompose(&f, p)?;
        t.push(vec![p.to_string(), d.q.to_literal(), d.r.to_literal(), d.e.to_string()]);
        recs.push(d);
    }
    Ok(Outcome::new(t, json!({ "poly": f.to_literal(), "primes": primes, "decompositions": recs })))
}

fn leaf_table(cert: &MultiPrimeCertificate) -> Table {
    let mut t = Table::new(["alpha", "beta", "gamma", "g", "path"]);
    for l in &cert.leaves {
        let path = l
            .steps
            .iter()
            .map(|s| {
                let digits: Vec<String> = s.digits.iter().map(u64::to_string).collect();
                let mus: Vec<String> = s.mus.iter().map(u32::to_string).collect();
                format!("p={} k=({}) mu=({})", s.p, digits.join(","), mus.join(","))
            })
            .collect::<Vec<_>>()
            .join("; ");
        t.push(vec![l.alpha.to_string(), l.beta.to_string(), l.gamma.to_string(), l.g.to_literal(), path]);
    }
    t
}

fn verification_assertions(cert: &MultiPrimeCertificate) -> (Vec<Assertion>, Value) {
    let report = verify_certificate(cert);
    let assertions = report
        .checks
        .iter()
        .map(|ch| Assertion::new(format!("check ({}) {}", ch.id, ch.name), ch.passed, ch.failures.join("; ")))
        .collect();
    (assertions, json!(report))
}

fn reduce(c: &ExperimentConfig) -> Run {
    let f = c.poly()?;
    let cert = match c.prime {
        Some(p) => reduce_full(&f, p)?.to_multi_prime(),
        None => remove_all_fpd(&f)?,
    };
    let (assertions, report) = verification_assertions(&cert);
    let mut o = Outcome::new(leaf_table(&cert), json!({ "certificate": cert, "verification": report }));
    o.assertions = assertions;
    o.files.push(("certificate.json".into(), cert.to_json() + "\n"));
    Ok(o)
}

fn verify_cert(c: &ExperimentConfig) -> Run {
    let path = c.certificate.as_ref().expect("validated");
    let text = std::fs::read_to_string(path).with_context(|| format!("field `certificate`: reading {}", path.display()))?;
    let cert = MultiPrimeCertificate::from_json(&text)?;
    let (assertions, report) = verification_assertions(&cert);
    let mut t = Table::new(["check", "name", "passed", "failures"]);
    for ch in report["checks"].as_array().into_iter().flatten() {
        t.push(vec![
            ch["id"].as_str().unwrap_or("").into(),
            ch["name"].as_str().unwrap_or("").into(),
            ch["passed"].to_string(),
            ch["failures"].as_array().map_or(0, Vec::len).to_string(),
        ]);
    }
    let mut o = Outcome::new(t, report);
    o.assertions = assertions;
    Ok(o)
}

fn sum(c: &ExperimentConfig) -> Run {
    let h = c.h()?;
    let symmetric = c.symmetric.unwrap_or(false);
    let mut t = Table::new(["X1", "X2", "sum", "zeros_skipped"]);
    let mut recs = Vec::new();
    for &x in &c.grid {
        let row = if c.poly.is_some() {
            t_sum(x, &h, &c.poly()?)?
        } else if symmetric {
            s_sum_symmetric(x, x, &h, &c.form()?)?
        } else {
            s_sum(x, x, &h, &c.form()?)?
        };
        t.push(vec![row.x1.to_string(), row.x2.to_string(), fmt_rational(&row.sum), row.zeros_skipped.to_string()]);
        recs.push(row);
    }
    Ok(Outcome::new(t, json!(recs)))
}

fn euler_product(c: &ExperimentConfig) -> Run {
    let f = c.form()?;
    let h = c.h()?;
    let shape = shape_decompose(&f)?;
    let mut t = Table::new(["X1", "X2", "G_part", "X1_part", "X2_part", "E"]);
    let mut recs = Vec::new();
    for &x in &c.grid {
        let fac = euler_factors(&EulerProductSpec { shape: shape.clone(), h: h.clone(), x1: x, x2: x })?;
        let e = fac.total();
        t.push(vec![
            x.to_string(),
            x.to_string(),
            fmt_rational(&fac.g_part),
            fmt_rational(&fac.x1_part),
            fmt_rational(&fac.x2_part),
            fmt_rational(&e),
        ]);
        recs.push(json!({ "x1": x, "x2": x, "factors": fac, "e": fmt_rational(&e) }));
    }
    Ok(Outcome::new(t, json!(recs)))
}

fn bound_check(c: &ExperimentConfig) -> Run {
    let f = c.form()?;
    match c.mode.expect("validated") {
        BoundMode::Euler => {
            let rep = theorem1_harness(&f, &c.h()?, &c.grid, &c.threshold()?)?;
            let mut o = Outcome::new(rep.to_table(), json!(rep));
            o.assertions.push(spread_assertion(&rep.spread, &rep.threshold, rep.passed));
            Ok(o)
        }
        BoundMode::Log => {
            let digits = c.digits.expect("validated");
            let rep = corollary2_harness(&f, &c.grid, &c.threshold()?, digits)?;
            let mut o = Outcome::new(rep.to_table(), json!(rep));
            o.assertions.push(Assertion::new(
                "ratio spread below threshold",
                rep.passed,
                format!("spread {} (approximate, {digits} digits) vs threshold {}", rep.spread, fmt_rational(&rep.threshold)),
            ));
            Ok(o)
        }
        BoundMode::FixN2 => {
            let h = c.h()?;
            let mut t = Table::new(["X1", "X2", "lhs", "rhs", "holds"]);
            let mut recs = Vec::new();
            let mut ok = true;
            for &x in &c.grid {
                let r = inequality_31(&f, &h, x, x)?;
                ok &= r.holds;
                t.push(vec![x.to_string(), x.to_string(), fmt_rational(&r.lhs), fmt_rational(&r.rhs), r.holds.to_string()]);
                recs.push(r);
            }
            let mut o = Outcome::new(t, json!(recs));
            o.assertions.push(Assertion::new("S <= sum over n2 of weighted T", ok, ""));
            Ok(o)
        }
    }
}

fn spread_assertion(spread: &str, threshold: &Rational, passed: bool) -> Assertion {
    let approx = formsums::arith::parse_rational(spread).map(|s| rational_sig(&s, 10)).unwrap_or_else(|_| spread.into());
    Assertion::new(
        "ratio spread below threshold",
        passed,
        format!("spread {spread} (~{approx}) vs threshold {}", fmt_rational(threshold)),
    )
}

fn nair_check(c: &ExperimentConfig) -> Run {
    let f = c.poly()?;
    let h = c.h()?;
    let rep = nair_harness(&f, &h, &c.grid, &c.threshold()?)?;
    let mut table = rep.to_table();
    let mut exp_rows = Vec::new();
    if let Some(digits) = c.digits {
        table.columns.extend(["exp_exponent_sum", "exp_rhs", "exp_digits"].map(String::from));
        for (row, &x) in table.rows.iter_mut().zip(&c.grid) {
            let e = nair_exp_rhs(x, &h, &f, digits)?;
            row.extend([fmt_rational(&e.exponent_sum), e.value.clone(), digits.to_string()]);
            exp_rows.push(e);
        }
    }
    let mut o = Outcome::new(table, json!({ "report": rep, "exp_variant": exp_rows }));
    o.assertions.push(spread_assertion(&rep.spread, &rep.threshold, rep.passed));
    Ok(o)
}
