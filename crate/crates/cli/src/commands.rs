use anyhow::{bail, Context, Result};
use num::{BigInt, BigRational, One, Zero};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use padicsum_core::{
    check_theorem1, check_theorem2_prefix, clearing_polynomial, dubickas_scan, floor_log,
    identity11_rhs, is_prime, lcm_upto, log1m, mansour_sides, predicted_equality_set, prefix_sums,
    prefix_valuations, sampling, theorem1_report, truncation_index, val_p, verify_eq14,
    verify_functional_eq, verify_lcm_binom, BoundCmp, Error, LogArgument, SeriesOracle,
    SeriesParams, Theorem2Violation,
};

use crate::report::{anchors, Claim, Report};
use crate::{Check, Cli, Command, PadicLogArgs, ScanEqualityArgs, SumArgs, VerifyArgs};

pub fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Sum(args) => cmd_sum(args),
        Command::Verify(args) => cmd_verify(args),
        Command::ScanEquality(args) => cmd_scan_equality(args),
        Command::PadicLog(args) => cmd_padic_log(args),
    }
}

fn thread_pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .context("building worker pool")
}

/// Exact value of the comparison predicate, e.g. "2*2^1=4 vs n+1=4".
fn bound_descriptor(p: u64, n: u64, nu: i64) -> String {
    let e = n as i64 + 1 - nu;
    if e < 0 {
        format!("2*{p}^{e} < 2 <= n+1={}", n + 1)
    } else if e > 128 {
        format!("2*{p}^{e} >> n+1={}", n + 1)
    } else {
        let mut value = BigInt::from(2);
        for _ in 0..e {
            value *= BigInt::from(p);
        }
        format!("2*{p}^{e}={value} vs n+1={}", n + 1)
    }
}

fn cmd_sum(args: SumArgs) -> Result<bool> {
    let params = SeriesParams::new(args.p, args.a.clone())?;
    let pool = thread_pool(args.jobs)?;
    let p = args.p;

    // Sequential producer of the exact sums; parallel per-n verdicts.
    let rows: Vec<(u64, String, i64)> = prefix_sums(&params, args.n_max)
        .map(|ps| {
            let nu = val_p(&ps.value, p).finite().expect("s_n is nonzero");
            (ps.n, ps.value.to_string(), nu)
        })
        .collect();
    let reports: Vec<_> = pool.install(|| {
        rows.par_iter()
            .map(|&(n, _, nu)| theorem1_report(&params, n, nu))
            .collect()
    });

    let claims = rows
        .iter()
        .zip(&reports)
        .map(|((n, s, nu), report)| {
            Claim::new(
                anchors::THM1_BOUND,
                json!({"p": p, "a": args.a.to_string(), "n": n}),
                report.consistent(p),
                Some(json!({
                    "s": s,
                    "nu": nu,
                    "cmp": report.cmp.to_string(),
                    "bound": bound_descriptor(p, *n, *nu),
                    "tail_min": report.tail_min,
                    "tail_witness": report.tail_witness,
                    "equality_predicted": report.equality_predicted,
                    "alpha": report.alpha,
                })),
            )
        })
        .collect();

    let config = json!({
        "command": "sum",
        "p": p,
        "a": args.a.to_string(),
        "n_max": args.n_max,
        "jobs": args.jobs,
        "format": args.output.format.label(),
    });
    let report = Report::new(config, claims);
    report.emit(args.output.format)?;
    Ok(report.all_passed())
}

fn cmd_scan_equality(args: ScanEqualityArgs) -> Result<bool> {
    let a = args.a.clone().unwrap_or_else(BigInt::one);
    let params = SeriesParams::new(args.p, a.clone())?;
    let observed: Vec<u64> = check_theorem1(&params, args.n_max)
        .filter(|r| r.cmp == BoundCmp::Equal)
        .map(|r| r.n)
        .collect();
    let predicted = predicted_equality_set(args.p, args.n_max);
    let claims = vec![Claim::new(
        anchors::THM1_EQUALITY_SET,
        json!({"p": args.p, "a": a.to_string(), "n_max": args.n_max}),
        observed == predicted,
        Some(json!({"observed": observed, "predicted": predicted})),
    )];
    let config = json!({
        "command": "scan-equality",
        "p": args.p,
        "a": a.to_string(),
        "n_max": args.n_max,
        "format": args.output.format.label(),
    });
    let report = Report::new(config, claims);
    report.emit(args.output.format)?;
    Ok(report.all_passed())
}

fn cmd_padic_log(args: PadicLogArgs) -> Result<bool> {
    if !is_prime(args.p) {
        bail!("p = {} is not prime", args.p);
    }
    let arg = LogArgument::new(args.x.clone(), args.p)?;
    let value = log1m(&arg, args.precision);
    let terms = if args.x.is_zero() {
        0
    } else {
        let v = val_p(&args.x, args.p).finite().expect("x is nonzero");
        truncation_index(args.p, v as u64, args.precision)
    };
    let claims = vec![Claim::new(
        anchors::LP_SERIES,
        json!({"p": args.p, "x": args.x.to_string(), "precision": args.precision}),
        true,
        Some(json!({
            "residue": value.residue().to_string(),
            "modulus": value.modulus().to_string(),
            "terms": terms,
        })),
    )];
    let config = json!({
        "command": "padic-log",
        "p": args.p,
        "x": args.x.to_string(),
        "precision": args.precision,
        "format": args.output.format.label(),
    });
    let report = Report::new(config, claims);
    report.emit(args.output.format)?;
    Ok(report.all_passed())
}

fn series_params(p: Option<u64>, a: Option<&BigInt>) -> Result<SeriesParams> {
    let p = p.unwrap_or(3);
    let a = a.cloned().unwrap_or_else(BigInt::one);
    Ok(SeriesParams::new(p, a)?)
}

fn verify_config(args: &VerifyArgs, fields: &[(&str, Value)]) -> Value {
    let mut map = Map::new();
    map.insert("command".into(), json!("verify"));
    map.insert("check".into(), json!(args.check.label()));
    for (key, value) in fields {
        map.insert((*key).into(), value.clone());
    }
    map.insert("format".into(), json!(args.output.format.label()));
    Value::Object(map)
}

fn cmd_verify(args: VerifyArgs) -> Result<bool> {
    let report = match args.check {
        Check::Mansour => verify_mansour(&args)?,
        Check::LcmBinom => verify_lcm_binom_cmd(&args)?,
        Check::Identity11 => verify_identity11(&args)?,
        Check::Taylor => verify_taylor(&args)?,
        Check::Theorem2 => verify_theorem2(&args)?,
        Check::Eqint => verify_eqint(&args)?,
        Check::FunctionalEq => verify_functional(&args)?,
        Check::Eq14 => verify_eq14_cmd(&args)?,
    };
    report.emit(args.output.format)?;
    Ok(report.all_passed())
}

fn verify_mansour(args: &VerifyArgs) -> Result<Report> {
    let n_max = args.n_max.unwrap_or(30);
    let samples = args.samples.unwrap_or(200);
    let mut rng = ChaCha20Rng::seed_from_u64(args.seed);
    let mut claims = Vec::with_capacity(samples as usize);
    for i in 0..samples {
        let (x, y, n) = sampling::mansour_sample(&mut rng, 50, 50, n_max);
        let (lhs, rhs) = mansour_sides(&x, &y, n).expect("sampler respects the identity domain");
        let passed = lhs == rhs;
        claims.push(Claim::new(
            anchors::MANSOUR,
            json!({"sample": i, "x": x.to_string(), "y": y.to_string(), "n": n}),
            passed,
            (!passed).then(|| json!({"lhs": lhs.to_string(), "rhs": rhs.to_string()})),
        ));
    }
    let config = verify_config(
        args,
        &[
            ("n_max", json!(n_max)),
            ("samples", json!(samples)),
            ("seed", json!(args.seed)),
        ],
    );
    Ok(Report::new(config, claims))
}

fn verify_lcm_binom_cmd(args: &VerifyArgs) -> Result<Report> {
    let n_max = args.n_max.unwrap_or(500);
    let claims = (0..=n_max)
        .map(|n| {
            Claim::new(
                anchors::LCM_BINOM,
                json!({"n": n}),
                verify_lcm_binom(n),
                None,
            )
        })
        .collect();
    let config = verify_config(args, &[("n_max", json!(n_max))]);
    Ok(Report::new(config, claims))
}

fn verify_identity11(args: &VerifyArgs) -> Result<Report> {
    let params = series_params(args.p, args.a.as_ref())?;
    let n_max = args.n_max.unwrap_or(100);
    let pool = thread_pool(args.jobs)?;
    let sums: Vec<_> = prefix_sums(&params, n_max).collect();
    let claims = pool.install(|| {
        sums.par_iter()
            .map(|ps| {
                let rhs = identity11_rhs(&params, ps.n);
                let passed = rhs == ps.value;
                Claim::new(
                    anchors::IDENTITY11,
                    json!({"p": params.p(), "a": params.a().to_string(), "n": ps.n}),
                    passed,
                    (!passed).then(|| json!({"lhs": ps.value.to_string(), "rhs": rhs.to_string()})),
                )
            })
            .collect()
    });
    let config = verify_config(
        args,
        &[
            ("p", json!(params.p())),
            ("a", json!(params.a().to_string())),
            ("n_max", json!(n_max)),
        ],
    );
    Ok(Report::new(config, claims))
}

fn verify_taylor(args: &VerifyArgs) -> Result<Report> {
    let a = args.a.clone().unwrap_or_else(BigInt::one);
    if a.is_zero() {
        bail!("the clearing polynomial needs a != 0");
    }
    let n_max = args.n_max.unwrap_or(60);
    let pool = thread_pool(args.jobs)?;
    let polys: Vec<_> = pool.install(|| {
        (1..=n_max)
            .into_par_iter()
            .map(|n| clearing_polynomial(&a, n))
            .collect()
    });

    let mut claims = Vec::new();
    for (n, poly) in (1..=n_max).zip(&polys) {
        let order = poly.vanishing_order();
        let passed = order.is_some_and(|o| o as u64 > n);
        claims.push(Claim::new(
            anchors::TAYLOR,
            json!({"a": a.to_string(), "n": n}),
            passed,
            Some(json!({"order": order, "required": n + 1, "degree": poly.degree()})),
        ));
    }

    // With a prime given, also reproduce s_n from P_n(p).
    if let Some(p) = args.p {
        let params = SeriesParams::new(p, a.clone())?;
        let b = params.complement();
        for (ps, poly) in prefix_sums(&params, n_max).zip(&polys) {
            let n = ps.n;
            let mut clear = lcm_upto(n);
            let ab = params.a() * &b;
            for _ in 0..n {
                clear = &clear * &ab;
            }
            let value = BigRational::new(poly.eval_int(&BigInt::from(p)), clear);
            let passed = value == ps.value;
            claims.push(Claim::new(
                anchors::TAYLOR_EVAL,
                json!({"a": a.to_string(), "p": p, "n": n}),
                passed,
                (!passed)
                    .then(|| json!({"expected": ps.value.to_string(), "got": value.to_string()})),
            ));
        }
    }

    let mut fields = vec![("a", json!(a.to_string())), ("n_max", json!(n_max))];
    if let Some(p) = args.p {
        fields.push(("p", json!(p)));
    }
    let config = verify_config(args, &fields);
    Ok(Report::new(config, claims))
}

fn verify_theorem2(args: &VerifyArgs) -> Result<Report> {
    let params = series_params(args.p, args.a.as_ref())?;
    let n_max = args.n_max.unwrap_or(50);
    let oracle = SeriesOracle::new(&params);
    let sums: Vec<_> = prefix_valuations(&params, n_max).collect();
    let violations = check_theorem2_prefix(&oracle, sums, n_max);

    let (equality, sandwich): (Vec<_>, Vec<_>) = violations
        .into_iter()
        .partition(|v| matches!(v, Theorem2Violation::EqualityMismatch { .. }));
    let describe = |list: &[Theorem2Violation]| -> Value {
        json!({
            "checked": n_max,
            "violations": list.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>(),
        })
    };
    let claims = vec![
        Claim::new(
            anchors::THM2_SANDWICH,
            json!({"p": params.p(), "a": params.a().to_string(), "n_max": n_max}),
            sandwich.is_empty(),
            Some(describe(&sandwich)),
        ),
        Claim::new(
            anchors::THM2_EQUALITY,
            json!({"p": params.p(), "a": params.a().to_string(), "n_max": n_max}),
            equality.is_empty(),
            Some(describe(&equality)),
        ),
    ];
    let config = verify_config(
        args,
        &[
            ("p", json!(params.p())),
            ("a", json!(params.a().to_string())),
            ("n_max", json!(n_max)),
        ],
    );
    Ok(Report::new(config, claims))
}

fn verify_eqint(args: &VerifyArgs) -> Result<Report> {
    let n_max = args.n_max.unwrap_or(1000);
    let mut claims = Vec::with_capacity(2 * n_max as usize);
    for row in dubickas_scan(n_max) {
        let strong =
            row.cmp != BoundCmp::Below && (row.cmp == BoundCmp::Equal) == row.equality_predicted;
        claims.push(Claim::new(
            anchors::EQINT2,
            json!({"n": row.n}),
            strong,
            Some(json!({
                "nu": row.nu,
                "cmp": row.cmp.to_string(),
                "equality_predicted": row.equality_predicted,
            })),
        ));
        claims.push(Claim::new(
            anchors::EQINT1,
            json!({"n": row.n}),
            row.weaker_bound_holds,
            Some(json!({
                "nu": row.nu,
                "lower_bound": row.n as i64 - i64::from(floor_log(2, row.n)),
            })),
        ));
    }
    let config = verify_config(args, &[("n_max", json!(n_max))]);
    Ok(Report::new(config, claims))
}

fn verify_functional(args: &VerifyArgs) -> Result<Report> {
    let p = args.p.unwrap_or(3);
    if !is_prime(p) {
        bail!("p = {p} is not prime");
    }
    let precision = args.precision.unwrap_or(12);
    let samples = args.samples.unwrap_or(100);
    let mut rng = ChaCha20Rng::seed_from_u64(args.seed);
    let mut claims = Vec::with_capacity(samples as usize);
    for i in 0..samples {
        let u = sampling::unit_one_mod_p(&mut rng, p, 50, 50);
        let v = sampling::unit_one_mod_p(&mut rng, p, 50, 50);
        let passed = verify_functional_eq(&u, &v, p, precision)
            .expect("sampler produces units congruent to 1 mod p");
        let witness = if passed {
            None
        } else {
            let one = BigRational::one();
            let lhs = log1m(&LogArgument::new(&one - &u * &v, p)?, precision);
            let rhs = log1m(&LogArgument::new(&one - &u, p)?, precision)
                .add(&log1m(&LogArgument::new(&one - &v, p)?, precision));
            Some(json!({
                "lhs": lhs.residue().to_string(),
                "rhs": rhs.residue().to_string(),
            }))
        };
        claims.push(Claim::new(
            anchors::LP_FUNCTIONAL,
            json!({"sample": i, "u": u.to_string(), "v": v.to_string(), "precision": precision}),
            passed,
            witness,
        ));
    }
    let config = verify_config(
        args,
        &[
            ("p", json!(p)),
            ("precision", json!(precision)),
            ("samples", json!(samples)),
            ("seed", json!(args.seed)),
        ],
    );
    Ok(Report::new(config, claims))
}

fn verify_eq14_cmd(args: &VerifyArgs) -> Result<Report> {
    let params = series_params(args.p, args.a.as_ref())?;
    let precision = args.precision.unwrap_or(12);
    let window = args.window.unwrap_or(50);
    let base = json!({
        "p": params.p(),
        "a": params.a().to_string(),
        "precision": precision,
        "window": window,
    });
    let claims = match verify_eq14(&params, precision, window) {
        Ok(report) => vec![
            Claim::new(
                anchors::EQ14,
                base.clone(),
                true,
                Some(json!({
                    "n_zero": report.n_zero,
                    "threshold": report.threshold,
                    "scanned_to": report.scanned_to,
                })),
            ),
            Claim::new(
                anchors::EQ14_TELESCOPE,
                base.clone(),
                report.telescoped_product.is_one(),
                Some(json!({"product": report.telescoped_product.to_string()})),
            ),
        ],
        Err(Error::VanishingCertificate { n, nu, precision }) => vec![Claim::new(
            anchors::EQ14,
            base.clone(),
            false,
            Some(json!({"n": n, "nu": nu, "precision": precision})),
        )],
        Err(other) => return Err(other.into()),
    };
    let config = verify_config(
        args,
        &[
            ("p", json!(params.p())),
            ("a", json!(params.a().to_string())),
            ("precision", json!(precision)),
            ("window", json!(window)),
        ],
    );
    Ok(Report::new(config, claims))
}
