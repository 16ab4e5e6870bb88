//! Built-in verification suites.

use clap::ValueEnum;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use padic_cauchy::cauchy_solver::{build_solution, radius_from_coefficients, working_precision};
use padic_cauchy::exp_type::default_window;
use padic_cauchy::oracle::{
    exact_series_partial_sum, factorial_valuation_by_factoring, matches_rational, p_power,
    random_closed_form_instance, random_matrix, random_rational, random_unit, rat, seeded_rng,
};
use padic_cauchy::padic_arith::vp_factorial;
use padic_cauchy::{LinearOperator, LogNorm, MatrixOperator, PadicNumber, Prime, Vector};
use rand::Rng;

use crate::report::{exponent, Report};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Legendre,
    Asymptotics,
    Oracle,
    RadiusLaw,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Legendre => "legendre",
            Suite::Asymptotics => "asymptotics",
            Suite::Oracle => "oracle",
            Suite::RadiusLaw => "radius-law",
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyArgs {
    pub suite: Suite,
    pub max_n: u64,
    pub cases: usize,
    pub seed: u64,
    pub prime: Option<u64>,
    pub precision: u32,
    pub depth: Option<usize>,
}

fn primes(args: &VerifyArgs, default: &[u64]) -> Result<Vec<Prime>, CliError> {
    let ps: Vec<u64> = match args.prime {
        Some(p) => vec![p],
        None => default.to_vec(),
    };
    ps.into_iter()
        .map(|p| Prime::new(p).map_err(|e| CliError::Input(e.to_string())))
        .collect()
}

pub fn run(args: &VerifyArgs) -> Result<Report, CliError> {
    let mut r = Report::new("verify");
    r.input.push(crate::report::Field {
        name: "suite".into(),
        value: args.suite.name().into(),
    });
    for (name, value) in [
        ("max_n", args.max_n.to_string()),
        ("cases", args.cases.to_string()),
        ("seed", args.seed.to_string()),
        ("precision", args.precision.to_string()),
    ] {
        r.input.push(crate::report::Field {
            name: name.into(),
            value,
        });
    }
    match args.suite {
        Suite::Legendre => legendre(args, &mut r)?,
        Suite::Asymptotics => asymptotics(args, &mut r)?,
        Suite::Oracle => oracle(args, &mut r)?,
        Suite::RadiusLaw => radius_law(args, &mut r)?,
    }
    Ok(r)
}

fn legendre(args: &VerifyArgs, r: &mut Report) -> Result<(), CliError> {
    let mut rows = Vec::new();
    let mut all = true;
    for p in primes(args, &[2, 3, 5, 7, 11])? {
        let bad = (0..=args.max_n)
            .filter(|&n| vp_factorial(n, p) != factorial_valuation_by_factoring(n, p))
            .count();
        all &= bad == 0;
        rows.push(vec![
            p.get().to_string(),
            vp_factorial(args.max_n, p).to_string(),
            bad.to_string(),
        ]);
    }
    r.table("legendre", &["p", "v_p(max_n!)", "mismatches"], rows);
    r.check(
        "legendre",
        all,
        format!("digit-sum formula against trial division for n ≤ {}", args.max_n),
    );
    Ok(())
}

fn asymptotics(args: &VerifyArgs, r: &mut Report) -> Result<(), CliError> {
    let n = args.max_n.max(1);
    let tol = rat(1, 500);
    let mut rows = Vec::new();
    let mut all = true;
    for p in primes(args, &[2, 3, 5, 7, 11])? {
        let v = vp_factorial(n, p);
        let ratio = BigRational::new(BigInt::from(v), BigInt::from(n));
        let dev = (&ratio - rat(1, p.get() as i64 - 1)).abs();
        all &= dev < tol;
        rows.push(vec![p.get().to_string(), v.to_string(), ratio.to_string(), dev.to_string()]);
    }
    r.table("asymptotics", &["p", "v_p(n!)", "v_p(n!)/n", "deviation"], rows);
    r.check("asymptotics", all, format!("|v_p(n!)/n - 1/(p-1)| < 1/500 at n = {n}"));
    Ok(())
}

fn oracle(args: &VerifyArgs, r: &mut Report) -> Result<(), CliError> {
    let mut rng = seeded_rng(args.seed);
    let ps = primes(args, &[2, 3, 5, 7])?;
    let mut rows = Vec::new();
    let mut mismatches = 0;
    for case in 0..args.cases {
        let p = ps[rng.gen_range(0..ps.len())];
        let n = rng.gen_range(1..=3);
        let rows_q = random_matrix(&mut rng, p, n, -1, 2);
        let y0: Vec<BigRational> = (0..n).map(|_| random_rational(&mut rng, p, 0, 2, 0.1)).collect();
        let depth = args.depth.unwrap_or_else(|| rng.gen_range(4..=32));
        let wp = working_precision(args.precision, depth, p);
        let a = matrix(&rows_q, p, wp)?;
        // |z| below p^{-1/(p-1)}/‖A‖
        let m = a
            .operator_norm_bound()
            .exponent()
            .map(|e| (e + rat(1, p.get() as i64 - 1)).floor().to_integer())
            .unwrap_or_else(BigInt::zero);
        let m = i64::try_from(m).map_err(|_| CliError::Input("matrix entries too large".into()))? + 1;
        let z = random_unit(&mut rng, p, 12) * p_power(p, m);
        let y = vector(&y0, p, wp)?;
        let zp = PadicNumber::from_big_rational(&z, p, wp)?;
        let sum = build_solution(&a, &y, depth)?.partial_sum(&zp, depth)?;
        let exact = exact_series_partial_sum(&rows_q, &y0, &z, depth);
        let bad = sum
            .entries()
            .iter()
            .zip(&exact)
            .filter(|(x, q)| !matches_rational(x, q, 2 * wp))
            .count();
        mismatches += bad;
        rows.push(vec![
            case.to_string(),
            p.get().to_string(),
            n.to_string(),
            depth.to_string(),
            z.to_string(),
            bad.to_string(),
        ]);
    }
    r.table("oracle", &["case", "p", "dim", "K", "z", "mismatches"], rows);
    r.check(
        "oracle",
        mismatches == 0,
        format!("{} partial sums against exact rational sums, {mismatches} mismatches", args.cases),
    );
    Ok(())
}

fn radius_law(args: &VerifyArgs, r: &mut Report) -> Result<(), CliError> {
    let depth = args.depth.unwrap_or(64);
    let tol = rat(2, depth as i64);
    let mut rng = seeded_rng(args.seed);
    let ps = primes(args, &[2, 3, 5])?;
    let mut rows = Vec::new();
    let mut bad = 0;
    for case in 0..args.cases {
        let p = ps[case % ps.len()];
        let inst = random_closed_form_instance(&mut rng, p, 4, 3);
        let wp = working_precision(args.precision, depth, p);
        let sol = build_solution(&matrix(&inst.rows, p, wp)?, &vector(&inst.x, p, wp)?, depth)?;
        let law = LogNorm::Finite(rat(-1, p.get() as i64 - 1) - rat(inst.sigma_exponent, 1));
        let coeff = radius_from_coefficients(&sol.coefficient_norms(), default_window(depth))?;
        let gap = match (coeff.exponent(), law.exponent()) {
            (Some(c), Some(l)) => (c - l).abs(),
            _ => rat(1_000_000, 1),
        };
        let ok = gap <= tol && sol.radius() == &law;
        bad += !ok as usize;
        rows.push(vec![
            case.to_string(),
            p.get().to_string(),
            inst.sigma_exponent.to_string(),
            exponent(sol.radius()),
            exponent(&coeff),
            gap.to_string(),
        ]);
    }
    r.table("radius_law", &["case", "p", "sigma", "radius", "from_coefficients", "gap"], rows);
    r.check(
        "radius-law",
        bad == 0,
        format!("{} closed-form instances, {bad} violations, tolerance {tol}", args.cases),
    );
    Ok(())
}

fn matrix(rows: &[Vec<BigRational>], p: Prime, prec: u32) -> Result<MatrixOperator, CliError> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|q| PadicNumber::from_big_rational(q, p, prec)).collect())
        .collect::<Result<Vec<Vec<_>>, _>>()?;
    Ok(MatrixOperator::new(p, rows)?)
}

fn vector(xs: &[BigRational], p: Prime, prec: u32) -> Result<Vector, CliError> {
    let xs = xs
        .iter()
        .map(|q| PadicNumber::from_big_rational(q, p, prec))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Vector::new(p, xs)?)
}
