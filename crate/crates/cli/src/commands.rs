//! `analyze`, `solve-ode` and `solve-pde`.

use padic_cauchy::cauchy_solver::{
    build_solution_with_window, working_precision, RowStatus, DEFAULT_SHELLS,
};
use padic_cauchy::pde_ck::evaluate_in_time;
use padic_cauchy::{
    estimate_type, norm_sequence, wellposedness_check, Error,
    LinearOperator, LogNorm, MatrixOperator, MultiIndex, PdeProblem, Vector,
};

use crate::problem::ProblemFile;
use crate::report::{exponent, radius, Report};
use crate::CliError;

fn start(command: &str, prob: &ProblemFile) -> Report {
    let mut r = Report::new(command);
    r.echo(&serde_json::to_value(prob).expect("problem serializes"));
    r
}

fn valuation(n: &LogNorm) -> String {
    match n {
        LogNorm::Zero => "+∞".into(),
        LogNorm::Finite(e) => (-e).to_string(),
        LogNorm::Unbounded => "−∞".into(),
    }
}

fn multi_index(b: &MultiIndex) -> String {
    let parts: Vec<String> = b.exponents().iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

fn matrix_and_initial(prob: &ProblemFile, prec: u32) -> Result<(MatrixOperator, Vector), CliError> {
    let a = prob.matrix(prec)?;
    let y0 = prob.initial(prec)?;
    if y0.dim() != a.dim() {
        return Err(CliError::Input(format!(
            "initial vector has {} entries, matrix is {}x{}",
            y0.dim(),
            a.dim(),
            a.dim()
        )));
    }
    Ok((a, y0))
}

pub fn analyze(prob: &ProblemFile) -> Result<Report, CliError> {
    let (a, x) = matrix_and_initial(prob, prob.precision())?;
    let (depth, window) = (prob.depth(), prob.window());
    let seq = norm_sequence(&a, &x, depth)?;
    let est = estimate_type(&seq, window)?;
    let mut r = start("analyze", prob);
    r.result("sigma_exponent", exponent(&est.sigma));
    r.result("method", est.method);
    r.result("window", est.window);
    r.result("depth", est.depth);
    r.result("operator_norm_exponent", exponent(&a.operator_norm_bound()));
    r.result(
        "closed_form_sigma_exponent",
        a.closed_form_type(&x).map_or("none".into(), |s| exponent(&s)),
    );
    let rows = seq
        .norms()
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let root = seq.root_exponent(k).map_or("-".into(), |q| q.to_string());
            vec![k.to_string(), exponent(e), root]
        })
        .collect();
    r.table("norm_sequence", &["k", "e_k", "e_k/k"], rows);
    Ok(r)
}

pub fn solve_ode(prob: &ProblemFile) -> Result<Report, CliError> {
    let p = prob.prime()?;
    let (depth, window) = (prob.depth(), prob.window());
    let wp = working_precision(prob.precision(), depth, p);
    let (a, y0) = matrix_and_initial(prob, wp)?;
    let epsilon = prob.epsilon()?;
    let points = prob.points(wp)?;
    let perturbations = prob
        .perturbations
        .iter()
        .map(|v| prob.vector(v, wp))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(bad) = perturbations.iter().find(|v| v.dim() != a.dim()) {
        return Err(CliError::Input(format!(
            "perturbation has {} entries, matrix is {}x{}",
            bad.dim(),
            a.dim(),
            a.dim()
        )));
    }

    let sol = build_solution_with_window(&a, &y0, depth, window)?;
    let mut r = start("solve-ode", prob);
    let cert = sol.certificate();
    r.result("working_precision", wp);
    r.result("operator_norm_exponent", exponent(&a.operator_norm_bound()));
    r.result("sigma_exponent", exponent(&sol.sigma().sigma));
    r.result("sigma_method", sol.sigma().method);
    r.result("radius", radius(sol.radius()));
    r.result("radius_exponent", exponent(sol.radius()));
    r.result("coefficient_radius_exponent", exponent(&sol.coefficient_radius()?));
    r.result("certificate_method", cert.method);
    r.result("certificate_alpha_exponent", exponent(&cert.alpha));
    r.result("certificate_c_exponent", exponent(&cert.c));
    r.result("certificate_valid_from", cert.valid_from);

    let rows = sol
        .coefficient_norms()
        .iter()
        .zip(sol.iterate_norms().norms())
        .enumerate()
        .map(|(k, (c, e))| vec![k.to_string(), valuation(c), exponent(e)])
        .collect();
    r.table("coefficients", &["k", "v(c_k)", "e_k"], rows);

    let mut rows = Vec::new();
    let (mut evaluated, mut residual_ok) = (0, 0);
    for z in &points {
        let zs = [z.to_string(), exponent(&z.norm())];
        match sol.evaluate(z) {
            Ok(ev) => {
                let res = sol.residual(z)?;
                evaluated += 1;
                let ok = res.within_bound();
                residual_ok += ok as usize;
                rows.push(
                    zs.into_iter()
                        .chain([
                            ev.value.to_compact(),
                            exponent(&ev.tail.bound),
                            exponent(&res.norm),
                            exponent(&res.bound),
                            if ok { "ok" } else { "exceeds" }.into(),
                        ])
                        .collect(),
                );
            }
            Err(Error::OutsideDisk { .. }) => rows.push(
                zs.into_iter()
                    .chain(["-".into(), "-".into(), "-".into(), "-".into(), "outside_disk".into()])
                    .collect(),
            ),
            Err(e) => return Err(e.into()),
        }
    }
    r.table(
        "evaluations",
        &["z", "|z|", "value", "tail", "residual", "residual_bound", "status"],
        rows,
    );

    r.check(
        "recurrence",
        sol.recurrence_holds()?,
        format!("k c_k = A c_(k-1) for k ≤ {depth}"),
    );
    r.check(
        "residual",
        residual_ok == evaluated,
        format!("{residual_ok} of {evaluated} evaluated points within the tail bound"),
    );

    if !perturbations.is_empty() {
        let rep = wellposedness_check(&a, &y0, &perturbations, &epsilon, depth, DEFAULT_SHELLS)?;
        r.result("wellposedness_alpha_exponent", exponent(&rep.alpha));
        r.result("wellposedness_delta_exponent", exponent(&rep.delta));
        r.result("wellposedness_worst_ratio_exponent", exponent(&rep.worst_ratio));
        let rows = rep
            .rows
            .iter()
            .map(|row| {
                let status = match row.status {
                    RowStatus::Holds => "holds",
                    RowStatus::Violated => "violated",
                    RowStatus::Undetermined => "undetermined",
                };
                vec![
                    row.perturbation.to_string(),
                    exponent(&row.z.norm()),
                    exponent(&row.lhs),
                    exponent(&row.alpha_norm),
                    status.into(),
                ]
            })
            .collect();
        r.table("wellposedness", &["n", "|z|", "lhs", "alpha_norm", "status"], rows);
        r.check(
            "wellposedness",
            rep.passed(),
            format!(
                "{} rows, {} violations, {} undetermined, epsilon {}",
                rep.rows.len(),
                rep.violations(),
                rep.undetermined(),
                rep.epsilon
            ),
        );
    }
    Ok(r)
}

pub fn solve_pde(prob: &ProblemFile) -> Result<Report, CliError> {
    let p = prob.prime()?;
    let depth = prob.depth();
    let wp = working_precision(prob.precision(), depth, p);
    let space = prob.space()?;
    let op = prob.differential_operator(&space, wp)?;
    let phi = prob.phi(&space, wp)?;
    let times = prob.points(wp)?;
    let problem =
        PdeProblem::new(op.clone(), phi, depth).map_err(|e| CliError::Input(e.to_string()))?;
    let sol = padic_cauchy::solve_pde(&problem)?;

    let mut r = start("solve-pde", prob);
    r.result("working_precision", wp);
    r.result("operator_norm_exponent", exponent(&op.operator_norm_bound()));
    r.result("disk_radius", radius(&sol.disk().radius));
    r.result("disk_radius_exponent", exponent(&sol.disk().radius));
    r.result("sigma_exponent", exponent(&sol.series().sigma().sigma));
    r.result("series_radius", radius(sol.series().radius()));

    let mut rows = Vec::new();
    let mut degree_ok = true;
    for (k, u) in sol.time_coefficients().iter().enumerate() {
        if let (Some(d), Some(b)) = (u.degree(), sol.degree_bound(k)) {
            degree_ok &= d <= b;
        }
        for (beta, c) in u.to_compact_terms() {
            rows.push(vec![k.to_string(), multi_index(&beta), c]);
        }
        if !u.truncation_norm().is_zero() {
            rows.push(vec![k.to_string(), "truncation".into(), exponent(u.truncation_norm())]);
        }
    }
    r.table("time_coefficients", &["k", "beta", "coefficient"], rows);

    let mut rows = Vec::new();
    for t in &times {
        let ts = [t.to_string(), exponent(&t.norm())];
        match evaluate_in_time(&sol, t) {
            Ok(f) => {
                let terms: Vec<String> = f
                    .to_compact_terms()
                    .into_iter()
                    .map(|(b, c)| format!("{}: {c}", multi_index(&b)))
                    .collect();
                rows.push(
                    ts.into_iter()
                        .chain([terms.join(" | "), exponent(f.truncation_norm()), "ok".into()])
                        .collect(),
                );
            }
            Err(Error::OutsideDisk { .. }) => rows.push(
                ts.into_iter()
                    .chain(["-".into(), "-".into(), "outside_disk".into()])
                    .collect(),
            ),
            Err(e) => return Err(e.into()),
        }
    }
    r.table("evaluations", &["t", "|t|", "u(t)", "truncation", "status"], rows);
    r.check(
        "degree_bound",
        degree_ok,
        format!("deg u_k ≤ deg phi + k·{}", op.max_coefficient_degree()),
    );
    Ok(r)
}
