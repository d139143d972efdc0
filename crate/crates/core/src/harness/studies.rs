use crate::error::{Error, Result};
use crate::multiplier::{build_table, multiplier, multiplier_asymptotic, KernelParams, MultiplierTable};
use crate::torus::{synthetic_field, SpectralField};
use crate::wave::{self, ProblemKind, WaveProblem};

use super::config::StudyConfig;
use super::report::{Row, StudyKind, StudyReport};

/// Errors at or below this level count as exact agreement.
pub const CONVERGED_FLOOR: f64 = 1e-12;

pub const DEFAULT_DELTA_GRID: [f64; 4] = [0.5, 0.25, 0.125, 0.0625];
pub const DEFAULT_R_GRID: [f64; 4] = [10.0, 100.0, 1000.0, 10000.0];
pub const DEFAULT_H_GRID: [f64; 3] = [1e-2, 1e-3, 1e-4];

/// Coefficient decay exponent of synthetic data lying (borderline) in H^s.
pub fn decay_for_index(n: u32, s: f64) -> f64 {
    s + 0.5 * n as f64 + 0.5
}

/// Synthetic (f, g, b) with Sobolev indices (s1, s2, sigma).
pub fn synthetic_data(cfg: &StudyConfig) -> Result<(SpectralField, SpectralField, SpectralField)> {
    let (n, k) = (cfg.n, cfg.box_radius);
    Ok((
        synthetic_field(n, k, decay_for_index(n, cfg.s1), cfg.seed)?,
        synthetic_field(n, k, decay_for_index(n, cfg.s2), cfg.seed.wrapping_add(1))?,
        synthetic_field(n, k, decay_for_index(n, cfg.sigma), cfg.seed.wrapping_add(2))?,
    ))
}

fn make_problem(
    kind: ProblemKind,
    table: MultiplierTable,
    data: &(SpectralField, SpectralField, SpectralField),
) -> Result<WaveProblem> {
    let (f, g, b) = data;
    match kind {
        ProblemKind::Homogeneous => WaveProblem::homogeneous(table, f.clone(), g.clone()),
        ProblemKind::Forced => WaveProblem::forced(table, b.clone()),
        ProblemKind::Combined => WaveProblem::combined(table, f.clone(), g.clone(), b.clone()),
    }
}

/// Sobolev index of the solution: min{s1, s2+θ} with θ = max{0, (β−n)/2}, or σ + max{0, β−n}.
pub fn spatial_index(kind: ProblemKind, n: u32, beta: f64, s1: f64, s2: f64, sigma: f64) -> f64 {
    let excess = beta - n as f64;
    let homog = s1.min(s2 + (0.5 * excess).max(0.0));
    let forced = sigma + excess.max(0.0);
    combine(kind, homog, forced)
}

/// Norm index of the δ → 0 limit: the nonlocal index for β ≤ n+2, the classical one beyond.
pub fn delta_limit_index(kind: ProblemKind, n: u32, beta: f64, s1: f64, s2: f64, sigma: f64) -> f64 {
    if beta <= n as f64 + 2.0 {
        spatial_index(kind, n, beta, s1, s2, sigma)
    } else {
        combine(kind, s1.min(s2 + 1.0), sigma + 2.0)
    }
}

fn combine(kind: ProblemKind, homog: f64, forced: f64) -> f64 {
    match kind {
        ProblemKind::Homogeneous => homog,
        ProblemKind::Forced => forced,
        ProblemKind::Combined => homog.min(forced),
    }
}

/// Norm index of the β → n+2 limit: min{s1, s2 + (2−ε)/2} or σ + 2 − ε.
pub fn beta_limit_index(kind: ProblemKind, epsilon: f64, s1: f64, s2: f64, sigma: f64) -> f64 {
    combine(kind, s1.min(s2 + 0.5 * (2.0 - epsilon)), sigma + 2.0 - epsilon)
}

/// Check the (q, p) admissibility conditions for temporal differentiability.
#[allow(clippy::too_many_arguments)]
pub fn check_temporal_admissibility(
    kind: ProblemKind,
    n: u32,
    beta: f64,
    q: f64,
    p: u32,
    s1: f64,
    s2: f64,
    sigma: f64,
) -> Result<()> {
    if p < 1 {
        return Err(Error::domain("derivative order p must be >= 1"));
    }
    let nf = n as f64;
    let pf = p as f64;
    let excess = beta - nf;
    let fail = |ineq: &str, value: f64| {
        Err(Error::domain(format!(
            "inadmissible (q, p) = ({q}, {p}): {ineq} is violated (left side = {value})"
        )))
    };
    if kind != ProblemKind::Forced {
        let bound = s1.min(s2);
        if beta < nf {
            if q > bound {
                return fail("q <= min{s1, s2}", q - bound);
            }
        } else if beta == nf {
            if q >= bound {
                return fail("q < min{s1, s2}", q - bound);
            }
        } else {
            let a = q - s1 + (pf + 1.0) * excess / 2.0;
            if a > 0.0 {
                return fail("q - s1 + (p+1)(beta-n)/2 <= 0", a);
            }
            let b = q - s2 + pf * excess / 2.0;
            if b > 0.0 {
                return fail("q - s2 + p(beta-n)/2 <= 0", b);
            }
        }
    }
    if kind != ProblemKind::Homogeneous {
        if beta < nf {
            if q > sigma {
                return fail("q <= sigma", q - sigma);
            }
        } else if beta == nf {
            if q >= sigma {
                return fail("q < sigma", q - sigma);
            }
        } else {
            let a = q - sigma + (pf - 1.0) * excess / 2.0;
            if a > 0.0 {
                return fail("q - sigma + (p-1)(beta-n)/2 <= 0", a);
            }
        }
    }
    Ok(())
}

fn diff_norm(a: &SpectralField, b: &SpectralField, s: f64) -> f64 {
    let coeffs = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x - y).collect();
    SpectralField::from_raw(a.dim(), a.box_radius(), coeffs, false).sobolev_norm(s)
}

/// Norm over the sub-box [−radius, radius]^n only.
fn truncated_norm(field: &SpectralField, s: f64, radius: u32) -> f64 {
    let coeffs = field
        .iter()
        .map(|(k, c)| {
            if k.iter().all(|&x| x.unsigned_abs() <= radius as u64) {
                c
            } else {
                num_complex::Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    SpectralField::from_raw(field.dim(), field.box_radius(), coeffs, false).sobolev_norm(s)
}

/// Consecutive errors strictly decrease; rows already at the floor stay converged.
pub fn strictly_decreasing(errors: &[f64]) -> bool {
    errors
        .windows(2)
        .all(|w| w[1] < w[0] || (w[0] <= CONVERGED_FLOOR && w[1] <= CONVERGED_FLOOR))
}

fn final_below(errors: &[f64], tol: f64) -> bool {
    match (errors.first(), errors.last()) {
        (Some(&first), Some(&last)) => last <= tol * first || last <= CONVERGED_FLOOR,
        _ => true,
    }
}

fn classical_solution(cfg: &StudyConfig, data: &(SpectralField, SpectralField, SpectralField)) -> Result<SpectralField> {
    let table = MultiplierTable::laplacian(cfg.n, cfg.box_radius)?;
    Ok(wave::solve(&make_problem(cfg.problem, table, data)?, cfg.t, 0)?.field)
}

/// ‖U^{δ,β}(t) − U⁰(t)‖ along a decreasing δ grid.
pub fn study_delta_convergence(cfg: &StudyConfig) -> Result<StudyReport> {
    cfg.validate_common()?;
    let grid = cfg.sweep_values("delta", &DEFAULT_DELTA_GRID)?;
    if let Some(d) = grid.iter().find(|&&d| !(d > 0.0)) {
        return Err(Error::domain(format!("delta grid value {d} violates delta > 0")));
    }
    if grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::domain("delta grid must be strictly decreasing"));
    }
    let s = delta_limit_index(cfg.problem, cfg.n, cfg.beta, cfg.s1, cfg.s2, cfg.sigma);
    let data = synthetic_data(cfg)?;
    let reference = classical_solution(cfg, &data)?;
    let mut report = StudyReport::new(StudyKind::ConvergeDelta, cfg.clone());
    report.norm_index = Some(s);
    for &delta in &grid {
        let params = KernelParams::new(cfg.n, delta, cfg.beta)?;
        let table = build_table(&params, cfg.box_radius)?;
        let u = wave::solve(&make_problem(cfg.problem, table, &data)?, cfg.t, 0)?.field;
        report.rows.push(Row {
            swept: delta,
            measured: u.sobolev_norm(s),
            reference: reference.sobolev_norm(s),
            error: diff_norm(&u, &reference, s),
        });
    }
    let errors = report.errors();
    report.verdict("errors_strictly_decrease", strictly_decreasing(&errors));
    report.verdict("final_below_tol", final_below(&errors, cfg.tol.unwrap_or(0.1)));
    Ok(report)
}

/// Default β grid approaching n+2 from below inside the ε-window.
pub fn default_beta_grid(n: u32, epsilon: f64) -> Vec<f64> {
    (0..5)
        .map(|j| n as f64 + 2.0 - 0.8 * epsilon * 0.5f64.powi(j))
        .collect()
}

/// ‖U^{δ,β}(t) − U⁰(t)‖_{H^{s₀}} as β → n+2 inside (n+2−ε, n+2+ε).
pub fn study_beta_convergence(cfg: &StudyConfig) -> Result<StudyReport> {
    cfg.validate_common()?;
    let eps = cfg.epsilon;
    let nf = cfg.n as f64;
    if !(eps > 0.0 && eps < 2.0) {
        return Err(Error::domain(format!("epsilon = {eps} violates 0 < epsilon < 2")));
    }
    if !(eps < 0.5 * nf) {
        return Err(Error::domain(format!("epsilon = {eps} violates epsilon < n/2 = {}", 0.5 * nf)));
    }
    let grid = cfg.sweep_values("beta", &default_beta_grid(cfg.n, eps))?;
    let target = nf + 2.0;
    for &b in &grid {
        if !((b - target).abs() < eps) {
            return Err(Error::domain(format!(
                "beta = {b} lies outside the window (n+2-epsilon, n+2+epsilon) = ({}, {})",
                target - eps,
                target + eps
            )));
        }
    }
    if grid.windows(2).any(|w| (w[1] - target).abs() >= (w[0] - target).abs()) {
        return Err(Error::domain("beta grid must approach n+2: |beta - (n+2)| must strictly decrease"));
    }
    let s0 = beta_limit_index(cfg.problem, eps, cfg.s1, cfg.s2, cfg.sigma);
    let data = synthetic_data(cfg)?;
    let reference = classical_solution(cfg, &data)?;
    let mut report = StudyReport::new(StudyKind::ConvergeBeta, cfg.clone());
    report.norm_index = Some(s0);
    for &beta in &grid {
        let params = KernelParams::new(cfg.n, cfg.delta, beta)?;
        let table = build_table(&params, cfg.box_radius)?;
        let u = wave::solve(&make_problem(cfg.problem, table, &data)?, cfg.t, 0)?.field;
        report.rows.push(Row {
            swept: beta,
            measured: u.sobolev_norm(s0),
            reference: reference.sobolev_norm(s0),
            error: diff_norm(&u, &reference, s0),
        });
    }
    let errors = report.errors();
    report.verdict("errors_strictly_decrease", strictly_decreasing(&errors));
    report.verdict("final_below_tol", final_below(&errors, cfg.tol.unwrap_or(0.05)));
    Ok(report)
}

/// Fitted coefficient decay of U(t) against the predicted Sobolev index.
pub fn study_regularity(cfg: &StudyConfig) -> Result<StudyReport> {
    cfg.validate_common()?;
    let times = cfg.sweep_values("t", &[cfg.t])?;
    if let Some(t) = times.iter().find(|&&t| !(t >= 0.0)) {
        return Err(Error::domain(format!("time {t} violates t >= 0")));
    }
    let k = cfg.box_radius;
    if k < 16 {
        return Err(Error::domain("regularity fits need K >= 16"));
    }
    let s = spatial_index(cfg.problem, cfg.n, cfg.beta, cfg.s1, cfg.s2, cfg.sigma);
    let predicted = decay_for_index(cfg.n, s);
    let data = synthetic_data(cfg)?;
    let table = build_table(&cfg.kernel()?, k)?;
    let problem = make_problem(cfg.problem, table, &data)?;
    let tol = cfg.tol.unwrap_or(0.2);
    let mut report = StudyReport::new(StudyKind::Regularity, cfg.clone());
    report.norm_index = Some(s);
    let mut stable = true;
    for &t in &times {
        let u = wave::solve(&problem, t, 0)?.field;
        let fit = u.decay_exponent_fit((k / 8) as f64, k as f64)?;
        report.rows.push(Row {
            swept: t,
            measured: fit.exponent,
            reference: predicted,
            error: (fit.exponent - predicted).abs(),
        });
        let full = truncated_norm(&u, s, k);
        let half = truncated_norm(&u, s, k / 2);
        stable &= (full - half).abs() <= 0.01 * full;
    }
    let pass = report.rows.iter().all(|r| r.error <= tol);
    report.verdict("decay_matches_prediction", pass);
    report.verdict("norm_stabilizes", stable);
    Ok(report)
}

/// Ratio of the routed multiplier to its large-r expansion.
pub fn study_asymptotics(cfg: &StudyConfig) -> Result<StudyReport> {
    let params = cfg.kernel()?;
    if params.is_laplacian() {
        return Err(Error::domain("asymptotic study needs beta != n+2"));
    }
    let grid = cfg.sweep_values("r", &DEFAULT_R_GRID)?;
    if let Some(r) = grid.iter().find(|&&r| !(r > 1.0)) {
        return Err(Error::domain(format!("r grid value {r} violates r > 1")));
    }
    let mut report = StudyReport::new(StudyKind::Asymptotics, cfg.clone());
    for &r in &grid {
        let m = multiplier(&params, r)?.value;
        let a = multiplier_asymptotic(&params, r)?;
        report.rows.push(Row {
            swept: r,
            measured: m,
            reference: a,
            error: (m / a - 1.0).abs(),
        });
    }
    let errors = report.errors();
    report.verdict("ratio_error_strictly_decreases", strictly_decreasing(&errors));
    report.verdict(
        "final_ratio_within_tol",
        errors.last().is_some_and(|&e| e < cfg.tol.unwrap_or(0.01)),
    );
    Ok(report)
}

/// Observed convergence orders between consecutive rows.
pub fn observed_orders(steps: &[f64], errors: &[f64]) -> Vec<f64> {
    steps
        .windows(2)
        .zip(errors.windows(2))
        .map(|(h, e)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
        .collect()
}

/// Forward difference quotients of U^{(p−1)} against U^{(p)} in H^q.
pub fn study_temporal(cfg: &StudyConfig) -> Result<StudyReport> {
    cfg.validate_common()?;
    check_temporal_admissibility(cfg.problem, cfg.n, cfg.beta, cfg.q, cfg.p, cfg.s1, cfg.s2, cfg.sigma)?;
    let grid = cfg.sweep_values("h", &DEFAULT_H_GRID)?;
    if let Some(h) = grid.iter().find(|&&h| !(h > 0.0)) {
        return Err(Error::domain(format!("h grid value {h} violates h > 0")));
    }
    if grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::domain("h grid must be strictly decreasing"));
    }
    let data = synthetic_data(cfg)?;
    let table = build_table(&cfg.kernel()?, cfg.box_radius)?;
    let problem = make_problem(cfg.problem, table, &data)?;
    let (t, p, q) = (cfg.t, cfg.p, cfg.q);
    let base = wave::solve(&problem, t, p - 1)?.field;
    let exact = wave::solve(&problem, t, p)?.field;
    let mut report = StudyReport::new(StudyKind::Temporal, cfg.clone());
    report.norm_index = Some(q);
    for &h in &grid {
        let ahead = wave::solve(&problem, t + h, p - 1)?.field;
        let coeffs = ahead
            .coeffs()
            .iter()
            .zip(base.coeffs())
            .map(|(a, b)| (a - b) / h)
            .collect();
        let quotient = SpectralField::from_raw(cfg.n, cfg.box_radius, coeffs, false);
        report.rows.push(Row {
            swept: h,
            measured: quotient.sobolev_norm(q),
            reference: exact.sobolev_norm(q),
            error: diff_norm(&quotient, &exact, q),
        });
    }
    let errors = report.errors();
    let orders = observed_orders(&grid, &errors);
    let slack = cfg.tol.unwrap_or(0.05);
    report.verdict("errors_strictly_decrease", strictly_decreasing(&errors));
    report.verdict(
        "observed_order_at_least_one",
        orders.iter().all(|&o| o >= 1.0 - slack) || errors.iter().all(|&e| e <= CONVERGED_FLOOR),
    );
    Ok(report)
}
