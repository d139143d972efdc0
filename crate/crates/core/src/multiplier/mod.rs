//! Fourier multipliers of the nonlocal Laplacian on the torus.
//!
//! For kernel parameters (n, δ, β) the operator acts on `e^{iν·x}` by
//! multiplication with a radial, nonpositive symbol `m(‖ν‖)`. This module
//! evaluates that symbol along four independent routes:
//!
//! - [`multiplier_hypergeometric`]: −r² ₂F₃(1, (n+2−β)/2; 2, (n+2)/2, (n+4−β)/2; −r²δ²/4)
//! - [`multiplier_quadrature`]: the ball integral of (cos(ν·z)−1)/‖z‖^β, reduced to a
//!   radial integral (β < n+2, n ≤ 3)
//! - [`multiplier_extended_quadrature`]: −r² plus the ball integral of the
//!   second-order Taylor remainder of cos (β < n+4, n ≤ 3)
//! - [`multiplier_radial_series`]: the power series in r² obtained by integrating the
//!   angular average term by term
//!
//! plus the large-frequency expansion [`multiplier_asymptotic`]. [`multiplier`]
//! routes between the first three and records which one produced the value.

mod radial;
mod table;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadSettings};
use crate::specfun::{self, CompensatedSum, SeriesControl, EULER_GAMMA};

pub use radial::bessel_j0;
pub use table::{build_table, MultiplierTable};

/// Kernel parameters: dimension `n`, horizon `delta`, exponent `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    n: u32,
    delta: f64,
    beta: f64,
}

impl KernelParams {
    pub fn new(n: u32, delta: f64, beta: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("dimension n must be >= 1"));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::domain(format!("horizon delta must be > 0, got {delta}")));
        }
        if !beta.is_finite() || beta >= n as f64 + 4.0 {
            return Err(Error::domain(format!(
                "kernel exponent beta must satisfy beta < n+4 = {}, got {beta}",
                n + 4
            )));
        }
        Ok(KernelParams { n, delta, beta })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    /// True when β = n + 2, where the operator is the classical Laplacian.
    pub fn is_laplacian(&self) -> bool {
        self.beta == self.nf() + 2.0
    }

    /// The same kernel at a different exponent.
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        KernelParams::new(self.n, self.delta, beta)
    }

    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        KernelParams::new(self.n, delta, self.beta)
    }
}

/// Which evaluation route produced a multiplier value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalPath {
    /// r = 0.
    Zero,
    /// β = n+2 short-circuit, m = −r².
    Laplacian,
    Hypergeometric,
    Quadrature,
    ExtendedQuadrature,
    RadialSeries,
}

impl fmt::Display for EvalPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EvalPath::Zero => "zero",
            EvalPath::Laplacian => "laplacian",
            EvalPath::Hypergeometric => "hypergeometric",
            EvalPath::Quadrature => "quadrature",
            EvalPath::ExtendedQuadrature => "extended_quadrature",
            EvalPath::RadialSeries => "radial_series",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub path: EvalPath,
}

/// c^{δ,β} = 2(n+2−β) Γ(n/2+1) / (π^{n/2} δ^{n+2−β}).
pub fn scaling_constant(params: &KernelParams) -> f64 {
    let n = params.nf();
    let gap = n + 2.0 - params.beta;
    if gap == 0.0 {
        return 0.0;
    }
    let ln_g = specfun::ln_gamma(0.5 * n + 1.0).expect("n/2+1 > 0");
    let ln_mag = ln_g - 0.5 * n * std::f64::consts::PI.ln() - gap * params.delta.ln();
    2.0 * gap * ln_mag.exp()
}

fn check_frequency(r: f64) -> Result<()> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("frequency magnitude must be >= 0, got {r}")));
    }
    Ok(())
}

/// Cancellation factor above which the ₂F₃ value is rejected. Stricter than
/// [`specfun::CANCELLATION_LIMIT`] so routed values keep ~1e-10 relative accuracy.
pub const ROUTING_CANCELLATION_LIMIT: f64 = 1e5;

/// Multiplier via the ₂F₃ representation. Sums whose cancellation factor
/// exceeds [`ROUTING_CANCELLATION_LIMIT`] are reported as
/// [`Error::Cancellation`] rather than returned.
pub fn multiplier_hypergeometric(params: &KernelParams, r: f64) -> Result<f64> {
    check_frequency(r)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    if params.is_laplacian() {
        return Ok(-r * r);
    }
    let n = params.nf();
    let beta = params.beta;
    let z = -0.25 * r * r * params.delta * params.delta;
    let sum = specfun::hyp2f3(
        1.0,
        0.5 * (n + 2.0 - beta),
        2.0,
        0.5 * (n + 2.0),
        0.5 * (n + 4.0 - beta),
        z,
        &SeriesControl::default(),
    )?;
    if sum.cancellation || sum.cancellation_ratio() > ROUTING_CANCELLATION_LIMIT {
        return Err(Error::Cancellation {
            ratio: sum.cancellation_ratio(),
        });
    }
    Ok(-r * r * sum.value)
}

fn check_quadrature_dim(params: &KernelParams) -> Result<()> {
    if !(1..=3).contains(&params.n) {
        return Err(Error::domain(format!(
            "radial quadrature is available for n in {{1, 2, 3}}, got n = {}",
            params.n
        )));
    }
    Ok(())
}

/// Split point between the near-origin Taylor integral and quadrature.
fn series_cutoff(params: &KernelParams, r: f64) -> f64 {
    params.delta.min(1.0 / r.max(1.0))
}

/// ∫₀^{ρ₀} Σ_{j ≥ j0} a_j (rρ)^{2j} ρ^{n−1−β} dρ, term by term.
fn near_origin_series(params: &KernelParams, r: f64, rho0: f64, j0: u32) -> f64 {
    let n = params.n;
    let exp0 = params.nf() - params.beta;
    let x2 = (r * rho0) * (r * rho0);
    let mut coeff = 1.0; // a_j · x^{2j}
    let mut acc = CompensatedSum::new(0.0);
    let scale = rho0.powf(exp0);
    for j in 1..200u32 {
        coeff *= radial::coefficient_ratio(n, j) * x2;
        if j < j0 {
            continue;
        }
        let term = coeff * scale / (2.0 * j as f64 + exp0);
        acc.add(term);
        if term.abs() <= 1e-18 * acc.value().abs() {
            break;
        }
    }
    acc.value()
}

/// Uniform panels of roughly half an oscillation period on [ρ₀, δ].
fn panels(rho0: f64, delta: f64, r: f64) -> Vec<f64> {
    if rho0 >= delta {
        return vec![];
    }
    let count = (((delta - rho0) * r / std::f64::consts::PI).ceil() as usize).clamp(1, 200_000);
    let width = (delta - rho0) / count as f64;
    let mut pts: Vec<f64> = (0..count).map(|i| rho0 + width * i as f64).collect();
    pts.push(delta);
    pts
}

/// Multiplier via the defining ball integral, reduced to one radial dimension.
pub fn multiplier_quadrature(params: &KernelParams, r: f64) -> Result<f64> {
    check_frequency(r)?;
    check_quadrature_dim(params)?;
    let n = params.n;
    if params.beta >= params.nf() + 2.0 {
        return Err(Error::domain(format!(
            "the ball integral converges only for beta < n+2 = {}, got {}",
            n + 2,
            params.beta
        )));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let rho0 = series_cutoff(params, r);
    let head = near_origin_series(params, r, rho0, 1);
    let power = params.nf() - 1.0 - params.beta;
    let body = quadrature::integrate(
        |rho| (radial::angular_average(n, r * rho) - 1.0) * rho.powf(power),
        &panels(rho0, params.delta, r),
        &QuadSettings::default(),
    )?;
    Ok(scaling_constant(params) * radial::sphere_area(n) * (head + body.value))
}

/// Multiplier via −r² plus the ball integral of cos(ν·z) − 1 + (ν·z)²/2.
pub fn multiplier_extended_quadrature(params: &KernelParams, r: f64) -> Result<f64> {
    check_frequency(r)?;
    check_quadrature_dim(params)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    let c = scaling_constant(params);
    if c == 0.0 {
        return Ok(-r * r);
    }
    let n = params.n;
    let rho0 = series_cutoff(params, r);
    let head = near_origin_series(params, r, rho0, 2);
    let power = params.nf() - 1.0 - params.beta;
    let quad = 0.5 / params.nf() * r * r;
    let body = quadrature::integrate(
        |rho| {
            let x = r * rho;
            (radial::angular_average(n, x) - 1.0 + quad * rho * rho) * rho.powf(power)
        },
        &panels(rho0, params.delta, r),
        &QuadSettings::default(),
    )?;
    Ok(-r * r + c * radial::sphere_area(n) * (head + body.value))
}

/// Multiplier via the radial power series
/// m = 2π^{n/2} c Σ_{k≥1} (−r²/4)^k δ^{n−β+2k} / (k! Γ(n/2+k) (n−β+2k)).
///
/// The Γ(n/2+1)/Γ(n/2+k) ratio and δ^{n+2−β} are absorbed into the constant, so
/// m = (4(n+2−β)/δ²) Σ_{k≥1} u_k / (n−β+2k) with u_k = (−r²δ²/4)^k / (k! (n/2+1)_{k−1}).
pub fn multiplier_radial_series(params: &KernelParams, r: f64, ctrl: &SeriesControl) -> Result<f64> {
    check_frequency(r)?;
    if params.is_laplacian() {
        return Err(Error::domain(
            "radial series has a 0/0 leading term at beta = n+2",
        ));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let n = params.nf();
    let gap = n - params.beta;
    let z = -0.25 * r * r * params.delta * params.delta;
    let first = z / (gap + 2.0);
    let mut u = z;
    let sum = specfun::sum_series(first, ctrl, |i| {
        let k = (i + 2) as f64;
        u *= z / (k * (0.5 * n + k - 1.0));
        u / (gap + 2.0 * k)
    })?;
    Ok(4.0 * (n + 2.0 - params.beta) / (params.delta * params.delta) * sum.value)
}

/// Large-‖ν‖ expansion of the multiplier.
pub fn multiplier_asymptotic(params: &KernelParams, r: f64) -> Result<f64> {
    check_frequency(r)?;
    if params.is_laplacian() {
        return Err(Error::domain("no asymptotic expansion at beta = n+2"));
    }
    if !(r > 1.0) {
        return Err(Error::domain(format!("asymptotic form needs r > 1, got {r}")));
    }
    let n = params.nf();
    let beta = params.beta;
    let d2 = params.delta * params.delta;
    if beta == n {
        let psi = specfun::digamma(0.5 * n)?;
        return Ok(-(2.0 * n / d2) * (2.0 * r.ln() + (0.25 * d2).ln() + EULER_GAMMA - psi));
    }
    let constant = -2.0 * n * (n + 2.0 - beta) / (d2 * (n - beta));
    // Γ(β/2) has poles at β = 0, −2, …; 1/Γ vanishes there and so does the power term.
    let half_beta = 0.5 * beta;
    if half_beta <= 0.0 && half_beta == half_beta.floor() {
        return Ok(constant);
    }
    let ln_num = specfun::ln_gamma(0.5 * (n + 4.0 - beta))? + specfun::ln_gamma(0.5 * (n + 2.0))?;
    let (ln_gb, sign_gb) = ln_gamma_signed(half_beta)?;
    let coeff = 2.0 * (2.0 / params.delta).powf(n + 2.0 - beta) * sign_gb * (ln_num - ln_gb).exp()
        / (n - beta);
    Ok(constant + coeff * r.powf(beta - n))
}

/// log|Γ(x)| and sign Γ(x) for non-integer x ≤ 0 via reflection.
fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if x > 0.0 {
        return Ok((specfun::ln_gamma(x)?, 1.0));
    }
    // Γ(x) Γ(1−x) = π / sin(πx)
    let s = (std::f64::consts::PI * x).sin();
    let ln = std::f64::consts::PI.ln() - s.abs().ln() - specfun::ln_gamma(1.0 - x)?;
    Ok((ln, s.signum()))
}

/// Routed evaluation: ₂F₃ first, quadrature when the series is degraded.
pub fn multiplier(params: &KernelParams, r: f64) -> Result<Evaluation> {
    check_frequency(r)?;
    if r == 0.0 {
        return Ok(Evaluation {
            value: 0.0,
            path: EvalPath::Zero,
        });
    }
    if params.is_laplacian() {
        return Ok(Evaluation {
            value: -r * r,
            path: EvalPath::Laplacian,
        });
    }
    match multiplier_hypergeometric(params, r) {
        Ok(value) => Ok(Evaluation {
            value,
            path: EvalPath::Hypergeometric,
        }),
        Err(err @ (Error::Cancellation { .. } | Error::NonConvergence { .. })) => {
            if !(1..=3).contains(&params.n) {
                return Err(err);
            }
            if params.beta < params.nf() + 2.0 {
                Ok(Evaluation {
                    value: multiplier_quadrature(params, r)?,
                    path: EvalPath::Quadrature,
                })
            } else {
                Ok(Evaluation {
                    value: multiplier_extended_quadrature(params, r)?,
                    path: EvalPath::ExtendedQuadrature,
                })
            }
        }
        Err(e) => Err(e),
    }
}

/// Result of a monotonicity scan in β.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub samples: Vec<(f64, f64)>,
    pub strictly_decreasing: bool,
    pub all_negative: bool,
}

impl MonotonicityReport {
    pub fn verdict(&self) -> bool {
        self.strictly_decreasing && self.all_negative
    }
}

/// Sample β ↦ m(r) on a strictly increasing grid inside ((n+4)/2, n+4).
pub fn monotonicity_scan(n: u32, delta: f64, r: f64, beta_grid: &[f64]) -> Result<MonotonicityReport> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("frequency must be > 0, got {r}")));
    }
    let lo = 0.5 * (n as f64 + 4.0);
    let hi = n as f64 + 4.0;
    for &b in beta_grid {
        if !(b > lo && b < hi) {
            return Err(Error::domain(format!(
                "beta = {b} lies outside the monotonicity interval ({lo}, {hi})"
            )));
        }
    }
    if beta_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("beta grid must be strictly increasing"));
    }
    let mut samples = Vec::with_capacity(beta_grid.len());
    for &b in beta_grid {
        let params = KernelParams::new(n, delta, b)?;
        samples.push((b, multiplier(&params, r)?.value));
    }
    let strictly_decreasing = samples.windows(2).all(|w| w[1].1 < w[0].1);
    let all_negative = samples.iter().all(|s| s.1 < 0.0);
    Ok(MonotonicityReport {
        samples,
        strictly_decreasing,
        all_negative,
    })
}
