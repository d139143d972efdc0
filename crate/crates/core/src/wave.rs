//! Closed-form solutions of the nonlocal wave equation in Fourier space.
//!
//! Each mode solves û″ = m_k û + b̂_k. With ω_k = √(−m_k):
//!
//! - homogeneous: Û_k(t) = f̂_k cos(ω_k t) + ĝ_k sin(ω_k t)/ω_k
//! - forced, zero initial data: Û_k(t) = (b̂_k/m_k)(cos(ω_k t) − 1)
//!
//! and the zero mode reduces to f̂_0 + ĝ_0 t and b̂_0 t²/2.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiplier::MultiplierTable;
use crate::torus::{FieldJson, SpectralField};

/// Below this ωt the ratio sin(ωt)/ω switches to its Taylor series.
const SINC_SWITCH: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Homogeneous,
    Forced,
    Combined,
}

impl std::str::FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "homogeneous" => Ok(ProblemKind::Homogeneous),
            "forced" => Ok(ProblemKind::Forced),
            "combined" => Ok(ProblemKind::Combined),
            other => Err(Error::Usage(format!(
                "unknown problem kind '{other}' (expected homogeneous, forced or combined)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveProblem {
    table: MultiplierTable,
    f: SpectralField,
    g: SpectralField,
    b: SpectralField,
    kind: ProblemKind,
}

impl WaveProblem {
    /// u_tt = L u with u(0) = f, u_t(0) = g.
    pub fn homogeneous(table: MultiplierTable, f: SpectralField, g: SpectralField) -> Result<Self> {
        let b = SpectralField::zeros(f.dim(), f.box_radius())?;
        Self::assemble(table, f, g, b, ProblemKind::Homogeneous)
    }

    /// u_tt = L u + b with zero initial data.
    pub fn forced(table: MultiplierTable, b: SpectralField) -> Result<Self> {
        let f = SpectralField::zeros(b.dim(), b.box_radius())?;
        let g = f.clone();
        Self::assemble(table, f, g, b, ProblemKind::Forced)
    }

    /// u_tt = L u + b with u(0) = f, u_t(0) = g, solved by superposition.
    pub fn combined(
        table: MultiplierTable,
        f: SpectralField,
        g: SpectralField,
        b: SpectralField,
    ) -> Result<Self> {
        Self::assemble(table, f, g, b, ProblemKind::Combined)
    }

    fn assemble(
        table: MultiplierTable,
        f: SpectralField,
        g: SpectralField,
        b: SpectralField,
        kind: ProblemKind,
    ) -> Result<Self> {
        for (name, field) in [("f", &f), ("g", &g), ("b", &b)] {
            if field.dim() != table.dim() || field.box_radius() != table.box_radius() {
                return Err(Error::Shape(format!(
                    "field {name} lives on [-{}, {}]^{} but the multiplier table covers [-{}, {}]^{}",
                    field.box_radius(),
                    field.box_radius(),
                    field.dim(),
                    table.box_radius(),
                    table.box_radius(),
                    table.dim()
                )));
            }
        }
        table.validate()?;
        Ok(WaveProblem { table, f, g, b, kind })
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    pub fn table(&self) -> &MultiplierTable {
        &self.table
    }

    pub fn f(&self) -> &SpectralField {
        &self.f
    }

    pub fn g(&self) -> &SpectralField {
        &self.g
    }

    pub fn b(&self) -> &SpectralField {
        &self.b
    }

    fn has_homogeneous_part(&self) -> bool {
        self.kind != ProblemKind::Forced
    }

    fn has_forced_part(&self) -> bool {
        self.kind != ProblemKind::Homogeneous
    }

    fn real_flag(&self) -> bool {
        match self.kind {
            ProblemKind::Homogeneous => self.f.real_flag() && self.g.real_flag(),
            ProblemKind::Forced => self.b.real_flag(),
            ProblemKind::Combined => self.f.real_flag() && self.g.real_flag() && self.b.real_flag(),
        }
    }

    /// m_k for every dense position of the fields.
    fn multipliers(&self) -> Result<Vec<f64>> {
        let shape = &self.f;
        (0..shape.coeffs().len())
            .map(|i| {
                let s = shape.norm_sq_at(i);
                let m = self
                    .table
                    .get(s)
                    .ok_or_else(|| Error::Shape(format!("multiplier table lacks |k|^2 = {s}")))?;
                if m > 0.0 {
                    return Err(Error::CorruptedTable { norm_sq: s, value: m });
                }
                Ok(m)
            })
            .collect()
    }

    fn map_modes(&self, t: f64, order: u32, mode: impl Fn(f64, bool, usize) -> Complex64) -> Result<SolutionSnapshot> {
        check_time(t)?;
        let ms = self.multipliers()?;
        let coeffs = ms
            .iter()
            .enumerate()
            .map(|(i, &m)| mode(m, self.f.norm_sq_at(i) == 0, i))
            .collect();
        Ok(SolutionSnapshot {
            t,
            order,
            field: SpectralField::from_raw(self.f.dim(), self.f.box_radius(), coeffs, self.real_flag()),
        })
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain(format!("time must be a finite value >= 0, got {t}")));
    }
    Ok(())
}

fn omega(m: f64) -> f64 {
    (-m.min(0.0)).sqrt()
}

/// sin(ωt)/ω, continuous at ω = 0.
fn sinc_t(w: f64, t: f64) -> f64 {
    let x = w * t;
    if x < SINC_SWITCH {
        t - w * w * t * t * t / 6.0
    } else {
        x.sin() / w
    }
}

/// (cos(x + pπ/2), sin(x + pπ/2)).
fn rotated(x: f64, p: u32) -> (f64, f64) {
    let (s, c) = x.sin_cos();
    match p % 4 {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    }
}

/// p-th time derivative of the homogeneous mode with multiplier `m`.
pub fn homogeneous_mode(m: f64, zero_mode: bool, f: Complex64, g: Complex64, t: f64, p: u32) -> Complex64 {
    let w = omega(m);
    if zero_mode || w == 0.0 {
        return match p {
            0 => f + g * t,
            1 => g,
            _ => Complex64::new(0.0, 0.0),
        };
    }
    if p == 0 {
        return f * (w * t).cos() + g * sinc_t(w, t);
    }
    let (c, s) = rotated(w * t, p);
    f * (w.powi(p as i32) * c) + g * (w.powi(p as i32 - 1) * s)
}

/// p-th time derivative of the forced mode (zero initial data) with multiplier `m`.
pub fn forced_mode(m: f64, zero_mode: bool, b: Complex64, t: f64, p: u32) -> Complex64 {
    let w = omega(m);
    if zero_mode || w == 0.0 {
        return match p {
            0 => b * (0.5 * t * t),
            1 => b * t,
            2 => b,
            _ => Complex64::new(0.0, 0.0),
        };
    }
    match p {
        // (b/m)(cos ωt − 1) = 2b (sin(ωt/2)/ω)²
        0 => b * (2.0 * sinc_t(w, 0.5 * t).powi(2)),
        1 => b * sinc_t(w, t),
        _ => {
            let (c, _) = rotated(w * t, p);
            b * (-w.powi(p as i32 - 2) * c)
        }
    }
}

/// Spectral snapshot of U^{(order)}(t).
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSnapshot {
    pub t: f64,
    pub order: u32,
    pub field: SpectralField,
}

#[derive(Serialize, Deserialize)]
struct SnapshotJson {
    t: f64,
    order: u32,
    #[serde(flatten)]
    field: FieldJson,
}

impl SolutionSnapshot {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&SnapshotJson {
            t: self.t,
            order: self.order,
            field: FieldJson::from(&self.field),
        })?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SnapshotJson = serde_json::from_str(text)?;
        Ok(SolutionSnapshot {
            t: raw.t,
            order: raw.order,
            field: raw.field.into_field()?,
        })
    }
}

/// Û(t) for the homogeneous part of `problem`.
pub fn solve_homogeneous(problem: &WaveProblem, t: f64) -> Result<SolutionSnapshot> {
    derivative_homogeneous(problem, t, 0)
}

/// Û^{(p)}(t) for the homogeneous part of `problem`.
pub fn derivative_homogeneous(problem: &WaveProblem, t: f64, p: u32) -> Result<SolutionSnapshot> {
    if !problem.has_homogeneous_part() {
        return Err(Error::domain("problem has no initial data (kind is forced)"));
    }
    let (f, g) = (problem.f.coeffs(), problem.g.coeffs());
    problem.map_modes(t, p, |m, zero, i| homogeneous_mode(m, zero, f[i], g[i], t, p))
}

/// Û(t) for the forced part of `problem`.
pub fn solve_forced(problem: &WaveProblem, t: f64) -> Result<SolutionSnapshot> {
    derivative_forced(problem, t, 0)
}

/// Û^{(p)}(t) for the forced part of `problem`.
pub fn derivative_forced(problem: &WaveProblem, t: f64, p: u32) -> Result<SolutionSnapshot> {
    if !problem.has_forced_part() {
        return Err(Error::domain("problem has no forcing (kind is homogeneous)"));
    }
    let b = problem.b.coeffs();
    problem.map_modes(t, p, |m, zero, i| forced_mode(m, zero, b[i], t, p))
}

/// Û^{(p)}(t) for the full problem, superposing both parts where present.
pub fn solve(problem: &WaveProblem, t: f64, p: u32) -> Result<SolutionSnapshot> {
    let (f, g, b) = (problem.f.coeffs(), problem.g.coeffs(), problem.b.coeffs());
    let homog = problem.has_homogeneous_part();
    let forced = problem.has_forced_part();
    problem.map_modes(t, p, |m, zero, i| {
        let mut v = Complex64::new(0.0, 0.0);
        if homog {
            v += homogeneous_mode(m, zero, f[i], g[i], t, p);
        }
        if forced {
            v += forced_mode(m, zero, b[i], t, p);
        }
        v
    })
}

/// The classical wave equation u_tt = Δu + b with u(0) = f, u_t(0) = g.
pub fn solve_classical(
    f: &SpectralField,
    g: &SpectralField,
    b: &SpectralField,
    t: f64,
) -> Result<SolutionSnapshot> {
    let table = MultiplierTable::laplacian(f.dim(), f.box_radius())?;
    let problem = WaveProblem::combined(table, f.clone(), g.clone(), b.clone())?;
    solve(&problem, t, 0)
}

/// E(t) = Σ_k |Û′_k(t)|² + (−m_k)|Û_k(t)|² for the homogeneous problem.
pub fn energy(problem: &WaveProblem, t: f64) -> Result<f64> {
    if problem.kind != ProblemKind::Homogeneous {
        return Err(Error::domain("energy is defined for homogeneous problems"));
    }
    let u = solve_homogeneous(problem, t)?;
    let v = derivative_homogeneous(problem, t, 1)?;
    let ms = problem.multipliers()?;
    Ok(ms
        .iter()
        .zip(u.field.coeffs().iter().zip(v.field.coeffs()))
        .map(|(&m, (a, b))| b.norm_sqr() + (-m.min(0.0)) * a.norm_sqr())
        .sum())
}

/// Integrate û″ = m û + b̂ from (f0, g0) to time t with classical RK4.
///
/// The step is the largest h ≤ dt dividing t evenly. Returns (û(t), û′(t)).
pub fn ode_mode_oracle(
    m: f64,
    f0: Complex64,
    g0: Complex64,
    b0: Complex64,
    t: f64,
    dt: f64,
) -> Result<(Complex64, Complex64)> {
    check_time(t)?;
    if !(dt > 0.0) {
        return Err(Error::domain(format!("step must be > 0, got {dt}")));
    }
    if t == 0.0 {
        return Ok((f0, g0));
    }
    let steps = (t / dt).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let rhs = |u: Complex64| u * m + b0;
    let (mut u, mut v) = (f0, g0);
    for _ in 0..steps {
        let k1u = v;
        let k1v = rhs(u);
        let k2u = v + k1v * (0.5 * h);
        let k2v = rhs(u + k1u * (0.5 * h));
        let k3u = v + k2v * (0.5 * h);
        let k3v = rhs(u + k2u * (0.5 * h));
        let k4u = v + k3v * h;
        let k4v = rhs(u + k3u * h);
        u += (k1u + k2u * 2.0 + k3u * 2.0 + k4u) * (h / 6.0);
        v += (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6.0);
    }
    Ok((u, v))
}
