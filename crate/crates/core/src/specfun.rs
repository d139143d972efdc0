//! Real special functions used by the multiplier formulas.
//!
//! | Function | Description |
//! |----------|-------------|
//! | [`ln_gamma`] | log Γ(x) for x > 0 |
//! | [`digamma`] | ψ(x) = d/dx log Γ(x) for x > 0 |
//! | [`pochhammer`] | rising factorial (a)_k |
//! | [`hyp2f3`] | ₂F₃(a1, a2; b1, b2, b3; z) by its defining series |

use crate::error::{Error, Result};

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Cancellation factor above which a series result is flagged as degraded.
pub const CANCELLATION_LIMIT: f64 = 1e10;

/// Truncation rule for hypergeometric-type series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
    pub consecutive_small: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            rel_tol: 1e-14,
            max_terms: 10_000,
            consecutive_small: 3,
        }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize, consecutive_small: usize) -> Result<Self> {
        let ctrl = SeriesControl {
            rel_tol,
            max_terms,
            consecutive_small,
        };
        ctrl.validate()?;
        Ok(ctrl)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::domain(format!("rel_tol must be > 0, got {}", self.rel_tol)));
        }
        if self.max_terms < 1 {
            return Err(Error::domain("max_terms must be >= 1"));
        }
        if self.consecutive_small < 1 {
            return Err(Error::domain("consecutive_small must be >= 1"));
        }
        Ok(())
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn new(init: f64) -> Self {
        CompensatedSum { sum: init, comp: 0.0 }
    }

    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Outcome of a converged series summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    /// Number of terms added, including the k = 0 term.
    pub terms: usize,
    /// Largest |partial sum| seen while summing.
    pub max_partial: f64,
    /// True when `max_partial / |value|` exceeds [`CANCELLATION_LIMIT`].
    pub cancellation: bool,
}

impl SeriesSum {
    pub fn cancellation_ratio(&self) -> f64 {
        if self.value == 0.0 {
            f64::INFINITY
        } else {
            self.max_partial / self.value.abs()
        }
    }
}

/// Sum `first + Σ_{k≥0} next_term(k)`.
///
/// Stops once `ctrl.consecutive_small` successive terms satisfy
/// `|t| < rel_tol · max(|partial|, 1e-300)`.
pub(crate) fn sum_series(
    first: f64,
    ctrl: &SeriesControl,
    mut next_term: impl FnMut(usize) -> f64,
) -> Result<SeriesSum> {
    ctrl.validate()?;
    let mut acc = CompensatedSum::new(first);
    let mut term = first;
    let mut max_partial = first.abs();
    let mut small_run = 0usize;
    let mut terms = 1usize;
    for k in 0..ctrl.max_terms {
        term = next_term(k);
        acc.add(term);
        terms += 1;
        let partial = acc.value();
        if !term.is_finite() || !partial.is_finite() {
            return Err(Error::NonConvergence {
                terms,
                partial,
                last_term: term.abs(),
            });
        }
        max_partial = max_partial.max(partial.abs());
        if term.abs() < ctrl.rel_tol * partial.abs().max(1e-300) {
            small_run += 1;
            if small_run >= ctrl.consecutive_small {
                let value = acc.value();
                let cancellation = value == 0.0 && max_partial > 0.0
                    || max_partial > CANCELLATION_LIMIT * value.abs();
                return Ok(SeriesSum {
                    value,
                    terms,
                    max_partial,
                    cancellation,
                });
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NonConvergence {
        terms,
        partial: acc.value(),
        last_term: term.abs(),
    })
}

// Lanczos approximation, g = 671/128, 14 coefficients.
const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999_999_999_999_997_1;
const LANCZOS_COF: [f64; 14] = [
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    4.652_362_892_704_858e-5,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_88e-3,
    0.217_439_618_115_212_64e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

// ζ(2), ζ(3), …, ζ(30) for the Taylor series of log Γ(1 + ε).
const ZETA: [f64; 29] = [
    1.644_934_066_848_226_4,
    1.202_056_903_159_594_3,
    1.082_323_233_711_138_2,
    1.036_927_755_143_37,
    1.017_343_061_984_449,
    1.008_349_277_381_922_8,
    1.004_077_356_197_944_3,
    1.002_008_392_826_082_2,
    1.000_994_575_127_818,
    1.000_494_188_604_119_5,
    1.000_246_086_553_308,
    1.000_122_713_347_578_5,
    1.000_061_248_135_058_7,
    1.000_030_588_236_307,
    1.000_015_282_259_408_6,
    1.000_007_637_197_637_9,
    1.000_003_817_293_265,
    1.000_001_908_212_716_6,
    1.000_000_953_962_033_9,
    1.000_000_476_932_986_8,
    1.000_000_238_450_502_7,
    1.000_000_119_219_926,
    1.000_000_059_608_189,
    1.000_000_029_803_503_5,
    1.000_000_014_901_554_8,
    1.000_000_007_450_711_8,
    1.000_000_003_725_334,
    1.000_000_001_862_659_7,
    1.000_000_000_931_327_4,
];

fn lanczos_ln_gamma(x: f64) -> f64 {
    let mut y = x;
    let tmp = x + LANCZOS_G;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = LANCZOS_C0;
    for c in LANCZOS_COF {
        y += 1.0;
        ser += c / y;
    }
    tmp + (SQRT_2PI * ser / x).ln()
}

/// log Γ(1 + eps) for |eps| ≤ 0.25, accurate in relative terms near eps = 0.
fn ln_gamma_1p(eps: f64) -> f64 {
    let mut acc = -EULER_GAMMA * eps;
    let mut pow = -eps;
    for (i, z) in ZETA.iter().enumerate() {
        let k = (i + 2) as f64;
        pow *= -eps;
        acc += z * pow / k;
    }
    acc
}

/// Natural logarithm of the gamma function for `x > 0`.
///
/// Near the roots x = 1 and x = 2 a Taylor series in `x - 1` keeps the
/// relative error small; elsewhere a Lanczos sum is used.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    let e1 = x - 1.0;
    if e1.abs() <= 0.2 {
        return Ok(ln_gamma_1p(e1));
    }
    let e2 = x - 2.0;
    if e2.abs() <= 0.2 {
        // Γ(2 + ε) = (1 + ε) Γ(1 + ε)
        return Ok(ln_gamma_1p(e2) + e2.ln_1p());
    }
    Ok(lanczos_ln_gamma(x))
}

/// Γ(x) for `x > 0`, via [`ln_gamma`].
pub fn gamma(x: f64) -> Result<f64> {
    ln_gamma(x).map(f64::exp)
}

/// Digamma ψ(x) for `x > 0`.
///
/// Upward recurrence to x ≥ 10, then the asymptotic expansion in 1/x².
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("digamma requires x > 0, got {x}")));
    }
    let mut shift = 0.0;
    let mut y = x;
    while y < 10.0 {
        shift -= 1.0 / y;
        y += 1.0;
    }
    // Bernoulli B_{2k} / (2k) for k = 1..7
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
    ];
    let inv2 = 1.0 / (y * y);
    let mut tail = 0.0;
    for c in C.iter().rev() {
        tail = (tail + c) * inv2;
    }
    Ok(shift + y.ln() - 0.5 / y - tail)
}

/// Rising factorial (a)_k = a(a+1)···(a+k−1), with (a)_0 = 1.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a + j as f64))
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Generalized hypergeometric ₂F₃ by its defining series.
///
/// Returns the compensated sum together with the cancellation diagnostics;
/// callers decide what to do with a flagged result.
pub fn hyp2f3(
    a1: f64,
    a2: f64,
    b1: f64,
    b2: f64,
    b3: f64,
    z: f64,
    ctrl: &SeriesControl,
) -> Result<SeriesSum> {
    for (name, b) in [("b1", b1), ("b2", b2), ("b3", b3)] {
        if is_nonpositive_integer(b) {
            return Err(Error::domain(format!(
                "hyp2f3 lower parameter {name} = {b} is zero or a negative integer"
            )));
        }
    }
    if z == 0.0 || a1 == 0.0 || a2 == 0.0 {
        return Ok(SeriesSum {
            value: 1.0,
            terms: 1,
            max_partial: 1.0,
            cancellation: false,
        });
    }
    let mut term = 1.0;
    sum_series(1.0, ctrl, |k| {
        let k = k as f64;
        term *= (a1 + k) * (a2 + k) / ((b1 + k) * (b2 + k) * (b3 + k)) * z / (k + 1.0);
        term
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn ln_gamma_known_values() {
        assert_eq!(ln_gamma(1.0).unwrap(), 0.0);
        assert_eq!(ln_gamma(2.0).unwrap(), 0.0);
        assert_relative_eq!(ln_gamma(5.0).unwrap(), 24f64.ln(), max_relative = 1e-14);
        let half = (std::f64::consts::PI.sqrt() / 2.0).ln();
        assert_relative_eq!(ln_gamma(1.5).unwrap(), half, max_relative = 1e-13);
        assert_relative_eq!(ln_gamma(1.5).unwrap(), -0.120_782_237_6, epsilon = 1e-10);
    }

    #[test]
    fn ln_gamma_against_reference() {
        // mpmath.loggamma at 40 digits
        let cases = [
            (0.001, 6.907_178_885_383_853),
            (0.1, 2.252_712_651_734_206),
            (0.5, 0.572_364_942_924_700_1),
            (2.5, 0.284_682_870_472_919_2),
            (7.3, 7.147_892_523_022_249),
            (100.0, 359.134_205_369_575_4),
            (1000.0, 5_905.220_423_209_181),
        ];
        for (x, want) in cases {
            assert_relative_eq!(ln_gamma(x).unwrap(), want, max_relative = 1e-13);
        }
    }

    #[test]
    fn ln_gamma_near_roots_keeps_relative_accuracy() {
        // mpmath.loggamma(1.001), loggamma(2.001)
        assert_relative_eq!(
            ln_gamma(1.001).unwrap(),
            -0.000_576_393_598_283_306_2,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            ln_gamma(2.001).unwrap(),
            0.000_423_106_734_800_117,
            max_relative = 1e-13
        );
    }

    #[test]
    fn ln_gamma_duplication() {
        // Γ(x)Γ(x+1/2) = 2^{1−2x} √π Γ(2x)
        for &x in &[0.3, 1.1, 2.7, 9.5, 40.0] {
            let lhs = ln_gamma(x).unwrap() + ln_gamma(x + 0.5).unwrap();
            let rhs = (1.0 - 2.0 * x) * 2f64.ln()
                + 0.5 * std::f64::consts::PI.ln()
                + ln_gamma(2.0 * x).unwrap();
            assert_relative_eq!(lhs, rhs, epsilon = 1e-13, max_relative = 1e-13);
        }
    }

    #[test]
    fn ln_gamma_rejects_nonpositive() {
        assert!(matches!(ln_gamma(0.0), Err(Error::Domain(_))));
        assert!(matches!(ln_gamma(-1.5), Err(Error::Domain(_))));
        assert!(matches!(ln_gamma(f64::NAN), Err(Error::Domain(_))));
    }

    /// ψ(x) = −γ + Σ_{k≥0} (1/(k+1) − 1/(k+x)), with the tail
    /// Σ_{k≥N} (x−1)/((k+1)(k+x)) ≈ (x−1)/N removed analytically.
    fn digamma_series_oracle(x: f64) -> f64 {
        let n = 2_000_000usize;
        let mut acc = 0.0;
        for k in (0..n).rev() {
            let k = k as f64;
            acc += 1.0 / (k + 1.0) - 1.0 / (k + x);
        }
        let nf = n as f64;
        let tail = (x - 1.0) / (nf + 0.5 * x);
        -EULER_GAMMA + acc + tail
    }

    #[test]
    fn digamma_values() {
        assert_relative_eq!(digamma(1.0).unwrap(), -EULER_GAMMA, epsilon = 1e-12);
        assert_relative_eq!(digamma(2.0).unwrap(), 1.0 - EULER_GAMMA, epsilon = 1e-12);
        let half = -EULER_GAMMA - 2.0 * 2f64.ln();
        assert_relative_eq!(digamma(0.5).unwrap(), half, epsilon = 1e-12);
        assert_relative_eq!(digamma(0.5).unwrap(), -1.963_510_026_0, epsilon = 1e-10);
        for &x in &[0.5, 1.0, 3.7] {
            assert_relative_eq!(digamma(x).unwrap(), digamma_series_oracle(x), epsilon = 1e-9);
        }
    }

    #[test]
    fn digamma_against_reference() {
        // mpmath.digamma
        let cases = [
            (0.01, -100.560_885_457_868_67),
            (3.7, 1.167_153_539_361_511_4),
            (10.0, 2.251_752_589_066_721),
            (1000.0, 6.907_255_195_648_812),
        ];
        for (x, want) in cases {
            assert_relative_eq!(digamma(x).unwrap(), want, epsilon = 1e-12);
        }
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(3.0, 0), 1.0);
        assert_eq!(pochhammer(1.0, 4), 24.0);
        assert_eq!(pochhammer(0.0, 3), 0.0);
        assert_eq!(pochhammer(-2.0, 3), 0.0);
        assert_eq!(pochhammer(0.5, 2), 0.75);
    }

    #[test]
    fn hyp2f3_trivial_cases() {
        let ctrl = SeriesControl::default();
        assert_eq!(hyp2f3(1.0, 0.7, 2.0, 1.5, 3.0, 0.0, &ctrl).unwrap().value, 1.0);
        assert_eq!(hyp2f3(1.0, 0.0, 2.0, 1.5, 3.0, -50.0, &ctrl).unwrap().value, 1.0);
        // (−1)_k vanishes from k = 2 on: 1 + a1 a2 z / (b1 b2 b3)
        let s = hyp2f3(1.0, -1.0, 2.0, 1.5, 3.0, -4.0, &ctrl).unwrap();
        assert_relative_eq!(s.value, 1.0 + 4.0 / 9.0, max_relative = 1e-15);
    }

    /// Term-by-term oracle with Pochhammer products (no ratio recurrence).
    fn hyp2f3_direct(a1: f64, a2: f64, b1: f64, b2: f64, b3: f64, z: f64, n: u32) -> f64 {
        let mut acc = 0.0;
        let mut fact = 1.0;
        for k in 0..n {
            if k > 0 {
                fact *= k as f64;
            }
            acc += pochhammer(a1, k) * pochhammer(a2, k)
                / (pochhammer(b1, k) * pochhammer(b2, k) * pochhammer(b3, k))
                * z.powi(k as i32)
                / fact;
        }
        acc
    }

    #[test]
    fn hyp2f3_matches_high_precision_reference() {
        let ctrl = SeriesControl::default();
        let got = hyp2f3(1.0, 1.0, 2.0, 2.0, 1.5, -1.0, &ctrl).unwrap();
        // mpmath.hyp2f3(1, 1, 2, 2, 1.5, -1) at 40 digits
        assert_relative_eq!(got.value, 0.847_382_016_686_613_2, max_relative = 1e-10);
        let direct = hyp2f3_direct(1.0, 1.0, 2.0, 2.0, 1.5, -1.0, 30);
        assert_relative_eq!(got.value, direct, max_relative = 1e-13);
        assert!(!got.cancellation);
    }

    #[test]
    fn hyp2f3_rejects_bad_lower_parameters() {
        let ctrl = SeriesControl::default();
        for b in [0.0, -1.0, -3.0] {
            assert!(matches!(
                hyp2f3(1.0, 1.0, b, 2.0, 2.0, -1.0, &ctrl),
                Err(Error::Domain(_))
            ));
        }
    }

    #[test]
    fn hyp2f3_reports_nonconvergence() {
        let ctrl = SeriesControl::new(1e-14, 5, 3).unwrap();
        match hyp2f3(1.0, 1.0, 2.0, 2.0, 1.5, -100.0, &ctrl) {
            Err(Error::NonConvergence { terms, last_term, .. }) => {
                assert_eq!(terms, 6);
                assert!(last_term > 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn hyp2f3_flags_cancellation() {
        let ctrl = SeriesControl::default();
        // multiplier use-case at r·δ = 60: terms reach ~e^60
        let z = -900.0;
        match hyp2f3(1.0, 1.5, 2.0, 1.5, 2.5, z, &ctrl) {
            Ok(s) => assert!(s.cancellation, "ratio {}", s.cancellation_ratio()),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn series_control_validation() {
        assert!(SeriesControl::new(0.0, 10, 3).is_err());
        assert!(SeriesControl::new(1e-10, 0, 3).is_err());
        assert!(SeriesControl::new(1e-10, 10, 0).is_err());
        assert!(SeriesControl::new(1e-10, 10, 1).is_ok());
    }

    #[test]
    fn hyp2f3_value_bracketed_by_alternating_partial_sums() {
        // multiplier parameters with n = 1, β = 0, z = −r²δ²/4 at r = 6
        let (n, beta) = (1.0, 0.0);
        let (a1, a2, b1, b2, b3) = (1.0, (n + 2.0 - beta) / 2.0, 2.0, (n + 2.0) / 2.0, (n + 4.0 - beta) / 2.0);
        let z = -9.0;
        let value = hyp2f3(a1, a2, b1, b2, b3, z, &SeriesControl::default()).unwrap().value;
        let mut term = 1.0;
        let mut partial = 1.0;
        let mut prev = partial;
        for k in 0..60 {
            let kf = k as f64;
            term *= (a1 + kf) * (a2 + kf) / ((b1 + kf) * (b2 + kf) * (b3 + kf)) * z / (kf + 1.0);
            partial += term;
            // once terms decrease in magnitude, consecutive partial sums bracket the limit
            if k > 10 && term.abs() > 1e-12 {
                let (lo, hi) = if prev < partial { (prev, partial) } else { (partial, prev) };
                assert!(lo - 1e-15 <= value && value <= hi + 1e-15, "k={k}");
            }
            prev = partial;
        }
    }

    proptest! {
        #[test]
        fn pochhammer_recurrence(a in -10.0f64..10.0, k in 0u32..20) {
            let lhs = pochhammer(a, k + 1);
            let rhs = pochhammer(a, k) * (a + k as f64);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
        }

        #[test]
        fn gamma_recurrence(logx in (0.1f64).ln()..(100f64).ln()) {
            let x = logx.exp();
            let lhs = ln_gamma(x + 1.0).unwrap().exp();
            let rhs = x * ln_gamma(x).unwrap().exp();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
        }

        #[test]
        fn digamma_recurrence(x in 0.01f64..100.0) {
            let lhs = digamma(x + 1.0).unwrap();
            let rhs = digamma(x).unwrap() + 1.0 / x;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
        }
    }
}
