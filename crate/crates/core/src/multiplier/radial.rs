//! Angular averages of plane waves over the unit sphere S^{n−1}, n ∈ {1, 2, 3}.
//!
//! `A_n(x)` is the mean of `cos(x ω·e)` over unit vectors ω:
//! n = 1 gives cos x, n = 2 gives J₀(x), n = 3 gives sin x / x.
//! Its Taylor series is ₀F₁(; n/2; −x²/4) with coefficients `a_j` for x^{2j}.

use std::f64::consts::PI;

/// Surface measure |S^{n−1}|.
pub fn sphere_area(n: u32) -> f64 {
    match n {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => unreachable!("radial reduction is implemented for n <= 3"),
    }
}

/// Ratio `a_j / a_{j−1}` of consecutive Taylor coefficients of `A_n`.
pub fn coefficient_ratio(n: u32, j: u32) -> f64 {
    let j = j as f64;
    -1.0 / (4.0 * j * (0.5 * n as f64 + j - 1.0))
}

pub fn angular_average(n: u32, x: f64) -> f64 {
    match n {
        1 => x.cos(),
        2 => bessel_j0(x),
        3 => {
            if x == 0.0 {
                1.0
            } else {
                x.sin() / x
            }
        }
        _ => unreachable!("radial reduction is implemented for n <= 3"),
    }
}

/// Bessel J₀ for x ≥ 0.
///
/// Trapezoidal rule on (1/π)∫₀^π cos(x cos θ) dθ for x ≤ 30 (the periodic
/// integrand makes the rule spectrally accurate once the node count exceeds
/// x by a margin), Hankel's asymptotic expansion beyond.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= 30.0 {
        let m = (x / 2.0).ceil() as usize + 20;
        let h = PI / m as f64;
        let mut acc = 0.5 * (x.cos() + (-x).cos());
        for j in 1..m {
            acc += (x * (h * j as f64).cos()).cos();
        }
        acc / m as f64
    } else {
        j0_hankel(x)
    }
}

fn j0_hankel(x: f64) -> f64 {
    // a_k(0) = Π_{i=1..k} (−(2i−1)²) / (k! 8^k)
    let mut p = 0.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..200 {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            term *= -(odd * odd) / (k as f64 * 8.0 * x);
        }
        let mag = term.abs();
        if mag > prev || mag < 1e-18 {
            break;
        }
        prev = mag;
        // P collects even k with sign (−1)^{k/2}, Q odd k with sign (−1)^{(k−1)/2}
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
    }
    let (s, c) = x.sin_cos();
    let cos_chi = (c + s) * std::f64::consts::FRAC_1_SQRT_2;
    let sin_chi = (s - c) * std::f64::consts::FRAC_1_SQRT_2;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}
