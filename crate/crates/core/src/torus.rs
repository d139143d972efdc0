//! Truncated Fourier series on the torus [0, 2π]^n.
//!
//! A [`SpectralField`] stores every coefficient û_k for k in the sup-norm box
//! [−K, K]^n, densely and in lexicographic order of k.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance of the Hermitian scan applied to fields that claim to be real.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    dim: u32,
    box_radius: u32,
    coeffs: Vec<Complex64>,
    real_flag: bool,
}

fn box_len(dim: u32, box_radius: u32) -> Result<usize> {
    if dim < 1 {
        return Err(Error::Shape("field dimension must be >= 1".into()));
    }
    let side = 2 * box_radius as usize + 1;
    side.checked_pow(dim)
        .filter(|&len| len <= 1 << 28)
        .ok_or_else(|| Error::Shape(format!("box [-{box_radius}, {box_radius}]^{dim} is too large")))
}

impl SpectralField {
    /// The zero field on [−K, K]^n.
    pub fn zeros(dim: u32, box_radius: u32) -> Result<Self> {
        Ok(SpectralField {
            dim,
            box_radius,
            coeffs: vec![Complex64::new(0.0, 0.0); box_len(dim, box_radius)?],
            real_flag: true,
        })
    }

    /// Build a field from (k, û_k) pairs; unspecified coefficients are zero.
    pub fn from_entries<I>(dim: u32, box_radius: u32, real_flag: bool, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Complex64)>,
    {
        let mut field = SpectralField::zeros(dim, box_radius)?;
        for (k, v) in entries {
            let idx = field.index_of(&k)?;
            field.coeffs[idx] = v;
        }
        field.real_flag = real_flag;
        if real_flag {
            field.check_hermitian()?;
        }
        Ok(field)
    }

    pub(crate) fn from_raw(dim: u32, box_radius: u32, coeffs: Vec<Complex64>, real_flag: bool) -> Self {
        debug_assert_eq!(Some(coeffs.len()), box_len(dim, box_radius).ok());
        SpectralField {
            dim,
            box_radius,
            coeffs,
            real_flag,
        }
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn box_radius(&self) -> u32 {
        self.box_radius
    }

    pub fn real_flag(&self) -> bool {
        self.real_flag
    }

    /// Coefficients in lexicographic order of k.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    fn side(&self) -> usize {
        2 * self.box_radius as usize + 1
    }

    /// Dense position of multi-index `k`.
    pub fn index_of(&self, k: &[i64]) -> Result<usize> {
        if k.len() != self.dim as usize {
            return Err(Error::Shape(format!(
                "multi-index has {} components, field dimension is {}",
                k.len(),
                self.dim
            )));
        }
        let radius = self.box_radius as i64;
        let mut idx = 0usize;
        for &c in k {
            if c.abs() > radius {
                return Err(Error::Shape(format!(
                    "multi-index {k:?} lies outside the box of radius {radius}"
                )));
            }
            idx = idx * self.side() + (c + radius) as usize;
        }
        Ok(idx)
    }

    /// Multi-index stored at dense position `idx`.
    pub fn multi_index(&self, mut idx: usize) -> Vec<i64> {
        let side = self.side();
        let mut k = vec![0i64; self.dim as usize];
        for slot in k.iter_mut().rev() {
            *slot = (idx % side) as i64 - self.box_radius as i64;
            idx /= side;
        }
        k
    }

    /// ‖k‖² of the multi-index at dense position `idx`.
    pub fn norm_sq_at(&self, mut idx: usize) -> u64 {
        let side = self.side();
        let radius = self.box_radius as i64;
        let mut s = 0u64;
        for _ in 0..self.dim {
            let c = (idx % side) as i64 - radius;
            s += (c * c) as u64;
            idx /= side;
        }
        s
    }

    /// Dense position of −k given the position of k.
    fn mirror(&self, idx: usize) -> usize {
        self.coeffs.len() - 1 - idx
    }

    pub fn get(&self, k: &[i64]) -> Result<Complex64> {
        Ok(self.coeffs[self.index_of(k)?])
    }

    /// Iterate over (k, û_k) for every coefficient in the box.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<i64>, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (self.multi_index(i), c))
    }

    /// Largest |û_{−k} − conj(û_k)|.
    pub fn hermitian_defect(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (self.coeffs[self.mirror(i)] - c.conj()).norm())
            .fold(0.0, f64::max)
    }

    fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Scan û_{−k} = conj(û_k) to relative tolerance [`HERMITIAN_TOL`].
    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() <= HERMITIAN_TOL * self.max_abs().max(f64::MIN_POSITIVE)
    }

    fn check_hermitian(&self) -> Result<()> {
        if self.is_hermitian() {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "field is flagged real but violates Hermitian symmetry by {:e}",
                self.hermitian_defect()
            )))
        }
    }

    pub fn same_shape(&self, other: &SpectralField) -> bool {
        self.dim == other.dim && self.box_radius == other.box_radius
    }

    /// (Σ_k (1+‖k‖²)^q |û_k|²)^{1/2}.
    pub fn sobolev_norm(&self, q: f64) -> f64 {
        let mut acc = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let w = c.norm_sqr();
            if w != 0.0 {
                acc += (1.0 + self.norm_sq_at(i) as f64).powf(q) * w;
            }
        }
        acc.sqrt()
    }

    /// Discrete Fourier coefficients of samples on the uniform (2K+1)^n grid.
    ///
    /// Samples are indexed lexicographically by grid point, the last axis fastest;
    /// point j on an axis sits at 2πj/(2K+1).
    pub fn from_samples(dim: u32, box_radius: u32, samples: &[Complex64]) -> Result<Self> {
        let len = box_len(dim, box_radius)?;
        if samples.len() != len {
            return Err(Error::Shape(format!(
                "expected {len} samples for a (2*{box_radius}+1)^{dim} grid, got {}",
                samples.len()
            )));
        }
        let side = 2 * box_radius as usize + 1;
        let radius = box_radius as i64;
        // twiddle[k + K][j] = e^{−i k x_j} / (2K+1)
        let twiddle: Vec<Vec<Complex64>> = (-radius..=radius)
            .map(|k| {
                (0..side)
                    .map(|j| {
                        let x = 2.0 * PI * j as f64 / side as f64;
                        Complex64::from_polar(1.0 / side as f64, -(k as f64) * x)
                    })
                    .collect()
            })
            .collect();
        let mut data = samples.to_vec();
        let mut line = vec![Complex64::new(0.0, 0.0); side];
        // one pass per axis; stride of axis a is side^(dim−1−a)
        for axis in 0..dim {
            let stride = side.pow(dim - 1 - axis);
            for base in 0..len {
                if !(base / stride).is_multiple_of(side) {
                    continue;
                }
                for (kk, out) in line.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (j, w) in twiddle[kk].iter().enumerate() {
                        acc += data[base + j * stride] * w;
                    }
                    *out = acc;
                }
                for (kk, v) in line.iter().enumerate() {
                    data[base + kk * stride] = *v;
                }
            }
        }
        let real = samples.iter().all(|s| s.im == 0.0);
        let mut field = SpectralField::from_raw(dim, box_radius, data, real);
        if real {
            field.symmetrize();
        }
        Ok(field)
    }

    /// Replace each pair (û_k, û_{−k}) by its Hermitian part.
    fn symmetrize(&mut self) {
        for i in 0..self.coeffs.len() / 2 + 1 {
            let j = self.mirror(i);
            let a = 0.5 * (self.coeffs[i] + self.coeffs[j].conj());
            self.coeffs[i] = a;
            self.coeffs[j] = a.conj();
        }
    }

    /// Σ_k û_k e^{ik·x} at each point.
    pub fn evaluate(&self, points: &[Vec<f64>]) -> Result<Vec<Complex64>> {
        let side = self.side();
        let radius = self.box_radius as i64;
        let n = self.dim as usize;
        let mut out = Vec::with_capacity(points.len());
        let mut phases = vec![Complex64::new(0.0, 0.0); n * side];
        for x in points {
            if x.len() != n {
                return Err(Error::Shape(format!(
                    "point has {} coordinates, field dimension is {n}",
                    x.len()
                )));
            }
            for (a, &xa) in x.iter().enumerate() {
                for k in -radius..=radius {
                    phases[a * side + (k + radius) as usize] = Complex64::from_polar(1.0, k as f64 * xa);
                }
            }
            out.push(self.contract(&phases, 0, 0));
        }
        Ok(out)
    }

    /// Nested sum over axes starting at `axis`, with dense offset `offset`.
    fn contract(&self, phases: &[Complex64], axis: usize, offset: usize) -> Complex64 {
        let side = self.side();
        let row = &phases[axis * side..(axis + 1) * side];
        if axis + 1 == self.dim as usize {
            let coeffs = &self.coeffs[offset..offset + side];
            return coeffs.iter().zip(row).map(|(c, p)| c * p).sum();
        }
        let stride = side.pow(self.dim - 1 - axis as u32);
        row.iter()
            .enumerate()
            .map(|(j, p)| p * self.contract(phases, axis + 1, offset + j * stride))
            .sum()
    }

    /// The uniform grid used by [`SpectralField::from_samples`], as points.
    pub fn grid_points(dim: u32, box_radius: u32) -> Result<Vec<Vec<f64>>> {
        let len = box_len(dim, box_radius)?;
        let side = 2 * box_radius as usize + 1;
        Ok((0..len)
            .map(|mut idx| {
                let mut x = vec![0.0; dim as usize];
                for slot in x.iter_mut().rev() {
                    *slot = 2.0 * PI * (idx % side) as f64 / side as f64;
                    idx /= side;
                }
                x
            })
            .collect())
    }

    /// Least-squares fit of log max_{shell} |û_k| = log C − q̂ log ‖k‖ over
    /// integer shells ⌊‖k‖⌋ ∈ [r_min, r_max].
    pub fn decay_exponent_fit(&self, r_min: f64, r_max: f64) -> Result<DecayFit> {
        if !(r_min >= 0.0) || !(r_max >= r_min) {
            return Err(Error::domain(format!("invalid shell range [{r_min}, {r_max}]")));
        }
        // shell → (max |û|, ‖k‖ of the maximizer)
        let mut shells: std::collections::BTreeMap<u64, (f64, f64)> = Default::default();
        for (i, c) in self.coeffs.iter().enumerate() {
            let a = c.norm();
            let s = self.norm_sq_at(i);
            if a == 0.0 || s == 0 {
                continue;
            }
            let r = (s as f64).sqrt();
            let shell = r.floor();
            if shell < r_min || shell > r_max {
                continue;
            }
            let e = shells.entry(shell as u64).or_insert((0.0, r));
            if a > e.0 {
                *e = (a, r);
            }
        }
        if shells.len() < 3 {
            return Err(Error::InsufficientData(format!(
                "decay fit needs at least 3 nonempty shells in [{r_min}, {r_max}], found {}",
                shells.len()
            )));
        }
        let pts: Vec<(f64, f64)> = shells.values().map(|&(a, r)| (-r.ln(), a.ln())).collect();
        let len = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let slope = sxy / sxx;
        Ok(DecayFit {
            exponent: slope,
            constant: (my - slope * mx).exp(),
            shells: shells.len(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&FieldJson::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: FieldJson = serde_json::from_str(text)?;
        raw.into_field()
    }
}

/// Result of [`SpectralField::decay_exponent_fit`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayFit {
    pub exponent: f64,
    pub constant: f64,
    pub shells: usize,
}

/// Serialized form: nonzero coefficients only, sorted by k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldJson {
    pub dim: u32,
    pub box_radius: u32,
    pub real_flag: bool,
    pub entries: Vec<(Vec<i64>, f64, f64)>,
}

impl From<&SpectralField> for FieldJson {
    fn from(f: &SpectralField) -> Self {
        FieldJson {
            dim: f.dim,
            box_radius: f.box_radius,
            real_flag: f.real_flag,
            entries: f
                .iter()
                .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
                .map(|(k, c)| (k, c.re, c.im))
                .collect(),
        }
    }
}

impl FieldJson {
    pub fn into_field(self) -> Result<SpectralField> {
        let mut seen = std::collections::HashSet::new();
        for (k, _, _) in &self.entries {
            if !seen.insert(k.clone()) {
                return Err(Error::Shape(format!("duplicate entry for multi-index {k:?}")));
            }
        }
        SpectralField::from_entries(
            self.dim,
            self.box_radius,
            self.real_flag,
            self.entries
                .into_iter()
                .map(|(k, re, im)| (k, Complex64::new(re, im))),
        )
    }
}

/// Deterministic real field with |û_k| = ‖k‖^{−s} for k ≠ 0 and û_0 = 1.
pub fn synthetic_field(dim: u32, box_radius: u32, decay: f64, seed: u64) -> Result<SpectralField> {
    if box_radius < 1 {
        return Err(Error::domain("box radius K must be >= 1"));
    }
    let mut field = SpectralField::zeros(dim, box_radius)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = field.coeffs.len();
    let center = len / 2;
    field.coeffs[center] = Complex64::new(1.0, 0.0);
    // indices above the center are the mirror images of those below
    for i in center + 1..len {
        let r = (field.norm_sq_at(i) as f64).sqrt();
        let theta: f64 = rng.random_range(0.0..2.0 * PI);
        let c = Complex64::from_polar(r.powf(-decay), theta);
        field.coeffs[i] = c;
        let j = field.mirror(i);
        field.coeffs[j] = c.conj();
    }
    field.real_flag = true;
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn indexing_round_trip() {
        let f = SpectralField::zeros(3, 2).unwrap();
        for idx in [0, 17, 62, 124] {
            let k = f.multi_index(idx);
            assert_eq!(f.index_of(&k).unwrap(), idx);
            assert_eq!(f.norm_sq_at(idx), k.iter().map(|c| (c * c) as u64).sum::<u64>());
            let minus: Vec<i64> = k.iter().map(|c| -c).collect();
            assert_eq!(f.index_of(&minus).unwrap(), f.mirror(idx));
        }
        assert!(f.index_of(&[3, 0, 0]).is_err());
        assert!(f.index_of(&[0, 0]).is_err());
    }

    #[test]
    fn sobolev_norm_examples() {
        let f = SpectralField::from_entries(2, 2, true, [(vec![0, 0], c(3.0, 0.0))]).unwrap();
        assert_eq!(f.sobolev_norm(5.0), 3.0);
        let f = SpectralField::from_entries(2, 2, false, [(vec![1, 0], c(1.0, 0.0))]).unwrap();
        assert_relative_eq!(f.sobolev_norm(1.0), 2f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn sobolev_norm_matches_brute_force() {
        let entries = [
            (vec![0, 1], c(0.3, -1.2)),
            (vec![-2, 2], c(2.5, 0.1)),
            (vec![1, -1], c(-0.7, 0.4)),
            (vec![2, 0], c(0.0, 3.3)),
            (vec![-1, -2], c(1.1, 1.1)),
        ];
        let f = SpectralField::from_entries(2, 2, false, entries.clone()).unwrap();
        let want: f64 = entries
            .iter()
            .map(|(k, v)| (1.0 + (k[0] * k[0] + k[1] * k[1]) as f64).powf(-2.0) * v.norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert_relative_eq!(f.sobolev_norm(-2.0), want, max_relative = 1e-14);
    }

    #[test]
    fn from_samples_examples() {
        let k = 3;
        let pts = SpectralField::grid_points(1, k).unwrap();
        let ones = vec![c(1.0, 0.0); pts.len()];
        let f = SpectralField::from_samples(1, k, &ones).unwrap();
        assert!((f.get(&[0]).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(f.iter().filter(|(k, _)| k[0] != 0).all(|(_, v)| v.norm() < 1e-15));

        let wave: Vec<_> = pts.iter().map(|x| Complex64::from_polar(1.0, x[0])).collect();
        let f = SpectralField::from_samples(1, k, &wave).unwrap();
        assert!((f.get(&[1]).unwrap() - c(1.0, 0.0)).norm() < 1e-14);
        assert!(!f.real_flag());

        let cos2: Vec<_> = pts.iter().map(|x| c((2.0 * x[0]).cos(), 0.0)).collect();
        let f = SpectralField::from_samples(1, k, &cos2).unwrap();
        assert!((f.get(&[2]).unwrap() - c(0.5, 0.0)).norm() < 1e-14);
        assert!((f.get(&[-2]).unwrap() - c(0.5, 0.0)).norm() < 1e-14);
        assert!(f.real_flag() && f.is_hermitian());

        assert!(matches!(
            SpectralField::from_samples(1, k, &ones[1..]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn evaluate_examples() {
        let f = SpectralField::from_entries(2, 1, true, [(vec![0, 0], c(2.0, 0.0))]).unwrap();
        assert_eq!(f.evaluate(&[vec![0.3, 4.0]]).unwrap()[0], c(2.0, 0.0));
        let f = SpectralField::from_entries(1, 2, true, [(vec![1], c(0.5, 0.0)), (vec![-1], c(0.5, 0.0))])
            .unwrap();
        assert!((f.evaluate(&[vec![0.0]]).unwrap()[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(f.evaluate(&[vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn round_trip_through_grid() {
        for (dim, k) in [(1, 7), (2, 3), (3, 2)] {
            let f = synthetic_field(dim, k, 1.0, 11).unwrap();
            let pts = SpectralField::grid_points(dim, k).unwrap();
            let vals = f.evaluate(&pts).unwrap();
            let g = SpectralField::from_samples(dim, k, &vals).unwrap();
            for (a, b) in f.coeffs().iter().zip(g.coeffs()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn parseval_on_grid() {
        let f = synthetic_field(2, 4, 0.5, 3).unwrap();
        let pts = SpectralField::grid_points(2, 4).unwrap();
        let vals = f.evaluate(&pts).unwrap();
        let mean = vals.iter().map(|v| v.norm_sqr()).sum::<f64>() / vals.len() as f64;
        assert_relative_eq!(f.sobolev_norm(0.0).powi(2), mean, max_relative = 1e-10);
    }

    #[test]
    fn real_samples_give_hermitian_coefficients() {
        let pts = SpectralField::grid_points(2, 3).unwrap();
        let vals: Vec<_> = pts
            .iter()
            .map(|x| c((x[0] - 1.0).exp() * (3.0 * x[1]).sin() + x[0] * x[1], 0.0))
            .collect();
        let f = SpectralField::from_samples(2, 3, &vals).unwrap();
        assert!(f.real_flag());
        assert!(f.hermitian_defect() <= 1e-12);
    }

    #[test]
    fn decay_fit_examples() {
        let f = SpectralField::from_entries(
            1,
            64,
            true,
            (1..=64i64).flat_map(|k| {
                let a = c((k as f64).powi(-2), 0.0);
                [(vec![k], a), (vec![-k], a)]
            }),
        )
        .unwrap();
        let fit = f.decay_exponent_fit(4.0, 64.0).unwrap();
        assert!((fit.exponent - 2.0).abs() < 1e-6);
        assert_relative_eq!(fit.constant, 1.0, max_relative = 1e-9);

        let f = SpectralField::from_entries(
            1,
            64,
            false,
            (1..=64i64).map(|k| {
                let r = k as f64;
                (vec![k], c(r.powi(-3) * (1.0 + 0.1 * r.sin()), 0.0))
            }),
        )
        .unwrap();
        let fit = f.decay_exponent_fit(4.0, 64.0).unwrap();
        assert!((fit.exponent - 3.0).abs() < 0.1);

        let f = SpectralField::from_entries(1, 8, true, [(vec![0], c(1.0, 0.0))]).unwrap();
        assert!(matches!(
            f.decay_exponent_fit(1.0, 8.0),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn synthetic_field_examples() {
        let f = synthetic_field(1, 4, 0.0, 7).unwrap();
        for (k, v) in f.iter() {
            assert_relative_eq!(v.norm(), 1.0, max_relative = 1e-15);
            if k[0] == 0 {
                assert_eq!(v, c(1.0, 0.0));
            }
        }
        assert_eq!(synthetic_field(2, 5, 1.3, 99).unwrap(), synthetic_field(2, 5, 1.3, 99).unwrap());
        assert_ne!(synthetic_field(2, 5, 1.3, 99).unwrap(), synthetic_field(2, 5, 1.3, 98).unwrap());
        let f = synthetic_field(1, 64, 2.0, 1).unwrap();
        assert!(f.is_hermitian() && f.real_flag());
        let fit = f.decay_exponent_fit(1.0, 64.0).unwrap();
        assert!((fit.exponent - 2.0).abs() < 1e-6);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let f = synthetic_field(2, 3, 1.7, 5).unwrap();
        let text = f.to_json().unwrap();
        assert_eq!(SpectralField::from_json(&text).unwrap(), f);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["entries"][0][0], serde_json::json!([-3, -3]));
    }

    #[test]
    fn json_rejects_bad_input() {
        let out_of_box = r#"{"dim":1,"box_radius":1,"real_flag":false,"entries":[[[2],1.0,0.0]]}"#;
        assert!(matches!(SpectralField::from_json(out_of_box), Err(Error::Shape(_))));
        let not_hermitian = r#"{"dim":1,"box_radius":1,"real_flag":true,"entries":[[[1],1.0,0.0]]}"#;
        assert!(matches!(SpectralField::from_json(not_hermitian), Err(Error::Shape(_))));
        let duplicate = r#"{"dim":1,"box_radius":1,"real_flag":false,"entries":[[[1],1.0,0.0],[[1],2.0,0.0]]}"#;
        assert!(SpectralField::from_json(duplicate).is_err());
        assert!(matches!(SpectralField::from_json("{"), Err(Error::Json(_))));
    }

    proptest! {
        #[test]
        fn norm_is_monotone_in_q(seed in 0u64..1000, q in -3.0f64..3.0, dq in 0.0f64..2.0) {
            let f = synthetic_field(2, 4, 1.0, seed).unwrap();
            prop_assert!(f.sobolev_norm(q) <= f.sobolev_norm(q + dq) * (1.0 + 1e-15));
        }

        #[test]
        fn synthetic_fields_are_hermitian(dim in 1u32..=3, k in 1u32..=4, s in 0.0f64..4.0, seed in any::<u64>()) {
            let f = synthetic_field(dim, k, s, seed).unwrap();
            prop_assert_eq!(f.hermitian_defect(), 0.0);
        }

        #[test]
        fn json_round_trip(seed in any::<u64>(), s in -1.0f64..3.0) {
            let f = synthetic_field(1, 6, s, seed).unwrap();
            prop_assert_eq!(SpectralField::from_json(&f.to_json().unwrap()).unwrap(), f);
        }
    }
}
