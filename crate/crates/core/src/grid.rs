//! Periodic sampling grid, spectral transforms and quadrature.
//!
//! The torus `[-L/2, L/2)^n` stands in for `R^n`. Samples are stored in FFT
//! order along each axis: index `i < N/2` sits at `x = i h`, index `i >= N/2`
//! at `x = (i - N) h`. The same convention applies to the frequency lattice
//! `ξ = k / L`, so the spectrum of a field is
//!
//! ```text
//! f̂(ξ_k) = h^n Σ_m f(x_m) e^{-2πi x_m·ξ_k}
//! ```
//!
//! which is the Riemann sum of `∫ f(x) e^{-2πi x·ξ} dx`. With that
//! normalization Fourier multipliers transcribe without extra constants.

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::numerics::{compensated_sum, pow_nonneg};

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Periodic lattice with `points` samples per axis on a period `period`.
#[derive(Clone)]
pub struct GridSpec {
    dim: usize,
    period: f64,
    points: usize,
    plans: Arc<Plans>,
}

impl PartialEq for GridSpec {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.period == other.period && self.points == other.points
    }
}

impl fmt::Debug for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridSpec")
            .field("dim", &self.dim)
            .field("period", &self.period)
            .field("points", &self.points)
            .finish()
    }
}

impl GridSpec {
    pub fn new(dim: usize, period: f64, points: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::UnsupportedDimension(dim));
        }
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::NonPositivePeriod(period));
        }
        if points < 2 || !points.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(points));
        }
        let mut planner = FftPlanner::new();
        let plans = Plans {
            forward: planner.plan_fft_forward(points),
            inverse: planner.plan_fft_inverse(points),
        };
        Ok(Self {
            dim,
            period,
            points,
            plans: Arc::new(plans),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Samples per axis.
    pub fn points(&self) -> usize {
        self.points
    }

    /// Total number of samples, `N^n`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.points as f64
    }

    /// Quadrature weight `h^n`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// `L^n`.
    pub fn volume(&self) -> f64 {
        self.period.powi(self.dim as i32)
    }

    /// `N / (2L)`, in cycles per unit length.
    pub fn nyquist(&self) -> f64 {
        self.points as f64 / (2.0 * self.period)
    }

    /// Largest `Jmax` whose top annulus edge `2^{Jmax+1}` is resolved.
    pub fn max_band(&self) -> Option<usize> {
        let ny = self.nyquist();
        if ny < 2.0 {
            return None;
        }
        Some(ny.log2().floor() as usize - 1)
    }

    /// Signed index along one axis, in `[-N/2, N/2)`.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> i64 {
        if i < self.points / 2 {
            i as i64
        } else {
            i as i64 - self.points as i64
        }
    }

    #[inline]
    pub fn axis_indices(&self, flat: usize) -> [usize; 2] {
        if self.dim == 1 {
            [flat, 0]
        } else {
            [flat / self.points, flat % self.points]
        }
    }

    #[inline]
    pub fn flat_index(&self, idx: [usize; 2]) -> usize {
        if self.dim == 1 {
            idx[0]
        } else {
            idx[0] * self.points + idx[1]
        }
    }

    /// Physical coordinate of a sample; unused components are zero.
    #[inline]
    pub fn position(&self, flat: usize) -> [f64; 2] {
        let h = self.spacing();
        let [a, b] = self.axis_indices(flat);
        if self.dim == 1 {
            [self.wavenumber(a) as f64 * h, 0.0]
        } else {
            [self.wavenumber(a) as f64 * h, self.wavenumber(b) as f64 * h]
        }
    }

    /// Lattice frequency of a spectral coefficient.
    #[inline]
    pub fn frequency(&self, flat: usize) -> [f64; 2] {
        let [a, b] = self.axis_indices(flat);
        if self.dim == 1 {
            [self.wavenumber(a) as f64 / self.period, 0.0]
        } else {
            [
                self.wavenumber(a) as f64 / self.period,
                self.wavenumber(b) as f64 / self.period,
            ]
        }
    }

    #[inline]
    pub fn frequency_norm(&self, flat: usize) -> f64 {
        let [a, b] = self.frequency(flat);
        a.hypot(b)
    }

    /// Copies a user vector into the internal two-slot representation.
    pub fn point(&self, v: &[f64]) -> Result<[f64; 2]> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        let mut out = [0.0; 2];
        out[..self.dim].copy_from_slice(v);
        Ok(out)
    }

    fn transform(&self, buf: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        debug_assert_eq!(buf.len(), self.len());
        fft.process(buf);
        if self.dim == 2 {
            let n = self.points;
            let mut t = vec![Complex64::new(0.0, 0.0); buf.len()];
            for r in 0..n {
                for c in 0..n {
                    t[c * n + r] = buf[r * n + c];
                }
            }
            fft.process(&mut t);
            for r in 0..n {
                for c in 0..n {
                    buf[r * n + c] = t[c * n + r];
                }
            }
        }
    }

    /// Samples to spectrum, including the `h^n` weight.
    pub(crate) fn forward(&self, buf: &mut [Complex64]) {
        self.transform(buf, &self.plans.forward);
        let w = self.cell_volume();
        buf.iter_mut().for_each(|z| *z *= w);
    }

    /// Spectrum to samples, including the `1/L^n` weight.
    pub(crate) fn inverse(&self, buf: &mut [Complex64]) {
        self.transform(buf, &self.plans.inverse);
        let w = 1.0 / self.volume();
        buf.iter_mut().for_each(|z| *z *= w);
    }
}

/// Validating constructor matching the grid contract.
pub fn make_grid(dim: usize, period: f64, points: usize) -> Result<GridSpec> {
    GridSpec::new(dim, period, points)
}

/// Complex samples on a grid together with their spectrum.
///
/// Either representation may be supplied; the other is computed on first
/// access and cached.
#[derive(Clone)]
pub struct SampledField {
    grid: GridSpec,
    values: OnceLock<Vec<Complex64>>,
    spectrum: OnceLock<Vec<Complex64>>,
}

impl fmt::Debug for SampledField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampledField")
            .field("grid", &self.grid)
            .field("has_values", &self.values.get().is_some())
            .field("has_spectrum", &self.spectrum.get().is_some())
            .finish()
    }
}

impl SampledField {
    pub fn from_values(grid: &GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self {
            grid: grid.clone(),
            values: OnceLock::from(values),
            spectrum: OnceLock::new(),
        })
    }

    pub fn from_spectrum(grid: &GridSpec, spectrum: Vec<Complex64>) -> Result<Self> {
        if spectrum.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: spectrum.len(),
            });
        }
        Ok(Self {
            grid: grid.clone(),
            values: OnceLock::new(),
            spectrum: OnceLock::from(spectrum),
        })
    }

    /// Samples `f` at every lattice point.
    pub fn from_fn<F: Fn(&[f64]) -> Complex64>(grid: &GridSpec, f: F) -> Self {
        let dim = grid.dim();
        let values: Vec<Complex64> = (0..grid.len())
            .map(|i| f(&grid.position(i)[..dim]))
            .collect();
        Self {
            grid: grid.clone(),
            values: OnceLock::from(values),
            spectrum: OnceLock::new(),
        }
    }

    pub fn zeros(grid: &GridSpec) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); grid.len()];
        Self {
            grid: grid.clone(),
            values: OnceLock::from(z.clone()),
            spectrum: OnceLock::from(z),
        }
    }

    pub fn constant(grid: &GridSpec, c: Complex64) -> Self {
        Self::from_fn(grid, |_| c)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        self.values.get_or_init(|| {
            let mut buf = self
                .spectrum
                .get()
                .expect("field has a representation")
                .clone();
            self.grid.inverse(&mut buf);
            buf
        })
    }

    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum.get_or_init(|| {
            let mut buf = self
                .values
                .get()
                .expect("field has a representation")
                .clone();
            self.grid.forward(&mut buf);
            buf
        })
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values();
        self.values.into_inner().expect("initialized above")
    }

    pub fn into_spectrum(self) -> Vec<Complex64> {
        self.spectrum();
        self.spectrum.into_inner().expect("initialized above")
    }

    fn map_known<F: Fn(&[Complex64]) -> Vec<Complex64>>(&self, op: F) -> Self {
        let values = OnceLock::new();
        let spectrum = OnceLock::new();
        if let Some(v) = self.values.get() {
            let _ = values.set(op(v));
        }
        if let Some(s) = self.spectrum.get() {
            let _ = spectrum.set(op(s));
        }
        Self {
            grid: self.grid.clone(),
            values,
            spectrum,
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        self.map_known(|v| v.iter().map(|z| z * c).collect())
    }

    fn zip_with<F: Fn(Complex64, Complex64) -> Complex64>(
        &self,
        other: &Self,
        op: F,
    ) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        // Combine in whichever representation both already have, spectrum first.
        let both_spec = self.spectrum.get().is_some() && other.spectrum.get().is_some();
        let both_vals = self.values.get().is_some() && other.values.get().is_some();
        if both_spec || !both_vals {
            let s: Vec<_> = self
                .spectrum()
                .iter()
                .zip(other.spectrum())
                .map(|(&a, &b)| op(a, b))
                .collect();
            Self::from_spectrum(&self.grid, s)
        } else {
            let v: Vec<_> = self
                .values()
                .iter()
                .zip(other.values())
                .map(|(&a, &b)| op(a, b))
                .collect();
            Self::from_values(&self.grid, v)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn max_abs(&self) -> f64 {
        self.values().iter().fold(0.0f64, |m, z| m.max(z.norm()))
    }

    /// `(Σ |f̂|² / L^n)^{1/2}`, the spectral side of Parseval.
    pub fn spectral_l2(&self) -> f64 {
        let s = compensated_sum(self.spectrum().iter().map(|z| z.norm_sqr()));
        (s / self.grid.volume()).sqrt()
    }
}

#[inline]
pub(crate) fn abs_pow(z: Complex64, p: f64) -> f64 {
    if p == 2.0 {
        z.norm_sqr()
    } else if p == 1.0 {
        z.norm()
    } else {
        pow_nonneg(z.norm_sqr(), 0.5 * p)
    }
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p > 0.0 && !p.is_nan() {
        Ok(())
    } else {
        Err(Error::InvalidExponent(p))
    }
}

/// Riemann sum `(h^n Σ |f|^p)^{1/p}` over one period; `max |f|` for
/// `p = ∞`. Quasi-norms (`p < 1`) use the same formula.
pub fn lp_quadrature(f: &SampledField, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(lp_of_values(f.values(), p, f.grid().cell_volume()))
}

pub(crate) fn lp_of_values(values: &[Complex64], p: f64, cell: f64) -> f64 {
    if p.is_infinite() {
        values.iter().fold(0.0f64, |m, z| m.max(z.norm()))
    } else {
        let s = compensated_sum(values.iter().map(|&z| abs_pow(z, p)));
        pow_nonneg(cell * s, 1.0 / p)
    }
}

/// Multiplies the spectrum pointwise by `symbol(ξ)`.
pub fn spectral_multiplier<F: Fn(&[f64]) -> Complex64>(
    f: &SampledField,
    symbol: F,
) -> SampledField {
    let grid = f.grid();
    let dim = grid.dim();
    let out = f
        .spectrum()
        .iter()
        .enumerate()
        .map(|(i, &z)| z * symbol(&grid.frequency(i)[..dim]))
        .collect();
    SampledField::from_spectrum(grid, out).expect("length preserved")
}

/// `e^{-2πi y·ξ}` with the phase reduced mod 1 before the trig call.
#[inline]
pub(crate) fn shift_phase(y: [f64; 2], xi: [f64; 2]) -> Complex64 {
    let t = y[0] * xi[0] + y[1] * xi[1];
    let t = t - t.floor();
    Complex64::from_polar(1.0, -2.0 * PI * t)
}

/// `τ_y f(x) = f(x - y)` realized as the spectral phase `e^{-2πi y·ξ}`.
/// Exact on the lattice for band-limited `f`; any real `y` is allowed.
pub fn translate(f: &SampledField, y: &[f64]) -> Result<SampledField> {
    let grid = f.grid();
    let y = grid.point(y)?;
    if y == [0.0, 0.0] {
        return Ok(f.clone());
    }
    let out = f
        .spectrum()
        .iter()
        .enumerate()
        .map(|(i, &z)| z * shift_phase(y, grid.frequency(i)))
        .collect();
    SampledField::from_spectrum(grid, out)
}

/// Lattice index shift of the frequency `2^j y0`, if it lies on the lattice.
pub(crate) fn lattice_shift(grid: &GridSpec, j: u32, y0: &[f64]) -> Result<[i64; 2]> {
    let dir = grid.point(y0)?;
    let norm = dir[0].hypot(dir[1]);
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnitVector(y0.to_vec()));
    }
    let scale = 2f64.powi(j as i32) * grid.period();
    let half = (grid.points() / 2) as i64;
    let mut shift = [0i64; 2];
    for d in 0..grid.dim() {
        let k = dir[d] * scale;
        let r = k.round();
        if (k - r).abs() > 1e-9 * r.abs().max(1.0) || r.abs() as i64 >= half {
            let freq: Vec<f64> = dir[..grid.dim()]
                .iter()
                .map(|c| c * 2f64.powi(j as i32))
                .collect();
            return Err(Error::OffLattice(freq));
        }
        shift[d] = r as i64;
    }
    Ok(shift)
}

/// Multiplies by `e_j(x) = exp(2πi 2^j y0·x)`. The spectrum is shifted by
/// `2^j y0` (cyclically on the lattice), which is the same as the
/// pointwise product on the torus.
pub fn modulate(f: &SampledField, j: u32, y0: &[f64]) -> Result<SampledField> {
    let grid = f.grid();
    let shift = lattice_shift(grid, j, y0)?;
    let n = grid.points() as i64;
    let src = f.spectrum();
    let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
    for (i, slot) in out.iter_mut().enumerate() {
        let [a, b] = grid.axis_indices(i);
        let a = (a as i64 - shift[0]).rem_euclid(n) as usize;
        let b = if grid.dim() == 2 {
            (b as i64 - shift[1]).rem_euclid(n) as usize
        } else {
            0
        };
        *slot = src[grid.flat_index([a, b])];
    }
    SampledField::from_spectrum(grid, out)
}

/// Fraction of the L¹ mass of `f` lying within `width` of the period
/// boundary (in any coordinate). Zero for the zero field.
pub fn boundary_mass_fraction(f: &SampledField, width: f64) -> f64 {
    let grid = f.grid();
    let edge = grid.period() / 2.0 - width;
    let dim = grid.dim();
    let mut total = Vec::with_capacity(grid.len());
    let mut near = Vec::new();
    for (i, z) in f.values().iter().enumerate() {
        let a = z.norm();
        total.push(a);
        let x = grid.position(i);
        if x[..dim].iter().any(|c| c.abs() >= edge) {
            near.push(a);
        }
    }
    let total = compensated_sum(total);
    if total == 0.0 {
        0.0
    } else {
        compensated_sum(near) / total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn random_field(grid: &GridSpec, rng: &mut ChaCha8Rng) -> SampledField {
        let v = (0..grid.len())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        SampledField::from_values(grid, v).unwrap()
    }

    #[test]
    fn make_grid_reports_spacing_and_nyquist() {
        let g = make_grid(1, 64.0, 1 << 20).unwrap();
        assert_eq!(g.spacing(), 2f64.powi(-14));
        assert_eq!(g.nyquist(), 8192.0);
        assert_eq!(g.max_band(), Some(12));

        let g = make_grid(1, 32.0, 1 << 17).unwrap();
        assert_eq!(g.nyquist(), 2048.0);
        assert_eq!(g.max_band(), Some(10));
    }

    #[test]
    fn make_grid_rejects_bad_input() {
        assert!(matches!(
            make_grid(1, 64.0, 1000),
            Err(Error::NotPowerOfTwo(1000))
        ));
        assert!(matches!(
            make_grid(1, 0.0, 64),
            Err(Error::NonPositivePeriod(_))
        ));
        assert!(matches!(
            make_grid(1, -2.0, 64),
            Err(Error::NonPositivePeriod(_))
        ));
        assert!(matches!(
            make_grid(3, 1.0, 64),
            Err(Error::UnsupportedDimension(3))
        ));
    }

    #[test]
    fn constant_field_quadrature() {
        let g = make_grid(1, 64.0, 1 << 10).unwrap();
        let one = SampledField::constant(&g, c(1.0));
        assert!((lp_quadrature(&one, 2.0).unwrap() - 8.0).abs() < 1e-12);
        assert!((lp_quadrature(&one, 1.0).unwrap() - 64.0).abs() < 1e-12);
        assert_eq!(lp_quadrature(&one, f64::INFINITY).unwrap(), 1.0);
        assert!(matches!(
            lp_quadrature(&one, 0.0),
            Err(Error::InvalidExponent(_))
        ));
        assert!(matches!(
            lp_quadrature(&one, -1.0),
            Err(Error::InvalidExponent(_))
        ));
    }

    #[test]
    fn constant_field_spectrum_is_a_single_line() {
        let g = make_grid(1, 8.0, 64).unwrap();
        let one = SampledField::constant(&g, c(1.0));
        let s = one.spectrum();
        assert!((s[0] - c(8.0)).norm() < 1e-12);
        assert!(s[1..].iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn round_trip_reproduces_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for g in [
            make_grid(1, 16.0, 1 << 12).unwrap(),
            make_grid(2, 4.0, 64).unwrap(),
        ] {
            let f = random_field(&g, &mut rng);
            let back = SampledField::from_spectrum(&g, f.spectrum().to_vec()).unwrap();
            let err = back
                .values()
                .iter()
                .zip(f.values())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            assert!(err <= 1e-12 * f.max_abs(), "err {err}");
        }
    }

    #[test]
    fn parseval_on_random_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g1 = make_grid(1, 16.0, 1 << 10).unwrap();
        let g2 = make_grid(2, 8.0, 32).unwrap();
        for i in 0..100 {
            let g = if i % 2 == 0 { &g1 } else { &g2 };
            let f = random_field(g, &mut rng);
            let phys = lp_quadrature(&f, 2.0).unwrap();
            let spec = f.spectral_l2();
            assert!((phys - spec).abs() <= 1e-12 * phys, "{phys} vs {spec}");
        }
    }

    #[test]
    fn multiplier_identity_and_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = make_grid(1, 16.0, 256).unwrap();
        let f = random_field(&g, &mut rng);
        let same = spectral_multiplier(&f, |_| c(1.0));
        let zero = spectral_multiplier(&f, |_| c(0.0));
        for (a, b) in same.values().iter().zip(f.values()) {
            assert!((a - b).norm() < 1e-13);
        }
        assert_eq!(zero.max_abs(), 0.0);
    }

    #[test]
    fn translation_group_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = make_grid(1, 16.0, 1 << 10).unwrap();
        let f = random_field(&g, &mut rng);
        assert!(translate(&f, &[0.0]).unwrap().values() == f.values());
        for _ in 0..10 {
            let y: f64 = rng.gen_range(-5.0..5.0);
            let back = translate(&translate(&f, &[y]).unwrap(), &[-y]).unwrap();
            for (a, b) in back.values().iter().zip(f.values()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
        assert!(matches!(
            translate(&f, &[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn translation_is_exact_for_band_limited_fields() {
        let g = make_grid(1, 8.0, 256).unwrap();
        let tone = |x: f64| {
            Complex64::from_polar(1.0, 2.0 * PI * 3.0 * x)
                + Complex64::from_polar(0.5, -2.0 * PI * 1.25 * x)
                + c((2.0 * PI * 0.375 * x).cos())
        };
        let f = SampledField::from_fn(&g, |x| tone(x[0]));
        let y = 0.123_456_789;
        let shifted = translate(&f, &[y]).unwrap();
        for (i, z) in shifted.values().iter().enumerate() {
            let x = g.position(i)[0];
            assert!((z - tone(x - y)).norm() < 1e-12);
        }
    }

    #[test]
    fn lattice_translation_preserves_every_lp_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = make_grid(1, 16.0, 1 << 10).unwrap();
        let h = g.spacing();
        for _ in 0..10 {
            let f = random_field(&g, &mut rng);
            let y = rng.gen_range(-400i64..400) as f64 * h;
            let t = translate(&f, &[y]).unwrap();
            for p in [0.5, 1.0, 2.0, f64::INFINITY] {
                let a = lp_quadrature(&f, p).unwrap();
                let b = lp_quadrature(&t, p).unwrap();
                assert!((a - b).abs() <= 1e-12 * a, "p={p}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn fractional_translation_preserves_l2() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let g = make_grid(1, 16.0, 1 << 10).unwrap();
        for _ in 0..10 {
            let f = random_field(&g, &mut rng);
            let t = translate(&f, &[rng.gen_range(-7.0..7.0)]).unwrap();
            let a = lp_quadrature(&f, 2.0).unwrap();
            let b = lp_quadrature(&t, 2.0).unwrap();
            assert!((a - b).abs() <= 1e-12 * a);
        }
    }

    #[test]
    fn modulate_constant_gives_a_single_spectral_line() {
        let g = make_grid(1, 8.0, 256).unwrap();
        let one = SampledField::constant(&g, c(1.0));
        let tone = modulate(&one, 2, &[1.0]).unwrap();
        // 2^2 = 4 cycles per unit sits at lattice index 4 * L = 32.
        let s = tone.spectrum();
        assert!((s[32] - c(8.0)).norm() < 1e-12);
        assert_eq!(s.iter().filter(|z| z.norm() > 1e-12).count(), 1);
        for (i, z) in tone.values().iter().enumerate() {
            let x = g.position(i)[0];
            assert!((z - Complex64::from_polar(1.0, 2.0 * PI * 4.0 * x)).norm() < 1e-12);
        }
    }

    #[test]
    fn modulate_preserves_modulus_and_composes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = make_grid(1, 8.0, 256).unwrap();
        let f = random_field(&g, &mut rng);
        let m = modulate(&f, 1, &[1.0]).unwrap();
        for (a, b) in m.values().iter().zip(f.values()) {
            assert!((a.norm() - b.norm()).abs() < 1e-12);
        }
        let twice = modulate(&m, 1, &[1.0]).unwrap();
        let once = modulate(&f, 2, &[1.0]).unwrap();
        for (a, b) in twice.spectrum().iter().zip(once.spectrum()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn modulate_rejects_off_lattice_and_non_unit() {
        let g = make_grid(1, 8.0, 64).unwrap();
        let one = SampledField::constant(&g, c(1.0));
        // 2^2 * 8 = 32 = N/2 is the Nyquist index, outside [-N/2, N/2).
        assert!(matches!(
            modulate(&one, 2, &[1.0]),
            Err(Error::OffLattice(_))
        ));
        assert!(matches!(
            modulate(&one, 0, &[0.5]),
            Err(Error::NotUnitVector(_))
        ));
        let odd = make_grid(1, 2.5, 64).unwrap();
        let one = SampledField::constant(&odd, c(1.0));
        assert!(matches!(
            modulate(&one, 0, &[1.0]),
            Err(Error::OffLattice(_))
        ));
    }

    #[test]
    fn two_dimensional_modulation_and_translation() {
        let g = make_grid(2, 4.0, 32).unwrap();
        let f = SampledField::from_fn(&g, |x| c((-(x[0] * x[0] + x[1] * x[1])).exp()));
        let m = modulate(&f, 1, &[0.0, 1.0]).unwrap();
        for (i, z) in m.values().iter().enumerate() {
            let x = g.position(i);
            let want = f.values()[i] * Complex64::from_polar(1.0, 2.0 * PI * 2.0 * x[1]);
            assert!((z - want).norm() < 1e-12);
        }
        let h = g.spacing();
        let t = translate(&f, &[3.0 * h, -2.0 * h]).unwrap();
        let src = g.flat_index([0, 0]);
        let dst = g.flat_index([3, 30]);
        assert!((t.values()[dst] - f.values()[src]).norm() < 1e-12);
    }

    #[test]
    fn boundary_mass_of_a_centered_bump_is_negligible() {
        let g = make_grid(1, 32.0, 1 << 12).unwrap();
        let bump = SampledField::from_fn(&g, |x| c((-x[0] * x[0]).exp()));
        assert!(boundary_mass_fraction(&bump, 2.0) < 1e-30);
        let one = SampledField::constant(&g, c(1.0));
        assert!((boundary_mass_fraction(&one, 2.0) - 0.125).abs() < 1e-3);
    }
}
