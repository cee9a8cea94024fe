//! Smooth dyadic Littlewood-Paley filter bank on a grid's frequency lattice.
//!
//! `φ̂₀` is a radial cutoff equal to 1 on `|ξ| <= 2^{ε₀}` and 0 on
//! `|ξ| >= 2^{1-ε₀}`. For `j >= 1`
//!
//! ```text
//! φ̂_j(ξ) = φ̂₀(2^{-j} ξ) - φ̂₀(2^{1-j} ξ)
//! ```
//!
//! which vanishes outside `2^{j-1} < |ξ| < 2^{j+1}` and telescopes to
//! `Σ_{j<=J} φ̂_j = φ̂₀(2^{-J} ·)`.

use std::io::Write;

use num_complex::Complex64;

use crate::cutoff::RadialCutoff;
use crate::error::{Error, Result};
use crate::grid::{GridSpec, SampledField};
use crate::numerics::{compensated_sum, format_g};
use crate::tolerances::RECONSTRUCT_OUTSIDE_MASS;

pub const DEFAULT_EPS0: f64 = 0.1;

/// `2^{-j}` as an exact power of two.
#[inline]
fn dyadic(j: i32) -> f64 {
    2f64.powi(-j)
}

/// The filter bank `φ̂_0, ..., φ̂_Jmax` tabulated on a grid.
///
/// Each band keeps only its nonzero lattice entries, which keeps the table
/// small even on a `2^20`-point grid.
#[derive(Clone, Debug)]
pub struct LpFamily {
    grid: GridSpec,
    jmax: usize,
    eps0: f64,
    profile: RadialCutoff,
    bands: Vec<Vec<(u32, f64)>>,
}

impl LpFamily {
    pub fn build(grid: &GridSpec, jmax: usize, eps0: f64) -> Result<Self> {
        if !(eps0 > 0.0 && eps0 < 0.5) {
            return Err(Error::InvalidMargin(eps0));
        }
        let top = 2f64.powi(jmax as i32 + 1);
        if top > grid.nyquist() {
            return Err(Error::BandAboveNyquist {
                jmax,
                top,
                nyquist: grid.nyquist(),
            });
        }
        let profile = RadialCutoff::new(2f64.powf(eps0), 2f64.powf(1.0 - eps0));
        let mut fam = Self {
            grid: grid.clone(),
            jmax,
            eps0,
            profile,
            bands: Vec::new(),
        };

        let outer = profile.outer();
        let mut bands = vec![Vec::new(); jmax + 1];
        for i in 0..grid.len() {
            let r = grid.frequency_norm(i);
            if r >= outer * 2f64.powi(jmax as i32) {
                continue;
            }
            for (j, band) in bands.iter_mut().enumerate() {
                let v = fam.radial(j, r);
                if v != 0.0 {
                    band.push((i as u32, v));
                }
            }
        }
        fam.bands = bands;
        Ok(fam)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn jmax(&self) -> usize {
        self.jmax
    }

    pub fn eps0(&self) -> f64 {
        self.eps0
    }

    /// The radial low-pass profile `φ̂₀`.
    pub fn profile(&self) -> &RadialCutoff {
        &self.profile
    }

    /// `φ̂_j` as a function of `r = |ξ|`, defined for every `j >= 0`.
    pub fn radial(&self, j: usize, r: f64) -> f64 {
        let low = self.profile.value(r * dyadic(j as i32));
        if j == 0 {
            low
        } else {
            low - self.profile.value(r * dyadic(j as i32 - 1))
        }
    }

    /// `d/dr φ̂_j(r)`.
    pub fn radial_derivative(&self, j: usize, r: f64) -> f64 {
        let s = dyadic(j as i32);
        let low = s * self.profile.derivative(r * s);
        if j == 0 {
            low
        } else {
            let s1 = 2.0 * s;
            low - s1 * self.profile.derivative(r * s1)
        }
    }

    /// `φ̂_j(ξ)` at an arbitrary frequency vector.
    pub fn symbol(&self, j: usize, xi: &[f64]) -> f64 {
        self.radial(j, norm(xi))
    }

    /// `∇φ̂_j(ξ)`; unused components are zero.
    pub fn symbol_gradient(&self, j: usize, xi: &[f64]) -> [f64; 2] {
        let r = norm(xi);
        let mut g = [0.0; 2];
        if r == 0.0 {
            return g;
        }
        let d = self.radial_derivative(j, r);
        for (gi, x) in g.iter_mut().zip(xi) {
            *gi = d * x / r;
        }
        g
    }

    fn check_band(&self, j: usize) -> Result<()> {
        if j > self.jmax {
            Err(Error::BandOutOfRange { j, jmax: self.jmax })
        } else {
            Ok(())
        }
    }

    /// Nonzero lattice entries `(flat index, φ̂_j)` of band `j`.
    pub fn entries(&self, j: usize) -> Result<&[(u32, f64)]> {
        self.check_band(j)?;
        Ok(&self.bands[j])
    }

    /// Band `j` on the full lattice.
    pub fn dense_band(&self, j: usize) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.grid.len()];
        for &(i, v) in self.entries(j)? {
            out[i as usize] = v;
        }
        Ok(out)
    }

    /// Spectrum of `φ_j * f`, i.e. `φ̂_j f̂`.
    pub fn band_spectrum(&self, f: &SampledField, j: usize) -> Result<Vec<Complex64>> {
        if f.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let src = f.spectrum();
        let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
        for &(i, v) in self.entries(j)? {
            out[i as usize] = src[i as usize] * v;
        }
        Ok(out)
    }

    /// Writes `j, xi, phi_hat` for `ξ >= 0` along the first axis, keeping
    /// every `stride`-th lattice frequency.
    pub fn write_band_csv<W: Write>(&self, mut out: W, stride: usize) -> Result<()> {
        let stride = stride.max(1);
        writeln!(out, "j,xi,phi_hat")?;
        let half = self.grid.points() / 2;
        let top = 2f64.powi(self.jmax as i32 + 1);
        for j in 0..=self.jmax {
            for k in (0..half).step_by(stride) {
                let xi = k as f64 / self.grid.period();
                if xi > top {
                    break;
                }
                let v = self.radial(j, xi);
                writeln!(out, "{j},{},{}", format_g(xi, 12), format_g(v, 12))?;
            }
        }
        Ok(())
    }
}

#[inline]
fn norm(xi: &[f64]) -> f64 {
    match xi {
        [x] => x.abs(),
        [x, y] => x.hypot(*y),
        _ => xi.iter().map(|v| v * v).sum::<f64>().sqrt(),
    }
}

pub fn build_family(grid: &GridSpec, jmax: usize, eps0: f64) -> Result<LpFamily> {
    LpFamily::build(grid, jmax, eps0)
}

/// `φ_j * f`.
pub fn band(f: &SampledField, j: usize, fam: &LpFamily) -> Result<SampledField> {
    let spec = fam.band_spectrum(f, j)?;
    SampledField::from_spectrum(fam.grid(), spec)
}

/// Outcome of summing all bands back together.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub field: SampledField,
    /// `‖Σ_j φ_j * f - f‖₂ / ‖f‖₂`, zero for the zero field.
    pub defect: f64,
    /// Fraction of the spectral energy of `f` where `φ̂₀(2^{-Jmax}·) < 1`.
    pub outside_mass: f64,
    /// Whether `f` is (numerically) supported where the bank sums to one.
    pub precondition_ok: bool,
}

/// `Σ_{j=0}^{Jmax} φ_j * f`, with the partition-of-unity precondition
/// checked rather than assumed.
pub fn reconstruct(f: &SampledField, fam: &LpFamily) -> Result<Reconstruction> {
    if f.grid() != fam.grid() {
        return Err(Error::GridMismatch);
    }
    let src = f.spectrum();
    let mut sum = vec![Complex64::new(0.0, 0.0); src.len()];
    for j in 0..=fam.jmax() {
        for &(i, v) in fam.entries(j)? {
            sum[i as usize] += src[i as usize] * v;
        }
    }
    let total = compensated_sum(src.iter().map(|z| z.norm_sqr()));
    let diff = compensated_sum(sum.iter().zip(src).map(|(a, b)| (a - b).norm_sqr()));
    let scale = dyadic(fam.jmax() as i32);
    let grid = fam.grid();
    let outside = compensated_sum(
        src.iter()
            .enumerate()
            .filter(|(i, _)| fam.profile().value(grid.frequency_norm(*i) * scale) < 1.0)
            .map(|(_, z)| z.norm_sqr()),
    );
    let (defect, outside_mass) = if total == 0.0 {
        (0.0, 0.0)
    } else {
        ((diff / total).sqrt(), outside / total)
    };
    Ok(Reconstruction {
        field: SampledField::from_spectrum(grid, sum)?,
        defect,
        outside_mass,
        precondition_ok: outside_mass <= RECONSTRUCT_OUTSIDE_MASS,
    })
}
