//! The band-scrambling operator `Tf = Σ_{j=1}^{Jmax} τ_{y_j}(φ_j * f)` and
//! its symbol
//!
//! ```text
//! m(ξ) = Σ_j e^{-2πi y_j·ξ} φ̂_1(2^{1-j} ξ) = Σ_j e^{-2πi y_j·ξ} φ̂_j(ξ)
//! ```
//!
//! At a dyadic point `2^j ξ₀` only the `j`-th term survives and every
//! profile derivative vanishes, so `|∇m(2^j ξ₀)| = 2π |y_j|` exactly.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{shift_phase, GridSpec, SampledField};
use crate::lp_family::LpFamily;
use crate::numerics::fit_slope;

/// Separated translation vectors `y_1, ..., y_Jmax`.
#[derive(Clone, Debug, PartialEq)]
pub struct TranslationSequence {
    dim: usize,
    ys: Vec<[f64; 2]>,
    spacing: f64,
    mu0: f64,
    n0: u32,
}

impl TranslationSequence {
    /// `y_j = j · spacing · e₁`, checked to fit in a half period together
    /// with a guard of `4 μ₀ = 2 · spacing`.
    pub fn linear(jmax: usize, spacing: f64, grid: &GridSpec) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidSpacing(spacing));
        }
        let half = grid.period() / 2.0;
        let guard = 2.0 * spacing;
        if jmax as f64 * spacing + guard >= half {
            return Err(Error::SequenceDoesNotFit {
                jmax,
                spacing,
                guard,
                half,
            });
        }
        let ys = (1..=jmax).map(|j| [j as f64 * spacing, 0.0]).collect();
        let reach = jmax as f64 * spacing;
        let mut n0 = 0u32;
        while 2f64.powi(n0 as i32) < reach {
            n0 += 1;
        }
        Ok(Self {
            dim: grid.dim(),
            ys,
            spacing,
            mu0: spacing / 2.0,
            n0,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of translations, i.e. the top band they serve.
    pub fn jmax(&self) -> usize {
        self.ys.len()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Half the minimal pairwise separation.
    pub fn mu0(&self) -> f64 {
        self.mu0
    }

    /// Least integer with `max_j |y_j| <= 2^{N0}`.
    pub fn n0(&self) -> u32 {
        self.n0
    }

    /// `y_j` for `1 <= j <= Jmax`; unused components are zero.
    pub fn y(&self, j: usize) -> [f64; 2] {
        self.ys[j - 1]
    }

    pub fn y_slice(&self, j: usize) -> &[f64] {
        &self.ys[j - 1][..self.dim]
    }

    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (a, ya) in self.ys.iter().enumerate() {
            for yb in &self.ys[a + 1..] {
                best = best.min((ya[0] - yb[0]).hypot(ya[1] - yb[1]));
            }
        }
        best
    }
}

pub fn make_translations(
    jmax: usize,
    spacing: f64,
    grid: &GridSpec,
) -> Result<TranslationSequence> {
    TranslationSequence::linear(jmax, spacing, grid)
}

fn check_compatible(fam: &LpFamily, ys: &TranslationSequence) -> Result<()> {
    if ys.jmax() < fam.jmax() {
        return Err(Error::IncompatibleJmax {
            have: ys.jmax(),
            need: fam.jmax(),
        });
    }
    if ys.dim() != fam.grid().dim() {
        return Err(Error::DimensionMismatch {
            expected: fam.grid().dim(),
            got: ys.dim(),
        });
    }
    Ok(())
}

/// `Tf`, assembled band by band on the spectral side.
pub fn apply_t(f: &SampledField, fam: &LpFamily, ys: &TranslationSequence) -> Result<SampledField> {
    check_compatible(fam, ys)?;
    if f.grid() != fam.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = fam.grid();
    let src = f.spectrum();
    let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
    for j in 1..=fam.jmax() {
        let y = ys.y(j);
        for &(i, v) in fam.entries(j)? {
            let i = i as usize;
            out[i] += src[i] * v * shift_phase(y, grid.frequency(i));
        }
    }
    SampledField::from_spectrum(grid, out)
}

fn pad(xi: &[f64]) -> [f64; 2] {
    let mut p = [0.0; 2];
    for (a, b) in p.iter_mut().zip(xi) {
        *a = *b;
    }
    p
}

/// Bands whose annulus can contain `r`.
fn live_bands(r: f64, jmax: usize) -> std::ops::RangeInclusive<usize> {
    if r <= 0.5 {
        // Empty: no band reaches below 1/2.
        return std::ops::RangeInclusive::new(1, 0);
    }
    let c = r.log2().floor() as i64;
    let lo = (c - 1).max(1) as usize;
    let hi = ((c + 2).max(0) as usize).min(jmax);
    lo..=hi
}

/// `m(ξ)` at any real frequency.
pub fn multiplier_value(xi: &[f64], ys: &TranslationSequence, fam: &LpFamily) -> Complex64 {
    let x = pad(xi);
    let r = x[0].hypot(x[1]);
    let mut acc = Complex64::new(0.0, 0.0);
    for j in live_bands(r, fam.jmax().min(ys.jmax())) {
        let v = fam.radial(j, r);
        if v != 0.0 {
            acc += shift_phase(ys.y(j), x) * v;
        }
    }
    acc
}

/// `∇m(ξ)`, componentwise; unused components are zero.
pub fn multiplier_gradient(xi: &[f64], ys: &TranslationSequence, fam: &LpFamily) -> [Complex64; 2] {
    let x = pad(xi);
    let r = x[0].hypot(x[1]);
    let mut g = [Complex64::new(0.0, 0.0); 2];
    for j in live_bands(r, fam.jmax().min(ys.jmax())) {
        let v = fam.radial(j, r);
        let grad = fam.symbol_gradient(j, &x[..fam.grid().dim()]);
        if v == 0.0 && grad == [0.0, 0.0] {
            continue;
        }
        let e = shift_phase(ys.y(j), x);
        let y = ys.y(j);
        for d in 0..2 {
            g[d] += e * Complex64::new(grad[d], -2.0 * PI * y[d] * v);
        }
    }
    g
}

/// `m` at each listed frequency.
pub fn multiplier_m<P: AsRef<[f64]>>(
    xis: &[P],
    ys: &TranslationSequence,
    fam: &LpFamily,
) -> Vec<Complex64> {
    xis.iter()
        .map(|xi| multiplier_value(xi.as_ref(), ys, fam))
        .collect()
}

fn gradient_norm(g: &[Complex64; 2]) -> f64 {
    (g[0].norm_sqr() + g[1].norm_sqr()).sqrt()
}

/// `|∇m(2^j ξ₀)|` from the analytic gradient.
pub fn grad_m_dyadic(
    j: usize,
    xi0: &[f64],
    ys: &TranslationSequence,
    fam: &LpFamily,
) -> Result<f64> {
    if j == 0 || j > fam.jmax() {
        return Err(Error::BandOutOfRange {
            j,
            jmax: fam.jmax(),
        });
    }
    let u = pad(xi0);
    if xi0.len() != fam.grid().dim() {
        return Err(Error::DimensionMismatch {
            expected: fam.grid().dim(),
            got: xi0.len(),
        });
    }
    if (u[0].hypot(u[1]) - 1.0).abs() > 1e-12 {
        return Err(Error::NotUnitVector(xi0.to_vec()));
    }
    let scale = 2f64.powi(j as i32);
    let xi: Vec<f64> = xi0.iter().map(|c| c * scale).collect();
    Ok(gradient_norm(&multiplier_gradient(&xi, ys, fam)))
}

/// Central-difference `|∇m(ξ)|` with step `step`, for cross-checks.
pub fn grad_m_central_difference(
    xi: &[f64],
    ys: &TranslationSequence,
    fam: &LpFamily,
    step: f64,
) -> f64 {
    let mut total = 0.0;
    for d in 0..xi.len() {
        let mut plus = xi.to_vec();
        let mut minus = xi.to_vec();
        plus[d] += step;
        minus[d] -= step;
        let diff =
            (multiplier_value(&plus, ys, fam) - multiplier_value(&minus, ys, fam)) / (2.0 * step);
        total += diff.norm_sqr();
    }
    total.sqrt()
}

/// `max |∇^k m|` over `samples` points of the open annulus
/// `2^{j-1} < |ξ| < 2^{j+1}`, for `k ∈ {0, 1}`.
pub fn growth_scan(
    k: usize,
    j: usize,
    ys: &TranslationSequence,
    fam: &LpFamily,
    samples: usize,
) -> Result<f64> {
    if k > 1 {
        return Err(Error::UnsupportedOrder(k));
    }
    if samples < 64 {
        return Err(Error::TooFewSamples(samples));
    }
    let lo = 2f64.powi(j as i32 - 1);
    let hi = 2f64.powi(j as i32 + 1);
    let dim = fam.grid().dim();
    let (radii, angles) = if dim == 1 {
        (samples, 1)
    } else {
        let a = (samples as f64).sqrt().ceil() as usize;
        (samples.div_ceil(a), a)
    };
    let mut best = 0.0f64;
    for ri in 0..radii {
        let r = lo + (ri as f64 + 0.5) / radii as f64 * (hi - lo);
        for ai in 0..angles {
            let t = 2.0 * PI * ai as f64 / angles as f64;
            let xi = [r * t.cos(), r * t.sin()];
            let v = if k == 0 {
                multiplier_value(&xi[..dim], ys, fam).norm()
            } else {
                gradient_norm(&multiplier_gradient(&xi[..dim], ys, fam))
            };
            best = best.max(v);
        }
    }
    Ok(best)
}

/// Slope of `log₂ growth_scan(1, j)` against `j` for `j = 2..=Jmax`.
pub fn growth_slope(ys: &TranslationSequence, fam: &LpFamily, samples: usize) -> Result<f64> {
    let mut pts = Vec::new();
    for j in 2..=fam.jmax() {
        pts.push((j as f64, growth_scan(1, j, ys, fam, samples)?.log2()));
    }
    Ok(fit_slope(&pts))
}
