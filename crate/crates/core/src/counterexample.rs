//! Inputs on which `T` is bounded in Besov norms but not in
//! Triebel-Lizorkin norms.
//!
//! The building block is the atom `χ e_j`, a unit-height bump carried to
//! frequency `2^j`. The test function is
//!
//! ```text
//! f = Σ_{j=1}^{J} 2^{-js} a_j τ_{-u_j}(χ e_j)
//! ```
//!
//! For `p < q` (PLT) all atoms sit at the origin (`u_j = 0`) and `T` spreads
//! them out to `y_j`; for `p > q` (PGT) they start at `-y_j` and `T` stacks
//! them at the origin. Either way the Besov norm does not see the geometry
//! while the Triebel-Lizorkin norm changes from an `ℓ^q` to an `ℓ^p` sum or
//! back.

use num_complex::Complex64;

use crate::cutoff::RadialCutoff;
use crate::error::{Error, Result};
use crate::grid::{lattice_shift, lp_of_values, shift_phase, GridSpec, SampledField};
use crate::lp_family::LpFamily;
use crate::norms::{Bands, NormParams};
use crate::numerics::{ball_volume, compensated_sum, fit_slope, lq_norm, MixedNorm};
use crate::operator_t::TranslationSequence;
use crate::tolerances::LOWER_BOUND_MARGIN;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    /// `p < q`, atoms stacked at the origin.
    Plt,
    /// `p > q`, atoms dispersed at `-y_j`.
    Pgt,
}

impl Case {
    /// The case matching `(p, q)`; `None` when `p = q`.
    pub fn for_exponents(p: f64, q: f64) -> Option<Self> {
        if p < q {
            Some(Case::Plt)
        } else if p > q {
            Some(Case::Pgt)
        } else {
            None
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Case::Plt => "PLT",
            Case::Pgt => "PGT",
        }
    }

    fn check(self, p: f64, q: f64) -> Result<()> {
        match self {
            Case::Plt if !(p < q) => Err(Error::CaseMismatch {
                case: "PLT",
                requirement: "p < q",
                p,
                q,
            }),
            Case::Pgt if !(p > q) => Err(Error::CaseMismatch {
                case: "PGT",
                requirement: "p > q",
                p,
                q,
            }),
            _ => Ok(()),
        }
    }
}

/// `a_j = (j + 3/p)^{-1/p}` for PLT and `(j + 3/q)^{-1/q}` for PGT,
/// `j = 1..=atoms`. The sequence lies in `ℓ^q \ ℓ^p` (resp. `ℓ^p \ ℓ^q`).
pub fn weight_sequence(case: Case, p: f64, q: f64, atoms: usize) -> Result<Vec<f64>> {
    case.check(p, q)?;
    let e = match case {
        Case::Plt => p,
        Case::Pgt => q,
    };
    if !(e > 0.0 && e.is_finite()) {
        return Err(Error::InvalidExponent(e));
    }
    Ok((1..=atoms)
        .map(|j| (j as f64 + 3.0 / e).powf(-1.0 / e))
        .collect())
}

/// Checks `|a_j| <= 2^{|j-k|} |a_k|` for all pairs.
pub fn check_ratio_bound(a: &[f64]) -> Result<()> {
    for (j, aj) in a.iter().enumerate() {
        for (k, ak) in a.iter().enumerate() {
            let bound = 2f64.powi((j as i32 - k as i32).abs()) * ak.abs();
            if aj.abs() > bound * (1.0 + 1e-15) {
                return Err(Error::WeightRatio { j: j + 1, k: k + 1 });
            }
        }
    }
    Ok(())
}

/// Parameters of one counterexample function.
#[derive(Clone, Debug)]
pub struct CounterexampleSpec {
    pub case: Case,
    pub s: f64,
    pub p: f64,
    pub q: f64,
    /// Number of atoms `J`.
    pub atoms: usize,
    pub mu0: f64,
    pub ys: TranslationSequence,
    pub a: Vec<f64>,
}

impl CounterexampleSpec {
    /// Standard weights for the case; `μ₀` is taken from `ys`.
    pub fn new(
        case: Case,
        s: f64,
        p: f64,
        q: f64,
        atoms: usize,
        ys: &TranslationSequence,
    ) -> Result<Self> {
        NormParams::new(s, p, q)?;
        let a = weight_sequence(case, p, q, atoms)?;
        Self::with_weights(case, s, p, q, ys, a)
    }

    /// Arbitrary weights, still subject to the ratio bound.
    pub fn with_weights(
        case: Case,
        s: f64,
        p: f64,
        q: f64,
        ys: &TranslationSequence,
        a: Vec<f64>,
    ) -> Result<Self> {
        NormParams::new(s, p, q)?;
        case.check(p, q)?;
        check_ratio_bound(&a)?;
        Ok(Self {
            case,
            s,
            p,
            q,
            atoms: a.len(),
            mu0: ys.mu0(),
            ys: ys.clone(),
            a,
        })
    }

    pub fn params(&self) -> NormParams {
        NormParams {
            s: self.s,
            p: self.p,
            q: self.q,
        }
    }

    /// `u_j`: zero for PLT, `y_j` for PGT.
    pub fn shift(&self, j: usize) -> [f64; 2] {
        shift_for(self.case, &self.ys, j)
    }

    /// Center of the `j`-th atom of `f`, i.e. `-u_j`.
    pub fn atom_center(&self, j: usize) -> [f64; 2] {
        let u = self.shift(j);
        [-u[0], -u[1]]
    }

    /// Center of the `j`-th band of `Tf`, i.e. `y_j - u_j`.
    pub fn image_center(&self, j: usize) -> [f64; 2] {
        let y = self.ys.y(j);
        let u = self.shift(j);
        [y[0] - u[0], y[1] - u[1]]
    }
}

fn shift_for(case: Case, ys: &TranslationSequence, j: usize) -> [f64; 2] {
    match case {
        Case::Plt => [0.0, 0.0],
        Case::Pgt => ys.y(j),
    }
}

/// The bump with `1_{B(0,μ₀)} <= χ <= 1_{B(0,2μ₀)}`.
pub fn chi_profile(mu0: f64) -> RadialCutoff {
    RadialCutoff::new(mu0, 2.0 * mu0)
}

pub fn build_chi(grid: &GridSpec, mu0: f64) -> Result<SampledField> {
    let limit = grid.period() / 4.0;
    if !(mu0 > 0.0) || 2.0 * mu0 >= limit {
        return Err(Error::RadiusTooLarge { mu0, limit });
    }
    let prof = chi_profile(mu0);
    Ok(SampledField::from_fn(grid, |x| {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        Complex64::new(prof.value(r), 0.0)
    }))
}

/// Fraction of the spectral energy of `f` at `|ξ| > freq`.
pub fn spectral_tail(f: &SampledField, freq: f64) -> f64 {
    let g = f.grid();
    let s = f.spectrum();
    let total = compensated_sum(s.iter().map(|z| z.norm_sqr()));
    let tail = compensated_sum(
        s.iter()
            .enumerate()
            .filter(|(i, _)| g.frequency_norm(*i) > freq)
            .map(|(_, z)| z.norm_sqr()),
    );
    if total == 0.0 {
        0.0
    } else {
        tail / total
    }
}

/// Adds `c · τ_{center}(χ e_k)` to a spectrum, given `χ̂`.
fn add_atom(
    grid: &GridSpec,
    chi_hat: &[Complex64],
    k: usize,
    c: Complex64,
    center: [f64; 2],
    out: &mut [Complex64],
) -> Result<()> {
    let dir: Vec<f64> = (0..grid.dim())
        .map(|d| if d == 0 { 1.0 } else { 0.0 })
        .collect();
    let shift = lattice_shift(grid, k as u32, &dir)?;
    let n = grid.points() as i64;
    for (i, slot) in out.iter_mut().enumerate() {
        let [a, b] = grid.axis_indices(i);
        let a = (a as i64 - shift[0]).rem_euclid(n) as usize;
        let b = if grid.dim() == 2 {
            (b as i64 - shift[1]).rem_euclid(n) as usize
        } else {
            0
        };
        let src = chi_hat[grid.flat_index([a, b])];
        if src != Complex64::new(0.0, 0.0) {
            *slot += c * src * shift_phase(center, grid.frequency(i));
        }
    }
    Ok(())
}

fn check_geometry(spec: &CounterexampleSpec, fam: &LpFamily) -> Result<()> {
    let limit = fam.jmax().saturating_sub(2);
    if spec.atoms > limit {
        return Err(Error::TooManyAtoms {
            atoms: spec.atoms,
            limit,
        });
    }
    if spec.ys.jmax() < spec.atoms {
        return Err(Error::IncompatibleJmax {
            have: spec.ys.jmax(),
            need: spec.atoms,
        });
    }
    let half = fam.grid().period() / 2.0;
    for j in 1..=spec.atoms {
        for c in [spec.atom_center(j), spec.image_center(j)] {
            let reach = c[0].hypot(c[1]) + 4.0 * spec.mu0;
            if reach > half {
                return Err(Error::SupportViolation { j });
            }
        }
    }
    Ok(())
}

/// `f = Σ_{j=1}^{J} 2^{-js} a_j τ_{-u_j}(χ e_j)`.
pub fn build_f(spec: &CounterexampleSpec, fam: &LpFamily) -> Result<SampledField> {
    check_geometry(spec, fam)?;
    let grid = fam.grid();
    let chi = build_chi(grid, spec.mu0)?;
    let chi_hat = chi.spectrum();
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    for j in 1..=spec.atoms {
        let c = 2f64.powf(-(j as f64) * spec.s) * spec.a[j - 1];
        add_atom(
            grid,
            chi_hat,
            j,
            Complex64::new(c, 0.0),
            spec.atom_center(j),
            &mut out,
        )?;
    }
    SampledField::from_spectrum(grid, out)
}

/// `D[j][k] = sup |φ_j * (χ e_k)|` for `j <= jmax`, `k <= kmax`.
pub fn decay_matrix(
    fam: &LpFamily,
    chi: &SampledField,
    jmax: usize,
    kmax: usize,
) -> Result<Vec<Vec<f64>>> {
    for top in [jmax, kmax] {
        if top > fam.jmax() {
            return Err(Error::BandOutOfRange {
                j: top,
                jmax: fam.jmax(),
            });
        }
    }
    let grid = fam.grid();
    let chi_hat = chi.spectrum();
    let mut d = vec![vec![0.0; kmax + 1]; jmax + 1];
    for k in 0..=kmax {
        let mut spec = vec![Complex64::new(0.0, 0.0); grid.len()];
        add_atom(
            grid,
            chi_hat,
            k,
            Complex64::new(1.0, 0.0),
            [0.0, 0.0],
            &mut spec,
        )?;
        let bands = Bands::decompose(&SampledField::from_spectrum(grid, spec)?, fam)?;
        for (j, row) in d.iter_mut().enumerate() {
            row[k] = bands.band_lp(j, f64::INFINITY);
        }
    }
    Ok(d)
}

/// Slope of `log₂ max_{|j-k| = d} D[j][k]` against `d` for
/// `d ∈ dists`, with `j, k` restricted to `range`.
pub fn decay_slope(
    d: &[Vec<f64>],
    range: std::ops::RangeInclusive<usize>,
    dists: std::ops::RangeInclusive<usize>,
) -> f64 {
    let pts: Vec<(f64, f64)> = dists
        .map(|dist| {
            let mut worst = 0.0f64;
            for j in range.clone() {
                for k in range.clone() {
                    if j.abs_diff(k) == dist && j < d.len() && k < d[j].len() {
                        worst = worst.max(d[j][k]);
                    }
                }
            }
            (dist as f64, worst.max(f64::MIN_POSITIVE).log2())
        })
        .collect();
    fit_slope(&pts)
}

/// Per-band lower-bound margins of `Tf` on the balls `B(y_j - u_j, μ₀/2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LowerBound {
    /// Least `K` with `margin_j >= 1/2` for every `K <= j <= J`.
    pub k_emp: Option<usize>,
    /// `margins[j - 1] = min 2^{js} |φ_j * Tf| / |a_j|` over the ball.
    pub margins: Vec<f64>,
}

/// Measures the lower bound from the bands of `Tf`.
pub fn lower_bound_check(spec: &CounterexampleSpec, tf_bands: &Bands) -> Result<LowerBound> {
    if tf_bands.jmax() < spec.atoms {
        return Err(Error::BandOutOfRange {
            j: spec.atoms,
            jmax: tf_bands.jmax(),
        });
    }
    let grid = tf_bands.grid();
    let dim = grid.dim();
    let radius = spec.mu0 / 2.0;
    let mut margins = Vec::with_capacity(spec.atoms);
    for j in 1..=spec.atoms {
        let c = spec.image_center(j);
        let w = 2f64.powf(j as f64 * spec.s) / spec.a[j - 1].abs();
        let m = tf_bands.magnitude(j);
        let mut lo = f64::INFINITY;
        for (i, v) in m.iter().enumerate() {
            let x = grid.position(i);
            let dist = (0..dim).map(|d| (x[d] - c[d]).powi(2)).sum::<f64>().sqrt();
            if dist <= radius {
                lo = lo.min(w * v);
            }
        }
        margins.push(lo);
    }
    let mut k_emp = None;
    for j in (1..=spec.atoms).rev() {
        if margins[j - 1] >= LOWER_BOUND_MARGIN {
            k_emp = Some(j);
        } else {
            break;
        }
    }
    Ok(LowerBound { k_emp, margins })
}

/// `‖Σ_j b_j τ_{y_j} φ‖_{L^r} / ‖b‖_{ℓ^r}` with `b_j` paired to `y_j`,
/// `j = 1..=b.len()`.
pub fn disjoint_sum_ratio(
    b: &[f64],
    phi: &SampledField,
    ys: &TranslationSequence,
    r: f64,
) -> Result<f64> {
    crate::grid::check_exponent(r)?;
    if b.len() > ys.jmax() {
        return Err(Error::IncompatibleJmax {
            have: ys.jmax(),
            need: b.len(),
        });
    }
    let den = lq_norm(b, r);
    if den == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    let grid = phi.grid();
    let src = phi.spectrum();
    let out: Vec<Complex64> = src
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let xi = grid.frequency(i);
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, bj) in b.iter().enumerate() {
                if *bj != 0.0 {
                    acc += shift_phase(ys.y(j + 1), xi) * *bj;
                }
            }
            z * acc
        })
        .collect();
    let sum = SampledField::from_spectrum(grid, out)?;
    Ok(lp_of_values(sum.values(), r, grid.cell_volume()) / den)
}

/// An interval `[lower, upper]` predicted by an idealized model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleBracket {
    pub lower: f64,
    pub upper: f64,
    pub model: &'static str,
}

impl OracleBracket {
    fn new(a: f64, b: f64, model: &'static str) -> Self {
        Self {
            lower: a.min(b),
            upper: a.max(b),
            model,
        }
    }

    /// Geometric midpoint.
    pub fn mid(&self) -> f64 {
        (self.lower * self.upper).sqrt()
    }

    /// Whether `v` lies in `[lo · lower, hi · upper]`.
    pub fn contains_with_slack(&self, v: f64, slack: (f64, f64)) -> bool {
        v >= slack.0 * self.lower && v <= slack.1 * self.upper
    }
}

/// Oracle brackets for the four norms of one counterexample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleNorms {
    pub besov_f: OracleBracket,
    pub tl_f: OracleBracket,
    pub besov_tf: OracleBracket,
    pub tl_tf: OracleBracket,
}

/// Idealized model `2^{js} φ_j * f ≈ a_j 1_{B(c_j, r)}` with `r` between `μ₀`
/// and `2μ₀`; the brackets are the model values at the two radii.
pub fn oracle_norms(spec: &CounterexampleSpec) -> OracleNorms {
    let (p, q) = (spec.p, spec.q);
    let dim = spec.ys.dim();
    let a = &spec.a;
    let lq = lq_norm(a, q);
    let lp = lq_norm(a, p);
    let vol = |r: f64| {
        if p.is_infinite() {
            1.0
        } else {
            ball_volume(dim, r).powf(1.0 / p)
        }
    };
    let (vlo, vhi) = (vol(spec.mu0), vol(2.0 * spec.mu0));
    let besov = OracleBracket::new(lq * vlo, lq * vhi, "l^q(a) vol^(1/p)");

    let (tl_f, tl_tf) = if p.is_infinite() {
        let f_centers: Vec<f64> = (1..=spec.atoms).map(|j| spec.atom_center(j)[0]).collect();
        let t_centers: Vec<f64> = (1..=spec.atoms).map(|j| spec.image_center(j)[0]).collect();
        let at = |centers: &[f64]| {
            let lo = model_tl_infq(a, centers, spec.mu0, q);
            let hi = model_tl_infq(a, centers, 2.0 * spec.mu0, q);
            OracleBracket::new(lo, hi, "indicator-ball sup model")
        };
        (at(&f_centers), at(&t_centers))
    } else {
        let stacked = OracleBracket::new(lq * vlo, lq * vhi, "stacked: l^q(a) vol^(1/p)");
        let spread = OracleBracket::new(lp * vlo, lp * vhi, "dispersed: l^p(a) vol^(1/p)");
        match spec.case {
            Case::Plt => (stacked, spread),
            Case::Pgt => (spread, stacked),
        }
    };
    OracleNorms {
        besov_f: besov,
        tl_f,
        besov_tf: besov,
        tl_tf,
    }
}

/// `sup_{x, J} 2^{J/q} (∫_{B(x, 2^{-J})} Σ_{j >= max(J,0)} a_j^q 1_{B(c_j, r)})^{1/q}`
/// on the line, for atoms `j = 1..=a.len()` centered at `c_j`.
pub fn model_tl_infq(a: &[f64], centers: &[f64], r: f64, q: f64) -> f64 {
    let overlap = |x: f64, big_r: f64, c: f64| {
        let lo = (x - big_r).max(c - r);
        let hi = (x + big_r).min(c + r);
        (hi - lo).max(0.0)
    };
    let mut best = 0.0f64;
    for big_j in -16..=(a.len() as i32) {
        let big_r = 2f64.powi(-big_j);
        let first = big_j.max(1) as usize;
        let mut probes = Vec::new();
        for &c in &centers[first - 1..] {
            probes.push(c);
            for s1 in [-1.0, 1.0] {
                for s2 in [-1.0, 1.0] {
                    probes.push(c + s1 * r + s2 * big_r);
                }
            }
        }
        for x in probes {
            let integral: f64 = (first..=a.len())
                .map(|j| a[j - 1].abs().powf(q) * overlap(x, big_r, centers[j - 1]))
                .sum();
            best = best.max(2f64.powf(big_j as f64 / q) * integral.powf(1.0 / q));
        }
    }
    best
}

/// `‖(f_k)‖_{L²(ℓ^q)}` and `‖(T f_k)‖_{L²(ℓ^q)}` for the family
/// `f_k = a_k τ_{-u_k}(χ e_k)`, `k = 1..=a.len()`, with `u_k` chosen by
/// `case`.
pub fn vector_valued_ratio(
    a: &[f64],
    case: Case,
    ys: &TranslationSequence,
    q: f64,
    fam: &LpFamily,
) -> Result<(f64, f64)> {
    crate::grid::check_exponent(q)?;
    let limit = fam.jmax().saturating_sub(2);
    if a.len() > limit {
        return Err(Error::TooManyAtoms {
            atoms: a.len(),
            limit,
        });
    }
    let grid = fam.grid();
    let chi = build_chi(grid, ys.mu0())?;
    let chi_hat = chi.spectrum();
    let mut input = MixedNorm::new(grid.len(), q);
    let mut output = MixedNorm::new(grid.len(), q);
    for (idx, ak) in a.iter().enumerate() {
        let k = idx + 1;
        let u = shift_for(case, ys, k);
        let mut spec = vec![Complex64::new(0.0, 0.0); grid.len()];
        add_atom(
            grid,
            chi_hat,
            k,
            Complex64::new(*ak, 0.0),
            [-u[0], -u[1]],
            &mut spec,
        )?;
        let fk = SampledField::from_spectrum(grid, spec)?;
        let tfk = crate::operator_t::apply_t(&fk, fam, ys)?;
        input.push(fk.values().iter().map(|z| z.norm()));
        output.push(tfk.values().iter().map(|z| z.norm()));
    }
    let cell = grid.cell_volume();
    Ok((input.finish(2.0, cell), output.finish(2.0, cell)))
}
