//! Numerical thresholds shared by the library, the experiment driver and the
//! test suites. Values that were measured rather than derived say so.

/// Spectral energy fraction outside the bank's unit plateau above which a
/// field no longer counts as band-limited.
pub const RECONSTRUCT_OUTSIDE_MASS: f64 = 1e-20;

/// Largest admissible fraction of `|f|` mass within `2 μ₀` of the period
/// boundary.
pub const BOUNDARY_MASS: f64 = 1e-8;

/// Telescoping partition of unity, pointwise.
pub const TELESCOPING: f64 = 1e-12;

/// `φ̂_j (φ̂_{j-1} + φ̂_j + φ̂_{j+1}) = φ̂_j`, pointwise.
pub const ADJACENT_BANDS: f64 = 1e-14;

/// Relative error of `|∇m(2^j ξ₀)| = 2π |y_j|`.
pub const GRADIENT_IDENTITY: f64 = 1e-8;

/// Analytic gradient against a central difference.
pub const GRADIENT_FD: f64 = 1e-6;
pub const GRADIENT_FD_STEP: f64 = 1e-5;

/// `apply_t` against the closed-form multiplier, relative sup error.
pub const SPECTRAL_CONSISTENCY: f64 = 1e-10;

/// Decay of `sup |φ_j * (χ e_k)|` in `|j - k|`, log2 units.
pub const DECAY_SLOPE_MAX: f64 = -4.0;
pub const DECAY_DIAGONAL: (f64, f64) = (0.5, 1.5);

/// Lower-bound margin and the largest acceptable empirical `K`.
pub const LOWER_BOUND_MARGIN: f64 = 0.5;
pub const K_EMP_MAX: usize = 5;

/// Besov ratio spread across the `J` sweep, and its absolute ceiling.
pub const BESOV_SPREAD: f64 = 0.10;
pub const BESOV_RATIO_MAX: f64 = 2.5;

/// Relative distance between measured and predicted growth of the
/// Triebel-Lizorkin ratio.
pub const TL_GROWTH: f64 = 0.25;

/// Inflation applied to the idealized oracle brackets.
pub const BRACKET_SLACK: (f64, f64) = (0.7, 1.4);

/// `|tl - besov| / besov` when `p = q`.
pub const NORM_COINCIDENCE: f64 = 1e-10;

/// Additive slack on Young's bound for the convolution inequality.
pub const YOUNG_SLACK: f64 = 1e-10;

/// Largest ratio observed over 50 seeded sequences with `p = 1/2`,
/// `q = 2`, `δ = 2`, rounded up. Measured, then frozen.
pub const CONV_HALF_REGRESSION: f64 = 1.2;

/// Relative slack on `‖χ‖_r` for sums of disjointly supported copies.
pub const DISJOINT_SUM: f64 = 1e-10;

/// Largest `L¹` ratio observed for the band-5 kernel over 50 seeded
/// coefficient vectors, rounded up. Measured, then frozen.
pub const KERNEL_SUM_REGRESSION: f64 = 1.7;

/// Relative distance between measured and predicted growth of the
/// vector-valued ratio.
pub const VECTOR_GROWTH: f64 = 0.30;
pub const VECTOR_L2_RANGE: (f64, f64) = (0.5, 2.0);
