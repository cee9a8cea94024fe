//! C^∞ cutoff built from `exp(-1/t)`.
//!
//! `smooth_step` rises from exactly 0 on `t <= 0` to exactly 1 on `t >= 1`.
//! [`RadialCutoff`] rescales it to a radial profile that is identically 1 up
//! to an inner radius and identically 0 beyond an outer radius. Both the
//! Littlewood-Paley low-pass and the bump used by the counterexample are
//! instances of it.

fn psi(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// `psi(t) / (psi(t) + psi(1 - t))`.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = psi(t);
    let b = psi(1.0 - t);
    a / (a + b)
}

/// Derivative of [`smooth_step`]; zero outside `(0, 1)`.
pub fn smooth_step_derivative(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    let a = psi(t);
    let b = psi(1.0 - t);
    let denom = a + b;
    if denom == 0.0 {
        return 0.0;
    }
    let u = 1.0 - t;
    a * b * (1.0 / (t * t) + 1.0 / (u * u)) / (denom * denom)
}

/// Radial profile equal to 1 on `r <= inner` and 0 on `r >= outer`,
/// monotone in between.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialCutoff {
    inner: f64,
    outer: f64,
}

impl RadialCutoff {
    pub fn new(inner: f64, outer: f64) -> Self {
        assert!(
            inner > 0.0 && outer > inner,
            "cutoff radii must satisfy 0 < inner < outer"
        );
        Self { inner, outer }
    }

    pub fn inner(&self) -> f64 {
        self.inner
    }

    pub fn outer(&self) -> f64 {
        self.outer
    }

    pub fn value(&self, r: f64) -> f64 {
        if r <= self.inner {
            1.0
        } else if r >= self.outer {
            0.0
        } else {
            smooth_step((self.outer - r) / (self.outer - self.inner))
        }
    }

    /// d/dr of [`value`](Self::value).
    pub fn derivative(&self, r: f64) -> f64 {
        if r <= self.inner || r >= self.outer {
            0.0
        } else {
            let w = self.outer - self.inner;
            -smooth_step_derivative((self.outer - r) / w) / w
        }
    }
}
