//! Small numeric helpers shared by the quadrature and norm code.

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// `x^p` for `x >= 0`, with the common exponents special-cased so that
/// p = 1, 2, 1/2 stay exact-ish and fast.
#[inline]
pub fn pow_nonneg(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x
    } else if p == 2.0 {
        x * x
    } else if p == 0.5 {
        x.sqrt()
    } else {
        x.powf(p)
    }
}

/// `(Σ |v|^q)^{1/q}`, or `max |v|` for `q = ∞`. Valid for any `q > 0`.
pub fn lq_norm(values: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        values.iter().fold(0.0, |m, v| m.max(v.abs()))
    } else {
        pow_nonneg(
            compensated_sum(values.iter().map(|v| pow_nonneg(v.abs(), q))),
            1.0 / q,
        )
    }
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for &(x, y) in points {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// Volume of the Euclidean ball of radius `r` in dimension 1 or 2.
pub fn ball_volume(dim: usize, r: f64) -> f64 {
    match dim {
        1 => 2.0 * r,
        2 => std::f64::consts::PI * r * r,
        _ => unreachable!("dimension is validated by GridSpec"),
    }
}

/// Accumulates the pointwise ℓ^q norm of a finite family of functions and
/// then takes the L^p quadrature of it.
pub(crate) struct MixedNorm {
    inner: Vec<f64>,
    q: f64,
}

impl MixedNorm {
    pub fn new(len: usize, q: f64) -> Self {
        Self {
            inner: vec![0.0; len],
            q,
        }
    }

    /// Adds one member of the family, given by its pointwise magnitudes.
    pub fn push<I: IntoIterator<Item = f64>>(&mut self, magnitudes: I) {
        if self.q.is_infinite() {
            for (acc, m) in self.inner.iter_mut().zip(magnitudes) {
                *acc = acc.max(m);
            }
        } else {
            for (acc, m) in self.inner.iter_mut().zip(magnitudes) {
                *acc += pow_nonneg(m, self.q);
            }
        }
    }

    /// `‖(Σ_j |g_j|^q)^{1/q}‖_{L^p}` with Riemann weight `cell`.
    pub fn finish(&self, p: f64, cell: f64) -> f64 {
        let q = self.q;
        if p.is_infinite() {
            let m = self.inner.iter().fold(0.0f64, |a, &b| a.max(b));
            return if q.is_infinite() {
                m
            } else {
                pow_nonneg(m, 1.0 / q)
            };
        }
        let exponent = if q.is_infinite() { p } else { p / q };
        let total = compensated_sum(self.inner.iter().map(|&v| pow_nonneg(v, exponent)));
        pow_nonneg(cell * total, 1.0 / p)
    }
}

/// `%g`-style rendering with `sig` significant digits; `inf`, `-inf`, `nan`
/// for non-finite values. Trailing zeros are trimmed.
pub fn format_g(x: f64, sig: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= sig as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
