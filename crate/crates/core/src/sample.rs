//! Seeded random test fields.
//!
//! A random field is a sum of wave packets `c_i · χ(x - x_i) e^{2πi ν_i·(x - x_i)}`
//! with complex amplitudes `c_i`, centers `x_i` in the middle half of the
//! period, and lattice frequencies `|ν_i| <= 2^{Jmax-1}`. The smooth bump `χ`
//! keeps the spectrum inside the bank's reach and the mass away from the
//! period boundary.

use num_complex::Complex64;
use rand::Rng;

use crate::cutoff::RadialCutoff;
use crate::grid::{shift_phase, GridSpec, SampledField};
use crate::lp_family::LpFamily;

/// Bump used for the packets: plateau radius `min(1, L/16)`.
pub fn packet_envelope(grid: &GridSpec) -> RadialCutoff {
    let mu = (grid.period() / 16.0).min(1.0);
    RadialCutoff::new(mu, 2.0 * mu)
}

fn envelope_spectrum(grid: &GridSpec) -> Vec<Complex64> {
    let env = packet_envelope(grid);
    let dim = grid.dim();
    SampledField::from_fn(grid, |x| {
        let r = if dim == 1 {
            x[0].abs()
        } else {
            x[0].hypot(x[1])
        };
        Complex64::new(env.value(r), 0.0)
    })
    .into_spectrum()
}

/// A random band-limited field made of `count` packets.
pub fn random_packets<R: Rng>(fam: &LpFamily, count: usize, rng: &mut R) -> SampledField {
    let grid = fam.grid();
    let env = envelope_spectrum(grid);
    random_packets_with(grid, &env, fam.jmax(), count, rng)
}

/// `n` independent random fields sharing one envelope transform.
pub fn random_fields<R: Rng>(
    fam: &LpFamily,
    n: usize,
    count: usize,
    rng: &mut R,
) -> Vec<SampledField> {
    let grid = fam.grid();
    let env = envelope_spectrum(grid);
    (0..n)
        .map(|_| random_packets_with(grid, &env, fam.jmax(), count, rng))
        .collect()
}

fn random_packets_with<R: Rng>(
    grid: &GridSpec,
    env: &[Complex64],
    jmax: usize,
    count: usize,
    rng: &mut R,
) -> SampledField {
    let dim = grid.dim();
    let npts = grid.points() as i64;
    let top = 2f64.powi(jmax as i32 - 1) * grid.period() / (dim as f64).sqrt();
    let kmax = top.floor() as i64;
    let quarter = grid.period() / 4.0;
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    for _ in 0..count {
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let mut k = [0i64; 2];
        let mut x = [0.0; 2];
        for d in 0..dim {
            k[d] = rng.gen_range(-kmax..=kmax);
            x[d] = rng.gen_range(-quarter..quarter);
        }
        for (i, slot) in out.iter_mut().enumerate() {
            let [a, b] = grid.axis_indices(i);
            let a = (a as i64 - k[0]).rem_euclid(npts) as usize;
            let b = if dim == 2 {
                (b as i64 - k[1]).rem_euclid(npts) as usize
            } else {
                0
            };
            let src = env[grid.flat_index([a, b])];
            *slot += c * src * shift_phase(x, grid.frequency(i));
        }
    }
    SampledField::from_spectrum(grid, out).expect("length matches grid")
}

/// `|f|` as a real, nonnegative field.
pub fn modulus(f: &SampledField) -> SampledField {
    let v = f
        .values()
        .iter()
        .map(|z| Complex64::new(z.norm(), 0.0))
        .collect();
    SampledField::from_values(f.grid(), v).expect("length matches grid")
}
