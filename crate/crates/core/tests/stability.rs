//! Checks that measured quantities do not drift with resolution or depth.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lp_lab::counterexample::{build_f, lower_bound_check, Case, CounterexampleSpec};
use lp_lab::grid::GridSpec;
use lp_lab::lp_family::{LpFamily, DEFAULT_EPS0};
use lp_lab::norms::{Bands, NormParams};
use lp_lab::operator_t::{apply_t, growth_scan, TranslationSequence};
use lp_lab::sample::random_fields;

struct Stack {
    fam: LpFamily,
    ys: TranslationSequence,
}

fn stack(period: f64, points: usize, jmax: usize, spacing: f64) -> Stack {
    let grid = GridSpec::new(1, period, points).unwrap();
    let fam = LpFamily::build(&grid, jmax, DEFAULT_EPS0).unwrap();
    let ys = TranslationSequence::linear(jmax, spacing, &grid).unwrap();
    Stack { fam, ys }
}

fn besov_ratio(st: &Stack, f: &lp_lab::SampledField, np: &NormParams) -> f64 {
    let tf = apply_t(f, &st.fam, &st.ys).unwrap();
    let bf = Bands::decompose(f, &st.fam).unwrap();
    let bt = Bands::decompose(&tf, &st.fam).unwrap();
    bt.besov(np) / bf.besov(np)
}

#[test]
fn besov_constant_is_stable_in_depth() {
    let np = NormParams::new(0.0, 1.0, 2.0).unwrap();
    let mut atoms_ratio = Vec::new();
    let mut random_ratio = Vec::new();
    for jmax in [6usize, 8, 10, 12] {
        let st = stack(64.0, 1 << (jmax + 8), jmax, 2.0);
        let spec = CounterexampleSpec::new(Case::Plt, 0.0, 1.0, 2.0, jmax - 2, &st.ys).unwrap();
        let f = build_f(&spec, &st.fam).unwrap();
        atoms_ratio.push(besov_ratio(&st, &f, &np));

        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let worst = random_fields(&st.fam, 3, 6, &mut rng)
            .iter()
            .map(|g| besov_ratio(&st, g, &np))
            .fold(0.0f64, f64::max);
        random_ratio.push(worst);
    }
    for ratios in [&atoms_ratio, &random_ratio] {
        let hi = ratios.iter().copied().fold(0.0f64, f64::max);
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(hi <= 2.5, "{ratios:?}");
        assert!(hi / lo - 1.0 < 0.10, "{ratios:?}");
    }
}

#[test]
fn sup_norm_is_stable_under_refinement() {
    let coarse = stack(64.0, 1 << 16, 8, 2.0);
    let fine = stack(64.0, 1 << 18, 8, 2.0);
    for (case, p, q) in [(Case::Pgt, f64::INFINITY, 1.0), (Case::Plt, 1.0, 2.0)] {
        let value = |st: &Stack| {
            let spec = CounterexampleSpec::new(case, 0.0, p, q, 6, &st.ys).unwrap();
            let f = build_f(&spec, &st.fam).unwrap();
            let tf = apply_t(&f, &st.fam, &st.ys).unwrap();
            let bf = Bands::decompose(&f, &st.fam).unwrap();
            let bt = Bands::decompose(&tf, &st.fam).unwrap();
            [bf.tl_infq(q, 0.0).unwrap(), bt.tl_infq(q, 0.0).unwrap()]
        };
        let a = value(&coarse);
        let b = value(&fine);
        for (x, y) in a.iter().zip(&b) {
            assert!((x / y - 1.0).abs() <= 0.25, "{case:?}: {a:?} vs {b:?}");
        }
    }
}

#[test]
fn growth_scan_brackets_the_gradient() {
    let st = stack(128.0, 1 << 16, 7, 4.0);
    for j in 1..=st.fam.jmax() {
        assert!(growth_scan(0, j, &st.ys, &st.fam, 256).unwrap() <= 1.0 + 1e-12);
    }
    for j in 2..st.fam.jmax() {
        let g = growth_scan(1, j, &st.ys, &st.fam, 2048).unwrap();
        let y = |k: usize| st.ys.y(k)[0].abs();
        // On the annulus only bands j-1..=j+1 contribute to the symbol.
        let slope: f64 = (j - 1..=j + 1)
            .map(|k| {
                (0..4096)
                    .map(|i| {
                        let r = 2f64.powi(j as i32 - 1) * (1.0 + 3.0 * i as f64 / 4095.0);
                        st.fam.radial_derivative(k, r).abs()
                    })
                    .fold(0.0f64, f64::max)
            })
            .sum();
        let lo = 2.0 * PI * y(j - 1);
        let hi = 2.0 * PI * y(j + 1) + slope;
        assert!(g >= lo && g <= hi, "j={j}: {g} not in [{lo}, {hi}]");
    }
}

#[test]
fn margins_do_not_depend_on_smoothness() {
    let st = stack(64.0, 1 << 16, 8, 2.0);
    for (case, p, q) in [(Case::Plt, 1.0, 2.0), (Case::Pgt, 2.0, 1.0)] {
        let margins = |s: f64| {
            let spec = CounterexampleSpec::new(case, s, p, q, 6, &st.ys).unwrap();
            let f = build_f(&spec, &st.fam).unwrap();
            let tf = apply_t(&f, &st.fam, &st.ys).unwrap();
            lower_bound_check(&spec, &Bands::decompose(&tf, &st.fam).unwrap())
                .unwrap()
                .margins
        };
        let (a, b) = (margins(0.0), margins(1.0));
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 0.05, "{case:?}: {a:?} vs {b:?}");
        }
    }
}
