//! Named experiments. Each one returns report lines and CSV artifacts; the
//! counterexample sweep is shared between `besov-bound` and `tl-diverge`.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::ExperimentConfig;
use super::report::{Check, Report};
use super::table::{num, plain_csv, NormRow, NormTable};
use crate::counterexample::{
    build_chi, build_f, decay_matrix, decay_slope, disjoint_sum_ratio, lower_bound_check,
    oracle_norms, spectral_tail, vector_valued_ratio, weight_sequence, Case, CounterexampleSpec,
    LowerBound, OracleNorms,
};
use crate::error::Result;
use crate::grid::{boundary_mass_fraction, lp_quadrature, modulate, GridSpec, SampledField};
use crate::lp_family::{reconstruct, LpFamily};
use crate::norms::{conv_inequality_ratio, young_bound, Bands, NormParams};
use crate::numerics::{format_g, lq_norm};
use crate::operator_t::{
    apply_t, grad_m_central_difference, grad_m_dyadic, growth_scan, growth_slope,
    multiplier_gradient, multiplier_value, TranslationSequence,
};
use crate::sample::{modulus, random_fields};
use crate::tolerances as tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Experiment {
    FamilyCheck,
    Decay,
    BesovBound,
    TlDiverge,
    Multiplier,
    DisjointSum,
    ConvIneq,
    VectorValued,
    All,
}

impl Experiment {
    pub const EACH: [Experiment; 8] = [
        Experiment::FamilyCheck,
        Experiment::Decay,
        Experiment::BesovBound,
        Experiment::TlDiverge,
        Experiment::Multiplier,
        Experiment::DisjointSum,
        Experiment::ConvIneq,
        Experiment::VectorValued,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Experiment::FamilyCheck => "family-check",
            Experiment::Decay => "decay",
            Experiment::BesovBound => "besov-bound",
            Experiment::TlDiverge => "tl-diverge",
            Experiment::Multiplier => "multiplier",
            Experiment::DisjointSum => "disjoint-sum",
            Experiment::ConvIneq => "conv-ineq",
            Experiment::VectorValued => "vector-valued",
            Experiment::All => "all",
        }
    }
}

/// A named output file.
#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub table: NormTable,
    pub report: Report,
    pub artifacts: Vec<Artifact>,
}

impl Outcome {
    fn merge(&mut self, other: Outcome) {
        self.table.rows.extend(other.table.rows);
        self.report.extend(other.report);
        self.artifacts.extend(other.artifacts);
    }

    /// Writes every artifact plus `report.txt` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for a in &self.artifacts {
            std::fs::write(dir.join(&a.name), &a.contents)?;
        }
        std::fs::write(dir.join("report.txt"), self.report.render())?;
        Ok(())
    }
}

/// Runs one experiment, or all of them in order.
pub fn run(cfg: &ExperimentConfig, experiment: Experiment) -> Result<Outcome> {
    cfg.validate()?;
    let mut lab = Lab::new(cfg)?;
    let list: Vec<Experiment> = if experiment == Experiment::All {
        Experiment::EACH.to_vec()
    } else {
        vec![experiment]
    };
    let mut out = Outcome::default();
    for e in list {
        out.merge(lab.run_one(e)?);
    }
    Ok(out)
}

/// One point of the counterexample sweep.
#[derive(Clone, Debug)]
struct SweepPoint {
    case: Case,
    np: NormParams,
    atoms: usize,
    besov_f: f64,
    tl_f: f64,
    besov_tf: f64,
    tl_tf: f64,
    oracle: OracleNorms,
    lower: LowerBound,
    boundary: f64,
}

struct Lab<'a> {
    cfg: &'a ExperimentConfig,
    grid: GridSpec,
    fam: LpFamily,
    ys: TranslationSequence,
    sweep: Option<Vec<SweepPoint>>,
}

fn label(np: &NormParams) -> String {
    format!(
        "s={},p={},q={}",
        format_g(np.s, 6),
        format_g(np.p, 6),
        format_g(np.q, 6)
    )
}

fn max_of(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

fn min_of(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(f64::INFINITY, f64::min)
}

impl<'a> Lab<'a> {
    fn new(cfg: &'a ExperimentConfig) -> Result<Self> {
        let grid = cfg.grid()?;
        let fam = LpFamily::build(&grid, cfg.jmax, cfg.eps0)?;
        let ys = TranslationSequence::linear(cfg.jmax, cfg.spacing, &grid)?;
        Ok(Self {
            cfg,
            grid,
            fam,
            ys,
            sweep: None,
        })
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(stream);
        rng
    }

    fn run_one(&mut self, e: Experiment) -> Result<Outcome> {
        match e {
            Experiment::FamilyCheck => self.family_check(),
            Experiment::Decay => self.decay(),
            Experiment::BesovBound => self.besov_bound(),
            Experiment::TlDiverge => self.tl_diverge(),
            Experiment::Multiplier => self.multiplier(),
            Experiment::DisjointSum => self.disjoint_sum(),
            Experiment::ConvIneq => self.conv_ineq(),
            Experiment::VectorValued => self.vector_valued(),
            Experiment::All => unreachable!("expanded by run"),
        }
    }

    fn family_check(&self) -> Result<Outcome> {
        let fam = &self.fam;
        let g = &self.grid;
        let mut report = Report::default();

        let mut acc = vec![0.0; g.len()];
        let mut telescoping = 0.0f64;
        for j in 0..=fam.jmax() {
            for &(i, v) in fam.entries(j)? {
                acc[i as usize] += v;
            }
            let scale = 2f64.powi(-(j as i32));
            for (i, a) in acc.iter().enumerate() {
                let want = fam.profile().value(g.frequency_norm(i) * scale);
                telescoping = telescoping.max((a - want).abs());
            }
        }
        report.push(Check::at_most(
            "family-check.telescoping",
            telescoping,
            tol::TELESCOPING,
        ));

        let mut outside = 0usize;
        let mut adjacent = 0.0f64;
        let mut asymmetry = 0.0f64;
        for j in 1..=fam.jmax() {
            let lo = 2f64.powi(j as i32 - 1);
            let hi = 2f64.powi(j as i32 + 1);
            for &(i, v) in fam.entries(j)? {
                let xi = g.frequency(i as usize);
                let r = g.frequency_norm(i as usize);
                if !(r > lo && r < hi) {
                    outside += 1;
                }
                let around = fam.radial(j - 1, r) + v + fam.radial(j + 1, r);
                adjacent = adjacent.max((v * around - v).abs());
                let mirror = fam.symbol(j, &[-xi[0], -xi[1]][..g.dim()]);
                asymmetry = asymmetry.max((mirror - v).abs());
            }
        }
        report.push(Check::at_most(
            "family-check.support_violations",
            outside as f64,
            0.0,
        ));
        report.push(Check::at_most(
            "family-check.adjacent_identity",
            adjacent,
            tol::ADJACENT_BANDS,
        ));
        report.push(Check::at_most(
            "family-check.radial_symmetry",
            asymmetry,
            0.0,
        ));

        let chi = build_chi(g, self.ys.mu0())?;
        let tail = spectral_tail(&chi, 2f64.powi(fam.jmax() as i32 - 1));
        report.push(Check::at_most(
            "family-check.chi_spectral_tail",
            tail,
            1e-10,
        ));
        let k = fam.jmax() - 2;
        let atom = modulate(&chi, k as u32, &self.unit())?;
        let rec = reconstruct(&atom, fam)?;
        report.push(Check::at_most(
            "family-check.reconstruction_defect",
            rec.defect,
            1e-10,
        ));

        let stride = ((2f64.powi(fam.jmax() as i32 + 1) * g.period()) as usize / 1024).max(1);
        let mut buf = Vec::new();
        fam.write_band_csv(&mut buf, stride)?;
        let contents = String::from_utf8(buf).expect("ascii output");
        Ok(Outcome {
            table: NormTable::default(),
            report,
            artifacts: vec![Artifact {
                name: "family.csv".into(),
                contents,
            }],
        })
    }

    fn decay(&self) -> Result<Outcome> {
        let jmax = self.fam.jmax();
        let chi = build_chi(&self.grid, self.ys.mu0())?;
        let d = decay_matrix(&self.fam, &chi, jmax, jmax)?;
        let top_dist = 6.min(jmax - 3);
        let mut report = Report::default();
        if top_dist >= 3 {
            let slope = decay_slope(&d, 3..=jmax, 2..=top_dist);
            report.push(Check::at_most(
                "decay.slope_log2",
                slope,
                tol::DECAY_SLOPE_MAX,
            ));
        } else {
            report.push(Check::not_applicable(
                "decay.slope_log2",
                "Jmax too small for |j-k| in 2..=6",
            ));
        }
        let diag: Vec<f64> = (3..=jmax).map(|j| d[j][j]).collect();
        report.push(Check::at_least(
            "decay.diagonal_min",
            min_of(diag.iter().copied()),
            tol::DECAY_DIAGONAL.0,
        ));
        report.push(Check::at_most(
            "decay.diagonal_max",
            max_of(diag.iter().copied()),
            tol::DECAY_DIAGONAL.1,
        ));

        let mut rows = Vec::new();
        for (j, row) in d.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                rows.push(vec![j.to_string(), k.to_string(), num(*v)]);
            }
        }
        Ok(Outcome {
            table: NormTable::default(),
            report,
            artifacts: vec![Artifact {
                name: "decay.csv".into(),
                contents: plain_csv("j,k,sup", &rows),
            }],
        })
    }

    fn sweep(&mut self) -> Result<&[SweepPoint]> {
        if self.sweep.is_none() {
            let mut points = Vec::new();
            for np in self.cfg.params() {
                let Some(case) = Case::for_exponents(np.p, np.q) else {
                    continue;
                };
                if !self.cfg.case_enabled(case) {
                    continue;
                }
                for &atoms in &self.cfg.j_sweep {
                    points.push(self.sweep_point(case, np, atoms)?);
                }
            }
            self.sweep = Some(points);
        }
        Ok(self.sweep.as_deref().expect("filled above"))
    }

    fn sweep_point(&self, case: Case, np: NormParams, atoms: usize) -> Result<SweepPoint> {
        let spec = CounterexampleSpec::new(case, np.s, np.p, np.q, atoms, &self.ys)?;
        let f = build_f(&spec, &self.fam)?;
        let tf = apply_t(&f, &self.fam, &self.ys)?;
        let width = 2.0 * spec.mu0;
        let boundary = boundary_mass_fraction(&f, width).max(boundary_mass_fraction(&tf, width));
        let bf = Bands::decompose(&f, &self.fam)?;
        let bt = Bands::decompose(&tf, &self.fam)?;
        let (tl_f, tl_tf) = if np.p.is_infinite() {
            (bf.tl_infq(np.q, np.s)?, bt.tl_infq(np.q, np.s)?)
        } else {
            (bf.tl(&np)?, bt.tl(&np)?)
        };
        Ok(SweepPoint {
            case,
            np,
            atoms,
            besov_f: bf.besov(&np),
            tl_f,
            besov_tf: bt.besov(&np),
            tl_tf,
            oracle: oracle_norms(&spec),
            lower: lower_bound_check(&spec, &bt)?,
            boundary,
        })
    }

    fn table_for(&mut self, experiment: &str) -> Result<NormTable> {
        let rows = self
            .sweep()?
            .iter()
            .map(|pt| NormRow {
                experiment: experiment.into(),
                case: pt.case.name().into(),
                s: pt.np.s,
                p: pt.np.p,
                q: pt.np.q,
                atoms: pt.atoms,
                besov_f: pt.besov_f,
                tl_f: pt.tl_f,
                besov_tf: pt.besov_tf,
                tl_tf: pt.tl_tf,
                oracle_tl_tf_lo: pt.oracle.tl_tf.lower,
                oracle_tl_tf_hi: pt.oracle.tl_tf.upper,
                k_emp: pt.lower.k_emp,
                boundary_ok: pt.boundary <= tol::BOUNDARY_MASS,
            })
            .collect();
        Ok(NormTable { rows })
    }

    /// Sweep points grouped by norm triple, in configuration order.
    fn groups(&mut self) -> Result<Vec<(NormParams, Option<Vec<SweepPoint>>)>> {
        let params = self.cfg.params();
        let sweep = self.sweep()?.to_vec();
        Ok(params
            .into_iter()
            .map(|np| {
                let pts: Vec<SweepPoint> = sweep.iter().filter(|pt| pt.np == np).cloned().collect();
                (np, (!pts.is_empty()).then_some(pts))
            })
            .collect())
    }

    fn besov_bound(&mut self) -> Result<Outcome> {
        let mut report = Report::default();
        for (np, pts) in self.groups()? {
            let name = format!("besov-bound.{}", label(&np));
            let Some(pts) = pts else {
                report.push(Check::not_applicable(
                    name,
                    "no counterexample case for these exponents",
                ));
                continue;
            };
            let ratios: Vec<f64> = pts.iter().map(|pt| pt.besov_tf / pt.besov_f).collect();
            let spread = max_of(ratios.iter().copied()) / min_of(ratios.iter().copied()) - 1.0;
            report.push(Check::at_most(
                format!("{name}.spread"),
                spread,
                tol::BESOV_SPREAD,
            ));
            report.push(Check::at_most(
                format!("{name}.max_ratio"),
                max_of(ratios),
                tol::BESOV_RATIO_MAX,
            ));
        }

        let mut rng = self.rng(1);
        let fields = random_fields(&self.fam, self.cfg.random_fields, 8, &mut rng);
        let ps = [0.5, 1.0, 2.0];
        let mut norms_f = Vec::new();
        let mut norms_t = Vec::new();
        for f in &fields {
            let tf = apply_t(f, &self.fam, &self.ys)?;
            let bf = Bands::decompose(f, &self.fam)?;
            let bt = Bands::decompose(&tf, &self.fam)?;
            let per_p = |b: &Bands| -> Vec<Vec<f64>> {
                ps.iter()
                    .map(|&p| (0..=b.jmax()).map(|j| b.band_lp(j, p)).collect())
                    .collect()
            };
            norms_f.push(per_p(&bf));
            norms_t.push(per_p(&bt));
        }
        for s in [-1.0, 0.0, 1.0] {
            for (pi, p) in ps.iter().enumerate() {
                for q in [1.0, 2.0] {
                    let worst = max_of(norms_f.iter().zip(&norms_t).map(|(nf, nt)| {
                        Bands::besov_from_band_norms(&nt[pi], s, q)
                            / Bands::besov_from_band_norms(&nf[pi], s, q)
                    }));
                    let np = NormParams { s, p: *p, q };
                    report.push(Check::at_most(
                        format!("besov-bound.random.{}.max_ratio", label(&np)),
                        worst,
                        tol::BESOV_RATIO_MAX,
                    ));
                }
            }
        }

        let table = self.table_for("besov-bound")?;
        let contents = table.to_csv();
        Ok(Outcome {
            table,
            report,
            artifacts: vec![Artifact {
                name: "besov-bound.csv".into(),
                contents,
            }],
        })
    }

    fn tl_diverge(&mut self) -> Result<Outcome> {
        let mut report = Report::default();
        for (np, pts) in self.groups()? {
            let name = format!("tl-diverge.{}", label(&np));
            if np.p == np.q {
                report.push(Check::not_applicable(name, "p=q"));
                continue;
            }
            let Some(pts) = pts else {
                report.push(Check::not_applicable(name, "case disabled in config"));
                continue;
            };
            let ratios: Vec<f64> = pts.iter().map(|pt| pt.tl_tf / pt.tl_f).collect();
            if ratios.len() >= 2 {
                let step = min_of(ratios.windows(2).map(|w| w[1] / w[0]));
                report.push(Check::greater(format!("{name}.monotone_step"), step, 1.0));
                let first = &pts[0];
                let last = &pts[pts.len() - 1];
                let oracle = (last.oracle.tl_tf.mid() / last.oracle.tl_f.mid())
                    / (first.oracle.tl_tf.mid() / first.oracle.tl_f.mid());
                let measured = ratios[ratios.len() - 1] / ratios[0];
                report.push(Check::within(
                    format!("{name}.growth_J{}_over_J{}", last.atoms, first.atoms),
                    measured,
                    oracle * (1.0 - tol::TL_GROWTH),
                    oracle * (1.0 + tol::TL_GROWTH),
                ));
            } else {
                report.push(Check::not_applicable(
                    format!("{name}.growth"),
                    "single J in sweep",
                ));
            }

            let mut lo = f64::INFINITY;
            let mut hi = 0.0f64;
            for pt in &pts {
                let o = &pt.oracle;
                for (v, b) in [
                    (pt.besov_f, o.besov_f),
                    (pt.tl_f, o.tl_f),
                    (pt.besov_tf, o.besov_tf),
                    (pt.tl_tf, o.tl_tf),
                ] {
                    lo = lo.min(v / b.lower);
                    hi = hi.max(v / b.upper);
                }
            }
            report.push(Check::at_least(
                format!("{name}.bracket_low"),
                lo,
                tol::BRACKET_SLACK.0,
            ));
            report.push(Check::at_most(
                format!("{name}.bracket_high"),
                hi,
                tol::BRACKET_SLACK.1,
            ));
            report.push(Check::at_most(
                format!("{name}.boundary_mass"),
                max_of(pts.iter().map(|pt| pt.boundary)),
                tol::BOUNDARY_MASS,
            ));
            let last = &pts[pts.len() - 1];
            let k = last.lower.k_emp.map_or(f64::INFINITY, |k| k as f64);
            report.push(Check::at_most(
                format!("{name}.K_emp_J{}", last.atoms),
                k,
                tol::K_EMP_MAX as f64,
            ));
            if let Some(k) = last.lower.k_emp {
                let m = min_of(last.lower.margins[k - 1..].iter().copied());
                report.push(Check::at_least(
                    format!("{name}.margin_min"),
                    m,
                    tol::LOWER_BOUND_MARGIN,
                ));
            }
        }
        let table = self.table_for("tl-diverge")?;
        let contents = table.to_csv();
        Ok(Outcome {
            table,
            report,
            artifacts: vec![Artifact {
                name: "tl-diverge.csv".into(),
                contents,
            }],
        })
    }

    fn unit(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.grid.dim()];
        v[0] = 1.0;
        v
    }

    fn multiplier(&self) -> Result<Outcome> {
        let fam = &self.fam;
        let ys = &self.ys;
        let jmax = fam.jmax();
        let e1 = self.unit();
        let mut report = Report::default();
        let at = |r: f64| -> Vec<f64> { e1.iter().map(|c| c * r).collect() };

        report.push(Check::at_most(
            "multiplier.m_at_zero",
            multiplier_value(&at(0.0), ys, fam).norm(),
            0.0,
        ));
        let unimodular = max_of(
            (1..=jmax)
                .map(|j| (multiplier_value(&at(2f64.powi(j as i32)), ys, fam).norm() - 1.0).abs()),
        );
        report.push(Check::at_most(
            "multiplier.unimodular_at_dyadics",
            unimodular,
            1e-14,
        ));

        let mut ident = 0.0f64;
        for j in 1..=jmax {
            let g = grad_m_dyadic(j, &e1, ys, fam)?;
            let y = ys.y(j);
            let want = 2.0 * PI * y[0].hypot(y[1]);
            ident = ident.max((g - want).abs() / want);
        }
        report.push(Check::at_most(
            "multiplier.gradient_identity_rel",
            ident,
            tol::GRADIENT_IDENTITY,
        ));

        let mut fd = 0.0f64;
        for j in 1..=jmax {
            for t in [0.6, 0.75, 0.9, 1.0, 1.15, 1.3, 1.5, 1.7] {
                let xi = at(t * 2f64.powi(j as i32));
                let g = multiplier_gradient(&xi, ys, fam);
                let an = (g[0].norm_sqr() + g[1].norm_sqr()).sqrt();
                let num = grad_m_central_difference(&xi, ys, fam, tol::GRADIENT_FD_STEP);
                fd = fd.max((an - num).abs() / an.max(1.0));
            }
        }
        report.push(Check::at_most(
            "multiplier.gradient_fd_rel",
            fd,
            tol::GRADIENT_FD,
        ));

        let mut m_max = 0.0f64;
        for j in 1..=jmax {
            m_max = m_max.max(growth_scan(0, j, ys, fam, 512)?);
        }
        report.push(Check::at_most("multiplier.growth_k0_max", m_max, 2.0));
        let slope = growth_slope(ys, fam, 512)?;
        report.push(Check::at_most("multiplier.growth_k1_slope", slope, 1.0));
        let j = 8.min(jmax - 1);
        let g = growth_scan(1, j, ys, fam, 4096)?;
        let norm = |y: [f64; 2]| y[0].hypot(y[1]);
        let lo = 2.0 * PI * norm(ys.y(j - 1));
        let dmax: f64 = (j - 1..=j + 1)
            .map(|k| {
                max_of((0..4096).map(|i| {
                    let r = 2f64.powi(j as i32 - 1) * (1.0 + 3.0 * (i as f64 + 0.5) / 4096.0);
                    fam.radial_derivative(k, r).abs()
                }))
            })
            .sum();
        let hi = 2.0 * PI * norm(ys.y(j + 1)) + dmax;
        report.push(Check::within(
            format!("multiplier.growth_k1_j{j}"),
            g,
            lo,
            hi,
        ));

        let mut rng = self.rng(2);
        let fields = random_fields(fam, self.cfg.random_fields, 8, &mut rng);
        let mut consistency = 0.0f64;
        for f in &fields {
            let direct = apply_t(f, fam, ys)?;
            let via = crate::grid::spectral_multiplier(f, |xi| multiplier_value(xi, ys, fam));
            let scale = direct.max_abs();
            let err = max_of(
                direct
                    .values()
                    .iter()
                    .zip(via.values())
                    .map(|(a, b)| (a - b).norm()),
            );
            consistency = consistency.max(err / scale);
        }
        report.push(Check::at_most(
            "multiplier.spectral_consistency",
            consistency,
            tol::SPECTRAL_CONSISTENCY,
        ));

        let top = 2f64.powi(jmax as i32 + 1);
        let steps = 4096;
        let mut rows = Vec::with_capacity(steps + 1);
        for i in 0..=steps {
            let xi = at(top * i as f64 / steps as f64);
            let m = multiplier_value(&xi, ys, fam);
            let g = multiplier_gradient(&xi, ys, fam);
            rows.push(vec![
                num(xi[0]),
                num(m.re),
                num(m.im),
                num((g[0].norm_sqr() + g[1].norm_sqr()).sqrt()),
            ]);
        }
        Ok(Outcome {
            table: NormTable::default(),
            report,
            artifacts: vec![Artifact {
                name: "multiplier.csv".into(),
                contents: plain_csv("xi,re_m,im_m,abs_grad_m", &rows),
            }],
        })
    }

    fn disjoint_sum(&self) -> Result<Outcome> {
        let ys = &self.ys;
        let len = 10.min(ys.jmax());
        let mut rng = self.rng(3);
        let mut report = Report::default();
        let mut rows = Vec::new();

        // Half-size bump: supports B(y_j, 2 μ₀ / 2) of neighbours only touch.
        let chi = build_chi(&self.grid, ys.mu0() / 2.0)?;
        for (tag, r) in [("1", 1.0), ("2", 2.0), ("inf", f64::INFINITY)] {
            let norm = lp_quadrature(&chi, r)?;
            let single = disjoint_sum_ratio(&[1.0], &chi, ys, r)?;
            report.push(Check::at_most(
                format!("disjoint-sum.chi.r={tag}.single_rel"),
                (single - norm).abs() / norm,
                1e-12,
            ));
            let mut worst = 0.0f64;
            for trial in 0..10 {
                let b: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let ratio = disjoint_sum_ratio(&b, &chi, ys, r)?;
                worst = worst.max(ratio / norm);
                rows.push(vec![
                    "chi".into(),
                    tag.into(),
                    trial.to_string(),
                    num(ratio),
                    num(norm),
                ]);
            }
            let ones = disjoint_sum_ratio(&vec![1.0; len], &chi, ys, r)? / norm;
            worst = worst.max(ones);
            report.push(Check::at_most(
                format!("disjoint-sum.chi.r={tag}.ratio_over_norm"),
                worst,
                1.0 + tol::DISJOINT_SUM,
            ));
        }

        let kernel = SampledField::from_spectrum(
            &self.grid,
            self.fam
                .dense_band(5.min(self.fam.jmax()))?
                .into_iter()
                .map(|v| Complex64::new(v, 0.0))
                .collect(),
        )?;
        let mut worst = 0.0f64;
        for trial in 0..50 {
            let b: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let ratio = disjoint_sum_ratio(&b, &kernel, ys, 1.0)?;
            worst = worst.max(ratio);
            rows.push(vec![
                "phi5".into(),
                "1".into(),
                trial.to_string(),
                num(ratio),
                String::new(),
            ]);
        }
        report.push(Check::at_most(
            "disjoint-sum.phi5.r=1.max_ratio",
            worst,
            tol::KERNEL_SUM_REGRESSION,
        ));

        Ok(Outcome {
            table: NormTable::default(),
            report,
            artifacts: vec![Artifact {
                name: "disjoint-sum.csv".into(),
                contents: plain_csv("phi,r,trial,ratio,phi_norm", &rows),
            }],
        })
    }

    fn conv_ineq(&self) -> Result<Outcome> {
        // The inequality is pointwise in x, so a coarse grid is enough.
        let grid = GridSpec::new(self.grid.dim(), self.grid.period(), conv_points(&self.grid))?;
        let jmax = grid.max_band().unwrap_or(0).min(3);
        let fam = LpFamily::build(&grid, jmax, self.cfg.eps0)?;
        let mut rng = self.rng(4);
        let mut report = Report::default();
        let mut rows = Vec::new();
        let sequence = |rng: &mut ChaCha8Rng| -> Vec<SampledField> {
            random_fields(&fam, 8, 3, rng).iter().map(modulus).collect()
        };
        let inf = f64::INFINITY;
        for delta in [1.0, 2.0] {
            let bound = young_bound(delta) + tol::YOUNG_SLACK;
            for p in [1.0, 2.0, inf] {
                for q in [1.0, 2.0, inf] {
                    let np = NormParams { s: 0.0, p, q };
                    let mut worst = 0.0f64;
                    for trial in 0..10 {
                        let r = conv_inequality_ratio(&sequence(&mut rng), delta, &np)?;
                        worst = worst.max(r);
                        rows.push(vec![num(p), num(q), num(delta), trial.to_string(), num(r)]);
                    }
                    report.push(Check::at_most(
                        format!(
                            "conv-ineq.delta={delta}.p={},q={}.max_ratio",
                            num(p),
                            num(q)
                        ),
                        worst,
                        bound,
                    ));
                }
            }
        }
        let np = NormParams {
            s: 0.0,
            p: 0.5,
            q: 2.0,
        };
        let mut worst = 0.0f64;
        for trial in 0..50 {
            let r = conv_inequality_ratio(&sequence(&mut rng), 2.0, &np)?;
            worst = worst.max(r);
            rows.push(vec![
                num(0.5),
                num(2.0),
                num(2.0),
                trial.to_string(),
                num(r),
            ]);
        }
        report.push(Check::at_most(
            "conv-ineq.delta=2.p=0.5,q=2.max_ratio",
            worst,
            tol::CONV_HALF_REGRESSION,
        ));
        Ok(Outcome {
            table: NormTable::default(),
            report,
            artifacts: vec![Artifact {
                name: "conv-ineq.csv".into(),
                contents: plain_csv("p,q,delta,trial,ratio", &rows),
            }],
        })
    }

    fn vector_valued(&self) -> Result<Outcome> {
        let mut report = Report::default();
        let mut rows = Vec::new();
        for q in [1.0, 2.0, 4.0] {
            // q < 2: dispersed input stacked by T; q > 2: the reverse.
            let (case, a_all, big, small) = if q < 2.0 {
                (
                    Case::Pgt,
                    weight_sequence(Case::Pgt, 2.0, q, self.max_sweep())?,
                    1.0,
                    2.0,
                )
            } else if q > 2.0 {
                (
                    Case::Plt,
                    weight_sequence(Case::Plt, 2.0, q, self.max_sweep())?,
                    2.0,
                    q,
                )
            } else {
                (
                    Case::Plt,
                    weight_sequence(Case::Plt, 2.0, 4.0, self.max_sweep())?,
                    2.0,
                    2.0,
                )
            };
            let mut measured = Vec::new();
            for &atoms in &self.cfg.j_sweep {
                let a = &a_all[..atoms];
                let (inp, out) = vector_valued_ratio(a, case, &self.ys, q, &self.fam)?;
                let oracle = lq_norm(a, big) / lq_norm(a, small);
                measured.push((atoms, out / inp, oracle));
                rows.push(vec![
                    num(q),
                    atoms.to_string(),
                    num(inp),
                    num(out),
                    num(out / inp),
                    num(oracle),
                ]);
            }
            let name = format!("vector-valued.q={}", num(q));
            if q == 2.0 {
                let (lo, hi) = tol::VECTOR_L2_RANGE;
                report.push(Check::at_least(
                    format!("{name}.ratio_min"),
                    min_of(measured.iter().map(|m| m.1)),
                    lo,
                ));
                report.push(Check::at_most(
                    format!("{name}.ratio_max"),
                    max_of(measured.iter().map(|m| m.1)),
                    hi,
                ));
            } else if measured.len() >= 2 {
                let (f, l) = (measured[0], measured[measured.len() - 1]);
                let oracle = l.2 / f.2;
                report.push(Check::within(
                    format!("{name}.growth_J{}_over_J{}", l.0, f.0),
                    l.1 / f.1,
                    oracle * (1.0 - tol::VECTOR_GROWTH),
                    oracle * (1.0 + tol::VECTOR_GROWTH),
                ));
            } else {
                report.push(Check::not_applicable(
                    format!("{name}.growth"),
                    "single J in sweep",
                ));
            }
        }
        Ok(Outcome {
            table: NormTable::default(),
            report,
            artifacts: vec![Artifact {
                name: "vector-valued.csv".into(),
                contents: plain_csv("q,J,input_norm,output_norm,ratio,oracle_ratio", &rows),
            }],
        })
    }

    fn max_sweep(&self) -> usize {
        *self.cfg.j_sweep.last().expect("validated non-empty")
    }
}

/// Points per axis for the coarse convolution-inequality grid.
fn conv_points(grid: &GridSpec) -> usize {
    let target = if grid.dim() == 1 { 4096 } else { 64 };
    grid.points().min(target)
}
