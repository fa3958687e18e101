//! One function per subcommand, each filling an [`Artifacts`] bundle.

use std::f64::consts::{FRAC_PI_2, PI};

use discrete_pw::lattice::max_holomorphicity_residual;
use discrete_pw::sampling::inequalities::{bernstein_check, wirtinger_check};
use discrete_pw::sampling::{
    beurling_lower_density, gaps, is_two_progression, necessary_condition, reconstruct, sample,
    sampling_inequality_check, sufficient_condition, DensityReport,
};
use discrete_pw::spectral::checks::{
    anchor_identity_check, decimate_check, growth_envelope_check, plancherel_polya_check,
};
use discrete_pw::spectral::{
    analyze, grid_kernel, kernel, kernel_closed_form, project, projection_mode, reproduce,
    synthesize, KernelQuery, ProjectionMode,
};
use discrete_pw::testfns::{bump_spectrum, indicator, random_bumps, single_frequency, Bump};
use discrete_pw::{
    BandParameters, Error, LatticePoint, PWFunction, Parity, ReconstructionReport, SamplingSet,
    SpectralFunction, Window,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::config::{ExperimentConfig, FSpec, LambdaSpec};
use crate::error::{context, CliError};
use crate::output::{Artifacts, Cell, Table};

/// Residual bound for synthesized functions, relative to max |F|.
pub const HOLOMORPHY_REL: f64 = 1e-12;
/// Quadrature kernel against the closed form.
pub const KERNEL_TOL: f64 = 1e-6;
/// Relative tolerance on exact-in-exact-arithmetic identities of the periodic model.
pub const PERIODIC_TOL: f64 = 1e-8;

const STREAM_F: u64 = 1;
const STREAM_LAMBDA: u64 = 2;
const STREAM_NOISE: u64 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Synth,
    Analyze,
    Kernel { center: LatticePoint, radius: i64 },
    Project { noise: f64 },
    Sample,
    Reconstruct { sweep: Vec<i64> },
    Verify,
    Density { r_max: Option<i64> },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Synth => "synth",
            Command::Analyze => "analyze",
            Command::Kernel { .. } => "kernel",
            Command::Project { .. } => "project",
            Command::Sample => "sample",
            Command::Reconstruct { .. } => "reconstruct",
            Command::Verify => "verify",
            Command::Density { .. } => "density",
        }
    }
}

/// Validates `cfg`, runs `cmd` and keeps the outputs `cfg.outputs` asks for.
pub fn run(cfg: &ExperimentConfig, cmd: &Command) -> Result<Artifacts, CliError> {
    cfg.validate()?;
    let s = Setup::new(cfg)?;
    let mut a = Artifacts::new(&cfg.name, Some(s.seed));
    match cmd {
        Command::Synth => synth(&s, &mut a)?,
        Command::Analyze => analyze_cmd(&s, &mut a)?,
        Command::Kernel { center, radius } => kernel_cmd(&s, &mut a, *center, *radius)?,
        Command::Project { noise } => project_cmd(&s, &mut a, *noise)?,
        Command::Sample => sample_cmd(&s, &mut a)?,
        Command::Reconstruct { sweep } => reconstruct_cmd(&s, &mut a, sweep)?,
        Command::Verify => verify_suite(&s, &mut a)?,
        Command::Density { r_max } => density_cmd(&s, &mut a, *r_max)?,
    }
    a.select(&cfg.outputs, cmd.name())?;
    Ok(a)
}

/// Runs the full checker suite on `cfg`.
pub fn verify(cfg: &ExperimentConfig) -> Result<Artifacts, CliError> {
    run(cfg, &Command::Verify)
}

struct Setup<'a> {
    cfg: &'a ExperimentConfig,
    band: BandParameters,
    window: Window,
    seed: u64,
    periodic: bool,
}

impl<'a> Setup<'a> {
    fn new(cfg: &'a ExperimentConfig) -> Result<Self, CliError> {
        let window = cfg.resolved_window()?;
        let periodic = matches!(
            projection_mode(&window, cfg.l).map_err(context(&cfg.name, "window"))?,
            ProjectionMode::Periodic
        );
        Ok(Setup {
            cfg,
            band: cfg.band()?,
            window,
            seed: cfg.seed.unwrap_or(0),
            periodic,
        })
    }

    fn ctx(&self, field: &str) -> impl Fn(Error) -> CliError {
        context(&self.cfg.name, field)
    }

    fn rng(&self, seed: u64, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        r.set_stream(stream);
        r
    }

    fn spectrum(&self) -> Result<SpectralFunction, CliError> {
        let (band, l) = (&self.band, self.cfg.l);
        let f = match &self.cfg.f_spec {
            FSpec::Bump { bumps, random } => {
                let mut all = bumps.clone();
                if *random {
                    all.extend(random_bumps(&mut self.rng(self.seed, STREAM_F), band));
                }
                if all.is_empty() {
                    all.push(Bump::centered(band));
                }
                bump_spectrum(band, l, &all)
            }
            FSpec::Indicator => indicator(band, l),
            FSpec::SingleFrequency { index, amplitude } => {
                single_frequency(band, l, *index, *amplitude)
            }
            FSpec::CustomGrid { values } => SpectralFunction::new(*band, values.clone()),
        };
        f.map_err(self.ctx("f_spec"))
    }

    fn function(&self) -> Result<(SpectralFunction, PWFunction), CliError> {
        let spec = self.spectrum()?;
        let f = synthesize(&spec, self.window).map_err(self.ctx("window"))?;
        Ok((spec, f))
    }

    fn sampling_set(&self) -> Result<SamplingSet, CliError> {
        let (lo, hi) = (self.window.m_min, self.window.m_max);
        let s = match &self.cfg.lambda_spec {
            LambdaSpec::Full => SamplingSet::full(lo, hi),
            LambdaSpec::TwoProgression { delta_e, delta_o } => {
                SamplingSet::two_progression(lo, hi, *delta_e, *delta_o)
            }
            LambdaSpec::RandomGaps {
                delta_e, delta_o, ..
            } => {
                let seed = self
                    .cfg
                    .lambda_seed()
                    .expect("validated: random_gaps has a seed");
                SamplingSet::random_gaps(
                    &mut self.rng(seed, STREAM_LAMBDA),
                    lo,
                    hi,
                    *delta_e,
                    *delta_o,
                )
            }
            LambdaSpec::Explicit { points } => gaps(points, lo, hi),
        };
        s.map_err(self.ctx("lambda_spec"))
    }

    fn density_target(&self) -> f64 {
        2.0 * self.band.alpha() / PI
    }
}

fn complex_row(lead: Vec<Cell>, z: Complex64) -> Vec<Cell> {
    let mut row = lead;
    row.push(z.re.into());
    row.push(z.im.into());
    row
}

fn l2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

fn synth(s: &Setup, a: &mut Artifacts) -> Result<(), CliError> {
    let (spec, f) = s.function()?;
    let sup = f.grid().sup_norm();
    let residual = max_holomorphicity_residual(f.grid()).map_err(s.ctx("window"))?;
    let ok = residual <= HOLOMORPHY_REL * sup;
    a.report(
        "synth",
        &json!({
            "alpha": s.band.alpha(),
            "L": s.cfg.l,
            "window": s.window,
            "periodic": s.periodic,
            "sup_norm": sup,
            "layer0_norm": f.layer0_norm(),
            "spectral_norm": spec.l2_norm(),
            "max_holomorphicity_residual": residual,
            "residual_bound": HOLOMORPHY_REL * sup,
            "ok": ok,
        }),
    );
    a.check("synth.holomorphicity", ok);
    a.report("spectrum", &spec);
    let mut t = Table::new(&["m", "n", "re", "im"]);
    for n in s.window.ns() {
        let layer = f.grid().layer(n).map_err(s.ctx("window"))?;
        for (m, z) in s.window.ms().zip(layer) {
            t.push(complex_row(vec![m.into(), n.into()], *z));
        }
    }
    a.table("grid", t);
    Ok(())
}

fn analyze_cmd(s: &Setup, a: &mut Artifacts) -> Result<(), CliError> {
    let (spec, f) = s.function()?;
    let an = analyze(&f, s.cfg.l).map_err(s.ctx("L"))?;
    let peak = spec.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let recovery = spec
        .values()
        .iter()
        .zip(an.spectrum.values())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    let leakage = if an.total_mass == 0.0 {
        0.0
    } else {
        an.out_of_band_mass / an.total_mass
    };
    let ok = !s.periodic || recovery <= PERIODIC_TOL * peak;
    a.report(
        "analysis",
        &json!({
            "alpha": s.band.alpha(),
            "L": s.cfg.l,
            "periodic": s.periodic,
            "out_of_band_mass": an.out_of_band_mass,
            "total_mass": an.total_mass,
            "relative_leakage": leakage,
            "recovery_error": recovery,
            "peak": peak,
            "ok": ok,
        }),
    );
    a.check("analysis.recovery", ok);
    let grid = an.spectrum.grid();
    let mut t = Table::new(&["j", "t", "re", "im"]);
    for (j, z) in an.spectrum.values().iter().enumerate() {
        t.push(complex_row(vec![j.into(), grid.point(j).into()], *z));
    }
    a.report("spectrum", &an.spectrum);
    a.table("spectrum", t);
    Ok(())
}

fn kernel_cmd(
    s: &Setup,
    a: &mut Artifacts,
    center: LatticePoint,
    radius: i64,
) -> Result<(), CliError> {
    if radius < 0 {
        return Err(CliError::Config {
            experiment: s.cfg.name.clone(),
            field: "radius".into(),
            message: format!("{radius} must be non-negative"),
        });
    }
    let mut t = Table::new(&[
        "d",
        "quadrature_re",
        "quadrature_im",
        "grid_re",
        "grid_im",
        "closed_form",
    ]);
    let (mut quad_err, mut grid_err) = (0.0f64, 0.0f64);
    let mut diagonal = Complex64::new(0.0, 0.0);
    for d in -radius..=radius {
        let q = KernelQuery::new(center, LatticePoint::new(center.m + d, -center.n));
        let kq = kernel(q, &s.band, s.cfg.l).map_err(s.ctx("L"))?;
        let kg = grid_kernel(q, &s.band, s.cfg.l).map_err(s.ctx("L"))?;
        let exact = kernel_closed_form(d, &s.band);
        quad_err = quad_err.max((kq - exact).norm());
        grid_err = grid_err.max((kg - exact).norm());
        if d == 0 {
            diagonal = kq;
        }
        t.push(vec![
            d.into(),
            kq.re.into(),
            kq.im.into(),
            kg.re.into(),
            kg.im.into(),
            exact.into(),
        ]);
    }
    let ok = quad_err <= KERNEL_TOL;
    a.report(
        "kernel",
        &json!({
            "alpha": s.band.alpha(),
            "L": s.cfg.l,
            "center": center,
            "radius": radius,
            "diagonal": diagonal,
            "diagonal_expected": s.density_target(),
            "max_quadrature_error": quad_err,
            "max_grid_error": grid_err,
            "tolerance": KERNEL_TOL,
            "ok": ok,
        }),
    );
    a.check("kernel.closed_form", ok);
    a.table("kernel", t);
    Ok(())
}

fn project_cmd(s: &Setup, a: &mut Artifacts, noise: f64) -> Result<(), CliError> {
    if !(noise.is_finite() && noise >= 0.0) {
        return Err(CliError::Config {
            experiment: s.cfg.name.clone(),
            field: "noise".into(),
            message: format!("{noise} must be a non-negative number"),
        });
    }
    let (_, f) = s.function()?;
    let clean = f.layer0();
    let scale = noise * f.grid().sup_norm();
    let mut rng = s.rng(s.seed, STREAM_NOISE);
    let g: Vec<Complex64> = clean
        .iter()
        .map(|z| z + scale * Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let p = project(&g, s.window, &s.band, s.cfg.l).map_err(s.ctx("window"))?;
    let pp = project(p.layer0(), s.window, &s.band, s.cfg.l).map_err(s.ctx("window"))?;
    let (input, output) = (l2(&g), l2(p.layer0()));
    let noise_norm = distance(&g, clean);
    let error = distance(p.layer0(), clean);
    let idempotence = distance(pp.layer0(), p.layer0());
    let nonexpansive = output <= input * (1.0 + PERIODIC_TOL);
    let exact = !s.periodic
        || (idempotence <= PERIODIC_TOL * output.max(f64::MIN_POSITIVE)
            && error <= noise_norm * (1.0 + PERIODIC_TOL) + PERIODIC_TOL * l2(clean));
    a.report(
        "projection",
        &json!({
            "periodic": s.periodic,
            "noise": noise,
            "input_norm": input,
            "output_norm": output,
            "noise_norm": noise_norm,
            "distance_to_f": error,
            "idempotence_error": idempotence,
            "nonexpansive": nonexpansive,
            "ok": nonexpansive && exact,
        }),
    );
    a.check("projection.nonexpansive", nonexpansive);
    a.check("projection.periodic_identities", exact);
    let mut t = Table::new(&["m", "input_re", "input_im", "re", "im"]);
    for ((m, x), y) in s.window.ms().zip(&g).zip(p.layer0()) {
        t.push(complex_row(vec![m.into(), x.re.into(), x.im.into()], *y));
    }
    a.table("projected", t);
    Ok(())
}

#[derive(Serialize)]
struct SetSummary {
    points: usize,
    delta_e: i64,
    delta_o: i64,
    delta: i64,
    sufficient: bool,
    necessary: bool,
    two_progression: bool,
    max_gap_bound: f64,
    density_target: f64,
    lambda_seed: Option<u64>,
}

fn summarize(s: &Setup, set: &SamplingSet) -> SetSummary {
    SetSummary {
        points: set.len(),
        delta_e: set.delta_e(),
        delta_o: set.delta_o(),
        delta: set.delta(),
        sufficient: sufficient_condition(set, &s.band),
        necessary: necessary_condition(set, &s.band),
        two_progression: is_two_progression(set),
        max_gap_bound: s.band.max_gap(),
        density_target: s.density_target(),
        lambda_seed: s.cfg.lambda_seed(),
    }
}

fn sample_cmd(s: &Setup, a: &mut Artifacts) -> Result<(), CliError> {
    let (_, f) = s.function()?;
    let set = s.sampling_set()?;
    let values = sample(&f, &set).map_err(s.ctx("lambda_spec"))?;
    let ratio = sampling_inequality_check(&f, &set).map_err(s.ctx("lambda_spec"))?;
    a.report("sampling_set", &set);
    a.report(
        "sample",
        &json!({
            "set": summarize(s, &set),
            "sampling_ratio": ratio.ratio,
            "upper_ok": ratio.upper_ok,
            "zero_function": ratio.zero_function,
            "ok": ratio.upper_ok,
        }),
    );
    a.check("sample.upper_inequality", ratio.upper_ok);
    let mut t = Table::new(&["m", "re", "im"]);
    for (&m, z) in set.lambda().iter().zip(&values) {
        t.push(complex_row(vec![m.into()], *z));
    }
    a.table("samples", t);
    Ok(())
}

#[derive(Serialize)]
struct ReconstructionSummary {
    #[serde(flatten)]
    report: ReconstructionReport,
    set: SetSummary,
    relative_error: f64,
    ok: bool,
}

/// Runs one reconstruction of `f` from `set` and checks what the sufficient
/// condition promises: per-step contraction by the bound and an honest tail estimate.
fn reconstruct_one(
    s: &Setup,
    f: &PWFunction,
    set: &SamplingSet,
) -> Result<ReconstructionSummary, CliError> {
    let values = sample(f, set).map_err(s.ctx("lambda_spec"))?;
    let (g, report) = reconstruct(
        &values,
        set,
        &s.band,
        s.window,
        s.cfg.l,
        s.cfg.tol,
        s.cfg.max_iter,
    )
    .map_err(|e| {
        let field = match e {
            Error::NotPeriodic { .. } => "window",
            Error::NoConvergence { .. } => "max_iter",
            _ => "lambda_spec",
        };
        s.ctx(field)(e)
    })?;
    let norm = f.layer0_norm();
    let relative_error = if norm == 0.0 {
        l2(g.layer0())
    } else {
        distance(g.layer0(), f.layer0()) / norm
    };
    let ok = !report.guarantee
        || (report.converged
            && report.measured_ratio <= report.bound_ratio * (1.0 + 1e-6)
            && relative_error <= report.final_error * 1.01 + 1e-12);
    Ok(ReconstructionSummary {
        report,
        set: summarize(s, set),
        relative_error,
        ok,
    })
}

fn reconstruct_cmd(s: &Setup, a: &mut Artifacts, sweep: &[i64]) -> Result<(), CliError> {
    let (_, f) = s.function()?;
    let set = s.sampling_set()?;
    let run = reconstruct_one(s, &f, &set)?;
    a.check("reconstruction", run.ok);
    let mut t = Table::new(&["iteration", "residual", "ratio"]);
    let res = &run.report.residuals;
    for (k, r) in res.iter().enumerate() {
        let ratio = if k == 0 || res[k - 1] == 0.0 {
            f64::NAN
        } else {
            r / res[k - 1]
        };
        t.push(vec![k.into(), (*r).into(), ratio.into()]);
    }
    a.report("reconstruction", &run);
    a.table("convergence", t);

    if !sweep.is_empty() {
        let mut t = Table::new(&[
            "delta",
            "sufficient",
            "necessary",
            "converged",
            "iterations",
            "measured_ratio",
            "bound_ratio",
            "final_error",
            "relative_error",
        ]);
        for &d in sweep {
            let set = SamplingSet::two_progression(s.window.m_min, s.window.m_max, d, d)
                .map_err(s.ctx("sweep"))?;
            let r = reconstruct_one(s, &f, &set)?;
            a.check(&format!("sweep.delta_{d}"), r.ok);
            t.push(vec![
                d.into(),
                r.set.sufficient.into(),
                r.set.necessary.into(),
                r.report.converged.into(),
                r.report.iterations.into(),
                r.report.measured_ratio.into(),
                r.report.bound_ratio.into(),
                r.report.final_error.into(),
                r.relative_error.into(),
            ]);
        }
        a.table("sweep", t);
    }
    Ok(())
}

fn default_r_max(set: &SamplingSet) -> i64 {
    let (lo, hi) = set.m_range();
    ((hi - lo) / 4).max(1)
}

fn density_cmd(s: &Setup, a: &mut Artifacts, r_max: Option<i64>) -> Result<(), CliError> {
    let set = s.sampling_set()?;
    let r_max = r_max.unwrap_or_else(|| default_r_max(&set));
    let rep: DensityReport = beurling_lower_density(&set, r_max).map_err(s.ctx("r_max"))?;
    let mut t = Table::new(&["r", "density"]);
    for &(r, d) in &rep.trajectory {
        t.push(vec![r.into(), d.into()]);
    }
    a.report(
        "density",
        &json!({
            "r_max": rep.r_max,
            "density": rep.density,
            "set": summarize(s, &set),
            "meets_target": rep.density >= s.density_target(),
        }),
    );
    a.table("density", t);
    Ok(())
}

/// One line of the verification suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteEntry {
    pub name: String,
    pub lhs: f64,
    pub bound: f64,
    pub ok: bool,
    pub tolerance: f64,
    /// Whether a failure contradicts a proven statement, as opposed to a diagnostic.
    pub guaranteed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SuiteEntry {
    fn new(name: &str, lhs: f64, bound: f64, tolerance: f64, guaranteed: bool) -> Self {
        SuiteEntry {
            name: name.into(),
            lhs,
            bound,
            ok: lhs <= bound * (1.0 + tolerance),
            tolerance,
            guaranteed,
            note: None,
        }
    }

    fn with_ok(mut self, ok: bool) -> Self {
        self.ok = ok;
        self
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

fn suite_entries(
    s: &Setup,
    f: &PWFunction,
    spec: &SpectralFunction,
) -> Result<Vec<SuiteEntry>, CliError> {
    let w = s.window;
    let sup = f.grid().sup_norm();
    let layer0 = f.layer0();
    let mut out = Vec::new();

    let residual = max_holomorphicity_residual(f.grid()).map_err(s.ctx("window"))?;
    out.push(SuiteEntry::new(
        "holomorphicity",
        residual,
        HOLOMORPHY_REL * sup,
        0.0,
        true,
    ));

    let fnorm = spec.l2_norm();
    let iso = (f.layer0_norm() - fnorm / (2.0 * PI).sqrt()).abs();
    let mut e = SuiteEntry::new("isometry", iso, PERIODIC_TOL * fnorm, 0.0, s.periodic);
    if !s.periodic {
        e = e.note("window truncates the height-0 sequence");
    }
    out.push(e);

    let probes = [
        LatticePoint::new(0, 0),
        LatticePoint::new(w.m_min, 0),
        LatticePoint::new(w.m_max, w.n_max),
        LatticePoint::new((w.m_min + w.m_max) / 3, w.n_min),
    ];
    let mut worst = 0.0f64;
    for p in probes.into_iter().filter(|p| w.contains(*p)) {
        let r = reproduce(f, p, s.cfg.l).map_err(s.ctx("window"))?;
        let v = f.get(p).map_err(s.ctx("window"))?;
        worst = worst.max((r - v).norm());
    }
    let mut e = SuiteEntry::new(
        "kernel_reproduction",
        worst,
        PERIODIC_TOL * sup.max(f64::MIN_POSITIVE),
        0.0,
        s.periodic,
    );
    if !s.periodic {
        e = e.note("quadrature kernel summed over a truncated window");
    }
    out.push(e);

    let mut worst: Option<(f64, SuiteEntry)> = None;
    let mut all_ok = true;
    for n in w.ns() {
        let r = plancherel_polya_check(f, n).map_err(s.ctx("window"))?;
        all_ok &= r.ok;
        let q = if r.bound == 0.0 { 0.0 } else { r.lhs / r.bound };
        if worst.as_ref().is_none_or(|(best, _)| q > *best) {
            let e = SuiteEntry::new("plancherel_polya", r.lhs, r.bound, r.tolerance, true)
                .note(format!("worst layer n = {n}"));
            worst = Some((q, e));
        }
    }
    if let Some((_, e)) = worst {
        out.push(e.with_ok(all_ok));
    }

    for order in [1u32, 2] {
        let r = bernstein_check(f, order).map_err(s.ctx("window"))?;
        out.push(
            SuiteEntry::new(
                &format!("bernstein_{order}"),
                r.lhs,
                r.bound,
                1e-8,
                s.periodic,
            )
            .with_ok(r.ok),
        );
    }

    // F(·,0) on the window with the chord through its endpoints removed
    let n = layer0.len() - 1;
    let (first, last) = (layer0[0], layer0[n]);
    let mut chord: Vec<Complex64> = layer0
        .iter()
        .enumerate()
        .map(|(k, z)| {
            let x = k as f64 / n as f64;
            z - first * (1.0 - x) - last * x
        })
        .collect();
    chord[0] = Complex64::new(0.0, 0.0);
    chord[n] = Complex64::new(0.0, 0.0);
    let r = wirtinger_check(&chord).map_err(s.ctx("window"))?;
    out.push(SuiteEntry::new("wirtinger", r.lhs, r.bound, r.tolerance, true).with_ok(r.ok));

    if w.n_max >= 1 {
        match anchor_identity_check(f, 1) {
            Ok(r) => out.push(
                SuiteEntry::new("anchor_identity", r.difference, r.tail_estimate, 0.0, true)
                    .with_ok(r.ok),
            ),
            Err(Error::SlowDecay) => out.push(
                SuiteEntry::new("anchor_identity", f64::NAN, f64::NAN, 0.0, false)
                    .with_ok(false)
                    .note("height-0 values do not decay fast enough to bound the tail"),
            ),
            Err(e) => return Err(s.ctx("window")(e)),
        }
    }

    let mut identity = 0.0f64;
    for parity in [Parity::Even, Parity::Odd] {
        let r = decimate_check(f, parity).map_err(s.ctx("window"))?;
        identity = identity.max(r.band_identity_error);
        out.push(
            SuiteEntry::new(
                &format!("decimation_{parity}"),
                r.relative_leakage(),
                1e-8,
                0.0,
                false,
            )
            .note("leakage of the window-truncated decimated sequence"),
        );
    }
    out.push(SuiteEntry::new(
        "decimation_band_identity",
        identity,
        1e-12,
        0.0,
        true,
    ));

    let set = s.sampling_set()?;
    let r_max = default_r_max(&set);
    let d = beurling_lower_density(&set, r_max).map_err(s.ctx("lambda_spec"))?;
    out.push(
        SuiteEntry::new("density", s.density_target(), d.density, 0.0, false).note(format!(
            "2α/π against the lower density proxy at r = {r_max}"
        )),
    );

    let r = sampling_inequality_check(f, &set).map_err(s.ctx("lambda_spec"))?;
    out.push(SuiteEntry::new("sampling_inequality", r.ratio, 1.0, 0.0, true).with_ok(r.upper_ok));

    let eps = (FRAC_PI_2 - s.band.alpha()) / 2.0;
    let fit = growth_envelope_check(f, 4, eps).map_err(s.ctx("alpha"))?;
    out.push(
        SuiteEntry::new("growth_envelope", fit.c, fit.c_inner, 0.0, false)
            .with_ok(fit.is_stable())
            .note("k = 4 envelope constant on the whole window against the inner half"),
    );
    Ok(out)
}

/// Every checker on the configured function; one report per checker plus
/// the aggregate `verify` report.
fn verify_suite(s: &Setup, a: &mut Artifacts) -> Result<(), CliError> {
    let (spec, f) = s.function()?;
    let entries = suite_entries(s, &f, &spec)?;
    let failed: Vec<&str> = entries
        .iter()
        .filter(|e| e.guaranteed && !e.ok)
        .map(|e| e.name.as_str())
        .collect();
    let diagnostics: Vec<&str> = entries
        .iter()
        .filter(|e| !e.guaranteed && !e.ok)
        .map(|e| e.name.as_str())
        .collect();
    let mut t = Table::new(&["name", "lhs", "bound", "ok", "guaranteed"]);
    let aggregate = json!({
        "ok": failed.is_empty(),
        "checks": entries.len(),
        "failed": failed,
        "diagnostics_failed": diagnostics,
    });
    for e in &entries {
        t.push(vec![
            Cell::Text(e.name.clone()),
            e.lhs.into(),
            e.bound.into(),
            e.ok.into(),
            e.guaranteed.into(),
        ]);
    }
    for e in &entries {
        if e.guaranteed {
            a.check(&e.name, e.ok);
        }
        a.report(&e.name, e);
    }
    a.report("verify", &aggregate);
    a.table("verify", t);
    Ok(())
}
