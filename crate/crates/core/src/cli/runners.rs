//! One function per subcommand: config in, table plus record fields out.

use std::path::Path;

use serde_json::json;

use super::checks::{invariant_suite, stokes_order};
use super::config::{GeneratorKind, PatchSpec, RunConfig, SourceInput, Subcommand, SystemInput};
use super::record::{CheckResult, RunRecord};
use crate::error::Result;
use crate::fluctuations::{
    boundary_action, covariance_report, gaussian_sample, random_smooth_patch, symplectic_area,
    DiskPatch, Plane, RectanglePatch, SymplecticPatch, TwoPlanePatch,
};
use crate::gravity::{laplacian_spot_check, mean_h, trace_potential, SourceDistribution};
use crate::hpicture::{evolve_h, evolve_h_perturbed, noether_energy_drift, PerturbationMode};
use crate::onsager::{entropy_rate, reciprocity_check, relax, OnsagerSystem};
use crate::opcore::{build_hamiltonian, StateVector};
use crate::spicture::{
    entropy_operator, evolve_s_with, picture_consistency, wick_factor, EvolveOptions,
    GeneratorSchedule, Propagation,
};
use crate::units::Unit;

/// A CSV body plus optional sidecar files `(suffix, contents)`.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub sidecars: Vec<(String, String)>,
}

impl Table {
    fn new(header: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            ..Default::default()
        }
    }
}

/// Shortest round-trip decimal, so reruns give identical bytes.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn grid(max: f64, steps: usize) -> Vec<f64> {
    let steps = steps.max(1);
    (0..=steps).map(|k| max * k as f64 / steps as f64).collect()
}

fn amplitude_columns(dim: usize) -> Vec<String> {
    (0..dim)
        .flat_map(|k| [format!("re_{k}"), format!("im_{k}")])
        .collect()
}

fn push_amplitudes(row: &mut Vec<String>, psi: &StateVector) {
    for z in psi.amplitudes().iter() {
        row.push(num(z.re));
        row.push(num(z.im));
    }
}

fn evolve_h_run(cfg: &RunConfig, rec: &mut RunRecord) -> Result<Table> {
    let c = &cfg.evolve_h;
    let k = &cfg.constants;
    let h = build_hamiltonian(&c.hamiltonian, k)?;
    let psi = c.state.build(h.dim())?;
    let ts = grid(c.t_max, c.steps);
    let mode = if cfg.paper_mode {
        PerturbationMode::FirstOrder
    } else {
        PerturbationMode::Exact
    };
    let traj = if c.eps_prime == 0.0 {
        evolve_h(&psi, &h, &ts, k)?
    } else {
        evolve_h_perturbed(&psi, &h, &ts, c.eps_prime, mode, k)?
    };
    let mut t = Table::new(["step", "t", "norm", "expect_H"]);
    t.header.extend(amplitude_columns(h.dim()));
    for (i, s) in traj.states.iter().enumerate() {
        let mut row = vec![
            i.to_string(),
            num(traj.times[i]),
            num(traj.norms[i]),
            num(traj.energy_expectations[i]),
        ];
        push_amplitudes(&mut row, s);
        t.rows.push(row);
    }
    let n0 = traj.norms[0];
    rec.output("final_norm_ratio", traj.norms[traj.norms.len() - 1] / n0)?;
    if c.eps_prime == 0.0 {
        let drift = noether_energy_drift(&traj)?;
        let scale = h.norm().max(f64::MIN_POSITIVE);
        rec.output("energy_drift", drift)?;
        let dev = traj
            .norms
            .iter()
            .map(|n| (n / n0 - 1.0).abs())
            .fold(0.0, f64::max);
        rec.checks
            .push(CheckResult::at_most("norm_deviation", dev, 1e-12));
        rec.checks.push(CheckResult::at_most(
            "relative_energy_drift",
            drift / scale,
            1e-10,
        ));
    } else {
        rec.output("perturbation_mode", mode)?;
    }
    Ok(t)
}

fn evolve_s_run(cfg: &RunConfig, rec: &mut RunRecord) -> Result<Table> {
    let c = &cfg.evolve_s;
    let k = &cfg.constants;
    let h = build_hamiltonian(&c.hamiltonian, k)?;
    let psi = c.state.build(h.dim())?;
    let s = entropy_operator(&h, c.temperature)?;
    let propagation = match (c.epsilon, c.gravity_x) {
        (Some(eps), _) => Propagation::weak_field(eps),
        (None, Some(x)) => {
            let w = wick_factor(x)?;
            rec.output("wick", w)?;
            if cfg.paper_mode {
                Propagation::weak_field(w.epsilon)
            } else {
                Propagation::from_wick(&w)
            }
        }
        (None, None) => Propagation::weak_field(0.0),
    };
    let schedule = match c.generator {
        GeneratorKind::Constant => GeneratorSchedule::constant(s.operator().clone()),
        GeneratorKind::Chart => {
            let (hh, temp) = (h.clone(), c.temperature);
            GeneratorSchedule::piecewise(move |tau| hh.scaled((-tau).exp() / temp, Unit::Entropy))
        }
    };
    let opts = EvolveOptions {
        allow_antidissipative: c.allow_antidissipative,
        ..Default::default()
    };
    let traj = evolve_s_with(
        &psi,
        &schedule,
        &grid(c.tau_max, c.steps),
        propagation,
        &opts,
        k,
    )?;
    let mut t = Table::new(["step", "tau", "norm", "expect_S"]);
    t.header.extend(amplitude_columns(h.dim()));
    for (i, st) in traj.states.iter().enumerate() {
        let mut row = vec![
            i.to_string(),
            num(traj.taus[i]),
            num(traj.norms[i]),
            num(traj.entropy_expectations[i]),
        ];
        push_amplitudes(&mut row, st);
        t.rows.push(row);
    }
    let kappa = propagation.kappa();
    rec.output("kappa", [kappa.re, kappa.im])?;
    rec.output("final_norm", traj.norms[traj.norms.len() - 1])?;
    if propagation.epsilon() == 0.0 {
        let dev = traj
            .norms
            .iter()
            .map(|n| (n / traj.norms[0] - 1.0).abs())
            .fold(0.0, f64::max);
        rec.checks
            .push(CheckResult::at_most("norm_deviation", dev, 1e-10));
    }
    Ok(t)
}

fn compare_run(cfg: &RunConfig, rec: &mut RunRecord) -> Result<Table> {
    let c = &cfg.compare_pictures;
    let k = &cfg.constants;
    let h = build_hamiltonian(&c.hamiltonian, k)?;
    let psi = c.state.build(h.dim())?;
    let r = picture_consistency(
        &psi,
        &h,
        c.t0,
        c.mode,
        &grid(c.tau_max, c.steps),
        c.epsilon,
        k,
    )?;
    let mut t = Table::new(["step", "tau", "t", "deviation", "norm_ratio"]);
    for i in 0..r.taus.len() {
        t.rows.push(vec![
            i.to_string(),
            num(r.taus[i]),
            num(r.times[i]),
            num(r.deviations[i]),
            num(r.norm_ratios[i]),
        ]);
    }
    rec.output("mode", r.mode)?;
    rec.output("max_deviation", r.max_deviation)?;
    rec.output("integrator_error", r.integrator_error)?;
    rec.checks.push(CheckResult::at_most(
        "integrator_error",
        r.integrator_error,
        1e-7,
    ));
    if c.mode == crate::spicture::PictureMode::RealC {
        rec.checks
            .push(CheckResult::at_most("max_deviation", r.max_deviation, 1e-8));
    }
    Ok(t)
}

fn load_source(input: &SourceInput, base: &Path) -> Result<SourceDistribution> {
    match input {
        SourceInput::Descriptor { path } => SourceDistribution::read_descriptor(base.join(path)),
        SourceInput::Raw { header } => SourceDistribution::read_raw(base.join(header)),
        SourceInput::Inline { descriptor } => SourceDistribution::from_descriptor(descriptor),
    }
}

fn gravity_run(cfg: &RunConfig, base: &Path, rec: &mut RunRecord) -> Result<Table> {
    let c = &cfg.gravity;
    let src = load_source(&c.source, base)?;
    let mut t = Table::new(["x", "y", "z", "h"]);
    for p in &c.probes {
        let h = trace_potential(&src, *p)?;
        t.rows.push(vec![num(p[0]), num(p[1]), num(p[2]), num(h)]);
    }
    let x = mean_h(&src, &c.region, cfg.seed)?;
    rec.output("total_mass", src.total_mass())?;
    rec.output("mean_h", x)?;
    rec.output("wick", wick_factor(x)?)?;
    let mut lap = Vec::new();
    for p in &c.laplacian_points {
        lap.push(json!({"point": p, "laplacian": laplacian_spot_check(&src, *p)?}));
    }
    if !lap.is_empty() {
        rec.output("laplacian", lap)?;
    }
    Ok(t)
}

fn onsager_run(cfg: &RunConfig, base: &Path, rec: &mut RunRecord) -> Result<Table> {
    let c = &cfg.onsager;
    let sys = match &c.system {
        SystemInput::Descriptor { path } => OnsagerSystem::read_descriptor(base.join(path))?,
        SystemInput::Inline { descriptor } => OnsagerSystem::from_descriptor(descriptor)?,
        SystemInput::Random { n, seed } => OnsagerSystem::random(*n, seed.unwrap_or(cfg.seed))?,
    };
    let tr = relax(&sys, &grid(c.t_max, c.steps))?;
    let mut t = Table::new(["step", "tprime"]);
    t.header.extend((0..sys.dim()).map(|i| format!("y_{i}")));
    t.header
        .extend(["entropy".to_string(), "entropy_rate".to_string()]);
    let mut gap: f64 = 0.0;
    for (i, y) in tr.ys.iter().enumerate() {
        let mut row = vec![i.to_string(), num(tr.tprimes[i])];
        row.extend(y.iter().map(|v| num(*v)));
        row.push(num(tr.entropies[i]));
        row.push(num(tr.entropy_rates[i]));
        t.rows.push(row);
        let r = entropy_rate(&sys, &nalgebra::DVector::from_column_slice(y))?;
        let scale = r.via_forces.abs().max(r.via_velocities.abs());
        if scale > 0.0 {
            gap = gap.max((r.via_forces - r.via_velocities).abs() / scale);
        }
    }
    let min_rate = tr
        .entropy_rates
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    rec.output("reciprocity", reciprocity_check(sys.kinetic())?)?;
    rec.output("lyapunov_rate", sys.lyapunov_rate())?;
    rec.checks
        .push(CheckResult::at_most("form_relative_gap", gap, 1e-12));
    rec.checks
        .push(CheckResult::at_least("min_entropy_rate", min_rate, -1e-12));
    Ok(t)
}

fn fluct_run(cfg: &RunConfig, rec: &mut RunRecord) -> Result<Table> {
    let c = &cfg.fluct;
    let k = &cfg.constants;
    let reference = c.reference.build()?;
    let samples = gaussian_sample(&reference, c.n, cfg.seed, k)?;
    let report = covariance_report(&samples, &reference, k)?;
    let mut t = Table::new(["dp", "dV", "dT", "dS"]);
    for s in &samples {
        t.rows
            .push(vec![num(s.dp), num(s.dv), num(s.dt), num(s.ds)]);
    }
    t.sidecars.push((
        "covariance.json".into(),
        serde_json::to_string_pretty(&report)? + "\n",
    ));
    rec.output("covariance", report)?;
    rec.checks.push(CheckResult::at_most(
        "ds_dt_zscore",
        report.ds_dt_over_kbt.z_score(1.0),
        4.0,
    ));
    rec.checks.push(CheckResult::at_most(
        "ds_dtau_zscore",
        report.ds_dtau_over_kb.z_score(1.0),
        4.0,
    ));
    Ok(t)
}

/// `exact` patches (bilinear maps) have no discretization gap to fit an
/// order to; their gap is checked against rounding instead.
fn stokes_table<P: SymplecticPatch + ?Sized>(
    patch: &P,
    res: &[usize],
    exact: bool,
    rec: &mut RunRecord,
) -> Result<Table> {
    let mut t = Table::new(["resolution", "area", "boundary_action", "gap"]);
    let mut worst: f64 = 0.0;
    for &n in res {
        let a = symplectic_area(patch, n)?;
        let b = boundary_action(patch, n)?;
        worst = worst.max((a - b).abs() / a.abs().max(1.0));
        t.rows
            .push(vec![n.to_string(), num(a), num(b), num((a - b).abs())]);
    }
    if exact {
        rec.checks
            .push(CheckResult::at_most("relative_gap", worst, 1e-12));
    } else if res.len() >= 2 {
        let order = stokes_order(patch, res)?;
        rec.output("observed_order", order)?;
        rec.checks
            .push(CheckResult::at_least("observed_order", order, 1.9));
    }
    Ok(t)
}

fn stokes_run(cfg: &RunConfig, rec: &mut RunRecord) -> Result<Table> {
    let c = &cfg.stokes;
    match c.patch {
        PatchSpec::Rectangle { q, p } => {
            let patch = RectanglePatch {
                plane: Plane::First,
                q,
                p,
                rest: (0.0, 0.0),
            };
            rec.output("exact_area", (q.1 - q.0) * (p.1 - p.0))?;
            stokes_table(&patch, &c.resolutions, true, rec)
        }
        PatchSpec::Disk { center, radius } => {
            let patch = DiskPatch {
                plane: Plane::First,
                center,
                radius,
                rest: (0.0, 0.0),
            };
            rec.output("exact_area", std::f64::consts::PI * radius * radius)?;
            stokes_table(&patch, &c.resolutions, false, rec)
        }
        PatchSpec::TwoPlane { a, b } => {
            stokes_table(&TwoPlanePatch { a, b }, &c.resolutions, true, rec)
        }
        PatchSpec::Random { seed } => stokes_table(
            &random_smooth_patch(seed.unwrap_or(cfg.seed)),
            &c.resolutions,
            false,
            rec,
        ),
    }
}

fn check_all_run(cfg: &RunConfig, rec: &mut RunRecord) -> Result<Table> {
    let checks = invariant_suite(&cfg.check_all, cfg.seed, &cfg.constants)?;
    let mut t = Table::new(["name", "measured", "comparison", "tolerance", "passed"]);
    for c in &checks {
        let cmp = serde_json::to_value(c.comparison)?;
        t.rows.push(vec![
            c.name.clone(),
            num(c.measured),
            cmp.as_str().unwrap_or_default().to_string(),
            num(c.tolerance),
            c.passed.to_string(),
        ]);
    }
    rec.checks = checks;
    Ok(t)
}

/// Runs `sub` with paths resolved against `base` (the config directory).
pub fn execute(
    sub: Subcommand,
    cfg: &RunConfig,
    base: &Path,
    rec: &mut RunRecord,
) -> Result<Table> {
    match sub {
        Subcommand::EvolveH => evolve_h_run(cfg, rec),
        Subcommand::EvolveS => evolve_s_run(cfg, rec),
        Subcommand::ComparePictures => compare_run(cfg, rec),
        Subcommand::Gravity => gravity_run(cfg, base, rec),
        Subcommand::Onsager => onsager_run(cfg, base, rec),
        Subcommand::Fluct => fluct_run(cfg, rec),
        Subcommand::Stokes => stokes_run(cfg, rec),
        Subcommand::CheckAll => check_all_run(cfg, rec),
    }
}
