//! The subcommands as plain functions: typed inputs in, printed text plus a
//! [`RunReport`] out. Files are written before a command returns, so a
//! failed check still leaves its report on disk.

use std::fs;
use std::path::{Path, PathBuf};

use nst_core::models::{bessel_characteristics, kstar_experiment, m_of, phi_mu, sample_curve, sup_m};
use nst_core::montecarlo::{Engine, McEstimate};
use nst_core::{ModelSpec, SimConfig};
use serde::Serialize;

use crate::error::AppError;
use crate::format::{console, shortest};
use crate::report::{write_json, Check, RunReport};
use crate::svg::{render, Series};
use crate::table::CsvTable;
use crate::threads::Threads;

/// Levels drawn in the exponential-family figure.
pub const FIGURE_K: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];
/// Indices of the Bessel-family figures.
pub const FIGURE_MU: [f64; 8] = [0.5, 1.0, 1.5, 2.5, 3.5, 4.5, 5.5, 6.5];
/// Time axis of the exponential-family figure; includes `t = 0`.
pub const FIGURE1_T: (f64, f64, usize) = (0.0, 5.0, 501);
const FIGURE2_Z: (f64, f64, usize) = (0.0, 12.0, 601);
/// Allowance for grid bias in path estimates.
pub const PATH_ALLOWANCE: f64 = 0.002;
pub const QUARTER_WINDOW: (f64, f64) = (0.2490, 0.2500);
pub const MIN_VERIFY_PATHS: u64 = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub report: RunReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Figure1,
    Figure2,
    Figure3,
}

/// Monte Carlo settings shared by `verify` and `quarter-checks`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSettings {
    pub seed: u64,
    pub paths: u64,
    pub dt: f64,
    pub threads: usize,
}

impl McSettings {
    fn engine(&self) -> Engine<Threads> {
        Engine::new(Threads::new(self.threads))
    }

    fn sim(&self) -> SimConfig {
        SimConfig::new(self.seed, self.paths, self.dt)
    }

    fn record(&self, r: &mut RunReport) {
        r.param("seed", self.seed)
            .param("paths", self.paths)
            .param("dt", shortest(self.dt));
    }
}

fn model_params(r: &mut RunReport, model: &ModelSpec) {
    r.param("model", model);
}

/// `points` evenly spaced values from `lo` to `hi`, both ends exact.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let n = points - 1;
    (0..points)
        .map(|i| {
            if i == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / n as f64
            }
        })
        .collect()
}

pub fn eval(model: &ModelSpec, t: f64) -> Result<Output, AppError> {
    let m = m_of(model, t).map_err(|e| AppError::from_model(e, model))?;
    let mut report = RunReport::new("eval");
    model_params(&mut report, model);
    report.param("t", shortest(t));
    report
        .checks
        .push(Check::within("m_in_quarter_range", m, 0.0, 0.25));
    Ok(Output {
        stdout: format!("{}\n", console(m)),
        report,
    })
}

fn curve_table(model: &ModelSpec, times: &[f64]) -> Result<CsvTable, AppError> {
    let curve = sample_curve(model, times).map_err(|e| AppError::from_model(e, model))?;
    let mut table = CsvTable::new(&["t", "m"]);
    for (t, m) in curve.points {
        table.push(vec![t, m]);
    }
    Ok(table)
}

fn range_check(report: &mut RunReport, values: impl Iterator<Item = f64>) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    let inside = lo >= 0.0 && hi <= 0.25;
    report.checks.push(Check::holds(
        "values_in_quarter_range",
        inside,
        hi,
        "all m in [0, 0.25]",
    ));
}

pub fn curve(
    model: &ModelSpec,
    t_min: f64,
    t_max: f64,
    points: usize,
    out: &Path,
) -> Result<Output, AppError> {
    if !(t_min >= 0.0 && t_min.is_finite()) {
        return Err(AppError::flag(
            "--t-min",
            format!("must be finite and nonnegative (got {t_min})"),
        ));
    }
    if !(t_max > t_min && t_max.is_finite()) {
        return Err(AppError::flag(
            "--t-max",
            format!("must be finite and exceed --t-min (got {t_max})"),
        ));
    }
    if points < 2 {
        return Err(AppError::flag(
            "--points",
            format!("need at least 2 (got {points})"),
        ));
    }
    let table = curve_table(model, &linspace(t_min, t_max, points))?;
    table.write(out)?;
    let mut report = RunReport::new("curve");
    model_params(&mut report, model);
    report
        .param("t_min", shortest(t_min))
        .param("t_max", shortest(t_max))
        .param("points", points);
    report.output(out);
    range_check(&mut report, table.rows.iter().map(|r| r[1]));
    Ok(Output {
        stdout: format!("wrote {} points to {}\n", points, out.display()),
        report,
    })
}

fn create_dir(dir: &Path) -> Result<(), AppError> {
    fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))
}

/// Writes the data files of one figure into `dir`.
pub fn curve_preset(preset: Preset, dir: &Path) -> Result<Output, AppError> {
    create_dir(dir)?;
    let mut report = RunReport::new("curve");
    let mut stdout = String::new();
    let mut all_m = Vec::new();
    match preset {
        Preset::Figure1 => {
            report.param("preset", "figure1");
            let (lo, hi, n) = FIGURE1_T;
            let times = linspace(lo, hi, n);
            for k in FIGURE_K {
                let model = ModelSpec::exp(k).map_err(|e| AppError::from_model(e, "figure1"))?;
                let table = curve_table(&model, &times)?;
                let path = dir.join(format!("figure1_K{}.csv", shortest(k)));
                table.write(&path)?;
                all_m.extend(table.rows.iter().map(|r| r[1]));
                let first = table.rows[0][1];
                report
                    .checks
                    .push(Check::at_most(&format!("K={k}: m at first point"), first, 1e-3));
                report.output(&path);
            }
        }
        Preset::Figure2 => {
            report.param("preset", "figure2");
            let (lo, hi, n) = FIGURE2_Z;
            for mu in FIGURE_MU {
                let mut table = CsvTable::new(&["x", "y"]);
                for z in linspace(lo, hi, n) {
                    let y = phi_mu(mu, z)
                        .map_err(|e| AppError::from_model(e, format!("mu = {}", shortest(mu))))?;
                    table.push(vec![z, y]);
                }
                let path = dir.join(format!("figure2_mu{}.csv", shortest(mu)));
                table.write(&path)?;
                all_m.extend(table.rows.iter().map(|r| r[1]));
                report.output(&path);
            }
        }
        Preset::Figure3 => {
            report.param("preset", "figure3");
            let mut m = CsvTable::new(&["x", "y"]);
            let mut m_prime = CsvTable::new(&["x", "y"]);
            let mut worst = f64::NEG_INFINITY;
            for i in 1..=100 {
                let mu = i as f64 / 10.0;
                let c = characteristics(mu)?;
                m.push(vec![mu, c.m_mu]);
                m_prime.push(vec![mu, c.m_prime_mu]);
                worst = worst.max(c.m_mu - c.m_prime_mu);
                all_m.push(c.m_mu);
            }
            report
                .checks
                .push(Check::at_most("m_mu <= m_prime_mu", worst, 0.0));
            for (name, table) in [("figure3_m_mu.csv", &m), ("figure3_m_prime_mu.csv", &m_prime)] {
                let path = dir.join(name);
                table.write(&path)?;
                report.output(&path);
            }
        }
    }
    range_check(&mut report, all_m.into_iter());
    for p in &report.outputs {
        stdout.push_str(&format!("wrote {p}\n"));
    }
    Ok(Output { stdout, report })
}

fn characteristics(mu: f64) -> Result<nst_core::models::BesselCharacteristics, AppError> {
    bessel_characteristics(mu).map_err(|e| AppError::from_model(e, format!("mu = {}", shortest(mu))))
}

pub fn table(mus: &[f64], out: Option<&Path>) -> Result<Output, AppError> {
    if mus.is_empty() {
        return Err(AppError::flag("--mu", "need at least one index"));
    }
    let mut table = CsvTable::new(&["mu", "z_mu", "m_mu", "m_prime_mu"]);
    let mut worst = f64::NEG_INFINITY;
    for &mu in mus {
        let c = characteristics(mu)?;
        worst = worst.max(c.m_mu - c.m_prime_mu);
        table.push(vec![mu, c.z_mu, c.m_mu, c.m_prime_mu]);
    }
    let mut report = RunReport::new("table");
    report.param(
        "mu",
        mus.iter().map(|m| shortest(*m)).collect::<Vec<_>>().join(","),
    );
    report
        .checks
        .push(Check::at_most("m_mu <= m_prime_mu", worst, 0.0));
    let stdout = emit(&table, out, &mut report)?;
    Ok(Output { stdout, report })
}

/// Writes `table` to `out`, or returns it as text when there is no path.
fn emit(table: &CsvTable, out: Option<&Path>, report: &mut RunReport) -> Result<String, AppError> {
    match out {
        Some(path) => {
            table.write(path)?;
            report.output(path);
            Ok(format!("wrote {}\n", path.display()))
        }
        None => Ok(table.render()),
    }
}

pub fn sup(model: &ModelSpec) -> Result<Output, AppError> {
    let s = sup_m(model).map_err(|e| AppError::from_model(e, model))?;
    let mut report = RunReport::new("sup");
    model_params(&mut report, model);
    report
        .checks
        .push(Check::within("m_star_in_quarter_range", s.m_star, 0.0, 0.25));
    Ok(Output {
        stdout: format!(
            "t_star {}\nm_star {}\nmethod_tolerance {}\n",
            console(s.t_star),
            console(s.m_star),
            console(s.method_tolerance)
        ),
        report,
    })
}

/// The `verify` JSON document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub model: String,
    pub t: f64,
    pub closed_form: f64,
    pub mc_marginal: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mc_path: Option<f64>,
    pub se: f64,
    pub z_score: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub se_path: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_score_path: Option<f64>,
    pub paths: u64,
    pub seed: u64,
    pub dt: f64,
    pub pass: bool,
}

fn scaled(e: McEstimate, by: f64) -> McEstimate {
    McEstimate {
        mean: e.mean * by,
        std_error: e.std_error * by,
        min: e.min * by,
        max: e.max * by,
        ..e
    }
}

/// Closed form against the exact-marginal estimator and, where grid paths
/// exist, the path estimator, all at time `t`.
pub fn verify(model: &ModelSpec, t: f64, mc: &McSettings, out: Option<&Path>) -> Result<Output, AppError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(AppError::flag(
            "--t",
            format!("must be finite and positive (got {t})"),
        ));
    }
    if mc.paths < MIN_VERIFY_PATHS {
        return Err(AppError::flag(
            "--paths",
            format!("need at least {MIN_VERIFY_PATHS} (got {})", mc.paths),
        ));
    }
    let closed = m_of(model, t).map_err(|e| AppError::from_model(e, model))?;
    let engine = mc.engine();
    let mc_err = |e| AppError::from_mc(e, model);
    let marginal = match *model {
        ModelSpec::BrownianBeforeHit { a } => {
            // m(t) = φ(x)/x² with x = a/√t
            let x = a / t.sqrt();
            scaled(
                engine.phi_brownian(x, mc.paths, mc.seed).map_err(mc_err)?,
                1.0 / (x * x),
            )
        }
        _ => engine.m_marginal(model, t, mc.paths, mc.seed).map_err(mc_err)?,
    };
    let has_paths = match model.bessel_dimension() {
        Some(d) => (d - d.round()).abs() < 1e-9,
        None => true,
    };
    let path = if has_paths {
        Some(engine.m_path(model, &[t], &mc.sim()).map_err(mc_err)?[0])
    } else {
        None
    };

    let mut report = RunReport::new("verify");
    model_params(&mut report, model);
    report.param("t", shortest(t));
    mc.record(&mut report);
    let diff = (marginal.mean - closed).abs();
    report.checks.push(Check::at_most(
        "marginal within 3 se",
        diff,
        3.0 * marginal.std_error,
    ));
    if let Some(p) = path {
        let d = (p.mean - closed).abs();
        report.checks.push(Check::at_most(
            "path within 3 se + 0.002",
            d,
            3.0 * p.std_error + PATH_ALLOWANCE,
        ));
    }
    let doc = VerifyReport {
        model: model.to_string(),
        t,
        closed_form: closed,
        mc_marginal: marginal.mean,
        mc_path: path.map(|p| p.mean),
        se: marginal.std_error,
        z_score: marginal.z_score(closed),
        se_path: path.map(|p| p.std_error),
        z_score_path: path.map(|p| p.z_score(closed)),
        paths: mc.paths,
        seed: mc.seed,
        dt: mc.dt,
        pass: report.all_pass(),
    };
    let stdout = match out {
        Some(p) => {
            write_json(&doc, p)?;
            report.output(p);
            format!("wrote {}\n", p.display())
        }
        None => crate::report::to_json(&doc),
    };
    Ok(Output { stdout, report })
}

pub fn experiment_kstar(grid: &[f64], out: Option<&Path>) -> Result<Output, AppError> {
    let r = kstar_experiment(grid).map_err(|e| AppError::from_model(e, "K grid"))?;
    let mut table = CsvTable::new(&["K", "t_star", "m_star"]);
    let mut top = f64::NEG_INFINITY;
    for row in &r.rows {
        let k = match row.model {
            ModelSpec::ExpLastPassage { k } => k,
            _ => unreachable!("the experiment runs the exponential family"),
        };
        top = top.max(row.m_star);
        table.push(vec![k, row.t_star, row.m_star]);
    }
    table
        .comments
        .push(format!(" monotone_nondecreasing={}", r.monotone_nondecreasing));
    let mut report = RunReport::new("experiment-kstar");
    report.param(
        "K",
        grid.iter().map(|k| shortest(*k)).collect::<Vec<_>>().join(","),
    );
    report.param("monotone_nondecreasing", r.monotone_nondecreasing);
    report.checks.push(Check::at_most("m_star <= 0.25", top, 0.25));
    let mut stdout = emit(&table, out, &mut report)?;
    if out.is_some() {
        stdout.push_str(&format!("monotone_nondecreasing={}\n", r.monotone_nondecreasing));
    }
    Ok(Output { stdout, report })
}

/// The `quarter-checks` JSON document. `_x100` and `_x10` are the same
/// paths read on the grids of step `100·dt` and `10·dt`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuarterReport {
    pub model: String,
    pub paths: u64,
    pub seed: u64,
    pub dt: f64,
    pub window_low: f64,
    pub window_high: f64,
    pub sup_zz: f64,
    pub sup_zz_se: f64,
    pub sup_zz_path_max: f64,
    pub sup_zz_dt_x10: f64,
    pub sup_zz_dt_x100: f64,
    pub level_hit: f64,
    pub level_hit_se: f64,
    pub level_hit_path_max: f64,
    pub level_hit_dt_x10: f64,
    pub level_hit_dt_x100: f64,
    pub refinement_monotone: bool,
    pub pass: bool,
}

/// `E[sup Z(1-Z)]` and `E[Z_T(1-Z_T)]` at the first grid time with
/// `Z ≤ 1/2`, both of which are `1/4` in continuous time, on the grids
/// `100·dt`, `10·dt` and `dt`.
pub fn quarter_checks(k: f64, mc: &McSettings, out: Option<&Path>) -> Result<Output, AppError> {
    let model = ModelSpec::exp(k).map_err(|e| AppError::from_model(e, "quarter-checks"))?;
    let engine = mc.engine();
    let cfg = mc.sim();
    let strides = [100, 10, 1];
    let mc_err = |e| AppError::from_mc(e, model);
    let sup = engine.sup_zz_refined(&model, &cfg, &strides).map_err(mc_err)?;
    let lvl = engine
        .level_hit_refined(&model, 0.5, &cfg, &strides)
        .map_err(mc_err)?;
    let (lo, hi) = QUARTER_WINDOW;

    let mut report = RunReport::new("quarter-checks");
    model_params(&mut report, &model);
    mc.record(&mut report);
    let c = &mut report.checks;
    c.push(Check::within("sup_zz in window", sup[2].mean, lo, hi));
    c.push(Check::within("level_hit in window", lvl[2].mean, lo, hi));
    let path_max = sup
        .iter()
        .chain(lvl.iter())
        .map(|e| e.max)
        .fold(f64::NEG_INFINITY, f64::max);
    c.push(Check::at_most("per-path maxima <= 0.25", path_max, 0.25));
    let increasing = |e: &[McEstimate]| e.windows(2).all(|w| w[0].mean <= w[1].mean);
    let monotone = increasing(&sup) && increasing(&lvl);
    let rise = (sup[2].mean - sup[0].mean).min(lvl[2].mean - lvl[0].mean);
    c.push(Check::holds(
        "weakly increasing under refinement",
        monotone,
        rise,
        "dt x100 <= dt x10 <= dt",
    ));

    let doc = QuarterReport {
        model: model.to_string(),
        paths: mc.paths,
        seed: mc.seed,
        dt: mc.dt,
        window_low: lo,
        window_high: hi,
        sup_zz: sup[2].mean,
        sup_zz_se: sup[2].std_error,
        sup_zz_path_max: sup[2].max,
        sup_zz_dt_x10: sup[1].mean,
        sup_zz_dt_x100: sup[0].mean,
        level_hit: lvl[2].mean,
        level_hit_se: lvl[2].std_error,
        level_hit_path_max: lvl[2].max,
        level_hit_dt_x10: lvl[1].mean,
        level_hit_dt_x100: lvl[0].mean,
        refinement_monotone: monotone,
        pass: report.all_pass(),
    };
    let stdout = match out {
        Some(p) => {
            write_json(&doc, p)?;
            report.output(p);
            format!("wrote {}\n", p.display())
        }
        None => crate::report::to_json(&doc),
    };
    Ok(Output { stdout, report })
}

pub fn plot(inputs: &[PathBuf], out: &Path) -> Result<Output, AppError> {
    if inputs.is_empty() {
        return Err(AppError::flag("INPUTS", "need at least one CSV file"));
    }
    let mut series = Vec::new();
    let mut schema: Option<Vec<String>> = None;
    for path in inputs {
        let table = CsvTable::read(path)?;
        let bad = |message: String| AppError::Csv {
            path: path.display().to_string(),
            line: 1,
            message,
        };
        let cols = table.columns.clone();
        if cols != ["x", "y"] && cols != ["t", "m"] {
            return Err(bad(format!(
                "expected header x,y or t,m, found {}",
                cols.join(",")
            )));
        }
        match &schema {
            Some(s) if *s != cols => {
                return Err(bad(format!(
                    "header {} differs from the first input's {}",
                    cols.join(","),
                    s.join(",")
                )))
            }
            _ => schema = Some(cols),
        }
        let name = path.file_stem().map_or_else(
            || path.display().to_string(),
            |s| s.to_string_lossy().into_owned(),
        );
        series.push(Series {
            name,
            points: table.rows.iter().map(|r| (r[0], r[1])).collect(),
        });
    }
    let schema = schema.expect("at least one input");
    let svg = render(&series, &schema[0], &schema[1]);
    fs::write(out, svg).map_err(|e| AppError::io(out, e))?;
    let mut report = RunReport::new("plot");
    report.param(
        "inputs",
        inputs
            .iter()
            .map(|p| p.display().to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    report.output(out);
    Ok(Output {
        stdout: format!("wrote {} with {} series\n", out.display(), series.len()),
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mc(paths: u64, dt: f64) -> McSettings {
        McSettings {
            seed: 3,
            paths,
            dt,
            threads: 2,
        }
    }

    #[test]
    fn linspace_hits_both_ends() {
        let g = linspace(0.0, 5.0, 501);
        assert_eq!(g.len(), 501);
        assert_eq!((g[0], g[100], g[500]), (0.0, 1.0, 5.0));
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn eval_prints_twelve_digits() {
        let out = eval(&ModelSpec::exp(0.5).unwrap(), 1.0).unwrap();
        assert_eq!(out.stdout, "0.0789745088999\n");
        assert!(out.report.all_pass());
        assert!(matches!(
            eval(&ModelSpec::exp(0.5).unwrap(), -1.0),
            Err(AppError::Flag { .. })
        ));
    }

    #[test]
    fn table_rows_and_solver_failure() {
        let out = table(&FIGURE_MU, None).unwrap();
        let t = CsvTable::parse(&out.stdout, "stdout").unwrap();
        assert_eq!(t.columns, ["mu", "z_mu", "m_mu", "m_prime_mu"]);
        assert_eq!(t.rows.len(), 8);
        assert!(out.report.all_pass());
        match table(&[1e-6], None) {
            Err(e @ AppError::Solver { .. }) => assert!(e.to_string().starts_with("mu = 1e-6")),
            other => panic!("{other:?}"),
        }
        assert_eq!(table(&[-1.0], None).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn kstar_comment_trails_rows() {
        let out = experiment_kstar(&FIGURE_K, None).unwrap();
        assert!(out.stdout.ends_with("# monotone_nondecreasing=true\n"));
        let t = CsvTable::parse(&out.stdout, "stdout").unwrap();
        assert_eq!(t.rows.len(), 10);
        assert_eq!(t.comments, [" monotone_nondecreasing=true"]);
    }

    #[test]
    fn sup_edge_is_a_solver_failure() {
        let e = sup(&ModelSpec::brownian_hit(1e-100).unwrap()).unwrap_err();
        assert_eq!(e.exit_code(), 4);
    }

    #[test]
    fn verify_json_shape() {
        let out = verify(&ModelSpec::exp(0.5).unwrap(), 1.0, &mc(4000, 1e-2), None).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        for k in [
            "model",
            "t",
            "closed_form",
            "mc_marginal",
            "mc_path",
            "se",
            "z_score",
            "pass",
        ] {
            assert!(keys.iter().any(|x| x == k), "{k}");
        }
        assert_eq!(v["pass"].as_bool().unwrap(), out.report.all_pass());
        // fractional dimension: no path estimate
        let out = verify(&ModelSpec::bessel(0.3, 1.0).unwrap(), 1.0, &mc(2000, 1e-2), None).unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert!(v.get("mc_path").is_none());
        assert!(v.get("se_path").is_none());
        assert_eq!(
            verify(&ModelSpec::exp(0.5).unwrap(), 1.0, &mc(999, 1e-2), None)
                .unwrap_err()
                .exit_code(),
            2
        );
    }

    #[test]
    fn verify_does_not_depend_on_threads() {
        let m = ModelSpec::bessel(1.0, 1.0).unwrap();
        let a = verify(&m, 0.5, &mc(2000, 1e-2), None).unwrap();
        let b = verify(
            &m,
            0.5,
            &McSettings {
                threads: 1,
                ..mc(2000, 1e-2)
            },
            None,
        )
        .unwrap();
        assert_eq!(a.stdout, b.stdout);
    }

    #[test]
    fn coarse_quarter_checks_fail_the_window() {
        let out = quarter_checks(0.5, &mc(1000, 1e-2), None).unwrap();
        assert!(!out.report.all_pass());
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["pass"], false);
        assert!(v["sup_zz_path_max"].as_f64().unwrap() <= 0.25);
    }
}
