//! Configuration-driven parameter sweeps: the reproducibility surface behind
//! the bundled figure presets, CSV emission, and SVG plots.
//!
//! Sweeps are deterministic: grid points are evaluated by a worker pool but
//! assembled in grid order, failed points are recorded with an error class
//! instead of being dropped, and floats are serialized with 17 significant
//! digits so reruns are byte-identical.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dicke::ModelParams;
use crate::discrimination::{discrimination_report, DiscriminationOptions, DiscriminationReport};
use crate::error::{Error, Result};
use crate::estimation::{
    estimation_report, lossy_homodyne_fi, lossy_single_mode_qfi, reference_limit,
    EstimationOptions, EstimationReport, ReferenceLimit,
};
use crate::plot::{Plot, Series};

/// Convention tag stamped on every CSV row.
pub const CONVENTION_TAG: &str = "sigma0=I/2";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Estimation ratios along a λ grid at fixed D.
    QfiRatioVsLambda,
    /// Estimation ratios on a (λ, ω_a) grid at D = D_TRK.
    TrkRatioMaps,
    /// The four discrimination error probabilities along a λ/λ_crit grid.
    DiscriminationVsLambda,
    /// Lossy single-mode QFI and homodyne FI along an η grid.
    LossVsEta,
    /// Estimation reports on the cartesian product of the provided grids.
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gauge {
    Coulomb,
    Dipole,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

/// A 1-D grid: either an explicit list or a range with point count.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Explicit { values: Vec<f64> },
    Range {
        start: f64,
        stop: f64,
        points: usize,
        #[serde(default = "default_spacing")]
        spacing: Spacing,
    },
}

fn default_spacing() -> Spacing {
    Spacing::Linear
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            GridSpec::Explicit { values } => {
                if values.is_empty() {
                    return Err(Error::Config("empty explicit grid".into()));
                }
                Ok(values.clone())
            }
            GridSpec::Range {
                start,
                stop,
                points,
                spacing,
            } => {
                if *points == 0 {
                    return Err(Error::Config("grid needs at least one point".into()));
                }
                if *points == 1 {
                    return Ok(vec![*start]);
                }
                let n = *points as f64 - 1.0;
                match spacing {
                    Spacing::Linear => Ok((0..*points)
                        .map(|k| start + (stop - start) * k as f64 / n)
                        .collect()),
                    Spacing::Log => {
                        if *start <= 0.0 || *stop <= 0.0 {
                            return Err(Error::Config(
                                "log spacing needs positive endpoints".into(),
                            ));
                        }
                        let (a, b) = (start.ln(), stop.ln());
                        Ok((0..*points)
                            .map(|k| (a + (b - a) * k as f64 / n).exp())
                            .collect())
                    }
                }
            }
        }
    }
}

fn default_omega() -> f64 {
    1.0
}
fn default_true() -> bool {
    true
}
fn default_gauge() -> Gauge {
    Gauge::Coulomb
}
fn default_stem() -> String {
    "sweep".into()
}

/// One sweep, as read from a JSON config file. Unused fields for a scenario
/// are simply ignored; missing required grids are a config error.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub scenario: Scenario,
    #[serde(default = "default_omega")]
    pub omega_a: f64,
    #[serde(default = "default_omega")]
    pub omega_b: f64,
    #[serde(default)]
    pub lambda: f64,
    /// Fixed diamagnetic coupling; `"trk"` semantics via `d_at_trk`.
    #[serde(default)]
    pub d: f64,
    /// Overrides `d` with λ²/ω_b at each point when set.
    #[serde(default)]
    pub d_at_trk: bool,
    #[serde(default)]
    pub lambda_grid: Option<GridSpec>,
    #[serde(default)]
    pub lambda_over_crit_grid: Option<GridSpec>,
    #[serde(default)]
    pub d_grid: Option<GridSpec>,
    #[serde(default)]
    pub omega_a_grid: Option<GridSpec>,
    #[serde(default)]
    pub omega_b_grid: Option<GridSpec>,
    #[serde(default)]
    pub eta_grid: Option<GridSpec>,
    #[serde(default = "default_true")]
    pub include_photon_counting: bool,
    #[serde(default = "default_gauge")]
    pub gauge: Gauge,
    /// Cap on Fock cutoffs (further capped by PROBE_MAX_CUTOFF in the CLI).
    #[serde(default)]
    pub max_cutoff: Option<usize>,
    #[serde(default)]
    pub tail_tolerance: Option<f64>,
    /// Evaluate points on/past the stability boundary as recorded failures
    /// instead of rejecting the whole config.
    #[serde(default)]
    pub boundary_study: bool,
    #[serde(default = "default_stem")]
    pub out_stem: String,
}

impl SweepConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{path:?}: {e}")))
    }

    fn estimation_options(&self) -> EstimationOptions {
        let mut opts = EstimationOptions {
            skip_photon_counting: !self.include_photon_counting,
            ..Default::default()
        };
        if let Some(c) = self.max_cutoff {
            opts.pc.max_cutoff = c;
        }
        if let Some(t) = self.tail_tolerance {
            opts.pc.tail_tolerance = t;
        }
        opts
    }

    fn discrimination_options(&self) -> DiscriminationOptions {
        let mut opts = DiscriminationOptions::default();
        if let Some(c) = self.max_cutoff {
            opts.max_cutoff = c;
        }
        if let Some(t) = self.tail_tolerance {
            opts.tail_tolerance = t;
        }
        opts
    }
}

/// The five bundled figure presets. Grid densities are not prescribed
/// anywhere authoritative; presets use 200-point grids throughout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FigurePreset {
    Fig2Left,
    Fig2Right,
    Fig3,
    Fig4,
    Fig5,
}

impl std::str::FromStr for FigurePreset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig2_left" => Ok(Self::Fig2Left),
            "fig2_right" => Ok(Self::Fig2Right),
            "fig3" => Ok(Self::Fig3),
            "fig4" => Ok(Self::Fig4),
            "fig5" => Ok(Self::Fig5),
            other => Err(Error::Config(format!(
                "unknown figure preset {other:?} (expected fig2_left|fig2_right|fig3|fig4|fig5)"
            ))),
        }
    }
}

fn base_config(scenario: Scenario, stem: &str) -> SweepConfig {
    SweepConfig {
        scenario,
        omega_a: 1.0,
        omega_b: 1.0,
        lambda: 0.0,
        d: 0.0,
        d_at_trk: false,
        lambda_grid: None,
        lambda_over_crit_grid: None,
        d_grid: None,
        omega_a_grid: None,
        omega_b_grid: None,
        eta_grid: None,
        include_photon_counting: true,
        gauge: Gauge::Coulomb,
        max_cutoff: None,
        tail_tolerance: None,
        boundary_study: false,
        out_stem: stem.into(),
    }
}

/// The exact grids and fixed parameters behind each bundled figure.
pub fn figure_preset(name: FigurePreset) -> SweepConfig {
    match name {
        // FI/QFI ratios vs λ at D = 0, ω_a = ω_b = 1
        FigurePreset::Fig2Left => {
            let mut cfg = base_config(Scenario::QfiRatioVsLambda, "fig2_left");
            cfg.lambda_grid = Some(GridSpec::Range {
                start: 0.0,
                stop: 0.4995,
                points: 200,
                spacing: Spacing::Linear,
            });
            cfg
        }
        // same ratios as D approaches D_crit from above, λ = 1, ω_a = ω_b = 1
        FigurePreset::Fig2Right => {
            let d_crit = 0.75;
            let margins: Vec<f64> = {
                // log-spaced distance to the boundary, 5e-4 .. 9·D_crit
                let (a, b) = ((5e-4f64).ln(), (9.0 * d_crit as f64).ln());
                (0..200)
                    .map(|k| d_crit + (a + (b - a) * k as f64 / 199.0).exp())
                    .collect()
            };
            let mut cfg = base_config(Scenario::Custom, "fig2_right");
            cfg.lambda = 1.0;
            cfg.d_grid = Some(GridSpec::Explicit { values: margins });
            cfg
        }
        // ratio maps over (λ, ω_a) at D = D_TRK, ω_b = 1
        FigurePreset::Fig3 => {
            let mut cfg = base_config(Scenario::TrkRatioMaps, "fig3");
            cfg.d_at_trk = true;
            cfg.lambda_grid = Some(GridSpec::Range {
                start: 0.05,
                stop: 3.0,
                points: 20,
                spacing: Spacing::Linear,
            });
            cfg.omega_a_grid = Some(GridSpec::Range {
                start: 0.25,
                stop: 3.0,
                points: 10,
                spacing: Spacing::Linear,
            });
            cfg
        }
        // loss robustness at ω_a = ω_b = 1, λ = 0.2, D = λ²/ω_b
        FigurePreset::Fig4 => {
            let mut cfg = base_config(Scenario::LossVsEta, "fig4");
            cfg.lambda = 0.2;
            cfg.d_at_trk = true;
            cfg.eta_grid = Some(GridSpec::Range {
                start: 0.0,
                stop: 0.99,
                points: 200,
                spacing: Spacing::Linear,
            });
            cfg
        }
        // discrimination error probabilities vs λ/λ_crit, ω_a = ω_b = 1
        FigurePreset::Fig5 => {
            let mut values: Vec<f64> = (0..150)
                .map(|k| 0.01 + (0.98 - 0.01) * k as f64 / 149.0)
                .collect();
            // refine toward the critical point for the log-log inset
            let (a, b) = ((1e-5f64).ln(), (1e-2f64).ln());
            let mut tail: Vec<f64> = (0..50)
                .map(|k| 1.0 - (a + (b - a) * k as f64 / 49.0).exp())
                .collect();
            tail.sort_by(|x, y| x.partial_cmp(y).unwrap());
            values.extend(tail);
            let mut cfg = base_config(Scenario::DiscriminationVsLambda, "fig5");
            cfg.lambda_over_crit_grid = Some(GridSpec::Explicit { values });
            cfg
        }
    }
}

/// One evaluated grid point, flattened for CSV emission.
#[derive(Clone, Debug, Serialize)]
pub struct ResultRow {
    pub index: usize,
    /// "ok" or an error class ("unstable", "cutoff", "config", "numerical").
    pub status: String,
    /// "bulk" or "near-critical" (within 1e-6·ω_a of instability).
    pub regime: String,
    pub gauge: Gauge,
    pub columns: Vec<(&'static str, Option<f64>)>,
    pub version: &'static str,
    pub convention: &'static str,
}

fn error_class(e: &Error) -> &'static str {
    match e {
        Error::Unstable { .. } => "unstable",
        Error::CutoffTooSmall { .. } | Error::NotConverged(_) => "cutoff",
        Error::Config(_) | Error::InvalidParams(_) => "config",
        _ => "numerical",
    }
}

fn regime_of(p: &ModelParams) -> &'static str {
    if p.stability_margin() < 1e-6 * p.omega_a {
        "near-critical"
    } else {
        "bulk"
    }
}

/// What a scenario computes per point.
#[derive(Debug)]
enum PointSpec {
    Estimation(ModelParams),
    Discrimination { lambda: f64 },
    Loss { p: ModelParams, eta: f64 },
}

fn estimation_columns(
    p: &ModelParams,
    rep: Option<&EstimationReport>,
) -> Vec<(&'static str, Option<f64>)> {
    let near_critical = p.stability_margin() < 1e-6 * p.omega_a;
    let h_asymptote = if near_critical {
        Some(reference_limit(p, ReferenceLimit::QfiDivergenceAtDCrit).value)
    } else {
        None
    };
    vec![
        ("omega_a", Some(p.omega_a)),
        ("omega_b", Some(p.omega_b)),
        ("lambda", Some(p.lambda)),
        ("d", Some(p.d)),
        ("h_two_mode", rep.map(|r| r.h_two_mode)),
        ("h_single_mode", rep.map(|r| r.h_single_mode)),
        ("f_homodyne", rep.map(|r| r.f_homodyne)),
        ("f_photon_counting", rep.and_then(|r| r.f_photon_counting)),
        ("ratio_hd_h", rep.map(|r| r.ratio_hd_h)),
        ("ratio_hd_ha", rep.map(|r| r.ratio_hd_ha)),
        ("ratio_pc_h", rep.and_then(|r| r.ratio_pc_h)),
        ("ratio_pc_ha", rep.and_then(|r| r.ratio_pc_ha)),
        ("n_thermal", rep.map(|r| r.reduced_state.n_thermal)),
        ("squeezing_r", rep.map(|r| r.reduced_state.r)),
        ("pc_cutoff", rep.and_then(|r| r.diagnostics.pc_cutoff.map(|c| c as f64))),
        ("pc_step", rep.and_then(|r| r.diagnostics.pc_step)),
        (
            "pc_converged",
            rep.and_then(|r| r.diagnostics.pc_converged.map(f64::from)),
        ),
        ("purity_deviation", rep.map(|r| r.diagnostics.purity_deviation)),
        ("h_asymptote", h_asymptote),
    ]
}

fn discrimination_columns(
    omega_a: f64,
    omega_b: f64,
    lambda: f64,
    lambda_crit: f64,
    rep: Option<&DiscriminationReport>,
) -> Vec<(&'static str, Option<f64>)> {
    vec![
        ("omega_a", Some(omega_a)),
        ("omega_b", Some(omega_b)),
        ("lambda", Some(lambda)),
        ("lambda_over_crit", Some(lambda / lambda_crit)),
        ("p_e", rep.map(|r| r.p_e)),
        ("p_e_a", rep.map(|r| r.p_e_a)),
        ("p_e_hd", rep.map(|r| r.p_e_hd)),
        ("p_e_pc", rep.map(|r| r.p_e_pc)),
        ("n_t", rep.map(|r| r.n_t as f64)),
        ("cutoff", rep.map(|r| r.cutoff as f64)),
        ("converged", rep.map(|r| f64::from(r.converged))),
    ]
}

fn loss_columns(
    p: &ModelParams,
    eta: f64,
    values: Option<(f64, f64)>,
) -> Vec<(&'static str, Option<f64>)> {
    vec![
        ("omega_a", Some(p.omega_a)),
        ("omega_b", Some(p.omega_b)),
        ("lambda", Some(p.lambda)),
        ("d", Some(p.d)),
        ("eta", Some(eta)),
        ("h_single_mode", values.map(|v| v.0)),
        ("f_homodyne", values.map(|v| v.1)),
        ("ratio", values.map(|v| v.1 / v.0)),
    ]
}

fn build_points(cfg: &SweepConfig) -> Result<Vec<PointSpec>> {
    let require = |g: &Option<GridSpec>, name: &str| -> Result<Vec<f64>> {
        g.as_ref()
            .ok_or_else(|| Error::Config(format!("scenario requires {name}")))?
            .values()
    };
    let d_for = |lambda: f64, omega_b: f64, fallback: f64| {
        if cfg.d_at_trk {
            lambda * lambda / omega_b
        } else {
            fallback
        }
    };
    let points = match cfg.scenario {
        Scenario::QfiRatioVsLambda => require(&cfg.lambda_grid, "lambda_grid")?
            .into_iter()
            .map(|lam| {
                ModelParams::new(cfg.omega_a, cfg.omega_b, lam, d_for(lam, cfg.omega_b, cfg.d))
                    .map(PointSpec::Estimation)
            })
            .collect::<Result<Vec<_>>>()?,
        Scenario::TrkRatioMaps => {
            let lams = require(&cfg.lambda_grid, "lambda_grid")?;
            let was = require(&cfg.omega_a_grid, "omega_a_grid")?;
            let mut out = Vec::with_capacity(lams.len() * was.len());
            for lam in &lams {
                for wa in &was {
                    out.push(PointSpec::Estimation(ModelParams::new(
                        *wa,
                        cfg.omega_b,
                        *lam,
                        d_for(*lam, cfg.omega_b, cfg.d),
                    )?));
                }
            }
            out
        }
        Scenario::DiscriminationVsLambda => {
            let lc = (cfg.omega_a * cfg.omega_b).sqrt() / 2.0;
            require(&cfg.lambda_over_crit_grid, "lambda_over_crit_grid")?
                .into_iter()
                .map(|rel| PointSpec::Discrimination { lambda: rel * lc })
                .collect()
        }
        Scenario::LossVsEta => {
            let p = ModelParams::new(
                cfg.omega_a,
                cfg.omega_b,
                cfg.lambda,
                d_for(cfg.lambda, cfg.omega_b, cfg.d),
            )?;
            require(&cfg.eta_grid, "eta_grid")?
                .into_iter()
                .map(|eta| PointSpec::Loss { p, eta })
                .collect()
        }
        Scenario::Custom => {
            let one = |g: &Option<GridSpec>, fixed: f64| -> Result<Vec<f64>> {
                match g {
                    Some(g) => g.values(),
                    None => Ok(vec![fixed]),
                }
            };
            let was = one(&cfg.omega_a_grid, cfg.omega_a)?;
            let wbs = one(&cfg.omega_b_grid, cfg.omega_b)?;
            let lams = one(&cfg.lambda_grid, cfg.lambda)?;
            let ds = match (&cfg.d_grid, cfg.d_at_trk) {
                (Some(g), _) => Some(g.values()?),
                _ => None,
            };
            if cfg.omega_a_grid.is_none()
                && cfg.omega_b_grid.is_none()
                && cfg.lambda_grid.is_none()
                && ds.is_none()
            {
                return Err(Error::Config(
                    "custom scenario needs at least one grid".into(),
                ));
            }
            let mut out = Vec::new();
            for wa in &was {
                for wb in &wbs {
                    for lam in &lams {
                        let dvals = match &ds {
                            Some(v) => v.clone(),
                            None => vec![d_for(*lam, *wb, cfg.d)],
                        };
                        for d in dvals {
                            out.push(PointSpec::Estimation(ModelParams::new(*wa, *wb, *lam, d)?));
                        }
                    }
                }
            }
            out
        }
    };
    if points.is_empty() {
        return Err(Error::Config("empty grid".into()));
    }
    // reject configs with unstable points unless explicitly a boundary study
    if !cfg.boundary_study {
        for (k, pt) in points.iter().enumerate() {
            let p = match pt {
                PointSpec::Estimation(p) => *p,
                PointSpec::Loss { p, .. } => *p,
                PointSpec::Discrimination { lambda } => {
                    ModelParams::new(cfg.omega_a, cfg.omega_b, *lambda, 0.0)?
                }
            };
            let eff = match cfg.gauge {
                Gauge::Coulomb => p,
                Gauge::Dipole => p.dipole_gauge_map(),
            };
            if !eff.is_strictly_stable() {
                return Err(Error::Config(format!(
                    "grid point {k} is unstable (d = {}, d_crit = {}); set boundary_study to record such points as failures",
                    eff.d,
                    eff.d_crit()
                )));
            }
        }
    }
    Ok(points)
}

fn evaluate_point(cfg: &SweepConfig, index: usize, pt: &PointSpec) -> ResultRow {
    let map = |p: &ModelParams| match cfg.gauge {
        Gauge::Coulomb => *p,
        Gauge::Dipole => p.dipole_gauge_map(),
    };
    let (status, regime, columns) = match pt {
        PointSpec::Estimation(p) => {
            let eff = map(p);
            let mut opts = cfg.estimation_options();
            // the asymptote-aware path: no Fock ladder this close to the edge
            if eff.stability_margin() < 1e-6 * eff.omega_a {
                opts.skip_photon_counting = true;
            }
            match estimation_report(&eff, &opts) {
                Ok(rep) => ("ok".to_string(), regime_of(&eff), estimation_columns(p, Some(&rep))),
                Err(e) => (
                    error_class(&e).to_string(),
                    regime_of(&eff),
                    estimation_columns(p, None),
                ),
            }
        }
        PointSpec::Discrimination { lambda } => {
            let lc = (cfg.omega_a * cfg.omega_b).sqrt() / 2.0;
            let opts = cfg.discrimination_options();
            // the gauge swap leaves the D = 0 vs D_TRK pair intact up to the
            // mode relabeling, so it applies inside via the swapped params
            let (wa, wb) = match cfg.gauge {
                Gauge::Coulomb => (cfg.omega_a, cfg.omega_b),
                Gauge::Dipole => (cfg.omega_b, cfg.omega_a),
            };
            match discrimination_report(wa, wb, *lambda, None, &opts) {
                Ok(rep) => (
                    "ok".to_string(),
                    if (lc - lambda) / lc < 2e-6 { "near-critical" } else { "bulk" },
                    discrimination_columns(cfg.omega_a, cfg.omega_b, *lambda, lc, Some(&rep)),
                ),
                Err(e) => (
                    error_class(&e).to_string(),
                    "bulk",
                    discrimination_columns(cfg.omega_a, cfg.omega_b, *lambda, lc, None),
                ),
            }
        }
        PointSpec::Loss { p, eta } => {
            let eff = map(p);
            let result = lossy_single_mode_qfi(&eff, *eta)
                .and_then(|h| lossy_homodyne_fi(&eff, *eta).map(|f| (h, f)));
            match result {
                Ok(v) => ("ok".to_string(), regime_of(&eff), loss_columns(p, *eta, Some(v))),
                Err(e) => (
                    error_class(&e).to_string(),
                    regime_of(&eff),
                    loss_columns(p, *eta, None),
                ),
            }
        }
    };
    ResultRow {
        index,
        status,
        regime: regime.to_string(),
        gauge: cfg.gauge,
        columns,
        version: env!("CARGO_PKG_VERSION"),
        convention: CONVENTION_TAG,
    }
}

/// Outcome of a sweep run.
#[derive(Clone, Debug)]
pub struct SweepSummary {
    pub csv_path: PathBuf,
    pub rows: usize,
    pub failures: usize,
}

fn fmt_cell(v: Option<f64>) -> String {
    match v {
        // 17 significant digits: round-trips f64 exactly
        Some(x) => format!("{x:.16e}"),
        None => String::new(),
    }
}

fn write_csv(path: &Path, rows: &[ResultRow], gauge: Gauge) -> Result<()> {
    let mut out = String::new();
    let header: Vec<String> = ["index", "status", "regime", "gauge"]
        .iter()
        .map(|s| s.to_string())
        .chain(rows[0].columns.iter().map(|(name, _)| name.to_string()))
        .chain(["version".to_string(), "convention".to_string()])
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    let gauge_name = match gauge {
        Gauge::Coulomb => "coulomb",
        Gauge::Dipole => "dipole",
    };
    for row in rows {
        let mut cells = vec![
            row.index.to_string(),
            row.status.clone(),
            row.regime.clone(),
            gauge_name.to_string(),
        ];
        cells.extend(row.columns.iter().map(|(_, v)| fmt_cell(*v)));
        cells.push(row.version.to_string());
        cells.push(row.convention.to_string());
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Runs the sweep on a worker pool (grid order preserved in the output) and
/// writes `<out_dir>/<out_stem>.csv`.
pub fn run_sweep(cfg: &SweepConfig, out_dir: &Path, jobs: Option<usize>) -> Result<SweepSummary> {
    let points = build_points(cfg)?;
    fs::create_dir_all(out_dir)?;
    let eval = || -> Vec<ResultRow> {
        points
            .par_iter()
            .enumerate()
            .map(|(k, pt)| evaluate_point(cfg, k, pt))
            .collect()
    };
    let rows = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("worker pool: {e}")))?
            .install(eval),
        None => eval(),
    };
    let failures = rows.iter().filter(|r| r.status != "ok").count();
    if failures == rows.len() {
        return Err(Error::NotConverged("all grid points failed".into()));
    }
    validate_rows(&rows)?;
    let csv_path = out_dir.join(format!("{}.csv", cfg.out_stem));
    write_csv(&csv_path, &rows, cfg.gauge)?;
    Ok(SweepSummary {
        csv_path,
        rows: rows.len(),
        failures,
    })
}

/// Post-run spot check of the information-ordering invariants on the rows
/// that carry ratio columns.
fn validate_rows(rows: &[ResultRow]) -> Result<()> {
    for row in rows {
        if row.status != "ok" {
            continue;
        }
        let get = |name: &str| {
            row.columns
                .iter()
                .find(|(n, _)| *n == name)
                .and_then(|(_, v)| *v)
        };
        if let (Some(f), Some(ha), Some(h)) =
            (get("f_homodyne"), get("h_single_mode"), get("h_two_mode"))
        {
            let slack = 1e-6 * h.abs() + 1e-12;
            if !(f <= ha + slack && ha <= h + slack && f >= -slack) {
                return Err(Error::NotConverged(format!(
                    "row {} violates F ≤ H_a ≤ H: {f} / {ha} / {h}",
                    row.index
                )));
            }
        }
        if let (Some(pe), Some(pea)) = (get("p_e"), get("p_e_a")) {
            if pe > pea + 1e-9 {
                return Err(Error::NotConverged(format!(
                    "row {} violates P_e ≤ P_e^(a)",
                    row.index
                )));
            }
        }
    }
    Ok(())
}

fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Config("empty CSV".into()))?
        .split(',')
        .map(|s| s.to_string())
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(|s| s.to_string()).collect())
        .collect();
    Ok((header, rows))
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn column(&self, name: &str) -> Result<Vec<Option<f64>>> {
        let idx = self
            .header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Mismatch(format!("CSV schema: missing column {name}")))?;
        Ok(self
            .rows
            .iter()
            .map(|r| r.get(idx).and_then(|c| c.parse::<f64>().ok()))
            .collect())
    }

    fn xy(&self, x: &str, y: &str) -> Result<Vec<(f64, f64)>> {
        let xs = self.column(x)?;
        let ys = self.column(y)?;
        Ok(xs
            .into_iter()
            .zip(ys)
            .filter_map(|(a, b)| Some((a?, b?)))
            .collect())
    }
}

/// Renders the plots for a sweep's CSV. One SVG per estimation/loss sweep,
/// and for the discrimination scenario a main panel with a log-log inset
/// toward the critical coupling.
pub fn emit_plots(cfg: &SweepConfig, csv_path: &Path, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let (header, rows) = read_csv(csv_path)?;
    let table = Table { header, rows };
    fs::create_dir_all(out_dir)?;
    let mut plots: Vec<(String, Plot)> = Vec::new();
    match cfg.scenario {
        Scenario::QfiRatioVsLambda | Scenario::TrkRatioMaps | Scenario::Custom => {
            let x = if cfg.scenario == Scenario::Custom && cfg.d_grid.is_some() {
                "d"
            } else {
                "lambda"
            };
            let mut series = vec![
                Series {
                    name: "F(hd)/H".into(),
                    points: table.xy(x, "ratio_hd_h")?,
                },
                Series {
                    name: "F(hd)/H_a".into(),
                    points: table.xy(x, "ratio_hd_ha")?,
                },
            ];
            let pc_h = table.xy(x, "ratio_pc_h")?;
            if !pc_h.is_empty() {
                series.push(Series {
                    name: "F(pc)/H".into(),
                    points: pc_h,
                });
                series.push(Series {
                    name: "F(pc)/H_a".into(),
                    points: table.xy(x, "ratio_pc_ha")?,
                });
            }
            plots.push((
                format!("{}_ratios.svg", cfg.out_stem),
                Plot {
                    title: "Measurement information over QFI".into(),
                    x_label: x.into(),
                    y_label: "ratio".into(),
                    log_x: false,
                    log_y: false,
                    series,
                    inset: None,
                },
            ));
        }
        Scenario::LossVsEta => {
            plots.push((
                format!("{}_loss.svg", cfg.out_stem),
                Plot {
                    title: "Estimation under photon loss".into(),
                    x_label: "eta".into(),
                    y_label: "1/omega^2".into(),
                    log_x: false,
                    log_y: false,
                    series: vec![
                        Series {
                            name: "H_a".into(),
                            points: table.xy("eta", "h_single_mode")?,
                        },
                        Series {
                            name: "F(hd)".into(),
                            points: table.xy("eta", "f_homodyne")?,
                        },
                        Series {
                            name: "F/H_a".into(),
                            points: table.xy("eta", "ratio")?,
                        },
                    ],
                    inset: None,
                },
            ));
        }
        Scenario::DiscriminationVsLambda => {
            let names = [
                ("p_e", "P_e"),
                ("p_e_a", "P_e(a)"),
                ("p_e_hd", "P_e(hd)"),
                ("p_e_pc", "P_e(pc)"),
            ];
            let mut main = Vec::new();
            let mut inset = Vec::new();
            for (col, label) in names {
                let pts = table.xy("lambda_over_crit", col)?;
                inset.push(Series {
                    name: label.into(),
                    points: pts.iter().map(|&(x, y)| (1.0 - x, y)).collect(),
                });
                main.push(Series {
                    name: label.into(),
                    points: pts,
                });
            }
            plots.push((
                format!("{}_discrimination.svg", cfg.out_stem),
                Plot {
                    title: "Error probabilities, D = 0 vs D = D_TRK".into(),
                    x_label: "lambda/lambda_crit".into(),
                    y_label: "P_e".into(),
                    log_x: false,
                    log_y: false,
                    series: main,
                    inset: Some(Box::new(Plot {
                        title: String::new(),
                        x_label: String::new(),
                        y_label: String::new(),
                        log_x: true,
                        log_y: true,
                        series: inset,
                        inset: None,
                    })),
                },
            ));
        }
    }
    let mut written = Vec::new();
    for (name, plot) in plots {
        let path = out_dir.join(name);
        fs::write(&path, plot.to_svg())?;
        written.push(path);
    }
    Ok(written)
}
