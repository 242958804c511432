//! Mode drivers: run the requested experiment, write CSVs into the output
//! directory, and print a short summary per run.

use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use qwalk_core::analysis::DEFAULT_SMOOTH_WINDOW;
use qwalk_core::bessel::{self, IDENTITY_SUITE_ARGS};
use qwalk_core::evolve::evolve;
use qwalk_core::{
    detect_localization, fit_logarithmic, fit_power_law, io as qio, predict_regime, smooth,
    snapshot_distribution, AnalyticModel, CoinSchedule, FitResult, LocalizationVerdict,
    MomentRecord, MomentSeries,
};

use crate::config::{Mode, ResolvedConfig, ScheduleSpec};

/// Identity-suite tolerance for the `identities` mode exit status.
const IDENTITY_TOLERANCE: f64 = 1e-10;

/// Exponent agreement required by the `analytic-compare` mode exit status.
const COMPARE_TOLERANCE: f64 = 0.03;

/// Probability threshold defining the support edge in snapshot summaries.
const EDGE_THRESHOLD: f64 = 1e-6;

/// Runner errors; the variant fixes the process exit code
/// (1 validation, 2 numerical, 3 I/O).
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid configuration: {m}"),
            CliError::Numerical(m) => write!(f, "numerical acceptance failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<qwalk_core::Error> for CliError {
    fn from(e: qwalk_core::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// Run the resolved experiment.
pub fn execute(cfg: &ResolvedConfig) -> Result<(), CliError> {
    match cfg.mode {
        Mode::Evolve => run_evolve(cfg),
        Mode::Snapshot => run_snapshot(cfg),
        Mode::Sweep => run_sweep(cfg),
        Mode::AnalyticCompare => run_compare(cfg),
        Mode::Identities => run_identities(),
    }
}

fn ensure_out_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))
}

fn write_file(
    path: &Path,
    write: impl FnOnce(&mut BufWriter<fs::File>) -> std::io::Result<()>,
) -> Result<(), CliError> {
    let file = fs::File::create(path)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    write(&mut w).and_then(|_| w.flush())
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn cell(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_cell(x: Option<f64>) -> String {
    x.map(cell).unwrap_or_default()
}

/// Fit window floor: large-n regime, but at least ten reference steps out.
fn fit_floor(n0: u64) -> u64 {
    1_000.max(10 * n0)
}

fn series_path(dir: &Path, alpha: f64) -> PathBuf {
    dir.join(format!("series_alpha{alpha}.csv"))
}

// ---------------------------------------------------------------- evolve

fn run_evolve(cfg: &ResolvedConfig) -> Result<(), CliError> {
    let spec = cfg
        .schedule
        .clone()
        .unwrap_or(ScheduleSpec::PowerLaw { alpha: 0.0 });
    let schedule = spec.build()?;
    let initial = cfg.initial.build()?;
    let run = evolve(initial, &schedule, cfg.n_max, cfg.record_every)?;

    ensure_out_dir(&cfg.out_dir)?;
    let path = cfg.out_dir.join("series.csv");
    write_file(&path, |w| qio::write_series_csv(w, &run.series))?;

    let last = run.series.records.last().expect("run has records");
    println!(
        "evolve {}: n={} sigma={:.6} m1={:.3e} |norm-1|={:.2e} -> {}",
        schedule,
        last.n,
        last.sigma,
        last.m1,
        (run.final_state.norm() - 1.0).abs(),
        path.display()
    );
    Ok(())
}

// -------------------------------------------------------------- snapshot

fn run_snapshot(cfg: &ResolvedConfig) -> Result<(), CliError> {
    ensure_out_dir(&cfg.out_dir)?;
    let mut rows = Vec::new();
    for &alpha in &cfg.alphas {
        let schedule = CoinSchedule::power_law(alpha)?;
        let initial = cfg.initial.build()?;
        let dist = snapshot_distribution(initial, &schedule, cfg.n_max)?;
        let path = cfg.out_dir.join(format!("dist_alpha{alpha}_n{}.csv", cfg.n_max));
        write_file(&path, |w| qio::write_distribution_csv(w, &dist))?;

        let edge = dist.support_edge(EDGE_THRESHOLD);
        let m = dist.moments()?;
        println!(
            "snapshot alpha={alpha}: n={} edge(P>{EDGE_THRESHOLD:.0e})={} sigma={:.4} -> {}",
            cfg.n_max,
            edge.map_or("-".into(), |e| e.to_string()),
            m.sigma,
            path.display()
        );
        rows.push((alpha, edge, m));
    }

    let path = cfg.out_dir.join("snapshot_summary.csv");
    write_file(&path, |w| {
        writeln!(w, "alpha,n,support_edge,m1,m2,sigma")?;
        for (alpha, edge, m) in &rows {
            writeln!(
                w,
                "{alpha},{},{},{},{},{}",
                cfg.n_max,
                edge.map(|e| e.to_string()).unwrap_or_default(),
                cell(m.m1),
                cell(m.m2),
                cell(m.sigma)
            )?;
        }
        Ok(())
    })
}

// ----------------------------------------------------------------- sweep

struct SweepRow {
    alpha: f64,
    regime: String,
    predicted_exponent: Option<f64>,
    power: Option<FitResult>,
    log: Option<FitResult>,
    localization: Option<LocalizationVerdict>,
}

fn sweep_one(cfg: &ResolvedConfig, alpha: f64) -> Result<SweepRow, CliError> {
    let schedule = CoinSchedule::power_law(alpha)?;
    let initial = cfg.initial.build()?;
    let run = evolve(initial, &schedule, cfg.n_max, cfg.record_every)?;
    write_file(&series_path(&cfg.out_dir, alpha), |w| {
        qio::write_series_csv(w, &run.series)
    })?;

    let lo = fit_floor(cfg.n0);
    let power = fit_power_law(&run.series, lo, cfg.n_max).ok();
    let log = smooth(&run.series, DEFAULT_SMOOTH_WINDOW)
        .and_then(|s| fit_logarithmic(&s, lo, cfg.n_max))
        .ok();
    let localization = detect_localization(&run.series, lo).ok();
    let prediction = predict_regime(alpha)?;

    Ok(SweepRow {
        alpha,
        regime: prediction.regime.to_string(),
        predicted_exponent: prediction.law.exponent(),
        power,
        log,
        localization,
    })
}

fn thread_count(jobs: usize) -> usize {
    let configured = std::env::var("QWALK_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    let available = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    configured.unwrap_or(available).clamp(1, jobs.max(1))
}

fn run_sweep(cfg: &ResolvedConfig) -> Result<(), CliError> {
    ensure_out_dir(&cfg.out_dir)?;
    let jobs = cfg.alphas.len();
    let rows: Mutex<Vec<Option<SweepRow>>> =
        Mutex::new((0..jobs).map(|_| None).collect());
    let failures: Mutex<Vec<CliError>> = Mutex::new(Vec::new());
    let next = AtomicUsize::new(0);

    std::thread::scope(|scope| {
        for _ in 0..thread_count(jobs) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs {
                    break;
                }
                match sweep_one(cfg, cfg.alphas[i]) {
                    Ok(row) => rows.lock().unwrap()[i] = Some(row),
                    Err(e) => failures.lock().unwrap().push(e),
                }
            });
        }
    });

    if let Some(e) = failures.into_inner().unwrap().into_iter().next() {
        return Err(e);
    }
    let rows: Vec<SweepRow> = rows
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every job completed"))
        .collect();

    for row in &rows {
        match (&row.power, row.predicted_exponent) {
            (Some(fit), Some(target)) => println!(
                "sweep alpha={}: exponent={:.4} predicted={:.4} ({}), R^2={:.6}",
                row.alpha, fit.exponent, target, row.regime, fit.r_squared
            ),
            (Some(fit), None) => println!(
                "sweep alpha={}: exponent={:.4} ({}), R^2={:.6}",
                row.alpha, fit.exponent, row.regime, fit.r_squared
            ),
            (None, _) => {
                eprintln!(
                    "sweep alpha={}: too few records in [{}, {}] for a fit ({})",
                    row.alpha,
                    fit_floor(cfg.n0),
                    cfg.n_max,
                    row.regime
                );
                println!("sweep alpha={}: no fit ({})", row.alpha, row.regime);
            }
        }
    }

    let fit_rows: Vec<(f64, FitResult)> = rows
        .iter()
        .filter_map(|r| r.power.map(|f| (r.alpha, f)))
        .collect();
    write_file(&cfg.out_dir.join("fits.csv"), |w| {
        qio::write_fit_results_csv(w, &fit_rows)
    })?;

    write_file(&cfg.out_dir.join("summary.csv"), |w| {
        writeln!(
            w,
            "alpha,regime,predicted_exponent,exponent,prefactor,r_squared,\
             log_slope,log_intercept,log_r_squared,is_localized,sigma_mean,sigma_range"
        )?;
        for r in &rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                r.alpha,
                r.regime,
                opt_cell(r.predicted_exponent),
                opt_cell(r.power.map(|f| f.exponent)),
                opt_cell(r.power.map(|f| f.prefactor)),
                opt_cell(r.power.map(|f| f.r_squared)),
                opt_cell(r.log.map(|f| f.exponent)),
                opt_cell(r.log.map(|f| f.prefactor)),
                opt_cell(r.log.map(|f| f.r_squared)),
                r.localization
                    .map(|v| v.is_localized.to_string())
                    .unwrap_or_default(),
                opt_cell(r.localization.map(|v| v.sigma_mean)),
                opt_cell(r.localization.map(|v| v.sigma_range)),
            )?;
        }
        Ok(())
    })
}

// --------------------------------------------------------------- compare

fn run_compare(cfg: &ResolvedConfig) -> Result<(), CliError> {
    let alpha = cfg.alphas[0];
    let schedule = CoinSchedule::power_law(alpha)?;
    let initial = cfg.initial.build()?;

    // Evolve to the reference step, freeze the model there, keep going.
    let seed_run = evolve(initial, &schedule, cfg.n0, cfg.n0)?;
    let model = AnalyticModel::from_state(&seed_run.final_state, alpha)?;
    let coeffs = model.sigma_coefficients()?;
    let run = evolve(seed_run.final_state, &schedule, cfg.n_max, cfg.record_every)?;

    ensure_out_dir(&cfg.out_dir)?;
    let path = cfg.out_dir.join(format!("compare_alpha{alpha}.csv"));
    let analytic: Vec<MomentRecord> = run
        .series
        .records
        .iter()
        .map(|r| {
            let sigma = coeffs.sigma_at(model.t_star(r.n));
            MomentRecord {
                n: r.n,
                m1: 0.0,
                m2: sigma * sigma,
                sigma,
            }
        })
        .collect();
    write_file(&path, |w| {
        writeln!(w, "n,sigma_discrete,sigma_analytic,ratio")?;
        for (d, a) in run.series.records.iter().zip(&analytic) {
            writeln!(
                w,
                "{},{},{},{}",
                d.n,
                cell(d.sigma),
                cell(a.sigma),
                cell(d.sigma / a.sigma)
            )?;
        }
        Ok(())
    })?;

    let lo = fit_floor(cfg.n0);
    let analytic_series = MomentSeries {
        records: analytic,
        schedule_descriptor: format!("analytic({})", run.series.schedule_descriptor),
    };
    let fit_d = fit_power_law(&run.series, lo, cfg.n_max)
        .map_err(|e| CliError::Validation(format!("discrete fit over [{lo}, {}]: {e}", cfg.n_max)))?;
    let fit_a = fit_power_law(&analytic_series, lo, cfg.n_max)
        .map_err(|e| CliError::Validation(format!("analytic fit over [{lo}, {}]: {e}", cfg.n_max)))?;
    let diff = (fit_d.exponent - fit_a.exponent).abs();

    println!(
        "analytic-compare alpha={alpha} (n0={}): A={:.6} B={:.3e} C={:.6}",
        cfg.n0, coeffs.a, coeffs.b, coeffs.c
    );
    println!(
        "  exponent over [{lo}, {}]: discrete={:.4} analytic={:.4} |diff|={:.4} (tolerance {COMPARE_TOLERANCE}) -> {}",
        cfg.n_max,
        fit_d.exponent,
        fit_a.exponent,
        diff,
        path.display()
    );
    if diff > COMPARE_TOLERANCE {
        return Err(CliError::Numerical(format!(
            "discrete and analytic sigma exponents disagree by {diff:.4} > {COMPARE_TOLERANCE}"
        )));
    }
    Ok(())
}

// ------------------------------------------------------------ identities

fn run_identities() -> Result<(), CliError> {
    let mut args = vec![0.0];
    args.extend_from_slice(&IDENTITY_SUITE_ARGS);
    let report = bessel::run_identity_suite(&args)?;

    println!("Bessel product-sum identities, max |error| by (p, t):");
    for p in 0..=2u32 {
        let mut line = format!("  p={p}:");
        for &t in &args {
            let worst = report
                .cases
                .iter()
                .filter(|c| c.p == p && c.t == t)
                .map(|c| c.abs_err)
                .fold(0.0f64, f64::max);
            line.push_str(&format!(" t={t}: {worst:.2e}"));
        }
        println!("{line}");
    }
    println!(
        "overall max |error| = {:.3e} over {} cases (tolerance {IDENTITY_TOLERANCE:.0e})",
        report.max_abs_err,
        report.cases.len()
    );
    if report.max_abs_err >= IDENTITY_TOLERANCE {
        return Err(CliError::Numerical(format!(
            "identity error {:.3e} exceeds {IDENTITY_TOLERANCE:.0e}",
            report.max_abs_err
        )));
    }
    Ok(())
}
