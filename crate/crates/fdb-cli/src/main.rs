use clap::{Parser, Subcommand};
use fdb_core::almsim::{self, LedgerConfig, RateModel};
use fdb_core::bounds::{bounds_report, sensitivity_grid, BoundsReport, SensitivityRow};
use fdb_core::calibration;
use fdb_core::config::Setup;
use fdb_core::curves::{DiscountCurve, VolCurve};
use fdb_core::report::{emit_report, emit_report_pct, emit_sensitivities, Format};
use fdb_core::{reference, Error};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

/// Valuation engine for future discretionary benefits: analytic bounds,
/// market calibration and Monte Carlo validation.
#[derive(Parser)]
#[command(name = "fdb", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write reports into this directory instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format: csv or md.
    #[arg(long, global = true, default_value = "csv")]
    format: String,
    /// Override the simulator seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the simulator path count.
    #[arg(long, global = true)]
    paths: Option<usize>,
    /// Report raw bounds without the surplus-fund deduction.
    #[arg(long = "no-art91", global = true)]
    no_art91: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute bounds and sensitivity tables for every valuation date.
    Run { config: PathBuf },
    /// Compare computed values against the bundled golden tables.
    Check { config: PathBuf },
    /// Run the Monte Carlo oracle and its identity checks.
    Simulate { config: PathBuf },
    /// Derive gamma / nph / gph from the market aggregates.
    Calibrate { config: PathBuf },
}

const EXIT_CONFIG: u8 = 1;
const EXIT_INVARIANT: u8 = 2;
const EXIT_GOLDEN: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match Format::from_str(&cli.format) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let status = match &cli.cmd {
        Cmd::Run { config } => cmd_run(config, &cli, format),
        Cmd::Check { config } => cmd_check(config, &cli),
        Cmd::Simulate { config } => cmd_simulate(config, &cli),
        Cmd::Calibrate { config } => cmd_calibrate(config, format),
    };
    match status {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Invariant(_) => EXIT_INVARIANT,
                _ => EXIT_CONFIG,
            };
            ExitCode::from(code)
        }
    }
}

struct Computed {
    setup: Setup,
    reports: Vec<(String, BoundsReport)>,
    sensitivities: Vec<(String, SensitivityRow)>,
}

fn compute(config: &Path, cli: &Cli) -> Result<Computed, Error> {
    let mut setup = Setup::load(config)?;
    if cli.no_art91 {
        setup.params.article91 = false;
    }
    let vols = VolCurve::load(&setup.vols_path)?;
    let mut reports = Vec::new();
    let mut sensitivities = Vec::new();
    for date in &setup.dates {
        let curve = DiscountCurve::load(&date.curve_path)?;
        reports.push((date.label.clone(), bounds_report(&date.bs, &setup.params, &curve, &vols)?));
        for row in sensitivity_grid(&date.bs, &setup.params, &curve, &vols, &setup.scenarios)? {
            sensitivities.push((date.label.clone(), row));
        }
    }
    Ok(Computed { setup, reports, sensitivities })
}

fn write_or_print(out: &Option<PathBuf>, name: &str, format: Format, text: &str) -> Result<(), Error> {
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .map_err(|source| Error::Io { path: dir.clone(), source })?;
            let ext = match format {
                Format::Csv => "csv",
                Format::Markdown => "md",
            };
            let path = dir.join(format!("{name}.{ext}"));
            std::fs::write(&path, text).map_err(|source| Error::Io { path, source })?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_run(config: &Path, cli: &Cli, format: Format) -> Result<u8, Error> {
    let c = compute(config, cli)?;
    write_or_print(&cli.out, "base", format, &emit_report(&c.reports, format))?;
    if cli.out.is_none() {
        println!();
    }
    write_or_print(&cli.out, "base_pct", format, &emit_report_pct(&c.reports, format))?;
    if !c.sensitivities.is_empty() {
        if cli.out.is_none() {
            println!();
        }
        write_or_print(
            &cli.out,
            "sensitivities",
            format,
            &emit_sensitivities(&c.sensitivities, format),
        )?;
    }
    Ok(0)
}

fn check_line(failures: &mut usize, ok: bool, what: &str) {
    println!("{} {what}", if ok { "PASS" } else { "FAIL" });
    if !ok {
        *failures += 1;
    }
}

fn cmd_check(config: &Path, cli: &Cli) -> Result<u8, Error> {
    let c = compute(config, cli)?;
    let refs = c
        .setup
        .reference
        .as_ref()
        .ok_or_else(|| Error::domain("check mode needs a [reference] section"))?;
    let mut failures = 0usize;

    let base = reference::load_base(&refs.base)?;
    for row in &base {
        let (label, r) = c
            .reports
            .iter()
            .find(|(l, _)| *l == row.year.to_string())
            .ok_or_else(|| Error::domain(format!("no [date {}] in config", row.year)))?;
        for (name, got, want) in [
            ("lb", r.lb, row.lb),
            ("ub", r.ub, row.ub),
            ("fdb", r.fdb, row.fdb),
            ("ii", r.ii, row.ii),
            ("cog", r.cog, row.cog),
        ] {
            check_line(
                &mut failures,
                (got - want).abs() <= 0.5,
                &format!("base {label} {name}: {got:.2} vs {want:.2} (tol 0.5)"),
            );
        }
    }

    let pct = reference::load_base(&refs.base_pct)?;
    for row in &pct {
        let (label, r) = c
            .reports
            .iter()
            .find(|(l, _)| *l == row.year.to_string())
            .ok_or_else(|| Error::domain(format!("no [date {}] in config", row.year)))?;
        for (name, got, want) in [
            ("lb", r.pct_of_mv0(r.lb), row.lb),
            ("ub", r.pct_of_mv0(r.ub), row.ub),
            ("fdb", r.pct_of_mv0(r.fdb), row.fdb),
            ("ii", r.pct_of_mv0(r.ii), row.ii),
            ("cog", r.pct_of_mv0(r.cog), row.cog),
        ] {
            check_line(
                &mut failures,
                (got - want).abs() <= 0.25,
                &format!("pct {label} {name}: {got:.2} vs {want:.2} (tol 0.25)"),
            );
        }
    }

    let sens = reference::load_sens(&refs.sensitivities)?;
    for row in &sens {
        let got = c
            .sensitivities
            .iter()
            .find(|(l, s)| *l == row.year.to_string() && s.scenario == row.scenario)
            .map(|(_, s)| s)
            .ok_or_else(|| {
                Error::domain(format!("scenario {} missing for {}", row.scenario, row.year))
            })?;
        for (name, g, w) in [
            ("dfdb", got.d_fdb, row.d_fdb),
            ("dlb", got.d_lb, row.d_lb),
            ("dub", got.d_ub, row.d_ub),
        ] {
            let sign_ok = if w.abs() < 0.005 { g.abs() <= 0.6 } else { g * w >= 0.0 };
            let ok = sign_ok && (g - w).abs() <= 0.6;
            check_line(
                &mut failures,
                ok,
                &format!("sens {} {} {name}: {g:+.2} vs {w:+.2} (tol 0.6)", row.scenario, row.year),
            );
        }
    }

    if let Some(cal) = &c.setup.calibration {
        let golden = reference::load_calibration(&refs.calibration)?;
        let tax = calibration::TaxContext::new(cal.tau)?;
        let gamma_table = calibration::load_gamma_table(&cal.gamma_aggregates)?;
        let nph_table = calibration::load_nph_table(&cal.nph_aggregates)?;
        let mut gphs = Vec::new();
        for row in &golden {
            let gagg = gamma_table
                .iter()
                .find(|(y, _)| *y == row.year)
                .ok_or_else(|| Error::domain(format!("no gamma aggregates for {}", row.year)))?;
            let nagg = nph_table
                .iter()
                .find(|(y, _)| *y == row.year)
                .ok_or_else(|| Error::domain(format!("no nph aggregates for {}", row.year)))?;
            let g = 100.0 * calibration::gamma_from_market(&gagg.1)?;
            check_line(
                &mut failures,
                (g - row.gamma_pct).abs() <= 0.03,
                &format!("calibration {} gamma: {g:.3}% vs {:.2}% (tol 0.03pp)", row.year, row.gamma_pct),
            );
            let gph = 100.0 * calibration::gph_from_nph(calibration::nph(&nagg.1)?, &tax)?;
            gphs.push(gph);
            check_line(
                &mut failures,
                (gph - row.gph_pct).abs() <= 0.6,
                &format!("calibration {} gph: {gph:.2}% vs {:.1}% (tol 0.6pp)", row.year, row.gph_pct),
            );
        }
        let avg = calibration::average_gph(&gphs)?;
        check_line(
            &mut failures,
            (avg - 75.5).abs() <= 0.1,
            &format!("calibration average gph: {avg:.2}% vs 75.5% (tol 0.1pp)"),
        );
    }

    if failures > 0 {
        println!("{failures} golden check(s) failed");
        return Ok(EXIT_GOLDEN);
    }
    println!("all golden checks passed");
    Ok(0)
}

fn cmd_simulate(config: &Path, cli: &Cli) -> Result<u8, Error> {
    let c = compute(config, cli)?;
    let mut sim = c
        .setup
        .simulator
        .ok_or_else(|| Error::domain("simulate mode needs a [simulator] section"))?;
    if let Some(seed) = cli.seed {
        sim.seed = seed;
    }
    if let Some(paths) = cli.paths {
        sim.paths = paths;
    }
    let vols = VolCurve::load(&c.setup.vols_path)?;
    let mut bad = 0usize;
    for date in &c.setup.dates {
        let curve = DiscountCurve::load(&date.curve_path)?;
        let cfg = LedgerConfig::from_params(
            &date.bs,
            &c.setup.params,
            c.setup.calibration.as_ref().map_or(0.299, |cal| cal.tau),
        );
        let model = RateModel { vol: sim.rate_vol, seed: sim.seed, paths: sim.paths };
        let rates = almsim::simulate_rates(&curve, &model, cfg.horizon)?;
        let ledgers = almsim::simulate_paths(&rates, &cfg)?;
        let val = almsim::value(&rates, &ledgers, &cfg);
        let rep = almsim::verify_representation(&rates, &ledgers, &cfg);
        println!(
            "{}: fdb_mc {:.3} +- {:.3}, gb_mc {:.3}, no-leakage residual {:.2e}, representation residual {:.2e}",
            date.label, val.fdb.mean, val.fdb.se, val.gb.mean,
            val.no_leakage_residual.mean, rep.mean
        );
        // Bracket against bounds evaluated on the simulator's own guaranteed
        // benefits, without the surplus-fund deduction.
        let mut bs = date.bs;
        bs.gb = val.gb.mean;
        let mut params = c.setup.params;
        params.article91 = false;
        let report = bounds_report(&bs, &params, &curve, &vols)?;
        let bracket = almsim::verify_bracketing(&val, &report);
        println!(
            "{}: bounds [{:.3}, {:.3}] bracket fdb_mc: {} (margins {:.3} / {:.3})",
            date.label, report.lb, report.ub, bracket.ok, bracket.lower_margin, bracket.upper_margin
        );
        if !bracket.ok || !val.no_leakage_residual.within_3se_of(0.0) || !rep.within_3se_of(0.0) {
            bad += 1;
        }
    }
    if bad > 0 {
        Err(Error::invariant(format!("{bad} simulator check(s) failed")))
    } else {
        Ok(0)
    }
}

fn cmd_calibrate(config: &Path, format: Format) -> Result<u8, Error> {
    let setup = Setup::load(config)?;
    let cal = setup
        .calibration
        .ok_or_else(|| Error::domain("calibrate mode needs a [calibration] section"))?;
    let tax = calibration::TaxContext::new(cal.tau)?;
    let gamma_table = calibration::load_gamma_table(&cal.gamma_aggregates)?;
    let nph_table = calibration::load_nph_table(&cal.nph_aggregates)?;
    let mut rows = Vec::new();
    let mut gphs = Vec::new();
    for (year, gagg) in &gamma_table {
        let gamma = calibration::gamma_from_market(gagg)?;
        let nagg = nph_table
            .iter()
            .find(|(y, _)| y == year)
            .ok_or_else(|| Error::domain(format!("no nph aggregates for {year}")))?;
        let n = calibration::nph(&nagg.1)?;
        let gph = calibration::gph_from_nph(n, &tax)?;
        gphs.push(gph);
        rows.push((year.to_string(), gamma, n, gph));
    }
    let avg = calibration::average_gph(&gphs)?;
    match format {
        Format::Csv => {
            println!("year,gamma_pct,nph_pct,gph_pct");
            for (y, g, n, p) in &rows {
                println!("{y},{:.2},{:.1},{:.1}", g * 100.0, n * 100.0, p * 100.0);
            }
            println!("average,,,{:.1}", avg * 100.0);
        }
        Format::Markdown => {
            println!("| year | gamma | nph | gph |\n|---|---|---|---|");
            for (y, g, n, p) in &rows {
                println!("| {y} | {:.2}% | {:.1}% | {:.1}% |", g * 100.0, n * 100.0, p * 100.0);
            }
            println!("| average | | | {:.1}% |", avg * 100.0);
        }
    }
    Ok(0)
}
