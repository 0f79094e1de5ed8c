//! Python bindings exposing the valuation engine on the bundled data set.

use fdb_core::almsim::{self, LedgerConfig, RateModel};
use fdb_core::bounds::{bounds_report, sensitivity_grid, EstimationParams, Scenario};
use fdb_core::{bachelier, calibration, data};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err(e: fdb_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn year_inputs(year: u16) -> PyResult<(fdb_core::bounds::BalanceSheetInputs, fdb_core::curves::DiscountCurve)> {
    let bs = data::balance_sheet(year)
        .ok_or_else(|| PyValueError::new_err(format!("no bundled data for {year}")))?;
    let curve = data::discount_curve(year).expect("curve exists when balance sheet does");
    Ok((bs, curve))
}

/// Bound report for a bundled valuation date, billions.
#[pyfunction]
#[pyo3(signature = (year, article91 = true))]
fn base_report(py: Python<'_>, year: u16, article91: bool) -> PyResult<Py<PyDict>> {
    let (bs, curve) = year_inputs(year)?;
    let params = EstimationParams { article91, ..EstimationParams::default() };
    let r = bounds_report(&bs, &params, &curve, &data::base_vols()).map_err(err)?;
    let d = PyDict::new(py);
    for (k, v) in [
        ("lb", r.lb),
        ("ub", r.ub),
        ("fdb", r.fdb),
        ("eps", r.eps),
        ("delta", r.delta),
        ("ii", r.ii),
        ("cog", r.cog),
        ("iii_lb", r.iii_lb),
        ("iii_ub", r.iii_ub),
        ("mv0", r.mv0),
    ] {
        d.set_item(k, v)?;
    }
    Ok(d.into())
}

/// Sensitivity deltas (percent of reported value) for scenario strings like
/// "rho*1.25" or "h=12".
#[pyfunction]
fn sensitivities(py: Python<'_>, year: u16, scenarios: Vec<String>) -> PyResult<Vec<Py<PyDict>>> {
    let (bs, curve) = year_inputs(year)?;
    let parsed = scenarios
        .iter()
        .map(|s| Scenario::parse(s))
        .collect::<fdb_core::Result<Vec<_>>>()
        .map_err(err)?;
    let rows = sensitivity_grid(&bs, &EstimationParams::default(), &curve, &data::base_vols(), &parsed)
        .map_err(err)?;
    rows.into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("scenario", r.scenario)?;
            d.set_item("dfdb", r.d_fdb)?;
            d.set_item("dlb", r.d_lb)?;
            d.set_item("dub", r.d_ub)?;
            Ok(d.into())
        })
        .collect()
}

/// (gamma, nph, gph) from the bundled market aggregates.
#[pyfunction]
#[pyo3(signature = (year, tau = 0.299))]
fn calibrate(year: u16, tau: f64) -> PyResult<(f64, f64, f64)> {
    let gagg = data::gamma_aggregates(year)
        .ok_or_else(|| PyValueError::new_err(format!("no bundled aggregates for {year}")))?;
    let nagg = data::nph_aggregates(year).expect("nph table covers the same years");
    let tax = calibration::TaxContext::new(tau).map_err(err)?;
    let gamma = calibration::gamma_from_market(&gagg).map_err(err)?;
    let n = calibration::nph(&nagg).map_err(err)?;
    let gph = calibration::gph_from_nph(n, &tax).map_err(err)?;
    Ok((gamma, n, gph))
}

/// Normal-model caplet/floorlet pair.
#[pyfunction]
fn caplet_floorlet(s: usize, forward: f64, strike: f64, vol: f64, discount: f64) -> PyResult<(f64, f64)> {
    bachelier::caplet_floorlet(s, forward, strike, vol, discount).map_err(err)
}

/// Small Monte Carlo validation run on bundled data; returns FDB with its
/// standard error plus the simulated guaranteed-benefit value.
#[pyfunction]
#[pyo3(signature = (year, paths = 2000, seed = 42, rate_vol = 0.005))]
fn simulate(py: Python<'_>, year: u16, paths: usize, seed: u64, rate_vol: f64) -> PyResult<Py<PyDict>> {
    let (bs, curve) = year_inputs(year)?;
    let params = EstimationParams::default();
    let cfg = LedgerConfig::from_params(&bs, &params, 0.299);
    let model = RateModel { vol: rate_vol, seed, paths };
    let rates = almsim::simulate_rates(&curve, &model, cfg.horizon).map_err(err)?;
    let ledgers = almsim::simulate_paths(&rates, &cfg).map_err(err)?;
    let val = almsim::value(&rates, &ledgers, &cfg);
    // Bracketing is checked against the raw bounds, with the ledger's own
    // guaranteed benefits fed back into the bound formula.
    let mut raw = params.clone();
    raw.article91 = false;
    let mut bs_mc = bs.clone();
    bs_mc.gb = val.gb.mean;
    let report = bounds_report(&bs_mc, &raw, &curve, &data::base_vols()).map_err(err)?;
    let bracket = almsim::verify_bracketing(&val, &report);
    let d = PyDict::new(py);
    d.set_item("fdb_mc", val.fdb.mean)?;
    d.set_item("fdb_se", val.fdb.se)?;
    d.set_item("gb_mc", val.gb.mean)?;
    d.set_item("no_leakage_residual", val.no_leakage_residual.mean)?;
    d.set_item("bracket_ok", bracket.ok)?;
    d.set_item("lower_margin", bracket.lower_margin)?;
    d.set_item("upper_margin", bracket.upper_margin)?;
    Ok(d.into())
}

#[pymodule]
fn fdb_engine(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(base_report, m)?)?;
    m.add_function(wrap_pyfunction!(sensitivities, m)?)?;
    m.add_function(wrap_pyfunction!(calibrate, m)?)?;
    m.add_function(wrap_pyfunction!(caplet_floorlet, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    Ok(())
}
