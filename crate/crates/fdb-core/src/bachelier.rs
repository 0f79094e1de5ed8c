//! Normal-model (Bachelier) caplet/floorlet pricing and the guarantee-strike
//! construction used by the bound estimators.

use crate::curves::DiscountCurve;
use crate::error::{Error, Result};
use crate::runoff::RunoffParams;
use statrs::function::erf::erf;

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const SQRT_2PI: f64 = 2.5066282746310002;

/// Standard normal CDF.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * (1.0 + erf(x / SQRT_2))
}

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_2PI
}

/// Decay parameters feeding the strike: `d` drives the unrealized-gains
/// amortization, `h` the in-force book.
#[derive(Debug, Clone, Copy)]
pub struct StrikeInputs {
    pub ug0: f64,
    pub lp0: f64,
    pub theta: f64,
    pub sigma: f64,
    pub rho: f64,
    pub gamma: f64,
    pub ug_half_life: f64,
}

/// Strike of the year-`s` guarantee option:
/// `k_s = -(1/P(0,s)) * ((l_{s-1}^d - l_s^d)/l_{s-1}^h) * UG0/((1+theta) LP0)
///        + ((1-sigma) rho - gamma)/(1+theta)`.
pub fn strike(s: usize, curve: &DiscountCurve, runoff: &RunoffParams, inp: &StrikeInputs) -> Result<f64> {
    if s < 1 || s > runoff.horizon {
        return Err(Error::domain(format!("strike index {s} outside 1..={}", runoff.horizon)));
    }
    if !(inp.lp0 > 0.0) {
        return Err(Error::domain("lp0 must be positive"));
    }
    let ld = |t: usize| -> f64 {
        if t >= runoff.horizon {
            0.0
        } else {
            (2.0_f64).powf(-(t as f64) / inp.ug_half_life)
        }
    };
    let lh = runoff.l_factor(s - 1);
    if lh == 0.0 {
        return Err(Error::domain("in-force factor vanished before the strike year"));
    }
    let ug_term = -(1.0 / curve.price(s)?) * ((ld(s - 1) - ld(s)) / lh) * inp.ug0
        / ((1.0 + inp.theta) * inp.lp0);
    Ok(ug_term + ((1.0 - inp.sigma) * inp.rho - inp.gamma) / (1.0 + inp.theta))
}

/// Prices the year-`s` caplet/floorlet pair on a normally distributed
/// forward. `vol` is the absolute vol per √year; total stdev is `vol·√s`.
/// At zero vol the intrinsic pair is returned directly.
pub fn caplet_floorlet(
    s: usize,
    forward: f64,
    strike: f64,
    vol: f64,
    discount: f64,
) -> Result<(f64, f64)> {
    if s < 1 {
        return Err(Error::domain("option maturity must be >= 1"));
    }
    if vol < 0.0 {
        return Err(Error::domain(format!("negative vol {vol}")));
    }
    if !(discount > 0.0) {
        return Err(Error::domain(format!("non-positive discount {discount}")));
    }
    let stdev = vol * (s as f64).sqrt();
    if stdev == 0.0 {
        return Ok((
            discount * (forward - strike).max(0.0),
            discount * (strike - forward).max(0.0),
        ));
    }
    let kappa = (forward - strike) / stdev;
    let call = discount * ((forward - strike) * norm_cdf(kappa) + stdev * norm_pdf(kappa));
    let put = discount * (-(forward - strike) * norm_cdf(-kappa) + stdev * norm_pdf(-kappa));
    Ok((call, put))
}
