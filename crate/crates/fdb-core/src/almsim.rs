//! Monte Carlo asset-liability simulator used as an independent oracle for
//! the analytic bounds: a one-factor normal rate model with the drift solved
//! per step from the discounted-bond condition, and a full profit-sharing
//! ledger whose accounting identities hold path-wise.

use crate::bounds::{BalanceSheetInputs, BoundsReport, EstimationParams};
use crate::curves::DiscountCurve;
use crate::error::{Error, Result};
use crate::runoff::RunoffParams;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Rate model settings: arithmetic normal shocks on the one-year forward.
#[derive(Debug, Clone, Copy)]
pub struct RateModel {
    pub vol: f64,
    pub seed: u64,
    pub paths: usize,
}

/// Simulated short-rate paths with their discount factors. `f[i][t]` is the
/// one-year forward fixed at `t` on path `i`; `binv[i][t]` is `B_t^{-1}`.
#[derive(Debug, Clone)]
pub struct RatePaths {
    pub horizon: usize,
    pub f: Vec<Vec<f64>>,
    pub binv: Vec<Vec<f64>>,
}

/// Simulates forward paths `F_t = m_t + vol * W_t`; each step's drift `m_t`
/// is solved by bisection so the ensemble mean of `B_{t+1}^{-1}` reproduces
/// `P(0,t+1)` exactly. Per-path counter-seeded RNG keeps results independent
/// of evaluation order.
pub fn simulate_rates(curve: &DiscountCurve, model: &RateModel, horizon: usize) -> Result<RatePaths> {
    if model.paths == 0 {
        return Err(Error::domain("need at least one path"));
    }
    if model.vol < 0.0 {
        return Err(Error::domain("rate vol must be >= 0"));
    }
    if curve.horizon() < horizon {
        return Err(Error::Horizon { need: horizon, have: curve.horizon() });
    }
    let n = model.paths;
    // Pre-draw all shocks; path i owns RNG stream i.
    let mut shocks = vec![vec![0.0_f64; horizon]; n];
    for (i, row) in shocks.iter_mut().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
        rng.set_stream(i as u64);
        for z in row.iter_mut().take(horizon).skip(1) {
            *z = StandardNormal.sample(&mut rng);
        }
    }

    let f0 = curve.forward_simple(1)?;
    let mut f = vec![vec![0.0_f64; horizon]; n];
    let mut binv = vec![vec![1.0_f64; horizon + 1]; n];
    for i in 0..n {
        f[i][0] = f0;
        binv[i][1] = 1.0 / (1.0 + f0);
    }

    let mut w = vec![0.0_f64; n];
    for t in 1..horizon {
        for i in 0..n {
            w[i] += shocks[i][t];
        }
        let target = curve.price(t + 1)?;
        let bt: Vec<f64> = binv.iter().map(|b| b[t]).collect();
        let g = |m: f64| -> f64 {
            let mut s = 0.0;
            for i in 0..n {
                s += bt[i] / (1.0 + m + model.vol * w[i]);
            }
            s / n as f64 - target
        };
        let wmin = w.iter().cloned().fold(f64::INFINITY, f64::min);
        // Keep 1 + F strictly positive across all paths.
        let mut lo = -1.0 - model.vol * wmin + 1e-9;
        let mut hi = lo.max(0.0) + 1.0;
        while g(hi) > 0.0 {
            hi = hi * 2.0 + 1.0;
            if hi > 1e6 {
                return Err(Error::invariant("drift bisection failed to bracket"));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let m = 0.5 * (lo + hi);
        for i in 0..n {
            f[i][t] = m + model.vol * w[i];
            binv[i][t + 1] = binv[i][t] / (1.0 + f[i][t]);
        }
    }
    Ok(RatePaths { horizon, f, binv })
}

/// Profit-sharing and management-rule settings for the ledger. Shares of a
/// positive gross surplus: policyholders `gph`, tax `tau (1-gph)`,
/// shareholders the rest.
#[derive(Debug, Clone, Copy)]
pub struct LedgerConfig {
    pub bs: BalanceSheetInputs,
    pub gph: f64,
    pub tau: f64,
    pub sigma: f64,
    pub nu: f64,
    pub theta: f64,
    pub half_life: f64,
    pub ug_half_life: f64,
    pub horizon: usize,
}

impl LedgerConfig {
    pub fn from_params(bs: &BalanceSheetInputs, p: &EstimationParams, tau: f64) -> Self {
        LedgerConfig {
            bs: *bs,
            gph: p.gph,
            tau,
            sigma: p.sigma,
            nu: p.nu,
            theta: p.theta_for(bs),
            half_life: p.half_life,
            ug_half_life: p.ug_half_life,
            horizon: p.horizon,
        }
    }

    pub fn gtax(&self) -> f64 {
        self.tau * (1.0 - self.gph)
    }

    pub fn gsh(&self) -> f64 {
        (1.0 - self.tau) * (1.0 - self.gph)
    }
}

/// One path's full ledger. Stocks are indexed `0..=T`; flows are indexed
/// `1..=T` with entry 0 unused.
#[derive(Debug, Clone)]
pub struct Ledger {
    pub lp: Vec<f64>,
    pub ug: Vec<f64>,
    pub v: Vec<f64>,
    pub db_g: Vec<f64>,
    pub db: Vec<f64>,
    pub sf: Vec<f64>,
    pub mv: Vec<f64>,
    pub roa: Vec<f64>,
    pub gs: Vec<f64>,
    pub ph_star: Vec<f64>,
    pub sh: Vec<f64>,
    pub tax: Vec<f64>,
    pub ph: Vec<f64>,
    pub sg_star: Vec<f64>,
    pub decl: Vec<f64>,
    pub gbf: Vec<f64>,
    pub gbf_g: Vec<f64>,
}

/// Runs the ledger recursion along every rate path. The conforming
/// management rules hold the book on its geometric run-off targets: LP and
/// the guaranteed-account block decay with the in-force factor, UG amortizes
/// deterministically, SF tracks `theta * LP` through the transfer rate
/// `eta_t` (clamped to [0,1]), and declarations pay out through the
/// mu-weighted queue.
pub fn simulate_paths(rates: &RatePaths, cfg: &LedgerConfig) -> Result<Vec<Ledger>> {
    let t_max = cfg.horizon;
    if rates.horizon != t_max {
        return Err(Error::domain(format!(
            "rate paths cover {} years, ledger needs {t_max}",
            rates.horizon
        )));
    }
    let runoff = RunoffParams::new(t_max, cfg.half_life)?;
    let bs = &cfg.bs;
    let lh: Vec<f64> = (0..=t_max).map(|t| runoff.l_factor(t)).collect();
    let ld: Vec<f64> = (0..=t_max)
        .map(|t| if t >= t_max { 0.0 } else { (2.0_f64).powf(-(t as f64) / cfg.ug_half_life) })
        .collect();
    // mu[k][t]: payout weight at year t of the declaration made at year k.
    let mut mu = vec![vec![0.0_f64; t_max + 1]; t_max + 1];
    for (k, row) in mu.iter_mut().enumerate().take(t_max).skip(1) {
        for (t, w) in row.iter_mut().enumerate().take(t_max + 1).skip(k + 1) {
            *w = runoff.mu(k, t - 1)?;
        }
    }

    let mut out = Vec::with_capacity(rates.f.len());
    for (i, fpath) in rates.f.iter().enumerate() {
        let z = || vec![0.0_f64; t_max + 1];
        let mut l = Ledger {
            lp: z(), ug: z(), v: z(), db_g: z(), db: z(), sf: z(), mv: z(),
            roa: z(), gs: z(), ph_star: z(), sh: z(), tax: z(), ph: z(),
            sg_star: z(), decl: z(), gbf: z(), gbf_g: z(),
        };
        l.lp[0] = bs.lp0;
        l.ug[0] = bs.ug0;
        l.sf[0] = bs.sf0;
        l.db_g[0] = cfg.sigma * bs.lp0;
        l.v[0] = bs.lp0 - l.db_g[0];
        l.mv[0] = bs.lp0 + bs.ug0 + bs.sf0;
        for t in 1..=t_max {
            l.lp[t] = lh[t] * bs.lp0;
            l.ug[t] = ld[t] * bs.ug0;
            l.db_g[t] = cfg.sigma * lh[t] * bs.lp0;
            let f_prev = fpath[t - 1];
            l.roa[t] = f_prev * l.mv[t - 1] - (l.ug[t] - l.ug[t - 1]);
            l.gs[t] = l.roa[t] - bs.rho * l.v[t - 1] + bs.gamma * l.lp[t - 1];
            let gs_pos = l.gs[t].max(0.0);
            let gs_neg = (-l.gs[t]).max(0.0);
            l.ph_star[t] = cfg.gph * gs_pos;
            l.tax[t] = cfg.gtax() * gs_pos;
            l.sh[t] = cfg.gsh() * gs_pos - gs_neg;
            l.sg_star[t] = bs.gamma * l.db[t - 1];
            let mut payout = 0.0;
            for k in 1..t {
                payout += mu[k][t] * l.decl[k];
            }
            // Transfer rate steering SF toward theta * LP.
            let eta = if l.sf[t - 1] > 0.0 {
                ((l.sf[t - 1] + (1.0 - cfg.nu) * l.ph_star[t] - cfg.theta * l.lp[t])
                    / l.sf[t - 1])
                    .clamp(0.0, 1.0)
            } else {
                0.0
            };
            if t == t_max {
                // The book is gone: the final year's allocation pays out
                // immediately instead of joining the declaration queue.
                l.decl[t] = 0.0;
                l.ph[t] = payout + cfg.nu * l.ph_star[t] + eta * l.sf[t - 1] - l.sg_star[t];
            } else {
                l.decl[t] = eta * l.sf[t - 1] + cfg.nu * l.ph_star[t];
                l.ph[t] = payout - l.sg_star[t];
            }
            l.db[t] = l.db[t - 1] + cfg.nu * l.ph_star[t] + eta * l.sf[t - 1]
                - l.ph[t]
                - l.sg_star[t];
            l.sf[t] = l.sf[t - 1] + (1.0 - cfg.nu) * l.ph_star[t] - eta * l.sf[t - 1];
            l.v[t] = l.lp[t] - l.db_g[t] - l.db[t];
            l.gbf[t] = bs.rho * l.v[t - 1] - (l.v[t] - l.v[t - 1]);
            l.gbf_g[t] = -(l.db_g[t] - l.db_g[t - 1])
                - bs.gamma * (l.v[t - 1] + l.db_g[t - 1]);
            let cash_out = l.gbf[t] + l.gbf_g[t] + l.ph[t] + l.sh[t] + l.tax[t];
            l.mv[t] = (1.0 + f_prev) * l.mv[t - 1] - cash_out;
            if l.db[t] < -1e-9 {
                return Err(Error::invariant(format!("DB_{t} = {} < 0 on path {i}", l.db[t])));
            }
            if l.sf[t] < -1e-9 {
                return Err(Error::invariant(format!("SF_{t} = {} < 0 on path {i}", l.sf[t])));
            }
        }
        out.push(l);
    }
    Ok(out)
}

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McStat {
    pub mean: f64,
    pub se: f64,
}

impl McStat {
    pub fn from_samples(xs: &[f64]) -> McStat {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        if xs.len() < 2 {
            return McStat { mean, se: 0.0 };
        }
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        McStat { mean, se: (var / n).sqrt() }
    }

    pub fn within_3se_of(&self, target: f64) -> bool {
        (self.mean - target).abs() <= 3.0 * self.se + 1e-9
    }
}

/// Discounted valuation of the simulated book, with the representation-check
/// ingredients alongside.
#[derive(Debug, Clone, Copy)]
pub struct SimValuation {
    pub fdb: McStat,
    pub gb: McStat,
    pub be: McStat,
    pub vif: McStat,
    pub tax: McStat,
    pub cog: McStat,
    pub ph_star: McStat,
    pub term_i: McStat,
    pub term_ii: McStat,
    pub term_iii: McStat,
    pub terminal_mv: McStat,
    pub no_leakage_residual: McStat,
}

/// Values all cash-flow streams path by path and aggregates to means with
/// standard errors.
pub fn value(rates: &RatePaths, ledgers: &[Ledger], cfg: &LedgerConfig) -> SimValuation {
    let t_max = cfg.horizon;
    let n = ledgers.len();
    let mut cols: Vec<Vec<f64>> = (0..12).map(|_| Vec::with_capacity(n)).collect();
    for (i, l) in ledgers.iter().enumerate() {
        let b = &rates.binv[i];
        let f = &rates.f[i];
        let mut gb = 0.0;
        let mut fdb = 0.0;
        let mut vif = 0.0;
        let mut tax = 0.0;
        let mut cog = 0.0;
        let mut ph_star = 0.0;
        let mut term_ii = 0.0;
        let mut term_iii = 0.0;
        for t in 1..=t_max {
            gb += b[t] * (l.gbf[t] + l.gbf_g[t]);
            fdb += b[t] * l.ph[t];
            vif += b[t] * l.sh[t];
            tax += b[t] * l.tax[t];
            cog += b[t] * (-l.gs[t]).max(0.0);
            ph_star += b[t] * l.ph_star[t];
            if t >= 2 {
                term_ii += b[t] * l.sg_star[t];
            }
            term_iii += f[t - 1] * b[t] * (l.db[t - 1] + l.sf[t - 1]);
        }
        let term_i = b[t_max]
            * (l.db[t_max]
                + l.sf[t_max]
                + cfg.gph * (l.ug[t_max] + l.v[t_max] + l.db_g[t_max]));
        let terminal = b[t_max] * l.mv[t_max];
        let leak = l.mv[0] - (gb + fdb + vif + tax + terminal);
        for (c, x) in cols.iter_mut().zip([
            fdb,
            gb,
            gb + fdb,
            vif,
            tax,
            cog,
            ph_star,
            term_i,
            (1.0 - cfg.gph) * term_ii,
            (1.0 - cfg.gph) * term_iii,
            terminal,
            leak,
        ]) {
            c.push(x);
        }
    }
    let s = |i: usize| McStat::from_samples(&cols[i]);
    SimValuation {
        fdb: s(0),
        gb: s(1),
        be: s(2),
        vif: s(3),
        tax: s(4),
        cog: s(5),
        ph_star: s(6),
        term_i: s(7),
        term_ii: s(8),
        term_iii: s(9),
        terminal_mv: s(10),
        no_leakage_residual: s(11),
    }
}

/// Path-wise residual of the representation identity
/// `FDB = SF0 + gph (LP0 + UG0 - GB) + gph COG - I - II - III`.
pub fn verify_representation(rates: &RatePaths, ledgers: &[Ledger], cfg: &LedgerConfig) -> McStat {
    let t_max = cfg.horizon;
    let bs = &cfg.bs;
    let mut res = Vec::with_capacity(ledgers.len());
    for (i, l) in ledgers.iter().enumerate() {
        let b = &rates.binv[i];
        let f = &rates.f[i];
        let mut gb = 0.0;
        let mut fdb = 0.0;
        let mut cog = 0.0;
        let mut term_ii = 0.0;
        let mut term_iii = 0.0;
        for t in 1..=t_max {
            gb += b[t] * (l.gbf[t] + l.gbf_g[t]);
            fdb += b[t] * l.ph[t];
            cog += b[t] * (-l.gs[t]).max(0.0);
            if t >= 2 {
                term_ii += b[t] * l.sg_star[t];
            }
            term_iii += f[t - 1] * b[t] * (l.db[t - 1] + l.sf[t - 1]);
        }
        let term_i = b[t_max]
            * (l.db[t_max]
                + l.sf[t_max]
                + cfg.gph * (l.ug[t_max] + l.v[t_max] + l.db_g[t_max]));
        let rhs = bs.sf0 + cfg.gph * (bs.lp0 + bs.ug0 - gb) + cfg.gph * cog
            - term_i
            - (1.0 - cfg.gph) * term_ii
            - (1.0 - cfg.gph) * term_iii;
        res.push(fdb - rhs);
    }
    McStat::from_samples(&res)
}

/// Result of the bound bracketing check against a simulated valuation.
#[derive(Debug, Clone, Copy)]
pub struct BracketCheck {
    pub ok: bool,
    /// `FDB_mc - (LB - 3 SE)`; nonnegative when the lower bound holds.
    pub lower_margin: f64,
    /// `(UB + 3 SE) - FDB_mc`; nonnegative when the upper bound holds.
    pub upper_margin: f64,
}

/// Checks `LB - 3 SE <= FDB_mc <= UB + 3 SE` against the report's bounds.
pub fn verify_bracketing(val: &SimValuation, report: &BoundsReport) -> BracketCheck {
    let lower_margin = val.fdb.mean - (report.lb - 3.0 * val.fdb.se);
    let upper_margin = (report.ub + 3.0 * val.fdb.se) - val.fdb.mean;
    BracketCheck {
        ok: lower_margin >= 0.0 && upper_margin >= 0.0,
        lower_margin,
        upper_margin,
    }
}

/// Squared coefficient of variation of the discounted positive gross surplus
/// `B_s^{-1} gs_s^+` per year; reported for diagnostics, not fed back into
/// the bounds.
pub fn cv_squared(rates: &RatePaths, ledgers: &[Ledger], cfg: &LedgerConfig) -> Vec<f64> {
    (1..=cfg.horizon)
        .map(|t| {
            let xs: Vec<f64> = ledgers
                .iter()
                .enumerate()
                .map(|(i, l)| rates.binv[i][t] * l.gs[t].max(0.0))
                .collect();
            let st = McStat::from_samples(&xs);
            if st.mean.abs() < 1e-300 {
                0.0
            } else {
                let n = xs.len() as f64;
                let var = st.se * st.se * n;
                var / (st.mean * st.mean)
            }
        })
        .collect()
}

/// Asset-sale decision in the two-bond example.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Hold,
    SellA1,
}

/// Closed-form return decomposition for a book of two identical par-`N/2`
/// coupon bonds (coupon `K`, one year to run) under deterministic forwards:
/// (forward yield on book value, predicted realization of unrealized gains,
/// unpredicted return from the sale decision).
pub fn two_bond_example(
    k: f64,
    n: f64,
    f_prev: f64,
    f_now: f64,
    decision: Decision,
) -> Result<(f64, f64, f64)> {
    if k < f_prev {
        return Err(Error::domain(format!(
            "example requires the coupon {k} at or above the prior forward {f_prev}"
        )));
    }
    if 1.0 + f_now <= 0.0 {
        return Err(Error::domain("forward below -100%"));
    }
    let term1 = f_prev * n;
    let term2 = (k - f_prev) * n - ((f_now - k) / (1.0 + f_now)).max(0.0) * n;
    let term3 = match decision {
        Decision::Hold => 0.0,
        Decision::SellA1 => ((k - f_now) / (1.0 + f_now)).max(0.0) * n / 2.0,
    };
    Ok((term1, term2, term3))
}
