//! Portfolio run-off: exponential decay factors, surrender-ramp schedule and
//! declaration weights.

use crate::error::{Error, Result};

/// Run-off horizon and half-life parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunoffParams {
    /// Final horizon; the portfolio is gone at `t = horizon`.
    pub horizon: usize,
    /// Half-life of the in-force factor, years.
    pub half_life: f64,
}

impl RunoffParams {
    pub fn new(horizon: usize, half_life: f64) -> Result<Self> {
        if horizon < 2 {
            return Err(Error::domain("run-off horizon must be >= 2"));
        }
        if !(half_life > 0.0) {
            return Err(Error::domain("half-life must be positive"));
        }
        Ok(RunoffParams { horizon, half_life })
    }

    /// In-force factor `l_t = 2^{-t/b}` for `t < horizon`, exactly 0 at the
    /// horizon and beyond.
    pub fn l_factor(&self, t: usize) -> f64 {
        if t >= self.horizon {
            0.0
        } else {
            (2.0_f64).powf(-(t as f64) / self.half_life)
        }
    }

    /// Surrender ramp: `min(t * sigma / h, sigma)`.
    pub fn sigma_t(&self, sigma: f64, ramp_years: f64, t: usize) -> f64 {
        (t as f64 * sigma / ramp_years).min(sigma)
    }

    /// Weight of the cohort maturing in year `s+1` relative to the in-force
    /// book at year `k <= s`: `mu = (l_s - l_{s+1}) / l_k`.
    pub fn mu(&self, k: usize, s: usize) -> Result<f64> {
        if k > s || s + 1 > self.horizon {
            return Err(Error::domain(format!(
                "mu needs k <= s <= horizon-1, got k={k}, s={s}"
            )));
        }
        let lk = self.l_factor(k);
        if lk == 0.0 {
            return Err(Error::domain("mu undefined on an empty book"));
        }
        Ok((self.l_factor(s) - self.l_factor(s + 1)) / lk)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_factor_halves_each_half_life() {
        let r = RunoffParams::new(50, 10.0).unwrap();
        assert_eq!(r.l_factor(0), 1.0);
        assert!((r.l_factor(10) - 0.5).abs() < 1e-15);
        assert!((r.l_factor(20) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn l_factor_hits_zero_at_horizon() {
        let r = RunoffParams::new(50, 10.0).unwrap();
        assert!(r.l_factor(49) > 0.0);
        assert_eq!(r.l_factor(50), 0.0);
        assert_eq!(r.l_factor(51), 0.0);
    }

    #[test]
    fn mu_weights_sum_to_one() {
        let r = RunoffParams::new(50, 10.0).unwrap();
        for k in [0usize, 1, 7, 30] {
            let total: f64 = (k..r.horizon).map(|s| r.mu(k, s).unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-12, "k={k}: {total}");
        }
    }

    #[test]
    fn sigma_ramp_caps() {
        let r = RunoffParams::new(50, 10.0).unwrap();
        assert!((r.sigma_t(0.2, 8.0, 1) - 0.025).abs() < 1e-15);
        assert!((r.sigma_t(0.2, 8.0, 4) - 0.1).abs() < 1e-15);
        assert!((r.sigma_t(0.2, 8.0, 8) - 0.2).abs() < 1e-15);
        assert!((r.sigma_t(0.2, 8.0, 30) - 0.2).abs() < 1e-15);
    }
}
