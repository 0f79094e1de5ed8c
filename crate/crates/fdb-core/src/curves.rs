//! Discount and implied-volatility curves with the rate conventions used by
//! the estimation formulas.

use crate::error::{Error, Result};
use std::path::Path;

/// Annual zero-coupon prices `P(0,t)` for `t = 0..=horizon`.
///
/// Prices need not be monotone: short-end prices above 1 (negative rates)
/// are valid market data.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscountCurve {
    prices: Vec<f64>,
}

impl DiscountCurve {
    /// Builds a curve from prices for `t = 1..=n`; `P(0,0) = 1` is prepended.
    pub fn new(prices_from_one: &[f64]) -> Result<Self> {
        if prices_from_one.is_empty() {
            return Err(Error::domain("curve needs at least one maturity"));
        }
        if let Some(p) = prices_from_one.iter().find(|p| **p <= 0.0 || !p.is_finite()) {
            return Err(Error::domain(format!("non-positive zero price {p}")));
        }
        let mut prices = Vec::with_capacity(prices_from_one.len() + 1);
        prices.push(1.0);
        prices.extend_from_slice(prices_from_one);
        Ok(DiscountCurve { prices })
    }

    /// Parses delimiter-separated rows with header `t,P`; maturities must
    /// cover `1..=n` contiguously.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut prices = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if idx == 0 && line.to_ascii_lowercase().replace(' ', "") == "t,p" {
                continue;
            }
            let mut cols = line.split(',').map(str::trim);
            let (t, p) = match (cols.next(), cols.next(), cols.next()) {
                (Some(t), Some(p), None) => (t, p),
                _ => return Err(Error::parse(origin, idx + 1, "expected two columns: t,P")),
            };
            let t: usize = t
                .parse()
                .map_err(|_| Error::parse(origin, idx + 1, format!("bad maturity {t:?}")))?;
            let p: f64 = p
                .parse()
                .map_err(|_| Error::parse(origin, idx + 1, format!("bad price {p:?}")))?;
            if t != prices.len() + 1 {
                return Err(Error::parse(
                    origin,
                    idx + 1,
                    format!("expected maturity {}, found {t}", prices.len() + 1),
                ));
            }
            if p <= 0.0 || !p.is_finite() {
                return Err(Error::parse(origin, idx + 1, format!("non-positive price {p}")));
            }
            prices.push(p);
        }
        if prices.is_empty() {
            return Err(Error::parse(origin, 1, "no curve rows"));
        }
        DiscountCurve::new(&prices)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.into(),
            source,
        })?;
        Self::parse(&text, path)
    }

    /// Largest maturity carried by the curve.
    pub fn horizon(&self) -> usize {
        self.prices.len() - 1
    }

    /// `P(0,t)`. Requests beyond the horizon are a hard error rather than an
    /// implicit flat extrapolation.
    pub fn price(&self, t: usize) -> Result<f64> {
        self.prices.get(t).copied().ok_or(Error::Horizon {
            need: t,
            have: self.horizon(),
        })
    }

    /// Difference forward `P(0,s-1) - P(0,s)`.
    pub fn forward_diff(&self, s: usize) -> Result<f64> {
        if s < 1 {
            return Err(Error::domain("forward index must be >= 1"));
        }
        Ok(self.price(s - 1)? - self.price(s)?)
    }

    /// Simple one-year forward rate `P(0,s-1)/P(0,s) - 1`.
    pub fn forward_simple(&self, s: usize) -> Result<f64> {
        if s < 1 {
            return Err(Error::domain("forward index must be >= 1"));
        }
        Ok(self.price(s - 1)? / self.price(s)? - 1.0)
    }

    /// Implied forward zero price `P(s,t) = P(0,t)/P(0,s)`.
    pub fn forward_discount(&self, s: usize, t: usize) -> Result<f64> {
        if s > t {
            return Err(Error::domain(format!("forward discount needs s <= t, got {s} > {t}")));
        }
        Ok(self.price(t)? / self.price(s)?)
    }
}

/// Unit tag for volatility file entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VolUnit {
    BasisPoints,
    Absolute,
}

/// Caplet implied volatilities: absolute (normal) vols per square-root year,
/// piecewise linear between pillars, constant beyond the last pillar.
#[derive(Debug, Clone, PartialEq)]
pub struct VolCurve {
    /// (maturity, absolute vol), strictly increasing maturities.
    pillars: Vec<(usize, f64)>,
}

impl VolCurve {
    pub fn new(pillars: Vec<(usize, f64)>) -> Result<Self> {
        if pillars.is_empty() {
            return Err(Error::domain("vol curve needs at least one pillar"));
        }
        for w in pillars.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::domain("vol pillar maturities must strictly increase"));
            }
        }
        if let Some((t, v)) = pillars.iter().find(|(_, v)| *v < 0.0 || !v.is_finite()) {
            return Err(Error::domain(format!("negative vol {v} at maturity {t}")));
        }
        Ok(VolCurve { pillars })
    }

    /// Parses rows with header `t,vol,unit`, unit in `{bp, abs}`.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut pillars = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if idx == 0 && line.to_ascii_lowercase().replace(' ', "") == "t,vol,unit" {
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 3 {
                return Err(Error::parse(origin, idx + 1, "expected three columns: t,vol,unit"));
            }
            let t: usize = cols[0]
                .parse()
                .map_err(|_| Error::parse(origin, idx + 1, format!("bad maturity {:?}", cols[0])))?;
            let v: f64 = cols[1]
                .parse()
                .map_err(|_| Error::parse(origin, idx + 1, format!("bad vol {:?}", cols[1])))?;
            let v = match cols[2] {
                "bp" => v * 1e-4,
                "abs" => v,
                other => {
                    return Err(Error::parse(origin, idx + 1, format!("unknown unit {other:?}")))
                }
            };
            pillars.push((t, v));
        }
        VolCurve::new(pillars)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.into(),
            source,
        })?;
        Self::parse(&text, path)
    }

    /// Vol at integer maturity `t >= 1`: linear between pillars, flat
    /// extrapolation on both ends.
    pub fn vol_at(&self, t: usize) -> Result<f64> {
        if t < 1 {
            return Err(Error::domain("vol maturity must be >= 1"));
        }
        let first = self.pillars[0];
        let last = *self.pillars.last().expect("non-empty");
        if t <= first.0 {
            return Ok(first.1);
        }
        if t >= last.0 {
            return Ok(last.1);
        }
        let i = self.pillars.partition_point(|(m, _)| *m < t);
        let (t1, v1) = self.pillars[i - 1];
        let (t2, v2) = self.pillars[i];
        let w = (t - t1) as f64 / (t2 - t1) as f64;
        Ok(v1 + w * (v2 - v1))
    }

    /// Returns a copy with every pillar vol scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> VolCurve {
        VolCurve {
            pillars: self.pillars.iter().map(|&(t, v)| (t, v * factor)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn origin() -> PathBuf {
        PathBuf::from("<test>")
    }

    #[test]
    fn parse_curve_prepends_unit_price() {
        let c = DiscountCurve::parse("t,P\n1,1.0\n", &origin()).unwrap();
        assert_eq!(c.price(0).unwrap(), 1.0);
        assert_eq!(c.price(1).unwrap(), 1.0);
        assert_eq!(c.horizon(), 1);
    }

    #[test]
    fn parse_curve_rejects_gap() {
        let err = DiscountCurve::parse("t,P\n1,1.0\n3,0.9\n", &origin()).unwrap_err();
        assert!(err.to_string().contains("expected maturity 2"));
    }

    #[test]
    fn parse_curve_rejects_nonpositive() {
        assert!(DiscountCurve::parse("t,P\n1,0.0\n", &origin()).is_err());
        assert!(DiscountCurve::parse("t,P\n1,-0.5\n", &origin()).is_err());
    }

    #[test]
    fn forwards_on_flat_curve_vanish() {
        let c = DiscountCurve::new(&[1.0; 10]).unwrap();
        for s in 1..=10 {
            assert_eq!(c.forward_diff(s).unwrap(), 0.0);
            assert_eq!(c.forward_simple(s).unwrap(), 0.0);
        }
    }

    #[test]
    fn forward_discount_composes() {
        let c = DiscountCurve::new(&[1.003, 1.001, 0.99, 0.97, 0.95]).unwrap();
        let lhs = c.forward_discount(1, 3).unwrap() * c.forward_discount(3, 5).unwrap();
        let rhs = c.forward_discount(1, 5).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
        assert_eq!(c.forward_discount(2, 2).unwrap(), 1.0);
        assert_eq!(c.forward_discount(0, 4).unwrap(), c.price(4).unwrap());
    }

    #[test]
    fn price_beyond_horizon_is_error() {
        let c = DiscountCurve::new(&[1.0, 0.99]).unwrap();
        assert!(matches!(c.price(3), Err(Error::Horizon { need: 3, have: 2 })));
    }

    #[test]
    fn vol_interpolation_and_extrapolation() {
        let v = VolCurve::new(vec![(1, 0.0010), (21, 0.0050)]).unwrap();
        assert!((v.vol_at(1).unwrap() - 0.0010).abs() < 1e-15);
        assert!((v.vol_at(11).unwrap() - 0.0030).abs() < 1e-15);
        assert!((v.vol_at(21).unwrap() - 0.0050).abs() < 1e-15);
        assert!((v.vol_at(40).unwrap() - 0.0050).abs() < 1e-15);
    }

    #[test]
    fn vol_units() {
        let v = VolCurve::parse("t,vol,unit\n1,10,bp\n5,0.0050,abs\n", &origin()).unwrap();
        assert!((v.vol_at(1).unwrap() - 0.0010).abs() < 1e-15);
        assert!((v.vol_at(5).unwrap() - 0.0050).abs() < 1e-15);
    }

    #[test]
    fn vol_rejects_unsorted_or_negative() {
        assert!(VolCurve::new(vec![(5, 0.001), (2, 0.002)]).is_err());
        assert!(VolCurve::new(vec![(1, -0.001)]).is_err());
    }
}
