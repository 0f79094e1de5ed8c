//! Market parameter estimators from public filing aggregates: the technical
//! gain rate gamma and the policyholder participation share gph.

use crate::error::{Error, Result};

/// Aggregates behind the gamma estimator, billion euros.
/// `a` gross surplus net of direct declarations, `b` direct policyholder
/// declarations, `d` interest margin, `e` gross technical provisions (direct
/// business), `f` provisions with policyholder investment risk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaAggregates {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

/// Aggregates behind the net participation share: `a` gross surplus, `b`
/// direct declarations, `c` allocation to the surplus fund.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NphAggregates {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Corporate tax rate linking net and gross participation shares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaxContext {
    pub tau: f64,
}

impl TaxContext {
    pub fn new(tau: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&tau) {
            return Err(Error::domain(format!("tax rate {tau} outside [0,1)")));
        }
        Ok(TaxContext { tau })
    }
}

/// Technical gain rate relative to life assurance provisions:
/// `(a + b - d) / (e - f)`.
pub fn gamma_from_market(agg: &GammaAggregates) -> Result<f64> {
    let den = agg.e - agg.f;
    if !(den > 0.0) {
        return Err(Error::domain(format!("non-positive provision base {den}")));
    }
    Ok((agg.a + agg.b - agg.d) / den)
}

/// Net participation share `(b + c)/a`, capped at 1 (public aggregates are
/// rounded; a tiny overshoot is not an error).
pub fn nph(agg: &NphAggregates) -> Result<f64> {
    if !(agg.a > 0.0) {
        return Err(Error::domain(format!("non-positive gross surplus {}", agg.a)));
    }
    Ok(((agg.b + agg.c) / agg.a).min(1.0))
}

/// Gross participation share from the net one: `(1-tau) nph / (1 - tau nph)`.
pub fn gph_from_nph(nph: f64, tax: &TaxContext) -> Result<f64> {
    if !(0.0..=1.0).contains(&nph) {
        return Err(Error::domain(format!("nph {nph} outside [0,1]")));
    }
    let den = 1.0 - tax.tau * nph;
    if den <= 0.0 {
        return Err(Error::domain("tau * nph >= 1"));
    }
    Ok((1.0 - tax.tau) * nph / den)
}

fn table_rows<'a>(
    text: &'a str,
    origin: &'a std::path::Path,
    header: &'a str,
    ncols: usize,
) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line == header {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != ncols {
            return Err(Error::parse(
                origin,
                idx + 1,
                format!("expected {ncols} columns, found {}", cols.len()),
            ));
        }
        let vals = cols
            .iter()
            .map(|c| {
                c.parse()
                    .map_err(|_| Error::parse(origin, idx + 1, format!("bad number {c:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        out.push((idx + 1, vals));
    }
    Ok(out)
}

/// Loads a `year,a,b,d,e,f` table of gamma aggregates.
pub fn load_gamma_table(path: &std::path::Path) -> Result<Vec<(u16, GammaAggregates)>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
    table_rows(&text, path, "year,a,b,d,e,f", 6)?
        .into_iter()
        .map(|(_, v)| {
            Ok((
                v[0] as u16,
                GammaAggregates { a: v[1], b: v[2], d: v[3], e: v[4], f: v[5] },
            ))
        })
        .collect()
}

/// Loads a `year,a,b,c` table of participation aggregates.
pub fn load_nph_table(path: &std::path::Path) -> Result<Vec<(u16, NphAggregates)>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
    table_rows(&text, path, "year,a,b,c", 4)?
        .into_iter()
        .map(|(_, v)| Ok((v[0] as u16, NphAggregates { a: v[1], b: v[2], c: v[3] })))
        .collect()
}

/// Arithmetic mean of per-year gph values.
pub fn average_gph(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::domain("average over an empty list"));
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_base_years() {
        let g17 = gamma_from_market(&crate::data::gamma_aggregates(2017).unwrap()).unwrap();
        let g18 = gamma_from_market(&crate::data::gamma_aggregates(2018).unwrap()).unwrap();
        assert!((g17 - 0.0080).abs() < 1e-4);
        assert!((g18 - 0.0074).abs() < 1e-4);
    }

    #[test]
    fn gamma_zero_on_cancel() {
        let agg = GammaAggregates { a: 2.0, b: 1.5, d: 3.5, e: 100.0, f: 10.0 };
        assert_eq!(gamma_from_market(&agg).unwrap(), 0.0);
    }

    #[test]
    fn gamma_scale_invariant() {
        let agg = crate::data::gamma_aggregates(2019).unwrap();
        let scaled = GammaAggregates {
            a: agg.a * 7.3,
            b: agg.b * 7.3,
            d: agg.d * 7.3,
            e: agg.e * 7.3,
            f: agg.f * 7.3,
        };
        let lhs = gamma_from_market(&agg).unwrap();
        let rhs = gamma_from_market(&scaled).unwrap();
        assert!((lhs - rhs).abs() < 1e-15);
    }

    #[test]
    fn nph_and_gph_base_years() {
        let tax = TaxContext::new(0.299).unwrap();
        let n17 = nph(&crate::data::nph_aggregates(2017).unwrap()).unwrap();
        assert!((n17 - 0.808).abs() < 1e-3);
        let g17 = gph_from_nph(n17, &tax).unwrap();
        assert!((g17 - 0.747).abs() < 1e-3);
    }

    #[test]
    fn nph_caps_at_one() {
        let agg = NphAggregates { a: 2.0, b: 1.9, c: 0.2 };
        assert_eq!(nph(&agg).unwrap(), 1.0);
    }

    #[test]
    fn gph_limits() {
        let tax0 = TaxContext::new(0.0).unwrap();
        assert_eq!(gph_from_nph(0.73, &tax0).unwrap(), 0.73);
        let tax = TaxContext::new(0.299).unwrap();
        assert!((gph_from_nph(1.0, &tax).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gph_monotone_in_nph() {
        let tax = TaxContext::new(0.299).unwrap();
        let mut prev = -1.0;
        for i in 0..=10 {
            let g = gph_from_nph(i as f64 / 10.0, &tax).unwrap();
            assert!(g > prev);
            prev = g;
        }
    }

    #[test]
    fn averaging() {
        let avg = average_gph(&[0.747, 0.712, 0.806]).unwrap();
        assert!((avg - 0.755).abs() < 1e-3);
        assert_eq!(average_gph(&[0.5, 0.5]).unwrap(), 0.5);
        assert!(average_gph(&[]).is_err());
    }
}
