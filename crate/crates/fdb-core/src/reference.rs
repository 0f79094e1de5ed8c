//! Parsers for the bundled golden reference tables used by `check` runs and
//! the acceptance suite.

use crate::error::{Error, Result};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseRow {
    pub year: u16,
    pub lb: f64,
    pub ub: f64,
    pub fdb: f64,
    pub eps: f64,
    pub ii: f64,
    pub cog: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensRow {
    pub scenario: String,
    pub year: u16,
    pub d_fdb: f64,
    pub d_lb: f64,
    pub d_ub: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationRow {
    pub year: u16,
    pub gamma_pct: f64,
    pub gph_pct: f64,
}

fn rows<'a>(text: &'a str, origin: &'a Path, header: &'a str, ncols: usize)
    -> impl Iterator<Item = Result<(usize, Vec<&'a str>)>> + 'a {
    text.lines().enumerate().filter_map(move |(idx, raw)| {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line == header {
            return None;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != ncols {
            return Some(Err(Error::parse(
                origin,
                idx + 1,
                format!("expected {ncols} columns, found {}", cols.len()),
            )));
        }
        Some(Ok((idx + 1, cols)))
    })
}

fn num(origin: &Path, line: usize, s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::parse(origin, line, format!("bad number {s:?}")))
}

fn year(origin: &Path, line: usize, s: &str) -> Result<u16> {
    s.parse()
        .map_err(|_| Error::parse(origin, line, format!("bad year {s:?}")))
}

pub fn parse_base(text: &str, origin: &Path) -> Result<Vec<BaseRow>> {
    let mut out = Vec::new();
    for row in rows(text, origin, "year,lb,ub,fdb,eps,ii,cog", 7) {
        let (line, c) = row?;
        out.push(BaseRow {
            year: year(origin, line, c[0])?,
            lb: num(origin, line, c[1])?,
            ub: num(origin, line, c[2])?,
            fdb: num(origin, line, c[3])?,
            eps: num(origin, line, c[4])?,
            ii: num(origin, line, c[5])?,
            cog: num(origin, line, c[6])?,
        });
    }
    Ok(out)
}

pub fn parse_sens(text: &str, origin: &Path) -> Result<Vec<SensRow>> {
    let mut out = Vec::new();
    for row in rows(text, origin, "scenario,year,dfdb,dlb,dub", 5) {
        let (line, c) = row?;
        out.push(SensRow {
            scenario: c[0].to_string(),
            year: year(origin, line, c[1])?,
            d_fdb: num(origin, line, c[2])?,
            d_lb: num(origin, line, c[3])?,
            d_ub: num(origin, line, c[4])?,
        });
    }
    Ok(out)
}

pub fn parse_calibration(text: &str, origin: &Path) -> Result<Vec<CalibrationRow>> {
    let mut out = Vec::new();
    for row in rows(text, origin, "year,gamma_pct,gph_pct", 3) {
        let (line, c) = row?;
        out.push(CalibrationRow {
            year: year(origin, line, c[0])?,
            gamma_pct: num(origin, line, c[1])?,
            gph_pct: num(origin, line, c[2])?,
        });
    }
    Ok(out)
}

pub fn load_base(path: &Path) -> Result<Vec<BaseRow>> {
    parse_base(&read(path)?, path)
}

pub fn load_sens(path: &Path) -> Result<Vec<SensRow>> {
    parse_sens(&read(path)?, path)
}

pub fn load_calibration(path: &Path) -> Result<Vec<CalibrationRow>> {
    parse_calibration(&read(path)?, path)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;

    #[test]
    fn bundled_reference_tables_parse() {
        let origin = Path::new("<embedded>");
        let base = parse_base(data::REFERENCE_BASE_CSV, origin).unwrap();
        assert_eq!(base.len(), 3);
        assert_eq!(base[0].year, 2017);
        assert_eq!(base[0].fdb, 46.78);
        let pct = parse_base(data::REFERENCE_BASE_PCT_CSV, origin).unwrap();
        assert_eq!(pct[2].fdb, 17.34);
        let sens = parse_sens(data::REFERENCE_SENS_CSV, origin).unwrap();
        assert_eq!(sens.len(), 42);
        assert_eq!(sens[0].scenario, "iv*0.5");
        let cal = parse_calibration(data::REFERENCE_CALIBRATION_CSV, origin).unwrap();
        assert_eq!(cal.len(), 3);
        assert_eq!(cal[1].gph_pct, 71.2);
    }
}
