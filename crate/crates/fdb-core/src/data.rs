//! Bundled market data: three year-end discount curves, the caplet vol
//! pillars, balance-sheet figures and the published aggregates used for
//! calibration. Embedded so the library and tests need no file system.

use crate::bounds::BalanceSheetInputs;
use crate::calibration::{GammaAggregates, NphAggregates};
use crate::curves::{DiscountCurve, VolCurve};
use std::path::Path;

pub const CURVE_2017_CSV: &str = include_str!("../../../data/curve_2017.csv");
pub const CURVE_2018_CSV: &str = include_str!("../../../data/curve_2018.csv");
pub const CURVE_2019_CSV: &str = include_str!("../../../data/curve_2019.csv");
pub const VOLS_BASE_CSV: &str = include_str!("../../../data/vols_base.csv");
pub const REFERENCE_BASE_CSV: &str = include_str!("../../../data/reference_base.csv");
pub const REFERENCE_BASE_PCT_CSV: &str = include_str!("../../../data/reference_base_pct.csv");
pub const REFERENCE_SENS_CSV: &str = include_str!("../../../data/reference_sens.csv");
pub const REFERENCE_CALIBRATION_CSV: &str = include_str!("../../../data/reference_calibration.csv");

fn parse_curve(text: &str, name: &str) -> Vec<f64> {
    let c = DiscountCurve::parse(text, Path::new(name)).expect("bundled curve is well-formed");
    (1..=c.horizon()).map(|t| c.price(t).unwrap()).collect()
}

pub fn curve_2017() -> Vec<f64> {
    parse_curve(CURVE_2017_CSV, "curve_2017.csv")
}

pub fn curve_2018() -> Vec<f64> {
    parse_curve(CURVE_2018_CSV, "curve_2018.csv")
}

pub fn curve_2019() -> Vec<f64> {
    parse_curve(CURVE_2019_CSV, "curve_2019.csv")
}

pub fn discount_curve(year: u16) -> Option<DiscountCurve> {
    let text = match year {
        2017 => CURVE_2017_CSV,
        2018 => CURVE_2018_CSV,
        2019 => CURVE_2019_CSV,
        _ => return None,
    };
    Some(DiscountCurve::parse(text, Path::new("bundled")).expect("bundled curve is well-formed"))
}

pub fn base_vols() -> VolCurve {
    VolCurve::parse(VOLS_BASE_CSV, Path::new("vols_base.csv")).expect("bundled vols are well-formed")
}

/// German with-profit market balance sheet, billion euros.
pub fn balance_sheet(year: u16) -> Option<BalanceSheetInputs> {
    let (lp0, sf0, ug0, gb, fdb_reported, rho, gamma) = match year {
        2017 => (179.4, 10.4, 41.4, 154.1, 48.6, 0.0263, 0.0080),
        2018 => (190.2, 11.0, 32.8, 158.8, 46.2, 0.0252, 0.0074),
        2019 => (208.1, 11.5, 54.0, 195.2, 47.4, 0.0238, 0.0078),
        _ => return None,
    };
    Some(BalanceSheetInputs {
        lp0,
        sf0,
        ug0,
        gb,
        fdb_reported,
        rho,
        gamma,
    })
}

pub const YEARS: [u16; 3] = [2017, 2018, 2019];

/// Published market aggregates for the bonus-rate estimator, billion euros
/// except the reserve bases.
pub fn gamma_aggregates(year: u16) -> Option<GammaAggregates> {
    let (a, b, d, e, f) = match year {
        2017 => (8.3, 2.3, 3.5, 991.4, 109.1),
        2018 => (9.9, 2.1, 5.2, 1011.1, 101.7),
        2019 => (11.3, 2.1, 6.1, 1069.1, 124.8),
        _ => return None,
    };
    Some(GammaAggregates { a, b, d, e, f })
}

/// Published aggregates for the net participation share.
pub fn nph_aggregates(year: u16) -> Option<NphAggregates> {
    let (a, b, c) = match year {
        2017 => (2.6, 2.0, 0.1),
        2018 => (3.08, 2.31, 0.089),
        2019 => (3.64, 2.92, 0.196),
        _ => return None,
    };
    Some(NphAggregates { a, b, c })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_curves_parse_and_span_sixty_years() {
        for year in YEARS {
            let c = discount_curve(year).unwrap();
            assert_eq!(c.horizon(), 60, "year {year}");
        }
    }

    #[test]
    fn curve_spot_checks() {
        let c17 = curve_2017();
        assert_eq!(c17[0], 1.003);
        assert_eq!(c17[3], 0.996);
        let c19 = curve_2019();
        assert_eq!(c19[59], 0.227);
    }
}
