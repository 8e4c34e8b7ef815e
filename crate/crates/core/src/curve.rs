//! Numerical stability conditions `Z = -deg + (beta + iH) rk` on a smooth
//! projective curve, and bounds on their global dimension.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// The stability condition `sigma_{beta,H}` on a curve of genus `g`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurveStability {
    pub genus: u32,
    pub beta: f64,
    #[serde(rename = "H")]
    pub h: f64,
}

impl CurveStability {
    pub fn new(genus: u32, beta: f64, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidArgument(format!("need H > 0 and finite beta (got H = {h}, beta = {beta})")));
        }
        Ok(CurveStability { genus, beta, h })
    }
}

/// Class `(rank, degree)` of an object of the heart `Coh(C)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NumericalClass {
    pub rank: i64,
    pub degree: i64,
}

impl NumericalClass {
    /// Requires `rank > 0`, or `rank = 0` and `degree > 0` (torsion).
    pub fn new(rank: i64, degree: i64) -> Result<Self> {
        if rank < 0 || (rank == 0 && degree <= 0) {
            return Err(Error::InvalidClass { rank, degree });
        }
        Ok(NumericalClass { rank, degree })
    }
}

/// `arccot: R -> (0, pi)`.
pub fn arccot(x: f64) -> f64 {
    PI / 2.0 - x.atan()
}

/// `Z(E)` and its phase in `(0, 1]`.
pub fn curve_charge(cs: &CurveStability, c: &NumericalClass) -> (Complex64, f64) {
    let z = Complex64::new(-(c.degree as f64) + cs.beta * c.rank as f64, cs.h * c.rank as f64);
    let phase = if c.rank == 0 { 1.0 } else { arccot(z.re / z.im) / PI };
    (z, phase)
}

/// Certified bounds on `gldim sigma_{beta,H}` for `g >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GldimBounds {
    /// `1 + phase(omega_C) - phase(O_C)`.
    pub lower: f64,
    /// `1 + (2/pi) arctan((g-1)/H)`.
    pub upper: f64,
}

pub fn curve_gldim_bounds(cs: &CurveStability) -> Result<GldimBounds> {
    if cs.genus < 2 {
        return Err(Error::GenusTooSmall(cs.genus));
    }
    let canonical = (2 * cs.genus - 2) as f64;
    let lower = 1.0 + (arccot((cs.beta - canonical) / cs.h) - arccot(cs.beta / cs.h)) / PI;
    let upper = 1.0 + 2.0 / PI * ((cs.genus - 1) as f64 / cs.h).atan();
    Ok(GldimBounds { lower, upper })
}

/// Global dimension of a curve stability condition: exactly 1 in genus 0 and 1,
/// an interval otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CurveGldim {
    Exact { value: f64 },
    Interval { lower: f64, upper: f64 },
}

impl CurveGldim {
    pub fn lower(&self) -> f64 {
        match *self {
            CurveGldim::Exact { value } => value,
            CurveGldim::Interval { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> f64 {
        match *self {
            CurveGldim::Exact { value } => value,
            CurveGldim::Interval { upper, .. } => upper,
        }
    }
}

pub fn curve_gldim(cs: &CurveStability) -> CurveGldim {
    match curve_gldim_bounds(cs) {
        Ok(b) => CurveGldim::Interval { lower: b.lower, upper: b.upper },
        Err(_) => CurveGldim::Exact { value: 1.0 },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    #[serde(rename = "H")]
    pub h: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Gldim bounds along a positive increasing grid of `H` at fixed `beta`.
pub fn curve_inf_scan(genus: u32, h_grid: &[f64], beta: f64) -> Result<Vec<ScanRow>> {
    if h_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if h_grid.iter().any(|&h| h.is_nan() || h <= 0.0) || h_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("H grid must be positive and increasing".into()));
    }
    h_grid
        .iter()
        .map(|&h| {
            let g = curve_gldim(&CurveStability::new(genus, beta, h)?);
            Ok(ScanRow { h, lower: g.lower(), upper: g.upper() })
        })
        .collect()
}

/// CSV with header `H,lower,upper`.
pub fn scan_to_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from("H,lower,upper\n");
    for r in rows {
        writeln!(out, "{},{},{}", r.h, r.lower, r.upper).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(g: u32, beta: f64, h: f64) -> CurveStability {
        CurveStability::new(g, beta, h).unwrap()
    }

    #[test]
    fn charges() {
        let s = cs(2, 0.0, 1.0);
        let (z, p) = curve_charge(&s, &NumericalClass::new(1, 0).unwrap());
        assert_eq!(z, Complex64::new(0.0, 1.0));
        assert!((p - 0.5).abs() < 1e-15);
        let (z, p) = curve_charge(&s, &NumericalClass::new(1, 2).unwrap());
        assert_eq!(z, Complex64::new(-2.0, 1.0));
        assert!((p - 0.852416382349567).abs() < 1e-12);
        let (z, p) = curve_charge(&s, &NumericalClass::new(0, 1).unwrap());
        assert_eq!((z, p), (Complex64::new(-1.0, 0.0), 1.0));
        assert_eq!(NumericalClass::new(0, 0), Err(Error::InvalidClass { rank: 0, degree: 0 }));
        assert_eq!(NumericalClass::new(0, -3), Err(Error::InvalidClass { rank: 0, degree: -3 }));
        assert!(CurveStability::new(2, 0.0, 0.0).is_err());
    }

    #[test]
    fn genus_two_bounds() {
        let b = curve_gldim_bounds(&cs(2, 0.0, 1.0)).unwrap();
        assert!((b.lower - 1.352416382349567).abs() < 1e-12);
        assert!((b.upper - 1.5).abs() < 1e-12);
        assert_eq!(curve_gldim_bounds(&cs(1, 0.0, 1.0)), Err(Error::GenusTooSmall(1)));
        let far = curve_gldim_bounds(&cs(2, 0.0, 1e6)).unwrap();
        assert!(far.lower > 1.0 && far.upper - 1.0 < 1e-5);
    }

    #[test]
    fn low_genus_is_exactly_one() {
        for g in [0, 1] {
            assert_eq!(curve_gldim(&cs(g, 0.3, 2.0)), CurveGldim::Exact { value: 1.0 });
        }
    }

    #[test]
    fn scan() {
        let rows = curve_inf_scan(2, &[1.0, 10.0, 100.0, 1000.0], 0.0).unwrap();
        let expected = [1.5, 1.0634510349, 1.0063659855, 1.0006366196];
        for (r, e) in rows.iter().zip(expected) {
            assert!((r.upper - e).abs() < 1e-9, "{r:?}");
            assert!(r.lower > 1.0);
        }
        assert!(rows.windows(2).all(|w| w[1].upper < w[0].upper));
        assert_eq!(curve_inf_scan(2, &[], 0.0), Err(Error::EmptyGrid));
        assert!(matches!(curve_inf_scan(2, &[2.0, 1.0], 0.0), Err(Error::InvalidArgument(_))));
        assert!(curve_inf_scan(1, &[1.0, 5.0], 0.0).unwrap().iter().all(|r| r.lower == 1.0 && r.upper == 1.0));
        let csv = scan_to_csv(&rows[..1]);
        assert_eq!(csv, "H,lower,upper\n1,1.3524163823495667,1.5\n");
    }
}
