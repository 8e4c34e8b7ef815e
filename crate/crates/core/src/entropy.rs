//! Entropy of the Serre functor, Serre dimensions, volumes and the linear
//! profile `t -> h_t(S)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::derived::{hom_poincare, serre_apply, standard_generator, QuiverCategory, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::quiver::Quiver;

/// Graded dimensions `m -> dim Hom(G, S^n G[m])` for `n = 0..=len-1`.
#[derive(Clone, Debug, Serialize)]
pub struct EntropySeries {
    n_max: usize,
    coxeter_number: Option<u32>,
    terms: Vec<BTreeMap<i64, usize>>,
}

impl EntropySeries {
    /// Iterates `S` on the standard generator. Dynkin series always reach `2h`
    /// so that at least two multiples of `h` are available.
    pub fn compute(cat: &QuiverCategory, n_max: usize) -> Result<Self> {
        let h = cat.dynkin_class().map(|c| c.coxeter_number);
        let last = h.map_or(n_max, |h| n_max.max(2 * h as usize));
        let g = standard_generator(cat);
        if g.is_zero() {
            return Err(Error::ZeroObject);
        }
        let mut terms = Vec::with_capacity(last + 1);
        let mut x = g.clone();
        for n in 0..=last {
            if n > 0 {
                x = serre_apply(cat, &x, 1)?;
            }
            let p = hom_poincare(cat, &g, &x)?;
            if p.is_empty() {
                return Err(Error::ZeroObject);
            }
            terms.push(p);
        }
        Ok(EntropySeries { n_max, coxeter_number: h, terms })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn poincare(&self, n: usize) -> &BTreeMap<i64, usize> {
        &self.terms[n]
    }

    /// `m_n^- = -min{m : Hom(G, S^n G[m]) != 0}`.
    pub fn m_minus(&self, n: usize) -> i64 {
        -*self.terms[n].keys().next().expect("nonzero series")
    }

    /// `m_n^+ = -max{m : Hom(G, S^n G[m]) != 0}`.
    pub fn m_plus(&self, n: usize) -> i64 {
        -*self.terms[n].keys().next_back().expect("nonzero series")
    }

    /// `log sum_m dim Hom(G, S^n G[m]) e^{-mt}`, evaluated stably.
    pub fn log_f(&self, n: usize, t: f64) -> f64 {
        let logs: Vec<f64> = self.terms[n].iter().map(|(&m, &d)| (d as f64).ln() - m as f64 * t).collect();
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln()
    }

    fn tail(&self) -> std::ops::RangeInclusive<usize> {
        self.n_max.div_ceil(2).max(1)..=self.n_max
    }

    /// Estimate of `h_t(S) = lim (1/n) log f_n(t)`.
    ///
    /// Dynkin series are sampled at multiples of `h`, where `f_n` is exactly
    /// `C e^{n s t}` and a fit of `a + b/n` recovers the limit. Otherwise the tail
    /// half is fitted to `a + (b + c log n)/n`, which also absorbs polynomial growth.
    pub fn entropy(&self, t: f64) -> f64 {
        match self.coxeter_number {
            Some(h) => {
                let h = h as usize;
                let ns: Vec<usize> = (1..).map(|k| k * h).take_while(|&n| n < self.terms.len()).collect();
                let pts: Vec<(f64, f64)> = ns.iter().map(|&n| (n as f64, self.log_f(n, t) / n as f64)).collect();
                fit_limit(&pts, false)
            }
            None => {
                let pts: Vec<(f64, f64)> = self.tail().map(|n| (n as f64, self.log_f(n, t) / n as f64)).collect();
                fit_limit(&pts, true)
            }
        }
    }

    /// Windowed maxima of `m_n^-/n` and `m_n^+/n` over `[n_max/2, n_max]`.
    pub fn serre_dims(&self) -> (f64, f64) {
        let upper = self.tail().map(|n| self.m_minus(n) as f64 / n as f64).fold(f64::NEG_INFINITY, f64::max);
        let lower = self.tail().map(|n| self.m_plus(n) as f64 / n as f64).fold(f64::NEG_INFINITY, f64::max);
        (upper, lower)
    }

    /// CSV with columns `n,m,dim`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,m,dim\n");
        for (n, p) in self.terms.iter().enumerate() {
            for (m, d) in p {
                writeln!(out, "{n},{m},{d}").unwrap();
            }
        }
        out
    }
}

/// Least-squares fit of `y = a + b/n (+ c log(n)/n)`; returns `a`.
pub(crate) fn fit_limit(pts: &[(f64, f64)], with_log: bool) -> f64 {
    let k = if with_log { 3 } else { 2 };
    if pts.len() < k {
        return pts.last().map_or(0.0, |p| p.1);
    }
    let a = DMatrix::from_fn(pts.len(), k, |r, c| {
        let n = pts[r].0;
        match c {
            0 => 1.0,
            1 => 1.0 / n,
            _ => n.ln() / n,
        }
    });
    let b = DVector::from_iterator(pts.len(), pts.iter().map(|p| p.1));
    let sol = a.svd(true, true).solve(&b, 1e-14).expect("SVD with vectors");
    sol[0]
}

/// Least-squares line through `(x, y)`; returns `(slope, intercept, max |residual|)`.
pub(crate) fn fit_line(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let intercept = my - slope * mx;
    let residual = pts.iter().map(|p| (p.1 - slope * p.0 - intercept).abs()).fold(0.0, f64::max);
    (slope, intercept, residual)
}

/// Category suitable for iterating `S` up to `n_max` times on the generator.
pub fn category_for_series(q: &Quiver, n_max: usize) -> Result<QuiverCategory> {
    QuiverCategory::with_depth(q, n_max + 1, DEFAULT_BUDGET)
}

fn check_nmax(n_max: usize, min: usize) -> Result<()> {
    if n_max < min {
        return Err(Error::InvalidArgument(format!("n_max must be at least {min}")));
    }
    Ok(())
}

/// Estimate of the entropy `h_t(S)`.
pub fn entropy_estimate(q: &Quiver, t: f64, n_max: usize) -> Result<f64> {
    check_nmax(n_max, 4)?;
    let cat = category_for_series(q, n_max)?;
    Ok(EntropySeries::compute(&cat, n_max)?.entropy(t))
}

fn serialize_ratio<S: Serializer>(r: &Option<Ratio<i64>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

/// Upper and lower Serre dimension estimates, with the exact value `(h-2)/h`
/// for Dynkin quivers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SerreDims {
    #[serde(rename = "upper_est")]
    pub upper: f64,
    #[serde(rename = "lower_est")]
    pub lower: f64,
    #[serde(serialize_with = "serialize_ratio")]
    pub exact: Option<Ratio<i64>>,
}

pub fn sdim_estimate(q: &Quiver, n_max: usize) -> Result<SerreDims> {
    check_nmax(n_max, 10)?;
    let cat = category_for_series(q, n_max)?;
    let series = EntropySeries::compute(&cat, n_max)?;
    let (upper, lower) = series.serre_dims();
    let exact = cat.dynkin_class().map(|c| {
        let h = c.coxeter_number as i64;
        Ratio::new(h - 2, h)
    });
    Ok(SerreDims { upper, lower, exact })
}

/// `V_lambda = exp(h_{log lambda}(S))`.
pub fn volume(q: &Quiver, lambda: f64, n_max: usize) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument("lambda must be positive".into()));
    }
    Ok(entropy_estimate(q, lambda.ln(), n_max)?.exp())
}

/// Linear fit `h_t(S) ~ d t + h_0` with `c_hat = d + i h_0 / pi`.
#[derive(Clone, Debug, Serialize)]
pub struct EntropyProfile {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    pub c_hat: Complex64,
    pub samples: Vec<(f64, f64)>,
}

impl EntropyProfile {
    /// CSV with columns `t,h_t`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,h_t\n");
        for (t, h) in &self.samples {
            writeln!(out, "{t},{h}").unwrap();
        }
        out
    }
}

pub fn entropy_profile(q: &Quiver, t_grid: &[f64], n_max: usize) -> Result<EntropyProfile> {
    if t_grid.len() < 3 {
        return Err(Error::InvalidArgument("the t grid needs at least three points".into()));
    }
    check_nmax(n_max, 4)?;
    let cat = category_for_series(q, n_max)?;
    let series = EntropySeries::compute(&cat, n_max)?;
    let samples: Vec<(f64, f64)> = t_grid.iter().map(|&t| (t, series.entropy(t))).collect();
    let (slope, intercept, residual) = fit_line(&samples);
    Ok(EntropyProfile {
        slope,
        intercept,
        residual,
        c_hat: Complex64::new(slope, intercept / std::f64::consts::PI),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(name: &str) -> Quiver {
        Quiver::preset(name).unwrap()
    }

    #[test]
    fn a1_is_flat() {
        for t in [-2.0, 0.0, 3.0] {
            assert!(entropy_estimate(&q("A1"), t, 10).unwrap().abs() < 1e-12);
        }
        let d = sdim_estimate(&q("A1"), 10).unwrap();
        assert_eq!((d.upper, d.lower), (0.0, 0.0));
        assert_eq!(volume(&q("A1"), 5.0, 10).unwrap(), 1.0);
    }

    #[test]
    fn a2_series_at_multiples_of_three() {
        let cat = QuiverCategory::dynkin(&q("A2")).unwrap();
        let s = EntropySeries::compute(&cat, 30).unwrap();
        for k in 1..=10 {
            // f_{3k}(t) = 3 e^{kt}
            let n = 3 * k;
            assert_eq!(s.poincare(n), &BTreeMap::from([(-(k as i64), 3)]));
            assert!((s.log_f(n, 1.5) - (3f64.ln() + 1.5 * k as f64)).abs() < 1e-12);
        }
        assert!((s.entropy(3.0) - 1.0).abs() < 1e-9);
        assert!((s.entropy(-2.0) + 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn a2_serre_dimension() {
        let d = sdim_estimate(&q("A2"), 30).unwrap();
        assert_eq!(d.exact, Some(Ratio::new(1, 3)));
        assert!((d.upper - 1.0 / 3.0).abs() < 0.05 && (d.lower - 1.0 / 3.0).abs() < 0.05);
        assert!(d.upper >= d.lower);
        let json = serde_json::to_value(&d).unwrap();
        assert_eq!(json["exact"], "1/3");
    }

    #[test]
    fn a2_volume_is_cube_root() {
        assert!((volume(&q("A2"), 8.0, 12).unwrap() - 2.0).abs() < 1e-9);
        assert!(matches!(volume(&q("A2"), 0.0, 12), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn profiles() {
        let p = entropy_profile(&q("A2"), &[-2.0, -1.0, 0.0, 1.0, 2.0], 12).unwrap();
        assert!((p.slope - 1.0 / 3.0).abs() < 1e-9 && p.intercept.abs() < 1e-9 && p.residual < 1e-9);
        assert!((p.c_hat.re - 1.0 / 3.0).abs() < 1e-9);
        let p3 = entropy_profile(&q("A3"), &[-1.0, 0.0, 1.0], 16).unwrap();
        assert!((p3.slope - 0.5).abs() < 1e-9);
        assert!(entropy_profile(&q("A2"), &[0.0, 1.0], 12).is_err());
        assert!(p.to_csv().starts_with("t,h_t\n-2,"));
    }

    #[test]
    fn kronecker_growth_is_linear() {
        let cat = category_for_series(&q("K2"), 30).unwrap();
        let s = EntropySeries::compute(&cat, 30).unwrap();
        for n in 1..=30 {
            assert_eq!(s.m_minus(n), n as i64 - 1);
            assert_eq!(s.m_plus(n), n as i64 - 1);
            let total: usize = s.poincare(n).values().sum();
            assert_eq!(total, 8 * n - 4);
        }
        // Coxeter matrix of K2 is unipotent: no exponential growth at t = 0.
        assert!(s.entropy(0.0).abs() < 0.01);
        assert!((s.entropy(1.0) - 1.0).abs() < 0.01);
        let (upper, lower) = s.serre_dims();
        assert!((upper - 1.0).abs() < 0.05 && (lower - 1.0).abs() < 0.05);
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(entropy_estimate(&q("A2"), 0.0, 3), Err(Error::InvalidArgument(_))));
        assert!(matches!(sdim_estimate(&q("A2"), 9), Err(Error::InvalidArgument(_))));
    }
}
