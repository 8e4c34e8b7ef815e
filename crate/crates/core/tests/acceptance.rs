use std::f64::consts::PI;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use sdlab_core::curve::{curve_gldim, curve_gldim_bounds, curve_inf_scan, CurveStability};
use sdlab_core::derived::QuiverCategory;
use sdlab_core::entropy::{category_for_series, entropy_estimate, entropy_profile, sdim_estimate, EntropySeries};
use sdlab_core::quiver::{coxeter_matrix, Quiver};
use sdlab_core::stability::{
    category, certify_collection, extract_exceptional_collection, gepner_check, gepner_construct, gldim, make_stability,
    mass_growth, restrict_to_subquiver, sample_batch, sample_stability, StabilityCondition,
};
use sdlab_core::Error;

fn report(criterion: u32, ok: bool, detail: String) {
    println!("{} criterion {criterion}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {criterion}: {detail}");
}

fn q(name: &str) -> Quiver {
    Quiver::preset(name).unwrap()
}

fn coxeter_number(name: &str) -> f64 {
    QuiverCategory::dynkin(&q(name)).unwrap().dynkin_class().unwrap().coxeter_number as f64
}

#[test]
fn c01_dynkin_serre_dimensions() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut exact_ok = true;
    for name in ["A2", "A3", "A4", "A5", "D4", "D5", "E6"] {
        let h = coxeter_number(name);
        let target = (h - 2.0) / h;
        let d = sdim_estimate(&q(name), 10 * h as usize).unwrap();
        worst = worst.max((d.upper - target).abs()).max((d.lower - target).abs());
        let exact = d.exact.unwrap();
        exact_ok &= *exact.numer() as f64 / *exact.denom() as f64 == target && exact.to_string().contains('/');
    }
    let secs = start.elapsed().as_secs_f64();
    report(1, worst <= 0.05 && exact_ok && secs < 30.0, format!("worst |est - (h-2)/h| = {worst:.2e}, exact ok = {exact_ok}, {secs:.1} s"));
}

#[test]
fn c02_linearity_on_a2() {
    let grid = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let p = entropy_profile(&q("A2"), &grid, 30).unwrap();
    let fit_ok = (p.slope - 1.0 / 3.0).abs() <= 0.05 && p.intercept.abs() <= 0.05 && p.residual <= 0.05;
    let cat = category_for_series(&q("A2"), 30).unwrap();
    let series = EntropySeries::compute(&cat, 30).unwrap();
    let mut exact_err: f64 = 0.0;
    for &t in &grid {
        for k in 1..10 {
            let step = (series.log_f(3 * (k + 1), t) - series.log_f(3 * k, t)) / 3.0;
            exact_err = exact_err.max((step - t / 3.0).abs());
        }
        exact_err = exact_err.max((series.entropy(t) - t / 3.0).abs());
    }
    report(
        2,
        fit_ok && exact_err <= 1e-9,
        format!("slope {:.6}, intercept {:.2e}, residual {:.2e}, exact error {exact_err:.2e}", p.slope, p.intercept, p.residual),
    );
}

#[test]
fn c03_gepner_values() {
    let mut worst: f64 = 0.0;
    let mut verdicts = true;
    for name in ["A2", "A3", "D4"] {
        let h = coxeter_number(name);
        let cat = category(&q(name)).unwrap();
        let s = gepner_construct(&cat).unwrap();
        worst = worst.max((gldim(&s) - (1.0 - 2.0 / h)).abs());
        verdicts &= gepner_check(&s, 1.0 - 2.0 / h).unwrap().verdict;
    }
    report(3, worst <= 1e-9 && verdicts, format!("worst |gldim - (1 - 2/h)| = {worst:.2e}, verdicts {verdicts}"));
}

#[test]
fn c04_fundamental_inequality() {
    let start = Instant::now();
    let mut violations = 0;
    let mut margin = f64::INFINITY;
    for name in ["A2", "A3", "D4"] {
        let h = coxeter_number(name);
        let cat = category(&q(name)).unwrap();
        for s in sample_batch(&cat, 2024, 1000).unwrap() {
            let g = gldim(&s);
            margin = margin.min(g - (h - 2.0) / h);
            if (h - 2.0) / h > g + 1e-9 {
                violations += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(4, violations == 0 && secs < 60.0, format!("{violations} violations, min margin {margin:.3e}, {secs:.1} s"));
}

fn perturb(cat: &Arc<QuiverCategory>, base: &StabilityCondition, rng: &mut Xoshiro256PlusPlus) -> StabilityCondition {
    loop {
        let z: Vec<Complex64> = base
            .z_simples()
            .iter()
            .map(|z| {
                let scale = 1.0 + 0.2 * (rng.random::<f64>() - 0.5);
                let turn = 0.1 * (rng.random::<f64>() - 0.5);
                z * Complex64::from_polar(scale, PI * turn)
            })
            .collect();
        if let Ok(s) = make_stability(cat, &z) {
            return s;
        }
    }
}

#[test]
fn c05_gepner_iff_minimal_gldim() {
    let cat = category(&q("A3")).unwrap();
    let mut pool = vec![gepner_construct(&cat).unwrap()];
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(5);
    for _ in 0..50 {
        let p = perturb(&cat, &pool[0], &mut rng);
        pool.push(p);
    }
    pool.extend(sample_batch(&cat, 9000, 500).unwrap());
    let (mut both, mut counter) = (0, 0);
    for s in &pool {
        let minimal = (gldim(s) - 0.5).abs() <= 1e-9;
        let gepner = gepner_check(s, 0.5).unwrap().verdict;
        match (minimal, gepner) {
            (true, true) => both += 1,
            (false, false) => {}
            _ => counter += 1,
        }
    }
    report(5, counter == 0 && both >= 1, format!("{} conditions, {both} Gepner, {counter} counterexamples", pool.len()));
}

#[test]
fn c06_low_dimension_lemmas() {
    let (mut low, mut below, mut bad) = (0, 0, 0);
    for name in ["A2", "A3", "A4", "D4"] {
        let cat = category(&q(name)).unwrap();
        let n = cat.catalog().len();
        for s in sample_batch(&cat, 77, 400).unwrap() {
            let g = gldim(&s);
            if g <= 1.0 + 1e-9 {
                low += 1;
                if s.semistable_indecomposables().len() != n {
                    bad += 1;
                }
            }
            if g < 1.0 - 1e-9 {
                below += 1;
                let all_exceptional_stable = (0..n).all(|i| s.is_stable(i) && cat.hom(i, i) == 1 && cat.ext(i, i) == 0);
                if !all_exceptional_stable {
                    bad += 1;
                }
            }
        }
    }
    report(6, bad == 0 && below > 0, format!("{low} samples with gldim <= 1, {below} with gldim < 1, {bad} failures"));
}

#[test]
fn c07_exceptional_collections() {
    let mut ok = true;
    let mut lengths = Vec::new();
    for name in ["A2", "A3", "A4", "A5"] {
        let cat = category(&q(name)).unwrap();
        let s = gepner_construct(&cat).unwrap();
        let coll = extract_exceptional_collection(&s).unwrap();
        let cert = certify_collection(&cat, &coll);
        ok &= cert.is_full_strong(cat.quiver().vertex_count());
        lengths.push(coll.len());
    }
    let cat = category(&q("A3")).unwrap();
    let mut refusals = 0;
    let mut tried = 0;
    for s in sample_batch(&cat, 31, 200).unwrap() {
        if gldim(&s) >= 1.0 {
            tried += 1;
            if matches!(extract_exceptional_collection(&s), Err(Error::GldimTooLarge { .. })) {
                refusals += 1;
            }
        }
    }
    let flat = make_stability(&cat, &[Complex64::new(0.0, 1.0); 3]).unwrap();
    tried += 1;
    if matches!(extract_exceptional_collection(&flat), Err(Error::GldimTooLarge { .. })) {
        refusals += 1;
    }
    report(
        7,
        ok && tried == refusals && tried > 1,
        format!("collection lengths {lengths:?}, certified {ok}, precondition errors {refusals}/{tried}"),
    );
}

#[test]
fn c08_semicontinuity() {
    let cat = category(&q("A4")).unwrap();
    let mut used = 0;
    let mut violations = 0;
    let mut seed = 0;
    while used < 100 && seed < 20_000 {
        let s = sample_stability(&cat, seed).unwrap();
        seed += 1;
        let g = gldim(&s);
        if g > 1.0 {
            continue;
        }
        used += 1;
        for subset in [&[0usize, 1][..], &[0, 1, 2][..]] {
            let r = restrict_to_subquiver(&s, subset).unwrap();
            if gldim(&r) > g + 1e-9 {
                violations += 1;
            }
        }
    }
    let exact: Vec<f64> = ["A2", "A3", "A4"]
        .iter()
        .map(|n| {
            let e = sdim_estimate(&q(n), 10).unwrap().exact.unwrap();
            *e.numer() as f64 / *e.denom() as f64
        })
        .collect();
    let chain = exact[0] == 1.0 / 3.0 && exact[1] == 0.5 && exact[2] == 0.6 && exact.windows(2).all(|w| w[0] <= w[1]);
    report(
        8,
        used == 100 && violations == 0 && chain,
        format!("{used} samples (of {seed} drawn), {violations} violations, Sdim chain {exact:?}"),
    );
}

#[test]
fn c09_mass_growth() {
    let cat = category(&q("A2")).unwrap();
    let s = gepner_construct(&cat).unwrap();
    let ts = [-2.0, 0.0, 2.0];
    let growth = mass_growth(&s, &ts, 60).unwrap();
    let series = EntropySeries::compute(&cat, 60).unwrap();
    let mut excess = f64::NEG_INFINITY;
    for &(t, hs) in &growth.samples {
        excess = excess.max(hs - series.entropy(t));
    }
    let phase_ok = (growth.phase_upper - 1.0 / 3.0).abs() <= 0.05;
    let pts: Vec<(f64, f64)> = [2.0f64, 4.0, 8.0, 16.0, 32.0].iter().map(|&l| (l.ln(), growth.sigma_volume(l).ln())).collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    report(
        9,
        excess <= 1e-6 && phase_ok && (slope - 1.0 / 3.0).abs() <= 0.05,
        format!("max h_sigma - h = {excess:.2e}, phase growth {:.4}, volume slope {slope:.4}", growth.phase_upper),
    );
}

fn phase(cs: &CurveStability, r: i64, d: i64) -> f64 {
    // Independent of the library's charge: Z = -d + (beta + iH) r.
    let (re, im) = (-(d as f64) + cs.beta * r as f64, cs.h * r as f64);
    if im == 0.0 { 1.0 } else { im.atan2(re) / PI }
}

fn genus_zero_sup(cs: &CurveStability) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for a in -200i64..=200 {
        for b in -200i64..=200 {
            let (pa, pb) = (phase(cs, 1, a), phase(cs, 1, b));
            if b >= a {
                best = best.max(pb - pa);
            }
            if b <= a - 2 {
                best = best.max(pb + 1.0 - pa);
            }
        }
    }
    best
}

fn genus_one_sup(cs: &CurveStability) -> f64 {
    let classes: Vec<(i64, i64, f64)> = (0..=50)
        .flat_map(|r| (-50..=50).map(move |d| (r, d)))
        .filter(|&(r, d)| r > 0 || d > 0)
        .map(|(r, d)| (r, d, phase(cs, r, d)))
        .collect();
    let mut best = f64::NEG_INFINITY;
    for &(r1, d1, p1) in &classes {
        for &(r2, d2, p2) in &classes {
            // Slopes compared by the sign of r1 d2 - r2 d1; equal slopes are skipped.
            let cross = r1 * d2 - r2 * d1;
            if cross > 0 {
                best = best.max(p2 - p1);
            } else if cross < 0 {
                best = best.max(p2 + 1.0 - p1);
            }
        }
    }
    best
}

#[test]
fn c10_curves() {
    let start = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for (g, beta, h) in [(0u32, 0.0, 1.0), (0, 0.7, 0.3), (1, 0.0, 1.0), (1, -1.3, 2.5)] {
        let cs = CurveStability::new(g, beta, h).unwrap();
        let exact = curve_gldim(&cs);
        let oracle = if g == 0 { genus_zero_sup(&cs) } else { genus_one_sup(&cs) };
        ok &= exact.lower() == 1.0 && exact.upper() == 1.0 && (1.0 - 1e-2..1.0).contains(&oracle);
        notes.push(format!("g={g} oracle {oracle:.4}"));
    }
    let b = curve_gldim_bounds(&CurveStability::new(2, 0.0, 1.0).unwrap()).unwrap();
    ok &= (b.lower - 1.3524).abs() <= 1e-3 && (b.upper - 1.5).abs() <= 1e-3;
    let far = curve_gldim_bounds(&CurveStability::new(2, 0.0, 1000.0).unwrap()).unwrap();
    ok &= far.upper <= 1.001;
    let grid: Vec<f64> = (-20..=30).map(|k| 10f64.powf(k as f64 / 10.0)).collect();
    let mut min_lower = f64::INFINITY;
    for g in 2..=5 {
        for beta in [-3.0, -0.5, 0.0, 1.0, 4.0] {
            for row in curve_inf_scan(g, &grid, beta).unwrap() {
                min_lower = min_lower.min(row.lower);
            }
        }
    }
    ok &= min_lower > 1.0;
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 10.0;
    report(
        10,
        ok,
        format!(
            "{}, g=2 bounds ({:.4}, {:.4}), upper(H=1000) {:.6}, min lower on scan {min_lower:.3e}, {secs:.1} s",
            notes.join(", "),
            b.lower,
            b.upper,
            far.upper
        ),
    );
}

/// Spectral radius of a 2x2 integer matrix, from its characteristic polynomial.
fn spectral_radius_2x2(m: [[i64; 2]; 2]) -> f64 {
    let tr = (m[0][0] + m[1][1]) as f64;
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) as f64;
    let disc = Complex64::new(tr * tr - 4.0 * det, 0.0).sqrt();
    ((Complex64::new(tr, 0.0) + disc) / 2.0).norm().max(((Complex64::new(tr, 0.0) - disc) / 2.0).norm())
}

#[test]
fn c11_kronecker() {
    let k2 = q("K2");
    let d = sdim_estimate(&k2, 30).unwrap();
    let sdim_ok = (d.upper - 1.0).abs() <= 0.05 && (d.lower - 1.0).abs() <= 0.05;
    let h0 = entropy_estimate(&k2, 0.0, 30).unwrap();
    let phi = coxeter_matrix(&k2).coxeter.rows();
    let spectral = spectral_radius_2x2([[phi[0][0], phi[0][1]], [phi[1][0], phi[1][1]]]).ln();
    let target = (3.0 + 2.0 * 2f64.sqrt()).ln();
    let literal_ok = (h0 - target).abs() <= 0.05;
    report(
        11,
        sdim_ok && literal_ok,
        format!(
            "sdim ({:.4}, {:.4}); h_0 = {h0:.4} vs log(3+2*sqrt 2) = {target:.4}; log spectral radius of the Coxeter matrix = {spectral:.4}",
            d.upper, d.lower
        ),
    );
}
