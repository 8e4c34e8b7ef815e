//! Stability conditions on the standard heart `mod kQ` of a Dynkin quiver:
//! semistable objects, global dimension, mass growth, group actions, Gepner
//! points, exceptional collections and restriction to subquivers.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::derived::{serre_apply, standard_generator, DerivedObject, QuiverCategory};
use crate::entropy::fit_limit;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::quiver::{parse_quiver, Quiver};

/// Absolute tolerance for phase comparisons.
pub const PHASE_TOL: f64 = 1e-9;

/// Builds the category of a Dynkin quiver, ready to be shared between
/// stability conditions.
pub fn category(q: &Quiver) -> Result<Arc<QuiverCategory>> {
    if crate::quiver::classify_dynkin(q)?.is_none() {
        return Err(Error::CatalogIncomplete);
    }
    Ok(Arc::new(QuiverCategory::dynkin(q)?))
}

/// Phase in `(0, 1]` of a nonzero point of the semiclosed upper half plane.
pub fn heart_phase(z: Complex64) -> f64 {
    if z.im == 0.0 && z.re < 0.0 {
        1.0
    } else {
        z.im.atan2(z.re) / PI
    }
}

fn in_heart(z: Complex64) -> bool {
    z.im > 0.0 || (z.im == 0.0 && z.re < 0.0)
}

/// `r e^{i pi theta}`, exactly on the negative real axis when `theta = 1`.
pub fn polar(r: f64, theta: f64) -> Complex64 {
    if theta == 1.0 {
        Complex64::new(-r, 0.0)
    } else {
        Complex64::from_polar(r, PI * theta)
    }
}

/// A stability condition given by a central charge on the simples, together
/// with the phase of every semistable indecomposable (`M[k]` then has phase
/// `phase(M) + k`).
#[derive(Clone, Debug)]
pub struct StabilityCondition {
    cat: Arc<QuiverCategory>,
    z_simples: Vec<Complex64>,
    phases: Vec<Option<f64>>,
    stable: Vec<bool>,
    support_constant: f64,
}

/// Builds the stability condition with heart `mod kQ` and the given charges
/// `Z(S_i)`, each of which must lie in `{r e^{i pi phi} : r > 0, 0 < phi <= 1}`.
pub fn make_stability(cat: &Arc<QuiverCategory>, z_simples: &[Complex64]) -> Result<StabilityCondition> {
    let n = cat.quiver().vertex_count();
    if z_simples.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: z_simples.len() });
    }
    if let Some(v) = z_simples.iter().position(|&z| !in_heart(z)) {
        return Err(Error::NotAStabilityFunction { vertex: v + 1 });
    }
    let table = cat.hom_table()?;
    let catalog = cat.catalog();
    let len = catalog.len();
    let charge = |id: usize| charge_of(z_simples, &catalog.entry(id).dim_vector);
    let heart: Vec<f64> = (0..len).map(|id| heart_phase(charge(id))).collect();
    let mut phases = vec![None; len];
    let mut stable = vec![false; len];
    for m in 0..len {
        let subs = (0..len).filter(|&s| s != m && table.mono(s, m));
        let mut semistable = true;
        let mut strict = true;
        for s in subs {
            if heart[s] > heart[m] + PHASE_TOL {
                semistable = false;
            }
            if heart[s] >= heart[m] - PHASE_TOL {
                strict = false;
            }
        }
        if semistable {
            phases[m] = Some(heart[m]);
            stable[m] = strict;
        }
    }
    let mut sigma = StabilityCondition {
        cat: Arc::clone(cat),
        z_simples: z_simples.to_vec(),
        phases,
        stable,
        support_constant: 0.0,
    };
    sigma.support_constant = sigma.compute_support_constant();
    Ok(sigma)
}

fn charge_of(z: &[Complex64], d: &[i64]) -> Complex64 {
    z.iter().zip(d).map(|(z, &k)| z * k as f64).sum()
}

impl StabilityCondition {
    pub fn category(&self) -> &Arc<QuiverCategory> {
        &self.cat
    }

    pub fn quiver(&self) -> &Quiver {
        self.cat.quiver()
    }

    pub fn z_simples(&self) -> &[Complex64] {
        &self.z_simples
    }

    /// `Z` of a class in the dimension-vector lattice.
    pub fn charge(&self, d: &[i64]) -> Complex64 {
        charge_of(&self.z_simples, d)
    }

    /// `Z(M)` for a cataloged indecomposable.
    pub fn charge_of_indec(&self, id: usize) -> Complex64 {
        self.charge(&self.cat.catalog().entry(id).dim_vector)
    }

    /// Phase of `M[0]` when `M` is semistable.
    pub fn phase(&self, id: usize) -> Option<f64> {
        self.phases[id]
    }

    pub fn phases(&self) -> &[Option<f64>] {
        &self.phases
    }

    pub fn is_semistable(&self, id: usize) -> bool {
        self.phases[id].is_some()
    }

    pub fn is_stable(&self, id: usize) -> bool {
        self.phases[id].is_some() && self.stable[id]
    }

    /// Constant `C` with `|v(E)| < C |Z(E)|` for every semistable `E`.
    pub fn support_constant(&self) -> f64 {
        self.support_constant
    }

    fn compute_support_constant(&self) -> f64 {
        let worst = self
            .semistable_indecomposables()
            .iter()
            .map(|&(id, _)| {
                let d = &self.cat.catalog().entry(id).dim_vector;
                let norm = d.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt();
                norm / self.charge(d).norm()
            })
            .fold(0.0, f64::max);
        1.01 * worst
    }

    /// Semistable indecomposables with their phases, in catalog order.
    pub fn semistable_indecomposables(&self) -> Vec<(usize, f64)> {
        self.phases.iter().enumerate().filter_map(|(id, p)| p.map(|p| (id, p))).collect()
    }

    /// Phase of a shifted indecomposable, if it is semistable.
    pub fn object_phase(&self, id: usize, shift: i64) -> Option<f64> {
        self.phases[id].map(|p| p + shift as f64)
    }

    /// JSON form `{quiver, z_simples: [[re, im], ...]}`.
    pub fn to_json(&self) -> SigmaJson {
        SigmaJson {
            quiver: self.quiver().label(),
            z_simples: self.z_simples.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

/// Serialized central charge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SigmaJson {
    pub quiver: String,
    pub z_simples: Vec<[f64; 2]>,
}

impl SigmaJson {
    pub fn quiver(&self) -> Result<Quiver> {
        parse_quiver(&self.quiver)
    }

    pub fn charges(&self) -> Vec<Complex64> {
        self.z_simples.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
    }

    pub fn build(&self, cat: &Arc<QuiverCategory>) -> Result<StabilityCondition> {
        let q = self.quiver()?;
        if q.arrows() != cat.quiver().arrows() || q.vertex_count() != cat.quiver().vertex_count() {
            return Err(Error::QuiverMismatch);
        }
        make_stability(cat, &self.charges())
    }
}

/// Supremum of phase gaps over pairs of semistable indecomposables joined by a
/// nonzero morphism of degree 0 or 1.
pub fn gldim(sigma: &StabilityCondition) -> f64 {
    let cat = &sigma.cat;
    let ss = sigma.semistable_indecomposables();
    let mut best = f64::NEG_INFINITY;
    for &(m, pm) in &ss {
        for &(n, pn) in &ss {
            if cat.hom(m, n) > 0 {
                best = best.max(pn - pm);
            }
            if cat.ext(m, n) > 0 {
                best = best.max(pn + 1.0 - pm);
            }
        }
    }
    best
}

/// `sum |Z(A)| e^{phase(A) t}` over the summands `A` of `X`, all of which must
/// be semistable.
pub fn mass(sigma: &StabilityCondition, t: f64, x: &DerivedObject) -> Result<f64> {
    x.summands()
        .iter()
        .map(|&(id, k)| {
            let phase = sigma.object_phase(id, k).ok_or_else(|| not_semistable(sigma, id, k))?;
            Ok(sigma.charge_of_indec(id).norm() * (phase * t).exp())
        })
        .sum()
}

fn not_semistable(sigma: &StabilityCondition, id: usize, k: i64) -> Error {
    Error::NotAllSemistable(format!("{:?}[{k}]", sigma.cat.catalog().entry(id).dim_vector))
}

/// Mass growth of `S` with respect to `sigma`, from the orbit `S^n G`.
#[derive(Clone, Debug, Serialize)]
pub struct MassGrowth {
    /// `(t, h_{sigma,t}(S))` on the requested grid.
    pub samples: Vec<(f64, f64)>,
    /// Limit of `phi^+(S^n G) / n`.
    pub phase_upper: f64,
    /// Limit of `phi^-(S^n G) / n`.
    pub phase_lower: f64,
    #[serde(skip)]
    orbit: Vec<(usize, Vec<(f64, f64)>)>,
}

impl MassGrowth {
    /// `h_{sigma,t}(S)`, extrapolated from multiples of the Coxeter number.
    pub fn h_sigma(&self, t: f64) -> f64 {
        let pts: Vec<(f64, f64)> = self
            .orbit
            .iter()
            .map(|(n, parts)| (*n as f64, log_mass(parts, t) / *n as f64))
            .collect();
        fit_limit(&pts, false)
    }

    /// `V_{sigma, lambda} = exp(h_{sigma, log lambda}(S))`.
    pub fn sigma_volume(&self, lambda: f64) -> f64 {
        self.h_sigma(lambda.ln()).exp()
    }
}

fn log_mass(parts: &[(f64, f64)], t: f64) -> f64 {
    let logs: Vec<f64> = parts.iter().map(|&(abs, phase)| abs.ln() + phase * t).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln()
}

pub fn mass_growth(sigma: &StabilityCondition, t_grid: &[f64], n_max: usize) -> Result<MassGrowth> {
    let h = sigma.cat.dynkin_class().ok_or(Error::CatalogIncomplete)?.coxeter_number as usize;
    let last = n_max.max(2 * h);
    let g = standard_generator(&sigma.cat);
    let mut orbit = Vec::new();
    for n in (h..=last).step_by(h) {
        let x = serre_apply(&sigma.cat, &g, n as i64)?;
        let parts = x
            .summands()
            .iter()
            .map(|&(id, k)| {
                let phase = sigma.object_phase(id, k).ok_or_else(|| not_semistable(sigma, id, k))?;
                Ok((sigma.charge_of_indec(id).norm(), phase))
            })
            .collect::<Result<Vec<_>>>()?;
        orbit.push((n, parts));
    }
    let phase_fit = |pick: fn(f64, f64) -> f64| {
        let pts: Vec<(f64, f64)> = orbit
            .iter()
            .map(|(n, parts)| {
                let p = parts.iter().map(|p| p.1).reduce(pick).expect("nonzero orbit");
                (*n as f64, p / *n as f64)
            })
            .collect();
        fit_limit(&pts, false)
    };
    let phase_upper = phase_fit(f64::max);
    let phase_lower = phase_fit(f64::min);
    let mut growth = MassGrowth { samples: Vec::new(), phase_upper, phase_lower, orbit };
    growth.samples = t_grid.iter().map(|&t| (t, growth.h_sigma(t))).collect();
    Ok(growth)
}

/// Group actions on stability conditions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Action {
    /// Right action of `mu` in `C`: `Z -> e^{-i pi mu} Z`, phases move by `-Re mu`.
    Rotate(Complex64),
    /// Left action of `S^k`.
    Serre(i64),
}

pub fn act(sigma: &StabilityCondition, action: Action) -> Result<StabilityCondition> {
    match action {
        Action::Rotate(mu) => {
            let factor = (Complex64::new(0.0, -PI) * mu).exp();
            let mut out = sigma.clone();
            out.z_simples = sigma.z_simples.iter().map(|z| z * factor).collect();
            out.phases = sigma.phases.iter().map(|p| p.map(|p| p - mu.re)).collect();
            out.support_constant = out.compute_support_constant();
            Ok(out)
        }
        Action::Serre(k) => {
            let mut out = sigma.clone();
            for _ in 0..k.unsigned_abs() {
                out = serre_once(&out, k > 0)?;
            }
            Ok(out)
        }
    }
}

fn serre_once(sigma: &StabilityCondition, forward: bool) -> Result<StabilityCondition> {
    let cat = &sigma.cat;
    let len = cat.catalog().len();
    let mut phases = vec![None; len];
    let mut stable = vec![false; len];
    for (id, p) in sigma.phases.iter().enumerate() {
        if let Some(p) = p {
            let image = serre_apply(cat, &DerivedObject::indecomposable(id, 0), if forward { 1 } else { -1 })
                .map_err(|e| Error::HeartEscape(e.to_string()))?;
            let &[(target, shift)] = image.summands() else {
                return Err(Error::HeartEscape(format!("image of {id} is not indecomposable")));
            };
            phases[target] = Some(p - shift as f64);
            stable[target] = sigma.stable[id];
        }
    }
    // Z' = Z o S^-1 on classes.
    let m: &IntMatrix = if forward { &cat.euler().serre_k_inverse } else { &cat.euler().serre_k_action };
    let n = sigma.z_simples.len();
    let z_simples = (0..n)
        .map(|i| (0..n).map(|j| sigma.z_simples[j] * m.get(j, i) as f64).sum())
        .collect();
    let mut out = StabilityCondition { cat: Arc::clone(cat), z_simples, phases, stable, support_constant: 0.0 };
    out.support_constant = out.compute_support_constant();
    Ok(out)
}

/// Outcome of comparing `S.sigma` with `sigma.mu`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GepnerReport {
    pub mu: f64,
    pub charge_match: bool,
    pub slicing_match: bool,
    pub verdict: bool,
}

pub fn gepner_check(sigma: &StabilityCondition, mu: f64) -> Result<GepnerReport> {
    let lhs = act(sigma, Action::Serre(1))?;
    let rhs = act(sigma, Action::Rotate(Complex64::new(mu, 0.0)))?;
    let scale = sigma.z_simples.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let charge_match = lhs
        .z_simples
        .iter()
        .zip(&rhs.z_simples)
        .all(|(a, b)| (a - b).norm() <= 1e-9 * scale);
    let slicing_match = lhs.phases.iter().zip(&rhs.phases).all(|(a, b)| match (a, b) {
        (Some(a), Some(b)) => (a - b).abs() <= PHASE_TOL,
        (None, None) => true,
        _ => false,
    });
    Ok(GepnerReport { mu, charge_match, slicing_match, verdict: charge_match && slicing_match })
}

/// The Gepner point of a Dynkin quiver: `Z` is a left eigenvector of the Serre
/// action on classes for `e^{i pi (1 - 2/h)}`, rotated so that the simple
/// phases are centred on `1/2`.
pub fn gepner_construct(cat: &Arc<QuiverCategory>) -> Result<StabilityCondition> {
    let class = cat.dynkin_class().ok_or(Error::NotDynkin)?;
    let mu = 1.0 - 2.0 / class.coxeter_number as f64;
    let sk = &cat.euler().serre_k_action;
    let n = sk.size();
    let lambda = Complex64::from_polar(1.0, PI * mu);
    // z^T Sk = lambda z^T  <=>  (Sk^T - lambda) z = 0
    let a = DMatrix::from_fn(n, n, |r, c| {
        Complex64::new(sk.get(c, r) as f64, 0.0) - if r == c { lambda } else { Complex64::new(0.0, 0.0) }
    });
    let svd = a.svd(true, true);
    let v_t = svd.v_t.expect("right singular vectors");
    let (k, smallest) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("nonempty spectrum");
    if *smallest > 1e-8 {
        return Err(Error::HeartMismatch);
    }
    let z: DVector<Complex64> = v_t.row(k).transpose().map(|c| c.conj());
    let mut angles: Vec<f64> = z.iter().map(|c| c.arg()).collect();
    angles.sort_by(f64::total_cmp);
    let (mut gap, mut start) = (angles[0] + 2.0 * PI - angles[n - 1], angles[0]);
    for w in angles.windows(2) {
        if w[1] - w[0] > gap {
            gap = w[1] - w[0];
            start = w[1];
        }
    }
    let width = 2.0 * PI - gap;
    if width >= PI - 1e-12 {
        return Err(Error::HeartMismatch);
    }
    let rotation = Complex64::from_polar(1.0, PI / 2.0 - (start + width / 2.0));
    let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let z_simples: Vec<Complex64> = z.iter().map(|c| c * rotation / norm).collect();
    let sigma = make_stability(cat, &z_simples)?;
    if !gepner_check(&sigma, mu)?.verdict {
        return Err(Error::HeartMismatch);
    }
    Ok(sigma)
}

/// Deterministic random stability condition: `Z(S_i) = r_i e^{i pi theta_i}`
/// with `theta_i` uniform on `(0, 1]` and `log r_i` uniform on `[log 0.1, log 10]`,
/// drawn from xoshiro256++ seeded through SplitMix64.
pub fn sample_stability(cat: &Arc<QuiverCategory>, seed: u64) -> Result<StabilityCondition> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let n = cat.quiver().vertex_count();
    let (lo, hi) = (0.1f64.ln(), 10f64.ln());
    let z: Vec<Complex64> = (0..n)
        .map(|_| {
            let theta = 1.0 - rng.random::<f64>();
            let r = (lo + rng.random::<f64>() * (hi - lo)).exp();
            polar(r, theta)
        })
        .collect();
    make_stability(cat, &z)
}

/// `count` samples with seeds `seed, seed + 1, ...`.
pub fn sample_batch(cat: &Arc<QuiverCategory>, seed: u64, count: usize) -> Result<Vec<StabilityCondition>> {
    (0..count as u64).map(|k| sample_stability(cat, seed.wrapping_add(k))).collect()
}

/// A shifted indecomposable `M[shift]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftedIndec {
    pub id: usize,
    pub shift: i64,
}

/// Greedy extraction of a full strong exceptional collection from a
/// stability condition with `gldim < 1`: start from a stable object of
/// minimal phase in `(0, 1]`, then repeatedly add the stable object of
/// minimal phase in the left orthogonal of the collection that receives a
/// nonzero morphism from it.
pub fn extract_exceptional_collection(sigma: &StabilityCondition) -> Result<Vec<ShiftedIndec>> {
    let cat = &sigma.cat;
    if !cat.quiver().is_connected() {
        return Err(Error::DisconnectedQuiver);
    }
    let g = gldim(sigma);
    if g >= 1.0 - PHASE_TOL {
        return Err(Error::GldimTooLarge { gldim: g, bound: "< 1".into() });
    }
    let len = cat.catalog().len();
    let better = |a: (f64, usize, i64), b: (f64, usize, i64)| {
        a.0 < b.0 - PHASE_TOL || ((a.0 - b.0).abs() <= PHASE_TOL && (a.1, a.2) < (b.1, b.2))
    };
    let mut first: Option<(f64, usize, i64)> = None;
    for id in 0..len {
        if let Some(p) = sigma.phases[id].filter(|_| sigma.is_stable(id)) {
            let k = (1.0 - p).floor() as i64;
            let cand = (p + k as f64, id, k);
            if first.is_none_or(|b| better(cand, b)) {
                first = Some(cand);
            }
        }
    }
    let (_, id, shift) = first.ok_or(Error::ExtractionStalled(0))?;
    let mut out = vec![ShiftedIndec { id, shift }];
    loop {
        let orthogonal: Vec<usize> = (0..len)
            .filter(|&m| out.iter().all(|e| cat.hom(m, e.id) == 0 && cat.ext(m, e.id) == 0))
            .collect();
        if orthogonal.is_empty() {
            return Ok(out);
        }
        let mut best: Option<(f64, usize, i64)> = None;
        for &m in &orthogonal {
            let Some(p) = sigma.phases[m].filter(|_| sigma.is_stable(m)) else {
                continue;
            };
            for e in &out {
                for (k, dim) in [(e.shift, cat.hom(e.id, m)), (e.shift + 1, cat.ext(e.id, m))] {
                    let cand = (p + k as f64, m, k);
                    if dim > 0 && best.is_none_or(|b| better(cand, b)) {
                        best = Some(cand);
                    }
                }
            }
        }
        let (_, id, shift) = best.ok_or(Error::ExtractionStalled(out.len()))?;
        out.push(ShiftedIndec { id, shift });
    }
}

/// Checks performed on an exceptional collection.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollectionCertificate {
    pub length: usize,
    /// Euler pairing `chi(E_i, E_j)` is upper unitriangular.
    pub unitriangular: bool,
    /// No morphisms from later to earlier objects in any degree.
    pub no_backward_maps: bool,
    /// Morphisms between objects only in degree zero.
    pub strong: bool,
    /// Classes of the objects form a basis of the lattice.
    pub spans_lattice: bool,
}

impl CollectionCertificate {
    pub fn is_full_strong(&self, rank: usize) -> bool {
        self.length == rank && self.unitriangular && self.no_backward_maps && self.strong && self.spans_lattice
    }
}

pub fn certify_collection(cat: &QuiverCategory, objs: &[ShiftedIndec]) -> CollectionCertificate {
    let sign = |k: i64| if k.rem_euclid(2) == 0 { 1 } else { -1 };
    let n = objs.len();
    let chi = |a: &ShiftedIndec, b: &ShiftedIndec| {
        sign(b.shift - a.shift) * (cat.hom(a.id, b.id) as i64 - cat.ext(a.id, b.id) as i64)
    };
    let mut unitriangular = true;
    let mut no_backward_maps = true;
    let mut strong = true;
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (&objs[i], &objs[j]);
            let c = chi(a, b);
            if (i == j && c != 1) || (i > j && c != 0) {
                unitriangular = false;
            }
            let degrees = [(a.shift - b.shift, cat.hom(a.id, b.id)), (a.shift - b.shift + 1, cat.ext(a.id, b.id))];
            for (m, dim) in degrees {
                if dim == 0 {
                    continue;
                }
                if i > j {
                    no_backward_maps = false;
                }
                if m != 0 {
                    strong = false;
                }
            }
        }
    }
    let rank = cat.quiver().vertex_count();
    let spans_lattice = n == rank && {
        let mut classes = IntMatrix::zeros(n);
        for (c, o) in objs.iter().enumerate() {
            for (r, &d) in cat.catalog().entry(o.id).dim_vector.iter().enumerate() {
                classes.set(r, c, sign(o.shift) * d);
            }
        }
        classes.det().abs() == 1
    };
    CollectionCertificate { length: n, unitriangular, no_backward_maps, strong, spans_lattice }
}

/// Restriction of `sigma` (with `gldim <= 1`) to the full subquiver on a
/// connected set of 0-based vertices: the charge is restricted and the
/// semistables are those of `sigma` supported on the subset.
pub fn restrict_to_subquiver(sigma: &StabilityCondition, subset: &[usize]) -> Result<StabilityCondition> {
    let g = gldim(sigma);
    if g > 1.0 + PHASE_TOL {
        return Err(Error::GldimTooLarge { gldim: g, bound: "<= 1".into() });
    }
    let q = sigma.quiver();
    let mut verts: Vec<usize> = subset.to_vec();
    verts.sort_unstable();
    verts.dedup();
    if verts.iter().any(|&v| v >= q.vertex_count()) || !q.is_connected_on(&verts) {
        return Err(Error::NotConnectedSubset);
    }
    let sub = q.full_subquiver(&verts)?;
    let sub_cat = Arc::new(QuiverCategory::dynkin(&sub)?);
    let z: Vec<Complex64> = verts.iter().map(|&v| sigma.z_simples[v]).collect();
    let big = sigma.cat.catalog();
    let len = sub_cat.catalog().len();
    let mut phases = vec![None; len];
    let mut stable = vec![false; len];
    for id in 0..len {
        let mut d = vec![0i64; q.vertex_count()];
        for (k, &v) in verts.iter().enumerate() {
            d[v] = sub_cat.catalog().entry(id).dim_vector[k];
        }
        let big_id = big.lookup(&d).ok_or_else(|| Error::CatalogMiss(format!("{d:?}")))?;
        phases[id] = sigma.phases[big_id];
        stable[id] = sigma.stable[big_id];
    }
    sub_cat.hom_table()?;
    let mut out = StabilityCondition { cat: sub_cat, z_simples: z, phases, stable, support_constant: 0.0 };
    out.support_constant = out.compute_support_constant();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn a2() -> Arc<QuiverCategory> {
        category(&Quiver::a(2).unwrap()).unwrap()
    }

    fn ids(cat: &QuiverCategory) -> (usize, usize, usize) {
        let c = cat.catalog();
        (c.lookup(&[1, 0]).unwrap(), c.lookup(&[0, 1]).unwrap(), c.lookup(&[1, 1]).unwrap())
    }

    #[test]
    fn equal_phases_on_a2() {
        let cat = a2();
        let s = make_stability(&cat, &[c(0.0, 1.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(s.semistable_indecomposables().len(), 3);
        assert!(s.phases().iter().all(|p| (p.unwrap() - 0.5).abs() < 1e-12));
        assert!((gldim(&s) - 1.0).abs() < 1e-12);
        let (_, _, p1) = ids(&cat);
        assert!(!s.is_stable(p1));
        let m = mass(&s, 1.0, &DerivedObject::indecomposable(p1, 0)).unwrap();
        assert!((m - 2.0 * 0.5f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn rejects_positive_real_charge() {
        let err = make_stability(&a2(), &[c(1.0, 0.0), c(0.0, 1.0)]).unwrap_err();
        assert_eq!(err, Error::NotAStabilityFunction { vertex: 1 });
        let a1 = category(&Quiver::a(1).unwrap()).unwrap();
        assert_eq!(make_stability(&a1, &[c(0.0, 1.0)]).unwrap().semistable_indecomposables().len(), 1);
        let k2 = Quiver::kronecker(2).unwrap();
        assert_eq!(category(&k2).unwrap_err(), Error::CatalogIncomplete);
    }

    #[test]
    fn destabilizing_subobject() {
        let cat = a2();
        let (s1, s2, p1) = ids(&cat);
        let s = make_stability(&cat, &[c(-1.0, 1.0), c(1.0, 1.0)]).unwrap();
        assert_eq!(s.semistable_indecomposables().len(), 3);
        assert!((s.phase(s2).unwrap() - 0.25).abs() < 1e-12);
        assert!((s.phase(p1).unwrap() - 0.5).abs() < 1e-12);
        assert!((s.phase(s1).unwrap() - 0.75).abs() < 1e-12);
        let t = make_stability(&cat, &[c(1.0, 1.0), c(-1.0, 1.0)]).unwrap();
        assert!(t.phase(p1).is_none());
        assert!((gldim(&t) - 1.5).abs() < 1e-12);
        assert!(matches!(mass(&t, 0.0, &DerivedObject::indecomposable(p1, 0)), Err(Error::NotAllSemistable(_))));
    }

    #[test]
    fn support_property_holds() {
        let cat = category(&Quiver::d(4).unwrap()).unwrap();
        for seed in 0..20 {
            let s = sample_stability(&cat, seed).unwrap();
            for (id, _) in s.semistable_indecomposables() {
                let d = &cat.catalog().entry(id).dim_vector;
                let norm = d.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt();
                assert!(norm < s.support_constant() * s.charge(d).norm());
            }
        }
    }

    #[test]
    fn gepner_point_of_a2() {
        let cat = a2();
        let (s1, s2, p1) = ids(&cat);
        let g = gepner_construct(&cat).unwrap();
        assert!((g.phase(s1).unwrap() - 5.0 / 6.0).abs() < 1e-12);
        assert!((g.phase(s2).unwrap() - 1.0 / 6.0).abs() < 1e-12);
        assert!((g.phase(p1).unwrap() - 0.5).abs() < 1e-12);
        assert!((gldim(&g) - 1.0 / 3.0).abs() < 1e-12);
        assert!(gepner_check(&g, 1.0 / 3.0).unwrap().verdict);
        assert!(!gepner_check(&g, -1.0 / 3.0).unwrap().verdict);
        let flat = make_stability(&cat, &[c(0.0, 1.0), c(0.0, 1.0)]).unwrap();
        assert!(!gepner_check(&flat, 1.0 / 3.0).unwrap().verdict);
    }

    #[test]
    fn linear_a3_has_no_gepner_point_on_the_standard_heart() {
        // S_1 and S_3 would need phases exactly one apart.
        let q = parse_quiver("vertices:3; arrows:1->2,2->3").unwrap();
        assert_eq!(gepner_construct(&category(&q).unwrap()).unwrap_err(), Error::HeartMismatch);
    }

    #[test]
    fn gepner_point_of_a1_is_trivial() {
        let cat = category(&Quiver::a(1).unwrap()).unwrap();
        let g = gepner_construct(&cat).unwrap();
        assert_eq!(gldim(&g), 0.0);
        assert!(gepner_check(&g, 0.0).unwrap().verdict);
        let s = sample_stability(&cat, 3).unwrap();
        assert!(gepner_check(&s, 0.0).unwrap().verdict);
    }

    #[test]
    fn actions_compose() {
        let cat = category(&Quiver::a(3).unwrap()).unwrap();
        let s = sample_stability(&cat, 11).unwrap();
        let id = act(&s, Action::Rotate(c(0.0, 0.0))).unwrap();
        assert_eq!(id.phases(), s.phases());
        let one = act(&s, Action::Rotate(c(1.0, 0.0))).unwrap();
        for (a, b) in one.z_simples().iter().zip(s.z_simples()) {
            assert!((a + b).norm() < 1e-12);
        }
        let ab = act(&act(&s, Action::Rotate(c(0.3, 0.0))).unwrap(), Action::Rotate(c(0.4, 0.2))).unwrap();
        let direct = act(&s, Action::Rotate(c(0.7, 0.2))).unwrap();
        for (a, b) in ab.z_simples().iter().zip(direct.z_simples()) {
            assert!((a - b).norm() < 1e-12);
        }
        let back = act(&act(&s, Action::Serre(2)).unwrap(), Action::Serre(-2)).unwrap();
        for (a, b) in back.phases().iter().zip(s.phases()) {
            assert!(a.zip(*b).is_none_or(|(a, b)| (a - b).abs() < 1e-12));
            assert_eq!(a.is_some(), b.is_some());
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let cat = a2();
        let a = sample_stability(&cat, 42).unwrap();
        let b = sample_stability(&cat, 42).unwrap();
        assert_eq!(a.z_simples(), b.z_simples());
        for z in a.z_simples() {
            assert!(in_heart(*z) && z.norm() >= 0.1 - 1e-12 && z.norm() <= 10.0 + 1e-12);
        }
    }

    #[test]
    fn collections_on_gepner_points() {
        for n in 2..=5 {
            let cat = category(&Quiver::a(n).unwrap()).unwrap();
            let g = gepner_construct(&cat).unwrap();
            let objs = extract_exceptional_collection(&g).unwrap();
            let cert = certify_collection(&cat, &objs);
            assert!(cert.is_full_strong(n), "A{n}: {cert:?}");
        }
        let flat = make_stability(&a2(), &[c(0.0, 1.0), c(0.0, 1.0)]).unwrap();
        assert!(matches!(extract_exceptional_collection(&flat), Err(Error::GldimTooLarge { .. })));
    }

    #[test]
    fn restriction() {
        let cat = category(&Quiver::a(3).unwrap()).unwrap();
        let g = gepner_construct(&cat).unwrap();
        let all = restrict_to_subquiver(&g, &[0, 1, 2]).unwrap();
        assert_eq!(all.phases(), g.phases());
        let sub = restrict_to_subquiver(&g, &[0, 1]).unwrap();
        assert!(gldim(&sub) <= gldim(&g) + PHASE_TOL);
        let direct = make_stability(sub.category(), sub.z_simples()).unwrap();
        assert_eq!(direct.phases().iter().map(Option::is_some).collect::<Vec<_>>(),
                   sub.phases().iter().map(Option::is_some).collect::<Vec<_>>());
        assert_eq!(restrict_to_subquiver(&g, &[0, 2]).unwrap_err(), Error::NotConnectedSubset);
        let bad = make_stability(&cat, &[c(1.0, 1.0), c(-1.0, 1.0), c(1.0, 1.0)]).unwrap();
        assert!(matches!(restrict_to_subquiver(&bad, &[0, 1]), Err(Error::GldimTooLarge { .. })));
    }

    #[test]
    fn gepner_mass_growth_on_a2() {
        let g = gepner_construct(&a2()).unwrap();
        let growth = mass_growth(&g, &[-2.0, 0.0, 2.0], 30).unwrap();
        for &(t, h) in &growth.samples {
            assert!((h - t / 3.0).abs() < 1e-9);
        }
        assert!((growth.phase_upper - 1.0 / 3.0).abs() < 1e-9);
        assert!((growth.sigma_volume(8.0) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip() {
        let cat = a2();
        let s = sample_stability(&cat, 5).unwrap();
        let json = serde_json::to_string(&s.to_json()).unwrap();
        let back: SigmaJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build(&cat).unwrap().z_simples(), s.z_simples());
    }
}
