//! Representations over the rationals: Hom and Ext, projectives and injectives,
//! the Auslander-Reiten translate and indecomposables by root.

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::linalg::{integer_rank, rat, Matrix, Rational};
use crate::quiver::{euler_form, positive_roots, Quiver};

/// A representation: one vector space `Q^{d_v}` per vertex and one matrix
/// (`d_target x d_source`) per arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    quiver: Quiver,
    dims: Vec<usize>,
    maps: Vec<Matrix>,
}

impl Representation {
    pub fn new(quiver: &Quiver, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self> {
        let n = quiver.vertex_count();
        if dims.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: dims.len() });
        }
        if maps.len() != quiver.arrows().len() {
            return Err(Error::DimensionMismatch { expected: quiver.arrows().len(), got: maps.len() });
        }
        for (m, &(s, t)) in maps.iter().zip(quiver.arrows()) {
            if m.rows() != dims[t] {
                return Err(Error::DimensionMismatch { expected: dims[t], got: m.rows() });
            }
            if m.cols() != dims[s] {
                return Err(Error::DimensionMismatch { expected: dims[s], got: m.cols() });
            }
        }
        Ok(Representation { quiver: quiver.clone(), dims, maps })
    }

    pub fn zero(quiver: &Quiver) -> Self {
        let dims = vec![0; quiver.vertex_count()];
        let maps = quiver.arrows().iter().map(|_| Matrix::zeros(0, 0)).collect();
        Representation { quiver: quiver.clone(), dims, maps }
    }

    /// Simple representation at a 0-based vertex.
    pub fn simple(quiver: &Quiver, vertex: usize) -> Self {
        let mut dims = vec![0; quiver.vertex_count()];
        dims[vertex] = 1;
        let maps = quiver
            .arrows()
            .iter()
            .map(|&(s, t)| Matrix::zeros(dims[t], dims[s]))
            .collect();
        Representation { quiver: quiver.clone(), dims, maps }
    }

    /// Indecomposable projective `P_i`: paths starting at `i`.
    pub fn projective(quiver: &Quiver, vertex: usize) -> Self {
        let paths = paths_from(quiver, vertex);
        let n = quiver.vertex_count();
        let at: Vec<Vec<&Vec<usize>>> = (0..n)
            .map(|v| paths.iter().filter(|p| end_of(quiver, vertex, p) == v).collect())
            .collect();
        let dims: Vec<usize> = at.iter().map(Vec::len).collect();
        let maps = quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| {
                let mut m = Matrix::zeros(dims[t], dims[s]);
                for (c, p) in at[s].iter().enumerate() {
                    let mut ext = (*p).clone();
                    ext.push(a);
                    let r = at[t].iter().position(|q| **q == ext).expect("extended path exists");
                    m[(r, c)] = Rational::one();
                }
                m
            })
            .collect();
        Representation { quiver: quiver.clone(), dims, maps }
    }

    /// Indecomposable injective `I_i`: paths ending at `i`.
    pub fn injective(quiver: &Quiver, vertex: usize) -> Self {
        let paths = paths_to(quiver, vertex);
        let n = quiver.vertex_count();
        let at: Vec<Vec<&Vec<usize>>> = (0..n)
            .map(|v| paths.iter().filter(|p| start_of(quiver, vertex, p) == v).collect())
            .collect();
        let dims: Vec<usize> = at.iter().map(Vec::len).collect();
        let maps = quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| {
                let mut m = Matrix::zeros(dims[t], dims[s]);
                for (c, p) in at[s].iter().enumerate() {
                    if p.first() == Some(&a) {
                        let rest = &p[1..];
                        let r = at[t].iter().position(|q| q.as_slice() == rest).expect("suffix path exists");
                        m[(r, c)] = Rational::one();
                    }
                }
                m
            })
            .collect();
        Representation { quiver: quiver.clone(), dims, maps }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_vector(&self) -> Vec<i64> {
        self.dims.iter().map(|&d| d as i64).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }
}

fn paths_from(q: &Quiver, start: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut stack = vec![(start, Vec::new())];
    while let Some((v, path)) = stack.pop() {
        for (a, &(s, t)) in q.arrows().iter().enumerate() {
            if s == v {
                let mut p: Vec<usize> = path.clone();
                p.push(a);
                out.push(p.clone());
                stack.push((t, p));
            }
        }
    }
    out
}

fn paths_to(q: &Quiver, end: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut stack = vec![(end, Vec::new())];
    while let Some((v, path)) = stack.pop() {
        for (a, &(s, t)) in q.arrows().iter().enumerate() {
            if t == v {
                let mut p = vec![a];
                p.extend_from_slice(&path);
                out.push(p.clone());
                stack.push((s, p));
            }
        }
    }
    out
}

fn end_of(q: &Quiver, start: usize, path: &[usize]) -> usize {
    path.last().map_or(start, |&a| q.arrows()[a].1)
}

fn start_of(q: &Quiver, end: usize, path: &[usize]) -> usize {
    path.first().map_or(end, |&a| q.arrows()[a].0)
}

fn same_quiver(m: &Representation, n: &Representation) -> Result<()> {
    if m.quiver.vertex_count() != n.quiver.vertex_count() || m.quiver.arrows() != n.quiver.arrows() {
        return Err(Error::QuiverMismatch);
    }
    Ok(())
}

/// A basis of `Hom(M, N)`; each element is one matrix per vertex.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub dim: usize,
    pub basis: Vec<Vec<Matrix>>,
}

/// Commuting-square system `N_a phi_s = phi_t M_a` in the entries of `(phi_v)`.
fn hom_system(m: &Representation, n: &Representation) -> (Matrix, Vec<usize>) {
    let nv = m.dims.len();
    let mut offsets = Vec::with_capacity(nv + 1);
    offsets.push(0);
    for v in 0..nv {
        offsets.push(offsets[v] + n.dims[v] * m.dims[v]);
    }
    let vars = offsets[nv];
    let eq_count: usize = m.quiver.arrows().iter().map(|&(s, t)| n.dims[t] * m.dims[s]).sum();
    let mut sys = Matrix::zeros(eq_count, vars);
    let mut row = 0;
    for (a, &(s, t)) in m.quiver.arrows().iter().enumerate() {
        let (ma, na) = (&m.maps[a], &n.maps[a]);
        let (ms, nt, mt) = (m.dims[s], n.dims[t], m.dims[t]);
        for r in 0..nt {
            for c in 0..ms {
                for k in 0..n.dims[s] {
                    let x = &na[(r, k)];
                    if !x.is_zero() {
                        sys[(row, offsets[s] + k * ms + c)] += x;
                    }
                }
                for k in 0..mt {
                    let x = &ma[(k, c)];
                    if !x.is_zero() {
                        sys[(row, offsets[t] + r * mt + k)] -= x;
                    }
                }
                row += 1;
            }
        }
    }
    (sys, offsets)
}

/// Basis of `Hom(M, N)`.
pub fn hom_space(m: &Representation, n: &Representation) -> Result<HomSpace> {
    same_quiver(m, n)?;
    let (sys, offsets) = hom_system(m, n);
    let kernel = sys.kernel();
    let basis = (0..kernel.cols())
        .map(|k| {
            (0..m.dims.len())
                .map(|v| {
                    let (rows, cols) = (n.dims[v], m.dims[v]);
                    let mut phi = Matrix::zeros(rows, cols);
                    for r in 0..rows {
                        for c in 0..cols {
                            phi[(r, c)] = kernel[(offsets[v] + r * cols + c, k)].clone();
                        }
                    }
                    phi
                })
                .collect()
        })
        .collect();
    Ok(HomSpace { dim: kernel.cols(), basis })
}

/// `dim Hom(M, N)` without materializing a basis.
pub fn hom_dim(m: &Representation, n: &Representation) -> Result<usize> {
    same_quiver(m, n)?;
    if let Some(d) = hom_dim_integral(m, n) {
        return Ok(d);
    }
    let (sys, offsets) = hom_system(m, n);
    Ok(offsets[m.dims.len()] - sys.rank())
}

/// The commuting-square system scaled to integers, solved by integer elimination.
fn hom_dim_integral(m: &Representation, n: &Representation) -> Option<usize> {
    let nv = m.dims.len();
    let mut offsets = vec![0];
    for v in 0..nv {
        offsets.push(offsets[v] + n.dims[v] * m.dims[v]);
    }
    let vars = offsets[nv];
    let mut rows = Vec::new();
    for (a, &(s, t)) in m.quiver.arrows().iter().enumerate() {
        let (ma, dm) = m.maps[a].to_integer()?;
        let (na, dn) = n.maps[a].to_integer()?;
        let (ms, ns, nt, mt) = (m.dims[s], n.dims[s], n.dims[t], m.dims[t]);
        for r in 0..nt {
            for c in 0..ms {
                let mut row = vec![0i128; vars];
                for k in 0..ns {
                    row[offsets[s] + k * ms + c] += na[r * ns + k].checked_mul(dm)?;
                }
                for k in 0..mt {
                    row[offsets[t] + r * mt + k] -= ma[k * ms + c].checked_mul(dn)?;
                }
                rows.push(row);
            }
        }
    }
    Some(vars - integer_rank(rows, vars)?)
}

/// `dim Ext^1(M, N) = dim Hom(M, N) - <dim M, dim N>` (the path algebra is hereditary).
pub fn ext1_dim(m: &Representation, n: &Representation) -> Result<usize> {
    let hom = hom_dim(m, n)? as i64;
    let chi = euler_form(&m.quiver, &m.dim_vector(), &n.dim_vector())?;
    let ext = hom - chi;
    debug_assert!(ext >= 0, "negative Ext dimension");
    Ok(ext as usize)
}

const MONO_TRIALS: usize = 8;
const MONO_COEFF: i64 = 1_000_000;
const MONO_SEED: u64 = 0x6d6f_6e6f;

/// Whether some homomorphism `N -> M` is injective at every vertex.
///
/// Injective maps form a Zariski-open subset of `Hom(N, M)`, so a few random
/// combinations of a basis decide the question; small spaces are also searched
/// exhaustively over `{0, 1, -1}` coefficients.
pub fn exists_mono(n: &Representation, m: &Representation) -> Result<bool> {
    same_quiver(n, m)?;
    if n.dims.iter().zip(&m.dims).any(|(a, b)| a > b) {
        return Ok(false);
    }
    let hom = hom_space(n, m)?;
    if hom.dim == 0 {
        return Ok(false);
    }
    let injective = |coeffs: &[Rational]| {
        (0..n.dims.len()).all(|v| {
            let mut phi = Matrix::zeros(m.dims[v], n.dims[v]);
            for (c, b) in coeffs.iter().zip(&hom.basis) {
                if !c.is_zero() {
                    phi.scale_add(c, &b[v]);
                }
            }
            phi.rank() == n.dims[v]
        })
    };
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(MONO_SEED);
    for _ in 0..MONO_TRIALS {
        let coeffs: Vec<Rational> =
            (0..hom.dim).map(|_| rat(rng.random_range(-MONO_COEFF..=MONO_COEFF))).collect();
        if injective(&coeffs) {
            return Ok(true);
        }
    }
    if hom.dim <= 2 {
        let mut coeffs = vec![0i64; hom.dim];
        loop {
            if injective(&coeffs.iter().map(|&c| rat(c)).collect::<Vec<_>>()) {
                return Ok(true);
            }
            let mut k = 0;
            loop {
                if k == hom.dim {
                    return Ok(false);
                }
                coeffs[k] = match coeffs[k] {
                    0 => 1,
                    1 => -1,
                    _ => 0,
                };
                if coeffs[k] != 0 {
                    break;
                }
                k += 1;
            }
        }
    }
    Ok(false)
}

/// Direction of the Auslander-Reiten translate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// A representation of a quiver with a changing orientation; arrow indices
/// stay those of the original quiver.
struct Reflecting {
    dims: Vec<usize>,
    arrows: Vec<(usize, usize)>,
    maps: Vec<Matrix>,
}

impl Reflecting {
    /// Reflection at a sink `k`: the new space is the kernel of the sum of the
    /// incoming maps, and the arrows turn around.
    fn at_sink(&mut self, k: usize) {
        let incoming: Vec<usize> = (0..self.arrows.len()).filter(|&a| self.arrows[a].1 == k).collect();
        let blocks: Vec<&Matrix> = incoming.iter().map(|&a| &self.maps[a]).collect();
        let total = Matrix::hstack(self.dims[k], &blocks);
        let kernel = total.kernel();
        let mut off = 0;
        for &a in &incoming {
            let s = self.arrows[a].0;
            self.maps[a] = kernel.row_block(off, off + self.dims[s]);
            off += self.dims[s];
            self.arrows[a] = (k, s);
        }
        self.dims[k] = kernel.cols();
    }

    /// Reflection at a source `k`: the new space is the cokernel of the
    /// combined outgoing map.
    fn at_source(&mut self, k: usize) {
        let outgoing: Vec<usize> = (0..self.arrows.len()).filter(|&a| self.arrows[a].0 == k).collect();
        let blocks: Vec<&Matrix> = outgoing.iter().map(|&a| &self.maps[a]).collect();
        let total = Matrix::vstack(self.dims[k], &blocks);
        let coker = total.transpose().kernel().transpose();
        let mut off = 0;
        for &a in &outgoing {
            let t = self.arrows[a].1;
            self.maps[a] = coker.col_block(off, off + self.dims[t]);
            off += self.dims[t];
            self.arrows[a] = (t, k);
        }
        self.dims[k] = coker.rows();
    }
}

/// Coxeter functor: `tau` (forward) or `tau^-1` (inverse), computed as a
/// composition of reflection functors. Returns `None` when the result is zero.
pub(crate) fn coxeter_functor(m: &Representation, dir: Direction) -> Option<Representation> {
    let order = m.quiver.topological_order().expect("acyclic quiver");
    let mut r = Reflecting {
        dims: m.dims.clone(),
        arrows: m.quiver.arrows().to_vec(),
        maps: m.maps.clone(),
    };
    match dir {
        Direction::Forward => order.iter().rev().for_each(|&k| r.at_sink(k)),
        Direction::Inverse => order.iter().for_each(|&k| r.at_source(k)),
    }
    debug_assert_eq!(r.arrows, m.quiver.arrows());
    let out = Representation { quiver: m.quiver.clone(), dims: r.dims, maps: r.maps };
    (!out.is_zero()).then_some(out)
}

/// Auslander-Reiten translate of a brick.
///
/// `None` is the boundary marker: `tau` of a projective, or `tau^-1` of an
/// injective. Representations with an endomorphism algebra of dimension other
/// than one are rejected; every indecomposable in the preprojective and
/// preinjective components, and every indecomposable of a Dynkin quiver, is a brick.
pub fn ar_translate(m: &Representation, dir: Direction) -> Result<Option<Representation>> {
    let end = hom_dim(m, m)?;
    if end != 1 {
        return Err(Error::NotIndecomposable(end));
    }
    Ok(coxeter_functor(m, dir))
}

/// The indecomposable of a Dynkin quiver with dimension vector `d`.
pub fn indecomposable_from_root(q: &Quiver, d: &[i64]) -> Result<Representation> {
    if d.len() != q.vertex_count() {
        return Err(Error::DimensionMismatch { expected: q.vertex_count(), got: d.len() });
    }
    let roots = positive_roots(q)?;
    if !roots.iter().any(|r| r.as_slice() == d) {
        return Err(Error::NotARoot(d.to_vec()));
    }
    for i in 0..q.vertex_count() {
        let mut cur = Some(Representation::projective(q, i));
        while let Some(rep) = cur {
            if rep.dim_vector() == d {
                return Ok(rep);
            }
            cur = coxeter_functor(&rep, Direction::Inverse);
        }
    }
    unreachable!("every indecomposable of a Dynkin quiver is preprojective")
}
