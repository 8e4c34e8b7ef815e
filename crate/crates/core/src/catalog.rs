//! Catalogs of indecomposable representations, keyed by dimension vector, and
//! precomputed Hom/Ext tables.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::quiver::{classify_dynkin, euler_form, positive_roots, EulerData, Quiver};
use crate::rep::{coxeter_functor, exists_mono, hom_dim, Direction, Representation};

/// Version tag written into catalog cache files.
pub const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct IndecEntry {
    pub id: usize,
    pub dim_vector: Vec<i64>,
    pub rep: Representation,
    pub is_projective: bool,
    pub is_injective: bool,
    /// `i` when this entry is `P_i`.
    pub projective_index: Option<usize>,
    /// `i` when this entry is `I_i`.
    pub injective_index: Option<usize>,
    /// Entry id of `tau M`, when it is cataloged.
    pub tau: Option<usize>,
    /// Entry id of `tau^-1 M`, when it is cataloged.
    pub tau_inv: Option<usize>,
}

/// Indecomposables of `mod kQ`. For Dynkin quivers the catalog is complete;
/// otherwise it holds the preprojective and preinjective components up to a
/// chosen depth.
#[derive(Clone, Debug)]
pub struct IndecCatalog {
    quiver: Quiver,
    entries: Vec<IndecEntry>,
    by_dim: HashMap<Vec<i64>, usize>,
    projectives: Vec<usize>,
    injectives: Vec<usize>,
    complete: bool,
}

impl IndecCatalog {
    /// Every indecomposable of a Dynkin quiver, as `tau^-k P_i` ordered by `(k, i)`.
    pub fn dynkin(q: &Quiver) -> Result<Self> {
        if classify_dynkin(q)?.is_none() {
            return Err(Error::NotDynkin);
        }
        let n = q.vertex_count();
        let mut layers: Vec<Option<Representation>> = (0..n).map(|i| Some(Representation::projective(q, i))).collect();
        let mut reps = Vec::new();
        while layers.iter().any(Option::is_some) {
            for slot in layers.iter_mut() {
                if let Some(rep) = slot.take() {
                    *slot = coxeter_functor(&rep, Direction::Inverse);
                    reps.push(rep);
                }
            }
        }
        let roots = positive_roots(q)?;
        debug_assert_eq!(reps.len(), roots.len(), "preprojective component must exhaust the roots");
        Self::assemble(q, reps, true)
    }

    /// Preprojectives `tau^-k P_i` and preinjectives `tau^k I_i` for `k <= depth`.
    /// Fails with `BudgetExceeded` once the summed dimension passes `budget`.
    /// Dynkin quivers get the complete catalog.
    pub fn components(q: &Quiver, depth: usize, budget: usize) -> Result<Self> {
        if classify_dynkin(q)?.is_some() {
            return Self::dynkin(q);
        }
        let n = q.vertex_count();
        let mut reps: Vec<Representation> = Vec::new();
        let mut spent = 0usize;
        let mut push = |rep: Representation, reps: &mut Vec<Representation>| -> Result<()> {
            spent += rep.total_dim();
            if spent > budget {
                return Err(Error::BudgetExceeded(format!(
                    "catalog for {} needs more than {budget} total dimensions at depth {depth}",
                    q.label()
                )));
            }
            if !reps.iter().any(|r| r.dims() == rep.dims()) {
                reps.push(rep);
            }
            Ok(())
        };
        for (start, dir) in [
            ((0..n).map(|i| Representation::projective(q, i)).collect::<Vec<_>>(), Direction::Inverse),
            ((0..n).map(|i| Representation::injective(q, i)).collect::<Vec<_>>(), Direction::Forward),
        ] {
            let mut layer: Vec<Option<Representation>> = start.into_iter().map(Some).collect();
            for k in 0..=depth {
                for slot in layer.iter_mut() {
                    if let Some(rep) = slot.take() {
                        if k < depth {
                            *slot = coxeter_functor(&rep, dir);
                        }
                        push(rep, &mut reps)?;
                    }
                }
            }
        }
        Self::assemble(q, reps, false)
    }

    fn assemble(q: &Quiver, reps: Vec<Representation>, complete: bool) -> Result<Self> {
        let n = q.vertex_count();
        let euler = EulerData::new(q);
        let coxeter_inv = euler.serre_k_inverse.neg();
        let p_dims: Vec<Vec<i64>> = (0..n).map(|i| Representation::projective(q, i).dim_vector()).collect();
        let i_dims: Vec<Vec<i64>> = (0..n).map(|i| Representation::injective(q, i).dim_vector()).collect();
        let by_dim: HashMap<Vec<i64>, usize> =
            reps.iter().enumerate().map(|(k, r)| (r.dim_vector(), k)).collect();
        let entries: Vec<IndecEntry> = reps
            .into_iter()
            .enumerate()
            .map(|(id, rep)| {
                let d = rep.dim_vector();
                let projective_index = p_dims.iter().position(|p| *p == d);
                let injective_index = i_dims.iter().position(|p| *p == d);
                let tau = match projective_index {
                    Some(_) => None,
                    None => by_dim.get(&euler.coxeter.apply(&d)).copied(),
                };
                let tau_inv = match injective_index {
                    Some(_) => None,
                    None => by_dim.get(&coxeter_inv.apply(&d)).copied(),
                };
                IndecEntry {
                    id,
                    dim_vector: d,
                    rep,
                    is_projective: projective_index.is_some(),
                    is_injective: injective_index.is_some(),
                    projective_index,
                    injective_index,
                    tau,
                    tau_inv,
                }
            })
            .collect();
        let find = |dims: &[Vec<i64>]| -> Result<Vec<usize>> {
            dims.iter()
                .map(|d| by_dim.get(d).copied().ok_or_else(|| Error::CatalogMiss(format!("{d:?}"))))
                .collect()
        };
        let projectives = find(&p_dims)?;
        let injectives = find(&i_dims)?;
        Ok(IndecCatalog { quiver: q.clone(), entries, by_dim, projectives, injectives, complete })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn entries(&self) -> &[IndecEntry] {
        &self.entries
    }

    pub fn entry(&self, id: usize) -> &IndecEntry {
        &self.entries[id]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Whether every indecomposable is present (Dynkin case).
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn lookup(&self, dim_vector: &[i64]) -> Option<usize> {
        self.by_dim.get(dim_vector).copied()
    }

    /// Entry id of `P_i`.
    pub fn projective(&self, i: usize) -> usize {
        self.projectives[i]
    }

    /// Entry id of `I_i`.
    pub fn injective(&self, i: usize) -> usize {
        self.injectives[i]
    }

    /// `dim Hom(M_i, M_j)`, using `Hom(P_v, N) = N_v` and `Hom(M, I_v) = M_v` when possible.
    pub fn hom_dim(&self, i: usize, j: usize) -> usize {
        let (a, b) = (&self.entries[i], &self.entries[j]);
        if let Some(v) = a.projective_index {
            return b.dim_vector[v] as usize;
        }
        if let Some(v) = b.injective_index {
            return a.dim_vector[v] as usize;
        }
        hom_dim(&a.rep, &b.rep).expect("catalog entries share a quiver")
    }

    /// `dim Ext^1(M_i, M_j)` from the Euler form.
    pub fn ext_dim(&self, i: usize, j: usize) -> usize {
        let chi = self.euler(i, j);
        let ext = self.hom_dim(i, j) as i64 - chi;
        debug_assert!(ext >= 0);
        ext as usize
    }

    fn euler(&self, i: usize, j: usize) -> i64 {
        euler_form(&self.quiver, &self.entries[i].dim_vector, &self.entries[j].dim_vector)
            .expect("catalog dimension vectors have the right length")
    }

    /// JSON cache form; rational entries are written as `"p/q"` strings.
    pub fn to_json(&self) -> String {
        let file = CatalogFile {
            format_version: CACHE_FORMAT_VERSION,
            quiver: self.quiver.label(),
            complete: self.complete,
            entries: self
                .entries
                .iter()
                .map(|e| EntryFile {
                    dim_vector: e.dim_vector.clone(),
                    is_projective: e.is_projective,
                    is_injective: e.is_injective,
                    maps: e.rep.maps().iter().map(Matrix::to_strings).collect(),
                })
                .collect(),
        };
        serde_json::to_string(&file).expect("catalog serializes")
    }

    /// Reads a catalog written by [`IndecCatalog::to_json`] for the same quiver.
    pub fn from_json(q: &Quiver, text: &str) -> Result<Self> {
        let file: CatalogFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if file.format_version != CACHE_FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported catalog version {}", file.format_version)));
        }
        let stored = crate::quiver::parse_quiver(&file.quiver)?;
        if stored.arrows() != q.arrows() || stored.vertex_count() != q.vertex_count() {
            return Err(Error::QuiverMismatch);
        }
        let mut reps = Vec::with_capacity(file.entries.len());
        for e in &file.entries {
            if e.dim_vector.iter().any(|&d| d < 0) {
                return Err(Error::Parse("negative dimension in catalog".into()));
            }
            let dims: Vec<usize> = e.dim_vector.iter().map(|&d| d as usize).collect();
            if dims.len() != q.vertex_count() || e.maps.len() != q.arrows().len() {
                return Err(Error::Parse("catalog entry does not fit the quiver".into()));
            }
            let maps = e
                .maps
                .iter()
                .zip(q.arrows())
                .map(|(m, &(s, t))| Matrix::from_strings(dims[t], dims[s], m).map_err(Error::Parse))
                .collect::<Result<Vec<_>>>()?;
            reps.push(Representation::new(q, dims, maps)?);
        }
        let cat = Self::assemble(q, reps, file.complete)?;
        for (e, f) in cat.entries.iter().zip(&file.entries) {
            if e.is_projective != f.is_projective || e.is_injective != f.is_injective {
                return Err(Error::Parse(format!("inconsistent flags for {:?}", f.dim_vector)));
            }
        }
        Ok(cat)
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_json())
    }

    pub fn load(q: &Quiver, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(q, &text)
    }
}

#[derive(Serialize, Deserialize)]
struct CatalogFile {
    format_version: u32,
    quiver: String,
    complete: bool,
    entries: Vec<EntryFile>,
}

#[derive(Serialize, Deserialize)]
struct EntryFile {
    dim_vector: Vec<i64>,
    is_projective: bool,
    is_injective: bool,
    maps: Vec<Vec<Vec<String>>>,
}

/// Hom, Ext and monomorphism data for every ordered pair of catalog entries.
#[derive(Clone, Debug)]
pub struct HomTable {
    hom: Vec<Vec<usize>>,
    ext: Vec<Vec<usize>>,
    mono: Vec<Vec<bool>>,
}

impl HomTable {
    pub fn new(cat: &IndecCatalog) -> Self {
        let n = cat.len();
        let mut hom = vec![vec![0; n]; n];
        let mut ext = vec![vec![0; n]; n];
        let mut mono = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                hom[i][j] = cat.hom_dim(i, j);
                ext[i][j] = (hom[i][j] as i64 - cat.euler(i, j)) as usize;
                mono[i][j] = hom[i][j] > 0
                    && exists_mono(&cat.entry(i).rep, &cat.entry(j).rep).expect("same quiver");
            }
        }
        HomTable { hom, ext, mono }
    }

    pub fn hom(&self, i: usize, j: usize) -> usize {
        self.hom[i][j]
    }

    pub fn ext(&self, i: usize, j: usize) -> usize {
        self.ext[i][j]
    }

    /// Whether `M_i` embeds into `M_j`.
    pub fn mono(&self, i: usize, j: usize) -> bool {
        self.mono[i][j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dynkin_catalogs_match_root_counts() {
        for (name, count) in [("A1", 1), ("A2", 3), ("A3", 6), ("D4", 12), ("D5", 20), ("E6", 36)] {
            let q = Quiver::preset(name).unwrap();
            let cat = IndecCatalog::dynkin(&q).unwrap();
            assert_eq!(cat.len(), count, "{name}");
            let mut dims: Vec<_> = cat.entries().iter().map(|e| e.dim_vector.clone()).collect();
            let mut roots = positive_roots(&q).unwrap();
            dims.sort();
            roots.sort();
            assert_eq!(dims, roots);
        }
    }

    #[test]
    fn a2_entries_and_links() {
        let cat = IndecCatalog::dynkin(&Quiver::a(2).unwrap()).unwrap();
        let p1 = cat.projective(0);
        let s1 = cat.lookup(&[1, 0]).unwrap();
        let s2 = cat.lookup(&[0, 1]).unwrap();
        assert_eq!(cat.injective(1), p1);
        assert_eq!(cat.injective(0), s1);
        assert_eq!(cat.entry(s1).tau, Some(s2));
        assert_eq!(cat.entry(s2).tau_inv, Some(s1));
        assert_eq!(cat.entry(p1).tau, None);
        assert!(cat.entry(p1).is_projective && cat.entry(p1).is_injective);
    }

    #[test]
    fn kronecker_components() {
        let q = Quiver::kronecker(2).unwrap();
        let cat = IndecCatalog::components(&q, 5, 10_000).unwrap();
        assert!(!cat.is_complete());
        assert_eq!(cat.len(), 24);
        // preinjective tau^k I_2 has dimension (k+2, k+1) pattern shifted by parity
        let i2 = cat.injective(1);
        assert_eq!(cat.entry(i2).dim_vector, vec![2, 1]);
        assert_eq!(cat.entry(cat.entry(i2).tau.unwrap()).dim_vector, vec![4, 3]);
        assert!(matches!(IndecCatalog::components(&q, 50, 100), Err(Error::BudgetExceeded(_))));
        assert_eq!(IndecCatalog::dynkin(&q).unwrap_err(), Error::NotDynkin);
    }

    #[test]
    fn cache_round_trip() {
        let q = Quiver::d(4).unwrap();
        let cat = IndecCatalog::dynkin(&q).unwrap();
        let back = IndecCatalog::from_json(&q, &cat.to_json()).unwrap();
        assert_eq!(back.len(), cat.len());
        for (a, b) in cat.entries().iter().zip(back.entries()) {
            assert_eq!(a.rep, b.rep);
            assert_eq!(a.tau, b.tau);
        }
        let other = Quiver::a(4).unwrap();
        assert_eq!(IndecCatalog::from_json(&other, &cat.to_json()).unwrap_err(), Error::QuiverMismatch);
    }

    #[test]
    fn table_agrees_with_direct_computation() {
        let q = Quiver::a(3).unwrap();
        let cat = IndecCatalog::dynkin(&q).unwrap();
        let table = HomTable::new(&cat);
        for i in 0..cat.len() {
            for j in 0..cat.len() {
                let (a, b) = (&cat.entry(i).rep, &cat.entry(j).rep);
                assert_eq!(table.hom(i, j), hom_dim(a, b).unwrap());
                assert_eq!(table.ext(i, j), crate::rep::ext1_dim(a, b).unwrap());
            }
            assert!(table.mono(i, i));
        }
    }
}
