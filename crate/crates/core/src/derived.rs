//! Objects of the bounded derived category as formal sums of shifted
//! indecomposables, with the Serre functor and graded Hom dimensions.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::catalog::{HomTable, IndecCatalog};
use crate::error::{Error, Result};
use crate::quiver::{classify_dynkin, DynkinClass, EulerData, Quiver};

/// Total dimension allowed when cataloging components of a non-Dynkin quiver.
pub const DEFAULT_BUDGET: usize = 500_000;

/// Everything needed to compute in `D^b(Q)`: the quiver, its lattice data,
/// the indecomposable catalog and (lazily) the full Hom table.
#[derive(Debug)]
pub struct QuiverCategory {
    quiver: Quiver,
    euler: EulerData,
    dynkin: Option<DynkinClass>,
    catalog: IndecCatalog,
    homs: OnceLock<HomTable>,
}

impl QuiverCategory {
    /// Category of a Dynkin quiver with its complete catalog.
    pub fn dynkin(q: &Quiver) -> Result<Self> {
        Self::from_catalog(IndecCatalog::dynkin(q)?)
    }

    /// Any connected acyclic quiver. Non-Dynkin quivers get their preprojective
    /// and preinjective components up to `depth`.
    pub fn with_depth(q: &Quiver, depth: usize, budget: usize) -> Result<Self> {
        Self::from_catalog(IndecCatalog::components(q, depth, budget)?)
    }

    pub fn from_catalog(catalog: IndecCatalog) -> Result<Self> {
        let quiver = catalog.quiver().clone();
        let dynkin = classify_dynkin(&quiver)?;
        Ok(QuiverCategory { euler: EulerData::new(&quiver), quiver, dynkin, catalog, homs: OnceLock::new() })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn euler(&self) -> &EulerData {
        &self.euler
    }

    pub fn dynkin_class(&self) -> Option<DynkinClass> {
        self.dynkin
    }

    pub fn catalog(&self) -> &IndecCatalog {
        &self.catalog
    }

    /// Hom/Ext/mono table over the whole catalog; requires a complete catalog.
    pub fn hom_table(&self) -> Result<&HomTable> {
        if !self.catalog.is_complete() {
            return Err(Error::CatalogIncomplete);
        }
        Ok(self.homs.get_or_init(|| HomTable::new(&self.catalog)))
    }

    pub fn hom(&self, i: usize, j: usize) -> usize {
        match self.homs.get() {
            Some(t) => t.hom(i, j),
            None => self.catalog.hom_dim(i, j),
        }
    }

    pub fn ext(&self, i: usize, j: usize) -> usize {
        match self.homs.get() {
            Some(t) => t.ext(i, j),
            None => self.catalog.ext_dim(i, j),
        }
    }

    fn check(&self, x: &DerivedObject) -> Result<()> {
        match x.summands.iter().find(|&&(id, _)| id >= self.catalog.len()) {
            Some(&(id, _)) => Err(Error::CatalogMiss(format!("no indecomposable with id {id}"))),
            None => Ok(()),
        }
    }
}

/// A finite direct sum of shifted indecomposables `M[k]`, stored as sorted
/// `(catalog id, shift)` pairs. The empty sum is the zero object.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DerivedObject {
    summands: Vec<(usize, i64)>,
}

#[derive(Serialize, Deserialize)]
struct SummandJson {
    root: Vec<i64>,
    shift: i64,
}

impl DerivedObject {
    pub fn new(mut summands: Vec<(usize, i64)>) -> Self {
        summands.sort_unstable();
        DerivedObject { summands }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn indecomposable(id: usize, shift: i64) -> Self {
        DerivedObject { summands: vec![(id, shift)] }
    }

    pub fn summands(&self) -> &[(usize, i64)] {
        &self.summands
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn shift(&self, k: i64) -> Self {
        Self::new(self.summands.iter().map(|&(id, s)| (id, s + k)).collect())
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::new(self.summands.iter().chain(&other.summands).copied().collect())
    }

    /// JSON array of `{root, shift}` objects, one per summand.
    pub fn to_json(&self, cat: &QuiverCategory) -> serde_json::Value {
        let items: Vec<SummandJson> = self
            .summands
            .iter()
            .map(|&(id, shift)| SummandJson { root: cat.catalog.entry(id).dim_vector.clone(), shift })
            .collect();
        serde_json::to_value(items).expect("summands serialize")
    }

    pub fn from_json(cat: &QuiverCategory, text: &str) -> Result<Self> {
        let items: Vec<SummandJson> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let summands = items
            .into_iter()
            .map(|s| {
                cat.catalog
                    .lookup(&s.root)
                    .map(|id| (id, s.shift))
                    .ok_or_else(|| Error::CatalogMiss(format!("{:?}", s.root)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(summands))
    }
}

/// `G = P_1 + ... + P_n` in degree zero.
pub fn standard_generator(cat: &QuiverCategory) -> DerivedObject {
    DerivedObject::new((0..cat.quiver.vertex_count()).map(|i| (cat.catalog.projective(i), 0)).collect())
}

/// `S(M[k])`: `I_i[k]` for `M = P_i`, otherwise `(tau M)[k+1]`.
fn serre_once(cat: &QuiverCategory, id: usize, shift: i64) -> Result<(usize, i64)> {
    let e = cat.catalog.entry(id);
    if let Some(i) = e.projective_index {
        return Ok((cat.catalog.injective(i), shift));
    }
    e.tau
        .map(|t| (t, shift + 1))
        .ok_or_else(|| Error::CatalogMiss(format!("tau of {:?}", e.dim_vector)))
}

/// `S^-1(M[k])`: `P_i[k]` for `M = I_i`, otherwise `(tau^-1 M)[k-1]`.
fn serre_inverse_once(cat: &QuiverCategory, id: usize, shift: i64) -> Result<(usize, i64)> {
    let e = cat.catalog.entry(id);
    if let Some(i) = e.injective_index {
        return Ok((cat.catalog.projective(i), shift));
    }
    e.tau_inv
        .map(|t| (t, shift - 1))
        .ok_or_else(|| Error::CatalogMiss(format!("tau^-1 of {:?}", e.dim_vector)))
}

/// `S^power(X)`; negative powers apply the inverse Serre functor.
pub fn serre_apply(cat: &QuiverCategory, x: &DerivedObject, power: i64) -> Result<DerivedObject> {
    cat.check(x)?;
    let step = if power >= 0 { serre_once } else { serre_inverse_once };
    let mut summands = x.summands.clone();
    for _ in 0..power.unsigned_abs() {
        summands = summands.into_iter().map(|(id, k)| step(cat, id, k)).collect::<Result<_>>()?;
    }
    Ok(DerivedObject::new(summands))
}

/// `m -> dim Hom(X, Y[m])`, omitting zero entries.
pub fn hom_poincare(cat: &QuiverCategory, x: &DerivedObject, y: &DerivedObject) -> Result<BTreeMap<i64, usize>> {
    cat.check(x)?;
    cat.check(y)?;
    let mut out = BTreeMap::new();
    for &(i, a) in &x.summands {
        for &(j, b) in &y.summands {
            let hom = cat.hom(i, j);
            if hom > 0 {
                *out.entry(a - b).or_insert(0) += hom;
            }
            let ext = cat.ext(i, j);
            if ext > 0 {
                *out.entry(a - b + 1).or_insert(0) += ext;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> QuiverCategory {
        QuiverCategory::dynkin(&Quiver::a(2).unwrap()).unwrap()
    }

    #[test]
    fn generators() {
        let cat = a2();
        let g = standard_generator(&cat);
        assert_eq!(g.summands().len(), 2);
        let a1 = QuiverCategory::dynkin(&Quiver::a(1).unwrap()).unwrap();
        assert_eq!(standard_generator(&a1).summands(), &[(0, 0)]);
    }

    #[test]
    fn serre_on_a2() {
        let cat = a2();
        let c = cat.catalog();
        let p1 = c.projective(0);
        let s1 = c.lookup(&[1, 0]).unwrap();
        let s2 = c.lookup(&[0, 1]).unwrap();
        let sp1 = serre_apply(&cat, &DerivedObject::indecomposable(p1, 0), 1).unwrap();
        assert_eq!(sp1, DerivedObject::indecomposable(s1, 0));
        let g = standard_generator(&cat);
        assert_eq!(serre_apply(&cat, &g, 3).unwrap(), g.shift(1));
        let s2g = serre_apply(&cat, &g, 2).unwrap();
        assert_eq!(s2g, DerivedObject::new(vec![(s2, 1), (s1, 0)]));
        assert_eq!(serre_apply(&cat, &s2g, -2).unwrap(), g);
    }

    #[test]
    fn serre_is_identity_on_a1() {
        let cat = QuiverCategory::dynkin(&Quiver::a(1).unwrap()).unwrap();
        let x = DerivedObject::indecomposable(0, 3);
        for p in -3..=3 {
            assert_eq!(serre_apply(&cat, &x, p).unwrap(), x);
        }
    }

    #[test]
    fn poincare_examples_on_a2() {
        let cat = a2();
        let g = standard_generator(&cat);
        let one = |pairs: &[(i64, usize)]| pairs.iter().copied().collect::<BTreeMap<_, _>>();
        assert_eq!(hom_poincare(&cat, &g, &g).unwrap(), one(&[(0, 3)]));
        let sg = serre_apply(&cat, &g, 1).unwrap();
        assert_eq!(hom_poincare(&cat, &g, &sg).unwrap(), one(&[(0, 3)]));
        let s2g = serre_apply(&cat, &g, 2).unwrap();
        assert_eq!(hom_poincare(&cat, &g, &s2g).unwrap(), one(&[(-1, 1), (0, 1)]));
    }

    #[test]
    fn json_round_trip() {
        let cat = a2();
        let x = DerivedObject::new(vec![(0, 2), (2, -1)]);
        let text = x.to_json(&cat).to_string();
        assert_eq!(DerivedObject::from_json(&cat, &text).unwrap(), x);
        assert!(matches!(
            DerivedObject::from_json(&cat, r#"[{"root":[2,2],"shift":0}]"#),
            Err(Error::CatalogMiss(_))
        ));
    }

    #[test]
    fn unknown_ids_are_rejected() {
        let cat = a2();
        let bad = DerivedObject::indecomposable(99, 0);
        assert!(matches!(serre_apply(&cat, &bad, 1), Err(Error::CatalogMiss(_))));
    }

    #[test]
    fn kronecker_leaves_catalog_at_depth() {
        let cat = QuiverCategory::with_depth(&Quiver::kronecker(2).unwrap(), 3, DEFAULT_BUDGET).unwrap();
        let g = standard_generator(&cat);
        assert!(serre_apply(&cat, &g, 4).is_ok());
        assert!(matches!(serre_apply(&cat, &g, 6), Err(Error::CatalogMiss(_))));
        assert!(matches!(cat.hom_table(), Err(Error::CatalogIncomplete)));
    }
}
