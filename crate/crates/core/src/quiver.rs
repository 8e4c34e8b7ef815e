//! Finite acyclic quivers: parsing, presets, Euler form, Coxeter matrix,
//! Dynkin detection and positive roots.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// A finite quiver without oriented cycles. Vertices are `0..n` internally and
/// `1..=n` in the text format.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: usize,
    arrows: Vec<(usize, usize)>,
    name: Option<String>,
}

impl Quiver {
    /// Builds a quiver from 0-based arrows, rejecting oriented cycles.
    pub fn new(vertices: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::Parse("a quiver needs at least one vertex".into()));
        }
        if let Some(&(s, t)) = arrows.iter().find(|&&(s, t)| s >= vertices || t >= vertices) {
            return Err(Error::Parse(format!(
                "arrow {}->{} references a vertex outside 1..={vertices}",
                s + 1,
                t + 1
            )));
        }
        let q = Quiver { vertices, arrows, name: None };
        q.topological_order().ok_or(Error::CyclicQuiver)?;
        Ok(q)
    }

    fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    /// Orients a tree so that every arrow runs from an even-depth vertex
    /// (measured from vertex 1) to an odd-depth one.
    fn bipartite(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut depth = vec![usize::MAX; n];
        depth[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &(a, b) in edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && depth[y] == usize::MAX {
                        depth[y] = depth[v] + 1;
                        queue.push_back(y);
                    }
                }
            }
        }
        let arrows = edges
            .iter()
            .map(|&(a, b)| if depth[a] % 2 == 0 { (a, b) } else { (b, a) })
            .collect();
        Quiver::new(n, arrows)
    }

    /// `A_n` on the path 1 - 2 - ... - n, with odd vertices as sources and
    /// even vertices as sinks.
    pub fn a(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parse("A0 does not exist".into()));
        }
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Ok(Quiver::bipartite(n, &edges)?.named(&format!("A{n}")))
    }

    /// `D_n` (n >= 4): the path 1 - ... - (n-2) with vertices n-1 and n both
    /// attached to n-2; bipartite orientation as for `A_n`.
    pub fn d(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::Parse(format!("D{n} needs n >= 4")));
        }
        let mut edges: Vec<_> = (1..n - 2).map(|i| (i - 1, i)).collect();
        edges.push((n - 3, n - 2));
        edges.push((n - 3, n - 1));
        Ok(Quiver::bipartite(n, &edges)?.named(&format!("D{n}")))
    }

    /// `E_n` (n = 6, 7, 8): the path 1 - ... - (n-1) with vertex n attached to 3;
    /// bipartite orientation as for `A_n`.
    pub fn e(n: usize) -> Result<Self> {
        if !(6..=8).contains(&n) {
            return Err(Error::Parse(format!("E{n} does not exist")));
        }
        let mut edges: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
        edges.push((2, n - 1));
        Ok(Quiver::bipartite(n, &edges)?.named(&format!("E{n}")))
    }

    /// The `m`-arrow Kronecker quiver 1 => 2.
    pub fn kronecker(m: usize) -> Result<Self> {
        Ok(Quiver::new(2, vec![(0, 1); m])?.named(&format!("K{m}")))
    }

    /// Looks up a named preset (`A<n>`, `D<n>`, `E6`, `E7`, `E8`, `K<m>`).
    pub fn preset(name: &str) -> Result<Self> {
        let name = name.trim();
        let bad = || Error::Parse(format!("unknown quiver preset {name:?}"));
        let (head, tail) = name.split_at(name.char_indices().nth(1).map_or(name.len(), |(i, _)| i));
        let k: usize = tail.parse().map_err(|_| bad())?;
        match head {
            "A" if k >= 1 => Quiver::a(k),
            "D" => Quiver::d(k),
            "E" => Quiver::e(k),
            "K" if k >= 1 => Quiver::kronecker(k),
            _ => Err(bad()),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    /// Arrows as 0-based `(source, target)` pairs.
    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    /// Preset name, when the quiver came from one.
    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Preset name if any, otherwise the text format.
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.to_string())
    }

    /// Number of arrows `i -> j`.
    pub fn arrow_count(&self, i: usize, j: usize) -> usize {
        self.arrows.iter().filter(|&&a| a == (i, j)).count()
    }

    /// Vertices ordered so that every arrow points forward; `None` if cyclic.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg = vec![0usize; self.vertices];
        for &(_, t) in &self.arrows {
            indeg[t] += 1;
        }
        let mut queue: VecDeque<usize> = (0..self.vertices).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.vertices);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &(s, t) in &self.arrows {
                if s == v {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        queue.push_back(t);
                    }
                }
            }
        }
        (order.len() == self.vertices).then_some(order)
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_on(&(0..self.vertices).collect::<Vec<_>>())
    }

    /// Whether the full subquiver on `subset` is connected (and nonempty).
    pub fn is_connected_on(&self, subset: &[usize]) -> bool {
        let Some(&start) = subset.first() else {
            return false;
        };
        let set: BTreeSet<usize> = subset.iter().copied().collect();
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &(s, t) in &self.arrows {
                for (a, b) in [(s, t), (t, s)] {
                    if a == v && set.contains(&b) && seen.insert(b) {
                        stack.push(b);
                    }
                }
            }
        }
        seen.len() == set.len()
    }

    /// Full subquiver on a set of 0-based vertices, relabelled in increasing order.
    pub fn full_subquiver(&self, subset: &[usize]) -> Result<Quiver> {
        let verts: Vec<usize> = subset.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        if verts.iter().any(|&v| v >= self.vertices) {
            return Err(Error::InvalidArgument("subset vertex out of range".into()));
        }
        let pos = |v: usize| verts.iter().position(|&w| w == v);
        let arrows = self
            .arrows
            .iter()
            .filter_map(|&(s, t)| Some((pos(s)?, pos(t)?)))
            .collect();
        Quiver::new(verts.len(), arrows)
    }
}

impl fmt::Display for Quiver {
    /// Canonical text format, 1-based.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vertices:{}; arrows:", self.vertices)?;
        for (k, (s, t)) in self.arrows.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}->{}", s + 1, t + 1)?;
        }
        Ok(())
    }
}

impl FromStr for Quiver {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_quiver(s)
    }
}

impl Serialize for Quiver {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for Quiver {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_quiver(&s).map_err(serde::de::Error::custom)
    }
}

/// Parses either a preset name or `vertices:<n>; arrows:<s>-><t>,...`.
pub fn parse_quiver(text: &str) -> Result<Quiver> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if !compact.contains(':') {
        return Quiver::preset(&compact);
    }
    let (vpart, apart) = compact
        .split_once(';')
        .ok_or_else(|| Error::Parse("expected `vertices:<n>; arrows:...`".into()))?;
    let n: usize = vpart
        .strip_prefix("vertices:")
        .ok_or_else(|| Error::Parse("missing `vertices:`".into()))?
        .parse()
        .map_err(|_| Error::Parse(format!("bad vertex count in {vpart:?}")))?;
    let list = apart
        .strip_prefix("arrows:")
        .ok_or_else(|| Error::Parse("missing `arrows:`".into()))?;
    let mut arrows = Vec::new();
    for item in list.split(',').filter(|s| !s.is_empty()) {
        let (s, t) = item
            .split_once("->")
            .ok_or_else(|| Error::Parse(format!("bad arrow {item:?}")))?;
        let parse_v = |x: &str| -> Result<usize> {
            let v: usize = x.parse().map_err(|_| Error::Parse(format!("bad vertex {x:?}")))?;
            if v == 0 || v > n {
                return Err(Error::Parse(format!("vertex {v} outside 1..={n}")));
            }
            Ok(v - 1)
        };
        arrows.push((parse_v(s)?, parse_v(t)?));
    }
    Quiver::new(n, arrows)
}

/// Matrix `E` of the Euler form, `<d, e> = d^T E e`.
pub fn euler_matrix(q: &Quiver) -> IntMatrix {
    let n = q.vertex_count();
    let mut e = IntMatrix::identity(n);
    for &(s, t) in q.arrows() {
        e.set(s, t, e.get(s, t) - 1);
    }
    e
}

/// `<d, e> = sum_i d_i e_i - sum_{a: i -> j} d_i e_j`.
pub fn euler_form(q: &Quiver, d: &[i64], e: &[i64]) -> Result<i64> {
    let n = q.vertex_count();
    for v in [d, e] {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
    }
    let diag: i64 = d.iter().zip(e).map(|(a, b)| a * b).sum();
    let off: i64 = q.arrows().iter().map(|&(s, t)| d[s] * e[t]).sum();
    Ok(diag - off)
}

/// Lattice data of `D^b(Q)` on the dimension-vector lattice `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerData {
    /// Euler form matrix `E`.
    pub matrix: IntMatrix,
    /// Coxeter matrix: `dim(tau M) = coxeter * dim(M)` for non-projective indecomposables.
    pub coxeter: IntMatrix,
    /// Action of the Serre functor on classes, `-coxeter`.
    pub serre_k_action: IntMatrix,
    /// Inverse of `serre_k_action`.
    pub serre_k_inverse: IntMatrix,
}

impl EulerData {
    pub fn new(q: &Quiver) -> Self {
        let n = q.vertex_count();
        let e = euler_matrix(q);
        // E = I - A with A nilpotent, so E^-1 = I + A + ... + A^(n-1).
        let a = IntMatrix::identity(n).add(&e.neg());
        let mut e_inv = IntMatrix::identity(n);
        let mut power = IntMatrix::identity(n);
        for _ in 1..n {
            power = power.mul(&a);
            e_inv = e_inv.add(&power);
        }
        let serre = e_inv.mul(&e.transpose());
        let serre_inv = e_inv.transpose().mul(&e);
        EulerData { matrix: e, coxeter: serre.neg(), serre_k_action: serre, serre_k_inverse: serre_inv }
    }
}

/// Convenience wrapper matching the operation name.
pub fn coxeter_matrix(q: &Quiver) -> EulerData {
    EulerData::new(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Series {
    A,
    D,
    E,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DynkinClass {
    pub series: Series,
    pub rank: usize,
    pub coxeter_number: u32,
}

impl DynkinClass {
    /// `(k1, k2)` with `S^k1 = [k2]`.
    pub fn fcy_pair(&self) -> (u32, u32) {
        (self.coxeter_number, self.coxeter_number - 2)
    }

    pub fn name(&self) -> String {
        format!("{:?}{}", self.series, self.rank)
    }
}

/// Smallest `m >= 1` with `phi^m = id`, searching up to `bound`.
pub fn coxeter_order(phi: &IntMatrix, bound: u32) -> Option<u32> {
    let mut p = phi.clone();
    for m in 1..=bound {
        if p.is_identity() {
            return Some(m);
        }
        p = p.mul(phi);
    }
    None
}

/// ADE type of the underlying graph, or `None` when it is not Dynkin.
pub fn classify_dynkin(q: &Quiver) -> Result<Option<DynkinClass>> {
    if !q.is_connected() {
        return Err(Error::DisconnectedQuiver);
    }
    let n = q.vertex_count();
    let mut edges = BTreeSet::new();
    for &(s, t) in q.arrows() {
        if !edges.insert((s.min(t), s.max(t))) {
            return Ok(None);
        }
    }
    if edges.len() != n - 1 {
        return Ok(None);
    }
    let mut degree = vec![0usize; n];
    for &(a, b) in &edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    let branch: Vec<usize> = (0..n).filter(|&v| degree[v] >= 3).collect();
    let series = match branch.as_slice() {
        [] => Some((Series::A, n as u32 + 1)),
        [b] if degree[*b] == 3 => {
            let mut legs: Vec<usize> = neighbours(&edges, *b)
                .into_iter()
                .map(|nb| leg_length(&edges, *b, nb))
                .collect();
            legs.sort_unstable();
            match legs.as_slice() {
                [1, 1, _] => Some((Series::D, 2 * n as u32 - 2)),
                [1, 2, 2] => Some((Series::E, 12)),
                [1, 2, 3] => Some((Series::E, 18)),
                [1, 2, 4] => Some((Series::E, 30)),
                _ => None,
            }
        }
        _ => None,
    };
    let Some((series, h_formula)) = series else {
        return Ok(None);
    };
    let phi = EulerData::new(q).coxeter;
    let h = coxeter_order(&phi, 64).expect("Dynkin Coxeter matrix has finite order");
    debug_assert_eq!(h, h_formula, "Coxeter number disagrees with the ADE table");
    Ok(Some(DynkinClass { series, rank: n, coxeter_number: h }))
}

fn neighbours(edges: &BTreeSet<(usize, usize)>, v: usize) -> Vec<usize> {
    edges
        .iter()
        .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
        .collect()
}

fn leg_length(edges: &BTreeSet<(usize, usize)>, from: usize, first: usize) -> usize {
    let (mut prev, mut cur, mut len) = (from, first, 1);
    loop {
        let next: Vec<usize> = neighbours(edges, cur).into_iter().filter(|&w| w != prev).collect();
        match next.as_slice() {
            [w] => {
                prev = cur;
                cur = *w;
                len += 1;
            }
            _ => return len,
        }
    }
}

/// Symmetrized Euler form `(x, y) = <x, y> + <y, x>`.
fn symmetric_form(e: &IntMatrix, x: &[i64], y: &[i64]) -> i64 {
    let ey = e.apply(y);
    let ex = e.apply(x);
    x.iter().zip(&ey).map(|(a, b)| a * b).sum::<i64>() + y.iter().zip(&ex).map(|(a, b)| a * b).sum::<i64>()
}

/// Positive roots of a Dynkin quiver, sorted by height; simple roots come in vertex order.
pub fn positive_roots(q: &Quiver) -> Result<Vec<Vec<i64>>> {
    if classify_dynkin(q)?.is_none() {
        return Err(Error::NotDynkin);
    }
    let n = q.vertex_count();
    let e = euler_matrix(q);
    let simple = |i: usize| {
        let mut v = vec![0i64; n];
        v[i] = 1;
        v
    };
    let mut roots: BTreeSet<Vec<i64>> = (0..n).map(simple).collect();
    let mut queue: VecDeque<Vec<i64>> = roots.iter().cloned().collect();
    while let Some(root) = queue.pop_front() {
        for i in 0..n {
            let c = symmetric_form(&e, &root, &simple(i));
            let mut r = root.clone();
            r[i] -= c;
            if r.iter().all(|&x| x >= 0) && r.iter().any(|&x| x > 0) && roots.insert(r.clone()) {
                queue.push_back(r);
            }
        }
    }
    let mut out: Vec<_> = roots.into_iter().collect();
    out.sort_by_key(|r| (r.iter().sum::<i64>(), std::cmp::Reverse(r.clone())));
    Ok(out)
}
