//! Finite oriented simplicial complexes.
//!
//! A simplex is identified by its sorted vertex set; its orientation is kept
//! as a separate sign (`+1` when the stored orientation is an even permutation
//! of the sorted order). Lower simplices are derived by closure and carry the
//! sorted orientation unless they were listed explicitly.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;

/// Position of a simplex inside a complex: its dimension and its index among
/// the simplices of that dimension (lexicographic order of sorted vertices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimplexId {
    pub dim: usize,
    pub index: usize,
}

impl SimplexId {
    pub fn new(dim: usize, index: usize) -> Self {
        Self { dim, index }
    }
}

impl std::fmt::Display for SimplexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.dim, self.index)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ManifoldKind {
    ClosedOriented,
    WithBoundary,
    None,
}

impl ManifoldKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ManifoldKind::ClosedOriented => "closed_oriented",
            ManifoldKind::WithBoundary => "with_boundary",
            ManifoldKind::None => "none",
        }
    }
}

/// Manifold property a caller insists on when building a complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ManifoldRequest {
    #[default]
    None,
    ClosedOriented,
    /// A pseudomanifold whose boundary may be empty.
    WithBoundary,
}

#[derive(Debug, Error, PartialEq)]
pub enum ComplexError {
    #[error("simplex {0:?} repeats a vertex")]
    RepeatedVertex(Vec<Vertex>),
    #[error("simplex with vertex set {0:?} is listed more than once")]
    DuplicateSimplex(Vec<Vertex>),
    #[error("complex is not a {requested} pseudomanifold: {reason}")]
    NotPseudomanifold { requested: &'static str, reason: String },
    #[error("unknown simplex {0}")]
    UnknownSimplex(SimplexId),
    #[error("unknown simplex with vertices {0:?}")]
    UnknownVertices(Vec<Vertex>),
    #[error("flag depth {q} out of range for a complex of dimension {dim}")]
    FlagDepth { q: usize, dim: usize },
    #[error("gluing: {0}")]
    Gluing(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Simplex {
    vertices: Vec<Vertex>,
    orientation: i8,
    /// `(facet index, incidence)` sorted by facet index.
    facets: Vec<(usize, i8)>,
    /// `(coface index, incidence)` sorted by coface index.
    cofaces: Vec<(usize, i8)>,
}

impl Simplex {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Vertex tuple in stored orientation (sorted order, first two swapped
    /// when the orientation is odd).
    pub fn oriented_vertices(&self) -> Vec<Vertex> {
        let mut v = self.vertices.clone();
        if self.orientation < 0 && v.len() >= 2 {
            v.swap(0, 1);
        }
        v
    }

    pub fn facets(&self) -> &[(usize, i8)] {
        &self.facets
    }

    pub fn cofaces(&self) -> &[(usize, i8)] {
        &self.cofaces
    }
}

/// A descending chain of simplices from a top simplex, with the product of
/// incidence numbers along the chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    /// `chain[i]` is the index of a simplex of dimension `top_dim - i`.
    pub chain: Vec<usize>,
    pub sign: i8,
    pub top_dim: usize,
}

impl Flag {
    pub fn bottom_dim(&self) -> usize {
        self.top_dim + 1 - self.chain.len()
    }

    /// Simplex of dimension `d` in the chain.
    pub fn at_dim(&self, d: usize) -> usize {
        self.chain[self.top_dim - d]
    }

    pub fn ids(&self) -> impl Iterator<Item = SimplexId> + '_ {
        self.chain
            .iter()
            .enumerate()
            .map(move |(i, &s)| SimplexId::new(self.top_dim - i, s))
    }
}

/// Sign of the permutation sorting `tuple`, or `None` if a value repeats.
pub fn permutation_sign(tuple: &[usize]) -> Option<i8> {
    let mut v = tuple.to_vec();
    let mut sign = 1i8;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    Some(sign)
}

#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    dim: usize,
    simplices: Vec<Vec<Simplex>>,
    lookup: Vec<HashMap<Vec<Vertex>, usize>>,
    kind: ManifoldKind,
    /// Indices of (dim-1)-simplices with a single top coface.
    boundary_facets: Vec<usize>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.simplices == other.simplices
    }
}

impl SimplicialComplex {
    /// Builds a complex from oriented top simplices (orientation = listed order).
    pub fn build(
        top_simplices: &[Vec<Vertex>],
        request: ManifoldRequest,
    ) -> Result<Self, ComplexError> {
        let tops = top_simplices
            .iter()
            .map(|t| (t.clone(), 1))
            .collect::<Vec<_>>();
        Self::build_signed(&tops, request)
    }

    /// Like [`build`](Self::build) but each top simplex carries an extra sign,
    /// which is the only way to orient a 0-simplex.
    pub fn build_signed(
        top_simplices: &[(Vec<Vertex>, i8)],
        request: ManifoldRequest,
    ) -> Result<Self, ComplexError> {
        let mut listed: HashMap<Vec<Vertex>, i8> = HashMap::new();
        let mut dim = 0;
        for (tuple, extra) in top_simplices {
            let parity = permutation_sign(tuple)
                .filter(|_| !tuple.is_empty())
                .ok_or_else(|| ComplexError::RepeatedVertex(tuple.clone()))?;
            let mut sorted = tuple.clone();
            sorted.sort_unstable();
            dim = dim.max(sorted.len() - 1);
            if listed.insert(sorted.clone(), parity * extra.signum()).is_some() {
                return Err(ComplexError::DuplicateSimplex(sorted));
            }
        }
        if top_simplices.is_empty() {
            return Ok(Self::empty(0));
        }

        let mut by_dim: Vec<BTreeSet<Vec<Vertex>>> = vec![BTreeSet::new(); dim + 1];
        for sorted in listed.keys() {
            let n = sorted.len();
            for mask in 1u32..(1u32 << n) {
                let face: Vec<Vertex> = (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| sorted[i])
                    .collect();
                by_dim[face.len() - 1].insert(face);
            }
        }
        // A listed simplex that is a proper face of another listed one is a
        // duplicate declaration of the same cell.
        for sorted in listed.keys() {
            let d = sorted.len() - 1;
            if d < dim {
                let covered = by_dim[d + 1]
                    .iter()
                    .any(|s| listed.contains_key(s) && is_subset(sorted, s));
                if covered {
                    return Err(ComplexError::DuplicateSimplex(sorted.clone()));
                }
            }
        }

        let mut simplices: Vec<Vec<Simplex>> = Vec::with_capacity(dim + 1);
        let mut lookup: Vec<HashMap<Vec<Vertex>, usize>> = Vec::with_capacity(dim + 1);
        for set in &by_dim {
            let mut row = Vec::with_capacity(set.len());
            let mut map = HashMap::with_capacity(set.len());
            for (i, verts) in set.iter().enumerate() {
                map.insert(verts.clone(), i);
                row.push(Simplex {
                    vertices: verts.clone(),
                    orientation: listed.get(verts).copied().unwrap_or(1),
                    facets: Vec::new(),
                    cofaces: Vec::new(),
                });
            }
            simplices.push(row);
            lookup.push(map);
        }

        for d in 1..=dim {
            for i in 0..simplices[d].len() {
                let s = &simplices[d][i];
                let mut facets = Vec::with_capacity(d + 1);
                for omit in 0..=d {
                    let face: Vec<Vertex> = s
                        .vertices
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != omit)
                        .map(|(_, &v)| v)
                        .collect();
                    let fi = lookup[d - 1][&face];
                    let sign = if omit % 2 == 0 { 1 } else { -1 };
                    let inc = sign * s.orientation * simplices[d - 1][fi].orientation;
                    facets.push((fi, inc));
                }
                facets.sort_unstable();
                for &(fi, inc) in &facets {
                    simplices[d - 1][fi].cofaces.push((i, inc));
                }
                simplices[d][i].facets = facets;
            }
        }

        let mut complex = Self {
            dim,
            simplices,
            lookup,
            kind: ManifoldKind::None,
            boundary_facets: Vec::new(),
        };
        complex.classify();
        complex.check_request(request)?;
        Ok(complex)
    }

    /// The empty complex of the given nominal dimension.
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            simplices: vec![Vec::new(); dim + 1],
            lookup: vec![HashMap::new(); dim + 1],
            kind: ManifoldKind::ClosedOriented,
            boundary_facets: Vec::new(),
        }
    }

    fn classify(&mut self) {
        self.boundary_facets.clear();
        if self.dim == 0 {
            self.kind = ManifoldKind::ClosedOriented;
            return;
        }
        let pure = (0..self.dim).all(|d| self.simplices[d].iter().all(|s| !s.cofaces.is_empty()));
        if !pure {
            self.kind = ManifoldKind::None;
            return;
        }
        let mut ok = true;
        for (i, s) in self.simplices[self.dim - 1].iter().enumerate() {
            match s.cofaces.as_slice() {
                [_] => self.boundary_facets.push(i),
                [(_, a), (_, b)] if a + b == 0 => {}
                _ => ok = false,
            }
        }
        self.kind = if !ok {
            self.boundary_facets.clear();
            ManifoldKind::None
        } else if self.boundary_facets.is_empty() {
            ManifoldKind::ClosedOriented
        } else {
            ManifoldKind::WithBoundary
        };
    }

    fn check_request(&self, request: ManifoldRequest) -> Result<(), ComplexError> {
        match (request, self.kind) {
            (ManifoldRequest::None, _) => Ok(()),
            (ManifoldRequest::ClosedOriented, ManifoldKind::ClosedOriented) => Ok(()),
            (ManifoldRequest::WithBoundary, ManifoldKind::ClosedOriented)
            | (ManifoldRequest::WithBoundary, ManifoldKind::WithBoundary) => Ok(()),
            (ManifoldRequest::ClosedOriented, found) => Err(ComplexError::NotPseudomanifold {
                requested: "closed_oriented",
                reason: format!("found {}", found.as_str()),
            }),
            (ManifoldRequest::WithBoundary, found) => Err(ComplexError::NotPseudomanifold {
                requested: "with_boundary",
                reason: format!("found {}", found.as_str()),
            }),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> ManifoldKind {
        self.kind
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.iter().all(|row| row.is_empty())
    }

    pub fn count(&self, dim: usize) -> usize {
        self.simplices.get(dim).map_or(0, |row| row.len())
    }

    pub fn simplices(&self, dim: usize) -> &[Simplex] {
        self.simplices.get(dim).map_or(&[], |row| row.as_slice())
    }

    pub fn simplex(&self, id: SimplexId) -> Result<&Simplex, ComplexError> {
        self.simplices
            .get(id.dim)
            .and_then(|row| row.get(id.index))
            .ok_or(ComplexError::UnknownSimplex(id))
    }

    /// Looks up a simplex by any ordering of its vertices.
    pub fn find(&self, vertices: &[Vertex]) -> Option<SimplexId> {
        if vertices.is_empty() {
            return None;
        }
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        let d = sorted.len() - 1;
        self.lookup
            .get(d)
            .and_then(|m| m.get(&sorted))
            .map(|&i| SimplexId::new(d, i))
    }

    pub fn vertex_labels(&self) -> Vec<Vertex> {
        self.simplices(0).iter().map(|s| s.vertices[0]).collect()
    }

    /// Indices of the top-dimensional simplices.
    pub fn tops(&self) -> std::ops::Range<usize> {
        0..self.count(self.dim)
    }

    /// Simplices with no cofaces, in (dim, index) order.
    pub fn maximal_simplices(&self) -> Vec<SimplexId> {
        let mut out = Vec::new();
        for d in 0..=self.dim {
            for (i, s) in self.simplices[d].iter().enumerate() {
                if s.cofaces.is_empty() {
                    out.push(SimplexId::new(d, i));
                }
            }
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dim)
            .map(|d| {
                let n = self.count(d) as i64;
                if d % 2 == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }

    /// Signed incidence of `tau` in the boundary of `sigma`.
    pub fn incidence(&self, sigma: SimplexId, tau: SimplexId) -> Result<i8, ComplexError> {
        let s = self.simplex(sigma)?;
        self.simplex(tau)?;
        if tau.dim + 1 != sigma.dim {
            return Ok(0);
        }
        Ok(s
            .facets
            .iter()
            .find(|(f, _)| *f == tau.index)
            .map_or(0, |&(_, inc)| inc))
    }

    /// Incidence looked up by vertex tuples (orientation taken from the complex).
    pub fn incidence_by_vertices(&self, sigma: &[Vertex], tau: &[Vertex]) -> Result<i8, ComplexError> {
        let s = self
            .find(sigma)
            .ok_or_else(|| ComplexError::UnknownVertices(sigma.to_vec()))?;
        let t = self
            .find(tau)
            .ok_or_else(|| ComplexError::UnknownVertices(tau.to_vec()))?;
        self.incidence(s, t)
    }

    /// Flags running from each top simplex down to dimension `q`, in
    /// lexicographic order of simplex indices.
    pub fn flags(&self, q: usize) -> Result<Flags<'_>, ComplexError> {
        if q > self.dim {
            return Err(ComplexError::FlagDepth { q, dim: self.dim });
        }
        Ok(Flags {
            complex: self,
            q,
            chain: Vec::new(),
            signs: Vec::new(),
            cursors: Vec::new(),
            next_top: 0,
        })
    }

    pub fn boundary_facets(&self) -> &[usize] {
        &self.boundary_facets
    }

    /// Whether the simplex is a face of some boundary facet.
    pub fn is_boundary_simplex(&self, id: SimplexId) -> bool {
        if self.dim == 0 || id.dim >= self.dim {
            return false;
        }
        let Ok(s) = self.simplex(id) else {
            return false;
        };
        self.boundary_facets.iter().any(|&b| {
            let bv = &self.simplices[self.dim - 1][b].vertices;
            is_subset(&s.vertices, bv)
        })
    }

    /// Induced orientation sign of a boundary facet.
    pub fn boundary_sign(&self, facet: usize) -> Option<i8> {
        let s = &self.simplices[self.dim.checked_sub(1)?][facet];
        match s.cofaces.as_slice() {
            [(_, inc)] => Some(*inc),
            _ => None,
        }
    }

    /// Oriented top-simplex tuples and their extra signs (non-trivial only
    /// for 0-dimensional tops).
    pub fn oriented_tops(&self) -> Vec<(Vec<Vertex>, i8)> {
        self.simplices(self.dim)
            .iter()
            .map(|s| {
                if s.vertices.len() == 1 {
                    (s.vertices.clone(), s.orientation)
                } else {
                    (s.oriented_vertices(), 1)
                }
            })
            .collect()
    }

    fn request_for_kind(&self) -> ManifoldRequest {
        match self.kind {
            ManifoldKind::ClosedOriented => ManifoldRequest::ClosedOriented,
            ManifoldKind::WithBoundary => ManifoldRequest::WithBoundary,
            ManifoldKind::None => ManifoldRequest::None,
        }
    }

    /// Standard barycentric subdivision. The second component maps every
    /// simplex of the subdivision to its carrier: the smallest simplex of
    /// `self` containing it.
    pub fn barycentric_subdivide(&self) -> (SimplicialComplex, Vec<Vec<SimplexId>>) {
        if self.is_empty() {
            return (self.clone(), vec![Vec::new(); self.dim + 1]);
        }
        let mut offsets = Vec::with_capacity(self.dim + 1);
        let mut acc = 0;
        for d in 0..=self.dim {
            offsets.push(acc);
            acc += self.count(d);
        }
        let label = |id: SimplexId| offsets[id.dim] + id.index;

        let mut tops = Vec::new();
        for top in self.maximal_simplices() {
            let sub = self.sub_flags(top);
            for (chain, sign) in sub {
                // chain runs from `top` down to a vertex
                let mut tuple: Vec<Vertex> = chain.iter().map(|&id| label(id)).collect();
                let mut extra = 1;
                if sign < 0 {
                    if tuple.len() >= 2 {
                        tuple.swap(0, 1);
                    } else {
                        extra = -1;
                    }
                }
                let orient = if tuple.len() == 1 { self.simplex(top).map(|s| s.orientation).unwrap_or(1) } else { 1 };
                tops.push((tuple, extra * orient));
            }
        }
        let sub = SimplicialComplex::build_signed(&tops, self.request_for_kind())
            .expect("barycentric subdivision of a valid complex is valid");

        let mut parent_of_label = vec![SimplexId::new(0, 0); acc];
        for d in 0..=self.dim {
            for i in 0..self.count(d) {
                let id = SimplexId::new(d, i);
                parent_of_label[label(id)] = id;
            }
        }
        let carriers = (0..=sub.dim)
            .map(|d| {
                sub.simplices(d)
                    .iter()
                    .map(|s| {
                        s.vertices
                            .iter()
                            .map(|&v| parent_of_label[v])
                            .max_by_key(|id| id.dim)
                            .expect("nonempty simplex")
                    })
                    .collect()
            })
            .collect();
        (sub, carriers)
    }

    /// Full flags below an arbitrary simplex (down to vertices), with signs.
    fn sub_flags(&self, start: SimplexId) -> Vec<(Vec<SimplexId>, i8)> {
        let mut out = Vec::new();
        let mut stack = vec![(vec![start], 1i8)];
        while let Some((chain, sign)) = stack.pop() {
            let last = *chain.last().unwrap();
            if last.dim == 0 {
                out.push((chain, sign));
                continue;
            }
            let facets = &self.simplices[last.dim][last.index].facets;
            for &(f, inc) in facets.iter().rev() {
                let mut next = chain.clone();
                next.push(SimplexId::new(last.dim - 1, f));
                stack.push((next, sign * inc));
            }
        }
        out
    }

    /// The boundary subcomplex with induced orientation. Closed complexes
    /// yield the empty complex.
    pub fn boundary_restrict(&self) -> SimplicialComplex {
        if self.dim == 0 || self.boundary_facets.is_empty() {
            return SimplicialComplex::empty(self.dim.saturating_sub(1));
        }
        let tops: Vec<(Vec<Vertex>, i8)> = self
            .boundary_facets
            .iter()
            .map(|&b| {
                let s = &self.simplices[self.dim - 1][b];
                let sign = s.cofaces[0].1;
                let mut tuple = s.oriented_vertices();
                if tuple.len() == 1 {
                    return (tuple, sign * s.orientation);
                }
                if sign < 0 {
                    tuple.swap(0, 1);
                }
                (tuple, 1)
            })
            .collect();
        SimplicialComplex::build_signed(&tops, ManifoldRequest::None)
            .expect("boundary of a pseudomanifold is a valid complex")
    }

    /// Same complex with every top simplex's orientation reversed.
    pub fn reversed(&self) -> SimplicialComplex {
        let tops: Vec<(Vec<Vertex>, i8)> = self
            .oriented_tops()
            .into_iter()
            .map(|(mut t, s)| {
                if t.len() >= 2 {
                    t.swap(0, 1);
                    (t, s)
                } else {
                    (t, -s)
                }
            })
            .collect();
        SimplicialComplex::build_signed(&tops, self.request_for_kind()).expect("reversal keeps validity")
    }

    /// Image of the complex under an injective vertex relabelling.
    pub fn relabel(&self, map: &BTreeMap<Vertex, Vertex>) -> Result<SimplicialComplex, ComplexError> {
        let tops: Vec<(Vec<Vertex>, i8)> = self
            .oriented_tops()
            .into_iter()
            .map(|(t, s)| (t.iter().map(|v| *map.get(v).unwrap_or(v)).collect(), s))
            .collect();
        SimplicialComplex::build_signed(&tops, ManifoldRequest::None)
    }

    /// Disjoint union; `other`'s vertices are shifted past this complex's
    /// largest label. Returns the union and the shift applied.
    pub fn disjoint_union(&self, other: &SimplicialComplex) -> Result<(SimplicialComplex, Vertex), ComplexError> {
        if self.dim != other.dim && !self.is_empty() && !other.is_empty() {
            return Err(ComplexError::DimensionMismatch(self.dim, other.dim));
        }
        let shift = self.vertex_labels().into_iter().max().map_or(0, |m| m + 1);
        let mut tops = self.oriented_tops();
        tops.extend(
            other
                .oriented_tops()
                .into_iter()
                .map(|(t, s)| (t.iter().map(|v| v + shift).collect(), s)),
        );
        Ok((SimplicialComplex::build_signed(&tops, ManifoldRequest::None)?, shift))
    }

    /// Identifies boundary components of `self` and `other` through
    /// `matching` (vertex of `other` -> vertex of `self`). Matched boundary
    /// facets must appear with opposite induced orientations. Returns the
    /// glued complex and the relabelling applied to `other`.
    pub fn glue_along_boundary(
        &self,
        other: &SimplicialComplex,
        matching: &BTreeMap<Vertex, Vertex>,
    ) -> Result<(SimplicialComplex, BTreeMap<Vertex, Vertex>), ComplexError> {
        if self.dim != other.dim {
            return Err(ComplexError::DimensionMismatch(self.dim, other.dim));
        }
        if self.dim == 0 {
            return Err(ComplexError::Gluing("cannot glue 0-dimensional complexes".into()));
        }
        let image: BTreeSet<Vertex> = matching.values().copied().collect();
        if image.len() != matching.len() {
            return Err(ComplexError::Gluing("vertex matching is not injective".into()));
        }
        let bd_self = self.boundary_vertex_set();
        let bd_other = other.boundary_vertex_set();
        for (a, b) in matching {
            if !bd_other.contains(a) {
                return Err(ComplexError::Gluing(format!("vertex {a} is not on the boundary of the second complex")));
            }
            if !bd_self.contains(b) {
                return Err(ComplexError::Gluing(format!("vertex {b} is not on the boundary of the first complex")));
            }
        }

        // Oriented boundary facets of `self`, keyed by sorted vertex set.
        let mut self_facets: BTreeMap<Vec<Vertex>, i8> = BTreeMap::new();
        for &b in &self.boundary_facets {
            let s = &self.simplices[self.dim - 1][b];
            self_facets.insert(s.vertices.clone(), s.cofaces[0].1 * s.orientation);
        }
        let mut hit = BTreeSet::new();
        for &b in &other.boundary_facets {
            let s = &other.simplices[other.dim - 1][b];
            if !s.vertices.iter().all(|v| matching.contains_key(v)) {
                continue;
            }
            let induced = s.oriented_vertices();
            let mapped: Vec<Vertex> = induced.iter().map(|v| matching[v]).collect();
            let mut sorted = mapped.clone();
            sorted.sort_unstable();
            let Some(&target) = self_facets.get(&sorted) else {
                return Err(ComplexError::Gluing(format!(
                    "boundary facet {:?} has no counterpart {:?}",
                    s.vertices, sorted
                )));
            };
            let mapped_sign = permutation_sign(&mapped).unwrap() * s.cofaces[0].1;
            // `target` is the orientation sign of self's induced facet relative to sorted order.
            if mapped_sign * target != -1 {
                return Err(ComplexError::Gluing(format!(
                    "orientation mismatch on boundary facet {sorted:?}"
                )));
            }
            hit.insert(sorted);
        }
        for sorted in self_facets.keys() {
            if sorted.iter().all(|v| image.contains(v)) && !hit.contains(sorted) {
                return Err(ComplexError::Gluing(format!(
                    "boundary facet {sorted:?} of the first complex is not matched"
                )));
            }
        }

        let used: BTreeSet<Vertex> = self.vertex_labels().into_iter().collect();
        let mut next_fresh = used
            .iter()
            .chain(other.vertex_labels().iter())
            .max()
            .map_or(0, |m| m + 1);
        let mut relabel = BTreeMap::new();
        for v in other.vertex_labels() {
            let target = if let Some(&m) = matching.get(&v) {
                m
            } else if !used.contains(&v) && !image.contains(&v) {
                v
            } else {
                let f = next_fresh;
                next_fresh += 1;
                f
            };
            relabel.insert(v, target);
        }
        let mut tops = self.oriented_tops();
        tops.extend(
            other
                .oriented_tops()
                .into_iter()
                .map(|(t, s)| (t.iter().map(|v| relabel[v]).collect(), s)),
        );
        let glued = SimplicialComplex::build_signed(&tops, ManifoldRequest::None)?;
        Ok((glued, relabel))
    }

    fn boundary_vertex_set(&self) -> BTreeSet<Vertex> {
        self.boundary_facets
            .iter()
            .flat_map(|&b| self.simplices[self.dim - 1][b].vertices.iter().copied())
            .collect()
    }

    pub fn to_file(&self) -> ComplexFile {
        let mut flags = Vec::new();
        if self.kind != ManifoldKind::None {
            flags.push(self.kind.as_str().to_string());
        }
        ComplexFile {
            dim: self.dim,
            top_simplices: self.oriented_tops().into_iter().map(|(t, _)| t).collect(),
            flags,
        }
    }

    /// Builds from a parsed file. The second component maps each position
    /// in the file's `top_simplices` to the canonical top index.
    pub fn from_file(file: &ComplexFile) -> Result<(Self, Vec<usize>), ComplexError> {
        let request = if file.flags.iter().any(|f| f == "closed_oriented") {
            ManifoldRequest::ClosedOriented
        } else if file.flags.iter().any(|f| f == "with_boundary") {
            ManifoldRequest::WithBoundary
        } else {
            ManifoldRequest::None
        };
        let complex = Self::build(&file.top_simplices, request)?;
        if !complex.is_empty() && complex.dim != file.dim {
            return Err(ComplexError::DimensionMismatch(file.dim, complex.dim));
        }
        let positions = file
            .top_simplices
            .iter()
            .map(|t| complex.find(t).map(|id| id.index).ok_or_else(|| ComplexError::UnknownVertices(t.clone())))
            .collect::<Result<_, _>>()?;
        Ok((complex, positions))
    }
}

/// Serialized form of a complex: only top simplices are stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub dim: usize,
    pub top_simplices: Vec<Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

pub struct Flags<'a> {
    complex: &'a SimplicialComplex,
    q: usize,
    chain: Vec<usize>,
    signs: Vec<i8>,
    cursors: Vec<usize>,
    next_top: usize,
}

impl Flags<'_> {
    fn current(&self) -> Flag {
        Flag {
            chain: self.chain.clone(),
            sign: *self.signs.last().unwrap(),
            top_dim: self.complex.dim,
        }
    }

    fn pop(&mut self) {
        self.chain.pop();
        self.signs.pop();
        self.cursors.pop();
    }
}

impl Iterator for Flags<'_> {
    type Item = Flag;

    fn next(&mut self) -> Option<Flag> {
        let top_dim = self.complex.dim;
        loop {
            if self.chain.is_empty() {
                if self.next_top >= self.complex.count(top_dim) {
                    return None;
                }
                self.chain.push(self.next_top);
                self.signs.push(1);
                self.cursors.push(0);
                self.next_top += 1;
                if top_dim == self.q {
                    let f = self.current();
                    self.pop();
                    return Some(f);
                }
                continue;
            }
            let depth = self.chain.len() - 1;
            let d = top_dim - depth;
            let s = &self.complex.simplices[d][self.chain[depth]];
            let c = self.cursors[depth];
            if c >= s.facets.len() {
                self.pop();
                continue;
            }
            self.cursors[depth] += 1;
            let (f, inc) = s.facets[c];
            let sign = self.signs[depth] * inc;
            self.chain.push(f);
            self.signs.push(sign);
            self.cursors.push(0);
            if d - 1 == self.q {
                let flag = self.current();
                self.pop();
                return Some(flag);
            }
        }
    }
}

fn is_subset(small: &[Vertex], big: &[Vertex]) -> bool {
    small.iter().all(|v| big.binary_search(v).is_ok())
}
