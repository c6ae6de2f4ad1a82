//! Combinatorial covers subordinate to a triangulation, and index maps.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexError, SimplexId, SimplicialComplex};

#[derive(Debug, Error, PartialEq)]
pub enum CoverError {
    #[error("cover needs at least one set")]
    NoSets,
    #[error("simplex {0} has no admissible cover index")]
    NotSubordinate(SimplexId),
    #[error("cover index {index} out of range for {num_sets} sets")]
    IndexOutOfRange { index: usize, num_sets: usize },
    #[error("admissible set of {face} does not contain that of its coface {coface}")]
    NotMonotone { face: SimplexId, coface: SimplexId },
    #[error("index {index} is not admissible on simplex {simplex}")]
    Inadmissible { simplex: SimplexId, index: usize },
    #[error("top simplex {0} is missing from the cover file")]
    MissingTop(usize),
    #[error("bad simplex key {0:?}")]
    BadKey(String),
    #[error("index map does not match the complex: {0}")]
    Shape(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoveredComplex {
    complex: SimplicialComplex,
    num_sets: usize,
    /// `admissible[dim][index]`, sorted.
    admissible: Vec<Vec<Vec<usize>>>,
}

impl CoveredComplex {
    /// Lower admissible sets are unions over containing top simplices.
    pub fn attach(
        complex: SimplicialComplex,
        num_sets: usize,
        admissible_on_top: &[Vec<usize>],
    ) -> Result<Self, CoverError> {
        if num_sets == 0 {
            return Err(CoverError::NoSets);
        }
        let dim = complex.dim();
        if admissible_on_top.len() != complex.count(dim) {
            return Err(CoverError::MissingTop(admissible_on_top.len().min(complex.count(dim))));
        }
        let mut sets: Vec<Vec<BTreeSet<usize>>> =
            (0..=dim).map(|d| vec![BTreeSet::new(); complex.count(d)]).collect();
        for (i, adm) in admissible_on_top.iter().enumerate() {
            for &a in adm {
                if a >= num_sets {
                    return Err(CoverError::IndexOutOfRange { index: a, num_sets });
                }
            }
            sets[dim][i].extend(adm.iter().copied());
        }
        // Lower-dimensional maximal simplices (non-pure complexes) fall back
        // to whatever their cofaces give; push down dimension by dimension.
        for d in (1..=dim).rev() {
            for i in 0..complex.count(d) {
                let current = sets[d][i].clone();
                for &(f, _) in complex.simplices(d)[i].facets() {
                    sets[d - 1][f].extend(current.iter().copied());
                }
            }
        }
        let admissible = sets
            .into_iter()
            .map(|row| row.into_iter().map(|s| s.into_iter().collect()).collect())
            .collect();
        Self::from_parts(complex, num_sets, admissible)
    }

    /// Takes admissible sets for every simplex and validates them.
    pub fn from_parts(
        complex: SimplicialComplex,
        num_sets: usize,
        admissible: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self, CoverError> {
        if num_sets == 0 {
            return Err(CoverError::NoSets);
        }
        let c = Self { complex, num_sets, admissible };
        c.check()?;
        Ok(c)
    }

    fn check(&self) -> Result<(), CoverError> {
        let k = &self.complex;
        if self.admissible.len() != k.dim() + 1 {
            return Err(CoverError::Shape("dimension count".into()));
        }
        for d in 0..=k.dim() {
            if self.admissible[d].len() != k.count(d) {
                return Err(CoverError::Shape(format!("simplex count in dimension {d}")));
            }
            for (i, adm) in self.admissible[d].iter().enumerate() {
                let id = SimplexId::new(d, i);
                if adm.is_empty() {
                    return Err(CoverError::NotSubordinate(id));
                }
                if let Some(&a) = adm.iter().find(|&&a| a >= self.num_sets) {
                    return Err(CoverError::IndexOutOfRange { index: a, num_sets: self.num_sets });
                }
                if d > 0 {
                    for &(f, _) in k.simplices(d)[i].facets() {
                        let face = &self.admissible[d - 1][f];
                        if !adm.iter().all(|a| face.binary_search(a).is_ok()) {
                            return Err(CoverError::NotMonotone {
                                face: SimplexId::new(d - 1, f),
                                coface: id,
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn num_sets(&self) -> usize {
        self.num_sets
    }

    pub fn admissible(&self, id: SimplexId) -> &[usize] {
        &self.admissible[id.dim][id.index]
    }

    pub fn is_admissible(&self, id: SimplexId, index: usize) -> bool {
        self.admissible
            .get(id.dim)
            .and_then(|row| row.get(id.index))
            .is_some_and(|adm| adm.binary_search(&index).is_ok())
    }

    pub fn all_ids(&self) -> impl Iterator<Item = SimplexId> + '_ {
        (0..=self.complex.dim()).flat_map(move |d| (0..self.complex.count(d)).map(move |i| SimplexId::new(d, i)))
    }

    /// Restriction to a complex whose simplices all occur in this one (by
    /// vertex set). Admissible sets are inherited; the map sends each
    /// simplex of `sub` to its counterpart here.
    pub fn restrict_to(&self, sub: SimplicialComplex) -> Result<(CoveredComplex, Vec<Vec<SimplexId>>), CoverError> {
        let mut parent = Vec::with_capacity(sub.dim() + 1);
        let mut admissible = Vec::with_capacity(sub.dim() + 1);
        for d in 0..=sub.dim() {
            let mut prow = Vec::with_capacity(sub.count(d));
            let mut arow = Vec::with_capacity(sub.count(d));
            for s in sub.simplices(d) {
                let id = self
                    .complex
                    .find(s.vertices())
                    .ok_or_else(|| ComplexError::UnknownVertices(s.vertices().to_vec()))?;
                prow.push(id);
                arow.push(self.admissible(id).to_vec());
            }
            parent.push(prow);
            admissible.push(arow);
        }
        Ok((CoveredComplex::from_parts(sub, self.num_sets, admissible)?, parent))
    }

    /// Admissibility pulled back through a vertex relabelling
    /// (`map`: vertex of `target` → vertex of `self.complex`).
    pub fn pull_back_to(
        &self,
        target: SimplicialComplex,
        map: &BTreeMap<usize, usize>,
    ) -> Result<(CoveredComplex, Vec<Vec<SimplexId>>), CoverError> {
        let mut parent = Vec::new();
        let mut admissible = Vec::new();
        for d in 0..=target.dim() {
            let mut prow = Vec::new();
            let mut arow = Vec::new();
            for s in target.simplices(d) {
                let image: Vec<usize> = s.vertices().iter().map(|v| *map.get(v).unwrap_or(v)).collect();
                let id = self
                    .complex
                    .find(&image)
                    .ok_or(ComplexError::UnknownVertices(image))?;
                prow.push(id);
                arow.push(self.admissible(id).to_vec());
            }
            parent.push(prow);
            admissible.push(arow);
        }
        Ok((CoveredComplex::from_parts(target, self.num_sets, admissible)?, parent))
    }

    /// Cover of the barycentric subdivision; each child inherits the
    /// admissible set of its carrier.
    pub fn subdivide(&self) -> (CoveredComplex, Vec<Vec<SimplexId>>) {
        let (sub, carriers) = self.complex.barycentric_subdivide();
        let admissible = carriers
            .iter()
            .map(|row| row.iter().map(|&c| self.admissible(c).to_vec()).collect())
            .collect();
        let covered = CoveredComplex::from_parts(sub, self.num_sets, admissible)
            .expect("carrier admissibility is monotone");
        (covered, carriers)
    }

    pub fn default_index_map(&self) -> IndexMap {
        IndexMap {
            values: self
                .admissible
                .iter()
                .map(|row| row.iter().map(|adm| adm[0]).collect())
                .collect(),
        }
    }

    /// Uniform independent choice per simplex, reproducible from `seed`.
    /// Simplices in `frozen` take the given value instead.
    pub fn random_index_map(
        &self,
        seed: u64,
        frozen: &BTreeMap<SimplexId, usize>,
    ) -> Result<IndexMap, CoverError> {
        for (&id, &v) in frozen {
            if !self.is_admissible(id, v) {
                return Err(CoverError::Inadmissible { simplex: id, index: v });
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = self
            .admissible
            .iter()
            .enumerate()
            .map(|(d, row)| {
                row.iter()
                    .enumerate()
                    .map(|(i, adm)| {
                        // draw even when frozen so the stream does not depend on `frozen`
                        let pick = *adm.choose(&mut rng).expect("nonempty admissible set");
                        frozen.get(&SimplexId::new(d, i)).copied().unwrap_or(pick)
                    })
                    .collect()
            })
            .collect();
        Ok(IndexMap { values })
    }

    /// Boundary subcomplex with inherited admissibility and restricted ρ.
    pub fn restrict_to_boundary(&self, rho: &IndexMap) -> Result<(CoveredComplex, IndexMap), CoverError> {
        let boundary = self.complex.boundary_restrict();
        let (covered, parent) = self.restrict_to(boundary)?;
        let map = rho.pull(&parent);
        Ok((covered, map))
    }

    /// Boundary simplices as a frozen set carrying ρ's values.
    pub fn boundary_frozen(&self, rho: &IndexMap) -> BTreeMap<SimplexId, usize> {
        self.all_ids()
            .filter(|&id| self.complex.is_boundary_simplex(id))
            .map(|id| (id, rho.get(id)))
            .collect()
    }

    pub fn to_file(&self) -> CoverFile {
        let d = self.complex.dim();
        CoverFile {
            num_sets: self.num_sets,
            admissible_top: self.admissible[d]
                .iter()
                .enumerate()
                .map(|(i, a)| (i.to_string(), a.clone()))
                .collect(),
        }
    }

    /// `positions` maps file positions of top simplices to canonical
    /// indices, as returned by [`SimplicialComplex::from_file`].
    pub fn from_file(
        complex: SimplicialComplex,
        positions: &[usize],
        file: &CoverFile,
    ) -> Result<Self, CoverError> {
        let n = complex.count(complex.dim());
        let mut tops = vec![Vec::new(); n];
        for (key, adm) in &file.admissible_top {
            let pos: usize = key.parse().map_err(|_| CoverError::BadKey(key.clone()))?;
            let idx = *positions.get(pos).ok_or_else(|| CoverError::BadKey(key.clone()))?;
            let mut adm = adm.clone();
            adm.sort_unstable();
            adm.dedup();
            tops[idx] = adm;
        }
        if let Some(i) = tops.iter().position(|t| t.is_empty()) {
            return Err(CoverError::MissingTop(i));
        }
        Self::attach(complex, file.num_sets, &tops)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverFile {
    pub num_sets: usize,
    pub admissible_top: BTreeMap<String, Vec<usize>>,
}

/// ρ: one admissible cover index per simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexMap {
    values: Vec<Vec<usize>>,
}

impl IndexMap {
    pub fn get(&self, id: SimplexId) -> usize {
        self.values[id.dim][id.index]
    }

    pub fn set(&mut self, id: SimplexId, value: usize) {
        self.values[id.dim][id.index] = value;
    }

    /// Composes with a simplex map (`parent[dim][i]` = image of simplex i).
    pub fn pull(&self, parent: &[Vec<SimplexId>]) -> IndexMap {
        IndexMap {
            values: parent
                .iter()
                .map(|row| row.iter().map(|&p| self.get(p)).collect())
                .collect(),
        }
    }

    pub fn validate(&self, cover: &CoveredComplex) -> Result<(), CoverError> {
        let k = cover.complex();
        if self.values.len() != k.dim() + 1 {
            return Err(CoverError::Shape("dimension count".into()));
        }
        for d in 0..=k.dim() {
            if self.values[d].len() != k.count(d) {
                return Err(CoverError::Shape(format!("simplex count in dimension {d}")));
            }
            for (i, &v) in self.values[d].iter().enumerate() {
                let id = SimplexId::new(d, i);
                if !cover.is_admissible(id, v) {
                    return Err(CoverError::Inadmissible { simplex: id, index: v });
                }
            }
        }
        Ok(())
    }

    pub fn to_file(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for (d, row) in self.values.iter().enumerate() {
            for (i, &v) in row.iter().enumerate() {
                out.insert(format!("{d}/{i}"), v);
            }
        }
        out
    }

    /// Reads `"dim/index" → cover index`; every simplex must be present.
    pub fn from_file(cover: &CoveredComplex, file: &BTreeMap<String, usize>) -> Result<Self, CoverError> {
        let k = cover.complex();
        let mut values: Vec<Vec<Option<usize>>> = (0..=k.dim()).map(|d| vec![None; k.count(d)]).collect();
        for (key, &v) in file {
            let (d, i) = key
                .split_once('/')
                .and_then(|(d, i)| Some((d.parse::<usize>().ok()?, i.parse::<usize>().ok()?)))
                .ok_or_else(|| CoverError::BadKey(key.clone()))?;
            let slot = values
                .get_mut(d)
                .and_then(|row| row.get_mut(i))
                .ok_or_else(|| CoverError::BadKey(key.clone()))?;
            *slot = Some(v);
        }
        let mut out = Vec::with_capacity(values.len());
        for (d, row) in values.into_iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (i, v) in row.into_iter().enumerate() {
                r.push(v.ok_or_else(|| CoverError::BadKey(format!("{d}/{i} missing")))?);
            }
            out.push(r);
        }
        let map = IndexMap { values: out };
        map.validate(cover)?;
        Ok(map)
    }
}
