//! Discrete Deligne cochains: Čech-indexed values on simplices.
//!
//! Component `k` of a degree-`p` cochain assigns a value to each pair of a
//! `k`-simplex and an admissible strictly increasing multi-index of length
//! `p − k + 1`. `C^0` holds logarithm lifts of transition functions, `C^k`
//! for `k ≥ 1` holds integrals of the local `k`-forms over the oriented
//! simplex. The cocycle relations are
//!
//! ```text
//! δC^0 ∈ 2πℤ,    δC^k = (−1)^(p−k) · d C^(k−1)   (k = 1..p)
//! ```
//!
//! where `d` is the signed facet sum.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::complex::{permutation_sign, SimplexId};
use crate::cover::CoveredComplex;
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum CochainError {
    #[error("component {k} does not exist for degree {degree}")]
    BadComponent { k: usize, degree: usize },
    #[error("entry for component {k} sits on a simplex of dimension {dim}")]
    DimensionMismatch { k: usize, dim: usize },
    #[error("multi-index {indices:?} has length {len}, expected {expected}")]
    IndexLength { indices: Vec<usize>, len: usize, expected: usize },
    #[error("multi-index {indices:?} repeats an index")]
    RepeatedIndex { indices: Vec<usize> },
    #[error("multi-index {indices:?} is not admissible on simplex {simplex}")]
    Inadmissible { simplex: SimplexId, indices: Vec<usize> },
    #[error("simplex {0} does not exist")]
    UnknownSimplex(SimplexId),
    #[error("conflicting entries for component {k}, simplex {simplex}, indices {indices:?}")]
    Conflict { k: usize, simplex: SimplexId, indices: Vec<usize> },
    #[error("cochains live on different bases")]
    BaseMismatch,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("integrality violated at vertex {vertex}, indices {indices:?}: distance {residual:e} from 2πℤ")]
    Integrality { vertex: usize, indices: Vec<usize>, residual: f64 },
    #[error("integer cochain is not closed at vertex {vertex}, indices {indices:?}")]
    NotClosed { vertex: usize, indices: Vec<usize> },
    #[error("pullback target simplex {0:?} has no image")]
    NoImage(Vec<usize>),
    #[error("gluing: {0}")]
    Glue(String),
}

/// One stored value, as read from or written to a cochain file.
#[derive(Clone, Debug, PartialEq)]
pub struct Entry<S> {
    pub k: usize,
    pub indices: Vec<usize>,
    pub simplex: SimplexId,
    pub value: S,
}

#[derive(Clone, Debug)]
pub struct DeligneCochain<S: Scalar> {
    degree: usize,
    base: Arc<CoveredComplex>,
    /// `values[k][simplex index]`, keyed by sorted multi-index. Absent = 0.
    values: Vec<Vec<BTreeMap<Vec<usize>, S>>>,
    cocycle: bool,
}

impl<S: Scalar> PartialEq for DeligneCochain<S> {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && same_base(&self.base, &other.base) && self.values == other.values
    }
}

fn same_base(a: &Arc<CoveredComplex>, b: &Arc<CoveredComplex>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Strictly increasing multi-indices of length `len` drawn from `from`.
pub fn combinations(from: &[usize], len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(from: &[usize], len: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..from.len() {
            if from.len() - i < len - cur.len() {
                break;
            }
            cur.push(from[i]);
            rec(from, len, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(from, len, 0, &mut cur, &mut out);
    out
}

fn omit(word: &[usize], j: usize) -> Vec<usize> {
    word.iter()
        .enumerate()
        .filter(|&(i, _)| i != j)
        .map(|(_, &v)| v)
        .collect()
}

fn alt_sign(j: usize) -> i64 {
    if j.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

impl<S: Scalar> DeligneCochain<S> {
    pub fn zero(base: Arc<CoveredComplex>, degree: usize) -> Self {
        let top = degree.min(base.complex().dim());
        let values = (0..=top)
            .map(|k| vec![BTreeMap::new(); base.complex().count(k)])
            .collect();
        Self { degree, base, values, cocycle: true }
    }

    /// Builds from entries. Unsorted multi-indices are sorted with the
    /// permutation sign absorbed into the value; repeated indices are
    /// rejected; identical duplicates are accepted, differing ones are not.
    pub fn from_entries(base: Arc<CoveredComplex>, degree: usize, entries: &[Entry<S>]) -> Result<Self, CochainError> {
        let mut c = Self::zero(base, degree);
        c.cocycle = false;
        for e in entries {
            let (sorted, value) = c.canonical_entry(e)?;
            let slot = &mut c.values[e.k][e.simplex.index];
            match slot.get(&sorted) {
                Some(old) if *old != value => {
                    return Err(CochainError::Conflict { k: e.k, simplex: e.simplex, indices: sorted })
                }
                _ => {
                    if value.is_zero() {
                        slot.remove(&sorted);
                    } else {
                        slot.insert(sorted, value);
                    }
                }
            }
        }
        Ok(c)
    }

    fn canonical_entry(&self, e: &Entry<S>) -> Result<(Vec<usize>, S), CochainError> {
        if e.k > self.degree || e.k >= self.values.len() {
            return Err(CochainError::BadComponent { k: e.k, degree: self.degree });
        }
        if e.simplex.dim != e.k {
            return Err(CochainError::DimensionMismatch { k: e.k, dim: e.simplex.dim });
        }
        if e.simplex.index >= self.base.complex().count(e.k) {
            return Err(CochainError::UnknownSimplex(e.simplex));
        }
        let expected = self.degree - e.k + 1;
        if e.indices.len() != expected {
            return Err(CochainError::IndexLength { indices: e.indices.clone(), len: e.indices.len(), expected });
        }
        let sign = permutation_sign(&e.indices).ok_or_else(|| CochainError::RepeatedIndex { indices: e.indices.clone() })?;
        let mut sorted = e.indices.clone();
        sorted.sort_unstable();
        if !sorted.iter().all(|&a| self.base.is_admissible(e.simplex, a)) {
            return Err(CochainError::Inadmissible { simplex: e.simplex, indices: e.indices.clone() });
        }
        let value = if sign < 0 { -e.value.clone() } else { e.value.clone() };
        Ok((sorted, value))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> &Arc<CoveredComplex> {
        &self.base
    }

    /// Highest component actually carried (limited by the complex dimension).
    pub fn top_component(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_cocycle(&self) -> bool {
        self.cocycle
    }

    /// Validates and flags as a cocycle, or returns the failing report.
    pub fn into_cocycle(mut self, tol: f64) -> Result<Self, Box<CocycleReport>> {
        let report = self.validate_cocycle(tol);
        if report.passed() {
            self.cocycle = true;
            Ok(self)
        } else {
            Err(Box::new(report))
        }
    }

    /// Flags without checking; for data that is a cocycle by construction.
    pub fn assume_cocycle(mut self) -> Self {
        self.cocycle = true;
        self
    }

    /// Stored value at a sorted multi-index (0 when absent).
    pub fn get(&self, k: usize, simplex: usize, sorted: &[usize]) -> S {
        self.values
            .get(k)
            .and_then(|row| row.get(simplex))
            .and_then(|m| m.get(sorted))
            .cloned()
            .unwrap_or_else(S::zero)
    }

    /// Value at an arbitrary word: sign of the sorting permutation, 0 on
    /// repeated indices.
    pub fn eval(&self, k: usize, simplex: usize, word: &[usize]) -> S {
        match permutation_sign(word) {
            None => S::zero(),
            Some(sign) => {
                let mut sorted = word.to_vec();
                sorted.sort_unstable();
                let v = self.get(k, simplex, &sorted);
                if sign < 0 {
                    -v
                } else {
                    v
                }
            }
        }
    }

    /// Overwrites one value (indices must be sorted and admissible).
    pub fn set(&mut self, k: usize, simplex: usize, sorted: Vec<usize>, value: S) {
        self.cocycle = false;
        let slot = &mut self.values[k][simplex];
        if value.is_zero() {
            slot.remove(&sorted);
        } else {
            slot.insert(sorted, value);
        }
    }

    /// Nonzero entries in canonical order (k, simplex, indices).
    pub fn entries(&self) -> Vec<Entry<S>> {
        let mut out = Vec::new();
        for (k, row) in self.values.iter().enumerate() {
            for (i, m) in row.iter().enumerate() {
                for (idx, v) in m {
                    out.push(Entry { k, indices: idx.clone(), simplex: SimplexId::new(k, i), value: v.clone() });
                }
            }
        }
        out
    }

    /// Admissible sorted multi-indices of the given length on a simplex.
    pub fn multi_indices(&self, simplex: SimplexId, len: usize) -> Vec<Vec<usize>> {
        combinations(self.base.admissible(simplex), len)
    }

    /// `(δC^k)(σ, J) = Σ_j (−1)^j C^k(σ, J \ j)`.
    pub fn cech_delta(&self, k: usize, simplex: usize, word: &[usize]) -> S {
        let mut acc = S::zero();
        for j in 0..word.len() {
            let term = self.eval(k, simplex, &omit(word, j));
            acc = if alt_sign(j) > 0 { acc + term } else { acc - term };
        }
        acc
    }

    /// `Σ_τ incidence(σ, τ) · C^k(τ, I)` for a `(k+1)`-simplex σ.
    pub fn discrete_d(&self, k: usize, sigma: usize, word: &[usize]) -> S {
        let s = &self.base.complex().simplices(k + 1)[sigma];
        let mut acc = S::zero();
        for &(f, inc) in s.facets() {
            let term = self.eval(k, f, word);
            acc = if inc > 0 { acc + term } else { acc - term };
        }
        acc
    }

    pub fn validate_cocycle(&self, tol: f64) -> CocycleReport {
        let p = self.degree;
        let complex = self.base.complex();
        let mut report = CocycleReport {
            tolerance: tol,
            integrality_residual: 0.0,
            level_residuals: vec![0.0; self.top_component()],
            failures: Vec::new(),
            witnesses: Vec::new(),
        };
        for v in 0..complex.count(0) {
            let id = SimplexId::new(0, v);
            for word in self.multi_indices(id, p + 2) {
                let delta = self.cech_delta(0, v, &word);
                let (n, residual) = delta.split_turns();
                let r = residual.magnitude();
                report.integrality_residual = report.integrality_residual.max(r);
                if !residual.within(tol) {
                    report.failures.push(Failure { condition: "integrality".into(), simplex: id, indices: word.clone(), residual: r });
                }
                if n != 0 {
                    report.witnesses.push(Witness { vertex: v, indices: word, turns: n });
                }
            }
        }
        for k in 1..=self.top_component() {
            let sign = if (p - k).is_multiple_of(2) { 1 } else { -1 };
            for s in 0..complex.count(k) {
                let id = SimplexId::new(k, s);
                for word in self.multi_indices(id, p - k + 2) {
                    let lhs = self.cech_delta(k, s, &word);
                    let d = self.discrete_d(k - 1, s, &word);
                    let residual = if sign > 0 { lhs - d } else { lhs + d };
                    let r = residual.magnitude();
                    report.level_residuals[k - 1] = report.level_residuals[k - 1].max(r);
                    if !residual.within(tol) {
                        report.failures.push(Failure { condition: format!("level {k}"), simplex: id, indices: word, residual: r });
                    }
                }
            }
        }
        report
    }

    fn check_compatible(&self, other: &Self) -> Result<(), CochainError> {
        if !same_base(&self.base, &other.base) {
            return Err(CochainError::BaseMismatch);
        }
        if self.degree != other.degree {
            return Err(CochainError::DegreeMismatch(self.degree, other.degree));
        }
        Ok(())
    }

    fn combine(&self, other: &Self, f: impl Fn(S, S) -> S) -> Self {
        let mut out = self.clone();
        for (k, row) in other.values.iter().enumerate() {
            for (i, m) in row.iter().enumerate() {
                for (idx, v) in m {
                    let slot = &mut out.values[k][i];
                    let new = f(slot.get(idx).cloned().unwrap_or_else(S::zero), v.clone());
                    if new.is_zero() {
                        slot.remove(idx);
                    } else {
                        slot.insert(idx.clone(), new);
                    }
                }
            }
        }
        out.cocycle = self.cocycle && other.cocycle;
        out
    }

    /// Product of classes: values add.
    pub fn tensor(&self, other: &Self) -> Result<Self, CochainError> {
        self.check_compatible(other)?;
        Ok(self.combine(other, |a, b| a + b))
    }

    pub fn dual(&self) -> Self {
        let mut out = self.clone();
        for row in &mut out.values {
            for m in row {
                for v in m.values_mut() {
                    *v = -v.clone();
                }
            }
        }
        out
    }

    pub fn difference(&self, other: &Self) -> Result<Self, CochainError> {
        self.check_compatible(other)?;
        Ok(self.combine(other, |a, b| a - b))
    }

    /// Multiplies every value by an integer.
    pub fn scaled(&self, k: i64) -> Self {
        let mut out = self.clone();
        for row in &mut out.values {
            for m in row {
                for v in m.values_mut() {
                    *v = v.scale(k);
                }
                m.retain(|_, v| !v.is_zero());
            }
        }
        out
    }

    /// `D(b)` for a degree-(p−1) cochain `b` on the same base:
    /// `D(b)^0 = δb^0`, `D(b)^k = δb^k + (−1)^(p−k) d b^(k−1)`, `b^p ≡ 0`.
    pub fn coboundary_of(b: &DeligneCochain<S>) -> DeligneCochain<S> {
        let p = b.degree + 1;
        let mut out = DeligneCochain::zero(b.base.clone(), p);
        let complex = b.base.complex();
        for k in 0..=out.top_component() {
            for s in 0..complex.count(k) {
                let id = SimplexId::new(k, s);
                for word in out.multi_indices(id, p - k + 1) {
                    let mut v = if k <= b.top_component() && k < p { b.cech_delta(k, s, &word) } else { S::zero() };
                    if k >= 1 {
                        let d = b.discrete_d(k - 1, s, &word);
                        v = if (p - k).is_multiple_of(2) { v + d } else { v - d };
                    }
                    if !v.is_zero() {
                        out.values[k][s].insert(word, v);
                    }
                }
            }
        }
        out.cocycle = true;
        out
    }

    /// `c + D(b)`.
    pub fn exact_shift(&self, b: &DeligneCochain<S>) -> Result<Self, CochainError> {
        if !same_base(&self.base, &b.base) {
            return Err(CochainError::BaseMismatch);
        }
        if b.degree + 1 != self.degree {
            return Err(CochainError::DegreeMismatch(self.degree, b.degree + 1));
        }
        let mut out = self.combine(&Self::coboundary_of(b), |a, b| a + b);
        out.cocycle = self.cocycle;
        Ok(out)
    }

    /// Compares `c` with `D(b)` below the top level and reports the top
    /// residual `c^p − D(b)^p` per top simplex (at its smallest admissible
    /// index).
    pub fn verify_trivialization(&self, b: &DeligneCochain<S>, tol: f64) -> Result<TrivializationReport<S>, CochainError> {
        if !same_base(&self.base, &b.base) {
            return Err(CochainError::BaseMismatch);
        }
        if b.degree + 1 != self.degree {
            return Err(CochainError::DegreeMismatch(self.degree, b.degree + 1));
        }
        let p = self.degree;
        let db = Self::coboundary_of(b);
        let diff = self.combine(&db, |a, b| a - b);
        let complex = self.base.complex();
        let mut level_residuals: Vec<f64> = vec![0.0; p.min(self.top_component() + 1)];
        let mut failures = Vec::new();
        for (k, level) in level_residuals.iter_mut().enumerate() {
            for s in 0..complex.count(k) {
                let id = SimplexId::new(k, s);
                for word in self.multi_indices(id, p - k + 1) {
                    let r = diff.get(k, s, &word);
                    *level = level.max(r.magnitude());
                    if !r.within(tol) {
                        failures.push(Failure { condition: format!("level {k}"), simplex: id, indices: word, residual: r.magnitude() });
                    }
                }
            }
        }
        let mut top_residuals = Vec::new();
        if self.top_component() == p {
            for s in 0..complex.count(p) {
                let id = SimplexId::new(p, s);
                let alpha = self.base.admissible(id)[0];
                top_residuals.push(diff.get(p, s, &[alpha]));
            }
        }
        let trivial = failures.is_empty() && top_residuals.iter().all(|r| r.within(tol));
        Ok(TrivializationReport { level_residuals, failures, top_residuals, trivial })
    }

    /// Integer Čech cocycle `round(δC^0 / 2π)` on vertices.
    pub fn chern_cocycle(&self, tol: f64) -> Result<IntegerCocycle, CochainError> {
        let p = self.degree;
        let complex = self.base.complex();
        let mut values = vec![BTreeMap::new(); complex.count(0)];
        for (v, slot) in values.iter_mut().enumerate() {
            let id = SimplexId::new(0, v);
            for word in self.multi_indices(id, p + 2) {
                let (n, residual) = self.cech_delta(0, v, &word).split_turns();
                if !residual.within(tol) {
                    return Err(CochainError::Integrality { vertex: v, indices: word, residual: residual.magnitude() });
                }
                if n != 0 {
                    slot.insert(word, n);
                }
            }
        }
        let n = IntegerCocycle { length: p + 2, base: self.base.clone(), values };
        n.check_closed()?;
        Ok(n)
    }

    /// Carries the cochain to `target`, whose vertices map into this base
    /// through `vertex_map` (identity where absent). Values of `k ≥ 1`
    /// components pick up the relative orientation of the two simplices.
    pub fn pullback(
        &self,
        target: Arc<CoveredComplex>,
        vertex_map: &BTreeMap<usize, usize>,
    ) -> Result<Self, CochainError> {
        let source = self.base.complex();
        let mut out = Self::zero(target.clone(), self.degree);
        let tc = target.complex();
        for k in 0..=out.top_component() {
            for (i, s) in tc.simplices(k).iter().enumerate() {
                let image: Vec<usize> = s.oriented_vertices().iter().map(|v| *vertex_map.get(v).unwrap_or(v)).collect();
                let pid = source.find(&image).ok_or_else(|| CochainError::NoImage(s.vertices().to_vec()))?;
                let sign = if k == 0 {
                    1
                } else {
                    let src = source.simplices(k)[pid.index].oriented_vertices();
                    let pos: Vec<usize> = image.iter().map(|v| src.iter().position(|w| w == v).unwrap()).collect();
                    permutation_sign(&pos).unwrap()
                };
                let id = SimplexId::new(k, i);
                for word in out.multi_indices(id, self.degree - k + 1) {
                    let v = self.get(k, pid.index, &word);
                    if !v.is_zero() {
                        out.values[k][i].insert(word, if sign < 0 { -v } else { v });
                    }
                }
            }
        }
        out.cocycle = self.cocycle;
        Ok(out)
    }
}

/// Sign of the simplex with oriented vertex list `image` relative to the
/// stored orientation of the same simplex in `source`.
fn relative_sign(source: &crate::complex::SimplicialComplex, id: SimplexId, image: &[usize]) -> i8 {
    if id.dim == 0 {
        return 1;
    }
    let src = source.simplices(id.dim)[id.index].oriented_vertices();
    let pos: Vec<usize> = image.iter().map(|v| src.iter().position(|w| w == v).unwrap()).collect();
    permutation_sign(&pos).unwrap()
}

impl<S: Scalar> DeligneCochain<S> {
    /// Glues two cocycles along boundary components identified by
    /// `matching` (vertex of `other` -> vertex of `self`). Both sides must
    /// admit the same cover indices on identified simplices and carry equal
    /// values there within `tol`. Returns the glued cocycle and the
    /// relabelling applied to `other`.
    pub fn glue(
        &self,
        other: &Self,
        matching: &BTreeMap<usize, usize>,
        tol: f64,
    ) -> Result<(Self, BTreeMap<usize, usize>), CochainError> {
        if self.degree != other.degree {
            return Err(CochainError::DegreeMismatch(self.degree, other.degree));
        }
        let (k1, k2) = (self.base.complex(), other.base.complex());
        let (glued, relabel) = k1.glue_along_boundary(k2, matching).map_err(|e| CochainError::Glue(e.to_string()))?;
        let back: BTreeMap<usize, usize> = relabel.iter().map(|(&a, &b)| (b, a)).collect();
        let from_second = |verts: &[usize]| -> Option<Vec<usize>> {
            let mut v: Vec<usize> = verts.iter().map(|x| back.get(x).copied()).collect::<Option<_>>()?;
            v.sort_unstable();
            Some(v)
        };
        // the two halves share no top simplex, so each top has one origin
        let dim = glued.dim();
        let mut origin_second = vec![false; glued.count(dim)];
        let mut tops = Vec::with_capacity(glued.count(dim));
        for (i, s) in glued.simplices(dim).iter().enumerate() {
            if let Some(id) = k1.find(s.vertices()) {
                tops.push(self.base.admissible(id).to_vec());
            } else {
                let id = from_second(s.vertices()).and_then(|v| k2.find(&v)).ok_or_else(|| CochainError::NoImage(s.vertices().to_vec()))?;
                origin_second[i] = true;
                tops.push(other.base.admissible(id).to_vec());
            }
        }
        let num_sets = self.base.num_sets().max(other.base.num_sets());
        let cover = CoveredComplex::attach(glued, num_sets, &tops).map_err(|e| CochainError::Glue(e.to_string()))?;
        let base = Arc::new(cover);
        let mut out = Self::zero(base.clone(), self.degree);
        let gc = base.complex();
        for k in 0..=out.top_component() {
            for (i, s) in gc.simplices(k).iter().enumerate() {
                let id = SimplexId::new(k, i);
                let oriented = s.oriented_vertices();
                let first = if k == dim && origin_second[i] { None } else { k1.find(s.vertices()) };
                let second = if k == dim && !origin_second[i] {
                    None
                } else {
                    from_second(s.vertices()).and_then(|v| k2.find(&v))
                };
                let second_image: Vec<usize> = oriented.iter().map(|v| *back.get(v).unwrap_or(v)).collect();
                for word in out.multi_indices(id, self.degree - k + 1) {
                    let a = first
                        .filter(|&f| word.iter().all(|&x| self.base.is_admissible(f, x)))
                        .map(|f| {
                            let v = self.get(k, f.index, &word);
                            if relative_sign(k1, f, &oriented) < 0 { -v } else { v }
                        });
                    let b = second
                        .filter(|&f| word.iter().all(|&x| other.base.is_admissible(f, x)))
                        .map(|f| {
                            let v = other.get(k, f.index, &word);
                            if relative_sign(k2, f, &second_image) < 0 { -v } else { v }
                        });
                    let v = match (a, b) {
                        (Some(a), Some(b)) => {
                            if !(a.clone() - b).within(tol) {
                                return Err(CochainError::Glue(format!(
                                    "values differ on simplex {:?}, indices {word:?}",
                                    s.vertices()
                                )));
                            }
                            a
                        }
                        (Some(a), None) => a,
                        (None, Some(b)) => b,
                        (None, None) => {
                            return Err(CochainError::Glue(format!(
                                "indices {word:?} on simplex {:?} are admissible on neither side",
                                s.vertices()
                            )))
                        }
                    };
                    if !v.is_zero() {
                        out.values[k][i].insert(word, v);
                    }
                }
            }
        }
        out.cocycle = self.cocycle && other.cocycle;
        Ok((out, relabel))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub condition: String,
    pub simplex: SimplexId,
    pub indices: Vec<usize>,
    pub residual: f64,
}

/// Vertex and multi-index where `δC^0 / 2π` is a nonzero integer.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub vertex: usize,
    pub indices: Vec<usize>,
    pub turns: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CocycleReport {
    pub tolerance: f64,
    pub integrality_residual: f64,
    /// Worst residual of the level-`k` relation, `k = 1..`.
    pub level_residuals: Vec<f64>,
    pub failures: Vec<Failure>,
    pub witnesses: Vec<Witness>,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn worst_residual(&self) -> f64 {
        self.level_residuals.iter().copied().fold(self.integrality_residual, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrivializationReport<S> {
    pub level_residuals: Vec<f64>,
    pub failures: Vec<Failure>,
    pub top_residuals: Vec<S>,
    pub trivial: bool,
}

/// Integer-valued Čech cochain on vertices, multi-indices of fixed length.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegerCocycle {
    length: usize,
    base: Arc<CoveredComplex>,
    values: Vec<BTreeMap<Vec<usize>, i64>>,
}

impl IntegerCocycle {
    pub fn eval(&self, vertex: usize, word: &[usize]) -> i64 {
        match permutation_sign(word) {
            None => 0,
            Some(sign) => {
                let mut sorted = word.to_vec();
                sorted.sort_unstable();
                sign as i64 * self.values[vertex].get(&sorted).copied().unwrap_or(0)
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|m| m.is_empty())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &Vec<usize>, i64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .flat_map(|(v, m)| m.iter().map(move |(w, &n)| (v, w, n)))
    }

    fn check_closed(&self) -> Result<(), CochainError> {
        for v in 0..self.values.len() {
            let id = SimplexId::new(0, v);
            for word in combinations(self.base.admissible(id), self.length + 1) {
                let s: i64 = (0..word.len()).map(|j| alt_sign(j) * self.eval(v, &omit(&word, j))).sum();
                if s != 0 {
                    return Err(CochainError::NotClosed { vertex: v, indices: word });
                }
            }
        }
        Ok(())
    }

    /// Čech–simplicial pairing with the fundamental class of a closed
    /// oriented complex of dimension `length − 1`:
    /// `−Σ_{full flags} sign · n(σ^0; ρ(σ^top), …, ρ(σ^1), ρ(σ^0))`.
    /// The overall sign makes the total curvature `2π` times the pairing.
    pub fn pair(&self, rho: &crate::cover::IndexMap) -> Option<i64> {
        let complex = self.base.complex();
        if complex.dim() + 1 != self.length {
            return None;
        }
        let flags = complex.flags(0).ok()?;
        let mut total = 0i64;
        for flag in flags {
            let word: Vec<usize> = (0..=complex.dim()).rev().map(|d| rho.get(SimplexId::new(d, flag.at_dim(d)))).collect();
            total -= flag.sign as i64 * self.eval(flag.at_dim(0), &word);
        }
        Some(total)
    }
}

/// Uniform random values in `[-1, 1)` on every admissible slot.
pub fn random_cochain<S: Scalar>(base: Arc<CoveredComplex>, degree: usize, seed: u64) -> DeligneCochain<S> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = DeligneCochain::zero(base, degree);
    for k in 0..=c.top_component() {
        for s in 0..c.base.complex().count(k) {
            for word in c.multi_indices(SimplexId::new(k, s), degree - k + 1) {
                let v: f64 = rng.gen_range(-1.0..1.0);
                c.values[k][s].insert(word, S::from_f64(v));
            }
        }
    }
    c.cocycle = false;
    c
}

/// A random cocycle: `D(b)` for random `b`, plus an index-independent
/// random top form, plus `2π·m_I` on `C^0` with random integers per
/// multi-index (constant over vertices, so `d` does not see it).
pub fn random_cocycle<S: Scalar>(base: Arc<CoveredComplex>, degree: usize, seed: u64) -> DeligneCochain<S> {
    assert!(degree >= 1, "random cocycles need degree ≥ 1");
    let b = random_cochain::<S>(base.clone(), degree - 1, seed);
    let mut c = DeligneCochain::coboundary_of(&b);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    if c.top_component() == degree {
        for s in 0..base.complex().count(degree) {
            let id = SimplexId::new(degree, s);
            let omega = S::from_f64(rng.gen_range(-1.0..1.0));
            for word in c.multi_indices(id, 1) {
                let v = c.get(degree, s, &word) + omega.clone();
                c.set(degree, s, word, v);
            }
        }
    }
    let mut shifts: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
    for word in combinations(&(0..base.num_sets()).collect::<Vec<_>>(), degree + 1) {
        shifts.insert(word, rng.gen_range(-2..=2));
    }
    for v in 0..base.complex().count(0) {
        for word in c.multi_indices(SimplexId::new(0, v), degree + 1) {
            let m = shifts[&word];
            let val = c.get(0, v, &word) + S::from_turns(m, 1);
            c.set(0, v, word, val);
        }
    }
    c.cocycle = true;
    c
}
