//! Built-in fixture geometries: triangulations with vertex coordinates and
//! chart systems whose admissibility is computed from the coordinates.
//!
//! Periodic coordinates are stored in `[0, 2π)` and unwrapped per simplex
//! relative to its first vertex, which gives each simplex an affine
//! realization in chart coordinates.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::expr::Func;
use super::AnalyticError;
use crate::complex::{ManifoldRequest, SimplexId, SimplicialComplex, Vertex};
use crate::cover::CoveredComplex;
use crate::scalar::reduce_angle;

const EPS: f64 = 1e-12;

pub const GEOMETRIES: [&str; 7] =
    ["circle-2arc", "circle-3arc", "torus2-4chart", "torus3-8chart", "sphere-octahedron", "annulus", "solid-torus"];

/// Resolves aliases to the canonical geometry name.
pub fn canonical_name(name: &str) -> Option<&'static str> {
    match name {
        "sphere-octahedron-2chart" => Some("sphere-octahedron"),
        _ => GEOMETRIES.iter().copied().find(|&g| g == name),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constraint {
    /// Periodic coordinate within `[lo, hi]` up to a shift by 2π; also the
    /// branch `[lo, lo + 2π)` for lifts along that axis.
    Arc { axis: usize, lo: f64, hi: f64 },
    /// Same for the azimuth of `(x, y, z)` coordinates.
    Azimuth { lo: f64, hi: f64 },
    /// `z / |p|` within `[min, max]`.
    Height { min: f64, max: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chart {
    pub constraints: Vec<Constraint>,
}

fn fits_arc(values: &[f64], lo: f64, hi: f64) -> bool {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let n = ((min - lo + EPS) / TAU).floor();
    max - TAU * n <= hi + EPS
}

fn azimuth(x: &[f64]) -> f64 {
    x[1].atan2(x[0])
}

fn height(x: &[f64]) -> f64 {
    x[2] / (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

/// Representative of `x` in `[lo, lo + 2π)` and the number of turns removed.
fn branch(x: f64, lo: f64) -> (f64, f64) {
    // points on the lower end of an arc belong to it despite rounding
    let m = ((x - lo + EPS) / TAU).floor();
    (x - TAU * m, m)
}

impl Chart {
    pub fn arc_branch(&self, axis: usize) -> Option<f64> {
        self.constraints.iter().find_map(|c| match c {
            Constraint::Arc { axis: a, lo, .. } if *a == axis => Some(*lo),
            _ => None,
        })
    }

    pub fn azimuth_branch(&self) -> Option<f64> {
        self.constraints.iter().find_map(|c| match c {
            Constraint::Azimuth { lo, .. } => Some(*lo),
            _ => None,
        })
    }

    /// Whether the realized simplex lies in the chart without crossing its
    /// branch cut. Points are unwrapped.
    pub fn contains(&self, points: &[Vec<f64>]) -> bool {
        let mut probe = points.to_vec();
        if points.len() > 1 {
            let n = points.len() as f64;
            probe.push((0..points[0].len()).map(|j| points.iter().map(|p| p[j]).sum::<f64>() / n).collect());
        }
        self.constraints.iter().all(|c| match *c {
            Constraint::Arc { axis, lo, hi } => fits_arc(&probe.iter().map(|p| p[axis]).collect::<Vec<_>>(), lo, hi),
            Constraint::Azimuth { lo, hi } => {
                if probe.iter().any(|p| p[0].hypot(p[1]) < EPS) {
                    return false;
                }
                let a0 = azimuth(&probe[0]);
                let values: Vec<f64> = probe.iter().map(|p| a0 + reduce_angle(azimuth(p) - a0)).collect();
                fits_arc(&values, lo, hi)
            }
            Constraint::Height { min, max } => probe.iter().all(|p| {
                let h = height(p);
                h >= min - EPS && h <= max + EPS
            }),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Geometry {
    name: &'static str,
    cover: Arc<CoveredComplex>,
    /// Coordinates by vertex label.
    coords: Vec<Vec<f64>>,
    periodic: Vec<bool>,
    charts: Vec<Chart>,
    spherical: bool,
}

impl Geometry {
    pub fn named(name: &str) -> Result<Geometry, AnalyticError> {
        match canonical_name(name) {
            Some("circle-2arc") => circle(4, 2),
            Some("circle-3arc") => circle(6, 3),
            Some("torus2-4chart") => torus2(),
            Some("torus3-8chart") => torus3(),
            Some("sphere-octahedron") => sphere(4),
            Some("annulus") => annulus(),
            Some("solid-torus") => solid_torus(),
            _ => Err(AnalyticError::UnknownGeometry(name.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn cover(&self) -> &Arc<CoveredComplex> {
        &self.cover
    }

    pub fn complex(&self) -> &SimplicialComplex {
        self.cover.complex()
    }

    pub fn periodic(&self) -> &[bool] {
        &self.periodic
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn coords(&self, v: Vertex) -> &[f64] {
        &self.coords[v]
    }

    /// Vertex coordinates of a simplex in its stored orientation, periodic
    /// axes unwrapped relative to the first vertex.
    pub fn realize(&self, id: SimplexId) -> Vec<Vec<f64>> {
        realize(self.complex(), &self.coords, &self.periodic, id)
    }

    fn chart(&self, chart: usize) -> Result<&Chart, AnalyticError> {
        self.charts.get(chart).ok_or(AnalyticError::NoBranch { chart, what: "chart index out of range" })
    }

    /// Per-axis turns removed when bringing `x` into `chart`'s branches.
    fn turns(&self, func: &Func, chart: usize, x: &[f64]) -> Result<f64, AnalyticError> {
        let ch = self.chart(chart)?;
        match func {
            Func::Linear { coeffs, .. } => {
                let mut t = 0.0;
                for (j, &c) in coeffs.iter().enumerate() {
                    if c != 0.0 && self.periodic[j] {
                        let lo = ch.arc_branch(j).ok_or(AnalyticError::NoBranch { chart, what: "axis" })?;
                        t += c * branch(x[j], lo).1;
                    }
                }
                Ok(t)
            }
            Func::Azimuth => {
                let lo = ch.azimuth_branch().ok_or(AnalyticError::NoBranch { chart, what: "azimuth" })?;
                Ok(branch(azimuth(x), lo).1)
            }
            Func::Const { .. } | Func::CosPolar => Ok(0.0),
        }
    }

    /// The branch of `func` at `x` chosen by `chart`.
    pub fn lift(&self, func: &Func, chart: usize, x: &[f64]) -> Result<f64, AnalyticError> {
        let raw = match func {
            Func::Azimuth => azimuth(x),
            _ => self.value(func, x),
        };
        Ok(raw - TAU * self.turns(func, chart, x)?)
    }

    /// `(lift_to − lift_from) / 2π` at `x`.
    pub fn jump(&self, func: &Func, from: usize, to: usize, x: &[f64]) -> Result<i64, AnalyticError> {
        let t = self.turns(func, from, x)? - self.turns(func, to, x)?;
        Ok(t.round() as i64)
    }

    /// Value in raw coordinates (not reduced to any branch).
    pub fn value(&self, func: &Func, x: &[f64]) -> f64 {
        match func {
            Func::Linear { coeffs, offset } => coeffs.iter().zip(x).map(|(c, x)| c * x).sum::<f64>() + offset,
            Func::Const { value } => value.value(),
            Func::Azimuth => azimuth(x),
            Func::CosPolar => height(x),
        }
    }

    pub fn gradient(&self, func: &Func, x: &[f64]) -> Vec<f64> {
        match func {
            Func::Linear { coeffs, .. } => coeffs.clone(),
            Func::Const { .. } => vec![0.0; x.len()],
            Func::Azimuth => {
                let r2 = x[0] * x[0] + x[1] * x[1];
                vec![-x[1] / r2, x[0] / r2, 0.0]
            }
            Func::CosPolar => {
                let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                let r = r2.sqrt();
                let r3 = r2 * r;
                vec![-x[0] * x[2] / r3, -x[1] * x[2] / r3, 1.0 / r - x[2] * x[2] / r3]
            }
        }
    }

    /// Barycentric subdivision; new vertices sit at barycenters of their
    /// carriers and inherit the carriers' admissible charts.
    pub fn subdivide(&self) -> (Geometry, Vec<Vec<SimplexId>>) {
        let (cover, carriers) = self.cover.subdivide();
        let sub = cover.complex();
        let max_label = sub.vertex_labels().into_iter().max().unwrap_or(0);
        let mut coords = vec![Vec::new(); max_label + 1];
        for (i, s) in sub.simplices(0).iter().enumerate() {
            let pts = self.realize(carriers[0][i]);
            let n = pts.len() as f64;
            let mut x: Vec<f64> = (0..self.periodic.len()).map(|j| pts.iter().map(|p| p[j]).sum::<f64>() / n).collect();
            for (j, &per) in self.periodic.iter().enumerate() {
                if per {
                    x[j] = x[j].rem_euclid(TAU);
                }
            }
            if self.spherical {
                let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
                x.iter_mut().for_each(|c| *c /= r);
            }
            coords[s.vertices()[0]] = x;
        }
        let geometry = Geometry {
            name: self.name,
            cover: Arc::new(cover),
            coords,
            periodic: self.periodic.clone(),
            charts: self.charts.clone(),
            spherical: self.spherical,
        };
        (geometry, carriers)
    }

    /// First top simplex (and chart) whose admissible chart does not contain
    /// its realization.
    pub fn find_branch_violation(&self) -> Option<(SimplexId, usize)> {
        let dim = self.complex().dim();
        for t in self.complex().tops() {
            let id = SimplexId::new(dim, t);
            let pts = self.realize(id);
            for &a in self.cover.admissible(id) {
                if !self.charts[a].contains(&pts) {
                    return Some((id, a));
                }
            }
        }
        None
    }
}

fn realize(complex: &SimplicialComplex, coords: &[Vec<f64>], periodic: &[bool], id: SimplexId) -> Vec<Vec<f64>> {
    let s = &complex.simplices(id.dim)[id.index];
    unwrap(&s.oriented_vertices().iter().map(|&v| coords[v].clone()).collect::<Vec<_>>(), periodic)
}

fn unwrap(points: &[Vec<f64>], periodic: &[bool]) -> Vec<Vec<f64>> {
    let Some(first) = points.first() else { return Vec::new() };
    points
        .iter()
        .map(|p| {
            p.iter()
                .enumerate()
                .map(|(j, &x)| if periodic[j] { first[j] + reduce_angle(x - first[j]) } else { x })
                .collect()
        })
        .collect()
}

fn det(m: &[Vec<f64>]) -> f64 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        n => panic!("determinant of size {n} not needed"),
    }
}

/// Orients tops by the coordinate determinant (for hypersurfaces, with the
/// position vector appended as outward normal), builds the complex and
/// computes admissible charts per top.
fn assemble(
    name: &'static str,
    coords: Vec<Vec<f64>>,
    periodic: Vec<bool>,
    tops: Vec<Vec<Vertex>>,
    charts: Vec<Chart>,
    request: ManifoldRequest,
    spherical: bool,
) -> Result<Geometry, AnalyticError> {
    let oriented: Vec<Vec<Vertex>> = tops
        .into_iter()
        .map(|mut t| {
            let pts = unwrap(&t.iter().map(|&v| coords[v].clone()).collect::<Vec<_>>(), &periodic);
            let mut rows: Vec<Vec<f64>> =
                pts[1..].iter().map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect()).collect();
            if spherical {
                rows.push(pts[0].clone());
            }
            if det(&rows) < 0.0 {
                t.swap(0, 1);
            }
            t
        })
        .collect();
    let complex = SimplicialComplex::build(&oriented, request)?;
    let dim = complex.dim();
    let admissible: Vec<Vec<usize>> = complex
        .tops()
        .map(|t| {
            let pts = realize(&complex, &coords, &periodic, SimplexId::new(dim, t));
            charts.iter().enumerate().filter(|(_, c)| c.contains(&pts)).map(|(a, _)| a).collect()
        })
        .collect();
    let cover = Arc::new(CoveredComplex::attach(complex, charts.len(), &admissible)?);
    Ok(Geometry { name, cover, coords, periodic, charts, spherical })
}

fn angle(i: usize, n: usize) -> f64 {
    TAU * (i % n) as f64 / n as f64
}

/// Arcs `[2πj/m − δ, 2π(j+1)/m + δ]`.
fn arcs(m: usize, delta: f64) -> Vec<(f64, f64)> {
    (0..m).map(|j| (TAU * j as f64 / m as f64 - delta, TAU * (j + 1) as f64 / m as f64 + delta)).collect()
}

fn circle(n: usize, m: usize) -> Result<Geometry, AnalyticError> {
    let name = if m == 2 { "circle-2arc" } else { "circle-3arc" };
    let coords = (0..n).map(|i| vec![angle(i, n)]).collect();
    let tops = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    let charts = arcs(m, PI / 8.0)
        .into_iter()
        .map(|(lo, hi)| Chart { constraints: vec![Constraint::Arc { axis: 0, lo, hi }] })
        .collect();
    assemble(name, coords, vec![true], tops, charts, ManifoldRequest::ClosedOriented, false)
}

/// Product charts: every combination of one arc per axis, first axis fastest.
fn product_charts(axes: &[(usize, Vec<(f64, f64)>)]) -> Vec<Chart> {
    let total: usize = axes.iter().map(|(_, l)| l.len()).product();
    (0..total)
        .map(|idx| {
            let mut rem = idx;
            let constraints = axes
                .iter()
                .map(|(axis, list)| {
                    let (lo, hi) = list[rem % list.len()];
                    rem /= list.len();
                    Constraint::Arc { axis: *axis, lo, hi }
                })
                .collect();
            Chart { constraints }
        })
        .collect()
}

fn torus2() -> Result<Geometry, AnalyticError> {
    let n = 4;
    let label = |i: usize, j: usize| i % n + n * (j % n);
    let coords = (0..n * n).map(|v| vec![angle(v % n, n), angle(v / n, n)]).collect();
    let mut tops = Vec::new();
    for j in 0..n {
        for i in 0..n {
            tops.push(vec![label(i, j), label(i + 1, j), label(i + 1, j + 1)]);
            tops.push(vec![label(i, j), label(i + 1, j + 1), label(i, j + 1)]);
        }
    }
    let a = arcs(2, PI / 8.0);
    let charts = product_charts(&[(0, a.clone()), (1, a)]);
    assemble("torus2-4chart", coords, vec![true, true], tops, charts, ManifoldRequest::ClosedOriented, false)
}

fn torus3() -> Result<Geometry, AnalyticError> {
    let n = 3;
    let label = |c: [usize; 3]| c[0] % n + n * (c[1] % n) + n * n * (c[2] % n);
    let coords = (0..n * n * n).map(|v| vec![angle(v % n, n), angle((v / n) % n, n), angle(v / (n * n), n)]).collect();
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut tops = Vec::new();
    for k in 0..n {
        for j in 0..n {
            for i in 0..n {
                for perm in &perms {
                    let mut c = [i, j, k];
                    let mut t = vec![label(c)];
                    for &axis in perm {
                        c[axis] += 1;
                        t.push(label(c));
                    }
                    tops.push(t);
                }
            }
        }
    }
    // wide overlaps keep each cell of width 2π/3 inside an arc of width < 2π
    let a = arcs(2, 5.0 * PI / 12.0);
    let charts = product_charts(&[(0, a.clone()), (1, a.clone()), (2, a)]);
    assemble("torus3-8chart", coords, vec![true; 3], tops, charts, ManifoldRequest::ClosedOriented, false)
}

fn sphere(m: i64) -> Result<Geometry, AnalyticError> {
    let mut index: BTreeMap<[i64; 3], usize> = BTreeMap::new();
    let mut faces = Vec::new();
    for sx in [1i64, -1] {
        for sy in [1i64, -1] {
            for sz in [1i64, -1] {
                let key = |a: i64, b: i64| [a * sx, b * sy, (m - a - b) * sz];
                for a in 0..m {
                    for b in 0..m - a {
                        faces.push([key(a, b), key(a + 1, b), key(a, b + 1)]);
                        if a + b + 2 <= m {
                            faces.push([key(a + 1, b), key(a + 1, b + 1), key(a, b + 1)]);
                        }
                    }
                }
            }
        }
    }
    for f in &faces {
        for k in f {
            let next = index.len();
            index.entry(*k).or_insert(next);
        }
    }
    // relabel in key order so labels do not depend on face traversal
    let keys: Vec<[i64; 3]> = index.keys().copied().collect();
    let label: BTreeMap<[i64; 3], usize> = keys.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let coords = keys
        .iter()
        .map(|k| {
            let r = ((k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64).sqrt();
            k.iter().map(|&c| c as f64 / r).collect()
        })
        .collect();
    let tops = faces.iter().map(|f| f.iter().map(|k| label[k]).collect()).collect();
    let mut charts = vec![
        Chart { constraints: vec![Constraint::Height { min: 0.3, max: 1.0 }] },
        Chart { constraints: vec![Constraint::Height { min: -1.0, max: -0.3 }] },
    ];
    for j in 0..3 {
        let lo = TAU * j as f64 / 3.0 - PI / 6.0;
        let hi = TAU * (j + 1) as f64 / 3.0 + PI / 6.0;
        charts.push(Chart {
            constraints: vec![Constraint::Height { min: -0.75, max: 0.75 }, Constraint::Azimuth { lo, hi }],
        });
    }
    assemble("sphere-octahedron", coords, vec![false; 3], tops, charts, ManifoldRequest::ClosedOriented, true)
}

/// Four overlapping θ-arcs of width π.
fn theta_charts(axis: usize) -> Vec<Chart> {
    (0..4)
        .map(|j| {
            let lo = j as f64 * FRAC_PI_2 - PI / 4.0;
            let hi = (j + 1) as f64 * FRAC_PI_2 + PI / 4.0;
            Chart { constraints: vec![Constraint::Arc { axis, lo, hi }] }
        })
        .collect()
}

fn annulus() -> Result<Geometry, AnalyticError> {
    let (n, rows) = (8, 3);
    let label = |i: usize, r: usize| i % n + n * r;
    let coords = (0..n * rows).map(|v| vec![angle(v % n, n), 0.5 * (v / n) as f64]).collect();
    let mut tops = Vec::new();
    for r in 0..rows - 1 {
        for i in 0..n {
            tops.push(vec![label(i, r), label(i + 1, r), label(i + 1, r + 1)]);
            tops.push(vec![label(i, r), label(i + 1, r + 1), label(i, r + 1)]);
        }
    }
    assemble("annulus", coords, vec![true, false], tops, theta_charts(0), ManifoldRequest::WithBoundary, false)
}

fn solid_torus() -> Result<Geometry, AnalyticError> {
    let n = 8;
    let section = [[0.0, 0.0], [1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]];
    let triangles = [[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 1, 4]];
    let label = |node: usize, layer: usize| node + 5 * (layer % n);
    let coords = (0..5 * n).map(|v| vec![section[v % 5][0], section[v % 5][1], angle(v / 5, n)]).collect();
    let mut tops = Vec::new();
    for layer in 0..n {
        for &[a, b, c] in &triangles {
            let (a0, b0, c0) = (label(a, layer), label(b, layer), label(c, layer));
            let (a1, b1, c1) = (label(a, layer + 1), label(b, layer + 1), label(c, layer + 1));
            // staircase by node order keeps the split consistent across shared faces
            tops.push(vec![a0, b0, c0, c1]);
            tops.push(vec![a0, b0, b1, c1]);
            tops.push(vec![a0, a1, b1, c1]);
        }
    }
    assemble("solid-torus", coords, vec![false, false, true], tops, theta_charts(2), ManifoldRequest::WithBoundary, false)
}
