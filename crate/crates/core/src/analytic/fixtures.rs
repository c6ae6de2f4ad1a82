//! Named fixture families.
//!
//! Parameters arrive as strings so that angles can be given exactly as
//! fractions of a turn (`theta_turns=1/3`).

use std::collections::BTreeMap;

use super::cup::cup_product;
use super::expr::{Coeff, Factor, Func, Monomial, Node, Presentation};
use super::geometry::{canonical_name, Geometry};
use super::AnalyticError;
use crate::scalar::parse_fraction;

pub const FIXTURES: [&str; 8] = [
    "zero",
    "flat_circle",
    "winding_function",
    "linear_function",
    "const_function",
    "monopole",
    "torsion",
    "triple_cup",
];

struct Params<'a> {
    raw: &'a BTreeMap<String, String>,
    record: BTreeMap<String, f64>,
}

impl<'a> Params<'a> {
    fn new(raw: &'a BTreeMap<String, String>) -> Self {
        Params { raw, record: BTreeMap::new() }
    }

    fn real(&mut self, key: &str) -> Result<Option<f64>, AnalyticError> {
        let Some(s) = self.raw.get(key) else { return Ok(None) };
        let v: f64 = s.trim().parse().map_err(|_| AnalyticError::Invalid(format!("{key}={s} is not a number")))?;
        if !v.is_finite() {
            return Err(AnalyticError::Invalid(format!("{key}={s} is not finite")));
        }
        self.record.insert(key.to_string(), v);
        Ok(Some(v))
    }

    fn integer(&mut self, key: &str, default: i64) -> Result<i64, AnalyticError> {
        match self.real(key)? {
            None => {
                self.record.insert(key.to_string(), default as f64);
                Ok(default)
            }
            Some(v) if v.fract() == 0.0 && v.abs() < 1e15 => Ok(v as i64),
            Some(v) => Err(AnalyticError::NonIntegral(format!("{key}={v}"))),
        }
    }

    fn fraction(&mut self, key: &str) -> Result<Option<(i64, i64)>, AnalyticError> {
        let Some(s) = self.raw.get(key) else { return Ok(None) };
        let (n, d) = parse_fraction(s).ok_or_else(|| AnalyticError::Invalid(format!("{key}={s} is not a fraction")))?;
        self.record.insert(key.to_string(), n as f64 / d as f64);
        Ok(Some((n, d)))
    }

    /// An angle given as `key` (radians) or `key_turns` (fraction of 2π).
    fn angle(&mut self, key: &str, default: Coeff) -> Result<Coeff, AnalyticError> {
        let turns_key = format!("{key}_turns");
        match (self.real(key)?, self.fraction(&turns_key)?) {
            (Some(_), Some(_)) => Err(AnalyticError::Invalid(format!("give either {key} or {turns_key}"))),
            (Some(v), None) => Ok(Coeff::real(v)),
            (None, Some((n, d))) => Ok(Coeff::turns(n, d)),
            (None, None) => Ok(default),
        }
    }

    fn geometry(&self, default: &str) -> Result<&'static str, AnalyticError> {
        let name = self.raw.get("geometry").map(String::as_str).unwrap_or(default);
        canonical_name(name).ok_or_else(|| AnalyticError::UnknownGeometry(name.to_string()))
    }
}

fn coordinate_count(geometry: &str) -> Result<(usize, Vec<bool>), AnalyticError> {
    let g = Geometry::named(geometry)?;
    Ok((g.periodic().len(), g.periodic().to_vec()))
}

fn axis_function(geometry: &str, axis: usize, w: i64) -> Result<Func, AnalyticError> {
    let (n, periodic) = coordinate_count(geometry)?;
    if axis >= n || !periodic[axis] {
        return Err(AnalyticError::Invalid(format!("axis {axis} is not a periodic coordinate of {geometry}")));
    }
    let mut coeffs = vec![0.0; n];
    coeffs[axis] = w as f64;
    Ok(Func::Linear { coeffs, offset: 0.0 })
}

/// The degree-0 class of a circle-valued function `e^{i f}`.
pub(crate) fn function_presentation(name: String, geometry: &str, func: Func, params: BTreeMap<String, f64>) -> Presentation {
    let lift = Monomial::new(Coeff::one(), vec![Factor::Lift { func: func.clone(), slot: 0 }], vec![]);
    let jump = Monomial::new(Coeff::one(), vec![Factor::Jump { func: func.clone(), from: 0, to: 1 }], vec![]);
    Presentation {
        name,
        degree: 0,
        geometry: geometry.to_string(),
        params,
        components: vec![Node::uniform(vec![lift])],
        integer_class: Some(Node::uniform(vec![jump])),
        function: Some(func),
    }
}

pub fn generate_fixture(name: &str, raw: &BTreeMap<String, String>) -> Result<Presentation, AnalyticError> {
    let mut params = Params::new(raw);
    let known: &[&str] = match name {
        "zero" => &["p", "geometry"],
        "flat_circle" => &["theta", "theta_turns", "geometry"],
        "winding_function" => &["w", "axis", "geometry"],
        "linear_function" => &["coeffs", "offset", "geometry"],
        "const_function" => &["value", "value_turns", "geometry"],
        "monopole" => &["k", "geometry"],
        "torsion" => &["c", "w1", "w2", "geometry"],
        "triple_cup" => &["w1", "w2", "w3", "geometry"],
        _ => return Err(AnalyticError::UnknownFixture(name.to_string())),
    };
    if let Some(extra) = raw.keys().find(|k| !known.contains(&k.as_str())) {
        return Err(AnalyticError::Invalid(format!("fixture {name} takes no parameter {extra:?}")));
    }
    let pres = match name {
        "zero" => {
            let p = params.integer("p", 1)?;
            if !(0..=4).contains(&p) {
                return Err(AnalyticError::Invalid(format!("degree {p} out of range 0..=4")));
            }
            let geometry = params.geometry("circle-2arc")?;
            Presentation {
                name: format!("zero({p})"),
                degree: p as usize,
                geometry: geometry.to_string(),
                params: params.record,
                components: vec![Node::Zero; p as usize + 1],
                integer_class: Some(Node::Zero),
                function: None,
            }
        }
        "flat_circle" => {
            let theta = params.angle("theta", Coeff::real(1.0))?;
            let geometry = params.geometry("circle-2arc")?;
            if !geometry.starts_with("circle") {
                return Err(AnalyticError::Invalid("flat_circle lives on a circle geometry".into()));
            }
            let jump = Factor::Jump { func: axis_function(geometry, 0, 1)?, from: 1, to: 0 };
            Presentation {
                name: "flat_circle".into(),
                degree: 1,
                geometry: geometry.to_string(),
                params: params.record,
                components: vec![Node::uniform(vec![Monomial::new(theta, vec![jump], vec![])]), Node::Zero],
                integer_class: Some(Node::Zero),
                function: None,
            }
        }
        "winding_function" => {
            let w = params.integer("w", 1)?;
            let axis = params.integer("axis", 0)?;
            let geometry = params.geometry("circle-2arc")?;
            let axis = usize::try_from(axis).map_err(|_| AnalyticError::Invalid(format!("axis {axis}")))?;
            let func = axis_function(geometry, axis, w)?;
            function_presentation(format!("winding({w}, axis {axis})"), geometry, func, params.record)
        }
        "linear_function" => {
            let geometry = params.geometry("torus2-4chart")?;
            let (n, periodic) = coordinate_count(geometry)?;
            let coeffs: Vec<f64> = match raw.get("coeffs") {
                None => return Err(AnalyticError::MissingParam("coeffs".into())),
                Some(s) => s
                    .split(',')
                    .map(|c| c.trim().parse::<f64>().map_err(|_| AnalyticError::Invalid(format!("coeffs={s}"))))
                    .collect::<Result<_, _>>()?,
            };
            for (j, c) in coeffs.iter().enumerate() {
                params.record.insert(format!("coeffs.{j}"), *c);
            }
            let offset = params.real("offset")?.unwrap_or(0.0);
            let func = Func::Linear { coeffs, offset };
            func.check(&periodic)?;
            debug_assert_eq!(periodic.len(), n);
            function_presentation("linear".into(), geometry, func, params.record)
        }
        "const_function" => {
            let value = params.angle("value", Coeff::real(0.0))?;
            let geometry = params.geometry("circle-2arc")?;
            function_presentation("const".into(), geometry, Func::Const { value }, params.record)
        }
        "monopole" => {
            let k = params.integer("k", 1)?;
            let geometry = params.geometry("sphere-octahedron")?;
            if geometry != "sphere-octahedron" {
                return Err(AnalyticError::Invalid("monopole lives on sphere-octahedron".into()));
            }
            monopole(k, params.record)
        }
        "torsion" => {
            let (n, d) = params.fraction("c")?.unwrap_or((1, 3));
            let w1 = params.integer("w1", 1)?;
            let w2 = params.integer("w2", 1)?;
            let geometry = params.geometry("torus2-4chart")?;
            let record = params.record;
            let f = function_presentation(format!("winding({w1})"), geometry, axis_function(geometry, 0, w1)?, BTreeMap::new());
            let g = function_presentation(format!("winding({w2})"), geometry, axis_function(geometry, 1, w2)?, BTreeMap::new());
            let c = function_presentation(format!("const({n}/{d} turn)"), geometry, Func::Const { value: Coeff::turns(n, d) }, BTreeMap::new());
            let mut t = cup_product(&cup_product(&f, &g)?, &c)?;
            t.name = "torsion".into();
            t.params = record;
            t
        }
        "triple_cup" => {
            let w: Vec<i64> = ["w1", "w2", "w3"].iter().map(|k| params.integer(k, 1)).collect::<Result<_, _>>()?;
            let geometry = params.geometry("torus3-8chart")?;
            let record = params.record;
            let fs = w
                .iter()
                .enumerate()
                .map(|(axis, &wi)| {
                    Ok(function_presentation(format!("winding({wi}, axis {axis})"), geometry, axis_function(geometry, axis, wi)?, BTreeMap::new()))
                })
                .collect::<Result<Vec<_>, AnalyticError>>()?;
            let mut t = cup_product(&cup_product(&fs[0], &fs[1])?, &fs[2])?;
            t.name = "triple_cup".into();
            t.params = record;
            t
        }
        _ => unreachable!("checked above"),
    };
    Ok(pres)
}

/// Charge-`k` monopole on the five-chart sphere: potentials
/// `A_N = (k/2)(1 − cos ϑ) dφ` on the north cap and the bands and
/// `A_S = −(k/2)(1 + cos ϑ) dφ` on the south cap, glued by `e^{ikφ}`.
fn monopole(k: i64, params: BTreeMap<String, f64>) -> Presentation {
    let half = Coeff { real: 0.5, num: k, den: 1, tau_power: 0 };
    let neg_half = half.scaled(-1);
    let cos = Factor::Value { func: Func::CosPolar };
    let a_north = vec![
        Monomial::new(half.clone(), vec![], vec![Func::Azimuth]),
        Monomial::new(neg_half.clone(), vec![cos.clone()], vec![Func::Azimuth]),
    ];
    let a_south = vec![
        Monomial::new(neg_half.clone(), vec![], vec![Func::Azimuth]),
        Monomial::new(neg_half, vec![cos], vec![Func::Azimuth]),
    ];
    let mut c1 = BTreeMap::new();
    c1.insert(vec![0], a_north.clone());
    c1.insert(vec![1], a_south);
    let mut c0 = BTreeMap::new();
    let mut n = BTreeMap::new();
    for j in 2..5 {
        c1.insert(vec![j], a_north.clone());
        c0.insert(vec![1, j], vec![Monomial::new(Coeff::integer(k), vec![Factor::Lift { func: Func::Azimuth, slot: 1 }], vec![])]);
        for i in j + 1..5 {
            n.insert(
                vec![1, j, i],
                vec![Monomial::new(Coeff::integer(-k), vec![Factor::Jump { func: Func::Azimuth, from: 1, to: 2 }], vec![])],
            );
        }
    }
    Presentation {
        name: format!("monopole({k})"),
        degree: 1,
        geometry: "sphere-octahedron".into(),
        params,
        components: vec![Node::indexed(c0), Node::indexed(c1)],
        integer_class: Some(Node::indexed(n)),
        function: None,
    }
}
