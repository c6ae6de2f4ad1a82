//! Deligne cup products at the presentation level.
//!
//! For `x` of degree `a` with integer class `N_x` and `y` of degree `b`, the
//! product has degree `p = a + b + 1` and components
//!
//! ```text
//! C^k         = (−1)^a  N_x ∪ y^k            k = 0..=b
//! C^(b+1+j)   = (1/2π)  x^j ∪ d y^b          j = 0..=a
//! N_(x∪y)     = −N_x ∪ N_y
//! ```
//!
//! where `u ∪ v` on a word `(i_0, …, i_n)` multiplies `u` on the front face
//! and `v` on the back face, sharing one index.

use std::collections::BTreeMap;

use super::expr::{Coeff, Factor, Func, Monomial, Node, Presentation};
use super::AnalyticError;

/// Largest degree a product may have.
pub const MAX_CUP_DEGREE: usize = 4;

pub fn cup_product(x: &Presentation, y: &Presentation) -> Result<Presentation, AnalyticError> {
    x.check_shape()?;
    y.check_shape()?;
    if super::canonical_name(&x.geometry) != super::canonical_name(&y.geometry) {
        return Err(AnalyticError::GeometryMismatch { presentation: x.geometry.clone(), geometry: y.geometry.clone() });
    }
    let (a, b) = (x.degree, y.degree);
    let p = a + b + 1;
    if p > MAX_CUP_DEGREE {
        return Err(AnalyticError::Unsupported(format!("product of degrees {a} and {b} exceeds {MAX_CUP_DEGREE}")));
    }
    let nx = x
        .integer_class
        .clone()
        .ok_or_else(|| AnalyticError::Unsupported(format!("{} carries no integer class", x.name)))?;
    let sign = if a % 2 == 0 { Coeff::one() } else { Coeff::integer(-1) };
    let mut components = Vec::with_capacity(p + 1);
    for k in 0..=b {
        components.push(Node::cup(nx.clone(), y.components[k].clone(), a + 1, sign.clone()));
    }
    let dy = Node::d(y.components[b].clone());
    for j in 0..=a {
        components.push(Node::cup(x.components[j].clone(), dy.clone(), a - j, Coeff::inverse_tau(1)));
    }
    let integer_class = y
        .integer_class
        .clone()
        .map(|ny| Node::cup(nx.clone(), ny, a + 1, Coeff::integer(-1)));
    let mut params = BTreeMap::new();
    for (side, pres) in [("lhs", x), ("rhs", y)] {
        for (k, v) in &pres.params {
            params.insert(format!("{side}.{k}"), *v);
        }
    }
    Ok(Presentation {
        name: format!("({})∪({})", x.name, y.name),
        degree: p,
        geometry: x.geometry.clone(),
        params,
        components,
        integer_class,
        function: None,
    })
}

fn function_of(pres: &Presentation) -> Result<Func, AnalyticError> {
    match (&pres.function, pres.degree) {
        (Some(f), 0) => Ok(f.clone()),
        _ => Err(AnalyticError::Unsupported(format!("{} is not a function", pres.name))),
    }
}

/// The triple product of three functions written out directly:
///
/// ```text
/// C^0 = N_f(i0 i1) N_g(i1 i2) log_(i2) h
/// C^1 = (1/2π)  N_f(i0 i1) log_(i1) g · dlog h
/// C^2 = (1/2π)² log_(i0) f · dlog g ∧ dlog h
/// ```
pub fn triple_formula(f: &Presentation, g: &Presentation, h: &Presentation) -> Result<Presentation, AnalyticError> {
    let (ff, gg, hh) = (function_of(f)?, function_of(g)?, function_of(h)?);
    for other in [g, h] {
        if super::canonical_name(&other.geometry) != super::canonical_name(&f.geometry) {
            return Err(AnalyticError::GeometryMismatch {
                presentation: f.geometry.clone(),
                geometry: other.geometry.clone(),
            });
        }
    }
    let jump = |func: &Func, from, to| Factor::Jump { func: func.clone(), from, to };
    let lift = |func: &Func, slot| Factor::Lift { func: func.clone(), slot };
    let c0 = Monomial::new(Coeff::one(), vec![jump(&ff, 0, 1), jump(&gg, 1, 2), lift(&hh, 2)], vec![]);
    let c1 = Monomial::new(Coeff::inverse_tau(1), vec![jump(&ff, 0, 1), lift(&gg, 1)], vec![hh.clone()]);
    let c2 = Monomial::new(Coeff::inverse_tau(2), vec![lift(&ff, 0)], vec![gg.clone(), hh.clone()]);
    let n = Monomial::new(Coeff::one(), vec![jump(&ff, 0, 1), jump(&gg, 1, 2), jump(&hh, 2, 3)], vec![]);
    let mut params = BTreeMap::new();
    for (side, pres) in [("f", f), ("g", g), ("h", h)] {
        for (k, v) in &pres.params {
            params.insert(format!("{side}.{k}"), *v);
        }
    }
    Ok(Presentation {
        name: format!("triple({}, {}, {})", f.name, g.name, h.name),
        degree: 2,
        geometry: f.geometry.clone(),
        params,
        components: vec![Node::uniform(vec![c0]), Node::uniform(vec![c1]), Node::uniform(vec![c2])],
        integer_class: Some(Node::uniform(vec![n])),
        function: None,
    })
}
