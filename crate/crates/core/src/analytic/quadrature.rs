//! Gauss–Legendre rules on the standard simplex via the Duffy collapse
//! `t_i = u_i Π_{j<i} (1 − u_j)` of the unit cube.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

/// Points in the standard `k`-simplex `{t ≥ 0, Σ t ≤ 1}` and weights summing
/// to its volume `1/k!`.
#[derive(Clone, Debug)]
pub struct SimplexRule {
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl SimplexRule {
    /// Tensor rule with `order` nodes per direction; exact for polynomials
    /// of degree `2·order − 1 − (k − 1)` in the simplex coordinates.
    pub fn new(k: usize, order: NonZeroUsize) -> SimplexRule {
        if k == 0 {
            return SimplexRule { points: vec![Vec::new()], weights: vec![1.0] };
        }
        let gl = GaussLegendre::new(order);
        let line: Vec<(f64, f64)> = gl.as_node_weight_pairs().iter().map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect();
        let n = line.len();
        let total = n.pow(k as u32);
        let mut points = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        for idx in 0..total {
            let mut rem = idx;
            let mut t = Vec::with_capacity(k);
            let mut w = 1.0;
            let mut remaining = 1.0;
            for _ in 0..k {
                let (u, wu) = line[rem % n];
                rem /= n;
                t.push(u * remaining);
                // Jacobian factor (1 − u_i)^(k − 1 − i) collected as `remaining`
                w *= wu * remaining;
                remaining *= 1.0 - u;
            }
            points.push(t);
            weights.push(w);
        }
        SimplexRule { points, weights }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule(k: usize, n: usize) -> SimplexRule {
        SimplexRule::new(k, NonZeroUsize::new(n).unwrap())
    }

    #[test]
    fn volumes() {
        for (k, vol) in [(0, 1.0), (1, 1.0), (2, 0.5), (3, 1.0 / 6.0)] {
            let s: f64 = rule(k, 3).weights.iter().sum();
            assert!((s - vol).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn monomial_moments() {
        // ∫_Δ2 t0 t1^2 = 1!2!/5! = 1/60
        let r = rule(2, 4);
        let m: f64 = r.points.iter().zip(&r.weights).map(|(t, w)| w * t[0] * t[1] * t[1]).sum();
        assert!((m - 1.0 / 60.0).abs() < 1e-15);
        // ∫_Δ3 t0 t1 t2 = 1/720
        let r = rule(3, 3);
        let m: f64 = r.points.iter().zip(&r.weights).map(|(t, w)| w * t[0] * t[1] * t[2]).sum();
        assert!((m - 1.0 / 720.0).abs() < 1e-16);
    }
}
