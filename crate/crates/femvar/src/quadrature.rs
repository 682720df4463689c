//! Gauss-Legendre quadrature with hard-coded analytic tables for 1..=5
//! points.
//!
//! Every integrand this crate produces is a polynomial of degree at most 2,
//! so the default 2-point rule (exact through degree 3) already integrates
//! everything exactly; higher orders exist to assert exactly that.

use crate::error::FemvarError;
use crate::mesh::Mesh1D;

/// An n-point Gauss-Legendre rule on the reference interval [-1, 1].
///
/// Points are listed in ascending order; weights sum to 2 and the rule is
/// exact for polynomials of degree <= 2n - 1.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Closed-form n-point rule, `1 <= n <= 5`. The tables are analytic
    /// expressions, not root-finding output, so no iteration tolerance
    /// enters the trusted base.
    pub fn gauss_legendre(order: usize) -> Result<Self, FemvarError> {
        let (points, weights) = match order {
            1 => (vec![0.0], vec![2.0]),
            2 => {
                let p = 1.0 / 3.0f64.sqrt();
                (vec![-p, p], vec![1.0, 1.0])
            }
            3 => {
                let p = (3.0f64 / 5.0).sqrt();
                (vec![-p, 0.0, p], vec![5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])
            }
            4 => {
                let inner = (3.0f64 / 7.0 - 2.0 / 7.0 * (6.0f64 / 5.0).sqrt()).sqrt();
                let outer = (3.0f64 / 7.0 + 2.0 / 7.0 * (6.0f64 / 5.0).sqrt()).sqrt();
                let w_inner = (18.0 + 30.0f64.sqrt()) / 36.0;
                let w_outer = (18.0 - 30.0f64.sqrt()) / 36.0;
                (
                    vec![-outer, -inner, inner, outer],
                    vec![w_outer, w_inner, w_inner, w_outer],
                )
            }
            5 => {
                let inner = (5.0 - 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
                let outer = (5.0 + 2.0 * (10.0f64 / 7.0).sqrt()).sqrt() / 3.0;
                let w_inner = (322.0 + 13.0 * 70.0f64.sqrt()) / 900.0;
                let w_outer = (322.0 - 13.0 * 70.0f64.sqrt()) / 900.0;
                (
                    vec![-outer, -inner, 0.0, inner, outer],
                    vec![w_outer, w_inner, 128.0 / 225.0, w_inner, w_outer],
                )
            }
            other => return Err(FemvarError::UnsupportedQuadratureOrder(other)),
        };
        Ok(QuadratureRule { points, weights })
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Integrate `f` over `[a, b]` by affine-mapping the reference rule.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| w * f(mid + half * p))
            .sum::<f64>()
            * half
    }

    /// Integrate `f(x)` (physical coordinate) over one mesh element.
    pub fn integrate_on_element<F: Fn(f64) -> f64>(
        &self,
        mesh: &Mesh1D,
        element: usize,
        f: F,
    ) -> f64 {
        let (x_left, x_right) = mesh.element_span(element);
        self.integrate(x_left, x_right, f)
    }
}
