//! Uniform 1D meshes and linear (hat) shape functions.
//!
//! The reference element is [0, 1] with `N1(xi) = 1 - xi`, `N2(xi) = xi`;
//! all integrals run over the physical domain element by element. Only
//! uniform grids are supported: the stabilization parameter is defined in
//! terms of a single element length.

use crate::error::FemvarError;

/// Uniform partition of `[a, b]` into `n_elements` intervals.
///
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    a: f64,
    b: f64,
    n_elements: usize,
    nodes: Vec<f64>,
    element_length: f64,
}

impl Mesh1D {
    /// Build a uniform mesh. Requires `b > a` and at least 2 elements so
    /// the constrained system keeps an interior unknown.
    pub fn new(a: f64, b: f64, n_elements: usize) -> Result<Self, FemvarError> {
        if !(b > a) {
            return Err(FemvarError::InvalidDomain { a, b });
        }
        if n_elements < 2 {
            return Err(FemvarError::TooFewElements(n_elements));
        }
        let element_length = (b - a) / n_elements as f64;
        let mut nodes: Vec<f64> = (0..=n_elements)
            .map(|i| a + element_length * i as f64)
            .collect();
        // Pin the right end exactly; accumulated rounding must not move the
        // Dirichlet node.
        nodes[n_elements] = b;
        Ok(Mesh1D {
            a,
            b,
            n_elements,
            nodes,
            element_length,
        })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn n_nodes(&self) -> usize {
        self.n_elements + 1
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn element_length(&self) -> f64 {
        self.element_length
    }

    /// Global node indices (left, right) of element `e`.
    pub fn element_nodes(&self, e: usize) -> (usize, usize) {
        assert!(e < self.n_elements, "element index out of range");
        (e, e + 1)
    }

    /// Physical span (x_left, x_right) of element `e`.
    pub fn element_span(&self, e: usize) -> (f64, f64) {
        let (l, r) = self.element_nodes(e);
        (self.nodes[l], self.nodes[r])
    }

    /// Map a reference coordinate `xi` in [0, 1] on element `e` to the
    /// physical coordinate.
    pub fn map_to_physical(&self, e: usize, xi: f64) -> f64 {
        let (x_left, _) = self.element_span(e);
        x_left + xi * self.element_length
    }

    pub fn is_boundary_node(&self, node: usize) -> bool {
        node == 0 || node == self.n_elements
    }
}

/// The two linear shape functions on the reference element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalNode {
    /// `N1(xi) = 1 - xi`, equal to 1 at the element's left node.
    First,
    /// `N2(xi) = xi`, equal to 1 at the element's right node.
    Second,
}

impl LocalNode {
    pub const BOTH: [LocalNode; 2] = [LocalNode::First, LocalNode::Second];
}

/// Value of the shape function at a reference coordinate in [0, 1].
pub fn shape_value(node: LocalNode, xi: f64) -> Result<f64, FemvarError> {
    if !(0.0..=1.0).contains(&xi) {
        return Err(FemvarError::ReferenceCoordOutOfRange(xi));
    }
    Ok(match node {
        LocalNode::First => 1.0 - xi,
        LocalNode::Second => xi,
    })
}

/// Derivative with respect to the reference coordinate: -1 or +1.
pub fn shape_ref_grad(node: LocalNode) -> f64 {
    match node {
        LocalNode::First => -1.0,
        LocalNode::Second => 1.0,
    }
}

/// Physical derivative dN/dx = (reference derivative) / element length.
/// Constant on every element of a uniform mesh, and identically zero at
/// second order: the property that degenerates the least-squares weight.
pub fn shape_grad_physical(node: LocalNode, mesh: &Mesh1D) -> f64 {
    shape_ref_grad(node) / mesh.element_length()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn four_elements_on_unit_interval() {
        let mesh = Mesh1D::new(1.0, 2.0, 4).unwrap();
        assert_eq!(mesh.nodes(), &[1.0, 1.25, 1.5, 1.75, 2.0]);
        assert_eq!(mesh.element_length(), 0.25);
    }

    #[test]
    fn sweep_resolution() {
        let mesh = Mesh1D::new(1.0, 2.0, 25).unwrap();
        assert_relative_eq!(mesh.element_length(), 0.04, max_relative = 1e-15);
        assert_eq!(mesh.n_nodes(), 26);
    }

    #[test]
    fn minimal_mesh() {
        let mesh = Mesh1D::new(0.0, 1.0, 2).unwrap();
        assert_eq!(mesh.nodes(), &[0.0, 0.5, 1.0]);
    }

    #[test]
    fn rejects_degenerate_domains_and_too_few_elements() {
        assert!(matches!(
            Mesh1D::new(2.0, 1.0, 4),
            Err(FemvarError::InvalidDomain { .. })
        ));
        assert!(matches!(
            Mesh1D::new(1.0, 1.0, 4),
            Err(FemvarError::InvalidDomain { .. })
        ));
        assert!(matches!(
            Mesh1D::new(1.0, 2.0, 1),
            Err(FemvarError::TooFewElements(1))
        ));
    }

    #[test]
    fn nodes_are_strictly_increasing_and_uniform() {
        let mesh = Mesh1D::new(1.0, 2.0, 75).unwrap();
        let nodes = mesh.nodes();
        assert_eq!(nodes[0], 1.0);
        assert_eq!(nodes[75], 2.0);
        for w in nodes.windows(2) {
            assert!(w[1] > w[0]);
            assert_relative_eq!(w[1] - w[0], mesh.element_length(), max_relative = 1e-12);
        }
    }

    #[test]
    fn shape_values_are_interpolatory() {
        assert_eq!(shape_value(LocalNode::First, 0.0).unwrap(), 1.0);
        assert_eq!(shape_value(LocalNode::Second, 0.5).unwrap(), 0.5);
        assert_eq!(shape_value(LocalNode::First, 1.0).unwrap(), 0.0);
        assert_eq!(shape_value(LocalNode::Second, 0.0).unwrap(), 0.0);
        assert_eq!(shape_value(LocalNode::Second, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn shape_value_rejects_out_of_range_xi() {
        assert!(shape_value(LocalNode::First, -0.01).is_err());
        assert!(shape_value(LocalNode::Second, 1.01).is_err());
    }

    #[test]
    fn physical_gradients() {
        let mesh = Mesh1D::new(1.0, 2.0, 4).unwrap();
        assert_eq!(shape_grad_physical(LocalNode::First, &mesh), -4.0);
        assert_eq!(shape_grad_physical(LocalNode::Second, &mesh), 4.0);
        let unit = Mesh1D::new(0.0, 2.0, 2).unwrap();
        assert_eq!(shape_grad_physical(LocalNode::First, &unit), -1.0);
    }

    proptest! {
        #[test]
        fn partition_of_unity(xi in 0.0f64..=1.0) {
            let n1 = shape_value(LocalNode::First, xi).unwrap();
            let n2 = shape_value(LocalNode::Second, xi).unwrap();
            prop_assert!((n1 + n2 - 1.0).abs() <= 1e-14);
        }

        #[test]
        fn gradients_sum_to_zero(n in 2usize..200, span in 0.1f64..10.0) {
            let mesh = Mesh1D::new(0.0, span, n).unwrap();
            let sum = shape_grad_physical(LocalNode::First, &mesh)
                + shape_grad_physical(LocalNode::Second, &mesh);
            prop_assert_eq!(sum, 0.0);
        }

        #[test]
        fn mapping_stays_inside_element(e in 0usize..25, xi in 0.0f64..=1.0) {
            let mesh = Mesh1D::new(1.0, 2.0, 25).unwrap();
            let x = mesh.map_to_physical(e, xi);
            let (lo, hi) = mesh.element_span(e);
            prop_assert!(x >= lo - 1e-15 && x <= hi + 1e-15);
        }
    }
}
