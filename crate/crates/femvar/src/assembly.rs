//! Global system assembly for the seven weighted-residual variants.
//!
//! Every variant enforces the same discrete statement: for weight `w_i`,
//!
//! ```text
//! sum_j  integral[ Pe * N_j'(x) w_i(x) + N_j'(x) w_i'(x) ] dx  T_j = 0
//! ```
//!
//! and differs only in the weight recipe:
//!
//! | method | weight `w_i`                          |
//! |--------|---------------------------------------|
//! | SG     | `N_i`                                 |
//! | C      | `delta_i`                             |
//! | LS     | `L(N_i) = Pe N_i' - N_i''`            |
//! | GLS    | `N_i + tau L(N_i)`                    |
//! | CG     | `delta_i + N_i`                       |
//! | CLS    | `delta_i + tau L(N_i)`                |
//! | CGLS   | `delta_i + N_i + tau L(N_i)`          |
//!
//! Composite methods are assembled with the combined weight inside a single
//! quadrature pass (plus collocation rows), so the additivity identities
//! `A_GLS = A_SG + tau A_LS` etc. are genuine cross-checks rather than
//! restatements of the construction.
//!
//! Dirac-delta weights use the standard distributional identities
//! `integral f delta_i = f(x_i)` and `integral f delta_i' = -f'(x_i)`. With
//! linear shape functions the trial second derivative vanishes, so a delta
//! row reduces to `Pe * N_j'(x_i)`; the trial derivative jumps at the node
//! and is taken as the average of the two adjacent element values, which
//! yields the central-difference stencil `Pe/(2 l_e) * {-1, 0, +1}`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::FemvarError;
use crate::matrix::DenseMatrix;
use crate::mesh::{shape_grad_physical, shape_value, LocalNode, Mesh1D};
use crate::quadrature::QuadratureRule;

/// The seven weight-function variants. Declaration order is the canonical
/// reporting order throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MethodKind {
    /// Standard Galerkin
    Sg,
    /// Collocation
    C,
    /// Least-Squares
    Ls,
    /// Galerkin/Least-Squares
    Gls,
    /// Collocation/Galerkin
    Cg,
    /// Collocation/Least-Squares
    Cls,
    /// Collocation/Galerkin/Least-Squares
    Cgls,
}

impl MethodKind {
    pub const ALL: [MethodKind; 7] = [
        MethodKind::Sg,
        MethodKind::C,
        MethodKind::Ls,
        MethodKind::Gls,
        MethodKind::Cg,
        MethodKind::Cls,
        MethodKind::Cgls,
    ];

    pub fn label(self) -> &'static str {
        match self {
            MethodKind::Sg => "SG",
            MethodKind::C => "C",
            MethodKind::Ls => "LS",
            MethodKind::Gls => "GLS",
            MethodKind::Cg => "CG",
            MethodKind::Cls => "CLS",
            MethodKind::Cgls => "CGLS",
        }
    }

    /// Does the weight contain a Dirac delta (collocation) part?
    pub fn uses_delta_weight(self) -> bool {
        matches!(
            self,
            MethodKind::C | MethodKind::Cg | MethodKind::Cls | MethodKind::Cgls
        )
    }

    /// Does the weight contain the shape function itself?
    pub fn uses_galerkin_weight(self) -> bool {
        matches!(
            self,
            MethodKind::Sg | MethodKind::Gls | MethodKind::Cg | MethodKind::Cgls
        )
    }

    /// Scale applied to the `L(N_i)` part of the weight: 1 for pure LS,
    /// `tau` for the stabilized composites, 0 otherwise.
    pub fn least_squares_scale(self, tau: f64) -> f64 {
        match self {
            MethodKind::Ls => 1.0,
            MethodKind::Gls | MethodKind::Cls | MethodKind::Cgls => tau,
            MethodKind::Sg | MethodKind::C | MethodKind::Cg => 0.0,
        }
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for MethodKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MethodKind::ALL
            .iter()
            .copied()
            .find(|m| m.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                format!("unknown method '{s}' (expected one of SG, C, LS, GLS, CG, CLS, CGLS)")
            })
    }
}

/// Stabilization parameter:
/// `tau = ((2 Pe / l_e)^2 + (4 / l_e^2)^2)^(-1/2)`.
///
/// Positive for every `pe >= 0`, nonincreasing in `pe`, and a single global
/// scalar on a uniform grid.
pub fn stabilization_tau(pe: f64, element_length: f64) -> Result<f64, FemvarError> {
    if !(element_length > 0.0) {
        return Err(FemvarError::NonPositiveElementLength(element_length));
    }
    Ok(tau_value(pe, element_length))
}

fn tau_value(pe: f64, l_e: f64) -> f64 {
    let convective = 2.0 * pe / l_e;
    let diffusive = 4.0 / (l_e * l_e);
    (convective * convective + diffusive * diffusive).powf(-0.5)
}

/// Assembled square system plus Dirichlet bookkeeping.
///
/// `constraints` is empty straight out of [`assemble`]; [`apply_dirichlet`]
/// fills it and rewrites the boundary rows. `tau` is carried along for
/// reporting even by methods that do not use it.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub matrix: DenseMatrix,
    pub rhs: Vec<f64>,
    pub constraints: Vec<(usize, f64)>,
    pub tau: f64,
}

impl LinearSystem {
    pub fn n_unknowns(&self) -> usize {
        self.matrix.size()
    }

    pub fn is_constrained(&self) -> bool {
        !self.constraints.is_empty()
    }
}

/// 2x2 element matrix for the combined smooth weight
/// `w_i = g * N_i + s * Pe * N_i'` (`g` is 0/1, `s` the LS scale), whose
/// derivative is `g * N_i'`. One quadrature pass covers SG, LS, and every
/// smooth part of the composites.
fn element_matrix_smooth(
    pe: f64,
    galerkin: f64,
    ls_scale: f64,
    element: usize,
    mesh: &Mesh1D,
    rule: &QuadratureRule,
) -> [[f64; 2]; 2] {
    let (x_left, x_right) = mesh.element_span(element);
    let half = 0.5 * (x_right - x_left);
    let grad = [
        shape_grad_physical(LocalNode::First, mesh),
        shape_grad_physical(LocalNode::Second, mesh),
    ];
    let mut k = [[0.0; 2]; 2];
    for (&p, &w) in rule.points().iter().zip(rule.weights()) {
        // rule point on [-1, 1] -> reference coordinate on [0, 1]
        let xi = 0.5 * (p + 1.0);
        let value = [
            shape_value(LocalNode::First, xi).expect("xi in range"),
            shape_value(LocalNode::Second, xi).expect("xi in range"),
        ];
        for i in 0..2 {
            let w_i = galerkin * value[i] + ls_scale * pe * grad[i];
            let w_i_x = galerkin * grad[i];
            for j in 0..2 {
                k[i][j] += w * half * (pe * grad[j] * w_i + grad[j] * w_i_x);
            }
        }
    }
    k
}

/// Element matrix with the Galerkin weight `w_i = N_i`:
/// `K_ij = integral[ Pe N_j' N_i + N_j' N_i' ] dx`.
pub fn element_matrix_galerkin(
    pe: f64,
    element: usize,
    mesh: &Mesh1D,
    rule: &QuadratureRule,
) -> [[f64; 2]; 2] {
    element_matrix_smooth(pe, 1.0, 0.0, element, mesh, rule)
}

/// Element matrix with the least-squares weight `w_i = L(N_i)`. With linear
/// shape functions `N'' = 0`, so this collapses to
/// `K_ij = integral (Pe N_j')(Pe N_i') dx = (Pe^2 / l_e) [[1,-1],[-1,1]]`:
/// pure diffusion regardless of the Peclet number.
pub fn element_matrix_least_squares(
    pe: f64,
    element: usize,
    mesh: &Mesh1D,
    rule: &QuadratureRule,
) -> [[f64; 2]; 2] {
    element_matrix_smooth(pe, 0.0, 1.0, element, mesh, rule)
}

/// Collocation row at an interior node: coefficients on
/// `(node-1, node, node+1)` equal to `Pe/(2 l_e) * {-1, 0, +1}`.
///
/// The delta-derivative term would contribute `-N_j''(x_i)`, identically
/// zero for linear elements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollocationRow {
    pub node: usize,
    /// coefficients on nodes (node - 1, node, node + 1)
    pub coefficients: [f64; 3],
}

pub fn collocation_row(pe: f64, node: usize, mesh: &Mesh1D) -> Result<CollocationRow, FemvarError> {
    if node >= mesh.n_nodes() {
        return Err(FemvarError::NodeOutOfRange {
            node,
            n_nodes: mesh.n_nodes(),
        });
    }
    if mesh.is_boundary_node(node) {
        return Err(FemvarError::CollocationAtBoundary { node });
    }
    let c = pe / (2.0 * mesh.element_length());
    Ok(CollocationRow {
        node,
        coefficients: [-c, 0.0, c],
    })
}

/// Assemble the pre-constraint global system for a method. The Dirichlet
/// rows are untouched so the raw operators remain comparable (additivity
/// checks run on these).
pub fn assemble(method: MethodKind, pe: f64, mesh: &Mesh1D, rule: &QuadratureRule) -> LinearSystem {
    let n = mesh.n_nodes();
    let tau = tau_value(pe, mesh.element_length());
    let galerkin = if method.uses_galerkin_weight() {
        1.0
    } else {
        0.0
    };
    let ls_scale = method.least_squares_scale(tau);

    let mut matrix = DenseMatrix::zeros(n);
    if galerkin != 0.0 || ls_scale != 0.0 {
        for e in 0..mesh.n_elements() {
            let k = element_matrix_smooth(pe, galerkin, ls_scale, e, mesh, rule);
            let (g0, g1) = mesh.element_nodes(e);
            let global = [g0, g1];
            for i in 0..2 {
                for j in 0..2 {
                    matrix[(global[i], global[j])] += k[i][j];
                }
            }
        }
    }
    if method.uses_delta_weight() {
        // deltas centered at Dirichlet nodes would be overwritten by the
        // constraint anyway, so only interior rows receive them
        for node in 1..n - 1 {
            let row = collocation_row(pe, node, mesh).expect("interior node");
            matrix[(node, node - 1)] += row.coefficients[0];
            matrix[(node, node)] += row.coefficients[1];
            matrix[(node, node + 1)] += row.coefficients[2];
        }
    }
    LinearSystem {
        matrix,
        rhs: vec![0.0; n],
        constraints: Vec::new(),
        tau,
    }
}

/// Replace the boundary rows by identity rows with the prescribed values and
/// eliminate the boundary columns into the right-hand side, so the reduced
/// interior block is what the solver factors (and a symmetric input stays
/// symmetric there). This is consistent with dropping the boundary term of
/// the integration by parts under Dirichlet conditions.
pub fn apply_dirichlet(
    mut system: LinearSystem,
    left_value: f64,
    right_value: f64,
) -> LinearSystem {
    let n = system.matrix.size();
    assert!(n >= 2, "system needs both boundary rows");
    let last = n - 1;
    for i in 1..last {
        system.rhs[i] -=
            system.matrix[(i, 0)] * left_value + system.matrix[(i, last)] * right_value;
        system.matrix[(i, 0)] = 0.0;
        system.matrix[(i, last)] = 0.0;
    }
    for j in 0..n {
        system.matrix[(0, j)] = 0.0;
        system.matrix[(last, j)] = 0.0;
    }
    system.matrix[(0, 0)] = 1.0;
    system.matrix[(last, last)] = 1.0;
    system.rhs[0] = left_value;
    system.rhs[last] = right_value;
    system.constraints = vec![(0, left_value), (last, right_value)];
    system
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn rule2() -> QuadratureRule {
        QuadratureRule::gauss_legendre(2).unwrap()
    }

    fn assert_block_eq(got: [[f64; 2]; 2], want: [[f64; 2]; 2], tol: f64) {
        for i in 0..2 {
            for j in 0..2 {
                assert!(
                    (got[i][j] - want[i][j]).abs() <= tol,
                    "entry ({i},{j}): got {}, want {}",
                    got[i][j],
                    want[i][j]
                );
            }
        }
    }

    #[test]
    fn method_labels_round_trip() {
        for m in MethodKind::ALL {
            assert_eq!(m.label().parse::<MethodKind>().unwrap(), m);
            assert_eq!(m.label().to_lowercase().parse::<MethodKind>().unwrap(), m);
        }
        assert!("xyz".parse::<MethodKind>().is_err());
    }

    #[test]
    fn tau_closed_forms() {
        // pe = 0 leaves only the diffusive term: tau = l_e^2 / 4
        assert_relative_eq!(
            stabilization_tau(0.0, 0.04).unwrap(),
            4.0e-4,
            max_relative = 1e-14
        );
        // 40-digit evaluations of the formula at two sweep points
        assert_relative_eq!(
            stabilization_tau(1.0, 0.04).unwrap(),
            3.999_200_239_920_028e-4,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            stabilization_tau(500.0, 0.04).unwrap(),
            3.980_148_760_839_957e-5,
            max_relative = 1e-14
        );
    }

    #[test]
    fn tau_rejects_nonpositive_element_length() {
        assert!(stabilization_tau(1.0, 0.0).is_err());
        assert!(stabilization_tau(1.0, -0.1).is_err());
    }

    #[test]
    fn galerkin_element_matrix_pure_diffusion() {
        let mesh = Mesh1D::new(0.0, 2.0, 2).unwrap(); // l_e = 1
        let k = element_matrix_galerkin(0.0, 0, &mesh, &rule2());
        assert_block_eq(k, [[1.0, -1.0], [-1.0, 1.0]], 1e-14);
    }

    #[test]
    fn galerkin_element_matrix_with_convection() {
        // pe = 1, l_e = 1: convection block [[-1/2, 1/2], [-1/2, 1/2]]
        // plus diffusion [[1, -1], [-1, 1]]
        let mesh = Mesh1D::new(0.0, 2.0, 2).unwrap();
        let k = element_matrix_galerkin(1.0, 1, &mesh, &rule2());
        assert_block_eq(k, [[0.5, -0.5], [-1.5, 1.5]], 1e-14);
    }

    #[test]
    fn convection_block_rows_sum_to_zero() {
        let mesh = Mesh1D::new(1.0, 2.0, 25).unwrap();
        for pe in [0.5, 17.0, 333.0] {
            let conv_plus_diff = element_matrix_galerkin(pe, 3, &mesh, &rule2());
            let diff = element_matrix_galerkin(0.0, 3, &mesh, &rule2());
            for i in 0..2 {
                let row_sum: f64 = (0..2).map(|j| conv_plus_diff[i][j] - diff[i][j]).sum();
                assert!(row_sum.abs() <= 1e-12, "pe = {pe}, row {i}: {row_sum}");
            }
        }
    }

    #[test]
    fn least_squares_element_matrix() {
        let mesh = Mesh1D::new(0.0, 1.0, 2).unwrap(); // l_e = 0.5
        let zero = element_matrix_least_squares(0.0, 0, &mesh, &rule2());
        assert_block_eq(zero, [[0.0; 2]; 2], 0.0);

        let k = element_matrix_least_squares(2.0, 0, &mesh, &rule2());
        assert_block_eq(k, [[8.0, -8.0], [-8.0, 8.0]], 1e-12);

        let unit = Mesh1D::new(0.0, 2.0, 2).unwrap();
        let k1 = element_matrix_least_squares(1.0, 0, &unit, &rule2());
        assert_block_eq(k1, [[1.0, -1.0], [-1.0, 1.0]], 1e-14);
    }

    #[test]
    fn collocation_row_stencil() {
        let mesh = Mesh1D::new(1.0, 2.0, 4).unwrap(); // l_e = 0.25
        let row = collocation_row(1.0, 2, &mesh).unwrap();
        assert_eq!(row.coefficients, [-2.0, 0.0, 2.0]);

        let zero = collocation_row(0.0, 1, &mesh).unwrap();
        assert_eq!(zero.coefficients, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn collocation_row_rejects_boundary_nodes() {
        let mesh = Mesh1D::new(1.0, 2.0, 4).unwrap();
        assert!(matches!(
            collocation_row(1.0, 0, &mesh),
            Err(FemvarError::CollocationAtBoundary { node: 0 })
        ));
        assert!(matches!(
            collocation_row(1.0, 4, &mesh),
            Err(FemvarError::CollocationAtBoundary { node: 4 })
        ));
        assert!(collocation_row(1.0, 9, &mesh).is_err());
    }

    proptest! {
        #[test]
        fn collocation_row_sums_to_zero(pe in 0.0f64..500.0) {
            let mesh = Mesh1D::new(1.0, 2.0, 10).unwrap();
            let row = collocation_row(pe, 5, &mesh).unwrap();
            prop_assert_eq!(row.coefficients.iter().sum::<f64>(), 0.0);
        }

        #[test]
        fn tau_positive_and_nonincreasing(
            l_e in 1e-3f64..1.0,
            pe1 in 0.0f64..500.0,
            pe2 in 0.0f64..500.0,
        ) {
            let (lo, hi) = if pe1 <= pe2 { (pe1, pe2) } else { (pe2, pe1) };
            let t_lo = stabilization_tau(lo, l_e).unwrap();
            let t_hi = stabilization_tau(hi, l_e).unwrap();
            prop_assert!(t_lo > 0.0 && t_hi > 0.0);
            prop_assert!(t_hi <= t_lo);
        }
    }

    #[test]
    fn sg_at_zero_peclet_is_the_three_point_laplacian() {
        let mesh = Mesh1D::new(0.0, 1.0, 2).unwrap(); // l_e = 0.5
        let system = assemble(MethodKind::Sg, 0.0, &mesh, &rule2());
        let row: Vec<f64> = (0..3).map(|j| system.matrix[(1, j)]).collect();
        assert_relative_eq!(row[0], -2.0, max_relative = 1e-14);
        assert_relative_eq!(row[1], 4.0, max_relative = 1e-14);
        assert_relative_eq!(row[2], -2.0, max_relative = 1e-14);
    }

    #[test]
    fn tridiagonal_structure_for_smooth_weight_methods() {
        let mesh = Mesh1D::new(1.0, 2.0, 10).unwrap();
        for method in [MethodKind::Sg, MethodKind::Gls, MethodKind::Ls] {
            let system = assemble(method, 37.0, &mesh, &rule2());
            assert_eq!(system.matrix.bandwidth(), 1, "{method}");
        }
    }

    fn max_relative_gap(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
        let n = a.size();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (a[(i, j)], b[(i, j)]);
                if x == y {
                    continue;
                }
                worst = worst.max((x - y).abs() / x.abs().max(y.abs()));
            }
        }
        worst
    }

    #[test]
    fn composite_assembly_matches_summed_primitives() {
        let mesh = Mesh1D::new(1.0, 2.0, 13).unwrap();
        let rule = rule2();
        let pe = 73.5;
        let tau = stabilization_tau(pe, mesh.element_length()).unwrap();

        let a_sg = assemble(MethodKind::Sg, pe, &mesh, &rule).matrix;
        let a_c = assemble(MethodKind::C, pe, &mesh, &rule).matrix;
        let a_ls = assemble(MethodKind::Ls, pe, &mesh, &rule).matrix;

        let cases = [
            (MethodKind::Cg, a_c.add_scaled(1.0, &a_sg)),
            (MethodKind::Cls, a_c.add_scaled(tau, &a_ls)),
            (MethodKind::Gls, a_sg.add_scaled(tau, &a_ls)),
            (
                MethodKind::Cgls,
                a_c.add_scaled(1.0, &a_sg).add_scaled(tau, &a_ls),
            ),
        ];
        for (method, expected) in cases {
            let got = assemble(method, pe, &mesh, &rule).matrix;
            let gap = max_relative_gap(&got, &expected);
            assert!(gap <= 1e-13, "{method}: max relative gap {gap}");
        }
    }

    #[test]
    fn least_squares_operator_is_scaled_diffusion() {
        // A_LS = pe^2 * D, with D the assembled pure-diffusion operator
        let mesh = Mesh1D::new(1.0, 2.0, 9).unwrap();
        let rule = rule2();
        for pe in [1.0, 50.0, 500.0] {
            let a_ls = assemble(MethodKind::Ls, pe, &mesh, &rule).matrix;
            let diffusion = assemble(MethodKind::Sg, 0.0, &mesh, &rule).matrix;
            let expected = DenseMatrix::zeros(mesh.n_nodes()).add_scaled(pe * pe, &diffusion);
            assert!(max_relative_gap(&a_ls, &expected) <= 1e-13, "pe = {pe}");
        }
    }

    #[test]
    fn assembly_is_independent_of_quadrature_order() {
        let mesh = Mesh1D::new(1.0, 2.0, 7).unwrap();
        let r2 = QuadratureRule::gauss_legendre(2).unwrap();
        let r3 = QuadratureRule::gauss_legendre(3).unwrap();
        for method in MethodKind::ALL {
            let a2 = assemble(method, 42.0, &mesh, &r2).matrix;
            let a3 = assemble(method, 42.0, &mesh, &r3).matrix;
            assert!(
                max_relative_gap(&a2, &a3) <= 1e-12,
                "{method} depends on quadrature order"
            );
        }
    }

    #[test]
    fn dirichlet_rows_become_identity_rows() {
        let mesh = Mesh1D::new(1.0, 2.0, 4).unwrap();
        let system = assemble(MethodKind::Sg, 3.0, &mesh, &rule2());
        let constrained = apply_dirichlet(system, 0.0, 1.0);
        let n = constrained.matrix.size();
        for j in 0..n {
            assert_eq!(constrained.matrix[(0, j)], if j == 0 { 1.0 } else { 0.0 });
            assert_eq!(
                constrained.matrix[(n - 1, j)],
                if j == n - 1 { 1.0 } else { 0.0 }
            );
        }
        assert_eq!(constrained.rhs[0], 0.0);
        assert_eq!(constrained.rhs[n - 1], 1.0);
        assert_eq!(constrained.constraints, vec![(0, 0.0), (n - 1, 1.0)]);
        // interior rows no longer touch the boundary columns
        for i in 1..n - 1 {
            assert_eq!(constrained.matrix[(i, 0)], 0.0);
            assert_eq!(constrained.matrix[(i, n - 1)], 0.0);
        }
    }

    #[test]
    fn symmetric_matrix_stays_symmetric_on_the_interior_block() {
        // LS assembles a symmetric operator; elimination must preserve that
        let mesh = Mesh1D::new(1.0, 2.0, 6).unwrap();
        let system = assemble(MethodKind::Ls, 11.0, &mesh, &rule2());
        let constrained = apply_dirichlet(system, 0.0, 1.0);
        let n = constrained.matrix.size();
        for i in 1..n - 1 {
            for j in 1..n - 1 {
                assert_eq!(constrained.matrix[(i, j)], constrained.matrix[(j, i)]);
            }
        }
    }
}
