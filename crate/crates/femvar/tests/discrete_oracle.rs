//! Closed-form nodal solutions of the discrete schemes.
//!
//! On a uniform grid the constrained stencils have constant coefficients,
//! so their solutions are known analytically and independently of both the
//! assembly/solve pipeline and the continuum solution:
//!
//! - SG reduces to the central-difference scheme with nodal ratio
//!   `r = (1 + g) / (1 - g)`, `g = Pe l_e / 2`, giving
//!   `T_i = (r^i - 1) / (r^N - 1)`;
//! - GLS is the same scheme with `g` divided by `1 + tau Pe^2`;
//! - pure collocation at an odd element count chains even-indexed nodes to
//!   the left boundary value and odd-indexed nodes to the right one.
//!
//! These catch any sign or orientation slip in assembly that the
//! continuum-oracle comparisons could mask.

use femvar::analysis::run_case;
use femvar::assembly::MethodKind;
use femvar::quadrature::QuadratureRule;

const DOMAIN: (f64, f64) = (1.0, 2.0);

fn nodal_ratio_solution(r: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|i| (r.powi(i as i32) - 1.0) / (r.powi(n as i32) - 1.0))
        .collect()
}

fn assert_matches(solution: &[f64], expected: &[f64], label: &str) {
    for (i, (got, want)) in solution.iter().zip(expected).enumerate() {
        let scale = want.abs().max(1e-300);
        assert!(
            (got - want).abs() / scale <= 1e-12 || (got - want).abs() <= 1e-15,
            "{label}: node {i}: got {got:e}, closed form {want:e}"
        );
    }
}

#[test]
fn galerkin_matches_the_central_difference_closed_form() {
    let rule = QuadratureRule::gauss_legendre(2).unwrap();
    for (pe, n) in [(100.0, 75usize), (1.0, 25), (50.0, 100)] {
        let g = pe / (2.0 * n as f64);
        let r = (1.0 + g) / (1.0 - g);
        let case = run_case(MethodKind::Sg, pe, n, DOMAIN, &rule).unwrap();
        assert_matches(
            &case.solution.unwrap(),
            &nodal_ratio_solution(r, n),
            &format!("SG pe={pe} N={n}"),
        );
    }
}

#[test]
fn oscillatory_galerkin_has_the_negative_ratio() {
    // g = 10 > 1: r = -11/9, alternating signs
    let rule = QuadratureRule::gauss_legendre(2).unwrap();
    let case = run_case(MethodKind::Sg, 500.0, 25, DOMAIN, &rule).unwrap();
    let r = (1.0 + 10.0) / (1.0 - 10.0);
    let expected = nodal_ratio_solution(r, 25);
    assert!(expected.iter().any(|v| *v < 0.0), "closed form oscillates");
    assert_matches(&case.solution.unwrap(), &expected, "SG pe=500 N=25");
}

#[test]
fn gls_matches_the_effective_diffusion_closed_form() {
    let rule = QuadratureRule::gauss_legendre(2).unwrap();
    let (pe, n) = (100.0f64, 75usize);
    // tau at l_e = 1/75: 1 / sqrt(15000^2 + 22500^2) = 1 / (7500 sqrt(13))
    let tau = 1.0 / (7500.0 * 13.0f64.sqrt());
    let g = (pe / (2.0 * n as f64)) / (1.0 + tau * pe * pe);
    let r = (1.0 + g) / (1.0 - g);
    let case = run_case(MethodKind::Gls, pe, n, DOMAIN, &rule).unwrap();
    assert!((case.tau - tau).abs() <= 1e-15 * tau);
    assert_matches(
        &case.solution.unwrap(),
        &nodal_ratio_solution(r, n),
        "GLS pe=100 N=75",
    );
}

#[test]
fn collocation_at_odd_counts_splits_into_parity_chains() {
    let rule = QuadratureRule::gauss_legendre(2).unwrap();
    for (pe, n) in [(100.0, 25usize), (500.0, 75)] {
        let case = run_case(MethodKind::C, pe, n, DOMAIN, &rule).unwrap();
        assert!(!case.singular, "odd counts are solvable");
        let solution = case.solution.unwrap();
        for (i, value) in solution.iter().enumerate() {
            let want = if i % 2 == 0 { 0.0 } else { 1.0 };
            assert!(
                (value - want).abs() <= 1e-12,
                "C pe={pe} N={n}: node {i}: got {value}, want {want}"
            );
        }
    }
}
