//! Closed-form solution of `T_xx = Pe * T_x` with `T(a) = 0`, `T(b) = 1`.
//!
//! This is the verification oracle for every discrete method in the crate:
//! `T(x) = (e^{Pe (x-a)} - 1) / (e^{Pe (b-a)} - 1)`, which reduces to a
//! straight line as the Peclet number goes to zero and develops a boundary
//! layer at `x = b` that thins as the Peclet number grows.

use crate::error::FemvarError;

/// Below this value of `pe * (b - a)` the closed form is evaluated as its
/// linear limit `(x - a) / (b - a)`. The switch exists for the exact 0/0 at
/// `pe = 0`; `exp_m1` keeps full relative accuracy arbitrarily far down, and
/// at this threshold the two branches agree to ~2e-11 (the true deviation
/// from the line is `pe * (b-a) / 8` at worst).
pub const LINEAR_LIMIT_THRESHOLD: f64 = 1e-10;

/// Above this value of `pe * (b - a)`, `exp` overflows f64; construction is
/// rejected with a diagnostic instead of returning infinities.
pub const OVERFLOW_LIMIT: f64 = 700.0;

/// Validated parameters of the closed-form solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactSolution {
    pe: f64,
    a: f64,
    b: f64,
}

/// Result of the finite-difference self-check, see
/// [`ExactSolution::ode_residual`].
#[derive(Debug, Clone, Copy)]
pub struct OdeResidual {
    /// max over samples of |T_xx - Pe * T_x|, both by central differences
    pub max_abs_residual: f64,
    /// max over samples of |T_xx| by central differences
    pub max_abs_t_xx: f64,
}

impl OdeResidual {
    /// Residual relative to the second-derivative scale.
    pub fn relative(&self) -> f64 {
        self.max_abs_residual / self.max_abs_t_xx
    }
}

impl ExactSolution {
    pub fn new(pe: f64, a: f64, b: f64) -> Result<Self, FemvarError> {
        if !(b > a) {
            return Err(FemvarError::InvalidDomain { a, b });
        }
        if !(pe >= 0.0) {
            return Err(FemvarError::NegativePeclet(pe));
        }
        let exponent = pe * (b - a);
        if exponent > OVERFLOW_LIMIT {
            return Err(FemvarError::PecletOverflow(exponent));
        }
        Ok(ExactSolution { pe, a, b })
    }

    pub fn pe(&self) -> f64 {
        self.pe
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Evaluate the solution; `x` must lie in `[a, b]`.
    pub fn evaluate(&self, x: f64) -> Result<f64, FemvarError> {
        if x < self.a || x > self.b {
            return Err(FemvarError::CoordinateOutOfDomain {
                x,
                a: self.a,
                b: self.b,
            });
        }
        Ok(self.value_unchecked(x))
    }

    fn value_unchecked(&self, x: f64) -> f64 {
        let span = self.b - self.a;
        if self.pe * span < LINEAR_LIMIT_THRESHOLD {
            (x - self.a) / span
        } else {
            // exp_m1 keeps full relative accuracy for small exponents
            f64::exp_m1(self.pe * (x - self.a)) / f64::exp_m1(self.pe * span)
        }
    }

    /// Central-difference check that the closed form satisfies the ODE.
    ///
    /// Samples `n_samples` points uniformly over the interior of
    /// `[a, a + (1 - tail_exclusion) * (b - a)]`; excluding a tail fraction
    /// keeps the finite differences out of the steepest part of the boundary
    /// layer, where h^2 truncation error is amplified by Pe^4.
    pub fn ode_residual(&self, n_samples: usize, fd_step: f64, tail_exclusion: f64) -> OdeResidual {
        assert!(n_samples > 0, "need at least one sample");
        assert!(
            (0.0..1.0).contains(&tail_exclusion),
            "tail exclusion must be a fraction in [0, 1)"
        );
        let span = (self.b - self.a) * (1.0 - tail_exclusion);
        let step = span / (n_samples + 1) as f64;
        assert!(
            fd_step > 0.0 && fd_step < step,
            "fd_step must keep x +- fd_step strictly interior"
        );
        let mut max_abs_residual = 0.0f64;
        let mut max_abs_t_xx = 0.0f64;
        for k in 1..=n_samples {
            let x = self.a + step * k as f64;
            let f_m = self.value_unchecked(x - fd_step);
            let f_0 = self.value_unchecked(x);
            let f_p = self.value_unchecked(x + fd_step);
            let t_x = (f_p - f_m) / (2.0 * fd_step);
            let t_xx = (f_p - 2.0 * f_0 + f_m) / (fd_step * fd_step);
            max_abs_residual = max_abs_residual.max((t_xx - self.pe * t_x).abs());
            max_abs_t_xx = max_abs_t_xx.max(t_xx.abs());
        }
        OdeResidual {
            max_abs_residual,
            max_abs_t_xx,
        }
    }
}
