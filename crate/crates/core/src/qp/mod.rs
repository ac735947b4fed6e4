//! Dense convex quadratic programming.
//!
//! Problems have the form
//!
//! ```text
//! minimize    ½ xᵀQx + qᵀx + c0
//! subject to  A x = b,   G x <= h,   lb <= x <= ub
//! ```
//!
//! and are solved by a Mehrotra predictor-corrector interior point method
//! followed by an active-set polish. Multipliers use the shadow-price sign
//! convention: at an optimum
//!
//! ```text
//! Qx + q - Aᵀy + Gᵀz - z_lb + z_ub = 0,   z, z_lb, z_ub >= 0
//! ```
//!
//! so `y[i]` is the rate of change of the optimal value with `b[i]`.

mod builder;
mod ipm;

use nalgebra::{DMatrix, DVector};

pub use builder::ProgramBuilder;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ConvexProgram {
    pub quad: DMatrix<f64>,
    pub linear: DVector<f64>,
    pub constant_cost: f64,
    pub a_eq: DMatrix<f64>,
    pub b_eq: DVector<f64>,
    pub g: DMatrix<f64>,
    pub h: DVector<f64>,
    pub lb: DVector<f64>,
    pub ub: DVector<f64>,
    /// Optional label per equality row.
    pub eq_tags: Vec<Option<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    NumericalFailure,
}

/// Scaled KKT residuals of a candidate solution.
///
/// `primal` is divided by `1 + ` the largest right-hand side or finite bound,
/// `dual` by `1 + ‖q‖∞`. `complementarity` sums `|multiplier·slack|` over
/// every constraint (for an LP this is the duality gap) and is divided by
/// `1 + |objective|`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KktResiduals {
    pub primal: f64,
    pub dual: f64,
    pub complementarity: f64,
}

impl KktResiduals {
    pub fn max(&self) -> f64 {
        self.primal.max(self.dual).max(self.complementarity)
    }
}

#[derive(Debug, Clone)]
pub struct SolverSolution {
    pub status: SolveStatus,
    pub x: Vec<f64>,
    pub eq_duals: Vec<f64>,
    pub ineq_duals: Vec<f64>,
    pub lower_duals: Vec<f64>,
    pub upper_duals: Vec<f64>,
    pub objective: f64,
    pub kkt: KktResiduals,
    pub iterations: usize,
}

impl SolverSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    /// Converts a non-optimal status into an error.
    pub fn require_optimal(self, context: &str) -> Result<Self> {
        if self.is_optimal() {
            Ok(self)
        } else {
            Err(Error::solver(self.status, context))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-8,
            max_iters: 100,
        }
    }
}

impl ConvexProgram {
    pub fn n(&self) -> usize {
        self.linear.len()
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        let x = DVector::from_column_slice(x);
        0.5 * x.dot(&(&self.quad * &x)) + self.linear.dot(&x) + self.constant_cost
    }

    /// Row index of the first equality carrying `tag`.
    pub fn eq_row(&self, tag: &str) -> Option<usize> {
        self.eq_tags.iter().position(|t| t.as_deref() == Some(tag))
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        let bad = |msg: String| Err(Error::InvalidProgram(msg));
        if self.quad.shape() != (n, n) {
            return bad(format!("Q is {:?}, expected {n}x{n}", self.quad.shape()));
        }
        if self.a_eq.ncols() != n || self.a_eq.nrows() != self.b_eq.len() {
            return bad("equality block dimensions disagree".into());
        }
        if self.eq_tags.len() != self.b_eq.len() {
            return bad("one tag slot per equality row required".into());
        }
        if self.g.ncols() != n || self.g.nrows() != self.h.len() {
            return bad("inequality block dimensions disagree".into());
        }
        if self.lb.len() != n || self.ub.len() != n {
            return bad("bound vectors must have length n".into());
        }
        for i in 0..n {
            if !(self.lb[i] <= self.ub[i]) || self.lb[i] == f64::INFINITY || self.ub[i] == f64::NEG_INFINITY {
                return bad(format!("bounds of x[{i}] are [{}, {}]", self.lb[i], self.ub[i]));
            }
        }
        let finite = self.quad.iter().all(|v| v.is_finite())
            && self.linear.iter().all(|v| v.is_finite())
            && self.a_eq.iter().all(|v| v.is_finite())
            && self.b_eq.iter().all(|v| v.is_finite())
            && self.g.iter().all(|v| v.is_finite())
            && self.h.iter().all(|v| v.is_finite());
        if !finite {
            return bad("program data must be finite".into());
        }
        let norm = self.quad.norm();
        if norm > 0.0 {
            let asym = (&self.quad - self.quad.transpose()).amax();
            if asym > 1e-12 * norm {
                return bad(format!("Q is not symmetric (max asymmetry {asym:e})"));
            }
            let shifted = &self.quad + DMatrix::identity(n, n) * (1e-12 * norm);
            if shifted.cholesky().is_none() {
                return bad("Q is not positive semidefinite".into());
            }
        }
        Ok(())
    }

    /// Scaled KKT residuals of `(x, y, z, z_lb, z_ub)` against this program.
    pub fn kkt_residuals(
        &self,
        x: &[f64],
        y: &[f64],
        z: &[f64],
        z_lb: &[f64],
        z_ub: &[f64],
    ) -> KktResiduals {
        let xv = DVector::from_column_slice(x);
        let yv = DVector::from_column_slice(y);
        let zv = DVector::from_column_slice(z);

        let eq = &self.a_eq * &xv - &self.b_eq;
        let gx = &self.g * &xv;
        let mut primal = eq.amax();
        let mut comp: f64 = 0.0;
        for i in 0..self.h.len() {
            let slack = self.h[i] - gx[i];
            primal = primal.max(-slack);
            comp += (z[i] * slack).abs();
        }
        let mut scale: f64 = self.b_eq.amax().max(self.h.amax());
        for i in 0..x.len() {
            if self.lb[i].is_finite() {
                primal = primal.max(self.lb[i] - x[i]);
                comp += (z_lb[i] * (x[i] - self.lb[i])).abs();
                scale = scale.max(self.lb[i].abs());
            }
            if self.ub[i].is_finite() {
                primal = primal.max(x[i] - self.ub[i]);
                comp += (z_ub[i] * (self.ub[i] - x[i])).abs();
                scale = scale.max(self.ub[i].abs());
            }
        }

        let mut stat = &self.quad * &xv + &self.linear - self.a_eq.tr_mul(&yv) + self.g.tr_mul(&zv);
        for i in 0..x.len() {
            stat[i] += z_ub[i] - z_lb[i];
        }
        let sign = z
            .iter()
            .chain(z_lb)
            .chain(z_ub)
            .fold(0.0f64, |m, v| m.max(-v));
        let dual = stat.amax().max(sign);

        let obj = self.objective(x);
        KktResiduals {
            primal: primal / (1.0 + scale),
            dual: dual / (1.0 + self.linear.amax()),
            complementarity: comp / (1.0 + obj.abs()),
        }
    }
}

/// Solves `prog`. Errors only when the program violates its invariants;
/// every solver outcome is reported through [`SolverSolution::status`].
pub fn solve(prog: &ConvexProgram, opts: &SolverOptions) -> Result<SolverSolution> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument("solver tolerance must be positive".into()));
    }
    prog.validate()?;
    Ok(ipm::solve(prog, opts))
}
