//! Proximal difference-of-convex algorithm for the zone-penalized dispatch.
//!
//! Each iteration linearizes the concave part `−h` of the surrogate at the
//! current flows and solves
//!
//! ```text
//! min F1(x) + c/2 ‖f − f^k‖² + γℓ Σ [g(f; ζn) − v^n f] + γs Σ [g(f; ζl) − v^l f]
//! ```
//!
//! over the period's convex constraints. `g` is modelled with one epigraph
//! variable per line and threshold (`a ≥ ±f − ζ`, `a ≥ 0`, cost `γ/ε · a`),
//! so every subproblem is a QP with a diagonal Hessian on the flows.
//! The `γs` term counts lines past the long-term threshold ζl (entry into
//! the short-term zone), the same threshold the surrogate problem uses.

pub mod surrogate;

use log::{debug, warn};

use crate::error::{Error, Result};
use crate::formulation::{apply_flow_caps, apply_ramping, build_base, effective_bounds, lmps, Dispatch, EffectiveBounds, Fragment};
use crate::network::{Case, Observation};
use crate::qp::{solve, ConvexProgram, SolveStatus, SolverOptions, SolverSolution};
use crate::rolling::DispatchState;

pub use surrogate::{
    approx_cmp_objective, exact_cmp_objective, exact_zone_penalty, exact_zone_sets, g_h_split, h_subgradient, phi, surrogate_penalty, Zone, ZoneCounts,
    ZoneSets, ZONE_TOL,
};

/// Where per-bus prices come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LmpSource {
    /// Balance-row duals of the last DCA subproblem.
    #[default]
    FinalSubproblem,
    /// Balance-row duals of an LP re-solved with every line capped at the
    /// upper threshold of the zone it ended in.
    Resolve,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DcaConfig {
    /// Width of the surrogate's linear ramp, MW.
    pub epsilon: f64,
    pub gamma_l: f64,
    pub gamma_s: f64,
    /// Proximal weight c on the flows, $/MW².
    pub prox_c: f64,
    pub tol_obj: f64,
    /// Flow-change tolerance, MW.
    pub tol_x: f64,
    pub max_iters: usize,
    pub lmp_source: LmpSource,
    pub solver: SolverOptions,
}

impl Default for DcaConfig {
    fn default() -> Self {
        DcaConfig {
            epsilon: 0.1,
            gamma_l: 0.5,
            gamma_s: 0.5,
            prox_c: 1e-3,
            tol_obj: 1e-6,
            tol_x: 1e-4,
            max_iters: 50,
            lmp_source: LmpSource::FinalSubproblem,
            solver: SolverOptions::default(),
        }
    }
}

impl DcaConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("epsilon", self.epsilon),
            ("gamma_l", self.gamma_l),
            ("gamma_s", self.gamma_s),
            ("tol_obj", self.tol_obj),
            ("tol_x", self.tol_x),
            ("solver tolerance", self.solver.tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.prox_c >= 0.0 && self.prox_c.is_finite()) {
            return Err(Error::InvalidArgument(format!("prox weight must be non-negative, got {}", self.prox_c)));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DcaIterate {
    /// F1 + γ-weighted surrogate at the iterate.
    pub approx_objective: f64,
    /// F1 + γ-weighted exact zone counts at the iterate.
    pub exact_objective: f64,
    /// ‖f − f_prev‖∞, MW. Zero for the initial point.
    pub flow_change: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DcaStatus {
    Converged,
    MaxIters,
    /// A subproblem came back with this status; the result holds the last
    /// good iterate.
    SubproblemError(SolveStatus),
}

impl DcaStatus {
    pub fn label(&self) -> &'static str {
        match self {
            DcaStatus::Converged => "converged",
            DcaStatus::MaxIters => "max_iters",
            DcaStatus::SubproblemError(_) => "subproblem_error",
        }
    }
}

#[derive(Debug, Clone)]
pub struct DcaResult {
    pub x: Vec<f64>,
    pub dispatch: Dispatch,
    /// `trace[0]` is the initial point, `trace[k]` the k-th subproblem.
    pub trace: Vec<DcaIterate>,
    /// Subproblems solved.
    pub iterations: usize,
    pub status: DcaStatus,
    /// $/MWh per bus, case order.
    pub lmp: Vec<f64>,
    pub caps: EffectiveBounds,
}

impl DcaResult {
    pub fn flows(&self) -> &[f64] {
        &self.dispatch.flows
    }

    pub fn final_iterate(&self) -> &DcaIterate {
        self.trace.last().expect("trace holds the initial point")
    }
}

/// Base constraints, ramping around `prev_gen` (if any) and flow caps.
pub fn period_fragment(case: &Case, t: usize, obs: &Observation, prev_gen: Option<&[f64]>, caps: &[f64]) -> Result<Fragment> {
    let mut frag = build_base(case, t, obs);
    if let Some(prev) = prev_gen {
        frag = apply_ramping(frag, case, prev)?;
    }
    Ok(apply_flow_caps(frag, case, caps))
}

fn add_zone_epigraphs(mut frag: Fragment, case: &Case, cfg: &DcaConfig) -> Fragment {
    let start = frag.builder.n();
    for (k, line) in case.lines.iter().enumerate() {
        let f = frag.vars.flow(k);
        for (zeta, gamma) in [(line.rating.normal, cfg.gamma_l), (line.rating.long_term, cfg.gamma_s)] {
            let a = frag.builder.add_var(0.0, f64::INFINITY, gamma / cfg.epsilon);
            frag.builder.add_le(vec![(f, 1.0), (a, -1.0)], zeta);
            frag.builder.add_le(vec![(f, -1.0), (a, -1.0)], zeta);
        }
    }
    frag.vars.zone_aux = start..frag.builder.n();
    frag
}

/// The DCA subproblem linearized at `fk`.
fn subproblem(with_aux: &Fragment, case: &Case, cfg: &DcaConfig, fk: &[f64]) -> ConvexProgram {
    let mut b = with_aux.builder.clone();
    for (k, line) in case.lines.iter().enumerate() {
        let f = with_aux.vars.flow(k);
        let vn = h_subgradient(fk[k], line.rating.normal, cfg.epsilon);
        let vl = h_subgradient(fk[k], line.rating.long_term, cfg.epsilon);
        b.add_cost(f, -cfg.gamma_l * vn - cfg.gamma_s * vl - cfg.prox_c * fk[k]);
        if cfg.prox_c > 0.0 {
            b.add_quad_diag(f, cfg.prox_c);
            b.add_constant(0.5 * cfg.prox_c * fk[k] * fk[k]);
        }
    }
    b.build()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn solve_lp(frag: &Fragment, cfg: &DcaConfig) -> Result<(ConvexProgram, SolverSolution)> {
    let prog = frag.builder.build();
    let sol = solve(&prog, &cfg.solver)?;
    Ok((prog, sol))
}

/// Prices from an LP with each line capped at the top of the zone its flow
/// ended in (never above the period's effective cap).
fn resolve_lmps(case: &Case, t: usize, obs: &Observation, state: &DispatchState, caps: &EffectiveBounds, flows: &[f64], cfg: &DcaConfig) -> Result<Vec<f64>> {
    let regime: Vec<f64> = case
        .lines
        .iter()
        .enumerate()
        .map(|(k, line)| Zone::of(flows[k], &line.rating).cap(&line.rating).min(caps.caps[k]))
        .collect();
    let frag = period_fragment(case, t, obs, Some(&state.prev_gen), &regime)?;
    let (prog, sol) = solve_lp(&frag, cfg)?;
    let sol = sol.require_optimal("LMP re-solve")?;
    Ok(lmps(case, &prog, &sol))
}

/// Runs the DCA for period `t` from `state`.
///
/// Errors only when the initial LP (period constraints, no zone penalties)
/// has no optimal solution; a failing subproblem ends the run early with
/// [`DcaStatus::SubproblemError`] and the last good iterate.
pub fn dca_solve(case: &Case, t: usize, obs: &Observation, state: &DispatchState, cfg: &DcaConfig) -> Result<DcaResult> {
    cfg.validate()?;
    let caps = effective_bounds(case, &state.tau_l, &state.tau_s);
    let frag = period_fragment(case, t, obs, Some(&state.prev_gen), &caps.caps)?;

    let (init_prog, init_sol) = solve_lp(&frag, cfg)?;
    let init_sol = init_sol.require_optimal("initial dispatch")?;
    let mut x = init_sol.x.clone();
    let mut dispatch = Dispatch::from_solution(&frag.vars, &x);
    let mut lmp = lmps(case, &init_prog, &init_sol);
    let (approx, _) = approx_cmp_objective(&dispatch, obs, case, cfg);
    let mut trace = vec![DcaIterate {
        approx_objective: approx,
        exact_objective: exact_cmp_objective(&dispatch, obs, case, cfg),
        flow_change: 0.0,
    }];

    let with_aux = add_zone_epigraphs(frag, case, cfg);
    let mut status = DcaStatus::MaxIters;
    let mut iterations = 0;
    while iterations < cfg.max_iters {
        let prog = subproblem(&with_aux, case, cfg, &dispatch.flows);
        let sol = solve(&prog, &cfg.solver)?;
        if !sol.is_optimal() {
            warn!("period {t}: DCA subproblem {} returned {:?}", iterations + 1, sol.status);
            status = DcaStatus::SubproblemError(sol.status);
            break;
        }
        iterations += 1;
        let next = Dispatch::from_solution(&with_aux.vars, &sol.x);
        let change = max_abs_diff(&next.flows, &dispatch.flows);
        let (approx, _) = approx_cmp_objective(&next, obs, case, cfg);
        let it = DcaIterate {
            approx_objective: approx,
            exact_objective: exact_cmp_objective(&next, obs, case, cfg),
            flow_change: change,
        };
        debug!(
            "period {t} DCA {iterations}: approx {:.6} exact {:.6} |df| {:.3e}",
            it.approx_objective, it.exact_objective, it.flow_change
        );
        let prev = trace.last().unwrap().approx_objective;
        trace.push(it);
        x = sol.x[..with_aux.vars.zone_aux.start].to_vec();
        dispatch = next;
        lmp = lmps(case, &prog, &sol);
        if (approx - prev).abs() <= cfg.tol_obj * approx.abs().max(1.0) || change <= cfg.tol_x {
            status = DcaStatus::Converged;
            break;
        }
    }

    if cfg.lmp_source == LmpSource::Resolve {
        lmp = resolve_lmps(case, t, obs, state, &caps, &dispatch.flows, cfg)?;
    }
    Ok(DcaResult {
        x,
        dispatch,
        trace,
        iterations,
        status,
        lmp,
        caps,
    })
}
