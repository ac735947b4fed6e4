//! Rolling-horizon simulation: one dispatch per period, with generator
//! output and emergency-duration counters carried forward.

use log::{info, warn};

use crate::dca::{dca_solve, DcaConfig, DcaStatus, ZoneCounts};
use crate::error::Result;
use crate::formulation::{lmps, operating_cost, strict_model, CostBreakdown, Dispatch};
use crate::network::Case;
use crate::qp::solve;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Zone-penalized dispatch solved by the DCA.
    Cmp,
    /// Every line held inside its normal rating.
    Strict,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Cmp => "cmp",
            Mode::Strict => "strict",
        }
    }
}

/// State carried into a period.
#[derive(Debug, Clone, PartialEq)]
pub struct DispatchState {
    pub prev_gen: Vec<f64>,
    pub prev_flow: Vec<f64>,
    /// Consecutive periods above ζn, saturating at T_l.
    pub tau_l: Vec<usize>,
    /// Consecutive periods above ζl, saturating at T_s.
    pub tau_s: Vec<usize>,
}

/// Generation from the strict model at t = 0 without ramping, flows from
/// the same solve, all counters zero.
pub fn initial_state(case: &Case) -> Result<DispatchState> {
    let obs = case.observation(0);
    let (prog, vars) = strict_model(case, 0, &obs, None)?;
    let sol = solve(&prog, &Default::default())?.require_optimal("initial state")?;
    let d = Dispatch::from_solution(&vars, &sol.x);
    Ok(DispatchState {
        prev_gen: d.generation,
        prev_flow: d.flows,
        tau_l: vec![0; case.lines.len()],
        tau_s: vec![0; case.lines.len()],
    })
}

/// Advances the counters with the accepted flows and records the period's
/// generation and flows.
pub fn update_tau(state: &DispatchState, generation: &[f64], flows: &[f64], case: &Case) -> DispatchState {
    let step = |tau: usize, f: f64, zeta: f64, limit: usize| {
        if f.abs() <= zeta + crate::dca::ZONE_TOL {
            0
        } else {
            (tau + 1).min(limit)
        }
    };
    let (tau_l, tau_s) = case
        .lines
        .iter()
        .enumerate()
        .map(|(k, line)| {
            (
                step(state.tau_l[k], flows[k], line.rating.normal, case.lte_limit),
                step(state.tau_s[k], flows[k], line.rating.long_term, case.ste_limit),
            )
        })
        .unzip();
    DispatchState {
        prev_gen: generation.to_vec(),
        prev_flow: flows.to_vec(),
        tau_l,
        tau_s,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodReport {
    pub period: usize,
    pub cost: CostBreakdown,
    pub zones: ZoneCounts,
    /// $/MWh per bus, case order.
    pub lmp: Vec<f64>,
    pub dca_iterations: usize,
    pub status: &'static str,
    pub generation: Vec<f64>,
    pub flows: Vec<f64>,
}

impl PeriodReport {
    pub fn operating_cost(&self) -> f64 {
        self.cost.total()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub periods: usize,
    pub lines: usize,
    pub total_cost: f64,
    /// MWh.
    pub total_shed: f64,
    pub normal_line_periods: usize,
    pub lte_line_periods: usize,
    pub ste_line_periods: usize,
    pub dca_iterations: usize,
}

impl Summary {
    pub fn from_reports(reports: &[PeriodReport], lines: usize) -> Self {
        Summary {
            periods: reports.len(),
            lines,
            total_cost: reports.iter().map(|r| r.operating_cost()).sum(),
            total_shed: reports.iter().map(|r| r.cost.shed_energy).sum(),
            normal_line_periods: reports.iter().map(|r| r.zones.normal).sum(),
            lte_line_periods: reports.iter().map(|r| r.zones.lte).sum(),
            ste_line_periods: reports.iter().map(|r| r.zones.ste).sum(),
            dca_iterations: reports.iter().map(|r| r.dca_iterations).sum(),
        }
    }

    /// Time-averaged (normal, lte, ste) line counts.
    pub fn average_zones(&self) -> (f64, f64, f64) {
        let n = self.periods.max(1) as f64;
        (
            self.normal_line_periods as f64 / n,
            self.lte_line_periods as f64 / n,
            self.ste_line_periods as f64 / n,
        )
    }
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub mode: Mode,
    pub reports: Vec<PeriodReport>,
    pub summary: Summary,
}

fn strict_period(case: &Case, t: usize, state: &DispatchState) -> Result<PeriodReport> {
    let obs = case.observation(t);
    let (prog, vars) = strict_model(case, t, &obs, Some(&state.prev_gen))?;
    let sol = solve(&prog, &Default::default())?.require_optimal("strict dispatch")?;
    let d = Dispatch::from_solution(&vars, &sol.x);
    Ok(PeriodReport {
        period: t,
        cost: operating_cost(case, &obs, &d),
        zones: ZoneCounts::of(&d.flows, case),
        lmp: lmps(case, &prog, &sol),
        dca_iterations: 0,
        status: "optimal",
        generation: d.generation,
        flows: d.flows,
    })
}

fn cmp_period(case: &Case, t: usize, state: &DispatchState, cfg: &DcaConfig) -> Result<PeriodReport> {
    let obs = case.observation(t);
    let r = dca_solve(case, t, &obs, state, cfg)?;
    if let DcaStatus::SubproblemError(s) = r.status {
        warn!("period {t}: keeping the last good DCA iterate after a {s:?} subproblem");
    }
    Ok(PeriodReport {
        period: t,
        cost: operating_cost(case, &obs, &r.dispatch),
        zones: ZoneCounts::of(&r.dispatch.flows, case),
        lmp: r.lmp,
        dca_iterations: r.iterations,
        status: r.status.label(),
        generation: r.dispatch.generation,
        flows: r.dispatch.flows,
    })
}

/// Runs every period of `case` (demand scaled by `load_scale`) in order.
/// A period without an optimal dispatch aborts the run with an error that
/// names the period.
pub fn simulate(case: &Case, mode: Mode, cfg: &DcaConfig, load_scale: f64) -> Result<Simulation> {
    cfg.validate()?;
    let case = if load_scale == 1.0 { case.clone() } else { case.scale_loads(load_scale)? };
    case.validate()?;
    let mut state = initial_state(&case).map_err(|e| e.at_period(0))?;
    let mut reports = Vec::with_capacity(case.horizon);
    for t in 0..case.horizon {
        let report = match mode {
            Mode::Strict => strict_period(&case, t, &state),
            Mode::Cmp => cmp_period(&case, t, &state, cfg),
        }
        .map_err(|e| e.at_period(t))?;
        info!(
            "{} period {t}: cost {:.2} shed {:.3} zones {}/{}/{}",
            mode.name(),
            report.operating_cost(),
            report.cost.shed_energy,
            report.zones.normal,
            report.zones.lte,
            report.zones.ste
        );
        state = update_tau(&state, &report.generation, &report.flows, &case);
        reports.push(report);
    }
    let summary = Summary::from_reports(&reports, case.lines.len());
    Ok(Simulation { mode, reports, summary })
}

/// Longest run of consecutive periods each line spends above ζn and above
/// ζl, as `(lte_run, ste_run)` per line.
pub fn longest_emergency_runs(case: &Case, reports: &[PeriodReport]) -> Vec<(usize, usize)> {
    case.lines
        .iter()
        .enumerate()
        .map(|(k, line)| {
            let (mut run_l, mut run_s, mut best_l, mut best_s) = (0, 0, 0, 0);
            for r in reports {
                let a = r.flows[k].abs();
                run_l = if a > line.rating.normal + crate::dca::ZONE_TOL { run_l + 1 } else { 0 };
                run_s = if a > line.rating.long_term + crate::dca::ZONE_TOL { run_s + 1 } else { 0 };
                best_l = best_l.max(run_l);
                best_s = best_s.max(run_s);
            }
            (best_l, best_s)
        })
        .collect()
}
