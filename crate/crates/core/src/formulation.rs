//! Convex pieces of the dispatch model: operating cost, flow balance, DC
//! power flow, thermal caps, ramping and duration-derived caps.
//!
//! Every program emitted here is a plain LP; the DCA module adds the
//! proximal term and zone-penalty epigraphs on top of a [`Fragment`].

use std::ops::Range;

use crate::error::{Error, Result};
use crate::network::{Case, Observation};
use crate::qp::{ConvexProgram, ProgramBuilder, SolverSolution};

/// Index layout of the decision vector. Every block is a contiguous range
/// and the ranges tile `0..total()` in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableMap {
    pub generation: Range<usize>,
    pub renewable: Range<usize>,
    /// Epigraph of the curtailment `(ξ_g − p_g)+`.
    pub curtailment: Range<usize>,
    pub served: Range<usize>,
    /// Epigraph of the unmet demand `(ξ_d − p_d)+`.
    pub shed: Range<usize>,
    pub flow: Range<usize>,
    pub angle: Range<usize>,
    /// Zone-penalty epigraphs appended by the DCA subproblem (empty otherwise).
    pub zone_aux: Range<usize>,
}

impl VariableMap {
    pub fn total(&self) -> usize {
        self.zone_aux.end
    }

    pub fn flow(&self, line: usize) -> usize {
        self.flow.start + line
    }
}

/// A program under construction together with its variable layout.
#[derive(Debug, Clone)]
pub struct Fragment {
    pub builder: ProgramBuilder,
    pub vars: VariableMap,
}

/// Per-line cap on `|f|` for one period, always one of the line's three
/// thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveBounds {
    pub caps: Vec<f64>,
}

pub fn flow_balance_tag(bus: impl std::fmt::Display) -> String {
    format!("flow_balance:{bus}")
}

fn block(b: &mut ProgramBuilder, count: usize, mut var: impl FnMut(&mut ProgramBuilder, usize) -> usize) -> Range<usize> {
    let start = b.n();
    for k in 0..count {
        var(b, k);
    }
    start..b.n()
}

/// Operating cost, network constraints and the STE cap for period `t`.
pub fn build_base(case: &Case, t: usize, obs: &Observation) -> Fragment {
    debug_assert!(t < case.horizon);
    let dt = case.dt;
    let mut b = ProgramBuilder::new();

    let generation = block(&mut b, case.generators.len(), |b, k| {
        let g = &case.generators[k];
        b.add_var(g.p_min, g.p_max, dt * g.cost)
    });
    let renewable = block(&mut b, case.renewables.len(), |b, k| b.add_var(0.0, obs.renewable[k], 0.0));
    let curtailment = block(&mut b, case.renewables.len(), |b, k| {
        b.add_var(0.0, f64::INFINITY, dt * case.renewables[k].penalty)
    });
    let served = block(&mut b, case.loads.len(), |b, k| b.add_var(0.0, obs.demand[k], 0.0));
    let shed = block(&mut b, case.loads.len(), |b, k| {
        b.add_var(0.0, f64::INFINITY, dt * case.loads[k].penalty)
    });
    let flow = block(&mut b, case.lines.len(), |b, k| {
        let cap = case.lines[k].rating.short_term;
        b.add_var(-cap, cap, 0.0)
    });
    let reference = case.buses.iter().map(|bus| bus.id).min();
    let angle = block(&mut b, case.buses.len(), |b, k| {
        let bus = &case.buses[k];
        if Some(bus.id) == reference {
            b.add_var(0.0, 0.0, 0.0)
        } else {
            b.add_var(bus.theta_min, bus.theta_max, 0.0)
        }
    });
    let n = b.n();

    for k in 0..case.renewables.len() {
        b.add_le(vec![(renewable.start + k, -1.0), (curtailment.start + k, -1.0)], -obs.renewable[k]);
    }
    for k in 0..case.loads.len() {
        b.add_le(vec![(served.start + k, -1.0), (shed.start + k, -1.0)], -obs.demand[k]);
    }

    let pos = case.bus_positions();
    let mut balance: Vec<Vec<(usize, f64)>> = vec![Vec::new(); case.buses.len()];
    for (k, g) in case.generators.iter().enumerate() {
        balance[pos[&g.bus]].push((generation.start + k, 1.0));
    }
    for (k, r) in case.renewables.iter().enumerate() {
        balance[pos[&r.bus]].push((renewable.start + k, 1.0));
    }
    for (k, d) in case.loads.iter().enumerate() {
        balance[pos[&d.bus]].push((served.start + k, -1.0));
    }
    for (k, line) in case.lines.iter().enumerate() {
        balance[pos[&line.from]].push((flow.start + k, -1.0));
        balance[pos[&line.to]].push((flow.start + k, 1.0));
    }
    for (bus, row) in case.buses.iter().zip(balance) {
        b.add_eq(row, 0.0, Some(flow_balance_tag(bus.id)));
    }
    for (k, line) in case.lines.iter().enumerate() {
        let susceptance = 1.0 / line.reactance;
        b.add_eq(
            vec![
                (flow.start + k, 1.0),
                (angle.start + pos[&line.from], -susceptance),
                (angle.start + pos[&line.to], susceptance),
            ],
            0.0,
            None,
        );
    }

    Fragment {
        builder: b,
        vars: VariableMap {
            generation,
            renewable,
            curtailment,
            served,
            shed,
            flow,
            angle,
            zone_aux: n..n,
        },
    }
}

/// Intersects each generator's capacity with its ramping window around
/// `prev_gen`.
pub fn apply_ramping(mut frag: Fragment, case: &Case, prev_gen: &[f64]) -> Result<Fragment> {
    for (k, g) in case.generators.iter().enumerate() {
        let lo = g.p_min.max(prev_gen[k] + g.ramp_min);
        let hi = g.p_max.min(prev_gen[k] + g.ramp_max);
        if lo > hi {
            // a hair of overlap lost to rounding is not a corrupt state
            if lo - hi > 1e-9 * (1.0 + lo.abs()) {
                return Err(Error::EmptyInterval {
                    generator: g.id.clone(),
                    lo: prev_gen[k] + g.ramp_min,
                    hi: prev_gen[k] + g.ramp_max,
                });
            }
            frag.builder.set_bounds(frag.vars.generation.start + k, hi, hi);
        } else {
            frag.builder.set_bounds(frag.vars.generation.start + k, lo, hi);
        }
    }
    Ok(frag)
}

/// Cap on `|f|` implied by the emergency-duration counters: the normal
/// threshold once the LTE allowance is used up, else the LTE threshold once
/// the STE allowance is used up, else the STE threshold.
pub fn effective_bounds(case: &Case, tau_l: &[usize], tau_s: &[usize]) -> EffectiveBounds {
    let caps = case
        .lines
        .iter()
        .enumerate()
        .map(|(k, line)| {
            if tau_l[k] >= case.lte_limit {
                line.rating.normal
            } else if tau_s[k] >= case.ste_limit {
                line.rating.long_term
            } else {
                line.rating.short_term
            }
        })
        .collect();
    EffectiveBounds { caps }
}

/// Tightens every flow bound to `±min(cap, ζs)`.
pub fn apply_flow_caps(mut frag: Fragment, case: &Case, caps: &[f64]) -> Fragment {
    for (k, line) in case.lines.iter().enumerate() {
        let cap = caps[k].min(line.rating.short_term);
        frag.builder.set_bounds(frag.vars.flow(k), -cap, cap);
    }
    frag
}

/// The baseline model that keeps every line inside its normal rating.
/// `prev_gen = None` drops the ramping constraints.
pub fn strict_model(case: &Case, t: usize, obs: &Observation, prev_gen: Option<&[f64]>) -> Result<(ConvexProgram, VariableMap)> {
    let mut frag = build_base(case, t, obs);
    if let Some(prev) = prev_gen {
        frag = apply_ramping(frag, case, prev)?;
    }
    let normal: Vec<f64> = case.lines.iter().map(|l| l.rating.normal).collect();
    let frag = apply_flow_caps(frag, case, &normal);
    Ok((frag.builder.build(), frag.vars))
}

/// Physical quantities of a solved period.
#[derive(Debug, Clone, PartialEq)]
pub struct Dispatch {
    pub generation: Vec<f64>,
    pub renewable: Vec<f64>,
    pub served: Vec<f64>,
    pub flows: Vec<f64>,
    pub angles: Vec<f64>,
}

impl Dispatch {
    pub fn from_solution(vars: &VariableMap, x: &[f64]) -> Self {
        let take = |r: &Range<usize>| x[r.clone()].to_vec();
        Dispatch {
            generation: take(&vars.generation),
            renewable: take(&vars.renewable),
            served: take(&vars.served),
            flows: take(&vars.flow),
            angles: take(&vars.angle),
        }
    }
}

/// Components of the operating cost F1 of one period, in dollars.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CostBreakdown {
    pub generation: f64,
    pub curtailment: f64,
    pub shed: f64,
    /// Unserved energy, MWh.
    pub shed_energy: f64,
}

impl CostBreakdown {
    pub fn total(&self) -> f64 {
        self.generation + self.curtailment + self.shed
    }
}

/// Evaluates F1 directly from the dispatch (not from epigraph variables).
/// Sums start from `+0.0`: an empty `f64` sum is `-0.0`, which would leak
/// into the CSV files as `-0`.
pub fn operating_cost(case: &Case, obs: &Observation, d: &Dispatch) -> CostBreakdown {
    let dt = case.dt;
    let generation = dt * case.generators.iter().zip(&d.generation).map(|(g, p)| g.cost * p).fold(0.0, |a, b| a + b);
    let curtailment = dt
        * case
            .renewables
            .iter()
            .enumerate()
            .map(|(k, r)| r.penalty * (obs.renewable[k] - d.renewable[k]).max(0.0))
            .fold(0.0, |a, b| a + b);
    let unserved: Vec<f64> = (0..case.loads.len()).map(|k| (obs.demand[k] - d.served[k]).max(0.0)).collect();
    let shed = dt * case.loads.iter().zip(&unserved).map(|(l, u)| l.penalty * u).fold(0.0, |a, b| a + b);
    CostBreakdown {
        generation,
        curtailment,
        shed,
        shed_energy: dt * unserved.iter().fold(0.0, |a, b| a + b),
    }
}

/// Locational marginal prices in $/MWh, one per bus in case order, read
/// from the tagged flow-balance duals.
pub fn lmps(case: &Case, prog: &ConvexProgram, sol: &SolverSolution) -> Vec<f64> {
    case.buses
        .iter()
        .map(|bus| {
            let row = prog.eq_row(&flow_balance_tag(bus.id)).expect("every bus has a balance row");
            sol.eq_duals[row] / case.dt
        })
        .collect()
}
