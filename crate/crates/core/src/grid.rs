//! Hyperparameter sweep over (ε, γℓ, γs).

use crate::dca::DcaConfig;
use crate::error::{Error, Result};
use crate::exec::{par_map, Execution};
use crate::network::Case;
use crate::rolling::{simulate, Mode, Summary};

#[derive(Debug, Clone, PartialEq)]
pub struct GridSearchSpec {
    pub epsilons: Vec<f64>,
    pub gamma_l: Vec<f64>,
    pub gamma_s: Vec<f64>,
}

impl Default for GridSearchSpec {
    /// ε ∈ {1e-4, …, 1}, γℓ and γs ∈ {0.1, 0.2, …, 1.0}: 500 cells.
    fn default() -> Self {
        let gammas: Vec<f64> = (1..=10).map(|k| k as f64 / 10.0).collect();
        GridSearchSpec {
            epsilons: (0..5).map(|k| 10f64.powi(k - 4)).collect(),
            gamma_l: gammas.clone(),
            gamma_s: gammas,
        }
    }
}

impl GridSearchSpec {
    pub fn single(epsilon: f64, gamma_l: f64, gamma_s: f64) -> Self {
        GridSearchSpec {
            epsilons: vec![epsilon],
            gamma_l: vec![gamma_l],
            gamma_s: vec![gamma_s],
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, list) in [("epsilon", &self.epsilons), ("gamma-l", &self.gamma_l), ("gamma-s", &self.gamma_s)] {
            if list.is_empty() {
                return Err(Error::InvalidArgument(format!("{name} list is empty")));
            }
            if let Some(v) = list.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
                return Err(Error::InvalidArgument(format!("{name} values must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Every (ε, γℓ, γs) combination, ε outermost.
    pub fn cells(&self) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::with_capacity(self.epsilons.len() * self.gamma_l.len() * self.gamma_s.len());
        for &e in &self.epsilons {
            for &l in &self.gamma_l {
                for &s in &self.gamma_s {
                    out.push((e, l, s));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub epsilon: f64,
    pub gamma_l: f64,
    pub gamma_s: f64,
    /// `None` when the simulation failed; `status` then holds the error.
    pub summary: Option<Summary>,
    pub status: String,
}

impl GridRow {
    pub fn total_cost(&self) -> f64 {
        self.summary.as_ref().map_or(f64::INFINITY, |s| s.total_cost)
    }
}

/// Runs a CMP simulation per cell. Failed cells become rows with an error
/// status. Rows are sorted by total cost, ties broken by (ε, γℓ, γs).
pub fn grid_search(case: &Case, spec: &GridSearchSpec, base: &DcaConfig, load_scale: f64, exec: Execution) -> Result<Vec<GridRow>> {
    spec.validate()?;
    let cells = spec.cells();
    let mut rows = par_map(exec, &cells, |&(epsilon, gamma_l, gamma_s)| {
        let cfg = DcaConfig {
            epsilon,
            gamma_l,
            gamma_s,
            ..*base
        };
        let (summary, status) = match simulate(case, Mode::Cmp, &cfg, load_scale) {
            Ok(sim) => (Some(sim.summary), "ok".to_string()),
            Err(e) => (None, format!("error: {e}")),
        };
        GridRow {
            epsilon,
            gamma_l,
            gamma_s,
            summary,
            status,
        }
    });
    rows.sort_by(|a, b| {
        a.total_cost()
            .total_cmp(&b.total_cost())
            .then(a.epsilon.total_cmp(&b.epsilon))
            .then(a.gamma_l.total_cmp(&b.gamma_l))
            .then(a.gamma_s.total_cmp(&b.gamma_s))
    });
    Ok(rows)
}

/// How often the sweep shows the expected ε tradeoff: at each (γℓ, γs)
/// pair, the smallest ε costs at least as much as the largest ε and keeps
/// at least as many line-periods in the normal zone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EpsilonTradeoff {
    pub pairs: usize,
    pub cost_holds: usize,
    pub normal_holds: usize,
}

impl EpsilonTradeoff {
    pub fn holds(&self) -> bool {
        self.cost_holds == self.pairs && self.normal_holds == self.pairs
    }
}

pub fn epsilon_tradeoff(rows: &[GridRow]) -> EpsilonTradeoff {
    let eps_min = rows.iter().map(|r| r.epsilon).fold(f64::INFINITY, f64::min);
    let eps_max = rows.iter().map(|r| r.epsilon).fold(f64::NEG_INFINITY, f64::max);
    let mut out = EpsilonTradeoff {
        pairs: 0,
        cost_holds: 0,
        normal_holds: 0,
    };
    if eps_min == eps_max {
        return out;
    }
    for small in rows.iter().filter(|r| r.epsilon == eps_min) {
        let large = rows
            .iter()
            .find(|r| r.epsilon == eps_max && r.gamma_l == small.gamma_l && r.gamma_s == small.gamma_s);
        let (Some(a), Some(b)) = (small.summary.as_ref(), large.and_then(|r| r.summary.as_ref())) else {
            continue;
        };
        out.pairs += 1;
        // relative slack for solver noise in otherwise equal costs
        if a.total_cost >= b.total_cost - 1e-7 * b.total_cost.abs().max(1.0) {
            out.cost_holds += 1;
        }
        if a.normal_line_periods >= b.normal_line_periods {
            out.normal_holds += 1;
        }
    }
    out
}
