//! The piecewise-linear surrogate of the exceedance indicator and its
//! difference-of-convex split.
//!
//! For a threshold `ζ` and width `ε`,
//!
//! ```text
//! g(f) = max((|f| − ζ)/ε, 0)
//! h(f) = max((|f| − ζ)/ε − 1, 0)
//! φ(f) = g(f) − h(f)
//! ```
//!
//! `h` has its kinks at `f = ±(ζ + ε)`, so its subdifferential is `{−1/ε}`
//! left of `−(ζ+ε)`, `{0}` strictly between the kinks, `{1/ε}` right of
//! `ζ+ε`, and an interval at each kink. The breakpoints `ζ ± ε` printed in
//! some statements of the algorithm describe no function in this family;
//! the kinks of `h` are the ones that matter for the linearization.

use crate::formulation::{operating_cost, CostBreakdown, Dispatch};
use crate::network::{Case, Observation, Rating};

use super::DcaConfig;

/// Flows within this many MW of a threshold count as on it. Interior point
/// solutions sit at caps only up to solver accuracy.
pub const ZONE_TOL: f64 = 1e-6;

pub fn phi(f: f64, zeta: f64, eps: f64) -> f64 {
    let a = f.abs();
    if a <= zeta {
        0.0
    } else if a <= zeta + eps {
        (a - zeta) / eps
    } else {
        1.0
    }
}

pub fn g_h_split(f: f64, zeta: f64, eps: f64) -> (f64, f64) {
    let slope = (f.abs() - zeta) / eps;
    (slope.max(0.0), (slope - 1.0).max(0.0))
}

/// An element of `∂h(f)`; 0 at the kinks.
pub fn h_subgradient(f: f64, zeta: f64, eps: f64) -> f64 {
    let kink = zeta + eps;
    if f > kink {
        1.0 / eps
    } else if f < -kink {
        -1.0 / eps
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Zone {
    Normal,
    LongTerm,
    ShortTerm,
}

impl Zone {
    pub const ALL: [Zone; 3] = [Zone::Normal, Zone::LongTerm, Zone::ShortTerm];

    pub fn of(flow: f64, rating: &Rating) -> Zone {
        let a = flow.abs();
        if a > rating.long_term + ZONE_TOL {
            Zone::ShortTerm
        } else if a > rating.normal + ZONE_TOL {
            Zone::LongTerm
        } else {
            Zone::Normal
        }
    }

    /// Upper threshold of the zone.
    pub fn cap(self, rating: &Rating) -> f64 {
        match self {
            Zone::Normal => rating.normal,
            Zone::LongTerm => rating.long_term,
            Zone::ShortTerm => rating.short_term,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Zone::Normal => "normal",
            Zone::LongTerm => "lte",
            Zone::ShortTerm => "ste",
        }
    }
}

/// Lines beyond their normal threshold (`lte`) and beyond their LTE
/// threshold (`ste`), as indices into `case.lines`. `ste ⊆ lte`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ZoneSets {
    pub lte: Vec<usize>,
    pub ste: Vec<usize>,
}

pub fn exact_zone_sets(flows: &[f64], case: &Case) -> ZoneSets {
    let mut sets = ZoneSets::default();
    for (k, line) in case.lines.iter().enumerate() {
        match Zone::of(flows[k], &line.rating) {
            Zone::Normal => {}
            Zone::LongTerm => sets.lte.push(k),
            Zone::ShortTerm => {
                sets.lte.push(k);
                sets.ste.push(k);
            }
        }
    }
    sets
}

/// Number of lines in each zone; sums to the line count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ZoneCounts {
    pub normal: usize,
    pub lte: usize,
    pub ste: usize,
}

impl ZoneCounts {
    pub fn of(flows: &[f64], case: &Case) -> Self {
        let sets = exact_zone_sets(flows, case);
        ZoneCounts {
            normal: case.lines.len() - sets.lte.len(),
            lte: sets.lte.len() - sets.ste.len(),
            ste: sets.ste.len(),
        }
    }

    pub fn total(&self) -> usize {
        self.normal + self.lte + self.ste
    }
}

/// `γℓ |E_l| + γs |E_s|`.
pub fn exact_zone_penalty(flows: &[f64], case: &Case, cfg: &DcaConfig) -> f64 {
    let sets = exact_zone_sets(flows, case);
    cfg.gamma_l * sets.lte.len() as f64 + cfg.gamma_s * sets.ste.len() as f64
}

/// `γℓ Σ φ(f; ζn) + γs Σ φ(f; ζl)`.
pub fn surrogate_penalty(flows: &[f64], case: &Case, cfg: &DcaConfig) -> f64 {
    case.lines
        .iter()
        .zip(flows)
        .map(|(line, &f)| {
            cfg.gamma_l * phi(f, line.rating.normal, cfg.epsilon) + cfg.gamma_s * phi(f, line.rating.long_term, cfg.epsilon)
        })
        .sum()
}

/// F1 + F2 with exact zone counts.
pub fn exact_cmp_objective(d: &Dispatch, obs: &Observation, case: &Case, cfg: &DcaConfig) -> f64 {
    operating_cost(case, obs, d).total() + exact_zone_penalty(&d.flows, case, cfg)
}

/// F1 + surrogate penalty: the objective the DCA decreases.
pub fn approx_cmp_objective(d: &Dispatch, obs: &Observation, case: &Case, cfg: &DcaConfig) -> (f64, CostBreakdown) {
    let cost = operating_cost(case, obs, d);
    (cost.total() + surrogate_penalty(&d.flows, case, cfg), cost)
}
