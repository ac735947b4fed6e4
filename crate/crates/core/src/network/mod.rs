//! Power system description: buses, lines with tiered thermal ratings,
//! dispatchable generators, renewable sources and loads.
//!
//! A [`Case`] is immutable once validated and can be shared across threads.

mod io;

use std::collections::{HashMap, HashSet};
use std::fmt;

pub use io::{load_case, write_case};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BusId(pub u32);

impl fmt::Display for BusId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bus {
    pub id: BusId,
    /// Phase-angle bounds in radians.
    pub theta_min: f64,
    pub theta_max: f64,
}

impl Bus {
    pub fn new(id: u32) -> Self {
        Bus {
            id: BusId(id),
            theta_min: -std::f64::consts::FRAC_PI_2,
            theta_max: std::f64::consts::FRAC_PI_2,
        }
    }
}

/// Upper thresholds (MW) of the normal, long-term emergency and short-term
/// emergency operating zones. Always `normal < long_term < short_term`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rating {
    pub normal: f64,
    pub long_term: f64,
    pub short_term: f64,
}

impl Rating {
    pub fn new(normal: f64, long_term: f64, short_term: f64) -> Self {
        Rating {
            normal,
            long_term,
            short_term,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    pub id: String,
    pub from: BusId,
    pub to: BusId,
    /// Series reactance; flow is `(theta_from - theta_to) / reactance`.
    pub reactance: f64,
    pub rating: Rating,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub id: String,
    pub bus: BusId,
    pub p_min: f64,
    pub p_max: f64,
    /// $/MWh
    pub cost: f64,
    /// Largest decrease per period (MW, `<= 0`, may be `-inf`).
    pub ramp_min: f64,
    /// Largest increase per period (MW, `>= 0`, may be `+inf`).
    pub ramp_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenewableSource {
    pub id: String,
    pub bus: BusId,
    /// Curtailment penalty, $/MWh.
    pub penalty: f64,
    /// Available output per period, MW.
    pub availability: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Load {
    pub id: String,
    pub bus: BusId,
    /// Value of lost load, $/MWh.
    pub penalty: f64,
    /// Demand per period, MW.
    pub demand: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Case {
    pub buses: Vec<Bus>,
    pub lines: Vec<Line>,
    pub generators: Vec<Generator>,
    pub renewables: Vec<RenewableSource>,
    pub loads: Vec<Load>,
    /// Number of periods in the horizon.
    pub horizon: usize,
    /// Period length in hours.
    pub dt: f64,
    /// Periods a line may stay above its normal rating.
    pub lte_limit: usize,
    /// Periods a line may stay above its long-term rating.
    pub ste_limit: usize,
}

/// Realized renewable availability and demand for one period, indexed like
/// `Case::renewables` and `Case::loads`.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub renewable: Vec<f64>,
    pub demand: Vec<f64>,
}

impl Case {
    /// Checks every structural invariant, returning the first violation.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Validation(msg));

        if self.buses.is_empty() {
            return fail("case has no buses".into());
        }
        let mut bus_ids = HashSet::new();
        for bus in &self.buses {
            if !bus_ids.insert(bus.id) {
                return fail(format!("duplicate bus id {}", bus.id));
            }
            if !(bus.theta_min <= bus.theta_max) {
                return fail(format!(
                    "bus {}: angle bounds [{}, {}] are not ordered",
                    bus.id, bus.theta_min, bus.theta_max
                ));
            }
        }
        let known = |id: BusId| bus_ids.contains(&id);

        let mut line_ids = HashSet::new();
        for line in &self.lines {
            if !line_ids.insert(line.id.as_str()) {
                return fail(format!("duplicate line id {}", line.id));
            }
            if line.from == line.to {
                return fail(format!("line {}: from and to bus are both {}", line.id, line.from));
            }
            for end in [line.from, line.to] {
                if !known(end) {
                    return fail(format!("line {}: unknown bus {}", line.id, end));
                }
            }
            if !(line.reactance > 0.0 && line.reactance.is_finite()) {
                return fail(format!("line {}: reactance must be positive", line.id));
            }
            let r = line.rating;
            if !(0.0 < r.normal && r.normal < r.long_term && r.long_term < r.short_term)
                || !r.short_term.is_finite()
            {
                return fail(format!(
                    "line {}: threshold ordering requires 0 < zeta_n < zeta_l < zeta_s, got ({}, {}, {})",
                    line.id, r.normal, r.long_term, r.short_term
                ));
            }
        }

        let mut gen_ids = HashSet::new();
        for g in &self.generators {
            if !gen_ids.insert(g.id.as_str()) {
                return fail(format!("duplicate generator id {}", g.id));
            }
            if !known(g.bus) {
                return fail(format!("generator {}: unknown bus {}", g.id, g.bus));
            }
            if !(0.0 <= g.p_min && g.p_min <= g.p_max && g.p_max.is_finite()) {
                return fail(format!(
                    "generator {}: capacity requires 0 <= pmin <= pmax, got [{}, {}]",
                    g.id, g.p_min, g.p_max
                ));
            }
            if !(g.ramp_min <= 0.0 && 0.0 <= g.ramp_max) {
                return fail(format!(
                    "generator {}: ramp limits require ramp_min <= 0 <= ramp_max",
                    g.id
                ));
            }
            if !g.cost.is_finite() {
                return fail(format!("generator {}: cost must be finite", g.id));
            }
        }

        let mut ren_ids = HashSet::new();
        for r in &self.renewables {
            if !ren_ids.insert(r.id.as_str()) {
                return fail(format!("duplicate renewable id {}", r.id));
            }
            if !known(r.bus) {
                return fail(format!("renewable {}: unknown bus {}", r.id, r.bus));
            }
            if !(r.penalty >= 0.0 && r.penalty.is_finite()) {
                return fail(format!("renewable {}: penalty must be non-negative", r.id));
            }
            check_series(&r.id, "availability", &r.availability, self.horizon)?;
        }

        let mut load_ids = HashSet::new();
        for d in &self.loads {
            if !load_ids.insert(d.id.as_str()) {
                return fail(format!("duplicate load id {}", d.id));
            }
            if !known(d.bus) {
                return fail(format!("load {}: unknown bus {}", d.id, d.bus));
            }
            if !(d.penalty >= 0.0 && d.penalty.is_finite()) {
                return fail(format!("load {}: penalty must be non-negative", d.id));
            }
            check_series(&d.id, "demand", &d.demand, self.horizon)?;
        }

        if self.horizon == 0 {
            return fail("horizon must have at least one period".into());
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return fail(format!("dt must be positive, got {}", self.dt));
        }
        if self.lte_limit < 1 || self.ste_limit < 1 {
            return fail("T_l and T_s must be at least 1".into());
        }
        if self.ste_limit > self.lte_limit {
            return fail(format!(
                "T_s ({}) must not exceed T_l ({})",
                self.ste_limit, self.lte_limit
            ));
        }
        Ok(())
    }

    /// Position of each bus in `self.buses`.
    pub fn bus_positions(&self) -> HashMap<BusId, usize> {
        self.buses.iter().enumerate().map(|(i, b)| (b.id, i)).collect()
    }

    /// Realized data for period `t`.
    pub fn observation(&self, t: usize) -> Observation {
        Observation {
            renewable: self.renewables.iter().map(|r| r.availability[t]).collect(),
            demand: self.loads.iter().map(|d| d.demand[t]).collect(),
        }
    }

    /// Same case with every demand series multiplied by `factor`.
    pub fn scale_loads(&self, factor: f64) -> Result<Case> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "load scale factor must be positive, got {factor}"
            )));
        }
        let mut scaled = self.clone();
        for load in &mut scaled.loads {
            load.demand.iter_mut().for_each(|d| *d *= factor);
        }
        Ok(scaled)
    }

    pub fn with_dt(&self, dt: f64) -> Result<Case> {
        let mut case = self.clone();
        case.dt = dt;
        case.validate()?;
        Ok(case)
    }

    /// Total demand in period `t`, MW.
    pub fn total_demand(&self, t: usize) -> f64 {
        self.loads.iter().map(|d| d.demand[t]).sum()
    }
}

fn check_series(id: &str, what: &str, series: &[f64], horizon: usize) -> Result<()> {
    if series.len() < horizon {
        return Err(Error::Validation(format!(
            "{id}: {what} series has {} values, horizon needs {horizon}",
            series.len()
        )));
    }
    if let Some(v) = series.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
        return Err(Error::Validation(format!(
            "{id}: {what} series contains invalid value {v}"
        )));
    }
    Ok(())
}
