//! Seeded synthetic cases: hand-sized fixtures and random connected
//! networks, including one with the cardinalities of the RTS-96 update
//! (73 buses, 108 lines, 158 generators).

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::network::{Bus, BusId, Case, Generator, Line, Load, Rating, RenewableSource};

/// One generator (cost 10 $/MWh, 0..100 MW, unlimited ramping) at bus 1
/// feeding a load (shed penalty 1000 $/MWh) at bus 2 over a single line
/// with X = 0.1 rated (50, 70, 90). dt = 1 h, T_l = 16, T_s = 1.
///
/// Angle bounds are ±100 rad so that only the thermal ratings bind.
pub fn two_bus(demand: &[f64]) -> Case {
    let wide = |id| Bus {
        id: BusId(id),
        theta_min: -100.0,
        theta_max: 100.0,
    };
    Case {
        buses: vec![wide(1), wide(2)],
        lines: vec![Line {
            id: "L1".into(),
            from: BusId(1),
            to: BusId(2),
            reactance: 0.1,
            rating: Rating::new(50.0, 70.0, 90.0),
        }],
        generators: vec![Generator {
            id: "G1".into(),
            bus: BusId(1),
            p_min: 0.0,
            p_max: 100.0,
            cost: 10.0,
            ramp_min: f64::NEG_INFINITY,
            ramp_max: f64::INFINITY,
        }],
        renewables: vec![],
        loads: vec![Load {
            id: "D1".into(),
            bus: BusId(2),
            penalty: 1000.0,
            demand: demand.to_vec(),
        }],
        horizon: demand.len(),
        dt: 1.0,
        lte_limit: 16,
        ste_limit: 1,
    }
}

/// A single bus with a 50 MW generator (cost 10) and a load that sheds at
/// 1000 $/MWh.
pub fn one_bus(demand: &[f64]) -> Case {
    let mut case = two_bus(demand);
    case.buses.truncate(1);
    case.lines.clear();
    case.generators[0].p_max = 50.0;
    case.loads[0].bus = BusId(1);
    case
}

#[derive(Debug, Clone)]
pub struct SyntheticSpec {
    pub buses: usize,
    pub lines: usize,
    pub generators: usize,
    pub renewables: usize,
    pub loads: usize,
    pub horizon: usize,
    pub dt: f64,
    pub lte_limit: usize,
    pub ste_limit: usize,
    /// Peak system demand, MW.
    pub peak_demand: f64,
    /// Normal ratings are drawn around this fraction of the peak demand
    /// divided by the number of buses that carry load.
    pub rating_fraction: f64,
}

impl SyntheticSpec {
    /// A few buses, a single period.
    pub fn small() -> Self {
        SyntheticSpec {
            buses: 5,
            lines: 7,
            generators: 4,
            renewables: 1,
            loads: 3,
            horizon: 1,
            dt: 1.0,
            lte_limit: 16,
            ste_limit: 1,
            peak_demand: 300.0,
            rating_fraction: 0.8,
        }
    }

    /// The RTS-96 update's cardinalities over one day at 15-minute
    /// resolution.
    pub fn rts_like() -> Self {
        SyntheticSpec {
            buses: 73,
            lines: 108,
            generators: 158,
            renewables: 20,
            loads: 51,
            horizon: 96,
            dt: 0.25,
            lte_limit: 16,
            ste_limit: 1,
            peak_demand: 8_500.0,
            rating_fraction: 1.0,
        }
    }
}

/// Demand shape over one day with morning and evening peaks, normalized to
/// a maximum of 1. `periods` samples are spread uniformly over 24 h.
pub fn daily_profile(periods: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..periods)
        .map(|k| {
            let hour = 24.0 * k as f64 / periods.max(1) as f64;
            let bump = |centre: f64, width: f64| (-((hour - centre) / width).powi(2)).exp();
            0.55 + 0.3 * bump(8.0, 2.5) + 0.45 * bump(17.5, 2.5)
        })
        .collect();
    let peak = raw.iter().cloned().fold(f64::MIN, f64::max);
    raw.into_iter().map(|v| v / peak).collect()
}

/// A random connected network. Reproducible from `seed`.
pub fn random_case(seed: u64, spec: &SyntheticSpec) -> Case {
    assert!(spec.buses >= 1 && spec.loads >= 1 && spec.generators >= 1);
    assert!(spec.lines + 1 >= spec.buses, "too few lines to connect the buses");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids: Vec<BusId> = (1..=spec.buses as u32).map(BusId).collect();
    let buses = ids.iter().map(|&id| Bus::new(id.0)).collect();

    // random spanning tree, then extra edges between distinct bus pairs
    let mut edges: Vec<(usize, usize)> = (1..spec.buses).map(|i| (rng.random_range(0..i), i)).collect();
    let max_edges = spec.buses * (spec.buses - 1) / 2;
    while edges.len() < spec.lines.min(max_edges) {
        let a = rng.random_range(0..spec.buses);
        let b = rng.random_range(0..spec.buses);
        if a != b && !edges.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a)) {
            edges.push((a.min(b), a.max(b)));
        }
    }
    // parallel circuits once every pair is used
    while edges.len() < spec.lines {
        let e = edges[rng.random_range(0..edges.len())];
        edges.push(e);
    }

    let load_buses: Vec<usize> = (0..spec.loads).map(|_| rng.random_range(0..spec.buses)).collect();
    let profile = daily_profile(spec.horizon);
    let weights: Vec<f64> = (0..spec.loads).map(|_| rng.random_range(0.5..1.5)).collect();
    let wsum: f64 = weights.iter().sum();
    let loads = (0..spec.loads)
        .map(|k| {
            let peak = spec.peak_demand * weights[k] / wsum;
            Load {
                id: format!("D{}", k + 1),
                bus: ids[load_buses[k]],
                penalty: 1000.0,
                demand: profile.iter().map(|s| peak * s).collect(),
            }
        })
        .collect();

    let per_line = spec.peak_demand / spec.loads.min(spec.buses) as f64 * spec.rating_fraction;
    let lines = edges
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| {
            let normal = per_line * rng.random_range(0.6..1.4);
            Line {
                id: format!("L{}", k + 1),
                from: ids[a],
                to: ids[b],
                reactance: rng.random_range(0.001..0.004),
                rating: Rating::new(normal, normal * rng.random_range(1.1..1.3), normal * rng.random_range(1.35..1.6)),
            }
        })
        .collect();

    let capacity = 1.3 * spec.peak_demand / spec.generators as f64;
    let generators = (0..spec.generators)
        .map(|k| {
            let p_max = capacity * rng.random_range(0.5..1.5);
            let ramp = p_max * rng.random_range(0.3..1.0);
            Generator {
                id: format!("G{}", k + 1),
                bus: ids[rng.random_range(0..spec.buses)],
                p_min: 0.0,
                p_max,
                cost: rng.random_range(5.0..60.0),
                ramp_min: -ramp,
                ramp_max: ramp,
            }
        })
        .collect();

    let renewables = (0..spec.renewables)
        .map(|k| {
            let size = 0.1 * spec.peak_demand / spec.renewables as f64;
            let phase = rng.random_range(0.0..2.0 * PI);
            RenewableSource {
                id: format!("R{}", k + 1),
                bus: ids[rng.random_range(0..spec.buses)],
                penalty: 300.0,
                availability: (0..spec.horizon)
                    .map(|t| size * (0.5 + 0.5 * (phase + t as f64 * 0.3).sin()))
                    .collect(),
            }
        })
        .collect();

    Case {
        buses,
        lines,
        generators,
        renewables,
        loads,
        horizon: spec.horizon,
        dt: spec.dt,
        lte_limit: spec.lte_limit,
        ste_limit: spec.ste_limit,
    }
}

/// Random network with the RTS-96 update's cardinalities.
pub fn rts_like(seed: u64) -> Case {
    random_case(seed, &SyntheticSpec::rts_like())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_validate() {
        two_bus(&[80.0, 40.0]).validate().unwrap();
        one_bus(&[80.0]).validate().unwrap();
    }

    #[test]
    fn random_cases_are_valid_and_connected() {
        for seed in 0..30 {
            let case = random_case(seed, &SyntheticSpec::small());
            case.validate().unwrap();
            let pos = case.bus_positions();
            let mut seen = vec![false; case.buses.len()];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(b) = stack.pop() {
                for l in &case.lines {
                    let (x, y) = (pos[&l.from], pos[&l.to]);
                    for (u, v) in [(x, y), (y, x)] {
                        if u == b && !seen[v] {
                            seen[v] = true;
                            stack.push(v);
                        }
                    }
                }
            }
            assert!(seen.iter().all(|s| *s), "seed {seed} disconnected");
        }
    }

    #[test]
    fn same_seed_same_case() {
        assert_eq!(random_case(3, &SyntheticSpec::small()), random_case(3, &SyntheticSpec::small()));
        assert_ne!(random_case(3, &SyntheticSpec::small()), random_case(4, &SyntheticSpec::small()));
    }

    #[test]
    fn rts_like_has_the_reference_system_cardinalities() {
        let case = rts_like(1);
        case.validate().unwrap();
        assert_eq!((case.buses.len(), case.lines.len(), case.generators.len()), (73, 108, 158));
        assert_eq!(case.horizon, 96);
    }

    #[test]
    fn profile_peaks_at_one() {
        let p = daily_profile(96);
        assert_eq!(p.len(), 96);
        assert!((p.iter().cloned().fold(0.0, f64::max) - 1.0).abs() < 1e-15);
        assert!(p.iter().all(|v| *v > 0.0));
    }
}
