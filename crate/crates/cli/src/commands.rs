use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use log::info;
use sced_core::dca::dca_solve;
use sced_core::exec::{par_map, with_jobs, Execution};
use sced_core::grid::{epsilon_tradeoff, grid_search, GridSearchSpec};
use sced_core::network::{load_case, write_case, Case};
use sced_core::oracle::{oracle_solve, ORACLE_MAX_LINES};
use sced_core::report::{compare_table, summary_line, write_compare_file, write_grid_file, write_simulation, CompareRow};
use sced_core::rolling::{initial_state, simulate, update_tau, Mode};
use sced_core::synthetic::{one_bus, random_case, two_bus, SyntheticSpec};
use sced_core::Error;

use crate::{CaseArgs, CompareArgs, GenerateArgs, GridArgs, Kind, OracleArgs, RunArgs};

/// The error chain on one line. Library errors already embed their source
/// in their message, so a cause is skipped when the text so far ends with it.
pub fn describe(e: &anyhow::Error) -> String {
    let mut msg = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if msg.ends_with(&text) {
            continue;
        }
        if !msg.is_empty() {
            msg.push_str(": ");
        }
        msg.push_str(&text);
    }
    msg
}

/// 2 for problems with the inputs, 1 for everything else.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Io { .. } | Error::Parse { .. } | Error::Validation(_) | Error::InvalidArgument(_) | Error::OracleBudget { .. }) => 2,
        _ => 1,
    }
}

fn open_case(path: &Path, dt: Option<f64>) -> Result<Case> {
    let case = load_case(path)?;
    Ok(match dt {
        Some(dt) => case.with_dt(dt)?,
        None => case,
    })
}

fn scaled(args: &CaseArgs) -> Result<Case> {
    let case = open_case(&args.case, args.dt)?;
    Ok(if args.load_scale == 1.0 { case } else { case.scale_loads(args.load_scale)? })
}

pub fn run(a: RunArgs) -> Result<()> {
    let case = scaled(&a.case)?;
    let mode = Mode::from(a.mode);
    let sim = simulate(&case, mode, &a.dca.config(), 1.0)?;
    let (periods, lmp) = write_simulation(&a.out, &case, &sim)?;
    info!("wrote {} and {}", periods.display(), lmp.display());
    println!("{} {}", mode.name(), summary_line(&sim.summary));
    Ok(())
}

pub fn compare(a: CompareArgs) -> Result<()> {
    let cfg = a.dca.config();
    cfg.validate()?;
    let mut scenarios = Vec::new();
    for path in &a.cases {
        let case = open_case(path, a.dt)?;
        let stem = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
        for &scale in &a.load_scale {
            let name = if a.load_scale.len() == 1 && scale == 1.0 { stem.clone() } else { format!("{stem}@{scale}") };
            scenarios.push((name, case.scale_loads(scale)?));
        }
    }
    let rows = with_jobs(a.jobs, || {
        par_map(Execution::default(), &scenarios, |(name, case)| -> Result<CompareRow> {
            let cmp = simulate(case, Mode::Cmp, &cfg, 1.0).with_context(|| format!("scenario {name}, cmp"))?;
            let strict = simulate(case, Mode::Strict, &cfg, 1.0).with_context(|| format!("scenario {name}, strict"))?;
            Ok(CompareRow {
                scenario: name.clone(),
                cmp: cmp.summary,
                strict: strict.summary,
            })
        })
    })?
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let path = a.out.join("compare.csv");
    write_compare_file(&path, &rows)?;
    print!("{}", compare_table(&rows));
    for r in &rows {
        let change = -r.decrease_percent();
        let change = if change.abs() < 5e-3 { 0.0 } else { change };
        println!("{}: CMP cost {change:+.2}% against strict", r.scenario);
    }
    info!("wrote {}", path.display());
    Ok(())
}

pub fn grid(a: GridArgs) -> Result<()> {
    let case = scaled(&a.case)?;
    let defaults = GridSearchSpec::default();
    let pick = |given: Vec<f64>, default: Vec<f64>| if given.is_empty() { default } else { given };
    let spec = GridSearchSpec {
        epsilons: pick(a.epsilons, defaults.epsilons),
        gamma_l: pick(a.gammas_l, defaults.gamma_l),
        gamma_s: pick(a.gammas_s, defaults.gamma_s),
    };
    let base = a.iteration.config();
    let rows = with_jobs(a.jobs, || grid_search(&case, &spec, &base, 1.0, Execution::default()))??;
    let path = a.out.join("grid.csv");
    write_grid_file(&path, &rows)?;

    let failed = rows.iter().filter(|r| r.summary.is_none()).count();
    println!("{} cells, {failed} failed; best by total cost:", rows.len());
    for r in rows.iter().filter(|r| r.summary.is_some()).take(5) {
        let s = r.summary.as_ref().expect("filtered");
        println!("  eps={} gamma_l={} gamma_s={}  {}", r.epsilon, r.gamma_l, r.gamma_s, summary_line(s));
    }
    let t = epsilon_tradeoff(&rows);
    if t.pairs > 0 {
        println!(
            "smallest vs largest eps over {} (gamma_l, gamma_s) pairs: cost no lower in {}, normal-zone line-periods no fewer in {} -> tradeoff {}",
            t.pairs,
            t.cost_holds,
            t.normal_holds,
            if t.holds() { "holds" } else { "does not hold everywhere" }
        );
    }
    info!("wrote {}", path.display());
    Ok(())
}

pub fn oracle(a: OracleArgs) -> Result<()> {
    let case = scaled(&a.case)?;
    if case.lines.len() > ORACLE_MAX_LINES {
        return Err(Error::OracleBudget {
            lines: case.lines.len(),
            limit: ORACLE_MAX_LINES,
        })
        .context("refusing to enumerate zone assignments");
    }
    let cfg = a.dca.config();
    let periods: Vec<usize> = match a.period {
        Some(t) if t >= case.horizon => {
            return Err(Error::InvalidArgument(format!("period {t} is outside the horizon 0..{}", case.horizon)).into());
        }
        Some(t) => vec![t],
        None => (0..case.horizon).collect(),
    };
    // replay the CMP trajectory so each period starts from the state the
    // rolling horizon actually reaches
    let last = *periods.last().expect("horizon is non-empty");
    let reports = if last == 0 {
        Vec::new()
    } else {
        let mut trajectory = case.clone();
        trajectory.horizon = last;
        simulate(&trajectory, Mode::Cmp, &cfg, 1.0)?.reports
    };
    let mut state = initial_state(&case)?;
    let mut states = Vec::with_capacity(last + 1);
    for r in &reports {
        states.push(state.clone());
        state = update_tau(&state, &r.generation, &r.flows, &case);
    }
    states.push(state);

    let mut csv = String::from("period,oracle_objective,dca_objective,relative_gap,oracle_zones,lps_solved\n");
    println!("{:>6} {:>18} {:>18} {:>12}  zones", "period", "oracle", "dca", "gap");
    with_jobs(a.jobs, || -> Result<()> {
        for &t in &periods {
            let obs = case.observation(t);
            let exact = oracle_solve(&case, t, &obs, &states[t], &cfg, Execution::default()).with_context(|| format!("oracle, period {t}"))?;
            let dca = dca_solve(&case, t, &obs, &states[t], &cfg).with_context(|| format!("DCA, period {t}"))?;
            let value = dca.final_iterate().exact_objective;
            let gap = (value - exact.objective) / exact.objective.abs().max(1.0);
            let zones: Vec<&str> = exact.assignment.zones.iter().map(|z| z.name()).collect();
            // solver noise can put the DCA a hair below the optimum; don't print "-0.0000%"
            let shown = if gap.abs() < 5e-7 { 0.0 } else { gap };
            println!("{t:>6} {:>18.6} {value:>18.6} {:>11.4}%  {}", exact.objective, 100.0 * shown, zones.join(" "));
            let _ = writeln!(csv, "{t},{},{value},{gap},{},{}", exact.objective, zones.join(" "), exact.evaluated);
        }
        Ok(())
    })??;
    if let Some(dir) = a.out {
        fs::create_dir_all(&dir).map_err(|source| Error::Io { path: dir.clone(), source })?;
        let path = dir.join("oracle.csv");
        fs::write(&path, csv).map_err(|source| Error::Io { path: path.clone(), source })?;
        info!("wrote {}", path.display());
    }
    Ok(())
}

pub fn generate(a: GenerateArgs) -> Result<()> {
    let random = |spec: SyntheticSpec| {
        let horizon = a.horizon.unwrap_or(spec.horizon);
        random_case(a.seed, &SyntheticSpec { horizon, ..spec })
    };
    let case = match a.kind {
        Kind::TwoBus => two_bus(&a.demand),
        Kind::OneBus => one_bus(&a.demand),
        Kind::Random => random(SyntheticSpec::small()),
        Kind::RtsLike => random(SyntheticSpec::rts_like()),
    };
    case.validate()?;
    write_case(&case, &a.out)?;
    println!(
        "wrote {} ({} buses, {} lines, {} periods)",
        a.out.display(),
        case.buses.len(),
        case.lines.len(),
        case.horizon
    );
    Ok(())
}
