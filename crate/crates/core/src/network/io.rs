//! Text case format.
//!
//! ```text
//! [meta]
//! T,dt,T_l,T_s
//! 96,0.25,16,1
//! [buses]
//! id,theta_min,theta_max
//! 1,-1.5707963267948966,1.5707963267948966
//! [lines]
//! id,from,to,x,zeta_n,zeta_l,zeta_s
//! [generators]
//! id,bus,pmin,pmax,cost,ramp_min,ramp_max
//! [renewables]
//! id,bus,penalty,series_file
//! [loads]
//! id,bus,penalty,series_file
//! ```
//!
//! The column-header row under each section is optional when reading and
//! always written. Blank lines and lines starting with `#` are ignored.
//! Empty angle bounds default to ±π/2. Series files hold one decimal value
//! per line and are resolved relative to the case file's directory.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{Bus, BusId, Case, Generator, Line, Load, Rating, RenewableSource};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Meta,
    Buses,
    Lines,
    Generators,
    Renewables,
    Loads,
}

impl Section {
    fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "meta" => Section::Meta,
            "buses" => Section::Buses,
            "lines" => Section::Lines,
            "generators" => Section::Generators,
            "renewables" => Section::Renewables,
            "loads" => Section::Loads,
            _ => return None,
        })
    }

    fn header(self) -> &'static str {
        match self {
            Section::Meta => "T,dt,T_l,T_s",
            Section::Buses => "id,theta_min,theta_max",
            Section::Lines => "id,from,to,x,zeta_n,zeta_l,zeta_s",
            Section::Generators => "id,bus,pmin,pmax,cost,ramp_min,ramp_max",
            Section::Renewables | Section::Loads => "id,bus,penalty,series_file",
        }
    }

    fn columns(self) -> usize {
        self.header().split(',').count()
    }
}

struct Reader<'a> {
    path: &'a Path,
    line: usize,
}

impl Reader<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.to_path_buf(),
            line: self.line,
            message: message.into(),
        }
    }

    fn num(&self, field: &str, name: &str) -> Result<f64> {
        field
            .trim()
            .parse::<f64>()
            .map_err(|_| self.err(format!("{name}: cannot parse {field:?} as a number")))
    }

    fn count(&self, field: &str, name: &str) -> Result<usize> {
        field
            .trim()
            .parse::<usize>()
            .map_err(|_| self.err(format!("{name}: cannot parse {field:?} as a count")))
    }

    fn bus(&self, field: &str, name: &str) -> Result<BusId> {
        field
            .trim()
            .parse::<u32>()
            .map(BusId)
            .map_err(|_| self.err(format!("{name}: cannot parse {field:?} as a bus id")))
    }

    fn angle_or(&self, field: &str, default: f64) -> Result<f64> {
        if field.trim().is_empty() {
            Ok(default)
        } else {
            self.num(field, "theta")
        }
    }
}

/// Reads and validates a case file together with its series files.
pub fn load_case(path: impl AsRef<Path>) -> Result<Case> {
    let path = path.as_ref();
    let text = read(path)?;
    let base = path.parent().unwrap_or(Path::new("."));

    let mut case = Case {
        buses: vec![],
        lines: vec![],
        generators: vec![],
        renewables: vec![],
        loads: vec![],
        horizon: 0,
        dt: 0.0,
        lte_limit: 0,
        ste_limit: 0,
    };
    let mut seen_meta = false;
    let mut section: Option<Section> = None;
    let mut reader = Reader { path, line: 0 };

    for (i, raw) in text.lines().enumerate() {
        reader.line = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let s = Section::parse(name.trim())
                .ok_or_else(|| reader.err(format!("unknown section [{name}]")))?;
            if s == Section::Meta && seen_meta {
                return Err(reader.err("duplicate [meta] section"));
            }
            section = Some(s);
            continue;
        }
        let Some(s) = section else {
            return Err(reader.err("data before the first section header"));
        };
        let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == s.header() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != s.columns() {
            return Err(reader.err(format!(
                "[{s:?}] row needs {} fields ({}), found {}",
                s.columns(),
                s.header(),
                fields.len()
            )));
        }
        let r = &reader;
        match s {
            Section::Meta => {
                if seen_meta {
                    return Err(r.err("[meta] holds a single data row"));
                }
                case.horizon = r.count(fields[0], "T")?;
                case.dt = r.num(fields[1], "dt")?;
                case.lte_limit = r.count(fields[2], "T_l")?;
                case.ste_limit = r.count(fields[3], "T_s")?;
                seen_meta = true;
            }
            Section::Buses => {
                let id = r.bus(fields[0], "id")?;
                case.buses.push(Bus {
                    id,
                    theta_min: r.angle_or(fields[1], -std::f64::consts::FRAC_PI_2)?,
                    theta_max: r.angle_or(fields[2], std::f64::consts::FRAC_PI_2)?,
                });
            }
            Section::Lines => case.lines.push(Line {
                id: fields[0].trim().to_string(),
                from: r.bus(fields[1], "from")?,
                to: r.bus(fields[2], "to")?,
                reactance: r.num(fields[3], "x")?,
                rating: Rating::new(
                    r.num(fields[4], "zeta_n")?,
                    r.num(fields[5], "zeta_l")?,
                    r.num(fields[6], "zeta_s")?,
                ),
            }),
            Section::Generators => case.generators.push(Generator {
                id: fields[0].trim().to_string(),
                bus: r.bus(fields[1], "bus")?,
                p_min: r.num(fields[2], "pmin")?,
                p_max: r.num(fields[3], "pmax")?,
                cost: r.num(fields[4], "cost")?,
                ramp_min: r.num(fields[5], "ramp_min")?,
                ramp_max: r.num(fields[6], "ramp_max")?,
            }),
            Section::Renewables => case.renewables.push(RenewableSource {
                id: fields[0].trim().to_string(),
                bus: r.bus(fields[1], "bus")?,
                penalty: r.num(fields[2], "penalty")?,
                availability: read_series(&base.join(fields[3].trim()))?,
            }),
            Section::Loads => case.loads.push(Load {
                id: fields[0].trim().to_string(),
                bus: r.bus(fields[1], "bus")?,
                penalty: r.num(fields[2], "penalty")?,
                demand: read_series(&base.join(fields[3].trim()))?,
            }),
        }
    }
    if !seen_meta {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: reader.line,
            message: "missing [meta] section".into(),
        });
    }
    case.validate()?;
    Ok(case)
}

/// Writes `case` to `path`; series go to `<stem>_series/` next to it.
pub fn write_case(case: &Case, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "case".into());
    let series_dir = format!("{stem}_series");
    let base = path.parent().unwrap_or(Path::new("."));
    let abs_series_dir = base.join(&series_dir);
    fs::create_dir_all(&abs_series_dir).map_err(|source| Error::Io {
        path: abs_series_dir.clone(),
        source,
    })?;

    let mut out = String::new();
    let section = |out: &mut String, s: Section, name: &str| {
        let _ = writeln!(out, "[{name}]\n{}", s.header());
    };

    section(&mut out, Section::Meta, "meta");
    let _ = writeln!(
        out,
        "{},{},{},{}",
        case.horizon, case.dt, case.lte_limit, case.ste_limit
    );
    section(&mut out, Section::Buses, "buses");
    for b in &case.buses {
        let _ = writeln!(out, "{},{},{}", b.id, b.theta_min, b.theta_max);
    }
    section(&mut out, Section::Lines, "lines");
    for l in &case.lines {
        let r = l.rating;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            l.id, l.from, l.to, l.reactance, r.normal, r.long_term, r.short_term
        );
    }
    section(&mut out, Section::Generators, "generators");
    for g in &case.generators {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            g.id, g.bus, g.p_min, g.p_max, g.cost, g.ramp_min, g.ramp_max
        );
    }
    section(&mut out, Section::Renewables, "renewables");
    for (i, r) in case.renewables.iter().enumerate() {
        let rel = format!("{series_dir}/renewable_{i}_{}.csv", file_safe(&r.id));
        write_series(&base.join(&rel), &r.availability)?;
        let _ = writeln!(out, "{},{},{},{rel}", r.id, r.bus, r.penalty);
    }
    section(&mut out, Section::Loads, "loads");
    for (i, d) in case.loads.iter().enumerate() {
        let rel = format!("{series_dir}/load_{i}_{}.csv", file_safe(&d.id));
        write_series(&base.join(&rel), &d.demand)?;
        let _ = writeln!(out, "{},{},{},{rel}", d.id, d.bus, d.penalty);
    }

    fs::write(path, out).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_series(path: &Path) -> Result<Vec<f64>> {
    let text = read(path)?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v = line.parse::<f64>().map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: format!("cannot parse {line:?} as a number"),
        })?;
        values.push(v);
    }
    Ok(values)
}

fn write_series(path: &PathBuf, values: &[f64]) -> Result<()> {
    let mut out = String::with_capacity(values.len() * 8);
    for v in values {
        let _ = writeln!(out, "{v}");
    }
    fs::write(path, out).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })
}

fn file_safe(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::two_bus;

    fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
        let p = dir.join(name);
        fs::write(&p, body).unwrap();
        p
    }

    const TWO_BUS: &str = "\
# hand-written two bus case
[meta]
T,dt,T_l,T_s
1,1,16,1
[buses]
id,theta_min,theta_max
1,-100,100
2,-100,100
[lines]
id,from,to,x,zeta_n,zeta_l,zeta_s
L1,1,2,0.1,50,70,90
[generators]
id,bus,pmin,pmax,cost,ramp_min,ramp_max
G1,1,0,100,10,-inf,inf
[renewables]
id,bus,penalty,series_file
[loads]
id,bus,penalty,series_file
D1,2,1000,d1.csv
";

    #[test]
    fn reads_hand_written_two_bus_file() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "d1.csv", "80\n");
        let path = write(dir.path(), "two.case", TWO_BUS);
        let case = load_case(&path).unwrap();
        assert_eq!(case.buses.len(), 2);
        assert_eq!(case.lines.len(), 1);
        assert_eq!(case, two_bus(&[80.0]));
    }

    #[test]
    fn header_rows_are_optional_and_angles_default() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "d1.csv", "80\n\n");
        let body = "[meta]\n1,1,16,1\n[buses]\n1,,\n2,,\n[lines]\nL1,1,2,0.1,50,70,90\n\
                    [generators]\nG1,1,0,100,10,-10,10\n[loads]\nD1,2,1000,d1.csv\n";
        let case = load_case(write(dir.path(), "c.case", body)).unwrap();
        assert_eq!(case.buses[0].theta_max, std::f64::consts::FRAC_PI_2);
        assert_eq!(case.generators[0].ramp_max, 10.0);
    }

    #[test]
    fn bad_threshold_ordering_reports_validation_error() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "d1.csv", "80\n");
        let body = TWO_BUS.replace("L1,1,2,0.1,50,70,90", "L1,1,2,0.1,70,50,90");
        let err = load_case(write(dir.path(), "c.case", &body)).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        assert!(err.to_string().contains("threshold ordering"));
    }

    #[test]
    fn malformed_rows_name_the_line() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "d1.csv", "80\n");
        let body = TWO_BUS.replace("L1,1,2,0.1,50,70,90", "L1,1,2,abc,50,70,90");
        let err = load_case(write(dir.path(), "c.case", &body)).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 11),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_case("/nonexistent/case.case").unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
        assert!(err.to_string().contains("/nonexistent/case.case"));
    }

    #[test]
    fn write_then_read_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let mut case = two_bus(&[80.0, 12.345678901234567, 0.1]);
        case.renewables.push(RenewableSource {
            id: "wind/1".into(),
            bus: BusId(2),
            penalty: 300.0,
            availability: vec![1.0 / 3.0, 0.0, 7.5],
        });
        let path = dir.path().join("rt.case");
        write_case(&case, &path).unwrap();
        assert_eq!(load_case(&path).unwrap(), case);
    }
}
