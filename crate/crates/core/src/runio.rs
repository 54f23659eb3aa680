//! Text formats: `key = value` run configuration, CSV exports and the JSON
//! run record.
//!
//! Floats in CSV files are written with 17 significant digits
//! (`{:.16e}`), which round-trips every `f64` exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::benchmark::{BenchmarkConfig, N_RADII};
use crate::error::{Error, Result};
use crate::field::FieldSample;
use crate::moo::{GenerationStats, Individual, NsgaConfig, ParetoArchive};

pub const SCHEMA_VERSION: u64 = 1;

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

// ---------------------------------------------------------------- config --

/// Every key accepted by [`read_config`], in file order.
pub const CONFIG_KEYS: &[&str] = &[
    "turn_width",
    "turn_height",
    "current_density",
    "b0_target",
    "roi_half_width",
    "roi_half_height",
    "roi_n_r",
    "roi_n_z",
    "quad_nodes",
    "quad_subintervals",
    "radius_min",
    "radius_max",
    "population",
    "generations",
    "crossover_prob",
    "crossover_eta",
    "mutation_prob",
    "mutation_eta",
    "seed",
    "archive_capacity",
    "hv_reference",
];

/// Defaults for the benchmark and its optimizer.
pub fn default_configs() -> (BenchmarkConfig, NsgaConfig) {
    let bench = BenchmarkConfig::default();
    let nsga = NsgaConfig::new(vec![(bench.radius_min, bench.radius_max); N_RADII]);
    (bench, nsga)
}

/// Parses the flat configuration format: one `key = value` per line, `#`
/// starts a comment, blank lines are ignored, missing keys keep their
/// defaults. `archive_capacity = 0` and an empty `hv_reference` mean
/// "unbounded" and "derived from the initial population".
pub fn parse_config(text: &str) -> Result<(BenchmarkConfig, NsgaConfig)> {
    let (mut b, mut n) = default_configs();
    let mut seen = std::collections::HashSet::new();
    let mut bounds_touched = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(Error::UnknownKey {
                line: line_no,
                key: key.to_string(),
            });
        }
        if !seen.insert(key.to_string()) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("duplicate key `{key}`"),
            });
        }
        let bad = |what: &str| Error::Parse {
            line: line_no,
            message: format!("`{key}` expects {what}, got `{value}`"),
        };
        let f = || value.parse::<f64>().map_err(|_| bad("a number"));
        let u = || {
            value
                .parse::<usize>()
                .map_err(|_| bad("a non-negative integer"))
        };
        match key {
            "turn_width" => b.turn_width = f()?,
            "turn_height" => b.turn_height = f()?,
            "current_density" => b.current_density = f()?,
            "b0_target" => b.b0_target = f()?,
            "roi_half_width" => b.roi_half_width = f()?,
            "roi_half_height" => b.roi_half_height = f()?,
            "roi_n_r" => b.roi_n_r = u()?,
            "roi_n_z" => b.roi_n_z = u()?,
            "quad_nodes" => b.quad.nodes_per_subinterval = u()?,
            "quad_subintervals" => b.quad.subintervals = u()?,
            "radius_min" => {
                b.radius_min = f()?;
                bounds_touched = true;
            }
            "radius_max" => {
                b.radius_max = f()?;
                bounds_touched = true;
            }
            "population" => n.population = u()?,
            "generations" => n.generations = u()?,
            "crossover_prob" => n.crossover_prob = f()?,
            "crossover_eta" => n.crossover_eta = f()?,
            "mutation_prob" => n.mutation_prob = f()?,
            "mutation_eta" => n.mutation_eta = f()?,
            "seed" => {
                n.seed = value
                    .parse::<u64>()
                    .map_err(|_| bad("an unsigned 64-bit integer"))?
            }
            "archive_capacity" => n.archive_capacity = Some(u()?).filter(|&c| c > 0),
            "hv_reference" => {
                n.hv_reference = if value.is_empty() {
                    None
                } else {
                    Some(
                        value
                            .split(',')
                            .map(|s| s.trim().parse::<f64>())
                            .collect::<std::result::Result<Vec<_>, _>>()
                            .map_err(|_| bad("comma-separated numbers"))?,
                    )
                }
            }
            _ => unreachable!("key list and match arms out of sync"),
        }
    }
    if bounds_touched {
        n.bounds = vec![(b.radius_min, b.radius_max); N_RADII];
    }
    b.validate()?;
    n.validate()?;
    Ok((b, n))
}

pub fn read_config(path: impl AsRef<Path>) -> Result<(BenchmarkConfig, NsgaConfig)> {
    parse_config(&read_file(path.as_ref())?)
}

/// Renders a configuration that [`parse_config`] reads back unchanged.
pub fn format_config(b: &BenchmarkConfig, n: &NsgaConfig) -> String {
    let hv = n
        .hv_reference
        .as_ref()
        .map(|r| {
            r.iter()
                .map(|v| format!("{v:?}"))
                .collect::<Vec<_>>()
                .join(",")
        })
        .unwrap_or_default();
    let pairs: Vec<(&str, String)> = vec![
        ("turn_width", format!("{:?}", b.turn_width)),
        ("turn_height", format!("{:?}", b.turn_height)),
        ("current_density", format!("{:?}", b.current_density)),
        ("b0_target", format!("{:?}", b.b0_target)),
        ("roi_half_width", format!("{:?}", b.roi_half_width)),
        ("roi_half_height", format!("{:?}", b.roi_half_height)),
        ("roi_n_r", b.roi_n_r.to_string()),
        ("roi_n_z", b.roi_n_z.to_string()),
        ("quad_nodes", b.quad.nodes_per_subinterval.to_string()),
        ("quad_subintervals", b.quad.subintervals.to_string()),
        ("radius_min", format!("{:?}", b.radius_min)),
        ("radius_max", format!("{:?}", b.radius_max)),
        ("population", n.population.to_string()),
        ("generations", n.generations.to_string()),
        ("crossover_prob", format!("{:?}", n.crossover_prob)),
        ("crossover_eta", format!("{:?}", n.crossover_eta)),
        ("mutation_prob", format!("{:?}", n.mutation_prob)),
        ("mutation_eta", format!("{:?}", n.mutation_eta)),
        ("seed", n.seed.to_string()),
        (
            "archive_capacity",
            n.archive_capacity.unwrap_or(0).to_string(),
        ),
        ("hv_reference", hv),
    ];
    let mut s = String::new();
    for (k, v) in pairs {
        let _ = writeln!(s, "{k} = {v}");
    }
    s
}

// ------------------------------------------------------------------- csv --

/// CSV of `f1,f2,genes...` rows sorted ascending by `f1` (then `f2`).
pub fn format_front_csv(members: &[Individual]) -> Result<String> {
    let width = members.first().map_or(N_RADII, |m| m.genes.len());
    let mut rows: Vec<&Individual> = members.iter().collect();
    for m in &rows {
        if m.objectives.len() != 2 || m.genes.len() != width {
            return Err(Error::InvalidConfig(
                "front CSV needs two objectives and equal gene counts".into(),
            ));
        }
    }
    rows.sort_by(|a, b| {
        a.objectives[0]
            .total_cmp(&b.objectives[0])
            .then(a.objectives[1].total_cmp(&b.objectives[1]))
    });
    let mut s = String::from("f1_tesla,f2_meters");
    for i in 1..=width {
        let _ = write!(s, ",r{i}");
    }
    s.push('\n');
    for m in rows {
        let cells: Vec<String> = m
            .objectives
            .iter()
            .chain(&m.genes)
            .map(|&v| num(v))
            .collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    Ok(s)
}

pub fn write_pareto_csv(archive: &ParetoArchive, path: impl AsRef<Path>) -> Result<()> {
    write_front_csv(archive.members(), path)
}

pub fn write_front_csv(members: &[Individual], path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &format_front_csv(members)?)
}

fn parse_row(line: &str, line_no: usize) -> Result<Vec<f64>> {
    line.split(',')
        .map(|c| {
            c.trim().parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("not a number: `{c}`"),
            })
        })
        .collect()
}

/// Reads a file written by [`write_pareto_csv`].
pub fn read_pareto_csv(path: impl AsRef<Path>) -> Result<Vec<Individual>> {
    let text = read_file(path.as_ref())?;
    let mut lines = text.lines();
    let header = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header".into(),
    })?;
    if !header.starts_with("f1_tesla,f2_meters") {
        return Err(Error::Parse {
            line: 1,
            message: format!("unexpected header `{header}`"),
        });
    }
    let width = header.split(',').count();
    lines
        .enumerate()
        .map(|(i, line)| {
            let v = parse_row(line, i + 2)?;
            if v.len() != width {
                return Err(Error::Parse {
                    line: i + 2,
                    message: format!("expected {width} columns, got {}", v.len()),
                });
            }
            Ok(Individual::new(v[2..].to_vec(), v[..2].to_vec()))
        })
        .collect()
}

pub fn format_profile_csv(samples: &[FieldSample]) -> Result<String> {
    if samples.is_empty() {
        return Err(Error::InvalidConfig("profile has no samples".into()));
    }
    let mut s = String::from("r_m,z_m,br_tesla,bz_tesla\n");
    for p in samples {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            num(p.point.r),
            num(p.point.z),
            num(p.b_r),
            num(p.b_z)
        );
    }
    Ok(s)
}

pub fn write_profile_csv(samples: &[FieldSample], path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &format_profile_csv(samples)?)
}

pub fn read_profile_csv(path: impl AsRef<Path>) -> Result<Vec<FieldSample>> {
    let text = read_file(path.as_ref())?;
    let mut lines = text.lines();
    if lines.next() != Some("r_m,z_m,br_tesla,bz_tesla") {
        return Err(Error::Parse {
            line: 1,
            message: "unexpected header".into(),
        });
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let v = parse_row(line, i + 2)?;
            if v.len() != 4 {
                return Err(Error::Parse {
                    line: i + 2,
                    message: format!("expected 4 columns, got {}", v.len()),
                });
            }
            Ok(FieldSample {
                point: crate::field::EvalPoint { r: v[0], z: v[1] },
                b_r: v[2],
                b_z: v[3],
            })
        })
        .collect()
}

// ------------------------------------------------------------ run record --

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timestamps {
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema_version: u64,
    pub tool_version: String,
    pub rng_algorithm: String,
    pub seed: u64,
    pub benchmark: BenchmarkConfig,
    pub nsga: NsgaConfig,
    pub evaluations: usize,
    pub hv_reference: Option<Vec<f64>>,
    pub history: Vec<GenerationStats>,
    pub archive: Vec<Individual>,
    /// Wall-clock times; omitted unless requested so that records of
    /// identical runs stay byte-identical.
    pub timestamps: Option<Timestamps>,
}

pub fn format_run_record(record: &RunRecord) -> Result<String> {
    let mut s = serde_json::to_string_pretty(record)?;
    s.push('\n');
    Ok(s)
}

pub fn write_run_record(record: &RunRecord, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &format_run_record(record)?)
}

pub fn parse_run_record(text: &str) -> Result<RunRecord> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let found = value
        .get("schema_version")
        .and_then(serde_json::Value::as_u64)
        .unwrap_or(0);
    if found != SCHEMA_VERSION {
        return Err(Error::SchemaMismatch {
            found,
            expected: SCHEMA_VERSION,
        });
    }
    Ok(serde_json::from_value(value)?)
}

pub fn read_run_record(path: impl AsRef<Path>) -> Result<RunRecord> {
    parse_run_record(&read_file(path.as_ref())?)
}
