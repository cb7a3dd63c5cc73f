use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use log::{info, warn};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Weight;
use crate::solver::{solve, SolveError, SolverConfig};

use super::{apply_weights, parse_graph, Format, WeightMode};

fn default_seeds() -> Vec<u64> {
    (1..=5).collect()
}

fn default_time_limit() -> f64 {
    1000.0
}

/// One benchmark instance: a graph file run once per seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub path: PathBuf,
    /// Display name; the file stem when absent.
    #[serde(default)]
    pub name: Option<String>,
    /// Inferred from the extension when absent.
    #[serde(default)]
    pub format: Option<Format>,
    /// File weights when present, family A otherwise.
    #[serde(default)]
    pub weights: Option<WeightMode>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Seconds per run.
    #[serde(default = "default_time_limit")]
    pub time_limit: f64,
    #[serde(default)]
    pub no_reduce: bool,
}

impl InstanceSpec {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        InstanceSpec {
            path: path.into(),
            name: None,
            format: None,
            weights: None,
            seeds: default_seeds(),
            time_limit: default_time_limit(),
            no_reduce: false,
        }
    }

    pub fn display_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| {
            self.path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
        })
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |msg: String| Err(BenchError::InvalidSpec(msg));
        if self.seeds.is_empty() {
            return bad(format!("{}: no seeds", self.display_name()));
        }
        if !(self.time_limit.is_finite() && self.time_limit > 0.0) {
            return bad(format!("{}: time limit must be positive", self.display_name()));
        }
        Ok(())
    }
}

/// A benchmark description file: a list of instances, paths relative to the
/// file itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSpec {
    pub instances: Vec<InstanceSpec>,
}

impl BenchSpec {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Resolves relative instance paths against `base`.
    pub fn rebase(mut self, base: &Path) -> Self {
        for inst in &mut self.instances {
            if inst.path.is_relative() {
                inst.path = base.join(&inst.path);
            }
        }
        self
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid benchmark spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{instance} seed {seed}: {source}")]
    Solve { instance: String, seed: u64, source: SolveError },
    #[error("{instance} seed {seed}: reported solution failed re-verification")]
    Verification { instance: String, seed: u64 },
}

pub const CSV_HEADER: [&str; 8] = ["instance", "n", "m", "kernel_n", "kernel_m", "seed", "weight", "time_to_best"];

/// One `instance × seed` run. `None` fields print as `N/A`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub instance: String,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub kernel_n: Option<usize>,
    pub kernel_m: Option<usize>,
    pub seed: u64,
    pub weight: Option<Weight>,
    pub time_to_best: Option<f64>,
}

fn na<T: ToString>(x: Option<T>) -> String {
    x.map_or_else(|| "N/A".to_owned(), |x| x.to_string())
}

impl RunRow {
    fn record(&self) -> [String; 8] {
        [
            self.instance.clone(),
            na(self.n),
            na(self.m),
            na(self.kernel_n),
            na(self.kernel_m),
            self.seed.to_string(),
            na(self.weight),
            na(self.time_to_best.map(|t| format!("{t:.3}"))),
        ]
    }
}

/// Per-instance aggregate over its seeds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub kernel_n: Option<usize>,
    pub kernel_m: Option<usize>,
    pub max_w: Option<Weight>,
    pub avg_w: Option<f64>,
    pub seeds: Vec<u64>,
    pub time_to_best: Vec<Option<f64>>,
}

fn aggregate(instance: String, runs: &[RunRow]) -> BenchRow {
    let weights: Vec<Weight> = runs.iter().filter_map(|r| r.weight).collect();
    let first = runs.first();
    BenchRow {
        instance,
        n: first.and_then(|r| r.n),
        m: first.and_then(|r| r.m),
        kernel_n: first.and_then(|r| r.kernel_n),
        kernel_m: first.and_then(|r| r.kernel_m),
        max_w: weights.iter().copied().max(),
        avg_w: (!weights.is_empty()).then(|| weights.iter().sum::<Weight>() as f64 / weights.len() as f64),
        seeds: runs.iter().map(|r| r.seed).collect(),
        time_to_best: runs.iter().map(|r| r.time_to_best).collect(),
    }
}

/// Runs every instance with every seed, streaming one CSV row per run to
/// `out`, and returns the per-instance aggregates. An unreadable or
/// unparsable instance yields `N/A` rows and the run continues.
pub fn run_benchmark<W: Write>(specs: &[InstanceSpec], out: W) -> Result<Vec<BenchRow>, BenchError> {
    for spec in specs {
        spec.validate()?;
    }
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(CSV_HEADER)?;
    let mut summary = Vec::with_capacity(specs.len());
    for spec in specs {
        let name = spec.display_name();
        let graph = std::fs::read_to_string(&spec.path)
            .map_err(|e| e.to_string())
            .and_then(|text| {
                parse_graph(&text, spec.format.unwrap_or_else(|| Format::from_path(&spec.path)))
                    .map_err(|e| e.to_string())
            })
            .and_then(|parsed| apply_weights(&parsed, spec.weights).map_err(|e| e.to_string()));
        let mut runs = Vec::with_capacity(spec.seeds.len());
        match graph {
            Err(e) => {
                warn!("{name}: {e}; reporting N/A");
                for &seed in &spec.seeds {
                    runs.push(RunRow {
                        instance: name.clone(),
                        n: None,
                        m: None,
                        kernel_n: None,
                        kernel_m: None,
                        seed,
                        weight: None,
                        time_to_best: None,
                    });
                }
            }
            Ok(g) => {
                for &seed in &spec.seeds {
                    let cfg = SolverConfig {
                        time_limit: Duration::from_secs_f64(spec.time_limit),
                        seed,
                        no_reduce: spec.no_reduce,
                        ..SolverConfig::default()
                    };
                    let r = solve(&g, &cfg)
                        .map_err(|source| BenchError::Solve { instance: name.clone(), seed, source })?;
                    if !g.is_independent(&r.best_set) || g.weight_of(&r.best_set) != r.best_weight {
                        return Err(BenchError::Verification { instance: name.clone(), seed });
                    }
                    info!("{name} seed {seed}: {} in {:.3}s", r.best_weight, r.time_to_best);
                    runs.push(RunRow {
                        instance: name.clone(),
                        n: Some(g.num_vertices()),
                        m: Some(g.num_edges()),
                        kernel_n: Some(r.kernel_n),
                        kernel_m: Some(r.kernel_m),
                        seed,
                        weight: Some(r.best_weight),
                        time_to_best: Some(r.time_to_best),
                    });
                }
            }
        }
        for run in &runs {
            csv.write_record(run.record())?;
        }
        csv.flush()?;
        summary.push(aggregate(name, &runs));
    }
    Ok(summary)
}

fn parse_field<T: std::str::FromStr>(s: &str) -> Option<T> {
    if s == "N/A" {
        None
    } else {
        s.parse().ok()
    }
}

/// Reads per-run CSV rows as written by [`run_benchmark`].
pub fn read_runs<R: Read>(input: R) -> Result<Vec<RunRow>, BenchError> {
    let mut reader = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        if rec.len() != CSV_HEADER.len() {
            return Err(BenchError::InvalidSpec(format!("expected {} columns, got {}", CSV_HEADER.len(), rec.len())));
        }
        let seed = rec[5]
            .parse()
            .map_err(|_| BenchError::InvalidSpec(format!("bad seed `{}`", &rec[5])))?;
        rows.push(RunRow {
            instance: rec[0].to_owned(),
            n: parse_field(&rec[1]),
            m: parse_field(&rec[2]),
            kernel_n: parse_field(&rec[3]),
            kernel_m: parse_field(&rec[4]),
            seed,
            weight: parse_field(&rec[6]),
            time_to_best: parse_field(&rec[7]),
        });
    }
    Ok(rows)
}

/// Groups runs by instance, in order of first appearance.
pub fn summarize(runs: &[RunRow]) -> Vec<BenchRow> {
    let mut order: Vec<String> = Vec::new();
    let mut groups: BTreeMap<String, Vec<RunRow>> = BTreeMap::new();
    for r in runs {
        if !groups.contains_key(&r.instance) {
            order.push(r.instance.clone());
        }
        groups.entry(r.instance.clone()).or_default().push(r.clone());
    }
    order.into_iter().map(|name| { let runs = &groups[&name]; aggregate(name.clone(), runs) }).collect()
}

/// Fixed-width table with max_w, avg_w and mean convergence time.
pub fn report_table(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<24} {:>10} {:>12} {:>10} {:>10} {:>12} {:>10}",
        "instance", "n", "m", "kernel_n", "max_w", "avg_w", "time"
    );
    for r in rows {
        let times: Vec<f64> = r.time_to_best.iter().flatten().copied().collect();
        let time = (!times.is_empty()).then(|| format!("{:.2}", times.iter().sum::<f64>() / times.len() as f64));
        let _ = writeln!(
            out,
            "{:<24} {:>10} {:>12} {:>10} {:>10} {:>12} {:>10}",
            r.instance,
            na(r.n),
            na(r.m),
            na(r.kernel_n),
            na(r.max_w),
            na(r.avg_w.map(|a| format!("{a:.1}"))),
            na(time),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3_file(dir: &Path) -> PathBuf {
        let path = dir.join("p3.graph");
        std::fs::write(&path, "3 2 10\n1 2\n5 1 3\n1 2\n").unwrap();
        path
    }

    fn temp_dir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("dynls-bench-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn p3_five_seeds() {
        let dir = temp_dir("p3");
        let spec = InstanceSpec { time_limit: 0.2, ..InstanceSpec::new(p3_file(&dir)) };
        let mut out = Vec::new();
        let summary = run_benchmark(&[spec], &mut out).unwrap();
        assert_eq!(summary.len(), 1);
        assert_eq!(summary[0].max_w, Some(5));
        assert_eq!(summary[0].avg_w, Some(5.0));
        let runs = read_runs(out.as_slice()).unwrap();
        assert_eq!(runs.len(), 5);
        assert_eq!(summarize(&runs)[0].max_w, Some(5));
        assert!(report_table(&summarize(&runs)).contains("p3"));
    }

    #[test]
    fn missing_file_reports_na() {
        let spec = InstanceSpec { seeds: vec![1, 2], ..InstanceSpec::new("/nonexistent/x.graph") };
        let mut out = Vec::new();
        let summary = run_benchmark(&[spec], &mut out).unwrap();
        assert_eq!(summary[0].max_w, None);
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(1).unwrap().ends_with("N/A,N/A"));
    }

    #[test]
    fn rejects_empty_seed_list() {
        let spec = InstanceSpec { seeds: vec![], ..InstanceSpec::new("x.graph") };
        assert!(matches!(run_benchmark(&[spec], Vec::new()), Err(BenchError::InvalidSpec(_))));
    }

    #[test]
    fn spec_json_defaults() {
        let spec = BenchSpec::from_json(r#"{"instances":[{"path":"a.txt","weights":"family-b:3"}]}"#).unwrap();
        let spec = spec.rebase(Path::new("/data"));
        let inst = &spec.instances[0];
        assert_eq!(inst.path, Path::new("/data/a.txt"));
        assert_eq!(inst.weights, Some(WeightMode::FamilyB(3)));
        assert_eq!(inst.seeds, vec![1, 2, 3, 4, 5]);
        assert_eq!(inst.display_name(), "a");
    }
}
