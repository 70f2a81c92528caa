//! Bench configuration files in a small INI dialect:
//!
//! ```text
//! [data]
//! kind = class-swap          # class-swap | no-drift | csv
//! samples_per_window = 60
//!
//! [experiment]
//! repetitions = 50
//!
//! [method cp-dt]             # label; the method is the label unless `method = ...`
//! n_boot = 100
//! ```
//!
//! Comments start with `#` or `;`. Every diagnostic carries a line number.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use driftloc_core::data::ClassSwapSpec;
use driftloc_core::eval::DataSource;
use serde::{Deserialize, Serialize};

use crate::csv_io::load_embedding_csv;
use crate::error::{CliError, CliResult};
use crate::methods::{MethodName, MethodParams};

pub const DEFAULT_REPETITIONS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DataConfig {
    ClassSwap {
        n_classes: usize,
        samples_per_window: usize,
        n_drifting_per_window: usize,
        dim: usize,
        sigma: f64,
        center_range: f64,
    },
    NoDrift {
        n: usize,
        dim: usize,
    },
    Csv {
        path: PathBuf,
    },
}

impl DataConfig {
    pub fn class_swap(spec: &ClassSwapSpec) -> Self {
        DataConfig::ClassSwap {
            n_classes: spec.n_classes,
            samples_per_window: spec.samples_per_window,
            n_drifting_per_window: spec.n_drifting_per_window,
            dim: spec.dim,
            sigma: spec.sigma,
            center_range: spec.center_range,
        }
    }

    /// Materializes the source; CSV files must carry a `drift` column.
    pub fn source(&self) -> CliResult<DataSource> {
        Ok(match self {
            &DataConfig::ClassSwap {
                n_classes,
                samples_per_window,
                n_drifting_per_window,
                dim,
                sigma,
                center_range,
            } => DataSource::ClassSwap(ClassSwapSpec {
                n_classes,
                samples_per_window,
                n_drifting_per_window,
                dim,
                sigma,
                center_range,
                seed: 0,
            }),
            &DataConfig::NoDrift { n, dim } => DataSource::NoDrift { n, dim },
            DataConfig::Csv { path } => {
                let table = load_embedding_csv(path)?;
                let truth = table.truth.ok_or_else(|| CliError::Schema {
                    path: path.clone(),
                    line: 1,
                    msg: "benchmarks need a ground-truth \"drift\" column".into(),
                })?;
                DataSource::Fixed { dataset: Arc::new(table.dataset), truth: Arc::new(truth) }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodEntry {
    pub label: String,
    pub method: MethodName,
    pub params: MethodParams,
}

/// A parsed config with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub data: DataConfig,
    pub repetitions: usize,
    pub methods: Vec<MethodEntry>,
}

struct Entry {
    key: String,
    value: String,
    line: usize,
}

struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

impl BenchConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        Self::parse(&text, path)
    }

    /// `path` labels diagnostics and anchors relative CSV paths.
    pub fn parse(text: &str, path: &Path) -> CliResult<Self> {
        let err = |line: usize, msg: String| CliError::Config { path: path.to_path_buf(), line, msg };
        let mut sections: Vec<Section> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let s = strip_comment(raw).trim();
            if s.is_empty() {
                continue;
            }
            if let Some(rest) = s.strip_prefix('[') {
                let name =
                    rest.strip_suffix(']').ok_or_else(|| err(line, format!("unterminated section header {s:?}")))?;
                let name = name.split_whitespace().collect::<Vec<_>>().join(" ");
                if let Some(prev) = sections.iter().find(|sec| sec.name == name) {
                    return Err(err(line, format!("duplicate section [{name}], first at line {}", prev.line)));
                }
                sections.push(Section { name, line, entries: Vec::new() });
                continue;
            }
            let (key, value) =
                s.split_once('=').ok_or_else(|| err(line, format!("expected key = value, found {s:?}")))?;
            let section = sections.last_mut().ok_or_else(|| err(line, "key outside of any section".into()))?;
            let key = key.trim().to_string();
            if let Some(prev) = section.entries.iter().find(|e| e.key == key) {
                return Err(err(line, format!("duplicate key {key:?}, first at line {}", prev.line)));
            }
            section.entries.push(Entry { key, value: value.trim().to_string(), line });
        }

        let mut data = None;
        let mut repetitions = DEFAULT_REPETITIONS;
        let mut methods = Vec::new();
        for sec in &sections {
            if sec.name == "data" {
                data = Some(parse_data(sec, path, &err)?);
            } else if sec.name == "experiment" {
                for e in &sec.entries {
                    match e.key.as_str() {
                        "repetitions" => repetitions = parse_num(e, &err)?,
                        k => return Err(err(e.line, format!("unknown key {k:?} in [experiment]"))),
                    }
                }
                if repetitions == 0 {
                    return Err(err(sec.line, "repetitions must be positive".into()));
                }
            } else if let Some(label) = sec.name.strip_prefix("method ").or_else(|| sec.name.strip_prefix("method.")) {
                let label = label.trim().to_string();
                if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
                    return Err(err(
                        sec.line,
                        format!("method label {label:?} may only use letters, digits, '-', '_' and '.'"),
                    ));
                }
                if methods.iter().any(|m: &MethodEntry| m.label == label) {
                    return Err(err(sec.line, format!("duplicate method label {label:?}")));
                }
                let mut method = MethodName::parse(&label);
                let mut params = MethodParams::default();
                for e in &sec.entries {
                    if e.key == "method" {
                        method = Some(MethodName::parse(&e.value).ok_or_else(|| {
                            err(e.line, format!("unknown method {:?}, expected one of {}", e.value, MethodName::list()))
                        })?);
                    } else {
                        params.set(&e.key, &e.value).map_err(|m| err(e.line, format!("[{}] {m}", sec.name)))?;
                    }
                }
                let method = method.ok_or_else(|| {
                    err(sec.line, format!("section [{}] needs `method = ...`, one of {}", sec.name, MethodName::list()))
                })?;
                methods.push(MethodEntry { label, method, params });
            } else {
                return Err(err(
                    sec.line,
                    format!("unknown section [{}], expected [data], [experiment] or [method NAME]", sec.name),
                ));
            }
        }
        let data = data.ok_or_else(|| err(0, "missing [data] section".into()))?;
        if methods.is_empty() {
            return Err(err(0, "no [method NAME] sections".into()));
        }
        Ok(BenchConfig { data, repetitions, methods })
    }
}

fn strip_comment(s: &str) -> &str {
    match s.find(['#', ';']) {
        Some(i) => &s[..i],
        None => s,
    }
}

fn parse_num<T: std::str::FromStr>(e: &Entry, err: &impl Fn(usize, String) -> CliError) -> CliResult<T> {
    e.value.parse().map_err(|_| err(e.line, format!("invalid value {:?} for {}", e.value, e.key)))
}

fn parse_data(sec: &Section, path: &Path, err: &impl Fn(usize, String) -> CliError) -> CliResult<DataConfig> {
    let kind = sec.entries.iter().find(|e| e.key == "kind");
    let kind_name = kind.map_or("class-swap", |e| e.value.as_str());
    let mut cfg = match kind_name {
        "class-swap" => DataConfig::class_swap(&ClassSwapSpec::default()),
        "no-drift" => DataConfig::NoDrift { n: 200, dim: 5 },
        "csv" => DataConfig::Csv { path: PathBuf::new() },
        other => {
            return Err(err(
                kind.map_or(sec.line, |e| e.line),
                format!("unknown data kind {other:?}, expected class-swap, no-drift or csv"),
            ))
        }
    };
    let mut has_path = false;
    for e in sec.entries.iter().filter(|e| e.key != "kind") {
        match (&mut cfg, e.key.as_str()) {
            (DataConfig::ClassSwap { n_classes, .. }, "n_classes") => *n_classes = parse_num(e, err)?,
            (DataConfig::ClassSwap { samples_per_window, .. }, "samples_per_window") => {
                *samples_per_window = parse_num(e, err)?
            }
            (DataConfig::ClassSwap { n_drifting_per_window, .. }, "n_drifting_per_window") => {
                *n_drifting_per_window = parse_num(e, err)?
            }
            (DataConfig::ClassSwap { dim, .. }, "dim") | (DataConfig::NoDrift { dim, .. }, "dim") => {
                *dim = parse_num(e, err)?
            }
            (DataConfig::ClassSwap { sigma, .. }, "sigma") => *sigma = parse_num(e, err)?,
            (DataConfig::ClassSwap { center_range, .. }, "center_range") => *center_range = parse_num(e, err)?,
            (DataConfig::NoDrift { n, .. }, "n") => *n = parse_num(e, err)?,
            (DataConfig::Csv { path: p }, "path") => {
                has_path = true;
                let rel = PathBuf::from(&e.value);
                *p = match path.parent() {
                    Some(dir) if rel.is_relative() => dir.join(rel),
                    _ => rel,
                };
            }
            (_, k) => return Err(err(e.line, format!("unknown key {k:?} for data kind {kind_name}"))),
        }
    }
    if matches!(cfg, DataConfig::Csv { .. }) && !has_path {
        return Err(err(sec.line, "data kind csv needs `path = ...`".into()));
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> CliResult<BenchConfig> {
        BenchConfig::parse(text, Path::new("dir/bench.ini"))
    }

    #[test]
    fn full_config() {
        let c = parse(
            "# comment\n[data]\nkind = class-swap\nsigma = 2.5 ; trailing\n\n[experiment]\nrepetitions = 7\n\
             [method cp-dt]\nn_boot = 20\n[method small-mlp]\nmethod = cp-mlp\nepochs = 5\n[method kdq]\n",
        )
        .unwrap();
        assert_eq!(c.repetitions, 7);
        let DataConfig::ClassSwap { sigma, samples_per_window, .. } = c.data else { panic!() };
        assert_eq!((sigma, samples_per_window), (2.5, 60));
        let labels: Vec<_> = c.methods.iter().map(|m| (m.label.as_str(), m.method)).collect();
        assert_eq!(labels, [("cp-dt", MethodName::CpDt), ("small-mlp", MethodName::CpMlp), ("kdq", MethodName::Kdq)]);
        assert_eq!(c.methods[0].params.n_boot, 20);
        assert_eq!(c.methods[1].params.epochs, 5);
        assert_eq!(c.methods[2].params, MethodParams::default());
    }

    #[test]
    fn csv_path_is_relative_to_config() {
        let c = parse("[data]\nkind = csv\npath = emb.csv\n[method ldd]\n").unwrap();
        assert_eq!(c.data, DataConfig::Csv { path: PathBuf::from("dir/emb.csv") });
    }

    #[test]
    fn diagnostics_carry_lines() {
        let cases = [
            ("[data]\nsigma = x\n[method kdq]\n", "bench.ini:2:"),
            ("[data]\n[method kdq]\nn_boot = -3\n", "bench.ini:3:"),
            ("[data]\n[method kdq]\nbogus = 1\n", "unknown parameter"),
            ("[data]\n[method foo]\n", "bench.ini:2:"),
            ("[data]\n[experiment]\nrepetitions = 0\n[method kdq]\n", "positive"),
            ("x = 1\n", "bench.ini:1:"),
            ("[data\n", "unterminated"),
            ("[data]\nkind = parquet\n[method kdq]\n", "bench.ini:2:"),
            ("[data]\n[data]\n", "duplicate section"),
            ("[data]\ndim = 3\ndim = 4\n", "bench.ini:3:"),
            ("[method kdq]\n", "missing [data]"),
            ("[data]\n", "no [method"),
            ("[data]\nkind = no-drift\nsigma = 1\n[method kdq]\n", "bench.ini:3:"),
            ("[data]\n[bogus]\n", "unknown section"),
            ("[data]\n[method a/b]\nmethod = kdq\n", "bench.ini:2:"),
            ("[data]\n[method kdq]\n[method.kdq]\n", "duplicate method label"),
        ];
        for (text, needle) in cases {
            let e = parse(text).unwrap_err();
            assert_eq!(e.exit_code(), 2);
            assert!(e.to_string().contains(needle), "{text:?}: {e}");
        }
    }
}
