use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::verify::{InstanceSpec, DEFAULT_ORACLE_CAP};
use crate::error::{Error, Result};
use crate::exact::exact_summary;
use crate::registry::{Params, Registry};

pub const CSV_COLUMNS: [&str; 11] = [
    "algo", "n", "m", "k", "delta", "epsilon", "estimate", "exact", "ratio", "sssp_calls", "ms",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algo: String,
    pub n: usize,
    pub m: usize,
    pub k: Option<u32>,
    #[serde(with = "opt_num")]
    pub delta: Option<f64>,
    #[serde(with = "opt_num")]
    pub epsilon: Option<f64>,
    #[serde(with = "num")]
    pub estimate: f64,
    #[serde(with = "opt_num")]
    pub exact: Option<f64>,
    #[serde(with = "opt_num")]
    pub ratio: Option<f64>,
    pub sssp_calls: u64,
    #[serde(with = "num")]
    pub ms: f64,
}

/// `estimate / exact`, with equal values (including two infinities) at 1.
pub fn ratio(estimate: f64, exact: f64) -> f64 {
    if estimate == exact {
        1.0
    } else if exact == 0.0 {
        f64::INFINITY
    } else {
        estimate / exact
    }
}

fn fmt_num(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".into()
    } else {
        v.to_string()
    }
}

fn parse_num(s: &str) -> Result<f64> {
    match s {
        "inf" => Ok(f64::INFINITY),
        _ => s
            .parse()
            .map_err(|_| Error::Parse { line: 0, message: format!("bad number {s:?}") }),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub algo: String,
    pub n: usize,
    pub m: usize,
    pub runs: usize,
    pub mean_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    pub mean_sssp_calls: f64,
    pub mean_ms: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BenchTable {
    pub records: Vec<RunRecord>,
}

impl BenchTable {
    /// Mean and max ratio and mean counters per `(algo, n, m)`.
    pub fn aggregates(&self) -> Vec<AggregateRow> {
        let mut groups: BTreeMap<(&str, usize, usize), Vec<&RunRecord>> = BTreeMap::new();
        for r in &self.records {
            groups.entry((r.algo.as_str(), r.n, r.m)).or_default().push(r);
        }
        groups
            .into_iter()
            .map(|((algo, n, m), rows)| {
                let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
                let count = rows.len() as f64;
                AggregateRow {
                    algo: algo.to_string(),
                    n,
                    m,
                    runs: rows.len(),
                    mean_ratio: (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64),
                    max_ratio: ratios.iter().copied().reduce(f64::max),
                    mean_sssp_calls: rows.iter().map(|r| r.sssp_calls as f64).sum::<f64>() / count,
                    mean_ms: rows.iter().map(|r| r.ms).sum::<f64>() / count,
                }
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_COLUMNS).expect("in-memory write");
        let opt = |v: Option<f64>| v.map(fmt_num).unwrap_or_default();
        for r in &self.records {
            w.write_record([
                r.algo.clone(),
                r.n.to_string(),
                r.m.to_string(),
                r.k.map(|k| k.to_string()).unwrap_or_default(),
                opt(r.delta),
                opt(r.epsilon),
                fmt_num(r.estimate),
                opt(r.exact),
                opt(r.ratio),
                r.sssp_calls.to_string(),
                fmt_num(r.ms),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let header = rdr.headers().map_err(csv_error)?.clone();
        if header.iter().ne(CSV_COLUMNS) {
            return Err(Error::Parse { line: 1, message: format!("unexpected header {header:?}") });
        }
        let mut records = Vec::new();
        for (i, row) in rdr.records().enumerate() {
            let row = row.map_err(csv_error)?;
            let line = i + 2;
            let wrap = |e: Error| match e {
                Error::Parse { message, .. } => Error::Parse { line, message },
                other => other,
            };
            let int = |s: &str| s.parse::<u64>().map_err(|_| Error::Parse { line, message: format!("bad integer {s:?}") });
            let opt = |s: &str| if s.is_empty() { Ok(None) } else { parse_num(s).map(Some).map_err(wrap) };
            records.push(RunRecord {
                algo: row[0].to_string(),
                n: int(&row[1])? as usize,
                m: int(&row[2])? as usize,
                k: if row[3].is_empty() { None } else { Some(int(&row[3])? as u32) },
                delta: opt(&row[4])?,
                epsilon: opt(&row[5])?,
                estimate: parse_num(&row[6]).map_err(wrap)?,
                exact: opt(&row[7])?,
                ratio: opt(&row[8])?,
                sssp_calls: int(&row[9])?,
                ms: parse_num(&row[10]).map_err(wrap)?,
            });
        }
        Ok(BenchTable { records })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })
    }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    Error::Parse { line, message: e.to_string() }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchSpec {
    pub sizes: Vec<usize>,
    /// Edges per vertex.
    pub density: f64,
    pub w_max: u64,
    pub connected: bool,
    pub algorithms: Vec<String>,
    pub params: Params,
    pub repetitions: usize,
    pub seed: u64,
    pub exact: bool,
    pub force: bool,
    pub oracle_cap: usize,
}

impl Default for BenchSpec {
    fn default() -> Self {
        BenchSpec {
            sizes: vec![1024, 4096, 16384],
            density: 4.0,
            w_max: 1,
            connected: true,
            algorithms: vec!["radius-approx".into()],
            params: Params::default(),
            repetitions: 1,
            seed: 0,
            exact: false,
            force: false,
            oracle_cap: DEFAULT_ORACLE_CAP,
        }
    }
}

impl BenchSpec {
    pub fn instance(&self, n: usize, rep: usize) -> InstanceSpec {
        let max_m = n.saturating_mul(n.saturating_sub(1)) / 2;
        let mut m = ((self.density * n as f64).round() as usize).min(max_m);
        if self.connected {
            m = m.max(n.saturating_sub(1));
        }
        InstanceSpec {
            n,
            m,
            w_max: self.w_max,
            seed: self.seed.wrapping_add(rep as u64),
            connected: self.connected,
        }
    }
}

/// Runs every requested estimator on every generated instance. Output is
/// deterministic for a fixed spec apart from the `ms` column.
pub fn cmd_bench(spec: &BenchSpec, registry: &Registry) -> Result<BenchTable> {
    let estimators = spec
        .algorithms
        .iter()
        .map(|name| registry.get(name))
        .collect::<Result<Vec<_>>>()?;
    if spec.exact && !spec.force {
        if let Some(&n) = spec.sizes.iter().find(|&&n| n > spec.oracle_cap) {
            return Err(Error::OracleCapExceeded { n, cap: spec.oracle_cap });
        }
    }
    let mut table = BenchTable::default();
    for &n in &spec.sizes {
        for rep in 0..spec.repetitions {
            let dag = spec.instance(n, rep).build()?;
            let exact = if spec.exact { Some(exact_summary(&dag)?) } else { None };
            for est in &estimators {
                if !est.supports(&dag) {
                    continue;
                }
                let start = Instant::now();
                let got = est.estimate(&dag, &spec.params)?;
                let ms = start.elapsed().as_secs_f64() * 1000.0;
                let exact_value = exact.as_ref().map(|s| est.target().exact(s).as_f64());
                table.records.push(RunRecord {
                    algo: est.name().to_string(),
                    n: dag.n(),
                    m: dag.m(),
                    k: got.k,
                    delta: got.delta,
                    epsilon: got.epsilon,
                    estimate: got.value,
                    exact: exact_value,
                    ratio: exact_value.map(|x| ratio(got.value, x)),
                    sssp_calls: got.sssp_calls,
                    ms,
                });
            }
        }
    }
    Ok(table)
}

/// `f64` as a JSON number, or the string `"inf"`.
mod num {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str(&fmt_num(*v))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) => parse_num(&s).map_err(serde::de::Error::custom),
        }
    }
}

mod opt_num {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(v) => num::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<f64>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "num")] f64);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}
