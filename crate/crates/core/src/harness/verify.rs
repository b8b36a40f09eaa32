use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dag::{Dag, Distance};
use crate::error::{Error, Result};
use crate::exact::{exact_summary_capped, ExactSummary};
use crate::generators::{gen_connected_dag, gen_random_dag};
use crate::mindiam::{certify_min_diameter, DiameterVerdict, EpsilonChoice};
use crate::minecc::{certify_eccentricities, PartitionStrategy, Verdict};
use crate::registry::{Params, Registry};

pub const DEFAULT_ORACLE_CAP: usize = 256;

/// A generated instance, replayable from its fields alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub n: usize,
    pub m: usize,
    pub w_max: u64,
    pub seed: u64,
    /// Path backbone through the order, so every min-eccentricity is finite.
    pub connected: bool,
}

impl InstanceSpec {
    pub fn build(&self) -> Result<Dag> {
        if self.connected {
            gen_connected_dag(self.n, self.m, self.w_max, self.seed)
        } else {
            gen_random_dag(self.n, self.m, self.w_max, self.seed)
        }
    }
}

impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.connected { "connected-dag" } else { "random-dag" };
        write!(f, "{kind} n={} m={} w_max={} seed={}", self.n, self.m, self.w_max, self.seed)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub instances: Vec<InstanceSpec>,
}

impl CorpusSpec {
    /// 600 instances: `n ∈ {16, 32, 64, 128}`, `m/n ∈ {1.5, 4, n/4}`, unit
    /// weights and weights up to 10, 25 seeds each; odd seeds get a backbone.
    pub fn default_corpus(seed: u64) -> Self {
        let mut instances = Vec::new();
        for n in [16usize, 32, 64, 128] {
            for density in [1.5, 4.0, n as f64 / 4.0] {
                for w_max in [1u64, 10] {
                    for i in 0..25u64 {
                        let max_m = n * (n - 1) / 2;
                        let m = ((density * n as f64).round() as usize).min(max_m);
                        instances.push(InstanceSpec {
                            n,
                            m,
                            w_max,
                            seed: seed.wrapping_mul(1_000_003).wrapping_add(instances.len() as u64),
                            connected: i % 2 == 1,
                        });
                    }
                }
            }
        }
        CorpusSpec { instances }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyOptions {
    pub ks: Vec<u32>,
    pub deltas: Vec<f64>,
    pub strategy: PartitionStrategy,
    pub epsilon: EpsilonChoice,
    pub oracle_cap: usize,
    pub certifiers: bool,
    /// Test hook: overwrite this estimator's outputs with garbage so the
    /// harness must report it.
    pub corrupt: Option<String>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            ks: vec![2, 3],
            deltas: vec![0.1, 1.0],
            strategy: PartitionStrategy::Auto,
            epsilon: EpsilonChoice::Formula,
            oracle_cap: DEFAULT_ORACLE_CAP,
            certifiers: true,
            corrupt: None,
        }
    }
}

impl VerifyOptions {
    fn grid(&self) -> Vec<Params> {
        self.ks
            .iter()
            .flat_map(|&k| {
                self.deltas.iter().map(move |&delta| Params {
                    k,
                    delta,
                    strategy: self.strategy,
                    epsilon: self.epsilon,
                })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub instance: String,
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerifyReport {
    pub instances: usize,
    pub checks: u64,
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct InstanceOutcome {
    checks: u64,
    violations: Vec<Violation>,
}

/// Runs every registered estimator on every instance and compares against the
/// exact oracle; with `certifiers` set also checks both certifiers' verdicts.
pub fn cmd_verify(corpus: &CorpusSpec, registry: &Registry, options: &VerifyOptions) -> Result<VerifyReport> {
    if let Some(name) = &options.corrupt {
        registry.get(name)?;
    }
    if let Some(big) = corpus.instances.iter().find(|s| s.n > options.oracle_cap) {
        return Err(Error::OracleCapExceeded { n: big.n, cap: options.oracle_cap });
    }
    let mut report = VerifyReport {
        instances: corpus.instances.len(),
        ..VerifyReport::default()
    };
    if corpus.instances.is_empty() {
        report.warnings.push("0 instances in corpus; nothing verified".into());
        return Ok(report);
    }
    let outcomes: Vec<Result<InstanceOutcome>> = corpus
        .instances
        .par_iter()
        .map(|spec| verify_instance(spec, registry, options))
        .collect();
    for outcome in outcomes {
        let outcome = outcome?;
        report.checks += outcome.checks;
        report.violations.extend(outcome.violations);
    }
    Ok(report)
}

fn verify_instance(spec: &InstanceSpec, registry: &Registry, options: &VerifyOptions) -> Result<InstanceOutcome> {
    let dag = spec.build()?;
    let exact = exact_summary_capped(&dag, options.oracle_cap)?;
    let grid = options.grid();
    let mut out = InstanceOutcome { checks: 0, violations: Vec::new() };
    let mut flag = |check: String, detail: String| {
        out.violations.push(Violation {
            instance: spec.to_string(),
            check,
            detail,
        })
    };

    let mut checks = 0;
    for est in registry.iter().filter(|e| e.supports(&dag)) {
        for params in est.distinct_params(&grid) {
            let mut got = est.estimate(&dag, &params)?;
            if options.corrupt.as_deref() == Some(est.name()) {
                got.value = -1.0;
                got.detail = serde_json::Value::Null;
                if let Some(v) = &mut got.per_vertex {
                    v.iter_mut().for_each(|x| *x = -1.0);
                }
            }
            checks += 1;
            for detail in est.violations(&got, &exact, &params) {
                flag(format!("{} k={} delta={}", est.name(), params.k, params.delta), detail);
            }
        }
    }

    if options.certifiers {
        checks += certifier_checks(&dag, &exact, options, &mut flag)?;
    }
    out.checks = checks;
    Ok(out)
}

fn certifier_checks(
    dag: &Dag,
    exact: &ExactSummary,
    options: &VerifyOptions,
    flag: &mut impl FnMut(String, String),
) -> Result<u64> {
    let mut checks = 0;
    let mut rs = vec![1u64];
    if let Some(r) = exact.min_radius.get() {
        rs.extend([r, 2 * r]);
    }
    rs.sort_unstable();
    rs.dedup();
    for &k in &options.ks {
        for &r in &rs {
            let cert = certify_eccentricities(dag, r, k, options.strategy)?;
            checks += 1;
            let kr = Distance::finite(r.saturating_mul(k as u64));
            for (v, &ecc) in exact.eccentricities.iter().enumerate() {
                let bad = match cert.verdict(v) {
                    Verdict::GreaterThanR => ecc <= Distance::finite(r),
                    Verdict::AtMostKR => ecc > kr,
                };
                if bad {
                    flag(
                        format!("certify k={k} r={r}"),
                        format!("vertex {v} with eps {ecc} got {:?}", cert.verdict(v)),
                    );
                }
            }
        }
    }

    if dag.is_unweighted() {
        let epsilon = options.epsilon.resolve(dag.n(), dag.m());
        let mut ds = vec![];
        match exact.min_diameter.get() {
            Some(d) => ds.extend([d.saturating_sub(1), d, 2 * d]),
            None => ds.push(dag.n().saturating_sub(1) as u64),
        }
        ds.sort_unstable();
        ds.dedup();
        for d_prime in ds {
            let c = certify_min_diameter(dag, d_prime, epsilon)?;
            checks += 1;
            let bad = match c.verdict {
                DiameterVerdict::DGtDprime => exact.min_diameter <= Distance::finite(d_prime),
                DiameterVerdict::DLeCeil3DprimeHalf => {
                    exact.min_diameter > Distance::finite((3 * d_prime).div_ceil(2))
                }
            };
            if bad {
                flag(
                    format!("certify-diameter D'={d_prime}"),
                    format!("D = {} got {:?}", exact.min_diameter, c.verdict),
                );
            }
        }
    }
    Ok(checks)
}
