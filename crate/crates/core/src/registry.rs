//! Named estimators behind one trait, so the harness and CLI can pick them at
//! run time.

use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::dag::{Dag, Distance};
use crate::error::{Error, Result};
use crate::exact::{exact_summary, ExactSummary};
use crate::mindiam::{approx_min_diameter, EpsilonChoice};
use crate::minecc::{approx_min_eccentricities, approx_min_radius, PartitionStrategy};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Params {
    pub k: u32,
    pub delta: f64,
    pub strategy: PartitionStrategy,
    pub epsilon: EpsilonChoice,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            k: 2,
            delta: 1.0,
            strategy: PartitionStrategy::Auto,
            epsilon: EpsilonChoice::Formula,
        }
    }
}

/// Which exact quantity an estimate is compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Radius,
    Diameter,
}

impl Target {
    pub fn exact(self, summary: &ExactSummary) -> Distance {
        match self {
            Target::Radius => summary.min_radius,
            Target::Diameter => summary.min_diameter,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Estimate {
    /// Scalar estimate of the target; `f64::INFINITY` for ∞.
    #[serde(serialize_with = "inf_f64")]
    pub value: f64,
    /// Per-vertex estimates, for estimators that produce them.
    #[serde(serialize_with = "inf_f64_vec")]
    pub per_vertex: Option<Vec<f64>>,
    pub sssp_calls: u64,
    /// Parameters the estimator actually used.
    pub k: Option<u32>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    /// Full algorithm output for reporting.
    pub detail: Value,
}

struct InfF64(f64);

impl Serialize for InfF64 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str("inf")
        }
    }
}

fn inf_f64<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    InfF64(*v).serialize(s)
}

fn inf_f64_vec<S: Serializer>(v: &Option<Vec<f64>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    v.as_ref()
        .map(|v| v.iter().map(|&x| InfF64(x)).collect::<Vec<_>>())
        .serialize(s)
}

pub trait Estimator: Send + Sync {
    fn name(&self) -> &'static str;
    fn describe(&self) -> &'static str;
    fn target(&self) -> Target;
    /// Whether the estimator accepts this input at all.
    fn supports(&self, _dag: &Dag) -> bool {
        true
    }
    fn estimate(&self, dag: &Dag, params: &Params) -> Result<Estimate>;
    /// Guarantee violations of `est` against the exact values, as messages.
    fn violations(&self, est: &Estimate, exact: &ExactSummary, params: &Params) -> Vec<String>;
    /// Upper end of the allowed `estimate / exact` ratio.
    fn ratio_bound(&self, params: &Params) -> f64;
    /// The members of `grid` that give distinct runs of this estimator.
    fn distinct_params(&self, grid: &[Params]) -> Vec<Params> {
        grid.to_vec()
    }
}

fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        v.to_string()
    }
}

pub struct Exact;

impl Estimator for Exact {
    fn name(&self) -> &'static str {
        "exact"
    }
    fn describe(&self) -> &'static str {
        "all-pairs sweeps; reports the min-radius"
    }
    fn target(&self) -> Target {
        Target::Radius
    }
    fn estimate(&self, dag: &Dag, _params: &Params) -> Result<Estimate> {
        let s = exact_summary(dag)?;
        Ok(Estimate {
            value: s.min_radius.as_f64(),
            per_vertex: Some(s.eccentricities.iter().map(|d| d.as_f64()).collect()),
            sssp_calls: dag.n() as u64,
            k: None,
            delta: None,
            epsilon: None,
            detail: serde_json::to_value(&s).expect("summary serializes"),
        })
    }
    fn violations(&self, est: &Estimate, exact: &ExactSummary, _params: &Params) -> Vec<String> {
        let want = exact.min_radius.as_f64();
        if est.value == want {
            Vec::new()
        } else {
            vec![format!("radius {} != exact {}", fmt_f64(est.value), fmt_f64(want))]
        }
    }
    fn ratio_bound(&self, _params: &Params) -> f64 {
        1.0
    }
    fn distinct_params(&self, grid: &[Params]) -> Vec<Params> {
        grid.iter().take(1).copied().collect()
    }
}

pub struct EccentricityApprox;

impl Estimator for EccentricityApprox {
    fn name(&self) -> &'static str {
        "ecc-approx"
    }
    fn describe(&self) -> &'static str {
        "per-vertex estimates with eps <= eps' < (k + delta) eps; reports the smallest"
    }
    fn target(&self) -> Target {
        Target::Radius
    }
    fn estimate(&self, dag: &Dag, params: &Params) -> Result<Estimate> {
        let e = approx_min_eccentricities(dag, params.k, params.delta, params.strategy)?;
        let value = e.estimates.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(Estimate {
            value,
            per_vertex: Some(e.estimates.clone()),
            sssp_calls: e.counters.sssp_calls,
            k: Some(params.k),
            delta: Some(params.delta),
            epsilon: None,
            detail: serde_json::to_value(&e).expect("estimates serialize"),
        })
    }
    fn violations(&self, est: &Estimate, exact: &ExactSummary, params: &Params) -> Vec<String> {
        let factor = params.k as f64 + params.delta;
        let Some(per_vertex) = &est.per_vertex else {
            return vec!["no per-vertex estimates".into()];
        };
        if per_vertex.len() != exact.eccentricities.len() {
            return vec!["estimate vector has the wrong length".into()];
        }
        per_vertex
            .iter()
            .zip(&exact.eccentricities)
            .enumerate()
            .filter_map(|(v, (&got, &want))| {
                let ok = match want.get() {
                    None => got.is_infinite(),
                    Some(0) => got == 0.0,
                    Some(w) => {
                        let w = w as f64;
                        w <= got && got < factor * w
                    }
                };
                (!ok).then(|| format!("vertex {v}: eps' {} vs eps {want}", fmt_f64(got)))
            })
            .collect()
    }
    fn ratio_bound(&self, params: &Params) -> f64 {
        params.k as f64 + params.delta
    }
}

pub struct RadiusApprox;

impl Estimator for RadiusApprox {
    fn name(&self) -> &'static str {
        "radius-approx"
    }
    fn describe(&self) -> &'static str {
        "bracket search with R <= R' < kR"
    }
    fn target(&self) -> Target {
        Target::Radius
    }
    fn estimate(&self, dag: &Dag, params: &Params) -> Result<Estimate> {
        let r = approx_min_radius(dag, params.k, params.strategy)?;
        Ok(Estimate {
            value: r.value.to_f64(),
            per_vertex: None,
            sssp_calls: r.counters.sssp_calls,
            k: Some(params.k),
            delta: None,
            epsilon: None,
            detail: serde_json::to_value(&r).expect("radius serializes"),
        })
    }
    fn violations(&self, est: &Estimate, exact: &ExactSummary, params: &Params) -> Vec<String> {
        // Exact rational comparison when the full output is at hand.
        let exact_ok = est
            .detail
            .get("value")
            .and_then(Value::as_str)
            .and_then(parse_bound)
            .map(|b| b.within_factor_of(exact.min_radius, params.k as u64));
        let ok = exact_ok.unwrap_or_else(|| match exact.min_radius.get() {
            None => est.value.is_infinite(),
            Some(0) => est.value == 0.0,
            Some(r) => r as f64 <= est.value && est.value < (params.k as u64 * r) as f64,
        });
        if ok {
            Vec::new()
        } else {
            vec![format!("R' {} vs R {}", fmt_f64(est.value), exact.min_radius)]
        }
    }
    fn ratio_bound(&self, params: &Params) -> f64 {
        params.k as f64
    }
    fn distinct_params(&self, grid: &[Params]) -> Vec<Params> {
        let mut out: Vec<Params> = Vec::new();
        for p in grid {
            if !out.iter().any(|q| q.k == p.k && q.strategy == p.strategy) {
                out.push(*p);
            }
        }
        out
    }
}

fn parse_bound(s: &str) -> Option<crate::minecc::Bound> {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    if s == "inf" {
        return Some(crate::minecc::Bound::Infinite);
    }
    let q = match s.split_once('/') {
        Some((n, d)) => BigRational::new(n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?),
        None => BigRational::from_integer(s.parse::<BigInt>().ok()?),
    };
    Some(crate::minecc::Bound::Finite(q))
}

pub struct DiameterApprox;

impl Estimator for DiameterApprox {
    fn name(&self) -> &'static str {
        "diam-approx"
    }
    fn describe(&self) -> &'static str {
        "near-set covering with pair marking, D <= D0 <= ceil(3D/2); unweighted only"
    }
    fn target(&self) -> Target {
        Target::Diameter
    }
    fn supports(&self, dag: &Dag) -> bool {
        dag.is_unweighted()
    }
    fn estimate(&self, dag: &Dag, params: &Params) -> Result<Estimate> {
        let d = approx_min_diameter(dag, params.epsilon)?;
        Ok(Estimate {
            value: d.value.as_f64(),
            per_vertex: None,
            sssp_calls: d.stats.bfs_calls,
            k: None,
            delta: None,
            epsilon: Some(d.epsilon),
            detail: serde_json::to_value(&d).expect("diameter serializes"),
        })
    }
    fn violations(&self, est: &Estimate, exact: &ExactSummary, _params: &Params) -> Vec<String> {
        let ok = match exact.min_diameter.get() {
            None => est.value.is_infinite(),
            Some(d) => d as f64 <= est.value && est.value <= (3 * d).div_ceil(2) as f64,
        };
        if ok {
            Vec::new()
        } else {
            vec![format!("D0 {} vs D {}", fmt_f64(est.value), exact.min_diameter)]
        }
    }
    fn ratio_bound(&self, _params: &Params) -> f64 {
        // ceil(3D/2) / D is largest at D = 1.
        2.0
    }
    fn distinct_params(&self, grid: &[Params]) -> Vec<Params> {
        let mut out: Vec<Params> = Vec::new();
        for p in grid {
            if !out.iter().any(|q| q.epsilon == p.epsilon) {
                out.push(*p);
            }
        }
        out
    }
}

pub struct Registry {
    estimators: Vec<Box<dyn Estimator>>,
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Registry { estimators: Vec::new() };
        r.register(Box::new(Exact));
        r.register(Box::new(EccentricityApprox));
        r.register(Box::new(RadiusApprox));
        r.register(Box::new(DiameterApprox));
        r
    }
}

impl Registry {
    pub fn empty() -> Self {
        Registry { estimators: Vec::new() }
    }

    /// Adds an estimator, replacing any with the same name.
    pub fn register(&mut self, estimator: Box<dyn Estimator>) {
        self.estimators.retain(|e| e.name() != estimator.name());
        self.estimators.push(estimator);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Estimator> {
        self.estimators
            .iter()
            .find(|e| e.name() == name)
            .map(|e| e.as_ref())
            .ok_or_else(|| Error::UnknownAlgorithm(name.to_string()))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.estimators.iter().map(|e| e.name()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Estimator> {
        self.estimators.iter().map(|e| e.as_ref())
    }
}
