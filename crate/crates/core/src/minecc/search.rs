//! Parameter searches on top of the certifier: per-vertex eccentricity
//! estimates by a geometric sweep of `r`, and the min-radius bracket search.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::certify::{certify_eccentricities, Certification, SearchCounters};
use super::partition::PartitionStrategy;
use crate::dag::{Dag, Distance};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EccentricityEstimates {
    /// `ε'(v)`, indexed by vertex; `f64::INFINITY` when `ε(v) = ∞`.
    #[serde(with = "f64_inf_vec")]
    pub estimates: Vec<f64>,
    pub certify_calls: u32,
    pub counters: SearchCounters,
}

fn validate_k(k: u32) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k must be at least 2, got {k}")));
    }
    Ok(())
}

struct Runner<'a> {
    dag: &'a Dag,
    k: u32,
    strategy: PartitionStrategy,
    calls: u32,
    counters: SearchCounters,
}

impl<'a> Runner<'a> {
    fn certify(&mut self, r: u64) -> Certification {
        let cert = certify_eccentricities(self.dag, r, self.k, self.strategy).expect("k >= 2");
        self.calls += 1;
        self.counters.absorb(&cert.counters);
        cert
    }
}

/// Estimates with `ε(v) <= ε'(v) < (k + δ) ε(v)` for finite `ε(v) >= 1`,
/// `ε'(v) = 0` exactly when `ε(v) = 0`, and `ε'(v) = ∞` exactly when `ε(v) = ∞`.
pub fn approx_min_eccentricities(
    dag: &Dag,
    k: u32,
    delta: f64,
    strategy: PartitionStrategy,
) -> Result<EccentricityEstimates> {
    validate_k(k)?;
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!("delta must be > 0, got {delta}")));
    }
    let n = dag.n();
    let mut run = Runner {
        dag,
        k,
        strategy,
        calls: 0,
        counters: SearchCounters::default(),
    };
    let mut estimates = vec![f64::INFINITY; n];
    if n == 0 {
        return Ok(EccentricityEstimates {
            estimates,
            certify_calls: 0,
            counters: run.counters,
        });
    }

    // The geometric sweep cannot represent zero; settle ε = 0 first.
    let zero = run.certify(0);
    for v in zero.at_most() {
        estimates[v] = 0.0;
    }
    // Vertices still ">" at the largest finite distance have ε = ∞; the sweep
    // only needs to settle the rest.
    let top = dag.distance_bound();
    let ceiling = run.certify(top);
    let mut pending: Vec<usize> = ceiling.at_most().filter(|&v| estimates[v] != 0.0).collect();

    let factor = 1.0 + delta / k as f64;
    let mut r = 1.0f64;
    let mut last_floor = None;
    while !pending.is_empty() {
        // Integer distances: certifying at r and at floor(r) is the same call.
        let floor = r.floor().min(u64::MAX as f64) as u64;
        if last_floor != Some(floor) {
            last_floor = Some(floor);
            let cert = run.certify(floor);
            pending.retain(|&v| {
                if cert.verdict(v) == super::certify::Verdict::AtMostKR {
                    estimates[v] = k as f64 * r;
                    false
                } else {
                    true
                }
            });
        }
        r *= factor;
    }
    Ok(EccentricityEstimates {
        estimates,
        certify_calls: run.calls,
        counters: run.counters,
    })
}

/// Nonnegative rational bound or infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    Finite(BigRational),
    Infinite,
}

impl Bound {
    pub fn from_integer(v: u64) -> Self {
        Bound::Finite(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Bound::Finite(q) => q.to_f64().unwrap_or(f64::INFINITY),
            Bound::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Bound::Infinite)
    }

    /// Whether `lower <= self < factor * lower`, with `0` matched only by `0`
    /// and `∞` only by `∞`.
    pub fn within_factor_of(&self, lower: Distance, factor: u64) -> bool {
        match (self, lower.get()) {
            (Bound::Infinite, None) => true,
            (Bound::Finite(q), Some(0)) => q.is_zero(),
            (Bound::Finite(q), Some(exact)) => {
                let exact = BigRational::from_integer(BigInt::from(exact));
                let upper = &exact * BigRational::from_integer(BigInt::from(factor));
                &exact <= q && q < &upper
            }
            _ => false,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Bound::Finite(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Bound::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusTermination {
    /// Exact zero or infinity detected before the search.
    Trivial,
    /// Bracket closed and `k A` is provably an upper bound.
    Bracket,
    /// Bracket closed but an integer distance could still lie in `(kA, B]`;
    /// resolved exactly from the last upper-bound certificate.
    Resolved,
}

#[derive(Clone, Debug, Serialize)]
pub struct RadiusEstimate {
    /// `R'` with `R <= R' < k R`.
    pub value: Bound,
    pub iterations: u32,
    pub termination: RadiusTermination,
    pub certify_calls: u32,
    pub counters: SearchCounters,
}

fn rational(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn floor_u64(q: &BigRational) -> u64 {
    q.floor().to_integer().to_u64().unwrap_or(u64::MAX)
}

/// Bracket search keeping `A < R <= B` with `C = B - kA` shrinking by
/// `k / (k + 1)` per certification.
pub fn approx_min_radius(dag: &Dag, k: u32, strategy: PartitionStrategy) -> Result<RadiusEstimate> {
    validate_k(k)?;
    if dag.n() == 0 {
        return Err(Error::InvalidParameter("graph has no vertices".into()));
    }
    let mut run = Runner {
        dag,
        k,
        strategy,
        calls: 0,
        counters: SearchCounters::default(),
    };
    let finish = |run: Runner, value, iterations, termination| RadiusEstimate {
        value,
        iterations,
        termination,
        certify_calls: run.calls,
        counters: run.counters,
    };

    if run.certify(0).any_at_most() {
        return Ok(finish(run, Bound::from_integer(0), 0, RadiusTermination::Trivial));
    }
    let top = dag.distance_bound();
    let ceiling = run.certify(top);
    if !ceiling.any_at_most() {
        return Ok(finish(run, Bound::Infinite, 0, RadiusTermination::Trivial));
    }
    // R is finite and positive, so some edge weight is positive.
    let w_min = rational(dag.w_min_pos().expect("positive radius needs a positive weight"));

    let kq = rational(k as u64);
    let k1 = rational(k as u64 + 1);
    let mut a = rational(0);
    let mut b = rational(top);
    // Integer upper bound on R from the latest "some vertex <= kr" answer,
    // together with the vertices that answer named.
    let mut upper_int = top;
    let mut upper_witnesses: Vec<usize> = ceiling.at_most().collect();
    let mut iterations = 0;

    loop {
        let c = &b - &kq * &a;
        if c < w_min {
            break;
        }
        iterations += 1;
        let r = &a + &c / &k1;
        let r_floor = floor_u64(&r);
        let cert = run.certify(r_floor);
        if cert.any_at_most() {
            b = &kq * &r;
            let candidate = r_floor.saturating_mul(k as u64);
            if candidate <= upper_int {
                upper_int = candidate;
                upper_witnesses = cert.at_most().collect();
            }
        } else {
            a = r;
        }
    }

    let ka = &kq * &a;
    if rational(upper_int) <= ka {
        return Ok(finish(run, Bound::Finite(ka), iterations, RadiusTermination::Bracket));
    }

    // Some integer in (kA, upper_int] may still be the radius. Every witness
    // has ε <= upper_int; if the center is among them the minimum is R,
    // otherwise R > upper_int / k and any witness is below kR.
    let lower_int = floor_u64(&a) + 1;
    let mut best = Distance::INFINITY;
    for &v in &upper_witnesses {
        let ecc = dag.epsilon_of_set(&[v]).expect("vertex in range");
        run.counters.sssp_calls += 2;
        best = best.min(ecc);
        if ecc.get().is_some_and(|e| e < lower_int.saturating_mul(k as u64)) {
            break;
        }
    }
    let value = match best.get() {
        Some(v) => Bound::from_integer(v),
        None => Bound::Infinite,
    };
    Ok(finish(run, value, iterations, RadiusTermination::Resolved))
}

mod f64_inf_vec {
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            if v.is_finite() {
                seq.serialize_element(v)?;
            } else {
                seq.serialize_element("inf")?;
            }
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        Vec::<Repr>::deserialize(d)?
            .into_iter()
            .map(|r| match r {
                Repr::Num(v) => Ok(v),
                Repr::Text(t) if t == "inf" => Ok(f64::INFINITY),
                Repr::Text(t) => Err(serde::de::Error::custom(format!("bad value `{t}`"))),
            })
            .collect()
    }
}
