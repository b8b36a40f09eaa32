//! Interval-count schedules for the recursive certifier.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `c_k(tau) = 2^(k-2)(1+tau) / (2^(k-1)(1+tau) - tau)`.
pub fn ck(k: u32, tau: f64) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("c_k requires k >= 2, got {k}")));
    }
    if !(tau >= 0.0) {
        return Err(Error::InvalidParameter(format!("tau must be >= 0, got {tau}")));
    }
    Ok(ck_unchecked(k, tau))
}

fn ck_unchecked(k: u32, tau: f64) -> f64 {
    let lower = 2f64.powi(k as i32 - 2) * (1.0 + tau);
    let upper = 2f64.powi(k as i32 - 1) * (1.0 + tau) - tau;
    lower / upper
}

/// Exponent of the depth-`k` cost `n^(2 c_k + 1)` with standard APSP. The
/// `k = 1` level is plain APSP, cubic in the vertex count.
fn apsp_exponent_base(k: u32) -> f64 {
    if k <= 1 {
        1.0
    } else {
        ck_unchecked(k, 1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartitionStrategy {
    /// `p = ceil(n^(1/k))`.
    Sqrt,
    /// Balances interval searches against recursive APSP cost.
    Balanced,
    /// Whichever of the two predicts less work.
    Auto,
}

impl FromStr for PartitionStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sqrt" => Ok(PartitionStrategy::Sqrt),
            "balanced" => Ok(PartitionStrategy::Balanced),
            "auto" => Ok(PartitionStrategy::Auto),
            other => Err(Error::InvalidParameter(format!("unknown strategy `{other}`"))),
        }
    }
}

impl fmt::Display for PartitionStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartitionStrategy::Sqrt => "sqrt",
            PartitionStrategy::Balanced => "balanced",
            PartitionStrategy::Auto => "auto",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionPlan {
    pub k: u32,
    pub p: usize,
    /// The schedule actually used; never `Auto`.
    pub strategy: PartitionStrategy,
    /// `c_j(1)` for `j = 1..=k`, with `c_1 = 1`.
    pub ck_values: Vec<f64>,
}

/// Smallest `p` with `p^k >= n`.
fn sqrt_schedule(n: usize, k: u32) -> usize {
    let mut p = (n as f64).powf(1.0 / k as f64).floor().max(1.0) as usize;
    while p > 1 && (p - 1).checked_pow(k).map_or(false, |v| v >= n) {
        p -= 1;
    }
    while p.checked_pow(k).map_or(false, |v| v < n) {
        p += 1;
    }
    p.min(n.max(1))
}

/// Smallest `p >= 1` with `m p >= (n/p)^(2 c_{k-1}) n`.
fn balanced_schedule(n: usize, m: usize, k: u32) -> usize {
    let exponent = 2.0 * apsp_exponent_base(k - 1);
    let (nf, mf) = (n as f64, m.max(1) as f64);
    let satisfied = |p: usize| mf * p as f64 >= (nf / p as f64).powf(exponent) * nf;
    // The predicate is monotone in p.
    let (mut lo, mut hi) = (1usize, n.max(1));
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if satisfied(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

fn predicted_cost(n: usize, m: usize, k: u32, p: usize, strategy: PartitionStrategy) -> f64 {
    let (nf, mf, pf) = (n as f64, m.max(1) as f64, p as f64);
    let searches = mf * pf;
    let recursive = match strategy {
        PartitionStrategy::Sqrt => mf * (nf / pf).powf(1.0 / (k - 1) as f64),
        _ => (nf / pf).powf(2.0 * apsp_exponent_base(k - 1)) * nf,
    };
    searches + recursive
}

pub fn choose_partition(n: usize, m: usize, k: u32, strategy: PartitionStrategy) -> PartitionPlan {
    let k = k.max(2);
    let n = n.max(1);
    let (p, resolved) = match strategy {
        PartitionStrategy::Sqrt => (sqrt_schedule(n, k), PartitionStrategy::Sqrt),
        PartitionStrategy::Balanced => (balanced_schedule(n, m, k), PartitionStrategy::Balanced),
        PartitionStrategy::Auto => {
            let ps = sqrt_schedule(n, k);
            let pb = balanced_schedule(n, m, k);
            let cs = predicted_cost(n, m, k, ps, PartitionStrategy::Sqrt);
            let cb = predicted_cost(n, m, k, pb, PartitionStrategy::Balanced);
            if cb < cs {
                (pb, PartitionStrategy::Balanced)
            } else {
                (ps, PartitionStrategy::Sqrt)
            }
        }
    };
    PartitionPlan {
        k,
        p: p.clamp(1, n),
        strategy: resolved,
        ck_values: (1..=k).map(apsp_exponent_base).collect(),
    }
}
