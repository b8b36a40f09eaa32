use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::certify::{certify_min_diameter, DiameterStats, DiameterVerdict};
use crate::dag::{Dag, Distance};
use crate::error::{Error, Result};

pub const ALPHA: f64 = 0.31389;
pub const BETA: f64 = 0.5435;

/// How the near-set exponent ε is picked.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EpsilonChoice {
    Fixed(f64),
    Formula,
    Pragmatic,
}

impl EpsilonChoice {
    pub fn resolve(self, n: usize, m: usize) -> f64 {
        match self {
            EpsilonChoice::Fixed(e) => e,
            EpsilonChoice::Formula => choose_epsilon(n, m),
            EpsilonChoice::Pragmatic => choose_epsilon_pragmatic(n, m),
        }
    }
}

impl FromStr for EpsilonChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "formula" => Ok(EpsilonChoice::Formula),
            "pragmatic" => Ok(EpsilonChoice::Pragmatic),
            _ => s
                .parse::<f64>()
                .ok()
                .filter(|e| (0.0..=1.0).contains(e))
                .map(EpsilonChoice::Fixed)
                .ok_or_else(|| Error::InvalidParameter(format!("bad epsilon choice {s:?}"))),
        }
    }
}

impl fmt::Display for EpsilonChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpsilonChoice::Fixed(e) => write!(f, "{e}"),
            EpsilonChoice::Formula => f.write_str("formula"),
            EpsilonChoice::Pragmatic => f.write_str("pragmatic"),
        }
    }
}

fn density(n: usize, m: usize) -> Option<f64> {
    if n < 2 {
        return None;
    }
    Some((m.max(1) as f64).ln() / (n as f64).ln())
}

/// `(αβ + (β+1)(γ-1)) / (3β+1)` with `γ = log_n m`, clamped to `[0, 1]`.
pub fn choose_epsilon(n: usize, m: usize) -> f64 {
    let Some(gamma) = density(n, m) else { return 0.0 };
    ((ALPHA * BETA + (BETA + 1.0) * (gamma - 1.0)) / (3.0 * BETA + 1.0)).clamp(0.0, 1.0)
}

/// Balances the searches around the covering set, `n^(1-ε) m`, against the
/// marking work `n^(1+2ε)`: `ε = γ/3`.
pub fn choose_epsilon_pragmatic(n: usize, m: usize) -> f64 {
    let Some(gamma) = density(n, m) else { return 0.0 };
    (gamma / 3.0).clamp(0.0, 1.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct DiameterEstimate {
    /// `D₀ = ceil(3C/2)`, or infinite.
    pub value: Distance,
    /// Smallest `D'` certified as `D <= ceil(3D'/2)`.
    pub threshold: Option<u64>,
    pub epsilon: f64,
    pub certify_calls: u32,
    pub stats: DiameterStats,
}

/// `D₀` with `D <= D₀ <= ceil(3D/2)` for unweighted DAGs.
pub fn approx_min_diameter(dag: &Dag, choice: EpsilonChoice) -> Result<DiameterEstimate> {
    let n = dag.n();
    if n == 0 {
        return Err(Error::EmptySet);
    }
    let epsilon = choice.resolve(n, dag.m());
    let mut calls = 0;
    let mut stats = DiameterStats::default();
    let mut certify = |d: u64| -> Result<DiameterVerdict> {
        let c = certify_min_diameter(dag, d, epsilon)?;
        calls += 1;
        stats.absorb(&c.stats);
        Ok(c.verdict)
    };

    let top = n as u64 - 1;
    let threshold = if certify(top)? == DiameterVerdict::DGtDprime {
        None
    } else {
        // lo: known D > lo (-1 stands for the trivial bound); hi: certified.
        let (mut lo, mut hi) = (-1i64, top as i64);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            match certify(mid as u64)? {
                DiameterVerdict::DGtDprime => lo = mid,
                DiameterVerdict::DLeCeil3DprimeHalf => hi = mid,
            }
        }
        Some(hi as u64)
    };
    let value = match threshold {
        Some(c) => Distance::finite((3 * c).div_ceil(2)),
        None => Distance::INFINITY,
    };
    Ok(DiameterEstimate {
        value,
        threshold,
        epsilon,
        certify_calls: calls,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_summary;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn in_window(dag: &Dag, choice: EpsilonChoice) -> bool {
        let d = exact_summary(dag).unwrap().min_diameter;
        let est = approx_min_diameter(dag, choice).unwrap().value;
        match d.get() {
            Some(d) => (d..=(3 * d).div_ceil(2)).contains(&est.get().unwrap_or(u64::MAX)),
            None => est.is_infinite(),
        }
    }

    #[test]
    fn formula_values() {
        let at_one = ALPHA * BETA / (3.0 * BETA + 1.0);
        assert!((choose_epsilon(1000, 1000) - at_one).abs() < 1e-12);
        assert!((at_one - 0.06485).abs() < 1e-5);
        let at_two = (ALPHA * BETA + BETA + 1.0) / (3.0 * BETA + 1.0);
        assert!((choose_epsilon(100, 10_000) - at_two).abs() < 1e-12);
        assert_eq!(choose_epsilon(1, 0), 0.0);
        assert!((choose_epsilon_pragmatic(100, 10_000) - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn epsilon_is_clamped() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let n = rng.gen_range(0..100_000);
            let m = rng.gen_range(0..10_000_000);
            for e in [choose_epsilon(n, m), choose_epsilon_pragmatic(n, m)] {
                assert!((0.0..=1.0).contains(&e));
            }
        }
    }

    #[test]
    fn choice_parsing() {
        assert_eq!("formula".parse::<EpsilonChoice>().unwrap(), EpsilonChoice::Formula);
        assert_eq!("0.25".parse::<EpsilonChoice>().unwrap(), EpsilonChoice::Fixed(0.25));
        assert!("2".parse::<EpsilonChoice>().is_err());
        assert!("x".parse::<EpsilonChoice>().is_err());
    }

    #[test]
    fn small_cases() {
        let three = Dag::new(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        let v = approx_min_diameter(&three, EpsilonChoice::Formula).unwrap().value;
        assert!(v == Distance::finite(2) || v == Distance::finite(3));
        let edge = Dag::new(2, &[(0, 1, 1)]).unwrap();
        for eps in [0.0, 0.5, 1.0] {
            let v = approx_min_diameter(&edge, EpsilonChoice::Fixed(eps)).unwrap().value;
            assert!(v == Distance::finite(1) || v == Distance::finite(2));
        }
        let single = Dag::new(1, &[]).unwrap();
        assert_eq!(approx_min_diameter(&single, EpsilonChoice::Formula).unwrap().value, Distance::ZERO);
        let apart = Dag::new(3, &[(0, 1, 1)]).unwrap();
        assert!(approx_min_diameter(&apart, EpsilonChoice::Formula).unwrap().value.is_infinite());
        assert!(approx_min_diameter(&Dag::new(0, &[]).unwrap(), EpsilonChoice::Formula).is_err());
    }

    #[test]
    fn random_corpus_stays_in_window() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for i in 0..120 {
            let n = rng.gen_range(2..=60);
            let p = rng.gen_range(0.05..0.6);
            let mut edges: Vec<(usize, usize, u64)> = (0..n - 1).map(|v| (v, v + 1, 1)).collect();
            for u in 0..n {
                for v in u + 2..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v, 1));
                    }
                }
            }
            if i % 4 == 0 {
                edges.retain(|_| rng.gen_bool(0.9));
            }
            let dag = Dag::new(n, &edges).unwrap();
            let choice = [EpsilonChoice::Formula, EpsilonChoice::Pragmatic, EpsilonChoice::Fixed(0.5)][i % 3];
            assert!(in_window(&dag, choice), "instance {i}");
        }
    }
}
