//! Per-vertex `(r, kr)` certification of min-eccentricities.
//!
//! All work happens on topological positions. Because every vertex set the
//! algorithm touches is topologically consecutive, an induced subgraph
//! `G[W]` is just a window of positions: a path between two vertices of a
//! consecutive window never leaves it.

use serde::{Deserialize, Serialize};

use super::partition::{choose_partition, PartitionStrategy};
use crate::dag::{Dag, VertexInterval, INF};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    /// `ε(v) > r`
    GreaterThanR,
    /// `ε(v) <= k r`
    AtMostKR,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCounters {
    /// Set-search sweeps (one per direction).
    pub sssp_calls: u64,
    /// Depth-1 exact calls on a window.
    pub apsp_calls: u64,
    /// Deepest recursion level entered; the top call is level 1.
    pub max_depth: u32,
    /// Edges scanned by all sweeps, including base-case APSP.
    pub relaxations: u64,
}

impl SearchCounters {
    pub fn absorb(&mut self, other: &SearchCounters) {
        self.sssp_calls += other.sssp_calls;
        self.apsp_calls += other.apsp_calls;
        self.max_depth = self.max_depth.max(other.max_depth);
        self.relaxations += other.relaxations;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certification {
    pub r: u64,
    pub k: u32,
    /// Indexed by vertex id.
    pub verdicts: Vec<Verdict>,
    pub counters: SearchCounters,
}

impl Certification {
    pub fn verdict(&self, v: usize) -> Verdict {
        self.verdicts[v]
    }

    pub fn at_most(&self) -> impl Iterator<Item = usize> + '_ {
        self.verdicts
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == Verdict::AtMostKR)
            .map(|(i, _)| i)
    }

    pub fn any_at_most(&self) -> bool {
        self.verdicts.contains(&Verdict::AtMostKR)
    }
}

/// A consecutive `S ⊆ W` with `ε(S) <= r`, everything in `W` before `S` having
/// `ε > r`, and every member of `S` having `ε > r` when `|S| > 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedSubset {
    pub within: VertexInterval,
    pub subset: VertexInterval,
}

pub(crate) struct Certifier<'a> {
    dag: &'a Dag,
    r: u64,
    strategy: PartitionStrategy,
    pub(crate) counters: SearchCounters,
    scratch: Vec<u64>,
}

impl<'a> Certifier<'a> {
    pub(crate) fn new(dag: &'a Dag, r: u64, strategy: PartitionStrategy) -> Self {
        Certifier {
            dag,
            // INF must never compare as "<= r".
            r: r.min(INF - 1),
            strategy,
            counters: SearchCounters::default(),
            scratch: vec![INF; dag.n()],
        }
    }

    /// Whether `ε(S) <= r` inside the window `[lo, hi)`, for `S = [a, b)`.
    /// Stops at the first vertex farther than `r`.
    fn set_within_r(&mut self, lo: usize, hi: usize, a: usize, b: usize) -> bool {
        let r = self.r;
        let dag = self.dag;
        let dist = &mut self.scratch;

        // Right of S: d(S, x), pulled over in-edges from sources >= a.
        self.counters.sssp_calls += 1;
        for x in b..hi {
            let mut best = INF;
            for &(s, w) in dag.bwd(x).iter().rev() {
                if s < a {
                    break;
                }
                self.counters.relaxations += 1;
                let ds = if s < b { 0 } else { dist[s] };
                if ds != INF && ds + w < best {
                    best = ds + w;
                }
            }
            if best > r {
                return false;
            }
            dist[x] = best;
        }

        // Left of S: d(x, S), pulled over out-edges into targets < b.
        self.counters.sssp_calls += 1;
        for x in (lo..a).rev() {
            let mut best = INF;
            for &(t, w) in dag.fwd(x) {
                if t >= b {
                    break;
                }
                self.counters.relaxations += 1;
                let dt = if t >= a { 0 } else { dist[t] };
                if dt != INF && dt + w < best {
                    best = dt + w;
                }
            }
            if best > r {
                return false;
            }
            dist[x] = best;
        }
        true
    }

    /// Halving search for the certified subset of `[a, b)`. With `mirrored`
    /// set, runs the same search on the edge-reversed graph: halves are taken
    /// from the right end and the right half is preferred.
    fn certified_subset(&mut self, lo: usize, hi: usize, a: usize, b: usize, mirrored: bool) -> (usize, usize) {
        let (mut a, mut b) = (a, b);
        while b - a > 1 {
            let half = (b - a).div_ceil(2);
            let (first, second) = if mirrored {
                ((b - half, b), (a, b - half))
            } else {
                ((a, a + half), (a + half, b))
            };
            if self.set_within_r(lo, hi, first.0, first.1) {
                (a, b) = first;
            } else if self.set_within_r(lo, hi, second.0, second.1) {
                (a, b) = second;
            } else {
                break;
            }
        }
        (a, b)
    }

    /// Exact verdicts within `[lo, hi)`: one pulled sweep per source.
    fn exact_window(&mut self, lo: usize, hi: usize) -> Vec<bool> {
        self.counters.apsp_calls += 1;
        let dag = self.dag;
        let len = hi - lo;
        let mut ecc = vec![0u64; len];
        let dist = &mut self.scratch;
        for x in lo..hi {
            dist[x] = 0;
            let mut row_max = 0;
            for y in x + 1..hi {
                let mut best = INF;
                for &(s, w) in dag.bwd(y).iter().rev() {
                    if s < x {
                        break;
                    }
                    self.counters.relaxations += 1;
                    let ds = dist[s];
                    if ds != INF && ds + w < best {
                        best = ds + w;
                    }
                }
                dist[y] = best;
                row_max = row_max.max(best);
                let col = &mut ecc[y - lo];
                *col = (*col).max(best);
            }
            let own = &mut ecc[x - lo];
            *own = (*own).max(row_max);
        }
        ecc.into_iter().map(|e| e <= self.r).collect()
    }

    /// `true` = AT_MOST_KR for each position in `[lo, hi)`.
    pub(crate) fn certify_window(&mut self, lo: usize, hi: usize, k: u32, depth: u32) -> Vec<bool> {
        self.counters.max_depth = self.counters.max_depth.max(depth);
        if hi <= lo {
            return Vec::new();
        }
        if k <= 1 {
            return self.exact_window(lo, hi);
        }
        let len = hi - lo;
        let m_window: usize = (lo..hi)
            .map(|p| self.dag.fwd(p).iter().take_while(|&&(q, _)| q < hi).count())
            .sum();
        let p = choose_partition(len, m_window, k, self.strategy).p;
        let (base, extra) = (len / p, len % p);

        let mut verdicts = vec![false; len];
        let mut a = lo;
        for i in 0..p {
            let b = a + base + usize::from(i < extra);
            if !self.set_within_r(lo, hi, a, b) {
                a = b;
                continue;
            }
            let (sa, sb) = self.certified_subset(lo, hi, a, b, false);
            let (ta, tb) = self.certified_subset(lo, hi, a, b, true);
            let inner = self.certify_window(a, b, k - 1, depth + 1);
            for w in a..b {
                let rec = inner[w - a];
                // Vertices left of the interval reach w through S.
                let left_ok = if w < sa {
                    false
                } else if w < sb {
                    sb - sa == 1
                } else {
                    rec
                };
                // w reaches vertices right of the interval through S'.
                let right_ok = if w >= tb {
                    false
                } else if w >= ta {
                    tb - ta == 1
                } else {
                    rec
                };
                verdicts[w - lo] = left_ok && right_ok && rec;
            }
            a = b;
        }
        verdicts
    }
}

fn check_interval(dag: &Dag, w: VertexInterval) -> Result<()> {
    if w.is_empty() {
        return Err(Error::EmptySet);
    }
    if w.end > dag.n() {
        return Err(Error::InvalidParameter(format!(
            "interval [{}, {}) outside the graph",
            w.start, w.end
        )));
    }
    Ok(())
}

fn find_subset(dag: &Dag, w: VertexInterval, r: u64, mirrored: bool) -> Result<CertifiedSubset> {
    check_interval(dag, w)?;
    let mut certifier = Certifier::new(dag, r, PartitionStrategy::Auto);
    if !certifier.set_within_r(0, dag.n(), w.start, w.end) {
        return Err(Error::PreconditionViolated(format!(
            "ε of interval [{}, {}) exceeds r = {r}",
            w.start, w.end
        )));
    }
    let (a, b) = certifier.certified_subset(0, dag.n(), w.start, w.end, mirrored);
    Ok(CertifiedSubset {
        within: w,
        subset: VertexInterval::new(a, b),
    })
}

/// Binary search for a certified subset of a consecutive interval `W` with
/// `ε(W) <= r`.
pub fn find_certified_subset(dag: &Dag, w: VertexInterval, r: u64) -> Result<CertifiedSubset> {
    find_subset(dag, w, r, false)
}

/// The same search on the edge-reversed graph: vertices of `W` *after* the
/// subset have `ε > r`.
pub fn find_certified_subset_reversed(dag: &Dag, w: VertexInterval, r: u64) -> Result<CertifiedSubset> {
    find_subset(dag, w, r, true)
}

/// Certifies for every vertex that `ε(v) > r` or that `ε(v) <= k r`.
/// `k = 1` is the exact base case.
pub fn certify_eccentricities(dag: &Dag, r: u64, k: u32, strategy: PartitionStrategy) -> Result<Certification> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let mut certifier = Certifier::new(dag, r, strategy);
    let by_position = certifier.certify_window(0, dag.n(), k, 1);
    let mut verdicts = vec![Verdict::GreaterThanR; dag.n()];
    for (p, ok) in by_position.into_iter().enumerate() {
        if ok {
            verdicts[dag.vertex_at(p)] = Verdict::AtMostKR;
        }
    }
    Ok(Certification {
        r,
        k,
        verdicts,
        counters: certifier.counters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dag::Distance;
    use crate::exact::exact_summary;

    fn path(n: usize) -> Dag {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1)).collect();
        Dag::new(n, &edges).unwrap()
    }

    fn ecc_by_position(dag: &Dag) -> Vec<Distance> {
        let s = exact_summary(dag).unwrap();
        (0..dag.n()).map(|p| s.eccentricities[dag.vertex_at(p)]).collect()
    }

    fn pseudo_random_dag(seed: u64, n: usize, density: u64, w_max: u64) -> Dag {
        let mut edges = Vec::new();
        let mut s = seed ^ 0x9E3779B97F4A7C15;
        for u in 0..n {
            for v in u + 1..n {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                if s % 100 < density {
                    edges.push((u, v, 1 + (s >> 20) % w_max));
                }
            }
        }
        Dag::new(n, &edges).unwrap()
    }

    fn fin(v: u64) -> Distance {
        Distance::finite(v)
    }

    fn assert_subset_clauses(dag: &Dag, cs: &CertifiedSubset, r: u64, mirrored: bool) {
        let ecc = ecc_by_position(dag);
        let s = cs.subset;
        assert!(!s.is_empty());
        assert!(cs.within.start <= s.start && s.end <= cs.within.end);
        let members: Vec<usize> = s.positions().map(|p| dag.vertex_at(p)).collect();
        assert!(dag.epsilon_of_set(&members).unwrap() <= fin(r), "(a)");
        let outside: Vec<usize> = if mirrored {
            (s.end..cs.within.end).collect()
        } else {
            (cs.within.start..s.start).collect()
        };
        for p in outside {
            assert!(ecc[p] > fin(r), "(b) at position {p}");
        }
        if s.len() > 1 {
            for p in s.positions() {
                assert!(ecc[p] > fin(r), "(c) at position {p}");
            }
        }
    }

    #[test]
    fn path_subset_is_singleton() {
        let dag = path(8);
        let cs = find_certified_subset(&dag, dag.full_interval(), 7).unwrap();
        assert_eq!(cs.subset.len(), 1);
        assert_subset_clauses(&dag, &cs, 7, false);
    }

    #[test]
    fn singleton_interval_halts_immediately() {
        let dag = path(5);
        let w = dag.interval(2, 3).unwrap();
        let cs = find_certified_subset(&dag, w, 2).unwrap();
        assert_eq!(cs.subset, w);
    }

    #[test]
    fn precondition_is_checked() {
        let dag = path(5);
        let w = dag.interval(0, 1).unwrap();
        assert!(matches!(
            find_certified_subset(&dag, w, 3),
            Err(Error::PreconditionViolated(_))
        ));
        assert_eq!(
            find_certified_subset(&dag, dag.interval(2, 2).unwrap(), 3).unwrap_err(),
            Error::EmptySet
        );
    }

    #[test]
    fn subset_clauses_hold_at_exact_radius() {
        for seed in 0..40 {
            let dag = pseudo_random_dag(seed, 32, 12 + seed % 20, 1 + seed % 4);
            let radius = exact_summary(&dag).unwrap().min_radius;
            let Some(r) = radius.get() else { continue };
            let cs = find_certified_subset(&dag, dag.full_interval(), r).unwrap();
            assert_subset_clauses(&dag, &cs, r, false);
            let cs = find_certified_subset_reversed(&dag, dag.full_interval(), r).unwrap();
            assert_subset_clauses(&dag, &cs, r, true);
        }
    }

    #[test]
    fn large_r_gives_all_at_most() {
        for seed in 0..10 {
            let dag = pseudo_random_dag(seed, 20, 30, 3);
            let d = exact_summary(&dag).unwrap().min_diameter;
            let Some(d) = d.get() else { continue };
            let cert = certify_eccentricities(&dag, d, 2, PartitionStrategy::Auto).unwrap();
            assert!(cert.verdicts.iter().all(|&v| v == Verdict::AtMostKR));
        }
    }

    #[test]
    fn disjoint_edges_are_all_greater() {
        let dag = Dag::new(4, &[(0, 1, 1), (2, 3, 1)]).unwrap();
        for r in [0, 1, 5, 1000] {
            let cert = certify_eccentricities(&dag, r, 2, PartitionStrategy::Sqrt).unwrap();
            assert!(cert.verdicts.iter().all(|&v| v == Verdict::GreaterThanR));
        }
    }

    #[test]
    fn base_case_is_exact() {
        for seed in 0..20 {
            let dag = pseudo_random_dag(seed, 16, 25, 5);
            let ecc = exact_summary(&dag).unwrap().eccentricities;
            for r in 0..12 {
                let cert = certify_eccentricities(&dag, r, 1, PartitionStrategy::Auto).unwrap();
                for v in 0..16 {
                    assert_eq!(cert.verdicts[v] == Verdict::AtMostKR, ecc[v] <= fin(r));
                }
            }
        }
    }

    #[test]
    fn soundness_for_several_depths_and_strategies() {
        for seed in 0..60 {
            let n = 4 + (seed as usize * 11) % 40;
            let dag = pseudo_random_dag(seed, n, 5 + seed % 40, 1 + seed % 6);
            let ecc = exact_summary(&dag).unwrap().eccentricities;
            for k in 2..=4u32 {
                for strategy in [PartitionStrategy::Sqrt, PartitionStrategy::Balanced, PartitionStrategy::Auto] {
                    for r in [0u64, 1, 2, 3, 5, 8, 13] {
                        let cert = certify_eccentricities(&dag, r, k, strategy).unwrap();
                        for v in 0..n {
                            match cert.verdicts[v] {
                                Verdict::GreaterThanR => assert!(ecc[v] > fin(r)),
                                Verdict::AtMostKR => assert!(ecc[v] <= fin(k as u64 * r)),
                            }
                        }
                        assert!(cert.counters.max_depth >= 1);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_k_zero() {
        assert!(certify_eccentricities(&path(3), 1, 0, PartitionStrategy::Auto).is_err());
    }
}
