//! Weighted DAG with a fixed topological order.
//!
//! Vertices are dense ids `0..n`. The topological order is computed once when
//! the graph is built; all shortest-path routines are single relaxation sweeps
//! over that order. Internally a second copy of the adjacency is kept indexed by
//! topological *position*, with neighbor lists sorted by position, which is what
//! the approximation algorithms work on.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Raw infinity sentinel for the position-indexed sweeps.
pub(crate) const INF: u64 = u64::MAX;

/// A nonnegative path length or infinity. Infinity absorbs addition and
/// compares greater than every finite length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Distance(u64);

impl Distance {
    pub const ZERO: Distance = Distance(0);
    pub const INFINITY: Distance = Distance(INF);

    /// Panics if `value` collides with the infinity sentinel.
    pub fn finite(value: u64) -> Self {
        assert!(value != INF, "finite distance out of range");
        Distance(value)
    }

    pub(crate) fn from_raw(raw: u64) -> Self {
        Distance(raw)
    }

    pub fn is_finite(self) -> bool {
        self.0 != INF
    }

    pub fn is_infinite(self) -> bool {
        self.0 == INF
    }

    pub fn get(self) -> Option<u64> {
        self.is_finite().then_some(self.0)
    }

    /// Lossy conversion for reporting; infinity maps to `f64::INFINITY`.
    pub fn as_f64(self) -> f64 {
        match self.get() {
            Some(v) => v as f64,
            None => f64::INFINITY,
        }
    }

    pub fn add(self, other: Distance) -> Distance {
        Distance(add_raw(self.0, other.0))
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.get() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Distance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "inf" {
            return Ok(Distance::INFINITY);
        }
        s.parse::<u64>()
            .ok()
            .filter(|&v| v != INF)
            .map(Distance)
            .ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("invalid distance `{s}`"),
            })
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.get() {
            Some(v) => serializer.serialize_u64(v),
            None => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Distance {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(v) if v != INF => Ok(Distance(v)),
            Repr::Text(s) if s == "inf" => Ok(Distance::INFINITY),
            _ => Err(serde::de::Error::custom("expected a distance or \"inf\"")),
        }
    }
}

#[inline]
pub(crate) fn add_raw(a: u64, b: u64) -> u64 {
    if a == INF || b == INF {
        INF
    } else {
        a + b
    }
}

/// Direction of a single-source search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Distances from the source: `d(source, x)`.
    Out,
    /// Distances to the source: `d(x, source)`.
    In,
}

/// Direction of a search relative to a vertex set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetDirection {
    /// `x -> min_{w in W} d(x, w)`.
    IntoSet,
    /// `x -> min_{w in W} d(w, x)`.
    OutOfSet,
}

/// A half-open range `[start, end)` of topological positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexInterval {
    pub start: usize,
    pub end: usize,
}

impl VertexInterval {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        VertexInterval { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn contains(&self, position: usize) -> bool {
        (self.start..self.end).contains(&position)
    }

    pub fn positions(&self) -> std::ops::Range<usize> {
        self.start..self.end
    }
}

#[derive(Clone, Debug)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<(usize, u64)>,
}

impl Csr {
    fn build(n: usize, mut lists: Vec<Vec<(usize, u64)>>, sort: bool) -> Self {
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for list in lists.iter_mut() {
            if sort {
                list.sort_unstable();
            }
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        Csr { offsets, targets }
    }

    #[inline]
    fn row(&self, i: usize) -> &[(usize, u64)] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }
}

/// Immutable weighted DAG.
#[derive(Clone, Debug)]
pub struct Dag {
    n: usize,
    edges: Vec<(usize, usize, u64)>,
    out_adj: Csr,
    in_adj: Csr,
    order: Vec<usize>,
    position: Vec<usize>,
    // Same graph, vertices replaced by their topological positions.
    fwd: Csr,
    bwd: Csr,
    w_max: u64,
    w_min_pos: Option<u64>,
}

impl Dag {
    /// Builds the graph and its topological order (Kahn's algorithm, ties broken
    /// by smallest vertex id).
    pub fn new(n: usize, edges: &[(usize, usize, u64)]) -> Result<Self> {
        let mut total: u64 = 0;
        for &(u, v, w) in edges {
            for vertex in [u, v] {
                if vertex >= n {
                    return Err(Error::VertexOutOfRange { vertex, n });
                }
            }
            total = total
                .checked_add(w)
                .filter(|&t| t != INF)
                .ok_or(Error::WeightOverflow)?;
        }

        let mut out_lists = vec![Vec::new(); n];
        let mut in_lists = vec![Vec::new(); n];
        let mut indegree = vec![0usize; n];
        for &(u, v, w) in edges {
            out_lists[u].push((v, w));
            in_lists[v].push((u, w));
            indegree[v] += 1;
        }

        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &(v, _) in &out_lists[u] {
                indegree[v] -= 1;
                if indegree[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
        if order.len() != n {
            return Err(Error::CycleDetected);
        }
        let mut position = vec![0; n];
        for (p, &v) in order.iter().enumerate() {
            position[v] = p;
        }

        let mut fwd_lists = vec![Vec::new(); n];
        let mut bwd_lists = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            fwd_lists[position[u]].push((position[v], w));
            bwd_lists[position[v]].push((position[u], w));
        }

        let w_max = edges.iter().map(|e| e.2).max().unwrap_or(0);
        let w_min_pos = edges.iter().map(|e| e.2).filter(|&w| w > 0).min();

        Ok(Dag {
            n,
            edges: edges.to_vec(),
            out_adj: Csr::build(n, out_lists, false),
            in_adj: Csr::build(n, in_lists, false),
            order,
            position,
            fwd: Csr::build(n, fwd_lists, true),
            bwd: Csr::build(n, bwd_lists, true),
            w_max,
            w_min_pos,
        })
    }

    /// Signed-weight entry point; rejects negative weights.
    pub fn from_signed_edges(n: usize, edges: &[(usize, usize, i64)]) -> Result<Self> {
        let mut unsigned = Vec::with_capacity(edges.len());
        for &(u, v, w) in edges {
            if w < 0 {
                return Err(Error::NegativeWeight(u, v));
            }
            unsigned.push((u, v, w as u64));
        }
        Dag::new(n, &unsigned)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> &[(usize, u64)] {
        self.out_adj.row(v)
    }

    pub fn in_edges(&self, v: usize) -> &[(usize, u64)] {
        self.in_adj.row(v)
    }

    /// Vertices in topological order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn vertex_at(&self, position: usize) -> usize {
        self.order[position]
    }

    pub fn w_max(&self) -> u64 {
        self.w_max
    }

    /// Smallest strictly positive edge weight, if any.
    pub fn w_min_pos(&self) -> Option<u64> {
        self.w_min_pos
    }

    /// `M = max(w_max, 1)`; with integer weights `1/w_min_pos <= 1`.
    pub fn weight_scale(&self) -> u64 {
        self.w_max.max(1)
    }

    /// `M * n`, an upper bound on every finite distance.
    pub fn distance_bound(&self) -> u64 {
        self.weight_scale().saturating_mul(self.n.max(1) as u64)
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.2 == 1)
    }

    pub fn interval(&self, start: usize, end: usize) -> Result<VertexInterval> {
        if start > end || end > self.n {
            return Err(Error::InvalidParameter(format!(
                "interval [{start}, {end}) outside [0, {})",
                self.n
            )));
        }
        Ok(VertexInterval::new(start, end))
    }

    /// The whole vertex set as one interval.
    pub fn full_interval(&self) -> VertexInterval {
        VertexInterval::new(0, self.n)
    }

    /// Out-edges of the vertex at `position`, as `(target position, weight)`
    /// sorted by target position.
    #[inline]
    pub(crate) fn fwd(&self, position: usize) -> &[(usize, u64)] {
        self.fwd.row(position)
    }

    /// In-edges of the vertex at `position`, sorted by source position.
    #[inline]
    pub(crate) fn bwd(&self, position: usize) -> &[(usize, u64)] {
        self.bwd.row(position)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    /// Single-source distances by one relaxation pass over the topological order.
    pub fn sssp(&self, source: usize, direction: Direction) -> Result<Vec<Distance>> {
        self.check_vertex(source)?;
        let mut dist = vec![INF; self.n];
        let p = self.position[source];
        dist[p] = 0;
        match direction {
            Direction::Out => self.sweep_out(p, self.n, &mut dist),
            Direction::In => self.sweep_in(0, p + 1, &mut dist),
        }
        Ok(self.by_vertex(&dist))
    }

    /// Distances to (or from) the nearest member of `set`, equivalent to a
    /// search from a virtual vertex joined to the set by weight-0 edges.
    pub fn sssp_set(&self, set: &[usize], direction: SetDirection) -> Result<Vec<Distance>> {
        let (lo, hi) = self.seed_set(set)?;
        let mut dist = vec![INF; self.n];
        for &v in set {
            dist[self.position[v]] = 0;
        }
        match direction {
            SetDirection::OutOfSet => self.sweep_out(lo, self.n, &mut dist),
            SetDirection::IntoSet => self.sweep_in(0, hi + 1, &mut dist),
        }
        Ok(self.by_vertex(&dist))
    }

    /// `x -> d_min(x, W)`, the pointwise minimum of the two set searches.
    pub fn min_dist_to_set(&self, set: &[usize]) -> Result<Vec<Distance>> {
        let into = self.sssp_set(set, SetDirection::IntoSet)?;
        let out = self.sssp_set(set, SetDirection::OutOfSet)?;
        Ok(into.into_iter().zip(out).map(|(a, b)| a.min(b)).collect())
    }

    /// `max_x d_min(x, W)`.
    pub fn epsilon_of_set(&self, set: &[usize]) -> Result<Distance> {
        Ok(self
            .min_dist_to_set(set)?
            .into_iter()
            .max()
            .unwrap_or(Distance::ZERO))
    }

    fn seed_set(&self, set: &[usize]) -> Result<(usize, usize)> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut lo = usize::MAX;
        let mut hi = 0;
        for &v in set {
            self.check_vertex(v)?;
            lo = lo.min(self.position[v]);
            hi = hi.max(self.position[v]);
        }
        Ok((lo, hi))
    }

    fn by_vertex(&self, by_position: &[u64]) -> Vec<Distance> {
        let mut out = vec![Distance::INFINITY; self.n];
        for (p, &d) in by_position.iter().enumerate() {
            out[self.order[p]] = Distance::from_raw(d);
        }
        out
    }

    /// Pushes distances forward over positions `[from, to)`; edges leaving the
    /// window are ignored.
    pub(crate) fn sweep_out(&self, from: usize, to: usize, dist: &mut [u64]) {
        for p in from..to {
            let d = dist[p];
            if d == INF {
                continue;
            }
            for &(q, w) in self.fwd(p) {
                if q >= to {
                    break;
                }
                let nd = d + w;
                if nd < dist[q] {
                    dist[q] = nd;
                }
            }
        }
    }

    /// Pulls distances-to-target backward over positions `[from, to)`.
    pub(crate) fn sweep_in(&self, from: usize, to: usize, dist: &mut [u64]) {
        for p in (from..to).rev() {
            let d = dist[p];
            if d == INF {
                continue;
            }
            for &(q, w) in self.bwd(p).iter().rev() {
                if q < from {
                    break;
                }
                let nd = d + w;
                if nd < dist[q] {
                    dist[q] = nd;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    fn path(n: usize) -> Dag {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1)).collect();
        Dag::new(n, &edges).unwrap()
    }

    fn fin(v: u64) -> Distance {
        Distance::finite(v)
    }

    const I: Distance = Distance::INFINITY;

    fn dijkstra(dag: &Dag, source: usize) -> Vec<Distance> {
        let mut dist = vec![I; dag.n()];
        let mut heap = BinaryHeap::new();
        dist[source] = Distance::ZERO;
        heap.push(Reverse((0u64, source)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if fin(d) > dist[u] {
                continue;
            }
            for &(v, w) in dag.out_edges(u) {
                if fin(d + w) < dist[v] {
                    dist[v] = fin(d + w);
                    heap.push(Reverse((d + w, v)));
                }
            }
        }
        dist
    }

    fn lcg_dag(seed: u64, n: usize, m: usize) -> Dag {
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as usize
        };
        let perm: Vec<usize> = {
            let mut p: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                p.swap(i, next() % (i + 1));
            }
            p
        };
        let mut edges = Vec::new();
        for _ in 0..m {
            let a = next() % n;
            let b = next() % n;
            if a == b {
                continue;
            }
            let (a, b) = (a.min(b), a.max(b));
            edges.push((perm[a], perm[b], (next() % 10) as u64));
        }
        Dag::new(n, &edges).unwrap()
    }

    #[test]
    fn topo_sort_of_path_is_forced() {
        assert_eq!(path(3).order(), &[0, 1, 2]);
    }

    #[test]
    fn two_cycle_is_rejected() {
        let err = Dag::new(2, &[(0, 1, 1), (1, 0, 1)]).unwrap_err();
        assert_eq!(err, Error::CycleDetected);
    }

    #[test]
    fn empty_graph_accepts_any_order() {
        let dag = Dag::new(3, &[]).unwrap();
        let mut sorted = dag.order().to_vec();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 2]);
        assert_eq!(dag.w_min_pos(), None);
        assert_eq!(dag.weight_scale(), 1);
    }

    #[test]
    fn negative_weight_and_bad_vertex_are_rejected() {
        assert_eq!(
            Dag::from_signed_edges(2, &[(0, 1, -3)]).unwrap_err(),
            Error::NegativeWeight(0, 1)
        );
        assert!(matches!(
            Dag::new(2, &[(0, 5, 1)]),
            Err(Error::VertexOutOfRange { vertex: 5, .. })
        ));
        assert_eq!(
            Dag::new(3, &[(0, 1, u64::MAX - 1), (1, 2, 5)]).unwrap_err(),
            Error::WeightOverflow
        );
    }

    #[test]
    fn order_respects_every_edge_and_transpose_matches() {
        let dag = lcg_dag(7, 40, 200);
        for &(u, v, _) in dag.edges() {
            assert!(dag.position(u) < dag.position(v));
        }
        for u in 0..dag.n() {
            for &(v, w) in dag.out_edges(u) {
                assert!(dag.in_edges(v).contains(&(u, w)));
            }
        }
        let outs: usize = (0..dag.n()).map(|v| dag.out_edges(v).len()).sum();
        let ins: usize = (0..dag.n()).map(|v| dag.in_edges(v).len()).sum();
        assert_eq!(outs, ins);
    }

    #[test]
    fn sssp_on_path() {
        let dag = path(3);
        assert_eq!(dag.sssp(0, Direction::Out).unwrap(), vec![fin(0), fin(1), fin(2)]);
        assert_eq!(dag.sssp(0, Direction::In).unwrap(), vec![fin(0), I, I]);
        assert!(dag.sssp(9, Direction::Out).is_err());
    }

    #[test]
    fn sssp_prefers_cheaper_two_hop_path() {
        let dag = Dag::new(3, &[(0, 1, 5), (0, 2, 1), (2, 1, 1)]).unwrap();
        assert_eq!(dag.sssp(0, Direction::Out).unwrap()[1], fin(2));
    }

    #[test]
    fn set_searches_on_path() {
        let dag = path(4);
        assert_eq!(
            dag.sssp_set(&[1, 2], SetDirection::IntoSet).unwrap(),
            vec![fin(1), fin(0), fin(0), I]
        );
        assert_eq!(
            dag.sssp_set(&[1, 2], SetDirection::OutOfSet).unwrap(),
            vec![I, fin(0), fin(0), fin(1)]
        );
        let all: Vec<usize> = (0..4).collect();
        for dir in [SetDirection::IntoSet, SetDirection::OutOfSet] {
            assert!(dag.sssp_set(&all, dir).unwrap().iter().all(|&d| d == Distance::ZERO));
        }
        assert_eq!(dag.sssp_set(&[], SetDirection::IntoSet).unwrap_err(), Error::EmptySet);
    }

    #[test]
    fn min_dist_to_set_examples() {
        let dag = path(4);
        assert_eq!(dag.min_dist_to_set(&[1]).unwrap(), vec![fin(1), fin(0), fin(1), fin(2)]);
        assert_eq!(dag.epsilon_of_set(&[1]).unwrap(), fin(2));

        let isolated = Dag::new(2, &[]).unwrap();
        assert_eq!(isolated.min_dist_to_set(&[0]).unwrap(), vec![fin(0), I]);
        assert_eq!(isolated.epsilon_of_set(&[0]).unwrap(), I);
        assert_eq!(isolated.min_dist_to_set(&[]).unwrap_err(), Error::EmptySet);
    }

    #[test]
    fn min_dist_to_set_matches_per_pair_searches() {
        for seed in 0..20 {
            let dag = lcg_dag(seed, 10, 18);
            let set: Vec<usize> = (0..10).filter(|v| (v * 7 + seed as usize) % 4 == 0).collect();
            if set.is_empty() {
                continue;
            }
            let rows: Vec<Vec<Distance>> = (0..10).map(|v| dijkstra(&dag, v)).collect();
            let expected: Vec<Distance> = (0..10)
                .map(|x| set.iter().map(|&w| rows[x][w].min(rows[w][x])).min().unwrap())
                .collect();
            assert_eq!(dag.min_dist_to_set(&set).unwrap(), expected);
        }
    }

    #[test]
    fn sweep_equals_heap_dijkstra_on_random_dags() {
        for seed in 0..100 {
            let n = 2 + (seed as usize * 13) % 63;
            let dag = lcg_dag(seed, n, n * 3);
            for s in 0..n {
                assert_eq!(dag.sssp(s, Direction::Out).unwrap(), dijkstra(&dag, s));
            }
        }
    }

    #[test]
    fn singleton_set_search_matches_sssp() {
        let dag = lcg_dag(3, 30, 90);
        for w in 0..30 {
            assert_eq!(
                dag.sssp_set(&[w], SetDirection::IntoSet).unwrap(),
                dag.sssp(w, Direction::In).unwrap()
            );
            assert_eq!(
                dag.sssp_set(&[w], SetDirection::OutOfSet).unwrap(),
                dag.sssp(w, Direction::Out).unwrap()
            );
        }
    }

    #[test]
    fn distance_text_and_json_forms() {
        assert_eq!(Distance::INFINITY.to_string(), "inf");
        assert_eq!("inf".parse::<Distance>().unwrap(), I);
        assert_eq!("17".parse::<Distance>().unwrap(), fin(17));
        assert_eq!(serde_json::to_string(&vec![fin(3), I]).unwrap(), r#"[3,"inf"]"#);
        let back: Vec<Distance> = serde_json::from_str(r#"[3,"inf"]"#).unwrap();
        assert_eq!(back, vec![fin(3), I]);
        assert_eq!(fin(2).add(I), I);
    }
}
