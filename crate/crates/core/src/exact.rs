//! Ground truth: all-pairs distances and exact min-eccentricities.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dag::{Dag, Distance, INF};
use crate::error::{Error, Result};

/// Row-major `n x n` distance matrix indexed by vertex id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApspMatrix {
    n: usize,
    data: Vec<Distance>,
}

impl ApspMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> Distance {
        self.data[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[Distance] {
        &self.data[u * self.n..(u + 1) * self.n]
    }

    pub fn min_dist(&self, u: usize, v: usize) -> Distance {
        self.get(u, v).min(self.get(v, u))
    }

    /// CSV dump, one row per source vertex, `inf` for unreachable pairs.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for u in 0..self.n {
            let row: Vec<String> = self.row(u).iter().map(|d| d.to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// `n` forward sweeps, one per source; rows are computed in parallel.
pub fn apsp(dag: &Dag) -> ApspMatrix {
    let n = dag.n();
    let rows: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|p| {
            let mut dist = vec![INF; n];
            dist[p] = 0;
            dag.sweep_out(p, n, &mut dist);
            dist
        })
        .collect();
    let mut data = vec![Distance::INFINITY; n * n];
    for (p, row) in rows.iter().enumerate() {
        let u = dag.vertex_at(p);
        for (q, &d) in row.iter().enumerate() {
            data[u * n + dag.vertex_at(q)] = Distance::from_raw(d);
        }
    }
    ApspMatrix { n, data }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactSummary {
    pub eccentricities: Vec<Distance>,
    pub min_diameter: Distance,
    pub min_radius: Distance,
    /// Smallest-id vertex attaining the min-radius.
    pub center: usize,
}

impl ExactSummary {
    pub fn from_eccentricities(eccentricities: Vec<Distance>) -> Result<Self> {
        let (center, &min_radius) = eccentricities
            .iter()
            .enumerate()
            .min_by_key(|&(v, e)| (*e, v))
            .ok_or_else(|| Error::InvalidParameter("graph has no vertices".into()))?;
        let min_diameter = *eccentricities.iter().max().unwrap();
        Ok(ExactSummary {
            eccentricities,
            min_diameter,
            min_radius,
            center,
        })
    }
}

pub fn eccentricities_from_matrix(matrix: &ApspMatrix) -> Vec<Distance> {
    (0..matrix.n())
        .map(|v| {
            (0..matrix.n())
                .map(|w| matrix.min_dist(v, w))
                .max()
                .unwrap_or(Distance::ZERO)
        })
        .collect()
}

pub fn exact_summary(dag: &Dag) -> Result<ExactSummary> {
    ExactSummary::from_eccentricities(eccentricities_from_matrix(&apsp(dag)))
}

/// Rejects graphs above `cap` vertices before running the quadratic oracle.
pub fn exact_summary_capped(dag: &Dag, cap: usize) -> Result<ExactSummary> {
    if dag.n() > cap {
        return Err(Error::OracleCapExceeded { n: dag.n(), cap });
    }
    exact_summary(dag)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(v: u64) -> Distance {
        Distance::finite(v)
    }

    fn path(n: usize) -> Dag {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1)).collect();
        Dag::new(n, &edges).unwrap()
    }

    // Exhaustive DFS over all paths from `u`.
    fn enumerate_paths(dag: &Dag, u: usize, acc: u64, best: &mut [Distance]) {
        if fin(acc) < best[u] {
            best[u] = fin(acc);
        }
        for &(v, w) in dag.out_edges(u) {
            enumerate_paths(dag, v, acc + w, best);
        }
    }

    fn small_random(seed: u64, n: usize) -> Dag {
        let mut edges = Vec::new();
        let mut s = seed;
        for u in 0..n {
            for v in u + 1..n {
                s = s.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
                if (s >> 60) < 5 {
                    edges.push((u, v, (s >> 32) % 7));
                }
            }
        }
        Dag::new(n, &edges).unwrap()
    }

    #[test]
    fn path_rows_and_summary() {
        let dag = path(3);
        let m = apsp(&dag);
        assert_eq!(m.row(0), &[fin(0), fin(1), fin(2)]);
        let s = exact_summary(&dag).unwrap();
        assert_eq!(s.eccentricities, vec![fin(2), fin(1), fin(2)]);
        assert_eq!(s.min_radius, fin(1));
        assert_eq!(s.min_diameter, fin(2));
        assert_eq!(s.center, 1);
    }

    #[test]
    fn empty_graph_off_diagonal_is_infinite() {
        let m = apsp(&Dag::new(2, &[]).unwrap());
        assert_eq!(m.get(0, 1), Distance::INFINITY);
        assert_eq!(m.get(1, 0), Distance::INFINITY);
        assert_eq!(m.get(0, 0), Distance::ZERO);
        assert_eq!(m.to_csv(), "0,inf\ninf,0\n");
    }

    #[test]
    fn single_vertex_and_disjoint_edges() {
        let s = exact_summary(&Dag::new(1, &[]).unwrap()).unwrap();
        assert_eq!(s.eccentricities, vec![Distance::ZERO]);
        assert_eq!((s.min_radius, s.min_diameter), (Distance::ZERO, Distance::ZERO));

        let s = exact_summary(&Dag::new(4, &[(0, 1, 1), (2, 3, 1)]).unwrap()).unwrap();
        assert!(s.eccentricities.iter().all(|e| e.is_infinite()));
        assert!(s.min_radius.is_infinite());
        assert!(exact_summary(&Dag::new(0, &[]).unwrap()).is_err());
    }

    #[test]
    fn matches_path_enumeration() {
        for seed in 0..10 {
            let dag = small_random(seed, 12);
            let m = apsp(&dag);
            for u in 0..12 {
                let mut best = vec![Distance::INFINITY; 12];
                enumerate_paths(&dag, u, 0, &mut best);
                assert_eq!(m.row(u), &best[..]);
            }
        }
    }

    #[test]
    fn summary_invariants_and_set_route_agree() {
        for seed in 0..100 {
            let n = 1 + (seed as usize * 7) % 64;
            let dag = small_random(seed, n);
            let s = exact_summary(&dag).unwrap();
            assert!(s.min_radius <= s.min_diameter);
            assert_eq!(s.eccentricities[s.center], s.min_radius);
            let via_sets: Vec<Distance> = (0..n).map(|v| dag.epsilon_of_set(&[v]).unwrap()).collect();
            assert_eq!(via_sets, s.eccentricities);

            // Diameter equals the longest ordered-pair distance.
            let m = apsp(&dag);
            let ordered_max = (0..n)
                .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
                .map(|(p, q)| m.get(dag.vertex_at(p), dag.vertex_at(q)))
                .max()
                .unwrap_or(Distance::ZERO);
            assert_eq!(ordered_max, s.min_diameter);
        }
    }

    #[test]
    fn cap_guard() {
        let dag = path(10);
        assert!(matches!(
            exact_summary_capped(&dag, 5),
            Err(Error::OracleCapExceeded { n: 10, cap: 5 })
        ));
        assert!(exact_summary_capped(&dag, 10).is_ok());
    }
}
