use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::dag::{Dag, INF};

/// Size cap `ceil(n^ε)`, at least 1. Values within rounding noise of an
/// integer are snapped to it so `16^0.5` gives 4, not 5.
pub fn near_set_cap(n: usize, epsilon: f64) -> usize {
    if n == 0 {
        return 1;
    }
    let x = (n as f64).powf(epsilon.clamp(0.0, 1.0));
    let rounded = x.round();
    let cap = if (x - rounded).abs() < 1e-9 { rounded } else { x.ceil() };
    (cap as usize).clamp(1, n)
}

/// Per-vertex capped neighborhoods: `X_u` holds the left-most members of the
/// out-ball of radius `floor(D'/2)` around `u`, `Y_w` the right-most members of
/// the in-ball of radius `ceil(D'/2)` around `w`. Members are vertex ids in
/// topological order.
#[derive(Clone, Debug, Serialize)]
pub struct NearSetFamily {
    pub d_prime: u64,
    pub epsilon: f64,
    pub cap: usize,
    pub out_radius: u64,
    pub in_radius: u64,
    pub x: Vec<Vec<usize>>,
    pub y: Vec<Vec<usize>>,
    pub saturated_out: Vec<bool>,
    pub saturated_in: Vec<bool>,
}

impl NearSetFamily {
    pub fn saturated_count(&self) -> usize {
        self.saturated_out.iter().chain(&self.saturated_in).filter(|&&s| s).count()
    }
}

/// Grows one capped ball. With `mirrored` unset it walks out-edges and keeps
/// the left-most members; with it set it walks in-edges and keeps the
/// right-most. Each member keeps a pointer to its next unclaimed neighbor in
/// topological order; the smallest pointer target is the next ball member.
struct BallBuilder<'a> {
    dag: &'a Dag,
    mirrored: bool,
    stamp: Vec<u32>,
    epoch: u32,
    dist: Vec<u64>,
}

impl<'a> BallBuilder<'a> {
    fn new(dag: &'a Dag, mirrored: bool) -> Self {
        BallBuilder {
            dag,
            mirrored,
            stamp: vec![0; dag.n()],
            epoch: 0,
            dist: vec![INF; dag.n()],
        }
    }

    fn edges(&self, p: usize) -> &'a [(usize, u64)] {
        if self.mirrored {
            self.dag.bwd(p)
        } else {
            self.dag.fwd(p)
        }
    }

    /// Position of the `i`-th neighbor of `p` in walking order.
    fn neighbor(&self, p: usize, i: usize) -> Option<(usize, u64)> {
        let edges = self.edges(p);
        if i >= edges.len() {
            return None;
        }
        Some(if self.mirrored { edges[edges.len() - 1 - i] } else { edges[i] })
    }

    fn key(&self, p: usize) -> usize {
        if self.mirrored {
            self.dag.n() - 1 - p
        } else {
            p
        }
    }

    fn in_ball(&self, p: usize) -> bool {
        self.stamp[p] == self.epoch
    }

    /// Next neighbor index `>= i` of `p` not yet in the ball and within reach.
    fn advance(&self, p: usize, mut i: usize, limit: u64) -> Option<usize> {
        let d = self.dist[p];
        while let Some((q, w)) = self.neighbor(p, i) {
            if !self.in_ball(q) && d.saturating_add(w) <= limit {
                return Some(i);
            }
            i += 1;
        }
        None
    }

    /// Returns member positions in walking order and whether the cap was hit.
    fn build(&mut self, start: usize, limit: u64, cap: usize) -> (Vec<usize>, bool) {
        self.epoch += 1;
        let mut members = vec![start];
        self.stamp[start] = self.epoch;
        self.dist[start] = 0;
        // (key of pointer target, owner position, neighbor index)
        let mut heap: BinaryHeap<Reverse<(usize, usize, usize)>> = BinaryHeap::new();
        let push = |heap: &mut BinaryHeap<_>, this: &Self, owner: usize, from: usize| {
            if let Some(i) = this.advance(owner, from, limit) {
                let (q, _) = this.neighbor(owner, i).unwrap();
                heap.push(Reverse((this.key(q), owner, i)));
            }
        };
        push(&mut heap, self, start, 0);

        let mut owners = Vec::new();
        while members.len() < cap {
            let Some(Reverse((key, owner, i))) = heap.pop() else {
                break;
            };
            owners.clear();
            owners.push((owner, i));
            while let Some(&Reverse((k2, o2, i2))) = heap.peek() {
                if k2 != key {
                    break;
                }
                heap.pop();
                owners.push((o2, i2));
            }
            let (q, _) = self.neighbor(owner, i).unwrap();
            let mut best = INF;
            for &(o, idx) in &owners {
                let (_, w) = self.neighbor(o, idx).unwrap();
                best = best.min(self.dist[o] + w);
            }
            self.stamp[q] = self.epoch;
            self.dist[q] = best;
            members.push(q);
            for &(o, idx) in &owners {
                push(&mut heap, self, o, idx + 1);
            }
            push(&mut heap, self, q, 0);
        }
        let saturated = members.len() == cap;
        (members, saturated)
    }
}

/// Builds `X_u` and `Y_w` for every vertex with cap `ceil(n^ε)`.
pub fn build_near_sets(dag: &Dag, d_prime: u64, epsilon: f64) -> NearSetFamily {
    let n = dag.n();
    let cap = near_set_cap(n, epsilon);
    let out_radius = d_prime / 2;
    let in_radius = d_prime.div_ceil(2);

    let mut x = vec![Vec::new(); n];
    let mut y = vec![Vec::new(); n];
    let mut saturated_out = vec![false; n];
    let mut saturated_in = vec![false; n];

    let mut forward = BallBuilder::new(dag, false);
    let mut backward = BallBuilder::new(dag, true);
    for p in 0..n {
        let v = dag.vertex_at(p);
        let (members, sat) = forward.build(p, out_radius, cap);
        x[v] = members.into_iter().map(|q| dag.vertex_at(q)).collect();
        saturated_out[v] = sat;

        let (mut members, sat) = backward.build(p, in_radius, cap);
        members.reverse();
        y[v] = members.into_iter().map(|q| dag.vertex_at(q)).collect();
        saturated_in[v] = sat;
    }

    NearSetFamily {
        d_prime,
        epsilon,
        cap,
        out_radius,
        in_radius,
        x,
        y,
        saturated_out,
        saturated_in,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dag::Direction;

    fn path(n: usize) -> Dag {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1)).collect();
        Dag::new(n, &edges).unwrap()
    }

    fn random_unweighted(seed: u64, n: usize, density: u64) -> Dag {
        let mut edges = Vec::new();
        let mut s = seed.wrapping_mul(0x9E3779B97F4A7C15) | 1;
        let perm: Vec<usize> = (0..n).map(|i| (i + 7 * seed as usize) % n).collect();
        for u in 0..n {
            for v in u + 1..n {
                s ^= s << 13;
                s ^= s >> 7;
                s ^= s << 17;
                if s % 100 < density {
                    edges.push((perm[u], perm[v], 1));
                }
            }
        }
        Dag::new(n, &edges).unwrap()
    }

    /// Recomputes the balls with full searches and takes the capped prefix.
    fn expected(dag: &Dag, v: usize, radius: u64, cap: usize, outward: bool) -> Vec<usize> {
        let dir = if outward { Direction::Out } else { Direction::In };
        let dist = dag.sssp(v, dir).unwrap();
        let mut ball: Vec<usize> = (0..dag.n())
            .filter(|&x| dist[x].get().is_some_and(|d| d <= radius))
            .collect();
        ball.sort_by_key(|&x| dag.position(x));
        if outward {
            ball.truncate(cap);
        } else {
            ball.drain(..ball.len().saturating_sub(cap));
        }
        ball
    }

    #[test]
    fn cap_values() {
        assert_eq!(near_set_cap(16, 0.5), 4);
        assert_eq!(near_set_cap(17, 0.5), 5);
        assert_eq!(near_set_cap(100, 0.0), 1);
        assert_eq!(near_set_cap(100, 1.0), 100);
        assert_eq!(near_set_cap(1000, 1.0 / 3.0), 10);
    }

    #[test]
    fn path_prefix_is_capped() {
        let dag = path(5);
        let eps = (2f64).ln() / (5f64).ln();
        let fam = build_near_sets(&dag, 4, eps);
        assert_eq!(fam.cap, 2);
        assert_eq!(fam.x[0], vec![0, 1]);
        assert!(fam.saturated_out[0]);
        assert_eq!(fam.y[4], vec![3, 4]);
    }

    #[test]
    fn zero_radius_gives_singletons() {
        let dag = random_unweighted(3, 20, 30);
        let fam = build_near_sets(&dag, 0, 0.7);
        for v in 0..20 {
            assert_eq!(fam.x[v], vec![v]);
            assert_eq!(fam.y[v], vec![v]);
        }
    }

    #[test]
    fn uncapped_sets_are_full_balls() {
        let dag = random_unweighted(5, 24, 15);
        let fam = build_near_sets(&dag, 3, 1.0);
        for v in 0..24 {
            assert_eq!(fam.x[v], expected(&dag, v, 1, 24, true));
            assert_eq!(fam.y[v], expected(&dag, v, 2, 24, false));
            assert!(!fam.saturated_out[v] || fam.x[v].len() == 24);
        }
    }

    #[test]
    fn sets_are_extremal_prefixes_of_balls() {
        for seed in 0..40 {
            let n = 8 + (seed as usize * 3) % 50;
            let dag = random_unweighted(seed, n, 4 + seed % 25);
            for d_prime in [1u64, 2, 3, 4, 7] {
                for eps in [0.0, 0.3, 0.5, 0.8] {
                    let fam = build_near_sets(&dag, d_prime, eps);
                    for v in 0..n {
                        let xs = expected(&dag, v, d_prime / 2, fam.cap, true);
                        let ys = expected(&dag, v, d_prime.div_ceil(2), fam.cap, false);
                        assert_eq!(fam.x[v], xs, "X seed {seed} D' {d_prime} v {v}");
                        assert_eq!(fam.y[v], ys, "Y seed {seed} D' {d_prime} v {v}");
                        assert_eq!(fam.saturated_out[v], xs.len() == fam.cap);
                        assert_eq!(fam.saturated_in[v], ys.len() == fam.cap);
                    }
                }
            }
        }
    }
}
