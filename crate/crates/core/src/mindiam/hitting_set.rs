use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringSet {
    /// Chosen vertices in pick order.
    pub members: Vec<usize>,
    pub set_count: usize,
    pub min_set_size: usize,
}

impl CoveringSet {
    /// Greedy guarantee `(n / s_min) (ln p + 1)`; `0` for an empty family.
    pub fn size_bound(&self, n: usize) -> f64 {
        if self.set_count == 0 {
            return 0.0;
        }
        n as f64 / self.min_set_size as f64 * ((self.set_count as f64).ln() + 1.0)
    }
}

/// Greedy hitting set: repeatedly takes the vertex in the most uncovered sets
/// (smallest id on ties) until every set is hit.
pub fn greedy_hitting_set(sets: &[Vec<usize>], n: usize) -> Result<CoveringSet> {
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut min_set_size = usize::MAX;
    let mut deduped = Vec::with_capacity(sets.len());
    for (i, set) in sets.iter().enumerate() {
        let mut members = set.clone();
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::EmptySet);
        }
        min_set_size = min_set_size.min(members.len());
        for &v in &members {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            containing[v].push(i);
        }
        deduped.push(members);
    }

    let mut count: Vec<usize> = containing.iter().map(Vec::len).collect();
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> = (0..n)
        .filter(|&v| count[v] > 0)
        .map(|v| (count[v], Reverse(v)))
        .collect();
    let mut covered = vec![false; sets.len()];
    let mut remaining = sets.len();
    let mut members = Vec::new();

    while remaining > 0 {
        let (c, Reverse(v)) = heap.pop().expect("uncovered sets have members");
        if c != count[v] {
            if count[v] > 0 {
                heap.push((count[v], Reverse(v)));
            }
            continue;
        }
        members.push(v);
        for &i in &containing[v] {
            if covered[i] {
                continue;
            }
            covered[i] = true;
            remaining -= 1;
            for &u in &deduped[i] {
                count[u] = count[u].saturating_sub(1);
            }
        }
        count[v] = 0;
    }

    Ok(CoveringSet {
        members,
        set_count: sets.len(),
        min_set_size: if sets.is_empty() { 0 } else { min_set_size },
    })
}
