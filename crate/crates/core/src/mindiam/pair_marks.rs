use super::near_sets::NearSetFamily;
use crate::dag::Dag;

/// Bitset rows over ordered pairs, indexed by topological position: bit `q` of
/// row `p` is the pair (vertex at `p`, vertex at `q`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairMarks {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    position: Vec<usize>,
}

impl PairMarks {
    pub fn new(dag: &Dag) -> Self {
        let n = dag.n();
        let words = n.div_ceil(64);
        PairMarks {
            n,
            words,
            bits: vec![0; n * words],
            position: (0..n).map(|v| dag.position(v)).collect(),
        }
    }

    #[inline]
    fn row(&self, p: usize) -> &[u64] {
        &self.bits[p * self.words..(p + 1) * self.words]
    }

    #[inline]
    pub(crate) fn mark_positions(&mut self, p: usize, q: usize) {
        self.bits[p * self.words + q / 64] |= 1 << (q % 64);
    }

    pub fn is_marked_positions(&self, p: usize, q: usize) -> bool {
        self.row(p)[q / 64] >> (q % 64) & 1 == 1
    }

    /// Whether the pair of vertex ids `(u, w)` is marked.
    pub fn is_marked(&self, u: usize, w: usize) -> bool {
        self.is_marked_positions(self.position[u], self.position[w])
    }

    /// Marks row `p` from column `max(from, p + 1)` to the end.
    pub(crate) fn mark_row_from(&mut self, p: usize, from: usize) {
        let from = from.max(p + 1);
        if from >= self.n {
            return;
        }
        let base = p * self.words;
        let (first_word, last_word) = (from / 64, (self.n - 1) / 64);
        for wi in first_word..=last_word {
            let mut mask = u64::MAX;
            if wi == first_word {
                mask &= u64::MAX << (from % 64);
            }
            if wi == last_word && self.n % 64 != 0 {
                mask &= u64::MAX >> (64 - self.n % 64);
            }
            self.bits[base + wi] |= mask;
        }
    }

    /// Marks column `q` for rows `0..=min(upto, q - 1)`.
    pub(crate) fn mark_column_upto(&mut self, q: usize, upto: usize) {
        if q == 0 {
            return;
        }
        for p in 0..=upto.min(q - 1) {
            self.mark_positions(p, q);
        }
    }

    pub fn marked_count(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// First ordered pair `(u, w)` (vertex ids, `u` before `w`) left unmarked.
    /// Rows are screened by popcount against the `n - 1 - p` pairs they should
    /// hold.
    pub fn first_unmarked(&self, dag: &Dag) -> Option<(usize, usize)> {
        for p in 0..self.n {
            let expected = (self.n - 1 - p) as u64;
            let count: u64 = self.row(p).iter().map(|w| w.count_ones() as u64).sum();
            if count == expected {
                continue;
            }
            let q = (p + 1..self.n).find(|&q| !self.is_marked_positions(p, q))?;
            return Some((dag.vertex_at(p), dag.vertex_at(q)));
        }
        None
    }
}

/// Marks every pair `(u, w)`, `u != w`, with `X_u ∩ Y_w` nonempty: for each
/// witness `t`, the cross product of `{u : t ∈ X_u}` and `{w : t ∈ Y_w}`.
pub fn sparse_pair_product(dag: &Dag, family: &NearSetFamily) -> PairMarks {
    let n = dag.n();
    let mut heads: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut tails: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in 0..n {
        for &t in &family.x[v] {
            heads[t].push(dag.position(v));
        }
        for &t in &family.y[v] {
            tails[t].push(dag.position(v));
        }
    }
    let mut marks = PairMarks::new(dag);
    for t in 0..n {
        for &p in &heads[t] {
            for &q in &tails[t] {
                if p != q {
                    marks.mark_positions(p, q);
                }
            }
        }
    }
    marks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mindiam::near_sets::build_near_sets;

    fn family_from(dag: &Dag, x: Vec<Vec<usize>>, y: Vec<Vec<usize>>) -> NearSetFamily {
        let n = dag.n();
        NearSetFamily {
            d_prime: 0,
            epsilon: 0.0,
            cap: n,
            out_radius: 0,
            in_radius: 0,
            x,
            y,
            saturated_out: vec![false; n],
            saturated_in: vec![false; n],
        }
    }

    #[test]
    fn shared_witness_marks_pair() {
        let dag = Dag::new(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        let fam = family_from(&dag, vec![vec![1], vec![1], vec![2]], vec![vec![0], vec![1], vec![1]]);
        let marks = sparse_pair_product(&dag, &fam);
        assert!(marks.is_marked(0, 1) && marks.is_marked(0, 2) && marks.is_marked(1, 2));
        assert!(!marks.is_marked(1, 1));
        assert_eq!(marks.marked_count(), 3);
    }

    #[test]
    fn disjoint_sets_mark_nothing() {
        let dag = Dag::new(4, &[]).unwrap();
        let fam = family_from(&dag, (0..4).map(|v| vec![v]).collect(), (0..4).map(|v| vec![v]).collect());
        assert_eq!(sparse_pair_product(&dag, &fam).marked_count(), 0);
    }

    #[test]
    fn row_and_column_ranges() {
        let n = 130;
        let dag = Dag::new(n, &[]).unwrap();
        let mut marks = PairMarks::new(&dag);
        marks.mark_row_from(3, 0);
        assert!(!marks.is_marked_positions(3, 3));
        assert!((4..n).all(|q| marks.is_marked_positions(3, q)));
        marks.mark_row_from(5, 70);
        assert!(!marks.is_marked_positions(5, 69));
        assert_eq!(marks.marked_count(), (n - 4 + n - 70) as u64);
        marks.mark_column_upto(100, 1000);
        assert!(marks.is_marked_positions(99, 100));
        assert!(!marks.is_marked_positions(100, 100));
        assert_eq!(marks.first_unmarked(&dag).map(|(u, w)| (dag.position(u), dag.position(w))), Some((0, 1)));
    }

    #[test]
    fn product_matches_pairwise_intersection() {
        for seed in 0..20u64 {
            let n = 40;
            let mut edges = Vec::new();
            let mut s = seed + 1;
            for u in 0..n {
                for v in u + 1..n {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
                    if (s >> 58) < 5 {
                        edges.push((u, v, 1));
                    }
                }
            }
            let dag = Dag::new(n, &edges).unwrap();
            let fam = build_near_sets(&dag, 2 + seed % 5, 0.4);
            let marks = sparse_pair_product(&dag, &fam);
            for u in 0..n {
                for w in 0..n {
                    let meet = u != w && fam.x[u].iter().any(|t| fam.y[w].contains(t));
                    assert_eq!(marks.is_marked(u, w), meet);
                }
            }
        }
    }
}
