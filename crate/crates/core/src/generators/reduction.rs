use serde::Serialize;

use super::gadgets::{gen_connectivity_gadget, gen_dag_gadget};
use super::triangle::TriangleInstance;
use crate::dag::Dag;
use crate::error::{Error, Result};

/// Role of a vertex of the reduction graph. Indices are 1-based as in the
/// layer names `x_i`, `U_i`, `A'_i`; `DagHub` carries the gadget copy (1 or 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "layer", content = "index")]
pub enum Layer {
    A,
    DagHub(u32),
    Y,
    X(u32),
    B,
    C,
    U(u32),
    UA,
    APrime(u32),
}

impl Layer {
    /// Rank in the layer order `DAG(A), y, x_1..x_t, B, C, U_1..U_{t-1}, U(A),
    /// A'_1..A'_{t+1}`. Edges never go to a smaller rank.
    pub fn rank(self, t: u32) -> u32 {
        match self {
            Layer::A | Layer::DagHub(_) => 0,
            Layer::Y => 1,
            Layer::X(i) => 1 + i,
            Layer::B => t + 2,
            Layer::C => t + 3,
            Layer::U(i) => t + 3 + i,
            Layer::UA => 2 * t + 3,
            Layer::APrime(i) => 2 * t + 3 + i,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Part {
    A,
    B,
    C,
}

/// The triangle-graph vertex a reduction vertex was made from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SourceVertex {
    pub part: Part,
    pub index: usize,
}

#[derive(Clone, Debug)]
pub struct ReductionInstance {
    pub dag: Dag,
    pub t: u32,
    pub layers: Vec<Layer>,
    pub provenance: Vec<Option<SourceVertex>>,
}

/// JSON sidecar written next to the edge list of a reduction graph.
#[derive(Clone, Debug, Serialize)]
pub struct LayerMap<'a> {
    pub t: u32,
    pub n: usize,
    pub m: usize,
    pub layers: &'a [Layer],
    pub provenance: &'a [Option<SourceVertex>],
}

impl ReductionInstance {
    pub fn layer_map(&self) -> LayerMap<'_> {
        LayerMap {
            t: self.t,
            n: self.dag.n(),
            m: self.dag.m(),
            layers: &self.layers,
            provenance: &self.provenance,
        }
    }

    pub fn vertices_in(&self, layer: Layer) -> impl Iterator<Item = usize> + '_ {
        (0..self.layers.len()).filter(move |&v| self.layers[v] == layer)
    }

    /// Radius when the source graph has a triangle: the center sits at a
    /// triangle vertex of `A` and reaches `A'_{t+1}` in `t + 2` steps.
    pub fn yes_radius(&self) -> u64 {
        self.t as u64 + 2
    }

    /// Lower bound on the radius when the source graph is triangle-free.
    pub fn no_radius_bound(&self) -> u64 {
        2 * self.t as u64
    }
}

/// Smallest `t >= 2` with `2 - δ/2 < 2t/(t+1)`.
pub fn choose_t(delta: f64) -> Result<u32> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidParameter(format!("delta must be > 0, got {delta}")));
    }
    (2u32..=1 << 20)
        .find(|&t| 2.0 - delta / 2.0 < 2.0 * t as f64 / (t as f64 + 1.0))
        .ok_or_else(|| Error::InvalidParameter(format!("delta {delta} needs an impractically large t")))
}

struct Builder {
    layers: Vec<Layer>,
    provenance: Vec<Option<SourceVertex>>,
    edges: Vec<(usize, usize, u64)>,
}

impl Builder {
    fn add(&mut self, layer: Layer, source: Option<SourceVertex>) -> usize {
        self.layers.push(layer);
        self.provenance.push(source);
        self.layers.len() - 1
    }

    fn add_part(&mut self, layer: Layer, part: Part, n: usize) -> Vec<usize> {
        (0..n).map(|index| self.add(layer, Some(SourceVertex { part, index }))).collect()
    }

    fn edge(&mut self, u: usize, v: usize) {
        self.edges.push((u, v, 1));
    }
}

/// Builds the unit-weight DAG whose min-radius is at most `t + 2` when `g` has
/// a triangle and at least `2t` otherwise.
pub fn reduce_triangle_to_minradius(g: &TriangleInstance, t: u32) -> Result<ReductionInstance> {
    if t < 2 {
        return Err(Error::InvalidParameter(format!("reduction parameter t must be at least 2, got {t}")));
    }
    if g.a < 2 {
        return Err(Error::PreconditionViolated(format!(
            "part A needs at least 2 vertices for the connectivity gadget, got {}",
            g.a
        )));
    }
    let mut bld = Builder {
        layers: Vec::new(),
        provenance: Vec::new(),
        edges: Vec::new(),
    };

    let a = bld.add_part(Layer::A, Part::A, g.a);
    for copy in 1..=2 {
        let gadget = gen_dag_gadget(&a, t, bld.layers.len())?;
        for _ in &gadget.hubs {
            bld.add(Layer::DagHub(copy), None);
        }
        for &(u, v) in &gadget.edges {
            bld.edge(u, v);
        }
    }

    let y = bld.add(Layer::Y, None);
    let x: Vec<usize> = (1..=t).map(|i| bld.add(Layer::X(i), None)).collect();
    let b = bld.add_part(Layer::B, Part::B, g.b);
    let c = bld.add_part(Layer::C, Part::C, g.c);

    let conn = gen_connectivity_gadget(g.a)?;
    let u_copies: Vec<Vec<usize>> = (1..t)
        .map(|i| (0..conn.size()).map(|_| bld.add(Layer::U(i), None)).collect())
        .collect();
    let ua: Vec<usize> = (0..conn.size()).map(|_| bld.add(Layer::UA, None)).collect();
    let a_prime: Vec<Vec<usize>> = (1..=t + 1)
        .map(|i| {
            (0..g.a)
                .map(|index| bld.add(Layer::APrime(i), Some(SourceVertex { part: Part::A, index })))
                .collect()
        })
        .collect();

    for &v in &a {
        bld.edge(v, y);
        bld.edge(v, x[0]);
    }
    for w in x.windows(2) {
        bld.edge(w[0], w[1]);
    }
    for &v in b.iter().chain(&c) {
        bld.edge(x[t as usize - 1], v);
    }
    for &(i, j) in &g.ab {
        bld.edge(a[i], b[j]);
    }
    for &(i, j) in &g.bc {
        bld.edge(b[i], c[j]);
    }
    for &(i, j) in &g.ca {
        bld.edge(c[i], a_prime[1][j]);
    }
    for i in 0..t as usize {
        for j in 0..g.a {
            bld.edge(a_prime[i][j], a_prime[i + 1][j]);
        }
    }

    for &(i, u) in &conn.into {
        bld.edge(a[i], ua[u]);
    }
    for &(u, j) in &conn.out_of {
        bld.edge(ua[u], a_prime[0][j]);
    }
    let chain: Vec<&Vec<usize>> = u_copies.iter().chain(std::iter::once(&ua)).collect();
    for w in chain.windows(2) {
        for k in 0..conn.size() {
            bld.edge(w[0][k], w[1][k]);
        }
    }
    for &v in a.iter().chain(&b).chain(&c) {
        for &u in chain[0] {
            bld.edge(v, u);
        }
    }

    let dag = Dag::new(bld.layers.len(), &bld.edges)?;
    Ok(ReductionInstance {
        dag,
        t,
        layers: bld.layers,
        provenance: bld.provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_summary;
    use crate::generators::triangle::{gen_triangle_free, gen_triangle_instance, has_triangle_bruteforce};

    fn single_triangle() -> TriangleInstance {
        // A needs two vertices for the connectivity gadget; a_1 is isolated.
        TriangleInstance::new((2, 1, 1), vec![(0, 0)], vec![(0, 0)], vec![(0, 0)]).unwrap()
    }

    fn hexagon() -> TriangleInstance {
        TriangleInstance::new(
            (2, 2, 2),
            vec![(0, 0), (1, 1)],
            vec![(0, 0), (1, 1)],
            vec![(0, 1), (1, 0)],
        )
        .unwrap()
    }

    fn check_layer_order(r: &ReductionInstance) {
        for &(u, v, w) in r.dag.edges() {
            assert_eq!(w, 1);
            let (ru, rv) = (r.layers[u].rank(r.t), r.layers[v].rank(r.t));
            assert!(ru < rv || (ru == 0 && rv == 0), "{:?} -> {:?}", r.layers[u], r.layers[v]);
        }
    }

    #[test]
    fn triangle_gives_yes_radius_at_a() {
        let r = reduce_triangle_to_minradius(&single_triangle(), 3).unwrap();
        check_layer_order(&r);
        let s = exact_summary(&r.dag).unwrap();
        assert_eq!(s.min_radius.get(), Some(r.yes_radius()));
        assert_eq!(s.eccentricities[0].get(), Some(5));
        assert_eq!(r.layers[s.center], Layer::A);
    }

    #[test]
    fn hexagon_gives_no_band() {
        let g = hexagon();
        assert!(!has_triangle_bruteforce(&g));
        let r = reduce_triangle_to_minradius(&g, 3).unwrap();
        check_layer_order(&r);
        let s = exact_summary(&r.dag).unwrap();
        assert!(s.min_radius.get().is_none_or(|v| v >= 6));
    }

    #[test]
    fn outside_dag_a_is_infinite() {
        for g in [single_triangle(), hexagon()] {
            let r = reduce_triangle_to_minradius(&g, 3).unwrap();
            let s = exact_summary(&r.dag).unwrap();
            for v in 0..r.dag.n() {
                if !matches!(r.layers[v], Layer::A | Layer::DagHub(_)) {
                    assert!(s.eccentricities[v].is_infinite(), "{:?}", r.layers[v]);
                }
            }
        }
    }

    #[test]
    fn separation_on_random_instances() {
        for seed in 0..60 {
            let g = if seed % 2 == 0 {
                gen_triangle_instance((4, 3, 3), 0.25, seed % 4 == 0, seed).unwrap()
            } else {
                gen_triangle_free((4, 3, 3), 0.4, seed).unwrap()
            };
            let t = 3 + ((seed / 2) % 4) as u32;
            let r = reduce_triangle_to_minradius(&g, t).unwrap();
            let radius = exact_summary(&r.dag).unwrap().min_radius;
            if has_triangle_bruteforce(&g) {
                assert!(radius.get().is_some_and(|v| v <= r.yes_radius()), "seed {seed}");
            } else {
                assert!(radius.get().is_none_or(|v| v >= r.no_radius_bound()), "seed {seed}");
            }
        }
    }

    #[test]
    fn t_two_and_size_bounds() {
        for seed in 0..10 {
            let g = gen_triangle_instance((5, 4, 6), 0.3, false, seed).unwrap();
            let r = reduce_triangle_to_minradius(&g, 2).unwrap();
            check_layer_order(&r);
            let n = g.a + g.b + g.c;
            let log = (n as f64).log2().ceil() as usize;
            assert!(r.dag.n() <= 4 * (n + 1) * 2 + 20);
            assert!(r.dag.m() <= g.edge_count() + 10 * n * log + 20 * n);
            assert_eq!(r.layer_map().layers.len(), r.dag.n());
        }
        assert!(reduce_triangle_to_minradius(&hexagon(), 1).is_err());
        let tiny = TriangleInstance::new((1, 1, 1), vec![], vec![], vec![]).unwrap();
        assert!(reduce_triangle_to_minradius(&tiny, 3).is_err());
    }

    #[test]
    fn t_from_delta() {
        assert_eq!(choose_t(1.0).unwrap(), 4);
        assert_eq!(choose_t(2.0).unwrap(), 2);
        assert_eq!(choose_t(0.5).unwrap(), 8);
        assert!(choose_t(0.0).is_err());
        for d in [0.1, 0.3, 0.7, 1.5] {
            let t = choose_t(d).unwrap() as f64;
            assert!(2.0 - d / 2.0 < 2.0 * t / (t + 1.0));
            assert!(t == 2.0 || 2.0 - d / 2.0 >= 2.0 * (t - 1.0) / t);
        }
    }

    #[test]
    fn sidecar_serializes() {
        let r = reduce_triangle_to_minradius(&single_triangle(), 2).unwrap();
        let json = serde_json::to_value(r.layer_map()).unwrap();
        assert_eq!(json["t"], 2);
        assert_eq!(json["layers"][0]["layer"], "A");
        assert_eq!(json["provenance"][0]["part"], "A");
    }
}
