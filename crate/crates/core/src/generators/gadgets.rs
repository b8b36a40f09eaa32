use serde::Serialize;

use crate::error::{Error, Result};

/// Hub vertices and unit edges added on top of a base vertex list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DagGadget {
    pub t: u32,
    pub base: Vec<usize>,
    pub hubs: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    /// All gadget vertices in a topological order of the gadget.
    pub order: Vec<usize>,
}

/// Builds the distance gadget over the ordered list `x`; hub ids are taken from
/// `next_id` upward. Each split gets a chain of `t - 1` hubs fed by the whole
/// left part and feeding the whole right part, so every ordered pair is at
/// distance at most `t` and distinct base vertices are at distance at least `t`.
pub fn gen_dag_gadget(x: &[usize], t: u32, next_id: usize) -> Result<DagGadget> {
    if t < 2 {
        return Err(Error::InvalidParameter(format!("gadget parameter t must be at least 2, got {t}")));
    }
    if x.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut gadget = DagGadget {
        t,
        base: x.to_vec(),
        hubs: Vec::new(),
        edges: Vec::new(),
        order: Vec::new(),
    };
    let mut next = next_id;
    gadget.order = split(x, t as usize - 1, &mut next, &mut gadget.hubs, &mut gadget.edges);
    Ok(gadget)
}

fn split(
    x: &[usize],
    chain: usize,
    next: &mut usize,
    hubs: &mut Vec<usize>,
    edges: &mut Vec<(usize, usize)>,
) -> Vec<usize> {
    if x.len() == 1 {
        return x.to_vec();
    }
    let (l, r) = x.split_at(x.len().div_ceil(2));
    let left = split(l, chain, next, hubs, edges);
    let right = split(r, chain, next, hubs, edges);
    let h: Vec<usize> = (*next..*next + chain).collect();
    *next += chain;
    hubs.extend(&h);
    edges.extend(left.iter().map(|&v| (v, h[0])));
    edges.extend(h.windows(2).map(|w| (w[0], w[1])));
    edges.extend(right.iter().map(|&v| (h[chain - 1], v)));
    let mut nodes = left;
    nodes.extend(h);
    nodes.extend(right);
    nodes
}

/// Bit-complement gadget between `v_0..v_{n-1}` and copies `v'_0..v'_{n-1}`:
/// `v_i -> u_{p, bit_p(i)}` and `u_{p, val} -> v'_j` when `bit_p(j) != val`.
/// Node `u_{p, val}` has index `2p + val`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityGadget {
    pub n: usize,
    pub bits: u32,
    /// `(i, u)`: edge from `v_i` into gadget node `u`.
    pub into: Vec<(usize, usize)>,
    /// `(u, j)`: edge from gadget node `u` to `v'_j`.
    pub out_of: Vec<(usize, usize)>,
}

impl ConnectivityGadget {
    pub fn size(&self) -> usize {
        2 * self.bits as usize
    }
}

pub fn gen_connectivity_gadget(n: usize) -> Result<ConnectivityGadget> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("connectivity gadget needs n >= 2, got {n}")));
    }
    let bits = (n - 1).ilog2() + 1;
    let bit = |i: usize, p: u32| (i >> p) & 1;
    let mut into = Vec::with_capacity(n * bits as usize);
    let mut out_of = Vec::with_capacity(n * bits as usize);
    for p in 0..bits {
        for i in 0..n {
            into.push((i, 2 * p as usize + bit(i, p)));
            out_of.push((2 * p as usize + (1 - bit(i, p)), i));
        }
    }
    Ok(ConnectivityGadget { n, bits, into, out_of })
}
