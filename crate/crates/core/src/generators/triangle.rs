use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tripartite graph on parts `A`, `B`, `C`, with vertices numbered within each
/// part. Edges are stored per part pair as `(A, B)`, `(B, C)` and `(C, A)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleInstance {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub ab: Vec<(usize, usize)>,
    pub bc: Vec<(usize, usize)>,
    pub ca: Vec<(usize, usize)>,
    pub planted: bool,
    pub seed: u64,
}

impl TriangleInstance {
    pub fn new(
        sizes: (usize, usize, usize),
        ab: Vec<(usize, usize)>,
        bc: Vec<(usize, usize)>,
        ca: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let (a, b, c) = sizes;
        let check = |edges: &[(usize, usize)], n1: usize, n2: usize| {
            edges.iter().try_for_each(|&(x, y)| {
                if x >= n1 {
                    Err(Error::VertexOutOfRange { vertex: x, n: n1 })
                } else if y >= n2 {
                    Err(Error::VertexOutOfRange { vertex: y, n: n2 })
                } else {
                    Ok(())
                }
            })
        };
        check(&ab, a, b)?;
        check(&bc, b, c)?;
        check(&ca, c, a)?;
        let mut inst = TriangleInstance { a, b, c, ab, bc, ca, planted: false, seed: 0 };
        inst.normalize();
        Ok(inst)
    }

    fn normalize(&mut self) {
        for e in [&mut self.ab, &mut self.bc, &mut self.ca] {
            e.sort_unstable();
            e.dedup();
        }
    }

    pub fn edge_count(&self) -> usize {
        self.ab.len() + self.bc.len() + self.ca.len()
    }

    /// Some triangle `(a, b, c)`, by scanning each `(A, B)` edge against the
    /// common `C`-neighbors of its ends.
    pub fn find_triangle(&self) -> Option<(usize, usize, usize)> {
        let mut c_of_b = vec![Vec::new(); self.b];
        for &(b, c) in &self.bc {
            c_of_b[b].push(c);
        }
        let mut a_has_c = vec![Vec::new(); self.a];
        for &(c, a) in &self.ca {
            a_has_c[a].push(c);
        }
        for row in &mut a_has_c {
            row.sort_unstable();
        }
        self.ab.iter().find_map(|&(a, b)| {
            c_of_b[b]
                .iter()
                .find(|c| a_has_c[a].binary_search(c).is_ok())
                .map(|&c| (a, b, c))
        })
    }
}

/// Ground truth by a direct scan over all `(a, b, c)` triples.
pub fn has_triangle_bruteforce(g: &TriangleInstance) -> bool {
    let mut ab = vec![false; g.a * g.b];
    let mut bc = vec![false; g.b * g.c];
    let mut ca = vec![false; g.c * g.a];
    for &(x, y) in &g.ab {
        ab[x * g.b + y] = true;
    }
    for &(x, y) in &g.bc {
        bc[x * g.c + y] = true;
    }
    for &(x, y) in &g.ca {
        ca[x * g.a + y] = true;
    }
    (0..g.a).any(|a| {
        (0..g.b).any(|b| ab[a * g.b + b] && (0..g.c).any(|c| bc[b * g.c + c] && ca[c * g.a + a]))
    })
}

fn random_edges(rng: &mut ChaCha8Rng, n1: usize, n2: usize, p: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for x in 0..n1 {
        for y in 0..n2 {
            if rng.gen_bool(p) {
                edges.push((x, y));
            }
        }
    }
    edges
}

fn check_params(sizes: (usize, usize, usize), p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("edge probability must lie in [0, 1], got {p}")));
    }
    if sizes.0 == 0 || sizes.1 == 0 || sizes.2 == 0 {
        return Err(Error::InvalidParameter("every part needs at least one vertex".into()));
    }
    Ok(())
}

/// Each cross-part pair is an edge with probability `p`. With `planted` set a
/// random triangle is added.
pub fn gen_triangle_instance(sizes: (usize, usize, usize), p: f64, planted: bool, seed: u64) -> Result<TriangleInstance> {
    check_params(sizes, p)?;
    let (a, b, c) = sizes;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inst = TriangleInstance {
        a,
        b,
        c,
        ab: random_edges(&mut rng, a, b, p),
        bc: random_edges(&mut rng, b, c, p),
        ca: random_edges(&mut rng, c, a, p),
        planted,
        seed,
    };
    if planted {
        let (x, y, z) = (rng.gen_range(0..a), rng.gen_range(0..b), rng.gen_range(0..c));
        inst.ab.push((x, y));
        inst.bc.push((y, z));
        inst.ca.push((z, x));
    }
    inst.normalize();
    Ok(inst)
}

const REJECTION_TRIALS: usize = 64;
const REJECTION_MAX_TRIPLES: usize = 1 << 18;

/// A triangle-free instance. Small instances are drawn by rejection against
/// [`has_triangle_bruteforce`]; otherwise (or when rejection keeps failing)
/// every vertex gets one of two colors and only edges between different colors
/// are kept, which rules out triangles.
pub fn gen_triangle_free(sizes: (usize, usize, usize), p: f64, seed: u64) -> Result<TriangleInstance> {
    check_params(sizes, p)?;
    let (a, b, c) = sizes;
    if a * b * c <= REJECTION_MAX_TRIPLES {
        for trial in 0..REJECTION_TRIALS as u64 {
            let inst = gen_triangle_instance(sizes, p, false, seed.wrapping_add(trial))?;
            if !has_triangle_bruteforce(&inst) {
                return Ok(TriangleInstance { seed, ..inst });
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7f4a_7c15);
    let colors: Vec<Vec<bool>> = [a, b, c].iter().map(|&n| (0..n).map(|_| rng.gen()).collect()).collect();
    let mut inst = gen_triangle_instance(sizes, p, false, seed)?;
    inst.ab.retain(|&(x, y)| colors[0][x] != colors[1][y]);
    inst.bc.retain(|&(x, y)| colors[1][x] != colors[2][y]);
    inst.ca.retain(|&(x, y)| colors[2][x] != colors[0][y]);
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planted_and_empty() {
        for seed in 0..20 {
            let g = gen_triangle_instance((4, 5, 6), 0.05, true, seed).unwrap();
            assert!(has_triangle_bruteforce(&g));
            assert!(g.find_triangle().is_some());
        }
        let empty = TriangleInstance::new((3, 3, 3), vec![], vec![], vec![]).unwrap();
        assert!(!has_triangle_bruteforce(&empty));
        assert!(TriangleInstance::new((1, 1, 1), vec![(0, 1)], vec![], vec![]).is_err());
    }

    #[test]
    fn fast_search_agrees_with_scan() {
        for seed in 0..200 {
            let g = gen_triangle_instance((5, 6, 7), 0.12, false, seed).unwrap();
            let found = g.find_triangle();
            assert_eq!(found.is_some(), has_triangle_bruteforce(&g));
            if let Some((a, b, c)) = found {
                assert!(g.ab.contains(&(a, b)) && g.bc.contains(&(b, c)) && g.ca.contains(&(c, a)));
            }
        }
    }

    #[test]
    fn triangle_free_generation() {
        for seed in 0..30 {
            let small = gen_triangle_free((6, 6, 6), 0.3, seed).unwrap();
            assert!(!has_triangle_bruteforce(&small));
            let large = gen_triangle_free((80, 80, 80), 0.2, seed).unwrap();
            assert!(large.find_triangle().is_none());
            assert!(large.edge_count() > 0);
        }
        assert!(gen_triangle_free((0, 2, 2), 0.5, 0).is_err());
        assert!(gen_triangle_instance((2, 2, 2), 1.5, false, 0).is_err());
    }
}
