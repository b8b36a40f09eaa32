use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dag::Dag;
use crate::error::{Error, Result};

/// Number of pairs `(i, j)` with `j >= i + gap` among `n` positions.
fn pair_count(n: usize, gap: usize) -> u64 {
    if n <= gap {
        return 0;
    }
    let k = (n - gap) as u64;
    k * (k + 1) / 2
}

/// Pairs in rows `0..i`, where row `r` holds `n - gap - r` pairs.
fn row_offset(n: usize, gap: usize, i: u64) -> u64 {
    let width = (n - gap) as u64;
    i * width - i * i.saturating_sub(1) / 2
}

/// Maps a pair index to `(i, j)` with `j >= i + gap`, rows in increasing `i`.
fn decode_pair(n: usize, gap: usize, k: u64) -> (usize, usize) {
    let rows = (n - gap) as u64;
    let (mut lo, mut hi) = (0u64, rows);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if row_offset(n, gap, mid) <= k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let j = lo + gap as u64 + (k - row_offset(n, gap, lo));
    (lo as usize, j as usize)
}

fn sample_pairs(rng: &mut ChaCha8Rng, n: usize, gap: usize, m: usize) -> Result<Vec<(usize, usize)>> {
    let total = pair_count(n, gap);
    if m as u64 > total {
        return Err(Error::InvalidParameter(format!(
            "cannot place {m} distinct edges, only {total} forward pairs available"
        )));
    }
    let total = usize::try_from(total)
        .map_err(|_| Error::InvalidParameter(format!("n = {n} too large to sample pairs")))?;
    Ok(rand::seq::index::sample(rng, total, m)
        .into_iter()
        .map(|k| decode_pair(n, gap, k as u64))
        .collect())
}

fn check_weights(w_max: u64) -> Result<()> {
    if w_max == 0 {
        return Err(Error::InvalidParameter("w_max must be at least 1".into()));
    }
    Ok(())
}

/// A uniformly random topological order with `m` distinct forward edges drawn
/// uniformly, weights uniform in `[1, w_max]`.
pub fn gen_random_dag(n: usize, m: usize, w_max: u64, seed: u64) -> Result<Dag> {
    check_weights(w_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let pairs = sample_pairs(&mut rng, n, 1, m)?;
    let edges: Vec<_> = pairs
        .into_iter()
        .map(|(i, j)| (order[i], order[j], rng.gen_range(1..=w_max)))
        .collect();
    Dag::new(n, &edges)
}

/// Like [`gen_random_dag`], but the first `n - 1` edges form a path through
/// the random order, so every pair is comparable and every min-eccentricity is
/// finite. `m` counts all edges and must be at least `n - 1`.
pub fn gen_connected_dag(n: usize, m: usize, w_max: u64, seed: u64) -> Result<Dag> {
    check_weights(w_max)?;
    let backbone = n.saturating_sub(1);
    if m < backbone {
        return Err(Error::InvalidParameter(format!(
            "a connected DAG on {n} vertices needs at least {backbone} edges, got {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let extra = sample_pairs(&mut rng, n, 2, m - backbone)?;
    let edges: Vec<_> = (0..backbone)
        .map(|i| (i, i + 1))
        .chain(extra)
        .map(|(i, j)| (order[i], order[j], rng.gen_range(1..=w_max)))
        .collect();
    Dag::new(n, &edges)
}
