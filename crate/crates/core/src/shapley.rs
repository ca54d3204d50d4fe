//! Shapley-Shubik indices of all players from one bivariate series per prime.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::banzhaf::check_basis;
use crate::bifps::{bi_binomial_product, ss_window};
use crate::error::{Error, Result};
use crate::game::{normalize, Degeneracy, NormalizedGame, WeightedGame};
use crate::newton::exp_transform_len;
use crate::ring::{select_prime_basis, to_f64, BigCount, BigRational, PrimeBasis, PrimeField};

/// Longest transform the bivariate exponential may need.
pub(crate) const MAX_PACKED_LEN: usize = 1 << 25;

#[derive(Debug, Clone, PartialEq)]
pub struct ShapleyResult {
    pub quota: u64,
    /// `n! * SS_p`: orderings in which the player is pivotal.
    pub pivot_weights: Vec<BigCount>,
    /// Entry `k` counts coalitions of `k` non-null players the player
    /// turns from losing to winning. Empty for null players and
    /// degenerate games.
    pub count_vectors: Vec<Vec<BigCount>>,
    /// `pivot_weight / n!` in lowest terms.
    pub indices: Vec<BigRational>,
    pub float_indices: Vec<f64>,
    pub degenerate: Option<Degeneracy>,
    pub primes_used: usize,
}

impl ShapleyResult {
    pub fn n(&self) -> usize {
        self.pivot_weights.len()
    }

    fn zero(n: usize, quota: u64, degenerate: Degeneracy) -> Self {
        Self {
            quota,
            pivot_weights: vec![BigUint::zero(); n],
            count_vectors: vec![Vec::new(); n],
            indices: vec![Ratio::from_integer(BigUint::zero()); n],
            float_indices: vec![0.0; n],
            degenerate: Some(degenerate),
            primes_used: 0,
        }
    }
}

pub(crate) fn factorials(n: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(BigUint::one());
    for i in 1..=n {
        let next = &out[i - 1] * i;
        out.push(next);
    }
    out
}

/// Residues of every size-resolved count vector modulo one prime,
/// `[bucket][k]`.
fn residues_for_prime(
    norm: &NormalizedGame,
    field: &PrimeField,
    m: usize,
) -> Result<Vec<Vec<u64>>> {
    let q = norm.quota;
    let fhat = bi_binomial_product(*field, &norm.distinct_weights, q as usize, m)?;
    let g = fhat.prefix_sums();
    norm.distinct_weights
        .iter()
        .map(|&(w, _)| ss_window(&g, w, q))
        .collect()
}

/// Exact Shapley-Shubik indices of every player.
///
/// Per prime: `prod (1 + y x^w)` to x-degree `q` and y-degree
/// `m = min(n', q)` (`n'` non-null players), its running sums along `x`,
/// then one size-resolved window `c_k` per distinct weight. After CRT,
/// `SS = sum_k k! (n' - 1 - k)! c_k / n'!`. Zero-weight players take no
/// part in any pivot, so they get 0 and leave the others' indices as they
/// are.
pub fn compute_shapley(game: &WeightedGame, basis: Option<&PrimeBasis>) -> Result<ShapleyResult> {
    let norm = normalize(game)?;
    let n = norm.n;
    if let Some(d) = norm.degenerate {
        return Ok(ShapleyResult::zero(n, norm.quota, d));
    }
    let ne = norm.n_effective;
    let too_large =
        || Error::UnsupportedSize(format!("quota {} with {ne} players too large", norm.quota));
    let t = usize::try_from(norm.quota).map_err(|_| too_large())?;
    let m = ne.min(t);
    let packed = t
        .checked_mul(2 * m)
        .filter(|&x| x <= MAX_PACKED_LEN)
        .map(|_| exp_transform_len(t, m))
        .filter(|&x| x <= MAX_PACKED_LEN)
        .ok_or_else(too_large)?;

    let owned;
    let basis = match basis {
        Some(b) => {
            check_basis(b, ne, t.max(m))?;
            b
        }
        None => {
            owned = select_prime_basis(ne, t.max(packed / 2))?;
            &owned
        }
    };

    let per_prime: Vec<Vec<Vec<u64>>> = basis
        .fields()
        .par_iter()
        .map(|f| residues_for_prime(&norm, f, m))
        .collect::<Result<_>>()?;

    let fact = factorials(n);
    let ne_fact = &fact[ne];
    let scale = &fact[n] / ne_fact;
    let mut bucket_vectors = Vec::with_capacity(norm.distinct_weights.len());
    let mut bucket_pivots = Vec::with_capacity(norm.distinct_weights.len());
    for b in 0..norm.distinct_weights.len() {
        let counts: Vec<BigUint> = (0..m)
            .map(|k| {
                let residues: Vec<u64> = per_prime.iter().map(|r| r[b][k]).collect();
                basis.crt_reconstruct(&residues)
            })
            .collect::<Result<_>>()?;
        // k = 0 contributes when w = q: the empty coalition is then a swing.
        let pivot: BigUint = counts
            .iter()
            .enumerate()
            .map(|(k, c)| c * &fact[k] * &fact[ne - 1 - k])
            .sum();
        bucket_pivots.push(pivot);
        bucket_vectors.push(counts);
    }

    let mut pivot_weights = Vec::with_capacity(n);
    let mut count_vectors = Vec::with_capacity(n);
    let mut indices = Vec::with_capacity(n);
    for b in &norm.original_to_distinct {
        match *b {
            Some(b) => {
                pivot_weights.push(&bucket_pivots[b] * &scale);
                count_vectors.push(bucket_vectors[b].clone());
                indices.push(Ratio::new(bucket_pivots[b].clone(), ne_fact.clone()));
            }
            None => {
                pivot_weights.push(BigUint::zero());
                count_vectors.push(Vec::new());
                indices.push(Ratio::from_integer(BigUint::zero()));
            }
        }
    }
    let float_indices = indices.iter().map(to_f64).collect();
    Ok(ShapleyResult {
        quota: norm.quota,
        pivot_weights,
        count_vectors,
        indices,
        float_indices,
        degenerate: None,
        primes_used: basis.len(),
    })
}
