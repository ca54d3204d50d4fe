//! Banzhaf indices of all players from one subset-sum series per prime.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fps::{banzhaf_window, binomial_log_numerators, binomial_product_from_numerators};
use crate::game::{normalize, Degeneracy, NormalizedGame, WeightedGame};
use crate::ring::{select_prime_basis, to_f64, BigCount, BigRational, PrimeBasis};

/// Longest series (in field elements) a pipeline will allocate.
pub(crate) const MAX_SERIES_LEN: usize = 1 << 28;

#[derive(Debug, Clone, PartialEq)]
pub struct BanzhafResult {
    pub quota: u64,
    /// `2^n * Bz_p`: coalitions in which the player swings.
    pub swing_counts: Vec<BigCount>,
    /// `swing_count / 2^n` in lowest terms.
    pub indices: Vec<BigRational>,
    pub float_indices: Vec<f64>,
    pub degenerate: Option<Degeneracy>,
    /// Primes the counts were reconstructed from (0 for degenerate games).
    pub primes_used: usize,
}

impl BanzhafResult {
    pub(crate) fn from_counts(
        n: usize,
        quota: u64,
        swing_counts: Vec<BigCount>,
        degenerate: Option<Degeneracy>,
        primes_used: usize,
    ) -> Self {
        let denom = BigUint::one() << n;
        let indices: Vec<BigRational> = swing_counts
            .iter()
            .map(|c| Ratio::new(c.clone(), denom.clone()))
            .collect();
        let float_indices = indices.iter().map(to_f64).collect();
        Self {
            quota,
            swing_counts,
            indices,
            float_indices,
            degenerate,
            primes_used,
        }
    }

    pub fn n(&self) -> usize {
        self.swing_counts.len()
    }

    /// `swing_count / sum of swing counts` (the normalized Banzhaf index).
    pub fn normalized(&self) -> Vec<BigRational> {
        let total: BigUint = self.swing_counts.iter().sum();
        self.swing_counts
            .iter()
            .map(|c| {
                if total.is_zero() {
                    Ratio::from_integer(BigUint::zero())
                } else {
                    Ratio::new(c.clone(), total.clone())
                }
            })
            .collect()
    }
}

/// Residues of the swing count of each distinct weight modulo one prime.
fn residues_for_prime(
    norm: &NormalizedGame,
    numerators: &[i64],
    field: &crate::ring::PrimeField,
) -> Result<Vec<u64>> {
    let q = norm.quota;
    let fhat = binomial_product_from_numerators(*field, numerators)?;
    let g = fhat.prefix_sums();
    norm.distinct_weights
        .iter()
        .map(|&(w, _)| banzhaf_window(&g, w, q))
        .collect()
}

/// A caller-supplied basis must recover `n_effective`-bit counts and hold
/// `1 .. t` as invertible residues.
pub(crate) fn check_basis(basis: &PrimeBasis, n_effective: usize, t: usize) -> Result<()> {
    if let Some(p) = basis.moduli().into_iter().find(|&p| p as u128 <= t as u128) {
        return Err(Error::UnsupportedSize(format!(
            "prime {p} does not exceed truncation {t}"
        )));
    }
    if *basis.product() <= BigUint::one() << n_effective {
        return Err(Error::UnsupportedSize(format!(
            "prime basis of {} bits cannot recover counts below 2^{n_effective}",
            basis.product_bits()
        )));
    }
    Ok(())
}

/// Exact Banzhaf indices of every player.
///
/// Per prime: subset-sum series `prod (1 + x^w)` to `q` terms, its running
/// sums, then one `O(q / w)` window per distinct weight. The residues are
/// lifted by CRT; zero-weight players get 0 and multiply everyone else's
/// count by 2. Without a basis, the smallest sufficient one is selected.
pub fn compute_banzhaf(game: &WeightedGame, basis: Option<&PrimeBasis>) -> Result<BanzhafResult> {
    let norm = normalize(game)?;
    let n = norm.n;
    if let Some(d) = norm.degenerate {
        return Ok(BanzhafResult::from_counts(
            n,
            norm.quota,
            vec![BigUint::zero(); n],
            Some(d),
            0,
        ));
    }
    let t = usize::try_from(norm.quota)
        .ok()
        .filter(|&t| t <= MAX_SERIES_LEN)
        .ok_or_else(|| Error::UnsupportedSize(format!("quota {} too large", norm.quota)))?;

    let owned;
    let basis = match basis {
        Some(b) => {
            check_basis(b, norm.n_effective, t)?;
            b
        }
        None => {
            owned = select_prime_basis(norm.n_effective, t)?;
            &owned
        }
    };

    let numerators = binomial_log_numerators(&norm.distinct_weights, t)?;
    let per_prime: Vec<Vec<u64>> = basis
        .fields()
        .par_iter()
        .map(|f| residues_for_prime(&norm, &numerators, f))
        .collect::<Result<_>>()?;

    let null_shift = norm.null_players.len();
    let bucket_counts: Vec<BigUint> = (0..norm.distinct_weights.len())
        .map(|b| {
            let residues: Vec<u64> = per_prime.iter().map(|r| r[b]).collect();
            basis.crt_reconstruct(&residues).map(|c| c << null_shift)
        })
        .collect::<Result<_>>()?;

    let counts = norm
        .original_to_distinct
        .iter()
        .map(|b| b.map_or_else(BigUint::zero, |b| bucket_counts[b].clone()))
        .collect();
    Ok(BanzhafResult::from_counts(
        n,
        norm.quota,
        counts,
        None,
        basis.len(),
    ))
}
