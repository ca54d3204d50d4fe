//! Reference implementations: coalition and ordering enumeration for small
//! games, and pseudo-polynomial big-integer dynamic programs.
//!
//! None of these touch the prime fields or series code, so they serve as
//! independent baselines for the series pipelines.

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::game::WeightedGame;
use crate::ring::{to_f64, BigCount, BigRational};
use crate::shapley::factorials;

/// Largest `n` accepted by coalition enumeration.
pub const BRUTE_SUBSETS_MAX_N: usize = 24;
/// Largest `n` accepted by ordering enumeration.
pub const BRUTE_PERMUTATIONS_MAX_N: usize = 9;
/// Default cell budget for the dynamic programs (`n q` for Banzhaf,
/// `n^2 q` for Shapley-Shubik).
pub const DP_DEFAULT_BUDGET: u128 = 4_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// All `2^n` coalitions.
    BruteSubsets,
    /// All `n!` orderings.
    BrutePermutations,
    /// Big-integer subset-sum table with per-player deconvolution.
    Dp,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::BruteSubsets => "brute-subsets",
            Method::BrutePermutations => "brute-permutations",
            Method::Dp => "dp",
        }
    }
}

/// Output of a baseline. `counts` holds swing counts (Banzhaf) or pivot
/// weights `n! * SS` (Shapley-Shubik); `indices` the exact index values.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub method: Method,
    pub counts: Vec<BigCount>,
    pub indices: Vec<BigRational>,
    pub float_indices: Vec<f64>,
}

impl OracleReport {
    fn new(method: Method, counts: Vec<BigCount>, denominator: &BigUint) -> Self {
        let indices: Vec<BigRational> = counts
            .iter()
            .map(|c| Ratio::new(c.clone(), denominator.clone()))
            .collect();
        let float_indices = indices.iter().map(to_f64).collect();
        Self {
            method,
            counts,
            indices,
            float_indices,
        }
    }
}

fn guard_n(game: &WeightedGame, max: usize, what: &str) -> Result<()> {
    game.validate()?;
    if game.n() > max {
        return Err(Error::SizeGuard(format!(
            "{what} supports n <= {max}, got n = {}",
            game.n()
        )));
    }
    Ok(())
}

/// Visits every coalition in Gray-code order with its weight and size.
fn for_each_coalition(weights: &[u64], mut visit: impl FnMut(u64, u128, usize)) {
    let n = weights.len();
    let mut mask = 0u64;
    let mut weight = 0u128;
    let mut size = 0usize;
    visit(mask, weight, size);
    for i in 1u64..(1u64 << n) {
        let bit = i.trailing_zeros() as usize;
        mask ^= 1 << bit;
        if mask >> bit & 1 == 1 {
            weight += weights[bit] as u128;
            size += 1;
        } else {
            weight -= weights[bit] as u128;
            size -= 1;
        }
        visit(mask, weight, size);
    }
}

/// Banzhaf indices by enumerating all `2^n` coalitions (`n <= 24`).
pub fn brute_force_banzhaf(game: &WeightedGame) -> Result<OracleReport> {
    guard_n(game, BRUTE_SUBSETS_MAX_N, "coalition enumeration")?;
    let q = game.quota as u128;
    let w = &game.weights;
    let mut counts = vec![0u64; game.n()];
    for_each_coalition(w, |mask, weight, _| {
        if weight < q {
            return;
        }
        for (p, c) in counts.iter_mut().enumerate() {
            if mask >> p & 1 == 1 && weight - (w[p] as u128) < q {
                *c += 1;
            }
        }
    });
    let counts = counts.into_iter().map(BigUint::from).collect();
    Ok(OracleReport::new(
        Method::BruteSubsets,
        counts,
        &(BigUint::from(1u8) << game.n()),
    ))
}

/// Shapley-Shubik indices by enumeration: all orderings when
/// `permutations` is set (`n <= 9`), otherwise all coalitions weighted by
/// `|S|! (n - 1 - |S|)!` (`n <= 20`).
pub fn brute_force_shapley(game: &WeightedGame, permutations: bool) -> Result<OracleReport> {
    if permutations {
        guard_n(game, BRUTE_PERMUTATIONS_MAX_N, "ordering enumeration")?;
    } else {
        guard_n(game, 20, "coalition enumeration")?;
    }
    let n = game.n();
    let q = game.quota as u128;
    let w = &game.weights;
    let mut counts = vec![0u128; n];
    if permutations {
        // Heap's algorithm
        let mut order: Vec<usize> = (0..n).collect();
        let mut stack = vec![0usize; n];
        let mut credit = |order: &[usize]| {
            let mut acc = 0u128;
            for &p in order {
                let next = acc + w[p] as u128;
                if acc < q && next >= q {
                    counts[p] += 1;
                    break;
                }
                acc = next;
            }
        };
        credit(&order);
        let mut i = 1;
        while i < n {
            if stack[i] < i {
                let j = if i % 2 == 0 { 0 } else { stack[i] };
                order.swap(j, i);
                credit(&order);
                stack[i] += 1;
                i = 1;
            } else {
                stack[i] = 0;
                i += 1;
            }
        }
    } else {
        let fact: Vec<u128> = (0..=n)
            .scan(1u128, |f, i| {
                if i > 0 {
                    *f *= i as u128;
                }
                Some(*f)
            })
            .collect();
        for_each_coalition(w, |mask, weight, size| {
            if weight >= q || size == n {
                return;
            }
            let coef = fact[size] * fact[n - 1 - size];
            for (p, c) in counts.iter_mut().enumerate() {
                if mask >> p & 1 == 0 && weight + w[p] as u128 >= q {
                    *c += coef;
                }
            }
        });
    }
    let method = if permutations {
        Method::BrutePermutations
    } else {
        Method::BruteSubsets
    };
    let counts = counts.into_iter().map(BigUint::from).collect();
    Ok(OracleReport::new(method, counts, &factorials(n)[n]))
}

fn guard_budget(cells: u128, budget: u128, what: &str) -> Result<()> {
    if cells > budget {
        return Err(Error::BudgetExceeded(format!(
            "{what} needs {cells} cells, budget is {budget}"
        )));
    }
    Ok(())
}

/// Banzhaf indices by big-integer DP with the default budget.
pub fn dp_banzhaf(game: &WeightedGame) -> Result<OracleReport> {
    dp_banzhaf_with_budget(game, DP_DEFAULT_BUDGET)
}

/// Banzhaf indices from the table `a[j]` = number of coalitions of weight
/// `j < q`. Each player's table without them follows from
/// `a_p[j] = a[j] - a_p[j - w_p]`, and their swing count is
/// `sum_{q - w_p <= j < q} a_p[j]`.
pub fn dp_banzhaf_with_budget(game: &WeightedGame, budget: u128) -> Result<OracleReport> {
    game.validate()?;
    let n = game.n();
    let q = game.quota;
    guard_budget(n as u128 * q as u128, budget, "Banzhaf DP")?;
    let denom = BigUint::from(1u8) << n;
    if q == 0 {
        return Ok(OracleReport::new(
            Method::Dp,
            vec![BigUint::zero(); n],
            &denom,
        ));
    }
    let t = q as usize;
    let mut table = vec![BigUint::zero(); t];
    table[0] = BigUint::from(1u8);
    for &w in &game.weights {
        if w == 0 {
            for x in &mut table {
                *x <<= 1;
            }
        } else if w < q {
            let w = w as usize;
            for j in (w..t).rev() {
                let (lo, hi) = table.split_at_mut(j);
                hi[0] += &lo[j - w];
            }
        }
    }

    let mut cache: Vec<(u64, BigUint)> = Vec::new();
    let mut counts = Vec::with_capacity(n);
    for &w in &game.weights {
        if let Some((_, c)) = cache.iter().find(|(cw, _)| *cw == w) {
            counts.push(c.clone());
            continue;
        }
        let count = if w == 0 {
            BigUint::zero()
        } else {
            let without = remove_player(&table, w);
            let lo = q.saturating_sub(w) as usize;
            without[lo..].iter().sum()
        };
        cache.push((w, count.clone()));
        counts.push(count);
    }
    Ok(OracleReport::new(Method::Dp, counts, &denom))
}

fn remove_player(table: &[BigUint], w: u64) -> Vec<BigUint> {
    let mut out: Vec<BigUint> = Vec::with_capacity(table.len());
    for (j, a) in table.iter().enumerate() {
        let v = match j.checked_sub(w as usize).filter(|_| w < table.len() as u64) {
            Some(i) => a - &out[i],
            None => a.clone(),
        };
        out.push(v);
    }
    out
}

/// Shapley-Shubik indices by big-integer DP with the default budget.
pub fn dp_shapley(game: &WeightedGame) -> Result<OracleReport> {
    dp_shapley_with_budget(game, DP_DEFAULT_BUDGET)
}

/// Shapley-Shubik indices from the table `a[k][j]` = number of coalitions
/// of size `k < n` and weight `j < q`, deconvolved per player as in
/// [`dp_banzhaf_with_budget`] and weighted by `k! (n - 1 - k)!`.
pub fn dp_shapley_with_budget(game: &WeightedGame, budget: u128) -> Result<OracleReport> {
    game.validate()?;
    let n = game.n();
    let q = game.quota;
    guard_budget(
        n as u128 * n as u128 * q as u128,
        budget,
        "Shapley-Shubik DP",
    )?;
    let fact = factorials(n);
    if q == 0 {
        return Ok(OracleReport::new(
            Method::Dp,
            vec![BigUint::zero(); n],
            &fact[n],
        ));
    }
    let t = q as usize;
    // rows k = 0 .. n-1
    let mut table = vec![vec![BigUint::zero(); t]; n];
    table[0][0] = BigUint::from(1u8);
    for (i, &w) in game.weights.iter().enumerate() {
        if w >= q {
            continue;
        }
        let w = w as usize;
        for k in (1..=(i + 1).min(n - 1)).rev() {
            let (lower, upper) = table.split_at_mut(k);
            let (prev, row) = (&lower[k - 1], &mut upper[0]);
            for j in (w..t).rev() {
                row[j] += &prev[j - w];
            }
        }
    }

    let mut cache: Vec<(u64, BigUint)> = Vec::new();
    let mut counts = Vec::with_capacity(n);
    for &w in &game.weights {
        if let Some((_, c)) = cache.iter().find(|(cw, _)| *cw == w) {
            counts.push(c.clone());
            continue;
        }
        let lo = q.saturating_sub(w) as usize;
        let mut pivot = BigUint::zero();
        if w > 0 {
            let mut prev: Vec<BigUint> = Vec::new();
            for k in 0..n {
                let mut row = Vec::with_capacity(t);
                for j in 0..t {
                    let v = match j.checked_sub(w as usize).filter(|_| k > 0 && w < q) {
                        Some(i) => &table[k][j] - &prev[i],
                        None => table[k][j].clone(),
                    };
                    row.push(v);
                }
                let swings: BigUint = row[lo..].iter().sum();
                pivot += swings * &fact[k] * &fact[n - 1 - k];
                prev = row;
            }
        }
        cache.push((w, pivot.clone()));
        counts.push(pivot);
    }
    Ok(OracleReport::new(Method::Dp, counts, &fact[n]))
}
