//! Weighted majority games and their normalized form.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weighted majority game: player `i` has weight `weights[i]`, and a
/// coalition wins iff its total weight reaches `quota`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedGame {
    pub quota: u64,
    pub weights: Vec<u64>,
}

impl WeightedGame {
    pub fn new(weights: Vec<u64>, quota: u64) -> Result<Self> {
        let game = Self { quota, weights };
        game.validate()?;
        Ok(game)
    }

    pub fn validate(&self) -> Result<()> {
        if self.weights.is_empty() {
            return Err(Error::InvalidInstance("weight list is empty".into()));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn total_weight(&self) -> u128 {
        self.weights.iter().map(|&w| w as u128).sum()
    }

    /// Parses the plain-text format: `n q` on the first line and `n`
    /// whitespace-separated weights after it.
    pub fn parse_text(text: &str) -> Result<Self, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (hline, header) = lines
            .next()
            .ok_or_else(|| ParseError::new(1, 1, "missing header line \"n q\""))?;
        let head = parse_numbers(header, hline + 1)?;
        if head.len() != 2 {
            return Err(ParseError::new(
                hline + 1,
                1,
                format!(
                    "header must contain exactly \"n q\", found {} values",
                    head.len()
                ),
            ));
        }
        let (n, quota) = (head[0], head[1]);
        let mut weights = Vec::new();
        let mut last_line = hline + 1;
        for (idx, line) in lines {
            weights.extend(parse_numbers(line, idx + 1)?);
            last_line = idx + 1;
        }
        if weights.len() as u64 != n {
            return Err(ParseError::new(
                last_line,
                1,
                format!("header declares {n} weights, found {}", weights.len()),
            ));
        }
        Self::new(weights, quota).map_err(|e| ParseError::new(hline + 1, 1, e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let ws: Vec<String> = self.weights.iter().map(u64::to_string).collect();
        format!("{} {}\n{}\n", self.n(), self.quota, ws.join(" "))
    }
}

fn parse_numbers(line: &str, line_no: usize) -> Result<Vec<u64>, ParseError> {
    let mut out = Vec::new();
    let mut col = 0;
    for tok in line.split_whitespace() {
        let offset = line[col..].find(tok).map_or(col, |o| col + o);
        col = offset + tok.len();
        let v = tok.parse::<u64>().map_err(|e| {
            ParseError::new(line_no, offset + 1, format!("invalid integer {tok:?}: {e}"))
        })?;
        out.push(v);
    }
    Ok(out)
}

/// Input error with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for ParseError {}

/// Why a game has no meaningful power distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Degeneracy {
    /// `q = 0`: the empty coalition already wins.
    ZeroQuota,
    /// `w(N) < q`: no coalition wins.
    Unreachable,
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degeneracy::ZeroQuota => f.write_str("zero quota (every coalition wins)"),
            Degeneracy::Unreachable => f.write_str("total weight below quota (no coalition wins)"),
        }
    }
}

/// A game reduced to the `1 <= w <= q` regime the series pipelines need.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedGame {
    pub quota: u64,
    /// Player count of the original game, null players included.
    pub n: usize,
    /// `(weight, multiplicity)` sorted by weight, each weight in `[1, q]`.
    pub distinct_weights: Vec<(u64, usize)>,
    /// Original ids of zero-weight players.
    pub null_players: Vec<usize>,
    /// `cap_applied[i]` is set when player `i` had weight above `q`.
    pub cap_applied: Vec<bool>,
    /// Bucket in `distinct_weights` for each player, `None` for null players.
    pub original_to_distinct: Vec<Option<usize>>,
    pub n_effective: usize,
    pub degenerate: Option<Degeneracy>,
}

impl NormalizedGame {
    /// Weight list after capping; null players keep weight 0.
    pub fn effective_weights(&self) -> Vec<u64> {
        self.original_to_distinct
            .iter()
            .map(|b| b.map_or(0, |b| self.distinct_weights[b].0))
            .collect()
    }
}

/// Caps weights above `q` at `q`, sets zero-weight players aside, groups
/// the rest by weight, and flags degenerate quotas.
///
/// Capping keeps every coalition's status: a coalition holding a player of
/// weight `>= q` wins before and after.
pub fn normalize(game: &WeightedGame) -> Result<NormalizedGame> {
    game.validate()?;
    let q = game.quota;
    let n = game.n();
    let degenerate = if q == 0 {
        Some(Degeneracy::ZeroQuota)
    } else if game.total_weight() < q as u128 {
        Some(Degeneracy::Unreachable)
    } else {
        None
    };

    let mut cap_applied = vec![false; n];
    let mut null_players = Vec::new();
    let mut effective = Vec::with_capacity(n);
    for (i, &w) in game.weights.iter().enumerate() {
        if w == 0 {
            null_players.push(i);
            effective.push(0);
        } else if w > q {
            cap_applied[i] = true;
            effective.push(q);
        } else {
            effective.push(w);
        }
    }

    let mut sorted: Vec<u64> = effective.iter().copied().filter(|&w| w > 0).collect();
    sorted.sort_unstable();
    let mut distinct_weights: Vec<(u64, usize)> = Vec::new();
    for w in sorted {
        match distinct_weights.last_mut() {
            Some((last, count)) if *last == w => *count += 1,
            _ => distinct_weights.push((w, 1)),
        }
    }
    let original_to_distinct = effective
        .iter()
        .map(|&w| {
            (w > 0).then(|| {
                distinct_weights
                    .binary_search_by_key(&w, |&(dw, _)| dw)
                    .expect("every positive weight has a bucket")
            })
        })
        .collect();

    Ok(NormalizedGame {
        quota: q,
        n,
        n_effective: n - null_players.len(),
        distinct_weights,
        null_players,
        cap_applied,
        original_to_distinct,
        degenerate,
    })
}

/// How [`random_game`] picks the quota.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotaRule {
    Fixed(u64),
    /// `ceil(num / den * w(N))`
    Fraction {
        num: u64,
        den: u64,
    },
}

impl QuotaRule {
    pub fn half() -> Self {
        QuotaRule::Fraction { num: 1, den: 2 }
    }
}

/// Deterministic random game: weights uniform in `[1, max_weight]`,
/// quota per `rule`, clamped to `[1, w(N)]`.
pub fn random_game(n: usize, max_weight: u64, rule: QuotaRule, seed: u64) -> Result<WeightedGame> {
    if n == 0 || max_weight == 0 {
        return Err(Error::InvalidInstance(format!(
            "random_game needs n >= 1 and max_weight >= 1 (got {n}, {max_weight})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=max_weight)).collect();
    let total = weights.iter().map(|&w| w as u128).sum::<u128>();
    let raw = match rule {
        QuotaRule::Fixed(q) => q as u128,
        QuotaRule::Fraction { num, den } => {
            if den == 0 {
                return Err(Error::InvalidInstance(
                    "quota fraction has zero denominator".into(),
                ));
            }
            (total * num as u128).div_ceil(den as u128)
        }
    };
    let quota = raw.clamp(1, total).min(u64::MAX as u128) as u64;
    WeightedGame::new(weights, quota)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coalition_weight(weights: &[u64], mask: u32) -> u128 {
        weights
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &w)| w as u128)
            .sum()
    }

    #[test]
    fn plain_game_is_untouched() {
        let g = normalize(&WeightedGame::new(vec![3, 2, 1], 4).unwrap()).unwrap();
        assert_eq!(g.distinct_weights, vec![(1, 1), (2, 1), (3, 1)]);
        assert!(g.null_players.is_empty());
        assert_eq!(g.original_to_distinct, vec![Some(2), Some(1), Some(0)]);
        assert_eq!(g.degenerate, None);
        assert_eq!(g.n_effective, 3);
    }

    #[test]
    fn caps_and_null_players() {
        let g = normalize(&WeightedGame::new(vec![0, 5, 5], 3).unwrap()).unwrap();
        assert_eq!(g.distinct_weights, vec![(3, 2)]);
        assert_eq!(g.null_players, vec![0]);
        assert_eq!(g.cap_applied, vec![false, true, true]);
        assert_eq!(g.n_effective, 2);
        assert_eq!(g.effective_weights(), vec![0, 3, 3]);
    }

    #[test]
    fn degenerate_flags() {
        let g = normalize(&WeightedGame::new(vec![1, 1], 5).unwrap()).unwrap();
        assert_eq!(g.degenerate, Some(Degeneracy::Unreachable));
        let g = normalize(&WeightedGame::new(vec![1, 1], 0).unwrap()).unwrap();
        assert_eq!(g.degenerate, Some(Degeneracy::ZeroQuota));
    }

    #[test]
    fn empty_game_is_rejected() {
        assert!(matches!(
            WeightedGame::new(vec![], 1),
            Err(Error::InvalidInstance(_))
        ));
        let bad = WeightedGame {
            quota: 1,
            weights: vec![],
        };
        assert!(normalize(&bad).is_err());
    }

    #[test]
    fn capping_preserves_every_coalition_status() {
        for seed in 0..200u64 {
            let n = 1 + (seed % 12) as usize;
            let game = random_game(
                n,
                20,
                QuotaRule::Fraction {
                    num: seed % 5,
                    den: 4,
                },
                seed,
            )
            .unwrap();
            let mut weights = game.weights.clone();
            weights[0] = 0;
            let game = WeightedGame::new(weights, game.quota).unwrap();
            let norm = normalize(&game).unwrap();
            let capped = norm.effective_weights();
            let q = game.quota as u128;
            for mask in 0..1u32 << n {
                assert_eq!(
                    coalition_weight(&game.weights, mask) >= q,
                    coalition_weight(&capped, mask) >= q
                );
            }
            let counted: usize = norm.distinct_weights.iter().map(|&(_, c)| c).sum();
            assert_eq!(counted, norm.n_effective);
            assert!(norm
                .distinct_weights
                .iter()
                .all(|&(w, _)| 1 <= w && w <= game.quota));
        }
    }

    #[test]
    fn normalize_is_idempotent() {
        for seed in 0..50u64 {
            let game = random_game(15, 40, QuotaRule::Fixed(25), seed).unwrap();
            let once = normalize(&game).unwrap();
            let again =
                normalize(&WeightedGame::new(once.effective_weights(), game.quota).unwrap())
                    .unwrap();
            assert_eq!(once.distinct_weights, again.distinct_weights);
            assert_eq!(once.null_players, again.null_players);
        }
    }

    #[test]
    fn random_game_examples() {
        let g = random_game(3, 1, QuotaRule::Fixed(2), 99).unwrap();
        assert_eq!(g.weights, vec![1, 1, 1]);
        assert_eq!(g.quota, 2);
        assert_eq!(
            random_game(8, 50, QuotaRule::half(), 7),
            random_game(8, 50, QuotaRule::half(), 7)
        );
        assert!(random_game(0, 5, QuotaRule::half(), 1).is_err());
        assert!(random_game(3, 0, QuotaRule::half(), 1).is_err());
    }

    #[test]
    fn random_quota_within_bounds() {
        for seed in 0..1000 {
            let g = random_game(10, 100, QuotaRule::half(), seed).unwrap();
            let total = g.total_weight();
            assert!(g.weights.iter().all(|&w| (1..=100).contains(&w)));
            assert!(1 <= g.quota as u128 && g.quota as u128 <= total);
        }
        let g = random_game(4, 3, QuotaRule::Fixed(1000), 5).unwrap();
        assert_eq!(g.quota as u128, g.total_weight());
    }

    #[test]
    fn text_format() {
        let g = WeightedGame::parse_text("3 4\n3 2 1\n").unwrap();
        assert_eq!(g, WeightedGame::new(vec![3, 2, 1], 4).unwrap());
        assert_eq!(WeightedGame::parse_text(&g.to_text()).unwrap(), g);
        let err = WeightedGame::parse_text("3 4\n3 x 1\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 3));
        let err = WeightedGame::parse_text("3 4\n3 2\n").unwrap_err();
        assert!(err.message.contains("declares 3"));
        assert!(WeightedGame::parse_text("").is_err());
        assert!(WeightedGame::parse_text("0 4\n").is_err());
    }
}
