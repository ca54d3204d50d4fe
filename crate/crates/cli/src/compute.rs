use powerindex::oracle::{
    brute_force_banzhaf, brute_force_shapley, dp_banzhaf, dp_shapley, BRUTE_PERMUTATIONS_MAX_N,
};
use powerindex::{
    compute_banzhaf, compute_shapley, normalize, BigRational, Degeneracy, WeightedGame,
};

use crate::failure::Failure;
use crate::{IndexChoice, MethodChoice};

/// Indices of one game, players in input order.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub method: &'static str,
    pub quota: u64,
    pub weights: Vec<u64>,
    pub degenerate: Option<Degeneracy>,
    pub banzhaf: Option<Vec<BigRational>>,
    pub shapley: Option<Vec<BigRational>>,
}

fn method_name(m: MethodChoice) -> &'static str {
    match m {
        MethodChoice::Fps => "fps",
        MethodChoice::Dp => "dp",
        MethodChoice::Brute => "brute",
        MethodChoice::AllCompare => "all-compare",
    }
}

fn banzhaf(game: &WeightedGame, method: MethodChoice) -> Result<Vec<BigRational>, Failure> {
    Ok(match method {
        MethodChoice::Dp => dp_banzhaf(game)?.indices,
        MethodChoice::Brute => brute_force_banzhaf(game)?.indices,
        _ => compute_banzhaf(game, None)?.indices,
    })
}

fn shapley(game: &WeightedGame, method: MethodChoice) -> Result<Vec<BigRational>, Failure> {
    Ok(match method {
        MethodChoice::Dp => dp_shapley(game)?.indices,
        // orderings while they are few, the subset formula beyond
        MethodChoice::Brute => {
            brute_force_shapley(game, game.n() <= BRUTE_PERMUTATIONS_MAX_N)?.indices
        }
        _ => compute_shapley(game, None)?.indices,
    })
}

fn compare(name: &str, fps: &[BigRational], dp: &[BigRational]) -> Result<(), Failure> {
    match fps.iter().zip(dp).position(|(a, b)| a != b) {
        Some(p) => Err(Failure::mismatch(format!(
            "{name} index of player {p} differs: fps {} vs dp {}",
            fps[p], dp[p]
        ))),
        None => Ok(()),
    }
}

pub fn run(
    game: &WeightedGame,
    index: IndexChoice,
    method: MethodChoice,
) -> Result<Report, Failure> {
    let degenerate = normalize(game)?.degenerate;
    let mut report = Report {
        method: method_name(method),
        quota: game.quota,
        weights: game.weights.clone(),
        degenerate,
        banzhaf: None,
        shapley: None,
    };
    if index.banzhaf() {
        let values = banzhaf(game, method)?;
        if method == MethodChoice::AllCompare {
            compare("Banzhaf", &values, &banzhaf(game, MethodChoice::Dp)?)?;
        }
        report.banzhaf = Some(values);
    }
    if index.shapley() {
        let values = shapley(game, method)?;
        if method == MethodChoice::AllCompare {
            compare("Shapley-Shubik", &values, &shapley(game, MethodChoice::Dp)?)?;
        }
        report.shapley = Some(values);
    }
    Ok(report)
}
