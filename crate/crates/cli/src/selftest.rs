use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use powerindex::oracle::{brute_force_banzhaf, brute_force_shapley, dp_banzhaf, dp_shapley};
use powerindex::{compute_banzhaf, compute_shapley, random_game, Error, QuotaRule, WeightedGame};

use crate::failure::Failure;
use crate::SelftestArgs;

type Check = Result<String, String>;
type NamedCheck<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn ratio(a: u64, b: u64) -> Ratio<BigUint> {
    Ratio::new(BigUint::from(a), BigUint::from(b))
}

fn known_instance() -> Check {
    let g = WeightedGame::new(vec![3, 2, 1], 4).map_err(|e| e.to_string())?;
    let bz = compute_banzhaf(&g, None)
        .map_err(|e| e.to_string())?
        .indices;
    let ss = compute_shapley(&g, None)
        .map_err(|e| e.to_string())?
        .indices;
    if bz != vec![ratio(3, 8), ratio(1, 8), ratio(1, 8)]
        || ss != vec![ratio(2, 3), ratio(1, 6), ratio(1, 6)]
    {
        return Err(format!("got Banzhaf {bz:?}, Shapley-Shubik {ss:?}"));
    }
    Ok("(3,2,1; q=4) gives 3/8,1/8,1/8 and 2/3,1/6,1/6".into())
}

fn against_brute_force(seed: u64, games: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..games {
        let n = rng.gen_range(1..=10);
        let weights: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=20)).collect();
        let q = rng.gen_range(0..=weights.iter().sum::<u64>() + 2);
        let g = WeightedGame::new(weights, q).map_err(|e| e.to_string())?;
        let run = || -> Result<bool, Error> {
            Ok(
                compute_banzhaf(&g, None)?.indices == brute_force_banzhaf(&g)?.indices
                    && compute_shapley(&g, None)?.indices
                        == brute_force_shapley(&g, n <= 8)?.indices,
            )
        };
        if !run().map_err(|e| format!("game {i}: {e}"))? {
            return Err(format!(
                "game {i} ({:?}, q = {q}) differs from brute force",
                g.weights
            ));
        }
    }
    Ok(format!("{games} random games with n <= 10"))
}

fn against_dp(seed: u64) -> Check {
    let cases = [(120usize, 3000u64), (250, 12000), (40, 2000), (80, 5000)];
    for (i, &(n, q)) in cases.iter().enumerate() {
        let g = random_game(n, 3 * q / n as u64, QuotaRule::Fixed(q), seed + i as u64)
            .map_err(|e| e.to_string())?;
        let ok = if i < 2 {
            compute_banzhaf(&g, None).map(|r| r.swing_counts) == dp_banzhaf(&g).map(|r| r.counts)
        } else {
            compute_shapley(&g, None).map(|r| r.pivot_weights) == dp_shapley(&g).map(|r| r.counts)
        };
        if !ok {
            return Err(format!("n = {n}, q = {q} differs from the DP oracle"));
        }
    }
    Ok("2 Banzhaf and 2 Shapley-Shubik games up to n = 250".into())
}

fn efficiency(seed: u64) -> Check {
    for s in 0..20 {
        let g = random_game(
            30,
            50,
            QuotaRule::Fraction {
                num: 1 + s % 3,
                den: 4,
            },
            seed + s,
        )
        .map_err(|e| e.to_string())?;
        let r = compute_shapley(&g, None).map_err(|e| e.to_string())?;
        let total = r
            .indices
            .iter()
            .fold(Ratio::from_integer(BigUint::zero()), |a, b| a + b);
        if total != Ratio::from_integer(BigUint::one()) {
            return Err(format!("indices of seed {} sum to {total}", seed + s));
        }
    }
    Ok("Shapley-Shubik indices sum to 1 on 20 games".into())
}

pub fn run(args: &SelftestArgs) -> Result<(), Failure> {
    let checks: [NamedCheck; 4] = [
        ("hand-checked instance", Box::new(known_instance)),
        (
            "brute force",
            Box::new(|| against_brute_force(args.seed, args.games)),
        ),
        ("dp oracles", Box::new(|| against_dp(args.seed))),
        ("efficiency", Box::new(|| efficiency(args.seed))),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                println!("FAIL {name}: {detail}");
                failed += 1;
            }
        }
    }
    if failed > 0 {
        return Err(Failure::other(format!(
            "{failed} self-test check(s) failed"
        )));
    }
    Ok(())
}
