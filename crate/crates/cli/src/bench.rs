use std::time::Instant;

use powerindex::oracle::{dp_banzhaf, dp_shapley};
use powerindex::{
    compute_banzhaf, compute_shapley, random_game, BigRational, Error, QuotaRule, WeightedGame,
};

use crate::failure::Failure;
use crate::BenchArgs;

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        (xs[mid - 1] + xs[mid]) / 2.0
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    (var > 0.0).then(|| cov / var)
}

/// Median seconds over `reps` runs and the values of the last one;
/// `None` when the method refuses the size.
fn time<F>(reps: u32, f: F) -> Result<Option<(f64, Vec<BigRational>)>, Failure>
where
    F: Fn() -> Result<Vec<BigRational>, Error>,
{
    let mut secs = Vec::new();
    let mut values = Vec::new();
    for _ in 0..reps {
        let start = Instant::now();
        match f() {
            Ok(v) => values = v,
            Err(Error::SizeGuard(_) | Error::BudgetExceeded(_) | Error::UnsupportedSize(_)) => {
                return Ok(None)
            }
            Err(e) => return Err(e.into()),
        }
        secs.push(start.elapsed().as_secs_f64());
    }
    Ok(Some((median(secs), values)))
}

fn bench_game(n: usize, q: u64, seed: u64) -> Result<WeightedGame, Failure> {
    let max_weight = (4 * q / n as u64).max(1);
    Ok(random_game(n, max_weight, QuotaRule::Fixed(q), seed)?)
}

fn fmt_secs(t: Option<f64>) -> String {
    t.map_or_else(|| "skipped".to_string(), |s| format!("{s:.6}"))
}

/// CSV of median wall times per `(index, n, q)` cell, followed by one
/// `# slope` comment per index and player count.
pub fn run(args: &BenchArgs) -> Result<String, Failure> {
    let mut out = String::from("index,n,q,fps_median_s,dp_median_s,speedup,agree\n");
    let mut slopes = String::new();
    let indices: Vec<&str> = [
        ("banzhaf", args.index.banzhaf()),
        ("shapley", args.index.shapley()),
    ]
    .into_iter()
    .filter_map(|(name, on)| on.then_some(name))
    .collect();
    for &index in &indices {
        for &n in &args.players {
            let mut points = Vec::new();
            for &q in &args.quotas {
                let game = bench_game(n, q, args.seed)?;
                eprintln!("{index} n={n} q={q}");
                let (fps, dp) = if index == "banzhaf" {
                    let fps = time(args.repetitions, || {
                        compute_banzhaf(&game, None).map(|r| r.indices)
                    })?;
                    let dp = if args.skip_dp {
                        None
                    } else {
                        time(args.repetitions, || dp_banzhaf(&game).map(|r| r.indices))?
                    };
                    (fps, dp)
                } else {
                    let fps = time(args.repetitions, || {
                        compute_shapley(&game, None).map(|r| r.indices)
                    })?;
                    let dp = if args.skip_dp {
                        None
                    } else {
                        time(args.repetitions, || dp_shapley(&game).map(|r| r.indices))?
                    };
                    (fps, dp)
                };
                let agree = match (&fps, &dp) {
                    (Some((_, a)), Some((_, b))) if a != b => {
                        return Err(Failure::mismatch(format!(
                            "{index} n={n} q={q}: fps and dp disagree"
                        )));
                    }
                    (Some(_), Some(_)) => "yes",
                    _ => "",
                };
                let fps_t = fps.as_ref().map(|f| f.0);
                let dp_t = dp.as_ref().map(|d| d.0);
                let speedup = match (fps_t, dp_t) {
                    (Some(f), Some(d)) if f > 0.0 => format!("{:.2}", d / f),
                    _ => String::new(),
                };
                out += &format!(
                    "{index},{n},{q},{},{},{speedup},{agree}\n",
                    fmt_secs(fps_t),
                    fmt_secs(dp_t)
                );
                if let Some(t) = fps_t {
                    points.push((q as f64, t));
                }
            }
            if let Some(s) = log_log_slope(&points) {
                slopes += &format!("# slope {index} n={n}: {s:.3}\n");
            }
        }
    }
    Ok(out + &slopes)
}
