//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the lines show up under
//! `cargo test` without `--nocapture`. Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use powerindex::bifps::{bi_binomial_product, kronecker_pack, kronecker_unpack, BiSeries};
use powerindex::fps::{binomial_product, Series};
use powerindex::oracle::{
    brute_force_banzhaf, brute_force_shapley, dp_banzhaf, dp_shapley, BRUTE_PERMUTATIONS_MAX_N,
};
use powerindex::ring::{ntt_convolve, select_prime_basis, PRIME_TABLE};
use powerindex::{
    compute_banzhaf, compute_shapley, normalize, random_game, BigRational, Degeneracy, PrimeField,
    QuotaRule, WeightedGame,
};

type Check = Result<String, String>;

struct Outcome {
    id: &'static str,
    title: &'static str,
    result: Check,
    elapsed: Duration,
}

fn run(id: &'static str, title: &'static str, f: impl FnOnce() -> Check) -> Outcome {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    let (tag, detail) = match &result {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!(
        "{tag} [{id}] {title}: {detail} ({:.1}s)",
        elapsed.as_secs_f64()
    );
    Outcome {
        id,
        title,
        result,
        elapsed,
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: powerindex::Error) -> String {
    e.to_string()
}

fn ratio_sum(v: &[BigRational]) -> BigRational {
    v.iter()
        .fold(Ratio::from_integer(BigUint::zero()), |a, b| a + b)
}

/// Games of suite 1: `n <= 12`, weights in `[0, 30]`, quota in `[1, w(N) + 2]`.
fn small_suite() -> Vec<WeightedGame> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    (0..500)
        .map(|_| {
            let n = rng.gen_range(1..=12);
            let weights: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=30)).collect();
            let total: u64 = weights.iter().sum();
            let q = rng.gen_range(1..=total + 2);
            WeightedGame::new(weights, q).unwrap()
        })
        .collect()
}

/// Games of suite 2. Player count and quota are uniform in their ranges;
/// weights are uniform in `[1, 3q/n]`, so `w(N)` is about `1.5 q`.
fn medium_suite(seed: u64, max_n: usize, max_q: u64) -> Vec<WeightedGame> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..50)
        .map(|i| {
            let n = rng.gen_range(1..=max_n);
            let q = rng.gen_range(1..=max_q);
            let max_weight = (3 * q / n as u64).max(1);
            random_game(n, max_weight, QuotaRule::Fixed(q), seed ^ i).unwrap()
        })
        .collect()
}

fn is_unit_sum(ss: &[BigRational]) -> bool {
    ratio_sum(ss) == Ratio::from_integer(BigUint::one())
}

fn criterion_1(games: &[WeightedGame], ss_sums: &mut Vec<bool>) -> Check {
    let (mut bz_checked, mut ss_checked) = (0, 0);
    for (i, g) in games.iter().enumerate() {
        let bz = compute_banzhaf(g, None).map_err(err)?;
        let want = brute_force_banzhaf(g).map_err(err)?;
        ensure(
            bz.indices == want.indices && bz.swing_counts == want.counts,
            || {
                format!(
                    "game {i} ({g:?}): Banzhaf {:?} != brute force {:?}",
                    bz.indices, want.indices
                )
            },
        )?;
        bz_checked += 1;
        let ss = compute_shapley(g, None).map_err(err)?;
        let want = brute_force_shapley(g, g.n() <= BRUTE_PERMUTATIONS_MAX_N).map_err(err)?;
        ensure(
            ss.indices == want.indices && ss.pivot_weights == want.counts,
            || {
                format!(
                    "game {i} ({g:?}): Shapley-Shubik {:?} != brute force {:?}",
                    ss.indices, want.indices
                )
            },
        )?;
        ss_checked += 1;
        if ss.degenerate.is_none() {
            ss_sums.push(is_unit_sum(&ss.indices));
        }
    }
    Ok(format!(
        "{bz_checked} Banzhaf and {ss_checked} Shapley-Shubik games equal brute force"
    ))
}

fn criterion_2(
    bz_games: &[WeightedGame],
    ss_games: &[WeightedGame],
    ss_sums: &mut Vec<bool>,
) -> Check {
    for (i, g) in bz_games.iter().enumerate() {
        let got = compute_banzhaf(g, None).map_err(err)?;
        let want = dp_banzhaf(g).map_err(err)?;
        ensure(
            got.swing_counts == want.counts && got.indices == want.indices,
            || {
                format!(
                    "Banzhaf game {i} (n = {}, q = {}) differs from DP",
                    g.n(),
                    g.quota
                )
            },
        )?;
    }
    for (i, g) in ss_games.iter().enumerate() {
        let got = compute_shapley(g, None).map_err(err)?;
        let want = dp_shapley(g).map_err(err)?;
        ensure(
            got.pivot_weights == want.counts && got.indices == want.indices,
            || {
                format!(
                    "Shapley-Shubik game {i} (n = {}, q = {}) differs from DP",
                    g.n(),
                    g.quota
                )
            },
        )?;
        if got.degenerate.is_none() {
            ss_sums.push(is_unit_sum(&got.indices));
        }
    }
    let max_bz = bz_games
        .iter()
        .map(|g| (g.n(), g.quota))
        .max_by_key(|&(n, q)| n as u64 * q);
    let max_ss = ss_games
        .iter()
        .map(|g| (g.n(), g.quota))
        .max_by_key(|&(n, q)| n as u64 * q);
    Ok(format!(
        "50 + 50 games equal the DP oracles (largest n*q: Banzhaf {max_bz:?}, Shapley-Shubik {max_ss:?})"
    ))
}

fn criterion_3(sums: &[bool]) -> Check {
    let bad = sums.iter().filter(|&&ok| !ok).count();
    ensure(bad == 0 && !sums.is_empty(), || {
        format!("{bad} of {} instances do not sum to 1", sums.len())
    })?;
    Ok(format!(
        "sum of indices is exactly 1 on {} non-degenerate instances",
        sums.len()
    ))
}

fn random_field(rng: &mut ChaCha8Rng) -> PrimeField {
    PrimeField::new(PRIME_TABLE[rng.gen_range(0..PRIME_TABLE.len())]).unwrap()
}

fn random_coeffs(rng: &mut ChaCha8Rng, f: &PrimeField, len: usize) -> Vec<u64> {
    (0..len).map(|_| rng.gen_range(0..f.modulus())).collect()
}

fn schoolbook(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let p = f.modulus() as u128;
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u128 * y as u128) % p;
        }
    }
    out.into_iter().map(|x| x as u64).collect()
}

fn criterion_4() -> Check {
    const CASES: usize = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    for case in 0..CASES {
        let f = random_field(&mut rng);
        let t = rng.gen_range(1..=600);
        let mut c = random_coeffs(&mut rng, &f, t);
        c[0] = rng.gen_range(1..f.modulus());
        let s = Series::new(f, c.clone()).map_err(err)?;
        let prod = s.multiply(&s.inverse(t).map_err(err)?, t).map_err(err)?;
        ensure(prod == Series::one(f, t).map_err(err)?, || {
            format!("f * f^-1 != 1 (case {case}, t = {t})")
        })?;
        c[0] = 1;
        let s = Series::new(f, c.clone()).map_err(err)?;
        ensure(s.log(t).and_then(|l| l.exp(t)).map_err(err)? == s, || {
            format!("exp(log f) != f (case {case}, t = {t})")
        })?;
        c[0] = 0;
        let h = Series::new(f, c).map_err(err)?;
        ensure(h.exp(t).and_then(|e| e.log(t)).map_err(err)? == h, || {
            format!("log(exp h) != h (case {case}, t = {t})")
        })?;
    }
    for case in 0..CASES {
        let f = random_field(&mut rng);
        let t = rng.gen_range(1..=150);
        let m = rng.gen_range(1..=6);
        let mut c = random_coeffs(&mut rng, &f, t * m);
        c[0] = rng.gen_range(1..f.modulus());
        let s = BiSeries::new(f, t, m, c.clone()).map_err(err)?;
        let prod = s.multiply(&s.inverse(t).map_err(err)?, t).map_err(err)?;
        ensure(prod == BiSeries::one(f, t, m).map_err(err)?, || {
            format!("bivariate f * f^-1 != 1 (case {case}, t = {t}, m = {m})")
        })?;
        c[0] = 1;
        let s = BiSeries::new(f, t, m, c.clone()).map_err(err)?;
        ensure(s.log(t).and_then(|l| l.exp(t)).map_err(err)? == s, || {
            format!("bivariate exp(log f) != f (case {case}, t = {t}, m = {m})")
        })?;
        c[0] = 0;
        let h = BiSeries::new(f, t, m, c).map_err(err)?;
        ensure(h.exp(t).and_then(|e| e.log(t)).map_err(err)? == h, || {
            format!("bivariate log(exp h) != h (case {case}, t = {t}, m = {m})")
        })?;
    }
    for case in 0..CASES {
        let f = random_field(&mut rng);
        let (la, lb) = (rng.gen_range(1..=400), rng.gen_range(1..=400));
        let a = random_coeffs(&mut rng, &f, la);
        let b = random_coeffs(&mut rng, &f, lb);
        ensure(
            ntt_convolve(&f, &a, &b).map_err(err)? == schoolbook(&f, &a, &b),
            || {
                format!(
                    "NTT product != schoolbook (case {case}, lengths {} and {})",
                    a.len(),
                    b.len()
                )
            },
        )?;
    }
    for case in 0..CASES {
        let f = random_field(&mut rng);
        let rows = rng.gen_range(1..=50);
        let m = rng.gen_range(1..=8);
        let stride = rows + rng.gen_range(0..=10);
        let grid = random_coeffs(&mut rng, &f, rows * m);
        let packed = kronecker_pack(&grid, rows, m, stride);
        ensure(kronecker_unpack(&packed, rows, m, stride) == grid, || {
            format!("Kronecker round trip failed (case {case}, {rows} x {m}, stride {stride})")
        })?;
    }
    Ok(format!(
        "{CASES} cases each of 3 univariate, 3 bivariate, NTT and Kronecker identities"
    ))
}

fn criterion_5(games: &[WeightedGame]) -> Check {
    let mut checked = 0;
    for (i, g) in games.iter().enumerate() {
        let norm = normalize(g).map_err(err)?;
        if norm.degenerate.is_some() || g.n() > 14 {
            continue;
        }
        let t = norm.quota as usize;
        let ne = norm.n_effective;
        let m = ne.min(t);
        let weights: Vec<usize> = norm
            .effective_weights()
            .into_iter()
            .filter(|&w| w > 0)
            .map(|w| w as usize)
            .collect();
        // hist[k][s]: subsets of k non-null players with weight s < t
        let mut hist = vec![vec![0u64; t]; ne + 1];
        for mask in 0u32..1 << ne {
            let s: usize = (0..ne)
                .filter(|&j| mask >> j & 1 == 1)
                .map(|j| weights[j])
                .sum();
            if s < t {
                hist[mask.count_ones() as usize][s] += 1;
            }
        }
        let uni: Vec<u64> = (0..t)
            .map(|s| hist.iter().map(|row| row[s]).sum())
            .collect();
        let basis = select_prime_basis(ne, t).map_err(err)?;
        let mut uni_res = Vec::new();
        let mut bi_res = Vec::new();
        for f in basis.fields() {
            let p = f.modulus();
            let fh = binomial_product(*f, &norm.distinct_weights, t).map_err(err)?;
            ensure(
                fh.coeffs().iter().zip(&uni).all(|(&c, &h)| c == h % p),
                || format!("game {i}: univariate coefficients differ from histogram mod {p}"),
            )?;
            let bh = bi_binomial_product(*f, &norm.distinct_weights, t, m).map_err(err)?;
            let ok = (0..t).all(|s| (0..m).all(|k| bh.get(s, k) == hist[k][s] % p));
            ensure(ok, || {
                format!("game {i}: bivariate coefficients differ from histogram mod {p}")
            })?;
            uni_res.push(fh.coeffs().to_vec());
            bi_res.push(bh);
        }
        for s in 0..t {
            let r: Vec<u64> = uni_res.iter().map(|c| c[s]).collect();
            ensure(
                basis.crt_reconstruct(&r).map_err(err)? == BigUint::from(uni[s]),
                || format!("game {i}: CRT of [x^{s}] differs from the histogram"),
            )?;
            for k in 0..m {
                let r: Vec<u64> = bi_res.iter().map(|b| b.get(s, k)).collect();
                ensure(
                    basis.crt_reconstruct(&r).map_err(err)? == BigUint::from(hist[k][s]),
                    || format!("game {i}: CRT of [y^{k} x^{s}] differs from the histogram"),
                )?;
            }
        }
        checked += 1;
    }
    Ok(format!(
        "{checked} games match subset histograms per prime and after CRT"
    ))
}

fn fps_seconds(g: &WeightedGame, runs: usize) -> Result<f64, String> {
    let mut best = f64::INFINITY;
    for _ in 0..runs {
        let start = Instant::now();
        compute_banzhaf(g, None).map_err(err)?;
        best = best.min(start.elapsed().as_secs_f64());
    }
    Ok(best)
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}

fn game_for(n: usize, q: u64, seed: u64) -> WeightedGame {
    random_game(n, 4 * q / n as u64, QuotaRule::Fixed(q), seed).unwrap()
}

fn criterion_6a() -> Check {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut times = Vec::new();
    for e in 14..=19 {
        let q = 1u64 << e;
        let secs = fps_seconds(&game_for(1000, q, e), 3)?;
        xs.push((q as f64).ln());
        ys.push(secs.ln());
        times.push(format!("{secs:.3}"));
    }
    let s = slope(&xs, &ys);
    let detail = format!(
        "slope {s:.3} over q = 2^14..2^19, seconds [{}]",
        times.join(", ")
    );
    ensure((0.9..=1.4).contains(&s), || detail.clone())?;
    Ok(detail)
}

fn criterion_6b() -> Check {
    let g = game_for(2000, 1 << 18, 18);
    let fps = fps_seconds(&g, 2)?;
    let start = Instant::now();
    dp_banzhaf(&g).map_err(err)?;
    let dp = start.elapsed().as_secs_f64();
    let detail = format!("fps {fps:.2}s, DP {dp:.2}s, speedup {:.2}x", dp / fps);
    ensure(dp >= 5.0 * fps, || detail.clone())?;
    Ok(detail)
}

fn all_zero(v: &[BigUint]) -> bool {
    v.iter().all(Zero::is_zero)
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let mut games = 0;
    for n in 1..=4usize {
        for code in 0..5usize.pow(n as u32) {
            let weights: Vec<u64> = (0..n)
                .map(|j| (code / 5usize.pow(j as u32) % 5) as u64)
                .collect();
            let total: u64 = weights.iter().sum();
            for q in 0..=total + 1 {
                let g = WeightedGame::new(weights.clone(), q).unwrap();
                let bz = compute_banzhaf(&g, None).map_err(err)?;
                let ss = compute_shapley(&g, None).map_err(err)?;
                let label = format!("{weights:?}, q = {q}");
                let expected = if q == 0 {
                    Some(Degeneracy::ZeroQuota)
                } else if total < q {
                    Some(Degeneracy::Unreachable)
                } else {
                    None
                };
                ensure(
                    bz.degenerate == expected && ss.degenerate == expected,
                    || {
                        format!(
                            "{label}: flags {:?}/{:?}, expected {expected:?}",
                            bz.degenerate, ss.degenerate
                        )
                    },
                )?;
                if expected.is_some() {
                    ensure(
                        all_zero(&bz.swing_counts) && all_zero(&ss.pivot_weights),
                        || format!("{label}: degenerate game has nonzero counts"),
                    )?;
                }
                for (j, &w) in weights.iter().enumerate() {
                    if w == 0 {
                        ensure(
                            bz.swing_counts[j].is_zero() && ss.pivot_weights[j].is_zero(),
                            || format!("{label}: zero-weight player {j} has power"),
                        )?;
                    }
                }
                if weights.iter().any(|&w| q > 0 && w > q) {
                    let capped: Vec<u64> = weights.iter().map(|&w| w.min(q)).collect();
                    let c = WeightedGame::new(capped, q).unwrap();
                    ensure(
                        compute_banzhaf(&c, None).map_err(err)?.indices == bz.indices
                            && compute_shapley(&c, None).map_err(err)?.indices == ss.indices,
                        || format!("{label}: weights above the quota change the result"),
                    )?;
                }
                if n == 1 && expected.is_none() {
                    ensure(
                        bz.swing_counts[0] == BigUint::one()
                            && ss.indices[0] == Ratio::from_integer(BigUint::one()),
                        || format!("{label}: single player must swing once and hold SS = 1"),
                    )?;
                }
                let bb = brute_force_banzhaf(&g).map_err(err)?;
                let sb = brute_force_shapley(&g, true).map_err(err)?;
                ensure(
                    bb.counts == bz.swing_counts && sb.counts == ss.pivot_weights,
                    || format!("{label}: differs from brute force"),
                )?;
                games += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 1.0, || format!("micro-suite took {secs:.2}s"))?;
    Ok(format!("{games} games with n <= 4 and weights <= 4"))
}

fn criterion_8() -> Check {
    let r = |a: u64, b: u64| Ratio::new(BigUint::from(a), BigUint::from(b));
    let g = WeightedGame::new(vec![3, 2, 1], 4).unwrap();
    let bz = compute_banzhaf(&g, None).map_err(err)?;
    ensure(bz.indices == vec![r(3, 8), r(1, 8), r(1, 8)], || {
        format!("Banzhaf {:?}", bz.indices)
    })?;
    let ss = compute_shapley(&g, None).map_err(err)?;
    ensure(ss.indices == vec![r(2, 3), r(1, 6), r(1, 6)], || {
        format!("Shapley-Shubik {:?}", ss.indices)
    })?;
    let mut symmetric = 0;
    for n in 1..=10u64 {
        for w in [1u64, 3, 7] {
            for q in 1..=n * w {
                let g = WeightedGame::new(vec![w; n as usize], q).unwrap();
                let bz = compute_banzhaf(&g, None).map_err(err)?;
                let ss = compute_shapley(&g, None).map_err(err)?;
                ensure(bz.indices.iter().all(|x| *x == bz.indices[0]), || {
                    format!("symmetric game n = {n}, w = {w}, q = {q}: unequal Banzhaf indices")
                })?;
                ensure(ss.indices.iter().all(|x| *x == r(1, n)), || {
                    format!("symmetric game n = {n}, w = {w}, q = {q}: SS != 1/n")
                })?;
                symmetric += 1;
            }
        }
    }
    Ok(format!("(3,2,1; q=4) and {symmetric} symmetric games"))
}

fn main() -> ExitCode {
    let small = small_suite();
    let bz_medium = medium_suite(0x5eed_0002, 300, 50_000);
    let ss_medium = medium_suite(0x5eed_0003, 150, 20_000);
    let mut ss_sums = Vec::new();

    let mut outcomes = vec![
        run("1", "oracle equivalence, small", || {
            criterion_1(&small, &mut ss_sums)
        }),
        run("2", "oracle equivalence, medium", || {
            criterion_2(&bz_medium, &ss_medium, &mut ss_sums)
        }),
    ];
    outcomes.push(run("3", "efficiency identity", || criterion_3(&ss_sums)));
    outcomes.push(run("4", "kernel identities", criterion_4));
    outcomes.push(run("5", "generating-function counts", || {
        criterion_5(&small)
    }));
    outcomes.push(run("6a", "runtime slope in q at n = 1000", criterion_6a));
    outcomes.push(run(
        "6b",
        "speedup over DP at n = 2000, q = 2^18",
        criterion_6b,
    ));
    outcomes.push(run("7", "degenerate handling", criterion_7));
    outcomes.push(run("8", "hand-checked instances", criterion_8));

    let failed: Vec<&Outcome> = outcomes.iter().filter(|o| o.result.is_err()).collect();
    let total: f64 = outcomes.iter().map(|o| o.elapsed.as_secs_f64()).sum();
    println!(
        "acceptance: {} passed, {} failed, {total:.1}s",
        outcomes.len() - failed.len(),
        failed.len()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        for o in failed {
            println!("failed: [{}] {}", o.id, o.title);
        }
        ExitCode::FAILURE
    }
}
