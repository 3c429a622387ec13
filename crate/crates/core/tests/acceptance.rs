//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rauzy_core::diagram::{build_path, explore, RauzyPath, DEFAULT_CAP};
use rauzy_core::fg::{self, SampleOptions};
use rauzy_core::induction::{apply_bottom, apply_flip, apply_top, Move, MoveWord, Reading};
use rauzy_core::linalg::{path_matrix, relabel_matrix, IntMatrix};
use rauzy_core::pa::{self, certify, LowerMode};
use rauzy_core::penner;
use rauzy_core::perm::{Alphabet, LabeledPermutation, Letter};
use rauzy_core::rational::{ratio, reciprocal};
use rauzy_core::surface::GluedSurface;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn p(s: &str) -> LabeledPermutation {
    LabeledPermutation::parse(s).unwrap()
}

fn tol9() -> BigRational {
    ratio(1, 1_000_000_000)
}

fn criterion_1() -> Outcome {
    let cases = [
        (apply_top(&p("A B C D / D C B A")).map_err(|e| e.to_string())?.target, p("A B C D / D A C B")),
        (apply_bottom(&p("A B C D / D C B A")).map_err(|e| e.to_string())?.target, p("A D B C / D C B A")),
        (apply_flip(&p("A C B / B A C")).target, p("C A B / B C A")),
        (apply_flip(&p("A B C / C A B")).target, p("B A C / C B A")),
    ];
    for (got, want) in &cases {
        ensure(got.top_names() == want.top_names() && got.bottom_names() == want.bottom_names(), || {
            format!("got ({got}), want ({want})")
        })?;
    }
    let start = p("A B C / C A B");
    let path = build_path(&start, "f", Reading::Rtl).unwrap().into_allowed().map_err(|e| e.to_string())?;
    let want = IntMatrix::from_i64_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
    ensure(path_matrix(&path) == want, || "flip example matrix differs".into())?;
    ensure(relabel_matrix(path.start(), path.end()).unwrap() == want, || "relabeling differs".into())?;
    Ok("4 moves and V = P exact".into())
}

fn criterion_2() -> Outcome {
    let seed = p("A B C / C B A");
    let d = explore(&seed, false, DEFAULT_CAP).map_err(|e| e.to_string())?;
    ensure(d.len() == 3 && d.edges().len() == 6, || format!("{} vertices, {} edges", d.len(), d.edges().len()))?;
    let alphabet = seed.alphabet().clone();
    let v = |s: &str| d.index_of(&LabeledPermutation::parse_in(s, alphabet.clone()).unwrap()).expect("vertex");
    let (acb, abc, abc_cab) = (v("A C B / C B A"), v("A B C / C B A"), v("A B C / C A B"));
    let want: HashSet<(usize, usize, Move)> = [
        (acb, acb, Move::Top),
        (abc_cab, abc_cab, Move::Bottom),
        (abc, abc_cab, Move::Top),
        (abc_cab, abc, Move::Top),
        (abc, acb, Move::Bottom),
        (acb, abc, Move::Bottom),
    ]
    .into_iter()
    .collect();
    let got: HashSet<(usize, usize, Move)> = d.edges().iter().map(|e| (e.src, e.dst, e.kind)).collect();
    ensure(got == want, || format!("edge set {got:?}"))?;
    Ok("3 vertices, 6 edges as displayed".into())
}

fn criterion_3() -> Outcome {
    for g in 2..=10 {
        let path = fg::build_gamma(g).map_err(|e| format!("g={g}: {e}"))?;
        let start = LabeledPermutation::fg_start(g).unwrap();
        let mut cur = start.clone();
        for _ in 0..g {
            cur = apply_bottom(&cur).unwrap().target;
        }
        ensure(cur == start, || format!("g={g}: b^g does not return"))?;
        ensure(path_matrix(&path) == fg::block_matrix(g), || format!("g={g}: block form differs"))?;
        let s = GluedSurface::glue(&start);
        ensure(s.vertex_count() == 1 && s.genus() == g, || {
            format!("g={g}: {} vertices, genus {}", s.vertex_count(), s.genus())
        })?;
    }
    Ok("g = 2..10".into())
}

/// Largest real root of x⁴ − x³ − x² − x + 1 by exact bisection on [3/2, 2].
fn gamma_two_root() -> BigRational {
    let f = |x: &BigRational| {
        let x2 = x * x;
        let x3 = &x2 * x;
        let x4 = &x3 * x;
        x4 - x3 - x2 - x + BigRational::from_integer(BigInt::from(1))
    };
    let (mut lo, mut hi) = (ratio(3, 2), ratio(2, 1));
    assert!(f(&lo).is_negative() && f(&hi).is_positive());
    for _ in 0..60 {
        let mid = (&lo + &hi) / BigInt::from(2);
        if f(&mid).is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn criterion_4() -> Outcome {
    let two = BigRational::from_integer(BigInt::from(2));
    for g in 2..=10usize {
        let path = fg::build_gamma(g).unwrap();
        let c = certify(&path, &tol9()).map_err(|e| format!("g={g}: {e}"))?;
        let gu = g as u64;
        let up = c.lc_upper.as_ref().ok_or(format!("g={g}: no upper bound"))?;
        ensure(up.bound == reciprocal(gu - 1) && up.orbit.steps == 2 * gu - 2, || {
            format!("g={g}: upper {} with {} steps", up.bound, up.orbit.steps)
        })?;
        let low = c.lc_lower_diagonal_cap.as_ref().ok_or(format!("g={g}: no diagonal-cap bound"))?;
        ensure(low.bound == reciprocal(16 * gu - 12), || format!("g={g}: lower {}", low.bound))?;
        let k = c.positive_power.ok_or(format!("g={g}: not primitive"))?;
        ensure(k <= 4 * gu - 4, || format!("g={g}: exponent {k}"))?;
        let lam = c.lambda.as_ref().ok_or(format!("g={g}: no bracket"))?;
        ensure(lam.width() <= tol9(), || format!("g={g}: bracket too wide"))?;
        ensure(lam.low.is_positive() && &lam.low * &lam.low >= two, || format!("g={g}: lambda below sqrt 2"))?;
        if g == 2 {
            let root = gamma_two_root();
            let mid = (&lam.low + &lam.high) / BigInt::from(2);
            ensure((mid - &root).abs() <= ratio(1, 1_000_000), || "g=2: lambda differs from the quartic root".into())?;
        }
    }
    Ok("g = 2..10, bounds exact, lambda >= sqrt 2".into())
}

fn criterion_5() -> Outcome {
    let mut slowest = Duration::ZERO;
    for n in 3..=8 {
        let t = Instant::now();
        let r = fg::central_checks(n, DEFAULT_CAP, &SampleOptions::default()).map_err(|e| format!("n={n}: {e}"))?;
        let elapsed = t.elapsed();
        slowest = slowest.max(elapsed);
        let failed: Vec<_> = r.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
        ensure(failed.is_empty(), || format!("n={n}: failed {failed:?}"))?;
        ensure(r.expected_lower == reciprocal(16 * (n as u64 / 2) - 10), || format!("n={n}: wrong bound"))?;
        if n == 8 {
            ensure(elapsed <= Duration::from_secs(5), || format!("n=8 took {elapsed:?}"))?;
        }
    }
    Ok(format!("n = 3..8, slowest {:.2}s", slowest.as_secs_f64()))
}

fn criterion_6() -> Outcome {
    for g in 3..=6usize {
        for n in [1u64, 2, 3, 10, 100] {
            ensure(penner::verify_power_identity(g, n).map_err(|e| e.to_string())?, || {
                format!("(g={g}, n={n}): power identity fails")
            })?;
            let r = penner::stretch_bounds(g, n, &tol9()).map_err(|e| e.to_string())?;
            ensure(r.min_row_sum_power == (n + 1).to_string(), || format!("(g={g}, n={n}): row sum"))?;
            let low_g = num_traits::pow(r.rho.low.clone(), g);
            let target = BigRational::from_integer(BigInt::from(n + 1)) - ratio(1, 1_000_000);
            ensure(low_g >= target, || format!("(g={g}, n={n}): rho^g below n+1"))?;
        }
        let rot = penner::lc_upper_rotation(g).map_err(|e| e.to_string())?;
        ensure(rot.bound == reciprocal(g as u64 - 1), || format!("g={g}: rotation bound {}", rot.bound))?;
    }
    Ok("g = 3..6 x n in {1,2,3,10,100}".into())
}

fn criterion_7() -> Outcome {
    let mut at_five = Duration::ZERO;
    for g in 3..=5usize {
        let t = Instant::now();
        let r = penner::hg_sequence(g, &tol9(), 10_000_000).map_err(|e| e.to_string())?;
        if g == 5 {
            at_five = t.elapsed();
        }
        let g_rat = BigRational::from_integer(BigInt::from(g)) - ratio(1, 1_000_000);
        ensure(r.rho.low >= g_rat, || format!("g={g}: rho low {}", r.rho.low_f64()))?;
        ensure(r.teich_length.0 >= (g as f64).ln() - 1e-6, || format!("g={g}: l_T too small"))?;
    }
    ensure(at_five <= Duration::from_secs(30), || format!("g=5 took {at_five:?}"))?;
    Ok(format!("g = 3,4,5, g=5 in {:.2}s", at_five.as_secs_f64()))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..100 {
        let d = rng.gen_range(1..=4usize);
        let rows: Vec<Vec<i64>> = (0..d).map(|_| (0..d).map(|_| rng.gen_range(0..=5)).collect()).collect();
        let a = IntMatrix::from_rows(&rows).unwrap();
        let b: Vec<BigInt> = (0..d).map(|_| BigInt::from(rng.gen_range(0..=5))).collect();
        let n = rng.gen_range(1..=10u64);
        let r = penner::homology_power_check(&a, &b, n).map_err(|e| e.to_string())?;
        ensure(r.matches, || format!("instance {i} (d={d}, n={n}) fails"))?;
    }
    Ok("100 random instances".into())
}

fn all_bottoms(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn perm_from(n: usize, bottom: &[usize]) -> LabeledPermutation {
    let alphabet = std::sync::Arc::new(Alphabet::canonical(n));
    LabeledPermutation::new(
        alphabet,
        (0..n).map(Letter::from_index).collect(),
        bottom.iter().map(|&i| Letter::from_index(i)).collect(),
    )
    .unwrap()
}

fn criterion_9() -> Outcome {
    // Irreducibility is preserved by t and b; flip is an involution.
    let mut irreducible = Vec::new();
    for n in 2..=6 {
        for bottom in all_bottoms(n) {
            let q = perm_from(n, &bottom);
            let f = apply_flip(&q).target;
            ensure(apply_flip(&f).target == q, || format!("flip not an involution on ({q})"))?;
            ensure(f.is_irreducible() == q.is_irreducible(), || format!("flip changes irreducibility of ({q})"))?;
            if q.is_irreducible() {
                for e in [apply_top(&q), apply_bottom(&q)] {
                    let e = e.map_err(|e| e.to_string())?;
                    ensure(e.target.is_irreducible(), || format!("({q}) -> ({}) reducible", e.target))?;
                }
                irreducible.push(q);
            }
        }
    }

    // Random allowed loops: |det V| = 1 and never-winner rows match the orbit map.
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut loops = 0;
    let mut attempts = 0;
    while loops < 200 {
        attempts += 1;
        ensure(attempts < 200_000, || format!("only {loops} allowed loops found"))?;
        let start = irreducible[rng.gen_range(0..irreducible.len())].clone();
        if start.len() < 3 {
            continue;
        }
        let len = rng.gen_range(1..=14);
        let moves: Vec<Move> = (0..len).map(|_| Move::ALL[rng.gen_range(0..3)]).collect();
        let path = RauzyPath::new(&start, MoveWord::new(moves)).map_err(|e| e.to_string())?;
        let Ok(path) = path.into_allowed() else { continue };
        let v = path_matrix(&path);
        ensure(v.det().abs() == BigInt::from(1), || format!("det {} on ({start})", v.det()))?;
        pa::check_never_winner_rows(&path, &v).map_err(|e| e.to_string())?;
        loops += 1;
    }

    // Determinism: independent computations serialize identically.
    let render = || -> Result<String, String> {
        let cert = certify(&fg::build_gamma(4).unwrap(), &tol9()).map_err(|e| e.to_string())?;
        let d = explore(&LabeledPermutation::central(6).unwrap(), true, DEFAULT_CAP).map_err(|e| e.to_string())?;
        let lower = pa::lc_lower_bound(&fg::build_gamma(3).unwrap(), LowerMode::Exact).map_err(|e| e.to_string())?;
        Ok(format!(
            "{}\n{}\n{}\n{}",
            serde_json::to_string(&cert).unwrap(),
            d.to_dot(),
            d.to_json(),
            serde_json::to_string(&lower).unwrap()
        ))
    };
    ensure(render()? == render()?, || "output differs between runs".into())?;
    Ok(format!("{} irreducible perms, 200 loops in {attempts} tries", irreducible.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("worked-example fidelity", criterion_1),
        ("n=3 component", criterion_2),
        ("f_g family closed forms", criterion_3),
        ("f_g translation length bounds", criterion_4),
        ("central component structure", criterion_5),
        ("Penner family matrices", criterion_6),
        ("h_g sequence", criterion_7),
        ("homology power identity", criterion_8),
        ("property suites", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
