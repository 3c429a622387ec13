use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;

use rauzy_core::diagram::{explore, RauzyPath, DEFAULT_CAP};
use rauzy_core::fg;
use rauzy_core::induction::{apply_flip, Move, MoveWord};
use rauzy_core::linalg::{path_matrix, spectral_radius};
use rauzy_core::pa::{self, certify, Verdict};
use rauzy_core::penner;
use rauzy_core::perm::{Alphabet, LabeledPermutation, Letter};
use rauzy_core::rational::ratio;
use rauzy_core::surface::GluedSurface;

fn perm(bottom: &[usize]) -> LabeledPermutation {
    let n = bottom.len();
    LabeledPermutation::new(
        Arc::new(Alphabet::canonical(n)),
        (0..n).map(Letter::from_index).collect(),
        bottom.iter().map(|&i| Letter::from_index(i)).collect(),
    )
    .unwrap()
}

fn irreducible_perm() -> impl Strategy<Value = LabeledPermutation> {
    (3usize..=7)
        .prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(|b| perm(&b))
        .prop_filter("irreducible", |p| p.is_irreducible())
}

fn move_word() -> impl Strategy<Value = Vec<Move>> {
    prop::collection::vec(prop::sample::select(Move::ALL.to_vec()), 0..16)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn moves_keep_irreducibility(p in irreducible_perm(), word in move_word()) {
        let path = RauzyPath::new(&p, MoveWord::new(word)).unwrap();
        for e in path.edges() {
            prop_assert!(e.target.is_irreducible());
            prop_assert_eq!(apply_flip(&apply_flip(&e.target).target).target, e.target.clone());
        }
    }

    #[test]
    fn allowed_paths_are_unimodular(p in irreducible_perm(), word in move_word()) {
        let Ok(path) = RauzyPath::new(&p, MoveWord::new(word)).unwrap().into_allowed() else {
            return Ok(());
        };
        let v = path_matrix(&path);
        prop_assert!(v.is_nonnegative());
        prop_assert_eq!(v.det().abs(), BigInt::one());
        prop_assert!(pa::check_never_winner_rows(&path, &v).is_ok());
    }
}

fn all_bottoms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for shorter in all_bottoms(n - 1) {
        for pos in 0..n {
            let mut b = shorter.clone();
            b.insert(pos, n - 1);
            out.push(b);
        }
    }
    out
}

#[test]
fn every_side_is_homologically_nontrivial() {
    // A closed side is a loop on the glued surface; none of them bounds for n <= 6.
    let mut checked = 0;
    for n in 2..=6 {
        for b in all_bottoms(n) {
            let p = perm(&b);
            if !p.is_irreducible() {
                continue;
            }
            let s = GluedSurface::glue(&p);
            for x in p.alphabet().letters().filter(|&x| s.side_closed(x)) {
                assert!(s.side_homology_nonzero(x).unwrap(), "({p}) side {}", p.name(x));
            }
            checked += 1;
        }
    }
    assert!(checked > 500);
}

#[test]
fn central_genus_and_component_size() {
    for n in 3..=9 {
        let c = LabeledPermutation::central(n).unwrap();
        assert_eq!(GluedSurface::glue(&c).genus(), n / 2);
        let d = explore(&c, false, DEFAULT_CAP).unwrap();
        assert_eq!(d.len(), (1 << (n - 1)) - 1);
    }
}

#[test]
fn brackets_of_powers_are_consistent() {
    let tol = ratio(1, 1_000_000_000);
    for g in 2..=5 {
        let v = path_matrix(&fg::build_gamma(g).unwrap());
        let b = spectral_radius(&v, &tol).unwrap();
        for k in [2u64, 3] {
            let bk = spectral_radius(&v.pow(k), &tol).unwrap();
            let (lo, hi) = b.pow(k as i32);
            assert!(bk.low <= hi && lo <= bk.high, "g={g} k={k}");
        }
    }
}

#[test]
fn penner_radius_increases_with_n() {
    let tol = ratio(1, 1_000_000_000);
    let mut prev: Option<BigRational> = None;
    for n in 1..=20 {
        let m = penner::build(3, n).unwrap().m;
        let b = spectral_radius(&m, &tol).unwrap();
        if let Some(high) = prev {
            assert!(b.low > high, "n={n}");
        }
        prev = Some(b.high);
    }
}

#[test]
fn loop_matrices_multiply_under_concatenation() {
    let start = LabeledPermutation::central(5).unwrap();
    let words = ["t^4", "b^4", "tbtb", "btbbt", "tb^3t^3b"];
    let mut compared = 0;
    for w1 in words {
        for w2 in words {
            let m1 = MoveWord::parse(w1, Default::default()).unwrap();
            let m2 = MoveWord::parse(w2, Default::default()).unwrap();
            let p1 = RauzyPath::new(&start, m1.clone()).unwrap();
            let p2 = RauzyPath::new(&start, m2.clone()).unwrap();
            if p1.end() != &start || p2.end() != &start {
                continue;
            }
            let both: Vec<Move> = m1.moves().iter().chain(m2.moves()).copied().collect();
            let joined = RauzyPath::new(&start, MoveWord::new(both)).unwrap().into_allowed().unwrap();
            let v1 = path_matrix(&p1.into_allowed().unwrap());
            let v2 = path_matrix(&p2.into_allowed().unwrap());
            assert_eq!(path_matrix(&joined), v1.mul_ref(&v2), "{w1} then {w2}");
            compared += 1;
        }
    }
    assert!(compared >= 4);
}

#[test]
fn lower_bound_never_exceeds_upper() {
    let tol = ratio(1, 1_000_000);
    let mut compared = 0;
    let seeds = [LabeledPermutation::central(6).unwrap(), LabeledPermutation::fg_start(3).unwrap()];
    for seed in seeds {
        let d = explore(&seed, true, DEFAULT_CAP).unwrap();
        for word in ["tb", "ttb", "tbb", "tbtb", "ttbb", "tbf", "ftb", "tbbtf", "ftbbb"] {
            for v in d.vertices().iter().take(12) {
                let w = MoveWord::parse(word, Default::default()).unwrap();
                let Ok(path) = RauzyPath::new(v, w).unwrap().into_allowed() else { continue };
                let c = certify(&path, &tol).unwrap();
                if c.verdict != Verdict::PseudoAnosov {
                    continue;
                }
                if let (Some(u), Some(l)) = (&c.lc_upper, c.lc_lower()) {
                    assert!(l.bound <= u.bound && l.bound.is_positive(), "({v}) {word}");
                    compared += 1;
                }
            }
        }
    }
    assert!(compared > 0);
}
