//! The family `f_g` given by the loop `γ_g = f t b^g`, and structural checks
//! on the component of the central permutation.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::diagram::{explore, injectivity_check, AllowedPath, DiagramError, RauzyDiagram, RauzyPath};
use crate::induction::{apply_flip, apply_top, Move, MoveWord};
use crate::linalg::{path_matrix, relabel_matrix, BoolMatrix, IntMatrix};
use crate::pa::{self, certify, lower_bound_for, LowerMode, PACertificate, PaError};
use crate::perm::{Alphabet, LabeledPermutation, Letter, PermError};
use crate::rational;
use crate::surface::GluedSurface;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FgError {
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(usize),
    #[error("central permutation needs n >= 3, got {0}")]
    TooFewLetters(usize),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Pa(#[from] PaError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Check {
        Check { name: name.to_string(), passed, detail: detail.into() }
    }
}

/// Letters of the canonical alphabet from 1-based indices.
fn letters(idx: impl IntoIterator<Item = usize>) -> Vec<Letter> {
    idx.into_iter().map(|i| Letter::from_index(i - 1)).collect()
}

fn canonical(n: usize, top: Vec<Letter>, bottom: Vec<Letter>) -> LabeledPermutation {
    LabeledPermutation::new(Arc::new(Alphabet::canonical(n)), top, bottom).expect("closed forms are valid permutations")
}

/// `γ_g`: from the `f_g` start, `g` bottom moves, one top move, one flip.
pub fn build_gamma(g: usize) -> Result<AllowedPath, FgError> {
    if g < 2 {
        return Err(FgError::GenusTooSmall(g));
    }
    let start = LabeledPermutation::fg_start(g)?;
    let mut moves = vec![Move::Bottom; g];
    moves.extend([Move::Top, Move::Flip]);
    Ok(RauzyPath::new(&start, MoveWord::new(moves))?.into_allowed()?)
}

/// `b^k` applied to the start, as a closed form (`k ≤ g`).
pub fn closed_form_bottom_power(g: usize, k: usize) -> LabeledPermutation {
    let start = LabeledPermutation::fg_start(g).expect("g >= 2");
    let n = 2 * g;
    let mut top: Vec<usize> = (1..=g).collect();
    top.extend(n - k + 1..=n);
    top.extend(g + 1..=n - k);
    canonical(n, letters(top), start.bottom().to_vec())
}

/// `t b^g` applied to the start, as a closed form.
pub fn closed_form_after_top(g: usize) -> LabeledPermutation {
    let n = 2 * g;
    let mut bottom = vec![n];
    bottom.extend((1..=g).rev());
    bottom.extend((g + 1..n).rev());
    canonical(n, letters(1..=n), letters(bottom))
}

/// The endpoint `f t b^g` of `γ_g`, as a closed form.
pub fn closed_form_end(g: usize) -> LabeledPermutation {
    let n = 2 * g;
    let mut top: Vec<usize> = (g + 1..n).collect();
    top.extend(1..=g);
    top.push(n);
    canonical(n, letters(top), letters((1..=n).rev()))
}

/// Compares every intermediate vertex of `γ_g` against its closed form.
pub fn intermediate_check(g: usize) -> Result<bool, FgError> {
    let path = build_gamma(g)?;
    let edges = path.edges();
    let mut ok = true;
    for k in 1..=g {
        ok &= edges[k - 1].target == closed_form_bottom_power(g, k);
    }
    ok &= edges[g - 1].target == *path.start();
    ok &= edges[g].target == closed_form_after_top(g);
    ok &= edges[g + 1].target == closed_form_end(g);
    Ok(ok)
}

/// `V_{γ_g}` assembled from its block description.
pub fn block_matrix(g: usize) -> IntMatrix {
    let n = 2 * g;
    let mut m = IntMatrix::zeros(n);
    // First g rows: [A | Id + B | B_{g×1}]; A has its last row all ones.
    for j in 0..g - 1 {
        m.set(g - 1, j, 1);
    }
    for i in 0..g {
        m.set(i, g - 1 + i, 1);
    }
    m.add_to(g - 1, n - 2, 1);
    m.set(g - 1, n - 1, 1);
    // Next g − 1 rows: [Id | 0 | 0].
    for i in 0..g - 1 {
        m.set(g + i, i, 1);
    }
    // Last row: [0 | B_{1×g} | 1].
    m.set(n - 1, n - 2, 1);
    m.set(n - 1, n - 1, 1);
    m
}

/// Winner-loser pairs of `γ_g` as canonical 1-based indices.
pub fn expected_winner_losers(g: usize) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (g + 1..=2 * g).rev().map(|l| (g, l)).collect();
    out.push((2 * g, g));
    out
}

/// `a_{2g−1}, a_{g−1}, a_{2g−2}, …, a_g`, the displayed iterates.
pub fn expected_trajectory(g: usize) -> Vec<String> {
    let mut out = vec![format!("a{}", 2 * g - 1)];
    for k in 1..=2 * g - 2 {
        let i = if k % 2 == 1 { g - (k + 1) / 2 } else { 2 * g - (k + 2) / 2 };
        out.push(format!("a{i}"));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct FgReport {
    pub g: usize,
    pub word: String,
    pub execution_order: String,
    pub start: String,
    pub end: String,
    pub matrix: IntMatrix,
    pub block_form_matches: bool,
    pub intermediate_forms_match: bool,
    pub certificate: PACertificate,
    #[serde(serialize_with = "rational::serialize")]
    pub expected_upper: BigRational,
    #[serde(serialize_with = "rational::serialize")]
    pub expected_lower: BigRational,
    pub checks: Vec<Check>,
}

impl FgReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// Certificate for `f_g` together with per-item checks of its closed forms and bounds.
pub fn fg_report(g: usize, tol: &BigRational) -> Result<FgReport, FgError> {
    let path = build_gamma(g)?;
    let v = path_matrix(&path);
    let block = block_matrix(g);
    let cert = certify(&path, tol)?;
    let g64 = g as u64;
    let expected_upper = rational::reciprocal(g64 - 1);
    let expected_lower = rational::reciprocal(16 * g64 - 12);
    let block_form_matches = v == block;
    let intermediate_forms_match = intermediate_check(g)?;
    let surface = GluedSurface::glue(path.start());

    let mut checks = vec![
        Check::new("allowed", path.path().is_allowed(), ""),
        Check::new("b^g returns to start", path.edges()[g - 1].target == *path.start(), ""),
        Check::new("intermediate closed forms", intermediate_forms_match, ""),
        Check::new("block form", block_form_matches, ""),
        Check::new("row g+1 is e_1", block.unit_row(g) == Some(0), ""),
        Check::new(
            "surface",
            surface.vertex_count() == 1 && surface.genus() == g,
            format!("vertices {}, genus {}", surface.vertex_count(), surface.genus()),
        ),
    ];

    let wl: Vec<(usize, usize)> =
        path.edges().iter().filter_map(|e| e.winner_loser()).map(|(w, l)| (w.index() + 1, l.index() + 1)).collect();
    checks.push(Check::new("winner-loser sequence", wl == expected_winner_losers(g), format!("{wl:?}")));

    checks.push(Check::new("primitive", cert.primitive, format!("exponent {:?}", cert.positive_power)));
    let exact_ok = cert.positive_power.is_some_and(|p| p <= 4 * g64 - 4);
    checks.push(Check::new("positive power <= 4g-4", exact_ok, format!("{:?}", cert.positive_power)));

    let sqrt2_ok = cert.lambda.as_ref().is_some_and(|b| {
        b.low.is_positive() && &b.low * &b.low >= BigRational::from_integer(BigInt::from(2))
    });
    let lambda_detail = cert.lambda.as_ref().map(|b| rational::to_decimal(&b.low, 12)).unwrap_or_default();
    checks.push(Check::new("lambda >= sqrt 2", sqrt2_ok, lambda_detail));

    match &cert.lc_upper {
        Some(u) => {
            checks.push(Check::new("upper bound 1/(g-1)", u.bound == expected_upper, u.bound.to_string()));
            checks.push(Check::new("orbit length 2g-2", u.orbit.steps == 2 * g64 - 2, u.orbit.steps.to_string()));
            checks.push(Check::new(
                "orbit trajectory",
                u.orbit.trajectory == expected_trajectory(g),
                u.orbit.trajectory.join(" -> "),
            ));
        }
        None => checks.push(Check::new("upper bound 1/(g-1)", false, "no admissible orbit")),
    }
    match &cert.lc_lower_diagonal_cap {
        Some(l) => checks.push(Check::new("lower bound 1/(16g-12)", l.bound == expected_lower, l.bound.to_string())),
        None => checks.push(Check::new("lower bound 1/(16g-12)", false, "diagonal cap mode unavailable")),
    }
    if let (Some(u), Some(l)) = (&cert.lc_upper, &cert.lc_lower_exact) {
        checks.push(Check::new("lower <= upper", l.bound <= u.bound, ""));
    }

    Ok(FgReport {
        g,
        word: format!("ftb^{g}"),
        execution_order: path.word().execution_string(),
        start: path.start().to_string(),
        end: path.end().to_string(),
        matrix: v,
        block_form_matches,
        intermediate_forms_match,
        certificate: cert,
        expected_upper,
        expected_lower,
        checks,
    })
}

/// `t^m` applied to `central(n)`, as a closed form.
pub fn central_loop_closed_form(n: usize, m: usize) -> LabeledPermutation {
    let mut bottom = vec![n];
    bottom.extend((1..=m).rev());
    bottom.extend((m + 1..n).rev());
    canonical(n, letters(1..=n), letters(bottom))
}

fn top_power(p: &LabeledPermutation, m: usize) -> LabeledPermutation {
    let mut cur = p.clone();
    for _ in 0..m {
        cur = apply_top(&cur).expect("irreducible").target;
    }
    cur
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleOptions {
    /// Sampled paths per family.
    pub samples: usize,
    /// Longest t/b walk; `None` means `2n`.
    pub max_len: Option<usize>,
    pub seed: u64,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions { samples: 200, max_len: None, seed: 0x5eed }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SampledPath {
    pub family: String,
    pub start: String,
    pub execution_order: String,
    pub primitive: bool,
    pub diagonal_positive: bool,
    pub power_positive: bool,
    pub lower_bound: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CentralReport {
    pub n: usize,
    pub genus: usize,
    pub vertices: usize,
    pub exponent: u64,
    #[serde(serialize_with = "rational::serialize")]
    pub expected_lower: BigRational,
    pub checks: Vec<Check>,
    pub samples: Vec<SampledPath>,
}

impl CentralReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Shortest t/b distance from every vertex to `target`.
fn distances_to(d: &RauzyDiagram, target: usize) -> Vec<usize> {
    let mut rev: HashMap<usize, Vec<usize>> = HashMap::new();
    for e in d.edges().iter().filter(|e| e.kind != Move::Flip) {
        rev.entry(e.dst).or_default().push(e.src);
    }
    let mut dist = vec![usize::MAX; d.len()];
    dist[target] = 0;
    let mut queue = VecDeque::from([target]);
    while let Some(v) = queue.pop_front() {
        for &u in rev.get(&v).into_iter().flatten() {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Random t/b walk from `from` ending at `to`, at least one step long and at most `max_len`.
fn sample_walk(
    d: &RauzyDiagram,
    from: usize,
    to: usize,
    dist: &[usize],
    max_len: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Move>> {
    let mut cur = from;
    let mut moves = Vec::new();
    loop {
        let remaining = max_len - moves.len();
        if cur == to && !moves.is_empty() && (remaining == 0 || rng.gen_bool(0.3)) {
            return Some(moves);
        }
        if remaining == 0 {
            return None;
        }
        let options: Vec<(Move, usize)> = d
            .out_edges(cur)
            .filter(|e| e.kind != Move::Flip && dist[e.dst] < remaining)
            .map(|e| (e.kind, e.dst))
            .collect();
        let &(m, next) = options.choose(rng)?;
        moves.push(m);
        cur = next;
    }
}

/// Structural checks on the component of `central(n)`.
pub fn central_checks(n: usize, cap: usize, opts: &SampleOptions) -> Result<CentralReport, FgError> {
    if n < 3 {
        return Err(FgError::TooFewLetters(n));
    }
    let central = LabeledPermutation::central(n)?;
    let d = explore(&central, false, cap)?;
    let genus = n / 2;
    let exponent = 4 * genus as u64 + 2;
    let expected_lower = rational::reciprocal(16 * genus as u64 - 10);
    let mut checks = vec![Check::new("injectivity", injectivity_check(&d), format!("{} vertices", d.len()))];

    let surface = GluedSurface::glue(&central);
    checks.push(Check::new("genus", surface.genus() == genus, surface.genus().to_string()));

    let loop_ok = (1..n).all(|m| top_power(&central, m) == central_loop_closed_form(n, m))
        && top_power(&central, n - 1) == central;
    checks.push(Check::new("central loop closed forms", loop_ok, ""));

    let mut flip_ok = true;
    let mut corner_ok = true;
    for m in 1..n {
        let tm = top_power(&central, m);
        let flipped = apply_flip(&tm).target;
        let partner = top_power(&central, n - m - 1);
        flip_ok &= d.unlabeled_matches(&flipped) == d.index_of(&partner).into_iter().collect::<Vec<_>>();

        let end = apply_flip(&partner).target;
        let p = relabel_matrix(&tm, &end).map_err(PaError::from)?;
        corner_ok &= p.get(n - 1, n - 1) == &BigInt::from(1);
    }
    checks.push(Check::new("flip partner is t^(n-m-1)", flip_ok, ""));
    checks.push(Check::new("(n,n) entry of flip relabeling", corner_ok, ""));

    let samples = sample_paths(n, &d, opts)?;
    let mut sample_ok = true;
    for s in samples.iter().filter(|s| s.primitive) {
        sample_ok &= s.diagonal_positive && s.power_positive;
        sample_ok &= s.lower_bound.as_deref() == Some(expected_lower.to_string().as_str());
    }
    let primitive_count = samples.iter().filter(|s| s.primitive).count();
    checks.push(Check::new(
        "sampled loops: diagonal, positive power, bound",
        sample_ok && primitive_count > 0,
        format!("{primitive_count} primitive of {} sampled", samples.len()),
    ));

    Ok(CentralReport { n, genus, vertices: d.len(), exponent, expected_lower, checks, samples })
}

fn sample_paths(n: usize, d: &RauzyDiagram, opts: &SampleOptions) -> Result<Vec<SampledPath>, FgError> {
    let central = &d.vertices()[0];
    let genus = n / 2;
    let exponent = 4 * genus as u64 + 2;
    let max_len = opts.max_len.unwrap_or(2 * n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let vertex_of = |m: usize| d.index_of(&top_power(central, m)).expect("central loop lies in the component");
    let mut dist_cache: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut seen: HashSet<(usize, Vec<Move>)> = HashSet::new();
    let mut out = Vec::new();

    let mut attempts = 0;
    while out.len() < 2 * opts.samples && attempts < 50 * opts.samples.max(1) {
        attempts += 1;
        // Alternate between closed loops and loops closed up by a final flip.
        let flip_family = out.len() % 2 == 1;
        let m = rng.gen_range(1..n);
        let from = vertex_of(m);
        let to = if flip_family { vertex_of(n - m - 1) } else { from };
        let dist = dist_cache.entry(to).or_insert_with(|| distances_to(d, to));
        let walk = if flip_family && from == to && rng.gen_bool(0.25) {
            Some(Vec::new())
        } else {
            sample_walk(d, from, to, dist, max_len, &mut rng)
        };
        let Some(mut moves) = walk else { continue };
        if flip_family {
            moves.push(Move::Flip);
        }
        if !seen.insert((from, moves.clone())) {
            continue;
        }
        let start = &d.vertices()[from];
        let path = RauzyPath::new(start, MoveWord::new(moves))?.into_allowed()?;
        let v = path_matrix(&path);
        pa::check_never_winner_rows(&path, &v)?;
        let lower = lower_bound_for(&v, genus, LowerMode::Exponent(exponent));
        out.push(SampledPath {
            family: if flip_family { "flip" } else { "closed" }.to_string(),
            start: start.to_string(),
            execution_order: path.word().execution_string(),
            primitive: crate::linalg::is_primitive(&v),
            diagonal_positive: v.has_positive_diagonal_entry(),
            power_positive: BoolMatrix::support(&v).pow(exponent).is_all_ones(),
            lower_bound: lower.map(|l| l.bound.to_string()),
        });
    }
    Ok(out)
}
