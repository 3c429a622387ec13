//! Pseudo-Anosov certificates and the two curve-graph translation length bounds.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::diagram::AllowedPath;
use crate::linalg::{self, min_positive_power, path_matrix, wielandt_bound, BoolMatrix, IntMatrix, LinalgError, SpectralBracket};
use crate::perm::Letter;
use crate::rational;
use crate::surface::GluedSurface;

/// Additive constant in the lower bound: `6(2g − 2)` for genus `g`.
pub fn diagonal_extension_constant(genus: usize) -> u64 {
    6 * (2 * genus as u64).saturating_sub(2)
}

/// Distance bound between a curve and its image once the orbit endpoints meet the winner set.
pub const DISTANCE_STEP: u64 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PaError {
    #[error("genus {0} surface: curve-graph bounds need genus at least 2")]
    GenusTooSmall(usize),
    #[error("internal: row {letter} of the path matrix is not the unit vector at sigma({letter}) = {expected}")]
    NeverWinnerMismatch { letter: String, expected: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerMode {
    /// The least positive power of the path matrix.
    Exact,
    /// `2n`, valid when the path matrix has a positive diagonal entry.
    DiagonalCap,
    /// A caller-supplied exponent, checked to give a positive power.
    Exponent(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    PseudoAnosov,
    Inconclusive,
}

/// `σ(x) = start.π_t⁻¹(end.π_t(x))`, indexed by letter.
pub fn orbit_map(path: &AllowedPath) -> Vec<Letter> {
    let start = path.start();
    let end = path.end().reindexed(start.alphabet()).expect("path endpoints share an alphabet");
    let end_pos = end.top_positions();
    (0..start.len()).map(|x| start.top()[end_pos[x]]).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub winners: Vec<String>,
    pub orbit_map: Vec<(String, String)>,
    pub best_start: String,
    pub steps: u64,
    pub trajectory: Vec<String>,
    /// Sides not used as starting curves, with the reason.
    pub skipped: Vec<(String, String)>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UpperBound {
    #[serde(serialize_with = "rational::serialize")]
    pub bound: BigRational,
    pub orbit: OrbitReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    #[serde(serialize_with = "rational::serialize")]
    pub bound: BigRational,
    pub mode: LowerMode,
    pub exponent: u64,
    pub constant: u64,
}

/// Checks that every never-winner row of `v` is the unit vector at `σ(s)`.
pub fn check_never_winner_rows(path: &AllowedPath, v: &IntMatrix) -> Result<(), PaError> {
    let winners = path.winners();
    let sigma = orbit_map(path);
    let start = path.start();
    for s in start.alphabet().letters().filter(|s| !winners.contains(s)) {
        if v.unit_row(s.index()) != Some(sigma[s.index()].index()) {
            return Err(PaError::NeverWinnerMismatch {
                letter: start.name(s).to_string(),
                expected: start.name(sigma[s.index()]).to_string(),
            });
        }
    }
    Ok(())
}

enum Walk {
    HitsWinner(Vec<Letter>),
    Cycles(Vec<Letter>),
}

fn walk(s: Letter, sigma: &[Letter], winners: &BTreeSet<Letter>) -> Walk {
    let mut trajectory = vec![s];
    let mut visited = BTreeSet::from([s]);
    let mut cur = s;
    loop {
        let next = sigma[cur.index()];
        trajectory.push(next);
        if winners.contains(&next) {
            return Walk::HitsWinner(trajectory);
        }
        if !visited.insert(next) {
            return Walk::Cycles(trajectory);
        }
        cur = next;
    }
}

/// Upper bound `2/k` from the longest σ-orbit of a closed side that avoids the winners.
pub fn lc_upper_bound(path: &AllowedPath) -> Result<Option<UpperBound>, PaError> {
    let start = path.start();
    let surface = GluedSurface::glue(start);
    if surface.genus() < 2 {
        return Err(PaError::GenusTooSmall(surface.genus()));
    }
    check_never_winner_rows(path, &path_matrix(path))?;
    let winners = path.winners();
    let sigma = orbit_map(path);
    let name = |l: Letter| start.name(l).to_string();

    let mut skipped = Vec::new();
    let mut warnings = Vec::new();
    let mut best: Option<Vec<Letter>> = None;
    for s in start.alphabet().letters() {
        if winners.contains(&s) {
            skipped.push((name(s), "winner".to_string()));
            continue;
        }
        if !surface.side_closed(s) {
            skipped.push((name(s), "not a closed curve".to_string()));
            continue;
        }
        if !surface.side_homology_nonzero(s).unwrap_or(false) {
            skipped.push((name(s), "homologically trivial".to_string()));
            continue;
        }
        match walk(s, &sigma, &winners) {
            Walk::HitsWinner(t) => {
                if best.as_ref().is_none_or(|b| t.len() > b.len()) {
                    best = Some(t);
                }
            }
            Walk::Cycles(t) => {
                let names: Vec<String> = t.into_iter().map(name).collect();
                warnings.push(format!("orbit of {} cycles without meeting a winner: {}", name(s), names.join(" -> ")));
            }
        }
    }
    let Some(trajectory) = best else {
        return Ok(None);
    };
    let steps = trajectory.len() as u64 - 1;
    let orbit = OrbitReport {
        winners: winners.iter().map(|&w| name(w)).collect(),
        orbit_map: start.alphabet().letters().map(|x| (name(x), name(sigma[x.index()]))).collect(),
        best_start: name(trajectory[0]),
        steps,
        trajectory: trajectory.into_iter().map(name).collect(),
        skipped,
        warnings,
    };
    Ok(Some(UpperBound { bound: BigRational::new(BigInt::from(DISTANCE_STEP), BigInt::from(steps)), orbit }))
}

/// Lower bound `1/(6(2g − 2) + p)` with `p` chosen by `mode`; `None` when `mode` does not apply.
pub fn lc_lower_bound(path: &AllowedPath, mode: LowerMode) -> Result<Option<LowerBound>, PaError> {
    let surface = GluedSurface::glue(path.start());
    if surface.genus() < 2 {
        return Err(PaError::GenusTooSmall(surface.genus()));
    }
    Ok(lower_bound_for(&path_matrix(path), surface.genus(), mode))
}

pub fn lower_bound_for(v: &IntMatrix, genus: usize, mode: LowerMode) -> Option<LowerBound> {
    let n = v.order();
    let exact = min_positive_power(v, wielandt_bound(n))?;
    let exponent = match mode {
        LowerMode::Exact => exact,
        LowerMode::DiagonalCap => {
            if !v.has_positive_diagonal_entry() {
                return None;
            }
            2 * n as u64
        }
        LowerMode::Exponent(p) => {
            if p == 0 || !BoolMatrix::support(v).pow(p).is_all_ones() {
                return None;
            }
            p
        }
    };
    let constant = diagonal_extension_constant(genus);
    Some(LowerBound { bound: rational::reciprocal(constant + exponent), mode, exponent, constant })
}

#[derive(Debug, Clone, Serialize)]
pub struct PACertificate {
    pub start: String,
    pub end: String,
    pub execution_order: String,
    pub matrix: IntMatrix,
    pub verdict: Verdict,
    pub primitive: bool,
    pub positive_power: Option<u64>,
    pub lambda: Option<SpectralBracket>,
    pub teich_length: Option<(f64, f64)>,
    pub lc_upper: Option<UpperBound>,
    pub lc_lower_exact: Option<LowerBound>,
    pub lc_lower_diagonal_cap: Option<LowerBound>,
    pub genus: usize,
    pub vertex_count: usize,
    pub assumptions: Vec<String>,
    pub warnings: Vec<String>,
}

impl PACertificate {
    /// The best available lower bound (largest of the two modes).
    pub fn lc_lower(&self) -> Option<&LowerBound> {
        [&self.lc_lower_exact, &self.lc_lower_diagonal_cap].into_iter().flatten().max_by(|a, b| a.bound.cmp(&b.bound))
    }
}

pub fn certify(path: &AllowedPath, tol: &BigRational) -> Result<PACertificate, PaError> {
    let v = path_matrix(path);
    let surface = GluedSurface::glue(path.start());
    let genus = surface.genus();
    let mut warnings = surface.warnings();
    check_never_winner_rows(path, &v)?;

    let positive_power = min_positive_power(&v, wielandt_bound(v.order()));
    let primitive = positive_power.is_some();
    let lambda = if primitive {
        match linalg::spectral_radius(&v, tol) {
            Ok(b) => Some(b),
            Err(LinalgError::NotConverged(b)) => {
                warnings.push("spectral bracket did not reach the requested tolerance".to_string());
                Some(b)
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let teich_length = lambda.as_ref().map(SpectralBracket::log_bracket);

    let (lc_upper, lc_lower_exact, lc_lower_diagonal_cap) = if genus >= 2 {
        let upper = lc_upper_bound(path)?;
        if let Some(u) = &upper {
            warnings.extend(u.orbit.warnings.iter().cloned());
        }
        (upper, lower_bound_for(&v, genus, LowerMode::Exact), lower_bound_for(&v, genus, LowerMode::DiagonalCap))
    } else {
        warnings.push("translation length bounds skipped: genus below 2".to_string());
        (None, None, None)
    };
    if let (Some(u), Some(l)) = (&lc_upper, [&lc_lower_exact, &lc_lower_diagonal_cap].into_iter().flatten().next()) {
        if l.bound > u.bound {
            warnings.push("lower bound exceeds upper bound".to_string());
        }
    }

    Ok(PACertificate {
        start: path.start().to_string(),
        end: path.end().to_string(),
        execution_order: path.word().execution_string(),
        matrix: v,
        verdict: if primitive { Verdict::PseudoAnosov } else { Verdict::Inconclusive },
        primitive,
        positive_power,
        lambda,
        teich_length,
        lc_upper,
        lc_lower_exact,
        lc_lower_diagonal_cap,
        genus,
        vertex_count: surface.vertex_count(),
        assumptions: vec![
            "sides are essential curves when homologically nonzero".to_string(),
            format!("diagonal extension constant 6(2g-2) = {} taken as given", diagonal_extension_constant(genus)),
            format!("distance step constant {DISTANCE_STEP}"),
        ],
        warnings,
    })
}
