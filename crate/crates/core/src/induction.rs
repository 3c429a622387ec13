//! Top and bottom Rauzy-Veech moves, the flip move, and move words.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::IntMatrix;
use crate::perm::{LabeledPermutation, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InductionError {
    #[error("invalid move `{kind}` on reducible permutation ({perm})")]
    Reducible { kind: Move, perm: String },
    #[error("bad move word `{word}`: {reason}")]
    BadWord { word: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Move {
    Top,
    Bottom,
    Flip,
}

impl Move {
    pub const ALL: [Move; 3] = [Move::Top, Move::Bottom, Move::Flip];

    pub fn symbol(self) -> char {
        match self {
            Move::Top => 't',
            Move::Bottom => 'b',
            Move::Flip => 'f',
        }
    }

    pub fn from_symbol(c: char) -> Option<Move> {
        match c {
            't' => Some(Move::Top),
            'b' => Some(Move::Bottom),
            'f' => Some(Move::Flip),
            _ => None,
        }
    }

    pub fn apply(self, p: &LabeledPermutation) -> Result<EdgeRecord, InductionError> {
        match self {
            Move::Top => apply_top(p),
            Move::Bottom => apply_bottom(p),
            Move::Flip => Ok(apply_flip(p)),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// One edge of the (augmented) Rauzy diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRecord {
    pub kind: Move,
    pub source: LabeledPermutation,
    pub target: LabeledPermutation,
    /// `None` exactly for flips.
    pub winner: Option<Letter>,
    pub loser: Option<Letter>,
}

impl EdgeRecord {
    pub fn winner_loser(&self) -> Option<(Letter, Letter)> {
        self.winner.zip(self.loser)
    }

    /// `Id + E(winner, loser)` for Rauzy moves, `Id` for flips.
    pub fn matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::identity(self.source.len());
        if let Some((w, l)) = self.winner_loser() {
            m.add_to(w.index(), l.index(), 1);
        }
        m
    }
}

impl Serialize for EdgeRecord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            kind: Move,
            source: &'a LabeledPermutation,
            target: &'a LabeledPermutation,
            winner: Option<&'a str>,
            loser: Option<&'a str>,
        }
        Repr {
            kind: self.kind,
            source: &self.source,
            target: &self.target,
            winner: self.winner.map(|l| self.source.name(l)),
            loser: self.loser.map(|l| self.source.name(l)),
        }
        .serialize(serializer)
    }
}

fn check_irreducible(kind: Move, p: &LabeledPermutation) -> Result<(), InductionError> {
    if p.is_irreducible() {
        Ok(())
    } else {
        Err(InductionError::Reducible { kind, perm: p.to_string() })
    }
}

/// Removes `moved` from `row` and reinserts it immediately right of `anchor`.
fn reinsert_after(row: &[Letter], moved: Letter, anchor: Letter) -> Vec<Letter> {
    let mut out: Vec<Letter> = row.iter().copied().filter(|&l| l != moved).collect();
    let at = out.iter().position(|&l| l == anchor).expect("anchor letter present") + 1;
    out.insert(at, moved);
    out
}

/// Top move: the last top letter wins, the last bottom letter moves right of it.
pub fn apply_top(p: &LabeledPermutation) -> Result<EdgeRecord, InductionError> {
    check_irreducible(Move::Top, p)?;
    let (winner, loser) = (p.top_last(), p.bottom_last());
    let bottom = reinsert_after(p.bottom(), loser, winner);
    Ok(EdgeRecord {
        kind: Move::Top,
        source: p.clone(),
        target: p.with_rows(p.top().to_vec(), bottom),
        winner: Some(winner),
        loser: Some(loser),
    })
}

/// Bottom move: the last bottom letter wins, the last top letter moves right of it.
pub fn apply_bottom(p: &LabeledPermutation) -> Result<EdgeRecord, InductionError> {
    check_irreducible(Move::Bottom, p)?;
    let (winner, loser) = (p.bottom_last(), p.top_last());
    let top = reinsert_after(p.top(), loser, winner);
    Ok(EdgeRecord {
        kind: Move::Bottom,
        source: p.clone(),
        target: p.with_rows(top, p.bottom().to_vec()),
        winner: Some(winner),
        loser: Some(loser),
    })
}

/// Reverse both rows and swap them.
pub fn apply_flip(p: &LabeledPermutation) -> EdgeRecord {
    let top = p.bottom().iter().rev().copied().collect();
    let bottom = p.top().iter().rev().copied().collect();
    EdgeRecord { kind: Move::Flip, source: p.clone(), target: p.with_rows(top, bottom), winner: None, loser: None }
}

pub fn edge_matrix(e: &EdgeRecord) -> IntMatrix {
    e.matrix()
}

/// How a written move word maps onto execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reading {
    /// Right to left, like function composition: `ftb` runs `b`, then `t`, then `f`.
    #[default]
    Rtl,
    /// Left to right.
    Ltr,
}

impl std::str::FromStr for Reading {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rtl" | "paper" => Ok(Reading::Rtl),
            "ltr" => Ok(Reading::Ltr),
            other => Err(format!("unknown reading `{other}` (expected rtl or ltr)")),
        }
    }
}

/// A move word, kept in execution order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct MoveWord {
    moves: Vec<Move>,
}

impl MoveWord {
    pub fn new(moves: Vec<Move>) -> MoveWord {
        MoveWord { moves }
    }

    /// Parses a word over `{t, b, f}`. Letters or parenthesised groups may
    /// carry an exponent `^k`; whitespace is ignored.
    pub fn parse(word: &str, reading: Reading) -> Result<MoveWord, InductionError> {
        let chars: Vec<char> = word.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let written = parse_seq(&chars, &mut pos, word)?;
        if pos != chars.len() {
            return Err(bad(word, format!("unexpected `{}`", chars[pos])));
        }
        let moves = match reading {
            Reading::Rtl => written.into_iter().rev().collect(),
            Reading::Ltr => written,
        };
        Ok(MoveWord { moves })
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Execution order as a plain string, e.g. `"bbtf"`.
    pub fn execution_string(&self) -> String {
        self.moves.iter().map(|m| m.symbol()).collect()
    }

    /// The word written in the given reading.
    pub fn written(&self, reading: Reading) -> String {
        match reading {
            Reading::Ltr => self.execution_string(),
            Reading::Rtl => self.moves.iter().rev().map(|m| m.symbol()).collect(),
        }
    }
}

impl From<Vec<Move>> for MoveWord {
    fn from(moves: Vec<Move>) -> Self {
        MoveWord { moves }
    }
}

fn bad(word: &str, reason: String) -> InductionError {
    InductionError::BadWord { word: word.to_string(), reason }
}

fn parse_seq(chars: &[char], pos: &mut usize, word: &str) -> Result<Vec<Move>, InductionError> {
    let mut out = Vec::new();
    while *pos < chars.len() {
        let c = chars[*pos];
        let item = if c == '(' {
            *pos += 1;
            let inner = parse_seq(chars, pos, word)?;
            if chars.get(*pos) != Some(&')') {
                return Err(bad(word, "unbalanced `(`".into()));
            }
            *pos += 1;
            inner
        } else if c == ')' {
            break;
        } else if let Some(m) = Move::from_symbol(c) {
            *pos += 1;
            vec![m]
        } else {
            return Err(bad(word, format!("unknown move `{c}`")));
        };
        let reps = if chars.get(*pos) == Some(&'^') {
            *pos += 1;
            let start = *pos;
            while *pos < chars.len() && chars[*pos].is_ascii_digit() {
                *pos += 1;
            }
            let digits: String = chars[start..*pos].iter().collect();
            digits.parse::<usize>().map_err(|_| bad(word, "exponent must be a number".into()))?
        } else {
            1
        };
        for _ in 0..reps {
            out.extend_from_slice(&item);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LabeledPermutation {
        LabeledPermutation::parse(s).unwrap()
    }

    #[test]
    fn worked_top_and_bottom_moves() {
        let e = apply_top(&p("A B C D / D C B A")).unwrap();
        assert_eq!(e.target, p("A B C D / D A C B"));
        assert_eq!(e.source.name(e.winner.unwrap()), "D");
        assert_eq!(e.source.name(e.loser.unwrap()), "A");
        let e = apply_bottom(&p("A B C D / D C B A")).unwrap();
        assert_eq!(e.target.to_string(), "A D B C / D C B A");
    }

    #[test]
    fn three_letter_moves() {
        assert_eq!(apply_top(&p("A B C / C B A")).unwrap().target.to_string(), "A B C / C A B");
        assert_eq!(apply_bottom(&p("A B C / C B A")).unwrap().target.to_string(), "A C B / C B A");
    }

    #[test]
    fn reducible_is_rejected() {
        assert!(matches!(apply_top(&p("A B / A B")), Err(InductionError::Reducible { .. })));
        assert!(matches!(apply_bottom(&p("A B / A B")), Err(InductionError::Reducible { .. })));
    }

    #[test]
    fn bottom_power_returns_to_fg_start() {
        for g in 2..=8 {
            let start = LabeledPermutation::fg_start(g).unwrap();
            let mut cur = start.clone();
            for _ in 0..g {
                cur = apply_bottom(&cur).unwrap().target;
            }
            assert_eq!(cur, start);
        }
    }

    #[test]
    fn flip_examples() {
        assert_eq!(apply_flip(&p("A C B / B A C")).target.to_string(), "C A B / B C A");
        assert_eq!(apply_flip(&p("A B C / C A B")).target.to_string(), "B A C / C B A");
        let q = p("A B C D / D A C B");
        assert_eq!(apply_flip(&apply_flip(&q).target).target, q);
    }

    #[test]
    fn edge_matrices() {
        let e = apply_top(&p("A B C D / D C B A")).unwrap();
        let mut want = IntMatrix::identity(4);
        want.add_to(3, 0, 1);
        assert_eq!(e.matrix(), want);
        assert_eq!(apply_flip(&p("A B / B A")).matrix(), IntMatrix::identity(2));

        let s = LabeledPermutation::fg_start(2).unwrap();
        let e = apply_bottom(&s).unwrap();
        assert_eq!((s.name(e.winner.unwrap()), s.name(e.loser.unwrap())), ("a2", "a4"));
        let mut want = IntMatrix::identity(4);
        want.add_to(1, 3, 1);
        assert_eq!(edge_matrix(&e), want);
    }

    #[test]
    fn words() {
        let w = MoveWord::parse("ftb^3", Reading::Rtl).unwrap();
        assert_eq!(w.execution_string(), "bbbtf");
        assert_eq!(w.written(Reading::Rtl), "ftbbb");
        let w = MoveWord::parse("ftb^3", Reading::Ltr).unwrap();
        assert_eq!(w.execution_string(), "ftbbb");
        assert_eq!(MoveWord::parse("(tb)^2 f", Reading::Ltr).unwrap().execution_string(), "tbtbf");
        assert!(MoveWord::parse("", Reading::Rtl).unwrap().is_empty());
        assert!(MoveWord::parse("tx", Reading::Rtl).is_err());
        assert!(MoveWord::parse("(tb", Reading::Rtl).is_err());
        assert!(MoveWord::parse("t^", Reading::Rtl).is_err());
    }
}
