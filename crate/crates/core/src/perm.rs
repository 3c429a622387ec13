//! Labeled permutations: the pair of top and bottom side orders of a 2n-gon.
//!
//! A [`LabeledPermutation`] stores its two rows as sequences of [`Letter`]s,
//! i.e. row `top[k]` is the letter sitting at top position `k + 1`. Letters
//! are indices into a shared [`Alphabet`] whose order is the row/column order
//! of every matrix built from the permutation.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("a permutation needs at least 2 letters, got {0}")]
    TooShort(usize),
    #[error("row length mismatch: top has {top} letters, bottom has {bottom}")]
    RowLengthMismatch { top: usize, bottom: usize },
    #[error("duplicate letter `{letter}` in the {row} row")]
    DuplicateLetter { row: &'static str, letter: String },
    #[error("letter `{0}` does not appear in both rows")]
    LetterSetMismatch(String),
    #[error("malformed permutation literal: {0}")]
    Malformed(String),
    #[error("alphabets differ: {0}")]
    AlphabetMismatch(String),
    #[error("not a bijection of 1..{0}")]
    NotABijection(usize),
}

/// A letter, stored as its index in the alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub u16);

impl Letter {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Letter {
        Letter(u16::try_from(i).expect("alphabet larger than u16::MAX"))
    }
}

/// Ordered set of letter names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new(names: Vec<String>) -> Result<Alphabet, PermError> {
        let mut seen = HashSet::new();
        for name in &names {
            if name.is_empty() || name.contains('/') || name.chars().any(char::is_whitespace) {
                return Err(PermError::Malformed(format!("invalid letter name `{name}`")));
            }
            if !seen.insert(name.as_str()) {
                return Err(PermError::DuplicateLetter { row: "alphabet", letter: name.clone() });
            }
        }
        Ok(Alphabet { names })
    }

    /// `a1, a2, ..., an`.
    pub fn canonical(n: usize) -> Alphabet {
        Alphabet { names: (1..=n).map(|i| format!("a{i}")).collect() }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, letter: Letter) -> &str {
        &self.names[letter.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Option<Letter> {
        self.names.iter().position(|n| n == name).map(Letter::from_index)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.names.len()).map(Letter::from_index)
    }
}

/// The unlabeled permutation `pi = pi_b o pi_t^-1`, with 1-based images.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct UnlabeledPermutation {
    images: Vec<usize>,
}

impl UnlabeledPermutation {
    pub fn new(images: Vec<usize>) -> Result<UnlabeledPermutation, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v == 0 || v > n || std::mem::replace(&mut seen[v - 1], true) {
                return Err(PermError::NotABijection(n));
            }
        }
        Ok(UnlabeledPermutation { images })
    }

    /// Entry `i - 1` holds `pi(i)`.
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn inverse(&self) -> UnlabeledPermutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        UnlabeledPermutation { images: inv }
    }

    /// No proper prefix `{1..k}` is mapped onto itself.
    pub fn is_irreducible(&self) -> bool {
        let n = self.images.len();
        let mut max = 0;
        for (k, &v) in self.images.iter().enumerate().take(n.saturating_sub(1)) {
            max = max.max(v);
            if max == k + 1 {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for UnlabeledPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// The pair `(pi_t, pi_b)`, stored as the two display rows.
#[derive(Clone)]
pub struct LabeledPermutation {
    alphabet: Arc<Alphabet>,
    top: Vec<Letter>,
    bottom: Vec<Letter>,
}

impl LabeledPermutation {
    pub fn new(
        alphabet: Arc<Alphabet>,
        top: Vec<Letter>,
        bottom: Vec<Letter>,
    ) -> Result<LabeledPermutation, PermError> {
        let n = alphabet.len();
        if top.len() != bottom.len() {
            return Err(PermError::RowLengthMismatch { top: top.len(), bottom: bottom.len() });
        }
        if top.len() != n {
            return Err(PermError::Malformed(format!(
                "rows have {} letters but the alphabet has {n}",
                top.len()
            )));
        }
        if n < 2 {
            return Err(PermError::TooShort(n));
        }
        for (row, letters) in [("top", &top), ("bottom", &bottom)] {
            let mut seen = vec![false; n];
            for &l in letters.iter() {
                if l.index() >= n {
                    return Err(PermError::Malformed(format!("letter index {} out of range", l.0)));
                }
                if std::mem::replace(&mut seen[l.index()], true) {
                    return Err(PermError::DuplicateLetter {
                        row,
                        letter: alphabet.name(l).to_string(),
                    });
                }
            }
        }
        Ok(LabeledPermutation { alphabet, top, bottom })
    }

    /// Builds from two rows of names; the top row fixes the alphabet order.
    pub fn from_names<S: AsRef<str>>(top: &[S], bottom: &[S]) -> Result<LabeledPermutation, PermError> {
        let names: Vec<String> = top.iter().map(|s| s.as_ref().to_string()).collect();
        let alphabet = Arc::new(Alphabet::new(names)?);
        Self::from_names_in(alphabet, top, bottom)
    }

    /// Builds from two rows of names over a given alphabet.
    pub fn from_names_in<S: AsRef<str>>(
        alphabet: Arc<Alphabet>,
        top: &[S],
        bottom: &[S],
    ) -> Result<LabeledPermutation, PermError> {
        if top.len() != bottom.len() {
            return Err(PermError::RowLengthMismatch { top: top.len(), bottom: bottom.len() });
        }
        if top.len() < 2 {
            return Err(PermError::TooShort(top.len()));
        }
        let resolve = |row: &'static str, names: &[S]| -> Result<Vec<Letter>, PermError> {
            let mut seen = HashSet::new();
            names
                .iter()
                .map(|s| {
                    let s = s.as_ref();
                    if !seen.insert(s.to_string()) {
                        return Err(PermError::DuplicateLetter { row, letter: s.to_string() });
                    }
                    alphabet.lookup(s).ok_or_else(|| PermError::LetterSetMismatch(s.to_string()))
                })
                .collect()
        };
        let t = resolve("top", top)?;
        let b = resolve("bottom", bottom)?;
        if t.len() != alphabet.len() {
            let missing = alphabet
                .letters()
                .find(|l| !t.contains(l))
                .map(|l| alphabet.name(l).to_string())
                .unwrap_or_default();
            return Err(PermError::LetterSetMismatch(missing));
        }
        LabeledPermutation::new(alphabet, t, b)
    }

    /// Parses `"A B C / C B A"` or the same two rows on separate lines.
    pub fn parse(text: &str) -> Result<LabeledPermutation, PermError> {
        let (top, bottom) = split_rows(text)?;
        Self::from_names(&top, &bottom)
    }

    /// Parses over an existing alphabet (letters are looked up by name).
    pub fn parse_in(text: &str, alphabet: Arc<Alphabet>) -> Result<LabeledPermutation, PermError> {
        let (top, bottom) = split_rows(text)?;
        Self::from_names_in(alphabet, &top, &bottom)
    }

    /// Top `a1..an` over its reversal.
    pub fn central(n: usize) -> Result<LabeledPermutation, PermError> {
        if n < 2 {
            return Err(PermError::TooShort(n));
        }
        let top: Vec<Letter> = (0..n).map(Letter::from_index).collect();
        let bottom: Vec<Letter> = top.iter().rev().copied().collect();
        LabeledPermutation::new(Arc::new(Alphabet::canonical(n)), top, bottom)
    }

    /// The start of the `f_g` loop over `2g` letters: top `a1..a2g`, bottom
    /// `a2g, a(g-1), .., a1, a(2g-1), .., ag`.
    pub fn fg_start(g: usize) -> Result<LabeledPermutation, PermError> {
        if g < 2 {
            return Err(PermError::Malformed(format!("genus must be at least 2, got {g}")));
        }
        let n = 2 * g;
        // 1-based labels
        let mut bottom = vec![n];
        bottom.extend((1..g).rev());
        bottom.extend((g..n).rev());
        let top = (0..n).map(Letter::from_index).collect();
        let bottom = bottom.into_iter().map(|i| Letter::from_index(i - 1)).collect();
        LabeledPermutation::new(Arc::new(Alphabet::canonical(n)), top, bottom)
    }

    pub fn len(&self) -> usize {
        self.top.len()
    }

    pub fn is_empty(&self) -> bool {
        self.top.is_empty()
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn top(&self) -> &[Letter] {
        &self.top
    }

    pub fn bottom(&self) -> &[Letter] {
        &self.bottom
    }

    pub fn name(&self, letter: Letter) -> &str {
        self.alphabet.name(letter)
    }

    pub fn top_last(&self) -> Letter {
        self.top[self.top.len() - 1]
    }

    pub fn bottom_last(&self) -> Letter {
        self.bottom[self.bottom.len() - 1]
    }

    /// 0-based top positions indexed by letter (`pi_t - 1`).
    pub fn top_positions(&self) -> Vec<usize> {
        positions(&self.top)
    }

    /// 0-based bottom positions indexed by letter (`pi_b - 1`).
    pub fn bottom_positions(&self) -> Vec<usize> {
        positions(&self.bottom)
    }

    pub fn unlabeled(&self) -> UnlabeledPermutation {
        let bpos = self.bottom_positions();
        UnlabeledPermutation { images: self.top.iter().map(|l| bpos[l.index()] + 1).collect() }
    }

    pub fn is_irreducible(&self) -> bool {
        self.unlabeled().is_irreducible()
    }

    pub fn equal_unlabeled(&self, other: &LabeledPermutation) -> bool {
        self.len() == other.len() && self.unlabeled() == other.unlabeled()
    }

    pub fn same_alphabet(&self, other: &LabeledPermutation) -> bool {
        Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet
    }

    /// Rewrites this permutation over `alphabet`, matching letters by name.
    pub fn reindexed(&self, alphabet: &Arc<Alphabet>) -> Result<LabeledPermutation, PermError> {
        if self.same_alphabet_ptr(alphabet) {
            return Ok(self.clone());
        }
        if alphabet.len() != self.alphabet.len() {
            return Err(PermError::AlphabetMismatch(format!(
                "{} letters vs {}",
                self.alphabet.len(),
                alphabet.len()
            )));
        }
        let map: Vec<Letter> = self
            .alphabet
            .names()
            .iter()
            .map(|n| alphabet.lookup(n).ok_or_else(|| PermError::AlphabetMismatch(format!("`{n}` missing"))))
            .collect::<Result<_, _>>()?;
        let top = self.top.iter().map(|l| map[l.index()]).collect();
        let bottom = self.bottom.iter().map(|l| map[l.index()]).collect();
        LabeledPermutation::new(alphabet.clone(), top, bottom)
    }

    fn same_alphabet_ptr(&self, alphabet: &Arc<Alphabet>) -> bool {
        Arc::ptr_eq(&self.alphabet, alphabet) || *self.alphabet == **alphabet
    }

    pub(crate) fn with_rows(&self, top: Vec<Letter>, bottom: Vec<Letter>) -> LabeledPermutation {
        debug_assert_eq!(top.len(), self.top.len());
        debug_assert_eq!(bottom.len(), self.bottom.len());
        LabeledPermutation { alphabet: self.alphabet.clone(), top, bottom }
    }

    pub fn top_names(&self) -> Vec<&str> {
        self.top.iter().map(|&l| self.name(l)).collect()
    }

    pub fn bottom_names(&self) -> Vec<&str> {
        self.bottom.iter().map(|&l| self.name(l)).collect()
    }

    /// The two-row matrix display, columns aligned.
    pub fn two_row(&self) -> String {
        let width = |i: usize| self.name(self.top[i]).len().max(self.name(self.bottom[i]).len());
        let row = |letters: &[Letter]| {
            letters
                .iter()
                .enumerate()
                .map(|(i, &l)| format!("{:<w$}", self.name(l), w = width(i)))
                .collect::<Vec<_>>()
                .join(" ")
                .trim_end()
                .to_string()
        };
        format!("{}\n{}", row(&self.top), row(&self.bottom))
    }
}

fn positions(row: &[Letter]) -> Vec<usize> {
    let mut pos = vec![0; row.len()];
    for (i, l) in row.iter().enumerate() {
        pos[l.index()] = i;
    }
    pos
}

fn split_rows(text: &str) -> Result<(Vec<&str>, Vec<&str>), PermError> {
    let rows: Vec<&str> = if text.contains('/') {
        text.split('/').collect()
    } else {
        text.lines().filter(|l| !l.trim().is_empty()).collect()
    };
    if rows.len() != 2 {
        return Err(PermError::Malformed(format!("expected two rows, found {}", rows.len())));
    }
    let top: Vec<&str> = rows[0].split_whitespace().collect();
    let bottom: Vec<&str> = rows[1].split_whitespace().collect();
    if top.len() != bottom.len() {
        return Err(PermError::RowLengthMismatch { top: top.len(), bottom: bottom.len() });
    }
    Ok((top, bottom))
}

impl PartialEq for LabeledPermutation {
    fn eq(&self, other: &Self) -> bool {
        self.top == other.top && self.bottom == other.bottom && self.same_alphabet(other)
    }
}

impl Eq for LabeledPermutation {}

impl Hash for LabeledPermutation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.top.hash(state);
        self.bottom.hash(state);
    }
}

impl fmt::Display for LabeledPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} / {}", self.top_names().join(" "), self.bottom_names().join(" "))
    }
}

impl fmt::Debug for LabeledPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl std::str::FromStr for LabeledPermutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LabeledPermutation::parse(s)
    }
}

#[derive(Serialize, Deserialize)]
struct PermRepr {
    alphabet: Vec<String>,
    top: Vec<String>,
    bottom: Vec<String>,
}

impl Serialize for LabeledPermutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PermRepr {
            alphabet: self.alphabet.names().to_vec(),
            top: self.top_names().into_iter().map(String::from).collect(),
            bottom: self.bottom_names().into_iter().map(String::from).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LabeledPermutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PermRepr::deserialize(deserializer)?;
        let alphabet = Alphabet::new(repr.alphabet).map_err(serde::de::Error::custom)?;
        LabeledPermutation::from_names_in(Arc::new(alphabet), &repr.top, &repr.bottom)
            .map_err(serde::de::Error::custom)
    }
}
