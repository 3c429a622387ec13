//! The closed surface obtained by gluing the sides of the 2n-gon.
//!
//! Corners are laid out with `n + 1` top corners `T0..Tn` and `n + 1` bottom
//! corners `B0..Bn`, where `B0 = T0` and `Bn = Tn` are the shared leftmost and
//! rightmost corners. The side at top position `i` runs from `T(i-1)` to `Ti`,
//! the side at bottom position `j` from `B(j-1)` to `Bj`; both copies of a
//! letter are oriented left to right and glued left-to-left, right-to-right.

use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::perm::{LabeledPermutation, Letter, PermError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("side `{0}` is not a closed curve on the glued surface")]
    SideNotClosed(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A polygon corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Corner {
    Top(usize),
    Bottom(usize),
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Corner::Top(i) => write!(f, "T{i}"),
            Corner::Bottom(i) => write!(f, "B{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideInfo {
    pub letter: Letter,
    pub name: String,
    /// Class of the left endpoint.
    pub tail: usize,
    /// Class of the right endpoint.
    pub head: usize,
    pub closed: bool,
    /// `None` when the side is not closed.
    pub homology_nonzero: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluedSurface {
    n: usize,
    /// Vertex class of each corner id (see [`GluedSurface::corner_id`]).
    corner_class: Vec<usize>,
    vertex_count: usize,
    euler_char: i64,
    genus: usize,
    sides: Vec<SideInfo>,
    boundary_relation: Vec<i64>,
    h1_rank: usize,
    irreducible: bool,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl GluedSurface {
    /// Glues `X(pi_t, pi_b)`. Reducible inputs are accepted; see [`GluedSurface::warnings`].
    pub fn glue(p: &LabeledPermutation) -> GluedSurface {
        let n = p.len();
        let top_pos = p.top_positions();
        let bottom_pos = p.bottom_positions();
        let mut uf = UnionFind::new(2 * n);
        for letter in p.alphabet().letters() {
            let i = top_pos[letter.index()] + 1;
            let j = bottom_pos[letter.index()] + 1;
            uf.union(Self::corner_id(n, Corner::Top(i - 1)), Self::corner_id(n, Corner::Bottom(j - 1)));
            uf.union(Self::corner_id(n, Corner::Top(i)), Self::corner_id(n, Corner::Bottom(j)));
        }
        // canonical class numbering by first corner id
        let mut class_of_root = vec![usize::MAX; 2 * n];
        let mut corner_class = vec![0; 2 * n];
        let mut vertex_count = 0;
        for (id, class) in corner_class.iter_mut().enumerate() {
            let r = uf.find(id);
            if class_of_root[r] == usize::MAX {
                class_of_root[r] = vertex_count;
                vertex_count += 1;
            }
            *class = class_of_root[r];
        }

        let euler_char = vertex_count as i64 - n as i64 + 1;
        debug_assert!(euler_char % 2 == 0 && euler_char <= 2);
        let genus = ((2 - euler_char) / 2) as usize;

        // abelianized boundary word: +1 per top traversal, -1 per bottom traversal
        let mut boundary_relation = vec![0i64; n];
        for &l in p.top() {
            boundary_relation[l.index()] += 1;
        }
        for &l in p.bottom() {
            boundary_relation[l.index()] -= 1;
        }

        let mut sides: Vec<SideInfo> = p
            .alphabet()
            .letters()
            .map(|letter| {
                let i = top_pos[letter.index()] + 1;
                let tail = corner_class[Self::corner_id(n, Corner::Top(i - 1))];
                let head = corner_class[Self::corner_id(n, Corner::Top(i))];
                SideInfo {
                    letter,
                    name: p.name(letter).to_string(),
                    tail,
                    head,
                    closed: tail == head,
                    homology_nonzero: None,
                }
            })
            .collect();

        let d1 = boundary_map(&sides, vertex_count);
        let rank_d1 = integer_rank(d1);
        let rank_d2 = usize::from(boundary_relation.iter().any(|&c| c != 0));
        let h1_rank = n - rank_d1 - rank_d2;

        for side in &mut sides {
            if side.closed {
                side.homology_nonzero = Some(!is_multiple_of(side.letter.index(), &boundary_relation));
            }
        }

        GluedSurface {
            n,
            corner_class,
            vertex_count,
            euler_char,
            genus,
            sides,
            boundary_relation,
            h1_rank,
            irreducible: p.is_irreducible(),
        }
    }

    /// Corner ids: `Top(i)` is `i`, interior `Bottom(j)` is `n + j`.
    pub fn corner_id(n: usize, corner: Corner) -> usize {
        match corner {
            Corner::Top(i) => i,
            Corner::Bottom(0) => 0,
            Corner::Bottom(j) if j == n => n,
            Corner::Bottom(j) => n + j,
        }
    }

    pub fn corner_class(&self, corner: Corner) -> usize {
        self.corner_class[Self::corner_id(self.n, corner)]
    }

    /// Partition of the 2n corners into vertex classes.
    pub fn corner_classes(&self) -> Vec<Vec<Corner>> {
        let mut classes = vec![Vec::new(); self.vertex_count];
        let corners = (0..=self.n).map(Corner::Top).chain((1..self.n).map(Corner::Bottom));
        for c in corners {
            classes[self.corner_class(c)].push(c);
        }
        classes
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn euler_char(&self) -> i64 {
        self.euler_char
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn sides(&self) -> &[SideInfo] {
        &self.sides
    }

    pub fn side(&self, letter: Letter) -> &SideInfo {
        &self.sides[letter.index()]
    }

    pub fn side_closed(&self, letter: Letter) -> bool {
        self.sides[letter.index()].closed
    }

    /// Whether a closed side carries a nonzero class in `H_1` of the cell structure.
    pub fn side_homology_nonzero(&self, letter: Letter) -> Result<bool, SurfaceError> {
        let side = &self.sides[letter.index()];
        side.homology_nonzero.ok_or_else(|| SurfaceError::SideNotClosed(side.name.clone()))
    }

    /// Rank of `H_1` computed from the cellular chain complex.
    pub fn h1_rank(&self) -> usize {
        self.h1_rank
    }

    /// Rank of the sides modulo the boundary relation (`H_1` relative to the vertices).
    pub fn relative_h1_rank(&self) -> usize {
        self.n - usize::from(self.boundary_relation.iter().any(|&c| c != 0))
    }

    pub fn is_irreducible(&self) -> bool {
        self.irreducible
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if !self.irreducible {
            w.push("permutation is reducible; gluing computed anyway".to_string());
        }
        if self.genus < 2 {
            w.push(format!("surface has genus {} (< 2)", self.genus));
        }
        w
    }
}

fn boundary_map(sides: &[SideInfo], vertices: usize) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; sides.len()]; vertices];
    for (col, s) in sides.iter().enumerate() {
        m[s.head][col] += 1;
        m[s.tail][col] -= 1;
    }
    m
}

/// Rank over Q by fraction-free elimination; entries stay tiny here.
fn integer_rank(mut m: Vec<Vec<i64>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| m[r][col] != 0) else { continue };
        m.swap(rank, pivot);
        for r in 0..rows {
            if r != rank && m[r][col] != 0 {
                let (a, b) = (m[rank][col], m[r][col]);
                for c in 0..cols {
                    m[r][c] = a * m[r][c] - b * m[rank][c];
                }
                let g = m[r].iter().fold(0i64, |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    m[r].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Is the unit vector `e_index` an integer multiple of `v`?
fn is_multiple_of(index: usize, v: &[i64]) -> bool {
    v.iter().enumerate().all(|(i, &c)| if i == index { c == 1 || c == -1 } else { c == 0 })
}

impl Serialize for GluedSurface {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct SideRepr {
            closed: bool,
            homology_nonzero: Option<bool>,
        }
        struct Sides<'a>(&'a [SideInfo]);
        impl Serialize for Sides<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for s in self.0 {
                    map.serialize_entry(
                        &s.name,
                        &SideRepr { closed: s.closed, homology_nonzero: s.homology_nonzero },
                    )?;
                }
                map.end()
            }
        }
        #[derive(Serialize)]
        struct Repr<'a> {
            vertex_count: usize,
            euler_char: i64,
            genus: usize,
            h1_rank: usize,
            sides: Sides<'a>,
            warnings: Vec<String>,
        }
        Repr {
            vertex_count: self.vertex_count,
            euler_char: self.euler_char,
            genus: self.genus,
            h1_rank: self.h1_rank,
            sides: Sides(&self.sides),
            warnings: self.warnings(),
        }
        .serialize(serializer)
    }
}

/// A stratum `H(k_1, ..., k_s)` of translation surfaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub zero_orders: Vec<usize>,
    pub genus: usize,
    /// Set for the torus boundary cases.
    pub torus_warning: bool,
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orders: Vec<String> = self.zero_orders.iter().map(usize::to_string).collect();
        write!(f, "H({})", orders.join(", "))
    }
}

/// Stratum of the central component over `n` letters: `H(2g-2)` for `n = 2g`,
/// `H(g-1, g-1)` for `n = 2g + 1`.
pub fn stratum_of_central(n: usize) -> Result<Stratum, SurfaceError> {
    if n < 2 {
        return Err(PermError::TooShort(n).into());
    }
    let g = n / 2;
    let zero_orders = if n % 2 == 0 { vec![2 * g - 2] } else { vec![g - 1, g - 1] };
    Ok(Stratum { zero_orders, genus: g, torus_warning: g < 2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::LabeledPermutation;

    fn glue(s: &str) -> GluedSurface {
        GluedSurface::glue(&LabeledPermutation::parse(s).unwrap())
    }

    #[test]
    fn fg_start_two_is_genus_two_one_vertex() {
        let s = GluedSurface::glue(&LabeledPermutation::fg_start(2).unwrap());
        assert_eq!((s.vertex_count(), s.genus(), s.euler_char()), (1, 2, -2));
        assert!(s.sides().iter().all(|x| x.closed && x.homology_nonzero == Some(true)));
    }

    #[test]
    fn torus_square() {
        let s = GluedSurface::glue(&LabeledPermutation::central(2).unwrap());
        assert_eq!((s.vertex_count(), s.genus()), (1, 1));
        assert_eq!(s.h1_rank(), 2);
        for side in s.sides() {
            assert_eq!(s.side_homology_nonzero(side.letter), Ok(true));
        }
    }

    #[test]
    fn central_five_has_two_vertices() {
        let s = GluedSurface::glue(&LabeledPermutation::central(5).unwrap());
        assert_eq!((s.vertex_count(), s.genus()), (2, 2));
        assert_eq!(s.h1_rank(), 4);
        assert_eq!(s.relative_h1_rank(), 5);
        // no side of the pentagon-pair joins a vertex to itself
        assert!(s.sides().iter().all(|x| !x.closed));
        assert!(matches!(s.side_homology_nonzero(Letter(0)), Err(SurfaceError::SideNotClosed(_))));
    }

    #[test]
    fn worked_example_corner_walk() {
        // A B C D / D A C B
        let s = glue("A B C D / D A C B");
        assert_eq!(s.vertex_count(), 1);
        assert_eq!(s.genus(), 2);
        let classes = s.corner_classes();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].len(), 8);
    }

    #[test]
    fn reducible_gluing_is_still_defined() {
        let s = glue("A B C / B A C");
        assert!(!s.is_irreducible());
        assert!(!s.warnings().is_empty());
        assert_eq!(s.euler_char() % 2, 0);
    }

    #[test]
    fn strata() {
        assert_eq!(stratum_of_central(4).unwrap().to_string(), "H(2)");
        assert_eq!(stratum_of_central(5).unwrap().to_string(), "H(1, 1)");
        let t = stratum_of_central(2).unwrap();
        assert_eq!(t.to_string(), "H(0)");
        assert!(t.torus_warning);
        assert!(stratum_of_central(1).is_err());
    }

    #[test]
    fn json_report_shape() {
        let s = glue("A B / B A");
        let v: serde_json::Value = serde_json::to_value(&s).unwrap();
        assert_eq!(v["vertex_count"], 1);
        assert_eq!(v["sides"]["A"]["closed"], true);
        assert_eq!(v["sides"]["B"]["homology_nonzero"], true);
    }
}
