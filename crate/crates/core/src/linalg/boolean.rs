use num_traits::Zero;

use super::IntMatrix;

/// Square 0/1 matrix over the boolean semiring, rows packed into `u64` words.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoolMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BoolMatrix {
    pub fn zeros(n: usize) -> BoolMatrix {
        let words = n.div_ceil(64).max(1);
        BoolMatrix { n, words, bits: vec![0; n * words] }
    }

    pub fn identity(n: usize) -> BoolMatrix {
        let mut m = BoolMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    /// Support pattern of a nonnegative integer matrix.
    pub fn support(m: &IntMatrix) -> BoolMatrix {
        let mut b = BoolMatrix::zeros(m.order());
        for i in 0..m.order() {
            for j in 0..m.order() {
                if !m.get(i, j).is_zero() {
                    b.set(i, j);
                }
            }
        }
        b
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    pub fn mul(&self, rhs: &BoolMatrix) -> BoolMatrix {
        let mut out = BoolMatrix::zeros(self.n);
        for i in 0..self.n {
            let dst = i * self.words;
            for k in 0..self.n {
                if self.get(i, k) {
                    for (w, src) in rhs.row(k).iter().enumerate() {
                        out.bits[dst + w] |= src;
                    }
                }
            }
        }
        out
    }

    fn full_row_mask(&self, w: usize) -> u64 {
        let rem = self.n - 64 * w;
        if rem >= 64 {
            u64::MAX
        } else {
            (1u64 << rem) - 1
        }
    }

    pub fn is_all_ones(&self) -> bool {
        (0..self.n).all(|i| self.row(i).iter().enumerate().all(|(w, &bits)| bits == self.full_row_mask(w)))
    }

    pub fn has_zero_row(&self) -> bool {
        (0..self.n).any(|i| self.row(i).iter().all(|&w| w == 0))
    }

    pub fn pow(&self, mut k: u64) -> BoolMatrix {
        let mut base = self.clone();
        let mut acc = BoolMatrix::identity(self.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// `(n − 1)² + 1`, the largest possible primitivity exponent of an `n×n` matrix.
pub fn wielandt_bound(n: usize) -> u64 {
    let n = n as u64;
    if n == 0 {
        1
    } else {
        (n - 1) * (n - 1) + 1
    }
}

/// Least `p ≤ cap` with `M^p` entrywise positive, or `None`.
///
/// Once `M^p > 0` and `M` has no zero row, every higher power is positive too,
/// so the answer is found by binary lifting over the squares `M^(2^j)`.
pub fn min_positive_power(m: &IntMatrix, cap: u64) -> Option<u64> {
    let b = BoolMatrix::support(m);
    if m.order() == 0 || cap == 0 || b.has_zero_row() {
        return None;
    }
    let mut squares = vec![b.clone()];
    while (1u64 << squares.len()) <= cap {
        let last = squares.last().expect("nonempty");
        squares.push(last.mul(last));
    }
    if !b.pow(cap).is_all_ones() {
        return None;
    }
    // Largest p < answer with M^p not positive, built greedily from the top bit down.
    let mut acc = BoolMatrix::identity(b.order());
    let mut below = 0u64;
    for j in (0..squares.len()).rev() {
        let step = 1u64 << j;
        if below + step >= cap {
            continue;
        }
        let cand = acc.mul(&squares[j]);
        if !cand.is_all_ones() {
            acc = cand;
            below += step;
        }
    }
    Some(below + 1)
}

pub fn is_primitive(m: &IntMatrix) -> bool {
    min_positive_power(m, wielandt_bound(m.order())).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(m: &IntMatrix, cap: u64) -> Option<u64> {
        let mut p = m.clone();
        for k in 1..=cap {
            if p.is_positive() {
                return Some(k);
            }
            p = p.mul_ref(m);
        }
        None
    }

    #[test]
    fn identity_never_positive() {
        let id = IntMatrix::identity(3);
        assert_eq!(min_positive_power(&id, 100), None);
        assert!(!is_primitive(&id));
    }

    #[test]
    fn one_by_one() {
        assert_eq!(min_positive_power(&IntMatrix::from_i64_rows(&[&[3]]), 1), Some(1));
        assert_eq!(min_positive_power(&IntMatrix::from_i64_rows(&[&[0]]), 1), None);
    }

    #[test]
    fn wielandt_matrix_attains_bound() {
        for n in 2..=9usize {
            let mut m = IntMatrix::zeros(n);
            for i in 0..n - 1 {
                m.set(i, i + 1, 1);
            }
            m.set(n - 1, 0, 1);
            m.set(n - 1, 1, 1);
            assert_eq!(min_positive_power(&m, wielandt_bound(n)), Some(wielandt_bound(n)));
            assert_eq!(min_positive_power(&m, wielandt_bound(n) - 1), None);
        }
    }

    #[test]
    fn agrees_with_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=6);
            let rows: Vec<Vec<i64>> =
                (0..n).map(|_| (0..n).map(|_| i64::from(rng.gen_bool(0.3))).collect()).collect();
            let m = IntMatrix::from_rows(&rows).unwrap();
            let cap = wielandt_bound(n);
            assert_eq!(min_positive_power(&m, cap), brute(&m, cap), "{m}");
        }
    }

    #[test]
    fn wide_rows() {
        let n = 70;
        let mut m = IntMatrix::zeros(n);
        for i in 0..n {
            m.set(i, (i + 1) % n, 1);
            m.set(i, i, 1);
        }
        assert_eq!(min_positive_power(&m, wielandt_bound(n)), Some(n as u64 - 1));
    }
}
