use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense square matrix over the integers, row-major.
///
/// Arbitrary precision throughout: spectra are compared through exact
/// characteristic polynomials, so entries must never silently wrap.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_entries(n: usize, entries: Vec<BigInt>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if entries.len() != n * n {
            return Err(Error::BadShape { n, expected: n * n, got: entries.len() });
        }
        Ok(IntMatrix { n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::BadShape {
                    n,
                    expected: n * n,
                    got: row.len() * n, // best-effort count for the message
                });
            }
            entries.extend(row);
        }
        Ok(IntMatrix { n, entries })
    }

    /// Convenience constructor used heavily in tests.
    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        IntMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
        )
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Ok(IntMatrix { n, entries })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::from_fn(n, |_, _| BigInt::zero())
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.n + j] = value;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    /// Positions of the nonzero entries, in row-major order.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if !self.get(i, j).is_zero() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.n != other.n {
            return Err(Error::OrderMismatch { left: self.n, right: other.n });
        }
        let n = self.n;
        let mut out = IntMatrix::zero(n)?;
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn negated(&self) -> IntMatrix {
        IntMatrix {
            n: self.n,
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }

    /// Exact rank over the rationals, by fraction-free (Bareiss) row
    /// reduction with column pivoting; every division is exact.
    pub fn rank(&self) -> usize {
        let n = self.n;
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut prev = BigInt::one();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            let pivot_row = m[rank].clone();
            for row in m.iter_mut().skip(rank + 1) {
                for c in col + 1..n {
                    row[c] = (&pivot_row[col] * &row[c] - &row[col] * &pivot_row[c]) / &prev;
                }
                row[col] = BigInt::from(0);
            }
            prev = pivot_row[col].clone();
            rank += 1;
            if rank == n {
                break;
            }
        }
        rank
    }

    /// Entrywise absolute value.
    pub fn abs(&self) -> NonnegMatrix {
        let m = IntMatrix {
            n: self.n,
            entries: self.entries.iter().map(|x| x.abs()).collect(),
        };
        NonnegMatrix(m)
    }

    /// Conjugation by the permutation sending new index i to old vertex
    /// perm[i]: out[i][j] = self[perm[i]][perm[j]].  This is exactly the
    /// relabelling of the underlying digraph, so it preserves spectra.
    pub fn permuted(&self, perm: &Permutation) -> Result<IntMatrix> {
        if perm.order() != self.n {
            return Err(Error::OrderMismatch { left: self.n, right: perm.order() });
        }
        IntMatrix::from_fn(self.n, |i, j| self.get(perm.apply(i), perm.apply(j)).clone())
    }

    /// All entries as i128 if none overflows; the exact spectrum code uses
    /// this as a fast path before falling back to full BigInt arithmetic.
    pub fn to_i128(&self) -> Option<Vec<i128>> {
        self.entries.iter().map(|x| i128::try_from(x).ok()).collect()
    }
}

impl fmt::Display for IntMatrix {
    /// Text form: order on the first line, then one whitespace-separated row
    /// per line.  `io::parse_matrix_text` reads this back.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for i in 0..self.n {
            for j in 0..self.n {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            if i + 1 < self.n {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// Entrywise-nonnegative integer matrix.  The wrapper is the proof that the
/// check ran; everything downstream that needs nonnegativity takes this type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NonnegMatrix(IntMatrix);

impl NonnegMatrix {
    pub fn new(m: IntMatrix) -> Result<Self> {
        for i in 0..m.order() {
            for j in 0..m.order() {
                if m.get(i, j).is_negative() {
                    return Err(Error::NegativeEntry { row: i, col: j, value: m.get(i, j).to_string() });
                }
            }
        }
        Ok(NonnegMatrix(m))
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        NonnegMatrix::new(IntMatrix::from_i64(rows)?)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.0.order()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        self.0.get(i, j)
    }

    pub fn support(&self) -> Vec<(usize, usize)> {
        self.0.support()
    }

    pub fn as_int(&self) -> &IntMatrix {
        &self.0
    }

    pub fn into_int(self) -> IntMatrix {
        self.0
    }

    pub fn permuted(&self, perm: &Permutation) -> Result<NonnegMatrix> {
        Ok(NonnegMatrix(self.0.permuted(perm)?))
    }
}

impl fmt::Display for NonnegMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// One entry of a {-1, +1} assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    #[inline]
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    #[inline]
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// Sign of a nonzero integer.  Panics on zero: zero entries carry no sign.
    pub fn of(x: &BigInt) -> Sign {
        assert!(!x.is_zero(), "zero has no sign");
        if x.is_negative() { Sign::Minus } else { Sign::Plus }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs { Sign::Plus } else { Sign::Minus }
    }
}

/// Diagonal matrix with {-1, +1} entries.  It is its own inverse, so
/// conjugation is the same map in both directions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignDiagonal(Vec<Sign>);

impl SignDiagonal {
    pub fn new(signs: Vec<Sign>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        Ok(SignDiagonal(signs))
    }

    pub fn all_plus(n: usize) -> Result<Self> {
        SignDiagonal::new(vec![Sign::Plus; n])
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn get(&self, i: usize) -> Sign {
        self.0[i]
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn negated(&self) -> SignDiagonal {
        SignDiagonal(self.0.iter().map(|s| s.flip()).collect())
    }

    /// Flip globally if needed so that entry 0 is +1.  Global negation does
    /// not change the conjugation action, so this picks a canonical
    /// representative of each {D, -D} pair.
    pub fn normalized(&self) -> SignDiagonal {
        match self.0[0] {
            Sign::Plus => self.clone(),
            Sign::Minus => self.negated(),
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.0[0] == Sign::Plus
    }

    /// D * M * D: entry (i, j) picks up the factor d_i * d_j.
    pub fn conjugate(&self, m: &IntMatrix) -> Result<IntMatrix> {
        if self.order() != m.order() {
            return Err(Error::OrderMismatch { left: m.order(), right: self.order() });
        }
        IntMatrix::from_fn(m.order(), |i, j| {
            if self.get(i) == self.get(j) {
                m.get(i, j).clone()
            } else {
                -m.get(i, j)
            }
        })
    }
}

/// Permutation of 0..n, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n || seen[v] {
                return Err(Error::InvalidPermutation { n });
            }
            seen[v] = true;
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation { image: (0..n).collect() }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { image: inv }
    }
}

/// D * B * D with a {-1, 1} diagonal: the similarity D^{-1} B D, since such
/// a diagonal is its own inverse.
pub fn conjugate_diag(b: &IntMatrix, d: &SignDiagonal) -> Result<IntMatrix> {
    d.conjugate(b)
}

/// P M P^T for the permutation matrix of `perm`: entry (i, j) of the input
/// lands at position (perm(i), perm(j)) of the result.
pub fn conjugate_perm(m: &IntMatrix, perm: &Permutation) -> Result<IntMatrix> {
    m.permuted(&perm.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_ragged() {
        assert!(matches!(IntMatrix::from_rows(vec![]), Err(Error::EmptyMatrix)));
        let ragged = vec![vec![BigInt::from(1)], vec![BigInt::from(1), BigInt::from(2)]];
        assert!(matches!(IntMatrix::from_rows(ragged), Err(Error::BadShape { .. })));
    }

    #[test]
    fn nonneg_rejects_negative_entry() {
        let m = IntMatrix::from_i64(&[&[0, -1], &[1, 0]]).unwrap();
        match NonnegMatrix::new(m) {
            Err(Error::NegativeEntry { row: 0, col: 1, .. }) => {}
            other => panic!("expected NegativeEntry, got {other:?}"),
        }
    }

    #[test]
    fn identity_is_neutral() {
        let a = IntMatrix::from_i64(&[&[1, 2], &[3, 4]]).unwrap();
        let id = IntMatrix::identity(2).unwrap();
        assert_eq!(a.mul(&id).unwrap(), a);
        assert_eq!(id.mul(&a).unwrap(), a);
    }

    #[test]
    fn multiplication_matches_hand_computation() {
        let a = IntMatrix::from_i64(&[&[1, 2], &[3, 4]]).unwrap();
        let b = IntMatrix::from_i64(&[&[0, 1], &[1, 1]]).unwrap();
        let want = IntMatrix::from_i64(&[&[2, 3], &[4, 7]]).unwrap();
        assert_eq!(a.mul(&b).unwrap(), want);
    }

    #[test]
    fn rank_by_elimination() {
        assert_eq!(IntMatrix::identity(4).unwrap().rank(), 4);
        assert_eq!(IntMatrix::zero(3).unwrap().rank(), 0);
        assert_eq!(IntMatrix::from_i64(&[&[1, 2], &[2, 4]]).unwrap().rank(), 1);
        assert_eq!(
            IntMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).unwrap().rank(),
            2
        );
        assert_eq!(
            IntMatrix::from_i64(&[&[0, 0, 1], &[0, 0, 2], &[0, 0, 3]]).unwrap().rank(),
            1
        );
        // invertible despite an early zero pivot
        assert_eq!(IntMatrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap().rank(), 2);
        let huge: BigInt = BigInt::from(7) << 200;
        let m = IntMatrix::from_rows(vec![
            vec![huge.clone(), BigInt::zero()],
            vec![BigInt::zero(), huge],
        ])
        .unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn permuted_relabels_entrywise() {
        let a = IntMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).unwrap();
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        let got = a.permuted(&p).unwrap();
        // got[i][j] = a[p(i)][p(j)]
        let want = IntMatrix::from_i64(&[&[9, 7, 8], &[3, 1, 2], &[6, 4, 5]]).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn permutation_rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
    }

    #[test]
    fn inverse_undoes_permutation() {
        let p = Permutation::new(vec![2, 0, 3, 1]).unwrap();
        let inv = p.inverse();
        for i in 0..4 {
            assert_eq!(inv.apply(p.apply(i)), i);
        }
        let a = IntMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).unwrap();
        let q = Permutation::new(vec![1, 2, 0]).unwrap();
        assert_eq!(a.permuted(&q).unwrap().permuted(&q.inverse()).unwrap(), a);
    }

    #[test]
    fn diagonal_conjugation_is_an_involution() {
        let a = IntMatrix::from_i64(&[&[0, 1, 2], &[3, 0, 4], &[5, 6, 0]]).unwrap();
        let d = SignDiagonal::new(vec![Sign::Plus, Sign::Minus, Sign::Plus]).unwrap();
        let once = d.conjugate(&a).unwrap();
        assert_eq!(*once.get(0, 1), BigInt::from(-1));
        assert_eq!(*once.get(0, 2), BigInt::from(2));
        assert_eq!(*once.get(2, 1), BigInt::from(-6));
        assert_eq!(d.conjugate(&once).unwrap(), a);
    }

    #[test]
    fn normalization_fixes_first_sign() {
        let d = SignDiagonal::new(vec![Sign::Minus, Sign::Plus, Sign::Minus]).unwrap();
        let nd = d.normalized();
        assert!(nd.is_normalized());
        assert_eq!(nd.signs(), &[Sign::Plus, Sign::Minus, Sign::Plus]);
        // Same conjugation action.
        let a = IntMatrix::from_i64(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]).unwrap();
        assert_eq!(d.conjugate(&a).unwrap(), nd.conjugate(&a).unwrap());
    }

    #[test]
    fn conjugate_perm_moves_entries_forward() {
        // Entry (0, 1) must land at (P(0), P(1)) = (1, 0).
        let m = IntMatrix::from_i64(&[&[0, 1], &[0, 0]]).unwrap();
        let p = Permutation::new(vec![1, 0]).unwrap();
        let want = IntMatrix::from_i64(&[&[0, 0], &[1, 0]]).unwrap();
        assert_eq!(conjugate_perm(&m, &p).unwrap(), want);

        let a = IntMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).unwrap();
        let q = Permutation::new(vec![1, 2, 0]).unwrap();
        let got = conjugate_perm(&a, &q).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(got.get(q.apply(i), q.apply(j)), a.get(i, j));
            }
        }
        let id = Permutation::identity(3);
        assert_eq!(conjugate_perm(&a, &id).unwrap(), a);
    }

    #[test]
    fn conjugate_diag_matches_entrywise_rule() {
        let b = IntMatrix::from_i64(&[&[0, 1], &[-1, 0]]).unwrap();
        let d = SignDiagonal::new(vec![Sign::Plus, Sign::Minus]).unwrap();
        let want = IntMatrix::from_i64(&[&[0, -1], &[1, 0]]).unwrap();
        assert_eq!(conjugate_diag(&b, &d).unwrap(), want);
        // Global flip is invisible.
        let dd = SignDiagonal::new(vec![Sign::Minus, Sign::Minus]).unwrap();
        let sym = IntMatrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(conjugate_diag(&sym, &dd).unwrap(), sym);
    }

    #[test]
    fn display_roundtrips_shape() {
        let a = IntMatrix::from_i64(&[&[0, -3], &[12, 0]]).unwrap();
        assert_eq!(a.to_string(), "2\n0 -3\n12 0");
    }
}
