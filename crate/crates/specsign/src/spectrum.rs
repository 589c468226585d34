use std::fmt;

use nalgebra::{Complex, DMatrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Default tolerance for comparing floating-point spectra.
pub const DEFAULT_SPECTRUM_TOLERANCE: f64 = 1e-9;

/// Characteristic polynomial det(xI - M), stored as the coefficient list
/// (c_0, c_1, ..., c_n) of x^n + c_1 x^{n-1} + ... + c_n, so c_0 = 1.
///
/// Two integer matrices have equal spectra (as multisets, with multiplicity)
/// exactly when these coefficient lists are equal, which is why all spectrum
/// decisions in this crate go through `CharPoly` instead of floats.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharPoly {
    coeffs: Vec<BigInt>,
}

impl CharPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() < 2 {
            return Err(Error::Parse("a characteristic polynomial has degree at least 1".into()));
        }
        if !coeffs[0].is_one() {
            return Err(Error::Parse("characteristic polynomials are monic".into()));
        }
        Ok(CharPoly { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        CharPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// c_j, the coefficient of x^{n-j}.
    pub fn coeff(&self, j: usize) -> &BigInt {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut wrote = false;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let power = n - j;
            if wrote {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let mag = c.abs();
            if power == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if power == 1 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{power}")?;
                }
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Characteristic polynomial by the Faddeev-LeVerrier recurrence:
/// M_1 = I, c_k = -tr(A M_k) / k, M_{k+1} = A M_k + c_k I.
/// Every division is exact.  A fixed-width fast path covers the common case;
/// any overflow falls back to arbitrary precision.
pub fn char_poly(m: &IntMatrix) -> CharPoly {
    if let Some(entries) = m.to_i128() {
        if let Some(coeffs) = char_poly_i128(m.order(), &entries) {
            return CharPoly { coeffs: coeffs.into_iter().map(BigInt::from).collect() };
        }
    }
    CharPoly { coeffs: char_poly_big(m) }
}

pub(crate) fn char_poly_i128(n: usize, a: &[i128]) -> Option<Vec<i128>> {
    let mut coeffs = vec![0i128; n + 1];
    coeffs[0] = 1;
    let mut m: Vec<i128> = vec![0; n * n];
    for i in 0..n {
        m[i * n + i] = 1;
    }
    // k is simultaneously the coefficient slot, the exact divisor, and the
    // recurrence step; an enumerate() rewrite would only obscure that.
    #[allow(clippy::needless_range_loop)]
    for k in 1..=n {
        let mut am = vec![0i128; n * n];
        for i in 0..n {
            for t in 0..n {
                let x = a[i * n + t];
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    let y = m[t * n + j];
                    if y != 0 {
                        am[i * n + j] = am[i * n + j].checked_add(x.checked_mul(y)?)?;
                    }
                }
            }
        }
        let mut tr: i128 = 0;
        for i in 0..n {
            tr = tr.checked_add(am[i * n + i])?;
        }
        debug_assert_eq!(tr % k as i128, 0);
        let ck = -(tr / k as i128);
        coeffs[k] = ck;
        if k < n {
            for i in 0..n {
                am[i * n + i] = am[i * n + i].checked_add(ck)?;
            }
            m = am;
        }
    }
    Some(coeffs)
}

pub(crate) fn char_poly_big(a: &IntMatrix) -> Vec<BigInt> {
    let n = a.order();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[0] = BigInt::one();
    let mut m = IntMatrix::identity(n).expect("n >= 1");
    #[allow(clippy::needless_range_loop)]
    for k in 1..=n {
        let mut am = a.mul(&m).expect("orders match");
        let tr = am.trace();
        debug_assert!((&tr % BigInt::from(k as u64)).is_zero());
        let ck = -tr / BigInt::from(k as u64);
        coeffs[k] = ck.clone();
        if k < n {
            for i in 0..n {
                let v = am.get(i, i) + &ck;
                am.set(i, i, v);
            }
            m = am;
        }
    }
    coeffs
}

/// The unit-modulus factor e^(i*pi*k/p), held as the exact pair (k, p) with
/// 0 <= k < 2p so every distinct value on the circle appears once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RotationFactor {
    k: u64,
    p: u64,
}

impl RotationFactor {
    pub fn new(k: u64, p: u64) -> Result<Self> {
        if p == 0 {
            return Err(Error::ZeroRotationDenominator);
        }
        if k >= 2 * p {
            return Err(Error::RotationOutOfRange { k, max: 2 * p - 1 });
        }
        Ok(RotationFactor { k, p })
    }

    #[inline]
    pub fn k(&self) -> u64 {
        self.k
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_even(&self) -> bool {
        self.k.is_multiple_of(2)
    }

    pub fn as_complex(&self) -> Complex<f64> {
        Complex::from_polar(1.0, std::f64::consts::PI * self.k as f64 / self.p as f64)
    }
}

impl fmt::Display for RotationFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^(i*pi*{}/{})", self.k, self.p)
    }
}

/// Exact test for "the spectrum of the candidate equals the rotation factor
/// times the spectrum of the base", i.e. sp(B) = alpha * sp(A) with
/// alpha = e^(i*pi*k/p).
///
/// If the base eigenvalues are lambda_1..lambda_n and the candidate's are
/// alpha*lambda_1..alpha*lambda_n, then c_j(B) = alpha^j * c_j(A) for every
/// j.  Both sides are integers, so wherever c_j(A) is nonzero, alpha^j must
/// be +1 or -1: k*j = 0 (mod 2p) forces c_j(B) = c_j(A), k*j = p (mod 2p)
/// forces c_j(B) = -c_j(A), and anything else rules the rotation out.
/// Wherever c_j(A) = 0, c_j(B) must vanish too.  The conditions are also
/// sufficient, because they pin the candidate polynomial to
/// alpha^n * q(x/alpha) exactly.
pub fn rotation_check(base: &CharPoly, candidate: &CharPoly, rot: &RotationFactor) -> Result<bool> {
    if base.degree() != candidate.degree() {
        return Err(Error::DegreeMismatch { left: base.degree(), right: candidate.degree() });
    }
    let two_p = 2 * rot.p;
    for j in 1..=base.degree() {
        let ca = base.coeff(j);
        let cb = candidate.coeff(j);
        if ca.is_zero() {
            if !cb.is_zero() {
                return Ok(false);
            }
            continue;
        }
        let r = (rot.k * j as u64) % two_p;
        let matches = if r == 0 {
            cb == ca
        } else if r == rot.p {
            // negation compare without allocating a temporary
            cb.sign() == -ca.sign() && cb.magnitude() == ca.magnitude()
        } else {
            false
        };
        if !matches {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `rotation_check` on whole matrices.
pub fn rotation_check_matrices(base: &IntMatrix, candidate: &IntMatrix, rot: &RotationFactor) -> Result<bool> {
    if base.order() != candidate.order() {
        return Err(Error::OrderMismatch { left: base.order(), right: candidate.order() });
    }
    rotation_check(&char_poly(base), &char_poly(candidate), rot)
}

/// Floating-point eigenvalue multiset.  Only ever used as a cross-check on
/// the exact machinery; no decision in the library rests on it.
#[derive(Debug, Clone)]
pub struct NumericSpectrum(Vec<Complex<f64>>);

impl NumericSpectrum {
    pub fn new(values: Vec<Complex<f64>>) -> Self {
        NumericSpectrum(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Complex<f64>] {
        &self.0
    }

    /// Multiply every eigenvalue by the rotation factor.
    pub fn rotated(&self, rot: &RotationFactor) -> NumericSpectrum {
        let alpha = rot.as_complex();
        NumericSpectrum(self.0.iter().map(|z| z * alpha).collect())
    }

    /// Values ordered by (re, im); handy for stable printing.
    pub fn sorted(&self) -> Vec<Complex<f64>> {
        let mut v = self.0.clone();
        v.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).expect("finite eigenvalues"));
        v
    }
}

/// Eigenvalues via a real Schur decomposition.
///
/// The input is first conjugated by a fixed random orthogonal matrix:
/// exactly cyclic patterns (weighted permutation matrices) stall the QR
/// shift strategy, and the similarity breaks the pattern without moving
/// the spectrum.
pub fn numeric_spectrum(m: &IntMatrix) -> Result<NumericSpectrum> {
    let n = m.order();
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let x = m.get(i, j).to_f64().ok_or(Error::NumericOverflow)?;
            if !x.is_finite() {
                return Err(Error::NumericOverflow);
            }
            data.push(x);
        }
    }
    let dm = DMatrix::from_row_slice(n, n, &data);
    let q = scrambling_rotation(n);
    let dm = q.transpose() * dm * &q;
    // A bounded iteration count turns non-convergence into an error
    // instead of a spin.
    let schur =
        nalgebra::linalg::Schur::try_new(dm, f64::EPSILON, 100_000).ok_or(Error::EigenSolver)?;
    let eigs = schur.complex_eigenvalues();
    Ok(NumericSpectrum(eigs.iter().copied().collect()))
}

/// Deterministic dense orthogonal matrix (Q factor of a seeded random
/// matrix).
fn scrambling_rotation(n: usize) -> DMatrix<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_5eed ^ n as u64);
    let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    m.qr().q()
}

/// Do the two float multisets agree up to `tol`, element for element?
///
/// Greedy nearest-neighbor pairing handles well-separated spectra; when it
/// fails, an exact maximum matching on the "within tolerance" bipartite
/// graph settles the question, so near-ties cannot produce a false negative.
pub fn multiset_match(a: &NumericSpectrum, b: &NumericSpectrum, tol: f64) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::SpectrumSizeMismatch { left: a.len(), right: b.len() });
    }
    let n = a.len();
    let mut used = vec![false; n];
    let mut greedy_ok = true;
    'outer: for x in a.values() {
        let mut best: Option<(usize, f64)> = None;
        for (i, y) in b.values().iter().enumerate() {
            if used[i] {
                continue;
            }
            let d = (x - y).norm();
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        match best {
            Some((i, d)) if d <= tol => used[i] = true,
            _ => {
                greedy_ok = false;
                break 'outer;
            }
        }
    }
    if greedy_ok {
        return Ok(true);
    }

    let compat: Vec<Vec<usize>> = a
        .values()
        .iter()
        .map(|x| {
            b.values()
                .iter()
                .enumerate()
                .filter(|(_, y)| (x - *y).norm() <= tol)
                .map(|(i, _)| i)
                .collect()
            })
        .collect();
    let mut matched_to = vec![usize::MAX; n];
    fn augment(u: usize, compat: &[Vec<usize>], seen: &mut [bool], matched_to: &mut [usize]) -> bool {
        for &v in &compat[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if matched_to[v] == usize::MAX || augment(matched_to[v], compat, seen, matched_to) {
                matched_to[v] = u;
                return true;
            }
        }
        false
    }
    for u in 0..n {
        let mut seen = vec![false; n];
        if !augment(u, &compat, &mut seen, &mut matched_to) {
            return Ok(false);
        }
    }
    Ok(true)
}
