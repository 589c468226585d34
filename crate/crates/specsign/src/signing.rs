use std::collections::BTreeMap;

use num_traits::Zero;

use crate::digraph::{CyclicStructure, Digraph};
use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, NonnegMatrix, Sign, SignDiagonal};
use crate::spectrum::{char_poly, rotation_check, RotationFactor};

/// Largest order at which the similarity class is enumerated by default:
/// the class has 2^{n-1} members.
pub const DEFAULT_CLASS_ENUM_CAP: usize = 20;

/// A signing of a nonnegative matrix A: a choice of sign for every nonzero
/// entry.  The realized matrix B has |B| = A by construction, because the
/// sign map's domain is pinned to the support of the base.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signing {
    base: NonnegMatrix,
    signs: BTreeMap<(usize, usize), Sign>,
}

impl Signing {
    /// Signs must cover the support of `base` exactly.
    pub fn new(base: NonnegMatrix, signs: BTreeMap<(usize, usize), Sign>) -> Result<Self> {
        for &(i, j) in signs.keys() {
            if i >= base.order() || j >= base.order() || base.get(i, j).is_zero() {
                return Err(Error::SupportMismatch { row: i, col: j });
            }
        }
        for (i, j) in base.support() {
            if !signs.contains_key(&(i, j)) {
                return Err(Error::SupportMismatch { row: i, col: j });
            }
        }
        Ok(Signing { base, signs })
    }

    /// The identity signing: every nonzero entry kept positive, so the
    /// realized matrix is the base itself.
    pub fn all_plus(base: NonnegMatrix) -> Signing {
        let signs = base.support().into_iter().map(|pos| (pos, Sign::Plus)).collect();
        Signing { base, signs }
    }

    pub fn all_minus(base: NonnegMatrix) -> Signing {
        let signs = base.support().into_iter().map(|pos| (pos, Sign::Minus)).collect();
        Signing { base, signs }
    }

    /// Decompose an integer matrix into |B| and the sign pattern.
    pub fn from_matrix(b: &IntMatrix) -> Signing {
        let base = b.abs();
        let signs = b.support().into_iter().map(|(i, j)| ((i, j), Sign::of(b.get(i, j)))).collect();
        Signing { base, signs }
    }

    /// The realized matrix B: signs applied to the base entrywise.
    pub fn realize(&self) -> IntMatrix {
        IntMatrix::from_fn(self.order(), |i, j| match self.signs.get(&(i, j)) {
            Some(Sign::Plus) => self.base.get(i, j).clone(),
            Some(Sign::Minus) => -self.base.get(i, j),
            None => Zero::zero(),
        })
        .expect("base order is positive")
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.base.order()
    }

    pub fn base(&self) -> &NonnegMatrix {
        &self.base
    }

    pub fn signs(&self) -> &BTreeMap<(usize, usize), Sign> {
        &self.signs
    }

    pub fn sign_at(&self, i: usize, j: usize) -> Option<Sign> {
        self.signs.get(&(i, j)).copied()
    }

    /// Signs listed in support order (row-major); the canonical sort key for
    /// deterministic enumeration.
    pub fn sign_vector(&self) -> Vec<Sign> {
        self.signs.values().copied().collect()
    }

    /// The signing realizing D * B * D.  Same base; the sign at (i, j)
    /// flips exactly when d_i differs from d_j.
    pub fn conjugated(&self, d: &SignDiagonal) -> Result<Signing> {
        if d.order() != self.order() {
            return Err(Error::OrderMismatch { left: self.order(), right: d.order() });
        }
        let signs = self
            .signs
            .iter()
            .map(|(&(i, j), &s)| ((i, j), s * (d.get(i) * d.get(j))))
            .collect();
        Ok(Signing { base: self.base.clone(), signs })
    }
}

/// Analysis of one nonnegative matrix: irreducibility, period, which
/// rotation factors can carry a nonempty signing set, and the cyclic class
/// structure when the period exceeds 1.
///
/// The admissible list is empty exactly when the period is undefined (the
/// only irreducible case is the 1x1 zero matrix, whose digraph has no
/// closed path).
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub irreducible: bool,
    pub period: Option<u64>,
    pub admissible: Vec<RotationFactor>,
    pub even_ks: Vec<u64>,
    pub odd_ks: Vec<u64>,
    pub cyclic: Option<CyclicStructure>,
}

pub fn analyze(a: &NonnegMatrix) -> Result<AnalysisReport> {
    let g = Digraph::from_matrix(a);
    let components = g.strongly_connected_components();
    if components.len() != 1 {
        return Err(Error::Reducible { components });
    }
    let period = match g.period() {
        Ok(p) => p,
        Err(Error::NoClosedPath) => {
            return Ok(AnalysisReport {
                irreducible: true,
                period: None,
                admissible: vec![],
                even_ks: vec![],
                odd_ks: vec![],
                cyclic: None,
            })
        }
        Err(e) => return Err(e),
    };
    let admissible = admissible_alphas(a)?;
    let (even_ks, odd_ks) = admissible.iter().map(|r| r.k()).partition(|k| k % 2 == 0);
    let cyclic = if period > 1 { Some(g.cyclic_structure()?) } else { None };
    Ok(AnalysisReport {
        irreducible: true,
        period: Some(period),
        admissible,
        even_ks,
        odd_ks,
        cyclic,
    })
}

/// The rotation factors alpha for which some signing B of A can have
/// sp(B) = alpha * sp(A): exactly e^(i*pi*k/p) for k in 0..2p, where p is
/// the period.  Every k even yields the class of A itself; every k odd
/// yields the class of the canonical witness.
pub fn admissible_alphas(a: &NonnegMatrix) -> Result<Vec<RotationFactor>> {
    let p = Digraph::from_matrix(a).period()?;
    (0..2 * p).map(|k| RotationFactor::new(k, p)).collect()
}

/// A signing whose spectrum is e^(i*pi*k/p) times the spectrum of A.
///
/// Even k: the all-positive signing (B = A).  Odd k with p = 1: the
/// all-negative signing.  Odd k with p > 1: negate exactly the wrap-around
/// block of the cyclic normal form, i.e. the entries from the last class
/// back into class 0.  The rotation identity is re-verified on the result
/// before it is returned.
pub fn construct_witness(a: &NonnegMatrix, k: u64) -> Result<Signing> {
    let g = Digraph::from_matrix(a);
    let p = g.period()?;
    if k >= 2 * p {
        return Err(Error::RotationOutOfRange { k, max: 2 * p - 1 });
    }
    let signing = if k.is_multiple_of(2) {
        Signing::all_plus(a.clone())
    } else if p == 1 {
        Signing::all_minus(a.clone())
    } else {
        let cs = g.cyclic_structure()?;
        let last = (p - 1) as usize;
        let signs = a
            .support()
            .into_iter()
            .map(|(i, j)| {
                let flip = cs.classes[i] == last && cs.classes[j] == 0;
                ((i, j), if flip { Sign::Minus } else { Sign::Plus })
            })
            .collect();
        Signing { base: a.clone(), signs }
    };
    let rot = RotationFactor::new(k, p)?;
    let ok = rotation_check(&char_poly(a.as_int()), &char_poly(&signing.realize()), &rot)?;
    assert!(ok, "witness construction must satisfy its own rotation identity");
    Ok(signing)
}

/// Decide whether two signings of the same irreducible base are {-1,1}-
/// diagonally similar, and produce the diagonal when they are.
///
/// Each support position (i, j) forces d_i * d_j to equal the ratio of the
/// two signs there.  Fixing d_0 = +1 and walking the support graph (which
/// is connected, because the base is irreducible) determines every d_v;
/// a final pass over the support either confirms all constraints or proves
/// no diagonal exists.  The returned diagonal is normalized with d_0 = +1
/// and is unique up to global sign.
pub fn decide_diag_similar(b: &Signing, b2: &Signing) -> Result<Option<SignDiagonal>> {
    if b.base() != b2.base() {
        return Err(Error::BaseMismatch);
    }
    let n = b.order();
    let g = Digraph::from_matrix(b.base());
    let components = g.strongly_connected_components();
    if components.len() != 1 {
        return Err(Error::Reducible { components });
    }

    // ratio(i, j) = sign2 / sign1 = sign2 * sign1 on {-1, 1}.
    let ratio: BTreeMap<(usize, usize), Sign> = b
        .signs()
        .iter()
        .map(|(&pos, &s)| (pos, s * b2.sign_at(pos.0, pos.1).expect("same base, same support")))
        .collect();

    let mut incident: Vec<Vec<(usize, Sign)>> = vec![Vec::new(); n];
    for (&(i, j), &r) in &ratio {
        incident[i].push((j, r));
        if i != j {
            incident[j].push((i, r));
        }
    }

    let mut delta: Vec<Option<Sign>> = vec![None; n];
    delta[0] = Some(Sign::Plus);
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let dv = delta[v].expect("queued vertices are assigned");
        for &(w, r) in &incident[v] {
            if delta[w].is_none() {
                // d_v * d_w = r, so d_w = r * d_v.
                delta[w] = Some(r * dv);
                queue.push_back(w);
            }
        }
    }
    let assigned: Vec<Sign> = delta
        .into_iter()
        .map(|d| d.expect("support graph of an irreducible matrix is connected"))
        .collect();
    let d = SignDiagonal::new(assigned)?;

    for (&(i, j), &r) in &ratio {
        if d.get(i) * d.get(j) != r {
            return Ok(None);
        }
    }
    Ok(Some(d))
}

/// Is the realized matrix's spectrum e^(i*pi*k/p) times the base spectrum?
/// Decided purely through diagonal similarity: similarity to the base for
/// even k, similarity to the canonical odd witness for odd k.  Returns the
/// conjugating diagonal as the certificate.
pub fn membership(b: &Signing, k: u64) -> Result<Option<SignDiagonal>> {
    let a = b.base();
    let p = Digraph::from_matrix(a).period()?;
    if k >= 2 * p {
        return Err(Error::RotationOutOfRange { k, max: 2 * p - 1 });
    }
    let target =
        if k.is_multiple_of(2) { Signing::all_plus(a.clone()) } else { construct_witness(a, 1)? };
    decide_diag_similar(b, &target)
}

/// All signings diagonally similar to `b0`: conjugate by every diagonal
/// with d_0 = +1.  For an irreducible base these 2^{n-1} signings are
/// pairwise distinct (a diagonal fixing the signing must be constant on the
/// connected support graph), and they are returned sorted by sign vector.
pub fn enumerate_class(b0: &Signing) -> Result<Vec<Signing>> {
    enumerate_class_capped(b0, DEFAULT_CLASS_ENUM_CAP)
}

pub fn enumerate_class_capped(b0: &Signing, cap: usize) -> Result<Vec<Signing>> {
    let n = b0.order();
    if n > cap {
        return Err(Error::ClassCapExceeded { n, cap });
    }
    let g = Digraph::from_matrix(b0.base());
    let components = g.strongly_connected_components();
    if components.len() != 1 {
        return Err(Error::Reducible { components });
    }
    let mut class = std::collections::BTreeSet::new();
    for mask in 0u64..(1 << (n - 1)) {
        let mut signs = vec![Sign::Plus; n];
        for (v, sign) in signs.iter_mut().enumerate().skip(1) {
            if (mask >> (v - 1)) & 1 == 1 {
                *sign = Sign::Minus;
            }
        }
        let d = SignDiagonal::new(signs)?;
        class.insert(b0.conjugated(&d)?);
    }
    Ok(class.into_iter().collect())
}
