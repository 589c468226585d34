use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::matrix::{conjugate_perm, IntMatrix, NonnegMatrix, Permutation, Sign};
use crate::orient::{switch, Orientation};
use crate::signing::Signing;
use crate::spectrum::{char_poly, rotation_check, RotationFactor};

/// 2^16 signings is the largest exhaustive sweep the oracle will attempt.
pub const DEFAULT_SUPPORT_CAP: usize = 16;

/// Largest vertex count for exhaustive simple-cycle enumeration.
pub const DEFAULT_CYCLE_CAP: usize = 8;

/// Every signing of A, ordered lexicographically by sign vector with + < -.
pub fn all_signings(a: &NonnegMatrix) -> Result<Vec<Signing>> {
    all_signings_capped(a, DEFAULT_SUPPORT_CAP)
}

pub fn all_signings_capped(a: &NonnegMatrix, cap: usize) -> Result<Vec<Signing>> {
    let support = a.support();
    let m = support.len();
    if m > cap {
        return Err(Error::SupportCapExceeded { m, cap });
    }
    let mut out = Vec::with_capacity(1usize << m);
    for mask in 0u64..(1u64 << m) {
        let signs = support
            .iter()
            .enumerate()
            .map(|(idx, &pos)| {
                // First support position in the most significant bit, so
                // ascending masks give lexicographic sign vectors.
                let bit = (mask >> (m - 1 - idx)) & 1;
                (pos, if bit == 1 { Sign::Minus } else { Sign::Plus })
            })
            .collect();
        out.push(Signing::new(a.clone(), signs)?);
    }
    Ok(out)
}

/// Brute-force M(e^(i*pi*k/p), A): filter every signing by the exact
/// rotation test.  The independent cross-check for the structure theorems;
/// nothing in the signing module calls this.
pub fn brute_force_m(a: &NonnegMatrix, k: u64) -> Result<BTreeSet<Signing>> {
    let p = Digraph::from_matrix(a).period()?;
    let rot = RotationFactor::new(k, p)?;
    brute_force_m_rot(a, &rot)
}

/// Same filter for an arbitrary rational angle, admissible for A or not.
pub fn brute_force_m_rot(a: &NonnegMatrix, rot: &RotationFactor) -> Result<BTreeSet<Signing>> {
    let pa = char_poly(a.as_int());
    let mut out = BTreeSet::new();
    for s in all_signings(a)? {
        if rotation_check(&pa, &char_poly(&s.realize()), rot)? {
            out.insert(s);
        }
    }
    Ok(out)
}

/// Gcd of the lengths of all simple directed cycles, found by explicit DFS
/// enumeration.  Exponential, hence the small cap; exists purely to check
/// the BFS-level period algorithm against the literal definition.
pub fn all_simple_cycles_gcd(d: &Digraph) -> Result<u64> {
    all_simple_cycles_gcd_capped(d, DEFAULT_CYCLE_CAP)
}

pub fn all_simple_cycles_gcd_capped(d: &Digraph, cap: usize) -> Result<u64> {
    let n = d.order();
    if n > cap {
        return Err(Error::CycleCapExceeded { n, cap });
    }
    let components = d.strongly_connected_components();
    if components.len() != 1 {
        return Err(Error::Reducible { components });
    }
    let mut g = 0u64;
    let mut on_path = vec![false; n];
    // Each simple cycle is counted once, rooted at its smallest vertex.
    for s in 0..n {
        cycle_dfs(d, s, s, 0, &mut on_path, &mut g);
    }
    if g == 0 {
        return Err(Error::NoClosedPath);
    }
    Ok(g)
}

fn cycle_dfs(d: &Digraph, s: usize, v: usize, len: u64, on_path: &mut [bool], g: &mut u64) {
    for &w in d.out_neighbors(v) {
        if w == s {
            *g = g.gcd(&(len + 1));
        } else if w > s && !on_path[w] {
            on_path[w] = true;
            cycle_dfs(d, s, w, len + 1, on_path, g);
            on_path[w] = false;
        }
    }
}

/// Deterministic-for-seed irreducible nonnegative matrix with period
/// exactly `p`: a p-cyclic hub skeleton (guaranteeing strong connectivity
/// and a cycle of length exactly p), random extra class-respecting arcs,
/// random weights in 1..=3, then a random relabelling to hide the block
/// structure.  The period postcondition is asserted before returning.
///
/// Candidates whose zero eigenvalue is defective are rejected, so the
/// spectra stay well-conditioned for floating-point cross-checks (a
/// Jordan block of size m at 0 scatters computed eigenvalues on the order
/// of machine-epsilon^(1/m), which no dense solver can beat).  The final
/// attempt piles all the slack into one class, which makes every block a
/// positive vector and the zero eigenvalue provably semisimple, so the
/// loop always terminates.
pub fn random_irreducible(n: usize, p: u64, seed: u64) -> Result<NonnegMatrix> {
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if p == 0 || p as usize > n {
        return Err(Error::InfeasiblePeriod { p, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const ATTEMPTS: usize = 32;
    for attempt in 0..ATTEMPTS {
        let lopsided = attempt == ATTEMPTS - 1;
        let a = random_candidate(n, p, &mut rng, lopsided)?;
        if !zero_eigenvalue_is_semisimple(&a) {
            continue;
        }
        let got = Digraph::from_matrix(&a).period()?;
        assert_eq!(got, p, "generator must hit the requested period");
        return Ok(a);
    }
    unreachable!("the lopsided composition always has a semisimple zero");
}

fn random_candidate(
    n: usize,
    p: u64,
    rng: &mut ChaCha8Rng,
    lopsided: bool,
) -> Result<NonnegMatrix> {
    let pz = p as usize;
    if lopsided && pz == 1 {
        // Aperiodic last resort: identity plus a full directed cycle, whose
        // eigenvalues 1 + (n-th roots of unity) are all simple.
        let mut m = IntMatrix::zero(n)?;
        for v in 0..n {
            m.set(v, v, BigInt::one());
            let w = (v + 1) % n;
            let e = m.get(v, w) + 1u8;
            m.set(v, w, e);
        }
        return shuffled_labels(m, n, rng);
    }
    let mut sizes = vec![1usize; pz];
    if lopsided {
        sizes[0] = n - pz + 1;
    } else {
        for _ in 0..n - pz {
            let t = rng.gen_range(0..pz);
            sizes[t] += 1;
        }
    }
    let mut starts = vec![0usize; pz];
    for t in 1..pz {
        starts[t] = starts[t - 1] + sizes[t - 1];
    }
    let class_range = |t: usize| starts[t]..starts[t] + sizes[t];

    let mut arcs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for t in 0..pz {
        let nt = (t + 1) % pz;
        for u in class_range(t) {
            arcs.insert((u, starts[nt]));
        }
        for v in class_range(nt) {
            arcs.insert((starts[t], v));
        }
    }
    for t in 0..pz {
        let nt = (t + 1) % pz;
        for u in class_range(t) {
            for v in class_range(nt) {
                if rng.gen_bool(0.35) {
                    arcs.insert((u, v));
                }
            }
        }
    }

    let mut m = IntMatrix::zero(n)?;
    for &(u, v) in &arcs {
        m.set(u, v, BigInt::from(rng.gen_range(1i64..=3)));
    }
    shuffled_labels(m, n, rng)
}

fn shuffled_labels(m: IntMatrix, n: usize, rng: &mut ChaCha8Rng) -> Result<NonnegMatrix> {
    let mut image: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        image.swap(i, j);
    }
    let perm = Permutation::new(image)?;
    NonnegMatrix::new(conjugate_perm(&m, &perm)?)
}

/// The algebraic multiplicity of the eigenvalue 0 (trailing zero
/// coefficients of the characteristic polynomial) equals its geometric
/// multiplicity (kernel dimension) exactly when 0 carries no Jordan block
/// of size 2 or more.
fn zero_eigenvalue_is_semisimple(a: &NonnegMatrix) -> bool {
    let n = a.order();
    let poly = char_poly(a.as_int());
    let algebraic = (0..=n).rev().take_while(|&j| poly.coeff(j).is_zero()).count();
    let geometric = n - a.as_int().rank();
    algebraic == geometric
}

/// Exhaustive switching search: the smallest-mask vertex set W with
/// switch(o1, W) = o2, or None after trying all 2^n subsets.
pub fn brute_force_switch(o1: &Orientation, o2: &Orientation) -> Result<Option<Vec<usize>>> {
    if o1.graph() != o2.graph() {
        return Err(Error::GraphMismatch);
    }
    let n = o1.graph().order();
    if n > DEFAULT_SUPPORT_CAP {
        return Err(Error::SupportCapExceeded { m: n, cap: DEFAULT_SUPPORT_CAP });
    }
    for mask in 0u64..(1u64 << n) {
        let w: BTreeSet<usize> = (0..n).filter(|v| (mask >> v) & 1 == 1).collect();
        if switch(o1, &w)? == *o2 {
            return Ok(Some(w.into_iter().collect()));
        }
    }
    Ok(None)
}

/// All 0/1 matrices of order n whose digraph is strongly connected and has
/// at least one arc (so the period is defined), by direct enumeration of
/// the 2^(n^2) support patterns.
pub fn enumerate_irreducible_01(n: usize) -> Result<Vec<NonnegMatrix>> {
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if n > 4 {
        return Err(Error::OrderCapExceeded { n, cap: 4 });
    }
    let cells = n * n;
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << cells) {
        let m = IntMatrix::from_fn(n, |i, j| {
            if (mask >> (i * n + j)) & 1 == 1 {
                BigInt::one()
            } else {
                BigInt::from(0)
            }
        })?;
        let a = NonnegMatrix::new(m)?;
        if Digraph::from_matrix(&a).is_strongly_connected() {
            out.push(a);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signing::{construct_witness, enumerate_class};

    fn nn(rows: &[&[i64]]) -> NonnegMatrix {
        NonnegMatrix::from_i64(rows).unwrap()
    }

    #[test]
    fn signing_counts_and_order() {
        let zero = nn(&[&[0, 0], &[0, 0]]);
        assert_eq!(all_signings(&zero).unwrap().len(), 1);

        let swap = nn(&[&[0, 1], &[1, 0]]);
        let all = all_signings(&swap).unwrap();
        assert_eq!(all.len(), 4);
        let vectors: Vec<Vec<Sign>> = all.iter().map(Signing::sign_vector).collect();
        assert_eq!(
            vectors,
            vec![
                vec![Sign::Plus, Sign::Plus],
                vec![Sign::Plus, Sign::Minus],
                vec![Sign::Minus, Sign::Plus],
                vec![Sign::Minus, Sign::Minus],
            ]
        );
    }

    #[test]
    fn support_cap_is_enforced() {
        let row: &[i64] = &[1, 1, 1, 1, 1];
        let dense = nn(&[row; 5]);
        assert!(matches!(
            all_signings(&dense),
            Err(Error::SupportCapExceeded { m: 25, cap: 16 })
        ));
    }

    #[test]
    fn brute_force_m_on_the_swap_matrix() {
        let a = nn(&[&[0, 1], &[1, 0]]);
        let m1 = brute_force_m(&a, 1).unwrap();
        let realized: BTreeSet<IntMatrix> = m1.iter().map(Signing::realize).collect();
        let want: BTreeSet<IntMatrix> = [
            IntMatrix::from_i64(&[&[0, 1], &[-1, 0]]).unwrap(),
            IntMatrix::from_i64(&[&[0, -1], &[1, 0]]).unwrap(),
        ]
        .into_iter()
        .collect();
        assert_eq!(realized, want);

        let m0 = brute_force_m(&a, 0).unwrap();
        let realized0: BTreeSet<IntMatrix> = m0.iter().map(Signing::realize).collect();
        let want0: BTreeSet<IntMatrix> = [
            IntMatrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap(),
            IntMatrix::from_i64(&[&[0, -1], &[-1, 0]]).unwrap(),
        ]
        .into_iter()
        .collect();
        assert_eq!(realized0, want0);
    }

    #[test]
    fn directed_four_cycle_quarter_turn_class_size() {
        // sp(A) = 4th roots of unity; rotating by e^(i*pi*2/4) = i maps the
        // multiset to itself, so k = 2 keeps the class of A: 2^{4-1} members.
        let c4 = nn(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0]]);
        assert_eq!(all_signings(&c4).unwrap().len(), 16);
        assert_eq!(brute_force_m(&c4, 2).unwrap().len(), 8);
    }

    #[test]
    fn aperiodic_odd_class_is_the_negation_class() {
        let a = nn(&[&[1, 1], &[1, 1]]);
        let m = brute_force_m(&a, 1).unwrap();
        let class: BTreeSet<Signing> =
            enumerate_class(&Signing::all_minus(a.clone())).unwrap().into_iter().collect();
        assert_eq!(m, class);
    }

    #[test]
    fn brute_force_agrees_with_class_enumeration_on_small_cases() {
        for a in [
            nn(&[&[0, 1], &[1, 0]]),
            nn(&[&[1, 1], &[1, 0]]),
            nn(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]),
            nn(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]),
        ] {
            let p = Digraph::from_matrix(&a).period().unwrap();
            for k in 0..2 * p {
                let brute = brute_force_m(&a, k).unwrap();
                let class: BTreeSet<Signing> = enumerate_class(&construct_witness(&a, k).unwrap())
                    .unwrap()
                    .into_iter()
                    .collect();
                assert_eq!(brute, class, "matrix {}, k = {k}", a.as_int());
            }
        }
    }

    #[test]
    fn cycle_gcd_examples() {
        let two = Digraph::from_arcs(2, vec![(0, 1), (1, 0)]).unwrap();
        assert_eq!(all_simple_cycles_gcd(&two).unwrap(), 2);

        // 2-cycle and 3-cycle sharing vertex 0.
        let eight = Digraph::from_arcs(4, vec![(0, 1), (1, 0), (0, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(all_simple_cycles_gcd(&eight).unwrap(), 1);

        let caps = Digraph::from_arcs(9, (0..9).map(|i| (i, (i + 1) % 9)).collect()).unwrap();
        assert!(matches!(
            all_simple_cycles_gcd(&caps),
            Err(Error::CycleCapExceeded { n: 9, cap: 8 })
        ));

        let lonely = Digraph::from_arcs(1, vec![]).unwrap();
        assert!(matches!(all_simple_cycles_gcd(&lonely), Err(Error::NoClosedPath)));
    }

    #[test]
    fn cycle_gcd_matches_period_on_random_digraphs() {
        for seed in 0..60u64 {
            let n = 2 + (seed as usize % 5);
            let p = 1 + seed % n.min(3) as u64;
            let a = random_irreducible(n, p, seed).unwrap();
            let d = Digraph::from_matrix(&a);
            assert_eq!(d.period().unwrap(), all_simple_cycles_gcd(&d).unwrap(), "seed {seed}");
        }
    }

    #[test]
    fn random_irreducible_small_shapes() {
        // n = p = 3 leaves no room for extra arcs: a relabelled 3-cycle.
        let a = random_irreducible(3, 3, 7).unwrap();
        assert_eq!(a.support().len(), 3);
        assert_eq!(Digraph::from_matrix(&a).period().unwrap(), 3);

        let c = random_irreducible(1, 1, 11).unwrap();
        let v = c.get(0, 0);
        assert!(*v >= BigInt::one() && *v <= BigInt::from(3));

        random_irreducible(6, 2, 42).unwrap();
    }

    #[test]
    fn random_irreducible_is_deterministic_and_validates() {
        assert_eq!(random_irreducible(5, 2, 9).unwrap(), random_irreducible(5, 2, 9).unwrap());
        assert_ne!(random_irreducible(5, 2, 9).unwrap(), random_irreducible(5, 2, 10).unwrap());
        assert!(matches!(
            random_irreducible(3, 4, 0),
            Err(Error::InfeasiblePeriod { p: 4, n: 3 })
        ));
        assert!(matches!(random_irreducible(3, 0, 0), Err(Error::InfeasiblePeriod { .. })));
    }

    #[test]
    fn switching_brute_force_agrees_with_decision() {
        use crate::orient::{switching_equivalent, Graph};
        let g = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let o1 = Orientation::new(g.clone(), vec![true, true, false, true]).unwrap();
        for mask in 0..16u64 {
            let w: BTreeSet<usize> = (0..4).filter(|v| (mask >> v) & 1 == 1).collect();
            let o2 = switch(&o1, &w).unwrap();
            let decided = switching_equivalent(&o1, &o2).unwrap();
            let brute = brute_force_switch(&o1, &o2).unwrap();
            assert!(decided.is_some());
            assert!(brute.is_some());
            let ws: BTreeSet<usize> = decided.unwrap().into_iter().collect();
            assert_eq!(switch(&o1, &ws).unwrap(), o2);
        }
    }

    #[test]
    fn irreducible_01_counts() {
        assert_eq!(enumerate_irreducible_01(1).unwrap().len(), 1);
        assert_eq!(enumerate_irreducible_01(2).unwrap().len(), 4);
        assert_eq!(enumerate_irreducible_01(3).unwrap().len(), 144);
        assert!(enumerate_irreducible_01(5).is_err());
    }
}
