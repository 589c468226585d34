//! Randomized/exhaustive self-check harness behind the `verify` CLI
//! command.  Each property compares a fast implementation against an
//! independent oracle and reports counterexamples as reproducible text.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::digraph::Digraph;
use crate::error::Result;
use crate::matrix::{conjugate_diag, Sign, SignDiagonal};
use crate::oracle;
use crate::signing::{construct_witness, decide_diag_similar, enumerate_class_capped, Signing};
use crate::spectrum::{char_poly, rotation_check, CharPoly, RotationFactor};

/// Deliberate bugs the harness can plant in its own checking loop, to
/// demonstrate that the properties actually have teeth.  The library code
/// under test is never touched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FaultInjection {
    #[default]
    None,
    /// Invert the rotation test outcome whenever k is odd.
    FlipOddRotation,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Largest matrix order exercised.  Exhaustive sweeps clamp to 4.
    pub max_order: usize,
    /// Random trials per property.
    pub trials: u64,
    pub seed: u64,
    /// Sweep every irreducible 0/1 matrix up to min(max_order, 4) instead
    /// of sampling.
    pub exhaustive: bool,
    /// Largest support size swept exhaustively (2^m signings).
    pub support_cap: usize,
    /// Largest order whose similarity class is enumerated (2^{n-1} members).
    pub class_cap: usize,
    pub fault: FaultInjection,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            max_order: 4,
            trials: 25,
            seed: 1,
            exhaustive: false,
            support_cap: oracle::DEFAULT_SUPPORT_CAP,
            class_cap: crate::signing::DEFAULT_CLASS_ENUM_CAP,
            fault: FaultInjection::None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PropertyResult {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    /// First failing case, rendered as reproducible text.
    pub counterexample: Option<String>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub properties: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(PropertyResult::passed)
    }
}

pub fn run_verify(config: &VerifyConfig) -> Result<VerifyReport> {
    let properties = vec![
        check_class_agreement(config)?,
        check_witness_rotations(config)?,
        check_similarity_round_trip(config)?,
        check_period_oracle(config)?,
    ];
    Ok(VerifyReport { properties })
}

fn checked_rotation(
    base: &CharPoly,
    candidate: &CharPoly,
    rot: &RotationFactor,
    fault: FaultInjection,
) -> Result<bool> {
    let out = rotation_check(base, candidate, rot)?;
    Ok(match fault {
        FaultInjection::FlipOddRotation if rot.k() % 2 == 1 => !out,
        _ => out,
    })
}

fn sample_matrices(config: &VerifyConfig, cap: usize) -> Result<Vec<crate::matrix::NonnegMatrix>> {
    let top = config.max_order.clamp(1, cap);
    if config.exhaustive {
        let mut out = Vec::new();
        for n in 1..=top.min(4) {
            out.extend(oracle::enumerate_irreducible_01(n)?);
        }
        Ok(out)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut out = Vec::with_capacity(config.trials as usize);
        for _ in 0..config.trials {
            let n = rng.gen_range(1..=top);
            let p = rng.gen_range(1..=n.min(4)) as u64;
            out.push(oracle::random_irreducible(n, p, rng.gen())?);
        }
        Ok(out)
    }
}

/// For every sampled A and every k in 0..2p, the signings passing the
/// rotation test must be exactly the diagonal-similarity class of the
/// constructed witness.
fn check_class_agreement(config: &VerifyConfig) -> Result<PropertyResult> {
    let matrices = sample_matrices(config, 4)?;
    let fault = config.fault;
    let per_matrix: Vec<Result<(u64, u64, Option<String>)>> = matrices
        .par_iter()
        .map(|a| {
            let p = Digraph::from_matrix(a).period()?;
            let pa = char_poly(a.as_int());
            let polys: Vec<(Signing, CharPoly)> = oracle::all_signings_capped(a, config.support_cap)?
                .into_iter()
                .map(|s| {
                    let poly = char_poly(&s.realize());
                    (s, poly)
                })
                .collect();
            let mut cases = 0;
            let mut failures = 0;
            let mut counterexample = None;
            for k in 0..2 * p {
                let rot = RotationFactor::new(k, p)?;
                let mut got = BTreeSet::new();
                for (s, pb) in &polys {
                    if checked_rotation(&pa, pb, &rot, fault)? {
                        got.insert(s.clone());
                    }
                }
                let want: BTreeSet<Signing> =
                    enumerate_class_capped(&construct_witness(a, k)?, config.class_cap)?
                        .into_iter()
                        .collect();
                cases += 1;
                if got != want {
                    failures += 1;
                    if counterexample.is_none() {
                        counterexample = Some(format!(
                            "A =\n{}\nk = {k}: rotation test admits {} signings, witness class has {}",
                            a.as_int(),
                            got.len(),
                            want.len(),
                        ));
                    }
                }
            }
            Ok((cases, failures, counterexample))
        })
        .collect();

    let mut result =
        PropertyResult { name: "class-agreement", cases: 0, failures: 0, counterexample: None };
    for r in per_matrix {
        let (cases, failures, cex) = r?;
        result.cases += cases;
        result.failures += failures;
        if result.counterexample.is_none() {
            result.counterexample = cex;
        }
    }
    Ok(result)
}

/// Every constructed witness must pass the exact rotation test for its k.
fn check_witness_rotations(config: &VerifyConfig) -> Result<PropertyResult> {
    let matrices = sample_matrices(config, 8)?;
    let mut result =
        PropertyResult { name: "witness-rotation", cases: 0, failures: 0, counterexample: None };
    for a in &matrices {
        let p = Digraph::from_matrix(a).period()?;
        let pa = char_poly(a.as_int());
        for k in 0..2 * p {
            let w = construct_witness(a, k)?;
            let rot = RotationFactor::new(k, p)?;
            result.cases += 1;
            if !rotation_check(&pa, &char_poly(&w.realize()), &rot)? {
                result.failures += 1;
                if result.counterexample.is_none() {
                    result.counterexample =
                        Some(format!("A =\n{}\nwitness for k = {k} fails its rotation", a.as_int()));
                }
            }
        }
    }
    Ok(result)
}

/// Conjugating a random signing by a random diagonal and asking for the
/// diagonal back must return the original up to global negation.
fn check_similarity_round_trip(config: &VerifyConfig) -> Result<PropertyResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(1));
    let mut result =
        PropertyResult { name: "similarity-round-trip", cases: 0, failures: 0, counterexample: None };
    let top = config.max_order.clamp(1, 10);
    for _ in 0..config.trials {
        let n = rng.gen_range(1..=top);
        let p = rng.gen_range(1..=n.min(4)) as u64;
        let a = oracle::random_irreducible(n, p, rng.gen())?;
        let signs: Vec<Sign> = (0..a.support().len())
            .map(|_| if rng.gen_bool(0.5) { Sign::Minus } else { Sign::Plus })
            .collect();
        let b = Signing::new(
            a.clone(),
            a.support().into_iter().zip(signs).collect(),
        )?;
        let delta = SignDiagonal::new(
            (0..n).map(|_| if rng.gen_bool(0.5) { Sign::Minus } else { Sign::Plus }).collect(),
        )?;
        let realized = b.realize();
        let conjugated = conjugate_diag(&realized, &delta)?;
        let b2 = Signing::from_matrix(&conjugated);
        result.cases += 1;
        let found = decide_diag_similar(&b, &b2)?;
        let ok = match &found {
            Some(d) => *d == delta.normalized() || *d == delta.negated().normalized(),
            None => false,
        };
        if !ok {
            result.failures += 1;
            if result.counterexample.is_none() {
                result.counterexample = Some(format!(
                    "B =\n{realized}\ndiagonal {:?} not recovered (got {:?})",
                    delta.signs(),
                    found.map(|d| d.signs().to_vec()),
                ));
            }
        }
    }
    Ok(result)
}

/// The BFS-level period must equal the gcd of all simple cycle lengths.
fn check_period_oracle(config: &VerifyConfig) -> Result<PropertyResult> {
    let mut result =
        PropertyResult { name: "period-oracle", cases: 0, failures: 0, counterexample: None };
    let record = |d: &Digraph, label: &str, result: &mut PropertyResult| -> Result<()> {
        result.cases += 1;
        let fast = d.period()?;
        let slow = oracle::all_simple_cycles_gcd(d)?;
        if fast != slow {
            result.failures += 1;
            if result.counterexample.is_none() {
                result.counterexample =
                    Some(format!("{label}: period {fast} but cycle gcd {slow}"));
            }
        }
        Ok(())
    };
    if config.exhaustive {
        let top = config.max_order.clamp(1, 4);
        for n in 1..=top {
            for a in oracle::enumerate_irreducible_01(n)? {
                let d = Digraph::from_matrix(&a);
                record(&d, &format!("matrix\n{}", a.as_int()), &mut result)?;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(2));
        let top = config.max_order.clamp(1, 8);
        for _ in 0..config.trials {
            let n = rng.gen_range(1..=top);
            let p = rng.gen_range(1..=n.min(4)) as u64;
            let seed = rng.gen();
            let a = oracle::random_irreducible(n, p, seed)?;
            record(
                &Digraph::from_matrix(&a),
                &format!("random matrix (n = {n}, p = {p}, seed = {seed})"),
                &mut result,
            )?;
        }
    }
    Ok(result)
}
