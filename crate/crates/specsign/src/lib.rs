//! Signings of irreducible nonnegative integer matrices.
//!
//! A signing of a nonnegative matrix A keeps the zero pattern and flips
//! the signs of some entries.  This crate answers, exactly and over the
//! integers, which spectra such signings can have: the admissible
//! spectrum rotations for A (determined by the period of its digraph),
//! explicit witnesses for each rotation, membership and
//! diagonal-similarity decisions, and the same machinery specialised to
//! orientations of undirected graphs, where the rotation by i
//! characterises bipartiteness and diagonal similarity becomes switching
//! equivalence.
//!
//! Module map:
//!
//! - [`matrix`]: exact integer matrices, sign diagonals, permutations.
//! - [`digraph`]: strong connectivity, period, cyclic normal form.
//! - [`spectrum`]: characteristic polynomials, rotation tests, numeric
//!   eigenvalues for cross-checks.
//! - [`signing`]: admissible rotations, witness construction, membership,
//!   similarity classes.
//! - [`orient`]: graphs, orientations, bipartitions, switching.
//! - [`oracle`]: brute-force re-implementations used only for testing.
//! - [`verify`]: the randomized self-check harness.
//! - [`io`]: text and JSON formats.

pub mod digraph;
pub mod error;
pub mod io;
pub mod matrix;
pub mod oracle;
pub mod orient;
pub mod signing;
pub mod spectrum;
pub mod verify;

pub use digraph::{CyclicStructure, Digraph};
pub use error::{Error, Result};
pub use matrix::{
    conjugate_diag, conjugate_perm, IntMatrix, NonnegMatrix, Permutation, Sign, SignDiagonal,
};
pub use orient::{
    bipartition_of, canonical_orientation, has_i_spectrum_orientation, switch,
    switching_equivalent, Bipartition, Graph, Orientation,
};
pub use signing::{
    admissible_alphas, analyze, construct_witness, decide_diag_similar, enumerate_class,
    membership, AnalysisReport, Signing,
};
pub use spectrum::{
    char_poly, multiset_match, numeric_spectrum, rotation_check, CharPoly, NumericSpectrum,
    RotationFactor, DEFAULT_SPECTRUM_TOLERANCE,
};
