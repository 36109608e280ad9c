//! Exact finitized branching functions of the coset `sl(n)_1 ⊗ sl(n)_1 / sl(n)_2`.
//!
//! The crate builds the combinatorial objects behind these functions and
//! checks the resulting polynomial identities with exact arithmetic. The
//! objects are weighted paths, K-graphs, parents and g-components.
//!
//! * [`weights`]: affine weight lattice, invariant form, Weyl group action.
//! * [`qseries`]: polynomials in `q` with rational exponents, q-binomials.
//! * [`paths`]: level-2 paths, step sequences, energies, brute-force `B_L`.
//! * [`kgraphs`]: the path to K-graph dictionary, admissibility, brute-force `F_L`.
//! * [`sectors`]: parents, candidates, vacancies, reduction and generation.
//! * [`branching`]: bosonic and fermionic closed forms, identity checks.
//! * [`harness`]: grid runs and JSON reports behind the command-line tool.

pub mod branching;
pub mod harness;
pub mod kgraphs;
pub mod paths;
pub mod qseries;
pub mod sectors;
pub mod weights;

/// Exact rational numbers used for exponents and weight coordinates.
pub type Rat = num_rational::Ratio<i64>;
