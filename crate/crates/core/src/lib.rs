//! Exhaustive proof search for intuitionistic implicational logic.
//!
//! The search space of a sequent `Γ ⇒ A` is described three ways:
//!
//! * [`lambda_bar`]: individual cut-free proofs, with the typing rules and a
//!   brute-force enumerator used as a reference.
//! * [`forest`]: the coinductive solution space, rendered as fuel-bounded
//!   truncations, together with co-contraction.
//! * [`finitary`]: a finite term with sequent-annotated fixed points whose
//!   interpretation ([`semantics`]) is the solution space.
//!
//! [`analysis`] decides inhabitation and solvability and lists inhabitants
//! working directly on the finite term.

pub mod analysis;
pub mod cli;
pub mod corpus;
pub mod finitary;
pub mod forest;
pub mod lambda_bar;
pub mod parse;
pub mod semantics;
pub mod syntax;
pub mod ternary;
pub mod tree;

pub use analysis::{count_members, decide, decide_finite, decide_inhabited, decide_solvable, enumerate_members, Verdict};
pub use finitary::{represent, FinAlt, FinTerm, FpContext};
pub use forest::{bisim_upto, cocontract, expand, mem, EAlt, Forest};
pub use lambda_bar::{enumerate_proofs, typecheck, ProofTerm};
pub use parse::{parse_fin_term, parse_forest, parse_formula, parse_proof_term, parse_sequent, ParseError};
pub use semantics::{check_equivalence, interpret, Environment};
pub use syntax::{Atom, Context, Formula, Sequent, StrippedSequent, Var};
pub use ternary::Ternary;
