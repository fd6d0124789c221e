//! Workbench for fixed-point semantics of self-referential truth over finite
//! sentence pools.
//!
//! A *sentence pool* is a finite, closure-complete family of sentences in a
//! truth-predicate language over bounded arithmetic, each carrying a numeric
//! code drawn from the pool's domain. Self-reference is syntactic: a named
//! sentence may mention its own (or a sibling's) code, so the truth-teller
//! literally is `Tr(n̄)` for its own `n`. On top of the pools the crate builds:
//!
//! * classical and Strong Kleene satisfaction relative to a truth set,
//! * a family of jump operators (one-step Strong Kleene, supervaluational
//!   SV/VB/VC/MC, consequence-based SSK, and the provability-widened Θ family),
//! * fixed-point search, classification, and intrinsic-set machinery,
//! * model checking for the compositional axiom systems IT/IT⁻/IT*/IT*c/IT*mc
//!   and the disquotational systems PK/PK⁺, with categoricity sweeps that
//!   compare fixed-point equations against axiom satisfaction subset by subset,
//! * a finite-width Tait-style sequent prover whose derivable singletons
//!   coincide with the minimal Θ fixed point on bundled pools.
//!
//! The `truthpoint` binary exposes all of it as a CLI; bundled example pools
//! live in [`pools`].

pub mod axioms;
pub mod cli;
pub mod consequence;
pub mod fixpoint;
pub mod jumps;
pub mod model;
pub mod pools;
pub mod prover;
pub mod report;
pub mod schemes;
pub mod set;
pub mod syntax;
