//! Exact arithmetic on the boundary of the dyadic tree.
//!
//! Points of the boundary are eventually periodic infinite binary words,
//! represented exactly. On top of them the crate provides:
//!
//! * the ultrametric distance and cylinder enumeration ([`words`]),
//! * finite-state synchronous (Mealy) and asynchronous transducers with
//!   evaluation, sections, composition, inversion and isometry checks
//!   ([`automata`]),
//! * dilatation structures presented by window-bounded tables of
//!   isometries, with the scaled difference/sum/inverse operators and
//!   stabilization detection ([`dilatation`]),
//! * exhaustive finite-depth checkers for the dilatation axioms, with
//!   counterexample witnesses ([`verify`]),
//! * a line-oriented workspace file format and a CLI ([`workspace`],
//!   [`cli`]).
//!
//! Every quantity is a word or a (possibly zero) power of two; all
//! comparisons in the crate are exact.

pub mod automata;
pub mod cli;
pub mod dilatation;
pub mod verify;
pub mod words;
pub mod workspace;
