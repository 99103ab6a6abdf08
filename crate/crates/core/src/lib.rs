//! Lie complexity of infinite words.
//!
//! The Lie complexity `L(n)` of an infinite word counts the conjugacy
//! classes of length-`n` words all of whose rotations are factors of the
//! word. This crate computes it three independent ways:
//!
//! * by brute force on stabilized prefixes ([`complexity`]),
//! * as a codimension in the factor algebra ([`algebra`]),
//! * for automatic words, through a first-order formula compiled to
//!   automata ([`logic`], [`automata`]) whose counting sequence is turned
//!   back into an automatic sequence ([`counting`], [`pipeline`]).
//!
//! [`golden`] holds the published closed forms for the bundled words, and
//! [`construction`] builds words of slowly growing complexity with
//! infinitely many unbounded-exponent primitive factors.

pub mod algebra;
pub mod automata;
pub mod complexity;
pub mod construction;
pub mod counting;
pub mod golden;
pub mod linalg;
pub mod logic;
pub mod numeration;
pub mod pipeline;
pub mod word;
