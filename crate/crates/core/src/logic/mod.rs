//! A first-order language over `(N, +, <, 0, 1)` with sequence indexing,
//! compiled to automata.
//!
//! Formulas are parsed with named definitions inlined, then compiled bottom
//! up: atoms become arithmetic or sequence automata, connectives become
//! products, `E` becomes projection and `A x` is `~E x ~`.

mod ast;
mod compile;
mod library;
mod parser;

pub use ast::{Formula, Term};
pub use compile::{accepted_values, compile, Compiler, Env, DEFAULT_CAP};
pub use library::{build_predicate_library, compile_definitions, PredicateLibrary, LIE_FOL, PREDICATE_NAMES};
pub use parser::{parse, parse_with, validate, Definitions, FormulaFile, Macro};

use thiserror::Error;

use crate::automata::AutomataError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("SyntaxError at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("UnboundVariable: {0}")]
    UnboundVariable(String),
    #[error("UnboundSequence: {0}")]
    UnboundSequence(String),
    #[error("unknown predicate `{name}` at line {line}, column {col}")]
    UnknownMacro { name: String, line: usize, col: usize },
    #[error("`{name}` takes {expected} arguments, got {found}")]
    Arity { name: String, expected: usize, found: usize },
    #[error("letter `{letter}` is not in the alphabet of {sequence}")]
    UnknownLetter { sequence: String, letter: String },
    #[error("CompileBlowup: intermediate automaton passed {cap} states")]
    CompileBlowup { cap: usize },
    #[error(transparent)]
    Automata(#[from] AutomataError),
}

#[cfg(test)]
mod tests;
