use std::collections::BTreeMap;

use super::compile::{Compiler, Env};
use super::parser::FormulaFile;
use super::LogicError;
use crate::automata::MultiTrackDfa;
use crate::word::Dfao;

/// The bundled definitions, with the sequence called `W`.
pub const LIE_FOL: &str = include_str!("../../data/lie.fol");

pub const PREDICATE_NAMES: [&str; 8] =
    ["factoreq", "shift", "conj", "lessthan", "lessthaneq", "allconj", "lexleast", "lie"];

/// Compiled definitions of [`LIE_FOL`] for one sequence.
#[derive(Clone, Debug)]
pub struct PredicateLibrary {
    pub file: FormulaFile,
    automata: BTreeMap<String, MultiTrackDfa>,
    /// Largest intermediate automaton met while compiling.
    pub peak_states: usize,
}

impl PredicateLibrary {
    pub fn get(&self, name: &str) -> Option<&MultiTrackDfa> {
        self.automata.get(name)
    }

    pub fn params(&self, name: &str) -> Option<&[String]> {
        self.file.definitions.get(name).map(|m| m.params.as_slice())
    }

    pub fn lie(&self) -> &MultiTrackDfa {
        &self.automata["lie"]
    }

    /// Evaluate a predicate on named arguments.
    pub fn holds(&self, name: &str, args: &[(&str, u64)]) -> Result<bool, LogicError> {
        let a = self.get(name).ok_or_else(|| LogicError::UnknownMacro { name: name.to_string(), line: 0, col: 0 })?;
        Ok(a.accepts_named(args)?)
    }
}

/// Compile every definition of `text` against `env`, each over its parameter
/// tracks.
pub fn compile_definitions(text: &str, env: &Env) -> Result<PredicateLibrary, LogicError> {
    let file = FormulaFile::parse(text)?;
    let mut compiler = Compiler::new(env);
    let mut automata = BTreeMap::new();
    for name in &file.order {
        let m = &file.definitions[name];
        let a = compiler.compile(&m.body)?;
        let a = a.cylindrify(&m.params)?;
        automata.insert(name.clone(), a);
    }
    let peak_states = compiler.peak_states;
    Ok(PredicateLibrary { file, automata, peak_states })
}

/// The eight predicates for the sequence `d`.
pub fn build_predicate_library(d: &Dfao) -> Result<PredicateLibrary, LogicError> {
    compile_definitions(LIE_FOL, &Env::single(d))
}
