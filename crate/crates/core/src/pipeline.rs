//! From a DFAO for `w` to a DFAO for `n -> L_w(n)`.

use thiserror::Error;

use crate::counting::{
    counting_representation, eval_dfao, sup_value, to_dfao, CountingError, LinearRepresentation, DEFAULT_DFAO_CAP,
};
use crate::logic::{build_predicate_library, LogicError, PredicateLibrary};
use crate::word::Dfao;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Counting(#[from] CountingError),
}

#[derive(Clone, Debug)]
pub struct LiePipeline {
    pub library: PredicateLibrary,
    pub representation: LinearRepresentation,
    pub minimized: LinearRepresentation,
    /// Computes `L_w(n)` on canonical base-`k` representations of `n`.
    pub dfao: Dfao,
}

impl LiePipeline {
    pub fn value(&self, n: u64) -> u64 {
        eval_dfao(&self.dfao, n)
    }

    pub fn sup(&self) -> u64 {
        sup_value(&self.dfao)
    }
}

/// Compile the predicates for `d`, count `lie(i, n)` over `i`, and turn the
/// bounded counting sequence into a DFAO.
pub fn lie_pipeline(d: &Dfao) -> Result<LiePipeline, PipelineError> {
    let library = build_predicate_library(d)?;
    let representation = counting_representation(library.lie())?;
    let minimized = representation.minimize();
    let dfao = to_dfao(&minimized, DEFAULT_DFAO_CAP)?;
    Ok(LiePipeline { library, representation, minimized, dfao })
}
