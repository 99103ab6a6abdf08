//! Factor, cyclic, abelian and Lie complexity by brute force on prefixes,
//! together with conjugacy canonicalization and power detection.

mod factors;
mod powers;
mod rotation;
mod rows;

pub use factors::{abelian_complexity, cyclic_complexity, factor_set, full_classes, lie_complexity, FactorSet};
pub use powers::{per_w_estimate, scan_powers, unbounded_exponent_scan};
pub use rotation::{count_occurrences, is_primitive, least_rotation, least_rotation_start, primitive_root, rotate};
pub use rows::{complexity_row, complexity_rows, saturated_factor_set, theorem1_margin, ComplexityRow};

use thiserror::Error;

use crate::word::WordError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexityError {
    #[error("EmptyWord: operation needs a nonempty word")]
    EmptyWord,
    #[error("LengthExceedsPrefix: length {n} exceeds prefix length {len}")]
    LengthExceedsPrefix { n: usize, len: usize },
    #[error("WindowTooSmall: window {window} shorter than {needed}")]
    WindowTooSmall { window: usize, needed: usize },
    #[error("exponent must be at least 2, got {0}")]
    BadExponent(usize),
    #[error("UncertifiedData: row n={0} comes from a heuristic window")]
    UncertifiedData(usize),
    #[error(transparent)]
    Word(#[from] WordError),
}
