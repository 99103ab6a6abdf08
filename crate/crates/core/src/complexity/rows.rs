use serde::Serialize;

use super::factors::{abelian_complexity, cyclic_complexity, lie_complexity, FactorSet};
use super::ComplexityError;
use crate::word::Saturator;

/// One line of the complexity table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexityRow {
    pub n: usize,
    pub p: usize,
    pub c: usize,
    pub a: usize,
    #[serde(rename = "L")]
    pub lie: usize,
    pub certified: bool,
}

impl ComplexityRow {
    pub fn from_factors(fs: &FactorSet) -> Self {
        ComplexityRow {
            n: fs.n,
            p: fs.len(),
            c: cyclic_complexity(fs),
            a: abelian_complexity(fs),
            lie: lie_complexity(fs),
            certified: fs.certified,
        }
    }

    pub const TSV_HEADER: &'static str = "n\tp\tc\ta\tL\tcertified";

    pub fn tsv(&self) -> String {
        format!("{}\t{}\t{}\t{}\t{}\t{}", self.n, self.p, self.c, self.a, self.lie, self.certified)
    }
}

/// Factor set of length `n` on the saturation window for `n`.
pub fn saturated_factor_set(sat: &mut Saturator, n: usize) -> Result<FactorSet, ComplexityError> {
    let w = sat.window(n)?;
    FactorSet::from_letters(sat.letters(w.window), n, w.certified)
}

pub fn complexity_row(sat: &mut Saturator, n: usize) -> Result<ComplexityRow, ComplexityError> {
    Ok(ComplexityRow::from_factors(&saturated_factor_set(sat, n)?))
}

pub fn complexity_rows(
    sat: &mut Saturator,
    range: impl IntoIterator<Item = usize>,
) -> Result<Vec<ComplexityRow>, ComplexityError> {
    range.into_iter().map(|n| complexity_row(sat, n)).collect()
}

/// `p(n) - p(n-1) + 1 - L(n)`; nonnegative on certified data.
///
/// With `strict`, uncertified rows are refused rather than measured.
pub fn theorem1_margin(
    row: &ComplexityRow,
    prev_p: usize,
    prev_certified: bool,
    strict: bool,
) -> Result<i64, ComplexityError> {
    if row.n == 0 {
        return Err(ComplexityError::LengthExceedsPrefix { n: 0, len: 0 });
    }
    if strict && !(row.certified && prev_certified) {
        return Err(ComplexityError::UncertifiedData(row.n));
    }
    Ok(row.p as i64 - prev_p as i64 + 1 - row.lie as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{Bundled, SaturationConfig};

    fn row(n: usize, p: usize, lie: usize, certified: bool) -> ComplexityRow {
        ComplexityRow { n, p, c: 0, a: 0, lie, certified }
    }

    #[test]
    fn margin_examples() {
        assert_eq!(theorem1_margin(&row(5, 6, 1, true), 5, true, true).unwrap(), 1);
        assert_eq!(theorem1_margin(&row(2, 4, 3, true), 2, true, true).unwrap(), 0);
        // d letters, all length-1 classes full: d - 1 + 1 - d.
        assert_eq!(theorem1_margin(&row(1, 3, 3, true), 1, true, true).unwrap(), 0);
    }

    #[test]
    fn strict_refuses_heuristic_rows() {
        assert_eq!(theorem1_margin(&row(4, 5, 3, false), 4, true, true), Err(ComplexityError::UncertifiedData(4)));
        assert_eq!(theorem1_margin(&row(4, 5, 3, false), 4, true, false).unwrap(), -1);
    }

    #[test]
    fn thue_morse_table_start() {
        let mut sat = Saturator::new(Bundled::ThueMorse.generator(), SaturationConfig::default());
        let rows = complexity_rows(&mut sat, 0..=5).unwrap();
        let lie: Vec<usize> = rows.iter().map(|r| r.lie).collect();
        assert_eq!(lie, vec![1, 2, 3, 2, 2, 0]);
        let p: Vec<usize> = rows.iter().map(|r| r.p).collect();
        assert_eq!(p, vec![1, 2, 4, 6, 10, 12]);
        assert!(rows.iter().all(|r| r.certified));
        assert_eq!(rows[2].tsv(), "2\t4\t3\t3\t3\ttrue");
    }

    #[test]
    fn json_field_names() {
        let j = serde_json::to_string(&row(2, 4, 3, true)).unwrap();
        assert_eq!(j, r#"{"n":2,"p":4,"c":0,"a":0,"L":3,"certified":true}"#);
    }
}
