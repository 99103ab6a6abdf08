//! Published closed forms for the Lie complexity of the bundled words,
//! checked against computed values.

use std::ops::RangeInclusive;

use serde::Serialize;

use crate::complexity::{complexity_row, ComplexityError};
use crate::pipeline::{lie_pipeline, PipelineError};
use crate::word::{Bundled, SaturationConfig, Saturator};

fn is_power_of(mut n: u64, b: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n.is_multiple_of(b) {
        n /= b;
    }
    n == 1
}

/// `F_0, F_1, ...` up to the first value above `limit`, with enough
/// lookback for the `F_k + F_{k-3}` sums.
fn fibonacci(limit: u64) -> Vec<u64> {
    let mut f = vec![0u64, 1];
    while *f.last().expect("nonempty") <= limit {
        let k = f.len();
        f.push(f[k - 1] + f[k - 2]);
    }
    f
}

fn tribonacci(limit: u64) -> Vec<u64> {
    let mut t = vec![0u64, 1, 1];
    while *t.last().expect("nonempty") <= limit {
        let k = t.len();
        t.push(t[k - 1] + t[k - 2] + t[k - 3]);
    }
    t
}

pub fn thue_morse(n: u64) -> u64 {
    match n {
        0 => 1,
        1 | 4 => 2,
        2 => 3,
        _ if n >= 8 && n.is_power_of_two() => 1,
        _ if n.is_multiple_of(3) && (n / 3).is_power_of_two() => 2,
        _ => 0,
    }
}

pub fn vtm(n: u64) -> u64 {
    match n {
        0 => 1,
        1 | 2 => 3,
        _ if n >= 4 && n.is_power_of_two() => 1,
        _ if n.is_multiple_of(3) && (n / 3).is_power_of_two() => 2,
        _ => 0,
    }
}

/// As published, including `n = 0`, where the count is 1 rather than 2:
/// the only length-0 class is that of the empty word.
pub fn cantor(n: u64) -> u64 {
    match n {
        4 => 3,
        0 | 1 | 3 => 2,
        _ if n.is_multiple_of(2) && is_power_of(n / 2, 3) => 2,
        _ => 1,
    }
}

pub fn fibonacci_word(n: u64) -> u64 {
    let f = fibonacci(n);
    let one = n == 0 || (4..f.len()).any(|k| f[k] == n) || (4..f.len()).any(|k| f[k] + f[k - 3] == n);
    match n {
        1 | 2 => 2,
        _ if one => 1,
        _ => 0,
    }
}

pub fn tribonacci_word(n: u64) -> u64 {
    let t = tribonacci(n);
    let one = n == 0
        || (5..t.len()).any(|k| t[k] == n)
        || (3..t.len()).any(|k| t[k] + t[k - 1] == n)
        || (5..t.len()).any(|k| t[k] + t[k - 4] == n);
    match n {
        1 | 2 => 3,
        4 => 2,
        _ if one => 1,
        _ => 0,
    }
}

/// The published value of `L(n)`, or `None` where nothing is claimed.
pub fn closed_form(word: Bundled, n: u64) -> Option<u64> {
    match word {
        Bundled::ThueMorse => Some(thue_morse(n)),
        Bundled::Vtm => Some(vtm(n)),
        Bundled::Cantor => Some(cantor(n)),
        Bundled::Fibonacci => Some(fibonacci_word(n)),
        Bundled::Tribonacci => Some(tribonacci_word(n)),
        Bundled::Example6 => (n >= 2).then_some(0),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    BruteForce,
    Pipeline,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenCase {
    pub word: Bundled,
    pub method: Method,
    pub range: RangeInclusive<u64>,
}

/// The declared checks: the pipeline on the automatic words whose
/// predicates compile quickly, brute force everywhere.
pub fn golden_cases() -> Vec<GoldenCase> {
    let case = |word, method, range| GoldenCase { word, method, range };
    vec![
        case(Bundled::ThueMorse, Method::BruteForce, 0..=64),
        case(Bundled::ThueMorse, Method::Pipeline, 0..=256),
        case(Bundled::Vtm, Method::BruteForce, 0..=50),
        case(Bundled::Vtm, Method::Pipeline, 0..=256),
        case(Bundled::Cantor, Method::BruteForce, 1..=50),
        case(Bundled::Cantor, Method::Pipeline, 1..=50),
        case(Bundled::Fibonacci, Method::BruteForce, 0..=50),
        case(Bundled::Tribonacci, Method::BruteForce, 0..=50),
        case(Bundled::Example6, Method::BruteForce, 2..=40),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoldenRow {
    pub word: &'static str,
    pub method: Method,
    pub n: u64,
    pub expected: u64,
    pub computed: u64,
    pub certified: bool,
    /// Whether the row takes part in the verdict.
    pub counted: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseVerdict {
    pub word: &'static str,
    pub method: Method,
    pub range: String,
    pub checked: usize,
    pub failed: usize,
    /// Only uncertified rows: no verdict.
    pub inconclusive: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GoldenReport {
    pub rows: Vec<GoldenRow>,
    pub cases: Vec<CaseVerdict>,
    pub errors: Vec<String>,
}

impl GoldenReport {
    pub fn pass(&self) -> bool {
        self.errors.is_empty() && self.cases.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct GoldenConfig {
    pub saturation: SaturationConfig,
    /// Let rows from heuristic windows decide pass or fail.
    pub allow_heuristic: bool,
}

#[derive(Debug, thiserror::Error)]
enum CaseError {
    #[error(transparent)]
    Complexity(#[from] ComplexityError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error("no DFAO for {0}")]
    NotAutomatic(&'static str),
}

fn computed_values(case: &GoldenCase, config: &GoldenConfig) -> Result<Vec<(u64, u64, bool)>, CaseError> {
    match case.method {
        Method::BruteForce => {
            let mut sat = Saturator::new(case.word.generator(), config.saturation);
            case.range
                .clone()
                .map(|n| {
                    let row = complexity_row(&mut sat, n as usize)?;
                    Ok((n, row.lie as u64, row.certified))
                })
                .collect()
        }
        Method::Pipeline => {
            let d = case.word.dfao().ok_or(CaseError::NotAutomatic(case.word.name()))?;
            let p = lie_pipeline(&d)?;
            Ok(case.range.clone().map(|n| (n, p.value(n), true)).collect())
        }
    }
}

pub fn run_case(case: &GoldenCase, config: &GoldenConfig, report: &mut GoldenReport) {
    let word = case.word.name();
    let values = match computed_values(case, config) {
        Ok(v) => v,
        Err(e) => {
            report.errors.push(format!("{word} ({:?}): {e}", case.method));
            return;
        }
    };
    let (mut checked, mut failed) = (0, 0);
    for (n, computed, certified) in values {
        let Some(expected) = closed_form(case.word, n) else { continue };
        let counted = certified || config.allow_heuristic;
        let pass = expected == computed;
        if counted {
            checked += 1;
            failed += usize::from(!pass);
        }
        report.rows.push(GoldenRow { word, method: case.method, n, expected, computed, certified, counted, pass });
    }
    report.cases.push(CaseVerdict {
        word,
        method: case.method,
        range: format!("{}..{}", case.range.start(), case.range.end()),
        checked,
        failed,
        inconclusive: checked == 0,
        pass: failed == 0,
    });
}

/// Every declared case; failures become report rows.
pub fn golden_examples(config: &GoldenConfig) -> GoldenReport {
    let mut report = GoldenReport::default();
    for case in golden_cases() {
        run_case(&case, config, &mut report);
    }
    report
}
