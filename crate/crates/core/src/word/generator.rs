use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use super::{Alphabet, Dfao, Letter, Morphism, Prefix, WordError};

/// Letter-to-letter map applied after generating a fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coding {
    pub target: Alphabet,
    pub map: Vec<Letter>,
}

/// Source of an infinite word.
#[derive(Clone, Debug)]
pub enum Generator {
    FixedPoint { name: String, morphism: Morphism, seed: Letter, coding: Option<Coding> },
    Automatic { name: String, dfao: Dfao },
}

impl Generator {
    pub fn fixed_point(name: &str, morphism: Morphism, seed: Letter) -> Result<Self, WordError> {
        if usize::from(seed) >= morphism.alphabet().len() {
            return Err(WordError::UnknownLetter(seed.to_string()));
        }
        if !morphism.is_prolongable(seed) {
            return Err(WordError::NotProlongable(morphism.alphabet().name(seed).to_string()));
        }
        Ok(Generator::FixedPoint { name: name.to_string(), morphism, seed, coding: None })
    }

    pub fn automatic(name: &str, dfao: Dfao) -> Self {
        Generator::Automatic { name: name.to_string(), dfao }
    }

    pub fn with_coding(self, coding: Coding) -> Result<Self, WordError> {
        match self {
            Generator::FixedPoint { name, morphism, seed, .. } => {
                if coding.map.len() != morphism.alphabet().len()
                    || coding.map.iter().any(|&b| usize::from(b) >= coding.target.len())
                {
                    return Err(WordError::Format("coding does not match the alphabets".into()));
                }
                Ok(Generator::FixedPoint { name, morphism, seed, coding: Some(coding) })
            }
            Generator::Automatic { .. } => Err(WordError::Format("codings apply to fixed points only".into())),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Generator::FixedPoint { name, .. } | Generator::Automatic { name, .. } => name,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Generator::FixedPoint { coding: Some(c), .. } => &c.target,
            Generator::FixedPoint { morphism, .. } => morphism.alphabet(),
            Generator::Automatic { dfao, .. } => dfao.alphabet(),
        }
    }

    /// Stabilized factor sets count as certified only for fixed points of
    /// primitive morphisms and their codings.
    pub fn is_certifiable(&self) -> bool {
        match self {
            Generator::FixedPoint { morphism, .. } => morphism.is_primitive(),
            Generator::Automatic { .. } => false,
        }
    }

    pub fn letters(&self, len: usize) -> Vec<Letter> {
        match self {
            Generator::FixedPoint { morphism, seed, coding, .. } => {
                let w = morphism.fixed_point_prefix(*seed, len).expect("seed checked prolongable at construction");
                match coding {
                    Some(c) => w.into_iter().map(|a| c.map[usize::from(a)]).collect(),
                    None => w,
                }
            }
            Generator::Automatic { dfao, .. } => dfao.prefix(len),
        }
    }

    pub fn prefix(&self, len: usize) -> Prefix {
        Prefix::new(self.letters(len), self.alphabet().clone(), format!("{} len={len}", self.name()))
    }
}

/// The words shipped with the toolkit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bundled {
    ThueMorse,
    Vtm,
    Cantor,
    Fibonacci,
    Tribonacci,
    Example6,
}

impl Bundled {
    pub const ALL: [Bundled; 6] =
        [Bundled::ThueMorse, Bundled::Vtm, Bundled::Cantor, Bundled::Fibonacci, Bundled::Tribonacci, Bundled::Example6];

    pub fn name(self) -> &'static str {
        match self {
            Bundled::ThueMorse => "thue-morse",
            Bundled::Vtm => "vtm",
            Bundled::Cantor => "cantor",
            Bundled::Fibonacci => "fibonacci",
            Bundled::Tribonacci => "tribonacci",
            Bundled::Example6 => "example6",
        }
    }

    pub fn morphism_text(self) -> &'static str {
        match self {
            Bundled::ThueMorse => "alphabet: 0 1\n0 -> 01\n1 -> 10\n",
            Bundled::Vtm => "alphabet: 0 1 2\n0 -> 1\n1 -> 20\n2 -> 210\n",
            Bundled::Cantor => "alphabet: 0 1\n0 -> 000\n1 -> 101\n",
            Bundled::Fibonacci => "alphabet: 0 1\n0 -> 01\n1 -> 0\n",
            Bundled::Tribonacci => "alphabet: 0 1 2\n0 -> 01\n1 -> 02\n2 -> 0\n",
            Bundled::Example6 => concat!(
                "alphabet: x1 x2 x3 x4 x5 x6 y1 y2 y3 y4 y5 y6\n",
                "x1 -> x1 x2 y1 y2\n",
                "x2 -> x1 x3 y1 y3\n",
                "x3 -> x1 x4 y1 y4\n",
                "x4 -> x1 x5 y1 y5\n",
                "x5 -> x1 x6 y1 y6\n",
                "x6 -> x2 x3 y2 y3\n",
                "y1 -> x2 x4 y2 y5\n",
                "y2 -> x2 x5 y3 y4\n",
                "y3 -> x2 x6 y2 y6\n",
                "y4 -> x3 x4 y3 y5\n",
                "y5 -> x3 x5 y3 y6\n",
                "y6 -> x3 x6 y4 y5\n",
            ),
        }
    }

    pub fn seed_name(self) -> &'static str {
        match self {
            Bundled::Vtm => "2",
            Bundled::Cantor => "1",
            Bundled::Example6 => "x1",
            _ => "0",
        }
    }

    pub fn morphism(self) -> Morphism {
        Morphism::parse(self.morphism_text()).expect("bundled morphism parses")
    }

    pub fn generator(self) -> Generator {
        let m = self.morphism();
        let seed = m.alphabet().letter(self.seed_name()).expect("bundled seed");
        Generator::fixed_point(self.name(), m, seed).expect("bundled seed is prolongable")
    }

    /// DFAO text for the automatic words: Thue-Morse and vtm in base 2,
    /// Cantor in base 3, the 12-letter word in base 4.
    pub fn dfao_text(self) -> Option<String> {
        match self {
            Bundled::ThueMorse => {
                Some("base: 2\nstate 0 output 0\n0 -> 0\n1 -> 1\nstate 1 output 1\n0 -> 1\n1 -> 0\n".to_string())
            }
            // State (t[m], t[m+1]) for the value m read so far; vtm[m] = t[m+1] - t[m] + 1.
            Bundled::Vtm => Some(
                concat!(
                    "base: 2\nalphabet: 0 1 2\n",
                    "state 0 output 2\n0 -> 0\n1 -> 1\n",
                    "state 1 output 1\n0 -> 2\n1 -> 0\n",
                    "state 2 output 0\n0 -> 2\n1 -> 3\n",
                    "state 3 output 1\n0 -> 0\n1 -> 2\n",
                )
                .to_string(),
            ),
            Bundled::Cantor => Some(
                "base: 3\nstate 0 output 1\n0 -> 0\n1 -> 1\n2 -> 0\nstate 1 output 0\n0 -> 1\n1 -> 1\n2 -> 1\n"
                    .to_string(),
            ),
            Bundled::Example6 => {
                let m = self.morphism();
                let seed = m.alphabet().letter(self.seed_name()).ok()?;
                Some(m.uniform_dfao(seed).ok()?.to_string())
            }
            Bundled::Fibonacci | Bundled::Tribonacci => None,
        }
    }

    pub fn dfao(self) -> Option<Dfao> {
        self.dfao_text().map(|t| Dfao::parse(&t).expect("bundled DFAO parses"))
    }
}

impl fmt::Display for Bundled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Bundled {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "thue-morse" | "tm" => Ok(Bundled::ThueMorse),
            "vtm" => Ok(Bundled::Vtm),
            "cantor" => Ok(Bundled::Cantor),
            "fibonacci" | "fib" => Ok(Bundled::Fibonacci),
            "tribonacci" | "trib" => Ok(Bundled::Tribonacci),
            "example6" | "phi12" => Ok(Bundled::Example6),
            _ => Err(WordError::Format(format!(
                "unknown word {s:?}; expected one of thue-morse, vtm, cantor, fibonacci, tribonacci, example6"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SaturationConfig {
    pub start: usize,
    pub cap: usize,
}

impl Default for SaturationConfig {
    fn default() -> Self {
        SaturationConfig { start: 1 << 10, cap: 1 << 24 }
    }
}

/// Window within which the length-`n` factors have stabilized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub window: usize,
    pub certified: bool,
}

/// Generates prefixes on demand and remembers the longest one produced.
#[derive(Clone, Debug)]
pub struct Saturator {
    generator: Generator,
    config: SaturationConfig,
    letters: Vec<Letter>,
}

impl Saturator {
    pub fn new(generator: Generator, config: SaturationConfig) -> Self {
        Saturator { generator, config, letters: Vec::new() }
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn config(&self) -> SaturationConfig {
        self.config
    }

    /// Seed the prefix cache, e.g. from disk. Ignored unless it extends the
    /// current cache and agrees with it.
    pub fn preload(&mut self, letters: Vec<Letter>) {
        if letters.len() > self.letters.len() && letters.starts_with(&self.letters) {
            self.letters = letters;
        }
    }

    pub fn letters(&mut self, len: usize) -> &[Letter] {
        if self.letters.len() < len {
            // Grow at least geometrically so repeated requests stay cheap.
            let target = len.max(self.letters.len() * 2);
            self.letters = self.generator.letters(target);
        }
        &self.letters[..len]
    }

    pub fn cached(&self) -> &[Letter] {
        &self.letters
    }

    /// Smallest window `W` of the doubling schedule with `W >= n` such that
    /// the prefixes of length `W` and `2W` have the same length-`n` factors.
    pub fn window(&mut self, n: usize) -> Result<Window, WordError> {
        let cap = self.config.cap;
        let mut w = self.config.start.max(1);
        while w < n {
            w *= 2;
        }
        loop {
            if 2 * w > cap {
                return Err(WordError::WindowExceeded { n, cap });
            }
            let letters = self.letters(2 * w);
            // The W-prefix factors are a subset of the 2W-prefix factors, so
            // equal counts mean equal sets.
            if count_factors(&letters[..w], n) == count_factors(letters, n) {
                return Ok(Window { window: w, certified: self.generator.is_certifiable() });
            }
            w *= 2;
        }
    }
}

fn count_factors(word: &[Letter], n: usize) -> usize {
    if n == 0 {
        return 1;
    }
    if n > word.len() {
        return 0;
    }
    word.windows(n).collect::<HashSet<_>>().len()
}
