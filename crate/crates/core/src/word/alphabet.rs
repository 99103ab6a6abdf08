use std::fmt;

use super::WordError;

/// A letter is an index into an [`Alphabet`]; comparing letters compares
/// their declared positions, so lexicographic order on words follows the
/// declaration order rather than the spelling of the letter names.
pub type Letter = u8;

/// Ordered list of named letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, WordError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(WordError::Format("alphabet must not be empty".into()));
        }
        if names.len() > usize::from(Letter::MAX) + 1 {
            return Err(WordError::Format(format!("alphabet has {} letters, at most 256 are supported", names.len())));
        }
        for (i, a) in names.iter().enumerate() {
            if a.is_empty() || a.chars().any(char::is_whitespace) {
                return Err(WordError::Format(format!("invalid letter name {a:?}")));
            }
            if names[..i].contains(a) {
                return Err(WordError::Format(format!("duplicate letter {a:?}")));
            }
        }
        Ok(Alphabet { names })
    }

    /// The alphabet `0, 1, ..., size-1` with letter names equal to the digits.
    pub fn digits(size: usize) -> Self {
        Alphabet::new((0..size).map(|d| d.to_string())).expect("digit alphabet is valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, letter: Letter) -> &str {
        &self.names[usize::from(letter)]
    }

    pub fn letter(&self, name: &str) -> Result<Letter, WordError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| i as Letter)
            .ok_or_else(|| WordError::UnknownLetter(name.to_string()))
    }

    /// True when every letter is spelled with a single character, so words
    /// can be printed without separators.
    pub fn is_compact(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Parse a word, either as whitespace-separated letter names or, for
    /// compact alphabets, character by character.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Letter>, WordError> {
        let text = text.trim();
        if text.contains(char::is_whitespace) || !self.is_compact() {
            text.split_whitespace().map(|t| self.letter(t)).collect()
        } else {
            text.chars().map(|c| self.letter(c.encode_utf8(&mut [0; 4]))).collect()
        }
    }

    pub fn render(&self, word: &[Letter]) -> String {
        let sep = if self.is_compact() { "" } else { " " };
        word.iter().map(|&l| self.name(l)).collect::<Vec<_>>().join(sep)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.names.join(" "))
    }
}
