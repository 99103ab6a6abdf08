//! Finite prefixes of infinite words: pure morphic fixed points, their
//! codings, and automatic sequences read from DFAOs.

mod alphabet;
mod dfao;
mod generator;
mod morphism;

pub use alphabet::{Alphabet, Letter};
pub use dfao::Dfao;
pub use generator::{Bundled, Coding, Generator, SaturationConfig, Saturator, Window};
pub use morphism::Morphism;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("NotProlongable: image of seed {0} must start with the seed and have length at least 2")]
    NotProlongable(String),
    #[error("UnknownLetter: {0}")]
    UnknownLetter(String),
    #[error("WindowExceeded: length-{n} factors did not stabilize below the {cap}-letter cap")]
    WindowExceeded { n: usize, cap: usize },
    #[error("format error: {0}")]
    Format(String),
}

/// A finite window onto an infinite word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prefix {
    letters: Vec<Letter>,
    alphabet: Alphabet,
    source: String,
}

impl Prefix {
    pub fn new(letters: Vec<Letter>, alphabet: Alphabet, source: String) -> Self {
        Prefix { letters, alphabet, source }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn render(&self) -> String {
        self.alphabet.render(&self.letters)
    }
}
