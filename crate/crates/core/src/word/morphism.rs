use std::fmt;

use super::{Alphabet, Dfao, Letter, Prefix, WordError};

/// A non-erasing substitution over an ordered alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    alphabet: Alphabet,
    rules: Vec<Vec<Letter>>,
}

impl Morphism {
    /// `rules[a]` is the image of letter `a`.
    pub fn new(alphabet: Alphabet, rules: Vec<Vec<Letter>>) -> Result<Self, WordError> {
        if rules.len() != alphabet.len() {
            return Err(WordError::Format(format!(
                "{} rules for an alphabet of {} letters",
                rules.len(),
                alphabet.len()
            )));
        }
        for (a, image) in rules.iter().enumerate() {
            if image.is_empty() {
                return Err(WordError::Format(format!("image of {} is empty", alphabet.name(a as Letter))));
            }
            if let Some(&b) = image.iter().find(|&&b| usize::from(b) >= alphabet.len()) {
                return Err(WordError::UnknownLetter(b.to_string()));
            }
        }
        Ok(Morphism { alphabet, rules })
    }

    /// Build from `(letter, image)` pairs written with the alphabet's letter names.
    pub fn from_rules(alphabet: Alphabet, rules: &[(&str, &str)]) -> Result<Self, WordError> {
        let mut images = vec![None; alphabet.len()];
        for (a, image) in rules {
            let a = alphabet.letter(a)?;
            images[usize::from(a)] = Some(alphabet.parse_word(image)?);
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(a, img)| {
                img.ok_or_else(|| WordError::Format(format!("no rule for letter {}", alphabet.name(a as Letter))))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Morphism::new(alphabet, images)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn image(&self, letter: Letter) -> &[Letter] {
        &self.rules[usize::from(letter)]
    }

    pub fn apply(&self, word: &[Letter]) -> Vec<Letter> {
        word.iter().flat_map(|&a| self.image(a).iter().copied()).collect()
    }

    pub fn is_prolongable(&self, seed: Letter) -> bool {
        let image = self.image(seed);
        image.len() >= 2 && image[0] == seed
    }

    /// First `len` letters of the fixed point `lim m^j(seed)`.
    ///
    /// Each round applies the morphism to the whole current prefix and
    /// truncates to `len`; the current word is always a prefix of the fixed
    /// point and grows by at least one letter per round.
    pub fn fixed_point_prefix(&self, seed: Letter, len: usize) -> Result<Vec<Letter>, WordError> {
        if usize::from(seed) >= self.alphabet.len() {
            return Err(WordError::UnknownLetter(seed.to_string()));
        }
        if !self.is_prolongable(seed) {
            return Err(WordError::NotProlongable(self.alphabet.name(seed).to_string()));
        }
        let mut word = vec![seed];
        while word.len() < len {
            let mut next = Vec::with_capacity(len.min(word.len().saturating_mul(4)));
            for &a in &word {
                next.extend_from_slice(self.image(a));
                if next.len() >= len {
                    break;
                }
            }
            word = next;
        }
        word.truncate(len);
        Ok(word)
    }

    /// Same as [`Morphism::fixed_point_prefix`], wrapped with a source tag.
    pub fn prefix(&self, seed: Letter, len: usize) -> Result<Prefix, WordError> {
        let letters = self.fixed_point_prefix(seed, len)?;
        Ok(Prefix::new(letters, self.alphabet.clone(), format!("fixed-point seed={}", self.alphabet.name(seed))))
    }

    /// Letter `b` occurs in the image of `a` iff `incidence()[a][b] > 0`.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let d = self.alphabet.len();
        let mut m = vec![vec![0; d]; d];
        for (a, image) in self.rules.iter().enumerate() {
            for &b in image {
                m[a][usize::from(b)] += 1;
            }
        }
        m
    }

    /// Primitive: some power of the incidence matrix is strictly positive.
    /// Wielandt's bound `(d-1)^2 + 1` limits the powers to try.
    pub fn is_primitive(&self) -> bool {
        let d = self.alphabet.len();
        let base: Vec<Vec<bool>> =
            self.incidence().into_iter().map(|row| row.into_iter().map(|c| c > 0).collect()).collect();
        let mut power = base.clone();
        for _ in 0..((d - 1) * (d - 1) + 1) {
            if power.iter().all(|row| row.iter().all(|&x| x)) {
                return true;
            }
            let mut next = vec![vec![false; d]; d];
            for i in 0..d {
                for k in 0..d {
                    if power[i][k] {
                        for j in 0..d {
                            next[i][j] |= base[k][j];
                        }
                    }
                }
            }
            power = next;
        }
        false
    }

    /// The common image length when every image has the same length.
    pub fn uniform_length(&self) -> Option<usize> {
        let k = self.rules[0].len();
        self.rules.iter().all(|r| r.len() == k).then_some(k)
    }

    /// The DFAO of a `k`-uniform morphism's fixed point: states are letters,
    /// digit `d` from state `a` leads to the `d`-th letter of `a`'s image.
    pub fn uniform_dfao(&self, seed: Letter) -> Result<Dfao, WordError> {
        let k = self.uniform_length().ok_or_else(|| WordError::Format("morphism is not uniform".into()))?;
        if !self.is_prolongable(seed) {
            return Err(WordError::NotProlongable(self.alphabet.name(seed).to_string()));
        }
        // Renumber so that the seed is state 0.
        let d = self.alphabet.len();
        let mut order: Vec<usize> = vec![usize::from(seed)];
        order.extend((0..d).filter(|&a| a != usize::from(seed)));
        let mut pos = vec![0; d];
        for (i, &a) in order.iter().enumerate() {
            pos[a] = i;
        }
        let transitions = order.iter().map(|&a| self.rules[a].iter().map(|&b| pos[usize::from(b)]).collect()).collect();
        let outputs = order.iter().map(|&a| a as Letter).collect();
        Dfao::new(k as u32, self.alphabet.clone(), transitions, outputs)
    }

    /// Parse the text format:
    ///
    /// ```text
    /// alphabet: 0 1
    /// 0 -> 01
    /// 1 -> 10
    /// ```
    ///
    /// Blank lines and `#` comments are ignored. Images over alphabets with
    /// multi-character letter names are written with spaces between letters.
    pub fn parse(text: &str) -> Result<Self, WordError> {
        let mut lines = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| WordError::Format("missing `alphabet:` header".into()))?;
        let names = header
            .strip_prefix("alphabet:")
            .ok_or_else(|| WordError::Format(format!("expected `alphabet:` header, got {header:?}")))?;
        let alphabet = Alphabet::new(names.split_whitespace())?;
        let mut images: Vec<Option<Vec<Letter>>> = vec![None; alphabet.len()];
        for line in lines {
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| WordError::Format(format!("expected `a -> image`, got {line:?}")))?;
            let a = alphabet.letter(lhs.trim())?;
            if images[usize::from(a)].is_some() {
                return Err(WordError::Format(format!("duplicate rule for {}", lhs.trim())));
            }
            images[usize::from(a)] = Some(alphabet.parse_word(rhs)?);
        }
        let rules = images
            .into_iter()
            .enumerate()
            .map(|(a, r)| {
                r.ok_or_else(|| WordError::Format(format!("no rule for letter {}", alphabet.name(a as Letter))))
            })
            .collect::<Result<_, _>>()?;
        Morphism::new(alphabet, rules)
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet: {}", self.alphabet)?;
        for (a, image) in self.rules.iter().enumerate() {
            writeln!(f, "{} -> {}", self.alphabet.name(a as Letter), self.alphabet.render(image))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn thue_morse() -> Morphism {
        Morphism::parse("alphabet: 0 1\n0 -> 01\n1 -> 10\n").unwrap()
    }

    #[test]
    fn thue_morse_prefix() {
        let m = thue_morse();
        let w = m.fixed_point_prefix(0, 8).unwrap();
        assert_eq!(m.alphabet().render(&w), "01101001");
    }

    #[test]
    fn cantor_prefix() {
        let m = Morphism::parse("alphabet: 0 1\n1 -> 101\n0 -> 000").unwrap();
        let w = m.fixed_point_prefix(1, 9).unwrap();
        assert_eq!(m.alphabet().render(&w), "101000101");
    }

    #[test]
    fn zero_length() {
        assert!(thue_morse().fixed_point_prefix(0, 0).unwrap().is_empty());
    }

    #[test]
    fn not_prolongable() {
        let m = Morphism::parse("alphabet: 0 1\n0 -> 01\n1 -> 0").unwrap();
        assert!(matches!(m.fixed_point_prefix(1, 4), Err(WordError::NotProlongable(_))));
        let m = Morphism::parse("alphabet: 0 1\n0 -> 0\n1 -> 10").unwrap();
        assert!(matches!(m.fixed_point_prefix(0, 4), Err(WordError::NotProlongable(_))));
        assert!(matches!(m.fixed_point_prefix(7, 4), Err(WordError::UnknownLetter(_))));
    }

    #[test]
    fn parse_round_trip() {
        let m = Morphism::parse("alphabet: x1 x2\nx1 -> x1 x2\nx2 -> x1").unwrap();
        assert_eq!(Morphism::parse(&m.to_string()).unwrap(), m);
        assert_eq!(m.to_string(), "alphabet: x1 x2\nx1 -> x1 x2\nx2 -> x1\n");
    }

    #[test]
    fn parse_errors() {
        assert!(Morphism::parse("0 -> 01").is_err());
        assert!(Morphism::parse("alphabet: 0 1\n0 -> 01").is_err());
        assert!(Morphism::parse("alphabet: 0 1\n0 -> 02\n1 -> 0").is_err());
        assert!(Morphism::parse("alphabet: 0 1\n0 -> 01\n0 -> 1\n1 -> 0").is_err());
    }

    #[test]
    fn primitivity() {
        assert!(thue_morse().is_primitive());
        let cantor = Morphism::parse("alphabet: 0 1\n1 -> 101\n0 -> 000").unwrap();
        assert!(!cantor.is_primitive());
        let fib = Morphism::parse("alphabet: 0 1\n0 -> 01\n1 -> 0").unwrap();
        assert!(fib.is_primitive());
    }

    #[test]
    fn uniform_dfao_matches_fixed_point() {
        let m = thue_morse();
        let d = m.uniform_dfao(0).unwrap();
        let w = m.fixed_point_prefix(0, 300).unwrap();
        assert_eq!(d.prefix(300), w);
    }
}
