//! Free-group words over generators `x1, x2, …`.
//!
//! A [`Word`] is always freely reduced: every constructor cancels adjacent
//! inverse pairs, so structural equality is equality in the free group.
//! Exponents are expanded into repeated letters at parse time.

use std::fmt;
use std::num::NonZeroU32;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("generator x{index} out of range (presentation has {num_generators} generators)")]
    OutOfRange { index: u32, num_generators: usize },
}

/// 1-based generator index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct GeneratorIndex(NonZeroU32);

impl GeneratorIndex {
    pub fn new(index: u32) -> Option<Self> {
        NonZeroU32::new(index).map(GeneratorIndex)
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0.get()
    }

    /// 0-based position, for indexing coordinate vectors.
    #[inline]
    pub fn offset(self) -> usize {
        self.0.get() as usize - 1
    }
}

impl TryFrom<u32> for GeneratorIndex {
    type Error = &'static str;
    fn try_from(v: u32) -> Result<Self, Self::Error> {
        GeneratorIndex::new(v).ok_or("generator indices are 1-based")
    }
}

impl From<GeneratorIndex> for u32 {
    fn from(g: GeneratorIndex) -> u32 {
        g.get()
    }
}

impl fmt::Display for GeneratorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.get())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: GeneratorIndex,
    pub sign: Sign,
}

impl Letter {
    pub fn new(gen: GeneratorIndex, sign: Sign) -> Self {
        Letter { gen, sign }
    }

    pub fn inverse(self) -> Letter {
        Letter { gen: self.gen, sign: self.sign.flip() }
    }

    /// Signed integer encoding: `+i` for `x_i`, `-i` for `x_i^-1`.
    pub fn to_signed(self) -> i64 {
        self.gen.get() as i64 * self.sign.as_i64()
    }

    pub fn from_signed(v: i64) -> Option<Letter> {
        let gen = GeneratorIndex::new(u32::try_from(v.unsigned_abs()).ok()?)?;
        let sign = if v > 0 { Sign::Plus } else { Sign::Minus };
        Some(Letter { gen, sign })
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.sign != other.sign
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    /// The single-letter word `x_i`.
    pub fn generator(gen: GeneratorIndex) -> Self {
        Word { letters: vec![Letter::new(gen, Sign::Plus)] }
    }

    /// Builds a word from arbitrary letters, reducing as it goes.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = Word::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Builds from the signed-integer encoding (`3` is `x3`, `-3` is `x3^-1`).
    /// Returns `None` if any entry is zero.
    pub fn from_signed<I: IntoIterator<Item = i64>>(letters: I) -> Option<Self> {
        let mut w = Word::identity();
        for v in letters {
            w.push(Letter::from_signed(v)?);
        }
        Some(w)
    }

    fn push(&mut self, l: Letter) {
        match self.letters.last() {
            Some(&last) if last.cancels(l) => {
                self.letters.pop();
            }
            _ => self.letters.push(l),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn to_signed(&self) -> Vec<i64> {
        self.letters.iter().map(|l| l.to_signed()).collect()
    }

    /// Largest generator index occurring in the word (0 for the identity).
    pub fn max_generator(&self) -> u32 {
        self.letters.iter().map(|l| l.gen.get()).max().unwrap_or(0)
    }

    pub fn multiply(&self, other: &Word) -> Word {
        let mut out = self.clone();
        for &l in &other.letters {
            out.push(l);
        }
        out
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// `a · self · a⁻¹`.
    pub fn conjugate(&self, by: &Word) -> Word {
        by.multiply(self).multiply(&by.inverse())
    }

    /// `[u, v] = u v u⁻¹ v⁻¹`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.multiply(v).multiply(&u.inverse()).multiply(&v.inverse())
    }

    /// Product of a sequence of words.
    pub fn product<'a, I: IntoIterator<Item = &'a Word>>(words: I) -> Word {
        words.into_iter().fold(Word::identity(), |acc, w| acc.multiply(w))
    }

    /// Exponent sums: entry `i - 1` is the signed count of `x_i`.
    /// Letters beyond `num_generators` are ignored.
    pub fn abelianize(&self, num_generators: usize) -> Vec<i64> {
        let mut v = vec![0i64; num_generators];
        for l in &self.letters {
            if let Some(slot) = v.get_mut(l.gen.offset()) {
                *slot += l.sign.as_i64();
            }
        }
        v
    }

    pub fn check_range(&self, num_generators: usize) -> Result<(), WordError> {
        match self.letters.iter().find(|l| l.gen.get() as usize > num_generators) {
            Some(l) => Err(WordError::OutOfRange { index: l.gen.get(), num_generators }),
            None => Ok(()),
        }
    }

    /// Parses the whitespace-separated token grammar `x<i>[^<nonzero int>]`,
    /// checking every index against `num_generators`.
    pub fn parse(text: &str, num_generators: usize) -> Result<Word, WordError> {
        let w: Word = text.parse()?;
        w.check_range(num_generators)?;
        Ok(w)
    }
}

impl FromStr for Word {
    type Err = WordError;

    /// Parses without a generator bound.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut w = Word::identity();
        for (position, token) in tokens(text) {
            if token == "1" {
                continue;
            }
            let (gen, exp) = parse_token(token).map_err(|message| WordError::Syntax { position, message })?;
            let letter = Letter::new(gen, if exp > 0 { Sign::Plus } else { Sign::Minus });
            for _ in 0..exp.unsigned_abs() {
                w.push(letter);
            }
        }
        Ok(w)
    }
}

fn tokens(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split_whitespace().map(move |t| (t.as_ptr() as usize - text.as_ptr() as usize, t))
}

fn parse_token(token: &str) -> Result<(GeneratorIndex, i64), String> {
    let body = token
        .strip_prefix('x')
        .ok_or_else(|| format!("expected a token of the form x<i>[^<n>], found {token:?}"))?;
    let (index, exp) = match body.split_once('^') {
        Some((i, e)) => {
            let exp: i64 = e.parse().map_err(|_| format!("bad exponent {e:?} in {token:?}"))?;
            if exp == 0 {
                return Err(format!("zero exponent in {token:?}"));
            }
            (i, exp)
        }
        None => (body, 1),
    };
    if index.is_empty() || !index.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("bad generator index in {token:?}"));
    }
    let index: u32 = index.parse().map_err(|_| format!("generator index too large in {token:?}"))?;
    let gen = GeneratorIndex::new(index).ok_or_else(|| format!("generator indices start at 1, found {token:?}"))?;
    Ok((gen, exp))
}

/// Writes maximal runs of one letter with exponent notation: `x1 x2^-2 x1^-1`.
/// The identity is written `1`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == l {
                run += 1;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let exp = run as i64 * l.sign.as_i64();
            if exp == 1 {
                write!(f, "{}", l.gen)?;
            } else {
                write!(f, "{}^{}", l.gen, exp)?;
            }
            i += run;
        }
        Ok(())
    }
}

impl Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        self.multiply(rhs)
    }
}

impl Mul for Word {
    type Output = Word;
    fn mul(self, rhs: Word) -> Word {
        self.multiply(&rhs)
    }
}

/// Shorthand for the generator `x_i`; panics on `i = 0`.
pub fn x(i: u32) -> Word {
    Word::generator(GeneratorIndex::new(i).expect("generator indices are 1-based"))
}

/// Shorthand for the consecutive product `x_from x_{from+1} ⋯ x_to`
/// (the identity when `from > to`).
pub fn run(from: u32, to: u32) -> Word {
    (from..=to).fold(Word::identity(), |w, i| w.multiply(&x(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(v: &[i64]) -> Word {
        Word::from_signed(v.iter().copied()).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(Word::parse("x1 x2 x1^-1 x2^-1", 2).unwrap(), w(&[1, 2, -1, -2]));
        assert_eq!(Word::parse("x1 x1^-1", 1).unwrap(), Word::identity());
        assert_eq!(Word::parse("x3^2", 3).unwrap(), w(&[3, 3]));
        assert_eq!(Word::parse("x3^-2", 3).unwrap(), w(&[-3, -3]));
        assert_eq!(Word::parse("", 3).unwrap(), Word::identity());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Word::parse("x4", 3), Err(WordError::OutOfRange { index: 4, .. })));
        assert!(matches!(Word::parse("x1 y2", 3), Err(WordError::Syntax { position: 3, .. })));
        assert!(matches!(Word::parse("x1^0", 3), Err(WordError::Syntax { .. })));
        assert!(matches!(Word::parse("x0", 3), Err(WordError::Syntax { .. })));
        assert!(matches!(Word::parse("x^2", 3), Err(WordError::Syntax { .. })));
        assert!(matches!(Word::parse("x1^a", 3), Err(WordError::Syntax { .. })));
    }

    #[test]
    fn reduction_is_confluent() {
        assert_eq!(Word::parse("x1 x2 x2^-1 x1", 2).unwrap(), Word::parse("x1 x1", 2).unwrap());
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(w(&[1]).multiply(&w(&[-1])), Word::identity());
        assert_eq!(w(&[1]).multiply(&w(&[2])), w(&[1, 2]));
        assert_eq!(w(&[1, 2]).multiply(&w(&[-2, 3])), w(&[1, 3]));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(w(&[1, 2]).inverse(), w(&[-2, -1]));
        assert_eq!(Word::identity().inverse(), Word::identity());
        assert_eq!(w(&[-1]).inverse(), w(&[1]));
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(x(1).conjugate(&Word::identity()), x(1));
        assert_eq!(x(1).conjugate(&x(2)), w(&[2, 1, -2]));
        assert_eq!(x(1).conjugate(&x(1)), x(1));
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(Word::commutator(&x(1), &x(2)), w(&[1, 2, -1, -2]));
        assert_eq!(Word::commutator(&x(1), &x(1)), Word::identity());
        assert_eq!(Word::commutator(&Word::identity(), &x(2)), Word::identity());
    }

    #[test]
    fn abelianize_examples() {
        assert_eq!(w(&[1, 2, -1, -2]).abelianize(2), vec![0, 0]);
        assert_eq!(w(&[1, 1]).abelianize(1), vec![2]);
        assert_eq!(Word::identity().abelianize(3), vec![0, 0, 0]);
    }

    #[test]
    fn display() {
        assert_eq!(w(&[1, 2, 2, -3, -3, -3, 1]).to_string(), "x1 x2^2 x3^-3 x1");
        assert_eq!(Word::identity().to_string(), "1");
        assert_eq!(run(2, 4), w(&[2, 3, 4]));
        assert_eq!(run(4, 3), Word::identity());
    }

    fn letters(max_gen: i64, max_len: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec((1..=max_gen, any::<bool>()).prop_map(|(g, s)| if s { g } else { -g }), 0..=max_len)
    }

    fn word(max_gen: i64, max_len: usize) -> impl Strategy<Value = Word> {
        letters(max_gen, max_len).prop_map(|v| w(&v))
    }

    proptest! {
        #[test]
        fn reduced_after_construction(v in letters(3, 40)) {
            let word = w(&v);
            for pair in word.letters().windows(2) {
                prop_assert!(!pair[0].cancels(pair[1]));
            }
        }

        #[test]
        fn group_laws(u in word(4, 40), v in word(4, 40), t in word(4, 40)) {
            prop_assert_eq!(u.multiply(&v).multiply(&t), u.multiply(&v.multiply(&t)));
            prop_assert_eq!(u.inverse().inverse(), u.clone());
            prop_assert!(u.multiply(&u.inverse()).is_identity());
        }

        #[test]
        fn abelianization_is_a_homomorphism(u in word(4, 30), v in word(4, 30)) {
            let sum: Vec<i64> = u.abelianize(4).iter().zip(v.abelianize(4)).map(|(a, b)| a + b).collect();
            prop_assert_eq!(u.multiply(&v).abelianize(4), sum);
            prop_assert_eq!(Word::commutator(&u, &v).abelianize(4), vec![0; 4]);
        }

        #[test]
        fn format_parse_round_trip(u in word(12, 30)) {
            prop_assert_eq!(Word::parse(&u.to_string(), 12).unwrap(), u);
        }
    }
}
