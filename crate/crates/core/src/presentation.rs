//! Finite presentations with commutator relators.
//!
//! Relators are kept in a fixed order, which is also the order of the dual
//! basis of `H^2` used by [`crate::cohomology`]. Relators come either from a
//! [`RelatorFamily`] (all `n − 1` of its commutators, contiguous, named
//! `<family>^j`) or as plain words.
//!
//! # File format
//!
//! ```text
//! generators 3
//! relator R1 : x3 x1 x3 x1 x3^-1 x1^-1 x3^-1 x1^-1
//! family T_1 : x1 ; x7 ; x6
//! family C : x11 ; x4 ^ ( x3 x10 x1 x2 x10^-1 ) ; x12 ; x6
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::magnus::{ConjugatedGenerator, MagnusError, RelatorFamily};
use crate::word::{run, x, GeneratorIndex, Word, WordError};

#[derive(Debug, Error)]
pub enum PresentationError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    Word { line: usize, source: WordError },
    #[error(transparent)]
    Family(#[from] MagnusError),
    #[error("relator not a commutator: {name} abelianizes to {abelianization:?}")]
    NotCommutator { name: String, abelianization: Vec<i64> },
    #[error("duplicate relator name {0}")]
    DuplicateName(String),
    #[error("invalid relator name {0:?}")]
    InvalidName(String),
    #[error("relator {name} uses generator x{index}, but there are only {num_generators}")]
    OutOfRange { name: String, index: u32, num_generators: usize },
    #[error("monomial presentations need r >= 2, got {0}")]
    MonomialRank(u32),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Monomial { r: u32 },
    Kty,
    File,
    Custom,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Monomial { r } => write!(f, "monomial r={r}"),
            Origin::Kty => write!(f, "kty"),
            Origin::File => write!(f, "file"),
            Origin::Custom => write!(f, "custom"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelatorSource {
    /// Relator `R^j` of family number `family`.
    Family { family: usize, j: usize },
    Plain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relator {
    pub name: String,
    pub source: RelatorSource,
    pub word: Word,
}

/// Equality ignores [`Origin`], which is metadata.
#[derive(Debug, Clone)]
pub struct Presentation {
    num_generators: usize,
    families: Vec<RelatorFamily>,
    relators: Vec<Relator>,
    origin: Origin,
}

impl PartialEq for Presentation {
    fn eq(&self, other: &Self) -> bool {
        self.num_generators == other.num_generators
            && self.families == other.families
            && self.relators == other.relators
    }
}

impl Eq for Presentation {}

pub struct PresentationBuilder {
    inner: Presentation,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || c == ':' || c == ';' || c == '#')
}

impl PresentationBuilder {
    fn check_relator(&self, name: &str, word: &Word) -> Result<(), PresentationError> {
        if !valid_name(name) {
            return Err(PresentationError::InvalidName(name.to_string()));
        }
        if self.inner.relators.iter().any(|r| r.name == name) {
            return Err(PresentationError::DuplicateName(name.to_string()));
        }
        let n = self.inner.num_generators;
        if let Err(WordError::OutOfRange { index, .. }) = word.check_range(n) {
            return Err(PresentationError::OutOfRange { name: name.to_string(), index, num_generators: n });
        }
        let ab = word.abelianize(n);
        if ab.iter().any(|&e| e != 0) {
            return Err(PresentationError::NotCommutator { name: name.to_string(), abelianization: ab });
        }
        Ok(())
    }

    /// Appends all `n − 1` relators of `family`.
    pub fn family(&mut self, family: RelatorFamily) -> Result<&mut Self, PresentationError> {
        let index = self.inner.families.len();
        let n = self.inner.num_generators;
        if family.max_generator() as usize > n {
            return Err(PresentationError::OutOfRange {
                name: family.name().to_string(),
                index: family.max_generator(),
                num_generators: n,
            });
        }
        for rel in family.relators() {
            self.check_relator(&rel.name, &rel.word)?;
            self.inner.relators.push(Relator {
                name: rel.name,
                source: RelatorSource::Family { family: index, j: rel.j },
                word: rel.word,
            });
        }
        self.inner.families.push(family);
        Ok(self)
    }

    pub fn relator(&mut self, name: impl Into<String>, word: Word) -> Result<&mut Self, PresentationError> {
        let name = name.into();
        self.check_relator(&name, &word)?;
        self.inner.relators.push(Relator { name, source: RelatorSource::Plain, word });
        Ok(self)
    }

    pub fn build(self) -> Presentation {
        self.inner
    }
}

#[derive(Serialize)]
struct RelatorJson<'a> {
    name: &'a str,
    letters: Vec<i64>,
}

#[derive(Serialize)]
struct PresentationJson<'a> {
    generators: usize,
    origin: String,
    relators: Vec<RelatorJson<'a>>,
}

impl Presentation {
    pub fn builder(num_generators: usize, origin: Origin) -> PresentationBuilder {
        PresentationBuilder {
            inner: Presentation { num_generators, families: Vec::new(), relators: Vec::new(), origin },
        }
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn num_relators(&self) -> usize {
        self.relators.len()
    }

    pub fn relators(&self) -> &[Relator] {
        &self.relators
    }

    pub fn families(&self) -> &[RelatorFamily] {
        &self.families
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    pub fn relator_names(&self) -> Vec<String> {
        self.relators.iter().map(|r| r.name.clone()).collect()
    }

    pub fn relator_index(&self, name: &str) -> Option<usize> {
        self.relators.iter().position(|r| r.name == name)
    }

    pub fn family(&self, name: &str) -> Option<&RelatorFamily> {
        self.families.iter().find(|f| f.name() == name)
    }

    /// Writes the line-oriented text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("generators {}\n", self.num_generators);
        for rel in &self.relators {
            match rel.source {
                RelatorSource::Family { family, j: 1 } => {
                    let f = &self.families[family];
                    let members: Vec<String> = f.members().iter().map(|g| g.to_string()).collect();
                    out.push_str(&format!("family {} : {}\n", f.name(), members.join(" ; ")));
                }
                RelatorSource::Family { .. } => {}
                RelatorSource::Plain => out.push_str(&format!("relator {} : {}\n", rel.name, rel.word)),
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Presentation, PresentationError> {
        let mut builder: Option<PresentationBuilder> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| PresentationError::Parse { line, message };
            let (keyword, rest) = content.split_once(char::is_whitespace).unwrap_or((content, ""));
            let rest = rest.trim();
            let Some(b) = builder.as_mut() else {
                if keyword != "generators" {
                    return Err(parse_err("expected `generators <n>` first".into()));
                }
                let n: usize = rest.parse().map_err(|_| parse_err(format!("bad generator count {rest:?}")))?;
                if n == 0 {
                    return Err(parse_err("a presentation needs at least one generator".into()));
                }
                builder = Some(Presentation::builder(n, Origin::File));
                continue;
            };
            let n = b.inner.num_generators;
            let (name, body) = rest
                .split_once(':')
                .map(|(a, c)| (a.trim(), c.trim()))
                .ok_or_else(|| parse_err("expected `<name> : <body>`".into()))?;
            let with_line = |e: PresentationError| match e {
                PresentationError::Parse { .. } | PresentationError::Word { .. } => e,
                other => PresentationError::Parse { line, message: other.to_string() },
            };
            match keyword {
                "relator" => {
                    let word = Word::parse(body, n).map_err(|source| PresentationError::Word { line, source })?;
                    b.relator(name, word).map_err(with_line)?;
                }
                "family" => {
                    let members = body
                        .split(';')
                        .map(|m| parse_member(m.trim(), n).map_err(|source| PresentationError::Word { line, source }))
                        .collect::<Result<Vec<_>, _>>()?;
                    let family = RelatorFamily::new(name, members).map_err(|e| with_line(e.into()))?;
                    b.family(family).map_err(with_line)?;
                }
                "generators" => return Err(parse_err("duplicate `generators` line".into())),
                other => return Err(parse_err(format!("unknown keyword {other:?}"))),
            }
        }
        builder
            .map(PresentationBuilder::build)
            .ok_or(PresentationError::Parse { line: 0, message: "empty presentation file".into() })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Presentation, PresentationError> {
        Presentation::parse(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), PresentationError> {
        fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let json = PresentationJson {
            generators: self.num_generators,
            origin: self.origin.to_string(),
            relators: self.relators.iter().map(|r| RelatorJson { name: &r.name, letters: r.word.to_signed() }).collect(),
        };
        serde_json::to_value(json).expect("presentation serializes")
    }
}

fn parse_member(text: &str, num_generators: usize) -> Result<ConjugatedGenerator, WordError> {
    let syntax = |message: String| WordError::Syntax { position: 0, message };
    let (base, conj) = match text.split_once('^') {
        Some((b, c)) => {
            let c = c.trim();
            let inner = c
                .strip_prefix('(')
                .and_then(|c| c.strip_suffix(')'))
                .ok_or_else(|| syntax(format!("conjugator must be parenthesized in {text:?}")))?;
            (b.trim(), Word::parse(inner, num_generators)?)
        }
        None => (text, Word::identity()),
    };
    let gen = base
        .strip_prefix('x')
        .and_then(|i| i.parse::<u32>().ok())
        .and_then(GeneratorIndex::new)
        .ok_or_else(|| syntax(format!("expected a generator x<i>, found {base:?}")))?;
    if gen.get() as usize > num_generators {
        return Err(WordError::OutOfRange { index: gen.get(), num_generators });
    }
    Ok(ConjugatedGenerator::new(gen, conj))
}

fn gen(i: u32) -> GeneratorIndex {
    GeneratorIndex::new(i).expect("generator indices are 1-based")
}

fn plain(i: u32) -> ConjugatedGenerator {
    ConjugatedGenerator::plain(gen(i))
}

fn conj(i: u32, by: Word) -> ConjugatedGenerator {
    ConjugatedGenerator::new(gen(i), by)
}

/// The nine relator families of the pure braid group `P(r,1,3)`, in relator
/// basis order: `A, B, C, D1_s, D2_s, D3_s, T_s, U_{t,s}, V_{s,t}`.
///
/// Generators `x_1…x_r`, `x_{r+1}…x_{2r}` and `x_{2r+1}…x_{3r}` are the three
/// pencils of hyperplanes `z_i = ζ^q z_j`; `x_{3r+1}, x_{3r+2}, x_{3r+3}` are
/// the coordinate hyperplanes.
pub fn monomial_families(r: u32) -> Result<Vec<RelatorFamily>, PresentationError> {
    if r < 2 {
        return Err(PresentationError::MonomialRank(r));
    }
    let (a1, a2, a3) = (3 * r + 1, 3 * r + 2, 3 * r + 3);
    let mut families = Vec::new();

    let mut a = vec![plain(a1)];
    a.extend((1..r).map(plain));
    a.extend([plain(a2), plain(r)]);
    families.push(RelatorFamily::new("A", a)?);

    let mut b = vec![plain(a1)];
    b.extend((2 * r + 1..3 * r).map(plain));
    b.extend([plain(a3), plain(3 * r)]);
    families.push(RelatorFamily::new("B", b)?);

    // member x_{r+s} is conjugated by x_r x_{3r+1} x_1 ⋯ x_{r-s} x_{3r+1}^-1
    let mut c = vec![plain(a2)];
    c.extend((1..r).map(|s| conj(r + s, x(r) * x(a1) * run(1, r - s) * x(a1).inverse())));
    c.extend([plain(a3), plain(2 * r)]);
    families.push(RelatorFamily::new("C", c)?);

    for s in 1..=r {
        families.push(RelatorFamily::new(format!("D1_{s}"), vec![plain(a1), plain(r + s)])?);
    }
    for s in 1..=r {
        families.push(RelatorFamily::new(format!("D2_{s}"), vec![plain(a3), plain(s)])?);
    }
    for s in 1..=r {
        families.push(RelatorFamily::new(format!("D3_{s}"), vec![conj(a2, run(s, r - 1)), conj(2 * r + s, x(2 * r))])?);
    }
    for s in 1..=r {
        families.push(RelatorFamily::new(format!("T_{s}"), vec![plain(s), plain(2 * r + s), plain(2 * r)])?);
    }
    for t in 1..=r {
        for s in t + 1..=r {
            families.push(RelatorFamily::new(
                format!("U_{t},{s}"),
                vec![plain(s), plain(2 * r - t), conj(2 * r + s - t, run(2 * r - t + 1, 2 * r - 1))],
            )?);
        }
    }
    for s in 1..r {
        for t in s..r {
            families.push(RelatorFamily::new(
                format!("V_{s},{t}"),
                vec![conj(s, x(a1)), plain(2 * r - t), conj(3 * r + s - t, run(2 * r - t + 1, 2 * r - 1))],
            )?);
        }
    }
    Ok(families)
}

/// Presentation of `P(r,1,3)`: `3r + 3` generators, `2r² + 6r + 3` relators.
pub fn monomial_presentation(r: u32) -> Result<Presentation, PresentationError> {
    let families = monomial_families(r)?;
    let mut b = Presentation::builder(3 * r as usize + 3, Origin::Monomial { r });
    for f in families {
        b.family(f)?;
    }
    Ok(b.build())
}

/// Fundamental group of the complement of a conic with three tangent lines:
/// `⟨x1, x2, x3 | [x3 x1 x3, x1], [x3 x2 x3, x2], [x3 x1 x3⁻¹, x2]⟩`.
pub fn kty_presentation() -> Presentation {
    let mut b = Presentation::builder(3, Origin::Kty);
    b.relator("R1", Word::commutator(&(x(3) * x(1) * x(3)), &x(1))).expect("valid relator");
    b.relator("R2", Word::commutator(&(x(3) * x(2) * x(3)), &x(2))).expect("valid relator");
    b.relator("R3", Word::commutator(&x(1).conjugate(&x(3)), &x(2))).expect("valid relator");
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        for r in 2..=9u32 {
            let p = monomial_presentation(r).unwrap();
            assert_eq!(p.num_generators(), 3 * r as usize + 3);
            assert_eq!(p.num_relators(), (2 * r * r + 6 * r + 3) as usize, "r={r}");
            let count = |prefix: &str| p.relators().iter().filter(|rel| rel.name.starts_with(prefix)).count();
            let r = r as usize;
            assert_eq!(count("A^") + count("B^") + count("C^"), 3 * (r + 1));
            assert_eq!(count("D"), 3 * r);
            assert_eq!(count("T_"), 2 * r);
            assert_eq!(count("U_"), r * (r - 1));
            assert_eq!(count("V_"), r * (r - 1));
        }
        assert!(matches!(monomial_presentation(1), Err(PresentationError::MonomialRank(1))));
    }

    #[test]
    fn monomial_relators_are_commutators() {
        let p = monomial_presentation(4).unwrap();
        for rel in p.relators() {
            assert!(rel.word.abelianize(p.num_generators()).iter().all(|&e| e == 0), "{}", rel.name);
        }
    }

    #[test]
    fn t_family_at_r3() {
        let p = monomial_presentation(3).unwrap();
        let t1 = p.family("T_1").unwrap();
        let bases: Vec<u32> = t1.members().iter().map(|g| g.base.get()).collect();
        assert_eq!(bases, vec![1, 7, 6]);
        assert!(t1.members().iter().all(|g| g.conjugator.is_identity()));
        let i = p.relator_index("T_1^1").unwrap();
        assert_eq!(p.relators()[i].word, Word::commutator(&x(1), &(x(7) * x(6))));
        let i = p.relator_index("T_1^2").unwrap();
        assert_eq!(p.relators()[i].word, Word::commutator(&(x(1) * x(7)), &x(6)));
    }

    #[test]
    fn c_family_conjugators_match_expected_endpoints() {
        for r in 3..=6u32 {
            let p = monomial_presentation(r).unwrap();
            let c = p.family("C").unwrap();
            // member x_{r+1}: x_r x_{3r+1} x_1 ⋯ x_{r-1} x_{3r+1}^-1
            assert_eq!(c.members()[1].base.get(), r + 1);
            assert_eq!(c.members()[1].conjugator, x(r) * x(3 * r + 1) * run(1, r - 1) * x(3 * r + 1).inverse());
            // member x_{2r-1}: x_r x_{3r+1} x_1 x_{3r+1}^-1
            assert_eq!(c.members()[r as usize - 1].base.get(), 2 * r - 1);
            assert_eq!(c.members()[r as usize - 1].conjugator, x(r) * x(3 * r + 1) * x(1) * x(3 * r + 1).inverse());
        }
    }

    #[test]
    fn relator_order() {
        let p = monomial_presentation(3).unwrap();
        let names = p.relator_names();
        assert_eq!(&names[..4], ["A^1", "A^2", "A^3", "A^4"]);
        assert_eq!(&names[12..15], ["D1_1^1", "D1_2^1", "D1_3^1"]);
        assert_eq!(&names[21..27], ["T_1^1", "T_1^2", "T_2^1", "T_2^2", "T_3^1", "T_3^2"]);
        assert_eq!(&names[27..33], ["U_1,2^1", "U_1,2^2", "U_1,3^1", "U_1,3^2", "U_2,3^1", "U_2,3^2"]);
        assert_eq!(&names[33..39], ["V_1,1^1", "V_1,1^2", "V_1,2^1", "V_1,2^2", "V_2,2^1", "V_2,2^2"]);
    }

    #[test]
    fn u_and_v_conjugators_use_expected_generators() {
        for r in 2..=6u32 {
            let p = monomial_presentation(r).unwrap();
            for f in p.families().iter().filter(|f| f.name().starts_with('U') || f.name().starts_with('V')) {
                let (_, rest) = f.name().split_once('_').unwrap();
                let (a, b) = rest.split_once(',').unwrap();
                let (a, b): (u32, u32) = (a.parse().unwrap(), b.parse().unwrap());
                let t = if f.name().starts_with('U') { a } else { b };
                let conj = &f.members()[2].conjugator;
                assert!(conj.letters().iter().all(|l| (2 * r - t + 1..2 * r).contains(&l.gen.get())), "{}", f.name());
            }
        }
    }

    #[test]
    fn kty_relators() {
        let p = kty_presentation();
        assert_eq!(p.num_generators(), 3);
        assert_eq!(p.relators()[2].word, Word::from_signed([3, 1, -3, 2, 3, -1, -3, -2]).unwrap());
        assert_eq!(p.relators()[0].word.abelianize(3), vec![0, 0, 0]);
    }

    #[test]
    fn text_round_trip() {
        for p in [kty_presentation(), monomial_presentation(3).unwrap(), monomial_presentation(5).unwrap()] {
            let back = Presentation::parse(&p.to_text()).unwrap();
            assert_eq!(back, p);
            assert_eq!(back.origin(), Origin::File);
        }
    }

    #[test]
    fn parse_errors() {
        let err = Presentation::parse("generators 2\nrelator bad : x1\n").unwrap_err();
        assert!(err.to_string().contains("relator not a commutator"), "{err}");
        assert!(err.to_string().contains("line 2"), "{err}");

        let err = Presentation::parse("generators 2\n\nrelator R : x1 x3 x1^-1 x3^-1\n").unwrap_err();
        assert!(matches!(err, PresentationError::Word { line: 3, .. }), "{err}");

        let err = Presentation::parse("relator R : x1\n").unwrap_err();
        assert!(matches!(err, PresentationError::Parse { line: 1, .. }));

        let err = Presentation::parse("generators 3\nfamily F : x1 ; x1 ^ ( x2 )\n").unwrap_err();
        assert!(err.to_string().contains("repeats base"), "{err}");

        let err = Presentation::parse("generators 3\nfamily F : x1 ; x2 ^ x3\n").unwrap_err();
        assert!(matches!(err, PresentationError::Word { line: 2, .. }));

        let err = Presentation::parse("generators 2\nrelator R : x1 x2 x1^-1 x2^-1\nrelator R : 1\n").unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");

        assert!(Presentation::parse("# nothing\n").is_err());
    }

    #[test]
    fn family_lines_expand() {
        let p = Presentation::parse("generators 4\n# comment\nfamily F : x1 ; x2 ^ ( x4 ) ; x3\n").unwrap();
        assert_eq!(p.relator_names(), vec!["F^1", "F^2"]);
        let g2 = x(2).conjugate(&x(4));
        assert_eq!(p.relators()[0].word, Word::commutator(&x(1), &(g2.clone() * x(3))));
        assert_eq!(p.relators()[1].word, Word::commutator(&(x(1) * g2), &x(3)));
    }

    #[test]
    fn json_shape() {
        let j = kty_presentation().to_json();
        assert_eq!(j["generators"], 3);
        assert_eq!(j["origin"], "kty");
        assert_eq!(j["relators"][2]["name"], "R3");
        assert_eq!(j["relators"][2]["letters"], serde_json::json!([3, 1, -3, 2, 3, -1, -3, -2]));
    }
}
