//! Fox free differential calculus, evaluated through Magnus coefficients.
//!
//! `ε_I(w)` is the augmentation of the iterated Fox derivative
//! `∂_{i_1} ⋯ ∂_{i_q}(w)`, equivalently the coefficient of `t_{i_1}⋯t_{i_q}`
//! in the Magnus expansion `x_i ↦ 1 + t_i`. [`eps`] computes it by a
//! left-to-right fold over the letters of `w` using the deconcatenation rule
//!
//! ```text
//! ε_I(uv) = Σ_{I = I₁I₂} ε_{I₁}(u) ε_{I₂}(v)
//! ```
//!
//! with the single-letter values `ε_{(i)}(x_i) = 1`, `ε_{(i,…,i)}(x_i) = 0`
//! for two or more indices, and `ε_{(i,…,i)}(x_i⁻¹) = (−1)^q`. This fold is the
//! reference every closed form in this module is checked against.
//!
//! The closed forms ([`eps2_commutator`], [`eps3_commutator`],
//! [`eps1_conjugated_product`], [`eps2_conjugated_product`], [`eps2_family`],
//! [`eps3_family`]) are kept as independent cross-checks. When one of them
//! disagrees with the fold, [`audit_family`] reports a [`FamilyDiscrepancy`]
//! and downstream code keeps using the fold.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Modulus, Prime};
use crate::word::{GeneratorIndex, Letter, Sign, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MagnusError {
    #[error("bad multi-index {0:?}: expected comma-separated positive integers")]
    BadIndex(String),
    #[error("a relator family needs at least two members, got {0}")]
    FamilyTooSmall(usize),
    #[error("relator family {name} repeats base generator x{base}")]
    RepeatedBase { name: String, base: u32 },
    #[error("relator index j={j} out of range 1..{n} for family {name}")]
    RelatorIndex { name: String, j: usize, n: usize },
}

/// A multi-index `I = (i_1, …, i_q)`, `q ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<GeneratorIndex>);

impl MultiIndex {
    pub fn new(indices: Vec<GeneratorIndex>) -> Result<Self, MagnusError> {
        if indices.is_empty() {
            return Err(MagnusError::BadIndex(String::new()));
        }
        Ok(MultiIndex(indices))
    }

    /// Panics on an empty slice or a zero entry.
    pub fn from_u32(indices: &[u32]) -> Self {
        MultiIndex::new(
            indices
                .iter()
                .map(|&i| GeneratorIndex::new(i).expect("generator indices are 1-based"))
                .collect(),
        )
        .expect("non-empty multi-index")
    }

    pub fn as_slice(&self) -> &[GeneratorIndex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_generator(&self) -> u32 {
        self.0.iter().map(|g| g.get()).max().unwrap_or(0)
    }
}

impl FromStr for MultiIndex {
    type Err = MagnusError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MagnusError::BadIndex(s.to_string());
        let indices = s
            .split(',')
            .map(|t| t.trim().parse::<u32>().ok().and_then(GeneratorIndex::new).ok_or_else(bad))
            .collect::<Result<Vec<_>, _>>()?;
        MultiIndex::new(indices).map_err(|_| bad())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|g| g.get().to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Coefficient of `t_g^len` in the Magnus image of a single letter `x_g^{±1}`.
#[inline]
fn letter_coefficient(sign: Sign, len: usize) -> i64 {
    match sign {
        Sign::Plus => (len <= 1) as i64,
        Sign::Minus => {
            if len.is_multiple_of(2) {
                1
            } else {
                -1
            }
        }
    }
}

/// Folds one letter into the prefix state `state[k] = ε_{I[..k]}(prefix)`.
/// Runs `k` downward so every read of `state[s]`, `s < k`, sees the old value.
fn fold_letter<T>(state: &mut [T], index: &[GeneratorIndex], letter: Letter, mul_add: impl Fn(&mut T, &T, i64)) {
    for k in (1..=index.len()).rev() {
        // contiguous block index[s..k] must consist only of the letter's generator
        let mut s = k;
        while s > 0 && index[s - 1] == letter.gen {
            s -= 1;
            let coef = letter_coefficient(letter.sign, k - s);
            if coef != 0 {
                let (lo, hi) = state.split_at_mut(k);
                mul_add(&mut hi[0], &lo[s], coef);
            }
        }
    }
}

/// Runs the fold over an arbitrary letter sequence, reduced or not.
pub fn eps_letters(index: &[GeneratorIndex], letters: &[Letter], modulus: Modulus) -> BigInt {
    match modulus {
        Modulus::Integer => {
            let mut state = vec![BigInt::zero(); index.len() + 1];
            state[0] = BigInt::one();
            for &l in letters {
                fold_letter(&mut state, index, l, |acc, src, coef| {
                    if coef == 1 {
                        *acc += src;
                    } else {
                        *acc -= src;
                    }
                });
            }
            state.pop().expect("state has q+1 entries")
        }
        Modulus::Prime(p) => BigInt::from(eps_letters_mod(index, letters, p)),
    }
}

fn eps_letters_mod(index: &[GeneratorIndex], letters: &[Letter], p: Prime) -> u32 {
    let mut state = vec![0u32; index.len() + 1];
    state[0] = 1 % p.get();
    for &l in letters {
        fold_letter(&mut state, index, l, |acc, &src, coef| {
            *acc = if coef == 1 { p.add(*acc, src) } else { p.sub(*acc, src) };
        });
    }
    state[index.len()]
}

/// Magnus coefficient `ε_I(w)`, over `Z` or reduced into `[0, p)`.
pub fn eps(index: &MultiIndex, w: &Word, modulus: Modulus) -> BigInt {
    eps_letters(index.as_slice(), w.letters(), modulus)
}

/// `ε_I(w) mod p` without going through big integers.
pub fn eps_mod(index: &[GeneratorIndex], w: &Word, p: Prime) -> u32 {
    eps_letters_mod(index, w.letters(), p)
}

/// Multilinear evaluation `Σ_I Π_m weights[m][i_m − 1] · ε_I(w) mod p` over all
/// multi-indices of length `weights.len()`, in a single pass over `w`.
/// Entries are residues in `[0, p)`; generators beyond a weight's length
/// count as weight zero. With unit weights this is [`eps_mod`].
pub fn eps_weighted(weights: &[&[u32]], w: &Word, p: Prime) -> u32 {
    let q = weights.len();
    let mut state = vec![0u32; q + 1];
    state[0] = 1 % p.get();
    for l in w.letters() {
        let g = l.gen.offset();
        for k in (1..=q).rev() {
            let mut prod = 1u32;
            for s in (0..k).rev() {
                prod = p.mul(prod, weights[s].get(g).copied().unwrap_or(0));
                if prod == 0 {
                    break;
                }
                let coef = letter_coefficient(l.sign, k - s);
                if coef != 0 {
                    let term = p.mul(state[s], prod);
                    state[k] = if coef == 1 { p.add(state[k], term) } else { p.sub(state[k], term) };
                }
            }
        }
    }
    state[q]
}

/// First-order coefficient `ε_k(w)`, the exponent sum of `x_k`.
pub fn exponent_sum(w: &Word, k: GeneratorIndex) -> i64 {
    w.letters().iter().filter(|l| l.gen == k).map(|l| l.sign.as_i64()).sum()
}

fn eps_int(w: &Word, index: &[GeneratorIndex]) -> BigInt {
    eps_letters(index, w.letters(), Modulus::Integer)
}

/// `ε_{k,l}([u,v]) = ε_k(u)ε_l(v) − ε_k(v)ε_l(u)`.
pub fn eps2_commutator(u: &Word, v: &Word, k: GeneratorIndex, l: GeneratorIndex, modulus: Modulus) -> BigInt {
    let e = |w: &Word, g| exponent_sum(w, g);
    modulus.canonical(BigInt::from(e(u, k) * e(v, l) - e(v, k) * e(u, l)))
}

/// Order-3 coefficient of `[u,v]` in terms of order ≤ 2 coefficients of `u`, `v`:
///
/// ```text
/// ε_k(u)ε_{l,m}(v) − ε_m(u)ε_{k,l}(v) + ε_{k,l}(u)ε_m(v) − ε_k(v)ε_{l,m}(u)
///   + (ε_k(v)ε_l(u) − ε_k(u)ε_l(v))·(ε_m(u) + ε_m(v))
/// ```
pub fn eps3_commutator(
    u: &Word,
    v: &Word,
    k: GeneratorIndex,
    l: GeneratorIndex,
    m: GeneratorIndex,
    modulus: Modulus,
) -> BigInt {
    let e1 = |w: &Word, g| BigInt::from(exponent_sum(w, g));
    let e2 = |w: &Word, a, b| eps_int(w, &[a, b]);
    let value = e1(u, k) * e2(v, l, m) - e1(u, m) * e2(v, k, l) + e2(u, k, l) * e1(v, m) - e1(v, k) * e2(u, l, m)
        + (e1(v, k) * e1(u, l) - e1(u, k) * e1(v, l)) * (e1(u, m) + e1(v, m));
    modulus.canonical(value)
}

/// A generator conjugated by a word: `x_base^w = w x_base w⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConjugatedGenerator {
    pub base: GeneratorIndex,
    pub conjugator: Word,
}

impl ConjugatedGenerator {
    pub fn new(base: GeneratorIndex, conjugator: Word) -> Self {
        ConjugatedGenerator { base, conjugator }
    }

    pub fn plain(base: GeneratorIndex) -> Self {
        ConjugatedGenerator { base, conjugator: Word::identity() }
    }

    pub fn flatten(&self) -> Word {
        Word::generator(self.base).conjugate(&self.conjugator)
    }
}

impl fmt::Display for ConjugatedGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conjugator.is_identity() {
            write!(f, "{}", self.base)
        } else {
            write!(f, "{} ^ ( {} )", self.base, self.conjugator)
        }
    }
}

/// Flattened product `x_{i_1}^{w_1} ⋯ x_{i_j}^{w_j}`.
pub fn flatten_product(members: &[ConjugatedGenerator]) -> Word {
    members.iter().fold(Word::identity(), |acc, g| acc.multiply(&g.flatten()))
}

/// `ε_k(x_{i_1}^{w_1}⋯x_{i_j}^{w_j}) = Σ_a δ_{k,i_a}`.
pub fn eps1_conjugated_product(members: &[ConjugatedGenerator], k: GeneratorIndex, modulus: Modulus) -> BigInt {
    let count = members.iter().filter(|g| g.base == k).count();
    modulus.canonical(BigInt::from(count))
}

/// `ε_{k,l}(x_{i_1}^{w_1}⋯x_{i_j}^{w_j})
///   = Σ_a (ε_k(w_a)δ_{l,i_a} − ε_l(w_a)δ_{k,i_a}) + Σ_{a<b} δ_{k,i_a}δ_{l,i_b}`.
pub fn eps2_conjugated_product(
    members: &[ConjugatedGenerator],
    k: GeneratorIndex,
    l: GeneratorIndex,
    modulus: Modulus,
) -> BigInt {
    let mut total = 0i64;
    let mut k_seen = 0i64;
    for g in members {
        if g.base == l {
            total += exponent_sum(&g.conjugator, k) + k_seen;
        }
        if g.base == k {
            total -= exponent_sum(&g.conjugator, l);
            k_seen += 1;
        }
    }
    modulus.canonical(BigInt::from(total))
}

/// A family `[g_1, …, g_n]` of conjugated generators with distinct bases,
/// standing for the `n − 1` commutator relators
/// `R^j = [g_1⋯g_j, g_{j+1}⋯g_n]`, `1 ≤ j < n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelatorFamily {
    name: String,
    members: Vec<ConjugatedGenerator>,
}

/// One relator `R^j` produced by a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyRelator {
    pub name: String,
    pub j: usize,
    pub word: Word,
}

impl RelatorFamily {
    pub fn new(name: impl Into<String>, members: Vec<ConjugatedGenerator>) -> Result<Self, MagnusError> {
        let name = name.into();
        if members.len() < 2 {
            return Err(MagnusError::FamilyTooSmall(members.len()));
        }
        for (a, g) in members.iter().enumerate() {
            if members[..a].iter().any(|h| h.base == g.base) {
                return Err(MagnusError::RepeatedBase { name, base: g.base.get() });
            }
        }
        Ok(RelatorFamily { name, members })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn members(&self) -> &[ConjugatedGenerator] {
        &self.members
    }

    /// Number of relators, `n − 1`.
    pub fn relator_count(&self) -> usize {
        self.members.len() - 1
    }

    pub fn relator_name(&self, j: usize) -> String {
        format!("{}^{}", self.name, j)
    }

    pub fn relator(&self, j: usize) -> Result<FamilyRelator, MagnusError> {
        self.check_j(j)?;
        let left = flatten_product(&self.members[..j]);
        let right = flatten_product(&self.members[j..]);
        Ok(FamilyRelator { name: self.relator_name(j), j, word: Word::commutator(&left, &right) })
    }

    /// All `n − 1` relators in order `j = 1, …, n − 1`.
    pub fn relators(&self) -> Vec<FamilyRelator> {
        (1..self.members.len()).map(|j| self.relator(j).expect("j in range")).collect()
    }

    pub fn max_generator(&self) -> u32 {
        self.members.iter().map(|g| g.base.get().max(g.conjugator.max_generator())).max().unwrap_or(0)
    }

    fn check_j(&self, j: usize) -> Result<(), MagnusError> {
        if j == 0 || j >= self.members.len() {
            return Err(MagnusError::RelatorIndex { name: self.name.clone(), j, n: self.members.len() });
        }
        Ok(())
    }

    /// 1-based position of the member with base `g`, if any.
    fn position(&self, g: GeneratorIndex) -> Option<usize> {
        self.members.iter().position(|m| m.base == g).map(|a| a + 1)
    }

    fn conjugator_sum(&self, position: usize, g: GeneratorIndex) -> i64 {
        exponent_sum(&self.members[position - 1].conjugator, g)
    }
}

impl fmt::Display for RelatorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(|g| g.to_string()).collect();
        write!(f, "{} = [{}]", self.name, parts.join(", "))
    }
}

pub fn relators_of_family(family: &RelatorFamily) -> Vec<FamilyRelator> {
    family.relators()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Block {
    Left(usize),
    Right(usize),
    Absent,
}

fn block(family: &RelatorFamily, j: usize, g: GeneratorIndex) -> Block {
    match family.position(g) {
        Some(a) if a <= j => Block::Left(a),
        Some(b) => Block::Right(b),
        None => Block::Absent,
    }
}

/// Order-2 coefficients of `R^j`: `+1` when `k` sits in the left block and `l`
/// in the right block, `−1` in the mirrored case, `0` otherwise.
pub fn eps2_family(
    family: &RelatorFamily,
    j: usize,
    k: GeneratorIndex,
    l: GeneratorIndex,
    modulus: Modulus,
) -> Result<BigInt, MagnusError> {
    family.check_j(j)?;
    let value = match (block(family, j, k), block(family, j, l)) {
        (Block::Left(_), Block::Right(_)) => 1,
        (Block::Right(_), Block::Left(_)) => -1,
        _ => 0,
    };
    Ok(modulus.canonical(BigInt::from(value)))
}

/// Order-3 coefficients of `R^j` by the nine-case closed-form table, kept
/// verbatim (non-strict position indicators, first term of the
/// `k=i_a, l=i_b, m=i_{a'}` case read as `ε_k(w_b)`). `a, a'` range over the
/// left block `1..=j`, `b, b'` over the right block. Known to disagree with
/// [`eps`] on some inputs; see [`audit_family`].
pub fn eps3_family(
    family: &RelatorFamily,
    j: usize,
    k: GeneratorIndex,
    l: GeneratorIndex,
    m: GeneratorIndex,
    modulus: Modulus,
) -> Result<BigInt, MagnusError> {
    use Block::{Absent, Left, Right};
    family.check_j(j)?;
    let e = |g: GeneratorIndex, pos: usize| family.conjugator_sum(pos, g);
    let le = |x: usize, y: usize| (x <= y) as i64;
    let value = match (block(family, j, k), block(family, j, l), block(family, j, m)) {
        (Left(_), Right(b), Absent) => e(m, b),
        (Right(_), Left(a), Absent) => -e(m, a),
        (Left(a), Left(a2), Right(b)) => e(l, b) + e(k, a2) - e(l, a) + le(a, a2),
        (Right(b), Right(b2), Left(a)) => e(l, a) + e(k, b2) - e(l, b) + le(b, b2),
        (Left(_), Right(b), Left(_)) => e(k, b) - e(m, b) - 1,
        (Left(a), Right(b), Right(b2)) => e(l, b2) - e(l, a) - e(m, b) + le(b, b2) - 1,
        (Right(_), Left(a), Right(_)) => e(k, a) - e(m, a) + 1,
        (Right(b), Left(a), Left(a2)) => e(l, a2) - e(l, b) - e(m, a) + le(a, a2) + 1,
        _ => 0,
    };
    Ok(modulus.canonical(BigInt::from(value)))
}

/// A closed-form value that disagrees with the fold.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyDiscrepancy {
    pub relator: String,
    pub index: Vec<u32>,
    pub closed_form: i64,
    pub oracle: i64,
}

impl fmt::Display for FamilyDiscrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.index.iter().map(|i| i.to_string()).collect();
        write!(
            f,
            "{} ({}): closed form {}, oracle {}",
            self.relator,
            idx.join(","),
            self.closed_form,
            self.oracle
        )
    }
}

fn small(x: &BigInt) -> i64 {
    i64::try_from(x).expect("family coefficients are small")
}

/// Compares [`eps2_family`] and [`eps3_family`] against the fold, over `Z`,
/// for every relator of `family` and every index pair and triple in
/// `1..=num_generators`. Returns the disagreements in evaluation order.
pub fn audit_family(family: &RelatorFamily, num_generators: u32) -> Vec<FamilyDiscrepancy> {
    let gens: Vec<GeneratorIndex> = (1..=num_generators).filter_map(GeneratorIndex::new).collect();
    let mut out = Vec::new();
    for rel in family.relators() {
        for &k in &gens {
            for &l in &gens {
                let closed = eps2_family(family, rel.j, k, l, Modulus::Integer).expect("j in range");
                let oracle = eps_int(&rel.word, &[k, l]);
                if closed != oracle {
                    out.push(FamilyDiscrepancy {
                        relator: rel.name.clone(),
                        index: vec![k.get(), l.get()],
                        closed_form: small(&closed),
                        oracle: small(&oracle),
                    });
                }
                for &m in &gens {
                    let closed = eps3_family(family, rel.j, k, l, m, Modulus::Integer).expect("j in range");
                    let oracle = eps_int(&rel.word, &[k, l, m]);
                    if closed != oracle {
                        out.push(FamilyDiscrepancy {
                            relator: rel.name.clone(),
                            index: vec![k.get(), l.get(), m.get()],
                            closed_form: small(&closed),
                            oracle: small(&oracle),
                        });
                    }
                }
            }
        }
    }
    out
}
