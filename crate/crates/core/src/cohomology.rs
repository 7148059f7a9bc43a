//! Cup products, triple Massey products and resonance in `H^*(G; F_p)` for a
//! group given by a presentation with commutator relators.
//!
//! `H^1` has the basis `e_1, …, e_n` dual to the generators and `H^2` the
//! basis dual to the relators, in presentation order. On relator `R_l`,
//!
//! ```text
//! (α ∪ β)_l     = Σ α_i β_j ε_{i,j}(R_l)
//! ⟨α, β, γ⟩_l  ∋ Σ α_i β_j γ_k ε_{i,j,k}(R_l)
//! ```
//!
//! and the Massey product is defined up to `α ∪ H^1 + H^1 ∪ γ`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::field::{FieldError, Prime};
use crate::linalg::{echelon_basis, in_span, FpMatrix, FpVector, LinalgError};
use crate::magnus::eps_weighted;
use crate::presentation::Presentation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("class has {found} coordinates, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("classes live over different fields (F_{0} and F_{1})")]
    FieldMismatch(u32, u32),
    #[error("undefined product: cup({pair}) ≠ 0 at relator {relator}")]
    UndefinedProduct { pair: &'static str, relator: String },
    #[error("the zero class is not a valid resonance point")]
    ZeroClass,
    #[error("resonance component needs r >= 2, got {0}")]
    Rank(u32),
    #[error("theorem classes need an odd prime, got {0}")]
    EvenPrime(u32),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A class in `H^1`, coordinates in the basis dual to the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OneClass {
    coords: FpVector,
}

/// A class in `H^2`, coordinates in the basis dual to the relators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwoClass {
    coords: FpVector,
}

macro_rules! class_common {
    ($ty:ident) => {
        impl $ty {
            pub fn new(coords: FpVector) -> Self {
                $ty { coords }
            }

            pub fn from_i64(prime: Prime, values: &[i64]) -> Self {
                $ty { coords: FpVector::from_i64(prime, values) }
            }

            pub fn zero(prime: Prime, len: usize) -> Self {
                $ty { coords: FpVector::zero(prime, len) }
            }

            pub fn prime(&self) -> Prime {
                self.coords.prime()
            }

            pub fn len(&self) -> usize {
                self.coords.len()
            }

            pub fn is_empty(&self) -> bool {
                self.coords.is_empty()
            }

            pub fn coords(&self) -> &FpVector {
                &self.coords
            }

            pub fn entries(&self) -> &[u32] {
                self.coords.entries()
            }

            pub fn is_zero(&self) -> bool {
                self.coords.is_zero()
            }

            pub fn add(&self, other: &$ty) -> Result<$ty, CohomologyError> {
                Ok($ty { coords: self.coords.add(&other.coords)? })
            }

            pub fn scale(&self, c: u32) -> $ty {
                $ty { coords: self.coords.scale(c) }
            }

            pub fn neg(&self) -> $ty {
                $ty { coords: self.coords.neg() }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.coords.fmt(f)
            }
        }
    };
}

class_common!(OneClass);
class_common!(TwoClass);

impl OneClass {
    /// The dual basis class `e_i`, 1-based.
    pub fn basis(prime: Prime, len: usize, i: usize) -> Self {
        OneClass { coords: FpVector::unit(prime, len, i - 1) }
    }

    /// Parses comma-separated integers, reducing each mod `p`.
    pub fn parse_csv(prime: Prime, text: &str) -> Result<Self, String> {
        let values = text
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| format!("bad class coordinate {:?}", t.trim())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(OneClass::from_i64(prime, &values))
    }
}

fn check_one(pres: &Presentation, class: &OneClass, prime: Prime) -> Result<(), CohomologyError> {
    if class.prime() != prime {
        return Err(CohomologyError::FieldMismatch(prime.get(), class.prime().get()));
    }
    if class.len() != pres.num_generators() {
        return Err(CohomologyError::Dimension { expected: pres.num_generators(), found: class.len() });
    }
    Ok(())
}

fn evaluate(pres: &Presentation, classes: &[&OneClass]) -> Result<TwoClass, CohomologyError> {
    let prime = classes[0].prime();
    for c in classes {
        check_one(pres, c, prime)?;
    }
    let weights: Vec<&[u32]> = classes.iter().map(|c| c.entries()).collect();
    let values = pres.relators().iter().map(|r| eps_weighted(&weights, &r.word, prime)).collect();
    Ok(TwoClass { coords: FpVector::from_u32(prime, values) })
}

/// `α ∪ β`.
pub fn cup(pres: &Presentation, alpha: &OneClass, beta: &OneClass) -> Result<TwoClass, CohomologyError> {
    evaluate(pres, &[alpha, beta])
}

fn require_vanishing(
    pres: &Presentation,
    pair: &'static str,
    left: &OneClass,
    right: &OneClass,
) -> Result<(), CohomologyError> {
    let c = cup(pres, left, right)?;
    match c.coords.support().first() {
        None => Ok(()),
        Some(&l) => Err(CohomologyError::UndefinedProduct { pair, relator: pres.relators()[l].name.clone() }),
    }
}

/// The representative `ξ` of `⟨α, β, γ⟩` with
/// `ξ_l = Σ α_i β_j γ_k ε_{i,j,k}(R_l)`. Fails unless `α∪β = β∪γ = 0`.
pub fn massey(pres: &Presentation, alpha: &OneClass, beta: &OneClass, gamma: &OneClass) -> Result<TwoClass, CohomologyError> {
    require_vanishing(pres, "α,β", alpha, beta)?;
    require_vanishing(pres, "β,γ", beta, gamma)?;
    evaluate(pres, &[alpha, beta, gamma])
}

/// The spanning set `cup(α, e_1), …, cup(α, e_n), cup(e_1, γ), …, cup(e_n, γ)`,
/// in that order.
pub fn indeterminacy_spanning_set(
    pres: &Presentation,
    alpha: &OneClass,
    gamma: &OneClass,
) -> Result<Vec<TwoClass>, CohomologyError> {
    let prime = alpha.prime();
    check_one(pres, gamma, prime)?;
    let n = pres.num_generators();
    let mut out = Vec::with_capacity(2 * n);
    for i in 1..=n {
        out.push(cup(pres, alpha, &OneClass::basis(prime, n, i))?);
    }
    for i in 1..=n {
        out.push(cup(pres, &OneClass::basis(prime, n, i), gamma)?);
    }
    Ok(out)
}

/// Echelonized basis of `α ∪ H^1 + H^1 ∪ γ`.
pub fn indeterminacy(pres: &Presentation, alpha: &OneClass, gamma: &OneClass) -> Result<Vec<TwoClass>, CohomologyError> {
    let span = indeterminacy_spanning_set(pres, alpha, gamma)?;
    let vectors: Vec<FpVector> = span.into_iter().map(|c| c.coords).collect();
    let basis = echelon_basis(alpha.prime(), pres.num_relators(), &vectors)?;
    Ok(basis.into_iter().map(TwoClass::new).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MasseyOutcome {
    pub representative: TwoClass,
    pub indeterminacy_basis: Vec<TwoClass>,
    pub vanishes: bool,
    /// Coordinates of the representative in `indeterminacy_basis`.
    pub witness: Option<FpVector>,
    /// Classes `(a, b)` with `ξ = α ∪ a + b ∪ γ`, when the product vanishes.
    pub witness_classes: Option<(OneClass, OneClass)>,
}

#[derive(Serialize)]
struct MasseyJson {
    representative: Vec<u32>,
    relator_names: Vec<String>,
    indeterminacy_rank: usize,
    vanishes: bool,
    witness: Option<Vec<u32>>,
}

impl MasseyOutcome {
    pub fn indeterminacy_rank(&self) -> usize {
        self.indeterminacy_basis.len()
    }

    pub fn to_json(&self, pres: &Presentation) -> serde_json::Value {
        serde_json::to_value(MasseyJson {
            representative: self.representative.entries().to_vec(),
            relator_names: pres.relator_names(),
            indeterminacy_rank: self.indeterminacy_rank(),
            vanishes: self.vanishes,
            witness: self.witness.as_ref().map(|w| w.entries().to_vec()),
        })
        .expect("outcome serializes")
    }
}

/// Decides whether `⟨α, β, γ⟩` contains zero.
pub fn massey_mod_indeterminacy(
    pres: &Presentation,
    alpha: &OneClass,
    beta: &OneClass,
    gamma: &OneClass,
) -> Result<MasseyOutcome, CohomologyError> {
    let representative = massey(pres, alpha, beta, gamma)?;
    let basis = indeterminacy(pres, alpha, gamma)?;
    let basis_vectors: Vec<FpVector> = basis.iter().map(|c| c.coords.clone()).collect();
    let witness = in_span(&representative.coords, &basis_vectors)?;
    let witness_classes = match witness {
        None => None,
        Some(_) => {
            let span: Vec<FpVector> =
                indeterminacy_spanning_set(pres, alpha, gamma)?.into_iter().map(|c| c.coords).collect();
            let solution = in_span(&representative.coords, &span)?.expect("representative lies in the span");
            let n = pres.num_generators();
            let (a, b) = solution.entries().split_at(n);
            let prime = alpha.prime();
            Some((
                OneClass::new(FpVector::from_u32(prime, a.to_vec())),
                OneClass::new(FpVector::from_u32(prime, b.to_vec())),
            ))
        }
    };
    Ok(MasseyOutcome { representative, indeterminacy_basis: basis, vanishes: witness.is_some(), witness, witness_classes })
}

/// Result of testing a class against the resonance variety.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResonanceTest {
    pub resonant: bool,
    /// Some `μ ∉ F_p·λ` with `λ ∪ μ = 0`.
    pub witness: Option<OneClass>,
    /// Dimension of `{μ : λ ∪ μ = 0}`.
    pub kernel_dim: usize,
}

/// Whether `λ` lies in the resonance variety: some `μ` off the line `F_p·λ`
/// has `λ ∪ μ = 0`.
pub fn in_resonance(pres: &Presentation, lambda: &OneClass) -> Result<ResonanceTest, CohomologyError> {
    if lambda.is_zero() {
        return Err(CohomologyError::ZeroClass);
    }
    let prime = lambda.prime();
    let n = pres.num_generators();
    check_one(pres, lambda, prime)?;
    let columns: Vec<FpVector> = (1..=n)
        .map(|i| cup(pres, lambda, &OneClass::basis(prime, n, i)).map(|c| c.coords))
        .collect::<Result<_, _>>()?;
    let kernel = FpMatrix::from_columns(prime, pres.num_relators(), &columns)?.nullspace();
    let witness = kernel.iter().find(|v| {
        let pair = [lambda.coords.clone(), (*v).clone()];
        FpMatrix::from_row_vectors(prime, n, &pair).map(|m| m.rank() == 2).unwrap_or(false)
    });
    Ok(ResonanceTest {
        resonant: witness.is_some(),
        witness: witness.cloned().map(OneClass::new),
        kernel_dim: kernel.len(),
    })
}

/// The linear component `C_Π` of the resonance variety of the monomial
/// arrangement `A(r,1,3)` over `F_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResonanceComponent {
    pub prime: Prime,
    pub r: u32,
    /// One row per equation, columns `λ_1 … λ_{3r+3}`.
    pub equations: FpMatrix,
    pub basis: Vec<FpVector>,
    pub dim: usize,
}

impl ResonanceComponent {
    pub fn contains(&self, class: &OneClass) -> Result<bool, CohomologyError> {
        Ok(self.equations.mul_vec(class.coords())?.is_zero())
    }
}

/// Rows `Σ_{i∈S} λ_i = 0` for each index set `S` (1-based).
fn sum_rows(n: usize, sets: &[Vec<u32>]) -> Vec<Vec<i64>> {
    sets.iter()
        .map(|s| {
            let mut row = vec![0i64; n];
            s.iter().for_each(|&i| row[i as usize - 1] += 1);
            row
        })
        .collect()
}

/// The three pencil-sum equations `λ_1+…+λ_r = λ_{r+1}+…+λ_{2r−1} =
/// λ_{2r+1}+…+λ_{3r−1} = 0`. These reject the classes of the non-vanishing
/// theorem and are left out of [`cpi_component`].
pub fn cpi_block_sum_rows(r: u32) -> Vec<Vec<i64>> {
    let n = 3 * r as usize + 3;
    sum_rows(n, &[(1..=r).collect(), (r + 1..2 * r).collect(), (2 * r + 1..3 * r).collect()])
}

/// The triangle equations and the vanishing of the three coordinate
/// hyperplane classes.
pub fn cpi_rows(r: u32) -> Vec<Vec<i64>> {
    let n = 3 * r as usize + 3;
    let mut sets = Vec::new();
    for i in 1..=r {
        sets.push(vec![i, 2 * r, 2 * r + i]);
    }
    for i in 1..=r {
        for j in 1..i {
            sets.push(vec![i, 2 * r - j, 2 * r + i - j]);
        }
    }
    for j in 1..r {
        for i in 1..=j {
            sets.push(vec![i, 2 * r - j, 3 * r + i - j]);
        }
    }
    for i in 3 * r + 1..=3 * r + 3 {
        sets.push(vec![i]);
    }
    sum_rows(n, &sets)
}

/// `C_Π` over `F_p`: the null space of [`cpi_rows`].
pub fn cpi_component(r: u32, prime: Prime) -> Result<ResonanceComponent, CohomologyError> {
    if r < 2 {
        return Err(CohomologyError::Rank(r));
    }
    let n = 3 * r as usize + 3;
    let equations = FpMatrix::from_rows(prime, n, &cpi_rows(r))?;
    let basis = equations.nullspace();
    let dim = basis.len();
    Ok(ResonanceComponent { prime, r, equations, basis, dim })
}

/// The classes `α, β` of `A(p,1,3)` over `F_p` whose product `⟨α, α, β⟩` does
/// not vanish: `α = Σ e_i − Σ e_{p+i}`, `β = Σ e_{p+i} − Σ e_{2p+i}`, `1 ≤ i ≤ p`.
pub fn theorem_fixture(p: u32) -> Result<(OneClass, OneClass), CohomologyError> {
    let prime = Prime::new(p)?;
    if p == 2 {
        return Err(CohomologyError::EvenPrime(p));
    }
    let r = p as usize;
    let mut a = vec![0i64; 3 * r + 3];
    let mut b = vec![0i64; 3 * r + 3];
    for i in 0..r {
        a[i] = 1;
        a[r + i] = -1;
        b[r + i] = 1;
        b[2 * r + i] = -1;
    }
    Ok((OneClass::from_i64(prime, &a), OneClass::from_i64(prime, &b)))
}
