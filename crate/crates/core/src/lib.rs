//! Fox calculus, cup products and triple Massey products in the cohomology of
//! finitely presented groups with commutator relators.

pub mod cli;
pub mod cohomology;
pub mod field;
pub mod linalg;
pub mod magnus;
pub mod presentation;
pub mod theorem;
pub mod word;

pub use field::{Modulus, Prime};
pub use linalg::{FpMatrix, FpVector};
pub use magnus::{eps, MultiIndex, RelatorFamily};
pub use presentation::{kty_presentation, monomial_presentation, Presentation};
pub use word::{GeneratorIndex, Word};
