use massey_core::cohomology::{cpi_component, cup, massey, OneClass, TwoClass};
use massey_core::magnus::{eps, eps2_conjugated_product, ConjugatedGenerator, MultiIndex};
use massey_core::presentation::{kty_presentation, monomial_presentation, Origin, Presentation};
use massey_core::word::{x, GeneratorIndex, Word};
use massey_core::{FpVector, Modulus, Prime};
use num_bigint::BigInt;
use proptest::prelude::*;

fn g(i: u32) -> GeneratorIndex {
    GeneratorIndex::new(i).unwrap()
}

fn eps_z(index: &[u32], w: &Word) -> BigInt {
    eps(&MultiIndex::from_u32(index), w, Modulus::Integer)
}

#[test]
fn frozen_coefficients() {
    let c = Word::commutator(&x(1), &x(2));
    assert_eq!(eps_z(&[1, 2], &c), BigInt::from(1));
    assert_eq!(eps_z(&[2, 1], &c), BigInt::from(-1));
    assert_eq!(eps_z(&[1, 2, 2], &c), BigInt::from(-1));
    assert_eq!(eps_z(&[2, 1, 2], &c), BigInt::from(1));
    assert_eq!(eps_z(&[1, 1, 2], &c), BigInt::from(0));
    assert_eq!(eps_z(&[1, 1, 1], &c), BigInt::from(0));
    assert_eq!(eps_z(&[1, 1], &x(1).inverse()), BigInt::from(1));
    assert_eq!(eps_z(&[1, 1, 1], &x(1).inverse()), BigInt::from(-1));

    let conj = [ConjugatedGenerator::new(g(1), x(3))];
    let closed = eps2_conjugated_product(&conj, g(1), g(3), Modulus::Integer);
    assert_eq!(closed, BigInt::from(-1));
    assert_eq!(eps_z(&[1, 3], &conj[0].flatten()), closed);
}

#[test]
fn cpi_dimension_law() {
    for p in [3u32, 5, 7] {
        let prime = Prime::new(p).unwrap();
        for r in 2..=7u32 {
            let c = cpi_component(r, prime).unwrap();
            let expected = if r % p == 0 { 3 } else { 2 };
            assert_eq!(c.dim, expected, "r={r} p={p}");
        }
    }
    let two = Prime::new(2).unwrap();
    for r in [4u32, 8] {
        assert_eq!(cpi_component(r, two).unwrap().dim, 3, "r={r} p=2");
    }
}

#[test]
fn cup_antisymmetric_on_builtins() {
    let prime = Prime::new(3).unwrap();
    for pres in [kty_presentation(), monomial_presentation(3).unwrap()] {
        let n = pres.num_generators();
        for i in 1..=n {
            let ei = OneClass::basis(prime, n, i);
            assert!(cup(&pres, &ei, &ei).unwrap().is_zero());
            for j in i + 1..=n {
                let ej = OneClass::basis(prime, n, j);
                let ij = cup(&pres, &ei, &ej).unwrap();
                let ji = cup(&pres, &ej, &ei).unwrap();
                assert!(ij.add(&ji).unwrap().is_zero(), "e{i}, e{j}");
            }
        }
    }
}

fn cpi_class(basis: &[FpVector], prime: Prime, coeffs: &[u32]) -> OneClass {
    let n = basis[0].len();
    let v = basis.iter().zip(coeffs).fold(FpVector::zero(prime, n), |acc, (b, &c)| acc.add(&b.scale(c)).unwrap());
    OneClass::new(v)
}

fn relabelled(pres: &Presentation, order: &[usize]) -> Presentation {
    let mut b = Presentation::builder(pres.num_generators(), Origin::Custom);
    for &i in order {
        let rel = &pres.relators()[i];
        b.relator(rel.name.clone(), rel.word.clone()).unwrap();
    }
    b.build()
}

fn by_name(pres: &Presentation, class: &TwoClass) -> Vec<(String, u32)> {
    let mut v: Vec<_> = pres.relator_names().into_iter().zip(class.entries().iter().copied()).collect();
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn massey_trilinear_within_cpi(
        a in prop::collection::vec(0u32..3, 3),
        a2 in prop::collection::vec(0u32..3, 3),
        b in prop::collection::vec(0u32..3, 3),
        c in prop::collection::vec(0u32..3, 3),
        s in 0u32..3,
    ) {
        let prime = Prime::new(3).unwrap();
        let pres = monomial_presentation(3).unwrap();
        let comp = cpi_component(3, prime).unwrap();
        let (alpha, alpha2) = (cpi_class(&comp.basis, prime, &a), cpi_class(&comp.basis, prime, &a2));
        let (beta, gamma) = (cpi_class(&comp.basis, prime, &b), cpi_class(&comp.basis, prime, &c));
        let mixed = alpha.add(&alpha2.scale(s)).unwrap();
        let lhs = massey(&pres, &mixed, &beta, &gamma).unwrap();
        let rhs = massey(&pres, &alpha, &beta, &gamma).unwrap()
            .add(&massey(&pres, &alpha2, &beta, &gamma).unwrap().scale(s)).unwrap();
        prop_assert_eq!(lhs, rhs);
        let mixed_gamma = gamma.add(&alpha2.scale(s)).unwrap();
        let lhs = massey(&pres, &alpha, &beta, &mixed_gamma).unwrap();
        let rhs = massey(&pres, &alpha, &beta, &gamma).unwrap()
            .add(&massey(&pres, &alpha, &beta, &alpha2).unwrap().scale(s)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn relator_order_does_not_matter(
        order in Just((0..39usize).collect::<Vec<_>>()).prop_shuffle(),
        a in prop::collection::vec(0u32..5, 12),
        b in prop::collection::vec(0u32..5, 12),
    ) {
        let prime = Prime::new(5).unwrap();
        let pres = monomial_presentation(3).unwrap();
        let shuffled = relabelled(&pres, &order);
        let alpha = OneClass::new(FpVector::from_u32(prime, a));
        let beta = OneClass::new(FpVector::from_u32(prime, b));
        let base = cup(&pres, &alpha, &beta).unwrap();
        let moved = cup(&shuffled, &alpha, &beta).unwrap();
        prop_assert_eq!(by_name(&pres, &base), by_name(&shuffled, &moved));
    }
}
