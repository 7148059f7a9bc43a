//! End-to-end checks of two known computations: the non-vanishing
//! product `⟨α, α, β⟩` on `A(p,1,3)` and the `F_2` table for the conic with
//! three tangent lines. Both the CLI `verify` command and the acceptance tests
//! run these.

use serde::Serialize;

use crate::cohomology::{
    cpi_component, cup, in_resonance, indeterminacy, massey_mod_indeterminacy, theorem_fixture, CohomologyError, OneClass,
    TwoClass,
};
use crate::field::Prime;
use crate::linalg::{in_span, FpVector};
use crate::presentation::{kty_presentation, monomial_presentation, Presentation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stage {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoordinateMismatch {
    pub relator: String,
    pub computed: u32,
    pub expected: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MainReport {
    pub theorem: &'static str,
    pub prime: u32,
    pub generators: usize,
    pub relators: usize,
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub representative: Vec<u32>,
    pub expected: Vec<u32>,
    pub relator_names: Vec<String>,
    pub indeterminacy_rank: usize,
    pub exact_mismatches: Vec<CoordinateMismatch>,
    pub vanishes: bool,
    pub stages: Vec<Stage>,
    pub passed: bool,
}

/// Coefficient of relator `name` in the closed-form value of `⟨α, α, β⟩`:
/// `(j−1)` on `C^j` for `j ≤ p` and `p−1` on `C^{p+1}`, `−1` on `T_s^2`, `t` on
/// `U_{t,s}^1` and `V_{s,t}^1`, `1` on `U^2` and `V^2`, zero elsewhere.
pub fn expected_aab_coefficient(name: &str, p: u32) -> i64 {
    let Some((family, j)) = name.rsplit_once('^') else { return 0 };
    let Ok(j) = j.parse::<i64>() else { return 0 };
    let pair = |rest: &str| -> Option<(i64, i64)> {
        let (a, b) = rest.split_once(',')?;
        Some((a.parse().ok()?, b.parse().ok()?))
    };
    if family == "C" {
        return if j <= p as i64 { j - 1 } else { p as i64 - 1 };
    }
    if family.starts_with("T_") && j == 2 {
        return -1;
    }
    if let Some((t, _)) = family.strip_prefix("U_").and_then(pair) {
        return if j == 1 { t } else { 1 };
    }
    if let Some((_, t)) = family.strip_prefix("V_").and_then(pair) {
        return if j == 1 { t } else { 1 };
    }
    0
}

pub fn expected_aab(pres: &Presentation, prime: Prime) -> TwoClass {
    let values: Vec<i64> = pres.relators().iter().map(|r| expected_aab_coefficient(&r.name, prime.get())).collect();
    TwoClass::from_i64(prime, &values)
}

fn stage(name: &'static str, passed: bool, detail: impl Into<String>) -> Stage {
    Stage { name, passed, detail: detail.into() }
}

/// Runs every step for `A(p,1,3)`, `p` an odd prime, recording a named stage
/// for each. Errors only when `p` is not an odd prime.
pub fn verify_main(p: u32) -> Result<MainReport, CohomologyError> {
    let (alpha, beta) = theorem_fixture(p)?;
    let prime = alpha.prime();
    let pres = monomial_presentation(p).expect("p >= 3");
    let mut stages = Vec::new();

    let (n, m) = (pres.num_generators(), pres.num_relators());
    let (want_n, want_m) = (3 * p as usize + 3, (2 * p * p + 6 * p + 3) as usize);
    stages.push(stage(
        "presentation_counts",
        n == want_n && m == want_m,
        format!("{n} generators, {m} relators (expected {want_n}, {want_m})"),
    ));
    stages.push(stage("theorem_fixture", true, format!("alpha = {alpha}; beta = {beta}")));

    let cpi = cpi_component(p, prime)?;
    let (a_in, b_in) = (cpi.contains(&alpha)?, cpi.contains(&beta)?);
    let res = in_resonance(&pres, &alpha)?;
    stages.push(stage(
        "cpi_membership",
        a_in && b_in && res.resonant,
        format!("alpha in C_Pi: {a_in}; beta in C_Pi: {b_in}; dim C_Pi = {}; alpha resonant: {}", cpi.dim, res.resonant),
    ));

    let ab = cup(&pres, &alpha, &beta)?;
    let aa = cup(&pres, &alpha, &alpha)?;
    stages.push(stage(
        "cup_vanishing",
        ab.is_zero() && aa.is_zero(),
        format!("alpha∪beta zero: {}; alpha∪alpha zero: {}", ab.is_zero(), aa.is_zero()),
    ));

    let outcome = match massey_mod_indeterminacy(&pres, &alpha, &alpha, &beta) {
        Ok(o) => o,
        Err(e) => {
            stages.push(stage("massey_representative", false, e.to_string()));
            return Ok(MainReport {
                theorem: "main",
                prime: p,
                generators: n,
                relators: m,
                alpha: alpha.entries().to_vec(),
                beta: beta.entries().to_vec(),
                representative: Vec::new(),
                expected: Vec::new(),
                relator_names: pres.relator_names(),
                indeterminacy_rank: 0,
                exact_mismatches: Vec::new(),
                vanishes: true,
                stages,
                passed: false,
            });
        }
    };
    let rep = &outcome.representative;
    stages.push(stage(
        "massey_representative",
        true,
        format!("{} nonzero coordinates", rep.coords().support().len()),
    ));

    let expected = expected_aab(&pres, prime);
    let exact_mismatches: Vec<CoordinateMismatch> = pres
        .relators()
        .iter()
        .enumerate()
        .filter(|&(l, _)| rep.entries()[l] != expected.entries()[l])
        .map(|(l, r)| CoordinateMismatch {
            relator: r.name.clone(),
            computed: rep.entries()[l],
            expected: expected.entries()[l],
        })
        .collect();
    stages.push(stage(
        "expected_pattern_exact",
        exact_mismatches.is_empty(),
        if exact_mismatches.is_empty() {
            "representative equals the closed-form pattern".to_string()
        } else {
            let names: Vec<&str> = exact_mismatches.iter().map(|d| d.relator.as_str()).collect();
            format!("differs at {}", names.join(", "))
        },
    ));

    let basis = indeterminacy(&pres, &alpha, &beta)?;
    let diff: FpVector = rep.coords().sub(expected.coords())?;
    let vectors: Vec<FpVector> = basis.iter().map(|c| c.coords().clone()).collect();
    let coset = in_span(&diff, &vectors)?.is_some();
    stages.push(stage(
        "expected_pattern_coset",
        coset,
        format!("representative − pattern in indeterminacy (rank {}): {coset}", basis.len()),
    ));

    stages.push(stage(
        "non_vanishing",
        !outcome.vanishes,
        format!("representative in indeterminacy: {}", outcome.vanishes),
    ));

    let passed = stages.iter().all(|s| s.passed);
    Ok(MainReport {
        theorem: "main",
        prime: p,
        generators: n,
        relators: m,
        alpha: alpha.entries().to_vec(),
        beta: beta.entries().to_vec(),
        representative: rep.entries().to_vec(),
        expected: expected.entries().to_vec(),
        relator_names: pres.relator_names(),
        indeterminacy_rank: outcome.indeterminacy_rank(),
        exact_mismatches,
        vanishes: outcome.vanishes,
        stages,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CupEntry {
    pub i: usize,
    pub j: usize,
    pub value: Vec<u32>,
}

/// One `(α, β)` pair of the exhaustive `⟨α, α, β⟩` table over `F_2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KtyPair {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub defined: bool,
    pub representative: Option<Vec<u32>>,
    pub vanishes: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KtyAlphaVerdict {
    pub alpha: Vec<u32>,
    /// Some β with `⟨α, α, β⟩` defined and non-vanishing.
    pub witness_beta: Option<Vec<u32>>,
    pub claimed_non_vanishing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KtyReport {
    pub theorem: &'static str,
    pub prime: u32,
    pub relator_names: Vec<String>,
    pub cup_table: Vec<CupEntry>,
    pub cup_table_ok: bool,
    pub pairs: Vec<KtyPair>,
    pub alphas: Vec<KtyAlphaVerdict>,
    pub claim_holds: bool,
    pub stages: Vec<Stage>,
    pub passed: bool,
}

fn bits(v: u32) -> Vec<i64> {
    (0..3).map(|b| ((v >> b) & 1) as i64).collect()
}

/// Cup table on the basis and the exhaustive table of `⟨α, α, β⟩` over all
/// `(α, β) ∈ (F_2^3)^2`, checked against: the only nonzero products are
/// `e_1∪e_2 = e_2∪e_1`, and every `α ∉ {0, e_1+e_2+e_3}` has some `β` making
/// the product defined and non-vanishing.
pub fn verify_kty() -> KtyReport {
    let pres = kty_presentation();
    let f2 = Prime::new(2).expect("2 is prime");
    let e = |i| OneClass::basis(f2, 3, i);
    let mut cup_table = Vec::new();
    let mut nonzero_pairs = Vec::new();
    for i in 1..=3 {
        for j in 1..=3 {
            let c = cup(&pres, &e(i), &e(j)).expect("valid classes");
            if !c.is_zero() {
                nonzero_pairs.push((i.min(j), i.max(j), c.entries().to_vec()));
            }
            cup_table.push(CupEntry { i, j, value: c.entries().to_vec() });
        }
    }
    nonzero_pairs.sort();
    nonzero_pairs.dedup();
    let cup_table_ok = nonzero_pairs == vec![(1, 2, vec![0, 0, 1])];

    let mut pairs = Vec::new();
    let mut alphas = Vec::new();
    for a in 0..8u32 {
        let alpha = OneClass::from_i64(f2, &bits(a));
        let mut witness_beta = None;
        for b in 0..8u32 {
            let beta = OneClass::from_i64(f2, &bits(b));
            let pair = match massey_mod_indeterminacy(&pres, &alpha, &alpha, &beta) {
                Ok(out) => {
                    if !out.vanishes && witness_beta.is_none() {
                        witness_beta = Some(beta.entries().to_vec());
                    }
                    KtyPair {
                        alpha: alpha.entries().to_vec(),
                        beta: beta.entries().to_vec(),
                        defined: true,
                        representative: Some(out.representative.entries().to_vec()),
                        vanishes: Some(out.vanishes),
                    }
                }
                Err(CohomologyError::UndefinedProduct { .. }) => KtyPair {
                    alpha: alpha.entries().to_vec(),
                    beta: beta.entries().to_vec(),
                    defined: false,
                    representative: None,
                    vanishes: None,
                },
                Err(other) => panic!("unexpected error on F_2^3 classes: {other}"),
            };
            pairs.push(pair);
        }
        alphas.push(KtyAlphaVerdict {
            alpha: alpha.entries().to_vec(),
            witness_beta,
            claimed_non_vanishing: a != 0 && a != 7,
        });
    }
    let failing: Vec<String> = alphas
        .iter()
        .filter(|v| v.claimed_non_vanishing && v.witness_beta.is_none())
        .map(|v| format!("({})", v.alpha.iter().map(u32::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    let claim_holds = failing.is_empty();
    let stages = vec![
        stage(
            "cup_table",
            cup_table_ok,
            format!("nonzero basis products: {}", nonzero_pairs.iter().map(|(i, j, _)| format!("e{i}∪e{j}")).collect::<Vec<_>>().join(", ")),
        ),
        stage("massey_table", true, format!("{} pairs, {} defined", pairs.len(), pairs.iter().filter(|p| p.defined).count())),
        stage(
            "non_vanishing_claim",
            claim_holds,
            if claim_holds {
                "every alpha off the diagonal line has a non-vanishing product".to_string()
            } else {
                format!("all defined products vanish for alpha in {}", failing.join(", "))
            },
        ),
    ];
    let passed = cup_table_ok && claim_holds;
    KtyReport {
        theorem: "kty",
        prime: 2,
        relator_names: pres.relator_names(),
        cup_table,
        cup_table_ok,
        pairs,
        alphas,
        claim_holds,
        stages,
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expected_pattern_at_three() {
        let pres = monomial_presentation(3).unwrap();
        let f3 = Prime::new(3).unwrap();
        let exp = expected_aab(&pres, f3);
        let at = |name: &str| exp.entries()[pres.relator_index(name).unwrap()];
        assert_eq!([at("C^1"), at("C^2"), at("C^3"), at("C^4")], [0, 1, 2, 2]);
        assert_eq!([at("T_1^1"), at("T_1^2"), at("T_3^2")], [0, 2, 2]);
        assert_eq!([at("U_1,2^1"), at("U_1,3^1"), at("U_2,3^1"), at("U_2,3^2")], [1, 1, 2, 1]);
        assert_eq!([at("V_1,1^1"), at("V_1,2^1"), at("V_2,2^1"), at("V_1,2^2")], [1, 2, 2, 1]);
        assert_eq!([at("A^2"), at("D3_1^1"), at("B^4")], [0, 0, 0]);
    }

    #[test]
    fn main_theorem_at_three() {
        let report = verify_main(3).unwrap();
        for s in &report.stages {
            assert!(s.passed, "{}: {}", s.name, s.detail);
        }
        assert!(!report.vanishes);
        assert!(report.exact_mismatches.is_empty());
        assert!(matches!(verify_main(2), Err(CohomologyError::EvenPrime(2))));
        assert!(verify_main(4).is_err());
    }

    #[test]
    fn kty_table_shape() {
        let report = verify_kty();
        assert!(report.cup_table_ok);
        assert_eq!(report.pairs.len(), 64);
        let alpha = |a: [u32; 3]| report.alphas.iter().find(|v| v.alpha == a).unwrap();
        assert!(alpha([1, 0, 0]).witness_beta.is_some());
        assert!(alpha([0, 0, 1]).witness_beta.is_some());
        assert!(alpha([1, 1, 0]).witness_beta.is_some());
        assert!(alpha([1, 0, 1]).witness_beta.is_none());
        assert!(alpha([0, 1, 1]).witness_beta.is_none());
        assert!(!report.claim_holds);
    }
}
