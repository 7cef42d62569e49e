//! Verification suites: exhaustive sweeps over parameter grids, each case
//! checked for an exactly-zero residual. Case order is deterministic
//! (lexicographic in (p, q)), so failure reports are reproducible and the
//! smallest counterexample always comes first.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::exact::{dedekind_sum, reciprocity_residual, Rational};
use crate::hfmodel::{
    euler_red_identity_check, minimal_truncation_level, rho_prime_from_d, truncated_chi_enumerate,
    truncated_chi_formula, HFPlusModel, ReducedGenerator, Sign, SpincId, TowerSummand,
};
use crate::lens::{d_sum_check, LensSpace, Orientation};
use crate::surgery::{cross_check_lens, SurgeryProblem};

/// The available verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Reciprocity,
    LensSum,
    LensEul,
    SurgeryCross,
    TorsionMultiset,
    HfmodelTrunc,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Reciprocity => "reciprocity",
            Suite::LensSum => "lens-sum",
            Suite::LensEul => "lens-eul",
            Suite::SurgeryCross => "surgery-cross",
            Suite::TorsionMultiset => "torsion-multiset",
            Suite::HfmodelTrunc => "hfmodel-trunc",
            Suite::All => "all",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        match name {
            "reciprocity" => Some(Suite::Reciprocity),
            "lens-sum" => Some(Suite::LensSum),
            "lens-eul" => Some(Suite::LensEul),
            "surgery-cross" => Some(Suite::SurgeryCross),
            "torsion-multiset" => Some(Suite::TorsionMultiset),
            "hfmodel-trunc" => Some(Suite::HfmodelTrunc),
            "all" => Some(Suite::All),
            _ => None,
        }
    }
}

/// One checked case: an identifier, its exact residual, and the verdict.
#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub id: String,
    pub residual: Rational,
    pub pass: bool,
}

impl CaseResult {
    fn new(id: String, residual: Rational) -> Self {
        let pass = residual.is_zero();
        CaseResult { id, residual, pass }
    }
}

/// Outcome of one suite run.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pmax: i64,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn total(&self) -> usize {
        self.cases.len()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.pass)
    }

    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }
}

/// Run one suite (or all of them) up to the given sweep bound.
pub fn run_suite(suite: Suite, pmax: i64) -> Result<Vec<SuiteReport>> {
    let reports = match suite {
        Suite::Reciprocity => vec![reciprocity_suite(pmax)?],
        Suite::LensSum => vec![lens_sum_suite(pmax)?],
        Suite::LensEul => vec![lens_eul_suite(pmax)?],
        Suite::SurgeryCross => vec![surgery_cross_suite(pmax)?],
        Suite::TorsionMultiset => vec![torsion_multiset_suite(pmax)?],
        Suite::HfmodelTrunc => vec![hfmodel_trunc_suite()?],
        Suite::All => vec![
            reciprocity_suite(pmax)?,
            lens_sum_suite(pmax)?,
            lens_eul_suite(pmax)?,
            surgery_cross_suite(pmax)?,
            torsion_multiset_suite(pmax)?,
            hfmodel_trunc_suite()?,
        ],
    };
    Ok(reports)
}

fn coprime_pairs(pmax: i64) -> impl Iterator<Item = (i64, i64)> {
    (2..=pmax).flat_map(move |p| {
        (1..p)
            .filter(move |&q| num_integer::gcd(p, q) == 1)
            .map(move |q| (p, q))
    })
}

/// Dedekind reciprocity over all coprime 1 <= p, q <= pmax.
pub fn reciprocity_suite(pmax: i64) -> Result<SuiteReport> {
    let mut cases = Vec::new();
    for p in 1..=pmax {
        for q in 1..=pmax {
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            cases.push(CaseResult::new(
                format!("p={p} q={q}"),
                reciprocity_residual(p, q)?,
            ));
        }
    }
    Ok(SuiteReport {
        suite: "reciprocity".to_string(),
        pmax,
        cases,
    })
}

/// The lens sum identity: correction terms of L(-p, q) sum to p s(q, p).
pub fn lens_sum_suite(pmax: i64) -> Result<SuiteReport> {
    let mut cases = Vec::new();
    for (p, q) in coprime_pairs(pmax) {
        cases.push(CaseResult::new(format!("p={p} q={q}"), d_sum_check(p, q)?));
    }
    Ok(SuiteReport {
        suite: "lens-sum".to_string(),
        pmax,
        cases,
    })
}

/// Euler sums of L(-p, q) against -p s(q, p) / 2.
pub fn lens_eul_suite(pmax: i64) -> Result<SuiteReport> {
    let mut cases = Vec::new();
    for (p, q) in coprime_pairs(pmax) {
        let lens = LensSpace::new(p, q, Orientation::Negative)?;
        let total: Rational = lens.eul().values().sum();
        let expected = -Rational::from_integer(p) * dedekind_sum(q, p)? / Rational::from_integer(2);
        cases.push(CaseResult::new(format!("p={p} q={q}"), total - expected));
    }
    Ok(SuiteReport {
        suite: "lens-eul".to_string(),
        pmax,
        cases,
    })
}

/// Two independent computations of the surgered Euler sum and of lambda'
/// for every unknot filling: surgery formula versus lens-space recursion.
pub fn surgery_cross_suite(pmax: i64) -> Result<SuiteReport> {
    let mut cases = Vec::new();
    for r in cross_check_lens(pmax)? {
        cases.push(CaseResult::new(
            format!("p={} q={} eul", r.p, r.q),
            r.residual,
        ));
        let problem = SurgeryProblem::unknot(r.p, r.q)?;
        let lens = LensSpace::new(r.p, r.q, Orientation::Negative)?;
        let lambda_residual =
            problem.lambda_prime_after_surgery() - Rational::from_integer(r.p) * lens.lambda();
        cases.push(CaseResult::new(
            format!("p={} q={} lambda", r.p, r.q),
            lambda_residual,
        ));
    }
    Ok(SuiteReport {
        suite: "surgery-cross".to_string(),
        pmax,
        cases,
    })
}

/// Multiset equality between the Euler characteristics and the shifted
/// torsion values of every lens space in the sweep, both orientations.
pub fn torsion_multiset_suite(pmax: i64) -> Result<SuiteReport> {
    let mut cases = Vec::new();
    let mut pairs: Vec<(i64, i64)> = vec![(1, 0)];
    pairs.extend(coprime_pairs(pmax));
    for (p, q) in pairs {
        for orientation in [Orientation::Negative, Orientation::Positive] {
            let lens = LensSpace::new(p, q, orientation)?;
            let mut eul: Vec<Rational> = lens.eul().into_values().collect();
            eul.sort();
            let torsion = lens.torsion_hat_multiset();
            let mismatches = eul
                .iter()
                .zip(torsion.iter())
                .filter(|(a, b)| a != b)
                .count();
            let tag = match orientation {
                Orientation::Negative => "-",
                Orientation::Positive => "+",
            };
            cases.push(CaseResult::new(
                format!("p={p} q={q} orient={tag}"),
                Rational::from_integer(mismatches as i64),
            ));
        }
    }
    Ok(SuiteReport {
        suite: "torsion-multiset".to_string(),
        pmax,
        cases,
    })
}

/// Number of randomized single-tower cases in the truncation suite.
pub const TRUNCATION_CASES: usize = 1000;

/// Largest truncation level sampled in the randomized cases.
pub const TRUNCATION_MAX_LEVEL: i64 = 1000;

/// Closed-form versus enumerated truncated characteristics on randomized
/// single-tower models, plus N-independence of the truncation constant on
/// the bundled multi-tower models. Deterministically seeded.
pub fn hfmodel_trunc_suite() -> Result<SuiteReport> {
    let mut cases = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x00e7_c41c);
    for i in 0..TRUNCATION_CASES {
        let num = rng.gen_range(-999i64..=999);
        let den = rng.gen_range(1i64..=8);
        let bottom = Rational::new(num, den)?;
        let rho = rho_prime_from_d(&bottom);
        let model = HFPlusModel::new(
            vec![TowerSummand {
                spinc_id: SpincId("t".to_string()),
                bottom_degree: bottom.clone(),
            }],
            vec![],
        )?;
        // the closed count is only valid once the cutoff reaches the bottom
        let lo = minimal_truncation_level(&model);
        let n = rng.gen_range(lo..=TRUNCATION_MAX_LEVEL.max(lo));
        let formula = truncated_chi_formula(&bottom, &rho, n)?;
        let enumerated = truncated_chi_enumerate(&model, &model.rho_prime_map(), n)?;
        cases.push(CaseResult::new(
            format!("case {i:04} bottom={bottom} N={n}"),
            Rational::from_integer(formula - enumerated),
        ));
    }

    for (name, model, p, base) in bundled_models()? {
        let n0 = minimal_truncation_level(&model);
        let n_list = [n0, n0 + 7, n0 + 100];
        let residual = match euler_red_identity_check(&model, p, &base, &n_list) {
            Ok(_) => Rational::zero(),
            Err(_) => Rational::one(),
        };
        cases.push(CaseResult::new(format!("model {name}"), residual));
    }

    Ok(SuiteReport {
        suite: "hfmodel-trunc".to_string(),
        pmax: 0,
        cases,
    })
}

/// A bundled model: name, the model, its surgery multiplier p, and the
/// base rho' map.
pub type BundledModel = (String, HFPlusModel, i64, BTreeMap<SpincId, Rational>);

/// The bundled multi-tower models: lens-space tower collections (bottoms
/// from the correction-term recursion) with and without reduced parts,
/// each paired with its surgery multiplier p and base rho' map.
pub fn bundled_models() -> Result<Vec<BundledModel>> {
    let s3_base: BTreeMap<SpincId, Rational> =
        [(SpincId("s3".to_string()), Rational::zero())].into();

    let mut out = Vec::new();

    let s3 = HFPlusModel::new(
        vec![TowerSummand {
            spinc_id: SpincId("t0".to_string()),
            bottom_degree: Rational::zero(),
        }],
        vec![],
    )?;
    out.push(("s3".to_string(), s3, 1, s3_base.clone()));

    for (p, q) in [(2i64, 1i64), (3, 1), (5, 2), (7, 3)] {
        let lens = LensSpace::new(p, q, Orientation::Negative)?;
        let towers: Vec<TowerSummand> = lens
            .d_invariants()
            .into_iter()
            .map(|(label, d)| TowerSummand {
                spinc_id: SpincId(format!("t{label}")),
                bottom_degree: d,
            })
            .collect();
        let model = HFPlusModel::new(towers, vec![])?;
        out.push((format!("lens {p}/{q}"), model, p, s3_base.clone()));
    }

    // RP^3 towers with a mixed-sign reduced part
    let rp3 = LensSpace::new(2, 1, Orientation::Negative)?;
    let towers: Vec<TowerSummand> = rp3
        .d_invariants()
        .into_iter()
        .map(|(label, d)| TowerSummand {
            spinc_id: SpincId(format!("t{label}")),
            bottom_degree: d,
        })
        .collect();
    let reduced = vec![
        ReducedGenerator {
            spinc_id: SpincId("t0".to_string()),
            degree: Rational::new(9, 4)?,
            sign: Sign::Plus,
        },
        ReducedGenerator {
            spinc_id: SpincId("t0".to_string()),
            degree: Rational::new(1, 4)?,
            sign: Sign::Plus,
        },
        ReducedGenerator {
            spinc_id: SpincId("t1".to_string()),
            degree: Rational::new(-1, 4)?,
            sign: Sign::Minus,
        },
    ];
    let model = HFPlusModel::new(towers, reduced)?;
    out.push(("rp3 with reduced".to_string(), model, 2, s3_base));

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass_at_small_bounds() {
        for report in run_suite(Suite::All, 12).unwrap() {
            assert!(
                report.passed(),
                "suite {} failed: {:?}",
                report.suite,
                report.failures().next()
            );
            assert!(report.total() > 0);
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for suite in [
            Suite::Reciprocity,
            Suite::LensSum,
            Suite::LensEul,
            Suite::SurgeryCross,
            Suite::TorsionMultiset,
            Suite::HfmodelTrunc,
            Suite::All,
        ] {
            assert_eq!(Suite::from_name(suite.name()), Some(suite));
        }
        assert_eq!(Suite::from_name("bogus"), None);
    }

    #[test]
    fn case_order_is_deterministic() {
        let a = reciprocity_suite(8).unwrap();
        let b = reciprocity_suite(8).unwrap();
        let ids_a: Vec<&str> = a.cases.iter().map(|c| c.id.as_str()).collect();
        let ids_b: Vec<&str> = b.cases.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids_a, ids_b);
        assert_eq!(ids_a.first(), Some(&"p=1 q=1"));
    }

    #[test]
    fn randomized_truncation_suite_is_reproducible() {
        let a = hfmodel_trunc_suite().unwrap();
        let b = hfmodel_trunc_suite().unwrap();
        assert!(a.passed());
        let ids_a: Vec<&str> = a.cases.iter().map(|c| c.id.as_str()).collect();
        let ids_b: Vec<&str> = b.cases.iter().map(|c| c.id.as_str()).collect();
        assert_eq!(ids_a, ids_b);
        assert_eq!(
            a.total(),
            TRUNCATION_CASES + bundled_models().unwrap().len()
        );
    }
}
