//! Desk-scale model of HF+ of a rational homology sphere: one tower per
//! Spin^c structure plus a finite signed reduced part, together with the
//! truncated Euler-characteristic arithmetic built on it.
//!
//! A tower with bottom degree d occupies exactly the degrees d + 2k,
//! k >= 0. Truncation at level N keeps degrees <= 2N + rho'(t) per
//! structure, with rho'(t) in [0, 2).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{reduce_mod_two, Rational};

/// Opaque Spin^c label used by models.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpincId(pub String);

impl From<&str> for SpincId {
    fn from(s: &str) -> Self {
        SpincId(s.to_string())
    }
}

impl fmt::Display for SpincId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Contribution sign of a reduced generator to the Z/2-graded Euler
/// characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(sign: i64) -> Result<Self> {
        match sign {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::InvalidSign { sign }),
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// The image of the U-tower in one Spin^c structure: degrees
/// bottom_degree + 2k for k >= 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerSummand {
    pub spinc_id: SpincId,
    pub bottom_degree: Rational,
}

/// A single generator of the reduced part, with an explicit sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedGenerator {
    pub spinc_id: SpincId,
    pub degree: Rational,
    pub sign: Sign,
}

/// A model of HF+ : towers (one per Spin^c label) plus finitely many
/// signed reduced generators whose labels must match some tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HFPlusModel {
    towers: Vec<TowerSummand>,
    reduced: Vec<ReducedGenerator>,
}

impl HFPlusModel {
    /// Validating constructor: tower labels distinct, every reduced
    /// generator attached to an existing tower.
    pub fn new(towers: Vec<TowerSummand>, reduced: Vec<ReducedGenerator>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for tower in &towers {
            if !seen.insert(&tower.spinc_id) {
                return Err(Error::DuplicateTower {
                    label: tower.spinc_id.0.clone(),
                });
            }
        }
        for gen in &reduced {
            if !seen.contains(&gen.spinc_id) {
                return Err(Error::DanglingReduced {
                    label: gen.spinc_id.0.clone(),
                });
            }
        }
        Ok(HFPlusModel { towers, reduced })
    }

    /// Towerless variant for structures where HF-infinity contributes no
    /// N-term (non-torsion structures of a homology S^1 x S^2): the
    /// truncated characteristic degenerates to the plain signed count.
    pub fn without_towers(reduced: Vec<ReducedGenerator>) -> Self {
        HFPlusModel {
            towers: Vec::new(),
            reduced,
        }
    }

    pub fn towers(&self) -> &[TowerSummand] {
        &self.towers
    }

    pub fn reduced(&self) -> &[ReducedGenerator] {
        &self.reduced
    }

    pub fn tower(&self, id: &SpincId) -> Option<&TowerSummand> {
        self.towers.iter().find(|t| &t.spinc_id == id)
    }

    /// rho' per tower label, derived from the bottom degree.
    pub fn rho_prime_map(&self) -> BTreeMap<SpincId, Rational> {
        self.towers
            .iter()
            .map(|t| (t.spinc_id.clone(), rho_prime_from_d(&t.bottom_degree)))
            .collect()
    }
}

/// rho'(Y, t) in [0, 2): the mod-2 reduction of the correction term.
pub fn rho_prime_from_d(d: &Rational) -> Rational {
    reduce_mod_two(d)
}

/// Closed-form tower count N + 1 - (d - rho')/2.
///
/// Requires d - rho' to be an even integer (the bottom of a tower lifts
/// rho') and a non-negative truncation level. Matches the enumeration
/// count as soon as the cutoff 2N + rho' reaches the tower bottom; below
/// that the closed form goes negative while enumeration clamps at zero.
pub fn truncated_chi_formula(d: &Rational, rho_prime: &Rational, n: i64) -> Result<i64> {
    if n < 0 {
        return Err(Error::NegativeTruncation { n });
    }
    let diff = d - rho_prime;
    let half = diff / Rational::from_integer(2);
    if !half.is_integer() {
        return Err(Error::RhoParityMismatch {
            d: d.to_string(),
            rho: rho_prime.to_string(),
        });
    }
    let m = half
        .ceil()
        .to_i64()
        .expect("tower offset fits in 64 bits at desk scale");
    Ok(n + 1 - m)
}

/// Brute-force truncated Euler characteristic: walk every tower degree
/// bottom + 2k up to the cutoff 2N + rho'(t) and add the signs of the
/// reduced generators in range.
pub fn truncated_chi_enumerate(
    model: &HFPlusModel,
    rho_prime: &BTreeMap<SpincId, Rational>,
    n: i64,
) -> Result<i64> {
    if n < 0 {
        return Err(Error::NegativeTruncation { n });
    }
    let two_n = Rational::from_integer(2 * n);
    let two = Rational::from_integer(2);
    let cutoff_for = |id: &SpincId| -> Result<Rational> {
        let rho = rho_prime.get(id).ok_or_else(|| Error::MissingRhoPrime {
            label: id.0.clone(),
        })?;
        Ok(&two_n + rho)
    };
    let mut total: i64 = 0;
    for tower in model.towers() {
        let cutoff = cutoff_for(&tower.spinc_id)?;
        let mut degree = tower.bottom_degree.clone();
        while degree <= cutoff {
            total += 1;
            degree += &two;
        }
    }
    for gen in model.reduced() {
        let cutoff = cutoff_for(&gen.spinc_id)?;
        if gen.degree <= cutoff {
            total += gen.sign.as_i64();
        }
    }
    Ok(total)
}

/// Eul(model, t) = (signed count of reduced generators at t) - bottom/2.
pub fn eul_of_model(model: &HFPlusModel, id: &SpincId) -> Result<Rational> {
    let tower = model.tower(id).ok_or_else(|| Error::UnknownSpincLabel {
        label: id.0.clone(),
    })?;
    let chi_red: i64 = model
        .reduced()
        .iter()
        .filter(|g| &g.spinc_id == id)
        .map(|g| g.sign.as_i64())
        .sum();
    Ok(Rational::from_integer(chi_red) - &tower.bottom_degree / Rational::from_integer(2))
}

/// Smallest truncation level at which the closed tower counts are valid
/// and every reduced generator lies below every cutoff.
pub fn minimal_truncation_level(model: &HFPlusModel) -> i64 {
    truncation_requirement(model).0
}

/// The minimal level together with the label that forces it.
fn truncation_requirement(model: &HFPlusModel) -> (i64, SpincId) {
    let rho = model.rho_prime_map();
    let mut requirement = (0i64, SpincId(String::new()));
    let mut raise = |level: i64, id: &SpincId| {
        if level > requirement.0 {
            requirement = (level, id.clone());
        }
    };
    for tower in model.towers() {
        // formula regime: N >= (d - rho')/2 - 1
        let m = ((&tower.bottom_degree - &rho[&tower.spinc_id]) / Rational::from_integer(2))
            .ceil()
            .to_i64()
            .expect("desk scale");
        raise(m - 1, &tower.spinc_id);
    }
    for gen in model.reduced() {
        if let Some(r) = rho.get(&gen.spinc_id) {
            let needed = ((&gen.degree - r) / Rational::from_integer(2))
                .ceil()
                .to_i64()
                .expect("desk scale");
            raise(needed, &gen.spinc_id);
        }
    }
    requirement
}

/// The truncation constant
/// `k = chi_trunc(2N) - N |Spin^c| - sum Eul - p sum rho'(Y, c)/2`,
/// which must not depend on N once every cutoff clears the model.
///
/// `rho_prime_base` carries rho'(Y, c) over the base-manifold structures;
/// values are reduced into [0, 2) before use. Fails if any supplied level
/// is below the minimum or if the computed value varies with N.
pub fn euler_red_identity_check(
    model: &HFPlusModel,
    p: i64,
    rho_prime_base: &BTreeMap<SpincId, Rational>,
    n_list: &[i64],
) -> Result<Rational> {
    if n_list.is_empty() {
        return Err(Error::EmptyTruncationList);
    }
    let rho = model.rho_prime_map();
    let (n0, forced_by) = truncation_requirement(model);
    for &n in n_list {
        if n < 0 {
            return Err(Error::NegativeTruncation { n });
        }
        if n < n0 {
            return Err(Error::TruncationTooSmall {
                n,
                label: forced_by.0.clone(),
                needed: n0,
            });
        }
    }
    let eul_total: Rational = model
        .towers()
        .iter()
        .map(|t| eul_of_model(model, &t.spinc_id).expect("tower label present"))
        .sum();
    let base_rho_total: Rational = rho_prime_base.values().map(reduce_mod_two).sum();
    let base_term = Rational::from_integer(p) * base_rho_total / Rational::from_integer(2);
    let spinc_count = model.towers().len() as i64;

    let mut common: Option<(i64, Rational)> = None;
    for &n in n_list {
        let chi = truncated_chi_enumerate(model, &rho, n)?;
        let k = Rational::from_integer(chi - n * spinc_count) - &eul_total - &base_term;
        match &common {
            None => common = Some((n, k)),
            Some((n1, k1)) => {
                if *k1 != k {
                    return Err(Error::TruncationNotConstant {
                        n1: *n1,
                        k1: k1.to_string(),
                        n2: n,
                        k2: k.to_string(),
                    });
                }
            }
        }
    }
    Ok(common.expect("n_list non-empty").1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(num: i64, den: i64) -> Rational {
        Rational::new(num, den).unwrap()
    }

    fn tower(id: &str, num: i64, den: i64) -> TowerSummand {
        TowerSummand {
            spinc_id: id.into(),
            bottom_degree: rat(num, den),
        }
    }

    fn gen(id: &str, num: i64, den: i64, sign: i64) -> ReducedGenerator {
        ReducedGenerator {
            spinc_id: id.into(),
            degree: rat(num, den),
            sign: Sign::from_i64(sign).unwrap(),
        }
    }

    fn rp3_model() -> HFPlusModel {
        HFPlusModel::new(vec![tower("a", 1, 4), tower("b", -1, 4)], vec![]).unwrap()
    }

    #[test]
    fn rho_prime_examples() {
        assert_eq!(rho_prime_from_d(&Rational::zero()), Rational::zero());
        assert_eq!(rho_prime_from_d(&rat(-1, 4)), rat(7, 4));
        assert_eq!(rho_prime_from_d(&rat(3, 2)), rat(3, 2));
    }

    #[test]
    fn formula_examples() {
        for n in [0, 1, 5, 100] {
            assert_eq!(
                truncated_chi_formula(&rat(-1, 4), &rat(7, 4), n).unwrap(),
                n + 2
            );
            assert_eq!(
                truncated_chi_formula(&Rational::zero(), &Rational::zero(), n).unwrap(),
                n + 1
            );
        }
        assert_eq!(truncated_chi_formula(&rat(7, 4), &rat(7, 4), 0).unwrap(), 1);
    }

    #[test]
    fn formula_rejects_incompatible_rho() {
        assert!(matches!(
            truncated_chi_formula(&rat(1, 4), &rat(7, 4), 3),
            Err(Error::RhoParityMismatch { .. })
        ));
        assert!(matches!(
            truncated_chi_formula(&Rational::zero(), &Rational::zero(), -1),
            Err(Error::NegativeTruncation { n: -1 })
        ));
    }

    #[test]
    fn enumerate_examples() {
        let single = HFPlusModel::new(vec![tower("a", -1, 4)], vec![]).unwrap();
        let rho = single.rho_prime_map();
        for n in [0, 3, 10] {
            assert_eq!(truncated_chi_enumerate(&single, &rho, n).unwrap(), n + 2);
        }

        let empty = HFPlusModel::new(vec![], vec![]).unwrap();
        assert_eq!(
            truncated_chi_enumerate(&empty, &BTreeMap::new(), 5).unwrap(),
            0
        );

        let with_red = HFPlusModel::new(vec![tower("a", 0, 1)], vec![gen("a", 3, 1, -1)]).unwrap();
        let rho = with_red.rho_prime_map();
        for n in [2, 5, 9] {
            assert_eq!(truncated_chi_enumerate(&with_red, &rho, n).unwrap(), n);
        }
    }

    #[test]
    fn enumeration_clamps_where_the_closed_count_goes_negative() {
        let bottom = rat(9, 1);
        let rho = rho_prime_from_d(&bottom);
        let model = HFPlusModel::new(
            vec![TowerSummand {
                spinc_id: "a".into(),
                bottom_degree: bottom.clone(),
            }],
            vec![],
        )
        .unwrap();
        let map = model.rho_prime_map();
        // cutoff 2*1 + 1 = 3 < 9: nothing to count, but the formula is -2
        assert_eq!(truncated_chi_enumerate(&model, &map, 1).unwrap(), 0);
        assert_eq!(truncated_chi_formula(&bottom, &rho, 1).unwrap(), -2);
        // the routes agree from N = (9 - 1)/2 - 1 = 3 on
        assert_eq!(minimal_truncation_level(&model), 3);
        for n in [3, 4, 5] {
            assert_eq!(
                truncated_chi_enumerate(&model, &map, n).unwrap(),
                truncated_chi_formula(&bottom, &rho, n).unwrap()
            );
        }
        assert_eq!(truncated_chi_formula(&bottom, &rho, 4).unwrap(), 1);
    }

    #[test]
    fn eul_of_model_examples() {
        let m = HFPlusModel::new(vec![tower("a", 1, 4)], vec![]).unwrap();
        assert_eq!(eul_of_model(&m, &"a".into()).unwrap(), rat(-1, 8));

        let m = HFPlusModel::new(vec![tower("a", 0, 1)], vec![gen("a", 2, 1, 1)]).unwrap();
        assert_eq!(eul_of_model(&m, &"a".into()).unwrap(), Rational::one());

        let rp3 = rp3_model();
        let mut values: Vec<Rational> = ["a", "b"]
            .iter()
            .map(|id| eul_of_model(&rp3, &SpincId::from(*id)).unwrap())
            .collect();
        values.sort();
        assert_eq!(values, vec![rat(-1, 8), rat(1, 8)]);

        assert!(matches!(
            eul_of_model(&rp3, &"zz".into()),
            Err(Error::UnknownSpincLabel { .. })
        ));
    }

    #[test]
    fn model_invariants_enforced() {
        assert!(matches!(
            HFPlusModel::new(vec![tower("a", 0, 1), tower("a", 2, 1)], vec![]),
            Err(Error::DuplicateTower { .. })
        ));
        assert!(matches!(
            HFPlusModel::new(vec![tower("a", 0, 1)], vec![gen("b", 1, 1, 1)]),
            Err(Error::DanglingReduced { .. })
        ));
        assert!(matches!(
            Sign::from_i64(2),
            Err(Error::InvalidSign { sign: 2 })
        ));
    }

    #[test]
    fn euler_red_constant_on_examples() {
        let base: BTreeMap<SpincId, Rational> = [(SpincId::from("s3"), Rational::zero())].into();

        // S^3: k = (N+1) - N - 0 - 0 = 1
        let s3 = HFPlusModel::new(vec![tower("a", 0, 1)], vec![]).unwrap();
        assert_eq!(
            euler_red_identity_check(&s3, 1, &base, &[0, 7, 100]).unwrap(),
            Rational::one()
        );

        // RP^3 with p = 2 over the unknot base: k = 3
        assert_eq!(
            euler_red_identity_check(&rp3_model(), 2, &base, &[5, 9, 23]).unwrap(),
            rat(3, 1)
        );

        // a reduced generator below every cutoff moves the truncated count
        // and the Euler sum by the same sign, so k is untouched
        let shifted = HFPlusModel::new(
            vec![tower("a", 1, 4), tower("b", -1, 4)],
            vec![gen("a", -100, 1, -1)],
        )
        .unwrap();
        assert_eq!(
            euler_red_identity_check(&shifted, 2, &base, &[5, 9, 23]).unwrap(),
            rat(3, 1)
        );
    }

    #[test]
    fn euler_red_rejects_small_or_empty_levels() {
        let model = HFPlusModel::new(vec![tower("a", 0, 1)], vec![gen("a", 9, 1, 1)]).unwrap();
        let base = BTreeMap::new();
        assert!(matches!(
            euler_red_identity_check(&model, 1, &base, &[]),
            Err(Error::EmptyTruncationList)
        ));
        assert!(matches!(
            euler_red_identity_check(&model, 1, &base, &[2, 50]),
            Err(Error::TruncationTooSmall { .. })
        ));
        assert!(euler_red_identity_check(&model, 1, &base, &[5, 50]).is_ok());
    }

    #[test]
    fn formula_matches_enumeration_exhaustively_at_small_scale() {
        for num in -12i64..=12 {
            for den in 1i64..=4 {
                let bottom = rat(num, den);
                let rho = rho_prime_from_d(&bottom);
                let model = HFPlusModel::new(
                    vec![TowerSummand {
                        spinc_id: "t".into(),
                        bottom_degree: bottom.clone(),
                    }],
                    vec![],
                )
                .unwrap();
                let map = model.rho_prime_map();
                let lo = minimal_truncation_level(&model);
                for n in lo..=lo + 24 {
                    assert_eq!(
                        truncated_chi_formula(&bottom, &rho, n).unwrap(),
                        truncated_chi_enumerate(&model, &map, n).unwrap(),
                        "bottom {bottom}, N {n}"
                    );
                }
            }
        }
    }

    #[test]
    fn towerless_model_counts_signs_only() {
        // b1 = 1 representation: no towers, so no N-term; the truncated
        // characteristic is the plain signed count once cutoffs clear
        let model = HFPlusModel::without_towers(vec![
            gen("u", 0, 1, 1),
            gen("u", 2, 1, 1),
            gen("v", 1, 2, -1),
        ]);
        let rho: BTreeMap<SpincId, Rational> =
            [("u".into(), Rational::zero()), ("v".into(), rat(1, 2))].into();
        for n in [1, 5, 50] {
            assert_eq!(truncated_chi_enumerate(&model, &rho, n).unwrap(), 1);
        }
        // Eul needs a tower bottom, which this variant does not have
        assert!(matches!(
            eul_of_model(&model, &"u".into()),
            Err(Error::UnknownSpincLabel { .. })
        ));
    }

    #[test]
    fn eul_additive_under_disjoint_union() {
        let left = HFPlusModel::new(vec![tower("a", 1, 4)], vec![gen("a", 9, 4, 1)]).unwrap();
        let right = HFPlusModel::new(vec![tower("b", -1, 4)], vec![]).unwrap();
        let union = HFPlusModel::new(
            [left.towers(), right.towers()].concat(),
            [left.reduced(), right.reduced()].concat(),
        )
        .unwrap();
        let sum_parts =
            eul_of_model(&left, &"a".into()).unwrap() + eul_of_model(&right, &"b".into()).unwrap();
        let sum_union =
            eul_of_model(&union, &"a".into()).unwrap() + eul_of_model(&union, &"b".into()).unwrap();
        assert_eq!(sum_parts, sum_union);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn formula_matches_enumeration_in_regime(
            num in -200i64..200,
            den in 1i64..8,
            extra in 0i64..50,
        ) {
            let bottom = rat(num, den);
            let rho = rho_prime_from_d(&bottom);
            let model = HFPlusModel::new(
                vec![TowerSummand { spinc_id: "t".into(), bottom_degree: bottom.clone() }],
                vec![],
            ).unwrap();
            let n = minimal_truncation_level(&model) + extra;
            let map = model.rho_prime_map();
            prop_assert_eq!(
                truncated_chi_formula(&bottom, &rho, n).unwrap(),
                truncated_chi_enumerate(&model, &map, n).unwrap()
            );
        }

        #[test]
        fn euler_red_is_n_independent(
            bottoms in proptest::collection::vec((-40i64..40, 1i64..6), 1..5),
            degrees in proptest::collection::vec((-20i64..60, 1i64..4, prop_oneof![Just(1i64), Just(-1i64)]), 0..4),
            p in 1i64..5,
        ) {
            let towers: Vec<TowerSummand> = bottoms
                .iter()
                .enumerate()
                .map(|(i, &(num, den))| TowerSummand {
                    spinc_id: SpincId(format!("t{i}")),
                    bottom_degree: rat(num, den),
                })
                .collect();
            let count = towers.len() as i64;
            let reduced: Vec<ReducedGenerator> = degrees
                .iter()
                .enumerate()
                .map(|(i, &(num, den, sign))| ReducedGenerator {
                    spinc_id: SpincId(format!("t{}", (i as i64) % count)),
                    degree: rat(num, den),
                    sign: Sign::from_i64(sign).unwrap(),
                })
                .collect();
            let model = HFPlusModel::new(towers, reduced).unwrap();
            let n0 = minimal_truncation_level(&model);
            let base = BTreeMap::new();
            prop_assert!(
                euler_red_identity_check(&model, p, &base, &[n0, n0 + 7, n0 + 100]).is_ok()
            );
        }
    }
}
