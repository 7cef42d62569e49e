//! Problem files: a JSON document with a `surgery` section and optional
//! `hfmodel` and `sweep` sections. Rationals are written as `"num/den"`
//! strings or integer literals; every domain invariant is re-validated on
//! load and all violations are reported together.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::alexander::{parse_polynomial, SymmetricLaurent};
use crate::exact::Rational;
use crate::hfmodel::{HFPlusModel, ReducedGenerator, Sign, SpincId, TowerSummand};
use crate::surgery::SurgeryProblem;

/// One field-level validation failure.
#[derive(Clone, Debug)]
pub struct ValidationIssue {
    pub field: String,
    pub reason: String,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.reason)
    }
}

/// Why a problem file could not be loaded.
#[derive(Debug)]
pub enum LoadError {
    Io(std::io::Error),
    Syntax(serde_json::Error),
    Invalid(Vec<ValidationIssue>),
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Io(e) => write!(f, "cannot read problem file: {e}"),
            LoadError::Syntax(e) => write!(f, "malformed problem file: {e}"),
            LoadError::Invalid(issues) => {
                writeln!(f, "invalid problem file:")?;
                for issue in issues {
                    writeln!(f, "  {issue}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for LoadError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblemFile {
    surgery: Option<RawSurgery>,
    hfmodel: Option<RawHfModel>,
    sweep: Option<RawSweep>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSurgery {
    p: i64,
    q: i64,
    #[serde(default = "default_one")]
    d: i64,
    #[serde(default = "default_one")]
    tors: i64,
    #[serde(default = "default_alex")]
    alex: AlexInput,
    #[serde(default = "Rational::zero")]
    base_eul: Rational,
    #[serde(default = "Rational::zero")]
    base_lambda: Rational,
}

fn default_one() -> i64 {
    1
}

fn default_alex() -> AlexInput {
    AlexInput::Text("1".to_string())
}

/// Alexander polynomial input: either the text form `"t - 1 + t^-1"` or
/// the canonical coefficient list `[[i, a_i], ...]`.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum AlexInput {
    Text(String),
    Coefficients(Vec<(i64, i64)>),
}

impl AlexInput {
    fn build(&self) -> crate::Result<SymmetricLaurent> {
        match self {
            AlexInput::Text(s) => parse_polynomial(s),
            AlexInput::Coefficients(pairs) => {
                SymmetricLaurent::from_coefficients(pairs.iter().copied())
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHfModel {
    towers: Vec<RawTower>,
    #[serde(default)]
    reduced: Vec<RawReduced>,
    #[serde(default = "default_one")]
    p: i64,
    #[serde(default)]
    rho_prime_base: BTreeMap<String, Rational>,
    #[serde(default)]
    n_list: Option<Vec<i64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTower {
    label: String,
    bottom: Rational,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawReduced {
    label: String,
    degree: Rational,
    sign: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    pmax: i64,
    #[serde(default)]
    suites: Vec<String>,
}

/// Validated hfmodel section: the model plus the parameters of the
/// truncation-constant check.
#[derive(Clone, Debug)]
pub struct HfModelSpec {
    pub model: HFPlusModel,
    pub p: i64,
    pub rho_prime_base: BTreeMap<SpincId, Rational>,
    pub n_list: Option<Vec<i64>>,
}

/// Validated sweep section.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub pmax: i64,
    pub suites: Vec<String>,
}

/// A fully validated problem file.
#[derive(Clone, Debug, Default)]
pub struct ProblemFile {
    pub surgery: Option<SurgeryProblem>,
    pub hfmodel: Option<HfModelSpec>,
    pub sweep: Option<SweepSpec>,
}

/// Read and validate a problem file, collecting every violation rather
/// than stopping at the first.
pub fn parse_problem_file(path: &Path) -> Result<ProblemFile, LoadError> {
    let text = std::fs::read_to_string(path).map_err(LoadError::Io)?;
    parse_problem_str(&text)
}

pub fn parse_problem_str(text: &str) -> Result<ProblemFile, LoadError> {
    let raw: RawProblemFile = serde_json::from_str(text).map_err(LoadError::Syntax)?;
    let mut issues = Vec::new();
    let mut out = ProblemFile::default();

    if let Some(s) = &raw.surgery {
        if let Some(problem) = validate_surgery(s, &mut issues) {
            out.surgery = Some(problem);
        }
    }
    if let Some(m) = &raw.hfmodel {
        if let Some(spec) = validate_hfmodel(m, &mut issues) {
            out.hfmodel = Some(spec);
        }
    }
    if let Some(sweep) = &raw.sweep {
        if sweep.pmax < 2 {
            issues.push(ValidationIssue {
                field: "sweep.pmax".to_string(),
                reason: format!("must be at least 2, got {}", sweep.pmax),
            });
        }
        for name in &sweep.suites {
            if super::suites::Suite::from_name(name).is_none() {
                issues.push(ValidationIssue {
                    field: "sweep.suites".to_string(),
                    reason: format!("unknown suite `{name}`"),
                });
            }
        }
        out.sweep = Some(SweepSpec {
            pmax: sweep.pmax,
            suites: sweep.suites.clone(),
        });
    }

    if issues.is_empty() {
        Ok(out)
    } else {
        Err(LoadError::Invalid(issues))
    }
}

fn validate_surgery(raw: &RawSurgery, issues: &mut Vec<ValidationIssue>) -> Option<SurgeryProblem> {
    let before = issues.len();
    let mut push = |field: &str, reason: String| {
        issues.push(ValidationIssue {
            field: format!("surgery.{field}"),
            reason,
        })
    };
    if num_integer::gcd(raw.p, raw.q) != 1 {
        push(
            "p",
            format!("gcd(p, q) != 1 for p = {}, q = {}", raw.p, raw.q),
        );
    }
    if raw.p == 0 {
        push("p", "p must be nonzero".to_string());
    }
    if raw.d < 1 {
        push("d", format!("must be positive, got {}", raw.d));
    }
    if raw.tors < 1 {
        push("tors", format!("must be positive, got {}", raw.tors));
    }
    let alex = match raw.alex.build() {
        Ok(a) => Some(a),
        Err(e) => {
            push("alex", e.to_string());
            None
        }
    };
    if let Some(a) = &alex {
        if raw.d >= 1 && raw.tors >= 1 && !a.check_normalization(raw.tors * raw.d) {
            push(
                "alex",
                format!(
                    "A(1) = {} but tors * d = {}",
                    a.evaluate_at_one(),
                    raw.tors * raw.d
                ),
            );
        }
    }
    if issues.len() > before {
        return None;
    }
    match SurgeryProblem::new(
        raw.p,
        raw.q,
        raw.d,
        raw.tors,
        alex.expect("validated above"),
        raw.base_eul.clone(),
        raw.base_lambda.clone(),
    ) {
        Ok(problem) => Some(problem),
        Err(e) => {
            issues.push(ValidationIssue {
                field: "surgery".to_string(),
                reason: e.to_string(),
            });
            None
        }
    }
}

fn validate_hfmodel(raw: &RawHfModel, issues: &mut Vec<ValidationIssue>) -> Option<HfModelSpec> {
    let before = issues.len();
    let towers: Vec<TowerSummand> = raw
        .towers
        .iter()
        .map(|t| TowerSummand {
            spinc_id: SpincId(t.label.clone()),
            bottom_degree: t.bottom.clone(),
        })
        .collect();
    let mut reduced = Vec::new();
    for (i, r) in raw.reduced.iter().enumerate() {
        match Sign::from_i64(r.sign) {
            Ok(sign) => reduced.push(ReducedGenerator {
                spinc_id: SpincId(r.label.clone()),
                degree: r.degree.clone(),
                sign,
            }),
            Err(e) => issues.push(ValidationIssue {
                field: format!("hfmodel.reduced[{i}].sign"),
                reason: e.to_string(),
            }),
        }
    }
    if raw.p == 0 {
        issues.push(ValidationIssue {
            field: "hfmodel.p".to_string(),
            reason: "p must be nonzero".to_string(),
        });
    }
    if let Some(ns) = &raw.n_list {
        if ns.is_empty() {
            issues.push(ValidationIssue {
                field: "hfmodel.n_list".to_string(),
                reason: "must not be empty when present".to_string(),
            });
        }
        for &n in ns {
            if n < 0 {
                issues.push(ValidationIssue {
                    field: "hfmodel.n_list".to_string(),
                    reason: format!("levels must be non-negative, got {n}"),
                });
            }
        }
    }
    if issues.len() > before {
        return None;
    }
    match HFPlusModel::new(towers, reduced) {
        Ok(model) => Some(HfModelSpec {
            model,
            p: raw.p,
            rho_prime_base: raw
                .rho_prime_base
                .iter()
                .map(|(k, v)| (SpincId(k.clone()), v.clone()))
                .collect(),
            n_list: raw.n_list.clone(),
        }),
        Err(e) => {
            issues.push(ValidationIssue {
                field: "hfmodel".to_string(),
                reason: e.to_string(),
            });
            None
        }
    }
}
