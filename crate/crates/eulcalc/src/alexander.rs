//! Symmetrized Alexander polynomials and the aggregates that feed the
//! surgery formulas: the value at 1 (normalization against the torsion
//! order) and the second moment of the coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// A symmetrized Laurent polynomial with integer coefficients a_i = a_{-i}.
///
/// Only the indices i >= 0 are stored, so symmetry is structural. The
/// canonical serialized form is the coefficient list `[(i, a_i)]` sorted
/// by i; asymmetric input must be symmetrized by the caller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricLaurent {
    coeffs: BTreeMap<u32, BigInt>,
}

impl SymmetricLaurent {
    /// Build from `(index, coefficient)` pairs. Indices must be
    /// non-negative and distinct; zero coefficients are dropped.
    pub fn from_coefficients<N: Into<BigInt>>(
        pairs: impl IntoIterator<Item = (i64, N)>,
    ) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (index, value) in pairs {
            if index < 0 {
                return Err(Error::NegativeIndex { index });
            }
            let value = value.into();
            if coeffs.insert(index as u32, value).is_some() {
                return Err(Error::DuplicateIndex { index });
            }
        }
        coeffs.retain(|_, v| !v.is_zero());
        Ok(SymmetricLaurent { coeffs })
    }

    /// The unknot polynomial, identically 1.
    pub fn unknot() -> Self {
        Self::from_coefficients([(0, 1)]).unwrap()
    }

    /// The trefoil polynomial t - 1 + t^-1.
    pub fn trefoil() -> Self {
        Self::from_coefficients([(0, -1), (1, 1)]).unwrap()
    }

    /// The figure-eight polynomial -t + 3 - t^-1.
    pub fn figure_eight() -> Self {
        Self::from_coefficients([(0, 3), (1, -1)]).unwrap()
    }

    /// Coefficient a_i (i >= 0); zero when absent.
    pub fn coefficient(&self, i: u32) -> BigInt {
        self.coeffs.get(&i).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Stored coefficients as the canonical sorted list.
    pub fn coefficients(&self) -> Vec<(u32, BigInt)> {
        self.coeffs.iter().map(|(&i, a)| (i, a.clone())).collect()
    }

    /// Largest i with a_i != 0; zero for constants and the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    /// A(1) = a_0 + 2 sum_{i>=1} a_i.
    pub fn evaluate_at_one(&self) -> BigInt {
        let mut total = self.coefficient(0);
        for (&i, a) in &self.coeffs {
            if i >= 1 {
                total += 2 * a;
            }
        }
        total
    }

    /// The second moment sum_{i>=1} a_i i^2.
    pub fn second_moment(&self) -> BigInt {
        let mut total = BigInt::zero();
        for (&i, a) in &self.coeffs {
            if i >= 1 {
                total += a * BigInt::from(i) * BigInt::from(i);
            }
        }
        total
    }

    /// True iff A(1) equals the given torsion order.
    pub fn check_normalization(&self, torsion_order: impl Into<BigInt>) -> bool {
        self.evaluate_at_one() == torsion_order.into()
    }
}

impl fmt::Display for SymmetricLaurent {
    /// Renders the full symmetric expansion, e.g. `t - 1 + t^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut exps: Vec<i64> = Vec::new();
        for &i in self.coeffs.keys().rev() {
            exps.push(i as i64);
        }
        for &i in self.coeffs.keys() {
            if i > 0 {
                exps.push(-(i as i64));
            }
        }
        let mut first = true;
        for e in exps {
            let a = self.coefficient(e.unsigned_abs() as u32);
            let sign_str = if a.is_negative() {
                if first {
                    "-"
                } else {
                    " - "
                }
            } else if first {
                ""
            } else {
                " + "
            };
            let mag = a.magnitude();
            let body = match e {
                0 => format!("{mag}"),
                1 => {
                    if mag == &1u32.into() {
                        "t".to_string()
                    } else {
                        format!("{mag}t")
                    }
                }
                _ => {
                    if mag == &1u32.into() {
                        format!("t^{e}")
                    } else {
                        format!("{mag}t^{e}")
                    }
                }
            };
            write!(f, "{sign_str}{body}")?;
            first = false;
        }
        Ok(())
    }
}

/// Parse the text form `a_d t^d + ... + a_0 + ... + a_d t^-d`.
///
/// Terms look like `3t^2`, `- t^-1`, `t`, or `5`; an optional `*` may
/// separate coefficient and variable. Repeated exponents are accumulated.
/// The expansion must be symmetric (a_i = a_{-i}) or parsing fails.
pub fn parse_polynomial(input: &str) -> Result<SymmetricLaurent> {
    let terms = split_terms(input)?;
    let mut full: BTreeMap<i64, BigInt> = BTreeMap::new();
    for (sign, body) in terms {
        let (coeff, exp) = parse_term(&body, input)?;
        *full.entry(exp).or_insert_with(BigInt::zero) += coeff * sign;
    }
    full.retain(|_, v| !v.is_zero());
    for (&e, a) in &full {
        if e > 0 && full.get(&-e) != Some(a) {
            return Err(Error::AsymmetricPolynomial { index: e });
        }
        if e < 0 && full.get(&-e) != Some(a) {
            return Err(Error::AsymmetricPolynomial { index: -e });
        }
    }
    SymmetricLaurent::from_coefficients(full.into_iter().filter(|&(e, _)| e >= 0))
}

/// Split into signed term bodies on top-level + and -.
fn split_terms(input: &str) -> Result<Vec<(i64, String)>> {
    let trimmed = input.trim();
    if trimmed.is_empty() {
        return Err(Error::PolynomialParse {
            reason: "empty input".to_string(),
        });
    }
    let mut terms = Vec::new();
    let mut sign = 1i64;
    let mut body = String::new();
    let mut prev_was_caret = false;
    for c in trimmed.chars() {
        match c {
            '+' | '-' if !prev_was_caret => {
                if !body.trim().is_empty() {
                    terms.push((sign, body.trim().to_string()));
                } else if !terms.is_empty() || (sign == -1 && c == '-') {
                    // tolerate "+ -" only as an exponent sign, not here
                    return Err(Error::PolynomialParse {
                        reason: format!("dangling sign before `{c}`"),
                    });
                }
                sign = if c == '-' { -1 } else { 1 };
                body.clear();
            }
            _ => {
                if !c.is_whitespace() {
                    prev_was_caret = c == '^';
                    body.push(c);
                }
            }
        }
    }
    if body.trim().is_empty() {
        return Err(Error::PolynomialParse {
            reason: "trailing sign".to_string(),
        });
    }
    terms.push((sign, body.trim().to_string()));
    Ok(terms)
}

/// Parse one unsigned term body into (coefficient, exponent).
fn parse_term(body: &str, input: &str) -> Result<(BigInt, i64)> {
    let err = |reason: String| Error::PolynomialParse { reason };
    let compact: String = body.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err(format!("empty term in `{input}`")));
    }
    match compact.find('t') {
        None => {
            let coeff: BigInt = compact
                .parse()
                .map_err(|_| err(format!("bad constant `{compact}`")))?;
            Ok((coeff, 0))
        }
        Some(pos) => {
            let coeff_part = compact[..pos].trim_end_matches('*');
            let coeff: BigInt = if coeff_part.is_empty() {
                BigInt::from(1)
            } else {
                coeff_part
                    .parse()
                    .map_err(|_| err(format!("bad coefficient `{coeff_part}`")))?
            };
            let rest = &compact[pos + 1..];
            let exp: i64 = if rest.is_empty() {
                1
            } else if let Some(e) = rest.strip_prefix('^') {
                e.parse().map_err(|_| err(format!("bad exponent `{e}`")))?
            } else {
                return Err(err(format!("unexpected `{rest}` after t")));
            };
            Ok((coeff, exp))
        }
    }
}
