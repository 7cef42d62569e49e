//! The surgery-formula engine: the correction quantity epsilon'(p, q, d),
//! Casson-Walker and Euler-sum evaluation after p/q filling, Spin^c fiber
//! counting, and the cross-checks tying the formulas back to lens spaces.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::alexander::SymmetricLaurent;
use crate::error::{Error, Result};
use crate::exact::{dedekind_sum, Rational};
use crate::lens::{d_sum_check, LensSpace, Orientation};

/// epsilon'(p, q, d) = q (d^2 - 1) / 24d - p d s(q, p) / 2.
///
/// Defined for every coprime pair; the Dedekind sum uses |p| as modulus
/// (s(q, -p) = s(q, p)) and vanishes with the p factor when p = 0.
pub fn epsilon_prime(p: i64, q: i64, d: i64) -> Result<Rational> {
    if d < 1 {
        return Err(Error::InvalidDivisibility { d });
    }
    if num_integer::gcd(p, q) != 1 {
        return Err(Error::NonCoprime { a: p, b: q });
    }
    let d_big = BigInt::from(d);
    let first = Rational::new(
        BigInt::from(q) * (&d_big * &d_big - 1),
        BigInt::from(24) * &d_big,
    )?;
    if p == 0 {
        return Ok(first);
    }
    let s = dedekind_sum(q, p.abs())?;
    let second = Rational::new(BigInt::from(p) * &d_big, 2)? * s;
    Ok(first - second)
}

/// Which filling of the knot complement a Spin^c fiber count refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ManifoldRole {
    /// Y = Y_{1/0}, the trivial filling.
    TrivialFilling,
    /// Y_0 = Y_{0/1}, the zero filling.
    ZeroFilling,
    /// Y_{p/q}, the surgered manifold.
    PqFilling,
}

/// Cardinality of a Spin^c fiber over a structure on the complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FiberSize {
    Finite(i64),
    /// Free Z-action on the zero filling's structures.
    Infinite,
}

impl fmt::Display for FiberSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberSize::Finite(n) => write!(f, "{n}"),
            FiberSize::Infinite => f.write_str("infinite"),
        }
    }
}

/// The data of a p/q filling of a knot complement X: surgery coefficients,
/// longitude divisibility d, the torsion order of H_1(X), the symmetrized
/// Alexander polynomial of the zero filling, and the base invariants of
/// the trivial filling.
#[derive(Clone, Debug)]
pub struct SurgeryProblem {
    p: i64,
    q: i64,
    d: i64,
    tors_order: i64,
    alex: SymmetricLaurent,
    base_eul_sum: Rational,
    base_lambda_prime: Rational,
}

impl SurgeryProblem {
    /// Validates gcd(p, q) = 1, p != 0, d >= 1, tors >= 1, and the
    /// normalization A(1) = tors * d of the Alexander polynomial.
    pub fn new(
        p: i64,
        q: i64,
        d: i64,
        tors_order: i64,
        alex: SymmetricLaurent,
        base_eul_sum: Rational,
        base_lambda_prime: Rational,
    ) -> Result<Self> {
        if p == 0 {
            return Err(Error::ZeroSurgeryCoefficient);
        }
        if d < 1 {
            return Err(Error::InvalidDivisibility { d });
        }
        if tors_order < 1 {
            return Err(Error::InvalidTorsionOrder { t: tors_order });
        }
        if num_integer::gcd(p, q) != 1 {
            return Err(Error::NonCoprime { a: p, b: q });
        }
        let expected = BigInt::from(tors_order) * BigInt::from(d);
        if !alex.check_normalization(expected.clone()) {
            return Err(Error::NormalizationFailed {
                got: alex.evaluate_at_one(),
                expected,
            });
        }
        Ok(SurgeryProblem {
            p,
            q,
            d,
            tors_order,
            alex,
            base_eul_sum,
            base_lambda_prime,
        })
    }

    /// p/q surgery on the unknot in the three-sphere.
    pub fn unknot(p: i64, q: i64) -> Result<Self> {
        Self::on_knot_in_sphere(SymmetricLaurent::unknot(), p, q)
    }

    /// p/q surgery on a knot in the three-sphere (d = 1, trivial torsion,
    /// vanishing base invariants).
    pub fn on_knot_in_sphere(alex: SymmetricLaurent, p: i64, q: i64) -> Result<Self> {
        Self::new(p, q, 1, 1, alex, Rational::zero(), Rational::zero())
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn tors_order(&self) -> i64 {
        self.tors_order
    }

    pub fn alex(&self) -> &SymmetricLaurent {
        &self.alex
    }

    pub fn base_eul_sum(&self) -> &Rational {
        &self.base_eul_sum
    }

    pub fn base_lambda_prime(&self) -> &Rational {
        &self.base_lambda_prime
    }

    /// Scaled Casson-Walker invariant of the filled manifold:
    /// lambda'(Y_{p/q}) = p lambda'(Y) + q sum a_j j^2 + tors * eps'(p,q,d).
    pub fn lambda_prime_after_surgery(&self) -> Rational {
        let eps = epsilon_prime(self.p, self.q, self.d).expect("validated on construction");
        Rational::from_integer(self.p) * &self.base_lambda_prime
            + Rational::from_integer(self.q) * Rational::from_integer(self.alex.second_moment())
            + Rational::from_integer(self.tors_order) * eps
    }

    /// Total renormalized Euler characteristic of the filled manifold,
    /// summed over its Spin^c structures. Same shape as the lambda'
    /// formula; the correction quantity is shared.
    pub fn eul_sum_after_surgery(&self) -> Rational {
        let eps = epsilon_prime(self.p, self.q, self.d).expect("validated on construction");
        Rational::from_integer(self.p) * &self.base_eul_sum
            + Rational::from_integer(self.q) * Rational::from_integer(self.alex.second_moment())
            + Rational::from_integer(self.tors_order) * eps
    }

    /// Size of the Spin^c fiber over one structure on the complement:
    /// d for the trivial filling, |p| d for the p/q filling, and infinite
    /// for the zero filling.
    pub fn spinc_fiber_size(&self, which: ManifoldRole) -> FiberSize {
        match which {
            ManifoldRole::TrivialFilling => FiberSize::Finite(self.d),
            ManifoldRole::ZeroFilling => FiberSize::Infinite,
            ManifoldRole::PqFilling => FiberSize::Finite(self.p.abs() * self.d),
        }
    }

    /// Order of H_1 of the filled manifold under this crate's convention
    /// |p| * d * tors; exact at d = 1, tors = 1.
    pub fn h1_order(&self) -> i64 {
        self.p.abs() * self.d * self.tors_order
    }

    /// True when this is exactly the unknot model problem, for which the
    /// filled manifold is the lens space L(-p, q).
    pub fn is_unknot_model(&self) -> bool {
        self.d == 1
            && self.tors_order == 1
            && self.alex == SymmetricLaurent::unknot()
            && self.base_eul_sum.is_zero()
            && self.base_lambda_prime.is_zero()
    }
}

/// Casson invariant of 1/n surgery on a knot in the three-sphere:
/// n times the second moment of the (normalized) Alexander polynomial.
pub fn casson_from_one_over_n(alex: &SymmetricLaurent, n: i64) -> Result<Rational> {
    if !alex.check_normalization(1) {
        return Err(Error::NormalizationFailed {
            got: alex.evaluate_at_one(),
            expected: BigInt::from(1),
        });
    }
    Ok(Rational::from_integer(n) * Rational::from_integer(alex.second_moment()))
}

/// One residual of the unknot-model sweep.
#[derive(Clone, Debug)]
pub struct LensResidual {
    pub p: i64,
    pub q: i64,
    pub residual: Rational,
}

/// Compare the surgery-formula Euler sum for the unknot with the lens-space
/// computation of the same number, for every coprime (p, q) with
/// 2 <= p <= pmax and 0 < q < p. All residuals must vanish.
pub fn cross_check_lens(pmax: i64) -> Result<Vec<LensResidual>> {
    if pmax < 2 {
        return Err(Error::SweepBoundTooSmall { pmax });
    }
    let mut out = Vec::new();
    for p in 2..=pmax {
        for q in 1..p {
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            let problem = SurgeryProblem::unknot(p, q)?;
            let lens = LensSpace::new(p, q, Orientation::Negative)?;
            let lens_total: Rational = lens.eul().values().sum();
            out.push(LensResidual {
                p,
                q,
                residual: problem.eul_sum_after_surgery() - lens_total,
            });
        }
    }
    Ok(out)
}

/// A named exact value inside a report, tagged with the identities that
/// checked it.
#[derive(Clone, Debug, Serialize)]
pub struct ReportedValue {
    pub name: String,
    pub value: Rational,
    pub checked_by: Vec<String>,
}

/// One identity check: exact residual plus verdict.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub residual: Rational,
    pub pass: bool,
}

impl IdentityCheck {
    pub fn from_residual(name: &str, residual: Rational) -> Self {
        let pass = residual.is_zero();
        IdentityCheck {
            name: name.to_string(),
            residual,
            pass,
        }
    }
}

/// Structured output pairing computed invariants with the identities they
/// were checked against.
#[derive(Clone, Debug, Default, Serialize)]
pub struct InvariantReport {
    pub title: String,
    pub inputs: Vec<(String, String)>,
    pub values: Vec<ReportedValue>,
    pub sequences: Vec<(String, Vec<Rational>)>,
    pub checks: Vec<IdentityCheck>,
}

impl InvariantReport {
    pub fn new(title: &str) -> Self {
        InvariantReport {
            title: title.to_string(),
            ..Default::default()
        }
    }

    pub fn push_input(&mut self, name: &str, value: impl fmt::Display) {
        self.inputs.push((name.to_string(), value.to_string()));
    }

    pub fn push_value(&mut self, name: &str, value: Rational, checked_by: &[&str]) {
        self.values.push(ReportedValue {
            name: name.to_string(),
            value,
            checked_by: checked_by.iter().map(|s| s.to_string()).collect(),
        });
    }

    pub fn push_sequence(&mut self, name: &str, values: Vec<Rational>) {
        self.sequences.push((name.to_string(), values));
    }

    pub fn push_check(&mut self, check: IdentityCheck) {
        self.checks.push(check);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

impl SurgeryProblem {
    /// Evaluate the surgery formulas and assemble the report, including
    /// every identity check applicable to this problem.
    pub fn report(&self) -> InvariantReport {
        let mut report = InvariantReport::new(&format!("surgery {}/{}", self.p, self.q));
        report.push_input("p", self.p);
        report.push_input("q", self.q);
        report.push_input("d", self.d);
        report.push_input("tors", self.tors_order);
        report.push_input("alex", &self.alex);
        report.push_input("base_eul", &self.base_eul_sum);
        report.push_input("base_lambda", &self.base_lambda_prime);
        report.push_input(
            "spinc_fiber_y",
            self.spinc_fiber_size(ManifoldRole::TrivialFilling),
        );
        report.push_input(
            "spinc_fiber_y0",
            self.spinc_fiber_size(ManifoldRole::ZeroFilling),
        );

        let eps = epsilon_prime(self.p, self.q, self.d).expect("validated on construction");
        let lambda_prime = self.lambda_prime_after_surgery();
        let eul_sum = self.eul_sum_after_surgery();
        let lambda = &lambda_prime / Rational::from_integer(self.h1_order());

        let mut lambda_checks: Vec<&str> = vec!["alexander-normalization"];
        let mut eul_checks: Vec<&str> = vec!["alexander-normalization"];

        // A(1) = tors * d was enforced on construction; echo it as a check.
        let normalization_residual = Rational::from_integer(
            self.alex.evaluate_at_one() - BigInt::from(self.tors_order) * BigInt::from(self.d),
        );
        report.push_check(IdentityCheck::from_residual(
            "alexander-normalization",
            normalization_residual,
        ));

        if (self.p, self.q) == (1, 0) {
            report.push_check(IdentityCheck::from_residual(
                "trivial-surgery-eul",
                &eul_sum - &self.base_eul_sum,
            ));
            report.push_check(IdentityCheck::from_residual(
                "trivial-surgery-lambda",
                &lambda_prime - &self.base_lambda_prime,
            ));
            lambda_checks.push("trivial-surgery-lambda");
            eul_checks.push("trivial-surgery-eul");
        }

        if self.is_unknot_model() {
            let lens = LensSpace::new(self.p.abs(), self.q, Orientation::Negative)
                .expect("coprime by construction");
            let lens_eul: Rational = lens.eul().values().sum();
            let sign = Rational::from_integer(self.p.signum());
            report.push_check(IdentityCheck::from_residual(
                "lens-eul-sum",
                &eul_sum - &sign * lens_eul,
            ));
            report.push_check(IdentityCheck::from_residual(
                "lens-lambda",
                &lambda_prime - &sign * Rational::from_integer(self.p.abs()) * lens.lambda(),
            ));
            report.push_check(IdentityCheck::from_residual(
                "lens-d-sum",
                d_sum_check(self.p.abs(), self.q).expect("coprime by construction"),
            ));
            lambda_checks.push("lens-lambda");
            eul_checks.push("lens-eul-sum");
        }

        report.push_value("epsilon_prime", eps, &[]);
        report.push_value("eul_sum", eul_sum, &eul_checks);
        report.push_value("lambda_prime", lambda_prime, &lambda_checks);
        report.push_value("lambda", lambda, &lambda_checks);
        report.push_value("h1_order", Rational::from_integer(self.h1_order()), &[]);

        match self.spinc_fiber_size(ManifoldRole::PqFilling) {
            FiberSize::Finite(n) => {
                report.push_value("spinc_fiber_ypq", Rational::from_integer(n), &[])
            }
            FiberSize::Infinite => unreachable!("p/q filling has finite fibers"),
        }

        report
    }
}
