//! Arbitrary-precision rational arithmetic and the number-theoretic kernel:
//! the sawtooth function, Dedekind sums, the reciprocity residual, and
//! reduction into the half-open interval [0, 2).
//!
//! Every invariant in this crate is an exact rational; no floating point is
//! used anywhere.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number, always stored in lowest terms with a positive
/// denominator.
///
/// Serializes as the string `"num/den"` (integers as `"n/1"`), the form used
/// verbatim in every report format.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Build `num/den`, reduced to lowest terms with the sign moved to the
    /// numerator. Fails on a zero denominator.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Largest integer `<= self`.
    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Smallest integer `>= self`.
    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `"num/den"` or a bare integer literal.
    fn from_str(s: &str) -> Result<Self> {
        let parse_err = || Error::RationalParse {
            input: s.to_string(),
        };
        let mut parts = s.splitn(2, '/');
        let num: BigInt = parts
            .next()
            .and_then(|t| t.trim().parse().ok())
            .ok_or_else(parse_err)?;
        let den: BigInt = match parts.next() {
            Some(t) => t.trim().parse().map_err(|_| parse_err())?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

struct RationalVisitor;

impl Visitor<'_> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a rational as \"num/den\" or an integer literal")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
        v.parse().map_err(de::Error::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rational, E> {
        Ok(Rational::from_integer(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rational, E> {
        Ok(Rational::from_integer(BigInt::from(v)))
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        deserializer.deserialize_any(RationalVisitor)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }

        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }

        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }

        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division panics on a zero divisor, like the underlying big-rational type.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

/// The sawtooth function ((x)): zero on integers, otherwise
/// `x - floor(x) - 1/2`.
pub fn sawtooth(x: &Rational) -> Rational {
    if x.is_integer() {
        return Rational::zero();
    }
    x - &Rational::from_integer(x.floor()) - Rational::new(1, 2).unwrap()
}

/// The Dedekind sum s(q, p) = sum_{k=1}^{p-1} ((k/p)) ((kq/p)).
///
/// The second argument is the modulus and must be positive; q may be any
/// integer coprime to p (the sum only depends on q mod p).
pub fn dedekind_sum(q: i64, p: i64) -> Result<Rational> {
    if p < 1 {
        return Err(Error::NonPositiveModulus { value: p });
    }
    let q_red = q.rem_euclid(p);
    if num_integer::gcd(q_red, p) != 1 {
        return Err(Error::NonCoprime { a: q, b: p });
    }
    // Coprimality keeps every sawtooth term away from zero, so
    // ((k/p))((kq/p)) = (2k - p)(2r - p) / 4p^2 with r = kq mod p.
    // The i128 accumulator is exact: |sum| < p^3 and the loop is O(p).
    let (p_i, q_i) = (p as i128, q_red as i128);
    let mut acc: i128 = 0;
    for k in 1..p_i {
        let r = (k * q_i) % p_i;
        acc += (2 * k - p_i) * (2 * r - p_i);
    }
    Rational::new(acc, BigInt::from(4) * p_i * p_i)
}

/// Dedekind reciprocity residual
/// `s(p,q) + s(q,p) - (-1/4 + (p/q + q/p + 1/pq)/12)`.
///
/// Exactly zero for every coprime pair of positive integers.
pub fn reciprocity_residual(p: i64, q: i64) -> Result<Rational> {
    if p < 1 {
        return Err(Error::NonPositiveModulus { value: p });
    }
    if q < 1 {
        return Err(Error::NonPositiveModulus { value: q });
    }
    if num_integer::gcd(p, q) != 1 {
        return Err(Error::NonCoprime { a: p, b: q });
    }
    let s_pq = dedekind_sum(p, q)?;
    let s_qp = dedekind_sum(q, p)?;
    let cross = Rational::new(p, q)?
        + Rational::new(q, p)?
        + Rational::new(1, BigInt::from(p) * BigInt::from(q))?;
    let closed = Rational::new(-1, 4)? + cross / Rational::from_integer(12);
    Ok(s_pq + s_qp - closed)
}

/// Reduce x modulo 2 into [0, 2): the result r satisfies 0 <= r < 2 and
/// x - r is an even integer.
pub fn reduce_mod_two(x: &Rational) -> Rational {
    let half = Rational(&x.0 / BigRational::from_integer(BigInt::from(2)));
    x - &Rational::from_integer(half.floor() * BigInt::from(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(num: i64, den: i64) -> Rational {
        Rational::new(num, den).unwrap()
    }

    /// Definitional oracle: the literal sawtooth-product summation.
    fn dedekind_sum_naive(q: i64, p: i64) -> Rational {
        let mut acc = Rational::zero();
        for k in 1..p {
            let a = sawtooth(&rat(k, p));
            let b = sawtooth(&rat(k * q, p));
            acc += a * b;
        }
        acc
    }

    #[test]
    fn rational_normalizes() {
        assert_eq!(rat(2, 4), rat(1, 2));
        assert_eq!(rat(1, -2), rat(-1, 2));
        assert_eq!(rat(-3, -6), rat(1, 2));
        assert_eq!(rat(0, 7), Rational::zero());
    }

    #[test]
    fn rational_rejects_zero_denominator() {
        assert!(matches!(Rational::new(1, 0), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn rational_display_always_shows_denominator() {
        assert_eq!(rat(0, 1).to_string(), "0/1");
        assert_eq!(rat(-1, 1).to_string(), "-1/1");
        assert_eq!(rat(7, 4).to_string(), "7/4");
    }

    #[test]
    fn rational_parses_both_forms() {
        assert_eq!("3/4".parse::<Rational>().unwrap(), rat(3, 4));
        assert_eq!("-5".parse::<Rational>().unwrap(), rat(-5, 1));
        assert_eq!(" 6 / -8 ".parse::<Rational>().unwrap(), rat(-3, 4));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
        assert!("a/b".parse::<Rational>().is_err());
    }

    #[test]
    fn sawtooth_examples() {
        assert_eq!(sawtooth(&rat(0, 1)), Rational::zero());
        assert_eq!(sawtooth(&rat(1, 2)), Rational::zero());
        assert_eq!(sawtooth(&rat(1, 3)), rat(-1, 6));
        assert_eq!(sawtooth(&rat(5, 4)), rat(-1, 4));
    }

    #[test]
    fn dedekind_sum_examples() {
        assert_eq!(dedekind_sum(0, 1).unwrap(), Rational::zero());
        assert_eq!(dedekind_sum(1, 2).unwrap(), Rational::zero());
        assert_eq!(dedekind_sum(1, 3).unwrap(), rat(1, 18));
        assert_eq!(dedekind_sum(2, 3).unwrap(), rat(-1, 18));
    }

    #[test]
    fn dedekind_sum_rejects_bad_inputs() {
        assert!(matches!(dedekind_sum(2, 4), Err(Error::NonCoprime { .. })));
        assert!(matches!(
            dedekind_sum(1, 0),
            Err(Error::NonPositiveModulus { .. })
        ));
        assert!(matches!(
            dedekind_sum(1, -3),
            Err(Error::NonPositiveModulus { .. })
        ));
    }

    #[test]
    fn dedekind_sum_matches_definitional_oracle() {
        for p in 1..=40 {
            for q in 0..p {
                if num_integer::gcd(q, p) == 1 {
                    assert_eq!(
                        dedekind_sum(q, p).unwrap(),
                        dedekind_sum_naive(q, p),
                        "s({q},{p})"
                    );
                }
            }
        }
    }

    #[test]
    fn reciprocity_examples() {
        assert_eq!(reciprocity_residual(2, 3).unwrap(), Rational::zero());
        assert_eq!(reciprocity_residual(1, 1).unwrap(), Rational::zero());
        assert_eq!(reciprocity_residual(5, 7).unwrap(), Rational::zero());
    }

    #[test]
    fn reciprocity_rejects_non_coprime() {
        assert!(matches!(
            reciprocity_residual(6, 9),
            Err(Error::NonCoprime { .. })
        ));
    }

    #[test]
    fn reduce_mod_two_examples() {
        assert_eq!(reduce_mod_two(&Rational::zero()), Rational::zero());
        assert_eq!(reduce_mod_two(&rat(-1, 4)), rat(7, 4));
        assert_eq!(reduce_mod_two(&rat(5, 2)), rat(1, 2));
    }

    proptest! {
        #[test]
        fn dedekind_periodicity(p in 1i64..120, q in -300i64..300) {
            prop_assume!(num_integer::gcd(q.rem_euclid(p), p) == 1);
            prop_assert_eq!(
                dedekind_sum(q + p, p).unwrap(),
                dedekind_sum(q, p).unwrap()
            );
        }

        #[test]
        fn dedekind_oddness(p in 1i64..120, q in 1i64..120) {
            prop_assume!(q < p && num_integer::gcd(q, p) == 1);
            prop_assert_eq!(
                dedekind_sum(p - q, p).unwrap(),
                -dedekind_sum(q, p).unwrap()
            );
        }

        #[test]
        fn reciprocity_vanishes(p in 1i64..200, q in 1i64..200) {
            prop_assume!(num_integer::gcd(p, q) == 1);
            prop_assert!(reciprocity_residual(p, q).unwrap().is_zero());
        }

        #[test]
        fn sawtooth_is_odd_and_periodic(num in -500i64..500, den in 1i64..40) {
            let x = rat(num, den);
            prop_assert_eq!(sawtooth(&-&x), -sawtooth(&x));
            prop_assert_eq!(sawtooth(&(&x + &Rational::one())), sawtooth(&x));
        }

        #[test]
        fn reduce_mod_two_idempotent_and_even_shift(num in -500i64..500, den in 1i64..40) {
            let x = rat(num, den);
            let r = reduce_mod_two(&x);
            prop_assert!(!r.is_negative() && r < rat(2, 1));
            prop_assert_eq!(reduce_mod_two(&r), r.clone());
            let shift = &x - &r;
            prop_assert!(shift.is_integer());
            prop_assert!((shift.floor() % 2i64).is_zero());
        }

        #[test]
        fn display_parse_round_trip(num in -1000i64..1000, den in 1i64..1000) {
            let x = rat(num, den);
            prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
        }
    }
}
