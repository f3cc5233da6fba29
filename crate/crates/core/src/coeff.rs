//! Exchangeable coefficient fields for the series engines.
//!
//! Everything downstream (truncated series, recurrence coefficients,
//! perturbation recursions) is generic over [`Coeff`], instantiated either
//! with [`Rat`] (exact arbitrary-precision rationals) or `f64`.
//!
//! Energy-valued quantities are kept in units of pi^2 in rational mode, so
//! the paper-side recursions stay inside the rational field; `f64` paths
//! multiply the pi^2 back in at evaluation boundaries.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar used by the exact-mode engines.
pub type Rat = BigRational;

/// Build a rational from a numerator/denominator pair of machine integers.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Build a rational integer.
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Field of coefficients the engines run over.
///
/// The trait is deliberately small: ring/field operations, a few embeddings,
/// and a lossy `to_f64` for reporting. `is_zero` must be exact for `Rat`;
/// for `f64` it is bitwise comparison against `0.0` (callers that need a
/// tolerance perform their own checks).
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_rat(r: &Rat) -> Self;
    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;
    /// Exact square root when one exists in the field (used by the series
    /// square root and by test oracles). `None` if the value is negative or
    /// not a perfect square of a field element.
    fn exact_sqrt(&self) -> Option<Self>;
}

impl Coeff for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_int(n: i64) -> Self {
        rint(n)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        rat(num, den)
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn exact_sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        if Zero::is_zero(self) {
            return Some(<Self as Coeff>::zero());
        }
        let num = self.numer().sqrt();
        let den = self.denom().sqrt();
        if &num * &num == *self.numer() && &den * &den == *self.denom() {
            Some(Rat::new(num, den))
        } else {
            None
        }
    }
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_rat(r: &Rat) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn exact_sqrt(&self) -> Option<Self> {
        if *self < 0.0 {
            None
        } else {
            Some(self.sqrt())
        }
    }
}

/// The four coupling constants of the Hamiltonian, over a coefficient field.
#[derive(Clone, Debug, PartialEq)]
pub struct Couplings<C: Coeff> {
    pub l: [C; 4],
}

impl<C: Coeff> Couplings<C> {
    pub fn new(l0: C, l1: C, l2: C, l3: C) -> Self {
        Self { l: [l0, l1, l2, l3] }
    }

    pub fn l0(&self) -> &C {
        &self.l[0]
    }
    pub fn l1(&self) -> &C {
        &self.l[1]
    }
    pub fn l2(&self) -> &C {
        &self.l[2]
    }
    pub fn l3(&self) -> &C {
        &self.l[3]
    }

    /// sum over i of l_i (l_i + 1), the overall coupling strength entering
    /// the trigonometric constant shift.
    pub fn coupling_sum(&self) -> C {
        let mut acc = C::zero();
        for li in &self.l {
            acc = acc + li.clone() * (li.clone() + C::one());
        }
        acc
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Couplings<D> {
        Couplings {
            l: [f(&self.l[0]), f(&self.l[1]), f(&self.l[2]), f(&self.l[3])],
        }
    }

    pub fn to_f64(&self) -> Couplings<f64> {
        self.map(|c| c.to_f64())
    }
}

impl Couplings<Rat> {
    pub fn from_i64(l0: i64, l1: i64, l2: i64, l3: i64) -> Self {
        Self::new(rint(l0), rint(l1), rint(l2), rint(l3))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_sqrt_of_perfect_square() {
        assert_eq!(rat(36, 25).exact_sqrt(), Some(rat(6, 5)));
        assert_eq!(rat(2, 1).exact_sqrt(), None);
        assert_eq!(rat(-4, 1).exact_sqrt(), None);
        assert_eq!(rint(0).exact_sqrt(), Some(rint(0)));
    }

    #[test]
    fn coupling_sum_matches_hand_value() {
        // l = (1,2,0,8): 2 + 6 + 0 + 72 = 80
        let l = Couplings::from_i64(1, 2, 0, 8);
        assert_eq!(l.coupling_sum(), rint(80));
    }
}
