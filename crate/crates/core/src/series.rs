//! Truncated formal power series over an exchangeable coefficient field.
//!
//! A [`TruncatedSeries`] stores the coefficients c_0..c_K of a series known
//! exactly through order K, together with the variable it is a series in
//! (the modular parameter `a` or the nome `p`). Arithmetic results carry
//! `order = min` of the operand orders; there is no silent order promotion.

use crate::coeff::Coeff;
use crate::error::{Error, Result};

/// Variable tag of a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    /// The modular parameter a = lambda(tau).
    A,
    /// The nome p = exp(pi sqrt(-1) tau).
    P,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::A => "a",
            Var::P => "p",
        }
    }
}

/// A power series truncated at an explicit order.
///
/// Invariant: `coeffs.len() == order + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<C: Coeff> {
    pub var: Var,
    coeffs: Vec<C>,
}

impl<C: Coeff> TruncatedSeries<C> {
    /// Series from an explicit coefficient list; the order is `len - 1`.
    pub fn from_coeffs(var: Var, coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least c_0");
        Self { var, coeffs }
    }

    pub fn zero(var: Var, order: usize) -> Self {
        Self {
            var,
            coeffs: vec![C::zero(); order + 1],
        }
    }

    pub fn constant(var: Var, value: C, order: usize) -> Self {
        let mut s = Self::zero(var, order);
        s.coeffs[0] = value;
        s
    }

    pub fn one(var: Var, order: usize) -> Self {
        Self::constant(var, C::one(), order)
    }

    /// The monomial c * x^k, truncated at `order` (k <= order).
    pub fn monomial(var: Var, value: C, k: usize, order: usize) -> Self {
        assert!(k <= order, "monomial degree exceeds truncation order");
        let mut s = Self::zero(var, order);
        s.coeffs[k] = value;
        s
    }

    /// The identity series x at the given order (order >= 1).
    pub fn identity(var: Var, order: usize) -> Self {
        Self::monomial(var, C::one(), 1, order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &C {
        assert!(
            k <= self.order(),
            "coefficient at order {} unknown (series truncated at {})",
            k,
            self.order()
        );
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, value: C) {
        assert!(k <= self.order());
        self.coeffs[k] = value;
    }

    /// Lower the truncation order (no-op if already at `order` or below).
    pub fn truncated(&self, order: usize) -> Self {
        let upto = order.min(self.order());
        Self {
            var: self.var,
            coeffs: self.coeffs[..=upto].to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_var(&self, other: &Self) -> Result<()> {
        if self.var != other.var {
            return Err(Error::VariableMismatch {
                lhs: self.var.name(),
                rhs: other.var.name(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|k| self.coeffs[k].clone() + other.coeffs[k].clone())
            .collect();
        Ok(Self { var: self.var, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|k| self.coeffs[k].clone() - other.coeffs[k].clone())
            .collect();
        Ok(Self { var: self.var, coeffs })
    }

    pub fn neg(&self) -> Self {
        Self {
            var: self.var,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scale(&self, factor: &C) -> Self {
        Self {
            var: self.var,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.clone() * factor.clone())
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        let n = self.order().min(other.order());
        let mut coeffs = vec![C::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Ok(Self { var: self.var, coeffs })
    }

    /// Multiplicative inverse: requires c_0 != 0.
    pub fn recip(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let n = self.order();
        let inv0 = C::one() / self.coeffs[0].clone();
        let mut coeffs = vec![C::zero(); n + 1];
        coeffs[0] = inv0.clone();
        for k in 1..=n {
            // c_k of the inverse from the convolution identity (f * g = 1).
            let mut acc = C::zero();
            for j in 1..=k {
                acc = acc + self.coeffs[j].clone() * coeffs[k - j].clone();
            }
            coeffs[k] = -(inv0.clone() * acc);
        }
        Ok(Self { var: self.var, coeffs })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.recip()?)
    }

    /// Substitute `inner` (a series in its own variable with zero constant
    /// term) for the variable of `self`. The result is a series in the
    /// inner variable, exact to order `min(self.order, inner.order)`.
    pub fn compose(&self, inner: &TruncatedSeries<C>) -> Result<TruncatedSeries<C>> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::InnerConstantNonzero);
        }
        if self.order() > inner.order() {
            return Err(Error::OrderMismatch {
                outer: self.order(),
                inner: inner.order(),
            });
        }
        let n = self.order().min(inner.order());
        // Horner evaluation in the series ring at the inner order, then cut.
        let mut acc = TruncatedSeries::constant(inner.var, self.coeffs[self.order()].clone(), inner.order());
        for k in (0..self.order()).rev() {
            acc = acc.mul(inner)?;
            acc.coeffs[0] = acc.coeffs[0].clone() + self.coeffs[k].clone();
        }
        Ok(acc.truncated(n))
    }

    /// Square root with an exact square leading coefficient (Newton on
    /// series). Mainly used by oracles that expand closed-form eigenvalues.
    pub fn sqrt(&self) -> Result<Self> {
        let c0 = self.coeffs[0]
            .exact_sqrt()
            .ok_or_else(|| Error::InvalidInput("series sqrt needs a square constant term".into()))?;
        if c0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let n = self.order();
        let mut y = Self::constant(self.var, c0, n);
        // Newton: y <- (y + f/y) / 2; doubles correct order each step.
        let half = C::from_ratio(1, 2);
        let mut correct = 0usize;
        while correct < n {
            y = y.add(&self.div(&y)?)?.scale(&half);
            correct = 2 * correct + 1;
        }
        Ok(y)
    }

    /// Evaluate the truncated polynomial at a scalar.
    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> TruncatedSeries<D> {
        TruncatedSeries {
            var: self.var,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> TruncatedSeries<f64> {
        self.map(|c| c.to_f64())
    }
}
