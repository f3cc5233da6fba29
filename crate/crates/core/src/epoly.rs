//! Polynomials in the half-period values (e_1, e_2) with exact rational
//! coefficients; e_3 is always eliminated through e_1 + e_2 + e_3 = 0.
//!
//! Used by the invariant-space machinery so traces, determinants and
//! trigonometric limits can be compared against closed forms exactly.

use std::collections::BTreeMap;

use crate::coeff::{Coeff, Rat};

/// A polynomial sum_{i,j} c_{ij} e_1^i e_2^j over the rationals.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct EPoly {
    terms: BTreeMap<(u32, u32), Rat>,
}

impl EPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Self::default();
        if !Coeff::is_zero(&c) {
            p.terms.insert((0, 0), c);
        }
        p
    }

    pub fn e1() -> Self {
        Self::monomial(1, 0, <Rat as Coeff>::one())
    }

    pub fn e2() -> Self {
        Self::monomial(0, 1, <Rat as Coeff>::one())
    }

    /// e_3 = -e_1 - e_2.
    pub fn e3() -> Self {
        let mut p = Self::default();
        p.terms.insert((1, 0), -<Rat as Coeff>::one());
        p.terms.insert((0, 1), -<Rat as Coeff>::one());
        p
    }

    pub fn monomial(i: u32, j: u32, c: Rat) -> Self {
        let mut p = Self::default();
        if !Coeff::is_zero(&c) {
            p.terms.insert((i, j), c);
        }
        p
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rat {
        self.terms
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(<Rat as Coeff>::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, key: (u32, u32), c: Rat) {
        if Coeff::is_zero(&c) {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(<Rat as Coeff>::zero);
        *entry = entry.clone() + c;
        if Coeff::is_zero(entry) {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(*k, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::default();
        for (k, c) in &self.terms {
            out.terms.insert(*k, -c.clone());
        }
        out
    }

    pub fn scale(&self, factor: &Rat) -> Self {
        if Coeff::is_zero(factor) {
            return Self::default();
        }
        let mut out = Self::default();
        for (k, c) in &self.terms {
            out.terms.insert(*k, c.clone() * factor.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for ((i1, j1), c1) in &self.terms {
            for ((i2, j2), c2) in &other.terms {
                out.insert((i1 + i2, j1 + j2), c1.clone() * c2.clone());
            }
        }
        out
    }

    /// Evaluate at numeric (e_1, e_2).
    pub fn eval(&self, e1: f64, e2: f64) -> f64 {
        self.terms
            .iter()
            .map(|((i, j), c)| c.to_f64() * e1.powi(*i as i32) * e2.powi(*j as i32))
            .sum()
    }

    /// Exact substitution of rational values for (e_1, e_2).
    pub fn subst(&self, e1: &Rat, e2: &Rat) -> Rat {
        let mut acc = <Rat as Coeff>::zero();
        for ((i, j), c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..*i {
                t = t * e1.clone();
            }
            for _ in 0..*j {
                t = t * e2.clone();
            }
            acc = acc + t;
        }
        acc
    }

    /// Value at the trigonometric point (e_1, e_2) = (2/3, -1/3) in pi^2
    /// units.
    pub fn subst_trig(&self) -> Rat {
        self.subst(&Rat::from_ratio(2, 3), &Rat::from_ratio(-1, 3))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, rint};

    #[test]
    fn e3_elimination() {
        let sum = EPoly::e1().add(&EPoly::e2()).add(&EPoly::e3());
        assert!(sum.is_zero());
    }

    #[test]
    fn arithmetic_and_eval() {
        // (e1 - e2)^2 = e1^2 - 2 e1 e2 + e2^2
        let d = EPoly::e1().sub(&EPoly::e2());
        let sq = d.mul(&d);
        assert_eq!(sq.coeff(2, 0), rint(1));
        assert_eq!(sq.coeff(1, 1), rint(-2));
        assert_eq!(sq.coeff(0, 2), rint(1));
        assert!((sq.eval(3.0, 1.0) - 4.0).abs() < 1e-14);
        assert_eq!(sq.subst(&rint(3), &rint(1)), rint(4));
    }

    #[test]
    fn trig_substitution() {
        // e2 - e3 = e1 + 2 e2 vanishes at the trigonometric point
        let p = EPoly::e2().sub(&EPoly::e3());
        assert_eq!(p.subst_trig(), rint(0));
        assert_eq!(EPoly::e1().subst_trig(), rat(2, 3));
    }
}
