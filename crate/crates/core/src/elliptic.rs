//! Weierstrass p-function q-expansions, half-period values, the modular
//! parameter a(p), and the Fourier data of the perturbing potential.
//!
//! Conventions: periods (1, tau) with nome p = exp(pi sqrt(-1) tau) kept
//! real in (-1, 1); half-period shifts indexed 0..3 as omega_0 = 0,
//! omega_1 = 1/2, omega_2 = (1+tau)/2, omega_3 = tau/2. Energies carry
//! explicit pi^2 factors in `f64` paths; exact series store the rational
//! coefficient of pi^2. Series are in the variable p itself (not p^2), so
//! the parity structure of the four shift expansions is preserved.

use std::f64::consts::PI;

use crate::coeff::{Coeff, Couplings, Rat};
use crate::error::{Error, Result};
use crate::series::{TruncatedSeries, Var};

/// Default truncation of the q-sums.
pub const DEFAULT_N: usize = 50;

const POLE_THRESHOLD: f64 = 1e-9;

/// Exact p-series of the half-period values (in pi^2 units) and of a(p).
#[derive(Clone, Debug)]
pub struct EllipticSeries {
    pub order: usize,
    /// e_1, e_2, e_3 as rational p-series in units of pi^2.
    pub e: [TruncatedSeries<Rat>; 3],
    /// a = lambda(tau) as a rational p-series (dimensionless).
    pub a: TruncatedSeries<Rat>,
}

/// Numeric elliptic data at a fixed nome, plus optional exact series.
#[derive(Clone, Debug)]
pub struct EllipticContext {
    pub p: f64,
    pub n_terms: usize,
    /// e_1, e_2, e_3 in energy units (pi^2 included).
    pub e: [f64; 3],
    /// a = (e_2 - e_3)/(e_1 - e_3).
    pub a: f64,
    /// Geometric tail estimate for the truncated q-sums (energy units).
    pub tail: f64,
    pub series: Option<EllipticSeries>,
}

impl EllipticContext {
    pub fn new(p: f64, n_terms: usize) -> Result<Self> {
        if !(p.abs() < 1.0) {
            return Err(Error::NomeOutOfRange(p));
        }
        let (e, tail) = half_periods_value(p, n_terms)?;
        let a = if e[0] == e[2] { 0.0 } else { (e[1] - e[2]) / (e[0] - e[2]) };
        Ok(Self {
            p,
            n_terms,
            e,
            a,
            tail,
            series: None,
        })
    }

    /// Attach exact rational p-series of e_i and a at the given order.
    pub fn with_series(mut self, order: usize) -> Self {
        self.series = Some(EllipticSeries {
            order,
            e: half_period_series(order),
            a: modular_lambda_series(order),
        });
        self
    }

    pub fn e1(&self) -> f64 {
        self.e[0]
    }
    pub fn e2(&self) -> f64 {
        self.e[1]
    }
    pub fn e3(&self) -> f64 {
        self.e[2]
    }
}

/// Sum_{n > N} n q^n = q^{N+1} ((N+1) - N q) / (1-q)^2, for |q| < 1.
fn tail_n_qn(q: f64, n: usize) -> f64 {
    let qa = q.abs();
    qa.powi(n as i32 + 1) * ((n as f64 + 1.0) - n as f64 * qa) / ((1.0 - qa) * (1.0 - qa))
}

/// Half-period values e_1, e_2, e_3 at a numeric nome, by the truncated
/// shift expansions evaluated at x = 1/2 (for e_1) and x = 0 (for e_2, e_3).
/// Returns the values (energy units) and a tail estimate.
pub fn half_periods_value(p: f64, n_terms: usize) -> Result<([f64; 3], f64)> {
    if !(p.abs() < 1.0) {
        return Err(Error::NomeOutOfRange(p));
    }
    let mut s1 = 0.0; // sum for e1: 16 sum_{n odd} n p^{2n} / (1 - p^{2n})
    let mut s2 = 0.0; // e2: -8 sum n p^n ((-1)^n - p^n) / (1 - p^{2n})
    let mut s3 = 0.0; // e3: -8 sum n p^n (1 - p^n) / (1 - p^{2n})
    for n in 1..=n_terms {
        let nf = n as f64;
        let pn = p.powi(n as i32);
        let p2n = pn * pn;
        let den = 1.0 - p2n;
        if n % 2 == 1 {
            s1 += 16.0 * nf * p2n / den;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        s2 += -8.0 * nf * pn * (sign - pn) / den;
        s3 += -8.0 * nf * pn * (1.0 - pn) / den;
    }
    let e1 = PI * PI * (2.0 / 3.0 + s1);
    let e2 = PI * PI * (-1.0 / 3.0 + s2);
    let e3 = PI * PI * (-1.0 / 3.0 + s3);
    let tail = if p == 0.0 {
        0.0
    } else {
        24.0 * PI * PI * tail_n_qn(p, n_terms) / (1.0 - p.abs())
    };
    Ok(([e1, e2, e3], tail))
}

/// Exact p-series of (e_1, e_2, e_3) in pi^2 units.
pub fn half_period_series(order: usize) -> [TruncatedSeries<Rat>; 3] {
    let mut e1 = TruncatedSeries::constant(Var::P, Rat::from_ratio(2, 3), order);
    let mut e2 = TruncatedSeries::constant(Var::P, Rat::from_ratio(-1, 3), order);
    let mut e3 = TruncatedSeries::constant(Var::P, Rat::from_ratio(-1, 3), order);
    for n in 1..=order {
        let sign = if n % 2 == 0 { 1i64 } else { -1i64 };
        // p^{n(2j+1)} terms (odd multiples of n) from the p^n cosine factor
        let mut k = n;
        while k <= order {
            let c = Rat::from_int(-8 * sign * n as i64);
            e2.set_coeff(k, e2.coeff(k).clone() + c);
            let c3 = Rat::from_int(-8 * n as i64);
            e3.set_coeff(k, e3.coeff(k).clone() + c3);
            k += 2 * n;
        }
        // p^{2n(j+1)} terms
        let mut k = 2 * n;
        while k <= order {
            if n % 2 == 1 {
                let c = Rat::from_int(16 * n as i64);
                e1.set_coeff(k, e1.coeff(k).clone() + c);
            }
            let c = Rat::from_int(8 * n as i64);
            e2.set_coeff(k, e2.coeff(k).clone() + c.clone());
            e3.set_coeff(k, e3.coeff(k).clone() + c);
            k += 2 * n;
        }
    }
    [e1, e2, e3]
}

/// a = lambda(tau) at a numeric nome, by the truncated product formula
/// a = 16 p prod_{n>=1} ((1 + p^{2n})/(1 + p^{2n-1}))^8.
pub fn modular_lambda_value(p: f64, n_terms: usize) -> Result<f64> {
    if !(p.abs() < 1.0) {
        return Err(Error::NomeOutOfRange(p));
    }
    let mut prod = 1.0;
    for n in 1..=n_terms {
        let ratio = (1.0 + p.powi(2 * n as i32)) / (1.0 + p.powi(2 * n as i32 - 1));
        prod *= ratio.powi(8);
    }
    Ok(16.0 * p * prod)
}

/// Exact p-series of a = lambda(tau) from the product formula, truncated to
/// factors with 2n - 1 <= order.
pub fn modular_lambda_series(order: usize) -> TruncatedSeries<Rat> {
    let one = TruncatedSeries::<Rat>::one(Var::P, order);
    let mut prod = one.clone();
    let mut n = 1usize;
    while 2 * n - 1 <= order {
        let mut num = one.clone();
        if 2 * n <= order {
            num.set_coeff(2 * n, Rat::one());
        }
        let mut den = one.clone();
        den.set_coeff(2 * n - 1, Rat::one());
        let factor = num.mul(&den.recip().expect("unit constant term")).unwrap();
        let mut f8 = factor.clone();
        for _ in 1..8 {
            f8 = f8.mul(&factor).unwrap();
        }
        prod = prod.mul(&f8).unwrap();
        n += 1;
    }
    let sixteen_p = TruncatedSeries::monomial(Var::P, Rat::from_int(16), 1, order);
    sixteen_p.mul(&prod).unwrap()
}

/// Result of a truncated p-function evaluation.
#[derive(Clone, Copy, Debug)]
pub struct WpEval {
    pub value: f64,
    pub tail_bound: f64,
}

/// wp(x + omega_shift) at real x from the truncated Fourier-q expansion.
pub fn wp_eval(x: f64, shift: usize, ctx: &EllipticContext) -> Result<WpEval> {
    assert!(shift < 4, "shift index must be 0..=3");
    let p = ctx.p;
    let n_terms = ctx.n_terms;
    let pi2 = PI * PI;
    let (leading, use_sign) = match shift {
        0 => {
            let s = (PI * x).sin();
            if s.abs() < POLE_THRESHOLD {
                return Err(Error::PoleProximity {
                    what: "sin(pi x)",
                    magnitude: s.abs(),
                });
            }
            (pi2 / (s * s), false)
        }
        1 => {
            let c = (PI * x).cos();
            if c.abs() < POLE_THRESHOLD {
                return Err(Error::PoleProximity {
                    what: "cos(pi x)",
                    magnitude: c.abs(),
                });
            }
            (pi2 / (c * c), true)
        }
        _ => (0.0, shift == 2),
    };

    let mut sum = 0.0;
    for n in 1..=n_terms {
        let nf = n as f64;
        let pn = p.powi(n as i32);
        let p2n = pn * pn;
        let den = 1.0 - p2n;
        let sign = if use_sign && n % 2 == 1 { -1.0 } else { 1.0 };
        let c = (2.0 * nf * PI * x).cos();
        match shift {
            0 | 1 => sum += -8.0 * pi2 * nf * p2n / den * (sign * c - 1.0),
            _ => sum += -8.0 * pi2 * nf * pn * (sign * c - pn) / den,
        }
    }
    let tail_q = match shift {
        0 | 1 => p * p,
        _ => p.abs(),
    };
    let tail_bound = if p == 0.0 {
        0.0
    } else {
        16.0 * pi2 * tail_n_qn(tail_q, n_terms) / (1.0 - tail_q.abs())
    };
    Ok(WpEval {
        value: leading - pi2 / 3.0 + sum,
        tail_bound,
    })
}

/// A finite cosine polynomial sum_n c_n cos(2 pi n x); coefficients are in
/// pi^2 units (n = 0 entry is the constant term).
#[derive(Clone, Debug, PartialEq)]
pub struct CosinePolynomial<C: Coeff> {
    pub harmonics: Vec<(usize, C)>,
}

impl<C: Coeff> CosinePolynomial<C> {
    pub fn max_harmonic(&self) -> usize {
        self.harmonics
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, _)| *n)
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.harmonics.iter().all(|(_, c)| c.is_zero())
    }

    pub fn coeff(&self, n: usize) -> C {
        self.harmonics
            .iter()
            .find(|(h, _)| *h == n)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(C::zero)
    }

    /// Evaluate at real x, in energy units (multiplies the pi^2 back in).
    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (n, c) in &self.harmonics {
            acc += c.to_f64() * (2.0 * PI * *n as f64 * x).cos();
        }
        PI * PI * acc
    }
}

/// The potential expansion data: H = H_T + C_T + sum_k V_k(x) p^k.
#[derive(Clone, Debug)]
pub struct PotentialExpansion<C: Coeff> {
    /// V_1 .. V_K (index 0 holds V_1); coefficients in pi^2 units.
    pub v: Vec<CosinePolynomial<C>>,
    /// C_T = -(1/3) sum_i l_i (l_i + 1), in pi^2 units.
    pub c_t: C,
}

impl<C: Coeff> PotentialExpansion<C> {
    /// V_k for k >= 1.
    pub fn v_k(&self, k: usize) -> &CosinePolynomial<C> {
        &self.v[k - 1]
    }
}

/// Exact cosine coefficients of V_1..V_K, collected from the four shift
/// expansions of wp.
pub fn potential_fourier<C: Coeff>(l: &Couplings<C>, order: usize) -> PotentialExpansion<C> {
    let strengths: Vec<C> = l
        .l
        .iter()
        .map(|li| li.clone() * (li.clone() + C::one()))
        .collect();
    let mut v: Vec<Vec<C>> = (1..=order).map(|k| vec![C::zero(); k + 1]).collect();

    let mut add = |k: usize, n: usize, c: C| {
        if k <= order {
            let slot = &mut v[k - 1][n];
            *slot = slot.clone() + c;
        }
    };

    for n in 1..=order {
        let eight_n = C::from_int(8 * n as i64);
        let sign = if n % 2 == 0 { C::one() } else { -C::one() };
        // couplings l_0 (shift 0) and l_1 (shift 1/2): cosine and constant
        // parts at even orders k = 2 n (j + 1)
        let mut k = 2 * n;
        while k <= order {
            add(k, n, -(eight_n.clone()) * strengths[0].clone());
            add(k, 0, eight_n.clone() * strengths[0].clone());
            add(k, n, -(eight_n.clone()) * sign.clone() * strengths[1].clone());
            add(k, 0, eight_n.clone() * strengths[1].clone());
            // constant parts of the tau/2 and (1+tau)/2 shifts
            add(k, 0, eight_n.clone() * strengths[2].clone());
            add(k, 0, eight_n.clone() * strengths[3].clone());
            k += 2 * n;
        }
        // cosine parts of the tau/2 (l_3) and (1+tau)/2 (l_2) shifts at
        // orders k = n (2j + 1)
        let mut k = n;
        while k <= order {
            add(k, n, -(eight_n.clone()) * strengths[3].clone());
            add(k, n, -(eight_n.clone()) * sign.clone() * strengths[2].clone());
            k += 2 * n;
        }
    }

    let v = v
        .into_iter()
        .map(|coeffs| CosinePolynomial {
            harmonics: coeffs.into_iter().enumerate().collect(),
        })
        .collect();
    let c_t = -(C::from_ratio(1, 3)) * l.coupling_sum();
    PotentialExpansion { v, c_t }
}

/// The majorant C(p) = sum_k V_k p^k bounding sup_x |sum_k V_k(x) p^k|,
/// evaluated by truncated summation. Returns (value, tail estimate), in
/// energy units.
pub fn majorant_bound(l: &Couplings<f64>, p: f64, n_terms: usize) -> Result<(f64, f64)> {
    if !(p.abs() < 1.0) {
        return Err(Error::NomeOutOfRange(p));
    }
    let l01 = l.l0() * (l.l0() + 1.0) + l.l1() * (l.l1() + 1.0);
    let l23 = l.l2() * (l.l2() + 1.0) + l.l3() * (l.l3() + 1.0);
    let pa = p.abs();
    let mut sum = 0.0;
    for n in 1..=n_terms {
        let nf = n as f64;
        let pn = pa.powi(n as i32);
        let p2n = pn * pn;
        sum += l01 * 2.0 * nf * p2n / (1.0 - p2n) + l23 * nf * pn / (1.0 - pn);
    }
    let tail = (2.0 * l01 + l23) * tail_n_qn(pa, n_terms) / (1.0 - pa);
    Ok((8.0 * PI * PI * sum, 8.0 * PI * PI * tail))
}
