//! Bidirectional parameter map between the elliptic Hamiltonian data
//! (couplings, nome, energy) and the Heun equation data (singularity
//! parameter a, accessory parameter q, exponents), plus the Riemann scheme.
//!
//! The Heun equation here has regular singular points 0, 1, 1/a, infinity
//! with local exponents {0, -l_i - 1/2} at the finite points and
//! {alpha, beta} at infinity, tied by the Fuchs relation
//! (l0 + 3/2) + (l1 + 3/2) + (l2 + 3/2) = alpha + beta + 1.

use crate::coeff::Couplings;
use crate::elliptic::{half_periods_value, modular_lambda_value, DEFAULT_N};
use crate::error::{Error, Result};

/// Heun equation data.
#[derive(Clone, Debug, PartialEq)]
pub struct HeunParams {
    /// Locates the fourth singularity at 1/a; equals the modular lambda
    /// value of the nome.
    pub a: f64,
    /// Accessory parameter.
    pub q: f64,
    /// Exponents at infinity.
    pub alpha: f64,
    pub beta: f64,
    /// Local exponents at 0, 1, 1/a, infinity (in that order).
    pub exponents: [[f64; 2]; 4],
}

/// Exponent table of the Riemann P-symbol for the given couplings.
pub fn p_symbol(l: &Couplings<f64>) -> [[f64; 2]; 4] {
    let alpha = 0.5 * (l.l0() + l.l1() + l.l2() + l.l3() + 4.0);
    let beta = 0.5 * (l.l0() + l.l1() + l.l2() - l.l3() + 3.0);
    [
        [0.0, -l.l0() - 0.5],
        [0.0, -l.l1() - 0.5],
        [0.0, -l.l2() - 0.5],
        [alpha, beta],
    ]
}

/// q~ = (a+1)/3 sum l_i(l_i+1) - a (l0+l2+2)^2 - (l0+l1+2)^2.
fn q_tilde(l: &Couplings<f64>, a: f64) -> f64 {
    let strengths = l.coupling_sum();
    (a + 1.0) / 3.0 * strengths
        - a * (l.l0() + l.l2() + 2.0).powi(2)
        - (l.l0() + l.l1() + 2.0).powi(2)
}

/// Map coupling/nome/energy data to Heun parameters. The nome must be
/// nonzero: at p = 0 the fourth singularity escapes to infinity and the
/// equation degenerates to the hypergeometric case handled by the
/// trigonometric basis.
pub fn to_heun(l: &Couplings<f64>, p: f64, energy: f64) -> Result<HeunParams> {
    if p == 0.0 {
        return Err(Error::InvalidInput(
            "p = 0 degenerates to the hypergeometric case".into(),
        ));
    }
    let ([e1, _, e3], _) = half_periods_value(p, DEFAULT_N)?;
    let a = modular_lambda_value(p, DEFAULT_N)?;
    let q = -(energy / (e1 - e3) + q_tilde(l, a)) / (4.0 * a);
    let exponents = p_symbol(l);
    Ok(HeunParams {
        a,
        q,
        alpha: exponents[3][0],
        beta: exponents[3][1],
        exponents,
    })
}

/// d a / d p of the truncated product formula, via the logarithmic
/// derivative of a = 16 p prod ((1+p^{2n})/(1+p^{2n-1}))^8.
fn lambda_log_derivative(p: f64, n_terms: usize) -> f64 {
    let mut acc = 1.0 / p;
    for n in 1..=n_terms {
        let n = n as i32;
        acc += 8.0
            * (2.0 * n as f64 * p.powi(2 * n - 1) / (1.0 + p.powi(2 * n))
                - (2.0 * n as f64 - 1.0) * p.powi(2 * n - 2) / (1.0 + p.powi(2 * n - 1)));
    }
    acc
}

/// Invert a = lambda(tau) for the real nome by Newton iteration on the
/// truncated product formula, starting from the leading-order guess a/16.
///
/// Validated for 0 < a <= 0.97 (nome up to about 0.2); outside that the
/// iteration may leave the region where the truncation is trustworthy.
pub fn invert_lambda(a: f64, n_terms: usize) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::InvalidInput(format!(
            "lambda inversion requires a in (0, 1), got {}",
            a
        )));
    }
    let mut p = a / 16.0;
    for _ in 0..100 {
        let f = modular_lambda_value(p, n_terms)? - a;
        let df = modular_lambda_value(p, n_terms)? * lambda_log_derivative(p, n_terms);
        let step = f / df;
        p -= step;
        if !(p.abs() < 1.0) {
            return Err(Error::NoConvergence { residual: f.abs() });
        }
        if step.abs() < 1e-16 * p.abs().max(1e-300) {
            let residual = (modular_lambda_value(p, n_terms)? - a).abs();
            if residual < 1e-12 * a {
                return Ok(p);
            }
        }
    }
    let residual = (modular_lambda_value(p, n_terms)? - a).abs();
    if residual < 1e-12 * a {
        Ok(p)
    } else {
        Err(Error::NoConvergence { residual })
    }
}

/// Recover couplings, nome and energy from Heun parameters.
///
/// Couplings come from the exponent differences at the finite points
/// (taking the representative with l_i >= -1/2) and from alpha - beta;
/// the input must satisfy the Fuchs relation, which is checked rather than
/// silently renormalized. The l <-> -l-1 ambiguity of each coupling is
/// inherent to the exponent data; the chosen representative is the one the
/// whole transformation uses.
pub fn from_heun(h: &HeunParams) -> Result<(Couplings<f64>, f64, f64)> {
    if h.a == 0.0 || h.a == 1.0 {
        return Err(Error::InvalidInput(format!(
            "singularity parameter a = {} is degenerate",
            h.a
        )));
    }
    let l0 = (h.exponents[0][0] - h.exponents[0][1]).abs() - 0.5;
    let l1 = (h.exponents[1][0] - h.exponents[1][1]).abs() - 0.5;
    let l2 = (h.exponents[2][0] - h.exponents[2][1]).abs() - 0.5;
    let l3 = h.alpha - h.beta - 0.5;
    let l = Couplings::new(l0, l1, l2, l3);
    let fuchs = (l0 + 1.5) + (l1 + 1.5) + (l2 + 1.5) - (h.alpha + h.beta + 1.0);
    if fuchs.abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "Fuchs relation violated by {:.3e}",
            fuchs
        )));
    }
    let p = invert_lambda(h.a, DEFAULT_N)?;
    let ([e1, _, e3], _) = half_periods_value(p, DEFAULT_N)?;
    let energy = -(4.0 * h.a * h.q + q_tilde(&l, h.a)) * (e1 - e3);
    Ok((l, p, energy))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l1208() -> Couplings<f64> {
        Couplings::new(1.0, 2.0, 0.0, 8.0)
    }

    #[test]
    fn alpha_beta_values() {
        let h = to_heun(&l1208(), 0.05, -5.0).unwrap();
        assert_eq!(h.alpha, 7.5);
        assert_eq!(h.beta, -1.0);
    }

    #[test]
    fn fuchs_relation_holds_identically() {
        for l in [
            Couplings::new(1.0, 2.0, 0.0, 8.0),
            Couplings::new(0.5, 1.5, 2.5, 0.25),
            Couplings::new(2.0 / 3.0, 1.0 / 7.0, 3.0 / 11.0, 5.0 / 13.0),
        ] {
            let ex = p_symbol(&l);
            let (alpha, beta) = (ex[3][0], ex[3][1]);
            let lhs = (l.l0() + 1.5) + (l.l1() + 1.5) + (l.l2() + 1.5);
            assert!((lhs - (alpha + beta + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn p_symbol_exponent_structure() {
        // zero couplings: exponents {0, -1/2} at finite points, {2, 3/2}
        // at infinity; all eight exponents sum to 2
        let l = Couplings::new(0.0, 0.0, 0.0, 0.0);
        let ex = p_symbol(&l);
        assert_eq!(ex[0], [0.0, -0.5]);
        assert_eq!(ex[3], [2.0, 1.5]);
        let sum: f64 = ex.iter().flatten().sum();
        assert!((sum - 2.0).abs() < 1e-12);
        // exponent differences at finite points are l_i + 1/2
        let l = l1208();
        let ex = p_symbol(&l);
        for (i, li) in [1.0, 2.0, 0.0].iter().enumerate() {
            assert!((ex[i][0] - ex[i][1] - (li + 0.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn lambda_inversion_leading_order() {
        // a = 0.16 inverts to p close to 0.01
        let p = invert_lambda(0.16, DEFAULT_N).unwrap();
        assert!((p - 0.01).abs() < 2e-3, "p = {}", p);
        assert!((modular_lambda_value(p, DEFAULT_N).unwrap() - 0.16).abs() < 1e-13);
    }

    #[test]
    fn roundtrip_identity() {
        let l = l1208();
        for &(p, energy) in &[(0.05, -5.0), (0.01, 3.0), (0.2, -40.0)] {
            let h = to_heun(&l, p, energy).unwrap();
            let (l_back, p_back, e_back) = from_heun(&h).unwrap();
            for i in 0..4 {
                assert!((l_back.l[i] - l.l[i]).abs() < 1e-10);
            }
            assert!((p_back - p).abs() < 1e-10, "p {} vs {}", p_back, p);
            assert!(
                (e_back - energy).abs() < 1e-10 * energy.abs().max(1.0),
                "E {} vs {}",
                e_back,
                energy
            );
        }
    }

    #[test]
    fn q_affine_in_energy() {
        // slope of q against E is -1/(4 a (e1 - e3))
        let l = l1208();
        let p = 0.07;
        let h1 = to_heun(&l, p, 1.0).unwrap();
        let h2 = to_heun(&l, p, 2.0).unwrap();
        let ([e1, _, e3], _) = half_periods_value(p, DEFAULT_N).unwrap();
        let want = -1.0 / (4.0 * h1.a * (e1 - e3));
        assert!(((h2.q - h1.q) - want).abs() < 1e-12 * want.abs());
    }

    #[test]
    fn fuchs_violation_rejected() {
        let mut h = to_heun(&l1208(), 0.05, -5.0).unwrap();
        h.alpha += 0.25;
        assert!(matches!(from_heun(&h), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn degenerate_cases_rejected() {
        assert!(to_heun(&l1208(), 0.0, 1.0).is_err());
        let mut h = to_heun(&l1208(), 0.05, -5.0).unwrap();
        h.a = 0.0;
        assert!(from_heun(&h).is_err());
        assert!(invert_lambda(1.0, DEFAULT_N).is_err());
    }
}
