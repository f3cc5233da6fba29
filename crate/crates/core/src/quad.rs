//! Gauss-Jacobi quadrature on [-1, 1] with weight (1-t)^alpha (1+t)^beta.
//!
//! Nodes are the roots of the Jacobi polynomial P_n^{(alpha,beta)}, located
//! by Newton iteration from Chebyshev-angle initial guesses; weights come
//! from the standard derivative formula. Exact for polynomial integrands of
//! degree <= 2n - 1 up to rounding.

use crate::error::{Error, Result};
use crate::gamma::ln_gamma;

#[derive(Debug, Clone)]
pub struct GaussJacobi {
    pub alpha: f64,
    pub beta: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Value and derivative of P_n^{(alpha,beta)} at t, by the three-term
/// recurrence in n.
fn jacobi_poly_and_deriv(n: usize, alpha: f64, beta: f64, t: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0;
    let mut p = 0.5 * (alpha - beta + (alpha + beta + 2.0) * t);
    for k in 2..=n {
        let kf = k as f64;
        let ab = alpha + beta;
        let c1 = 2.0 * kf * (kf + ab) * (2.0 * kf + ab - 2.0);
        let c2 = (2.0 * kf + ab - 1.0) * (alpha * alpha - beta * beta);
        let c3 = (2.0 * kf + ab - 2.0) * (2.0 * kf + ab - 1.0) * (2.0 * kf + ab);
        let c4 = 2.0 * (kf + alpha - 1.0) * (kf + beta - 1.0) * (2.0 * kf + ab);
        let next = ((c2 + c3 * t) * p - c4 * p_prev) / c1;
        p_prev = p;
        p = next;
    }
    // derivative from the hypergeometric contiguous relation:
    // (2n + a + b) (1 - t^2) P_n' = n (a - b - (2n + a + b) t) P_n
    //                               + 2 (n + a) (n + b) P_{n-1}
    let nf = n as f64;
    let ab = alpha + beta;
    let dp = if (1.0 - t * t).abs() > 1e-300 {
        (nf * (alpha - beta - (2.0 * nf + ab) * t) * p
            + 2.0 * (nf + alpha) * (nf + beta) * p_prev)
            / ((2.0 * nf + ab) * (1.0 - t * t))
    } else {
        0.0
    };
    (p, dp)
}

impl GaussJacobi {
    pub fn new(n: usize, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0 && beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidInput(format!(
                "Gauss-Jacobi weight exponents must exceed -1, got alpha = {}, beta = {}",
                alpha, beta
            )));
        }
        if n == 0 {
            return Ok(Self {
                alpha,
                beta,
                nodes: vec![],
                weights: vec![],
            });
        }

        let mut nodes = Vec::with_capacity(n);
        for i in 0..n {
            // Chebyshev-like initial guess, then Newton with deflation
            // against already-found roots for robustness at larger n.
            let mut t = -((std::f64::consts::PI * (i as f64 + 0.75 + 0.5 * alpha)
                / (n as f64 + 0.5 * (alpha + beta + 1.0)))
            .cos());
            let mut converged = false;
            for _ in 0..200 {
                let (p, dp) = jacobi_poly_and_deriv(n, alpha, beta, t);
                let mut defl = 0.0;
                for &r in &nodes {
                    defl += 1.0 / (t - r);
                }
                let step = p / (dp - p * defl);
                t -= step;
                if step.abs() < 1e-15 {
                    converged = true;
                    break;
                }
            }
            if !converged {
                let (p, _) = jacobi_poly_and_deriv(n, alpha, beta, t);
                return Err(Error::NoConvergence { residual: p.abs() });
            }
            nodes.push(t);
        }
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let nf = n as f64;
        let ln_c = (alpha + beta + 1.0) * 2.0_f64.ln() + ln_gamma(nf + alpha + 1.0)
            + ln_gamma(nf + beta + 1.0)
            - ln_gamma(nf + alpha + beta + 1.0)
            - ln_gamma(nf + 1.0);
        let weights = nodes
            .iter()
            .map(|&t| {
                let (_, dp) = jacobi_poly_and_deriv(n, alpha, beta, t);
                ln_c.exp() / ((1.0 - t * t) * dp * dp)
            })
            .collect();

        Ok(Self {
            alpha,
            beta,
            nodes,
            weights,
        })
    }

    /// Integral of f against the weight over [-1, 1].
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }

    /// Integral of g(w) w^{a} (1-w)^{b} dw over [0, 1], where a = beta and
    /// b = alpha of this rule (substitution w = (1+t)/2).
    pub fn integrate_unit(&self, g: impl Fn(f64) -> f64) -> f64 {
        let scale = 2.0_f64.powf(-(self.alpha + self.beta + 1.0));
        scale * self.integrate(|t| g(0.5 * (1.0 + t)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::gamma;

    fn beta_fn(x: f64, y: f64) -> f64 {
        (ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y)).exp()
    }

    #[test]
    fn total_mass_matches_beta_function() {
        for &(n, a, b) in &[(4usize, 0.0, 0.0), (8, 1.5, -0.5), (12, 2.3, 0.7)] {
            let q = GaussJacobi::new(n, a, b).unwrap();
            let mass: f64 = q.weights.iter().sum();
            let expect = 2.0_f64.powf(a + b + 1.0) * beta_fn(a + 1.0, b + 1.0);
            assert!(
                (mass - expect).abs() / expect < 1e-12,
                "mass {} vs {}",
                mass,
                expect
            );
        }
    }

    #[test]
    fn polynomial_moments_exact() {
        // moments of w^k against w^{b}(1-w)^{a} on [0,1] are Beta(b+1+k, a+1)
        let (a, b) = (2.5, 0.5);
        let q = GaussJacobi::new(10, a, b).unwrap();
        for k in 0..=15 {
            let got = q.integrate_unit(|w| w.powi(k));
            let expect = beta_fn(b + 1.0 + k as f64, a + 1.0);
            assert!(
                (got - expect).abs() / expect < 1e-12,
                "k = {}: {} vs {}",
                k,
                got,
                expect
            );
        }
    }

    #[test]
    fn rejects_bad_exponents() {
        assert!(GaussJacobi::new(4, -1.0, 0.0).is_err());
        assert!(GaussJacobi::new(4, 0.0, -1.5).is_err());
    }

    #[test]
    fn gegenbauer_case_orthogonality() {
        // int_{-1}^{1} t^2 (1-t^2)^{1/2} dt = pi/8
        let q = GaussJacobi::new(6, 0.5, 0.5).unwrap();
        let got = q.integrate(|t| t * t);
        assert!((got - std::f64::consts::PI / 8.0).abs() < 1e-13);
        let _ = gamma(1.0);
    }
}
