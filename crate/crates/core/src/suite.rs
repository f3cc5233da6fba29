//! The cross-validation suite: every check the library promises, runnable
//! both as the `acceptance` integration tests and through the command-line
//! `validate` subcommand.
//!
//! Each check returns a structured result with per-assertion detail lines;
//! nothing panics. Checks are deterministic for a fixed seed.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeff::{rat, rint, Coeff, Couplings, Rat};
use crate::elliptic::{
    half_period_series, modular_lambda_series, wp_eval, EllipticContext,
    DEFAULT_N,
};
use crate::heun::{from_heun, to_heun};
use crate::perturb::{
    decay_diagnostics, eigenfunction_eval, energy_map, expand_a, expand_p_direct,
    heun_operator_residual, level_series, EvalPoint,
};
use crate::qes::{
    algebraic_eigen, algebraic_eigen_trig_exact, census, match_bottom, trig_spectrum, Hilbert,
};
use crate::trig::{generating_function_check, inner_product, psi_poly, psi_tilde, three_term,
    BasisCase, CaseTag, PolyInW, Sector};

/// Outcome of one acceptance check.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub id: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
    pub duration: Duration,
}

/// Configuration of the randomized checks.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub random_l: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            random_l: 20,
        }
    }
}

struct Check {
    passed: bool,
    details: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Self {
            passed: true,
            details: Vec::new(),
        }
    }

    fn assert(&mut self, ok: bool, msg: String) {
        if !ok {
            self.passed = false;
        }
        self.details
            .push(format!("{} {}", if ok { "pass:" } else { "FAIL:" }, msg));
    }

    fn note(&mut self, msg: String) {
        self.details.push(format!("note: {}", msg));
    }

    fn finish(
        self,
        id: &'static str,
        name: &'static str,
        started: Instant,
    ) -> CheckResult {
        CheckResult {
            id,
            name,
            passed: self.passed,
            details: self.details,
            duration: started.elapsed(),
        }
    }
}

fn l1208() -> Couplings<Rat> {
    Couplings::from_i64(1, 2, 0, 8)
}

fn pi2() -> f64 {
    PI * PI
}

/// Criterion 1: the dim-2 invariant space of l = (1,2,0,8).
pub fn check_s61(_cfg: &SuiteConfig) -> CheckResult {
    let started = Instant::now();
    let mut c = Check::new();
    let l = l1208();
    let spaces = census(&l);
    let space = spaces
        .iter()
        .find(|s| s.alpha.alpha == [rint(2), rint(3), rint(1), rint(-8)]);
    match space {
        None => c.assert(false, "invariant space (2,3,1,-8) not found".into()),
        Some(space) => {
            for &p in &[0.01, 0.05, 0.1] {
                let ctx = EllipticContext::new(p, DEFAULT_N).unwrap();
                let (e1, e2) = (ctx.e1(), ctx.e2());
                let disc = (106.0 * e1 * e1 + 73.0 * e1 * e2 + 46.0 * e2 * e2).sqrt();
                let expect = [
                    11.0 * e1 - 9.0 * e2 - 2.0 * disc,
                    11.0 * e1 - 9.0 * e2 + 2.0 * disc,
                ];
                match algebraic_eigen(&space.matrix.at_context(&ctx)) {
                    Ok(eigen) => {
                        for (pair, want) in eigen.iter().zip(expect) {
                            let rel = (pair.value.re - want).abs() / want.abs();
                            c.assert(
                                rel < 1e-10 && pair.is_real(1e-10),
                                format!("p = {}: eigenvalue {:.12e} vs closed form {:.12e} (rel {:.2e})",
                                    p, pair.value.re, want, rel),
                            );
                        }
                    }
                    Err(e) => c.assert(false, format!("eigensolve failed: {}", e)),
                }
            }
            let trace = space.matrix.trace();
            c.assert(
                trace.coeff(1, 0) == rint(22)
                    && trace.coeff(0, 1) == rint(-18)
                    && trace.coeff(0, 0) == rint(0),
                "symbolic trace equals 2(11 e1 - 9 e2) exactly".into(),
            );
            let det = space.matrix.determinant();
            c.assert(
                det.coeff(2, 0) == rint(-303)
                    && det.coeff(1, 1) == rint(-490)
                    && det.coeff(0, 2) == rint(-103)
                    && det.coeff(0, 0) == rint(0)
                    && det.coeff(1, 0) == rint(0)
                    && det.coeff(0, 1) == rint(0),
                "symbolic determinant equals -303 e1^2 - 490 e1 e2 - 103 e2^2 exactly".into(),
            );
        }
    }
    let elapsed = started.elapsed();
    c.assert(
        elapsed < Duration::from_secs(1),
        format!("runtime {:?} < 1 s", elapsed),
    );
    c.finish("s6.1", "dim-2 invariant space golden values", started)
}

/// Criterion 2: the two in-Hilbert spaces of l = (1,0,4,1).
pub fn check_s63(_cfg: &SuiteConfig) -> CheckResult {
    let started = Instant::now();
    let mut c = Check::new();
    let l = Couplings::from_i64(1, 0, 4, 1);
    let spaces = census(&l);
    let ctx = EllipticContext::new(0.1, DEFAULT_N).unwrap();
    let (e1, e2) = (ctx.e1(), ctx.e2());

    let dim1 = spaces
        .iter()
        .find(|s| s.alpha.alpha == [rint(2), rint(0), rint(-4), rint(2)]);
    match dim1 {
        None => c.assert(false, "space (2,0,-4,2) not found".into()),
        Some(s) => {
            c.assert(
                s.dim == 1 && s.hilbert == Hilbert::InHPlus,
                format!("(2,0,-4,2): dim {} sector {}", s.dim, s.hilbert.label()),
            );
            match algebraic_eigen(&s.matrix.at_context(&ctx)) {
                Ok(eigen) => {
                    let want = -12.0 * e1 - 12.0 * e2;
                    let rel = (eigen[0].value.re - want).abs() / want.abs();
                    c.assert(
                        rel < 1e-10,
                        format!("eigenvalue {:.12e} vs -12 e1 - 12 e2 (rel {:.2e})", eigen[0].value.re, rel),
                    );
                }
                Err(e) => c.assert(false, format!("eigensolve failed: {}", e)),
            }
        }
    }
    let dim2 = spaces
        .iter()
        .find(|s| s.alpha.alpha == [rint(2), rint(1), rint(-4), rint(-1)]);
    match dim2 {
        None => c.assert(false, "space (2,1,-4,-1) not found".into()),
        Some(s) => {
            c.assert(
                s.dim == 2 && s.hilbert == Hilbert::InHMinus,
                format!("(2,1,-4,-1): dim {} sector {}", s.dim, s.hilbert.label()),
            );
            match algebraic_eigen(&s.matrix.at_context(&ctx)) {
                Ok(eigen) => {
                    let disc = (39.0 * e1 * e1 + 3.0 * e1 * e2 - 6.0 * e2 * e2).sqrt();
                    let expect = [
                        12.0 * e1 - 3.0 * e2 - 2.0 * disc,
                        12.0 * e1 - 3.0 * e2 + 2.0 * disc,
                    ];
                    for (pair, want) in eigen.iter().zip(expect) {
                        let rel = (pair.value.re - want).abs() / want.abs().max(1.0);
                        c.assert(
                            rel < 1e-10,
                            format!("eigenvalue {:.12e} vs closed form {:.12e} (rel {:.2e})", pair.value.re, want, rel),
                        );
                    }
                }
                Err(e) => c.assert(false, format!("eigensolve failed: {}", e)),
            }
        }
    }
    let elapsed = started.elapsed();
    c.assert(
        elapsed < Duration::from_secs(1),
        format!("runtime {:?} < 1 s", elapsed),
    );
    c.finish("s6.3", "sector-split invariant space golden values", started)
}

/// Criterion 3: the census of l = (1,2,1,0).
pub fn check_s62(_cfg: &SuiteConfig) -> CheckResult {
    let started = Instant::now();
    let mut c = Check::new();
    let l = Couplings::from_i64(1, 2, 1, 0);
    let spaces = census(&l);
    c.assert(
        spaces.len() == 3,
        format!("exactly three invariant spaces (found {})", spaces.len()),
    );
    for alpha in [[-1i64, -2, -1, 0], [-1, -2, 2, 1], [2, -2, -1, 1]] {
        let want: [Rat; 4] = std::array::from_fn(|i| rint(alpha[i]));
        match spaces.iter().find(|s| s.alpha.alpha == want) {
            None => c.assert(false, format!("space {:?} missing", alpha)),
            Some(s) => c.assert(
                !s.hilbert.in_hilbert(),
                format!("space {:?} flagged {}", alpha, s.hilbert.label()),
            ),
        }
    }
    c.finish("s6.2", "census with no Hilbert-space member", started)
}

/// Criterion 4: trig-limit spectra over the integer grid.
pub fn check_trig_grid(_cfg: &SuiteConfig) -> CheckResult {
    let started = Instant::now();
    let mut c = Check::new();
    let mut spaces_checked = 0usize;
    let mut all_ok = true;
    let mut first_fail = String::new();
    for l0 in 0..=4i64 {
        for l1 in 0..=4i64 {
            for l2 in 0..=4i64 {
                for l3 in 0..=4i64 {
                    let l = Couplings::from_i64(l0, l1, l2, l3);
                    for space in census(&l) {
                        let mut from_matrix = algebraic_eigen_trig_exact(&space.matrix);
                        let mut closed = trig_spectrum(&space.alpha, &l);
                        from_matrix.sort();
                        closed.sort();
                        if from_matrix != closed && all_ok {
                            all_ok = false;
                            first_fail = format!(
                                "l = ({},{},{},{}), alpha = {:?}",
                                l0, l1, l2, l3, space.alpha.alpha
                            );
                        }
                        spaces_checked += 1;
                    }
                }
            }
        }
    }
    c.assert(
        all_ok,
        format!(
            "matrix eigenvalues equal closed-form trig spectra exactly on {} spaces{}",
            spaces_checked,
            if all_ok { String::new() } else { format!(" (first failure: {})", first_fail) }
        ),
    );
    c.finish("trig-grid", "exact trig-limit spectra on the integer grid", started)
}

fn random_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rat {
    let den = rng.gen_range(1..=max_den);
    let num = rng.gen_range(0..=max_num * den);
    rat(num, den)
}

/// Criterion 5: exact engine equivalence on random rational couplings.
pub fn check_engine_equivalence(cfg: &SuiteConfig) -> CheckResult {
    let started = Instant::now();
    let mut c = Check::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let order = 4;
    for trial in 0..cfg.random_l {
        let l = Couplings::new(
            random_rational(&mut rng, 3, 3) + rat(1, 7),
            random_rational(&mut rng, 3, 3) + rat(1, 9),
            random_rational(&mut rng, 3, 3),
            random_rational(&mut rng, 4, 3),
        );
        let m = rng.gen_range(0..3usize);
        let via_a = expand_a(m, &l, order).and_then(|es| energy_map(&es, order));
        let direct = expand_p_direct(m, &l, order);
        match (via_a, direct) {
            (Ok(a), Ok(d)) => c.assert(
                a.evals == d.evals,
                format!(
                    "trial {}: m = {}, l = ({}, {}, {}, {}): series equal to order {}",
                    trial, m, l.l0(), l.l1(), l.l2(), l.l3(), order
                ),
            ),
            (a, d) => c.assert(
                false,
                format!("trial {}: engine error: {:?} / {:?}", trial, a.err(), d.err()),
            ),
        }
    }
    let elapsed = started.elapsed();
    c.assert(
        elapsed < Duration::from_secs(30),
        format!("runtime {:?} < 30 s", elapsed),
    );
    c.finish("engine-equiv", "exact equivalence of the two engines", started)
}

/// Criterion 6: bottom-of-spectrum matching.
///
/// The first clause (ground gap below 1e-8 pi^2 at order 8) demands more
/// accuracy than the order-8 truncation possesses at p = 0.02; the check
/// implements it faithfully with the more favorable of the two series
/// routes and reports the order at which the tolerance is in fact reached.
pub fn check_bottom_match(_cfg: &SuiteConfig) -> CheckResult {
    let started = Instant::now();
    let mut c = Check::new();
    let l = l1208();
    let ctx = EllipticContext::new(0.02, DEFAULT_N).unwrap();
    match match_bottom(&l, &ctx, 8) {
        Err(e) => c.assert(false, format!("match_bottom failed: {}", e)),
        Ok(report) => {
            c.assert(report.hypothesis_ok, "pairing hypothesis satisfied".into());
            let ground = &report.pairs[0];
            c.assert(
                ground.global_level == 0 && ground.best_gap() < 1e-8 * pi2(),
                format!(
                    "ground level gap {:.3e} < 1e-8 pi^2 = {:.3e} at order 8",
                    ground.best_gap(),
                    1e-8 * pi2()
                ),
            );
            let excited = &report.pairs[1];
            c.assert(
                excited.global_level == 1 && excited.best_gap() < 1e-6 * pi2(),
                format!(
                    "first excited gap {:.3e} < 1e-6 pi^2 at order 8",
                    excited.best_gap()
                ),
            );
            // report the attainment order of the 1e-8 pi^2 tolerance
            for order in 9..=14 {
                if let Ok(r) = match_bottom(&l, &ctx, order) {
                    if r.pairs[0].best_gap() < 1e-8 * pi2() {
                        c.note(format!(
                            "ground tolerance 1e-8 pi^2 attained at order {} (gap {:.3e})",
                            order,
                            r.pairs[0].best_gap()
                        ));
                        break;
                    }
                }
            }
        }
    }
    let l2 = Couplings::from_i64(1, 0, 4, 1);
    match match_bottom(&l2, &EllipticContext::new(0.02, DEFAULT_N).unwrap(), 8) {
        Err(e) => c.assert(false, format!("match_bottom (sector case) failed: {}", e)),
        Ok(report) => {
            let levels: Vec<usize> = report.pairs.iter().map(|p| p.global_level).collect();
            c.assert(
                levels == vec![0, 1, 3],
                format!("merged pairing assigns levels {:?} (want [0, 1, 3])", levels),
            );
        }
    }
    c.finish("bottom-match", "algebraic set pairs with the lowest levels", started)
}

/// Criterion 7: elliptic consistency.
pub fn check_elliptic(_cfg: &SuiteConfig) -> CheckResult {
    let started = Instant::now();
    let mut c = Check::new();
    let a = modular_lambda_series(10);
    let [e1, e2, e3] = half_period_series(10);
    let ratio = e2
        .sub(&e3)
        .unwrap()
        .div(&e1.sub(&e3).unwrap())
        .unwrap();
    c.assert(
        a == ratio,
        "lambda product series equals (e2 - e3)/(e1 - e3) exactly to order 10".into(),
    );
    let sum = e1.add(&e2).unwrap().add(&e3).unwrap();
    c.assert(sum.is_zero(), "e1 + e2 + e3 vanishes order by order".into());
    for (x, p) in [(0.13, 0.05), (0.22, 0.1), (0.3, 0.02), (0.37, 0.15), (0.41, 0.08)] {
        let ctx = EllipticContext::new(p, DEFAULT_N).unwrap();
        let lhs = wp_eval(x, 1, &ctx).unwrap().value;
        let wpx = wp_eval(x, 0, &ctx).unwrap().value;
        let rhs = ctx.e1() + (ctx.e1() - ctx.e2()) * (ctx.e1() - ctx.e3()) / (wpx - ctx.e1());
        let rel = (lhs - rhs).abs() / lhs.abs().max(1.0);
        c.assert(
            rel < 1e-10,
            format!("shift identity at (x, p) = ({}, {}): rel {:.2e}", x, p, rel),
        );
    }
    c.finish("elliptic", "modular parameter and half-period consistency", started)
}

/// Criterion 8: basis properties.
pub fn check_basis(_cfg: &SuiteConfig) -> CheckResult {
    let started = Instant::now();
    let mut c = Check::new();
    let cases: Vec<(String, BasisCase<Rat>)> = vec![
        (
            "(1/2, 1/2)".into(),
            BasisCase::new(CaseTag::Jacobi, rat(1, 2), rat(1, 2), Sector::Full).unwrap(),
        ),
        (
            "(1, 2)".into(),
            BasisCase::new(CaseTag::Jacobi, rint(1), rint(2), Sector::Full).unwrap(),
        ),
        (
            "(23/10, 0)".into(),
            BasisCase::new(CaseTag::Gegenbauer, rat(23, 10), rint(0), Sector::Full).unwrap(),
        ),
    ];
    for (label, case) in &cases {
        let mut worst = 0.0_f64;
        for m in 0..=10usize {
            let f = psi_poly(m, case).unwrap();
            for mp in m..=10usize {
                let g = psi_poly(mp, case).unwrap();
                let ip = inner_product(&f, &g, case).unwrap();
                let expect = if m == mp { 1.0 } else { 0.0 };
                worst = worst.max((ip - expect).abs());
            }
        }
        c.assert(
            worst < 1e-10,
            format!("orthonormality for l = {}: worst deviation {:.2e}", label, worst),
        );
    }
    // exact three-term identities for m <= 8
    let mut exact_ok = true;
    let (tl0, tl1) = (rat(5, 2), rat(1, 3));
    for m in 0..=8usize {
        let tt = three_term(m, &tl0, &tl1).unwrap();
        let psi_m = psi_tilde(m, &tl0, &tl1);
        let psi_up = psi_tilde(m + 1, &tl0, &tl1);
        let psi_dn = if m > 0 {
            psi_tilde(m - 1, &tl0, &tl1)
        } else {
            PolyInW { coeffs: vec![rint(0)] }
        };
        let at = |j: usize, p: &PolyInW<Rat>| -> Rat {
            p.coeffs.get(j).cloned().unwrap_or_else(|| rint(0))
        };
        for j in 0..=(m + 2) {
            let lhs = if j > 0 { at(j - 1, &psi_m) } else { rint(0) };
            let rhs = tt.a.clone() * at(j, &psi_up)
                + tt.b.clone() * at(j, &psi_m)
                + tt.c.clone() * at(j, &psi_dn);
            if lhs != rhs {
                exact_ok = false;
            }
            let d_lhs = if j > 0 {
                rint(j as i64 - 1) * at(j - 1, &psi_m) - rint(j as i64) * at(j, &psi_m)
            } else {
                rint(0)
            };
            let d_rhs = tt.ap.clone() * at(j, &psi_up)
                + tt.bp.clone() * at(j, &psi_m)
                + tt.cp.clone() * at(j, &psi_dn);
            if d_lhs != d_rhs {
                exact_ok = false;
            }
        }
    }
    c.assert(
        exact_ok,
        "three-term recurrences hold as exact polynomial identities for m <= 8".into(),
    );
    let residual = generating_function_check(0.4, 0.2, 12, 1.0, 2.0).unwrap();
    c.assert(
        residual < 1e-8,
        format!("generating-function partial-sum residual {:.2e} < 1e-8", residual),
    );
    c.finish("basis", "orthonormality, recurrences, generating function", started)
}

/// Criterion 9: property checks standing in for the non-desk-reproducible
/// theorems (ordering, parity/monotonicity, coefficient decay).
pub fn check_properties(_cfg: &SuiteConfig) -> CheckResult {
    let started = Instant::now();
    let mut c = Check::new();
    // ordering with truncation margins
    let l = l1208();
    let order = 10;
    for &p in &[0.01, 0.05, 0.1] {
        let mut values = Vec::new();
        for m in 0..=6usize {
            let ls = level_series(&l, m, order).unwrap();
            values.push((
                ls.p_series.eval_energy(p),
                ls.p_series.truncation_margin(p),
            ));
        }
        let mut ordered = true;
        let mut margin_ok = true;
        for m in 0..=5usize {
            if values[m].0 >= values[m + 1].0 {
                ordered = false;
            }
            if values[m + 1].0 - values[m].0 <= values[m].1 + values[m + 1].1 {
                margin_ok = false;
            }
        }
        c.assert(ordered, format!("levels strictly ordered at p = {}", p));
        c.note(format!(
            "p = {}: smallest gap {:.3e}, largest truncation margin {:.3e}{}",
            p,
            values
                .windows(2)
                .map(|w| w[1].0 - w[0].0)
                .fold(f64::INFINITY, f64::min),
            values.iter().map(|v| v.1).fold(0.0, f64::max),
            if margin_ok { "" } else { " (margins overlap)" }
        ));
    }
    // parity and monotonicity for l2 = l3 = 0
    let lm = Couplings::from_i64(1, 2, 0, 0);
    let es = expand_p_direct(0, &lm, 8).unwrap();
    let odd_zero = (1..=8).step_by(2).all(|k| Coeff::is_zero(&es.evals[k]));
    c.assert(odd_zero, "odd energy coefficients vanish exactly for l2 = l3 = 0".into());
    let mut prev = f64::NEG_INFINITY;
    let mut monotone = true;
    for i in 1..=10 {
        let p = 0.03 * i as f64;
        let v = es.eval_energy(p);
        if v < prev {
            monotone = false;
        }
        prev = v;
    }
    c.assert(
        monotone,
        "truncated ground energy non-decreasing on p in (0, 0.3]".into(),
    );
    // coefficient decay (level 2 sits outside the invariant space)
    let es_a = expand_a(2, &l, 10).unwrap();
    match decay_diagnostics(&es_a.evecs, 2, 0.1, 2.0) {
        Ok(report) => {
            c.assert(
                report.ratio < 1.0,
                format!("decay fit ratio {:.4} < 1 at a = 0.1", report.ratio),
            );
            if let Some(width) = report.zone_half_width {
                c.note(format!("implied analyticity-zone half-width {:.4}", width));
            }
        }
        Err(e) => c.assert(false, format!("decay fit failed: {}", e)),
    }
    c.finish("properties", "ordering, parity, monotonicity, decay", started)
}

/// Criterion 10: operator residuals of truncated eigenfunctions.
pub fn check_residuals(_cfg: &SuiteConfig) -> CheckResult {
    let started = Instant::now();
    let mut c = Check::new();
    // exact scaling of the w-space operator residual under halving a
    let k_ord = 8usize;
    let es = expand_a(0, &l1208(), k_ord).unwrap();
    let w = rat(3, 10);
    let r_big = heun_operator_residual(&es, &rat(1, 50), &w);
    let r_small = heun_operator_residual(&es, &rat(1, 100), &w);
    let ratio = r_big.to_f64().abs() / r_small.to_f64().abs();
    let want = 2.0_f64.powf(k_ord as f64 + 0.5);
    c.assert(
        ratio >= want,
        format!(
            "operator residual halving ratio {:.1} >= 2^(K+1/2) = {:.1}",
            ratio, want
        ),
    );
    // finite-difference eigen-residual of the full eigenfunction, with the
    // energy from the same truncated a-series the eigenfunction uses
    let l = l1208();
    let p = 0.02;
    let ctx = EllipticContext::new(p, DEFAULT_N).unwrap();
    let es = expand_a(0, &l, 8).unwrap();
    let lf = l.to_f64();
    let gauge = (lf.l0() + lf.l2() + 2.0).powi(2);
    let energy = 4.0 * (ctx.e1() - ctx.e3()) * es.eval(ctx.a)
        + gauge * ctx.a * (ctx.e1() - ctx.e3())
        + lf.coupling_sum() * ctx.e3();
    let x = 0.27;
    let h = 1e-3;
    let f = |y: f64| {
        eigenfunction_eval(&es, ctx.a, EvalPoint::X(y), &ctx)
            .unwrap()
            .f
    };
    let d2 = (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h)
        - f(x - 2.0 * h))
        / (12.0 * h * h);
    let mut pot = 0.0;
    for (i, li) in lf.l.iter().enumerate() {
        pot += li * (li + 1.0) * wp_eval(x, i, &ctx).unwrap().value;
    }
    let residual = (-d2 + pot * f(x) - energy * f(x)).abs() / f(x).abs();
    c.assert(
        residual < 1e-6,
        format!("finite-difference eigen-residual {:.3e} < 1e-6 at x = 0.27", residual),
    );
    c.finish("residuals", "eigenfunction residual scaling and size", started)
}

/// Criterion 11: Heun map roundtrip.
pub fn check_roundtrip(cfg: &SuiteConfig) -> CheckResult {
    let started = Instant::now();
    let mut c = Check::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(11));
    for trial in 0..10 {
        let l = Couplings::new(
            rng.gen_range(0.0..3.0),
            rng.gen_range(0.0..3.0),
            rng.gen_range(0.0..3.0),
            rng.gen_range(0.0..3.0),
        );
        let p = rng.gen_range(0.01..0.2);
        let energy = rng.gen_range(-50.0..50.0);
        match to_heun(&l, p, energy).and_then(|h| from_heun(&h)) {
            Ok((l_back, p_back, e_back)) => {
                let l_err = (0..4)
                    .map(|i| (l_back.l[i] - l.l[i]).abs())
                    .fold(0.0_f64, f64::max);
                let p_err = (p_back - p).abs();
                let e_err = (e_back - energy).abs() / energy.abs().max(1.0);
                c.assert(
                    l_err < 1e-10 && p_err < 1e-10 && e_err < 1e-10,
                    format!(
                        "trial {}: |dl| {:.2e}, |dp| {:.2e}, |dE|/|E| {:.2e}",
                        trial, l_err, p_err, e_err
                    ),
                );
            }
            Err(e) => c.assert(false, format!("trial {}: map failed: {}", trial, e)),
        }
    }
    c.finish("roundtrip", "Heun map roundtrip identity", started)
}

type CheckFn = fn(&SuiteConfig) -> CheckResult;

/// All checks in criterion order.
pub const CHECKS: [(&str, CheckFn); 11] = [
    ("s6.1", check_s61),
    ("s6.3", check_s63),
    ("s6.2", check_s62),
    ("trig-grid", check_trig_grid),
    ("engine-equiv", check_engine_equivalence),
    ("bottom-match", check_bottom_match),
    ("elliptic", check_elliptic),
    ("basis", check_basis),
    ("properties", check_properties),
    ("residuals", check_residuals),
    ("roundtrip", check_roundtrip),
];

/// Run every check (optionally only the one with the given id).
pub fn run(cfg: &SuiteConfig, only: Option<&str>) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .filter(|(id, _)| only.map_or(true, |want| *id == want))
        .map(|(_, f)| f(cfg))
        .collect()
}
