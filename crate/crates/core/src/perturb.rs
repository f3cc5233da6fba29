//! The two perturbation engines: the expansion in the modular parameter a
//! with closed-form tridiagonal data, and the direct expansion in the nome
//! p driven by the cosine Fourier data of the potential.
//!
//! Both engines run in the psi~ basis (hypergeometric polynomials with
//! value 1 at w = 0) and are generic over the coefficient field, so exact
//! rational runs are available whenever the couplings are rational. The two
//! engines are algebraically equivalent level by level; the library tests
//! enforce coefficientwise equality after mapping the a-series through the
//! energy relation.
//!
//! Energy-valued series coefficients are in pi^2 units.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::coeff::{Coeff, Couplings, Rat};
use crate::elliptic::{
    half_period_series, modular_lambda_series, potential_fourier, CosinePolynomial,
    EllipticContext,
};
use crate::error::{Error, Result};
use crate::series::{TruncatedSeries, Var};
use crate::trig::{
    norm_sq_ratio_step, psi_tilde, sector_schemes, three_term, PolyInW, Sector, SectorScheme,
    ThreeTerm,
};

/// Eigenvalue/eigenvector series in the modular parameter a for one level
/// of the (effective) Jacobi family.
///
/// `evals[k]` is the dimensionless eigenvalue coefficient at a^k, with
/// `evals[0] = (2m + l0 + l1 + 2)^2 / 4`. `evecs[k]` maps m' to the
/// coefficient of psi~_{m'} at a^k; diagonal entries vanish for k >= 1 and
/// the band |m - m'| <= k holds by construction.
#[derive(Clone, Debug)]
pub struct EigSeriesA<C: Coeff> {
    pub m: usize,
    pub l: Couplings<C>,
    pub evals: Vec<C>,
    pub evecs: Vec<BTreeMap<usize, C>>,
}

/// Eigenvalue/eigenvector series in the nome p.
///
/// `evals[k]` is the physical energy coefficient at p^k in pi^2 units;
/// `evals[0]` is the full trigonometric energy including the constant
/// shift. `evecs[k]` holds psi~-basis coefficients of the eigenvector.
#[derive(Clone, Debug)]
pub struct EigSeriesP<C: Coeff> {
    pub m: usize,
    pub l: Couplings<C>,
    pub evals: Vec<C>,
    pub evecs: Vec<BTreeMap<usize, C>>,
    /// Whether the eigenvector table is unit-norm (direct p-engine) or in
    /// the zero-diagonal gauge inherited from the a-engine.
    pub unit_norm: bool,
}

impl<C: Coeff> EigSeriesA<C> {
    pub fn order(&self) -> usize {
        self.evals.len() - 1
    }

    /// Dimensionless eigenvalue series evaluated at a numeric a.
    pub fn eval(&self, a: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.evals.iter().rev() {
            acc = acc * a + c.to_f64();
        }
        acc
    }
}

impl<C: Coeff> EigSeriesP<C> {
    pub fn order(&self) -> usize {
        self.evals.len() - 1
    }

    /// Physical energy (units included) of the truncated series at p.
    pub fn eval_energy(&self, p: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.evals.iter().rev() {
            acc = acc * p + c.to_f64();
        }
        PI * PI * acc
    }

    /// Magnitude of the last retained term at p, a crude truncation margin.
    pub fn truncation_margin(&self, p: f64) -> f64 {
        let k = self.order();
        PI * PI * self.evals[k].to_f64().abs() * p.abs().powi(k as i32)
    }
}

/// q_1 = ((l0+l1+l2-l3+3)(l0+l1+l2+l3+4) - (l0+l1+2)^2) / 4.
pub fn q1<C: Coeff>(l: &Couplings<C>) -> C {
    let u = (l.l0().clone() + l.l1().clone() + l.l2().clone() - l.l3().clone() + C::from_int(3))
        * (l.l0().clone() + l.l1().clone() + l.l2().clone() + l.l3().clone() + C::from_int(4));
    let v = l.l0().clone() + l.l1().clone() + C::from_int(2);
    (u - v.clone() * v) / C::from_int(4)
}

/// Unperturbed a-engine eigenvalue (2m + l0 + l1 + 2)^2 / 4.
pub fn script_e0<C: Coeff>(m: usize, l: &Couplings<C>) -> C {
    let t = C::from_int(2 * m as i64) + l.l0().clone() + l.l1().clone() + C::from_int(2);
    t.clone() * t / C::from_int(4)
}

/// The tridiagonal perturbation data (A~_m, B~_m, C~_m) built from the
/// three-term coefficients: X~ = -(l2 + 3/2) X' - (E_m + q_1) X.
pub fn tilde_abc<C: Coeff>(m: usize, l: &Couplings<C>) -> Result<(C, C, C)> {
    let tt = three_term(m, l.l0(), l.l1())?;
    let factor = l.l2().clone() + C::from_ratio(3, 2);
    let shift = script_e0(m, l) + q1(l);
    let a = -(factor.clone() * tt.ap) - shift.clone() * tt.a;
    let b = -(factor.clone() * tt.bp) - shift.clone() * tt.b;
    let c = -(factor * tt.cp) - shift * tt.c;
    Ok((a, b, c))
}

fn collision_check<C: Coeff>(m: usize, mp: usize, l: &Couplings<C>) -> Result<C> {
    // script_E_m - script_E_{m'} = (m - m')(m + m' + l0 + l1 + 2)
    let diff = (C::from_int(m as i64) - C::from_int(mp as i64))
        * (C::from_int((m + mp) as i64) + l.l0().clone() + l.l1().clone() + C::from_int(2));
    if diff.is_zero() {
        return Err(Error::EigenvalueCollision { m, m_other: mp });
    }
    Ok(diff)
}

/// Expansion of level m in the modular parameter a to order `order`.
///
/// Negative basis indices are absent from the recursion (their coefficients
/// are zero; downward chains terminate because C~_0 = 0).
pub fn expand_a<C: Coeff>(m: usize, l: &Couplings<C>, order: usize) -> Result<EigSeriesA<C>> {
    // cache the tridiagonal data for every index the band can reach
    let top = m + order + 1;
    let mut abc = Vec::with_capacity(top + 1);
    for idx in 0..=top {
        abc.push(tilde_abc(idx, l)?);
    }
    let at = |table: &BTreeMap<usize, C>, idx: i64| -> C {
        if idx < 0 {
            C::zero()
        } else {
            table.get(&(idx as usize)).cloned().unwrap_or_else(C::zero)
        }
    };

    let mut evals: Vec<C> = vec![script_e0(m, l)];
    let mut evecs: Vec<BTreeMap<usize, C>> = vec![BTreeMap::from([(m, C::one())])];

    for k in 1..=order {
        let prev = &evecs[k - 1];
        // eigenvalue coefficient from the k-1 table
        let mut ek = at(prev, m as i64 + 1) * abc[m + 1].2.clone()
            + at(prev, m as i64 - 1) * if m > 0 { abc[m - 1].0.clone() } else { C::zero() };
        if k == 1 {
            ek = ek + abc[m].1.clone();
        }
        evals.push(ek);

        let mut table = BTreeMap::new();
        let lo = m.saturating_sub(k);
        let hi = m + k;
        for mp in lo..=hi {
            if mp == m {
                continue;
            }
            let mut num = at(prev, mp as i64 + 1) * abc[mp + 1].2.clone()
                + at(prev, mp as i64) * abc[mp].1.clone()
                + at(prev, mp as i64 - 1)
                    * if mp > 0 { abc[mp - 1].0.clone() } else { C::zero() };
            // eigenvalue feedback from lower orders
            for j in 1..k {
                num = num - evals[j].clone() * at(&evecs[k - j], mp as i64);
            }
            if num.is_zero() {
                continue;
            }
            let den = collision_check(m, mp, l)?;
            table.insert(mp, num / den);
        }
        evecs.push(table);
    }

    Ok(EigSeriesA {
        m,
        l: l.clone(),
        evals,
        evecs,
    })
}

/// Physical-energy relation: map an a-series level to a p-series via
/// E = 4 (e1 - e3) script_E(a(p)) + (l0 + l2 + 2)^2 a(p) (e1 - e3)
///     + sum_i l_i(l_i+1) e3,
/// with e_i and a(p) as exact p-series. The eigenvector table is composed
/// through a(p) in the same gauge (zero diagonal).
pub fn energy_map<C: Coeff>(es: &EigSeriesA<C>, order: usize) -> Result<EigSeriesP<C>> {
    let k_eff = order.min(es.order());
    let a_series = modular_lambda_series(order).map(C::from_rat);
    let [e1, _e2, e3] = half_period_series(order);
    let e1 = e1.map(C::from_rat);
    let e3 = e3.map(C::from_rat);
    let e13 = e1.sub(&e3)?;

    let script_e = TruncatedSeries::from_coeffs(Var::A, es.evals[..=k_eff].to_vec());
    let composed = script_e.compose(&a_series)?;

    let four = C::from_int(4);
    let gauge = {
        let t = es.l.l0().clone() + es.l.l2().clone() + C::from_int(2);
        t.clone() * t
    };
    let strengths = es.l.coupling_sum();

    let mut evals = e13.scale(&four).mul(&composed)?;
    evals = evals.add(&a_series.mul(&e13)?.scale(&gauge))?;
    evals = evals.add(&e3.scale(&strengths))?;
    let evals = evals.truncated(k_eff);

    // compose each band entry's a-series with a(p)
    let mut evecs: Vec<BTreeMap<usize, C>> = vec![BTreeMap::new(); k_eff + 1];
    let mut entries: BTreeMap<usize, Vec<C>> = BTreeMap::new();
    for (k, table) in es.evecs.iter().enumerate().take(k_eff + 1) {
        for (mp, c) in table {
            entries
                .entry(*mp)
                .or_insert_with(|| vec![C::zero(); k_eff + 1])[k] = c.clone();
        }
    }
    for (mp, coeffs) in entries {
        let s = TruncatedSeries::from_coeffs(Var::A, coeffs);
        let composed = s.compose(&a_series)?.truncated(k_eff);
        for (k, c) in composed.coeffs().iter().enumerate() {
            if !c.is_zero() {
                evecs[k].insert(mp, c.clone());
            }
        }
    }

    Ok(EigSeriesP {
        m: es.m,
        l: es.l.clone(),
        evals: evals.coeffs().to_vec(),
        evecs,
        unit_norm: false,
    })
}

/// Chebyshev polynomial T_n(1 - 2w) as a polynomial in w.
fn chebyshev_in_w<C: Coeff>(n: usize) -> PolyInW<C> {
    let mut prev = PolyInW { coeffs: vec![C::one()] };
    if n == 0 {
        return prev;
    }
    let mut cur = PolyInW {
        coeffs: vec![C::one(), C::from_int(-2)],
    };
    for _ in 1..n {
        // T_{k+1} = 2 (1 - 2w) T_k - T_{k-1}
        let mut next = vec![C::zero(); cur.coeffs.len() + 1];
        for (j, c) in cur.coeffs.iter().enumerate() {
            next[j] = next[j].clone() + C::from_int(2) * c.clone();
            next[j + 1] = next[j + 1].clone() - C::from_int(4) * c.clone();
        }
        for (j, c) in prev.coeffs.iter().enumerate() {
            next[j] = next[j].clone() - c.clone();
        }
        prev = cur;
        cur = PolyInW { coeffs: next };
    }
    cur
}

/// Cosine polynomial as a polynomial in w via cos 2 pi n x = T_n(1 - 2w).
fn cosine_poly_in_w<C: Coeff>(v: &CosinePolynomial<C>) -> PolyInW<C> {
    let mut out = vec![C::zero()];
    for (n, c) in &v.harmonics {
        if c.is_zero() {
            continue;
        }
        let t = chebyshev_in_w::<C>(*n);
        if t.coeffs.len() > out.len() {
            out.resize(t.coeffs.len(), C::zero());
        }
        for (j, tc) in t.coeffs.iter().enumerate() {
            out[j] = out[j].clone() + c.clone() * tc.clone();
        }
    }
    PolyInW { coeffs: out }
}

/// Cached three-term data for applying multiplication operators in the
/// psi~ basis.
struct WOperator<C: Coeff> {
    l0: C,
    l1: C,
    table: Vec<ThreeTerm<C>>,
}

impl<C: Coeff> WOperator<C> {
    fn new(l0: C, l1: C) -> Self {
        Self {
            l0,
            l1,
            table: Vec::new(),
        }
    }

    fn ensure(&mut self, upto: usize) -> Result<()> {
        while self.table.len() <= upto {
            let m = self.table.len();
            self.table.push(three_term(m, &self.l0, &self.l1)?);
        }
        Ok(())
    }

    /// v -> (w .) v in psi~ coefficients.
    fn apply_w(&mut self, v: &BTreeMap<usize, C>) -> Result<BTreeMap<usize, C>> {
        let top = v.keys().next_back().copied().unwrap_or(0);
        self.ensure(top + 1)?;
        let mut out: BTreeMap<usize, C> = BTreeMap::new();
        let mut add = |idx: usize, val: C| {
            if val.is_zero() {
                return;
            }
            let slot = out.entry(idx).or_insert_with(C::zero);
            *slot = slot.clone() + val;
        };
        for (mp, c) in v {
            let tt = &self.table[*mp];
            add(mp + 1, tt.a.clone() * c.clone());
            add(*mp, tt.b.clone() * c.clone());
            if *mp > 0 {
                add(mp - 1, tt.c.clone() * c.clone());
            }
        }
        Ok(out)
    }

    /// v -> g(w) v for a polynomial g in w (Horner in the operator).
    fn apply_poly(&mut self, g: &PolyInW<C>, v: &BTreeMap<usize, C>) -> Result<BTreeMap<usize, C>> {
        let d = g.coeffs.len() - 1;
        let mut acc: BTreeMap<usize, C> = v
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(mp, c)| (*mp, g.coeffs[d].clone() * c.clone()))
            .collect();
        for j in (0..d).rev() {
            acc = self.apply_w(&acc)?;
            if !g.coeffs[j].is_zero() {
                for (mp, c) in v {
                    let slot = acc.entry(*mp).or_insert_with(C::zero);
                    *slot = slot.clone() + g.coeffs[j].clone() * c.clone();
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(acc)
    }
}

/// Direct expansion in the nome p for the Jacobi-basis family
/// (l0 > 0, l1 > 0, or effective parameters of one sector).
///
/// The recursion runs in the psi~ basis; the unit-norm condition is imposed
/// through the exact rational ratios of squared norms, so the whole run is
/// rational for rational couplings.
pub fn expand_p_direct<C: Coeff>(
    m: usize,
    l: &Couplings<C>,
    order: usize,
) -> Result<EigSeriesP<C>> {
    let pot = potential_fourier(l, order);
    let v_in_w: Vec<PolyInW<C>> = (1..=order).map(|k| cosine_poly_in_w(pot.v_k(k))).collect();
    let mut wop = WOperator::new(l.l0().clone(), l.l1().clone());

    // trig eigenvalues of the gauge operator in pi^2 units
    let trig = |mp: usize| -> C {
        let t = C::from_int(2 * mp as i64) + l.l0().clone() + l.l1().clone() + C::from_int(2);
        t.clone() * t
    };
    // cumulative squared-norm ratios N_r^2 / N_0^2
    let top = m + order + 1;
    let mut cum = vec![C::one()];
    for r in 0..top {
        let step = norm_sq_ratio_step(l.l0(), l.l1(), r);
        cum.push(cum[r].clone() * step);
    }

    let mut evals: Vec<C> = vec![trig(m) + pot.c_t.clone()];
    let mut evecs: Vec<BTreeMap<usize, C>> = vec![BTreeMap::from([(m, C::one())])];

    for k in 1..=order {
        // applied vectors V_{k'} v^{k - k'}
        let mut applied: Vec<BTreeMap<usize, C>> = Vec::with_capacity(k);
        for kp in 1..=k {
            applied.push(wop.apply_poly(&v_in_w[kp - 1], &evecs[k - kp])?);
        }
        let at = |t: &BTreeMap<usize, C>, idx: usize| -> C {
            t.get(&idx).cloned().unwrap_or_else(C::zero)
        };

        // E^{k} = sum_k' (V_k' v^{k-k'})_m - sum_{k'<k} E^{k'} beta^{k-k'}_m
        let mut ek = C::zero();
        for a in &applied {
            ek = ek + at(a, m);
        }
        for kp in 1..k {
            ek = ek - evals[kp].clone() * at(&evecs[k - kp], m);
        }
        evals.push(ek);

        // off-diagonal coefficients
        let mut table: BTreeMap<usize, C> = BTreeMap::new();
        let hi = m + k;
        for mp in (0..=hi).filter(|mp| *mp != m) {
            let mut num = C::zero();
            for a in &applied {
                num = num + at(a, mp);
            }
            for kp in 1..k {
                num = num - evals[kp].clone() * at(&evecs[k - kp], mp);
            }
            if num.is_zero() {
                continue;
            }
            let den = trig(m) - trig(mp);
            if den.is_zero() {
                return Err(Error::EigenvalueCollision { m, m_other: mp });
            }
            table.insert(mp, num / den);
        }

        // diagonal from unit norm, with rational squared-norm ratios
        let mut diag = C::zero();
        for kp in 1..k {
            for (mp, c) in &evecs[kp] {
                let other = at(&evecs[k - kp], *mp);
                if other.is_zero() {
                    continue;
                }
                // weight by N_{m'}^2 / N_m^2
                let ratio = cum[*mp].clone() / cum[m].clone();
                diag = diag + c.clone() * other * ratio;
            }
        }
        diag = -(diag / C::from_int(2));
        if !diag.is_zero() {
            table.insert(m, diag);
        }
        evecs.push(table);
    }

    Ok(EigSeriesP {
        m,
        l: l.clone(),
        evals,
        evecs,
        unit_norm: true,
    })
}

/// A level of the physical spectrum resolved to its sector, with both the
/// a-series and the mapped p-series.
#[derive(Clone, Debug)]
pub struct LevelSeries<C: Coeff> {
    pub global_m: usize,
    pub sector: Sector,
    pub r: usize,
    pub a_series: EigSeriesA<C>,
    pub p_series: EigSeriesP<C>,
}

/// Resolve a global level of the coupling case to its sector scheme. For
/// the Fourier case the even levels are degenerate between the cosine and
/// sine sectors; the cosine sector is chosen, matching the one-sector-at-a-
/// time contract of the engines.
pub fn resolve_sector<C: Coeff>(
    l: &Couplings<C>,
    global_m: usize,
) -> Result<(SectorScheme<C>, usize)> {
    let schemes = sector_schemes(l);
    for s in schemes {
        if global_m >= s.offset && (global_m - s.offset) % s.stride == 0 {
            let r = (global_m - s.offset) / s.stride;
            return Ok((s, r));
        }
    }
    Err(Error::InvalidInput(format!(
        "no sector contains global level {}",
        global_m
    )))
}

/// Perturbation series of a global level by the a-engine composed through
/// the energy relation; sectors of the Gegenbauer/Fourier cases route
/// through their effective Jacobi parameters.
pub fn level_series<C: Coeff>(
    l: &Couplings<C>,
    global_m: usize,
    order: usize,
) -> Result<LevelSeries<C>> {
    let (scheme, r) = resolve_sector(l, global_m)?;
    let eff = Couplings::new(
        scheme.eff_l0.clone(),
        scheme.eff_l1.clone(),
        l.l2().clone(),
        l.l3().clone(),
    );
    let a_series = expand_a(r, &eff, order)?;
    let p_series = energy_map(&a_series, order)?;
    Ok(LevelSeries {
        global_m,
        sector: scheme.sector,
        r,
        a_series,
        p_series,
    })
}

/// Where to evaluate an eigenfunction.
#[derive(Clone, Copy, Debug)]
pub enum EvalPoint {
    W(f64),
    X(f64),
}

/// Truncated eigenfunction values: the polynomial part f~ at w and the full
/// gauged eigenfunction f = Phi~ f~ (principal real branch on 0 < x < 1/2).
#[derive(Clone, Copy, Debug)]
pub struct EigenfunctionValue {
    pub w: f64,
    pub f_tilde: f64,
    pub f: f64,
}

/// Evaluate the truncated a-series eigenfunction at a point.
pub fn eigenfunction_eval<C: Coeff>(
    es: &EigSeriesA<C>,
    a: f64,
    point: EvalPoint,
    ctx: &EllipticContext,
) -> Result<EigenfunctionValue> {
    let w = match point {
        EvalPoint::W(w) => w,
        EvalPoint::X(x) => {
            let wp = crate::elliptic::wp_eval(x, 0, ctx)?.value;
            (ctx.e1() - ctx.e3()) / (wp - ctx.e3())
        }
    };
    let l0 = es.l.l0().to_f64();
    let l1 = es.l.l1().to_f64();
    let l2 = es.l.l2().to_f64();
    for (base, name, exponent) in [
        (w, "w", l0 + 1.0),
        (1.0 - w, "1-w", l1 + 1.0),
        (1.0 - a * w, "1-aw", l2 + 1.0),
    ] {
        if exponent < 0.0 && base.abs() < 1e-12 {
            return Err(Error::PoleProximity {
                what: match name {
                    "w" => "w",
                    "1-w" => "1-w",
                    _ => "1-aw",
                },
                magnitude: base.abs(),
            });
        }
    }

    let mut f_tilde = 0.0;
    let mut a_pow = 1.0;
    for table in &es.evecs {
        let mut level = 0.0;
        for (mp, c) in table {
            level += c.to_f64() * psi_tilde::<f64>(*mp, &l0, &l1).eval_f64(w);
        }
        f_tilde += a_pow * level;
        a_pow *= a;
    }
    let prefactor = w.powf(0.5 * (l0 + 1.0))
        * (1.0 - w).powf(0.5 * (l1 + 1.0))
        * (1.0 - a * w).powf(0.5 * (l2 + 1.0));
    Ok(EigenfunctionValue {
        w,
        f_tilde,
        f: prefactor * f_tilde,
    })
}

/// Exact residual of the w-space operator applied to the truncated
/// eigenfunction polynomial at rational a and w:
///
///   L = (a w - 1) L_T + a w (w - 1)(l2 + 3/2) d/dw + a q_1 w + script_E(a)
///
/// evaluated analytically on the polynomial. Scales as O(a^{K+1}) for a
/// K-th order series.
pub fn heun_operator_residual(es: &EigSeriesA<Rat>, a: &Rat, w: &Rat) -> Rat {
    let l = &es.l;
    // assemble the truncated polynomial f~ = sum_k a^k sum_m' c psi~_{m'}
    let mut f = vec![<Rat as Coeff>::zero()];
    let mut a_pow = <Rat as Coeff>::one();
    for table in &es.evecs {
        for (mp, c) in table {
            let psi = psi_tilde::<Rat>(*mp, l.l0(), l.l1());
            if psi.coeffs.len() > f.len() {
                f.resize(psi.coeffs.len(), <Rat as Coeff>::zero());
            }
            for (j, pc) in psi.coeffs.iter().enumerate() {
                f[j] = f[j].clone() + a_pow.clone() * c.clone() * pc.clone();
            }
        }
        a_pow = a_pow * a.clone();
    }
    let f = PolyInW { coeffs: f };
    let f1 = f.derivative();
    let f2 = f1.derivative();

    let eval = |p: &PolyInW<Rat>| p.eval(w);
    let one = <Rat as Coeff>::one();
    let half3 = <Rat as Coeff>::from_ratio(3, 2);
    let s2 = l.l0().clone() + l.l1().clone() + <Rat as Coeff>::from_int(2);

    // L_T f = w(w-1) f'' + ((l0+3/2)(w-1) + (l1+3/2) w) f' + ((l0+l1+2)^2/4) f
    let lt = w.clone() * (w.clone() - one.clone()) * eval(&f2)
        + ((l.l0().clone() + half3.clone()) * (w.clone() - one.clone())
            + (l.l1().clone() + half3.clone()) * w.clone())
            * eval(&f1)
        + s2.clone() * s2 / <Rat as Coeff>::from_int(4) * eval(&f);

    let mut script_e = <Rat as Coeff>::zero();
    let mut a_pow = <Rat as Coeff>::one();
    for c in &es.evals {
        script_e = script_e + a_pow.clone() * c.clone();
        a_pow = a_pow * a.clone();
    }

    (a.clone() * w.clone() - one) * lt
        + a.clone() * w.clone() * (w.clone() - <Rat as Coeff>::one()) * (l.l2().clone() + half3)
            * eval(&f1)
        + (a.clone() * q1(l) * w.clone() + script_e) * eval(&f)
}

/// Least-squares geometric-decay fit of eigenvector coefficient mass
/// against the band distance.
#[derive(Clone, Debug)]
pub struct DecayReport {
    /// Fitted geometric ratio of |sum_k c^{k} q^k| against |m - m'|.
    pub ratio: f64,
    /// Whether ratio <= sqrt(C q) for the supplied constant C.
    pub within_bound: bool,
    /// Analyticity-zone half-width log(1/ratio) / (2 pi) implied by the
    /// fit (None when the fit is not in the convergent regime).
    pub zone_half_width: Option<f64>,
    /// Number of band distances entering the fit.
    pub points: usize,
}

/// Fit the decay of off-diagonal eigenvector mass at parameter value q.
pub fn decay_diagnostics<C: Coeff>(
    evecs: &[BTreeMap<usize, C>],
    m: usize,
    q: f64,
    c_const: f64,
) -> Result<DecayReport> {
    // total series value per band index
    let mut mass: BTreeMap<usize, f64> = BTreeMap::new();
    let mut q_pow = 1.0;
    for table in evecs {
        for (mp, c) in table {
            if *mp != m {
                *mass.entry(*mp).or_insert(0.0) += c.to_f64() * q_pow;
            }
        }
        q_pow *= q;
    }
    let pts: Vec<(f64, f64)> = mass
        .iter()
        .filter(|(_, v)| v.abs() > 0.0)
        .map(|(mp, v)| ((*mp as i64 - m as i64).unsigned_abs() as f64, v.abs().ln()))
        .collect();
    if q == 0.0 {
        return Ok(DecayReport {
            ratio: 0.0,
            within_bound: true,
            zone_half_width: None,
            points: 0,
        });
    }
    if pts.len() < 2 {
        return Err(Error::InvalidInput(
            "decay fit degenerate: fewer than two nonzero band distances".into(),
        ));
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|(x, _)| x).sum();
    let sy: f64 = pts.iter().map(|(_, y)| y).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let ratio = slope.exp();
    let within_bound = ratio <= (c_const * q.abs()).sqrt();
    let zone_half_width = if ratio > 0.0 && ratio < 1.0 {
        Some((1.0 / ratio).ln() / (2.0 * PI))
    } else {
        None
    };
    Ok(DecayReport {
        ratio,
        within_bound,
        zone_half_width,
        points: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{rat, rint};
    use crate::elliptic::DEFAULT_N;

    fn l1208() -> Couplings<Rat> {
        Couplings::from_i64(1, 2, 0, 8)
    }

    #[test]
    fn q1_hand_value() {
        assert_eq!(q1(&l1208()), rat(-55, 4));
    }

    #[test]
    fn tilde_b0_is_25_over_8() {
        let (_, b0, c0) = tilde_abc(0, &l1208()).unwrap();
        assert_eq!(b0, rat(25, 8));
        assert_eq!(c0, rint(0));
    }

    #[test]
    fn tilde_a_resonance_zero() {
        // A~_m = 0 at m = -(l0+l1+l2-l3+3)/2 = 1 for l = (1,2,0,8)
        let (a1, _, _) = tilde_abc(1, &l1208()).unwrap();
        assert_eq!(a1, rint(0));
    }

    #[test]
    fn tilde_closed_forms_match_defining_combination() {
        // factorized closed forms against the -(l2+3/2)X' - (E+q1)X route
        let cases = [
            Couplings::from_i64(1, 2, 0, 8),
            Couplings::new(rat(1, 2), rat(3, 2), rat(2, 3), rat(5, 7)),
        ];
        for l in &cases {
            let s = l.l0().clone() + l.l1().clone();
            let u = (s.clone() + l.l2().clone() - l.l3().clone() + rint(3)) / rint(2);
            let v = (s.clone() + l.l2().clone() + l.l3().clone() + rint(4)) / rint(2);
            let up = (s.clone() + l.l3().clone() - l.l2().clone() + rint(1)) / rint(2);
            let vp = (s.clone() - l.l2().clone() - l.l3().clone()) / rint(2);
            for m in 0..=6usize {
                let (am, _, cm) = tilde_abc(m, l).unwrap();
                let mc = rint(m as i64);
                let closed_a = (mc.clone() + s.clone() + rint(2))
                    * (mc.clone() + l.l0().clone() + rat(3, 2))
                    * (mc.clone() + u.clone())
                    * (mc.clone() + v.clone())
                    / ((rint(2 * m as i64) + s.clone() + rint(2))
                        * (rint(2 * m as i64) + s.clone() + rint(3)));
                assert_eq!(am, closed_a, "A~ mismatch at m = {}", m);
                let closed_c = mc.clone()
                    * (mc.clone() + l.l1().clone() + rat(1, 2))
                    * (mc.clone() + up.clone())
                    * (mc + vp.clone())
                    / ((rint(2 * m as i64) + s.clone() + rint(2))
                        * (rint(2 * m as i64) + s.clone() + rint(1)));
                assert_eq!(cm, closed_c, "C~ mismatch at m = {}", m);
            }
        }
    }

    #[test]
    fn expand_a_base_coefficients() {
        let es = expand_a(2, &l1208(), 4).unwrap();
        // script_E at a^0 and B~_m at a^1
        assert_eq!(es.evals[0], rat(81, 4));
        let (_, b2, _) = tilde_abc(2, &l1208()).unwrap();
        assert_eq!(es.evals[1], b2);
        // band property and zero diagonal
        for (k, table) in es.evecs.iter().enumerate() {
            for (mp, _) in table {
                assert!((*mp as i64 - 2).unsigned_abs() as usize <= k);
                if k >= 1 {
                    assert_ne!(*mp, 2);
                }
            }
        }
    }

    /// Oracle: the closed-form algebraic eigenvalues of the invariant space
    /// for l = (1,2,0,8), expanded as exact p-series and mapped through the
    /// energy relation, must match the a-engine composed with a(p).
    #[test]
    fn a_engine_matches_algebraic_closed_form_series() {
        let order = 6;
        let l = l1208();
        let [e1, e2, e3] = half_period_series(order);
        let e13 = e1.sub(&e3).unwrap();
        // E_pm = 11 e1 - 9 e2 -+ 2 sqrt(106 e1^2 + 73 e1 e2 + 46 e2^2)
        let disc = e1
            .mul(&e1)
            .unwrap()
            .scale(&rint(106))
            .add(&e1.mul(&e2).unwrap().scale(&rint(73)))
            .unwrap()
            .add(&e2.mul(&e2).unwrap().scale(&rint(46)))
            .unwrap();
        let root = disc.sqrt().unwrap();
        let base = e1.scale(&rint(11)).sub(&e2.scale(&rint(9))).unwrap();
        let a_series = modular_lambda_series(order);
        for (m, sign) in [(0usize, -1i64), (1, 1)] {
            let energy = base.add(&root.scale(&rint(2 * sign))).unwrap();
            // script_E = E/(4(e1-e3)) - (l0+l2+2)^2 a/4 - sum l_i(l_i+1) e3/(4(e1-e3))
            let expect = energy
                .div(&e13.scale(&rint(4)))
                .unwrap()
                .sub(&a_series.scale(&rat(9, 4)))
                .unwrap()
                .sub(&e3.scale(&rint(20)).div(&e13).unwrap())
                .unwrap();
            let es = expand_a(m, &l, order).unwrap();
            let script = TruncatedSeries::from_coeffs(Var::A, es.evals.clone())
                .compose(&a_series)
                .unwrap();
            assert_eq!(script, expect, "level {} closed-form series mismatch", m);
        }
    }

    #[test]
    fn energy_map_trig_values() {
        // E_0(0) = -5 pi^2/3 for l = (1,2,0,8)
        let es = expand_a(0, &l1208(), 3).unwrap();
        let ep = energy_map(&es, 3).unwrap();
        assert_eq!(ep.evals[0], rat(-5, 3));
        // G case l = (1,0,4,1): level 0 lives in the plus sector, E_0(0) = -4 pi^2
        let l = Couplings::from_i64(1, 0, 4, 1);
        let ls = level_series(&l, 0, 3).unwrap();
        assert_eq!(ls.sector, Sector::Plus);
        assert_eq!(ls.p_series.evals[0], rint(-4));
    }

    #[test]
    fn p_engine_first_order_is_diagonal_matrix_element() {
        let l = l1208();
        let es = expand_p_direct(0, &l, 2).unwrap();
        // E^{1} = d^{1}_{m,m}: V_1 = 8 (l2(l2+1) - l3(l3+1)) cos 2 pi x, and
        // the psi~-diagonal element of cos 2 pi x = 1 - 2w is 1 - 2 B_0
        let tt = three_term(0, l.l0(), l.l1()).unwrap();
        let d11 = rint(8 * (0 - 72)) * (rint(1) - rint(2) * tt.b);
        assert_eq!(es.evals[1], d11);
    }

    #[test]
    fn p_engine_odd_orders_vanish_for_equal_l2_l3() {
        let l = Couplings::from_i64(1, 2, 3, 3);
        let es = expand_p_direct(0, &l, 6).unwrap();
        for k in (1..=6).step_by(2) {
            assert_eq!(es.evals[k], rint(0), "odd coefficient {} nonzero", k);
        }
    }

    #[test]
    fn engines_agree_exactly_for_rational_couplings() {
        for l in [
            Couplings::from_i64(1, 2, 0, 8),
            Couplings::new(rint(1), rint(2), rat(1, 2), rat(3, 10)),
            Couplings::new(rat(3, 2), rat(5, 2), rat(1, 3), rint(2)),
        ] {
            for m in 0..=2usize {
                let order = 4;
                let via_a = energy_map(&expand_a(m, &l, order).unwrap(), order).unwrap();
                let direct = expand_p_direct(m, &l, order).unwrap();
                assert_eq!(
                    via_a.evals, direct.evals,
                    "energy series differ at m = {} for l = {:?}",
                    m, l
                );
            }
        }
    }

    #[test]
    fn first_order_coefficients_agree_between_engines() {
        let l = Couplings::new(rint(2), rint(1), rat(2, 3), rat(1, 5));
        for m in 0..=3usize {
            let via_a = energy_map(&expand_a(m, &l, 1).unwrap(), 1).unwrap();
            let direct = expand_p_direct(m, &l, 1).unwrap();
            assert_eq!(via_a.evals[1], direct.evals[1]);
        }
    }

    #[test]
    fn eigenfunction_reduces_to_psi_at_zero_a() {
        let es = expand_a(2, &l1208(), 4).unwrap();
        let ctx = EllipticContext::new(0.05, DEFAULT_N).unwrap();
        let v = eigenfunction_eval(&es, 0.0, EvalPoint::W(0.37), &ctx).unwrap();
        let psi = psi_tilde::<f64>(2, &1.0, &2.0).eval_f64(0.37);
        assert!((v.f_tilde - psi).abs() < 1e-14);
    }

    #[test]
    fn heun_residual_scales_as_order_plus_one() {
        // halving a must shrink the exact operator residual by >= 2^{K+1/2}
        let k_ord = 4usize;
        let es = expand_a(0, &l1208(), k_ord).unwrap();
        let w = rat(3, 10);
        let r_big = heun_operator_residual(&es, &rat(1, 50), &w);
        let r_small = heun_operator_residual(&es, &rat(1, 100), &w);
        let ratio = r_big.to_f64().abs() / r_small.to_f64().abs();
        let want = 2.0_f64.powf(k_ord as f64 + 0.5);
        assert!(ratio >= want, "ratio {} below 2^{{K+1/2}} = {}", ratio, want);
    }

    #[test]
    fn decay_report_properties() {
        // level 2 sits outside the invariant space of l = (1,2,0,8), so its
        // eigenvector band is full; level 0 would be exactly finite there.
        let l = l1208();
        let es = expand_a(2, &l, 10).unwrap();
        // q = 0: no off-diagonal mass
        let r0 = decay_diagnostics(&es.evecs, 2, 0.0, 2.0).unwrap();
        assert_eq!(r0.ratio, 0.0);
        // convergent regime at a = 0.1
        let r = decay_diagnostics(&es.evecs, 2, 0.1, 2.0).unwrap();
        assert!(r.ratio < 1.0, "ratio = {}", r.ratio);
        assert!(r.zone_half_width.is_some());
        // ratio non-decreasing in |q|
        let mut prev = 0.0;
        for q in [0.05, 0.1, 0.2] {
            let rep = decay_diagnostics(&es.evecs, 2, q, 2.0).unwrap();
            assert!(rep.ratio >= prev, "ratio decreased at q = {}", q);
            prev = rep.ratio;
        }
    }

    #[test]
    fn qes_level_has_finite_band() {
        // the ground level of l = (1,2,0,8) lives in a 2-dimensional
        // invariant space: every eigenvector table entry stays at m' = 1
        let es = expand_a(0, &l1208(), 8).unwrap();
        for (k, table) in es.evecs.iter().enumerate().skip(1) {
            for (mp, _) in table {
                assert_eq!(*mp, 1, "band escaped the invariant space at k = {}", k);
            }
        }
    }

    #[test]
    fn resolve_sector_maps_levels() {
        let g = Couplings::from_i64(1, 0, 4, 1);
        let (s0, r0) = resolve_sector(&g, 0).unwrap();
        assert_eq!((s0.sector, r0), (Sector::Plus, 0));
        let (s1, r1) = resolve_sector(&g, 3).unwrap();
        assert_eq!((s1.sector, r1), (Sector::Minus, 1));
        let f = Couplings::from_i64(0, 0, 2, 1);
        let (s2, r2) = resolve_sector(&f, 4).unwrap();
        assert_eq!((s2.sector, r2), (Sector::F1, 2));
    }
}
