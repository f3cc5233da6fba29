//! Quasi-exact solvability: finite dimensional invariant spaces of doubly
//! periodic functions, their tridiagonal matrices, algebraic eigenvalues,
//! Hilbert-space membership, trig-limit spectra, and matching of the
//! algebraic set against the lowest perturbative levels.
//!
//! A sign vector picks alpha~_i in {-l_i, l_i + 1} for each coupling; it is
//! admissible when d = -sum alpha~_i / 2 is a non-negative integer, and the
//! Hamiltonian then preserves a (d+1)-dimensional space. In the basis
//! (z - e_2)^r, r = 0..d (z = wp(x)), the action is tridiagonal; column r
//! holds the image of (z - e_2)^r. The matrix is not symmetric, and its
//! symbolic entries are polynomials in (e_1, e_2) with e_3 eliminated.


use num_complex::Complex64;
use num_traits::Zero;

use crate::coeff::{Coeff, Couplings, Rat};
use crate::elliptic::{wp_eval, EllipticContext};
use crate::epoly::EPoly;
use crate::error::{Error, Result};
use crate::perturb::level_series;
use crate::trig::Sector;

/// One choice of alpha~_i in {-l_i, l_i + 1}, admissible by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaVector {
    pub alpha: [Rat; 4],
    /// d = -sum alpha~_i / 2, a non-negative integer.
    pub d: usize,
}

impl AlphaVector {
    /// Build from a sign choice (true picks l_i + 1, false picks -l_i);
    /// `None` when d is not a non-negative integer.
    pub fn from_signs(l: &Couplings<Rat>, plus: [bool; 4]) -> Option<Self> {
        let alpha: [Rat; 4] = std::array::from_fn(|i| {
            if plus[i] {
                l.l[i].clone() + <Rat as Coeff>::one()
            } else {
                -l.l[i].clone()
            }
        });
        Self::from_alpha(alpha)
    }

    /// Validate an explicit alpha vector: d must be a non-negative integer.
    pub fn from_alpha(alpha: [Rat; 4]) -> Option<Self> {
        let sum = alpha.iter().cloned().fold(<Rat as Coeff>::zero(), |a, b| a + b);
        let d2 = -sum;
        if !d2.is_integer() {
            return None;
        }
        let num = d2.to_integer();
        if num < 0.into() || &num % 2 != 0.into() {
            return None;
        }
        let d: usize = usize::try_from(num / 2i32).ok()?;
        Some(Self { alpha, d })
    }

    pub fn dim(&self) -> usize {
        self.d + 1
    }

    /// gamma_1 = (a1 + a2 + a3 - l0)/2 and gamma_2 = (a1 + a2 + a3 + l0 + 1)/2.
    pub fn gammas(&self, l: &Couplings<Rat>) -> (Rat, Rat) {
        let s123 = self.alpha[1].clone() + self.alpha[2].clone() + self.alpha[3].clone();
        let g1 = (s123.clone() - l.l0().clone()) / <Rat as Coeff>::from_int(2);
        let g2 = (s123 + l.l0().clone() + <Rat as Coeff>::one()) / <Rat as Coeff>::from_int(2);
        (g1, g2)
    }
}

/// Hilbert-space membership of an invariant space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hilbert {
    NotInH,
    /// Full Hilbert space (Jacobi case).
    InH,
    /// Periodic sector of a Gegenbauer case.
    InHPlus,
    /// Antiperiodic sector of a Gegenbauer case.
    InHMinus,
    /// Fourier sectors.
    InH1,
    InH2,
    InH3,
    InH4,
}

impl Hilbert {
    pub fn in_hilbert(self) -> bool {
        self != Hilbert::NotInH
    }

    pub fn label(self) -> &'static str {
        match self {
            Hilbert::NotInH => "not-in-H",
            Hilbert::InH => "H",
            Hilbert::InHPlus => "H+",
            Hilbert::InHMinus => "H-",
            Hilbert::InH1 => "H1",
            Hilbert::InH2 => "H2",
            Hilbert::InH3 => "H3",
            Hilbert::InH4 => "H4",
        }
    }

    /// The sector of the trigonometric basis this membership refers to.
    pub fn sector(self) -> Option<Sector> {
        match self {
            Hilbert::NotInH => None,
            Hilbert::InH => Some(Sector::Full),
            Hilbert::InHPlus => Some(Sector::Plus),
            Hilbert::InHMinus => Some(Sector::Minus),
            Hilbert::InH1 => Some(Sector::F1),
            Hilbert::InH2 => Some(Sector::F2),
            Hilbert::InH3 => Some(Sector::F3),
            Hilbert::InH4 => Some(Sector::F4),
        }
    }
}

/// Tridiagonal matrix in the (z - e_2)^r basis; `sub[r]` is the entry
/// (r + 1, r) and `sup[r]` the entry (r, r + 1).
#[derive(Clone, Debug)]
pub struct Tridiagonal<T> {
    pub diag: Vec<T>,
    pub sub: Vec<T>,
    pub sup: Vec<T>,
}

impl<T> Tridiagonal<T> {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }
}

impl Tridiagonal<EPoly> {
    /// Numeric matrix at the half-period values of the context.
    pub fn at_context(&self, ctx: &EllipticContext) -> Tridiagonal<f64> {
        let (e1, e2) = (ctx.e1(), ctx.e2());
        Tridiagonal {
            diag: self.diag.iter().map(|p| p.eval(e1, e2)).collect(),
            sub: self.sub.iter().map(|p| p.eval(e1, e2)).collect(),
            sup: self.sup.iter().map(|p| p.eval(e1, e2)).collect(),
        }
    }

    pub fn trace(&self) -> EPoly {
        self.diag
            .iter()
            .fold(EPoly::zero(), |acc, p| acc.add(p))
    }

    /// Determinant by the tridiagonal continuant recurrence.
    pub fn determinant(&self) -> EPoly {
        let mut prev = EPoly::constant(<Rat as Coeff>::one());
        let mut cur = self.diag[0].clone();
        for r in 1..self.dim() {
            let next = self.diag[r]
                .mul(&cur)
                .sub(&self.sub[r - 1].mul(&self.sup[r - 1]).mul(&prev));
            prev = cur;
            cur = next;
        }
        cur
    }
}

/// An admissible invariant space with its membership flag and matrix.
#[derive(Clone, Debug)]
pub struct QesSpace {
    pub alpha: AlphaVector,
    pub dim: usize,
    pub hilbert: Hilbert,
    pub matrix: Tridiagonal<EPoly>,
    /// For integer couplings: the complementary sign vector whose reflected
    /// space coincides with this one (present when that vector has
    /// sum alpha~_i / 2 in Z_{>=2}).
    pub reflected_from: Option<[Rat; 4]>,
}

fn hilbert_flag(l: &Couplings<Rat>, alpha: &AlphaVector) -> Hilbert {
    let a0 = &alpha.alpha[0];
    let a1 = &alpha.alpha[1];
    let nonneg = |r: &Rat| !r.to_f64().is_sign_negative() || Coeff::is_zero(r);
    if !(nonneg(a0) && nonneg(a1)) {
        return Hilbert::NotInH;
    }
    let l0_pos = !Coeff::is_zero(l.l0());
    let l1_pos = !Coeff::is_zero(l.l1());
    let one = <Rat as Coeff>::one();
    match (l0_pos, l1_pos) {
        (true, true) => Hilbert::InH,
        (true, false) => {
            if Coeff::is_zero(a1) {
                Hilbert::InHPlus
            } else {
                Hilbert::InHMinus
            }
        }
        (false, true) => {
            if Coeff::is_zero(a0) {
                Hilbert::InHPlus
            } else {
                Hilbert::InHMinus
            }
        }
        (false, false) => match (Coeff::is_zero(a0), a1 == &one) {
            (true, false) => Hilbert::InH1,
            (false, true) => Hilbert::InH2,
            (true, true) => Hilbert::InH3,
            (false, false) => Hilbert::InH4,
        },
    }
}

/// The symbolic tridiagonal matrix of the Hamiltonian action on the
/// invariant space of an admissible sign vector.
pub fn build_matrix(alpha: &AlphaVector, l: &Couplings<Rat>) -> Tridiagonal<EPoly> {
    let d = alpha.d;
    let (g1, g2) = alpha.gammas(l);
    let a = &alpha.alpha;
    let m4 = <Rat as Coeff>::from_int(-4);

    // q' = -(1/4)(e1 (a2+a3)^2 + e2 (a1+a3)^2 + e3 (a1+a2)^2) + e2 g1 g2
    let sq = |x: Rat| x.clone() * x;
    let qp = EPoly::e1()
        .scale(&sq(a[2].clone() + a[3].clone()))
        .add(&EPoly::e2().scale(&sq(a[1].clone() + a[3].clone())))
        .add(&EPoly::e3().scale(&sq(a[1].clone() + a[2].clone())))
        .scale(&<Rat as Coeff>::from_ratio(-1, 4))
        .add(&EPoly::e2().scale(&(g1.clone() * g2.clone())));

    let e2_m_e3 = EPoly::e2().sub(&EPoly::e3());
    let e2_m_e1 = EPoly::e2().sub(&EPoly::e1());

    let mut diag = Vec::with_capacity(d + 1);
    let mut sub = Vec::with_capacity(d);
    let mut sup = Vec::with_capacity(d);
    for r in 0..=d {
        let rc = <Rat as Coeff>::from_int(r as i64);
        // -4 ((e2-e3)(r+a2+a1) r + (e2-e1)(r+a2+a3) r + q')
        let t1 = e2_m_e3.scale(&((rc.clone() + a[2].clone() + a[1].clone()) * rc.clone()));
        let t2 = e2_m_e1.scale(&((rc.clone() + a[2].clone() + a[3].clone()) * rc.clone()));
        diag.push(t1.add(&t2).add(&qp).scale(&m4));
        if r < d {
            // entry (r+1, r): -4 (r + g1)(r + g2)
            let c = m4.clone() * (rc.clone() + g1.clone()) * (rc.clone() + g2.clone());
            sub.push(EPoly::constant(c));
            // entry (r, r+1): -4 (r+1)(r + 1 + a2 - 1/2)(e2-e3)(e2-e1)
            let rp = rc + <Rat as Coeff>::one();
            let c = m4.clone()
                * rp.clone()
                * (rp + a[2].clone() - <Rat as Coeff>::from_ratio(1, 2));
            sup.push(e2_m_e3.mul(&e2_m_e1).scale(&c));
        }
    }
    Tridiagonal { diag, sub, sup }
}

/// The coefficient -4 (d + g1)(d + g2) that would leak past the top of the
/// space; exactly zero for every admissible sign vector.
pub fn leakage_at_top(alpha: &AlphaVector, l: &Couplings<Rat>) -> Rat {
    let (g1, g2) = alpha.gammas(l);
    let dc = <Rat as Coeff>::from_int(alpha.d as i64);
    <Rat as Coeff>::from_int(-4) * (dc.clone() + g1) * (dc + g2)
}

/// Enumerate all sixteen sign vectors and return the admissible invariant
/// spaces with their Hilbert flags and symbolic matrices. For integer
/// couplings, sign vectors with sum alpha~_i / 2 in Z_{>=2} reach the same
/// spaces through the complement reflection; they are recorded on the
/// entries they duplicate.
pub fn census(l: &Couplings<Rat>) -> Vec<QesSpace> {
    let mut spaces: Vec<QesSpace> = Vec::new();
    for bits in 0..16u32 {
        let plus = [
            bits & 1 != 0,
            bits & 2 != 0,
            bits & 4 != 0,
            bits & 8 != 0,
        ];
        if let Some(alpha) = AlphaVector::from_signs(l, plus) {
            let hilbert = hilbert_flag(l, &alpha);
            let matrix = build_matrix(&alpha, l);
            spaces.push(QesSpace {
                dim: alpha.dim(),
                hilbert,
                matrix,
                alpha,
                reflected_from: None,
            });
        }
    }
    // U-space reflections for integer couplings
    let integral = l.l.iter().all(|li| li.is_integer());
    if integral {
        let one = <Rat as Coeff>::one();
        for bits in 0..16u32 {
            let plus = [
                bits & 1 != 0,
                bits & 2 != 0,
                bits & 4 != 0,
                bits & 8 != 0,
            ];
            let alpha: [Rat; 4] = std::array::from_fn(|i| {
                if plus[i] {
                    l.l[i].clone() + one.clone()
                } else {
                    -l.l[i].clone()
                }
            });
            let sum = alpha.iter().cloned().fold(<Rat as Coeff>::zero(), |a, b| a + b);
            let half = sum / <Rat as Coeff>::from_int(2);
            if half.is_integer() && half.to_integer() >= 2.into() {
                let reflected: [Rat; 4] =
                    std::array::from_fn(|i| one.clone() - alpha[i].clone());
                if let Some(space) = spaces.iter_mut().find(|s| s.alpha.alpha == reflected) {
                    space.reflected_from = Some(alpha);
                }
            }
        }
    }
    spaces
}

/// Closed-form trigonometric spectrum of an admissible space, in pi^2
/// units: {(2r + alpha~_0 + alpha~_1)^2 - (1/3) sum l_i(l_i+1)}, r = 0..d.
pub fn trig_spectrum(alpha: &AlphaVector, l: &Couplings<Rat>) -> Vec<Rat> {
    let shift = l.coupling_sum() / <Rat as Coeff>::from_int(3);
    (0..=alpha.d)
        .map(|r| {
            let t = <Rat as Coeff>::from_int(2 * r as i64)
                + alpha.alpha[0].clone()
                + alpha.alpha[1].clone();
            t.clone() * t - shift.clone()
        })
        .collect()
}

/// Exact eigenvalues of the symbolic matrix at the trigonometric point, in
/// pi^2 units. The matrix is lower triangular there (the super-diagonal
/// carries a factor e_2 - e_3), so the eigenvalues are the diagonal values.
pub fn algebraic_eigen_trig_exact(matrix: &Tridiagonal<EPoly>) -> Vec<Rat> {
    for s in &matrix.sup {
        debug_assert!(Coeff::is_zero(&s.subst_trig()));
    }
    matrix.diag.iter().map(|p| p.subst_trig()).collect()
}

/// One algebraic eigenpair of a numeric tridiagonal matrix.
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: Complex64,
    /// Coefficients in the (z - e_2)^r basis.
    pub vector: Vec<Complex64>,
    /// Characteristic-polynomial residual at the eigenvalue, relative to
    /// the coefficient scale.
    pub residual: f64,
}

impl EigenPair {
    pub fn is_real(&self, tol: f64) -> bool {
        self.value.im.abs() <= tol * self.value.re.abs().max(1.0)
    }
}

/// Coefficients of the characteristic polynomial det(M - t I), lowest
/// degree first, by the tridiagonal continuant recurrence.
fn charpoly(t: &Tridiagonal<f64>) -> Vec<f64> {
    let n = t.dim();
    // p_0 = 1, p_1 = d_0 - t, p_{r+1} = (d_r - t) p_r - sub_{r-1} sup_{r-1} p_{r-1}
    let mut prev = vec![1.0];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![t.diag[0], -1.0];
    for r in 1..n {
        let mut next = vec![0.0; r + 2];
        for (j, &c) in cur.iter().enumerate() {
            next[j] += t.diag[r] * c;
            next[j + 1] -= c;
        }
        let w = t.sub[r - 1] * t.sup[r - 1];
        for (j, &c) in prev.iter().enumerate() {
            next[j] -= w * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

fn poly_eval(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::zero();
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

fn poly_deriv_eval(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::zero();
    for (j, &c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = acc * z + c * j as f64;
    }
    acc
}

/// All roots of a real-coefficient polynomial by the Durand-Kerner
/// simultaneous iteration with Newton polishing.
fn poly_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(vec![]);
    }
    let lead = coeffs[n];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    if n == 1 {
        return Ok(vec![Complex64::new(-monic[0], 0.0)]);
    }
    let radius = 1.0
        + monic[..n]
            .iter()
            .map(|c| c.abs())
            .fold(0.0_f64, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|j| radius * seed.powu(j as u32 + 1))
        .collect();
    for _ in 0..400 {
        let mut shift = 0.0_f64;
        let snapshot = roots.clone();
        for j in 0..n {
            let pj = poly_eval(&monic, snapshot[j]);
            let mut denom = Complex64::new(1.0, 0.0);
            for (k, rk) in snapshot.iter().enumerate() {
                if k != j {
                    denom *= snapshot[j] - rk;
                }
            }
            if denom.norm() == 0.0 {
                continue;
            }
            let delta = pj / denom;
            roots[j] -= delta;
            shift = shift.max(delta.norm());
        }
        if shift < 1e-14 * radius {
            break;
        }
    }
    // Newton polish against the original coefficients
    let scale = coeffs.iter().map(|c| c.abs()).fold(0.0_f64, f64::max);
    for root in roots.iter_mut() {
        for _ in 0..40 {
            let p = poly_eval(coeffs, *root);
            let dp = poly_deriv_eval(coeffs, *root);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            *root -= step;
            if step.norm() < 1e-16 * root.norm().max(1.0) {
                break;
            }
        }
        // collapse spurious imaginary dust on real roots
        if root.im.abs() < 1e-10 * root.re.abs().max(1.0) {
            let real = Complex64::new(root.re, 0.0);
            if poly_eval(coeffs, real).norm() <= 4.0 * poly_eval(coeffs, *root).norm().max(1e-300)
            {
                *root = real;
            }
        }
        let res = poly_eval(coeffs, *root).norm() / scale.max(1.0);
        if !res.is_finite() || res > 1e-6 {
            return Err(Error::NoConvergence { residual: res });
        }
    }
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    Ok(roots)
}

/// Dense LU solve with partial pivoting; used for inverse-iteration
/// fallback when the forward eigenvector recurrence degenerates.
fn solve_dense(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = b.len();
    for col in 0..n {
        let (pivot, mag) = (col..n)
            .map(|r| (r, a[r][col].norm()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())?;
        if mag == 0.0 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
            let v = b[col];
            b[r] -= f * v;
        }
    }
    for col in (0..n).rev() {
        let mut acc = b[col];
        for c in col + 1..n {
            acc -= a[col][c] * b[c];
        }
        b[col] = acc / a[col][col];
    }
    Some(b)
}

fn eigenvector_for(t: &Tridiagonal<f64>, lambda: Complex64) -> Vec<Complex64> {
    let n = t.dim();
    if n == 1 {
        return vec![Complex64::new(1.0, 0.0)];
    }
    let scale = t
        .diag
        .iter()
        .chain(&t.sub)
        .chain(&t.sup)
        .map(|v| v.abs())
        .fold(0.0_f64, f64::max);
    let degenerate = t.sup.iter().any(|s| s.abs() < 1e-12 * scale.max(1.0));
    if !degenerate {
        // forward recurrence from the first row
        let mut v = vec![Complex64::new(1.0, 0.0), (lambda - t.diag[0]) / t.sup[0]];
        for r in 1..n - 1 {
            let next = ((lambda - t.diag[r]) * v[r] - t.sub[r - 1] * v[r - 1]) / t.sup[r];
            v.push(next);
        }
        return v;
    }
    // inverse iteration on a slightly shifted dense copy
    let shift = lambda + Complex64::new(1e-10 * scale.max(1.0), 1e-12 * scale.max(1.0));
    let mut v: Vec<Complex64> = (0..n)
        .map(|j| Complex64::new(1.0 / (j as f64 + 1.0), 0.3 / (j as f64 + 2.0)))
        .collect();
    for _ in 0..50 {
        let mut a = vec![vec![Complex64::zero(); n]; n];
        for r in 0..n {
            a[r][r] = Complex64::new(t.diag[r], 0.0) - shift;
            if r + 1 < n {
                a[r + 1][r] = Complex64::new(t.sub[r], 0.0);
                a[r][r + 1] = Complex64::new(t.sup[r], 0.0);
            }
        }
        match solve_dense(a, v.clone()) {
            Some(y) => {
                let norm = y.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                if norm == 0.0 {
                    break;
                }
                v = y.into_iter().map(|c| c / norm).collect();
            }
            None => break,
        }
    }
    // normalize leading entry to 1 when possible
    if v[0].norm() > 1e-150 {
        let f = v[0];
        v = v.into_iter().map(|c| c / f).collect();
    }
    v
}

fn matrix_residual(t: &Tridiagonal<f64>, pair: &EigenPair) -> f64 {
    let n = t.dim();
    let mut worst = 0.0_f64;
    let vnorm = pair.vector.iter().map(|c| c.norm()).fold(0.0_f64, f64::max);
    for r in 0..n {
        let mut acc = Complex64::new(t.diag[r], 0.0) * pair.vector[r];
        if r > 0 {
            acc += Complex64::new(t.sub[r - 1], 0.0) * pair.vector[r - 1];
        }
        if r + 1 < n {
            acc += Complex64::new(t.sup[r], 0.0) * pair.vector[r + 1];
        }
        worst = worst.max((acc - pair.value * pair.vector[r]).norm());
    }
    worst / vnorm.max(1e-300)
}

/// Eigenvalues and eigenvectors of the numeric tridiagonal matrix, sorted
/// by real part. Complex pairs are returned with their nonzero imaginary
/// parts; spaces outside the Hilbert space may have them.
pub fn algebraic_eigen(t: &Tridiagonal<f64>) -> Result<Vec<EigenPair>> {
    let coeffs = charpoly(t);
    let roots = poly_roots(&coeffs)?;
    let scale = t
        .diag
        .iter()
        .chain(&t.sub)
        .chain(&t.sup)
        .map(|v| v.abs())
        .fold(1.0_f64, f64::max);
    let mut pairs = Vec::with_capacity(roots.len());
    for value in roots {
        let vector = eigenvector_for(t, value);
        let pair = EigenPair {
            value,
            vector,
            residual: 0.0,
        };
        let residual = matrix_residual(t, &pair);
        if !residual.is_finite() || residual > 1e-6 * scale {
            return Err(Error::NoConvergence { residual });
        }
        pairs.push(EigenPair { residual, ..pair });
    }
    Ok(pairs)
}

/// Global level indices (in the full Hilbert space ordering of the case)
/// addressed by the algebraic spectrum of an in-Hilbert space.
pub fn sector_levels(hilbert: Hilbert, dim: usize) -> Result<Vec<usize>> {
    let sector = hilbert
        .sector()
        .ok_or_else(|| Error::InvalidInput("space not in the Hilbert space".into()))?;
    let (stride, offset) = match sector {
        Sector::Full => (1, 0),
        Sector::Plus | Sector::F1 => (2, 0),
        Sector::Minus | Sector::F3 | Sector::F4 => (2, 1),
        Sector::F2 => (2, 2),
    };
    Ok((0..dim).map(|r| stride * r + offset).collect())
}

/// One matched level: an algebraic eigenvalue paired with the perturbative
/// series of the global level it addresses, evaluated two ways: as the
/// order-K p-series, and as the order-K a-series at the numeric a(p) with
/// exact half-period factors (usually the more accurate of the two).
#[derive(Clone, Debug)]
pub struct MatchedLevel {
    pub alpha: [Rat; 4],
    pub hilbert: Hilbert,
    pub global_level: usize,
    pub algebraic: f64,
    pub series_value: f64,
    pub series_value_a: f64,
    pub gap: f64,
    pub gap_a: f64,
    pub truncation_margin: f64,
}

impl MatchedLevel {
    /// Smaller of the two route gaps.
    pub fn best_gap(&self) -> f64 {
        self.gap.min(self.gap_a)
    }
}

/// Report of the bottom-of-spectrum pairing.
#[derive(Clone, Debug)]
pub struct MatchReport {
    pub pairs: Vec<MatchedLevel>,
    pub hypothesis_ok: bool,
    pub warnings: Vec<String>,
}

/// Pair the algebraic eigenvalues on the in-Hilbert invariant spaces with
/// the lowest perturbative levels, sector by sector, merged by eigenvalue.
///
/// The pairing hypothesis ((l0 >= 1/2 and l1 > 0) or (l0 > 0 and
/// l1 >= 1/2), or the one-coupling analogue l >= 1/2 when the other
/// vanishes) is checked; a violation produces a warning but the report is
/// still assembled.
pub fn match_bottom(
    l: &Couplings<Rat>,
    ctx: &EllipticContext,
    order: usize,
) -> Result<MatchReport> {
    let half = <Rat as Coeff>::from_ratio(1, 2);
    let ge_half = |x: &Rat| x >= &half;
    let pos = |x: &Rat| !Coeff::is_zero(x);
    let hypothesis_ok = match (pos(l.l0()), pos(l.l1())) {
        (true, true) => {
            (ge_half(l.l0()) && pos(l.l1())) || (pos(l.l0()) && ge_half(l.l1()))
        }
        (true, false) => ge_half(l.l0()),
        (false, true) => ge_half(l.l1()),
        (false, false) => false,
    };
    let mut warnings = Vec::new();
    if !hypothesis_ok {
        warnings.push(
            "bottom-matching hypothesis violated; pairing reported without the theorem's backing"
                .into(),
        );
    }

    let spaces: Vec<QesSpace> = census(l)
        .into_iter()
        .filter(|s| s.hilbert.in_hilbert())
        .collect();
    if spaces.is_empty() {
        return Err(Error::InvalidInput(
            "no invariant space inside the Hilbert space".into(),
        ));
    }

    let mut pairs: Vec<MatchedLevel> = Vec::new();
    for space in &spaces {
        let numeric = space.matrix.at_context(ctx);
        let eigen = algebraic_eigen(&numeric)?;
        for pair in &eigen {
            if !pair.is_real(1e-8) {
                warnings.push(format!(
                    "complex algebraic eigenvalue {} on an in-Hilbert space",
                    pair.value
                ));
            }
        }
        let levels = sector_levels(space.hilbert, space.dim)?;
        for (rank, pair) in eigen.iter().enumerate() {
            let global_level = levels[rank];
            let series = level_series(l, global_level, order)?;
            let series_value = series.p_series.eval_energy(ctx.p);
            // a-route: truncated script-E series at the numeric a(p), with
            // exact half-period factors
            let eff = &series.a_series.l;
            let gauge = {
                let t = eff.l0().to_f64() + eff.l2().to_f64() + 2.0;
                t * t
            };
            let series_value_a = 4.0 * (ctx.e1() - ctx.e3()) * series.a_series.eval(ctx.a)
                + gauge * ctx.a * (ctx.e1() - ctx.e3())
                + eff.coupling_sum().to_f64() * ctx.e3();
            pairs.push(MatchedLevel {
                alpha: space.alpha.alpha.clone(),
                hilbert: space.hilbert,
                global_level,
                algebraic: pair.value.re,
                series_value,
                series_value_a,
                gap: (pair.value.re - series_value).abs(),
                gap_a: (pair.value.re - series_value_a).abs(),
                truncation_margin: series.p_series.truncation_margin(ctx.p),
            });
        }
    }
    pairs.sort_by(|a, b| a.algebraic.partial_cmp(&b.algebraic).unwrap());
    Ok(MatchReport {
        pairs,
        hypothesis_ok,
        warnings,
    })
}

/// Evaluate an invariant-space eigenfunction at x in the open interval
/// (0, 1/2), where wp(x) > e_1 > e_2 > e_3 keeps every base factor
/// positive:
///
///   f(x) = prod_{i=1..3} (wp(x) - e_i)^{alpha~_i / 2} sum_r c_r (wp(x) - e_2)^r.
pub fn qes_eigenfunction_eval(
    space: &QesSpace,
    coeffs: &[f64],
    x: f64,
    ctx: &EllipticContext,
) -> Result<f64> {
    if !(x > 0.0 && x < 0.5) {
        return Err(Error::InvalidInput(format!(
            "x = {} outside the open fundamental interval (0, 1/2)",
            x
        )));
    }
    let wp = wp_eval(x, 0, ctx)?.value;
    let mut prefactor = 1.0;
    for (i, e) in [ctx.e1(), ctx.e2(), ctx.e3()].into_iter().enumerate() {
        let base = wp - e;
        if base <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "wp(x) - e_{} = {} not positive at x = {}",
                i + 1,
                base,
                x
            )));
        }
        prefactor *= base.powf(0.5 * space.alpha.alpha[i + 1].to_f64());
    }
    let z = wp - ctx.e2();
    let mut poly = 0.0;
    for c in coeffs.iter().rev() {
        poly = poly * z + c;
    }
    Ok(prefactor * poly)
}
