//! Kloosterman sums, the Bessel transforms of the sum formulas, and both
//! sides of the spectral/arithmetic identities evaluated against ingested
//! Maass-form data.
//!
//! The working identity (delta = sgn(mn)):
//!
//! ```text
//! sum_l S(m,n;l)/l phi(4 pi sqrt|mn| / l)
//!   = sum_V conj(varrho_V(m)) varrho_V(n) B^delta phi(nu_V)
//!   + (1/4 pi i) int_(0) sigma_{2r}(m) sigma_{2r}(n) (mn)^{-r}
//!           B^delta phi(r) / (zeta(1+2r) zeta(1-2r)) dr
//! ```
//!
//! with the companion spectral-to-arithmetic form carrying the diagonal term
//! and the A^delta transform.

use crate::error::{Error, Result};
use crate::kirillov::{kernel_bracket_j, KernelParam};
use crate::specfun::{
    bessel, integrate_finite, sigma, tanh_sinh_finite, zeta, BesselKind, QuadratureSpec,
};
use crate::spectra::SpectralDataset;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

// --- Kloosterman sums --------------------------------------------------------

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Modular inverse of d mod ell for gcd(d, ell) = 1.
fn mod_inv(d: i64, ell: i64) -> i64 {
    let (_, x, _) = ext_gcd(d.rem_euclid(ell), ell);
    x.rem_euclid(ell)
}

/// S(m, n; ell) = sum over d mod ell, gcd(d, ell) = 1, of e((m d + n dbar)/ell),
/// with d dbar = 1 (mod ell). The d <-> ell - d pairing makes the sum real;
/// phases are reduced in exact integer arithmetic before the cosine.
pub fn kloosterman_sum(m: i64, n: i64, ell: i64) -> Result<f64> {
    if ell < 1 {
        return Err(Error::InvalidArgument(format!("S(m,n;ell) needs ell >= 1, got {ell}")));
    }
    if ell == 1 {
        return Ok(1.0);
    }
    let mut total = 0.0f64;
    for d in 1..ell {
        if num_gcd(d, ell) != 1 {
            continue;
        }
        let dbar = mod_inv(d, ell);
        let phase = ((m.rem_euclid(ell)) as i128 * d as i128
            + (n.rem_euclid(ell)) as i128 * dbar as i128)
            .rem_euclid(ell as i128) as f64;
        total += (2.0 * PI * phase / ell as f64).cos();
    }
    Ok(total)
}

fn num_gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

// --- Test weights ------------------------------------------------------------

type SpectralEval = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;
type GeometricEval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Weight functions on the two sides of the sum formulas: an even entire f of
/// fast decay on the spectral line, or a smooth compactly supported phi on
/// (0, infinity).
#[derive(Clone)]
pub enum TestWeight {
    Spectral {
        eval: SpectralEval,
        /// Gaussian-type decay scale on the imaginary axis: |f(it)| ~ e^{-(t/scale)^2}
        decay_scale: f64,
    },
    Geometric {
        eval: GeometricEval,
        support: (f64, f64),
    },
}

impl TestWeight {
    /// Even entire Gaussian f(nu) = exp((nu/scale)^2); on the spectral line
    /// f(it) = exp(-(t/scale)^2).
    pub fn gaussian_spectral(scale: f64) -> Result<Self> {
        if !(scale > 0.0) {
            return Err(Error::InvalidArgument("gaussian scale must be positive".into()));
        }
        let w = TestWeight::Spectral {
            eval: Arc::new(move |nu: Complex64| (nu * nu / (scale * scale)).exp()),
            decay_scale: scale,
        };
        w.check()?;
        Ok(w)
    }

    /// Smooth bump supported on [a, b]: exp(1 - 1/s) with
    /// s = (x-a)(b-x) / ((b-a)/2)^2, peak value 1 at the midpoint.
    pub fn bump(a: f64, b: f64) -> Result<Self> {
        if !(0.0 < a && a < b) {
            return Err(Error::InvalidArgument(format!(
                "bump support needs 0 < a < b, got [{a}, {b}]"
            )));
        }
        let w = TestWeight::Geometric {
            eval: Arc::new(move |x: f64| {
                if x <= a || x >= b {
                    return 0.0;
                }
                let s = (x - a) * (b - x) / ((b - a) / 2.0).powi(2);
                (1.0 - 1.0 / s).exp()
            }),
            support: (a, b),
        };
        w.check()?;
        Ok(w)
    }

    /// Construct a spectral weight from a caller-supplied evaluator.
    pub fn spectral<F>(eval: F, decay_scale: f64) -> Result<Self>
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        let w = TestWeight::Spectral {
            eval: Arc::new(eval),
            decay_scale,
        };
        w.check()?;
        Ok(w)
    }

    /// Construct a geometric weight from a caller-supplied evaluator.
    pub fn geometric<F>(eval: F, support: (f64, f64)) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let w = TestWeight::Geometric {
            eval: Arc::new(eval),
            support,
        };
        w.check()?;
        Ok(w)
    }

    fn check(&self) -> Result<()> {
        match self {
            TestWeight::Spectral { eval, .. } => {
                for &t in &[0.35, 1.7, 4.2] {
                    let a = eval(Complex64::new(0.0, t));
                    let b = eval(Complex64::new(0.0, -t));
                    if (a - b).norm() > 1e-10 * (1.0 + a.norm()) {
                        return Err(Error::InvalidArgument(
                            "spectral weight must be even: f(nu) = f(-nu)".into(),
                        ));
                    }
                }
            }
            TestWeight::Geometric { eval, support } => {
                let (a, b) = *support;
                for x in [a - 0.5 * (b - a), a - 1e-9, b + 1e-9, b + 0.5 * (b - a)] {
                    if x > 0.0 && eval(x) != 0.0 {
                        return Err(Error::InvalidArgument(
                            "geometric weight must vanish outside its declared support".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn eval_spectral(&self, nu: Complex64) -> Result<Complex64> {
        match self {
            TestWeight::Spectral { eval, .. } => Ok(eval(nu)),
            _ => Err(Error::InvalidArgument("expected a spectral weight".into())),
        }
    }

    fn eval_geometric(&self, x: f64) -> Result<f64> {
        match self {
            TestWeight::Geometric { eval, .. } => Ok(eval(x)),
            _ => Err(Error::InvalidArgument("expected a geometric weight".into())),
        }
    }
}

// --- The Bessel transforms -----------------------------------------------------

/// The kernel bracket for the requested sign: delta = +1 uses J-Bessel, and
/// delta = -1 the I-difference in its K form (2 sin(pi mu) K_mu / pi per
/// reflection, giving 4 cos(pi nu) K_{2 nu}(x) / pi).
fn kernel_bracket(delta: i32, nu: Complex64, x: f64) -> Result<Complex64> {
    match delta {
        1 => kernel_bracket_j(nu, x),
        -1 => Ok(4.0 / PI * (PI * nu).cos() * bessel(BesselKind::K, 2.0 * nu, x)?),
        _ => Err(Error::InvalidArgument(format!("delta must be ±1, got {delta}"))),
    }
}

/// A^delta f(x) = (i/4 pi) int_(0) [bracket] nu tan(pi nu) f(nu) dnu, reduced
/// on nu = it to (1/2 pi) int_0^inf bracket(it, x) t tanh(pi t) f(it) dt.
pub fn transform_a(f: &TestWeight, delta: i32, x: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    if !(x > 0.0) {
        return Err(Error::InvalidArgument("transform A needs x > 0".into()));
    }
    let decay = match f {
        TestWeight::Spectral { decay_scale, .. } => *decay_scale,
        _ => return Err(Error::InvalidArgument("transform A takes a spectral weight".into())),
    };
    let t_max = decay * 6.6;
    if delta == -1 && 2.0 * t_max > 62.0 {
        return Err(Error::OutOfEnvelope {
            what: "transform A (delta = -1)",
            detail: format!(
                "declared decay needs K-Bessel orders up to {:.1}i, beyond the envelope",
                2.0 * t_max
            ),
        });
    }
    let integrand = |t: f64| -> Complex64 {
        if t <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let nu = Complex64::new(0.0, t);
        let b = match kernel_bracket(delta, nu, x) {
            Ok(b) => b,
            Err(_) => return Complex64::new(0.0, 0.0),
        };
        let fval = match f.eval_spectral(nu) {
            Ok(v) => v,
            Err(_) => return Complex64::new(0.0, 0.0),
        };
        b * t * (PI * t).tanh() * fval
    };
    let est = integrate_finite(
        integrand,
        0.0,
        t_max,
        spec.abs_tol.min(1e-10),
        spec.rel_tol.min(1e-10),
        spec.max_panels,
    )?;
    Ok(est.value / (2.0 * PI))
}

/// B^delta phi(nu) = 2 pi int_0^inf [bracket](nu, x) phi(x) dx / x over the
/// support of phi.
///
/// For delta = -1 on the unitary principal line the bracket is
/// (4/pi) cosh(pi kappa) K_{2 i kappa}(x); those K values come from one
/// batched backward ODE sweep over a fixed composite Gauss grid, since a
/// per-node sweep inside adaptive quadrature is ruinously slow at large kappa.
pub fn transform_b(
    phi: &TestWeight,
    delta: i32,
    param: KernelParam,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let (a, b) = match phi {
        TestWeight::Geometric { support, .. } => *support,
        _ => return Err(Error::InvalidArgument("transform B takes a geometric weight".into())),
    };
    let nu = param.nu();
    if delta == -1 && nu.re.abs() < 1e-12 && nu.im.abs() > 0.5 {
        let kappa = nu.im.abs();
        // composite Gauss-Legendre resolving the K oscillation ~ 2 kappa / x
        let panels = (4.0f64).max((kappa * (b - a) / 3.0).ceil()) as usize;
        const GLX: [f64; 8] = [
            0.095_012_509_837_637_44,
            0.281_603_550_779_258_9,
            0.458_016_777_657_227_4,
            0.617_876_244_402_643_7,
            0.755_404_408_355_003_0,
            0.865_631_202_387_831_7,
            0.944_575_023_073_232_6,
            0.989_400_934_991_649_9,
        ];
        const GLW: [f64; 8] = [
            0.189_450_610_455_068_5,
            0.182_603_415_044_923_6,
            0.169_156_519_395_002_54,
            0.149_595_988_816_576_73,
            0.124_628_971_255_533_87,
            0.095_158_511_682_492_79,
            0.062_253_523_938_647_89,
            0.027_152_459_411_754_095,
        ];
        let mut xs = Vec::with_capacity(panels * 16);
        let mut ws = Vec::with_capacity(panels * 16);
        let width = (b - a) / panels as f64;
        for pnl in 0..panels {
            let mid = a + (pnl as f64 + 0.5) * width;
            let half = 0.5 * width;
            for i in 0..8 {
                for sgn in [-1.0, 1.0] {
                    xs.push(mid + sgn * half * GLX[i]);
                    ws.push(half * GLW[i]);
                }
            }
        }
        let kv = crate::specfun::bessel_k_imag_batch(2.0 * kappa, &xs)?;
        let cosh = (PI * kappa).cosh();
        let mut total = 0.0f64;
        for ((x, w), k) in xs.iter().zip(ws.iter()).zip(kv.iter()) {
            let pv = phi.eval_geometric(*x)?;
            if pv != 0.0 {
                total += w * 4.0 / PI * cosh * k * pv / x;
            }
        }
        return Ok(Complex64::new(2.0 * PI * total, 0.0));
    }
    let integrand = |x: f64| -> Complex64 {
        if x <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let pv = phi.eval_geometric(x).unwrap_or(0.0);
        if pv == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        match kernel_bracket(delta, nu, x) {
            Ok(br) => br * pv / x,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    };
    let est = integrate_finite(
        integrand,
        a,
        b,
        spec.abs_tol.min(1e-11),
        spec.rel_tol.min(1e-11),
        spec.max_panels,
    )?;
    Ok(2.0 * PI * est.value)
}

// --- Sum-formula sides ----------------------------------------------------------

/// Weight plugged into the spectral side: either a spectral f evaluated at
/// nu_V, or B^delta of a geometric phi.
pub enum SpectralSideWeight<'a> {
    F(&'a TestWeight),
    BTransform(&'a TestWeight, i32),
}

impl SpectralSideWeight<'_> {
    fn value(&self, param: KernelParam, spec: &QuadratureSpec) -> Result<Complex64> {
        match self {
            SpectralSideWeight::F(f) => f.eval_spectral(param.nu()),
            SpectralSideWeight::BTransform(phi, delta) => transform_b(phi, *delta, param, spec),
        }
    }
}

/// Geometric side: the exact finite sum over moduli whose Bessel argument
/// falls in the support of phi. Reports an error if `ell_max` silently cuts
/// the support.
pub fn geometric_side(
    m: i64,
    n: i64,
    phi: &TestWeight,
    ell_max: i64,
) -> Result<(f64, usize)> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("sum formula needs m, n nonzero".into()));
    }
    let (a, b) = match phi {
        TestWeight::Geometric { support, .. } => *support,
        _ => return Err(Error::InvalidArgument("geometric side takes a geometric weight".into())),
    };
    let root = ((m * n).abs() as f64).sqrt();
    let ell_lo = (4.0 * PI * root / b).ceil().max(1.0) as i64;
    let ell_hi = (4.0 * PI * root / a).floor() as i64;
    if ell_hi > ell_max {
        return Err(Error::InvalidArgument(format!(
            "ell_max = {ell_max} cuts the support: moduli up to {ell_hi} contribute"
        )));
    }
    let mut total = 0.0;
    let mut terms = 0usize;
    for ell in ell_lo..=ell_hi {
        let arg = 4.0 * PI * root / ell as f64;
        let pv = phi.eval_geometric(arg)?;
        if pv == 0.0 {
            continue;
        }
        total += kloosterman_sum(m, n, ell)? / ell as f64 * pv;
        terms += 1;
    }
    Ok((total, terms))
}

/// Decomposition of the spectral side of the sum formula.
#[derive(Debug, Clone)]
pub struct SpectralSideBreakdown {
    pub total: Complex64,
    /// per-Maass-form contributions (kappa, term)
    pub per_form: Vec<(f64, Complex64)>,
    pub discrete_series_term: Complex64,
    pub continuous_term: Complex64,
    /// heuristic estimate of the spectral mass beyond the dataset's kappa range
    pub truncation_estimate: f64,
}

/// Spectral side of the Kloosterman-to-spectral formula: Maass terms plus
/// (for mn > 0) the discrete-series terms, plus the continuous integral with
/// the divisor/zeta weights.
pub fn spectral_side(
    m: i64,
    n: i64,
    weight: &SpectralSideWeight,
    data: &SpectralDataset,
    nu_cutoff: f64,
    spec: &QuadratureSpec,
) -> Result<SpectralSideBreakdown> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("sum formula needs m, n nonzero".into()));
    }
    if data.forms.is_empty() {
        return Err(Error::InvalidArgument("spectral dataset has no Maass forms".into()));
    }
    let mut per_form = Vec::with_capacity(data.forms.len());
    let mut cusp_total = Complex64::new(0.0, 0.0);
    for rec in &data.forms {
        let vr_m = crate::spectra::normalize(rec, m)?;
        let vr_n = crate::spectra::normalize(rec, n)?;
        let w = weight.value(KernelParam::Nu(Complex64::new(0.0, rec.kappa)), spec)?;
        let term = vr_m.conj() * vr_n * w;
        cusp_total += term;
        per_form.push((rec.kappa, term));
    }
    // discrete series enter only for mn > 0, and only through positive indices
    let mut disc = Complex64::new(0.0, 0.0);
    if m > 0 && n > 0 {
        for h in &data.holo {
            let amp = h.varrho1_sq() * h.t(m as usize)? * h.t(n as usize)?;
            let w = weight.value(KernelParam::Discrete(h.k), spec)?;
            disc += amp * w;
        }
    }
    // continuous spectrum: (1/4 pi) int_R (even integrand) dt folded to [0, cutoff]
    let mf = m.unsigned_abs() as i64;
    let nf = n.unsigned_abs() as i64;
    let cont_integrand = |t: f64| -> Complex64 {
        if t < 1e-8 {
            return Complex64::new(0.0, 0.0); // double zero from 1/(zeta zeta) ~ 4t^2
        }
        let r = Complex64::new(0.0, t);
        let s_m = sigma(2.0 * r, mf).unwrap_or(Complex64::new(0.0, 0.0));
        let s_n = sigma(2.0 * r, nf).unwrap_or(Complex64::new(0.0, 0.0));
        let mn_pow = (-r * ((mf * nf) as f64).ln()).exp();
        let z1 = match zeta(Complex64::new(1.0, 2.0 * t)) {
            Ok(z) => z,
            Err(_) => return Complex64::new(0.0, 0.0),
        };
        let w = match weight.value(KernelParam::Nu(r), &QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            ..*spec
        }) {
            Ok(w) => w,
            Err(_) => return Complex64::new(0.0, 0.0),
        };
        s_m * s_n * mn_pow * w / z1.norm_sqr()
    };
    let cont = integrate_finite(
        cont_integrand,
        0.0,
        nu_cutoff,
        spec.abs_tol.min(1e-9),
        spec.rel_tol.min(1e-8),
        spec.max_panels,
    )?;
    let continuous_term = cont.value / (2.0 * PI);
    // spectral truncation estimate: local weight density near the top of the
    // dataset times the tail mass of the transform
    let kappa_max = data.forms.last().map(|r| r.kappa).unwrap_or(0.0);
    let window = 5.0f64.min(kappa_max / 2.0);
    let local: f64 = data
        .forms
        .iter()
        .filter(|r| r.kappa > kappa_max - window)
        .map(|r| {
            r.varrho1_sq()
                * r.t(m.unsigned_abs() as usize).unwrap_or(1.0).abs()
                * r.t(n.unsigned_abs() as usize).unwrap_or(1.0).abs()
        })
        .sum::<f64>()
        / window;
    let tail_grid: Vec<f64> = (0..24).map(|i| kappa_max + 0.6 + 1.25 * i as f64).collect();
    let mut tail = 0.0;
    for t in tail_grid {
        let w = weight
            .value(KernelParam::Nu(Complex64::new(0.0, t)), spec)
            .map(|w| w.norm())
            .unwrap_or(0.0);
        // density grows like t/6 relative to the local window average
        tail += 1.25 * local * (t / kappa_max.max(1.0)) * w;
    }
    let total = cusp_total + disc + continuous_term;
    Ok(SpectralSideBreakdown {
        total,
        per_form,
        discrete_series_term: disc,
        continuous_term,
        truncation_estimate: tail,
    })
}

/// Truncation parameters that entered a sum-formula evaluation.
#[derive(Debug, Clone, Copy)]
pub struct TruncationInfo {
    pub num_forms: usize,
    pub ell_max: i64,
    pub nu_cutoff: f64,
}

/// Both sides of the Kloosterman-to-spectral identity with the residual and
/// the error budget split into spectral-truncation and quadrature parts.
#[derive(Debug, Clone)]
pub struct SumFormulaReport {
    pub m: i64,
    pub n: i64,
    pub delta: i32,
    pub spectral_side: Complex64,
    pub geometric_side: Complex64,
    pub per_form: Vec<(f64, Complex64)>,
    pub continuous_term: Complex64,
    pub delta_term: Complex64,
    pub discrete_series_term: Complex64,
    pub truncation: TruncationInfo,
    pub residual: f64,
    pub spectral_tail_budget: f64,
    pub quadrature_budget: f64,
}

/// Evaluate both sides of the sum formula for a geometric weight phi and
/// assemble the comparison report. delta = sgn(mn) is forced by the inputs.
pub fn trace_formula_report(
    m: i64,
    n: i64,
    phi: &TestWeight,
    data: &SpectralDataset,
    ell_max: i64,
    nu_cutoff: f64,
    spec: &QuadratureSpec,
) -> Result<SumFormulaReport> {
    let delta = if m * n > 0 { 1 } else { -1 };
    let (geom, _terms) = geometric_side(m, n, phi, ell_max)?;
    let weight = SpectralSideWeight::BTransform(phi, delta);
    let sb = spectral_side(m, n, &weight, data, nu_cutoff, spec)?;
    let residual = (sb.total - geom).norm() / (1.0 + geom.abs());
    Ok(SumFormulaReport {
        m,
        n,
        delta,
        spectral_side: sb.total,
        geometric_side: Complex64::new(geom, 0.0),
        per_form: sb.per_form,
        continuous_term: sb.continuous_term,
        delta_term: Complex64::new(0.0, 0.0),
        discrete_series_term: sb.discrete_series_term,
        truncation: TruncationInfo {
            num_forms: data.forms.len(),
            ell_max,
            nu_cutoff,
        },
        residual,
        spectral_tail_budget: sb.truncation_estimate,
        quadrature_budget: spec.abs_tol * 10.0 + spec.rel_tol * sb.total.norm() * 10.0,
    })
}

/// Diagonal term of the spectral-to-Kloosterman formula:
/// delta_{mn} (i/4 pi^2) int_(0) r tan(pi r) f(r) dr
/// = delta_{mn} (1/2 pi^2) int_0^inf t tanh(pi t) f(it) dt.
pub fn delta_term(m: i64, n: i64, f: &TestWeight, spec: &QuadratureSpec) -> Result<Complex64> {
    if m != n {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let decay = match f {
        TestWeight::Spectral { decay_scale, .. } => *decay_scale,
        _ => return Err(Error::InvalidArgument("delta term takes a spectral weight".into())),
    };
    let est = integrate_finite(
        |t: f64| {
            if t <= 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let fv = f.eval_spectral(Complex64::new(0.0, t)).unwrap_or(Complex64::new(0.0, 0.0));
            t * (PI * t).tanh() * fv
        },
        0.0,
        decay * 6.6,
        spec.abs_tol.min(1e-11),
        spec.rel_tol.min(1e-11),
        spec.max_panels,
    )?;
    Ok(est.value / (2.0 * PI * PI))
}

// --- The fourth-moment kernel ----------------------------------------------------

/// Xi(u; nu) = int_{R^x} j_0(-v) j_nu(v/u) d^x v / sqrt|v| by quadrature:
/// on v > 0 the j_0 factor is the exponentially decaying K_0 form, on v < 0
/// the j_nu factor is; both half-lines reduce to smooth w = sqrt|v| integrals.
pub fn xi_kernel(u: f64, nu: Complex64, spec: &QuadratureSpec) -> Result<Complex64> {
    if !(u > 0.0) {
        return Err(Error::InvalidArgument("Xi needs u > 0".into()));
    }
    if nu.re.abs() >= 0.5 {
        return Err(Error::InvalidArgument("Xi needs |Re nu| < 1/2".into()));
    }
    let ru = u.sqrt();
    // v > 0: (8 pi / sqrt u) int K_0(4 pi w) bracket_j(nu, 4 pi w / sqrt u) dw
    let pos_integrand = |w: f64| -> Complex64 {
        if w <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let k0 = match bessel(BesselKind::K, Complex64::new(0.0, 0.0), 4.0 * PI * w) {
            Ok(k) => k,
            Err(_) => return Complex64::new(0.0, 0.0),
        };
        match kernel_bracket_j(nu, 4.0 * PI * w / ru) {
            Ok(b) => k0 * b,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    };
    let pos_head = tanh_sinh_finite(&pos_integrand, 0.0, 0.5, 1e-12, 1e-10)?;
    let pos_tail = integrate_finite(&pos_integrand, 0.5, 3.5, 1e-12, 1e-10, spec.max_panels)?;
    let pos = 8.0 * PI / ru * (pos_head.value + pos_tail.value);
    // v < 0: (8 pi / sqrt u) cos(pi nu) int bracket_j(0, 4 pi w) K_{2 nu}(4 pi w / sqrt u) dw
    let neg_integrand = |w: f64| -> Complex64 {
        if w <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let k = match bessel(BesselKind::K, 2.0 * nu, 4.0 * PI * w / ru) {
            Ok(k) => k,
            Err(_) => return Complex64::new(0.0, 0.0),
        };
        match kernel_bracket_j(Complex64::new(0.0, 0.0), 4.0 * PI * w) {
            Ok(b) => k * b,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    };
    let w_hi = 3.5 * ru.max(1.0);
    let neg_head = tanh_sinh_finite(&neg_integrand, 0.0, 0.5, 1e-12, 1e-10)?;
    let neg_tail = integrate_finite(&neg_integrand, 0.5, w_hi, 1e-12, 1e-10, spec.max_panels)?;
    let neg = 8.0 * PI / ru * (PI * nu).cos() * (neg_head.value + neg_tail.value);
    Ok(pos + neg)
}

/// The Mellin-factorized route for Xi(u; nu): two vertical-line integrals of
/// products of the kernel Mellin transforms, an independent check of the
/// direct quadrature.
pub fn xi_kernel_mellin(u: f64, nu: Complex64, spec: &QuadratureSpec) -> Result<Complex64> {
    if !(u > 0.0) || nu.re.abs() >= 0.25 {
        return Err(Error::InvalidArgument(
            "Mellin route needs u > 0 and |Re nu| < 1/4".into(),
        ));
    }
    // m_plus(s') = 2^{1-2s'} pi^{-2s'} cos(pi s') Gamma(s'+nu) Gamma(s'-nu)
    // m_minus(s') = same with cos(pi nu)
    let mellin = |s: Complex64, nu: Complex64, positive: bool| -> Result<Complex64> {
        let g = crate::specfun::gamma(s + nu)? * crate::specfun::gamma(s - nu)?;
        let pref = ((1.0 - 2.0 * s) * (2.0f64).ln() - 2.0 * s * PI.ln()).exp();
        let trig = if positive { (PI * s).cos() } else { (PI * nu).cos() };
        Ok(pref * trig * g)
    };
    let zero = Complex64::new(0.0, 0.0);
    // P-part on Re s = c1 in (1/4, 1/2): F = M^-_0(s), G = u^{-s} M^+_nu(1/2 - s)
    let c1 = 0.3;
    // N-part on Re s = c2 in (0, 1/4): F = M^+_0(s), G = u^{-s} M^-_nu(1/2 - s)
    let c2 = 0.15;
    let upow = |s: Complex64| (-s * u.ln()).exp();
    let f = |t: f64| -> Complex64 {
        let s1 = Complex64::new(c1, t);
        let s2 = Complex64::new(c2, t);
        let p = mellin(s1, zero, false)
            .and_then(|a| Ok(a * upow(s1) * mellin(0.5 - s1, nu, true)?))
            .unwrap_or(zero);
        let n = mellin(s2, zero, true)
            .and_then(|a| Ok(a * upow(s2) * mellin(0.5 - s2, nu, false)?))
            .unwrap_or(zero);
        p + n
    };
    let est = integrate_finite(
        |t: f64| f(t) + f(-t),
        0.0,
        40.0,
        spec.abs_tol.min(1e-10),
        spec.rel_tol.min(1e-10),
        spec.max_panels,
    )?;
    Ok(est.value / (2.0 * 2.0 * PI) * 2.0)
}
