//! The Kirillov model: K phi(u) = A^{sgn u} phi(a[|u|]), the Bessel kernel of
//! representations realizing the Weyl-element action, the Mellin transforms
//! Gamma_p with their local functional equation, Whittaker product integrals,
//! and unitarity Gram matrices.

use crate::error::{Error, Result};
use crate::group::IwasawaCoords;
use crate::jacquet::{jacquet_phi, jacquet_phi_radial, whittaker_w};
use crate::specfun::{
    bessel, digamma, gamma, integrate_finite, tanh_sinh_finite, BesselKind, QuadratureSpec,
};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Which irreducible series a Kirillov-model computation runs in: a general
/// spectral parameter nu (unitary principal nu = i kappa, or complementary
/// real nu), or the holomorphic discrete series D_k with nu = k - 1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelParam {
    Nu(Complex64),
    Discrete(i32),
}

impl KernelParam {
    pub fn nu(&self) -> Complex64 {
        match *self {
            KernelParam::Nu(nu) => nu,
            KernelParam::Discrete(k) => Complex64::new(k as f64 - 0.5, 0.0),
        }
    }
}

/// A finite linear combination of elementary vectors in one representation.
#[derive(Debug, Clone)]
pub struct KirillovVector {
    pub coeffs: Vec<(i32, Complex64)>,
    pub param: KernelParam,
}

impl KirillovVector {
    pub fn new(coeffs: Vec<(i32, Complex64)>, param: KernelParam) -> Result<Self> {
        if let KernelParam::Discrete(k) = param {
            if k < 1 {
                return Err(Error::InvalidArgument("discrete series needs k >= 1".into()));
            }
            if coeffs.iter().any(|&(p, c)| p < k && c.norm() > 0.0) {
                return Err(Error::InvalidArgument(
                    "discrete-series vectors vanish below weight index k".into(),
                ));
            }
        }
        Ok(KirillovVector { coeffs, param })
    }
}

/// W_{p, k-1/2}(z) for integers p >= k >= 1: the elementary form
/// e^{-z/2} z^k (-1)^{p-k} (p-k)! L^{(2k-1)}_{p-k}(z) with the generalized
/// Laguerre polynomial by three-term recurrence.
fn whittaker_discrete(p: i32, k: i32, z: f64) -> f64 {
    let m = (p - k) as usize;
    let a = (2 * k - 1) as f64;
    let mut l0 = 1.0f64;
    let mut l1 = 1.0 + a - z;
    let lm = match m {
        0 => 1.0,
        1 => l1,
        _ => {
            let mut cur = 0.0;
            for j in 1..m {
                let jf = j as f64;
                cur = ((2.0 * jf + 1.0 + a - z) * l1 - (jf + a) * l0) / (jf + 1.0);
                l0 = l1;
                l1 = cur;
            }
            cur
        }
    };
    let fact: f64 = (1..=m).map(|j| j as f64).product();
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    (-z / 2.0).exp() * z.powi(k) * sign * fact * lm
}

/// K phi_p(u) = A^{sgn u} phi_p(a[|u|]); exactly 0 on u < 0 in the discrete
/// series, where A^- annihilates D_k. On D_k the Whittaker function is
/// elementary and the closed form replaces the oscillatory integral, whose
/// cancellation at small u would otherwise swamp the y^k-small answer.
pub fn kirillov_phi(
    p: i32,
    param: KernelParam,
    u: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if u == 0.0 {
        return Err(Error::InvalidArgument("Kirillov model lives on u != 0".into()));
    }
    if let KernelParam::Discrete(k) = param {
        if u < 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if p < k {
            return Err(Error::InvalidArgument(format!(
                "discrete series D_{k} has no vector at weight index {p}"
            )));
        }
        // A^+ phi_p(a[u]) = (-1)^p pi^{k} W_{p, k-1/2}(4 pi u) / Gamma(p+k)
        let sign = if p.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let g = gamma(Complex64::new((p + k) as f64, 0.0))?.re;
        let w = whittaker_discrete(p, k, 4.0 * PI * u);
        return Ok(Complex64::new(sign * PI.powi(k) * w / g, 0.0));
    }
    let delta = if u > 0.0 { 1 } else { -1 };
    jacquet_phi_radial(p, param.nu(), delta, u.abs(), spec)
}

fn kirillov_vec_value(vec: &KirillovVector, u: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    let mut s = Complex64::new(0.0, 0.0);
    for &(p, c) in &vec.coeffs {
        if c.norm() == 0.0 {
            continue;
        }
        s += c * kirillov_phi(p, vec.param, u, spec)?;
    }
    Ok(s)
}

/// (J_{-2nu}(x) - J_{2nu}(x)) / sin(pi nu), the positive-side kernel bracket.
/// Integer nu is a removable 0/0 handled by an even Richardson step in nu.
pub(crate) fn kernel_bracket_j(nu: Complex64, x: f64) -> Result<Complex64> {
    let sin = (PI * nu).sin();
    if sin.norm() >= 1e-6 {
        let jm = bessel(BesselKind::J, -2.0 * nu, x)?;
        let jp = bessel(BesselKind::J, 2.0 * nu, x)?;
        return Ok((jm - jp) / sin);
    }
    // nu within ~3e-7 of an integer; the bracket is even around each integer
    let n = nu.re.round();
    if n.abs() > 0.5 {
        return Err(Error::InvalidArgument(format!(
            "kernel parameter nu = {nu} too close to a nonzero integer"
        )));
    }
    let eval = |h: f64| -> Result<Complex64> {
        let nh = Complex64::new(h, 0.0);
        Ok((bessel(BesselKind::J, -2.0 * nh, x)? - bessel(BesselKind::J, 2.0 * nh, x)?)
            / (PI * nh).sin())
    };
    // even in nu around 0: f = f0 + a h^2 + b h^4 + O(h^6); eliminate both
    let h = 2e-3;
    let f1 = eval(h)?;
    let f2 = eval(2.0 * h)?;
    let f3 = eval(3.0 * h)?;
    Ok((15.0 * f1 - 6.0 * f2 + f3) / 10.0)
}

/// Bessel kernel of the representation:
/// j_nu(u) = pi sqrt|u| (J^{sgn u}_{-2nu} - J^{sgn u}_{2nu})(4 pi sqrt|u|) / sin(pi nu),
/// with J^+ = J and J^- = I; on the negative axis the I-difference is
/// evaluated in its cancellation-free K-Bessel form
/// 4 sqrt|u| cos(pi nu) K_{2nu}(4 pi sqrt|u|). Discrete series:
/// j_{k-1/2}(u) = 0 for u < 0 and 2 pi (-1)^k sqrt(u) J_{2k-1}(4 pi sqrt u).
pub fn bessel_kernel(param: KernelParam, u: f64) -> Result<f64> {
    if u == 0.0 {
        return Err(Error::InvalidArgument("bessel kernel needs u != 0".into()));
    }
    let root = u.abs().sqrt();
    let x = 4.0 * PI * root;
    let val = match param {
        KernelParam::Discrete(k) => {
            if u < 0.0 {
                return Ok(0.0);
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            2.0 * PI * sign * root * bessel(BesselKind::J, Complex64::new(2.0 * k as f64 - 1.0, 0.0), x)?
        }
        KernelParam::Nu(nu) => {
            // reject the degenerate half-integers outside the discrete form
            let twice = 2.0 * nu;
            if nu.im.abs() < 1e-9
                && (twice.re - twice.re.round()).abs() < 1e-9
                && nu.re.abs() > 1e-9
            {
                return Err(Error::InvalidArgument(format!(
                    "nu = {nu} in (1/2)Z \\ {{0}}: use the discrete form"
                )));
            }
            if u > 0.0 {
                PI * root * kernel_bracket_j(nu, x)?
            } else {
                4.0 * root * (PI * nu).cos() * bessel(BesselKind::K, 2.0 * nu, x)?
            }
        }
    };
    if val.im.abs() > 1e-9 * (1.0 + val.re.abs()) {
        return Err(Error::InvalidArgument(format!(
            "bessel kernel came out non-real: {val}"
        )));
    }
    Ok(val.re)
}

// --- Mellin transforms -----------------------------------------------------

/// L_p(s) = int_0^inf xi^{-s+nu} (xi^2+1)^{-nu-1/2} ((xi+i)/(xi-i))^p dxi,
/// computed on the exponential substitution xi = e^t.
fn l_p(p: i32, s: Complex64, nu: Complex64, spec: &QuadratureSpec) -> Result<Complex64> {
    let rate_pos = (s + nu).re; // decay e^{-(s+nu) t} as t -> +inf
    let rate_neg = 1.0 + (nu - s).re; // decay e^{(1+nu-s) t} as t -> -inf
    if rate_pos <= 0.02 || rate_neg <= 0.02 {
        return Err(Error::OutOfEnvelope {
            what: "L_p strip",
            detail: format!("Re s = {} outside (-Re nu, 1+Re nu) with margin", s.re),
        });
    }
    let t_hi = 40.0 / rate_pos;
    let t_lo = -40.0 / rate_neg;
    let f = |t: f64| {
        // ln(e^{2t}+1), stable for large |t|
        let ln_sq1 = if t > 15.0 {
            2.0 * t + (-2.0 * t).exp().ln_1p()
        } else {
            (2.0 * t).exp().ln_1p()
        };
        let phase = 2.0 * (p as f64) * (1.0f64).atan2(t.exp()); // p * arg((xi+i)/(xi-i))
        ((nu - s + 1.0) * t - (nu + 0.5) * ln_sq1 + Complex64::new(0.0, phase)).exp()
    };
    let est = integrate_finite(f, t_lo, t_hi, 1e-280, spec.rel_tol.min(1e-11), spec.max_panels)?;
    Ok(est.value)
}

/// Gamma_p(s, nu), the Mellin transform of K phi_p along the positive axis,
/// via the closed reduction to L_{±p} inside the strip -Re nu < Re s < 1+Re nu
/// and by direct Mellin quadrature of the Jacquet integral for Re s to the
/// right of the strip.
pub fn gamma_p(p: i32, s: Complex64, nu: Complex64, spec: &QuadratureSpec) -> Result<Complex64> {
    let in_strip = (s + nu).re > 0.05 && (1.0 + nu.re - s.re) > 0.05;
    if in_strip {
        // collapse of the Im xi = 1/2 contour onto the two half-axes:
        // (-2 pi i xi)^{nu-s} contributes e^{+i pi (s-nu)/2} on the positive
        // ray (paired with L_p) and the conjugate rotation on the negative
        // ray (paired with L_{-p}); checked against the direct Mellin route
        let lp = l_p(p, s, nu, spec)?;
        let lm = l_p(-p, s, nu, spec)?;
        let g = gamma(s - nu)?;
        let rot = Complex64::new(0.0, 0.5 * PI);
        let pref = ((nu - s) * (2.0 * PI).ln()).exp() * g;
        return Ok(pref * ((rot * (s - nu)).exp() * lp + (-rot * (s - nu)).exp() * lm));
    }
    if s.re > 0.05 {
        return gamma_p_direct(p, s, nu, spec);
    }
    Err(Error::OutOfEnvelope {
        what: "Gamma_p",
        detail: format!("Re s = {} left of both evaluation routes", s.re),
    })
}

/// Direct Mellin quadrature of Gamma_p(s) = int_0^inf A^+ phi_p(a[y]) y^{s-3/2} dy,
/// convergent for Re s > 0; the independent route for the agreement check.
pub fn gamma_p_direct(
    p: i32,
    s: Complex64,
    nu: Complex64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if s.re <= 0.02 {
        return Err(Error::OutOfEnvelope {
            what: "Gamma_p direct Mellin",
            detail: format!("needs Re s > 0, got {}", s.re),
        });
    }
    let inner = QuadratureSpec {
        rel_tol: spec.rel_tol.min(1e-12),
        abs_tol: spec.abs_tol.min(1e-12),
        ..*spec
    };
    let f = |y: f64| -> Complex64 {
        match jacquet_phi_radial(p, nu, 1, y, &inner) {
            Ok(a) => a * ((s - 1.5) * y.ln()).exp(),
            Err(_) => Complex64::new(0.0, 0.0),
        }
    };
    // endpoint-singular head + smooth decaying tail
    let head = tanh_sinh_finite(&f, 0.0, 0.5, 1e-13, 1e-12)?;
    let tail = integrate_finite(&f, 0.5, 25.0, 1e-13, 1e-12, spec.max_panels)?;
    Ok(head.value + tail.value)
}

/// Residual of the local functional equation
/// (-1)^p Gamma_p(s) = 2^{1-2s} pi^{-2s} Gamma(s+nu) Gamma(s-nu)
///                     (cos(pi s) Gamma_p(1-s) + cos(pi nu) Gamma_{-p}(1-s)).
pub fn functional_equation_residual(
    p: i32,
    s: Complex64,
    nu: Complex64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let sign = if p.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let lhs = sign * gamma_p(p, s, nu, spec)?;
    let pref = ((1.0 - 2.0 * s) * (2.0f64).ln() - 2.0 * s * PI.ln()).exp()
        * gamma(s + nu)?
        * gamma(s - nu)?;
    let rhs = pref
        * ((PI * s).cos() * gamma_p(p, 1.0 - s, nu, spec)?
            + (PI * nu).cos() * gamma_p(-p, 1.0 - s, nu, spec)?);
    Ok((lhs - rhs).norm() / (1.0 + lhs.norm()))
}

/// Residual of the recursion Gamma_p(s) = 4 pi (pi Gamma_p(s+2) - p Gamma_p(s+1)) / (s^2 - nu^2).
pub fn gamma_p_recursion_residual(
    p: i32,
    s: Complex64,
    nu: Complex64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let denom = s * s - nu * nu;
    if denom.norm() < 1e-8 {
        return Err(Error::InvalidArgument(
            "recursion is singular at s^2 = nu^2".into(),
        ));
    }
    let g0 = gamma_p(p, s, nu, spec)?;
    let g1 = gamma_p(p, s + 1.0, nu, spec)?;
    let g2 = gamma_p(p, s + 2.0, nu, spec)?;
    let rhs = 4.0 * PI * (PI * g2 - (p as f64) * g1) / denom;
    Ok((g0 - rhs).norm() / (1.0 + g0.norm()))
}

/// Residual of the Mellin pair on the requested half-line:
/// positive: int_0^inf j_nu(u) u^{s-3/2} du = 2^{1-2s} pi^{-2s} cos(pi s) G(s,nu),
/// negative: int_{-inf}^0 j_nu(u) |u|^{s-3/2} du = 2^{1-2s} pi^{-2s} cos(pi nu) G(s,nu),
/// with G(s,nu) = Gamma(s+nu) Gamma(s-nu).
pub fn mellin_pair_residual(
    s: Complex64,
    nu: Complex64,
    positive_side: bool,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let gg = gamma(s + nu)? * gamma(s - nu)?;
    let pref = ((1.0 - 2.0 * s) * (2.0f64).ln() - 2.0 * s * PI.ln()).exp() * gg;
    if positive_side {
        if !(nu.re.abs() < s.re && s.re < 0.25) {
            return Err(Error::OutOfEnvelope {
                what: "Mellin pair strip",
                detail: format!("positive side needs |Re nu| < Re s < 1/4, got Re s = {}", s.re),
            });
        }
        // u = w^2: 2 pi int_0^inf bracket(4 pi w) w^{2s-1} dw, oscillatory tail
        let f = |w: f64| -> Complex64 {
            if w <= 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            match kernel_bracket_j(nu, 4.0 * PI * w) {
                Ok(b) => 2.0 * PI * b * ((2.0 * s - 1.0) * w.ln()).exp(),
                Err(_) => Complex64::new(0.0, 0.0),
            }
        };
        let head = integrate_finite(&f, 0.0, 16.0, 1e-12, 1e-10, spec.max_panels.max(8000))?;
        // fixed half-period segments of the 4 pi w oscillation, epsilon-extrapolated
        let tail = crate::specfun::integrate_half_line_segmented(&f, 16.0, 0.25, 1e-10, 1e-10, 160)?;
        let lhs = head.value + tail.value;
        let rhs = pref * (PI * s).cos();
        Ok((lhs - rhs).norm() / (1.0 + rhs.norm()))
    } else {
        if s.re <= nu.re.abs() {
            return Err(Error::OutOfEnvelope {
                what: "Mellin pair strip",
                detail: format!("negative side needs Re s > |Re nu|, got Re s = {}", s.re),
            });
        }
        // j_nu(-v), v > 0, in the K form: exponentially decaying integrand
        let f = |w: f64| -> Complex64 {
            if w <= 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            match bessel(BesselKind::K, 2.0 * nu, 4.0 * PI * w) {
                Ok(k) => 8.0 * (PI * nu).cos() * k * ((2.0 * s - 1.0) * w.ln()).exp(),
                Err(_) => Complex64::new(0.0, 0.0),
            }
        };
        let head = tanh_sinh_finite(&f, 0.0, 1.0, 1e-13, 1e-11)?;
        let tail = integrate_finite(&f, 1.0, 6.0, 1e-13, 1e-11, spec.max_panels)?;
        let lhs = head.value + tail.value;
        let rhs = pref * (PI * nu).cos();
        Ok((lhs - rhs).norm() / (1.0 + rhs.norm()))
    }
}

// --- Weyl action -------------------------------------------------------------

/// Deterministic log-scale Gauss-Legendre grid on [2^lo, 2^hi] carrying
/// weights for d^x u = du/u integration; nodes per octave follow the
/// oscillation density of the integrands.
fn log_grid(lo_exp: i32, hi_exp: i32, nodes_per_octave: usize) -> Vec<(f64, f64)> {
    // GL-12 panel rule on each subdivision
    const GL12_X: [f64; 6] = [
        0.125_233_408_511_468_9,
        0.367_831_498_998_180_1,
        0.587_317_954_286_617_4,
        0.769_902_674_194_304_9,
        0.904_117_256_370_474_9,
        0.981_560_634_246_719_3,
    ];
    const GL12_W: [f64; 6] = [
        0.249_147_045_813_402_8,
        0.233_492_536_538_354_8,
        0.203_167_426_723_065_9,
        0.160_078_328_543_346_2,
        0.106_939_325_995_318_2,
        0.047_175_336_386_511_8,
    ];
    let panels_per_octave = nodes_per_octave.div_ceil(12).max(1);
    let ln2 = std::f64::consts::LN_2;
    let mut grid = Vec::new();
    for oct in lo_exp..hi_exp {
        for sub in 0..panels_per_octave {
            let t0 = oct as f64 * ln2 + sub as f64 * ln2 / panels_per_octave as f64;
            let t1 = t0 + ln2 / panels_per_octave as f64;
            let mid = 0.5 * (t0 + t1);
            let half = 0.5 * (t1 - t0);
            for i in 0..6 {
                for sgn in [-1.0, 1.0] {
                    let t = mid + sgn * half * GL12_X[i];
                    grid.push((t.exp(), half * GL12_W[i]));
                }
            }
        }
    }
    grid
}

/// The signed integration grid shared by the Weyl-action integrals: node
/// lambda values with d^x lambda weights, positive then (for non-discrete
/// series) negative axis. Node density tracks both the kernel oscillation
/// ~ 4 pi sqrt(u_scale * lambda) and the K phi oscillation in log lambda.
fn weyl_grid(param: KernelParam, u_scale: f64) -> Vec<(f64, f64)> {
    let nu_im = param.nu().im.abs();
    let (lo, hi) = match param {
        KernelParam::Discrete(_) => (-8, 3),
        KernelParam::Nu(_) => (-22, 3),
    };
    let mut grid = Vec::new();
    for oct in lo..hi {
        let lam_hi = 2.0f64.powi(oct + 1);
        let phase = 4.0 * PI * (u_scale.abs() * lam_hi).sqrt();
        let nodes = (12.0 + 1.2 * phase + 2.5 * nu_im).ceil() as usize;
        grid.extend(log_grid(oct, oct + 1, nodes.min(900)));
    }
    if matches!(param, KernelParam::Nu(_)) {
        let pos: Vec<(f64, f64)> = grid.clone();
        grid.extend(pos.into_iter().map(|(l, w)| (-l, w)));
    }
    grid
}

fn kernel_sum(
    param: KernelParam,
    u: f64,
    grid: &[(f64, f64)],
    values: &[Complex64],
) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for (&(lambda, w), kv) in grid.iter().zip(values) {
        if kv.norm() == 0.0 {
            continue;
        }
        let j = bessel_kernel(param, u * lambda)?;
        total += w * j * kv;
    }
    Ok(total)
}

/// Weyl-element action in the Kirillov model by the kernel integral
/// K omega(w) vec (u) = int_{R^x} j_nu(u lambda) K vec(lambda) d^x lambda,
/// over dyadic windows with oscillation-aware panelization.
pub fn weyl_action(vec: &KirillovVector, u: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    if u == 0.0 {
        return Err(Error::InvalidArgument("weyl action needs u != 0".into()));
    }
    if let KernelParam::Nu(nu) = vec.param {
        if nu.re.abs() >= 0.5 {
            return Err(Error::InvalidArgument(
                "kernel integral needs |Re nu| < 1/2 or the discrete series".into(),
            ));
        }
    }
    let grid = weyl_grid(vec.param, u);
    let values: Result<Vec<Complex64>> = grid
        .iter()
        .map(|&(lambda, _)| kirillov_vec_value(vec, lambda, spec))
        .collect();
    kernel_sum(vec.param, u, &grid, &values?)
}

/// The direct route for the Weyl action on an elementary vector:
/// K omega(w) phi_p(u) = A^{sgn u} phi_p(a[|u|] w), evaluated by the Jacquet
/// integral at the w-translated group point (Iwasawa coordinates (0, |u|, pi/2)).
pub fn weyl_action_direct(
    p: i32,
    param: KernelParam,
    u: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if u == 0.0 {
        return Err(Error::InvalidArgument("weyl action needs u != 0".into()));
    }
    let at = IwasawaCoords::new(0.0, u.abs(), std::f64::consts::FRAC_PI_2)?;
    let delta = if u > 0.0 { 1 } else { -1 };
    jacquet_phi(p, param.nu(), delta, &at, spec)
}

/// Applies the kernel-integral Weyl action twice on an elementary vector,
/// which must recover K phi_p (w^2 = 1 projectively). The inner Kirillov
/// values are cached on the shared grid, so the double integral costs one
/// kernel evaluation per node pair.
pub fn weyl_action_twice(
    p: i32,
    param: KernelParam,
    u: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if u == 0.0 {
        return Err(Error::InvalidArgument("weyl action needs u != 0".into()));
    }
    let grid = weyl_grid(param, u.abs().max(1.0));
    let base: Result<Vec<Complex64>> = grid
        .iter()
        .map(|&(lambda, _)| kirillov_phi(p, param, lambda, spec))
        .collect();
    let base = base?;
    // first application on every grid node, then the outer kernel integral
    let mut first = Vec::with_capacity(grid.len());
    for &(lambda_out, _) in &grid {
        first.push(kernel_sum(param, lambda_out, &grid, &base)?);
    }
    kernel_sum(param, u, &grid, &first)
}

// --- Gram matrices -----------------------------------------------------------

/// Numerically integrated Gram matrix of the Kirillov images of phi_p with
/// deviation statistics against the exact unitarity target.
#[derive(Debug, Clone)]
pub struct GramReport {
    pub pmax: i32,
    pub labels: Vec<i32>,
    /// row-major normalized Gram matrix (expected = identity)
    pub matrix: Vec<Complex64>,
    pub max_offdiag: f64,
    pub max_diag_dev: f64,
}

/// Gram matrix over |p|, |q| <= pmax (principal) or k <= p, q <= k + pmax
/// (discrete, normalized by the D_k norms Gamma(p-k+1)/Gamma(p+k)).
pub fn gram_matrix(param: KernelParam, pmax: i32, spec: &QuadratureSpec) -> Result<GramReport> {
    if pmax < 0 {
        return Err(Error::InvalidArgument("gram needs pmax >= 0".into()));
    }
    let labels: Vec<i32> = match param {
        KernelParam::Nu(nu) => {
            if nu.re.abs() > 1e-12 {
                return Err(Error::InvalidArgument(
                    "gram unitarity target holds on the principal series nu = i kappa".into(),
                ));
            }
            (-pmax..=pmax).collect()
        }
        KernelParam::Discrete(k) => (k..=k + pmax).collect(),
    };
    let nu_im = param.nu().im.abs();
    let (lo, hi) = match param {
        KernelParam::Discrete(_) => (-8, 4),
        KernelParam::Nu(_) => (-30, 4),
    };
    let nodes = (10.0 + 2.5 * nu_im).ceil() as usize;
    let grid = log_grid(lo, hi, nodes);
    let n = labels.len();
    // K phi_p on the grid, both signs
    let mut kpos = vec![vec![Complex64::new(0.0, 0.0); grid.len()]; n];
    let mut kneg = vec![vec![Complex64::new(0.0, 0.0); grid.len()]; n];
    let negative_side = matches!(param, KernelParam::Nu(_));
    for (pi, &p) in labels.iter().enumerate() {
        for (gi, &(uu, _)) in grid.iter().enumerate() {
            kpos[pi][gi] = kirillov_phi(p, param, uu, spec)?;
            if negative_side {
                kneg[pi][gi] = kirillov_phi(p, param, -uu, spec)?;
            }
        }
    }
    // normalization: identity target
    let norms: Vec<f64> = labels
        .iter()
        .map(|&p| match param {
            KernelParam::Nu(_) => 1.0,
            KernelParam::Discrete(k) => {
                // pi^{2k-1} Gamma(p-k+1)/Gamma(p+k)
                let g1 = gamma(Complex64::new((p - k + 1) as f64, 0.0)).unwrap().re;
                let g2 = gamma(Complex64::new((p + k) as f64, 0.0)).unwrap().re;
                PI.powi(2 * k - 1) * g1 / g2
            }
        })
        .collect();
    let mut matrix = vec![Complex64::new(0.0, 0.0); n * n];
    for a in 0..n {
        for b in a..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (gi, &(_, w)) in grid.iter().enumerate() {
                acc += w * (kpos[a][gi] * kpos[b][gi].conj() + kneg[a][gi] * kneg[b][gi].conj());
            }
            let entry = acc / PI / (norms[a] * norms[b]).sqrt();
            matrix[a * n + b] = entry;
            matrix[b * n + a] = entry.conj();
        }
    }
    let mut max_offdiag = 0.0f64;
    let mut max_diag_dev = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            let e = matrix[a * n + b];
            if a == b {
                max_diag_dev = max_diag_dev.max((e - 1.0).norm());
            } else {
                max_offdiag = max_offdiag.max(e.norm());
            }
        }
    }
    Ok(GramReport {
        pmax,
        labels,
        matrix,
        max_offdiag,
        max_diag_dev,
    })
}

// --- Whittaker product integrals ----------------------------------------------

use crate::jacquet::whittaker_origin_series;

/// Whittaker product integral int_0^inf W_{alpha,mu} W_{beta,mu} dy/y as a
/// (numeric, closed-form) pair. The numeric route handles the y -> 0 endpoint
/// with the near-origin expansion; the closed form is the Gamma/digamma
/// evaluation, symmetric in alpha and beta.
pub fn whittaker_product_integral(
    alpha: Complex64,
    mu: Complex64,
    beta: Complex64,
    spec: &QuadratureSpec,
) -> Result<(Complex64, Complex64)> {
    if mu.re.abs() >= 0.5 {
        return Err(Error::InvalidArgument("product integral needs |Re mu| < 1/2".into()));
    }
    if mu.norm() < 0.05 {
        return Err(Error::OutOfEnvelope {
            what: "whittaker product",
            detail: format!("|mu| = {} < 0.05: the mu -> 0 limit is untested", mu.norm()),
        });
    }
    let closed = if (alpha - beta).norm() < 1e-12 {
        // pi / sin(2 pi mu) * [psi(1/2-a+mu) - psi(1/2-a-mu)] / (Gamma(1/2-a+mu) Gamma(1/2-a-mu))
        let psi_d = digamma(0.5 - alpha + mu)? - digamma(0.5 - alpha - mu)?;
        PI / (2.0 * PI * mu).sin() * psi_d
            * crate::specfun::recip_gamma(0.5 - alpha + mu)
            * crate::specfun::recip_gamma(0.5 - alpha - mu)
    } else {
        let t1 = crate::specfun::recip_gamma(0.5 - alpha + mu)
            * crate::specfun::recip_gamma(0.5 - beta - mu);
        let t2 = crate::specfun::recip_gamma(0.5 - alpha - mu)
            * crate::specfun::recip_gamma(0.5 - beta + mu);
        PI / ((alpha - beta) * (2.0 * PI * mu).sin()) * (t1 - t2)
    };
    // numeric route
    let y0: f64 = 0.08;
    let sa = whittaker_origin_series(alpha, mu, 10)?;
    let sb = whittaker_origin_series(beta, mu, 10)?;
    let mut head = Complex64::new(0.0, 0.0);
    for &(ea, ca) in &sa {
        for &(eb, cb) in &sb {
            let e = ea + eb;
            head += ca * cb * (e * y0.ln()).exp() / e;
        }
    }
    let inner = QuadratureSpec {
        rel_tol: spec.rel_tol.min(1e-11),
        ..*spec
    };
    let wa = |y: f64| whittaker_w(alpha, mu, y, &inner);
    let wb = |y: f64| whittaker_w(beta, mu, y, &inner);
    let f = |y: f64| -> Complex64 {
        match (wa(y), wb(y)) {
            (Ok(a), Ok(b)) => a * b / y,
            _ => Complex64::new(0.0, 0.0),
        }
    };
    let mid = integrate_finite(&f, y0, 8.0, 1e-11, 1e-9, spec.max_panels)?;
    let tail = integrate_finite(&f, 8.0, 70.0, 1e-11, 1e-9, spec.max_panels)?;
    Ok((head + mid.value + tail.value, closed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::with_tol(1e-11, 1e-11)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn discrete_kernel_vanishes_on_negative_axis() {
        assert_eq!(bessel_kernel(KernelParam::Discrete(6), -2.0).unwrap(), 0.0);
        let v = kirillov_phi(6, KernelParam::Discrete(6), -1.0, &spec()).unwrap();
        assert_eq!(v.norm(), 0.0);
        assert!(kirillov_phi(4, KernelParam::Discrete(6), 1.0, &spec()).is_err());
    }

    #[test]
    fn discrete_closed_form_matches_jacquet_quadrature() {
        // dual route: the Laguerre closed form against the contour integral
        // at arguments where the quadrature keeps full relative accuracy
        for &(p, k, u) in &[(6, 6, 0.8), (7, 6, 1.1), (9, 6, 0.6)] {
            let closed = kirillov_phi(p, KernelParam::Discrete(k), u, &spec()).unwrap();
            let nu = Complex64::new(k as f64 - 0.5, 0.0);
            let quad = jacquet_phi_radial(p, nu, 1, u, &spec()).unwrap();
            assert!(
                (closed - quad).norm() / (1.0 + quad.norm()) < 1e-9,
                "p={p} u={u}: closed {closed} quad {quad}"
            );
        }
    }

    #[test]
    fn kirillov_phi_matches_k_bessel_closed_form() {
        // principal nu = 0.5i, p = 0, u = 1
        let nu = c(0.0, 0.5);
        let v = kirillov_phi(0, KernelParam::Nu(nu), 1.0, &spec()).unwrap();
        let kb = bessel(BesselKind::K, nu, 2.0 * PI).unwrap();
        let closed = 2.0 * ((0.5 + nu) * PI.ln()).exp() / gamma(nu + 0.5).unwrap() * kb;
        assert!((v - closed).norm() / closed.norm() < 1e-9);
        // sign relation: K phi_p(-u) = A^- phi_p(a[u])
        let neg = kirillov_phi(1, KernelParam::Nu(nu), -0.8, &spec()).unwrap();
        let direct = jacquet_phi_radial(1, nu, -1, 0.8, &spec()).unwrap();
        assert!((neg - direct).norm() < 1e-12 * (1.0 + direct.norm()));
    }

    #[test]
    fn kernel_evenness_in_nu() {
        for &u in &[1.3, -0.7] {
            let a = bessel_kernel(KernelParam::Nu(c(0.0, 0.4)), u).unwrap();
            let b = bessel_kernel(KernelParam::Nu(c(0.0, -0.4)), u).unwrap();
            assert!((a - b).abs() < 1e-10 * (1.0 + a.abs()), "u={u}: {a} vs {b}");
        }
    }

    #[test]
    fn kernel_near_zero_order_limit() {
        // continuity across the removable point nu = 0
        let x = 1.1;
        let a = bessel_kernel(KernelParam::Nu(c(0.0, 1e-8)), x).unwrap();
        let b = bessel_kernel(KernelParam::Nu(c(0.0, 0.01)), x).unwrap();
        assert!((a - b).abs() < 1e-3 * (1.0 + a.abs()));
        // and the negative side with K_0
        let an = bessel_kernel(KernelParam::Nu(c(0.0, 1e-8)), -x).unwrap();
        let bn = bessel_kernel(KernelParam::Nu(c(0.0, 0.01)), -x).unwrap();
        assert!((an - bn).abs() < 1e-3 * (1.0 + an.abs()));
        // half-integer principal parameters are rejected
        assert!(bessel_kernel(KernelParam::Nu(c(1.0, 0.0)), 1.0).is_err());
        assert!(bessel_kernel(KernelParam::Nu(c(0.5, 0.0)), 1.0).is_err());
    }

    #[test]
    fn gamma_p_reflection_of_l() {
        // L_p(s) = (-1)^p L_{-p}(1-s) at p = 1, s = 0.4, nu = 0.2
        let s = c(0.4, 0.0);
        let nu = c(0.2, 0.0);
        let a = l_p(1, s, nu, &spec()).unwrap();
        let b = l_p(-1, 1.0 - s, nu, &spec()).unwrap();
        assert!((a + b).norm() / (1.0 + a.norm()) < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn gamma_p_direct_agrees_with_strip_route() {
        let s = c(0.6, 0.0);
        let nu = c(0.2, 0.0);
        let a = gamma_p(0, s, nu, &spec()).unwrap();
        let b = gamma_p_direct(0, s, nu, &spec()).unwrap();
        assert!((a - b).norm() / (1.0 + a.norm()) < 1e-7, "{a} vs {b}");
    }

    #[test]
    fn gamma_p_p0_matches_k_bessel_mellin() {
        // Gamma_0(s) = 2 pi^{1/2+nu}/Gamma(1/2+nu) * Mellin of y^{1/2} K_nu(2 pi y)
        //            = 2 pi^{1/2+nu}/Gamma(1/2+nu) * 2^{s-2} (2 pi)^{-s} G((s+nu)/2) G((s-nu)/2)
        let s = c(0.5, 0.3);
        let nu = c(0.0, 0.4);
        let lhs = gamma_p(0, s, nu, &spec()).unwrap();
        let rhs = 2.0 * ((0.5 + nu) * PI.ln()).exp() / gamma(0.5 + nu).unwrap()
            * ((s - 2.0) * (2.0f64).ln() - s * (2.0 * PI).ln()).exp()
            * gamma((s + nu) / 2.0).unwrap()
            * gamma((s - nu) / 2.0).unwrap();
        assert!((lhs - rhs).norm() / rhs.norm() < 1e-8, "{lhs} vs {rhs}");
    }

    #[test]
    fn functional_equation_samples() {
        let q = spec();
        assert!(functional_equation_residual(0, c(0.5, 0.0), c(0.0, 0.3), &q).unwrap() < 1e-6);
        assert!(functional_equation_residual(2, c(0.4, 0.7), c(0.2, 0.0), &q).unwrap() < 1e-6);
        // s = 1/2 is a fixed point of s -> 1-s
        assert!(functional_equation_residual(1, c(0.5, 0.0), c(0.0, 0.9), &q).unwrap() < 1e-6);
    }

    #[test]
    fn recursion_samples() {
        let q = spec();
        assert!(gamma_p_recursion_residual(0, c(0.7, 0.0), c(0.0, 0.3), &q).unwrap() < 1e-7);
        assert!(gamma_p_recursion_residual(3, c(0.6, 0.0), c(0.0, 0.1), &q).unwrap() < 1e-7);
        assert!(gamma_p_recursion_residual(0, c(0.3, 0.0), c(0.3, 0.0), &q).is_err());
    }

    #[test]
    fn mellin_pairs_at_sample_point() {
        let q = spec();
        let r_pos = mellin_pair_residual(c(0.2, 0.0), c(0.0, 0.1), true, &q).unwrap();
        assert!(r_pos < 1e-7, "positive-side residual {r_pos}");
        let r_neg = mellin_pair_residual(c(0.2, 0.0), c(0.0, 0.1), false, &q).unwrap();
        assert!(r_neg < 1e-7, "negative-side residual {r_neg}");
    }

    #[test]
    fn gram_small_principal() {
        let rep = gram_matrix(KernelParam::Nu(c(0.0, 0.5)), 1, &spec()).unwrap();
        assert!(rep.max_diag_dev < 1e-6, "diag dev {}", rep.max_diag_dev);
        assert!(rep.max_offdiag < 1e-6, "offdiag {}", rep.max_offdiag);
        // Hermitian within 1e-10
        let n = rep.labels.len();
        for a in 0..n {
            for b in 0..n {
                let d = (rep.matrix[a * n + b] - rep.matrix[b * n + a].conj()).norm();
                assert!(d < 1e-10);
            }
        }
    }

    #[test]
    fn whittaker_products() {
        let q = spec();
        // alpha = 1, beta = 0, mu = 0.3i
        let (num, closed) =
            whittaker_product_integral(c(1.0, 0.0), c(0.0, 0.3), c(0.0, 0.0), &q).unwrap();
        assert!(
            (num - closed).norm() < 1e-6 * (1.0 + closed.norm()),
            "numeric {num} closed {closed}"
        );
        // diagonal digamma form at mu = 0.25
        let (num2, closed2) =
            whittaker_product_integral(c(0.0, 0.0), c(0.25, 0.0), c(0.0, 0.0), &q).unwrap();
        assert!(
            (num2 - closed2).norm() < 1e-6 * (1.0 + closed2.norm()),
            "numeric {num2} closed {closed2}"
        );
        // closed form symmetric under alpha <-> beta
        let (_, cab) =
            whittaker_product_integral(c(1.0, 0.0), c(0.0, 0.3), c(2.0, 0.0), &q).unwrap();
        let (_, cba) =
            whittaker_product_integral(c(2.0, 0.0), c(0.0, 0.3), c(1.0, 0.0), &q).unwrap();
        assert!((cab - cba).norm() < 1e-12 * (1.0 + cab.norm()));
        // mu near 0 is rejected, not silently wrong
        assert!(whittaker_product_integral(c(1.0, 0.0), c(0.0, 0.01), c(0.0, 0.0), &q).is_err());
    }

    #[test]
    fn weyl_action_direct_vs_kernel() {
        let nu = c(0.0, 0.3);
        let vec = KirillovVector::new(vec![(0, c(1.0, 0.0))], KernelParam::Nu(nu)).unwrap();
        let q = spec();
        let u = 1.0;
        let via_kernel = weyl_action(&vec, u, &q).unwrap();
        let via_direct = weyl_action_direct(0, KernelParam::Nu(nu), u, &q).unwrap();
        assert!(
            (via_kernel - via_direct).norm() / (1.0 + via_direct.norm()) < 1e-4,
            "kernel {via_kernel} direct {via_direct}"
        );
    }

    #[test]
    fn discrete_weyl_kernel_zero_on_negative() {
        // j vanishes for u<0 in the discrete series, so the action of w on a
        // positively-supported vector stays supported on u > 0
        let vec = KirillovVector::new(vec![(6, c(1.0, 0.0))], KernelParam::Discrete(6)).unwrap();
        let v = weyl_action(&vec, -1.5, &spec()).unwrap();
        assert_eq!(v.norm(), 0.0);
    }
}
