//! The Jacquet integral applied to the elementary vectors phi_p, yielding
//! Whittaker functions.
//!
//! The theta and x dependence of A^delta phi_p is an exact exponential factor,
//! so all quadrature runs at x = 0, theta = 0 on the radial integral
//!
//! ```text
//! I(p, nu, delta, y) = int e(y xi) (xi^2+1)^{-nu-1/2} ((xi+i)/(xi-i))^{delta p} dxi.
//! ```
//!
//! For moderate and large y the line is deformed to a three-piece contour:
//! verticals Re xi = -T and Re xi = +T rising to +i*infinity (where e(y xi)
//! decays exponentially) joined by the horizontal segment Im xi = c. The
//! branch of (xi^2+1)^{-nu-1/2} is fixed by principal logs of (1 + i xi) and
//! (1 - i xi), whose cuts leave the contour region. For small y the
//! integrated-by-parts form is summed along the real line instead; it also
//! serves as an independent route for the agreement checks.

use crate::error::{Error, Result};
use crate::group::IwasawaCoords;
use crate::specfun::{gamma, integrate_real_line, QuadratureSpec};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Weight index and spectral parameter of an elementary vector
/// phi_p(g; nu) = y^{nu+1/2} e^{2 p i theta}.
#[derive(Debug, Clone, Copy)]
pub struct PhiVector {
    pub p: i32,
    pub nu: Complex64,
}

fn check_delta(delta: i32) -> Result<f64> {
    match delta {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        _ => Err(Error::InvalidArgument(format!("delta must be ±1, got {delta}"))),
    }
}

/// (xi^2 + 1)^{-nu-1/2} with the branch from principal logs of (1 ± i xi);
/// single-valued on the contour region Im xi >= 0, |Re xi| > 0 near the cut.
fn power_factor(nu: Complex64, xi: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let lp = (1.0 + i * xi).ln();
    let lm = (1.0 - i * xi).ln();
    (-(nu + 0.5) * (lp + lm)).exp()
}

fn ratio_power(xi: Complex64, dp: i32) -> Complex64 {
    if dp == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let i = Complex64::new(0.0, 1.0);
    ((xi + i) / (xi - i)).powi(dp)
}

fn e_factor(y: f64, xi: Complex64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI * y) * xi).exp()
}

/// Contour shift for the horizontal segment. Defaults to the bound-proof
/// device min(1/2, 1/(|nu|+|p|+1)); for p = 0 and large y it is raised toward
/// the branch point (strictly below 1) to keep the relative accuracy of the
/// exponentially small answer.
fn contour_height(p: i32, nu: Complex64, y: f64) -> f64 {
    let base = (1.0f64 / (nu.norm() + p.unsigned_abs() as f64 + 1.0)).min(0.5);
    if p == 0 {
        let raised = (1.0 - 3.0 / (2.0 * PI * y)).min(0.9);
        base.max(raised)
    } else {
        base
    }
}

/// Radial Jacquet integral I(p, nu, delta, y) over the deformed contour,
/// returned with the attained absolute error estimate.
fn radial_contour(
    p: i32,
    nu: Complex64,
    delta: f64,
    y: f64,
    spec: &QuadratureSpec,
) -> (Complex64, f64) {
    let dp = (delta * p as f64) as i32;
    let c = contour_height(p, nu, y);
    let t_edge = 4.0f64.max(0.5 * p.unsigned_abs() as f64 + 0.5 * nu.norm() + 2.0);
    let rel = spec.rel_tol.min(1e-11);
    let f = |xi: Complex64| e_factor(y, xi) * power_factor(nu, xi) * ratio_power(xi, dp);
    // horizontal segment at height c
    let horiz = crate::specfun::integrate_finite_soft(
        |s: f64| f(Complex64::new(s, c)),
        -t_edge,
        t_edge,
        1e-280,
        rel,
        spec.max_panels.max(6000),
    );
    // vertical legs, rising until e(y xi) has decayed; for tiny y the legs
    // carry slowly decaying logarithmic mass that the adaptive splitter
    // resolves geometrically
    let u_max = 38.0 / (2.0 * PI * y.max(1e-280));
    let legs = crate::specfun::integrate_finite_soft(
        |u: f64| f(Complex64::new(t_edge, c + u)) - f(Complex64::new(-t_edge, c + u)),
        0.0,
        u_max,
        1e-280,
        rel,
        spec.max_panels.max(6000),
    );
    (
        horiz.value + Complex64::new(0.0, 1.0) * legs.value,
        horiz.error + legs.error,
    )
}

/// Radial integral in the integrated-by-parts form: absolutely convergent on
/// the real line, the independent route for agreement checks and the default
/// for small y.
pub fn radial_ibp(p: i32, nu: Complex64, delta: i32, y: f64, spec: &QuadratureSpec) -> Result<Complex64> {
    let d = check_delta(delta)?;
    let dp = (d * p as f64) as i32;
    let rel = spec.rel_tol.min(1e-11);
    let est = integrate_real_line(
        |s: f64| {
            let xi = Complex64::new(s, 0.0);
            ((1.0 + 2.0 * nu) * xi + Complex64::new(0.0, 2.0 * d * p as f64))
                * e_factor(y, xi)
                * power_factor(nu + 1.0, xi)
                * ratio_power(xi, dp)
        },
        spec.abs_tol.min(1e-10),
        rel,
        spec.max_panels.max(20_000),
    )?;
    Ok(est.value / Complex64::new(0.0, 2.0 * PI * y))
}

/// Frobenius expansion of one Whittaker solution branch
/// y^{1/2 ± mu} (1 + c1 y + c2 y^2 + ...), as (exponent, coefficient) pairs
/// with c_n determined by the Whittaker equation recursion.
pub(crate) fn frobenius_branch(
    alpha: Complex64,
    mu: Complex64,
    plus: bool,
    terms: usize,
) -> Vec<(Complex64, Complex64)> {
    let rho = if plus { 0.5 + mu } else { 0.5 - mu };
    let two_mu = if plus { 2.0 * mu } else { -2.0 * mu };
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for nn in 1..terms {
        let n = nn as f64;
        let prev1 = coeffs[nn - 1];
        let prev2 = if nn >= 2 {
            coeffs[nn - 2]
        } else {
            Complex64::new(0.0, 0.0)
        };
        let c = (prev2 * 0.25 - alpha * prev1) / (n * (n + two_mu));
        coeffs.push(c);
    }
    coeffs
        .into_iter()
        .enumerate()
        .map(|(nn, c)| (rho + nn as f64, c))
        .collect()
}

/// W_{alpha, mu} near the origin as the standard Gamma-weighted combination
/// of the two Frobenius branches. Needs 2 mu away from the integers.
pub(crate) fn whittaker_origin_series(
    alpha: Complex64,
    mu: Complex64,
    terms: usize,
) -> Result<Vec<(Complex64, Complex64)>> {
    let a_plus = gamma(-2.0 * mu)? * crate::specfun::recip_gamma(0.5 - alpha - mu);
    let a_minus = gamma(2.0 * mu)? * crate::specfun::recip_gamma(0.5 - alpha + mu);
    let mut series = Vec::new();
    for (e, c) in frobenius_branch(alpha, mu, true, terms) {
        series.push((e, a_plus * c));
    }
    for (e, c) in frobenius_branch(alpha, mu, false, terms) {
        series.push((e, a_minus * c));
    }
    Ok(series)
}

/// Small-y route: invert the Whittaker closed form through the convergent
/// origin series. The contour picks up an e^{pi |Im nu|} factor on its legs
/// at small y, so this series is the accurate evaluator there.
fn radial_frobenius(p: i32, nu: Complex64, delta: f64, y: f64) -> Result<Complex64> {
    let alpha = Complex64::new(delta * p as f64, 0.0);
    let z = 4.0 * PI * y;
    let series = whittaker_origin_series(alpha, nu, 44)?;
    let mut w = Complex64::new(0.0, 0.0);
    for (e, c) in series {
        w += c * (e * z.ln()).exp();
    }
    // A^delta phi_p(a[y]) = (-1)^p pi^{nu+1/2} W_{delta p, nu}(4 pi y) / Gamma(delta p + nu + 1/2)
    let sign = if p.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok(sign * ((nu + 0.5) * PI.ln()).exp() * crate::specfun::recip_gamma(alpha + nu + 0.5) * w)
}

/// A^delta phi_p at a[y] (x = 0, theta = 0): y^{1/2-nu} I(p, nu, delta, y).
pub fn jacquet_phi_radial(
    p: i32,
    nu: Complex64,
    delta: i32,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let d = check_delta(delta)?;
    if !(y > 0.0) {
        return Err(Error::InvalidArgument(format!("jacquet radial needs y > 0, got {y}")));
    }
    if nu.re <= -0.5 {
        return Err(Error::OutOfEnvelope {
            what: "jacquet integral",
            detail: format!("Re nu = {} <= -1/2: use the Mellin continuation", nu.re),
        });
    }
    let two_nu_int_dist = (2.0 * nu.re - (2.0 * nu.re).round()).abs() + 2.0 * nu.im.abs();
    if y <= 0.35 && two_nu_int_dist.min((2.0 * nu).norm()) > 0.05 {
        return radial_frobenius(p, nu, d, y);
    }
    let prefactor = ((0.5 - nu) * y.ln()).exp();
    let (integral, err) = radial_contour(p, nu, d, y, spec);
    let value = prefactor * integral;
    // acceptability on the caller's scale: an exponentially negligible value
    // measured to the f64 noise floor is a valid zero-ish answer
    let scaled_err = err * prefactor.norm();
    let target = spec.abs_tol.max(spec.rel_tol * value.norm());
    if scaled_err > target * 16.0 {
        return Err(Error::QuadratureAccuracy {
            requested: target,
            attained: scaled_err,
            context: "jacquet radial contour",
        });
    }
    Ok(value)
}

/// A^delta phi_p(g; nu) at a general point: the exact factor
/// e^{2 p i theta} e(delta x) times the radial value.
pub fn jacquet_phi(
    p: i32,
    nu: Complex64,
    delta: i32,
    at: &IwasawaCoords,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let d = check_delta(delta)?;
    let radial = jacquet_phi_radial(p, nu, delta, at.y, spec)?;
    let phase = Complex64::new(0.0, 2.0 * p as f64 * at.theta + 2.0 * PI * d * at.x).exp();
    Ok(phase * radial)
}

/// W_{alpha, mu}(arg) for integer first index, recovered by inverting the
/// closed form of the Jacquet integral:
/// W_{delta p, nu}(4 pi y) = (-1)^p pi^{-nu-1/2} Gamma(delta p + nu + 1/2) A^delta phi_p(a[y]).
pub fn whittaker_w(
    alpha: Complex64,
    mu: Complex64,
    arg: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    if alpha.im.abs() > 1e-12 || (alpha.re - alpha.re.round()).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "whittaker_w needs integer first index, got {alpha}"
        )));
    }
    if !(arg > 0.0) {
        return Err(Error::InvalidArgument(format!("whittaker_w needs arg > 0, got {arg}")));
    }
    let p = alpha.re.round() as i32;
    let y = arg / (4.0 * PI);
    // Gamma pole: the Jacquet value vanishes there and the ratio is undefined
    let gval = gamma(alpha + mu + 0.5)?;
    let a = jacquet_phi_radial(p, mu, 1, y, spec)?;
    let sign = if p.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok(sign * ((-mu - 0.5) * PI.ln()).exp() * gval * a)
}

/// Normalized residual of the Whittaker-type equation satisfied by
/// b(y) = W_{delta p, nu}(4 pi |n| y) with delta = sgn n:
/// -y^2 b'' + ((2 pi n y)^2 - 4 pi n p y - kappa^2 - 1/4) b = 0,
/// where kappa^2 + 1/4 = 1/4 - nu^2.
pub fn whittaker_ode_residual(
    p: i32,
    nu: Complex64,
    n: i64,
    y: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("whittaker ODE needs n != 0".into()));
    }
    let delta = if n > 0 { 1 } else { -1 };
    let na = n.unsigned_abs() as f64;
    let tight = QuadratureSpec {
        rel_tol: spec.rel_tol.min(1e-12),
        abs_tol: spec.abs_tol.min(1e-12),
        ..*spec
    };
    let b = |yy: f64| -> Result<Complex64> {
        let arg = 4.0 * PI * na * yy;
        whittaker_w(Complex64::new((delta * p) as f64, 0.0), nu, arg, &tight)
    };
    let poly = |yy: f64| {
        Complex64::new(
            (2.0 * PI * n as f64 * yy).powi(2) - 4.0 * PI * (n as f64) * (p as f64) * yy,
            0.0,
        ) - (0.25 - nu * nu)
    };
    // local frequency sets the step: truncation ~ (h w)^6, noise ~ eps/(h w)^2.
    // Magnitudes are summed so a cancellation in the ODE coefficient cannot
    // fake a low frequency.
    let w2 = ((2.0 * PI * n as f64 * y).powi(2).abs()
        + (4.0 * PI * (n * p as i64) as f64 * y).abs()
        + (0.25 - nu * nu).norm())
        / (y * y)
        + 1.0;
    let h = (0.09 / w2.sqrt()).min(y / 8.0).min(0.05);
    // 6th-order central second derivative
    let f3 = b(y + 3.0 * h)?;
    let f2 = b(y + 2.0 * h)?;
    let f1 = b(y + h)?;
    let f0 = b(y)?;
    let fm1 = b(y - h)?;
    let fm2 = b(y - 2.0 * h)?;
    let fm3 = b(y - 3.0 * h)?;
    let d2 = ((f3 + fm3) / 90.0 - 3.0 * (f2 + fm2) / 20.0 + 1.5 * (f1 + fm1)
        - 49.0 * f0 / 18.0)
        / (h * h);
    let resid = -y * y * d2 + poly(y) * f0;
    let scale = (y * y * d2.norm()).max((poly(y) * f0).norm()) + 1e-300;
    Ok(resid.norm() / scale)
}

/// Expected norm ratio ||e^{±} f||^2 / ||f||^2 = 4 (kappa^2 + (p ± 1/2)^2)
/// on the unitary principal series nu = i kappa.
pub fn ladder_norm_ratio(p: i32, nu: Complex64, raising: bool) -> Result<f64> {
    if nu.re.abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "ladder norms hold on the principal series nu = i kappa, got {nu}"
        )));
    }
    let kappa = nu.im;
    let half = if raising { 0.5 } else { -0.5 };
    Ok(4.0 * (kappa * kappa + (p as f64 + half).powi(2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{bessel, BesselKind};

    fn spec() -> QuadratureSpec {
        QuadratureSpec::with_tol(1e-12, 1e-12)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn p0_matches_k_bessel_closed_form() {
        // A^delta phi_0(a[y]) = 2 pi^{1/2+nu} / Gamma(1/2+nu) y^{1/2} K_nu(2 pi y)
        for &(nu, y) in &[
            (c(0.0, 0.3), 1.0),
            (c(0.0, 1.0), 0.4),
            (c(0.2, 0.0), 2.0),
            (c(0.0, 3.0), 1.7),
        ] {
            let a = jacquet_phi_radial(0, nu, 1, y, &spec()).unwrap();
            let kb = bessel(BesselKind::K, nu, 2.0 * PI * y).unwrap();
            let closed = 2.0 * ((0.5 + nu) * PI.ln()).exp() / gamma(nu + 0.5).unwrap()
                * y.sqrt()
                * kb;
            assert!(
                (a - closed).norm() / closed.norm() < 1e-9,
                "nu={nu} y={y}: {a} vs {closed}"
            );
        }
    }

    #[test]
    fn x_and_theta_dependence_are_exact_characters() {
        let nu = c(0.0, 0.7);
        let at0 = IwasawaCoords::new(0.0, 1.3, 0.0).unwrap();
        let atx = IwasawaCoords::new(0.37, 1.3, 0.0).unwrap();
        for delta in [1, -1] {
            let v0 = jacquet_phi(1, nu, delta, &at0, &spec()).unwrap();
            let vx = jacquet_phi(1, nu, delta, &atx, &spec()).unwrap();
            let expect = crate::specfun::e_char(0.37 * delta as f64);
            assert!(((vx / v0) - expect).norm() < 1e-10);
            // intertwining: the theta-dependence is exactly e^{2 p i theta}
            let att = IwasawaCoords::new(0.0, 1.3, 0.9).unwrap();
            let vt = jacquet_phi(1, nu, delta, &att, &spec()).unwrap();
            assert!(((vt / v0) - c(0.0, 2.0 * 0.9).exp()).norm() < 1e-10);
        }
    }

    #[test]
    fn frobenius_and_contour_agree_at_same_point() {
        // the small-y series route against the contour route, same y
        for &(p, nu) in &[
            (0, c(0.0, 0.5)),
            (1, c(0.0, 2.0)),
            (2, c(0.0, 9.5337)),
            (0, c(0.2, 0.0)),
            (-1, c(0.0, 1.3)),
        ] {
            for &y in &[0.4, 0.55] {
                let frob = radial_frobenius(p, nu, 1.0, y).unwrap();
                let prefactor = ((0.5 - nu) * y.ln()).exp();
                let (integral, _) = radial_contour(p, nu, 1.0, y, &spec());
                let cont = prefactor * integral;
                assert!(
                    (frob - cont).norm() < 1e-9 * (1.0 + cont.norm()),
                    "p={p} nu={nu} y={y}: frobenius {frob} vs contour {cont}"
                );
            }
        }
    }

    #[test]
    fn contour_and_ibp_routes_agree() {
        for &(p, nu, y) in &[
            (0, c(0.0, 0.5), 0.8),
            (1, c(0.0, 1.0), 0.5),
            (2, c(0.1, 0.4), 1.2),
            (-1, c(0.0, 0.5), 0.7),
        ] {
            let (a, _) = radial_contour(p, nu, 1.0, y, &spec());
            let b = radial_ibp(p, nu, 1, y, &spec()).unwrap();
            assert!(
                (a - b).norm() < 1e-8 * (1.0 + a.norm()),
                "p={p} nu={nu} y={y}: contour {a} vs ibp {b}"
            );
        }
    }

    #[test]
    fn decay_envelope_at_large_y() {
        // |A^delta phi_p(a[y])| at y = 20 sits under the bound envelope
        // (|p|+|nu|+1) y^{-1/2-Re nu} exp(-y/(|nu|+|p|+1)) up to a constant
        let nu = c(0.0, 1.0);
        let v = jacquet_phi_radial(1, nu, 1, 20.0, &spec()).unwrap();
        let bound = (1.0 + nu.norm() + 1.0) * 20.0f64.powf(-0.5) * (-20.0 / (nu.norm() + 2.0)).exp();
        assert!(v.norm() < 10.0 * bound, "value {} bound {bound}", v.norm());
        // and the true decay is at the e^{-2 pi y} scale
        assert!(v.norm() < 1e-20);
        assert!(v.norm() > 0.0);
    }

    #[test]
    fn whittaker_w0_is_k_bessel() {
        // W_{0,nu}(y) = sqrt(y/pi) K_nu(y/2) at nu = 0.25, y = 3
        let nu = c(0.25, 0.0);
        let y = 3.0;
        let w = whittaker_w(c(0.0, 0.0), nu, y, &spec()).unwrap();
        let expect = (y / PI).sqrt() * bessel(BesselKind::K, nu, y / 2.0).unwrap();
        assert!(
            (w - expect).norm() / expect.norm() < 1e-8,
            "{w} vs {expect}"
        );
    }

    #[test]
    fn whittaker_realness_on_principal_series() {
        for &(p, t, y) in &[(0, 0.6, 2.0), (1, 1.2, 3.0), (2, 0.9, 1.5)] {
            let w = whittaker_w(c(p as f64, 0.0), c(0.0, t), y, &spec()).unwrap();
            assert!(
                w.im.abs() < 1e-9 * (1.0 + w.re.abs()),
                "W_{{{p},{t}i}}({y}) = {w} not real"
            );
        }
    }

    #[test]
    fn whittaker_gamma_pole_is_an_error() {
        // delta p + nu + 1/2 = 0 for p = -1, nu = 1/2
        let r = whittaker_w(c(-1.0, 0.0), c(0.5, 0.0), 2.0, &spec());
        assert!(r.is_err());
    }

    #[test]
    fn ode_residual_examples() {
        let q = spec();
        assert!(whittaker_ode_residual(0, c(0.0, 0.3), 1, 1.0, &q).unwrap() < 1e-6);
        assert!(whittaker_ode_residual(2, c(0.0, 1.0), -1, 0.5, &q).unwrap() < 1e-6);
    }

    #[test]
    fn discrete_series_whittaker_is_elementary() {
        // p = k = 6, nu = 11/2: W_{6, 11/2}(u) = u^6 e^{-u/2} exactly
        let q = spec();
        let u = 7.3;
        let w = whittaker_w(c(6.0, 0.0), c(5.5, 0.0), u, &q).unwrap();
        let expect = u.powi(6) * (-u / 2.0).exp();
        assert!(
            (w.re - expect).abs() / expect < 1e-8,
            "W = {w} vs {expect}"
        );
        assert!(whittaker_ode_residual(6, c(5.5, 0.0), 1, u / (4.0 * PI), &q).unwrap() < 1e-8);
    }

    #[test]
    fn ladder_ratios() {
        assert_eq!(ladder_norm_ratio(0, c(0.0, 0.0), true).unwrap(), 1.0);
        let kappa = 9.5337;
        let r = ladder_norm_ratio(0, c(0.0, kappa), true).unwrap();
        assert!((r - 4.0 * (kappa * kappa + 0.25)).abs() < 1e-12);
        // symmetry: ratio(p, +) = ratio(-p, -)
        for p in [-3, 0, 2, 5] {
            let a = ladder_norm_ratio(p, c(0.0, 2.0), true).unwrap();
            let b = ladder_norm_ratio(-p, c(0.0, 2.0), false).unwrap();
            assert_eq!(a, b);
        }
        assert!(ladder_norm_ratio(1, c(0.3, 0.0), true).is_err());
    }

    #[test]
    fn small_y_bound_shape() {
        // |A phi_p(a[y])| <= C (|p|+|nu|+1) y^{1/2-|Re nu|} |log y| for y <= 1;
        // fit C over a grid and require it stays modest
        let nu = c(0.0, 0.8);
        let mut cmax: f64 = 0.0;
        for &y in &[0.01, 0.05, 0.1, 0.3, 0.7] {
            let v = jacquet_phi_radial(1, nu, 1, y, &spec()).unwrap().norm();
            let envelope = (1.0 + nu.norm() + 1.0) * y.sqrt() * y.ln().abs().max(0.5);
            cmax = cmax.max(v / envelope);
        }
        assert!(cmax < 20.0, "fitted constant {cmax}");
    }

    #[test]
    fn preconditions() {
        assert!(jacquet_phi_radial(0, c(0.0, 0.5), 2, 1.0, &spec()).is_err());
        assert!(jacquet_phi_radial(0, c(-0.6, 0.0), 1, 1.0, &spec()).is_err());
        assert!(whittaker_w(c(0.5, 0.0), c(0.0, 0.5), 1.0, &spec()).is_err());
    }
}
