//! Left-invariant differential operators on G applied to caller-supplied
//! smooth functions through controlled finite differences.
//!
//! The coordinate expressions at g = n[x] a[y] k[theta]:
//!
//! ```text
//! x1 = y cos(2 theta) dx + y sin(2 theta) dy + sin^2(theta) dtheta
//! x2 = -2 y sin(2 theta) dx + 2 y cos(2 theta) dy + sin(2 theta) dtheta
//! x3 = dtheta
//! e+ = e^{ 2 i theta} ( 2 i y dx + 2 y dy - i dtheta)
//! e- = e^{-2 i theta} (-2 i y dx + 2 y dy + i dtheta)
//! Omega = -y^2 (dxx + dyy) + y dx dtheta
//! ```
//!
//! together with the operator-algebra forms of the Casimir element used by
//! the consistency checker.

use crate::error::{Error, Result};
use crate::group::{iwasawa_decompose, GroupElement, IwasawaCoords};
use num_complex::Complex64;
use std::sync::Arc;

type Eval = Arc<dyn Fn(f64, f64, f64) -> Complex64 + Send + Sync>;

/// A smooth function on G in Iwasawa coordinates, with hints controlling the
/// finite-difference machinery.
#[derive(Clone)]
pub struct JetFunction {
    eval: Eval,
    /// highest derivative order the evaluator supports
    pub smoothness_hint: u32,
    /// characteristic length for finite-difference steps
    pub scale_hint: f64,
}

impl JetFunction {
    /// Wraps an evaluator after a sampled check that it has period pi in
    /// theta.
    pub fn new<F>(eval: F, smoothness_hint: u32, scale_hint: f64) -> Result<Self>
    where
        F: Fn(f64, f64, f64) -> Complex64 + Send + Sync + 'static,
    {
        let jet = JetFunction {
            eval: Arc::new(eval),
            smoothness_hint,
            scale_hint,
        };
        for &(x, y, th) in &[(0.3, 1.2, 0.7), (-1.1, 0.4, 2.3), (2.0, 3.5, 0.1)] {
            let a = jet.value(x, y, th);
            let b = jet.value(x, y, th + std::f64::consts::PI);
            if (a - b).norm() > 1e-8 * (1.0 + a.norm()) {
                return Err(Error::InvalidArgument(
                    "JetFunction evaluator is not pi-periodic in theta".into(),
                ));
            }
        }
        Ok(jet)
    }

    pub fn value(&self, x: f64, y: f64, theta: f64) -> Complex64 {
        (self.eval)(x, y, theta)
    }

    pub fn value_at(&self, at: &IwasawaCoords) -> Complex64 {
        (self.eval)(at.x, at.y, at.theta)
    }
}

/// The elementary vector phi_p(g; nu) = y^{nu + 1/2} e^{2 p i theta} as a jet.
pub fn phi_p_jet(p: i32, nu: Complex64) -> JetFunction {
    JetFunction {
        eval: Arc::new(move |_x, y: f64, th: f64| {
            ((nu + 0.5) * y.ln()).exp() * Complex64::new(0.0, 2.0 * p as f64 * th).exp()
        }),
        smoothness_hint: 8,
        scale_hint: 1.0,
    }
}

/// Left-invariant operators with a tabulated coordinate form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LieOperator {
    X1,
    X2,
    X3,
    W,
    Eplus,
    Eminus,
    Casimir,
}

/// Finite-difference policy: step (relative to the jet's scale hint), stencil
/// order, optional Richardson extrapolation.
#[derive(Debug, Clone, Copy)]
pub struct FiniteDifferenceSpec {
    pub step: f64,
    pub order: u32,
    pub richardson: bool,
}

impl FiniteDifferenceSpec {
    pub fn new(step: f64, order: u32, richardson: bool) -> Result<Self> {
        if !(1e-8..=1e-1).contains(&step) {
            return Err(Error::InvalidArgument(format!(
                "finite-difference step {step:e} outside [1e-8, 1e-1]"
            )));
        }
        if order != 2 && order != 4 {
            return Err(Error::InvalidArgument(format!(
                "stencil order must be 2 or 4, got {order}"
            )));
        }
        Ok(FiniteDifferenceSpec {
            step,
            order,
            richardson,
        })
    }
}

impl Default for FiniteDifferenceSpec {
    fn default() -> Self {
        FiniteDifferenceSpec {
            step: 1e-4,
            order: 4,
            richardson: false,
        }
    }
}

#[derive(Clone, Copy)]
enum Axis {
    X,
    Y,
    Theta,
}

fn shift(axis: Axis, x: f64, y: f64, th: f64, d: f64) -> (f64, f64, f64) {
    match axis {
        Axis::X => (x + d, y, th),
        Axis::Y => (x, y + d, th),
        Axis::Theta => (x, y, th + d),
    }
}

fn partial(
    f: &dyn Fn(f64, f64, f64) -> Complex64,
    axis: Axis,
    x: f64,
    y: f64,
    th: f64,
    h: f64,
    order: u32,
) -> Complex64 {
    let h = match axis {
        Axis::Y => h.min(y / 8.0),
        _ => h,
    };
    let ev = |d: f64| {
        let (a, b, c) = shift(axis, x, y, th, d);
        f(a, b, c)
    };
    if order == 2 {
        (ev(h) - ev(-h)) / (2.0 * h)
    } else {
        (-ev(2.0 * h) + 8.0 * ev(h) - 8.0 * ev(-h) + ev(-2.0 * h)) / (12.0 * h)
    }
}

fn partial2(
    f: &dyn Fn(f64, f64, f64) -> Complex64,
    axis: Axis,
    x: f64,
    y: f64,
    th: f64,
    h: f64,
    order: u32,
) -> Complex64 {
    let h = match axis {
        Axis::Y => h.min(y / 8.0),
        _ => h,
    };
    let ev = |d: f64| {
        let (a, b, c) = shift(axis, x, y, th, d);
        f(a, b, c)
    };
    if order == 2 {
        (ev(h) - 2.0 * ev(0.0) + ev(-h)) / (h * h)
    } else {
        (-ev(2.0 * h) + 16.0 * ev(h) - 30.0 * ev(0.0) + 16.0 * ev(-h) - ev(-2.0 * h))
            / (12.0 * h * h)
    }
}

fn mixed_x_theta(
    f: &dyn Fn(f64, f64, f64) -> Complex64,
    x: f64,
    y: f64,
    th: f64,
    h: f64,
    order: u32,
) -> Complex64 {
    let g = |xx: f64, yy: f64, tt: f64| partial(f, Axis::X, xx, yy, tt, h, order);
    partial(&g, Axis::Theta, x, y, th, h, order)
}

/// First-order operator coefficients (a, b, c) in L = a dx + b dy + c dtheta.
fn coeffs(op: LieOperator, y: f64, th: f64) -> Option<[Complex64; 3]> {
    let r = |v: f64| Complex64::new(v, 0.0);
    match op {
        LieOperator::X1 => Some([
            r(y * (2.0 * th).cos()),
            r(y * (2.0 * th).sin()),
            r(th.sin() * th.sin()),
        ]),
        LieOperator::X2 => Some([
            r(-2.0 * y * (2.0 * th).sin()),
            r(2.0 * y * (2.0 * th).cos()),
            r((2.0 * th).sin()),
        ]),
        LieOperator::X3 | LieOperator::W => Some([r(0.0), r(0.0), r(1.0)]),
        LieOperator::Eplus => {
            let ph = Complex64::new(0.0, 2.0 * th).exp();
            Some([
                ph * Complex64::new(0.0, 2.0 * y),
                ph * 2.0 * y,
                ph * Complex64::new(0.0, -1.0),
            ])
        }
        LieOperator::Eminus => {
            let ph = Complex64::new(0.0, -2.0 * th).exp();
            Some([
                ph * Complex64::new(0.0, -2.0 * y),
                ph * 2.0 * y,
                ph * Complex64::new(0.0, 1.0),
            ])
        }
        LieOperator::Casimir => None,
    }
}

fn first_order_value(
    op: LieOperator,
    f: &dyn Fn(f64, f64, f64) -> Complex64,
    x: f64,
    y: f64,
    th: f64,
    h: f64,
    order: u32,
) -> Complex64 {
    let [a, b, c] = coeffs(op, y, th).expect("first-order operator");
    let mut out = Complex64::new(0.0, 0.0);
    if a.norm() > 0.0 {
        out += a * partial(f, Axis::X, x, y, th, h, order);
    }
    if b.norm() > 0.0 {
        out += b * partial(f, Axis::Y, x, y, th, h, order);
    }
    if c.norm() > 0.0 {
        out += c * partial(f, Axis::Theta, x, y, th, h, order);
    }
    out
}

fn casimir_coordinate_value(
    f: &dyn Fn(f64, f64, f64) -> Complex64,
    x: f64,
    y: f64,
    th: f64,
    h: f64,
    order: u32,
) -> Complex64 {
    let dxx = partial2(f, Axis::X, x, y, th, h, order);
    let dyy = partial2(f, Axis::Y, x, y, th, h, order);
    let dxt = mixed_x_theta(f, x, y, th, h, order);
    -y * y * (dxx + dyy) + y * dxt
}

fn richardson_wrap<G: Fn(f64) -> Complex64>(
    g: G,
    h: f64,
    order: u32,
    richardson: bool,
) -> Complex64 {
    if !richardson {
        return g(h);
    }
    let factor = 2.0f64.powi(order as i32);
    (factor * g(h / 2.0) - g(h)) / (factor - 1.0)
}

/// Apply a tabulated operator to a jet at a point.
pub fn apply(
    op: LieOperator,
    f: &JetFunction,
    at: &IwasawaCoords,
    fd: &FiniteDifferenceSpec,
) -> Result<Complex64> {
    let needed = if matches!(op, LieOperator::Casimir) { 2 } else { 1 };
    if f.smoothness_hint < needed {
        return Err(Error::InvalidArgument(format!(
            "operator {op:?} needs {needed} derivatives, jet supports {}",
            f.smoothness_hint
        )));
    }
    let h0 = fd.step * f.scale_hint;
    let eval = f.eval.clone();
    let g: &dyn Fn(f64, f64, f64) -> Complex64 = &move |a, b, c| eval(a, b, c);
    let (x, y, th) = (at.x, at.y, at.theta);
    Ok(match op {
        LieOperator::Casimir => richardson_wrap(
            |h| casimir_coordinate_value(g, x, y, th, h, fd.order),
            h0,
            fd.order,
            fd.richardson,
        ),
        first => richardson_wrap(
            |h| first_order_value(first, g, x, y, th, h, fd.order),
            h0,
            fd.order,
            fd.richardson,
        ),
    })
}

/// d/dt at t = 0 of f(g exp(X_j t)) using the exact one-parameter subgroups
/// exp(X_1 t) = n[t], exp(X_2 t) = a[e^{2t}], exp(X_3 t) = k[t]. Serves as an
/// independent oracle for [`apply`].
pub fn apply_by_right_translation(
    j: u8,
    f: &JetFunction,
    g: &GroupElement,
    fd: &FiniteDifferenceSpec,
) -> Result<Complex64> {
    if f.smoothness_hint < 1 {
        return Err(Error::InvalidArgument(
            "right-translation derivative needs one derivative".into(),
        ));
    }
    let curve = |t: f64| -> Result<GroupElement> {
        Ok(match j {
            1 => g.mul(&GroupElement::n(t)),
            2 => g.mul(&GroupElement::a_diag((2.0 * t).exp())?),
            3 => g.mul(&GroupElement::k(t)),
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "right-translation direction must be 1, 2, or 3, got {j}"
                )))
            }
        })
    };
    let value = |t: f64| -> Result<Complex64> {
        let co = iwasawa_decompose(&curve(t)?);
        Ok(f.value(co.x, co.y, co.theta))
    };
    let h0 = fd.step * f.scale_hint;
    let diff = |h: f64| -> Result<Complex64> {
        Ok(if fd.order == 2 {
            (value(h)? - value(-h)?) / (2.0 * h)
        } else {
            (-value(2.0 * h)? + 8.0 * value(h)? - 8.0 * value(-h)? + value(-2.0 * h)?)
                / (12.0 * h)
        })
    };
    if fd.richardson {
        let p = 2.0f64.powi(fd.order as i32);
        Ok((p * diff(h0 / 2.0)? - diff(h0)?) / (p - 1.0))
    } else {
        diff(h0)
    }
}

/// The tabulated commutator [i, j] as a linear combination of operators.
fn commutator_table(i: LieOperator, j: LieOperator) -> Option<Vec<(LieOperator, Complex64)>> {
    use LieOperator::*;
    let r = |v: f64| Complex64::new(v, 0.0);
    let im = |v: f64| Complex64::new(0.0, v);
    if i == j {
        return Some(vec![]);
    }
    let direct: Option<Vec<(LieOperator, Complex64)>> = match (i, j) {
        (X1, X2) => Some(vec![(X1, r(-2.0))]),
        (X1, X3) => Some(vec![(X2, r(-1.0))]),
        (X2, X3) => Some(vec![(X1, r(4.0)), (X3, r(-2.0))]),
        (W, Eplus) => Some(vec![(Eplus, im(2.0))]),
        (W, Eminus) => Some(vec![(Eminus, im(-2.0))]),
        (Eplus, Eminus) => Some(vec![(W, im(-4.0))]),
        _ => None,
    };
    if let Some(v) = direct {
        return Some(v);
    }
    // swapped pair: negate
    match (j, i) {
        (X1, X2) | (X1, X3) | (X2, X3) | (W, Eplus) | (W, Eminus) | (Eplus, Eminus) => {
            commutator_table(j, i).map(|v| v.into_iter().map(|(op, c)| (op, -c)).collect())
        }
        _ => None,
    }
}

fn nested_value(
    outer: LieOperator,
    inner: LieOperator,
    f: &JetFunction,
    x: f64,
    y: f64,
    th: f64,
    h: f64,
    order: u32,
) -> Complex64 {
    let eval = f.eval.clone();
    let base = move |a: f64, b: f64, c: f64| eval(a, b, c);
    let mid = |a: f64, b: f64, c: f64| first_order_value(inner, &base, a, b, c, h, order);
    first_order_value(outer, &mid, x, y, th, h, order)
}

/// Normalized residual of ([i, j] - tabulated) f at a point.
pub fn commutator_residual(
    i: LieOperator,
    j: LieOperator,
    f: &JetFunction,
    at: &IwasawaCoords,
    fd: &FiniteDifferenceSpec,
) -> Result<f64> {
    if matches!(i, LieOperator::Casimir) || matches!(j, LieOperator::Casimir) {
        return Err(Error::InvalidArgument(
            "commutators are tabulated on first-order generators only".into(),
        ));
    }
    let expected = commutator_table(i, j).ok_or_else(|| {
        Error::InvalidArgument(format!("commutator pair ({i:?}, {j:?}) not tabulated"))
    })?;
    if f.smoothness_hint < 2 {
        return Err(Error::InvalidArgument(
            "commutator evaluation needs two derivatives".into(),
        ));
    }
    let h = fd.step * f.scale_hint;
    let (x, y, th) = (at.x, at.y, at.theta);
    let ij = nested_value(i, j, f, x, y, th, h, fd.order);
    let ji = nested_value(j, i, f, x, y, th, h, fd.order);
    let mut want = Complex64::new(0.0, 0.0);
    for (op, c) in expected {
        want += c * apply(op, f, at, fd)?;
    }
    let fval = f.value(x, y, th);
    Ok((ij - ji - want).norm() / (1.0 + fval.norm()))
}

/// Max pairwise discrepancy of the Casimir value computed three ways: the
/// x-basis quadratic form, the Maass-operator form, and the coordinate form.
pub fn casimir_consistency(
    f: &JetFunction,
    at: &IwasawaCoords,
    fd: &FiniteDifferenceSpec,
) -> Result<f64> {
    if f.smoothness_hint < 4 {
        return Err(Error::InvalidArgument(
            "Casimir consistency needs a 4-times differentiable jet".into(),
        ));
    }
    use LieOperator::*;
    let h = fd.step * f.scale_hint;
    let (x, y, th) = (at.x, at.y, at.theta);
    // route 1: -x1^2 - 1/4 x2^2 + 1/2 (x1 x3 + x3 x1)
    let via_basis = -nested_value(X1, X1, f, x, y, th, h, fd.order)
        - 0.25 * nested_value(X2, X2, f, x, y, th, h, fd.order)
        + 0.5 * nested_value(X1, X3, f, x, y, th, h, fd.order)
        + 0.5 * nested_value(X3, X1, f, x, y, th, h, fd.order);
    // route 2: -1/4 e+ e- + 1/4 w^2 - i/2 w
    let via_maass = -0.25 * nested_value(Eplus, Eminus, f, x, y, th, h, fd.order)
        + 0.25 * nested_value(W, W, f, x, y, th, h, fd.order)
        - Complex64::new(0.0, 0.5) * apply(W, f, at, fd)?;
    // route 3: coordinates
    let via_coords = apply(Casimir, f, at, fd)?;
    let scale = 1.0 + via_coords.norm();
    let d1 = (via_basis - via_maass).norm();
    let d2 = (via_basis - via_coords).norm();
    let d3 = (via_maass - via_coords).norm();
    Ok(d1.max(d2).max(d3) / scale)
}

/// Seeded family of smooth pi-periodic test functions: Gaussian windows in
/// log y times sinusoids in x times e^{2 p i theta}.
pub fn test_function_suite(seed: u64, count: usize) -> Vec<JetFunction> {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mu = rng.gen_range(-0.5..0.5);
            let sig = rng.gen_range(0.6..1.5);
            let om = rng.gen_range(0.5..2.0);
            let p: i32 = rng.gen_range(-2..=2);
            let amp = rng.gen_range(0.5..1.5);
            let phase = rng.gen_range(0.0..std::f64::consts::PI);
            JetFunction::new(
                move |x: f64, y: f64, th: f64| {
                    let w = (-(y.ln() - mu).powi(2) / (sig * sig)).exp();
                    let osc = (om * x + phase).cos();
                    amp * w * osc * Complex64::new(0.0, 2.0 * p as f64 * th).exp()
                },
                8,
                1.0,
            )
            .expect("suite functions are periodic by construction")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::IwasawaCoords;

    fn at(x: f64, y: f64, th: f64) -> IwasawaCoords {
        IwasawaCoords::new(x, y, th).unwrap()
    }

    #[test]
    fn x3_on_exponential_is_exact_multiplier() {
        let f = phi_p_jet(3, Complex64::new(0.0, 0.5));
        let fd = FiniteDifferenceSpec::default();
        let point = at(0.4, 1.3, 0.9);
        let lhs = apply(LieOperator::X3, &f, &point, &fd).unwrap();
        let expect = Complex64::new(0.0, 6.0) * f.value_at(&point);
        assert!((lhs - expect).norm() < 1e-8);
    }

    #[test]
    fn casimir_on_phi_p() {
        // Omega phi_p = (1/4 - nu^2) phi_p, the dx term vanishing
        let nu = Complex64::new(0.0, 0.7);
        let f = phi_p_jet(2, nu);
        let fd = FiniteDifferenceSpec::default();
        let point = at(-0.3, 0.8, 1.1);
        let got = apply(LieOperator::Casimir, &f, &point, &fd).unwrap();
        let expect = (Complex64::new(0.25, 0.0) - nu * nu) * f.value_at(&point);
        assert!(
            (got - expect).norm() / expect.norm() < 1e-6,
            "got {got}, expect {expect}"
        );
    }

    #[test]
    fn ladder_action_on_phi_p() {
        // e^± phi_p = (2 nu + 1 ± 2p) phi_{p±1}
        let nu = Complex64::new(0.0, 1.3);
        let p = 1;
        let fd = FiniteDifferenceSpec::default();
        let point = at(0.2, 1.7, 0.5);
        let f = phi_p_jet(p, nu);
        let up = apply(LieOperator::Eplus, &f, &point, &fd).unwrap();
        let expect_up = (2.0 * nu + 1.0 + 2.0 * p as f64) * phi_p_jet(p + 1, nu).value_at(&point);
        assert!((up - expect_up).norm() / (1.0 + expect_up.norm()) < 1e-7);
        let down = apply(LieOperator::Eminus, &f, &point, &fd).unwrap();
        let expect_down =
            (2.0 * nu + 1.0 - 2.0 * p as f64) * phi_p_jet(p - 1, nu).value_at(&point);
        assert!((down - expect_down).norm() / (1.0 + expect_down.norm()) < 1e-7);
    }

    #[test]
    fn right_translation_oracle_basics() {
        let fd = FiniteDifferenceSpec::default();
        // j = 3 on e^{2 i p theta} at the identity gives 2 i p
        let f = phi_p_jet(1, Complex64::new(-0.5, 0.0)); // y^0 e^{2 i theta}
        let g = GroupElement::identity();
        let d = apply_by_right_translation(3, &f, &g, &fd).unwrap();
        assert!((d - Complex64::new(0.0, 2.0)).norm() < 1e-9);
        // j = 1 moves x at unit rate at the identity
        let fx = JetFunction::new(|x: f64, _y, _t| Complex64::new(x, 0.0), 8, 1.0).unwrap();
        let d1 = apply_by_right_translation(1, &fx, &g, &fd).unwrap();
        assert!((d1 - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        assert!(apply_by_right_translation(5, &fx, &g, &fd).is_err());
    }

    #[test]
    fn right_translation_agrees_with_coordinate_apply() {
        let fd = FiniteDifferenceSpec::default();
        let suite = test_function_suite(42, 12);
        let pts = [at(0.3, 1.1, 0.4), at(-0.7, 0.6, 2.0), at(1.2, 2.3, 1.5)];
        for f in &suite {
            for point in &pts {
                let g = crate::group::compose(point).unwrap();
                for (j, op) in [
                    (1u8, LieOperator::X1),
                    (2, LieOperator::X2),
                    (3, LieOperator::X3),
                ] {
                    let a = apply(op, f, point, &fd).unwrap();
                    let b = apply_by_right_translation(j, f, &g, &fd).unwrap();
                    assert!(
                        (a - b).norm() < 1e-6 * (1.0 + a.norm()),
                        "mismatch for X{j}: {a} vs {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn commutator_examples() {
        let fd = FiniteDifferenceSpec::default();
        let suite = test_function_suite(7, 3);
        let point = at(0.25, 1.4, 0.8);
        for f in &suite {
            assert!(
                commutator_residual(LieOperator::X1, LieOperator::X2, f, &point, &fd).unwrap()
                    < 1e-5
            );
            assert!(
                commutator_residual(LieOperator::W, LieOperator::Eplus, f, &point, &fd).unwrap()
                    < 1e-5
            );
            assert!(
                commutator_residual(LieOperator::X1, LieOperator::X1, f, &point, &fd).unwrap()
                    < 1e-9
            );
        }
        let f = &suite[0];
        assert!(commutator_residual(LieOperator::X1, LieOperator::Eplus, f, &point, &fd).is_err());
    }

    #[test]
    fn casimir_three_routes_agree() {
        let fd = FiniteDifferenceSpec::default();
        let point = at(0.15, 1.2, 0.6);
        // phi_p
        let f = phi_p_jet(1, Complex64::new(0.0, 0.9));
        assert!(casimir_consistency(&f, &point, &fd).unwrap() < 1e-6);
        // K-trivial: theta-independent, Casimir reduces to the hyperbolic Laplacian
        let ktriv = JetFunction::new(
            |x: f64, y: f64, _t| Complex64::new((-(x * x) - (y.ln()).powi(2)).exp(), 0.0),
            8,
            1.0,
        )
        .unwrap();
        let r = casimir_consistency(&ktriv, &point, &fd).unwrap();
        assert!(r < 1e-5, "K-trivial residual {r}");
        // random smooth
        for f in test_function_suite(99, 4) {
            let r = casimir_consistency(&f, &point, &fd).unwrap();
            assert!(r < 1e-5, "suite residual {r}");
        }
    }

    #[test]
    fn k_trivial_casimir_equals_laplacian() {
        // for theta-independent f the coordinate Casimir is -y^2(dxx+dyy)
        let fd = FiniteDifferenceSpec::default();
        let point = at(0.4, 1.5, 0.9);
        let f = JetFunction::new(
            |x: f64, y: f64, _t| Complex64::new((x * 0.7).sin() * (-(y.ln()).powi(2)).exp(), 0.0),
            8,
            1.0,
        )
        .unwrap();
        let om = apply(LieOperator::Casimir, &f, &point, &fd).unwrap();
        let eval = |x: f64, y: f64| f.value(x, y, 0.0);
        let h = 1e-4;
        let dxx = (eval(point.x + h, point.y) - 2.0 * eval(point.x, point.y)
            + eval(point.x - h, point.y))
            / (h * h);
        let dyy = (eval(point.x, point.y + h) - 2.0 * eval(point.x, point.y)
            + eval(point.x, point.y - h))
            / (h * h);
        let lap = -point.y * point.y * (dxx + dyy);
        assert!((om - lap).norm() < 1e-5 * (1.0 + lap.norm()));
    }

    #[test]
    fn smoothness_and_step_validation() {
        let f = JetFunction::new(|_x, _y, _t| Complex64::new(1.0, 0.0), 0, 1.0).unwrap();
        let fd = FiniteDifferenceSpec::default();
        assert!(apply(LieOperator::X1, &f, &at(0.0, 1.0, 0.0), &fd).is_err());
        assert!(FiniteDifferenceSpec::new(1e-9, 4, false).is_err());
        assert!(FiniteDifferenceSpec::new(1e-4, 3, false).is_err());
        // non-periodic evaluator rejected
        assert!(JetFunction::new(|_x, _y, t| Complex64::new(t, 0.0), 4, 1.0).is_err());
    }

    #[test]
    fn casimir_commutes_with_right_translation() {
        // |Omega(f o R_h) - (Omega f) o R_h| small at random points
        let fd = FiniteDifferenceSpec::default();
        let h_elt = GroupElement::new(1.3, 0.4, 0.2, 1.0).unwrap();
        let f = test_function_suite(5, 1).remove(0);
        let fr = {
            let f2 = f.clone();
            let h2 = h_elt;
            JetFunction::new(
                move |x: f64, y: f64, th: f64| {
                    let g = crate::group::compose(&IwasawaCoords::new(x, y, th).unwrap()).unwrap();
                    let co = iwasawa_decompose(&g.mul(&h2));
                    f2.value(co.x, co.y, co.theta)
                },
                8,
                1.0,
            )
            .unwrap()
        };
        let point = at(0.3, 1.2, 0.7);
        let lhs = apply(LieOperator::Casimir, &fr, &point, &fd).unwrap();
        let g = crate::group::compose(&point).unwrap();
        let translated = iwasawa_decompose(&g.mul(&h_elt));
        let rhs = apply(LieOperator::Casimir, &f, &translated, &fd).unwrap();
        assert!(
            (lhs - rhs).norm() < 1e-5 * (1.0 + rhs.norm()),
            "lhs {lhs} rhs {rhs}"
        );
    }
}
