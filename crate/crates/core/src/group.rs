//! Exact coordinate geometry on G = PSL(2,R).
//!
//! Elements are stored as unit-determinant 2x2 matrices identified with their
//! negatives; construction normalizes the determinant and fixes the projective
//! sign so that equality is testable. The Iwasawa coordinates (x, y, theta)
//! come from g = n[x] a[y] k[theta] with theta understood mod pi.

use crate::error::{Error, Result};

/// Relative tolerance for the determinant normalization check.
pub const TOL_DET: f64 = 1e-12;
/// Relative threshold deciding the c = 0 Bruhat cell.
pub const TOL_CELL: f64 = 1e-12;

const PI: f64 = std::f64::consts::PI;

/// An element of PSL(2,R): unit determinant, canonical projective sign.
///
/// Canonical sign: the first entry of (c, d, a, b) exceeding the sign
/// tolerance in magnitude is made nonnegative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl GroupElement {
    /// Builds an element from matrix entries, rescaling to unit determinant
    /// and fixing the projective sign. Rejects singular or negative-determinant
    /// input (no such element exists in PSL(2,R)).
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || det <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "matrix determinant {det} must be positive"
            )));
        }
        let s = det.sqrt();
        let mut g = GroupElement {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        };
        g.canonicalize();
        debug_assert!((g.a * g.d - g.b * g.c - 1.0).abs() < 64.0 * TOL_DET);
        Ok(g)
    }

    pub fn identity() -> Self {
        GroupElement {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
        }
    }

    /// The Weyl element w = [[0,1],[-1,0]] (canonicalized).
    pub fn weyl() -> Self {
        GroupElement::new(0.0, 1.0, -1.0, 0.0).unwrap()
    }

    /// n[x], the unipotent upper-triangular element.
    pub fn n(x: f64) -> Self {
        GroupElement::new(1.0, x, 0.0, 1.0).unwrap()
    }

    /// a[y] = diag(sqrt(y), 1/sqrt(y)), y > 0.
    pub fn a_diag(y: f64) -> Result<Self> {
        if !(y > 0.0) {
            return Err(Error::InvalidArgument(format!("a[y] requires y > 0, got {y}")));
        }
        GroupElement::new(y.sqrt(), 0.0, 0.0, 1.0 / y.sqrt())
    }

    /// k[theta], the rotation [[cos, sin],[-sin, cos]].
    pub fn k(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        GroupElement::new(c, s, -s, c).unwrap()
    }

    /// Matrix product (projectively canonicalized).
    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        let mut g = GroupElement {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        };
        g.canonicalize();
        g
    }

    pub fn inverse(&self) -> GroupElement {
        let mut g = GroupElement {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        };
        g.canonicalize();
        g
    }

    fn norm(&self) -> f64 {
        (self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d).sqrt()
    }

    fn canonicalize(&mut self) {
        let tol = TOL_CELL * self.norm().max(1.0);
        for v in [self.c, self.d, self.a, self.b] {
            if v.abs() > tol {
                if v < 0.0 {
                    self.a = -self.a;
                    self.b = -self.b;
                    self.c = -self.c;
                    self.d = -self.d;
                }
                return;
            }
        }
    }

    /// Projective distance: min over sign of the max entry difference.
    pub fn proj_dist(&self, o: &GroupElement) -> f64 {
        let d1 = (self.a - o.a)
            .abs()
            .max((self.b - o.b).abs())
            .max((self.c - o.c).abs())
            .max((self.d - o.d).abs());
        let d2 = (self.a + o.a)
            .abs()
            .max((self.b + o.b).abs())
            .max((self.c + o.c).abs())
            .max((self.d + o.d).abs());
        d1.min(d2)
    }
}

/// Iwasawa coordinates (x, y, theta) with y > 0 and theta in [0, pi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IwasawaCoords {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl IwasawaCoords {
    pub fn new(x: f64, y: f64, theta: f64) -> Result<Self> {
        if !(y > 0.0) || !y.is_finite() || !x.is_finite() || !theta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "Iwasawa coordinates need finite x, theta and y > 0; got ({x}, {y}, {theta})"
            )));
        }
        Ok(IwasawaCoords {
            x,
            y,
            theta: reduce_mod_pi(theta),
        })
    }
}

/// Reduce an angle into [0, pi).
pub fn reduce_mod_pi(theta: f64) -> f64 {
    let mut t = theta % PI;
    if t < 0.0 {
        t += PI;
    }
    // representable boundary case after rounding
    if t >= PI {
        t -= PI;
    }
    t
}

/// Bruhat normal form: the small cell n[x] a[u] (c = 0) or the big cell
/// n[x1] w n[x2] a[u] (c != 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BruhatForm {
    SmallCell { x: f64, u: f64 },
    BigCell { x1: f64, x2: f64, u: f64 },
}

/// Iwasawa decomposition of g: x = (ac+bd)/(c^2+d^2), y = (c^2+d^2)^{-1},
/// exp(i theta) = (d - i c)/|d - i c|.
pub fn iwasawa_decompose(g: &GroupElement) -> IwasawaCoords {
    let r2 = g.c * g.c + g.d * g.d;
    let x = (g.a * g.c + g.b * g.d) / r2;
    let y = 1.0 / r2;
    let theta = reduce_mod_pi((-g.c).atan2(g.d));
    IwasawaCoords { x, y, theta }
}

/// Assemble n[x] a[y] k[theta] back into a group element.
pub fn compose(coords: &IwasawaCoords) -> Result<GroupElement> {
    if !(coords.y > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "compose requires y > 0, got {}",
            coords.y
        )));
    }
    let sy = coords.y.sqrt();
    let (s, c) = coords.theta.sin_cos();
    GroupElement::new(
        sy * c - coords.x / sy * s,
        sy * s + coords.x / sy * c,
        -s / sy,
        c / sy,
    )
}

/// Left translation by g in Iwasawa coordinates.
///
/// Returns (x1, y1, theta + vartheta mod pi) where x1 + i y1 is the Moebius
/// image of x + i y and exp(i vartheta) = conj(j(g,z))/|j(g,z)| with
/// j(g,z) = cz + d, taking the principal argument.
pub fn left_action(g: &GroupElement, coords: &IwasawaCoords) -> IwasawaCoords {
    let (x, y) = (coords.x, coords.y);
    let jr = g.c * x + g.d;
    let ji = g.c * y;
    let den = jr * jr + ji * ji;
    let x1 = (g.a * g.c * y * y + (g.a * x + g.b) * jr) / den;
    let y1 = y / den;
    let vartheta = (-ji).atan2(jr);
    IwasawaCoords {
        x: x1,
        y: y1,
        theta: reduce_mod_pi(coords.theta + vartheta),
    }
}

/// Bruhat decomposition: [[a,b],[c,d]] = n[ab] a[a^2] when c = 0, and
/// n[a/c] w n[cd] a[c^2] when c != 0.
///
/// The cell test uses |c| <= TOL_CELL * ||g||: the canonical sign scan makes a
/// true zero exact, so anything larger lands in the big cell.
pub fn bruhat_decompose(g: &GroupElement) -> BruhatForm {
    let tol = TOL_CELL * g.norm().max(1.0);
    if g.c.abs() <= tol {
        // canonical sign puts d > 0, hence a = 1/d > 0
        BruhatForm::SmallCell {
            x: g.a * g.b,
            u: g.a * g.a,
        }
    } else {
        BruhatForm::BigCell {
            x1: g.a / g.c,
            x2: g.c * g.d,
            u: g.c * g.c,
        }
    }
}

/// Reassemble a Bruhat form into a group element.
pub fn bruhat_compose(form: &BruhatForm) -> Result<GroupElement> {
    match *form {
        BruhatForm::SmallCell { x, u } => Ok(GroupElement::n(x).mul(&GroupElement::a_diag(u)?)),
        BruhatForm::BigCell { x1, x2, u } => Ok(GroupElement::n(x1)
            .mul(&GroupElement::weyl())
            .mul(&GroupElement::n(x2))
            .mul(&GroupElement::a_diag(u)?)),
    }
}

/// Density of the Haar measure dg against dx dy dtheta: 1/y^2.
pub fn haar_density(coords: &IwasawaCoords) -> f64 {
    1.0 / (coords.y * coords.y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_element(rng: &mut StdRng) -> GroupElement {
        loop {
            let a = rng.gen_range(-3.0..3.0);
            let b = rng.gen_range(-3.0..3.0);
            let c = rng.gen_range(-3.0..3.0);
            let d = rng.gen_range(-3.0..3.0);
            if a * d - b * c > 0.05 {
                return GroupElement::new(a, b, c, d).unwrap();
            }
        }
    }

    #[test]
    fn iwasawa_identity() {
        let co = iwasawa_decompose(&GroupElement::identity());
        assert_eq!((co.x, co.y, co.theta), (0.0, 1.0, 0.0));
    }

    #[test]
    fn iwasawa_weyl() {
        let co = iwasawa_decompose(&GroupElement::weyl());
        assert!(co.x.abs() < 1e-15);
        assert!((co.y - 1.0).abs() < 1e-15);
        assert!((co.theta - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn compose_cases() {
        let id = compose(&IwasawaCoords::new(0.0, 1.0, 0.0).unwrap()).unwrap();
        assert!(id.proj_dist(&GroupElement::identity()) < 1e-15);
        let w = compose(&IwasawaCoords::new(0.0, 1.0, std::f64::consts::FRAC_PI_2).unwrap()).unwrap();
        assert!(w.proj_dist(&GroupElement::weyl()) < 1e-15);
        let n1 = compose(&IwasawaCoords::new(1.0, 1.0, 0.0).unwrap()).unwrap();
        assert!(n1.proj_dist(&GroupElement::n(1.0)) < 1e-15);
        assert!(compose(&IwasawaCoords {
            x: 0.0,
            y: -1.0,
            theta: 0.0
        })
        .is_err());
    }

    #[test]
    fn roundtrip_compose_decompose() {
        let co = IwasawaCoords::new(2.0, 4.0, 1.0).unwrap();
        let g = compose(&co).unwrap();
        let back = iwasawa_decompose(&g);
        assert!((back.x - 2.0).abs() < 1e-12);
        assert!((back.y - 4.0).abs() < 1e-12);
        assert!((back.theta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn roundtrip_random_1000() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..1000 {
            let g = random_element(&mut rng);
            let h = compose(&iwasawa_decompose(&g)).unwrap();
            assert!(g.proj_dist(&h) < 1e-12, "roundtrip failed: {g:?} vs {h:?}");
        }
    }

    #[test]
    fn left_action_cases() {
        let co = IwasawaCoords::new(0.3, 2.0, 0.4).unwrap();
        let same = left_action(&GroupElement::identity(), &co);
        assert!(same.x == co.x && same.y == co.y && (same.theta - co.theta).abs() < 1e-15);

        let shifted = left_action(&GroupElement::n(1.5), &co);
        assert!((shifted.x - (co.x + 1.5)).abs() < 1e-14);
        assert!((shifted.y - co.y).abs() < 1e-14);
        assert!((shifted.theta - co.theta).abs() < 1e-14);

        let base = IwasawaCoords::new(0.0, 1.0, 0.0).unwrap();
        let w = left_action(&GroupElement::weyl(), &base);
        let w_direct = iwasawa_decompose(&GroupElement::weyl());
        assert!((w.x - w_direct.x).abs() < 1e-14);
        assert!((w.y - w_direct.y).abs() < 1e-14);
        assert!((w.theta - w_direct.theta).abs() < 1e-14);
    }

    #[test]
    fn left_action_matches_decompose_of_product() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..300 {
            let g = random_element(&mut rng);
            let co = IwasawaCoords::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(0.1..4.0),
                rng.gen_range(0.0..std::f64::consts::PI),
            )
            .unwrap();
            let via_action = left_action(&g, &co);
            let via_product = iwasawa_decompose(&g.mul(&compose(&co).unwrap()));
            assert!((via_action.x - via_product.x).abs() < 1e-10);
            assert!((via_action.y - via_product.y).abs() < 1e-10);
            let dt = (via_action.theta - via_product.theta).abs();
            assert!(dt.min((dt - std::f64::consts::PI).abs()) < 1e-10);
        }
    }

    #[test]
    fn cocycle() {
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..200 {
            let g1 = random_element(&mut rng);
            let g2 = random_element(&mut rng);
            let co = IwasawaCoords::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(0.1..4.0),
                rng.gen_range(0.0..std::f64::consts::PI),
            )
            .unwrap();
            let lhs = left_action(&g1.mul(&g2), &co);
            let rhs = left_action(&g1, &left_action(&g2, &co));
            assert!((lhs.x - rhs.x).abs() < 1e-10);
            assert!((lhs.y - rhs.y).abs() < 1e-10);
            let dt = (lhs.theta - rhs.theta).abs();
            assert!(dt.min((dt - std::f64::consts::PI).abs()) < 1e-10);
        }
    }

    #[test]
    fn bruhat_cases() {
        assert_eq!(
            bruhat_decompose(&GroupElement::identity()),
            BruhatForm::SmallCell { x: 0.0, u: 1.0 }
        );
        let g = GroupElement::new(1.0, 1.0, 1.0, 2.0).unwrap();
        match bruhat_decompose(&g) {
            BruhatForm::BigCell { x1, x2, u } => {
                assert!((x1 - 1.0).abs() < 1e-15);
                assert!((x2 - 2.0).abs() < 1e-15);
                assert!((u - 1.0).abs() < 1e-15);
            }
            other => panic!("expected big cell, got {other:?}"),
        }
        match bruhat_decompose(&GroupElement::weyl()) {
            BruhatForm::BigCell { x1, x2, u } => {
                assert!(x1.abs() < 1e-15 && x2.abs() < 1e-15 && (u - 1.0).abs() < 1e-15);
            }
            other => panic!("expected big cell for w, got {other:?}"),
        }
    }

    #[test]
    fn bruhat_reassembly_random() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..1000 {
            let g = random_element(&mut rng);
            let back = bruhat_compose(&bruhat_decompose(&g)).unwrap();
            assert!(g.proj_dist(&back) < 1e-12 * g.a.abs().max(10.0));
        }
    }

    #[test]
    fn haar_density_values() {
        assert_eq!(
            haar_density(&IwasawaCoords::new(0.0, 1.0, 0.0).unwrap()),
            1.0
        );
        assert_eq!(
            haar_density(&IwasawaCoords::new(0.0, 2.0, 0.0).unwrap()),
            0.25
        );
    }

    #[test]
    fn haar_measure_left_invariance() {
        // integrate a bump against dg = dx dy dtheta / y^2 before and after
        // left translation by a fixed g; quadrature oracle for invariance
        let g = GroupElement::new(1.4, 0.3, 0.5, 1.0).unwrap();
        let bump = |co: &IwasawaCoords| -> f64 {
            let r = (co.x - 0.2).powi(2)
                + (co.y.ln() - 0.1).powi(2)
                + (co.theta - 1.3).powi(2) / 4.0;
            if r >= 1.0 {
                0.0
            } else {
                (1.0 - 1.0 / (1.0 - r)).exp()
            }
        };
        // 3D tensor midpoint rule over a box comfortably containing both the
        // support of the bump and of its left translate
        let n = 96usize;
        let (x0, x1) = (-4.0, 4.0);
        let (ly0, ly1) = (-3.0f64, 3.0);
        let quad = |f: &dyn Fn(&IwasawaCoords) -> f64| -> f64 {
            let mut total = 0.0;
            for i in 0..n {
                let x = x0 + (x1 - x0) * (i as f64 + 0.5) / n as f64;
                for j in 0..n {
                    let y = (ly0 + (ly1 - ly0) * (j as f64 + 0.5) / n as f64).exp();
                    for k in 0..n {
                        let th = std::f64::consts::PI * (k as f64 + 0.5) / n as f64;
                        let co = IwasawaCoords { x, y, theta: th };
                        // d(log y) absorbs one factor of y from 1/y^2
                        total += f(&co) * haar_density(&co) * y;
                    }
                }
            }
            total * (x1 - x0) * (ly1 - ly0) * std::f64::consts::PI / (n * n * n) as f64
        };
        let before = quad(&|co| bump(co));
        let after = quad(&|co| bump(&left_action(&g, co)));
        assert!(
            (before - after).abs() < 3e-4 * before.abs(),
            "haar invariance violated: {before} vs {after}"
        );
    }
}
