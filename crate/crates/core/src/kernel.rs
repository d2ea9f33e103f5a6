//! Weierstrass p, p', p'', zeta and the restricted inverse of p on the
//! real-value contour.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::lattice::LatticeData;
use crate::point::{wrapped_dist, TorusPoint};

/// Pole guard radius in wrapped (r, s) distance.
pub const POLE_TOL: f64 = 1e-9;

const I: C64 = C64 { re: 0.0, im: 1.0 };
const MAX_TERMS: usize = 64;

/// p, p' and zeta at one argument.
#[derive(Debug, Clone, Copy)]
pub struct WpValues {
    pub wp: C64,
    pub wp1: C64,
    pub zeta: C64,
}

/// Series on Z + Z(i bp), bp >= 1, at an argument already reduced to
/// |Re w| <= 1/2, |Im w| <= bp/2.
fn series_reduced(w: C64, bp: f64, q: f64, eta1: f64) -> WpValues {
    let x = PI * w;
    let (u, sgn) = if x.im >= 0.0 {
        ((2.0 * I * x).exp(), 1.0)
    } else {
        ((-2.0 * I * x).exp(), -1.0)
    };
    let um1 = u - 1.0;
    let cot = I * sgn * (u + 1.0) / um1;
    let csc2 = -4.0 * u / (um1 * um1);

    let ep = (2.0 * PI * I * w - 2.0 * PI * bp).exp();
    let em = (-2.0 * PI * I * w - 2.0 * PI * bp).exp();
    let (mut pp, mut pm, mut qn) = (C64::new(1.0, 0.0), C64::new(1.0, 0.0), 1.0);
    let (mut s_sin, mut s_cos, mut s_sin2) = (C64::default(), C64::default(), C64::default());
    for n in 1..=MAX_TERMS {
        pp *= ep;
        pm *= em;
        qn *= q;
        let nf = n as f64;
        let k = 1.0 / (1.0 - qn);
        let sin_t = (pp - pm) * k;
        let cos_t = (pp + pm) * k;
        s_sin += sin_t;
        s_cos += cos_t * nf;
        s_sin2 += sin_t * (nf * nf);
        if nf * nf * (pp.norm() + pm.norm()) < 1e-18 {
            break;
        }
    }
    // sin(2 n pi w) q^n = (E+^n - E-^n) / 2i, cos(.) q^n = (E+^n + E-^n) / 2
    let pi2 = PI * PI;
    let zeta = eta1 * w + PI * cot + 4.0 * PI * s_sin / (2.0 * I);
    let wp = -eta1 + pi2 * csc2 - 8.0 * pi2 * s_cos / 2.0;
    let wp1 = -2.0 * pi2 * PI * cot * csc2 + 16.0 * pi2 * PI * s_sin2 / (2.0 * I);
    WpValues { wp, wp1, zeta }
}

impl LatticeData {
    fn guard(&self, z: C64) -> Result<()> {
        if wrapped_dist(z.re, z.im / self.b) < POLE_TOL {
            return Err(Error::Pole(POLE_TOL));
        }
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Domain("non-finite argument".into()));
        }
        Ok(())
    }

    /// p, p', zeta at the given representative in one series pass.
    pub fn eval(&self, z: impl Into<C64>) -> Result<WpValues> {
        let z = z.into();
        self.guard(z)?;
        let r = &self.reduced;
        let w = if r.inverted { -I * z / self.b } else { z };
        let n = (w.im / r.bp).round();
        let w1 = w - I * (n * r.bp);
        let m = w1.re.round();
        let w0 = w1 - m;
        let mut v = series_reduced(w0, r.bp, r.q, r.eta1);
        v.zeta += m * r.eta1 + n * r.eta2;
        if r.inverted {
            let b = self.b;
            v.wp = -v.wp / (b * b);
            v.wp1 = v.wp1 * I / (b * b * b);
            v.zeta = -I * v.zeta / b;
        }
        Ok(v)
    }

    pub fn wp(&self, z: impl Into<C64>) -> Result<C64> {
        Ok(self.eval(z)?.wp)
    }

    pub fn wp_prime(&self, z: impl Into<C64>) -> Result<C64> {
        Ok(self.eval(z)?.wp1)
    }

    pub fn wp_second(&self, z: impl Into<C64>) -> Result<C64> {
        let w = self.wp(z)?;
        Ok(6.0 * w * w - self.g2 / 2.0)
    }

    /// zeta at the supplied representative; not invariant under lattice shifts.
    pub fn zeta(&self, z: impl Into<C64>) -> Result<C64> {
        Ok(self.eval(z)?.zeta)
    }

    /// ln|exp(-eta1 z^2/2) sigma(z)| for z reduced to the canonical cell,
    /// from the product expansion of theta_1.
    pub(crate) fn log_abs_sigma_reduced(&self, z: C64) -> Result<f64> {
        self.guard(z)?;
        let q2 = (-2.0 * PI * self.b).exp();
        let ep = (2.0 * PI * I * z).exp();
        let em = (-2.0 * PI * I * z).exp();
        let mut acc = ((PI * z).sin() / PI).norm().ln();
        let mut qn = 1.0;
        for _ in 0..20000 {
            qn *= q2;
            let t = (1.0 - qn * ep) * (1.0 - qn * em) / ((1.0 - qn) * (1.0 - qn));
            acc += t.norm().ln();
            if qn * (ep.norm() + em.norm() + 2.0) < 1e-18 {
                break;
            }
        }
        Ok(acc)
    }
}

/// The four arcs of the rectangle boundary on which p is real and injective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Segment {
    /// (0, 1/2], image [e1, +inf)
    ZeroHalf,
    /// [1/2, (1+tau)/2], image [e3, e1]
    HalfCorner,
    /// [(1+tau)/2, tau/2], image [e2, e3]
    CornerTauHalf,
    /// [tau/2, 0), image (-inf, e2]
    TauHalfZero,
}

impl Segment {
    pub const ALL: [Segment; 4] =
        [Segment::ZeroHalf, Segment::HalfCorner, Segment::CornerTauHalf, Segment::TauHalfZero];

    /// The segment whose image contains the real value c.
    pub fn containing(c: f64, l: &LatticeData) -> Segment {
        if c >= l.e1 {
            Segment::ZeroHalf
        } else if c >= l.e3 {
            Segment::HalfCorner
        } else if c >= l.e2 {
            Segment::CornerTauHalf
        } else {
            Segment::TauHalfZero
        }
    }

    fn image(self, l: &LatticeData) -> (f64, f64) {
        match self {
            Segment::ZeroHalf => (l.e1, f64::INFINITY),
            Segment::HalfCorner => (l.e3, l.e1),
            Segment::CornerTauHalf => (l.e2, l.e3),
            Segment::TauHalfZero => (f64::NEG_INFINITY, l.e2),
        }
    }

    /// Parametrization t in [0, 1] -> point, with dz/dt.
    fn point(self, t: f64, b: f64) -> (C64, C64) {
        match self {
            Segment::ZeroHalf => (C64::new(0.5 * t, 0.0), C64::new(0.5, 0.0)),
            Segment::HalfCorner => (C64::new(0.5, 0.5 * b * t), C64::new(0.0, 0.5 * b)),
            Segment::CornerTauHalf => (C64::new(0.5 * t, 0.5 * b), C64::new(0.5, 0.0)),
            Segment::TauHalfZero => (C64::new(0.0, 0.5 * b * t), C64::new(0.0, 0.5 * b)),
        }
    }

    /// Whether p(t) increases with t on this arc.
    fn increasing(self) -> bool {
        matches!(self, Segment::CornerTauHalf | Segment::TauHalfZero)
    }
}

/// Closest approach to the pole allowed when inverting huge |c|.
const POLE_CLAMP: f64 = 1e-6;

/// The unique p on `seg` with p(p) = c.
pub fn inverse_wp_real(c: f64, seg: Segment, l: &LatticeData) -> Result<TorusPoint> {
    let (lo, hi) = seg.image(l);
    let slack = 1e-12 * c.abs().max(1.0);
    if !c.is_finite() || c < lo - slack || c > hi + slack {
        return Err(Error::Range { value: c, lo, hi });
    }
    let b = l.b;
    // p' vanishes at the half-period ends, so snap when c is an end value.
    for (t, e) in [(0.0, hi), (1.0, lo), (0.0, lo), (1.0, hi)] {
        if e.is_finite() && (c - e).abs() <= 4.0 * f64::EPSILON * e.abs().max(1.0) {
            let z = seg.point(t, b).0;
            if z.norm() > 0.0 && (l.wp(z)?.re - e).abs() <= 8.0 * f64::EPSILON * e.abs().max(1.0) {
                return Ok(TorusPoint::from_z(z, b));
            }
        }
    }
    // Pole sits at t = 0 on the two arcs touching the origin.
    let (mut ta, mut tb) = match seg {
        Segment::ZeroHalf => (2.0 * POLE_CLAMP, 1.0),
        Segment::TauHalfZero => (2.0 * POLE_CLAMP / b, 1.0),
        _ => (0.0, 1.0),
    };
    let f = |t: f64| -> Result<f64> { Ok(l.wp(seg.point(t, b).0)?.re - c) };
    let inc = seg.increasing();
    // Clamp: beyond the pole guard the closest admissible point is returned.
    let fa = f(ta)?;
    if (inc && fa >= 0.0) || (!inc && fa <= 0.0) {
        return Ok(TorusPoint::from_z(seg.point(ta, b).0, b));
    }
    for _ in 0..200 {
        let tm = 0.5 * (ta + tb);
        if tm <= ta || tm >= tb {
            break;
        }
        let fm = f(tm)?;
        if (fm < 0.0) == inc {
            ta = tm;
        } else {
            tb = tm;
        }
    }
    let mut t = 0.5 * (ta + tb);
    // Newton polish, kept inside the bracket.
    for _ in 0..40 {
        let (z, dz) = seg.point(t, b);
        let v = l.eval(z)?;
        let d = (v.wp1 * dz).re;
        if d == 0.0 {
            break;
        }
        let step = (v.wp.re - c) / d;
        let tn = t - step;
        if !(tn >= ta - 1e-15 && tn <= tb + 1e-15) {
            break;
        }
        t = tn;
        if step.abs() < 1e-16 {
            break;
        }
    }
    let z = seg.point(t, b).0;
    let res = (l.wp(z)?.re - c).abs();
    if res > 1e-10 * c.abs().max(1.0) {
        return Err(Error::Convergence(format!(
            "inverse of p at {c} on {seg:?}: residual {res:e}"
        )));
    }
    Ok(TorusPoint::from_z(z, b))
}

/// Some preimage of a complex value under p, by complex Newton seeded from
/// a coarse table over half the fundamental cell. Returned with s in [0, 1/2].
pub fn inverse_wp(w: C64, l: &LatticeData) -> Result<TorusPoint> {
    const N: usize = 24;
    let b = l.b;
    let mut seeds = Vec::with_capacity(N * N);
    for i in 0..N {
        for j in 0..=N / 2 {
            let r = -0.5 + (i as f64 + 0.5) / N as f64;
            let s = (j as f64 + 0.25) / N as f64;
            let z = C64::new(r, s * b);
            if let Ok(v) = l.wp(z) {
                seeds.push(((v - w).norm(), z));
            }
        }
    }
    seeds.sort_by(|a, b| a.0.total_cmp(&b.0));
    let tol = 1e-12 * w.norm().max(1.0);
    for &(_, z0) in seeds.iter().take(8) {
        let mut z = z0;
        for _ in 0..60 {
            let v = match l.eval(z) {
                Ok(v) => v,
                Err(_) => break,
            };
            let res = v.wp - w;
            if res.norm() < tol {
                return Ok(TorusPoint::from_z(z, b).upper());
            }
            if v.wp1.norm() == 0.0 {
                break;
            }
            let mut step = res / v.wp1;
            // limit wild jumps near branch points
            let cap = 0.25 * b.min(1.0);
            if step.norm() > cap {
                step *= cap / step.norm();
            }
            z -= step;
        }
    }
    Err(Error::Convergence(format!("no preimage of p found for {w}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::compute_invariants;

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm().max(1.0)
    }

    #[test]
    fn half_periods() {
        for b in [0.5, 1.0, 2.0] {
            let l = compute_invariants(b).unwrap();
            for k in 1..4 {
                let v = l.eval(l.half_period(k)).unwrap();
                assert!((v.wp.re - l.e(k)).abs() < 1e-12 * l.e(k).abs().max(1.0));
                assert!(v.wp1.norm() < 1e-9 * l.g2.abs().max(1.0));
            }
            assert!(rel(l.zeta(l.half_period(1)).unwrap(), C64::new(l.eta1 / 2.0, 0.0)) < 1e-13);
        }
    }

    #[test]
    fn cubic_identity_and_quasi_periods() {
        for b in [0.4, 1.0, 2.5] {
            let l = compute_invariants(b).unwrap();
            for &(x, y) in &[(0.13, 0.07), (-0.31, 0.44), (0.49, -0.02), (0.2, 1.7)] {
                let z = C64::new(x, y * b);
                let v = l.eval(z).unwrap();
                let rhs = 4.0 * v.wp.powi(3) - l.g2 * v.wp - l.g3;
                assert!(rel(v.wp1 * v.wp1, rhs) < 1e-10 * rhs.norm().max(1.0), "b={b} z={z}");
                let z1 = l.zeta(z + 1.0).unwrap();
                let zt = l.zeta(z + l.tau).unwrap();
                assert!((z1 - v.zeta - l.eta1).norm() < 1e-11);
                assert!((zt - v.zeta - l.eta2).norm() < 1e-11);
                let d = l.wp(z + C64::new(3.0, -2.0 * b)).unwrap();
                assert!(rel(d, v.wp) < 1e-12);
            }
        }
    }

    #[test]
    fn pole_guard() {
        let l = compute_invariants(1.0).unwrap();
        assert!(matches!(l.wp(C64::new(1.0, 1e-11)), Err(Error::Pole(_))));
        assert!(l.wp(C64::new(1e-6, 0.0)).is_ok());
    }

    #[test]
    fn inverse_on_each_segment() {
        for b in [0.6, 1.0, 1.7] {
            let l = compute_invariants(b).unwrap();
            for seg in Segment::ALL {
                for t in [0.05, 0.3, 0.5, 0.77, 0.99] {
                    let (z, _) = seg.point(t, b);
                    let c = l.wp(z).unwrap().re;
                    let p = inverse_wp_real(c, seg, &l).unwrap();
                    assert!(p.wrapped_dist(&TorusPoint::from_z(z, b)) < 1e-9, "{seg:?} t={t}");
                }
            }
            let p = inverse_wp_real(l.e1, Segment::ZeroHalf, &l).unwrap();
            assert!(p.approx_eq(&TorusPoint::new(0.5, 0.0, b)));
            assert!(inverse_wp_real(l.e1 + 1.0, Segment::HalfCorner, &l).is_err());
        }
    }

    #[test]
    fn complex_inverse() {
        let l = compute_invariants(1.3).unwrap();
        let z = C64::new(0.21, 0.33 * 1.3);
        let w = l.wp(z).unwrap();
        let p = inverse_wp(w, &l).unwrap();
        let t = TorusPoint::from_z(z, l.b);
        assert!(p.approx_eq(&t) || p.approx_eq(&t.neg()));
    }
}
