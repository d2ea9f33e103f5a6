//! Generalized Lame equation y'' = I(z; p, A) y: potential, accessory
//! corners, the A <-> a correspondence and the discriminants.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::lattice::LatticeData;
use crate::ode::{integrate, Tolerances};
use crate::point::TorusPoint;

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// (3/4)(p(z+p) + p(z-p) - p(2p)) + A(zeta(z+p) - zeta(z-p) - zeta(2p)) + A^2
pub fn potential_i(z: C64, p: &TorusPoint, a: C64, l: &LatticeData) -> Result<C64> {
    let u = l.eval(z + p.z)?;
    let v = l.eval(z - p.z)?;
    let w = l.eval(2.0 * p.z)?;
    Ok(0.75 * (u.wp + v.wp - w.wp) + a * (u.zeta - v.zeta - w.zeta) + a * a)
}

/// zeta(z+p) - zeta(z-p) - 2A - zeta(2p)
pub fn phi_even(z: C64, p: &TorusPoint, a: C64, l: &LatticeData) -> Result<C64> {
    Ok(l.zeta(z + p.z)? - l.zeta(z - p.z)? - 2.0 * a - l.zeta(2.0 * p.z)?)
}

fn check_not_half_period(p: &TorusPoint) -> Result<()> {
    if p.half_period_index(crate::point::POINT_TOL).is_some() {
        return Err(Error::HalfPeriod);
    }
    Ok(())
}

/// A_0 = -p''(p)/(4p'(p)), A_k = A_0 + p'(p)/(2(p(p) - e_k)).
pub fn accessory_corners(p: &TorusPoint, l: &LatticeData) -> Result<[C64; 4]> {
    check_not_half_period(p)?;
    let v = l.eval(p.z)?;
    if v.wp1.norm() < 1e-12 * (l.g2.abs() + 1.0) {
        return Err(Error::HalfPeriod);
    }
    let wpp = 6.0 * v.wp * v.wp - l.g2 / 2.0;
    let a0 = -wpp / (4.0 * v.wp1);
    let ak = |e: f64| a0 + v.wp1 / (2.0 * (v.wp - e));
    Ok([a0, ak(l.e1), ak(l.e2), ak(l.e3)])
}

/// Q(A) = 16 prod (A - A_k), cross-checked against
/// Phi'^2 - 2 Phi'' Phi + 4 I Phi^2 at three probe points.
pub fn q_quartic(a: C64, p: &TorusPoint, l: &LatticeData) -> Result<C64> {
    let corners = accessory_corners(p, l)?;
    let prod = 16.0 * corners.iter().fold(C64::new(1.0, 0.0), |acc, &c| acc * (a - c));
    let w = l.eval(2.0 * p.z)?;
    let b = l.b;
    let probes = [C64::new(0.31, 0.17 * b), C64::new(-0.12, 0.41 * b), C64::new(0.07, -0.29 * b)];
    let mut vals = Vec::with_capacity(3);
    for z in probes {
        let u = l.eval(z + p.z)?;
        let v = l.eval(z - p.z)?;
        let phi = u.zeta - v.zeta - 2.0 * a - w.zeta;
        let phi1 = -u.wp + v.wp;
        let phi2 = -u.wp1 + v.wp1;
        let pot = 0.75 * (u.wp + v.wp - w.wp) + a * (u.zeta - v.zeta - w.zeta) + a * a;
        let q = phi1 * phi1 - 2.0 * phi2 * phi + 4.0 * pot * phi * phi;
        let mag = phi1.norm_sqr() + 2.0 * (phi2 * phi).norm() + 4.0 * (pot * phi * phi).norm();
        vals.push((q, mag));
    }
    for &(q, mag) in &vals {
        let scale = mag.max(prod.norm()).max(1.0);
        if (q - prod).norm() > 1e-8 * scale {
            return Err(Error::Inconsistency(format!("Q(A) routes disagree: {q} vs {prod}")));
        }
    }
    Ok(prod)
}

/// (eps_1k, eps_2k, eps_3k): the discriminants at the corner A_k.
pub fn corner_discriminants(k: usize) -> [f64; 3] {
    match k {
        0 => [1.0, 1.0, 1.0],
        1 => [1.0, -1.0, 1.0],
        2 => [-1.0, 1.0, -1.0],
        3 => [-1.0, -1.0, -1.0],
        _ => panic!("corner index {k} out of range"),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AccessoryPoint {
    pub a_param: C64,
    pub a: TorusPoint,
    pub c: C64,
    pub r: C64,
    pub s: C64,
    pub tri: [C64; 3],
    pub at_corner: Option<usize>,
}

/// Index of the corner A_k at which Q vanishes to tolerance, if any.
pub fn corner_index(a: C64, corners: &[C64; 4]) -> Option<usize> {
    let q = 16.0 * corners.iter().fold(C64::new(1.0, 0.0), |acc, &c| acc * (a - c));
    if q.norm() > 1e-10 * (16.0 * a.powi(4) + 1.0).norm() {
        return None;
    }
    (0..4).min_by(|&i, &j| (a - corners[i]).norm().total_cmp(&(a - corners[j]).norm()))
}

/// Exponents and discriminants at a given a (any representative).
pub fn exponents_at(a_param: C64, a: TorusPoint, p: &TorusPoint, l: &LatticeData) -> Result<AccessoryPoint> {
    let c = 0.5 * (l.zeta(a.z + p.z)? + l.zeta(a.z - p.z)?);
    let two_pi_i = 2.0 * PI * I;
    let s = -(c - l.eta1 * a.z) / two_pi_i;
    let r = (c * l.tau - l.eta2 * a.z) / two_pi_i;
    let tri = [(2.0 * PI * s).cos(), (2.0 * PI * r).cos(), (2.0 * PI * (2.0 * r + s)).cos()];
    Ok(AccessoryPoint { a_param, a, c, r, s, tri, at_corner: None })
}

/// Solves A = (1/2)[zeta(p+a) + zeta(p-a) - zeta(2p)] for a by complex Newton.
pub fn a_from_a(a_param: C64, p: &TorusPoint, l: &LatticeData, seed: Option<TorusPoint>) -> Result<AccessoryPoint> {
    let corners = accessory_corners(p, l)?;
    if let Some(k) = corner_index(a_param, &corners) {
        return Err(Error::Corner(k));
    }
    let b = l.b;
    let z2p = l.zeta(2.0 * p.z)?;
    let h = |a: C64| -> Result<(C64, C64)> {
        let u = l.eval(p.z + a)?;
        let v = l.eval(p.z - a)?;
        Ok((0.5 * (u.zeta + v.zeta - z2p) - a_param, 0.5 * (v.wp - u.wp)))
    };
    let mut seeds: Vec<C64> = Vec::new();
    if let Some(s) = seed {
        seeds.push(s.z);
    }
    if a_param.norm() > 1.0 {
        // simple poles at +-p with residue 1/2
        let d = 1.0 / (2.0 * a_param);
        seeds.push(p.z - d);
        seeds.push(-p.z + d);
    }
    let centroid = C64::new(0.25, 0.25 * b);
    for (rho, n) in [(0.15, 6), (0.3, 6)] {
        for i in 0..n {
            let th = 2.0 * PI * (i as f64 + 0.25 * rho) / n as f64;
            seeds.push(centroid + C64::new(rho * th.cos(), rho * b * th.sin()));
        }
    }
    let tol = 1e-13 * a_param.norm().max(1.0);
    let cap = 0.2 * b.min(1.0);
    for &z0 in &seeds {
        let mut a = z0;
        let mut ok = false;
        for _ in 0..60 {
            let (f, df) = match h(a) {
                Ok(v) => v,
                Err(_) => break,
            };
            if f.norm() < tol {
                ok = true;
                break;
            }
            if df.norm() == 0.0 {
                break;
            }
            let mut step = f / df;
            if step.norm() > cap {
                step *= cap / step.norm();
            }
            a -= step;
            if step.norm() < 1e-15 {
                ok = h(a).map(|(f, _)| f.norm() < 1e-10 * a_param.norm().max(1.0)).unwrap_or(false);
                break;
            }
        }
        if ok {
            let pt = TorusPoint::from_z(a, b).upper();
            return exponents_at(a_param, pt, p, l);
        }
    }
    Err(Error::Convergence(format!("a(A) not found for A = {a_param}")))
}

/// Accessory data at any A, dispatching corners to their exact values.
pub fn accessory_point(a_param: C64, p: &TorusPoint, l: &LatticeData, seed: Option<TorusPoint>) -> Result<AccessoryPoint> {
    match a_from_a(a_param, p, l, seed) {
        Err(Error::Corner(k)) => {
            let h = TorusPoint::half_period(k, l.b);
            let mut pt = exponents_at(a_param, h, p, l)?;
            pt.tri = corner_discriminants(k).map(|e| C64::new(e, 0.0));
            pt.at_corner = Some(k);
            Ok(pt)
        }
        other => other,
    }
}

fn dist_to_segment(x: C64, a: C64, b: C64) -> f64 {
    let d = b - a;
    let t = (((x - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
    (x - (a + t * d)).norm()
}

/// Distance from the segment [a, a+d] to the set pts + lattice.
fn clearance(a: C64, d: C64, pts: &[C64], l: &LatticeData) -> f64 {
    let mut best = f64::INFINITY;
    for &x in pts {
        for m in -3..=3 {
            for n in -3..=3 {
                let y = x + m as f64 + l.tau * n as f64;
                best = best.min(dist_to_segment(y, a, a + d));
            }
        }
    }
    best
}

/// Base point whose straight period path stays clear of +-p and the lattice.
pub fn ode_base_point(p: &TorusPoint, l: &LatticeData, j: usize) -> Result<C64> {
    let omega = if j == 1 { C64::new(1.0, 0.0) } else { l.tau };
    let step = (1.0 + l.tau) / 16.0;
    let need = 0.02 * l.b.min(1.0);
    for m in 0..=8 {
        let q0 = (1.0 + l.tau) / 4.0 + step * m as f64;
        if clearance(q0, omega, &[p.z, -p.z, C64::default()], l) >= need {
            return Ok(q0);
        }
    }
    Err(Error::Domain(format!("no admissible base point: period path {j} meets the singular set")))
}

/// Half-trace of the monodromy of y'' = I y along [q0, q0 + omega_j],
/// normalized by the multiplier of sigma(z)/sqrt(sigma(z-p)sigma(z+p)) along
/// the same path so that the value refers to a cycle avoiding the cut
/// joining -p to p.
pub fn discriminant_ode(a_param: C64, p: &TorusPoint, l: &LatticeData, j: usize) -> Result<C64> {
    discriminant_ode_with(a_param, p, l, j, Tolerances::default())
}

pub fn discriminant_ode_with(a_param: C64, p: &TorusPoint, l: &LatticeData, j: usize, tol: Tolerances) -> Result<C64> {
    if j != 1 && j != 2 {
        return Err(Error::Domain(format!("discriminant index {j} must be 1 or 2")));
    }
    check_not_half_period(p)?;
    let q0 = ode_base_point(p, l, j)?;
    let omega = if j == 1 { C64::new(1.0, 0.0) } else { l.tau };
    let w = l.eval(2.0 * p.z)?;
    let rhs = |t: f64, y: &[C64; 5]| -> Result<[C64; 5]> {
        let z = q0 + t * omega;
        let u = l.eval(z + p.z)?;
        let v = l.eval(z - p.z)?;
        let zz = l.zeta(z)?;
        let pot = 0.75 * (u.wp + v.wp - w.wp) + a_param * (u.zeta - v.zeta - w.zeta) + a_param * a_param;
        let k = omega * omega * pot;
        Ok([y[1], k * y[0], y[3], k * y[2], omega * (2.0 * zz - u.zeta - v.zeta)])
    };
    let one = C64::new(1.0, 0.0);
    let zero = C64::default();
    let y = integrate(rhs, 0.0, 1.0, [one, zero, zero, one, zero], tol)?;
    let wr = y[0] * y[3] - y[1] * y[2];
    let mag = (y[0] * y[3]).norm() + (y[1] * y[2]).norm();
    if (wr - 1.0).norm() > 1e-9 * mag.max(1.0) {
        return Err(Error::Inconsistency(format!("Wronskian drifted to {wr}")));
    }
    let m = y[4] / (2.0 * PI * I);
    let mr = m.re.round();
    if (m - mr).norm() > 1e-6 {
        return Err(Error::Inconsistency(format!("log-multiplier integral {m} is not an integer")));
    }
    let sign = if (mr as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    Ok(sign * 0.5 * (y[0] + y[3]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Membership {
    pub in_s1: bool,
    pub in_s2: bool,
    pub in_s3: bool,
    pub in_s1_star: bool,
    pub in_s2_star: bool,
}

pub const MEMBERSHIP_TOL: f64 = 1e-8;

fn real_enough(t: C64, tol: f64) -> bool {
    t.im.abs() <= tol * t.re.abs().max(1.0)
}

pub fn in_band(t: C64) -> bool {
    in_band_with(t, MEMBERSHIP_TOL)
}

pub fn in_star(t: C64) -> bool {
    in_star_with(t, MEMBERSHIP_TOL)
}

pub fn in_band_with(t: C64, tol: f64) -> bool {
    real_enough(t, tol) && t.re.abs() <= 1.0 + tol
}

pub fn in_star_with(t: C64, tol: f64) -> bool {
    real_enough(t, tol) && t.re > 1.0 + tol
}

pub fn membership_of(tri: &[C64; 3]) -> Membership {
    membership_with(tri, MEMBERSHIP_TOL)
}

pub fn membership_with(tri: &[C64; 3], tol: f64) -> Membership {
    Membership {
        in_s1: in_band_with(tri[0], tol),
        in_s2: in_band_with(tri[1], tol),
        in_s3: in_band_with(tri[2], tol),
        in_s1_star: in_star_with(tri[0], tol),
        in_s2_star: in_star_with(tri[1], tol),
    }
}

pub fn sigma_membership(a_param: C64, p: &TorusPoint, l: &LatticeData) -> Result<Membership> {
    if !a_param.re.is_finite() || !a_param.im.is_finite() {
        return Err(Error::Domain("non-finite accessory parameter".into()));
    }
    Ok(membership_of(&accessory_point(a_param, p, l, None)?.tri))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TripleFlags {
    pub s1: bool,
    pub s2: bool,
    pub s3: bool,
}

fn special_values(l: &LatticeData, factor: f64) -> [C64; 3] {
    let two_tau_m1 = 2.0 * l.tau - 1.0;
    [C64::default(), factor * 2.0 * PI * I / l.tau, factor * 4.0 * PI * I / two_tau_m1]
}

fn flags(x: C64, targets: [C64; 3], tol: f64) -> TripleFlags {
    TripleFlags {
        s1: (x - targets[0]).norm() < tol,
        s2: (x - targets[1]).norm() < tol,
        s3: (x - targets[2]).norm() < tol,
    }
}

/// Whether A_k is a cusp of sigma_1, sigma_2, sigma_3.
pub fn cusp_test(k: usize, p: &TorusPoint, l: &LatticeData) -> Result<TripleFlags> {
    let x = l.wp(p.z - l.half_period(k))? + l.eta1;
    let tol = 1e-8 * l.eta1.abs().max(l.two_pi_over_b).max(1.0);
    Ok(flags(x, special_values(l, 1.0), tol))
}

/// Whether A is a branch point of sigma_1, sigma_2, sigma_3.
pub fn branch_test(a_param: C64, p: &TorusPoint, l: &LatticeData) -> Result<TripleFlags> {
    let ap = a_from_a(a_param, p, l, None)?;
    let x = l.wp(ap.a.z + p.z)? + l.wp(ap.a.z - p.z)? + 2.0 * l.eta1;
    let tol = 1e-8 * l.eta1.abs().max(2.0 * l.two_pi_over_b).max(1.0);
    Ok(flags(x, special_values(l, 2.0), tol))
}
