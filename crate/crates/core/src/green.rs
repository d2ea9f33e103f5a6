//! Gradient and Hessian of G_p and the critical-point census.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::LatticeData;
use crate::point::TorusPoint;

pub const DEFAULT_GRID: usize = 48;
/// Wrapped distance under which two converged roots are the same point.
pub const DEDUP_TOL: f64 = 1e-7;
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Merge radius for Newton clouds around nearly degenerate zeros.
const CLUSTER_TOL: f64 = 1e-4;

/// dG/dz = -(zeta(z) - r eta1 - s eta2) / (4 pi).
pub fn grad_g(z: &TorusPoint, l: &LatticeData) -> Result<C64> {
    let z = z.canonical();
    let zeta = l.zeta(z.z)?;
    Ok(-(zeta - z.r * l.eta1 - z.s * l.eta2) / (4.0 * PI))
}

/// F(a) = zeta(a+p) + zeta(a-p) - 2(r eta1 + s eta2), which is -8 pi dG_p/dz.
pub fn grad_gp(a: &TorusPoint, p: &TorusPoint, l: &LatticeData) -> Result<C64> {
    Ok(gp_data(a, p, l)?.0)
}

/// F(a) together with p(a+p) + p(a-p).
fn gp_data(a: &TorusPoint, p: &TorusPoint, l: &LatticeData) -> Result<(C64, C64)> {
    let u = l.eval(a.z + p.z)?;
    let v = l.eval(a.z - p.z)?;
    let f = u.zeta + v.zeta - 2.0 * (a.r * l.eta1 + a.s * l.eta2);
    Ok((f, u.wp + v.wp))
}

/// det D^2 G_p from the value of (p(a+p) + p(a-p) + 2 eta1)/2. The identity
/// holds at every regular point, not only at critical ones.
fn det_from_alpha(alpha: C64, l: &LatticeData) -> f64 {
    let pb = PI / l.b;
    (pb * pb - (alpha - pb).norm_sqr()) / (4.0 * PI * PI)
}

pub fn hessian_det_at(a: &TorusPoint, p: &TorusPoint, l: &LatticeData) -> Result<f64> {
    let (_, s) = gp_data(a, p, l)?;
    Ok(det_from_alpha((s + 2.0 * l.eta1) / 2.0, l))
}

pub fn hessian_det_nontrivial(a: &TorusPoint, p: &TorusPoint, l: &LatticeData) -> Result<f64> {
    let (f, s) = gp_data(a, p, l)?;
    if f.norm() > 1e-8 {
        return Err(Error::Precondition(format!("|grad G_p| = {:e} at a non-critical point", f.norm())));
    }
    Ok(det_from_alpha((s + 2.0 * l.eta1) / 2.0, l))
}

pub fn hessian_det_halfperiod(k: usize, p: &TorusPoint, l: &LatticeData) -> Result<f64> {
    let w = l.wp(p.z - l.half_period(k))?;
    Ok(det_from_alpha(w + l.eta1, l))
}

/// -(1/2 pi) ln|exp(-eta1 z^2/2) sigma(z)| + (Im z)^2/(2b), unnormalized.
pub fn green_value(z: &TorusPoint, l: &LatticeData) -> Result<f64> {
    let z = z.canonical();
    Ok(-l.log_abs_sigma_reduced(z.z)? / (2.0 * PI) + z.z.im * z.z.im / (2.0 * l.b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Saddle,
    Extremum,
    Degenerate,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Saddle => "saddle",
            Kind::Extremum => "extremum",
            Kind::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CriticalPointRecord {
    pub location: TorusPoint,
    pub trivial: bool,
    pub hessian_det: f64,
    pub kind: Kind,
    pub local_degree: Option<i32>,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusStatus {
    Complete,
    /// Some record is degenerate; no count guarantee.
    Degenerate,
}

#[derive(Debug, Clone)]
pub struct Census {
    pub records: Vec<CriticalPointRecord>,
    pub status: CensusStatus,
    pub grid_n: usize,
}

impl Census {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &CriticalPointRecord> {
        self.records.iter().filter(|r| !r.trivial)
    }

    pub fn pair_count(&self) -> usize {
        self.nontrivial().count() / 2
    }
}

/// Degeneracy threshold: 1e-8 times the largest possible det, 1/(4b^2).
pub fn tol_deg(l: &LatticeData) -> f64 {
    1e-8 / (4.0 * l.b * l.b)
}

fn classify(det: f64, l: &LatticeData) -> (Kind, Option<i32>) {
    let t = tol_deg(l);
    if det < -t {
        (Kind::Saddle, Some(-1))
    } else if det > t {
        (Kind::Extremum, Some(1))
    } else {
        (Kind::Degenerate, None)
    }
}

pub fn degree_sum(records: &[CriticalPointRecord]) -> Result<i32> {
    records
        .iter()
        .map(|r| r.local_degree.ok_or(Error::DegenerateRecord))
        .sum()
}

/// Damped Newton on F in real coordinates (r, s).
fn newton(seed: (f64, f64), p: &TorusPoint, l: &LatticeData) -> Option<(TorusPoint, f64)> {
    let b = l.b;
    let near_pole = |a: &TorusPoint| a.wrapped_dist(p) < 1e-6 || a.wrapped_dist(&p.neg()) < 1e-6;
    let mut a = TorusPoint::new(seed.0, seed.1, b);
    let (mut f, mut sum) = gp_data(&a, p, l).ok()?;
    for _ in 0..60 {
        if f.norm() < 1e-13 {
            break;
        }
        // dF = -(sum) da - 2 eta1 dr - 2 eta2 ds, da = dr + tau ds
        let fr = -sum - 2.0 * l.eta1;
        let fs = -sum * l.tau - 2.0 * l.eta2;
        let det = fr.re * fs.im - fs.re * fr.im;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dr = (f.re * fs.im - fs.re * f.im) / det;
        let ds = (fr.re * f.im - f.re * fr.im) / det;
        let (mut lam, mut accepted) = (1.0, None);
        for _ in 0..=8 {
            let cand = TorusPoint::new(a.r - lam * dr, a.s - lam * ds, b);
            if near_pole(&cand) {
                lam *= 0.5;
                continue;
            }
            if let Ok((fc, sc)) = gp_data(&cand, p, l) {
                if fc.norm() < f.norm() {
                    accepted = Some((cand, fc, sc));
                    break;
                }
            }
            lam *= 0.5;
        }
        match accepted {
            Some((c, fc, sc)) => {
                let small = (lam * dr).hypot(lam * ds) < 1e-15;
                a = c;
                f = fc;
                sum = sc;
                if small {
                    break;
                }
            }
            None => break,
        }
    }
    (f.norm() < RESIDUAL_TOL).then_some((a, f.norm()))
}

fn record(location: TorusPoint, trivial: bool, det: f64, residual: f64, l: &LatticeData) -> CriticalPointRecord {
    let (kind, local_degree) = classify(det, l);
    CriticalPointRecord { location, trivial, hessian_det: det, kind, local_degree, residual }
}

fn census_once(p: &TorusPoint, l: &LatticeData, grid_n: usize) -> Result<Vec<CriticalPointRecord>> {
    let b = l.b;
    let near_deg = 1e-4 / (4.0 * b * b);
    let mut out = Vec::new();
    for k in 0..4 {
        let h = TorusPoint::half_period(k, b);
        let det = hessian_det_halfperiod(k, p, l)?;
        let res = grad_gp(&h, p, l)?.norm();
        out.push(record(h.canonical(), true, det, res, l));
    }
    let seeds: Vec<(f64, f64)> = (0..grid_n * grid_n)
        .map(|i| {
            let (x, y) = (i % grid_n, i / grid_n);
            let h = 1.0 / grid_n as f64;
            (-0.5 + (x as f64 + 0.5) * h, -0.5 + (y as f64 + 0.5) * h)
        })
        .collect();
    let mut found: Vec<(TorusPoint, f64)> = seeds.par_iter().filter_map(|&s| newton(s, p, l)).collect();
    found.sort_by(|x, y| x.1.total_cmp(&y.1));

    // Near a (nearly) degenerate zero Newton stalls on a small cloud of
    // points that all meet the residual bound; those merge into one root.
    let absorbs = |c: &TorusPoint, det: f64, a: &TorusPoint| {
        let d = c.wrapped_dist(a);
        d < DEDUP_TOL || (d < CLUSTER_TOL && det.abs() <= near_deg)
    };
    let mut roots: Vec<(TorusPoint, f64, f64)> = Vec::new();
    for (a, res) in found {
        if out.iter().any(|t| absorbs(&t.location, t.hessian_det, &a) || t.location.wrapped_dist(&a) < 1e-6) {
            continue;
        }
        for cand in [a, a.neg()] {
            if roots.iter().all(|(c, _, det)| !absorbs(c, *det, &cand)) {
                let det = hessian_det_at(&cand, p, l)?;
                roots.push((cand, res, det));
            }
        }
    }
    for (a, res, det) in roots {
        out.push(record(a, false, det, res, l));
    }
    out.sort_by(|x, y| {
        (x.location.r, x.location.s)
            .partial_cmp(&(y.location.r, y.location.s))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}

/// All critical points of G_p: the four half-periods plus every nontrivial
/// zero of the gradient reached from a grid_n x grid_n seed grid.
pub fn census(p: &TorusPoint, l: &LatticeData, grid_n: usize) -> Result<Census> {
    if grid_n == 0 {
        return Err(Error::Domain("grid size must be positive".into()));
    }
    let p = p.canonical();
    if p.half_period_index(crate::point::POINT_TOL).is_some() {
        return Err(Error::HalfPeriod);
    }
    let mut n = grid_n;
    let mut last = 0;
    for _ in 0..2 {
        let records = census_once(&p, l, n)?;
        if records.iter().any(|r| r.kind == Kind::Degenerate) {
            return Ok(Census { records, status: CensusStatus::Degenerate, grid_n: n });
        }
        let deg = degree_sum(&records)?;
        if deg == -2 && records.len() <= 10 {
            return Ok(Census { records, status: CensusStatus::Complete, grid_n: n });
        }
        last = deg;
        n *= 2;
    }
    Err(Error::CensusIncomplete(last))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::compute_invariants;

    #[test]
    fn half_periods_are_critical() {
        for b in [0.7, 1.0, 2.2] {
            let l = compute_invariants(b).unwrap();
            let p = TorusPoint::new(0.17, 0.29, b);
            for k in 0..4 {
                let h = TorusPoint::half_period(k, b);
                assert!(grad_gp(&h, &p, &l).unwrap().norm() < 1e-11);
                if k > 0 {
                    assert!(grad_g(&h, &l).unwrap().norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn grad_g_is_periodic() {
        let l = compute_invariants(1.3).unwrap();
        let z = TorusPoint::raw(0.21, -0.33, 1.3);
        let w = TorusPoint::raw(1.21, -0.33, 1.3);
        let (gz, gw) = (l.zeta(z.z).unwrap(), l.zeta(w.z).unwrap());
        let f = |g: C64, t: &TorusPoint| g - t.r * l.eta1 - t.s * l.eta2;
        assert!((f(gz, &z) - f(gw, &w)).norm() < 1e-12);
    }

    #[test]
    fn special_nontrivial_points() {
        let l = compute_invariants(1.3).unwrap();
        let (p, a) = (TorusPoint::new(0.25, 0.0, 1.3), TorusPoint::new(0.25, 0.5, 1.3));
        assert!(grad_gp(&a, &p, &l).unwrap().norm() < 1e-11);
        let l = compute_invariants(0.8).unwrap();
        let (p, a) = (TorusPoint::new(0.0, 0.25, 0.8), TorusPoint::new(0.5, 0.25, 0.8));
        assert!(grad_gp(&a, &p, &l).unwrap().norm() < 1e-11);
    }

    #[test]
    fn saddles_at_special_points() {
        let l = compute_invariants(1.0).unwrap();
        let p = TorusPoint::new(0.25, 0.0, 1.0);
        let a = TorusPoint::new(0.25, 0.5, 1.0);
        assert!(hessian_det_nontrivial(&a, &p, &l).unwrap() < 0.0);
        let p = TorusPoint::new(0.0, 0.25, 1.0);
        let a = TorusPoint::new(0.5, 0.25, 1.0);
        assert!(hessian_det_nontrivial(&a, &p, &l).unwrap() < 0.0);
        let off = TorusPoint::new(0.1, 0.1, 1.0);
        assert!(matches!(hessian_det_nontrivial(&off, &p, &l), Err(Error::Precondition(_))));
    }

    #[test]
    fn census_quarter_period() {
        let l = compute_invariants(1.0).unwrap();
        let c = census(&TorusPoint::new(0.25, 0.0, 1.0), &l, DEFAULT_GRID).unwrap();
        assert_eq!(c.len(), 6);
        assert_eq!(c.status, CensusStatus::Complete);
        assert_eq!(degree_sum(&c.records).unwrap(), -2);
        let a = TorusPoint::new(0.25, 0.5, 1.0);
        assert!(c.nontrivial().any(|r| r.location.approx_eq(&a)));
        assert!(c.nontrivial().any(|r| r.location.approx_eq(&a.neg())));
        assert!(c.records.iter().all(|r| r.residual < RESIDUAL_TOL && r.kind != Kind::Degenerate));
        let hs: Vec<f64> = (0..4).map(|k| hessian_det_halfperiod(k, &TorusPoint::new(0.25, 0.0, 1.0), &l).unwrap()).collect();
        assert!(hs.iter().all(|h| h.abs() > 1e-6));
    }

    #[test]
    fn synthetic_degree_sum() {
        let l = compute_invariants(1.0).unwrap();
        let p = TorusPoint::new(0.0, 0.0, 1.0);
        let recs: Vec<_> = [1.0, 1.0, -1.0, -1.0].iter().map(|&d| record(p, true, d, 0.0, &l)).collect();
        assert_eq!(degree_sum(&recs).unwrap(), 0);
        let bad = [record(p, true, 0.0, 0.0, &l)];
        assert!(matches!(degree_sum(&bad), Err(Error::DegenerateRecord)));
    }
}
