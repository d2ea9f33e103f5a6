//! Hitchin's formula, the critical point <-> accessory parameter bridge and
//! the degenerate-point scan.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::disks::{classify_region, disks, thresholds, DiskSpec, Region};
use crate::error::{Error, Result};
use crate::gle::{exponents_at, AccessoryPoint};
use crate::green::{census, grad_gp, DEFAULT_GRID};
use crate::kernel::inverse_wp;
use crate::lattice::LatticeData;
use crate::point::TorusPoint;

fn near_half_integer(x: f64) -> bool {
    let y = 2.0 * x;
    (y - y.round()).abs() < 1e-9
}

/// p(p_{r,s}) = p(z) + p'(z) / (2(zeta(z) - r eta1 - s eta2)), z = r + s tau.
pub fn hitchin_wp(r: f64, s: f64, l: &LatticeData) -> Result<C64> {
    if near_half_integer(r) && near_half_integer(s) {
        return Err(Error::HalfPeriod);
    }
    let z = C64::new(r, s * l.b);
    let v = l.eval(z)?;
    let den = v.zeta - r * l.eta1 - s * l.eta2;
    if den.norm() < 1e-12 {
        return Err(Error::Domain(format!("Hitchin denominator vanishes at (r, s) = ({r}, {s})")));
    }
    Ok(v.wp + v.wp1 / (2.0 * den))
}

/// A for a nontrivial critical point a of G_p; its exponents must be real.
pub fn accessory_from_critical(a: &TorusPoint, p: &TorusPoint, l: &LatticeData) -> Result<AccessoryPoint> {
    let res = grad_gp(a, p, l)?.norm();
    if res > 1e-8 {
        return Err(Error::Precondition(format!("a is not a critical point of G_p (residual {res:e})")));
    }
    if a.half_period_index(1e-9).is_some() {
        return Err(Error::Precondition("a is a trivial critical point".into()));
    }
    let a_param = 0.5 * (l.zeta(p.z + a.z)? + l.zeta(p.z - a.z)? - l.zeta(2.0 * p.z)?);
    let pt = exponents_at(a_param, *a, p, l)?;
    if pt.r.im.abs() > 1e-8 || pt.s.im.abs() > 1e-8 {
        return Err(Error::Inconsistency(format!("exponents not real: r = {}, s = {}", pt.r, pt.s)));
    }
    Ok(pt)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HitchinRegion {
    BoundaryIII,
    InteriorI,
    InteriorII,
}

impl HitchinRegion {
    pub fn as_str(self) -> &'static str {
        match self {
            HitchinRegion::BoundaryIII => "boundary_I_II",
            HitchinRegion::InteriorI => "interior_I",
            HitchinRegion::InteriorII => "interior_II",
        }
    }
}

#[derive(Debug, Clone)]
pub struct HitchinSample {
    pub r: f64,
    pub s: f64,
    /// None when the formula failed at this sample.
    pub wp_p: Option<C64>,
    pub region: HitchinRegion,
}

/// n x n interior grids of I and II plus the boundary lattice of the two
/// squares minus the half-lattice points.
pub fn sign_survey(l: &LatticeData, n: usize) -> Result<Vec<HitchinSample>> {
    if n < 2 {
        return Err(Error::Domain("sign survey needs n >= 2".into()));
    }
    let h = 0.5 / (n + 1) as f64;
    let grid: Vec<f64> = (1..=n).map(|i| i as f64 * h).collect();
    let mut pts = Vec::new();
    for &r in &grid {
        for &s in &grid {
            pts.push((r, s, HitchinRegion::InteriorI));
            pts.push((-r, s, HitchinRegion::InteriorII));
        }
    }
    for &t in &grid {
        for (r, s) in [(t, 0.0), (-t, 0.0), (t, 0.5), (-t, 0.5), (0.0, t), (0.5, t), (-0.5, t)] {
            pts.push((r, s, HitchinRegion::BoundaryIII));
        }
    }
    Ok(pts
        .into_iter()
        .map(|(r, s, region)| HitchinSample { r, s, wp_p: hitchin_wp(r, s, l).ok(), region })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanSource {
    /// p(p) from Hitchin's formula on the (r, s) grid of I.
    Hitchin,
    /// p(p) from a grid in the upper half of the p(p)-plane.
    Plane,
    /// p(p) from a local grid around an upper crossing of two circles.
    Junction,
}

#[derive(Debug, Clone)]
pub struct ScanSample {
    pub wp_p: C64,
    pub region: Region,
    pub source: ScanSource,
    pub census_size: Option<usize>,
    /// min |det D^2 G_p| over nontrivial critical points; None if there are none
    pub min_abs_hessian: Option<f64>,
}

fn scan_one(w: C64, source: ScanSource, l: &LatticeData) -> Option<ScanSample> {
    let region = classify_region(w, l).ok()?;
    let mut out = ScanSample { wp_p: w, region, source, census_size: None, min_abs_hessian: None };
    let Ok(p) = inverse_wp(w, l) else { return Some(out) };
    if let Ok(c) = census(&p, l, DEFAULT_GRID) {
        out.census_size = Some(c.len());
        out.min_abs_hessian = c.nontrivial().map(|r| r.hessian_det.abs()).reduce(f64::min);
    }
    Some(out)
}

/// Half-width of the junction windows relative to the smaller radius.
const JUNCTION_WINDOW: f64 = 0.1;

/// Intersection of two circles in the open upper half-plane.
fn upper_crossing(a: &DiskSpec, b: &DiskSpec) -> Option<C64> {
    let (x0, x1) = (a.center.re, b.center.re);
    let dx = x1 - x0;
    if dx.abs() < 1e-14 {
        return None;
    }
    let x = (a.radius * a.radius - b.radius * b.radius + dx * dx) / (2.0 * dx);
    let y2 = a.radius * a.radius - x * x;
    (y2 > 0.0).then(|| C64::new(x0 + x, y2.sqrt()))
}

/// Ranks candidate p(p) values by how close their nontrivial critical
/// points come to degenerate. Grids are nested under doubling of grid_n.
pub fn degenerate_scan(l: &LatticeData, grid_n: usize) -> Result<Vec<ScanSample>> {
    if grid_n < 8 {
        return Err(Error::Domain("degenerate scan needs grid >= 8".into()));
    }
    let t = thresholds(l)?;
    let g = grid_n as f64;
    let mut inputs: Vec<(C64, ScanSource)> = Vec::new();
    for i in 1..grid_n {
        for j in 1..grid_n {
            if let Ok(w) = hitchin_wp(0.5 * i as f64 / g, 0.5 * j as f64 / g, l) {
                inputs.push((w, ScanSource::Hitchin));
            }
        }
    }
    let width = t.d[7] - t.d[0];
    let (lo, hi, top) = (t.d[0] - 0.25 * width, t.d[7] + 0.25 * width, 0.5 * width);
    for i in 1..grid_n {
        for j in 1..grid_n {
            let w = C64::new(lo + (hi - lo) * i as f64 / g, top * j as f64 / g);
            inputs.push((w, ScanSource::Plane));
        }
    }
    let ds = disks(l)?;
    for j in 0..4 {
        for k in j + 1..4 {
            let Some(c) = upper_crossing(&ds[j], &ds[k]) else { continue };
            let h = JUNCTION_WINDOW * ds[j].radius.min(ds[k].radius);
            for i in 1..grid_n {
                for m in 1..grid_n {
                    let off = C64::new(2.0 * i as f64 / g - 1.0, 2.0 * m as f64 / g - 1.0);
                    inputs.push((c + h * off, ScanSource::Junction));
                }
            }
        }
    }
    let mut out: Vec<ScanSample> = inputs.par_iter().filter_map(|&(w, src)| scan_one(w, src, l)).collect();
    out.sort_by(|a, b| match (a.min_abs_hessian, b.min_abs_hessian) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => a.wp_p.re.total_cmp(&b.wp_p.re).then(a.wp_p.im.total_cmp(&b.wp_p.im)),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::compute_invariants;

    #[test]
    fn special_values() {
        for b in [0.8, 1.0, 1.7] {
            let l = compute_invariants(b).unwrap();
            let w = hitchin_wp(0.25, 0.5, &l).unwrap();
            assert!((w - l.wp(C64::new(0.25, 0.0)).unwrap()).norm() < 1e-9);
            let w = hitchin_wp(0.5, 0.25, &l).unwrap();
            assert!((w - l.wp(C64::new(0.0, 0.25 * b)).unwrap()).norm() < 1e-9);
            assert!(matches!(hitchin_wp(0.5, 0.0, &l), Err(Error::HalfPeriod)));
        }
    }

    #[test]
    fn small_s_limit() {
        let l = compute_invariants(1.0).unwrap();
        let s = 1e-3;
        let w = hitchin_wp(s, s, &l).unwrap();
        let lim = C64::new(0.0, 2.0 * std::f64::consts::PI) / (1.0 + l.tau) - l.eta1;
        assert!((w - lim).norm() < 50.0 * s, "{w} vs {lim}");
    }

    #[test]
    fn critical_to_accessory() {
        let l = compute_invariants(1.0).unwrap();
        let p = TorusPoint::new(0.25, 0.0, 1.0);
        let a = TorusPoint::raw(0.25, 0.5, 1.0);
        let ap = accessory_from_critical(&a, &p, &l).unwrap();
        assert!((ap.r.re - 0.25).abs() < 1e-9 && (ap.s.re - 0.5).abs() < 1e-9);
        let p = TorusPoint::new(0.0, 0.25, 1.0);
        let a = TorusPoint::raw(0.5, 0.25, 1.0);
        let ap = accessory_from_critical(&a, &p, &l).unwrap();
        assert!((ap.r.re - 0.5).abs() < 1e-9 && (ap.s.re - 0.25).abs() < 1e-9);
        let m = crate::gle::membership_of(&ap.tri);
        assert!(m.in_s1 && m.in_s2);
    }

    #[test]
    fn survey_conjugate_pairs() {
        let l = compute_invariants(1.0).unwrap();
        let s = sign_survey(&l, 4).unwrap();
        for x in s.iter().filter(|x| x.region == HitchinRegion::InteriorI) {
            let y = s.iter().find(|y| y.region == HitchinRegion::InteriorII && y.r == -x.r && y.s == x.s).unwrap();
            assert!((x.wp_p.unwrap() - y.wp_p.unwrap().conj()).norm() < 1e-9);
        }
    }
}
