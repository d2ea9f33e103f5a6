//! Disks B_0..B_3 in the p(p)-plane, the real thresholds d_1..d_8 and the
//! region classifier.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::green::hessian_det_halfperiod;
use crate::lattice::LatticeData;
use crate::point::TorusPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiskKind {
    Disk,
    HalfPlane,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskSpec {
    pub k: usize,
    pub center: C64,
    pub radius: f64,
    pub kind: DiskKind,
}

impl DiskSpec {
    /// Signed distance to the circle, positive outside.
    pub fn signed_dist(&self, w: C64) -> f64 {
        (w - self.center).norm() - self.radius
    }

    pub fn contains(&self, w: C64) -> bool {
        self.signed_dist(w) < 0.0
    }

    /// Real boundary crossings (center - radius, center + radius).
    pub fn real_ends(&self) -> (f64, f64) {
        (self.center.re - self.radius, self.center.re + self.radius)
    }
}

pub fn disk(k: usize, l: &LatticeData) -> Result<DiskSpec> {
    let pb = PI / l.b;
    if k == 0 {
        return Ok(DiskSpec { k, center: C64::new(pb - l.eta1, 0.0), radius: pb, kind: DiskKind::Disk });
    }
    if k > 3 {
        return Err(Error::Domain(format!("disk index {k} out of range")));
    }
    let e = l.e(k);
    let f = l.branch_factor(k);
    let alpha = (pb - (l.eta1 + e)) / f;
    let beta = pb / f.abs();
    if (alpha.abs() - beta).abs() < 1e-12 {
        return Err(Error::DegenerateDisk(k));
    }
    let den = alpha * alpha - beta * beta;
    Ok(DiskSpec { k, center: C64::new(e + alpha / den, 0.0), radius: beta / den.abs(), kind: DiskKind::Disk })
}

pub fn disks(l: &LatticeData) -> Result<[DiskSpec; 4]> {
    Ok([disk(0, l)?, disk(1, l)?, disk(2, l)?, disk(3, l)?])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionThresholds {
    pub d: [f64; 8],
    /// p(tau/4), e2, p(1/4 + tau/2), e3, p(1/2 + tau/4), e1, p(1/4)
    pub landmark: [f64; 7],
}

impl RegionThresholds {
    /// d_1 < L_1 < d_2 < L_2 < ... < L_7 < d_8
    pub fn chain(&self) -> [f64; 15] {
        let mut c = [0.0; 15];
        for i in 0..8 {
            c[2 * i] = self.d[i];
        }
        for i in 0..7 {
            c[2 * i + 1] = self.landmark[i];
        }
        c
    }

    /// Smallest gap in the interleaving chain (negative if violated).
    pub fn min_margin(&self) -> f64 {
        self.chain().windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }

    fn half_period_values(&self) -> [f64; 3] {
        [self.landmark[5], self.landmark[1], self.landmark[3]]
    }
}

pub fn thresholds(l: &LatticeData) -> Result<RegionThresholds> {
    thresholds_with(l, CHAIN_SLACK)
}

/// Relative slack allowed in the interleaving chain before it is fatal.
pub const CHAIN_SLACK: f64 = 1e-9;

pub fn thresholds_with(l: &LatticeData, slack: f64) -> Result<RegionThresholds> {
    let tpb = l.two_pi_over_b;
    let f = |k: usize| l.branch_factor(k);
    let (e1, e2, e3, eta) = (l.e1, l.e2, l.e3, l.eta1);
    let d = [
        e1 + f(1) / (tpb - (e1 + eta)),
        e3 + f(3) / (tpb - (e3 + eta)),
        -eta,
        e1 - f(1) / (e1 + eta),
        e2 + f(2) / (tpb - (e2 + eta)),
        tpb - eta,
        e3 - f(3) / (e3 + eta),
        e2 - f(2) / (e2 + eta),
    ];
    let b = l.b;
    let at = |r: f64, s: f64| -> Result<f64> { Ok(l.wp(C64::new(r, s * b))?.re) };
    let landmark = [at(0.0, 0.25)?, e2, at(0.25, 0.5)?, e3, at(0.5, 0.25)?, e1, at(0.25, 0.0)?];
    let t = RegionThresholds { d, landmark };
    let chain = t.chain();
    for w in chain.windows(2) {
        if w[1] - w[0] < -slack * w[0].abs().max(1.0) {
            return Err(Error::Inconsistency(format!("threshold chain out of order at {} > {}", w[0], w[1])));
        }
    }
    Ok(t)
}

/// Number of nontrivial critical pairs predicted for a real p(p).
pub fn predicted_pair_count(wp_p: f64, t: &RegionThresholds) -> Result<u8> {
    let scale = wp_p.abs().max(1.0);
    if t.half_period_values().iter().any(|&e| (wp_p - e).abs() <= 1e-12 * scale) {
        return Err(Error::HalfPeriod);
    }
    let d = &t.d;
    let tol = 1e-12 * scale;
    let inside = |lo: f64, hi: f64| wp_p > lo + tol && wp_p < hi - tol;
    let yes = inside(d[0], d[1]) || inside(d[2], d[3]) || inside(d[4], d[5]) || inside(d[6], d[7]);
    Ok(u8::from(yes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Xi1,
    Xi2,
    Xi3,
    Xi4,
    Xi5,
    Xi6,
    Xi7,
    Xi8,
    Xi9,
    Boundary,
    Excluded,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Xi1 => "Xi1",
            Region::Xi2 => "Xi2",
            Region::Xi3 => "Xi3",
            Region::Xi4 => "Xi4",
            Region::Xi5 => "Xi5",
            Region::Xi6 => "Xi6",
            Region::Xi7 => "Xi7",
            Region::Xi8 => "Xi8",
            Region::Xi9 => "Xi9",
            Region::Boundary => "boundary",
            Region::Excluded => "excluded",
        }
    }

    /// Critical-point count that holds throughout the region, if any.
    pub fn fixed_count(self) -> Option<usize> {
        match self {
            Region::Xi1 | Region::Xi2 | Region::Xi3 | Region::Xi4 => Some(6),
            _ => None,
        }
    }
}

pub fn classify_region(w: C64, l: &LatticeData) -> Result<Region> {
    if !w.re.is_finite() || !w.im.is_finite() {
        return Err(Error::Domain("non-finite p(p)".into()));
    }
    if l.es().iter().any(|&e| (w - e).norm() < 1e-10 * e.abs().max(1.0)) {
        return Ok(Region::Excluded);
    }
    let ds = disks(l)?;
    if ds.iter().any(|d| d.signed_dist(w).abs() < 1e-10 * d.radius.max(1.0)) {
        return Ok(Region::Boundary);
    }
    let [b0, b1, b2, b3] = ds.map(|d| d.contains(w));
    Ok(match (b0, b1, b2, b3) {
        (true, true, _, _) => Region::Xi2,
        (true, _, true, _) => Region::Xi3,
        (true, false, false, _) => Region::Xi6,
        (false, true, _, false) => Region::Xi1,
        (false, _, true, false) => Region::Xi4,
        (false, true, _, true) => Region::Xi7,
        (false, _, true, true) => Region::Xi8,
        (false, false, false, true) => Region::Xi9,
        (false, false, false, false) => Region::Xi5,
    })
}

/// Whether p(p) lies on the boundary of B_k, cross-checked against the
/// vanishing of the half-period Hessian and against p(p - omega_k/2)
/// lying on the boundary of B_0.
pub fn degeneracy_boundary_test(p: &TorusPoint, k: usize, l: &LatticeData) -> Result<bool> {
    if k > 3 {
        return Err(Error::Domain(format!("half-period index {k} out of range")));
    }
    let wp = l.wp(p.z)?;
    let dk = disk(k, l)?;
    let d0 = disk(0, l)?;
    let shifted = l.wp(p.z - l.half_period(k))?;
    let det = hessian_det_halfperiod(k, p, l)?;

    let scale_k = dk.radius.max(1.0);
    let scale_0 = d0.radius.max(1.0);
    let dist_k = dk.signed_dist(wp).abs();
    let dist_0 = d0.signed_dist(shifted).abs();
    // 4 pi^2 det = R^2 - |w - c|^2 = (R - |w - c|)(R + |w - c|)
    let dist_h = 4.0 * PI * PI * det.abs() / (d0.radius + (shifted - d0.center).norm());
    // local stretch of the Moebius map p(p) -> p(p - omega_k/2)
    let stretch = if k == 0 { 1.0 } else { l.branch_factor(k).abs() / (wp - l.e(k)).norm_sqr() };
    let on_k = dist_k < 1e-9 * scale_k;
    let expected_0 = stretch * dist_k;
    let loose = 1e-6 * scale_0 * stretch.max(1.0);
    if on_k && (dist_0 > loose || dist_h > loose) {
        return Err(Error::Inconsistency(format!(
            "p(p) on boundary of B_{k} but shifted distance {dist_0:e}, Hessian distance {dist_h:e}"
        )));
    }
    if !on_k && expected_0 > 1e3 * loose && (dist_0 < 1e-12 * scale_0 || dist_h < 1e-12 * scale_0) {
        return Err(Error::Inconsistency(format!("B_{k} test negative but B_0 test positive for p = {}", p.z)));
    }
    Ok(on_k)
}
