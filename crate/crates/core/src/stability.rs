//! Sweeps of the discriminants along the real or imaginary A-axis and
//! extraction of the stability-set structure there.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::gle::{accessory_corners, accessory_point, in_band, membership_of, Membership, MEMBERSHIP_TOL};
use crate::lattice::LatticeData;
use crate::point::TorusPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Real,
    Imag,
}

impl Axis {
    pub fn point(self, t: f64) -> C64 {
        match self {
            Axis::Real => C64::new(t, 0.0),
            Axis::Imag => C64::new(0.0, t),
        }
    }

    pub fn coord(self, a: C64) -> f64 {
        match self {
            Axis::Real => a.re,
            Axis::Imag => a.im,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SweepSample {
    pub t: f64,
    pub a_param: C64,
    pub tri: [C64; 3],
    pub membership: Membership,
    pub corner: Option<usize>,
    a: TorusPoint,
}

pub const SWEEP_POINTS: usize = 2001;

/// Axis window around the corners and the asymptotic center of the
/// unbounded arcs, padded by five times the corner spread.
pub fn default_range(p: &TorusPoint, l: &LatticeData, axis: Axis) -> Result<(f64, f64)> {
    let ak = accessory_corners(p, l)?;
    let asym = -(2.0 * p.z * l.eta1 - l.zeta(2.0 * p.z)?) / 2.0;
    let mut ts: Vec<f64> = ak.iter().map(|&a| axis.coord(a)).collect();
    ts.push(axis.coord(asym));
    let lo = ts.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let pad = 5.0 * (hi - lo).max(1.0);
    Ok((lo - pad, hi + pad))
}

fn sample_at(t: f64, p: &TorusPoint, l: &LatticeData, axis: Axis, seed: Option<TorusPoint>) -> Result<SweepSample> {
    let a_param = axis.point(t);
    let ap = accessory_point(a_param, p, l, seed)?;
    Ok(SweepSample { t, a_param, tri: ap.tri, membership: membership_of(&ap.tri), corner: ap.at_corner, a: ap.a })
}

/// n uniform samples on [tmin, tmax], continued in A.
pub fn sweep(p: &TorusPoint, l: &LatticeData, axis: Axis, tmin: f64, tmax: f64, n: usize) -> Result<Vec<SweepSample>> {
    if n < 2 || tmax.partial_cmp(&tmin) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::Domain("sweep needs n >= 2 and tmin < tmax".into()));
    }
    let mut out: Vec<SweepSample> = Vec::with_capacity(n);
    for i in 0..n {
        let t = tmin + (tmax - tmin) * i as f64 / (n - 1) as f64;
        let seed = out.last().map(|s| s.a);
        let s = match sample_at(t, p, l, axis, seed) {
            Ok(s) => s,
            Err(Error::Convergence(_)) => sample_at(t, p, l, axis, None)?,
            Err(e) => return Err(e),
        };
        out.push(s);
    }
    Ok(out)
}

/// Bisects the switch of `pred` between two axis coordinates to 1e-10.
pub fn bisect_switch<F>(p: &TorusPoint, l: &LatticeData, axis: Axis, lo: &SweepSample, hi: &SweepSample, pred: F) -> Result<f64>
where
    F: Fn(&Membership) -> bool,
{
    let (mut a, mut b) = (lo.t, hi.t);
    let va = pred(&lo.membership);
    let mut seed = Some(lo.a);
    while (b - a).abs() > 1e-10 * a.abs().max(1.0) {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        let s = sample_at(m, p, l, axis, seed)?;
        seed = Some(s.a);
        if pred(&s.membership) == va {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Axis coordinates where `pred` switches, each refined by bisection.
pub fn transitions<F>(p: &TorusPoint, l: &LatticeData, axis: Axis, samples: &[SweepSample], pred: F) -> Result<Vec<f64>>
where
    F: Fn(&Membership) -> bool + Copy,
{
    let mut out = Vec::new();
    for w in samples.windows(2) {
        if pred(&w[0].membership) != pred(&w[1].membership) {
            out.push(bisect_switch(p, l, axis, &w[0], &w[1], pred)?);
        }
    }
    Ok(out)
}

fn band_gap(tri: C64) -> f64 {
    tri.re.abs() - 1.0
}

/// Isolated axis points where tri_j touches +-1 from outside the band:
/// local minima of |tri_j| - 1 between out-of-band neighbours, refined by
/// golden-section search and accepted when the minimum reaches 1e-7.
pub fn touch_points(p: &TorusPoint, l: &LatticeData, axis: Axis, j: usize, samples: &[SweepSample]) -> Result<Vec<f64>> {
    let idx = j - 1;
    let outside = |s: &SweepSample| s.tri[idx].im.abs() <= MEMBERSHIP_TOL * s.tri[idx].re.abs().max(1.0)
        && band_gap(s.tri[idx]) > MEMBERSHIP_TOL;
    let mut out = Vec::new();
    for w in samples.windows(3) {
        let g = [band_gap(w[0].tri[idx]), band_gap(w[1].tri[idx]), band_gap(w[2].tri[idx])];
        if !(outside(&w[0]) && outside(&w[2]) && g[1] <= g[0] && g[1] <= g[2]) {
            continue;
        }
        let seed = Some(w[1].a);
        let f = |t: f64| -> Result<f64> { Ok(band_gap(sample_at(t, p, l, axis, seed)?.tri[idx])) };
        let (mut a, mut b) = (w[0].t, w[2].t);
        let gr = 0.5 * (5f64.sqrt() - 1.0);
        let (mut c, mut d) = (b - gr * (b - a), a + gr * (b - a));
        let (mut fc, mut fd) = (f(c)?, f(d)?);
        for _ in 0..80 {
            if (b - a).abs() < 1e-12 * a.abs().max(1.0) {
                break;
            }
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = f(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = f(d)?;
            }
        }
        let t = 0.5 * (a + b);
        if f(t)?.abs() < 1e-7 {
            out.push(t);
        }
    }
    Ok(out)
}

/// Number of axis points in sigma_1 and sigma_2 other than the corners:
/// isolated touches of one discriminant where the other lies in the band.
pub fn correspondence_count(p: &TorusPoint, l: &LatticeData, axis: Axis, n: usize) -> Result<(usize, Vec<f64>)> {
    let (lo, hi) = default_range(p, l, axis)?;
    let samples = sweep(p, l, axis, lo, hi, n)?;
    let corners = accessory_corners(p, l)?;
    let scale = corners.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let mut pts: Vec<f64> = Vec::new();
    for j in 1..=2 {
        for t in touch_points(p, l, axis, j, &samples)? {
            let a = axis.point(t);
            if corners.iter().any(|&c| (a - c).norm() < 1e-6 * scale) {
                continue;
            }
            let s = sample_at(t, p, l, axis, None)?;
            let other = s.tri[2 - j];
            if in_band(other) && pts.iter().all(|&q| (q - t).abs() > 1e-6 * scale) {
                pts.push(t);
            }
        }
    }
    Ok((pts.len(), pts))
}
