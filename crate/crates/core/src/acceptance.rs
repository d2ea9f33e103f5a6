//! End-to-end checks shared by the `acceptance` test target and `verify`.

use std::sync::OnceLock;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::disks::{disks, thresholds, Region};
use crate::error::Result;
use crate::gle::{accessory_corners, accessory_point, discriminant_ode};
use crate::green::{census, degree_sum, hessian_det_halfperiod, CensusStatus, DEFAULT_GRID};
use crate::hitchin::{degenerate_scan, hitchin_wp, sign_survey, HitchinRegion};
use crate::kernel::{inverse_wp_real, Segment};
use crate::lattice::{compute_invariants, LatticeData};
use crate::point::{wrapped_dist, TorusPoint};
use crate::stability::{correspondence_count, default_range, sweep, transitions, Axis, SWEEP_POINTS};

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub const NAMES: [&str; 12] = [
    "invariants at b = 1",
    "Legendre and cubic residuals",
    "threshold chain and disk crossings",
    "real-axis count reproduction",
    "special-p censuses",
    "axis correspondence count",
    "closed-form vs ODE discriminants",
    "sigma_2 / sigma_1 interval structure",
    "sigma_1* and sigma_2 structure",
    "Hitchin signs and fixed-point loop",
    "half-period Hessian vs disks",
    "degenerate-scan sanity",
];

type Check = Result<(bool, String)>;

pub fn run(id: u8) -> CriterionResult {
    let out: Check = match id {
        1 => c1(),
        2 => c2(),
        3 => c3(),
        4 => c4(),
        5 => c5(),
        6 => c6(),
        7 => c7(),
        8 => c8(),
        9 => c9(),
        10 => c10(),
        11 => c11(),
        12 => c12(),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (passed, detail) = out.unwrap_or_else(|e| (false, format!("error: {e}")));
    let name = NAMES.get((id as usize).wrapping_sub(1)).copied().unwrap_or("unknown");
    CriterionResult { id, name, passed, detail }
}

pub fn run_all() -> Vec<CriterionResult> {
    (1..=12).map(run).collect()
}

fn verdict(failures: Vec<String>, ok: String) -> Check {
    if failures.is_empty() {
        Ok((true, ok))
    } else {
        Ok((false, failures.join("; ")))
    }
}

fn c1() -> Check {
    let l = compute_invariants(1.0)?;
    let pi = std::f64::consts::PI;
    let ok = (l.eta1 - pi).abs() < 1e-10
        && l.e3.abs() < 1e-10
        && (l.e1 - 2.18844 * pi).abs() < 1e-3 * pi
        && (l.e1 + l.e2).abs() < 1e-10;
    Ok((ok, format!("eta1 = {:.15}, e1 = {:.12}, e2 = {:.12}, e3 = {:.3e}", l.eta1, l.e1, l.e2, l.e3)))
}

fn c2() -> Check {
    let mut worst = 0f64;
    for b in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let r = compute_invariants(b)?.residuals();
        worst = worst.max(r.legendre).max(r.cubic);
    }
    Ok((worst < 1e-10, format!("max residual {worst:.3e}")))
}

fn c3() -> Check {
    let mut fails = Vec::new();
    let mut worst_margin = f64::INFINITY;
    for b in [0.5, 1.0, 2.0] {
        let l = compute_invariants(b)?;
        let t = thresholds(&l)?;
        worst_margin = worst_margin.min(t.min_margin());
        if t.min_margin() <= 1e-6 {
            fails.push(format!("b = {b}: margin {:.3e}", t.min_margin()));
        }
        let mut ends: Vec<f64> = disks(&l)?.iter().flat_map(|d| {
            let (a, b) = d.real_ends();
            [a, b]
        }).collect();
        ends.sort_by(f64::total_cmp);
        let mut d = t.d.to_vec();
        d.sort_by(f64::total_cmp);
        let dev = ends.iter().zip(&d).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        if dev > 1e-10 {
            fails.push(format!("b = {b}: disk crossings off by {dev:.3e}"));
        }
        if b == 1.0 {
            let pi = std::f64::consts::PI;
            if (t.d[2] + pi).abs() > 1e-10 || (t.d[5] - pi).abs() > 1e-10 {
                fails.push(format!("b = 1: d3 = {}, d6 = {}", t.d[2], t.d[5]));
            }
        }
    }
    verdict(fails, format!("min margin {worst_margin:.3e}"))
}

/// Nontrivial census points from the real-axis sweep, kept for the
/// Hitchin loop check.
struct RealAxisData {
    failures: Vec<String>,
    samples: usize,
    /// (b, p(p), a) for every nontrivial record
    loops: Vec<(f64, f64, TorusPoint)>,
}

static REAL_AXIS: OnceLock<std::result::Result<RealAxisData, String>> = OnceLock::new();

const SAMPLE_FRACTIONS: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

/// Wrapped coordinate for the axis law of each "yes" interval.
fn axis_law(interval: usize, a: &TorusPoint) -> f64 {
    match interval {
        0 => wrapped_dist(a.r - 0.5, 0.0),
        1 => wrapped_dist(0.0, a.s),
        2 => wrapped_dist(a.r, 0.0),
        _ => wrapped_dist(0.0, a.s - 0.5),
    }
}

fn real_axis_data() -> Result<RealAxisData> {
    let mut out = RealAxisData { failures: Vec::new(), samples: 0, loops: Vec::new() };
    for b in [0.7, 1.0, 1.8] {
        let l = compute_invariants(b)?;
        let t = thresholds(&l)?;
        let d = t.d;
        let w = d[7] - d[0];
        let no = [(d[0] - w, d[0]), (d[1], d[2]), (d[3], d[4]), (d[5], d[6]), (d[7], d[7] + w)];
        let yes = [(d[0], d[1]), (d[2], d[3]), (d[4], d[5]), (d[6], d[7])];
        let intervals = no.iter().map(|&x| (x, None)).chain(yes.iter().enumerate().map(|(i, &x)| (x, Some(i))));
        for ((lo, hi), law) in intervals {
            for f in SAMPLE_FRACTIONS {
                let mut x = lo + f * (hi - lo);
                if l.es().iter().any(|e| (x - e).abs() < 1e-4) {
                    x += 1e-3 * (hi - lo);
                }
                let p = inverse_wp_real(x, Segment::containing(x, &l), &l)?;
                let c = census(&p, &l, DEFAULT_GRID)?;
                out.samples += 1;
                let tag = format!("b = {b}, p(p) = {x:.6}");
                if c.status != CensusStatus::Complete {
                    out.failures.push(format!("{tag}: degenerate census"));
                }
                match law {
                    None if c.len() != 4 => out.failures.push(format!("{tag}: {} points, want 4", c.len())),
                    Some(i) => {
                        if c.len() != 6 || c.pair_count() != 1 {
                            out.failures.push(format!("{tag}: {} points, want 6", c.len()));
                        }
                        for r in c.nontrivial() {
                            if r.hessian_det >= 0.0 {
                                out.failures.push(format!("{tag}: Hessian {:.3e} not negative", r.hessian_det));
                            }
                            let dev = axis_law(i, &r.location);
                            if dev > 1e-7 {
                                out.failures.push(format!("{tag}: axis law off by {dev:.3e}"));
                            }
                        }
                    }
                    _ => {}
                }
                for r in c.nontrivial() {
                    out.loops.push((b, x, r.location));
                }
            }
        }
    }
    Ok(out)
}

fn real_axis() -> std::result::Result<&'static RealAxisData, String> {
    REAL_AXIS.get_or_init(|| real_axis_data().map_err(|e| e.to_string())).as_ref().map_err(Clone::clone)
}

fn c4() -> Check {
    let data = real_axis().map_err(crate::Error::Convergence)?;
    verdict(data.failures.clone(), format!("{} censuses consistent with predicted counts", data.samples))
}

fn c5() -> Check {
    let mut fails = Vec::new();
    for b in [0.8, 1.0, 1.6] {
        let l = compute_invariants(b)?;
        let cases = [((0.25, 0.0), (0.25, 0.5)), ((0.0, 0.25), (0.5, 0.25)), ((0.25, 0.5), (0.25, 0.0)), ((0.5, 0.25), (0.0, 0.25))];
        for ((pr, ps), (ar, as_)) in cases {
            let p = TorusPoint::new(pr, ps, b);
            let want = TorusPoint::new(ar, as_, b);
            let c = census(&p, &l, DEFAULT_GRID)?;
            let tag = format!("b = {b}, p = ({pr}, {ps})");
            if c.len() != 6 {
                fails.push(format!("{tag}: {} points", c.len()));
            }
            if !c.nontrivial().any(|r| r.location.approx_eq(&want)) || !c.nontrivial().any(|r| r.location.approx_eq(&want.neg())) {
                fails.push(format!("{tag}: expected pair missing"));
            }
            let res = c.records.iter().map(|r| r.residual).fold(0.0, f64::max);
            if res >= 1e-10 {
                fails.push(format!("{tag}: residual {res:.3e}"));
            }
        }
    }
    let l = compute_invariants(3.0)?;
    let c = census(&TorusPoint::new(0.25, 0.25, 3.0), &l, DEFAULT_GRID)?;
    let deg = degree_sum(&c.records);
    if c.len() != 10 || !matches!(deg, Ok(-2)) {
        fails.push(format!("b = 3, p = (1+tau)/4: {} points, degree sum {deg:?}", c.len()));
    }
    verdict(fails, "all special censuses match".into())
}

fn c6() -> Check {
    let l = compute_invariants(1.0)?;
    let mut fails = Vec::new();
    let mut summary = Vec::new();
    let cases = [(0.17, 0.0), (0.31, 0.0), (0.0, 0.2), (0.0, 0.35), (0.25, 0.0), (0.0, 0.25)];
    for (r, s) in cases {
        let p = TorusPoint::new(r, s, 1.0);
        let axis = if s == 0.0 { Axis::Real } else { Axis::Imag };
        let (n, _) = correspondence_count(&p, &l, axis, SWEEP_POINTS)?;
        let pairs = census(&p, &l, DEFAULT_GRID)?.pair_count();
        summary.push(format!("({r}, {s}): {n}/{pairs}"));
        if n != pairs {
            fails.push(format!("p = ({r}, {s}): axis count {n}, census pairs {pairs}"));
        }
    }
    verdict(fails, format!("axis/census counts {}", summary.join(", ")))
}

fn random_p(rng: &mut ChaCha8Rng, b: f64, clearance: f64) -> TorusPoint {
    loop {
        let p = TorusPoint::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), b);
        let far = (0..4).all(|k| {
            let h = TorusPoint::half_period(k, b);
            wrapped_dist(p.r - h.r, p.s - h.s) > clearance
        });
        if far {
            return p;
        }
    }
}

fn c7() -> Check {
    let l = compute_invariants(1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0f64;
    let mut fails = Vec::new();
    for _ in 0..50 {
        let p = random_p(&mut rng, 1.0, 0.05);
        let a = C64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let ap = accessory_point(a, &p, &l, None)?;
        for j in 1..=2 {
            let dev = (discriminant_ode(a, &p, &l, j)? - ap.tri[j - 1]).norm();
            worst = worst.max(dev);
            if dev >= 1e-6 {
                fails.push(format!("p = {}, A = {a}, j = {j}: {dev:.3e}", p.z));
            }
        }
    }
    verdict(fails, format!("max deviation {worst:.3e}"))
}

/// Checks that `pred` holds on the first sample and switches exactly at
/// the given corners, in that order.
fn interval_check(p: &TorusPoint, l: &LatticeData, axis: Axis, pred: fn(&crate::gle::Membership) -> bool, order: [usize; 4]) -> Result<Vec<String>> {
    let (lo, hi) = default_range(p, l, axis)?;
    let s = sweep(p, l, axis, lo, hi, SWEEP_POINTS)?;
    let tr = transitions(p, l, axis, &s, pred)?;
    let ak = accessory_corners(p, l)?;
    let want: Vec<f64> = order.iter().map(|&k| axis.coord(ak[k])).collect();
    let mut fails = Vec::new();
    if !pred(&s[0].membership) {
        fails.push(format!("{axis:?} sweep: first sample outside the set"));
    }
    if tr.len() != 4 {
        fails.push(format!("{axis:?} sweep: {} transitions, want 4", tr.len()));
    } else {
        for (t, w) in tr.iter().zip(&want) {
            if (t - w).abs() >= 1e-6 {
                fails.push(format!("{axis:?} sweep: transition {t} vs corner {w}"));
            }
        }
    }
    Ok(fails)
}

fn c8() -> Check {
    let l = compute_invariants(1.0)?;
    let mut fails = interval_check(&TorusPoint::new(0.3, 0.0, 1.0), &l, Axis::Real, |m| m.in_s2, [1, 3, 2, 0])?;
    fails.extend(interval_check(&TorusPoint::new(0.0, 0.3, 1.0), &l, Axis::Imag, |m| m.in_s1, [0, 1, 3, 2])?);
    verdict(fails, "both sweeps switch at the expected corners".into())
}

fn c9() -> Check {
    let l = compute_invariants(1.0)?;
    let p = TorusPoint::new(0.3, 0.0, 1.0);
    let ak = accessory_corners(&p, &l)?;
    let (a1, a0) = (ak[1].re, ak[0].re);
    let (lo, hi) = default_range(&p, &l, Axis::Real)?;
    let s = sweep(&p, &l, Axis::Real, lo, hi, SWEEP_POINTS)?;
    let band = 1e-6 * a1.abs().max(a0.abs()).max(1.0);
    let mut mismatches = Vec::new();
    for x in &s {
        if (x.t - a1).abs() < band || (x.t - a0).abs() < band {
            continue;
        }
        let want = x.t < a1 || x.t > a0;
        let got = x.membership.in_s1_star && x.membership.in_s2;
        if want != got {
            mismatches.push(x.t);
        }
    }
    let detail = match mismatches.as_slice() {
        [] => "no exceptional point resolved".to_string(),
        [t] => format!("one exceptional sample at A = {t:.6}"),
        m => format!("{} mismatching samples", m.len()),
    };
    Ok((mismatches.len() <= 1, detail))
}

fn c10() -> Check {
    let mut fails = Vec::new();
    for b in [1.0, 2.0] {
        let l = compute_invariants(b)?;
        for x in sign_survey(&l, 9)? {
            let Some(w) = x.wp_p else {
                fails.push(format!("b = {b}: formula failed at ({}, {})", x.r, x.s));
                continue;
            };
            let ok = match x.region {
                HitchinRegion::InteriorI => w.im > 0.0,
                HitchinRegion::InteriorII => w.im < 0.0,
                HitchinRegion::BoundaryIII => w.im.abs() < 1e-9,
            };
            if !ok {
                fails.push(format!("b = {b}, ({}, {}): Im = {:.3e}", x.r, x.s, w.im));
            }
        }
    }
    let data = real_axis().map_err(crate::Error::Convergence)?;
    let mut worst = 0f64;
    let mut lats = std::collections::HashMap::new();
    for &(b, x, a) in &data.loops {
        let key = b.to_bits();
        if let std::collections::hash_map::Entry::Vacant(e) = lats.entry(key) {
            e.insert(compute_invariants(b)?);
        }
        let w = hitchin_wp(a.r, a.s, &lats[&key])?;
        let res = (w - x).norm() / x.abs().max(1.0);
        worst = worst.max(res);
    }
    if worst >= 1e-8 {
        fails.push(format!("loop residual {worst:.3e}"));
    }
    verdict(fails, format!("signs hold; loop residual {worst:.3e} over {} points", data.loops.len()))
}

fn c11() -> Check {
    let l = compute_invariants(1.0)?;
    let ds = disks(&l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut checked, mut skipped) = (0, 0);
    let mut fails = Vec::new();
    for _ in 0..200 {
        let p = random_p(&mut rng, 1.0, 1e-3);
        let w = l.wp(p.z)?;
        for (k, d) in ds.iter().enumerate() {
            let dist = d.signed_dist(w);
            if dist.abs() < 1e-6 * d.radius.max(1.0) {
                skipped += 1;
                continue;
            }
            let h = hessian_det_halfperiod(k, &p, &l)?;
            let want = if k == 3 { dist > 0.0 } else { dist < 0.0 };
            checked += 1;
            if (h > 0.0) != want {
                fails.push(format!("k = {k}, p = {}: det {h:.3e}, signed distance {dist:.3e}", p.z));
            }
        }
    }
    verdict(fails, format!("{checked} signs agree, {skipped} in boundary band"))
}

fn c12() -> Check {
    let l = compute_invariants(1.0)?;
    let fine = degenerate_scan(&l, 16)?;
    let coarse = degenerate_scan(&l, 8)?;
    let mut found = Vec::new();
    for region in [Region::Xi5, Region::Xi7] {
        let has = |n: usize| fine.iter().any(|x| x.region == region && x.census_size == Some(n));
        if has(4) && has(8) {
            found.push(region.as_str());
        }
    }
    let min = |v: &[crate::hitchin::ScanSample]| v.iter().filter_map(|x| x.min_abs_hessian).fold(f64::INFINITY, f64::min);
    let (m8, m16) = (min(&coarse), min(&fine));
    let mut fails = Vec::new();
    if found.is_empty() {
        fails.push("no region with both 4- and 8-point censuses".into());
    }
    if m16.partial_cmp(&m8) != Some(std::cmp::Ordering::Less) {
        fails.push(format!("min |det| did not decrease: {m8:.3e} -> {m16:.3e}"));
    }
    verdict(fails, format!("regions with 4 and 8 points: {}; min |det| {m8:.3e} -> {m16:.3e}", found.join(", ")))
}
