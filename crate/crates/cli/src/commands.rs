//! One function per subcommand: run the computation, return a report.

use serde::Serialize;
use torusgreen::acceptance;
use torusgreen::disks::{disks, thresholds_with, CHAIN_SLACK};
use torusgreen::gle::{accessory_corners, corner_discriminants, membership_with, MEMBERSHIP_TOL};
use torusgreen::green::{census, tol_deg, Kind};
use torusgreen::hitchin::{degenerate_scan, hitchin_wp, sign_survey};
use torusgreen::stability::{correspondence_count, default_range, sweep, transitions, Axis};
use torusgreen::{compute_invariants, Complex64 as C64, LatticeData, Result, TorusPoint};

use crate::output::{Cell, Report, Table};

fn lattice(b: f64) -> Result<LatticeData> {
    compute_invariants(b)
}

#[derive(Serialize)]
pub struct Invariants {
    b: f64,
    e1: f64,
    e2: f64,
    e3: f64,
    g2: f64,
    g3: f64,
    eta1: f64,
    eta2_im: f64,
    legendre_residual: f64,
}

impl Report for Invariants {
    fn table(&self) -> Table {
        let mut t = Table::new(vec!["quantity", "value"]);
        for (k, v) in [
            ("b", self.b),
            ("e1", self.e1),
            ("e2", self.e2),
            ("e3", self.e3),
            ("g2", self.g2),
            ("g3", self.g3),
            ("eta1", self.eta1),
            ("eta2_im", self.eta2_im),
            ("legendre_residual", self.legendre_residual),
        ] {
            t.push(vec![Cell::S(k.into()), Cell::F(v)]);
        }
        t
    }
}

pub fn invariants(b: f64) -> Result<Invariants> {
    let l = lattice(b)?;
    Ok(Invariants {
        b,
        e1: l.e1,
        e2: l.e2,
        e3: l.e3,
        g2: l.g2,
        g3: l.g3,
        eta1: l.eta1,
        eta2_im: l.eta2.im,
        legendre_residual: l.residuals().legendre,
    })
}

#[derive(Serialize)]
pub struct Eval {
    z_re: f64,
    z_im: f64,
    wp_re: f64,
    wp_im: f64,
    wp_prime_re: f64,
    wp_prime_im: f64,
    zeta_re: f64,
    zeta_im: f64,
}

impl Report for Eval {
    fn table(&self) -> Table {
        let mut t = Table::new(vec!["z_re", "z_im", "wp_re", "wp_im", "wp_prime_re", "wp_prime_im", "zeta_re", "zeta_im"]);
        t.push(
            [self.z_re, self.z_im, self.wp_re, self.wp_im, self.wp_prime_re, self.wp_prime_im, self.zeta_re, self.zeta_im]
                .into_iter()
                .map(Cell::F)
                .collect(),
        );
        t
    }
}

pub fn eval(b: f64, z: C64) -> Result<Eval> {
    let v = lattice(b)?.eval(z)?;
    Ok(Eval {
        z_re: z.re,
        z_im: z.im,
        wp_re: v.wp.re,
        wp_im: v.wp.im,
        wp_prime_re: v.wp1.re,
        wp_prime_im: v.wp1.im,
        zeta_re: v.zeta.re,
        zeta_im: v.zeta.im,
    })
}

#[derive(Serialize)]
pub struct CensusRecord {
    r: f64,
    s: f64,
    trivial: bool,
    hessian_det: f64,
    kind: &'static str,
    degree: Option<i32>,
    residual: f64,
}

#[derive(Serialize)]
#[serde(transparent)]
pub struct CensusReport(Vec<CensusRecord>);

impl Report for CensusReport {
    fn table(&self) -> Table {
        let mut t = Table::new(vec!["r", "s", "trivial", "hessian_det", "kind", "degree", "residual"]);
        for x in &self.0 {
            t.push(vec![
                Cell::F(x.r),
                Cell::F(x.s),
                Cell::B(x.trivial),
                Cell::F(x.hessian_det),
                Cell::S(x.kind.into()),
                Cell::OptI(x.degree.map(i64::from)),
                Cell::F(x.residual),
            ]);
        }
        t
    }
}

/// `tol` overrides the degeneracy threshold on |det D^2 G_p|.
pub fn census_cmd(b: f64, p: C64, grid: usize, tol: Option<f64>) -> Result<CensusReport> {
    let l = lattice(b)?;
    let c = census(&TorusPoint::from_z(p, b), &l, grid)?;
    let td = tol.unwrap_or_else(|| tol_deg(&l));
    Ok(CensusReport(
        c.records
            .iter()
            .map(|x| {
                let (kind, degree) = if x.hessian_det.abs() <= td {
                    (Kind::Degenerate, None)
                } else if x.hessian_det < 0.0 {
                    (Kind::Saddle, Some(-1))
                } else {
                    (Kind::Extremum, Some(1))
                };
                CensusRecord {
                    r: x.location.r,
                    s: x.location.s,
                    trivial: x.trivial,
                    hessian_det: x.hessian_det,
                    kind: kind.as_str(),
                    degree,
                    residual: x.residual,
                }
            })
            .collect(),
    ))
}

#[derive(Serialize)]
pub struct Thresholds {
    b: f64,
    d: [f64; 8],
    landmark: [f64; 7],
    min_margin: f64,
}

impl Report for Thresholds {
    fn table(&self) -> Table {
        let mut t = Table::new(vec!["name", "index", "value"]);
        for (i, v) in self.d.iter().enumerate() {
            t.push(vec![Cell::S("d".into()), Cell::I(i as i64 + 1), Cell::F(*v)]);
        }
        for (i, v) in self.landmark.iter().enumerate() {
            t.push(vec![Cell::S("landmark".into()), Cell::I(i as i64 + 1), Cell::F(*v)]);
        }
        t.push(vec![Cell::S("min_margin".into()), Cell::I(0), Cell::F(self.min_margin)]);
        t
    }
}

/// `tol` overrides the relative slack of the interleaving check.
pub fn thresholds_cmd(b: f64, tol: Option<f64>) -> Result<Thresholds> {
    let t = thresholds_with(&lattice(b)?, tol.unwrap_or(CHAIN_SLACK))?;
    Ok(Thresholds { b, d: t.d, landmark: t.landmark, min_margin: t.min_margin() })
}

#[derive(Serialize)]
pub struct Circle {
    k: usize,
    center_re: f64,
    center_im: f64,
    radius: f64,
}

#[derive(Serialize)]
pub struct Figure1 {
    b: f64,
    circles: Vec<Circle>,
    d: [f64; 8],
    landmark: [f64; 7],
}

impl Report for Figure1 {
    fn table(&self) -> Table {
        let mut t = Table::new(vec!["item", "index", "x", "y", "radius"]);
        for c in &self.circles {
            t.push(vec![Cell::S("circle".into()), Cell::I(c.k as i64), Cell::F(c.center_re), Cell::F(c.center_im), Cell::OptF(Some(c.radius))]);
        }
        for (i, v) in self.d.iter().enumerate() {
            t.push(vec![Cell::S("d".into()), Cell::I(i as i64 + 1), Cell::F(*v), Cell::F(0.0), Cell::OptF(None)]);
        }
        for (i, v) in self.landmark.iter().enumerate() {
            t.push(vec![Cell::S("landmark".into()), Cell::I(i as i64 + 1), Cell::F(*v), Cell::F(0.0), Cell::OptF(None)]);
        }
        t
    }
}

pub fn figure1(b: f64, tol: Option<f64>) -> Result<Figure1> {
    let l = lattice(b)?;
    let t = thresholds_with(&l, tol.unwrap_or(CHAIN_SLACK))?;
    let circles = disks(&l)?
        .iter()
        .map(|d| Circle { k: d.k, center_re: d.center.re, center_im: d.center.im, radius: d.radius })
        .collect();
    Ok(Figure1 { b, circles, d: t.d, landmark: t.landmark })
}

#[derive(Serialize)]
pub struct Corner {
    k: usize,
    a_re: f64,
    a_im: f64,
    tri1: f64,
    tri2: f64,
    tri3: f64,
}

#[derive(Serialize)]
#[serde(transparent)]
pub struct Corners(Vec<Corner>);

impl Report for Corners {
    fn table(&self) -> Table {
        let mut t = Table::new(vec!["k", "a_re", "a_im", "tri1", "tri2", "tri3"]);
        for c in &self.0 {
            t.push(vec![Cell::I(c.k as i64), Cell::F(c.a_re), Cell::F(c.a_im), Cell::F(c.tri1), Cell::F(c.tri2), Cell::F(c.tri3)]);
        }
        t
    }
}

fn corner_list(p: &TorusPoint, l: &LatticeData) -> Result<Vec<Corner>> {
    Ok(accessory_corners(p, l)?
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let e = corner_discriminants(k);
            Corner { k, a_re: a.re, a_im: a.im, tri1: e[0], tri2: e[1], tri3: e[2] }
        })
        .collect())
}

pub fn corners(b: f64, p: C64) -> Result<Corners> {
    let l = lattice(b)?;
    Ok(Corners(corner_list(&TorusPoint::from_z(p, b), &l)?))
}

#[derive(Serialize)]
pub struct SweepRow {
    t: f64,
    tri1_re: f64,
    tri1_im: f64,
    tri2_re: f64,
    tri2_im: f64,
    tri3_re: f64,
    tri3_im: f64,
    in_s1: bool,
    in_s2: bool,
    in_s3: bool,
    in_s1_star: bool,
    in_s2_star: bool,
    corner: Option<usize>,
}

#[derive(Serialize)]
pub struct Stability {
    b: f64,
    p_re: f64,
    p_im: f64,
    axis: &'static str,
    t_min: f64,
    t_max: f64,
    corners: Vec<Corner>,
    s1_switches: Vec<f64>,
    s2_switches: Vec<f64>,
    correspondence_points: Vec<f64>,
    samples: Vec<SweepRow>,
}

impl Report for Stability {
    fn table(&self) -> Table {
        let mut t = Table::new(vec![
            "t", "tri1_re", "tri1_im", "tri2_re", "tri2_im", "tri3_re", "tri3_im", "in_s1", "in_s2", "in_s3", "in_s1_star", "in_s2_star", "corner",
        ]);
        for x in &self.samples {
            t.push(vec![
                Cell::F(x.t),
                Cell::F(x.tri1_re),
                Cell::F(x.tri1_im),
                Cell::F(x.tri2_re),
                Cell::F(x.tri2_im),
                Cell::F(x.tri3_re),
                Cell::F(x.tri3_im),
                Cell::B(x.in_s1),
                Cell::B(x.in_s2),
                Cell::B(x.in_s3),
                Cell::B(x.in_s1_star),
                Cell::B(x.in_s2_star),
                Cell::OptI(x.corner.map(|k| k as i64)),
            ]);
        }
        t
    }
}

pub struct StabilityArgs {
    pub b: f64,
    pub p: C64,
    pub axis: Axis,
    pub n: usize,
    pub range: (Option<f64>, Option<f64>),
    pub tol: Option<f64>,
}

/// `tol` overrides the band tolerance used for membership flags.
pub fn stability(a: StabilityArgs) -> Result<Stability> {
    let l = lattice(a.b)?;
    let p = TorusPoint::from_z(a.p, a.b);
    let (lo, hi) = default_range(&p, &l, a.axis)?;
    let (t_min, t_max) = (a.range.0.unwrap_or(lo), a.range.1.unwrap_or(hi));
    let mut s = sweep(&p, &l, a.axis, t_min, t_max, a.n)?;
    let tol = a.tol.unwrap_or(MEMBERSHIP_TOL);
    for x in &mut s {
        x.membership = membership_with(&x.tri, tol);
    }
    let s1_switches = transitions(&p, &l, a.axis, &s, |m| m.in_s1)?;
    let s2_switches = transitions(&p, &l, a.axis, &s, |m| m.in_s2)?;
    let (_, correspondence_points) = correspondence_count(&p, &l, a.axis, a.n)?;
    let samples = s
        .iter()
        .map(|x| SweepRow {
            t: x.t,
            tri1_re: x.tri[0].re,
            tri1_im: x.tri[0].im,
            tri2_re: x.tri[1].re,
            tri2_im: x.tri[1].im,
            tri3_re: x.tri[2].re,
            tri3_im: x.tri[2].im,
            in_s1: x.membership.in_s1,
            in_s2: x.membership.in_s2,
            in_s3: x.membership.in_s3,
            in_s1_star: x.membership.in_s1_star,
            in_s2_star: x.membership.in_s2_star,
            corner: x.corner,
        })
        .collect();
    Ok(Stability {
        b: a.b,
        p_re: p.z.re,
        p_im: p.z.im,
        axis: match a.axis {
            Axis::Real => "real",
            Axis::Imag => "imag",
        },
        t_min,
        t_max,
        corners: corner_list(&p, &l)?,
        s1_switches,
        s2_switches,
        correspondence_points,
        samples,
    })
}

#[derive(Serialize)]
pub struct Hitchin {
    b: f64,
    r: f64,
    s: f64,
    wp_re: f64,
    wp_im: f64,
}

impl Report for Hitchin {
    fn table(&self) -> Table {
        let mut t = Table::new(vec!["b", "r", "s", "wp_re", "wp_im"]);
        t.push([self.b, self.r, self.s, self.wp_re, self.wp_im].into_iter().map(Cell::F).collect());
        t
    }
}

pub fn hitchin(b: f64, r: f64, s: f64) -> Result<Hitchin> {
    let w = hitchin_wp(r, s, &lattice(b)?)?;
    Ok(Hitchin { b, r, s, wp_re: w.re, wp_im: w.im })
}

#[derive(Serialize)]
pub struct SurveyRow {
    r: f64,
    s: f64,
    region: &'static str,
    wp_re: Option<f64>,
    wp_im: Option<f64>,
}

#[derive(Serialize)]
#[serde(transparent)]
pub struct Survey(Vec<SurveyRow>);

impl Report for Survey {
    fn table(&self) -> Table {
        let mut t = Table::new(vec!["r", "s", "region", "wp_re", "wp_im"]);
        for x in &self.0 {
            t.push(vec![Cell::F(x.r), Cell::F(x.s), Cell::S(x.region.into()), Cell::OptF(x.wp_re), Cell::OptF(x.wp_im)]);
        }
        t
    }
}

pub fn signsurvey(b: f64, n: usize) -> Result<Survey> {
    let mut rows: Vec<SurveyRow> = sign_survey(&lattice(b)?, n)?
        .into_iter()
        .map(|x| SurveyRow { r: x.r, s: x.s, region: x.region.as_str(), wp_re: x.wp_p.map(|w| w.re), wp_im: x.wp_p.map(|w| w.im) })
        .collect();
    rows.sort_by(|x, y| x.r.total_cmp(&y.r).then(x.s.total_cmp(&y.s)));
    Ok(Survey(rows))
}

#[derive(Serialize)]
pub struct ScanRow {
    wp_re: f64,
    wp_im: f64,
    region: &'static str,
    census_size: Option<usize>,
    min_abs_hessian: Option<f64>,
}

#[derive(Serialize)]
#[serde(transparent)]
pub struct Scan(Vec<ScanRow>);

impl Report for Scan {
    fn table(&self) -> Table {
        let mut t = Table::new(vec!["wp_re", "wp_im", "region", "census_size", "min_abs_hessian"]);
        for x in &self.0 {
            t.push(vec![
                Cell::F(x.wp_re),
                Cell::F(x.wp_im),
                Cell::S(x.region.into()),
                Cell::OptI(x.census_size.map(|n| n as i64)),
                Cell::OptF(x.min_abs_hessian),
            ]);
        }
        t
    }
}

pub fn degscan(b: f64, grid: usize) -> Result<Scan> {
    Ok(Scan(
        degenerate_scan(&lattice(b)?, grid)?
            .into_iter()
            .map(|x| ScanRow {
                wp_re: x.wp_p.re,
                wp_im: x.wp_p.im,
                region: x.region.as_str(),
                census_size: x.census_size,
                min_abs_hessian: x.min_abs_hessian,
            })
            .collect(),
    ))
}

#[derive(Serialize)]
pub struct VerifyRow {
    id: u8,
    name: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
#[serde(transparent)]
pub struct Verify(pub Vec<VerifyRow>);

impl Verify {
    pub fn all_passed(&self) -> bool {
        self.0.iter().all(|r| r.passed)
    }
}

impl Report for Verify {
    fn table(&self) -> Table {
        let mut t = Table::new(vec!["id", "result", "name", "detail"]);
        for x in &self.0 {
            t.push(vec![
                Cell::I(i64::from(x.id)),
                Cell::S(if x.passed { "PASS" } else { "FAIL" }.into()),
                Cell::S(x.name.into()),
                Cell::S(x.detail.clone()),
            ]);
        }
        t
    }
}

pub fn verify(only: Option<u8>) -> Verify {
    let results = match only {
        Some(id) => vec![acceptance::run(id)],
        None => acceptance::run_all(),
    };
    Verify(results.into_iter().map(|r| VerifyRow { id: r.id, name: r.name, passed: r.passed, detail: r.detail }).collect())
}
