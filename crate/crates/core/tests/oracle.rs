//! Independent lattice-sum oracle: each row m + n*tau is summed over m in
//! closed form (partial fractions of cot and csc^2), rows |n| <= 400 kept.

use std::f64::consts::PI;

use torusgreen::{compute_invariants, Complex64 as C64, LatticeData};

const ROWS: i64 = 400;
const I: C64 = C64 { re: 0.0, im: 1.0 };

/// cot(x), csc^2(x) without overflow for large |Im x|.
fn cot_csc2(x: C64) -> (C64, C64) {
    let (u, sgn) = if x.im >= 0.0 { ((2.0 * I * x).exp(), 1.0) } else { ((-2.0 * I * x).exp(), -1.0) };
    let d = u - 1.0;
    (I * sgn * (u + 1.0) / d, -4.0 * u / (d * d))
}

fn wp_o(z: C64, tau: C64) -> C64 {
    let pi2 = PI * PI;
    let mut acc = pi2 * cot_csc2(PI * z).1 - pi2 / 3.0;
    for n in 1..=ROWS {
        for w in [n as f64 * tau, -(n as f64) * tau] {
            acc += pi2 * (cot_csc2(PI * (z - w)).1 - cot_csc2(PI * w).1);
        }
    }
    acc
}

fn wp1_o(z: C64, tau: C64) -> C64 {
    let mut acc = C64::default();
    for n in -ROWS..=ROWS {
        let (c, s2) = cot_csc2(PI * (z - n as f64 * tau));
        acc += -2.0 * PI.powi(3) * c * s2;
    }
    acc
}

fn zeta_o(z: C64, tau: C64) -> C64 {
    let pi2 = PI * PI;
    let mut acc = PI * cot_csc2(PI * z).0 + z * pi2 / 3.0;
    for n in 1..=ROWS {
        for w in [n as f64 * tau, -(n as f64) * tau] {
            let (cw, s2w) = cot_csc2(PI * w);
            acc += PI * cot_csc2(PI * (z - w)).0 + PI * cw + z * pi2 * s2w;
        }
    }
    acc
}

/// 60 * sum' omega^-4, rows via sum_m (w+m)^-4 = pi^4 (csc^4 - 2/3 csc^2).
fn g2_o(tau: C64) -> C64 {
    let p4 = PI.powi(4);
    let mut acc = C64::new(p4 / 45.0, 0.0);
    for n in 1..=ROWS {
        for w in [n as f64 * tau, -(n as f64) * tau] {
            let s2 = cot_csc2(PI * w).1;
            acc += p4 * (s2 * s2 - 2.0 / 3.0 * s2);
        }
    }
    60.0 * acc
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn check_invariants(l: &LatticeData) {
    let tau = l.tau;
    let e = [wp_o(C64::new(0.5, 0.0), tau), wp_o(tau / 2.0, tau), wp_o((1.0 + tau) / 2.0, tau)];
    let scale = e.iter().map(|x| x.norm()).fold(0.0, f64::max);
    for (k, ek) in e.iter().enumerate() {
        assert!((ek - l.e(k + 1)).norm() < 1e-10 * scale, "b={} e{}: {} vs {}", l.b, k + 1, ek, l.e(k + 1));
    }
    let eta1 = 2.0 * zeta_o(C64::new(0.5, 0.0), tau);
    let eta2 = 2.0 * zeta_o(tau / 2.0, tau);
    assert!((eta1 - l.eta1).norm() < 1e-10 * l.eta1.abs().max(1.0), "eta1 {eta1} vs {}", l.eta1);
    assert!((eta2 - l.eta2).norm() < 1e-10 * l.eta2.norm().max(1.0), "eta2 {eta2} vs {}", l.eta2);
    assert!(rel(g2_o(tau), C64::new(l.g2, 0.0)) < 1e-10);
    let g3 = 4.0 * e[0] * e[1] * e[2];
    assert!((g3 - l.g3).norm() < 1e-10 * l.g2.abs().max(l.g3.abs()).max(1.0));
}

#[test]
fn invariants_match_lattice_sums() {
    for b in [2.0, 1.0, 0.5] {
        check_invariants(&compute_invariants(b).unwrap());
    }
}

#[test]
fn wp_matches_lattice_sum_at_sample_points() {
    for (b, r, s) in [(1.0, 0.3, 0.2), (2.0, 0.3, 0.2), (0.6, -0.41, 0.37), (1.4, 0.05, -0.49)] {
        let l = compute_invariants(b).unwrap();
        let z = C64::new(r, s * b);
        let v = l.eval(z).unwrap();
        assert!(rel(v.wp, wp_o(z, l.tau)) < 1e-10, "wp b={b}");
        assert!(rel(v.wp1, wp1_o(z, l.tau)) < 1e-10, "wp' b={b}");
        assert!(rel(v.zeta, zeta_o(z, l.tau)) < 1e-10, "zeta b={b}");
        let w = wp_o(z, l.tau);
        let second = 6.0 * w * w - l.g2 / 2.0;
        assert!(rel(l.wp_second(z).unwrap(), second) < 1e-10, "wp'' b={b}");
    }
}

#[test]
fn zeta_off_cell_representatives() {
    // the oracle sum is itself representative-exact
    let l = compute_invariants(1.0).unwrap();
    let z = C64::new(1.7, -1.3);
    assert!(rel(l.zeta(z).unwrap(), zeta_o(z, l.tau)) < 1e-10);
}
