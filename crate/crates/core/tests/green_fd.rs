//! Finite-difference checks of the gradient and Hessian formulas against
//! the scalar Green value.

use torusgreen::green::{census, grad_g, green_value, hessian_det_nontrivial, DEFAULT_GRID};
use torusgreen::{compute_invariants, Complex64 as C64, LatticeData, TorusPoint};

fn g_at(l: &LatticeData, z: C64) -> f64 {
    green_value(&TorusPoint::from_z(z, l.b), l).unwrap()
}

fn gp_at(l: &LatticeData, z: C64, p: C64) -> f64 {
    0.5 * (g_at(l, z + p) + g_at(l, z - p))
}

#[test]
fn gradient_matches_central_differences() {
    for (b, z) in [(1.0, C64::new(0.3, 0.1)), (0.7, C64::new(-0.2, 0.25)), (2.0, C64::new(0.45, -0.8))] {
        let l = compute_invariants(b).unwrap();
        let h = 1e-5;
        let gx = (g_at(&l, z + h) - g_at(&l, z - h)) / (2.0 * h);
        let gy = (g_at(&l, z + C64::new(0.0, h)) - g_at(&l, z - C64::new(0.0, h))) / (2.0 * h);
        let fd = C64::new(gx, -gy) / 2.0;
        let g = grad_g(&TorusPoint::from_z(z, b), &l).unwrap();
        assert!((fd - g).norm() < 1e-6, "b={b}: {fd} vs {g}");
    }
}

#[test]
fn green_value_symmetries() {
    let l = compute_invariants(1.4).unwrap();
    for z in [C64::new(0.11, 0.2), C64::new(-0.37, 0.61), C64::new(0.5, -0.1)] {
        assert!((g_at(&l, z) - g_at(&l, -z)).abs() < 1e-10);
        assert!((g_at(&l, z) - g_at(&l, z.conj())).abs() < 1e-10);
        assert!((g_at(&l, z) - g_at(&l, z + C64::new(1.0, 1.4))).abs() < 1e-10);
    }
}

#[test]
fn hessian_matches_second_differences() {
    let mut checked = 0;
    for (b, p) in [(1.0, C64::new(0.25, 0.0)), (1.0, C64::new(0.13, 0.21)), (0.9, C64::new(0.31, 0.1))] {
        let l = compute_invariants(b).unwrap();
        let pt = TorusPoint::from_z(p, b);
        let c = census(&pt, &l, DEFAULT_GRID).unwrap();
        for rec in c.nontrivial() {
            let a = rec.location.z;
            let h = 2e-4;
            let f = |dx: f64, dy: f64| gp_at(&l, a + C64::new(dx, dy), p);
            let f0 = f(0.0, 0.0);
            let gxx = (f(h, 0.0) - 2.0 * f0 + f(-h, 0.0)) / (h * h);
            let gyy = (f(0.0, h) - 2.0 * f0 + f(0.0, -h)) / (h * h);
            let gxy = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
            let fd = gxx * gyy - gxy * gxy;
            let det = hessian_det_nontrivial(&rec.location, &pt, &l).unwrap();
            assert!((fd - det).abs() < 1e-5 * det.abs(), "b={b} p={p}: {fd} vs {det}");
            checked += 1;
        }
    }
    assert!(checked >= 2);
}
