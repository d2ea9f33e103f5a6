//! Scalar invariants of the rectangular lattice Z + Z(ib).

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Series data for the lattice actually summed. For b < 1 the sums run on
/// Z + Z(i/b) and values are mapped back by homogeneity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Reduced {
    pub bp: f64,
    pub q: f64,
    pub eta1: f64,
    pub eta2: C64,
    pub inverted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeData {
    pub b: f64,
    pub tau: C64,
    /// exp(2 pi i tau)
    pub nome_q: C64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub g2: f64,
    pub g3: f64,
    pub eta1: f64,
    pub eta2: C64,
    pub two_pi_over_b: f64,
    pub(crate) reduced: Reduced,
}

/// Residual report for the defining identities of one lattice.
#[derive(Debug, Clone, Copy)]
pub struct Residuals {
    pub legendre: f64,
    pub cubic: f64,
    pub root_sum: f64,
}

const MAX_TERMS: usize = 64;

/// Lambert-type sum  sum_{n>=1} n^k q^n / (1 - q^n).
fn lambert(q: f64, k: i32) -> f64 {
    let mut acc = 0.0;
    let mut qn = 1.0;
    for n in 1..=MAX_TERMS {
        qn *= q;
        let t = (n as f64).powi(k) * qn / (1.0 - qn);
        acc += t;
        if t.abs() < 1e-17 * acc.abs().max(1e-300) {
            break;
        }
    }
    acc
}

pub fn compute_invariants(b: f64) -> Result<LatticeData> {
    if !b.is_finite() || b <= 0.0 {
        return Err(Error::Domain(format!("aspect ratio b must be positive and finite, got {b}")));
    }
    let inverted = b < 1.0;
    let bp = if inverted { 1.0 / b } else { b };
    let q = (-2.0 * PI * bp).exp();

    let pi2 = PI * PI;
    let eta1p = pi2 / 3.0 * (1.0 - 24.0 * lambert(q, 1));
    let g2p = 4.0 * pi2 * pi2 / 3.0 * (1.0 + 240.0 * lambert(q, 3));
    let g3p = 8.0 * pi2 * pi2 * pi2 / 27.0 * (1.0 - 504.0 * lambert(q, 5));
    let eta2p = C64::new(0.0, bp * eta1p - 2.0 * PI);

    let (eta1, g2, g3) = if inverted {
        (2.0 * PI / b - eta1p / (b * b), g2p / b.powi(4), -g3p / b.powi(6))
    } else {
        (eta1p, g2p, g3p)
    };
    let tau = C64::new(0.0, b);
    let mut l = LatticeData {
        b,
        tau,
        nome_q: C64::new((-2.0 * PI * b).exp(), 0.0),
        e1: 0.0,
        e2: 0.0,
        e3: 0.0,
        g2,
        g3,
        eta1,
        eta2: tau * eta1 - C64::new(0.0, 2.0 * PI),
        two_pi_over_b: 2.0 * PI / b,
        reduced: Reduced { bp, q, eta1: eta1p, eta2: eta2p, inverted },
    };
    l.e1 = l.wp(l.half_period(1))?.re;
    l.e2 = l.wp(l.half_period(2))?.re;
    l.e3 = l.wp(l.half_period(3))?.re;
    if !(l.e2 < l.e3 && l.e3 < l.e1) {
        return Err(Error::Inconsistency(format!(
            "half-period values out of order: e1={} e2={} e3={}",
            l.e1, l.e2, l.e3
        )));
    }
    Ok(l)
}

impl LatticeData {
    /// omega_k / 2 for k = 0..3 (0, 1/2, tau/2, (1+tau)/2).
    pub fn half_period(&self, k: usize) -> C64 {
        match k {
            0 => C64::new(0.0, 0.0),
            1 => C64::new(0.5, 0.0),
            2 => C64::new(0.0, 0.5 * self.b),
            3 => C64::new(0.5, 0.5 * self.b),
            _ => panic!("half-period index {k} out of range"),
        }
    }

    /// e_k for k = 1..3.
    pub fn e(&self, k: usize) -> f64 {
        match k {
            1 => self.e1,
            2 => self.e2,
            3 => self.e3,
            _ => panic!("e_k index {k} out of range"),
        }
    }

    pub fn es(&self) -> [f64; 3] {
        [self.e1, self.e2, self.e3]
    }

    /// Quasi-period of zeta for the lattice vector m + n tau.
    pub fn quasi_period(&self, m: f64, n: f64) -> C64 {
        self.eta2 * n + m * self.eta1
    }

    pub fn residuals(&self) -> Residuals {
        let two_pi_i = C64::new(0.0, 2.0 * PI);
        let eta2_direct = self
            .zeta(self.half_period(2))
            .map(|z| 2.0 * z)
            .unwrap_or(self.eta2);
        let legendre = (self.tau * self.eta1 - eta2_direct - two_pi_i).norm();
        let scale = self.g2.abs().max(self.g3.abs()).max(1.0);
        let cubic = self
            .es()
            .iter()
            .map(|&e| (4.0 * e * e * e - self.g2 * e - self.g3).abs() / scale)
            .fold(0.0, f64::max);
        let emax = self.es().iter().fold(0.0f64, |m, e| m.max(e.abs()));
        let root_sum = (self.e1 + self.e2 + self.e3).abs() / emax;
        Residuals { legendre, cubic, root_sum }
    }

    /// 3 e_k^2 - g2/4 = (e_k - e_i)(e_k - e_j).
    pub fn branch_factor(&self, k: usize) -> f64 {
        let e = self.e(k);
        3.0 * e * e - self.g2 / 4.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_lattice_values() {
        let l = compute_invariants(1.0).unwrap();
        assert!((l.eta1 - PI).abs() < 1e-12);
        assert!(l.e3.abs() < 1e-12);
        assert!((l.e1 + l.e2).abs() < 1e-12);
        assert!((l.e1 / PI - 2.18844).abs() < 1e-5);
    }

    #[test]
    fn rejects_bad_b() {
        for b in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(compute_invariants(b), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn invariants_hold_across_aspect_ratios() {
        for b in [0.1, 0.25, 0.5, 0.9, 1.0, 1.1, 2.0, 4.0, 12.0] {
            let l = compute_invariants(b).unwrap();
            let r = l.residuals();
            assert!(r.legendre < 1e-12, "b={b} legendre {}", r.legendre);
            assert!(r.cubic < 1e-10, "b={b} cubic {}", r.cubic);
            assert!(r.root_sum < 1e-12, "b={b} sum {}", r.root_sum);
            assert!(l.e2 < 0.0 && l.e1 > 0.0);
            assert!(l.eta2.re.abs() < 1e-12);
        }
    }

    #[test]
    fn duality_between_b_and_inverse() {
        // Z + Z(i/b) is (1/(ib)) times Z + Z(ib).
        for b in [0.3, 0.5, 0.8] {
            let l = compute_invariants(b).unwrap();
            let m = compute_invariants(1.0 / b).unwrap();
            let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(1.0);
            assert!(rel(l.e1, -m.e2 / (b * b)) < 1e-10);
            assert!(rel(l.e2, -m.e1 / (b * b)) < 1e-10);
            assert!(rel(l.e3, -m.e3 / (b * b)) < 1e-10);
            assert!(rel(l.g2, m.g2 / b.powi(4)) < 1e-10);
            assert!(rel(l.g3, -m.g3 / b.powi(6)) < 1e-10);
        }
    }
}
