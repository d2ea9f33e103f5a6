use num_complex::Complex64 as C64;

/// A point of C/(Z + Z tau) with tau = ib, stored by its real coordinates
/// (r, s) in z = r + s tau.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    pub r: f64,
    pub s: f64,
    pub z: C64,
    b: f64,
}

/// Equality tolerance on wrapped coordinate differences.
pub const POINT_TOL: f64 = 1e-9;

fn wrap(x: f64) -> f64 {
    x - (x + 0.5).floor()
}

impl TorusPoint {
    /// Canonical representative with r, s in [-1/2, 1/2).
    pub fn new(r: f64, s: f64, b: f64) -> Self {
        Self::raw(wrap(r), wrap(s), b)
    }

    /// Keeps the given representative as is.
    pub fn raw(r: f64, s: f64, b: f64) -> Self {
        TorusPoint { r, s, z: C64::new(r, s * b), b }
    }

    pub fn from_z(z: C64, b: f64) -> Self {
        Self::new(z.re, z.im / b, b)
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn half_period(k: usize, b: f64) -> Self {
        let (r, s) = [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.5, 0.5)][k];
        Self::raw(r, s, b)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.r, -self.s, self.b)
    }

    pub fn canonical(&self) -> Self {
        Self::new(self.r, self.s, self.b)
    }

    /// Representative with s in [0, 1/2] (the point or its negative).
    pub fn upper(&self) -> Self {
        let c = self.canonical();
        if c.s < 0.0 || (c.s == 0.0 && c.r < 0.0) {
            let n = c.neg();
            // -(-1/2) wraps back to -1/2; keep s = 1/2 for that case
            if n.s < 0.0 {
                return Self::raw(n.r, 0.5, self.b);
            }
            n
        } else {
            c
        }
    }

    /// Distance in (r, s) coordinates modulo integers.
    pub fn wrapped_dist(&self, other: &TorusPoint) -> f64 {
        wrapped_dist(self.r - other.r, self.s - other.s)
    }

    pub fn approx_eq(&self, other: &TorusPoint) -> bool {
        self.wrapped_dist(other) < POINT_TOL
    }

    /// Index k if the point is within `tol` of omega_k/2.
    pub fn half_period_index(&self, tol: f64) -> Option<usize> {
        (0..4).find(|&k| self.wrapped_dist(&Self::half_period(k, self.b)) < tol)
    }
}

pub(crate) fn wrapped_dist(dr: f64, ds: f64) -> f64 {
    wrap(dr).abs().hypot(wrap(ds).abs())
}

impl From<TorusPoint> for C64 {
    fn from(p: TorusPoint) -> C64 {
        p.z
    }
}

impl From<&TorusPoint> for C64 {
    fn from(p: &TorusPoint) -> C64 {
        p.z
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_range_and_equality() {
        let p = TorusPoint::new(1.25, -0.75, 2.0);
        assert!((p.r - 0.25).abs() < 1e-15 && (p.s - 0.25).abs() < 1e-15);
        assert!((p.z - C64::new(0.25, 0.5)).norm() < 1e-15);
        let q = TorusPoint::new(0.25 + 3.0, 0.25 - 1.0, 2.0);
        assert!(p.approx_eq(&q));
        let h = TorusPoint::new(0.5, 0.5, 1.0);
        assert_eq!((h.r, h.s), (-0.5, -0.5));
        assert_eq!(h.half_period_index(1e-12), Some(3));
    }

    #[test]
    fn upper_representative() {
        let p = TorusPoint::new(0.1, -0.2, 1.0).upper();
        assert!((p.r + 0.1).abs() < 1e-15 && (p.s - 0.2).abs() < 1e-15);
        let h = TorusPoint::new(0.3, 0.5, 1.0).upper();
        assert!((h.s - 0.5).abs() < 1e-15);
    }
}
