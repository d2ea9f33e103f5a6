//! Adaptive Dormand-Prince 5(4) for complex states over a real parameter.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rtol: 1e-10, atol: 1e-12, max_steps: 200_000 }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates y' = f(t, y) from t0 to t1 and returns y(t1).
pub fn integrate<const N: usize, F>(mut f: F, t0: f64, t1: f64, y0: [C64; N], tol: Tolerances) -> Result<[C64; N]>
where
    F: FnMut(f64, &[C64; N]) -> Result<[C64; N]>,
{
    let span = t1 - t0;
    let mut t = t0;
    let mut y = y0;
    let mut h = span / 64.0;
    let mut k: [[C64; N]; 7] = [[C64::default(); N]; 7];
    k[0] = f(t, &y)?;
    for _ in 0..tol.max_steps {
        if (t1 - t) * span.signum() <= 0.0 {
            return Ok(y);
        }
        if (t + h - t1) * span.signum() > 0.0 {
            h = t1 - t;
        }
        for s in 1..7 {
            let mut ys = y;
            for (i, v) in ys.iter_mut().enumerate() {
                for (j, kj) in k.iter().enumerate().take(s) {
                    *v += h * A[s][j] * kj[i];
                }
            }
            k[s] = f(t + C[s] * h, &ys)?;
        }
        let mut y5 = y;
        let mut err = 0.0f64;
        for i in 0..N {
            let (mut d5, mut d4) = (C64::default(), C64::default());
            for s in 0..7 {
                d5 += B5[s] * k[s][i];
                d4 += B4[s] * k[s][i];
            }
            y5[i] = y[i] + h * d5;
            let sc = tol.atol + tol.rtol * y[i].norm().max(y5[i].norm());
            err = err.max((h * (d5 - d4)).norm() / sc);
        }
        if !err.is_finite() {
            return Err(Error::Convergence("integrator produced non-finite state".into()));
        }
        if err <= 1.0 {
            t += h;
            y = y5;
            // first-same-as-last
            k[0] = k[6];
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
        if h.abs() < 1e-14 * span.abs() {
            return Err(Error::Convergence("integrator step size underflow".into()));
        }
    }
    Err(Error::Convergence("integrator exceeded the step budget".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_and_exponential() {
        let w = C64::new(1.3, 0.4);
        let y = integrate(|_, y: &[C64; 2]| Ok([y[1], -w * w * y[0]]), 0.0, 2.0, [C64::new(1.0, 0.0), C64::default()], Tolerances::default())
            .unwrap();
        assert!((y[0] - (w * 2.0).cos()).norm() < 1e-9);
        let e = integrate(|_, y: &[C64; 1]| Ok([w * y[0]]), 0.0, 1.0, [C64::new(1.0, 0.0)], Tolerances::default()).unwrap();
        assert!((e[0] - w.exp()).norm() < 1e-9);
    }
}
