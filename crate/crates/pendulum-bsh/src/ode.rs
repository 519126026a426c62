//! Dormand-Prince 5(4) integration of autonomous systems.

use crate::error::{Error, Result};

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th and 4th order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;
const MAX_STEPS: usize = 50_000_000;

fn axpy<const D: usize>(y: &[f64; D], h: f64, terms: &[(f64, &[f64; D])]) -> [f64; D] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

/// Integrates `dy/dt = rhs(y)` for time `duration` (either sign) from `y0`.
///
/// `tol` is used as both absolute and relative tolerance per component.
/// After every accepted step `project` may pull the state back onto an
/// invariant manifold; pass `|_| {}` for none.
pub fn integrate<const D: usize, F, P>(
    rhs: F,
    y0: [f64; D],
    duration: f64,
    tol: f64,
    project: P,
) -> Result<[f64; D]>
where
    F: Fn(&[f64; D]) -> [f64; D],
    P: Fn(&mut [f64; D]),
{
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if duration == 0.0 {
        return Ok(y0);
    }
    let dir = duration.signum();
    let span = duration.abs();
    let f = |y: &[f64; D]| {
        let mut d = rhs(y);
        if dir < 0.0 {
            for v in d.iter_mut() {
                *v = -*v;
            }
        }
        d
    };

    let mut y = y0;
    let mut t = 0.0_f64;
    let mut k1 = f(&y);
    let mut h = (0.01 * tol.powf(0.2)).max(1e-6).min(span);
    let mut steps = 0usize;

    while t < span {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::Integration { t: dir * t });
        }
        let last = t + h >= span;
        if last {
            h = span - t;
        }
        let k2 = f(&axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(&axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(&axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(&axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(&axpy(
            &y,
            h,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ));
        let y_new = axpy(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(&y_new);

        let mut err = 0.0_f64;
        for i in 0..D {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = tol * (1.0 + y[i].abs().max(y_new[i].abs()));
            let ratio = (e / scale).abs();
            err = if ratio.is_nan() { f64::INFINITY } else { err.max(ratio) };
        }
        if !y_new.iter().all(|v| v.is_finite()) {
            err = f64::INFINITY;
        }

        if err <= 1.0 {
            t = if last { span } else { t + h };
            y = y_new;
            project(&mut y);
            k1 = f(&y);
            let factor = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            h *= factor;
        } else {
            h *= if err.is_finite() { (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0) } else { MIN_FACTOR };
            if h <= 1e-14 * t.max(1.0) {
                return Err(Error::Integration { t: dir * t });
            }
        }
    }
    Ok(y)
}
