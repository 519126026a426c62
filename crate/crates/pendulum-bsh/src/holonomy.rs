//! Parallel transport in the prequantum line bundle along pendulum orbits.
//!
//! With the trivializing section `λ₀` and connection one-form `p dα`, a
//! horizontal lift along an orbit has coefficient `z(t)` obeying
//! `dz/dt = (i/ħ) p(t)² z`.

use crate::classical::{
    component_action, period, project_to_energy, reference_point, EnergyRegion, PhasePoint,
};
use crate::error::{domain, Error, Result};
use crate::ode;
use num_complex::Complex64;
use std::f64::consts::TAU;

/// Coefficient of the trivializing section at a phase point.
pub type FiberValue = Complex64;

/// A unit complex number: the holonomy of the connection around one orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolonomyPhase(Complex64);

impl HolonomyPhase {
    pub fn value(&self) -> Complex64 {
        self.0
    }

    /// Distance `|phase - 1|` from trivial holonomy.
    pub fn defect(&self) -> f64 {
        (self.0 - 1.0).norm()
    }
}

fn check_energy(e: f64) -> Result<()> {
    match EnergyRegion::classify(e, 1.0) {
        EnergyRegion::Oscillation | EnergyRegion::RotationPlus if e.is_finite() => Ok(()),
        _ => Err(domain("e", e, "transport needs a regular orbit, away from 0 and 2")),
    }
}

fn check_hbar(hbar: f64) -> Result<()> {
    if hbar > 0.0 && hbar.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("hbar must be positive, got {hbar}")))
    }
}

/// Transports `z0` from `start` for time `duration` along the flow.
/// Returns the end point and the transported coefficient.
pub fn transport_along(
    start: PhasePoint,
    z0: FiberValue,
    hbar: f64,
    duration: f64,
    tol: f64,
) -> Result<(PhasePoint, FiberValue)> {
    check_hbar(hbar)?;
    let e = crate::classical::hamiltonian(start);
    let rhs = |y: &[f64; 4]| {
        let w = y[0] * y[0] / hbar;
        [-y[1].sin(), y[0], -w * y[3], w * y[2]]
    };
    let y = ode::integrate(
        rhs,
        [start.p(), start.alpha(), z0.re, z0.im],
        duration,
        tol,
        |y: &mut [f64; 4]| project_to_energy(&mut y[..2], e),
    )?;
    Ok((PhasePoint::new(y[0], y[1]), Complex64::new(y[2], y[3])))
}

/// Transports `z0` once around the orbit of energy `e` and returns `z(T)`.
///
/// ```
/// use num_complex::Complex64;
/// use pendulum_bsh::holonomy::{holonomy_phase, parallel_transport};
/// let z = parallel_transport(1.0, Complex64::new(1.0, 0.0), 0.5, 1e-11).unwrap();
/// let phase = holonomy_phase(1.0, 0.5).unwrap().value();
/// assert!((z - phase).norm() < 1e-6);
/// ```
pub fn parallel_transport(e: f64, z0: FiberValue, hbar: f64, tol: f64) -> Result<FiberValue> {
    check_energy(e)?;
    if z0 == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidArgument("initial fiber value must be nonzero".into()));
    }
    let (_, z) = transport_along(reference_point(e)?, z0, hbar, period(e)?, tol)?;
    Ok(z)
}

/// Analytic holonomy `exp(2πi I(e)/ħ)` of the connected component at energy `e`.
pub fn holonomy_phase(e: f64, hbar: f64) -> Result<HolonomyPhase> {
    check_energy(e)?;
    check_hbar(hbar)?;
    let turns = component_action(e)? / hbar;
    Ok(HolonomyPhase(Complex64::from_polar(1.0, TAU * turns.fract())))
}

/// Quantum number `n` of the orbit at energy `e` if its action is within `tol`
/// of `nħ`, otherwise `None`.
pub fn is_bohr_sommerfeld(e: f64, hbar: f64, tol: f64) -> Option<u64> {
    if !(hbar > 0.0) || EnergyRegion::classify(e, 1.0) == EnergyRegion::Separatrix {
        return None;
    }
    let action = if e <= 0.0 { 0.0 } else { component_action(e).ok()? };
    let n = (action / hbar).round();
    ((action - n * hbar).abs() < tol).then_some(n as u64)
}

/// Largest `|phase - 1|` an orbit within action distance `tol` of a
/// Bohr-Sommerfeld torus can show: the chord `2 sin(π tol / ħ)`.
pub fn holonomy_window(hbar: f64, tol: f64) -> f64 {
    2.0 * (std::f64::consts::PI * tol / hbar).min(std::f64::consts::FRAC_PI_2).sin()
}
