//! Pendulum mechanics on the cylinder: Hamiltonian, flow, periods,
//! actions and angle variables.
//!
//! Actions use the normalized convention `(1/2π)∮ p dα`, so the
//! Bohr-Sommerfeld condition reads `I = nħ` everywhere in this crate.

use crate::elliptic::{complete_e, complete_k, incomplete_f, EllipticModulus};
use crate::error::{domain, Result};
use crate::ode;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Energies closer than this to 2 are treated as lying on the separatrix.
pub const SEPARATRIX_BAND: f64 = 1e-9;

/// Action of the whole separatrix level, the supremum of the oscillation action.
pub const SEPARATRIX_FULL_ACTION: f64 = 8.0 / PI;

/// Action of one separatrix branch, the infimum of the rotation action.
pub const SEPARATRIX_BRANCH_ACTION: f64 = 4.0 / PI;

/// Below this energy the oscillation action is evaluated by its Taylor series.
const SMALL_ENERGY: f64 = 1e-4;

/// A point `(p, α)` of the cylinder, with `α` kept in `[-π, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhasePoint {
    p: f64,
    alpha: f64,
}

/// Maps an angle onto `[-π, π)`.
pub fn normalize_angle(alpha: f64) -> f64 {
    if (-PI..PI).contains(&alpha) {
        return alpha;
    }
    let mut a = (alpha + PI).rem_euclid(TAU) - PI;
    if a >= PI {
        a -= TAU;
    }
    a
}

impl PhasePoint {
    pub fn new(p: f64, alpha: f64) -> Self {
        Self {
            p,
            alpha: normalize_angle(alpha),
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// The reflection `(p, α) ↦ (-p, -α)` generating the Z₂ symmetry.
    pub fn reflect(&self) -> Self {
        Self::new(-self.p, -self.alpha)
    }
}

/// Which part of phase space an energy level (and momentum sign) belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyRegion {
    StableEquilibrium,
    Oscillation,
    Separatrix,
    RotationPlus,
    RotationMinus,
}

impl EnergyRegion {
    /// Classifies an energy `e` and momentum `p`. Total on all inputs.
    pub fn classify(e: f64, p: f64) -> Self {
        if (e - 2.0).abs() < SEPARATRIX_BAND {
            Self::Separatrix
        } else if e <= 0.0 {
            Self::StableEquilibrium
        } else if e < 2.0 {
            Self::Oscillation
        } else if p >= 0.0 {
            Self::RotationPlus
        } else {
            Self::RotationMinus
        }
    }

    pub fn is_rotation(&self) -> bool {
        matches!(self, Self::RotationPlus | Self::RotationMinus)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::StableEquilibrium => "stable_equilibrium",
            Self::Oscillation => "oscillation",
            Self::Separatrix => "separatrix",
            Self::RotationPlus => "rotation_plus",
            Self::RotationMinus => "rotation_minus",
        }
    }
}

/// An action together with its conjugate angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActionAngleValue {
    pub action: f64,
    pub angle: f64,
}

/// `H = ½p² - cos α + 1`.
pub fn hamiltonian(pt: PhasePoint) -> f64 {
    0.5 * pt.p * pt.p - pt.alpha.cos() + 1.0
}

/// Hamiltonian vector field `(dp/dt, dα/dt) = (-sin α, p)`.
pub fn vector_field(pt: PhasePoint) -> (f64, f64) {
    (-pt.alpha.sin(), pt.p)
}

fn pendulum_rhs(y: &[f64; 2]) -> [f64; 2] {
    [-y[1].sin(), y[0]]
}

/// Pulls `(p, α)` back onto the level `H = e` by one Newton step along `∇H`.
pub(crate) fn project_to_energy(y: &mut [f64], e: f64) {
    let (p, a) = (y[0], y[1]);
    let residual = 0.5 * p * p - a.cos() + 1.0 - e;
    let (gp, ga) = (p, a.sin());
    let norm2 = gp * gp + ga * ga;
    if norm2 > 1e-12 {
        y[0] -= residual * gp / norm2;
        y[1] -= residual * ga / norm2;
    }
}

/// Follows the Hamiltonian flow for time `t` (either sign).
///
/// Uses an adaptive Dormand-Prince pair with a projection back onto the
/// starting energy level after each step.
pub fn flow(pt: PhasePoint, t: f64, tol: f64) -> Result<PhasePoint> {
    let e = hamiltonian(pt);
    let y = ode::integrate(pendulum_rhs, [pt.p, pt.alpha], t, tol, |y: &mut [f64; 2]| {
        project_to_energy(y, e)
    })?;
    Ok(PhasePoint::new(y[0], y[1]))
}

fn check_oscillation(e: f64) -> Result<()> {
    if !(e > 0.0 && e < 2.0 - SEPARATRIX_BAND) {
        return Err(domain("e", e, "oscillation energies lie in (0, 2)"));
    }
    Ok(())
}

fn check_rotation(e: f64) -> Result<()> {
    if !(e > 2.0 + SEPARATRIX_BAND && e.is_finite()) {
        return Err(domain("e", e, "rotation energies lie above 2"));
    }
    Ok(())
}

fn oscillation_modulus(e: f64) -> Result<EllipticModulus> {
    EllipticModulus::from_complement((2.0 - e) / 2.0)
}

fn rotation_modulus(e: f64) -> Result<EllipticModulus> {
    EllipticModulus::from_complement((e - 2.0) / e)
}

/// Turning angle `α⁺ = arccos(1 - e)` of an oscillation.
pub fn turning_angle(e: f64) -> Result<f64> {
    check_oscillation(e)?;
    Ok((1.0 - e).acos())
}

/// Period of the orbit through energy `e`: `4K(sqrt(e/2))` for oscillations and
/// `(2√2/√e) K(sqrt(2/e))` for one rotation.
///
/// ```
/// use pendulum_bsh::classical::period;
/// let small = period(1e-8).unwrap();
/// assert!((small - 2.0 * std::f64::consts::PI).abs() < 1e-6);
/// ```
pub fn period(e: f64) -> Result<f64> {
    if e < 2.0 {
        check_oscillation(e)?;
        Ok(4.0 * complete_k(oscillation_modulus(e)?)?)
    } else {
        check_rotation(e)?;
        Ok(2.0 * 2f64.sqrt() / e.sqrt() * complete_k(rotation_modulus(e)?)?)
    }
}

/// Oscillation action `I₀(e) = (8/π)(E - (1 - k²)K)` with `k² = e/2`.
pub fn oscillation_action(e: f64) -> Result<f64> {
    if e == 0.0 {
        return Ok(0.0);
    }
    check_oscillation(e)?;
    if e < SMALL_ENERGY {
        return Ok(e * (1.0 + e / 16.0 + 3.0 * e * e / 256.0));
    }
    let m = oscillation_modulus(e)?;
    Ok(8.0 / PI * (complete_e(m) - m.complement() * complete_k(m)?))
}

/// Action of one rotation branch, `I±(e) = (2√(2e)/π) E(sqrt(2/e))`.
pub fn rotation_action(e: f64) -> Result<f64> {
    check_rotation(e)?;
    Ok(2.0 * (2.0 * e).sqrt() / PI * complete_e(rotation_modulus(e)?))
}

/// Action of the connected component of `H⁻¹(e)`: `I₀` below 2, `I±` above.
pub fn component_action(e: f64) -> Result<f64> {
    if e < 2.0 {
        oscillation_action(e)
    } else {
        rotation_action(e)
    }
}

/// Action of the whole level set: `I₀` on `[0, 2]`, `2I±` above 2.
pub fn full_action(e: f64) -> Result<f64> {
    if e < 0.0 || !e.is_finite() {
        return Err(domain("e", e, "energy must be finite and non-negative"));
    }
    if e > 2.0 {
        return Ok(4.0 * (2.0 * e).sqrt() / PI * complete_e(rotation_modulus(e)?));
    }
    if e == 0.0 {
        return Ok(0.0);
    }
    if e < SMALL_ENERGY {
        return oscillation_action(e);
    }
    let m = oscillation_modulus(e)?;
    let tail = if m.complement() == 0.0 {
        0.0
    } else {
        m.complement() * complete_k(m)?
    };
    Ok(8.0 / PI * (complete_e(m) - tail))
}

/// Action on the region named by `region`, which must agree with `e`.
///
/// The separatrix region reports the branch action `4/π`.
pub fn action(e: f64, region: EnergyRegion) -> Result<f64> {
    let found = EnergyRegion::classify(e, 0.0);
    let consistent = match region {
        EnergyRegion::RotationPlus | EnergyRegion::RotationMinus => found.is_rotation(),
        other => found == other,
    };
    if !consistent {
        return Err(domain("e", e, "energy does not belong to the requested region"));
    }
    match region {
        EnergyRegion::StableEquilibrium => Ok(0.0),
        EnergyRegion::Oscillation => oscillation_action(e),
        EnergyRegion::Separatrix => Ok(SEPARATRIX_BRANCH_ACTION),
        EnergyRegion::RotationPlus | EnergyRegion::RotationMinus => rotation_action(e),
    }
}

/// Angle variable of `pt`, in `[0, 2π)`.
///
/// Oscillations are measured from `α = -α⁺` (where `p` turns positive),
/// rotations from `α = -π`.
pub fn angle(pt: PhasePoint) -> Result<f64> {
    let e = hamiltonian(pt);
    let theta = match EnergyRegion::classify(e, pt.p) {
        EnergyRegion::StableEquilibrium | EnergyRegion::Separatrix => {
            return Err(domain("e", e, "angle is undefined at equilibria and on the separatrix"))
        }
        EnergyRegion::Oscillation => {
            let m = oscillation_modulus(e)?;
            let s = m.k();
            let phi = ((pt.alpha / 2.0).sin() / s).clamp(-1.0, 1.0).asin();
            let f = incomplete_f(phi, m)?;
            let kk = complete_k(m)?;
            let t = if pt.p >= 0.0 { f + kk } else { 3.0 * kk - f };
            TAU * t / (4.0 * kk)
        }
        region => {
            let m = rotation_modulus(e)?;
            let f = incomplete_f(pt.alpha / 2.0, m)?;
            let kk = complete_k(m)?;
            let t = if region == EnergyRegion::RotationPlus { f + kk } else { kk - f };
            TAU * t / (2.0 * kk)
        }
    };
    let wrapped = theta.rem_euclid(TAU);
    Ok(if wrapped >= TAU { 0.0 } else { wrapped })
}

/// Action and angle of `pt` together.
pub fn action_angle(pt: PhasePoint) -> Result<ActionAngleValue> {
    let angle = angle(pt)?;
    Ok(ActionAngleValue {
        action: component_action(hamiltonian(pt))?,
        angle,
    })
}

/// A convenient point on the orbit of energy `e`: the left turning point for
/// oscillations, the bottom `α = 0` with `p > 0` for rotations.
pub fn reference_point(e: f64) -> Result<PhasePoint> {
    if e < 2.0 {
        Ok(PhasePoint::new(0.0, -turning_angle(e)?))
    } else {
        check_rotation(e)?;
        Ok(PhasePoint::new((2.0 * e).sqrt(), 0.0))
    }
}

/// Momentum on the upper branch of `H⁻¹(e)` at angle `α`, when real.
pub fn upper_momentum(e: f64, alpha: f64) -> Option<f64> {
    let v = 2.0 * (e - 1.0 + alpha.cos());
    (v >= 0.0).then(|| v.sqrt())
}

/// Phase of the harmonic oscillator through `pt`, measured from the left
/// turning point. [`angle`] tends to it as the energy goes to zero.
pub fn harmonic_angle(pt: PhasePoint) -> f64 {
    (pt.alpha.atan2(pt.p) + FRAC_PI_2).rem_euclid(TAU)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::quad;

    #[test]
    fn hamiltonian_values() {
        assert_eq!(hamiltonian(PhasePoint::new(0.0, 0.0)), 0.0);
        assert!((hamiltonian(PhasePoint::new(0.0, PI)) - 2.0).abs() < 1e-15);
        assert!((hamiltonian(PhasePoint::new(1.0, FRAC_PI_2)) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn vector_field_values() {
        assert_eq!(vector_field(PhasePoint::new(0.0, 0.0)), (0.0, 0.0));
        let (dp, da) = vector_field(PhasePoint::new(0.0, PI));
        assert!(dp.abs() < 1e-15 && da == 0.0);
        let (dp, da) = vector_field(PhasePoint::new(2.0, FRAC_PI_2));
        assert!((dp + 1.0).abs() < 1e-15 && da == 2.0);
    }

    #[test]
    fn angles_are_normalized() {
        assert_eq!(PhasePoint::new(1.0, 0.5), PhasePoint::new(1.0, 0.5 + TAU));
        assert_eq!(PhasePoint::new(0.0, PI).alpha(), -PI);
        assert_eq!(PhasePoint::new(0.0, -PI).alpha(), -PI);
    }

    #[test]
    fn classify_is_exhaustive() {
        assert_eq!(EnergyRegion::classify(0.0, 0.0), EnergyRegion::StableEquilibrium);
        assert_eq!(EnergyRegion::classify(1.0, -1.0), EnergyRegion::Oscillation);
        assert_eq!(EnergyRegion::classify(2.0 + 1e-10, 1.0), EnergyRegion::Separatrix);
        assert_eq!(EnergyRegion::classify(3.0, 1.0), EnergyRegion::RotationPlus);
        assert_eq!(EnergyRegion::classify(3.0, -1.0), EnergyRegion::RotationMinus);
    }

    #[test]
    fn turning_angles() {
        assert!((turning_angle(1.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((turning_angle(1.5).unwrap() - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!(turning_angle(1e-12).unwrap() < 1e-5);
        assert!(turning_angle(0.0).is_err());
        assert!(turning_angle(2.5).is_err());
    }

    #[test]
    fn period_limits_and_growth() {
        assert!((period(1e-10).unwrap() - TAU).abs() < 1e-8);
        let oracle = 4.0 * complete_k(EllipticModulus::new(0.5f64.sqrt()).unwrap()).unwrap();
        assert_eq!(period(1.0).unwrap(), oracle);
        assert!(period(1.9999).unwrap() > period(1.999).unwrap());
        assert!(period(0.0).is_err());
        assert!(period(2.0).is_err());
        assert!(period(-1.0).is_err());
    }

    #[test]
    fn rotation_period_from_time_integral() {
        // Time for α to sweep [-π, π] at energy e is ∫ dα / p.
        for &e in &[2.5, 4.0, 10.0] {
            let oracle = quad(|a| 1.0 / (2.0 * (e - 1.0 + f64::cos(a))).sqrt(), -PI, PI, 1e-12).unwrap();
            assert!((period(e).unwrap() - oracle).abs() < 1e-10, "e = {e}");
        }
    }

    #[test]
    fn rotation_period_scales_like_inverse_sqrt_energy() {
        // The fast-rotor period behaves as π√(2/e).
        for &e in &[1e3, 1e5] {
            let t = period(e).unwrap();
            assert!((t / (PI * (2.0 / e).sqrt()) - 1.0).abs() < 2.0 / e);
        }
        assert!(period(1e4).unwrap() < period(1e3).unwrap());
    }

    #[test]
    fn actions_match_quadrature() {
        for &e in &[0.001, 0.3, 1.0, 1.7, 1.99] {
            let m = e / 2.0;
            let oracle = 4.0 * e / PI
                * quad(|t| t.cos().powi(2) / (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 1e-13)
                    .unwrap();
            assert!((oscillation_action(e).unwrap() - oracle).abs() < 1e-11, "e = {e}");
        }
        for &e in &[2.01_f64, 3.0, 8.0, 50.0] {
            let m = 2.0 / e;
            let oracle = 2.0 * (2.0 * e).sqrt() / PI
                * quad(|t| (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 1e-13).unwrap();
            assert!((rotation_action(e).unwrap() - oracle).abs() < 1e-11, "e = {e}");
        }
    }

    #[test]
    fn action_series_joins_closed_form() {
        let below = oscillation_action(SMALL_ENERGY * (1.0 - 1e-12)).unwrap();
        let above = oscillation_action(SMALL_ENERGY * (1.0 + 1e-12)).unwrap();
        assert!((below - above).abs() < 1e-15);
    }

    #[test]
    fn action_limits() {
        assert!((oscillation_action(2.0 - 1e-6).unwrap() - 8.0 / PI).abs() < 1e-3);
        assert!((rotation_action(2.0 + 1e-6).unwrap() - 4.0 / PI).abs() < 1e-3);
        assert!((oscillation_action(1e-3).unwrap() / 1e-3 - 1.0).abs() < 1e-3);
        assert!((rotation_action(200.0).unwrap() / 400f64.sqrt() - 1.0).abs() < 1e-2);
    }

    #[test]
    fn full_action_is_continuous_at_separatrix() {
        let lo = full_action(2.0 - 1e-8).unwrap();
        let hi = full_action(2.0 + 1e-8).unwrap();
        assert!((lo - hi).abs() < 1e-3);
        assert_eq!(full_action(2.0).unwrap(), 8.0 / PI);
    }

    #[test]
    fn action_checks_region() {
        assert!(action(1.0, EnergyRegion::RotationPlus).is_err());
        assert!(action(3.0, EnergyRegion::Oscillation).is_err());
        assert_eq!(action(0.0, EnergyRegion::StableEquilibrium).unwrap(), 0.0);
        assert_eq!(action(2.0, EnergyRegion::Separatrix).unwrap(), 4.0 / PI);
        assert_eq!(
            action(3.0, EnergyRegion::RotationMinus).unwrap(),
            action(3.0, EnergyRegion::RotationPlus).unwrap()
        );
    }

    #[test]
    fn flow_fixed_points_and_closure() {
        let origin = PhasePoint::new(0.0, 0.0);
        assert_eq!(flow(origin, 5.0, 1e-10).unwrap(), origin);
        let start = reference_point(1.0).unwrap();
        let back = flow(start, period(1.0).unwrap(), 1e-11).unwrap();
        assert!((back.p() - start.p()).abs() < 1e-6);
        assert!((back.alpha() - start.alpha()).abs() < 1e-6);
    }

    #[test]
    fn flow_is_reversible_and_conserves_energy() {
        let tol = 1e-10;
        let pt = PhasePoint::new(0.7, -1.2);
        let fwd = flow(pt, 40.0, tol).unwrap();
        assert!((hamiltonian(fwd) - hamiltonian(pt)).abs() < 10.0 * tol);
        let back = flow(fwd, -40.0, tol).unwrap();
        assert!((back.p() - pt.p()).abs() < 1e-8);
        assert!((back.alpha() - pt.alpha()).abs() < 1e-8);
    }

    #[test]
    fn angle_reference_points() {
        // asin is ill-conditioned at the turning point, so only ~sqrt(eps) is available there.
        let start = reference_point(1.0).unwrap();
        assert!(angle(start).unwrap().min(TAU - angle(start).unwrap()) < 1e-7);
        let rot = PhasePoint::new((2.0 * (3.0 - 2.0f64)).sqrt(), -PI);
        assert!(angle(rot).unwrap().min(TAU - angle(rot).unwrap()) < 1e-12);
        assert!(angle(PhasePoint::new(0.0, 0.0)).is_err());
        assert!(angle(PhasePoint::new(0.0, PI)).is_err());
    }

    #[test]
    fn angle_advances_by_pi_over_half_period() {
        for &e in &[0.5, 1.0, 1.8, 2.7, 6.0] {
            let pt = reference_point(e).unwrap();
            let pt = flow(pt, 0.37, 1e-12).unwrap();
            let later = flow(pt, period(e).unwrap() / 2.0, 1e-12).unwrap();
            let d = (angle(later).unwrap() - angle(pt).unwrap()).rem_euclid(TAU);
            assert!((d - PI).abs() < 1e-6, "e = {e}: {d}");
        }
    }

    #[test]
    fn small_oscillations_follow_harmonic_phase() {
        let e = 1e-6;
        let start = reference_point(e).unwrap();
        for (i, &t) in [0.4, 1.1, 2.0, 2.6, 3.9, 4.5, 5.4].iter().enumerate() {
            let pt = flow(start, t, 1e-13).unwrap();
            let d = (angle(pt).unwrap() - harmonic_angle(pt)).rem_euclid(TAU);
            assert!(d.min(TAU - d) < 1e-5, "step {i}: {d}");
        }
    }
}
