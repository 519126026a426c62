//! Reduction with the lift `η(z, p, α) = (-z, -p, -α)` acting by `-1` on fibers.
//!
//! The orbit space of `η` on the trivial bundle is a semialgebraic variety in
//! `ℝ⁸` with coordinates `(τ, σ)`. Its reduced Bohr-Sommerfeld levels
//! reconstruct the odd part of the unreduced spectrum.

use crate::classical::{
    oscillation_action, period, reference_point, turning_angle, EnergyRegion, PhasePoint,
    SEPARATRIX_BRANCH_ACTION,
};
use crate::elliptic::quad;
use crate::error::{domain, Error, Result};
use crate::holonomy::{is_bohr_sommerfeld, transport_along, FiberValue};
use crate::reduction::{
    checked_hbar, match_level, orbit_map, solve_reduced, ReducedLevel, Representation, STABLE_POINT,
    UNSTABLE_POINT,
};
use crate::spectrum::{bisect_increasing, QuantumLevel, Spectrum};
use nalgebra::{DMatrix, SMatrix};
use rand::Rng;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOL: f64 = 1e-8;

/// Largest relation residual, relative to the tuple size, accepted as on-variety.
pub const ON_VARIETY_TOL: f64 = 1e-8;

/// Margin below which `ρ₁` or a distance to a singular point counts as zero.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Invariants `(τ₁, τ₂, τ₃)` and `(σ₁, …, σ₅)` of the `η` action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantTuple {
    pub tau: [f64; 3],
    pub sigma: [f64; 5],
}

impl InvariantTuple {
    /// `ρ₁ = τ₁ + τ₃ - 1`, which equals `p²/2` on images.
    pub fn rho(&self) -> f64 {
        self.tau[0] + self.tau[2] - 1.0
    }

    pub fn as_vector(&self) -> [f64; 8] {
        let [t1, t2, t3] = self.tau;
        let [s1, s2, s3, s4, s5] = self.sigma;
        [t1, t2, t3, s1, s2, s3, s4, s5]
    }

    fn scale(&self) -> f64 {
        1.0 + self.as_vector().iter().fold(0.0_f64, |m, v| m.max(v.abs())).powi(2)
    }
}

/// A point `(τ, ν)` of the variety carrying the reduced bundle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedBundlePoint {
    pub tau: [f64; 3],
    pub nu: [f64; 2],
}

/// Whether a tuple is a smooth or singular point of the orbit variety.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stratum {
    Regular,
    Singular,
}

/// Stratum together with the rank that decided it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StratumClass {
    pub class: Stratum,
    pub rank: usize,
}

impl StratumClass {
    fn from_rank(rank: usize) -> Self {
        let class = if rank == 5 { Stratum::Regular } else { Stratum::Singular };
        Self { class, rank }
    }
}

/// A serialized stratification sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StratificationRecord {
    pub tau: [f64; 3],
    pub sigma: [f64; 5],
    pub rank: usize,
    pub class: Stratum,
}

/// The lift `η(z, pt) = (-z, ζ(pt))`.
pub fn eta(z: (f64, f64), pt: PhasePoint) -> ((f64, f64), PhasePoint) {
    ((-z.0, -z.1), pt.reflect())
}

/// `σ = (x², y², xy, xp, yp)` and `τ = (cos α, p sin α, H)`.
///
/// ```
/// use pendulum_bsh::classical::PhasePoint;
/// use pendulum_bsh::minus_one::invariants8;
/// let t = invariants8((1.0, 0.0), PhasePoint::new(1.0, std::f64::consts::FRAC_PI_2));
/// assert_eq!(t.sigma, [1.0, 0.0, 0.0, 1.0, 0.0]);
/// ```
pub fn invariants8(z: (f64, f64), pt: PhasePoint) -> InvariantTuple {
    let (x, y) = z;
    let p = pt.p();
    let tau = orbit_map(pt).to_array();
    InvariantTuple {
        tau,
        sigma: [x * x, y * y, x * y, x * p, y * p],
    }
}

/// The relations `f₁, …, f₅` cutting out the orbit variety.
pub fn relations_residual(t: &InvariantTuple) -> [f64; 5] {
    let [t1, t2, _] = t.tau;
    let [s1, s2, s3, s4, s5] = t.sigma;
    let rho = t.rho();
    [
        0.5 * t2 * t2 - rho * (1.0 - t1 * t1),
        s3 * s3 - s1 * s2,
        0.5 * s4 * s4 - rho * s1,
        0.5 * s5 * s5 - rho * s2,
        0.5 * s4 * s5 - rho * s3,
    ]
}

/// Whether `t` satisfies the relations and inequalities of the variety.
pub fn on_variety(t: &InvariantTuple) -> bool {
    let worst = relations_residual(t).iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    worst <= ON_VARIETY_TOL * t.scale()
        && t.tau[0].abs() <= 1.0 + DEGENERACY_TOL
        && t.tau[2] >= -DEGENERACY_TOL
        && t.sigma[0] >= 0.0
        && t.sigma[1] >= 0.0
}

/// The 5×8 derivative matrix as displayed with the singularity analysis,
/// entry for entry. It differs from [`relations_jacobian`] in the `(1,1)`
/// entry and in the last two entries of row 5.
pub fn displayed_jacobian(t: &InvariantTuple) -> SMatrix<f64, 5, 8> {
    let [t1, t2, _] = t.tau;
    let [s1, s2, s3, s4, s5] = t.sigma;
    let r = t.rho();
    SMatrix::<f64, 5, 8>::from_row_slice(&[
        2.0 * t1 * r - (1.0 - t1), t2, -(1.0 - t1 * t1), 0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, -s2, -s1, 2.0 * s3, 0.0, 0.0,
        -s1, 0.0, -s1, -r, 0.0, 0.0, s4, 0.0,
        -s2, 0.0, -s2, 0.0, -r, 0.0, 0.0, s5,
        -s3, 0.0, -s3, 0.0, 0.0, -r, s5, s4,
    ])
}

/// The exact derivative of `(f₁, …, f₅)` with respect to `(τ, σ)`.
pub fn relations_jacobian(t: &InvariantTuple) -> SMatrix<f64, 5, 8> {
    let [t1, t2, _] = t.tau;
    let [s1, s2, s3, s4, s5] = t.sigma;
    let r = t.rho();
    SMatrix::<f64, 5, 8>::from_row_slice(&[
        2.0 * t1 * r - (1.0 - t1 * t1), t2, -(1.0 - t1 * t1), 0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, -s2, -s1, 2.0 * s3, 0.0, 0.0,
        -s1, 0.0, -s1, -r, 0.0, 0.0, s4, 0.0,
        -s2, 0.0, -s2, 0.0, -r, 0.0, 0.0, s5,
        -s3, 0.0, -s3, 0.0, 0.0, -r, 0.5 * s5, 0.5 * s4,
    ])
}

/// Numerical rank: singular values above `tol` times the largest.
pub fn numerical_rank(m: &SMatrix<f64, 5, 8>, tol: f64) -> usize {
    let dm = DMatrix::from_column_slice(5, 8, m.as_slice());
    let sv = dm.singular_values();
    let top = sv.iter().fold(0.0_f64, |a, b| a.max(*b));
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > tol * top).count()
}

/// Classifies an on-variety tuple by the rank of the displayed derivative matrix.
pub fn jacobian_rank(t: &InvariantTuple, tol: f64) -> Result<StratumClass> {
    if !on_variety(t) {
        let worst = relations_residual(t).iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        return Err(domain("relation residual", worst, "tuple is not on the orbit variety"));
    }
    Ok(StratumClass::from_rank(numerical_rank(&displayed_jacobian(t), tol)))
}

/// Whether `τ` avoids the two singular points of the reduced space.
pub fn tau_regular(tau: [f64; 3]) -> bool {
    [STABLE_POINT, UNSTABLE_POINT].iter().all(|s| {
        let d = s.to_array().iter().zip(tau.iter()).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
        d.sqrt() > DEGENERACY_TOL
    })
}

/// The description of the regular set: `τ` regular, `σ̄ ≠ 0` and `ρ₁ > 0`.
pub fn regular_by_description(t: &InvariantTuple) -> bool {
    let bar = t.sigma[..3].iter().any(|s| s.abs() > DEGENERACY_TOL);
    tau_regular(t.tau) && bar && t.rho() > DEGENERACY_TOL
}

/// The description of the singular set: `τ` singular, `σ̄ = 0`, or `σ₄ = σ₅ = 0`.
pub fn singular_by_description(t: &InvariantTuple) -> bool {
    let bar_zero = t.sigma[..3].iter().all(|s| s.abs() <= DEGENERACY_TOL);
    let nu_zero = t.sigma[3].abs() <= DEGENERACY_TOL && t.sigma[4].abs() <= DEGENERACY_TOL;
    !tau_regular(t.tau) || bar_zero || nu_zero
}

/// Stratification record for one tuple.
pub fn stratify(t: &InvariantTuple, tol: f64) -> Result<StratificationRecord> {
    let c = jacobian_rank(t, tol)?;
    Ok(StratificationRecord {
        tau: t.tau,
        sigma: t.sigma,
        rank: c.rank,
        class: c.class,
    })
}

/// `Ψ(τ, ν) = (τ, ν₁²/2ρ₁, ν₂²/2ρ₁, ν₁ν₂/2ρ₁, ν₁, ν₂)`.
pub fn psi(b: &ReducedBundlePoint) -> Result<InvariantTuple> {
    let rho = b.tau[0] + b.tau[2] - 1.0;
    if !(rho > 0.0) {
        return Err(domain("rho1", rho, "psi needs tau1 + tau3 - 1 > 0"));
    }
    let [n1, n2] = b.nu;
    if n1 == 0.0 && n2 == 0.0 {
        return Err(domain("nu", 0.0, "psi needs a nonzero fiber coordinate"));
    }
    let h = 0.5 / rho;
    Ok(InvariantTuple {
        tau: b.tau,
        sigma: [h * n1 * n1, h * n2 * n2, h * n1 * n2, n1, n2],
    })
}

/// `Π(τ, σ) = (τ, (σ₄, σ₅))` on the smooth part with `ρ₁ > 0` and `(σ₄, σ₅) ≠ 0`.
pub fn pi_inverse(t: &InvariantTuple) -> Result<ReducedBundlePoint> {
    if !(t.rho() > 0.0) {
        return Err(domain("rho1", t.rho(), "outside the smooth bundle part"));
    }
    if t.sigma[3] == 0.0 && t.sigma[4] == 0.0 {
        return Err(domain("sigma4", 0.0, "fiber coordinate (sigma4, sigma5) vanishes"));
    }
    if !on_variety(t) {
        return Err(domain("rho1", t.rho(), "tuple is not on the orbit variety"));
    }
    Ok(ReducedBundlePoint {
        tau: t.tau,
        nu: [t.sigma[3], t.sigma[4]],
    })
}

/// Draws on-variety tuples by pushing random `(x, y, p, α)` through
/// [`invariants8`]. Most draws are generic; the rest land on `p = 0`,
/// `z = 0` or an equilibrium so the singular strata are hit.
pub fn sample_on_variety<R: Rng + ?Sized>(rng: &mut R, count: usize) -> Vec<InvariantTuple> {
    (0..count)
        .map(|_| {
            let mut x = rng.gen_range(-2.0..2.0);
            let mut y = rng.gen_range(-2.0..2.0);
            let mut p = rng.gen_range(-3.0..3.0);
            let mut a = rng.gen_range(-PI..PI);
            match rng.gen_range(0..10) {
                0 => p = 0.0,
                1 => (x, y) = (0.0, 0.0),
                2 => {
                    p = 0.0;
                    a = if rng.gen_bool(0.5) { 0.0 } else { -PI };
                }
                _ => {}
            }
            invariants8((x, y), PhasePoint::new(p, a))
        })
        .collect()
}

/// Levels of the reduced system with the `-1` lift.
///
/// Below the separatrix the reduced orbit lifts to half an orbit, closed up
/// by `η`, so the rule is `Ĩ(e) = (k - ½)ħ` for `k ≥ 1`. Above it the reduced
/// orbit is a whole rotation and the rule is `Ĩ(e) = kħ`.
pub fn odd_reduced_spectrum(hbar: f64, k_max: u64) -> Result<Vec<ReducedLevel>> {
    checked_hbar(hbar)?;
    let mut out = Vec::new();
    for k in 1..=k_max {
        let half = (k as f64 - 0.5) * hbar;
        if half < SEPARATRIX_BRANCH_ACTION {
            let (energy, region) = solve_reduced(half)?;
            out.push(ReducedLevel {
                k,
                energy,
                region,
                representation: Representation::Odd,
            });
        }
    }
    for k in 1..=k_max {
        let whole = k as f64 * hbar;
        if whole > SEPARATRIX_BRANCH_ACTION {
            let (energy, region) = solve_reduced(whole)?;
            out.push(ReducedLevel {
                k,
                energy,
                region,
                representation: Representation::Odd,
            });
        }
    }
    Ok(out)
}

/// Unreduced levels recovered from odd reduced levels: `k ↦ n = 2k - 1` below
/// the separatrix, `k ↦ σ_k⁻` above. Rotation levels beyond `m_max` are dropped.
pub fn reconstruct_odd(levels: &[ReducedLevel], spectrum: &Spectrum) -> Result<Vec<QuantumLevel>> {
    let mut out = Vec::new();
    for level in levels {
        if level.representation != Representation::Odd {
            return Err(Error::InvalidArgument(format!("level {} is not from the odd representation", level.k)));
        }
        let partner = match level.region {
            EnergyRegion::RotationPlus | EnergyRegion::RotationMinus => {
                if level.k > spectrum.m_max() {
                    continue;
                }
                spectrum.rotation_level(EnergyRegion::RotationMinus, level.k)
            }
            _ => {
                if level.k == 0 {
                    continue;
                }
                spectrum.oscillation_level(2 * level.k - 1)
            }
        };
        match match_level(level.k, level.energy, partner)? {
            Some(q) => out.push(q),
            None => return Err(Error::Reconstruction { k: level.k, mismatch: f64::INFINITY }),
        }
    }
    Ok(out)
}

/// Normalized partial action `(1/π)∫_{-α₀}^{α₀} p dα` in the variable
/// `φ₀` with `sin(α₀/2) = k sin φ₀`; it runs from 0 to `I₀(e)` on `[0, π/2]`.
pub fn partial_action(e: f64, phi0: f64) -> Result<f64> {
    turning_angle(e)?;
    if phi0 == 0.0 {
        return Ok(0.0);
    }
    let m = e / 2.0;
    let integral = quad(|t| t.cos().powi(2) / (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, phi0, 1e-13)?;
    Ok(4.0 * e / PI * integral)
}

/// Angles `α₀ ∈ (0, α⁺]` whose partial action is an odd multiple of ħ.
/// Each one names a pair `{γ(α₀), γ(-α₀)}` exchanged by `η`.
pub fn orbit_pair_angles(e: f64, hbar: f64, tol: f64) -> Result<Vec<f64>> {
    let Some(n) = is_bohr_sommerfeld(e, hbar, tol) else {
        return Err(domain("e", e, "energy is not a Bohr-Sommerfeld level"));
    };
    if n == 0 {
        return Ok(Vec::new());
    }
    let s = (e / 2.0).sqrt();
    let full = partial_action(e, FRAC_PI_2)?;
    let mut out = Vec::new();
    for m in 1.. {
        let target = (2 * m - 1) as f64 * hbar;
        if target > full + tol {
            break;
        }
        let phi = if target >= full {
            FRAC_PI_2
        } else {
            bisect_increasing(|phi| partial_action(e, phi), target, 0.0, FRAC_PI_2, 1e-13)?
        };
        out.push(2.0 * (s * phi.sin()).asin());
    }
    Ok(out)
}

/// Number of `η`-orbit pairs on the closed horizontal lift at energy `e`.
pub fn orbit_pair_count(e: f64, hbar: f64, tol: f64) -> Result<usize> {
    Ok(orbit_pair_angles(e, hbar, tol)?.len())
}

/// Ratio `z(ζ(γ(t))) / z(γ(t))` of a horizontal section along the orbit of
/// energy `e < 2`, where `γ` starts at the left turning point. `ζ(γ(t))` is
/// reached after half a period.
pub fn half_orbit_ratio(e: f64, hbar: f64, t: f64, tol: f64) -> Result<(PhasePoint, PhasePoint, FiberValue)> {
    if !(e > 0.0 && e < 2.0) {
        return Err(domain("e", e, "half-orbit transport needs an oscillation"));
    }
    let start = reference_point(e)?;
    let one = FiberValue::new(1.0, 0.0);
    let (pt, z) = transport_along(start, one, hbar, t, tol)?;
    let (partner, w) = transport_along(pt, z, hbar, 0.5 * period(e)?, tol)?;
    Ok((pt, partner, w / z))
}

/// `(-1)^n` predicted for [`half_orbit_ratio`] on the level with quantum number `n`.
pub fn half_orbit_sign(e: f64, hbar: f64) -> Result<FiberValue> {
    let turns = 0.5 * oscillation_action(e)? / hbar;
    Ok(FiberValue::from_polar(1.0, 2.0 * PI * turns.fract()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::reduced_spectrum;
    use crate::spectrum::build_spectrum;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn invariant_examples() {
        let pt = PhasePoint::new(1.0, FRAC_PI_2);
        let t = invariants8((1.0, 0.0), pt);
        assert_eq!(t.sigma, [1.0, 0.0, 0.0, 1.0, 0.0]);
        assert!(t.tau[0].abs() < 1e-15 && t.tau[1] == 1.0 && t.tau[2] == 1.5);
        let t0 = invariants8((0.0, 0.0), PhasePoint::new(0.0, 0.0));
        assert_eq!(t0.sigma, [0.0; 5]);
        assert_eq!(t0.tau, [1.0, 0.0, 0.0]);
        let (z, q) = ((0.3, -1.2), PhasePoint::new(-0.8, 2.0));
        let (ez, eq) = eta(z, q);
        assert_eq!(invariants8(ez, eq), invariants8(z, q));
    }

    #[test]
    fn residual_examples() {
        let probe = InvariantTuple { tau: [0.0, 1.0, 0.0], sigma: [0.0; 5] };
        assert_eq!(relations_residual(&probe)[0], 1.5);
        let sing = InvariantTuple { tau: [-1.0, 0.0, 2.0], sigma: [0.0; 5] };
        assert_eq!(relations_residual(&sing), [0.0; 5]);
        let t = invariants8((0.4, -1.1), PhasePoint::new(1.3, 0.7));
        assert!(relations_residual(&t).iter().all(|r| r.abs() < 1e-12));
        assert!(jacobian_rank(&probe, RANK_TOL).is_err());
    }

    #[test]
    fn rank_examples() {
        let t = invariants8((1.0, 1.0), PhasePoint::new(1.0, PI / 3.0));
        assert_eq!(jacobian_rank(&t, RANK_TOL).unwrap(), StratumClass { class: Stratum::Regular, rank: 5 });
        let flat = invariants8((0.7, 0.2), PhasePoint::new(0.0, 1.0));
        assert_eq!(flat.rho(), 0.0);
        let c = jacobian_rank(&flat, RANK_TOL).unwrap();
        assert!(c.rank <= 4 && c.class == Stratum::Singular);
        let empty = invariants8((0.0, 0.0), PhasePoint::new(1.2, 0.5));
        assert_eq!(jacobian_rank(&empty, RANK_TOL).unwrap().class, Stratum::Singular);
    }

    #[test]
    fn exact_jacobian_has_rank_four_on_the_variety() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for t in sample_on_variety(&mut rng, 200) {
            assert!(numerical_rank(&relations_jacobian(&t), RANK_TOL) <= 4);
        }
    }

    #[test]
    fn exact_jacobian_matches_finite_differences() {
        let t = invariants8((0.6, -0.9), PhasePoint::new(1.1, 2.2));
        let j = relations_jacobian(&t);
        let v = t.as_vector();
        let h = 1e-6;
        for col in 0..8 {
            let (mut up, mut down) = (v, v);
            up[col] += h;
            down[col] -= h;
            let mk = |w: [f64; 8]| InvariantTuple { tau: [w[0], w[1], w[2]], sigma: [w[3], w[4], w[5], w[6], w[7]] };
            let (ru, rd) = (relations_residual(&mk(up)), relations_residual(&mk(down)));
            for row in 0..5 {
                assert!((j[(row, col)] - (ru[row] - rd[row]) / (2.0 * h)).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn descriptions_disagree_on_coordinate_axes() {
        // x = 0 with p != 0 meets the regular description, yet rows 2 and 3 of the
        // displayed matrix become dependent and the rank drops to 4.
        for z in [(0.0, 0.8), (0.8, 0.0)] {
            let t = invariants8(z, PhasePoint::new(1.0, 0.9));
            assert!(regular_by_description(&t));
            assert!(!singular_by_description(&t));
            let c = jacobian_rank(&t, RANK_TOL).unwrap();
            assert_eq!((c.class, c.rank), (Stratum::Singular, 4));
        }
    }

    #[test]
    fn psi_and_pi_examples() {
        let b = ReducedBundlePoint { tau: [0.0, 1.0, 1.5], nu: [0.0, 1.0] };
        let t = psi(&b).unwrap();
        assert_eq!(t.sigma, [0.0, 1.0, 0.0, 0.0, 1.0]);
        assert_eq!(pi_inverse(&t).unwrap(), b);
        assert!(psi(&ReducedBundlePoint { tau: [1.0, 0.0, 0.0], nu: [1.0, 0.0] }).is_err());
        assert!(psi(&ReducedBundlePoint { tau: [0.0, 1.0, 1.5], nu: [0.0, 0.0] }).is_err());
        let flat = invariants8((0.7, 0.2), PhasePoint::new(0.0, 1.0));
        assert!(pi_inverse(&flat).is_err());
    }

    #[test]
    fn psi_after_pi_is_identity_on_images() {
        let t = invariants8((0.5, -1.5), PhasePoint::new(1.7, -2.4));
        let back = psi(&pi_inverse(&t).unwrap()).unwrap();
        for (a, b) in back.as_vector().iter().zip(t.as_vector()) {
            assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn odd_spectrum_and_reconstruction() {
        let hbar = 0.4;
        let s = build_spectrum(hbar, 8).unwrap();
        let odd = odd_reduced_spectrum(hbar, 8).unwrap();
        let rec = reconstruct_odd(&odd, &s).unwrap();
        let below: Vec<u64> = rec.iter().filter(|q| q.region == EnergyRegion::Oscillation).map(|q| q.n).collect();
        assert_eq!(below, vec![1, 3, 5]);
        let above: Vec<u64> = rec.iter().filter(|q| q.region == EnergyRegion::RotationMinus).map(|q| q.n).collect();
        assert_eq!(above, vec![4, 5, 6, 7, 8]);
        assert!(reconstruct_odd(&reduced_spectrum(hbar, 2).unwrap(), &s).is_err());
    }

    #[test]
    fn orbit_pairs_match_claim() {
        let hbar = 0.4;
        let s = build_spectrum(hbar, 8).unwrap();
        for level in s.oscillation() {
            let got = orbit_pair_count(level.energy, hbar, 1e-9).unwrap();
            assert_eq!(got as u64, level.n.div_ceil(2), "n = {}", level.n);
        }
        assert!(orbit_pair_count(1.0, hbar, 1e-9).is_err());
    }

    #[test]
    fn partial_action_ends_at_full_action() {
        let e = 1.4;
        assert!((partial_action(e, FRAC_PI_2).unwrap() - oscillation_action(e).unwrap()).abs() < 1e-11);
        assert_eq!(partial_action(e, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn horizontal_sections_flip_sign_for_odd_levels() {
        let hbar = 0.4;
        let s = build_spectrum(hbar, 8).unwrap();
        for n in [1, 2, 5] {
            let e = s.oscillation_level(n).unwrap().energy;
            let (pt, partner, ratio) = half_orbit_ratio(e, hbar, 0.37, 1e-12).unwrap();
            assert!((partner.p() + pt.p()).abs() < 1e-6 && (partner.alpha() + pt.alpha()).abs() < 1e-6);
            let expected = if n % 2 == 1 { -1.0 } else { 1.0 };
            assert!((ratio - expected).norm() < 1e-6, "n = {n}: {ratio}");
            assert!((half_orbit_sign(e, hbar).unwrap() - expected).norm() < 1e-8);
        }
    }
}
