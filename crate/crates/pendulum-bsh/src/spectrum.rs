//! Quantized energies from the Bohr-Sommerfeld conditions `I = nħ`.
//!
//! Below the separatrix the oscillation tori carry `n = 0..=N` with
//! `N = max{n : nħ < 8/π}`. Above it each rotation branch carries `m ≥ M`
//! with `M = ⌈(N+1)/2⌉`, the first `m` with `mħ > 4/π`.

use crate::classical::{
    oscillation_action, rotation_action, EnergyRegion, SEPARATRIX_BAND, SEPARATRIX_BRANCH_ACTION,
    SEPARATRIX_FULL_ACTION,
};
use crate::error::{Error, HbarRejection, Result};
use serde::Serialize;

/// Energy resolution of every level solve.
pub const ENERGY_TOL: f64 = 1e-12;

/// Action distance below which a level counts as sitting on the separatrix.
pub const COLLISION_TOL: f64 = 1e-9;

/// Default top rotation quantum number kept in the finite carrier.
pub const DEFAULT_M_MAX: u64 = 32;

const LOW_BRACKET: f64 = 2.0 * SEPARATRIX_BAND;

/// One Bohr-Sommerfeld torus: quantum number, region and energy.
///
/// For rotation levels `n` is the index `m` of the rotation lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuantumLevel {
    pub n: u64,
    pub region: EnergyRegion,
    pub energy: f64,
}

/// The quantized catalogue for one value of ħ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    hbar: f64,
    top: u64,
    first_rotation: u64,
    m_max: u64,
    levels: Vec<QuantumLevel>,
    epsilon_gap: f64,
}

impl Spectrum {
    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `N`, the largest oscillation quantum number.
    pub fn top(&self) -> u64 {
        self.top
    }

    /// `M`, the smallest rotation quantum number.
    pub fn first_rotation(&self) -> u64 {
        self.first_rotation
    }

    /// Largest rotation quantum number kept.
    pub fn m_max(&self) -> u64 {
        self.m_max
    }

    pub fn levels(&self) -> &[QuantumLevel] {
        &self.levels
    }

    /// Half the distance from the separatrix to the nearest level.
    pub fn epsilon_gap(&self) -> f64 {
        self.epsilon_gap
    }

    /// Oscillation levels `n = 0..=N`, including the singular torus.
    pub fn oscillation(&self) -> impl Iterator<Item = &QuantumLevel> {
        self.levels.iter().filter(|l| !l.region.is_rotation())
    }

    /// Level with quantum number `n` below the separatrix.
    pub fn oscillation_level(&self, n: u64) -> Option<&QuantumLevel> {
        self.oscillation().find(|l| l.n == n)
    }

    /// Rotation level `m` on the given branch.
    pub fn rotation_level(&self, region: EnergyRegion, m: u64) -> Option<&QuantumLevel> {
        self.levels.iter().find(|l| l.region == region && l.n == m)
    }
}

/// `N = max{n ≥ 0 : nħ < 8/π}`.
pub fn top_quantum_number(hbar: f64) -> u64 {
    let mut n = (SEPARATRIX_FULL_ACTION / hbar).floor() as u64;
    while n > 0 && n as f64 * hbar >= SEPARATRIX_FULL_ACTION {
        n -= 1;
    }
    while (n + 1) as f64 * hbar < SEPARATRIX_FULL_ACTION {
        n += 1;
    }
    n
}

/// `M = ⌈(N + 1)/2⌉`.
pub fn first_rotation_number(top: u64) -> u64 {
    (top + 2) / 2
}

/// Finds `e` in `[lo, hi]` with `f(e) = target` for increasing `f`.
pub fn bisect_increasing(
    f: impl Fn(f64) -> Result<f64>,
    target: f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    if f(lo)? > target || f(hi)? < target {
        return Err(Error::NoLevel { target });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Energy above the separatrix where the rotation action reaches `target`.
pub fn solve_rotation(target: f64, action: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    if !(target > SEPARATRIX_BRANCH_ACTION) || !target.is_finite() {
        return Err(Error::NoLevel { target });
    }
    let lo = 2.0 + LOW_BRACKET;
    let mut hi = 4.0;
    while action(hi)? < target {
        hi *= 2.0;
    }
    bisect_increasing(action, target, lo, hi, ENERGY_TOL)
}

/// Energy below the separatrix where the oscillation-type action reaches `target`.
pub fn solve_oscillation(target: f64, action: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    if target == 0.0 {
        return Ok(0.0);
    }
    bisect_increasing(action, target, LOW_BRACKET, 2.0 - LOW_BRACKET, ENERGY_TOL)
}

/// Energy of the level with quantum number `n` in `region`.
///
/// ```
/// use pendulum_bsh::classical::{oscillation_action, EnergyRegion};
/// use pendulum_bsh::spectrum::solve_level;
/// let e = solve_level(3, 0.4, EnergyRegion::Oscillation).unwrap();
/// assert!((oscillation_action(e).unwrap() - 1.2).abs() < 1e-10);
/// ```
pub fn solve_level(n: u64, hbar: f64, region: EnergyRegion) -> Result<f64> {
    let target = n as f64 * hbar;
    match region {
        EnergyRegion::StableEquilibrium if n == 0 => Ok(0.0),
        EnergyRegion::Oscillation if target < SEPARATRIX_FULL_ACTION => {
            solve_oscillation(target, oscillation_action)
        }
        EnergyRegion::RotationPlus | EnergyRegion::RotationMinus => {
            solve_rotation(target, rotation_action)
        }
        _ => Err(Error::NoLevel { target }),
    }
}

fn collision(hbar: f64) -> Option<HbarRejection> {
    let n = (SEPARATRIX_FULL_ACTION / hbar).round();
    if n >= 1.0 && (n * hbar - SEPARATRIX_FULL_ACTION).abs() < COLLISION_TOL {
        return Some(HbarRejection::OscillationCollision {
            n: n as u64,
            action: n * hbar,
        });
    }
    let m = (SEPARATRIX_BRANCH_ACTION / hbar).round();
    if m >= 1.0 && (m * hbar - SEPARATRIX_BRANCH_ACTION).abs() < COLLISION_TOL {
        return Some(HbarRejection::RotationCollision {
            m: m as u64,
            action: m * hbar,
        });
    }
    None
}

/// Checks that ħ yields a lattice with `N ≥ 1` and no separatrix collision.
/// Returns `(N, M)`.
pub fn validate_hbar(hbar: f64) -> std::result::Result<(u64, u64), HbarRejection> {
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(HbarRejection::NotPositive);
    }
    if let Some(reason) = collision(hbar) {
        return Err(reason);
    }
    let top = top_quantum_number(hbar);
    if top < 1 {
        return Err(HbarRejection::EmptyLattice { top });
    }
    Ok((top, first_rotation_number(top)))
}

/// Solves every level with `n ≤ N` below the separatrix and `M ≤ m ≤ m_max`
/// on both rotation branches.
pub fn build_spectrum(hbar: f64, m_max: u64) -> Result<Spectrum> {
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::RejectedHbar {
            hbar,
            reason: HbarRejection::NotPositive,
        });
    }
    if let Some(reason) = collision(hbar) {
        return Err(Error::RejectedHbar { hbar, reason });
    }
    let top = top_quantum_number(hbar);
    let first_rotation = first_rotation_number(top);
    if m_max < first_rotation {
        return Err(Error::InvalidArgument(format!(
            "m_max = {m_max} is below the first rotation number {first_rotation}"
        )));
    }

    let mut levels = Vec::new();
    for n in 0..=top {
        let region = if n == 0 {
            EnergyRegion::StableEquilibrium
        } else {
            EnergyRegion::Oscillation
        };
        let energy = solve_level(n, hbar, region)?;
        levels.push(QuantumLevel { n, region, energy });
    }
    let rotation: Vec<(u64, f64)> = (first_rotation..=m_max)
        .map(|m| Ok((m, solve_level(m, hbar, EnergyRegion::RotationPlus)?)))
        .collect::<Result<_>>()?;
    for region in [EnergyRegion::RotationPlus, EnergyRegion::RotationMinus] {
        levels.extend(rotation.iter().map(|&(m, energy)| QuantumLevel { n: m, region, energy }));
    }

    for level in &levels {
        if (level.energy - 2.0).abs() < SEPARATRIX_BAND {
            return Err(Error::RejectedHbar {
                hbar,
                reason: HbarRejection::SeparatrixEnergy {
                    n: level.n,
                    energy: level.energy,
                },
            });
        }
    }
    let epsilon_gap = levels
        .iter()
        .map(|l| (l.energy - 2.0).abs())
        .fold(f64::INFINITY, f64::min)
        / 2.0;

    Ok(Spectrum {
        hbar,
        top,
        first_rotation,
        m_max,
        levels,
        epsilon_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::component_action;
    use crate::elliptic::quad;
    use crate::holonomy::is_bohr_sommerfeld;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn quad_action(e: f64) -> f64 {
        let m = e / 2.0;
        4.0 * e / PI
            * quad(|t| t.cos().powi(2) / (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 1e-13)
                .unwrap()
    }

    #[test]
    fn lattice_bounds_for_hbar_04() {
        let s = build_spectrum(0.4, 6).unwrap();
        assert_eq!((s.top(), s.first_rotation()), (6, 4));
        let plus: Vec<u64> = s.levels().iter().filter(|l| l.region == EnergyRegion::RotationPlus).map(|l| l.n).collect();
        assert_eq!(plus, vec![4, 5, 6]);
        for m in 4..=6 {
            let a = s.rotation_level(EnergyRegion::RotationPlus, m).unwrap().energy;
            let b = s.rotation_level(EnergyRegion::RotationMinus, m).unwrap().energy;
            assert_eq!(a, b);
        }
    }

    #[test]
    fn large_hbar_keeps_only_singular_torus() {
        let s = build_spectrum(3.0, 4).unwrap();
        assert_eq!(s.top(), 0);
        assert_eq!(s.oscillation().count(), 1);
    }

    #[test]
    fn first_rotation_number_parity() {
        assert_eq!(first_rotation_number(6), 4);
        assert_eq!(first_rotation_number(5), 3);
        assert_eq!(first_rotation_number(0), 1);
    }

    #[test]
    fn rotation_lattice_starts_above_branch_action() {
        for &hbar in &[0.1, 0.3, 0.4, 0.5, 0.7, 1.1, 2.0] {
            let top = top_quantum_number(hbar);
            let m = first_rotation_number(top);
            assert!(m as f64 * hbar > 4.0 / PI, "hbar {hbar}");
            assert!((m - 1) as f64 * hbar < 4.0 / PI, "hbar {hbar}");
        }
    }

    #[test]
    fn solve_level_against_quadrature_oracle() {
        let e = solve_level(3, 0.4, EnergyRegion::Oscillation).unwrap();
        let (mut lo, mut hi) = (1e-9, 2.0 - 1e-9);
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if quad_action(mid) < 1.2 {
                lo = mid
            } else {
                hi = mid
            }
        }
        assert!((e - 0.5 * (lo + hi)).abs() < 1e-10);
    }

    #[test]
    fn solve_level_edges() {
        assert_eq!(solve_level(0, 0.4, EnergyRegion::StableEquilibrium).unwrap(), 0.0);
        let delta = 1e-6;
        let near = solve_level(1, 8.0 / PI - delta, EnergyRegion::Oscillation).unwrap();
        assert!(near < 2.0 && near > 1.99);
        assert!(solve_level(7, 0.4, EnergyRegion::Oscillation).is_err());
        assert!(solve_level(3, 0.4, EnergyRegion::RotationPlus).is_err());
        assert!(solve_level(1, 0.4, EnergyRegion::Separatrix).is_err());
    }

    #[test]
    fn validate_hbar_cases() {
        assert_eq!(validate_hbar(0.4), Ok((6, 4)));
        assert!(matches!(
            validate_hbar(8.0 / PI / 3.0),
            Err(HbarRejection::OscillationCollision { n: 3, .. })
        ));
        assert!(matches!(validate_hbar(10.0), Err(HbarRejection::EmptyLattice { top: 0 })));
        assert_eq!(validate_hbar(-1.0), Err(HbarRejection::NotPositive));
        assert!(matches!(
            validate_hbar(4.0 / PI / 5.0),
            Err(HbarRejection::OscillationCollision { n: 10, .. })
        ));
    }

    #[test]
    fn build_rejects_collisions_and_short_carriers() {
        assert!(matches!(build_spectrum(8.0 / PI / 3.0, 32), Err(Error::RejectedHbar { .. })));
        assert!(matches!(build_spectrum(0.4, 3), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn levels_are_bohr_sommerfeld_and_gap_is_empty() {
        for &hbar in &[0.3, 0.4, 0.5, 0.7] {
            let s = build_spectrum(hbar, 16).unwrap();
            let eps = s.epsilon_gap();
            assert!(eps > 0.0);
            for l in s.levels() {
                assert_eq!(is_bohr_sommerfeld(l.energy, hbar, 1e-8), Some(l.n));
                assert!((l.energy - 2.0).abs() >= 2.0 * eps * (1.0 - 1e-12));
                if l.energy > 0.0 {
                    assert!((component_action(l.energy).unwrap() - l.n as f64 * hbar).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn energies_increase_within_each_region() {
        let s = build_spectrum(0.3, 20).unwrap();
        for region in [EnergyRegion::Oscillation, EnergyRegion::RotationPlus, EnergyRegion::RotationMinus] {
            let e: Vec<f64> = s.levels().iter().filter(|l| l.region == region).map(|l| l.energy).collect();
            assert!(e.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
