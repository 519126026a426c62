//! Reduction by the symmetry `ζ(p, α) = (-p, -α)` with the trivial lift to the
//! line bundle.
//!
//! The orbit space is the semialgebraic variety `C(τ) = 0, |τ₁| ≤ 1, τ₃ ≥ 0`
//! cut out by the invariants `τ = (cos α, p sin α, H)`. Reduced Bohr-Sommerfeld
//! levels reconstruct the even part of the unreduced spectrum.

use crate::classical::{
    angle, hamiltonian, oscillation_action, period, rotation_action, EnergyRegion, PhasePoint,
    SEPARATRIX_BAND, SEPARATRIX_BRANCH_ACTION,
};
use crate::error::{domain, Error, Result};
use crate::ode;
use crate::spectrum::{solve_oscillation, solve_rotation, validate_hbar, QuantumLevel, Spectrum};
use rand::Rng;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::f64::consts::TAU;

/// Step of the centered differences used by [`FnField`].
pub const FD_STEP: f64 = 1e-6;

/// Largest energy mismatch accepted when matching reduced and unreduced levels.
pub const RECONSTRUCTION_TOL: f64 = 1e-8;

/// A point of the orbit space in invariant coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedPoint {
    pub tau1: f64,
    pub tau2: f64,
    pub tau3: f64,
}

impl ReducedPoint {
    pub const fn new(tau1: f64, tau2: f64, tau3: f64) -> Self {
        Self { tau1, tau2, tau3 }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.tau1, self.tau2, self.tau3]
    }

    pub fn from_array(t: [f64; 3]) -> Self {
        Self::new(t[0], t[1], t[2])
    }

    /// Inequalities of the variety: `|τ₁| ≤ 1` and `τ₃ ≥ 0`.
    pub fn satisfies_inequalities(&self) -> bool {
        self.tau1.abs() <= 1.0 && self.tau3 >= 0.0
    }
}

/// Image of the stable equilibrium.
pub const STABLE_POINT: ReducedPoint = ReducedPoint::new(1.0, 0.0, 0.0);

/// Image of the unstable equilibrium.
pub const UNSTABLE_POINT: ReducedPoint = ReducedPoint::new(-1.0, 0.0, 2.0);

/// The symmetry `ζ(p, α) = (-p, -α)`.
pub fn zeta(pt: PhasePoint) -> PhasePoint {
    pt.reflect()
}

/// Invariants `(cos α, p sin α, H)`.
///
/// ```
/// use pendulum_bsh::classical::PhasePoint;
/// use pendulum_bsh::reduction::orbit_map;
/// let t = orbit_map(PhasePoint::new(1.0, std::f64::consts::FRAC_PI_2));
/// assert!((t.tau1).abs() < 1e-15 && t.tau2 == 1.0 && t.tau3 == 1.5);
/// ```
pub fn orbit_map(pt: PhasePoint) -> ReducedPoint {
    let (p, a) = (pt.p(), pt.alpha());
    ReducedPoint::new(a.cos(), p * a.sin(), hamiltonian(pt))
}

/// `C(τ) = ½τ₂² - (τ₃ + τ₁ - 1)(1 - τ₁²)`.
pub fn casimir(tau: [f64; 3]) -> f64 {
    let [t1, t2, t3] = tau;
    0.5 * t2 * t2 - (t3 + t1 - 1.0) * (1.0 - t1 * t1)
}

/// Analytic gradient of [`casimir`].
pub fn casimir_gradient(tau: [f64; 3]) -> [f64; 3] {
    let [t1, t2, t3] = tau;
    [
        -(1.0 - t1 * t1) + 2.0 * t1 * (t3 + t1 - 1.0),
        t2,
        -(1.0 - t1 * t1),
    ]
}

/// A smooth function on the invariant space `ℝ³`.
pub trait ScalarField {
    fn value(&self, tau: [f64; 3]) -> f64;

    /// Gradient; centered differences with step [`FD_STEP`] unless overridden.
    fn gradient(&self, tau: [f64; 3]) -> [f64; 3] {
        let mut g = [0.0; 3];
        for (i, gi) in g.iter_mut().enumerate() {
            let (mut up, mut down) = (tau, tau);
            up[i] += FD_STEP;
            down[i] -= FD_STEP;
            *gi = (self.value(up) - self.value(down)) / (2.0 * FD_STEP);
        }
        g
    }
}

/// A closure viewed as a field with finite-difference gradient.
pub struct FnField<F>(pub F);

impl<F: Fn([f64; 3]) -> f64> ScalarField for FnField<F> {
    fn value(&self, tau: [f64; 3]) -> f64 {
        (self.0)(tau)
    }
}

/// Polynomial in `τ₁, τ₂, τ₃` keyed by exponent triples.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    terms: BTreeMap<[u32; 3], f64>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(c, [0, 0, 0])
    }

    /// The coordinate `τ_{i+1}`.
    pub fn variable(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(1.0, e)
    }

    pub fn monomial(c: f64, exponents: [u32; 3]) -> Self {
        let mut p = Self::zero();
        p.add_term(exponents, c);
        p
    }

    fn add_term(&mut self, e: [u32; 3], c: f64) {
        let slot = self.terms.entry(e).or_insert(0.0);
        *slot += c;
        if *slot == 0.0 {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &f64)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, *c);
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, s * c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2]], x * y);
            }
        }
        out
    }

    /// `∂/∂τ_{i+1}`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut d = *e;
                d[i] -= 1;
                out.add_term(d, c * e[i] as f64);
            }
        }
        out
    }

    pub fn eval(&self, tau: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                c * tau[0].powi(e[0] as i32) * tau[1].powi(e[1] as i32) * tau[2].powi(e[2] as i32)
            })
            .sum()
    }

    /// The Casimir `C` as a polynomial.
    pub fn casimir() -> Self {
        let [t1, t2, t3] = [0, 1, 2].map(Self::variable);
        let one = Self::constant(1.0);
        let rho = t3.add(&t1).sub(&one);
        t2.mul(&t2).scale(0.5).sub(&rho.mul(&one.sub(&t1.mul(&t1))))
    }

    /// Poisson bracket `⟨∇F × ∇G, ∇C⟩` as a polynomial.
    pub fn bracket(&self, other: &Self) -> Self {
        let f = [0, 1, 2].map(|i| self.derivative(i));
        let g = [0, 1, 2].map(|i| other.derivative(i));
        let c = Self::casimir();
        let dc = [0, 1, 2].map(|i| c.derivative(i));
        let cross = [
            f[1].mul(&g[2]).sub(&f[2].mul(&g[1])),
            f[2].mul(&g[0]).sub(&f[0].mul(&g[2])),
            f[0].mul(&g[1]).sub(&f[1].mul(&g[0])),
        ];
        cross
            .iter()
            .zip(dc.iter())
            .fold(Self::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
    }

    /// Random polynomial with `terms` monomials of total degree at most
    /// `max_degree` and coefficients uniform in `[-1, 1]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, max_degree: u32, terms: usize) -> Self {
        let mut p = Self::zero();
        for _ in 0..terms {
            let a = rng.gen_range(0..=max_degree);
            let b = rng.gen_range(0..=max_degree - a);
            let c = rng.gen_range(0..=max_degree - a - b);
            p.add_term([a, b, c], rng.gen_range(-1.0..=1.0));
        }
        p
    }
}

impl ScalarField for Polynomial {
    fn value(&self, tau: [f64; 3]) -> f64 {
        self.eval(tau)
    }

    fn gradient(&self, tau: [f64; 3]) -> [f64; 3] {
        [0, 1, 2].map(|i| self.derivative(i).eval(tau))
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `{F, G}(τ) = ⟨∇F × ∇G, ∇C⟩`.
///
/// ```
/// use pendulum_bsh::reduction::{bracket, Polynomial};
/// let (t1, t3) = (Polynomial::variable(0), Polynomial::variable(2));
/// assert!((bracket(&t3, &t1, [0.0, 1.0, 1.5]) - 1.0).abs() < 1e-15);
/// ```
pub fn bracket<F: ScalarField + ?Sized, G: ScalarField + ?Sized>(f: &F, g: &G, tau: [f64; 3]) -> f64 {
    let x = cross(f.gradient(tau), g.gradient(tau));
    let c = casimir_gradient(tau);
    x[0] * c[0] + x[1] * c[1] + x[2] * c[2]
}

/// Vector field of the reduced Hamiltonian `H̃ = τ₃`.
pub fn reduced_vector_field(tau: [f64; 3]) -> [f64; 3] {
    let [t1, t2, t3] = tau;
    [-t2, 2.0 * t1 * (t3 + t1 - 1.0) + t1 * t1 - 1.0, 0.0]
}

/// Pulls `τ` back onto `C = 0` by one Newton step in `(τ₁, τ₂)`, keeping `τ₃`.
fn project_to_casimir(tau: &mut [f64; 3]) {
    let c = casimir(*tau);
    let g = casimir_gradient(*tau);
    let norm2 = g[0] * g[0] + g[1] * g[1];
    if norm2 > 1e-14 {
        tau[0] -= c * g[0] / norm2;
        tau[1] -= c * g[1] / norm2;
    }
}

/// Follows the reduced flow for time `t`, projecting onto the Casimir level.
pub fn reduced_flow(tau0: ReducedPoint, t: f64, tol: f64) -> Result<ReducedPoint> {
    let y = ode::integrate(|t: &[f64; 3]| reduced_vector_field(*t), tau0.to_array(), t, tol, project_to_casimir)?;
    Ok(ReducedPoint::from_array(y))
}

fn check_regular(e: f64) -> Result<()> {
    if e > 0.0 && e.is_finite() && (e - 2.0).abs() >= SEPARATRIX_BAND {
        Ok(())
    } else {
        Err(domain("e", e, "reduced orbits are regular away from 0 and 2"))
    }
}

/// Reduced action: half the oscillation action below 2, one branch action above.
pub fn reduced_action(e: f64) -> Result<f64> {
    check_regular(e)?;
    if e < 2.0 {
        Ok(0.5 * oscillation_action(e)?)
    } else {
        rotation_action(e)
    }
}

/// Period of the reduced orbit: `T/2` below 2, `T±` above.
pub fn reduced_period(e: f64) -> Result<f64> {
    check_regular(e)?;
    let t = period(e)?;
    Ok(if e < 2.0 { 0.5 * t } else { t })
}

/// Point of the fundamental domain over `τ`, with `α ∈ [0, π]`.
fn lift(tau: ReducedPoint) -> Result<PhasePoint> {
    let p2 = 2.0 * (tau.tau3 + tau.tau1 - 1.0);
    if !(tau.tau1.abs() <= 1.0) || p2 < -1e-12 {
        return Err(domain("tau1", tau.tau1, "point lies outside the orbit space"));
    }
    let p = p2.max(0.0).sqrt();
    let p = if tau.tau2 < 0.0 { -p } else { p };
    Ok(PhasePoint::new(p, tau.tau1.acos()))
}

/// Reduced angle, conjugate to [`reduced_action`] and advancing by `2π`
/// per reduced period. Computed from `τ₁` and the sign of `τ₂`.
pub fn reduced_angle(tau: ReducedPoint) -> Result<f64> {
    check_regular(tau.tau3)?;
    let pt = lift(tau)?;
    let theta = angle(pt)?;
    Ok(if tau.tau3 < 2.0 { (2.0 * theta).rem_euclid(TAU) } else { theta })
}

/// Whether `pt` lies in `Δ = {p > 0} ∪ {p = 0, α ∈ [0, π]}`.
pub fn in_fundamental_domain(pt: PhasePoint) -> bool {
    pt.p() > 0.0 || (pt.p() == 0.0 && ((0.0..=std::f64::consts::PI).contains(&pt.alpha()) || pt.alpha() == -std::f64::consts::PI))
}

/// The member of `{pt, ζ(pt)}` lying in the fundamental domain.
pub fn fundamental_representative(pt: PhasePoint) -> PhasePoint {
    if in_fundamental_domain(pt) {
        pt
    } else {
        zeta(pt)
    }
}

/// Coordinate chart of the reduced one-form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Chart {
    /// `|τ₁| < 1`.
    U1,
    /// `τ₁ ≠ 0` and `τ₁ + τ₃ > 1`.
    U2,
}

const CHART_MARGIN: f64 = 1e-12;

/// The reduced connection one-form in `chart`, evaluated on `tangent`.
pub fn reduced_one_form(tau: ReducedPoint, tangent: [f64; 3], chart: Chart) -> Result<f64> {
    let [t1, t2, t3] = tau.to_array();
    match chart {
        Chart::U1 => {
            let w = 1.0 - t1 * t1;
            if !(w > CHART_MARGIN) {
                return Err(domain("tau1", t1, "outside chart U1"));
            }
            Ok(-t2 / w * tangent[0])
        }
        Chart::U2 => {
            let rho = t1 + t3 - 1.0;
            if !(rho > CHART_MARGIN) || t1.abs() < CHART_MARGIN {
                return Err(domain("tau1", t1, "outside chart U2"));
            }
            Ok((2.0 * rho * tangent[1] - t2 * tangent[0] - t2 * tangent[2]) / (2.0 * t1 * rho))
        }
    }
}

/// The lift of the symmetry to the line bundle: `+1` or `-1` on fibers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Representation {
    Even,
    Odd,
}

impl Representation {
    pub fn sign(self) -> i8 {
        match self {
            Self::Even => 1,
            Self::Odd => -1,
        }
    }
}

impl Serialize for Representation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.sign())
    }
}

/// A reduced Bohr-Sommerfeld level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedLevel {
    pub k: u64,
    pub energy: f64,
    pub region: EnergyRegion,
    pub representation: Representation,
}

/// Solves `Ĩ(e) = target` on whichever side of the separatrix holds it.
pub(crate) fn solve_reduced(target: f64) -> Result<(f64, EnergyRegion)> {
    if target == 0.0 {
        Ok((0.0, EnergyRegion::StableEquilibrium))
    } else if target < SEPARATRIX_BRANCH_ACTION {
        let e = solve_oscillation(target, |e| Ok(0.5 * oscillation_action(e)?))?;
        Ok((e, EnergyRegion::Oscillation))
    } else {
        Ok((solve_rotation(target, rotation_action)?, EnergyRegion::RotationPlus))
    }
}

pub(crate) fn checked_hbar(hbar: f64) -> Result<()> {
    validate_hbar(hbar).map(|_| ()).map_err(|reason| Error::RejectedHbar { hbar, reason })
}

/// Levels `Ĩ(e) = kħ` for `k = 0..=k_max`.
///
/// ```
/// use pendulum_bsh::reduction::reduced_spectrum;
/// let levels = reduced_spectrum(0.4, 4).unwrap();
/// assert_eq!(levels[0].energy, 0.0);
/// assert_eq!(levels.len(), 5);
/// ```
pub fn reduced_spectrum(hbar: f64, k_max: u64) -> Result<Vec<ReducedLevel>> {
    checked_hbar(hbar)?;
    let mut out = Vec::new();
    for k in 0..=k_max {
        match solve_reduced(k as f64 * hbar) {
            Ok((energy, region)) => out.push(ReducedLevel {
                k,
                energy,
                region,
                representation: Representation::Even,
            }),
            Err(Error::NoLevel { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

pub(crate) fn match_level(k: u64, energy: f64, partner: Option<&QuantumLevel>) -> Result<Option<QuantumLevel>> {
    let Some(level) = partner else { return Ok(None) };
    let mismatch = (level.energy - energy).abs();
    if mismatch > RECONSTRUCTION_TOL {
        return Err(Error::Reconstruction { k, mismatch });
    }
    Ok(Some(*level))
}

/// Unreduced levels recovered from even reduced levels: `k ↦ n = 2k` below
/// the separatrix and `k ↦ σ_k⁺` above. Rotation levels beyond `m_max` are dropped.
pub fn reconstruct_even(levels: &[ReducedLevel], spectrum: &Spectrum) -> Result<Vec<QuantumLevel>> {
    let mut out = Vec::new();
    for level in levels {
        if level.representation != Representation::Even {
            return Err(Error::InvalidArgument(format!("level {} is not from the even representation", level.k)));
        }
        let partner = match level.region {
            EnergyRegion::RotationPlus | EnergyRegion::RotationMinus => {
                if level.k > spectrum.m_max() {
                    continue;
                }
                spectrum.rotation_level(EnergyRegion::RotationPlus, level.k)
            }
            _ => spectrum.oscillation_level(2 * level.k),
        };
        match match_level(level.k, level.energy, partner)? {
            Some(q) => out.push(q),
            None => return Err(Error::Reconstruction { k: level.k, mismatch: f64::INFINITY }),
        }
    }
    Ok(out)
}

/// Reduced lowering matrix on the basis `σ̃_0..σ̃_K`: `σ̃_k ↦ c̃_k σ̃_{k-1}`
/// with `c̃_0 = 0` and `c̃_k = 1` otherwise. Raising is its transpose.
pub fn reduced_lowering(levels: &[ReducedLevel]) -> nalgebra::DMatrix<f64> {
    let n = levels.len();
    let mut m = nalgebra::DMatrix::zeros(n, n);
    for j in 1..n {
        m[(j - 1, j)] = 1.0;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{flow, reference_point};
    use crate::elliptic::quad;
    use crate::spectrum::build_spectrum;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn orbit_map_examples() {
        assert_eq!(orbit_map(PhasePoint::new(0.0, 0.0)), STABLE_POINT);
        let t = orbit_map(PhasePoint::new(0.0, PI));
        assert!(close(t.tau1, -1.0, 1e-15) && close(t.tau2, 0.0, 1e-15) && close(t.tau3, 2.0, 1e-15));
        let t = orbit_map(PhasePoint::new(1.0, FRAC_PI_2));
        assert!(close(t.tau1, 0.0, 1e-15) && t.tau2 == 1.0 && t.tau3 == 1.5);
        let pt = PhasePoint::new(0.7, -2.1);
        assert_eq!(orbit_map(pt), orbit_map(zeta(pt)));
    }

    #[test]
    fn casimir_examples() {
        assert_eq!(casimir([1.0, 0.0, 0.0]), 0.0);
        assert_eq!(casimir([0.0, 1.0, 1.5]), 0.0);
        assert_eq!(casimir([0.0, 1.0, 0.0]), 1.5);
        let p = Polynomial::casimir();
        for tau in [[0.3, -0.2, 1.1], [-0.9, 0.4, 2.5]] {
            assert!(close(p.eval(tau), casimir(tau), 1e-14));
            let g = casimir_gradient(tau);
            let fd = FnField(casimir).gradient(tau);
            for i in 0..3 {
                assert!(close(g[i], fd[i], 1e-8));
            }
        }
    }

    #[test]
    fn bracket_examples() {
        let [t1, t2, t3] = [0, 1, 2].map(Polynomial::variable);
        let at = [0.0, 1.0, 1.5];
        assert_eq!(bracket(&t3, &t1, at), 1.0);
        assert_eq!(bracket(&t1, &t2, at), -1.0);
        let f = Polynomial::monomial(0.7, [2, 1, 0]).add(&t3);
        assert_eq!(bracket(&f, &f, [0.2, -0.3, 0.9]), 0.0);
        // The polynomial bracket agrees with pointwise evaluation.
        assert!(close(t3.bracket(&t1).eval(at), 1.0, 1e-15));
    }

    #[test]
    fn flow_of_tau3_matches_vector_field() {
        let [t1, t2, t3] = [0, 1, 2].map(Polynomial::variable);
        let tau = [0.3, 0.5, 1.2];
        let v = reduced_vector_field(tau);
        assert!(close(bracket(&t1, &t3, tau), v[0], 1e-14));
        assert!(close(bracket(&t2, &t3, tau), v[1], 1e-14));
        assert!(close(bracket(&t3, &t3, tau), v[2], 1e-14));
    }

    #[test]
    fn singular_points_are_fixed() {
        for p in [STABLE_POINT, UNSTABLE_POINT] {
            assert_eq!(reduced_flow(p, 5.0, 1e-10).unwrap(), p);
        }
    }

    #[test]
    fn reduced_flow_is_equivariant() {
        let start = reference_point(1.0).unwrap();
        let lhs = orbit_map(flow(start, 0.7, 1e-12).unwrap());
        let rhs = reduced_flow(orbit_map(start), 0.7, 1e-12).unwrap();
        for (a, b) in lhs.to_array().iter().zip(rhs.to_array()) {
            assert!(close(*a, b, 1e-6));
        }
    }

    #[test]
    fn reduced_period_closes_orbit() {
        for e in [1.0, 3.0] {
            let start = orbit_map(flow(reference_point(e).unwrap(), 0.3, 1e-12).unwrap());
            let back = reduced_flow(start, reduced_period(e).unwrap(), 1e-12).unwrap();
            for (a, b) in back.to_array().iter().zip(start.to_array()) {
                assert!(close(*a, b, 1e-7), "e = {e}");
            }
        }
        assert!(close(reduced_period(1.0).unwrap(), period(1.0).unwrap() / 2.0, 1e-15));
    }

    #[test]
    fn reduced_action_identities() {
        for e in [0.1, 1.0, 1.9] {
            assert!(close(reduced_action(e).unwrap(), oscillation_action(e).unwrap() / 2.0, 1e-15));
        }
        for e in [2.5, 10.0] {
            assert_eq!(reduced_action(e).unwrap(), rotation_action(e).unwrap());
        }
        assert!(close(reduced_action(2.0 - 1e-8).unwrap(), 4.0 / PI, 1e-5));
        assert!(close(reduced_action(2.0 + 1e-8).unwrap(), 4.0 / PI, 1e-5));
        assert!(reduced_action(0.0).is_err());
        assert!(reduced_action(2.0).is_err());
    }

    #[test]
    fn reduced_action_against_quadrature() {
        let e = 1.3;
        let oracle = 2.0 * e / PI
            * quad(|t| t.cos().powi(2) / (1.0 - e / 2.0 * t.sin().powi(2)).sqrt(), 0.0, FRAC_PI_2, 1e-13).unwrap();
        assert!(close(reduced_action(e).unwrap(), oracle, 1e-10));
    }

    #[test]
    fn reduced_angle_advances_uniformly() {
        for e in [0.8, 1.7, 3.0] {
            let start = reference_point(e).unwrap();
            let pt = flow(start, 0.21, 1e-12).unwrap();
            let dt = 0.3 * reduced_period(e).unwrap();
            let later = flow(pt, dt, 1e-12).unwrap();
            let d = (reduced_angle(orbit_map(later)).unwrap() - reduced_angle(orbit_map(pt)).unwrap()).rem_euclid(TAU);
            assert!(close(d, 0.3 * TAU, 1e-6), "e = {e}: {d}");
        }
    }

    #[test]
    fn fundamental_domain_examples() {
        let r = fundamental_representative(PhasePoint::new(-1.0, 0.3));
        assert_eq!((r.p(), r.alpha()), (1.0, -0.3));
        let r = fundamental_representative(PhasePoint::new(1.0, 0.3));
        assert_eq!((r.p(), r.alpha()), (1.0, 0.3));
        let r = fundamental_representative(PhasePoint::new(0.0, -FRAC_PI_2));
        assert_eq!((r.p(), r.alpha()), (0.0, FRAC_PI_2));
        assert!(in_fundamental_domain(PhasePoint::new(0.0, PI)));
    }

    #[test]
    fn one_form_charts_agree_and_pull_back() {
        let pt = PhasePoint::new(0.9, 0.6);
        let tau = orbit_map(pt);
        let (dp, da) = (0.37, -0.52);
        let h = 1e-6;
        let up = orbit_map(PhasePoint::new(pt.p() + h * dp, pt.alpha() + h * da)).to_array();
        let down = orbit_map(PhasePoint::new(pt.p() - h * dp, pt.alpha() - h * da)).to_array();
        let push = [0, 1, 2].map(|i| (up[i] - down[i]) / (2.0 * h));
        let u1 = reduced_one_form(tau, push, Chart::U1).unwrap();
        let u2 = reduced_one_form(tau, push, Chart::U2).unwrap();
        assert!(close(u1, u2, 1e-9));
        assert!(close(u1, pt.p() * da, 1e-8));
        assert!(reduced_one_form(STABLE_POINT, push, Chart::U1).is_err());
        assert_eq!(reduced_one_form(ReducedPoint::new(0.5, 0.0, 1.0), [1.0, 0.0, 0.0], Chart::U1).unwrap(), 0.0);
    }

    #[test]
    fn one_form_loop_integral_is_reduced_action() {
        for e in [1.0_f64, 3.0] {
            let tau0 = orbit_map(PhasePoint::new((2.0 * (e - 1.0)).sqrt(), FRAC_PI_2));
            let rhs = |y: &[f64; 4]| {
                let tau = ReducedPoint::new(y[0], y[1], y[2]);
                let v = reduced_vector_field([y[0], y[1], y[2]]);
                let chart = if y[0].abs() < 0.5 { Chart::U1 } else { Chart::U2 };
                let w = reduced_one_form(tau, v, chart).unwrap_or(f64::NAN);
                [v[0], v[1], v[2], w]
            };
            let y = ode::integrate(rhs, [tau0.tau1, tau0.tau2, tau0.tau3, 0.0], reduced_period(e).unwrap(), 1e-12, |_| {}).unwrap();
            assert!(close(y[3], TAU * reduced_action(e).unwrap(), 1e-7), "e = {e}: {}", y[3]);
        }
    }

    #[test]
    fn reduced_spectrum_examples() {
        let hbar = 0.4;
        let levels = reduced_spectrum(hbar, 6).unwrap();
        assert_eq!(levels[0].energy, 0.0);
        let s = build_spectrum(hbar, 8).unwrap();
        for l in &levels {
            if l.region == EnergyRegion::Oscillation {
                assert!(close(l.energy, s.oscillation_level(2 * l.k).unwrap().energy, 1e-10));
            } else if l.region == EnergyRegion::RotationPlus {
                assert!(close(l.energy, s.rotation_level(EnergyRegion::RotationPlus, l.k).unwrap().energy, 1e-10));
            }
        }
        assert!(reduced_spectrum(-0.4, 3).is_err());
    }

    #[test]
    fn even_reconstruction() {
        let hbar = 0.4;
        let s = build_spectrum(hbar, 5).unwrap();
        let levels = reduced_spectrum(hbar, 7).unwrap();
        let rec = reconstruct_even(&levels, &s).unwrap();
        let ns: Vec<_> = rec.iter().map(|q| (q.n, q.region)).collect();
        assert_eq!(
            ns,
            vec![
                (0, EnergyRegion::StableEquilibrium),
                (2, EnergyRegion::Oscillation),
                (4, EnergyRegion::Oscillation),
                (6, EnergyRegion::Oscillation),
                (4, EnergyRegion::RotationPlus),
                (5, EnergyRegion::RotationPlus),
            ]
        );
        let mut bad = levels.clone();
        bad[1].energy += 1e-6;
        assert!(matches!(reconstruct_even(&bad, &s), Err(Error::Reconstruction { k: 1, .. })));
    }

    #[test]
    fn polynomial_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = Polynomial::random(&mut rng, 3, 5);
        let g = Polynomial::random(&mut rng, 3, 5);
        let tau = [0.2, -0.7, 1.3];
        assert!(close(f.mul(&g).eval(tau), f.eval(tau) * g.eval(tau), 1e-13));
        let fd = FnField(|t| f.eval(t)).gradient(tau);
        for (a, b) in f.gradient(tau).iter().zip(fd) {
            assert!(close(*a, b, 1e-7));
        }
        assert!(f.degree() <= 3);
        assert!(f.sub(&f).terms().next().is_none());
    }

    #[test]
    fn reduced_ladder_shape() {
        let levels = reduced_spectrum(0.4, 3).unwrap();
        let a = reduced_lowering(&levels);
        assert_eq!(a[(0, 1)], 1.0);
        assert_eq!(a.column(0).sum(), 0.0);
        assert_eq!(a.transpose()[(1, 0)], 1.0);
    }
}
